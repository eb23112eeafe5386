//! `ccomm`: command-line front end for the cauchy-comm toolkit.
//!
//! Exit codes: 0 on success, 1 when a check or verified property fails,
//! 2 on usage or input errors.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cauchy_comm::dyadic::{cover_cube, cz_decompose, leaf_level_for, sparse_select, verify_sparse, DyadicShift, TreePool};
use cauchy_comm::grid::{read_grid_function, write_grid_function, GridFunction};
use cauchy_comm::lab::{norm_ratio_estimate, run_verify, Dictionary, VerifyConfig};
use cauchy_comm::operators::{apply, OperatorSpec, SelfCell};
use cauchy_comm::spaces::{
    bmo_seminorm, campanato_seminorm, exponent_data, holder_seminorm, orlicz_campanato_seminorm, CubeFamily,
    PairSample, YoungFunction,
};
use cauchy_comm::Error;

#[derive(Debug, Parser)]
#[command(name = "ccomm", version)]
#[command(about = "Cauchy-transform commutators on uniform grids: operators, dyadic tools, seminorms, checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Op {
    Cauchy,
    Commutator,
    Riesz,
    Maxfn,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Holder,
    Bmo,
    Campanato,
    Orlicz,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SelfCellArg {
    Gradient,
    Zero,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply an operator to a grid function
    Transform {
        #[arg(long)]
        op: Op,
        #[arg(long = "in")]
        input: PathBuf,
        /// Symbol file, required by the commutator
        #[arg(long)]
        b: Option<PathBuf>,
        /// Order of the Riesz potential or fractional maximal function
        #[arg(long)]
        alpha: Option<f64>,
        /// Young function for the Orlicz maximal function, e.g. `powlog:2:1`
        #[arg(long)]
        young: Option<YoungFunction>,
        #[arg(long, default_value = "gradient")]
        self_cell: SelfCellArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Seminorm of a symbol over the whole-cell cubes of its grid
    Seminorm {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        young: Option<YoungFunction>,
        #[arg(long)]
        beta: Option<f64>,
        /// Seed for sampled pairs on large grids
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
    },
    /// Calderón–Zygmund cubes of a nonnegative density at a height
    CzDecompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        height: f64,
        /// `a,b` with a, b in {0, 1/3}, or an index 0..=3
        #[arg(long, default_value = "0,0")]
        shift: DyadicShift,
        /// Root level; by default the smallest admissible one above the grid
        #[arg(long)]
        root_level: Option<i32>,
    },
    /// Sparse family of stopping cubes for |g|^p and its measured constant
    Sparse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Exponent data and regime for a pair 1 < p < 2 < q
    Exponents {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
    },
    /// Run the verification suite
    Verify {
        /// Comma-separated check names, or `all`
        #[arg(long, default_value = "all", value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bound for the commutator norm L^p -> L^q over a test dictionary
    EstimateNorm {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// `+`-joined parts: default, indicators, witness, gaussians:N, random:N
        #[arg(long, default_value = "default")]
        dict: String,
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<GridFunction, Error> {
    read_grid_function(BufReader::new(File::open(path)?))
}

fn missing(flag: &str) -> Error {
    Error::InvalidParameter(format!("missing --{flag}"))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

/// Returns whether everything that was checked holds.
fn run(cmd: Command) -> Result<bool, Error> {
    match cmd {
        Command::Transform { op, input, b, alpha, young, self_cell, out } => {
            let f = load(&input)?;
            let b = b.as_deref().map(load).transpose()?;
            let spec = match op {
                Op::Cauchy => OperatorSpec::Cauchy,
                Op::Commutator => OperatorSpec::Commutator(match self_cell {
                    SelfCellArg::Gradient => SelfCell::Gradient,
                    SelfCellArg::Zero => SelfCell::Zero,
                }),
                Op::Riesz => OperatorSpec::Riesz { alpha: alpha.ok_or_else(|| missing("alpha"))? },
                Op::Maxfn => match young {
                    Some(young) => OperatorSpec::OrliczMaximal { beta: alpha.unwrap_or(0.0), young },
                    None => OperatorSpec::FractionalMaximal { alpha: alpha.unwrap_or(0.0) },
                },
            };
            let r = apply(&spec, &f, b.as_ref())?;
            write_grid_function(&r.output, BufWriter::new(File::create(&out)?))?;
            print_json(&json!({ "output": out, "diagnostics": r.diagnostics }));
            Ok(true)
        }
        Command::Seminorm { kind, b, p, lambda, young, beta, seed } => {
            let b = load(&b)?;
            let fam = CubeFamily::aligned(b.grid());
            let value = match kind {
                Kind::Holder => {
                    holder_seminorm(&b, beta.ok_or_else(|| missing("beta"))?, &PairSample::auto(b.grid(), seed))?
                }
                Kind::Bmo => bmo_seminorm(&b, &fam)?,
                Kind::Campanato => campanato_seminorm(
                    &b,
                    p.ok_or_else(|| missing("p"))?,
                    lambda.ok_or_else(|| missing("lambda"))?,
                    &fam,
                )?,
                Kind::Orlicz => orlicz_campanato_seminorm(
                    &b,
                    young.as_ref().ok_or_else(|| missing("young"))?,
                    lambda.ok_or_else(|| missing("lambda"))?,
                    &fam,
                )?,
            };
            print_json(&json!({ "kind": format!("{kind:?}").to_lowercase(), "value": value, "family": fam.description }));
            Ok(true)
        }
        Command::CzDecompose { input, height, shift, root_level } => {
            let f = load(&input)?;
            let d = match root_level {
                Some(level) => cz_decompose(&f, height, shift, level)?,
                None => {
                    let mut level = leaf_level_for(f.grid(), shift);
                    loop {
                        match cz_decompose(&f, height, shift, level) {
                            Err(Error::RootTooSmall { needed, .. }) if needed > level => level = needed,
                            other => break other?,
                        }
                    }
                }
            };
            let props = d.check_properties();
            let cubes: Vec<_> = d
                .cubes
                .iter()
                .map(|c| json!({ "cube": c.cube.to_string(), "corner": [c.cube.corner().re, c.cube.corner().im], "side": c.cube.side(), "average": c.average }))
                .collect();
            print_json(&json!({
                "height": d.height,
                "shift": d.shift.to_string(),
                "root_level": d.root_level,
                "cell_aligned": d.cell_aligned,
                "cubes": cubes,
                "properties": props,
            }));
            Ok(props.holds())
        }
        Command::Sparse { input, p } => {
            let g = load(&input)?;
            let (shift, cover) = cover_cube(&g.grid().bounding_cube());
            let root = cover.parent();
            let leaf = leaf_level_for(g.grid(), shift).min(root.level);
            let pool = TreePool::new(root, (root.level - leaf) as u32);
            let s = sparse_select(&g, p, &pool)?;
            let v = verify_sparse(&s);
            let cubes: Vec<String> = s.cubes.iter().map(|c| c.to_string()).collect();
            print_json(&json!({ "root": root.to_string(), "max_depth": pool.max_depth, "cubes": cubes, "verification": v }));
            Ok(v.holds)
        }
        Command::Exponents { p, q } => {
            let e = exponent_data(p, q)?;
            print_json(&serde_json::to_value(e).expect("json"));
            Ok(true)
        }
        Command::Verify { suite, config, out } => {
            let config = match config {
                Some(path) => VerifyConfig::load(&path)?,
                None => VerifyConfig::default(),
            };
            let outcome = run_verify(&suite, &config, out.as_deref())?;
            for r in &outcome.reports {
                println!("{:<20} {}", r.check_name, if r.holds { "pass" } else { "FAIL" });
            }
            Ok(outcome.exit_code == 0)
        }
        Command::EstimateNorm { b, p, q, dict, seed } => {
            let b = load(&b)?;
            let dictionary = Dictionary::parse(&dict, b.grid(), seed)?;
            let r = norm_ratio_estimate(&b, p, q, &dictionary)?;
            print_json(&json!({
                "best_ratio": r.best_ratio,
                "argmax": r.argmax,
                "dictionary": dict,
                "dictionary_size": dictionary.items.len(),
                "note": "lower bound for the operator norm restricted to the grid",
            }));
            Ok(true)
        }
    }
}
