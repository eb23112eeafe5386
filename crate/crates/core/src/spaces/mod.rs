//! Exponent bookkeeping for the `L^p → L^q` characterization, Young
//! functions and Orlicz averages, and seminorms (Hölder, BMO, Campanato,
//! Orlicz–Campanato) evaluated over explicit finite families.
//!
//! Seminorms are suprema over infinitely many cubes or pairs; everything here
//! is a maximum over a declared finite family and therefore a lower bound.

mod exponents;
mod orlicz;
mod seminorms;
mod young;

pub use exponents::{case_for_beta, exponent_data, CaseTag, ExponentData};
pub use orlicz::{orlicz_average, orlicz_average_atoms};
pub use seminorms::{
    bmo_seminorm, campanato_seminorm, holder_seminorm, holder_seminorm_all_pairs, inclusion_check, oscillation,
    orlicz_campanato_seminorm, CubeFamily, InclusionReport, PairSample,
};
pub use young::{associate_check, associate_young, bpq_check, sufficient_young, AssociateCheck, BpqReport, YoungCheck, YoungFunction};
