//! Numerical machinery around commutators of the Cauchy transform on the
//! complex plane.
//!
//! The crate is split into five layers:
//!
//! * [`grid`]: uniform discretizations of rectangles in ℂ, sampled functions,
//!   midpoint quadrature and cube-localized norms.
//! * [`dyadic`]: the four shifted dyadic grids, the one-third cover,
//!   Calderón–Zygmund stopping cubes, sparse families and the geometric
//!   cube-sum identity.
//! * [`operators`]: quadrature evaluation of the Cauchy transform, its
//!   commutator, the dyadic fractional commutator, Riesz potentials and
//!   fractional (Orlicz) maximal functions.
//! * [`spaces`]: exponent bookkeeping, Young functions and Orlicz averages,
//!   and the Hölder / BMO / Campanato / Orlicz–Campanato seminorms.
//! * [`lab`]: witnesses, growth and scaling experiments, norm-ratio
//!   estimation and the `verify` harness that emits structured reports.
//!
//! Every supremum over infinitely many cubes is replaced by an explicit
//! finite family, so seminorms and operator norms come out as lower bounds.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dyadic;
pub mod error;
pub mod grid;
pub mod lab;
pub mod operators;
pub mod spaces;
mod par;

pub use error::{Error, Result};
pub use num_complex::Complex64;
