//! Exact Dirac spectra and the multiset operations used to compose them.

mod bieberbach;
mod circle;
mod exact;
mod spectrum;
mod spin;
mod torus;

pub use bieberbach::{bieberbach_spectrum, compose, decomposition, Decomposition};
pub use circle::{circle_eigenvalues, CircleDirac};
pub use exact::{Eigenvalue, ExactEigenvalueSq, Rational, Sign};
pub(crate) use exact::{ratio_to_f64, reduce_symmetric};
pub use spectrum::{
    scale_multiplicity, subtract_spectrum, union_spectrum, SpectrumEntry, WeightedSpectrum,
};
pub use spin::{admissible_spin_structures, is_admissible, Delta, HalfShift, ManifoldId, SpinStructure};
pub use torus::{torus_eigenvalues, TorusAngle, TorusDirac, NONSTANDARD_DENOMINATOR_LIMIT};
