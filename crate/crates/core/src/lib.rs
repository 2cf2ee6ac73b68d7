//! Exact Dirac spectra of the flat equilateral 3-torus and the orientable
//! Bieberbach manifolds, together with the numerical machinery used to
//! study their spectral action: truncated cutoff sums, Poisson leading
//! terms, closed-form circle heat traces and eta invariants.
//!
//! The crate is organised in four layers:
//!
//! - [`spectra`]: exact enumeration of circle, torus and Bieberbach spectra
//!   with rational multiplicities and the multiset algebra used to compose
//!   them.
//! - [`action`]: cutoff functions, compensated truncated sums and the
//!   leading terms obtained from Poisson summation.
//! - [`eta`]: heat traces, eta invariants (closed form and Hurwitz zeta
//!   oracle) and the small-time extrapolation of the sign-weighted trace.
//! - [`verify`]: named property checks producing machine-readable reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod error;
pub mod eta;
pub mod io;
pub mod quadrature;
pub mod spectra;
pub mod summation;
pub mod verify;

pub use action::{
    action_difference, circle_leading_term, torus_leading_term, truncated_action,
    truncated_action_with, ActionValue, CutoffFunction, CutoffKind, Moments,
};
pub use error::{Error, Result};
pub use eta::{
    eta_bieberbach, eta_circle, eta_hurwitz_oracle, fit_bismut_freed, heat_trace_circle,
    sign_heat_trace_circle, EtaReport, HeatTraceExpansion,
};
pub use spectra::{
    admissible_spin_structures, bieberbach_spectrum, circle_eigenvalues, scale_multiplicity,
    subtract_spectrum, torus_eigenvalues, union_spectrum, CircleDirac, Delta, Eigenvalue,
    ExactEigenvalueSq, HalfShift, ManifoldId, Rational, Sign, SpectrumEntry, SpinStructure,
    TorusAngle, TorusDirac, WeightedSpectrum,
};
pub use verify::{CheckReport, CheckStatus};
