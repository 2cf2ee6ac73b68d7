//! Heat traces and eta invariants of circle and Bieberbach Dirac operators.

mod fit;
mod heat;
mod invariant;

pub use fit::{
    default_grid, fit_bismut_freed, fit_bismut_freed_orders, sign_trace, HeatTraceExpansion,
    DEFAULT_ORDERS, MAX_CONDITION, TRACE_TRUNCATION_TOL,
};
pub use heat::{canonical_beta, heat_trace_circle, sign_heat_trace_circle};
pub use invariant::{
    eta_bieberbach, eta_circle, eta_hurwitz_oracle, hurwitz_zeta_at_zero, published_eta,
    EtaReport,
};
