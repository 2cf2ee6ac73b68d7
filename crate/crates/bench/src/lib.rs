//! Shared workloads for the benchmarks.

use bieberbach_core::{
    admissible_spin_structures, CircleDirac, ManifoldId, SpinStructure, TorusAngle, TorusDirac,
};

/// One admissible spin structure per manifold, asymmetric where possible.
pub fn representative_cases() -> Vec<(ManifoldId, SpinStructure)> {
    ManifoldId::ALL
        .iter()
        .map(|&m| (m, admissible_spin_structures(m)[0]))
        .collect()
}

/// Tori on every standard angle with the all-half spin structure.
pub fn standard_tori() -> Vec<TorusDirac> {
    TorusAngle::STANDARD
        .iter()
        .map(|&a| TorusDirac::new(a, SpinStructure::all_half()))
        .collect()
}

pub fn sample_circle() -> CircleDirac {
    CircleDirac::from_ints(6, 7, 2).expect("valid circle")
}
