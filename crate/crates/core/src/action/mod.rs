//! Truncated spectral-action sums `Σ mult·f(λ/Λ)` and their leading terms.

mod cutoff;

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::Serialize;

pub use cutoff::{CutoffFunction, CutoffKind, Moments, Parity, TabulatedCutoff, MOMENT_REL_TOL};

use crate::error::{Error, Result};
use crate::spectra::{
    circle_eigenvalues, decomposition, ratio_to_f64, scale_multiplicity, CircleDirac, ManifoldId,
    SpinStructure, TorusAngle, WeightedSpectrum,
};

/// Largest admissible truncation tail relative to the sum of |terms|.
pub const TAIL_REL_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActionValue {
    pub value: f64,
    pub lambda: f64,
    pub spectrum_descriptor: String,
}

impl ActionValue {
    fn zero(lambda: f64, descriptor: String) -> Self {
        Self {
            value: 0.0,
            lambda,
            spectrum_descriptor: descriptor,
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    Ok(())
}

/// Bound on `Σ_{|λ| > R} mult·|f(λ/Λ)|` from a Weyl-type count
/// `N(λ) ≤ C·λ^d`, with `C` twice the count observed up to `R`.
pub(crate) fn tail_bound(s: &WeightedSpectrum, f: &CutoffFunction, lambda: f64) -> f64 {
    let d = s.growth_dimension().max(1);
    let r = s.lambda_max();
    let x = r / lambda;
    let count = ratio_to_f64(s.total_multiplicity()).max(1.0);
    let c = 2.0 * count / r.powi(d as i32);
    let edge = r.powi(d as i32) * envelope(f, x);
    let bulk = f64::from(d) * lambda.powi(d as i32) * f.tail_integral(d, x);
    c * (edge + bulk)
}

fn envelope(f: &CutoffFunction, x: f64) -> f64 {
    match &f.kind {
        CutoffKind::Gaussian => (-x * x).exp(),
        CutoffKind::ExpEven | CutoffKind::ExpOdd => (-x).exp(),
        CutoffKind::Tabulated(t) => {
            if x >= t.support_radius() {
                0.0
            } else {
                t.max_abs()
            }
        }
    }
}

/// `Σ mult·f(λ/Λ)` with the cutoff's default tail factor.
pub fn truncated_action(
    s: &WeightedSpectrum,
    f: &CutoffFunction,
    lambda: f64,
) -> Result<ActionValue> {
    truncated_action_with(s, f, lambda, f.default_tail_factor())
}

/// `Σ mult·f(λ/Λ)`, requiring `s.lambda_max ≥ tail_factor·Λ` and an
/// analytic tail estimate below [`TAIL_REL_TOL`] of the absolute sum.
/// Terms are accumulated in ascending `|λ|` with compensation.
pub fn truncated_action_with(
    s: &WeightedSpectrum,
    f: &CutoffFunction,
    lambda: f64,
    tail_factor: f64,
) -> Result<ActionValue> {
    check_lambda(lambda)?;
    let (value, abs_sum) = s.weighted_sum(|x| f.eval(x / lambda));
    let tail = tail_bound(s, f, lambda);
    let allowed = TAIL_REL_TOL * abs_sum;
    let radius_ok = s.lambda_max() >= tail_factor * lambda * (1.0 - 1e-12);
    if !radius_ok || (tail > allowed && tail > 0.0) {
        return Err(Error::TruncationTooTight {
            lambda_max: s.lambda_max(),
            lambda,
            tail,
            allowed,
        });
    }
    Ok(ActionValue {
        value,
        lambda,
        spectrum_descriptor: s.descriptor().to_string(),
    })
}

/// Poisson leading term of the torus action, `(8π/sin φ)·Λ³·∫₀^∞ f_e(ρ)ρ²dρ`.
pub fn torus_leading_term(
    angle: &TorusAngle,
    f: &CutoffFunction,
    lambda: f64,
) -> Result<ActionValue> {
    check_lambda(lambda)?;
    let m2 = f.radial_second_moment()?;
    Ok(ActionValue {
        value: 8.0 * PI / angle.sin_phi() * lambda.powi(3) * m2,
        lambda,
        spectrum_descriptor: format!("leading[Sp3[{angle}]]"),
    })
}

/// Poisson leading term of the circle action, `(Λ/α)·∫_ℝ f_e`. The odd part
/// has no term of order Λ.
pub fn circle_leading_term(
    d: &CircleDirac,
    f: &CutoffFunction,
    lambda: f64,
) -> Result<ActionValue> {
    check_lambda(lambda)?;
    Ok(ActionValue {
        value: lambda / d.alpha_f64() * f.line_moment()?,
        lambda,
        spectrum_descriptor: format!("leading[{d}]"),
    })
}

/// `S(G, Λ) − S(T³, Λ)/n`, evaluated from the circle pieces of the
/// decomposition: `2·Σ_{added} f − (2/n)·Σ_{removed} f`. Exactly zero for
/// the cases whose spectrum is a rescaled torus spectrum.
pub fn action_difference(
    m: ManifoldId,
    s: &SpinStructure,
    f: &CutoffFunction,
    lambda: f64,
    lambda_max: f64,
) -> Result<ActionValue> {
    check_lambda(lambda)?;
    let dec = decomposition(m, s)?;
    let descriptor = format!("S({m}{s}) - S(T3)/{}", dec.group_order());
    let (Some(added), Some(removed)) = (dec.added, dec.removed) else {
        return Ok(ActionValue::zero(lambda, descriptor));
    };
    let factor = lambda_max / lambda;
    let two = Ratio::from_integer(2);
    let add = scale_multiplicity(&circle_eigenvalues(&added, lambda_max)?, two)?;
    let rem = scale_multiplicity(
        &circle_eigenvalues(&removed, lambda_max)?,
        Ratio::new(2, dec.group_order()),
    )?;
    let a = truncated_action_with(&add, f, lambda, factor)?;
    let b = truncated_action_with(&rem, f, lambda, factor)?;
    Ok(ActionValue {
        value: a.value - b.value,
        lambda,
        spectrum_descriptor: descriptor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{
        admissible_spin_structures, torus_eigenvalues, union_spectrum, Delta, HalfShift, TorusDirac,
    };
    use std::f64::consts::PI;

    fn circle(a: i64, n: i64, d: i64) -> CircleDirac {
        CircleDirac::from_ints(a, n, d).unwrap()
    }

    #[test]
    fn circle_gaussian_matches_poisson() {
        let s = circle_eigenvalues(&circle(1, 1, 2), 60.0).unwrap();
        let v = truncated_action(&s, &CutoffFunction::gaussian(), 5.0).unwrap();
        assert!((v.value - 5.0 * PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn zero_table_gives_zero() {
        let f = CutoffFunction::tabulated(vec![-1.0, 1.0], vec![0.0, 0.0]).unwrap();
        let s = circle_eigenvalues(&circle(1, 1, 2), 10.0).unwrap();
        assert_eq!(truncated_action(&s, &f, 2.0).unwrap().value, 0.0);
    }

    #[test]
    fn torus_gaussian_matches_leading_term() {
        let d = TorusDirac::new(TorusAngle::Right, crate::SpinStructure::all_half());
        let s = torus_eigenvalues(&d, 60.0).unwrap();
        let v = truncated_action(&s, &CutoffFunction::gaussian(), 5.0).unwrap();
        let lead = torus_leading_term(&TorusAngle::Right, &CutoffFunction::gaussian(), 5.0)
            .unwrap()
            .value;
        // 2π^{3/2}·125
        assert!((lead - 2.0 * PI.powf(1.5) * 125.0).abs() < 1e-9);
        assert!(((v.value - lead) / lead).abs() < 1e-6);
    }

    #[test]
    fn truncation_guard() {
        let s = circle_eigenvalues(&circle(1, 1, 2), 30.0).unwrap();
        let r = truncated_action(&s, &CutoffFunction::gaussian(), 5.0);
        assert!(matches!(r, Err(Error::TruncationTooTight { .. })));
        // exponential tails need a much larger radius than e^{−12}
        let s = circle_eigenvalues(&circle(1, 1, 2), 60.0).unwrap();
        let r = truncated_action_with(&s, &CutoffFunction::exp_even(), 5.0, 12.0);
        assert!(matches!(r, Err(Error::TruncationTooTight { .. })));
        assert!(truncated_action(&s, &CutoffFunction::gaussian(), 0.0).is_err());
    }

    #[test]
    fn leading_term_examples() {
        let g = CutoffFunction::gaussian();
        let t = torus_leading_term(&TorusAngle::Right, &g, 1.0).unwrap().value;
        assert!((t - 2.0 * PI.powf(1.5)).abs() < 1e-12);
        let odd = torus_leading_term(&TorusAngle::Right, &CutoffFunction::exp_odd(), 1.0).unwrap();
        assert_eq!(odd.value, 0.0);
        let h = torus_leading_term(&TorusAngle::TwoThirdsPi, &g, 1.0).unwrap().value;
        assert!((t / h - 3f64.sqrt() / 2.0).abs() < 1e-14);

        let c = circle_leading_term(&circle(1, 1, 2), &g, 5.0).unwrap().value;
        assert!((c - 5.0 * PI.sqrt()).abs() < 1e-13);
        for b in [0, 1, 3] {
            let c = circle_leading_term(&circle(2, b, 2), &g, 5.0).unwrap().value;
            assert!((c - 2.5 * PI.sqrt()).abs() < 1e-13);
        }
        let c = circle_leading_term(&circle(3, 1, 2), &CutoffFunction::exp_odd(), 5.0).unwrap();
        assert_eq!(c.value, 0.0);
    }

    #[test]
    fn tabulated_leading_term_uses_quadrature() {
        let f = CutoffFunction::tabulated(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        let t = torus_leading_term(&TorusAngle::Right, &f, 2.0).unwrap().value;
        assert!((t - 8.0 * PI * 8.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_cases_differ_by_exact_zero() {
        use HalfShift::*;
        let s = crate::SpinStructure::new(Half, Half, Half, Delta::Plus);
        let v = action_difference(ManifoldId::G2, &s, &CutoffFunction::exp_odd(), 3.0, 1.0).unwrap();
        assert_eq!(v.value, 0.0);
        for s in admissible_spin_structures(ManifoldId::G6) {
            let v = action_difference(ManifoldId::G6, &s, &CutoffFunction::gaussian(), 3.0, 1.0)
                .unwrap();
            assert_eq!(v.value, 0.0);
        }
    }

    #[test]
    fn g3_even_difference_vanishes() {
        use HalfShift::*;
        let s = crate::SpinStructure::new(Half, Zero, Zero, Delta::Plus);
        let v = action_difference(ManifoldId::G3, &s, &CutoffFunction::gaussian(), 10.0, 120.0)
            .unwrap();
        assert!(v.value.abs() < 1e-8, "{}", v.value);
    }

    #[test]
    fn g4_odd_difference_approaches_eta() {
        use HalfShift::*;
        let s = crate::SpinStructure::new(Half, Zero, Zero, Delta::Plus);
        let f = CutoffFunction::exp_odd();
        let mut last = f64::INFINITY;
        for lambda in [10.0, 25.0, 50.0, 100.0] {
            let v = action_difference(ManifoldId::G4, &s, &f, lambda, 48.0 * lambda).unwrap();
            let err = (v.value - 1.5).abs();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn additive_under_union() {
        let f = CutoffFunction::gaussian();
        let a = circle_eigenvalues(&circle(2, 1, 2), 60.0).unwrap();
        let b = circle_eigenvalues(&circle(3, -1, 1), 60.0).unwrap();
        let u = union_spectrum(&a, &b).unwrap();
        let su = truncated_action(&u, &f, 4.0).unwrap().value;
        let sa = truncated_action(&a, &f, 4.0).unwrap().value;
        let sb = truncated_action(&b, &f, 4.0).unwrap().value;
        assert!((su - sa - sb).abs() < 1e-13 * su.abs());
    }

    #[test]
    fn linear_in_tabulated_cutoff() {
        let f = crate::action::TabulatedCutoff::new(vec![-3.0, -1.0, 0.5, 2.0], vec![0.0, 1.0, 0.3, 0.0])
            .unwrap();
        let g = crate::action::TabulatedCutoff::new(vec![-2.0, 0.0, 3.0], vec![0.0, -2.0, 0.0]).unwrap();
        let h = f.combine(2.0, &g, -0.5).unwrap();
        let s = circle_eigenvalues(&circle(1, 1, 3), 20.0).unwrap();
        let sf = truncated_action(&s, &CutoffFunction::from_table(f), 4.0).unwrap().value;
        let sg = truncated_action(&s, &CutoffFunction::from_table(g), 4.0).unwrap().value;
        let sh = truncated_action(&s, &CutoffFunction::from_table(h), 4.0).unwrap().value;
        assert!((sh - (2.0 * sf - 0.5 * sg)).abs() < 1e-12);
    }
}
