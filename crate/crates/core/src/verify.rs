//! Named property checks over the spectra, actions and eta invariants.
//! Every check returns a [`CheckReport`]; suites emit them as JSON lines.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::{action_difference, truncated_action_with, CutoffFunction, CutoffKind, Parity};
use crate::error::Result;
use crate::eta::eta_bieberbach;
use crate::spectra::{
    admissible_spin_structures, circle_eigenvalues, decomposition, ratio_to_f64,
    scale_multiplicity, subtract_spectrum, torus_eigenvalues, CircleDirac, ManifoldId, Rational,
    SpinStructure,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Flagged,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub inputs: String,
    pub status: CheckStatus,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(check_name: &str, inputs: String) -> Self {
        Self {
            check_name: check_name.to_string(),
            inputs,
            status: CheckStatus::Pass,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    fn fail(&mut self, note: String) {
        self.status = CheckStatus::Fail;
        self.notes.push(note);
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Floor applied to every analytic tolerance (roundoff of the sums).
pub const TOLERANCE_FLOOR: f64 = 1e-8;
/// Required accuracy of the extrapolated Abel limit.
pub const ODD_LIMIT_TOL: f64 = 1e-6;

/// Bound on `|Σ_{λ ∈ Sp¹_{α,β}} f_e(λ/Λ) − (Λ/α)∫f_e|`, uniform in β.
///
/// By Poisson summation the left side is `(Λ/α)|Σ_{j≠0} f̂_e(2πΛj/α) e^{…}|`.
/// - gaussian: `f̂(ω) = √π e^{−ω²/4}`, giving `(Λ/α)·2√π Σ_{j≥1} e^{−(πΛj/α)²}`.
/// - exp_even: `f̂(ω) = 2/(1+ω²) ≤ 2/ω²`, and `Σ 1/j² = π²/6` gives `α/(6Λ)`.
/// - piecewise linear, continuous: `|f̂(ω)| ≤ V/ω²` with `V` the total
///   variation of `f'`, giving `Vα/(12Λ)`.
///
/// `None` when no bound is available (odd or discontinuous cutoffs).
pub fn circle_poisson_bound(f: &CutoffFunction, lambda: f64, alpha: f64) -> Option<f64> {
    match &f.kind {
        CutoffKind::Gaussian => {
            let mut theta = 0.0;
            for j in 1..64 {
                let t = (-(PI * lambda * j as f64 / alpha).powi(2)).exp();
                theta += t;
                if t < 1e-300 {
                    break;
                }
            }
            Some(lambda / alpha * 2.0 * PI.sqrt() * theta)
        }
        CutoffKind::ExpEven => Some(alpha / (6.0 * lambda)),
        CutoffKind::ExpOdd => None,
        CutoffKind::Tabulated(t) => t
            .is_continuous()
            .then(|| t.slope_variation() * alpha / (12.0 * lambda)),
    }
}

/// Tolerance for a signed combination `Σ wᵢ S(Sp¹_{αᵢ,βᵢ})` whose leading
/// terms cancel: `max(floor, Σ |wᵢ|·bound(αᵢ))`.
pub fn combination_tolerance(
    f: &CutoffFunction,
    lambda: f64,
    pieces: &[(f64, f64)],
) -> Option<f64> {
    let mut total = 0.0;
    for &(weight, alpha) in pieces {
        total += weight.abs() * circle_poisson_bound(f, lambda, alpha)?;
    }
    Some(total.max(TOLERANCE_FLOOR))
}

fn all_cases() -> Vec<(ManifoldId, SpinStructure)> {
    ManifoldId::ALL
        .iter()
        .flat_map(|&m| admissible_spin_structures(m).into_iter().map(move |s| (m, s)))
        .collect()
}

/// Multiplicities of the torus spectrum, with the removed circle taken out
/// twice where the decomposition does so, must be divisible by the group
/// order.
pub fn check_divisibility(m: ManifoldId, s: &SpinStructure, lambda_max: f64) -> CheckReport {
    let mut report = CheckReport::new("divisibility", format!("{m} {s} lambda_max={lambda_max}"));
    let result = (|| -> Result<_> {
        let dec = decomposition(m, s)?;
        let mut torus = torus_eigenvalues(&dec.torus, lambda_max)?;
        if let Some(removed) = dec.removed {
            let circle = scale_multiplicity(
                &circle_eigenvalues(&removed, lambda_max)?,
                Rational::from_integer(2),
            )?;
            torus = subtract_spectrum(&torus, &circle)?;
        }
        Ok((dec.group_order(), torus))
    })();
    let (n, torus) = match result {
        Ok(v) => v,
        Err(e) => {
            report.fail(format!("{}: {e}", e.name()));
            return report;
        }
    };
    let mut violations = 0usize;
    for e in torus.entries() {
        let q = e.multiplicity / n;
        if !q.is_integer() {
            violations += 1;
            if violations <= 5 {
                report.notes.push(format!(
                    "eigenvalue {} has multiplicity {} not divisible by {n}",
                    e.eigenvalue, e.multiplicity
                ));
            }
        }
    }
    report.metric("divisor", n as f64);
    report.metric("eigenvalues", torus.len() as f64);
    report.metric("violations", violations as f64);
    if violations > 0 {
        report.status = CheckStatus::Fail;
    }
    report
}

/// For an even cutoff, `S(G) − S(T³)/n` must stay below the analytic
/// Poisson bound for every manifold and admissible spin structure.
pub fn check_even_invariance(f: &CutoffFunction, lambda: f64) -> CheckReport {
    let mut report = CheckReport::new("even_invariance", format!("{} lambda={lambda}", f.name()));
    if f.parity() != Parity::Even {
        report.fail(format!("cutoff {} is not even", f.name()));
        return report;
    }
    let lambda_max = f.default_tail_factor().max(1.0) * lambda;
    let rows: Vec<_> = all_cases()
        .into_par_iter()
        .map(|(m, s)| {
            let dec = decomposition(m, &s)?;
            let n = dec.group_order() as f64;
            let mut pieces = Vec::new();
            if let Some(a) = dec.added {
                pieces.push((2.0, a.alpha_f64()));
            }
            if let Some(r) = dec.removed {
                pieces.push((2.0 / n, r.alpha_f64()));
            }
            let tol = combination_tolerance(f, lambda, &pieces);
            let diff = action_difference(m, &s, f, lambda, lambda_max)?.value;
            Ok((m, s, diff, tol))
        })
        .collect::<Vec<Result<_>>>();
    let (mut max_diff, mut max_tol, mut cases) = (0.0f64, 0.0f64, 0usize);
    for row in rows {
        match row {
            Ok((m, s, diff, tol)) => {
                cases += 1;
                max_diff = max_diff.max(diff.abs());
                match tol {
                    Some(tol) => {
                        max_tol = max_tol.max(tol);
                        if !(diff.abs() <= tol) {
                            report.fail(format!("{m} {s}: |diff| = {:e} > {tol:e}", diff.abs()));
                        }
                    }
                    None => report.fail(format!("{m} {s}: no analytic tolerance for this cutoff")),
                }
            }
            Err(e) => report.fail(format!("{}: {e}", e.name())),
        }
    }
    report.metric("cases", cases as f64);
    report.metric("max_abs_diff", max_diff);
    report.metric("max_tolerance", max_tol);
    report
}

/// Neville extrapolation of `(xᵢ, yᵢ)` to `x = 0`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

/// With `f = sign(x)e^{−|x|}`, `S(G) − S(T³)/n` tends to the eta invariant
/// as Λ → ∞. The raw error must decrease along the schedule and the limit,
/// extrapolated in `Λ⁻²`, must match the formula value.
pub fn check_odd_eta_term(lambda_schedule: &[f64]) -> CheckReport {
    let mut report = CheckReport::new("odd_eta_term", format!("schedule={lambda_schedule:?}"));
    if lambda_schedule.len() < 3 || !lambda_schedule.windows(2).all(|w| w[0] < w[1]) {
        report.fail("schedule must be increasing with at least 3 values".into());
        return report;
    }
    if lambda_schedule[0] <= 0.0 {
        report.fail("schedule must be positive".into());
        return report;
    }
    let f = CutoffFunction::exp_odd();
    let xs: Vec<f64> = lambda_schedule.iter().map(|l| l.powi(-2)).collect();
    let rows: Vec<_> = all_cases()
        .into_par_iter()
        .map(|(m, s)| {
            let eta = eta_bieberbach(m, &s)?.formula;
            let diffs = lambda_schedule
                .iter()
                .map(|&l| Ok(action_difference(m, &s, &f, l, f.default_tail_factor() * l)?.value))
                .collect::<Result<Vec<f64>>>()?;
            Ok((m, s, ratio_to_f64(eta), eta.is_zero(), diffs))
        })
        .collect::<Vec<Result<_>>>();
    let (mut raw_final, mut extrapolated_err, mut cases) = (0.0f64, 0.0f64, 0usize);
    for row in rows {
        let (m, s, eta, symmetric, diffs) = match row {
            Ok(v) => v,
            Err(e) => {
                report.fail(format!("{}: {e}", e.name()));
                continue;
            }
        };
        cases += 1;
        if symmetric {
            if diffs.iter().any(|&d| d != 0.0) {
                report.fail(format!("{m} {s}: symmetric case has nonzero difference"));
            }
            continue;
        }
        let errors: Vec<f64> = diffs.iter().map(|d| (d - eta).abs()).collect();
        raw_final = raw_final.max(*errors.last().unwrap());
        if !errors.windows(2).all(|w| w[1] < w[0]) {
            report.fail(format!("{m} {s}: errors {errors:?} do not decrease"));
        }
        let limit = extrapolate_to_zero(&xs, &diffs);
        let err = (limit - eta).abs();
        extrapolated_err = extrapolated_err.max(err);
        if !(err < ODD_LIMIT_TOL) {
            report.fail(format!("{m} {s}: extrapolated {limit} vs eta {eta}"));
        }
    }
    report.metric("cases", cases as f64);
    report.metric("max_raw_final_error", raw_final);
    report.metric("max_extrapolated_error", extrapolated_err);
    report
}

/// `S(Sp¹_{1,γ}) = α·S(Sp¹_{α,β})` up to terms beyond the order-Λ one.
pub fn check_scaling_identity(
    pairs: &[(CircleDirac, Rational)],
    f: &CutoffFunction,
    lambda: f64,
) -> CheckReport {
    let mut report = CheckReport::new(
        "scaling_identity",
        format!("{} lambda={lambda} pairs={}", f.name(), pairs.len()),
    );
    if f.parity() != Parity::Even {
        report.fail(format!("cutoff {} is not even", f.name()));
        return report;
    }
    let lambda_max = f.default_tail_factor().max(1.0) * lambda;
    let mut max_diff = 0.0f64;
    for (d, gamma) in pairs {
        let alpha = d.alpha_f64();
        let result = (|| -> Result<f64> {
            let unit = CircleDirac::new(Rational::from_integer(1), *gamma)?;
            let lhs = truncated_action_with(
                &circle_eigenvalues(&unit, lambda_max)?,
                f,
                lambda,
                lambda_max / lambda,
            )?;
            let rhs = truncated_action_with(
                &circle_eigenvalues(d, lambda_max)?,
                f,
                lambda,
                lambda_max / lambda,
            )?;
            Ok(lhs.value - alpha * rhs.value)
        })();
        match result {
            Ok(diff) => {
                max_diff = max_diff.max(diff.abs());
                match combination_tolerance(f, lambda, &[(1.0, 1.0), (alpha, alpha)]) {
                    Some(tol) if diff.abs() <= tol => {}
                    Some(tol) => {
                        report.fail(format!("{d} gamma={gamma}: |diff| = {:e} > {tol:e}", diff.abs()))
                    }
                    None => report.fail(format!("{d}: no analytic tolerance for this cutoff")),
                }
            }
            Err(e) => report.fail(format!("{d} gamma={gamma}: {}: {e}", e.name())),
        }
    }
    report.metric("max_abs_diff", max_diff);
    report
}

/// Eta invariant of one case: formula and oracle must agree and the
/// extrapolated value must match them. A mismatch with the published table
/// alone is reported as flagged.
pub fn check_eta_table_entry(m: ManifoldId, s: &SpinStructure) -> CheckReport {
    let mut report = CheckReport::new("eta_table", format!("{m} {s}"));
    let rep = match eta_bieberbach(m, s) {
        Ok(r) => r,
        Err(e) => {
            report.fail(format!("{}: {e}", e.name()));
            return report;
        }
    };
    report.metric("formula", ratio_to_f64(rep.formula));
    report.metric("extrapolated", rep.extrapolated);
    report.metric("extrapolation_error", rep.extrapolation_error);
    if let Some(p) = rep.published {
        report.metric("published", ratio_to_f64(p));
    }
    if !rep.formula_matches_oracle {
        report.fail(format!("formula {} != oracle {}", rep.formula, rep.oracle));
    }
    if !rep.extrapolation_agrees {
        report.fail(format!("extrapolated {} != formula {}", rep.extrapolated, rep.formula));
    }
    if report.status == CheckStatus::Pass && rep.discrepancy_flag {
        report.status = CheckStatus::Flagged;
        report.notes.push(format!(
            "formula and oracle give {} but the published table lists {}",
            rep.formula,
            rep.published.map_or("none".into(), |p| p.to_string())
        ));
    }
    report
}

/// Circle parameters appearing in the decompositions, with representatives
/// of each β class.
pub fn case_table_circles() -> Vec<CircleDirac> {
    [
        (1, 1, 2),
        (1, 0, 1),
        (2, -1, 2),
        (2, 3, 2),
        (3, 1, 2),
        (3, -1, 1),
        (4, 1, 2),
        (4, 5, 2),
        (6, 1, 2),
        (6, 7, 2),
    ]
    .iter()
    .map(|&(a, n, d)| CircleDirac::from_ints(a, n, d).expect("valid circle"))
    .collect()
}

pub const SUITES: [&str; 6] = ["divisibility", "even", "odd", "scaling", "eta", "all"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub lambda: f64,
    pub lambda_max: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            lambda: 10.0,
            lambda_max: 20.0,
        }
    }
}

/// Runs a named suite. Reports come back grouped by check name in a fixed
/// order. `None` for an unknown suite name.
pub fn run_suite(name: &str, config: SuiteConfig) -> Option<Vec<CheckReport>> {
    let all = name == "all";
    if !SUITES.contains(&name) {
        return None;
    }
    let lambda = config.lambda;
    let mut reports = Vec::new();
    if all || name == "divisibility" {
        reports.extend(
            all_cases()
                .into_par_iter()
                .map(|(m, s)| check_divisibility(m, &s, config.lambda_max))
                .collect::<Vec<_>>(),
        );
    }
    if all || name == "eta" {
        reports.extend(
            all_cases()
                .into_par_iter()
                .map(|(m, s)| check_eta_table_entry(m, &s))
                .collect::<Vec<_>>(),
        );
    }
    if all || name == "even" {
        for f in [CutoffFunction::gaussian(), CutoffFunction::exp_even()] {
            reports.push(check_even_invariance(&f, lambda));
        }
    }
    if all || name == "odd" {
        reports.push(check_odd_eta_term(&[lambda, 2.5 * lambda, 5.0 * lambda]));
    }
    if all || name == "scaling" {
        let pairs: Vec<(CircleDirac, Rational)> = case_table_circles()
            .into_iter()
            .flat_map(|d| [(d, Rational::zero()), (d, Ratio::new(1, 2))])
            .collect();
        for f in [CutoffFunction::gaussian(), CutoffFunction::exp_even()] {
            reports.push(check_scaling_identity(&pairs, &f, lambda));
        }
    }
    Some(reports)
}
