//! Least-squares fit of the small-time expansion
//! `Tr sign(D) e^{−t|D|} = η + Σ_l (A_l + B_l log t)·t^{2l+2}`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::action::{tail_bound, CutoffFunction};
use crate::error::{Error, Result};
use crate::spectra::WeightedSpectrum;

/// Fits whose design matrix has a larger 2-norm condition number are
/// rejected.
pub const MAX_CONDITION: f64 = 1e10;

/// Allowed truncation error of each sampled trace.
pub const TRACE_TRUNCATION_TOL: f64 = 1e-12;

/// Number of `(A_l, B_l)` pairs kept by default.
pub const DEFAULT_ORDERS: usize = 2;

/// Ten evenly spaced times from 0.5 down to 0.05.
pub fn default_grid() -> Vec<f64> {
    (0..10).map(|i| 0.5 - 0.05 * i as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeatTraceExpansion {
    pub eta: f64,
    /// `(A_l, B_l)` for `l = 0, 1, …`
    pub coefficients: Vec<(f64, f64)>,
    pub grid: Vec<f64>,
    pub traces: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub condition: f64,
    pub truncation_bound: f64,
}

/// `Σ mult·sign(λ)·e^{−t|λ|}` and the matching absolute sum.
pub fn sign_trace(s: &WeightedSpectrum, t: f64) -> (f64, f64) {
    s.weighted_sum(|x| match x.partial_cmp(&0.0) {
        Some(std::cmp::Ordering::Greater) => (-t * x).exp(),
        Some(std::cmp::Ordering::Less) => -(t * x).exp(),
        _ => 0.0,
    })
}

fn validate_grid(grid: &[f64], params: usize) -> Result<()> {
    if grid.len() < 6 || grid.len() <= params {
        return Err(Error::InvalidGrid(format!(
            "{} points, need at least {}",
            grid.len(),
            6.max(params + 1)
        )));
    }
    if !grid.iter().all(|&t| t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidGrid("times must lie in (0, 1]".into()));
    }
    if !grid.windows(2).all(|w| w[0] > w[1]) {
        return Err(Error::InvalidGrid("times must decrease strictly".into()));
    }
    Ok(())
}

/// Fit with the default number of orders.
pub fn fit_bismut_freed(s: &WeightedSpectrum, t_grid: &[f64]) -> Result<HeatTraceExpansion> {
    fit_bismut_freed_orders(s, t_grid, DEFAULT_ORDERS)
}

pub fn fit_bismut_freed_orders(
    s: &WeightedSpectrum,
    t_grid: &[f64],
    orders: usize,
) -> Result<HeatTraceExpansion> {
    let params = 1 + 2 * orders;
    validate_grid(t_grid, params)?;

    // e^{−t|λ|} is the exp_even cutoff at scale 1/t
    let envelope = CutoffFunction::exp_even();
    let t_min = t_grid[t_grid.len() - 1];
    let truncation_bound = tail_bound(s, &envelope, 1.0 / t_min);
    if truncation_bound > TRACE_TRUNCATION_TOL {
        return Err(Error::TruncationTooTight {
            lambda_max: s.lambda_max(),
            lambda: 1.0 / t_min,
            tail: truncation_bound,
            allowed: TRACE_TRUNCATION_TOL,
        });
    }

    let traces: Vec<f64> = t_grid.iter().map(|&t| sign_trace(s, t).0).collect();
    let design = DMatrix::from_fn(t_grid.len(), params, |i, j| {
        let t = t_grid[i];
        if j == 0 {
            1.0
        } else {
            let l = (j - 1) / 2;
            let power = t.powi(2 * l as i32 + 2);
            if (j - 1) % 2 == 0 {
                power
            } else {
                power * t.ln()
            }
        }
    });
    let svd = design.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditionedFit(condition));
    }
    let rhs = DVector::from_column_slice(&traces);
    let coef = svd
        .solve(&rhs, 0.0)
        .map_err(|_| Error::IllConditionedFit(condition))?;
    let fitted = &design * &coef;
    let residuals: Vec<f64> = (0..traces.len()).map(|i| traces[i] - fitted[i]).collect();
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let coefficients = (0..orders)
        .map(|l| (coef[1 + 2 * l], coef[2 + 2 * l]))
        .collect();
    Ok(HeatTraceExpansion {
        eta: coef[0],
        coefficients,
        grid: t_grid.to_vec(),
        traces,
        residuals,
        max_residual,
        condition,
        truncation_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{
        circle_eigenvalues, scale_multiplicity, torus_eigenvalues, CircleDirac, SpinStructure,
        TorusAngle, TorusDirac,
    };
    use num_rational::Ratio;

    fn doubled(a: i64, n: i64, d: i64, lambda_max: f64) -> WeightedSpectrum {
        let c = CircleDirac::from_ints(a, n, d).unwrap();
        scale_multiplicity(&circle_eigenvalues(&c, lambda_max).unwrap(), Ratio::from_integer(2))
            .unwrap()
    }

    #[test]
    fn recovers_g3_value() {
        let s = doubled(3, 1, 2, 900.0);
        let fit = fit_bismut_freed(&s, &default_grid()).unwrap();
        assert!((fit.eta - 4.0 / 3.0).abs() < 1e-3, "{}", fit.eta);
        assert!(fit.condition < MAX_CONDITION);
    }

    #[test]
    fn recovers_g4_value() {
        let s = doubled(4, 1, 2, 900.0);
        let fit = fit_bismut_freed(&s, &default_grid()).unwrap();
        assert!((fit.eta - 1.5).abs() < 1e-3);
    }

    #[test]
    fn symmetric_torus_has_zero_trace() {
        let d = TorusDirac::new(TorusAngle::Right, SpinStructure::all_half());
        let s = torus_eigenvalues(&d, 60.0).unwrap();
        let grid: Vec<f64> = (0..6).map(|i| 1.0 - 0.05 * i as f64).collect();
        let fit = fit_bismut_freed_orders(&s, &grid, 1).unwrap();
        assert!(fit.eta.abs() < 1e-6, "{}", fit.eta);
    }

    #[test]
    fn grid_validation() {
        let s = doubled(3, 1, 2, 900.0);
        assert!(matches!(
            fit_bismut_freed(&s, &[0.5, 0.4, 0.3]),
            Err(Error::InvalidGrid(_))
        ));
        let up: Vec<f64> = default_grid().into_iter().rev().collect();
        assert!(fit_bismut_freed(&s, &up).is_err());
        let mut big = default_grid();
        big[0] = 1.5;
        assert!(fit_bismut_freed(&s, &big).is_err());
    }

    #[test]
    fn truncation_checked() {
        let s = doubled(3, 1, 2, 50.0);
        assert!(matches!(
            fit_bismut_freed(&s, &default_grid()),
            Err(Error::TruncationTooTight { .. })
        ));
    }

    #[test]
    fn nearly_coincident_times_are_ill_conditioned() {
        let s = doubled(3, 1, 2, 900.0);
        let grid: Vec<f64> = (0..8).map(|i| 0.5 - 1e-7 * i as f64).collect();
        assert!(matches!(
            fit_bismut_freed(&s, &grid),
            Err(Error::IllConditionedFit(_))
        ));
    }
}
