//! Cutoff functions and their even/odd parts.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity};
use crate::summation::NeumaierSum;

/// Relative accuracy demanded of numerically computed moments.
pub const MOMENT_REL_TOL: f64 = 1e-12;

/// Piecewise-linear cutoff through sample points, zero outside the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedCutoff {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TabulatedCutoff {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidTable(format!(
                "{} abscissae but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidTable("need at least two samples".into()));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidTable("abscissae must increase strictly".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("non-finite sample".into()));
        }
        Ok(Self { xs, ys })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Radius outside of which the function vanishes.
    pub fn support_radius(&self) -> f64 {
        self.xs[0].abs().max(self.xs[self.xs.len() - 1].abs())
    }

    /// Whether the function is continuous on ℝ, i.e. vanishes at both ends
    /// of the grid.
    pub fn is_continuous(&self) -> bool {
        self.ys[0] == 0.0 && self.ys[self.ys.len() - 1] == 0.0
    }

    /// Total variation of `f'`: the sum of slope jumps, counting the zero
    /// slope outside the grid.
    pub fn slope_variation(&self) -> f64 {
        let mut slopes = vec![0.0];
        slopes.extend(
            self.xs
                .windows(2)
                .zip(self.ys.windows(2))
                .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])),
        );
        slopes.push(0.0);
        slopes.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    /// Kinks of `f(x)` and `f(−x)` folded onto `[0, ∞)`.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.xs.iter().map(|x| x.abs()).collect();
        pts.push(0.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    pub fn max_abs(&self) -> f64 {
        self.ys.iter().fold(0.0, |m, y| m.max(y.abs()))
    }

    /// Pointwise linear combination on the merged grid.
    pub fn combine(&self, a: f64, other: &TabulatedCutoff, b: f64) -> Result<Self> {
        let mut xs: Vec<f64> = self.xs.iter().chain(&other.xs).copied().collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        // keep the support edges sharp
        let ys = xs
            .iter()
            .map(|&x| a * self.eval(x) + b * other.eval(x))
            .collect();
        Self::new(xs, ys)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CutoffKind {
    /// `e^{−x²}`
    Gaussian,
    /// `e^{−|x|}`
    ExpEven,
    /// `sign(x)·e^{−|x|}`, with `sign(0) = 0`.
    ExpOdd,
    Tabulated(TabulatedCutoff),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    /// `∫_ℝ f_e(x) dx`
    pub line: f64,
    /// `∫₀^∞ f_e(ρ) ρ² dρ`
    pub radial_second: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutoffFunction {
    pub kind: CutoffKind,
    pub declared_moments: Option<Moments>,
    /// Value at 0⁺ of the even profile `φ` in `f_o(x) = sign(x)·φ(|x|)`.
    pub phi0: Option<f64>,
}

impl CutoffFunction {
    pub fn gaussian() -> Self {
        Self {
            kind: CutoffKind::Gaussian,
            declared_moments: Some(Moments {
                line: PI.sqrt(),
                radial_second: PI.sqrt() / 4.0,
            }),
            phi0: Some(0.0),
        }
    }

    pub fn exp_even() -> Self {
        Self {
            kind: CutoffKind::ExpEven,
            declared_moments: Some(Moments {
                line: 2.0,
                radial_second: 2.0,
            }),
            phi0: Some(0.0),
        }
    }

    pub fn exp_odd() -> Self {
        Self {
            kind: CutoffKind::ExpOdd,
            declared_moments: Some(Moments {
                line: 0.0,
                radial_second: 0.0,
            }),
            phi0: Some(1.0),
        }
    }

    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Ok(Self::from_table(TabulatedCutoff::new(xs, ys)?))
    }

    pub fn from_table(table: TabulatedCutoff) -> Self {
        Self {
            kind: CutoffKind::Tabulated(table),
            declared_moments: None,
            phi0: None,
        }
    }

    /// Parses the CLI spelling of the built-in kinds.
    pub fn from_name(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "gaussian" | "gauss" => Some(Self::gaussian()),
            "exp_even" => Some(Self::exp_even()),
            "exp_odd" => Some(Self::exp_odd()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            CutoffKind::Gaussian => "gaussian",
            CutoffKind::ExpEven => "exp_even",
            CutoffKind::ExpOdd => "exp_odd",
            CutoffKind::Tabulated(_) => "tabulated",
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            CutoffKind::Gaussian => (-x * x).exp(),
            CutoffKind::ExpEven => (-x.abs()).exp(),
            CutoffKind::ExpOdd => {
                if x == 0.0 {
                    0.0
                } else {
                    x.signum() * (-x.abs()).exp()
                }
            }
            CutoffKind::Tabulated(t) => t.eval(x),
        }
    }

    pub fn even_part(&self, x: f64) -> f64 {
        match &self.kind {
            CutoffKind::Gaussian | CutoffKind::ExpEven => self.eval(x),
            CutoffKind::ExpOdd => 0.0,
            CutoffKind::Tabulated(t) => 0.5 * (t.eval(x) + t.eval(-x)),
        }
    }

    pub fn odd_part(&self, x: f64) -> f64 {
        match &self.kind {
            CutoffKind::Gaussian | CutoffKind::ExpEven => 0.0,
            CutoffKind::ExpOdd => self.eval(x),
            CutoffKind::Tabulated(t) => 0.5 * (t.eval(x) - t.eval(-x)),
        }
    }

    pub fn parity(&self) -> Parity {
        match &self.kind {
            CutoffKind::Gaussian | CutoffKind::ExpEven => Parity::Even,
            CutoffKind::ExpOdd => Parity::Odd,
            CutoffKind::Tabulated(t) => {
                let pts = t.breakpoints();
                let odd_zero = pts.iter().all(|&x| self.odd_part(x) == 0.0);
                let even_zero = pts.iter().all(|&x| self.even_part(x) == 0.0);
                match (odd_zero, even_zero) {
                    (true, _) => Parity::Even,
                    (false, true) => Parity::Odd,
                    _ => Parity::Mixed,
                }
            }
        }
    }

    /// Even profile value at 0⁺ of the odd part.
    pub fn odd_profile_at_zero(&self) -> f64 {
        self.phi0.unwrap_or_else(|| self.odd_part(f64::MIN_POSITIVE))
    }

    /// Truncation factor `K` used when the caller does not supply one:
    /// spectra must reach `K·Λ`.
    pub fn default_tail_factor(&self) -> f64 {
        match &self.kind {
            CutoffKind::Gaussian => 12.0,
            CutoffKind::ExpEven | CutoffKind::ExpOdd => 48.0,
            CutoffKind::Tabulated(t) => t.support_radius(),
        }
    }

    /// Upper bound for `∫_x^∞ u^{d−1} sup_{|v|≥u} |f(v)| du`, in closed form
    /// for the built-in kinds.
    pub fn tail_integral(&self, dimension: u32, x: f64) -> f64 {
        let x = x.max(0.0);
        match &self.kind {
            CutoffKind::Gaussian => {
                let g = (-x * x).exp();
                match dimension {
                    // erfc(x)·√π/2 ≤ e^{−x²}/(2x) and ≤ √π/2
                    0 | 1 => {
                        if x > 1.0 {
                            g / (2.0 * x)
                        } else {
                            PI.sqrt() / 2.0
                        }
                    }
                    2 => g / 2.0,
                    _ => (x * x + 1.0) * g / 2.0,
                }
            }
            CutoffKind::ExpEven | CutoffKind::ExpOdd => {
                let g = (-x).exp();
                match dimension {
                    0 | 1 => g,
                    2 => (x + 1.0) * g,
                    _ => (x * x + 2.0 * x + 2.0) * g,
                }
            }
            CutoffKind::Tabulated(t) => {
                if x >= t.support_radius() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// `∫_ℝ f_e(x) dx`.
    pub fn line_moment(&self) -> Result<f64> {
        if let Some(m) = self.declared_moments {
            return Ok(m.line);
        }
        Ok(2.0 * self.radial_moment(0)?)
    }

    /// `∫₀^∞ f_e(ρ) ρ² dρ`.
    pub fn radial_second_moment(&self) -> Result<f64> {
        if let Some(m) = self.declared_moments {
            return Ok(m.radial_second);
        }
        self.radial_moment(2)
    }

    /// `∫₀^∞ f_e(ρ) ρ^power dρ` by quadrature, ignoring declared values.
    pub fn radial_moment(&self, power: i32) -> Result<f64> {
        let integrand = |r: f64| self.even_part(r) * r.powi(power);
        match &self.kind {
            CutoffKind::Tabulated(t) => {
                let pts = t.breakpoints();
                let mut acc = NeumaierSum::new();
                for w in pts.windows(2) {
                    acc.add(integrate(integrand, w[0], w[1], MOMENT_REL_TOL, 1e-300)?.value);
                }
                Ok(acc.value())
            }
            _ => Ok(integrate_to_infinity(integrand, MOMENT_REL_TOL)?.value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts_reconstruct() {
        let t = CutoffFunction::tabulated(vec![-2.0, -0.5, 1.0, 3.0], vec![0.1, 2.0, -1.0, 0.5])
            .unwrap();
        for f in [
            CutoffFunction::gaussian(),
            CutoffFunction::exp_even(),
            CutoffFunction::exp_odd(),
            t,
        ] {
            for x in [-2.5, -1.3, -0.2, 0.4, 0.9, 2.2] {
                let sum = f.even_part(x) + f.odd_part(x);
                assert!((sum - f.eval(x)).abs() < 1e-15, "{} at {x}", f.name());
            }
        }
    }

    #[test]
    fn odd_kind_conventions() {
        let f = CutoffFunction::exp_odd();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.odd_profile_at_zero(), 1.0);
        assert_eq!(f.parity(), Parity::Odd);
        assert_eq!(f.even_part(0.7), 0.0);
    }

    #[test]
    fn declared_moments_match_quadrature() {
        for f in [
            CutoffFunction::gaussian(),
            CutoffFunction::exp_even(),
            CutoffFunction::exp_odd(),
        ] {
            let m = f.declared_moments.unwrap();
            let q0 = 2.0 * f.radial_moment(0).unwrap();
            let q2 = f.radial_moment(2).unwrap();
            assert!((q0 - m.line).abs() <= 1e-12 * m.line.abs().max(1.0), "{}", f.name());
            assert!((q2 - m.radial_second).abs() <= 1e-12 * m.radial_second.abs().max(1.0));
        }
    }

    #[test]
    fn tabulated_tent_moments() {
        // tent of height 1 on [−1, 1]: ∫ = 1, ∫₀¹ (1−ρ)ρ² = 1/12
        let f = CutoffFunction::tabulated(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!((f.line_moment().unwrap() - 1.0).abs() < 1e-14);
        assert!((f.radial_second_moment().unwrap() - 1.0 / 12.0).abs() < 1e-14);
        assert_eq!(f.parity(), Parity::Even);
        assert_eq!(f.tail_integral(3, 1.0), 0.0);
        assert!(f.tail_integral(3, 0.5).is_infinite());
        let CutoffKind::Tabulated(t) = &f.kind else { unreachable!() };
        assert!(t.is_continuous());
        assert_eq!(t.slope_variation(), 4.0);
    }

    #[test]
    fn tail_integrals_bound_quadrature() {
        for f in [CutoffFunction::gaussian(), CutoffFunction::exp_even()] {
            for d in 1..=3 {
                for x in [1.5, 3.0, 6.0] {
                    let q = integrate_to_infinity(
                        |u| (u + x).powi(d as i32 - 1) * f.eval(u + x).abs(),
                        1e-12,
                    )
                    .unwrap()
                    .value;
                    assert!(f.tail_integral(d, x) >= q * (1.0 - 1e-9), "{} d={d} x={x}", f.name());
                }
            }
        }
    }

    #[test]
    fn table_validation() {
        assert!(CutoffFunction::tabulated(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(CutoffFunction::tabulated(vec![0.0], vec![1.0]).is_err());
        assert!(CutoffFunction::tabulated(vec![0.0, 1.0], vec![1.0]).is_err());
    }
}
