//! Lattice enumeration of the equilateral 3-torus Dirac spectrum.
//!
//! With `τ = e^{iφ}` the eigenvalues are `±√((k+ε₁)² + |l+ε₂ + τ(m+ε₃)|²)`.
//! Writing `K = 2k + 2ε₁` (and likewise `L`, `M`) turns the square into
//!
//! ```text
//! 4λ² = K² + L² + M² + 2cos(φ)·L·M
//! ```
//!
//! so for the three angles in use every eigenvalue square is an integer
//! pair `(A, B)` over a fixed denominator: `4λ² = A + B√2`. Grouping by that
//! pair is exact.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::exact::{Eigenvalue, ExactEigenvalueSq, Rational, Sign};
use super::spectrum::{SpectrumEntry, WeightedSpectrum};
use super::spin::SpinStructure;
use crate::error::{Error, Result};

/// Largest denominator used to approximate `2cos φ` for nonstandard angles.
pub const NONSTANDARD_DENOMINATOR_LIMIT: i64 = 1 << 20;

/// Snapping radius for decimal angles close to one of the standard ones.
const SNAP_TOLERANCE: f64 = 1e-12;

/// Argument of the modular parameter `τ = e^{iφ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TorusAngle {
    /// φ = π/2, the square lattice (`τ = i`).
    Right,
    /// φ = 2π/3, the hexagonal lattice.
    TwoThirdsPi,
    /// φ = π/4.
    QuarterPi,
    /// Any other angle in (0, π). `two_cos` is a rational approximation of
    /// `2cos φ` with denominator at most [`NONSTANDARD_DENOMINATOR_LIMIT`].
    Nonstandard { phi: f64, two_cos: Rational },
}

impl TorusAngle {
    pub const STANDARD: [TorusAngle; 3] =
        [TorusAngle::Right, TorusAngle::TwoThirdsPi, TorusAngle::QuarterPi];

    pub fn from_radians(phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi < PI) {
            return Err(Error::InvalidAngle(format!("{phi} is outside (0, pi)")));
        }
        for std in Self::STANDARD {
            if (phi - std.phi()).abs() < SNAP_TOLERANCE {
                return Ok(std);
            }
        }
        let two_cos = best_rational(2.0 * phi.cos(), NONSTANDARD_DENOMINATOR_LIMIT);
        Ok(TorusAngle::Nonstandard { phi, two_cos })
    }

    pub fn phi(&self) -> f64 {
        match self {
            TorusAngle::Right => FRAC_PI_2,
            TorusAngle::TwoThirdsPi => 2.0 * PI / 3.0,
            TorusAngle::QuarterPi => FRAC_PI_4,
            TorusAngle::Nonstandard { phi, .. } => *phi,
        }
    }

    pub fn sin_phi(&self) -> f64 {
        match self {
            TorusAngle::Right => 1.0,
            TorusAngle::TwoThirdsPi => 3f64.sqrt() / 2.0,
            TorusAngle::QuarterPi => std::f64::consts::FRAC_1_SQRT_2,
            TorusAngle::Nonstandard { phi, .. } => phi.sin(),
        }
    }

    pub fn cos_phi(&self) -> f64 {
        match self {
            TorusAngle::Right => 0.0,
            TorusAngle::TwoThirdsPi => -0.5,
            TorusAngle::QuarterPi => std::f64::consts::FRAC_1_SQRT_2,
            TorusAngle::Nonstandard { two_cos, .. } => two_cos.to_f64().unwrap_or(0.0) / 2.0,
        }
    }

    pub fn is_standard(&self) -> bool {
        !matches!(self, TorusAngle::Nonstandard { .. })
    }

    pub fn label(&self) -> String {
        match self {
            TorusAngle::Right => "pi/2".into(),
            TorusAngle::TwoThirdsPi => "2pi/3".into(),
            TorusAngle::QuarterPi => "pi/4".into(),
            TorusAngle::Nonstandard { phi, .. } => format!("{phi}"),
        }
    }
}

impl fmt::Display for TorusAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for TorusAngle {
    type Err = Error;

    /// Symbolic `pi/2`, `2pi/3`, `pi/4`, or a decimal number of radians.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(' ', "").as_str() {
            "pi/2" => Ok(TorusAngle::Right),
            "2pi/3" | "2*pi/3" => Ok(TorusAngle::TwoThirdsPi),
            "pi/4" => Ok(TorusAngle::QuarterPi),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::InvalidAngle(format!("cannot parse {s:?}")))
                .and_then(TorusAngle::from_radians),
        }
    }
}

/// Best rational approximation with bounded denominator (continued
/// fraction convergents).
fn best_rational(x: f64, max_den: i64) -> Rational {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i64;
        let k2 = ai.saturating_mul(k1).saturating_add(k0);
        if k2 > max_den || k2 <= 0 {
            break;
        }
        let h2 = ai * h1 + h0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-18 {
            break;
        }
        rest = 1.0 / frac;
    }
    Ratio::new(h1, k1)
}

/// Dirac operator `D³_τ` on the equilateral torus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusDirac {
    pub angle: TorusAngle,
    pub spin: SpinStructure,
}

impl TorusDirac {
    pub fn new(angle: TorusAngle, spin: SpinStructure) -> Self {
        Self {
            angle,
            spin: spin.on_torus(),
        }
    }
}

impl fmt::Display for TorusDirac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sp3[{};{}]", self.angle, self.spin)?;
        if !self.angle.is_standard() {
            write!(f, "[nonstandard]")?;
        }
        Ok(())
    }
}

/// Integer form of `4λ²·q = q(K²+L²+M²) + p·LM` (or with a √2 part).
#[derive(Clone, Copy)]
enum CrossTerm {
    /// `4λ² = K²+L²+M² + c·LM`, c integer.
    Integer(i64),
    /// `4λ² = K²+L²+M² + √2·LM`.
    Sqrt2,
    /// `4qλ² = q(K²+L²+M²) + p·LM`.
    Rational { p: i64, q: i64 },
}

impl CrossTerm {
    fn of(angle: &TorusAngle) -> Self {
        match angle {
            TorusAngle::Right => CrossTerm::Integer(0),
            TorusAngle::TwoThirdsPi => CrossTerm::Integer(-1),
            TorusAngle::QuarterPi => CrossTerm::Sqrt2,
            TorusAngle::Nonstandard { two_cos, .. } => CrossTerm::Rational {
                p: *two_cos.numer(),
                q: *two_cos.denom(),
            },
        }
    }

    fn denominator(self) -> i64 {
        match self {
            CrossTerm::Rational { q, .. } => 4 * q,
            _ => 4,
        }
    }

    #[inline]
    fn key(self, norm: i64, lm: i64) -> (i64, i64) {
        match self {
            CrossTerm::Integer(c) => (norm + c * lm, 0),
            CrossTerm::Sqrt2 => (norm, lm),
            CrossTerm::Rational { p, q } => (q * norm + p * lm, 0),
        }
    }
}

/// Counts lattice points per exact key for a fixed `K`.
fn count_slice(
    k2: i64,
    e2: i64,
    e3: i64,
    two_cos: f64,
    bound4: f64,
    cross: CrossTerm,
    lm_box: i64,
) -> HashMap<(i64, i64), u64> {
    let mut counts = HashMap::new();
    let slack = 1e-9 * bound4.max(1.0);
    // L ≡ e2 (mod 2), |L| ≤ lm_box
    let l_start = -lm_box - ((-lm_box - e2).rem_euclid(2));
    let mut l = l_start;
    while l <= lm_box {
        // M² + t·L·M + (L² + K² − bound) ≤ 0
        let c0 = (l * l + k2) as f64 - bound4;
        let disc = two_cos * two_cos * (l * l) as f64 - 4.0 * c0;
        if disc >= 0.0 {
            let root = disc.sqrt();
            let m_lo = ((-two_cos * l as f64 - root) / 2.0).floor() as i64 - 1;
            let m_hi = ((-two_cos * l as f64 + root) / 2.0).ceil() as i64 + 1;
            let mut m = m_lo - ((m_lo - e3).rem_euclid(2));
            while m <= m_hi {
                let val = (k2 + l * l + m * m) as f64 + two_cos * (l * m) as f64;
                if val <= bound4 + slack {
                    *counts.entry(cross.key(k2 + l * l + m * m, l * m)).or_insert(0) += 1;
                }
                m += 2;
            }
        }
        l += 2;
    }
    counts
}

/// Spectrum of `D³_τ` truncated at `lambda_max`. Each lattice point
/// contributes one eigenvalue `+λ` and one `−λ`; a zero mode contributes
/// multiplicity 2 at 0.
pub fn torus_eigenvalues(d: &TorusDirac, lambda_max: f64) -> Result<WeightedSpectrum> {
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(Error::NonpositiveLambdaMax(lambda_max));
    }
    let cross = CrossTerm::of(&d.angle);
    let den = cross.denominator();
    let two_cos = 2.0 * d.angle.cos_phi();
    let bound4 = 4.0 * lambda_max * lambda_max;
    let k_max = (2.0 * lambda_max).floor() as i64 + 1;
    // Q(L, M) ≥ (1 − |cos φ|)(L² + M²)
    let lm_box = (2.0 * lambda_max / (1.0 - two_cos.abs() / 2.0).sqrt()).ceil() as i64 + 1;
    let [e1, e2, e3] = d.spin.eps.map(|e| e.doubled());

    let ks: Vec<i64> = (-k_max..=k_max)
        .filter(|k| (k - e1).rem_euclid(2) == 0)
        .collect();
    let counts = ks
        .par_iter()
        .map(|&k| count_slice(k * k, e2, e3, two_cos, bound4, cross, lm_box))
        .reduce(HashMap::new, |mut acc, part| {
            for (key, c) in part {
                *acc.entry(key).or_insert(0) += c;
            }
            acc
        });

    let mut squares: Vec<(ExactEigenvalueSq, u64)> = counts
        .into_iter()
        .map(|((a, b), c)| ExactEigenvalueSq::from_scaled(a, b, den).map(|s| (s, c)))
        .collect::<Result<Vec<_>>>()?;
    squares.retain(|(s, _)| s.within(lambda_max));
    squares.sort_by_key(|x| x.0);

    let mut entries = Vec::with_capacity(2 * squares.len());
    let mult = |c: u64| -> Result<Rational> {
        Ok(Ratio::from_integer(c.to_i64().ok_or(Error::Overflow)?))
    };
    for (sq, c) in squares.iter().rev() {
        if !sq.is_zero() {
            entries.push(SpectrumEntry {
                eigenvalue: Eigenvalue::new(Sign::Negative, *sq),
                multiplicity: mult(*c)?,
            });
        }
    }
    for (sq, c) in &squares {
        if sq.is_zero() {
            entries.push(SpectrumEntry {
                eigenvalue: Eigenvalue::ZERO,
                multiplicity: mult(2 * c)?,
            });
        } else {
            entries.push(SpectrumEntry {
                eigenvalue: Eigenvalue::new(Sign::Positive, *sq),
                multiplicity: mult(*c)?,
            });
        }
    }
    Ok(WeightedSpectrum::from_sorted_unchecked(
        entries,
        lambda_max,
        d.to_string(),
        3,
    ))
}
