use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

use super::exact::{ratio_to_f64, Eigenvalue, Rational};
use super::spectrum::{SpectrumEntry, WeightedSpectrum};
use crate::error::{Error, Result};

/// Rescaled circle Dirac operator with spectrum `{αk + β : k ∈ ℤ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CircleDirac {
    alpha: Rational,
    beta: Rational,
}

impl CircleDirac {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::NonpositiveAlpha(alpha.to_string()));
        }
        Ok(Self { alpha, beta })
    }

    /// Convenience constructor from `alpha` and `beta = num/den`.
    pub fn from_ints(alpha: i64, beta_num: i64, beta_den: i64) -> Result<Self> {
        Self::new(Ratio::from_integer(alpha), Ratio::new(beta_num, beta_den))
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    pub fn beta(&self) -> Rational {
        self.beta
    }

    pub fn alpha_f64(&self) -> f64 {
        ratio_to_f64(self.alpha)
    }

    pub fn beta_f64(&self) -> f64 {
        ratio_to_f64(self.beta)
    }

    pub fn eigenvalue(&self, k: i64) -> Rational {
        self.alpha * k + self.beta
    }

    /// True when 0 is an eigenvalue.
    pub fn has_zero_mode(&self) -> bool {
        (self.beta / self.alpha).is_integer()
    }
}

impl fmt::Display for CircleDirac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sp1[{},{}]", self.alpha, self.beta)
    }
}

/// All `αk + β` with `|αk + β| ≤ lambda_max`, each with multiplicity one.
pub fn circle_eigenvalues(d: &CircleDirac, lambda_max: f64) -> Result<WeightedSpectrum> {
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(Error::NonpositiveLambdaMax(lambda_max));
    }
    let alpha = d.alpha_f64();
    let beta = d.beta_f64();
    let lo = ((-lambda_max - beta) / alpha).floor() - 1.0;
    let hi = ((lambda_max - beta) / alpha).ceil() + 1.0;
    let (lo, hi) = (
        lo.to_i64().ok_or(Error::Overflow)?,
        hi.to_i64().ok_or(Error::Overflow)?,
    );
    let entries: Vec<SpectrumEntry> = (lo..=hi)
        .map(|k| Eigenvalue::from_rational(d.eigenvalue(k)))
        .filter(|e| e.square().within(lambda_max))
        .map(|eigenvalue| SpectrumEntry {
            eigenvalue,
            multiplicity: Ratio::from_integer(1),
        })
        .collect();
    Ok(WeightedSpectrum::from_sorted_unchecked(
        entries,
        lambda_max,
        d.to_string(),
        1,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(s: &WeightedSpectrum) -> Vec<f64> {
        s.entries().iter().map(|e| e.value()).collect()
    }

    // Independent scan over a wide k window.
    fn brute(alpha: f64, beta: f64, lambda_max: f64) -> Vec<f64> {
        (-1000..=1000)
            .map(|k| alpha * k as f64 + beta)
            .filter(|v| v.abs() <= lambda_max)
            .collect()
    }

    #[test]
    fn examples() {
        let s = circle_eigenvalues(&CircleDirac::from_ints(2, -1, 2).unwrap(), 4.0).unwrap();
        assert_eq!(values(&s), vec![-2.5, -0.5, 1.5, 3.5]);
        assert!(s.entries().iter().all(|e| e.multiplicity == Ratio::from_integer(1)));

        let s = circle_eigenvalues(&CircleDirac::from_ints(1, 1, 2).unwrap(), 2.0).unwrap();
        assert_eq!(values(&s), vec![-1.5, -0.5, 0.5, 1.5]);

        let s = circle_eigenvalues(&CircleDirac::from_ints(6, 7, 2).unwrap(), 10.0).unwrap();
        assert_eq!(values(&s), brute(6.0, 3.5, 10.0));
        assert_eq!(values(&s), vec![-8.5, -2.5, 3.5, 9.5]);
    }

    #[test]
    fn boundary_is_inclusive() {
        let s = circle_eigenvalues(&CircleDirac::from_ints(1, 0, 1).unwrap(), 2.0).unwrap();
        assert_eq!(values(&s), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CircleDirac::from_ints(0, 1, 2).is_err());
        let d = CircleDirac::from_ints(1, 1, 2).unwrap();
        assert!(matches!(
            circle_eigenvalues(&d, 0.0),
            Err(Error::NonpositiveLambdaMax(_))
        ));
        assert!(circle_eigenvalues(&d, -1.0).is_err());
    }

    #[test]
    fn zero_mode_detection() {
        assert!(CircleDirac::from_ints(3, -3, 1).unwrap().has_zero_mode());
        assert!(!CircleDirac::from_ints(3, -1, 1).unwrap().has_zero_mode());
    }
}
