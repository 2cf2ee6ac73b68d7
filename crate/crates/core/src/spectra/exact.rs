//! Exact keys for eigenvalues: squares in ℚ(√2) and signed eigenvalues.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Sign of `p + q·√2`, evaluated exactly.
pub(crate) fn surd_sign(p: Rational, q: Rational) -> Ordering {
    let ps = p.numer().signum();
    let qs = q.numer().signum();
    match (ps, qs) {
        (0, s) | (s, 0) => s.cmp(&0),
        (1, 1) => Ordering::Greater,
        (-1, -1) => Ordering::Less,
        _ => {
            // Opposite signs: compare p² against 2q².
            let p2 = i128::from(*p.numer()).pow(2) * i128::from(*q.denom()).pow(2);
            let q2 = 2 * i128::from(*q.numer()).pow(2) * i128::from(*p.denom()).pow(2);
            let dominant = p2.cmp(&q2);
            if ps > 0 {
                dominant
            } else {
                dominant.reverse()
            }
        }
    }
}

/// λ² stored as `a + b·√2` with rational coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactEigenvalueSq {
    a: Rational,
    b: Rational,
}

impl ExactEigenvalueSq {
    pub const ZERO: Self = Self {
        a: Ratio::new_raw(0, 1),
        b: Ratio::new_raw(0, 1),
    };

    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if surd_sign(a, b) == Ordering::Less {
            return Err(Error::NegativeSquare(format!("{a} + {b}√2")));
        }
        Ok(Self { a, b })
    }

    /// Square of a rational eigenvalue.
    pub fn from_rational(value: Rational) -> Self {
        Self {
            a: value * value,
            b: Rational::zero(),
        }
    }

    /// Builds `(num_a + num_b·√2) / den` from integers, as produced by the
    /// lattice enumeration.
    pub(crate) fn from_scaled(num_a: i64, num_b: i64, den: i64) -> Result<Self> {
        Self::new(Ratio::new(num_a, den), Ratio::new(num_b, den))
    }

    pub fn a(&self) -> Rational {
        self.a
    }

    pub fn b(&self) -> Rational {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.a) + ratio_to_f64(self.b) * std::f64::consts::SQRT_2
    }

    /// `|λ|` as a float.
    pub fn sqrt_f64(&self) -> f64 {
        self.to_f64().max(0.0).sqrt()
    }

    /// Whether `|λ| ≤ lambda_max`. Every truncation in the crate goes
    /// through this test so that spectra built by different routes agree on
    /// their boundary.
    pub fn within(&self, lambda_max: f64) -> bool {
        self.to_f64() <= lambda_max * lambda_max
    }
}

impl Ord for ExactEigenvalueSq {
    fn cmp(&self, other: &Self) -> Ordering {
        surd_sign(self.a - other.a, self.b - other.b)
    }
}

impl PartialOrd for ExactEigenvalueSq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactEigenvalueSq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}√2", self.a, self.b)
        }
    }
}

pub(crate) fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Sign of an eigenvalue. `Zero` marks a harmonic spinor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(r: Rational) -> Self {
        match r.numer().signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
            Sign::Positive => 1.0,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// A signed eigenvalue `sign · √(a + b√2)` with exact ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Eigenvalue {
    sign: Sign,
    square: ExactEigenvalueSq,
}

impl Eigenvalue {
    pub const ZERO: Self = Self {
        sign: Sign::Zero,
        square: ExactEigenvalueSq::ZERO,
    };

    /// Eigenvalue with the given sign and square. A zero square forces the
    /// zero sign.
    pub fn new(sign: Sign, square: ExactEigenvalueSq) -> Self {
        if square.is_zero() {
            Self::ZERO
        } else {
            assert!(sign != Sign::Zero, "nonzero square with zero sign");
            Self { sign, square }
        }
    }

    pub fn from_rational(value: Rational) -> Self {
        Self {
            sign: Sign::of_rational(value),
            square: ExactEigenvalueSq::from_rational(value),
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn square(&self) -> ExactEigenvalueSq {
        self.square
    }

    pub fn negated(&self) -> Self {
        let sign = match self.sign {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        };
        Self {
            sign,
            square: self.square,
        }
    }

    pub fn value(&self) -> f64 {
        self.sign.as_f64() * self.square.sqrt_f64()
    }

    pub fn abs(&self) -> f64 {
        self.square.sqrt_f64()
    }

    /// The exact rational value, when the square is a perfect rational
    /// square (always the case for circle spectra).
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.square.b.is_zero() {
            return None;
        }
        let n = exact_isqrt(*self.square.a.numer())?;
        let d = exact_isqrt(*self.square.a.denom())?;
        Some(Ratio::new(self.sign.as_i64() * n, d))
    }
}

fn exact_isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

impl Ord for Eigenvalue {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                Sign::Positive => self.square.cmp(&other.square),
                Sign::Negative => other.square.cmp(&self.square),
                Sign::Zero => Ordering::Equal,
            },
            unequal => unequal,
        }
    }
}

impl PartialOrd for Eigenvalue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => {
                let s = if self.sign == Sign::Negative { "-" } else { "" };
                write!(f, "{s}√({})", self.square)
            }
        }
    }
}

/// Reduces `value` into `(-modulus/2, modulus/2]` by integer multiples of
/// `modulus`.
pub(crate) fn reduce_symmetric(value: Rational, modulus: Rational) -> Rational {
    debug_assert!(modulus.is_positive());
    // value = q·modulus + r with r ∈ [0, modulus)
    let q = (value / modulus).floor();
    let mut r = value - q * modulus;
    if r * 2 > modulus {
        r -= modulus;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Ratio::new(n, d)
    }

    #[test]
    fn surd_sign_mixed_cases() {
        // 3 - 2√2 ≈ 0.17
        assert_eq!(surd_sign(r(3, 1), r(-2, 1)), Ordering::Greater);
        // 1 - √2 < 0
        assert_eq!(surd_sign(r(1, 1), r(-1, 1)), Ordering::Less);
        // -3/2 + √2 < 0
        assert_eq!(surd_sign(r(-3, 2), r(1, 1)), Ordering::Less);
        // -1 + √2 > 0
        assert_eq!(surd_sign(r(-1, 1), r(1, 1)), Ordering::Greater);
        assert_eq!(surd_sign(r(0, 1), r(0, 1)), Ordering::Equal);
    }

    #[test]
    fn negative_square_rejected() {
        assert!(ExactEigenvalueSq::new(r(1, 1), r(-1, 1)).is_err());
        assert!(ExactEigenvalueSq::new(r(3, 2), r(-1, 1)).is_ok());
    }

    #[test]
    fn eigenvalue_order_crosses_zero() {
        let mut v: Vec<Eigenvalue> = [r(1, 2), r(-3, 2), r(0, 1), r(-1, 2), r(5, 2)]
            .into_iter()
            .map(Eigenvalue::from_rational)
            .collect();
        v.sort();
        let got: Vec<f64> = v.iter().map(|e| e.value()).collect();
        assert_eq!(got, vec![-1.5, -0.5, 0.0, 0.5, 2.5]);
    }

    #[test]
    fn rational_roundtrip() {
        let e = Eigenvalue::from_rational(r(-7, 2));
        assert_eq!(e.as_rational(), Some(r(-7, 2)));
        let s = ExactEigenvalueSq::new(r(2, 1), r(1, 1)).unwrap();
        assert_eq!(Eigenvalue::new(Sign::Positive, s).as_rational(), None);
    }

    #[test]
    fn symmetric_reduction() {
        assert_eq!(reduce_symmetric(r(7, 2), r(6, 1)), r(-5, 2));
        assert_eq!(reduce_symmetric(r(3, 2), r(2, 1)), r(-1, 2));
        assert_eq!(reduce_symmetric(r(-1, 2), r(2, 1)), r(-1, 2));
        // ties go to +modulus/2
        assert_eq!(reduce_symmetric(r(-1, 2), r(1, 1)), r(1, 2));
        assert_eq!(reduce_symmetric(r(-1, 1), r(3, 1)), r(-1, 1));
    }

    proptest! {
        #[test]
        fn surd_order_matches_float(a1 in -400i64..400, b1 in -200i64..200,
                                    a2 in -400i64..400, b2 in -200i64..200) {
            let x = (a1 - a2) as f64 + (b1 - b2) as f64 * std::f64::consts::SQRT_2;
            let exact = surd_sign(r(a1 - a2, 4), r(b1 - b2, 4));
            // integer surds never vanish unless both parts do
            if x.abs() > 1e-9 {
                prop_assert_eq!(exact, x.partial_cmp(&0.0).unwrap());
            } else {
                prop_assert_eq!(exact, Ordering::Equal);
            }
        }
    }
}
