//! Closed-form heat traces of the rescaled circle Dirac operator.
//!
//! With `β̂` the representative of `β` in `(−α/2, α/2]`,
//!
//! ```text
//! Tr e^{−p|D|}         = e^{−p|β̂|} + 2cosh(pβ̂)·e^{−pα}/(1 − e^{−pα})
//! Tr sign(D) e^{−p|D|} = sign(β̂)·e^{−p|β̂|} − 2sinh(pβ̂)·e^{−pα}/(1 − e^{−pα})
//! ```
//!
//! Both are evaluated as `e^{−p(α−|β̂|)}·(1 ± e^{−2p|β̂|}) / (1 − e^{−pα})`
//! with `expm1`, which neither overflows for large `p` nor cancels for
//! small `p`.

use crate::error::{Error, Result};
use crate::spectra::{ratio_to_f64, reduce_symmetric, CircleDirac, Rational};

/// `β` reduced into `(−α/2, α/2]`.
pub fn canonical_beta(d: &CircleDirac) -> Rational {
    reduce_symmetric(d.beta(), d.alpha())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::NonpositiveP(p));
    }
    Ok(())
}

/// Shared pieces: `(|β̂| as f64, sign(β̂), e^{−p(α−|β̂|)}/(1−e^{−pα}), e^{−2p|β̂|} − 1)`.
fn parts(d: &CircleDirac, p: f64) -> (f64, f64, f64, f64) {
    let alpha = d.alpha_f64();
    let beta = ratio_to_f64(canonical_beta(d));
    let b = beta.abs();
    let sign = if beta == 0.0 { 0.0 } else { beta.signum() };
    let ratio = (-p * (alpha - b)).exp() / -(-p * alpha).exp_m1();
    (b, sign, ratio, (-2.0 * p * b).exp_m1())
}

/// `Σ_k e^{−p|αk+β|}`.
pub fn heat_trace_circle(d: &CircleDirac, p: f64) -> Result<f64> {
    check_p(p)?;
    let (b, _, ratio, m) = parts(d, p);
    Ok((-p * b).exp() + ratio * (2.0 + m))
}

/// `Σ_k sign(αk+β)·e^{−p|αk+β|}`, with `sign(0) = 0`.
pub fn sign_heat_trace_circle(d: &CircleDirac, p: f64) -> Result<f64> {
    check_p(p)?;
    let (b, sign, ratio, m) = parts(d, p);
    Ok(sign * ((-p * b).exp() + ratio * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summation::NeumaierSum;

    fn circle(a: i64, n: i64, den: i64) -> CircleDirac {
        CircleDirac::from_ints(a, n, den).unwrap()
    }

    /// Direct series, summed outward from k = 0 until terms drop below 1e-20.
    fn series(d: &CircleDirac, p: f64, signed: bool) -> (f64, f64) {
        let (alpha, beta) = (d.alpha_f64(), d.beta_f64());
        let mut acc = NeumaierSum::new();
        let mut abs = NeumaierSum::new();
        let k_max = (50.0 / (p * alpha)).ceil() as i64 + (beta.abs() / alpha) as i64 + 2;
        for k in -k_max..=k_max {
            let v = alpha * k as f64 + beta;
            let w = (-p * v.abs()).exp();
            let s = if signed {
                if v == 0.0 {
                    0.0
                } else {
                    v.signum()
                }
            } else {
                1.0
            };
            acc.add(s * w);
            abs.add(w);
        }
        (acc.value(), abs.value())
    }

    #[test]
    fn examples() {
        let h = heat_trace_circle(&circle(1, 1, 2), 1.0).unwrap();
        assert!((h - 1.0 / 0.5f64.sinh()).abs() < 1e-14);
        assert!((h - 1.91903).abs() < 1e-5);
        let h = heat_trace_circle(&circle(2, 0, 1), 1.0).unwrap();
        let e2 = (-2f64).exp();
        assert!((h - (1.0 + 2.0 * e2 / (1.0 - e2))).abs() < 1e-14);
        assert!((h - 1.31304).abs() < 1e-5);
    }

    #[test]
    fn sign_trace_examples() {
        for p in [0.01, 0.3, 2.0, 40.0] {
            assert!(sign_heat_trace_circle(&circle(1, 1, 2), p).unwrap().abs() < 1e-15);
        }
        let s = sign_heat_trace_circle(&circle(2, -1, 2), 1e-6).unwrap();
        assert!((s + 0.5).abs() < 1e-6);
        let s = sign_heat_trace_circle(&circle(4, 1, 2), 0.01).unwrap();
        assert!((s - 0.75).abs() < 1e-3);
    }

    #[test]
    fn agrees_with_series() {
        for (a, n, den) in [(1, 1, 2), (1, 0, 1), (2, -1, 2), (2, 3, 2), (3, 1, 2), (3, -1, 1), (4, 5, 2), (6, 7, 2), (5, 7, 3)] {
            let d = circle(a, n, den);
            for p in [0.1, 0.5, 1.0, 2.0, 5.0] {
                let (h, abs) = series(&d, p, false);
                assert!((heat_trace_circle(&d, p).unwrap() - h).abs() <= 1e-13 * abs);
                let (s, _) = series(&d, p, true);
                assert!((sign_heat_trace_circle(&d, p).unwrap() - s).abs() <= 1e-13 * abs);
            }
        }
    }

    #[test]
    fn large_p_stays_finite() {
        let d = circle(6, 7, 2);
        let h = heat_trace_circle(&d, 800.0).unwrap();
        assert!(h.is_finite() && h >= 0.0);
        assert!(sign_heat_trace_circle(&d, 800.0).unwrap().is_finite());
    }

    #[test]
    fn rejects_nonpositive_p() {
        assert!(matches!(
            heat_trace_circle(&circle(1, 1, 2), 0.0),
            Err(Error::NonpositiveP(_))
        ));
        assert!(sign_heat_trace_circle(&circle(1, 1, 2), -1.0).is_err());
    }
}
