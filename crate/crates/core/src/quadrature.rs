//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

// Kronrod abscissae (positive half, descending) and weights; the Gauss
// weights belong to the odd-indexed abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    let error = raw.max(50.0 * f64::EPSILON * value.abs());
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]` until the estimated error falls below
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    const MAX_INTERVALS: usize = 4000;
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(gk15(&f, a, b));
    loop {
        let total: f64 = heap.iter().map(|s| s.value).collect::<NeumaierSum>().value();
        let err: f64 = heap.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::DivergentMoment(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        let worst = heap.peek().expect("nonempty");
        let roundoff_limited = worst.error <= 50.0 * f64::EPSILON * worst.value.abs();
        if err <= abs_tol.max(rel_tol * total.abs()) || roundoff_limited {
            return Ok(QuadratureResult {
                value: total,
                error: err,
                intervals: heap.len(),
            });
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::DivergentMoment(format!(
                "no convergence on [{a}, {b}] after {MAX_INTERVALS} intervals (error {err:e})"
            )));
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::DivergentMoment(format!(
                "interval [{}, {}] cannot be bisected further",
                worst.a, worst.b
            )));
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}

/// `∫₀^∞ f`, truncated at the first doubling point `X` where the integrand
/// has fallen below `1e-15` relative to its running integral on two
/// consecutive probes.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<QuadratureResult> {
    let mut upper = 1.0;
    let mut acc = integrate(&f, 0.0, upper, rel_tol, 0.0)?;
    for _ in 0..60 {
        let next = integrate(&f, upper, 2.0 * upper, rel_tol, 1e-300)?;
        acc.value += next.value;
        acc.error += next.error;
        acc.intervals += next.intervals;
        upper *= 2.0;
        let probe = (f(upper).abs() * upper).max(next.value.abs());
        if probe <= 1e-15 * acc.value.abs().max(f64::MIN_POSITIVE) {
            return Ok(acc);
        }
    }
    Err(Error::DivergentMoment(format!(
        "integrand still significant at x = {upper}"
    )))
}
