//! Weighted spectra and their multiset algebra.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::exact::{ratio_to_f64, Eigenvalue, Rational, Sign};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub eigenvalue: Eigenvalue,
    pub multiplicity: Rational,
}

impl SpectrumEntry {
    pub fn value(&self) -> f64 {
        self.eigenvalue.value()
    }

    pub fn multiplicity_f64(&self) -> f64 {
        ratio_to_f64(self.multiplicity)
    }
}

/// A finite piece of a spectrum: eigenvalues with `|λ| ≤ lambda_max`,
/// strictly increasing, each carrying a positive rational multiplicity.
///
/// `growth_dimension` records the Weyl exponent of the full spectrum the
/// piece was cut from (1 for circles, 3 for tori). Tail bounds in the
/// action and eta modules use it to estimate what was cut away.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSpectrum {
    entries: Vec<SpectrumEntry>,
    lambda_max: f64,
    descriptor: String,
    growth_dimension: u32,
}

impl WeightedSpectrum {
    pub fn empty(lambda_max: f64, descriptor: impl Into<String>, growth_dimension: u32) -> Self {
        Self {
            entries: Vec::new(),
            lambda_max,
            descriptor: descriptor.into(),
            growth_dimension,
        }
    }

    /// Builds a spectrum from arbitrary entries, merging repeated eigenvalues.
    pub fn from_entries(
        entries: impl IntoIterator<Item = SpectrumEntry>,
        lambda_max: f64,
        descriptor: impl Into<String>,
        growth_dimension: u32,
    ) -> Result<Self> {
        if !(lambda_max > 0.0) {
            return Err(Error::NonpositiveLambdaMax(lambda_max));
        }
        let mut entries: Vec<SpectrumEntry> = entries.into_iter().collect();
        entries.sort_by_key(|x| x.eigenvalue);
        let mut merged: Vec<SpectrumEntry> = Vec::with_capacity(entries.len());
        for e in entries {
            if !e.multiplicity.is_positive() {
                return Err(Error::NegativeMultiplicity {
                    eigenvalue: e.value(),
                    multiplicity: e.multiplicity.to_string(),
                });
            }
            if !e.eigenvalue.square().within(lambda_max) {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.eigenvalue == e.eigenvalue => {
                    last.multiplicity += e.multiplicity
                }
                _ => merged.push(e),
            }
        }
        Ok(Self {
            entries: merged,
            lambda_max,
            descriptor: descriptor.into(),
            growth_dimension,
        })
    }

    /// Entries must already be strictly sorted, positive and truncated.
    pub(crate) fn from_sorted_unchecked(
        entries: Vec<SpectrumEntry>,
        lambda_max: f64,
        descriptor: String,
        growth_dimension: u32,
    ) -> Self {
        debug_assert!(entries
            .windows(2)
            .all(|w| w[0].eigenvalue < w[1].eigenvalue));
        Self {
            entries,
            lambda_max,
            descriptor,
            growth_dimension,
        }
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn growth_dimension(&self) -> u32 {
        self.growth_dimension
    }

    pub fn with_descriptor(mut self, descriptor: impl Into<String>) -> Self {
        self.descriptor = descriptor.into();
        self
    }

    pub fn multiplicity_of(&self, eigenvalue: &Eigenvalue) -> Rational {
        self.entries
            .binary_search_by(|e| e.eigenvalue.cmp(eigenvalue))
            .map(|i| self.entries[i].multiplicity)
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn total_multiplicity(&self) -> Rational {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// True when every eigenvalue `λ` has a partner `-λ` of equal
    /// multiplicity.
    pub fn is_symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| {
            let e = &self.entries[i];
            let mirror = &self.entries[n - 1 - i];
            mirror.eigenvalue == e.eigenvalue.negated() && mirror.multiplicity == e.multiplicity
        })
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.multiplicity.is_integer())
    }

    /// Entries in ascending `|λ|`, negative before positive on ties. This is
    /// the canonical accumulation order for every sum over a spectrum.
    pub fn iter_by_magnitude(&self) -> impl Iterator<Item = &SpectrumEntry> + '_ {
        let split = self
            .entries
            .partition_point(|e| e.eigenvalue.sign() == Sign::Negative);
        let (neg, nonneg) = self.entries.split_at(split);
        MagnitudeMerge {
            neg: neg.iter().rev().peekable(),
            nonneg: nonneg.iter().peekable(),
        }
    }

    /// Sum of `mult · g(λ)` in canonical order, returned together with the
    /// sum of absolute terms.
    pub fn weighted_sum(&self, mut g: impl FnMut(f64) -> f64) -> (f64, f64) {
        let mut acc = crate::summation::NeumaierSum::new();
        let mut abs = crate::summation::NeumaierSum::new();
        for e in self.iter_by_magnitude() {
            let term = e.multiplicity_f64() * g(e.value());
            acc.add(term);
            abs.add(term.abs());
        }
        (acc.value(), abs.value())
    }
}

struct MagnitudeMerge<'a, N, P>
where
    N: Iterator<Item = &'a SpectrumEntry>,
    P: Iterator<Item = &'a SpectrumEntry>,
{
    neg: std::iter::Peekable<N>,
    nonneg: std::iter::Peekable<P>,
}

impl<'a, N, P> Iterator for MagnitudeMerge<'a, N, P>
where
    N: Iterator<Item = &'a SpectrumEntry>,
    P: Iterator<Item = &'a SpectrumEntry>,
{
    type Item = &'a SpectrumEntry;

    fn next(&mut self) -> Option<Self::Item> {
        match (self.neg.peek(), self.nonneg.peek()) {
            (Some(n), Some(p)) => {
                if n.eigenvalue.square() <= p.eigenvalue.square() {
                    self.neg.next()
                } else {
                    self.nonneg.next()
                }
            }
            (Some(_), None) => self.neg.next(),
            (None, _) => self.nonneg.next(),
        }
    }
}

fn check_radius(a: &WeightedSpectrum, b: &WeightedSpectrum) -> Result<()> {
    if a.lambda_max != b.lambda_max {
        return Err(Error::LambdaMaxMismatch(a.lambda_max, b.lambda_max));
    }
    Ok(())
}

/// Walks two sorted entry lists, combining multiplicities of matching
/// eigenvalues with `op`. Results that are zero are dropped.
fn merge_with(
    a: &[SpectrumEntry],
    b: &[SpectrumEntry],
    mut op: impl FnMut(&Eigenvalue, Rational, Rational) -> Result<Rational>,
) -> Result<Vec<SpectrumEntry>> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.eigenvalue.cmp(&y.eigenvalue),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        let (eigenvalue, ma, mb) = match ord {
            Ordering::Less => {
                i += 1;
                (a[i - 1].eigenvalue, a[i - 1].multiplicity, Rational::zero())
            }
            Ordering::Greater => {
                j += 1;
                (b[j - 1].eigenvalue, Rational::zero(), b[j - 1].multiplicity)
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
                (a[i - 1].eigenvalue, a[i - 1].multiplicity, b[j - 1].multiplicity)
            }
        };
        let m = op(&eigenvalue, ma, mb)?;
        if !m.is_zero() {
            out.push(SpectrumEntry {
                eigenvalue,
                multiplicity: m,
            });
        }
    }
    Ok(out)
}

/// Multiplies every multiplicity by `factor`.
pub fn scale_multiplicity(s: &WeightedSpectrum, factor: Rational) -> Result<WeightedSpectrum> {
    if !factor.is_positive() {
        return Err(Error::NonpositiveFactor(factor.to_string()));
    }
    let entries = s
        .entries
        .iter()
        .map(|e| SpectrumEntry {
            eigenvalue: e.eigenvalue,
            multiplicity: e.multiplicity * factor,
        })
        .collect();
    let descriptor = if factor.is_one() {
        s.descriptor.clone()
    } else {
        format!("{factor}*{}", s.descriptor)
    };
    Ok(WeightedSpectrum::from_sorted_unchecked(
        entries,
        s.lambda_max,
        descriptor,
        s.growth_dimension,
    ))
}

/// Multiset difference `a ∖ b`.
pub fn subtract_spectrum(a: &WeightedSpectrum, b: &WeightedSpectrum) -> Result<WeightedSpectrum> {
    check_radius(a, b)?;
    let entries = merge_with(&a.entries, &b.entries, |ev, ma, mb| {
        let m = ma - mb;
        if m.is_negative() {
            Err(Error::NegativeMultiplicity {
                eigenvalue: ev.value(),
                multiplicity: m.to_string(),
            })
        } else {
            Ok(m)
        }
    })?;
    Ok(WeightedSpectrum::from_sorted_unchecked(
        entries,
        a.lambda_max,
        format!("({} \\ {})", a.descriptor, b.descriptor),
        a.growth_dimension.max(b.growth_dimension),
    ))
}

/// Multiset union, i.e. addition of multiplicities.
pub fn union_spectrum(a: &WeightedSpectrum, b: &WeightedSpectrum) -> Result<WeightedSpectrum> {
    check_radius(a, b)?;
    let entries = merge_with(&a.entries, &b.entries, |_, ma, mb| Ok(ma + mb))?;
    let descriptor = match (a.is_empty(), b.is_empty()) {
        (true, false) => b.descriptor.clone(),
        (false, true) => a.descriptor.clone(),
        _ => format!("({} u {})", a.descriptor, b.descriptor),
    };
    Ok(WeightedSpectrum::from_sorted_unchecked(
        entries,
        a.lambda_max,
        descriptor,
        a.growth_dimension.max(b.growth_dimension),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn spec(pairs: &[(i64, i64)]) -> WeightedSpectrum {
        // eigenvalue given in halves
        WeightedSpectrum::from_entries(
            pairs.iter().map(|&(h, m)| SpectrumEntry {
                eigenvalue: Eigenvalue::from_rational(Ratio::new(h, 2)),
                multiplicity: Ratio::from_integer(m),
            }),
            10.0,
            "test",
            1,
        )
        .unwrap()
    }

    fn listing(s: &WeightedSpectrum) -> Vec<(f64, Rational)> {
        s.entries()
            .iter()
            .map(|e| (e.value(), e.multiplicity))
            .collect()
    }

    fn r(n: i64, d: i64) -> Rational {
        Ratio::new(n, d)
    }

    #[test]
    fn scale_examples() {
        let s = spec(&[(3, 4)]);
        assert_eq!(listing(&scale_multiplicity(&s, r(1, 2)).unwrap())[0].1, r(2, 1));
        let s = spec(&[(3, 3)]);
        assert_eq!(listing(&scale_multiplicity(&s, r(1, 3)).unwrap())[0].1, r(1, 1));
        let s = spec(&[(3, 2)]);
        let q = scale_multiplicity(&s, r(1, 4)).unwrap();
        assert_eq!(listing(&q)[0].1, r(1, 2));
        assert!(!q.is_integral());
        assert!(scale_multiplicity(&s, r(0, 1)).is_err());
    }

    #[test]
    fn subtract_examples() {
        let a = spec(&[(3, 4), (5, 2)]);
        let b = spec(&[(3, 2)]);
        assert_eq!(
            listing(&subtract_spectrum(&a, &b).unwrap()),
            vec![(1.5, r(2, 1)), (2.5, r(2, 1))]
        );
        let a = spec(&[(3, 2)]);
        assert!(subtract_spectrum(&a, &b).unwrap().is_empty());
        let a = spec(&[(3, 1)]);
        assert!(matches!(
            subtract_spectrum(&a, &b),
            Err(Error::NegativeMultiplicity { .. })
        ));
    }

    #[test]
    fn union_examples() {
        let a = spec(&[(3, 2)]);
        let b = spec(&[(3, 1), (7, 1)]);
        assert_eq!(
            listing(&union_spectrum(&a, &b).unwrap()),
            vec![(1.5, r(3, 1)), (3.5, r(1, 1))]
        );
        let e = spec(&[]);
        assert_eq!(union_spectrum(&e, &b).unwrap().entries(), b.entries());
        let a = spec(&[(-1, 1)]);
        let b = spec(&[(1, 1)]);
        assert_eq!(
            listing(&union_spectrum(&a, &b).unwrap()),
            vec![(-0.5, r(1, 1)), (0.5, r(1, 1))]
        );
    }

    #[test]
    fn radius_mismatch() {
        let a = spec(&[(1, 1)]);
        let b = WeightedSpectrum::empty(3.0, "other", 1);
        assert!(matches!(
            union_spectrum(&a, &b),
            Err(Error::LambdaMaxMismatch(..))
        ));
    }

    #[test]
    fn magnitude_order() {
        let s = spec(&[(-5, 1), (-1, 1), (0, 2), (1, 1), (3, 1), (-3, 1)]);
        let got: Vec<f64> = s.iter_by_magnitude().map(|e| e.value()).collect();
        assert_eq!(got, vec![0.0, -0.5, 0.5, -1.5, 1.5, -2.5]);
    }

    #[test]
    fn truncation_applied_on_construction() {
        let s = WeightedSpectrum::from_entries(
            [SpectrumEntry {
                eigenvalue: Eigenvalue::from_rational(r(11, 1)),
                multiplicity: r(1, 1),
            }],
            10.0,
            "t",
            1,
        )
        .unwrap();
        assert!(s.is_empty());
    }

    fn arb_spectrum() -> impl Strategy<Value = WeightedSpectrum> {
        prop::collection::vec((-20i64..20, 1i64..5, 1i64..4), 0..12).prop_map(|v| {
            WeightedSpectrum::from_entries(
                v.into_iter().map(|(h, n, d)| SpectrumEntry {
                    eigenvalue: Eigenvalue::from_rational(Ratio::new(h, 2)),
                    multiplicity: Ratio::new(n, d),
                }),
                10.0,
                "arb",
                1,
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn union_then_subtract_is_identity(a in arb_spectrum(), b in arb_spectrum()) {
            let u = union_spectrum(&a, &b).unwrap();
            let back = subtract_spectrum(&u, &b).unwrap();
            prop_assert_eq!(back.entries(), a.entries());
        }

        #[test]
        fn entries_strictly_sorted_and_positive(a in arb_spectrum(), b in arb_spectrum()) {
            let u = union_spectrum(&a, &b).unwrap();
            prop_assert!(u.entries().windows(2).all(|w| w[0].eigenvalue < w[1].eigenvalue));
            prop_assert!(u.entries().iter().all(|e| e.multiplicity.is_positive()));
            prop_assert_eq!(u.total_multiplicity(), a.total_multiplicity() + b.total_multiplicity());
        }
    }
}
