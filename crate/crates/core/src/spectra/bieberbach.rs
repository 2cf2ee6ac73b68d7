//! Bieberbach spectra as combinations of torus and circle spectra.

use num_rational::Ratio;

use super::circle::{circle_eigenvalues, CircleDirac};
use super::exact::Rational;
use super::spectrum::{scale_multiplicity, subtract_spectrum, union_spectrum, WeightedSpectrum};
use super::spin::{is_admissible, Delta, HalfShift, ManifoldId, SpinStructure};
use super::torus::{torus_eigenvalues, TorusAngle, TorusDirac};
use crate::error::{Error, Result};

/// How a Bieberbach spectrum is assembled:
///
/// ```text
/// Sp(G) = scale · (Sp³_τ ∖ 2·removed) ∪ 2·added
/// ```
///
/// For the symmetric cases `removed` and `added` are both absent and the
/// spectrum is the rescaled torus spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub manifold: ManifoldId,
    pub spin: SpinStructure,
    pub torus: TorusDirac,
    pub scale: Rational,
    pub removed: Option<CircleDirac>,
    pub added: Option<CircleDirac>,
}

impl Decomposition {
    /// Whether the circle correction is present, i.e. the spectrum differs
    /// from the rescaled torus spectrum and may be asymmetric.
    pub fn is_asymmetric(&self) -> bool {
        self.added.is_some()
    }

    /// `n` in `S(G) − S(T³)/n`.
    pub fn group_order(&self) -> i64 {
        self.manifold.group_order()
    }
}

fn circle(alpha: i64, beta: Rational) -> CircleDirac {
    CircleDirac::new(Ratio::from_integer(alpha), beta).expect("positive slope")
}

fn half() -> Rational {
    Ratio::new(1, 2)
}

/// The case table for `(m, s)`.
pub fn decomposition(m: ManifoldId, s: &SpinStructure) -> Result<Decomposition> {
    if !is_admissible(m, s) {
        return Err(Error::InadmissibleSpin {
            manifold: m,
            spin: *s,
        });
    }
    let n = m.group_order();
    let scale = Ratio::new(1, n);
    let delta = || Ratio::from_integer(s.delta.sign().expect("delta set for asymmetric case"));
    let eps1 = s.eps1().as_rational();
    // the subtracted circle uses the torus's own ε₁ shift
    let standard = circle(1, eps1);
    let both_zero = s.eps2() == HalfShift::Zero && s.eps3() == HalfShift::Zero;

    let (angle, removed, added) = match m {
        ManifoldId::T3 => (TorusAngle::Right, None, None),
        ManifoldId::G2 if both_zero => (
            TorusAngle::Right,
            Some(standard),
            Some(circle(2, half() - delta())),
        ),
        ManifoldId::G2 => (TorusAngle::Right, None, None),
        ManifoldId::G3 => {
            let added = if s.eps1() == HalfShift::Half {
                circle(3, half())
            } else {
                circle(3, Ratio::from_integer(-1))
            };
            (TorusAngle::TwoThirdsPi, Some(standard), Some(added))
        }
        ManifoldId::G4 if both_zero => (
            TorusAngle::QuarterPi,
            Some(standard),
            Some(circle(4, Ratio::new(3, 2) - delta())),
        ),
        ManifoldId::G4 => (TorusAngle::QuarterPi, None, None),
        ManifoldId::G5 => {
            let beta = match s.delta {
                Delta::Plus => half(),
                _ => Ratio::new(7, 2),
            };
            (TorusAngle::TwoThirdsPi, Some(standard), Some(circle(6, beta)))
        }
        ManifoldId::G6 => (TorusAngle::Right, None, None),
    };
    Ok(Decomposition {
        manifold: m,
        spin: *s,
        torus: TorusDirac::new(angle, *s),
        scale,
        removed,
        added,
    })
}

/// Assembles a spectrum from its decomposition.
pub fn compose(dec: &Decomposition, lambda_max: f64) -> Result<WeightedSpectrum> {
    let two = Ratio::from_integer(2);
    let torus = torus_eigenvalues(&dec.torus, lambda_max)?;
    let reduced = match dec.removed {
        Some(c) => subtract_spectrum(
            &torus,
            &scale_multiplicity(&circle_eigenvalues(&c, lambda_max)?, two)?,
        )?,
        None => torus,
    };
    let scaled = scale_multiplicity(&reduced, dec.scale)?;
    let full = match dec.added {
        Some(c) => union_spectrum(
            &scaled,
            &scale_multiplicity(&circle_eigenvalues(&c, lambda_max)?, two)?,
        )?,
        None => scaled,
    };
    Ok(full.with_descriptor(format!("{}{}", dec.manifold, dec.spin)))
}

/// Dirac spectrum of the Bieberbach manifold `m` with spin structure `s`.
pub fn bieberbach_spectrum(
    m: ManifoldId,
    s: &SpinStructure,
    lambda_max: f64,
) -> Result<WeightedSpectrum> {
    compose(&decomposition(m, s)?, lambda_max)
}
