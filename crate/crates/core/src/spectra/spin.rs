//! Spin structure data and the manifold catalog.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use super::exact::Rational;

/// A lattice shift ε ∈ {0, 1/2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HalfShift {
    Zero,
    Half,
}

impl HalfShift {
    pub fn as_rational(self) -> Rational {
        match self {
            HalfShift::Zero => Ratio::from_integer(0),
            HalfShift::Half => Ratio::new(1, 2),
        }
    }

    /// `2ε` as an integer, the form used by the lattice enumeration.
    pub(crate) fn doubled(self) -> i64 {
        match self {
            HalfShift::Zero => 0,
            HalfShift::Half => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HalfShift::Zero => "0",
            HalfShift::Half => "1/2",
        }
    }
}

impl FromStr for HalfShift {
    type Err = String;

    /// Accepts only the literal spellings of 0 and 1/2.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" | "0.0" => Ok(HalfShift::Zero),
            "0.5" | "1/2" | ".5" => Ok(HalfShift::Half),
            other => Err(format!("shift must be 0 or 0.5, got {other:?}")),
        }
    }
}

/// The extra sign label coming from the representation of the holonomy group
/// on spinors. ℤ₂×ℤ₂ carries one sign per generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Delta {
    Unset,
    Plus,
    Minus,
    /// Signs for the two ℤ₂ generators, `true` meaning +1.
    Pair(bool, bool),
}

impl Delta {
    pub fn sign(self) -> Option<i64> {
        match self {
            Delta::Plus => Some(1),
            Delta::Minus => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pm = |b: bool| if b { "+1" } else { "-1" };
        match self {
            Delta::Unset => write!(f, "unset"),
            Delta::Plus => write!(f, "+1"),
            Delta::Minus => write!(f, "-1"),
            Delta::Pair(a, b) => write!(f, "{},{}", pm(*a), pm(*b)),
        }
    }
}

impl FromStr for Delta {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn one(s: &str) -> Result<bool, String> {
            match s.trim() {
                "+1" | "1" | "+" => Ok(true),
                "-1" | "-" => Ok(false),
                other => Err(format!("delta must be +1 or -1, got {other:?}")),
            }
        }
        match s.trim() {
            "unset" => Ok(Delta::Unset),
            t => match t.split_once(',') {
                Some((a, b)) => Ok(Delta::Pair(one(a)?, one(b)?)),
                None => Ok(if one(t)? { Delta::Plus } else { Delta::Minus }),
            },
        }
    }
}

/// Spin structure `(ε₁, ε₂, ε₃; δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinStructure {
    pub eps: [HalfShift; 3],
    pub delta: Delta,
}

impl SpinStructure {
    pub const fn new(eps1: HalfShift, eps2: HalfShift, eps3: HalfShift, delta: Delta) -> Self {
        Self {
            eps: [eps1, eps2, eps3],
            delta,
        }
    }

    /// Torus spin structure without a δ label.
    pub const fn torus(eps1: HalfShift, eps2: HalfShift, eps3: HalfShift) -> Self {
        Self::new(eps1, eps2, eps3, Delta::Unset)
    }

    pub fn all_half() -> Self {
        Self::torus(HalfShift::Half, HalfShift::Half, HalfShift::Half)
    }

    pub fn eps1(&self) -> HalfShift {
        self.eps[0]
    }

    pub fn eps2(&self) -> HalfShift {
        self.eps[1]
    }

    pub fn eps3(&self) -> HalfShift {
        self.eps[2]
    }

    /// The same ε data with δ dropped, i.e. the covering torus structure.
    pub fn on_torus(&self) -> Self {
        Self {
            eps: self.eps,
            delta: Delta::Unset,
        }
    }
}

impl fmt::Display for SpinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.eps[0].as_str(),
            self.eps[1].as_str(),
            self.eps[2].as_str()
        )?;
        if self.delta != Delta::Unset {
            write!(f, " delta={}", self.delta)?;
        }
        Ok(())
    }
}

impl Serialize for SpinStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SpinStructure", 4)?;
        st.serialize_field("eps1", self.eps[0].as_str())?;
        st.serialize_field("eps2", self.eps[1].as_str())?;
        st.serialize_field("eps3", self.eps[2].as_str())?;
        match self.delta {
            Delta::Unset => st.serialize_field("delta", &Option::<String>::None)?,
            d => st.serialize_field("delta", &Some(d.to_string()))?,
        }
        st.end()
    }
}

/// The flat 3-torus and the five orientable Bieberbach quotients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ManifoldId {
    T3,
    G2,
    G3,
    G4,
    G5,
    G6,
}

impl ManifoldId {
    pub const ALL: [ManifoldId; 6] = [
        ManifoldId::T3,
        ManifoldId::G2,
        ManifoldId::G3,
        ManifoldId::G4,
        ManifoldId::G5,
        ManifoldId::G6,
    ];

    pub const QUOTIENTS: [ManifoldId; 5] = [
        ManifoldId::G2,
        ManifoldId::G3,
        ManifoldId::G4,
        ManifoldId::G5,
        ManifoldId::G6,
    ];

    /// Order of the holonomy group: ℤ₂, ℤ₃, ℤ₄, ℤ₆, ℤ₂×ℤ₂.
    pub fn group_order(self) -> i64 {
        match self {
            ManifoldId::T3 => 1,
            ManifoldId::G2 => 2,
            ManifoldId::G3 => 3,
            ManifoldId::G4 => 4,
            ManifoldId::G5 => 6,
            ManifoldId::G6 => 4,
        }
    }

    pub fn group_name(self) -> &'static str {
        match self {
            ManifoldId::T3 => "trivial",
            ManifoldId::G2 => "Z2",
            ManifoldId::G3 => "Z3",
            ManifoldId::G4 => "Z4",
            ManifoldId::G5 => "Z6",
            ManifoldId::G6 => "Z2xZ2",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ManifoldId::T3 => "T3",
            ManifoldId::G2 => "G2",
            ManifoldId::G3 => "G3",
            ManifoldId::G4 => "G4",
            ManifoldId::G5 => "G5",
            ManifoldId::G6 => "G6",
        }
    }
}

impl fmt::Display for ManifoldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ManifoldId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ManifoldId::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown manifold {s:?}; expected one of T3, G2..G6"))
    }
}

impl Serialize for ManifoldId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Every spin structure that projects to the quotient, in the order the
/// case tables list them.
pub fn admissible_spin_structures(m: ManifoldId) -> Vec<SpinStructure> {
    use HalfShift::{Half, Zero};
    let sn = SpinStructure::new;
    match m {
        ManifoldId::T3 => {
            let mut out = Vec::with_capacity(8);
            for e1 in [Zero, Half] {
                for e2 in [Zero, Half] {
                    for e3 in [Zero, Half] {
                        out.push(SpinStructure::torus(e1, e2, e3));
                    }
                }
            }
            out
        }
        ManifoldId::G2 => {
            // asymmetric pair first so the A/B columns line up
            let mut out = vec![
                sn(Half, Zero, Zero, Delta::Plus),
                sn(Half, Zero, Zero, Delta::Minus),
            ];
            for (e2, e3) in [(Zero, Half), (Half, Zero), (Half, Half)] {
                for d in [Delta::Plus, Delta::Minus] {
                    out.push(sn(Half, e2, e3, d));
                }
            }
            out
        }
        ManifoldId::G3 => vec![
            sn(Half, Zero, Zero, Delta::Plus),
            sn(Zero, Zero, Zero, Delta::Minus),
        ],
        ManifoldId::G4 => vec![
            sn(Half, Zero, Zero, Delta::Plus),
            sn(Half, Zero, Zero, Delta::Minus),
            sn(Half, Half, Half, Delta::Plus),
            sn(Half, Half, Half, Delta::Minus),
        ],
        ManifoldId::G5 => vec![
            sn(Half, Zero, Zero, Delta::Plus),
            sn(Half, Zero, Zero, Delta::Minus),
        ],
        ManifoldId::G6 => [(true, true), (true, false), (false, true), (false, false)]
            .into_iter()
            .map(|(a, b)| sn(Half, Half, Half, Delta::Pair(a, b)))
            .collect(),
    }
}

pub fn is_admissible(m: ManifoldId, s: &SpinStructure) -> bool {
    admissible_spin_structures(m).contains(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_counts() {
        let counts: Vec<usize> = ManifoldId::ALL
            .iter()
            .map(|&m| admissible_spin_structures(m).len())
            .collect();
        assert_eq!(counts, vec![8, 8, 2, 4, 2, 4]);
    }

    #[test]
    fn group_orders() {
        let orders: Vec<i64> = ManifoldId::ALL.iter().map(|m| m.group_order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 6, 4]);
    }

    #[test]
    fn g3_delta_follows_eps1() {
        use HalfShift::*;
        assert_eq!(
            admissible_spin_structures(ManifoldId::G3),
            vec![
                SpinStructure::new(Half, Zero, Zero, Delta::Plus),
                SpinStructure::new(Zero, Zero, Zero, Delta::Minus)
            ]
        );
    }

    #[test]
    fn g5_and_g6_shifts() {
        use HalfShift::*;
        for s in admissible_spin_structures(ManifoldId::G5) {
            assert_eq!(s.eps, [Half, Zero, Zero]);
        }
        let g6 = admissible_spin_structures(ManifoldId::G6);
        assert!(g6.iter().all(|s| s.eps == [Half; 3]));
        let mut labels: Vec<_> = g6.iter().map(|s| s.delta).collect();
        labels.dedup();
        assert_eq!(labels.len(), 4);
    }

    #[test]
    fn parse_flags() {
        assert_eq!("0.5".parse::<HalfShift>(), Ok(HalfShift::Half));
        assert!("0.25".parse::<HalfShift>().is_err());
        assert_eq!("+1".parse::<Delta>(), Ok(Delta::Plus));
        assert_eq!("-1,+1".parse::<Delta>(), Ok(Delta::Pair(false, true)));
        assert_eq!("g4".parse::<ManifoldId>(), Ok(ManifoldId::G4));
    }
}
