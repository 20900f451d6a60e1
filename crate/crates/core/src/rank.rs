//! Exact rationals extended with the two symbolic infinities.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => BigInt::from_str(t).map(Q::from_integer).map_err(|_| bad()),
    }
}

/// Canonical `"p/q"` form; integers keep the `/1`.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Lossy conversion for display columns only.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter for a single rational stored as a `"p/q"` string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for an optional rational (`null` when absent).
pub mod serde_opt_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&fmt_q(x)),
            None => s.serialize_none(),
        }
    }
}

/// Serde adapter for a list of rationals.
pub mod serde_q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A grading value: exact rational or `±∞`.
///
/// The derived order puts `NegInf` below every finite value and `PosInf` above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    NegInf,
    Finite(Q),
    PosInf,
}

impl Rank {
    pub fn zero() -> Rank {
        Rank::Finite(Q::zero())
    }

    pub fn int(n: i64) -> Rank {
        Rank::Finite(qi(n))
    }

    pub fn ratio(n: i64, d: i64) -> Rank {
        Rank::Finite(q(n, d))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Rank::Finite(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Rank::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// The finite value, or an error naming `what`.
    pub fn expect_finite(&self, what: &str) -> Result<&Q> {
        self.finite()
            .ok_or_else(|| Error::Indeterminate(format!("{what} has infinite rank {self}")))
    }

    pub fn checked_add(&self, other: &Rank) -> Result<Rank> {
        use Rank::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                Err(Error::Indeterminate(format!("{self} + {other}")))
            }
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }

    pub fn checked_sub(&self, other: &Rank) -> Result<Rank> {
        self.checked_add(&-other.clone())
            .map_err(|_| Error::Indeterminate(format!("{self} - {other}")))
    }

    /// Sums a list of ranks, rejecting `+∞ + -∞` anywhere in the list.
    pub fn checked_sum<'a>(terms: impl IntoIterator<Item = &'a Rank>) -> Result<Rank> {
        let (mut pos, mut neg, mut acc) = (false, false, Q::zero());
        let mut parts = Vec::new();
        for t in terms {
            parts.push(t.to_string());
            match t {
                Rank::PosInf => pos = true,
                Rank::NegInf => neg = true,
                Rank::Finite(x) => acc += x,
            }
        }
        match (pos, neg) {
            (true, true) => Err(Error::Indeterminate(parts.join(" + "))),
            (true, false) => Ok(Rank::PosInf),
            (false, true) => Ok(Rank::NegInf),
            (false, false) => Ok(Rank::Finite(acc)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rank::NegInf => f64::NEG_INFINITY,
            Rank::PosInf => f64::INFINITY,
            Rank::Finite(x) => to_f64(x),
        }
    }
}

impl std::ops::Neg for Rank {
    type Output = Rank;

    fn neg(self) -> Rank {
        match self {
            Rank::NegInf => Rank::PosInf,
            Rank::PosInf => Rank::NegInf,
            Rank::Finite(x) => Rank::Finite(-x),
        }
    }
}

impl From<Q> for Rank {
    fn from(x: Q) -> Self {
        Rank::Finite(x)
    }
}

impl From<i64> for Rank {
    fn from(n: i64) -> Self {
        Rank::int(n)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::NegInf => f.write_str("-inf"),
            Rank::PosInf => f.write_str("+inf"),
            Rank::Finite(x) => f.write_str(&fmt_q(x)),
        }
    }
}

impl FromStr for Rank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rank> {
        match s.trim() {
            "-inf" | "-∞" => Ok(Rank::NegInf),
            "+inf" | "inf" | "∞" | "+∞" => Ok(Rank::PosInf),
            t => parse_q(t).map(Rank::Finite),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rank, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A closed interval of ranks, used as the codomain of a grading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankInterval {
    lo: Rank,
    hi: Rank,
}

impl RankInterval {
    pub fn new(lo: Rank, hi: Rank) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition(format!(
                "rank interval [{lo}, {hi}] is reversed"
            )));
        }
        Ok(RankInterval { lo, hi })
    }

    pub fn lo(&self) -> &Rank {
        &self.lo
    }

    pub fn hi(&self) -> &Rank {
        &self.hi
    }

    pub fn contains(&self, r: &Rank) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn bounded_above(&self) -> bool {
        self.hi != Rank::PosInf
    }

    pub fn bounded_below(&self) -> bool {
        self.lo != Rank::NegInf
    }

    /// Affine map sending `self` onto `target`. Both intervals must be finite
    /// and `self` non-degenerate.
    pub fn affine_to(&self, target: &RankInterval, x: &Q) -> Result<Q> {
        let (a, b) = (
            self.lo.expect_finite("source")?,
            self.hi.expect_finite("source")?,
        );
        let (c, d) = (
            target.lo.expect_finite("target")?,
            target.hi.expect_finite("target")?,
        );
        if a == b {
            return Err(Error::Precondition("degenerate source interval".into()));
        }
        Ok(c + (x - a) * (d - c) / (b - a))
    }
}

impl fmt::Display for RankInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl PartialOrd<Q> for Rank {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(match self {
            Rank::NegInf => Ordering::Less,
            Rank::PosInf => Ordering::Greater,
            Rank::Finite(x) => x.cmp(other),
        })
    }
}

impl PartialEq<Q> for Rank {
    fn eq(&self, other: &Q) -> bool {
        matches!(self, Rank::Finite(x) if x == other)
    }
}
