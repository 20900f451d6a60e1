//! Finite unions of half-open rational intervals `(a, b]`.
//!
//! This is the measurable Boolean lattice restricted to sets with finitely
//! many rational endpoints. Null sets are unrepresentable, so structural
//! equality of canonical forms is equality up to measure zero.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::GradedLattice;
use crate::profile::PiecewiseLinearProfile;
use crate::rank::{fmt_q, parse_q, qi, Rank, Q};

/// Where elements live: `(0, T]` or the whole real line (bounded sets only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    Bounded(Q),
    Unbounded,
}

impl Ambient {
    pub fn bounded(t: Q) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::OutOfRange {
                value: fmt_q(&t),
                range: "(0, ∞)".into(),
            });
        }
        Ok(Ambient::Bounded(t))
    }

    pub fn end(&self) -> Option<&Q> {
        match self {
            Ambient::Bounded(t) => Some(t),
            Ambient::Unbounded => None,
        }
    }
}

/// Canonical union of disjoint, non-adjacent intervals `(a_i, b_i]`, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    parts: Vec<(Q, Q)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    /// The single interval `(a, b]`; `a < b` is required.
    pub fn interval(a: Q, b: Q) -> Result<Self> {
        if a >= b {
            return Err(Error::EmptyInterval(fmt_q(&a), fmt_q(&b)));
        }
        Ok(IntervalSet {
            parts: vec![(a, b)],
        })
    }

    /// Sorts and merges overlapping or touching intervals.
    pub fn normalize(raw: Vec<(Q, Q)>) -> Result<Self> {
        if let Some((a, b)) = raw.iter().find(|(a, b)| a >= b) {
            return Err(Error::EmptyInterval(fmt_q(a), fmt_q(b)));
        }
        Ok(Self::merge_sorted({
            let mut raw = raw;
            raw.sort();
            raw
        }))
    }

    /// [`normalize`](Self::normalize), rejecting endpoints outside `ambient`.
    pub fn normalize_in(raw: Vec<(Q, Q)>, ambient: &Ambient) -> Result<Self> {
        let set = Self::normalize(raw)?;
        set.check_within(ambient)?;
        Ok(set)
    }

    fn merge_sorted(sorted: Vec<(Q, Q)>) -> Self {
        let mut parts: Vec<(Q, Q)> = Vec::with_capacity(sorted.len());
        for (a, b) in sorted {
            match parts.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => parts.push((a, b)),
            }
        }
        IntervalSet { parts }
    }

    pub fn check_within(&self, ambient: &Ambient) -> Result<()> {
        if let Ambient::Bounded(t) = ambient {
            if let Some((a, b)) = self.parts.iter().find(|(a, b)| a.is_negative() || b > t) {
                return Err(Error::OutsideAmbient(fmt_q(a), fmt_q(b), fmt_q(t)));
            }
        }
        Ok(())
    }

    pub fn parts(&self) -> &[(Q, Q)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Every endpoint, in order.
    pub fn endpoints(&self) -> impl Iterator<Item = &Q> {
        self.parts.iter().flat_map(|(a, b)| [a, b])
    }

    pub fn meet(&self, other: &IntervalSet) -> IntervalSet {
        let (mut i, mut j) = (0, 0);
        let mut parts = Vec::new();
        while i < self.parts.len() && j < other.parts.len() {
            let (a0, b0) = &self.parts[i];
            let (a1, b1) = &other.parts[j];
            let lo = a0.max(a1);
            let hi = b0.min(b1);
            if lo < hi {
                parts.push((lo.clone(), hi.clone()));
            }
            if b0 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { parts }
    }

    pub fn join(&self, other: &IntervalSet) -> IntervalSet {
        let mut all: Vec<(Q, Q)> = self.parts.iter().chain(&other.parts).cloned().collect();
        all.sort();
        Self::merge_sorted(all)
    }

    /// `(0, t] \ self`; `self` must lie inside `(0, t]`.
    pub fn complement_in(&self, t: &Q) -> IntervalSet {
        let mut parts = Vec::new();
        let mut cursor = Q::zero();
        for (a, b) in &self.parts {
            if &cursor < a {
                parts.push((cursor.clone(), a.clone()));
            }
            cursor = b.clone();
        }
        if &cursor < t {
            parts.push((cursor, t.clone()));
        }
        IntervalSet { parts }
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.meet(other) == *self
    }

    pub fn lebesgue(&self) -> Q {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(a, b)| format!("({a},{b}]"))
            .collect();
        f.write_str(&parts.join("∪"))
    }
}

impl FromStr for IntervalSet {
    type Err = Error;

    /// Accepts `∅`/`empty` or `(a,b]` pieces joined by `∪`, `u` or `+`.
    fn from_str(s: &str) -> Result<IntervalSet> {
        let t = s.trim();
        if t.is_empty() || t == "∅" || t.eq_ignore_ascii_case("empty") {
            return Ok(IntervalSet::empty());
        }
        let bad = || Error::ParseRational(s.to_string());
        let mut raw = Vec::new();
        for piece in t.split(['∪', 'u', 'U', '+']) {
            let piece = piece.trim();
            let inner = piece
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(bad)?;
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            raw.push((parse_q(a)?, parse_q(b)?));
        }
        IntervalSet::normalize(raw)
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalSetJson {
    intervals: Vec<[String; 2]>,
}

impl Serialize for IntervalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalSetJson {
            intervals: self
                .parts
                .iter()
                .map(|(a, b)| [fmt_q(a), fmt_q(b)])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = IntervalSetJson::deserialize(d)?;
        let pairs = raw
            .intervals
            .iter()
            .map(|[a, b]| Ok((parse_q(a)?, parse_q(b)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        IntervalSet::normalize(pairs).map_err(serde::de::Error::custom)
    }
}

/// Piecewise-constant positive density on `(0, T]`.
///
/// `values[j]` is the density on `(breakpoints[j], breakpoints[j + 1]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StepDensityJson")]
pub struct StepDensity {
    #[serde(with = "crate::rank::serde_q_vec")]
    breakpoints: Vec<Q>,
    #[serde(with = "crate::rank::serde_q_vec")]
    values: Vec<Q>,
}

#[derive(Deserialize)]
struct StepDensityJson {
    #[serde(with = "crate::rank::serde_q_vec")]
    breakpoints: Vec<Q>,
    #[serde(with = "crate::rank::serde_q_vec")]
    values: Vec<Q>,
}

impl TryFrom<StepDensityJson> for StepDensity {
    type Error = Error;

    fn try_from(raw: StepDensityJson) -> Result<Self> {
        StepDensity::new(raw.breakpoints, raw.values)
    }
}

impl StepDensity {
    pub fn new(breakpoints: Vec<Q>, values: Vec<Q>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidDensity(m.to_string()));
        if breakpoints.len() < 2 || breakpoints.len() != values.len() + 1 {
            return bad("need k+1 breakpoints for k values, k ≥ 1");
        }
        if !breakpoints[0].is_zero() {
            return bad("first breakpoint must be 0");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must be strictly increasing");
        }
        if values.iter().any(|v| !v.is_positive()) {
            return bad("density values must be positive");
        }
        Ok(StepDensity {
            breakpoints,
            values,
        })
    }

    /// `f ≡ 1` on `(0, t]`.
    pub fn uniform(t: Q) -> Result<Self> {
        StepDensity::new(vec![Q::zero(), t], vec![qi(1)])
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    /// `T`, the right end of the support.
    pub fn end(&self) -> &Q {
        &self.breakpoints[self.breakpoints.len() - 1]
    }

    /// `∫_u f dμ`; mass outside `(0, T]` contributes nothing.
    pub fn integrate(&self, u: &IntervalSet) -> Q {
        let mut total = Q::zero();
        for (j, f) in self.values.iter().enumerate() {
            let (lo, hi) = (&self.breakpoints[j], &self.breakpoints[j + 1]);
            for (a, b) in u.parts() {
                let l = a.max(lo);
                let r = b.min(hi);
                if l < r {
                    total += f * (r - l);
                }
            }
        }
        total
    }

    pub fn total(&self) -> Q {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(f, w)| f * (&w[1] - &w[0]))
            .sum()
    }
}

/// Exact Lebesgue measure.
pub fn lebesgue(u: &IntervalSet) -> Rank {
    Rank::Finite(u.lebesgue())
}

/// `ν(u) = ∫_u f dμ`; `u` must lie in the support of `f`.
pub fn nu_eval(f: &StepDensity, u: &IntervalSet) -> Result<Rank> {
    u.check_within(&Ambient::Bounded(f.end().clone()))?;
    Ok(Rank::Finite(f.integrate(u)))
}

/// A grading on the interval lattice: the base measure or a density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// The lattice's own rank function: Lebesgue measure here, the standard
    /// rank on finite lattices.
    Rank,
    Density(StepDensity),
}

impl Grading {
    pub fn eval(&self, u: &IntervalSet) -> Q {
        match self {
            Grading::Rank => u.lebesgue(),
            Grading::Density(f) => f.integrate(u),
        }
    }

    fn breakpoints(&self) -> &[Q] {
        match self {
            Grading::Rank => &[],
            Grading::Density(f) => f.breakpoints(),
        }
    }
}

/// Interval unions ordered by inclusion and graded by `grading`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalLattice {
    ambient: Ambient,
    grading: Grading,
}

impl IntervalLattice {
    pub fn new(ambient: Ambient, grading: Grading) -> Result<Self> {
        match (&ambient, &grading) {
            (Ambient::Bounded(t), Grading::Density(f)) if f.end() != t => {
                Err(Error::AmbientMismatch(format!(
                    "density supported on (0, {}] but ambient is (0, {}]",
                    fmt_q(f.end()),
                    fmt_q(t)
                )))
            }
            (Ambient::Unbounded, Grading::Density(_)) => Err(Error::AmbientMismatch(
                "densities need a bounded ambient".into(),
            )),
            (Ambient::Bounded(t), _) if !t.is_positive() => Err(Error::OutOfRange {
                value: fmt_q(t),
                range: "(0, ∞)".into(),
            }),
            _ => Ok(IntervalLattice { ambient, grading }),
        }
    }

    /// `(0, t]` graded by Lebesgue measure.
    pub fn bounded(t: Q) -> Result<Self> {
        IntervalLattice::new(Ambient::bounded(t)?, Grading::Rank)
    }

    /// Bounded subsets of `ℝ` graded by Lebesgue measure; no top.
    pub fn unbounded() -> Self {
        IntervalLattice {
            ambient: Ambient::Unbounded,
            grading: Grading::Rank,
        }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    fn end(&self) -> Result<&Q> {
        self.ambient
            .end()
            .ok_or_else(|| Error::Precondition("operation needs a bounded ambient".into()))
    }

    /// Builds an element, rejecting endpoints outside the ambient.
    pub fn normalize(&self, raw: Vec<(Q, Q)>) -> Result<IntervalSet> {
        IntervalSet::normalize_in(raw, &self.ambient)
    }

    pub fn element(&self, s: &str) -> Result<IntervalSet> {
        let u: IntervalSet = s.parse()?;
        u.check_within(&self.ambient)?;
        Ok(u)
    }

    pub fn complement(&self, u: &IntervalSet) -> Result<IntervalSet> {
        match &self.ambient {
            Ambient::Bounded(t) => {
                u.check_within(&self.ambient)?;
                Ok(u.complement_in(t))
            }
            Ambient::Unbounded => Err(Error::UnboundedComplement),
        }
    }

    /// Like [`GradedLattice::meet`] but checks both operands against the ambient.
    pub fn checked_meet(&self, u: &IntervalSet, v: &IntervalSet) -> Result<IntervalSet> {
        u.check_within(&self.ambient)?;
        v.check_within(&self.ambient)?;
        Ok(u.meet(v))
    }

    pub fn checked_join(&self, u: &IntervalSet, v: &IntervalSet) -> Result<IntervalSet> {
        u.check_within(&self.ambient)?;
        v.check_within(&self.ambient)?;
        Ok(u.join(v))
    }

    /// The chief-chain element of Lebesgue rank `λ`: `(0, λ]` when bounded,
    /// the centred interval `(−λ/2, λ/2]` when unbounded.
    pub fn chief_element(&self, lambda: &Q) -> Result<IntervalSet> {
        if lambda.is_negative() {
            return Err(Error::OutOfRange {
                value: fmt_q(lambda),
                range: "[0, T]".into(),
            });
        }
        if lambda.is_zero() {
            return Ok(IntervalSet::empty());
        }
        match &self.ambient {
            Ambient::Bounded(t) => {
                if lambda > t {
                    return Err(Error::OutOfRange {
                        value: fmt_q(lambda),
                        range: format!("[0, {}]", fmt_q(t)),
                    });
                }
                IntervalSet::interval(Q::zero(), lambda.clone())
            }
            Ambient::Unbounded => {
                let half = lambda / qi(2);
                IntervalSet::interval(-half.clone(), half)
            }
        }
    }

    fn profile_knots(&self, z: &IntervalSet, grading: &Grading) -> Result<Vec<Q>> {
        let t = self.end()?;
        z.check_within(&self.ambient)?;
        let mut xs: Vec<Q> = [Q::zero(), t.clone()]
            .into_iter()
            .chain(z.endpoints().cloned())
            .chain(grading.breakpoints().iter().filter(|x| *x <= t).cloned())
            .collect();
        xs.sort();
        xs.dedup();
        Ok(xs)
    }

    /// `λ ↦ grading(m_λ ∧ z)` on `[0, T]`, exactly.
    pub fn meet_profile(
        &self,
        z: &IntervalSet,
        grading: &Grading,
    ) -> Result<PiecewiseLinearProfile> {
        let knots = self
            .profile_knots(z, grading)?
            .into_iter()
            .map(|x| Ok((x.clone(), grading.eval(&self.chief_element(&x)?.meet(z)))))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseLinearProfile::from_knots(knots)
    }

    /// `λ ↦ grading(m_λ ∨ z)` on `[0, T]`, exactly.
    pub fn join_profile(
        &self,
        z: &IntervalSet,
        grading: &Grading,
    ) -> Result<PiecewiseLinearProfile> {
        let knots = self
            .profile_knots(z, grading)?
            .into_iter()
            .map(|x| Ok((x.clone(), grading.eval(&self.chief_element(&x)?.join(z)))))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseLinearProfile::from_knots(knots)
    }
}

impl GradedLattice for IntervalLattice {
    type Elem = IntervalSet;

    fn meet(&self, x: &IntervalSet, y: &IntervalSet) -> IntervalSet {
        x.meet(y)
    }

    fn join(&self, x: &IntervalSet, y: &IntervalSet) -> IntervalSet {
        x.join(y)
    }

    fn rank(&self, x: &IntervalSet) -> Rank {
        Rank::Finite(self.grading.eval(x))
    }

    fn bottom(&self) -> Option<IntervalSet> {
        Some(IntervalSet::empty())
    }

    fn top(&self) -> Option<IntervalSet> {
        match &self.ambient {
            Ambient::Bounded(t) => Some(IntervalSet {
                parts: vec![(Q::zero(), t.clone())],
            }),
            Ambient::Unbounded => None,
        }
    }

    fn validate(&self, x: &IntervalSet) -> Result<()> {
        x.check_within(&self.ambient)
    }
}

/// Scan of the bounded-measurable-sets lattice contrasting the chain
/// `c_κ = (1, 1+κ]` with the chief chain `m_λ = (−λ/2, λ/2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedChainDemo {
    pub target: IntervalSet,
    pub target_measure: Rank,
    /// `(κ, μ(c_κ ∧ y))`
    pub chain_scan: Vec<(Rank, Rank)>,
    /// `(λ, μ(m_λ ∧ y))`
    pub chief_scan: Vec<(Rank, Rank)>,
}

impl BoundedChainDemo {
    pub fn chain_sup(&self) -> Rank {
        self.chain_scan
            .iter()
            .map(|r| r.1.clone())
            .max()
            .unwrap_or(Rank::zero())
    }

    pub fn chief_sup(&self) -> Rank {
        self.chief_scan
            .iter()
            .map(|r| r.1.clone())
            .max()
            .unwrap_or(Rank::zero())
    }

    /// Meets along `c_κ` never recover `y`.
    pub fn chain_fails(&self) -> bool {
        self.chain_sup() != self.target_measure
    }

    /// Meets along the chief chain reach `μ(y)`.
    pub fn chief_recovers(&self) -> bool {
        self.chief_sup() == self.target_measure
    }
}

pub fn bounded_chain_demo(
    kappas: &[Q],
    lambdas: &[Q],
    y: &IntervalSet,
) -> Result<BoundedChainDemo> {
    let l = IntervalLattice::unbounded();
    let one = qi(1);
    let chain_scan = kappas
        .iter()
        .map(|k| {
            let c = IntervalSet::interval(one.clone(), &one + k)?;
            Ok((Rank::Finite(k.clone()), l.rank(&c.meet(y))))
        })
        .collect::<Result<Vec<_>>>()?;
    let chief_scan = lambdas
        .iter()
        .map(|lam| {
            Ok((
                Rank::Finite(lam.clone()),
                l.rank(&l.chief_element(lam)?.meet(y)),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundedChainDemo {
        target: y.clone(),
        target_measure: l.rank(y),
        chain_scan,
        chief_scan,
    })
}
