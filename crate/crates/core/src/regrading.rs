//! Regrading a rank-supersolvable lattice so that a given antichain cutset
//! becomes a level set.
//!
//! Every element `z` has a good chain `{z∧m_λ} ∪ {z∨m_λ}` through the chief
//! chain `m`. The chain crosses the cutset `A` exactly once, at `α(z)`, and the
//! new grading is `σ(z) = ρ(z) − ρ(α(z))`.

use std::collections::HashSet;
use std::fmt::Debug;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::finite::{
    enumerate_maximal_chains, is_antichain_cutset, level_set, ChiefChain, ElementCodec,
    FiniteLattice,
};
use crate::interval::{Ambient, Grading, IntervalLattice, IntervalSet, StepDensity};
use crate::lattice::{ChainSample, GradedLattice, JoinOrMeet};
use crate::rank::{fmt_q, qi, Rank, RankInterval, Q};

/// Description of an antichain cutset `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CutsetSpec {
    /// `{x : grading(x) = value}`.
    Level {
        grading: Grading,
        #[serde(with = "crate::rank::serde_q")]
        value: Q,
    },
    /// A finite list of elements in the family's JSON form.
    Explicit { elements: Vec<Value> },
}

impl CutsetSpec {
    pub fn level(grading: Grading, value: Q) -> Self {
        CutsetSpec::Level { grading, value }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoodChainPoint<E> {
    pub side: JoinOrMeet,
    pub lambda: Rank,
    pub element: E,
}

/// Where the good chain through `z` meets the cutset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionResult<E> {
    pub alpha: E,
    /// Smallest chief-chain parameter producing `alpha`.
    pub lambda_star: Rank,
    pub side: JoinOrMeet,
}

type Elem<R> = <<R as Regrader>::Lattice as GradedLattice>::Elem;

fn finite_rank<L: GradedLattice>(l: &L, x: &L::Elem) -> Result<Q> {
    l.rank(x).expect_finite("element").cloned()
}

/// The projection `α` onto a fixed cutset and the grading `σ` it induces.
pub trait Regrader {
    type Lattice: GradedLattice;

    fn lattice(&self) -> &Self::Lattice;

    fn project_alpha(&self, z: &Elem<Self>) -> Result<ProjectionResult<Elem<Self>>>;

    fn sigma_eval(&self, z: &Elem<Self>) -> Result<Q> {
        let l = self.lattice();
        let alpha = self.project_alpha(z)?.alpha;
        Ok(finite_rank(l, z)? - finite_rank(l, &alpha)?)
    }

    /// `σ(m∨x) + σ(m∧x) − σ(m) − σ(x)`.
    fn sigma_rank_modular_defect(&self, m: &Elem<Self>, x: &Elem<Self>) -> Result<Q> {
        let l = self.lattice();
        Ok(
            self.sigma_eval(&l.join(m, x))? + self.sigma_eval(&l.meet(m, x))?
                - self.sigma_eval(m)?
                - self.sigma_eval(x)?,
        )
    }

    /// Checks `σ(w) < σ(z)` on every pair; pairs must satisfy `w < z`.
    fn sigma_monotone_check(&self, pairs: &[(Elem<Self>, Elem<Self>)]) -> Result<MonotoneReport> {
        let l = self.lattice();
        for (w, z) in pairs {
            if !l.lt(w, z) {
                return Err(Error::Precondition(format!(
                    "pair is not strictly increasing: {w:?}, {z:?}"
                )));
            }
            let (sw, sz) = (self.sigma_eval(w)?, self.sigma_eval(z)?);
            if sw >= sz {
                return Ok(MonotoneReport {
                    checked: pairs.len(),
                    witness: Some(format!(
                        "σ({w:?}) = {} ≥ σ({z:?}) = {}",
                        fmt_q(&sw),
                        fmt_q(&sz)
                    )),
                });
            }
        }
        Ok(MonotoneReport {
            checked: pairs.len(),
            witness: None,
        })
    }

    /// For `w < z` both on or above the cutset: either `λ_w > λ_z` or
    /// `α(w) = α(z)`.
    fn alpha_order_check(
        &self,
        w: &Elem<Self>,
        z: &Elem<Self>,
    ) -> Result<AlphaOrderReport<Elem<Self>>> {
        if !self.lattice().lt(w, z) {
            return Err(Error::Precondition(format!(
                "alpha order check needs w < z, got {w:?}, {z:?}"
            )));
        }
        let (pw, pz) = (self.project_alpha(w)?, self.project_alpha(z)?);
        if pw.side != JoinOrMeet::Meet || pz.side != JoinOrMeet::Meet {
            return Err(Error::Precondition(
                "both elements must lie on or above the cutset".into(),
            ));
        }
        let holds = pw.lambda_star > pz.lambda_star || pw.alpha == pz.alpha;
        Ok(AlphaOrderReport {
            w: pw,
            z: pz,
            holds,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneReport {
    pub checked: usize,
    pub witness: Option<String>,
}

impl MonotoneReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaOrderReport<E> {
    pub w: ProjectionResult<E>,
    pub z: ProjectionResult<E>,
    pub holds: bool,
}

/// Which maximal chain a regrading table walks along.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainSpec<E> {
    Chief,
    /// The good chain through the seed element.
    GoodChain(E),
}

/// Maximality evidence for the good chain through `z` in the interval lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodChainReport {
    /// `(grading(∅), grading(z))` as reached by `λ ↦ grading(z∧m_λ)`.
    pub meet_range: (Rank, Rank),
    /// `(grading(z), grading(1̂))` as reached by `λ ↦ grading(z∨m_λ)`.
    pub join_range: (Rank, Rank),
    pub monotone: bool,
    /// Every profile piece agrees with a direct evaluation at its midpoint.
    pub pieces_verified: bool,
}

impl GoodChainReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.pieces_verified && self.meet_range.1 == self.join_range.0
    }
}

/// One row of a regrading table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegradeRow {
    #[serde(with = "crate::rank::serde_q")]
    pub lambda: Q,
    #[serde(with = "crate::rank::serde_q")]
    pub rho: Q,
    #[serde(with = "crate::rank::serde_q")]
    pub sigma: Q,
    pub element: IntervalSet,
    pub alpha: IntervalSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegradeTable {
    #[serde(with = "crate::rank::serde_q")]
    pub sigma_bottom: Q,
    #[serde(with = "crate::rank::serde_q")]
    pub sigma_top: Q,
    pub rows: Vec<RegradeRow>,
}

impl RegradeTable {
    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].sigma < w[1].sigma)
    }

    pub fn attains_endpoints(&self) -> bool {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) => a.sigma == self.sigma_bottom && b.sigma == self.sigma_top,
            _ => false,
        }
    }

    /// Largest difference between consecutive σ values.
    pub fn max_gap(&self) -> Q {
        self.rows
            .windows(2)
            .map(|w| &w[1].sigma - &w[0].sigma)
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// Regrading of the interval lattice over a bounded ambient `(0, T]` with the
/// cutset `{z : ν(z) = c}`.
///
/// The chief chain is `m_λ = (0, λ]` for `λ ∈ [0, T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalRegrader {
    lattice: IntervalLattice,
    cutset_grading: Grading,
    level: Q,
}

impl IntervalRegrader {
    pub fn new(lattice: IntervalLattice, cutset: &CutsetSpec) -> Result<Self> {
        let t = match lattice.ambient() {
            Ambient::Bounded(t) => t.clone(),
            Ambient::Unbounded => {
                return Err(Error::Precondition(
                    "regrading needs a bounded ambient".into(),
                ))
            }
        };
        let (grading, level) = match cutset {
            CutsetSpec::Level { grading, value } => (grading.clone(), value.clone()),
            CutsetSpec::Explicit { .. } => {
                return Err(Error::InvalidCutset(
                    "explicit cutsets are only supported on finite lattices".into(),
                ))
            }
        };
        if let Grading::Density(f) = &grading {
            if f.end() != &t {
                return Err(Error::AmbientMismatch(format!(
                    "cutset density ends at {}, ambient at {}",
                    fmt_q(f.end()),
                    fmt_q(&t)
                )));
            }
        }
        let total = grading.eval(&IntervalSet::interval(Q::zero(), t)?);
        if !level.is_positive() || level >= total {
            return Err(Error::InvalidCutset(format!(
                "level {} is not strictly inside (0, {})",
                fmt_q(&level),
                fmt_q(&total)
            )));
        }
        Ok(IntervalRegrader {
            lattice,
            cutset_grading: grading,
            level,
        })
    }

    /// Ambient `(0, 2]`, density 1 on `(0,1]` and 2 on `(1,2]`, level 1.
    pub fn two_step_example() -> Self {
        let f =
            StepDensity::new(vec![qi(0), qi(1), qi(2)], vec![qi(1), qi(2)]).expect("valid density");
        let l = IntervalLattice::bounded(qi(2)).expect("positive end");
        IntervalRegrader::new(l, &CutsetSpec::level(Grading::Density(f), qi(1)))
            .expect("valid cutset")
    }

    /// Same cutset level over the uniform density, where `σ = ρ − 1`.
    pub fn uniform_example() -> Self {
        let l = IntervalLattice::bounded(qi(2)).expect("positive end");
        IntervalRegrader::new(l, &CutsetSpec::level(Grading::Rank, qi(1))).expect("valid cutset")
    }

    pub fn interval_lattice(&self) -> &IntervalLattice {
        &self.lattice
    }

    pub fn cutset_grading(&self) -> &Grading {
        &self.cutset_grading
    }

    pub fn level(&self) -> &Q {
        &self.level
    }

    pub fn end(&self) -> &Q {
        self.lattice
            .ambient()
            .end()
            .expect("bounded by construction")
    }

    pub fn top(&self) -> IntervalSet {
        self.lattice.top().expect("bounded by construction")
    }

    /// The cutset grading `ν`.
    pub fn nu(&self, z: &IntervalSet) -> Result<Q> {
        z.check_within(self.lattice.ambient())?;
        Ok(self.cutset_grading.eval(z))
    }

    pub fn rho(&self, z: &IntervalSet) -> Q {
        self.lattice.grading().eval(z)
    }

    pub fn in_cutset(&self, z: &IntervalSet) -> Result<bool> {
        Ok(self.nu(z)? == self.level)
    }

    pub fn good_chain_eval(
        &self,
        z: &IntervalSet,
        lambda: &Q,
        side: JoinOrMeet,
    ) -> Result<GoodChainPoint<IntervalSet>> {
        z.check_within(self.lattice.ambient())?;
        let m = self.lattice.chief_element(lambda)?;
        let element = match side {
            JoinOrMeet::Meet => z.meet(&m),
            JoinOrMeet::Join => z.join(&m),
        };
        Ok(GoodChainPoint {
            side,
            lambda: Rank::Finite(lambda.clone()),
            element,
        })
    }

    /// Checks that `grading` takes every value in `[grading(∅), grading(1̂)]`
    /// along the good chain through `z`.
    pub fn good_chain_maximality_check(
        &self,
        z: &IntervalSet,
        grading: &Grading,
    ) -> Result<GoodChainReport> {
        let meet = self.lattice.meet_profile(z, grading)?;
        let join = self.lattice.join_profile(z, grading)?;
        let mut pieces_verified = true;
        for (profile, side) in [(&meet, JoinOrMeet::Meet), (&join, JoinOrMeet::Join)] {
            for w in profile.knots().windows(2) {
                let mid = (&w[0].0 + &w[1].0) / qi(2);
                let direct = grading.eval(&self.good_chain_eval(z, &mid, side)?.element);
                if direct != profile.eval(&mid)? {
                    pieces_verified = false;
                }
            }
        }
        let bottom = grading.eval(&IntervalSet::empty());
        let top = grading.eval(&self.top());
        let here = grading.eval(z);
        let ends_ok = meet.start_value() == &bottom
            && meet.end_value() == &here
            && join.start_value() == &here
            && join.end_value() == &top;
        Ok(GoodChainReport {
            meet_range: (
                Rank::Finite(meet.start_value().clone()),
                Rank::Finite(meet.end_value().clone()),
            ),
            join_range: (
                Rank::Finite(join.start_value().clone()),
                Rank::Finite(join.end_value().clone()),
            ),
            monotone: meet.is_weakly_increasing() && join.is_weakly_increasing(),
            pieces_verified: pieces_verified && ends_ok,
        })
    }

    /// The element of ρ-rank `t` on the chosen chain, with its chief parameter.
    pub fn element_at_rank(
        &self,
        chain: &ChainSpec<IntervalSet>,
        t: &Q,
    ) -> Result<(Q, IntervalSet)> {
        let empty = IntervalSet::empty();
        let seed = match chain {
            ChainSpec::Chief => &empty,
            ChainSpec::GoodChain(w) => w,
        };
        let grading = self.lattice.grading();
        let top = self.rho(&self.top());
        if t.is_negative() || t > &top {
            return Err(Error::OutOfRange {
                value: fmt_q(t),
                range: format!("[0, {}]", fmt_q(&top)),
            });
        }
        let (profile, side) = if t <= &self.rho(seed) {
            (self.lattice.meet_profile(seed, grading)?, JoinOrMeet::Meet)
        } else {
            (self.lattice.join_profile(seed, grading)?, JoinOrMeet::Join)
        };
        let lambda = profile.min_preimage(t).ok_or_else(|| {
            Error::Internal(format!("rank {} not reached on the chain", fmt_q(t)))
        })?;
        let element = self.good_chain_eval(seed, &lambda, side)?.element;
        Ok((lambda, element))
    }

    /// σ along a chain at the ρ-ranks `0, step, 2·step, …, ρ(1̂)`.
    pub fn regrade_table(&self, chain: &ChainSpec<IntervalSet>, step: &Q) -> Result<RegradeTable> {
        if !step.is_positive() {
            return Err(Error::Precondition(format!(
                "grid step {} must be positive",
                fmt_q(step)
            )));
        }
        let top = self.rho(&self.top());
        let mut ts = Vec::new();
        let mut t = Q::zero();
        while t < top {
            ts.push(t.clone());
            t += step;
        }
        ts.push(top);
        let rows = ts
            .into_iter()
            .map(|t| {
                let (lambda, element) = self.element_at_rank(chain, &t)?;
                let alpha = self.project_alpha(&element)?.alpha;
                let sigma = &t - self.rho(&alpha);
                Ok(RegradeRow {
                    lambda,
                    rho: t,
                    sigma,
                    element,
                    alpha,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RegradeTable {
            sigma_bottom: self.sigma_eval(&IntervalSet::empty())?,
            sigma_top: self.sigma_eval(&self.top())?,
            rows,
        })
    }

    /// Affine image of a σ value under `[σ(0̂), σ(1̂)] → target`.
    pub fn rescale(&self, sigma: &Q, target: &RankInterval) -> Result<Q> {
        let source = RankInterval::new(
            Rank::Finite(self.sigma_eval(&IntervalSet::empty())?),
            Rank::Finite(self.sigma_eval(&self.top())?),
        )?;
        source.affine_to(target, sigma)
    }
}

impl Regrader for IntervalRegrader {
    type Lattice = IntervalLattice;

    fn lattice(&self) -> &IntervalLattice {
        &self.lattice
    }

    fn project_alpha(&self, z: &IntervalSet) -> Result<ProjectionResult<IntervalSet>> {
        let side = if self.nu(z)? >= self.level {
            JoinOrMeet::Meet
        } else {
            JoinOrMeet::Join
        };
        let profile = match side {
            JoinOrMeet::Meet => self.lattice.meet_profile(z, &self.cutset_grading)?,
            JoinOrMeet::Join => self.lattice.join_profile(z, &self.cutset_grading)?,
        };
        let lambda = profile.min_preimage(&self.level).ok_or_else(|| {
            Error::InvalidCutset(format!(
                "good chain through {z} misses level {}",
                fmt_q(&self.level)
            ))
        })?;
        let alpha = self.good_chain_eval(z, &lambda, side)?.element;
        Ok(ProjectionResult {
            alpha,
            lambda_star: Rank::Finite(lambda),
            side,
        })
    }
}

/// Regrading of a finite lattice along its chief chain.
#[derive(Clone, Debug)]
pub struct FiniteRegrader<L: FiniteLattice> {
    lattice: L,
    chief: Vec<L::Elem>,
    cutset: Vec<L::Elem>,
}

/// Result of checking σ on every maximal chain of a finite lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub chains: usize,
    /// `σ(0̂), σ(0̂)+1, …, σ(1̂)`.
    #[serde(with = "crate::rank::serde_q_vec")]
    pub values: Vec<Q>,
    pub witness: Option<String>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl<L: ChiefChain> FiniteRegrader<L> {
    /// Validates `cutset` as an antichain cutset and fixes the chief chain.
    pub fn new(lattice: L, cutset: Vec<L::Elem>) -> Result<Self> {
        if cutset.is_empty() || !is_antichain_cutset(&lattice, &cutset)? {
            return Err(Error::InvalidCutset(format!(
                "the {} given elements do not form an antichain meeting every maximal chain",
                cutset.len()
            )));
        }
        let chief = lattice.chief_chain()?.elements().cloned().collect();
        Ok(FiniteRegrader {
            lattice,
            chief,
            cutset,
        })
    }

    pub fn from_spec(lattice: L, spec: &CutsetSpec) -> Result<Self>
    where
        L: ElementCodec,
    {
        let cutset = match spec {
            CutsetSpec::Level {
                grading: Grading::Rank,
                value,
            } => {
                let top = lattice
                    .top()
                    .map(|t| lattice.rank(&t))
                    .unwrap_or(Rank::PosInf);
                if !value.is_positive() || Rank::Finite(value.clone()) >= top {
                    return Err(Error::InvalidCutset(format!(
                        "level {} is not strictly between the bottom and top ranks",
                        fmt_q(value)
                    )));
                }
                level_set(&lattice, &Rank::Finite(value.clone()))?
            }
            CutsetSpec::Level {
                grading: Grading::Density(_),
                ..
            } => {
                return Err(Error::InvalidCutset(
                    "densities apply to the interval lattice only".into(),
                ))
            }
            CutsetSpec::Explicit { elements } => elements
                .iter()
                .map(|v| lattice.decode_json(v))
                .collect::<Result<Vec<_>>>()?,
        };
        FiniteRegrader::new(lattice, cutset)
    }

    pub fn cutset(&self) -> &[L::Elem] {
        &self.cutset
    }

    pub fn chief(&self) -> &[L::Elem] {
        &self.chief
    }

    /// `z∧m_0, …, z∧m_r, z∨m_0, …, z∨m_r` with `λ` the chief rank.
    pub fn good_chain(&self, z: &L::Elem) -> Vec<GoodChainPoint<L::Elem>> {
        let l = &self.lattice;
        let meets = self.chief.iter().map(|m| GoodChainPoint {
            side: JoinOrMeet::Meet,
            lambda: l.rank(m),
            element: l.meet(z, m),
        });
        let joins = self.chief.iter().map(|m| GoodChainPoint {
            side: JoinOrMeet::Join,
            lambda: l.rank(m),
            element: l.join(z, m),
        });
        meets.chain(joins).collect()
    }

    pub fn good_chain_saturated(&self, z: &L::Elem) -> bool {
        let elems: Vec<L::Elem> = self.good_chain(z).into_iter().map(|p| p.element).collect();
        is_saturated_path(&self.lattice, &elems)
    }

    /// Checks on every maximal chain that σ runs through consecutive values
    /// from `σ(0̂)` to `σ(1̂)`, and that `σ⁻¹(0)` is the cutset.
    pub fn cross_check(&self) -> Result<CrossCheckReport> {
        let l = &self.lattice;
        let (bottom, top) = match (l.bottom(), l.top()) {
            (Some(b), Some(t)) => (b, t),
            _ => return Err(Error::Precondition("finite lattice without extrema".into())),
        };
        let lo = self.sigma_eval(&bottom)?;
        let hi = self.sigma_eval(&top)?;
        let mut values = Vec::new();
        let mut v = lo.clone();
        while v <= hi {
            values.push(v.clone());
            v += qi(1);
        }
        let chains = enumerate_maximal_chains(l)?;
        let fail = |witness: String| CrossCheckReport {
            chains: chains.len(),
            values: values.clone(),
            witness: Some(witness),
        };
        for chain in &chains {
            let sig = chain
                .iter()
                .map(|x| self.sigma_eval(x))
                .collect::<Result<Vec<_>>>()?;
            if sig != values {
                let shown: Vec<String> = sig.iter().map(fmt_q).collect();
                return Ok(fail(format!("σ along {chain:?} is [{}]", shown.join(", "))));
            }
        }
        let cutset: HashSet<&L::Elem> = self.cutset.iter().collect();
        for x in l.elements()? {
            let zero = self.sigma_eval(&x)?.is_zero();
            if zero != cutset.contains(&x) {
                return Ok(fail(format!(
                    "σ({x:?}) = 0 is {zero} but cutset membership is {}",
                    !zero
                )));
            }
        }
        Ok(CrossCheckReport {
            chains: chains.len(),
            values,
            witness: None,
        })
    }
}

impl<L: ChiefChain> Regrader for FiniteRegrader<L> {
    type Lattice = L;

    fn lattice(&self) -> &L {
        &self.lattice
    }

    fn project_alpha(&self, z: &L::Elem) -> Result<ProjectionResult<L::Elem>> {
        self.good_chain(z)
            .into_iter()
            .find(|p| self.cutset.contains(&p.element))
            .map(|p| ProjectionResult {
                alpha: p.element,
                lambda_star: p.lambda,
                side: p.side,
            })
            .ok_or_else(|| {
                Error::InvalidCutset(format!("good chain through {z:?} misses the cutset"))
            })
    }
}

/// After removing repeats, `elems` climbs from `0̂` to `1̂` one rank at a time.
pub fn is_saturated_path<L: GradedLattice>(l: &L, elems: &[L::Elem]) -> bool {
    let mut path: Vec<&L::Elem> = elems.iter().collect();
    path.dedup();
    let ends =
        path.first().cloned().cloned() == l.bottom() && path.last().cloned().cloned() == l.top();
    ends && path.windows(2).all(|w| {
        l.lt(w[0], w[1])
            && matches!(l.rank(w[1]).checked_sub(&l.rank(w[0])), Ok(d) if d == Rank::int(1))
    })
}

/// Evidence that `{m∧c} ∪ {m∨c}` is a maximal chain when `c` is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReversedChainReport {
    pub is_chain: bool,
    pub reaches_ends: bool,
    pub max_gap_original: Rank,
    pub max_gap_reversed: Rank,
}

impl ReversedChainReport {
    /// Rank gaps never widen, so refining `c` refines the reversed chain.
    pub fn passed(&self) -> bool {
        self.is_chain && self.reaches_ends && self.max_gap_reversed <= self.max_gap_original
    }
}

fn max_gap<L: GradedLattice>(l: &L, path: &[&L::Elem]) -> Result<Rank> {
    let mut worst = Rank::zero();
    for w in path.windows(2) {
        let gap = l.rank(w[1]).checked_sub(&l.rank(w[0]))?;
        if gap > worst {
            worst = gap;
        }
    }
    Ok(worst)
}

/// Compares a sampled chain running from `0̂` to `1̂` with its reversal
/// through `m`.
pub fn reversed_chain_check<L: GradedLattice>(
    l: &L,
    m: &L::Elem,
    chain: &ChainSample<L::Elem>,
) -> Result<ReversedChainReport> {
    let original: Vec<&L::Elem> = chain.elements().collect();
    let reversed: Vec<L::Elem> = original
        .iter()
        .map(|c| l.meet(m, c))
        .chain(original.iter().map(|c| l.join(m, c)))
        .collect();
    let mut path: Vec<&L::Elem> = reversed.iter().collect();
    path.dedup();
    let is_chain = path.windows(2).all(|w| l.lt(w[0], w[1]));
    let ends = |p: &[&L::Elem]| {
        p.first().map(|x| (*x).clone()) == l.bottom() && p.last().map(|x| (*x).clone()) == l.top()
    };
    Ok(ReversedChainReport {
        is_chain,
        reaches_ends: ends(&original) && ends(&path),
        max_gap_original: max_gap(l, &original)?,
        max_gap_reversed: max_gap(l, &path)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionStatus {
    Holds,
    Fails,
    /// The grading codomain is bounded on this side.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionRow {
    pub label: &'static str,
    pub status: ConditionStatus,
    pub target: Option<Rank>,
    /// Last value of the monotone scan.
    pub reached: Option<Rank>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainExtReport {
    pub conditions: [ConditionRow; 4],
}

impl MainExtReport {
    /// 1-based indices of the failing conditions.
    pub fn failing(&self) -> Vec<usize> {
        (1..=4)
            .filter(|i| self.conditions[i - 1].status == ConditionStatus::Fails)
            .collect()
    }
}

/// Sampled data for the four continuity-at-infinity conditions.
///
/// `chain_up`/`chief_up` approach `+∞` in rank, `chain_down`/`chief_down`
/// approach `−∞`.
#[derive(Clone, Debug)]
pub struct HypothesisSamples<E> {
    pub m0: E,
    pub z: E,
    pub chain_up: Vec<E>,
    pub chain_down: Vec<E>,
    pub chief_up: Vec<E>,
    pub chief_down: Vec<E>,
    pub bounded_above: bool,
    pub bounded_below: bool,
}

fn limit_row<L: GradedLattice>(
    l: &L,
    label: &'static str,
    vacuous: bool,
    target: &L::Elem,
    scan: &[L::Elem],
    upward: bool,
) -> Result<ConditionRow> {
    if vacuous {
        return Ok(ConditionRow {
            label,
            status: ConditionStatus::Vacuous,
            target: None,
            reached: None,
        });
    }
    let ranks: Vec<Rank> = scan.iter().map(|x| l.rank(x)).collect();
    let last = ranks
        .last()
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("no samples for condition `{label}`")))?;
    let monotone = ranks
        .windows(2)
        .all(|w| if upward { w[0] <= w[1] } else { w[0] >= w[1] });
    let goal = l.rank(target);
    let status = if monotone && last == goal {
        ConditionStatus::Holds
    } else {
        ConditionStatus::Fails
    };
    Ok(ConditionRow {
        label,
        status,
        target: Some(goal),
        reached: Some(last),
    })
}

/// Evaluates the four sup/inf conditions through the ranks of monotone scans.
pub fn main_ext_hypothesis_check<L: GradedLattice>(
    l: &L,
    s: &HypothesisSamples<L::Elem>,
) -> Result<MainExtReport> {
    let meets = |xs: &[L::Elem], y: &L::Elem| xs.iter().map(|x| l.meet(x, y)).collect::<Vec<_>>();
    let joins = |xs: &[L::Elem], y: &L::Elem| xs.iter().map(|x| l.join(x, y)).collect::<Vec<_>>();
    Ok(MainExtReport {
        conditions: [
            limit_row(
                l,
                "sup m0∧c = m0",
                s.bounded_above,
                &s.m0,
                &meets(&s.chain_up, &s.m0),
                true,
            )?,
            limit_row(
                l,
                "inf m0∨c = m0",
                s.bounded_below,
                &s.m0,
                &joins(&s.chain_down, &s.m0),
                false,
            )?,
            limit_row(
                l,
                "sup m_λ∧z = z",
                s.bounded_above,
                &s.z,
                &meets(&s.chief_up, &s.z),
                true,
            )?,
            limit_row(
                l,
                "inf m_λ∨z = z",
                s.bounded_below,
                &s.z,
                &joins(&s.chief_down, &s.z),
                false,
            )?,
        ],
    })
}

fn scan_values() -> Vec<Q> {
    (0..=12).map(|k| qi(1 << k)).collect()
}

/// Bounded interval lattice `(0, T]`: every condition is vacuous.
pub fn bounded_interval_hypotheses(t: Q) -> Result<MainExtReport> {
    let l = IntervalLattice::bounded(t.clone())?;
    let z = IntervalSet::interval(Q::zero(), t.clone())?;
    let s = HypothesisSamples {
        m0: l.chief_element(&(&t / qi(2)))?,
        z,
        chain_up: vec![],
        chain_down: vec![],
        chief_up: vec![],
        chief_down: vec![],
        bounded_above: true,
        bounded_below: true,
    };
    main_ext_hypothesis_check(&l, &s)
}

/// Bounded measurable sets of the line with chief chain `(−λ/2, λ/2]` and the
/// chain `c_κ = (1, 1+κ]`.
pub fn bounded_measurable_hypotheses() -> Result<MainExtReport> {
    let l = IntervalLattice::unbounded();
    let one = qi(1);
    let chain_up = scan_values()
        .into_iter()
        .map(|k| IntervalSet::interval(one.clone(), &one + k))
        .collect::<Result<Vec<_>>>()?;
    let chief_up = scan_values()
        .iter()
        .map(|lam| l.chief_element(lam))
        .collect::<Result<Vec<_>>>()?;
    let s = HypothesisSamples {
        m0: l.chief_element(&qi(2))?,
        z: "(-3,-1] ∪ (1/2,5]".parse()?,
        chain_up,
        chain_down: vec![],
        chief_up,
        chief_down: vec![],
        bounded_above: false,
        bounded_below: true,
    };
    main_ext_hypothesis_check(&l, &s)
}

/// The plane `ℝ×ℝ` with diagonal chief chain `(t, t)` and the chain `(0, b)`.
pub fn product_plane_hypotheses() -> Result<MainExtReport> {
    use crate::finite::{ProductPlane, ProductPlanePoint};
    let up = scan_values();
    let pt = |a: Q, b: Q| ProductPlanePoint::pair(a, b);
    let s = HypothesisSamples {
        m0: pt(qi(1), qi(1)),
        z: pt(qi(3), qi(-2)),
        chain_up: up.iter().map(|b| pt(Q::zero(), b.clone())).collect(),
        chain_down: up.iter().map(|b| pt(Q::zero(), -b)).collect(),
        chief_up: up.iter().map(|t| pt(t.clone(), t.clone())).collect(),
        chief_down: up.iter().map(|t| pt(-t, -t)).collect(),
        bounded_above: false,
        bounded_below: false,
    };
    main_ext_hypothesis_check(&ProductPlane, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{antichain_cutsets_exhaustive, BooleanLattice, PartitionLattice};
    use crate::rank::q;

    fn set(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    fn ex() -> IntervalRegrader {
        IntervalRegrader::two_step_example()
    }

    /// Smallest grid `λ` at which `ν(m_λ)` reaches the level, found by scanning.
    fn grid_crossing(r: &IntervalRegrader, den: i64) -> Q {
        (0..=2 * den)
            .map(|k| q(k, den))
            .find(|lam| {
                r.nu(&r.interval_lattice().chief_element(lam).unwrap())
                    .unwrap()
                    >= *r.level()
            })
            .unwrap()
    }

    #[test]
    fn good_chain_points() {
        let r = ex();
        let z = set("(1,2]");
        assert_eq!(
            r.good_chain_eval(&z, &qi(0), JoinOrMeet::Meet)
                .unwrap()
                .element,
            IntervalSet::empty()
        );
        assert_eq!(
            r.good_chain_eval(&z, &qi(2), JoinOrMeet::Join)
                .unwrap()
                .element,
            r.top()
        );
        assert_eq!(
            r.good_chain_eval(&z, &q(3, 2), JoinOrMeet::Meet)
                .unwrap()
                .element,
            set("(1,3/2]")
        );
        assert!(r.good_chain_eval(&z, &qi(3), JoinOrMeet::Meet).is_err());
    }

    #[test]
    fn projections_of_the_two_step_example() {
        let r = ex();
        let p = r.project_alpha(&set("(1,2]")).unwrap();
        assert_eq!(
            (p.alpha, p.lambda_star, p.side),
            (set("(1,3/2]"), Rank::ratio(3, 2), JoinOrMeet::Meet)
        );
        assert_eq!(r.project_alpha(&set("(0,1]")).unwrap().alpha, set("(0,1]"));
        let p = r.project_alpha(&IntervalSet::empty()).unwrap();
        assert_eq!(
            (p.alpha, p.lambda_star.clone(), p.side),
            (set("(0,1]"), Rank::int(1), JoinOrMeet::Join)
        );
        // A dense scan brackets the same crossing.
        let hit = grid_crossing(&r, 64);
        assert_eq!(Rank::Finite(hit.clone()), p.lambda_star);
        assert!(
            r.nu(&r
                .interval_lattice()
                .chief_element(&(hit - q(1, 64)))
                .unwrap())
                .unwrap()
                < qi(1)
        );
    }

    #[test]
    fn sigma_values_of_the_two_step_example() {
        let r = ex();
        for t in [qi(1), q(5, 4), q(3, 2), qi(2)] {
            let z = IntervalSet::interval(qi(0), t.clone()).unwrap();
            assert_eq!(r.sigma_eval(&z).unwrap(), t - qi(1));
        }
        assert_eq!(r.sigma_eval(&set("(1,2]")).unwrap(), q(1, 2));
        assert_eq!(r.sigma_eval(&IntervalSet::empty()).unwrap(), qi(-1));
        assert_eq!(
            r.sigma_rank_modular_defect(&set("(0,1]"), &set("(1,2]"))
                .unwrap(),
            q(-1, 2)
        );
        assert_eq!(
            r.sigma_rank_modular_defect(&IntervalSet::empty(), &set("(1,2]"))
                .unwrap(),
            qi(0)
        );
        let u = IntervalRegrader::uniform_example();
        assert_eq!(
            u.sigma_rank_modular_defect(&set("(0,1]"), &set("(1,2]"))
                .unwrap(),
            qi(0)
        );
    }

    #[test]
    fn elements_below_the_cutset_project_upward() {
        let r = ex();
        let p = r.project_alpha(&set("(3/2,7/4]")).unwrap();
        assert_eq!(p.side, JoinOrMeet::Join);
        assert_eq!(r.nu(&p.alpha).unwrap(), qi(1));
        assert!(r.lattice().leq(&set("(3/2,7/4]"), &p.alpha));
        assert!(r.sigma_eval(&set("(3/2,7/4]")).unwrap().is_negative());
    }

    #[test]
    fn good_chains_are_maximal() {
        let r = ex();
        let g = r
            .good_chain_maximality_check(&set("(1,2]"), &Grading::Rank)
            .unwrap();
        assert!(g.passed());
        assert_eq!(g.meet_range, (Rank::zero(), Rank::int(1)));
        assert_eq!(g.join_range, (Rank::int(1), Rank::int(2)));
        assert!(r
            .good_chain_maximality_check(&IntervalSet::empty(), r.cutset_grading())
            .unwrap()
            .passed());
    }

    #[test]
    fn regrade_table_along_the_chief_chain() {
        let r = ex();
        let t = r.regrade_table(&ChainSpec::Chief, &q(1, 4)).unwrap();
        assert_eq!(t.rows.len(), 9);
        assert!(t.strictly_increasing() && t.attains_endpoints());
        assert_eq!(
            (t.sigma_bottom.clone(), t.sigma_top.clone()),
            (qi(-1), qi(1))
        );
        let coarse = r.regrade_table(&ChainSpec::Chief, &qi(5)).unwrap();
        assert_eq!(
            coarse
                .rows
                .iter()
                .map(|x| x.sigma.clone())
                .collect::<Vec<_>>(),
            vec![qi(-1), qi(1)]
        );
        let seeded = r
            .regrade_table(&ChainSpec::GoodChain(set("(1,2]")), &q(1, 8))
            .unwrap();
        assert!(seeded.strictly_increasing() && seeded.attains_endpoints());
        assert!(r.regrade_table(&ChainSpec::Chief, &qi(0)).is_err());
    }

    #[test]
    fn uniform_density_gives_a_shifted_rank() {
        let u = IntervalRegrader::uniform_example();
        for s in ["(1/2,2]", "(0,1/3] ∪ (1,3/2]", "(3/2,2]"] {
            let z = set(s);
            assert_eq!(u.sigma_eval(&z).unwrap(), z.lebesgue() - qi(1));
        }
    }

    #[test]
    fn alpha_order() {
        let r = ex();
        let rep = r.alpha_order_check(&set("(1,3/2]"), &set("(1,2]")).unwrap();
        assert!(rep.holds && rep.w.alpha == rep.z.alpha);
        let rep = r.alpha_order_check(&set("(0,5/4]"), &set("(0,2]")).unwrap();
        assert!(rep.holds);
        assert!(r.alpha_order_check(&set("(0,2]"), &set("(0,1]")).is_err());
        assert!(r
            .alpha_order_check(&IntervalSet::empty(), &set("(0,2]"))
            .is_err());
    }

    #[test]
    fn monotone_pairs() {
        let r = ex();
        let pairs = vec![
            (IntervalSet::empty(), set("(0,2]")),
            (set("(0,1]"), set("(0,3/2]")),
        ];
        assert!(r.sigma_monotone_check(&pairs).unwrap().passed());
        assert!(r
            .sigma_monotone_check(&[(set("(0,2]"), set("(0,1]"))])
            .is_err());
    }

    #[test]
    fn cutset_validation() {
        let l = IntervalLattice::bounded(qi(2)).unwrap();
        assert!(
            IntervalRegrader::new(l.clone(), &CutsetSpec::level(Grading::Rank, qi(2))).is_err()
        );
        assert!(
            IntervalRegrader::new(l.clone(), &CutsetSpec::level(Grading::Rank, qi(0))).is_err()
        );
        assert!(
            IntervalRegrader::new(l.clone(), &CutsetSpec::Explicit { elements: vec![] }).is_err()
        );
        let f = StepDensity::uniform(qi(3)).unwrap();
        assert!(IntervalRegrader::new(l, &CutsetSpec::level(Grading::Density(f), qi(1))).is_err());
        assert!(IntervalRegrader::new(
            IntervalLattice::unbounded(),
            &CutsetSpec::level(Grading::Rank, qi(1))
        )
        .is_err());
    }

    #[test]
    fn cutset_json_forms() {
        let spec: CutsetSpec = serde_json::from_str(
            r#"{"type":"level","grading":{"density":{"breakpoints":["0/1","1/1","2/1"],"values":["1/1","2/1"]}},"value":"1/1"}"#,
        )
        .unwrap();
        let r = IntervalRegrader::new(IntervalLattice::bounded(qi(2)).unwrap(), &spec).unwrap();
        assert_eq!(r, ex());
        let text = serde_json::to_string(&CutsetSpec::level(Grading::Rank, q(1, 2))).unwrap();
        assert_eq!(text, r#"{"type":"level","grading":"rank","value":"1/2"}"#);
        let explicit: CutsetSpec =
            serde_json::from_str(r#"{"type":"explicit","elements":[[1],[2]]}"#).unwrap();
        let b2 = FiniteRegrader::from_spec(BooleanLattice::new(2).unwrap(), &explicit).unwrap();
        assert_eq!(b2.cutset().len(), 2);
    }

    #[test]
    fn rescaling_is_affine() {
        let r = ex();
        let target = RankInterval::new(Rank::zero(), Rank::int(1)).unwrap();
        assert_eq!(r.rescale(&qi(-1), &target).unwrap(), qi(0));
        assert_eq!(r.rescale(&q(1, 2), &target).unwrap(), q(3, 4));
    }

    #[test]
    fn finite_good_chain_is_saturated() {
        let l = BooleanLattice::new(4).unwrap();
        let r = FiniteRegrader::new(l.clone(), level_set(&l, &Rank::int(2)).unwrap()).unwrap();
        let z = l.subset(&[1, 3]).unwrap();
        assert!(r.good_chain_saturated(&z));
        let mut distinct: Vec<_> = r.good_chain(&z).into_iter().map(|p| p.element).collect();
        distinct.dedup();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn reversed_chain_in_b4() {
        let l = BooleanLattice::new(4).unwrap();
        let chain: Vec<_> = [&[][..], &[3], &[3, 4], &[1, 3, 4], &[1, 2, 3, 4]]
            .iter()
            .map(|s| l.subset(s).unwrap())
            .collect();
        let c = ChainSample::new(&l, chain.clone()).unwrap();
        let rep = reversed_chain_check(&l, &l.subset(&[1, 2]).unwrap(), &c).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.max_gap_reversed, Rank::int(1));
        let same = reversed_chain_check(&l, &l.bottom().unwrap(), &c).unwrap();
        assert!(same.passed());
    }

    #[test]
    fn reversed_prefix_chain_in_the_interval_lattice() {
        let l = IntervalLattice::bounded(qi(2)).unwrap();
        let chain = (0..=16)
            .map(|k| l.chief_element(&q(k, 8)).unwrap())
            .collect();
        let c = ChainSample::new(&l, chain).unwrap();
        let rep = reversed_chain_check(&l, &set("(0,1]"), &c).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn finite_projection_lands_in_the_cutset() {
        let l = PartitionLattice::new(4).unwrap();
        let cutset = level_set(&l, &Rank::int(1)).unwrap();
        let r = FiniteRegrader::new(l.clone(), cutset.clone()).unwrap();
        for x in l.elements().unwrap() {
            let p = r.project_alpha(&x).unwrap();
            assert!(cutset.contains(&p.alpha));
            assert_eq!(
                r.sigma_eval(&x).unwrap(),
                finite_rank(&l, &x).unwrap() - qi(1)
            );
        }
        assert!(FiniteRegrader::new(l, vec![]).is_err());
    }

    #[test]
    fn finite_cross_check_on_all_b3_cutsets() {
        let l = BooleanLattice::new(3).unwrap();
        let cutsets = antichain_cutsets_exhaustive(&l).unwrap();
        assert!(cutsets.len() > 3);
        for a in cutsets {
            let rep = FiniteRegrader::new(l.clone(), a)
                .unwrap()
                .cross_check()
                .unwrap();
            assert!(rep.passed(), "{:?}", rep.witness);
            assert_eq!(rep.values.len(), 4);
        }
    }

    #[test]
    fn hypothesis_reports() {
        let bounded = bounded_interval_hypotheses(qi(2)).unwrap();
        assert!(bounded
            .conditions
            .iter()
            .all(|c| c.status == ConditionStatus::Vacuous));
        let bdd = bounded_measurable_hypotheses().unwrap();
        assert_eq!(bdd.failing(), vec![1]);
        assert_eq!(bdd.conditions[0].reached, Some(Rank::zero()));
        assert_eq!(bdd.conditions[2].status, ConditionStatus::Holds);
        let plane = product_plane_hypotheses().unwrap();
        assert_eq!(plane.failing(), vec![1]);
        assert_eq!(plane.conditions[0].target, Some(Rank::int(2)));
    }
}
