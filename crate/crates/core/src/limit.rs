//! Towers of lattices over the divisibility order.
//!
//! Level `n` of the Boolean tower is `B_n`; level `n` of the subspace tower is
//! the subspace lattice of `F_p^n`. For `k | n` the embedding `φ^{k,n}` is
//! rank-preserving after dividing ranks by the level. The completion is not
//! materialised: [`cauchy_approx`] produces grid approximants of an interval
//! union together with their up-down distances.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{BitSubset, BooleanLattice, FiniteLattice, Subspace, SubspaceLattice};
use crate::interval::IntervalSet;
use crate::lattice::GradedLattice;
use crate::rank::{q, qi, Rank, Q};

/// A lattice sitting at level `n` of a tower.
pub trait TowerLevel: GradedLattice {
    fn level(&self) -> u32;
}

impl TowerLevel for BooleanLattice {
    fn level(&self) -> u32 {
        self.n() as u32
    }
}

impl TowerLevel for SubspaceLattice {
    fn level(&self) -> u32 {
        self.n() as u32
    }
}

fn divides(k: u32, n: u32) -> Result<u32> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::NotDivisible { k, n });
    }
    Ok(n / k)
}

/// Standard rank divided by the level.
pub fn renormalized_rank<L: TowerLevel>(l: &L, x: &L::Elem) -> Result<Rank> {
    l.validate(x)?;
    let level = l.level();
    if level == 0 {
        return Ok(Rank::zero());
    }
    let r = l.rank(x);
    let r = r.expect_finite("tower element")?;
    Ok(Rank::Finite(r / qi(level as i64)))
}

/// `d(x, y) = 2r(x∨y) − r(x) − r(y)` with renormalized ranks.
pub fn updown_metric<L: TowerLevel>(l: &L, x: &L::Elem, y: &L::Elem) -> Result<Q> {
    let r = |e: &L::Elem| renormalized_rank(l, e).map(|r| r.finite().cloned().unwrap_or_default());
    Ok(qi(2) * r(&l.join(x, y))? - r(x)? - r(y)?)
}

/// The same metric on the interval lattice with Lebesgue measure.
pub fn interval_distance(u: &IntervalSet, v: &IntervalSet) -> Q {
    qi(2) * u.join(v).lebesgue() - u.lebesgue() - v.lebesgue()
}

/// `S ↦ S × [n/k]` under the flattening `(i, j) ↦ (i−1)(n/k) + j`.
pub fn embed_boolean(s: &BitSubset, n: u32) -> Result<BitSubset> {
    let k = s.n() as u32;
    let block = divides(k, n)?;
    let target = BooleanLattice::new(n.try_into().map_err(|_| Error::NotDivisible { k, n })?)?;
    let idx: Vec<u32> = s
        .indices()
        .into_iter()
        .flat_map(|i| (1..=block).map(move |j| (i - 1) * block + j))
        .collect();
    target.subset(&idx)
}

/// `W ↦ W ⊕ ⋯ ⊕ W` inside `F^n = F^k ⊕ ⋯ ⊕ F^k`.
pub fn embed_subspace(w: &Subspace, n: u32, target: &SubspaceLattice) -> Result<Subspace> {
    if target.p() != w.p() {
        return Err(Error::Mismatch(format!(
            "field F_{} vs F_{}",
            w.p(),
            target.p()
        )));
    }
    if target.n() as u32 != n {
        return Err(Error::Mismatch(format!(
            "target lattice has level {}, not {n}",
            target.n()
        )));
    }
    let k = w.n() as usize;
    let copies = divides(k as u32, n)? as usize;
    let rows: Vec<Vec<u32>> = (0..copies)
        .flat_map(|b| {
            w.basis().iter().map(move |row| {
                let mut v = vec![0u32; n as usize];
                v[b * k..(b + 1) * k].copy_from_slice(row);
                v
            })
        })
        .collect();
    target.span(&rows)
}

/// Tower families with exhaustive coherence checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerFamily {
    Boolean,
    /// Subspaces over `F_p`.
    Subspace(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceReport {
    pub family: TowerFamily,
    pub levels: (u32, u32, u32),
    pub checked: usize,
    /// First element where `φ^{k,n} ≠ φ^{m,n} ∘ φ^{k,m}`.
    pub witness: Option<String>,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `φ^{k,n} = φ^{m,n} ∘ φ^{k,m}` on every element of level `k`.
pub fn coherence_check(family: TowerFamily, k: u32, m: u32, n: u32) -> Result<CoherenceReport> {
    divides(k, m)?;
    divides(m, n)?;
    let small =
        |x: u32| -> Result<u8> { x.try_into().map_err(|_| Error::NotDivisible { k: x, n }) };
    let mut witness = None;
    let checked;
    match family {
        TowerFamily::Boolean => {
            let elems = BooleanLattice::new(small(k)?)?.elements()?;
            checked = elems.len();
            for s in &elems {
                let direct = embed_boolean(s, n)?;
                let composed = embed_boolean(&embed_boolean(s, m)?, n)?;
                if direct != composed {
                    witness = Some(format!("{s}: {direct} vs {composed}"));
                    break;
                }
            }
        }
        TowerFamily::Subspace(p) => {
            let lk = SubspaceLattice::new(p, small(k)?)?;
            let lm = SubspaceLattice::new(p, small(m)?)?;
            let ln = SubspaceLattice::new(p, small(n)?)?;
            let elems = lk.elements()?;
            checked = elems.len();
            for w in &elems {
                let direct = embed_subspace(w, n, &ln)?;
                let composed = embed_subspace(&embed_subspace(w, m, &lm)?, n, &ln)?;
                if direct != composed {
                    witness = Some(format!("{w}: {direct} vs {composed}"));
                    break;
                }
            }
        }
    }
    Ok(CoherenceReport {
        family,
        levels: (k, m, n),
        checked,
        witness,
    })
}

/// `S ↦ ⋃_{i∈S} ((i−1)/n, i/n]` inside `(0, 1]`.
pub fn boolean_to_interval(s: &BitSubset) -> IntervalSet {
    let n = s.n() as i64;
    let raw = s
        .indices()
        .into_iter()
        .map(|i| (q(i as i64 - 1, n), q(i as i64, n)))
        .collect();
    IntervalSet::normalize(raw).expect("grid cells are non-empty")
}

/// The largest union of `1/n`-grid cells contained in `target`: each interval
/// is shrunk inward to the grid and slivers thinner than a cell are dropped.
pub fn grid_approximant(target: &IntervalSet, n: u32) -> IntervalSet {
    let nq = qi(n as i64);
    let raw: Vec<(Q, Q)> = target
        .parts()
        .iter()
        .filter_map(|(a, b)| {
            let lo = (a * &nq).ceil() / &nq;
            let hi = (b * &nq).floor() / &nq;
            (lo < hi).then_some((lo, hi))
        })
        .collect();
    IntervalSet::normalize(raw).expect("filtered pieces are non-empty")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxRow {
    pub level: u32,
    pub approximant: IntervalSet,
    #[serde(with = "crate::rank::serde_q")]
    pub distance_to_target: Q,
    /// Distance to the previous level's approximant; `None` at the first level.
    #[serde(with = "crate::rank::serde_opt_q")]
    pub distance_to_previous: Option<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyTable {
    pub target: IntervalSet,
    pub rows: Vec<ApproxRow>,
}

impl CauchyTable {
    /// Every row satisfies `d(approx_n, target) ≤ 2·(#endpoints)/n`.
    pub fn within_endpoint_bound(&self) -> bool {
        let endpoints = 2 * self.target.parts().len() as i64;
        self.rows
            .iter()
            .all(|r| r.distance_to_target <= q(2 * endpoints, r.level as i64))
    }

    /// Distances to the target never increase along the tower.
    pub fn monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].distance_to_target <= w[0].distance_to_target)
    }
}

/// Grid approximants of a target in `(0, 1]` along a divisibility chain.
pub fn cauchy_approx(target: &IntervalSet, levels: &[u32]) -> Result<CauchyTable> {
    target.check_within(&crate::interval::Ambient::Bounded(qi(1)))?;
    if levels.is_empty() {
        return Err(Error::Precondition("no levels given".into()));
    }
    for w in levels.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Precondition(format!("level {} repeated", w[0])));
        }
        divides(w[0], w[1])?;
    }
    if levels[0] == 0 {
        return Err(Error::NotDivisible { k: 0, n: levels[0] });
    }
    let mut rows: Vec<ApproxRow> = Vec::with_capacity(levels.len());
    for &n in levels {
        let approximant = grid_approximant(target, n);
        let distance_to_target = interval_distance(&approximant, target);
        let distance_to_previous = rows
            .last()
            .map(|prev| interval_distance(&prev.approximant, &approximant));
        rows.push(ApproxRow {
            level: n,
            approximant,
            distance_to_target,
            distance_to_previous,
        });
    }
    Ok(CauchyTable {
        target: target.clone(),
        rows,
    })
}

/// Checks that `φ^{k,n}` preserves renormalized rank, meets, joins and the
/// up-down metric on every pair of level-`k` Boolean elements.
pub fn boolean_embedding_violation(k: u8, n: u32) -> Result<Option<String>> {
    let lk = BooleanLattice::new(k)?;
    let ln = BooleanLattice::new(
        n.try_into()
            .map_err(|_| Error::NotDivisible { k: k as u32, n })?,
    )?;
    let elems = lk.elements()?;
    for x in &elems {
        let fx = embed_boolean(x, n)?;
        if renormalized_rank(&lk, x)? != renormalized_rank(&ln, &fx)? {
            return Ok(Some(format!("rank of {x}")));
        }
        if boolean_to_interval(x) != boolean_to_interval(&fx) {
            return Ok(Some(format!("interval image of {x}")));
        }
        for y in &elems {
            let fy = embed_boolean(y, n)?;
            if embed_boolean(&lk.meet(x, y), n)? != ln.meet(&fx, &fy)
                || embed_boolean(&lk.join(x, y), n)? != ln.join(&fx, &fy)
            {
                return Ok(Some(format!("lattice operations at {x}, {y}")));
            }
            if updown_metric(&lk, x, y)? != updown_metric(&ln, &fx, &fy)? {
                return Ok(Some(format!("distance at {x}, {y}")));
            }
        }
    }
    Ok(None)
}

/// Subspace analogue of [`boolean_embedding_violation`].
pub fn subspace_embedding_violation(p: u32, k: u8, n: u8) -> Result<Option<String>> {
    let lk = SubspaceLattice::new(p, k)?;
    let ln = SubspaceLattice::new(p, n)?;
    let elems = lk.elements()?;
    for x in &elems {
        let fx = embed_subspace(x, n as u32, &ln)?;
        if renormalized_rank(&lk, x)? != renormalized_rank(&ln, &fx)? {
            return Ok(Some(format!("rank of {x}")));
        }
        for y in &elems {
            let fy = embed_subspace(y, n as u32, &ln)?;
            if embed_subspace(&lk.meet(x, y), n as u32, &ln)? != ln.meet(&fx, &fy)
                || embed_subspace(&lk.join(x, y), n as u32, &ln)? != ln.join(&fx, &fy)
            {
                return Ok(Some(format!("lattice operations at {x}, {y}")));
            }
            if updown_metric(&lk, x, y)? != updown_metric(&ln, &fx, &fy)? {
                return Ok(Some(format!("distance at {x}, {y}")));
            }
        }
    }
    Ok(None)
}
