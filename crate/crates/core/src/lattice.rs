//! The graded-lattice contract and family-independent predicates.

use std::fmt::Debug;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rank::{Rank, Q};

/// A lattice together with a grading `ρ` into the extended rationals.
///
/// `x ≤ y` is always decided as `meet(x, y) == x`.
pub trait GradedLattice {
    type Elem: Clone + PartialEq + Debug;

    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn rank(&self, x: &Self::Elem) -> Rank;

    fn bottom(&self) -> Option<Self::Elem> {
        None
    }

    fn top(&self) -> Option<Self::Elem> {
        None
    }

    /// Rejects elements built for a different instance of the family.
    fn validate(&self, _x: &Self::Elem) -> Result<()> {
        Ok(())
    }

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.meet(x, y) == *x
    }

    fn lt(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x != y && self.leq(x, y)
    }

    fn comparable(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }
}

/// `ρ(x∨m) + ρ(x∧m) − ρ(x) − ρ(m)`.
///
/// Comparable pairs satisfy the relation identically and return zero before
/// any arithmetic, so `0̂`/`1̂` of infinite rank never produce `∞ − ∞`.
pub fn rank_modular_defect<L: GradedLattice>(l: &L, m: &L::Elem, x: &L::Elem) -> Result<Rank> {
    if l.comparable(m, x) {
        return Ok(Rank::zero());
    }
    let up = Rank::checked_sum([&l.rank(&l.join(x, m)), &l.rank(&l.meet(x, m))])?;
    let across = Rank::checked_sum([&l.rank(x), &l.rank(m)])?;
    up.checked_sub(&across)
}

/// True when `m` has zero defect against every element of `xs`.
pub fn is_rank_modular_on<'a, L: GradedLattice>(
    l: &L,
    m: &L::Elem,
    xs: impl IntoIterator<Item = &'a L::Elem>,
) -> Result<bool>
where
    L::Elem: 'a,
{
    for x in xs {
        if rank_modular_defect(l, m, x)? != Rank::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_leq<L: GradedLattice>(l: &L, lo: &L::Elem, hi: &L::Elem, names: &str) -> Result<()> {
    if l.leq(lo, hi) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{names}: {lo:?} is not below {hi:?}"
        )))
    }
}

fn finite_rank<L: GradedLattice>(l: &L, x: &L::Elem) -> Result<Q> {
    l.rank(x)
        .finite()
        .cloned()
        .ok_or_else(|| Error::Indeterminate(format!("{x:?} has infinite rank")))
}

/// The two balance residuals for rank-modular `m2 ≤ m` and `w ≤ z`:
///
/// ```text
/// ρ(m∧z) + ρ(m∨z) − ρ(m∧w) − ρ(m∨w) − (ρ(z) − ρ(w))
/// ρ(m∧z) + ρ(m∨z) − ρ(m2∧z) − ρ(m2∨z) − (ρ(m) − ρ(m2))
/// ```
///
/// Both vanish exactly whenever `m` and `m2` are rank modular. Modularity is
/// the caller's responsibility; only the order preconditions are checked.
pub fn rm_balance_residuals<L: GradedLattice>(
    l: &L,
    m: &L::Elem,
    m2: &L::Elem,
    w: &L::Elem,
    z: &L::Elem,
) -> Result<(Rank, Rank)> {
    require_leq(l, w, z, "w ≤ z")?;
    require_leq(l, m2, m, "m2 ≤ m")?;
    let r = |x: &L::Elem| finite_rank(l, x);
    let mz = r(&l.meet(m, z))? + r(&l.join(m, z))?;
    let mw = r(&l.meet(m, w))? + r(&l.join(m, w))?;
    let m2z = r(&l.meet(m2, z))? + r(&l.join(m2, z))?;
    let first = &mz - mw - (r(z)? - r(w)?);
    let second = mz - m2z - (r(m)? - r(m2)?);
    Ok((Rank::Finite(first), Rank::Finite(second)))
}

/// One inequality `lhs ≤ rhs` with `slack = rhs − lhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub label: &'static str,
    #[serde(with = "crate::rank::serde_q")]
    pub lhs: Q,
    #[serde(with = "crate::rank::serde_q")]
    pub rhs: Q,
    #[serde(with = "crate::rank::serde_q")]
    pub slack: Q,
}

impl BoundRow {
    fn new(label: &'static str, lhs: Q, rhs: Q) -> Self {
        let slack = &rhs - &lhs;
        BoundRow {
            label,
            lhs,
            rhs,
            slack,
        }
    }

    pub fn holds(&self) -> bool {
        !self.slack.is_negative()
    }
}

/// The four diamond inequalities, grouped in two rows of two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiamondReport {
    pub bounds: [BoundRow; 4],
}

impl DiamondReport {
    pub fn all_hold(&self) -> bool {
        self.bounds.iter().all(BoundRow::holds)
    }

    /// Within each row the two slacks add up to the common right-hand side.
    pub fn rows_balance(&self) -> bool {
        let [a, b, c, d] = &self.bounds;
        &a.slack + &b.slack == a.rhs && &c.slack + &d.slack == c.rhs
    }
}

/// Checks the diamond bounds for rank-modular `m2 ≤ m` and `w ≤ z`.
pub fn diamond_bounds_check<L: GradedLattice>(
    l: &L,
    m: &L::Elem,
    m2: &L::Elem,
    w: &L::Elem,
    z: &L::Elem,
) -> Result<DiamondReport> {
    require_leq(l, w, z, "w ≤ z")?;
    require_leq(l, m2, m, "m2 ≤ m")?;
    let r = |x: &L::Elem| finite_rank(l, x);
    let height = r(z)? - r(w)?;
    let gap = r(m)? - r(m2)?;
    Ok(DiamondReport {
        bounds: [
            BoundRow::new(
                "ρ(m∧z)−ρ(m∧w) ≤ ρ(z)−ρ(w)",
                r(&l.meet(m, z))? - r(&l.meet(m, w))?,
                height.clone(),
            ),
            BoundRow::new(
                "ρ(m∨z)−ρ(m∨w) ≤ ρ(z)−ρ(w)",
                r(&l.join(m, z))? - r(&l.join(m, w))?,
                height,
            ),
            BoundRow::new(
                "ρ(m∧z)−ρ(m2∧z) ≤ ρ(m)−ρ(m2)",
                r(&l.meet(m, z))? - r(&l.meet(m2, z))?,
                gap.clone(),
            ),
            BoundRow::new(
                "ρ(m∨z)−ρ(m2∨z) ≤ ρ(m)−ρ(m2)",
                r(&l.join(m, z))? - r(&l.join(m2, z))?,
                gap,
            ),
        ],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JoinOrMeet {
    Meet,
    Join,
}

/// A strictly increasing list of elements with their (finite or infinite)
/// ranks, sampled from a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSample<E> {
    points: Vec<(Rank, E)>,
}

impl<E: Clone + PartialEq + Debug> ChainSample<E> {
    pub fn new<L: GradedLattice<Elem = E>>(l: &L, elems: Vec<E>) -> Result<Self> {
        let points: Vec<(Rank, E)> = elems.into_iter().map(|e| (l.rank(&e), e)).collect();
        for pair in points.windows(2) {
            let ((r0, e0), (r1, e1)) = (&pair[0], &pair[1]);
            if r0 >= r1 || !l.lt(e0, e1) {
                return Err(Error::Precondition(format!(
                    "chain sample not strictly increasing at {e0:?} -> {e1:?}"
                )));
            }
        }
        Ok(ChainSample { points })
    }

    pub fn points(&self) -> &[(Rank, E)] {
        &self.points
    }

    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.points.iter().map(|(_, e)| e)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Largest observed `|ρ(m□c₂) − ρ(m□c₁)| / (κ₂ − κ₁)` over consecutive samples.
pub fn lipschitz_scan<L: GradedLattice>(
    l: &L,
    chain: &ChainSample<L::Elem>,
    m: &L::Elem,
    mode: JoinOrMeet,
) -> Result<Q> {
    let op = |c: &L::Elem| match mode {
        JoinOrMeet::Meet => l.meet(m, c),
        JoinOrMeet::Join => l.join(m, c),
    };
    let mut worst = Q::zero();
    for pair in chain.points().windows(2) {
        let (k0, c0) = &pair[0];
        let (k1, c1) = &pair[1];
        let step = k1.expect_finite("chain sample")? - k0.expect_finite("chain sample")?;
        if step.is_zero() {
            return Err(Error::Precondition("zero-length chain step".into()));
        }
        let rise = finite_rank(l, &op(c1))? - finite_rank(l, &op(c0))?;
        let ratio = rise.abs() / step;
        if ratio > worst {
            worst = ratio;
        }
    }
    Ok(worst)
}

/// An element of a lattice with synthetic extrema adjoined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Extended<E> {
    Bottom,
    Inner(E),
    Top,
}

/// `L ∪ {0̂, 1̂}` where each synthetic bound carries the given rank.
#[derive(Clone, Debug)]
pub struct Adjoined<L> {
    inner: L,
    top: Option<Rank>,
    bottom: Option<Rank>,
}

impl<L: GradedLattice> Adjoined<L> {
    /// Adjoins a top of rank `sup_rank` and/or a bottom of rank `inf_rank`.
    /// Refuses when the inner lattice already has that extremum.
    pub fn new(inner: L, sup_rank: Option<Rank>, inf_rank: Option<Rank>) -> Result<Self> {
        if sup_rank.is_some() && inner.top().is_some() {
            return Err(Error::AlreadyBounded("top"));
        }
        if inf_rank.is_some() && inner.bottom().is_some() {
            return Err(Error::AlreadyBounded("bottom"));
        }
        Ok(Adjoined {
            inner,
            top: sup_rank,
            bottom: inf_rank,
        })
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }
}

impl<L: GradedLattice> GradedLattice for Adjoined<L> {
    type Elem = Extended<L::Elem>;

    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        use Extended::*;
        match (x, y) {
            (Bottom, _) | (_, Bottom) => Bottom,
            (Top, e) | (e, Top) => e.clone(),
            (Inner(a), Inner(b)) => Inner(self.inner.meet(a, b)),
        }
    }

    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        use Extended::*;
        match (x, y) {
            (Top, _) | (_, Top) => Top,
            (Bottom, e) | (e, Bottom) => e.clone(),
            (Inner(a), Inner(b)) => Inner(self.inner.join(a, b)),
        }
    }

    fn rank(&self, x: &Self::Elem) -> Rank {
        match x {
            Extended::Bottom => self.bottom.clone().unwrap_or(Rank::NegInf),
            Extended::Top => self.top.clone().unwrap_or(Rank::PosInf),
            Extended::Inner(e) => self.inner.rank(e),
        }
    }

    fn bottom(&self) -> Option<Self::Elem> {
        match self.bottom {
            Some(_) => Some(Extended::Bottom),
            None => self.inner.bottom().map(Extended::Inner),
        }
    }

    fn top(&self) -> Option<Self::Elem> {
        match self.top {
            Some(_) => Some(Extended::Top),
            None => self.inner.top().map(Extended::Inner),
        }
    }

    fn validate(&self, x: &Self::Elem) -> Result<()> {
        match x {
            Extended::Inner(e) => self.inner.validate(e),
            Extended::Top if self.top.is_none() => Err(Error::Mismatch("no adjoined top".into())),
            Extended::Bottom if self.bottom.is_none() => {
                Err(Error::Mismatch("no adjoined bottom".into()))
            }
            _ => Ok(()),
        }
    }
}

/// `(w∨m)∧z = w∨(m∧z)` for `w ≤ z`; true for every rank-modular `m`.
pub fn left_modular_holds<L: GradedLattice>(
    l: &L,
    m: &L::Elem,
    w: &L::Elem,
    z: &L::Elem,
) -> Result<bool> {
    require_leq(l, w, z, "w ≤ z")?;
    Ok(l.meet(&l.join(w, m), z) == l.join(w, &l.meet(m, z)))
}

/// The two chief-chain identities for `z ≤ w` and `ml ≤ mk`:
///
/// ```text
/// (z∨ml)∧w  = z∨(ml∧w)
/// (ml∨z)∧mk = ml∨(z∧mk)
/// ```
pub fn chief_identities_hold<L: GradedLattice>(
    l: &L,
    ml: &L::Elem,
    mk: &L::Elem,
    z: &L::Elem,
    w: &L::Elem,
) -> Result<(bool, bool)> {
    require_leq(l, z, w, "z ≤ w")?;
    require_leq(l, ml, mk, "ml ≤ mk")?;
    let first = l.meet(&l.join(z, ml), w) == l.join(z, &l.meet(ml, w));
    let second = l.meet(&l.join(ml, z), mk) == l.join(ml, &l.meet(z, mk));
    Ok((first, second))
}

/// Defect of `p = w∨(m∧z)` against `x` inside the interval `[w, z]`.
///
/// `x` is clipped into the interval first as `(x∨w)∧z`. For rank-modular `m`
/// the result is zero.
pub fn interval_projection_defect<L: GradedLattice>(
    l: &L,
    m: &L::Elem,
    w: &L::Elem,
    z: &L::Elem,
    x: &L::Elem,
) -> Result<Rank> {
    require_leq(l, w, z, "w ≤ z")?;
    let p = l.join(w, &l.meet(m, z));
    let x = l.meet(&l.join(x, w), z);
    rank_modular_defect(l, &p, &x)
}

/// Finds a witness against idempotence, commutativity, associativity or
/// absorption for the triple, if there is one.
pub fn lattice_axiom_violation<L: GradedLattice>(
    l: &L,
    x: &L::Elem,
    y: &L::Elem,
    z: &L::Elem,
) -> Option<String> {
    let checks: [(&str, bool); 8] = [
        ("meet idempotent", l.meet(x, x) == *x),
        ("join idempotent", l.join(x, x) == *x),
        ("meet commutative", l.meet(x, y) == l.meet(y, x)),
        ("join commutative", l.join(x, y) == l.join(y, x)),
        (
            "meet associative",
            l.meet(&l.meet(x, y), z) == l.meet(x, &l.meet(y, z)),
        ),
        (
            "join associative",
            l.join(&l.join(x, y), z) == l.join(x, &l.join(y, z)),
        ),
        ("absorption meet", l.meet(x, &l.join(x, y)) == *x),
        ("absorption join", l.join(x, &l.meet(x, y)) == *x),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Some(format!("{name} fails at x={x:?}, y={y:?}, z={z:?}"));
    }
    if l.lt(x, y) && l.rank(x) >= l.rank(y) {
        return Some(format!("rank not strictly increasing: {x:?} < {y:?}"));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{BitSubset, BooleanLattice, PartitionLattice, SetPartition};
    use crate::rank::q;

    fn b4() -> BooleanLattice {
        BooleanLattice::new(4).unwrap()
    }

    #[test]
    fn bottom_is_rank_modular() {
        let l = b4();
        let x = BitSubset::from_indices(4, &[1, 3]).unwrap();
        assert_eq!(
            rank_modular_defect(&l, &l.bottom().unwrap(), &x).unwrap(),
            Rank::zero()
        );
    }

    #[test]
    fn crossing_partitions_have_negative_defect() {
        let l = PartitionLattice::new(4).unwrap();
        let m = SetPartition::from_blocks(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        let x = SetPartition::from_blocks(4, &[vec![1, 3], vec![2, 4]]).unwrap();
        assert_eq!(rank_modular_defect(&l, &m, &x).unwrap(), Rank::int(-1));
    }

    #[test]
    fn balance_rejects_incomparable_pairs() {
        let l = b4();
        let a = BitSubset::from_indices(4, &[1]).unwrap();
        let b = BitSubset::from_indices(4, &[2]).unwrap();
        let err = rm_balance_residuals(&l, &a, &a, &a, &b).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("w ≤ z")));
    }

    #[test]
    fn degenerate_chain_gives_zero_first_residual() {
        let l = PartitionLattice::new(4).unwrap();
        let m = SetPartition::from_blocks(4, &[vec![1, 2, 4]]).unwrap();
        let w = SetPartition::from_blocks(4, &[vec![2, 3]]).unwrap();
        let (first, _) = rm_balance_residuals(&l, &m, &m, &w, &w).unwrap();
        assert_eq!(first, Rank::zero());
    }

    #[test]
    fn partition_balance_example() {
        let l = PartitionLattice::new(4).unwrap();
        let m = SetPartition::from_blocks(4, &[vec![1, 2, 3]]).unwrap();
        let m2 = SetPartition::from_blocks(4, &[vec![1, 2]]).unwrap();
        let w = l.bottom().unwrap();
        let z = SetPartition::from_blocks(4, &[vec![1, 4]]).unwrap();
        let res = rm_balance_residuals(&l, &m, &m2, &w, &z).unwrap();
        assert_eq!(res, (Rank::zero(), Rank::zero()));
    }

    #[test]
    fn left_modularity_separates_modular_elements_of_pi4() {
        use crate::finite::{rank_modular_elements, FiniteLattice};
        let l = PartitionLattice::new(4).unwrap();
        let all = l.elements().unwrap();
        let modular = rank_modular_elements(&l).unwrap();
        let left_modular = |m: &SetPartition| {
            all.iter().all(|w| {
                all.iter()
                    .filter(|z| l.leq(w, z))
                    .all(|z| left_modular_holds(&l, m, w, z).unwrap())
            })
        };
        for m in &all {
            if modular.contains(m) {
                assert!(left_modular(m), "{m}");
            }
        }
        let crossing = SetPartition::from_blocks(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert!(!left_modular(&crossing));
    }

    #[test]
    fn interval_projection_of_a_chief_element() {
        let l = b4();
        let m = l.subset(&[1, 2]).unwrap();
        let (w, z) = (l.subset(&[2]).unwrap(), l.subset(&[1, 2, 3, 4]).unwrap());
        for x in [
            l.subset(&[3]).unwrap(),
            l.subset(&[1, 4]).unwrap(),
            l.subset(&[2, 3, 4]).unwrap(),
        ] {
            assert_eq!(
                interval_projection_defect(&l, &m, &w, &z, &x).unwrap(),
                Rank::zero()
            );
        }
        assert!(interval_projection_defect(&l, &m, &z, &w, &m).is_err());
    }

    #[test]
    fn top_gives_zero_first_slack() {
        let l = b4();
        let top = l.top().unwrap();
        let w = BitSubset::from_indices(4, &[2]).unwrap();
        let z = BitSubset::from_indices(4, &[2, 3]).unwrap();
        let rep = diamond_bounds_check(&l, &top, &l.bottom().unwrap(), &w, &z).unwrap();
        assert!(rep.bounds[0].slack.is_zero());
        assert!(rep.all_hold() && rep.rows_balance());
    }

    #[test]
    fn lipschitz_of_bottom_is_zero() {
        let l = b4();
        let chain = ChainSample::new(
            &l,
            (0..=4)
                .map(|k| BitSubset::from_indices(4, &(1..=k).collect::<Vec<_>>()).unwrap())
                .collect(),
        )
        .unwrap();
        let r = lipschitz_scan(&l, &chain, &l.bottom().unwrap(), JoinOrMeet::Meet).unwrap();
        assert!(r.is_zero());
        let r = lipschitz_scan(&l, &chain, &l.bottom().unwrap(), JoinOrMeet::Join).unwrap();
        assert_eq!(r, q(1, 1));
    }

    #[test]
    fn chain_sample_rejects_non_chains() {
        let l = b4();
        let a = BitSubset::from_indices(4, &[1]).unwrap();
        let b = BitSubset::from_indices(4, &[2, 3]).unwrap();
        assert!(ChainSample::new(&l, vec![a, b]).is_err());
    }

    #[test]
    fn adjoin_refuses_existing_extremum() {
        assert!(matches!(
            Adjoined::new(b4(), Some(Rank::PosInf), None),
            Err(Error::AlreadyBounded("top"))
        ));
        assert!(Adjoined::new(b4(), None, Some(Rank::NegInf)).is_err());
    }
}
