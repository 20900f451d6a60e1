//! Named verification suites. Each one checks an exact identity or property
//! over random samples and exhaustive small cases and reports the first
//! failure it finds.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{
    antichain_cutsets_exhaustive, enumerate_maximal_chains, product_plane_limit_demo,
    rank_modular_elements, BitSubset, BooleanLattice, ChiefChain, FiniteLattice, PartitionLattice,
    ProductPlane, ProductPlanePoint, SubspaceLattice,
};
use crate::interval::{bounded_chain_demo, Grading, IntervalLattice, IntervalSet, StepDensity};
use crate::lattice::{
    chief_identities_hold, diamond_bounds_check, interval_projection_defect,
    lattice_axiom_violation, left_modular_holds, lipschitz_scan, rm_balance_residuals, ChainSample,
    GradedLattice, JoinOrMeet,
};
use crate::limit::{
    boolean_embedding_violation, boolean_to_interval, cauchy_approx, coherence_check,
    renormalized_rank, subspace_embedding_violation, TowerFamily,
};
use crate::rank::{fmt_q, q, qi, Rank, Q};
use crate::regrading::{
    bounded_interval_hypotheses, bounded_measurable_hypotheses, product_plane_hypotheses,
    reversed_chain_check, ChainSpec, ConditionStatus, CutsetSpec, FiniteRegrader, IntervalRegrader,
    Regrader,
};
use crate::sample::{rng, GridSampler, SampleRng};

/// Suite names in their fixed run order.
pub const SUITES: [&str; 15] = [
    "axioms",
    "finite-counts",
    "rmbalance",
    "diamond",
    "lipschitz",
    "left-modular",
    "chief-identities",
    "interval-projection",
    "good-chain",
    "counterexample",
    "level-set",
    "monotone",
    "finite-regrading",
    "direct-limit",
    "discontinuity",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides every suite's default random sample count.
    pub samples: Option<usize>,
    /// Cutset density for the regrading suites; its support fixes the ambient.
    pub density: Option<StepDensity>,
    /// Cutset level for the regrading suites.
    pub level: Q,
    /// Finer grid step for the continuity comparison; the coarse step is twice this.
    pub grid: Q,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            samples: None,
            density: None,
            level: qi(1),
            grid: q(1, 128),
        }
    }
}

impl SuiteConfig {
    fn count(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn density(&self) -> StepDensity {
        self.density.clone().unwrap_or_else(|| {
            StepDensity::new(vec![qi(0), qi(1), qi(2)], vec![qi(1), qi(2)]).expect("valid density")
        })
    }

    fn regrader(&self) -> Result<IntervalRegrader> {
        let f = self.density();
        let l = IntervalLattice::bounded(f.end().clone())?;
        IntervalRegrader::new(
            l,
            &CutsetSpec::level(Grading::Density(f), self.level.clone()),
        )
    }

    fn sampler(&self, end: &Q, den: i64, pieces: usize) -> Result<GridSampler> {
        GridSampler::new(
            end.clone(),
            den * end.denom().try_into().unwrap_or(1i64),
            pieces,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    /// The statement under test.
    pub tag: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Case counter that keeps the first failure.
struct Tally {
    cases: usize,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            witness: None,
        }
    }

    fn check(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(why());
        }
    }

    fn finish(self, name: &'static str, tag: &'static str) -> SuiteReport {
        SuiteReport {
            name,
            tag,
            cases: self.cases,
            passed: self.witness.is_none(),
            witness: self.witness,
        }
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, cfg)).collect()
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed);
    let r = &mut r;
    Ok(match name {
        "axioms" => axioms(cfg, r)?.finish("axioms", "lattice axioms and strict rank monotonicity"),
        "finite-counts" => finite_counts()?.finish(
            "finite-counts",
            "modular elements, cutsets and chains of small lattices",
        ),
        "rmbalance" => {
            balance(cfg, r, false)?.finish("rmbalance", "balance identities for rank-modular pairs")
        }
        "diamond" => {
            balance(cfg, r, true)?.finish("diamond", "diamond bounds with balanced slacks")
        }
        "lipschitz" => lipschitz(cfg, r)?.finish(
            "lipschitz",
            "meets and joins with a rank-modular element are 1-Lipschitz",
        ),
        "left-modular" => {
            left_modular()?.finish("left-modular", "rank-modular elements are left modular")
        }
        "chief-identities" => {
            chief_identities()?.finish("chief-identities", "the two chief-chain modular identities")
        }
        "interval-projection" => interval_projection(cfg, r)?
            .finish("interval-projection", "w∨m∧z is rank modular in [w, z]"),
        "good-chain" => good_chain(cfg, r)?.finish(
            "good-chain",
            "good and reversed chains are maximal; α orders λ",
        ),
        "counterexample" => counterexample()?.finish(
            "counterexample",
            "σ need not keep the chief chain rank modular",
        ),
        "level-set" => level_set_suite(cfg, r)?.finish("level-set", "the cutset is exactly σ⁻¹(0)"),
        "monotone" => monotone(cfg, r)?.finish(
            "monotone",
            "σ strictly increasing and continuous along maximal chains",
        ),
        "finite-regrading" => {
            finite_regrading()?.finish("finite-regrading", "σ grades B_4 and Π_4 for every cutset")
        }
        "direct-limit" => direct_limit()?.finish(
            "direct-limit",
            "coherent isometric tower embeddings and Cauchy approximants",
        ),
        "discontinuity" => {
            discontinuity()?.finish("discontinuity", "continuity at infinity can fail")
        }
        other => {
            return Err(Error::Precondition(format!(
                "unknown suite `{other}`; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    })
}

fn axioms(cfg: &SuiteConfig, r: &mut SampleRng) -> Result<Tally> {
    let mut t = Tally::new();
    let l = IntervalLattice::bounded(qi(2))?;
    let s = cfg.sampler(&qi(2), 8, 4)?;
    for _ in 0..cfg.count(1000) {
        let (x, y, z) = (s.set(r), s.set(r), s.set(r));
        let v = lattice_axiom_violation(&l, &x, &y, &z);
        t.check(v.is_none(), || v.unwrap_or_default());
    }
    fn exhaustive<L: FiniteLattice>(l: &L, t: &mut Tally) -> Result<()> {
        let xs = l.elements()?;
        for x in &xs {
            for y in &xs {
                for z in &xs {
                    let v = lattice_axiom_violation(l, x, y, z);
                    t.check(v.is_none(), || v.unwrap_or_default());
                }
            }
        }
        Ok(())
    }
    exhaustive(&BooleanLattice::new(3)?, &mut t)?;
    exhaustive(&PartitionLattice::new(4)?, &mut t)?;
    exhaustive(&SubspaceLattice::new(2, 3)?, &mut t)?;
    let pts: Vec<ProductPlanePoint> = [(0, 0), (1, -1), (2, 3), (-1, 5)]
        .iter()
        .map(|&(a, b)| ProductPlanePoint::pair(qi(a), qi(b)))
        .chain([ProductPlanePoint::Bottom, ProductPlanePoint::Top])
        .collect();
    for x in &pts {
        for y in &pts {
            for z in &pts {
                let v = lattice_axiom_violation(&ProductPlane, x, y, z);
                t.check(v.is_none(), || v.unwrap_or_default());
            }
        }
    }
    Ok(t)
}

fn finite_counts() -> Result<Tally> {
    let mut t = Tally::new();
    let modular = rank_modular_elements(&PartitionLattice::new(4)?)?.len();
    t.check(modular == 12, || {
        format!("Π_4 has {modular} rank-modular elements, expected 12")
    });
    let cutsets = antichain_cutsets_exhaustive(&BooleanLattice::new(2)?)?.len();
    t.check(cutsets == 3, || {
        format!("B_2 has {cutsets} antichain cutsets, expected 3")
    });
    let chains = enumerate_maximal_chains(&BooleanLattice::new(4)?)?.len();
    t.check(chains == 24, || {
        format!("B_4 has {chains} maximal chains, expected 24")
    });
    Ok(t)
}

/// `(m, m2, w, z)` with `m2 < m` rank modular and `w < z`, all of Π_4.
fn pi4_quadruples() -> Result<(PartitionLattice, Vec<[crate::finite::SetPartition; 4]>)> {
    let l = PartitionLattice::new(4)?;
    let all = l.elements()?;
    let modular = rank_modular_elements(&l)?;
    let mut out = Vec::new();
    for m in &modular {
        for m2 in modular.iter().filter(|m2| l.lt(m2, m)) {
            for w in &all {
                for z in all.iter().filter(|z| l.lt(w, z)) {
                    out.push([m.clone(), m2.clone(), w.clone(), z.clone()]);
                }
            }
        }
    }
    Ok((l, out))
}

fn balance(cfg: &SuiteConfig, r: &mut SampleRng, diamond: bool) -> Result<Tally> {
    let mut t = Tally::new();
    let l = IntervalLattice::bounded(qi(2))?;
    let s = cfg.sampler(&qi(2), 8, 3)?;
    for _ in 0..cfg.count(1000) {
        let (m2, m) = s.comparable_pair(r);
        let (w, z) = s.comparable_pair(r);
        let (ok, why) = quad_check(&l, &m, &m2, &w, &z, diamond)?;
        t.check(ok, || why);
    }
    let (pl, quads) = pi4_quadruples()?;
    for [m, m2, w, z] in &quads {
        let (ok, why) = quad_check(&pl, m, m2, w, z, diamond)?;
        t.check(ok, || why);
    }
    Ok(t)
}

fn quad_check<L: GradedLattice>(
    l: &L,
    m: &L::Elem,
    m2: &L::Elem,
    w: &L::Elem,
    z: &L::Elem,
    diamond: bool,
) -> Result<(bool, String)> {
    if diamond {
        let d = diamond_bounds_check(l, m, m2, w, z)?;
        Ok((
            d.all_hold() && d.rows_balance(),
            format!("diamond bounds fail at m={m:?}, m2={m2:?}, w={w:?}, z={z:?}: {d:?}"),
        ))
    } else {
        let res = rm_balance_residuals(l, m, m2, w, z)?;
        let ok = res == (Rank::zero(), Rank::zero());
        Ok((
            ok,
            format!("residuals {res:?} at m={m:?}, m2={m2:?}, w={w:?}, z={z:?}"),
        ))
    }
}

/// `∅ = c_0 < c_1 < … < c_N = 1̂` adding the `1/den` grid cells of `(0, end]`
/// in random order.
fn random_cell_chain(
    l: &IntervalLattice,
    end: &Q,
    den: i64,
    r: &mut SampleRng,
) -> Result<ChainSample<IntervalSet>> {
    let cells = (end * qi(den)).to_integer().try_into().unwrap_or(0i64);
    let mut order: Vec<i64> = (0..cells).collect();
    order.shuffle(r);
    let mut acc = IntervalSet::empty();
    let mut chain = vec![acc.clone()];
    for k in order {
        acc = acc.join(&IntervalSet::interval(q(k, den), q(k + 1, den))?);
        chain.push(acc.clone());
    }
    ChainSample::new(l, chain)
}

fn lipschitz(cfg: &SuiteConfig, r: &mut SampleRng) -> Result<Tally> {
    let mut t = Tally::new();
    let end = qi(2);
    let l = IntervalLattice::bounded(end.clone())?;
    let s = cfg.sampler(&end, 8, 4)?;
    for _ in 0..cfg.count(200) {
        let chain = random_cell_chain(&l, &end, 8, r)?;
        let m = s.set(r);
        for mode in [JoinOrMeet::Meet, JoinOrMeet::Join] {
            let ratio = lipschitz_scan(&l, &chain, &m, mode)?;
            t.check(ratio <= qi(1), || {
                format!("ratio {} for m={m} ({mode:?})", fmt_q(&ratio))
            });
        }
    }
    let pl = PartitionLattice::new(4)?;
    let modular = rank_modular_elements(&pl)?;
    for chain in enumerate_maximal_chains(&pl)? {
        let chain = ChainSample::new(&pl, chain)?;
        for m in &modular {
            for mode in [JoinOrMeet::Meet, JoinOrMeet::Join] {
                let ratio = lipschitz_scan(&pl, &chain, m, mode)?;
                t.check(ratio <= qi(1), || {
                    format!("ratio {} for m={m} ({mode:?})", fmt_q(&ratio))
                });
            }
        }
    }
    Ok(t)
}

fn left_modular() -> Result<Tally> {
    fn run<L: FiniteLattice>(l: &L, t: &mut Tally) -> Result<()>
    where
        L::Elem: std::fmt::Display,
    {
        let all = l.elements()?;
        for m in rank_modular_elements(l)? {
            for w in &all {
                for z in all.iter().filter(|z| l.lt(w, z)) {
                    let ok = left_modular_holds(l, &m, w, z)?;
                    t.check(ok, || format!("(w∨m)∧z ≠ w∨(m∧z) at m={m}, w={w}, z={z}"));
                }
            }
        }
        Ok(())
    }
    let mut t = Tally::new();
    run(&PartitionLattice::new(4)?, &mut t)?;
    run(&BooleanLattice::new(4)?, &mut t)?;
    Ok(t)
}

fn chief_identities() -> Result<Tally> {
    fn run<L: ChiefChain>(l: &L, t: &mut Tally) -> Result<()>
    where
        L::Elem: std::fmt::Display,
    {
        let all = l.elements()?;
        let chief: Vec<L::Elem> = l.chief_chain()?.elements().cloned().collect();
        for (i, ml) in chief.iter().enumerate() {
            for mk in &chief[i + 1..] {
                for z in &all {
                    for w in all.iter().filter(|w| l.lt(z, w)) {
                        let (a, b) = chief_identities_hold(l, ml, mk, z, w)?;
                        t.check(a && b, || {
                            format!("identities ({a}, {b}) at m={ml}, m'={mk}, z={z}, w={w}")
                        });
                    }
                }
            }
        }
        Ok(())
    }
    let mut t = Tally::new();
    run(&PartitionLattice::new(4)?, &mut t)?;
    run(&BooleanLattice::new(4)?, &mut t)?;
    Ok(t)
}

fn interval_projection(cfg: &SuiteConfig, r: &mut SampleRng) -> Result<Tally> {
    let mut t = Tally::new();
    let l = IntervalLattice::bounded(qi(2))?;
    let s = cfg.sampler(&qi(2), 8, 3)?;
    for _ in 0..cfg.count(500) {
        let (w, z) = s.comparable_pair(r);
        let (m, x) = (s.set(r), s.set(r));
        let d = interval_projection_defect(&l, &m, &w, &z, &x)?;
        t.check(d == Rank::zero(), || {
            format!("defect {d} at m={m}, w={w}, z={z}, x={x}")
        });
    }
    let pl = PartitionLattice::new(4)?;
    let all = pl.elements()?;
    for m in rank_modular_elements(&pl)? {
        for w in &all {
            for z in all.iter().filter(|z| pl.lt(w, z)) {
                for x in &all {
                    let d = interval_projection_defect(&pl, &m, w, z, x)?;
                    t.check(d == Rank::zero(), || {
                        format!("defect {d} at m={m}, w={w}, z={z}, x={x}")
                    });
                }
            }
        }
    }
    Ok(t)
}

fn good_chain(cfg: &SuiteConfig, r: &mut SampleRng) -> Result<Tally> {
    let mut t = Tally::new();
    let rg = cfg.regrader()?;
    let end = rg.end().clone();
    let l = rg.interval_lattice().clone();
    let s = cfg.sampler(&end, 8, 4)?;
    for _ in 0..cfg.count(200) {
        let z = s.set(r);
        for grading in [Grading::Rank, rg.cutset_grading().clone()] {
            let rep = rg.good_chain_maximality_check(&z, &grading)?;
            t.check(rep.passed(), || {
                format!("good chain through {z} not maximal: {rep:?}")
            });
        }
        let m = l.chief_element(&q(r_below(r, &end, 8), 8))?;
        let chain = random_cell_chain(&l, &end, 8, r)?;
        let rep = reversed_chain_check(&l, &m, &chain)?;
        t.check(rep.passed(), || {
            format!("reversed chain through {m} not maximal: {rep:?}")
        });
        let (w, z) = s.comparable_pair(r);
        if rg.nu(&w)? >= *rg.level() {
            let rep = rg.alpha_order_check(&w, &z)?;
            t.check(rep.holds, || {
                format!("α order fails at w={w}, z={z}: {rep:?}")
            });
        }
    }
    fn finite<L: ChiefChain>(l: L, level: i64, t: &mut Tally) -> Result<()>
    where
        L::Elem: std::fmt::Display,
    {
        let cutset = crate::finite::level_set(&l, &Rank::int(level))?;
        let all = l.elements()?;
        let chains = enumerate_maximal_chains(&l)?;
        let fr = FiniteRegrader::new(l, cutset)?;
        for z in &all {
            t.check(fr.good_chain_saturated(z), || {
                format!("good chain through {z} not saturated")
            });
        }
        for c in chains {
            let c = ChainSample::new(fr.lattice(), c)?;
            for m in fr.chief() {
                let rep = reversed_chain_check(fr.lattice(), m, &c)?;
                t.check(rep.passed(), || {
                    format!("reversed chain through {m} fails: {rep:?}")
                });
            }
        }
        Ok(())
    }
    finite(BooleanLattice::new(4)?, 2, &mut t)?;
    finite(PartitionLattice::new(4)?, 1, &mut t)?;
    Ok(t)
}

/// A random grid multiple `k` with `k/den ∈ [0, end]`.
fn r_below(r: &mut SampleRng, end: &Q, den: i64) -> i64 {
    use rand::Rng;
    let top: i64 = (end * qi(den)).to_integer().try_into().unwrap_or(0);
    r.gen_range(0..=top)
}

/// The four σ values and the defect of the two-step example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    /// `(t, σ((0,t]))` for `t ∈ {1, 5/4, 3/2, 2}`.
    pub prefix_sigmas: Vec<(Rank, Rank)>,
    pub sigma_right_half: Rank,
    pub sigma_empty: Rank,
    /// `σ((0,2]) + σ(∅) − σ((0,1]) − σ((1,2])`.
    pub defect: Rank,
    pub uniform_defect: Rank,
}

impl CounterexampleReport {
    pub fn matches_expected(&self) -> bool {
        self.prefix_sigmas.iter().all(|(t, s)| match (t, s) {
            (Rank::Finite(t), Rank::Finite(s)) => s == &(t - qi(1)),
            _ => false,
        }) && self.sigma_right_half == Rank::ratio(1, 2)
            && self.sigma_empty == Rank::int(-1)
            && self.defect == Rank::ratio(-1, 2)
            && self.uniform_defect == Rank::zero()
    }
}

pub fn counterexample_report() -> Result<CounterexampleReport> {
    let rg = IntervalRegrader::two_step_example();
    let set = |s: &str| -> Result<IntervalSet> { s.parse() };
    let prefix_sigmas = [qi(1), q(5, 4), q(3, 2), qi(2)]
        .into_iter()
        .map(|t| {
            let z = IntervalSet::interval(Q::zero(), t.clone())?;
            Ok((Rank::Finite(t), Rank::Finite(rg.sigma_eval(&z)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (left, right) = (set("(0,1]")?, set("(1,2]")?);
    Ok(CounterexampleReport {
        prefix_sigmas,
        sigma_right_half: Rank::Finite(rg.sigma_eval(&right)?),
        sigma_empty: Rank::Finite(rg.sigma_eval(&IntervalSet::empty())?),
        defect: Rank::Finite(rg.sigma_rank_modular_defect(&left, &right)?),
        uniform_defect: Rank::Finite(
            IntervalRegrader::uniform_example().sigma_rank_modular_defect(&left, &right)?,
        ),
    })
}

fn counterexample() -> Result<Tally> {
    let mut t = Tally::new();
    let rep = counterexample_report()?;
    t.check(rep.matches_expected(), || format!("{rep:?}"));
    Ok(t)
}

fn level_set_suite(cfg: &SuiteConfig, r: &mut SampleRng) -> Result<Tally> {
    let mut t = Tally::new();
    let rg = cfg.regrader()?;
    let f = cfg.density();
    let c = rg.level().clone();
    let s = cfg.sampler(rg.end(), 16, 4)?;
    for _ in 0..cfg.count(200) {
        let a = s.level_element(r, &f, &c)?;
        let nu = f.integrate(&a);
        let sigma = rg.sigma_eval(&a)?;
        t.check(nu == c && sigma.is_zero(), || {
            format!("ν({a}) = {}, σ = {}", fmt_q(&nu), fmt_q(&sigma))
        });
    }
    for _ in 0..cfg.count(200) {
        let z = s.off_level_element(r, &f, &c);
        let nu = f.integrate(&z);
        let sigma = rg.sigma_eval(&z)?;
        let same_sign = (&nu - &c).signum() == sigma.signum() && !sigma.is_zero();
        t.check(same_sign, || {
            format!("ν({z}) = {} but σ = {}", fmt_q(&nu), fmt_q(&sigma))
        });
    }
    Ok(t)
}

fn monotone(cfg: &SuiteConfig, r: &mut SampleRng) -> Result<Tally> {
    let mut t = Tally::new();
    let rg = cfg.regrader()?;
    let s = cfg.sampler(rg.end(), 8, 4)?;
    let fine = cfg.grid.clone();
    let coarse = &fine * qi(2);
    let mut chains = vec![ChainSpec::Chief];
    for _ in 0..cfg.count(50) {
        chains.push(ChainSpec::GoodChain(s.set(r)));
    }
    for chain in &chains {
        let a = rg.regrade_table(chain, &coarse)?;
        let b = rg.regrade_table(chain, &fine)?;
        let name = match chain {
            ChainSpec::Chief => "chief chain".to_string(),
            ChainSpec::GoodChain(w) => format!("good chain through {w}"),
        };
        t.check(a.strictly_increasing() && b.strictly_increasing(), || {
            format!("σ not strictly increasing on {name}")
        });
        t.check(a.attains_endpoints() && b.attains_endpoints(), || {
            format!("σ misses an endpoint on {name}")
        });
        let (ga, gb) = (a.max_gap(), b.max_gap());
        t.check(gb <= &ga * qi(2), || {
            format!(
                "gap {} at the finer step exceeds twice {} on {name}",
                fmt_q(&gb),
                fmt_q(&ga)
            )
        });
    }
    let pairs: Vec<_> = (0..cfg.count(500)).map(|_| s.comparable_pair(r)).collect();
    let rep = rg.sigma_monotone_check(&pairs)?;
    t.cases += pairs.len().saturating_sub(1);
    t.check(rep.passed(), || rep.witness.clone().unwrap_or_default());
    Ok(t)
}

fn finite_regrading() -> Result<Tally> {
    fn run<L: ChiefChain + Clone>(l: L, t: &mut Tally) -> Result<()> {
        for a in antichain_cutsets_exhaustive(&l)? {
            let rep = FiniteRegrader::new(l.clone(), a.clone())?.cross_check()?;
            t.check(rep.passed(), || {
                format!("cutset {a:?}: {}", rep.witness.clone().unwrap_or_default())
            });
        }
        Ok(())
    }
    let mut t = Tally::new();
    run(BooleanLattice::new(4)?, &mut t)?;
    run(PartitionLattice::new(4)?, &mut t)?;
    Ok(t)
}

fn direct_limit() -> Result<Tally> {
    let mut t = Tally::new();
    for (family, k, m, n) in [
        (TowerFamily::Boolean, 2, 4, 8),
        (TowerFamily::Subspace(2), 1, 2, 4),
    ] {
        let rep = coherence_check(family, k, m, n)?;
        t.check(rep.passed(), || format!("coherence: {rep:?}"));
    }
    for (k, n) in [(2u8, 4u32), (4, 8), (2, 8)] {
        let v = boolean_embedding_violation(k, n)?;
        t.check(v.is_none(), || {
            format!("B_{k} → B_{n}: {}", v.clone().unwrap_or_default())
        });
    }
    for (k, n) in [(1u8, 2u8), (2, 4), (1, 4)] {
        let v = subspace_embedding_violation(2, k, n)?;
        t.check(v.is_none(), || {
            format!("F_2^{k} → F_2^{n}: {}", v.clone().unwrap_or_default())
        });
    }
    let b4 = BooleanLattice::new(4)?;
    let all: Vec<BitSubset> = b4.elements()?;
    for x in &all {
        let ix = boolean_to_interval(x);
        let rank = renormalized_rank(&b4, x)?;
        t.check(Rank::Finite(ix.lebesgue()) == rank, || {
            format!("measure of {x} differs from its rank")
        });
        for y in &all {
            let iy = boolean_to_interval(y);
            let ok = boolean_to_interval(&b4.meet(x, y)) == ix.meet(&iy)
                && boolean_to_interval(&b4.join(x, y)) == ix.join(&iy);
            t.check(ok, || {
                format!("interval image not a lattice map at {x}, {y}")
            });
        }
    }
    let levels: Vec<u32> = (1..=8).map(|k| 1 << k).collect();
    let table = cauchy_approx(&"(0,1/3]".parse()?, &levels)?;
    let last = &table.rows.last().expect("nonempty").distance_to_target;
    t.check(last <= &q(2, 256), || {
        format!("distance {} at level 256", fmt_q(last))
    });
    t.check(table.monotone() && table.within_endpoint_bound(), || {
        "cauchy table not monotone".into()
    });
    Ok(t)
}

fn discontinuity() -> Result<Tally> {
    let mut t = Tally::new();
    let bs: Vec<Q> = (0..=12).map(|k| qi(1 << k)).collect();
    let demo = product_plane_limit_demo(&bs);
    t.check(
        demo.meet_sup == Rank::zero() && demo.meet_at_top == Rank::int(1),
        || format!("{demo:?}"),
    );
    t.check(
        demo.discontinuous_at_pos_inf() && demo.discontinuous_at_neg_inf(),
        || format!("{demo:?}"),
    );
    let y: IntervalSet = "(-1,1]".parse()?;
    let bdd = bounded_chain_demo(&bs, &bs, &y)?;
    t.check(
        bdd.chain_scan.iter().all(|(_, r)| r == &Rank::zero()),
        || format!("{bdd:?}"),
    );
    t.check(bdd.chain_fails() && bdd.chief_recovers(), || {
        format!("{bdd:?}")
    });
    let plane = product_plane_hypotheses()?;
    t.check(plane.failing() == vec![1], || {
        format!("product plane: {plane:?}")
    });
    let bm = bounded_measurable_hypotheses()?;
    t.check(bm.failing() == vec![1], || {
        format!("bounded measurable sets: {bm:?}")
    });
    let bi = bounded_interval_hypotheses(qi(2))?;
    let vacuous = bi
        .conditions
        .iter()
        .all(|c| c.status == ConditionStatus::Vacuous);
    t.check(vacuous, || format!("bounded interval lattice: {bi:?}"));
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig {
            samples: Some(20),
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn every_suite_passes_on_a_small_run() {
        for name in SUITES {
            let rep = run_suite(name, &quick()).unwrap();
            assert!(rep.passed, "{name}: {:?}", rep.witness);
            assert!(rep.cases > 0, "{name}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("level-set", &quick()).unwrap();
        let b = run_suite("level-set", &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", &quick()).is_err());
    }

    #[test]
    fn counterexample_values() {
        let rep = counterexample_report().unwrap();
        assert!(rep.matches_expected());
        assert_eq!(rep.defect, Rank::ratio(-1, 2));
    }

    #[test]
    fn a_broken_tally_keeps_the_first_witness() {
        let mut t = Tally::new();
        t.check(true, || "a".into());
        t.check(false, || "b".into());
        t.check(false, || "c".into());
        let rep = t.finish("x", "y");
        assert!(!rep.passed);
        assert_eq!((rep.cases, rep.witness.as_deref()), (3, Some("b")));
    }
}
