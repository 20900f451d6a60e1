use cutset_core::finite::{BooleanLattice, FiniteLattice, PartitionLattice};
use cutset_core::interval::{Grading, IntervalLattice, IntervalSet, StepDensity};
use cutset_core::lattice::{
    diamond_bounds_check, lattice_axiom_violation, rank_modular_defect, rm_balance_residuals,
    GradedLattice,
};
use cutset_core::rank::{q, qi};
use cutset_core::regrading::{IntervalRegrader, Regrader};
use cutset_core::Rank;
use proptest::prelude::*;

/// Unions of up to four intervals with endpoints on the `1/16` grid of `(0, 2]`.
fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((0i64..32, 1i64..=32), 0..4).prop_map(|raw| {
        let pieces = raw
            .into_iter()
            .map(|(a, len)| (q(a, 16), q((a + len).min(32), 16)))
            .filter(|(a, b)| a < b)
            .collect();
        IntervalSet::normalize(pieces).unwrap()
    })
}

fn strict_pair() -> impl Strategy<Value = (IntervalSet, IntervalSet)> {
    (interval_set(), interval_set())
        .prop_map(|(w, u)| (w.clone(), w.join(&u)))
        .prop_filter("distinct", |(w, z)| w != z)
}

fn density() -> impl Strategy<Value = StepDensity> {
    prop::collection::vec(1i64..5, 1..4).prop_map(|vals| {
        let k = vals.len() as i64;
        let breaks = (0..=k).map(|i| q(2 * i, k)).collect();
        StepDensity::new(breaks, vals.into_iter().map(qi).collect()).unwrap()
    })
}

fn two_step() -> IntervalRegrader {
    IntervalRegrader::two_step_example()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn interval_lattice_axioms(x in interval_set(), y in interval_set(), z in interval_set()) {
        let l = IntervalLattice::bounded(qi(2)).unwrap();
        prop_assert_eq!(lattice_axiom_violation(&l, &x, &y, &z), None);
    }

    #[test]
    fn every_interval_set_is_rank_modular(m in interval_set(), x in interval_set()) {
        let l = IntervalLattice::bounded(qi(2)).unwrap();
        prop_assert_eq!(rank_modular_defect(&l, &m, &x).unwrap(), Rank::zero());
    }

    #[test]
    fn balance_and_diamond((m2, m) in strict_pair(), (w, z) in strict_pair()) {
        let l = IntervalLattice::bounded(qi(2)).unwrap();
        prop_assert_eq!(rm_balance_residuals(&l, &m, &m2, &w, &z).unwrap(), (Rank::zero(), Rank::zero()));
        let d = diamond_bounds_check(&l, &m, &m2, &w, &z).unwrap();
        prop_assert!(d.all_hold() && d.rows_balance());
    }

    #[test]
    fn sigma_is_strictly_increasing((w, z) in strict_pair()) {
        let r = two_step();
        prop_assert!(r.sigma_eval(&w).unwrap() < r.sigma_eval(&z).unwrap());
    }

    #[test]
    fn projection_lands_on_the_level(z in interval_set(), f in density()) {
        let total = f.total();
        let level = &total / qi(3);
        let l = IntervalLattice::bounded(qi(2)).unwrap();
        let spec = cutset_core::regrading::CutsetSpec::level(Grading::Density(f.clone()), level.clone());
        let r = IntervalRegrader::new(l.clone(), &spec).unwrap();
        let p = r.project_alpha(&z).unwrap();
        prop_assert_eq!(f.integrate(&p.alpha), level.clone());
        // α lies on the good chain through z, on the side fixed by ν(z).
        prop_assert!(l.comparable(&p.alpha, &z));
        let sigma = r.sigma_eval(&z).unwrap();
        let nu = f.integrate(&z);
        prop_assert_eq!(sigma == qi(0), nu == level);
        prop_assert_eq!(sigma > qi(0), nu > level);
    }

    #[test]
    fn alpha_respects_the_order((w, z) in strict_pair()) {
        let r = two_step();
        prop_assume!(r.nu(&w).unwrap() >= *r.level());
        prop_assert!(r.alpha_order_check(&w, &z).unwrap().holds);
    }

    #[test]
    fn uniform_cutsets_shift_the_rank(z in interval_set(), c in 1i64..16) {
        let l = IntervalLattice::bounded(qi(2)).unwrap();
        let level = q(c, 8);
        let r = IntervalRegrader::new(l, &cutset_core::regrading::CutsetSpec::level(Grading::Rank, level.clone())).unwrap();
        prop_assert_eq!(r.sigma_eval(&z).unwrap(), z.lebesgue() - level);
    }
}

#[test]
fn finite_lattices_satisfy_the_axioms_exhaustively() {
    fn all<L: FiniteLattice>(l: &L) {
        let xs = l.elements().unwrap();
        for x in &xs {
            for y in &xs {
                for z in &xs {
                    assert_eq!(lattice_axiom_violation(l, x, y, z), None);
                }
            }
        }
    }
    all(&BooleanLattice::new(3).unwrap());
    all(&PartitionLattice::new(4).unwrap());
}
