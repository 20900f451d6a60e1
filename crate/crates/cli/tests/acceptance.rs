//! Runs the nine acceptance criteria and prints one line per criterion.
//! Exits nonzero if any criterion fails or overruns its time budget.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cutset_core::finite::{
    antichain_cutsets_exhaustive, enumerate_maximal_chains, rank_modular_elements,
};
use cutset_core::finite::{BooleanLattice, PartitionLattice};
use cutset_core::interval::IntervalSet;
use cutset_core::limit::cauchy_approx;
use cutset_core::rank::{q, qi};
use cutset_core::regrading::{
    bounded_measurable_hypotheses, product_plane_hypotheses, IntervalRegrader, Regrader,
};
use cutset_core::suites::{run_suite, SuiteConfig};

type Check = Result<(), String>;

/// Name, time budget in seconds, and the check itself.
type Criterion = (&'static str, u64, fn() -> Check);

fn set(s: &str) -> IntervalSet {
    s.parse().expect("fixture parses")
}

fn suites(names: &[&str]) -> Check {
    let cfg = SuiteConfig::default();
    for name in names {
        let rep = run_suite(name, &cfg).map_err(|e| format!("{name}: {e}"))?;
        if !rep.passed {
            return Err(format!("{name}: {}", rep.witness.unwrap_or_default()));
        }
    }
    Ok(())
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counterexample() -> Check {
    let r = IntervalRegrader::two_step_example();
    let sigma = |s: &str| r.sigma_eval(&set(s)).map_err(|e| e.to_string());
    for (t, want) in [
        (qi(1), qi(0)),
        (q(5, 4), q(1, 4)),
        (q(3, 2), q(1, 2)),
        (qi(2), qi(1)),
    ] {
        let got = r
            .sigma_eval(&IntervalSet::interval(qi(0), t.clone()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        expect(got == want, || format!("σ((0,{t}]) = {got}, want {want}"))?;
    }
    expect(sigma("(1,2]")? == q(1, 2), || "σ((1,2]) ≠ 1/2".into())?;
    expect(sigma("∅")? == qi(-1), || "σ(∅) ≠ -1".into())?;
    let d = r
        .sigma_rank_modular_defect(&set("(0,1]"), &set("(1,2]"))
        .map_err(|e| e.to_string())?;
    expect(d == q(-1, 2), || format!("defect {d}, want -1/2"))?;
    suites(&["counterexample"])
}

fn counts() -> Check {
    let e = |e: cutset_core::Error| e.to_string();
    let modular = rank_modular_elements(&PartitionLattice::new(4).map_err(e)?)
        .map_err(e)?
        .len();
    expect(modular == 12, || {
        format!("Π_4 has {modular} rank-modular elements")
    })?;
    let cutsets = antichain_cutsets_exhaustive(&BooleanLattice::new(2).map_err(e)?)
        .map_err(e)?
        .len();
    expect(cutsets == 3, || {
        format!("B_2 has {cutsets} antichain cutsets")
    })?;
    let chains = enumerate_maximal_chains(&BooleanLattice::new(4).map_err(e)?)
        .map_err(e)?
        .len();
    expect(chains == 24, || format!("B_4 has {chains} maximal chains"))?;
    suites(&["finite-counts"])
}

fn direct_limit() -> Check {
    let table = cauchy_approx(&set("(0,1/3]"), &[2, 4, 8, 16, 32, 64, 128, 256])
        .map_err(|e| e.to_string())?;
    let last = table.rows.last().ok_or("empty table")?;
    expect(last.distance_to_target <= q(2, 256), || {
        format!("distance {} at level 256", last.distance_to_target)
    })?;
    suites(&["direct-limit"])
}

fn discontinuity() -> Check {
    let plane = product_plane_hypotheses()
        .map_err(|e| e.to_string())?
        .failing();
    expect(plane == vec![1], || {
        format!("product plane flags {plane:?}")
    })?;
    let bm = bounded_measurable_hypotheses()
        .map_err(|e| e.to_string())?
        .failing();
    expect(bm == vec![1], || {
        format!("bounded measurable sets flag {bm:?}")
    })?;
    suites(&["discontinuity"])
}

fn full_verify() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_cutset"))
        .args(["verify", "--suite", "all", "--out"])
        .arg(std::env::temp_dir().join("cutset-acceptance-verify.csv"))
        .output()
        .map_err(|e| e.to_string())?;
    expect(out.status.code() == Some(0), || {
        format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("counterexample reproduction", 1, counterexample),
        ("level-set property", 5, || suites(&["level-set"])),
        ("monotonicity and surjectivity", 10, || {
            suites(&["monotone"])
        }),
        ("rank-modular identity suites", 30, || {
            suites(&[
                "rmbalance",
                "diamond",
                "left-modular",
                "chief-identities",
                "interval-projection",
            ])
        }),
        ("finite oracle counts", 5, counts),
        ("finite regrading cross-check", 30, || {
            suites(&["finite-regrading"])
        }),
        ("direct-limit suite", 10, direct_limit),
        ("discontinuity demos", 2, discontinuity),
        ("full verify exits 0", 60, full_verify),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let ok = outcome.is_ok() && !over;
        let note = match (&outcome, over) {
            (Err(e), _) => format!(" ({e})"),
            (Ok(()), true) => format!(" (over the {budget} s budget)"),
            _ => String::new(),
        };
        println!(
            "{} criterion {}: {name} [{took:.2?}]{note}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
