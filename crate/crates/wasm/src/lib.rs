//! Browser bindings for the regrading demo.
//!
//! Every export takes plain strings and returns a JSON document, or an error
//! message when the input does not describe a valid configuration. Rationals
//! are written `p/q` or as integers.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use cutset_core::interval::{Grading, IntervalLattice, IntervalSet, StepDensity};
use cutset_core::limit::cauchy_approx;
use cutset_core::rank::{fmt_q, parse_q, to_f64};
use cutset_core::regrading::{ChainSpec, CutsetSpec, IntervalRegrader, RegradeTable, Regrader};
use cutset_core::{JoinOrMeet, Q};

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn rationals(list: &str) -> Result<Vec<Q>, String> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_q(s).map_err(err))
        .collect()
}

fn regrader(breakpoints: &str, values: &str, level: &str) -> Result<IntervalRegrader, String> {
    let f = StepDensity::new(rationals(breakpoints)?, rationals(values)?).map_err(err)?;
    let lattice = IntervalLattice::bounded(f.end().clone()).map_err(err)?;
    let spec = CutsetSpec::level(Grading::Density(f), parse_q(level).map_err(err)?);
    IntervalRegrader::new(lattice, &spec).map_err(err)
}

fn parse_set(s: &str) -> Result<IntervalSet, String> {
    s.parse().map_err(err)
}

/// Pieces of a set as float pairs, for drawing.
fn pieces(u: &IntervalSet) -> Value {
    u.parts()
        .iter()
        .map(|(a, b)| json!([to_f64(a), to_f64(b)]))
        .collect()
}

fn table_json(t: &RegradeTable) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            json!({
                "rho": fmt_q(&r.rho),
                "sigma": fmt_q(&r.sigma),
                "rho_f": to_f64(&r.rho),
                "sigma_f": to_f64(&r.sigma),
                "element": r.element.to_string(),
                "alpha": r.alpha.to_string(),
            })
        })
        .collect();
    json!({
        "sigma_bottom": fmt_q(&t.sigma_bottom),
        "sigma_top": fmt_q(&t.sigma_top),
        "strictly_increasing": t.strictly_increasing(),
        "attains_endpoints": t.attains_endpoints(),
        "max_gap": fmt_q(&t.max_gap()),
        "rows": rows,
    })
}

/// σ along the chief chain (empty `seed`) or the good chain through `seed`,
/// sampled every `step` units of rank.
#[wasm_bindgen(js_name = regradeChain)]
pub fn regrade_chain(
    breakpoints: &str,
    values: &str,
    level: &str,
    seed: &str,
    step: &str,
) -> Result<String, String> {
    let rg = regrader(breakpoints, values, level)?;
    let chain = match seed.trim() {
        "" => ChainSpec::Chief,
        s => {
            let z = parse_set(s)?;
            z.check_within(rg.interval_lattice().ambient())
                .map_err(err)?;
            ChainSpec::GoodChain(z)
        }
    };
    let table = rg
        .regrade_table(&chain, &parse_q(step).map_err(err)?)
        .map_err(err)?;
    Ok(table_json(&table).to_string())
}

/// The projection `α(target)` onto the level set and the value `σ(target)`.
#[wasm_bindgen]
pub fn project(
    breakpoints: &str,
    values: &str,
    level: &str,
    target: &str,
) -> Result<String, String> {
    let rg = regrader(breakpoints, values, level)?;
    let z = parse_set(target)?;
    z.check_within(rg.interval_lattice().ambient())
        .map_err(err)?;
    let p = rg.project_alpha(&z).map_err(err)?;
    let sigma = rg.sigma_eval(&z).map_err(err)?;
    Ok(json!({
        "target": z.to_string(),
        "target_pieces": pieces(&z),
        "rho": fmt_q(&rg.rho(&z)),
        "nu": fmt_q(&rg.nu(&z).map_err(err)?),
        "alpha": p.alpha.to_string(),
        "alpha_pieces": pieces(&p.alpha),
        "lambda_star": p.lambda_star.to_string(),
        "side": match p.side { JoinOrMeet::Meet => "meet", JoinOrMeet::Join => "join" },
        "sigma": fmt_q(&sigma),
        "end": to_f64(rg.end()),
    })
    .to_string())
}

/// Dyadic-style approximants of `target` at each level in `levels`.
#[wasm_bindgen]
pub fn approximate(target: &str, levels: &str) -> Result<String, String> {
    let z = parse_set(target)?;
    let levels: Vec<u32> = levels
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad level `{s}`")))
        .collect::<Result<_, _>>()?;
    let table = cauchy_approx(&z, &levels).map_err(err)?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "level": r.level,
                "approximant": r.approximant.to_string(),
                "pieces": pieces(&r.approximant),
                "distance": fmt_q(&r.distance_to_target),
                "distance_f": to_f64(&r.distance_to_target),
            })
        })
        .collect();
    Ok(json!({
        "target": z.to_string(),
        "target_pieces": pieces(&z),
        "monotone": table.monotone(),
        "within_bound": table.within_endpoint_bound(),
        "rows": rows,
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: Result<String, String>) -> Value {
        serde_json::from_str(&s.unwrap()).unwrap()
    }

    #[test]
    fn chief_chain_of_the_two_step_density() {
        let v = parse(regrade_chain("0 1 2", "1 2", "1", "", "1/4"));
        assert_eq!(v["sigma_bottom"], "-1/1");
        assert_eq!(v["sigma_top"], "1/1");
        assert_eq!(v["strictly_increasing"], true);
        assert_eq!(v["rows"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn good_chain_through_a_seed() {
        let v = parse(regrade_chain("0,1,2", "1,2", "1", "(1/2,3/2]", "1/8"));
        assert_eq!(v["strictly_increasing"], true);
        assert_eq!(v["attains_endpoints"], true);
    }

    #[test]
    fn projection_of_the_right_half() {
        let v = parse(project("0 1 2", "1 2", "1", "(1,2]"));
        assert_eq!(v["alpha"], "(1,3/2]");
        assert_eq!(v["lambda_star"], "3/2");
        assert_eq!(v["side"], "meet");
        assert_eq!(v["sigma"], "1/2");
        let e = parse(project("0 1 2", "1 2", "1", "∅"));
        assert_eq!(e["side"], "join");
        assert_eq!(e["sigma"], "-1/1");
    }

    #[test]
    fn approximants_converge() {
        let v = parse(approximate("(0,1/3]", "2,4,8,16"));
        assert_eq!(v["monotone"], true);
        assert_eq!(v["rows"][3]["approximant"], "(0,5/16]");
    }

    #[test]
    fn bad_inputs_are_reported() {
        assert!(project("0 1 2", "1 2", "5", "(0,1]").is_err());
        assert!(project("0 1 2", "1", "1", "(0,1]").is_err());
        assert!(project("0 1 2", "1 2", "1", "(0,3]").is_err());
        assert!(regrade_chain("0 1 2", "1 2", "1", "", "0").is_err());
        assert!(approximate("(0,1/3]", "2,x").is_err());
        assert!(approximate("(0,1/3]", "2,3").is_err());
    }
}
