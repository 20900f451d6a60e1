//! `cutset`: batch verification and regrading reports.
//!
//! Exit status is 0 when every check passes, 1 when a property fails and 2
//! when the input cannot be used.

use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use cutset_core::finite::{caps, ChiefChain, ElementCodec, Family};
use cutset_core::interval::{Grading, IntervalLattice, IntervalSet, StepDensity};
use cutset_core::limit::{
    boolean_embedding_violation, cauchy_approx, coherence_check, subspace_embedding_violation,
    TowerFamily,
};
use cutset_core::rank::{fmt_q, parse_q, to_f64, Q};
use cutset_core::regrading::{ChainSpec, CutsetSpec, FiniteRegrader, IntervalRegrader, Regrader};
use cutset_core::suites::{self, counterexample_report, SuiteConfig, SUITES};
use cutset_core::Rank;

#[derive(Parser, Debug)]
#[command(
    name = "cutset",
    version,
    about = "Exact regrading of real-graded lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args, Debug, Clone)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites.
    Verify {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Random samples per suite (defaults differ per suite).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Step-density JSON file used as the cutset grading.
        #[arg(long)]
        density: Option<PathBuf>,
        /// Cutset level.
        #[arg(long, default_value = "1/1")]
        level: String,
        /// Fine grid step for the continuity comparison.
        #[arg(long, default_value = "1/128")]
        grid: String,
        #[command(flatten)]
        output: Output,
    },
    /// Compute α and σ for targets, or sweep σ along a chain.
    Regrade {
        /// `interval:T`, `boolean:N`, `partition:N` or `subspace:P:N`.
        #[arg(long, default_value = "interval:2")]
        lattice: String,
        /// Cutset JSON file; defaults to the two-step density at level 1.
        #[arg(long)]
        cutset: Option<PathBuf>,
        /// Target element as text, e.g. `(1,2]`; repeatable. Interval lattice only.
        #[arg(long = "target")]
        targets: Vec<String>,
        /// JSON array of target elements.
        #[arg(long)]
        targets_file: Option<PathBuf>,
        /// Sweep σ along a chain at this ρ step instead of listing targets.
        #[arg(long)]
        grid: Option<String>,
        /// Seed element of the swept good chain; the chief chain when absent.
        #[arg(long)]
        chain_seed: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduce the two-step counterexample.
    Counterexample {
        /// Use the uniform density, where σ keeps the chief chain rank modular.
        #[arg(long)]
        uniform: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Grid approximants of a target set along a divisibility chain.
    Limit {
        /// Target set as text, e.g. `(0,1/3]`.
        #[arg(long, conflicts_with = "target_file")]
        target: Option<String>,
        /// Target set as an IntervalSet JSON file.
        #[arg(long)]
        target_file: Option<PathBuf>,
        /// Comma-separated levels, each dividing the next.
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64,128,256")]
        levels: Vec<u32>,
        #[command(flatten)]
        output: Output,
    },
}

/// Rows plus the configuration and summary lines they were produced under.
struct Report {
    config: Vec<(String, String)>,
    summary: Vec<(String, String)>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json_rows: Value,
}

impl Report {
    fn write(&self, output: &Output) -> Result<()> {
        let mut buf: Vec<u8> = Vec::new();
        match output.format {
            Format::Csv => {
                for (k, v) in self.config.iter().chain(&self.summary) {
                    writeln!(buf, "# {k}={v}")?;
                }
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            Format::Json => {
                let obj = |pairs: &[(String, String)]| {
                    Value::Object(
                        pairs
                            .iter()
                            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                            .collect(),
                    )
                };
                let doc = json!({
                    "config": obj(&self.config),
                    "summary": obj(&self.summary),
                    "rows": self.json_rows,
                });
                serde_json::to_writer_pretty(&mut buf, &doc)?;
                buf.push(b'\n');
            }
        }
        match &output.out {
            Some(p) => fs::write(p, buf).with_context(|| format!("writing {}", p.display()))?,
            None => io::stdout().write_all(&buf)?,
        }
        Ok(())
    }
}

fn kv(k: &str, v: impl Display) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn decimal(x: &Q) -> String {
    format!("{:.6}", to_f64(x))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {what} file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {what} file {}", path.display()))
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn caps_line() -> String {
    format!(
        "boolean_n={},partition_n={},subspace_dim={},cutset_elements={},maximal_chains={}",
        caps::BOOLEAN_N,
        caps::PARTITION_N,
        caps::SUBSPACE_DIM,
        caps::CUTSET_ELEMENTS,
        caps::MAXIMAL_CHAINS
    )
}

fn verify(
    suite: &str,
    samples: Option<usize>,
    seed: u64,
    density: Option<&PathBuf>,
    level: &str,
    grid: &str,
    output: &Output,
) -> Result<bool> {
    let density_value: Option<StepDensity> =
        density.map(|p| read_json(p, "density")).transpose()?;
    let cfg = SuiteConfig {
        seed,
        samples,
        density: density_value,
        level: parse_q(level)?,
        grid: parse_q(grid)?,
    };
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    let mut reports = Vec::new();
    for name in names {
        let start = Instant::now();
        let rep = suites::run_suite(name, &cfg)?;
        eprintln!(
            "{:<20} {:>4} {:>8} cases  {:>8.2?}",
            rep.name,
            if rep.passed { "ok" } else { "FAIL" },
            rep.cases,
            start.elapsed()
        );
        reports.push(rep);
    }
    let all_passed = reports.iter().all(|r| r.passed);
    let report = Report {
        config: vec![
            kv("command", "verify"),
            kv("suite", suite),
            kv("seed", seed),
            kv(
                "samples",
                samples.map_or("default".to_string(), |s| s.to_string()),
            ),
            kv(
                "density",
                density.map_or("two-step".to_string(), |p| p.display().to_string()),
            ),
            kv("level", fmt_q(&cfg.level)),
            kv("grid", fmt_q(&cfg.grid)),
            kv("caps", caps_line()),
            kv("format", format_name(output.format)),
        ],
        summary: vec![kv("suites", reports.len()), kv("all_passed", all_passed)],
        header: vec!["suite", "tag", "cases", "passed", "witness"],
        rows: reports
            .iter()
            .map(|r| {
                vec![
                    r.name.to_string(),
                    r.tag.to_string(),
                    r.cases.to_string(),
                    r.passed.to_string(),
                    r.witness.clone().unwrap_or_default(),
                ]
            })
            .collect(),
        json_rows: serde_json::to_value(&reports)?,
    };
    report.write(output)?;
    Ok(all_passed)
}

#[derive(Serialize)]
struct TargetRow {
    element: Value,
    rho: String,
    alpha: Value,
    lambda_star: String,
    side: String,
    sigma: String,
}

impl TargetRow {
    fn csv(&self, shown: String, alpha: String) -> Vec<String> {
        let sigma = parse_q(&self.sigma)
            .map(|s| decimal(&s))
            .unwrap_or_default();
        vec![
            shown,
            self.rho.clone(),
            alpha,
            self.lambda_star.clone(),
            self.side.clone(),
            self.sigma.clone(),
            sigma,
        ]
    }
}

const TARGET_HEADER: [&str; 7] = [
    "element",
    "rho",
    "alpha",
    "lambda_star",
    "side",
    "sigma",
    "sigma_decimal",
];

fn side_name(side: cutset_core::JoinOrMeet) -> String {
    format!("{side:?}").to_lowercase()
}

/// Summary lines, CSV header and rows, JSON rows, and whether every check passed.
type Section = (
    Vec<(String, String)>,
    Vec<&'static str>,
    Vec<Vec<String>>,
    Value,
    bool,
);

fn regrade_interval(
    end: Q,
    cutset: &CutsetSpec,
    targets: &[String],
    targets_file: Option<&PathBuf>,
    grid: Option<&str>,
    chain_seed: Option<&str>,
) -> Result<Section> {
    let lattice = IntervalLattice::bounded(end)?;
    let rg = IntervalRegrader::new(lattice.clone(), cutset)?;
    if let Some(step) = grid {
        let step = parse_q(step)?;
        let chain = match chain_seed {
            Some(s) => ChainSpec::GoodChain(lattice.element(s)?),
            None => ChainSpec::Chief,
        };
        let table = rg.regrade_table(&chain, &step)?;
        let ok = table.strictly_increasing() && table.attains_endpoints();
        let summary = vec![
            kv("sigma_bottom", fmt_q(&table.sigma_bottom)),
            kv("sigma_top", fmt_q(&table.sigma_top)),
            kv("strictly_increasing", table.strictly_increasing()),
            kv("attains_endpoints", table.attains_endpoints()),
            kv("max_gap", fmt_q(&table.max_gap())),
        ];
        let rows = table
            .rows
            .iter()
            .map(|r| {
                vec![
                    fmt_q(&r.rho),
                    fmt_q(&r.lambda),
                    r.element.to_string(),
                    r.alpha.to_string(),
                    fmt_q(&r.sigma),
                    decimal(&r.sigma),
                ]
            })
            .collect();
        let header = vec![
            "rho",
            "lambda",
            "element",
            "alpha",
            "sigma",
            "sigma_decimal",
        ];
        return Ok((summary, header, rows, serde_json::to_value(&table)?, ok));
    }
    let mut elems: Vec<IntervalSet> = targets
        .iter()
        .map(|t| lattice.element(t))
        .collect::<Result<_, _>>()?;
    if let Some(p) = targets_file {
        let more: Vec<IntervalSet> = read_json(p, "targets")?;
        for e in &more {
            e.check_within(lattice.ambient())?;
        }
        elems.extend(more);
    }
    if elems.is_empty() {
        bail!("no targets given; use --target, --targets-file or --grid");
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for z in &elems {
        let p = rg.project_alpha(z)?;
        let row = TargetRow {
            element: serde_json::to_value(z)?,
            rho: fmt_q(&rg.rho(z)),
            alpha: serde_json::to_value(&p.alpha)?,
            lambda_star: p.lambda_star.to_string(),
            side: side_name(p.side),
            sigma: fmt_q(&rg.sigma_eval(z)?),
        };
        rows.push(row.csv(z.to_string(), p.alpha.to_string()));
        json_rows.push(serde_json::to_value(&row)?);
    }
    Ok((
        vec![kv("targets", elems.len())],
        TARGET_HEADER.to_vec(),
        rows,
        Value::Array(json_rows),
        true,
    ))
}

fn regrade_finite<L>(
    lattice: L,
    cutset: &CutsetSpec,
    targets_file: Option<&PathBuf>,
) -> Result<Section>
where
    L: ChiefChain + ElementCodec + Clone,
    L::Elem: Display,
{
    let fr = FiniteRegrader::from_spec(lattice.clone(), cutset)?;
    let elems = match targets_file {
        Some(p) => {
            let raw: Vec<Value> = read_json(p, "targets")?;
            raw.iter()
                .map(|v| lattice.decode_json(v))
                .collect::<Result<Vec<_>, _>>()?
        }
        None => lattice.elements()?,
    };
    let check = fr.cross_check()?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for z in &elems {
        let p = fr.project_alpha(z)?;
        let rho = lattice.rank(z);
        let row = TargetRow {
            element: lattice.encode_json(z),
            rho: rho.to_string(),
            alpha: lattice.encode_json(&p.alpha),
            lambda_star: p.lambda_star.to_string(),
            side: side_name(p.side),
            sigma: fmt_q(&fr.sigma_eval(z)?),
        };
        rows.push(row.csv(z.to_string(), p.alpha.to_string()));
        json_rows.push(serde_json::to_value(&row)?);
    }
    let summary = vec![
        kv("targets", elems.len()),
        kv("cutset_size", fr.cutset().len()),
        kv("maximal_chains_checked", check.chains),
        kv("grading_on_every_chain", check.passed()),
    ];
    let ok = check.passed();
    Ok((
        summary,
        TARGET_HEADER.to_vec(),
        rows,
        Value::Array(json_rows),
        ok,
    ))
}

#[allow(clippy::too_many_arguments)]
fn regrade(
    lattice: &str,
    cutset: Option<&PathBuf>,
    targets: &[String],
    targets_file: Option<&PathBuf>,
    grid: Option<&str>,
    chain_seed: Option<&str>,
    output: &Output,
) -> Result<bool> {
    let spec: CutsetSpec = match cutset {
        Some(p) => read_json(p, "cutset")?,
        None if lattice.starts_with("interval:") => serde_json::from_value(json!({
            "type": "level",
            "grading": {"density": {"breakpoints": ["0/1", "1/1", "2/1"], "values": ["1/1", "2/1"]}},
            "value": "1/1"
        }))?,
        None => CutsetSpec::level(Grading::Rank, Q::from_integer(1.into())),
    };
    let (summary, header, rows, json_rows, ok) = if let Some(end) =
        lattice.strip_prefix("interval:")
    {
        regrade_interval(
            parse_q(end)?,
            &spec,
            targets,
            targets_file,
            grid,
            chain_seed,
        )?
    } else {
        if !targets.is_empty() || grid.is_some() || chain_seed.is_some() {
            bail!("--target, --grid and --chain-seed apply to the interval lattice only");
        }
        match lattice.parse::<Family>()? {
            Family::Boolean(l) => regrade_finite(l, &spec, targets_file)?,
            Family::Partition(l) => regrade_finite(l, &spec, targets_file)?,
            Family::Subspace(l) => regrade_finite(l, &spec, targets_file)?,
            Family::ProductPlane => bail!("the product plane has no chief chain to regrade along"),
        }
    };
    let report = Report {
        config: vec![
            kv("command", "regrade"),
            kv("lattice", lattice),
            kv("cutset", serde_json::to_string(&spec)?),
            kv("grid", grid.unwrap_or("none")),
            kv("chain_seed", chain_seed.unwrap_or("chief")),
            kv("format", format_name(output.format)),
        ],
        summary,
        header,
        rows,
        json_rows,
    };
    report.write(output)?;
    Ok(ok)
}

fn counterexample(uniform: bool, output: &Output) -> Result<bool> {
    let rep = counterexample_report()?;
    let (rows, ok): (Vec<(String, Rank)>, bool) = if uniform {
        let rg = IntervalRegrader::uniform_example();
        let mut rows = Vec::new();
        let mut ok = true;
        for s in ["(0,1]", "(1,2]", "(0,2]", "∅"] {
            let z: IntervalSet = s.parse()?;
            let sigma = rg.sigma_eval(&z)?;
            ok &= sigma == z.lebesgue() - Q::from_integer(1.into());
            rows.push((format!("sigma({s})"), Rank::Finite(sigma)));
        }
        rows.push(("defect".into(), rep.uniform_defect.clone()));
        (rows, ok && rep.uniform_defect == Rank::zero())
    } else {
        let mut rows: Vec<(String, Rank)> = rep
            .prefix_sigmas
            .iter()
            .map(|(t, s)| (format!("sigma((0,{t}])"), s.clone()))
            .collect();
        rows.push(("sigma((1,2])".into(), rep.sigma_right_half.clone()));
        rows.push(("sigma(∅)".into(), rep.sigma_empty.clone()));
        rows.push(("defect".into(), rep.defect.clone()));
        (rows, rep.matches_expected())
    };
    let report = Report {
        config: vec![
            kv("command", "counterexample"),
            kv("ambient", "(0,2]"),
            kv(
                "density",
                if uniform {
                    "1 on (0,2]"
                } else {
                    "1 on (0,1], 2 on (1,2]"
                },
            ),
            kv("level", "1/1"),
            kv("format", format_name(output.format)),
        ],
        summary: vec![kv("matches_expected", ok)],
        header: vec!["quantity", "value", "decimal"],
        rows: rows
            .iter()
            .map(|(k, v)| vec![k.clone(), v.to_string(), format!("{:.6}", v.to_f64())])
            .collect(),
        json_rows: Value::Array(
            rows.iter()
                .map(|(k, v)| json!({"quantity": k, "value": v}))
                .collect(),
        ),
    };
    report.write(output)?;
    Ok(ok)
}

fn limit(
    target: Option<&str>,
    target_file: Option<&PathBuf>,
    levels: &[u32],
    output: &Output,
) -> Result<bool> {
    let t: IntervalSet = match (target, target_file) {
        (Some(s), _) => s.parse()?,
        (None, Some(p)) => read_json(p, "target")?,
        (None, None) => bail!("give --target or --target-file"),
    };
    let table = cauchy_approx(&t, levels)?;
    let coherence = [
        coherence_check(TowerFamily::Boolean, 2, 4, 8)?,
        coherence_check(TowerFamily::Subspace(2), 1, 2, 4)?,
    ];
    let isometric = boolean_embedding_violation(2, 8)?.is_none()
        && subspace_embedding_violation(2, 2, 4)?.is_none();
    let ok = table.monotone()
        && table.within_endpoint_bound()
        && coherence.iter().all(|c| c.passed())
        && isometric;
    let report = Report {
        config: vec![
            kv("command", "limit"),
            kv("target", &t),
            kv(
                "levels",
                levels
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            kv("format", format_name(output.format)),
        ],
        summary: vec![
            kv("monotone", table.monotone()),
            kv("within_endpoint_bound", table.within_endpoint_bound()),
            kv("coherence_boolean_2_4_8", coherence[0].passed()),
            kv("coherence_subspace_f2_1_2_4", coherence[1].passed()),
            kv("isometric_embeddings", isometric),
        ],
        header: vec![
            "level",
            "approximant",
            "distance_to_target",
            "distance_to_previous",
            "distance_decimal",
        ],
        rows: table
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.level.to_string(),
                    r.approximant.to_string(),
                    fmt_q(&r.distance_to_target),
                    r.distance_to_previous
                        .as_ref()
                        .map(fmt_q)
                        .unwrap_or_default(),
                    decimal(&r.distance_to_target),
                ]
            })
            .collect(),
        json_rows: serde_json::to_value(&table.rows)?,
    };
    report.write(output)?;
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Verify {
            suite,
            samples,
            seed,
            density,
            level,
            grid,
            output,
        } => verify(
            suite,
            *samples,
            *seed,
            density.as_ref(),
            level,
            grid,
            output,
        ),
        Command::Regrade {
            lattice,
            cutset,
            targets,
            targets_file,
            grid,
            chain_seed,
            output,
        } => regrade(
            lattice,
            cutset.as_ref(),
            targets,
            targets_file.as_ref(),
            grid.as_deref(),
            chain_seed.as_deref(),
            output,
        ),
        Command::Counterexample { uniform, output } => counterexample(*uniform, output),
        Command::Limit {
            target,
            target_file,
            levels,
            output,
        } => limit(target.as_deref(), target_file.as_ref(), levels, output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("cutset: property check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("cutset: {e:#}");
            ExitCode::from(2)
        }
    }
}
