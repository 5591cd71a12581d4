//! Scenario files: `{"kind": ..., "label": ..., "payload": {...}}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use survopt::eoq::EoqScenario;
use survopt::horizon::{self, GaConfig, HorizonParams, HorizonPolicy};
use survopt::repro::fixtures::StratifiedFixture;
use survopt::repro::tables;
use survopt::stats::{AttributeSummary, SrsSummary, StratifiedPopulation};
use survopt::Convention;

use crate::table::print_csv;
use crate::Failure;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    Stratified,
    Srs,
    Attribute,
    FuzzyEoq,
    Horizon,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Scenario {
    kind: Kind,
    #[serde(default)]
    label: String,
    payload: serde_json::Value,
}

pub struct Options<'a> {
    pub model: Option<&'a str>,
    pub ga: bool,
    pub seed: u64,
    pub conv: Option<Convention>,
}

/// Parses with the offending field path in the message.
fn parse<T: DeserializeOwned>(what: &str, v: serde_json::Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        Failure::Usage(format!("{what}: at '{path}': {}", e.into_inner()))
    })
}

fn model<'a>(opts: &Options<'a>, allowed: &[&'a str]) -> Result<&'a str, Failure> {
    let m = opts.model.unwrap_or(allowed[0]);
    if allowed.contains(&m) {
        Ok(m)
    } else {
        Err(Failure::Usage(format!("model '{m}' not one of {}", allowed.join(", "))))
    }
}

/// Main CSV and any companion CSVs keyed by file suffix.
struct Output {
    csv: String,
    extra: Vec<(&'static str, String)>,
}

impl Output {
    fn single(csv: String) -> Self {
        Output { csv, extra: Vec::new() }
    }
}

pub fn solve(path: &Path, opts: &Options, out: Option<&Path>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let sc: Scenario = parse("scenario", doc)?;
    let label = if sc.label.is_empty() { "scenario" } else { sc.label.as_str() };
    let payload = sc.payload;
    let output = match sc.kind {
        Kind::Stratified => {
            model(opts, &["pre"])?;
            let f: StratifiedFixture = parse("payload", payload)?;
            let pop = StratifiedPopulation::from_inputs(&f.strata)?;
            Output::single(tables::stratified_pre(&pop)?.csv)
        }
        Kind::Srs => {
            model(opts, &["all"])?;
            let s: SrsSummary = parse("payload", payload)?;
            Output::single(tables::srs_single(label, &s, opts.conv.unwrap_or(Convention::SignConsistent))?.csv)
        }
        Kind::Attribute => {
            let a: AttributeSummary = parse("payload", payload)?;
            let pops = [(label, a)];
            let csv = match model(opts, &["single", "two-phase", "weights"])? {
                "single" => tables::single_phase_pre(&pops)?.csv,
                "two-phase" => {
                    if a.n_prime.is_none() || a.p_prime.is_none() {
                        return Err(Failure::Usage("payload: two-phase model needs 'n_prime' and 'p_prime'".into()));
                    }
                    tables::two_phase_pre(&pops, opts.conv.unwrap_or(Convention::StrictPrint))?.csv
                }
                _ => tables::weights(&pops)?.csv,
            };
            Output::single(csv)
        }
        Kind::FuzzyEoq => {
            let which = model(opts, &["all", "crisp", "fuzzy"])?;
            let s: EoqScenario = parse("payload", payload)?;
            let csv = tables::eoq_rows(&s.crisp_params(), &s.fuzzy_params(), opts.conv.unwrap_or(Convention::StrictPrint))?.csv;
            let keep = |line: &str| which == "all" || line.starts_with("model,") || line.starts_with(which);
            Output::single(csv.lines().filter(|l| keep(l)).map(|l| format!("{l}\n")).collect())
        }
        Kind::Horizon => {
            let which = model(opts, &["optimize", "sensitivity"])?;
            let p: HorizonParams = parse("payload", payload)?;
            if which == "sensitivity" {
                sensitivity_output(&p)?
            } else {
                horizon_output(&p, opts)?
            }
        }
    };

    println!("{label}");
    print_csv(&output.csv);
    for (suffix, csv) in &output.extra {
        println!("\n{label} {suffix}");
        print_csv(csv);
    }
    if let Some(path) = out {
        write(path, &output.csv)?;
        for (suffix, csv) in &output.extra {
            write(&companion(path, suffix), csv)?;
        }
    }
    Ok(())
}

fn horizon_output(p: &HorizonParams, opts: &Options) -> Result<Output, Failure> {
    let policy: HorizonPolicy = if opts.ga {
        horizon::ga_optimize(p, &GaConfig { seed: opts.seed, ..Default::default() })?.best
    } else {
        horizon::optimize(p)?.policy
    };
    let cost = horizon::total_cost(policy.m, policy.k, p)?;
    let mut csv = String::from("m,k,t_r,t1,T,Q,TC\n");
    let c = &cost.cycle;
    let _ = writeln!(csv, "{},{},{},{},{},{},{}", c.m, c.k, c.t_r, c.t1, c.T, c.Q, cost.tc);
    let mut comp = String::from("m,k,OC,HCr,HCo,DCr,DCo,SC,LC,PC\n");
    let parts: Vec<String> = cost.components.as_array().iter().map(f64::to_string).collect();
    let _ = writeln!(comp, "{},{},{}", c.m, c.k, parts.join(","));
    Ok(Output { csv, extra: vec![("components", comp)] })
}

fn sensitivity_output(p: &HorizonParams) -> Result<Output, Failure> {
    let mut csv = String::from("b,m,k,t_r,t1,T,Q,TC\n");
    for (b, q) in horizon::sensitivity_b(p, &horizon::B_SWEEP)? {
        let _ = writeln!(csv, "{b},{},{},{},{},{},{},{}", q.m, q.k, q.t_r, q.t1, q.T, q.Q, q.TC);
    }
    Ok(Output::single(csv))
}

/// `out.csv` becomes `out.components.csv`.
fn companion(path: &Path, suffix: &str) -> std::path::PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn write(path: &Path, csv: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Compute(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, csv).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))
}
