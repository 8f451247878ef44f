use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use stabsys::construction::{
    check_lemma6, check_requirements, minimality_report, run_construction, CheckReport, MinimalityReport,
    SimError, SimulationResult, StabilityPattern,
};
use stabsys::dot::export_dot;
use stabsys::ordinal::Ordinal;
use stabsys::poset::{
    canonical_extend, chain_infimum, extend_to_chain_limit, in_poset, meet_dense, ChainPresentation, DenseSet,
    PosetParams,
};
use stabsys::stability::{StabilityError, StabilitySystem, ValidationReport};
use stabsys::suites::{run_all, SuiteConfig, SuiteReport, SuiteSizes};

#[derive(Parser)]
#[command(name = "stabsys", version, about = "Stability systems below ω^ω: validation, orders, forcing steps and construction replays")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a system against V1-V5, and optionally membership in P(κ, ℓ, γ).
    Validate {
        system: PathBuf,
        #[command(flatten)]
        poset: PosetArgs,
    },
    /// Decide a <_k b.
    Rel {
        #[arg(long)]
        k: u32,
        a: Ordinal,
        b: Ordinal,
        system: PathBuf,
    },
    /// The <_k-predecessors of b as a union of intervals.
    Preds {
        #[arg(long)]
        k: u32,
        b: Ordinal,
        system: PathBuf,
    },
    /// Raise the top canonically, or move it to a chain limit.
    Extend {
        system: PathBuf,
        #[arg(long, conflicts_with_all = ["chain_limit", "target"], required_unless_present = "chain_limit")]
        to: Option<Ordinal>,
        #[arg(long, value_name = "ELL", requires = "target")]
        chain_limit: Option<u32>,
        #[arg(long)]
        target: Option<Ordinal>,
    },
    /// Lower bound of a descending chain with a limit target.
    Infimum { chain: PathBuf },
    /// Meet a list of dense sets starting from a condition.
    Generic {
        system: PathBuf,
        #[arg(long = "dense", required = true)]
        dense: Vec<String>,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        ell: u32,
    },
    /// Run the construction on a pattern and check the outcome.
    Simulate {
        pattern: PathBuf,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<Ordinal>>,
    },
    /// Graphviz drawing of the <_k tree.
    ExportDot {
        #[arg(long)]
        k: u32,
        system: PathBuf,
        #[arg(long = "mark")]
        marks: Vec<Ordinal>,
    },
    /// Randomized property suites and the oracle differential.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smaller case counts.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        sequential: bool,
        /// Include wall-clock timings (output is then no longer reproducible).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
struct PosetArgs {
    #[arg(long, requires_all = ["ell", "gamma"])]
    kappa: Option<Ordinal>,
    #[arg(long, requires = "kappa")]
    ell: Option<u32>,
    #[arg(long, requires = "kappa")]
    gamma: Option<Ordinal>,
}

enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    /// A well-formed request the library refused.
    Domain(String),
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        CliError::Input(e.to_string())
    }
}

struct Output {
    text: String,
    json: String,
    ok: bool,
}

impl Output {
    fn new<T: Serialize>(text: String, value: &T, ok: bool) -> Self {
        Output {
            text,
            json: serde_json::to_string_pretty(value).expect("serializable"),
            ok,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<StabilitySystem, CliError> {
    StabilitySystem::from_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn domain(e: impl ToString) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Serialize)]
struct ValidateOutput {
    #[serde(flatten)]
    report: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    in_poset: Option<bool>,
}

fn validate(system: &Path, args: &PosetArgs) -> Result<Output, CliError> {
    let p = load_system(system)?;
    let report = p.validate();
    let mut text = String::new();
    if report.valid {
        text.push_str("valid\n");
    }
    for v in &report.violations {
        writeln!(text, "{} at {} (level {}): {}", v.check, v.ordinal, v.level, v.message).unwrap();
    }
    let mut membership = None;
    if let (Some(kappa), Some(ell), Some(gamma)) = (&args.kappa, args.ell, &args.gamma) {
        let params = PosetParams::new(kappa.clone(), ell, gamma.clone()).map_err(|e| CliError::Input(e.to_string()))?;
        if report.valid {
            let member = in_poset(&p, &params).map_err(domain)?;
            writeln!(text, "in P({kappa}, {ell}, {gamma}): {member}").unwrap();
            membership = Some(member);
        }
    }
    let ok = report.valid && membership != Some(false);
    let out = ValidateOutput {
        report,
        in_poset: membership,
    };
    Ok(Output::new(text, &out, ok))
}

#[derive(Serialize)]
struct RelOutput<'a> {
    k: u32,
    a: &'a Ordinal,
    b: &'a Ordinal,
    holds: bool,
}

fn rel(k: u32, a: &Ordinal, b: &Ordinal, system: &Path) -> Result<Output, CliError> {
    let p = load_system(system)?;
    let holds = p.lt_k(k, a, b)?;
    Ok(Output::new(format!("{holds}\n"), &RelOutput { k, a, b, holds }, true))
}

#[derive(Serialize)]
struct PredsOutput<'a> {
    k: u32,
    b: &'a Ordinal,
    preds: stabsys::ordinal::IntervalSet,
}

fn preds(k: u32, b: &Ordinal, system: &Path) -> Result<Output, CliError> {
    let p = load_system(system)?;
    let preds = p.pred_set(k, b)?;
    Ok(Output::new(format!("{preds}\n"), &PredsOutput { k, b, preds: preds.clone() }, true))
}

fn system_output(p: &StabilitySystem) -> Output {
    Output::new(format!("{}\n", p.to_json()), p, true)
}

fn extend(system: &Path, to: Option<&Ordinal>, chain_limit: Option<u32>, target: Option<&Ordinal>) -> Result<Output, CliError> {
    let p = load_system(system)?;
    let q = match (to, chain_limit, target) {
        (Some(alpha), _, _) => canonical_extend(&p, alpha).map_err(domain)?,
        (None, Some(ell), Some(target)) => extend_to_chain_limit(&p, ell, target).map_err(domain)?,
        _ => return Err(CliError::Input("either --to or --chain-limit with --target is required".into())),
    };
    Ok(system_output(&q))
}

fn infimum(chain: &Path) -> Result<Output, CliError> {
    let chain: ChainPresentation = parse_json(chain)?;
    let p = chain_infimum(&chain).map_err(domain)?;
    Ok(system_output(&p))
}

fn generic(system: &Path, specs: &[String], budget: usize, ell: u32) -> Result<Output, CliError> {
    let p = load_system(system)?;
    let dense = specs
        .iter()
        .map(|s| DenseSet::parse(s).map_err(CliError::Input))
        .collect::<Result<Vec<_>, _>>()?;
    let out = meet_dense(&p, ell, &dense, budget).map_err(domain)?;
    let mut text = String::new();
    for (name, step) in &out.met {
        writeln!(text, "met {name} at step {step}").unwrap();
    }
    writeln!(text, "spent {} of {budget}", out.spent).unwrap();
    writeln!(text, "{}", out.result.to_json()).unwrap();
    Ok(Output::new(text, &out, true))
}

#[derive(Serialize)]
struct SimulateOutput {
    pattern: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<SimulationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    requirements: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma6: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimality: Option<MinimalityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn set_text(items: &[Ordinal]) -> String {
    if items.is_empty() {
        return "∅".to_string();
    }
    let parts: Vec<String> = items.iter().map(Ordinal::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn simulate(pattern: &Path, grid: Option<&[Ordinal]>) -> Result<Output, CliError> {
    let pattern: StabilityPattern = parse_json(pattern)?;
    let checked = pattern.validate();
    let mut text = format!("pattern:\n{checked}");
    let mut out = SimulateOutput {
        pattern: checked,
        result: None,
        requirements: None,
        lemma6: None,
        minimality: None,
        error: None,
    };
    let result = match run_construction(&pattern) {
        Ok(r) => r,
        Err(SimError::InvalidPattern(_)) => return Ok(Output::new(text, &out, false)),
        Err(e) => {
            writeln!(text, "construction failed: {e}").unwrap();
            out.error = Some(e.to_string());
            return Ok(Output::new(text, &out, false));
        }
    };
    for p in &result.per_point {
        writeln!(text, "point {}: ell={} gamma={} alpha={}", p.pos, p.ell, p.gamma, p.alpha).unwrap();
    }
    writeln!(text, "system: {}", result.system.to_json()).unwrap();
    let requirements = check_requirements(&result, &pattern);
    let lemma6 = check_lemma6(&result, &pattern);
    write!(text, "{requirements}{lemma6}").unwrap();
    let ok = requirements.passed() && lemma6.passed();
    if let Some(grid) = grid {
        let m = minimality_report(&result, grid);
        writeln!(text, "horizon: {}", m.horizon).unwrap();
        writeln!(text, "survivors: {}", set_text(&m.survivors)).unwrap();
        for b in &m.blocked {
            writeln!(text, "blocked {} at level {} by f_{}({}) = {}", b.ordinal, b.level, b.level, b.key, b.value).unwrap();
        }
        if !m.unsettled.is_empty() {
            writeln!(text, "unsettled: {}", set_text(&m.unsettled)).unwrap();
        }
        out.minimality = Some(m);
    }
    out.result = Some(result);
    out.requirements = Some(requirements);
    out.lemma6 = Some(lemma6);
    Ok(Output::new(text, &out, ok))
}

#[derive(Serialize)]
struct DotOutput {
    dot: String,
}

fn dot(k: u32, system: &Path, marks: &[Ordinal]) -> Result<Output, CliError> {
    let p = load_system(system)?;
    let dot = export_dot(&p, k, marks)?;
    Ok(Output::new(dot.clone(), &DotOutput { dot }, true))
}

fn selftest(seed: u64, quick: bool, sequential: bool, timings: bool) -> Output {
    let config = SuiteConfig {
        seed,
        parallel: !sequential,
    };
    let sizes = if quick { SuiteSizes::quick() } else { SuiteSizes::full() };
    let mut reports: Vec<SuiteReport> = run_all(&config, &sizes);
    let mut text = String::new();
    for r in &mut reports {
        if !timings {
            r.elapsed_ms = 0;
        }
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        write!(text, "{verdict} {} ({} cases, {} checks)", r.name, r.cases, r.checks).unwrap();
        if timings {
            write!(text, " in {} ms", r.elapsed_ms).unwrap();
        }
        text.push('\n');
        for f in r.failures.iter().take(5) {
            writeln!(text, "  {f}").unwrap();
        }
    }
    let ok = reports.iter().all(SuiteReport::passed);
    Output::new(text, &reports, ok)
}

fn dispatch(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Validate { system, poset } => validate(system, poset),
        Command::Rel { k, a, b, system } => rel(*k, a, b, system),
        Command::Preds { k, b, system } => preds(*k, b, system),
        Command::Extend {
            system,
            to,
            chain_limit,
            target,
        } => extend(system, to.as_ref(), *chain_limit, target.as_ref()),
        Command::Infimum { chain } => infimum(chain),
        Command::Generic {
            system,
            dense,
            budget,
            ell,
        } => generic(system, dense, *budget, *ell),
        Command::Simulate { pattern, grid } => simulate(pattern, grid.as_deref()),
        Command::ExportDot { k, system, marks } => dot(*k, system, marks),
        Command::Selftest {
            seed,
            quick,
            sequential,
            timings,
        } => Ok(selftest(*seed, *quick, *sequential, *timings)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
