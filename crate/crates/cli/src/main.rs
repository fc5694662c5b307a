use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twistforge::chain::{
    build_chain, effective_levels, preset, preset_names, Chain, ChainError, ChainSpec, PresetKind,
};
use twistforge::exact::Scalar;
use twistforge::expr::TwistElement;
use twistforge::lie::{build_defining, AlgebraDescriptor, RootVector, Series};
use twistforge::verify::golden::{run_golden, GoldenFile};
use twistforge::verify::suite::{check_sp_counterexample, matreshka_complete, matreshka_incomplete};
use twistforge::verify::{
    chain_rep, chain_suite, r_matrix, run_sweep, semiclassical_match, sweep_specs, RepChoice, SuiteOptions,
    VerificationReport, VerifyError,
};
use twistforge::Evaluator;

mod exit {
    pub const FAIL: u8 = 1;
    pub const INVALID_SPEC: u8 = 2;
    pub const CONSTRUCTION: u8 = 3;
    pub const INVERSION: u8 = 4;
    pub const GOLDEN: u8 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "twistforge", version, about = "Build and verify chains of extended Jordanian twists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print every check to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a chain and write chain.json, rmatrix.json and classical_r.json.
    Build(BuildArgs),
    /// Run the predicate suite and write report.json.
    Verify(VerifyArgs),
    /// Compare twisted coproducts with closed forms from a golden file.
    Golden(GoldenArgs),
    /// List the preset names.
    Presets,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Named configuration (see `twistforge presets`).
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// JSON chain specification.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Deformation parameter applied to every level, e.g. `1/2` or `eps`.
    #[arg(long)]
    xi: Option<String>,
    /// Level multipliers: level k uses `xi * eta_k`.
    #[arg(long, value_delimiter = ',')]
    eta_list: Vec<String>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "twistforge-out")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RepArg {
    Defining,
    Adjoint,
}

impl From<RepArg> for RepChoice {
    fn from(r: RepArg) -> Self {
        match r {
            RepArg::Defining => RepChoice::Defining,
            RepArg::Adjoint => RepChoice::Adjoint,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "twistforge-out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "defining")]
    rep: RepArg,
    /// Verify every chain of the classical series up to `--max-rank`.
    #[arg(long, conflicts_with_all = ["preset", "spec"])]
    sweep: bool,
    #[arg(long, default_value_t = 5)]
    max_rank: usize,
    /// Record wall-clock milliseconds per check in report.json.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct GoldenArgs {
    /// Golden JSONL file; the bundled so(9) data is used by default.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Only the lines of this stage (e.g. J0, E0J0, J1E0J0, B1<0).
    #[arg(long)]
    stage: Option<String>,
    #[arg(long, default_value = "twistforge-out")]
    out: PathBuf,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Chain(c) => c.into(),
            VerifyError::Golden { .. } => Failure::new(exit::GOLDEN, e.to_string()),
            other => Failure::new(exit::CONSTRUCTION, other.to_string()),
        }
    }
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Self {
        let code = match e {
            ChainError::Lie(_) | ChainError::Leg(_) => exit::CONSTRUCTION,
            _ => exit::INVALID_SPEC,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(exit::FAIL, e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

fn parse_scalar(s: &str, what: &str) -> Res<Scalar> {
    s.parse().map_err(|e| Failure::new(exit::INVALID_SPEC, format!("{what} `{s}`: {e}")))
}

/// What a source resolves to.
enum Subject {
    Chain { label: String, spec: ChainSpec },
    Counterexample { label: String, rank: usize, halves: twistforge::chain::InvariantHalves, expect_fail: bool },
}

impl Subject {
    fn label(&self) -> &str {
        match self {
            Subject::Chain { label, .. } | Subject::Counterexample { label, .. } => label,
        }
    }

    fn expect_fail(&self) -> bool {
        matches!(self, Subject::Counterexample { expect_fail: true, .. })
    }
}

fn resolve(src: &Source) -> Res<Subject> {
    let (label, spec) = match (&src.preset, &src.spec) {
        (Some(name), _) => {
            let p = preset(name).ok_or_else(|| {
                Failure::new(exit::INVALID_SPEC, format!("unknown preset `{name}`; known: {}", preset_names().join(", ")))
            })?;
            match p.kind {
                PresetKind::Chain(spec) => (name.clone(), spec),
                PresetKind::SpCounterexample { rank, halves } => {
                    return Ok(Subject::Counterexample { label: name.clone(), rank, halves, expect_fail: p.expect_fail });
                }
            }
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(exit::INVALID_SPEC, format!("{}: {e}", path.display())))?;
            let spec: ChainSpec = serde_json::from_str(&text)
                .map_err(|e| Failure::new(exit::INVALID_SPEC, format!("{}: {e}", path.display())))?;
            (path.display().to_string(), spec)
        }
        (None, None) => return Err(Failure::new(exit::INVALID_SPEC, "one of --preset or --spec is required")),
    };
    let mut levels = effective_levels(&spec)?;
    let xi = src.xi.as_deref().map(|s| parse_scalar(s, "--xi")).transpose()?;
    let etas = src.eta_list.iter().map(|s| parse_scalar(s, "--eta-list")).collect::<Res<Vec<_>>>()?;
    if etas.len() > levels.len() {
        return Err(Failure::new(
            exit::INVALID_SPEC,
            format!("--eta-list has {} entries for {} levels", etas.len(), levels.len()),
        ));
    }
    for (k, level) in levels.iter_mut().enumerate() {
        let base = xi.clone().unwrap_or_else(|| level.xi.clone());
        level.xi = match etas.get(k) {
            Some(eta) => base.mul(eta),
            None => base,
        };
    }
    Ok(Subject::Chain { label, spec: ChainSpec { levels: Some(levels), ..spec } })
}

fn stamp(subject: &Subject, rep: Option<RepChoice>) -> Value {
    let mut s = json!({
        "tool": "twistforge",
        "version": env!("CARGO_PKG_VERSION"),
        "subject": subject.label(),
    });
    match subject {
        Subject::Chain { spec, .. } => {
            s["spec"] = serde_json::to_value(spec).expect("serializable");
            s["basis"] = serde_json::to_value(spec.algebra.basis).expect("serializable");
        }
        Subject::Counterexample { rank, halves, .. } => {
            s["counterexample"] = json!({ "series": "C", "rank": rank, "halves": halves });
            s["basis"] = json!("raw");
        }
    }
    if let Some(r) = rep {
        s["rep"] = json!(r.name());
    }
    s
}

fn write_json(dir: &Path, name: &str, v: &Value) -> Res<()> {
    std::fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn counterexample_twist(rank: usize, halves: twistforge::chain::InvariantHalves) -> Res<(TwistElement, twistforge::lie::ClassicalAlgebra)> {
    let f = twistforge::chain::build_sp_counterexample(rank, halves)?;
    let mut alg = build_defining(&AlgebraDescriptor::raw(Series::C, rank)).map_err(VerifyError::from)?;
    alg.ensure_cartan(&RootVector::pair(rank, 1, 1, 2, -1));
    Ok((f, alg))
}

fn cmd_build(args: &BuildArgs) -> Res<()> {
    let subject = resolve(&args.source)?;
    let st = stamp(&subject, Some(RepChoice::Defining));
    match &subject {
        Subject::Chain { spec, .. } => {
            let chain = build_chain(spec)?;
            if chain.levels.is_empty() {
                eprintln!("warning: the specification has no levels; the chain is the identity");
            }
            let mut ev = Evaluator::new(chain.algebra.rep());
            let r = r_matrix(&chain.twist, &mut ev)?;
            write_json(&args.out, "chain.json", &json!({ "stamp": st, "levels": levels_json(&chain), "twist": chain.twist }))?;
            write_json(&args.out, "rmatrix.json", &json!({ "stamp": st, "leg_dim": ev.leg_dim(), "R": r }))?;
            write_json(
                &args.out,
                "classical_r.json",
                &json!({ "stamp": st, "terms": chain.classical_r_terms(), "poly": chain.classical_r() }),
            )?;
            println!("built {} with {} factors", subject.label(), chain.twist.factors().len());
        }
        Subject::Counterexample { rank, halves, .. } => {
            let (f, alg) = counterexample_twist(*rank, *halves)?;
            let mut ev = Evaluator::new(alg.rep());
            let r = r_matrix(&f, &mut ev)?;
            write_json(&args.out, "chain.json", &json!({ "stamp": st, "twist": f }))?;
            write_json(&args.out, "rmatrix.json", &json!({ "stamp": st, "leg_dim": ev.leg_dim(), "R": r }))?;
            println!("built {} with {} factors", subject.label(), f.factors().len());
        }
    }
    Ok(())
}

fn levels_json(chain: &Chain) -> Value {
    Value::Array(
        chain
            .levels
            .iter()
            .map(|l| {
                json!({
                    "index": l.index,
                    "initial_root": l.initial,
                    "xi": l.xi,
                    "pairs": l.pairs.iter().map(|p| json!({"first": p.first, "second": p.second, "coeff": p.coeff})).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn print_reports(reports: &[VerificationReport], verbose: bool) {
    if !verbose {
        return;
    }
    for r in reports {
        let status = if r.pass { "pass" } else { "FAIL" };
        let detail = r.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
        eprintln!("{status} {} {} [{}]{detail}", r.subject, r.check, r.rep);
    }
}

fn summary(reports: &[VerificationReport]) -> Value {
    let passed = reports.iter().filter(|r| r.pass).count();
    json!({ "total": reports.len(), "passed": passed, "failed": reports.len() - passed })
}

fn strip_timing(reports: Vec<VerificationReport>, timing: bool) -> Vec<VerificationReport> {
    if timing {
        reports
    } else {
        reports.into_iter().map(VerificationReport::untimed).collect()
    }
}

fn cmd_verify(args: &VerifyArgs, verbose: bool) -> Res<()> {
    let rep: RepChoice = args.rep.into();
    let opts = SuiteOptions { rep, timing: args.timing, incomplete: true };
    if args.sweep {
        return cmd_sweep(args, opts, verbose);
    }
    let subject = resolve(&args.source)?;
    let st = stamp(&subject, Some(rep));
    let (reports, outcome, code) = match &subject {
        Subject::Chain { spec, label } => {
            let chain = build_chain(spec)?;
            let mut reports = chain_suite(&chain, label, opts)?;
            if !args.source.eta_list.is_empty() || args.source.xi.is_some() {
                let etas: Vec<Scalar> = chain.levels.iter().map(|l| l.eta()).collect();
                let (r, _) = chain_rep(&chain, rep)?;
                let base = ChainSpec { levels: Some(effective_levels(spec)?), ..spec.clone() };
                reports.push(
                    semiclassical_match(&base, &etas, &r)?
                        .with_subject(label.clone())
                        .with_rep(rep.name())
                        .with_detail("with the requested level multipliers"),
                );
            }
            let ok = reports.iter().all(|r| r.pass);
            (reports, if ok { "pass" } else { "unexpected-fail" }, if ok { 0 } else { exit::INVERSION })
        }
        Subject::Counterexample { rank, halves, label, expect_fail } => {
            let r = check_sp_counterexample(*rank, *halves)?.with_subject(label.clone());
            let outcome = match (*expect_fail, r.pass) {
                (true, false) => "expected-fail",
                (true, true) => "unexpected-pass",
                (false, true) => "pass",
                (false, false) => "unexpected-fail",
            };
            let code = if *expect_fail == r.pass { exit::INVERSION } else { 0 };
            (vec![r], outcome, code)
        }
    };
    let reports = strip_timing(reports, args.timing);
    print_reports(&reports, verbose);
    let mut sum = summary(&reports);
    sum["expect_fail"] = json!(subject.expect_fail());
    sum["outcome"] = json!(outcome);
    write_json(&args.out, "report.json", &json!({ "stamp": st, "summary": sum, "results": reports }))?;
    println!("{}: {} ({}/{} checks pass)", subject.label(), outcome, sum["passed"], sum["total"]);
    if code == 0 {
        Ok(())
    } else {
        Err(Failure::new(code, format!("{}: {outcome}", subject.label())))
    }
}

fn cmd_sweep(args: &VerifyArgs, opts: SuiteOptions, verbose: bool) -> Res<()> {
    let specs = sweep_specs(args.max_rank);
    let results = run_sweep(&specs, opts);
    let mut chains = Vec::new();
    let mut all = Vec::new();
    let mut errors = Vec::new();
    for (name, res) in results {
        match res {
            Ok(reports) => {
                let reports = strip_timing(reports, args.timing);
                print_reports(&reports, verbose);
                let ok = reports.iter().all(|r| r.pass);
                println!("{name}: {}", if ok { "pass" } else { "FAIL" });
                chains.push(json!({ "name": name, "summary": summary(&reports), "results": reports }));
                all.extend(reports);
            }
            Err(e) => {
                println!("{name}: error: {e}");
                chains.push(json!({ "name": name, "error": e.to_string() }));
                errors.push(name);
            }
        }
    }
    let mut sum = summary(&all);
    sum["chains"] = json!(chains.len());
    sum["errors"] = json!(errors);
    let st = json!({
        "tool": "twistforge",
        "version": env!("CARGO_PKG_VERSION"),
        "subject": "sweep",
        "max_rank": args.max_rank,
        "rep": opts.rep.name(),
        "specs": specs.iter().map(|(n, s)| json!({"name": n, "spec": s})).collect::<Vec<_>>(),
    });
    write_json(&args.out, "report.json", &json!({ "stamp": st, "summary": sum, "chains": chains }))?;
    if !errors.is_empty() {
        return Err(Failure::new(exit::CONSTRUCTION, format!("construction failed for {}", errors.join(", "))));
    }
    let failed = all.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(Failure::new(exit::INVERSION, format!("{failed} checks failed in the sweep")));
    }
    println!("sweep: {} chains, {} checks, all pass", chains.len(), all.len());
    Ok(())
}

fn cmd_golden(args: &GoldenArgs, verbose: bool) -> Res<()> {
    let file = match &args.file {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
            GoldenFile::parse(&name, &text)?
        }
        None => GoldenFile::so9(),
    };
    let name = file
        .preset()
        .ok_or_else(|| Failure::new(exit::GOLDEN, format!("{}: no chain line naming a preset", file.name)))?
        .to_string();
    let subject = resolve(&Source { preset: Some(name.clone()), spec: None, xi: None, eta_list: Vec::new() })?;
    let Subject::Chain { spec, .. } = &subject else {
        return Err(Failure::new(exit::GOLDEN, format!("{}: preset {name} is not a chain", file.name)));
    };
    let chain = build_chain(spec)?;
    let outcomes = run_golden(&chain, &file, args.stage.as_deref())?;
    let mut mismatches = Vec::new();
    for o in &outcomes {
        if verbose {
            let status = if o.ok() { "pass" } else { "FAIL" };
            eprintln!("{status} {}", o.report.subject);
        }
        if !o.report.pass {
            let at = o
                .report
                .witness
                .as_ref()
                .map(|w| format!(" first differing entry {}", serde_json::to_string(w).expect("serializable")))
                .unwrap_or_default();
            mismatches.push(format!("{}:{}: {} {}: formula does not match{at}", file.name, o.line, o.stage, o.generator.as_deref().unwrap_or("r")));
        } else if o.near_miss_rejected == Some(false) {
            mismatches.push(format!("{}:{}: {} {}: near-miss variant also matches", file.name, o.line, o.stage, o.generator.as_deref().unwrap_or("r")));
        }
    }
    let mut extra = Vec::new();
    if args.stage.is_none() {
        let rep = chain.algebra.rep().clone();
        let mut ev = Evaluator::new(&rep);
        extra.extend(matreshka_complete(&chain, &mut ev)?);
        extra.extend(matreshka_incomplete(&chain, &mut ev)?);
        print_reports(&extra, verbose);
        for r in extra.iter().filter(|r| !r.pass) {
            mismatches.push(format!("{}: {} {}", file.name, r.check, r.detail.as_deref().unwrap_or("")));
        }
    }
    let st = stamp(&subject, Some(RepChoice::Defining));
    let near_misses = outcomes.iter().filter(|o| o.near_miss_rejected == Some(true)).count();
    let sum = json!({
        "lines": outcomes.len(),
        "matched": outcomes.iter().filter(|o| o.ok()).count(),
        "near_misses_rejected": near_misses,
        "mismatches": mismatches,
    });
    write_json(
        &args.out,
        "golden_report.json",
        &json!({ "stamp": st, "file": file.name, "stage": args.stage, "summary": sum, "lines": outcomes, "matreshka": extra }),
    )?;
    if !mismatches.is_empty() {
        for m in &mismatches {
            eprintln!("{m}");
        }
        return Err(Failure::new(exit::GOLDEN, format!("{} golden mismatches", mismatches.len())));
    }
    println!("golden {}: {} lines match, {near_misses} near-miss variants rejected", file.name, outcomes.len());
    Ok(())
}

fn configure_threads() -> Res<()> {
    if let Ok(v) = std::env::var("TWISTFORGE_THREADS") {
        let n: usize = v.parse().map_err(|_| Failure::new(exit::FAIL, format!("TWISTFORGE_THREADS=`{v}` is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::new(exit::FAIL, e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Res<()> {
    configure_threads()?;
    match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a, cli.verbose),
        Command::Golden(a) => cmd_golden(a, cli.verbose),
        Command::Presets => {
            for name in preset_names() {
                let p = preset(name).expect("registered");
                let tag = if p.expect_fail { " [expected to fail]" } else { "" };
                println!("{name:20} {}{tag}", p.description);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
