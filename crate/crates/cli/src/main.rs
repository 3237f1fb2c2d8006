use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use qcbound::bounds::{
    appendix_dichotomy, bmax_upper_fixed, flower_reports, log_negativity, pbit_capacity_gap, transposition_bound,
    BoundReport, Direction, Method, Target,
};
use qcbound::channels::{
    amplitude_damping, depolarizing, diagonal_certificate, erasure, flower_channel, identity_channel,
    pbit_channel, pbit_separable_choi, random_channel, switch_channel, Choi, ChoiJson, Side,
};
use qcbound::divergences::{divergence, Alpha};
use qcbound::sdp::{bmax_ppt, dmax_over_ppt, ProgramOptions};
use qcbound::states::{
    antisymmetric_state, approx_pbit, flower_state, gamma2, max_entangled, random_separable, random_state, seeded_rng,
    Density, DensityJson, SeparableDecomposition,
};
use qcbound::verify::{run_named, VerificationReport};

/// Default acceptance tolerance for the post-computation checks of `bound`.
const DEFAULT_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "qcbound", version, about = "Relative-entropy bounds on two-way assisted channel capacities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a state and write its JSON.
    State(StateArgs),
    /// Construct a channel (normalized Choi state) and write its JSON.
    Channel(ChannelArgs),
    /// Sandwiched Renyi divergence D_alpha(rho || sigma) in bits.
    Divergence(DivergenceArgs),
    /// Compute a bound report.
    ///
    /// CSV output has one row per report with columns
    /// bound,targets,direction,bits,method,relaxation.
    Bound(BoundArgs),
    /// Run verification suites; exit code 0 iff every case passes.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Machine-readable output file; without it the output goes to stdout
    /// and the summary to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateFamily {
    Flower,
    Pbit,
    Gamma2,
    Omega,
    Antisym,
    Random,
    RandomSeparable,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, value_enum)]
    family: StateFamily,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Subsystem dimensions for the random families (comma separated).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelFamily {
    Flower,
    Pbit,
    Depolarizing,
    Erasure,
    Ad,
    Identity,
    Random,
    Switch,
    File,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransposeSide {
    In,
    Out,
}

#[derive(Args)]
struct ChannelSpec {
    #[arg(long = "channel-family", alias = "family", value_enum)]
    family: Option<ChannelFamily>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Channel JSON (family `file`, or the first branch of `switch`).
    #[arg(long)]
    choi: Option<PathBuf>,
    /// Second branch of `switch`; without files the switch runs the
    /// identity against the depolarizing channel with parameter `p`.
    #[arg(long)]
    choi1: Option<PathBuf>,
    /// Compose with the transpose on the input or output.
    #[arg(long, value_enum)]
    transpose: Option<TransposeSide>,
}

#[derive(Args)]
struct ChannelArgs {
    #[command(flatten)]
    spec: ChannelSpec,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DivergenceArgs {
    /// Order: a number, "1" for the relative entropy or "inf" for D_max.
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    rho: PathBuf,
    #[arg(long)]
    sigma: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    Transposition,
    BmaxPpt,
    BmaxFixed,
    EmaxPpt,
    Lognegativity,
    FlowerFormulas,
    PbitGap,
    Appendix,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    bound: BoundKind,
    #[command(flatten)]
    spec: ChannelSpec,
    /// Entanglement-breaking channel JSON for `bmax-fixed`.
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// Separable decomposition JSON certifying `--sigma`; diagonal Choi
    /// states are certified automatically.
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 16)]
    l: usize,
    /// Sweep the channel parameter (`p`, or `gamma` for `ad`) over
    /// START:STOP:POINTS.
    #[arg(long)]
    sweep: Option<String>,
    /// Always run the interior-point method.
    #[arg(long)]
    force_ipm: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name (dpt, dpi, dmax-additivity, nonlock, privacy, flower, pbit,
    /// appendix, sdp-xval) or "all".
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

enum CliError {
    Usage(String),
    Compute(String),
}

impl From<qcbound::Error> for CliError {
    fn from(e: qcbound::Error) -> Self {
        match e {
            qcbound::Error::InvalidParameter(_) | qcbound::Error::Dimension(_) => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid_input(path: &Path, e: qcbound::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!(
            "malformed JSON in {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn check_input(path: &Option<PathBuf>) -> CliResult<()> {
    match path {
        Some(p) if !p.is_file() => Err(CliError::Usage(format!("input file {} does not exist", p.display()))),
        _ => Ok(()),
    }
}

fn check_output(out: &OutputArgs) -> CliResult<()> {
    if let Some(p) = &out.out {
        let parent = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !parent.is_dir() {
            return Err(CliError::Usage(format!("output directory {} does not exist", parent.display())));
        }
    }
    Ok(())
}

fn acceptance_tol() -> CliResult<f64> {
    match std::env::var("QCBOUND_TOL") {
        Ok(v) => v
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t >= 0.0)
            .ok_or_else(|| CliError::Usage(format!("QCBOUND_TOL={v} is not a nonnegative number"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

/// Writes the machine output to `--out` (summary on stdout) or to stdout
/// (summary on stderr).
fn emit(out: &OutputArgs, machine: &str, summary: &str) -> CliResult<()> {
    match &out.out {
        Some(p) => {
            fs::write(p, machine).map_err(|e| CliError::Compute(format!("cannot write {}: {e}", p.display())))?;
            println!("{summary}");
        }
        None => {
            println!("{machine}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Compute(e.to_string()))
}

fn json_only(out: &OutputArgs, what: &str) -> CliResult<()> {
    if out.format == Format::Csv {
        return Err(CliError::Usage(format!("{what} output is JSON only")));
    }
    Ok(())
}

fn run_state(a: &StateArgs) -> CliResult<()> {
    json_only(&a.output, "state")?;
    check_output(&a.output)?;
    let d = a.d;
    if d < 2 {
        return Err(CliError::Usage(format!("--d {d} must be at least 2")));
    }
    let dims = a.dims.clone().unwrap_or_else(|| vec![d]);
    let rho: Density<f64> = match a.family {
        StateFamily::Flower => flower_state(d),
        StateFamily::Pbit => approx_pbit(d),
        StateFamily::Gamma2 => gamma2::<f64>(d).state().clone(),
        StateFamily::Omega => max_entangled(d),
        StateFamily::Antisym => antisymmetric_state(d),
        StateFamily::Random => random_state(&dims, a.seed),
        StateFamily::RandomSeparable => {
            let dims = a.dims.clone().unwrap_or_else(|| vec![d, d]);
            random_separable(&dims, 4, &mut seeded_rng(a.seed)).0
        }
    };
    let summary = format!("state of dimension {} on dims {:?}, purity {:.6}", rho.dim(), rho.dims(), rho.purity());
    emit(&a.output, &to_json(&rho.to_json())?, &summary)
}

fn load_channel(path: &Path) -> CliResult<Choi<f64>> {
    let j: ChoiJson = read_json(path)?;
    Choi::from_json(&j).map_err(|e| invalid_input(path, e))
}

fn build_channel(s: &ChannelSpec) -> CliResult<Choi<f64>> {
    let family = s
        .family
        .ok_or_else(|| CliError::Usage("--channel-family is required".into()))?;
    check_input(&s.choi)?;
    check_input(&s.choi1)?;
    let d = s.d;
    if d < 2 && !matches!(family, ChannelFamily::Ad | ChannelFamily::File) {
        return Err(CliError::Usage(format!("--d {d} must be at least 2")));
    }
    let c = match family {
        ChannelFamily::Flower => flower_channel(d),
        ChannelFamily::Pbit => pbit_channel(d),
        ChannelFamily::Depolarizing => depolarizing(d, s.p)?,
        ChannelFamily::Erasure => erasure(d, s.p)?,
        ChannelFamily::Ad => amplitude_damping(s.gamma)?,
        ChannelFamily::Identity => identity_channel(d),
        ChannelFamily::Random => random_channel(d, d, 2, s.seed),
        ChannelFamily::Switch => match (&s.choi, &s.choi1) {
            (Some(a), Some(b)) => switch_channel(&load_channel(a)?, &load_channel(b)?)?,
            (None, None) => switch_channel(&identity_channel(d), &depolarizing(d, s.p)?)?,
            _ => return Err(CliError::Usage("switch needs both --choi and --choi1, or neither".into())),
        },
        ChannelFamily::File => {
            let p = s
                .choi
                .as_ref()
                .ok_or_else(|| CliError::Usage("family file needs --choi".into()))?;
            load_channel(p)?
        }
    };
    Ok(match s.transpose {
        Some(TransposeSide::In) => c.compose_transpose(Side::In)?,
        Some(TransposeSide::Out) => c.compose_transpose(Side::Out)?,
        None => c,
    })
}

fn run_channel(a: &ChannelArgs) -> CliResult<()> {
    json_only(&a.output, "channel")?;
    check_output(&a.output)?;
    let c = build_channel(&a.spec)?;
    let (ppt, min) = c.is_ppt()?;
    let summary = format!(
        "channel {} -> {}, Choi {} (min partial-transpose eigenvalue {min:.3e})",
        c.d_in(),
        c.d_out(),
        if ppt { "PPT" } else { "NPT" }
    );
    emit(&a.output, &to_json(&c.to_json())?, &summary)
}

fn load_state(path: &Path) -> CliResult<Density<f64>> {
    let j: DensityJson = read_json(path)?;
    Density::from_json(&j).map_err(|e| invalid_input(path, e))
}

fn run_divergence(a: &DivergenceArgs) -> CliResult<()> {
    check_output(&a.output)?;
    let alpha: Alpha = a.alpha.parse().map_err(|e: qcbound::Error| CliError::Usage(e.to_string()))?;
    check_input(&Some(a.rho.clone()))?;
    check_input(&Some(a.sigma.clone()))?;
    let rho = load_state(&a.rho)?;
    let sigma = load_state(&a.sigma)?;
    let v = divergence(&rho, &sigma, alpha)?;
    let json = v.to_json();
    let bits = json.bits.map(|b| b.to_string()).unwrap_or_else(|| "inf".into());
    let machine = match a.output.format {
        Format::Json => to_json(&json)?,
        Format::Csv => format!("alpha,bits,finite\n{alpha},{bits},{}", json.finite),
    };
    let shown = json.bits.map(|b| format!("{b:.6}")).unwrap_or_else(|| "inf".into());
    emit(&a.output, &machine, &format!("D_{alpha}(rho || sigma) = {shown} bits"))
}

fn parse_sweep(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("--sweep {s} is not START:STOP:POINTS"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let points: usize = parts[2].parse().map_err(|_| bad())?;
    if points == 0 {
        return Err(bad());
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    Ok((0..points)
        .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
        .collect())
}

/// Post-computation sanity checks at the acceptance tolerance.
fn check_report(r: &BoundReport, tol: f64) -> CliResult<()> {
    if r.method != Method::Formula && r.bits < -tol {
        return Err(CliError::Compute(format!("{}: negative value {} bits", r.bound, r.bits)));
    }
    if let Some(ln) = r.diag_f64("log_negativity") {
        if r.bits < ln - tol {
            return Err(CliError::Compute(format!(
                "{}: {} bits below the log-negativity {ln}",
                r.bound, r.bits
            )));
        }
    }
    if let Some(f) = r.diag_f64("formula") {
        if r.direction == Direction::Upper && r.bits > f + tol {
            return Err(CliError::Compute(format!("{}: {} bits exceeds the formula {f}", r.bound, r.bits)));
        }
    }
    Ok(())
}

fn fixed_sigma(a: &BoundArgs, c: &Choi<f64>) -> CliResult<(Choi<f64>, SeparableDecomposition<f64>)> {
    match &a.sigma {
        Some(path) => {
            let c_s = load_channel(path)?;
            let cert = match &a.certificate {
                Some(cp) => read_json(cp)?,
                None => diagonal_certificate(c_s.matrix(), c_s.d_in(), c_s.d_out())?,
            };
            Ok((c_s, cert))
        }
        None if a.spec.family == Some(ChannelFamily::Pbit) && c.d_in() == 2 * a.spec.d => {
            Ok(pbit_separable_choi(a.spec.d)?)
        }
        None => Err(CliError::Usage("bmax-fixed needs --sigma (or the pbit family)".into())),
    }
}

fn bound_reports(a: &BoundArgs, spec: &ChannelSpec) -> CliResult<Vec<BoundReport>> {
    let opts = ProgramOptions {
        force_ipm: a.force_ipm,
        ..Default::default()
    };
    if matches!(a.bound, BoundKind::FlowerFormulas | BoundKind::PbitGap) && spec.d < 2 {
        return Err(CliError::Usage(format!("--d {} must be at least 2", spec.d)));
    }
    Ok(match a.bound {
        BoundKind::FlowerFormulas => flower_reports(spec.d)?,
        BoundKind::PbitGap => {
            let (lo, hi) = pbit_capacity_gap(spec.d)?;
            vec![lo, hi]
        }
        BoundKind::Appendix => {
            let t = appendix_dichotomy(a.n, a.l)?;
            let tag = |r: BoundReport| {
                r.diag("n", t.n)
                    .diag("l", t.l)
                    .diag("er_separated", t.er_separated)
                    .diag("esq_separated", t.esq_separated)
                    .diag("ratio", t.ratio)
            };
            vec![
                tag(BoundReport::new("appendix-er-tau0", Target::ER, Direction::Lower, t.er_tau0_lower, Method::Formula)),
                tag(BoundReport::new("appendix-er-tau1", Target::ER, Direction::Upper, t.er_tau1_upper, Method::Formula)),
                tag(BoundReport::new("appendix-esq-tau0", Target::ESq, Direction::Upper, t.esq_tau0_upper, Method::Formula)),
                tag(BoundReport::new("appendix-esq-tau1", Target::ESq, Direction::Exact, t.esq_tau1, Method::Formula)),
            ]
        }
        kind => {
            let c = build_channel(spec)?;
            vec![match kind {
                BoundKind::Transposition => transposition_bound(&c, &opts)?,
                BoundKind::BmaxPpt => bmax_ppt(&c, &opts)?,
                BoundKind::EmaxPpt => dmax_over_ppt(c.state(), 1, &opts)?,
                BoundKind::Lognegativity => log_negativity(&c)?,
                BoundKind::BmaxFixed => {
                    let (c_s, cert) = fixed_sigma(a, &c)?;
                    bmax_upper_fixed(&c, &c_s, &cert)?
                }
                _ => unreachable!("handled above"),
            }]
        }
    })
}

fn run_bound(a: &BoundArgs) -> CliResult<()> {
    check_output(&a.output)?;
    check_input(&a.sigma)?;
    check_input(&a.certificate)?;
    let tol = acceptance_tol()?;
    let mut reports = Vec::new();
    match &a.sweep {
        None => reports = bound_reports(a, &a.spec)?,
        Some(s) => {
            let family = a.spec.family;
            if !matches!(family, Some(ChannelFamily::Depolarizing | ChannelFamily::Erasure | ChannelFamily::Ad)) {
                return Err(CliError::Usage("--sweep applies to the depolarizing, erasure and ad families".into()));
            }
            for x in parse_sweep(s)? {
                let spec = ChannelSpec {
                    family,
                    d: a.spec.d,
                    p: x,
                    gamma: x,
                    seed: a.spec.seed,
                    choi: None,
                    choi1: None,
                    transpose: a.spec.transpose,
                };
                for r in bound_reports(a, &spec)? {
                    reports.push(r.diag("parameter", x));
                }
            }
        }
    }
    for r in &mut reports {
        check_report(r, tol)?;
        r.diagnostics.insert("acceptance_tolerance".into(), tol.into());
    }
    let machine = match a.output.format {
        Format::Json if reports.len() == 1 => to_json(&reports[0])?,
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut s = String::from(BoundReport::CSV_HEADER);
            for r in &reports {
                s.push('\n');
                s.push_str(&r.csv_row());
            }
            s
        }
    };
    let summary = reports
        .iter()
        .map(|r| {
            let dir = match r.direction {
                Direction::Upper => "<=",
                Direction::Lower => ">=",
                Direction::Exact => "=",
            };
            format!("{} {} {dir} {:.6} bits", r.bound, r.targets, r.bits)
        })
        .collect::<Vec<_>>()
        .join("\n");
    emit(&a.output, &machine, &summary)
}

fn verify_csv(r: &VerificationReport) -> String {
    let mut s = String::from("name,status,observed,relation,target,tolerance,margin,provenance");
    for c in &r.cases {
        let v = serde_json::to_value(c).unwrap_or_default();
        let field = |k: &str| match &v[k] {
            serde_json::Value::String(x) => x.clone(),
            other => other.to_string(),
        };
        s.push_str(&format!(
            "\n\"{}\",{},{},{},{},{},{},{}",
            c.name.replace('"', "'"),
            field("status"),
            field("observed"),
            field("relation"),
            field("target"),
            field("tolerance"),
            field("margin"),
            field("provenance"),
        ));
    }
    s
}

fn run_verify(a: &VerifyArgs) -> CliResult<bool> {
    check_output(&a.output)?;
    let report = run_named(&a.suite, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let machine = match a.output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => verify_csv(&report),
    };
    let mut summary = report.summary();
    for c in report.failures() {
        summary.push_str(&format!(
            "\n  FAIL {}: observed {} {} target {} (tolerance {}){}",
            c.name,
            c.observed,
            serde_json::to_value(c.relation).unwrap_or_default().as_str().unwrap_or(""),
            c.target,
            c.tolerance,
            c.note.as_deref().map(|n| format!(" [{n}]")).unwrap_or_default()
        ));
    }
    emit(&a.output, &machine, &summary)?;
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::State(a) => run_state(a).map(|_| true),
        Command::Channel(a) => run_channel(a).map(|_| true),
        Command::Divergence(a) => run_divergence(a).map(|_| true),
        Command::Bound(a) => run_bound(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
