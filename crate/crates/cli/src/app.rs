use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use werner_core::analysis::{self, Suite, SweepConfig};
use werner_core::linalg::{self, PauliDecomposition};
use werner_core::measures::{self, LambdaQuadruple};
use werner_core::states::{
    self, BellDiagonalParams, DensityMatrix, MemsSpectrum, SchmidtParam, WernerParams,
};
use werner_core::theory;

use crate::report::{self, format_real, Destination, Format, ReportError};
use crate::state_file::{self, StateFile, StateFileError};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    VerificationFailed,
    Usage,
    InvalidState,
    OutputFailed,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::VerificationFailed => 1,
            ExitStatus::Usage => 2,
            ExitStatus::InvalidState => 3,
            ExitStatus::OutputFailed => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "werner",
    version,
    about = "Two-qubit entanglement of Werner states and their unitary derivatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum, Pauli decomposition and matrix of a state.
    Info(StateCommand),
    /// Wootters concurrence and entanglement of formation.
    Concurrence(StateCommand),
    /// Entanglement of formation of a state or of a bare concurrence value.
    Eof(EofCommand),
    /// Concurrence reachable from a single copy by local operations.
    Extractable(StateCommand),
    /// Smallest eigenvalue of the partial transpose.
    Ppt(StateCommand),
    /// Evaluate the (F, a) grid and emit one row per point.
    Sweep(SweepCommand),
    /// Run verification suites over the grid.
    Verify(VerifyCommand),
    /// Entanglement and local-improvability class of a state.
    Classify(StateCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Werner,
    Derivative,
    Mems,
    Pure,
    Bell,
}

#[derive(Debug, Args)]
struct StateArgs {
    /// Named state family.
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Werner fidelity, 1/2 < F <= 1.
    #[arg(long = "F", value_name = "F")]
    fidelity: Option<f64>,
    /// Schmidt weight, 1/2 <= a <= 1.
    #[arg(long = "a", value_name = "A")]
    schmidt: Option<f64>,
    /// Comma-separated weights: MEMS spectrum or Bell probabilities.
    #[arg(
        long = "p",
        value_delimiter = ',',
        allow_negative_numbers = true,
        value_name = "P1,P2,P3,P4"
    )]
    weights: Option<Vec<f64>>,
    /// Comma-separated Bell correlations r1,r2,r3.
    #[arg(
        long = "r",
        value_delimiter = ',',
        allow_negative_numbers = true,
        value_name = "R1,R2,R3"
    )]
    correlations: Option<Vec<f64>>,
    /// JSON density-matrix file.
    #[arg(long, value_name = "PATH", conflicts_with = "family")]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct StateCommand {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EofCommand {
    /// Use this concurrence instead of a state.
    #[arg(long, value_name = "C", conflicts_with_all = ["family", "file"])]
    concurrence: Option<f64>,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = SweepConfig::default().f_min)]
    f_min: f64,
    #[arg(long, default_value_t = SweepConfig::default().f_max)]
    f_max: f64,
    #[arg(long, default_value_t = SweepConfig::default().f_steps)]
    f_steps: usize,
    #[arg(long, default_value_t = SweepConfig::default().a_steps)]
    a_steps: usize,
}

impl GridArgs {
    fn config(&self) -> SweepConfig {
        SweepConfig {
            f_min: self.f_min,
            f_max: self.f_max,
            f_steps: self.f_steps,
            a_steps: self.a_steps,
            ..SweepConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct SweepCommand {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyCommand {
    /// oracle, max-at-half, monotonicity, bound, boundary, gradients,
    /// bell-fixed, pure, mems or all.
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
}

enum Failure {
    Usage(String),
    Parameter(werner_core::Error),
    State(StateFileError),
    Output(ReportError),
}

impl From<werner_core::Error> for Failure {
    fn from(e: werner_core::Error) -> Self {
        Failure::Parameter(e)
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::Output(e)
    }
}

/// Parses `args` (including the program name), runs the command and reports
/// through `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                ExitStatus::Usage
            } else {
                let _ = write!(out, "{rendered}");
                ExitStatus::Success
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(status) => status,
        Err(failure) => {
            let (status, message) = match failure {
                Failure::Usage(m) => (ExitStatus::Usage, m),
                Failure::Parameter(e) => (ExitStatus::Usage, e.to_string()),
                Failure::State(e) => {
                    let mut message = format!("invalid state file ({}): {e}", e.sub_reason());
                    if let Some(m) = e.magnitude() {
                        message.push_str(&format!("; magnitude {}", short_real(m)));
                    }
                    (ExitStatus::InvalidState, message)
                }
                Failure::Output(e) => (ExitStatus::OutputFailed, e.to_string()),
            };
            let _ = writeln!(err, "error: {message}");
            status
        }
    }
}

fn dispatch(
    command: Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<ExitStatus, Failure> {
    match command {
        Command::Info(c) => {
            let rho = load_state(&c.state)?;
            let report = InfoReport {
                spectrum: rho.spectrum()?,
                pauli: linalg::pauli_decompose(rho.matrix())?,
                matrix: StateFile::from_matrix(rho.matrix()),
            };
            let _ = writeln!(err, "spectrum {}", join(&report.spectrum));
            emit_object(&report, &c.output, out)?;
        }
        Command::Concurrence(c) => {
            let rho = load_state(&c.state)?;
            let report = measures::concurrence_report(&rho)?;
            let _ = writeln!(
                err,
                "concurrence {}, eof {}",
                format_real(report.concurrence),
                format_real(report.eof)
            );
            emit_object(&report, &c.output, out)?;
        }
        Command::Eof(c) => {
            let concurrence = match c.concurrence {
                Some(value) => {
                    if c.state.has_parameters() {
                        return Err(Failure::Usage(
                            "--concurrence cannot be combined with state parameters".into(),
                        ));
                    }
                    value
                }
                None => measures::concurrence(&load_state(&c.state)?)?,
            };
            let report = EofReport {
                concurrence,
                eof: measures::eof_from_concurrence(concurrence)?,
            };
            let _ = writeln!(err, "eof {}", format_real(report.eof));
            emit_object(&report, &c.output, out)?;
        }
        Command::Extractable(c) => {
            let rho = load_state(&c.state)?;
            let lambdas = measures::wootters_lambdas(&rho)?;
            let target = match measures::lqcc_bell_target(&rho) {
                Ok(t) => Some(TargetReport {
                    r: t.params.r(),
                    probabilities: t.params.probabilities(),
                }),
                Err(werner_core::Error::Separable { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let report = ExtractableReport {
                concurrence: lambdas.concurrence().min(1.0),
                extractable_concurrence: lambdas.extractable_concurrence(),
                lambdas,
                lqcc_improvable: measures::is_lqcc_improvable(&rho)?,
                target,
            };
            let _ = writeln!(
                err,
                "concurrence {} -> extractable {}",
                format_real(report.concurrence),
                format_real(report.extractable_concurrence)
            );
            emit_object(&report, &c.output, out)?;
        }
        Command::Ppt(c) => {
            let rho = load_state(&c.state)?;
            let min = measures::ppt_min_eigenvalue(&rho)?;
            let report = PptReport {
                ppt_min_eigenvalue: min,
                entangled: min < -werner_core::tolerances::PPT_NEGATIVE,
            };
            let _ = writeln!(err, "partial transpose minimum {}", format_real(min));
            emit_object(&report, &c.output, out)?;
        }
        Command::Classify(c) => {
            let rho = load_state(&c.state)?;
            let concurrence = measures::concurrence(&rho)?;
            let mems_class = match (c.state.family, &c.state.weights) {
                (Some(Family::Mems), Some(p)) => {
                    Some(theory::classify_mems(MemsSpectrum::new(weights4(p)?)?))
                }
                _ => None,
            };
            let report = ClassifyReport {
                entangled: concurrence > werner_core::tolerances::CONCURRENCE_POSITIVE,
                concurrence,
                lqcc_improvable: measures::is_lqcc_improvable(&rho)?,
                mems_class: mems_class.map(|m| m.name()),
                werner_fidelity: match mems_class {
                    Some(theory::MemsClass::Werner { fidelity }) => Some(fidelity),
                    _ => None,
                },
            };
            let _ = writeln!(
                err,
                "{}{}",
                if report.entangled {
                    "entangled"
                } else {
                    "separable"
                },
                report
                    .mems_class
                    .map(|n| format!(", {n}"))
                    .unwrap_or_default()
            );
            emit_object(&report, &c.output, out)?;
        }
        Command::Sweep(c) => {
            let cfg = c.grid.config();
            let records = analysis::run_sweep(&cfg)?;
            let _ = writeln!(err, "{} grid points", records.len());
            let dest = Destination::from_option(c.output.out.as_deref());
            report::write_records(&records, c.output.format, &dest, out)?;
        }
        Command::Verify(c) => {
            let cfg = c.grid.config();
            let start = Instant::now();
            let mut result = analysis::verify(c.suite, &cfg)?;
            result.elapsed_seconds = Some(start.elapsed().as_secs_f64());
            for claim in &result.claims {
                let _ = writeln!(
                    err,
                    "{} {:<40} worst {} limit {}",
                    if claim.passed { "PASS" } else { "FAIL" },
                    claim.name,
                    format_real(claim.worst),
                    format_real(claim.limit)
                );
            }
            let dest = Destination::from_option(c.output.out.as_deref());
            report::write_report(&result, c.output.format, &dest, out)?;
            if !result.passed {
                return Ok(ExitStatus::VerificationFailed);
            }
        }
    }
    Ok(ExitStatus::Success)
}

impl StateArgs {
    fn has_parameters(&self) -> bool {
        self.family.is_some()
            || self.fidelity.is_some()
            || self.schmidt.is_some()
            || self.weights.is_some()
            || self.correlations.is_some()
            || self.file.is_some()
    }
}

fn load_state(args: &StateArgs) -> Result<DensityMatrix, Failure> {
    if let Some(path) = &args.file {
        if args.fidelity.is_some()
            || args.schmidt.is_some()
            || args.weights.is_some()
            || args.correlations.is_some()
        {
            return Err(Failure::Usage(
                "--file cannot be combined with family parameters".into(),
            ));
        }
        return state_file::parse_state_file(path).map_err(Failure::State);
    }
    let Some(family) = args.family else {
        return Err(Failure::Usage(
            "a state source is required: --family or --file".into(),
        ));
    };
    let allowed: &[&str] = match family {
        Family::Werner => &["F"],
        Family::Derivative => &["F", "a"],
        Family::Pure => &["a"],
        Family::Mems => &["p"],
        Family::Bell => &["p", "r"],
    };
    for (flag, present) in [
        ("F", args.fidelity.is_some()),
        ("a", args.schmidt.is_some()),
        ("p", args.weights.is_some()),
        ("r", args.correlations.is_some()),
    ] {
        if present && !allowed.contains(&flag) {
            return Err(Failure::Usage(format!(
                "--{flag} does not apply to --family {}",
                family.to_possible_value().expect("named").get_name()
            )));
        }
    }
    let need = |value: Option<f64>, flag: &str| {
        value.ok_or_else(|| {
            Failure::Usage(format!("--family {} needs --{flag}", family_name(family)))
        })
    };
    Ok(match family {
        Family::Werner => states::werner(WernerParams::new(need(args.fidelity, "F")?)?),
        Family::Derivative => states::werner_derivative(
            WernerParams::new(need(args.fidelity, "F")?)?,
            SchmidtParam::new(need(args.schmidt, "a")?)?,
        ),
        Family::Pure => states::schmidt_pure(SchmidtParam::new(need(args.schmidt, "a")?)?),
        Family::Mems => {
            let p = args
                .weights
                .as_ref()
                .ok_or_else(|| Failure::Usage("--family mems needs --p".into()))?;
            states::mems(MemsSpectrum::new(weights4(p)?)?)
        }
        Family::Bell => match (&args.weights, &args.correlations) {
            (Some(p), None) => {
                states::bell_diagonal(BellDiagonalParams::from_probabilities(weights4(p)?)?)
            }
            (None, Some(r)) => {
                let r: [f64; 3] = r.as_slice().try_into().map_err(|_| {
                    Failure::Usage(format!(
                        "--r takes 3 comma-separated values, got {}",
                        r.len()
                    ))
                })?;
                states::bell_diagonal(BellDiagonalParams::new(r)?)
            }
            _ => {
                return Err(Failure::Usage(
                    "--family bell needs exactly one of --p or --r".into(),
                ))
            }
        },
    })
}

fn family_name(family: Family) -> String {
    family
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_owned()
}

fn weights4(p: &[f64]) -> Result<[f64; 4], Failure> {
    p.try_into().map_err(|_| {
        Failure::Usage(format!(
            "--p takes 4 comma-separated values, got {}",
            p.len()
        ))
    })
}

/// Twelve decimals, trailing zeros dropped: enough to read, short enough to scan.
fn short_real(x: f64) -> String {
    let s = format!("{x:.12}");
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

fn join(xs: &[f64]) -> String {
    xs.iter()
        .map(|&x| format_real(x))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct InfoReport {
    spectrum: [f64; 4],
    pauli: PauliDecomposition,
    matrix: StateFile,
}

#[derive(Serialize)]
struct EofReport {
    concurrence: f64,
    eof: f64,
}

#[derive(Serialize)]
struct TargetReport {
    r: [f64; 3],
    probabilities: [f64; 4],
}

#[derive(Serialize)]
struct ExtractableReport {
    concurrence: f64,
    extractable_concurrence: f64,
    lambdas: LambdaQuadruple,
    lqcc_improvable: bool,
    target: Option<TargetReport>,
}

#[derive(Serialize)]
struct PptReport {
    ppt_min_eigenvalue: f64,
    entangled: bool,
}

#[derive(Serialize)]
struct ClassifyReport {
    entangled: bool,
    concurrence: f64,
    lqcc_improvable: bool,
    mems_class: Option<&'static str>,
    werner_fidelity: Option<f64>,
}

/// JSON as is; CSV as one header row of dotted key paths and one value row.
fn emit_object<T: Serialize>(
    value: &T,
    output: &OutputArgs,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let dest = Destination::from_option(output.out.as_deref());
    match output.format {
        Format::Json => dest.write_with(out, |w| report::write_json(value, w))?,
        Format::Csv => {
            let tree = serde_json::to_value(value).expect("report types serialize");
            let mut cells = Vec::new();
            flatten("", &tree, &mut cells);
            dest.write_with(out, |w| {
                let (keys, values): (Vec<_>, Vec<_>) = cells.iter().cloned().unzip();
                writeln!(w, "{}", keys.join(","))?;
                writeln!(w, "{}", values.join(","))?;
                w.flush()
            })?;
        }
    }
    Ok(())
}

fn flatten(prefix: &str, value: &Value, cells: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => flatten_map(map, &key, cells),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), item, cells);
            }
        }
        Value::Number(n) => cells.push((
            prefix.to_owned(),
            format_real(n.as_f64().unwrap_or(f64::NAN)),
        )),
        Value::Bool(b) => cells.push((prefix.to_owned(), b.to_string())),
        Value::String(s) => cells.push((prefix.to_owned(), s.clone())),
        Value::Null => cells.push((prefix.to_owned(), String::new())),
    }
}

fn flatten_map(
    map: &Map<String, Value>,
    key: &dyn Fn(&str) -> String,
    cells: &mut Vec<(String, String)>,
) {
    for (k, v) in map {
        flatten(&key(k), v, cells);
    }
}
