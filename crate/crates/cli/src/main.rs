use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use recoupler::compiler::{circuit_from_json, circuit_target, compile_circuit, CompileOptions, LogicalGate};
use recoupler::evolution::{restrict, PulseSchedule};
use recoupler::model::ExchangeModel;
use recoupler::pauli::max_spins;
use recoupler::verifier::{
    circuit_label, code_for, cost_report, cost_table, identity_suite, simulate, sweep, verify_circuit, verify_gate,
    verify_schedule, EvalMode, IdentityCheck, Tolerances, VerificationReport,
};

/// Compile and verify encoded gates on exchange-coupled spin chains.
#[derive(Parser)]
#[command(name = "recoupler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower a circuit to a pulse schedule.
    Compile {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lowering: Lowering,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a schedule and print its action on the code space.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lowering: Lowering,
        #[command(flatten)]
        eval: Eval,
        #[command(flatten)]
        output: Output,
    },
    /// Verify each gate of a circuit and the circuit as a whole.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lowering: Lowering,
        #[command(flatten)]
        eval: Eval,
        #[command(flatten)]
        tol: Tol,
        /// Run a built-in suite instead of a circuit.
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the operator identity suite.
    Suite {
        #[command(flatten)]
        output: Output,
    },
    /// Step counts of every construction.
    Cost {
        /// Report a single model instead of the reference platforms.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Fidelity and leakage against the pulse/background ratio.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lowering: Lowering,
        /// Comma-separated ratios; `inf` evaluates the ideal limit.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_ratio)]
        ratios: Vec<Ratio>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Input {
    /// Model JSON file.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Circuit JSON file.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Schedule JSON file, as written by `compile`.
    #[arg(long)]
    schedule: Option<PathBuf>,
}

#[derive(Args)]
struct Lowering {
    /// Pulse CPHASE refocusing steps one at a time.
    #[arg(long)]
    serial: bool,
    /// Append the local z corrections that turn the Z⊗Z phase into CPHASE.
    #[arg(long)]
    exact_cphase: bool,
}

impl Lowering {
    fn options(&self) -> CompileOptions {
        CompileOptions { parallel: !self.serial, exact_cphase: self.exact_cphase }
    }
}

#[derive(Args)]
struct Eval {
    #[arg(long, value_enum, default_value_t = Mode::Ideal)]
    mode: Mode,
    /// Pulse strength over the largest background coefficient.
    #[arg(long)]
    ratio: Option<f64>,
}

impl Eval {
    fn mode(&self) -> Result<EvalMode, Failure> {
        match (self.mode, self.ratio) {
            (Mode::Ideal, None) => Ok(EvalMode::Ideal),
            (Mode::Ideal, Some(_)) => Err(usage("--ratio only applies to --mode realistic")),
            (Mode::Realistic, None) => Err(usage("--mode realistic needs --ratio")),
            (Mode::Realistic, Some(r)) if r > 0.0 && r.is_finite() => Ok(EvalMode::Realistic { ratio: r }),
            (Mode::Realistic, Some(r)) => Err(usage(format!("ratio must be positive and finite, got {r}"))),
        }
    }
}

#[derive(Args)]
struct Tol {
    #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
    tol_fidelity: f64,
    #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
    tol_leakage: f64,
}

impl Tol {
    fn get(&self) -> Result<Tolerances, Failure> {
        for (name, v) in [("--tol-fidelity", self.tol_fidelity), ("--tol-leakage", self.tol_leakage)] {
            if v < 0.0 || !v.is_finite() {
                return Err(usage(format!("{name} must be a non-negative number, got {v}")));
            }
        }
        Ok(Tolerances { fidelity: self.tol_fidelity, leakage: self.tol_leakage })
    }
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the `--out` extension, else a table.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Output {
    fn format(&self, fallback: Format) -> Format {
        self.format.unwrap_or_else(|| match self.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            _ => fallback,
        })
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => write_atomic(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ideal,
    Realistic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Identities,
}

#[derive(Clone, Copy)]
struct Ratio(Option<f64>);

fn parse_ratio(s: &str) -> Result<Ratio, String> {
    if matches!(s.trim(), "inf" | "∞") {
        return Ok(Ratio(None));
    }
    let r: f64 = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    if r > 0.0 && r.is_finite() {
        Ok(Ratio(Some(r)))
    } else {
        Err(format!("ratio must be positive, got {s}"))
    }
}

enum Failure {
    /// Bad flags or unreadable input.
    Usage(String),
    /// Everything ran, but something did not pass.
    Verification,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<recoupler::Error> for Failure {
    fn from(e: recoupler::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compile { input, lowering, output } => {
            let model = load_model(input.model.as_deref())?;
            let gates = load_circuit(input.circuit.as_deref())?;
            let s = compile_circuit(&gates, &model, lowering.options())?;
            output.emit(&format!("{}\n", s.to_json()))?;
            eprintln!(
                "{} gates, {} steps serial, {} steps parallel",
                gates.len(),
                s.step_count_serial(),
                s.step_count_parallel()
            );
            Ok(())
        }
        Command::Simulate { input, lowering, eval, output } => {
            let model = load_model(input.model.as_deref())?;
            let mode = eval.mode()?;
            let s = schedule_for(&input, &model, lowering.options())?;
            let u = simulate(&s, &model, mode)?;
            let r = restrict(&u, &code_for(&model)?)?;
            let result = Simulation {
                mode: mode.to_string(),
                step_count_serial: s.step_count_serial(),
                step_count_parallel: s.step_count_parallel(),
                leakage: r.leakage,
                logical: (0..r.logical.nrows())
                    .map(|i| (0..r.logical.ncols()).map(|j| [r.logical[(i, j)].re, r.logical[(i, j)].im]).collect())
                    .collect(),
            };
            let text = match output.format(Format::Table) {
                Format::Json => to_json(&result),
                Format::Table => result.table(),
                Format::Csv => return Err(usage("simulate writes json or table")),
            };
            output.emit(&text)
        }
        Command::Verify { input, lowering, eval, tol, suite, output } => {
            if let Some(Suite::Identities) = suite {
                return emit_suite(&output);
            }
            let model = load_model(input.model.as_deref())?;
            let mode = eval.mode()?;
            let tol = tol.get()?;
            let opts = lowering.options();
            let gates = load_circuit(input.circuit.as_deref())?;
            let per_gate: Vec<_> = gates.iter().map(|g| verify_gate(g, &model, mode, opts, tol)).collect();
            let whole = match &input.schedule {
                None => verify_circuit(&gates, &model, mode, opts, tol),
                Some(_) => {
                    let s = schedule_for(&input, &model, opts)?;
                    let target = circuit_target(&gates, &model, opts)?;
                    verify_schedule(circuit_label(&gates), &s, &target, &model, mode, tol)?
                }
            };
            let pass = whole.pass && per_gate.iter().all(|r| r.pass);
            let text = match output.format(Format::Table) {
                Format::Json => to_json(&VerifyOutput { gates: &per_gate, circuit: &whole, pass }),
                Format::Csv => to_csv(per_gate.iter().chain(std::iter::once(&whole)).map(ReportLine::from))?,
                Format::Table => report_table(per_gate.iter().chain(std::iter::once(&whole))),
            };
            output.emit(&text)?;
            pass.then_some(()).ok_or(Failure::Verification)
        }
        Command::Suite { output } => emit_suite(&output),
        Command::Cost { model, output } => {
            let rows = match model {
                Some(path) => {
                    let m = load_model(Some(&path))?;
                    cost_report(&m, &path.file_stem().unwrap_or_default().to_string_lossy())?
                }
                None => cost_table()?,
            };
            let text = match output.format(Format::Table) {
                Format::Json => to_json(&rows),
                Format::Csv => to_csv(rows.iter().map(|r| CostLine {
                    model: &r.model,
                    gate: &r.gate,
                    counting: r.counting,
                    steps_serial: r.steps_serial,
                    steps_parallel: r.steps_parallel,
                    expected: r.expected.to_string(),
                    matches: r.matches,
                    literature_serial: r.literature_serial,
                    literature_parallel_2d: r.literature_parallel_2d,
                }))?,
                Format::Table => {
                    let mut t = format!(
                        "{:<20} {:<18} {:>6} {:>8} {:>8} {:>7}\n",
                        "model", "gate", "serial", "parallel", "expected", "matches"
                    );
                    for r in &rows {
                        t += &format!(
                            "{:<20} {:<18} {:>6} {:>8} {:>8} {:>7}",
                            r.model,
                            r.gate,
                            r.steps_serial,
                            r.steps_parallel,
                            r.expected.to_string(),
                            r.matches
                        );
                        if let (Some(s), Some(p)) = (r.literature_serial, r.literature_parallel_2d) {
                            t += &format!("  (literature: {s} serial, {p} parallel in 2D)");
                        }
                        t.push('\n');
                    }
                    t
                }
            };
            output.emit(&text)?;
            rows.iter().all(|r| r.matches).then_some(()).ok_or(Failure::Verification)
        }
        Command::Sweep { input, lowering, ratios, output } => {
            let model = load_model(input.model.as_deref())?;
            let gates = load_circuit(input.circuit.as_deref())?;
            let ratios: Vec<Option<f64>> = ratios.into_iter().map(|r| r.0).collect();
            let mut rows = Vec::new();
            for g in &gates {
                for row in sweep(g, &model, &ratios, lowering.options())? {
                    rows.push(SweepLine {
                        gate: row.gate,
                        r: row.ratio.map_or_else(|| "inf".to_string(), |r| r.to_string()),
                        fidelity: row.fidelity,
                        leakage: row.leakage,
                    });
                }
            }
            let text = match output.format(Format::Csv) {
                Format::Json => to_json(&rows),
                Format::Csv => to_csv(&rows)?,
                Format::Table => {
                    let mut t = format!("{:<32} {:>10} {:>14} {:>12}\n", "gate", "r", "fidelity", "leakage");
                    for r in &rows {
                        t += &format!("{:<32} {:>10} {:>14.10} {:>12.3e}\n", r.gate, r.r, r.fidelity, r.leakage);
                    }
                    t
                }
            };
            output.emit(&text)
        }
    }
}

#[derive(Serialize)]
struct Simulation {
    mode: String,
    step_count_serial: usize,
    step_count_parallel: usize,
    leakage: f64,
    /// Row-major `[re, im]` entries of the code-space block.
    logical: Vec<Vec<[f64; 2]>>,
}

impl Simulation {
    fn table(&self) -> String {
        let mut t = format!(
            "mode {}, {} steps serial, {} parallel, leakage {:.3e}\n",
            self.mode, self.step_count_serial, self.step_count_parallel, self.leakage
        );
        for row in &self.logical {
            let cells: Vec<_> = row.iter().map(|[re, im]| format!("{re:+.6}{im:+.6}i")).collect();
            t += &cells.join("  ");
            t.push('\n');
        }
        t
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    gates: &'a [VerificationReport],
    circuit: &'a VerificationReport,
    pass: bool,
}

/// Report row with every column present, as CSV needs.
#[derive(Serialize)]
struct ReportLine<'a> {
    gate: &'a str,
    fidelity: f64,
    leakage: f64,
    step_count_serial: usize,
    step_count_parallel: usize,
    mode: &'a str,
    ratio: Option<f64>,
    pass: bool,
    reason: Option<&'a str>,
}

impl<'a> From<&'a VerificationReport> for ReportLine<'a> {
    fn from(r: &'a VerificationReport) -> Self {
        ReportLine {
            gate: &r.gate,
            fidelity: r.fidelity,
            leakage: r.leakage,
            step_count_serial: r.step_count_serial,
            step_count_parallel: r.step_count_parallel,
            mode: &r.mode,
            ratio: r.ratio,
            pass: r.pass,
            reason: r.reason.as_deref(),
        }
    }
}

/// Cost row with every column present, as CSV needs.
#[derive(Serialize)]
struct CostLine<'a> {
    model: &'a str,
    gate: &'a str,
    counting: &'a str,
    steps_serial: usize,
    steps_parallel: usize,
    expected: String,
    matches: bool,
    literature_serial: Option<usize>,
    literature_parallel_2d: Option<usize>,
}

#[derive(Serialize)]
struct SweepLine {
    gate: String,
    r: String,
    fidelity: f64,
    leakage: f64,
}

fn emit_suite(output: &Output) -> Result<(), Failure> {
    let suite = identity_suite()?;
    let text = match output.format(Format::Table) {
        Format::Json => to_json(&suite),
        Format::Csv => to_csv(&suite)?,
        Format::Table => suite_table(&suite),
    };
    output.emit(&text)?;
    suite.iter().all(|c| c.pass).then_some(()).ok_or(Failure::Verification)
}

fn suite_table(suite: &[IdentityCheck]) -> String {
    let mut t = format!("{:<4} {:<12} {:>12} {:>10}  {}\n", "ok", "role", "residual", "threshold", "identity");
    for c in suite {
        let role = serde_json::to_value(c.role).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        t += &format!(
            "{:<4} {:<12} {:>12.3e} {:>10.0e}  {}: {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            role,
            c.residual,
            c.threshold,
            c.name,
            c.statement
        );
    }
    t
}

fn report_table<'a>(reports: impl Iterator<Item = &'a VerificationReport>) -> String {
    let mut t = format!(
        "{:<4} {:<42} {:>14} {:>10} {:>6} {:>8}  {}\n",
        "ok", "gate", "fidelity", "leakage", "serial", "parallel", "mode"
    );
    for r in reports {
        t += &format!(
            "{:<4} {:<42} {:>14.10} {:>10.2e} {:>6} {:>8}  {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.gate,
            r.fidelity,
            r.leakage,
            r.step_count_serial,
            r.step_count_parallel,
            r.mode
        );
        if let Some(reason) = &r.reason {
            t += &format!("  ({reason})");
        }
        t.push('\n');
    }
    t
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| usage(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| usage(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| usage(format!("csv: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_model(path: Option<&Path>) -> Result<ExchangeModel, Failure> {
    let path = path.ok_or_else(|| usage("--model is required"))?;
    let model = ExchangeModel::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let max = max_spins();
    if model.n_spins() > max {
        return Err(usage(format!(
            "{}: {} spins exceeds the maximum of {max} (set RECOUPLER_MAX_SPINS to raise it)",
            path.display(),
            model.n_spins()
        )));
    }
    Ok(model)
}

fn load_circuit(path: Option<&Path>) -> Result<Vec<LogicalGate>, Failure> {
    let path = path.ok_or_else(|| usage("--circuit is required"))?;
    circuit_from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// The schedule from `--schedule` if given, else the compiled `--circuit`.
fn schedule_for(input: &Input, model: &ExchangeModel, opts: CompileOptions) -> Result<PulseSchedule, Failure> {
    match &input.schedule {
        Some(path) => PulseSchedule::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => Ok(compile_circuit(&load_circuit(input.circuit.as_deref())?, model, opts)?),
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| usage(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
