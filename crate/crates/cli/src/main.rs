use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcuml_core::{
    circuit_to_uml, circuits_equivalent, emit, parse_circuit, read_xmi, uml_to_circuit, validate, write_plantuml,
    write_xmi, Diagnostic, ParseDiagnostic, Severity,
};
use serde::Serialize;
use thiserror::Error;

const STDIO: &str = "-";

#[derive(Parser, Debug)]
#[command(name = "qcuml", version, about = "Convert between OpenQASM 2.0 and UML activity diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Read OpenQASM, write the XMI model.
    Qasm2uml(IoArgs),
    /// Read an XMI model, write canonical OpenQASM.
    Uml2qasm(IoArgs),
    /// Check an XMI model against the profile rules.
    Validate(IoArgs),
    /// Run OpenQASM through the model and back; fails unless equivalent.
    Roundtrip(IoArgs),
    /// Read an XMI model, write PlantUML.
    Render(IoArgs),
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Input file, or `-` for stdin.
    input: String,
    /// Output file, or `-` for stdout.
    #[arg(short, long, default_value = STDIO)]
    output: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Serialize, Debug)]
struct Entry {
    rule: String,
    severity: String,
    elements: Vec<String>,
    message: String,
}

impl From<&Diagnostic> for Entry {
    fn from(d: &Diagnostic) -> Self {
        Entry {
            rule: d.rule.to_string(),
            severity: d.severity.to_string(),
            elements: d.elements.clone(),
            message: d.message.clone(),
        }
    }
}

impl From<&ParseDiagnostic> for Entry {
    fn from(d: &ParseDiagnostic) -> Self {
        Entry {
            rule: d.code.to_string(),
            severity: Severity::Error.to_string(),
            elements: vec![],
            message: format!("{}:{}: {}", d.line, d.column, d.message),
        }
    }
}

#[derive(Serialize, Debug, Default)]
struct Report {
    diagnostics: Vec<Entry>,
}

impl Report {
    fn of<'a, T: 'a>(items: impl IntoIterator<Item = &'a T>) -> Self
    where
        Entry: From<&'a T>,
    {
        Report {
            diagnostics: items.into_iter().map(Entry::from).collect(),
        }
    }

    fn text(&self) -> String {
        self.diagnostics
            .iter()
            .map(|e| {
                let elements = if e.elements.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", e.elements.join(", "))
                };
                format!("{} {}{elements}: {}\n", e.severity, e.rule, e.message)
            })
            .collect()
    }

    fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Debug, Error)]
enum Failure {
    #[error("validation failed")]
    Validation(Report),
    #[error("input could not be parsed")]
    Parse(Report),
    #[error("{0}")]
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == STDIO {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    if path == STDIO {
        let mut out = io::stdout().lock();
        return out
            .write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Failure::Io(format!("stdout: {e}")));
    }
    fs::write(path, text).map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn circuit_name(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| path != STDIO && !s.is_empty())
        .unwrap_or(qcuml_core::qasm::DEFAULT_CIRCUIT_NAME)
        .to_string()
}

fn load_circuit(path: &str) -> Result<qcuml_core::Circuit, Failure> {
    let mut circuit = parse_circuit(&read_input(path)?).map_err(|d| Failure::Parse(Report::of(&d)))?;
    circuit.set_name(circuit_name(path));
    Ok(circuit)
}

/// Reads a model; reader warnings are passed back for reporting.
fn load_model(path: &str) -> Result<(qcuml_core::UmlModel, Vec<Diagnostic>), Failure> {
    let read = read_xmi(&read_input(path)?).map_err(|d| Failure::Parse(Report::of(&d)))?;
    Ok((read.model, read.warnings))
}

/// Profile rule violations are validation failures; anything else the
/// reverse transform reports is a lowering error.
fn model_failure(diagnostics: Vec<Diagnostic>) -> Failure {
    let report = Report::of(&diagnostics);
    if diagnostics.iter().any(|d| d.rule.is_profile_rule()) {
        Failure::Validation(report)
    } else {
        Failure::Parse(report)
    }
}

/// Runs a subcommand. Returns the diagnostics to report on success.
fn run(command: &Command) -> Result<Vec<Diagnostic>, Failure> {
    match command {
        Command::Qasm2uml(args) => {
            let circuit = load_circuit(&args.input)?;
            write_output(&args.output, &write_xmi(&circuit_to_uml(&circuit)))?;
            Ok(vec![])
        }
        Command::Uml2qasm(args) => {
            let (model, warnings) = load_model(&args.input)?;
            let circuit = uml_to_circuit(&model).map_err(model_failure)?;
            write_output(&args.output, &emit(&circuit))?;
            Ok(warnings)
        }
        Command::Validate(args) => {
            let (model, mut diagnostics) = load_model(&args.input)?;
            diagnostics.extend(validate(&model));
            if diagnostics.iter().any(|d| d.severity == Severity::Error) {
                return Err(Failure::Validation(Report::of(&diagnostics)));
            }
            Ok(diagnostics)
        }
        Command::Roundtrip(args) => {
            let circuit = load_circuit(&args.input)?;
            let text = write_xmi(&circuit_to_uml(&circuit));
            let model = read_xmi(&text).map_err(|d| Failure::Parse(Report::of(&d)))?.model;
            let back = uml_to_circuit(&model).map_err(model_failure)?;
            if !circuits_equivalent(&circuit, &back) {
                let mismatch = Diagnostic::error(
                    qcuml_core::RuleId::Code(qcuml_core::ErrorCode::InvalidModel),
                    vec![],
                    "regenerated circuit is not equivalent to the input",
                );
                return Err(Failure::Validation(Report::of(&[mismatch])));
            }
            write_output(&args.output, &emit(&back))?;
            Ok(vec![])
        }
        Command::Render(args) => {
            let (model, warnings) = load_model(&args.input)?;
            let text = write_plantuml(&model).map_err(|d| Failure::Validation(Report::of(&d)))?;
            write_output(&args.output, &text)?;
            Ok(warnings)
        }
    }
}

fn io_args(command: &Command) -> &IoArgs {
    match command {
        Command::Qasm2uml(a) | Command::Uml2qasm(a) | Command::Validate(a) | Command::Roundtrip(a) | Command::Render(a) => a,
    }
}

fn emit_report(report: &Report, format: Format, to_stdout: bool) {
    let text = match format {
        Format::Text => report.text(),
        Format::Json => report.json(),
    };
    if to_stdout {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 4 } else { 0 });
        }
    };
    let args = io_args(&cli.command);
    // the validate report is the command's product in json mode
    let json_stdout = args.format == Format::Json && matches!(cli.command, Command::Validate(_));
    match run(&cli.command) {
        Ok(diagnostics) => {
            if json_stdout || !diagnostics.is_empty() {
                emit_report(&Report::of(&diagnostics), args.format, json_stdout);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                Failure::Validation(report) | Failure::Parse(report) => emit_report(report, args.format, json_stdout),
                Failure::Io(message) => eprintln!("error: {message}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
