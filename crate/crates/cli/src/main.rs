use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod build;
mod classify;
mod manifest;
mod oracle;
mod verify;

use manifest::Manifest;

#[derive(Parser, Debug)]
#[command(name = "conflab", version, about = "Exact Lie-algebraic models and Weyl-tensor classification")]
struct Cli {
    /// Arithmetic: exact rationals / Gaussian rationals, or IEEE doubles.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Zero test used in float mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Directory for output files and manifest.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build a model algebra and write algebra.json (and tensor/space files where relevant).
    Build(build::BuildArgs),
    /// Run one verification suite on an input file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        suite: verify::Suite,
    },
    /// Petrov type, stabilizers and homothety analysis of a quartic or a 4-dimensional tensor.
    Classify { file: PathBuf },
    /// Closed-form comparisons.
    Oracle(oracle::OracleArgs),
}

pub struct Ctx {
    pub mode: Option<Mode>,
    pub tol: f64,
    pub seed: u64,
}

impl Ctx {
    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or(Mode::Exact)
    }
}

/// A failed run: bad input (exit 2) or a failed invariant with a witness (exit 3).
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Invariant { message: String, witness: Value },
}

impl Failure {
    pub fn invariant(message: impl Into<String>, witness: Value) -> Self {
        Failure::Invariant { message: message.into(), witness }
    }
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Invariant { .. } => 3,
        }
    }
}

impl From<conflab_core::Error> for Failure {
    fn from(e: conflab_core::Error) -> Self {
        if e.is_input_error() {
            return Failure::Input(e.to_string());
        }
        let witness = match &e {
            conflab_core::Error::Jacobi { triple, labels, value } => {
                json!({"triple": triple, "labels": labels, "value": value})
            }
            conflab_core::Error::Derivation(i, j, v) => json!({"pair": [i, j], "value": v}),
            _ => Value::Null,
        };
        Failure::Invariant { message: e.to_string(), witness }
    }
}

/// What a successful command produced.
pub struct Outcome {
    pub summary: Vec<String>,
    pub report: Value,
    /// Output files as `(name, contents)`.
    pub files: Vec<(String, String)>,
}

pub type CmdResult = Result<Outcome, Failure>;

pub fn read_input(path: &PathBuf, m: &mut Manifest) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    m.add_input(&path.display().to_string(), &bytes);
    String::from_utf8(bytes).map_err(|_| Failure::Input(format!("{} is not UTF-8", path.display())))
}

pub fn parse_json(text: &str, what: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn seed() -> Result<u64, Failure> {
    match std::env::var("CONFLAB_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Input(format!("CONFLAB_SEED={s:?} is not a u64"))),
        Err(_) => Ok(0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut manifest = Manifest::new(std::env::args().collect(), cli.mode.unwrap_or(Mode::Exact), cli.tol);
    let result = seed().and_then(|seed| {
        manifest.seed = seed;
        let ctx = Ctx { mode: cli.mode, tol: cli.tol, seed };
        if !(cli.tol.is_finite() && cli.tol >= 0.0) {
            return Err(Failure::Input(format!("--tol must be a non-negative number, got {}", cli.tol)));
        }
        match &cli.cmd {
            Cmd::Build(a) => build::run(a, &ctx, &mut manifest),
            Cmd::Verify { file, suite } => verify::run(file, *suite, &ctx, &mut manifest),
            Cmd::Classify { file } => classify::run(file, &ctx, &mut manifest),
            Cmd::Oracle(a) => oracle::run(a, &ctx, &mut manifest),
        }
    });
    manifest.mode = cli.mode.unwrap_or(manifest.mode);
    manifest.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    match finish(&cli, result, &mut manifest) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn finish(cli: &Cli, result: CmdResult, manifest: &mut Manifest) -> std::io::Result<u8> {
    let code = match &result {
        Ok(_) => 0,
        Err(f) => f.code(),
    };
    let empty = Vec::new();
    let files = result.as_ref().map_or(&empty, |o| &o.files);
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)?;
        for (name, body) in files {
            std::fs::write(dir.join(name), body)?;
            manifest.add_output(name, body.as_bytes());
        }
    } else {
        for (name, body) in files {
            manifest.add_output(name, body.as_bytes());
        }
    }
    manifest.set_outcome(&result, code);
    let manifest_text = serde_json::to_string_pretty(&manifest.to_json()).expect("manifest serializes");
    if let Some(dir) = &cli.out {
        std::fs::write(dir.join("manifest.json"), format!("{manifest_text}\n"))?;
    }

    let mut so = std::io::stdout().lock();
    if cli.json {
        let mut bundle = serde_json::Map::new();
        match &result {
            Ok(o) => {
                bundle.insert("report".into(), o.report.clone());
                if cli.out.is_none() {
                    let f: serde_json::Map<String, Value> = files
                        .iter()
                        .map(|(n, b)| (n.clone(), serde_json::from_str(b).unwrap_or(Value::String(b.clone()))))
                        .collect();
                    bundle.insert("files".into(), Value::Object(f));
                }
            }
            Err(Failure::Input(msg)) => {
                bundle.insert("error".into(), json!({"kind": "input", "message": msg}));
            }
            Err(Failure::Invariant { message, witness }) => {
                bundle.insert("error".into(), json!({"kind": "invariant", "message": message, "witness": witness}));
            }
        }
        bundle.insert("manifest".into(), manifest.to_json());
        writeln!(so, "{}", serde_json::to_string_pretty(&Value::Object(bundle)).expect("bundle serializes"))?;
    } else {
        match &result {
            Ok(o) => {
                for line in &o.summary {
                    writeln!(so, "{line}")?;
                }
                if let Some(dir) = &cli.out {
                    for (name, _) in files {
                        writeln!(so, "wrote {}", dir.join(name).display())?;
                    }
                }
            }
            Err(Failure::Input(msg)) => eprintln!("input error: {msg}"),
            Err(Failure::Invariant { message, witness }) => {
                eprintln!("invariant failure: {message}");
                if !witness.is_null() {
                    eprintln!("witness: {witness}");
                }
            }
        }
        if cli.out.is_none() {
            eprintln!("manifest: {}", serde_json::to_string(&manifest.to_json()).expect("manifest serializes"));
        }
    }
    Ok(code)
}
