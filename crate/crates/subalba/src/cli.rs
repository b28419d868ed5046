//! The `subalba` command line.
//!
//! Exit codes: 0 accepted, successful or equivalent; 1 rejected, failed or
//! counterexample found; 2 usage, input or budget error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use subalba_core::alba::{check_topological_correctness, render_pure_quasi, run_alba, AlbaOutcome, FailureReason};
use subalba_core::alba_pi2::run_alba_pi2;
use subalba_core::classify::{check_inductive_pi2, classify_quasi, ClassificationReport, ClassifyError};
use subalba_core::fol::{fo_correspondent, parse_fo, render_fo, FoFormula};
use subalba_core::semantics::{
    equivalence_oracle, frame_count, valid, CompiledFo, FrameBudget, OracleJob, OracleVerdict, SemanticsError,
    ValuationMode,
};
use subalba_core::syntax::{parse_statement, render_inequality, Statement};

use crate::dto::{ClassifyJson, ErrorJson, FrameFile, RunJson, TopoJson, TraceLine, VerifyJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Largest frame size the oracle enumerates exhaustively.
const EXHAUSTIVE_LIMIT: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "subalba", version, about = "Correspondence for modal subordination algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the derivation as JSON lines to this file (single input only).
    #[arg(long, global = true, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Append the topological-correctness report of the run.
    #[arg(long, global = true)]
    pub check_topo: bool,
    /// Print the first-order correspondent after the pure output.
    #[arg(long, global = true)]
    pub translate: bool,
    /// Largest frame size for `verify`; size 4 is sampled.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_frame: u64,
    /// Most propositional variables `verify` accepts.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_vars: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide inductiveness and print the certificate.
    Classify(Input),
    /// Run the engine and print the pure quasi-inequalities.
    Run(Input),
    /// Print the first-order correspondent.
    Translate(Input),
    /// Compare the statement with its correspondent on all small frames.
    Verify(VerifyArgs),
    /// Run the four worked examples end to end.
    Demo,
}

/// One statement per file, or one inline statement.
#[derive(Debug, Args)]
pub struct Input {
    #[arg(required_unless_present = "expr", conflicts_with = "expr")]
    pub files: Vec<PathBuf>,
    #[arg(short, long)]
    pub expr: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: Input,
    /// Check against this sentence instead of the computed correspondent.
    #[arg(long, value_name = "FORMULA")]
    pub fo: Option<String>,
    /// Check a single frame file instead of enumerating.
    #[arg(long, value_name = "PATH")]
    pub frame: Option<PathBuf>,
    /// Frames drawn at size 4 when `--max-frame 4`.
    #[arg(long, default_value_t = 2000)]
    pub samples: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{input}: parse error: {message}")]
    Parse { input: String, message: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// A parsed input with the label used in reports.
pub struct Loaded {
    pub label: String,
    pub statement: Statement,
}

/// Blank lines and lines starting with `#` are ignored; line numbers in
/// parse errors still refer to the file.
pub fn parse_source(label: &str, src: &str) -> Result<Loaded, CliError> {
    let text: Vec<&str> = src
        .lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect();
    let statement = parse_statement(&text.join("\n")).map_err(|e| CliError::Parse {
        input: label.into(),
        message: e.to_string(),
    })?;
    Ok(Loaded {
        label: label.into(),
        statement,
    })
}

fn load_inputs(input: &Input) -> Result<Vec<Loaded>, CliError> {
    if let Some(e) = &input.expr {
        return Ok(vec![parse_source(e, e)?]);
    }
    input.files.iter().map(|p| load_file(p)).collect()
}

fn load_file(p: &Path) -> Result<Loaded, CliError> {
    let label = p.display().to_string();
    let src = fs::read_to_string(p).map_err(|source| CliError::Io {
        path: label.clone(),
        source,
    })?;
    parse_source(&label, &src)
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)
}

pub fn classify_statement(s: &Statement) -> Result<ClassificationReport, ClassifyError> {
    match s {
        Statement::Pi2(p) => check_inductive_pi2(p),
        other => classify_quasi(&other.as_quasi().expect("not a Π₂-statement")),
    }
}

pub fn run_statement(s: &Statement) -> AlbaOutcome {
    match s {
        Statement::Pi2(p) => run_alba_pi2(p),
        other => run_alba(&other.as_quasi().expect("not a Π₂-statement")),
    }
}

/// Pure inputs are translated directly; anything else goes through the engine.
pub fn correspondent(s: &Statement) -> Result<FoFormula, AlbaOutcome> {
    if let (true, Some(q)) = (s.info().is_pure(), s.as_quasi()) {
        return Ok(fo_correspondent(&[q]));
    }
    match run_statement(s) {
        AlbaOutcome::Success(ok) => Ok(fo_correspondent(&ok.pure_quasis)),
        failed => Err(failed),
    }
}

fn failure_text(out: &AlbaOutcome) -> String {
    match out {
        AlbaOutcome::Failure(f) => {
            let why = match f.reason {
                FailureReason::Stuck => "stuck",
                FailureReason::StepBudget => "step budget exhausted",
                FailureReason::FirstHalf => "bound variables not eliminated",
            };
            format!("{why}, unresolved {}", f.unresolved.join(", "))
        }
        AlbaOutcome::Success(_) => String::new(),
    }
}

pub struct Session<'a> {
    pub cli: &'a Cli,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Session<'_> {
    /// Dispatches the subcommand and returns the exit code.
    pub fn execute(&mut self) -> i32 {
        let result = match &self.cli.command {
            Command::Classify(i) => self.batch(i, Session::classify),
            Command::Run(i) => self.batch(i, Session::run),
            Command::Translate(i) => self.batch(i, Session::translate),
            Command::Verify(v) => self.verify(v),
            Command::Demo => self.demo(),
        };
        match result {
            Ok(code) => code,
            Err(e) => {
                let _ = match self.cli.format {
                    Format::Json => write_json(self.out, &ErrorJson { error: e.to_string() }),
                    Format::Text => writeln!(self.err, "error: {e}"),
                };
                EXIT_ERROR
            }
        }
    }

    fn batch(
        &mut self,
        input: &Input,
        each: fn(&mut Self, &Loaded, bool) -> Result<i32, CliError>,
    ) -> Result<i32, CliError> {
        let inputs = load_inputs(input)?;
        if self.cli.trace.is_some() && inputs.len() > 1 {
            return Err(CliError::Usage("--trace takes a single input".into()));
        }
        let labelled = inputs.len() > 1;
        let mut code = EXIT_OK;
        for l in &inputs {
            code = code.max(each(self, l, labelled)?);
        }
        Ok(code)
    }

    fn heading(&mut self, l: &Loaded, labelled: bool) -> io::Result<()> {
        if labelled && self.cli.format == Format::Text {
            writeln!(self.out, "{}:", l.label)?;
        }
        Ok(())
    }

    fn classify(&mut self, l: &Loaded, labelled: bool) -> Result<i32, CliError> {
        let r = classify_statement(&l.statement)?;
        let code = if r.accepted() { EXIT_OK } else { EXIT_NO };
        self.emit(|s| {
            if s.cli.format == Format::Json {
                return write_json(s.out, &ClassifyJson::new(&l.label, &r));
            }
            s.heading(l, labelled)?;
            let j = ClassifyJson::new(&l.label, &r);
            match (&r.certificate(), &j.violation) {
                (Some(c), _) => writeln!(s.out, "accepted: {c}")?,
                (None, Some(v)) => writeln!(s.out, "rejected: {v}")?,
                (None, None) => writeln!(s.out, "rejected")?,
            }
            if !r.eliminated.is_empty() {
                writeln!(s.out, "eliminated: {}", r.eliminated.join(", "))?;
            }
            Ok(())
        })?;
        Ok(code)
    }

    fn run(&mut self, l: &Loaded, labelled: bool) -> Result<i32, CliError> {
        let outcome = run_statement(&l.statement);
        if let Some(path) = &self.cli.trace {
            write_trace(path, &outcome)?;
        }
        let topo = self.cli.check_topo.then(|| TopoJson::from(&check_topological_correctness(outcome.trace())));
        let report = match &outcome {
            AlbaOutcome::Success(ok) => RunJson {
                input: l.label.clone(),
                success: true,
                pure: ok.pure_quasis.iter().map(render_pure_quasi).collect(),
                fo: self.cli.translate.then(|| render_fo(&fo_correspondent(&ok.pure_quasis))),
                unresolved: Vec::new(),
                system: Vec::new(),
                failure: None,
                topo,
                steps: ok.trace.steps.len(),
            },
            AlbaOutcome::Failure(f) => RunJson {
                input: l.label.clone(),
                success: false,
                pure: Vec::new(),
                fo: None,
                unresolved: f.unresolved.clone(),
                system: f.system.iter().chain(&f.goal).map(render_inequality).collect(),
                failure: Some(failure_text(&outcome)),
                topo,
                steps: f.trace.steps.len(),
            },
        };
        self.emit(|s| {
            if s.cli.format == Format::Json {
                return write_json(s.out, &report);
            }
            s.heading(l, labelled)?;
            if let Some(why) = &report.failure {
                writeln!(s.out, "failure: {why}")?;
                for x in &report.system {
                    writeln!(s.out, "  {x}")?;
                }
            }
            for p in &report.pure {
                writeln!(s.out, "{p}")?;
            }
            if let Some(fo) = &report.fo {
                writeln!(s.out, "fo: {fo}")?;
            }
            if let Some(t) = &report.topo {
                let verdict = if t.correct { "ok" } else { "violated" };
                writeln!(s.out, "topo: {verdict}, {} ackermann steps", t.ackermann_steps)?;
                for x in &t.offending {
                    writeln!(s.out, "  step {x}")?;
                }
                if let Some(e) = &t.replay_error {
                    writeln!(s.out, "  replay: {e}")?;
                }
            }
            Ok(())
        })?;
        Ok(if outcome.is_success() { EXIT_OK } else { EXIT_NO })
    }

    fn translate(&mut self, l: &Loaded, labelled: bool) -> Result<i32, CliError> {
        match correspondent(&l.statement) {
            Ok(fo) => {
                let shown = render_fo(&fo);
                self.emit(|s| {
                    if s.cli.format == Format::Json {
                        return write_json(s.out, &serde_json::json!({ "input": l.label, "fo": shown }));
                    }
                    s.heading(l, labelled)?;
                    writeln!(s.out, "{shown}")
                })?;
                Ok(EXIT_OK)
            }
            Err(failed) => {
                let why = failure_text(&failed);
                self.emit(|s| {
                    if s.cli.format == Format::Json {
                        return write_json(s.out, &serde_json::json!({ "input": l.label, "failure": why }));
                    }
                    s.heading(l, labelled)?;
                    writeln!(s.out, "failure: {why}")
                })?;
                Ok(EXIT_NO)
            }
        }
    }

    fn verify(&mut self, v: &VerifyArgs) -> Result<i32, CliError> {
        let max_frame = self.cli.max_frame as usize;
        if max_frame > EXHAUSTIVE_LIMIT + 1 {
            return Err(CliError::Budget(format!("--max-frame {max_frame} is above {}", EXHAUSTIVE_LIMIT + 1)));
        }
        let inputs = load_inputs(&v.input)?;
        let mut code = EXIT_OK;
        for l in &inputs {
            let vars = l.statement.info().prop_vars.len();
            if vars as u64 > self.cli.max_vars {
                return Err(CliError::Budget(format!("{}: {vars} variables, --max-vars is {}", l.label, self.cli.max_vars)));
            }
            let fo = match &v.fo {
                Some(src) => parse_fo(src).map_err(|e| CliError::Parse {
                    input: src.clone(),
                    message: e.to_string(),
                })?,
                None => match correspondent(&l.statement) {
                    Ok(fo) => fo,
                    Err(failed) => {
                        let why = failure_text(&failed);
                        self.emit(|s| match s.cli.format {
                            Format::Json => write_json(s.out, &serde_json::json!({ "input": l.label, "failure": why })),
                            Format::Text => writeln!(s.out, "failure: {why}"),
                        })?;
                        code = code.max(EXIT_NO);
                        continue;
                    }
                },
            };
            let report = match &v.frame {
                Some(path) => check_frame_file(l, &fo, path)?,
                None => enumerate(l, &fo, max_frame, v.samples)?,
            };
            self.emit(|s| {
                if s.cli.format == Format::Json {
                    return write_json(s.out, &report);
                }
                if inputs.len() > 1 {
                    writeln!(s.out, "{}:", l.label)?;
                }
                writeln!(s.out, "fo: {}", report.fo)?;
                match &report.counterexample {
                    None => writeln!(s.out, "equivalent ({} frames)", report.frames_checked),
                    Some(f) => {
                        writeln!(
                            s.out,
                            "counterexample: statement {}, fo {}",
                            validity(report.statement_valid),
                            validity(report.fo_valid)
                        )?;
                        writeln!(s.out, "{}", serde_json::to_string(f).expect("frame serializes"))
                    }
                }
            })?;
            if !report.equivalent {
                code = code.max(EXIT_NO);
            }
        }
        Ok(code)
    }

    fn demo(&mut self) -> Result<i32, CliError> {
        let mut code = EXIT_OK;
        for (name, src) in DEMO {
            let l = parse_source(name, src)?;
            let outcome = run_statement(&l.statement);
            let Some(ok) = outcome.success() else {
                writeln!(self.out, "{name}: failure: {}", failure_text(&outcome)).map_err(io_err)?;
                code = EXIT_NO;
                continue;
            };
            let fo = fo_correspondent(&ok.pure_quasis);
            let verdict = equivalence_oracle(&l.statement, &fo, &FrameBudget::default())?;
            let topo = check_topological_correctness(&ok.trace).all_correct();
            if !verdict.is_equivalent() || !topo {
                code = EXIT_NO;
            }
            let frames = match verdict {
                OracleVerdict::Equivalent { frames_checked } => format!("equivalent on {frames_checked} frames"),
                OracleVerdict::Counterexample { .. } => "counterexample found".into(),
            };
            let pure: Vec<String> = ok.pure_quasis.iter().map(render_pure_quasi).collect();
            self.emit(|s| match s.cli.format {
                Format::Json => write_json(
                    s.out,
                    &serde_json::json!({
                        "name": name, "input": src, "pure": pure, "fo": render_fo(&fo),
                        "oracle": frames, "topo": topo,
                    }),
                ),
                Format::Text => {
                    writeln!(s.out, "{name}: {src}")?;
                    for p in &pure {
                        writeln!(s.out, "  {p}")?;
                    }
                    writeln!(s.out, "  fo: {}", render_fo(&fo))?;
                    writeln!(s.out, "  {frames}, topology {}", if topo { "ok" } else { "violated" })
                }
            })?;
        }
        Ok(code)
    }

    fn emit(&mut self, f: impl FnOnce(&mut Self) -> io::Result<()>) -> Result<(), CliError> {
        f(self).map_err(io_err)
    }
}

fn io_err(source: io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn validity(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "valid",
        Some(false) => "invalid",
        None => "unknown",
    }
}

/// Reflexivity, symmetry, the proximity interaction and transitivity.
pub const DEMO: [(&str, &str); 4] = [
    ("reflexivity", "p prec q => p <= q"),
    ("symmetry", "p prec q => ~q prec ~p"),
    ("proximity", "p prec q => dia p prec dia q"),
    ("transitivity", "p prec q => E c. p prec c & c prec q"),
];

fn write_trace(path: &Path, outcome: &AlbaOutcome) -> Result<(), CliError> {
    let mut text = String::new();
    for s in &outcome.trace().steps {
        text.push_str(&serde_json::to_string(&TraceLine::from(s)).expect("trace line serializes"));
        text.push('\n');
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn check_frame_file(l: &Loaded, fo: &FoFormula, path: &Path) -> Result<VerifyJson, CliError> {
    let label = path.display().to_string();
    let src = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: label.clone(),
        source,
    })?;
    let file: FrameFile = serde_json::from_str(&src).map_err(|e| CliError::Parse {
        input: label,
        message: e.to_string(),
    })?;
    let frame = file.frame()?;
    let family = file.admissible(&frame)?;
    let mode = match &family {
        Some(f) => ValuationMode::Admissible(f),
        None => ValuationMode::Arbitrary,
    };
    let c = CompiledFo::compile(fo);
    if let Some(x) = c.free.first() {
        return Err(SemanticsError::UnassignedNominal(x.clone()).into());
    }
    if let Some(p) = c.preds.first() {
        return Err(SemanticsError::UnassignedVar(p.clone()).into());
    }
    let sv = valid(&frame, &l.statement, mode);
    let fv = c.eval_sentence(&frame);
    Ok(VerifyJson {
        input: l.label.clone(),
        fo: render_fo(fo),
        equivalent: sv == fv,
        frames_checked: 1,
        counterexample: (sv != fv).then_some(file),
        statement_valid: Some(sv),
        fo_valid: Some(fv),
    })
}

/// Exhaustive up to size 3, then `samples` seeded draws at size 4.
fn enumerate(l: &Loaded, fo: &FoFormula, max_frame: usize, samples: u64) -> Result<VerifyJson, CliError> {
    let budget = FrameBudget {
        max_size: max_frame.min(EXHAUSTIVE_LIMIT),
        skip_unused_relations: true,
    };
    let mut verdict = equivalence_oracle(&l.statement, fo, &budget)?;
    if let (OracleVerdict::Equivalent { frames_checked }, true) = (&verdict, max_frame > EXHAUSTIVE_LIMIT) {
        let n = EXHAUSTIVE_LIMIT + 1;
        let job = OracleJob::new(&l.statement, fo, &budget)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut total = *frames_checked;
        let mut found = None;
        for _ in 0..samples {
            let index = job.representative(n, rng.gen_range(0..frame_count(n)));
            let (checked, cex) = job.search(n, index..index + 1);
            total += checked;
            if cex.is_some() {
                found = cex;
                break;
            }
        }
        verdict = found.unwrap_or(OracleVerdict::Equivalent { frames_checked: total });
    }
    Ok(match verdict {
        OracleVerdict::Equivalent { frames_checked } => VerifyJson {
            input: l.label.clone(),
            fo: render_fo(fo),
            equivalent: true,
            frames_checked,
            counterexample: None,
            statement_valid: None,
            fo_valid: None,
        },
        OracleVerdict::Counterexample {
            frame,
            statement_valid,
            fo_valid,
            ..
        } => VerifyJson {
            input: l.label.clone(),
            fo: render_fo(fo),
            equivalent: false,
            frames_checked: 0,
            counterexample: Some(FrameFile::from_frame(&frame)),
            statement_valid: Some(statement_valid),
            fo_valid: Some(fo_valid),
        },
    })
}
