//! Batch command-line interface.
//!
//! Exit status: 0 when the property holds, 1 when it is refuted (a witness
//! is printed), 2 on usage, input or resource errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use weaklog_core::algz::{check_alg3, check_alg4, TransformerPair};
use weaklog_core::bimatrix::{export_horn, is_reduced, leibniz_reduce};
use weaklog_core::expanded::{core_entails, Entailment, ExpandedAlgebra};
use weaklog_core::heyting::{medvedev_algebra, medvedev_tensor_algebra, regular_core};
use weaklog_core::proofsys::{check_derivation, dnf, DerivationVerdict, InqbOracle, SystemName};
use weaklog_core::syntax::{formulas_by_depth, parse, parse_equation, Equation, Formula, FormulaShape, Signature};
use weaklog_core::team::{inqb_entails, inqi_entails_bounded, KripkeCountermodel, SearchBounds, TeamChoice};

use crate::format::{self, AlgebraJson, FormatError};
use crate::suite::{self, SuiteConfig};

#[derive(Parser, Debug)]
#[command(name = "weaklog", version, about = "Model checking and algebraic tools for weak inquisitive logics")]
pub struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel batteries (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampled batteries.
    #[arg(long, global = true, default_value_t = SuiteConfig::default().seed)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Logic {
    Inqb,
    Inqbt,
    Inqi,
    Inqit,
}

impl Logic {
    fn system(self) -> SystemName {
        match self {
            Logic::Inqb => SystemName::InqB,
            Logic::Inqbt => SystemName::InqBt,
            Logic::Inqi => SystemName::InqI,
            Logic::Inqit => SystemName::InqIt,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SigName {
    Int,
    Inq,
}

impl SigName {
    fn signature(self) -> Signature {
        match self {
            SigName::Int => Signature::int(),
            SigName::Inq => Signature::inq(),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula and print it with its size, depth and atoms.
    Parse {
        formula: String,
        #[arg(long, value_enum, default_value = "inq")]
        sig: SigName,
    },
    /// Decide `gamma |- phi` in one of the four logics.
    Entail {
        #[arg(long, value_enum, default_value = "inqb")]
        logic: Logic,
        #[arg(long)]
        phi: String,
        /// Premise; repeat for several.
        #[arg(long)]
        gamma: Vec<String>,
        /// Largest Kripke frame searched for the intuitionistic logics.
        #[arg(long, default_value_t = 4)]
        frame_size: usize,
    },
    /// Core consequence `theta |= eq` over algebras read from JSON files.
    EntailCore {
        /// Algebra file or directory of `*.json` files.
        #[arg(long)]
        algebras: PathBuf,
        /// Premise equation; repeat for several.
        #[arg(long)]
        theta: Vec<String>,
        #[arg(long)]
        conclusion: String,
    },
    /// Check a Hilbert derivation file.
    CheckProof {
        #[arg(long, value_enum, default_value = "inqb")]
        logic: Logic,
        proof: PathBuf,
        /// Premise; repeat for several.
        #[arg(long)]
        premise: Vec<String>,
        /// Required final formula.
        #[arg(long)]
        conclusion: Option<String>,
    },
    /// Disjunctive normal form with or-free disjuncts.
    Nf { formula: String },
    /// Write the upset algebra of a Medvedev frame as JSON.
    GenMedvedev {
        #[arg(long)]
        s: usize,
        /// Add the tensor operation.
        #[arg(long)]
        tensor: bool,
        /// Use the regular elements as core.
        #[arg(long)]
        regular: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a transformer pair against a family of algebras and a corpus.
    CheckAlg {
        #[arg(long)]
        algebras: PathBuf,
        /// Transformer pair JSON; defaults to the double-negation pair.
        #[arg(long)]
        pair: Option<PathBuf>,
        /// Formula corpus file; defaults to all two-atom formulas of depth 2.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "int")]
        sig: SigName,
    },
    /// Leibniz-reduce a bimatrix.
    Reduce {
        bimatrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export consequence pairs as Horn sentences in TPTP syntax.
    ExportHorn {
        pairs: PathBuf,
        /// Guard every variable with the core predicate.
        #[arg(long)]
        weak: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance batteries.
    Suite {
        /// Run only these criteria (1-10); repeat for several.
        #[arg(long)]
        criterion: Vec<usize>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Format(FormatError),
    Core(weaklog_core::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Format(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Format(e)
    }
}

impl From<weaklog_core::Error> for CliError {
    fn from(e: weaklog_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// Outcome of a command: whether the property holds, and the report in
/// both renderings.
struct Report {
    holds: bool,
    text: String,
    json: Value,
}

impl Report {
    fn new(holds: bool, text: impl Into<String>, json: Value) -> Report {
        Report { holds, text: text.into(), json }
    }
}

type CmdResult = Result<Report, CliError>;

fn formula(text: &str, sig: &Signature) -> Result<Formula, CliError> {
    parse(text, sig).map_err(|e| CliError::Usage(format!("`{text}`: {e}")))
}

fn equation(text: &str, sig: &Signature) -> Result<Equation, CliError> {
    parse_equation(text, sig).map_err(|e| CliError::Usage(format!("`{text}`: {e}")))
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn kripke_json(cm: &KripkeCountermodel) -> Value {
    let p = cm.model.poset();
    let order: Vec<(usize, usize)> =
        (0..p.len()).flat_map(|i| (0..p.len()).map(move |j| (i, j))).filter(|&(i, j)| i != j && p.leq(i, j)).collect();
    let valuation: Vec<Vec<usize>> = cm.model.valuation().iter().map(|&v| bits(v)).collect();
    json!({ "points": p.len(), "order": order, "valuation": valuation, "team": bits(cm.team) })
}

fn entail(logic: Logic, phi: &str, gamma: &[String], frame_size: usize) -> CmdResult {
    let sys = logic.system();
    let sig = sys.signature();
    let phi = formula(phi, &sig)?;
    let gamma = gamma.iter().map(|g| formula(g, &sig)).collect::<Result<Vec<_>, _>>()?;
    if sys.is_classical() {
        return Ok(match inqb_entails(&gamma, &phi)? {
            None => Report::new(true, "holds", json!({ "logic": sys.name(), "holds": true })),
            Some(ct) => {
                let atoms: Vec<String> = ct.atoms.iter().map(|a| format!("p{a}")).collect();
                let worlds = ct.world_strings();
                Report::new(
                    false,
                    format!("refuted; counter-team over ({}): {{{}}}", atoms.join(","), worlds.join(",")),
                    json!({ "logic": sys.name(), "holds": false, "atoms": atoms, "team": worlds }),
                )
            }
        });
    }
    let bounds = SearchBounds { frame_size, team_choice: TeamChoice::All };
    Ok(match inqi_entails_bounded(&gamma, &phi, bounds)? {
        None => Report::new(
            true,
            format!("holds (no countermodel up to {frame_size} points)"),
            json!({ "logic": sys.name(), "holds": true, "frame_size": frame_size }),
        ),
        Some(cm) => {
            let j = kripke_json(&cm);
            Report::new(
                false,
                format!("refuted; Kripke countermodel {j}"),
                json!({ "logic": sys.name(), "holds": false, "countermodel": j }),
            )
        }
    })
}

fn read_family(path: &Path) -> Result<Vec<(PathBuf, ExpandedAlgebra)>, CliError> {
    let files = format::json_files(path)?;
    if files.is_empty() {
        return Err(CliError::Usage(format!("{}: no algebra files", path.display())));
    }
    files.into_iter().map(|p| Ok((p.clone(), format::read_expanded(&p)?))).collect()
}

fn entail_core(algebras: &Path, theta: &[String], conclusion: &str) -> CmdResult {
    let family = read_family(algebras)?;
    let sig = family[0].1.alg().sig().clone();
    let theta = theta.iter().map(|t| equation(t, &sig)).collect::<Result<Vec<_>, _>>()?;
    let concl = equation(conclusion, &sig)?;
    let k: Vec<ExpandedAlgebra> = family.iter().map(|(_, ea)| ea.clone()).collect();
    Ok(match core_entails(&k, &theta, &concl)? {
        Entailment::Holds => Report::new(true, "holds", json!({ "holds": true, "algebras": k.len() })),
        Entailment::Refuted(w) => {
            let file = family[w.algebra].0.display().to_string();
            let assignment: serde_json::Map<String, Value> =
                w.assignment.iter().map(|(a, v)| (format!("p{a}"), json!(v))).collect();
            Report::new(
                false,
                format!("refuted in {file} at {}", Value::Object(assignment.clone())),
                json!({ "holds": false, "algebra": file, "assignment": assignment }),
            )
        }
    })
}

fn check_proof(logic: Logic, proof: &Path, premises: &[String], conclusion: Option<&str>) -> CmdResult {
    let sys = weaklog_core::proofsys::AxiomSystem::new(logic.system());
    let sig = sys.signature();
    let d = format::read_derivation(proof, &sig)?;
    let premises = premises.iter().map(|p| formula(p, &sig)).collect::<Result<Vec<_>, _>>()?;
    let concl = conclusion.map(|c| formula(c, &sig)).transpose()?;
    let verdict = check_derivation(&sys, &premises, &d, concl.as_ref())?;
    Ok(match verdict {
        DerivationVerdict::Valid => Report::new(
            true,
            format!("valid derivation of {} lines", d.lines.len()),
            json!({ "valid": true, "lines": d.lines.len() }),
        ),
        DerivationVerdict::InvalidLine(n) => Report::new(
            false,
            format!("line {} is not justified: {}", n + 1, d.lines[n].formula),
            json!({ "valid": false, "line": n + 1 }),
        ),
        DerivationVerdict::WrongConclusion => {
            Report::new(false, "derivation does not end in the conclusion", json!({ "valid": false, "wrong_conclusion": true }))
        }
    })
}

fn gen_medvedev(s: usize, tensor: bool, regular: bool, out: Option<&Path>) -> CmdResult {
    let h = if tensor { medvedev_tensor_algebra(s)? } else { medvedev_algebra(s)? };
    let mut j = AlgebraJson::from_algebra(h.alg()).with_upset_labels(&h);
    if regular {
        j.core = Some(regular_core(&h)?.core().to_vec());
    }
    let text = format::to_pretty_json(&j);
    let summary = format!("Medvedev algebra for |s| = {s}: {} elements", h.size());
    match out {
        Some(p) => {
            format::write_text(p, &text)?;
            Ok(Report::new(true, summary, json!({ "elements": h.size(), "out": p.display().to_string() })))
        }
        None => Ok(Report::new(true, text, serde_json::to_value(&j).expect("algebra serializes"))),
    }
}

fn check_alg(algebras: &Path, pair: Option<&Path>, corpus: Option<&Path>, sig: SigName) -> CmdResult {
    let sig = sig.signature();
    let t = match pair {
        Some(p) => format::read_pair(p, &sig)?,
        None => TransformerPair::inqb(),
    };
    let family = read_family(algebras)?;
    let k: Vec<ExpandedAlgebra> = family.iter().map(|(_, ea)| ea.clone()).collect();
    let corpus = match corpus {
        Some(p) => format::read_formulas(p, &sig)?,
        None => {
            let shape = if sig.contains(&weaklog_core::syntax::Connective::Tensor) {
                FormulaShape::inq(2)
            } else {
                FormulaShape::int(2)
            };
            formulas_by_depth(&shape, 2)
        }
    };
    let alg4 = check_alg4(&k, &t)?;
    let alg3 = check_alg3(&InqbOracle, &t, &corpus)?;
    let mut text = String::new();
    match &alg4 {
        None => {
            let _ = writeln!(text, "Alg4 holds on {} algebras", k.len());
        }
        Some(w) => {
            let _ = writeln!(text, "Alg4 fails in {} at ({}, {})", family[w.algebra].0.display(), w.a, w.b);
        }
    }
    let _ = write!(text, "Alg3: {} formulas, {} failures", alg3.checked, alg3.failures.len());
    if let Some(fail) = alg3.failures.first() {
        let _ = write!(text, "; first {} (forward {}, backward {})", fail.formula, fail.forward, fail.backward);
    }
    let j = json!({
        "alg4": alg4.as_ref().map(|w| json!({ "algebra": family[w.algebra].0.display().to_string(), "a": w.a, "b": w.b })),
        "alg3_checked": alg3.checked,
        "alg3_failures": alg3.failures.iter().map(|f| json!({
            "formula": f.formula.to_string(), "forward": f.forward, "backward": f.backward
        })).collect::<Vec<_>>(),
    });
    Ok(Report::new(alg4.is_none() && alg3.passed(), text, j))
}

fn reduce(path: &Path, out: Option<&Path>) -> CmdResult {
    let m = format::read_bimatrix(path)?;
    let (r, proj) = leibniz_reduce(&m)?;
    let j = format::bimatrix_json(&r);
    let text = format::to_pretty_json(&j);
    let summary = format!(
        "{} elements reduce to {}{}",
        m.size(),
        r.size(),
        if is_reduced(&m) { " (already reduced)" } else { "" }
    );
    let report = json!({ "from": m.size(), "to": r.size(), "projection": proj, "reduced": j });
    match out {
        Some(p) => {
            format::write_text(p, &text)?;
            Ok(Report::new(true, summary, report))
        }
        None => Ok(Report::new(true, format!("{summary}\n{text}"), report)),
    }
}

fn horn(pairs: &Path, weak: bool, out: Option<&Path>) -> CmdResult {
    let pairs = format::read_pairs(pairs, &Signature::inq())?;
    let text = export_horn(&pairs, weak);
    match out {
        Some(p) => {
            format::write_text(p, &text)?;
            Ok(Report::new(true, format!("{} sentences written", pairs.len()), json!({ "sentences": pairs.len() })))
        }
        None => Ok(Report::new(true, text.trim_end().to_string(), json!({ "tptp": text }))),
    }
}

fn suite_cmd(criteria: &[usize], seed: u64, as_json: bool) -> CmdResult {
    let ids: Vec<usize> = if criteria.is_empty() { (1..=suite::CRITERIA).collect() } else { criteria.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > suite::CRITERIA) {
        return Err(CliError::Usage(format!("no criterion {bad}")));
    }
    let cfg = SuiteConfig { seed };
    let mut reports = Vec::new();
    for id in ids {
        let r = suite::run_one(id, &cfg);
        if !as_json {
            emit(&r.line());
        }
        reports.push(r);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    Ok(Report::new(
        passed == reports.len(),
        format!("{passed}/{} criteria passed", reports.len()),
        serde_json::to_value(&reports).expect("reports serialize"),
    ))
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Parse { formula: text, sig } => {
            let f = formula(text, &sig.signature())?;
            let atoms: Vec<String> = f.atoms().iter().map(|a| format!("p{a}")).collect();
            Ok(Report::new(
                true,
                format!("{f}\nsize {}, depth {}, atoms {}", f.size(), f.depth(), atoms.join(" ")),
                json!({ "formula": f.to_string(), "size": f.size(), "depth": f.depth(), "atoms": atoms }),
            ))
        }
        Command::Entail { logic, phi, gamma, frame_size } => entail(*logic, phi, gamma, *frame_size),
        Command::EntailCore { algebras, theta, conclusion } => entail_core(algebras, theta, conclusion),
        Command::CheckProof { logic, proof, premise, conclusion } => {
            check_proof(*logic, proof, premise, conclusion.as_deref())
        }
        Command::Nf { formula: text } => {
            let f = formula(text, &Signature::inq())?;
            let ds = dnf(&f)?;
            let list: Vec<String> = ds.iter().map(ToString::to_string).collect();
            Ok(Report::new(true, list.join("\n"), json!({ "formula": f.to_string(), "disjuncts": list })))
        }
        Command::GenMedvedev { s, tensor, regular, out } => gen_medvedev(*s, *tensor, *regular, out.as_deref()),
        Command::CheckAlg { algebras, pair, corpus, sig } => check_alg(algebras, pair.as_deref(), corpus.as_deref(), *sig),
        Command::Reduce { bimatrix, out } => reduce(bimatrix, out.as_deref()),
        Command::ExportHorn { pairs, weak, out } => horn(pairs, *weak, out.as_deref()),
        Command::Suite { criterion } => suite_cmd(criterion, cli.seed, cli.json),
    }
}

// a closed pipe is not an error worth reporting
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        // only fails if a pool already exists, which keeps the earlier setting
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(r) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&r.json).expect("report serializes"));
            } else {
                emit(&r.text);
            }
            ExitCode::from(if r.holds { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                emit(&json!({ "error": e.to_string() }).to_string());
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
