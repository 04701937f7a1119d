//! Hilbert systems for inquisitive and dependence logics, derivation
//! checking, the disjunctive normal form, univariate fixpoint iteration and
//! sampled checks of the schematic fragment.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::heyting::{medvedev_algebra, HeytingAlgebra, IpcChecker};
use crate::syntax::{match_schema, parse, Connective, Formula, Schema, Signature, Sort, Substitution};
use crate::team::{inqb_entails, inqi_entails_bounded, SearchBounds};

/// The four systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemName {
    InqI,
    InqB,
    InqIt,
    InqBt,
}

impl SystemName {
    pub fn parse(name: &str) -> Option<SystemName> {
        match name.to_ascii_lowercase().as_str() {
            "inqi" => Some(SystemName::InqI),
            "inqb" => Some(SystemName::InqB),
            "inqit" => Some(SystemName::InqIt),
            "inqbt" => Some(SystemName::InqBt),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemName::InqI => "inqi",
            SystemName::InqB => "inqb",
            SystemName::InqIt => "inqit",
            SystemName::InqBt => "inqbt",
        }
    }

    pub fn has_tensor(self) -> bool {
        matches!(self, SystemName::InqIt | SystemName::InqBt)
    }

    pub fn is_classical(self) -> bool {
        matches!(self, SystemName::InqB | SystemName::InqBt)
    }

    pub fn signature(self) -> Signature {
        if self.has_tensor() {
            Signature::inq()
        } else {
            Signature::int()
        }
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Metavariables shared by all axiom templates: `phi psi chi tau` range over
/// all formulas, `alpha beta gamma` over `or`-free ones.
pub const METAVARIABLES: [(&str, Sort); 7] = [
    ("phi", Sort::Any),
    ("psi", Sort::Any),
    ("chi", Sort::Any),
    ("tau", Sort::Any),
    ("alpha", Sort::Standard),
    ("beta", Sort::Standard),
    ("gamma", Sort::Standard),
];

const INT_AXIOMS: [(&str, &str); 10] = [
    ("A1", "_phi -> (_psi -> _phi)"),
    ("A2", "(_phi -> (_psi -> _chi)) -> ((_phi -> _psi) -> (_phi -> _chi))"),
    ("A3", "_phi & _psi -> _phi"),
    ("A4", "_phi & _psi -> _psi"),
    ("A5", "_phi -> (_psi -> _phi & _psi)"),
    ("A6", "_phi -> _phi | _psi"),
    ("A7", "_psi -> _phi | _psi"),
    ("A8", "(_phi -> _chi) -> ((_psi -> _chi) -> (_phi | _psi -> _chi))"),
    ("A9", "bot -> _phi"),
    ("A10", "(_alpha -> _phi | _psi) -> (_alpha -> _phi) | (_alpha -> _psi)"),
];

const TENSOR_AXIOMS: [(&str, &str); 5] = [
    ("A11", "_alpha -> _alpha * _beta"),
    ("A12", "_alpha * _beta -> _beta * _alpha"),
    ("A13", "_phi * (_psi | _chi) -> (_phi * _psi) | (_phi * _chi)"),
    ("A14", "(_phi -> _chi) -> ((_psi -> _tau) -> (_phi * _psi -> _chi * _tau))"),
    ("A15", "(_alpha -> _gamma) -> ((_beta -> _gamma) -> (_alpha * _beta -> _gamma))"),
];

const DNE: (&str, &str) = ("DNE", "~~_alpha -> _alpha");

/// A named list of axiom schemas closed under modus ponens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSystem {
    name: SystemName,
    schemas: Vec<(String, Schema)>,
}

impl AxiomSystem {
    pub fn new(name: SystemName) -> AxiomSystem {
        let sig = name.signature();
        let mut list: Vec<(&str, &str)> = INT_AXIOMS.to_vec();
        if name.has_tensor() {
            list.extend(TENSOR_AXIOMS);
        }
        if name.is_classical() {
            list.push(DNE);
        }
        let schemas = list
            .into_iter()
            .map(|(label, text)| {
                let s = Schema::parse(text, &sig, &METAVARIABLES).expect("built-in axiom templates parse");
                (label.to_string(), s)
            })
            .collect();
        AxiomSystem { name, schemas }
    }

    pub fn name(&self) -> SystemName {
        self.name
    }

    pub fn signature(&self) -> Signature {
        self.name.signature()
    }

    pub fn schemas(&self) -> &[(String, Schema)] {
        &self.schemas
    }

    pub fn schema(&self, label: &str) -> Option<&Schema> {
        self.schemas.iter().find(|(l, _)| l == label).map(|(_, s)| s)
    }

    /// First schema (in listing order) of which `f` is an instance.
    pub fn identify(&self, f: &Formula) -> Option<(&str, BTreeMap<u32, Formula>)> {
        self.schemas.iter().find_map(|(l, s)| match_schema(s, f).map(|m| (l.as_str(), m)))
    }
}

/// Justification of one derivation line. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Instance of the labelled schema; the assignment is inferred by
    /// matching when absent.
    Axiom { schema: String, assignment: Option<BTreeMap<u32, Formula>> },
    /// The premise at this index.
    Premise(usize),
    /// Modus ponens: line `i` is `φ` and line `j` is `φ -> current`.
    Mp(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    pub lines: Vec<DerivationLine>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// Result of [`check_derivation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationVerdict {
    Valid,
    /// The first line (0-based) that is not justified.
    InvalidLine(usize),
    /// Every line checks but the last one is not the required conclusion.
    WrongConclusion,
}

impl DerivationVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, DerivationVerdict::Valid)
    }
}

/// Checks each line in order. References to premises or lines that do not
/// exist (or are not strictly earlier) are reported as errors.
pub fn check_derivation(
    sys: &AxiomSystem,
    premises: &[Formula],
    d: &Derivation,
    conclusion: Option<&Formula>,
) -> Result<DerivationVerdict> {
    let sig = sys.signature();
    for (n, line) in d.lines.iter().enumerate() {
        let ok = line.formula.check(&sig).is_ok()
            && match &line.justification {
                Justification::Premise(i) => {
                    let p = premises.get(*i).ok_or(Error::MalformedIndex { line: n, index: *i })?;
                    *p == line.formula
                }
                Justification::Mp(i, j) => {
                    for k in [*i, *j] {
                        if k >= n {
                            return Err(Error::MalformedIndex { line: n, index: k });
                        }
                    }
                    d.lines[*j].formula == Formula::imp(d.lines[*i].formula.clone(), line.formula.clone())
                }
                Justification::Axiom { schema, assignment } => match sys.schema(schema) {
                    None => false,
                    Some(s) => match assignment {
                        None => match_schema(s, &line.formula).is_some(),
                        Some(a) => {
                            let covers = s.metavariables().all(|m| a.contains_key(&m));
                            covers && s.admits(a) && s.instantiate(a) == line.formula
                        }
                    },
                },
            };
        if !ok {
            return Ok(DerivationVerdict::InvalidLine(n));
        }
    }
    match conclusion {
        Some(c) if d.conclusion() != Some(c) => Ok(DerivationVerdict::WrongConclusion),
        _ => Ok(DerivationVerdict::Valid),
    }
}

/// Reads the line-oriented derivation format
/// `<formula> ; axiom A<k> | axiom DNE | premise <i> | mp <i> <j>`
/// with 1-based indices. Blank lines and lines starting with `#` are skipped.
pub fn parse_derivation(text: &str, sig: &Signature) -> Result<Derivation> {
    let mut lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let bad = |m: &str| Error::Syntax { pos: lineno + 1, message: format!("derivation line {}: {m}", lineno + 1) };
        let (ftext, just) = raw.rsplit_once(';').ok_or_else(|| bad("missing `;` before the justification"))?;
        let formula = parse(ftext.trim(), sig)?;
        let words: Vec<&str> = just.split_whitespace().collect();
        let index = |w: &str| -> Result<usize> {
            let k: usize = w.parse().map_err(|_| bad("index is not a number"))?;
            k.checked_sub(1).ok_or(Error::MalformedIndex { line: lines.len(), index: 0 })
        };
        let justification = match words.as_slice() {
            ["axiom", label] => Justification::Axiom { schema: (*label).to_string(), assignment: None },
            ["premise", i] => Justification::Premise(index(i)?),
            ["mp", i, j] => Justification::Mp(index(i)?, index(j)?),
            _ => return Err(bad("expected `axiom <label>`, `premise <i>` or `mp <i> <j>`")),
        };
        lines.push(DerivationLine { formula, justification });
    }
    Ok(Derivation { lines })
}

/// Largest `|I| * |J|` accepted when expanding an implication.
pub const DNF_PAIR_CAP: usize = 12;

/// Disjunctive normal form: `or`-free formulas whose disjunction is
/// equivalent to `f`. No simplification is applied.
pub fn dnf(f: &Formula) -> Result<Vec<Formula>> {
    match f {
        Formula::Atom(_) => Ok(vec![f.clone()]),
        Formula::App(c, args) => match (c, args.as_slice()) {
            (Connective::Bot, []) => Ok(vec![f.clone()]),
            (Connective::Or, [a, b]) => {
                let mut out = dnf(a)?;
                out.extend(dnf(b)?);
                Ok(out)
            }
            (Connective::And | Connective::Tensor, [a, b]) => {
                let (da, db) = (dnf(a)?, dnf(b)?);
                let mut out = Vec::with_capacity(da.len() * db.len());
                for x in &da {
                    for y in &db {
                        out.push(Formula::App(c.clone(), vec![x.clone(), y.clone()]));
                    }
                }
                Ok(out)
            }
            (Connective::Imp, [a, b]) => {
                let (da, db) = (dnf(a)?, dnf(b)?);
                if da.len() * db.len() > DNF_PAIR_CAP {
                    return Err(Error::DnfTooLarge { antecedent: da.len(), consequent: db.len() });
                }
                // one disjunct per choice function I -> J, first index most significant
                let mut choice = vec![0usize; da.len()];
                let mut out = Vec::new();
                loop {
                    let parts = da.iter().zip(&choice).map(|(x, &j)| Formula::imp(x.clone(), db[j].clone()));
                    out.push(Formula::conjunction(parts).expect("antecedent has a disjunct"));
                    let mut i = da.len();
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        choice[i] += 1;
                        if choice[i] < db.len() {
                            break;
                        }
                        choice[i] = 0;
                    }
                }
            }
            _ => Err(Error::UnknownConnective(c.name().into())),
        },
    }
}

/// Outcome of [`fixpoint_iterate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixpoint {
    /// `ρ^(n-1)` for period 1; `ρ^(n-2)` for period 2.
    pub formula: Formula,
    /// Iteration index at which repetition was detected (`ρ^0 = x`).
    pub n: usize,
    /// 1 for a fixpoint, 2 for an alternating pair.
    pub period: usize,
}

/// Iterates `ρ^0 = x`, `ρ^(n+1) = ρ(ρ^n)` and stops at the first `n` with
/// `ρ^n ≡ ρ^(n-1)` (period 1) or `ρ^n ≡ ρ^(n-2)` (period 2), equivalence
/// being bounded intuitionistic equivalence with `⊗` read as `∨`.
pub fn fixpoint_iterate(rho: &Formula, max_n: usize, checker: &IpcChecker) -> Result<Fixpoint> {
    if !rho.is_or_free() {
        return Err(Error::Precondition("iterated formula must be or-free".into()));
    }
    let atoms = rho.atoms();
    if atoms.len() > 1 {
        return Err(Error::Precondition("iterated formula must have at most one atom".into()));
    }
    let x = atoms.iter().next().copied().unwrap_or(0);
    let mut iterates = vec![Formula::Atom(x)];
    for n in 1..=max_n {
        let next = Substitution::single(x, iterates[n - 1].clone()).apply(rho);
        iterates.push(next);
        if checker.equiv(&iterates[n], &iterates[n - 1])?.is_equivalent() {
            return Ok(Fixpoint { formula: iterates[n - 1].clone(), n, period: 1 });
        }
        if n >= 2 && checker.equiv(&iterates[n], &iterates[n - 2])?.is_equivalent() {
            return Ok(Fixpoint { formula: iterates[n - 2].clone(), n, period: 2 });
        }
    }
    Err(Error::NoStabilisation { max_n })
}

/// A decision procedure (possibly bounded) for a consequence relation.
pub trait ConsequenceOracle {
    fn name(&self) -> String;
    /// Whether `gamma` entails `phi`.
    fn entails(&self, gamma: &[Formula], phi: &Formula) -> Result<bool>;
}

/// Classical team semantics; decides InqB and, with tensor, InqB⊗.
#[derive(Clone, Copy, Debug, Default)]
pub struct InqbOracle;

impl ConsequenceOracle for InqbOracle {
    fn name(&self) -> String {
        "classical team semantics".into()
    }

    fn entails(&self, gamma: &[Formula], phi: &Formula) -> Result<bool> {
        Ok(inqb_entails(gamma, phi)?.is_none())
    }
}

/// Kripke team semantics on bounded frames; `true` means no countermodel
/// within the bounds.
#[derive(Clone, Copy, Debug)]
pub struct InqiBoundedOracle {
    pub bounds: SearchBounds,
}

impl ConsequenceOracle for InqiBoundedOracle {
    fn name(&self) -> String {
        format!("Kripke team semantics up to {} points", self.bounds.frame_size)
    }

    fn entails(&self, gamma: &[Formula], phi: &Formula) -> Result<bool> {
        Ok(inqi_entails_bounded(gamma, phi, self.bounds)?.is_none())
    }
}

/// Local consequence over the upset algebras of Medvedev frames with
/// `|s| <= max_s`, all valuations; `⊗` is read as `∨`.
#[derive(Clone, Debug)]
pub struct MedvedevOracle {
    algebras: Vec<HeytingAlgebra>,
    max_s: usize,
}

impl MedvedevOracle {
    pub fn new(max_s: usize) -> Result<MedvedevOracle> {
        let algebras = (1..=max_s).map(medvedev_algebra).collect::<Result<Vec<_>>>()?;
        Ok(MedvedevOracle { algebras, max_s })
    }
}

impl ConsequenceOracle for MedvedevOracle {
    fn name(&self) -> String {
        format!("Medvedev frames up to |s| = {}", self.max_s)
    }

    fn entails(&self, gamma: &[Formula], phi: &Formula) -> Result<bool> {
        let as_int = |f: &Formula| f.replace_connective(&Connective::Tensor, &Connective::Or);
        let premise = Formula::conjunction(gamma.iter().map(as_int)).unwrap_or_else(Formula::top);
        let goal = Formula::imp(premise, as_int(phi));
        let atoms: Vec<u32> = goal.atoms().into_iter().collect();
        let width = atoms.last().map_or(0, |&a| a as usize + 1);
        let mut stack = Vec::new();
        for h in &self.algebras {
            let prog = h.alg().compile(&goal)?;
            let top = h.top();
            let size = h.size() as u32;
            let mut val = vec![0u32; width];
            let mut pos = vec![0u32; atoms.len()];
            loop {
                for (&a, &v) in atoms.iter().zip(&pos) {
                    val[a as usize] = v;
                }
                if prog.eval(h.alg(), &val, &mut stack) != top {
                    return Ok(false);
                }
                let mut i = 0;
                while i < pos.len() {
                    pos[i] += 1;
                    if pos[i] < size {
                        break;
                    }
                    pos[i] = 0;
                    i += 1;
                }
                if i == pos.len() {
                    break;
                }
            }
        }
        Ok(true)
    }
}

/// Outcome of [`schm_sample`]; membership is only ever relative to the sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchmVerdict {
    /// Every one of this many substitution instances is entailed.
    InSchmUpToSample(usize),
    RejectedBy(Substitution),
}

/// Checks `σ[Γ] ⊢ σ(φ)` for each supplied substitution.
pub fn schm_sample(
    oracle: &dyn ConsequenceOracle,
    gamma: &[Formula],
    phi: &Formula,
    substs: &[Substitution],
) -> Result<SchmVerdict> {
    for s in substs {
        let g: Vec<Formula> = gamma.iter().map(|f| s.apply(f)).collect();
        if !oracle.entails(&g, &s.apply(phi))? {
            return Ok(SchmVerdict::RejectedBy(s.clone()));
        }
    }
    Ok(SchmVerdict::InSchmUpToSample(substs.len()))
}

/// Per-case outcome of [`representability_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentabilityCase {
    pub weak: bool,
    pub schematic: bool,
}

impl RepresentabilityCase {
    pub fn agrees(&self) -> bool {
        self.weak == self.schematic
    }
}

/// Every atomic-substitution instance of the members of `lambda` whose atoms
/// are drawn from `atoms`.
pub fn atomic_instances(lambda: &[Formula], atoms: &BTreeSet<u32>) -> Vec<Formula> {
    let pool: Vec<u32> = atoms.iter().copied().collect();
    let mut out = BTreeSet::new();
    for l in lambda {
        let vars: Vec<u32> = l.atoms().into_iter().collect();
        if pool.is_empty() {
            if vars.is_empty() {
                out.insert(l.clone());
            }
            continue;
        }
        let mut pos = vec![0usize; vars.len()];
        loop {
            let s = Substitution::from_pairs(vars.iter().zip(&pos).map(|(&v, &p)| (v, Formula::Atom(pool[p]))));
            out.insert(s.apply(l));
            let mut i = 0;
            while i < pos.len() {
                pos[i] += 1;
                if pos[i] < pool.len() {
                    break;
                }
                pos[i] = 0;
                i += 1;
            }
            if i == pos.len() {
                break;
            }
        }
    }
    out.into_iter().collect()
}

/// Compares `Γ ⊢ φ` (weak oracle) with `Γ ∪ At[Λ] ⊢ φ` (schematic oracle),
/// instantiating `Λ` on the atoms occurring in each case.
pub fn representability_check(
    weak: &dyn ConsequenceOracle,
    schm: &dyn ConsequenceOracle,
    lambda: &[Formula],
    cases: &[(Vec<Formula>, Formula)],
) -> Result<Vec<RepresentabilityCase>> {
    let mut out = Vec::with_capacity(cases.len());
    for (gamma, phi) in cases {
        let mut atoms = phi.atoms();
        for g in gamma {
            atoms.extend(g.atoms());
        }
        let mut extended = gamma.clone();
        extended.extend(atomic_instances(lambda, &atoms));
        out.push(RepresentabilityCase { weak: weak.entails(gamma, phi)?, schematic: schm.entails(&extended, phi)? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::IpcChecker;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s, &Signature::inq()).unwrap()
    }

    #[test]
    fn textbook_modus_ponens() {
        let sys = AxiomSystem::new(SystemName::InqI);
        let d = parse_derivation("p0 ; premise 1\np0 -> (p1 -> p0) ; axiom A1\np1 -> p0 ; mp 1 2\n", &Signature::int())
            .unwrap();
        assert_eq!(check_derivation(&sys, &[f("p0")], &d, Some(&f("p1 -> p0"))).unwrap(), DerivationVerdict::Valid);
        assert_eq!(
            check_derivation(&sys, &[f("p0")], &d, Some(&f("p0"))).unwrap(),
            DerivationVerdict::WrongConclusion
        );
    }

    #[test]
    fn sort_violation_is_reported_at_its_line() {
        let sys = AxiomSystem::new(SystemName::InqB);
        let d = parse_derivation(
            "p0 -> (p1 -> p0) ; axiom A1\n((p0 | p1) -> p2 | p3) -> ((p0 | p1) -> p2) | ((p0 | p1) -> p3) ; axiom A10\n",
            &Signature::int(),
        )
        .unwrap();
        assert_eq!(check_derivation(&sys, &[], &d, None).unwrap(), DerivationVerdict::InvalidLine(1));
    }

    #[test]
    fn empty_derivation_and_bad_indices() {
        let sys = AxiomSystem::new(SystemName::InqI);
        let empty = Derivation::default();
        assert_eq!(check_derivation(&sys, &[], &empty, Some(&f("p0"))).unwrap(), DerivationVerdict::WrongConclusion);
        let d = parse_derivation("p0 ; mp 1 2", &Signature::int()).unwrap();
        assert_eq!(check_derivation(&sys, &[], &d, None), Err(Error::MalformedIndex { line: 0, index: 0 }));
        let d = parse_derivation("p0 ; premise 3", &Signature::int()).unwrap();
        assert_eq!(check_derivation(&sys, &[f("p0")], &d, None), Err(Error::MalformedIndex { line: 0, index: 2 }));
    }

    #[test]
    fn dne_only_in_classical_systems() {
        let dne = f("~~p0 -> p0");
        assert!(AxiomSystem::new(SystemName::InqI).identify(&dne).is_none());
        assert_eq!(AxiomSystem::new(SystemName::InqB).identify(&dne).unwrap().0, "DNE");
        assert!(AxiomSystem::new(SystemName::InqB).identify(&f("~~(p0 | p1) -> p0 | p1")).is_none());
        assert_eq!(AxiomSystem::new(SystemName::InqIt).identify(&f("p0 -> p0 * p1")).unwrap().0, "A11");
        assert_eq!(AxiomSystem::new(SystemName::InqB).schemas().len(), 11);
        assert_eq!(AxiomSystem::new(SystemName::InqBt).schemas().len(), 16);
    }

    #[test]
    fn normal_forms() {
        assert_eq!(dnf(&f("p0 | p1")).unwrap(), vec![f("p0"), f("p1")]);
        assert_eq!(dnf(&f("(p0 | p1) -> p2")).unwrap(), vec![f("(p0 -> p2) & (p1 -> p2)")]);
        assert_eq!(dnf(&f("p0 -> p1 | p2")).unwrap(), vec![f("p0 -> p1"), f("p0 -> p2")]);
        assert_eq!(dnf(&f("(p0 | p1) * p2")).unwrap(), vec![f("p0 * p2"), f("p1 * p2")]);
        let big = f("(p0 | p1 | p2 | p0) -> (p1 | p2 | p0 | p1)");
        assert_eq!(dnf(&big), Err(Error::DnfTooLarge { antecedent: 4, consequent: 4 }));
    }

    #[test]
    fn fixpoints() {
        let ch = IpcChecker::new(4).unwrap();
        let r = fixpoint_iterate(&f("p0"), 10, &ch).unwrap();
        assert_eq!((r.n, r.period), (1, 1));
        let r = fixpoint_iterate(&f("~~p0"), 10, &ch).unwrap();
        assert_eq!((r.formula, r.n, r.period), (f("~~p0"), 2, 1));
        let r = fixpoint_iterate(&f("~p0"), 10, &ch).unwrap();
        assert_eq!((r.n, r.period), (3, 2));
        for g in ["bot -> bot", "bot", "p0 * ~p0"] {
            let r = fixpoint_iterate(&f(g), 10, &ch).unwrap();
            assert_eq!((r.formula, r.period), (f(g), 1), "{g}");
        }
        assert!(fixpoint_iterate(&f("p0 | p0"), 10, &ch).is_err());
        assert!(fixpoint_iterate(&f("p0 -> p1"), 10, &ch).is_err());
    }

    #[test]
    fn schematic_samples() {
        let split = f("(p0 -> p1 | p2) -> (p0 -> p1) | (p0 -> p2)");
        let s = Substitution::single(0, f("p1 | p2"));
        assert_eq!(
            schm_sample(&InqbOracle, &[], &split, core::slice::from_ref(&s)).unwrap(),
            SchmVerdict::RejectedBy(s)
        );
        let atomic = [Substitution::single(0, f("p3")), Substitution::single(1, f("p0"))];
        assert_eq!(schm_sample(&InqbOracle, &[], &split, &atomic).unwrap(), SchmVerdict::InSchmUpToSample(2));
        let dne = f("~~p0 -> p0");
        let s = Substitution::single(0, f("p0 | ~p0"));
        assert!(matches!(schm_sample(&InqbOracle, &[], &dne, &[s]).unwrap(), SchmVerdict::RejectedBy(_)));
    }

    #[test]
    fn representability_cases() {
        let ml = MedvedevOracle::new(3).unwrap();
        let lambda = [f("~~p0 -> p0")];
        let cases = vec![
            (vec![], f("~~p1 -> p1")),
            (vec![], f("(p0 -> p1 | p2) -> (p0 -> p1) | (p0 -> p2)")),
            (vec![], f("((p1 | p2) -> (p1 | p2)) -> ((p1 | p2) -> p1) | ((p1 | p2) -> p2)")),
        ];
        let r = representability_check(&InqbOracle, &ml, &lambda, &cases).unwrap();
        assert_eq!(r[0], RepresentabilityCase { weak: true, schematic: true });
        assert_eq!(r[1], RepresentabilityCase { weak: true, schematic: true });
        assert_eq!(r[2], RepresentabilityCase { weak: false, schematic: false });
    }
}
