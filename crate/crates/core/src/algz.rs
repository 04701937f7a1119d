//! Transformer pairs `(τ, Δ)` between formulas and equations and finite
//! checks of the algebraizability conditions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::expanded::{core_entails, sigma_core, CoreWitness, ExpandedAlgebra};
use crate::proofsys::ConsequenceOracle;
use crate::syntax::{parse, Equation, Formula, Parser, Signature, Substitution};
use crate::team::{inqi_countermodel_search, KripkeCountermodel, SearchBounds};

/// Structural transformers given by templates: `tau` equations mention only
/// the metavariable `_phi` (atom 0), `delta` formulas only `_x` and `_y`
/// (atoms 0 and 1). Both lists are kept deduplicated in first-seen order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformerPair {
    tau: Vec<Equation>,
    delta: Vec<Formula>,
}

fn dedup<T: PartialEq>(items: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

impl TransformerPair {
    pub fn new(tau: Vec<Equation>, delta: Vec<Formula>) -> Result<TransformerPair> {
        if tau.iter().any(|e| e.atoms().iter().any(|&a| a > 0)) {
            return Err(Error::Precondition("tau templates may only mention _phi".into()));
        }
        if delta.iter().any(|d| d.atoms().iter().any(|&a| a > 1)) {
            return Err(Error::Precondition("delta templates may only mention _x and _y".into()));
        }
        Ok(TransformerPair { tau: dedup(tau), delta: dedup(delta) })
    }

    /// Parses templates written with `_phi`, `_x` and `_y`.
    pub fn parse<S: AsRef<str>>(tau: &[S], delta: &[S], sig: &Signature) -> Result<TransformerPair> {
        let tp = Parser::new(sig).with_metavariables(&["phi"]);
        let dp = Parser::new(sig).with_metavariables(&["x", "y"]);
        let tau = tau.iter().map(|t| tp.equation(t.as_ref())).collect::<Result<Vec<_>>>()?;
        let delta = delta.iter().map(|d| dp.formula(d.as_ref())).collect::<Result<Vec<_>>>()?;
        TransformerPair::new(tau, delta)
    }

    /// `τ(φ) = {φ ≈ ⊥→⊥}`, `Δ(x, y) = {x ↔ y}`.
    pub fn inqb() -> TransformerPair {
        TransformerPair {
            tau: vec![Equation::new(Formula::Atom(0), Formula::top())],
            delta: vec![Formula::iff(Formula::Atom(0), Formula::Atom(1))],
        }
    }

    pub fn tau(&self) -> &[Equation] {
        &self.tau
    }

    pub fn delta(&self) -> &[Formula] {
        &self.delta
    }
}

pub fn tau_apply(t: &TransformerPair, f: &Formula) -> Vec<Equation> {
    let s = Substitution::single(0, f.clone());
    dedup(t.tau.iter().map(|e| e.map(|x| s.apply(x))).collect())
}

/// `τ[Γ]`, the union over the members of `gamma`.
pub fn tau_apply_set(t: &TransformerPair, gamma: &[Formula]) -> Vec<Equation> {
    dedup(gamma.iter().flat_map(|f| tau_apply(t, f)).collect())
}

pub fn delta_apply(t: &TransformerPair, e: &Equation) -> Vec<Formula> {
    let s = Substitution::from_pairs([(0, e.lhs.clone()), (1, e.rhs.clone())]);
    dedup(t.delta.iter().map(|d| s.apply(d)).collect())
}

/// `Δ[Θ]`, the union over the members of `theta`.
pub fn delta_apply_set(t: &TransformerPair, theta: &[Equation]) -> Vec<Formula> {
    dedup(theta.iter().flat_map(|e| delta_apply(t, e)).collect())
}

/// Core elements `a != b` identified by `τ[Δ(x, y)]`, or `a == b` separated
/// by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alg4Witness {
    pub algebra: usize,
    pub a: u32,
    pub b: u32,
}

/// Checks that `τ[Δ(x, y)]` holds at `(a, b)` exactly when `a = b`, for all
/// core pairs of all members.
pub fn check_alg4(k: &[ExpandedAlgebra], t: &TransformerPair) -> Result<Option<Alg4Witness>> {
    let eqs = tau_apply_set(t, &delta_apply(t, &Equation::new(Formula::Atom(0), Formula::Atom(1))));
    for (i, ea) in k.iter().enumerate() {
        let alg = ea.alg();
        let progs = eqs
            .iter()
            .map(|e| Ok((alg.compile(&e.lhs)?, alg.compile(&e.rhs)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut stack = Vec::new();
        for &a in ea.core() {
            for &b in ea.core() {
                let h = [a, b];
                let holds = progs.iter().all(|(l, r)| l.eval(alg, &h, &mut stack) == r.eval(alg, &h, &mut stack));
                if holds != (a == b) {
                    return Ok(Some(Alg4Witness { algebra: i, a, b }));
                }
            }
        }
    }
    Ok(None)
}

/// A formula for which `φ ⊣⊢ Δ[τ(φ)]` fails in at least one direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alg3Failure {
    pub formula: Formula,
    /// `φ ⊢ Δ[τ(φ)]`.
    pub forward: bool,
    /// `Δ[τ(φ)] ⊢ φ`.
    pub backward: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alg3Report {
    pub checked: usize,
    pub failures: Vec<Alg3Failure>,
}

impl Alg3Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_alg3(oracle: &dyn ConsequenceOracle, t: &TransformerPair, corpus: &[Formula]) -> Result<Alg3Report> {
    let mut report = Alg3Report::default();
    for f in corpus {
        let back = delta_apply_set(t, &tau_apply(t, f));
        let mut forward = true;
        for d in &back {
            if !oracle.entails(core::slice::from_ref(f), d)? {
                forward = false;
                break;
            }
        }
        let backward = oracle.entails(&back, f)?;
        report.checked += 1;
        if !(forward && backward) {
            report.failures.push(Alg3Failure { formula: f.clone(), forward, backward });
        }
    }
    Ok(report)
}

/// How a single case of [`check_alg1_sampled`] came out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alg1Class {
    Agree,
    /// The logic refutes but the finite family does not: the family is too
    /// small to witness the refutation.
    KTooSmall,
    /// The logic proves but the family refutes.
    GenuineFailure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alg1Case {
    pub logic: bool,
    pub algebraic: bool,
    pub class: Alg1Class,
    pub witness: Option<CoreWitness>,
}

/// `τ[Γ] ⊨ᶜ_K τ(φ)`: every equation of `τ(φ)` is core-entailed.
pub fn tau_entails(k: &[ExpandedAlgebra], t: &TransformerPair, gamma: &[Formula], phi: &Formula) -> Result<Option<CoreWitness>> {
    let theta = tau_apply_set(t, gamma);
    for e in tau_apply(t, phi) {
        if let Some(w) = core_entails(k, &theta, &e)?.witness() {
            return Ok(Some(w.clone()));
        }
    }
    Ok(None)
}

/// Compares `Γ ⊢ φ` with `τ[Γ] ⊨ᶜ_K τ(φ)` case by case.
pub fn check_alg1_sampled(
    oracle: &dyn ConsequenceOracle,
    k: &[ExpandedAlgebra],
    t: &TransformerPair,
    cases: &[(Vec<Formula>, Formula)],
) -> Result<Vec<Alg1Case>> {
    cases
        .iter()
        .map(|(gamma, phi)| {
            let logic = oracle.entails(gamma, phi)?;
            let witness = tau_entails(k, t, gamma, phi)?;
            let algebraic = witness.is_none();
            let class = match (logic, algebraic) {
                (l, a) if l == a => Alg1Class::Agree,
                (false, true) => Alg1Class::KTooSmall,
                _ => Alg1Class::GenuineFailure,
            };
            Ok(Alg1Case { logic, algebraic, class, witness })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessReport {
    /// `Δ₀(x, y) ⊢ Δ₁(x, y)` and the converse.
    pub delta_forward: bool,
    pub delta_backward: bool,
    /// Corpus formulas on which `τ₀(φ)` and `τ₁(φ)` are not core-equivalent
    /// over the family.
    pub tau_mismatches: Vec<(Formula, CoreWitness)>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.delta_forward && self.delta_backward && self.tau_mismatches.is_empty()
    }
}

/// Two pairs witnessing the same algebraization must agree: `Δ₀ ⊣⊢ Δ₁` on
/// fresh atoms and `τ₀(φ) ≡ᶜ_K τ₁(φ)` on the corpus.
pub fn cross_check_uniqueness(
    t0: &TransformerPair,
    t1: &TransformerPair,
    oracle: &dyn ConsequenceOracle,
    k: &[ExpandedAlgebra],
    corpus: &[Formula],
) -> Result<UniquenessReport> {
    let xy = Equation::new(Formula::Atom(0), Formula::Atom(1));
    let (d0, d1) = (delta_apply(t0, &xy), delta_apply(t1, &xy));
    let all = |from: &[Formula], to: &[Formula]| -> Result<bool> {
        for f in to {
            if !oracle.entails(from, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let delta_forward = all(&d0, &d1)?;
    let delta_backward = all(&d1, &d0)?;
    let mut tau_mismatches = Vec::new();
    for f in corpus {
        let (e0, e1) = (tau_apply(t0, f), tau_apply(t1, f));
        let mut found = None;
        'dirs: for (from, to) in [(&e0, &e1), (&e1, &e0)] {
            for e in to.iter() {
                if let Some(w) = core_entails(k, from, e)?.witness() {
                    found = Some(w.clone());
                    break 'dirs;
                }
            }
        }
        if let Some(w) = found {
            tau_mismatches.push((f.clone(), w));
        }
    }
    Ok(UniquenessReport { delta_forward, delta_backward, tau_mismatches })
}

/// The univariate `or`-free formulas, up to intuitionistic equivalence, that
/// a one-variable core definition `ρ(x) ≈ ⊥→⊥` could use.
pub const UNIVARIATE_CANDIDATES: [&str; 6] = ["bot -> bot", "~~p0", "~~p0 -> p0", "p0", "~p0", "bot"];

pub fn univariate_candidates() -> Vec<Formula> {
    UNIVARIATE_CANDIDATES.iter().map(|s| parse(s, &Signature::int()).expect("candidate parses")).collect()
}

/// Why a candidate core definition cannot work for the intuitionistic logic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayOutcome {
    /// `ρ(p)` is not valid, so atoms would fall outside the defined core.
    Refuted(KripkeCountermodel),
    /// `ρ` is a theorem and the defined core is the whole universe of every
    /// member checked.
    TrivialCore,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayEntry {
    pub rho: Formula,
    /// `None` when neither outcome could be established.
    pub outcome: Option<ReplayOutcome>,
}

/// Runs every candidate of [`UNIVARIATE_CANDIDATES`] through the Kripke
/// countermodel search and, when that finds nothing, checks that the
/// defined core is everything on each algebra of `k`.
pub fn inqi_replay(k: &[FiniteAlgebra], bounds: SearchBounds) -> Result<Vec<ReplayEntry>> {
    let mut out = Vec::new();
    for rho in univariate_candidates() {
        let outcome = match inqi_countermodel_search(&rho, bounds)? {
            Some(cm) => Some(ReplayOutcome::Refuted(cm)),
            None => {
                let sigma = [Equation::new(rho.clone(), Formula::top())];
                let mut trivial = true;
                for alg in k {
                    if sigma_core(alg, &sigma)?.len() != alg.size() {
                        trivial = false;
                        break;
                    }
                }
                trivial.then_some(ReplayOutcome::TrivialCore)
            }
        };
        out.push(ReplayEntry { rho, outcome });
    }
    Ok(out)
}

/// All assignments `atoms -> core` as maps; used by tests and reports.
pub fn core_assignments(ea: &ExpandedAlgebra, atoms: &[u32]) -> Vec<BTreeMap<u32, u32>> {
    let mut out = vec![BTreeMap::new()];
    for &a in atoms {
        let mut next = Vec::with_capacity(out.len() * ea.core().len());
        for m in &out {
            for &v in ea.core() {
                let mut m2 = m.clone();
                m2.insert(a, v);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::chain;
    use crate::heyting::{medvedev_algebra, medvedev_tensor_algebra, regular_core, upset_algebra, FinitePoset};
    use crate::proofsys::InqbOracle;
    use crate::team::TeamChoice;

    fn f(s: &str) -> Formula {
        parse(s, &Signature::inq()).unwrap()
    }

    fn medvedev_family(max_s: usize) -> Vec<ExpandedAlgebra> {
        (1..=max_s).map(|s| regular_core(&medvedev_algebra(s).unwrap()).unwrap()).collect()
    }

    #[test]
    fn inqb_pair_instantiation() {
        let t = TransformerPair::inqb();
        assert_eq!(tau_apply(&t, &f("p0 & p1")), vec![Equation::new(f("p0 & p1"), f("bot -> bot"))]);
        assert_eq!(delta_apply(&t, &Equation::new(f("p0"), f("p1"))), vec![f("(p0 -> p1) & (p1 -> p0)")]);
        let parsed = TransformerPair::parse(&["_phi ~ bot -> bot"], &["_x <-> _y"], &Signature::int()).unwrap();
        assert_eq!(parsed, t);
        assert!(TransformerPair::parse(&["_phi ~ _x"], &[], &Signature::int()).is_err());
    }

    #[test]
    fn alg4_on_medvedev_and_degenerate_pair() {
        let t = TransformerPair::inqb();
        assert_eq!(check_alg4(&medvedev_family(3), &t).unwrap(), None);
        assert_eq!(check_alg4(&[], &t).unwrap(), None);
        let weak = TransformerPair::parse(&["_phi ~ bot -> bot"], &["_x"], &Signature::int()).unwrap();
        let two = ExpandedAlgebra::new(chain(2), &[0, 1]).unwrap();
        let w = check_alg4(&[two], &weak).unwrap().unwrap();
        assert_eq!((w.a, w.b), (0, 0));
        let tensor = regular_core(&medvedev_tensor_algebra(2).unwrap()).unwrap();
        assert_eq!(check_alg4(&[tensor], &t).unwrap(), None);
    }

    #[test]
    fn alg3_examples() {
        let t = TransformerPair::inqb();
        let r = check_alg3(&InqbOracle, &t, &[f("p0"), f("p0 | p1"), f("p0 * p1")]).unwrap();
        assert!(r.passed());
        let broken = TransformerPair::parse(&["_phi ~ bot"], &["_x <-> _y"], &Signature::int()).unwrap();
        let r = check_alg3(&InqbOracle, &broken, &[f("bot -> bot")]).unwrap();
        assert_eq!(r.failures.len(), 1);
    }

    #[test]
    fn alg1_cases() {
        let k = medvedev_family(2);
        let split = f("(p0 -> p1 | p2) -> (p0 -> p1) | (p0 -> p2)");
        let bad = f("((p1 | p2) -> p1 | p2) -> ((p1 | p2) -> p1) | ((p1 | p2) -> p2)");
        let cases = vec![
            (vec![], split),
            (vec![], bad),
            (vec![f("p0")], f("p0 | p1")),
            (vec![f("p0 | p1")], f("p0")),
        ];
        let r = check_alg1_sampled(&InqbOracle, &k, &TransformerPair::inqb(), &cases).unwrap();
        let got: Vec<_> = r.iter().map(|c| (c.logic, c.algebraic, c.class)).collect();
        assert_eq!(
            got,
            vec![
                (true, true, Alg1Class::Agree),
                (false, false, Alg1Class::Agree),
                (true, true, Alg1Class::Agree),
                (false, false, Alg1Class::Agree),
            ]
        );
        assert!(r[1].witness.is_some());
    }

    #[test]
    fn uniqueness() {
        let t0 = TransformerPair::inqb();
        let t1 = TransformerPair::parse(&["_phi & (bot -> bot) ~ bot -> bot"], &["_x -> _y", "_y -> _x"], &Signature::int())
            .unwrap();
        let k = medvedev_family(3);
        let corpus = [f("p0"), f("p0 | ~p0"), f("p0 -> p1"), f("~~p0")];
        assert!(cross_check_uniqueness(&t0, &t0, &InqbOracle, &k, &corpus).unwrap().passed());
        assert!(cross_check_uniqueness(&t0, &t1, &InqbOracle, &k, &corpus).unwrap().passed());
    }

    #[test]
    fn intuitionistic_replay() {
        let k: Vec<FiniteAlgebra> = (1..=3)
            .map(|n| upset_algebra(&FinitePoset::chain(n).unwrap()).unwrap().into_alg())
            .collect();
        let bounds = SearchBounds { frame_size: 2, team_choice: TeamChoice::All };
        let r = inqi_replay(&k, bounds).unwrap();
        assert_eq!(r[0].outcome, Some(ReplayOutcome::TrivialCore));
        for e in &r[1..] {
            assert!(matches!(e.outcome, Some(ReplayOutcome::Refuted(_))), "{}", e.rho);
        }
    }

    #[test]
    fn assignments_enumerate_core_only() {
        let ea = ExpandedAlgebra::new(chain(3), &[0, 2]).unwrap();
        assert_eq!(core_assignments(&ea, &[0, 1]).len(), 4);
    }
}
