//! The acceptance batteries, shared by the `suite` command and the
//! `acceptance` test target.

pub mod soundness;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use weaklog_core::algebra::{FiniteAlgebra, DEFAULT_PRODUCT_CAP};
use weaklog_core::algz::{check_alg3, check_alg4, TransformerPair};
use weaklog_core::bimatrix::{bimatrix_entails, export_horn, leibniz_partition, leibniz_reduce, Bimatrix};
use weaklog_core::expanded::{check_preservation, core_valid, ClassOp, ExpandedAlgebra, QuasiEquation};
use weaklog_core::heyting::{
    medvedev_algebra, medvedev_tensor_algebra, posets_up_to_iso, regular_core, upset_algebra, HeytingAlgebra,
    IpcChecker, DEFAULT_FRAME_BOUND,
};
use weaklog_core::proofsys::{dnf, fixpoint_iterate, AxiomSystem, InqbOracle, SystemName};
use weaklog_core::syntax::{formulas_by_depth, parse, Connective, Equation, Formula, FormulaShape, Signature, Substitution};
use weaklog_core::team::{inqb_entails, inqi_countermodel_search, kripke_models, SearchBounds, TeamChoice, TeamSpace};

use crate::oracle::{naive_core_valid, translation_types, NaiveTeamModel};
use soundness::{check_schema, classes, mp_sampling, Classical, Kripke};

pub const CRITERIA: usize = 10;

/// Settings shared by the sampled criteria.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig { seed: 0x5eed }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl CriterionReport {
    /// `PASS`/`FAIL` line as printed by the suite.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "team support vectors",
        2 => "uniform substitution failure",
        3 => "axiom soundness",
        4 => "normal form correctness",
        5 => "Medvedev cross-validation",
        6 => "algebraizability harness",
        7 => "non-algebraizability replay",
        8 => "Leibniz reduction",
        9 => "preservation",
        10 => "Horn export",
        _ => "unknown",
    }
}

/// Runs criterion `id` (1-based).
pub fn run_one(id: usize, cfg: &SuiteConfig) -> CriterionReport {
    let start = Instant::now();
    let outcome = match id {
        1 => team_vectors(),
        2 => substitution_failure(),
        3 => axiom_soundness(cfg.seed),
        4 => normal_forms(),
        5 => medvedev_cross_validation(),
        6 => algebraizability(),
        7 => replay(),
        8 => leibniz(cfg.seed),
        9 => preservation(cfg.seed),
        10 => horn_export(),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionReport { id, title: title(id), passed, detail, elapsed: start.elapsed() }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    (1..=CRITERIA).map(|id| run_one(id, cfg)).collect()
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(text: &str) -> Formula {
    parse(text, &Signature::inq()).expect("built-in formula parses")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// worlds a = {p, q}, b = {p}, c = {q}, d = {}; world index = valuation mask
fn team_vectors() -> Outcome {
    let (a, b, _c, d) = (0b11u32, 0b01u32, 0b10u32, 0b00u32);
    let space = TeamSpace::new(2).map_err(err)?;
    let naive = NaiveTeamModel::full(2);
    let team = |ws: &[u32]| ws.iter().fold(0u32, |t, w| t | 1 << w);
    let cases = [
        (vec![b, d], "~~(p0 | ~p0)", true),
        (vec![b, d], "p0 | ~p0", false),
        (vec![a, b], "p0", true),
    ];
    for (ws, text, expect) in &cases {
        let phi = f(text);
        let fast = space.denote(&phi).map_err(err)?.contains(team(ws));
        let idx: Vec<usize> = ws.iter().map(|&w| w as usize).collect();
        let slow = naive.supports(&idx, &phi);
        ensure(fast == *expect && slow == *expect, || {
            format!("{text} on {ws:?}: bitset {fast}, naive {slow}, expected {expect}")
        })?;
    }
    Ok(format!("{} support facts match on both evaluators", cases.len()))
}

fn substitution_failure() -> Outcome {
    let split = f("(p0 -> p1 | p2) -> (p0 -> p1) | (p0 -> p2)");
    if let Some(ct) = inqb_entails(&[], &split).map_err(err)? {
        return Err(format!("split axiom refuted by {:?}", ct.world_strings()));
    }
    let inst = Substitution::single(0, f("p1 | p2")).apply(&split);
    match inqb_entails(&[], &inst).map_err(err)? {
        None => Err(format!("{inst} was not refuted")),
        Some(ct) => {
            let mut worlds: Vec<u32> = ct.worlds();
            worlds.sort_unstable();
            let naive = NaiveTeamModel::full(ct.atoms.len() as u32);
            let idx: Vec<usize> = worlds.iter().map(|&w| w as usize).collect();
            let renamed = Substitution::from_pairs(ct.atoms.iter().enumerate().map(|(i, &a)| (a, Formula::atom(i as u32))));
            ensure(!naive.supports(&idx, &renamed.apply(&inst)), || "counter-team supports the instance".into())?;
            Ok(format!("split axiom valid; instance refuted by team {{{}}}", ct.world_strings().join(",")))
        }
    }
}

fn axiom_soundness(seed: u64) -> Outcome {
    let int = vec![Connective::And, Connective::Or, Connective::Imp];
    let mut inq = int.clone();
    inq.push(Connective::Tensor);
    let leaves = FormulaShape::int(3).leaves();
    let mut lines = Vec::new();

    let classical = Classical::new();
    for (sys, conns) in [(SystemName::InqB, &int), (SystemName::InqBt, &inq)] {
        let cls = classes(&classical, &leaves, conns, 2);
        let mut tuples = 0u64;
        for (label, schema) in AxiomSystem::new(sys).schemas() {
            let out = check_schema(&classical, label, schema, &cls, true);
            tuples += out.tuples;
            if let Some(cx) = out.counterexample {
                return Err(format!("{sys} {label}: invalid instance {cx}"));
            }
        }
        lines.push(format!("{sys}: {}+{} classes, {tuples} tuples", cls.any.len(), cls.standard.len()));
    }

    let models = kripke_models(3, 3).map_err(err)?;
    for (sys, conns) in [(SystemName::InqI, &int), (SystemName::InqIt, &inq)] {
        let system = AxiomSystem::new(sys);
        let bad = models.par_iter().find_map_first(|m| {
            let d = Kripke { model: m };
            let cls = classes(&d, &leaves, conns, 2);
            system
                .schemas()
                .iter()
                .find_map(|(label, schema)| check_schema(&d, label, schema, &cls, false).counterexample.map(|cx| (label.clone(), cx)))
        });
        if let Some((label, cx)) = bad {
            return Err(format!("{sys} {label}: Kripke countermodel to {cx}"));
        }
        lines.push(format!("{sys}: {} models clean", models.len()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = TeamSpace::new(3).map_err(err)?;
    let classical_valid = |g: &Formula| space.denote(g).map(|p| space.is_valid(&p)).unwrap_or(false);
    let r = mp_sampling(&mut rng, &AxiomSystem::new(SystemName::InqBt), &inq, &classical_valid, 1000);
    ensure(r.instances == 1000 && r.failures.is_empty(), || {
        format!("classical MP: {} instances, failures {:?}", r.instances, r.failures.first())
    })?;
    let kripke_valid = |g: &Formula| {
        models.iter().all(|m| m.denote(g).map(|s| s >> m.full_team() & 1 == 1).unwrap_or(false))
    };
    let r = mp_sampling(&mut rng, &AxiomSystem::new(SystemName::InqIt), &inq, &kripke_valid, 1000);
    ensure(r.instances == 1000 && r.failures.is_empty(), || {
        format!("Kripke MP: {} instances, failures {:?}", r.instances, r.failures.first())
    })?;
    lines.push("MP preserved on 1000+1000 samples".into());
    Ok(lines.join("; "))
}

fn normal_forms() -> Outcome {
    let space = TeamSpace::new(3).map_err(err)?;
    let mut lines = Vec::new();
    for shape in [FormulaShape::int(3), FormulaShape::inq(3)] {
        let table = shape.size_table(9);
        let mut count = 0usize;
        let mut widest = 0usize;
        for layer in &table {
            let res: Result<usize, String> = layer
                .par_iter()
                .map(|phi| {
                    let ds = dnf(phi).map_err(|e| format!("{phi}: {e}"))?;
                    if let Some(bad) = ds.iter().find(|d| !d.is_or_free()) {
                        return Err(format!("{phi}: disjunct {bad} contains or"));
                    }
                    let joined = ds.iter().try_fold(space.empty(), |acc, d| space.denote(d).map(|p| space.or(&acc, &p)));
                    let joined = joined.map_err(err)?;
                    if joined != space.denote(phi).map_err(err)? {
                        return Err(format!("{phi}: normal form is not equivalent"));
                    }
                    Ok(ds.len())
                })
                .try_reduce(|| 0, |a, b| Ok(a.max(b)));
            widest = widest.max(res?);
            count += layer.len();
        }
        lines.push(format!("{count} formulas with {:?}, at most {widest} disjuncts", shape.binary));
    }
    Ok(lines.join("; "))
}

fn regular_medvedev(max_s: usize) -> Result<Vec<ExpandedAlgebra>, String> {
    (1..=max_s).map(|s| medvedev_algebra(s).and_then(|h| regular_core(&h)).map_err(err)).collect()
}

fn medvedev_cross_validation() -> Outcome {
    let k = regular_medvedev(3)?;
    let corpus = formulas_by_depth(&FormulaShape::int(2), 2);
    let space = TeamSpace::new(2).map_err(err)?;
    let mut team_valid = 0usize;
    for phi in &corpus {
        let valid = space.is_valid(&space.denote(phi).map_err(err)?);
        let mut core_verdicts = Vec::new();
        for ea in &k {
            let top = ea.alg().eval(&Formula::top(), &[]).map_err(err)?;
            let q = QuasiEquation::new(vec![], Equation::new(phi.clone(), Formula::top()));
            let fast = core_valid(ea, &q).map_err(err)?.is_none();
            let slow = naive_core_valid(ea.alg(), ea.core(), phi, top);
            ensure(fast == slow, || format!("{phi}: core evaluators disagree on |A| = {}", ea.size()))?;
            core_verdicts.push(fast);
        }
        if valid {
            team_valid += 1;
            ensure(core_verdicts.iter().all(|&v| v), || format!("{phi} is team-valid but core-refuted"))?;
        } else {
            ensure(core_verdicts.iter().any(|&v| !v), || format!("{phi} is team-refuted but core-valid everywhere"))?;
        }
    }
    Ok(format!("{} formulas ({team_valid} valid) agree on {} algebras", corpus.len(), k.len()))
}

fn upset_family(max_points: usize) -> Result<Vec<ExpandedAlgebra>, String> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        for p in posets_up_to_iso(n) {
            out.push(upset_algebra(&p).and_then(|h| regular_core(&h)).map_err(err)?);
        }
    }
    Ok(out)
}

fn algebraizability() -> Outcome {
    let t = TransformerPair::inqb();
    let mut k = regular_medvedev(4)?;
    k.extend(upset_family(5)?);
    ensure(k.iter().all(|ea| ea.size() <= 200), || "an algebra exceeds 200 elements".into())?;
    if let Some(w) = check_alg4(&k, &t).map_err(err)? {
        return Err(format!("Alg4 fails on algebra {} at ({}, {})", w.algebra, w.a, w.b));
    }
    let corpus = formulas_by_depth(&FormulaShape::int(2), 2);
    let r = check_alg3(&InqbOracle, &t, &corpus).map_err(err)?;
    ensure(r.passed(), || format!("Alg3 fails on {}", r.failures[0].formula))?;

    let kt = (1..=4)
        .map(|s| medvedev_tensor_algebra(s).and_then(|h| regular_core(&h)).map_err(err))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(w) = check_alg4(&kt, &t).map_err(err)? {
        return Err(format!("tensor Alg4 fails on algebra {} at ({}, {})", w.algebra, w.a, w.b));
    }
    let corpus_t = formulas_by_depth(&FormulaShape::inq(2), 2);
    let rt = check_alg3(&InqbOracle, &t, &corpus_t).map_err(err)?;
    ensure(rt.passed(), || format!("tensor Alg3 fails on {}", rt.failures[0].formula))?;
    Ok(format!(
        "Alg4 on {} algebras, Alg3 on {} formulas; with tensor: Alg4 on {} algebras (sizes up to {}), Alg3 on {} formulas",
        k.len(),
        r.checked,
        kt.len(),
        kt.iter().map(ExpandedAlgebra::size).max().unwrap_or(0),
        rt.checked
    ))
}

fn replay() -> Outcome {
    let bounds = SearchBounds { frame_size: 2, team_choice: TeamChoice::All };
    let rhos = ["~~p0", "~~p0 -> p0", "p0", "~p0", "bot"];
    let checker = IpcChecker::new(DEFAULT_FRAME_BOUND).map_err(err)?;
    let mut notes = Vec::new();
    for text in rhos {
        let rho = f(text);
        let cm = inqi_countermodel_search(&rho, bounds).map_err(err)?;
        let cm = cm.ok_or_else(|| format!("no countermodel to {text} at frame size 2"))?;
        let fx = fixpoint_iterate(&rho, 8, &checker).map_err(err)?;
        let expected_period = if text == "~p0" { 2 } else { 1 };
        ensure(fx.period == expected_period, || format!("{text}: period {} after {}", fx.period, fx.n))?;
        let again = Substitution::single(0, fx.formula.clone()).apply(&rho);
        let again = if fx.period == 2 { Substitution::single(0, again).apply(&rho) } else { again };
        ensure(checker.equiv(&again, &fx.formula).map_err(err)?.is_equivalent(), || {
            format!("{text}: {} is not stable", fx.formula)
        })?;
        notes.push(format!("{text}: {}-point countermodel, period {} at n={}", cm.model.poset().len(), fx.period, fx.n));
    }
    Ok(notes.join("; "))
}

fn random_int_algebra(rng: &mut ChaCha8Rng, n: usize) -> FiniteAlgebra {
    let bot = rng.gen_range(0..n as u32);
    let sig = Signature::int();
    let mut tables: Vec<Vec<u32>> = Vec::new();
    for (c, ar) in sig.connectives() {
        let len = n.pow(*ar as u32);
        tables.push(if *c == Connective::Bot { vec![bot] } else { (0..len).map(|_| rng.gen_range(0..n as u32)).collect() });
    }
    FiniteAlgebra::new(sig, n, tables).expect("random tables are in range")
}

fn subset(mask: u32, n: usize) -> Vec<u32> {
    (0..n as u32).filter(|i| mask >> i & 1 == 1).collect()
}

fn leibniz_matches(m: &Bimatrix) -> Result<(), String> {
    let p = leibniz_partition(m);
    let rel = translation_types(m.alg(), m.truth(), m.core(), 3);
    for a in 0..m.size() {
        for b in 0..m.size() {
            ensure(p.related(a as u32, b as u32) == rel[a][b], || {
                format!("size {} truth {:?} core {:?}: ({a}, {b}) disagree", m.size(), m.truth(), m.core())
            })?;
        }
    }
    Ok(())
}

fn reduction_sound(m: &Bimatrix, pairs: &[(Formula, Formula)]) -> Result<(), String> {
    let (r, _) = leibniz_reduce(m).map_err(err)?;
    let (rr, _) = leibniz_reduce(&r).map_err(err)?;
    ensure(rr == r, || "reduction is not idempotent".into())?;
    for (g, phi) in pairs {
        let before = bimatrix_entails(std::slice::from_ref(m), std::slice::from_ref(g), phi).map_err(err)?.is_none();
        let after = bimatrix_entails(std::slice::from_ref(&r), std::slice::from_ref(g), phi).map_err(err)?.is_none();
        ensure(before == after, || format!("{g} |- {phi}: {before} before reduction, {after} after"))?;
    }
    Ok(())
}

fn leibniz(seed: u64) -> Outcome {
    let corpus = formulas_by_depth(&FormulaShape::int(2), 1);
    let pairs: Vec<(Formula, Formula)> =
        corpus.iter().flat_map(|g| corpus.iter().map(move |p| (g.clone(), p.clone()))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4usize);
        let alg = random_int_algebra(&mut rng, n);
        let truth = subset(rng.gen_range(0..1 << n), n);
        let core = subset(rng.gen_range(1..1 << n), n);
        let m = Bimatrix::new(alg, &truth, &core).map_err(err)?;
        leibniz_matches(&m)?;
        reduction_sound(&m, &pairs)?;
    }
    let mut heyting: Vec<HeytingAlgebra> = Vec::new();
    for n in 1..=3 {
        for p in posets_up_to_iso(n) {
            let h = upset_algebra(&p).map_err(err)?;
            if h.size() <= 4 {
                heyting.push(h);
            }
        }
    }
    let mut exhaustive = 0usize;
    for h in &heyting {
        let n = h.size();
        for tm in 0..1u32 << n {
            for cm in 1..1u32 << n {
                let m = Bimatrix::new(h.alg().clone(), &subset(tm, n), &subset(cm, n)).map_err(err)?;
                leibniz_matches(&m)?;
                exhaustive += 1;
            }
        }
    }
    Ok(format!(
        "100 random bimatrices plus {exhaustive} Heyting bimatrices match; reduction checked on {} pairs each",
        pairs.len()
    ))
}

fn sigma_candidates() -> Vec<Vec<Equation>> {
    let eq = |l: &str, r: &str| Equation::new(f(l), f(r));
    vec![
        vec![eq("p0", "~~p0")],
        vec![eq("~~p0", "bot -> bot")],
        vec![eq("p0", "p0")],
        vec![eq("p0 | ~p0", "bot -> bot")],
        vec![eq("p0", "~~p0"), eq("p0 | ~p0", "bot -> bot")],
    ]
}

fn random_equation(rng: &mut ChaCha8Rng) -> Equation {
    let conns = [Connective::And, Connective::Or, Connective::Imp];
    let l = soundness::random_formula(rng, 2, &conns, 2);
    let r = if rng.gen_bool(0.5) { Formula::top() } else { soundness::random_formula(rng, 2, &conns, 2) };
    Equation::new(l, r)
}

fn preservation(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let posets: Vec<_> = (1..=3).flat_map(posets_up_to_iso).collect();
    let heyting = posets.iter().map(|p| upset_algebra(p).map_err(err)).collect::<Result<Vec<_>, _>>()?;
    let sigmas = sigma_candidates();
    let ambients: Vec<Vec<ExpandedAlgebra>> = sigmas
        .iter()
        .map(|s| heyting.iter().map(|h| ExpandedAlgebra::sigma_cored(h.alg().clone(), s).map_err(err)).collect())
        .collect::<Result<_, _>>()?;
    let mut checked = 0usize;
    let mut kept_valid = 0usize;
    for _ in 0..200 {
        let si = rng.gen_range(0..sigmas.len());
        let members = rng.gen_range(1..=2usize);
        let k: Vec<ExpandedAlgebra> = (0..members).map(|_| ambients[si].choose(&mut rng).expect("ambient").clone()).collect();
        let mut q = QuasiEquation::new(vec![], random_equation(&mut rng));
        for _ in 0..20 {
            let premises = (0..rng.gen_range(0..=1)).map(|_| random_equation(&mut rng)).collect();
            let cand = QuasiEquation::new(premises, random_equation(&mut rng));
            let valid = k.iter().map(|ea| core_valid(ea, &cand).map(|r| r.is_none())).collect::<Result<Vec<_>, _>>();
            q = cand;
            if valid.map_err(err)?.into_iter().all(|v| v) {
                kept_valid += 1;
                break;
            }
        }
        for op in [ClassOp::S, ClassOp::P, ClassOp::C] {
            let r = check_preservation(&k, &sigmas[si], &q, op, &ambients[si], DEFAULT_PRODUCT_CAP).map_err(err)?;
            checked += r.checked;
            if let Some(fail) = r.failures.first() {
                return Err(format!("{op:?} with Σ {:?} and q {:?}: {fail:?}", sigmas[si], q));
            }
        }
    }
    Ok(format!("200 instances ({kept_valid} with q valid on K), {checked} derived structures"))
}

/// The fixed corpus exported by the Horn criterion.
pub const HORN_CORPUS: &str = include_str!("../../golden/horn_corpus.txt");
pub const HORN_WEAK: &str = include_str!("../../golden/horn_weak.p");
pub const HORN_STANDARD: &str = include_str!("../../golden/horn_standard.p");

fn horn_export() -> Outcome {
    let pairs = crate::format::parse_pairs(HORN_CORPUS, &Signature::inq(), std::path::Path::new("horn_corpus.txt")).map_err(err)?;
    ensure(pairs.len() == 10, || format!("corpus has {} pairs", pairs.len()))?;
    for (weak, golden) in [(true, HORN_WEAK), (false, HORN_STANDARD)] {
        let got = export_horn(&pairs, weak);
        if got != golden {
            let line = got.lines().zip(golden.lines()).position(|(a, b)| a != b).unwrap_or(0) + 1;
            return Err(format!("{} export differs from golden at line {line}", if weak { "weak" } else { "standard" }));
        }
    }
    Ok("weak and standard exports byte-identical".into())
}

/// Plain-text report with one line per criterion and a summary line.
pub fn render(reports: &[CriterionReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{}", r.line());
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} criteria passed", reports.len());
    out
}
