//! Exhaustive validity of axiom-schema instances over a formula corpus.
//!
//! Validity of an instance only depends on the denotations of the formulas
//! substituted for its metavariables, and metavariables are chosen
//! independently. So the corpus is replaced by its set of denotations (one
//! representative formula each), computed level by level, and every tuple of
//! denotations is checked. A schema `A1 -> (A2 -> .. -> B)` is valid at the
//! full team iff the intersection of the antecedent support sets lies inside
//! the support set of `B`; antecedents are intersected as soon as their
//! metavariables are bound, and subterms with at most two metavariables are
//! tabulated up front.

use std::collections::HashMap;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use weaklog_core::proofsys::{AxiomSystem, METAVARIABLES};
use weaklog_core::syntax::{match_schema, Connective, Formula, Schema, Sort};
use weaklog_core::team::{KripkeTeamModel, Prop, TeamSpace};

pub trait Domain: Sync {
    type V: Copy + Eq + Hash + Send + Sync;
    fn leaf(&self, f: &Formula) -> Self::V;
    fn apply(&self, c: &Connective, a: Self::V, b: Self::V) -> Self::V;
    fn meet(&self, a: Self::V, b: Self::V) -> Self::V;
    fn included(&self, a: Self::V, b: Self::V) -> bool;
    /// Every team.
    fn everything(&self) -> Self::V;
}

/// Classical team semantics over three atoms: 256 teams in four words.
pub struct Classical {
    space: TeamSpace,
}

impl Classical {
    pub fn new() -> Classical {
        Classical { space: TeamSpace::new(3).expect("three atoms fit") }
    }

    fn to_prop(v: [u64; 4]) -> Prop {
        Prop::from_words(v.to_vec())
    }

    fn from_prop(p: &Prop) -> [u64; 4] {
        let mut out = [0u64; 4];
        out.copy_from_slice(p.words());
        out
    }
}

impl Default for Classical {
    fn default() -> Self {
        Classical::new()
    }
}

impl Domain for Classical {
    type V = [u64; 4];

    fn leaf(&self, f: &Formula) -> [u64; 4] {
        Classical::from_prop(&self.space.denote(f).expect("leaf over three atoms"))
    }

    fn apply(&self, c: &Connective, a: [u64; 4], b: [u64; 4]) -> [u64; 4] {
        let (pa, pb) = (Classical::to_prop(a), Classical::to_prop(b));
        let r = match c {
            Connective::And => self.space.and(&pa, &pb),
            Connective::Or => self.space.or(&pa, &pb),
            Connective::Imp => self.space.imp(&pa, &pb),
            Connective::Tensor => self.space.tensor(&pa, &pb),
            _ => panic!("no binary clause for `{c}`"),
        };
        Classical::from_prop(&r)
    }

    fn meet(&self, a: [u64; 4], b: [u64; 4]) -> [u64; 4] {
        [a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]]
    }

    fn included(&self, a: [u64; 4], b: [u64; 4]) -> bool {
        (a[0] & !b[0]) | (a[1] & !b[1]) | (a[2] & !b[2]) | (a[3] & !b[3]) == 0
    }

    fn everything(&self) -> [u64; 4] {
        [u64::MAX; 4]
    }
}

/// Kripke team semantics on one model; support sets are `u64`.
pub struct Kripke<'a> {
    pub model: &'a KripkeTeamModel,
}

impl Domain for Kripke<'_> {
    type V = u64;

    fn leaf(&self, f: &Formula) -> u64 {
        self.model.denote(f).expect("leaf within the valuation")
    }

    fn apply(&self, c: &Connective, a: u64, b: u64) -> u64 {
        match c {
            Connective::And => a & b,
            Connective::Or => a | b,
            Connective::Imp => self.model.imp(a, b),
            Connective::Tensor => self.model.tensor(a, b),
            _ => panic!("no binary clause for `{c}`"),
        }
    }

    fn meet(&self, a: u64, b: u64) -> u64 {
        a & b
    }

    fn included(&self, a: u64, b: u64) -> bool {
        a & !b == 0
    }

    fn everything(&self) -> u64 {
        self.model.team_mask()
    }
}

/// Denotation classes of a corpus, each with a representative formula.
#[derive(Clone, Debug)]
pub struct Classes<V> {
    pub any: Vec<(V, Formula)>,
    pub standard: Vec<(V, Formula)>,
}

fn grow<D: Domain>(d: &D, prev: &[(D::V, Formula)], conns: &[Connective]) -> Vec<(D::V, Formula)> {
    let mut index: HashMap<D::V, ()> = prev.iter().map(|(v, _)| (*v, ())).collect();
    let mut out = prev.to_vec();
    for c in conns {
        for (a, fa) in prev {
            for (b, fb) in prev {
                let v = d.apply(c, *a, *b);
                if index.insert(v, ()).is_none() {
                    out.push((v, Formula::App(c.clone(), vec![fa.clone(), fb.clone()])));
                }
            }
        }
    }
    out
}

/// Denotations of every formula built from `leaves` with at most `levels`
/// nested binary connectives; `standard` keeps only `or`-free ones.
pub fn classes<D: Domain>(d: &D, leaves: &[Formula], conns: &[Connective], levels: usize) -> Classes<D::V> {
    let mut seen = HashMap::new();
    let mut any = Vec::new();
    for f in leaves {
        let v = d.leaf(f);
        if seen.insert(v, ()).is_none() {
            any.push((v, f.clone()));
        }
    }
    let mut standard = any.clone();
    let std_conns: Vec<Connective> = conns.iter().filter(|c| **c != Connective::Or).cloned().collect();
    for _ in 0..levels {
        any = grow(d, &any, conns);
        standard = grow(d, &standard, &std_conns);
    }
    Classes { any, standard }
}

enum Node {
    Meta(usize),
    Table(usize),
    Op(Connective, Vec<Node>),
}

struct Table<V> {
    slots: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<V>,
}

struct Compiled<'c, V> {
    values: Vec<&'c [(V, Formula)]>,
    tables: Vec<Table<V>>,
    // antecedents grouped by the slot at which they become computable
    by_level: Vec<Vec<Node>>,
    consequent: Node,
}

fn direct<D: Domain>(d: &D, t: &Formula, slot_of: &HashMap<u32, usize>, assign: &[D::V]) -> D::V {
    match t {
        Formula::Atom(m) => assign[slot_of[m]],
        Formula::App(c, args) => match args.as_slice() {
            [] => d.leaf(t),
            [a, b] => d.apply(c, direct(d, a, slot_of, assign), direct(d, b, slot_of, assign)),
            _ => panic!("schema templates only use nullary and binary connectives"),
        },
    }
}

fn compile_node<'c, D: Domain>(
    d: &D,
    t: &Formula,
    slot_of: &HashMap<u32, usize>,
    values: &[&'c [(D::V, Formula)]],
    tables: &mut Vec<Table<D::V>>,
) -> Node {
    if let Formula::Atom(m) = t {
        return Node::Meta(slot_of[m]);
    }
    let mut slots: Vec<usize> = t.atoms().iter().map(|m| slot_of[m]).collect();
    slots.sort_unstable();
    if slots.len() <= 2 {
        let dims: Vec<usize> = slots.iter().map(|&s| values[s].len()).collect();
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let total: usize = dims.iter().product();
        let mut assign = vec![d.everything(); values.len()];
        let mut data = Vec::with_capacity(total);
        for flat in 0..total {
            for (i, &s) in slots.iter().enumerate() {
                assign[s] = values[s][(flat / strides[i]) % dims[i]].0;
            }
            data.push(direct(d, t, slot_of, &assign));
        }
        tables.push(Table { slots, strides, data });
        return Node::Table(tables.len() - 1);
    }
    match t {
        Formula::App(c, args) => {
            Node::Op(c.clone(), args.iter().map(|a| compile_node(d, a, slot_of, values, tables)).collect())
        }
        Formula::Atom(_) => unreachable!(),
    }
}

fn level_of(t: &Formula, slot_of: &HashMap<u32, usize>) -> usize {
    t.atoms().iter().map(|m| slot_of[m]).max().unwrap_or(0)
}

impl<V: Copy> Compiled<'_, V> {
    fn eval<D: Domain<V = V>>(&self, d: &D, n: &Node, idx: &[usize]) -> V {
        match n {
            Node::Meta(s) => self.values[*s][idx[*s]].0,
            Node::Table(t) => {
                let t = &self.tables[*t];
                let at: usize = t.slots.iter().zip(&t.strides).map(|(&s, &st)| idx[s] * st).sum();
                t.data[at]
            }
            Node::Op(c, args) => d.apply(c, self.eval(d, &args[0], idx), self.eval(d, &args[1], idx)),
        }
    }

    // (data, base, stride) for nodes readable by a flat scan over the last slot
    fn scan<'s>(&'s self, n: &Node, idx: &[usize], last: usize) -> Option<(&'s [V], usize, usize)> {
        match n {
            Node::Meta(s) if *s == last => None,
            Node::Table(t) => {
                let t = &self.tables[*t];
                let mut base = 0;
                let mut stride = 0;
                for (&s, &st) in t.slots.iter().zip(&t.strides) {
                    if s == last {
                        stride = st;
                    } else {
                        base += idx[s] * st;
                    }
                }
                Some((&t.data, base, stride))
            }
            _ => None,
        }
    }
}

/// Outcome of checking one schema: number of tuples examined and the first
/// failing instance (as representatives), if any.
#[derive(Clone, Debug)]
pub struct SchemaOutcome {
    pub label: String,
    pub tuples: u64,
    pub counterexample: Option<Formula>,
}

/// Checks every instance of `schema` whose metavariables range over the
/// classes (standard classes for `Standard` metavariables). With
/// `peel_all`, every nested antecedent is intersected; otherwise only the
/// outermost implication is split.
pub fn check_schema<D: Domain>(d: &D, label: &str, schema: &Schema, classes: &Classes<D::V>, peel_all: bool) -> SchemaOutcome {
    let metas: Vec<u32> = schema.metavariables().collect();
    let slot_of: HashMap<u32, usize> = metas.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let values: Vec<&[(D::V, Formula)]> = metas
        .iter()
        .map(|&m| match schema.sort(m) {
            Sort::Any => classes.any.as_slice(),
            Sort::Standard => classes.standard.as_slice(),
        })
        .collect();
    let mut antecedents = Vec::new();
    let mut rest = schema.template().clone();
    while let Some((a, b)) = rest.as_implication().map(|(a, b)| (a.clone(), b.clone())) {
        antecedents.push(a);
        rest = b;
        if !peel_all {
            break;
        }
    }
    let k = metas.len().max(1);
    let mut tables = Vec::new();
    let mut by_level: Vec<Vec<Node>> = (0..k).map(|_| Vec::new()).collect();
    for a in &antecedents {
        let lvl = level_of(a, &slot_of);
        by_level[lvl].push(compile_node(d, a, &slot_of, &values, &mut tables));
    }
    let consequent = compile_node(d, &rest, &slot_of, &values, &mut tables);
    let compiled = Compiled { values: values.clone(), tables, by_level, consequent };
    let tuples: u64 = values.iter().map(|v| v.len() as u64).product();

    let first = if metas.is_empty() {
        let acc = compiled.by_level[0].iter().fold(d.everything(), |acc, n| d.meet(acc, compiled.eval(d, n, &[])));
        (!d.included(acc, compiled.eval(d, &compiled.consequent, &[]))).then(Vec::new)
    } else {
        (0..values[0].len()).into_par_iter().find_map_first(|v0| {
            let mut idx = vec![0usize; k];
            idx[0] = v0;
            descend(d, &compiled, 0, d.everything(), &mut idx)
        })
    };
    let counterexample = first.map(|idx| {
        let assignment = metas.iter().enumerate().map(|(i, &m)| (m, values[i][idx[i]].1.clone())).collect();
        schema.instantiate(&assignment)
    });
    SchemaOutcome { label: label.to_string(), tuples, counterexample }
}

// idx[level] is already set by the caller
fn descend<D: Domain>(d: &D, c: &Compiled<'_, D::V>, level: usize, acc: D::V, idx: &mut Vec<usize>) -> Option<Vec<usize>> {
    let k = idx.len();
    let acc = c.by_level[level].iter().fold(acc, |a, n| d.meet(a, c.eval(d, n, idx)));
    if level + 1 == k {
        return (!d.included(acc, c.eval(d, &c.consequent, idx))).then(|| idx.clone());
    }
    let next = level + 1;
    if next + 1 == k {
        // innermost level: flat scans where possible
        let scans: Option<Vec<_>> = c.by_level[next]
            .iter()
            .chain(std::iter::once(&c.consequent))
            .map(|n| c.scan(n, idx, next).or_else(|| matches!(n, Node::Meta(s) if *s == next).then_some((&[][..], usize::MAX, 0))))
            .collect();
        if let Some(scans) = scans {
            let vals = c.values[next];
            let (ants, cons) = scans.split_at(scans.len() - 1);
            let read = |(data, base, stride): &(&[D::V], usize, usize), v: usize| {
                if *base == usize::MAX {
                    vals[v].0
                } else {
                    data[base + v * stride]
                }
            };
            for v in 0..vals.len() {
                let a = ants.iter().fold(acc, |a, s| d.meet(a, read(s, v)));
                if !d.included(a, read(&cons[0], v)) {
                    idx[next] = v;
                    return Some(idx.clone());
                }
            }
            return None;
        }
    }
    for v in 0..c.values[next].len() {
        idx[next] = v;
        if let Some(w) = descend(d, c, next, acc, idx) {
            return Some(w);
        }
    }
    None
}

/// Draws a random formula over `atoms` atoms with at most `depth` nested
/// binary connectives from `conns`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: u32, conns: &[Connective], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        let k = rng.gen_range(0..=atoms);
        return if k == atoms { Formula::bot() } else { Formula::atom(k) };
    }
    let c = conns.choose(rng).expect("nonempty connective list").clone();
    let a = random_formula(rng, atoms, conns, depth - 1);
    let b = random_formula(rng, atoms, conns, depth - 1);
    Formula::App(c, vec![a, b])
}

fn random_assignment<R: Rng>(rng: &mut R, schema: &Schema, conns: &[Connective], fixed: &std::collections::BTreeMap<u32, Formula>) -> std::collections::BTreeMap<u32, Formula> {
    let std_conns: Vec<Connective> = conns.iter().filter(|c| **c != Connective::Or).cloned().collect();
    let mut out = fixed.clone();
    for m in schema.metavariables() {
        out.entry(m).or_insert_with(|| match schema.sort(m) {
            Sort::Any => random_formula(rng, 3, conns, 2),
            Sort::Standard => random_formula(rng, 3, &std_conns, 2),
        });
    }
    out
}

/// Result of [`mp_sampling`].
#[derive(Clone, Debug, Default)]
pub struct MpReport {
    pub instances: usize,
    pub failures: Vec<(Formula, Formula)>,
}

/// Samples modus ponens steps `φ, φ -> ψ ⊢ ψ` where `φ` is a valid formula
/// from a growing pool (seeded with axiom instances) and `φ -> ψ` is an
/// axiom instance whose antecedent matches `φ`; checks that `ψ` is valid.
pub fn mp_sampling<R: Rng>(
    rng: &mut R,
    sys: &AxiomSystem,
    conns: &[Connective],
    valid: &(dyn Fn(&Formula) -> bool + Sync),
    wanted: usize,
) -> MpReport {
    let schemas = sys.schemas();
    let split: Vec<(String, Schema, Schema, Schema)> = schemas
        .iter()
        .filter_map(|(l, s)| {
            let (a, b) = s.template().as_implication()?;
            let names: Vec<(&str, Sort)> = METAVARIABLES.to_vec();
            Some((
                l.clone(),
                s.clone(),
                Schema::new(a.clone(), &names).ok()?,
                Schema::new(b.clone(), &names).ok()?,
            ))
        })
        .collect();
    let mut pool: Vec<Formula> = Vec::new();
    let mut report = MpReport::default();
    while pool.len() < 40 {
        let (_, s) = schemas.choose(rng).expect("axioms");
        let inst = s.instantiate(&random_assignment(rng, s, conns, &Default::default()));
        if !valid(&inst) {
            report.failures.push((Formula::top(), inst.clone()));
        }
        pool.push(inst);
    }
    let mut attempts = 0usize;
    while report.instances < wanted && attempts < wanted * 100 {
        attempts += 1;
        let phi = pool.choose(rng).expect("pool").clone();
        let candidates: Vec<_> = split
            .iter()
            .filter_map(|(l, s, ante, cons)| match_schema(ante, &phi).map(|m| (l, s, cons, m)))
            .collect();
        let Some((_, s, cons, m)) = candidates.choose(rng) else { continue };
        let assignment = random_assignment(rng, s, conns, m);
        let psi = cons.instantiate(&assignment);
        let major = Formula::imp(phi.clone(), psi.clone());
        report.instances += 1;
        if !valid(&major) || !valid(&psi) {
            report.failures.push((phi, psi));
            continue;
        }
        if psi.size() <= 60 {
            if pool.len() < 400 {
                pool.push(psi);
            } else {
                let i = rng.gen_range(0..pool.len());
                pool[i] = psi;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use weaklog_core::proofsys::SystemName;
    use weaklog_core::syntax::{parse, Signature};
    use weaklog_core::team::kripke_models;

    fn conns_int() -> Vec<Connective> {
        vec![Connective::And, Connective::Or, Connective::Imp]
    }

    fn leaves() -> Vec<Formula> {
        vec![Formula::atom(0), Formula::atom(1), Formula::atom(2), Formula::bot()]
    }

    #[test]
    fn class_counts_match_enumeration() {
        let d = Classical::new();
        let c = classes(&d, &leaves(), &conns_int(), 2);
        assert_eq!(c.any.len(), 215);
        assert_eq!(c.standard.len(), 91);
    }

    #[test]
    fn invalid_schema_is_caught_with_a_representative() {
        let d = Classical::new();
        let c = classes(&d, &leaves(), &conns_int(), 1);
        let names = METAVARIABLES.to_vec();
        let bad = Schema::parse("(_phi -> _psi) -> (_psi -> _phi)", &Signature::int(), &names).unwrap();
        let out = check_schema(&d, "bad", &bad, &c, true);
        let f = out.counterexample.unwrap();
        assert!(!TeamSpace::new(3).unwrap().is_valid(&TeamSpace::new(3).unwrap().denote(&f).unwrap()));
        let dne_any = Schema::parse("~~_phi -> _phi", &Signature::int(), &names).unwrap();
        assert!(check_schema(&d, "dne", &dne_any, &c, true).counterexample.is_some());
        let sys = AxiomSystem::new(SystemName::InqB);
        for (l, s) in sys.schemas() {
            assert!(check_schema(&d, l, s, &c, true).counterexample.is_none(), "{l}");
        }
    }

    #[test]
    fn kripke_engine_refutes_dne_and_accepts_axioms() {
        let models = kripke_models(2, 2).unwrap();
        let names = METAVARIABLES.to_vec();
        let dne = Schema::parse("~~_alpha -> _alpha", &Signature::int(), &names).unwrap();
        let lv = vec![Formula::atom(0), Formula::atom(1), Formula::bot()];
        let mut refuted = false;
        for m in &models {
            let d = Kripke { model: m };
            let c = classes(&d, &lv, &conns_int(), 1);
            refuted |= check_schema(&d, "dne", &dne, &c, false).counterexample.is_some();
            for (l, s) in AxiomSystem::new(SystemName::InqI).schemas() {
                assert!(check_schema(&d, l, s, &c, false).counterexample.is_none(), "{l}");
            }
        }
        assert!(refuted);
    }

    #[test]
    fn mp_samples_stay_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let space = TeamSpace::new(3).unwrap();
        let valid = |f: &Formula| space.is_valid(&space.denote(f).unwrap());
        let sys = AxiomSystem::new(SystemName::InqB);
        let r = mp_sampling(&mut rng, &sys, &conns_int(), &valid, 50);
        assert_eq!(r.instances, 50);
        assert!(r.failures.is_empty());
        let _ = parse("p0", &Signature::int());
    }
}
