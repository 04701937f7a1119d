//! Team semantics: classical support over all valuations of a few atoms and
//! intuitionistic support over finite Kripke models.
//!
//! A world is a valuation, encoded as a bitmask whose bit `i` says that
//! `p{i}` is true. A team is a set of worlds, encoded as a bitmask over world
//! indices. The support set of a formula is the set of teams supporting it,
//! stored as a bitset over team indices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::heyting::{bits, posets_up_to_iso, FinitePoset};
use crate::syntax::{Connective, Formula, Substitution};

/// Most atoms a classical team space can hold (16 worlds, 65536 teams).
pub const MAX_TEAM_ATOMS: u32 = 4;

/// Most points of a Kripke model (teams must fit a `u64` support set).
pub const MAX_KRIPKE_POINTS: usize = 6;

/// Set of teams over a fixed number of worlds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prop(Vec<u64>);

impl Prop {
    /// Wraps raw words; team `t` is bit `t % 64` of word `t / 64`.
    pub fn from_words(words: Vec<u64>) -> Prop {
        Prop(words)
    }

    pub fn contains(&self, team: u32) -> bool {
        self.0[(team >> 6) as usize] >> (team & 63) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }

    /// Teams in increasing index order.
    pub fn teams(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &x)| bits(x).map(move |b| (w * 64 + b) as u32))
    }

    pub fn is_subset(&self, other: &Prop) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// The classical team space over `atoms` atoms: `2^atoms` worlds and
/// `2^(2^atoms)` teams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeamSpace {
    atoms: u32,
    worlds: u32,
    words: usize,
    mask: u64,
}

// teams without world bit `w`, for w < 6, laid out over one word
const LOW: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

impl TeamSpace {
    pub fn new(atoms: u32) -> Result<TeamSpace> {
        if atoms > MAX_TEAM_ATOMS {
            return Err(Error::CapExceeded {
                what: "team-space atoms",
                limit: MAX_TEAM_ATOMS as usize,
                requested: atoms as usize,
            });
        }
        let worlds = 1u32 << atoms;
        let teams = 1usize << worlds;
        let words = teams.div_ceil(64);
        let mask = if teams >= 64 { u64::MAX } else { (1u64 << teams) - 1 };
        Ok(TeamSpace { atoms, worlds, words, mask })
    }

    pub fn atoms(&self) -> u32 {
        self.atoms
    }

    pub fn worlds(&self) -> u32 {
        self.worlds
    }

    pub fn num_teams(&self) -> usize {
        1usize << self.worlds
    }

    /// The team of all worlds.
    pub fn full_team(&self) -> u32 {
        ((1u64 << self.worlds) - 1) as u32
    }

    pub fn empty(&self) -> Prop {
        Prop(vec![0; self.words])
    }

    /// Every team.
    pub fn all(&self) -> Prop {
        let mut p = vec![u64::MAX; self.words];
        p[0] &= self.mask;
        Prop(p)
    }

    /// Only the empty team.
    pub fn bot(&self) -> Prop {
        let mut p = self.empty();
        p.0[0] = 1;
        p
    }

    /// Teams all of whose worlds make `p{i}` true.
    pub fn atom(&self, i: u32) -> Prop {
        let truth: u32 = (0..self.worlds).filter(|w| w >> i & 1 == 1).fold(0, |acc, w| acc | 1 << w);
        self.downset_of(truth)
    }

    /// All subteams of `team`.
    pub fn downset_of(&self, team: u32) -> Prop {
        let mut p = self.empty();
        p.0[(team >> 6) as usize] |= 1 << (team & 63);
        self.down_close(&mut p);
        p
    }

    pub fn and(&self, a: &Prop, b: &Prop) -> Prop {
        Prop(a.0.iter().zip(&b.0).map(|(x, y)| x & y).collect())
    }

    pub fn or(&self, a: &Prop, b: &Prop) -> Prop {
        Prop(a.0.iter().zip(&b.0).map(|(x, y)| x | y).collect())
    }

    /// Teams none of whose subteams support `a` without supporting `b`.
    pub fn imp(&self, a: &Prop, b: &Prop) -> Prop {
        let mut bad = Prop(a.0.iter().zip(&b.0).map(|(x, y)| x & !y).collect());
        self.up_close(&mut bad);
        let mut out = Prop(bad.0.iter().map(|x| !x).collect());
        out.0[0] &= self.mask;
        out
    }

    /// Teams `u ∪ v` with `u` in `a` and `v` in `b`, closed downwards.
    pub fn tensor(&self, a: &Prop, b: &Prop) -> Prop {
        // only maximal elements of the two downsets matter
        let (ma, mb) = (self.maximal(a), self.maximal(b));
        let mut out = self.empty();
        for &u in &ma {
            for &v in &mb {
                let t = u | v;
                out.0[(t >> 6) as usize] |= 1 << (t & 63);
            }
        }
        self.down_close(&mut out);
        out
    }

    /// Maximal teams of the downward closure of `p`.
    fn maximal(&self, p: &Prop) -> Vec<u32> {
        let mut q = p.clone();
        self.down_close(&mut q);
        let mut covered = self.empty();
        for w in 0..self.worlds {
            if w < 6 {
                let s = 1u32 << w;
                for (c, x) in covered.0.iter_mut().zip(&q.0) {
                    *c |= (x >> s) & LOW[w as usize];
                }
            } else {
                let step = 1usize << (w - 6);
                for j in 0..self.words {
                    if j & step == 0 {
                        covered.0[j] |= q.0[j | step];
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (j, (x, c)) in q.0.iter().zip(&covered.0).enumerate() {
            let mut m = x & !c;
            while m != 0 {
                out.push((j as u32) << 6 | m.trailing_zeros());
                m &= m - 1;
            }
        }
        out
    }

    /// Closes upwards under adding worlds.
    pub fn up_close(&self, p: &mut Prop) {
        for w in 0..self.worlds {
            if w < 6 {
                let s = 1u32 << w;
                for x in p.0.iter_mut() {
                    *x |= (*x & LOW[w as usize]) << s;
                }
            } else {
                let step = 1usize << (w - 6);
                for j in 0..self.words {
                    if j & step == 0 {
                        p.0[j | step] |= p.0[j];
                    }
                }
            }
        }
        p.0[0] &= self.mask;
    }

    /// Closes downwards under removing worlds.
    pub fn down_close(&self, p: &mut Prop) {
        for w in 0..self.worlds {
            if w < 6 {
                let s = 1u32 << w;
                for x in p.0.iter_mut() {
                    *x |= (*x >> s) & LOW[w as usize];
                }
            } else {
                let step = 1usize << (w - 6);
                for j in 0..self.words {
                    if j & step == 0 {
                        p.0[j] |= p.0[j | step];
                    }
                }
            }
        }
    }

    /// Support set of `f`; every atom must be below [`TeamSpace::atoms`].
    pub fn denote(&self, f: &Formula) -> Result<Prop> {
        match f {
            Formula::Atom(i) if *i < self.atoms => Ok(self.atom(*i)),
            Formula::Atom(i) => Err(Error::UnassignedAtom(*i)),
            Formula::App(c, args) => {
                let sub = args.iter().map(|a| self.denote(a)).collect::<Result<Vec<_>>>()?;
                match (c, sub.as_slice()) {
                    (Connective::Bot, []) => Ok(self.bot()),
                    (Connective::And, [a, b]) => Ok(self.and(a, b)),
                    (Connective::Or, [a, b]) => Ok(self.or(a, b)),
                    (Connective::Imp, [a, b]) => Ok(self.imp(a, b)),
                    (Connective::Tensor, [a, b]) => Ok(self.tensor(a, b)),
                    _ => Err(Error::UnknownConnective(c.name().into())),
                }
            }
        }
    }

    /// Whether the full team, hence every team, is in `p`.
    pub fn is_valid(&self, p: &Prop) -> bool {
        p.contains(self.full_team())
    }
}

/// Classical support of `f` by `team` over `atoms` atoms, by direct recursion
/// on the support clauses with memoisation on (subformula, team).
pub fn supports_classical(atoms: u32, team: u32, f: &Formula) -> Result<bool> {
    if atoms > MAX_TEAM_ATOMS {
        return Err(Error::CapExceeded {
            what: "team-space atoms",
            limit: MAX_TEAM_ATOMS as usize,
            requested: atoms as usize,
        });
    }
    let worlds = 1u32 << atoms;
    if worlds < 32 && team >> worlds != 0 {
        return Err(Error::Precondition(format!("team {team:#b} mentions worlds beyond {worlds}")));
    }
    let arena = Arena::build(f, atoms)?;
    let mut memo = BTreeMap::new();
    let eval_atom = |i: u32, t: u64| bits(t).all(|w| (w as u32) >> i & 1 == 1);
    Ok(arena.support(arena.root, team as u64, &mut memo, &eval_atom, &|t| t))
}

/// A formula flattened into nodes, children before parents.
struct Arena {
    nodes: Vec<Node>,
    root: usize,
}

enum Node {
    Atom(u32),
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Tensor(usize, usize),
}

impl Arena {
    fn build(f: &Formula, atoms: u32) -> Result<Arena> {
        fn go(f: &Formula, atoms: u32, nodes: &mut Vec<Node>) -> Result<usize> {
            let node = match f {
                Formula::Atom(i) if *i < atoms => Node::Atom(*i),
                Formula::Atom(i) => return Err(Error::UnassignedAtom(*i)),
                Formula::App(c, args) => {
                    let kids = args.iter().map(|a| go(a, atoms, nodes)).collect::<Result<Vec<_>>>()?;
                    match (c, kids.as_slice()) {
                        (Connective::Bot, []) => Node::Bot,
                        (Connective::And, &[a, b]) => Node::And(a, b),
                        (Connective::Or, &[a, b]) => Node::Or(a, b),
                        (Connective::Imp, &[a, b]) => Node::Imp(a, b),
                        (Connective::Tensor, &[a, b]) => Node::Tensor(a, b),
                        _ => return Err(Error::UnknownConnective(c.name().into())),
                    }
                }
            };
            nodes.push(node);
            Ok(nodes.len() - 1)
        }
        let mut nodes = Vec::new();
        let root = go(f, atoms, &mut nodes)?;
        Ok(Arena { nodes, root })
    }

    /// Support of node `n` at team `t` (a set of points). `reach` gives the
    /// team whose subteams an implication quantifies over.
    fn support(
        &self,
        n: usize,
        t: u64,
        memo: &mut BTreeMap<(usize, u64), bool>,
        atom: &dyn Fn(u32, u64) -> bool,
        reach: &dyn Fn(u64) -> u64,
    ) -> bool {
        if let Some(&v) = memo.get(&(n, t)) {
            return v;
        }
        let v = match self.nodes[n] {
            Node::Atom(i) => atom(i, t),
            Node::Bot => t == 0,
            Node::And(a, b) => self.support(a, t, memo, atom, reach) && self.support(b, t, memo, atom, reach),
            Node::Or(a, b) => self.support(a, t, memo, atom, reach) || self.support(b, t, memo, atom, reach),
            Node::Imp(a, b) => {
                let r = reach(t);
                subsets(r).all(|s| !self.support(a, s, memo, atom, reach) || self.support(b, s, memo, atom, reach))
            }
            Node::Tensor(a, b) => subsets(t).any(|u| {
                self.support(a, u, memo, atom, reach) && self.support(b, t & !u, memo, atom, reach)
            }),
        };
        memo.insert((n, t), v);
        v
    }
}

/// All subsets of `t`, including `t` and the empty set.
fn subsets(t: u64) -> impl Iterator<Item = u64> {
    let mut s = t;
    let mut done = false;
    core::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = s;
        if s == 0 {
            done = true;
        } else {
            s = (s - 1) & t;
        }
        Some(out)
    })
}

/// A team refuting a classical entailment. `atoms` lists the original atom
/// indices in the order used by the world encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterTeam {
    pub atoms: Vec<u32>,
    pub team: u32,
}

impl CounterTeam {
    /// World valuations in the team, one mask per world over `atoms`.
    pub fn worlds(&self) -> Vec<u32> {
        bits(self.team as u64).map(|w| w as u32).collect()
    }

    /// Each world as a bit string, leftmost character for the first atom.
    pub fn world_strings(&self) -> Vec<alloc::string::String> {
        self.worlds()
            .into_iter()
            .map(|w| (0..self.atoms.len()).map(|i| if w >> i & 1 == 1 { '1' } else { '0' }).collect())
            .collect()
    }
}

/// Renames the atoms occurring in `fs` to `0..k`, returning the renamed
/// formulas and the original indices.
pub fn densify(fs: &[&Formula]) -> (Vec<Formula>, Vec<u32>) {
    let mut atoms = alloc::collections::BTreeSet::new();
    for f in fs {
        atoms.extend(f.atoms());
    }
    let atoms: Vec<u32> = atoms.into_iter().collect();
    let s = Substitution::from_pairs(atoms.iter().enumerate().map(|(k, &a)| (a, Formula::Atom(k as u32))));
    (fs.iter().map(|f| s.apply(f)).collect(), atoms)
}

/// Classical team entailment over all valuations of the occurring atoms.
/// `Ok(None)` when `gamma` entails `f`; otherwise the smallest refuting team
/// (fewest worlds, then lowest index).
pub fn inqb_entails(gamma: &[Formula], f: &Formula) -> Result<Option<CounterTeam>> {
    let all: Vec<&Formula> = gamma.iter().chain([f]).collect();
    let (renamed, atoms) = densify(&all);
    let space = TeamSpace::new(atoms.len() as u32)?;
    let mut premises = space.all();
    for g in &renamed[..gamma.len()] {
        premises = space.and(&premises, &space.denote(g)?);
    }
    let concl = space.denote(&renamed[gamma.len()])?;
    let team = premises.teams().filter(|&t| !concl.contains(t)).min_by_key(|&t| (t.count_ones(), t));
    Ok(team.map(|team| CounterTeam { atoms, team }))
}

/// A finite Kripke model: a poset with a persistent valuation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KripkeTeamModel {
    poset: FinitePoset,
    valuation: Vec<u64>,
}

impl KripkeTeamModel {
    /// `valuation[i]` is the set of points where `p{i}` holds; each must be an upset.
    pub fn new(poset: FinitePoset, valuation: Vec<u64>) -> Result<KripkeTeamModel> {
        if poset.len() > MAX_KRIPKE_POINTS {
            return Err(Error::CapExceeded { what: "Kripke points", limit: MAX_KRIPKE_POINTS, requested: poset.len() });
        }
        let all = (1u64 << poset.len()) - 1;
        if valuation.iter().any(|&v| v & !all != 0 || !poset.is_upset(v)) {
            return Err(Error::Precondition("valuation is not an upset".into()));
        }
        Ok(KripkeTeamModel { poset, valuation })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn valuation(&self) -> &[u64] {
        &self.valuation
    }

    fn points(&self) -> usize {
        self.poset.len()
    }

    /// All points, as a team.
    pub fn full_team(&self) -> u64 {
        (1u64 << self.points()) - 1
    }

    /// Every team, as a support set.
    pub fn team_mask(&self) -> u64 {
        let teams = 1usize << self.points();
        if teams >= 64 {
            u64::MAX
        } else {
            (1u64 << teams) - 1
        }
    }

    fn downset_of(&self, team: u64) -> u64 {
        let mut s = 1u64 << team;
        down_close_small(&mut s, self.points());
        s
    }

    /// Support set of `f` as a bitset over teams (team index = point mask).
    pub fn denote(&self, f: &Formula) -> Result<u64> {
        Ok(match f {
            Formula::Atom(i) => self.downset_of(*self.valuation.get(*i as usize).ok_or(Error::UnassignedAtom(*i))?),
            Formula::App(c, args) => {
                let sub = args.iter().map(|a| self.denote(a)).collect::<Result<Vec<_>>>()?;
                match (c, sub.as_slice()) {
                    (Connective::Bot, []) => 1,
                    (Connective::And, [a, b]) => a & b,
                    (Connective::Or, [a, b]) => a | b,
                    (Connective::Imp, [a, b]) => self.imp(*a, *b),
                    (Connective::Tensor, [a, b]) => tensor_small(*a, *b),
                    _ => return Err(Error::UnknownConnective(c.name().into())),
                }
            }
        })
    }

    /// `t` supports `a -> b` iff no subteam of the successors of `t` is in
    /// `a` but not in `b`.
    pub fn imp(&self, a: u64, b: u64) -> u64 {
        let mut bad = a & !b;
        up_close_small(&mut bad, self.points());
        let mut out = 0u64;
        for t in 0..1u64 << self.points() {
            let r = self.poset.up_closure(t);
            if bad >> r & 1 == 0 {
                out |= 1 << t;
            }
        }
        out & self.team_mask()
    }

    /// Unions `u ∪ v` with `u` in `a` and `v` in `b`.
    pub fn tensor(&self, a: u64, b: u64) -> u64 {
        tensor_small(a, b)
    }

    pub fn supports(&self, team: u64, f: &Formula) -> Result<bool> {
        Ok(self.denote(f)? >> team & 1 == 1)
    }
}

fn up_close_small(p: &mut u64, points: usize) {
    for w in 0..points {
        *p |= (*p & LOW[w]) << (1u32 << w);
    }
}

fn down_close_small(p: &mut u64, points: usize) {
    for w in 0..points {
        *p |= (*p >> (1u32 << w)) & LOW[w];
    }
}

/// Tensor of two downward closed team sets over at most six points.
pub(crate) fn tensor_small(a: u64, b: u64) -> u64 {
    let mut out = 0u64;
    for u in bits(a) {
        for v in bits(b) {
            out |= 1 << (u | v);
        }
    }
    out
}

/// Kripke support by direct recursion on the clauses, memoised on
/// (subformula, team). Independent of [`KripkeTeamModel::denote`].
pub fn supports_kripke(m: &KripkeTeamModel, team: u64, f: &Formula) -> Result<bool> {
    if team & !m.full_team() != 0 {
        return Err(Error::Precondition("team mentions points outside the model".into()));
    }
    let atoms = m.valuation.len() as u32;
    let arena = Arena::build(f, atoms)?;
    let mut memo = BTreeMap::new();
    let atom = |i: u32, t: u64| t & !m.valuation[i as usize] == 0;
    let reach = |t: u64| m.poset.up_closure(t);
    Ok(arena.support(arena.root, team, &mut memo, &atom, &reach))
}

/// Which teams [`inqi_countermodel_search`] examines in each model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TeamChoice {
    /// Every team, smallest first.
    All,
    /// Only teams with one point.
    Singletons,
    /// Only the team of all points.
    Full,
}

/// Bounds for the Kripke countermodel search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub frame_size: usize,
    pub team_choice: TeamChoice,
}

impl Default for SearchBounds {
    fn default() -> SearchBounds {
        SearchBounds { frame_size: 4, team_choice: TeamChoice::All }
    }
}

/// A model and a team in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeCountermodel {
    pub model: KripkeTeamModel,
    pub team: u64,
}

/// Every Kripke model on posets of up to `frame_size` points (one per
/// isomorphism class) with every persistent valuation of atoms `0..atoms`.
pub fn kripke_models(frame_size: usize, atoms: usize) -> Result<Vec<KripkeTeamModel>> {
    if frame_size > MAX_KRIPKE_POINTS {
        return Err(Error::CapExceeded { what: "Kripke points", limit: MAX_KRIPKE_POINTS, requested: frame_size });
    }
    let mut out = Vec::new();
    for n in 1..=frame_size {
        for p in posets_up_to_iso(n) {
            let ups = p.upsets(usize::MAX)?;
            let mut pos = vec![0usize; atoms];
            loop {
                let val: Vec<u64> = pos.iter().map(|&i| ups[i]).collect();
                out.push(KripkeTeamModel { poset: p.clone(), valuation: val });
                let mut i = 0;
                while i < atoms {
                    pos[i] += 1;
                    if pos[i] < ups.len() {
                        break;
                    }
                    pos[i] = 0;
                    i += 1;
                }
                if i == atoms {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// First model and team (in enumeration order) where `gamma` is supported
/// and `f` is not.
pub fn inqi_entails_bounded(gamma: &[Formula], f: &Formula, bounds: SearchBounds) -> Result<Option<KripkeCountermodel>> {
    let all: Vec<&Formula> = gamma.iter().chain([f]).collect();
    let (renamed, atoms) = densify(&all);
    for m in kripke_models(bounds.frame_size, atoms.len())? {
        let mut prem = m.team_mask();
        for g in &renamed[..gamma.len()] {
            prem &= m.denote(g)?;
        }
        let bad = prem & !m.denote(&renamed[gamma.len()])?;
        let team = match bounds.team_choice {
            TeamChoice::All => bits(bad).min_by_key(|&t| ((t as u64).count_ones(), t)).map(|t| t as u64),
            TeamChoice::Singletons => (0..m.points()).map(|i| 1u64 << i).find(|&t| bad >> t & 1 == 1),
            TeamChoice::Full => Some(m.full_team()).filter(|&t| bad >> t & 1 == 1),
        };
        if let Some(team) = team {
            // report the model over the original atom indices
            let mut valuation = vec![0u64; atoms.last().map_or(0, |&a| a as usize + 1)];
            for (k, &a) in atoms.iter().enumerate() {
                valuation[a as usize] = m.valuation[k];
            }
            let model = KripkeTeamModel { poset: m.poset.clone(), valuation };
            return Ok(Some(KripkeCountermodel { model, team }));
        }
    }
    Ok(None)
}

/// First Kripke-team countermodel to `f` within the bounds.
pub fn inqi_countermodel_search(f: &Formula, bounds: SearchBounds) -> Result<Option<KripkeCountermodel>> {
    inqi_entails_bounded(&[], f, bounds)
}

/// Whether every image of `s` is classically equivalent to a single disjunct
/// of its normal form, hence to an `or`-free formula.
pub fn is_admissible_inqb(s: &Substitution) -> Result<bool> {
    for (_, img) in s.support() {
        if img.is_or_free() {
            continue;
        }
        let disjuncts = crate::proofsys::dnf(img)?;
        let mut found = false;
        for d in &disjuncts {
            if inqb_entails(core::slice::from_ref(img), d)?.is_none() && inqb_entails(core::slice::from_ref(d), img)?.is_none() {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    fn f(s: &str) -> Formula {
        parse(s, &Signature::inq()).unwrap()
    }

    // worlds of the two-atom picture: a = {p, q}, b = {p}, c = {q}, d = {}
    const A: u32 = 0b11;
    const B: u32 = 0b01;
    const C: u32 = 0b10;
    const D: u32 = 0b00;

    fn team(ws: &[u32]) -> u32 {
        ws.iter().fold(0, |acc, w| acc | 1 << w)
    }

    #[test]
    fn picture_vectors() {
        let bd = team(&[B, D]);
        let ab = team(&[A, B]);
        let space = TeamSpace::new(2).unwrap();
        for (t, g, want) in [
            (bd, "~~(p0 | ~p0)", true),
            (bd, "p0 | ~p0", false),
            (ab, "p0", true),
            (team(&[C, D]), "~p0", true),
        ] {
            assert_eq!(supports_classical(2, t, &f(g)).unwrap(), want, "{g}");
            assert_eq!(space.denote(&f(g)).unwrap().contains(t), want, "{g}");
        }
    }

    #[test]
    fn empty_team_supports_everything() {
        for g in ["bot", "p0 & ~p0", "p0 * p1 -> bot", "(p0 | p1) & ~p1"] {
            assert!(supports_classical(2, 0, &f(g)).unwrap());
        }
    }

    #[test]
    fn split_axiom_and_its_substitution_instance() {
        assert_eq!(inqb_entails(&[], &f("(p0 -> p1 | p2) -> (p0 -> p1) | (p0 -> p2)")).unwrap(), None);
        let cex = inqb_entails(&[], &f("((p1 | p2) -> (p1 | p2)) -> ((p1 | p2) -> p1) | ((p1 | p2) -> p2)"))
            .unwrap()
            .expect("instance is not valid");
        assert_eq!(cex.atoms, vec![1, 2]);
        // a team mixing a p1-world and a p2-world
        assert_eq!(cex.world_strings(), vec!["10", "01"]);
        assert_eq!(inqb_entails(&[f("p0")], &f("p0")).unwrap(), None);
        assert_eq!(inqb_entails(&[f("p0")], &f("p0 | p1")).unwrap(), None);
        assert!(inqb_entails(&[f("p0 | p1")], &f("p0")).unwrap().is_some());
    }

    #[test]
    fn space_operations_agree_with_recursion() {
        let space = TeamSpace::new(3).unwrap();
        for g in ["p0 * p1 -> p2", "(p0 -> p1) * ~p2", "~~(p0 | p1) -> p0 * p2", "(p0 * ~p0) | (p1 -> p2 * p2)"] {
            let g = f(g);
            let d = space.denote(&g).unwrap();
            for t in (0..256).step_by(7) {
                assert_eq!(d.contains(t), supports_classical(3, t, &g).unwrap(), "{g} at {t}");
            }
        }
    }

    #[test]
    fn four_atom_space() {
        let space = TeamSpace::new(4).unwrap();
        let g = f("(p0 -> p1 | p3) -> (p0 -> p1) | (p0 -> p3)");
        assert!(space.is_valid(&space.denote(&g).unwrap()));
        let h = f("p0 * p3 -> p2");
        let d = space.denote(&h).unwrap();
        for t in [0u32, 1, 0x8001, 0xffff, 0x1234] {
            assert_eq!(d.contains(t), supports_classical(4, t, &h).unwrap());
        }
        assert!(TeamSpace::new(5).is_err());
    }

    #[test]
    fn two_chain_model() {
        // root 0 below top 1; p0 true only at the top
        let p = FinitePoset::chain(2).unwrap();
        let m = KripkeTeamModel::new(p, vec![0b10]).unwrap();
        assert!(m.supports(0b01, &f("~~p0")).unwrap());
        assert!(!m.supports(0b01, &f("p0")).unwrap());
        assert!(supports_kripke(&m, 0b01, &f("~~p0")).unwrap());
        assert!(!supports_kripke(&m, 0b01, &f("~~p0 -> p0")).unwrap());
        assert!(KripkeTeamModel::new(FinitePoset::chain(2).unwrap(), vec![0b01]).is_err());
    }

    #[test]
    fn countermodel_search() {
        let b = SearchBounds { frame_size: 2, team_choice: TeamChoice::All };
        let cm = inqi_countermodel_search(&f("~~p0 -> p0"), b).unwrap().expect("refutable");
        assert_eq!(cm.model.poset().len(), 2);
        let cm = inqi_countermodel_search(&f("~p0"), b).unwrap().expect("refutable");
        assert_eq!(cm.model.poset().len(), 1);
        assert!(inqi_countermodel_search(&f("p0 -> (p1 -> p0)"), b).unwrap().is_none());
        // the split axiom holds intuitionistically for or-free antecedents
        let split = f("(~p0 -> p1 | p2) -> (~p0 -> p1) | (~p0 -> p2)");
        assert!(inqi_countermodel_search(&split, SearchBounds { frame_size: 3, ..b }).unwrap().is_none());
    }
}
