//! Brute-force reference implementations used to cross-check the library in
//! the acceptance batteries. Everything here is written from the defining
//! clauses, with no bitset tricks and no sharing with the core crate beyond
//! the formula type and table lookup.

use std::collections::{BTreeMap, BTreeSet};

use weaklog_core::algebra::FiniteAlgebra;
use weaklog_core::syntax::{Connective, Formula};

/// A classical team model: each world is the set of atoms true at it.
#[derive(Clone, Debug)]
pub struct NaiveTeamModel {
    worlds: Vec<BTreeSet<u32>>,
}

fn subsets(team: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &w in team {
        let with: Vec<Vec<usize>> = out
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.push(w);
                s
            })
            .collect();
        out.extend(with);
    }
    out
}

impl NaiveTeamModel {
    pub fn new(worlds: Vec<BTreeSet<u32>>) -> NaiveTeamModel {
        NaiveTeamModel { worlds }
    }

    /// One world per valuation of atoms `0..atoms`; world `w` makes atom `i`
    /// true iff bit `i` of `w` is set.
    pub fn full(atoms: u32) -> NaiveTeamModel {
        NaiveTeamModel::new((0..1u32 << atoms).map(|w| (0..atoms).filter(|i| w >> i & 1 == 1).collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn supports(&self, team: &[usize], f: &Formula) -> bool {
        match f {
            Formula::Atom(i) => team.iter().all(|&w| self.worlds[w].contains(i)),
            Formula::App(c, args) => match (c, args.as_slice()) {
                (Connective::Bot, []) => team.is_empty(),
                (Connective::And, [a, b]) => self.supports(team, a) && self.supports(team, b),
                (Connective::Or, [a, b]) => self.supports(team, a) || self.supports(team, b),
                (Connective::Imp, [a, b]) => {
                    subsets(team).iter().all(|s| !self.supports(s, a) || self.supports(s, b))
                }
                (Connective::Tensor, [a, b]) => subsets(team).iter().any(|u| {
                    let v: Vec<usize> = team.iter().copied().filter(|w| !u.contains(w)).collect();
                    // disjoint splits suffice since support is downward closed
                    self.supports(u, a) && self.supports(&v, b)
                }),
                _ => panic!("connective `{c}` has no team clause"),
            },
        }
    }

    pub fn valid(&self, f: &Formula) -> bool {
        let all: Vec<usize> = (0..self.worlds.len()).collect();
        self.supports(&all, f)
    }

    /// `Γ ⊨ φ`: every team supporting all of `gamma` supports `phi`.
    pub fn entails(&self, gamma: &[Formula], phi: &Formula) -> bool {
        let all: Vec<usize> = (0..self.worlds.len()).collect();
        subsets(&all).iter().all(|t| !gamma.iter().all(|g| self.supports(t, g)) || self.supports(t, phi))
    }
}

/// Functions `A -> A` obtained by composing at most `depth` basic
/// translations `x ↦ f(c1, .., x, .., cn)` with constant parameters.
pub fn translations(alg: &FiniteAlgebra, depth: usize) -> BTreeSet<Vec<u32>> {
    let n = alg.size() as u32;
    let id: Vec<u32> = (0..n).collect();
    let mut all = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &frontier {
            for op in 0..alg.sig().len() {
                let ar = alg.arity(op);
                for slot in 0..ar {
                    for params in 0..n.pow(ar as u32 - 1) {
                        let g: Vec<u32> = (0..n)
                            .map(|x| {
                                let mut rest = params;
                                let args: Vec<u32> = (0..ar)
                                    .map(|i| {
                                        if i == slot {
                                            p[x as usize]
                                        } else {
                                            let v = rest % n;
                                            rest /= n;
                                            v
                                        }
                                    })
                                    .collect();
                                alg.apply(op, &args)
                            })
                            .collect();
                        if all.insert(g.clone()) {
                            next.push(g);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    all
}

/// `rel[a][b]`: no translation of depth at most `depth` separates `a` from
/// `b` by membership in `truth` or in `core`.
pub fn translation_types(alg: &FiniteAlgebra, truth: &[u32], core: &[u32], depth: usize) -> Vec<Vec<bool>> {
    let n = alg.size();
    let trans = translations(alg, depth);
    let t: BTreeSet<u32> = truth.iter().copied().collect();
    let c: BTreeSet<u32> = core.iter().copied().collect();
    let ty = |a: usize| -> Vec<(bool, bool)> {
        trans.iter().map(|p| (t.contains(&p[a]), c.contains(&p[a]))).collect()
    };
    let types: Vec<_> = (0..n).map(ty).collect();
    (0..n).map(|a| (0..n).map(|b| types[a] == types[b]).collect()).collect()
}

/// Whether `f ≈ top` holds under every assignment of its atoms into `core`,
/// by plain enumeration with [`FiniteAlgebra::eval_map`].
pub fn naive_core_valid(alg: &FiniteAlgebra, core: &[u32], f: &Formula, top: u32) -> bool {
    let atoms: Vec<u32> = f.atoms().into_iter().collect();
    let mut assignments: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new()];
    for &a in &atoms {
        assignments = assignments
            .into_iter()
            .flat_map(|m| {
                core.iter().map(move |&v| {
                    let mut m = m.clone();
                    m.insert(a, v);
                    m
                })
            })
            .collect();
    }
    assignments.iter().all(|h| alg.eval_map(f, h).expect("atoms assigned") == top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use weaklog_core::syntax::{parse, Signature};
    use weaklog_core::team::TeamSpace;

    #[test]
    fn naive_agrees_with_bitsets_on_small_formulas() {
        let sig = Signature::inq();
        let model = NaiveTeamModel::full(2);
        let space = TeamSpace::new(2).unwrap();
        for text in ["p0 | ~p0", "~~(p0 | ~p0)", "p0 * ~p0", "(p0 -> p1 | ~p1) -> (p0 -> p1) | (p0 -> ~p1)", "p0 * p1 -> p1"] {
            let f = parse(text, &sig).unwrap();
            let p = space.denote(&f).unwrap();
            for t in 0..16u32 {
                let team: Vec<usize> = (0..4).filter(|w| t >> w & 1 == 1).collect();
                assert_eq!(p.contains(t), model.supports(&team, &f), "{text} at {t:04b}");
            }
        }
    }
}
