//! Logical bimatrices: an algebra with a truth set and a core set, their
//! consequence relation, Leibniz reduction and export to strict Horn
//! theories.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::algebra::{coarsest_stable_partition, membership, FiniteAlgebra, Partition};
use crate::error::{Error, Result};
use crate::syntax::{Connective, Formula};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bimatrix {
    alg: FiniteAlgebra,
    truth: Vec<u32>,
    core: Vec<u32>,
}

fn normalise(set: &[u32], size: usize, what: &str) -> Result<Vec<u32>> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.last().is_some_and(|&x| x as usize >= size) {
        return Err(Error::Precondition(format!("{what} set mentions an element outside the universe")));
    }
    Ok(v)
}

impl Bimatrix {
    pub fn new(alg: FiniteAlgebra, truth: &[u32], core: &[u32]) -> Result<Bimatrix> {
        let truth = normalise(truth, alg.size(), "truth")?;
        let core = normalise(core, alg.size(), "core")?;
        Ok(Bimatrix { alg, truth, core })
    }

    pub fn alg(&self) -> &FiniteAlgebra {
        &self.alg
    }

    pub fn truth(&self) -> &[u32] {
        &self.truth
    }

    pub fn core(&self) -> &[u32] {
        &self.core
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    pub fn is_true(&self, a: u32) -> bool {
        self.truth.binary_search(&a).is_ok()
    }

    pub fn in_core(&self, a: u32) -> bool {
        self.core.binary_search(&a).is_ok()
    }
}

/// Core assignment under which every premise is true and the conclusion is
/// not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimatrixWitness {
    pub matrix: usize,
    pub assignment: BTreeMap<u32, u32>,
}

/// `Γ ⊨ φ` over a finite family, assignments ranging over the cores.
/// Assignments are tried in lexicographic order.
pub fn bimatrix_entails(k: &[Bimatrix], gamma: &[Formula], phi: &Formula) -> Result<Option<BimatrixWitness>> {
    let mut atoms = phi.atoms();
    for g in gamma {
        atoms.extend(g.atoms());
    }
    let atoms: Vec<u32> = atoms.into_iter().collect();
    let width = atoms.last().map_or(0, |&a| a as usize + 1);
    for (i, m) in k.iter().enumerate() {
        if m.core.is_empty() && !atoms.is_empty() {
            continue;
        }
        let premises = gamma.iter().map(|g| m.alg.compile(g)).collect::<Result<Vec<_>>>()?;
        let goal = m.alg.compile(phi)?;
        let mut h = vec![0u32; width];
        let mut pos = vec![0usize; atoms.len()];
        let mut stack = Vec::new();
        loop {
            for (&a, &p) in atoms.iter().zip(&pos) {
                h[a as usize] = m.core[p];
            }
            if premises.iter().all(|p| m.is_true(p.eval(&m.alg, &h, &mut stack)))
                && !m.is_true(goal.eval(&m.alg, &h, &mut stack))
            {
                let assignment = atoms.iter().map(|&a| (a, h[a as usize])).collect();
                return Ok(Some(BimatrixWitness { matrix: i, assignment }));
            }
            // last atom varies fastest
            let mut j = atoms.len();
            let done = loop {
                if j == 0 {
                    break true;
                }
                j -= 1;
                pos[j] += 1;
                if pos[j] < m.core.len() {
                    break false;
                }
                pos[j] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok(None)
}

/// Partition of the universe by the Leibniz relation: the largest congruence
/// that never relates a true element to a non-true one or a core element to
/// a non-core one.
pub fn leibniz_partition(m: &Bimatrix) -> Partition {
    let t = membership(&m.truth, m.size());
    let c = membership(&m.core, m.size());
    let keys: Vec<(bool, bool)> = t.into_iter().zip(c).collect();
    coarsest_stable_partition(&m.alg, &Partition::from_keys(&keys))
}

/// Quotient by the Leibniz relation together with the projection onto it.
/// Blocks are numbered by their least element, so a reduced input comes
/// back unchanged with the identity projection.
pub fn leibniz_reduce(m: &Bimatrix) -> Result<(Bimatrix, Vec<u32>)> {
    let p = leibniz_partition(m);
    let alg = m.alg.quotient(&p)?;
    let proj = p.labels().to_vec();
    let image = |set: &[u32]| -> Vec<u32> { set.iter().map(|&a| proj[a as usize]).collect() };
    let reduced = Bimatrix::new(alg, &image(&m.truth), &image(&m.core))?;
    Ok((reduced, proj))
}

pub fn is_reduced(m: &Bimatrix) -> bool {
    leibniz_partition(m).num_blocks() == m.size()
}

fn render_term(f: &Formula, vars: &BTreeMap<u32, usize>, out: &mut String) {
    match f {
        Formula::Atom(a) => {
            let _ = write!(out, "X{}", vars[a]);
        }
        Formula::App(c, args) => {
            out.push_str(match c {
                Connective::Bot => "bot",
                Connective::And => "and",
                Connective::Or => "or",
                Connective::Imp => "imp",
                Connective::Tensor => "tensor",
                Connective::Named(n) => n.as_str(),
            });
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    render_term(a, vars, out);
                }
                out.push(')');
            }
        }
    }
}

fn number_atoms(f: &Formula, vars: &mut BTreeMap<u32, usize>, order: &mut Vec<u32>) {
    match f {
        Formula::Atom(a) => {
            if !vars.contains_key(a) {
                vars.insert(*a, order.len());
                order.push(*a);
            }
        }
        Formula::App(_, args) => args.iter().for_each(|x| number_atoms(x, vars, order)),
    }
}

/// One equality-free strict universal Horn sentence per pair in TPTP `fof`
/// syntax, with predicates `t` (truth) and `d` (core). With `weak`, every
/// bound variable is guarded by `d`. Variables are numbered by first
/// occurrence, premises before the conclusion.
pub fn export_horn(pairs: &[(Vec<Formula>, Formula)], weak: bool) -> String {
    let mut out = String::new();
    for (n, (gamma, phi)) in pairs.iter().enumerate() {
        let mut vars = BTreeMap::new();
        let mut order = Vec::new();
        for g in gamma {
            number_atoms(g, &mut vars, &mut order);
        }
        number_atoms(phi, &mut vars, &mut order);
        let mut conjuncts: Vec<String> = gamma
            .iter()
            .map(|g| {
                let mut s = String::from("t(");
                render_term(g, &vars, &mut s);
                s.push(')');
                s
            })
            .collect();
        if weak {
            conjuncts.extend((0..order.len()).map(|i| format!("d(X{i})")));
        }
        let mut goal = String::from("t(");
        render_term(phi, &vars, &mut goal);
        goal.push(')');
        let body = match conjuncts.len() {
            0 => goal,
            1 => format!("({} => {goal})", conjuncts[0]),
            _ => format!("(({}) => {goal})", conjuncts.join(" & ")),
        };
        let _ = write!(out, "fof(c{n}, axiom, ");
        if !order.is_empty() {
            let names: Vec<String> = (0..order.len()).map(|i| format!("X{i}")).collect();
            let _ = write!(out, "![{}]: ", names.join(","));
        }
        let _ = writeln!(out, "{body}).");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::chain;
    use crate::heyting::{dne_sigma, medvedev_algebra};
    use crate::expanded::{is_core_generated, ExpandedAlgebra};
    use crate::syntax::{parse, Signature};
    use alloc::collections::BTreeSet;

    fn f(s: &str) -> Formula {
        parse(s, &Signature::int()).unwrap()
    }

    // functions A -> A obtained by composing up to `depth` basic translations
    fn translations(alg: &FiniteAlgebra, depth: usize) -> BTreeSet<Vec<u32>> {
        let n = alg.size() as u32;
        let mut all: BTreeSet<Vec<u32>> = BTreeSet::new();
        let id: Vec<u32> = (0..n).collect();
        all.insert(id.clone());
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
                                    let mut args = vec![0u32; ar];
                                    let mut rest = params;
                                    for (i, a) in args.iter_mut().enumerate() {
                                        if i == slot {
                                            *a = p[x as usize];
                                        } else {
                                            *a = rest % n;
                                            rest /= n;
                                        }
                                    }
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

    #[test]
    fn chain_entailments() {
        let m = Bimatrix::new(chain(2), &[1], &[0, 1]).unwrap();
        assert_eq!(bimatrix_entails(core::slice::from_ref(&m), &[f("p0")], &f("~~p0")).unwrap(), None);
        assert_eq!(bimatrix_entails(core::slice::from_ref(&m), &[f("~~p0")], &f("p0")).unwrap(), None);
        assert_eq!(bimatrix_entails(core::slice::from_ref(&m), &[f("p0 -> p1")], &f("p0 -> p1")).unwrap(), None);
        let w = bimatrix_entails(&[m], &[], &f("p0")).unwrap().unwrap();
        assert_eq!(w.assignment[&0], 0);
        let three = Bimatrix::new(chain(3), &[2], &[0, 1, 2]).unwrap();
        assert!(bimatrix_entails(&[three], &[f("~~p0")], &f("p0")).unwrap().is_some());
    }

    #[test]
    fn three_chain_collapses_middle() {
        // truth {1, 2} cannot tell 1 from 2 through any translation
        let m = Bimatrix::new(chain(3), &[1, 2], &[0, 1, 2]).unwrap();
        let (r, proj) = leibniz_reduce(&m).unwrap();
        assert_eq!(r.size(), 2);
        assert_eq!(proj, vec![0, 1, 1]);
        let types: Vec<Vec<bool>> = (0..3)
            .map(|a| translations(m.alg(), 3).iter().map(|p| m.is_true(p[a])).collect())
            .collect();
        assert_eq!(types[1], types[2]);
        assert_ne!(types[0], types[1]);
        let (again, id) = leibniz_reduce(&r).unwrap();
        assert_eq!(again, r);
        assert_eq!(id, vec![0, 1]);
    }

    #[test]
    fn refinement_matches_translation_types() {
        for n in 2..=4 {
            let alg = chain(n);
            let trans = translations(&alg, 3);
            for truth in 0u32..1 << n {
                for core in [0u32, (1 << n) - 1, 1 | 1 << (n - 1)] {
                    let pick = |mask: u32| (0..n as u32).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>();
                    let m = Bimatrix::new(alg.clone(), &pick(truth), &pick(core)).unwrap();
                    let p = leibniz_partition(&m);
                    for a in 0..n as u32 {
                        for b in 0..n as u32 {
                            let same = trans.iter().all(|t| {
                                m.is_true(t[a as usize]) == m.is_true(t[b as usize])
                                    && m.in_core(t[a as usize]) == m.in_core(t[b as usize])
                            });
                            assert_eq!(p.related(a, b), same, "n={n} truth={truth:b} core={core:b} a={a} b={b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn medvedev_with_top_truth_is_reduced() {
        for s in 1..=3 {
            let h = medvedev_algebra(s).unwrap();
            let ea = ExpandedAlgebra::sigma_cored(h.alg().clone(), &dne_sigma()).unwrap();
            assert!(is_core_generated(&ea));
            let m = Bimatrix::new(h.alg().clone(), &[h.top()], ea.core()).unwrap();
            assert!(is_reduced(&m), "s={s}");
        }
    }

    #[test]
    fn horn_lines() {
        let split = f("(p0 -> p1 | p2) -> (p0 -> p1) | (p0 -> p2)");
        let pairs = vec![(vec![f("p0")], f("p0")), (vec![], split), (vec![], f("bot -> bot"))];
        let weak = export_horn(&pairs, true);
        let lines: Vec<&str> = weak.lines().collect();
        assert_eq!(lines[0], "fof(c0, axiom, ![X0]: ((t(X0) & d(X0)) => t(X0))).");
        assert_eq!(
            lines[1],
            "fof(c1, axiom, ![X0,X1,X2]: ((d(X0) & d(X1) & d(X2)) => \
             t(imp(imp(X0,or(X1,X2)),or(imp(X0,X1),imp(X0,X2)))))).",
        );
        assert_eq!(lines[2], "fof(c2, axiom, t(imp(bot,bot))).");
        let strong = export_horn(&pairs, false);
        assert!(!strong.contains("d("));
        assert_eq!(strong.lines().next().unwrap(), "fof(c0, axiom, ![X0]: (t(X0) => t(X0))).");
    }
}
