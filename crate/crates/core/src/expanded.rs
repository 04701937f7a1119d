//! Expanded algebras: finite algebras with a designated core subset, the
//! core consequence relation and the class operators S, P and C.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    find_homomorphisms, membership, product, product_coords, product_index, search_homomorphisms, FiniteAlgebra,
    HomMode, Program,
};
use crate::error::{Error, Result};
use crate::syntax::Equation;

/// A finite algebra together with the interpretation of the core predicate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpandedAlgebra {
    alg: FiniteAlgebra,
    core: Vec<u32>,
}

impl ExpandedAlgebra {
    pub fn new(alg: FiniteAlgebra, core: &[u32]) -> Result<ExpandedAlgebra> {
        let mut core = core.to_vec();
        core.sort_unstable();
        core.dedup();
        if let Some(bad) = core.iter().find(|&&c| c as usize >= alg.size()) {
            return Err(Error::Precondition(format!("core element {bad} outside the universe")));
        }
        Ok(ExpandedAlgebra { alg, core })
    }

    /// Expands `alg` with the core cut out by `sigma`.
    pub fn sigma_cored(alg: FiniteAlgebra, sigma: &[Equation]) -> Result<ExpandedAlgebra> {
        let core = sigma_core(&alg, sigma)?;
        Ok(ExpandedAlgebra { alg, core })
    }

    pub fn alg(&self) -> &FiniteAlgebra {
        &self.alg
    }

    /// Sorted core elements.
    pub fn core(&self) -> &[u32] {
        &self.core
    }

    pub fn in_core(&self, a: u32) -> bool {
        self.core.binary_search(&a).is_ok()
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }
}

/// `premises => conclusion`, read with all atoms universally quantified.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiEquation {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl QuasiEquation {
    pub fn new(premises: Vec<Equation>, conclusion: Equation) -> QuasiEquation {
        QuasiEquation { premises, conclusion }
    }

    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = self.conclusion.atoms();
        for e in &self.premises {
            out.extend(e.atoms());
        }
        out
    }
}

/// Elements satisfying every equation of `sigma` with `p0` set to them.
pub fn sigma_core(alg: &FiniteAlgebra, sigma: &[Equation]) -> Result<Vec<u32>> {
    let mut progs = Vec::with_capacity(sigma.len());
    for e in sigma {
        if let Some(&a) = e.atoms().iter().find(|&&a| a != 0) {
            return Err(Error::NotUnivariate(a));
        }
        progs.push((alg.compile(&e.lhs)?, alg.compile(&e.rhs)?));
    }
    let mut stack = Vec::new();
    Ok((0..alg.size() as u32)
        .filter(|&a| {
            progs.iter().all(|(l, r)| {
                let h = [a];
                l.eval(alg, &h, &mut stack) == r.eval(alg, &h, &mut stack)
            })
        })
        .collect())
}

/// Whether the core generates the whole algebra.
pub fn is_core_generated(ea: &ExpandedAlgebra) -> bool {
    ea.alg.generate_subalgebra(&ea.core).len() == ea.alg.size()
}

/// Refuting assignment found by [`core_entails`]: the index of the algebra in
/// the family and the value of each atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreWitness {
    pub algebra: usize,
    pub assignment: BTreeMap<u32, u32>,
}

/// Verdict of a finite-family entailment check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entailment {
    Holds,
    Refuted(CoreWitness),
}

impl Entailment {
    pub fn holds(&self) -> bool {
        matches!(self, Entailment::Holds)
    }

    pub fn witness(&self) -> Option<&CoreWitness> {
        match self {
            Entailment::Holds => None,
            Entailment::Refuted(w) => Some(w),
        }
    }
}

/// Core consequence over a finite family: every assignment of the occurring
/// atoms into the core that satisfies `theta` satisfies `concl`.
///
/// Assignments are tried in lexicographic order of (algebra, values), so the
/// witness is the first one in that order.
pub fn core_entails(k: &[ExpandedAlgebra], theta: &[Equation], concl: &Equation) -> Result<Entailment> {
    for (i, ea) in k.iter().enumerate() {
        if let Some(assignment) = first_refutation(&ea.alg, &ea.core, theta, concl)? {
            return Ok(Entailment::Refuted(CoreWitness { algebra: i, assignment }));
        }
    }
    Ok(Entailment::Holds)
}

/// As [`core_entails`] but over all assignments, ignoring the core.
pub fn entails_unrestricted(k: &[ExpandedAlgebra], theta: &[Equation], concl: &Equation) -> Result<Entailment> {
    for (i, ea) in k.iter().enumerate() {
        let all: Vec<u32> = (0..ea.alg.size() as u32).collect();
        if let Some(assignment) = first_refutation(&ea.alg, &all, theta, concl)? {
            return Ok(Entailment::Refuted(CoreWitness { algebra: i, assignment }));
        }
    }
    Ok(Entailment::Holds)
}

/// Whether the quasi-equation holds under every core assignment of `ea`.
pub fn core_valid(ea: &ExpandedAlgebra, q: &QuasiEquation) -> Result<Option<BTreeMap<u32, u32>>> {
    first_refutation(&ea.alg, &ea.core, &q.premises, &q.conclusion)
}

struct Compiled {
    lhs: Program,
    rhs: Program,
    // position in the atom order after which the equation can be decided
    ready: usize,
}

/// Lexicographically first assignment from `values` satisfying `theta` and
/// refuting `concl`. Premises are checked as soon as their atoms are bound.
pub(crate) fn first_refutation(
    alg: &FiniteAlgebra,
    values: &[u32],
    theta: &[Equation],
    concl: &Equation,
) -> Result<Option<BTreeMap<u32, u32>>> {
    let mut atoms: BTreeSet<u32> = concl.atoms();
    for e in theta {
        atoms.extend(e.atoms());
    }
    let atoms: Vec<u32> = atoms.into_iter().collect();
    let compile = |e: &Equation| -> Result<Compiled> {
        let ready = e.atoms().iter().map(|a| atoms.binary_search(a).unwrap_or(0) + 1).max().unwrap_or(0);
        Ok(Compiled { lhs: alg.compile(&e.lhs)?, rhs: alg.compile(&e.rhs)?, ready })
    };
    let premises = theta.iter().map(compile).collect::<Result<Vec<_>>>()?;
    let goal = compile(concl)?;
    // premises[by_depth[d]] become decidable once d atoms are bound
    let mut by_depth: Vec<Vec<usize>> = vec![Vec::new(); atoms.len() + 1];
    for (i, p) in premises.iter().enumerate() {
        by_depth[p.ready].push(i);
    }
    let width = atoms.last().map_or(0, |&a| a as usize + 1);
    let mut h = vec![0u32; width];
    let mut stack = Vec::new();
    let holds = |c: &Compiled, h: &[u32], stack: &mut Vec<u32>| c.lhs.eval(alg, h, stack) == c.rhs.eval(alg, h, stack);
    if by_depth[0].iter().any(|&i| !holds(&premises[i], &h, &mut stack)) {
        return Ok(None);
    }
    if atoms.is_empty() {
        return Ok((!holds(&goal, &h, &mut stack)).then(BTreeMap::new));
    }
    if values.is_empty() {
        return Ok(None);
    }
    // odometer over values^atoms with pruning at each depth
    let n = atoms.len();
    let mut pos = vec![0usize; n];
    let mut depth = 0usize;
    loop {
        h[atoms[depth] as usize] = values[pos[depth]];
        let ok = by_depth[depth + 1].iter().all(|&i| holds(&premises[i], &h, &mut stack));
        if ok && depth + 1 < n {
            depth += 1;
            pos[depth] = 0;
            continue;
        }
        if ok && !holds(&goal, &h, &mut stack) {
            return Ok(Some(atoms.iter().map(|&a| (a, h[a as usize])).collect()));
        }
        // advance
        loop {
            pos[depth] += 1;
            if pos[depth] < values.len() {
                break;
            }
            if depth == 0 {
                return Ok(None);
            }
            depth -= 1;
        }
    }
}

/// Class operator exercised by [`check_preservation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassOp {
    /// Subalgebras.
    S,
    /// Binary direct products.
    P,
    /// Σ-core superalgebras drawn from an ambient family.
    C,
}

/// What went wrong on one derived structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreservationFailure {
    /// The Σ-core of the derived algebra differs from the transported core.
    CoreMismatch { members: Vec<usize>, detail: String },
    /// The quasi-equation was core-valid on the sources but not on the result.
    ValidityLost { members: Vec<usize>, assignment: BTreeMap<u32, u32> },
}

/// Outcome of [`check_preservation`]: number of derived structures examined
/// and every violation found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PreservationReport {
    pub checked: usize,
    pub failures: Vec<PreservationFailure>,
}

impl PreservationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All subalgebras of `alg` as sorted element lists, smallest generated
/// first. Closed under union-closure from single generators.
pub fn subalgebras(alg: &FiniteAlgebra, limit: usize) -> Result<Vec<Vec<u32>>> {
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut queue = vec![alg.generate_subalgebra(&[])];
    if queue[0].is_empty() {
        // no constants: the empty set is a (degenerate) subuniverse we skip
        queue.clear();
        for a in 0..alg.size() as u32 {
            queue.push(alg.generate_subalgebra(&[a]));
        }
    }
    let mut out = Vec::new();
    while let Some(s) = queue.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        if seen.len() > limit {
            return Err(Error::CapExceeded { what: "subalgebra count", limit, requested: seen.len() });
        }
        let inside = membership(&s, alg.size());
        for a in 0..alg.size() as u32 {
            if !inside[a as usize] {
                let mut seed = s.clone();
                seed.push(a);
                let next = alg.generate_subalgebra(&seed);
                if !seen.contains(&next) {
                    queue.push(next);
                }
            }
        }
        out.push(s);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Checks that Σ-cores are recomputed correctly and that core validity of `q`
/// survives the operator `op` applied to members of `k`.
///
/// For `S` every subalgebra of every member is examined; for `P` every
/// ordered pair of members (under `cap`); for `C` every member of `ambient`
/// that strictly embeds a member of `k` with the same Σ-core.
pub fn check_preservation(
    k: &[ExpandedAlgebra],
    sigma: &[Equation],
    q: &QuasiEquation,
    op: ClassOp,
    ambient: &[ExpandedAlgebra],
    cap: usize,
) -> Result<PreservationReport> {
    for ea in k {
        if sigma_core(&ea.alg, sigma)? != ea.core {
            return Err(Error::Precondition("family member is not Σ-cored".into()));
        }
    }
    let valid: Vec<bool> = k.iter().map(|ea| core_valid(ea, q).map(|r| r.is_none())).collect::<Result<_>>()?;
    let mut report = PreservationReport::default();
    match op {
        ClassOp::S => {
            for (i, ea) in k.iter().enumerate() {
                for members in subalgebras(&ea.alg, cap)? {
                    let (sub, incl) = ea.alg.subalgebra(&members)?;
                    report.checked += 1;
                    let transported: Vec<u32> = (0..incl.len() as u32).filter(|&j| ea.in_core(incl[j as usize])).collect();
                    let recomputed = sigma_core(&sub, sigma)?;
                    if recomputed != transported {
                        report.failures.push(PreservationFailure::CoreMismatch {
                            members: vec![i],
                            detail: format!("subalgebra {members:?}: Σ gives {recomputed:?}, restriction gives {transported:?}"),
                        });
                        continue;
                    }
                    let sub = ExpandedAlgebra { alg: sub, core: recomputed };
                    if valid[i] {
                        if let Some(assignment) = core_valid(&sub, q)? {
                            report.failures.push(PreservationFailure::ValidityLost { members: vec![i], assignment });
                        }
                    }
                }
            }
        }
        ClassOp::P => {
            for i in 0..k.len() {
                for j in 0..k.len() {
                    let (a, b) = (&k[i], &k[j]);
                    let prod = product(&[&a.alg, &b.alg], cap)?;
                    report.checked += 1;
                    let sizes = [a.size(), b.size()];
                    let mut expected: Vec<u32> = Vec::new();
                    for &x in &a.core {
                        for &y in &b.core {
                            expected.push(product_index(&[x, y], &sizes));
                        }
                    }
                    expected.sort_unstable();
                    let recomputed = sigma_core(&prod, sigma)?;
                    if recomputed != expected {
                        report.failures.push(PreservationFailure::CoreMismatch {
                            members: vec![i, j],
                            detail: format!("product core {recomputed:?} differs from {expected:?}"),
                        });
                        continue;
                    }
                    let pe = ExpandedAlgebra { alg: prod, core: recomputed };
                    if let Some(assignment) = core_valid(&pe, q)? {
                        // a refutation in the product projects to a factor
                        let mut c = [0u32; 2];
                        let mut projected = [false; 2];
                        for (f, slot) in projected.iter_mut().enumerate() {
                            let h: BTreeMap<u32, u32> = assignment
                                .iter()
                                .map(|(&p, &v)| {
                                    product_coords(v, &sizes, &mut c);
                                    (p, c[f])
                                })
                                .collect();
                            *slot = refutes(if f == 0 { a } else { b }, q, &h)?;
                        }
                        if (valid[i] && valid[j]) || !(projected[0] || projected[1]) {
                            report.failures.push(PreservationFailure::ValidityLost { members: vec![i, j], assignment });
                        }
                    }
                }
            }
        }
        ClassOp::C => {
            for (i, ea) in k.iter().enumerate() {
                for big in ambient {
                    if big.alg.sig() != ea.alg.sig() || big.size() < ea.size() {
                        continue;
                    }
                    let big_core = sigma_core(&big.alg, sigma)?;
                    let mut embeddings = Vec::new();
                    search_homomorphisms(&ea.alg, &big.alg, HomMode::Strict, Some(&ea.core), Some(&big_core), &mut |h| {
                        let mut img = h.to_vec();
                        img.sort_unstable();
                        img.dedup();
                        if img.len() == h.len() {
                            embeddings.push(h.to_vec());
                        }
                        true
                    })?;
                    for emb in embeddings {
                        let mut image_core: Vec<u32> = ea.core.iter().map(|&c| emb[c as usize]).collect();
                        image_core.sort_unstable();
                        if image_core != big_core {
                            continue;
                        }
                        report.checked += 1;
                        let superalg = ExpandedAlgebra { alg: big.alg.clone(), core: big_core.clone() };
                        if let Some(assignment) = core_valid(&superalg, q)? {
                            // pull the witness back along the embedding
                            let back: BTreeMap<u32, u32> = assignment
                                .iter()
                                .map(|(&p, &v)| (p, emb.iter().position(|&e| e == v).unwrap_or(0) as u32))
                                .collect();
                            if valid[i] || !refutes(ea, q, &back)? {
                                report.failures.push(PreservationFailure::ValidityLost { members: vec![i], assignment });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

fn refutes(ea: &ExpandedAlgebra, q: &QuasiEquation, h: &BTreeMap<u32, u32>) -> Result<bool> {
    if h.values().any(|&v| !ea.in_core(v)) {
        return Ok(false);
    }
    for e in &q.premises {
        if ea.alg.eval_map(&e.lhs, h)? != ea.alg.eval_map(&e.rhs, h)? {
            return Ok(false);
        }
    }
    Ok(ea.alg.eval_map(&q.conclusion.lhs, h)? != ea.alg.eval_map(&q.conclusion.rhs, h)?)
}

/// Searches a strong embedding of the partial structure on `x` (operations
/// restricted to tuples whose arguments and value lie in `x`) into some
/// member of `k`. Returns the member index and the map, listed in the order of
/// the sorted `x`.
pub fn local_subgraph_embeds(a: &ExpandedAlgebra, x: &[u32], k: &[ExpandedAlgebra]) -> Option<(usize, Vec<u32>)> {
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let pos_of = |e: u32| xs.binary_search(&e).ok();
    // defined facts: (op, argument positions, value position)
    let mut facts: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let alg = &a.alg;
    for op in 0..alg.sig().len() {
        let arity = alg.arity(op);
        let mut idx = vec![0usize; arity];
        loop {
            let args: Vec<u32> = idx.iter().map(|&i| xs[i]).collect();
            if let Some(v) = pos_of(alg.apply(op, &args)) {
                facts.push((op, idx.clone(), v));
            }
            let mut carry = true;
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < xs.len() {
                    carry = false;
                    break;
                }
                *slot = 0;
            }
            if carry || xs.is_empty() {
                break;
            }
        }
    }
    for (t, target) in k.iter().enumerate() {
        if target.alg.sig() != alg.sig() || target.size() < xs.len() {
            continue;
        }
        let mut h = vec![u32::MAX; xs.len()];
        let mut used = vec![false; target.size()];
        if embed_from(0, &xs, a, target, &facts, &mut h, &mut used) {
            return Some((t, h));
        }
    }
    None
}

fn embed_from(
    i: usize,
    xs: &[u32],
    a: &ExpandedAlgebra,
    target: &ExpandedAlgebra,
    facts: &[(usize, Vec<usize>, usize)],
    h: &mut Vec<u32>,
    used: &mut Vec<bool>,
) -> bool {
    if i == xs.len() {
        return true;
    }
    let need_core = a.in_core(xs[i]);
    for b in 0..target.size() as u32 {
        if used[b as usize] || (need_core && !target.in_core(b)) {
            continue;
        }
        h[i] = b;
        let consistent = facts.iter().all(|(op, args, v)| {
            let top = args.iter().copied().chain([*v]).max().unwrap_or(0);
            if top != i {
                return true;
            }
            let img: Vec<u32> = args.iter().map(|&p| h[p]).collect();
            target.alg.apply(*op, &img) == h[*v]
        });
        if consistent {
            used[b as usize] = true;
            if embed_from(i + 1, xs, a, target, facts, h, used) {
                return true;
            }
            used[b as usize] = false;
        }
    }
    h[i] = u32::MAX;
    false
}

/// Homomorphisms between two expanded algebras that fail to be strong.
/// Empty whenever both cores are cut out by the same equations.
pub fn non_strong_homomorphisms(src: &ExpandedAlgebra, dst: &ExpandedAlgebra) -> Result<Vec<Vec<u32>>> {
    let all = find_homomorphisms(&src.alg, &dst.alg, HomMode::All, None, None)?;
    Ok(all.into_iter().filter(|h| src.core.iter().any(|&c| !dst.in_core(h[c as usize]))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::chain;
    use crate::algebra::DEFAULT_PRODUCT_CAP;
    use crate::syntax::{parse_equation, Signature};

    fn eq(s: &str) -> Equation {
        parse_equation(s, &Signature::int()).unwrap()
    }

    fn dne() -> Vec<Equation> {
        vec![eq("p0 ~ ~~p0")]
    }

    #[test]
    fn sigma_core_basics() {
        let c3 = chain(3);
        assert_eq!(sigma_core(&c3, &[]).unwrap(), vec![0, 1, 2]);
        assert_eq!(sigma_core(&c3, &[eq("p0 ~ p0")]).unwrap(), vec![0, 1, 2]);
        assert_eq!(sigma_core(&c3, &dne()).unwrap(), vec![0, 2]);
        assert_eq!(sigma_core(&c3, &[eq("p0 ~ p1")]), Err(Error::NotUnivariate(1)));
    }

    #[test]
    fn three_chain_is_not_regularly_generated() {
        let ea = ExpandedAlgebra::sigma_cored(chain(3), &dne()).unwrap();
        assert!(!is_core_generated(&ea));
        let full = ExpandedAlgebra::new(chain(3), &[0, 1, 2]).unwrap();
        assert!(is_core_generated(&full));
    }

    #[test]
    fn core_versus_unrestricted() {
        let ea = ExpandedAlgebra::sigma_cored(chain(3), &dne()).unwrap();
        let k = [ea];
        let concl = eq("~~p0 ~ p0");
        assert!(core_entails(&k, &[], &concl).unwrap().holds());
        let un = entails_unrestricted(&k, &[], &concl).unwrap();
        assert_eq!(un.witness().unwrap().assignment, BTreeMap::from([(0, 1)]));
        assert!(core_entails(&k, &[eq("p0 ~ p1")], &eq("p1 ~ p0")).unwrap().holds());
        assert!(core_entails(&[], &[], &eq("p0 ~ p1")).unwrap().holds());
    }

    #[test]
    fn witness_is_lexicographically_first() {
        let k = [ExpandedAlgebra::new(chain(3), &[0, 1, 2]).unwrap()];
        let r = core_entails(&k, &[eq("p0 & p1 ~ p1")], &eq("p0 ~ p1")).unwrap();
        // first (p0, p1) with p1 <= p0 and p0 != p1
        assert_eq!(r.witness().unwrap().assignment, BTreeMap::from([(0, 1), (1, 0)]));
    }

    #[test]
    fn subalgebras_of_the_three_chain() {
        let subs = subalgebras(&chain(3), 100).unwrap();
        assert_eq!(subs, vec![vec![0, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn preservation_on_chains() {
        let k = [
            ExpandedAlgebra::sigma_cored(chain(2), &dne()).unwrap(),
            ExpandedAlgebra::sigma_cored(chain(3), &dne()).unwrap(),
        ];
        let q = QuasiEquation::new(vec![eq("p0 -> p1 ~ bot -> bot")], eq("p0 & p1 ~ p0"));
        for op in [ClassOp::S, ClassOp::P] {
            let r = check_preservation(&k, &dne(), &q, op, &[], DEFAULT_PRODUCT_CAP).unwrap();
            assert!(r.passed(), "{op:?}: {r:?}");
            assert!(r.checked > 0);
        }
        // the 3-chain is a core superalgebra of the 2-chain
        let amb = [ExpandedAlgebra::sigma_cored(chain(3), &dne()).unwrap()];
        let r = check_preservation(&k[..1], &dne(), &q, ClassOp::C, &amb, DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(r.checked, 1);
        assert!(r.passed());
    }

    #[test]
    fn local_subgraphs() {
        let c2 = ExpandedAlgebra::new(chain(2), &[0, 1]).unwrap();
        let p = product(&[c2.alg(), c2.alg()], DEFAULT_PRODUCT_CAP).unwrap();
        let p = ExpandedAlgebra::new(p, &[0, 1, 2, 3]).unwrap();
        assert_eq!(local_subgraph_embeds(&c2, &[0, 1], core::slice::from_ref(&c2)), Some((0, vec![0, 1])));
        assert_eq!(local_subgraph_embeds(&c2, &[0, 1], core::slice::from_ref(&p)), Some((0, vec![0, 3])));
        let empty_core = ExpandedAlgebra::new(chain(3), &[]).unwrap();
        assert_eq!(local_subgraph_embeds(&c2, &[1], &[empty_core]), None);
    }

    #[test]
    fn homomorphisms_between_regular_cored_chains_are_strong() {
        let c2 = ExpandedAlgebra::sigma_cored(chain(2), &dne()).unwrap();
        let c3 = ExpandedAlgebra::sigma_cored(chain(3), &dne()).unwrap();
        for (a, b) in [(&c2, &c3), (&c3, &c2), (&c3, &c3)] {
            assert!(non_strong_homomorphisms(a, b).unwrap().is_empty());
        }
    }
}
