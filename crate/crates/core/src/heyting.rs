//! Heyting algebras of upsets of finite posets, Medvedev frames and a
//! bounded intuitionistic equivalence checker.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::expanded::{sigma_core, ExpandedAlgebra};
use crate::syntax::{Connective, Equation, Formula, Signature};

/// Largest poset handled; points are bits of a `u64`.
pub const MAX_POINTS: usize = 64;

/// Largest number of upsets [`upset_algebra`] will build.
pub const MAX_UPSETS: usize = 4096;

/// Largest Medvedev parameter accepted by [`medvedev_frame`].
pub const MAX_MEDVEDEV: usize = 4;

/// A finite partial order on `0..n`. `up[i]` has bit `j` set iff `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePoset {
    n: usize,
    up: Vec<u64>,
}

impl FinitePoset {
    /// Builds a poset from its order relation, checking the poset laws.
    pub fn new(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<FinitePoset> {
        if n > MAX_POINTS {
            return Err(Error::CapExceeded { what: "poset points", limit: MAX_POINTS, requested: n });
        }
        let mut up = vec![0u64; n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    *row |= 1 << j;
                }
            }
        }
        let p = FinitePoset { n, up };
        p.validate()?;
        Ok(p)
    }

    /// Reflexive-transitive closure of the given covering pairs `(lower, upper)`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<FinitePoset> {
        if n > MAX_POINTS {
            return Err(Error::CapExceeded { what: "poset points", limit: MAX_POINTS, requested: n });
        }
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::NotAPoset);
            }
            up[a] |= 1 << b;
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut acc = up[i];
                for j in bits(up[i]) {
                    acc |= up[j];
                }
                if acc != up[i] {
                    up[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let p = FinitePoset { n, up };
        p.validate()?;
        Ok(p)
    }

    pub fn antichain(n: usize) -> Result<FinitePoset> {
        FinitePoset::new(n, |i, j| i == j)
    }

    /// `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Result<FinitePoset> {
        FinitePoset::new(n, |i, j| i <= j)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if self.up[i] & (1 << i) == 0 {
                return Err(Error::NotAPoset);
            }
            for j in bits(self.up[i]) {
                if j != i && self.up[j] & (1 << i) != 0 {
                    return Err(Error::NotAPoset);
                }
                if self.up[j] & !self.up[i] != 0 {
                    return Err(Error::NotAPoset);
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] & (1 << j) != 0
    }

    /// Points above `i`, including `i`.
    pub fn up(&self, i: usize) -> u64 {
        self.up[i]
    }

    /// Upward closure of a set of points.
    pub fn up_closure(&self, set: u64) -> u64 {
        bits(set).fold(0, |acc, i| acc | self.up[i])
    }

    pub fn is_upset(&self, set: u64) -> bool {
        self.up_closure(set) == set
    }

    /// All upsets in increasing numeric order.
    pub fn upsets(&self, cap: usize) -> Result<Vec<u64>> {
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut stack = vec![0u64];
        seen.insert(0);
        while let Some(u) = stack.pop() {
            for i in 0..self.n {
                if u & (1 << i) == 0 {
                    let v = u | self.up[i];
                    if seen.insert(v) {
                        if seen.len() > cap {
                            return Err(Error::CapExceeded { what: "upsets", limit: cap, requested: seen.len() });
                        }
                        stack.push(v);
                    }
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Relation matrix as a bit string, row `i` occupying bits `i*n..(i+1)*n`.
    fn code(&self, perm: &[usize]) -> u64 {
        let n = self.n;
        let mut code = 0u64;
        for i in 0..n {
            for j in 0..n {
                if self.leq(perm[i], perm[j]) {
                    code |= 1 << (i * n + j);
                }
            }
        }
        code
    }

    /// Least relation code over all relabellings; equal iff isomorphic.
    /// Defined for at most 8 points.
    pub fn canonical_code(&self) -> u64 {
        assert!(self.n <= 8, "canonical codes are limited to 8 points");
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = self.code(&perm);
        while next_permutation(&mut perm) {
            best = best.min(self.code(&perm));
        }
        best
    }
}

pub(crate) fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(i)
        }
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All posets with exactly `n` points, one per isomorphism class, ordered by
/// canonical code. Built by adding a new maximal point over every downset.
pub fn posets_up_to_iso(n: usize) -> Vec<FinitePoset> {
    assert!(n <= 8, "poset enumeration is limited to 8 points");
    let mut layer = vec![FinitePoset { n: 0, up: Vec::new() }];
    for m in 0..n {
        let mut next: alloc::collections::BTreeMap<u64, FinitePoset> = alloc::collections::BTreeMap::new();
        for p in &layer {
            let full = (1u64 << m) - 1;
            for below in 0..=full {
                // `below` must be a downset: its complement an upset
                if !p.is_upset(full & !below) {
                    continue;
                }
                let mut up: Vec<u64> = p.up.clone();
                for (i, row) in up.iter_mut().enumerate() {
                    if below & (1 << i) != 0 {
                        *row |= 1 << m;
                    }
                }
                up.push(1 << m);
                let q = FinitePoset { n: m + 1, up };
                next.entry(q.canonical_code()).or_insert(q);
            }
        }
        layer = next.into_values().collect();
    }
    layer
}

/// A Heyting algebra as a finite algebra, with the poset it came from when
/// it was built from upsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeytingAlgebra {
    alg: FiniteAlgebra,
    poset: Option<FinitePoset>,
    upsets: Vec<u64>,
}

impl HeytingAlgebra {
    /// Wraps an algebra over a signature containing `and`, `imp` and `bot`,
    /// checking `a & b <= c  iff  a <= b -> c` on all triples.
    pub fn from_algebra(alg: FiniteAlgebra) -> Result<HeytingAlgebra> {
        check_residuation(&alg)?;
        Ok(HeytingAlgebra { alg, poset: None, upsets: Vec::new() })
    }

    pub fn alg(&self) -> &FiniteAlgebra {
        &self.alg
    }

    pub fn into_alg(self) -> FiniteAlgebra {
        self.alg
    }

    pub fn poset(&self) -> Option<&FinitePoset> {
        self.poset.as_ref()
    }

    /// The upset (as a point bitset) behind element `e`, if known.
    pub fn upset_of(&self, e: u32) -> Option<u64> {
        self.upsets.get(e as usize).copied()
    }

    /// Element whose upset is `set`.
    pub fn element_of(&self, set: u64) -> Option<u32> {
        self.upsets.binary_search(&set).ok().map(|i| i as u32)
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    pub fn top(&self) -> u32 {
        let imp = self.alg.op_index(&Connective::Imp).unwrap_or(0);
        let bot = self.alg.constant(&Connective::Bot).unwrap_or(0);
        self.alg.apply2(imp, bot, bot)
    }
}

fn op(alg: &FiniteAlgebra, c: Connective) -> Result<usize> {
    alg.op_index(&c).ok_or_else(|| Error::UnknownConnective(c.name().into()))
}

/// Checks the residuation law with `<=` read off the meet table.
pub fn check_residuation(alg: &FiniteAlgebra) -> Result<()> {
    let and = op(alg, Connective::And)?;
    let imp = op(alg, Connective::Imp)?;
    let n = alg.size() as u32;
    let leq = |x: u32, y: u32| alg.apply2(and, x, y) == x;
    for a in 0..n {
        for b in 0..n {
            let ab = alg.apply2(and, a, b);
            for c in 0..n {
                if leq(ab, c) != leq(a, alg.apply2(imp, b, c)) {
                    return Err(Error::NotHeyting { a, b, c });
                }
            }
        }
    }
    Ok(())
}

/// Upsets of `p` under intersection, union and relative pseudo-complement,
/// over the `int` signature. Element order is the numeric order of the upset
/// bitsets, so `bot` is element 0 and the full set is the last element.
pub fn upset_algebra(p: &FinitePoset) -> Result<HeytingAlgebra> {
    upset_algebra_with(p, Signature::int(), |_, _| 0)
}

fn upset_algebra_with(
    p: &FinitePoset,
    sig: Signature,
    mut extra: impl FnMut(u64, u64) -> u64,
) -> Result<HeytingAlgebra> {
    let upsets = p.upsets(MAX_UPSETS)?;
    let index = |s: u64| upsets.binary_search(&s).expect("closed under the operations") as u32;
    let imp = |a: u64, b: u64| -> u64 {
        let mut out = 0u64;
        for i in 0..p.n {
            if p.up[i] & a & !b == 0 {
                out |= 1 << i;
            }
        }
        out
    };
    let conns: Vec<Connective> = sig.connectives().iter().map(|(c, _)| c.clone()).collect();
    let alg = FiniteAlgebra::from_fn(sig, upsets.len(), |k, args| {
        let x = args.first().map_or(0, |&a| upsets[a as usize]);
        let y = args.get(1).map_or(0, |&a| upsets[a as usize]);
        match conns[k] {
            Connective::And => index(x & y),
            Connective::Or => index(x | y),
            Connective::Imp => index(imp(x, y)),
            Connective::Bot => 0,
            _ => index(extra(x, y)),
        }
    })?;
    check_residuation(&alg)?;
    Ok(HeytingAlgebra { alg, poset: Some(p.clone()), upsets })
}

/// `(℘⁺(s), ⊇)` for `|s| = s_size`. Point `i` stands for the nonempty subset
/// with bitmask `i + 1`; `x <= y` iff `x ⊇ y`.
pub fn medvedev_frame(s_size: usize) -> Result<FinitePoset> {
    if s_size == 0 || s_size > MAX_MEDVEDEV {
        return Err(Error::CapExceeded { what: "Medvedev frame parameter", limit: MAX_MEDVEDEV, requested: s_size });
    }
    let n = (1usize << s_size) - 1;
    FinitePoset::new(n, |i, j| {
        let (x, y) = (i + 1, j + 1);
        x & y == y
    })
}

/// Upset algebra of the Medvedev frame over the `int` signature.
pub fn medvedev_algebra(s_size: usize) -> Result<HeytingAlgebra> {
    upset_algebra(&medvedev_frame(s_size)?)
}

/// Upset algebra of the Medvedev frame over the `inq` signature, with
/// `U ⊗ V = {u ∪ v}` where `u`, `v` range over `U`, `V` and the empty set.
///
/// Construction checks residuation, the distributivity equation
/// `x ⊗ (y ∨ z) ≈ (x ⊗ y) ∨ (x ⊗ z)`, the monotonicity equation
/// `(x → z) → ((y → k) → (x ⊗ y → z ⊗ k)) ≈ 1`, and that the regular
/// elements form a Boolean algebra with `⊗` as join.
pub fn medvedev_tensor_algebra(s_size: usize) -> Result<HeytingAlgebra> {
    let frame = medvedev_frame(s_size)?;
    let n = frame.n;
    let tensor = |a: u64, b: u64| -> u64 {
        // teams as masks t = point + 1; 0 stands for the empty team
        let teams = |u: u64| core::iter::once(0usize).chain(bits(u).map(|i| i + 1));
        let mut out = 0u64;
        for x in teams(a) {
            for y in teams(b) {
                let t = x | y;
                if t != 0 {
                    out |= 1 << (t - 1);
                }
            }
        }
        out & ((1u64 << n) - 1)
    };
    let h = upset_algebra_with(&frame, Signature::inq(), tensor)?;
    check_tensor_laws(&h.alg)?;
    Ok(h)
}

/// The distributivity and monotonicity equations and Boolean behaviour of
/// the tensor on regular elements.
pub fn check_tensor_laws(alg: &FiniteAlgebra) -> Result<()> {
    let and = op(alg, Connective::And)?;
    let or = op(alg, Connective::Or)?;
    let imp = op(alg, Connective::Imp)?;
    let ten = op(alg, Connective::Tensor)?;
    let bot = alg.constant(&Connective::Bot).ok_or(Error::UnknownConnective("bot".into()))?;
    let n = alg.size() as u32;
    let fail = |what: &str| Error::InvalidTable(alloc::format!("tensor law fails: {what}"));
    for x in 0..n {
        for y in 0..n {
            let xy = alg.apply2(ten, x, y);
            for z in 0..n {
                let lhs = alg.apply2(ten, x, alg.apply2(or, y, z));
                if lhs != alg.apply2(or, xy, alg.apply2(ten, x, z)) {
                    return Err(fail("distributivity"));
                }
            }
        }
    }
    // (x -> z) & (y -> k) <= (x * y) -> (z * k), equivalently the equation above
    for x in 0..n {
        for z in 0..n {
            let xz = alg.apply2(imp, x, z);
            for y in 0..n {
                let xy = alg.apply2(ten, x, y);
                let lhs0 = alg.apply2(and, xz, xy);
                for k in 0..n {
                    let zk = alg.apply2(ten, z, k);
                    let c = alg.apply2(and, lhs0, alg.apply2(imp, y, k));
                    if alg.apply2(and, c, zk) != c {
                        return Err(fail("monotonicity"));
                    }
                }
            }
        }
    }
    let not = |a: u32| alg.apply2(imp, a, bot);
    let regular: Vec<u32> = (0..n).filter(|&a| not(not(a)) == a).collect();
    for &a in &regular {
        for &b in &regular {
            let j = alg.apply2(ten, a, b);
            if not(not(j)) != j {
                return Err(fail("regular elements not closed"));
            }
            // least upper bound among regular elements
            let is_ub = |c: u32| alg.apply2(and, a, c) == a && alg.apply2(and, b, c) == b;
            if !is_ub(j) || regular.iter().any(|&c| is_ub(c) && alg.apply2(and, j, c) != j) {
                return Err(fail("tensor is not the join of regular elements"));
            }
        }
    }
    Ok(())
}

/// `{p0 ≈ ~~p0}`.
pub fn dne_sigma() -> Vec<Equation> {
    vec![Equation::new(Formula::atom(0), Formula::not(Formula::not(Formula::atom(0))))]
}

/// Expands with the regular elements (fixpoints of double negation) as core.
pub fn regular_core(h: &HeytingAlgebra) -> Result<ExpandedAlgebra> {
    let core = sigma_core(&h.alg, &dne_sigma())?;
    ExpandedAlgebra::new(h.alg.clone(), &core)
}

/// Outcome of [`ipc_equiv_bounded`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IpcVerdict {
    /// No separating valuation on any poset with at most `bound` points.
    EquivalentUpToBound(usize),
    /// A poset and an upset per atom (index = atom) separating the formulas.
    Countermodel { poset: FinitePoset, valuation: Vec<u64> },
}

impl IpcVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, IpcVerdict::EquivalentUpToBound(_))
    }
}

/// Upset algebras of all posets up to a size bound, reused across queries.
#[derive(Clone, Debug)]
pub struct IpcChecker {
    bound: usize,
    algebras: Vec<HeytingAlgebra>,
}

/// Default poset size bound for [`ipc_equiv_bounded`].
pub const DEFAULT_FRAME_BOUND: usize = 6;

impl IpcChecker {
    pub fn new(frame_bound: usize) -> Result<IpcChecker> {
        let mut algebras = Vec::new();
        for n in 1..=frame_bound {
            for p in posets_up_to_iso(n) {
                algebras.push(upset_algebra(&p)?);
            }
        }
        Ok(IpcChecker { bound: frame_bound, algebras })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn algebras(&self) -> &[HeytingAlgebra] {
        &self.algebras
    }

    /// Compares `f` and `g` on every valuation of every stored algebra,
    /// reading `⊗` as `∨`.
    pub fn equiv(&self, f: &Formula, g: &Formula) -> Result<IpcVerdict> {
        let f = f.replace_connective(&Connective::Tensor, &Connective::Or);
        let g = g.replace_connective(&Connective::Tensor, &Connective::Or);
        let mut atoms = f.atoms();
        atoms.extend(g.atoms());
        let atoms: Vec<u32> = atoms.into_iter().collect();
        let width = atoms.last().map_or(0, |&a| a as usize + 1);
        let mut stack = Vec::new();
        for h in &self.algebras {
            let pf = h.alg.compile(&f)?;
            let pg = h.alg.compile(&g)?;
            let size = h.size() as u32;
            let mut val = vec![0u32; width];
            let mut pos = vec![0u32; atoms.len()];
            loop {
                for (&a, &v) in atoms.iter().zip(&pos) {
                    val[a as usize] = v;
                }
                if pf.eval(&h.alg, &val, &mut stack) != pg.eval(&h.alg, &val, &mut stack) {
                    return Ok(IpcVerdict::Countermodel {
                        poset: h.poset.clone().expect("built from a poset"),
                        valuation: val.iter().map(|&e| h.upsets[e as usize]).collect(),
                    });
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
        Ok(IpcVerdict::EquivalentUpToBound(self.bound))
    }
}

/// Bounded intuitionistic equivalence over all posets with at most
/// `frame_bound` points.
pub fn ipc_equiv_bounded(f: &Formula, g: &Formula, frame_bound: usize) -> Result<IpcVerdict> {
    IpcChecker::new(frame_bound)?.equiv(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expanded::is_core_generated;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s, &Signature::inq()).unwrap()
    }

    #[test]
    fn small_upset_algebras() {
        assert_eq!(upset_algebra(&FinitePoset::chain(1).unwrap()).unwrap().size(), 2);
        assert_eq!(upset_algebra(&FinitePoset::chain(2).unwrap()).unwrap().size(), 3);
        for n in 0..5 {
            assert_eq!(upset_algebra(&FinitePoset::antichain(n).unwrap()).unwrap().size(), 1 << n);
        }
    }

    #[test]
    fn rejects_non_posets() {
        assert_eq!(FinitePoset::new(2, |_, _| true), Err(Error::NotAPoset));
        assert_eq!(FinitePoset::new(2, |i, j| i != j), Err(Error::NotAPoset));
        assert_eq!(FinitePoset::from_covers(2, &[(0, 1), (1, 0)]), Err(Error::NotAPoset));
    }

    #[test]
    fn medvedev_frames() {
        assert_eq!(medvedev_frame(1).unwrap().len(), 1);
        let m2 = medvedev_frame(2).unwrap();
        assert_eq!(m2.len(), 3);
        // point 2 is {a, b}, below both singletons
        assert!(m2.leq(2, 0) && m2.leq(2, 1) && !m2.leq(0, 1));
        assert_eq!(medvedev_frame(3).unwrap().len(), 7);
        assert!(medvedev_frame(5).is_err());
        assert!(medvedev_frame(0).is_err());
        let sizes: Vec<usize> = (1..=3).map(|s| medvedev_algebra(s).unwrap().size()).collect();
        assert_eq!(sizes, vec![2, 5, 19]);
    }

    #[test]
    fn regular_cores() {
        let two = regular_core(&upset_algebra(&FinitePoset::chain(1).unwrap()).unwrap()).unwrap();
        assert_eq!(two.core(), &[0, 1]);
        let m2 = regular_core(&medvedev_algebra(2).unwrap()).unwrap();
        assert_eq!(m2.core().len(), 4);
        assert!(is_core_generated(&m2));
        let c3 = regular_core(&upset_algebra(&FinitePoset::chain(2).unwrap()).unwrap()).unwrap();
        assert_eq!(c3.core(), &[0, 2]);
        assert!(!is_core_generated(&c3));
        let boolean = regular_core(&upset_algebra(&FinitePoset::antichain(3).unwrap()).unwrap()).unwrap();
        assert_eq!(boolean.core().len(), 8);
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn tensor_algebras() {
        for s in 1..=3 {
            let h = medvedev_tensor_algebra(s).unwrap();
            assert_eq!(h.size(), [2, 5, 19][s - 1]);
        }
    }

    #[test]
    fn literal_monotonicity_equation_fails() {
        // (x -> z) -> (y -> k) ~ (x * y) -> (z * k) with x = y = z = 1, k = 0
        let h = medvedev_tensor_algebra(1).unwrap();
        let lhs = f("(p0 -> p2) -> (p1 -> p3)");
        let rhs = f("(p0 * p1) -> (p2 * p3)");
        let v = [1, 1, 1, 0];
        assert_ne!(h.alg().eval(&lhs, &v).unwrap(), h.alg().eval(&rhs, &v).unwrap());
    }

    #[test]
    fn bounded_ipc_equivalence() {
        assert!(ipc_equiv_bounded(&f("p0 -> p1"), &f("p0 -> p1"), 3).unwrap().is_equivalent());
        match ipc_equiv_bounded(&f("~~p0"), &f("p0"), 3).unwrap() {
            IpcVerdict::Countermodel { poset, .. } => assert_eq!(poset.len(), 2),
            v => panic!("expected a countermodel, got {v:?}"),
        }
        assert!(ipc_equiv_bounded(&f("~~~p0"), &f("~p0"), 6).unwrap().is_equivalent());
        // tensor read as disjunction
        assert!(ipc_equiv_bounded(&f("p0 * p1"), &f("p1 | p0"), 3).unwrap().is_equivalent());
    }
}
