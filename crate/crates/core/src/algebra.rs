//! Finite algebras given by dense operation tables.
//!
//! The universe of an algebra of size `n` is `0..n`. Element `0` carries no
//! special meaning; constants are ordinary nullary tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::syntax::{Connective, Formula, Signature};

/// Highest supported arity. Every signature in this crate is at most binary.
pub const MAX_ARITY: usize = 3;

/// Default bound on the number of table cells a product may allocate.
pub const DEFAULT_PRODUCT_CAP: usize = 1_000_000;

/// A finite algebra with one total table per connective.
///
/// Tables are stored row-major: the entry for `f(a0, .., a{k-1})` sits at
/// `a0 * n^(k-1) + .. + a{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    sig: Signature,
    size: usize,
    tables: Vec<Vec<u32>>,
}

fn cells(size: usize, arity: usize) -> Option<usize> {
    size.checked_pow(arity as u32)
}

impl FiniteAlgebra {
    /// Builds an algebra from explicit tables, one per connective of `sig` in
    /// signature order.
    pub fn new(sig: Signature, size: usize, tables: Vec<Vec<u32>>) -> Result<FiniteAlgebra> {
        if size == 0 {
            return Err(Error::InvalidTable("universe must be nonempty".into()));
        }
        if tables.len() != sig.len() {
            return Err(Error::InvalidTable(format!(
                "{} tables for {} connectives",
                tables.len(),
                sig.len()
            )));
        }
        for ((c, arity), t) in sig.connectives().iter().zip(&tables) {
            if *arity > MAX_ARITY {
                return Err(Error::InvalidTable(format!("`{}` has arity {arity} > {MAX_ARITY}", c.name())));
            }
            let want = cells(size, *arity).unwrap_or(usize::MAX);
            if t.len() != want {
                return Err(Error::InvalidTable(format!(
                    "`{}` table has {} entries, expected {want}",
                    c.name(),
                    t.len()
                )));
            }
            if let Some(bad) = t.iter().find(|&&v| v as usize >= size) {
                return Err(Error::InvalidTable(format!("`{}` table entry {bad} out of range", c.name())));
            }
        }
        Ok(FiniteAlgebra { sig, size, tables })
    }

    /// Builds an algebra by evaluating `op(connective index, args)` on every
    /// argument tuple.
    pub fn from_fn(sig: Signature, size: usize, mut op: impl FnMut(usize, &[u32]) -> u32) -> Result<FiniteAlgebra> {
        let mut tables = Vec::with_capacity(sig.len());
        for (k, (_, arity)) in sig.connectives().iter().enumerate() {
            if *arity > MAX_ARITY {
                return Err(Error::InvalidTable(format!("arity {arity} > {MAX_ARITY}")));
            }
            let n = cells(size, *arity).unwrap_or(usize::MAX);
            let mut t = Vec::with_capacity(n);
            let mut args = vec![0u32; *arity];
            for idx in 0..n {
                decode(idx, size, &mut args);
                t.push(op(k, &args));
            }
            tables.push(t);
        }
        FiniteAlgebra::new(sig, size, tables)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Raw table of the connective at signature position `op`.
    pub fn table(&self, op: usize) -> &[u32] {
        &self.tables[op]
    }

    pub fn arity(&self, op: usize) -> usize {
        self.sig.connectives()[op].1
    }

    /// Position of `c` in the signature.
    pub fn op_index(&self, c: &Connective) -> Option<usize> {
        self.sig.index_of(c)
    }

    /// Applies the operation at signature position `op`.
    #[inline]
    pub fn apply(&self, op: usize, args: &[u32]) -> u32 {
        self.tables[op][encode(args, self.size)]
    }

    /// Binary shortcut for [`FiniteAlgebra::apply`].
    #[inline]
    pub fn apply2(&self, op: usize, a: u32, b: u32) -> u32 {
        self.tables[op][a as usize * self.size + b as usize]
    }

    /// Value of a nullary connective.
    pub fn constant(&self, c: &Connective) -> Option<u32> {
        let k = self.op_index(c)?;
        (self.arity(k) == 0).then(|| self.tables[k][0])
    }

    /// Evaluates `f` under the assignment `h`, where `h[i]` is the value of
    /// atom `p{i}`.
    pub fn eval(&self, f: &Formula, h: &[u32]) -> Result<u32> {
        match f {
            Formula::Atom(i) => h.get(*i as usize).copied().ok_or(Error::UnassignedAtom(*i)),
            Formula::App(c, args) => {
                let k = self.op_index(c).ok_or_else(|| Error::UnknownConnective(c.name().into()))?;
                if args.len() != self.arity(k) {
                    return Err(Error::ArityMismatch {
                        connective: c.name().into(),
                        expected: self.arity(k),
                        found: args.len(),
                    });
                }
                let mut vals = [0u32; MAX_ARITY];
                for (slot, a) in vals.iter_mut().zip(args) {
                    *slot = self.eval(a, h)?;
                }
                Ok(self.apply(k, &vals[..args.len()]))
            }
        }
    }

    /// Evaluates `f` under a sparse assignment.
    pub fn eval_map(&self, f: &Formula, h: &BTreeMap<u32, u32>) -> Result<u32> {
        match f {
            Formula::Atom(i) => h.get(i).copied().ok_or(Error::UnassignedAtom(*i)),
            Formula::App(c, args) => {
                let k = self.op_index(c).ok_or_else(|| Error::UnknownConnective(c.name().into()))?;
                let mut vals = [0u32; MAX_ARITY];
                for (slot, a) in vals.iter_mut().zip(args) {
                    *slot = self.eval_map(a, h)?;
                }
                Ok(self.apply(k, &vals[..args.len()]))
            }
        }
    }

    /// Sorted universe of the subalgebra generated by `seed`.
    pub fn generate_subalgebra(&self, seed: &[u32]) -> Vec<u32> {
        let mut inside = vec![false; self.size];
        let mut members: Vec<u32> = Vec::new();
        for &s in seed {
            if !inside[s as usize] {
                inside[s as usize] = true;
                members.push(s);
            }
        }
        for (k, t) in self.tables.iter().enumerate() {
            if self.arity(k) == 0 && !inside[t[0] as usize] {
                inside[t[0] as usize] = true;
                members.push(t[0]);
            }
        }
        // every tuple over the current members, until nothing new appears
        loop {
            let before = members.len();
            for k in 0..self.tables.len() {
                let arity = self.arity(k);
                if arity == 0 {
                    continue;
                }
                let snapshot = members.clone();
                if snapshot.is_empty() {
                    continue;
                }
                let mut pos = vec![0usize; arity];
                let mut args = vec![0u32; arity];
                'tuples: loop {
                    for (a, &p) in args.iter_mut().zip(&pos) {
                        *a = snapshot[p];
                    }
                    let v = self.apply(k, &args);
                    if !inside[v as usize] {
                        inside[v as usize] = true;
                        members.push(v);
                    }
                    for i in (0..arity).rev() {
                        pos[i] += 1;
                        if pos[i] < snapshot.len() {
                            continue 'tuples;
                        }
                        pos[i] = 0;
                    }
                    break;
                }
            }
            if members.len() == before {
                break;
            }
        }
        members.sort_unstable();
        members
    }

    /// Whether `elems` is closed under every operation (and holds all constants).
    pub fn is_closed(&self, elems: &[u32]) -> bool {
        self.generate_subalgebra(elems).len() == dedup_len(elems)
    }

    /// The subalgebra on a closed set, reindexed in increasing order, plus the
    /// inclusion map from its universe into `self`.
    pub fn subalgebra(&self, elems: &[u32]) -> Result<(FiniteAlgebra, Vec<u32>)> {
        let mut members: Vec<u32> = elems.to_vec();
        members.sort_unstable();
        members.dedup();
        if !self.is_closed(&members) {
            return Err(Error::Precondition("subset is not closed under the operations".into()));
        }
        let mut index = vec![u32::MAX; self.size];
        for (i, &m) in members.iter().enumerate() {
            index[m as usize] = i as u32;
        }
        let sub = FiniteAlgebra::from_fn(self.sig.clone(), members.len(), |k, args| {
            let outer: Vec<u32> = args.iter().map(|&a| members[a as usize]).collect();
            index[self.apply(k, &outer) as usize]
        })?;
        Ok((sub, members))
    }

    /// Quotient by a partition that is a congruence; element `i` of the
    /// quotient is block `i`.
    pub fn quotient(&self, p: &Partition) -> Result<FiniteAlgebra> {
        if p.len() != self.size {
            return Err(Error::Precondition("partition size differs from universe".into()));
        }
        if !p.is_congruence(self) {
            return Err(Error::Precondition("partition is not a congruence".into()));
        }
        let reps: Vec<u32> = p.blocks().iter().map(|b| b[0]).collect();
        FiniteAlgebra::from_fn(self.sig.clone(), reps.len(), |k, args| {
            let outer: Vec<u32> = args.iter().map(|&a| reps[a as usize]).collect();
            p.block_of(self.apply(k, &outer))
        })
    }

    /// Whether `map` commutes with every operation.
    pub fn is_homomorphism(&self, dst: &FiniteAlgebra, map: &[u32]) -> bool {
        if self.sig != dst.sig || map.len() != self.size || map.iter().any(|&v| v as usize >= dst.size) {
            return false;
        }
        for k in 0..self.tables.len() {
            let arity = self.arity(k);
            let mut args = vec![0u32; arity];
            let mut image = vec![0u32; arity];
            for idx in 0..self.tables[k].len() {
                decode(idx, self.size, &mut args);
                for (im, &a) in image.iter_mut().zip(&args) {
                    *im = map[a as usize];
                }
                if map[self.tables[k][idx] as usize] != dst.apply(k, &image) {
                    return false;
                }
            }
        }
        true
    }
}

/// A term flattened to postfix form for repeated evaluation in one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    code: Vec<Instr>,
    max_atom: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Instr {
    Atom(u32),
    Op(u16, u8),
}

impl Program {
    /// Evaluates under `h`, which must cover every atom of the term.
    pub fn eval(&self, alg: &FiniteAlgebra, h: &[u32], stack: &mut Vec<u32>) -> u32 {
        stack.clear();
        for ins in &self.code {
            match *ins {
                Instr::Atom(i) => stack.push(h[i as usize]),
                Instr::Op(k, arity) => {
                    let at = stack.len() - arity as usize;
                    let v = alg.apply(k as usize, &stack[at..]);
                    stack.truncate(at);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }

    /// Largest atom index the term mentions.
    pub fn max_atom(&self) -> Option<u32> {
        self.max_atom
    }
}

impl FiniteAlgebra {
    /// Compiles `f` against this algebra's signature.
    pub fn compile(&self, f: &Formula) -> Result<Program> {
        fn go(alg: &FiniteAlgebra, f: &Formula, out: &mut Vec<Instr>, max: &mut Option<u32>) -> Result<()> {
            match f {
                Formula::Atom(i) => {
                    *max = Some(max.map_or(*i, |m| m.max(*i)));
                    out.push(Instr::Atom(*i));
                }
                Formula::App(c, args) => {
                    let k = alg.op_index(c).ok_or_else(|| Error::UnknownConnective(c.name().into()))?;
                    if args.len() != alg.arity(k) {
                        return Err(Error::ArityMismatch {
                            connective: c.name().into(),
                            expected: alg.arity(k),
                            found: args.len(),
                        });
                    }
                    for a in args {
                        go(alg, a, out, max)?;
                    }
                    out.push(Instr::Op(k as u16, args.len() as u8));
                }
            }
            Ok(())
        }
        let mut code = Vec::new();
        let mut max_atom = None;
        go(self, f, &mut code, &mut max_atom)?;
        Ok(Program { code, max_atom })
    }
}

fn dedup_len(elems: &[u32]) -> usize {
    let mut v = elems.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

#[inline]
fn encode(args: &[u32], size: usize) -> usize {
    args.iter().fold(0usize, |acc, &a| acc * size + a as usize)
}

fn decode(mut idx: usize, size: usize, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % size) as u32;
        idx /= size;
    }
}

/// Direct product with lexicographic element order, first factor most
/// significant. Fails if the product tables would exceed `cap` cells.
pub fn product(algs: &[&FiniteAlgebra], cap: usize) -> Result<FiniteAlgebra> {
    let first = algs.first().ok_or_else(|| Error::Precondition("empty product".into()))?;
    if algs.iter().any(|a| a.sig != first.sig) {
        return Err(Error::Precondition("factors have different signatures".into()));
    }
    let mut size = 1usize;
    for a in algs {
        size = size.checked_mul(a.size).filter(|&s| s <= cap).ok_or(Error::CapExceeded {
            what: "product size",
            limit: cap,
            requested: size.saturating_mul(a.size),
        })?;
    }
    let mut total = 0usize;
    for (_, arity) in first.sig.connectives() {
        total = cells(size, *arity).map_or(usize::MAX, |c| total.saturating_add(c));
    }
    if total > cap {
        return Err(Error::CapExceeded { what: "product table cells", limit: cap, requested: total });
    }
    let sizes: Vec<usize> = algs.iter().map(|a| a.size).collect();
    let mut coords = vec![vec![0u32; algs.len()]; MAX_ARITY];
    let mut fargs = vec![0u32; MAX_ARITY];
    FiniteAlgebra::from_fn(first.sig.clone(), size, |k, args| {
        for (c, &a) in coords.iter_mut().zip(args) {
            product_coords(a, &sizes, c);
        }
        let mut out = 0usize;
        for (f, alg) in algs.iter().enumerate() {
            for (slot, c) in fargs.iter_mut().zip(&coords).take(args.len()) {
                *slot = c[f];
            }
            out = out * alg.size + alg.apply(k, &fargs[..args.len()]) as usize;
        }
        out as u32
    })
}

/// Factor coordinates of product element `e`.
pub fn product_coords(mut e: u32, sizes: &[usize], out: &mut [u32]) {
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = e % s as u32;
        e /= s as u32;
    }
}

/// Product element with the given factor coordinates.
pub fn product_index(coords: &[u32], sizes: &[usize]) -> u32 {
    coords.iter().zip(sizes).fold(0u32, |acc, (&c, &s)| acc * s as u32 + c)
}

/// Projection of a product onto factor `i`, as an element map.
pub fn projection(sizes: &[usize], i: usize) -> Vec<u32> {
    let total: usize = sizes.iter().product();
    let mut c = vec![0u32; sizes.len()];
    (0..total as u32)
        .map(|e| {
            product_coords(e, sizes, &mut c);
            c[i]
        })
        .collect()
}

/// Which homomorphisms [`find_homomorphisms`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMode {
    /// Every map commuting with the operations.
    All,
    /// Additionally maps the source core into the target core.
    Strong,
    /// Additionally `a` is in the source core iff its image is in the target core.
    Strict,
}

/// All homomorphisms from `src` to `dst` passing the core filter of `mode`,
/// in lexicographic order of their element maps.
pub fn find_homomorphisms(
    src: &FiniteAlgebra,
    dst: &FiniteAlgebra,
    mode: HomMode,
    src_core: Option<&[u32]>,
    dst_core: Option<&[u32]>,
) -> Result<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    search_homomorphisms(src, dst, mode, src_core, dst_core, &mut |h| {
        out.push(h.to_vec());
        true
    })?;
    Ok(out)
}

/// Backtracking homomorphism search; `visit` returns `false` to stop early.
pub fn search_homomorphisms(
    src: &FiniteAlgebra,
    dst: &FiniteAlgebra,
    mode: HomMode,
    src_core: Option<&[u32]>,
    dst_core: Option<&[u32]>,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> Result<()> {
    if src.sig != dst.sig {
        return Err(Error::Precondition("homomorphism between different signatures".into()));
    }
    let (in_src, in_dst) = match mode {
        HomMode::All => (vec![false; src.size], vec![false; dst.size]),
        _ => {
            let (Some(sc), Some(dc)) = (src_core, dst_core) else {
                return Err(Error::Precondition("core filter needs both cores".into()));
            };
            (membership(sc, src.size), membership(dc, dst.size))
        }
    };
    // constraints grouped by the largest element they mention
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); src.size];
    let mut args = vec![0u32; MAX_ARITY];
    for k in 0..src.tables.len() {
        let arity = src.arity(k);
        for idx in 0..src.tables[k].len() {
            decode(idx, src.size, &mut args[..arity]);
            let top = args[..arity].iter().copied().chain([src.tables[k][idx]]).max().unwrap_or(0);
            checks[top as usize].push((k, idx));
        }
    }
    let mut h = vec![0u32; src.size];
    let ok_core = |a: usize, b: u32| match mode {
        HomMode::All => true,
        HomMode::Strong => !in_src[a] || in_dst[b as usize],
        HomMode::Strict => in_src[a] == in_dst[b as usize],
    };
    fn go(
        a: usize,
        src: &FiniteAlgebra,
        dst: &FiniteAlgebra,
        h: &mut Vec<u32>,
        checks: &[Vec<(usize, usize)>],
        ok_core: &dyn Fn(usize, u32) -> bool,
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if a == src.size {
            return visit(h);
        }
        let mut args = [0u32; MAX_ARITY];
        let mut image = [0u32; MAX_ARITY];
        'cand: for b in 0..dst.size as u32 {
            if !ok_core(a, b) {
                continue;
            }
            h[a] = b;
            for &(k, idx) in &checks[a] {
                let arity = src.arity(k);
                decode(idx, src.size, &mut args[..arity]);
                for i in 0..arity {
                    image[i] = h[args[i] as usize];
                }
                if h[src.tables[k][idx] as usize] != dst.apply(k, &image[..arity]) {
                    continue 'cand;
                }
            }
            if !go(a + 1, src, dst, h, checks, ok_core, visit) {
                return false;
            }
        }
        true
    }
    go(0, src, dst, &mut h, &checks, &ok_core, visit);
    Ok(())
}

pub(crate) fn membership(set: &[u32], size: usize) -> Vec<bool> {
    let mut m = vec![false; size];
    for &e in set {
        if (e as usize) < size {
            m[e as usize] = true;
        }
    }
    m
}

/// An equivalence relation on `0..n`, stored as one block id per element.
///
/// Blocks are numbered in order of their least element, so equal relations
/// have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block: Vec<u32>,
}

impl Partition {
    /// Every element in its own block.
    pub fn discrete(n: usize) -> Partition {
        Partition { block: (0..n as u32).collect() }
    }

    /// A single block.
    pub fn full(n: usize) -> Partition {
        Partition { block: vec![0; n] }
    }

    /// Elements are related iff their keys are equal.
    pub fn from_keys<K: Ord + Clone>(keys: &[K]) -> Partition {
        let mut seen: BTreeMap<K, u32> = BTreeMap::new();
        let block = keys
            .iter()
            .map(|k| {
                let next = seen.len() as u32;
                *seen.entry(k.clone()).or_insert(next)
            })
            .collect();
        Partition { block }
    }

    /// Normalises arbitrary block labels.
    pub fn from_labels(labels: &[u32]) -> Partition {
        Partition::from_keys(labels)
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn block_of(&self, a: u32) -> u32 {
        self.block[a as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.block
    }

    pub fn related(&self, a: u32, b: u32) -> bool {
        self.block[a as usize] == self.block[b as usize]
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Blocks as sorted element lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (e, &b) in self.block.iter().enumerate() {
            out[b as usize].push(e as u32);
        }
        out
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![u32::MAX; self.num_blocks()];
        for (e, &b) in self.block.iter().enumerate() {
            let o = other.block[e];
            if image[b as usize] == u32::MAX {
                image[b as usize] = o;
            } else if image[b as usize] != o {
                return false;
            }
        }
        true
    }

    /// Intersection of two equivalence relations.
    pub fn meet(&self, other: &Partition) -> Partition {
        let keys: Vec<(u32, u32)> = self.block.iter().copied().zip(other.block.iter().copied()).collect();
        Partition::from_keys(&keys)
    }

    /// Whether the relation is compatible with every operation, one
    /// coordinate at a time (which suffices by transitivity).
    pub fn is_congruence(&self, alg: &FiniteAlgebra) -> bool {
        if self.len() != alg.size() {
            return false;
        }
        let n = alg.size();
        let reps: Vec<u32> = self.blocks().iter().map(|b| b[0]).collect();
        for k in 0..alg.sig.len() {
            let arity = alg.arity(k);
            let mut args = vec![0u32; arity];
            for idx in 0..alg.tables[k].len() {
                decode(idx, n, &mut args);
                let base = self.block_of(alg.tables[k][idx]);
                for i in 0..arity {
                    let keep = args[i];
                    args[i] = reps[self.block_of(keep) as usize];
                    let v = self.block_of(alg.apply(k, &args));
                    args[i] = keep;
                    if v != base {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The largest congruence of `alg` contained in `init`.
///
/// Repeatedly splits blocks by the blocks of every one-coordinate translation
/// `f(c0, .., x, .., c{k-1})` until nothing changes.
pub fn coarsest_stable_partition(alg: &FiniteAlgebra, init: &Partition) -> Partition {
    let n = alg.size();
    let mut current = Partition::from_labels(init.labels());
    loop {
        let mut keys: Vec<Vec<u32>> = (0..n).map(|a| vec![current.block_of(a as u32)]).collect();
        for k in 0..alg.sig.len() {
            let arity = alg.arity(k);
            if arity == 0 {
                continue;
            }
            let params = n.pow(arity as u32 - 1);
            let mut rest = vec![0u32; arity - 1];
            let mut args = vec![0u32; arity];
            for i in 0..arity {
                for p in 0..params {
                    decode(p, n, &mut rest);
                    args[..i].copy_from_slice(&rest[..i]);
                    args[i + 1..].copy_from_slice(&rest[i..]);
                    for (a, key) in keys.iter_mut().enumerate() {
                        args[i] = a as u32;
                        key.push(current.block_of(alg.apply(k, &args)));
                    }
                }
            }
        }
        let next = Partition::from_keys(&keys);
        if next.num_blocks() == current.num_blocks() {
            return next;
        }
        current = next;
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::syntax::parse;

    /// Heyting chain `0 < 1 < .. < n-1` over the int signature.
    pub(crate) fn chain(n: usize) -> FiniteAlgebra {
        let top = n as u32 - 1;
        FiniteAlgebra::from_fn(Signature::int(), n, |k, a| match k {
            0 => a[0].min(a[1]),
            1 => a[0].max(a[1]),
            2 => {
                if a[0] <= a[1] {
                    top
                } else {
                    a[1]
                }
            }
            _ => 0,
        })
        .unwrap()
    }

    fn f(s: &str) -> Formula {
        parse(s, &Signature::int()).unwrap()
    }

    #[test]
    fn eval_on_the_two_chain() {
        let b = chain(2);
        assert_eq!(b.eval(&f("p0 & p1"), &[1, 0]).unwrap(), 0);
        assert_eq!(b.eval(&f("p0"), &[1]).unwrap(), 1);
        assert_eq!(b.eval(&f("p3"), &[1]), Err(Error::UnassignedAtom(3)));
        assert_eq!(b.eval(&f("~p0"), &[0]).unwrap(), 1);
        let prog = b.compile(&f("(p0 -> p1) | ~p1")).unwrap();
        let mut stack = Vec::new();
        for h in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            assert_eq!(prog.eval(&b, &h, &mut stack), b.eval(&f("(p0 -> p1) | ~p1"), &h).unwrap());
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteAlgebra::new(Signature::int(), 2, vec![vec![0; 4], vec![0; 4], vec![0; 4], vec![2]]).is_err());
        assert!(FiniteAlgebra::new(Signature::int(), 2, vec![vec![0; 3], vec![0; 4], vec![0; 4], vec![0]]).is_err());
        assert!(FiniteAlgebra::new(Signature::int(), 2, vec![vec![0; 4]]).is_err());
    }

    #[test]
    fn generation_from_empty_seed() {
        let c = chain(3);
        // bot and bot -> bot
        assert_eq!(c.generate_subalgebra(&[]), vec![0, 2]);
        assert_eq!(c.generate_subalgebra(&[0, 1, 2]), vec![0, 1, 2]);
        assert_eq!(c.generate_subalgebra(&[1]), vec![0, 1, 2]);
    }

    #[test]
    fn chain_products() {
        let c2 = chain(2);
        let p = product(&[&c2, &c2], DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(p.size(), 4);
        // (1,0) & (0,1) = (0,0)
        assert_eq!(p.apply2(0, 2, 1), 0);
        assert_eq!(p.apply2(1, 2, 1), 3);
        let single = product(&[&c2], DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(single, c2);
        assert!(matches!(product(&[&c2; 12], 1000), Err(Error::CapExceeded { .. })));
        for i in 0..2 {
            assert!(p.is_homomorphism(&c2, &projection(&[2, 2], i)));
        }
    }

    #[test]
    fn homomorphisms_of_the_two_chain() {
        let c2 = chain(2);
        let homs = find_homomorphisms(&c2, &c2, HomMode::All, None, None).unwrap();
        assert_eq!(homs, vec![vec![0, 1]]);
        let c3 = chain(3);
        // 3-chain onto 2-chain: middle goes up
        let homs = find_homomorphisms(&c3, &c2, HomMode::All, None, None).unwrap();
        assert_eq!(homs, vec![vec![0, 1, 1]]);
        let strict = find_homomorphisms(&c3, &c2, HomMode::Strict, Some(&[0, 2]), Some(&[0, 1])).unwrap();
        assert!(strict.is_empty());
        let strong = find_homomorphisms(&c3, &c2, HomMode::Strong, Some(&[0, 2]), Some(&[0, 1])).unwrap();
        assert_eq!(strong.len(), 1);
    }

    #[test]
    fn refinement_on_the_two_chain() {
        let c2 = chain(2);
        assert_eq!(coarsest_stable_partition(&c2, &Partition::discrete(2)), Partition::discrete(2));
        // the full relation is a congruence of every algebra
        assert_eq!(coarsest_stable_partition(&c2, &Partition::full(2)), Partition::full(2));
        // splitting off the top forces nothing more on the 3-chain except {0} vs {1,2}
        let c3 = chain(3);
        let init = Partition::from_labels(&[0, 1, 1]);
        let p = coarsest_stable_partition(&c3, &init);
        assert_eq!(p, init);
        assert!(p.is_congruence(&c3));
        let bad = Partition::from_labels(&[0, 0, 1]);
        assert!(!bad.is_congruence(&c3));
        assert_eq!(coarsest_stable_partition(&c3, &bad), Partition::discrete(3));
    }

    #[test]
    fn quotient_and_subalgebra() {
        let c3 = chain(3);
        let q = c3.quotient(&Partition::from_labels(&[0, 1, 1])).unwrap();
        assert_eq!(q, chain(2));
        let (sub, incl) = c3.subalgebra(&[0, 2]).unwrap();
        assert_eq!(sub, chain(2));
        assert_eq!(incl, vec![0, 2]);
        assert!(sub.is_homomorphism(&c3, &incl));
        assert!(c3.subalgebra(&[1]).is_err());
    }

    #[test]
    fn partition_order() {
        let d = Partition::discrete(3);
        let f = Partition::full(3);
        assert!(d.refines(&f));
        assert!(!f.refines(&d));
        assert_eq!(Partition::from_labels(&[7, 3, 7]).labels(), &[0, 1, 0]);
        assert_eq!(Partition::from_labels(&[0, 0, 1]).meet(&Partition::from_labels(&[0, 1, 1])), d);
    }
}
