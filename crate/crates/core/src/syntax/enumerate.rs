//! Exhaustive formula enumeration for the bounded oracles.

use alloc::vec;
use alloc::vec::Vec;

use super::{Connective, Formula};

/// Which formulas an enumeration ranges over: atoms `p0..p{atoms-1}`,
/// optionally `bot`, and the listed binary connectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaShape {
    pub atoms: u32,
    pub bot: bool,
    pub binary: Vec<Connective>,
}

impl FormulaShape {
    /// `and`, `or`, `imp` with `bot`.
    pub fn int(atoms: u32) -> FormulaShape {
        FormulaShape { atoms, bot: true, binary: vec![Connective::And, Connective::Or, Connective::Imp] }
    }

    /// `int` plus `tensor`.
    pub fn inq(atoms: u32) -> FormulaShape {
        let mut s = FormulaShape::int(atoms);
        s.binary.push(Connective::Tensor);
        s
    }

    /// Only `or`-free connectives of this shape.
    pub fn standard(&self) -> FormulaShape {
        FormulaShape {
            atoms: self.atoms,
            bot: self.bot,
            binary: self.binary.iter().filter(|c| **c != Connective::Or).cloned().collect(),
        }
    }

    pub fn leaves(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = (0..self.atoms).map(Formula::Atom).collect();
        if self.bot {
            out.push(Formula::bot());
        }
        out
    }

    /// Visits every formula with exactly `size` nodes.
    pub fn for_each_of_size(&self, size: usize, visit: &mut impl FnMut(&Formula)) {
        if size == 0 {
            return;
        }
        if size == 1 {
            self.leaves().iter().for_each(visit);
            return;
        }
        // children have sizes summing to size - 1, each at least 1
        let table = self.size_table(size.saturating_sub(2));
        for c in &self.binary {
            for left in 1..size - 1 {
                let right = size - 1 - left;
                for a in &table[left] {
                    for b in &table[right] {
                        visit(&Formula::App(c.clone(), vec![a.clone(), b.clone()]));
                    }
                }
            }
        }
    }

    /// All formulas grouped by exact size, for sizes `0..=max_size`.
    pub fn size_table(&self, max_size: usize) -> Vec<Vec<Formula>> {
        let mut table: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
        for n in 1..=max_size {
            if n == 1 {
                table[1] = self.leaves();
                continue;
            }
            let mut layer = Vec::new();
            for c in &self.binary {
                for left in 1..n - 1 {
                    let right = n - 1 - left;
                    for a in &table[left] {
                        for b in &table[right] {
                            layer.push(Formula::App(c.clone(), vec![a.clone(), b.clone()]));
                        }
                    }
                }
            }
            table[n] = layer;
        }
        table
    }
}

/// All formulas of the shape with at most `max_size` nodes, smallest first.
pub fn formulas_by_size(shape: &FormulaShape, max_size: usize) -> Vec<Formula> {
    shape.size_table(max_size).into_iter().flatten().collect()
}

/// All formulas of the shape with connective depth at most `max_depth`
/// (atoms and `bot` have depth 0), shallowest first.
pub fn formulas_by_depth(shape: &FormulaShape, max_depth: usize) -> Vec<Formula> {
    let mut all = shape.leaves();
    let mut frontier_start = 0;
    for _ in 0..max_depth {
        let prev = all.clone();
        let mut next = Vec::new();
        for c in &shape.binary {
            for (i, a) in prev.iter().enumerate() {
                for (j, b) in prev.iter().enumerate() {
                    // at least one child must come from the last layer
                    if i < frontier_start && j < frontier_start {
                        continue;
                    }
                    next.push(Formula::App(c.clone(), vec![a.clone(), b.clone()]));
                }
            }
        }
        frontier_start = prev.len();
        all.extend(next);
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn depth_counts() {
        // L = leaves, k connectives: d0 = L, d<=1 = L + k L^2
        let shape = FormulaShape::int(2);
        let d1 = formulas_by_depth(&shape, 1);
        assert_eq!(d1.len(), 3 + 3 * 9);
        let d2 = formulas_by_depth(&shape, 2);
        assert_eq!(d2.len(), 3 + 3 * 30 * 30);
        assert!(d2.iter().all(|f| f.depth() <= 2));
        let distinct: BTreeSet<_> = d2.iter().collect();
        assert_eq!(distinct.len(), d2.len());
    }

    #[test]
    fn size_counts_follow_catalan() {
        // size 2k+1 formulas: Catalan(k) * conn^k * leaves^(k+1)
        let shape = FormulaShape::int(3);
        let t = shape.size_table(7);
        assert_eq!(t[1].len(), 4);
        assert_eq!(t[2].len(), 0);
        assert_eq!(t[3].len(), 3 * 16);
        assert_eq!(t[5].len(), 2 * 9 * 64);
        assert_eq!(t[7].len(), 5 * 27 * 256);
        let mut n9 = 0usize;
        shape.for_each_of_size(9, &mut |f| {
            assert_eq!(f.size(), 9);
            n9 += 1;
        });
        assert_eq!(n9, 14 * 81 * 1024);
    }
}
