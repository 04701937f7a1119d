use alloc::collections::BTreeMap;
use core::fmt;

use super::Formula;

/// A substitution with finite support; atoms outside the map are fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<u32, Formula>,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn single(atom: u32, image: Formula) -> Substitution {
        let mut s = Substitution::identity();
        s.insert(atom, image);
        s
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, Formula)>>(pairs: I) -> Substitution {
        let mut s = Substitution::identity();
        for (a, f) in pairs {
            s.insert(a, f);
        }
        s
    }

    /// Sets the image of `atom`; mapping an atom to itself removes it from the support.
    pub fn insert(&mut self, atom: u32, image: Formula) {
        if image == Formula::Atom(atom) {
            self.map.remove(&atom);
        } else {
            self.map.insert(atom, image);
        }
    }

    pub fn image(&self, atom: u32) -> Formula {
        self.map.get(&atom).cloned().unwrap_or(Formula::Atom(atom))
    }

    pub fn support(&self) -> impl Iterator<Item = (&u32, &Formula)> {
        self.map.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        match f {
            Formula::Atom(i) => self.image(*i),
            Formula::App(c, args) => Formula::App(c.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Substitution) -> Substitution {
        let mut out = Substitution::identity();
        for (a, img) in &self.map {
            if !inner.map.contains_key(a) {
                out.insert(*a, img.clone());
            }
        }
        for (a, img) in &inner.map {
            out.insert(*a, self.apply(img));
        }
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (a, img)) in self.map.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "p{a} := {img}")?;
        }
        f.write_str("}")
    }
}

/// Substitution classes ordered by inclusion: atomic ⊆ or-free ⊆ general.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubstitutionClass {
    Atomic,
    OrFree,
    General,
}

/// Classifies `s` by the images of the listed atoms.
pub fn classify_subst(s: &Substitution, atoms: &[u32]) -> SubstitutionClass {
    let mut class = SubstitutionClass::Atomic;
    for &a in atoms {
        let img = s.image(a);
        if img.is_atom() {
            continue;
        }
        if img.is_or_free() {
            class = class.max(SubstitutionClass::OrFree);
        } else {
            return SubstitutionClass::General;
        }
    }
    class
}
