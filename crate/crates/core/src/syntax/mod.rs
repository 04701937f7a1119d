//! Signatures, formulas and equations over indexed atoms.
//!
//! A [`Formula`] is a term of the absolutely free algebra over the atoms
//! `p0, p1, ...`. Negation and the biconditional are not connectives: the
//! parser expands `~f` to `f -> bot` and `f <-> g` to `(f -> g) & (g -> f)`,
//! so every algorithm in the crate sees the same small connective set.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

mod enumerate;
mod parse;
mod schema;
mod subst;

pub use enumerate::{formulas_by_depth, formulas_by_size, FormulaShape};
pub use parse::{parse, parse_equation, Parser};
pub use schema::{match_schema, Schema, Sort};
pub use subst::{classify_subst, Substitution, SubstitutionClass};

/// A connective symbol. The five built-in symbols get their own variants so
/// hot loops can match on them; anything else is carried by name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Bot,
    And,
    Or,
    Imp,
    Tensor,
    Named(String),
}

impl Connective {
    pub fn from_name(name: &str) -> Connective {
        match name {
            "bot" => Connective::Bot,
            "and" => Connective::And,
            "or" => Connective::Or,
            "imp" => Connective::Imp,
            "tensor" => Connective::Tensor,
            other => Connective::Named(other.to_owned()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Connective::Bot => "bot",
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Imp => "imp",
            Connective::Tensor => "tensor",
            Connective::Named(n) => n,
        }
    }

    /// Arity fixed by the built-in reading, `None` for named symbols.
    pub fn builtin_arity(&self) -> Option<usize> {
        match self {
            Connective::Bot => Some(0),
            Connective::And | Connective::Or | Connective::Imp | Connective::Tensor => Some(2),
            Connective::Named(_) => None,
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite algebraic signature: connective symbols with their arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    connectives: Vec<(Connective, usize)>,
}

impl Signature {
    pub fn new<S: AsRef<str>>(connectives: &[(S, usize)]) -> Result<Signature> {
        let mut out: Vec<(Connective, usize)> = Vec::with_capacity(connectives.len());
        for (name, arity) in connectives {
            let c = Connective::from_name(name.as_ref());
            if let Some(expected) = c.builtin_arity() {
                if expected != *arity {
                    return Err(Error::ArityMismatch {
                        connective: c.name().to_owned(),
                        expected,
                        found: *arity,
                    });
                }
            }
            if out.iter().any(|(d, _)| *d == c) {
                return Err(Error::Precondition(alloc::format!(
                    "duplicate connective `{}` in signature",
                    c
                )));
            }
            out.push((c, *arity));
        }
        Ok(Signature { connectives: out })
    }

    /// `{and, or, imp, bot}`.
    pub fn int() -> Signature {
        Signature {
            connectives: vec![
                (Connective::And, 2),
                (Connective::Or, 2),
                (Connective::Imp, 2),
                (Connective::Bot, 0),
            ],
        }
    }

    /// `{and, or, imp, bot, tensor}`.
    pub fn inq() -> Signature {
        let mut s = Signature::int();
        s.connectives.push((Connective::Tensor, 2));
        s
    }

    /// Built-in signatures by name: `int` or `inq`.
    pub fn by_name(name: &str) -> Option<Signature> {
        match name {
            "int" => Some(Signature::int()),
            "inq" => Some(Signature::inq()),
            _ => None,
        }
    }

    pub fn connectives(&self) -> &[(Connective, usize)] {
        &self.connectives
    }

    pub fn len(&self) -> usize {
        self.connectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }

    pub fn index_of(&self, c: &Connective) -> Option<usize> {
        self.connectives.iter().position(|(d, _)| d == c)
    }

    pub fn arity(&self, c: &Connective) -> Option<usize> {
        self.connectives.iter().find(|(d, _)| d == c).map(|(_, a)| *a)
    }

    pub fn contains(&self, c: &Connective) -> bool {
        self.index_of(c).is_some()
    }

    /// Restriction to the listed connectives, in this signature's order.
    pub fn restrict(&self, keep: &[Connective]) -> Signature {
        Signature {
            connectives: self
                .connectives
                .iter()
                .filter(|(c, _)| keep.contains(c))
                .cloned()
                .collect(),
        }
    }
}

/// A formula: an atom or a connective applied to argument formulas.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(u32),
    App(Connective, Vec<Formula>),
}

impl Formula {
    pub fn atom(i: u32) -> Formula {
        Formula::Atom(i)
    }

    pub fn bot() -> Formula {
        Formula::App(Connective::Bot, Vec::new())
    }

    /// `bot -> bot`, the designated top term.
    pub fn top() -> Formula {
        Formula::imp(Formula::bot(), Formula::bot())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::App(Connective::And, vec![a, b])
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::App(Connective::Or, vec![a, b])
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::App(Connective::Imp, vec![a, b])
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::App(Connective::Tensor, vec![a, b])
    }

    /// `a -> bot`.
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::bot())
    }

    /// `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty list.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn connective(&self) -> Option<&Connective> {
        match self {
            Formula::Atom(_) => None,
            Formula::App(c, _) => Some(c),
        }
    }

    pub fn args(&self) -> &[Formula] {
        match self {
            Formula::Atom(_) => &[],
            Formula::App(_, args) => args,
        }
    }

    /// True when no `or` node occurs (a standard formula).
    pub fn is_or_free(&self) -> bool {
        !self.contains_connective(&Connective::Or)
    }

    pub fn contains_connective(&self, c: &Connective) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::App(d, args) => d == c || args.iter().any(|a| a.contains_connective(c)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Atom(i) => {
                out.insert(*i);
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_atoms(out)),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::App(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Nesting depth of connectives; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::App(_, args) => args.iter().map(|a| 1 + a.depth()).max().unwrap_or(0),
        }
    }

    /// Checks every node against the signature's arities.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Atom(_) => Ok(()),
            Formula::App(c, args) => {
                let expected =
                    sig.arity(c).ok_or_else(|| Error::UnknownConnective(c.name().to_owned()))?;
                if expected != args.len() {
                    return Err(Error::ArityMismatch {
                        connective: c.name().to_owned(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Replaces every node with connective `from` by connective `to`.
    pub fn replace_connective(&self, from: &Connective, to: &Connective) -> Formula {
        match self {
            Formula::Atom(i) => Formula::Atom(*i),
            Formula::App(c, args) => Formula::App(
                if c == from { to.clone() } else { c.clone() },
                args.iter().map(|a| a.replace_connective(from, to)).collect(),
            ),
        }
    }

    /// Matches `a -> bot` and returns `a`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::App(Connective::Imp, args) if args.len() == 2 && args[1] == Formula::bot() => {
                Some(&args[0])
            }
            _ => None,
        }
    }

    /// Matches `a -> b`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::App(Connective::Imp, args) if args.len() == 2 => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    fn level(&self) -> u8 {
        if self.as_negation().is_some() {
            return 4;
        }
        match self {
            Formula::Atom(_) => 5,
            Formula::App(Connective::Imp, _) => 1,
            Formula::App(Connective::Or | Connective::Tensor, _) => 2,
            Formula::App(Connective::And, _) => 3,
            Formula::App(_, _) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        let wrap = self.level() < min_level;
        if wrap {
            f.write_str("(")?;
        }
        if let Some(inner) = self.as_negation() {
            f.write_str("~")?;
            inner.write_at(f, 4)?;
        } else {
            match self {
                Formula::Atom(i) => write!(f, "p{i}")?,
                Formula::App(Connective::Bot, _) => f.write_str("bot")?,
                Formula::App(Connective::Imp, a) => {
                    a[0].write_at(f, 2)?;
                    f.write_str(" -> ")?;
                    a[1].write_at(f, 1)?;
                }
                Formula::App(c @ (Connective::And | Connective::Or | Connective::Tensor), a) => {
                    let (lvl, sym) = match c {
                        Connective::And => (3, " & "),
                        Connective::Or => (2, " | "),
                        _ => (2, " * "),
                    };
                    a[0].write_at(f, lvl)?;
                    f.write_str(sym)?;
                    a[1].write_at(f, lvl + 1)?;
                }
                Formula::App(c, args) if args.is_empty() => f.write_str(c.name())?,
                Formula::App(c, args) => {
                    f.write_str(c.name())?;
                    f.write_str("(")?;
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            f.write_str(", ")?;
                        }
                        a.write_at(f, 0)?;
                    }
                    f.write_str(")")?;
                }
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// An equation `lhs ~ rhs` between formulas.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equation {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Equation {
    pub fn new(lhs: Formula, rhs: Formula) -> Equation {
        Equation { lhs, rhs }
    }

    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = self.lhs.atoms();
        self.rhs.collect_atoms(&mut out);
        out
    }

    pub fn map(&self, f: impl Fn(&Formula) -> Formula) -> Equation {
        Equation { lhs: f(&self.lhs), rhs: f(&self.rhs) }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}", self.lhs, self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn builtin_signatures() {
        let int = Signature::int();
        assert_eq!(int.len(), 4);
        assert_eq!(int.arity(&Connective::Tensor), None);
        let inq = Signature::inq();
        assert_eq!(inq.arity(&Connective::Tensor), Some(2));
        assert!(Signature::new(&[("and", 2), ("and", 2)]).is_err());
        assert!(Signature::new(&[("imp", 1)]).is_err());
        assert!(Signature::new(&[("mul", 2), ("e", 0)]).is_ok());
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        let f = Formula::imp(
            Formula::atom(0),
            Formula::or(Formula::atom(1), Formula::atom(2)),
        );
        assert_eq!(f.to_string(), "p0 -> p1 | p2");
        let g = Formula::imp(Formula::imp(Formula::atom(0), Formula::atom(1)), Formula::atom(2));
        assert_eq!(g.to_string(), "(p0 -> p1) -> p2");
        let h = Formula::and(Formula::atom(0), Formula::and(Formula::atom(1), Formula::atom(2)));
        assert_eq!(h.to_string(), "p0 & (p1 & p2)");
        assert_eq!(Formula::not(Formula::not(Formula::atom(0))).to_string(), "~~p0");
        assert_eq!(
            Formula::not(Formula::and(Formula::atom(0), Formula::atom(1))).to_string(),
            "~(p0 & p1)"
        );
        assert_eq!(Formula::top().to_string(), "~bot");
    }

    #[test]
    fn depth_and_size() {
        let f = Formula::imp(Formula::atom(0), Formula::bot());
        assert_eq!(f.size(), 3);
        assert_eq!(f.depth(), 1);
        assert_eq!(Formula::atom(3).depth(), 0);
        assert!(f.check(&Signature::int()).is_ok());
        assert!(Formula::tensor(Formula::atom(0), Formula::atom(0)).check(&Signature::int()).is_err());
    }
}
