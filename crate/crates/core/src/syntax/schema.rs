use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{Formula, Parser, Signature};
use crate::error::{Error, Result};

/// Sort of a schema metavariable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    /// Any formula.
    Any,
    /// Only `or`-free formulas.
    Standard,
}

/// A formula template whose atoms are metavariables `0..sorts.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    template: Formula,
    sorts: Vec<Sort>,
    names: Vec<String>,
}

impl Schema {
    pub fn new(template: Formula, metavariables: &[(&str, Sort)]) -> Result<Schema> {
        if let Some(&a) = template.atoms().iter().find(|&&a| a as usize >= metavariables.len()) {
            return Err(Error::Precondition(alloc::format!(
                "template mentions metavariable {a} but only {} are declared",
                metavariables.len()
            )));
        }
        Ok(Schema {
            template,
            sorts: metavariables.iter().map(|(_, s)| *s).collect(),
            names: metavariables.iter().map(|(n, _)| (*n).to_owned()).collect(),
        })
    }

    /// Parses a template whose metavariables are written `_name`.
    pub fn parse(text: &str, sig: &Signature, metavariables: &[(&str, Sort)]) -> Result<Schema> {
        let names: Vec<&str> = metavariables.iter().map(|(n, _)| *n).collect();
        let template = Parser::new(sig).with_metavariables(&names).formula(text)?;
        Schema::new(template, metavariables)
    }

    pub fn template(&self) -> &Formula {
        &self.template
    }

    pub fn sort(&self, metavariable: u32) -> Sort {
        self.sorts[metavariable as usize]
    }

    pub fn arity(&self) -> usize {
        self.sorts.len()
    }

    pub fn name(&self, metavariable: u32) -> &str {
        &self.names[metavariable as usize]
    }

    /// Metavariables that actually occur in the template.
    pub fn metavariables(&self) -> impl Iterator<Item = u32> + '_ {
        self.template.atoms().into_iter()
    }

    /// Whether an assignment respects the sort constraints.
    pub fn admits(&self, assignment: &BTreeMap<u32, Formula>) -> bool {
        assignment
            .iter()
            .all(|(m, f)| self.sorts.get(*m as usize) != Some(&Sort::Standard) || f.is_or_free())
    }

    /// Instance under `assignment`; unassigned metavariables stay as atoms.
    pub fn instantiate(&self, assignment: &BTreeMap<u32, Formula>) -> Formula {
        fn go(t: &Formula, a: &BTreeMap<u32, Formula>) -> Formula {
            match t {
                Formula::Atom(m) => a.get(m).cloned().unwrap_or(Formula::Atom(*m)),
                Formula::App(c, args) => Formula::App(c.clone(), args.iter().map(|x| go(x, a)).collect()),
            }
        }
        go(&self.template, assignment)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rendered = alloc::format!("{}", self.template);
        // longest index first so p1 does not clobber p10
        let mut order: Vec<usize> = (0..self.names.len()).collect();
        order.sort_by_key(|&i| core::cmp::Reverse(i));
        for i in order {
            rendered = rendered.replace(&alloc::format!("p{i}"), &alloc::format!("_{}", self.names[i]));
        }
        f.write_str(&rendered)
    }
}

/// First-order matching of `f` against the schema template.
///
/// Returns the unique assignment of the occurring metavariables that makes
/// the template syntactically equal to `f`, provided it respects the sorts.
pub fn match_schema(sch: &Schema, f: &Formula) -> Option<BTreeMap<u32, Formula>> {
    fn go(t: &Formula, f: &Formula, out: &mut BTreeMap<u32, Formula>) -> bool {
        match (t, f) {
            (Formula::Atom(m), _) => match out.get(m) {
                Some(prev) => prev == f,
                None => {
                    out.insert(*m, f.clone());
                    true
                }
            },
            (Formula::App(c, targs), Formula::App(d, fargs)) => {
                c == d
                    && targs.len() == fargs.len()
                    && targs.iter().zip(fargs).all(|(x, y)| go(x, y, out))
            }
            _ => false,
        }
    }
    let mut out = BTreeMap::new();
    if go(&sch.template, f, &mut out) && sch.admits(&out) {
        Some(out)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use alloc::string::ToString;

    const META: [(&str, Sort); 4] =
        [("phi", Sort::Any), ("psi", Sort::Any), ("chi", Sort::Any), ("alpha", Sort::Standard)];

    fn f(s: &str) -> Formula {
        parse(s, &Signature::int()).unwrap()
    }

    #[test]
    fn reads_off_a1_instance() {
        let a1 = Schema::parse("_phi -> (_psi -> _phi)", &Signature::int(), &META).unwrap();
        let m = match_schema(&a1, &f("(p0 & p1) -> (p2 -> (p0 & p1))")).unwrap();
        assert_eq!(m[&0], f("p0 & p1"));
        assert_eq!(m[&1], f("p2"));
        assert!(match_schema(&a1, &f("(p0 & p1) -> (p2 -> p0)")).is_none());
    }

    #[test]
    fn standard_slot_rejects_disjunction() {
        let a10 = Schema::parse(
            "(_alpha -> _phi | _psi) -> (_alpha -> _phi) | (_alpha -> _psi)",
            &Signature::int(),
            &META,
        )
        .unwrap();
        assert!(match_schema(&a10, &f("((p0 | p1) -> (p2 | p3)) -> ((p0 | p1) -> p2) | ((p0 | p1) -> p3)")).is_none());
        let m = match_schema(&a10, &f("(~p0 -> (p2 | p3)) -> ((~p0 -> p2) | (~p0 -> p3))")).unwrap();
        assert_eq!(m[&3], f("~p0"));
        assert_eq!(m[&0], f("p2"));
        assert_eq!(m[&1], f("p3"));
        assert_eq!(a10.instantiate(&m), f("(~p0 -> (p2 | p3)) -> ((~p0 -> p2) | (~p0 -> p3))"));
    }

    #[test]
    fn display_uses_metavariable_names() {
        let a1 = Schema::parse("_phi -> (_psi -> _phi)", &Signature::int(), &META).unwrap();
        assert_eq!(a1.to_string(), "_phi -> _psi -> _phi");
    }
}
