//! Formula grammar.
//!
//! ```text
//! iff     := imp ( "<->" iff )?
//! imp     := disj ( "->" imp )?
//! disj    := conj ( ( "|" | "*" ) conj )*
//! conj    := unary ( "&" unary )*
//! unary   := "~" unary | primary
//! primary := "p" digits | "bot" | "(" iff ")" | name "(" iff ("," iff)* ")" | "_" name
//! ```
//!
//! An equation is two formulas separated by `~`, `=` or `≈`.

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Connective, Equation, Formula, Signature};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Atom(u32),
    Ident(String),
    Meta(String),
    LParen,
    RParen,
    Comma,
    Tilde,
    Amp,
    Bar,
    Star,
    Arrow,
    DArrow,
    Eq,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Atom(i) => alloc::format!("atom p{i}"),
        Tok::Ident(s) => alloc::format!("`{s}`"),
        Tok::Meta(s) => alloc::format!("metavariable `_{s}`"),
        Tok::LParen => "`(`".to_string(),
        Tok::RParen => "`)`".to_string(),
        Tok::Comma => "`,`".to_string(),
        Tok::Tilde => "`~`".to_string(),
        Tok::Amp => "`&`".to_string(),
        Tok::Bar => "`|`".to_string(),
        Tok::Star => "`*`".to_string(),
        Tok::Arrow => "`->`".to_string(),
        Tok::DArrow => "`<->`".to_string(),
        Tok::Eq => "`=`".to_string(),
        Tok::End => "end of input".to_string(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'~' => {
                i += 1;
                Tok::Tilde
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'|' => {
                i += 1;
                Tok::Bar
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'=' => {
                i += 1;
                Tok::Eq
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 3;
                Tok::DArrow
            }
            b'_' => {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                if i == start + 1 {
                    return Err(Error::Syntax {
                        pos: start,
                        message: "empty metavariable name".to_owned(),
                    });
                }
                Tok::Meta(text[start + 1..i].to_owned())
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let digits = &word[1..];
                if word.starts_with('p')
                    && !digits.is_empty()
                    && digits.bytes().all(|d| d.is_ascii_digit())
                {
                    let idx = digits.parse::<u32>().map_err(|_| Error::Syntax {
                        pos: start,
                        message: "atom index out of range".to_owned(),
                    })?;
                    Tok::Atom(idx)
                } else {
                    Tok::Ident(word.to_owned())
                }
            }
            _ if text[i..].starts_with('≈') => {
                i += '≈'.len_utf8();
                Tok::Eq
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    pos: start,
                    message: alloc::format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

/// A configured parser: the signature that formulas must respect and,
/// optionally, the metavariable names accepted in templates.
///
/// When metavariables are declared, `_name` is read as `Atom(k)` where `k`
/// is the position of `name` in the list and object atoms are rejected, so
/// a parsed template only mentions its metavariables.
#[derive(Clone, Debug)]
pub struct Parser<'a> {
    sig: &'a Signature,
    metavariables: Vec<String>,
}

impl<'a> Parser<'a> {
    pub fn new(sig: &'a Signature) -> Parser<'a> {
        Parser { sig, metavariables: Vec::new() }
    }

    pub fn with_metavariables(mut self, names: &[&str]) -> Parser<'a> {
        self.metavariables = names.iter().map(|n| (*n).to_owned()).collect();
        self
    }

    pub fn formula(&self, text: &str) -> Result<Formula> {
        let toks = lex(text)?;
        let mut st = State { toks, pos: 0, p: self };
        let f = st.iff()?;
        st.expect_end()?;
        Ok(f)
    }

    pub fn equation(&self, text: &str) -> Result<Equation> {
        let toks = lex(text)?;
        let mut st = State { toks, pos: 0, p: self };
        let lhs = st.iff()?;
        match st.peek() {
            Tok::Tilde | Tok::Eq => st.pos += 1,
            other => {
                return Err(Error::Syntax {
                    pos: st.offset(),
                    message: alloc::format!("expected `~` between sides, found {}", describe(other)),
                })
            }
        }
        let rhs = st.iff()?;
        st.expect_end()?;
        Ok(Equation { lhs, rhs })
    }
}

/// Parses a formula over `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    Parser::new(sig).formula(text)
}

/// Parses an equation `lhs ~ rhs` over `sig`.
pub fn parse_equation(text: &str, sig: &Signature) -> Result<Equation> {
    Parser::new(sig).equation(text)
}

struct State<'p, 'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    p: &'p Parser<'a>,
}

impl State<'_, '_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            other => Err(Error::Syntax {
                pos: self.offset(),
                message: alloc::format!("unexpected {}", describe(other)),
            }),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: self.offset(),
                message: alloc::format!(
                    "expected {}, found {}",
                    describe(&want),
                    describe(self.peek())
                ),
            })
        }
    }

    fn require(&self, c: &Connective, arity: usize) -> Result<()> {
        match self.p.sig.arity(c) {
            Some(a) if a == arity => Ok(()),
            Some(a) => Err(Error::ArityMismatch {
                connective: c.name().to_owned(),
                expected: a,
                found: arity,
            }),
            None => Err(Error::UnknownConnective(c.name().to_owned())),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::DArrow {
            self.bump();
            self.require(&Connective::Imp, 2)?;
            self.require(&Connective::And, 2)?;
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            self.require(&Connective::Imp, 2)?;
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut acc = self.conj()?;
        loop {
            let c = match self.peek() {
                Tok::Bar => Connective::Or,
                Tok::Star => Connective::Tensor,
                _ => return Ok(acc),
            };
            self.bump();
            self.require(&c, 2)?;
            let rhs = self.conj()?;
            acc = Formula::App(c, vec![acc, rhs]);
        }
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            self.require(&Connective::And, 2)?;
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            self.require(&Connective::Imp, 2)?;
            self.require(&Connective::Bot, 0)?;
            let inner = self.unary()?;
            return Ok(Formula::not(inner));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        let at = self.offset();
        match self.bump() {
            Tok::Atom(i) => {
                if !self.p.metavariables.is_empty() {
                    return Err(Error::Syntax {
                        pos: at,
                        message: "object atoms are not allowed in a template".to_owned(),
                    });
                }
                Ok(Formula::Atom(i))
            }
            Tok::Meta(name) => match self.p.metavariables.iter().position(|m| *m == name) {
                Some(k) => Ok(Formula::Atom(k as u32)),
                None => Err(Error::Syntax {
                    pos: at,
                    message: alloc::format!("undeclared metavariable `_{name}`"),
                }),
            },
            Tok::LParen => {
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let c = Connective::from_name(&name);
                if *self.peek() != Tok::LParen {
                    self.require(&c, 0)?;
                    return Ok(Formula::App(c, Vec::new()));
                }
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    args.push(self.iff()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.iff()?);
                    }
                }
                self.expect(Tok::RParen)?;
                self.require(&c, args.len())?;
                Ok(Formula::App(c, args))
            }
            other => Err(Error::Syntax {
                pos: at,
                message: alloc::format!("expected a formula, found {}", describe(&other)),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn int(s: &str) -> Result<Formula> {
        parse(s, &Signature::int())
    }

    #[test]
    fn reads_implication_over_disjunction() {
        let f = int("p0 -> (p1 | p2)").unwrap();
        assert_eq!(
            f,
            Formula::App(
                Connective::Imp,
                vec![
                    Formula::Atom(0),
                    Formula::App(Connective::Or, vec![Formula::Atom(1), Formula::Atom(2)])
                ]
            )
        );
    }

    #[test]
    fn negation_is_implication_into_bot() {
        assert_eq!(
            int("~p0").unwrap(),
            Formula::App(Connective::Imp, vec![Formula::Atom(0), Formula::App(Connective::Bot, vec![])])
        );
    }

    #[test]
    fn tensor_rejected_over_int() {
        assert_eq!(int("p0 * p1"), Err(Error::UnknownConnective("tensor".into())));
        assert!(parse("p0 * p1", &Signature::inq()).is_ok());
    }

    #[test]
    fn precedence_table() {
        // ~ > & > | = * > ->, right-assoc ->
        assert_eq!(int("~p0 & p1 | p2 -> p0 -> p1").unwrap().to_string(), "~p0 & p1 | p2 -> p0 -> p1");
        let f = int("p0 -> p1 -> p2").unwrap();
        assert_eq!(f, Formula::imp(Formula::atom(0), Formula::imp(Formula::atom(1), Formula::atom(2))));
        let g = parse("p0 | p1 * p2", &Signature::inq()).unwrap();
        assert_eq!(g, Formula::tensor(Formula::or(Formula::atom(0), Formula::atom(1)), Formula::atom(2)));
        assert_eq!(
            int("p0 <-> p1").unwrap(),
            Formula::iff(Formula::atom(0), Formula::atom(1))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match int("p0 & (p1 | )") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 11),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(int("p0 p1"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(int("p0 # p1"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(int(""), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn equations_and_templates() {
        let sig = Signature::int();
        let e = parse_equation("p0 ~ ~~p0", &sig).unwrap();
        assert_eq!(e.lhs, Formula::atom(0));
        assert_eq!(e.rhs, Formula::not(Formula::not(Formula::atom(0))));
        let e2 = parse_equation("p0 & p1 = p1", &sig).unwrap();
        assert_eq!(e2.rhs, Formula::atom(1));
        assert!(parse_equation("p0 ≈ p0", &sig).is_ok());
        let t = Parser::new(&sig).with_metavariables(&["x", "y"]).formula("_x <-> _y").unwrap();
        assert_eq!(t, Formula::iff(Formula::atom(0), Formula::atom(1)));
        assert!(Parser::new(&sig).with_metavariables(&["x"]).formula("_x -> p0").is_err());
        assert!(Parser::new(&sig).with_metavariables(&["x"]).formula("_z").is_err());
    }

    #[test]
    fn named_connectives() {
        let sig = Signature::new(&[("mul", 2), ("e", 0)]).unwrap();
        let f = parse("mul(p0, e)", &sig).unwrap();
        assert_eq!(f.to_string(), "mul(p0, e)");
        assert!(parse("mul(p0)", &sig).is_err());
    }
}
