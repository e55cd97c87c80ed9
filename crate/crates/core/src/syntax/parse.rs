//! Text syntax for terms, propositions and sequents.
//!
//! A bare identifier is a constant when the signature declares it as a
//! function symbol and a variable otherwise. `t = u` is sugar for the
//! atom `=(t, u)`.

use super::signature::Signature;
use super::term::{Arg, Prop, Term};
use crate::lex::{Cursor, ParseError, Tok};

/// A sequent `A1, ..., An |- B1, ..., Bm` with ordered sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent<F> {
    pub left: Vec<F>,
    pub right: Vec<F>,
}

impl<F> Sequent<F> {
    pub fn new(left: Vec<F>, right: Vec<F>) -> Self {
        Self { left, right }
    }
}

pub(crate) struct Parser<'a> {
    pub cur: Cursor,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, sig: &'a Signature) -> Result<Self, ParseError> {
        Ok(Self {
            cur: Cursor::new(src)?,
            sig,
        })
    }

    fn binder_count(&self) -> usize {
        let mut k = 0;
        while let Some(Tok::Ident(_)) = self.cur.peek_at(k) {
            k += 1;
        }
        if k > 0 && self.cur.peek_at(k) == Some(&Tok::Dot) {
            k
        } else {
            0
        }
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        let k = self.binder_count();
        let mut binders = Vec::with_capacity(k);
        for _ in 0..k {
            binders.push(self.cur.ident()?);
        }
        if k > 0 {
            self.cur.expect(&Tok::Dot)?;
        }
        Ok(Arg {
            binders,
            body: self.term()?,
        })
    }

    pub fn args(&mut self) -> Result<Vec<Arg>, ParseError> {
        self.cur.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.cur.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.arg()?);
            if self.cur.eat(&Tok::RParen) {
                return Ok(args);
            }
            if !self.cur.eat(&Tok::Comma) {
                return Err(self.cur.unexpected("`,` or `)`"));
            }
        }
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        match self.cur.peek() {
            Some(Tok::Ident(_)) => {
                let name = self.cur.ident()?;
                if self.cur.peek() == Some(&Tok::LParen) {
                    if self.sig.predicate(&name).is_some() {
                        return Err(self.cur.error(format!("`{name}` is a predicate, not a function")));
                    }
                    let args = self.args()?;
                    Ok(Term::App(name, args))
                } else if self.sig.function(&name).is_some() {
                    Ok(Term::App(name, Vec::new()))
                } else {
                    Ok(Term::Var(name))
                }
            }
            _ => Err(self.cur.unexpected("a term")),
        }
    }

    pub fn prop(&mut self) -> Result<Prop, ParseError> {
        match self.cur.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.cur.advance() == Some(Tok::Forall);
                let mut vars = vec![self.cur.ident()?];
                while let Some(Tok::Ident(_)) = self.cur.peek() {
                    vars.push(self.cur.ident()?);
                }
                self.cur.expect(&Tok::Dot)?;
                let body = self.prop()?;
                Ok(vars.into_iter().rev().fold(body, |acc, x| {
                    if universal {
                        Prop::forall(x, acc)
                    } else {
                        Prop::exists(x, acc)
                    }
                }))
            }
            _ => self.imp(),
        }
    }

    fn operand(&mut self, next: fn(&mut Self) -> Result<Prop, ParseError>) -> Result<Prop, ParseError> {
        match self.cur.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => self.prop(),
            _ => next(self),
        }
    }

    fn imp(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.or()?;
        if self.cur.eat(&Tok::Imp) {
            let rhs = self.operand(Self::imp)?;
            Ok(Prop::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.and()?;
        if self.cur.eat(&Tok::Or) {
            let rhs = self.operand(Self::or)?;
            Ok(Prop::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn and(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.atom()?;
        if self.cur.eat(&Tok::And) {
            let rhs = self.operand(Self::and)?;
            Ok(Prop::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn atom(&mut self) -> Result<Prop, ParseError> {
        match self.cur.peek() {
            Some(Tok::Bottom) => {
                self.cur.advance();
                Ok(Prop::Bottom)
            }
            Some(Tok::LParen) => {
                self.cur.advance();
                let p = self.prop()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(p)
            }
            Some(Tok::Ident(name)) if self.sig.predicate(name).is_some() => {
                let name = self.cur.ident()?;
                let args = if self.cur.peek() == Some(&Tok::LParen) {
                    self.args()?
                } else {
                    Vec::new()
                };
                Ok(Prop::Atom(name, args))
            }
            Some(Tok::Ident(_)) | Some(Tok::Meta(_)) => {
                let lhs = self.term()?;
                if !self.cur.eat(&Tok::Eq) {
                    return Err(self.cur.unexpected("`=` after a term"));
                }
                let rhs = self.term()?;
                Ok(Prop::eq(lhs, rhs))
            }
            _ => Err(self.cur.unexpected("a proposition")),
        }
    }

    pub fn prop_list(&mut self) -> Result<Vec<Prop>, ParseError> {
        let mut out = Vec::new();
        match self.cur.peek() {
            None | Some(Tok::Turnstile) => return Ok(out),
            _ => {}
        }
        loop {
            out.push(self.prop()?);
            if !self.cur.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    pub fn sequent(&mut self) -> Result<Sequent<Prop>, ParseError> {
        let left = self.prop_list()?;
        self.cur.expect(&Tok::Turnstile)?;
        let right = self.prop_list()?;
        Ok(Sequent { left, right })
    }
}

pub fn parse_term(sig: &Signature, src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, sig)?;
    let t = p.term()?;
    p.cur.finish()?;
    Ok(t)
}

pub fn parse_prop(sig: &Signature, src: &str) -> Result<Prop, ParseError> {
    let mut p = Parser::new(src, sig)?;
    let a = p.prop()?;
    p.cur.finish()?;
    Ok(a)
}

pub fn parse_sequent(sig: &Signature, src: &str) -> Result<Sequent<Prop>, ParseError> {
    let mut p = Parser::new(src, sig)?;
    let s = p.sequent()?;
    p.cur.finish()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ToDeBruijn;

    fn sig() -> Signature {
        Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun mu : <2>\nfun a : <>\npred = : <0,0>\npred P : <0>\npred Q : <>")
            .unwrap()
    }

    #[test]
    fn parses_terms_with_binders() {
        let t = parse_term(&sig(), "Lam(z. f(x, z))").unwrap();
        assert_eq!(
            t,
            Term::app(
                "Lam",
                [Arg::bind(["z"], Term::app("f", [Term::var("x").into(), Term::var("z").into()]))]
            )
        );
        let t = parse_term(&sig(), "mu(x y. x)").unwrap();
        assert_eq!(t, Term::app("mu", [Arg::bind(["x", "y"], Term::var("x"))]));
        assert_eq!(parse_term(&sig(), "a").unwrap(), Term::constant("a"));
        assert_eq!(parse_term(&sig(), "b").unwrap(), Term::var("b"));
    }

    #[test]
    fn connective_precedence() {
        let s = sig();
        let p = parse_prop(&s, "Q /\\ Q \\/ Q => Q").unwrap();
        let q = || Prop::atom("Q", []);
        assert_eq!(p, Prop::imp(Prop::or(Prop::and(q(), q()), q()), q()));
        let p = parse_prop(&s, "Q => Q => Q").unwrap();
        assert_eq!(p, Prop::imp(q(), Prop::imp(q(), q())));
        let p = parse_prop(&s, "forall x. P(x) => Q").unwrap();
        assert_eq!(p, Prop::forall("x", Prop::imp(Prop::atom("P", [Term::var("x").into()]), q())));
        let p = parse_prop(&s, "(forall x. P(x)) => Q").unwrap();
        assert_eq!(p, Prop::imp(Prop::forall("x", Prop::atom("P", [Term::var("x").into()])), q()));
    }

    #[test]
    fn equality_is_infix() {
        let p = parse_prop(&sig(), "forall x y. f(x, y) = Lam(z. f(x, z))").unwrap();
        let q = parse_prop(&sig(), "∀x. ∀y. f(x,y) = Lam(z. f(x,z))").unwrap();
        assert_eq!(p, q);
        assert!(matches!(p, Prop::Forall(..)));
    }

    #[test]
    fn parses_sequents() {
        let s = parse_sequent(&sig(), "P(a), Q |- a = a").unwrap();
        assert_eq!(s.left.len(), 2);
        assert_eq!(s.right.len(), 1);
        let s = parse_sequent(&sig(), "|- ").unwrap();
        assert!(s.left.is_empty() && s.right.is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_prop(&sig(), "P(x) =>").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.msg.contains("proposition"));
        assert!(parse_term(&sig(), "f(x y)").is_err());
        assert!(parse_term(&sig(), "P(x)").is_err());
    }

    #[test]
    fn alpha_after_parse() {
        let s = sig();
        let a = parse_term(&s, "Lam(x. x)").unwrap();
        let b = parse_term(&s, "Lam(y. y)").unwrap();
        assert!(a.alpha_eq(&b));
    }
}
