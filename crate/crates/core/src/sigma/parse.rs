//! Text syntax of L′: `3_5`, `t[s]`, `id_4`, `up_2`, `t . s`, `s o s'`,
//! `f_2(...)`. `f(...)` abbreviates `f_0(...)`. Cons is right-associative
//! and binds weakest; composition is right-associative and binds tighter
//! than cons; closure brackets bind tightest.

use super::lprop::LProp;
use super::lterm::LTerm;
use super::pattern::{Num, Pat};
use crate::lex::{Cursor, ParseError, Tok};
use crate::syntax::Signature;

struct LParser<'a> {
    cur: Cursor,
    sig: &'a Signature,
    metas: bool,
}

/// Splits `name_12` into `("name", Some(12))`.
fn split_level(s: &str) -> (&str, Option<usize>) {
    if let Some((head, tail)) = s.rsplit_once('_') {
        if !head.is_empty() && !tail.is_empty() && tail.chars().all(|c| c.is_ascii_digit()) {
            if let Ok(n) = tail.parse() {
                return (head, Some(n));
            }
        }
    }
    (s, None)
}

impl<'a> LParser<'a> {
    fn new(src: &str, sig: &'a Signature, metas: bool) -> Result<Self, ParseError> {
        Ok(Self {
            cur: Cursor::new(src)?,
            sig,
            metas,
        })
    }

    fn num(&mut self) -> Result<Num, ParseError> {
        match self.cur.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.cur.advance();
                Ok(Num::Lit(n))
            }
            Some(Tok::Meta(m)) if self.metas => {
                let m = m.clone();
                self.cur.advance();
                let off = if self.cur.eat(&Tok::Plus) { self.cur.int()? } else { 0 };
                Ok(Num::Meta(m, off))
            }
            _ => Err(self.cur.unexpected("a level")),
        }
    }

    fn expr(&mut self) -> Result<Pat, ParseError> {
        let head = self.comp()?;
        if self.cur.eat(&Tok::Dot) {
            let tail = self.expr()?;
            Ok(Pat::Cons(Box::new(head), Box::new(tail)))
        } else {
            Ok(head)
        }
    }

    fn comp(&mut self) -> Result<Pat, ParseError> {
        let head = self.postfix()?;
        if self.cur.eat(&Tok::Compose) {
            let tail = self.comp()?;
            Ok(Pat::Comp(Box::new(head), Box::new(tail)))
        } else {
            Ok(head)
        }
    }

    fn postfix(&mut self) -> Result<Pat, ParseError> {
        let mut t = self.atom()?;
        while self.cur.eat(&Tok::LBrack) {
            let s = self.expr()?;
            self.cur.expect(&Tok::RBrack)?;
            t = Pat::Clos(Box::new(t), Box::new(s));
        }
        Ok(t)
    }

    fn args(&mut self) -> Result<Vec<Pat>, ParseError> {
        let mut out = Vec::new();
        if !self.cur.eat(&Tok::LParen) {
            return Ok(out);
        }
        if self.cur.eat(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.cur.eat(&Tok::RParen) {
                return Ok(out);
            }
            if !self.cur.eat(&Tok::Comma) {
                return Err(self.cur.unexpected("`,` or `)`"));
            }
        }
    }

    fn atom(&mut self) -> Result<Pat, ParseError> {
        match self.cur.peek().cloned() {
            Some(Tok::Int(i)) => {
                self.cur.advance();
                if !self.cur.eat(&Tok::Underscore) {
                    return Err(self.cur.unexpected("`_` and a level after an index"));
                }
                let n = self.num()?;
                if i == 0 {
                    return Err(self.cur.error("de Bruijn indices start at 1"));
                }
                Ok(Pat::Index(i, n))
            }
            Some(Tok::Meta(m)) if self.metas => {
                self.cur.advance();
                Ok(Pat::Meta(m))
            }
            Some(Tok::LParen) => {
                self.cur.advance();
                let t = self.expr()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.cur.advance();
                let (head, level) = if let Some(head) = name.strip_suffix('_') {
                    match self.cur.peek() {
                        Some(Tok::Meta(_)) if self.metas => (head.to_string(), Some(self.num()?)),
                        _ => return Err(self.cur.unexpected("a level after `_`")),
                    }
                } else {
                    let (h, l) = split_level(&name);
                    (h.to_string(), l.map(Num::Lit))
                };
                match (head.as_str(), level.clone()) {
                    ("id", Some(n)) => return Ok(Pat::Id(n)),
                    ("up", Some(n)) => return Ok(Pat::Shift(n)),
                    ("id", None) | ("up", None) => {
                        return Err(self.cur.error(format!("`{head}` needs a level, as in `{head}_0`")))
                    }
                    _ => {}
                }
                if self.sig.function(&head).is_some() {
                    let args = self.args()?;
                    return Ok(Pat::App(head, level.clone().unwrap_or(Num::Lit(0)), args));
                }
                if self.sig.function(&name).is_some() {
                    let args = self.args()?;
                    return Ok(Pat::App(name, Num::Lit(0), args));
                }
                if self.cur.peek() == Some(&Tok::LParen) {
                    return Err(self.cur.error(format!("unknown function symbol `{head}`")));
                }
                if matches!(level, Some(Num::Meta(..))) {
                    return Err(self.cur.error(format!("unknown function symbol `{head}`")));
                }
                Ok(Pat::Var(name))
            }
            _ => Err(self.cur.unexpected("an L′ term")),
        }
    }

    fn term(&mut self) -> Result<LTerm, ParseError> {
        let start = self.cur.pos;
        let p = self.expr()?;
        p.to_lterm().ok_or_else(|| {
            self.cur.pos = start;
            self.cur.error("metavariables are not allowed here")
        })
    }

    fn prop(&mut self) -> Result<LProp, ParseError> {
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
                        LProp::forall(x, acc)
                    } else {
                        LProp::exists(x, acc)
                    }
                }))
            }
            _ => self.binary(0),
        }
    }

    /// Levels: 0 `=>`, 1 `\/`, 2 `/\`; all right-associative.
    fn binary(&mut self, level: u8) -> Result<LProp, ParseError> {
        if level == 3 {
            return self.atom_prop();
        }
        let lhs = self.binary(level + 1)?;
        let op = [Tok::Imp, Tok::Or, Tok::And][level as usize].clone();
        if !self.cur.eat(&op) {
            return Ok(lhs);
        }
        let rhs = match self.cur.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => self.prop()?,
            _ => self.binary(level)?,
        };
        Ok(match level {
            0 => LProp::imp(lhs, rhs),
            1 => LProp::or(lhs, rhs),
            _ => LProp::and(lhs, rhs),
        })
    }

    fn atom_prop(&mut self) -> Result<LProp, ParseError> {
        match self.cur.peek() {
            Some(Tok::Bottom) => {
                self.cur.advance();
                Ok(LProp::Bottom)
            }
            Some(Tok::LParen) => {
                let save = self.cur.pos;
                self.cur.advance();
                if let Ok(p) = self.prop() {
                    if self.cur.eat(&Tok::RParen) {
                        return Ok(p);
                    }
                }
                self.cur.pos = save;
                self.equation()
            }
            Some(Tok::Ident(name)) if self.sig.predicate(name).is_some() => {
                let name = self.cur.ident()?;
                let mut args = Vec::new();
                if self.cur.eat(&Tok::LParen) && !self.cur.eat(&Tok::RParen) {
                    loop {
                        args.push(self.term()?);
                        if self.cur.eat(&Tok::RParen) {
                            break;
                        }
                        self.cur.expect(&Tok::Comma)?;
                    }
                }
                Ok(LProp::Atom(name, args))
            }
            _ => self.equation(),
        }
    }

    fn equation(&mut self) -> Result<LProp, ParseError> {
        let lhs = self.term()?;
        if !self.cur.eat(&Tok::Eq) {
            return Err(self.cur.unexpected("`=` after a term"));
        }
        let rhs = self.term()?;
        Ok(LProp::eq(lhs, rhs))
    }
}

pub fn parse_lterm(sig: &Signature, src: &str) -> Result<LTerm, ParseError> {
    let mut p = LParser::new(src, sig, false)?;
    let t = p.term()?;
    p.cur.finish()?;
    Ok(t)
}

pub fn parse_pattern(sig: &Signature, src: &str) -> Result<Pat, ParseError> {
    let mut p = LParser::new(src, sig, true)?;
    let t = p.expr()?;
    p.cur.finish()?;
    Ok(t)
}

pub fn parse_lprop(sig: &Signature, src: &str) -> Result<LProp, ParseError> {
    let mut p = LParser::new(src, sig, false)?;
    let a = p.prop()?;
    p.cur.finish()?;
    Ok(a)
}

/// Parses `A1, ..., An |- B1, ..., Bm` over L′.
pub fn parse_lsequent(sig: &Signature, src: &str) -> Result<crate::syntax::Sequent<LProp>, ParseError> {
    let mut p = LParser::new(src, sig, false)?;
    let mut sides = [Vec::new(), Vec::new()];
    for (i, side) in sides.iter_mut().enumerate() {
        if i == 1 {
            p.cur.expect(&Tok::Turnstile)?;
        }
        if matches!(p.cur.peek(), None | Some(Tok::Turnstile)) {
            continue;
        }
        loop {
            side.push(p.prop()?);
            if !p.cur.eat(&Tok::Comma) {
                break;
            }
        }
    }
    p.cur.finish()?;
    let [left, right] = sides;
    Ok(crate::syntax::Sequent::new(left, right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun a : <>\npred = : <0,0>\npred P : <1>").unwrap()
    }

    #[test]
    fn parses_worked_example() {
        let s = sig();
        let p = parse_lprop(&s, "forall x y. f_0(x, y) = Lam_0(f_1(x[up_0], 1_1))").unwrap();
        assert_eq!(p.to_string(), "forall x. forall y. f_0(x, y) = Lam_0(f_1(x[up_0], 1_1))");
        assert_eq!(parse_lprop(&s, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn cons_and_composition_precedence() {
        let s = sig();
        let t = parse_lterm(&s, "1_1[t . id_0]").unwrap();
        assert_eq!(t, LTerm::clos(LTerm::index(1, 1), LTerm::cons(LTerm::var("t"), LTerm::Id(0))));
        let u = parse_lterm(&s, "1_2 . up_0 o up_1").unwrap();
        assert_eq!(
            u,
            LTerm::cons(LTerm::index(1, 2), LTerm::comp(LTerm::Shift(0), LTerm::Shift(1)))
        );
        for src in ["(up_0 o up_1) o up_2", "up_0 o (1_1 . id_0)", "(1_1 . id_1)[up_1]", "a", "a_3", "f(x, a)"] {
            let t = parse_lterm(&s, src).unwrap();
            assert_eq!(parse_lterm(&s, &t.to_string()).unwrap(), t, "{src}");
        }
        assert_eq!(parse_lterm(&s, "f(x, a)").unwrap().to_string(), "f_0(x, a_0)");
    }

    #[test]
    fn predicates_and_sequents() {
        let s = sig();
        let p = parse_lprop(&s, "P(1_1) /\\ (a = a \\/ false)").unwrap();
        assert_eq!(p.to_string(), "P(1_1) /\\ (a_0 = a_0 \\/ false)");
        let q = parse_lsequent(&s, "a = a |- P(1_1), false").unwrap();
        assert_eq!((q.left.len(), q.right.len()), (1, 2));
    }

    #[test]
    fn rejects_malformed_input() {
        let s = sig();
        assert!(parse_lterm(&s, "0_3").is_err());
        assert!(parse_lterm(&s, "id").is_err());
        assert!(parse_lterm(&s, "g(x)").is_err());
        assert!(parse_lterm(&s, "?t").is_err());
        assert!(parse_lterm(&s, "1_1[").is_err());
    }
}
