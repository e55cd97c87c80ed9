//! Tokenizer shared by the binding-logic and L′ parsers.

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(usize),
    /// `?name`, a pattern metavariable.
    Meta(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Underscore,
    Plus,
    Imp,
    And,
    Or,
    Turnstile,
    Eq,
    Colon,
    Arrow,
    Semi,
    Bottom,
    Forall,
    Exists,
    Compose,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Meta(s) => format!("`?{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Underscore => "`_`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Imp => "`=>`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Bottom => "`false`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Compose => "`o`".into(),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Splits `src` into tokens. Identifiers made only of underscores are
/// lexed as [`Tok::Underscore`]; a digit run directly followed by `_` and
/// another digit run stays three tokens so L′ indices `3_5` parse.
pub fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: tl,
                col: tc,
            });
            *i += len;
            *col += len;
        };
        let rest2: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            _ if rest2 == "=>" => push(Tok::Imp, 2, &mut i, &mut col),
            _ if rest2 == "/\\" => push(Tok::And, 2, &mut i, &mut col),
            _ if rest2 == "\\/" => push(Tok::Or, 2, &mut i, &mut col),
            _ if rest2 == "|-" => push(Tok::Turnstile, 2, &mut i, &mut col),
            _ if rest2 == "->" => push(Tok::Arrow, 2, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '[' => push(Tok::LBrack, 1, &mut i, &mut col),
            ']' => push(Tok::RBrack, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            ';' => push(Tok::Semi, 1, &mut i, &mut col),
            '⇒' | '→' => push(Tok::Imp, 1, &mut i, &mut col),
            '∧' => push(Tok::And, 1, &mut i, &mut col),
            '∨' => push(Tok::Or, 1, &mut i, &mut col),
            '⊢' => push(Tok::Turnstile, 1, &mut i, &mut col),
            '⊥' => push(Tok::Bottom, 1, &mut i, &mut col),
            '∀' => push(Tok::Forall, 1, &mut i, &mut col),
            '∃' => push(Tok::Exists, 1, &mut i, &mut col),
            '∘' => push(Tok::Compose, 1, &mut i, &mut col),
            '?' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && ident_continue(chars[j]) {
                    j += 1;
                }
                if j == start {
                    return Err(ParseError {
                        line,
                        col,
                        msg: "expected a metavariable name after `?`".into(),
                    });
                }
                let name: String = chars[start..j].iter().collect();
                push(Tok::Meta(name), j - i, &mut i, &mut col);
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let n = text.parse::<usize>().map_err(|_| ParseError {
                    line,
                    col,
                    msg: format!("number `{text}` is too large"),
                })?;
                push(Tok::Int(n), j - i, &mut i, &mut col);
                if i + 1 < chars.len() && chars[i] == '_' && chars[i + 1].is_ascii_digit() {
                    out.push(Spanned {
                        tok: Tok::Underscore,
                        line,
                        col,
                    });
                    i += 1;
                    col += 1;
                }
            }
            c if ident_start(c) => {
                let mut j = i;
                while j < chars.len() && ident_continue(chars[j]) {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let tok = match text.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "false" => Tok::Bottom,
                    "o" => Tok::Compose,
                    s if s.chars().all(|c| c == '_') => Tok::Underscore,
                    _ => Tok::Ident(text),
                };
                if tok == Tok::Underscore {
                    // Only single underscores are meaningful (index separators).
                    for _ in 0..(j - i) {
                        push(Tok::Underscore, 1, &mut i, &mut col);
                    }
                } else {
                    push(tok, j - i, &mut i, &mut col);
                }
            }
            _ => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

/// Cursor over a token vector with position-carrying errors.
pub struct Cursor {
    toks: Vec<Spanned>,
    pub pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        let toks = tokenize(src)?;
        let end_line = src.lines().count().max(1);
        let end_col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
        Ok(Self {
            toks,
            pos: 0,
            end_line,
            end_col,
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    pub fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (self.end_line, self.end_col),
        };
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn int(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn lexes_connectives_and_unicode_aliases() {
        assert_eq!(toks("A => B"), toks("A ⇒ B"));
        assert_eq!(toks("∀x. ⊥"), vec![Tok::Forall, Tok::Ident("x".into()), Tok::Dot, Tok::Bottom]);
        assert_eq!(toks("a |- b"), toks("a ⊢ b"));
    }

    #[test]
    fn lexes_indices_and_metas() {
        assert_eq!(toks("3_5"), vec![Tok::Int(3), Tok::Underscore, Tok::Int(5)]);
        assert_eq!(toks("f_2"), vec![Tok::Ident("f_2".into())]);
        assert_eq!(toks("?t"), vec![Tok::Meta("t".into())]);
        assert_eq!(toks("s o id_0"), vec![
            Tok::Ident("s".into()),
            Tok::Compose,
            Tok::Ident("id_0".into())
        ]);
    }

    #[test]
    fn reports_positions() {
        let err = tokenize("x\n  $").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
    }
}
