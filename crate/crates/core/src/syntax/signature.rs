use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Number of variables bound in each argument slot of a symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BindingArity(Vec<usize>);

impl BindingArity {
    pub fn new(slots: impl Into<Vec<usize>>) -> Self {
        Self(slots.into())
    }

    /// Arity of an ordinary first-order symbol with `n` arguments.
    pub fn plain(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn slots(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_binders(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for BindingArity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ">")
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared twice")]
    Duplicate(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidName(String),
    #[error("the equality predicate must have binding arity <0,0>, found {0}")]
    EqualityArity(BindingArity),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Words the parsers treat specially; they cannot name symbols.
pub const RESERVED: &[&str] = &["forall", "exists", "false", "o", "id", "up"];

/// Whether `name` may be used for a variable or a symbol.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') && !RESERVED.contains(&name)
}

/// Function and predicate symbols with their binding arities.
///
/// The two name spaces are disjoint. The predicate `=` is written infix by
/// the parsers and printers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    functions: BTreeMap<String, BindingArity>,
    predicates: BTreeMap<String, BindingArity>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_fresh(&self, name: &str) -> Result<(), SignatureError> {
        if self.functions.contains_key(name) || self.predicates.contains_key(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn add_function(
        &mut self,
        name: &str,
        arity: BindingArity,
    ) -> Result<(), SignatureError> {
        if !is_identifier(name) {
            return Err(SignatureError::InvalidName(name.to_string()));
        }
        self.check_fresh(name)?;
        self.functions.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn add_predicate(
        &mut self,
        name: &str,
        arity: BindingArity,
    ) -> Result<(), SignatureError> {
        if name == "=" {
            if arity != BindingArity::plain(2) {
                return Err(SignatureError::EqualityArity(arity));
            }
        } else if !is_identifier(name) {
            return Err(SignatureError::InvalidName(name.to_string()));
        }
        self.check_fresh(name)?;
        self.predicates.insert(name.to_string(), arity);
        Ok(())
    }

    /// Builder-style variant of [`Signature::add_function`].
    pub fn with_function(mut self, name: &str, slots: &[usize]) -> Result<Self, SignatureError> {
        self.add_function(name, BindingArity::new(slots))?;
        Ok(self)
    }

    pub fn with_predicate(mut self, name: &str, slots: &[usize]) -> Result<Self, SignatureError> {
        self.add_predicate(name, BindingArity::new(slots))?;
        Ok(self)
    }

    pub fn function(&self, name: &str) -> Option<&BindingArity> {
        self.functions.get(name)
    }

    pub fn predicate(&self, name: &str) -> Option<&BindingArity> {
        self.predicates.get(name)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &BindingArity)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, &BindingArity)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Parses the line-oriented signature format:
    ///
    /// ```text
    /// # comment
    /// fun Lam : <1>
    /// pred = : <0,0>
    /// ```
    pub fn parse(text: &str) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| SignatureError::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            let (head, arity) = line
                .rsplit_once(':')
                .ok_or_else(|| err("expected `fun <name> : <k1,...,kn>`"))?;
            let mut words = head.split_whitespace();
            let kind = words.next().ok_or_else(|| err("missing declaration kind"))?;
            let name = words.next().ok_or_else(|| err("missing symbol name"))?;
            if words.next().is_some() {
                return Err(err("unexpected text before `:`"));
            }
            let arity = parse_arity(arity.trim()).ok_or_else(|| err("malformed binding arity"))?;
            let res = match kind {
                "fun" => sig.add_function(name, arity),
                "pred" => sig.add_predicate(name, arity),
                _ => return Err(err("declarations start with `fun` or `pred`")),
            };
            res.map_err(|e| err(&e.to_string()))?;
        }
        Ok(sig)
    }

    /// Renders the signature in the format accepted by [`Signature::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, arity) in &self.functions {
            out.push_str(&format!("fun {name} : {arity}\n"));
        }
        for (name, arity) in &self.predicates {
            out.push_str(&format!("pred {name} : {arity}\n"));
        }
        out
    }
}

fn parse_arity(s: &str) -> Option<BindingArity> {
    let inner = s.strip_prefix('<')?.strip_suffix('>')?.trim();
    if inner.is_empty() {
        return Some(BindingArity::default());
    }
    inner
        .split(',')
        .map(|k| k.trim().parse::<usize>().ok())
        .collect::<Option<Vec<_>>>()
        .map(BindingArity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signature_file() {
        let sig = Signature::parse(
            "# disjoint sum\nfun delta : <0,1,1>\nfun a : <>\npred = : <0, 0>\n",
        )
        .unwrap();
        assert_eq!(sig.function("delta").unwrap().slots(), &[0, 1, 1]);
        assert!(sig.function("a").unwrap().is_empty());
        assert_eq!(sig.predicate("=").unwrap(), &BindingArity::plain(2));
        assert_eq!(Signature::parse(&sig.to_text()).unwrap(), sig);
    }

    #[test]
    fn name_spaces_are_disjoint() {
        let err = Signature::parse("fun P : <0>\npred P : <0>").unwrap_err();
        assert!(matches!(err, SignatureError::Parse { line: 2, .. }));
    }

    #[test]
    fn rejects_bad_declarations() {
        assert!(Signature::parse("fun f <1>").is_err());
        assert!(Signature::parse("fun f : <a>").is_err());
        assert!(Signature::parse("fun forall : <>").is_err());
        assert!(Signature::parse("pred = : <1,1>").is_err());
        assert!(Signature::parse("fun 0 : <>").is_err());
    }
}
