//! Proof files: one node per line,
//! `rule <name> [x=<var>; A=<prop>; t=<term>; principal=<i>] <sequent>`,
//! with premises indented two more spaces than their conclusion.

use std::fmt::Write as _;

use thiserror::Error;

use crate::syntax::Signature;

use super::formula::Formula;
use super::tree::{ProofTree, Rule, RuleApp};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ProofFileError {
    pub line: usize,
    pub msg: String,
}

struct Line<'a> {
    no: usize,
    depth: usize,
    text: &'a str,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ProofFileError> {
    Err(ProofFileError { line, msg: msg.into() })
}

/// Splits `[ ... ] rest` at the matching bracket.
fn bracketed(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some((&s[1..i], &s[i + 1..]));
                }
            }
            _ => {}
        }
    }
    None
}

fn split_params(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

fn parse_node<F: Formula>(sig: &Signature, line: &Line<'_>) -> Result<(RuleApp<F>, crate::syntax::Sequent<F>), ProofFileError> {
    let no = line.no;
    let Some(rest) = line.text.strip_prefix("rule") else {
        return err(no, "expected `rule <name> ...`");
    };
    let rest = rest.trim_start();
    let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let rule: Rule = rest[..end].parse().map_err(|m| ProofFileError { line: no, msg: m })?;
    let mut rest = rest[end..].trim_start();
    let mut app = RuleApp::new(rule);
    if rest.starts_with('[') {
        let Some((params, tail)) = bracketed(rest) else {
            return err(no, "unclosed `[`");
        };
        for p in split_params(params) {
            let Some((key, value)) = p.split_once('=') else {
                return err(no, format!("parameter `{p}` is not `key=value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            let perr = |e: crate::ParseError| ProofFileError {
                line: no,
                msg: format!("parameter {key}: column {}: {}", e.col, e.msg),
            };
            match key {
                "x" => app.x = Some(value.to_string()),
                "A" => app.a = Some(F::parse(sig, value).map_err(perr)?),
                "t" => app.t = Some(F::parse_term(sig, value).map_err(perr)?),
                "principal" => {
                    app.principal = Some(value.parse().map_err(|_| ProofFileError {
                        line: no,
                        msg: format!("principal must be a number, found `{value}`"),
                    })?)
                }
                _ => return err(no, format!("unknown parameter `{key}`")),
            }
        }
        rest = tail.trim_start();
    }
    let seq = F::parse_sequent(sig, rest).map_err(|e| ProofFileError {
        line: no,
        msg: format!("column {}: {}", e.col, e.msg),
    })?;
    Ok((app, seq))
}

fn build<F: Formula>(sig: &Signature, lines: &[Line<'_>], i: &mut usize) -> Result<ProofTree<F>, ProofFileError> {
    let line = &lines[*i];
    let (rule, conclusion) = parse_node(sig, line)?;
    *i += 1;
    let mut premises = Vec::new();
    while *i < lines.len() && lines[*i].depth > line.depth {
        if lines[*i].depth != line.depth + 1 {
            return err(lines[*i].no, "premises must be indented two spaces deeper than their conclusion");
        }
        premises.push(build(sig, lines, i)?);
    }
    Ok(ProofTree::new(conclusion, rule, premises))
}

/// Parses a proof file. Blank lines and `#` comments are ignored.
pub fn parse_proof<F: Formula>(sig: &Signature, text: &str) -> Result<ProofTree<F>, ProofFileError> {
    let mut lines = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let trimmed = raw.trim_end();
        let body = trimmed.trim_start();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let indent = trimmed.len() - body.len();
        if indent % 2 != 0 || raw.starts_with('\t') {
            return err(no + 1, "indentation must be a multiple of two spaces");
        }
        lines.push(Line {
            no: no + 1,
            depth: indent / 2,
            text: body,
        });
    }
    if lines.is_empty() {
        return err(1, "empty proof");
    }
    if lines[0].depth != 0 {
        return err(lines[0].no, "the root must not be indented");
    }
    let mut i = 0;
    let tree = build(sig, &lines, &mut i)?;
    if i < lines.len() {
        return err(lines[i].no, "a proof file holds a single tree");
    }
    Ok(tree)
}

fn write_node<F: Formula>(out: &mut String, p: &ProofTree<F>, depth: usize) {
    let _ = write!(out, "{}rule {}", "  ".repeat(depth), p.rule.rule);
    let mut params = Vec::new();
    if let Some(x) = &p.rule.x {
        params.push(format!("x={x}"));
    }
    if let Some(a) = &p.rule.a {
        params.push(format!("A={a}"));
    }
    if let Some(t) = &p.rule.t {
        params.push(format!("t={t}"));
    }
    if let Some(i) = p.rule.principal {
        params.push(format!("principal={i}"));
    }
    if !params.is_empty() {
        let _ = write!(out, " [{}]", params.join("; "));
    }
    let _ = writeln!(out, " {}", p.conclusion);
    for q in &p.premises {
        write_node(out, q, depth + 1);
    }
}

pub fn print_proof<F: Formula>(p: &ProofTree<F>) -> String {
    let mut out = String::new();
    write_node(&mut out, p, 0);
    out
}
