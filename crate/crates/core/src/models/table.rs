//! Finite binding models given by tables, and their `.mdl` text format.
//!
//! ```text
//! fun f : <0>
//! pred = : <0,0>
//! level 0 : k l
//! level 1 : k l 1 ~1
//! proj 1 1 = 1
//! compose 0 1 : 1 | l = l
//! apply f 0 : k = k
//! holds = : k k
//! ```
//!
//! `compose p n : a | b1 .. bn = c` reads `a □_{p,n} <b1..bn> = c` with `a`
//! in `M_n`; `apply f p : a1 .. an = c` gives `f̂_p`; `holds` lists the
//! tuples a predicate is true on. Without a `proj i n` line the element of
//! `M_n` named `i` is the projection.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use super::{BindingModel, Domain, Ifs, ModelError};
use crate::syntax::{BindingArity, Signature};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct TableError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, Default)]
pub struct TableModel {
    sig: Signature,
    /// Element names per level.
    levels: Vec<Vec<String>>,
    proj: HashMap<(usize, usize), usize>,
    compose: HashMap<(usize, usize, usize, Vec<usize>), usize>,
    apply: HashMap<(String, usize, Vec<usize>), usize>,
    holds: HashSet<(String, Vec<usize>)>,
}

impl TableModel {
    pub fn max_level(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn elements(&self, n: usize) -> Option<&[String]> {
        self.levels.get(n).map(Vec::as_slice)
    }

    fn undefined(what: String) -> ModelError {
        ModelError::Undefined(what)
    }

    /// Tabulates a model with finite carriers up to `max_level`. Symbol
    /// tables are filled for every level where their arguments fit.
    pub fn tabulate<M: BindingModel>(m: &M, max_level: usize) -> Result<Self, ModelError> {
        let mut out = TableModel {
            sig: m.signature().clone(),
            ..Default::default()
        };
        let carriers = (0..=max_level)
            .map(|n| m.carrier(n).ok_or(ModelError::InfiniteDomainExhaustionRequested))
            .collect::<Result<Vec<_>, _>>()?;
        let index = |n: usize, e: &M::Elem| carriers[n].iter().position(|c| m.elem_eq(n, c, e));
        out.levels = carriers
            .iter()
            .enumerate()
            .map(|(n, c)| c.iter().map(|e| { let s = m.show(n, e); s.strip_suffix(&n.to_string()).unwrap_or(&s).to_string() }).collect())
            .collect();
        for (n, names) in out.levels.iter_mut().enumerate() {
            let distinct: HashSet<&String> = names.iter().collect();
            if distinct.len() != names.len() || names.iter().any(|s| s.is_empty() || s.contains(char::is_whitespace)) {
                *names = (0..carriers[n].len()).map(|i| format!("e{i}")).collect();
            }
        }
        for n in 0..=max_level {
            for i in 1..=n {
                let e = m.proj(i, n)?;
                out.proj.insert((i, n), index(n, &e).ok_or_else(|| Self::undefined(format!("{i}_{n}")))?);
            }
        }
        for n in 0..=max_level {
            for p in 0..=max_level {
                for_tuples(&vec![carriers[p].len(); n], |bs| {
                    let bv: Vec<M::Elem> = bs.iter().map(|&b| carriers[p][b].clone()).collect();
                    for (a, ae) in carriers[n].iter().enumerate() {
                        let c = m.compose(p, n, ae, &bv)?;
                        let ci = index(p, &c).ok_or_else(|| Self::undefined("composition result".into()))?;
                        out.compose.insert((p, n, a, bs.to_vec()), ci);
                    }
                    Ok(())
                })?;
            }
        }
        let funs: Vec<(String, Vec<usize>)> = m
            .signature()
            .functions()
            .map(|(f, a)| (f.to_string(), a.slots().to_vec()))
            .collect();
        for (f, ks) in &funs {
            for p in 0..=max_level {
                if ks.iter().any(|k| p + k > max_level) {
                    continue;
                }
                let sizes: Vec<usize> = ks.iter().map(|k| carriers[p + k].len()).collect();
                for_tuples(&sizes, |args| {
                    let av: Vec<M::Elem> = args.iter().zip(ks).map(|(&a, k)| carriers[p + k][a].clone()).collect();
                    let c = m.fhat(f, p, &av)?;
                    let ci = index(p, &c).ok_or_else(|| Self::undefined(format!("{f}_{p} result")))?;
                    out.apply.insert((f.clone(), p, args.to_vec()), ci);
                    Ok(())
                })?;
            }
        }
        let preds: Vec<(String, Vec<usize>)> = m
            .signature()
            .predicates()
            .map(|(f, a)| (f.to_string(), a.slots().to_vec()))
            .collect();
        for (pr, ks) in &preds {
            if ks.iter().any(|&k| k > max_level) {
                continue;
            }
            let sizes: Vec<usize> = ks.iter().map(|&k| carriers[k].len()).collect();
            for_tuples(&sizes, |args| {
                let av: Vec<M::Elem> = args.iter().zip(ks).map(|(&a, &k)| carriers[k][a].clone()).collect();
                if m.phat(pr, &av)? {
                    out.holds.insert((pr.clone(), args.to_vec()));
                }
                Ok(())
            })?;
        }
        Ok(out)
    }

    /// The `.mdl` text of this model.
    pub fn to_text(&self) -> String {
        let mut out = self.sig.to_text();
        if !out.ends_with('\n') {
            out.push('\n');
        }
        for (n, names) in self.levels.iter().enumerate() {
            let _ = writeln!(out, "level {n} : {}", names.join(" "));
        }
        let mut proj: Vec<_> = self.proj.iter().collect();
        proj.sort();
        for ((i, n), e) in proj {
            let _ = writeln!(out, "proj {i} {n} = {}", self.levels[*n][*e]);
        }
        let mut comp: Vec<_> = self.compose.iter().collect();
        comp.sort();
        for ((p, n, a, bs), c) in comp {
            let bs: Vec<&str> = bs.iter().map(|&b| self.levels[*p][b].as_str()).collect();
            let _ = writeln!(
                out,
                "compose {p} {n} : {} | {} = {}",
                self.levels[*n][*a],
                bs.join(" "),
                self.levels[*p][*c]
            );
        }
        let mut apply: Vec<_> = self.apply.iter().collect();
        apply.sort();
        for ((f, p, args), c) in apply {
            let ks = self.sig.function(f).map(|a| a.slots().to_vec()).unwrap_or_default();
            let args: Vec<&str> = args
                .iter()
                .zip(&ks)
                .map(|(&a, k)| self.levels[p + k][a].as_str())
                .collect();
            let _ = writeln!(out, "apply {f} {p} : {} = {}", args.join(" "), self.levels[*p][*c]);
        }
        let mut holds: Vec<_> = self.holds.iter().collect();
        holds.sort();
        for (pr, args) in holds {
            let ks = self.sig.predicate(pr).map(|a| a.slots().to_vec()).unwrap_or_default();
            let args: Vec<&str> = args.iter().zip(&ks).map(|(&a, &k)| self.levels[k][a].as_str()).collect();
            let _ = writeln!(out, "holds {pr} : {}", args.join(" "));
        }
        out
    }
}

fn for_tuples(sizes: &[usize], mut f: impl FnMut(&[usize]) -> Result<(), ModelError>) -> Result<(), ModelError> {
    if sizes.contains(&0) {
        return Ok(());
    }
    let mut idx = vec![0; sizes.len()];
    loop {
        f(&idx)?;
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(());
            }
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn lerr<T>(line: usize, msg: impl Into<String>) -> Result<T, TableError> {
    Err(TableError { line, msg: msg.into() })
}

fn num(line: usize, s: &str) -> Result<usize, TableError> {
    s.parse().or_else(|_| lerr(line, format!("expected a number, found `{s}`")))
}

pub fn parse_table_model(text: &str) -> Result<TableModel, TableError> {
    let mut sig_text = String::new();
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("fun ") || line.starts_with("pred ") {
            sig_text.push_str(line);
            sig_text.push('\n');
        } else {
            body.push((i + 1, line));
        }
    }
    let sig = Signature::parse(&sig_text).map_err(|e| TableError {
        line: 0,
        msg: format!("signature: {e}"),
    })?;
    let mut m = TableModel {
        sig,
        ..Default::default()
    };
    for &(no, line) in &body {
        if let Some(rest) = line.strip_prefix("level ") {
            let Some((n, names)) = rest.split_once(':') else {
                return lerr(no, "expected `level <n> : <names>`");
            };
            let n = num(no, n.trim())?;
            if n != m.levels.len() {
                return lerr(no, format!("levels must be declared in order; expected level {}", m.levels.len()));
            }
            let names: Vec<String> = names.split_whitespace().map(String::from).collect();
            if names.iter().collect::<HashSet<_>>().len() != names.len() {
                return lerr(no, "duplicate element name");
            }
            m.levels.push(names);
        }
    }
    if m.levels.is_empty() {
        return lerr(0, "no `level` lines");
    }
    let elem = |no: usize, n: usize, name: &str| -> Result<usize, TableError> {
        m.levels
            .get(n)
            .and_then(|names| names.iter().position(|s| s == name))
            .ok_or_else(|| TableError {
                line: no,
                msg: format!("`{name}` is not an element of level {n}"),
            })
    };
    let arity = |no: usize, a: Option<&BindingArity>, what: &str| -> Result<Vec<usize>, TableError> {
        a.map(|a| a.slots().to_vec()).ok_or_else(|| TableError {
            line: no,
            msg: format!("undeclared symbol `{what}`"),
        })
    };
    let (mut proj, mut compose, mut apply, mut holds) = (HashMap::new(), HashMap::new(), HashMap::new(), HashSet::new());
    for &(no, line) in &body {
        let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
        match head {
            "level" => {}
            "proj" => {
                let Some((lhs, e)) = rest.split_once('=') else {
                    return lerr(no, "expected `proj <i> <n> = <elem>`");
                };
                let w: Vec<&str> = lhs.split_whitespace().collect();
                let [i, n] = w[..] else {
                    return lerr(no, "expected `proj <i> <n> = <elem>`");
                };
                let (i, n) = (num(no, i)?, num(no, n)?);
                proj.insert((i, n), elem(no, n, e.trim())?);
            }
            "compose" => {
                let parsed = rest.split_once(':').and_then(|(pn, r)| {
                    let (a, r) = r.split_once('|')?;
                    let (bs, c) = r.split_once('=')?;
                    Some((pn, a, bs, c))
                });
                let Some((pn, a, bs, c)) = parsed else {
                    return lerr(no, "expected `compose <p> <n> : <a> | <b1> .. <bn> = <c>`");
                };
                let w: Vec<&str> = pn.split_whitespace().collect();
                let [p, n] = w[..] else {
                    return lerr(no, "expected `compose <p> <n> : ...`");
                };
                let (p, n) = (num(no, p)?, num(no, n)?);
                let bs = bs
                    .split_whitespace()
                    .map(|b| elem(no, p, b))
                    .collect::<Result<Vec<_>, _>>()?;
                if bs.len() != n {
                    return lerr(no, format!("composition at level {n} needs {n} arguments"));
                }
                compose.insert((p, n, elem(no, n, a.trim())?, bs), elem(no, p, c.trim())?);
            }
            "apply" => {
                let parsed = rest
                    .split_once(':')
                    .and_then(|(fp, r)| r.split_once('=').map(|(args, c)| (fp, args, c)));
                let Some((fp, args, c)) = parsed else {
                    return lerr(no, "expected `apply <f> <p> : <args> = <c>`");
                };
                let w: Vec<&str> = fp.split_whitespace().collect();
                let [f, p] = w[..] else {
                    return lerr(no, "expected `apply <f> <p> : ...`");
                };
                let p = num(no, p)?;
                let ks = arity(no, m.sig.function(f), f)?;
                let args: Vec<&str> = args.split_whitespace().collect();
                if args.len() != ks.len() {
                    return lerr(no, format!("`{f}` takes {} arguments", ks.len()));
                }
                let args = args
                    .iter()
                    .zip(&ks)
                    .map(|(a, k)| elem(no, p + k, a))
                    .collect::<Result<Vec<_>, _>>()?;
                apply.insert((f.to_string(), p, args), elem(no, p, c.trim())?);
            }
            "holds" => {
                let Some((pr, args)) = rest.split_once(':') else {
                    return lerr(no, "expected `holds <P> : <args>`");
                };
                let pr = pr.trim();
                let ks = arity(no, m.sig.predicate(pr), pr)?;
                let args: Vec<&str> = args.split_whitespace().collect();
                if args.len() != ks.len() {
                    return lerr(no, format!("`{pr}` takes {} arguments", ks.len()));
                }
                let args = args
                    .iter()
                    .zip(&ks)
                    .map(|(a, &k)| elem(no, k, a))
                    .collect::<Result<Vec<_>, _>>()?;
                holds.insert((pr.to_string(), args));
            }
            _ => return lerr(no, format!("unknown directive `{head}`")),
        }
    }
    for n in 0..m.levels.len() {
        for i in 1..=n {
            if let std::collections::hash_map::Entry::Vacant(slot) = proj.entry((i, n)) {
                if let Some(e) = m.levels[n].iter().position(|s| *s == i.to_string()) {
                    slot.insert(e);
                }
            }
        }
    }
    m.proj = proj;
    m.compose = compose;
    m.apply = apply;
    m.holds = holds;
    Ok(m)
}

impl Ifs for TableModel {
    type Elem = usize;

    fn proj(&self, i: usize, n: usize) -> Result<usize, ModelError> {
        self.proj
            .get(&(i, n))
            .copied()
            .ok_or_else(|| Self::undefined(format!("projection {i}_{n}")))
    }

    fn compose(&self, p: usize, n: usize, a: &usize, bs: &[usize]) -> Result<usize, ModelError> {
        self.compose
            .get(&(p, n, *a, bs.to_vec()))
            .copied()
            .ok_or_else(|| Self::undefined(format!("composition at levels {p}, {n}")))
    }

    fn elem_eq(&self, _n: usize, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn carrier(&self, n: usize) -> Option<Vec<usize>> {
        Some((0..self.levels.get(n).map_or(0, Vec::len)).collect())
    }

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> usize {
        rng.gen_range(0..self.levels.get(n).map_or(1, |l| l.len().max(1)))
    }

    fn show(&self, n: usize, a: &usize) -> String {
        match self.levels.get(n).and_then(|l| l.get(*a)) {
            Some(name) => format!("{name}{n}"),
            None => format!("?{a}_{n}"),
        }
    }
}

impl BindingModel for TableModel {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn fhat(&self, f: &str, p: usize, args: &[usize]) -> Result<usize, ModelError> {
        if self.sig.function(f).is_none() {
            return Err(ModelError::UnknownSymbol(f.to_string()));
        }
        self.apply
            .get(&(f.to_string(), p, args.to_vec()))
            .copied()
            .ok_or_else(|| Self::undefined(format!("{f} at level {p}")))
    }

    fn phat(&self, pred: &str, args: &[usize]) -> Result<bool, ModelError> {
        if self.sig.predicate(pred).is_none() {
            return Err(ModelError::UnknownSymbol(pred.to_string()));
        }
        Ok(self.holds.contains(&(pred.to_string(), args.to_vec())))
    }

    fn domain(&self) -> Domain<usize> {
        Domain::Finite(self.carrier(0).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{check_coherence, check_ifs, validity, CheckMode, EvalOptions, ExtModel, Verdict};
    use crate::theories::ext_instance;

    #[test]
    fn tabulated_ext_model_round_trips() {
        let t = TableModel::tabulate(&ExtModel::new(), 3).unwrap();
        let text = t.to_text();
        assert!(text.contains("level 1 : k l 1 ~1"), "{text}");
        let back = parse_table_model(&text).unwrap();
        assert_eq!(back.to_text(), text);
        let (premise, concl) = ext_instance();
        assert_eq!(validity(&back, &premise, EvalOptions::default()).unwrap().verdict, Verdict::Valid);
        assert_eq!(validity(&back, &concl, EvalOptions::default()).unwrap().verdict, Verdict::Invalid);
        assert!(check_ifs(&back, (2, 2, 2), CheckMode::Exhaustive).unwrap().ok());
        assert!(check_coherence(&back, "Lam", (1, 1), CheckMode::Exhaustive).unwrap().ok());
        let r = check_coherence(&back, "Lam", (3, 3), CheckMode::Exhaustive).unwrap();
        assert!(!r.ok());
    }

    #[test]
    fn small_hand_written_model() {
        let text = "\
pred P : <0>
level 0 : a b
holds P : a
";
        let m = parse_table_model(text).unwrap();
        assert_eq!(m.phat("P", &[0]), Ok(true));
        assert_eq!(m.phat("P", &[1]), Ok(false));
        assert!(parse_table_model("level 0 : a\nfrob").is_err());
        let e = parse_table_model("pred P : <0>\nlevel 0 : a\nholds P : z").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
