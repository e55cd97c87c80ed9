use std::fmt::Display;
use std::path::Path;

use bindlog_core::models::{parse_table_model, AnyModel, ModelSpec};
use bindlog_core::sigma::{parse_rules, RewriteSystem};
use bindlog_core::syntax::Signature;

use crate::{Failure, RunConfig};

/// Text and a label for messages: the file name, or `<input>` for
/// inline text.
pub struct Source {
    pub label: String,
    pub text: String,
}

impl Source {
    /// Reads `arg` as a file when one exists under that name, otherwise
    /// takes it literally.
    pub fn arg(arg: &str) -> Result<Self, Failure> {
        let path = Path::new(arg);
        if path.is_file() {
            Self::file(path)
        } else {
            Ok(Source { label: "<input>".into(), text: arg.to_string() })
        }
    }

    pub fn file(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Ok(Source { label: path.display().to_string(), text })
    }

    pub fn err(&self, e: impl Display) -> Failure {
        Failure::Input(format!("{}: {e}", self.label))
    }
}

pub fn signature(cfg: &RunConfig) -> Result<Signature, Failure> {
    match &cfg.sig {
        None => Signature::new().with_predicate("=", &[0, 0]).map_err(|e| Failure::Input(e.to_string())),
        Some(path) => {
            let src = Source::file(path)?;
            Signature::parse(&src.text).map_err(|e| src.err(e))
        }
    }
}

/// σ, plus the rules of a `.rw` file.
pub fn rewrite_system(sig: &Signature, rules: Option<&Path>) -> Result<RewriteSystem, Failure> {
    let rs = RewriteSystem::sigma(sig);
    match rules {
        None => Ok(rs),
        Some(path) => {
            let src = Source::file(path)?;
            let rules = parse_rules(sig, &src.text).map_err(|e| src.err(e))?;
            Ok(rs.with_rules(rules))
        }
    }
}

pub fn model(name: &str, cfg: &RunConfig) -> Result<AnyModel, Failure> {
    if name.ends_with(".mdl") {
        let src = Source::file(Path::new(name))?;
        return parse_table_model(&src.text).map(AnyModel::Table).map_err(|e| src.err(e));
    }
    let spec: ModelSpec = name.parse().map_err(Failure::Input)?;
    let sig = match (&spec, &cfg.sig) {
        (ModelSpec::FullFn(_), Some(_)) => Some(signature(cfg)?),
        _ => None,
    };
    Ok(AnyModel::from_spec(&spec, sig.as_ref()))
}
