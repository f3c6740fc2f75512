use std::path::{Path, PathBuf};

use cubvis::arith::rational::{self, Rational};
use cubvis::cubic::{Chart, HomogeneousCubic};
use cubvis::generators::{generate, GeneratorSpec};
use cubvis::geometry::PointSet;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A point set or cubic given inline or as a path to a JSON file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    Path(PathBuf),
    Inline(T),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<Source<PointSet>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic: Option<Source<HomogeneousCubic>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clique_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<Chart>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    /// Makes relative paths relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(Source::Path(p)) = &mut self.input {
            fix(p);
        }
        if let Some(Source::Path(p)) = &mut self.cubic {
            fix(p);
        }
        if let Some(p) = &mut self.suite {
            fix(p);
        }
    }

    /// Values set in `other` win.
    pub fn overlay(&mut self, other: RunConfig) {
        overlay!(self, other, command, input, generator, cubic, output, k, l, seed, clique_budget, trials, chart, patch, alpha, beta, suite);
    }

    pub fn points(&self) -> Result<PointSet, CliError> {
        match (&self.input, &self.generator) {
            (Some(Source::Inline(a)), _) => Ok(a.clone()),
            (Some(Source::Path(p)), _) => read_points(p),
            (None, Some(spec)) => generate(spec).map_err(|e| CliError::Usage(e.to_string())),
            (None, None) => Err(CliError::Usage("an input point set (--in) is required".into())),
        }
    }

    pub fn cubic(&self) -> Result<HomogeneousCubic, CliError> {
        match &self.cubic {
            Some(Source::Inline(f)) => Ok(f.clone()),
            Some(Source::Path(p)) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
            }
            None => Err(CliError::Usage("a cubic (--cubic) is required".into())),
        }
    }

    pub fn k(&self) -> Result<usize, CliError> {
        let k = self.k.ok_or_else(|| CliError::Usage("--k is required".into()))?;
        if k < 2 {
            return Err(CliError::Usage("k must be at least 2".into()));
        }
        Ok(k)
    }

    pub fn rational(value: &Option<String>, name: &str) -> Result<Rational, CliError> {
        let s = value.as_ref().ok_or_else(|| CliError::Usage(format!("--{name} is required")))?;
        rational::parse(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
    }
}

/// A plain point set, or the report written by `generate`.
pub fn read_points(path: &Path) -> Result<PointSet, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let inner = match value.get("command").and_then(|c| c.as_str()) {
        Some("generate") => value.get("results").cloned().unwrap_or_default(),
        _ => value,
    };
    serde_json::from_value(inner).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
