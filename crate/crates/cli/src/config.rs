//! Effective run settings: defaults, then a flat `key = value` file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use thetacert_core::LVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => bail!("unknown format {other:?} (json or table)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `None` lets each command pick its own order.
    pub q_order: Option<u32>,
    pub max_form_degree: u32,
    pub tolerance: f64,
    pub l_variant: LVariant,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    /// 0 means one worker per core.
    pub jobs: usize,
    pub allow_degenerate: bool,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q_order: None,
            max_form_degree: 8,
            tolerance: 1e-9,
            l_variant: LVariant::FullAngle,
            format: Format::Json,
            out: None,
            cache_dir: None,
            jobs: 0,
            allow_degenerate: false,
            seed: 20,
        }
    }
}

/// Flag values as given on the command line; `None` means not given.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub q_order: Option<u32>,
    pub max_form_degree: Option<u32>,
    pub tolerance: Option<f64>,
    pub l_variant: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub allow_degenerate: bool,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(config_file: Option<&Path>, flags: &Overrides) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = config_file {
            let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            cfg.apply_file(&text).with_context(|| format!("in config {}", path.display()))?;
        }
        cfg.apply_flags(flags)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').with_context(|| format!("line {}: expected key = value", n + 1))?;
            self.set(&key.trim().replace('-', "_"), value.trim()).with_context(|| format!("line {}", n + 1))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "q_order" => self.q_order = Some(value.parse()?),
            "max_degree" | "max_form_degree" => self.max_form_degree = value.parse()?,
            "tol" | "tolerance" => self.tolerance = value.parse()?,
            "l_variant" => self.l_variant = value.parse()?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(value.into()),
            "cache_dir" => self.cache_dir = Some(value.into()),
            "jobs" => self.jobs = value.parse()?,
            "allow_degenerate" => self.allow_degenerate = value.parse()?,
            "seed" => self.seed = value.parse()?,
            other => bail!("unknown key {other:?}"),
        }
        Ok(())
    }

    fn apply_flags(&mut self, f: &Overrides) -> Result<()> {
        if let Some(q) = f.q_order {
            self.q_order = Some(q);
        }
        if let Some(d) = f.max_form_degree {
            self.max_form_degree = d;
        }
        if let Some(t) = f.tolerance {
            self.tolerance = t;
        }
        if let Some(v) = &f.l_variant {
            self.l_variant = v.parse()?;
        }
        if let Some(v) = &f.format {
            self.format = v.parse()?;
        }
        if let Some(p) = &f.out {
            self.out = Some(p.clone());
        }
        if let Some(p) = &f.cache_dir {
            self.cache_dir = Some(p.clone());
        }
        if let Some(j) = f.jobs {
            self.jobs = j;
        }
        if let Some(s) = f.seed {
            self.seed = s;
        }
        self.allow_degenerate |= f.allow_degenerate;
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            bail!("tolerance must be positive, got {}", self.tolerance);
        }
        if self.max_form_degree == 0 || self.max_form_degree % 2 == 1 {
            bail!("max form degree must be even and positive, got {}", self.max_form_degree);
        }
        if self.q_order == Some(0) {
            bail!("q order must be positive");
        }
        Ok(())
    }

    /// Settings that can change results. Paths and worker count are left out
    /// so reports do not depend on them.
    pub fn to_json(&self) -> Value {
        json!({
            "q_order": self.q_order,
            "max_form_degree": self.max_form_degree,
            "tolerance": self.tolerance,
            "l_variant": self.l_variant.as_str(),
            "allow_degenerate": self.allow_degenerate,
            "seed": self.seed,
        })
    }
}
