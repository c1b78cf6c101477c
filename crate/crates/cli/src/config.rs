//! Run configuration: TOML file values overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use lric_core::{GradeSchema, PathMethod, Policy};
use serde::Deserialize;

use crate::io::read_thresholds;

/// Threshold policy as written on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum QSpec {
    OutShare(f64),
    AttrShare { attribute: String, fraction: f64 },
    Absolute(PathBuf),
}

impl FromStr for QSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let fraction = |f: &str| f.parse::<f64>().map_err(|_| anyhow!("invalid fraction '{f}' in --q {s}"));
        match s.split_once(':') {
            Some(("out-share", f)) => Ok(QSpec::OutShare(fraction(f)?)),
            Some(("attr-share", rest)) => match rest.rsplit_once(':') {
                Some((attribute, f)) if !attribute.is_empty() => {
                    Ok(QSpec::AttrShare { attribute: attribute.to_string(), fraction: fraction(f)? })
                }
                _ => bail!("expected attr-share:<name>:<fraction>, got {s}"),
            },
            Some(("abs", file)) if !file.is_empty() => Ok(QSpec::Absolute(PathBuf::from(file))),
            _ => bail!("unknown threshold policy '{s}'; expected out-share:<f>, attr-share:<name>:<f> or abs:<file>"),
        }
    }
}

impl QSpec {
    pub fn policy(&self) -> anyhow::Result<Policy> {
        Ok(match self {
            QSpec::OutShare(f) => Policy::OutShareQuota(*f),
            QSpec::AttrShare { attribute, fraction } => {
                Policy::AttributeShare { attribute: attribute.clone(), fraction: *fraction }
            }
            QSpec::Absolute(path) => Policy::Absolute(read_thresholds(path)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classical {
    InStrength,
    OutStrength,
    StrengthDifference,
    Strength,
    ClosenessIn,
    ClosenessOut,
    Betweenness,
    Eigenvector,
    PageRank,
}

/// One requested index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Kbi,
    Paths(PathMethod),
    Sim,
    Classical(Classical),
}

impl Method {
    pub fn all() -> Vec<Method> {
        let mut v = vec![Method::Kbi];
        v.extend(PathMethod::ALL.iter().map(|&m| Method::Paths(m)));
        v.push(Method::Sim);
        use Classical::*;
        v.extend(
            [InStrength, OutStrength, StrengthDifference, Strength, ClosenessIn, ClosenessOut, Betweenness, Eigenvector, PageRank]
                .map(Method::Classical),
        );
        v
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Kbi => "kbi",
            Method::Paths(m) => m.name(),
            Method::Sim => "sim",
            Method::Classical(c) => match c {
                Classical::InStrength => "win",
                Classical::OutStrength => "wout",
                Classical::StrengthDifference => "wdiff",
                Classical::Strength => "wdeg",
                Classical::ClosenessIn => "clos-in",
                Classical::ClosenessOut => "clos-out",
                Classical::Betweenness => "betweenness",
                Classical::Eigenvector => "eigenvector",
                Classical::PageRank => "pagerank",
            },
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a comma-separated method list; `all` selects every index.
pub fn parse_methods(list: &str) -> anyhow::Result<Vec<Method>> {
    let mut out: Vec<Method> = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let found = if item.eq_ignore_ascii_case("all") {
            Method::all()
        } else {
            let m = Method::all()
                .into_iter()
                .find(|m| m.name().eq_ignore_ascii_case(item))
                .ok_or_else(|| anyhow!("unknown method '{item}'"))?;
            vec![m]
        };
        for m in found {
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    if out.is_empty() {
        bail!("no method selected");
    }
    Ok(out)
}

pub fn parse_grades(name: &str) -> anyhow::Result<GradeSchema<f64>> {
    match name {
        "standard" => Ok(GradeSchema::standard()),
        "table20" | "empirical" => Ok(GradeSchema::empirical()),
        other => bail!("unknown grade schema '{other}'; expected standard or table20"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format '{other}'; expected csv or json"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MethodList {
    One(String),
    Many(Vec<String>),
}

impl MethodList {
    fn joined(&self) -> String {
        match self {
            MethodList::One(s) => s.clone(),
            MethodList::Many(v) => v.join(","),
        }
    }
}

/// Keys accepted in the TOML config file; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub edges: Option<PathBuf>,
    pub attributes: Option<PathBuf>,
    pub netting: Option<bool>,
    pub q: Option<String>,
    pub method: Option<MethodList>,
    pub limit: Option<usize>,
    pub grades: Option<String>,
    pub normalize_by: Option<String>,
    pub cap: Option<usize>,
    pub runs: Option<usize>,
    pub k0_max: Option<usize>,
    pub stages: Option<usize>,
    pub exhaustive: Option<bool>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub out_dir: Option<PathBuf>,
    pub emit_matrices: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Keeps `self`'s value wherever it is set and falls back to `base`.
    pub fn over(self, base: FileConfig) -> FileConfig {
        FileConfig {
            edges: self.edges.or(base.edges),
            attributes: self.attributes.or(base.attributes),
            netting: self.netting.or(base.netting),
            q: self.q.or(base.q),
            method: self.method.or(base.method),
            limit: self.limit.or(base.limit),
            grades: self.grades.or(base.grades),
            normalize_by: self.normalize_by.or(base.normalize_by),
            cap: self.cap.or(base.cap),
            runs: self.runs.or(base.runs),
            k0_max: self.k0_max.or(base.k0_max),
            stages: self.stages.or(base.stages),
            exhaustive: self.exhaustive.or(base.exhaustive),
            seed: self.seed.or(base.seed),
            format: self.format.or(base.format),
            out_dir: self.out_dir.or(base.out_dir),
            emit_matrices: self.emit_matrices.or(base.emit_matrices),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub runs: usize,
    pub k0_max: usize,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub stages: Option<usize>,
}

/// Fully resolved settings for the `compute` and `cascade` commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub edges: PathBuf,
    pub attributes: Option<PathBuf>,
    pub netting: bool,
    pub q: QSpec,
    pub methods: Vec<Method>,
    pub limit: Option<usize>,
    pub grades: GradeSchema<f64>,
    pub normalize_by: Option<String>,
    pub cap: usize,
    pub sim: SimSettings,
    pub format: Format,
    pub out_dir: Option<PathBuf>,
    pub emit_matrices: bool,
}

impl RunConfig {
    pub fn resolve(c: FileConfig) -> anyhow::Result<Self> {
        let edges = c.edges.ok_or_else(|| anyhow!("an edge file is required (--edges)"))?;
        let q = c.q.as_deref().unwrap_or("out-share:0.25").parse()?;
        let methods = parse_methods(&c.method.map_or_else(|| "kbi".to_string(), |m| m.joined()))?;
        let sim = SimSettings {
            runs: c.runs.unwrap_or(lric_core::sim::DEFAULT_RUNS),
            k0_max: c.k0_max.unwrap_or(lric_core::sim::DEFAULT_K0_MAX),
            exhaustive: c.exhaustive.unwrap_or(false),
            seed: c.seed,
            stages: c.stages,
        };
        if methods.contains(&Method::Sim) && !sim.exhaustive && sim.seed.is_none() {
            bail!("random simulation needs --seed (or pass --exhaustive)");
        }
        if c.limit == Some(0) {
            bail!("--limit must be at least 1");
        }
        Ok(Self {
            edges,
            attributes: c.attributes,
            netting: c.netting.unwrap_or(true),
            q,
            methods,
            limit: c.limit,
            grades: parse_grades(c.grades.as_deref().unwrap_or("standard"))?,
            normalize_by: c.normalize_by,
            cap: c.cap.unwrap_or(lric_core::groups::DEFAULT_ENUMERATION_CAP),
            sim,
            format: c.format.as_deref().unwrap_or("csv").parse()?,
            out_dir: c.out_dir,
            emit_matrices: c.emit_matrices.unwrap_or(false),
        })
    }
}
