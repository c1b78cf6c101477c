//! Command-line grammar and dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lric_core::Coefficient;

use crate::config::{FileConfig, Format, MethodList, RunConfig};
use crate::pipeline::{cascade_csv, cascade_rows, compare, compute, netted_edges};
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "lric-net", version, about = "Key borrowers and long-range influence in exposure networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Net mutual exposures and print the resulting edge list.
    Net {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        attributes: Option<PathBuf>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute one or more indices.
    Compute(RunArgs),
    /// Run a single default scenario and print its stages.
    Cascade {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated ids of the initially defaulting nodes.
        #[arg(long, value_delimiter = ',', required = true)]
        initial: Vec<String>,
    },
    /// Rank correlations between score reports.
    Compare {
        #[arg(long, num_args = 2.., required = true)]
        rankings: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Coef::Tau)]
        coef: Coef,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coef {
    Tau,
    Gamma,
}

impl From<Coef> for Coefficient {
    fn from(c: Coef) -> Self {
        match c {
            Coef::Tau => Coefficient::KendallTau,
            Coef::Gamma => Coefficient::Gamma,
        }
    }
}

/// Flags shared by `compute` and `cascade`; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with the same keys as the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub attributes: Option<PathBuf>,
    /// Skip netting of mutual exposures.
    #[arg(long)]
    pub no_netting: bool,
    /// out-share:<f> | attr-share:<name>:<f> | abs:<file>
    #[arg(long)]
    pub q: Option<String>,
    /// Comma-separated index names, or `all`.
    #[arg(long)]
    pub method: Option<String>,
    /// Longest path considered, in steps.
    #[arg(long)]
    pub limit: Option<usize>,
    /// standard | table20
    #[arg(long)]
    pub grades: Option<String>,
    /// Divide loans and thresholds by this lender attribute.
    #[arg(long)]
    pub normalize_by: Option<String>,
    /// Largest borrower count for exact group enumeration.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub k0_max: Option<usize>,
    /// Stop cascades after this many stages.
    #[arg(long)]
    pub stages: Option<usize>,
    /// Enumerate every initial set instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub emit_matrices: bool,
}

impl RunArgs {
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let base = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let flags = FileConfig {
            edges: self.edges.clone(),
            attributes: self.attributes.clone(),
            netting: self.no_netting.then_some(false),
            q: self.q.clone(),
            method: self.method.clone().map(MethodList::One),
            limit: self.limit,
            grades: self.grades.clone(),
            normalize_by: self.normalize_by.clone(),
            cap: self.cap,
            runs: self.runs,
            k0_max: self.k0_max,
            stages: self.stages,
            exhaustive: self.exhaustive.then_some(true),
            seed: self.seed,
            format: self.format.clone(),
            out_dir: self.out_dir.clone(),
            emit_matrices: self.emit_matrices.then_some(true),
        };
        RunConfig::resolve(flags.over(base))
    }
}

/// Caps the global thread pool at `LRIC_THREADS` when set.
pub fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("LRIC_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().with_context(|| format!("LRIC_THREADS={value} is not a thread count"))?;
    if n == 0 {
        bail!("LRIC_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    Ok(())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(report: &Report, format: Format, out_dir: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<()> {
    match (format, out_dir) {
        (Format::Json, None) => out.write_all(report.to_json().as_bytes())?,
        (Format::Json, Some(dir)) => {
            std::fs::create_dir_all(dir)?;
            write_file(&dir.join("report.json"), &report.to_json())?;
        }
        (Format::Csv, Some(dir)) => {
            std::fs::create_dir_all(dir)?;
            for t in &report.indices {
                write_file(&dir.join(format!("{}.csv", t.index)), &t.to_csv())?;
            }
            for m in &report.matrices {
                write_file(&dir.join(format!("{}.csv", m.name)), &m.to_csv())?;
            }
        }
        (Format::Csv, None) => {
            let single = report.indices.len() == 1 && report.matrices.is_empty();
            let mut first = true;
            let sections = report
                .indices
                .iter()
                .map(|t| (t.index.as_str(), t.to_csv()))
                .chain(report.matrices.iter().map(|m| (m.name.as_str(), m.to_csv())));
            for (name, body) in sections {
                if !single {
                    if !first {
                        writeln!(out)?;
                    }
                    writeln!(out, "# {name}")?;
                }
                first = false;
                out.write_all(body.as_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Net { edges, attributes, out: file } => {
            let text = netted_edges(&edges, attributes.as_deref())?;
            match file {
                Some(path) => write_file(&path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Compute(args) => {
            let config = args.resolve()?;
            let report = compute(&config)?;
            emit(&report, config.format, config.out_dir.as_deref(), out)?;
        }
        Command::Cascade { run, initial } => {
            let config = run.resolve()?;
            let rows = cascade_rows(&config, &initial)?;
            let text = match config.format {
                Format::Csv => cascade_csv(&rows),
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Compare { rankings, coef, out: file } => {
            let text = compare(&rankings, coef.into())?.to_csv();
            match file {
                Some(path) => write_file(&path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
    }
    Ok(())
}
