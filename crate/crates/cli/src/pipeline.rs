//! Loads a network, applies netting, thresholds and normalization, and runs
//! the selected indices.

use std::path::Path;

use anyhow::{bail, Context};
use lric_core::centrality::{self, Direction, DEFAULT_DAMPING};
use lric_core::kbi::kbi;
use lric_core::paths::{influence_matrix, lric_paths_vector};
use lric_core::rank::comparison_matrix;
use lric_core::sim::{cascade, lric_sim_vector, pivotal_initiators, share_matrix, simulate};
use lric_core::{Coefficient, GroupFinder, KbiVariant, Network, PathMatrices, Plan, SquareMatrix, Thresholds};
use serde::Serialize;

use crate::config::{Classical, Method, RunConfig, SimSettings};
use crate::io::{load_network, read_ranking};
use crate::report::{MatrixTable, Report, ScoreTable};

/// The network and thresholds every index of one run works on.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub net: Network,
    pub thresholds: Thresholds<f64>,
}

pub fn prepare(config: &RunConfig) -> anyhow::Result<Prepared> {
    let mut net = load_network(&config.edges, config.attributes.as_deref())?;
    if config.netting {
        net = net.net_mutual_exposures();
    }
    let mut thresholds = config.q.policy()?.resolve(&net)?;
    if let Some(attr) = &config.normalize_by {
        thresholds = thresholds.normalized_by(&net, attr)?;
        net = net.normalize_by_attribute(attr)?;
    }
    Ok(Prepared { net, thresholds })
}

fn plan(sim: &SimSettings) -> anyhow::Result<Plan> {
    let plan = if sim.exhaustive {
        Plan::exhaustive(sim.k0_max)
    } else {
        match sim.seed {
            Some(seed) => Plan::random(sim.runs, seed, sim.k0_max),
            None => bail!("random simulation needs --seed"),
        }
    };
    Ok(plan.with_stage_limit(sim.stages))
}

fn classical(net: &Network, which: Classical) -> anyhow::Result<Vec<f64>> {
    let d = || centrality::degree_measures(net);
    Ok(match which {
        Classical::InStrength => d().win,
        Classical::OutStrength => d().wout,
        Classical::StrengthDifference => d().wdiff,
        Classical::Strength => d().wdeg,
        Classical::ClosenessIn => centrality::closeness(net, Direction::In),
        Classical::ClosenessOut => centrality::closeness(net, Direction::Out),
        Classical::Betweenness => centrality::betweenness(net),
        Classical::Eigenvector => centrality::eigenvector(net)?,
        Classical::PageRank => centrality::pagerank(net, DEFAULT_DAMPING)?,
    })
}

fn dense(name: String, net: &Network, m: &SquareMatrix<f64>) -> MatrixTable {
    MatrixTable::new(name, net.ids(), |i, j| Some(m[(i, j)]))
}

/// Every requested index, in request order, plus the matrices when asked for.
pub fn compute(config: &RunConfig) -> anyhow::Result<Report> {
    let Prepared { net, thresholds } = prepare(config)?;
    let finder = GroupFinder::new(&net, &thresholds).with_cap(config.cap);
    let ids = net.ids();
    let mut report = Report::default();

    let wants_paths = config.methods.iter().any(|m| matches!(m, Method::Paths(_)));
    let paths = if wants_paths {
        let c = influence_matrix(&finder)?;
        let all = PathMatrices::compute(&c, &config.grades, config.limit)?;
        if config.emit_matrices {
            report.matrices.push(dense("c_paths".into(), &net, c.values()));
        }
        Some(all)
    } else {
        None
    };
    let sim = if config.methods.contains(&Method::Sim) {
        let c = share_matrix(&net, &thresholds);
        let result = simulate(&c, &plan(&config.sim)?)?;
        let cstar = result.cstar::<f64>();
        if config.emit_matrices {
            report.matrices.push(dense("c_shares".into(), &net, c.values()));
            report.matrices.push(MatrixTable::new("cstar_sim", ids, |i, j| cstar[(i, j)]));
        }
        Some(cstar)
    } else {
        None
    };

    for &method in &config.methods {
        let scores = match method {
            Method::Kbi => kbi(&finder, KbiVariant::default())?,
            Method::Paths(m) => {
                let cstar = paths.as_ref().expect("path matrices computed").matrix(m);
                if config.emit_matrices {
                    report.matrices.push(dense(format!("cstar_{}", m.name()), &net, &cstar));
                }
                lric_paths_vector(&net, &cstar)
            }
            Method::Sim => lric_sim_vector(&net, sim.as_ref().expect("simulation computed")),
            Method::Classical(c) => classical(&net, c).with_context(|| format!("computing {method}"))?,
        };
        report.indices.push(ScoreTable::new(method.name(), ids, &scores));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeRow {
    pub stage: usize,
    pub node: String,
    /// Initial defaulters in some minimal subset that still brings `node` down.
    pub initiators: Vec<String>,
}

/// Stage 0 lists the initial set; later stages carry their pivotal initiators.
pub fn cascade_rows(config: &RunConfig, initial: &[String]) -> anyhow::Result<Vec<CascadeRow>> {
    let Prepared { net, thresholds } = prepare(config)?;
    let c = share_matrix(&net, &thresholds);
    let seeds: Vec<usize> = initial.iter().map(|id| net.require(id)).collect::<Result<_, _>>()?;
    let trace = cascade(&c, &seeds, config.sim.stages)?;
    let mut rows: Vec<CascadeRow> =
        trace.initial.iter().map(|&k| CascadeRow { stage: 0, node: net.id(k).to_string(), initiators: Vec::new() }).collect();
    for (s, stage) in trace.stages.iter().enumerate() {
        for &k in stage {
            let pivots = pivotal_initiators(&c, &trace.initial, k, config.sim.stages)?;
            rows.push(CascadeRow {
                stage: s + 1,
                node: net.id(k).to_string(),
                initiators: pivots.iter().map(|&p| net.id(p).to_string()).collect(),
            });
        }
    }
    Ok(rows)
}

pub fn cascade_csv(rows: &[CascadeRow]) -> String {
    let mut out = String::from("stage,node,initiators\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.stage, r.node, r.initiators.join(" ")));
    }
    out
}

/// Netted edge list as `from,to,weight`.
pub fn netted_edges(edges: &Path, attributes: Option<&Path>) -> anyhow::Result<String> {
    let net = load_network(edges, attributes)?.net_mutual_exposures();
    let mut out = String::from("from,to,weight\n");
    for (i, j, w) in net.edges() {
        out.push_str(&format!("{},{},{}\n", net.id(i), net.id(j), w));
    }
    Ok(out)
}

/// Pairwise rank correlations of the given report files, labelled by file stem.
pub fn compare(files: &[impl AsRef<Path>], coefficient: Coefficient) -> anyhow::Result<MatrixTable> {
    let rankings = files.iter().map(|f| read_ranking(f.as_ref())).collect::<Result<Vec<_>, _>>()?;
    let m = comparison_matrix(&rankings, coefficient)?;
    let mut labels: Vec<String> = files
        .iter()
        .map(|f| f.as_ref().file_stem().map_or_else(|| f.as_ref().display().to_string(), |s| s.to_string_lossy().into_owned()))
        .collect();
    let mut seen = std::collections::HashSet::new();
    if !labels.iter().all(|l| seen.insert(l.clone())) {
        labels = files.iter().map(|f| f.as_ref().display().to_string()).collect();
    }
    Ok(MatrixTable::new(coefficient_name(coefficient), &labels, |i, j| Some(m[(i, j)])))
}

pub fn coefficient_name(c: Coefficient) -> &'static str {
    match c {
        Coefficient::KendallTau => "tau",
        Coefficient::Gamma => "gamma",
    }
}
