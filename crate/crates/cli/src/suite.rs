//! Suite mode: run an algorithms × {P, Pᵗ} × m cross product from a TOML
//! config and emit one long-format CSV row per cell.

use std::path::Path;

use serde::Deserialize;

use diterate::{run_solver, Algorithm, CostModel, Graph, PageRankOperator, RunFlags};

use crate::output::{CsvSink, Outcome, RunRow, RUN_HEADER};
use crate::{Failure, TargetExpr};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteConfig {
    /// Edge-list graph file, relative paths resolved against the config.
    graph: String,
    /// Optional node-count truncation.
    n: Option<usize>,
    d: f64,
    /// Error target, absolute or "1/N" style.
    target: String,
    /// Algorithm identifiers; must be non-empty.
    algos: Vec<String>,
    /// Orientations to run: false = P, true = Pᵗ.
    #[serde(default = "default_transpose")]
    transpose: Vec<bool>,
    /// Synthetic per-entry cost values.
    #[serde(default = "default_m")]
    m: Vec<u64>,
    #[serde(default = "default_diag_elim")]
    diag_elim: bool,
}

fn default_transpose() -> Vec<bool> {
    vec![false]
}

fn default_m() -> Vec<u64> {
    vec![0]
}

fn default_diag_elim() -> bool {
    true
}

pub fn run_suite(config_path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", config_path.display())))?;
    let config: SuiteConfig = toml::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", config_path.display())))?;
    if config.algos.is_empty() {
        return Err(Failure::Usage("suite config lists no algorithms".into()));
    }
    if config.transpose.is_empty() || config.m.is_empty() {
        return Err(Failure::Usage("transpose and m lists must be non-empty".into()));
    }
    let algorithms: Vec<Algorithm> = config
        .algos
        .iter()
        .map(|id| id.parse().map_err(Failure::Usage))
        .collect::<Result<_, _>>()?;
    let target_expr: TargetExpr = config.target.parse().map_err(Failure::Usage)?;

    let graph_path = {
        let p = Path::new(&config.graph);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            config_path.parent().unwrap_or(Path::new(".")).join(p)
        }
    };
    let base = Graph::load_edge_list(&graph_path, config.n)?;
    let target = target_expr.resolve(base.node_count());
    let flags = RunFlags { diag_elim: config.diag_elim };

    let mut sink = CsvSink::create(out)?;
    sink.write_line(RUN_HEADER)?;

    let mut all_converged = true;
    for &transpose in &config.transpose {
        let graph = if transpose { base.transpose() } else { base.clone() };
        let op = PageRankOperator::new(&graph, config.d)?;
        for &m in &config.m {
            for &algorithm in &algorithms {
                let mut cost = CostModel::new(m);
                let mut row = RunRow {
                    algo: algorithm.id(),
                    n: graph.node_count(),
                    l: graph.edge_count(),
                    d: config.d,
                    target,
                    m,
                    transpose,
                    diag_elim: flags.diag_elim,
                    outcome: None,
                };
                match run_solver(algorithm, &op, target, flags, &mut cost) {
                    Ok((result, _)) => {
                        row.outcome = Some(Outcome::from_result(&result));
                        sink.write_line(&row.to_csv())?;
                    }
                    Err(diterate::Error::NonConvergence { .. }) => {
                        all_converged = false;
                        sink.write_line(&row.to_csv())?;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    if all_converged {
        Ok(())
    } else {
        Err(Failure::NoConvergence("one or more suite rows did not converge".into()))
    }
}
