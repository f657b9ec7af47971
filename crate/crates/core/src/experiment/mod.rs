//! Seeded scheme comparisons.
//!
//! Every (seed, scheme) cell is independent; all schemes for one seed share
//! the same deployment and source node. Cells run through [`Execution`] and
//! rows always come back seed-major, in configured scheme order.

mod config;
mod report;
mod svg;
mod sweep;

use std::fmt;
use std::str::FromStr;

pub use config::{parse_config, parse_point, parse_regions, ConfigError, ExperimentConfig, KEYS};
pub use report::{
    emit_csv, format_sig6, read_csv, write_sweep_csv, write_trace_csv, ReportError, METRICS_HEADER,
};
pub use svg::{render_route_svg, render_svg};
pub use sweep::{sweep, sweep_regions, SweepRow};

use crate::exec::Execution;
use crate::forwarding::{
    fermat_multicast_route, ForwardingError, MulticastOptions, MulticastTrace, RouteStatus, Scheme,
};
use crate::topology::{Network, NodeId};

/// Outcome label of a metrics row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowStatus {
    Route(RouteStatus),
    SchemeArityMismatch,
    Failed,
}

impl RowStatus {
    pub fn is_delivered(self) -> bool {
        self == RowStatus::Route(RouteStatus::Delivered)
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Route(s) => s.fmt(f),
            RowStatus::SchemeArityMismatch => f.write_str("scheme_arity_mismatch"),
            RowStatus::Failed => f.write_str("failed"),
        }
    }
}

impl FromStr for RowStatus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "delivered" => RowStatus::Route(RouteStatus::Delivered),
            "loop_detected" => RowStatus::Route(RouteStatus::LoopDetected),
            "void" => RowStatus::Route(RouteStatus::Void),
            "hop_limit_exceeded" => RowStatus::Route(RouteStatus::HopLimitExceeded),
            "scheme_arity_mismatch" => RowStatus::SchemeArityMismatch,
            "failed" => RowStatus::Failed,
            _ => return Err(format!("unknown status `{s}`")),
        })
    }
}

/// One (seed, scheme) result. Fermat and relay fields are empty when the
/// scheme could not run.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scheme: Scheme,
    pub seed: u64,
    pub node_count: usize,
    pub region_count: usize,
    pub fermat_x: Option<f64>,
    pub fermat_y: Option<f64>,
    pub relay_id: Option<NodeId>,
    pub total_hops: usize,
    pub total_distance_m: f64,
    pub total_energy_j: f64,
    pub status: RowStatus,
}

#[derive(Debug)]
pub struct Cell {
    pub scheme: Scheme,
    pub outcome: Result<MulticastTrace, ForwardingError>,
}

/// One seed's deployment and the results of every scheme on it.
#[derive(Debug)]
pub struct Scenario {
    pub seed: u64,
    pub network: Network,
    pub source_id: NodeId,
    pub cells: Vec<Cell>,
}

impl Scenario {
    pub fn traces(&self) -> impl Iterator<Item = &MulticastTrace> {
        self.cells.iter().filter_map(|c| c.outcome.as_ref().ok())
    }

    pub fn rows(&self, region_count: usize) -> impl Iterator<Item = MetricsRow> + '_ {
        self.cells.iter().map(move |cell| {
            let mut row = MetricsRow {
                scheme: cell.scheme,
                seed: self.seed,
                node_count: self.network.len(),
                region_count,
                fermat_x: None,
                fermat_y: None,
                relay_id: None,
                total_hops: 0,
                total_distance_m: 0.0,
                total_energy_j: 0.0,
                status: RowStatus::Failed,
            };
            match &cell.outcome {
                Ok(t) => {
                    row.fermat_x = Some(t.fermat.point.x);
                    row.fermat_y = Some(t.fermat.point.y);
                    row.relay_id = Some(t.relay_id);
                    row.total_hops = t.total_hops;
                    row.total_distance_m = t.total_distance;
                    row.total_energy_j = t.total_energy;
                    row.status = RowStatus::Route(t.status());
                }
                Err(ForwardingError::SchemeArityMismatch { .. }) => {
                    row.status = RowStatus::SchemeArityMismatch;
                }
                Err(_) => {}
            }
            row
        })
    }
}

/// Deploys every seed and runs every scheme on it.
pub fn run_scenarios(
    config: &ExperimentConfig,
    exec: Execution,
) -> Result<Vec<Scenario>, ConfigError> {
    config.validate()?;
    let seeds = config.seed_list();
    let networks = exec.map_indexed(seeds.len(), |k| {
        Network::random(config.node_count, config.arena, config.radius, seeds[k])
            .expect("validated config yields a valid deployment")
    });
    let sources: Vec<NodeId> = networks
        .iter()
        .map(|n| {
            n.nearest_node(config.source)
                .expect("network is non-empty")
                .id
        })
        .collect();

    // one cell per (seed, scheme); the grid scan inside a cell only fans out
    // when there is a single cell row to parallelize over
    let inner = if seeds.len() > 1 {
        Execution::Sequential
    } else {
        exec
    };
    let schemes = &config.schemes;
    let mut outcomes = exec
        .map_indexed(seeds.len() * schemes.len(), |i| {
            let (k, s) = (i / schemes.len(), i % schemes.len());
            let network = &networks[k];
            let options = MulticastOptions {
                hop_limit: config.hop_limit(),
                grid_step: config.grid_step,
                radio: config.radio,
                rule: config.rule,
                exec: inner,
            };
            Cell {
                scheme: schemes[s],
                outcome: fermat_multicast_route(
                    network,
                    sources[k],
                    &config.regions,
                    schemes[s],
                    &options,
                ),
            }
        })
        .into_iter();

    Ok(seeds
        .iter()
        .zip(networks)
        .zip(sources)
        .map(|((&seed, network), source_id)| Scenario {
            seed,
            network,
            source_id,
            cells: outcomes.by_ref().take(schemes.len()).collect(),
        })
        .collect())
}

/// Metrics rows for every (seed, scheme) cell, using the default [`Execution`].
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<MetricsRow>, ConfigError> {
    run_experiment_with(config, Execution::default())
}

pub fn run_experiment_with(
    config: &ExperimentConfig,
    exec: Execution,
) -> Result<Vec<MetricsRow>, ConfigError> {
    let scenarios = run_scenarios(config, exec)?;
    let regions = config.regions.len();
    Ok(scenarios.iter().flat_map(|s| s.rows(regions)).collect())
}
