//! Region-count sweeps aggregated per (scheme, region count).

use super::{run_experiment_with, ConfigError, ExperimentConfig};
use crate::exec::Execution;
use crate::forwarding::Scheme;
use crate::topology::{deploy_nodes, GeocastRegion};

/// Salt mixed into the seed when drawing extra region centers.
const REGION_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub region_count: usize,
    /// Rows where the scheme ran (arity mismatches excluded).
    pub runs: usize,
    pub delivered: usize,
    /// Means over `runs`; `None` when nothing ran.
    pub mean_total_hops: Option<f64>,
    pub mean_total_distance_m: Option<f64>,
    pub mean_total_energy_j: Option<f64>,
}

/// The first `count` region centers: the configured ones, then centers drawn
/// uniformly in the arena from a generator seeded off `config.seed`.
pub fn sweep_regions(config: &ExperimentConfig, count: usize) -> Vec<GeocastRegion> {
    let mut regions: Vec<GeocastRegion> = config.regions.iter().copied().take(count).collect();
    let missing = count - regions.len();
    if missing > 0 {
        let extra = deploy_nodes(missing, config.arena, config.seed ^ REGION_SALT)
            .expect("validated arena and positive count");
        regions.extend(extra.iter().map(|n| GeocastRegion { center: n.position }));
    }
    regions
}

/// Runs the configured experiment with 2..=`max_regions` regions.
pub fn sweep(
    config: &ExperimentConfig,
    max_regions: usize,
    exec: Execution,
) -> Result<Vec<SweepRow>, ConfigError> {
    if max_regions < 2 {
        return Err(ConfigError::Validation(
            "sweep needs at least 2 regions".into(),
        ));
    }
    let mut out = Vec::new();
    for count in 2..=max_regions {
        let mut cfg = config.clone();
        cfg.regions = sweep_regions(config, count);
        let rows = run_experiment_with(&cfg, exec)?;
        for &scheme in &config.schemes {
            let ran: Vec<_> = rows
                .iter()
                .filter(|r| r.scheme == scheme && r.relay_id.is_some())
                .collect();
            let mean = |f: &dyn Fn(&super::MetricsRow) -> f64| {
                (!ran.is_empty()).then(|| ran.iter().map(|r| f(r)).sum::<f64>() / ran.len() as f64)
            };
            out.push(SweepRow {
                scheme,
                region_count: count,
                runs: ran.len(),
                delivered: ran.iter().filter(|r| r.status.is_delivered()).count(),
                mean_total_hops: mean(&|r| r.total_hops as f64),
                mean_total_distance_m: mean(&|r| r.total_distance_m),
                mean_total_energy_j: mean(&|r| r.total_energy_j),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_shapes() {
        let mut cfg = ExperimentConfig::new(vec![GeocastRegion::new(1500.0, 900.0)]);
        cfg.seeds = Some(2);
        cfg.node_count = 80;
        let rows = sweep(&cfg, 4, Execution::Parallel).unwrap();
        assert_eq!(rows.len(), 3 * 3);
        let gd: Vec<_> = rows
            .iter()
            .filter(|r| r.scheme == Scheme::GeometryDriven)
            .collect();
        assert_eq!(gd[0].runs, 2);
        assert_eq!(gd[1].runs, 0);
        assert_eq!(gd[1].mean_total_hops, None);
        assert!(sweep(&cfg, 1, Execution::Sequential).is_err());
    }

    #[test]
    fn sweep_regions_keep_configured_prefix() {
        let cfg = ExperimentConfig::new(vec![GeocastRegion::new(1500.0, 900.0)]);
        let r3 = sweep_regions(&cfg, 3);
        let r5 = sweep_regions(&cfg, 5);
        assert_eq!(r3[0].center, cfg.regions[0].center);
        assert_eq!(&r5[..3], &r3[..]);
        assert!(r5.iter().all(|r| cfg.arena.contains(r.center)));
    }
}
