use std::time::Instant;

use rayon::prelude::*;

use super::components::components;
use crate::error::{Error, Result};
use crate::geometry::BoxSpec;
use crate::matching::{stable_multi_match, ForbiddenPairs};
use crate::process::{derive_seed, sample_marked, DegreeDistribution, Stream};

/// One degree law of a sweep with its label in the `param` column.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepLaw {
    pub param: String,
    pub mu: DegreeDistribution,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub laws: Vec<SweepLaw>,
    pub dim: usize,
    pub sides: Vec<f64>,
    /// Replicas per (law, side) cell.
    pub replicas: u64,
    /// Replica seeds are derived from this seed.
    pub seed: u64,
    pub intensity: f64,
    pub periodic: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SweepRow {
    pub param: String,
    pub mu: String,
    pub dim: usize,
    pub side: f64,
    pub seed: u64,
    pub n_points: usize,
    pub largest_fraction: f64,
    pub mean_comp_size: f64,
    pub leftover_fraction: f64,
    pub runtime_ms: f64,
}

/// Sample, match and measure every (law, side, replica) cell. Rows come out
/// in grid order whatever the scheduling.
pub fn percolation_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let mut cells = Vec::new();
    for (li, law) in config.laws.iter().enumerate() {
        for (si, &side) in config.sides.iter().enumerate() {
            for r in 0..config.replicas {
                cells.push((li, si, law, side, derive_seed(config.seed, Stream::Replicas, r)));
            }
        }
    }
    let run = || -> Result<Vec<SweepRow>> {
        cells
            .par_iter()
            .map(|&(_, _, law, side, seed)| run_cell(config, law, side, seed))
            .collect()
    };
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn run_cell(config: &SweepConfig, law: &SweepLaw, side: f64, seed: u64) -> Result<SweepRow> {
    let start = Instant::now();
    let bx = BoxSpec::new(config.dim, side, config.periodic)?;
    let m = sample_marked::<f64>(bx, config.intensity, &law.mu, seed)?;
    let result = stable_multi_match(&m, &ForbiddenPairs::new());
    let report = components(m.len(), &result.matching);
    Ok(SweepRow {
        param: law.param.clone(),
        mu: law.mu.to_string(),
        dim: config.dim,
        side,
        seed,
        n_points: m.len(),
        largest_fraction: report.largest_fraction,
        mean_comp_size: report.mean_point_component_size(),
        leftover_fraction: result.leftover_fraction(),
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
