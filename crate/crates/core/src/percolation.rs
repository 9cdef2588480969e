//! Random node percolation and the removal-fraction sweep.
//!
//! Percolating a graph removes `t` distinct vertices and every edge incident
//! to them. Randomness comes from ChaCha8 ([`rand_chacha::ChaCha8Rng`])
//! seeded with [`rand::SeedableRng::seed_from_u64`], which is stable across
//! platforms and releases. Draws are made over vertex ranks in ascending id
//! order, so the outcome never depends on how the input was ordered.
//!
//! In a sweep, trial `j` of fraction `i` uses the seed
//! [`derive_seed`]`(base_seed, i, j)`:
//!
//! ```text
//! s = splitmix64(base_seed)
//! s = splitmix64(s ^ i)
//! s = splitmix64(s ^ j)
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fuzzy::FuzzyVertexSet;
use crate::graph::{UndirectedGraph, VertexId};
use crate::metrics::average_path_length;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PercolationError {
    #[error("cannot remove {requested} vertices from a graph with {available}")]
    TooManyRemovals { requested: usize, available: usize },
    #[error("membership-weighted percolation needs σ for vertex {0}")]
    MissingMembership(VertexId),
    #[error("fraction {0} is outside [0, 1]")]
    FractionOutOfRange(f64),
    #[error("fractions must be strictly increasing ({previous} then {next})")]
    FractionsNotIncreasing { previous: f64, next: f64 },
    #[error("at least one fraction is required")]
    NoFractions,
    #[error("at least one trial is required")]
    NoTrials,
}

/// How victims are chosen.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum PercolationMode {
    /// Every `t`-subset equally likely.
    #[default]
    Uniform,
    /// Extension beyond uniform removal: sequential draws without
    /// replacement, each survivor weighted by `1 - σ(v)`. When every
    /// survivor has `σ = 1` the draw falls back to uniform.
    MembershipWeighted(FuzzyVertexSet),
}

impl PercolationMode {
    pub fn label(&self) -> &'static str {
        match self {
            PercolationMode::Uniform => "uniform",
            PercolationMode::MembershipWeighted(_) => "membership_weighted",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PercolationSpec {
    pub removals: usize,
    pub seed: u64,
    pub mode: PercolationMode,
}

impl PercolationSpec {
    pub fn uniform(removals: usize, seed: u64) -> Self {
        PercolationSpec {
            removals,
            seed,
            mode: PercolationMode::Uniform,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PercolationOutcome {
    /// Surviving vertices and the edges between them.
    pub graph: UndirectedGraph,
    /// Removed vertices in draw order.
    pub removed: Vec<VertexId>,
    pub seed: u64,
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial_index` at grid point `fraction_index`.
pub fn derive_seed(base_seed: u64, fraction_index: usize, trial_index: usize) -> u64 {
    let s = splitmix64(base_seed);
    let s = splitmix64(s ^ fraction_index as u64);
    splitmix64(s ^ trial_index as u64)
}

/// `round(fraction · n)`, halves away from zero.
pub fn removal_count(fraction: f64, n: usize) -> usize {
    (fraction * n as f64).round() as usize
}

fn draw_uniform(n: usize, t: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut ranks: Vec<usize> = (0..n).collect();
    for i in 0..t {
        let j = rng.gen_range(i as u64..n as u64) as usize;
        ranks.swap(i, j);
    }
    ranks.truncate(t);
    ranks
}

fn draw_weighted(weights: &[f64], t: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut survivors: Vec<usize> = (0..weights.len()).collect();
    let mut removed = Vec::with_capacity(t);
    for _ in 0..t {
        let total: f64 = survivors.iter().map(|&i| weights[i]).sum();
        let pos = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = None;
            for (pos, &i) in survivors.iter().enumerate() {
                if weights[i] > 0.0 {
                    acc += weights[i];
                    chosen = Some(pos);
                    if target < acc {
                        break;
                    }
                }
            }
            chosen.expect("positive total implies a positive weight")
        } else {
            rng.gen_range(0..survivors.len() as u64) as usize
        };
        removed.push(survivors.remove(pos));
    }
    removed
}

/// Removes `spec.removals` distinct vertices and their incident edges.
pub fn percolate(
    g: &UndirectedGraph,
    spec: &PercolationSpec,
) -> Result<PercolationOutcome, PercolationError> {
    let n = g.vertex_count();
    if spec.removals > n {
        return Err(PercolationError::TooManyRemovals {
            requested: spec.removals,
            available: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let drawn = match &spec.mode {
        PercolationMode::Uniform => draw_uniform(n, spec.removals, &mut rng),
        PercolationMode::MembershipWeighted(sigma) => {
            let weights = g
                .ids()
                .iter()
                .map(|id| {
                    sigma
                        .get(id)
                        .map(|d| 1.0 - d.value())
                        .ok_or_else(|| PercolationError::MissingMembership(id.clone()))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            draw_weighted(&weights, spec.removals, &mut rng)
        }
    };
    let mut mask = vec![false; n];
    for &i in &drawn {
        mask[i] = true;
    }
    Ok(PercolationOutcome {
        graph: g.without_vertices(&mask),
        removed: drawn.into_iter().map(|i| g.id(i).clone()).collect(),
        seed: spec.seed,
    })
}

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub fraction: f64,
    pub removals: usize,
    pub mean_avg_degree: f64,
    pub mean_avg_path_length: f64,
    /// Standard error of the trial mean.
    pub stderr_avg_degree: f64,
    pub stderr_avg_path_length: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSeries {
    pub points: Vec<SweepPoint>,
}

impl SweepSeries {
    /// `fraction,mean_avg_degree,mean_avg_path_length,trials` with six
    /// decimals and LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fraction,mean_avg_degree,mean_avg_path_length,trials\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:.6},{:.6},{:.6},{}\n",
                p.fraction, p.mean_avg_degree, p.mean_avg_path_length, p.trials
            ));
        }
        out
    }
}

/// Description of how a sweep was produced, for the JSON sidecar.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub base_seed: u64,
    pub trials: usize,
    pub mode: &'static str,
    pub mode_note: &'static str,
    pub generator: &'static str,
    pub seed_derivation: &'static str,
    pub rounding: &'static str,
    pub path_length_convention: &'static str,
    pub degenerate_outcomes: &'static str,
}

impl SweepMetadata {
    pub fn new(base_seed: u64, trials: usize, mode: &PercolationMode) -> Self {
        SweepMetadata {
            base_seed,
            trials,
            mode: mode.label(),
            mode_note: match mode {
                PercolationMode::Uniform => "uniform random node removal",
                PercolationMode::MembershipWeighted(_) => {
                    "extension: removal probability proportional to 1 - sigma(v)"
                }
            },
            generator: "ChaCha8Rng::seed_from_u64 (rand_chacha 0.3)",
            seed_derivation: "s = splitmix64(base); s = splitmix64(s ^ fraction_index); s = splitmix64(s ^ trial_index)",
            rounding: "t = round(fraction * |V|), halves away from zero",
            path_length_convention: "mean over reachable unordered pairs; 0 when no pair is reachable",
            degenerate_outcomes: "outcomes without vertices or reachable pairs contribute 0 and are counted",
        }
    }
}

fn validate_fractions(fractions: &[f64]) -> Result<(), PercolationError> {
    if fractions.is_empty() {
        return Err(PercolationError::NoFractions);
    }
    for &f in fractions {
        if !(0.0..=1.0).contains(&f) {
            return Err(PercolationError::FractionOutOfRange(f));
        }
    }
    for w in fractions.windows(2) {
        if w[1] <= w[0] {
            return Err(PercolationError::FractionsNotIncreasing {
                previous: w[0],
                next: w[1],
            });
        }
    }
    Ok(())
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `trials` percolations at every fraction and averages the average
/// degree and average path length of the outcomes.
pub fn sweep(
    g: &UndirectedGraph,
    fractions: &[f64],
    trials: usize,
    base_seed: u64,
    mode: &PercolationMode,
) -> Result<SweepSeries, PercolationError> {
    validate_fractions(fractions)?;
    if trials == 0 {
        return Err(PercolationError::NoTrials);
    }
    let n = g.vertex_count();
    let jobs: Vec<(usize, usize)> = (0..fractions.len())
        .flat_map(|fi| (0..trials).map(move |ti| (fi, ti)))
        .collect();
    let measured: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(fi, ti)| {
            let spec = PercolationSpec {
                removals: removal_count(fractions[fi], n),
                seed: derive_seed(base_seed, fi, ti),
                mode: mode.clone(),
            };
            let outcome = percolate(g, &spec)?;
            Ok((
                outcome.graph.average_degree(),
                average_path_length(&outcome.graph).mean,
            ))
        })
        .collect::<Result<_, PercolationError>>()?;
    let points = fractions
        .iter()
        .zip(measured.chunks(trials))
        .map(|(&fraction, chunk)| {
            let degrees: Vec<f64> = chunk.iter().map(|m| m.0).collect();
            let paths: Vec<f64> = chunk.iter().map(|m| m.1).collect();
            let (mean_avg_degree, stderr_avg_degree) = mean_and_stderr(&degrees);
            let (mean_avg_path_length, stderr_avg_path_length) = mean_and_stderr(&paths);
            SweepPoint {
                fraction,
                removals: removal_count(fraction, n),
                mean_avg_degree,
                mean_avg_path_length,
                stderr_avg_degree,
                stderr_avg_path_length,
                trials,
            }
        })
        .collect();
    Ok(SweepSeries { points })
}

/// The default grid `0.0, 0.1, ..., 0.9`.
pub fn default_fractions() -> Vec<f64> {
    (0..10).map(|i| i as f64 / 10.0).collect()
}
