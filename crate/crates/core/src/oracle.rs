//! Brute-force validation engines: a dense grid of per-rho winners and a
//! seeded Monte Carlo sampler. Both evaluate the interpolated expected
//! utilities directly, independent of the segment analysis they are used
//! to check.

use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::preference::{NestedChain, RhoDistribution};
use crate::TOLERANCE;

/// The winning choice at every point of a regular rho grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WinnerMap {
    pub step: f64,
    /// Choice numbers, one per grid point `0, step, 2*step, ...`.
    pub winners: Vec<usize>,
}

impl WinnerMap {
    pub fn rho_at(&self, index: usize) -> f64 {
        (index as f64 * self.step).min(1.0)
    }
}

/// The choice with the highest interpolated expected utility at `rho`,
/// ties within tolerance going to the highest choice number.
pub fn winner_at(chain: &NestedChain, rho: f64) -> usize {
    let utilities: Vec<f64> = chain
        .choices()
        .iter()
        .map(|c| c.interval.lower() + rho * c.interval.length())
        .collect();
    let best = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    utilities
        .iter()
        .rposition(|&u| u >= best - TOLERANCE)
        .expect("chain is nonempty")
        + 1
}

/// Evaluates the winner at each point of a grid over `[0, 1]` with the
/// given spacing. The grid has `floor(1/step) + 1` points.
pub fn grid_winner_map(chain: &NestedChain, step: f64) -> Result<WinnerMap> {
    if !(step.is_finite() && step > 0.0 && step <= 0.1) {
        return Err(Error::InvalidGridStep { step, max: 0.1 });
    }
    let count = grid_points(step);
    let winners = (0..count)
        .map(|t| winner_at(chain, (t as f64 * step).min(1.0)))
        .collect();
    Ok(WinnerMap { step, winners })
}

pub(crate) fn grid_points(step: f64) -> usize {
    ((1.0 / step) * (1.0 + 1e-9)).floor() as usize + 1
}

/// Empirical winner frequencies from seeded sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub samples: u64,
    pub seed: u64,
    /// Per-choice empirical win fraction, indexed by choice number - 1.
    pub frequencies: Vec<f64>,
    /// 99% confidence half-width per choice (normal approximation).
    pub half_width: Vec<f64>,
}

/// Two-sided 99% normal quantile.
const Z_99: f64 = 2.5758293035489004;

/// Draws rho i.i.d. from `dist` by inverse-cdf transform of a ChaCha8
/// stream seeded with `seed`, and records the winning choice per draw.
/// The same inputs and seed always produce the identical report.
pub fn monte_carlo_pref(
    chain: &NestedChain,
    dist: &RhoDistribution,
    samples: u64,
    seed: u64,
) -> Result<McReport> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut wins = vec![0u64; chain.len()];
    for _ in 0..samples {
        let u = unit_f64(rng.next_u64());
        let rho = quantile(dist, u);
        wins[winner_at(chain, rho) - 1] += 1;
    }
    let frequencies: Vec<f64> = wins.iter().map(|&w| w as f64 / samples as f64).collect();
    let half_width = frequencies
        .iter()
        .map(|&p| Z_99 * (p * (1.0 - p) / samples as f64).sqrt())
        .collect();
    Ok(McReport {
        samples,
        seed,
        frequencies,
        half_width,
    })
}

/// Maps a raw 64-bit draw to `[0, 1)` using the top 53 bits.
fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn quantile(dist: &RhoDistribution, u: f64) -> f64 {
    match dist {
        RhoDistribution::Uniform => u,
        RhoDistribution::Bounded { lower, upper } => lower + u * (upper - lower),
        RhoDistribution::PiecewiseCdf(cdf) => cdf.quantile(u),
    }
}
