//! Deterministic Monte Carlo simulation of the random throw.
//!
//! Reproducibility contract: a report is a pure function of
//! `(needle, lattice, n_throws, seed)`. Every throw owns a dedicated RNG
//! stream derived from the master seed and the throw's global index, so
//! chunking (and therefore thread scheduling) only decides who computes
//! which range of indices — tallies merge by plain integer addition and come
//! out bit-identical for any chunk count, including 1.
//!
//! The generator is SplitMix64: `state += 0x9E3779B97F4A7C15` per draw, the
//! output is the Stafford mix-13 scramble of the new state. Stream seeding
//! for throw `i` is `mix13(seed XOR mix13(i + 1))`. Uniform doubles take the
//! top 53 bits over 2^53, so `[0, 1)` draws are identical on every platform.
//! Per throw the draw order is `y`, `alpha`, `beta` (two draws only in
//! fixed-angle mode, where `beta = alpha + phi`).

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Range};

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::geometry::{count_intersections, HitDistribution, Lattice, PivotNeedle, ThrowSample};

/// Cap on throws per run; keeps every count comfortably inside 64 bits.
pub const MAX_THROWS: u64 = 1 << 40;

#[derive(Debug, Error, PartialEq)]
pub enum SimulationError {
    #[error("n_throws must be at least 1")]
    ZeroThrows,
    #[error("n_throws = {0} exceeds the cap of 2^40 per run")]
    TooManyThrows(u64),
    #[error("n_chunks must be at least 1")]
    ZeroChunks,
    #[error("needle length a + b = {total} exceeds lattice spacing d = {spacing}; set allow_long_needle to simulate anyway")]
    NeedleExceedsSpacing { total: f64, spacing: f64 },
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stafford variant 13 of the 64-bit finalizer.
fn mix13(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64. Ten lines, seedable, and bit-for-bit portable, which is all
/// the determinism contract asks of a generator at this sample scale.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix13(self.state)
    }

    /// Uniform in `[0, 1)`: top 53 bits over 2^53.
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }
}

/// The dedicated stream for global throw index `index` under `seed`.
pub fn throw_stream(seed: u64, index: u64) -> SplitMix64 {
    SplitMix64::new(mix13(seed ^ mix13(index.wrapping_add(1))))
}

/// Draws one throw: `y ~ U[0, d)`, then `alpha, beta ~ U[0, 2pi)`,
/// mutually independent.
pub fn sample_throw(rng: &mut SplitMix64, lattice: &Lattice) -> ThrowSample {
    let y = lattice.spacing() * rng.next_f64();
    let alpha = TAU * rng.next_f64();
    let beta = TAU * rng.next_f64();
    ThrowSample::new(y, alpha, beta, lattice)
}

/// Fixed-opening-angle variant: draws `y` and `alpha` only and pins
/// `beta = alpha + phi (mod 2pi)`.
pub fn sample_throw_fixed_angle(rng: &mut SplitMix64, lattice: &Lattice, phi: f64) -> ThrowSample {
    let y = lattice.spacing() * rng.next_f64();
    let alpha = TAU * rng.next_f64();
    ThrowSample::new(y, alpha, alpha + phi, lattice)
}

/// Parameters of one simulation run.
#[derive(Debug, Clone, Copy)]
pub struct SimulationConfig {
    pub needle: PivotNeedle,
    pub lattice: Lattice,
    pub n_throws: u64,
    pub seed: u64,
    /// Number of work chunks. Affects scheduling only, never the tallies.
    pub n_chunks: u64,
    /// Proceed when `a + b > d`; throws with three or more crossings then
    /// land in `c_other`.
    pub allow_long_needle: bool,
}

impl SimulationConfig {
    pub fn new(needle: PivotNeedle, lattice: Lattice, n_throws: u64, seed: u64) -> Self {
        Self {
            needle,
            lattice,
            n_throws,
            seed,
            n_chunks: 1,
            allow_long_needle: false,
        }
    }

    fn validate(&self) -> Result<(), SimulationError> {
        if self.n_throws == 0 {
            return Err(SimulationError::ZeroThrows);
        }
        if self.n_throws > MAX_THROWS {
            return Err(SimulationError::TooManyThrows(self.n_throws));
        }
        if self.n_chunks == 0 {
            return Err(SimulationError::ZeroChunks);
        }
        let total = self.needle.total_length();
        let spacing = self.lattice.spacing();
        if total > spacing && !self.allow_long_needle {
            return Err(SimulationError::NeedleExceedsSpacing { total, spacing });
        }
        Ok(())
    }
}

/// Integer outcome tallies for a batch of throws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TallyCounts {
    pub c0: u64,
    pub c1: u64,
    pub c2: u64,
    /// Throws with three or more crossings; stays 0 whenever `a + b <= d`.
    pub c_other: u64,
    /// Total crossing points over all throws.
    pub sum_n: u64,
}

impl TallyCounts {
    pub fn record(&mut self, crossings: u32) {
        match crossings {
            0 => self.c0 += 1,
            1 => self.c1 += 1,
            2 => self.c2 += 1,
            _ => self.c_other += 1,
        }
        self.sum_n = self
            .sum_n
            .checked_add(u64::from(crossings))
            .expect("sum_n overflow: beyond any supported n_throws");
    }

    pub fn n_total(&self) -> u64 {
        self.c0 + self.c1 + self.c2 + self.c_other
    }
}

impl Add for TallyCounts {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            c0: self.c0 + rhs.c0,
            c1: self.c1 + rhs.c1,
            c2: self.c2 + rhs.c2,
            c_other: self.c_other + rhs.c_other,
            sum_n: self.sum_n + rhs.sum_n,
        }
    }
}

impl AddAssign for TallyCounts {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

/// Monte Carlo estimates with enough context to audit them.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub counts: TallyCounts,
    /// `c_i / n_throws`, tagged [`crate::DistributionSource::MonteCarlo`].
    pub p_hat: HitDistribution,
    /// Binomial standard errors `sqrt(p_hat_i (1 - p_hat_i) / n)`.
    pub std_errors: [f64; 3],
    /// `sum_n / n_throws`, the mean crossing count per throw.
    pub mean_n_hat: f64,
    pub seed: u64,
    pub n_throws: u64,
}

/// Index range handled by `chunk`, using floor/ceil shares: the first
/// `n_throws % n_chunks` chunks take one extra throw.
fn chunk_range(n_throws: u64, n_chunks: u64, chunk: u64) -> Range<u64> {
    let base = n_throws / n_chunks;
    let rem = n_throws % n_chunks;
    let start = chunk * base + chunk.min(rem);
    let len = base + u64::from(chunk < rem);
    start..start + len
}

fn tally_indices(
    needle: &PivotNeedle,
    lattice: &Lattice,
    seed: u64,
    indices: Range<u64>,
    phi: Option<f64>,
) -> TallyCounts {
    let mut counts = TallyCounts::default();
    for index in indices {
        let mut rng = throw_stream(seed, index);
        let throw = match phi {
            Some(phi) => sample_throw_fixed_angle(&mut rng, lattice, phi),
            None => sample_throw(&mut rng, lattice),
        };
        counts.record(count_intersections(needle, lattice, &throw));
    }
    counts
}

/// Tally an explicit stream of throws. Exists so tests can force specific
/// throw geometry through the identical counting path.
#[cfg(test)]
fn tally_throws<I>(needle: &PivotNeedle, lattice: &Lattice, throws: I) -> TallyCounts
where
    I: IntoIterator<Item = ThrowSample>,
{
    let mut counts = TallyCounts::default();
    for throw in throws {
        counts.record(count_intersections(needle, lattice, &throw));
    }
    counts
}

fn build_report(config: &SimulationConfig, counts: TallyCounts) -> EstimateReport {
    debug_assert_eq!(counts.n_total(), config.n_throws);
    let n = config.n_throws;
    let p_hat = HitDistribution::from_counts(counts.c0, counts.c1, counts.c2, n);
    let nf = n as f64;
    let std_errors = [
        (p_hat.p0() * (1.0 - p_hat.p0()) / nf).sqrt(),
        (p_hat.p1() * (1.0 - p_hat.p1()) / nf).sqrt(),
        (p_hat.p2() * (1.0 - p_hat.p2()) / nf).sqrt(),
    ];
    EstimateReport {
        counts,
        p_hat,
        std_errors,
        mean_n_hat: counts.sum_n as f64 / nf,
        seed: config.seed,
        n_throws: n,
    }
}

fn run_seq_impl(config: &SimulationConfig, phi: Option<f64>) -> Result<EstimateReport, SimulationError> {
    config.validate()?;
    let counts = (0..config.n_chunks)
        .map(|chunk| {
            tally_indices(
                &config.needle,
                &config.lattice,
                config.seed,
                chunk_range(config.n_throws, config.n_chunks, chunk),
                phi,
            )
        })
        .fold(TallyCounts::default(), Add::add);
    Ok(build_report(config, counts))
}

#[cfg(feature = "parallel")]
fn run_par_impl(config: &SimulationConfig, phi: Option<f64>) -> Result<EstimateReport, SimulationError> {
    config.validate()?;
    let counts = (0..config.n_chunks)
        .into_par_iter()
        .map(|chunk| {
            tally_indices(
                &config.needle,
                &config.lattice,
                config.seed,
                chunk_range(config.n_throws, config.n_chunks, chunk),
                phi,
            )
        })
        .reduce(TallyCounts::default, Add::add);
    Ok(build_report(config, counts))
}

/// Runs the simulation, parallel across chunks when the `parallel` feature
/// is enabled (the default), sequential otherwise. Either way the report is
/// the same pure function of the config.
pub fn run(config: &SimulationConfig) -> Result<EstimateReport, SimulationError> {
    #[cfg(feature = "parallel")]
    {
        run_par_impl(config, None)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_seq_impl(config, None)
    }
}

/// [`run`] with the opening angle pinned to `phi`.
pub fn run_fixed_angle(config: &SimulationConfig, phi: f64) -> Result<EstimateReport, SimulationError> {
    #[cfg(feature = "parallel")]
    {
        run_par_impl(config, Some(phi))
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_seq_impl(config, Some(phi))
    }
}

/// Single-threaded execution of the identical per-throw streams.
pub fn run_sequential(config: &SimulationConfig) -> Result<EstimateReport, SimulationError> {
    run_seq_impl(config, None)
}

/// [`run_sequential`] with the opening angle pinned to `phi`.
pub fn run_fixed_angle_sequential(
    config: &SimulationConfig,
    phi: f64,
) -> Result<EstimateReport, SimulationError> {
    run_seq_impl(config, Some(phi))
}

/// Explicitly parallel execution, for side-by-side comparison with
/// [`run_sequential`].
#[cfg(feature = "parallel")]
pub fn run_parallel(config: &SimulationConfig) -> Result<EstimateReport, SimulationError> {
    run_par_impl(config, None)
}

/// [`run_parallel`] with the opening angle pinned to `phi`.
#[cfg(feature = "parallel")]
pub fn run_fixed_angle_parallel(
    config: &SimulationConfig,
    phi: f64,
) -> Result<EstimateReport, SimulationError> {
    run_par_impl(config, Some(phi))
}
