//! Monte Carlo reference for the analytic error rates.
//!
//! Each trial draws an equiprobable block, an i.i.d. Rayleigh channel and
//! unit-power complex AWGN, forms `y = sqrt(rho/K) H x + w`, and detects by
//! exhaustive maximum-likelihood search over every legitimate block.
//!
//! Randomness comes from ChaCha8 seeded with the 64-bit user seed. Trials are
//! grouped in fixed batches of [`BATCH_TRIALS`] and batch `b` runs on ChaCha
//! stream `b`, so any number of worker threads reproduces the serial result
//! bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::SnrPoint;
use crate::codebook::{Block, Codebook};
use crate::error::{Error, Result};

/// Trials per independent random stream.
pub const BATCH_TRIALS: u64 = 4096;

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.96;

/// Per-subcarrier fading coefficients for one block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    coefficients: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        ChannelRealization { coefficients }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Power gains `|h(n)|^2`.
    pub fn gains(&self) -> Vec<f64> {
        self.coefficients.iter().map(|h| h.norm_sqr()).collect()
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, std_per_dim: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * std_per_dim, im * std_per_dim)
}

/// Draws `n` independent circularly-symmetric Gaussian coefficients with
/// `E|h|^2 = mu`.
pub fn sample_channel<R: Rng + ?Sized>(
    n: usize,
    mu: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::Contract(format!(
            "mean gain must be positive, got {mu}"
        )));
    }
    let sd = (mu / 2.0).sqrt();
    Ok(ChannelRealization {
        coefficients: (0..n).map(|_| complex_gaussian(rng, sd)).collect(),
    })
}

/// Receiver noise model. `Silent` exists to check detection logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Noise {
    Awgn,
    Silent,
}

/// Exhaustive ML detection: the ordinal minimising
/// `||y - amplitude H x||^2`, lowest ordinal on ties.
pub fn ml_detect(
    received: &[Complex64],
    channel: &ChannelRealization,
    codebook: &Codebook,
    amplitude: f64,
) -> usize {
    let scaled: Vec<Complex64> = channel
        .coefficients()
        .iter()
        .map(|h| h * amplitude)
        .collect();
    let mut best = 0;
    let mut best_metric = f64::INFINITY;
    for block in codebook.blocks() {
        let metric: f64 = received
            .iter()
            .zip(&scaled)
            .zip(block.dense())
            .map(|((y, h), x)| (y - h * x).norm_sqr())
            .sum();
        if metric < best_metric {
            best_metric = metric;
            best = block.ordinal();
        }
    }
    best
}

/// Transmits `tx` once over a fresh channel and returns the detected ordinal.
pub fn simulate_trial<R: Rng + ?Sized>(
    tx: &Block,
    codebook: &Codebook,
    snr: SnrPoint,
    rng: &mut R,
) -> usize {
    simulate_trial_with(tx, codebook, snr, rng, Noise::Awgn)
}

pub fn simulate_trial_with<R: Rng + ?Sized>(
    tx: &Block,
    codebook: &Codebook,
    snr: SnrPoint,
    rng: &mut R,
    noise: Noise,
) -> usize {
    let config = codebook.config();
    let channel = sample_channel(config.n_subcarriers(), config.mean_channel_gain(), rng)
        .expect("config guarantees a positive mean gain");
    transmit_over(tx, &channel, codebook, snr, rng, noise)
}

/// One transmission over a given channel realisation.
pub fn transmit_over<R: Rng + ?Sized>(
    tx: &Block,
    channel: &ChannelRealization,
    codebook: &Codebook,
    snr: SnrPoint,
    rng: &mut R,
    noise: Noise,
) -> usize {
    let amplitude = (snr.linear() / codebook.config().n_active() as f64).sqrt();
    let noise_sd = std::f64::consts::FRAC_1_SQRT_2;
    let received: Vec<Complex64> = channel
        .coefficients()
        .iter()
        .zip(tx.dense())
        .map(|(h, x)| {
            let w = match noise {
                Noise::Awgn => complex_gaussian(rng, noise_sd),
                Noise::Silent => Complex64::new(0.0, 0.0),
            };
            h * x * amplitude + w
        })
        .collect();
    ml_detect(&received, channel, codebook, amplitude)
}

/// Simulated block and bit error rates with 95% normal-approximation
/// half-widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub trials: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    pub bler_hat: f64,
    pub ber_hat: f64,
    pub bler_ci95: f64,
    pub ber_ci95: f64,
}

impl ErrorEstimate {
    pub fn from_counts(
        trials: u64,
        block_errors: u64,
        bit_errors: u64,
        bits_per_block: u32,
    ) -> Self {
        let n_bits = trials * u64::from(bits_per_block);
        let bler_hat = block_errors as f64 / trials as f64;
        let ber_hat = bit_errors as f64 / n_bits as f64;
        ErrorEstimate {
            trials,
            block_errors,
            bit_errors,
            bler_hat,
            ber_hat,
            bler_ci95: half_width(bler_hat, trials),
            ber_ci95: half_width(ber_hat, n_bits),
        }
    }
}

fn half_width(p: f64, n: u64) -> f64 {
    Z_95 * (p * (1.0 - p) / n as f64).sqrt()
}

fn run_batch(codebook: &Codebook, snr: SnrPoint, seed: u64, batch: u64, trials: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    let x = codebook.len();
    let mut block_errors = 0;
    let mut bit_errors = 0;
    for _ in 0..trials {
        let tx = codebook.block(rng.random_range(0..x));
        let detected = codebook.block(simulate_trial(tx, codebook, snr, &mut rng));
        if detected.ordinal() != tx.ordinal() {
            block_errors += 1;
            bit_errors += u64::from((detected.label() ^ tx.label()).count_ones());
        }
    }
    (block_errors, bit_errors)
}

/// Runs `trials` independent transmissions and tallies errors.
///
/// The result depends only on the codebook, `snr`, `trials` and `seed`.
pub fn monte_carlo(
    codebook: &Codebook,
    snr: SnrPoint,
    trials: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    if trials == 0 {
        return Err(Error::Contract("at least one trial is required".into()));
    }
    let batches = trials.div_ceil(BATCH_TRIALS);
    let (block_errors, bit_errors) = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH_TRIALS.min(trials - b * BATCH_TRIALS);
            run_batch(codebook, snr, seed, b, count)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(ErrorEstimate::from_counts(
        trials,
        block_errors,
        bit_errors,
        codebook.bits_per_block(),
    ))
}
