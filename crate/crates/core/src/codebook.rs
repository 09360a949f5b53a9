//! Legitimate OFDM-IM blocks and the bit-to-block mapping.
//!
//! A block of `B = floor(log2 C(N, K)) + K log2 M` bits is split into a
//! heading field of `p` index bits, which selects one of the first `2^p`
//! subcarrier activation patterns (SAPs) in lexicographic order, followed by
//! `K` groups of `log2 M` bits, each Gray-mapped onto an M-PSK point carried
//! by the active subcarriers in ascending index order.
//!
//! Subcarrier indices are 0-based throughout the crate.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of subcarriers in one group.
pub const MAX_SUBCARRIERS: usize = 32;
/// Largest supported PSK alphabet.
pub const MAX_PSK_ORDER: usize = 64;
/// Labels are stored in a `u64`.
pub const MAX_LABEL_BITS: u32 = 63;
/// `build_codebook` materialises all `2^B` blocks, so it is capped well below
/// [`MAX_LABEL_BITS`].
pub const MAX_CODEBOOK_BITS: u32 = 20;

/// How the per-subcarrier `tau` parameter is derived from `P_t/N_0`.
///
/// `Standard` follows the maximum-likelihood pairwise error event for
/// complex noise of total variance `N_0`, giving `tau = rho mu Delta / (4K)`.
/// `PaperLiteral` keeps the conditional error argument `P_t/(K N_0)` and
/// gives `tau = rho mu Delta / (2K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PepConvention {
    #[default]
    Standard,
    #[serde(rename = "paper")]
    PaperLiteral,
}

impl PepConvention {
    /// Divisor `c` in `tau = rho mu Delta / (c K)`.
    pub fn tau_divisor(self) -> f64 {
        match self {
            PepConvention::Standard => 4.0,
            PepConvention::PaperLiteral => 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PepConvention::Standard => "standard",
            PepConvention::PaperLiteral => "paper",
        }
    }
}

impl fmt::Display for PepConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PepConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Ok(PepConvention::Standard),
            "paper" | "paper-literal" | "paperliteral" => Ok(PepConvention::PaperLiteral),
            other => Err(Error::Config(format!("unknown PEP convention `{other}`"))),
        }
    }
}

/// Parameters of a single OFDM-IM subcarrier group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    n_subcarriers: usize,
    n_active: usize,
    psk_order: usize,
    mean_channel_gain: f64,
    convention: PepConvention,
}

impl SystemConfig {
    pub fn new(
        n_subcarriers: usize,
        n_active: usize,
        psk_order: usize,
        mean_channel_gain: f64,
        convention: PepConvention,
    ) -> Result<Self> {
        if n_subcarriers == 0 || n_subcarriers > MAX_SUBCARRIERS {
            return Err(Error::Config(format!(
                "N must be in 1..={MAX_SUBCARRIERS}, got {n_subcarriers}"
            )));
        }
        if n_active == 0 || n_active > n_subcarriers {
            return Err(Error::Config(format!(
                "K must be in 1..=N ({n_subcarriers}), got {n_active}"
            )));
        }
        if !(2..=MAX_PSK_ORDER).contains(&psk_order) || !psk_order.is_power_of_two() {
            return Err(Error::Config(format!(
                "M must be a power of two in 2..={MAX_PSK_ORDER}, got {psk_order}"
            )));
        }
        if !(mean_channel_gain.is_finite() && mean_channel_gain > 0.0) {
            return Err(Error::Config(format!(
                "mean channel gain must be positive and finite, got {mean_channel_gain}"
            )));
        }
        let config = SystemConfig {
            n_subcarriers,
            n_active,
            psk_order,
            mean_channel_gain,
            convention,
        };
        if config.total_bits() > MAX_LABEL_BITS {
            return Err(Error::Config(format!(
                "B = {} bits per block exceeds the supported {MAX_LABEL_BITS}",
                config.total_bits()
            )));
        }
        Ok(config)
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn psk_order(&self) -> usize {
        self.psk_order
    }

    pub fn mean_channel_gain(&self) -> f64 {
        self.mean_channel_gain
    }

    pub fn convention(&self) -> PepConvention {
        self.convention
    }

    pub fn with_convention(mut self, convention: PepConvention) -> Self {
        self.convention = convention;
        self
    }

    /// `p = floor(log2 C(N, K))`.
    pub fn index_bits(&self) -> u32 {
        floor_log2(binomial(self.n_subcarriers, self.n_active))
    }

    /// `log2 M`.
    pub fn bits_per_symbol(&self) -> u32 {
        self.psk_order.trailing_zeros()
    }

    /// `B = p + K log2 M`.
    pub fn total_bits(&self) -> u32 {
        self.index_bits() + self.n_active as u32 * self.bits_per_symbol()
    }

    /// `X = 2^p M^K`, the number of legitimate blocks.
    pub fn block_count(&self) -> u64 {
        1u64 << self.total_bits()
    }
}

/// Binomial coefficient, exact for `n <= 62`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u64 = 1;
    for i in 0..k {
        // c * (n - i) is divisible by (i + 1) at every step.
        c = c * (n - i) as u64 / (i + 1) as u64;
    }
    c
}

fn floor_log2(v: u64) -> u32 {
    debug_assert!(v > 0);
    63 - v.leading_zeros()
}

/// A subcarrier activation pattern: strictly increasing active indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sap {
    active: Vec<usize>,
}

impl Sap {
    pub fn new(active: Vec<usize>, n_subcarriers: usize) -> Result<Self> {
        if active.is_empty() {
            return Err(Error::Contract(
                "SAP must activate at least one subcarrier".into(),
            ));
        }
        if active.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Contract(format!(
                "SAP indices must be strictly increasing: {active:?}"
            )));
        }
        if active.last().is_some_and(|&i| i >= n_subcarriers) {
            return Err(Error::Contract(format!(
                "SAP index out of range for N = {n_subcarriers}: {active:?}"
            )));
        }
        Ok(Sap { active })
    }

    pub fn indices(&self) -> &[usize] {
        &self.active
    }

    pub fn contains(&self, subcarrier: usize) -> bool {
        self.active.binary_search(&subcarrier).is_ok()
    }
}

impl fmt::Display for Sap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, idx) in self.active.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{idx}")?;
        }
        f.write_str("}")
    }
}

fn check_n_k(n: usize, k: usize) -> Result<()> {
    if n == 0 || n > MAX_SUBCARRIERS || k == 0 || k > n {
        return Err(Error::Config(format!(
            "need 1 <= K <= N <= {MAX_SUBCARRIERS}, got N = {n}, K = {k}"
        )));
    }
    Ok(())
}

/// All `C(N, K)` activation patterns in lexicographic order.
pub fn enumerate_saps(n: usize, k: usize) -> Result<Vec<Sap>> {
    check_n_k(n, k)?;
    let total = binomial(n, k) as usize;
    let mut out = Vec::with_capacity(total);
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(Sap {
            active: current.clone(),
        });
        // Rightmost position that can still be incremented.
        let Some(pos) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            break;
        };
        current[pos] += 1;
        for i in pos + 1..k {
            current[i] = current[i - 1] + 1;
        }
    }
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

/// The `rank`-th (0-based) K-subset of `{0..N-1}` in lexicographic order.
pub fn unrank_sap(mut rank: u64, n: usize, k: usize) -> Result<Sap> {
    check_n_k(n, k)?;
    if rank >= binomial(n, k) {
        return Err(Error::Contract(format!(
            "rank {rank} out of range for C({n},{k})"
        )));
    }
    let mut active = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            let with_next = binomial(n - next - 1, remaining);
            if rank < with_next {
                break;
            }
            rank -= with_next;
            next += 1;
        }
        active.push(next);
        next += 1;
    }
    Ok(Sap { active })
}

/// Reads `bits` as an unsigned integer, most significant bit first.
pub fn bits_to_u64(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
}

/// The low `width` bits of `value`, most significant first.
pub fn u64_to_bits(value: u64, width: u32) -> Vec<bool> {
    (0..width).rev().map(|i| (value >> i) & 1 == 1).collect()
}

/// Maps a `p`-bit index field onto its activation pattern.
pub fn map_index_bits(bits: &[bool], n: usize, k: usize) -> Result<Sap> {
    check_n_k(n, k)?;
    let p = floor_log2(binomial(n, k));
    if bits.len() != p as usize {
        return Err(Error::Contract(format!(
            "index field must have {p} bits for N = {n}, K = {k}, got {}",
            bits.len()
        )));
    }
    unrank_sap(bits_to_u64(bits), n, k)
}

pub fn gray_encode(m: u64) -> u64 {
    m ^ (m >> 1)
}

pub fn gray_decode(g: u64) -> u64 {
    let mut m = g;
    let mut shift = g >> 1;
    while shift != 0 {
        m ^= shift;
        shift >>= 1;
    }
    m
}

/// The unit-modulus point `exp(i 2 pi m / M)` with quarter turns kept exact.
pub fn psk_phase_point(m: u64, order: usize) -> Complex64 {
    let order = order as u64;
    let m = m % order;
    if (4 * m).is_multiple_of(order) {
        return match 4 * m / order {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * m as f64 / order as f64)
}

/// Gray-decodes `symbol_bits` and returns the corresponding M-PSK point.
pub fn psk_point(symbol_bits: &[bool], order: usize) -> Result<Complex64> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::Config(format!(
            "PSK order must be a power of two >= 2, got {order}"
        )));
    }
    let width = order.trailing_zeros() as usize;
    if symbol_bits.len() != width {
        return Err(Error::Contract(format!(
            "{order}-PSK symbols take {width} bits, got {}",
            symbol_bits.len()
        )));
    }
    Ok(psk_phase_point(
        gray_decode(bits_to_u64(symbol_bits)),
        order,
    ))
}

/// One legitimate transmit block.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    sap: Sap,
    symbols: Vec<Complex64>,
    label: u64,
    ordinal: usize,
    dense: Vec<Complex64>,
}

impl Block {
    pub fn sap(&self) -> &Sap {
        &self.sap
    }

    /// Symbols on the active subcarriers, ascending subcarrier order.
    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    /// The block's bit label as an integer (most significant bit is the
    /// first index bit).
    pub fn label(&self) -> u64 {
        self.label
    }

    pub fn ordinal(&self) -> usize {
        self.ordinal
    }

    /// The length-N frequency-domain vector, zero on idle subcarriers.
    pub fn dense(&self) -> &[Complex64] {
        &self.dense
    }
}

/// Every legitimate block of a configuration, indexed by ordinal.
///
/// The ordinal of a block equals the numeric value of its label.
#[derive(Debug, Clone)]
pub struct Codebook {
    config: SystemConfig,
    blocks: Vec<Block>,
}

impl Codebook {
    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, ordinal: usize) -> &Block {
        &self.blocks[ordinal]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn bits_per_block(&self) -> u32 {
        self.config.total_bits()
    }

    pub fn block_of_bits(&self, bits: &[bool]) -> Result<&Block> {
        let b = self.bits_per_block() as usize;
        if bits.len() != b {
            return Err(Error::Contract(format!(
                "blocks carry {b} bits, got {}",
                bits.len()
            )));
        }
        Ok(&self.blocks[bits_to_u64(bits) as usize])
    }

    pub fn bits_of_block(&self, block: &Block) -> Vec<bool> {
        u64_to_bits(block.label, self.bits_per_block())
    }
}

/// Builds the full codebook, one block per `B`-bit string in ascending order.
pub fn build_codebook(config: SystemConfig) -> Result<Codebook> {
    let b = config.total_bits();
    if b > MAX_CODEBOOK_BITS {
        return Err(Error::Config(format!(
            "codebook of 2^{b} blocks exceeds the supported 2^{MAX_CODEBOOK_BITS}"
        )));
    }
    let n = config.n_subcarriers();
    let k = config.n_active();
    let m = config.psk_order();
    let q = config.bits_per_symbol();
    let symbol_field = k as u32 * q;

    let saps: Vec<Sap> = enumerate_saps(n, k)?
        .into_iter()
        .take(1usize << config.index_bits())
        .collect();
    let points: Vec<Complex64> = (0..m as u64)
        .map(|g| psk_phase_point(gray_decode(g), m))
        .collect();

    let count = 1usize << b;
    let mut blocks = Vec::with_capacity(count);
    for label in 0..count as u64 {
        let sap = saps[(label >> symbol_field) as usize].clone();
        let symbols: Vec<Complex64> = (0..k as u32)
            .map(|j| {
                let shift = (k as u32 - 1 - j) * q;
                points[((label >> shift) & (m as u64 - 1)) as usize]
            })
            .collect();
        let mut dense = vec![Complex64::new(0.0, 0.0); n];
        for (&idx, &s) in sap.indices().iter().zip(&symbols) {
            dense[idx] = s;
        }
        blocks.push(Block {
            sap,
            symbols,
            label,
            ordinal: label as usize,
            dense,
        });
    }
    Ok(Codebook { config, blocks })
}
