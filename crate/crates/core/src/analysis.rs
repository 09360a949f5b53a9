//! Average pairwise error probabilities and union-bound error rates.
//!
//! Averaging the Craig-form conditional PEP over i.i.d. exponential gains
//! turns each subcarrier into a factor `(1 + tau_n csc^2 theta)^-1`. With
//! distinct `tau` the product splits into single poles whose integrals are
//! elementary, giving
//!
//! ```text
//! PEP = 1/2 sum_n alpha_n / (1 + tau_n + sqrt(tau_n (1 + tau_n)))
//! ```
//!
//! Coincident poles are common with PSK alphabets (Delta takes only a few
//! values), and for those the product is integrated numerically instead.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::{Block, Codebook, SystemConfig};
use crate::error::{Error, Result};
use crate::numerics::{
    alpha_product, check_distinct_poles, integrate, NeumaierSum, QuadratureSpec,
};

/// Above this `sum |alpha_n|` the closed form loses more than ~1e-10 to
/// cancellation and quadrature is used instead.
pub const MAX_ALPHA_AMPLIFICATION: f64 = 1e6;

/// Relative accuracy demanded of the Craig PEP on either route.
const CLOSED_FORM_REL_ACCURACY: f64 = 1e-9;

/// Two-exponential approximation `Q(x) ~ sum_i rho_i exp(-2 eta_i x^2 / 2)`.
const EXP_WEIGHTS: [f64; 2] = [1.0 / 12.0, 1.0 / 4.0];
const EXP_RATES: [f64; 2] = [1.0 / 2.0, 2.0 / 3.0];

/// A point on the `P_t / N_0` axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    db: f64,
}

impl SnrPoint {
    pub fn from_db(db: f64) -> Self {
        SnrPoint { db }
    }

    pub fn from_linear(linear: f64) -> Self {
        SnrPoint {
            db: 10.0 * linear.log10(),
        }
    }

    pub fn db(&self) -> f64 {
        self.db
    }

    /// `rho = 10^(dB/10)`.
    pub fn linear(&self) -> f64 {
        10f64.powf(self.db / 10.0)
    }
}

/// Which route produced a [`PepValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PepRoute {
    CraigClosedForm,
    CraigQuadrature,
    ExponentialApprox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PepValue {
    pub value: f64,
    pub route: PepRoute,
}

/// Analytic engine used by the union bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnalyticMethod {
    Craig,
    Exponential,
}

/// Per-pair distances for the event "`from` transmitted, `to` detected".
#[derive(Debug, Clone, PartialEq)]
pub struct PairProfile {
    pub from_ordinal: usize,
    pub to_ordinal: usize,
    pub deltas: Vec<f64>,
    pub bit_errors: u32,
}

impl PairProfile {
    pub fn new(a: &Block, b: &Block) -> Result<Self> {
        Ok(PairProfile {
            from_ordinal: a.ordinal(),
            to_ordinal: b.ordinal(),
            deltas: pair_deltas(a, b)?,
            bit_errors: bit_errors(a, b)?,
        })
    }

    /// Number of subcarriers on which the two blocks differ.
    pub fn diversity(&self) -> usize {
        self.deltas.iter().filter(|&&d| d > 0.0).count()
    }
}

/// `Delta(n) = |x_a(n) - x_b(n)|^2` for every subcarrier.
pub fn pair_deltas(a: &Block, b: &Block) -> Result<Vec<f64>> {
    if a.dense().len() != b.dense().len() {
        return Err(Error::Contract(format!(
            "blocks have {} and {} subcarriers",
            a.dense().len(),
            b.dense().len()
        )));
    }
    Ok(a.dense()
        .iter()
        .zip(b.dense())
        .map(|(x, y)| (x - y).norm_sqr())
        .collect())
}

/// Hamming distance between the two blocks' labels.
pub fn bit_errors(a: &Block, b: &Block) -> Result<u32> {
    if a.label() == b.label() {
        return Err(Error::Contract(format!(
            "block {} paired with itself",
            a.ordinal()
        )));
    }
    Ok((a.label() ^ b.label()).count_ones())
}

/// `tau = rho mu Delta / (c K)` for every subcarrier with `Delta > 0`.
pub fn taus_of_pair(deltas: &[f64], config: &SystemConfig, snr: SnrPoint) -> Result<Vec<f64>> {
    if let Some(bad) = deltas.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        return Err(Error::Contract(format!(
            "distance must be non-negative, got {bad}"
        )));
    }
    let scale = snr.linear() * config.mean_channel_gain()
        / (config.convention().tau_divisor() * config.n_active() as f64);
    let taus: Vec<f64> = deltas
        .iter()
        .filter(|&&d| d > 0.0)
        .map(|&d| scale * d)
        .collect();
    if taus.is_empty() {
        return Err(Error::Contract(
            "all distances are zero; not an error event".into(),
        ));
    }
    Ok(taus)
}

fn check_taus(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::Contract("PEP needs at least one tau".into()));
    }
    if let Some(bad) = taus.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::Contract(format!(
            "tau must be non-negative and finite, got {bad}"
        )));
    }
    Ok(())
}

/// `1/pi int_0^{pi/2} (1 + tau csc^2 theta)^-1 dtheta`, written without
/// cancellation.
fn single_pole_term(tau: f64) -> f64 {
    0.5 / (1.0 + tau + (tau * (1.0 + tau)).sqrt())
}

/// Exact average PEP.
///
/// Uses the partial-fraction closed form when the non-zero `tau` are
/// pairwise distinct and the weighted sum keeps at least nine significant
/// digits; otherwise the product is integrated numerically to a tolerance
/// relative to its own magnitude. Zero entries contribute a factor of one and
/// are dropped.
pub fn pep_craig(taus: &[f64]) -> Result<PepValue> {
    check_taus(taus)?;
    let active: Vec<f64> = taus.iter().copied().filter(|&t| t > 0.0).collect();
    if active.is_empty() {
        return Ok(PepValue {
            value: 0.5,
            route: PepRoute::CraigClosedForm,
        });
    }
    match check_distinct_poles(&active) {
        Ok(()) => {}
        Err(Error::DegeneratePoles(_)) => return pep_quadrature_relative(&active),
        Err(e) => return Err(e),
    }
    let alpha = alpha_product(&active)?;
    if alpha.amplification() > MAX_ALPHA_AMPLIFICATION {
        return pep_quadrature_relative(&active);
    }
    let terms: Vec<f64> = alpha
        .values()
        .iter()
        .zip(&active)
        .map(|(a, &t)| a * single_pole_term(t))
        .collect();
    let value = terms.iter().copied().collect::<NeumaierSum>().total();
    let rounding =
        4.0 * f64::EPSILON * active.len() as f64 * terms.iter().map(|t| t.abs()).sum::<f64>();
    if !(value > 0.0 && rounding <= CLOSED_FORM_REL_ACCURACY * value) {
        return pep_quadrature_relative(&active);
    }
    Ok(PepValue {
        value,
        route: PepRoute::CraigClosedForm,
    })
}

// Default tolerance first, then tightened to the scale of a small result.
fn pep_quadrature_relative(taus: &[f64]) -> Result<PepValue> {
    let spec = QuadratureSpec::default();
    let first = pep_quadrature(taus, &spec)?;
    let wanted = first.value * CLOSED_FORM_REL_ACCURACY;
    if wanted >= spec.abs_tol || wanted <= 0.0 {
        return Ok(first);
    }
    pep_quadrature(
        taus,
        &QuadratureSpec {
            abs_tol: wanted.max(f64::MIN_POSITIVE),
            ..spec
        },
    )
}

/// `1/pi int_0^{pi/2} prod_n (1 + tau_n csc^2 theta)^-1 dtheta` by adaptive
/// quadrature.
pub fn pep_quadrature(taus: &[f64], spec: &QuadratureSpec) -> Result<PepValue> {
    check_taus(taus)?;
    let integrand = |theta: f64| {
        let s2 = theta.sin().powi(2);
        taus.iter().map(|&t| s2 / (s2 + t)).product::<f64>()
    };
    let spec = QuadratureSpec {
        abs_tol: spec.abs_tol * std::f64::consts::PI,
        ..*spec
    };
    let integral = integrate(integrand, 0.0, std::f64::consts::FRAC_PI_2, &spec)?;
    Ok(PepValue {
        value: integral / std::f64::consts::PI,
        route: PepRoute::CraigQuadrature,
    })
}

/// Average PEP under the two-exponential approximation of `Q`.
pub fn pep_exponential(taus: &[f64]) -> Result<PepValue> {
    check_taus(taus)?;
    let value = EXP_WEIGHTS
        .iter()
        .zip(EXP_RATES)
        .map(|(&w, eta)| {
            w * taus
                .iter()
                .map(|&t| 1.0 / (1.0 + 2.0 * eta * t))
                .product::<f64>()
        })
        .sum();
    Ok(PepValue {
        value,
        route: PepRoute::ExponentialApprox,
    })
}

pub fn pep(taus: &[f64], method: AnalyticMethod) -> Result<PepValue> {
    match method {
        AnalyticMethod::Craig => pep_craig(taus),
        AnalyticMethod::Exponential => pep_exponential(taus),
    }
}

/// Union-bound average block and bit error rates at one SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnionBound {
    pub bler: f64,
    pub ber: f64,
}

// Pairs sharing the same multiset of non-zero distances share a PEP.
type DeltaKey = Vec<u64>;

fn delta_key(a: &Block, b: &Block) -> DeltaKey {
    let mut key: Vec<u64> = a
        .dense()
        .iter()
        .zip(b.dense())
        .map(|(x, y)| (x - y).norm_sqr())
        .filter(|&d| d > 0.0)
        .map(f64::to_bits)
        .collect();
    key.sort_unstable();
    key
}

/// Average BLER and BER union bounds over every ordered pair of distinct
/// blocks. Values are not clamped and exceed one at low SNR.
///
/// Rows are evaluated in parallel but summed in ordinal order with
/// compensated accumulation, so the result does not depend on the thread
/// count.
pub fn union_bound(
    codebook: &Codebook,
    snr: SnrPoint,
    method: AnalyticMethod,
) -> Result<UnionBound> {
    let config = codebook.config();
    let blocks = codebook.blocks();

    let keys: BTreeSet<DeltaKey> = blocks
        .par_iter()
        .map(|a| {
            blocks
                .iter()
                .filter(|b| b.ordinal() != a.ordinal())
                .map(|b| delta_key(a, b))
                .collect::<BTreeSet<_>>()
        })
        .reduce(BTreeSet::new, |mut x, y| {
            x.extend(y);
            x
        });

    let peps: HashMap<DeltaKey, f64> = keys
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|key| {
            let deltas: Vec<f64> = key.iter().map(|&bits| f64::from_bits(bits)).collect();
            let taus = taus_of_pair(&deltas, config, snr)?;
            Ok((key, pep(&taus, method)?.value))
        })
        .collect::<Result<_>>()?;

    let rows: Vec<(NeumaierSum, NeumaierSum)> = blocks
        .par_iter()
        .map(|a| {
            let mut bler = NeumaierSum::default();
            let mut ber = NeumaierSum::default();
            for b in blocks.iter().filter(|b| b.ordinal() != a.ordinal()) {
                let p = peps[&delta_key(a, b)];
                bler.add(p);
                ber.add(p * f64::from((a.label() ^ b.label()).count_ones()));
            }
            (bler, ber)
        })
        .collect();

    let mut bler = NeumaierSum::default();
    let mut ber = NeumaierSum::default();
    for (r_bler, r_ber) in &rows {
        bler.merge(r_bler);
        ber.merge(r_ber);
    }
    let x = blocks.len() as f64;
    let b = f64::from(codebook.bits_per_block());
    Ok(UnionBound {
        bler: bler.total() / x,
        ber: ber.total() / (x * b),
    })
}

pub fn union_bler(codebook: &Codebook, snr: SnrPoint, method: AnalyticMethod) -> Result<f64> {
    Ok(union_bound(codebook, snr, method)?.bler)
}

pub fn union_ber(codebook: &Codebook, snr: SnrPoint, method: AnalyticMethod) -> Result<f64> {
    Ok(union_bound(codebook, snr, method)?.ber)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{build_codebook, PepConvention};
    use proptest::prelude::*;

    fn book(n: usize, k: usize, m: usize, mu: f64, conv: PepConvention) -> Codebook {
        build_codebook(SystemConfig::new(n, k, m, mu, conv).unwrap()).unwrap()
    }

    fn rayleigh_single(tau: f64) -> f64 {
        0.5 * (1.0 - (tau / (1.0 + tau)).sqrt())
    }

    #[test]
    fn deltas_examples() {
        let b = book(4, 2, 2, 1.0, PepConvention::Standard);
        // "0000": SAP {0,1}, (+1,+1); "0001": SAP {0,1}, (+1,-1); "0100": SAP {0,2}, (+1,+1).
        assert_eq!(
            pair_deltas(b.block(0), b.block(1)).unwrap(),
            vec![0.0, 4.0, 0.0, 0.0]
        );
        assert_eq!(
            pair_deltas(b.block(0), b.block(4)).unwrap(),
            vec![0.0, 1.0, 1.0, 0.0]
        );
        assert_eq!(pair_deltas(b.block(5), b.block(5)).unwrap(), vec![0.0; 4]);

        let other = book(3, 1, 2, 1.0, PepConvention::Standard);
        assert!(pair_deltas(b.block(0), other.block(0)).is_err());
    }

    #[test]
    fn bit_error_examples() {
        let b = book(4, 2, 2, 1.0, PepConvention::Standard);
        assert_eq!(bit_errors(b.block(0), b.block(1)).unwrap(), 1);
        assert_eq!(bit_errors(b.block(0), b.block(15)).unwrap(), 4);
        assert!(bit_errors(b.block(3), b.block(3)).is_err());
        let profile = PairProfile::new(b.block(0), b.block(4)).unwrap();
        assert_eq!(profile.diversity(), 2);
        assert_eq!(profile.bit_errors, 1);
    }

    #[test]
    fn tau_examples() {
        let paper = SystemConfig::new(4, 2, 2, 1.0, PepConvention::PaperLiteral).unwrap();
        let standard = paper.with_convention(PepConvention::Standard);
        let snr = SnrPoint::from_linear(10.0);
        let d = [0.0, 4.0, 0.0, 0.0];
        let t = taus_of_pair(&d, &paper, snr).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0] - 10.0).abs() < 1e-12);
        let t = taus_of_pair(&d, &standard, snr).unwrap();
        assert!((t[0] - 5.0).abs() < 1e-12);

        let paper_mu2 = SystemConfig::new(4, 2, 2, 2.0, PepConvention::PaperLiteral).unwrap();
        let t = taus_of_pair(&[0.0, 1.0, 1.0, 0.0], &paper_mu2, SnrPoint::from_db(0.0)).unwrap();
        assert_eq!(t, vec![0.5, 0.5]);

        assert!(matches!(
            taus_of_pair(&[0.0; 4], &paper, snr),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn craig_examples() {
        let p = pep_craig(&[0.0]).unwrap();
        assert_eq!(p.value, 0.5);

        let p = pep_craig(&[1.0]).unwrap();
        assert_eq!(p.route, PepRoute::CraigClosedForm);
        assert!((p.value - 0.146_446_609_406_726_24).abs() < 1e-12);

        let p = pep_craig(&[1.0, 2.0]).unwrap();
        assert_eq!(p.route, PepRoute::CraigClosedForm);
        let want = -rayleigh_single(1.0) + 2.0 * rayleigh_single(2.0);
        assert!((p.value - want).abs() < 1e-12);
        assert!((p.value - 0.037_056_8).abs() < 1e-6);

        let p = pep_craig(&[0.5, 0.5]).unwrap();
        assert_eq!(p.route, PepRoute::CraigQuadrature);

        assert!(pep_craig(&[]).is_err());
        assert!(pep_craig(&[-1.0]).is_err());
        assert!(pep_craig(&[f64::NAN]).is_err());
    }

    #[test]
    fn quadrature_examples() {
        let spec = QuadratureSpec::default();
        let p = pep_quadrature(&[1.0], &spec).unwrap();
        assert!((p.value - rayleigh_single(1.0)).abs() < 1e-10);

        // Two equal branches: ((1 - m)/2)^2 (1 + 2 (1 + m)/2), m = sqrt(1/2).
        let m = 0.5f64.sqrt();
        let want = ((1.0 - m) / 2.0).powi(2) * (1.0 + 2.0 * (1.0 + m) / 2.0);
        let p = pep_quadrature(&[1.0, 1.0], &spec).unwrap();
        assert!((p.value - want).abs() < 1e-10, "{} vs {want}", p.value);
        assert!((p.value - 0.058_058_26).abs() < 1e-8);

        let p = pep_quadrature(&[1e6], &spec).unwrap();
        assert!(p.value > 0.0 && p.value < 1e-3);
    }

    #[test]
    fn exponential_examples() {
        assert!((pep_exponential(&[0.0]).unwrap().value - 1.0 / 3.0).abs() < 1e-15);
        let want = 1.0 / 24.0 + 0.25 * 3.0 / 7.0;
        assert!((pep_exponential(&[1.0]).unwrap().value - want).abs() < 1e-15);
        assert!((want - 0.148_809_5).abs() < 1e-7);
        let want = (1.0 / 12.0) * 0.5 * (1.0 / 3.0) + 0.25 * (3.0 / 7.0) * (3.0 / 11.0);
        assert!((pep_exponential(&[1.0, 2.0]).unwrap().value - want).abs() < 1e-15);
        assert!((want - (1.0 / 72.0 + 9.0 / 308.0)).abs() < 1e-15);
    }

    #[test]
    fn single_subcarrier_union_is_rayleigh_bpsk() {
        let b = book(1, 1, 2, 1.0, PepConvention::Standard);
        let u = union_bound(&b, SnrPoint::from_db(10.0), AnalyticMethod::Craig).unwrap();
        // Standard convention: tau = rho * 4 / 4 = rho.
        assert!((u.bler - rayleigh_single(10.0)).abs() < 1e-12);
        assert!((u.bler - 0.023_269).abs() < 1e-6);
        assert_eq!(u.bler, u.ber);
    }

    #[test]
    fn union_blows_up_at_low_snr() {
        let b = book(4, 2, 2, 1.0, PepConvention::Standard);
        let u = union_bler(&b, SnrPoint::from_linear(1e-9), AnalyticMethod::Craig).unwrap();
        assert!((u - 7.5).abs() < 1e-3, "{u}");
    }

    #[test]
    fn ber_between_bler_over_b_and_bler() {
        for (n, k, m) in [(4, 2, 2), (4, 2, 4), (5, 3, 2)] {
            let b = book(n, k, m, 1.0, PepConvention::Standard);
            for db in [0.0, 10.0, 25.0] {
                for method in [AnalyticMethod::Craig, AnalyticMethod::Exponential] {
                    let u = union_bound(&b, SnrPoint::from_db(db), method).unwrap();
                    let bits = f64::from(b.bits_per_block());
                    assert!(u.bler / bits <= u.ber * (1.0 + 1e-12));
                    assert!(u.ber <= u.bler * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn exponential_exceeds_craig_at_high_snr() {
        let b = book(4, 2, 2, 1.0, PepConvention::Standard);
        let snr = SnrPoint::from_linear(1e3);
        let craig = union_ber(&b, snr, AnalyticMethod::Craig).unwrap();
        let exp = union_ber(&b, snr, AnalyticMethod::Exponential).unwrap();
        assert!(exp > craig);
        let craig_bler = union_bler(&b, snr, AnalyticMethod::Craig).unwrap();
        assert!(craig_bler > 0.0 && craig_bler < 0.02);
    }

    #[test]
    fn literal_convention_doubles_tau() {
        let std_book = book(4, 2, 2, 1.0, PepConvention::Standard);
        let paper_book = book(4, 2, 2, 1.0, PepConvention::PaperLiteral);
        let a = union_bler(&paper_book, SnrPoint::from_db(10.0), AnalyticMethod::Craig).unwrap();
        let b = union_bler(
            &std_book,
            SnrPoint::from_db(10.0 + 10.0 * 2f64.log10()),
            AnalyticMethod::Craig,
        )
        .unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn union_matches_direct_pair_sum_under_relabelling() {
        // Reversed subcarrier order, summed pair by pair without the cache.
        let b = book(4, 2, 4, 1.0, PepConvention::Standard);
        let snr = SnrPoint::from_db(12.0);
        let direct = union_bound(&b, snr, AnalyticMethod::Craig).unwrap();
        let mut bler = 0.0;
        let mut ber = 0.0;
        for x in b.blocks() {
            for y in b.blocks().iter().filter(|y| y.ordinal() != x.ordinal()) {
                let mut d = pair_deltas(x, y).unwrap();
                d.reverse();
                let t = taus_of_pair(&d, b.config(), snr).unwrap();
                let p = pep_craig(&t).unwrap().value;
                bler += p;
                ber += p * f64::from(bit_errors(x, y).unwrap());
            }
        }
        let xs = b.len() as f64;
        assert!((direct.bler - bler / xs).abs() < 1e-12 * direct.bler.max(1.0));
        assert!(
            (direct.ber - ber / (xs * f64::from(b.bits_per_block()))).abs()
                < 1e-12 * direct.ber.max(1.0)
        );
    }

    fn q_function(x: f64) -> f64 {
        0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
    }

    #[test]
    fn exponential_form_bounds_q_only_beyond_crossover() {
        // The two-exponential form sits below Q near the origin (1/3 < 1/2)
        // and above it from x ~ 0.6655 onwards.
        let approx = |x: f64| (-x * x / 2.0).exp() / 12.0 + (-2.0 * x * x / 3.0).exp() / 4.0;
        for i in 0..=8000 {
            let x = i as f64 * 1e-3;
            if x < 0.665 {
                assert!(approx(x) < q_function(x), "x = {x}");
            } else if x > 0.666 {
                assert!(approx(x) >= q_function(x) - 1e-15, "x = {x}");
            }
        }
        // Averaged over Rayleigh fading the single-branch crossover is near tau = 0.754.
        assert!(pep_exponential(&[0.75]).unwrap().value < pep_craig(&[0.75]).unwrap().value);
        assert!(pep_exponential(&[0.76]).unwrap().value > pep_craig(&[0.76]).unwrap().value);
    }

    fn distinct_taus() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-3.0f64..3.0, 1..6).prop_filter_map("gap", |logs| {
            let t: Vec<f64> = logs.iter().map(|l| 10f64.powf(*l)).collect();
            let mut s = t.clone();
            s.sort_by(f64::total_cmp);
            s.windows(2).all(|w| w[1] >= 1.1 * w[0]).then_some(t)
        })
    }

    proptest! {
        #[test]
        fn closed_form_matches_quadrature(t in distinct_taus()) {
            let a = pep_craig(&t).unwrap().value;
            let b = pep_quadrature(&t, &QuadratureSpec::default()).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-8);
        }

        #[test]
        fn permutation_invariant(mut t in distinct_taus(), rot in 0usize..6) {
            let a = pep_craig(&t).unwrap().value;
            let e = pep_exponential(&t).unwrap().value;
            let len = t.len();
            t.rotate_left(rot % len);
            prop_assert!((pep_craig(&t).unwrap().value - a).abs() <= 1e-12);
            prop_assert!((pep_exponential(&t).unwrap().value - e).abs() <= 1e-12);
        }

        #[test]
        fn quadrature_decreasing_in_tau(t in prop::collection::vec(0.01f64..100.0, 1..5), i in 0usize..5, bump in 0.01f64..10.0) {
            let spec = QuadratureSpec::default();
            let before = pep_quadrature(&t, &spec).unwrap().value;
            let mut t2 = t.clone();
            let i = i % t.len();
            t2[i] *= 1.0 + bump;
            let after = pep_quadrature(&t2, &spec).unwrap().value;
            prop_assert!(after < before);
        }

        #[test]
        fn exponential_above_craig_past_crossover(t in prop::collection::vec(1.0f64..1e4, 1..8)) {
            prop_assert!(pep_exponential(&t).unwrap().value >= pep_craig(&t).unwrap().value);
        }

        #[test]
        fn pep_is_a_probability(t in prop::collection::vec(0.0f64..1e4, 1..8)) {
            let p = pep_craig(&t).unwrap().value;
            prop_assert!((0.0..=0.5 + 1e-12).contains(&p));
        }
    }
}
