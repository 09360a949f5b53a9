//! Partial-fraction weights for `prod_n (1 + tau_n s)^-1 = sum_n alpha_n (1 + tau_n s)^-1`.
//!
//! Two independent routes are provided: the residue product
//! `alpha_n = prod_{m != n} tau_n / (tau_n - tau_m)` and a dense solve of the
//! coefficient-matching system, whose row `i` equates the `s^i` coefficients
//! of `sum_n alpha_n prod_{m != n} (1 + tau_m s)` and `1`.

use super::elem_sym_all;
use crate::error::{Error, Result};

/// Two poles closer than this (relative to the larger) count as coincident.
pub const POLE_GAP: f64 = 1e-9;

/// Partial-fraction weights, in the same order as the input poles.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSet {
    values: Vec<f64>,
}

impl AlphaSet {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `sum |alpha_n|`, the factor by which rounding in the single-pole terms
    /// is amplified when the decomposition is summed.
    pub fn amplification(&self) -> f64 {
        self.values.iter().map(|a| a.abs()).sum()
    }
}

/// Checks that every tau is positive and finite and that no two are within
/// [`POLE_GAP`] of each other (relatively).
pub fn check_distinct_poles(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::Contract("at least one pole is required".into()));
    }
    if let Some(bad) = taus.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(Error::Contract(format!(
            "poles must be positive and finite, got {bad}"
        )));
    }
    let mut sorted = taus.to_vec();
    sorted.sort_by(f64::total_cmp);
    for w in sorted.windows(2) {
        if w[1] - w[0] <= POLE_GAP * w[1] {
            return Err(Error::DegeneratePoles(format!(
                "tau values {} and {} coincide; use quadrature",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Residue evaluation of the weights.
pub fn alpha_product(taus: &[f64]) -> Result<AlphaSet> {
    check_distinct_poles(taus)?;
    let values = taus
        .iter()
        .enumerate()
        .map(|(n, &tn)| {
            taus.iter()
                .enumerate()
                .filter(|&(m, _)| m != n)
                .map(|(_, &tm)| tn / (tn - tm))
                .product()
        })
        .collect();
    Ok(AlphaSet { values })
}

/// Weights from the coefficient-matching linear system `A alpha = e_1`.
///
/// `A` has a first row of ones and `a[i][j] = e_i(tau without tau_j)` below
/// it. Rows are equilibrated before Gaussian elimination with partial
/// pivoting, followed by one step of iterative refinement.
pub fn solve_alpha_linear(taus: &[f64]) -> Result<AlphaSet> {
    check_distinct_poles(taus)?;
    let n = taus.len();
    let mut a = vec![vec![0.0; n]; n];
    for j in 0..n {
        let others: Vec<f64> = taus
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != j)
            .map(|(_, &t)| t)
            .collect();
        let e = elem_sym_all(&others);
        for (i, row) in a.iter_mut().enumerate() {
            row[j] = e[i];
        }
    }
    let mut rhs = vec![0.0; n];
    rhs[0] = 1.0;

    for (row, b) in a.iter_mut().zip(rhs.iter_mut()) {
        let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for v in row.iter_mut() {
            *v /= scale;
        }
        *b /= scale;
    }

    let lu = Lu::factor(&a)?;
    let mut x = lu.solve(&rhs);
    let residual: Vec<f64> = a
        .iter()
        .zip(&rhs)
        .map(|(row, &b)| b - row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    for (xi, di) in x.iter_mut().zip(lu.solve(&residual)) {
        *xi += di;
    }
    Ok(AlphaSet { values: x })
}

struct Lu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &[Vec<f64>]) -> Result<Self> {
        let n = a.len();
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| lu[x][k].abs().total_cmp(&lu[y][k].abs()))
                .expect("non-empty range");
            if lu[p][k].abs() <= f64::EPSILON * n as f64 {
                return Err(Error::DegeneratePoles(
                    "coefficient matrix is numerically singular; use quadrature".into(),
                ));
            }
            lu.swap(k, p);
            perm.swap(k, p);
            let (head, tail) = lu.split_at_mut(k + 1);
            let pivot = &head[k];
            for row in tail {
                let factor = row[k] / pivot[k];
                row[k] = factor;
                for (x, p) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                    *x -= factor * p;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.lu[i][j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= self.lu[i][j] * y[j];
            }
            y[i] /= self.lu[i][i];
        }
        y
    }
}
