//! Numerical kernels: adaptive quadrature, elementary symmetric
//! polynomials, and partial-fraction weights for products of simple poles.

mod partial_fraction;
mod quadrature;

pub use partial_fraction::{
    alpha_product, check_distinct_poles, solve_alpha_linear, AlphaSet, POLE_GAP,
};
pub use quadrature::{integrate, QuadratureSpec};

use crate::error::{Error, Result};

/// Sum of the products of every `i`-element subset of `values`.
///
/// `i = 0` gives the empty product, 1.
pub fn elem_sym_poly(values: &[f64], i: usize) -> Result<f64> {
    if i > values.len() {
        return Err(Error::Contract(format!(
            "subset size {i} exceeds {} values",
            values.len()
        )));
    }
    Ok(elem_sym_all(values)[i])
}

/// `[e_0, e_1, ..., e_n]` for the given values.
pub(crate) fn elem_sym_all(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (count, &v) in values.iter().enumerate() {
        for k in (1..=count + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e
}

/// Compensated (Kahan–Babuška–Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}
