//! Polynomial external potentials with exact derivatives.

use crate::error::{Error, Result};

/// `V(x) = sum_k coeffs[k] x^k`, degree at most six.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    coeffs: Vec<f64>,
}

impl Potential {
    pub const MAX_DEGREE: usize = 6;

    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() > Self::MAX_DEGREE + 1 {
            return Err(Error::Config(format!(
                "potential degree {} exceeds {}",
                coeffs.len() - 1,
                Self::MAX_DEGREE
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::domain("potential coefficient", *c, "must be finite"));
        }
        Ok(Self { coeffs })
    }

    pub fn free() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `V = m omega^2 x^2 / 2`.
    pub fn harmonic(m: f64, omega: f64) -> Self {
        Self {
            coeffs: vec![0.0, 0.0, 0.5 * m * omega * omega],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_free(&self) -> bool {
        self.coeffs.iter().skip(1).all(|&c| c == 0.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }
    pub fn d1(&self, x: f64) -> f64 {
        self.derivative(1, x)
    }
    pub fn d2(&self, x: f64) -> f64 {
        self.derivative(2, x)
    }
    pub fn d3(&self, x: f64) -> f64 {
        self.derivative(3, x)
    }

    /// `order`-th derivative by Horner's rule on the differentiated coefficients.
    pub fn derivative(&self, order: usize, x: f64) -> f64 {
        let mut acc = 0.0;
        for k in (order..self.coeffs.len()).rev() {
            let falling: f64 = ((k - order + 1)..=k).map(|j| j as f64).product();
            acc = acc * x + self.coeffs[k] * falling;
        }
        acc
    }
}
