use crate::error::{Error, Result};

/// Time-ordered `(t, sigma2)` samples tagged with the route that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionCurve {
    label: String,
    samples: Vec<(f64, f64)>,
}

impl DispersionCurve {
    /// Requires strictly increasing `t` and finite, positive `sigma2`.
    pub fn new(label: impl Into<String>, samples: Vec<(f64, f64)>) -> Result<Self> {
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Config(format!(
                    "dispersion samples must have increasing t ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(t, s)) = samples.iter().find(|(_, s)| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::domain("sigma2", s, format!("must be finite and > 0 (t = {t})")));
        }
        Ok(Self {
            label: label.into(),
            samples,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }
    pub fn len(&self) -> usize {
        self.samples.len()
    }
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }
    pub fn last(&self) -> Option<(f64, f64)> {
        self.samples.last().copied()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}
