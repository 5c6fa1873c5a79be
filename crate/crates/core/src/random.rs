//! Scalar random variable descriptors.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Uniform on `[-1, 1]`.
    #[default]
    Uniform,
}

/// Probability space of the scalar parameter `xi`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RandomSpace {
    pub distribution: Distribution,
}

impl RandomSpace {
    pub fn uniform() -> Self {
        Self {
            distribution: Distribution::Uniform,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self.distribution {
            Distribution::Uniform => (-1.0, 1.0),
        }
    }

    pub fn pdf(&self, xi: f64) -> f64 {
        let (a, b) = self.support();
        match self.distribution {
            Distribution::Uniform if (a..=b).contains(&xi) => 0.5,
            Distribution::Uniform => 0.0,
        }
    }

    pub fn contains(&self, xi: f64) -> bool {
        let (a, b) = self.support();
        (a..=b).contains(&xi)
    }
}
