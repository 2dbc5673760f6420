use serde::{Deserialize, Serialize};

use super::SymbolicError;
use crate::Scalar;

/// Probabilities indexed by outcome. Weights are non-negative and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound = "")]
pub struct ProbabilityDistribution<F: Scalar = f64> {
    weights: Vec<F>,
}

impl<F: Scalar> ProbabilityDistribution<F> {
    pub fn new(weights: Vec<F>) -> Result<Self, SymbolicError> {
        if weights.is_empty() {
            return Err(SymbolicError::InvalidDistribution("no outcomes".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < F::zero())
        {
            return Err(SymbolicError::InvalidDistribution(format!("weight {i} is {w}")));
        }
        let total: F = weights.iter().copied().sum();
        if (total - F::one()).abs() > F::sum_tolerance(weights.len()) {
            return Err(SymbolicError::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    /// Normalized counts. Fails when every count is zero.
    pub fn from_counts(counts: &[u64]) -> Result<Self, SymbolicError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(SymbolicError::InvalidDistribution("all counts are zero".into()));
        }
        let total = total as f64;
        Ok(Self {
            weights: counts.iter().map(|&c| F::lit(c as f64 / total)).collect(),
        })
    }

    /// All mass on `outcome` out of `size` outcomes.
    pub fn point(outcome: usize, size: usize) -> Self {
        let mut weights = vec![F::zero(); size.max(outcome + 1)];
        weights[outcome] = F::one();
        Self { weights }
    }

    pub fn uniform(size: usize) -> Self {
        let w = F::one() / F::lit(size as f64);
        Self { weights: vec![w; size] }
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, outcome: usize) -> F {
        self.weights.get(outcome).copied().unwrap_or_else(F::zero)
    }

    /// Number of outcomes with strictly positive weight.
    pub fn support_size(&self) -> usize {
        self.weights.iter().filter(|w| **w > F::zero()).count()
    }

    /// Total-variation distance, `½ Σ |p_i − q_i|`, over the union of outcomes.
    pub fn total_variation(&self, other: &Self) -> F {
        let n = self.len().max(other.len());
        let sum: F = (0..n).map(|i| (self.get(i) - other.get(i)).abs()).sum();
        sum / F::lit(2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_weights() {
        assert!(ProbabilityDistribution::<f64>::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbabilityDistribution::<f64>::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityDistribution::<f64>::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityDistribution::<f64>::new(vec![]).is_err());
        assert!(ProbabilityDistribution::<f64>::new(vec![f64::NAN, 1.0]).is_err());
        // f32 accumulates coarser rounding; tolerance scales with epsilon.
        assert!(ProbabilityDistribution::<f32>::new(vec![0.1; 10]).is_ok());
    }

    #[test]
    fn total_variation_is_half_l1() {
        let p = ProbabilityDistribution::<f64>::new(vec![0.5, 0.5]).unwrap();
        let q = ProbabilityDistribution::<f64>::new(vec![1.0, 0.0]).unwrap();
        assert!((p.total_variation(&q) - 0.5).abs() < 1e-15);
        assert_eq!(p.total_variation(&p), 0.0);
    }

    #[test]
    fn counts_normalize() {
        let d = ProbabilityDistribution::<f64>::from_counts(&[2, 1, 0]).unwrap();
        assert_eq!(d.support_size(), 2);
        assert!((d.get(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!(ProbabilityDistribution::<f64>::from_counts(&[0, 0]).is_err());
    }
}
