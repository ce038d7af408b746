use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Concept, PointedDatabase};
use crate::sim;

use super::PacError;

/// A probability distribution with finite support over pointed databases.
#[derive(Clone, Debug)]
pub struct ExampleDistribution {
    pub points: Vec<PointedDatabase>,
    pub probs: Vec<f64>,
}

impl ExampleDistribution {
    pub fn new(points: Vec<PointedDatabase>, probs: Vec<f64>) -> Result<Self, PacError> {
        let total: f64 = probs.iter().sum();
        if points.is_empty() || points.len() != probs.len() || probs.iter().any(|&p| p < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(PacError::BadDistribution(total));
        }
        Ok(ExampleDistribution { points, probs })
    }

    pub fn uniform(points: Vec<PointedDatabase>) -> Result<Self, PacError> {
        let n = points.len();
        let probs = vec![1.0 / n as f64; n];
        ExampleDistribution::new(points, probs)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `m` support indices drawn independently; reproducible per seed.
    pub fn sample(&self, m: usize, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = WeightedIndex::new(&self.probs).expect("valid weights");
        (0..m).map(|_| w.sample(&mut rng)).collect()
    }

    /// Membership of `q` at every support point.
    pub fn memberships(&self, q: &Concept) -> Vec<bool> {
        crate::par::map(&self.points, |p| sim::holds(q, p))
    }
}

/// `P(q_H Δ q_T)`, computed exactly over the support.
pub fn empirical_error(qh: &Concept, qt: &Concept, dist: &ExampleDistribution) -> f64 {
    let a = dist.memberships(qh);
    let b = dist.memberships(qt);
    a.iter().zip(&b).zip(&dist.probs).filter(|((x, y), _)| x != y).map(|(_, p)| p).sum()
}
