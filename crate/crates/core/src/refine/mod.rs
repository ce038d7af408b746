//! Refinement-operator learners: the brute-force operator ρ1, the
//! neighbour operator ρ2, the breadth-first learners built on them and the
//! most-specific product baseline.

mod bfs;
mod enumerate;
mod neighbors;
mod product;

use std::time::Instant;

use thiserror::Error;

pub use bfs::{bfs_learn, Caps, Frontier, LearnResult, Operator};
pub use enumerate::Enumerator;
pub use neighbors::Neighbors;
pub use product::{most_specific_product, tree_product};

use crate::model::{Concept, Signature};
use crate::sim;

/// Largest `||q||` that ρ1 will refine.
pub const DEFAULT_SIZE_CAP: usize = 11;
/// Largest number of reduced concepts the enumerator will materialize.
pub const DEFAULT_ENUMERATION_CAP: usize = 200_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RefineError {
    #[error("enumeration cap {0} exceeded")]
    EnumerationCap(usize),
    #[error("enumeration cap: query size {size} above {cap}")]
    QueryTooLarge { size: usize, cap: usize },
    #[error("timeout")]
    Timeout,
}

/// Holds the caches shared by repeated refinement calls over one signature.
#[derive(Clone, Debug)]
pub struct Refiner {
    pub size_cap: usize,
    enumerator: Enumerator,
    neighbors: Neighbors,
}

impl Refiner {
    pub fn new(sigma: &Signature) -> Self {
        Refiner::with_caps(sigma, DEFAULT_SIZE_CAP, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_caps(sigma: &Signature, size_cap: usize, enumeration_cap: usize) -> Self {
        Refiner {
            size_cap,
            enumerator: Enumerator::new(sigma, enumeration_cap),
            neighbors: Neighbors::new(sigma),
        }
    }

    pub fn signature(&self) -> &Signature {
        self.enumerator.signature()
    }

    /// ρ1: reduced `p` over Σ with `p ⊑ q`, `q ⋢ p` and `||p|| ≤ 2||q||+1`.
    pub fn rho1(&mut self, q: &Concept, deadline: Option<Instant>) -> Result<Vec<Concept>, RefineError> {
        let size = q.size();
        if size > self.size_cap {
            return Err(RefineError::QueryTooLarge { size, cap: self.size_cap });
        }
        let pool = self.enumerator.up_to_size(2 * size + 1, deadline)?;
        let keep = crate::par::map(&pool, |p| sim::subsumes(p, q) && !sim::subsumes(q, p));
        Ok(pool.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect())
    }

    /// ρ2: the downward neighbours of `q` over Σ. Neighbours are built
    /// directly rather than enumerated, so the size cap does not apply.
    pub fn rho2(&mut self, q: &Concept, deadline: Option<Instant>) -> Result<Vec<Concept>, RefineError> {
        self.neighbors.lower(&sim::minimize(q), deadline)
    }

    pub fn refine(&mut self, op: Operator, q: &Concept, deadline: Option<Instant>) -> Result<Vec<Concept>, RefineError> {
        match op {
            Operator::Rho1 => self.rho1(q, deadline),
            Operator::Rho2 => self.rho2(q, deadline),
        }
    }
}

pub fn rho1(q: &Concept, sigma: &Signature) -> Result<Vec<Concept>, RefineError> {
    Refiner::new(sigma).rho1(q, None)
}

pub fn rho2(q: &Concept, sigma: &Signature) -> Result<Vec<Concept>, RefineError> {
    Refiner::new(sigma).rho2(q, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cn, rn};

    fn sig(cs: &[&str], rs: &[&str]) -> Signature {
        Signature::from_parts(cs.iter().map(|c| cn(c)), rs.iter().map(|r| rn(r)))
    }

    fn strs(v: &[Concept]) -> Vec<String> {
        let mut s: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        s.sort();
        s
    }

    /// Members of `rho1(q)` with nothing from `rho1(q)` strictly between
    /// them and `q`.
    fn maximal(r1: &[Concept]) -> Vec<Concept> {
        r1.iter()
            .filter(|p| !r1.iter().any(|x| sim::subsumes(p, x) && !sim::subsumes(x, p)))
            .cloned()
            .collect()
    }

    #[test]
    fn rho1_of_top_single_name() {
        assert_eq!(strs(&rho1(&Concept::top(), &sig(&["A"], &[])).unwrap()), vec!["A"]);
    }

    #[test]
    fn rho1_of_top_name_and_role() {
        let got = strs(&rho1(&Concept::top(), &sig(&["A"], &["r"])).unwrap());
        for want in ["A", "(ex r top)", "(and A (ex r top))", "(ex r A)", "(ex r (ex r top))"] {
            assert!(got.contains(&want.to_string()), "{want} missing from {got:?}");
        }
        assert!(got.iter().all(|p| p != "top"));
    }

    #[test]
    fn rho2_examples() {
        assert_eq!(strs(&rho2(&Concept::top(), &sig(&["A"], &["r"])).unwrap()), vec!["(ex r top)", "A"]);
        assert_eq!(strs(&rho2(&"A".parse().unwrap(), &sig(&["A", "B"], &[])).unwrap()), vec!["(and A B)"]);
    }

    #[test]
    fn rho2_is_maximal_part_of_rho1() {
        let sigma = sig(&["A", "B"], &["r"]);
        let mut rf = Refiner::new(&sigma);
        let mut en = Enumerator::new(&sigma, 100_000);
        for q in en.up_to_size(2, None).unwrap() {
            let r1 = rf.rho1(&q, None).unwrap();
            let r2 = rf.rho2(&q, None).unwrap();
            assert_eq!(strs(&r2), strs(&maximal(&r1)), "at {q}");
            for p in &r2 {
                assert!(sim::minimize(p).size() <= 2 * q.size() + 1);
            }
        }
    }

    #[test]
    fn size_cap_is_an_error() {
        let mut rf = Refiner::with_caps(&sig(&[], &["r"]), 2, 1000);
        let q: Concept = "(ex r (ex r (ex r top)))".parse().unwrap();
        assert_eq!(rf.rho1(&q, None).unwrap_err(), RefineError::QueryTooLarge { size: 3, cap: 2 });
    }
}
