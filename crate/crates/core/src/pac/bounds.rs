use serde::Serialize;

use super::PacError;

/// Number of grammar symbols besides Σ counted when bounding the number of
/// queries of size `s` by `(|Σ| + c + 1)^s`: `(`, `)`, `and`, `ex`, `top`.
pub const ALPHABET_CONSTANT: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PacParams {
    pub epsilon: f64,
    pub delta: f64,
    pub sigma_size: usize,
    /// Target size `s` (size variant) or restriction count `n`
    /// (restrictions variant).
    pub target: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Size,
    Restrictions,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "size" => Ok(Variant::Size),
            "restrictions" => Ok(Variant::Restrictions),
            _ => Err(format!("unknown variant {s:?}")),
        }
    }
}

impl PacParams {
    pub fn new(epsilon: f64, delta: f64, sigma_size: usize, target: usize) -> Result<Self, PacError> {
        for (name, v) in [("epsilon", epsilon), ("delta", delta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(PacError::OutOfRange(name, v));
            }
        }
        Ok(PacParams {
            epsilon,
            delta,
            sigma_size,
            target,
        })
    }

    /// The VC-dimension bound `d` of the hypothesis space.
    pub fn vc_bound(&self, variant: Variant) -> f64 {
        let k = self.sigma_size as f64;
        let t = self.target as f64;
        match variant {
            Variant::Size => t * (k + ALPHABET_CONSTANT as f64 + 1.0).log2(),
            Variant::Restrictions => 2.0 * (k + 1.0) * t,
        }
    }
}

/// `max(4/ε·log2(2/δ), 8d/ε·log2(13/ε))`, rounded up.
pub fn occam_sample_size(epsilon: f64, delta: f64, d: f64) -> u64 {
    let a = 4.0 / epsilon * (2.0 / delta).log2();
    let b = 8.0 * d / epsilon * (13.0 / epsilon).log2();
    a.max(b).ceil() as u64
}

pub fn sample_size_bound(p: &PacParams, variant: Variant) -> Result<u64, PacError> {
    let p = PacParams::new(p.epsilon, p.delta, p.sigma_size, p.target)?;
    Ok(occam_sample_size(p.epsilon, p.delta, p.vc_bound(variant)))
}
