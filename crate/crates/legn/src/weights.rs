//! The (k, n) weight system: weight(x) = k, weight(y) = n, weight(p) = n - k.

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weights of a semi-quasi-homogeneous type (k, n) with n > k >= 1, gcd(k, n) = 1.
///
/// The deformation theory requires n > k > 1 (and n > 2k for the microlocal
/// basis); k = 1 is admitted here so that tangent-cone classification covers
/// the delta <= 2 branches. Operations that need the stronger hypotheses check
/// them at their own entry points.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    k: u32,
    n: u32,
}

impl WeightSystem {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k == 0 || n <= k {
            return Err(Error::HypothesisViolated(format!(
                "need n > k >= 1, got (k, n) = ({k}, {n})"
            )));
        }
        if gcd(k, n) != 1 {
            return Err(Error::HypothesisViolated(format!(
                "need gcd(k, n) = 1, got gcd({k}, {n}) = {}",
                gcd(k, n)
            )));
        }
        Ok(WeightSystem { k, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// weight(p) = n - k.
    pub fn wp(&self) -> u32 {
        self.n - self.k
    }

    /// Weight of the monomial x^i y^j p^l.
    pub fn weight(&self, i: u32, j: u32, l: u32) -> u64 {
        self.k as u64 * i as u64 + self.n as u64 * j as u64 + self.wp() as u64 * l as u64
    }

    pub fn weight_xy(&self, i: u32, j: u32) -> u64 {
        self.weight(i, j, 0)
    }

    /// k * n, the quasi-homogeneous weight of y^k - x^n.
    pub fn kn(&self) -> u64 {
        self.k as u64 * self.n as u64
    }

    /// Default truncation 3kn: past twice the largest basis weight, with slack.
    pub fn default_trunc(&self) -> u32 {
        (3 * self.kn()) as u32
    }

    /// Largest weight in the basis rectangle: k(n-2) + n(k-2).
    pub fn max_basis_weight(&self) -> u64 {
        self.k as u64 * (self.n as u64 - 2) + self.n as u64 * (self.k as u64).saturating_sub(2)
    }

    /// Conductor of <k, n>: (k-1)(n-1).
    pub fn conductor(&self) -> u32 {
        (self.k - 1) * (self.n - 1)
    }

    pub fn same(&self, other: &WeightSystem) -> Result<()> {
        if self != other {
            return Err(Error::WeightMismatch(self.k, self.n, other.k, other.n));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_guards() {
        assert!(WeightSystem::new(4, 11).is_ok());
        assert!(WeightSystem::new(1, 2).is_ok());
        assert!(WeightSystem::new(4, 6).is_err());
        assert!(WeightSystem::new(4, 4).is_err());
        assert!(WeightSystem::new(0, 3).is_err());
    }

    #[test]
    fn weights() {
        let ws = WeightSystem::new(4, 11).unwrap();
        assert_eq!(ws.weight(1, 0, 1), 11); // x*p has weight 4 + 7
        assert_eq!(ws.weight(6, 2, 0), 46);
        assert_eq!(ws.kn(), 44);
        assert_eq!(ws.max_basis_weight(), 58);
        assert_eq!(ws.conductor(), 30);
    }
}
