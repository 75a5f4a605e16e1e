use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// The reflection-invariant weight `h_κ(x) = ∏ |x_i|^{κ_i}` on `S^d`,
/// together with its ball and simplex relatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionWeight {
    d: usize,
    kappa: Vec<f64>,
}

impl ReflectionWeight {
    pub fn new(d: usize, kappa: &[f64]) -> Result<Self> {
        if d == 0 {
            return Err(Error::Unsupported("dimension d must be >= 1"));
        }
        if kappa.len() != d + 1 {
            return Err(Error::LengthMismatch {
                expected: d + 1,
                got: kappa.len(),
            });
        }
        for &k in kappa {
            if !(k >= 0.0) || !k.is_finite() {
                return Err(invalid("kappa", k, "every κ_i must be finite and >= 0"));
            }
        }
        Ok(Self {
            d,
            kappa: kappa.to_vec(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    /// `|κ| = Σ κ_j`.
    pub fn norm(&self) -> f64 {
        self.kappa.iter().sum()
    }

    /// `λ_κ = |κ| + (d-1)/2`.
    pub fn lambda(&self) -> f64 {
        self.norm() + 0.5 * (self.d as f64 - 1.0)
    }

    pub fn min_kappa(&self) -> f64 {
        self.kappa.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Critical index `σ_κ = (d-1)/2 + |κ| - min κ_i`.
    pub fn sigma(&self) -> f64 {
        self.lambda() - self.min_kappa()
    }
}
