//! Cesàro `(C,δ)` coefficients and the one-dimensional Cesàro kernels of
//! Jacobi and generalized Gegenbauer expansions.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::CompensatedSum;
use crate::orthopoly::{GenGegenParams, JacobiParams, OrthonormalGenGegenbauer, OrthonormalJacobi};

/// Summation order: a Cesàro index `δ > -1`, or the single projection term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CesaroOrder {
    Projection,
    Delta(f64),
}

impl CesaroOrder {
    pub fn delta(delta: f64) -> Result<Self> {
        if !(delta > -1.0) || !delta.is_finite() {
            return Err(invalid("delta", delta, "Cesàro index must exceed -1"));
        }
        Ok(Self::Delta(delta))
    }

    /// `None` for the projection.
    pub fn value(&self) -> Option<f64> {
        match *self {
            Self::Projection => None,
            Self::Delta(d) => Some(d),
        }
    }
}

impl core::fmt::Display for CesaroOrder {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::Projection => f.write_str("proj"),
            Self::Delta(d) => write!(f, "{d}"),
        }
    }
}

/// `A_k^δ = (δ+1)(δ+2)⋯(δ+k)/k!`.
pub fn cesaro_coeff(delta: f64, k: usize) -> f64 {
    let mut a = 1.0;
    for j in 1..=k {
        a *= (delta + j as f64) / j as f64;
    }
    a
}

/// Weights `c_k`, `k = 0..=n`, such that the mean is `Σ c_k s_k`.
pub fn cesaro_weights(n: usize, order: CesaroOrder) -> Vec<f64> {
    match order {
        CesaroOrder::Projection => {
            let mut w = alloc::vec![0.0; n + 1];
            w[n] = 1.0;
            w
        }
        CesaroOrder::Delta(delta) => {
            let mut a = Vec::with_capacity(n + 1);
            a.push(1.0);
            for j in 1..=n {
                let prev = a[j - 1];
                a.push(prev * (delta + j as f64) / j as f64);
            }
            let top = a[n];
            (0..=n).map(|k| a[n - k] / top).collect()
        }
    }
}

/// `(A_n^δ)^{-1} Σ_{k≤n} A_{n-k}^δ s_k`; the projection returns `s_n`.
pub fn cesaro_mean(s: &[f64], n: usize, order: CesaroOrder) -> Result<f64> {
    if s.len() < n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            got: s.len(),
        });
    }
    Ok(weighted_sum(&cesaro_weights(n, order), s))
}

fn weighted_sum(w: &[f64], s: &[f64]) -> f64 {
    let mut acc = CompensatedSum::default();
    for (a, b) in w.iter().zip(s) {
        acc.add(a * b);
    }
    acc.value()
}

/// Precomputed Cesàro kernel of the Jacobi expansion up to a maximum
/// degree, orthonormal with respect to the unnormalized weight.
#[derive(Debug, Clone)]
pub struct JacobiKernel {
    basis: OrthonormalJacobi,
}

impl JacobiKernel {
    pub fn new(max_degree: usize, p: JacobiParams) -> Self {
        Self {
            basis: OrthonormalJacobi::new(max_degree, p),
        }
    }

    pub fn basis(&self) -> &OrthonormalJacobi {
        &self.basis
    }

    pub fn eval(&self, n: usize, order: CesaroOrder, s: f64, t: f64) -> f64 {
        let ps = {
            let mut v = alloc::vec![0.0; n + 1];
            self.basis.eval_into(s, &mut v);
            v
        };
        let pt = {
            let mut v = alloc::vec![0.0; n + 1];
            self.basis.eval_into(t, &mut v);
            v
        };
        symmetric_sum(&cesaro_weights(n, order), &ps, &pt)
    }

    /// The kernel with one argument frozen, as a polynomial in the other.
    pub fn freeze(&self, n: usize, order: CesaroOrder, t: f64) -> FrozenKernel<'_> {
        let mut pt = alloc::vec![0.0; n + 1];
        self.basis.eval_into(t, &mut pt);
        let coef = cesaro_weights(n, order).iter().zip(&pt).map(|(w, p)| w * p).collect();
        FrozenKernel {
            family: Family::Jacobi(&self.basis),
            coef,
        }
    }
}

/// Same as [`JacobiKernel`] for `w_{λ,μ}`.
#[derive(Debug, Clone)]
pub struct GenGegenKernel {
    basis: OrthonormalGenGegenbauer,
}

impl GenGegenKernel {
    pub fn new(max_degree: usize, g: GenGegenParams) -> Result<Self> {
        Ok(Self {
            basis: OrthonormalGenGegenbauer::new(max_degree, g)?,
        })
    }

    pub fn basis(&self) -> &OrthonormalGenGegenbauer {
        &self.basis
    }

    pub fn eval(&self, n: usize, order: CesaroOrder, s: f64, t: f64) -> f64 {
        let mut scratch = Vec::new();
        let mut ps = alloc::vec![0.0; n + 1];
        self.basis.eval_into(s, &mut ps, &mut scratch);
        let mut pt = alloc::vec![0.0; n + 1];
        self.basis.eval_into(t, &mut pt, &mut scratch);
        symmetric_sum(&cesaro_weights(n, order), &ps, &pt)
    }

    pub fn freeze(&self, n: usize, order: CesaroOrder, t: f64) -> FrozenKernel<'_> {
        let mut pt = alloc::vec![0.0; n + 1];
        self.basis.eval_into(t, &mut pt, &mut Vec::new());
        let coef = cesaro_weights(n, order).iter().zip(&pt).map(|(w, p)| w * p).collect();
        FrozenKernel {
            family: Family::GenGegen(&self.basis),
            coef,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Family<'a> {
    Jacobi(&'a OrthonormalJacobi),
    GenGegen(&'a OrthonormalGenGegenbauer),
}

/// `s ↦ K(s, t)` for a fixed `t`, evaluated in `O(n)` per point.
#[derive(Debug, Clone)]
pub struct FrozenKernel<'a> {
    family: Family<'a>,
    coef: Vec<f64>,
}

impl FrozenKernel<'_> {
    pub fn eval_with(&self, s: f64, buf: &mut Vec<f64>, scratch: &mut Vec<f64>) -> f64 {
        buf.clear();
        buf.resize(self.coef.len(), 0.0);
        match self.family {
            Family::Jacobi(b) => b.eval_into(s, buf),
            Family::GenGegen(b) => b.eval_into(s, buf, scratch),
        }
        self.coef.iter().zip(buf.iter()).map(|(c, p)| c * p).sum()
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.eval_with(s, &mut Vec::new(), &mut Vec::new())
    }
}

fn symmetric_sum(w: &[f64], ps: &[f64], pt: &[f64]) -> f64 {
    let mut acc = CompensatedSum::default();
    for k in 0..w.len() {
        if w[k] != 0.0 {
            acc.add(w[k] * (ps[k] * pt[k]));
        }
    }
    acc.value()
}

/// `K_n^δ(w^{(α,β)}; s, t)` for the unnormalized Jacobi weight.
pub fn jacobi_cesaro_kernel(n: usize, order: CesaroOrder, p: JacobiParams, s: f64, t: f64) -> f64 {
    JacobiKernel::new(n, p).eval(n, order, s, t)
}

/// `K_n^δ(w_{λ,μ}; s, t)` for the unnormalized generalized Gegenbauer weight.
pub fn gen_gegen_cesaro_kernel(n: usize, order: CesaroOrder, g: GenGegenParams, s: f64, t: f64) -> Result<f64> {
    Ok(GenGegenKernel::new(n, g)?.eval(n, order, s, t))
}
