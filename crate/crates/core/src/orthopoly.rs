//! Jacobi, Gegenbauer and generalized Gegenbauer polynomials.
//!
//! Jacobi polynomials use the classical normalization
//! `P_n^{(α,β)}(1) = binom(n+α, n)`; Gegenbauer polynomials use
//! `C_n^λ(1) = binom(n+2λ-1, n)`. Everything is evaluated with forward
//! three-term recurrences in double precision.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::{cos, exp, ln_beta, pochhammer_ratio, pow, sin, sqrt, PI};

/// Exponent pair of the Jacobi weight `(1-t)^α (1+t)^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(invalid("alpha", alpha, "must be finite and > -1"));
        }
        if !(beta > -1.0) || !beta.is_finite() {
            return Err(invalid("beta", beta, "must be finite and > -1"));
        }
        Ok(Self { alpha, beta })
    }

    /// Gegenbauer-type symmetric pair `(λ-1/2, λ-1/2)`.
    pub fn symmetric(lambda: f64) -> Result<Self> {
        Self::new(lambda - 0.5, lambda - 0.5)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(β, α)`, the pair governing `P_n^{(α,β)}(-t)`.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// `∫ (1-t)^α (1+t)^β dt = 2^{α+β+1} B(α+1, β+1)`.
    pub fn total_mass(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        exp((a + b + 1.0) * core::f64::consts::LN_2 + ln_beta(a + 1.0, b + 1.0))
    }

    /// Diagonal coefficient `b_k` of the orthonormal recurrence
    /// `t p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1}`.
    pub(crate) fn recurrence_diag(&self, k: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        if k == 0 {
            return (b - a) / (a + b + 2.0);
        }
        let s = 2.0 * k as f64 + a + b;
        (b * b - a * a) / (s * (s + 2.0))
    }

    /// Off-diagonal coefficient `a_k`, `k >= 1`.
    pub(crate) fn recurrence_offdiag(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        let (a, b) = (self.alpha, self.beta);
        if k == 1 {
            let s = 2.0 + a + b;
            return sqrt(4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0)));
        }
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        sqrt(4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0)))
    }
}

/// `P_n^{(α,β)}(t)` by the three-term recurrence in the degree.
pub fn jacobi_eval(n: usize, p: JacobiParams, t: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = (a + 1.0) + 0.5 * (a + b + 2.0) * (t - 1.0);
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c1 = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * s;
        let c2 = (s + 1.0) * ((s + 2.0) * s * t + a * a - b * b);
        let c3 = 2.0 * (kf + a) * (kf + b) * (s + 2.0);
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `∫ P_n² w^{(α,β)}`; the orthonormal polynomial is `P_n / sqrt(h_n)`.
pub fn jacobi_l2norm(n: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let mut h = p.total_mass();
    for k in 1..=n {
        let kf = k as f64;
        h *= if k == 1 {
            (1.0 + a) * (1.0 + b) / (a + b + 3.0)
        } else {
            let s = 2.0 * kf + a + b;
            (kf + a) * (kf + b) / (kf * (kf + a + b)) * (s - 1.0) / (s + 1.0)
        };
    }
    h
}

/// Orthonormal Jacobi polynomials (unnormalized weight) up to a fixed
/// degree, with the recurrence coefficients computed once.
#[derive(Debug, Clone)]
pub struct OrthonormalJacobi {
    params: JacobiParams,
    diag: Vec<f64>,
    off: Vec<f64>,
    p0: f64,
}

impl OrthonormalJacobi {
    pub fn new(max_degree: usize, params: JacobiParams) -> Self {
        let diag = (0..=max_degree).map(|k| params.recurrence_diag(k)).collect();
        let off = (0..=max_degree)
            .map(|k| if k == 0 { 0.0 } else { params.recurrence_offdiag(k) })
            .collect();
        Self {
            params,
            diag,
            off,
            p0: 1.0 / sqrt(params.total_mass()),
        }
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    pub fn max_degree(&self) -> usize {
        self.diag.len() - 1
    }

    /// Writes `p̃_0(t), …, p̃_m(t)` into `out[..=m]`, `m = out.len() - 1`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let m = out.len().saturating_sub(1);
        assert!(m <= self.max_degree(), "degree beyond precomputed range");
        if out.is_empty() {
            return;
        }
        out[0] = self.p0;
        if m == 0 {
            return;
        }
        out[1] = (t - self.diag[0]) * self.p0 / self.off[1];
        for k in 1..m {
            out[k + 1] = ((t - self.diag[k]) * out[k] - self.off[k] * out[k - 1]) / self.off[k + 1];
        }
    }

    pub fn eval_all(&self, t: f64) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.max_degree() + 1];
        self.eval_into(t, &mut out);
        out
    }
}

/// `C_n^λ(t)`, `λ > 0`.
pub fn gegenbauer_eval(n: usize, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", lambda, "Gegenbauer parameter must be > 0"));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * lambda * t;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda) * t * cur - (kf + 2.0 * lambda - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Parameters of the weight `w_{λ,μ}(t) = |t|^{2μ} (1-t²)^{λ-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenGegenParams {
    lambda: f64,
    mu: f64,
}

impl GenGegenParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(invalid("lambda", lambda, "must be finite and >= 0"));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(invalid("mu", mu, "must be finite and >= 0"));
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `∫ w_{λ,μ} = B(μ+1/2, λ+1/2)`.
    pub fn total_mass(&self) -> f64 {
        exp(ln_beta(self.mu + 0.5, self.lambda + 0.5))
    }

    pub fn weight(&self, t: f64) -> f64 {
        let s = 1.0 - t * t;
        let radial = if self.lambda == 0.5 {
            1.0
        } else {
            pow(s, self.lambda - 0.5)
        };
        let angular = if self.mu == 0.0 {
            1.0
        } else {
            pow(t.abs(), 2.0 * self.mu)
        };
        radial * angular
    }

    /// Jacobi pair behind the even-degree polynomials.
    pub fn even_jacobi(&self) -> JacobiParams {
        JacobiParams {
            alpha: self.lambda - 0.5,
            beta: self.mu - 0.5,
        }
    }

    /// Jacobi pair behind the odd-degree polynomials.
    pub fn odd_jacobi(&self) -> JacobiParams {
        JacobiParams {
            alpha: self.lambda - 0.5,
            beta: self.mu + 0.5,
        }
    }
}

/// `C_n^{(λ,μ)}(t)` through its Jacobi representation in `2t²-1`.
pub fn gen_gegenbauer_eval(n: usize, g: GenGegenParams, t: f64) -> f64 {
    let m = n / 2;
    let s = 2.0 * t * t - 1.0;
    let sum = g.lambda + g.mu;
    if n.is_multiple_of(2) {
        pochhammer_ratio(sum, g.mu + 0.5, m) * jacobi_eval(m, g.even_jacobi(), s)
    } else {
        pochhammer_ratio(sum, g.mu + 0.5, m + 1) * t * jacobi_eval(m, g.odd_jacobi(), s)
    }
}

/// Orthonormal generalized Gegenbauer polynomials (unnormalized weight)
/// built from the two orthonormal Jacobi families.
#[derive(Debug, Clone)]
pub struct OrthonormalGenGegenbauer {
    params: GenGegenParams,
    even: OrthonormalJacobi,
    odd: OrthonormalJacobi,
    max_degree: usize,
    scale_even: f64,
    scale_odd: f64,
}

impl OrthonormalGenGegenbauer {
    pub fn new(max_degree: usize, params: GenGegenParams) -> Result<Self> {
        if params.lambda + params.mu == 0.0 && max_degree >= 1 {
            return Err(Error::DegenerateNorm { degree: 1 });
        }
        let sum = params.lambda + params.mu;
        Ok(Self {
            params,
            even: OrthonormalJacobi::new(max_degree / 2, params.even_jacobi()),
            odd: OrthonormalJacobi::new(max_degree.saturating_sub(1) / 2, params.odd_jacobi()),
            max_degree,
            scale_even: exp(0.5 * sum * core::f64::consts::LN_2),
            scale_odd: exp(0.5 * (sum + 1.0) * core::f64::consts::LN_2),
        })
    }

    pub fn params(&self) -> GenGegenParams {
        self.params
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Writes `C̃_0(t), …, C̃_m(t)` into `out`, `m = out.len() - 1`.
    pub fn eval_into(&self, t: f64, out: &mut [f64], scratch: &mut Vec<f64>) {
        let m = out.len().saturating_sub(1);
        assert!(m <= self.max_degree, "degree beyond precomputed range");
        if out.is_empty() {
            return;
        }
        let s = 2.0 * t * t - 1.0;
        scratch.clear();
        scratch.resize(m / 2 + 1, 0.0);
        self.even.eval_into(s, scratch);
        for (k, v) in scratch.iter().enumerate() {
            out[2 * k] = self.scale_even * v;
        }
        if m >= 1 {
            let odd_len = (m - 1) / 2 + 1;
            scratch.clear();
            scratch.resize(odd_len, 0.0);
            self.odd.eval_into(s, scratch);
            for (k, v) in scratch.iter().enumerate() {
                out[2 * k + 1] = self.scale_odd * t * v;
            }
        }
    }

    pub fn eval_all(&self, t: f64) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.max_degree + 1];
        let mut scratch = Vec::new();
        self.eval_into(t, &mut out, &mut scratch);
        out
    }
}

/// `C̃_n^{(λ,μ)}(t)`, orthonormal with respect to the unnormalized weight
/// `w_{λ,μ}`. Rejects `λ = μ = 0` for `n >= 1`, where `C_n^{(0,0)} ≡ 0`.
pub fn gen_gegenbauer_orthonormal(n: usize, g: GenGegenParams, t: f64) -> Result<f64> {
    if g.lambda + g.mu == 0.0 && n >= 1 {
        return Err(Error::DegenerateNorm { degree: n });
    }
    let m = n / 2;
    let s = 2.0 * t * t - 1.0;
    let sum = g.lambda + g.mu;
    let v = if n.is_multiple_of(2) {
        let p = g.even_jacobi();
        exp(0.5 * sum * core::f64::consts::LN_2) * jacobi_eval(m, p, s) / sqrt(jacobi_l2norm(m, p))
    } else {
        let p = g.odd_jacobi();
        exp(0.5 * (sum + 1.0) * core::f64::consts::LN_2) * t * jacobi_eval(m, p, s) / sqrt(jacobi_l2norm(m, p))
    };
    if !v.is_finite() {
        return Err(Error::DegenerateNorm { degree: n });
    }
    Ok(v)
}

/// Same polynomial, orthonormal for the probability measure
/// `w_{λ,μ} / ∫ w_{λ,μ}`. This is the convention of the product formula
/// and of the pole identities.
pub fn gen_gegenbauer_orthonormal_normalized(n: usize, g: GenGegenParams, t: f64) -> Result<f64> {
    Ok(gen_gegenbauer_orthonormal(n, g, t)? * sqrt(g.total_mass()))
}

/// Quantities of the large-degree asymptotic formula for `P_n^{(α,β)}(cos θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticFrame {
    pub big_n: f64,
    pub tau: f64,
    pub theta: f64,
}

impl AsymptoticFrame {
    pub fn new(n: usize, p: JacobiParams, theta: f64) -> Self {
        Self {
            big_n: n as f64 + 0.5 * (p.alpha + p.beta + 1.0),
            tau: -0.5 * PI * (p.alpha + 0.5),
            theta,
        }
    }

    /// Phase shifted by `πμ/2`.
    pub fn gamma(&self, mu: f64) -> f64 {
        self.tau + 0.5 * PI * mu
    }
}

/// Main term of the classical asymptotic formula, valid for
/// `1/n <= θ <= π - 1/n`; no remainder is included.
pub fn szego_main_term(n: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", 0.0, "asymptotic formula needs n >= 1"));
    }
    let inv = 1.0 / n as f64;
    if !(theta >= inv && theta <= PI - inv) {
        return Err(invalid("theta", theta, "outside [1/n, π - 1/n]"));
    }
    let frame = AsymptoticFrame::new(n, p, theta);
    let amp = pow(PI * n as f64, -0.5) * pow(sin(0.5 * theta), -p.alpha - 0.5) * pow(cos(0.5 * theta), -p.beta - 0.5);
    Ok(amp * cos(frame.big_n * theta + frame.tau))
}

/// `n^{-1/2} (1 - t + n^{-2})^{-(α+1/2)/2}`: the pointwise Jacobi bound on
/// `[0, 1]` with its constant set to one. Use the reflection
/// `P_n^{(α,β)}(t) = (-1)^n P_n^{(β,α)}(-t)` on `[-1, 0]`.
pub fn jacobi_upper_bound(n: usize, alpha: f64, t: f64) -> f64 {
    let nf = n.max(1) as f64;
    pow(nf, -0.5) * pow(1.0 - t + 1.0 / (nf * nf), -0.5 * (alpha + 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jp(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
        assert!(JacobiParams::new(0.0, -1.5).is_err());
        assert!(JacobiParams::new(f64::NAN, 0.0).is_err());
        assert!(GenGegenParams::new(-0.1, 0.0).is_err());
        assert!(gegenbauer_eval(3, 0.0, 0.2).is_err());
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(jacobi_eval(0, jp(0.3, 0.9), 0.7), 1.0);
        assert!((jacobi_eval(2, jp(1.0, 0.0), 1.0) - 3.0).abs() < 1e-14);
        assert!((gegenbauer_eval(2, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((gegenbauer_eval(1, 0.5, 0.2).unwrap() - 0.2).abs() < 1e-15);
        let g = GenGegenParams::new(0.5, 0.5).unwrap();
        assert!((gen_gegenbauer_eval(1, g, 0.7) - 0.7).abs() < 1e-15);
        assert_eq!(gen_gegenbauer_eval(0, g, -0.2), 1.0);
    }

    #[test]
    fn l2norm_small_cases() {
        assert!((jacobi_l2norm(0, jp(0.0, 0.0)) - 2.0).abs() < 1e-14);
        assert!((jacobi_l2norm(1, jp(0.0, 0.0)) - 2.0 / 3.0).abs() < 1e-14);
        // α + β = -1 goes through the special first step.
        let p = jp(-0.5, -0.5);
        assert!((jacobi_l2norm(0, p) - PI).abs() < 1e-13);
        assert!((jacobi_l2norm(1, p) - PI / 8.0).abs() < 1e-13);
    }

    #[test]
    fn orthonormal_matches_scaled_classical() {
        let p = jp(1.3, -0.4);
        let on = OrthonormalJacobi::new(40, p);
        let vals = on.eval_all(0.37);
        for (k, v) in vals.iter().enumerate() {
            let expect = jacobi_eval(k, p, 0.37) / sqrt(jacobi_l2norm(k, p));
            assert!((v - expect).abs() <= 1e-12 * expect.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn degenerate_gen_gegenbauer_rejected() {
        let g = GenGegenParams::new(0.0, 0.0).unwrap();
        assert!(gen_gegenbauer_orthonormal(0, g, 0.3).is_ok());
        assert!(matches!(
            gen_gegenbauer_orthonormal(2, g, 0.3),
            Err(Error::DegenerateNorm { degree: 2 })
        ));
        assert!(OrthonormalGenGegenbauer::new(3, g).is_err());
        assert_eq!(gen_gegenbauer_eval(2, g, 0.3), 0.0);
    }

    #[test]
    fn szego_window_and_value() {
        let p = jp(0.0, 0.0);
        assert!(szego_main_term(20, p, 0.01).is_err());
        assert!(szego_main_term(20, p, PI - 0.01).is_err());
        let v = szego_main_term(20, p, PI / 2.0).unwrap();
        let expect = pow(PI, -0.5) * pow(20.0, -0.5) * sqrt(2.0) * cos(20.5 * PI / 2.0 - PI / 4.0);
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn upper_bound_arithmetic() {
        let v = jacobi_upper_bound(10, 0.0, 0.0);
        assert!((v - pow(10.0, -0.5) * pow(1.01, -0.25)).abs() < 1e-16);
        assert_eq!(jacobi_upper_bound(1, -0.5, 0.3), 1.0);
    }
}
