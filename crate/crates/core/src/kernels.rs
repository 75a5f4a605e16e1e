//! Projection and Cesàro kernels on the sphere, ball and simplex, the
//! generalized Gegenbauer product formula, and application of the Cesàro
//! operator to sampled functions.
//!
//! Every measure here is normalized to total mass one, so all kernels
//! reproduce constants: `∫ K_n^δ(x, y) dμ(y) = 1`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::cesaro::{cesaro_weights, CesaroOrder};
use crate::error::{invalid, Error, Result};
use crate::math::{binomial, cos, sqrt, CompensatedSum};
use crate::orthopoly::{gegenbauer_eval, jacobi_eval, jacobi_l2norm, GenGegenParams, JacobiParams, OrthonormalJacobi};
use crate::quadrature::{product_measure, sphere_product_rule, ProductRule, WeightFactorForm};
use crate::weight::ReflectionWeight;

const ON_DOMAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    Sphere,
    Ball,
    Simplex,
}

impl Domain {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Sphere => "sphere",
            Self::Ball => "ball",
            Self::Simplex => "simplex",
        }
    }
}

impl core::fmt::Display for Domain {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated point of `S^d` (`d+1` coordinates), `B^d` or `T^d` (`d`
/// coordinates each).
#[derive(Debug, Clone, PartialEq)]
pub struct DomainPoint {
    domain: Domain,
    coords: Vec<f64>,
}

impl DomainPoint {
    pub fn new(domain: Domain, coords: &[f64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, got: 0 });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::OffDomain {
                domain: domain.name(),
                deviation: f64::INFINITY,
            });
        }
        let sq: f64 = coords.iter().map(|c| c * c).sum();
        let deviation = match domain {
            Domain::Sphere => (sqrt(sq) - 1.0).abs(),
            Domain::Ball => (sqrt(sq) - 1.0).max(0.0),
            Domain::Simplex => {
                let neg = coords.iter().fold(0.0f64, |m, &c| m.max(-c));
                let over = (coords.iter().sum::<f64>() - 1.0).max(0.0);
                neg.max(over)
            }
        };
        if deviation > ON_DOMAIN_TOL {
            return Err(Error::OffDomain {
                domain: domain.name(),
                deviation,
            });
        }
        Ok(Self {
            domain,
            coords: coords.to_vec(),
        })
    }

    pub fn sphere(coords: &[f64]) -> Result<Self> {
        Self::new(Domain::Sphere, coords)
    }

    pub fn ball(coords: &[f64]) -> Result<Self> {
        Self::new(Domain::Ball, coords)
    }

    pub fn simplex(coords: &[f64]) -> Result<Self> {
        Self::new(Domain::Simplex, coords)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Dimension `d` of the domain the point lives on.
    pub fn dim(&self) -> usize {
        match self.domain {
            Domain::Sphere => self.coords.len() - 1,
            _ => self.coords.len(),
        }
    }

    /// The associated point of `S^d`: the point itself on the sphere,
    /// `(x, sqrt(1-‖x‖²))` on the ball, `(sqrt(x_1), …, sqrt(1-|x|))` on the
    /// simplex.
    pub fn lift(&self) -> Vec<f64> {
        match self.domain {
            Domain::Sphere => self.coords.clone(),
            Domain::Ball => {
                let sq: f64 = self.coords.iter().map(|c| c * c).sum();
                let mut v = self.coords.clone();
                v.push(sqrt((1.0 - sq).max(0.0)));
                v
            }
            Domain::Simplex => {
                let total: f64 = self.coords.iter().sum();
                let mut v: Vec<f64> = self.coords.iter().map(|&c| sqrt(c.max(0.0))).collect();
                v.push(sqrt((1.0 - total).max(0.0)));
                v
            }
        }
    }
}

/// Geometric quantities of a pair `(x, y)` entering the kernel integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGeometry {
    pub domain: Domain,
    /// Lifted `x` (on the simplex this is `ξ`).
    pub x_lift: Vec<f64>,
    /// Lifted `y` (on the simplex this is `ζ`).
    pub y_lift: Vec<f64>,
}

impl KernelGeometry {
    pub fn new(x: &DomainPoint, y: &DomainPoint) -> Result<Self> {
        if x.domain != y.domain {
            return Err(Error::Unsupported("points on different domains"));
        }
        if x.coords.len() != y.coords.len() {
            return Err(Error::LengthMismatch {
                expected: x.coords.len(),
                got: y.coords.len(),
            });
        }
        Ok(Self {
            domain: x.domain,
            x_lift: x.lift(),
            y_lift: y.lift(),
        })
    }

    /// Coefficients of the linear form: `x_i y_i` on the sphere and ball,
    /// `sqrt(x_i y_i)` on the simplex.
    pub fn coefficients(&self) -> Vec<f64> {
        self.x_lift.iter().zip(&self.y_lift).map(|(a, b)| a * b).collect()
    }

    /// `u(x,y,t) = Σ x_i y_i t_i`.
    pub fn u(&self, t: &[f64]) -> f64 {
        self.coefficients().iter().zip(t).map(|(c, t)| c * t).sum()
    }

    /// `z(x,y,t) = Σ sqrt(x_i y_i) t_i` (simplex); same linear form as `u`
    /// in lifted coordinates.
    pub fn z(&self, t: &[f64]) -> f64 {
        self.u(t)
    }

    pub fn xbar(&self) -> Vec<f64> {
        self.x_lift.iter().map(|v| v.abs()).collect()
    }

    pub fn ybar(&self) -> Vec<f64> {
        self.y_lift.iter().map(|v| v.abs()).collect()
    }

    /// `‖x̄ - ȳ‖`, which on the simplex is `‖ξ - ζ‖`.
    pub fn bar_distance(&self) -> f64 {
        sqrt(
            self.x_lift
                .iter()
                .zip(&self.y_lift)
                .map(|(a, b)| (a.abs() - b.abs()) * (a.abs() - b.abs()))
                .sum(),
        )
    }
}

fn check_weight(w: &ReflectionWeight, p: &DomainPoint, domain: Domain) -> Result<()> {
    if p.domain != domain {
        return Err(Error::OffDomain {
            domain: domain.name(),
            deviation: f64::INFINITY,
        });
    }
    if p.dim() != w.d() {
        return Err(Error::LengthMismatch {
            expected: w.d(),
            got: p.dim(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Argument {
    Linear,
    /// The one-dimensional kernel is evaluated at `2u² - 1`.
    Squared,
}

/// Shared engine: projection kernels `P_k`, `k ≤ max_degree`, written as
/// `∫ M p̃_k(1) p̃_k(arg(u)) dμ(t)` over a normalized product measure.
#[derive(Debug, Clone)]
struct ZonalEngine {
    rule: ProductRule,
    basis: OrthonormalJacobi,
    endpoint: Vec<f64>,
    arg: Argument,
    max_degree: usize,
}

impl ZonalEngine {
    fn new(forms: &[WeightFactorForm], p: JacobiParams, max_degree: usize, arg: Argument) -> Result<Self> {
        let cap = match arg {
            Argument::Linear => max_degree,
            Argument::Squared => 2 * max_degree,
        };
        let mut rule = product_measure(forms, cap)?;
        if arg == Argument::Squared {
            // The integrand is even under t ↦ -t and every axis is symmetric.
            rule.axes[0] = rule.axes[0].folded();
        }
        let basis = OrthonormalJacobi::new(max_degree, p);
        let mass = p.total_mass();
        let endpoint = basis.eval_all(1.0).into_iter().map(|v| mass * v).collect();
        Ok(Self {
            rule,
            basis,
            endpoint,
            arg,
            max_degree,
        })
    }

    fn map(&self, u: f64) -> f64 {
        match self.arg {
            Argument::Linear => u,
            Argument::Squared => 2.0 * u * u - 1.0,
        }
    }

    fn profile(&self, coeffs: &[f64], nmax: usize) -> Vec<f64> {
        assert!(nmax <= self.max_degree);
        let mut acc = alloc::vec![0.0; nmax + 1];
        self.rule.accumulate_linear(coeffs, 0.0, &mut acc, |u, buf| {
            self.basis.eval_into(self.map(u), buf);
        });
        acc.iter().zip(&self.endpoint).map(|(m, e)| m * e).collect()
    }

    fn integrated(&self, coeffs: &[f64], n: usize, order: CesaroOrder) -> f64 {
        assert!(n <= self.max_degree);
        let w: Vec<f64> = cesaro_weights(n, order)
            .iter()
            .zip(&self.endpoint)
            .map(|(c, e)| c * e)
            .collect();
        let mut buf = alloc::vec![0.0; n + 1];
        let mut out = [0.0];
        self.rule.accumulate_linear(coeffs, 0.0, &mut out, |u, o| {
            self.basis.eval_into(self.map(u), &mut buf);
            o[0] = w.iter().zip(&buf).map(|(a, b)| a * b).sum();
        });
        out[0]
    }
}

fn sphere_forms(w: &ReflectionWeight) -> Vec<WeightFactorForm> {
    w.kappa().iter().map(|&k| WeightFactorForm::sphere(k)).collect()
}

fn sphere_lambda(w: &ReflectionWeight) -> Result<f64> {
    let lambda = w.lambda();
    if !(lambda > 0.0) {
        return Err(Error::Unsupported(
            "λ_κ = 0 (d = 1, κ = 0): use the classical circle kernel",
        ));
    }
    Ok(lambda)
}

/// Cesàro kernels of `h_κ²` on `S^d` up to a fixed degree.
#[derive(Debug, Clone)]
pub struct SphereKernel {
    w: ReflectionWeight,
    engine: ZonalEngine,
}

impl SphereKernel {
    pub fn new(w: &ReflectionWeight, max_degree: usize) -> Result<Self> {
        let lambda = sphere_lambda(w)?;
        Ok(Self {
            w: w.clone(),
            engine: ZonalEngine::new(
                &sphere_forms(w),
                JacobiParams::symmetric(lambda)?,
                max_degree,
                Argument::Linear,
            )?,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.engine.max_degree
    }

    fn coeffs(&self, x: &DomainPoint, y: &DomainPoint) -> Result<Vec<f64>> {
        check_weight(&self.w, x, Domain::Sphere)?;
        check_weight(&self.w, y, Domain::Sphere)?;
        Ok(KernelGeometry::new(x, y)?.coefficients())
    }

    /// `P_k(h_κ²; x, y)` for `k = 0..=max_degree`.
    pub fn profile(&self, x: &DomainPoint, y: &DomainPoint) -> Result<Vec<f64>> {
        let c = self.coeffs(x, y)?;
        Ok(self.engine.profile(&c, self.engine.max_degree))
    }

    /// Integral of the one-dimensional Cesàro kernel against the product
    /// measure.
    pub fn eval(&self, n: usize, order: CesaroOrder, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
        if n > self.engine.max_degree {
            return Err(Error::ResolutionShortfall {
                required: n,
                available: self.engine.max_degree,
            });
        }
        let c = self.coeffs(x, y)?;
        Ok(self.engine.integrated(&c, n, order))
    }
}

/// `P_n(h_κ²; x, y) = (n+λ)/λ ∫ C_n^λ(u(x,y,t)) dμ_κ(t)`.
pub fn sphere_proj_kernel(n: usize, w: &ReflectionWeight, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
    Ok(sphere_proj_profile(n, w, x, y)?[n])
}

/// `P_k(h_κ²; x, y)`, `k = 0..=n`, from the Gegenbauer form of the kernel.
pub fn sphere_proj_profile(n: usize, w: &ReflectionWeight, x: &DomainPoint, y: &DomainPoint) -> Result<Vec<f64>> {
    let lambda = sphere_lambda(w)?;
    check_weight(w, x, Domain::Sphere)?;
    check_weight(w, y, Domain::Sphere)?;
    let c = KernelGeometry::new(x, y)?.coefficients();
    let rule = product_measure(&sphere_forms(w), n)?;
    let mut acc = alloc::vec![0.0; n + 1];
    rule.accumulate_linear(&c, 0.0, &mut acc, |u, buf| {
        // C_k^λ(u) by its recurrence, all degrees at once.
        buf[0] = 1.0;
        if buf.len() > 1 {
            buf[1] = 2.0 * lambda * u;
        }
        for k in 1..buf.len().saturating_sub(1) {
            let kf = k as f64;
            buf[k + 1] = (2.0 * (kf + lambda) * u * buf[k] - (kf + 2.0 * lambda - 1.0) * buf[k - 1]) / (kf + 1.0);
        }
    });
    Ok(acc
        .iter()
        .enumerate()
        .map(|(k, v)| (k as f64 + lambda) / lambda * v)
        .collect())
}

/// Which of the two equivalent evaluation orders to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelPath {
    /// Integrate the one-dimensional Cesàro kernel over the product measure.
    #[default]
    Integrated,
    /// Cesàro-sum the projection kernels.
    Summed,
}

/// `K_n^δ(h_κ²; x, y)` on `S^d`.
pub fn sphere_cesaro_kernel(
    n: usize,
    order: CesaroOrder,
    w: &ReflectionWeight,
    x: &DomainPoint,
    y: &DomainPoint,
) -> Result<f64> {
    sphere_cesaro_kernel_path(n, order, w, x, y, KernelPath::Integrated)
}

pub fn sphere_cesaro_kernel_path(
    n: usize,
    order: CesaroOrder,
    w: &ReflectionWeight,
    x: &DomainPoint,
    y: &DomainPoint,
    path: KernelPath,
) -> Result<f64> {
    match path {
        KernelPath::Integrated => SphereKernel::new(w, n)?.eval(n, order, x, y),
        KernelPath::Summed => {
            let prof = sphere_proj_profile(n, w, x, y)?;
            crate::cesaro::cesaro_mean(&prof, n, order)
        }
    }
}

/// The `λ_κ = 0` corner: classical kernel on `S^1`, with
/// `P_0 = 1` and `P_k(x, y) = 2 cos(kθ)`, `cos θ = ⟨x, y⟩`.
pub fn circle_classical_kernel(n: usize, order: CesaroOrder, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
    if x.domain != Domain::Sphere || y.domain != Domain::Sphere || x.dim() != 1 || y.dim() != 1 {
        return Err(Error::Unsupported("classical circle kernel needs points of S^1"));
    }
    let c: f64 = x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).sum();
    let c = c.clamp(-1.0, 1.0);
    let mut prof = alloc::vec![0.0; n + 1];
    let (mut prev, mut cur) = (1.0, c);
    prof[0] = 1.0;
    for v in prof.iter_mut().skip(1) {
        *v = 2.0 * cur;
        let next = 2.0 * c * cur - prev;
        prev = cur;
        cur = next;
    }
    crate::cesaro::cesaro_mean(&prof, n, order)
}

/// Cesàro kernels of `W_κ^B` on `B^d`, through the sphere `S^d`.
#[derive(Debug, Clone)]
pub struct BallKernel {
    sphere: SphereKernel,
}

impl BallKernel {
    pub fn new(w: &ReflectionWeight, max_degree: usize) -> Result<Self> {
        Ok(Self {
            sphere: SphereKernel::new(w, max_degree)?,
        })
    }

    fn coeff_pair(&self, x: &DomainPoint, y: &DomainPoint) -> Result<(Vec<f64>, Vec<f64>)> {
        check_weight(&self.sphere.w, x, Domain::Ball)?;
        check_weight(&self.sphere.w, y, Domain::Ball)?;
        let c = KernelGeometry::new(x, y)?.coefficients();
        let mut r = c.clone();
        if let Some(last) = r.last_mut() {
            *last = -*last;
        }
        Ok((c, r))
    }

    pub fn profile(&self, x: &DomainPoint, y: &DomainPoint) -> Result<Vec<f64>> {
        let (c, r) = self.coeff_pair(x, y)?;
        let e = &self.sphere.engine;
        let a = e.profile(&c, e.max_degree);
        let b = e.profile(&r, e.max_degree);
        Ok(a.iter().zip(&b).map(|(p, q)| 0.5 * (p + q)).collect())
    }

    pub fn eval(&self, n: usize, order: CesaroOrder, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
        if n > self.sphere.max_degree() {
            return Err(Error::ResolutionShortfall {
                required: n,
                available: self.sphere.max_degree(),
            });
        }
        let (c, r) = self.coeff_pair(x, y)?;
        let e = &self.sphere.engine;
        Ok(0.5 * (e.integrated(&c, n, order) + e.integrated(&r, n, order)))
    }
}

/// `K_n^δ(W_κ^B; x, y)`: the average of the sphere kernels at
/// `(y, ±sqrt(1-‖y‖²))`.
pub fn ball_cesaro_kernel(
    n: usize,
    order: CesaroOrder,
    w: &ReflectionWeight,
    x: &DomainPoint,
    y: &DomainPoint,
) -> Result<f64> {
    BallKernel::new(w, n)?.eval(n, order, x, y)
}

/// Cesàro kernels of `W_κ^T` on `T^d`.
#[derive(Debug, Clone)]
pub struct SimplexKernel {
    w: ReflectionWeight,
    engine: ZonalEngine,
}

impl SimplexKernel {
    pub fn new(w: &ReflectionWeight, max_degree: usize) -> Result<Self> {
        let forms: Vec<WeightFactorForm> = w.kappa().iter().map(|&k| WeightFactorForm::symmetric(k)).collect();
        let p = JacobiParams::new(w.lambda() - 0.5, -0.5)?;
        Ok(Self {
            w: w.clone(),
            engine: ZonalEngine::new(&forms, p, max_degree, Argument::Squared)?,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.engine.max_degree
    }

    fn coeffs(&self, x: &DomainPoint, y: &DomainPoint) -> Result<Vec<f64>> {
        check_weight(&self.w, x, Domain::Simplex)?;
        check_weight(&self.w, y, Domain::Simplex)?;
        Ok(KernelGeometry::new(x, y)?.coefficients())
    }

    pub fn profile(&self, x: &DomainPoint, y: &DomainPoint) -> Result<Vec<f64>> {
        let c = self.coeffs(x, y)?;
        Ok(self.engine.profile(&c, self.engine.max_degree))
    }

    pub fn eval(&self, n: usize, order: CesaroOrder, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
        if n > self.engine.max_degree {
            return Err(Error::ResolutionShortfall {
                required: n,
                available: self.engine.max_degree,
            });
        }
        let c = self.coeffs(x, y)?;
        Ok(self.engine.integrated(&c, n, order))
    }
}

/// `K_n^δ(W_κ^T; x, y)` as the integral of
/// `K_n^δ(w^{(λ_κ-1/2, -1/2)}; 1, 2z² - 1)` over symmetric factors.
pub fn simplex_cesaro_kernel(
    n: usize,
    order: CesaroOrder,
    w: &ReflectionWeight,
    x: &DomainPoint,
    y: &DomainPoint,
) -> Result<f64> {
    SimplexKernel::new(w, n)?.eval(n, order, x, y)
}

/// Projection kernel on `T^d` through `P_n^{(λ,-1/2)}(2z²-1) = a_n P_{2n}^{(λ,λ)}(z)`.
pub fn simplex_proj_kernel_quadratic(n: usize, w: &ReflectionWeight, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
    check_weight(w, x, Domain::Simplex)?;
    check_weight(w, y, Domain::Simplex)?;
    let alpha = w.lambda() - 0.5;
    let half = JacobiParams::new(alpha, -0.5)?;
    let full = JacobiParams::symmetric(w.lambda())?;
    let forms: Vec<WeightFactorForm> = w.kappa().iter().map(|&k| WeightFactorForm::symmetric(k)).collect();
    let rule = product_measure(&forms, 2 * n)?;
    let c = KernelGeometry::new(x, y)?.coefficients();
    let a_n = jacobi_eval(n, half, 1.0) / jacobi_eval(2 * n, full, 1.0);
    let inner = rule.integrate_linear(&c, 0.0, |z| jacobi_eval(2 * n, full, z));
    let h = jacobi_l2norm(n, half);
    Ok(half.total_mass() * jacobi_eval(n, half, 1.0) * a_n * inner / h)
}

/// Right-hand side of the product formula for `C̃_n^{(λ,μ)}(x) C̃_n^{(λ,μ)}(y)`
/// (polynomials orthonormal for the normalized weight).
pub fn gen_gegen_product_rhs(n: usize, g: GenGegenParams, x: f64, y: f64) -> Result<f64> {
    let sum = g.lambda() + g.mu();
    if sum == 0.0 {
        return Err(invalid("lambda+mu", 0.0, "product formula needs λ + μ > 0"));
    }
    for v in [x, y] {
        if !(v.abs() <= 1.0) {
            return Err(Error::OffDomain {
                domain: "interval [-1,1]",
                deviation: v.abs() - 1.0,
            });
        }
    }
    let rule = product_measure(
        &[
            WeightFactorForm::sphere(g.mu()),
            WeightFactorForm::symmetric(g.lambda()),
        ],
        n,
    )?;
    let c = [x * y, sqrt((1.0 - x * x) * (1.0 - y * y))];
    let scale = (n as f64 + sum) / sum;
    let v = rule.integrate_linear(&c, 0.0, |u| gegenbauer_eval(n, sum, u).unwrap_or(f64::NAN));
    Ok(scale * v)
}

/// `dim H_n^d(h_κ²) = binom(n+d, n) - binom(n+d-2, n-2)`.
pub fn hspace_dimension(n: usize, d: usize) -> u64 {
    let (n, d) = (n as i64, d as i64);
    binomial(n + d, n) - binomial(n + d - 2, n - 2)
}

/// A cubature rule on one of the domains, normalized to mass one for its
/// weight and exact for polynomials of degree `exactness_degree` in the
/// domain coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainRule {
    pub domain: Domain,
    pub d: usize,
    /// Flattened points, `dim` coordinates each.
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl DomainRule {
    pub fn point_dim(&self) -> usize {
        match self.domain {
            Domain::Sphere => self.d + 1,
            _ => self.d,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let k = self.point_dim();
        &self.points[i * k..(i + 1) * k]
    }

    /// Samples `f` at every point, in order.
    pub fn sample<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> Vec<f64> {
        (0..self.len()).map(|i| f(self.point(i))).collect()
    }

    pub fn integrate_samples(&self, samples: &[f64]) -> f64 {
        let mut s = CompensatedSum::default();
        for (w, v) in self.weights.iter().zip(samples) {
            s.add(w * v);
        }
        s.value()
    }
}

/// Rule on `S^d`, `B^d` or `T^d` for `d ∈ {1, 2}` induced by the sphere
/// product rule: ball points are the first `d` coordinates, simplex points
/// their squares; coincident images are merged.
pub fn domain_rule(domain: Domain, w: &ReflectionWeight, resolution: usize) -> Result<DomainRule> {
    let d = w.d();
    let sr = sphere_product_rule(d, resolution, w)?;
    let sphere_exact = sr.exactness_degree;
    if domain == Domain::Sphere {
        return Ok(DomainRule {
            domain,
            d,
            points: sr.points,
            weights: sr.weights,
            exactness_degree: sphere_exact,
        });
    }
    let mut merged: BTreeMap<Vec<u64>, (Vec<f64>, f64)> = BTreeMap::new();
    let mut order: Vec<Vec<u64>> = Vec::new();
    for i in 0..sr.len() {
        let y = sr.point(i);
        let image: Vec<f64> = match domain {
            Domain::Ball => y[..d].to_vec(),
            _ => y[..d].iter().map(|v| v * v).collect(),
        };
        let key: Vec<u64> = image.iter().map(|v| (v + 0.0).to_bits()).collect();
        let entry = merged.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            (image, 0.0)
        });
        entry.1 += sr.weights[i];
    }
    let mut points = Vec::with_capacity(order.len() * d);
    let mut weights = Vec::with_capacity(order.len());
    for key in &order {
        let (p, wt) = &merged[key];
        points.extend_from_slice(p);
        weights.push(*wt);
    }
    let exactness_degree = match domain {
        Domain::Ball => sphere_exact,
        _ => sphere_exact / 2,
    };
    Ok(DomainRule {
        domain,
        d,
        points,
        weights,
        exactness_degree,
    })
}

/// Kernel evaluator for any of the three domains.
#[derive(Debug, Clone)]
pub enum DomainKernel {
    Sphere(SphereKernel),
    Ball(BallKernel),
    Simplex(SimplexKernel),
}

impl DomainKernel {
    pub fn new(domain: Domain, w: &ReflectionWeight, max_degree: usize) -> Result<Self> {
        Ok(match domain {
            Domain::Sphere => Self::Sphere(SphereKernel::new(w, max_degree)?),
            Domain::Ball => Self::Ball(BallKernel::new(w, max_degree)?),
            Domain::Simplex => Self::Simplex(SimplexKernel::new(w, max_degree)?),
        })
    }

    pub fn profile(&self, x: &DomainPoint, y: &DomainPoint) -> Result<Vec<f64>> {
        match self {
            Self::Sphere(k) => k.profile(x, y),
            Self::Ball(k) => k.profile(x, y),
            Self::Simplex(k) => k.profile(x, y),
        }
    }

    pub fn eval(&self, n: usize, order: CesaroOrder, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
        match self {
            Self::Sphere(k) => k.eval(n, order, x, y),
            Self::Ball(k) => k.eval(n, order, x, y),
            Self::Simplex(k) => k.eval(n, order, x, y),
        }
    }
}

/// `S_n^δ f(x)` for `f` sampled on `rule`. The rule must integrate
/// `f · K_n^δ(x, ·)` exactly for `f` of degree `n`, i.e. be exact to `2n`.
pub fn apply_cesaro_operator(
    samples: &[f64],
    rule: &DomainRule,
    n: usize,
    order: CesaroOrder,
    w: &ReflectionWeight,
    x: &DomainPoint,
) -> Result<f64> {
    if samples.len() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            got: samples.len(),
        });
    }
    if rule.exactness_degree < 2 * n {
        return Err(Error::ResolutionShortfall {
            required: 2 * n,
            available: rule.exactness_degree,
        });
    }
    if x.domain != rule.domain || w.d() != rule.d {
        return Err(Error::Unsupported(
            "point, weight and rule must share domain and dimension",
        ));
    }
    let kernel = DomainKernel::new(rule.domain, w, n)?;
    let mut s = CompensatedSum::default();
    for (i, (wt, f)) in rule.weights.iter().zip(samples).enumerate() {
        let y = DomainPoint {
            domain: rule.domain,
            coords: rule.point(i).to_vec(),
        };
        s.add(wt * f * kernel.eval(n, order, x, &y)?);
    }
    Ok(s.value())
}

/// The point `(cos θ, sin θ)` of `S^1`.
pub fn circle_point(theta: f64) -> DomainPoint {
    DomainPoint {
        domain: Domain::Sphere,
        coords: alloc::vec![cos(theta), crate::math::sin(theta)],
    }
}
