//! Pointwise kernel bounds, the main oscillatory-integral estimate,
//! Lebesgue-type norms, the lower-bound integrals with their asymptotics,
//! and growth-exponent fitting.

use alloc::vec::Vec;

use crate::cesaro::{CesaroOrder, GenGegenKernel, JacobiKernel};
use crate::error::{invalid, Error, Result};
use crate::kernels::{circle_classical_kernel, Domain, DomainKernel, DomainPoint, KernelGeometry};
use crate::math::{cos, exp, ln, ln_beta, ln_gamma, pow, sin, sqrt, PI};
use crate::orthopoly::{jacobi_eval, GenGegenParams, JacobiParams};
use crate::quadrature::{adaptive_with_breaks, product_measure, AdaptiveOptions, AdaptiveResult, WeightFactorForm};
use crate::weight::ReflectionWeight;

/// Degree, summation order and weight of a bound or norm evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    pub n: usize,
    pub order: CesaroOrder,
    pub w: ReflectionWeight,
}

impl BoundParams {
    pub fn new(n: usize, order: CesaroOrder, w: ReflectionWeight) -> Self {
        Self { n, order, w }
    }
}

fn inv_n(n: usize) -> f64 {
    1.0 / n.max(1) as f64
}

/// `∏ (c_j + s)^{-κ_j}` with `c_j` the coordinate products.
fn kappa_product(kappa: &[f64], coeffs: &[f64], shift: f64) -> f64 {
    kappa
        .iter()
        .zip(coeffs)
        .map(|(&k, &c)| if k == 0.0 { 1.0 } else { pow(c.abs() + shift, -k) })
        .product()
}

fn cesaro_terms(n: usize, delta: f64, w: &ReflectionWeight, coeffs: &[f64], dist: f64) -> f64 {
    let d = w.d() as f64;
    let nf = n.max(1) as f64;
    let h = inv_n(n);
    let t1 = kappa_product(w.kappa(), coeffs, h * dist + h * h)
        / (pow(nf, delta - 0.5 * (d - 1.0)) * pow(dist + h, delta + 0.5 * (d + 1.0)));
    let t2 = kappa_product(w.kappa(), coeffs, dist * dist + h * h) / (nf * pow(dist + h, d + 1.0));
    t1 + t2
}

fn projection_term(n: usize, w: &ReflectionWeight, coeffs: &[f64], dist: f64) -> f64 {
    let d = w.d() as f64;
    let nf = n.max(1) as f64;
    let h = inv_n(n);
    kappa_product(w.kappa(), coeffs, h * dist + h * h) / (pow(nf, -0.5 * (d - 1.0)) * pow(dist + h, 0.5 * (d - 1.0)))
}

fn geometry(domain: Domain, w: &ReflectionWeight, x: &DomainPoint, y: &DomainPoint) -> Result<(Vec<f64>, f64)> {
    for p in [x, y] {
        if p.domain() != domain {
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
    }
    let g = KernelGeometry::new(x, y)?;
    Ok((g.coefficients(), g.bar_distance()))
}

/// Two-term pointwise bound for `|K_n^δ(h_κ²; x, y)|` with constant one.
/// The projection order uses [`bound_sphere_proj`].
pub fn bound_sphere_cesaro(bp: &BoundParams, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
    let (c, dist) = geometry(Domain::Sphere, &bp.w, x, y)?;
    Ok(match bp.order {
        CesaroOrder::Projection => projection_term(bp.n, &bp.w, &c, dist),
        CesaroOrder::Delta(delta) => cesaro_terms(bp.n, delta, &bp.w, &c, dist),
    })
}

/// Pointwise bound for `|P_n(h_κ²; x, y)|` with constant one.
pub fn bound_sphere_proj(n: usize, w: &ReflectionWeight, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
    let (c, dist) = geometry(Domain::Sphere, w, x, y)?;
    Ok(projection_term(n, w, &c, dist))
}

/// Simplex analogue of [`bound_sphere_cesaro`] in the lifted points `ξ, ζ`.
pub fn bound_simplex(bp: &BoundParams, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
    let (c, dist) = geometry(Domain::Simplex, &bp.w, x, y)?;
    Ok(match bp.order {
        CesaroOrder::Projection => projection_term(bp.n, &bp.w, &c, dist),
        CesaroOrder::Delta(delta) => cesaro_terms(bp.n, delta, &bp.w, &c, dist),
    })
}

pub fn bound_simplex_proj(n: usize, w: &ReflectionWeight, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
    let (c, dist) = geometry(Domain::Simplex, w, x, y)?;
    Ok(projection_term(n, w, &c, dist))
}

/// Both sides of the main estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainEstimate {
    pub lhs: f64,
    pub rhs: f64,
}

impl MainEstimate {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

/// Extra Gauss nodes per axis when smooth factors `φ_j` are present.
pub const SMOOTH_FACTOR_EXTRA_NODES: usize = 32;

/// Left side `|∫ P_n^{(α,β)}(Σ a_j t_j + x) ∏ φ_j(t_j)(1-t_j²)^{κ_j-1} dt|`
/// (unnormalized measure) and right side
/// `n^{α-2|κ|} ∏(|a_j| + n^{-1}r + n^{-2})^{-κ_j} (1 + n r)^{-α-1/2+|κ|}`,
/// `r = sqrt(1-|a|-|x|)`, with constant one.
pub fn main_estimate_check(
    n: usize,
    kappas: &[f64],
    a: &[f64],
    x: f64,
    p: JacobiParams,
    phis: Option<&[&dyn Fn(f64) -> f64]>,
) -> Result<MainEstimate> {
    let m = kappas.len();
    if m == 0 || a.len() != m {
        return Err(Error::LengthMismatch {
            expected: m.max(1),
            got: a.len(),
        });
    }
    if let Some(f) = phis {
        if f.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: f.len(),
            });
        }
    }
    for &k in kappas {
        if !(k > 0.0) {
            return Err(invalid("kappa", k, "main estimate needs every κ_j > 0"));
        }
    }
    for &aj in a {
        if aj == 0.0 || !aj.is_finite() {
            return Err(invalid("a", aj, "main estimate needs every a_j != 0"));
        }
    }
    let (alpha, beta) = (p.alpha(), p.beta());
    let kn: f64 = kappas.iter().sum();
    if alpha < beta {
        return Err(invalid("alpha", alpha, "main estimate needs α >= β"));
    }
    if alpha < kn - 0.5 {
        return Err(invalid("alpha", alpha, "main estimate needs α >= |κ| - 1/2"));
    }
    let a_norm: f64 = a.iter().map(|v| v.abs()).sum();
    let slack = 1.0 - a_norm - x.abs();
    if slack < -1e-14 {
        return Err(invalid("x", x, "main estimate needs |x| + Σ|a_j| <= 1"));
    }
    let r = sqrt(slack.max(0.0));

    let forms: Vec<WeightFactorForm> = kappas.iter().map(|&k| WeightFactorForm::symmetric(k)).collect();
    let scale: f64 = kappas
        .iter()
        .map(|&k| JacobiParams::new(k - 1.0, k - 1.0).map(|q| q.total_mass()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .product();
    let integral = match phis {
        None => {
            let rule = product_measure(&forms, n)?;
            rule.integrate_linear(a, x, |u| jacobi_eval(n, p, u))
        }
        Some(f) => {
            let rule = product_measure(&forms, n + 2 * SMOOTH_FACTOR_EXTRA_NODES)?;
            rule.integrate(|t| {
                let u: f64 = x + a.iter().zip(t).map(|(c, t)| c * t).sum::<f64>();
                let phi: f64 = f.iter().zip(t).map(|(g, &t)| g(t)).product();
                phi * jacobi_eval(n, p, u)
            })
        }
    };
    let lhs = (scale * integral).abs();

    let nf = n.max(1) as f64;
    let h = 1.0 / nf;
    let prod: f64 = kappas
        .iter()
        .zip(a)
        .map(|(&k, &aj)| pow(aj.abs() + h * r + h * h, -k))
        .product();
    let rhs = pow(nf, alpha - 2.0 * kn) * prod * pow(1.0 + nf * r, -alpha - 0.5 + kn);
    Ok(MainEstimate { lhs, rhs })
}

/// A norm value from adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub err_est: f64,
    pub converged: bool,
}

impl From<AdaptiveResult> for NormValue {
    fn from(r: AdaptiveResult) -> Self {
        Self {
            value: r.value,
            err_est: r.err_est,
            converged: r.converged,
        }
    }
}

/// Tolerance of the one-dimensional absolute-value integrals.
pub const TN_TOL: f64 = 1e-8;

fn uniform_breaks(a: f64, b: f64, count: usize) -> Vec<f64> {
    let count = count.max(1);
    (0..=count).map(|k| a + (b - a) * k as f64 / count as f64).collect()
}

/// `T_n^δ(w_{λ,μ}; t0) = ∫ |K_n^δ(w_{λ,μ}; s, t0)| w_{λ,μ}(s) ds`.
pub fn tn_delta(g: GenGegenParams, n: usize, order: CesaroOrder, t0: f64) -> Result<NormValue> {
    if !(t0.abs() <= 1.0) {
        return Err(invalid("t0", t0, "must lie in [-1, 1]"));
    }
    if n == 0 {
        return Ok(NormValue {
            value: 1.0,
            err_est: 0.0,
            converged: true,
        });
    }
    let kernel = GenGegenKernel::new(n, g)?;
    let frozen = kernel.freeze(n, order, t0);
    let (mut buf, mut scratch) = (Vec::new(), Vec::new());
    let mut breaks = uniform_breaks(-1.0, 0.0, n / 2 + 2);
    breaks.extend(uniform_breaks(0.0, 1.0, n / 2 + 2).into_iter().skip(1));
    let opts = AdaptiveOptions {
        abs_tol: TN_TOL,
        rel_tol: 1e-10,
        ..AdaptiveOptions::default()
    };
    let r = adaptive_with_breaks(
        |s| frozen.eval_with(s, &mut buf, &mut scratch).abs() * g.weight(s),
        &breaks,
        opts,
    );
    Ok(r.into())
}

/// Jacobi analogue `∫ |K_n^δ(w^{(α,β)}; s, t0)| w^{(α,β)}(s) ds`.
pub fn jacobi_tn_delta(p: JacobiParams, n: usize, order: CesaroOrder, t0: f64) -> Result<NormValue> {
    if !(t0.abs() <= 1.0) {
        return Err(invalid("t0", t0, "must lie in [-1, 1]"));
    }
    if n == 0 {
        return Ok(NormValue {
            value: 1.0,
            err_est: 0.0,
            converged: true,
        });
    }
    let kernel = JacobiKernel::new(n, p);
    let frozen = kernel.freeze(n, order, t0);
    let (mut buf, mut scratch) = (Vec::new(), Vec::new());
    let breaks = uniform_breaks(-1.0, 1.0, n + 4);
    let opts = AdaptiveOptions {
        abs_tol: TN_TOL,
        rel_tol: 1e-10,
        ..AdaptiveOptions::default()
    };
    let (a, b) = (p.alpha(), p.beta());
    let r = adaptive_with_breaks(
        |s| frozen.eval_with(s, &mut buf, &mut scratch).abs() * pow(1.0 - s, a) * pow(1.0 + s, b),
        &breaks,
        opts,
    );
    Ok(r.into())
}

/// Which coordinate axis, if any, a lifted point sits on.
fn pole_index(lift: &[f64]) -> Option<(usize, f64)> {
    let mut found = None;
    for (j, &v) in lift.iter().enumerate() {
        if v.abs() > 1e-14 {
            if found.is_some() {
                return None;
            }
            found = Some((j, v));
        }
    }
    found.filter(|(_, v)| (v.abs() - 1.0).abs() < 1e-12)
}

/// Relative tolerance of the generic angular Lebesgue integrals.
pub const LEBESGUE_TOL: f64 = 1e-6;

/// `Λ_n(x) = ∫ |K_n^δ(x, y)| dμ(y)` on `S^d`, `B^d` or `T^d`, `d ∈ {1, 2}`.
///
/// Coordinate poles reduce to one-dimensional integrals; the classical
/// circle (`d = 1`, `κ = 0`) uses its trigonometric kernel; everything else
/// is a nested adaptive integral in spherical angles with `resolution`
/// initial panels along each angle.
pub fn lebesgue_at_point(bp: &BoundParams, x: &DomainPoint, resolution: usize) -> Result<NormValue> {
    let n = bp.n;
    if resolution < 4 * n {
        return Err(Error::ResolutionShortfall {
            required: 4 * n,
            available: resolution,
        });
    }
    if x.dim() != bp.w.d() {
        return Err(Error::LengthMismatch {
            expected: bp.w.d(),
            got: x.dim(),
        });
    }
    if n == 0 {
        return Ok(NormValue {
            value: 1.0,
            err_est: 0.0,
            converged: true,
        });
    }
    let w = &bp.w;
    let domain = x.domain();
    if domain == Domain::Sphere && w.d() == 1 && w.lambda() == 0.0 {
        return circle_lebesgue(n, bp.order, resolution);
    }
    let lift = x.lift();
    if let Some((j, _)) = pole_index(&lift) {
        let kj = w.kappa()[j];
        match domain {
            Domain::Sphere | Domain::Ball => {
                let g = GenGegenParams::new(w.lambda() - kj, kj)?;
                return tn_delta(g, n, bp.order, 1.0);
            }
            Domain::Simplex => {
                let p = JacobiParams::new(w.lambda() - kj - 0.5, kj - 0.5)?;
                return jacobi_tn_delta(p, n, bp.order, 1.0);
            }
        }
    }
    angular_lebesgue(bp, x, resolution)
}

fn circle_lebesgue(n: usize, order: CesaroOrder, resolution: usize) -> Result<NormValue> {
    let x = crate::kernels::circle_point(0.0);
    let mut failure = None;
    let opts = AdaptiveOptions {
        abs_tol: TN_TOL,
        rel_tol: 1e-10,
        ..AdaptiveOptions::default()
    };
    let r = adaptive_with_breaks(
        |th| {
            let y = crate::kernels::circle_point(th);
            match circle_classical_kernel(n, order, &x, &y) {
                Ok(v) => v.abs() / PI,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        &uniform_breaks(0.0, PI, resolution),
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r.into())
}

fn angle_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    // Multiples of π/2 are always breakpoints.
    let quarter = 0.5 * PI;
    let quarters = libm::round((b - a) / quarter) as usize;
    let per = panels.div_ceil(quarters.max(1)).max(1);
    uniform_breaks(a, b, per * quarters.max(1))
}

fn angular_lebesgue(bp: &BoundParams, x: &DomainPoint, resolution: usize) -> Result<NormValue> {
    let w = &bp.w;
    let d = w.d();
    if !(1..=2).contains(&d) {
        return Err(Error::Unsupported("Lebesgue integrals are provided for d = 1, 2"));
    }
    let domain = x.domain();
    let k = w.kappa();
    let kernel = DomainKernel::new(domain, w, bp.n)?;
    let mut failure: Option<Error> = None;
    let mut eval = |y: &[f64]| -> f64 {
        let p = match domain {
            Domain::Sphere => DomainPoint::sphere(y),
            Domain::Ball => DomainPoint::ball(&y[..d]),
            Domain::Simplex => {
                let v: Vec<f64> = y[..d].iter().map(|c| c * c).collect();
                DomainPoint::simplex(&v)
            }
        };
        match p.and_then(|p| kernel.eval(bp.n, bp.order, x, &p)) {
            Ok(v) => v.abs(),
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let powabs = |v: f64, e: f64| if e == 0.0 { 1.0 } else { pow(v.abs(), e) };
    let opts = AdaptiveOptions {
        abs_tol: 0.0,
        rel_tol: LEBESGUE_TOL,
        ..AdaptiveOptions::default()
    };
    let result = if d == 1 {
        let mass = 2.0 * exp(ln_beta(k[0] + 0.5, k[1] + 0.5));
        let r = adaptive_with_breaks(
            |th| {
                let (c, s) = (cos(th), sin(th));
                eval(&[c, s]) * powabs(c, 2.0 * k[0]) * powabs(s, 2.0 * k[1])
            },
            &angle_breaks(0.0, 2.0 * PI, 2 * resolution),
            opts,
        );
        NormValue {
            value: r.value / mass,
            err_est: r.err_est / mass,
            converged: r.converged,
        }
    } else {
        let ln_mass = core::f64::consts::LN_2 + ln_gamma(k[0] + 0.5) + ln_gamma(k[1] + 0.5) + ln_gamma(k[2] + 0.5)
            - ln_gamma(k[0] + k[1] + k[2] + 1.5);
        let mass = exp(ln_mass);
        let phi_breaks = angle_breaks(0.0, 2.0 * PI, 2 * resolution);
        let mut inner_ok = true;
        let mut inner_err = 0.0;
        let r = adaptive_with_breaks(
            |th| {
                let (c, s) = (cos(th), sin(th));
                let radial = powabs(c, 2.0 * k[0]) * pow(s.abs(), 1.0 + 2.0 * (k[1] + k[2]));
                if radial == 0.0 {
                    return 0.0;
                }
                let inner = adaptive_with_breaks(
                    |ph| {
                        let (cp, sp) = (cos(ph), sin(ph));
                        eval(&[c, s * cp, s * sp]) * powabs(cp, 2.0 * k[1]) * powabs(sp, 2.0 * k[2])
                    },
                    &phi_breaks,
                    opts,
                );
                inner_ok &= inner.converged;
                inner_err += inner.err_est;
                radial * inner.value
            },
            &angle_breaks(0.0, PI, resolution),
            opts,
        );
        NormValue {
            value: r.value / mass,
            err_est: r.err_est / mass,
            converged: r.converged && inner_ok,
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(result)
}

/// Parameters of the lower-bound integrals: `a = λ+μ+δ`, `b = λ+μ-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundFrame {
    pub lambda: f64,
    pub mu: f64,
    pub delta: f64,
    pub a: f64,
    pub b: f64,
}

impl LowerBoundFrame {
    pub fn new(lambda: f64, mu: f64, delta: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(invalid("lambda", lambda, "must be >= 0"));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(invalid("mu", mu, "must be >= 0"));
        }
        if !(delta > -1.0) || !(delta <= lambda) {
            return Err(invalid("delta", delta, "lower bounds need -1 < δ <= λ"));
        }
        Ok(Self {
            lambda,
            mu,
            delta,
            a: lambda + mu + delta,
            b: lambda + mu - 1.0,
        })
    }

    /// `N = n + (a+b)/2 + 1`.
    pub fn big_n(&self, n: usize) -> f64 {
        n as f64 + 0.5 * (self.a + self.b) + 1.0
    }

    /// `τ = -π(a+1)/2`.
    pub fn tau(&self) -> f64 {
        -0.5 * PI * (self.a + 1.0)
    }

    /// `γ = τ + πμ/2`.
    pub fn gamma(&self) -> f64 {
        self.tau() + 0.5 * PI * self.mu
    }

    /// Jacobi pair `(a+1/2, b+1/2)` of the inner polynomial.
    pub fn jacobi(&self) -> Result<JacobiParams> {
        JacobiParams::new(self.a + 0.5, self.b + 0.5)
    }

    fn require_mu_window(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(invalid("mu", self.mu, "this integral needs 0 < μ < 1"));
        }
        Ok(())
    }
}

/// Interpolant through Chebyshev extreme points on `[-1, 1]`, exact for
/// polynomials up to its degree.
#[derive(Debug, Clone)]
struct ChebyshevInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl ChebyshevInterpolant {
    fn new<F: FnMut(f64) -> f64>(degree: usize, mut f: F) -> Self {
        if degree == 0 {
            return Self {
                nodes: alloc::vec![0.0],
                values: alloc::vec![f(0.0)],
            };
        }
        let nodes: Vec<f64> = (0..=degree).map(|j| cos(PI * j as f64 / degree as f64)).collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self { nodes, values }
    }

    fn eval(&self, x: f64) -> f64 {
        let m = self.nodes.len();
        if m == 1 {
            return self.values[0];
        }
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..m {
            let diff = x - self.nodes[j];
            if diff == 0.0 {
                return self.values[j];
            }
            let mut wj = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == m - 1 {
                wj *= 0.5;
            }
            let c = wj / diff;
            num += c * self.values[j];
            den += c;
        }
        num / den
    }
}

/// `I_n = ∫_0^1 |F_n(y)| y^{2μ} (1-y²)^{λ-1/2} dy` with
/// `F_n(y) = c_μ ∫ P_n^{(a+1/2,b+1/2)}(ty) (1-t²)^{μ-1} dt` and `c_μ` the
/// normalizing constant of the inner weight; `μ = 0` takes the limit
/// `F_n(y) = (P_n(y) + P_n(-y))/2`.
pub fn lower_integral_in(f: &LowerBoundFrame, n: usize) -> Result<NormValue> {
    let p = f.jacobi()?;
    let rule = product_measure(&[WeightFactorForm::symmetric(f.mu)], n)?;
    let inner = |y: f64| rule.integrate_linear(&[y], 0.0, |u| jacobi_eval(n, p, u));
    let interp = ChebyshevInterpolant::new(n, inner);
    let g = GenGegenParams::new(f.lambda, f.mu)?;
    let k = n / 2 + 8;
    let breaks: Vec<f64> = (0..=k).map(|j| sin(0.5 * PI * j as f64 / k as f64)).collect();
    let opts = AdaptiveOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-9,
        ..AdaptiveOptions::default()
    };
    let r = adaptive_with_breaks(|y| interp.eval(y).abs() * g.weight(y), &breaks, opts);
    Ok(r.into())
}

/// Integrates `g(θ) (cos²φ - cos²θ)^{μ-1}` over `(φ, π-φ)`, split at `π/2`,
/// in the distance-to-endpoint variable so that both singular endpoints are
/// resolved accurately.
pub fn endpoint_singular_integral<G: FnMut(f64) -> f64>(
    mu: f64,
    phi: f64,
    panels: usize,
    tol: f64,
    mut g: G,
) -> NormValue {
    let len = 0.5 * PI - phi;
    let breaks = uniform_breaks(0.0, len, panels);
    let opts = AdaptiveOptions {
        abs_tol: tol,
        rel_tol: 1e-12,
        ..AdaptiveOptions::default()
    };
    let mut total = NormValue {
        value: 0.0,
        err_est: 0.0,
        converged: true,
    };
    for side in [0, 1] {
        let r = adaptive_with_breaks(
            |v| {
                let theta = if side == 0 { phi + v } else { PI - phi - v };
                let gap = sin(v) * sin(2.0 * phi + v);
                g(theta) * pow(gap, mu - 1.0)
            },
            &breaks,
            opts,
        );
        total.value += r.value;
        total.err_est += r.err_est;
        total.converged &= r.converged;
    }
    total
}

/// Tolerance of the `M_n` integrals.
pub const MN_TOL: f64 = 1e-8;

/// `M_n(φ) = ∫_φ^{π-φ} (cos²φ - cos²θ)^{μ-1} / ((sin θ/2)^a (cos θ/2)^b) cos(Nθ+τ) dθ`.
pub fn mn_direct(f: &LowerBoundFrame, n: usize, phi: f64) -> Result<NormValue> {
    f.require_mu_window()?;
    if !(phi > 0.0 && phi <= 0.25 * PI) {
        return Err(invalid("phi", phi, "must lie in (0, π/4]"));
    }
    let big_n = f.big_n(n);
    let tau = f.tau();
    let panels = (big_n / 4.0) as usize + 2;
    Ok(endpoint_singular_integral(f.mu, phi, panels, MN_TOL, |th| {
        cos(big_n * th + tau) / (pow(sin(0.5 * th), f.a) * pow(cos(0.5 * th), f.b))
    }))
}

/// The asymptotic main part `K_n(φ)` of `M_n(φ)`, from the two endpoint
/// contributions of the singular oscillatory integral.
///
/// Each endpoint term carries the other endpoint's factor
/// `(π-2φ)^{μ-1}`, which cancels the one in the amplitude of `f_φ`.
pub fn kn_asymptotic(f: &LowerBoundFrame, n: usize, phi: f64) -> Result<f64> {
    f.require_mu_window()?;
    if !(phi > 0.0 && phi <= 0.25 * PI) {
        return Err(invalid("phi", phi, "must lie in (0, π/4]"));
    }
    let (a, b, mu) = (f.a, f.b, f.mu);
    let big_n = f.big_n(n);
    let gamma = f.gamma();
    let amp = exp(ln_gamma(mu)) * pow(big_n, -mu) * pow(2.0, a) * pow(sin(2.0 * phi), mu - 1.0) / pow(sin(phi), a);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let bracket = sign * pow(sin(0.5 * phi), a - b) * cos(big_n * phi + gamma + 0.5 * (a - b) * PI)
        + pow(cos(0.5 * phi), a - b) * cos(big_n * phi + gamma);
    Ok(amp * bracket)
}

/// The remainder envelope `n^{-1} φ^{μ-λ-δ-2}` (constant one).
pub fn remainder_envelope(f: &LowerBoundFrame, n: usize, phi: f64) -> f64 {
    pow(phi, f.mu - f.lambda - f.delta - 2.0) / n.max(1) as f64
}

/// `E_n = n^{-3/2} ∫_{1/n}^{π/4} ∫_φ^{π-φ} (cos²φ-cos²θ)^{μ-1}
/// / ((sin θ/2)^{a+1} (cos θ/2)^{b+1}) dθ (sin φ)^{2λ} dφ`.
pub fn en_remainder(f: &LowerBoundFrame, n: usize) -> Result<NormValue> {
    f.require_mu_window()?;
    if n < 2 {
        return Err(invalid("n", n as f64, "needs n >= 2 so that 1/n < π/4"));
    }
    let lo = 1.0 / n as f64;
    let hi = 0.25 * PI;
    let k = 16;
    let breaks: Vec<f64> = (0..=k).map(|j| lo * pow(hi / lo, j as f64 / k as f64)).collect();
    let opts = AdaptiveOptions {
        abs_tol: 0.0,
        rel_tol: 1e-9,
        ..AdaptiveOptions::default()
    };
    let mut inner_ok = true;
    let r = adaptive_with_breaks(
        |phi| {
            let inner = endpoint_singular_integral(f.mu, phi, 4, 0.0, |th| {
                1.0 / (pow(sin(0.5 * th), f.a + 1.0) * pow(cos(0.5 * th), f.b + 1.0))
            });
            inner_ok &= inner.converged || inner.err_est <= 1e-10 * inner.value.abs();
            inner.value * pow(sin(phi), 2.0 * f.lambda)
        },
        &breaks,
        opts,
    );
    let scale = pow(n as f64, -1.5);
    Ok(NormValue {
        value: scale * r.value,
        err_est: scale * r.err_est,
        converged: r.converged && inner_ok,
    })
}

/// Model for a growth fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthModel {
    /// `v ≈ C n^e`.
    PurePower,
    /// `v ≈ n^e (A log n + B)` with `A > 0`.
    PowerTimesLog,
    /// Whichever of the pure power and the logarithmic law
    /// `v ≈ A log n + B` leaves the smaller residual.
    Select,
}

/// Least-squares growth exponent in log-log coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub exponent: f64,
    pub log_factor: bool,
    /// RMS of the residuals of `log v`.
    pub residual: f64,
    pub n_range: (usize, usize),
}

fn line_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if !(sxx > 1e-12) {
        return Err(Error::IllConditionedFit("abscissae are (nearly) identical"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - icpt - slope * x;
            r * r
        })
        .sum();
    Ok((slope, icpt, sqrt(rss / m)))
}

/// For a fixed exponent, `A, B` minimizing the relative error of
/// `n^e (A log n + B)`, and the log-space RMS residual.
fn log_model_at(e: f64, xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let inv = exp(e * x - y);
        let (f1, f2) = (x * inv, inv);
        s11 += f1 * f1;
        s12 += f1 * f2;
        s22 += f2 * f2;
        r1 += f1;
        r2 += f2;
    }
    let det = s11 * s22 - s12 * s12;
    if !(det.abs() > 0.0) {
        return (0.0, 0.0, f64::INFINITY);
    }
    let a = (r1 * s22 - r2 * s12) / det;
    let b = (s11 * r2 - s12 * r1) / det;
    let mut rss = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let model = a * x + b;
        if !(model > 0.0) {
            return (a, b, f64::INFINITY);
        }
        let r = e * x + ln(model) - y;
        rss += r * r;
    }
    (a, b, sqrt(rss / xs.len() as f64))
}

fn log_model_fit(xs: &[f64], ys: &[f64], pure_exponent: f64) -> (f64, f64, f64) {
    let resid = |e: f64| log_model_at(e, xs, ys).2;
    let (lo, hi) = (pure_exponent - 1.5, pure_exponent + 0.5);
    let steps = 80;
    let grid = |k: usize| lo + (hi - lo) * k as f64 / steps as f64;
    let best = (0..=steps)
        .min_by(|&i, &j| resid(grid(i)).total_cmp(&resid(grid(j))))
        .unwrap_or(0);
    let (mut a, mut b) = (grid(best.saturating_sub(1)), grid((best + 1).min(steps)));
    let g = 0.5 * (sqrt(5.0) - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (resid(c), resid(d));
    for _ in 0..100 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = resid(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = resid(d);
        }
    }
    let e = 0.5 * (a + b);
    let (slope, _, r) = log_model_at(e, xs, ys);
    (e, slope, r)
}

/// Fits `points = (n, value)` with at least five points, `n >= 2`,
/// `value > 0`.
pub fn growth_fit(points: &[(usize, f64)], model: GrowthModel) -> Result<GrowthFit> {
    if points.len() < 5 {
        return Err(Error::IllConditionedFit("need at least five points"));
    }
    if points.iter().any(|&(n, v)| n < 2 || !(v > 0.0) || !v.is_finite()) {
        return Err(Error::IllConditionedFit("need n >= 2 and positive finite values"));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| ln(n as f64)).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| ln(v)).collect();
    let n_min = points.iter().map(|p| p.0).min().unwrap_or(0);
    let n_max = points.iter().map(|p| p.0).max().unwrap_or(0);
    let pure = line_fit(&xs, &ys)?;
    let pure_fit = GrowthFit {
        exponent: pure.0,
        log_factor: false,
        residual: pure.2,
        n_range: (n_min, n_max),
    };
    if model == GrowthModel::PurePower {
        return Ok(pure_fit);
    }
    if model == GrowthModel::PowerTimesLog {
        let (e, _, r) = log_model_fit(&xs, &ys, pure.0);
        if !r.is_finite() {
            return Err(Error::IllConditionedFit("no positive log model fits the data"));
        }
        return Ok(GrowthFit {
            exponent: e,
            log_factor: true,
            residual: r,
            n_range: (n_min, n_max),
        });
    }
    let (slope, _, r) = log_model_at(0.0, &xs, &ys);
    Ok(if slope > 0.0 && r < pure.2 {
        GrowthFit {
            exponent: 0.0,
            log_factor: true,
            residual: r,
            n_range: (n_min, n_max),
        }
    } else {
        pure_fit
    })
}

/// `v ≈ A log n + B` by least squares; returns `(A, B, max relative residual)`.
pub fn log_linear_fit(points: &[(usize, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 3 {
        return Err(Error::IllConditionedFit("need at least three points"));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| ln(n as f64)).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v).collect();
    let (a, b, _) = line_fit(&xs, &ys)?;
    let worst = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| ((y - a * x - b) / y).abs())
        .fold(0.0, f64::max);
    Ok((a, b, worst))
}

/// Expected growth of `‖S_n^δ‖` in `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectedRate {
    Bounded,
    Log,
    Power(f64),
}

/// `σ_κ` together with the expected rate for each requested order.
pub fn sigma_and_critical(w: &ReflectionWeight, orders: &[CesaroOrder]) -> (f64, Vec<(CesaroOrder, ExpectedRate)>) {
    let sigma = w.sigma();
    let table = orders
        .iter()
        .map(|&o| {
            let rate = match o {
                CesaroOrder::Projection => ExpectedRate::Power(sigma),
                CesaroOrder::Delta(d) if d > sigma => ExpectedRate::Bounded,
                CesaroOrder::Delta(d) if d == sigma => ExpectedRate::Log,
                CesaroOrder::Delta(d) => ExpectedRate::Power(sigma - d),
            };
            (o, rate)
        })
        .collect();
    (sigma, table)
}

/// Slack factor of every calibrate-then-track check.
pub const CALIBRATION_SLACK: f64 = 2.0;

/// Verdict of a calibrate-then-track check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// Value at the calibration degree.
    pub c: f64,
    /// Largest tracked value at later degrees.
    pub worst: f64,
    pub pass: bool,
}

/// Upper check: the first entry fixes `c`, every later entry must stay
/// below `slack · c`.
pub fn calibrate_upper(values: &[(usize, f64)], slack: f64) -> Result<Calibration> {
    let (&(_, c), rest) = values
        .split_first()
        .ok_or(Error::IllConditionedFit("no calibration point"))?;
    let worst = rest.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(Calibration {
        c,
        worst,
        pass: c.is_finite() && rest.iter().all(|p| p.1 <= slack * c),
    })
}

/// Two-sided check: every entry must stay in `[c/slack, slack·c]`.
pub fn calibrate_window(values: &[(usize, f64)], slack: f64) -> Result<Calibration> {
    let (&(_, c), rest) = values
        .split_first()
        .ok_or(Error::IllConditionedFit("no calibration point"))?;
    let worst = rest.iter().map(|p| (p.1 / c).max(c / p.1)).fold(1.0, f64::max);
    Ok(Calibration {
        c,
        worst,
        pass: c > 0.0 && rest.iter().all(|p| p.1 >= c / slack && p.1 <= slack * c),
    })
}

/// Lower check: every later entry must stay above `c / slack`.
pub fn calibrate_lower(values: &[(usize, f64)], slack: f64) -> Result<Calibration> {
    let (&(_, c), rest) = values
        .split_first()
        .ok_or(Error::IllConditionedFit("no calibration point"))?;
    let worst = rest.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok(Calibration {
        c,
        worst,
        pass: c > 0.0 && rest.iter().all(|p| p.1 >= c / slack),
    })
}
