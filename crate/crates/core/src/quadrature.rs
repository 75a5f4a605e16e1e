//! Gauss–Jacobi rules, tensor-product measures on cubes, the sphere
//! product rule and an adaptive integrator for non-polynomial integrands.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{invalid, Error, Result};
use crate::math::{abs, exp, ln_beta, sqrt, CompensatedSum};
use crate::orthopoly::{jacobi_eval, GenGegenParams, JacobiParams, OrthonormalJacobi};
use crate::weight::ReflectionWeight;

/// Nodes and weights integrating polynomials of degree `<= 2m-1` exactly
/// against `(1-t)^α (1+t)^β` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub params: JacobiParams,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        let mut s = CompensatedSum::default();
        self.weights.iter().for_each(|&w| s.add(w));
        s.value()
    }
}

/// Golub–Welsch on the symmetric Jacobi matrix, followed by a Newton polish
/// of the nodes and Christoffel-function weights.
pub fn gauss_jacobi_rule(m: usize, p: JacobiParams) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(invalid("m", 0.0, "a quadrature rule needs at least one node"));
    }
    let mut diag: Vec<f64> = (0..m).map(|k| p.recurrence_diag(k)).collect();
    let mut off: Vec<f64> = (0..m)
        .map(|k| if k + 1 < m { p.recurrence_offdiag(k + 1) } else { 0.0 })
        .collect();
    let mut first = alloc::vec![0.0; m];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first)?;

    let mut nodes = diag;
    nodes.sort_by(|a, b| a.total_cmp(b));

    // Newton on P_m, derivative through the shifted family.
    let shifted = JacobiParams::new(p.alpha() + 1.0, p.beta() + 1.0)?;
    let slope = 0.5 * (m as f64 + p.alpha() + p.beta() + 1.0);
    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let f = jacobi_eval(m, p, *x);
            let df = slope * jacobi_eval(m - 1, shifted, *x);
            if df == 0.0 || !df.is_finite() {
                break;
            }
            let step = f / df;
            if abs(step) < 1e-8 && (*x - step).abs() < 1.0 {
                *x -= step;
            }
        }
    }

    let on = OrthonormalJacobi::new(m - 1, p);
    let mut buf = alloc::vec![0.0; m];
    let mut weights = Vec::with_capacity(m);
    for &x in &nodes {
        on.eval_into(x, &mut buf);
        let mut s = CompensatedSum::default();
        buf.iter().for_each(|v| s.add(v * v));
        let w = 1.0 / s.value();
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::EigenNoConvergence { index: 0 });
        }
        weights.push(w);
    }

    Ok(QuadratureRule {
        params: p,
        nodes,
        weights,
        exactness_degree: 2 * m - 1,
    })
}

/// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds
/// the eigenvalues and `first[i]` the first component of eigenvector `i`.
/// `off[i]` couples rows `i` and `i+1`.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = abs(diag[m]) + abs(diag[m + 1]);
                if abs(off[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == 60 {
                return Err(Error::EigenNoConvergence { index: l });
            }
            iter += 1;
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = libm::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = libm::hypot(f, g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let fz = first[i + 1];
                first[i + 1] = s * first[i] + c * fz;
                first[i] = c * first[i] - s * fz;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// `Σ w_i f(x_i)`; a non-finite `f` value aborts with the node index.
pub fn integrate_weighted<F: FnMut(f64) -> f64>(mut f: F, rule: &QuadratureRule) -> Result<f64> {
    let mut s = CompensatedSum::default();
    for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
        s.add(w * v);
    }
    Ok(s.value())
}

/// Which per-coordinate measure an axis carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// `(1+t)(1-t²)^{κ-1} = (1-t)^{κ-1}(1+t)^κ`.
    Sphere,
    /// `(1-t²)^{κ-1}`.
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFactorForm {
    pub kind: FactorKind,
    pub kappa: f64,
}

impl WeightFactorForm {
    pub fn sphere(kappa: f64) -> Self {
        Self {
            kind: FactorKind::Sphere,
            kappa,
        }
    }

    pub fn symmetric(kappa: f64) -> Self {
        Self {
            kind: FactorKind::Symmetric,
            kappa,
        }
    }
}

/// One normalized axis of a product measure.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AxisRule {
    fn normalized(nodes: Vec<f64>, weights: Vec<f64>) -> Self {
        let mut s = CompensatedSum::default();
        weights.iter().for_each(|&w| s.add(w));
        let total = s.value();
        Self {
            nodes,
            weights: weights.into_iter().map(|w| w / total).collect(),
        }
    }

    /// Nodes `t >= 0` only, with the weight of each `t > 0` doubled. Valid
    /// for a symmetric axis when the integrand is even under `t ↦ -t` of
    /// the whole argument vector.
    pub fn folded(&self) -> Self {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            if x > 1e-15 {
                nodes.push(x);
                weights.push(2.0 * w);
            } else if x.abs() <= 1e-15 {
                nodes.push(0.0);
                weights.push(w);
            }
        }
        Self { nodes, weights }
    }
}

/// Tensor product of normalized one-dimensional rules on `[-1,1]^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductRule {
    pub axes: Vec<AxisRule>,
}

impl ProductRule {
    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(|a| a.nodes.len()).product()
    }

    /// `∫ f(t) dμ(t)` over the full tensor grid.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let m = self.axes.len();
        let mut idx = alloc::vec![0usize; m];
        let mut t: Vec<f64> = self.axes.iter().map(|a| a.nodes[0]).collect();
        let mut s = CompensatedSum::default();
        loop {
            let w: f64 = self.axes.iter().zip(&idx).map(|(a, &i)| a.weights[i]).product();
            s.add(w * f(&t));
            if !self.advance(&mut idx, &mut t) {
                break;
            }
        }
        s.value()
    }

    /// `∫ f(offset + Σ c_i t_i) dμ(t)`.
    pub fn integrate_linear<F: FnMut(f64) -> f64>(&self, coeffs: &[f64], offset: f64, mut f: F) -> f64 {
        let mut out = [0.0];
        self.accumulate_linear(coeffs, offset, &mut out, |u, buf| buf[0] = f(u));
        out[0]
    }

    /// Vector-valued version of [`integrate_linear`](Self::integrate_linear):
    /// `out += ∫ g(offset + Σ c_i t_i) dμ(t)` where `g` fills a buffer of
    /// the same length as `out`.
    pub fn accumulate_linear<G: FnMut(f64, &mut [f64])>(&self, coeffs: &[f64], offset: f64, out: &mut [f64], mut g: G) {
        assert_eq!(coeffs.len(), self.axes.len(), "one coefficient per axis");
        let m = self.axes.len();
        // Scaled nodes per axis, skipping the work for vanishing coefficients.
        let axes: Vec<(Vec<f64>, &[f64])> = self
            .axes
            .iter()
            .zip(coeffs)
            .map(|(a, &c)| {
                if c == 0.0 {
                    (alloc::vec![0.0], &[1.0][..])
                } else {
                    (a.nodes.iter().map(|&x| c * x).collect(), &a.weights[..])
                }
            })
            .collect();
        let mut buf = alloc::vec![0.0; out.len()];
        let mut idx = alloc::vec![0usize; m];
        // Partial sums of u and products of weights along the odometer.
        let mut partial_u = alloc::vec![offset; m + 1];
        let mut partial_w = alloc::vec![1.0; m + 1];
        for k in 0..m {
            partial_u[k + 1] = partial_u[k] + axes[k].0[0];
            partial_w[k + 1] = partial_w[k] * axes[k].1[0];
        }
        loop {
            let u = partial_u[m];
            let w = partial_w[m];
            g(u, &mut buf);
            for (o, b) in out.iter_mut().zip(&buf) {
                *o += w * b;
            }
            // advance
            let mut k = m;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < axes[k].0.len() {
                    break;
                }
                idx[k] = 0;
            }
            for j in k..m {
                partial_u[j + 1] = partial_u[j] + axes[j].0[idx[j]];
                partial_w[j + 1] = partial_w[j] * axes[j].1[idx[j]];
            }
        }
    }

    fn advance(&self, idx: &mut [usize], t: &mut [f64]) -> bool {
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < self.axes[k].nodes.len() {
                t[k] = self.axes[k].nodes[idx[k]];
                return true;
            }
            idx[k] = 0;
            t[k] = self.axes[k].nodes[0];
        }
        false
    }
}

/// Node count that integrates polynomials of degree `cap` exactly.
pub fn nodes_for_degree(cap: usize) -> usize {
    cap / 2 + 1
}

/// Normalized tensor measure with one axis per factor. Axes with `κ = 0`
/// collapse to the limiting measure: a point mass at `t = 1` for the sphere
/// factor, half masses at `t = ±1` for the symmetric factor.
pub fn product_measure(forms: &[WeightFactorForm], degree_cap: usize) -> Result<ProductRule> {
    let m = nodes_for_degree(degree_cap);
    let axes = forms
        .iter()
        .map(|form| {
            let k = form.kappa;
            if !(k >= 0.0) || !k.is_finite() {
                return Err(invalid("kappa", k, "weight exponent must be >= 0"));
            }
            if k == 0.0 {
                return Ok(match form.kind {
                    FactorKind::Sphere => AxisRule {
                        nodes: alloc::vec![1.0],
                        weights: alloc::vec![1.0],
                    },
                    FactorKind::Symmetric => AxisRule {
                        nodes: alloc::vec![-1.0, 1.0],
                        weights: alloc::vec![0.5, 0.5],
                    },
                });
            }
            let p = match form.kind {
                FactorKind::Sphere => JacobiParams::new(k - 1.0, k)?,
                FactorKind::Symmetric => JacobiParams::new(k - 1.0, k - 1.0)?,
            };
            let rule = gauss_jacobi_rule(m, p)?;
            Ok(AxisRule::normalized(rule.nodes, rule.weights))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductRule { axes })
}

/// Symmetric rule for `w_{λ,μ}` with `2m` nodes, exact up to degree `4m-1`,
/// obtained from the Jacobi rule for `(λ-1/2, μ-1/2)` in `s = 2t²-1`.
/// Nodes come in `±t` pairs, increasing.
pub fn gen_gegenbauer_rule(m: usize, g: GenGegenParams) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = gauss_jacobi_rule(m, g.even_jacobi())?;
    let scale = exp(-(g.lambda() + g.mu() + 1.0) * core::f64::consts::LN_2);
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(2 * m);
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let t = sqrt(0.5 * (1.0 + s));
        pairs.push((t, scale * w));
        pairs.push((-t, scale * w));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// A cubature rule on `S^d` for the normalized measure `a_κ h_κ² dω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub d: usize,
    /// Flattened points, `d+1` coordinates each.
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * (self.d + 1)..(i + 1) * (self.d + 1)]
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let mut s = CompensatedSum::default();
        for i in 0..self.len() {
            s.add(self.weights[i] * f(self.point(i)));
        }
        s.value()
    }
}

/// Spherical-coordinate product rule on `S^1` or `S^2` with `resolution`
/// Jacobi nodes per generalized Gegenbauer factor; exact for polynomials of
/// degree `<= 4·resolution - 1`. Normalized to total mass one.
pub fn sphere_product_rule(d: usize, resolution: usize, w: &ReflectionWeight) -> Result<SphereRule> {
    if w.d() != d {
        return Err(Error::Unsupported("weight dimension differs from rule dimension"));
    }
    if resolution == 0 {
        return Err(invalid("resolution", 0.0, "must be >= 1"));
    }
    let k = w.kappa();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match d {
        1 => {
            // y1 = c with weight |c|^{2κ1}(1-c²)^{κ2-1/2}, y2 = ±sqrt(1-c²).
            let g = GenGegenParams::new(k[1], k[0])?;
            let (cs, ws) = gen_gegenbauer_rule(resolution, g)?;
            for (&c, &wc) in cs.iter().zip(&ws) {
                let s = sqrt((1.0 - c * c).max(0.0));
                for sign in [1.0, -1.0] {
                    points.extend_from_slice(&[c, sign * s]);
                    weights.push(0.5 * wc);
                }
            }
        }
        2 => {
            let polar = GenGegenParams::new(k[1] + k[2] + 0.5, k[0])?;
            let circle = GenGegenParams::new(k[2], k[1])?;
            let (ts, wts) = gen_gegenbauer_rule(resolution, polar)?;
            let (cs, wcs) = gen_gegenbauer_rule(resolution, circle)?;
            for (&t, &wt) in ts.iter().zip(&wts) {
                let r = sqrt((1.0 - t * t).max(0.0));
                for (&c, &wc) in cs.iter().zip(&wcs) {
                    let s = sqrt((1.0 - c * c).max(0.0));
                    for sign in [1.0, -1.0] {
                        points.extend_from_slice(&[t, r * c, sign * r * s]);
                        weights.push(0.5 * wt * wc);
                    }
                }
            }
        }
        _ => return Err(Error::Unsupported("sphere product rule only for d = 1, 2")),
    }
    let mut total = CompensatedSum::default();
    weights.iter().for_each(|&x| total.add(x));
    let total = total.value();
    weights.iter_mut().for_each(|x| *x /= total);
    Ok(SphereRule {
        d,
        points,
        weights,
        exactness_degree: 4 * resolution - 1,
    })
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveResult {
    pub value: f64,
    pub err_est: f64,
    pub converged: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subintervals: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 0.0,
            max_subintervals: 1 << 20,
        }
    }
}

impl AdaptiveOptions {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    seg: usize,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// `∫_a^b f` by globally adaptive bisection with a 15-point Kronrod rule.
///
/// Each segment is mapped through `x = a + (b-a)(3u² - 2u³)`, which removes
/// inverse-square-root endpoint singularities and softens milder ones; the
/// integrand itself is never evaluated at a segment endpoint.
pub fn adaptive_absolute<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> AdaptiveResult {
    adaptive_with_breaks(f, &[a, b], AdaptiveOptions::with_abs_tol(tol))
}

/// As [`adaptive_absolute`] over `[breaks[0], breaks[last]]`, with the
/// substitution applied separately on every segment between breakpoints.
/// Put kinks and weight singularities at breakpoints.
pub fn adaptive_with_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], opts: AdaptiveOptions) -> AdaptiveResult {
    assert!(breaks.len() >= 2, "need at least one segment");
    let segs: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
    let mut evaluations = 0usize;
    let mut eval_panel = |seg: usize, lo: f64, hi: f64, evaluations: &mut usize| -> Panel {
        let (a, b) = segs[seg];
        let len = b - a;
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut g = |u: f64| -> f64 {
            let x = a + len * u * u * (3.0 - 2.0 * u);
            let jac = 6.0 * len * u * (1.0 - u);
            if jac == 0.0 {
                return 0.0;
            }
            f(x) * jac
        };
        let fc = g(center);
        let mut kron = WGK[7] * fc;
        let mut gauss = WG[3] * fc;
        for j in 0..7 {
            let dx = half * XGK[j];
            let s = g(center - dx) + g(center + dx);
            kron += WGK[j] * s;
            if j % 2 == 1 {
                gauss += WG[j / 2] * s;
            }
        }
        *evaluations += 15;
        Panel {
            lo,
            hi,
            seg,
            value: kron * half,
            err: abs((kron - gauss) * half),
        }
    };

    let mut heap = BinaryHeap::new();
    for (seg, &(a, b)) in segs.iter().enumerate() {
        if b > a {
            heap.push(eval_panel(seg, 0.0, 1.0, &mut evaluations));
        }
    }
    let totals = |heap: &BinaryHeap<Panel>| {
        let mut v = CompensatedSum::default();
        let mut e = 0.0;
        for p in heap.iter() {
            v.add(p.value);
            e += p.err;
        }
        (v.value(), e)
    };
    let (mut value, mut err) = totals(&heap);
    let mut stalled = false;
    let mut since_resum = 0;
    while err > opts.abs_tol.max(opts.rel_tol * abs(value)) {
        if heap.len() >= opts.max_subintervals {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            stalled = true;
            heap.push(worst);
            break;
        }
        let left = eval_panel(worst.seg, worst.lo, mid, &mut evaluations);
        let right = eval_panel(worst.seg, mid, worst.hi, &mut evaluations);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        since_resum += 1;
        if since_resum >= 256 {
            (value, err) = totals(&heap);
            since_resum = 0;
        }
    }
    let (value, err) = totals(&heap);
    let converged = !stalled && err <= opts.abs_tol.max(opts.rel_tol * abs(value)) && value.is_finite();
    AdaptiveResult {
        value,
        err_est: err,
        converged,
        evaluations,
    }
}

/// Normalization constant of the sphere factor, `1/∫(1-t)^{κ-1}(1+t)^κ`.
/// Axes are normalized internally, so this is only for consumers that need
/// the constant itself.
pub fn sphere_factor_constant(kappa: f64) -> Result<f64> {
    let p = JacobiParams::new(kappa - 1.0, kappa)?;
    Ok(1.0 / p.total_mass())
}

/// `B(a, b)` exposed for closed-form checks.
pub fn beta_function(a: f64, b: f64) -> f64 {
    exp(ln_beta(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_legendre() {
        let r = gauss_jacobi_rule(1, JacobiParams::new(0.0, 0.0).unwrap()).unwrap();
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rule_is_sorted_and_positive() {
        let r = gauss_jacobi_rule(40, JacobiParams::new(2.5, -0.7).unwrap()).unwrap();
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!(r.nodes.iter().all(|&x| x > -1.0 && x < 1.0));
        assert_eq!(r.exactness_degree, 79);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(gauss_jacobi_rule(0, JacobiParams::new(0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let r = gauss_jacobi_rule(4, JacobiParams::new(0.0, 0.0).unwrap()).unwrap();
        let third = r.nodes[2];
        let err = integrate_weighted(|x| if x == third { f64::NAN } else { x }, &r).unwrap_err();
        assert_eq!(err, Error::NonFinite { index: 2 });
    }

    #[test]
    fn point_mass_limits() {
        let rule = product_measure(&[WeightFactorForm::sphere(0.0); 3], 7).unwrap();
        let v = rule.integrate(|t| t[0] * t[1] + t[2] * t[2] * t[0]);
        assert_eq!(v, 2.0);
        let rule = product_measure(&[WeightFactorForm::symmetric(0.0)], 4).unwrap();
        assert_eq!(rule.integrate(|t| t[0] * t[0]), 1.0);
        assert_eq!(rule.integrate(|t| t[0]), 0.0);
        assert!(product_measure(&[WeightFactorForm::sphere(-0.5)], 4).is_err());
    }

    #[test]
    fn linear_form_matches_generic_odometer() {
        let rule = product_measure(
            &[
                WeightFactorForm::sphere(0.7),
                WeightFactorForm::symmetric(1.4),
                WeightFactorForm::sphere(0.0),
            ],
            9,
        )
        .unwrap();
        let c = [0.3, -0.5, 0.2];
        let f = |u: f64| u * u * u - 2.0 * u + 0.1;
        let a = rule.integrate_linear(&c, 0.05, f);
        let b = rule.integrate(|t| f(0.05 + c[0] * t[0] + c[1] * t[1] + c[2] * t[2]));
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn adaptive_kink_and_singularity() {
        let r = adaptive_absolute(|t| (2.0 * t - 1.0).abs(), 0.0, 1.0, 1e-12);
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-12);
        let r = adaptive_absolute(|p| 1.0 / libm::sqrt(p), 0.0, core::f64::consts::FRAC_PI_4, 1e-10);
        assert!(r.converged);
        assert!((r.value - 2.0 * libm::sqrt(core::f64::consts::FRAC_PI_4)).abs() < 1e-10);
    }

    #[test]
    fn adaptive_budget_exhaustion_is_flagged() {
        let opts = AdaptiveOptions {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_subintervals: 4,
        };
        let r = adaptive_with_breaks(|x| libm::sin(200.0 * x).abs(), &[0.0, 3.0], opts);
        assert!(!r.converged);
        assert!(r.value.is_finite());
    }
}
