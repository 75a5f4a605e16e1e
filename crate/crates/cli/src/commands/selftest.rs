//! `ckl selftest`: exact identities that must hold to rounding.
//!
//! keys: `n_max` (default 8), the largest degree in the reproduction suite.

use ckl_core::cesaro::{cesaro_coeff, cesaro_mean, CesaroOrder};
use ckl_core::estimates::{lebesgue_at_point, BoundParams};
use ckl_core::kernels::{domain_rule, Domain, DomainKernel, DomainPoint};
use ckl_core::orthopoly::JacobiParams;
use ckl_core::quadrature::{gauss_jacobi_rule, integrate_weighted};
use ckl_core::ReflectionWeight;

use super::Pool;
use crate::config::Config;
use crate::error::Result;
use crate::report::{num, Check, Outcome, Table};

const KEYS: &[&str] = &["n_max"];

pub const ORDERS: [CesaroOrder; 5] = [
    CesaroOrder::Projection,
    CesaroOrder::Delta(0.0),
    CesaroOrder::Delta(0.5),
    CesaroOrder::Delta(1.0),
    CesaroOrder::Delta(3.0),
];

/// `∫ t^k (1-t)^a (1+t)^b dt`, `k ≤ kmax`, by the two-term recursion from
/// integrating `d/dt [t^k (1-t)^{a+1} (1+t)^{b+1}]`.
pub fn jacobi_moments(p: JacobiParams, kmax: usize) -> Vec<f64> {
    let (a, b) = (p.alpha(), p.beta());
    let m0 = p.total_mass();
    let mut m = vec![m0, (b - a) / (a + b + 2.0) * m0];
    for k in 1..kmax {
        let kf = k as f64;
        m.push((kf * m[k - 1] + (b - a) * m[k]) / (kf + a + b + 2.0));
    }
    m.truncate(kmax + 1);
    m
}

/// Largest scaled moment error of the `m`-point Gauss–Jacobi rule over its
/// exactness range.
pub fn gauss_jacobi_error(p: JacobiParams, m: usize) -> Result<f64> {
    let rule = gauss_jacobi_rule(m, p)?;
    let mom = jacobi_moments(p, rule.exactness_degree);
    let mut worst: f64 = 0.0;
    for (k, mk) in mom.iter().enumerate() {
        let v = integrate_weighted(|t| t.powi(k as i32), &rule)?;
        worst = worst.max((v - mk).abs() / mk.abs().max(1e-3 * mom[0]));
    }
    Ok(worst)
}

/// Largest `|∫ K_n^δ(x, y) dμ(y) - [δ-mean of 1]|` over `orders`, with the
/// projection integrating to zero for `n > 0`.
pub fn reproduction_error(
    domain: Domain,
    w: &ReflectionWeight,
    x: &DomainPoint,
    n: usize,
    orders: &[CesaroOrder],
) -> Result<f64> {
    let rule = domain_rule(domain, w, (2 * n + 1) / 4 + 2)?;
    let kernel = DomainKernel::new(domain, w, n)?;
    let mut totals = vec![0.0; orders.len()];
    for i in 0..rule.len() {
        let y = DomainPoint::new(domain, rule.point(i))?;
        let prof = kernel.profile(x, &y)?;
        for (t, &o) in totals.iter_mut().zip(orders) {
            *t += rule.weights[i] * cesaro_mean(&prof, n, o)?;
        }
    }
    Ok(totals
        .iter()
        .zip(orders)
        .map(|(t, &o)| {
            let expect = if o == CesaroOrder::Projection && n > 0 {
                0.0
            } else {
                1.0
            };
            (t - expect).abs()
        })
        .fold(0.0, f64::max))
}

/// The six reproduction cases: `S^1, S^2, B^1, B^2, T^1, T^2`.
pub fn reproduction_cases() -> Result<Vec<(Domain, ReflectionWeight, DomainPoint)>> {
    let w1 = ReflectionWeight::new(1, &[0.7, 1.2])?;
    let w2 = ReflectionWeight::new(2, &[0.5, 0.0, 1.5])?;
    let s2 = {
        let v = [0.3f64, -0.4, 0.8];
        let r = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        DomainPoint::sphere(&v.map(|c| c / r))?
    };
    Ok(vec![
        (Domain::Sphere, w1.clone(), DomainPoint::sphere(&[0.6, -0.8])?),
        (Domain::Sphere, w2.clone(), s2),
        (Domain::Ball, w1.clone(), DomainPoint::ball(&[0.35])?),
        (Domain::Ball, w2.clone(), DomainPoint::ball(&[0.3, -0.6])?),
        (Domain::Simplex, w1, DomainPoint::simplex(&[0.35])?),
        (Domain::Simplex, w2, DomainPoint::simplex(&[0.2, 0.5])?),
    ])
}

pub fn run(cfg: &Config, pool: &Pool) -> Result<Outcome> {
    cfg.check_keys(KEYS)?;
    let n_max = cfg.usize("n_max", Some(8))?;
    let mut rows: Vec<(String, f64, f64)> = Vec::new();

    let mut gj: f64 = 0.0;
    for (a, b) in [(0.0, 0.0), (-0.5, -0.5), (2.5, 0.5), (-0.7, 1.9)] {
        for m in [1, 4, 11, 20] {
            gj = gj.max(gauss_jacobi_error(JacobiParams::new(a, b)?, m)?);
        }
    }
    rows.push(("gauss-jacobi exactness".into(), gj, 1e-12));

    let mut mass: f64 = 0.0;
    for (domain, w, _) in reproduction_cases()? {
        let r = domain_rule(domain, &w, 6)?;
        mass = mass.max((r.weights.iter().sum::<f64>() - 1.0).abs());
    }
    rows.push(("domain rules have unit mass".into(), mass, 1e-13));

    let mut cesaro: f64 = 0.0;
    for delta in [0.0, 0.3, 1.7, 3.0] {
        for n in [0, 5, 40] {
            let lhs: f64 = (0..=n).map(|k| cesaro_coeff(delta, k)).sum();
            let rhs = cesaro_coeff(delta + 1.0, n);
            cesaro = cesaro.max((lhs - rhs).abs() / rhs);
        }
    }
    rows.push(("cesaro partial sums".into(), cesaro, 1e-12));

    let cases = reproduction_cases()?;
    let tasks: Vec<(usize, usize)> = (0..cases.len())
        .flat_map(|c| (0..=n_max).map(move |n| (c, n)))
        .collect();
    let errs = pool.map(&tasks, |&(c, n)| {
        let (domain, w, x) = &cases[c];
        reproduction_error(*domain, w, x, n, &ORDERS)
    })?;
    for (c, (domain, w, _)) in cases.iter().enumerate() {
        let worst = tasks
            .iter()
            .zip(&errs)
            .filter(|(t, _)| t.0 == c)
            .map(|(_, e)| *e)
            .fold(0.0, f64::max);
        rows.push((
            format!("reproduction of constants on {domain} d={}", w.d()),
            worst,
            1e-9,
        ));
    }

    let mut sym: f64 = 0.0;
    for (domain, w, x) in &cases {
        let y = match domain {
            Domain::Sphere if w.d() == 1 => DomainPoint::sphere(&[-0.28, 0.96])?,
            Domain::Sphere => DomainPoint::sphere(&[0.0, 0.6, -0.8])?,
            Domain::Ball if w.d() == 1 => DomainPoint::ball(&[-0.8])?,
            Domain::Ball => DomainPoint::ball(&[-0.5, 0.1])?,
            Domain::Simplex if w.d() == 1 => DomainPoint::simplex(&[0.9])?,
            Domain::Simplex => DomainPoint::simplex(&[0.6, 0.1])?,
        };
        let k = DomainKernel::new(*domain, w, n_max)?;
        for o in ORDERS {
            let (a, b) = (k.eval(n_max, o, x, &y)?, k.eval(n_max, o, &y, x)?);
            sym = sym.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    rows.push(("kernel symmetry".into(), sym, 1e-12));

    let w = ReflectionWeight::new(2, &[0.5, 1.0, 0.7])?;
    let bp = BoundParams::new(0, CesaroOrder::Delta(0.0), w);
    let l0 = lebesgue_at_point(&bp, &DomainPoint::sphere(&[0.6, 0.0, 0.8])?, 4)?.value;
    rows.push(("Lebesgue function at n = 0".into(), (l0 - 1.0).abs(), 0.0));

    let mut table = Table::new("selftest", &["check", "worst", "tolerance", "pass"]);
    let mut out = Outcome::default();
    for (name, worst, tol) in rows {
        let pass = worst <= tol;
        table.push(vec![name.clone(), num(worst), num(tol), pass.to_string()]);
        out.checks.push(Check::new(
            name,
            pass,
            format!("worst={} tolerance={}", num(worst), num(tol)),
        ));
    }
    out.tables.push(table);
    Ok(out)
}
