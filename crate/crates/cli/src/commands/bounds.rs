//! `ckl verify-bounds`: calibrate-then-track sweeps of the pointwise kernel
//! bounds and of the main estimate.
//!
//! `sweep = kernel` (default) keys: `domain` (sphere or simplex), `d`,
//! `kappa`, `delta`, `n_calibrate` (default 8), `n`, `samples` (default
//! 1000), `seed`.
//!
//! `sweep = main` keys: `kappa` (all positive, one per factor), `alpha`,
//! `beta`, `n_calibrate`, `n`, `samples` (default 64), `seed`.

use ckl_core::cesaro::{cesaro_mean, CesaroOrder};
use ckl_core::estimates::{
    bound_simplex, bound_simplex_proj, bound_sphere_cesaro, bound_sphere_proj, calibrate_upper, main_estimate_check,
    BoundParams, CALIBRATION_SLACK,
};
use ckl_core::kernels::{Domain, DomainKernel, DomainPoint};
use ckl_core::orthopoly::JacobiParams;
use ckl_core::sampling::{sample_pairs, Halton};
use ckl_core::ReflectionWeight;

use super::{finite, kappa_text, Pool};
use crate::config::Config;
use crate::error::{CliError, Result};
use crate::report::{join, num, Check, Outcome, Table};

const KERNEL_KEYS: &[&str] = &[
    "sweep",
    "domain",
    "d",
    "kappa",
    "delta",
    "n_calibrate",
    "n",
    "samples",
    "seed",
];
const MAIN_KEYS: &[&str] = &["sweep", "kappa", "alpha", "beta", "n_calibrate", "n", "samples", "seed"];

pub fn run(cfg: &Config, seed: u64, pool: &Pool) -> Result<Outcome> {
    match cfg.raw("sweep").unwrap_or("kernel") {
        "kernel" => kernel_sweep(cfg, seed, pool),
        "main" => main_sweep(cfg, seed, pool),
        v => Err(CliError::BadValue {
            key: "sweep".into(),
            value: v.into(),
            why: "expected kernel or main".into(),
        }),
    }
}

/// The bound expression (constant one) matching the kernel's domain and order.
pub fn kernel_bound(
    domain: Domain,
    n: usize,
    order: CesaroOrder,
    w: &ReflectionWeight,
    x: &DomainPoint,
    y: &DomainPoint,
) -> Result<f64> {
    let bp = BoundParams::new(n, order, w.clone());
    Ok(match (domain, order) {
        (Domain::Sphere, CesaroOrder::Projection) => bound_sphere_proj(n, w, x, y)?,
        (Domain::Sphere, _) => bound_sphere_cesaro(&bp, x, y)?,
        (Domain::Simplex, CesaroOrder::Projection) => bound_simplex_proj(n, w, x, y)?,
        (Domain::Simplex, _) => bound_simplex(&bp, x, y)?,
        (Domain::Ball, _) => {
            return Err(CliError::Core(ckl_core::Error::Unsupported(
                "bound sweeps cover the sphere and simplex",
            )))
        }
    })
}

fn degrees(cfg: &Config) -> Result<Vec<usize>> {
    let mut ns = vec![cfg.usize("n_calibrate", Some(8))?];
    ns.extend(cfg.usize_list("n")?);
    Ok(ns)
}

fn push_checks(
    out: &mut Outcome,
    table: &mut Table,
    label: &str,
    prefix: &[String],
    series: &[(usize, f64)],
) -> Result<()> {
    let cal = calibrate_upper(series, CALIBRATION_SLACK)?;
    let limit = CALIBRATION_SLACK * cal.c;
    for (i, &(n, r)) in series.iter().enumerate() {
        let mut row = prefix.to_vec();
        row.extend([
            n.to_string(),
            num(r),
            num(cal.c),
            num(limit),
            (i == 0 || r <= limit).to_string(),
        ]);
        table.push(row);
    }
    out.checks.push(Check::new(
        label,
        cal.pass,
        format!("c={} worst={} limit={}", cal.c, cal.worst, limit),
    ));
    Ok(())
}

fn kernel_sweep(cfg: &Config, seed: u64, pool: &Pool) -> Result<Outcome> {
    cfg.check_keys(KERNEL_KEYS)?;
    let domain = cfg.domain("domain")?;
    let w = super::weight(cfg)?;
    let sigma = w.sigma();
    let specs = cfg.orders("delta")?;
    let orders: Vec<CesaroOrder> = specs.iter().map(|o| o.resolve(sigma)).collect::<Result<_>>()?;
    let ns = degrees(cfg)?;
    let pairs = sample_pairs(domain, w.d(), cfg.usize("samples", Some(1000))?, seed)?;

    let mut tasks = Vec::new();
    for &n in &ns {
        for i in 0..pairs.len() {
            tasks.push((n, i));
        }
    }
    let kernels: Vec<DomainKernel> = ns
        .iter()
        .map(|&n| DomainKernel::new(domain, &w, n))
        .collect::<ckl_core::Result<_>>()?;
    let ratios = pool.map(&tasks, |&(n, i)| {
        let k = &kernels[ns.iter().position(|&m| m == n).expect("degree listed")];
        let (x, y) = &pairs[i];
        let prof = k.profile(x, y)?;
        orders
            .iter()
            .map(|&o| {
                let v = finite(cesaro_mean(&prof, n, o)?, "kernel value")?;
                Ok(v.abs() / kernel_bound(domain, n, o, &w, x, y)?)
            })
            .collect::<Result<Vec<f64>>>()
    })?;

    let mut out = Outcome::default();
    let mut table = Table::new(
        "bounds",
        &["domain", "d", "kappa", "delta", "n", "max_ratio", "c", "limit", "pass"],
    );
    let kappa = kappa_text(&w);
    for (j, &order) in orders.iter().enumerate() {
        let series: Vec<(usize, f64)> = ns
            .iter()
            .map(|&n| {
                let m = tasks
                    .iter()
                    .zip(&ratios)
                    .filter(|(t, _)| t.0 == n)
                    .map(|(_, r)| r[j])
                    .fold(0.0, f64::max);
                (n, m)
            })
            .collect();
        let prefix = [domain.to_string(), w.d().to_string(), kappa.clone(), order.to_string()];
        let label = format!("{domain} kappa={kappa} delta={order}");
        push_checks(&mut out, &mut table, &label, &prefix, &series)?;
    }
    out.tables.push(table);
    Ok(out)
}

/// Admissible `(a, x)`: `|x| + Σ|a_j| ≤ 1`, every `a_j ≠ 0`, by rejection
/// from a Halton sequence on the cube.
pub fn main_samples(m: usize, count: usize, seed: u64) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut h = Halton::new(m + 1, seed)?;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = h.next_point().iter().map(|u| 2.0 * u - 1.0).collect();
        if v.iter().map(|c| c.abs()).sum::<f64>() <= 1.0 && v[..m].iter().all(|&a| a != 0.0) {
            out.push((v[..m].to_vec(), v[m]));
        }
    }
    Ok(out)
}

fn main_sweep(cfg: &Config, seed: u64, pool: &Pool) -> Result<Outcome> {
    cfg.check_keys(MAIN_KEYS)?;
    let kappas = cfg.f64_list("kappa")?;
    let p = JacobiParams::new(cfg.f64("alpha", None)?, cfg.f64("beta", None)?)?;
    let ns = degrees(cfg)?;
    let samples = main_samples(kappas.len(), cfg.usize("samples", Some(64))?, seed)?;
    // Hypotheses are checked once up front so a bad config fails fast.
    main_estimate_check(1, &kappas, &samples[0].0, samples[0].1, p, None)?;

    let tasks: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| (0..samples.len()).map(move |i| (n, i)))
        .collect();
    let ratios = pool.map(&tasks, |&(n, i)| {
        let (a, x) = &samples[i];
        finite(
            main_estimate_check(n, &kappas, a, *x, p, None)?.ratio(),
            "main estimate",
        )
    })?;

    let mut out = Outcome::default();
    let mut table = Table::new(
        "main_estimate",
        &["m", "kappa", "alpha", "beta", "n", "max_ratio", "c", "limit", "pass"],
    );
    let series: Vec<(usize, f64)> = ns
        .iter()
        .map(|&n| {
            let m = tasks
                .iter()
                .zip(&ratios)
                .filter(|(t, _)| t.0 == n)
                .map(|(_, r)| *r)
                .fold(0.0, f64::max);
            (n, m)
        })
        .collect();
    let kappa = join(&kappas, ";");
    let prefix = [kappas.len().to_string(), kappa.clone(), num(p.alpha()), num(p.beta())];
    let label = format!("main estimate m={} kappa={kappa}", kappas.len());
    push_checks(&mut out, &mut table, &label, &prefix, &series)?;
    out.tables.push(table);
    Ok(out)
}
