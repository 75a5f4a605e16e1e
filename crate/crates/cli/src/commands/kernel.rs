//! `ckl kernel`: kernel values over sampled pairs, each computed along two
//! independent paths.
//!
//! keys: `domain`, `d`, `kappa`, `delta`, `n`, `pairs` (default 8), `seed`.

use ckl_core::cesaro::{cesaro_mean, cesaro_weights, CesaroOrder};
use ckl_core::kernels::{circle_classical_kernel, Domain, DomainKernel, DomainPoint};
use ckl_core::orthopoly::gegenbauer_eval;
use ckl_core::sampling::sample_pairs;
use ckl_core::ReflectionWeight;

use super::{finite, kappa_text, point_text, Pool};
use crate::config::Config;
use crate::error::Result;
use crate::report::{num, Outcome, Table};

const KEYS: &[&str] = &["domain", "d", "kappa", "delta", "n", "pairs", "seed"];

struct Row {
    n: usize,
    order: CesaroOrder,
    value: f64,
    residual: f64,
    err_est: f64,
    oracle: Option<f64>,
}

pub fn run(cfg: &Config, seed: u64, pool: &Pool) -> Result<Outcome> {
    cfg.check_keys(KEYS)?;
    let domain = cfg.domain("domain")?;
    let w = super::weight(cfg)?;
    let sigma = w.sigma();
    let orders: Vec<CesaroOrder> = cfg
        .orders("delta")?
        .iter()
        .map(|o| o.resolve(sigma))
        .collect::<Result<_>>()?;
    let ns = cfg.usize_list("n")?;
    let pairs = sample_pairs(domain, w.d(), cfg.usize("pairs", Some(8))?, seed)?;
    let n_max = *ns.iter().max().unwrap_or(&0);
    let circle = domain == Domain::Sphere && w.lambda() == 0.0;
    let classical = domain == Domain::Sphere && w.kappa().iter().all(|&k| k == 0.0);
    let kernel = if circle {
        None
    } else {
        Some(DomainKernel::new(domain, &w, n_max)?)
    };

    let rows = pool.map(&pairs, |(x, y)| {
        let mut out = Vec::new();
        let profile = match &kernel {
            Some(k) => Some(k.profile(x, y)?),
            None => None,
        };
        for &n in &ns {
            for &order in &orders {
                let row = match (&kernel, &profile) {
                    (Some(k), Some(prof)) => {
                        let value = finite(k.eval(n, order, x, y)?, "kernel value")?;
                        let summed = cesaro_mean(prof, n, order)?;
                        let scale: f64 = prof[..=n].iter().map(|v| v.abs()).sum();
                        Row {
                            n,
                            order,
                            value,
                            residual: value - summed,
                            err_est: 16.0 * f64::EPSILON * (n + 1) as f64 * scale.max(1.0),
                            oracle: classical.then(|| zonal_oracle(n, order, &w, x, y)).transpose()?,
                        }
                    }
                    _ => {
                        let value = finite(circle_classical_kernel(n, order, x, y)?, "kernel value")?;
                        let direct = circle_direct(n, order, x, y);
                        Row {
                            n,
                            order,
                            value,
                            residual: value - direct,
                            err_est: 16.0 * f64::EPSILON * ((2 * n + 1) as f64),
                            oracle: Some(direct),
                        }
                    }
                };
                out.push(row);
            }
        }
        Ok(out)
    })?;

    let mut table = Table::new(
        "kernel",
        &[
            "n",
            "delta",
            "domain",
            "d",
            "kappa",
            "x",
            "y",
            "value",
            "residual",
            "err_est",
            "converged",
        ],
    );
    let mut oracle = Table::new(
        "kernel_oracle",
        &["n", "delta", "x", "y", "value", "oracle", "difference"],
    );
    let kappa = kappa_text(&w);
    // Rows ordered by n, then δ, then pair.
    for &n in &ns {
        for &order in &orders {
            for (i, (x, y)) in pairs.iter().enumerate() {
                let r = rows[i]
                    .iter()
                    .find(|r| r.n == n && r.order == order)
                    .expect("every (n, δ) row is computed");
                table.push(vec![
                    n.to_string(),
                    order.to_string(),
                    domain.to_string(),
                    w.d().to_string(),
                    kappa.clone(),
                    point_text(x),
                    point_text(y),
                    num(r.value),
                    num(r.residual),
                    num(r.err_est),
                    "true".into(),
                ]);
                if let Some(o) = r.oracle {
                    oracle.push(vec![
                        n.to_string(),
                        order.to_string(),
                        point_text(x),
                        point_text(y),
                        num(r.value),
                        num(o),
                        num(r.value - o),
                    ]);
                }
            }
        }
    }
    let mut tables = vec![table];
    if !oracle.rows.is_empty() {
        tables.push(oracle);
    }
    Ok(Outcome {
        tables,
        ..Default::default()
    })
}

/// `Σ_k c_k (k+λ)/λ C_k^λ(⟨x, y⟩)`, the unweighted zonal kernel.
fn zonal_oracle(n: usize, order: CesaroOrder, w: &ReflectionWeight, x: &DomainPoint, y: &DomainPoint) -> Result<f64> {
    let lambda = w.lambda();
    let c: f64 = x.coords().iter().zip(y.coords()).map(|(a, b)| a * b).sum();
    let c = c.clamp(-1.0, 1.0);
    let weights = cesaro_weights(n, order);
    let mut s = 0.0;
    for (k, wk) in weights.iter().enumerate() {
        s += wk * (k as f64 + lambda) / lambda * gegenbauer_eval(k, lambda, c)?;
    }
    Ok(s)
}

/// The circle kernel with every `cos(kθ)` taken from the library cosine.
fn circle_direct(n: usize, order: CesaroOrder, x: &DomainPoint, y: &DomainPoint) -> f64 {
    let theta = y.coords()[1].atan2(y.coords()[0]) - x.coords()[1].atan2(x.coords()[0]);
    cesaro_weights(n, order)
        .iter()
        .enumerate()
        .map(|(k, wk)| {
            if k == 0 {
                *wk
            } else {
                2.0 * wk * (k as f64 * theta).cos()
            }
        })
        .sum()
}
