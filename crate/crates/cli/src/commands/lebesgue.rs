//! `ckl lebesgue`: `Λ_n(x)` over a fixed point grid and a growth fit of the
//! grid maximum.
//!
//! The grid is the poles `e_j`, the all-equal point and `random_points`
//! quasi-random points.
//!
//! keys: `domain`, `d`, `kappa`, `delta`, `n`, `random_points` (default 32),
//! `resolution_factor` (default 4), `model` (select, pure, log), `plot`,
//! `seed`.

use ckl_core::cesaro::CesaroOrder;
use ckl_core::estimates::{growth_fit, lebesgue_at_point, sigma_and_critical, BoundParams};
use ckl_core::kernels::{Domain, DomainPoint};
use ckl_core::sampling::sample_points;
use ckl_core::ReflectionWeight;

use super::{finite, fit_row, fits_table, kappa_text, Pool};
use crate::config::Config;
use crate::error::Result;
use crate::report::{gnuplot_script, num, Outcome, Table};

const KEYS: &[&str] = &[
    "domain",
    "d",
    "kappa",
    "delta",
    "n",
    "random_points",
    "resolution_factor",
    "model",
    "plot",
    "seed",
];

/// Named evaluation points: poles, the all-equal point, then `random`
/// quasi-random points.
pub fn point_grid(
    domain: Domain,
    w: &ReflectionWeight,
    random: usize,
    seed: u64,
) -> Result<Vec<(String, DomainPoint)>> {
    let d = w.d();
    let dim = if domain == Domain::Sphere { d + 1 } else { d };
    let mut out = Vec::new();
    for j in 0..dim {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        out.push((format!("e{j}"), DomainPoint::new(domain, &e)?));
    }
    let equal = match domain {
        Domain::Sphere => vec![1.0 / (dim as f64).sqrt(); dim],
        Domain::Ball => vec![1.0 / ((d + 1) as f64).sqrt(); d],
        Domain::Simplex => vec![1.0 / (d + 1) as f64; d],
    };
    out.push(("equal".into(), DomainPoint::new(domain, &equal)?));
    for (i, p) in sample_points(domain, d, random, seed)?.into_iter().enumerate() {
        out.push((format!("q{i}"), p));
    }
    Ok(out)
}

pub fn run(cfg: &Config, seed: u64, pool: &Pool) -> Result<Outcome> {
    cfg.check_keys(KEYS)?;
    let domain = cfg.domain("domain")?;
    let w = super::weight(cfg)?;
    let orders: Vec<CesaroOrder> = cfg
        .orders("delta")?
        .iter()
        .map(|o| o.resolve(w.sigma()))
        .collect::<Result<_>>()?;
    let ns = cfg.usize_list("n")?;
    let factor = cfg.usize("resolution_factor", Some(4))?;
    let grid = point_grid(domain, &w, cfg.usize("random_points", Some(32))?, seed)?;
    let model = super::model(cfg)?;

    let mut tasks = Vec::new();
    for &n in &ns {
        for &order in &orders {
            for i in 0..grid.len() {
                tasks.push((n, order, i));
            }
        }
    }
    let values = pool.map(&tasks, |&(n, order, i)| {
        let bp = BoundParams::new(n, order, w.clone());
        let v = lebesgue_at_point(&bp, &grid[i].1, factor * n.max(1))?;
        finite(v.value, "Lebesgue integral")?;
        Ok(v)
    })?;

    let kappa = kappa_text(&w);
    let mut table = Table::new(
        "lebesgue",
        &["n", "delta", "domain", "d", "kappa", "point_id", "lambda_n", "err_est"],
    );
    let mut nonconverged = 0;
    let mut maxima: Vec<(CesaroOrder, Vec<(usize, f64)>)> = orders.iter().map(|&o| (o, Vec::new())).collect();
    for (&(n, order, i), v) in tasks.iter().zip(&values) {
        if !v.converged {
            nonconverged += 1;
        }
        table.push(vec![
            n.to_string(),
            order.to_string(),
            domain.to_string(),
            w.d().to_string(),
            kappa.clone(),
            grid[i].0.clone(),
            num(v.value),
            num(v.err_est),
        ]);
        let slot = &mut maxima.iter_mut().find(|m| m.0 == order).expect("order listed").1;
        match slot.iter_mut().find(|p| p.0 == n) {
            Some(p) => p.1 = p.1.max(v.value),
            None => slot.push((n, v.value)),
        }
    }

    let mut tables = vec![table];
    let (_, expected) = sigma_and_critical(&w, &orders);
    if ns.len() >= 5 {
        let mut fits = fits_table();
        for ((order, pts), (_, rate)) in maxima.iter().zip(&expected) {
            let f = growth_fit(pts, model)?;
            fits.push(fit_row(*order, *rate, &f));
        }
        tables.push(fits);
    }
    let mut extras = Vec::new();
    if cfg.bool("plot", false)? {
        extras.push((
            "lebesgue.gp".to_string(),
            gnuplot_script("lebesgue.csv", 1, 7, 2, "Lebesgue function on the point grid"),
        ));
    }
    Ok(Outcome {
        tables,
        nonconverged,
        extras,
        ..Default::default()
    })
}
