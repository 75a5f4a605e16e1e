//! `ckl growth`: `T_n^δ(w_{λ,μ}; t0)` sweeps with growth fits.
//!
//! The weight is given either directly (`lambda`, `mu`) or as the pole
//! reduction of a sphere weight (`d`, `kappa`, optional `pole`, default the
//! smallest `κ_j`), which uses `(λ_κ - κ_j, κ_j)`.
//!
//! keys: `lambda`, `mu`, `d`, `kappa`, `pole`, `delta`, `n`, `t0`
//! (default 1), `model`, `plot`.

use ckl_core::cesaro::CesaroOrder;
use ckl_core::estimates::{growth_fit, tn_delta};
use ckl_core::orthopoly::GenGegenParams;

use super::{finite, fit_row, fits_table, rate_for, Pool};
use crate::config::Config;
use crate::error::{CliError, Result};
use crate::report::{gnuplot_script, num, Outcome, Table};

const KEYS: &[&str] = &[
    "lambda", "mu", "d", "kappa", "pole", "delta", "n", "t0", "model", "plot",
];

/// The one-dimensional weight named by the config.
pub fn reduced_params(cfg: &Config) -> Result<GenGegenParams> {
    if cfg.has("kappa") {
        if cfg.has("lambda") || cfg.has("mu") {
            return Err(CliError::BadValue {
                key: "kappa".into(),
                value: cfg.raw("kappa").unwrap_or("").into(),
                why: "give either lambda/mu or d/kappa, not both".into(),
            });
        }
        let w = super::weight(cfg)?;
        let k = w.kappa();
        let j = match cfg.raw("pole") {
            Some(_) => cfg.usize("pole", None)?,
            None => (0..k.len()).fold(0, |b, i| if k[i] < k[b] { i } else { b }),
        };
        let kj = *k.get(j).ok_or_else(|| CliError::BadValue {
            key: "pole".into(),
            value: j.to_string(),
            why: format!("the weight has {} coordinates", k.len()),
        })?;
        return Ok(GenGegenParams::new(w.lambda() - kj, kj)?);
    }
    Ok(GenGegenParams::new(cfg.f64("lambda", None)?, cfg.f64("mu", None)?)?)
}

pub fn run(cfg: &Config, pool: &Pool) -> Result<Outcome> {
    cfg.check_keys(KEYS)?;
    let g = reduced_params(cfg)?;
    let sigma = g.lambda();
    let orders: Vec<CesaroOrder> = cfg
        .orders("delta")?
        .iter()
        .map(|o| o.resolve(sigma))
        .collect::<Result<_>>()?;
    let ns = cfg.usize_list("n")?;
    let t0 = cfg.f64("t0", Some(1.0))?;
    let model = super::model(cfg)?;

    let tasks: Vec<(CesaroOrder, usize)> = orders.iter().flat_map(|&o| ns.iter().map(move |&n| (o, n))).collect();
    let values = pool.map(&tasks, |&(order, n)| {
        let v = tn_delta(g, n, order, t0)?;
        finite(v.value, "T_n integral")?;
        Ok(v)
    })?;

    let mut table = Table::new(
        "growth",
        &["n", "delta", "lambda", "mu", "t0", "tn", "err_est", "converged"],
    );
    let mut nonconverged = 0;
    for (&(order, n), v) in tasks.iter().zip(&values) {
        nonconverged += usize::from(!v.converged);
        table.push(vec![
            n.to_string(),
            order.to_string(),
            num(g.lambda()),
            num(g.mu()),
            num(t0),
            num(v.value),
            num(v.err_est),
            v.converged.to_string(),
        ]);
    }
    let mut tables = vec![table];
    if ns.len() >= 5 {
        let mut fits = fits_table();
        for &order in &orders {
            let pts: Vec<(usize, f64)> = tasks
                .iter()
                .zip(&values)
                .filter(|(t, _)| t.0 == order)
                .map(|(t, v)| (t.1, v.value))
                .collect();
            fits.push(fit_row(order, rate_for(order, sigma), &growth_fit(&pts, model)?));
        }
        tables.push(fits);
    }
    let mut extras = Vec::new();
    if cfg.bool("plot", false)? {
        extras.push((
            "growth.gp".to_string(),
            gnuplot_script("growth.csv", 1, 6, 2, "T_n growth"),
        ));
    }
    Ok(Outcome {
        tables,
        nonconverged,
        extras,
        ..Default::default()
    })
}
