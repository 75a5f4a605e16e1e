pub mod bounds;
pub mod growth;
pub mod kernel;
pub mod lebesgue;
pub mod lower;
pub mod selftest;

use ckl_core::cesaro::CesaroOrder;
use ckl_core::estimates::{ExpectedRate, GrowthFit, GrowthModel};
use ckl_core::kernels::DomainPoint;
use ckl_core::ReflectionWeight;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::report::{join, num, Table};

/// Fixed-size worker pool; `map` returns results in input order.
pub struct Pool(rayon::ThreadPool);

impl Pool {
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            b = b.num_threads(t.max(1));
        }
        b.build().map(Self).map_err(|e| CliError::Pool(e.to_string()))
    }

    pub fn map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
        self.0.install(|| items.par_iter().map(&f).collect())
    }
}

pub(crate) fn weight(cfg: &Config) -> Result<ReflectionWeight> {
    let d = cfg.usize("d", None)?;
    let kappa = cfg.f64_list("kappa")?;
    Ok(ReflectionWeight::new(d, &kappa)?)
}

pub(crate) fn model(cfg: &Config) -> Result<GrowthModel> {
    match cfg.raw("model").unwrap_or("select") {
        "select" => Ok(GrowthModel::Select),
        "pure" => Ok(GrowthModel::PurePower),
        "log" => Ok(GrowthModel::PowerTimesLog),
        v => Err(CliError::BadValue {
            key: "model".into(),
            value: v.into(),
            why: "expected select, pure or log".into(),
        }),
    }
}

pub(crate) fn point_text(p: &DomainPoint) -> String {
    join(p.coords(), ";")
}

pub(crate) fn kappa_text(w: &ReflectionWeight) -> String {
    join(w.kappa(), ";")
}

pub(crate) fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::NonFinite(what.to_string()))
    }
}

pub(crate) fn rate_text(r: ExpectedRate) -> String {
    match r {
        ExpectedRate::Bounded => "bounded".into(),
        ExpectedRate::Log => "log".into(),
        ExpectedRate::Power(e) => format!("n^{e}"),
    }
}

/// Expected rate for a one-dimensional reduction whose critical index is
/// `sigma`.
pub(crate) fn rate_for(order: CesaroOrder, sigma: f64) -> ExpectedRate {
    match order {
        CesaroOrder::Projection => ExpectedRate::Power(sigma),
        CesaroOrder::Delta(d) if d > sigma => ExpectedRate::Bounded,
        CesaroOrder::Delta(d) if d == sigma => ExpectedRate::Log,
        CesaroOrder::Delta(d) => ExpectedRate::Power(sigma - d),
    }
}

pub(crate) fn fits_table() -> Table {
    Table::new(
        "fits",
        &[
            "delta",
            "expected",
            "exponent",
            "log_factor",
            "residual",
            "n_min",
            "n_max",
        ],
    )
}

pub(crate) fn fit_row(order: CesaroOrder, expected: ExpectedRate, f: &GrowthFit) -> Vec<String> {
    vec![
        order.to_string(),
        rate_text(expected),
        num(f.exponent),
        f.log_factor.to_string(),
        num(f.residual),
        f.n_range.0.to_string(),
        f.n_range.1.to_string(),
    ]
}
