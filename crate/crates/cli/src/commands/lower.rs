//! `ckl lower-bound`: the lower-bound integral `I_n`, `T_n^δ(w_{λ,μ}; 1)`,
//! the remainder `E_n` and the `M_n` / `K_n` comparison, each with its
//! calibrate-then-track verdict.
//!
//! keys: `lambda`, `mu`, `delta`, `n` (default 32,64,128,256,512), `mk_n`
//! (default 64,128,256), `phi_points` (default 16).

use ckl_core::cesaro::CesaroOrder;
use ckl_core::estimates::{
    calibrate_lower, calibrate_upper, calibrate_window, en_remainder, kn_asymptotic, lower_integral_in, mn_direct,
    remainder_envelope, tn_delta, LowerBoundFrame, CALIBRATION_SLACK,
};
use ckl_core::orthopoly::GenGegenParams;

use super::{finite, Pool};
use crate::config::Config;
use crate::error::Result;
use crate::report::{num, Check, Outcome, Table};

const KEYS: &[&str] = &["lambda", "mu", "delta", "n", "mk_n", "phi_points"];

/// `φ_k`, geometric from `1/n` to `π/8`.
pub fn phi_grid(n: usize, points: usize) -> Vec<f64> {
    let (lo, hi) = (1.0 / n as f64, std::f64::consts::PI / 8.0);
    let k = points.max(2) - 1;
    (0..=k).map(|i| lo * (hi / lo).powf(i as f64 / k as f64)).collect()
}

#[derive(Debug, Clone, Copy)]
enum Quantity {
    In,
    Tn,
    En,
}

impl Quantity {
    fn name(&self) -> &'static str {
        match self {
            Self::In => "I_n",
            Self::Tn => "T_n",
            Self::En => "E_n",
        }
    }
}

pub fn run(cfg: &Config, pool: &Pool) -> Result<Outcome> {
    cfg.check_keys(KEYS)?;
    let lambda = cfg.f64("lambda", None)?;
    let mu = cfg.f64("mu", None)?;
    let deltas: Vec<f64> = cfg
        .orders("delta")?
        .iter()
        .map(|o| {
            o.resolve(lambda)?.value().ok_or_else(|| crate::CliError::BadValue {
                key: "delta".into(),
                value: "proj".into(),
                why: "the lower-bound frame needs a Cesàro index".into(),
            })
        })
        .collect::<Result<_>>()?;
    let ns = if cfg.has("n") {
        cfg.usize_list("n")?
    } else {
        vec![32, 64, 128, 256, 512]
    };
    let mk_ns = if cfg.has("mk_n") {
        cfg.usize_list("mk_n")?
    } else {
        vec![64, 128, 256]
    };
    let phi_points = cfg.usize("phi_points", Some(16))?;
    let frames: Vec<LowerBoundFrame> = deltas
        .iter()
        .map(|&d| LowerBoundFrame::new(lambda, mu, d))
        .collect::<ckl_core::Result<_>>()?;
    let g = GenGegenParams::new(lambda, mu)?;
    let oscillatory = mu > 0.0 && mu < 1.0;

    let mut tasks = Vec::new();
    for fi in 0..frames.len() {
        for &n in &ns {
            tasks.push((fi, n, Quantity::In));
            tasks.push((fi, n, Quantity::Tn));
            if oscillatory {
                tasks.push((fi, n, Quantity::En));
            }
        }
    }
    let values = pool.map(&tasks, |&(fi, n, q)| {
        let f = &frames[fi];
        let v = match q {
            Quantity::In => lower_integral_in(f, n)?,
            Quantity::Tn => tn_delta(g, n, CesaroOrder::Delta(f.delta), 1.0)?,
            Quantity::En => en_remainder(f, n)?,
        };
        finite(v.value, q.name())?;
        Ok(v)
    })?;

    let mut out = Outcome::default();
    let mut table = Table::new(
        "lower",
        &[
            "quantity",
            "lambda",
            "mu",
            "delta",
            "n",
            "value",
            "err_est",
            "converged",
        ],
    );
    for (&(fi, n, q), v) in tasks.iter().zip(&values) {
        out.nonconverged += usize::from(!v.converged);
        table.push(vec![
            q.name().into(),
            num(lambda),
            num(mu),
            num(frames[fi].delta),
            n.to_string(),
            num(v.value),
            num(v.err_est),
            v.converged.to_string(),
        ]);
    }
    out.tables.push(table);

    for (fi, f) in frames.iter().enumerate() {
        let series = |q: &str| -> Vec<(usize, f64)> {
            tasks
                .iter()
                .zip(&values)
                .filter(|(t, _)| t.0 == fi && t.2.name() == q)
                .map(|(t, v)| (t.1, v.value))
                .collect()
        };
        let tag = format!("lambda={lambda} mu={mu} delta={}", f.delta);
        let i_n = series("I_n");
        let t_n = series("T_n");
        let critical = f.delta >= lambda;
        let scaled_i: Vec<(usize, f64)> = i_n
            .iter()
            .map(|&(n, v)| {
                let s = v * (n as f64).powf(mu + 0.5);
                (n, if critical { s / (n as f64).ln() } else { s })
            })
            .collect();
        let scaled_t: Vec<(usize, f64)> = t_n
            .iter()
            .map(|&(n, v)| {
                let nf = n as f64;
                (
                    n,
                    if critical {
                        v / nf.ln()
                    } else {
                        v * nf.powf(f.delta - lambda)
                    },
                )
            })
            .collect();
        if critical {
            let c = calibrate_lower(&scaled_i, CALIBRATION_SLACK)?;
            out.checks.push(Check::new(
                format!("I_n n^(mu+1/2) / log n bounded below, {tag}"),
                c.pass,
                format!("c={} min={}", c.c, c.worst),
            ));
        } else {
            let c = calibrate_window(&scaled_i, CALIBRATION_SLACK)?;
            out.checks.push(Check::new(
                format!("I_n n^(mu+1/2) in window, {tag}"),
                c.pass,
                format!("c={} worst_factor={}", c.c, c.worst),
            ));
        }
        let c = calibrate_lower(&scaled_t, CALIBRATION_SLACK)?;
        out.checks.push(Check::new(
            format!(
                "T_n {} bounded below, {tag}",
                if critical { "/ log n" } else { "n^(delta-lambda)" }
            ),
            c.pass,
            format!("c={} min={}", c.c, c.worst),
        ));
        if oscillatory {
            let e_n = series("E_n");
            let enveloped: Vec<(usize, f64)> = e_n
                .iter()
                .map(|&(n, v)| {
                    let nf = n as f64;
                    let scale = nf.powf(mu + 0.5 + lambda - f.delta).min(nf.powf(1.5) / nf.ln());
                    (n, v * scale)
                })
                .collect();
            let c = calibrate_upper(&enveloped, CALIBRATION_SLACK)?;
            out.checks.push(Check::new(
                format!("E_n envelope bounded, {tag}"),
                c.pass,
                format!("c={} worst={}", c.c, c.worst),
            ));
            let ratio: Vec<f64> = e_n.iter().zip(&i_n).map(|(e, i)| e.1 / i.1).collect();
            let (first, last) = (ratio[0], ratio[ratio.len() - 1]);
            out.checks.push(Check::new(
                format!("E_n / I_n decreases, {tag}"),
                last < first,
                format!("first={first} last={last}"),
            ));
        }
    }

    if oscillatory {
        mk_sweep(&mut out, &frames, &mk_ns, phi_points, pool)?;
    }
    Ok(out)
}

fn mk_sweep(out: &mut Outcome, frames: &[LowerBoundFrame], ns: &[usize], points: usize, pool: &Pool) -> Result<()> {
    let mut tasks = Vec::new();
    for fi in 0..frames.len() {
        for &n in ns {
            for phi in phi_grid(n, points) {
                tasks.push((fi, n, phi));
            }
        }
    }
    let rows = pool.map(&tasks, |&(fi, n, phi)| {
        let f = &frames[fi];
        let m = mn_direct(f, n, phi)?;
        let k = finite(kn_asymptotic(f, n, phi)?, "K_n")?;
        finite(m.value, "M_n")?;
        Ok((m, k, remainder_envelope(f, n, phi)))
    })?;
    let mut table = Table::new(
        "mk",
        &[
            "lambda",
            "mu",
            "delta",
            "n",
            "phi",
            "m_n",
            "k_n",
            "envelope",
            "ratio",
            "converged",
        ],
    );
    for (&(fi, n, phi), (m, k, env)) in tasks.iter().zip(&rows) {
        out.nonconverged += usize::from(!m.converged);
        let f = &frames[fi];
        table.push(vec![
            num(f.lambda),
            num(f.mu),
            num(f.delta),
            n.to_string(),
            num(phi),
            num(m.value),
            num(*k),
            num(*env),
            num((m.value - k).abs() / env),
            m.converged.to_string(),
        ]);
    }
    for (fi, f) in frames.iter().enumerate() {
        let series: Vec<(usize, f64)> = ns
            .iter()
            .map(|&n| {
                let worst = tasks
                    .iter()
                    .zip(&rows)
                    .filter(|(t, _)| t.0 == fi && t.1 == n)
                    .map(|(_, (m, k, env))| (m.value - k).abs() / env)
                    .fold(0.0, f64::max);
                (n, worst)
            })
            .collect();
        let c = calibrate_upper(&series, CALIBRATION_SLACK)?;
        out.checks.push(Check::new(
            format!(
                "|M_n - K_n| within envelope, lambda={} mu={} delta={}",
                f.lambda, f.mu, f.delta
            ),
            c.pass,
            format!("c={} worst={}", c.c, c.worst),
        ));
    }
    out.tables.push(table);
    Ok(())
}
