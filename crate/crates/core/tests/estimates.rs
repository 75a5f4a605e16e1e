use ckl_core::cesaro::CesaroOrder;
use ckl_core::estimates::*;
use ckl_core::kernels::{circle_point, DomainPoint};
use ckl_core::math::ln_beta;
use ckl_core::orthopoly::{jacobi_eval, GenGegenParams, JacobiParams};
use ckl_core::ReflectionWeight;
use std::f64::consts::PI;

fn sphere_pt(v: &[f64]) -> DomainPoint {
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    DomainPoint::sphere(&v.iter().map(|c| c / n).collect::<Vec<_>>()).unwrap()
}

#[test]
fn bound_arithmetic() {
    let w = ReflectionWeight::new(2, &[0.0, 0.0, 0.0]).unwrap();
    let x = sphere_pt(&[0.3, -0.4, 0.8]);
    let y = sphere_pt(&[-0.5, 0.1, 0.6]);
    let dist: f64 = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| (a.abs() - b.abs()).powi(2))
        .sum::<f64>()
        .sqrt();
    let (n, delta) = (12usize, 0.7);
    let nf = n as f64;
    let bp = BoundParams::new(n, CesaroOrder::Delta(delta), w.clone());
    let v = bound_sphere_cesaro(&bp, &x, &y).unwrap();
    let e = nf.powf(0.5 - delta) * (dist + 1.0 / nf).powf(-delta - 1.5) + (dist + 1.0 / nf).powf(-3.0) / nf;
    assert!((v - e).abs() < 1e-13 * e);

    let w = ReflectionWeight::new(2, &[0.5, 1.0, 1.5]).unwrap();
    let bp = BoundParams::new(n, CesaroOrder::Delta(delta), w.clone());
    let prod: f64 = w
        .kappa()
        .iter()
        .zip(x.coords())
        .map(|(k, c)| (c * c + 1.0 / (nf * nf)).powf(-k))
        .product();
    let v = bound_sphere_cesaro(&bp, &x, &x).unwrap();
    let t1 = nf.powf(2.0) * prod;
    assert!((v - 2.0 * t1).abs() < 1e-12 * v, "{v} vs {t1}");
    let v = bound_sphere_proj(n, &w, &x, &x).unwrap();
    assert!((v - nf * prod).abs() < 1e-12 * v);
}

#[test]
fn main_estimate_closed_form() {
    let p = JacobiParams::new(1.5, 0.5).unwrap();
    let q = JacobiParams::new(0.5, -0.5).unwrap();
    for n in [1, 5, 20, 64] {
        for (a, x) in [(0.3, 0.2), (0.7, -0.25), (0.05, 0.9)] {
            let m = main_estimate_check(n, &[1.0], &[a], x, p, None).unwrap();
            let nf = n as f64;
            let cf = (2.0 / (a * (nf + 2.0)) * (jacobi_eval(n + 1, q, x + a) - jacobi_eval(n + 1, q, x - a))).abs();
            assert!((m.lhs - cf).abs() <= 1e-12 * cf.max(1.0), "n={n}: {} vs {cf}", m.lhs);
        }
    }
    assert!(main_estimate_check(8, &[1.0], &[0.0], 0.2, p, None).is_err());
    assert!(main_estimate_check(8, &[1.0], &[0.6], 0.5, p, None).is_err());
    let phi = |t: f64| 1.0 + 0.0 * t;
    let a = main_estimate_check(9, &[0.6, 0.9], &[0.2, -0.3], 0.1, p, None).unwrap();
    let b = main_estimate_check(9, &[0.6, 0.9], &[0.2, -0.3], 0.1, p, Some(&[&phi, &phi])).unwrap();
    assert!((a.lhs - b.lhs).abs() < 1e-12 * a.lhs.max(1e-3));
}

/// Classical Lebesgue constant `(1/π) ∫_0^π |sin((n+1/2)θ) / sin(θ/2)| dθ`
/// by composite Simpson between consecutive zeros.
fn dirichlet_lebesgue(n: usize) -> f64 {
    let m = n as f64 + 0.5;
    let f = |t: f64| {
        if t == 0.0 {
            2.0 * m
        } else {
            ((m * t).sin() / (t / 2.0).sin()).abs()
        }
    };
    let mut total = 0.0;
    for k in 0..=n {
        let (a, b) = (PI * k as f64 / m, (PI * (k + 1) as f64 / m).min(PI));
        let steps = 400;
        let h = (b - a) / steps as f64;
        let mut s = f(a) + f(b);
        for i in 1..steps {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        total += s * h / 3.0;
    }
    total / PI
}

#[test]
fn lebesgue_examples() {
    let w = ReflectionWeight::new(1, &[0.0, 0.0]).unwrap();
    let x = circle_point(0.3);
    let bp = BoundParams::new(0, CesaroOrder::Delta(0.0), w.clone());
    assert_eq!(lebesgue_at_point(&bp, &x, 8).unwrap().value, 1.0);
    for n in [4, 16, 40] {
        let bp = BoundParams::new(n, CesaroOrder::Delta(0.0), w.clone());
        let v = lebesgue_at_point(&bp, &x, 4 * n).unwrap();
        let e = dirichlet_lebesgue(n);
        assert!((v.value - e).abs() < 1e-6, "n={n}: {} vs {e}", v.value);
    }
    let bp = BoundParams::new(10, CesaroOrder::Delta(0.0), w.clone());
    assert!(lebesgue_at_point(&bp, &x, 39).is_err());

    let w = ReflectionWeight::new(2, &[0.5, 1.0, 0.7]).unwrap();
    for j in 0..2 {
        let mut e = vec![0.0; 2];
        e[j] = 1.0;
        let pole = DomainPoint::ball(&e).unwrap();
        let kj = w.kappa()[j];
        let g = GenGegenParams::new(w.lambda() - kj, kj).unwrap();
        for order in [CesaroOrder::Delta(0.0), CesaroOrder::Delta(1.5)] {
            let bp = BoundParams::new(9, order, w.clone());
            let v = lebesgue_at_point(&bp, &pole, 36).unwrap();
            let t = tn_delta(g, 9, order, 1.0).unwrap();
            assert!((v.value - t.value).abs() < 1e-6 && v.value >= 1.0);
        }
    }
}

#[test]
fn pole_reduction_matches_general_integral() {
    let w = ReflectionWeight::new(1, &[0.5, 1.0]).unwrap();
    let bp = BoundParams::new(8, CesaroOrder::Delta(0.5), w);
    let pole = DomainPoint::sphere(&[1.0, 0.0]).unwrap();
    let eps: f64 = 1e-9;
    let near = DomainPoint::sphere(&[eps.cos(), eps.sin()]).unwrap();
    let a = lebesgue_at_point(&bp, &pole, 64).unwrap();
    let b = lebesgue_at_point(&bp, &near, 64).unwrap();
    assert!((a.value - b.value).abs() < 1e-5 * a.value, "{} vs {}", a.value, b.value);
    let general = lebesgue_at_point(&bp, &sphere_pt(&[0.6, -0.8]), 64).unwrap();
    assert!(general.converged && general.value >= 1.0 - 1e-9);
}

#[test]
fn tn_lower_limits() {
    let g = GenGegenParams::new(1.0, 0.5).unwrap();
    assert_eq!(tn_delta(g, 0, CesaroOrder::Delta(0.0), 1.0).unwrap().value, 1.0);
    for n in [1, 7, 30] {
        for order in [CesaroOrder::Delta(0.0), CesaroOrder::Delta(2.0)] {
            let t = tn_delta(g, n, order, 1.0).unwrap();
            assert!(t.converged && t.value >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn lower_integral_closed_forms() {
    let f = LowerBoundFrame::new(1.0, 0.5, 0.0).unwrap();
    let i0 = lower_integral_in(&f, 0).unwrap().value;
    let e = 0.5 * ln_beta(f.mu + 0.5, f.lambda + 0.5).exp();
    assert!((i0 - e).abs() < 1e-10);
    assert!(LowerBoundFrame::new(0.5, 0.5, 0.8).is_err());
    for n in [8, 32] {
        assert!(lower_integral_in(&f, n).unwrap().value > 0.0);
        assert!(en_remainder(&f, n).unwrap().value > 0.0);
    }

    // With the oscillation removed and a = b = -1 the integrand is
    // (cos²φ - cos²θ)^{μ-1} sin θ / 2, whose integral is c^{2μ-1} B(1/2, μ) / 2.
    for (mu, phi) in [(0.5, 0.2), (0.3, 0.6)] {
        let c: f64 = f64::cos(phi);
        let v = endpoint_singular_integral(mu, phi, 4, 0.0, |th| 0.5 * th.sin());
        let e = 0.5 * c.powf(2.0 * mu - 1.0) * ln_beta(0.5, mu).exp();
        assert!((v.value - e).abs() < 1e-8, "{} vs {e}", v.value);
    }

    let n = 64;
    let nn = f.big_n(n);
    for phi in [0.05, 0.3] {
        let m = mn_direct(&f, n, phi).unwrap();
        let abs = endpoint_singular_integral(f.mu, phi, 8, 1e-10, |th| {
            ((nn * th + f.tau()).cos() / ((th / 2.0).sin().powf(f.a) * (th / 2.0).cos().powf(f.b))).abs()
        });
        assert!(m.value.abs() <= abs.value + 1e-8);
    }

    let k0 = kn_asymptotic(&f, 64, PI / 4.0).unwrap();
    let k1 = kn_asymptotic(&f, 64, PI / 4.0 - 1e-7).unwrap();
    assert!(k0.is_finite() && (k0 - k1).abs() < 1e-4 * k0.abs().max(1.0));
}

#[test]
fn rates_and_fits() {
    let w = ReflectionWeight::new(2, &[1.0, 2.0, 3.0]).unwrap();
    assert_eq!(sigma_and_critical(&w, &[]).0, 5.5);
    let (s, table) = sigma_and_critical(
        &w,
        &[
            CesaroOrder::Delta(5.5),
            CesaroOrder::Delta(1.5),
            CesaroOrder::Projection,
        ],
    );
    assert_eq!(table[0].1, ExpectedRate::Log);
    assert_eq!(table[1].1, ExpectedRate::Power(s - 1.5));
    assert_eq!(table[2].1, ExpectedRate::Power(s));

    let planted: Vec<(usize, f64)> = [16usize, 32, 64, 128, 256]
        .iter()
        .map(|&n| (n, 3.0 * (n as f64).powf(1.7) * (n as f64).ln()))
        .collect();
    let fit = growth_fit(&planted, GrowthModel::PowerTimesLog).unwrap();
    assert!(fit.log_factor && (fit.exponent - 1.7).abs() < 1e-10);
    assert_eq!(fit.n_range, (16, 256));
    assert!(growth_fit(
        &[(2, 1.0), (4, 0.0), (8, 1.0), (16, 1.0), (32, 1.0)],
        GrowthModel::PurePower
    )
    .is_err());

    let w = ReflectionWeight::new(1, &[0.0, 0.0]).unwrap();
    let pts: Vec<(usize, f64)> = [32usize, 64, 128, 256, 512]
        .iter()
        .map(|&n| {
            let bp = BoundParams::new(n, CesaroOrder::Delta(0.0), w.clone());
            (n, lebesgue_at_point(&bp, &circle_point(0.0), 4 * n).unwrap().value)
        })
        .collect();
    let fit = growth_fit(&pts, GrowthModel::Select).unwrap();
    assert!(fit.log_factor && fit.exponent.abs() < 0.15, "{fit:?}");
}
