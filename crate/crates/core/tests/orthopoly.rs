use ckl_core::orthopoly::*;
use ckl_core::quadrature::{gauss_jacobi_rule, gen_gegenbauer_rule, integrate_weighted};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Three-term recurrence carried out in exact rationals.
fn jacobi_rational(n: usize, a: BigRational, b: BigRational, t: BigRational) -> BigRational {
    let one = q(1, 1);
    let two = q(2, 1);
    let mut prev = one.clone();
    if n == 0 {
        return prev;
    }
    let mut cur = ((&a + &b + &two) * &t + (&a - &b)) / &two;
    for k in 2..=n {
        let kk = q(k as i64, 1);
        let s = &two * &kk + &a + &b;
        let c1 = &two * &kk * (&kk + &a + &b) * (&s - &two);
        let c2 = (&s - &one) * (&s * (&s - &two) * &t + &a * &a - &b * &b);
        let c3 = &two * (&kk + &a - &one) * (&kk + &b - &one) * &s;
        let next = (c2 * &cur - c3 * &prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

#[test]
fn jacobi_values() {
    let p = JacobiParams::new(1.0, 0.0).unwrap();
    assert_eq!(jacobi_eval(0, p, 0.3), 1.0);
    assert_eq!(jacobi_eval(2, p, 1.0), 3.0);
    let p = JacobiParams::new(0.7, -0.3).unwrap();
    let exact = jacobi_rational(5, q(7, 10), q(-3, 10), q(41, 100)).to_f64().unwrap();
    let v = jacobi_eval(5, p, 0.41);
    assert!((v - exact).abs() <= 1e-13 * exact.abs(), "{v} vs {exact}");
}

#[test]
fn l2norms() {
    let p = JacobiParams::new(0.0, 0.0).unwrap();
    assert!((jacobi_l2norm(0, p) - 2.0).abs() < 1e-15);
    assert!((jacobi_l2norm(1, p) - 2.0 / 3.0).abs() < 1e-15);
    let p = JacobiParams::new(1.5, 0.5).unwrap();
    let rule = gauss_jacobi_rule(8, p).unwrap();
    let oracle = integrate_weighted(|t| jacobi_eval(3, p, t).powi(2), &rule).unwrap();
    assert!((jacobi_l2norm(3, p) - oracle).abs() < 1e-12 * oracle);
}

fn rising(x: f64, k: usize) -> f64 {
    (0..k).map(|j| x + j as f64).product()
}

#[test]
fn gegenbauer_values() {
    assert!((gegenbauer_eval(2, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-14);
    assert!((gegenbauer_eval(1, 0.5, 0.2).unwrap() - 0.2).abs() < 1e-15);
    // C_n^λ = (2λ)_n / (λ+1/2)_n · P_n^{(λ-1/2, λ-1/2)}.
    let (n, l, t) = (6, 2.5, -0.37);
    let p = JacobiParams::new(l - 0.5, l - 0.5).unwrap();
    let oracle = rising(2.0 * l, n) / rising(l + 0.5, n) * jacobi_eval(n, p, t);
    let v = gegenbauer_eval(n, l, t).unwrap();
    assert!((v - oracle).abs() < 1e-12 * oracle.abs().max(1.0));
}

#[test]
fn gen_gegenbauer_values() {
    let g = GenGegenParams::new(0.8, 0.3).unwrap();
    assert_eq!(gen_gegenbauer_eval(0, g, 0.4), 1.0);
    let g = GenGegenParams::new(0.5, 0.5).unwrap();
    assert!((gen_gegenbauer_eval(1, g, 0.7) - 0.7).abs() < 1e-15);
    // μ = 0 is a multiple of the Gegenbauer polynomial, the factor fixed by t = 1.
    let (l, n) = (1.2, 4);
    let g = GenGegenParams::new(l, 0.0).unwrap();
    let at_one = rising(l, 2) / rising(0.5, 2) * rising(l + 0.5, 2) / 2.0;
    let ratio = at_one / (rising(2.0 * l, n) / rising(1.0, n));
    for t in [0.3, -0.8, 0.95] {
        let v = gen_gegenbauer_eval(n, g, t);
        let e = ratio * gegenbauer_eval(n, l, t).unwrap();
        assert!((v - e).abs() < 1e-12 * e.abs().max(1.0), "t={t}: {v} vs {e}");
    }
}

#[test]
fn gen_gegenbauer_orthonormal_oracles() {
    let g = GenGegenParams::new(1.0, 0.5).unwrap();
    let c0 = gen_gegenbauer_orthonormal(0, g, 0.3).unwrap();
    assert!(c0 > 0.0 && (c0 - 1.0 / g.total_mass().sqrt()).abs() < 1e-14);

    let g = GenGegenParams::new(0.8, 0.6).unwrap();
    let (x, w) = gen_gegenbauer_rule(12, g).unwrap();
    let ip: f64 = x
        .iter()
        .zip(&w)
        .map(|(&t, &wt)| {
            wt * gen_gegenbauer_orthonormal(3, g, t).unwrap() * gen_gegenbauer_orthonormal(5, g, t).unwrap()
        })
        .sum();
    assert!(ip.abs() < 1e-12);

    // Gram–Schmidt on 1, t, t² with quadrature inner products.
    let g = GenGegenParams::new(1.0, 1.0).unwrap();
    let (x, w) = gen_gegenbauer_rule(8, g).unwrap();
    let inner = |f: &dyn Fn(f64) -> f64, h: &dyn Fn(f64) -> f64| -> f64 {
        x.iter().zip(&w).map(|(&t, &wt)| wt * f(t) * h(t)).sum()
    };
    let n0 = inner(&|_| 1.0, &|_| 1.0).sqrt();
    let e0 = move |_t: f64| 1.0 / n0;
    let c = inner(&|t| t * t, &e0);
    let r = move |t: f64| t * t - c * e0(t);
    let n2 = inner(&r, &r).sqrt();
    let oracle = r(0.5) / n2;
    let v = gen_gegenbauer_orthonormal(2, g, 0.5).unwrap();
    assert!((v - oracle).abs() < 1e-10, "{v} vs {oracle}");
}

#[test]
fn szego_main_term_value_and_residual() {
    let p = JacobiParams::new(0.0, 0.0).unwrap();
    let v = szego_main_term(20, p, PI / 2.0).unwrap();
    let e = (PI * 20.0).sqrt().recip() * 2f64.sqrt() * (20.5 * PI / 2.0 - PI / 4.0).cos();
    assert!((v - e).abs() < 1e-14);

    for (a, b) in [(0.0, 0.0), (1.5, 0.5)] {
        let p = JacobiParams::new(a, b).unwrap();
        let worst = |n: usize| -> f64 {
            let lo = 1.0 / n as f64;
            (0..=200)
                .map(|k| lo + (PI - 2.0 * lo) * k as f64 / 200.0)
                .map(|th| {
                    let r = (szego_main_term(n, p, th).unwrap() - jacobi_eval(n, p, th.cos())).abs();
                    r / ((n as f64).powf(-1.5) * th.sin().powf(-a - 1.5))
                })
                .fold(0.0, f64::max)
        };
        let c = worst(16);
        for n in [32, 64, 128, 256] {
            assert!(worst(n) <= 2.0 * c, "({a},{b}) n={n}");
        }
    }

    let p = JacobiParams::new(0.5, 0.5).unwrap();
    let th = PI / 3.0;
    let main = szego_main_term(40, p, th).unwrap();
    let env = (PI * 40.0).sqrt().recip() * (th / 2.0).sin().powf(-1.0) * (th / 2.0).cos().powf(-1.0);
    if main.abs() > 2.0 / (40.0 * th.sin()) * env {
        assert_eq!(main.signum(), jacobi_eval(40, p, th.cos()).signum());
    }
}

#[test]
fn upper_bound_sweep() {
    assert!((jacobi_upper_bound(10, 0.0, 0.0) - 10f64.powf(-0.5) * 1.01f64.powf(-0.25)).abs() < 1e-15);
    assert_eq!(jacobi_upper_bound(1, -0.5, 0.37), 1.0);
    let p = JacobiParams::new(2.5, 0.5).unwrap();
    let ratio = |n: usize| -> f64 {
        (0..=400)
            .map(|k| k as f64 / 400.0)
            .map(|t| jacobi_eval(n, p, t).abs() / jacobi_upper_bound(n, 2.5, t))
            .fold(0.0, f64::max)
    };
    let c = ratio(8);
    for n in [16, 32, 64, 128, 256] {
        assert!(ratio(n) <= 2.0 * c, "n={n}: {} vs {c}", ratio(n));
    }
}

#[test]
fn derivative_identity() {
    // P_n^{(a+1/2,b+1/2)}(y) = 2/(n+a+b+1) · d/dy P_{n+1}^{(a-1/2,b-1/2)}(y).
    let (a, b) = (1.3, 0.6);
    let hi = JacobiParams::new(a + 0.5, b + 0.5).unwrap();
    let lo = JacobiParams::new(a - 0.5, b - 0.5).unwrap();
    let h = 2e-4;
    for n in 0..=20 {
        for k in 0..=20 {
            let y = -0.95 + 1.9 * k as f64 / 20.0;
            let f = |s: f64| jacobi_eval(n + 1, lo, y + s);
            let d = (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
            let lhs = jacobi_eval(n, hi, y);
            let rhs = 2.0 / (n as f64 + a + b + 1.0) * d;
            assert!(
                (lhs - rhs).abs() < 1e-7 * lhs.abs().max(1.0),
                "n={n} y={y}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn quadratic_transform() {
    let l = 1.3;
    let p1 = JacobiParams::new(l, -0.5).unwrap();
    let p2 = JacobiParams::new(l, l).unwrap();
    for n in 1..=10 {
        let ratios: Vec<f64> = [0.15, 0.4, 0.77, 0.93]
            .iter()
            .map(|&t| jacobi_eval(n, p1, 2.0 * t * t - 1.0) / jacobi_eval(2 * n, p2, t))
            .collect();
        for r in &ratios[1..] {
            assert!((r - ratios[0]).abs() < 1e-10 * ratios[0].abs(), "n={n}: {ratios:?}");
        }
    }
}

#[test]
fn orthogonality() {
    for (a, b) in [(0.0, 0.0), (1.3, 0.2), (-0.5, 2.0)] {
        let p = JacobiParams::new(a, b).unwrap();
        let rule = gauss_jacobi_rule(14, p).unwrap();
        for m in 0..=12 {
            for n in 0..m {
                let v = integrate_weighted(|t| jacobi_eval(m, p, t) * jacobi_eval(n, p, t), &rule).unwrap();
                let scale = (jacobi_l2norm(m, p) * jacobi_l2norm(n, p)).sqrt();
                assert!((v / scale).abs() < 1e-12, "({a},{b}) m={m} n={n}");
            }
        }
    }
}
