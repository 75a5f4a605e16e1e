//! Thin wrappers over `libm` so the rest of the crate reads like ordinary
//! float code while staying `no_std`.

pub(crate) use libm::{cos, exp, fabs as abs, log as ln, pow, sin, sqrt};

pub(crate) const PI: f64 = core::f64::consts::PI;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Ratio of rising factorials `(a)_n / (b)_n`, `b > 0`.
///
/// Direct product for small `n`; through log-gamma beyond that, where the
/// individual factorials would overflow.
pub(crate) fn pochhammer_ratio(a: f64, b: f64, n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if a == 0.0 {
        return 0.0;
    }
    if n <= 30 || a < 0.0 {
        let mut r = 1.0;
        for j in 0..n {
            let j = j as f64;
            r *= (a + j) / (b + j);
        }
        return r;
    }
    let nf = n as f64;
    exp(ln_gamma(a + nf) - ln_gamma(a) - ln_gamma(b + nf) + ln_gamma(b))
}

/// Binomial coefficient as an exact integer (small arguments only).
pub(crate) fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
