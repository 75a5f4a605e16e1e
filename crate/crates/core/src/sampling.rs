//! Deterministic low-discrepancy points on the sphere, ball and simplex.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernels::{Domain, DomainPoint};
use crate::math::{cos, sin, sqrt, PI};

const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u32) -> f64 {
    let b64 = b as u64;
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b64) as f64;
        i /= b64;
        f *= inv;
    }
    r
}

/// Halton sequence in `dim` dimensions; the seed selects a disjoint block
/// of indices so that different seeds give different, reproducible points.
#[derive(Debug, Clone)]
pub struct Halton {
    dim: usize,
    next: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 || dim > PRIMES.len() {
            return Err(Error::Unsupported("Halton dimension must be between 1 and 12"));
        }
        Ok(Self {
            dim,
            next: 1 + seed.wrapping_mul(1 << 20),
        })
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        let i = self.next;
        self.next += 1;
        PRIMES[..self.dim].iter().map(|&b| radical_inverse(i, b)).collect()
    }
}

/// Uniform point of `S^d`, `d ∈ {1, 2}`, from `d` numbers in `[0, 1)`.
fn sphere_from_unit(d: usize, u: &[f64]) -> Vec<f64> {
    match d {
        1 => {
            let t = 2.0 * PI * u[0];
            alloc::vec![cos(t), sin(t)]
        }
        _ => {
            let z = 2.0 * u[0] - 1.0;
            let r = sqrt((1.0 - z * z).max(0.0));
            let t = 2.0 * PI * u[1];
            alloc::vec![r * cos(t), r * sin(t), z]
        }
    }
}

fn to_domain(domain: Domain, d: usize, s: Vec<f64>) -> Result<DomainPoint> {
    match domain {
        Domain::Sphere => DomainPoint::sphere(&s),
        Domain::Ball => DomainPoint::ball(&s[..d]),
        Domain::Simplex => {
            let v: Vec<f64> = s[..d].iter().map(|c| c * c).collect();
            DomainPoint::simplex(&v)
        }
    }
}

/// `count` pairs `(x, y)` on the given domain of dimension `d ∈ {1, 2}`.
pub fn sample_pairs(domain: Domain, d: usize, count: usize, seed: u64) -> Result<Vec<(DomainPoint, DomainPoint)>> {
    if !(1..=2).contains(&d) {
        return Err(Error::Unsupported("sampling is provided for d = 1, 2"));
    }
    let mut h = Halton::new(2 * d, seed)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let u = h.next_point();
        let x = to_domain(domain, d, sphere_from_unit(d, &u[..d]))?;
        let y = to_domain(domain, d, sphere_from_unit(d, &u[d..]))?;
        out.push((x, y));
    }
    Ok(out)
}

/// `count` single points on the given domain.
pub fn sample_points(domain: Domain, d: usize, count: usize, seed: u64) -> Result<Vec<DomainPoint>> {
    if !(1..=2).contains(&d) {
        return Err(Error::Unsupported("sampling is provided for d = 1, 2"));
    }
    let mut h = Halton::new(d, seed)?;
    (0..count)
        .map(|_| to_domain(domain, d, sphere_from_unit(d, &h.next_point())))
        .collect()
}
