#![allow(dead_code)]

use std::io::Write;

use num_complex::Complex64;
use qgeom::states::{BlochFamily, Ket};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smooth two-parameter Bloch family with `|r| < 0.9`:
/// `r = 0.9 v / sqrt(1 + |v|^2)`, `v_i = a_i + sum_j b_ij sin(c_ij x_j + p_ij)`.
pub fn random_bloch_family(rng: &mut ChaCha8Rng) -> BlochFamily {
    let a: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let b: [[f64; 2]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
    let c: [[f64; 2]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(0.5..2.0)));
    let p: [[f64; 2]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-3.0..3.0)));
    BlochFamily::new(2, move |x| {
        let v: [f64; 3] = std::array::from_fn(|i| {
            a[i] + (0..2).map(|j| b[i][j] * (c[i][j] * x[j] + p[i][j]).sin()).sum::<f64>()
        });
        let s = 0.9 / (1.0 + v.iter().map(|t| t * t).sum::<f64>()).sqrt();
        v.map(|t| s * t)
    })
}

pub fn random_point(rng: &mut ChaCha8Rng, d: usize, half_width: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-half_width..half_width)).collect()
}

pub fn random_ket(rng: &mut ChaCha8Rng, dim: usize) -> Ket {
    let v = Ket::from_fn(dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let n = v.norm();
    v.unscale(n)
}

pub fn sech2(b: f64) -> f64 {
    1.0 / b.cosh().powi(2)
}

/// Writes past the test harness's output capture so the line lands in the log.
pub fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}
