//! Integer-order Bessel functions of the first kind and their zeros.
//!
//! `J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt` has a smooth periodic
//! integrand, so the trapezoidal rule converges geometrically once the
//! number of nodes exceeds `n + x` by a margin. This stays accurate through
//! the transition region `x ~ n`, where neither the ascending series nor the
//! large-argument expansion is usable.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn trapezoid_nodes(n: u32, x: f64) -> usize {
    let x = x.abs();
    (n as f64 + x + 12.0 * x.cbrt() + 40.0).ceil() as usize
}

/// `(J_n(x), J_n'(x))`.
pub fn bessel_j_with_derivative(n: u32, x: f64) -> (f64, f64) {
    let m = trapezoid_nodes(n, x);
    let h = 2.0 * PI / m as f64;
    let nf = n as f64;
    let (mut value, mut slope) = (0.0, 0.0);
    for i in 0..m {
        let t = i as f64 * h;
        let (st, _) = t.sin_cos();
        let (s, c) = (nf * t - x * st).sin_cos();
        value += c;
        slope += s * st;
    }
    (value / m as f64, slope / m as f64)
}

pub fn bessel_j(n: u32, x: f64) -> f64 {
    bessel_j_with_derivative(n, x).0
}

/// McMahon's large-zero expansion for `j_{n,k}`.
pub fn mcmahon_guess(n: u32, k: usize) -> f64 {
    let mu = 4.0 * (n as f64).powi(2);
    let b = (k as f64 + 0.5 * n as f64 - 0.25) * PI;
    let b8 = 8.0 * b;
    b - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8.powi(5))
}

/// Refines a zero of `J_n` inside a sign-changing bracket `[a, b]` by
/// safeguarded Newton steps, falling back to bisection.
fn refine_zero(n: u32, mut a: f64, mut b: f64, guess: f64) -> Result<f64> {
    let mut fa = bessel_j(n, a);
    let mut x = if guess > a && guess < b { guess } else { 0.5 * (a + b) };
    for _ in 0..200 {
        let (f, df) = bessel_j_with_derivative(n, x);
        if f == 0.0 {
            return Ok(x);
        }
        if (f > 0.0) == (fa > 0.0) {
            a = x;
            fa = f;
        } else {
            b = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= 1e-15 * x.abs() || (b - a) <= 2e-15 * x.abs() {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::numeric(format!(
        "zero of J_{n} in [{a}, {b}] did not converge"
    )))
}

/// All positive zeros of `J_n` strictly below `limit`, ascending.
///
/// Consecutive zeros are more than 3 apart, so a sign scan with step 1
/// brackets each of them exactly once. No zero lies below `n`.
pub fn bessel_zeros_below(n: u32, limit: f64) -> Result<Vec<f64>> {
    let mut zeros = Vec::new();
    let start = if n == 0 { 0.5 } else { n as f64 };
    if start >= limit {
        return Ok(zeros);
    }
    let mut a = start;
    let mut fa = bessel_j(n, a);
    let step = 1.0;
    while a < limit {
        let b = (a + step).min(limit);
        let fb = bessel_j(n, b);
        if fa == 0.0 && a > 0.0 {
            zeros.push(a);
        } else if (fa > 0.0) != (fb > 0.0) && fb != 0.0 {
            let guess = mcmahon_guess(n, zeros.len() + 1);
            let z = refine_zero(n, a, b, guess)
                .map_err(|e| Error::numeric(format!("{e} (order {n}, zero {})", zeros.len() + 1)))?;
            if z < limit {
                zeros.push(z);
            }
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

/// The `k`-th positive zero `j_{n,k}` (1-based).
pub fn bessel_zero(n: u32, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("zeros are numbered from 1"));
    }
    // j_{n,k} < n + k pi + 2 n^(1/3) + pi comfortably
    let limit = n as f64 + (k as f64 + 1.0) * PI + 2.0 * (n as f64).cbrt() + 10.0;
    let zeros = bessel_zeros_below(n, limit)?;
    zeros
        .get(k - 1)
        .copied()
        .ok_or_else(|| Error::numeric(format!("zero {k} of J_{n} not bracketed below {limit}")))
}
