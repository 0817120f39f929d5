//! Dirichlet levels of the unit circular billiard, `E = j_{n,k}^2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bessel::{bessel_zero, bessel_zeros_below};
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// What to do with the exact two-fold degeneracy of every `n > 0` level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyPolicy {
    #[default]
    KeepOnce,
    KeepBoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilliardLevels {
    pub n_max: usize,
    pub k_max: usize,
    pub policy: DegeneracyPolicy,
}

impl BilliardLevels {
    /// All angular orders that have a zero below `j_{0,k_max}`.
    pub fn complete(k_max: usize, policy: DegeneracyPolicy) -> Self {
        // j_{n,1} > n, so no order beyond the cutoff contributes
        let cutoff = std::f64::consts::PI * (k_max as f64 + 0.25);
        BilliardLevels {
            n_max: cutoff.ceil() as usize,
            k_max,
            policy,
        }
    }
}

/// Levels `j_{n,k}^2` for `n <= n_max`, truncated strictly below
/// `j_{0,k_max}^2` so the spectrum is complete up to the cutoff.
pub fn circular_billiard_levels(b: &BilliardLevels) -> Result<Spectrum> {
    if b.k_max == 0 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    let cutoff = bessel_zero(0, b.k_max)?;
    let per_order = (0..=b.n_max as u32)
        .into_par_iter()
        .map(|n| {
            let zeros = bessel_zeros_below(n, cutoff)?;
            let copies = match (b.policy, n) {
                (DegeneracyPolicy::KeepBoth, n) if n > 0 => 2,
                _ => 1,
            };
            Ok(zeros
                .into_iter()
                .take(b.k_max)
                .flat_map(|z| std::iter::repeat_n(z * z, copies))
                .collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let levels: Vec<f64> = per_order.into_iter().flatten().collect();
    Spectrum::new(
        levels,
        format!(
            "circle-billiard n_max={} k_max={} policy={:?}",
            b.n_max, b.k_max, b.policy
        ),
    )
}

/// The lowest `count` levels, using the smallest complete cutoff that
/// provides them.
pub fn lowest_billiard_levels(count: usize, policy: DegeneracyPolicy) -> Result<Spectrum> {
    if count < 3 {
        return Err(Error::size(format!("need at least 3 levels, asked for {count}")));
    }
    // Weyl: about E/4 states below E counting degeneracy, E ~ (pi k)^2
    let per_state = match policy {
        DegeneracyPolicy::KeepOnce => 8.0,
        DegeneracyPolicy::KeepBoth => 4.0,
    };
    let mut k_max =
        ((per_state * count as f64).sqrt() / std::f64::consts::PI).ceil() as usize + 2;
    loop {
        let s = circular_billiard_levels(&BilliardLevels::complete(k_max, policy))?;
        if s.len() >= count {
            let mut levels = s.into_levels();
            levels.truncate(count);
            return Spectrum::new(
                levels,
                format!("circle-billiard lowest {count} policy={policy:?}"),
            );
        }
        k_max += k_max / 10 + 1;
    }
}
