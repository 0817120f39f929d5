//! Reference ratio distributions.
//!
//! Two families are provided:
//!
//! * the Wigner-like ratio surmise `C (r + r^2)^b / (1 + r + r^2)^(1 + 3b/2)`
//!   at any real index `b > 0`, normalized numerically;
//! * the ratio of two independent `k`-th order spacings of uncorrelated
//!   levels, `(2k-1)!/((k-1)!)^2 r^(k-1) / (1+r)^(2k)`.
//!
//! Both satisfy `pdf(1/r) = r^2 pdf(r)`, so `cdf(r) = 1 - cdf(1/r)` and
//! the median is exactly 1. The CDF machinery only ever works on `[0, 1]`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quad;

/// Number of CDF panels on the mapped coordinate `t = r^(1/4)`.
const CDF_PANELS: usize = 512;
/// Power of the map `r = t^GRID_POWER`; flattens the `r^b` cusp at zero.
const GRID_POWER: i32 = 4;

/// Which analytic family a [`TheoryDist`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    WignerRatio { beta: f64 },
    PoissonHosr { k: usize },
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::WignerRatio { beta } => write!(f, "wigner_ratio(beta={beta})"),
            Family::PoissonHosr { k } => write!(f, "poisson_hosr(k={k})"),
        }
    }
}

/// Unnormalized Wigner-like ratio density.
fn wigner_kernel(r: f64, beta: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let q = 1.0 + r + r * r;
    (beta * (r + r * r).ln() - (1.0 + 1.5 * beta) * q.ln()).exp()
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("Dyson index must be positive, got {beta}")))
    }
}

/// `C_b` such that the Wigner-like ratio density integrates to one.
///
/// The integral over `[1, inf)` is mapped onto `[0, 1]` by `r -> 1/u`.
pub fn normalization_constant(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let lower = quad::integrate(|r| wigner_kernel(r, beta), 0.0, 1.0, 1e-15, 1e-12)?;
    let upper = quad::integrate(
        |u| {
            if u <= 0.0 {
                0.0
            } else {
                wigner_kernel(1.0 / u, beta) / (u * u)
            }
        },
        0.0,
        1.0,
        1e-15,
        1e-12,
    )?;
    let total = lower + upper;
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::numeric(format!(
            "normalization integral for beta={beta} is {total}"
        )));
    }
    Ok(1.0 / total)
}

pub fn wigner_ratio_pdf(r: f64, beta: f64) -> Result<f64> {
    Ok(normalization_constant(beta)? * wigner_kernel(r, beta))
}

/// `(2k-1)! / ((k-1)!)^2`, exact while it fits a double's mantissa.
fn poisson_log_coefficient(k: usize) -> f64 {
    ln_gamma(2.0 * k as f64) - 2.0 * ln_gamma(k as f64)
}

fn poisson_coefficient_exact(k: usize) -> Option<f64> {
    // k * C(2k-1, k-1) stays below 2^53 up to k = 26
    if k > 26 {
        return None;
    }
    let mut binom: u64 = 1;
    for j in 0..(k as u64 - 1) {
        binom = binom * (2 * k as u64 - 1 - j) / (j + 1);
    }
    Some((k as u64 * binom) as f64)
}

pub fn poisson_hosr_pdf(r: f64, k: usize) -> f64 {
    assert!(k >= 1, "ratio order must be at least 1");
    if r < 0.0 {
        return 0.0;
    }
    if r == 0.0 {
        return if k == 1 { 1.0 } else { 0.0 };
    }
    if let Some(coef) = poisson_coefficient_exact(k) {
        let den = (1.0 + r).powi(2 * k as i32);
        if den.is_finite() {
            return coef * r.powi(k as i32 - 1) / den;
        }
    }
    (poisson_log_coefficient(k) + (k as f64 - 1.0) * r.ln() - 2.0 * k as f64 * r.ln_1p()).exp()
}

/// Regularized incomplete beta `I_x(k, k)` for integer `k`, by the finite
/// binomial sum `sum_{j=k}^{2k-1} C(2k-1, j) x^j (1-x)^(2k-1-j)`.
fn incomplete_beta_symmetric(x: f64, k: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x > 0.5 {
        return 1.0 - incomplete_beta_symmetric(1.0 - x, k);
    }
    let n = 2 * k - 1;
    let ln_n = ln_gamma(n as f64 + 1.0);
    let (lx, l1x) = (x.ln(), (-x).ln_1p());
    (k..=n)
        .map(|j| {
            let ln_binom = ln_n - ln_gamma(j as f64 + 1.0) - ln_gamma((n - j) as f64 + 1.0);
            (ln_binom + j as f64 * lx + (n - j) as f64 * l1x).exp()
        })
        .sum()
}

/// Density of a `k`-th order spacing of uncorrelated unit-mean levels,
/// `e^-z z^(k-1) / (k-1)!`.
pub fn gamma_spacing_pdf(z: f64, k: usize) -> f64 {
    assert!(k >= 1, "spacing order must be at least 1");
    if z < 0.0 {
        return 0.0;
    }
    if z == 0.0 {
        return if k == 1 { 1.0 } else { 0.0 };
    }
    (-z + (k as f64 - 1.0) * z.ln() - ln_gamma(k as f64)).exp()
}

/// Tabulated CDF on `t in [0, 1]` with `r = t^4`, interpolated by cubic
/// Hermite segments using the exact density as the slope.
#[derive(Debug, Clone, PartialEq)]
struct CdfGrid {
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CdfGrid {
    fn build(beta: f64, norm: f64) -> CdfGrid {
        let h = 1.0 / CDF_PANELS as f64;
        let mapped = |t: f64| {
            norm * wigner_kernel(t.powi(GRID_POWER), beta)
                * GRID_POWER as f64
                * t.powi(GRID_POWER - 1)
        };
        let mut values = Vec::with_capacity(CDF_PANELS + 1);
        let mut slopes = Vec::with_capacity(CDF_PANELS + 1);
        let mut acc = 0.0;
        values.push(0.0);
        slopes.push(mapped(0.0));
        for j in 0..CDF_PANELS {
            let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
            acc += quad::gauss_kronrod_15(&mapped, a, b).0;
            values.push(acc);
            slopes.push(mapped(b));
        }
        CdfGrid { values, slopes }
    }

    /// CDF at `r in [0, 1]`.
    fn eval(&self, r: f64) -> f64 {
        let t = r.sqrt().sqrt();
        let scaled = t * CDF_PANELS as f64;
        let j = (scaled as usize).min(CDF_PANELS - 1);
        let s = scaled - j as f64;
        let h = 1.0 / CDF_PANELS as f64;
        let (y0, y1) = (self.values[j], self.values[j + 1]);
        let (d0, d1) = (self.slopes[j] * h, self.slopes[j + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1
    }

    fn half_mass(&self) -> f64 {
        self.values[CDF_PANELS]
    }

    fn nodes(&self) -> Vec<(f64, f64)> {
        (0..=CDF_PANELS)
            .map(|j| ((j as f64 / CDF_PANELS as f64).powi(GRID_POWER), self.values[j]))
            .collect()
    }
}

/// A parameterized analytic ratio distribution, immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryDist {
    family: Family,
    norm: f64,
    grid: Option<CdfGrid>,
}

impl TheoryDist {
    /// Wigner-like ratio surmise at Dyson index `beta`.
    pub fn wigner_ratio(beta: f64) -> Result<Self> {
        let norm = normalization_constant(beta)?;
        let grid = CdfGrid::build(beta, norm);
        // total mass is twice the mass on [0, 1]
        let mass = 2.0 * grid.half_mass();
        if (mass - 1.0).abs() > 1e-8 {
            return Err(Error::numeric(format!(
                "wigner_ratio(beta={beta}) integrates to {mass}, expected 1"
            )));
        }
        Ok(TheoryDist {
            family: Family::WignerRatio { beta },
            norm,
            grid: Some(grid),
        })
    }

    /// Ratio distribution of `k`-th order spacings of uncorrelated levels.
    pub fn poisson_hosr(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("ratio order must be at least 1"));
        }
        Ok(TheoryDist {
            family: Family::PoissonHosr { k },
            norm: 1.0,
            grid: None,
        })
    }

    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::WignerRatio { beta } => Self::wigner_ratio(beta),
            Family::PoissonHosr { k } => Self::poisson_hosr(k),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Normalization constant; 1 for the uncorrelated family, whose
    /// coefficient is part of the closed form.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// The cached `(r, I(r))` nodes on `[0, 1]`, empty for closed-form CDFs.
    pub fn cdf_nodes(&self) -> Vec<(f64, f64)> {
        self.grid.as_ref().map(CdfGrid::nodes).unwrap_or_default()
    }

    pub fn pdf(&self, r: f64) -> f64 {
        match self.family {
            Family::WignerRatio { beta } => self.norm * wigner_kernel(r, beta),
            Family::PoissonHosr { k } => poisson_hosr_pdf(r, k),
        }
    }

    /// `I(r) = integral of pdf over [0, r]`.
    pub fn cdf(&self, r: f64) -> f64 {
        if r.is_nan() {
            return f64::NAN;
        }
        if r <= 0.0 {
            return 0.0;
        }
        if r == f64::INFINITY {
            return 1.0;
        }
        match (&self.family, &self.grid) {
            (Family::PoissonHosr { k }, _) => incomplete_beta_symmetric(r / (1.0 + r), *k),
            (Family::WignerRatio { .. }, Some(grid)) => {
                let v = if r <= 1.0 {
                    grid.eval(r)
                } else {
                    1.0 - grid.eval(1.0 / r)
                };
                v.clamp(0.0, 1.0)
            }
            (Family::WignerRatio { .. }, None) => unreachable!("grid is built eagerly"),
        }
    }

    /// Inverse CDF by bisection on `u = r / (1 + r)`.
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let r = mid / (1.0 - mid);
            if self.cdf(r) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = 0.5 * (lo + hi);
        u / (1.0 - u)
    }
}
