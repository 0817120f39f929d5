//! Sector-count inference from higher-order spacing ratios.
//!
//! For each order `k` the empirical ratio CDF is compared with the
//! Wigner-like surmise over a grid of Dyson indices; the grid minimizer of
//! the summed absolute CDF gap estimates the effective index. A spectrum
//! built from `m` independent GOE blocks gives an estimate close to `k`
//! exactly when `k = m`.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ecdf::EmpiricalCdf;
use crate::ensembles::RngStream;
use crate::error::{Error, Result};
use crate::spectrum::{spacing_ratios, RatioSeries, Spectrum};
use crate::theory::{Family, TheoryDist};

/// Grid of trial Dyson indices `lo, lo + step, ..., hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid { lo: 0.5, hi: 8.0, step: 0.1 }
    }
}

impl ScanGrid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let g = ScanGrid { lo, hi, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ScanGrid { lo, hi, step } = *self;
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && lo < hi && step > 0.0) {
            return Err(Error::domain(format!(
                "invalid scan grid lo={lo} hi={hi} step={step}"
            )));
        }
        if (hi - lo) / step > 1e6 {
            return Err(Error::domain("scan grid has more than a million points"));
        }
        Ok(())
    }

    /// Grid points, rounded to ten decimals so that `0.5 + 15 * 0.1` is `2.0`.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| ((self.lo + i as f64 * self.step) * 1e10).round() / 1e10)
            .collect()
    }
}

/// Sorted sample together with its ECDF at each sample point.
#[derive(Debug, Clone)]
struct PreparedSample {
    sorted: Vec<f64>,
    ecdf: Vec<f64>,
}

impl PreparedSample {
    fn new(r: &RatioSeries) -> Result<Self> {
        let cdf = EmpiricalCdf::new(r.values().to_vec())?;
        let ecdf = cdf.at_points();
        Ok(PreparedSample {
            sorted: cdf.points().to_vec(),
            ecdf,
        })
    }

    fn d_sum(&self, dist: &TheoryDist) -> f64 {
        self.sorted
            .iter()
            .zip(&self.ecdf)
            .map(|(&x, &f)| (f - dist.cdf(x)).abs())
            .sum()
    }
}

/// Raw and count-normalized D value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DValue {
    pub sum: f64,
    pub mean: f64,
}

/// `D = sum_i |F_obs(r_i) - I(r_i)|` over the observed ratios.
pub fn d_statistic_with(r: &RatioSeries, dist: &TheoryDist) -> Result<DValue> {
    let sample = PreparedSample::new(r)?;
    let sum = sample.d_sum(dist);
    Ok(DValue { sum, mean: sum / r.len() as f64 })
}

/// [`d_statistic_with`] against the Wigner-like surmise at `beta`.
pub fn d_statistic(r: &RatioSeries, beta: f64) -> Result<DValue> {
    d_statistic_with(r, &TheoryDist::wigner_ratio(beta)?)
}

/// Theory distributions for every grid point, built once and reused.
#[derive(Debug, Clone)]
pub struct BetaScanner {
    grid: ScanGrid,
    betas: Vec<f64>,
    dists: Vec<TheoryDist>,
}

/// Outcome of one scan over the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub beta_hat: f64,
    pub d_min: f64,
    pub n_ratios: usize,
    /// `(beta, D)` for every grid point, D as the raw sum.
    pub curve: Vec<(f64, f64)>,
}

impl ScanResult {
    /// True when the minimizer sits on either end of the grid.
    pub fn at_grid_edge(&self) -> bool {
        let first = self.curve.first().map(|p| p.0);
        let last = self.curve.last().map(|p| p.0);
        Some(self.beta_hat) == first || Some(self.beta_hat) == last
    }

    pub fn d_min_mean(&self) -> f64 {
        self.d_min / self.n_ratios as f64
    }
}

impl BetaScanner {
    pub fn new(grid: ScanGrid) -> Result<Self> {
        grid.validate()?;
        let betas = grid.points();
        let dists = betas
            .par_iter()
            .map(|&b| TheoryDist::wigner_ratio(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(BetaScanner { grid, betas, dists })
    }

    pub fn grid(&self) -> ScanGrid {
        self.grid
    }

    pub fn scan(&self, r: &RatioSeries) -> Result<ScanResult> {
        let sample = PreparedSample::new(r)?;
        let ds: Vec<f64> = self.dists.par_iter().map(|d| sample.d_sum(d)).collect();
        let mut best = 0;
        for (i, &d) in ds.iter().enumerate() {
            // strict comparison keeps the smallest beta on ties
            if d < ds[best] {
                best = i;
            }
        }
        if ds.iter().any(|d| !d.is_finite()) {
            return Err(Error::numeric("non-finite D value in beta scan"));
        }
        Ok(ScanResult {
            beta_hat: self.betas[best],
            d_min: ds[best],
            n_ratios: r.len(),
            curve: self.betas.iter().copied().zip(ds).collect(),
        })
    }
}

/// Grid argmin of `D(beta)` and the full curve.
pub fn scan_beta(r: &RatioSeries, grid: ScanGrid) -> Result<ScanResult> {
    BetaScanner::new(grid)?.scan(r)
}

/// Kolmogorov survival function `Q(x) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2)`.
pub fn kolmogorov_q(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        // Jacobi-transformed series; the direct one converges slowly here.
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let mut cdf = 0.0;
        for j in 1..=20 {
            let odd = (2 * j - 1) as f64;
            cdf += (-odd * odd * pi2 / (8.0 * x * x)).exp();
        }
        cdf *= (2.0 * std::f64::consts::PI).sqrt() / x;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * x * x).exp();
        sum += sign * term;
        if term < 1e-17 * sum.abs() || term == 0.0 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample two-sided KS statistic and its nominal p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d: f64,
    pub p: f64,
    pub n: usize,
}

impl KsResult {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p < alpha
    }
}

pub fn ks_statistic_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0)
}

/// KS p-value with the `sqrt(n) + 0.12 + 0.11 / sqrt(n)` small-sample
/// correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)
}

pub fn ks_test(r: &RatioSeries, dist: &TheoryDist) -> Result<KsResult> {
    if r.is_empty() {
        return Err(Error::size("KS test on an empty ratio series"));
    }
    let sorted = r.sorted_values();
    let d = ks_statistic_sorted(&sorted, |x| dist.cdf(x));
    Ok(KsResult { d, p: ks_p_value(d, sorted.len()), n: sorted.len() })
}

/// Two-sample KS distance between samples `a` and `b`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0_f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Thresholds used to turn per-order scans into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictRule {
    /// KS significance level for both the integrability screen and the
    /// chaotic confirmation.
    pub alpha: f64,
    /// Largest accepted `|beta_hat(k) - k|`.
    pub beta_tolerance: f64,
}

impl Default for VerdictRule {
    fn default() -> Self {
        VerdictRule { alpha: 0.05, beta_tolerance: 0.3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Chaotic { sectors: usize },
    Integrable,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Chaotic { sectors } => write!(f, "Chaotic({sectors})"),
            Verdict::Integrable => write!(f, "Integrable"),
            Verdict::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

/// Per-order result of [`infer_sectors`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub k: usize,
    pub n_ratios: usize,
    pub dropped: usize,
    pub beta_hat: f64,
    pub d_min: f64,
    pub d_min_mean: f64,
    pub beta_hat_at_grid_edge: bool,
    pub d_curve: Vec<(f64, f64)>,
    /// KS against the surmise at `beta = k`; p-values are nominal since
    /// sliding-window ratios are not independent.
    pub ks_d: f64,
    pub ks_p: f64,
    pub dist_used: Family,
    /// KS against the uncorrelated-level family of the same order.
    pub poisson_ks_d: f64,
    pub poisson_ks_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inference {
    pub n_levels: usize,
    pub grid: ScanGrid,
    pub rule: VerdictRule,
    pub reports: Vec<EstimateReport>,
    pub verdict: Verdict,
}

impl Inference {
    pub fn report(&self, k: usize) -> Option<&EstimateReport> {
        self.reports.iter().find(|r| r.k == k)
    }
}

fn estimate_order(s: &Spectrum, k: usize, scanner: &BetaScanner) -> Result<EstimateReport> {
    let ratios = spacing_ratios(s, k)?;
    if ratios.is_empty() {
        return Err(Error::size(format!("no usable order-{k} ratios (all degenerate)")));
    }
    let scan = scanner.scan(&ratios)?;
    let wigner = TheoryDist::wigner_ratio(k as f64)?;
    let ks = ks_test(&ratios, &wigner)?;
    let poisson = ks_test(&ratios, &TheoryDist::poisson_hosr(k)?)?;
    Ok(EstimateReport {
        k,
        n_ratios: ratios.len(),
        dropped: ratios.dropped_count(),
        beta_hat: scan.beta_hat,
        d_min: scan.d_min,
        d_min_mean: scan.d_min_mean(),
        beta_hat_at_grid_edge: scan.at_grid_edge(),
        d_curve: scan.curve,
        ks_d: ks.d,
        ks_p: ks.p,
        dist_used: wigner.family(),
        poisson_ks_d: poisson.d,
        poisson_ks_p: poisson.p,
    })
}

/// Applies the verdict rule to per-order reports.
///
/// Integrable if every order is consistent with the uncorrelated family.
/// Otherwise `Chaotic(m)` for the order `m` minimizing `|beta_hat - k|`
/// among orders whose minimizer is interior to the grid, provided the gap is
/// within tolerance and KS does not reject the surmise at `beta = m`.
pub fn decide(reports: &[EstimateReport], rule: &VerdictRule) -> Verdict {
    if !reports.is_empty() && reports.iter().all(|r| r.poisson_ks_p >= rule.alpha) {
        return Verdict::Integrable;
    }
    let best = reports
        .iter()
        .filter(|r| !r.beta_hat_at_grid_edge)
        .min_by(|a, b| {
            let ga = (a.beta_hat - a.k as f64).abs();
            let gb = (b.beta_hat - b.k as f64).abs();
            ga.total_cmp(&gb).then(a.k.cmp(&b.k))
        });
    match best {
        Some(r)
            if (r.beta_hat - r.k as f64).abs() <= rule.beta_tolerance + 1e-9
                && r.ks_p >= rule.alpha =>
        {
            Verdict::Chaotic { sectors: r.k }
        }
        _ => Verdict::Inconclusive,
    }
}

/// Runs the full per-order analysis for `k = 1..=k_max`.
pub fn infer_sectors_with(
    s: &Spectrum,
    k_max: usize,
    scanner: &BetaScanner,
    rule: &VerdictRule,
) -> Result<Inference> {
    if k_max == 0 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    if s.len() < 2 * k_max + 1 {
        return Err(Error::size(format!(
            "k_max={k_max} needs at least {} levels, spectrum has {}",
            2 * k_max + 1,
            s.len()
        )));
    }
    let reports = (1..=k_max)
        .into_par_iter()
        .map(|k| estimate_order(s, k, scanner))
        .collect::<Result<Vec<_>>>()?;
    let verdict = decide(&reports, rule);
    Ok(Inference {
        n_levels: s.len(),
        grid: scanner.grid(),
        rule: *rule,
        reports,
        verdict,
    })
}

pub fn infer_sectors(s: &Spectrum, k_max: usize, grid: ScanGrid) -> Result<Inference> {
    let scanner = BetaScanner::new(grid)?;
    infer_sectors_with(s, k_max, &scanner, &VerdictRule::default())
}

/// One row of the missing-level experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissingLevelsRow {
    pub fraction: f64,
    pub mean_beta_hat: f64,
    pub std_beta_hat: f64,
    pub trials: usize,
}

/// Deletes `floor(f * N)` random levels per trial and re-estimates the
/// index from order-`k` ratios. Trials draw from substreams keyed by the
/// fraction and the trial index, so a row does not depend on which other
/// fractions are requested.
pub fn missing_levels_experiment(
    s: &Spectrum,
    fractions: &[f64],
    trials: usize,
    k: usize,
    scanner: &BetaScanner,
    stream: &RngStream,
) -> Result<Vec<MissingLevelsRow>> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    if k == 0 {
        return Err(Error::domain("ratio order must be at least 1"));
    }
    let n = s.len();
    for &f in fractions {
        if !(0.0..1.0).contains(&f) {
            return Err(Error::domain(format!("deletion fraction {f} outside [0, 1)")));
        }
        let kept = n - (f * n as f64).floor() as usize;
        if kept < 2 * k + 1 {
            return Err(Error::size(format!(
                "deleting {f} of {n} levels leaves {kept}, order {k} needs {}",
                2 * k + 1
            )));
        }
    }

    fractions
        .iter()
        .map(|&f| {
            let remove = (f * n as f64).floor() as usize;
            let betas = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let reduced = if remove == 0 {
                        s.clone()
                    } else {
                        let mut rng = stream.substream(f.to_bits()).substream(t as u64).rng();
                        let mut drop = vec![false; n];
                        for i in index::sample(&mut rng, n, remove) {
                            drop[i] = true;
                        }
                        let kept: Vec<f64> = s
                            .levels()
                            .iter()
                            .zip(&drop)
                            .filter(|(_, &d)| !d)
                            .map(|(&e, _)| e)
                            .collect();
                        Spectrum::new(kept, s.label())?
                    };
                    let ratios = spacing_ratios(&reduced, k)?;
                    Ok(scanner.scan(&ratios)?.beta_hat)
                })
                .collect::<Result<Vec<f64>>>()?;
            let mean = betas.iter().sum::<f64>() / trials as f64;
            let var = betas.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / trials as f64;
            Ok(MissingLevelsRow {
                fraction: f,
                mean_beta_hat: mean,
                std_beta_hat: var.sqrt(),
                trials,
            })
        })
        .collect()
}
