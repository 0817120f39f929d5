use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::RatioSeries;

/// Equal-width density histogram on `[0, upper_cut]`.
///
/// Densities integrate to the fraction of samples inside the range;
/// samples above the cut are only counted in `overflow`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub centers: Vec<f64>,
    pub densities: Vec<f64>,
    pub overflow: usize,
    pub total: usize,
}

impl Histogram {
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.centers.iter().copied().zip(self.densities.iter().copied())
    }
}

pub fn histogram(r: &RatioSeries, bin_count: usize, upper_cut: f64) -> Result<Histogram> {
    histogram_of(r.values(), bin_count, upper_cut)
}

pub fn histogram_of(values: &[f64], bin_count: usize, upper_cut: f64) -> Result<Histogram> {
    if bin_count < 2 {
        return Err(Error::domain(format!("need at least 2 bins, got {bin_count}")));
    }
    if !(upper_cut > 0.0 && upper_cut.is_finite()) {
        return Err(Error::domain(format!("upper cut must be positive, got {upper_cut}")));
    }
    let width = upper_cut / bin_count as f64;
    let mut counts = vec![0usize; bin_count];
    let mut overflow = 0;
    for &v in values {
        if v > upper_cut {
            overflow += 1;
            continue;
        }
        // v == upper_cut lands in the last bin
        let idx = ((v / width) as usize).min(bin_count - 1);
        counts[idx] += 1;
    }
    let n = values.len().max(1) as f64;
    let centers = (0..bin_count).map(|i| (i as f64 + 0.5) * width).collect();
    let densities = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    Ok(Histogram {
        bin_width: width,
        centers,
        densities,
        overflow,
        total: values.len(),
    })
}
