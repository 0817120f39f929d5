//! Validated level sequences and the spacings/ratios extracted from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sorted sequence of finite energy levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    levels: Vec<f64>,
    label: String,
}

impl Spectrum {
    /// Validates and sorts `raw`. Input order is irrelevant; ties are kept.
    pub fn new(raw: impl Into<Vec<f64>>, label: impl Into<String>) -> Result<Self> {
        let mut levels = raw.into();
        if let Some(index) = levels.iter().position(|x| !x.is_finite()) {
            return Err(Error::Validation {
                index,
                reason: format!("level {} is not finite", levels[index]),
            });
        }
        if levels.len() < 3 {
            return Err(Error::size(format!(
                "a spectrum needs at least 3 levels, got {}",
                levels.len()
            )));
        }
        levels.sort_by(f64::total_cmp);
        Ok(Spectrum {
            levels,
            label: label.into(),
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn into_levels(self) -> Vec<f64> {
        self.levels
    }

    /// `k`-th order spacings `E[i+k] - E[i]`.
    pub fn spacings(&self, k: usize) -> Result<Vec<f64>> {
        spacings(self, k)
    }

    /// `k`-th order spacing ratios, see [`spacing_ratios`].
    pub fn ratios(&self, k: usize) -> Result<RatioSeries> {
        spacing_ratios(self, k)
    }

    /// Keeps one representative of every cluster of levels closer than
    /// `rel_tol` times the spectral width, returning the number removed.
    ///
    /// Eigensolvers return exact degeneracies split by rounding, which
    /// `spacing_ratios` cannot recognise as zero denominators.
    pub fn collapse_degenerate(&self, rel_tol: f64) -> (Spectrum, usize) {
        let width = self.levels[self.levels.len() - 1] - self.levels[0];
        let tol = rel_tol * width;
        let mut kept = Vec::with_capacity(self.levels.len());
        kept.push(self.levels[0]);
        for &e in &self.levels[1..] {
            if e - kept[kept.len() - 1] > tol {
                kept.push(e);
            }
        }
        let removed = self.levels.len() - kept.len();
        if kept.len() < 3 {
            return (self.clone(), 0);
        }
        let out = Spectrum {
            levels: kept,
            label: self.label.clone(),
        };
        (out, removed)
    }
}

/// Convenience constructor mirroring [`Spectrum::new`].
pub fn make_spectrum(raw: &[f64], label: &str) -> Result<Spectrum> {
    Spectrum::new(raw.to_vec(), label)
}

/// Returns `E[i+k] - E[i]` for every admissible `i`.
pub fn spacings(s: &Spectrum, k: usize) -> Result<Vec<f64>> {
    let n = s.len();
    if k == 0 || k >= n {
        return Err(Error::size(format!(
            "spacing order {k} invalid for a spectrum of {n} levels"
        )));
    }
    let e = s.levels();
    Ok(e.windows(k + 1).map(|w| w[k] - w[0]).collect())
}

/// Higher-order spacing ratios of a spectrum.
///
/// Invariant: `values.len() + dropped_count == source_length - 2 * order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSeries {
    order: usize,
    values: Vec<f64>,
    dropped_count: usize,
    source_length: usize,
}

impl RatioSeries {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Windows discarded because their denominator spacing was exactly zero.
    pub fn dropped_count(&self) -> usize {
        self.dropped_count
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    /// Ratios in ascending order.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Builds a series directly from ratio values, e.g. synthetic samples.
    /// Rejects negative or non-finite entries.
    pub fn from_values(order: usize, values: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("ratio order must be at least 1"));
        }
        if let Some(index) = values.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Validation {
                index,
                reason: format!("ratio {} is negative or not finite", values[index]),
            });
        }
        let source_length = values.len() + 2 * order;
        Ok(RatioSeries {
            order,
            values,
            dropped_count: 0,
            source_length,
        })
    }
}

/// Sliding-window ratios `(E[i+2k] - E[i+k]) / (E[i+k] - E[i])`.
///
/// Windows with a zero denominator are dropped and counted; a zero numerator
/// yields a ratio of 0.
pub fn spacing_ratios(s: &Spectrum, k: usize) -> Result<RatioSeries> {
    let n = s.len();
    if k == 0 {
        return Err(Error::size("ratio order must be at least 1"));
    }
    if n < 2 * k + 1 {
        return Err(Error::size(format!(
            "order {k} ratios need at least {} levels, spectrum has {n}",
            2 * k + 1
        )));
    }
    let e = s.levels();
    let mut values = Vec::with_capacity(n - 2 * k);
    let mut dropped = 0;
    for w in e.windows(2 * k + 1) {
        let den = w[k] - w[0];
        let num = w[2 * k] - w[k];
        if den == 0.0 {
            dropped += 1;
        } else {
            values.push(num / den);
        }
    }
    Ok(RatioSeries {
        order: k,
        values,
        dropped_count: dropped,
        source_length: n,
    })
}
