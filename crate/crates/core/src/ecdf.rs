use crate::error::{Error, Result};
use crate::spectrum::RatioSeries;

/// Right-continuous empirical CDF, `F(x) = #{points <= x} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    points: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::size("empirical CDF of an empty sample"));
        }
        if let Some(index) = points.iter().position(|x| x.is_nan()) {
            return Err(Error::Validation {
                index,
                reason: "NaN sample point".into(),
            });
        }
        points.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let count = self.points.partition_point(|&p| p <= x);
        count as f64 / self.points.len() as f64
    }

    /// `F` evaluated at each sorted sample point, ties resolved to the
    /// upper step.
    pub fn at_points(&self) -> Vec<f64> {
        let n = self.points.len();
        let nf = n as f64;
        let mut out = vec![0.0; n];
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && self.points[j + 1] == self.points[i] {
                j += 1;
            }
            let f = (j + 1) as f64 / nf;
            out[i..=j].fill(f);
            i = j + 1;
        }
        out
    }
}

pub fn empirical_cdf(r: &RatioSeries) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(r.values().to_vec())
}
