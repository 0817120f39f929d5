//! Synthetic spectra: GOE (dense and tridiagonal), uncorrelated levels, and
//! superpositions of independent blocks.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::spectrum::Spectrum;

/// A reproducible random stream: a seed plus a ChaCha stream index.
///
/// Substreams are keyed only by their own index, so drawing block `i` never
/// depends on how many other blocks are drawn or in what order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, stream: 0 }
    }

    /// Independent child stream number `index`.
    pub fn substream(&self, index: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(index.wrapping_add(1))),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 3 {
        return Err(Error::size(format!("block dimension must be at least 3, got {dim}")));
    }
    Ok(())
}

/// Dense GOE matrix `(M + M^T) / 2` with i.i.d. standard normal `M`.
pub fn goe_dense_matrix(dim: usize, stream: &RngStream) -> DMatrix<f64> {
    let mut rng = stream.rng();
    let m = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    (&m + m.transpose()) * 0.5
}

pub fn sample_goe_dense(dim: usize, stream: &RngStream) -> Result<Spectrum> {
    check_dim(dim)?;
    let a = goe_dense_matrix(dim, stream);
    let levels = linalg::symmetric_eigenvalues(a)?;
    Spectrum::new(levels, format!("goe-dense dim={dim} stream={}", stream.stream))
}

/// Diagonal and sub-diagonal of the beta = 1 tridiagonal GOE model, scaled
/// to the same entry variances as [`goe_dense_matrix`]: diagonal `N(0, 1)`,
/// sub-diagonal `chi_(dim - i) / sqrt(2)`.
pub fn goe_tridiagonal_entries(dim: usize, stream: &RngStream) -> (Vec<f64>, Vec<f64>) {
    let mut rng = stream.rng();
    let diag: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let off: Vec<f64> = (1..dim)
        .map(|i| {
            let chi2 = ChiSquared::new((dim - i) as f64).expect("positive degrees of freedom");
            (chi2.sample(&mut rng) * 0.5).sqrt()
        })
        .collect();
    (diag, off)
}

pub fn sample_goe_tridiagonal(dim: usize, stream: &RngStream) -> Result<Spectrum> {
    check_dim(dim)?;
    let (diag, off) = goe_tridiagonal_entries(dim, stream);
    let levels = linalg::tridiagonal_eigenvalues(&diag, &off)?;
    Spectrum::new(levels, format!("goe-tridiagonal dim={dim} stream={}", stream.stream))
}

/// Uncorrelated levels: `0` followed by cumulative sums of unit-mean
/// exponential spacings, `n` levels in total.
pub fn sample_poisson_levels(n: usize, stream: &RngStream) -> Result<Spectrum> {
    check_dim(n)?;
    let mut rng = stream.rng();
    let mut acc = 0.0;
    let mut levels = Vec::with_capacity(n);
    levels.push(0.0);
    for _ in 1..n {
        acc += rng.sample::<f64, _>(Exp1);
        levels.push(acc);
    }
    Spectrum::new(levels, format!("poisson n={n} stream={}", stream.stream))
}

/// Sorted union of all parts. No rescaling is applied.
pub fn superpose(parts: &[Spectrum]) -> Result<Spectrum> {
    if parts.is_empty() {
        return Err(Error::size("cannot superpose zero spectra"));
    }
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }
    let total = parts.iter().map(Spectrum::len).sum();
    let mut levels = Vec::with_capacity(total);
    for p in parts {
        levels.extend_from_slice(p.levels());
    }
    let mut label = format!(
        "superposition of {}: [{}]",
        parts.len(),
        parts.iter().map(Spectrum::label).collect::<Vec<_>>().join("; ")
    );
    if parts.iter().any(|p| p.len() != parts[0].len()) {
        label.push_str(" (unequal block sizes)");
    }
    Spectrum::new(levels, label)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    GoeDense,
    GoeTridiagonal,
    PoissonLevels,
}

/// Recipe for a block-diagonal composite `G_1 + G_2 + ... + G_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub blocks: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, blocks: usize, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec { kind, dim, blocks, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim)?;
        if self.blocks == 0 {
            return Err(Error::size("a composite needs at least one block"));
        }
        Ok(())
    }

    /// Draws block `index` from its own substream.
    pub fn sample_block(&self, index: usize) -> Result<Spectrum> {
        let stream = RngStream::new(self.seed).substream(index as u64);
        match self.kind {
            EnsembleKind::GoeDense => sample_goe_dense(self.dim, &stream),
            EnsembleKind::GoeTridiagonal => sample_goe_tridiagonal(self.dim, &stream),
            EnsembleKind::PoissonLevels => sample_poisson_levels(self.dim, &stream),
        }
    }
}

/// Eigenvalues of the block-diagonal matrix described by `spec`, obtained by
/// diagonalizing each block independently (in parallel) and superposing.
pub fn sample_composite(spec: &EnsembleSpec) -> Result<Spectrum> {
    spec.validate()?;
    let parts = (0..spec.blocks)
        .into_par_iter()
        .map(|i| spec.sample_block(i))
        .collect::<Result<Vec<_>>>()?;
    let merged = superpose(&parts)?;
    let label = format!(
        "{:?} dim={} m={} seed={}",
        spec.kind, spec.dim, spec.blocks, spec.seed
    );
    Spectrum::new(merged.into_levels(), label)
}
