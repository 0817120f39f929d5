//! Open spin-1/2 chain with nearest and next-nearest neighbour XXZ couplings,
//! restricted to a fixed-magnetization sector.
//!
//! Site `i` (1-based) is bit `i - 1` of a basis word; a set bit is spin up.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::spectrum::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinChainParams {
    pub sites: usize,
    pub jxy: f64,
    pub jz: f64,
    pub jxy2: f64,
    pub jz2: f64,
    pub eta: f64,
    pub n_up: usize,
}

impl Default for SpinChainParams {
    fn default() -> Self {
        SpinChainParams::new(12)
    }
}

impl SpinChainParams {
    /// Chain of `sites` spins with couplings `Jxy = J'xy = 1`, `Jz = J'z = 0.5`,
    /// `eta = 0.5`, in the `n_up = floor(sites / 2)` sector.
    pub fn new(sites: usize) -> Self {
        SpinChainParams {
            sites,
            jxy: 1.0,
            jz: 0.5,
            jxy2: 1.0,
            jz2: 0.5,
            eta: 0.5,
            n_up: sites / 2,
        }
    }

    pub fn with_eta(self, eta: f64) -> Self {
        SpinChainParams { eta, ..self }
    }

    pub fn with_n_up(self, n_up: usize) -> Self {
        SpinChainParams { n_up, ..self }
    }

    pub fn sector_dim(&self) -> u128 {
        binomial(self.sites, self.n_up)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 || self.sites > 30 {
            return Err(Error::domain(format!(
                "chain length must be in 2..=30, got {}",
                self.sites
            )));
        }
        if self.n_up > self.sites {
            return Err(Error::domain(format!(
                "n_up = {} exceeds the number of sites {}",
                self.n_up, self.sites
            )));
        }
        let couplings = [self.jxy, self.jz, self.jxy2, self.jz2, self.eta];
        if couplings.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("couplings must be finite"));
        }
        if self.eta < 0.0 {
            return Err(Error::domain(format!("eta must be nonnegative, got {}", self.eta)));
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Basis words with exactly `n_up` set bits among the low `sites` bits,
/// in ascending order.
pub fn sector_basis(sites: usize, n_up: usize) -> Vec<u32> {
    (0u32..(1u32 << sites))
        .filter(|w| w.count_ones() as usize == n_up)
        .collect()
}

fn sz(word: u32, site: usize) -> f64 {
    if word >> site & 1 == 1 {
        0.5
    } else {
        -0.5
    }
}

/// Dense sector block of the Hamiltonian.
pub fn build_spin_chain_block(p: &SpinChainParams) -> Result<DMatrix<f64>> {
    p.validate()?;
    let dim = p.sector_dim();
    if dim < 3 {
        return Err(Error::size(format!(
            "sector L={} n_up={} has dimension {dim}, need at least 3",
            p.sites, p.n_up
        )));
    }
    Ok(assemble_block(p))
}

/// Same matrix without the minimum-size check.
pub(crate) fn assemble_block(p: &SpinChainParams) -> DMatrix<f64> {
    let basis = sector_basis(p.sites, p.n_up);
    let n = basis.len();
    let index_of = |w: u32| basis.binary_search(&w).expect("hop stays in sector");
    let mut h = DMatrix::<f64>::zeros(n, n);

    let bonds = (1..p.sites)
        .map(|i| (i - 1, i, p.jxy, p.jz))
        .chain((2..p.sites).map(|i| (i - 2, i, p.eta * p.jxy2, p.eta * p.jz2)));
    let bonds: Vec<_> = bonds.collect();

    for (a, &w) in basis.iter().enumerate() {
        for &(i, j, jxy, jz) in &bonds {
            h[(a, a)] += jz * sz(w, i) * sz(w, j);
            // (Jxy/2)(S+S- + S-S+) swaps antiparallel spins
            if (w >> i & 1) != (w >> j & 1) && jxy != 0.0 {
                let b = index_of(w ^ (1 << i) ^ (1 << j));
                h[(b, a)] += 0.5 * jxy;
            }
        }
    }
    h
}

pub fn spin_chain_spectrum(p: &SpinChainParams) -> Result<Spectrum> {
    let h = build_spin_chain_block(p)?;
    let levels = linalg::symmetric_eigenvalues(h)?;
    Spectrum::new(
        levels,
        format!(
            "spin-chain L={} n_up={} Jxy={} Jz={} J'xy={} J'z={} eta={}",
            p.sites, p.n_up, p.jxy, p.jz, p.jxy2, p.jz2, p.eta
        ),
    )
}

/// Site reflection `i -> L + 1 - i` as a permutation of the sector basis.
pub fn reflection_permutation(sites: usize, n_up: usize) -> Vec<usize> {
    let basis = sector_basis(sites, n_up);
    basis
        .iter()
        .map(|&w| {
            let r = w.reverse_bits() >> (32 - sites);
            basis.binary_search(&r).expect("reflection preserves magnetization")
        })
        .collect()
}

/// Global spin flip as a permutation of the sector basis; only defined
/// when the sector maps to itself (`2 n_up = L`).
pub fn spin_flip_permutation(sites: usize, n_up: usize) -> Option<Vec<usize>> {
    if 2 * n_up != sites {
        return None;
    }
    let basis = sector_basis(sites, n_up);
    let mask = (1u32 << sites) - 1;
    Some(
        basis
            .iter()
            .map(|&w| basis.binary_search(&(!w & mask)).expect("flip preserves half filling"))
            .collect(),
    )
}

/// `max |(H P - P H)_ij|` for the permutation matrix `P` with `P e_a = e_perm[a]`.
pub fn commutator_max(h: &DMatrix<f64>, perm: &[usize]) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0_f64;
    // (HP)_{ij} = H_{i, perm^-1... } expressed through P_{perm[a], a} = 1:
    // (HP)_{i a} = H_{i, perm[a]},  (PH)_{perm[b], a} = H_{b a}
    for a in 0..n {
        for b in 0..n {
            let hp = h[(perm[b], perm[a])];
            let ph = h[(b, a)];
            worst = worst.max((hp - ph).abs());
        }
    }
    worst
}
