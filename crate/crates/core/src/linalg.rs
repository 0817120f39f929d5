//! Eigenvalue-only symmetric solvers.

use nalgebra::{DMatrix, SymmetricTridiagonal};

use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// All eigenvalues of the symmetric tridiagonal matrix with main diagonal
/// `diag` and sub-diagonal `off` (`off.len() == diag.len() - 1`), ascending.
///
/// Implicitly shifted QL; O(n^2) since no eigenvectors are accumulated.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::size(format!(
            "tridiagonal matrix of order {n} needs {} off-diagonal entries, got {}",
            n - 1,
            off.len()
        )));
    }
    if let Some(i) = diag.iter().chain(off).position(|x| !x.is_finite()) {
        return Err(Error::numeric(format!("non-finite matrix entry at position {i}")));
    }

    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::numeric(format!(
                    "QL iteration did not converge for eigenvalue {l} of {n}"
                )));
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// All eigenvalues of a dense symmetric matrix, ascending.
///
/// Householder reduction to tridiagonal form followed by
/// [`tridiagonal_eigenvalues`]. Only the lower triangle is read.
pub fn symmetric_eigenvalues(matrix: DMatrix<f64>) -> Result<Vec<f64>> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(Error::size(format!(
            "matrix is {}x{}, expected square",
            n,
            matrix.ncols()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![matrix[(0, 0)]]);
    }
    let (diag, off) = SymmetricTridiagonal::new(matrix).unpack_tridiagonal();
    tridiagonal_eigenvalues(diag.as_slice(), off.as_slice())
}
