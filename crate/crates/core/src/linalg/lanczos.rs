//! Restarted Lanczos iteration for a few extreme eigenpairs of a large symmetric operator.
//!
//! The basis is kept fully orthogonal (classical Gram-Schmidt, two passes) and the
//! projected matrix `Vᵀ A V` is formed explicitly, so restarting with a handful of
//! Ritz vectors needs no tridiagonal bookkeeping.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::{symmetric_eigen, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Symmetric linear operator `y = A x`.
pub trait LinearOperator<T>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[T], y: &mut [T]);
}

#[derive(Debug, Clone)]
pub struct LanczosConfig {
    /// Maximum subspace dimension before a restart.
    pub basis_size: usize,
    /// Absolute tolerance on `‖A x − θ x‖₂` for every requested pair.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self { basis_size: 64, tol: 1e-6, max_restarts: 500, seed: 0x1a2c_2050 }
    }
}

/// Extreme eigenpairs, largest eigenvalue first.
#[derive(Debug, Clone)]
pub struct EigenPairs<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<T>>,
    pub residuals: Vec<T>,
    pub restarts: usize,
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn orthogonalize<T: Scalar>(v: &mut [T], against: &[Vec<T>]) {
    for _ in 0..2 {
        for q in against {
            let c = dot(q, v);
            axpy(-c, q, v);
        }
    }
}

/// The `nev` largest eigenpairs of `op` restricted to the orthogonal complement of
/// `deflate` (which must be orthonormal).
pub fn largest_eigenpairs<T: Scalar, Op: LinearOperator<T>>(
    op: &Op,
    nev: usize,
    deflate: &[Vec<T>],
    config: &LanczosConfig,
) -> Result<EigenPairs<T>> {
    let n = op.dim();
    let room = n.saturating_sub(deflate.len());
    if nev == 0 || nev > room {
        return Err(Error::InvalidConfig(format!(
            "cannot extract {nev} eigenpairs from a space of dimension {room}"
        )));
    }
    let m = config.basis_size.max(2 * nev + 2).min(room);
    let keep = (m / 2).max(nev).min(m.saturating_sub(1)).max(nev);
    let tol = T::of(config.tol);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let random_vector = |rng: &mut ChaCha8Rng| -> Vec<T> {
        (0..n).map(|_| T::of(rng.random_range(-1.0..1.0))).collect()
    };

    let project = |y: &mut [T]| orthogonalize(y, deflate);

    let mut basis: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut images: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut candidate = random_vector(&mut rng);
    let mut last = EigenPairs { values: vec![], vectors: vec![], residuals: vec![], restarts: 0 };

    for restart in 0..=config.max_restarts {
        while basis.len() < m {
            project(&mut candidate);
            orthogonalize(&mut candidate, &basis);
            let mut nrm = norm(&candidate);
            if nrm <= T::of(1e-10) {
                // Invariant subspace reached; continue from a fresh direction.
                candidate = random_vector(&mut rng);
                project(&mut candidate);
                orthogonalize(&mut candidate, &basis);
                nrm = norm(&candidate);
                if nrm <= T::of(1e-10) {
                    break;
                }
            }
            for c in candidate.iter_mut() {
                *c /= nrm;
            }
            let mut image = vec![T::zero(); n];
            op.apply(&candidate, &mut image);
            project(&mut image);
            basis.push(std::mem::take(&mut candidate));
            candidate = image.clone();
            images.push(image);
        }

        let k = basis.len();
        let mut h = Matrix::<T>::zeros(k, k);
        for i in 0..k {
            for j in 0..=i {
                let v = (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i])) / T::of(2.0);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let eig = symmetric_eigen(&h, true)?;
        let y = eig.vectors.expect("vectors requested");
        let take = keep.min(k);
        let mut ritz = Vec::with_capacity(take);
        let mut ritz_images = Vec::with_capacity(take);
        let mut values = Vec::with_capacity(take);
        let mut residuals = Vec::with_capacity(take);
        for t in 0..take {
            let col = k - 1 - t;
            let theta = eig.values[col];
            let mut x = vec![T::zero(); n];
            let mut ax = vec![T::zero(); n];
            for i in 0..k {
                let c = y[(i, col)];
                axpy(c, &basis[i], &mut x);
                axpy(c, &images[i], &mut ax);
            }
            let r: Vec<T> = ax.iter().zip(&x).map(|(&a, &b)| a - theta * b).collect();
            residuals.push(norm(&r));
            values.push(theta);
            ritz.push(x);
            ritz_images.push(ax);
        }

        let converged = residuals.iter().take(nev).all(|&r| r <= tol);
        last = EigenPairs {
            values: values[..nev].to_vec(),
            vectors: ritz[..nev].to_vec(),
            residuals: residuals[..nev].to_vec(),
            restarts: restart,
        };
        // k < m means the reachable space is exhausted and the Ritz pairs are exact.
        if converged || k < m {
            return Ok(last);
        }

        let worst = (0..nev)
            .max_by(|&a, &b| residuals[a].partial_cmp(&residuals[b]).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(0);
        candidate = ritz_images[worst].iter().zip(&ritz[worst]).map(|(&a, &b)| a - values[worst] * b).collect();
        basis = ritz;
        images = ritz_images;
    }

    let residual = last.residuals.iter().fold(0.0f64, |acc, r| acc.max(r.as_f64()));
    Err(Error::NoConvergence {
        what: "restarted Lanczos",
        iterations: config.max_restarts * m,
        residual,
    })
}
