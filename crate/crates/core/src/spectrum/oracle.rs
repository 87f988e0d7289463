//! Brute-force spectral check: materialize the full n! x n! transition
//! matrix and diagonalize it with Jacobi rotations. Exists to validate the
//! tableau formulas, so it stays deliberately simple and capped small.

use crate::dist::SparseGenerator;
use crate::error::{Error, Result};
use crate::perm::{factorial, Permutation};

pub const MATRIX_CAP: usize = 6;

/// Row-major N x N matrix with M[x][y] = step mass of y x^{-1}, i.e. the
/// probability that one step moves state x to state y. Symmetric because the
/// support is closed under inversion.
pub fn transition_matrix(g: &SparseGenerator<f64>) -> Vec<f64> {
    let n = g.n();
    let order = factorial(n) as usize;
    let mut m = vec![0.0f64; order * order];
    let id_mass = *g.identity_mass();
    let entries = g.entries();
    for x_rank in 0..order {
        let x = Permutation::unrank(n, x_rank as u64).unwrap();
        let row = x_rank * order;
        m[row + x_rank] += id_mass;
        for (s, mass) in &entries {
            if s.is_identity() {
                continue;
            }
            let y = s.compose(&x).unwrap();
            m[row + y.rank() as usize] += *mass;
        }
    }
    m
}

/// Eigenvalues of a symmetric matrix (row-major, size n x n) by cyclic Jacobi
/// sweeps, ascending. Destroys its input. No eigenvectors.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut b: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    let mut d = b.clone();
    let mut z = vec![0.0f64; n];

    for sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[idx(p, q)].abs();
            }
        }
        if off == 0.0 {
            d.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(d);
        }
        // First sweeps only rotate the large entries.
        let thresh = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let g = 100.0 * a[idx(p, q)].abs();
                // Entry negligible relative to both diagonal values: zero it.
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[idx(p, q)] = 0.0;
                    continue;
                }
                if a[idx(p, q)].abs() <= thresh {
                    continue;
                }
                let mut h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    a[idx(p, q)] / h
                } else {
                    let theta = 0.5 * h / a[idx(p, q)];
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                h = t * a[idx(p, q)];
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[idx(p, q)] = 0.0;
                let rot = |a: &mut [f64], i: usize, j: usize, k: usize, l: usize| {
                    let g = a[idx(i, j)];
                    let h = a[idx(k, l)];
                    a[idx(i, j)] = g - s * (h + g * tau);
                    a[idx(k, l)] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rot(&mut a, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rot(&mut a, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rot(&mut a, p, j, q, j);
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    Err(Error::Verification(
        "Jacobi eigenvalue iteration did not converge".to_string(),
    ))
}
