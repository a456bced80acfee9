//! Eigendecomposition of small Hermitian matrices by cyclic complex Jacobi
//! rotations. Deterministic, no external linear-algebra dependency; matrix
//! sizes here are (n−1)×(n−1) for domain dimension n, i.e. tiny.

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn adjoint(a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[j][i].conj()).collect())
        .collect()
}

fn off_norm(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Unitary differing from the identity in the (p,q) block; chosen so that
/// conjugation annihilates the (p,q) entry of a Hermitian matrix.
fn rotation(a: &[Vec<Complex64>], p: usize, q: usize) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let apq = a[p][q];
    let phi = apq.arg();
    let b = apq.norm();
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    // real Jacobi angle for [[app, b],[b, aqq]]
    let zeta = (aqq - app) / (2.0 * b);
    let t = zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = Complex64::from_polar(1.0, -phi);
    let mut u = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    u[p][p] = Complex64::new(c, 0.0);
    u[p][q] = Complex64::new(s, 0.0);
    u[q][p] = -s * e;
    u[q][q] = c * e;
    u
}

/// Full eigendecomposition. The input is symmetrized to (A + Aᴴ)/2 first, so
/// binary64 asymmetry up to rounding is tolerated.
pub fn hermitian_eigen(matrix: &[Vec<Complex64>]) -> HermitianEigen {
    let n = matrix.len();
    if n == 0 {
        return HermitianEigen {
            eigenvalues: vec![],
            eigenvectors: vec![],
        };
    }
    let adj = adjoint(matrix);
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (matrix[i][j] + adj[i][j])).collect())
        .collect();
    let mut v = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = 1.0
        + a.iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
    for _sweep in 0..60 {
        if off_norm(&a) <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].norm() <= 1e-300 {
                    continue;
                }
                let u = rotation(&a, p, q);
                a = matmul(&adjoint(&u), &matmul(&a, &u));
                v = matmul(&v, &u);
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[i][i].re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));
    let eigenvalues = pairs.iter().map(|&(lam, _)| lam).collect();
    let eigenvectors = pairs
        .iter()
        .map(|&(_, col)| (0..n).map(|row| v[row][col]).collect())
        .collect();
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Number of eigenvalues with |λ| > tol, and the complement.
pub fn rank_corank(eigenvalues: &[f64], tol: f64) -> (usize, usize) {
    let rank = eigenvalues.iter().filter(|l| l.abs() > tol).count();
    (rank, eigenvalues.len() - rank)
}
