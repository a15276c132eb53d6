use num_complex::Complex64;

use super::{dot, ComplexMatrix, LinalgError, ABSOLUTE_FLOOR, ZERO};

const MAX_SWEEPS: usize = 80;

/// Singular value decomposition `M = U Σ V†`.
///
/// `u` holds one left singular vector per singular value (columns of a
/// `rows × min(rows, cols)` matrix is not assumed: vectors belonging to zero
/// singular values are left as zero). `v` is a full `cols × cols` unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub u: Vec<Vec<Complex64>>,
    pub v: ComplexMatrix,
    rows: usize,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }

    /// Number of singular values strictly above `cutoff`.
    pub fn rank_above(&self, cutoff: f64) -> usize {
        if self.sigma_max() <= ABSOLUTE_FLOOR {
            return 0;
        }
        self.sigma.iter().filter(|&&s| s > cutoff).count()
    }

    /// Right singular vectors whose singular value is at or below `cutoff`.
    pub fn kernel_vectors(&self, cutoff: f64) -> Vec<Vec<Complex64>> {
        let rank = self.rank_above(cutoff);
        (rank..self.v.cols()).map(|j| self.v.column_vec(j)).collect()
    }

    /// Left singular vectors whose singular value is above `cutoff`.
    pub fn image_vectors(&self, cutoff: f64) -> Vec<Vec<Complex64>> {
        let rank = self.rank_above(cutoff);
        self.u[..rank].to_vec()
    }

    /// `U Σ V†` from the stored factors.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.v.cols();
        let mut m = ComplexMatrix::zeros(self.rows, n);
        for (k, &s) in self.sigma.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for i in 0..self.rows {
                let us = self.u[k][i] * s;
                for j in 0..n {
                    m[(i, j)] += us * self.v[(j, k)].conj();
                }
            }
        }
        m
    }

    /// Minimum-norm least-squares solution of `M x = b`, discarding singular
    /// values at or below `cutoff`.
    pub fn solve_min_norm(&self, b: &[Complex64], cutoff: f64) -> Vec<Complex64> {
        assert_eq!(b.len(), self.rows);
        let n = self.v.cols();
        let mut x = vec![ZERO; n];
        for k in 0..self.rank_above(cutoff) {
            let coeff = dot(&self.u[k], b) / self.sigma[k];
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += self.v[(j, k)] * coeff;
            }
        }
        x
    }
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns of a working copy are orthogonalised pairwise by complex plane
/// rotations; the accumulated rotations form `V`. Small matrices converge in a
/// handful of sweeps and singular values come out with high relative accuracy.
pub fn svd(m: &ComplexMatrix) -> Result<Svd, LinalgError> {
    m.ensure_finite()?;
    let rows = m.rows();
    let cols = m.cols();
    // Column-major working copies.
    let mut a: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column_vec(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g <= ABSOLUTE_FLOOR {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                // [a_p, a_q] <- [a_p, conj(phase) a_q] * [[c, s], [-s, c]]
                rotate_pair(&mut a, p, q, cs, sn, phase);
                rotate_pair(&mut v, p, q, cs, sn, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = a
        .iter()
        .enumerate()
        .map(|(j, col)| (j, col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()))
        .collect();
    // Stable sort keeps the original column order among equal singular values.
    order.sort_by(|x, y| y.1.total_cmp(&x.1));

    let mut sigma = Vec::with_capacity(cols);
    let mut u = Vec::with_capacity(cols);
    let mut vmat = ComplexMatrix::zeros(cols, cols);
    for (k, &(j, s)) in order.iter().enumerate() {
        sigma.push(s);
        if s > ABSOLUTE_FLOOR {
            u.push(a[j].iter().map(|z| z / s).collect());
        } else {
            u.push(vec![ZERO; rows]);
        }
        for i in 0..cols {
            vmat[(i, k)] = v[j][i];
        }
    }
    Ok(Svd {
        sigma,
        u,
        v: vmat,
        rows,
    })
}

fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, cs: f64, sn: f64, phase: Complex64) {
    let pc = phase.conj();
    for i in 0..cols[p].len() {
        let x = cols[p][i];
        let y = pc * cols[q][i];
        cols[p][i] = x * cs - y * sn;
        cols[q][i] = x * sn + y * cs;
    }
}

/// Numerical rank: singular values above `tol · σ_max`.
pub fn svd_rank(m: &ComplexMatrix, tol: f64) -> Result<usize, LinalgError> {
    let s = svd(m)?;
    Ok(s.rank_above(tol * s.sigma_max()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{c, r};

    #[test]
    fn rank_of_projector() {
        let m = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(svd_rank(&m, 1e-10).unwrap(), 1);
    }

    #[test]
    fn rank_of_zero_is_zero() {
        assert_eq!(svd_rank(&ComplexMatrix::zeros(3, 3), 1e-10).unwrap(), 0);
    }

    #[test]
    fn rank_of_ep4_product_is_one() {
        // B·B' at the square-root EP4 point with b2 = b'1 = 1 and the rest zero.
        let b = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        let bp = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(svd_rank(&b.matmul(&bp), 1e-10).unwrap(), 1);
    }

    #[test]
    fn reconstructs_rectangular() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), r(0.5), c(0.0, -1.0)],
            vec![r(3.0), c(-1.0, 1.0), r(0.25)],
        ]);
        let s = svd(&m).unwrap();
        assert!((&s.reconstruct() - &m).max_abs() < 1e-14);
        assert_eq!(s.sigma.len(), 3);
        assert!(s.sigma[2] < 1e-14);
    }

    #[test]
    fn rejects_nan() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert_eq!(svd(&m).unwrap_err(), LinalgError::NonFinite);
    }

    #[test]
    fn min_norm_solve() {
        let m = ComplexMatrix::from_real_rows(&[[1.0, 2.0]]);
        let s = svd(&m).unwrap();
        let x = s.solve_min_norm(&[r(5.0)], 1e-12);
        assert!((x[0] - r(1.0)).norm() < 1e-14);
        assert!((x[1] - r(2.0)).norm() < 1e-14);
    }
}
