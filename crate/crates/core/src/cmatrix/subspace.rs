use num_complex::Complex64;

use super::{dot, svd, vec_norm, ComplexMatrix, LinalgError, ZERO};

/// Orthonormal basis of a subspace of `C^ambient_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl SubspaceBasis {
    /// Orthonormalises `vectors` (modified Gram-Schmidt, two passes) and drops
    /// any that are dependent on the ones before them.
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Complex64>>) -> Self {
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
        for mut v in vectors {
            assert_eq!(v.len(), ambient_dim, "vector outside the ambient space");
            let original = vec_norm(&v);
            for _ in 0..2 {
                for b in &basis {
                    let proj = dot(b, &v);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= proj * y;
                    }
                }
            }
            let n = vec_norm(&v);
            if n > 1e-10 * original.max(f64::MIN_POSITIVE) && n > 0.0 {
                basis.push(v.iter().map(|z| z / n).collect());
            }
        }
        SubspaceBasis {
            ambient_dim,
            vectors: basis,
        }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.ambient_dim];
        for b in &self.vectors {
            let coeff = dot(b, v);
            for (o, x) in out.iter_mut().zip(b) {
                *o += coeff * x;
            }
        }
        out
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(u, v) - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular value is at or below `tol · σ_max`.
pub fn kernel_basis(m: &ComplexMatrix, tol: f64) -> Result<SubspaceBasis, LinalgError> {
    let s = svd(m)?;
    let cutoff = tol * s.sigma_max();
    Ok(SubspaceBasis::from_vectors(m.cols(), s.kernel_vectors(cutoff)))
}

/// Orthonormal basis of the numerical image: left singular vectors whose
/// singular value exceeds `tol · σ_max`.
pub fn image_basis(m: &ComplexMatrix, tol: f64) -> Result<SubspaceBasis, LinalgError> {
    let s = svd(m)?;
    let cutoff = tol * s.sigma_max();
    Ok(SubspaceBasis::from_vectors(m.rows(), s.image_vectors(cutoff)))
}

/// Sine of the largest principal angle between two subspaces of equal
/// dimension, computed as `‖(I − P_U) V‖₂` so that small angles keep their
/// relative accuracy.
pub fn sine_of_largest_angle(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<f64, LinalgError> {
    if u.ambient_dim != v.ambient_dim {
        return Err(LinalgError::AmbientMismatch {
            left: u.ambient_dim,
            right: v.ambient_dim,
        });
    }
    if u.dim() != v.dim() {
        return Ok(1.0);
    }
    if v.is_empty() {
        return Ok(0.0);
    }
    let residual: Vec<Vec<Complex64>> = v
        .vectors
        .iter()
        .map(|x| {
            let p = u.project(x);
            x.iter().zip(&p).map(|(a, b)| a - b).collect()
        })
        .collect();
    let r = ComplexMatrix::from_columns(&residual);
    Ok(svd(&r)?.sigma_max().min(1.0))
}

/// True iff the subspaces have equal dimension and every principal angle has
/// sine at most `tol`.
pub fn subspace_equal(u: &SubspaceBasis, v: &SubspaceBasis, tol: f64) -> Result<bool, LinalgError> {
    if u.ambient_dim != v.ambient_dim {
        return Err(LinalgError::AmbientMismatch {
            left: u.ambient_dim,
            right: v.ambient_dim,
        });
    }
    if u.dim() != v.dim() {
        return Ok(false);
    }
    Ok(sine_of_largest_angle(u, v)? <= tol)
}
