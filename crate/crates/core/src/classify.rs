//! Zero-energy exceptional-point taxonomy for `N = 2` block pairs, the
//! nonzero-energy doublet test, the single-block `EP_{2N}` condition, and the
//! two ε-families that approach the mixed-type EP3.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::cmatrix::{subspace_equal, svd, ComplexMatrix, LinalgError, SubspaceBasis, ABSOLUTE_FLOOR, ZERO};
use crate::spectral::{blocks_at, cluster_eigenvalues, jordan_structure, SpectralError, DEFAULT_CLUSTER_TOL};
use crate::sublattice::assemble_blocks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EpKind {
    DoubletEP2,
    EP4,
    EP3Mixed,
    NonzeroEnergyEP2Pair,
    Nondegenerate,
    Unclassified,
    /// A zero-energy EP2 outside the `N = 2` table (e.g. a single band pair).
    EP2,
}

impl EpKind {
    /// Jordan blocks at `E = 0` implied by the kind, when it fixes them.
    pub fn zero_energy_blocks(self) -> Option<&'static [usize]> {
        match self {
            EpKind::DoubletEP2 => Some(&[2, 2]),
            EpKind::EP4 => Some(&[4]),
            EpKind::EP3Mixed => Some(&[3, 1]),
            EpKind::Nondegenerate | EpKind::NonzeroEnergyEP2Pair => Some(&[]),
            EpKind::Unclassified | EpKind::EP2 => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EpKind::DoubletEP2 => "DoubletEP2",
            EpKind::EP4 => "EP4",
            EpKind::EP3Mixed => "EP3Mixed",
            EpKind::NonzeroEnergyEP2Pair => "NonzeroEnergyEP2Pair",
            EpKind::Nondegenerate => "Nondegenerate",
            EpKind::Unclassified => "Unclassified",
            EpKind::EP2 => "EP2",
        }
    }
}

impl fmt::Display for EpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Jordan blocks of the assembled `H` at a nonzero energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBlocks {
    pub energy: Complex64,
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Evidence {
    pub flavours: usize,
    pub rank_b: usize,
    pub rank_bprime: usize,
    pub dim_ker_b: usize,
    pub dim_ker_bprime: usize,
    pub b_is_zero: bool,
    pub bprime_is_zero: bool,
    pub b_is_scalar: bool,
    pub bprime_is_scalar: bool,
    /// `ker(BB′) = im(BB′)`
    pub ker_bbp_equals_im_bbp: Option<bool>,
    /// `im B′ = ker B`
    pub im_bprime_equals_ker_b: Option<bool>,
    /// `im B = ker B′`
    pub im_b_equals_ker_bprime: Option<bool>,
    pub zero_energy_blocks: Vec<usize>,
    pub nonzero_energy_blocks: Vec<EnergyBlocks>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpClassification {
    pub kind: EpKind,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("table verdict {kind} disagrees with Jordan blocks {blocks:?} at E = 0")]
    CrossCheckMismatch { kind: EpKind, blocks: Vec<usize> },
    #[error("B·B' has an eigenvalue at zero; use the zero-energy classifier")]
    ZeroEigenvaluePresent,
    #[error("this test needs 2x2 blocks, got {0}x{0}")]
    UnsupportedDimension(usize),
    #[error("B is {0}x{1} but B' is {2}x{3}")]
    BlockShape(usize, usize, usize, usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

struct BlockFacts {
    rank: usize,
    kernel: SubspaceBasis,
    image: SubspaceBasis,
    is_zero: bool,
    is_scalar: bool,
}

fn facts(m: &ComplexMatrix, cutoff: f64, tol: f64) -> Result<BlockFacts, LinalgError> {
    let s = svd(m)?;
    let n = m.rows();
    let rank = s.rank_above(cutoff);
    let kernel = SubspaceBasis::from_vectors(n, s.kernel_vectors(cutoff));
    let image = SubspaceBasis::from_vectors(n, s.image_vectors(cutoff));
    let is_zero = m.max_abs() <= cutoff;
    let mean = m.trace() / n as f64;
    let deviation = m.shifted(mean).norm2();
    let is_scalar = mean.norm() > cutoff && deviation <= tol * s.sigma_max();
    Ok(BlockFacts {
        rank,
        kernel,
        image,
        is_zero,
        is_scalar,
    })
}

fn check_shapes(b: &ComplexMatrix, bprime: &ComplexMatrix) -> Result<usize, ClassifyError> {
    if !b.is_square() || b.rows() != bprime.rows() || b.cols() != bprime.cols() {
        return Err(ClassifyError::BlockShape(
            b.rows(),
            b.cols(),
            bprime.rows(),
            bprime.cols(),
        ));
    }
    Ok(b.rows())
}

/// Sine tolerance for subspace identities: principal angles of numerically
/// computed kernels and images are only accurate to about `√tol`.
fn angle_tol(tol: f64) -> f64 {
    tol.sqrt().max(tol)
}

/// Zero-energy classification of a `2 × 2` pair, decided in the order
/// nondegenerate, doublet, EP4, EP3, unclassified, then cross-checked against
/// the rank sequence of the assembled `4 × 4` matrix.
pub fn classify_zero_energy(
    b: &ComplexMatrix,
    bprime: &ComplexMatrix,
    tol: f64,
) -> Result<EpClassification, ClassifyError> {
    let n = check_shapes(b, bprime)?;
    if n != 2 {
        return Err(ClassifyError::UnsupportedDimension(n));
    }
    b.ensure_finite()?;
    bprime.ensure_finite()?;
    let scale = b.norm2().max(bprime.norm2());
    let cutoff = (tol * scale).max(ABSOLUTE_FLOOR);
    let fb = facts(b, cutoff, tol)?;
    let fbp = facts(bprime, cutoff, tol)?;
    let h = assemble_blocks(b, bprime);
    let blocks = blocks_at(&h, ZERO, tol)?;

    let mut ev = Evidence {
        flavours: n,
        rank_b: fb.rank,
        rank_bprime: fbp.rank,
        dim_ker_b: fb.kernel.dim(),
        dim_ker_bprime: fbp.kernel.dim(),
        b_is_zero: fb.is_zero,
        bprime_is_zero: fbp.is_zero,
        b_is_scalar: fb.is_scalar,
        bprime_is_scalar: fbp.is_scalar,
        zero_energy_blocks: blocks.clone(),
        ..Evidence::default()
    };

    let kind = if fb.rank == n && fbp.rank == n {
        EpKind::Nondegenerate
    } else if (fb.is_zero && fbp.is_scalar) || (fbp.is_zero && fb.is_scalar) {
        EpKind::DoubletEP2
    } else {
        let at = angle_tol(tol);
        if ev.dim_ker_b + ev.dim_ker_bprime == 1 {
            let product = b.matmul(bprime);
            let pcut = (tol * scale * scale).max(ABSOLUTE_FLOOR);
            let ps = svd(&product)?;
            let ker = SubspaceBasis::from_vectors(n, ps.kernel_vectors(pcut));
            let im = SubspaceBasis::from_vectors(n, ps.image_vectors(pcut));
            let equal = subspace_equal(&ker, &im, at)?;
            ev.ker_bbp_equals_im_bbp = Some(equal);
        }
        if ev.dim_ker_b == 1 && ev.dim_ker_bprime == 1 {
            ev.im_bprime_equals_ker_b = Some(subspace_equal(&fbp.image, &fb.kernel, at)?);
            ev.im_b_equals_ker_bprime = Some(subspace_equal(&fb.image, &fbp.kernel, at)?);
        }
        if ev.ker_bbp_equals_im_bbp == Some(true) {
            EpKind::EP4
        } else if let (Some(x), Some(y)) = (ev.im_bprime_equals_ker_b, ev.im_b_equals_ker_bprime) {
            if x != y {
                EpKind::EP3Mixed
            } else {
                EpKind::Unclassified
            }
        } else {
            EpKind::Unclassified
        }
    };

    if let Some(expected) = kind.zero_energy_blocks() {
        if blocks != expected {
            return Err(ClassifyError::CrossCheckMismatch { kind, blocks });
        }
    }
    Ok(EpClassification { kind, evidence: ev })
}

/// Defective structure of `B·B′` away from zero: each nontrivial block at
/// `λ ≠ 0` becomes a pair of EPs at `E = ±√λ`.
pub fn classify_nonzero_energy(
    b: &ComplexMatrix,
    bprime: &ComplexMatrix,
    tol: f64,
) -> Result<EpClassification, ClassifyError> {
    let n = check_shapes(b, bprime)?;
    let scale = b.norm2().max(bprime.norm2());
    let cutoff = (tol * scale).max(ABSOLUTE_FLOOR);
    let product = b.matmul(bprime);
    let pnorm = product.norm2();
    if pnorm <= ABSOLUTE_FLOOR || svd(&product)?.rank_above(tol * pnorm) < n {
        return Err(ClassifyError::ZeroEigenvaluePresent);
    }
    let fb = facts(b, cutoff, tol)?;
    let fbp = facts(bprime, cutoff, tol)?;
    let mut ev = Evidence {
        flavours: n,
        rank_b: fb.rank,
        rank_bprime: fbp.rank,
        dim_ker_b: fb.kernel.dim(),
        dim_ker_bprime: fbp.kernel.dim(),
        b_is_zero: fb.is_zero,
        bprime_is_zero: fbp.is_zero,
        b_is_scalar: fb.is_scalar,
        bprime_is_scalar: fbp.is_scalar,
        ..Evidence::default()
    };
    let pairs = crate::cmatrix::eig(&product)?;
    let clusters = cluster_eigenvalues(&pairs, DEFAULT_CLUSTER_TOL * pnorm);
    let h = assemble_blocks(b, bprime);
    let mut defective = false;
    for cl in clusters {
        let js = jordan_structure(&product, cl.center, tol)?;
        if js.is_defective() {
            defective = true;
            let e = cl.center.sqrt();
            for energy in [e, -e] {
                ev.nonzero_energy_blocks.push(EnergyBlocks {
                    energy,
                    blocks: blocks_at(&h, energy, tol)?,
                });
            }
        }
    }
    let kind = if defective {
        EpKind::NonzeroEnergyEP2Pair
    } else {
        EpKind::Nondegenerate
    };
    Ok(EpClassification { kind, evidence: ev })
}

/// Any block size: the `2 × 2` table when it applies, otherwise a verdict read
/// directly off the Jordan blocks of `H` at zero energy.
pub fn classify(b: &ComplexMatrix, bprime: &ComplexMatrix, tol: f64) -> Result<EpClassification, ClassifyError> {
    let n = check_shapes(b, bprime)?;
    let h = assemble_blocks(b, bprime);
    let blocks = blocks_at(&h, ZERO, tol)?;
    if blocks.is_empty() {
        return classify_nonzero_energy(b, bprime, tol).or_else(|e| match e {
            // Rank of B·B′ and of H disagree only at the tolerance edge.
            ClassifyError::ZeroEigenvaluePresent => Ok(generic(b, bprime, n, blocks, tol)?),
            other => Err(other),
        });
    }
    if n == 2 {
        return classify_zero_energy(b, bprime, tol);
    }
    generic(b, bprime, n, blocks, tol)
}

fn generic(
    b: &ComplexMatrix,
    bprime: &ComplexMatrix,
    n: usize,
    blocks: Vec<usize>,
    tol: f64,
) -> Result<EpClassification, ClassifyError> {
    let scale = b.norm2().max(bprime.norm2());
    let cutoff = (tol * scale).max(ABSOLUTE_FLOOR);
    let fb = facts(b, cutoff, tol)?;
    let fbp = facts(bprime, cutoff, tol)?;
    let kind = match blocks.as_slice() {
        [] => EpKind::Nondegenerate,
        [4] => EpKind::EP4,
        [3, 1] => EpKind::EP3Mixed,
        bs if bs[0] == 2 => EpKind::EP2,
        _ => EpKind::Unclassified,
    };
    Ok(EpClassification {
        kind,
        evidence: Evidence {
            flavours: n,
            rank_b: fb.rank,
            rank_bprime: fbp.rank,
            dim_ker_b: fb.kernel.dim(),
            dim_ker_bprime: fbp.kernel.dim(),
            b_is_zero: fb.is_zero,
            bprime_is_zero: fbp.is_zero,
            b_is_scalar: fb.is_scalar,
            bprime_is_scalar: fbp.is_scalar,
            zero_energy_blocks: blocks,
            ..Evidence::default()
        },
    })
}

/// True iff the assembled `2N × 2N` matrix is a single Jordan block at zero:
/// `dim ker B + dim ker B′ = 1` and `B′B` similar to `J_N(0)`.
pub fn check_ep2n(b: &ComplexMatrix, bprime: &ComplexMatrix, tol: f64) -> Result<bool, ClassifyError> {
    let n = check_shapes(b, bprime)?;
    let scale = b.norm2().max(bprime.norm2());
    let cutoff = (tol * scale).max(ABSOLUTE_FLOOR);
    let kb = n - svd(b)?.rank_above(cutoff);
    let kbp = n - svd(bprime)?.rank_above(cutoff);
    let kernel_ok = kb + kbp == 1;

    let m = bprime.matmul(b);
    let mnorm = scale * scale;
    let mut power = ComplexMatrix::identity(n);
    let mut nilpotent_chain = true;
    for k in 1..=n {
        power = power.matmul(&m);
        let r = svd(&power)?.rank_above((tol * mnorm.powi(k as i32)).max(ABSOLUTE_FLOOR));
        if r != n - k {
            nilpotent_chain = false;
            break;
        }
    }
    let verdict = kernel_ok && nilpotent_chain;

    let h = assemble_blocks(b, bprime);
    let blocks = blocks_at(&h, ZERO, tol)?;
    let single = blocks == [2 * n];
    if single != verdict {
        return Err(ClassifyError::CrossCheckMismatch {
            kind: if verdict { EpKind::EP4 } else { EpKind::Unclassified },
            blocks,
        });
    }
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitFamily {
    ViaEP2,
    ViaEP4,
}

/// `4 × 4` matrices that equal `diag(J₃(0), 0)` at `ε = 0`: through EP2
/// matrices (`ViaEP2`) or through EP4 matrices (`ViaEP4`).
pub fn mixed_limit_family(kind: LimitFamily, epsilon: f64) -> ComplexMatrix {
    let e = epsilon;
    match kind {
        LimitFamily::ViaEP2 => ComplexMatrix::from_real_rows(&[
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, e, 0.0],
            [0.0, 0.0, 0.0, 2.0 * e],
        ]),
        LimitFamily::ViaEP4 => ComplexMatrix::from_real_rows(&[
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, e],
            [0.0, 0.0, 0.0, 0.0],
        ]),
    }
}
