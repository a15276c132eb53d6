//! Eigenvalue clustering, Jordan block structure from rank sequences, and
//! Jordan chain construction.

use num_complex::Complex64;
use serde::Serialize;

use crate::cmatrix::{
    dot, eig, image_basis, normalized, svd, vec_norm, ComplexMatrix, EigenPair, LinalgError, ABSOLUTE_FLOOR,
};

/// Relative default for clustering eigenvalues (times `‖H‖`).
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

/// Relative default for chain residuals (times `‖H‖`).
pub const DEFAULT_CHAIN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("{0} is not an eigenvalue at the requested tolerance")]
    NotAnEigenvalue(Complex64),
    #[error("chain solve residual {residual:.3e} exceeds {tol:.3e} at link {link}")]
    ChainSolveFailed { link: usize, residual: f64, tol: f64 },
    #[error("seed vector leaves residual {residual:.3e} under H - E (tolerance {tol:.3e})")]
    SeedNotInKernel { residual: f64, tol: f64 },
    #[error("chain length must be at least 1")]
    EmptyChain,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueCluster {
    pub center: Complex64,
    pub algebraic_multiplicity: usize,
    pub member_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanStructure {
    pub eigenvalue: Complex64,
    /// Descending.
    pub block_sizes: Vec<usize>,
    /// `r_0 = n, r_1, …` up to the first repeated value.
    pub rank_sequence: Vec<usize>,
    /// One chain `e_1 … e_k` per block, in the order of `block_sizes`.
    pub chains: Vec<Vec<Vec<Complex64>>>,
}

impl JordanStructure {
    pub fn algebraic_multiplicity(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn geometric_multiplicity(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn largest_block(&self) -> usize {
        self.block_sizes.first().copied().unwrap_or(0)
    }

    pub fn is_defective(&self) -> bool {
        self.largest_block() > 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EpFlag {
    /// No nontrivial Jordan block anywhere in the spectrum.
    Diagonalizable,
    /// Exactly one nontrivial block.
    Simple,
    /// Two or more nontrivial blocks, at one eigenvalue or several.
    Compound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub cluster: EigenvalueCluster,
    pub structure: JordanStructure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpReport {
    pub clusters: Vec<ClusterReport>,
    pub flag: EpFlag,
}

impl EpReport {
    /// Structure of the cluster whose center lies within `radius` of `e`.
    pub fn at(&self, e: Complex64, radius: f64) -> Option<&JordanStructure> {
        self.clusters
            .iter()
            .find(|c| (c.cluster.center - e).norm() <= radius)
            .map(|c| &c.structure)
    }
}

/// Single-linkage clustering of eigenvalues at radius `cluster_tol`.
///
/// Clusters are ordered by their first member index; the center is the mean
/// of the members (the mean of a scattered defective group is far more
/// accurate than any single member).
pub fn cluster_eigenvalues(pairs: &[EigenPair], cluster_tol: f64) -> Vec<EigenvalueCluster> {
    let values: Vec<Complex64> = pairs.iter().map(|p| p.value).collect();
    cluster_values(&values, cluster_tol)
}

pub fn cluster_values(values: &[Complex64], cluster_tol: f64) -> Vec<EigenvalueCluster> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= cluster_tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<EigenvalueCluster> = Vec::new();
    let mut root_to_cluster: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        match root_to_cluster[root] {
            Some(k) => clusters[k].member_indices.push(i),
            None => {
                root_to_cluster[root] = Some(clusters.len());
                clusters.push(EigenvalueCluster {
                    center: Complex64::new(0.0, 0.0),
                    algebraic_multiplicity: 0,
                    member_indices: vec![i],
                });
            }
        }
    }
    for c in &mut clusters {
        c.algebraic_multiplicity = c.member_indices.len();
        let sum: Complex64 = c.member_indices.iter().map(|&i| values[i]).sum();
        c.center = sum / c.algebraic_multiplicity as f64;
    }
    clusters
}

/// `r_k = rank((H − E)^k)` with cutoff `tol · ‖H − E‖₂^k`, from `r_0 = n`
/// until the sequence stops decreasing.
pub fn rank_sequence(h: &ComplexMatrix, e: Complex64, tol: f64) -> Result<Vec<usize>, SpectralError> {
    rank_sequence_bounded(h, e, tol, h.rows())
}

/// As [`rank_sequence`], but the nullity never exceeds `max_nullity` (the
/// algebraic multiplicity, when known).
fn rank_sequence_bounded(
    h: &ComplexMatrix,
    e: Complex64,
    tol: f64,
    max_nullity: usize,
) -> Result<Vec<usize>, SpectralError> {
    square(h)?;
    h.ensure_finite()?;
    let n = h.rows();
    let a = h.shifted(e);
    let norm = svd(&a)?.sigma_max();
    if norm <= ABSOLUTE_FLOOR {
        return Ok(vec![n, 0]);
    }
    let mut ranks = vec![n];
    let mut power = ComplexMatrix::identity(n);
    for k in 1..=n {
        power = power.matmul(&a);
        let cutoff = tol * norm.powi(k as i32);
        let r = svd(&power)?.rank_above(cutoff);
        let prev = *ranks.last().expect("non-empty");
        let floor = n.saturating_sub(max_nullity);
        ranks.push(r.min(prev).max(floor));
        if r >= prev || r <= floor {
            break;
        }
    }
    Ok(ranks)
}

/// Block sizes (descending) from a rank sequence.
pub fn blocks_from_ranks(ranks: &[usize]) -> Vec<usize> {
    // at_least[k-1] = number of blocks of size >= k
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let here = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, here));
    }
    sizes
}

/// Jordan structure of `H` at `E` with chain tolerance `1e-6 · ‖H‖`.
pub fn jordan_structure(h: &ComplexMatrix, e: Complex64, tol: f64) -> Result<JordanStructure, SpectralError> {
    let chain_tol = DEFAULT_CHAIN_TOL * h.norm2().max(ABSOLUTE_FLOOR);
    jordan_structure_with(h, e, tol, chain_tol)
}

pub fn jordan_structure_with(
    h: &ComplexMatrix,
    e: Complex64,
    tol: f64,
    chain_tol: f64,
) -> Result<JordanStructure, SpectralError> {
    let ranks = rank_sequence(h, e, tol)?;
    structure_from_ranks(h, e, tol, chain_tol, ranks)
}

fn structure_from_ranks(
    h: &ComplexMatrix,
    e: Complex64,
    tol: f64,
    chain_tol: f64,
    ranks: Vec<usize>,
) -> Result<JordanStructure, SpectralError> {
    if ranks[1] == ranks[0] {
        return Err(SpectralError::NotAnEigenvalue(e));
    }
    let block_sizes = blocks_from_ranks(&ranks);
    let mut chains: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(block_sizes.len());
    for &len in &block_sizes {
        let bottoms: Vec<Vec<Complex64>> = chains.iter().map(|c| c[0].clone()).collect();
        chains.push(build_chain(h, e, len, None, tol, chain_tol, &bottoms)?);
    }
    Ok(JordanStructure {
        eigenvalue: e,
        block_sizes,
        rank_sequence: ranks,
        chains,
    })
}

/// Builds `e_1 … e_length` with `(H − E) e_1 = 0` and `(H − E) e_j = e_{j−1}`.
///
/// Gauge: `e_j` is the minimum-norm least-squares solution restricted to
/// `im((H − E)^{length−j})`, with its component along `e_1` removed. With no
/// seed, `e_1` is the dominant direction of `(H − E)^{length−1} ker((H − E)^length)`.
pub fn jordan_chain(
    h: &ComplexMatrix,
    e: Complex64,
    length: usize,
    seed: Option<&[Complex64]>,
    tol: f64,
) -> Result<Vec<Vec<Complex64>>, SpectralError> {
    let chain_tol = DEFAULT_CHAIN_TOL * h.norm2().max(ABSOLUTE_FLOOR);
    build_chain(h, e, length, seed, tol, chain_tol, &[])
}

fn build_chain(
    h: &ComplexMatrix,
    e: Complex64,
    length: usize,
    seed: Option<&[Complex64]>,
    tol: f64,
    chain_tol: f64,
    exclude: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>, SpectralError> {
    square(h)?;
    h.ensure_finite()?;
    if length == 0 {
        return Err(SpectralError::EmptyChain);
    }
    let n = h.rows();
    let a = h.shifted(e);
    let norm = svd(&a)?.sigma_max();

    let e1 = match seed {
        Some(s) => {
            if s.len() != n {
                return Err(
                    LinalgError::ShapeMismatch(format!("seed of length {} for dimension {}", s.len(), n)).into(),
                );
            }
            let s = normalized(s).ok_or(LinalgError::NonFinite)?;
            let residual = vec_norm(&a.matvec(&s));
            if residual > chain_tol {
                return Err(SpectralError::SeedNotInKernel {
                    residual,
                    tol: chain_tol,
                });
            }
            s
        }
        None => auto_seed(&a, norm, length, tol, exclude)?,
    };

    let mut chain = vec![e1];
    for j in 2..=length {
        let target = chain[j - 2].clone();
        let restrict = if length - j == 0 {
            None
        } else {
            let p = a.pow((length - j) as u32);
            let basis = image_basis(&p, tol)?;
            if basis.is_empty() {
                None
            } else {
                Some(ComplexMatrix::from_columns(basis.vectors()))
            }
        };
        let mut x = match &restrict {
            Some(p) => {
                let ap = a.matmul(p);
                let s = svd(&ap)?;
                let y = s.solve_min_norm(&target, tol * s.sigma_max());
                p.matvec(&y)
            }
            None => {
                let s = svd(&a)?;
                s.solve_min_norm(&target, tol * s.sigma_max())
            }
        };
        let bottom = &chain[0];
        let coeff = dot(bottom, &x) / dot(bottom, bottom);
        for (xi, bi) in x.iter_mut().zip(bottom) {
            *xi -= coeff * bi;
        }
        let ax = a.matvec(&x);
        let residual = vec_norm(&ax.iter().zip(&target).map(|(p, q)| p - q).collect::<Vec<_>>());
        if residual > chain_tol {
            return Err(SpectralError::ChainSolveFailed {
                link: j,
                residual,
                tol: chain_tol,
            });
        }
        chain.push(x);
    }
    Ok(chain)
}

fn auto_seed(
    a: &ComplexMatrix,
    norm: f64,
    length: usize,
    tol: f64,
    exclude: &[Vec<Complex64>],
) -> Result<Vec<Complex64>, SpectralError> {
    let n = a.rows();
    let top = a.pow(length as u32);
    let top_svd = svd(&top)?;
    let cutoff = tol * norm.max(ABSOLUTE_FLOOR).powi(length as i32);
    let kernel = top_svd.kernel_vectors(cutoff);
    let lift = a.pow((length - 1) as u32);
    let excluded = crate::cmatrix::SubspaceBasis::from_vectors(n, exclude.to_vec());
    let mut columns: Vec<Vec<Complex64>> = kernel
        .iter()
        .map(|k| {
            let v = lift.matvec(k);
            let p = excluded.project(&v);
            v.iter().zip(&p).map(|(x, y)| x - y).collect()
        })
        .collect();
    if columns.is_empty() {
        columns.push(vec![Complex64::new(0.0, 0.0); n]);
    }
    let m = ComplexMatrix::from_columns(&columns);
    let s = svd(&m)?;
    if s.sigma_max() <= ABSOLUTE_FLOOR.max(tol * norm.max(ABSOLUTE_FLOOR).powi(length as i32 - 1)) {
        return Err(SpectralError::ChainSolveFailed {
            link: 1,
            residual: 1.0,
            tol,
        });
    }
    let mut e1 = s.u[0].clone();
    crate::cmatrix::fix_phase(&mut e1);
    Ok(e1)
}

/// Clusters the spectrum, computes the Jordan structure of every cluster and
/// flags the point as simple or compound.
pub fn ep_report(h: &ComplexMatrix, tol: f64) -> Result<EpReport, SpectralError> {
    let norm = h.norm2();
    let cluster_tol = (DEFAULT_CLUSTER_TOL * norm).max(ABSOLUTE_FLOOR);
    ep_report_with(h, tol, cluster_tol)
}

pub fn ep_report_with(h: &ComplexMatrix, tol: f64, cluster_tol: f64) -> Result<EpReport, SpectralError> {
    let pairs = eig(h)?;
    let clusters = cluster_eigenvalues(&pairs, cluster_tol);
    let chain_tol = DEFAULT_CHAIN_TOL * h.norm2().max(ABSOLUTE_FLOOR);
    let mut out = Vec::with_capacity(clusters.len());
    let mut nontrivial = 0;
    for cluster in clusters {
        let ranks = rank_sequence_bounded(h, cluster.center, tol, cluster.algebraic_multiplicity)?;
        let structure = match structure_from_ranks(h, cluster.center, tol, chain_tol, ranks) {
            Ok(s) => s,
            // A scattered cluster center can miss the rank drop; fall back to
            // treating each member as a simple eigenvalue.
            Err(SpectralError::NotAnEigenvalue(_)) => JordanStructure {
                eigenvalue: cluster.center,
                block_sizes: vec![1; cluster.algebraic_multiplicity],
                rank_sequence: vec![h.rows(), h.rows() - cluster.algebraic_multiplicity],
                chains: cluster
                    .member_indices
                    .iter()
                    .map(|&i| vec![pairs[i].vector.clone()])
                    .collect(),
            },
            Err(e) => return Err(e),
        };
        nontrivial += structure.block_sizes.iter().filter(|&&b| b > 1).count();
        out.push(ClusterReport { cluster, structure });
    }
    let flag = match nontrivial {
        0 => EpFlag::Diagonalizable,
        1 => EpFlag::Simple,
        _ => EpFlag::Compound,
    };
    Ok(EpReport { clusters: out, flag })
}

/// Jordan block sizes of `H` at `E`, or an empty list when `E` is not an
/// eigenvalue.
pub fn blocks_at(h: &ComplexMatrix, e: Complex64, tol: f64) -> Result<Vec<usize>, SpectralError> {
    let ranks = rank_sequence(h, e, tol)?;
    Ok(blocks_from_ranks(&ranks))
}

fn square(h: &ComplexMatrix) -> Result<(), LinalgError> {
    if h.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NonSquare {
            rows: h.rows(),
            cols: h.cols(),
        })
    }
}

/// Checks the chain equations; returns the largest residual.
pub fn chain_residual(h: &ComplexMatrix, e: Complex64, chain: &[Vec<Complex64>]) -> f64 {
    let a = h.shifted(e);
    let mut worst: f64 = 0.0;
    for (j, v) in chain.iter().enumerate() {
        let av = a.matvec(v);
        let r = if j == 0 {
            vec_norm(&av)
        } else {
            vec_norm(&av.iter().zip(&chain[j - 1]).map(|(x, y)| x - y).collect::<Vec<_>>())
        };
        worst = worst.max(r);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{c, r, ONE, ZERO};

    fn direction_error(v: &[Complex64], expected: &[f64]) -> f64 {
        let v = normalized(v).unwrap();
        let w: Vec<Complex64> = expected.iter().map(|&x| r(x)).collect();
        let w = normalized(&w).unwrap();
        1.0 - dot(&w, &v).norm()
    }

    #[test]
    fn clusters_tiny_split() {
        let cl = cluster_values(&[r(0.0), r(1e-12), r(1.0)], 1e-9);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].algebraic_multiplicity, 2);
        assert_eq!(cl[0].member_indices, vec![0, 1]);
        assert_eq!(cl[1].algebraic_multiplicity, 1);
    }

    #[test]
    fn clusters_chain_by_single_linkage() {
        let cl = cluster_values(&[r(0.0), r(0.8), r(1.6)], 1.0);
        assert_eq!(cl.len(), 1);
        assert!((cl[0].center - r(0.8)).norm() < 1e-15);
    }

    #[test]
    fn jordan_j4() {
        let s = jordan_structure(&ComplexMatrix::jordan_block(4, ZERO), ZERO, 1e-9).unwrap();
        assert_eq!(s.block_sizes, vec![4]);
        assert_eq!(s.rank_sequence, vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn jordan_j3_plus_zero() {
        let h = ComplexMatrix::block_diag(&[ComplexMatrix::jordan_block(3, ZERO), ComplexMatrix::zeros(1, 1)]);
        let s = jordan_structure(&h, ZERO, 1e-9).unwrap();
        assert_eq!(s.block_sizes, vec![3, 1]);
        assert!(chain_residual(&h, ZERO, &s.chains[0]) < 1e-12);
    }

    #[test]
    fn jordan_two_j2() {
        let j = ComplexMatrix::jordan_block(2, ZERO);
        let h = ComplexMatrix::block_diag(&[j.clone(), j]);
        let s = jordan_structure(&h, ZERO, 1e-9).unwrap();
        assert_eq!(s.block_sizes, vec![2, 2]);
        // The two chains span the whole space.
        let all: Vec<Vec<Complex64>> = s.chains.iter().flatten().cloned().collect();
        let basis = crate::cmatrix::SubspaceBasis::from_vectors(4, all);
        assert_eq!(basis.dim(), 4);
    }

    #[test]
    fn not_an_eigenvalue() {
        let err = jordan_structure(&ComplexMatrix::identity(2), ZERO, 1e-9).unwrap_err();
        assert!(matches!(err, SpectralError::NotAnEigenvalue(_)));
    }

    #[test]
    fn chain_of_j2() {
        let h = ComplexMatrix::jordan_block(2, ZERO);
        let chain = jordan_chain(&h, ZERO, 2, Some(&[ONE, ZERO]), 1e-9).unwrap();
        assert!(direction_error(&chain[1], &[0.0, 1.0]) < 1e-14);
    }

    #[test]
    fn chain_of_j4() {
        let h = ComplexMatrix::jordan_block(4, ZERO);
        let chain = jordan_chain(&h, ZERO, 4, Some(&[ONE, ZERO, ZERO, ZERO]), 1e-9).unwrap();
        for (j, v) in chain.iter().enumerate() {
            let mut e = [0.0; 4];
            e[j] = 1.0;
            assert!(direction_error(v, &e) < 1e-14);
        }
    }

    #[test]
    fn seed_outside_kernel_is_rejected() {
        let h = ComplexMatrix::jordan_block(2, ZERO);
        let err = jordan_chain(&h, ZERO, 2, Some(&[ZERO, ONE]), 1e-9).unwrap_err();
        assert!(matches!(err, SpectralError::SeedNotInKernel { .. }));
    }

    #[test]
    fn chain_too_long_fails() {
        let h = ComplexMatrix::jordan_block(2, ZERO);
        let err = jordan_chain(&h, ZERO, 3, Some(&[ONE, ZERO]), 1e-9).unwrap_err();
        assert!(matches!(err, SpectralError::ChainSolveFailed { .. }));
    }

    #[test]
    fn report_doublet_is_compound() {
        let j = ComplexMatrix::jordan_block(2, ZERO);
        let rep = ep_report(&ComplexMatrix::block_diag(&[j.clone(), j]), 1e-9).unwrap();
        assert_eq!(rep.clusters.len(), 1);
        assert_eq!(rep.clusters[0].structure.block_sizes, vec![2, 2]);
        assert_eq!(rep.flag, EpFlag::Compound);
    }

    #[test]
    fn report_simple_ep3() {
        let h = ComplexMatrix::block_diag(&[ComplexMatrix::jordan_block(3, ONE), ComplexMatrix::diag(&[r(5.0)])]);
        let rep = ep_report(&h, 1e-9).unwrap();
        assert_eq!(rep.flag, EpFlag::Simple);
        assert_eq!(rep.at(ONE, 1e-6).unwrap().block_sizes, vec![3]);
        assert_eq!(rep.at(r(5.0), 1e-6).unwrap().block_sizes, vec![1]);
    }

    #[test]
    fn report_pair_at_plus_minus_one() {
        let h = ComplexMatrix::block_diag(&[
            ComplexMatrix::jordan_block(2, ONE),
            ComplexMatrix::jordan_block(2, -ONE),
        ]);
        let rep = ep_report(&h, 1e-9).unwrap();
        assert_eq!(rep.clusters.len(), 2);
        assert_eq!(rep.flag, EpFlag::Compound);
    }

    #[test]
    fn similarity_keeps_blocks() {
        let v = ComplexMatrix::from_rows(&[
            vec![r(1.0), c(0.2, 0.1), r(0.0), r(0.3)],
            vec![r(0.1), r(1.0), c(0.0, 0.4), r(0.0)],
            vec![r(0.0), r(0.2), r(1.0), c(0.1, -0.2)],
            vec![c(0.3, 0.0), r(0.0), r(0.1), r(1.0)],
        ]);
        let j = ComplexMatrix::block_diag(&[ComplexMatrix::jordan_block(3, ZERO), ComplexMatrix::zeros(1, 1)]);
        let vinv = inverse(&v);
        let h = v.matmul(&j).matmul(&vinv);
        let s = jordan_structure(&h, ZERO, 1e-9).unwrap();
        assert_eq!(s.block_sizes, vec![3, 1]);
    }

    fn inverse(m: &ComplexMatrix) -> ComplexMatrix {
        let n = m.rows();
        let s = svd(m).unwrap();
        let cols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = ONE;
                s.solve_min_norm(&e, 0.0)
            })
            .collect();
        ComplexMatrix::from_columns(&cols)
    }
}
