//! Block off-diagonal Hamiltonians `H = [[0, iB], [−iB′, 0]]` and their
//! reduced eigenproblem on `B′B`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::cmatrix::{eig, fix_phase, kernel_basis, normalized, ComplexMatrix, LinalgError, ABSOLUTE_FLOOR, I, ZERO};

/// Cartesian momentum `(q_x, q_y)`.
pub type Momentum = [f64; 2];

pub type Generator = Arc<dyn Fn(Momentum) -> ComplexMatrix + Send + Sync>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SublatticeError {
    #[error("generator failure: {0}")]
    GeneratorFailure(String),
    #[error("dimension {0} is odd; a sublattice-symmetric matrix needs 2N rows")]
    OddDimension(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A pair of momentum-dependent `N × N` generators `(B(q), B′(q))`.
#[derive(Clone)]
pub struct BlockHamiltonian {
    flavours: usize,
    b: Generator,
    bprime: Generator,
}

impl BlockHamiltonian {
    pub fn new(flavours: usize, b: Generator, bprime: Generator) -> Self {
        assert!(flavours >= 1);
        BlockHamiltonian { flavours, b, bprime }
    }

    pub fn from_fns<F, G>(flavours: usize, b: F, bprime: G) -> Self
    where
        F: Fn(Momentum) -> ComplexMatrix + Send + Sync + 'static,
        G: Fn(Momentum) -> ComplexMatrix + Send + Sync + 'static,
    {
        Self::new(flavours, Arc::new(b), Arc::new(bprime))
    }

    /// Momentum-independent blocks.
    pub fn constant(b: ComplexMatrix, bprime: ComplexMatrix) -> Self {
        let n = b.rows();
        Self::from_fns(n, move |_| b.clone(), move |_| bprime.clone())
    }

    pub fn flavours(&self) -> usize {
        self.flavours
    }

    pub fn dim(&self) -> usize {
        2 * self.flavours
    }

    /// `(B(q), B′(q))`, checked for shape and finiteness.
    pub fn blocks(&self, q: Momentum) -> Result<(ComplexMatrix, ComplexMatrix), SublatticeError> {
        let b = (self.b)(q);
        let bp = (self.bprime)(q);
        let n = self.flavours;
        for (name, m) in [("B", &b), ("B'", &bp)] {
            if m.rows() != n || m.cols() != n {
                return Err(SublatticeError::GeneratorFailure(format!(
                    "{name}({}, {}) is {}x{}, expected {n}x{n}",
                    q[0],
                    q[1],
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_finite() {
                return Err(SublatticeError::GeneratorFailure(format!(
                    "{name}({}, {}) has non-finite entries",
                    q[0], q[1]
                )));
            }
        }
        Ok((b, bp))
    }
}

impl fmt::Debug for BlockHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockHamiltonian")
            .field("flavours", &self.flavours)
            .finish_non_exhaustive()
    }
}

/// An eigenstate split into its sublattice components.
#[derive(Debug, Clone, PartialEq)]
pub struct SublatticeState {
    pub psi: Vec<Complex64>,
    pub chi: Vec<Complex64>,
    pub energy: Complex64,
}

impl SublatticeState {
    /// The full `2N` vector `(ψ, χ)`.
    pub fn vector(&self) -> Vec<Complex64> {
        self.psi.iter().chain(&self.chi).copied().collect()
    }

    fn from_vector(v: &[Complex64], energy: Complex64) -> Option<Self> {
        let mut v = normalized(v)?;
        fix_phase(&mut v);
        let n = v.len() / 2;
        Some(SublatticeState {
            psi: v[..n].to_vec(),
            chi: v[n..].to_vec(),
            energy,
        })
    }
}

pub fn assemble_blocks(b: &ComplexMatrix, bprime: &ComplexMatrix) -> ComplexMatrix {
    let n = b.rows();
    let mut h = ComplexMatrix::zeros(2 * n, 2 * n);
    h.set_block(0, n, &b.scale(I));
    h.set_block(n, 0, &bprime.scale(-I));
    h
}

pub fn assemble(bh: &BlockHamiltonian, q: Momentum) -> Result<ComplexMatrix, SublatticeError> {
    let (b, bp) = bh.blocks(q)?;
    Ok(assemble_blocks(&b, &bp))
}

/// Max-abs entry of `P H P + H` with `P = diag(I, −I)`.
pub fn symmetry_residual(h: &ComplexMatrix) -> Result<f64, SublatticeError> {
    if !h.is_square() {
        return Err(LinalgError::NonSquare {
            rows: h.rows(),
            cols: h.cols(),
        }
        .into());
    }
    let dim = h.rows();
    if !dim.is_multiple_of(2) {
        return Err(SublatticeError::OddDimension(dim));
    }
    let n = dim / 2;
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            // P H P flips the sign of the off-diagonal blocks only.
            let same_side = (i < n) == (j < n);
            if same_side {
                worst = worst.max((h[(i, j)] * 2.0).norm());
            }
        }
    }
    Ok(worst)
}

/// `(ψ, χ, E) → (ψ, −χ, −E)`.
pub fn partner_state(s: &SublatticeState) -> SublatticeState {
    SublatticeState {
        psi: s.psi.clone(),
        chi: s.chi.iter().map(|z| -z).collect(),
        energy: -s.energy,
    }
}

pub fn reduced_spectrum(bh: &BlockHamiltonian, q: Momentum, tol: f64) -> Result<Vec<SublatticeState>, SublatticeError> {
    let (b, bp) = bh.blocks(q)?;
    reduced_spectrum_blocks(&b, &bp, tol)
}

/// Eigenstates of the assembled `H` from the eigenpairs `(λ, χ)` of `B′B`.
///
/// Each `λ` above `tol · ‖B′B‖` yields `E = +√λ` then `−√λ` with
/// `ψ = iBχ/E`. Vanishing `λ` yield the zero modes `(0, χ)` for `χ ∈ ker B`
/// followed by `(ψ, 0)` for `ψ ∈ ker B′`; at an exceptional point these are
/// fewer than the number of vanishing `λ`.
pub fn reduced_spectrum_blocks(
    b: &ComplexMatrix,
    bprime: &ComplexMatrix,
    tol: f64,
) -> Result<Vec<SublatticeState>, SublatticeError> {
    let n = b.rows();
    if !b.is_square() || bprime.rows() != n || bprime.cols() != n {
        return Err(LinalgError::ShapeMismatch("B and B' must be square of equal size".into()).into());
    }
    let product = bprime.matmul(b);
    let scale = product.norm2();
    let cutoff = (tol * scale).max(ABSOLUTE_FLOOR);
    let pairs = eig(&product)?;

    let mut states = Vec::with_capacity(2 * n);
    let mut zero_count = 0;
    for p in &pairs {
        if p.value.norm() <= cutoff {
            zero_count += 1;
            continue;
        }
        let e = p.value.sqrt();
        let bchi = b.matvec(&p.vector);
        for energy in [e, -e] {
            let psi: Vec<Complex64> = bchi.iter().map(|z| I * z / energy).collect();
            let full: Vec<Complex64> = psi.iter().chain(&p.vector).copied().collect();
            if let Some(s) = SublatticeState::from_vector(&full, energy) {
                states.push(s);
            }
        }
    }
    if zero_count > 0 {
        for chi in kernel_basis(b, tol)?.vectors() {
            let full: Vec<Complex64> = std::iter::repeat_n(ZERO, n).chain(chi.iter().copied()).collect();
            states.extend(SublatticeState::from_vector(&full, ZERO));
        }
        for psi in kernel_basis(bprime, tol)?.vectors() {
            let full: Vec<Complex64> = psi.iter().copied().chain(std::iter::repeat_n(ZERO, n)).collect();
            states.extend(SublatticeState::from_vector(&full, ZERO));
        }
    }
    Ok(states)
}
