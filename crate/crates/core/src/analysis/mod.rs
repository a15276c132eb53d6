//! Quantum distances, ray scans toward exceptional points, coalescence
//! verdicts, dispersion exponents and Brillouin-zone degeneracy search.

mod assign;
mod bz;
mod fit;
mod scan;

use num_complex::Complex64;
use thiserror::Error;

use crate::classify::ClassifyError;
use crate::cmatrix::{dot, vec_norm, LinalgError};
use crate::sublattice::SublatticeError;

pub use bz::{bz_scan, BzCandidate, BzScanOptions, ScanDomain, DEFAULT_BZ_TOL, DEFAULT_CLASSIFY_TOL};
pub use fit::{power_law_fit, scaling_exponent, ExponentFit, NOISE_FLOOR};
pub use scan::{
    coalescence_profile, coalescence_profile_with, log_radii, match_branches, path_scan, path_scan_with, BranchPoint,
    BranchSwitch, CoalescenceProfile, PathScan, Thresholds, Verdict, CONTINUITY_OVERLAP, PATH_ZERO_TOL,
};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("zero vector has no quantum distance")]
    ZeroVector,
    #[error("vectors of length {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid radii: {0}")]
    InvalidRadii(String),
    #[error("every sample radius was degenerate")]
    DegenerateAtSample,
    #[error("branch {branch} has fewer than two radii above the noise floor")]
    NoiseFloorReached { branch: usize },
    #[error("branch index {index} out of range ({count} branches)")]
    BranchOutOfRange { index: usize, count: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Sublattice(#[from] SublatticeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `D²(u, v) = 2 − 2|⟨u|v⟩|` on the normalized inputs, clamped to `[0, 2]`.
pub fn quantum_distance(u: &[Complex64], v: &[Complex64]) -> Result<f64, AnalysisError> {
    if u.len() != v.len() {
        return Err(AnalysisError::LengthMismatch(u.len(), v.len()));
    }
    let (nu, nv) = (vec_norm(u), vec_norm(v));
    if nu == 0.0 || nv == 0.0 || !nu.is_finite() || !nv.is_finite() {
        return Err(AnalysisError::ZeroVector);
    }
    let overlap = dot(u, v).norm() / (nu * nv);
    Ok((2.0 - 2.0 * overlap).clamp(0.0, 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{c, r, ONE, ZERO};

    #[test]
    fn distance_examples() {
        let u = [c(0.6, 0.0), c(0.0, 0.8)];
        assert!(quantum_distance(&u, &u).unwrap() < 1e-15);
        let ph = Complex64::from_polar(1.0, 1.234);
        let v: Vec<Complex64> = u.iter().map(|z| z * ph).collect();
        assert!(quantum_distance(&u, &v).unwrap() < 1e-15);
        assert_eq!(quantum_distance(&[ONE, ZERO], &[ZERO, ONE]).unwrap(), 2.0);
        let s = 0.5f64.sqrt();
        let d = quantum_distance(&[ONE, ZERO], &[r(s), r(s)]).unwrap();
        assert!((d - (2.0 - 2.0f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_inputs() {
        let d = quantum_distance(&[r(3.0), ZERO], &[r(2.0), r(2.0)]).unwrap();
        assert!((d - (2.0 - 2.0f64.sqrt())).abs() < 1e-15);
        assert!(matches!(
            quantum_distance(&[ZERO, ZERO], &[ONE, ZERO]),
            Err(AnalysisError::ZeroVector)
        ));
        assert!(matches!(
            quantum_distance(&[ONE], &[ONE, ZERO]),
            Err(AnalysisError::LengthMismatch(1, 2))
        ));
    }
}
