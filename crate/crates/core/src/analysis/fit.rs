use serde::Serialize;

use super::{AnalysisError, PathScan};

/// `|E|` at or below this is excluded from exponent fits.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub r_squared: f64,
    /// Number of samples above the noise floor that entered the fit.
    pub points: usize,
}

/// Least-squares slope of `log y` against `log x`, skipping `y ≤ NOISE_FLOOR`.
/// `None` if fewer than two usable samples remain.
pub fn power_law_fit(x: &[f64], y: &[f64]) -> Option<ExponentFit> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(xi, yi)| **xi > 0.0 && **yi > NOISE_FLOOR && yi.is_finite())
        .map(|(xi, yi)| (xi.ln(), yi.ln()))
        .collect();
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some(ExponentFit {
        exponent: slope,
        r_squared,
        points: n,
    })
}

/// Power law `|E| ∼ |δq|^p` of one branch of a scan.
pub fn scaling_exponent(scan: &PathScan, branch: usize) -> Result<ExponentFit, AnalysisError> {
    let count = scan.branch_count();
    if branch >= count {
        return Err(AnalysisError::BranchOutOfRange { index: branch, count });
    }
    let mags: Vec<f64> = scan.energies(branch).iter().map(|e| e.norm()).collect();
    power_law_fit(&scan.radii, &mags).ok_or(AnalysisError::NoiseFloorReached { branch })
}
