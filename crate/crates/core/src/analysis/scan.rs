use num_complex::Complex64;
use serde::Serialize;

use super::assign::min_cost_assignment;
use super::{quantum_distance, AnalysisError};
use crate::cmatrix::dot;
use crate::sublattice::{reduced_spectrum, BlockHamiltonian, Momentum};

/// Zero-eigenvalue tolerance (relative to `‖B′B‖`) used along scan rays.
/// Small enough that `λ ~ |δq|²` at `|δq| = 1e-6` still counts as nonzero.
pub const PATH_ZERO_TOL: f64 = 1e-14;

/// Overlap below which a continuation step is flagged as a branch switch.
pub const CONTINUITY_OVERLAP: f64 = 0.9;

const DISTINCT_D2: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchPoint {
    pub energy: Complex64,
    pub state: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchSwitch {
    pub radius: f64,
    pub branch: usize,
    pub overlap: f64,
}

/// Eigenstates along `q* + r(cos θ, sin θ)`, continued across radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathScan {
    pub q_star: Momentum,
    pub theta: f64,
    /// Radii that were kept, strictly descending.
    pub radii: Vec<f64>,
    /// `branches[i][k]`: branch `k` at `radii[i]`.
    pub branches: Vec<Vec<BranchPoint>>,
    /// Radii dropped because two states could not be told apart.
    pub skipped: Vec<f64>,
    pub switches: Vec<BranchSwitch>,
}

impl PathScan {
    pub fn branch_count(&self) -> usize {
        self.branches.first().map_or(0, Vec::len)
    }

    pub fn energies(&self, branch: usize) -> Vec<Complex64> {
        self.branches.iter().map(|row| row[branch].energy).collect()
    }

    pub fn skipped_fraction(&self) -> f64 {
        let total = self.radii.len() + self.skipped.len();
        if total == 0 {
            0.0
        } else {
            self.skipped.len() as f64 / total as f64
        }
    }
}

/// `count` log-spaced radii from `max` down to `min`.
pub fn log_radii(min: f64, max: f64, count: usize) -> Result<Vec<f64>, AnalysisError> {
    if !(min > 0.0 && max > min && max.is_finite()) || count < 2 {
        return Err(AnalysisError::InvalidRadii(format!("{min}:{max}:{count}")));
    }
    let (lo, hi) = (min.log10(), max.log10());
    Ok((0..count)
        .map(|i| {
            if i == 0 {
                max
            } else if i == count - 1 {
                min
            } else {
                10f64.powf(hi + (lo - hi) * i as f64 / (count - 1) as f64)
            }
        })
        .collect())
}

fn validate_radii(radii: &[f64]) -> Result<(), AnalysisError> {
    if radii.len() < 4 {
        return Err(AnalysisError::InvalidRadii(format!(
            "need at least 4 radii, got {}",
            radii.len()
        )));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(AnalysisError::InvalidRadii("radii must be positive and finite".into()));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(AnalysisError::InvalidRadii("radii must be strictly descending".into()));
    }
    if radii[0] / radii[radii.len() - 1] < 100.0 * (1.0 - 1e-12) {
        return Err(AnalysisError::InvalidRadii(
            "radii must span at least two decades".into(),
        ));
    }
    Ok(())
}

/// Assignment of `next` states to `prev` branches maximizing total
/// `|⟨prev|next⟩|`; `perm[k]` is the index in `next` continuing branch `k`.
pub fn match_branches(prev: &[Vec<Complex64>], next: &[Vec<Complex64>]) -> Vec<usize> {
    let cost: Vec<Vec<f64>> = prev
        .iter()
        .map(|p| next.iter().map(|s| -dot(p, s).norm()).collect())
        .collect();
    min_cost_assignment(&cost)
}

pub fn path_scan(
    bh: &BlockHamiltonian,
    q_star: Momentum,
    theta: f64,
    radii: &[f64],
) -> Result<PathScan, AnalysisError> {
    path_scan_with(bh, q_star, theta, radii, PATH_ZERO_TOL)
}

pub fn path_scan_with(
    bh: &BlockHamiltonian,
    q_star: Momentum,
    theta: f64,
    radii: &[f64],
    zero_tol: f64,
) -> Result<PathScan, AnalysisError> {
    validate_radii(radii)?;
    let width = bh.dim();
    let (s, c) = theta.sin_cos();
    let mut scan = PathScan {
        q_star,
        theta,
        radii: Vec::new(),
        branches: Vec::new(),
        skipped: Vec::new(),
        switches: Vec::new(),
    };
    for &radius in radii {
        let q = [q_star[0] + radius * c, q_star[1] + radius * s];
        let states = reduced_spectrum(bh, q, zero_tol)?;
        let points: Vec<BranchPoint> = states
            .into_iter()
            .map(|st| BranchPoint {
                energy: st.energy,
                state: st.vector(),
            })
            .collect();
        if points.len() != width || !distinct(&points)? {
            scan.skipped.push(radius);
            continue;
        }
        let ordered = match scan.branches.last() {
            None => points,
            Some(prev) => {
                let prev_states: Vec<Vec<Complex64>> = prev.iter().map(|p| p.state.clone()).collect();
                let next_states: Vec<Vec<Complex64>> = points.iter().map(|p| p.state.clone()).collect();
                let perm = match_branches(&prev_states, &next_states);
                for (k, &j) in perm.iter().enumerate() {
                    let overlap = dot(&prev_states[k], &next_states[j]).norm();
                    if overlap < CONTINUITY_OVERLAP {
                        scan.switches.push(BranchSwitch {
                            radius,
                            branch: k,
                            overlap,
                        });
                    }
                }
                perm.iter().map(|&j| points[j].clone()).collect()
            }
        };
        scan.radii.push(radius);
        scan.branches.push(ordered);
    }
    if scan.radii.len() < 2 {
        return Err(AnalysisError::DegenerateAtSample);
    }
    Ok(scan)
}

fn distinct(points: &[BranchPoint]) -> Result<bool, AnalysisError> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if quantum_distance(&points[i].state, &points[j].state)? < DISTINCT_D2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ConvergesToZero,
    BoundedAway,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub converge: f64,
    pub bounded: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            converge: 1e-3,
            bounded: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoalescenceProfile {
    pub labels: Vec<String>,
    pub radii: Vec<f64>,
    /// `distances[branch][target][radius]`.
    pub distances: Vec<Vec<Vec<f64>>>,
    /// `verdicts[branch][target]`.
    pub verdicts: Vec<Vec<Verdict>>,
}

impl CoalescenceProfile {
    pub fn verdict(&self, branch: usize, label: &str) -> Option<Verdict> {
        let t = self.labels.iter().position(|l| l == label)?;
        self.verdicts.get(branch).map(|v| v[t])
    }
}

pub fn coalescence_profile(
    scan: &PathScan,
    targets: &[(String, Vec<Complex64>)],
) -> Result<CoalescenceProfile, AnalysisError> {
    coalescence_profile_with(scan, targets, Thresholds::default())
}

pub fn coalescence_profile_with(
    scan: &PathScan,
    targets: &[(String, Vec<Complex64>)],
    th: Thresholds,
) -> Result<CoalescenceProfile, AnalysisError> {
    let mut distances = Vec::with_capacity(scan.branch_count());
    let mut verdicts = Vec::with_capacity(scan.branch_count());
    for k in 0..scan.branch_count() {
        let mut per_target = Vec::with_capacity(targets.len());
        let mut per_verdict = Vec::with_capacity(targets.len());
        for (_, t) in targets {
            let d: Vec<f64> = scan
                .branches
                .iter()
                .map(|row| quantum_distance(&row[k].state, t))
                .collect::<Result<_, _>>()?;
            per_verdict.push(verdict(&d, th));
            per_target.push(d);
        }
        distances.push(per_target);
        verdicts.push(per_verdict);
    }
    Ok(CoalescenceProfile {
        labels: targets.iter().map(|(l, _)| l.clone()).collect(),
        radii: scan.radii.clone(),
        distances,
        verdicts,
    })
}

fn verdict(d: &[f64], th: Thresholds) -> Verdict {
    let Some(&last) = d.last() else {
        return Verdict::Indeterminate;
    };
    let tail = &d[d.len().saturating_sub(3)..];
    let decreasing = tail.windows(2).all(|w| w[1] <= w[0] + 1e-14);
    if last < th.converge && decreasing {
        Verdict::ConvergesToZero
    } else if last >= th.bounded {
        Verdict::BoundedAway
    } else {
        Verdict::Indeterminate
    }
}
