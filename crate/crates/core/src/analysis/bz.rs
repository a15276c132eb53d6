use rayon::prelude::*;
use serde::Serialize;

use super::AnalysisError;
use crate::classify::{classify, EpClassification};
use crate::cmatrix::{svd, ABSOLUTE_FLOOR};
use crate::models::reciprocal_basis;
use crate::sublattice::{assemble, BlockHamiltonian, Momentum};

/// Refined points are accepted when `σ_min(H) ≤ tol · ‖H‖`.
pub const DEFAULT_BZ_TOL: f64 = 1e-6;
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;

const MAX_EVALS: usize = 200;
const MIN_STEP: f64 = 1e-14;
const DEDUPE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ScanDomain {
    /// Closed rectangle, grid includes both edges.
    Rect { min: Momentum, max: Momentum },
    /// Periodic cell `origin + s·a + t·b`, `s, t ∈ [0, 1)`.
    Cell { origin: Momentum, a: Momentum, b: Momentum },
}

impl ScanDomain {
    /// Reciprocal cell of the triangular lattice centred on `q = 0`.
    pub fn brillouin_zone() -> Self {
        let [g1, g2] = reciprocal_basis();
        ScanDomain::Cell {
            origin: [-(g1[0] + g2[0]) / 2.0, -(g1[1] + g2[1]) / 2.0],
            a: g1,
            b: g2,
        }
    }

    fn validate(&self) -> Result<(), AnalysisError> {
        match *self {
            ScanDomain::Rect { min, max } => {
                if !(min[0] < max[0] && min[1] < max[1]) || min.iter().chain(&max).any(|v| !v.is_finite()) {
                    return Err(AnalysisError::InvalidGrid(
                        "rectangle needs min < max on both axes".into(),
                    ));
                }
            }
            ScanDomain::Cell { origin, a, b } => {
                let det = a[0] * b[1] - a[1] * b[0];
                if det.abs() < 1e-12 || origin.iter().chain(&a).chain(&b).any(|v| !v.is_finite()) {
                    return Err(AnalysisError::InvalidGrid("cell vectors are degenerate".into()));
                }
            }
        }
        Ok(())
    }

    fn point(&self, i: usize, j: usize, nx: usize, ny: usize) -> Momentum {
        match *self {
            ScanDomain::Rect { min, max } => [
                min[0] + (max[0] - min[0]) * i as f64 / (nx - 1) as f64,
                min[1] + (max[1] - min[1]) * j as f64 / (ny - 1) as f64,
            ],
            ScanDomain::Cell { origin, a, b } => {
                let (s, t) = (i as f64 / nx as f64, j as f64 / ny as f64);
                [origin[0] + s * a[0] + t * b[0], origin[1] + s * a[1] + t * b[1]]
            }
        }
    }

    fn spacing(&self, nx: usize, ny: usize) -> f64 {
        match *self {
            ScanDomain::Rect { min, max } => {
                ((max[0] - min[0]) / (nx - 1) as f64).min((max[1] - min[1]) / (ny - 1) as f64)
            }
            ScanDomain::Cell { a, b, .. } => (a[0].hypot(a[1]) / nx as f64).min(b[0].hypot(b[1]) / ny as f64),
        }
    }

    fn fractional(origin: Momentum, a: Momentum, b: Momentum, q: Momentum) -> [f64; 2] {
        let det = a[0] * b[1] - a[1] * b[0];
        let (dx, dy) = (q[0] - origin[0], q[1] - origin[1]);
        [(dx * b[1] - dy * b[0]) / det, (a[0] * dy - a[1] * dx) / det]
    }

    /// Map into the domain: periodic reduction for a cell, clamping for a rectangle.
    fn wrap(&self, q: Momentum) -> Momentum {
        match *self {
            ScanDomain::Rect { min, max } => [q[0].clamp(min[0], max[0]), q[1].clamp(min[1], max[1])],
            ScanDomain::Cell { origin, a, b } => {
                let f = Self::fractional(origin, a, b, q);
                let reduce = |v: f64| {
                    let r = v - v.floor();
                    if r >= 1.0 {
                        0.0
                    } else {
                        r
                    }
                };
                let (s, t) = (reduce(f[0]), reduce(f[1]));
                [origin[0] + s * a[0] + t * b[0], origin[1] + s * a[1] + t * b[1]]
            }
        }
    }

    fn distance(&self, p: Momentum, q: Momentum) -> f64 {
        match *self {
            ScanDomain::Rect { .. } => (p[0] - q[0]).hypot(p[1] - q[1]),
            ScanDomain::Cell { a, b, .. } => {
                let f = Self::fractional([0.0, 0.0], a, b, [p[0] - q[0], p[1] - q[1]]);
                let (s, t) = (f[0] - f[0].round(), f[1] - f[1].round());
                (s * a[0] + t * b[0]).hypot(s * a[1] + t * b[1])
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BzScanOptions {
    pub nx: usize,
    pub ny: usize,
    pub domain: ScanDomain,
    pub tol: f64,
    pub classify_tol: f64,
}

impl Default for BzScanOptions {
    fn default() -> Self {
        BzScanOptions {
            nx: 64,
            ny: 64,
            domain: ScanDomain::brillouin_zone(),
            tol: DEFAULT_BZ_TOL,
            classify_tol: DEFAULT_CLASSIFY_TOL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BzCandidate {
    /// Grid point the refinement started from.
    pub grid_q: Momentum,
    pub q: Momentum,
    pub sigma_min: f64,
    pub classification: EpClassification,
}

fn sigma_min(bh: &BlockHamiltonian, q: Momentum) -> Result<f64, AnalysisError> {
    Ok(svd(&assemble(bh, q)?)?.sigma_min())
}

/// Compass search on `σ_min(H(q))` starting at `q0` with step `h`.
fn refine(
    bh: &BlockHamiltonian,
    domain: &ScanDomain,
    q0: Momentum,
    f0: f64,
    h: f64,
) -> Result<(Momentum, f64), AnalysisError> {
    let (mut q, mut f, mut step) = (q0, f0, h);
    let mut evals = 0;
    while evals + 4 <= MAX_EVALS && step > MIN_STEP {
        let mut best = (q, f);
        for d in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
            let trial = match domain {
                ScanDomain::Rect { .. } => domain.wrap([q[0] + step * d[0], q[1] + step * d[1]]),
                ScanDomain::Cell { .. } => [q[0] + step * d[0], q[1] + step * d[1]],
            };
            let ft = sigma_min(bh, trial)?;
            evals += 1;
            if ft < best.1 {
                best = (trial, ft);
            }
        }
        if best.1 < f {
            (q, f) = best;
        } else {
            step *= 0.5;
        }
    }
    Ok((q, f))
}

/// Grid search for zeros of `σ_min(H(q))`, refined and classified, sorted by `(q_x, q_y)`.
pub fn bz_scan(bh: &BlockHamiltonian, opts: &BzScanOptions) -> Result<Vec<BzCandidate>, AnalysisError> {
    let (nx, ny) = (opts.nx, opts.ny);
    if nx < 16 || ny < 16 {
        return Err(AnalysisError::InvalidGrid(format!("grid {nx}x{ny} below 16 per axis")));
    }
    if !(opts.tol > 0.0 && opts.classify_tol > 0.0) {
        return Err(AnalysisError::InvalidGrid("tolerances must be positive".into()));
    }
    let domain = opts.domain;
    domain.validate()?;
    let periodic = matches!(domain, ScanDomain::Cell { .. });

    let values: Vec<f64> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| sigma_min(bh, domain.point(idx / ny, idx % ny, nx, ny)))
        .collect::<Result<_, _>>()?;

    let mut minima = Vec::new();
    for idx in 0..nx * ny {
        let (i, j) = (idx / ny, idx % ny);
        let v = values[idx];
        let mut is_min = true;
        'nb: for di in [-1i64, 0, 1] {
            for dj in [-1i64, 0, 1] {
                if di == 0 && dj == 0 {
                    continue;
                }
                let (mut ni, mut nj) = (i as i64 + di, j as i64 + dj);
                if periodic {
                    ni = ni.rem_euclid(nx as i64);
                    nj = nj.rem_euclid(ny as i64);
                } else if ni < 0 || nj < 0 || ni >= nx as i64 || nj >= ny as i64 {
                    continue;
                }
                let nidx = ni as usize * ny + nj as usize;
                if nidx == idx {
                    continue;
                }
                let w = values[nidx];
                if w < v || (w == v && nidx < idx) {
                    is_min = false;
                    break 'nb;
                }
            }
        }
        if is_min {
            minima.push(idx);
        }
    }

    let h = 0.5 * domain.spacing(nx, ny);
    let refined: Vec<Option<BzCandidate>> = minima
        .par_iter()
        .map(|&idx| -> Result<Option<BzCandidate>, AnalysisError> {
            let grid_q = domain.point(idx / ny, idx % ny, nx, ny);
            let (q, f) = refine(bh, &domain, grid_q, values[idx], h)?;
            let q = domain.wrap(q);
            let hq = assemble(bh, q)?;
            if f > opts.tol * hq.norm2().max(ABSOLUTE_FLOOR) {
                return Ok(None);
            }
            let (b, bp) = bh.blocks(q)?;
            let classification = classify(&b, &bp, opts.classify_tol)?;
            Ok(Some(BzCandidate {
                grid_q,
                q,
                sigma_min: f,
                classification,
            }))
        })
        .collect::<Result<_, _>>()?;

    let mut accepted: Vec<BzCandidate> = refined.into_iter().flatten().collect();
    accepted.sort_by(|x, y| {
        x.sigma_min
            .total_cmp(&y.sigma_min)
            .then(x.q[0].total_cmp(&y.q[0]))
            .then(x.q[1].total_cmp(&y.q[1]))
    });
    let mut kept: Vec<BzCandidate> = Vec::new();
    for cand in accepted {
        if kept.iter().all(|k| domain.distance(k.q, cand.q) > DEDUPE) {
            kept.push(cand);
        }
    }
    kept.sort_by(|x, y| x.q[0].total_cmp(&y.q[0]).then(x.q[1].total_cmp(&y.q[1])));
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::EpKind;
    use crate::models::{ep4_sqrt_model, kitaev_a, kitaev_ep_locations, kitaev_model, re, Ep4SqrtParams, KitaevParams};

    #[test]
    fn kitaev_points_match_closed_form() {
        let p = KitaevParams::default();
        let found = bz_scan(&kitaev_model(&p), &Default::default()).unwrap();
        let dom = ScanDomain::brillouin_zone();
        let mut expected = Vec::new();
        for q in kitaev_ep_locations(&p).unwrap() {
            expected.push(q);
            expected.push([-q[0], -q[1]]);
        }
        assert_eq!(found.len(), 4);
        for cand in &found {
            assert!(expected.iter().any(|&e| dom.distance(e, cand.q) < 1e-6), "{:?}", cand.q);
            assert_eq!(cand.classification.kind, EpKind::EP2);
        }
        for e in &expected {
            assert!(found.iter().any(|c| dom.distance(*e, c.q) < 1e-6));
        }
        assert!(found.windows(2).all(|w| w[0].q[0] <= w[1].q[0]));
        for cand in &found {
            let q = cand.q;
            assert!(kitaev_a(&p, q).norm().min(kitaev_a(&p, [-q[0], -q[1]]).norm()) < 1e-6);
        }
    }

    #[test]
    fn embedded_ep4() {
        let p = Ep4SqrtParams {
            qx: re(0.3),
            qy: re(0.7),
            ..Default::default()
        };
        let opts = BzScanOptions {
            nx: 32,
            ny: 32,
            domain: ScanDomain::Rect {
                min: [0.0, 0.0],
                max: [1.0, 1.0],
            },
            ..Default::default()
        };
        let found = bz_scan(&ep4_sqrt_model(&p).unwrap(), &opts).unwrap();
        assert_eq!(found.len(), 1);
        assert!((found[0].q[0] - 0.3).abs() < 1e-4 && (found[0].q[1] - 0.7).abs() < 1e-4);
        assert_eq!(found[0].classification.kind, EpKind::EP4);
    }

    #[test]
    fn gapped_kitaev_is_empty() {
        let p = KitaevParams {
            j1: re(3.0),
            ..Default::default()
        };
        assert!(bz_scan(&kitaev_model(&p), &Default::default()).unwrap().is_empty());
    }

    #[test]
    fn rejects_small_grid() {
        let opts = BzScanOptions {
            nx: 8,
            ..Default::default()
        };
        let p = KitaevParams::default();
        assert!(matches!(
            bz_scan(&kitaev_model(&p), &opts),
            Err(AnalysisError::InvalidGrid(_))
        ));
    }
}
