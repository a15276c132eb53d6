//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use epkit::analysis::{
    bz_scan, coalescence_profile, log_radii, path_scan, scaling_exponent, BzScanOptions, ScanDomain, Verdict,
};
use epkit::classify::{check_ep2n, classify, classify_zero_energy, mixed_limit_family, EpKind, LimitFamily};
use epkit::cmatrix::{dot, eig, normalized, ComplexMatrix, ONE, ZERO};
use epkit::models::{
    cartesian_to_reciprocal, kitaev_a, kitaev_bloch, kitaev_ep_locations, kitaev_model, KitaevParams, Model,
};
use epkit::spectral::{blocks_at, ep_report, jordan_chain, rank_sequence};
use epkit::sublattice::{assemble, assemble_blocks, BlockHamiltonian};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn m(rows: [[f64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&rows)
}

// Independent block-size formula: blocks of size >= k number r_{k-1} - r_k.
fn blocks_of(ranks: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1..ranks.len() {
        let ge_k = ranks[k - 1] - ranks[k];
        let ge_next = if k + 1 < ranks.len() {
            ranks[k] - ranks[k + 1]
        } else {
            0
        };
        for _ in 0..ge_k - ge_next {
            out.push(k);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn criterion_1() -> Outcome {
    let cases = [
        (
            "col. 1",
            m([[0.0, 0.0], [0.0, 0.0]]),
            m([[2.0, 0.0], [0.0, 2.0]]),
            EpKind::DoubletEP2,
            vec![2, 2],
        ),
        (
            "col. 2",
            m([[0.0, 0.0], [0.0, 1.0]]),
            m([[1.0, 2.0], [3.0, 0.0]]),
            EpKind::EP4,
            vec![4],
        ),
        // B = p u^T, B' from u and p'
        (
            "col. 3",
            m([[1.0, 0.0], [0.0, 0.0]]),
            m([[0.0, 0.0], [-1.0, 0.0]]),
            EpKind::EP3Mixed,
            vec![3, 1],
        ),
    ];
    for (name, b, bp, kind, blocks) in cases {
        let out = classify_zero_energy(&b, &bp, 1e-9).map_err(|e| format!("{name}: {e}"))?;
        ensure(out.kind == kind, format!("{name}: got {}", out.kind))?;
        let ranks = rank_sequence(&assemble_blocks(&b, &bp), ZERO, 1e-9).map_err(|e| e.to_string())?;
        ensure(
            blocks_of(&ranks) == blocks,
            format!("{name}: rank blocks {:?}", blocks_of(&ranks)),
        )?;
        ensure(
            out.evidence.zero_energy_blocks == blocks,
            format!("{name}: evidence blocks"),
        )?;
    }
    Ok("DoubletEP2 [2,2], EP4 [4], EP3Mixed [3,1]".into())
}

#[derive(Clone, Copy, PartialEq, Debug)]
struct Gi(i128, i128);

impl Gi {
    fn mul(self, o: Gi) -> Gi {
        Gi(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn sub(self, o: Gi) -> Gi {
        Gi(self.0 - o.0, self.1 - o.1)
    }
    fn is_zero(self) -> bool {
        self.0 == 0 && self.1 == 0
    }
    fn div_exact(self, d: Gi) -> Gi {
        let n = d.0 * d.0 + d.1 * d.1;
        let num = self.mul(Gi(d.0, -d.1));
        assert!(num.0 % n == 0 && num.1 % n == 0, "inexact Bareiss division");
        Gi(num.0 / n, num.1 / n)
    }
}

fn gi_matmul(a: &[Vec<Gi>], b: &[Vec<Gi>]) -> Vec<Vec<Gi>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Gi(0, 0), |acc, k| {
                        let p = a[i][k].mul(b[k][j]);
                        Gi(acc.0 + p.0, acc.1 + p.1)
                    })
                })
                .collect()
        })
        .collect()
}

/// Exact rank by fraction-free (Bareiss) elimination.
fn gi_rank(mut a: Vec<Vec<Gi>>) -> usize {
    let (rows, cols) = (a.len(), a[0].len());
    let mut prev = Gi(1, 0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = a[rank][col].mul(a[r][c]).sub(a[r][col].mul(a[rank][c]));
                a[r][c] = v.div_exact(prev);
            }
            a[r][col] = Gi(0, 0);
        }
        prev = a[rank][col];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let units = [Gi(0, 0), Gi(1, 0), Gi(-1, 0), Gi(0, 1), Gi(0, -1)];
    let mut counts = std::collections::BTreeMap::new();
    for trial in 0..1000 {
        let mut draw = || -> [[Gi; 2]; 2] {
            let mut g = [[Gi(0, 0); 2]; 2];
            for row in g.iter_mut() {
                for e in row.iter_mut() {
                    let u = units[rng.gen_range(0..units.len())];
                    let s = rng.gen_range(1..=3i128);
                    *e = Gi(u.0 * s, u.1 * s);
                }
            }
            g
        };
        let (gb, gbp) = (draw(), draw());
        // H = [[0, iB], [-iB', 0]] over the Gaussian integers
        let mut h = vec![vec![Gi(0, 0); 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                h[i][2 + j] = Gi(0, 1).mul(gb[i][j]);
                h[2 + i][j] = Gi(0, -1).mul(gbp[i][j]);
            }
        }
        let mut ranks = vec![4];
        let mut power = h.clone();
        loop {
            let r = gi_rank(power.clone());
            let prev = *ranks.last().unwrap();
            ranks.push(r);
            if r == prev || r == 0 {
                break;
            }
            power = gi_matmul(&power, &h);
        }
        let oracle = blocks_of(&ranks);

        let (sb, sbp) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let to_c = |g: &[[Gi; 2]; 2], s: f64| {
            ComplexMatrix::from_rows(&[
                [
                    Complex64::new(g[0][0].0 as f64, g[0][0].1 as f64) * s,
                    Complex64::new(g[0][1].0 as f64, g[0][1].1 as f64) * s,
                ],
                [
                    Complex64::new(g[1][0].0 as f64, g[1][0].1 as f64) * s,
                    Complex64::new(g[1][1].0 as f64, g[1][1].1 as f64) * s,
                ],
            ])
        };
        let (b, bp) = (to_c(&gb, sb), to_c(&gbp, sbp));
        let kind = match classify(&b, &bp, 1e-9) {
            Ok(out) => out.kind,
            Err(e) => return Err(format!("trial {trial}: classifier error {e} (oracle {oracle:?})")),
        };
        *counts.entry(kind.name()).or_insert(0) += 1;
        let agree = match kind {
            EpKind::EP4 => oracle == [4],
            EpKind::EP3Mixed => oracle == [3, 1],
            EpKind::DoubletEP2 => oracle == [2, 2],
            EpKind::Nondegenerate | EpKind::NonzeroEnergyEP2Pair => oracle.is_empty(),
            _ => true,
        };
        let converse = match oracle.as_slice() {
            [4] => kind == EpKind::EP4,
            [3, 1] => kind == EpKind::EP3Mixed,
            [] => matches!(kind, EpKind::Nondegenerate | EpKind::NonzeroEnergyEP2Pair),
            _ => true,
        };
        ensure(agree && converse, format!("trial {trial}: {kind} vs oracle {oracle:?}"))?;
    }
    Ok(format!("0 mismatches, kinds {counts:?}"))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_vec(n, n, data).unwrap()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let n = rng.gen_range(1..=3);
        let (b0, b1, p0, p1) = (
            random_matrix(&mut rng, n),
            random_matrix(&mut rng, n),
            random_matrix(&mut rng, n),
            random_matrix(&mut rng, n),
        );
        let bh = BlockHamiltonian::from_fns(
            n,
            move |q| &b0 + &b1.scale(Complex64::new(q[0].cos(), q[1].sin())),
            move |q| &p0 + &p1.scale(Complex64::new(q[1].cos(), -q[0].sin())),
        );
        let q = [rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)];
        let h = assemble(&bh, q).map_err(|e| e.to_string())?;
        let vals: Vec<Complex64> = eig(&h).map_err(|e| e.to_string())?.iter().map(|p| p.value).collect();
        let tol = 1e-9 * h.norm2();
        let mut used = vec![false; vals.len()];
        for v in &vals {
            let j = (0..vals.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| (vals[a] + v).norm().total_cmp(&(vals[b] + v).norm()))
                .unwrap();
            used[j] = true;
            let gap = (vals[j] + v).norm();
            worst = worst.max(gap / h.norm2());
            ensure(gap <= tol, format!("trial {trial}: no partner for {v} (gap {gap:e})"))?;
        }
    }
    Ok(format!("worst relative pairing gap {worst:.1e}"))
}

fn exponents(id: &str, theta: f64) -> Result<Vec<f64>, String> {
    let model = Model::from_id(id).map_err(|e| e.to_string())?;
    let bh = model.hamiltonian().map_err(|e| e.to_string())?;
    let radii = log_radii(1e-6, 1e-2, 12).unwrap();
    let scan = path_scan(&bh, model.q_star().unwrap(), theta, &radii).map_err(|e| e.to_string())?;
    let mut p: Vec<f64> = (0..scan.branch_count())
        .map(|k| scaling_exponent(&scan, k).map(|f| f.exponent))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    p.sort_by(f64::total_cmp);
    Ok(p)
}

fn criterion_4() -> Outcome {
    let cases: [(&str, f64, [f64; 4]); 8] = [
        ("doublet-ep2", 0.0, [0.5; 4]),
        ("doublet-ep2", 0.9, [0.5; 4]),
        ("ep4-sqrt", 0.0, [0.5; 4]),
        ("ep4-sqrt", 0.7, [0.5; 4]),
        ("ep4-quartic", 0.0, [0.25; 4]),
        ("ep4-quartic", 0.7, [0.25; 4]),
        ("ep3", 0.0, [0.5; 4]),
        ("ep3", FRAC_PI_2, [0.5, 0.5, 1.0, 1.0]),
    ];
    let mut worst: f64 = 0.0;
    for (id, theta, want) in cases {
        let got = exponents(id, theta)?;
        for (g, w) in got.iter().zip(want) {
            worst = worst.max((g - w).abs());
            ensure((g - w).abs() <= 0.05, format!("{id} theta={theta}: {got:?}"))?;
        }
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn profile(id: &str, theta: f64) -> Result<(Vec<f64>, epkit::analysis::CoalescenceProfile), String> {
    let model = Model::from_id(id).map_err(|e| e.to_string())?;
    let bh = model.hamiltonian().map_err(|e| e.to_string())?;
    let scan = path_scan(&bh, model.q_star().unwrap(), theta, &log_radii(1e-6, 1e-2, 12).unwrap())
        .map_err(|e| e.to_string())?;
    let targets = model.targets(1e-9).map_err(|e| e.to_string())?;
    let p: Vec<f64> = (0..scan.branch_count())
        .map(|k| scaling_exponent(&scan, k).unwrap().exponent)
        .collect();
    Ok((p, coalescence_profile(&scan, &targets).map_err(|e| e.to_string())?))
}

fn criterion_5() -> Outcome {
    use Verdict::*;
    let (_, ep4) = profile("ep4-sqrt", 0.0)?;
    for k in 0..4 {
        ensure(
            ep4.verdict(k, "e1") == Some(ConvergesToZero),
            format!("ep4-sqrt branch {k}: {:?}", ep4.verdict(k, "e1")),
        )?;
    }
    let (_, p1) = profile("ep3", 0.0)?;
    for k in 0..4 {
        ensure(
            p1.verdict(k, "e1") == Some(ConvergesToZero),
            format!("ep3 path 1 branch {k} to e1"),
        )?;
        ensure(
            p1.verdict(k, "e2") == Some(BoundedAway),
            format!("ep3 path 1 branch {k} to e2"),
        )?;
    }
    let (exps, p2) = profile("ep3", FRAC_PI_2)?;
    let min_exp = exps.iter().cloned().fold(f64::INFINITY, f64::min);
    for (k, exp) in exps.iter().enumerate() {
        let small = (exp - min_exp).abs() < 0.05;
        let (v1, v2) = (p2.verdict(k, "e1").unwrap(), p2.verdict(k, "e2").unwrap());
        if small {
            ensure(
                v1 == ConvergesToZero,
                format!("ep3 path 2 branch {k} (exponent {exp:.3}): e1 {v1:?}"),
            )?;
        } else {
            ensure(
                v1 == BoundedAway && v2 == BoundedAway,
                format!("ep3 path 2 branch {k}: {v1:?} {v2:?}"),
            )?;
        }
    }
    let converging = (0..4).filter(|&k| p2.verdict(k, "e1") == Some(ConvergesToZero)).count();
    ensure(converging == 2, format!("ep3 path 2: {converging} branches reach e1"))?;
    Ok("ep4-sqrt 4/4 to e1; ep3 path 1 4/4 to e1, 0/4 to e2; ep3 path 2 square-root pair only".into())
}

fn criterion_6() -> Outcome {
    let m0 = mixed_limit_family(LimitFamily::ViaEP2, 0.0);
    for fam in [LimitFamily::ViaEP2, LimitFamily::ViaEP4] {
        let r = ep_report(&mixed_limit_family(fam, 0.0), 1e-9).map_err(|e| e.to_string())?;
        ensure(
            r.clusters.len() == 1 && r.clusters[0].structure.block_sizes == [3, 1],
            format!(
                "{fam:?} at 0: {:?}",
                r.clusters.iter().map(|c| &c.structure.block_sizes).collect::<Vec<_>>()
            ),
        )?;
    }
    for eps in [1e-1, 1e-2, 1e-3] {
        let h = mixed_limit_family(LimitFamily::ViaEP2, eps);
        let r = ep_report(&h, 1e-9).map_err(|e| e.to_string())?;
        ensure(
            r.clusters.len() == 3,
            format!("ViaEP2 eps={eps}: {} clusters", r.clusters.len()),
        )?;
        let zero = r
            .at(ZERO, eps / 2.0)
            .ok_or(format!("ViaEP2 eps={eps}: no cluster at 0"))?;
        ensure(
            zero.block_sizes == [2],
            format!("ViaEP2 eps={eps}: {:?} at 0", zero.block_sizes),
        )?;
        for target in [eps, 2.0 * eps] {
            let c = r
                .clusters
                .iter()
                .find(|c| {
                    (c.cluster.center.re - target).abs() <= 1e-10 * target
                        && c.cluster.center.im.abs() <= 1e-10 * target
                })
                .ok_or(format!("ViaEP2 eps={eps}: eigenvalue {target} missing"))?;
            ensure(
                c.structure.block_sizes == [1],
                format!("ViaEP2 eps={eps}: {target} not simple"),
            )?;
        }
        let h4 = mixed_limit_family(LimitFamily::ViaEP4, eps);
        let r4 = ep_report(&h4, 1e-9).map_err(|e| e.to_string())?;
        ensure(
            r4.clusters.len() == 1 && r4.clusters[0].structure.block_sizes == [4],
            format!(
                "ViaEP4 eps={eps}: {:?}",
                r4.clusters.iter().map(|c| &c.structure.block_sizes).collect::<Vec<_>>()
            ),
        )?;
        // the largest entry of the EP2 family is its 2ε diagonal
        for (name, mat, want) in [("ViaEP2", &h, 2.0 * eps), ("ViaEP4", &h4, eps)] {
            let dist = (mat - &m0).max_abs();
            ensure(dist == want, format!("{name} eps={eps}: distance {dist:e}"))?;
        }
    }
    Ok("[2]+{ε,2ε} / [4] for ε ∈ {1e-1,1e-2,1e-3}; [3,1] at ε = 0; distances 2ε / ε".into())
}

/// Difference reduced modulo the reciprocal lattice.
fn lattice_diff(p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    let t = cartesian_to_reciprocal([p[0] - q[0], p[1] - q[1]]);
    // q·r_i is defined modulo 2π
    let w = [
        t[0] - 2.0 * PI * (t[0] / (2.0 * PI)).round(),
        t[1] - 2.0 * PI * (t[1] / (2.0 * PI)).round(),
    ];
    epkit::models::reciprocal_to_cartesian(w)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sets = 0;
    let mut worst: f64 = 0.0;
    while sets < 20 {
        let p = KitaevParams {
            j1: Complex64::new(rng.gen_range(0.5..1.5), 0.0),
            j2: Complex64::new(rng.gen_range(0.5..1.5), 0.0),
            j3: Complex64::new(rng.gen_range(0.5..1.5), 0.0),
            phi1: Complex64::new(rng.gen_range(-0.5..0.5), 0.0),
            phi2: Complex64::new(rng.gen_range(-0.5..0.5), 0.0),
        };
        let (a1, a2, j3) = (p.j1.re, p.j2.re, p.j3.re);
        let c1 = (a2 * a2 - a1 * a1 - j3 * j3) / (2.0 * a1 * j3);
        let c2 = (a1 * a1 - a2 * a2 - j3 * j3) / (2.0 * a2 * j3);
        // well inside the gapless regime
        if c1.abs() > 0.9 || c2.abs() > 0.9 {
            continue;
        }
        sets += 1;
        let closed = kitaev_ep_locations(&p).map_err(|e| e.to_string())?;
        let scale = a1 + a2 + j3.abs();
        let mut expected = Vec::new();
        for q in &closed {
            let res = kitaev_a(&p, *q).norm();
            ensure(res <= 1e-9 * scale, format!("set {sets}: |A(q*)| = {res:e}"))?;
            let blocks = blocks_at(&kitaev_bloch(&p, *q), ZERO, 1e-9).map_err(|e| e.to_string())?;
            ensure(blocks == [2], format!("set {sets}: blocks {blocks:?}"))?;
            expected.push(*q);
            expected.push([-q[0], -q[1]]);
        }
        let opts = BzScanOptions {
            nx: 128,
            ny: 128,
            domain: ScanDomain::brillouin_zone(),
            ..Default::default()
        };
        let found = bz_scan(&kitaev_model(&p), &opts).map_err(|e| e.to_string())?;
        ensure(
            found.len() == expected.len(),
            format!("set {sets}: {} candidates for {} EPs", found.len(), expected.len()),
        )?;
        for e in &expected {
            let best = found
                .iter()
                .map(|c| {
                    let d = lattice_diff(c.q, *e);
                    d[0].abs().max(d[1].abs())
                })
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
            ensure(best <= 1e-4, format!("set {sets}: EP {e:?} missed by {best:e}"))?;
        }
        for c in &found {
            ensure(
                c.classification.kind == EpKind::EP2,
                format!("set {sets}: candidate kind {}", c.classification.kind),
            )?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, format!("took {secs:.1} s"))?;
    Ok(format!("20 sets, worst component error {worst:.1e}, {secs:.1} s"))
}

fn criterion_8() -> Outcome {
    let model = Model::from_id("ep3").map_err(|e| e.to_string())?;
    for (k, v) in [("b2", 1.0), ("bp1", 1.0), ("bp2", 2.0)] {
        ensure(model.get(k) == Some(Complex64::new(v, 0.0)), format!("default {k}"))?;
    }
    let h = assemble(&model.hamiltonian().unwrap(), model.q_star().unwrap()).map_err(|e| e.to_string())?;
    let e1 = [ZERO, ZERO, ONE, ZERO];
    let chain = jordan_chain(&h, ZERO, 3, Some(&e1), 1e-9).map_err(|e| e.to_string())?;
    let dirs = [[ONE, ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO, ONE]];
    let mut worst: f64 = 0.0;
    for (j, want) in dirs.iter().enumerate() {
        let got = normalized(&chain[j + 1]).ok_or("zero chain vector")?;
        // distance after optimal phase alignment
        let d = (2.0 - 2.0 * dot(want, &got).norm()).max(0.0).sqrt();
        worst = worst.max(d);
        ensure(d <= 1e-8, format!("e{} off by {d:e}", j + 2))?;
    }
    Ok(format!("ẽ2 ∝ (1,0,0,0), ẽ3 ∝ (0,0,0,1), deviation {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let b = ComplexMatrix::jordan_block(3, ZERO);
    let bp = ComplexMatrix::identity(3);
    ensure(
        check_ep2n(&b, &bp, 1e-9).map_err(|e| e.to_string())?,
        "J3(0), I: expected true",
    )?;
    let blocks = blocks_at(&assemble_blocks(&b, &bp), ZERO, 1e-9).map_err(|e| e.to_string())?;
    ensure(blocks == [6], format!("blocks {blocks:?}"))?;

    let mut invertible_b = b.clone();
    invertible_b.set_block(2, 0, &ComplexMatrix::diag(&[ONE]));
    let two_kernel_b = ComplexMatrix::from_rows(&[[ZERO, ONE, ZERO], [ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO]]);
    let singular_bp = ComplexMatrix::diag(&[ONE, ONE, ZERO]);
    for (name, bb, pp) in [
        ("dim ker B = 0", &invertible_b, &bp),
        ("dim ker B = 2", &two_kernel_b, &bp),
        ("dim ker B' = 1", &b, &singular_bp),
    ] {
        ensure(
            !check_ep2n(bb, pp, 1e-9).map_err(|e| e.to_string())?,
            format!("{name}: expected false"),
        )?;
    }
    Ok("true with block [6]; false for three single-condition perturbations".into())
}

fn run_cli(args: &[&str]) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_epkit"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn criterion_10() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut configs: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "conf"))
        .collect();
    configs.sort();
    ensure(!configs.is_empty(), "no shipped configs")?;
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = 0;
    let mut compare = |args: Vec<String>, label: String| -> Result<(), String> {
        let mut outputs = Vec::new();
        for round in 0..2 {
            let file = tmp.path().join(format!("out{round}"));
            let mut full = args.clone();
            full.push("--out".into());
            full.push(file.display().to_string());
            let refs: Vec<&str> = full.iter().map(String::as_str).collect();
            let (stdout, code) = run_cli(&refs)?;
            ensure(code == 0, format!("{label}: exit {code}"))?;
            outputs.push((std::fs::read(&file).map_err(|e| e.to_string())?, stdout));
        }
        ensure(outputs[0] == outputs[1], format!("{label}: outputs differ"))?;
        runs += 1;
        Ok(())
    };
    compare(vec!["models".into()], "models".into())?;
    for cfg in &configs {
        for cmd in ["classify", "path-scan", "fit", "bz-scan"] {
            let name = cfg.file_name().unwrap().to_string_lossy().to_string();
            compare(
                vec![cmd.into(), "--config".into(), cfg.display().to_string()],
                format!("{cmd} {name}"),
            )?;
            compare(
                vec![
                    cmd.into(),
                    "--json".into(),
                    "--config".into(),
                    cfg.display().to_string(),
                ],
                format!("{cmd} --json {name}"),
            )?;
        }
    }
    Ok(format!(
        "{runs} command lines byte-identical across two runs ({} configs)",
        configs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Table I taxonomy, exact instances", criterion_1),
        ("brute-force classifier equivalence (1000 pairs)", criterion_2),
        ("spectral pairing (200 random Hamiltonians)", criterion_3),
        ("dispersion exponents", criterion_4),
        ("coalescence verdicts", criterion_5),
        ("epsilon-limit families", criterion_6),
        ("Kitaev EP oracle (20 random sets)", criterion_7),
        ("EP3 chain vectors", criterion_8),
        ("EP_2N condition", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
