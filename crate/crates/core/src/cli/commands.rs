use std::fs::File;
use std::io::{self, BufWriter, Write};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::config::RunConfig;
use super::{CliError, OutputArgs};
use crate::analysis::{
    bz_scan as run_bz_scan, coalescence_profile_with, path_scan_with, scaling_exponent, AnalysisError, BzScanOptions,
    PathScan,
};
use crate::classify::{classify as run_classify, EpKind, Evidence};
use crate::models::{Model, ParamKind, CATALOG};
use crate::sublattice::Momentum;

const MAX_SKIPPED: f64 = 0.25;

fn sink(out: &OutputArgs) -> Result<Box<dyn Write>, CliError> {
    Ok(match &out.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Results that accompany a file written with `--out` go to stdout,
/// otherwise to stderr so they do not mix with the table.
fn note(out: &OutputArgs, line: &str) {
    if out.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn blocks(b: &[usize]) -> String {
    let inner: Vec<String> = b.iter().map(usize::to_string).collect();
    format!("[{}]", inner.join(","))
}

fn opt(b: Option<bool>) -> String {
    b.map_or("n/a".into(), |v| v.to_string())
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    model: &'a str,
    q: Momentum,
    kind: EpKind,
    blocks: &'a [usize],
    evidence: &'a Evidence,
}

pub fn classify(cfg: &RunConfig, out: &OutputArgs) -> Result<(), CliError> {
    let q = cfg.q_or_star()?;
    let bh = cfg.model.hamiltonian()?;
    let (b, bp) = bh.blocks(q)?;
    let res = run_classify(&b, &bp, cfg.tol)?;
    let ev = &res.evidence;
    let mut w = sink(out)?;
    if out.json {
        let report = ClassifyReport {
            model: cfg.model.id(),
            q,
            kind: res.kind,
            blocks: &ev.zero_energy_blocks,
            evidence: ev,
        };
        serde_json::to_writer(&mut w, &report)?;
        writeln!(w)?;
    } else {
        writeln!(w, "model: {}", cfg.model.id())?;
        writeln!(w, "q: ({}, {})", q[0], q[1])?;
        writeln!(w, "{}, blocks {}", res.kind, blocks(&ev.zero_energy_blocks))?;
        writeln!(w, "flavours: {}", ev.flavours)?;
        writeln!(w, "rank B: {}, rank B': {}", ev.rank_b, ev.rank_bprime)?;
        writeln!(w, "dim ker B: {}, dim ker B': {}", ev.dim_ker_b, ev.dim_ker_bprime)?;
        writeln!(w, "B = 0: {}, B' = 0: {}", ev.b_is_zero, ev.bprime_is_zero)?;
        writeln!(w, "B scalar: {}, B' scalar: {}", ev.b_is_scalar, ev.bprime_is_scalar)?;
        writeln!(w, "ker(BB') = im(BB'): {}", opt(ev.ker_bbp_equals_im_bbp))?;
        writeln!(w, "im B' = ker B: {}", opt(ev.im_bprime_equals_ker_b))?;
        writeln!(w, "im B = ker B': {}", opt(ev.im_b_equals_ker_bprime))?;
        for eb in &ev.nonzero_energy_blocks {
            writeln!(w, "E = {}: blocks {}", complex(eb.energy), blocks(&eb.blocks))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn scans(cfg: &RunConfig) -> Result<(Momentum, Vec<PathScan>), CliError> {
    let q = cfg.q_or_star()?;
    let bh = cfg.model.hamiltonian()?;
    let mut out = Vec::with_capacity(cfg.thetas.len());
    for &theta in &cfg.thetas {
        out.push(path_scan_with(&bh, q, theta, &cfg.radii, cfg.zero_tol)?);
    }
    Ok((q, out))
}

fn check_degradation(scans: &[PathScan]) -> Result<(), CliError> {
    for s in scans {
        if s.skipped_fraction() > MAX_SKIPPED {
            return Err(CliError::Degraded(format!(
                "theta = {}: {} of {} radii skipped",
                s.theta,
                s.skipped.len(),
                s.skipped.len() + s.radii.len()
            )));
        }
    }
    Ok(())
}

enum Table {
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Json(Box<dyn Write>),
}

pub fn path_scan(cfg: &RunConfig, out: &OutputArgs) -> Result<(), CliError> {
    let (q, scans) = scans(cfg)?;
    let targets = cfg.model.targets_at(q, cfg.tol)?;
    let labels: Vec<&str> = targets.iter().map(|(l, _)| l.as_str()).collect();
    let mut table = if out.json {
        Table::Json(sink(out)?)
    } else {
        let mut t = csv::Writer::from_writer(sink(out)?);
        let mut header = vec![
            "radius".to_string(),
            "theta".into(),
            "branch".into(),
            "re_E".into(),
            "im_E".into(),
        ];
        header.extend(labels.iter().map(|l| format!("d2_{l}")));
        t.write_record(&header)?;
        Table::Csv(Box::new(t))
    };
    let mut summary = Vec::new();
    for scan in &scans {
        let prof = coalescence_profile_with(scan, &targets, cfg.thresholds)?;
        for (i, (&radius, row)) in scan.radii.iter().zip(&scan.branches).enumerate() {
            for (k, point) in row.iter().enumerate() {
                let d: Vec<f64> = (0..labels.len()).map(|t| prof.distances[k][t][i]).collect();
                match &mut table {
                    Table::Csv(t) => {
                        let mut rec = vec![
                            num(radius),
                            num(scan.theta),
                            (k + 1).to_string(),
                            num(point.energy.re),
                            num(point.energy.im),
                        ];
                        rec.extend(d.iter().map(|&x| num(x)));
                        t.write_record(&rec)?;
                    }
                    Table::Json(w) => {
                        let d2: serde_json::Map<String, serde_json::Value> =
                            labels.iter().zip(&d).map(|(l, &x)| (l.to_string(), json!(x))).collect();
                        let line = json!({
                            "radius": radius,
                            "theta": scan.theta,
                            "branch": k + 1,
                            "re_E": point.energy.re,
                            "im_E": point.energy.im,
                            "d2": d2,
                        });
                        serde_json::to_writer(&mut *w, &line)?;
                        writeln!(w)?;
                    }
                }
            }
        }
        for k in 0..scan.branch_count() {
            let parts: Vec<String> = labels
                .iter()
                .enumerate()
                .map(|(t, l)| format!("{l} {:?}", prof.verdicts[k][t]))
                .collect();
            summary.push(format!("theta={} branch {}: {}", scan.theta, k + 1, parts.join(", ")));
        }
        if !scan.skipped.is_empty() {
            summary.push(format!("theta={}: skipped {} radii", scan.theta, scan.skipped.len()));
        }
        for sw in &scan.switches {
            summary.push(format!(
                "theta={}: branch {} overlap {:.3} at radius {:e}",
                scan.theta,
                sw.branch + 1,
                sw.overlap,
                sw.radius
            ));
        }
    }
    match table {
        Table::Csv(mut t) => t.flush()?,
        Table::Json(mut w) => w.flush()?,
    }
    for line in &summary {
        note(out, line);
    }
    check_degradation(&scans)
}

pub fn fit(cfg: &RunConfig, out: &OutputArgs) -> Result<(), CliError> {
    let (_, scans) = scans(cfg)?;
    let mut rows = Vec::new();
    for scan in &scans {
        for k in 0..scan.branch_count() {
            rows.push((scan.theta, k, scaling_exponent(scan, k)));
        }
    }
    let stdout = io::stdout();
    let mut so = stdout.lock();
    for (theta, k, fit) in &rows {
        match (fit, out.json) {
            (Ok(f), false) => writeln!(
                so,
                "theta={theta} branch {}: exponent {:.6} R^2 {:.6}",
                k + 1,
                f.exponent,
                f.r_squared
            )?,
            (Err(_), false) => writeln!(so, "theta={theta} branch {}: noise floor reached", k + 1)?,
            (Ok(f), true) => writeln!(
                so,
                "{}",
                json!({"theta": theta, "branch": k + 1, "exponent": f.exponent, "r_squared": f.r_squared, "points": f.points})
            )?,
            (Err(_), true) => writeln!(so, "{}", json!({"theta": theta, "branch": k + 1, "exponent": null}))?,
        }
    }
    so.flush()?;
    if let Some(path) = &out.out {
        let mut t = csv::Writer::from_path(path)?;
        t.write_record(["theta", "branch", "exponent", "r_squared", "points"])?;
        for (theta, k, fit) in &rows {
            let (p, r2, n) = match fit {
                Ok(f) => (num(f.exponent), num(f.r_squared), f.points.to_string()),
                Err(AnalysisError::NoiseFloorReached { .. }) => ("nan".into(), "nan".into(), "0".into()),
                Err(e) => return Err(CliError::Failed(e.to_string())),
            };
            t.write_record([num(*theta), (k + 1).to_string(), p, r2, n])?;
        }
        t.flush()?;
    }
    check_degradation(&scans)
}

pub fn bz_scan(cfg: &RunConfig, out: &OutputArgs) -> Result<(), CliError> {
    let bh = cfg.model.hamiltonian()?;
    let opts = BzScanOptions {
        nx: cfg.grid.0,
        ny: cfg.grid.1,
        domain: cfg.domain,
        tol: cfg.bz_tol,
        classify_tol: cfg.bz_classify_tol,
    };
    let found = run_bz_scan(&bh, &opts)?;
    let mut w = sink(out)?;
    if out.json {
        for c in &found {
            let line = json!({
                "qx": c.q[0],
                "qy": c.q[1],
                "sigma_min": c.sigma_min,
                "kind": c.classification.kind,
                "blocks": c.classification.evidence.zero_energy_blocks,
            });
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
    } else {
        let mut t = csv::Writer::from_writer(&mut w);
        t.write_record(["qx", "qy", "sigma_min", "kind"])?;
        for c in &found {
            t.write_record([
                num(c.q[0]),
                num(c.q[1]),
                num(c.sigma_min),
                c.classification.kind.to_string(),
            ])?;
        }
        t.flush()?;
    }
    w.flush()?;
    note(out, &format!("{} candidate(s)", found.len()));
    Ok(())
}

pub fn models(out: &OutputArgs) -> Result<(), CliError> {
    let mut w = sink(out)?;
    for (id, desc) in CATALOG {
        let m = Model::from_id(id)?;
        if out.json {
            let params: Vec<serde_json::Value> = m
                .spec()
                .iter()
                .map(|p| {
                    let d = m.get(p.name).unwrap_or_default();
                    json!({
                        "name": p.name,
                        "kind": if p.kind == ParamKind::Real { "real" } else { "complex" },
                        "default": complex(d),
                        "doc": p.doc,
                    })
                })
                .collect();
            serde_json::to_writer(&mut w, &json!({"id": id, "description": desc, "params": params}))?;
            writeln!(w)?;
        } else {
            writeln!(w, "{id}: {desc}")?;
            for p in m.spec() {
                let kind = if p.kind == ParamKind::Real { "real" } else { "complex" };
                writeln!(
                    w,
                    "    {} ({kind}, default {}): {}",
                    p.name,
                    complex(m.get(p.name).unwrap_or_default()),
                    p.doc
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
