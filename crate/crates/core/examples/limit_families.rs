//! Two one-parameter families that reach diag(J3(0), 0): one through EP2
//! matrices, one through EP4 matrices.

use epkit::classify::{mixed_limit_family, LimitFamily};
use epkit::spectral::ep_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for family in [LimitFamily::ViaEP2, LimitFamily::ViaEP4] {
        for eps in [1e-1, 1e-2, 1e-3, 0.0] {
            let h = mixed_limit_family(family, eps);
            let report = ep_report(&h, 1e-9)?;
            let parts: Vec<String> = report
                .clusters
                .iter()
                .map(|c| format!("E={:.1e}: {:?}", c.cluster.center.re, c.structure.block_sizes))
                .collect();
            println!("{family:?} eps={eps:.0e}  {}  ({:?})", parts.join("  "), report.flag);
        }
    }
    Ok(())
}
