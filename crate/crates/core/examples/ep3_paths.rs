//! The anisotropic EP3: along q_x every eigenvector falls onto e1, along q_y
//! only the square-root pair does.

use std::f64::consts::FRAC_PI_2;

use epkit::analysis::{coalescence_profile, log_radii, path_scan, scaling_exponent};
use epkit::models::Model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::from_id("ep3")?;
    let bh = model.hamiltonian()?;
    let targets = model.targets(1e-9)?;
    let radii = log_radii(1e-6, 1e-2, 12)?;
    for (name, theta) in [("path 1", 0.0), ("path 2", FRAC_PI_2)] {
        let scan = path_scan(&bh, model.q_star()?, theta, &radii)?;
        let prof = coalescence_profile(&scan, &targets)?;
        println!("{name} (theta = {theta:.4})");
        for k in 0..scan.branch_count() {
            let fit = scaling_exponent(&scan, k)?;
            let last = prof.radii.len() - 1;
            println!(
                "  u{}: exponent {:.3}  D2(e1) {:.2e} {:?}  D2(e2) {:.2e} {:?}",
                k + 1,
                fit.exponent,
                prof.distances[k][0][last],
                prof.verdicts[k][0],
                prof.distances[k][1][last],
                prof.verdicts[k][1]
            );
        }
    }
    Ok(())
}
