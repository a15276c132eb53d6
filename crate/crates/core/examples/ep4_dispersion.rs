//! Square-root and quartic-root EP4s: fitted dispersion exponents along
//! several rays.

use epkit::analysis::{log_radii, path_scan, scaling_exponent};
use epkit::models::Model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let radii = log_radii(1e-6, 1e-2, 12)?;
    for id in ["ep4-sqrt", "ep4-quartic"] {
        let model = Model::from_id(id)?;
        let bh = model.hamiltonian()?;
        for theta in [0.0, 0.7, std::f64::consts::FRAC_PI_2] {
            let scan = path_scan(&bh, model.q_star()?, theta, &radii)?;
            let exps: Vec<String> = (0..scan.branch_count())
                .map(|k| scaling_exponent(&scan, k).map(|f| format!("{:.4}", f.exponent)))
                .collect::<Result<_, _>>()?;
            println!("{id:12} theta={theta:.3}  exponents {}", exps.join(" "));
        }
    }
    Ok(())
}
