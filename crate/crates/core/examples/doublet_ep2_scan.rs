//! Doublet of EP2s: both zero modes survive at q*, each absorbing one pair
//! of branches.

use epkit::analysis::{coalescence_profile, log_radii, path_scan, scaling_exponent};
use epkit::models::Model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::from_id("doublet-ep2")?;
    let bh = model.hamiltonian()?;
    let targets = model.targets(1e-9)?;
    let scan = path_scan(&bh, model.q_star()?, 0.3, &log_radii(1e-6, 1e-2, 12)?)?;
    let prof = coalescence_profile(&scan, &targets)?;

    println!("radius        D2(u1,e1)   D2(u1,e2)   D2(u3,e1)   D2(u3,e2)");
    for (i, r) in prof.radii.iter().enumerate() {
        let d = &prof.distances;
        println!(
            "{r:.3e}   {:.3e}   {:.3e}   {:.3e}   {:.3e}",
            d[0][0][i], d[0][1][i], d[2][0][i], d[2][1][i]
        );
    }
    for k in 0..scan.branch_count() {
        let fit = scaling_exponent(&scan, k)?;
        println!(
            "branch {}: |E| ~ |dq|^{:.4}, e1 {:?}, e2 {:?}",
            k + 1,
            fit.exponent,
            prof.verdicts[k][0],
            prof.verdicts[k][1]
        );
    }
    Ok(())
}
