//! Phases on two bonds of the Kitaev model turn each Dirac point into a pair
//! of EP2s. A grid search over the Brillouin zone recovers them.

use epkit::analysis::{bz_scan, BzScanOptions};
use epkit::models::{kitaev_a, kitaev_ep_locations, kitaev_model, KitaevParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = KitaevParams::default();
    println!("closed form (zeros of A(q)):");
    for q in kitaev_ep_locations(&p)? {
        println!("  ({:+.10}, {:+.10})  |A| = {:.1e}", q[0], q[1], kitaev_a(&p, q).norm());
    }
    let opts = BzScanOptions {
        nx: 128,
        ny: 128,
        ..Default::default()
    };
    println!("grid search:");
    for c in bz_scan(&kitaev_model(&p), &opts)? {
        println!(
            "  ({:+.10}, {:+.10})  sigma_min {:.1e}  {} {:?}",
            c.q[0], c.q[1], c.sigma_min, c.classification.kind, c.classification.evidence.zero_energy_blocks
        );
    }
    Ok(())
}
