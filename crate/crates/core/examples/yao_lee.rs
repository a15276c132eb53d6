//! Six-band constructions: flavour mixing on top of a Kitaev EP gives an EP4
//! or an EP3 at q*, while the third flavour stays gapped.

use epkit::classify::classify;
use epkit::cmatrix::eig;
use epkit::models::{yao_lee_ep3_model, yao_lee_ep4_model, yao_lee_q_star, YaoLeeParams};
use epkit::sublattice::{assemble, symmetry_residual};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = YaoLeeParams::default();
    let q = yao_lee_q_star(&p);
    println!("q* = ({:.6}, {:.6})", q[0], q[1]);
    for (name, bh) in [
        ("EP4 variant", yao_lee_ep4_model(&p)?),
        ("EP3 variant", yao_lee_ep3_model(&p)?),
    ] {
        let (b, bp) = bh.blocks(q)?;
        let out = classify(&b, &bp, 1e-9)?;
        let h = assemble(&bh, q)?;
        let mut mags: Vec<f64> = eig(&h)?.iter().map(|e| e.value.norm()).collect();
        mags.sort_by(f64::total_cmp);
        println!(
            "{name}: {} blocks {:?}, symmetry residual {:e}, |E| = {:.3?}",
            out.kind,
            out.evidence.zero_energy_blocks,
            symmetry_residual(&h)?,
            mags
        );
    }
    Ok(())
}
