//! A single Jordan block of size 2N at zero energy for N = 3.

use epkit::classify::check_ep2n;
use epkit::cmatrix::{ComplexMatrix, ONE, ZERO};
use epkit::spectral::blocks_at;
use epkit::sublattice::assemble_blocks;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = ComplexMatrix::jordan_block(3, ZERO);
    let bp = ComplexMatrix::identity(3);
    println!(
        "B = J3(0), B' = I: ep2n {}, blocks {:?}",
        check_ep2n(&b, &bp, 1e-9)?,
        blocks_at(&assemble_blocks(&b, &bp), ZERO, 1e-9)?
    );

    let mut perturbed = b.clone();
    perturbed.set_block(2, 0, &ComplexMatrix::diag(&[ONE]));
    println!("B with a corner entry:  ep2n {}", check_ep2n(&perturbed, &bp, 1e-9)?);

    let singular = ComplexMatrix::diag(&[ONE, ONE, ZERO]);
    println!("B' singular:            ep2n {}", check_ep2n(&b, &singular, 1e-9)?);
    Ok(())
}
