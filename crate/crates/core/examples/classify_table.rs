//! Zero-energy taxonomy of 2x2 block pairs, with the Jordan blocks of the
//! assembled 4x4 Hamiltonian next to each verdict.

use epkit::classify::classify_zero_energy;
use epkit::cmatrix::ComplexMatrix;
use epkit::spectral::rank_sequence;
use epkit::sublattice::assemble_blocks;
use num_complex::Complex64;

fn m(rows: [[f64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&rows)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        (
            "B = 0, B' = 2I",
            m([[0.0, 0.0], [0.0, 0.0]]),
            m([[2.0, 0.0], [0.0, 2.0]]),
        ),
        (
            "rank-one B, invertible B'",
            m([[0.0, 0.0], [0.0, 1.0]]),
            m([[1.0, 2.0], [3.0, 0.0]]),
        ),
        (
            "im B' = ker B",
            m([[0.0, 1.0], [0.0, 0.0]]),
            m([[1.0, 2.0], [0.0, 0.0]]),
        ),
        (
            "both invertible",
            m([[1.0, 0.5], [0.0, 1.0]]),
            m([[2.0, 0.0], [1.0, 1.0]]),
        ),
        (
            "nilpotent B, singular B'",
            m([[0.0, 1.0], [0.0, 0.0]]),
            m([[0.0, 1.0], [0.0, 0.0]]),
        ),
    ];
    for (name, b, bp) in cases {
        let out = classify_zero_energy(&b, &bp, 1e-9)?;
        let ranks = rank_sequence(&assemble_blocks(&b, &bp), Complex64::new(0.0, 0.0), 1e-9)?;
        println!(
            "{name:28} -> {:14} blocks {:?}  ranks of H^k {:?}",
            out.kind.to_string(),
            out.evidence.zero_energy_blocks,
            ranks
        );
    }
    Ok(())
}
