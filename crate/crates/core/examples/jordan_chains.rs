//! Jordan structure and chain vectors of the EP3 Hamiltonian at q*.

use epkit::cmatrix::{fix_phase, normalized, ComplexMatrix, ZERO};
use epkit::models::Model;
use epkit::spectral::{chain_residual, ep_report, jordan_chain, jordan_structure};
use epkit::sublattice::assemble;

fn show(label: &str, v: &[num_complex::Complex64]) {
    let mut v = normalized(v).unwrap_or_else(|| v.to_vec());
    fix_phase(&mut v);
    let parts: Vec<String> = v.iter().map(|z| format!("{:+.3}{:+.3}i", z.re, z.im)).collect();
    println!("  {label}: ({})", parts.join(", "));
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::from_id("ep3")?;
    let h: ComplexMatrix = assemble(&model.hamiltonian()?, model.q_star()?)?;
    let js = jordan_structure(&h, ZERO, 1e-9)?;
    println!("blocks {:?}, rank sequence {:?}", js.block_sizes, js.rank_sequence);

    let e1 = &model.targets(1e-9)?[0].1;
    let chain = jordan_chain(&h, ZERO, 3, Some(e1), 1e-9)?;
    println!("chain from e1 (residual {:.1e}):", chain_residual(&h, ZERO, &chain));
    for (j, v) in chain.iter().enumerate() {
        show(&format!("e{}", j + 1), v);
    }
    println!("flag: {:?}", ep_report(&h, 1e-9)?.flag);
    Ok(())
}
