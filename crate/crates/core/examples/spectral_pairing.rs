//! Eigenstates from the reduced N x N problem, checked against the full
//! 2N x 2N Hamiltonian.

use epkit::cmatrix::{eig, vec_norm};
use epkit::models::Model;
use epkit::sublattice::{assemble, reduced_spectrum};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::from_id("yao-lee-ep3")?;
    let bh = model.hamiltonian()?;
    let q = [0.4, -1.1];
    let h = assemble(&bh, q)?;
    for s in reduced_spectrum(&bh, q, 1e-12)? {
        let v = s.vector();
        let hv = h.matvec(&v);
        let res: Vec<_> = hv.iter().zip(&v).map(|(a, b)| a - s.energy * b).collect();
        println!(
            "E = {:+.6}{:+.6}i   residual {:.1e}",
            s.energy.re,
            s.energy.im,
            vec_norm(&res)
        );
    }
    let mut full: Vec<_> = eig(&h)?.iter().map(|p| p.value).collect();
    full.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    println!("full eig: {:.6?}", full);
    Ok(())
}
