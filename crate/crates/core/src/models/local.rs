use num_complex::Complex64;

use super::{cx, nonzero, params, re, ModelError};
use crate::cmatrix::{ComplexMatrix, I, ZERO};
use crate::sublattice::{BlockHamiltonian, Momentum};

/// `v(θ)|δq|` for the encoded velocity `v = a + ib`.
fn vel(v: Complex64, d: Momentum) -> Complex64 {
    Complex64::new(v.re * d[0], v.im * d[1])
}

fn delta(q: Momentum, qx: Complex64, qy: Complex64) -> Momentum {
    [q[0] - qx.re, q[1] - qy.re]
}

params! {
    DoubletEp2Params {
        vx: Real = re(1.0), "velocity along q_x";
        vy: Real = re(0.5), "velocity along q_y";
        c: Complex = re(1.0), "lower-left block is c·I";
        qx: Real = re(0.0), "EP position, x";
        qy: Real = re(0.0), "EP position, y";
    }
}

params! {
    Ep4SqrtParams {
        b2: Complex = re(1.0), "B upper-right constant";
        bp1: Complex = re(1.0), "B' upper-left constant";
        bp4: Complex = re(2.0), "B' lower-right constant";
        v1: Complex = cx(1.0, 0.5), "encoded velocity of B_11";
        v4: Complex = cx(0.7, 0.3), "encoded velocity of B_22";
        vp3: Complex = cx(0.9, 0.6), "encoded velocity of B'_21";
        qx: Real = re(0.0), "EP position, x";
        qy: Real = re(0.0), "EP position, y";
    }
}

params! {
    Ep4QuarticParams {
        b2: Complex = re(1.0), "B upper-right constant";
        bp1: Complex = re(1.0), "B' upper-left constant";
        bp4: Complex = re(2.0), "B' lower-right constant";
        v3: Complex = cx(1.0, 0.5), "encoded velocity of B_21";
        qx: Real = re(0.0), "EP position, x";
        qy: Real = re(0.0), "EP position, y";
    }
}

params! {
    Ep3Params {
        b2: Complex = re(1.0), "B upper-right constant";
        bp1: Complex = re(1.0), "B' upper-left constant";
        bp2: Complex = re(2.0), "B' upper-right constant";
        v1: Complex = cx(1.0, 1.0), "encoded velocity of B_11";
        v3: Complex = cx(0.5, 0.7), "encoded velocity of B_21";
        v4: Complex = cx(0.3, 0.4), "encoded velocity of B_22";
        vp3: Complex = re(0.8), "linear coefficient of B'_21 (times δq_x)";
        vp4: Complex = re(0.6), "linear coefficient of B'_22 (times δq_x)";
        rp3: Complex = re(1.0), "quadratic coefficient of B'_21 (times δq_y²)";
        rp4: Complex = re(0.5), "quadratic coefficient of B'_22 (times δq_y²)";
        qx: Real = re(0.0), "EP position, x";
        qy: Real = re(0.0), "EP position, y";
    }
}

/// `B = v(θ)|δq| I₂`, `B′ = (c / −i) I₂`, so the lower-left block of `H` is `c I₂`.
pub fn doublet_ep2_model(p: &DoubletEp2Params) -> Result<BlockHamiltonian, ModelError> {
    nonzero("c", p.c)?;
    if p.vx.re == 0.0 && p.vy.re == 0.0 {
        return Err(ModelError::ParamViolation("(vx, vy) must not both vanish".into()));
    }
    let p = *p;
    let v = cx(p.vx.re, p.vy.re);
    let bp = ComplexMatrix::identity(2).scale(p.c / (-I));
    Ok(BlockHamiltonian::from_fns(
        2,
        move |q| {
            let d = delta(q, p.qx, p.qy);
            ComplexMatrix::identity(2).scale(vel(v, d))
        },
        move |_| bp.clone(),
    ))
}

/// `B = [[v₁δ, b₂], [0, v₄δ]]`, `B′ = [[b′₁, 0], [v′₃δ, b′₄]]`.
pub fn ep4_sqrt_model(p: &Ep4SqrtParams) -> Result<BlockHamiltonian, ModelError> {
    nonzero("b2", p.b2)?;
    nonzero("bp1", p.bp1)?;
    nonzero("bp4", p.bp4)?;
    let p = *p;
    Ok(BlockHamiltonian::from_fns(
        2,
        move |q| {
            let d = delta(q, p.qx, p.qy);
            ComplexMatrix::from_rows(&[[vel(p.v1, d), p.b2], [ZERO, vel(p.v4, d)]])
        },
        move |q| {
            let d = delta(q, p.qx, p.qy);
            ComplexMatrix::from_rows(&[[p.bp1, ZERO], [vel(p.vp3, d), p.bp4]])
        },
    ))
}

/// `B = [[0, b₂], [v₃δ, 0]]`, `B′ = diag(b′₁, b′₄)`.
pub fn ep4_quartic_model(p: &Ep4QuarticParams) -> Result<BlockHamiltonian, ModelError> {
    nonzero("b2", p.b2)?;
    nonzero("bp1", p.bp1)?;
    nonzero("bp4", p.bp4)?;
    nonzero("v3", p.v3)?;
    let p = *p;
    let bp = ComplexMatrix::diag(&[p.bp1, p.bp4]);
    Ok(BlockHamiltonian::from_fns(
        2,
        move |q| {
            let d = delta(q, p.qx, p.qy);
            ComplexMatrix::from_rows(&[[ZERO, p.b2], [vel(p.v3, d), ZERO]])
        },
        move |_| bp.clone(),
    ))
}

/// `B = [[v₁δ, b₂], [v₃δ, v₄δ]]`, `B′ = [[b′₁, b′₂], [w₃, w₄]]` with
/// `w_j = v′_j δq_x + r′_j δq_y²` (linear along `θ = 0`, quadratic along
/// `θ = π/2`).
pub fn ep3_model(p: &Ep3Params) -> Result<BlockHamiltonian, ModelError> {
    nonzero("b2", p.b2)?;
    nonzero("bp1", p.bp1)?;
    let p = *p;
    Ok(BlockHamiltonian::from_fns(
        2,
        move |q| {
            let d = delta(q, p.qx, p.qy);
            ComplexMatrix::from_rows(&[[vel(p.v1, d), p.b2], [vel(p.v3, d), vel(p.v4, d)]])
        },
        move |q| {
            let d = delta(q, p.qx, p.qy);
            let w3 = p.vp3 * d[0] + p.rp3 * (d[1] * d[1]);
            let w4 = p.vp4 * d[0] + p.rp4 * (d[1] * d[1]);
            ComplexMatrix::from_rows(&[[p.bp1, p.bp2], [w3, w4]])
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_zero_energy, EpKind};
    use crate::cmatrix::eig;
    use crate::sublattice::assemble;

    #[test]
    fn doublet_eigenvalues_at_small_radius() {
        let bh = doublet_ep2_model(&DoubletEp2Params::default()).unwrap();
        let h = assemble(&bh, [1e-4, 0.0]).unwrap();
        // E² = i c v δq
        let e0 = (I * 1e-4).sqrt();
        let vals = eig(&h).unwrap();
        let plus = vals.iter().filter(|p| (p.value - e0).norm() < 1e-9).count();
        let minus = vals.iter().filter(|p| (p.value + e0).norm() < 1e-9).count();
        assert_eq!((plus, minus), (2, 2));
    }

    #[test]
    fn kinds_at_the_origin() {
        let cases: Vec<(BlockHamiltonian, EpKind)> = vec![
            (doublet_ep2_model(&Default::default()).unwrap(), EpKind::DoubletEP2),
            (ep4_sqrt_model(&Default::default()).unwrap(), EpKind::EP4),
            (ep4_quartic_model(&Default::default()).unwrap(), EpKind::EP4),
            (ep3_model(&Default::default()).unwrap(), EpKind::EP3Mixed),
        ];
        for (bh, kind) in cases {
            let (b, bp) = bh.blocks([0.0, 0.0]).unwrap();
            assert_eq!(classify_zero_energy(&b, &bp, 1e-9).unwrap().kind, kind);
        }
    }

    #[test]
    fn violations() {
        let p = DoubletEp2Params {
            c: ZERO,
            ..Default::default()
        };
        assert!(matches!(doublet_ep2_model(&p), Err(ModelError::ParamViolation(_))));
        let p = Ep4QuarticParams {
            v3: ZERO,
            ..Default::default()
        };
        assert!(matches!(ep4_quartic_model(&p), Err(ModelError::ParamViolation(_))));
    }

    #[test]
    fn shifted_q_star() {
        let p = Ep4SqrtParams {
            qx: re(0.3),
            qy: re(0.7),
            ..Default::default()
        };
        let bh = ep4_sqrt_model(&p).unwrap();
        let (b, bp) = bh.blocks([0.3, 0.7]).unwrap();
        assert_eq!(classify_zero_energy(&b, &bp, 1e-9).unwrap().kind, EpKind::EP4);
    }
}
