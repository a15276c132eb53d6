use std::f64::consts::PI;

use num_complex::Complex64;

use super::{params, re, ModelError};
use crate::cmatrix::{ComplexMatrix, I, ZERO};
use crate::sublattice::{assemble_blocks, BlockHamiltonian, Momentum};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Triangular-lattice unit vectors.
pub const R1: Momentum = [1.0, 0.0];
pub const R2: Momentum = [0.5, SQRT3_2];

fn dot2(a: Momentum, b: Momentum) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn neg(q: Momentum) -> Momentum {
    [-q[0], -q[1]]
}

/// Reciprocal vectors `G_i` with `G_i · r_j = 2π δ_ij`.
pub fn reciprocal_basis() -> [Momentum; 2] {
    let s = 1.0 / (2.0 * SQRT3_2);
    [[2.0 * PI, -2.0 * PI * s], [0.0, 4.0 * PI * s]]
}

/// `q̃ = (q · r₁, q · r₂)`.
pub fn cartesian_to_reciprocal(q: Momentum) -> [f64; 2] {
    [dot2(q, R1), dot2(q, R2)]
}

/// Inverse of [`cartesian_to_reciprocal`].
pub fn reciprocal_to_cartesian(qt: [f64; 2]) -> Momentum {
    [qt[0], (qt[1] - 0.5 * qt[0]) / SQRT3_2]
}

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

params! {
    KitaevParams {
        j1: Real = re(1.0), "|J1|";
        j2: Real = re(1.0), "|J2|";
        j3: Real = re(1.0), "J3 (real)";
        phi1: Real = re(0.3), "phase of J1";
        phi2: Real = re(0.1), "phase of J2";
    }
}

/// `Ã(q) = 2(J₁ e^{iq·r₁} + J₂ e^{iq·r₂} + J₃)` with `J_k = |J_k| e^{iφ_k}`.
pub fn kitaev_a(p: &KitaevParams, q: Momentum) -> Complex64 {
    let t = cartesian_to_reciprocal(q);
    let j1 = Complex64::from_polar(p.j1.re, p.phi1.re + t[0]);
    let j2 = Complex64::from_polar(p.j2.re, p.phi2.re + t[1]);
    (j1 + j2 + p.j3.re) * 2.0
}

/// `H_K = [[0, iÃ(q)], [−iÃ(−q), 0]]`.
pub fn kitaev_bloch(p: &KitaevParams, q: Momentum) -> ComplexMatrix {
    assemble_blocks(
        &ComplexMatrix::diag(&[kitaev_a(p, q)]),
        &ComplexMatrix::diag(&[kitaev_a(p, neg(q))]),
    )
}

pub fn kitaev_model(p: &KitaevParams) -> BlockHamiltonian {
    let p1 = *p;
    let p2 = *p;
    BlockHamiltonian::from_fns(
        1,
        move |q| ComplexMatrix::diag(&[kitaev_a(&p1, q)]),
        move |q| ComplexMatrix::diag(&[kitaev_a(&p2, neg(q))]),
    )
}

/// Closed-form zeros of `Ã(q)` (Cartesian, reciprocal coordinates wrapped to
/// `[−π, π)`). `H_K` is also defective at the negated points, where `Ã(−q)`
/// vanishes instead.
pub fn kitaev_ep_locations(p: &KitaevParams) -> Result<Vec<Momentum>, ModelError> {
    let (a1, a2, j3) = (p.j1.re.abs(), p.j2.re.abs(), p.j3.re);
    if a1 == 0.0 || a2 == 0.0 || j3 == 0.0 {
        return Err(ModelError::GappedPhase);
    }
    let c1 = (a2 * a2 - a1 * a1 - j3 * j3) / (2.0 * a1 * j3);
    let c2 = (a1 * a1 - a2 * a2 - j3 * j3) / (2.0 * a2 * j3);
    const SLACK: f64 = 1e-12;
    if c1.abs() > 1.0 + SLACK || c2.abs() > 1.0 + SLACK {
        return Err(ModelError::GappedPhase);
    }
    let alpha1 = c1.clamp(-1.0, 1.0).acos();
    let alpha2 = c2.clamp(-1.0, 1.0).acos();
    Ok([(alpha1, -alpha2), (-alpha1, alpha2)]
        .iter()
        .map(|&(a, b)| reciprocal_to_cartesian([wrap(a - p.phi1.re), wrap(b - p.phi2.re)]))
        .collect())
}

params! {
    YaoLeeParams {
        jt: Real = re(1.0), "J~ (J2 = J3 = J~, J1 = J~ e^{i phi})";
        phi: Real = re(0.3), "phase of J1";
        z1: Complex = re(0.1), "coefficient of g(-q)";
        z2: Complex = re(0.0), "coefficient of h(q)";
        zp1: Complex = re(0.1), "coefficient of g(q) in the EP3 variant";
        zp2: Complex = re(0.0), "coefficient of h(-q) in the EP3 variant";
        j01: Real = re(1.0), "J1 of the spectator flavour";
        j02: Real = re(1.0), "J2 of the spectator flavour";
        j03: Real = re(2.5), "J3 of the spectator flavour";
    }
}

/// Zero of `Ã` for `J₁ = J̃e^{iφ}`, `J₂ = J₃ = J̃`: `q̃* = (2π/3 − φ, −2π/3)`.
pub fn yao_lee_q_star(p: &YaoLeeParams) -> Momentum {
    reciprocal_to_cartesian([2.0 * PI / 3.0 - p.phi.re, -2.0 * PI / 3.0])
}

#[derive(Clone, Copy)]
struct YaoLee {
    p: YaoLeeParams,
    qs: Momentum,
}

impl YaoLee {
    fn new(p: &YaoLeeParams) -> Result<Self, ModelError> {
        if p.jt.re <= 0.0 {
            return Err(ModelError::ParamViolation("jt must be positive".into()));
        }
        if p.phi.re == 0.0 {
            return Err(ModelError::ParamViolation("phi must be nonzero".into()));
        }
        Ok(YaoLee {
            p: *p,
            qs: yao_lee_q_star(p),
        })
    }

    fn a(&self, q: Momentum) -> Complex64 {
        let k = KitaevParams {
            j1: self.p.jt,
            j2: self.p.jt,
            j3: self.p.jt,
            phi1: self.p.phi,
            phi2: re(0.0),
        };
        kitaev_a(&k, q)
    }

    fn a0(&self, q: Momentum) -> Complex64 {
        let k = KitaevParams {
            j1: self.p.j01,
            j2: self.p.j02,
            j3: self.p.j03,
            phi1: re(0.0),
            phi2: re(0.0),
        };
        kitaev_a(&k, q)
    }

    /// Vanishes at `q*`.
    fn g(&self, q: Momentum) -> Complex64 {
        (I * (dot2(q, R1) + self.p.phi.re)).exp() + (I * dot2(self.qs, R2)).exp() + 1.0
    }

    /// Vanishes at `−q*`.
    fn h(&self, q: Momentum) -> Complex64 {
        (-I * (dot2(self.qs, R1) + self.p.phi.re)).exp() + (I * dot2(q, R2)).exp() + 1.0
    }

    fn a_prime(&self, q: Momentum) -> Complex64 {
        self.a(q) + self.h(neg(q)) * (2.0 * self.p.jt.re)
    }

    fn f1(&self, q: Momentum) -> Complex64 {
        self.p.z1 * self.g(neg(q)) + self.p.z2 * self.h(q)
    }

    fn ep4_block(&self, q: Momentum) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[self.a(q), self.f1(q)], [ZERO, self.a_prime(q)]])
    }

    fn ep3_block(&self, q: Momentum) -> ComplexMatrix {
        // Mirror about -q*_y so that the coupling vanishes at -q* as well.
        let mirrored = [q[0], -2.0 * self.qs[1] - q[1]];
        let f = self.f1(q) + self.f1(mirrored);
        let g = self.p.zp1 * self.g(q) + self.p.zp2 * self.h(neg(q));
        ComplexMatrix::from_rows(&[[self.a(q), f], [g, ZERO]])
    }

    fn full(&self, block: ComplexMatrix, q: Momentum) -> ComplexMatrix {
        ComplexMatrix::block_diag(&[block, ComplexMatrix::diag(&[self.a0(q)])])
    }
}

fn yao_lee_model(p: &YaoLeeParams, ep3: bool) -> Result<BlockHamiltonian, ModelError> {
    let m = YaoLee::new(p)?;
    let b = move |q: Momentum| {
        let block = if ep3 { m.ep3_block(q) } else { m.ep4_block(q) };
        m.full(block, q)
    };
    let bp = move |q: Momentum| {
        let block = if ep3 { m.ep3_block(neg(q)) } else { m.ep4_block(neg(q)) };
        m.full(block, neg(q)).transpose()
    };
    Ok(BlockHamiltonian::from_fns(3, b, bp))
}

/// Six-band model `B = diag(B₂(q), Ã₀(q))`, `B′(q) = B(−q)ᵀ`, with
/// `B₂ = [[Ã, z₁g(−q) + z₂h(q)], [0, Ã′]]` and `Ã′(q) = Ã(q) + 2J̃ h(−q)`.
pub fn yao_lee_ep4_model(p: &YaoLeeParams) -> Result<BlockHamiltonian, ModelError> {
    yao_lee_model(p, false)
}

/// As [`yao_lee_ep4_model`] with `B₂ = [[Ã, f₁(q) + f₁(q_x, −2q*_y − q_y)], [z′₁g(q) + z′₂h(−q), 0]]`.
pub fn yao_lee_ep3_model(p: &YaoLeeParams) -> Result<BlockHamiltonian, ModelError> {
    yao_lee_model(p, true)
}
