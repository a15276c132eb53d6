//! Concrete block Hamiltonians with known exceptional points.
//!
//! Continuum models are written around `q*` in terms of `δq = q − q*`. A
//! complex velocity `v = a + ib` stands for `v(θ)|δq| = a δq_x + i b δq_y`,
//! i.e. `v(θ) = a cos θ + i b sin θ`.

mod lattice;
mod local;

use num_complex::Complex64;

use crate::classify::EpKind;
use crate::cmatrix::LinalgError;
use crate::sublattice::{reduced_spectrum_blocks, BlockHamiltonian, Momentum, SublatticeError};

pub use lattice::{
    cartesian_to_reciprocal, kitaev_a, kitaev_bloch, kitaev_ep_locations, kitaev_model, reciprocal_basis,
    reciprocal_to_cartesian, yao_lee_ep3_model, yao_lee_ep4_model, yao_lee_q_star, KitaevParams, YaoLeeParams, R1, R2,
};
pub use local::{
    doublet_ep2_model, ep3_model, ep4_quartic_model, ep4_sqrt_model, DoubletEp2Params, Ep3Params, Ep4QuarticParams,
    Ep4SqrtParams,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("model '{model}' has no parameter '{key}'")]
    UnknownParameter { model: &'static str, key: String },
    #[error("parameter '{key}' must be real, got {value}")]
    NotReal { key: String, value: Complex64 },
    #[error("parameter constraint violated: {0}")]
    ParamViolation(String),
    #[error("gapped phase: the Kitaev couplings admit no exceptional points")]
    GappedPhase,
    #[error(transparent)]
    Sublattice(#[from] SublatticeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub doc: &'static str,
}

macro_rules! params {
    ($(#[$meta:meta])* $name:ident { $($field:ident : $kind:ident = $default:expr, $doc:literal;)* }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name {
            $(#[doc = $doc] pub $field: Complex64,)*
        }

        impl Default for $name {
            fn default() -> Self {
                $name { $($field: $default,)* }
            }
        }

        impl $name {
            pub const SPEC: &'static [$crate::models::ParamSpec] = &[
                $($crate::models::ParamSpec {
                    name: stringify!($field),
                    kind: $crate::models::ParamKind::$kind,
                    doc: $doc,
                },)*
            ];

            pub fn get(&self, key: &str) -> Option<Complex64> {
                match key {
                    $(stringify!($field) => Some(self.$field),)*
                    _ => None,
                }
            }

            /// Returns `false` for an unknown key.
            pub fn set(&mut self, key: &str, value: Complex64) -> bool {
                match key {
                    $(stringify!($field) => {
                        self.$field = value;
                        true
                    })*
                    _ => false,
                }
            }
        }
    };
}
pub(crate) use params;

pub(crate) fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub(crate) fn nonzero(name: &str, v: Complex64) -> Result<(), ModelError> {
    if v.norm() == 0.0 {
        Err(ModelError::ParamViolation(format!("{name} must be nonzero")))
    } else {
        Ok(())
    }
}

/// Catalog identifiers with one-line descriptions.
pub const CATALOG: &[(&str, &str)] = &[
    (
        "doublet-ep2",
        "B = v(θ)|δq| I, B' = i c I: a doublet of EP2s at zero energy",
    ),
    ("ep4-sqrt", "square-root EP4, E ~ |δq|^(1/2)"),
    ("ep4-quartic", "quartic-root EP4, E ~ |δq|^(1/4)"),
    ("ep3", "anisotropic mixed-type EP3 with an accidental zero mode"),
    ("kitaev", "non-Hermitian Kitaev honeycomb Bloch matrix (N = 1)"),
    ("yao-lee-ep4", "six-band Yao-Lee construction with an EP4"),
    ("yao-lee-ep3", "six-band Yao-Lee construction with a mixed-type EP3"),
];

/// A catalog model with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    DoubletEp2(DoubletEp2Params),
    Ep4Sqrt(Ep4SqrtParams),
    Ep4Quartic(Ep4QuarticParams),
    Ep3(Ep3Params),
    Kitaev(KitaevParams),
    YaoLeeEp4(YaoLeeParams),
    YaoLeeEp3(YaoLeeParams),
}

impl Model {
    /// The named model with default parameters.
    pub fn from_id(id: &str) -> Result<Model, ModelError> {
        Ok(match id {
            "doublet-ep2" => Model::DoubletEp2(Default::default()),
            "ep4-sqrt" => Model::Ep4Sqrt(Default::default()),
            "ep4-quartic" => Model::Ep4Quartic(Default::default()),
            "ep3" => Model::Ep3(Default::default()),
            "kitaev" => Model::Kitaev(Default::default()),
            "yao-lee-ep4" => Model::YaoLeeEp4(Default::default()),
            "yao-lee-ep3" => Model::YaoLeeEp3(Default::default()),
            other => return Err(ModelError::UnknownModel(other.to_string())),
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            Model::DoubletEp2(_) => "doublet-ep2",
            Model::Ep4Sqrt(_) => "ep4-sqrt",
            Model::Ep4Quartic(_) => "ep4-quartic",
            Model::Ep3(_) => "ep3",
            Model::Kitaev(_) => "kitaev",
            Model::YaoLeeEp4(_) => "yao-lee-ep4",
            Model::YaoLeeEp3(_) => "yao-lee-ep3",
        }
    }

    pub fn spec(&self) -> &'static [ParamSpec] {
        match self {
            Model::DoubletEp2(_) => DoubletEp2Params::SPEC,
            Model::Ep4Sqrt(_) => Ep4SqrtParams::SPEC,
            Model::Ep4Quartic(_) => Ep4QuarticParams::SPEC,
            Model::Ep3(_) => Ep3Params::SPEC,
            Model::Kitaev(_) => KitaevParams::SPEC,
            Model::YaoLeeEp4(_) | Model::YaoLeeEp3(_) => YaoLeeParams::SPEC,
        }
    }

    pub fn get(&self, key: &str) -> Option<Complex64> {
        match self {
            Model::DoubletEp2(p) => p.get(key),
            Model::Ep4Sqrt(p) => p.get(key),
            Model::Ep4Quartic(p) => p.get(key),
            Model::Ep3(p) => p.get(key),
            Model::Kitaev(p) => p.get(key),
            Model::YaoLeeEp4(p) | Model::YaoLeeEp3(p) => p.get(key),
        }
    }

    pub fn set(&mut self, key: &str, value: Complex64) -> Result<(), ModelError> {
        let id = self.id();
        let spec = self
            .spec()
            .iter()
            .find(|s| s.name == key)
            .ok_or_else(|| ModelError::UnknownParameter {
                model: id,
                key: key.to_string(),
            })?;
        if spec.kind == ParamKind::Real && value.im != 0.0 {
            return Err(ModelError::NotReal {
                key: key.to_string(),
                value,
            });
        }
        let known = match self {
            Model::DoubletEp2(p) => p.set(key, value),
            Model::Ep4Sqrt(p) => p.set(key, value),
            Model::Ep4Quartic(p) => p.set(key, value),
            Model::Ep3(p) => p.set(key, value),
            Model::Kitaev(p) => p.set(key, value),
            Model::YaoLeeEp4(p) | Model::YaoLeeEp3(p) => p.set(key, value),
        };
        debug_assert!(known);
        Ok(())
    }

    /// Current parameter values in declaration order.
    pub fn params(&self) -> Vec<(&'static str, Complex64)> {
        self.spec()
            .iter()
            .map(|s| (s.name, self.get(s.name).expect("spec lists known keys")))
            .collect()
    }

    pub fn hamiltonian(&self) -> Result<BlockHamiltonian, ModelError> {
        match self {
            Model::DoubletEp2(p) => doublet_ep2_model(p),
            Model::Ep4Sqrt(p) => ep4_sqrt_model(p),
            Model::Ep4Quartic(p) => ep4_quartic_model(p),
            Model::Ep3(p) => ep3_model(p),
            Model::Kitaev(p) => Ok(kitaev_model(p)),
            Model::YaoLeeEp4(p) => yao_lee_ep4_model(p),
            Model::YaoLeeEp3(p) => yao_lee_ep3_model(p),
        }
    }

    /// The exceptional point the model is built around. For the Kitaev model
    /// this is the first closed-form location.
    pub fn q_star(&self) -> Result<Momentum, ModelError> {
        match self {
            Model::DoubletEp2(p) => Ok([p.qx.re, p.qy.re]),
            Model::Ep4Sqrt(p) => Ok([p.qx.re, p.qy.re]),
            Model::Ep4Quartic(p) => Ok([p.qx.re, p.qy.re]),
            Model::Ep3(p) => Ok([p.qx.re, p.qy.re]),
            Model::Kitaev(p) => kitaev_ep_locations(p)?.first().copied().ok_or(ModelError::GappedPhase),
            Model::YaoLeeEp4(p) | Model::YaoLeeEp3(p) => Ok(yao_lee_q_star(p)),
        }
    }

    /// Kind the model is constructed to have at `q*`.
    pub fn expected_kind(&self) -> EpKind {
        match self {
            Model::DoubletEp2(_) => EpKind::DoubletEP2,
            Model::Ep4Sqrt(_) | Model::Ep4Quartic(_) | Model::YaoLeeEp4(_) => EpKind::EP4,
            Model::Ep3(_) | Model::YaoLeeEp3(_) => EpKind::EP3Mixed,
            Model::Kitaev(_) => EpKind::EP2,
        }
    }

    /// Zero-energy eigenvectors at `q*`, labelled `e1, e2, …`: first
    /// `(0, χ)` with `χ ∈ ker B`, then `(ψ, 0)` with `ψ ∈ ker B′`.
    pub fn targets(&self, tol: f64) -> Result<Vec<(String, Vec<Complex64>)>, ModelError> {
        self.targets_at(self.q_star()?, tol)
    }

    /// As [`Model::targets`] at an arbitrary momentum.
    pub fn targets_at(&self, q: Momentum, tol: f64) -> Result<Vec<(String, Vec<Complex64>)>, ModelError> {
        let bh = self.hamiltonian()?;
        let (b, bp) = bh.blocks(q)?;
        let states = reduced_spectrum_blocks(&b, &bp, tol)?;
        Ok(states
            .iter()
            .filter(|s| s.energy.norm() == 0.0)
            .enumerate()
            .map(|(i, s)| (format!("e{}", i + 1), s.vector()))
            .collect())
    }
}
