//! Point models of `U_C`, `g_C`, `B_C` and `T*B_C`, the adjoint-group action
//! on them, and the maps between them.

mod frame;
mod group;
mod points;

pub use frame::{canonical_id, canonical_id_into, invariance_square, SquarePaths, TwistFrame};
pub use group::{
    act_subspace, act_vector, all_roots, bracket_preservation_violation, killing_invariance_audit,
    killing_invariance_violation, random_torus, random_word, torus_character, GroupWord, Letter,
};
pub use points::{
    embed, fiber_dimension, in_derived_perp, make_bc_point, make_uc_point, mu_c, nu_g, nu_t, phi_c, pi_c,
    quotient_to_uc, sigma_c, BCPoint, FiberReport, GCPoint, TStarBCPoint, UCPoint, MEMBERSHIP_SAMPLES,
};

use thiserror::Error;

use crate::chevalley::ChevalleyError;
use crate::exactlin::{LinError, Vector};
use crate::parabolic::ParabolicDatum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("{0:?} is not a root")]
    NotARoot(Vec<i64>),
    #[error("torus letter needs {expected} parameters, got {actual}")]
    TorusArity { expected: usize, actual: usize },
    #[error("torus parameters must be nonzero")]
    ZeroTorusParameter,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("transport failed: {0}")]
    Transport(String),
    #[error("hypothesis not satisfied for this Γ ({0})")]
    HypothesisNotSatisfied(String),
    #[error("twist level has length {actual}, expected {expected}")]
    TwistLength { expected: usize, actual: usize },
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
}

/// A point `ψ` of `T_C^* = [p_Γ,p_Γ]^perp / u(p_Γ)` in section coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistLevel {
    pub psi: Vector,
}

impl TwistLevel {
    pub fn zero(pd: &ParabolicDatum) -> Self {
        TwistLevel {
            psi: crate::exactlin::zero_vec(pd.torus_rank),
        }
    }

    pub(crate) fn check(&self, pd: &ParabolicDatum) -> Result<(), BundleError> {
        if self.psi.len() != pd.twist_space.dim() {
            return Err(BundleError::TwistLength {
                expected: pd.twist_space.dim(),
                actual: self.psi.len(),
            });
        }
        Ok(())
    }
}
