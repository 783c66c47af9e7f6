use super::group::{act_subspace, act_vector, GroupWord};
use super::{BundleError, TwistLevel};
use crate::chevalley::ChevalleyAlgebra;
use crate::exactlin::{Mat, QuotientSpace, Subspace, Vector};
use crate::parabolic::ParabolicDatum;

/// The spaces `[p,p]`, `u(p) = p^perp`, `[p,p]^perp` and the quotients
/// `a(p)`, `[p,p]^perp / u(p)` of an arbitrary parabolic `p`, computed from
/// `p` alone.
#[derive(Clone, Debug)]
pub struct TwistFrame {
    pub p: Subspace,
    pub p_derived: Subspace,
    pub u: Subspace,
    pub p_derived_perp: Subspace,
    pub a_p: QuotientSpace,
    pub twist: QuotientSpace,
}

impl TwistFrame {
    pub fn standard(pd: &ParabolicDatum) -> Self {
        TwistFrame {
            p: pd.p.clone(),
            p_derived: pd.p_derived.clone(),
            u: pd.u.clone(),
            p_derived_perp: pd.p_derived_perp.clone(),
            a_p: pd.a_p.clone(),
            twist: pd.twist_space.clone(),
        }
    }

    pub fn compute(alg: &ChevalleyAlgebra, p: &Subspace) -> Result<Self, BundleError> {
        let p_derived = alg.bracket_space(p, p)?;
        let gram = alg.killing_gram();
        let u = p.perp_wrt_form(gram)?;
        let p_derived_perp = p_derived.perp_wrt_form(gram)?;
        Ok(TwistFrame {
            a_p: QuotientSpace::new(p, &p_derived)?,
            twist: QuotientSpace::new(&p_derived_perp, &u)?,
            p: p.clone(),
            p_derived,
            u,
            p_derived_perp,
        })
    }

    /// Frame of `Ad_w(p_Γ)`, reusing the standard frame when `w` fixes `p_Γ`.
    pub fn transported(pd: &ParabolicDatum, w: &GroupWord) -> Result<Self, BundleError> {
        let p = act_subspace(pd.alg(), w, &pd.p);
        if p == pd.p {
            Ok(Self::standard(pd))
        } else {
            Self::compute(pd.alg(), &p)
        }
    }
}

/// Left arrow of the invariance square: `[x] ↦ [Ad_w x]`, from the twist
/// space of `p_Γ` to that of `Ad_w p_Γ`, in the respective section bases.
pub fn canonical_id(pd: &ParabolicDatum, w: &GroupWord, psi: &TwistLevel) -> Result<TwistLevel, BundleError> {
    let target = TwistFrame::transported(pd, w)?;
    canonical_id_into(pd, &target, w, psi)
}

pub fn canonical_id_into(
    pd: &ParabolicDatum,
    target: &TwistFrame,
    w: &GroupWord,
    psi: &TwistLevel,
) -> Result<TwistLevel, BundleError> {
    psi.check(pd)?;
    let x = pd.twist_space.lift(&psi.psi);
    let y = act_vector(pd.alg(), w, &x);
    let coords = target
        .twist
        .class_of(&y)
        .map_err(|_| BundleError::Transport("Ad_w [p,p]^perp escapes the target frame".into()))?;
    Ok(TwistLevel { psi: coords })
}

/// Both composites of the invariance square, evaluated on the section basis
/// of `a(Ad_w p_Γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarePaths {
    /// `[x] ↦ [Ad_w x] ↦ ⟨Ad_w x, ·⟩`.
    pub down_then_across: Vector,
    /// `[x] ↦ ⟨x, ·⟩ on a(p_Γ) ↦` its transport through `a(p_Γ) ≅ a(p')`.
    pub across_then_down: Vector,
}

impl SquarePaths {
    pub fn commutes(&self) -> bool {
        self.down_then_across == self.across_then_down
    }
}

pub fn invariance_square(
    pd: &ParabolicDatum,
    target: &TwistFrame,
    w: &GroupWord,
    psi: &TwistLevel,
) -> Result<SquarePaths, BundleError> {
    psi.check(pd)?;
    let alg = pd.alg();
    let x = pd.twist_space.lift(&psi.psi);

    // down: the transported class, re-lifted in the target frame
    let down = canonical_id_into(pd, target, w, psi)?;
    let x_prime = target.twist.lift(&down.psi);
    let down_then_across: Vector = target
        .a_p
        .section()
        .row_vectors()
        .map(|s| alg.killing_unchecked(&x_prime, s))
        .collect();

    // across: ξ_i = ⟨x, s_i⟩ on the section of a(p_Γ); then θ(ξ)([s'])
    // = ξ([Ad_{w^{-1}} s']) expanded in a(p_Γ) coordinates
    let xi: Vector = pd
        .a_p
        .section()
        .row_vectors()
        .map(|s| alg.killing_unchecked(&x, s))
        .collect();
    let w_inv = w.inverse();
    let mut pulled = Vec::new();
    for s in target.a_p.section().row_vectors() {
        let back = act_vector(alg, &w_inv, s);
        let c = pd
            .a_p
            .class_of(&back)
            .map_err(|_| BundleError::Transport("Ad_w^{-1} p' is not p_Γ".into()))?;
        pulled.push(c);
    }
    let m = Mat::from_rows(pd.a_p.dim(), &pulled)?;
    let across_then_down = m.apply(&xi);
    Ok(SquarePaths {
        down_then_across,
        across_then_down,
    })
}
