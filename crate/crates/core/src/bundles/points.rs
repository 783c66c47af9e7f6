use rand::Rng;

use super::frame::TwistFrame;
use super::group::{act_subspace, act_vector, GroupWord, Letter};
use super::{BundleError, TwistLevel};
use crate::chevalley::ChevalleyAlgebra;
use crate::exactlin::{dot, int, neg, Mat, Scalar, Subspace, Vector};
use crate::parabolic::{ParabolicDatum, RichardsonCertificate};

/// `x ∈ [p,p]^perp`, tested as `κ([x, a], b) = 0` for basis vectors `a, b`
/// of `p` (equal to `κ(x, [a, b])` by invariance), without forming `[p,p]`.
pub fn in_derived_perp(alg: &ChevalleyAlgebra, p: &Subspace, x: &[Scalar]) -> bool {
    let gram = alg.killing_gram();
    let dual: Vec<Vector> = p.basis_vectors().map(|b| gram.apply(b)).collect();
    p.basis_vectors().all(|a| {
        let z = alg.bracket_unchecked(x, a);
        dual.iter().all(|gb| dot(&z, gb) == int(0))
    })
}

/// A point `(p, x)` of `U_C`: `p` in the class of `p_Γ`, `x ∈ [p,p]^perp`.
/// `witness` maps `p_Γ` onto `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UCPoint {
    p: Subspace,
    witness: GroupWord,
    x: Vector,
}

impl UCPoint {
    pub fn new(alg: &ChevalleyAlgebra, p: Subspace, witness: GroupWord, x: Vector) -> Result<Self, BundleError> {
        if !in_derived_perp(alg, &p, &x) {
            return Err(BundleError::Invariant("x ∉ [p,p]^perp".into()));
        }
        Ok(UCPoint { p, witness, x })
    }

    pub fn p(&self) -> &Subspace {
        &self.p
    }

    pub fn witness(&self) -> &GroupWord {
        &self.witness
    }

    pub fn x(&self) -> &[Scalar] {
        &self.x
    }

    /// `w · (p, x) = (Ad_w p, Ad_w x)`.
    pub fn act(&self, alg: &ChevalleyAlgebra, w: &GroupWord) -> Result<Self, BundleError> {
        UCPoint::new(
            alg,
            act_subspace(alg, w, &self.p),
            w.then(&self.witness),
            act_vector(alg, w, &self.x),
        )
    }

    /// Replaces the witness by `witness · s`; fails unless the new witness
    /// still carries `p_Γ` onto `p` (true whenever `s ∈ P_Γ`).
    pub fn rewitness(&self, pd: &ParabolicDatum, s: &GroupWord) -> Result<Self, BundleError> {
        let witness = self.witness.then(s);
        if act_subspace(pd.alg(), &witness, &pd.p) != self.p {
            return Err(BundleError::Transport("new witness does not reach p".into()));
        }
        Ok(UCPoint {
            p: self.p.clone(),
            witness,
            x: self.x.clone(),
        })
    }
}

/// `(Ad_w p_Γ, Ad_w x0)` for `x0 ∈ [p_Γ, p_Γ]^perp`.
pub fn make_uc_point(pd: &ParabolicDatum, w: &GroupWord, x0: &[Scalar]) -> Result<UCPoint, BundleError> {
    if !pd.p_derived_perp.contains(x0) {
        return Err(BundleError::Precondition("x0 ∉ [p_Γ,p_Γ]^perp".into()));
    }
    let alg = pd.alg();
    UCPoint::new(alg, act_subspace(alg, w, &pd.p), w.clone(), act_vector(alg, w, x0))
}

pub fn mu_c(pt: &UCPoint) -> Vector {
    pt.x.clone()
}

pub fn sigma_c(pt: &UCPoint) -> Subspace {
    pt.p.clone()
}

/// `-[x]`, read in the twist space of `p_Γ` after transport by the inverse
/// witness.
pub fn pi_c(pd: &ParabolicDatum, pt: &UCPoint) -> Result<TwistLevel, BundleError> {
    let back = act_vector(pd.alg(), &pt.witness.inverse(), &pt.x);
    let c = pd
        .twist_space
        .class_of(&back)
        .map_err(|_| BundleError::Transport("witness does not return x to [p_Γ,p_Γ]^perp".into()))?;
    Ok(TwistLevel { psi: neg(&c) })
}

/// Dimension count of `π_C^{-1}(ψ)`: affine solutions in `[p,p]^perp`
/// plus `dim C` for the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub solution_dim: usize,
    pub dim_c: usize,
    pub total: usize,
}

pub fn fiber_dimension(pd: &ParabolicDatum, psi: &TwistLevel) -> Result<FiberReport, BundleError> {
    psi.check(pd)?;
    let dim_c = pd.alg().dim() - pd.p.dim();
    let particular = neg(&pd.twist_space.lift(&psi.psi));
    let hit = neg(&pd.twist_space.class_of(&particular)?);
    if hit != psi.psi {
        return Err(BundleError::Invariant("twist level has no preimage".into()));
    }
    // kernel of the class map on [p,p]^perp
    let rows: Vec<Vector> = pd
        .p_derived_perp
        .basis_vectors()
        .map(|v| pd.twist_space.class_of(v))
        .collect::<Result<_, _>>()?;
    let map = Mat::from_rows(pd.twist_space.dim(), &rows)?;
    let solution_dim = pd.p_derived_perp.dim() - map.rank();
    Ok(FiberReport {
        solution_dim,
        dim_c,
        total: solution_dim + dim_c,
    })
}

/// A point `(p, x)` of `g_C`: `x ∈ p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCPoint {
    p: Subspace,
    x: Vector,
}

impl GCPoint {
    pub fn new(p: Subspace, x: Vector) -> Result<Self, BundleError> {
        if !p.contains(&x) {
            return Err(BundleError::Invariant("x ∉ p".into()));
        }
        Ok(GCPoint { p, x })
    }

    pub fn p(&self) -> &Subspace {
        &self.p
    }

    pub fn x(&self) -> &[Scalar] {
        &self.x
    }

    pub fn act(&self, alg: &ChevalleyAlgebra, w: &GroupWord) -> Result<Self, BundleError> {
        GCPoint::new(act_subspace(alg, w, &self.p), act_vector(alg, w, &self.x))
    }
}

pub fn embed(pt: &UCPoint) -> Result<GCPoint, BundleError> {
    GCPoint::new(pt.p.clone(), pt.x.clone())
}

pub fn phi_c(pt: &GCPoint) -> Vector {
    pt.x.clone()
}

/// A point `(p, [x])` of `B_C`, with `x_rep ∈ u(p)` representing `[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BCPoint {
    p: Subspace,
    witness: GroupWord,
    x_rep: Vector,
}

/// Samples used when testing whether a coset `x + [u,u]` meets the open orbit.
pub const MEMBERSHIP_SAMPLES: usize = 16;

impl BCPoint {
    pub fn p(&self) -> &Subspace {
        &self.p
    }

    pub fn witness(&self) -> &GroupWord {
        &self.witness
    }

    pub fn x_rep(&self) -> &[Scalar] {
        &self.x_rep
    }

    /// Largest `dim [p, x_rep + z]` for `z` among `MEMBERSHIP_SAMPLES` seeded
    /// elements of `[u,u]` (the first being `z = 0`), against `dim u`.
    pub fn membership<R: Rng>(&self, alg: &ChevalleyAlgebra, rng: &mut R) -> Result<(usize, usize), BundleError> {
        let frame = TwistFrame::compute(alg, &self.p)?;
        let uu = alg.bracket_space(&frame.u, &frame.u)?;
        let mut best = 0;
        for k in 0..MEMBERSHIP_SAMPLES {
            let mut v = self.x_rep.clone();
            if k > 0 {
                for b in uu.basis_vectors() {
                    let c = int(rng.gen_range(-3..=3));
                    crate::exactlin::axpy(&mut v, &c, b);
                }
            }
            let tangent = Subspace::from_vectors(
                alg.dim(),
                self.p.basis_vectors().map(|a| alg.bracket_unchecked(a, &v)),
            );
            best = best.max(tangent.dim());
            if tangent == frame.u {
                return Ok((best, frame.u.dim()));
            }
        }
        Ok((best, frame.u.dim()))
    }

    /// `g · (p, [x]) = (Ad_g p, [Ad_g x])`.
    pub fn act(&self, alg: &ChevalleyAlgebra, g: &GroupWord) -> BCPoint {
        BCPoint {
            p: act_subspace(alg, g, &self.p),
            witness: g.then(&self.witness),
            x_rep: act_vector(alg, g, &self.x_rep),
        }
    }

    pub fn rewitness(&self, pd: &ParabolicDatum, s: &GroupWord) -> Result<Self, BundleError> {
        let witness = self.witness.then(s);
        if act_subspace(pd.alg(), &witness, &pd.p) != self.p {
            return Err(BundleError::Transport("new witness does not reach p".into()));
        }
        Ok(BCPoint {
            p: self.p.clone(),
            witness,
            x_rep: self.x_rep.clone(),
        })
    }

    /// `t · (p, [x]) = (p, t^{-1} · [x])`, where `t ∈ T_C` is given by its
    /// values on the simple roots (equal to 1 on `Γ`) and acts on `a(u(p))`
    /// through the witness.
    pub fn torus_act(&self, pd: &ParabolicDatum, params: &[Scalar]) -> Result<BCPoint, BundleError> {
        if pd.gamma.iter().any(|&j| params[j] != int(1)) {
            return Err(BundleError::Precondition("torus element is not in the subtorus H".into()));
        }
        let alg = pd.alg();
        let t_inv = GroupWord::new(
            alg,
            vec![Letter::Torus {
                params: params.iter().map(|p| p.recip()).collect(),
            }],
        )?;
        let conj = self.witness.then(&t_inv).then(&self.witness.inverse());
        Ok(BCPoint {
            p: self.p.clone(),
            witness: self.witness.clone(),
            x_rep: act_vector(alg, &conj, &self.x_rep),
        })
    }

    /// Equality of classes in `a(u(p))`, tested in standard position.
    pub fn same_class(&self, pd: &ParabolicDatum, other: &BCPoint) -> Result<bool, BundleError> {
        if self.p != other.p {
            return Ok(false);
        }
        let back = self.witness.inverse();
        let a = act_vector(pd.alg(), &back, &self.x_rep);
        let b = act_vector(pd.alg(), &back, &other.x_rep);
        let diff = crate::exactlin::sub(&a, &b);
        if !pd.u.contains(&diff) {
            return Err(BundleError::Transport("class representatives leave u(p)".into()));
        }
        Ok(pd.u_derived.contains(&diff))
    }
}

/// `(Ad_w p_Γ, [Ad_w x])` for the certificate's Richardson element `x`.
/// Only built when `[[l,l], u] ⊆ [u,u]`.
pub fn make_bc_point(pd: &ParabolicDatum, cert: &RichardsonCertificate, w: &GroupWord) -> Result<BCPoint, BundleError> {
    if !pd.hypothesis_h1().holds {
        return Err(BundleError::HypothesisNotSatisfied(pd.case_label()));
    }
    if !cert.is_open {
        return Err(BundleError::Precondition("certificate element is not Richardson".into()));
    }
    let alg = pd.alg();
    Ok(BCPoint {
        p: act_subspace(alg, w, &pd.p),
        witness: w.clone(),
        x_rep: act_vector(alg, w, &cert.element),
    })
}

/// A covector `((p, [x]), y)` on `B_C` with `y ∈ [p,p]^perp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TStarBCPoint {
    base: BCPoint,
    y: Vector,
}

impl TStarBCPoint {
    pub fn new(alg: &ChevalleyAlgebra, base: BCPoint, y: Vector) -> Result<Self, BundleError> {
        if !in_derived_perp(alg, &base.p, &y) {
            return Err(BundleError::Invariant("y ∉ [p,p]^perp".into()));
        }
        Ok(TStarBCPoint { base, y })
    }

    pub fn base(&self) -> &BCPoint {
        &self.base
    }

    pub fn y(&self) -> &[Scalar] {
        &self.y
    }
}

pub fn nu_g(pt: &TStarBCPoint) -> Vector {
    pt.y.clone()
}

/// `-[y]` computed through the Killing pairing: the functional
/// `-⟨y, Ad_w s⟩` on the section basis `s` of `a(p_Γ)`, solved against the
/// pairing gram of `p_Γ`.
pub fn nu_t(pd: &ParabolicDatum, pt: &TStarBCPoint) -> Result<TwistLevel, BundleError> {
    let alg = pd.alg();
    let xi: Vector = pd
        .a_p
        .section()
        .row_vectors()
        .map(|s| -alg.killing_unchecked(&pt.y, &act_vector(alg, &pt.base.witness, s)))
        .collect();
    let gram = pd.pairing_gram();
    let inv = gram.inverse()?;
    Ok(TwistLevel { psi: inv.apply(&xi) })
}

/// `((p, [x]), y) ↦ (p, y)`.
pub fn quotient_to_uc(alg: &ChevalleyAlgebra, pt: &TStarBCPoint) -> Result<UCPoint, BundleError> {
    UCPoint::new(alg, pt.base.p.clone(), pt.base.witness.clone(), pt.y.clone())
}
