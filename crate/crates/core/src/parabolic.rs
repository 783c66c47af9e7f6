//! Standard parabolic subalgebras `p_Γ` and the spaces attached to them.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chevalley::{BasisKind, ChevalleyAlgebra, ChevalleyError, Root};
use crate::exactlin::{
    int, smith_normal_form, zero_vec, IntMat, LinError, Mat, QuotientSpace, Scalar, Subspace, Vector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParabolicError {
    #[error("simple root index {index} out of range for rank {rank}")]
    GammaOutOfRange { index: usize, rank: usize },
    #[error("identity `{name}` fails: {detail}")]
    Identity { name: &'static str, detail: String },
    #[error("no Richardson element after {attempts} candidates; best tangent dimension {best} of {target}")]
    RichardsonExhausted { attempts: usize, best: usize, target: usize },
    #[error("certificate element is not in the open orbit")]
    NotOpen,
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
}

/// `p_Γ` together with its Levi decomposition, derived pieces, perps under
/// the Killing form and the quotients built from them.
#[derive(Clone, Debug)]
pub struct ParabolicDatum {
    alg: Arc<ChevalleyAlgebra>,
    /// 0-based simple root indices, sorted.
    pub gamma: Vec<usize>,
    pub p: Subspace,
    pub levi: Subspace,
    pub levi_derived: Subspace,
    pub u: Subspace,
    pub u_derived: Subspace,
    pub p_derived: Subspace,
    pub p_perp: Subspace,
    pub p_derived_perp: Subspace,
    pub a_p: QuotientSpace,
    pub a_u: QuotientSpace,
    pub twist_space: QuotientSpace,
    pub torus_rank: usize,
    /// `{h in h : α(h) = 0 for α in Γ}`, the Lie algebra of the subtorus
    /// mapping isomorphically onto `A(P)`.
    pub h_gamma: Subspace,
}

/// One named identity and whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

fn identity(name: &'static str, holds: bool, detail: String) -> IdentityCheck {
    IdentityCheck { name, holds, detail }
}

pub fn build_parabolic(alg: Arc<ChevalleyAlgebra>, gamma: &[usize]) -> Result<ParabolicDatum, ParabolicError> {
    let rank = alg.rank();
    if let Some(&index) = gamma.iter().find(|&&i| i >= rank) {
        return Err(ParabolicError::GammaOutOfRange { index, rank });
    }
    let mut gamma = gamma.to_vec();
    gamma.sort_unstable();
    gamma.dedup();

    let dim = alg.dim();
    let mut levi_idx: Vec<usize> = (0..rank).map(|i| alg.h_index(i)).collect();
    let mut u_idx = Vec::new();
    for (k, beta) in alg.positive_roots().iter().enumerate() {
        if beta.supported_on(&gamma) {
            levi_idx.push(alg.e_index(k));
            levi_idx.push(alg.f_index(k));
        } else {
            u_idx.push(alg.e_index(k));
        }
    }
    let levi = Subspace::coordinate(dim, levi_idx.iter().copied());
    let u = Subspace::coordinate(dim, u_idx.iter().copied());
    let p = levi.sum(&u)?;

    let levi_derived = alg.bracket_space(&levi, &levi)?;
    let u_derived = alg.bracket_space(&u, &u)?;
    let p_derived = alg.bracket_space(&p, &p)?;
    let gram = alg.killing_gram();
    let p_perp = p.perp_wrt_form(gram)?;
    let p_derived_perp = p_derived.perp_wrt_form(gram)?;

    let quotient = |total: &Subspace, divisor: &Subspace, name: &'static str| {
        QuotientSpace::new(total, divisor).map_err(|e| ParabolicError::Identity {
            name,
            detail: e.to_string(),
        })
    };
    let a_p = quotient(&p, &p_derived, "a(p) = p/[p,p]")?;
    let a_u = quotient(&u, &u_derived, "a(u) = u/[u,u]")?;
    let twist_space = quotient(&p_derived_perp, &u, "u(p) inside [p,p]^perp")?;

    // c^T M = 0 with M[i][j] = α_{γ_j}(h_i)
    let h_gamma = if gamma.is_empty() {
        alg.cartan_subalgebra()
    } else {
        let m = Mat::from_rows(
            rank,
            &gamma
                .iter()
                .map(|&j| (0..rank).map(|i| int(alg.cartan().entry(i, j))).collect())
                .collect::<Vec<Vector>>(),
        )?;
        Subspace::from_vectors(
            dim,
            m.kernel().into_iter().map(|c| {
                let mut v = zero_vec(dim);
                for (i, ci) in c.into_iter().enumerate() {
                    v[alg.h_index(i)] = ci;
                }
                v
            }),
        )
    };

    let pd = ParabolicDatum {
        torus_rank: rank - gamma.len(),
        alg,
        gamma,
        p,
        levi,
        levi_derived,
        u,
        u_derived,
        p_derived,
        p_perp,
        p_derived_perp,
        a_p,
        a_u,
        twist_space,
        h_gamma,
    };
    if let Some(bad) = pd.identity_checks().into_iter().find(|c| !c.holds) {
        return Err(ParabolicError::Identity {
            name: bad.name,
            detail: bad.detail,
        });
    }
    Ok(pd)
}

fn dims(a: &Subspace, b: &Subspace) -> String {
    format!("dims {} and {}", a.dim(), b.dim())
}

impl ParabolicDatum {
    pub fn alg(&self) -> &ChevalleyAlgebra {
        &self.alg
    }

    pub fn alg_arc(&self) -> &Arc<ChevalleyAlgebra> {
        &self.alg
    }

    pub fn is_whole_algebra(&self) -> bool {
        self.gamma.len() == self.alg.rank()
    }

    /// Case string for this datum, e.g. `A3:1,3` (1-based indices).
    pub fn case_label(&self) -> String {
        let g = if self.gamma.is_empty() {
            "-".to_string()
        } else {
            self.gamma
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}:{}", self.alg.cartan().label(), g)
    }

    /// Gram of the Killing pairing between the section bases of `a(p)` and
    /// `[p,p]^perp / u(p)`.
    pub fn pairing_gram(&self) -> Mat {
        let mut m = Mat::zeros(self.a_p.dim(), self.twist_space.dim());
        for (i, x) in self.a_p.section().row_vectors().enumerate() {
            for (j, y) in self.twist_space.section().row_vectors().enumerate() {
                m.set(i, j, self.alg.killing_unchecked(x, y));
            }
        }
        m
    }

    /// Every structural identity of the dossier, evaluated independently.
    pub fn identity_checks(&self) -> Vec<IdentityCheck> {
        let mut out = Vec::new();
        let meet = self.levi.intersect(&self.u).expect("same ambient");
        out.push(identity(
            "p = l ⊕ u(p)",
            meet.is_zero() && self.levi.dim() + self.u.dim() == self.p.dim(),
            format!(
                "dim l = {}, dim u = {}, dim p = {}, dim(l ∩ u) = {}",
                self.levi.dim(),
                self.u.dim(),
                self.p.dim(),
                meet.dim()
            ),
        ));
        let ll_u = self.levi_derived.sum(&self.u).expect("same ambient");
        out.push(identity(
            "[p,p] = [l,l] + u(p)",
            ll_u == self.p_derived,
            dims(&ll_u, &self.p_derived),
        ));
        out.push(identity("p^perp = u(p)", self.p_perp == self.u, dims(&self.p_perp, &self.u)));
        out.push(identity(
            "[p,p]^perp ⊆ p",
            self.p_derived_perp.is_subspace_of(&self.p),
            dims(&self.p_derived_perp, &self.p),
        ));
        out.push(identity(
            "[p, [p,p]^perp] ⊆ u(p)",
            self.fixedpoint_check(),
            "bracket sweep over basis pairs".into(),
        ));
        out.push(identity(
            "dim a(p) = rank - |Γ|",
            self.a_p.dim() == self.torus_rank,
            format!("dim a(p) = {}, rank - |Γ| = {}", self.a_p.dim(), self.torus_rank),
        ));
        out.push(identity(
            "dim [p,p]^perp/u(p) = dim a(p)",
            self.twist_space.dim() == self.a_p.dim(),
            format!("{} vs {}", self.twist_space.dim(), self.a_p.dim()),
        ));
        let g = self.pairing_gram();
        let nondegenerate = g.rows() == g.cols() && g.rank() == g.rows();
        out.push(identity(
            "a(p) × [p,p]^perp/u(p) pairing is nondegenerate",
            nondegenerate,
            format!("{}x{} gram of rank {}", g.rows(), g.cols(), g.rank()),
        ));
        out.push(identity(
            "dim h_Γ = rank - |Γ|",
            self.h_gamma.dim() == self.torus_rank,
            format!("{} vs {}", self.h_gamma.dim(), self.torus_rank),
        ));
        out
    }

    /// `[p, [p,p]^perp] ⊆ u(p)`, the infinitesimal form of `a(p)^* = (p^*)^P`.
    pub fn fixedpoint_check(&self) -> bool {
        let br = self
            .alg
            .bracket_space(&self.p, &self.p_derived_perp)
            .expect("same ambient");
        br.is_subspace_of(&self.u)
    }

    pub fn dimension_report(&self) -> DimensionReport {
        let dim_g = self.alg.dim();
        let dim_c = dim_g - self.p.dim();
        let dim_uc = dim_c + self.p_derived_perp.dim();
        DimensionReport {
            case: self.case_label(),
            dim_g,
            dim_p: self.p.dim(),
            dim_levi: self.levi.dim(),
            dim_levi_derived: self.levi_derived.dim(),
            dim_u: self.u.dim(),
            dim_u_derived: self.u_derived.dim(),
            dim_p_derived: self.p_derived.dim(),
            dim_p_derived_perp: self.p_derived_perp.dim(),
            dim_a_p: self.a_p.dim(),
            dim_a_u: self.a_u.dim(),
            dim_twist_space: self.twist_space.dim(),
            torus_rank: self.torus_rank,
            dim_c,
            dim_uc,
            leaf_dim: dim_uc - self.torus_rank,
        }
    }

    /// `[[l,l], u] ⊆ [u,u]`, with the first violating basis pair if any.
    pub fn hypothesis_h1(&self) -> H1Report {
        let br = self
            .alg
            .bracket_space(&self.levi_derived, &self.u)
            .expect("same ambient");
        if br.is_subspace_of(&self.u_derived) {
            return H1Report { holds: true, witness: None };
        }
        for a in self.levi_derived.basis_vectors() {
            for b in self.u.basis_vectors() {
                let c = self.alg.bracket_unchecked(a, b);
                if !self.u_derived.contains(&c) {
                    return H1Report {
                        holds: false,
                        witness: Some(H1Witness {
                            left: self.alg.describe(a),
                            right: self.alg.describe(b),
                            bracket: self.alg.describe(&c),
                        }),
                    };
                }
            }
        }
        unreachable!("bracket space escapes [u,u] but no basis pair does")
    }

    /// `[p, x]`.
    pub fn tangent_at(&self, x: &[Scalar]) -> Subspace {
        Subspace::from_vectors(
            self.alg.dim(),
            self.p.basis_vectors().map(|a| self.alg.bracket_unchecked(a, x)),
        )
    }

    pub fn certify(&self, x: Vector) -> RichardsonCertificate {
        let tangent = self.tangent_at(&x);
        let is_open = tangent == self.u;
        RichardsonCertificate {
            element: x,
            tangent,
            is_open,
        }
    }

    /// Sum of all root vectors of `u(p)` first, then seeded random
    /// coefficients in `1..=7`.
    pub fn find_richardson(&self) -> Result<RichardsonCertificate, ParabolicError> {
        let roots_in_u: Vec<usize> = (0..self.alg.num_positive_roots())
            .map(|k| self.alg.e_index(k))
            .filter(|&i| self.u.contains(&self.alg.basis_vector(i)))
            .collect();
        let build = |coeffs: &[i64]| {
            let mut x = zero_vec(self.alg.dim());
            for (&i, &c) in roots_in_u.iter().zip(coeffs) {
                x[i] = int(c);
            }
            x
        };
        let first = self.certify(build(&vec![1; roots_in_u.len()]));
        if first.is_open {
            return Ok(first);
        }
        let mut best = first.tangent.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(RICHARDSON_SEED);
        for _ in 0..RICHARDSON_RETRIES {
            let coeffs: Vec<i64> = roots_in_u.iter().map(|_| rng.gen_range(1..=7)).collect();
            let cert = self.certify(build(&coeffs));
            if cert.is_open {
                return Ok(cert);
            }
            best = best.max(cert.tangent.dim());
        }
        Err(ParabolicError::RichardsonExhausted {
            attempts: RICHARDSON_RETRIES + 1,
            best,
            target: self.u.dim(),
        })
    }

    /// Roots of `u(p)` whose root vectors survive in `a(u(p))` and carry a
    /// nonzero component of `x`.
    pub fn surviving_weights(&self, x: &[Scalar]) -> Vec<usize> {
        (0..self.alg.num_positive_roots())
            .filter(|&k| {
                let i = self.alg.e_index(k);
                !x[i].is_zero()
                    && self.u.contains(&self.alg.basis_vector(i))
                    && !self.u_derived.contains(&self.alg.basis_vector(i))
            })
            .collect()
    }

    /// Weights of `[x]` restricted to the subtorus `H = ∩_{α∈Γ} ker α`,
    /// i.e. root coordinates on `Δ \ Γ`, deduplicated.
    pub fn character_set(&self, x: &[Scalar]) -> TorusCharacterSet {
        let free: Vec<usize> = (0..self.alg.rank()).filter(|i| !self.gamma.contains(i)).collect();
        let mut rows: Vec<Vec<i64>> = self
            .surviving_weights(x)
            .into_iter()
            .map(|k| {
                let c = self.alg.positive_roots()[k].coords();
                free.iter().map(|&i| c[i]).collect()
            })
            .collect();
        rows.sort();
        rows.dedup();
        let characters = IntMat::from_i64_rows(free.len(), &rows).expect("uniform rows");
        TorusCharacterSet { characters }
    }

    pub fn torsor_certificate(&self, cert: &RichardsonCertificate) -> Result<TorsorCertificate, ParabolicError> {
        if !cert.is_open {
            return Err(ParabolicError::NotOpen);
        }
        let x = &cert.element;
        // h ↦ [[h, x]] on h_Γ
        let rows: Vec<Vector> = self
            .h_gamma
            .basis_vectors()
            .map(|h| self.a_u.class_of(&self.alg.bracket_unchecked(h, x)))
            .collect::<Result<_, _>>()?;
        let map = Mat::from_rows(self.a_u.dim(), &rows)?;
        let stabilizer_dim = self.h_gamma.dim() - map.rank();
        let characters = self.character_set(x);
        let snf = smith_normal_form(&characters.characters);
        let lattice_generating = snf.generates_full_lattice(self.torus_rank);
        Ok(TorsorCertificate {
            infinitesimal_free: stabilizer_dim == 0,
            stabilizer_dim,
            lattice_generating,
            invariants: snf.invariants,
            characters,
        })
    }

    /// Signed roots whose root vectors lie in `p`; unipotent letters on
    /// these roots (and torus letters) generate `P`.
    pub fn roots_of_p(&self) -> Vec<Root> {
        (0..self.alg.dim())
            .filter(|&i| !matches!(self.alg.kind(i), BasisKind::H(_)))
            .filter(|&i| self.p.contains(&self.alg.basis_vector(i)))
            .filter_map(|i| self.alg.root_of(i))
            .collect()
    }
}

pub const RICHARDSON_SEED: u64 = 0xC0FFEE;
pub const RICHARDSON_RETRIES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub case: String,
    pub dim_g: usize,
    pub dim_p: usize,
    pub dim_levi: usize,
    pub dim_levi_derived: usize,
    pub dim_u: usize,
    pub dim_u_derived: usize,
    pub dim_p_derived: usize,
    pub dim_p_derived_perp: usize,
    pub dim_a_p: usize,
    pub dim_a_u: usize,
    pub dim_twist_space: usize,
    pub torus_rank: usize,
    pub dim_c: usize,
    pub dim_uc: usize,
    pub leaf_dim: usize,
}

impl DimensionReport {
    pub fn leaf_identity_holds(&self) -> bool {
        self.leaf_dim == 2 * self.dim_c
    }

    pub fn rows(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("dim g", self.dim_g),
            ("dim p", self.dim_p),
            ("dim l", self.dim_levi),
            ("dim [l,l]", self.dim_levi_derived),
            ("dim u", self.dim_u),
            ("dim [u,u]", self.dim_u_derived),
            ("dim [p,p]", self.dim_p_derived),
            ("dim [p,p]^perp", self.dim_p_derived_perp),
            ("dim a(p)", self.dim_a_p),
            ("dim a(u)", self.dim_a_u),
            ("dim twist space", self.dim_twist_space),
            ("torus_rank", self.torus_rank),
            ("dim C", self.dim_c),
            ("dim U_C", self.dim_uc),
            ("leaf_dim", self.leaf_dim),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1Witness {
    pub left: String,
    pub right: String,
    pub bracket: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1Report {
    pub holds: bool,
    pub witness: Option<H1Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCharacterSet {
    pub characters: IntMat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichardsonCertificate {
    pub element: Vector,
    pub tangent: Subspace,
    pub is_open: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorCertificate {
    pub infinitesimal_free: bool,
    pub stabilizer_dim: usize,
    pub lattice_generating: bool,
    pub invariants: Vec<BigInt>,
    pub characters: TorusCharacterSet,
}
