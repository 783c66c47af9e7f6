use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use super::BundleError;
use crate::chevalley::{ChevalleyAlgebra, Root};
use crate::exactlin::{format_scalar, int, is_zero_vec, ratio, Scalar, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    /// `exp(ad(t · x_root))`.
    Unipotent { root: Root, t: Scalar },
    /// Adjoint torus element with `α_i = params[i]` on the simple roots.
    Torus { params: Vec<Scalar> },
}

impl Letter {
    fn inverse(&self) -> Letter {
        match self {
            Letter::Unipotent { root, t } => Letter::Unipotent {
                root: root.clone(),
                t: -t,
            },
            Letter::Torus { params } => Letter::Torus {
                params: params.iter().map(|p| p.recip()).collect(),
            },
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Unipotent { root, t } => write!(f, "u[{root}]({})", format_scalar(t)),
            Letter::Torus { params } => {
                let p: Vec<String> = params.iter().map(format_scalar).collect();
                write!(f, "t({})", p.join(","))
            }
        }
    }
}

/// An element of the adjoint group as a product of letters; the rightmost
/// letter acts first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn new(alg: &ChevalleyAlgebra, letters: Vec<Letter>) -> Result<Self, BundleError> {
        for l in &letters {
            match l {
                Letter::Unipotent { root, .. } => {
                    if alg.root_vector_index(root).is_none() {
                        return Err(BundleError::NotARoot(root.coords().to_vec()));
                    }
                }
                Letter::Torus { params } => {
                    if params.len() != alg.rank() {
                        return Err(BundleError::TorusArity {
                            expected: alg.rank(),
                            actual: params.len(),
                        });
                    }
                    if params.iter().any(Zero::is_zero) {
                        return Err(BundleError::ZeroTorusParameter);
                    }
                }
            }
        }
        Ok(GroupWord { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// `self · other` (so `other` acts first).
    pub fn then(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GroupWord { letters }
    }
}

fn apply_letter(alg: &ChevalleyAlgebra, letter: &Letter, v: &[Scalar]) -> Vector {
    match letter {
        Letter::Unipotent { root, t } => {
            let i = alg.root_vector_index(root).expect("validated root");
            // ad of a root vector is nilpotent, so the series is finite
            let mut out = v.to_vec();
            let mut term = v.to_vec();
            let mut n = 1i64;
            loop {
                term = alg.ad_basis_apply(i, t, &term);
                if is_zero_vec(&term) {
                    break;
                }
                let inv = ratio(1, n);
                for (o, x) in out.iter_mut().zip(&term) {
                    if !x.is_zero() {
                        *o += x * &inv;
                    }
                }
                term.iter_mut().for_each(|x| *x *= &inv);
                n += 1;
            }
            out
        }
        Letter::Torus { params } => {
            let mut out = v.to_vec();
            for (k, x) in out.iter_mut().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if let Some(root) = alg.root_of(k) {
                    *x *= torus_character(params, root.coords());
                }
            }
            out
        }
    }
}

/// `∏ params_i^{c_i}`.
pub fn torus_character(params: &[Scalar], coords: &[i64]) -> Scalar {
    let mut s = Scalar::one();
    for (p, &c) in params.iter().zip(coords) {
        let base = if c < 0 { p.recip() } else { p.clone() };
        for _ in 0..c.unsigned_abs() {
            s *= &base;
        }
    }
    s
}

pub fn act_vector(alg: &ChevalleyAlgebra, w: &GroupWord, v: &[Scalar]) -> Vector {
    let mut out = v.to_vec();
    for l in w.letters.iter().rev() {
        out = apply_letter(alg, l, &out);
    }
    out
}

pub fn act_subspace(alg: &ChevalleyAlgebra, w: &GroupWord, s: &Subspace) -> Subspace {
    Subspace::from_vectors(
        s.ambient_dim(),
        s.basis_vectors().map(|v| act_vector(alg, w, v)),
    )
}

/// First basis pair `(a, b)` with `κ(w·a, w·b) != κ(a, b)`.
pub fn killing_invariance_violation(
    alg: &ChevalleyAlgebra,
    w: &GroupWord,
    pairs: &[(usize, usize)],
) -> Option<(usize, usize)> {
    let images: Vec<Vector> = (0..alg.dim())
        .map(|i| act_vector(alg, w, &alg.basis_vector(i)))
        .collect();
    pairs
        .iter()
        .copied()
        .find(|&(a, b)| alg.killing_unchecked(&images[a], &images[b]) != *alg.killing_gram().get(a, b))
}

pub fn killing_invariance_audit(alg: &ChevalleyAlgebra, w: &GroupWord, pairs: &[(usize, usize)]) -> bool {
    killing_invariance_violation(alg, w, pairs).is_none()
}

/// First basis pair `(a, b)` with `w·[a, b] != [w·a, w·b]`.
pub fn bracket_preservation_violation(
    alg: &ChevalleyAlgebra,
    w: &GroupWord,
    pairs: &[(usize, usize)],
) -> Option<(usize, usize)> {
    let images: Vec<Vector> = (0..alg.dim())
        .map(|i| act_vector(alg, w, &alg.basis_vector(i)))
        .collect();
    pairs.iter().copied().find(|&(a, b)| {
        let lhs = act_vector(
            alg,
            w,
            &alg.bracket_unchecked(&alg.basis_vector(a), &alg.basis_vector(b)),
        );
        lhs != alg.bracket_unchecked(&images[a], &images[b])
    })
}

/// Small nonzero rationals used for word parameters.
fn small_scalar<R: Rng>(rng: &mut R) -> Scalar {
    const CHOICES: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-1, 3)];
    let (n, d) = CHOICES[rng.gen_range(0..CHOICES.len())];
    ratio(n, d)
}

pub fn random_torus<R: Rng>(rng: &mut R, rank: usize, fixed: &[usize]) -> Letter {
    let params = (0..rank)
        .map(|i| if fixed.contains(&i) { int(1) } else { small_scalar(rng) })
        .collect();
    Letter::Torus { params }
}

/// Word of length `1..=max_len` whose unipotent letters use `roots`; roughly
/// one letter in four is a torus letter.
pub fn random_word<R: Rng>(alg: &ChevalleyAlgebra, rng: &mut R, roots: &[Root], max_len: usize) -> GroupWord {
    let len = rng.gen_range(1..=max_len.max(1));
    let letters = (0..len)
        .map(|_| {
            if roots.is_empty() || rng.gen_range(0..4) == 0 {
                random_torus(rng, alg.rank(), &[])
            } else {
                Letter::Unipotent {
                    root: roots[rng.gen_range(0..roots.len())].clone(),
                    t: small_scalar(rng),
                }
            }
        })
        .collect();
    GroupWord { letters }
}

/// All roots of the algebra, positive and negative.
pub fn all_roots(alg: &ChevalleyAlgebra) -> Vec<Root> {
    alg.positive_roots()
        .iter()
        .flat_map(|r| [r.clone(), r.negate()])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{build_algebra, CartanDatum};
    use crate::exactlin::{add, scale};

    fn a1() -> ChevalleyAlgebra {
        build_algebra(&CartanDatum::parse("A1").unwrap()).unwrap()
    }

    #[test]
    fn exp_ad_e_on_f() {
        let alg = a1();
        let w = GroupWord::new(
            &alg,
            vec![Letter::Unipotent {
                root: Root::simple(1, 0),
                t: int(1),
            }],
        )
        .unwrap();
        let (e, h, f) = (alg.basis_vector(0), alg.basis_vector(1), alg.basis_vector(2));
        let expect = add(&add(&f, &h), &scale(&e, &int(-1)));
        assert_eq!(act_vector(&alg, &w, &f), expect);
        assert_eq!(act_vector(&alg, &w.inverse(), &expect), f);
    }

    #[test]
    fn torus_weights() {
        let alg = a1();
        let w = GroupWord::new(&alg, vec![Letter::Torus { params: vec![int(5)] }]).unwrap();
        assert_eq!(act_vector(&alg, &w, &alg.basis_vector(0)), scale(&alg.basis_vector(0), &int(5)));
        assert_eq!(act_vector(&alg, &w, &alg.basis_vector(1)), alg.basis_vector(1));
        assert_eq!(
            act_vector(&alg, &w, &alg.basis_vector(2)),
            scale(&alg.basis_vector(2), &ratio(1, 5))
        );
    }

    #[test]
    fn rejects_bad_letters() {
        let alg = a1();
        assert_eq!(
            GroupWord::new(&alg, vec![Letter::Torus { params: vec![int(0)] }]),
            Err(BundleError::ZeroTorusParameter)
        );
        assert!(GroupWord::new(
            &alg,
            vec![Letter::Unipotent {
                root: Root::new(vec![2]).unwrap(),
                t: int(1)
            }]
        )
        .is_err());
    }
}
