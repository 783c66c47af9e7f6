use std::collections::HashMap;

use num_traits::Zero;

use super::construct::chevalley_table;
use super::roots::{roots_from_cartan, Root};
use super::{CartanDatum, ChevalleyError};
use crate::exactlin::{int, zero_vec, Mat, Scalar, Subspace, Vector};
use crate::exactlin::EchelonBuilder;

/// `table[a * dim + b]` lists `(k, N)` with `[b_a, b_b] = Σ N b_k`.
pub type StructureTable = Vec<Vec<(usize, i64)>>;

pub(crate) fn sparse_bracket(dim: usize, table: &StructureTable, x: &[Scalar], y: &[Scalar]) -> Vector {
    let mut out = zero_vec(dim);
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        for (b, yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            let entries = &table[a * dim + b];
            if entries.is_empty() {
                continue;
            }
            let prod = xa * yb;
            for &(k, n) in entries {
                out[k] += &prod * int(n);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `e_β` for the positive root with this index.
    E(usize),
    /// `h_i`, the simple coroot.
    H(usize),
    /// `f_β = x_{-β}`.
    F(usize),
}

/// A semisimple Lie algebra in a Chevalley basis ordered
/// `[e_β for β > 0] ++ [h_1..h_r] ++ [f_β for β > 0]`.
#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    cartan: CartanDatum,
    positive_roots: Vec<Root>,
    table: StructureTable,
    killing_gram: Mat,
    killing_sparse: Vec<Vec<(usize, i64)>>,
    root_index: HashMap<Vec<i64>, usize>,
}

/// Builds the algebra and audits it: any Jacobi violation, antisymmetry
/// failure or degenerate Killing form aborts construction.
pub fn build_algebra(c: &CartanDatum) -> Result<ChevalleyAlgebra, ChevalleyError> {
    let positive_roots = roots_from_cartan(c)?;
    let table = chevalley_table(c, &positive_roots)?;
    let n = positive_roots.len();
    let r = c.rank();
    let mut root_index = HashMap::new();
    for (k, beta) in positive_roots.iter().enumerate() {
        root_index.insert(beta.coords().to_vec(), k);
        root_index.insert(beta.negate().coords().to_vec(), n + r + k);
    }
    let mut alg = ChevalleyAlgebra {
        cartan: c.clone(),
        positive_roots,
        table,
        killing_gram: Mat::zeros(0, 0),
        killing_sparse: Vec::new(),
        root_index,
    };
    let gram = alg.killing_gram_by_trace();
    alg.killing_sparse = (0..alg.dim())
        .map(|a| {
            (0..alg.dim())
                .filter(|&b| gram[a][b] != 0)
                .map(|b| (b, gram[a][b]))
                .collect()
        })
        .collect();
    alg.killing_gram = Mat::from_rows(
        alg.dim(),
        &gram
            .iter()
            .map(|row| row.iter().map(|&x| int(x)).collect())
            .collect::<Vec<Vector>>(),
    )
    .expect("square gram");

    if let Some((a, b)) = alg.antisymmetry_violation() {
        return Err(ChevalleyError::Audit(format!(
            "antisymmetry fails on ({}, {})",
            alg.basis_name(a),
            alg.basis_name(b)
        )));
    }
    if let Some((a, b, c)) = alg.jacobi_violations().first() {
        return Err(ChevalleyError::Audit(format!(
            "Jacobi identity fails on ({}, {}, {})",
            alg.basis_name(*a),
            alg.basis_name(*b),
            alg.basis_name(*c)
        )));
    }
    if alg.killing_gram.rank() != alg.dim() {
        return Err(ChevalleyError::Audit("Killing form is degenerate".into()));
    }
    Ok(alg)
}

impl ChevalleyAlgebra {
    pub fn cartan(&self) -> &CartanDatum {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn dim(&self) -> usize {
        2 * self.positive_roots.len() + self.rank()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn kind(&self, i: usize) -> BasisKind {
        let n = self.positive_roots.len();
        let r = self.rank();
        if i < n {
            BasisKind::E(i)
        } else if i < n + r {
            BasisKind::H(i - n)
        } else {
            BasisKind::F(i - n - r)
        }
    }

    pub fn e_index(&self, k: usize) -> usize {
        k
    }

    pub fn h_index(&self, i: usize) -> usize {
        self.positive_roots.len() + i
    }

    pub fn f_index(&self, k: usize) -> usize {
        self.positive_roots.len() + self.rank() + k
    }

    /// Basis index of the root vector for a (signed) root.
    pub fn root_vector_index(&self, root: &Root) -> Option<usize> {
        self.root_index.get(root.coords()).copied()
    }

    /// Signed root of a basis element, `None` for Cartan elements.
    pub fn root_of(&self, i: usize) -> Option<Root> {
        match self.kind(i) {
            BasisKind::E(k) => Some(self.positive_roots[k].clone()),
            BasisKind::F(k) => Some(self.positive_roots[k].negate()),
            BasisKind::H(_) => None,
        }
    }

    pub fn basis_name(&self, i: usize) -> String {
        match self.kind(i) {
            BasisKind::E(k) => format!("e[{}]", self.positive_roots[k]),
            BasisKind::H(j) => format!("h{}", j + 1),
            BasisKind::F(k) => format!("f[{}]", self.positive_roots[k]),
        }
    }

    /// Human-readable linear combination of basis elements.
    pub fn describe(&self, v: &[Scalar]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = self.basis_name(i);
                if *c == int(1) {
                    name
                } else if *c == int(-1) {
                    format!("-{name}")
                } else {
                    format!("({})*{name}", crate::exactlin::format_scalar(c))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        crate::exactlin::unit_vec(self.dim(), i)
    }

    pub fn structure_constants(&self, a: usize, b: usize) -> &[(usize, i64)] {
        &self.table[a * self.dim() + b]
    }

    fn check_len(&self, v: &[Scalar]) -> Result<(), ChevalleyError> {
        if v.len() != self.dim() {
            return Err(ChevalleyError::DimensionMismatch {
                expected: self.dim(),
                actual: v.len(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, ChevalleyError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        sparse_bracket(self.dim(), &self.table, x, y)
    }

    /// `[b_i, v]` for a basis element `b_i`, scaled by `t`.
    pub(crate) fn ad_basis_apply(&self, i: usize, t: &Scalar, v: &[Scalar]) -> Vector {
        let dim = self.dim();
        let mut out = zero_vec(dim);
        for (b, vb) in v.iter().enumerate() {
            if vb.is_zero() {
                continue;
            }
            let entries = &self.table[i * dim + b];
            if entries.is_empty() {
                continue;
            }
            let prod = t * vb;
            for &(k, n) in entries {
                out[k] += &prod * int(n);
            }
        }
        out
    }

    /// Matrix of `ad_x` acting on column vectors: entry `(k, m)` is the
    /// `b_k`-coefficient of `[x, b_m]`.
    pub fn ad(&self, x: &[Scalar]) -> Result<Mat, ChevalleyError> {
        self.check_len(x)?;
        let dim = self.dim();
        let mut m = Mat::zeros(dim, dim);
        for col in 0..dim {
            let img = self.bracket_unchecked(x, &self.basis_vector(col));
            for (k, c) in img.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(k, col, c);
                }
            }
        }
        Ok(m)
    }

    pub fn killing(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar, ChevalleyError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.killing_unchecked(x, y))
    }

    pub(crate) fn killing_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut s = Scalar::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for &(b, g) in &self.killing_sparse[a] {
                if !y[b].is_zero() {
                    s += xa * &y[b] * int(g);
                }
            }
        }
        s
    }

    pub fn killing_gram(&self) -> &Mat {
        &self.killing_gram
    }

    /// `trace(ad_a ∘ ad_b)` on basis pairs, straight from the table.
    fn killing_gram_by_trace(&self) -> Vec<Vec<i64>> {
        let dim = self.dim();
        let mut gram = vec![vec![0i64; dim]; dim];
        for a in 0..dim {
            for b in a..dim {
                let mut tr = 0i64;
                for m in 0..dim {
                    // (ad_b)_{k m} for [b, b_m] = Σ N_k b_k, then (ad_a)_{m k}
                    for &(k, n) in &self.table[b * dim + m] {
                        for &(kk, nn) in &self.table[a * dim + k] {
                            if kk == m {
                                tr += n * nn;
                            }
                        }
                    }
                }
                gram[a][b] = tr;
                gram[b][a] = tr;
            }
        }
        gram
    }

    /// First basis pair whose table entries are not negatives of each other.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        let dim = self.dim();
        for a in 0..dim {
            for b in a..dim {
                let mut ab: Vec<(usize, i64)> = self.table[a * dim + b].clone();
                let mut ba: Vec<(usize, i64)> =
                    self.table[b * dim + a].iter().map(|&(k, n)| (k, -n)).collect();
                ab.sort_unstable();
                ba.sort_unstable();
                if ab != ba {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Every basis triple `(a, b, c)` with
    /// `[a,[b,c]] + [b,[c,a]] + [c,[a,b]] != 0`, over all `dim^3` triples.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let dim = self.dim();
        let mut acc = vec![0i64; dim];
        let mut out = Vec::new();
        let nested = |x: usize, y: usize, z: usize, acc: &mut [i64]| {
            for &(k, n) in &self.table[y * dim + z] {
                for &(kk, nn) in &self.table[x * dim + k] {
                    acc[kk] += n * nn;
                }
            }
        };
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    acc.iter_mut().for_each(|v| *v = 0);
                    nested(a, b, c, &mut acc);
                    nested(b, c, a, &mut acc);
                    nested(c, a, b, &mut acc);
                    if acc.iter().any(|&v| v != 0) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// Span of all brackets of basis vectors of `a` and `b`.
    pub fn bracket_space(&self, a: &Subspace, b: &Subspace) -> Result<Subspace, ChevalleyError> {
        if a.ambient_dim() != self.dim() || b.ambient_dim() != self.dim() {
            return Err(ChevalleyError::DimensionMismatch {
                expected: self.dim(),
                actual: if a.ambient_dim() != self.dim() {
                    a.ambient_dim()
                } else {
                    b.ambient_dim()
                },
            });
        }
        let same = a == b;
        let av: Vec<&[Scalar]> = a.basis_vectors().collect();
        let bv: Vec<&[Scalar]> = b.basis_vectors().collect();
        let mut builder = EchelonBuilder::new(self.dim());
        'outer: for (i, x) in av.iter().enumerate() {
            let start = if same { i + 1 } else { 0 };
            for y in &bv[start..] {
                if builder.is_full() {
                    break 'outer;
                }
                builder.insert(self.bracket_unchecked(x, y));
            }
        }
        Ok(builder.finish())
    }

    pub fn cartan_subalgebra(&self) -> Subspace {
        Subspace::coordinate(self.dim(), (0..self.rank()).map(|i| self.h_index(i)))
    }

    /// The coroot `h_β` of a positive root as a combination of simple coroots.
    pub fn coroot(&self, k: usize) -> Vector {
        let beta = &self.positive_roots[k];
        let d = self.cartan.half_norms();
        let norm: Scalar = beta
            .coords()
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                beta.coords()
                    .iter()
                    .enumerate()
                    .map(|(j, &c2)| int(c * c2) * self.cartan.inner(i, j))
                    .fold(Scalar::zero(), |s, x| s + x)
            })
            .fold(Scalar::zero(), |s, x| s + x);
        let mut v = zero_vec(self.dim());
        for (i, &c) in beta.coords().iter().enumerate() {
            // β^∨ = 2β/(β,β) = Σ c_i (α_i,α_i)/(β,β) α_i^∨
            v[self.h_index(i)] = int(c) * int(2) * &d[i] / &norm;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(s: &str) -> ChevalleyAlgebra {
        build_algebra(&CartanDatum::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn sl2_relations() {
        let a = alg("A1");
        let (e, h, f) = (a.basis_vector(0), a.basis_vector(1), a.basis_vector(2));
        assert_eq!(a.bracket(&e, &f).unwrap(), h);
        assert_eq!(a.bracket(&h, &e).unwrap(), crate::exactlin::scale(&e, &int(2)));
        assert_eq!(a.bracket(&h, &f).unwrap(), crate::exactlin::scale(&f, &int(-2)));
        assert_eq!(a.killing(&h, &h).unwrap(), int(8));
        assert_eq!(a.killing(&e, &f).unwrap(), int(4));
    }

    #[test]
    fn a2_extraspecial_constant() {
        let a = alg("A2");
        let c = a.structure_constants(0, 1);
        assert_eq!(c, &[(2, 1)]);
        assert_eq!(a.killing(&a.basis_vector(0), &a.basis_vector(a.f_index(0))).unwrap(), int(6));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = alg("A1");
        assert!(matches!(
            a.bracket(&zero_vec(2), &zero_vec(3)),
            Err(ChevalleyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coroots_pair_root_vectors() {
        for s in ["B2", "G2", "C3"] {
            let a = alg(s);
            for k in 0..a.num_positive_roots() {
                let lhs = a
                    .bracket(&a.basis_vector(a.e_index(k)), &a.basis_vector(a.f_index(k)))
                    .unwrap();
                assert_eq!(lhs, a.coroot(k), "{s} root {}", a.positive_roots()[k]);
            }
        }
    }
}
