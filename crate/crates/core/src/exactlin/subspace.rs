use num_traits::{One, Zero};

use super::{LinError, Mat, Scalar, Vector};

/// A linear subspace of `Q^n` in canonical form.
///
/// The basis rows are the nonzero rows of the reduced row-echelon form of any
/// spanning set, so two subspaces are equal iff their `basis` matrices are
/// identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

/// Incremental echelon builder. Inserting a vector costs one reduction pass
/// against the rows already present, and the builder can report when the span
/// is already the whole ambient space.
#[derive(Clone, Debug)]
pub(crate) struct EchelonBuilder {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl EchelonBuilder {
    pub(crate) fn new(ambient: usize) -> Self {
        EchelonBuilder {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    fn reduce(&self, v: &mut [Scalar]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }

    /// Returns true if `v` enlarged the span.
    pub(crate) fn insert(&mut self, mut v: Vector) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length vs ambient dimension");
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        let Some(q) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[q].recip();
        if !inv.is_one() {
            for x in v.iter_mut().skip(q) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        for row in &mut self.rows {
            if row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(q);
        true
    }

    pub(crate) fn finish(self) -> Subspace {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        let mut rows = self.rows;
        let sorted: Vec<Vector> = order
            .iter()
            .map(|&i| std::mem::take(&mut rows[i]))
            .collect();
        Subspace {
            ambient: self.ambient,
            basis: Mat::from_rows(self.ambient, &sorted).expect("echelon rows"),
            pivots,
        }
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row space of `vectors`.
    pub fn span(vectors: &Mat) -> Self {
        Self::from_vectors(vectors.cols(), vectors.to_rows())
    }

    pub fn from_vectors<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut b = EchelonBuilder::new(ambient);
        for v in vectors {
            if b.is_full() {
                break;
            }
            b.insert(v);
        }
        b.finish()
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self::from_vectors(ambient, indices.into_iter().map(|i| super::unit_vec(ambient, i)))
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Scalar]> + '_ {
        self.basis.row_vectors()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ambient
    }

    /// `v` minus its projection along the echelon basis; zero iff `v` lies in
    /// the subspace.
    pub fn residual(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.ambient, "vector length vs ambient dimension");
        let mut out = v.to_vec();
        for (row, &p) in self.basis.row_vectors().zip(&self.pivots) {
            let f = &v[p];
            if f.is_zero() {
                continue;
            }
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= f * r;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        super::is_zero_vec(&self.residual(v))
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if self.contains(v) {
            Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
        } else {
            None
        }
    }

    pub fn combine(&self, coords: &[Scalar]) -> Vector {
        self.basis.left_apply(coords)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis_vectors().all(|r| other.contains(r))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinError> {
        if self.ambient != other.ambient {
            return Err(LinError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinError> {
        self.check_ambient(other)?;
        let mut b = EchelonBuilder::new(self.ambient);
        for r in self.basis_vectors().chain(other.basis_vectors()) {
            if b.is_full() {
                break;
            }
            b.insert(r.to_vec());
        }
        Ok(b.finish())
    }

    /// Intersection through the kernel of the stacked system `c·A = d·B`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinError> {
        self.check_ambient(other)?;
        let ka = self.dim();
        let kb = other.dim();
        if ka == 0 || kb == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        // columns of the stacked transpose are the basis vectors of a then b
        let mut stacked = Mat::zeros(self.ambient, ka + kb);
        for (j, r) in self.basis_vectors().chain(other.basis_vectors()).enumerate() {
            for (i, x) in r.iter().enumerate() {
                stacked.set(i, j, x.clone());
            }
        }
        let vecs = stacked
            .kernel()
            .into_iter()
            .map(|k| self.basis.left_apply(&k[..ka]));
        Ok(Subspace::from_vectors(self.ambient, vecs))
    }

    /// `{ξ : gram(ξ, η) = 0 for all η in self}`.
    pub fn perp_wrt_form(&self, gram: &Mat) -> Result<Subspace, LinError> {
        if gram.rows() != self.ambient || gram.cols() != self.ambient {
            return Err(LinError::Shape {
                expected: format!("{0}x{0} gram matrix", self.ambient),
                actual: format!("{}x{}", gram.rows(), gram.cols()),
            });
        }
        if self.is_zero() {
            return Ok(Subspace::full(self.ambient));
        }
        let m = self.basis.mul(gram)?;
        Ok(Subspace::from_vectors(self.ambient, m.kernel()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, unit_vec};

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn span_edge_cases() {
        assert_eq!(Subspace::span(&Mat::zeros(3, 4)).dim(), 0);
        assert!(Subspace::span(&Mat::identity(4)).is_full());
        let s = Subspace::from_vectors(3, vec![v(&[1, 2, 3]), v(&[1, 2, 3])]);
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&v(&[2, 4, 6])));
        assert!(!s.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = Subspace::from_vectors(3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::from_vectors(3, vec![v(&[1, 2, 1]), v(&[1, 0, -1])]);
        assert_eq!(a, b);
        assert_eq!(Subspace::span(a.basis()), a);
    }

    #[test]
    fn sum_and_intersection_basics() {
        let l1 = Subspace::from_vectors(2, vec![v(&[1, 0])]);
        let l2 = Subspace::from_vectors(2, vec![v(&[1, 1])]);
        assert!(l1.sum(&l2).unwrap().is_full());
        assert!(l1.intersect(&l2).unwrap().is_zero());
        let z = Subspace::zero(2);
        assert_eq!(l1.sum(&z).unwrap(), l1);
        assert_eq!(l1.intersect(&Subspace::full(2)).unwrap(), l1);
        assert_eq!(
            l1.sum(&Subspace::zero(3)),
            Err(LinError::AmbientMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn perp_edge_cases() {
        let g = Mat::identity(3);
        assert!(Subspace::zero(3).perp_wrt_form(&g).unwrap().is_full());
        assert!(Subspace::full(3).perp_wrt_form(&g).unwrap().is_zero());
        let line = Subspace::from_vectors(3, vec![unit_vec(3, 0)]);
        let p = line.perp_wrt_form(&g).unwrap();
        assert_eq!(p, Subspace::coordinate(3, [1, 2]));
        assert_eq!(p.perp_wrt_form(&g).unwrap(), line);
        assert!(line.perp_wrt_form(&Mat::identity(2)).is_err());
    }
}
