use super::subspace::EchelonBuilder;
use super::{LinError, Mat, Scalar, Subspace, Vector};

/// `total / divisor`, with a fixed section: representatives of a basis of the
/// quotient, chosen greedily from the echelon basis of `total`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    total: Subspace,
    divisor: Subspace,
    section: Mat,
    // inverse change of basis from total-coordinates to [section; divisor]
    to_adapted: Mat,
}

impl QuotientSpace {
    pub fn new(total: &Subspace, divisor: &Subspace) -> Result<Self, LinError> {
        if total.ambient_dim() != divisor.ambient_dim() {
            return Err(LinError::AmbientMismatch {
                left: total.ambient_dim(),
                right: divisor.ambient_dim(),
            });
        }
        if !divisor.is_subspace_of(total) {
            return Err(LinError::DivisorNotContained);
        }
        let n = total.ambient_dim();
        let mut builder = EchelonBuilder::new(n);
        for r in divisor.basis_vectors() {
            builder.insert(r.to_vec());
        }
        let mut section = Vec::new();
        for r in total.basis_vectors() {
            if builder.dim() == total.dim() {
                break;
            }
            if builder.insert(r.to_vec()) {
                section.push(r.to_vec());
            }
        }
        // rows of [section; divisor] in total coordinates
        let t = total.dim();
        let adapted: Vec<Vector> = section
            .iter()
            .map(|r| r.as_slice())
            .chain(divisor.basis_vectors())
            .map(|r| total.coordinates(r).expect("row lies in total"))
            .collect();
        let to_adapted = Mat::from_rows(t, &adapted)?.inverse()?;
        Ok(QuotientSpace {
            total: total.clone(),
            divisor: divisor.clone(),
            section: Mat::from_rows(n, &section)?,
            to_adapted,
        })
    }

    pub fn dim(&self) -> usize {
        self.section.rows()
    }

    pub fn total(&self) -> &Subspace {
        &self.total
    }

    pub fn divisor(&self) -> &Subspace {
        &self.divisor
    }

    pub fn section(&self) -> &Mat {
        &self.section
    }

    /// Coordinates of the class of `v` in the section basis.
    pub fn class_of(&self, v: &[Scalar]) -> Result<Vector, LinError> {
        if v.len() != self.total.ambient_dim() {
            return Err(LinError::AmbientMismatch {
                left: v.len(),
                right: self.total.ambient_dim(),
            });
        }
        let coords = self.total.coordinates(v).ok_or(LinError::NotInTotal)?;
        let mut c = self.to_adapted.left_apply(&coords);
        c.truncate(self.dim());
        Ok(c)
    }

    /// The section representative with the given class coordinates.
    pub fn lift(&self, coords: &[Scalar]) -> Vector {
        self.section.left_apply(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, is_zero_vec, unit_vec};

    #[test]
    fn trivial_quotients() {
        let v = Subspace::coordinate(3, [0, 2]);
        let q = QuotientSpace::new(&v, &v).unwrap();
        assert_eq!(q.dim(), 0);
        assert!(q.class_of(&unit_vec(3, 2)).unwrap().is_empty());

        let q0 = QuotientSpace::new(&v, &Subspace::zero(3)).unwrap();
        let x = vec![int(5), int(0), int(-2)];
        assert_eq!(q0.class_of(&x).unwrap(), vec![int(5), int(-2)]);
    }

    #[test]
    fn membership_errors_are_distinct() {
        let line = Subspace::coordinate(3, [0]);
        let plane = Subspace::coordinate(3, [0, 1]);
        assert_eq!(
            QuotientSpace::new(&line, &plane),
            Err(LinError::DivisorNotContained)
        );
        let q = QuotientSpace::new(&plane, &line).unwrap();
        assert_eq!(q.class_of(&unit_vec(3, 2)), Err(LinError::NotInTotal));
        assert!(is_zero_vec(&q.class_of(&unit_vec(3, 0)).unwrap()));
        let c = q.class_of(&unit_vec(3, 1)).unwrap();
        assert_eq!(q.lift(&c), unit_vec(3, 1));
    }
}
