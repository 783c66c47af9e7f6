use std::fmt;

use num_traits::{One, Zero};

use super::{LinError, Scalar, Vector};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinError> {
        if data.len() != rows * cols {
            return Err(LinError::Shape {
                expected: format!("{} entries", rows * cols),
                actual: format!("{} entries", data.len()),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    /// Stacks row vectors. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vector]) -> Result<Self, LinError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinError::Shape {
                    expected: format!("row of length {cols}"),
                    actual: format!("row of length {}", r.len()),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(Mat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vecs: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&x| super::int(x)).collect())
            .collect();
        Mat::from_rows(cols, &vecs).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[Scalar]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        self.row_vectors().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinError> {
        if self.cols != other.rows {
            return Err(LinError::Shape {
                expected: format!("{} rows", self.cols),
                actual: format!("{} rows", other.rows),
            });
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v · M`.
    pub fn left_apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.rows, "left_apply length");
        let mut out = vec![Scalar::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            super::axpy(&mut out, vi, self.row(i));
        }
        out
    }

    /// Matrix times column vector: `M · v`.
    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "apply length");
        self.row_vectors().map(|r| super::dot(r, v)).collect()
    }

    pub fn trace(&self) -> Scalar {
        let mut s = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            s += self.get(i, i);
        }
        s
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = rref(self);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![Scalar::zero(); self.cols];
            x[free] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -r.get(i, free).clone();
            }
            out.push(x);
        }
        out
    }

    pub fn inverse(&self) -> Result<Mat, LinError> {
        if self.rows != self.cols {
            return Err(LinError::Shape {
                expected: "square matrix".into(),
                actual: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Mat::zeros(0, 0));
        }
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = Scalar::one();
        }
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinError::Singular);
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = r.get(i, n + j).clone();
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<Scalar, LinError> {
        if self.rows != self.cols {
            return Err(LinError::Shape {
                expected: "square matrix".into(),
                actual: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for r in c + 1..n {
                let f = a.get(r, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = a.get(c, j) * &f;
                    a.data[r * n + j] -= v;
                }
            }
        }
        Ok(det)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in self.row_vectors() {
            writeln!(f, "  {}", super::format_vector(r))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form and the pivot columns, by Gauss-Jordan
/// elimination with first-nonzero pivoting. Zero rows are kept at the bottom.
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(p, row);
        let inv = a.get(row, col).recip();
        if !inv.is_one() {
            for j in col..a.cols {
                let idx = row * a.cols + j;
                if !a.data[idx].is_zero() {
                    a.data[idx] *= &inv;
                }
            }
        }
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let f = a.get(r, col).clone();
            if f.is_zero() {
                continue;
            }
            for j in col..a.cols {
                let v = &a.data[row * a.cols + j];
                if v.is_zero() {
                    continue;
                }
                let d = v * &f;
                a.data[r * a.cols + j] -= d;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, ratio};

    #[test]
    fn rref_identity() {
        let (r, p) = rref(&Mat::identity(2));
        assert_eq!(r, Mat::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = rref(&Mat::from_i64(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, Mat::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_and_inverse() {
        let m = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        let a = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Mat::identity(2));
        assert_eq!(a.det().unwrap(), int(1));
        assert_eq!(
            Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse(),
            Err(LinError::Singular)
        );
    }

    #[test]
    fn det_with_fractions() {
        let m = Mat::from_vec(2, 2, vec![ratio(1, 2), int(1), int(3), int(4)]).unwrap();
        assert_eq!(m.det().unwrap(), int(-1));
    }
}
