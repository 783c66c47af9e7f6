use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ChevalleyError;
use crate::exactlin::{int, ratio, IntMat, Mat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// Series letter and rank, e.g. `B2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub series: Series,
    pub rank: usize,
}

pub const MAX_RANK: usize = 8;

impl TypeLabel {
    pub fn new(series: Series, rank: usize) -> Result<Self, ChevalleyError> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if !ok || rank > MAX_RANK {
            return Err(ChevalleyError::UnsupportedType(format!(
                "{}{}",
                series.letter(),
                rank
            )));
        }
        Ok(TypeLabel { series, rank })
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for TypeLabel {
    type Err = ChevalleyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ChevalleyError::BadLabel(s.to_string());
        let mut chars = s.chars();
        let series = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let rank: usize = rest.parse().map_err(|_| bad())?;
        TypeLabel::new(series, rank)
    }
}

/// Cartan matrix with `a[i][j] = α_j(h_i) = 2(α_i, α_j) / (α_i, α_i)`, simple
/// roots in Bourbaki order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    label: TypeLabel,
    matrix: IntMat,
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
        if i + 1 < n {
            row[i + 1] = -1;
        }
        if i > 0 {
            row[i - 1] = -1;
        }
    }
    m
}

fn link(m: &mut [Vec<i64>], i: usize, j: usize) {
    m[i][j] = -1;
    m[j][i] = -1;
}

fn standard_matrix(label: TypeLabel) -> Vec<Vec<i64>> {
    let n = label.rank;
    match label.series {
        Series::A => chain(n),
        Series::B => {
            let mut m = chain(n);
            m[n - 1][n - 2] = -2;
            m
        }
        Series::C => {
            let mut m = chain(n);
            m[n - 2][n - 1] = -2;
            m
        }
        Series::D => {
            let mut m = chain(n - 1);
            for row in &mut m {
                row.push(0);
            }
            m.push(vec![0; n]);
            m[n - 1][n - 1] = 2;
            link(&mut m, n - 3, n - 1);
            m
        }
        Series::E => {
            // 1-3-4-5-...; 2 attached to 4
            let mut m = vec![vec![0i64; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 2;
            }
            link(&mut m, 0, 2);
            link(&mut m, 1, 3);
            for i in 2..n - 1 {
                link(&mut m, i, i + 1);
            }
            m
        }
        Series::F => {
            let mut m = chain(4);
            m[2][1] = -2;
            m
        }
        Series::G => vec![vec![2, -3], vec![-1, 2]],
    }
}

/// Half squared root lengths `d_i` with `d_i a_ij = d_j a_ji`, normalized to 1
/// on the first node of each component. Errors if not symmetrizable.
fn symmetrizer(a: &IntMat) -> Result<Vec<Scalar>, ChevalleyError> {
    let n = a.rows();
    let mut d: Vec<Option<Scalar>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(int(1));
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].clone().expect("visited");
            for j in 0..n {
                if i == j || a.get_i64(i, j) == 0 {
                    continue;
                }
                let dj = &di * ratio(a.get_i64(i, j), a.get_i64(j, i));
                match &d[j] {
                    Some(existing) if *existing != dj => {
                        return Err(ChevalleyError::NotFiniteType(
                            "matrix is not symmetrizable".into(),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    Ok(d.into_iter().map(|x| x.expect("all nodes visited")).collect())
}

/// Checks that `a` is a finite-type (positive-definite symmetrizable) Cartan
/// matrix and returns its symmetrizer.
pub fn validate_cartan_matrix(a: &IntMat) -> Result<Vec<Scalar>, ChevalleyError> {
    let n = a.rows();
    if a.cols() != n || n == 0 {
        return Err(ChevalleyError::NotFiniteType("matrix must be square and nonempty".into()));
    }
    for i in 0..n {
        if a.get_i64(i, i) != 2 {
            return Err(ChevalleyError::NotFiniteType(format!("diagonal entry {i} is not 2")));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let (x, y) = (a.get_i64(i, j), a.get_i64(j, i));
            if x > 0 {
                return Err(ChevalleyError::NotFiniteType(format!(
                    "off-diagonal entry ({i},{j}) is positive"
                )));
            }
            if (x == 0) != (y == 0) {
                return Err(ChevalleyError::NotFiniteType(format!(
                    "entries ({i},{j}) and ({j},{i}) disagree on vanishing"
                )));
            }
        }
    }
    let d = symmetrizer(a)?;
    let mut sym = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sym.set(i, j, &d[i] * int(a.get_i64(i, j)));
        }
    }
    for k in 1..=n {
        let mut minor = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                minor.set(i, j, sym.get(i, j).clone());
            }
        }
        let det = minor.det().expect("square minor");
        if det <= Scalar::zero() {
            return Err(ChevalleyError::NotFiniteType(
                "symmetrized form is not positive definite".into(),
            ));
        }
    }
    Ok(d)
}

impl CartanDatum {
    pub fn from_label(label: TypeLabel) -> Self {
        let rows = standard_matrix(label);
        let matrix = IntMat::from_i64_rows(label.rank, &rows).expect("standard matrix shape");
        debug_assert!(validate_cartan_matrix(&matrix).is_ok());
        CartanDatum { label, matrix }
    }

    /// No validation; for internal covers whose label is outside the public
    /// label set.
    pub(crate) fn from_raw(label: TypeLabel, matrix: IntMat) -> Self {
        CartanDatum { label, matrix }
    }

    pub fn parse(s: &str) -> Result<Self, ChevalleyError> {
        Ok(Self::from_label(s.parse()?))
    }

    /// Validates a matrix and identifies its type among the standard
    /// (Bourbaki-ordered) Cartan matrices of the same rank.
    pub fn from_matrix(matrix: IntMat) -> Result<Self, ChevalleyError> {
        validate_cartan_matrix(&matrix)?;
        let n = matrix.rows();
        let series = [
            Series::A,
            Series::B,
            Series::C,
            Series::D,
            Series::E,
            Series::F,
            Series::G,
        ];
        for s in series {
            let Ok(label) = TypeLabel::new(s, n) else { continue };
            let candidate = Self::from_label(label);
            if candidate.matrix == matrix {
                return Ok(candidate);
            }
        }
        Err(ChevalleyError::UnsupportedType(
            "finite type, but not a standard-ordered simple Cartan matrix".into(),
        ))
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix.get_i64(i, j)
    }

    /// Half squared lengths of the simple roots (`(α_i, α_i) / 2`), up to a
    /// common scale.
    pub fn half_norms(&self) -> Vec<Scalar> {
        symmetrizer(&self.matrix).expect("validated at construction")
    }

    /// `(α_i, α_j)` up to the common scale of `half_norms`.
    pub fn inner(&self, i: usize, j: usize) -> Scalar {
        &self.half_norms()[i] * int(self.entry(i, j))
    }
}
