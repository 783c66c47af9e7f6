use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CartanDatum, ChevalleyError};

/// A root in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    coords: Vec<i64>,
}

impl Root {
    /// Coordinates must be sign-coherent (all `>= 0` or all `<= 0`) and not all
    /// zero.
    pub fn new(coords: Vec<i64>) -> Result<Self, ChevalleyError> {
        let pos = coords.iter().all(|&c| c >= 0);
        let neg = coords.iter().all(|&c| c <= 0);
        if !(pos || neg) || coords.iter().all(|&c| c == 0) {
            return Err(ChevalleyError::BadRoot(coords));
        }
        Ok(Root { coords })
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        Root { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.height() > 0
    }

    pub fn negate(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// True iff every nonzero coordinate sits on an index in `gamma`.
    pub fn supported_on(&self, gamma: &[usize]) -> bool {
        self.coords
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || gamma.contains(&i))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "α{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

/// `⟨β, α_i^∨⟩ = β(h_i)` for root coordinates `beta`.
pub(crate) fn pairing(c: &CartanDatum, beta: &[i64], i: usize) -> i64 {
    beta.iter()
        .enumerate()
        .map(|(j, &b)| b * c.entry(i, j))
        .sum()
}

/// Generous safety bound; E8 has 120 positive roots.
const ROOT_LIMIT: usize = 1000;

/// All positive roots, sorted by height and then by coordinates in descending
/// lexicographic order (so `α1` precedes `α2`).
///
/// Built layer by layer with root strings: for a positive root `β ≠ α_i` with
/// `α_i`-string `β - pα_i, ..., β + qα_i`, `q = p - ⟨β, α_i^∨⟩` and `β + α_i` is a
/// root iff `q > 0`.
pub fn roots_from_cartan(c: &CartanDatum) -> Result<Vec<Root>, ChevalleyError> {
    let r = c.rank();
    let mut all: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..r).map(|i| Root::simple(r, i).coords).collect();
    let mut out: Vec<Vec<i64>> = Vec::new();
    while !layer.is_empty() {
        layer.sort_by(|a, b| b.cmp(a));
        layer.dedup();
        for b in &layer {
            all.insert(b.clone());
        }
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                let mut p = 0i64;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if all.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pairing(c, beta, i);
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    next.push(up);
                }
            }
        }
        out.append(&mut layer);
        if out.len() > ROOT_LIMIT {
            return Err(ChevalleyError::NotFiniteType("root enumeration did not terminate".into()));
        }
        layer = next;
    }
    Ok(out.into_iter().map(|coords| Root { coords }).collect())
}
