//! Structure constants in a Chevalley basis.
//!
//! A simply-laced "cover" algebra is written down with the Frenkel–Kac sign
//! cocycle. Non-simply-laced types are the fixed points of a diagram
//! automorphism of their cover (B_n in D_{n+1}, C_n in A_{2n-1}, F4 in E6,
//! G2 in D4), generated by the orbit sums of the cover's Chevalley
//! generators. Root vectors are then produced recursively from the
//! extraspecial pairs `(α_i, ξ - α_i)` with `i` minimal, normalized so that
//! `N_{α_i, ξ-α_i} = +(p+1)`, and negative root vectors are matched through
//! the Chevalley involution. The final table is read off by solving in the
//! cover and is checked to be integral.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::algebra::{sparse_bracket, StructureTable};
use super::cartan::{Series, TypeLabel};
use super::roots::{roots_from_cartan, Root};
use super::{CartanDatum, ChevalleyError};
use crate::exactlin::{int, scale, Mat, Scalar, Subspace, Vector};

struct Cover {
    datum: CartanDatum,
    orbits: Vec<Vec<usize>>,
}

fn cover_for(label: TypeLabel) -> Result<Cover, ChevalleyError> {
    let n = label.rank;
    let mk = |s: Series, r: usize| TypeLabel::new(s, r).map(CartanDatum::from_label);
    let identity = |datum: CartanDatum| {
        let orbits = (0..datum.rank()).map(|i| vec![i]).collect();
        Cover { datum, orbits }
    };
    Ok(match label.series {
        Series::A | Series::D | Series::E => identity(CartanDatum::from_label(label)),
        Series::B => {
            // D_{n+1}: nodes n-1 and n hang off node n-2
            let datum = if n + 1 >= 4 {
                mk(Series::D, n + 1)?
            } else {
                d3()
            };
            let mut orbits: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i]).collect();
            orbits.push(vec![n - 1, n]);
            Cover { datum, orbits }
        }
        Series::C => {
            let datum = mk(Series::A, 2 * n - 1)?;
            let mut orbits: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, 2 * n - 2 - i]).collect();
            orbits.push(vec![n - 1]);
            Cover { datum, orbits }
        }
        Series::F => Cover {
            datum: mk(Series::E, 6)?,
            orbits: vec![vec![1], vec![3], vec![2, 4], vec![0, 5]],
        },
        Series::G => Cover {
            datum: mk(Series::D, 4)?,
            orbits: vec![vec![0, 2, 3], vec![1]],
        },
    })
}

/// D3 in D-labelling: node 0 joined to nodes 1 and 2. Isomorphic to A3 but
/// labelled so that the B2 folding is the generic B_n one.
fn d3() -> CartanDatum {
    let m = crate::exactlin::IntMat::from_i64_rows(3, &[vec![2, -1, -1], vec![-1, 2, 0], vec![-1, 0, 2]])
        .expect("shape");
    CartanDatum::from_raw(
        TypeLabel {
            series: Series::D,
            rank: 3,
        },
        m,
    )
}

/// The simply-laced algebra on `h ⊕ ⊕ E_α`:
/// `[h_i, E_α] = (α_i, α) E_α`, `[E_α, E_{-α}] = -α`,
/// `[E_α, E_β] = ε(α, β) E_{α+β}` when `α + β` is a root.
struct SimplyLaced {
    dim: usize,
    rank: usize,
    table: StructureTable,
    index: HashMap<Vec<i64>, usize>,
}

fn epsilon(a: &CartanDatum, x: &[i64], y: &[i64]) -> i64 {
    let n = a.rank();
    let mut e = 0i64;
    for i in 0..n {
        e += x[i] * y[i];
        for j in i + 1..n {
            if a.entry(i, j) == -1 {
                e += x[i] * y[j];
            }
        }
    }
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn simply_laced(a: &CartanDatum) -> Result<SimplyLaced, ChevalleyError> {
    let r = a.rank();
    let pos = roots_from_cartan(a)?;
    let mut roots: Vec<Vec<i64>> = pos.iter().map(|x| x.coords().to_vec()).collect();
    roots.extend(pos.iter().map(|x| x.negate().coords().to_vec()));
    let nr = roots.len();
    let dim = nr + r;
    let index: HashMap<Vec<i64>, usize> =
        roots.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
    let mut table: StructureTable = vec![Vec::new(); dim * dim];
    let form = |x: &[i64], y: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..r {
            for j in 0..r {
                s += x[i] * a.entry(i, j) * y[j];
            }
        }
        s
    };
    for (ka, alpha) in roots.iter().enumerate() {
        for i in 0..r {
            let w = (0..r).map(|j| a.entry(i, j) * alpha[j]).sum::<i64>();
            if w != 0 {
                table[(nr + i) * dim + ka].push((ka, w));
                table[ka * dim + (nr + i)].push((ka, -w));
            }
        }
        for (kb, beta) in roots.iter().enumerate() {
            let s: Vec<i64> = alpha.iter().zip(beta).map(|(x, y)| x + y).collect();
            if s.iter().all(|&c| c == 0) {
                for (i, &c) in alpha.iter().enumerate() {
                    if c != 0 {
                        table[ka * dim + kb].push((nr + i, -c));
                    }
                }
            } else if let Some(&ks) = index.get(&s) {
                table[ka * dim + kb].push((ks, epsilon(a, alpha, beta)));
            }
        }
    }
    debug_assert!(roots.iter().all(|x| form(x, x) == 2));
    Ok(SimplyLaced {
        dim,
        rank: r,
        table,
        index,
    })
}

impl SimplyLaced {
    fn root_vector(&self, coords: &[i64]) -> Vector {
        let mut v = crate::exactlin::zero_vec(self.dim);
        v[self.index[coords]] = Scalar::one();
        v
    }

    fn cartan_vector(&self, i: usize) -> Vector {
        crate::exactlin::unit_vec(self.dim, self.dim - self.rank + i)
    }

    fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        sparse_bracket(self.dim, &self.table, x, y)
    }
}

/// Structure table for `c` in the basis `[e_β (β > 0)] ++ [h_1..h_r] ++ [f_β]`
/// with `roots` the positive roots in the canonical order.
pub(crate) fn chevalley_table(c: &CartanDatum, roots: &[Root]) -> Result<StructureTable, ChevalleyError> {
    let cover = cover_for(c.label())?;
    let big = simply_laced(&cover.datum)?;
    let cr = cover.datum.rank();
    let r = c.rank();
    let fail = |msg: String| ChevalleyError::Construction(msg);

    let sum_over = |orbit: &[usize], f: &dyn Fn(usize) -> Vector| -> Vector {
        let mut acc = crate::exactlin::zero_vec(big.dim);
        for &i in orbit {
            crate::exactlin::axpy(&mut acc, &Scalar::one(), &f(i));
        }
        acc
    };
    let e_gen: Vec<Vector> = cover
        .orbits
        .iter()
        .map(|o| sum_over(o, &|i| big.root_vector(Root::simple(cr, i).coords())))
        .collect();
    let f_gen: Vec<Vector> = cover
        .orbits
        .iter()
        .map(|o| {
            let s = sum_over(o, &|i| big.root_vector(Root::simple(cr, i).negate().coords()));
            scale(&s, &int(-1))
        })
        .collect();
    let h_gen: Vec<Vector> = cover
        .orbits
        .iter()
        .map(|o| sum_over(o, &|i| big.cartan_vector(i)))
        .collect();

    // [h_I, e_J] = a_IJ e_J must reproduce the requested Cartan matrix
    for i in 0..r {
        for j in 0..r {
            let lhs = big.bracket(&h_gen[i], &e_gen[j]);
            let rhs = scale(&e_gen[j], &int(c.entry(i, j)));
            if lhs != rhs {
                return Err(fail(format!("folded Cartan entry ({i},{j}) mismatch")));
            }
        }
        if big.bracket(&e_gen[i], &f_gen[i]) != h_gen[i] {
            return Err(fail(format!("[e_{i}, f_{i}] != h_{i}")));
        }
    }

    let lookup: HashMap<&[i64], usize> =
        roots.iter().enumerate().map(|(k, x)| (x.coords(), k)).collect();
    let mut pos: Vec<Vector> = Vec::with_capacity(roots.len());
    let mut neg: Vec<Vector> = Vec::with_capacity(roots.len());
    for xi in roots {
        if xi.height() == 1 {
            let i = xi.coords().iter().position(|&x| x == 1).expect("simple");
            pos.push(e_gen[i].clone());
            neg.push(f_gen[i].clone());
            continue;
        }
        let (i, kb) = (0..r)
            .find_map(|i| {
                let mut b = xi.coords().to_vec();
                b[i] -= 1;
                lookup.get(b.as_slice()).map(|&kb| (i, kb))
            })
            .ok_or_else(|| fail(format!("no simple decomposition for {xi}")))?;
        let beta = roots[kb].coords();
        let mut p = 0i64;
        let mut probe = beta.to_vec();
        loop {
            probe[i] -= 1;
            if lookup.contains_key(probe.as_slice()) {
                p += 1;
            } else {
                break;
            }
        }
        let inv = Scalar::new(One::one(), (p + 1).into());
        pos.push(scale(&big.bracket(&e_gen[i], &pos[kb]), &inv));
        neg.push(scale(&big.bracket(&f_gen[i], &neg[kb]), &-inv));
    }

    let basis: Vec<Vector> = pos.iter().chain(&h_gen).chain(&neg).cloned().collect();
    let dim = basis.len();
    let span = Subspace::from_vectors(big.dim, basis.iter().cloned());
    if span.dim() != dim {
        return Err(fail("Chevalley basis vectors are linearly dependent".into()));
    }
    let change: Vec<Vector> = basis
        .iter()
        .map(|b| span.coordinates(b).expect("in span"))
        .collect();
    let to_basis = Mat::from_rows(dim, &change)
        .and_then(|m| m.inverse())
        .map_err(|e| fail(e.to_string()))?;

    let mut table: StructureTable = vec![Vec::new(); dim * dim];
    for a in 0..dim {
        for b in a + 1..dim {
            let w = big.bracket(&basis[a], &basis[b]);
            let coords = span
                .coordinates(&w)
                .ok_or_else(|| fail(format!("bracket of basis {a},{b} leaves the subalgebra")))?;
            let coeffs = to_basis.left_apply(&coords);
            for (k, q) in coeffs.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                if !q.is_integer() {
                    return Err(fail(format!("non-integral constant in [{a},{b}]")));
                }
                let n = i64::try_from(q.numer()).map_err(|_| fail("constant overflow".into()))?;
                table[a * dim + b].push((k, n));
                table[b * dim + a].push((k, -n));
            }
        }
    }
    Ok(table)
}
