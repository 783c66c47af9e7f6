use std::sync::Arc;

use num_bigint::BigInt;
use workbench_core::chevalley::{build_algebra, CartanDatum, ChevalleyAlgebra, Root};
use workbench_core::exactlin::{add, zero_vec, Subspace, Vector};
use workbench_core::parabolic::{build_parabolic, ParabolicDatum, ParabolicError};
use workbench_core::suites::default_case_matrix;

fn datum(label: &str, gamma: &[usize]) -> ParabolicDatum {
    let alg = build_algebra(&CartanDatum::parse(label).unwrap()).unwrap();
    build_parabolic(Arc::new(alg), gamma).unwrap()
}

fn root_vector(alg: &ChevalleyAlgebra, coords: &[i64]) -> Vector {
    alg.basis_vector(alg.root_vector_index(&Root::new(coords.to_vec()).unwrap()).unwrap())
}

#[test]
fn a1_borel_dossier() {
    let pd = datum("A1", &[]);
    assert_eq!(pd.p.dim(), 2);
    assert_eq!(pd.u.dim(), 1);
    assert_eq!(pd.a_p.dim(), 1);
    assert_eq!(pd.p_derived_perp.dim(), 2);
    assert_eq!(pd.twist_space.dim(), 1);
    assert_eq!(pd.p_derived_perp, pd.p);
}

#[test]
fn a2_borel_dossier() {
    let pd = datum("A2", &[]);
    assert_eq!(pd.p.dim(), 5);
    assert_eq!(pd.u.dim(), 3);
    assert_eq!(pd.u_derived.dim(), 1);
    assert_eq!(pd.a_u.dim(), 2);
    assert_eq!(pd.a_p.dim(), 2);
    assert_eq!(pd.p_derived_perp.dim(), 5);
    let rep = pd.dimension_report();
    assert_eq!((rep.dim_c, rep.dim_uc, rep.leaf_dim), (3, 8, 6));
}

#[test]
fn a2_gamma1_dossier() {
    let pd = datum("A2", &[0]);
    let rep = pd.dimension_report();
    assert_eq!(rep.dim_p, 6);
    assert_eq!(rep.dim_p_derived, 5);
    assert_eq!(rep.dim_c, 2);
    assert_eq!(rep.dim_p_derived_perp, 3);
    assert_eq!(rep.torus_rank, 1);
    assert_eq!(rep.dim_uc, 5);
    assert_eq!(rep.leaf_dim, 4);
}

#[test]
fn whole_algebra_dossier() {
    for (label, rank) in [("A2", 2), ("B3", 3), ("G2", 2)] {
        let all: Vec<usize> = (0..rank).collect();
        let pd = datum(label, &all);
        assert!(pd.is_whole_algebra());
        assert!(pd.p.is_full() && pd.u.is_zero() && pd.p_derived_perp.is_zero());
        assert_eq!((pd.a_p.dim(), pd.torus_rank), (0, 0));
        let rep = pd.dimension_report();
        assert_eq!((rep.dim_c, rep.leaf_dim), (0, 0));
        let cert = pd.find_richardson().unwrap();
        assert_eq!(cert.element, zero_vec(pd.alg().dim()));
        assert!(cert.is_open && cert.tangent.is_zero());
        assert!(pd.hypothesis_h1().holds);
        assert!(pd.fixedpoint_check());
    }
}

#[test]
fn identities_hold_on_the_default_matrix() {
    for case in default_case_matrix(true, 0, 1) {
        let alg = build_algebra(&CartanDatum::from_label(case.type_label)).unwrap();
        let pd = build_parabolic(Arc::new(alg), &case.gamma_zero_based()).unwrap();
        for c in pd.identity_checks() {
            assert!(c.holds, "{case}: {} ({})", c.name, c.detail);
        }
        let rank = pd.alg().rank();
        assert_eq!(pd.a_p.dim(), rank - case.gamma.len(), "{case}");
        assert_eq!(pd.twist_space.dim(), pd.torus_rank, "{case}");
        assert_eq!(pd.pairing_gram().rank(), pd.torus_rank, "{case}");
        assert!(pd.p_derived_perp.is_subspace_of(&pd.p), "{case}");
        assert_eq!(pd.p_perp, pd.u, "{case}");
        assert!(pd.dimension_report().leaf_identity_holds(), "{case}");
        assert!(pd.fixedpoint_check(), "{case}");
    }
}

#[test]
fn richardson_examples() {
    let pd = datum("A2", &[]);
    let alg = pd.alg();
    let x = add(
        &add(&root_vector(alg, &[1, 0]), &root_vector(alg, &[0, 1])),
        &root_vector(alg, &[1, 1]),
    );
    let cert = pd.certify(x);
    assert!(cert.is_open);
    assert_eq!(cert.tangent, pd.u);

    let pd = datum("A2", &[0]);
    let alg = pd.alg();
    let x = add(&root_vector(alg, &[0, 1]), &root_vector(alg, &[1, 1]));
    let cert = pd.certify(x);
    assert!(cert.is_open);
    assert_eq!(cert.tangent.dim(), 2);

    // a single root vector of u is not Richardson in the Borel of A2
    let pd = datum("A2", &[]);
    let cert = pd.certify(root_vector(pd.alg(), &[1, 1]));
    assert!(!cert.is_open);
    assert!(matches!(pd.torsor_certificate(&cert), Err(ParabolicError::NotOpen)));
}

#[test]
fn torsor_examples() {
    let one = BigInt::from(1);
    for (label, gamma, invariants) in [("A1", vec![], 1usize), ("A2", vec![], 2), ("A2", vec![0], 1)] {
        let pd = datum(label, &gamma);
        let cert = pd.find_richardson().unwrap();
        let t = pd.torsor_certificate(&cert).unwrap();
        assert!(t.infinitesimal_free && t.lattice_generating, "{label}");
        assert_eq!(t.stabilizer_dim, 0);
        assert_eq!(t.invariants, vec![one.clone(); invariants]);
    }
}

#[test]
fn a2_gamma1_characters_restrict_to_one_generator() {
    let pd = datum("A2", &[0]);
    let cert = pd.find_richardson().unwrap();
    let chars = pd.character_set(&cert.element).characters;
    assert_eq!(chars.cols(), 1);
    for i in 0..chars.rows() {
        assert_eq!(chars.get_i64(i, 0), 1);
    }
}

#[test]
fn h1_examples() {
    for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"] {
        assert!(datum(label, &[]).hypothesis_h1().holds, "{label}");
    }
    let h1 = datum("A2", &[0]).hypothesis_h1();
    assert!(!h1.holds);
    let w = h1.witness.unwrap();
    assert_eq!((w.left.as_str(), w.right.as_str()), ("e[α1]", "e[α2]"));
    assert!(w.bracket == "e[α1+α2]" || w.bracket == "-e[α1+α2]", "{}", w.bracket);
}

#[test]
fn gamma_out_of_range() {
    let alg = Arc::new(build_algebra(&CartanDatum::parse("A2").unwrap()).unwrap());
    assert!(matches!(
        build_parabolic(alg, &[2]),
        Err(ParabolicError::GammaOutOfRange { index: 2, rank: 2 })
    ));
}

#[test]
fn levi_contains_exactly_the_gamma_roots() {
    let pd = datum("B3", &[0, 2]);
    let alg = pd.alg();
    let h = alg.cartan_subalgebra();
    let l_roots: Vec<Vector> = pd
        .roots_of_p()
        .into_iter()
        .filter(|r| r.supported_on(&pd.gamma))
        .map(|r| alg.basis_vector(alg.root_vector_index(&r).unwrap()))
        .collect();
    let expect = h.sum(&Subspace::from_vectors(alg.dim(), l_roots)).unwrap();
    assert_eq!(pd.levi, expect);
    assert_eq!(pd.levi.dim(), 3 + 4);
    assert!(pd.levi.basis_vectors().all(|v| pd.p.contains(v)));
    assert_eq!(pd.p.dim(), pd.levi.dim() + pd.u.dim());
    assert_eq!(pd.torus_rank, 1);
}
