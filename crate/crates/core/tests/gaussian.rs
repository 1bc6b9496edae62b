use std::f64::consts::{LN_2, PI};

use cvtele::gaussian::*;
use nalgebra::{DMatrix, Matrix2};
use proptest::prelude::*;

fn beam_splitter(theta: f64) -> SymplecticMatrix {
    let (c, s) = (theta.cos(), theta.sin());
    let mut m = DMatrix::zeros(4, 4);
    for q in 0..2 {
        m[(q, q)] = c;
        m[(q, 2 + q)] = s;
        m[(2 + q, q)] = -s;
        m[(2 + q, 2 + q)] = c;
    }
    SymplecticMatrix::new(m, 1e-12).unwrap()
}

/// Product of rotations, squeezers and a beam splitter on two modes.
fn random_symplectic(p: &[f64; 7]) -> SymplecticMatrix {
    let rot = SymplecticMatrix::phase_rotation(&[p[0], p[1]]);
    let sq = SymplecticMatrix::single_mode_squeezer(2, 0, p[2])
        .compose(&SymplecticMatrix::single_mode_squeezer(2, 1, p[3]))
        .unwrap();
    let rot2 = SymplecticMatrix::phase_rotation(&[p[4], p[5]]);
    rot.compose(&sq)
        .unwrap()
        .compose(&beam_splitter(p[6]))
        .unwrap()
        .compose(&rot2)
        .unwrap()
}

fn local_symplectic(p: &[f64; 7]) -> SymplecticMatrix {
    SymplecticMatrix::phase_rotation(&[p[0], p[1]])
        .compose(&SymplecticMatrix::single_mode_squeezer(2, 0, p[2]))
        .unwrap()
        .compose(&SymplecticMatrix::single_mode_squeezer(2, 1, p[3]))
        .unwrap()
        .compose(&SymplecticMatrix::phase_rotation(&[p[4], p[5]]))
        .unwrap()
}

/// Williamson form `S diag(n1, n1, n2, n2) S^T`.
fn thermal_state(n1: f64, n2: f64, p: &[f64; 7]) -> CovarianceMatrix {
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![n1, n1, n2, n2]));
    let s = random_symplectic(p);
    let m = s.data() * d * s.data().transpose();
    CovarianceMatrix::new(0.5 * (&m + m.transpose())).unwrap()
}

/// Closed-form partial-transpose eigenvalue from the local invariants.
fn pt_nu_invariants(sigma: &CovarianceMatrix) -> f64 {
    let (a, b, c) = (sigma.block(0, 0), sigma.block(1, 1), sigma.block(0, 1));
    let delta = a.determinant() + b.determinant() - 2.0 * c.determinant();
    let det = sigma.determinant();
    ((delta - (delta * delta - 4.0 * det).sqrt()) / 2.0).sqrt()
}

fn params() -> impl Strategy<Value = [f64; 7]> {
    (
        -PI..PI,
        -PI..PI,
        -0.8f64..0.8,
        -0.8f64..0.8,
        -PI..PI,
        -PI..PI,
        -PI..PI,
    )
        .prop_map(|(a, b, c, d, e, f, g)| [a, b, c, d, e, f, g])
}

#[test]
fn tms_eigenvalue_anchor() {
    for r in [0.1, 0.5, LN_2, 1.5] {
        let tms = make_two_mode_squeezed(r).unwrap();
        assert!((partial_transpose_nu(&tms).unwrap() - (-2.0 * r).exp()).abs() < 1e-9);
        assert!((optimal_fidelity_bound(&tms).unwrap() - 1.0 / (1.0 + (-2.0 * r).exp())).abs() < 1e-12);
        let nus = symplectic_eigenvalues(tms.data()).unwrap();
        assert!(nus.iter().all(|n| (n - 1.0).abs() < 1e-9), "{nus:?}");
    }
}

#[test]
fn classical_benchmark() {
    let vac = make_two_mode_squeezed(0.0).unwrap();
    assert!((teleport_fidelity(&vac).unwrap() - 0.5).abs() < 1e-12);
    assert!((optimal_fidelity_bound(&vac).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn rotated_tms_closed_form() {
    let tms = make_two_mode_squeezed(0.5).unwrap();
    let rotated = tms.transform(&local_rotation(PI, 0.0)).unwrap();
    assert!((teleport_fidelity(&rotated).unwrap() - 1.0 / (1.0 + std::f64::consts::E)).abs() < 1e-9);
}

#[test]
fn embed_then_reduce_roundtrip() {
    let tms = make_two_mode_squeezed(0.7).unwrap();
    let big = embed_with_vacuum(&tms, 3, 10).unwrap();
    assert_eq!(big.n_modes(), 11);
    assert_eq!(reduce(&big, &[0, 3]).unwrap(), tms);
    assert_eq!(reduce(&big, &[5]).unwrap(), CovarianceMatrix::vacuum(1));
    assert!(big.is_physical());
    assert!(embed_with_vacuum(&tms, 11, 10).is_err());
    assert!(reduce(&big, &[0, 0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn global_symplectic_preserves_spectrum(p in params(), n1 in 1.0f64..3.0, n2 in 1.0f64..3.0) {
        let sigma = thermal_state(n1, n2, &[0.0; 7]);
        let moved = sigma.transform(&random_symplectic(&p)).unwrap();
        let nus = symplectic_eigenvalues(moved.data()).unwrap();
        let mut want = [n1, n2];
        want.sort_by(f64::total_cmp);
        prop_assert!((nus[0] - want[0]).abs() < 1e-8 * want[0].max(1.0));
        prop_assert!((nus[1] - want[1]).abs() < 1e-8 * want[1].max(1.0));
    }

    #[test]
    fn local_symplectic_preserves_entanglement(p in params(), q in params(), r in 0.0f64..1.5) {
        let tms = make_two_mode_squeezed(r).unwrap();
        let mixed = tms.transform(&beam_splitter(q[6] * 0.2)).unwrap();
        let before = partial_transpose_nu(&mixed).unwrap();
        let after = partial_transpose_nu(&mixed.transform(&local_symplectic(&p)).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-9 * before.max(1.0));
    }

    #[test]
    fn partial_transpose_matches_invariants(p in params(), n1 in 1.0f64..2.0, n2 in 1.0f64..2.0) {
        let sigma = thermal_state(n1, n2, &p);
        let nu = partial_transpose_nu(&sigma).unwrap();
        prop_assert!((nu - pt_nu_invariants(&sigma)).abs() < 1e-7 * nu.max(1.0));
    }

    #[test]
    fn fidelity_depends_on_phase_sum(r in 0.0f64..2.0, ta in -PI..PI, tb in -PI..PI, shift in -PI..PI) {
        let tms = make_two_mode_squeezed(r).unwrap();
        let f1 = teleport_fidelity(&tms.transform(&local_rotation(ta, tb)).unwrap()).unwrap();
        let f2 = teleport_fidelity(&tms.transform(&local_rotation(ta + shift, tb - shift)).unwrap()).unwrap();
        prop_assert!((f1 - f2).abs() < 1e-9);
        let phi = ta + tb;
        let closed = 1.0 / (1.0 + (2.0 * r).cosh() - phi.cos() * (2.0 * r).sinh());
        prop_assert!((f1 - closed).abs() < 1e-9);
    }

    #[test]
    fn fidelity_never_exceeds_bound(p in params(), r in 0.0f64..1.5) {
        let tms = make_two_mode_squeezed(r).unwrap();
        let sigma = tms.transform(&local_symplectic(&p)).unwrap();
        prop_assert!(teleport_fidelity(&sigma).unwrap() <= optimal_fidelity_bound(&sigma).unwrap() + 1e-12);
    }

    #[test]
    fn noise_matrix_closed_form(r in 0.0f64..2.0) {
        let tms = make_two_mode_squeezed(r).unwrap();
        let n = teleportation_noise_matrix(&tms);
        let expect = Matrix2::identity() * (2.0 * (2.0 * r).cosh() - 2.0 * (2.0 * r).sinh());
        prop_assert!((n - expect).amax() < 1e-9 * (2.0 * r).cosh());
    }
}

#[test]
fn rejects_unphysical() {
    let m = DMatrix::identity(4, 4) * 0.5;
    assert!(matches!(CovarianceMatrix::new(m), Err(cvtele::Error::Unphysical { .. })));
    let mut m = DMatrix::identity(4, 4);
    m[(0, 1)] = 0.3;
    assert!(matches!(CovarianceMatrix::new(m), Err(cvtele::Error::NotSymmetric(_))));
}
