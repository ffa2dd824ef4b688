mod common;

use common::{rng, snc_system, vandermonde_det};
use num_complex::Complex64;
use snc::channel::ChannelModel;
use snc::linalg::{determinant, numerical_rank, CMatrix};
use snc::snc::{check_precoder_ranks, cross_gain, theoretical_dof, verify_alignment, RANK_REL_TOL};

/// `det(G12^{-n} V_1)` for K = 2 against the Vandermonde product in the
/// nodes `G22 / G12`, accounting for the global power scale.
#[test]
fn scaled_direct_precoder_is_vandermonde() {
    let mut r = rng(100);
    for n in 1..=4 {
        for _ in 0..25 {
            let s = snc_system(2, n, ChannelModel::Complex, &mut r);
            let g12 = cross_gain(&s.h, 0, 1).unwrap();
            let g22 = cross_gain(&s.h, 1, 1).unwrap();
            let n_ext = s.plan.n_ext();
            let mut m = s.p.v(0).clone();
            for i in 0..n_ext {
                let d = g12[i].powi(-(n as i32));
                for c in 0..n_ext {
                    m[(i, c)] *= d;
                }
            }
            let nodes: Vec<Complex64> = (0..n_ext).map(|i| g22[i] / g12[i]).collect();
            let expect = vandermonde_det(&nodes) * s.p.power_scale().powi(n_ext as i32);
            let got = determinant(&m);
            assert!(
                (got - expect).norm() <= 1e-6 * expect.norm(),
                "n={n}: {got} vs {expect}"
            );
        }
    }
}

#[test]
fn precoders_have_full_rank_and_align() {
    let mut r = rng(101);
    for (k, n) in [(2, 1), (2, 2), (2, 3), (3, 1)] {
        for _ in 0..100 {
            let s = snc_system(k, n, ChannelModel::Complex, &mut r);
            let report = check_precoder_ranks(&s.p, &s.plan).unwrap();
            assert_eq!(report.ranks, report.expected);
            let a = verify_alignment(&s.h, &s.p);
            assert!(a.aligned, "K={k} n={n}: {:?}", a.first_failure);
        }
    }
}

#[test]
fn residual_interference_vanishes_outside_row_support() {
    let mut r = rng(102);
    for (k, n) in [(2, 1), (2, 2), (2, 3), (3, 1)] {
        for _ in 0..50 {
            let s = snc_system(k, n, ChannelModel::Complex, &mut r);
            let f = s.eff.f_real();
            for row in 0..f.nrows() {
                let support = &s.eff.row_support()[row];
                for k2 in 0..k {
                    for c in 0..s.eff.streams(k2) {
                        let z = f[(row, s.eff.stream_offset(k2) + c)];
                        if support.contains(&(k2, c)) {
                            assert!((z - 1.0).norm() < 1e-6);
                        } else {
                            assert!(z.norm() < 1e-6, "row {row} ({k2},{c}) = {z}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn effective_matrix_is_channel_independent_and_full_rank() {
    let mut r = rng(103);
    for (k, n) in [(2, 1), (2, 2), (2, 3), (3, 1)] {
        let first = snc_system(k, n, ChannelModel::Complex, &mut r);
        let dof = theoretical_dof(&first.plan);
        let total = first.plan.total_streams();
        assert!((dof.total - total as f64 / first.plan.n_ext() as f64).abs() < 1e-12);
        assert_eq!(first.eff.f_int().exact_rank(), Ok(total));
        assert_eq!(numerical_rank(first.eff.f_real(), RANK_REL_TOL), total);
        for model in [ChannelModel::Complex, ChannelModel::Real] {
            for _ in 0..20 {
                let s = snc_system(k, n, model, &mut r);
                assert_eq!(s.eff.f_int(), first.eff.f_int());
            }
        }
    }
}

#[test]
fn every_stream_is_decoded_somewhere() {
    let mut r = rng(104);
    let s = snc_system(2, 1, ChannelModel::Complex, &mut r);
    let mut covered = [vec![false; 2], vec![false; 1]];
    for row in s.eff.row_support() {
        for &(k, c) in row {
            covered[k][c] = true;
        }
    }
    assert!(covered.iter().flatten().all(|&c| c));
}

#[test]
fn determinant_helper_on_known_matrix() {
    let m = CMatrix::from_row_slice(
        3,
        3,
        &[1.0, 1.0, 1.0, 1.0, 2.0, 4.0, 1.0, 3.0, 9.0].map(|x| Complex64::new(x, 0.0)),
    );
    let nodes = [1.0, 2.0, 3.0].map(|x| Complex64::new(x, 0.0));
    // (2-1)(3-1)(3-2) = 2
    assert!((determinant(&m) - 2.0).norm() < 1e-12);
    assert!((vandermonde_det(&nodes) - 2.0).norm() < 1e-12);
}
