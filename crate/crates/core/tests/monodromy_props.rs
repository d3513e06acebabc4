mod common;

use common::{dense_monodromy_4v, dense_transfer_4v, random_gauss, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use qism_core::dense::DEFAULT_DENSE_CAP;
use qism_core::laurent::SpectralAssignment;
use qism_core::models::{self, Convention, FourVertexParams, SixVertexParams, XXXParams};
use qism_core::monodromy::{
    commutation_residual, four_vertex_r_candidates, monodromy, monodromy_symbolic, rll_residual_6v, transfer, yb_products,
    ybe_residual, ybe_residual_trig, AuxMonodromy, ModelParams, SiteOrder,
};
use qism_core::scalar::Scalar;
use rand::Rng;

fn four_v(u: &Scalar) -> ModelParams {
    ModelParams::FourVertex(FourVertexParams::new(u.clone()))
}

#[test]
fn symbolic_numeric_and_dense_oracle_agree() {
    let mut r = rng(1);
    for n in 2..=6 {
        let sym = monodromy_symbolic(Convention::C1, n, SiteOrder::Ascending).unwrap();
        for _ in 0..20 {
            let u0 = random_gauss(&mut r);
            let u = Scalar::from(u0.clone());
            let evaluated = sym.evaluate(&SpectralAssignment::u(u.clone())).unwrap();
            let numeric = monodromy(&four_v(&u), n, SiteOrder::Ascending).unwrap();
            let oracle = dense_monodromy_4v(&u0, n);
            for i in 0..2 {
                for j in 0..2 {
                    let e = evaluated.entry(i, j).densify_exact().unwrap();
                    assert_eq!(e, numeric.entry(i, j).densify_exact().unwrap(), "n = {n} cell ({i},{j})");
                    assert_eq!(e, oracle[i][j], "n = {n} cell ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn block_products_associate() {
    let mut r = rng(2);
    let u = Scalar::from(random_gauss(&mut r));
    let p = FourVertexParams::new(u.clone());
    let l: Vec<AuxMonodromy<_>> = (0..3).map(|k| models::l4v_numeric(k, &p, 3).unwrap()).collect();
    let left = l[0].mul(&l[1]).unwrap().mul(&l[2]).unwrap();
    let right = l[0].mul(&l[1].mul(&l[2]).unwrap()).unwrap();
    for (a, b) in left.cells().iter().zip(right.cells()) {
        assert_eq!(a.densify_exact().unwrap(), b.densify_exact().unwrap());
    }
    let s: Vec<_> = (0..3).map(|k| models::l4v(k, Convention::C1, 3).unwrap()).collect();
    let left = s[0].mul(&s[1]).unwrap().mul(&s[2]).unwrap();
    let right = s[0].mul(&s[1].mul(&s[2]).unwrap()).unwrap();
    assert_eq!(left, right);
}

#[test]
fn four_vertex_transfer_commutes_exactly_up_to_eight_sites() {
    let mut r = rng(3);
    for n in 1..=8 {
        for _ in 0..10 {
            let (u, v) = (Scalar::from(random_gauss(&mut r)), Scalar::from(random_gauss(&mut r)));
            let res = commutation_residual(&four_v(&u), &u, &v, n, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap();
            assert_eq!(res, 0.0, "n = {n}");
        }
    }
}

#[test]
fn transfer_matches_dense_oracle() {
    let mut r = rng(4);
    for n in 1..=5 {
        let u0 = random_gauss(&mut r);
        let t = transfer(&four_v(&Scalar::from(u0.clone())), n, SiteOrder::Ascending).unwrap();
        assert_eq!(t.densify_exact().unwrap(), dense_transfer_4v(&u0, n));
    }
}

#[test]
fn both_conventions_and_orders_commute() {
    let mut r = rng(5);
    for conv in Convention::all() {
        for order in [SiteOrder::Ascending, SiteOrder::Descending] {
            for n in 1..=5 {
                let (u, v) = (Scalar::from(random_gauss(&mut r)), Scalar::from(random_gauss(&mut r)));
                let p = ModelParams::FourVertex(FourVertexParams::new(u.clone()).with_convention(conv));
                assert_eq!(commutation_residual(&p, &u, &v, n, order, DEFAULT_DENSE_CAP).unwrap(), 0.0);
            }
        }
    }
}

#[test]
fn xxx_transfer_commutes() {
    let mut r = rng(6);
    for two_s in [1, 2] {
        for n in 1..=6 {
            for _ in 0..10 {
                let l = Scalar::float(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
                let m = Scalar::float(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
                let p = ModelParams::XXX(XXXParams::new(l.clone(), two_s));
                let res = commutation_residual(&p, &l, &m, n, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap();
                assert!(res <= 1e-10, "2s = {two_s}, n = {n}: {res}");
            }
        }
    }
}

#[test]
fn xxx_exact_small_chain() {
    let mut r = rng(7);
    for two_s in [1, 2, 3] {
        let (l, m) = (Scalar::from(random_gauss(&mut r)), Scalar::from(random_gauss(&mut r)));
        let p = ModelParams::XXX(XXXParams::new(l.clone(), two_s));
        assert_eq!(commutation_residual(&p, &l, &m, 3, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap(), 0.0);
    }
}

#[test]
fn six_vertex_transfer_commutes_with_inhomogeneities() {
    let mut r = rng(8);
    for n in 1..=6 {
        let eta = Complex64::new(r.gen_range(0.2..1.2), 0.0);
        let lam = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-0.5..0.5));
        let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(r.gen_range(-0.5..0.5), 0.0)).collect();
        let p = ModelParams::SixVertex(SixVertexParams { v, ..SixVertexParams::trig(lam, eta) });
        let mu = Scalar::float(r.gen_range(-1.0..1.0), r.gen_range(-0.5..0.5));
        let res = commutation_residual(&p, &Scalar::Float(lam), &mu, n, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap();
        assert!(res <= 1e-10, "n = {n}: {res}");
    }
}

#[test]
fn yang_baxter_equation_trig() {
    let mut r = rng(9);
    for _ in 0..10 {
        let x = Complex64::new(r.gen_range(-1.5..1.5), r.gen_range(-0.5..0.5));
        let y = Complex64::new(r.gen_range(-1.5..1.5), r.gen_range(-0.5..0.5));
        let eta = Complex64::new(r.gen_range(0.1..1.4), 0.0);
        assert!(ybe_residual_trig(x, y, eta).unwrap() <= 1e-12);
    }
    // a generic (a, b, c) triple not on the trigonometric curve fails
    let one = Complex64::new(1.0, 0.0);
    let r1 = models::r6v_weights(one, 0.3 * one, 0.9 * one, 0.0, 0.0);
    let r2 = models::r6v_weights(one, 0.7 * one, 0.2 * one, 0.0, 0.0);
    let r3 = models::r6v_weights(one, 0.1 * one, 0.5 * one, 0.0, 0.0);
    assert!(ybe_residual(&r1, &r2, &r3).unwrap() > 1e-3);
}

#[test]
fn six_vertex_rll_needs_doubled_crossing() {
    let mut r = rng(10);
    let mut worst_eta: f64 = 0.0;
    for _ in 0..10 {
        let l = Complex64::new(r.gen_range(-1.5..1.5), r.gen_range(-0.5..0.5));
        let m = Complex64::new(r.gen_range(-1.5..1.5), r.gen_range(-0.5..0.5));
        let eta = Complex64::new(r.gen_range(0.1..1.4), 0.0);
        let v = Complex64::new(r.gen_range(-0.5..0.5), 0.0);
        assert!(rll_residual_6v(l, m, eta, v, 2.0).unwrap() <= 1e-12);
        worst_eta = worst_eta.max(rll_residual_6v(l, m, eta, v, 1.0).unwrap());
    }
    assert!(worst_eta > 1e-3);
}

#[test]
fn four_vertex_r_candidates_report() {
    let mut r = rng(11);
    for _ in 0..5 {
        let u = Complex64::new(r.gen_range(0.3..2.0), r.gen_range(-1.0..1.0));
        let v = Complex64::new(r.gen_range(0.3..2.0), r.gen_range(-1.0..1.0));
        let c = four_vertex_r_candidates(u, v, Convention::C1).unwrap();
        assert_eq!(c.len(), 8);
        let passing: Vec<_> = c.iter().filter(|x| x.residual <= 1e-12).collect();
        assert_eq!(passing.len(), 1);
        assert_eq!(passing[0].name, "asymmetric b = 0 degeneration");
        assert!(passing[0].check_form);
    }
}

#[test]
fn yb_products_battery() {
    let mut r = rng(12);
    for n in 1..=6 {
        let (u, v) = (Scalar::from(random_gauss(&mut r)), Scalar::from(random_gauss(&mut r)));
        let rep = yb_products(&FourVertexParams::new(u), &v, n, SiteOrder::Ascending).unwrap();
        assert_eq!(rep.rows.len(), 16);
        assert_eq!(rep.products.len(), 16);
        assert_eq!(rep.rows[0].label, "C1");
        assert_eq!(rep.rows[15].label, "C16");
        assert_eq!(rep.rows[15].pair, "DD");
        assert_eq!(rep.transfer_commutator_norm, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residual_symmetric_and_zero_on_diagonal(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let u = Scalar::float(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
        let v = Scalar::float(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
        let p = ModelParams::XXX(XXXParams::new(u.clone(), 1));
        let q = ModelParams::XXX(XXXParams::new(v.clone(), 1));
        let uv = commutation_residual(&p, &u, &v, n, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap();
        let vu = commutation_residual(&q, &v, &u, n, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap();
        prop_assert!((uv - vu).abs() <= 1e-12);
        prop_assert_eq!(commutation_residual(&p, &u, &u, n, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap(), 0.0);
    }
}
