mod common;

use std::collections::BTreeMap;

use common::{atom_expr, poly_add, poly_mul, poly_scale, random_expr, random_poly_expr, rng, Bivector, Poly, K};
use num_rational::BigRational;
use proptest::prelude::*;
use qism_core::poisson::{
    count_elementary, evaluate_with_table, expand, expand_with, jacobi_residual, structure_check, substitute, Atom, ElemBracketTable,
    Fallback, PExpr, Strategy, SubstituteMode, TableValue, ValueExpr, BLOCK_SIZES,
};
use qism_core::scalar::Scalar;
use qism_core::QismError;
use rand::Rng;

fn value_via_library(e: &PExpr, bv: &Bivector) -> Poly {
    let table = bv.table();
    let vars = BTreeMap::new();
    let p = if e.depth() == 0 {
        evaluate_with_table(e, &table, &vars, SubstituteMode::Strict).unwrap()
    } else {
        substitute(&expand(e).unwrap(), &table, &vars, SubstituteMode::Strict).unwrap()
    };
    bv.from_genpoly(&p)
}

fn neg(p: &Poly) -> Poly {
    poly_scale(p, &BigRational::from_integer((-1).into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expansion_agrees_with_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bv = Bivector::random(K, &mut r);
        let e = PExpr::bracket(random_expr(&mut r, 1), random_expr(&mut r, 1));
        prop_assert_eq!(value_via_library(&e, &bv), bv.eval(&e));
        prop_assert_eq!(evaluate_with_table(&e, &bv.table(), &BTreeMap::new(), SubstituteMode::Strict).map(|p| bv.from_genpoly(&p)).unwrap(), bv.eval(&e));
    }

    #[test]
    fn bilinear_antisymmetric_leibniz(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bv = Bivector::random(K, &mut r);
        let (f, g, h) = (random_poly_expr(&mut r), random_poly_expr(&mut r), random_poly_expr(&mut r));
        let c = r.gen_range(-5i64..=5);
        let br = |a: &PExpr, b: &PExpr| value_via_library(&PExpr::bracket(a.clone(), b.clone()), &bv);
        let plain = |a: &PExpr| bv.eval(a);
        // {f + c g, h} = {f, h} + c {g, h}
        let lhs = br(&PExpr::Sum(vec![f.clone(), PExpr::scale(Scalar::int(c), g.clone())]), &h);
        let rhs = poly_add(&br(&f, &h), &poly_scale(&br(&g, &h), &BigRational::from_integer(c.into())));
        prop_assert_eq!(lhs, rhs);
        // {f, g} = −{g, f}
        prop_assert_eq!(br(&f, &g), neg(&br(&g, &f)));
        // {f g, h} = f {g, h} + {f, h} g
        let lhs = br(&PExpr::Product(vec![f.clone(), g.clone()]), &h);
        let rhs = poly_add(&poly_mul(&plain(&f), &br(&g, &h)), &poly_mul(&br(&f, &h), &plain(&g)));
        prop_assert_eq!(lhs, rhs);
        // the symbolic form is antisymmetric before substitution too
        let fg = expand(&PExpr::bracket(f.clone(), g.clone())).unwrap();
        let gf = expand(&PExpr::bracket(g.clone(), f.clone())).unwrap();
        prop_assert_eq!(fg.poly, gf.poly.scale(&Scalar::int(-1)));
    }

    #[test]
    fn strategies_are_confluent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = PExpr::bracket(random_expr(&mut r, 2), random_expr(&mut r, 2));
        prop_assert_eq!(expand_with(&e, Strategy::LeftFirst, 6).unwrap(), expand_with(&e, Strategy::RightFirst, 6).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jacobi_holds_for_constant_brackets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bv = Bivector::random(K, &mut r);
        let (f, g, h) = (random_expr(&mut r, 1), random_expr(&mut r, 1), random_expr(&mut r, 1));
        let rep = jacobi_residual(&f, &g, &h, &bv.table(), &BTreeMap::new()).unwrap();
        prop_assert!(rep.constant_table);
        prop_assert!(rep.holds(), "residual {}", rep.residual);
    }
}

#[test]
fn nested_depth_three_against_oracle() {
    let mut r = rng(31);
    for _ in 0..40 {
        let bv = Bivector::random(K, &mut r);
        let e = PExpr::bracket(random_expr(&mut r, 1), random_expr(&mut r, 1));
        let e = PExpr::bracket(atom_expr(r.gen_range(0..K)), e);
        assert!(e.depth() <= 3);
        assert_eq!(value_via_library(&e, &bv), bv.eval(&e));
    }
}

#[test]
fn elementary_counts_are_products() {
    for m in 1..=8 {
        for n in 1..=8 {
            assert_eq!(count_elementary(m, n).unwrap(), m * n, "{m} x {n}");
        }
    }
    assert_eq!(count_elementary(3, 3).unwrap(), 9);
    assert_eq!(count_elementary(4, 4).unwrap(), 16);
    assert!(matches!(count_elementary(0, 3), Err(QismError::InvalidParameter(_))));
}

#[test]
fn structure_counts() {
    let reports = structure_check().unwrap();
    assert_eq!(reports.len(), 2);
    for rep in &reports {
        assert_eq!(rep.total_brackets, 16);
        for (i, row) in rep.counts().iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                assert_eq!(k, BLOCK_SIZES[i] * BLOCK_SIZES[j]);
            }
        }
        for g in &rep.groups {
            for e in &g.entries {
                // a generator meets itself at the other tag only on diagonal blocks
                let want = if e.left_block == e.right_block { BLOCK_SIZES[e.left_block - 1] } else { 0 };
                assert_eq!(e.diagonal, want);
            }
        }
    }
    assert!(reports[1].groups[2].completed);
    assert!(!reports[0].groups.iter().any(|g| g.completed));
}

#[test]
fn diagonal_table_substitution() {
    let t = ElemBracketTable::inverse_difference_diagonal();
    assert!(t.any_approximate());
    let e = PExpr::parse("{X(u), X(u')}").unwrap();
    let vars = BTreeMap::from([("u".to_string(), Scalar::int(3)), ("u'".to_string(), Scalar::int(1))]);
    let p = substitute(&expand(&e).unwrap(), &t, &vars, SubstituteMode::Strict).unwrap();
    assert_eq!(p.constant_value(), Some(Scalar::ratio(1, 2)));
    // the diagonal rule does not apply to distinct names
    let e = PExpr::parse("{X(u), Y(u')}").unwrap();
    assert!(matches!(substitute(&expand(&e).unwrap(), &t, &vars, SubstituteMode::Strict), Err(QismError::UnresolvedBracket(_))));
}

#[test]
fn table_lookup_is_antisymmetric_and_polynomial_values_resolve() {
    let mut t = ElemBracketTable::new();
    let (x, y, z) = (Atom::new("x", ""), Atom::new("y", ""), Atom::new("z", ""));
    t.insert(x.clone(), y.clone(), TableValue::Value(ValueExpr::parse("2*a").unwrap()), false).unwrap();
    let vars = BTreeMap::from([("a".to_string(), Scalar::int(5))]);
    assert_eq!(t.lookup(&y, &x, &vars).unwrap().and_then(|p| p.constant_value()), Some(Scalar::int(-10)));
    assert!(t.lookup(&x, &x, &vars).unwrap().unwrap().is_zero());
    assert!(t.lookup(&x, &z, &vars).unwrap().is_none());
    t.fallback = Fallback::Zero;
    assert!(t.lookup(&x, &z, &vars).unwrap().unwrap().is_zero());

    // {x, y} = z is a non-constant table; the bracket {x, y*y} = 2 y z
    let mut t = ElemBracketTable::new();
    t.insert(x.clone(), y.clone(), TableValue::Poly(qism_core::poisson::GenPoly::atom(z.clone())), false).unwrap();
    assert!(!t.is_constant());
    let p = substitute(&expand(&PExpr::parse("{x, y*y}").unwrap()).unwrap(), &t, &BTreeMap::new(), SubstituteMode::Strict).unwrap();
    let vals = BTreeMap::from([(y.clone(), Scalar::int(3)), (z.clone(), Scalar::int(7))]);
    assert_eq!(p.evaluate(&vals).unwrap(), Scalar::int(42));
}
