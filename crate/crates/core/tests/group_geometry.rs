use horolab_core::group::*;
use horolab_core::rational::GaussianRational as G;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

prop_compose! {
    fn element()(x in -2.0..2.0f64, y in -2.0..2.0f64, t in -3.0..3.0f64,
                 u in prop::array::uniform4(-1.0..1.0f64)) -> GroupElement {
        let k = GroupElement::su2(c(u[0], u[1] + 1e-3), c(u[2], u[3]));
        GroupElement::n(c(x, y)) * GroupElement::a(t) * k
    }
}

prop_compose! {
    fn point()(x in -2.0..2.0f64, y in -2.0..2.0f64, lr in -4.0..4.0f64) -> Point {
        Point::new(c(x, y), lr.exp()).unwrap()
    }
}

fn close(p: &Point, q: &Point, tol: f64) -> bool {
    p.dist(q) < tol
}

proptest! {
    #[test]
    fn action_is_a_group_action(g in element(), h in element(), p in point()) {
        let lhs = (g * h).act(&p);
        let rhs = g.act(&h.act(&p));
        prop_assert!(close(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn identity_acts_trivially(p in point()) {
        prop_assert_eq!(GroupElement::identity().act(&p), p);
    }

    #[test]
    fn distance_is_invariant(g in element(), p in point(), q in point()) {
        let d0 = p.dist(&q);
        let d1 = g.act(&p).dist(&g.act(&q));
        prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0));
    }

    #[test]
    fn iwasawa_round_trip(g in element()) {
        let iw = g.iwasawa();
        prop_assert!(iw.compose().max_abs_diff(&g) < 1e-10 * (1.0 + g.matrix().a.norm() + g.matrix().b.norm()));
        let k = iw.k.matrix();
        prop_assert!((k.a.norm_sqr() + k.b.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((k.c + k.b.conj()).norm() < 1e-12 && (k.d - k.a.conj()).norm() < 1e-12);
    }

    #[test]
    fn inverse_undoes_action(g in element(), p in point()) {
        prop_assert!(close(&g.inverse().act(&g.act(&p)), &p, 1e-9));
    }

    #[test]
    fn left_translation_preserves_haar_density(s in -5.0..5.0f64, t in -5.0..5.0f64) {
        // n_w a_s maps (z, t) to (w + e^s z, t + s); the z-Jacobian is e^{2s}.
        let moved = haar_weight(t + s) * (2.0 * s).exp();
        prop_assert!((moved - haar_weight(t)).abs() < 1e-12 * haar_weight(t));
    }
}

#[test]
fn iwasawa_of_identity() {
    let iw = GroupElement::identity().iwasawa();
    assert_eq!(iw.z, c(0.0, 0.0));
    assert_eq!(iw.t, 0.0);
    assert!(iw.k.max_abs_diff(&GroupElement::identity()) < 1e-15);
}

#[test]
fn exact_products_agree_with_floating_point() {
    let m1 = Mat2::new(G::int(1, 1), G::int(2, 0), G::int(0, 1), G::int(1, -1));
    let m2 = Mat2::new(G::int(1, 0), G::frac(1, 2), G::int(0, 0), G::int(1, 0));
    assert_eq!(m1.det(), G::int(2, -2));
    let unit = Mat2::new(G::int(2, 0), G::int(1, 0), G::int(1, 0), G::int(1, 0));
    let prod = unit * m2;
    assert_eq!(prod.det(), G::int(1, 0));
    let exact = GroupElement::from_exact(&prod).unwrap();
    let float = GroupElement::from_exact(&unit).unwrap() * GroupElement::from_exact(&m2).unwrap();
    assert!(exact.max_abs_diff(&float) < 1e-15);
    assert!(GroupElement::from_exact(&m1).is_err());
}

#[test]
fn determinant_drift_stays_small_over_long_products() {
    let gens = [
        GroupElement::n(c(0.5, -0.3)),
        GroupElement::a(0.7),
        GroupElement::su2(c(0.6, 0.2), c(-0.3, 0.7)),
        GroupElement::a(-0.7),
        GroupElement::n(c(-0.5, 0.3)),
        GroupElement::inversion(),
    ];
    let mut g = GroupElement::identity();
    for i in 0..1000 {
        g = g * gens[(i * 7 + i / 3) % gens.len()];
        let scale = g.matrix().a.norm().max(g.matrix().d.norm()).max(1.0);
        assert!(
            g.det_drift() < 1e-9 * scale * scale,
            "step {i}: drift {}",
            g.det_drift()
        );
    }
}
