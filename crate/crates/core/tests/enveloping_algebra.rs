use horolab_core::group::Mat2;
use horolab_core::rational::GaussianRational as G;
use horolab_core::uea::BasisSymbol::{self, *};
use horolab_core::uea::*;
use num_traits::Zero;
use proptest::prelude::*;

fn g(re: i128, im: i128) -> G {
    G::int(re, im)
}

fn half(x: G) -> G {
    x * G::frac(1, 2)
}

fn matrix(s: BasisSymbol) -> Mat2<G> {
    let (o, one, i) = (g(0, 0), g(1, 0), g(0, 1));
    match s {
        H => Mat2::new(half(one), o, o, half(-one)),
        J => Mat2::new(half(i), o, o, half(-i)),
        EPlus => Mat2::new(o, one, o, o),
        KPlus => Mat2::new(o, i, o, o),
        EMinus => Mat2::new(o, o, one, o),
        KMinus => Mat2::new(o, o, i, o),
    }
}

/// Real coordinates of a traceless complex matrix in the six-element basis.
fn decompose(m: &Mat2<G>) -> Vec<(BasisSymbol, i128)> {
    assert_eq!(m.a + m.d, g(0, 0));
    let int = |q: num_rational::Ratio<i128>| {
        assert!(q.is_integer());
        q.to_integer()
    };
    let coords = [
        (H, int(m.a.re * 2)),
        (J, int(m.a.im * 2)),
        (EPlus, int(m.b.re)),
        (KPlus, int(m.b.im)),
        (EMinus, int(m.c.re)),
        (KMinus, int(m.c.im)),
    ];
    coords.into_iter().filter(|(_, c)| *c != 0).collect()
}

fn commutator(x: &Mat2<G>, y: &Mat2<G>) -> Mat2<G> {
    let (p, q) = (*x * *y, *y * *x);
    Mat2::new(p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d)
}

fn lie_element(coords: &[(BasisSymbol, i128)]) -> UeaElement {
    coords.iter().fold(UeaElement::zero(), |acc, &(s, c)| {
        acc + UeaElement::symbol(s).scale(G::from(c))
    })
}

#[test]
fn bracket_table_matches_matrix_commutators() {
    for x in BasisSymbol::ALL {
        for y in BasisSymbol::ALL {
            let mut expected = decompose(&commutator(&matrix(x), &matrix(y)));
            let mut got = bracket(x, y);
            expected.sort();
            got.sort();
            assert_eq!(got, expected, "[{x}, {y}]");
        }
    }
}

#[test]
fn jacobi_identity() {
    let br = |u: &UeaElement, v: &UeaElement| u * v - v * u;
    for x in BasisSymbol::ALL {
        for y in BasisSymbol::ALL {
            for z in BasisSymbol::ALL {
                let (x, y, z) = (
                    UeaElement::from(x),
                    UeaElement::from(y),
                    UeaElement::from(z),
                );
                let s = br(&x, &br(&y, &z)) + br(&y, &br(&z, &x)) + br(&z, &br(&x, &y));
                assert!(s.is_zero());
            }
        }
    }
}

#[test]
fn e_plus_times_e_minus_is_normal() {
    let p = UeaElement::from(EPlus) * UeaElement::from(EMinus);
    assert_eq!(p, UeaElement::word(&[EPlus, EMinus]));
    let q = UeaElement::from(EMinus) * UeaElement::from(EPlus);
    let expected = UeaElement::word(&[EPlus, EMinus]) + lie_element(&bracket(EMinus, EPlus));
    assert_eq!(q, expected);
}

#[test]
fn quartic_identity_holds() {
    let c = verify_identity_quartic();
    assert!(c.holds, "residual {}", c.residual);
    assert!(c.residual.is_zero());
}

#[test]
fn cubic_identity_holds() {
    let c = verify_identity_cubic();
    assert!(c.holds, "residual {}", c.residual);
}

#[test]
fn quartic_with_opposite_hje_sign_leaves_k_plus_hje_residual() {
    let u2 = quartic_u2() - UeaElement::word(&[H, J, EMinus]).scale_q(2, 1);
    let c = check_quartic(&quartic_u1(), &u2);
    assert!(!c.holds);
    let expected = UeaElement::word(&[KPlus, H, J, EMinus]).scale_q(-2, 1);
    assert_eq!(c.residual, expected);
}

#[test]
fn perturbed_u1_is_detected() {
    let c = check_quartic(&(quartic_u1() + EMinus.into()), &quartic_u2());
    assert!(!c.holds);
    assert_eq!(c.residual, -UeaElement::word(&[EPlus, EMinus]));
}

#[test]
fn perturbed_v2_is_detected() {
    let c = check_cubic(&cubic_v1(), &(cubic_v2() + H.into()));
    assert!(!c.holds && !c.residual.is_zero());
}

#[test]
fn casimirs_are_central() {
    for omega in [casimir_1(), casimir_2()] {
        for (x, c) in commutators_with_basis(&omega) {
            assert!(c.is_zero(), "[Ω, {x}] = {c}");
        }
    }
}

#[test]
fn identity_elements_live_in_degree_three() {
    for u in [quartic_u1(), quartic_u2(), cubic_v1(), cubic_v2()] {
        assert!(u.degree().unwrap() <= 3);
    }
    assert_eq!(quartic_lhs().degree(), Some(4));
}

fn symbol() -> impl Strategy<Value = BasisSymbol> {
    prop::sample::select(BasisSymbol::ALL.to_vec())
}

fn element() -> impl Strategy<Value = UeaElement> {
    prop::collection::vec(
        (prop::collection::vec(symbol(), 0..4), -3i128..4, -2i128..3),
        1..4,
    )
    .prop_map(|terms| {
        terms
            .into_iter()
            .fold(UeaElement::zero(), |acc, (w, re, im)| {
                acc + UeaElement::word(&w).scale(G::int(re, im))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn degree_is_additive(a in element(), b in element()) {
        let p = &a * &b;
        if !p.is_zero() {
            prop_assert!(p.degree().unwrap() <= a.degree().unwrap() + b.degree().unwrap());
        }
    }

    #[test]
    fn commutator_drops_degree(a in element(), b in element()) {
        let c = &a * &b - &b * &a;
        if let (Some(dc), Some(da), Some(db)) = (c.degree(), a.degree(), b.degree()) {
            prop_assert!(dc < (da + db).max(1));
        }
    }

    #[test]
    fn product_terms_are_normal_ordered(a in element(), b in element()) {
        for (m, c) in (&a * &b).terms() {
            prop_assert!(m.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(!c.is_zero());
        }
    }
}
