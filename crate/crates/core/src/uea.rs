//! The universal enveloping algebra of `sl2(C)` viewed as a real Lie algebra,
//! complexified, with elements kept in PBW normal form.
//!
//! Basis: `H = ½diag(1,-1)`, `J = ½diag(i,-i)`, `E+ = e12`, `K+ = i e12`,
//! `E- = e21`, `K- = i e21`. In the complexification `J` and `iH` are
//! independent.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{GaussianRational, Q};

/// Declaration order is the PBW order `H < J < E+ < K+ < E- < K-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisSymbol {
    H,
    J,
    EPlus,
    KPlus,
    EMinus,
    KMinus,
}

use BasisSymbol::*;

impl BasisSymbol {
    pub const ALL: [BasisSymbol; 6] = [H, J, EPlus, KPlus, EMinus, KMinus];

    pub fn name(self) -> &'static str {
        match self {
            H => "H",
            J => "J",
            EPlus => "E+",
            KPlus => "K+",
            EMinus => "E-",
            KMinus => "K-",
        }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `[x, y]` as integer coordinates in the basis.
pub fn bracket(x: BasisSymbol, y: BasisSymbol) -> Vec<(BasisSymbol, i128)> {
    if x == y {
        return Vec::new();
    }
    if x > y {
        return bracket(y, x).into_iter().map(|(s, c)| (s, -c)).collect();
    }
    match (x, y) {
        (H, EPlus) => vec![(EPlus, 1)],
        (H, KPlus) => vec![(KPlus, 1)],
        (H, EMinus) => vec![(EMinus, -1)],
        (H, KMinus) => vec![(KMinus, -1)],
        (J, EPlus) => vec![(KPlus, 1)],
        (J, KPlus) => vec![(EPlus, -1)],
        (J, EMinus) => vec![(KMinus, -1)],
        (J, KMinus) => vec![(EMinus, 1)],
        (EPlus, EMinus) => vec![(H, 2)],
        (EPlus, KMinus) => vec![(J, 2)],
        (KPlus, EMinus) => vec![(J, 2)],
        (KPlus, KMinus) => vec![(H, -2)],
        _ => Vec::new(),
    }
}

/// A PBW monomial: symbols in non-decreasing order.
pub type Monomial = Vec<BasisSymbol>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UeaElement {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(GaussianRational::one())
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn symbol(s: BasisSymbol) -> Self {
        Self::term(vec![s], GaussianRational::one())
    }

    /// The product of `symbols` in the given order, normal ordered.
    pub fn word(symbols: &[BasisSymbol]) -> Self {
        let mut pbw = Pbw::new();
        symbols
            .iter()
            .fold(Self::one(), |acc, &s| pbw.multiply(&acc, &Self::symbol(s)))
    }

    fn term(m: Monomial, c: GaussianRational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let sum = self.coefficient(&m) + c;
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[BasisSymbol]) -> GaussianRational {
        self.terms
            .get(m)
            .copied()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Degree in the PBW filtration; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    pub fn scale(&self, c: GaussianRational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), *v * c);
        }
        out
    }

    pub fn scale_q(&self, num: i128, den: i128) -> Self {
        self.scale(GaussianRational::new(Q::new(num, den), Q::zero()))
    }
}

impl Add for &UeaElement {
    type Output = UeaElement;
    fn add(self, o: &UeaElement) -> UeaElement {
        let mut out = self.clone();
        for (m, v) in &o.terms {
            out.add_term(m.clone(), *v);
        }
        out
    }
}

impl Add for UeaElement {
    type Output = UeaElement;
    fn add(self, o: UeaElement) -> UeaElement {
        &self + &o
    }
}

impl Neg for &UeaElement {
    type Output = UeaElement;
    fn neg(self) -> UeaElement {
        self.scale(-GaussianRational::one())
    }
}

impl Neg for UeaElement {
    type Output = UeaElement;
    fn neg(self) -> UeaElement {
        -&self
    }
}

impl Sub for &UeaElement {
    type Output = UeaElement;
    fn sub(self, o: &UeaElement) -> UeaElement {
        self + &(-o)
    }
}

impl Sub for UeaElement {
    type Output = UeaElement;
    fn sub(self, o: UeaElement) -> UeaElement {
        &self - &o
    }
}

impl Mul for &UeaElement {
    type Output = UeaElement;
    fn mul(self, o: &UeaElement) -> UeaElement {
        Pbw::new().multiply(self, o)
    }
}

impl Mul for UeaElement {
    type Output = UeaElement;
    fn mul(self, o: UeaElement) -> UeaElement {
        &self * &o
    }
}

impl From<BasisSymbol> for UeaElement {
    fn from(s: BasisSymbol) -> Self {
        Self::symbol(s)
    }
}

impl fmt::Display for UeaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for s in m {
                write!(f, "·{s}")?;
            }
        }
        Ok(())
    }
}

/// Normal-ordering engine with a memo of `monomial · symbol` products.
#[derive(Default)]
pub struct Pbw {
    memo: BTreeMap<(Monomial, BasisSymbol), UeaElement>,
}

impl Pbw {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn multiply(&mut self, u: &UeaElement, v: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (mv, cv) in &v.terms {
            let mut acc = u.clone();
            for &s in mv {
                acc = self.times_symbol(&acc, s);
            }
            out = &out + &acc.scale(*cv);
        }
        out
    }

    fn times_symbol(&mut self, u: &UeaElement, s: BasisSymbol) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in &u.terms {
            let p = self.monomial_times(m, s);
            for (pm, pc) in p.terms {
                out.add_term(pm, pc * *c);
            }
        }
        out
    }

    /// `m · s` using `x y = y x + [x, y]` whenever `x > y`.
    fn monomial_times(&mut self, m: &[BasisSymbol], s: BasisSymbol) -> UeaElement {
        match m.last() {
            None => return UeaElement::symbol(s),
            Some(&last) if last <= s => {
                let mut w = m.to_vec();
                w.push(s);
                return UeaElement::term(w, GaussianRational::one());
            }
            _ => {}
        }
        let key = (m.to_vec(), s);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let (head, x) = (&m[..m.len() - 1], m[m.len() - 1]);
        let swapped = self.monomial_times(head, s);
        let mut out = self.times_symbol(&swapped, x);
        for (z, k) in bracket(x, s) {
            let t = self.monomial_times(head, z);
            out = &out + &t.scale(GaussianRational::from(k));
        }
        self.memo.insert(key, out.clone());
        out
    }
}

fn w(symbols: &[BasisSymbol]) -> UeaElement {
    UeaElement::word(symbols)
}

/// `Ω₁ = H² − J² − 2H + E+E- − K+K-`.
pub fn casimir_1() -> UeaElement {
    w(&[H, H]) - w(&[J, J]) - w(&[H]).scale_q(2, 1) + w(&[EPlus, EMinus]) - w(&[KPlus, KMinus])
}

/// `Ω₂ = 2HJ − 2J + E+K- + K+E-`.
pub fn casimir_2() -> UeaElement {
    w(&[H, J]).scale_q(2, 1) - w(&[J]).scale_q(2, 1) + w(&[EPlus, KMinus]) + w(&[KPlus, EMinus])
}

/// Outcome of checking `lhs = rhs` in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub residual: UeaElement,
}

impl IdentityCheck {
    fn of(lhs: &UeaElement, rhs: &UeaElement) -> Self {
        let residual = lhs - rhs;
        Self {
            holds: residual.is_zero(),
            residual,
        }
    }
}

pub fn quartic_u1() -> UeaElement {
    w(&[H, EMinus]).scale_q(1, 2) + w(&[J, KMinus]).scale_q(1, 2)
        - w(&[EPlus, KMinus, KMinus]).scale_q(1, 4)
        - w(&[KPlus, EMinus, KMinus]).scale_q(1, 2)
        - w(&[H, H, EMinus])
        - w(&[H, J, KMinus])
}

pub fn quartic_u2() -> UeaElement {
    w(&[H, KMinus]).scale_q(1, 2) - w(&[J, EMinus]).scale_q(1, 2)
        + w(&[KPlus, EMinus, EMinus]).scale_q(1, 4)
        - w(&[H, H, KMinus])
        + w(&[H, J, EMinus])
}

/// `H⁴ − 4H³ + (5 − Ω₁)H² + 2(Ω₁ − 1)H − (Ω₁ + ¼Ω₂²)`.
pub fn quartic_lhs() -> UeaElement {
    let mut pbw = Pbw::new();
    let o1 = casimir_1();
    let o2 = casimir_2();
    let h = UeaElement::symbol(H);
    let h2 = w(&[H, H]);
    w(&[H, H, H, H]) - w(&[H, H, H]).scale_q(4, 1) + h2.scale_q(5, 1) - pbw.multiply(&o1, &h2)
        + pbw.multiply(&o1, &h).scale_q(2, 1)
        - h.scale_q(2, 1)
        - o1
        - pbw.multiply(&o2, &o2).scale_q(1, 4)
}

/// Checks the quartic relation `lhs = E+·U₁ − K+·U₂` for the given `U₁, U₂`.
pub fn check_quartic(u1: &UeaElement, u2: &UeaElement) -> IdentityCheck {
    let mut pbw = Pbw::new();
    let rhs = pbw.multiply(&EPlus.into(), u1) - pbw.multiply(&KPlus.into(), u2);
    IdentityCheck::of(&quartic_lhs(), &rhs)
}

pub fn verify_identity_quartic() -> IdentityCheck {
    check_quartic(&quartic_u1(), &quartic_u2())
}

pub fn cubic_v1() -> UeaElement {
    w(&[EMinus]) - w(&[EMinus, H]) - w(&[KMinus, J]).scale_q(1, 2)
}

pub fn cubic_v2() -> UeaElement {
    -w(&[KMinus]) + w(&[KMinus, H]) - w(&[EMinus, J]).scale_q(1, 2)
}

/// `H³ − 3H² + (2 − Ω₁)H + Ω₁`.
pub fn cubic_lhs() -> UeaElement {
    let mut pbw = Pbw::new();
    let o1 = casimir_1();
    let h = UeaElement::symbol(H);
    w(&[H, H, H]) - w(&[H, H]).scale_q(3, 1) + h.scale_q(2, 1) - pbw.multiply(&o1, &h) + o1
}

/// Checks `lhs = ½Ω₂J + E+·V₁ + K+·V₂`.
pub fn check_cubic(v1: &UeaElement, v2: &UeaElement) -> IdentityCheck {
    let mut pbw = Pbw::new();
    let rhs = pbw.multiply(&casimir_2(), &J.into()).scale_q(1, 2)
        + pbw.multiply(&EPlus.into(), v1)
        + pbw.multiply(&KPlus.into(), v2);
    IdentityCheck::of(&cubic_lhs(), &rhs)
}

pub fn verify_identity_cubic() -> IdentityCheck {
    check_cubic(&cubic_v1(), &cubic_v2())
}

/// `[Ω, X]` for every basis symbol `X`; all zero for a central `Ω`.
pub fn commutators_with_basis(omega: &UeaElement) -> Vec<(BasisSymbol, UeaElement)> {
    let mut pbw = Pbw::new();
    BasisSymbol::ALL
        .iter()
        .map(|&x| {
            let x_el = UeaElement::symbol(x);
            (x, pbw.multiply(omega, &x_el) - pbw.multiply(&x_el, omega))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_words_are_already_normal() {
        let e = UeaElement::word(&[EPlus, EMinus]);
        assert_eq!(e.terms().count(), 1);
        assert_eq!(e.coefficient(&[EPlus, EMinus]), GaussianRational::one());
    }

    #[test]
    fn reordering_adds_the_bracket() {
        let e = UeaElement::word(&[EMinus, EPlus]);
        assert_eq!(e.coefficient(&[EPlus, EMinus]), GaussianRational::one());
        assert_eq!(e.coefficient(&[H]), GaussianRational::from(-2));
        assert_eq!(e.terms().count(), 2);
    }

    #[test]
    fn zero_display() {
        use alloc::string::ToString;
        assert_eq!(UeaElement::zero().to_string(), "0");
        assert_eq!(
            (UeaElement::symbol(H) - UeaElement::symbol(H)).to_string(),
            "0"
        );
    }
}
