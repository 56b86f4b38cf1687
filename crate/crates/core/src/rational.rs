//! Exact Gaussian rationals `p + q i` with `p, q ∈ ℚ`.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn int(re: i128, im: i128) -> Self {
        Self::new(Q::from_integer(re), Q::from_integer(im))
    }

    pub fn frac(num: i128, den: i128) -> Self {
        Self::new(Q::new(num, den), Q::zero())
    }

    pub fn i() -> Self {
        Self::int(0, 1)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> Q {
        self.re * self.re + self.im * self.im
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        let f = |q: Q| *q.numer() as f64 / *q.denom() as f64;
        num_complex::Complex64::new(f(self.re), f(self.im))
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::int(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::int(1, 0)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero, like the underlying rationals.
    fn div(self, o: Self) -> Self {
        let n = o.norm_sqr();
        let p = self * o.conj();
        Self::new(p.re / n, p.im / n)
    }
}

impl From<i128> for GaussianRational {
    fn from(v: i128) -> Self {
        Self::int(v, 0)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => write!(f, "({}{:+}i)", self.re, self.im),
        }
    }
}
