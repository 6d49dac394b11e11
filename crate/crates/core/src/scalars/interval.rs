//! Closed intervals of `f64` with outward rounding.
//!
//! Every arithmetic result is widened by one ulp on each side (two for
//! `exp`/`ln`, whose libm implementations are not correctly rounded), so an
//! interval computed from enclosing inputs encloses the exact result.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    if x == 0.0 {
        // keep exact zeros exact only for the product/sum cases that produce
        // them exactly; callers widen via `outward`
        -f64::MIN_POSITIVE * f64::EPSILON
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x == 0.0 {
        f64::MIN_POSITIVE * f64::EPSILON
    } else {
        x.next_up()
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo.is_finite() && hi.is_finite(), "interval endpoints must be finite");
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The degenerate interval at an exactly representable point.
    pub fn point(x: f64) -> Self {
        Interval::new(x, x)
    }

    fn outward(lo: f64, hi: f64) -> Self {
        Interval::new(down(lo), up(hi))
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Largest absolute value attained on the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn widen(&self, radius: f64) -> Interval {
        Interval::outward(self.lo - radius, self.hi + radius)
    }

    /// Encloses an exact rational.
    pub fn from_rational(q: &BigRational) -> Interval {
        match q.to_f64() {
            Some(f) if f.is_finite() => {
                if BigRational::from_float(f).as_ref() == Some(q) {
                    Interval::point(f)
                } else {
                    Interval::outward(f, f)
                }
            }
            _ => panic!("rational {q} is not representable as a finite f64"),
        }
    }

    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational) -> Interval {
        Interval::from_rational(lo).hull(&Interval::from_rational(hi))
    }

    pub fn from_int(k: i64) -> Interval {
        Interval::from_rational(&BigRational::from_integer(BigInt::from(k)))
    }

    pub fn exp(&self) -> Interval {
        let lo = self.lo.exp();
        let hi = self.hi.exp();
        Interval::new(down(down(lo)).max(0.0), up(up(hi)))
    }

    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0.0, "ln of a non-positive interval");
        Interval::new(down(down(self.lo.ln())), up(up(self.hi.ln())))
    }

    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::point(1.0);
        for _ in 0..k {
            acc = acc * *self;
        }
        acc
    }

    pub fn recip(&self) -> Interval {
        Interval::point(1.0) / *self
    }

    pub fn min_all(items: &[Interval]) -> Option<f64> {
        items.iter().map(|i| i.lo).reduce(f64::min)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        let (lo, lo_err) = two_sum(self.lo, rhs.lo);
        let (hi, hi_err) = two_sum(self.hi, rhs.hi);
        let lo = if lo_err < 0.0 { down(lo) } else { lo };
        let hi = if hi_err > 0.0 { up(hi) } else { hi };
        Interval::new(lo, hi)
    }
}

/// Knuth's error-free transformation: `a + b = s + err` exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let c = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if (self.lo == 1.0 && self.hi == 1.0) || (self.lo == 0.0 && self.hi == 0.0) {
            return Interval::new(lo, hi);
        }
        if (rhs.lo == 1.0 && rhs.hi == 1.0) || (rhs.lo == 0.0 && rhs.hi == 0.0) {
            return Interval::new(lo, hi);
        }
        Interval::outward(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        assert!(
            rhs.lo > 0.0 || rhs.hi < 0.0,
            "division by an interval containing zero"
        );
        let c = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if rhs.lo == 1.0 && rhs.hi == 1.0 {
            return Interval::new(lo, hi);
        }
        Interval::outward(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.15e}, {:.15e}]", self.lo, self.hi)
    }
}

/// Lower rational endpoint, exactly.
pub fn rational_lo(i: &Interval) -> BigRational {
    BigRational::from_float(i.lo).unwrap_or_else(BigRational::zero)
}

/// Upper rational endpoint, exactly.
pub fn rational_hi(i: &Interval) -> BigRational {
    BigRational::from_float(i.hi).unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_enclose_decimal_rounding() {
        let tenth = Interval::from_rational(&BigRational::new(1.into(), 10.into()));
        let mut acc = Interval::point(0.0);
        for _ in 0..10 {
            acc = acc + tenth;
        }
        assert!(acc.contains(1.0));
        assert!(acc.width() < 1e-14);
    }

    #[test]
    fn exact_points_stay_exact() {
        let half = Interval::from_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(half.width(), 0.0);
        assert_eq!((Interval::point(1.0) * half).width(), 0.0);
    }

    #[test]
    fn exp_ln_round_trip_encloses() {
        let two = Interval::point(2.0);
        let back = two.ln().exp();
        assert!(back.contains(2.0));
    }

    #[test]
    fn division_orders_endpoints() {
        let q = Interval::new(1.0, 2.0) / Interval::new(-4.0, -2.0);
        assert!(q.contains(-0.25) && q.contains(-1.0));
    }
}
