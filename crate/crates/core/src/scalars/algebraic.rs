//! Real algebraic numbers as (integer polynomial, isolating interval).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// A real root of `poly`, the only one in the closed interval `[lo, hi]`,
/// where `poly` changes sign (or vanishes at an endpoint).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebraic {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
}

impl Algebraic {
    pub fn new(poly: IntPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        if poly.is_zero() || poly.degree() == Some(0) {
            return Err(Error::InvalidScalar("algebraic polynomial must be non-constant".into()));
        }
        if lo > hi {
            return Err(Error::InvalidScalar(format!("empty isolating interval [{lo}, {hi}]")));
        }
        let slo = poly.sign_at(&lo);
        let shi = poly.sign_at(&hi);
        if slo != Ordering::Equal && slo == shi {
            return Err(Error::InvalidScalar(format!(
                "no sign change of the polynomial on [{lo}, {hi}]"
            )));
        }
        let roots = poly.count_roots(&lo, &hi) + usize::from(slo == Ordering::Equal);
        if roots != 1 {
            return Err(Error::InvalidScalar(format!(
                "interval [{lo}, {hi}] contains {roots} roots, expected exactly one"
            )));
        }
        Ok(Algebraic { poly, lo, hi })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    /// The root itself when it is an exact rational (interval collapsed, or a
    /// rational root of the polynomial lies inside the interval).
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.lo == self.hi {
            return Some(self.lo.clone());
        }
        self.poly
            .rational_roots()?
            .into_iter()
            .find(|r| &self.lo <= r && r <= &self.hi)
    }

    /// Bisects the isolating interval until its width is at most `precision`.
    pub fn refined(&self, precision: &BigRational) -> Algebraic {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        let two = BigRational::from_integer(BigInt::from(2));
        let mut s_lo = self.poly.sign_at(&lo);
        if s_lo == Ordering::Equal {
            hi = lo.clone();
        } else if self.poly.sign_at(&hi) == Ordering::Equal {
            lo = hi.clone();
        }
        while &hi - &lo > *precision {
            let mid = (&lo + &hi) / &two;
            let s_mid = self.poly.sign_at(&mid);
            if s_mid == Ordering::Equal {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if s_mid == s_lo {
                lo = mid;
                s_lo = s_mid;
            } else {
                hi = mid;
            }
        }
        Algebraic {
            poly: self.poly.clone(),
            lo,
            hi,
        }
    }

    /// `1/x` for a positive root: reversed polynomial, inverted interval.
    pub fn reciprocal(&self) -> Result<Algebraic> {
        if !self.lo.is_positive() {
            return Err(Error::InvalidScalar(
                "reciprocal needs an isolating interval inside (0, inf)".into(),
            ));
        }
        Algebraic::new(self.poly.reciprocal(), self.hi.recip(), self.lo.recip())
    }

    pub fn is_unit(&self) -> bool {
        self.poly.is_unit_polynomial()
    }

    pub fn is_in_open_unit_interval(&self) -> bool {
        let mut a = self.clone();
        let zero = BigRational::zero();
        let one = BigRational::one();
        let mut width = &a.hi - &a.lo;
        loop {
            if a.lo > zero && a.hi < one {
                return true;
            }
            if a.hi <= zero || a.lo >= one {
                return false;
            }
            if a.lo == a.hi {
                return false;
            }
            width /= BigRational::from_integer(BigInt::from(1024));
            a = a.refined(&width);
        }
    }
}

impl fmt::Display for Algebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "root of {} in [{}, {}]", terms.join(" + "), self.lo, self.hi)
    }
}
