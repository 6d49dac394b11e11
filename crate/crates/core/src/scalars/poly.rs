//! Integer polynomials (constant term first) with exact rational evaluation
//! and Sturm-sequence root counting.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

type RatPoly = Vec<BigRational>;

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `sum_i x^{p_i} - 1`.
    pub fn power_sum_minus_one(exponents: &[u32]) -> Self {
        let deg = exponents.iter().copied().max().unwrap_or(0) as usize;
        let mut c = vec![BigInt::zero(); deg + 1];
        c[0] -= 1;
        for &p in exponents {
            c[p as usize] += 1;
        }
        IntPoly::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Removes factors of `x`.
    pub fn strip_zero_roots(&self) -> IntPoly {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        IntPoly::new(self.coeffs[k..].to_vec())
    }

    /// The polynomial whose roots are the reciprocals of the nonzero roots.
    pub fn reciprocal(&self) -> IntPoly {
        let mut c = self.strip_zero_roots().coeffs;
        c.reverse();
        IntPoly::new(c)
    }

    /// Leading coefficient and constant term are both ±1 (after removing
    /// roots at zero): every nonzero root is then an algebraic unit.
    pub fn is_unit_polynomial(&self) -> bool {
        let p = self.strip_zero_roots();
        match (p.coeffs.first(), p.coeffs.last()) {
            (Some(c0), Some(cn)) => c0.abs().is_one() && cn.abs().is_one(),
            _ => false,
        }
    }

    fn to_rat(&self) -> RatPoly {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let seq = sturm_sequence(self.to_rat());
        let v_lo = sign_variations(&seq, lo);
        let v_hi = sign_variations(&seq, hi);
        v_lo.saturating_sub(v_hi)
    }

    /// Rational roots by the rational root theorem. Returns `None` when the
    /// extreme coefficients are too large to enumerate divisors cheaply.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        let mut roots = Vec::new();
        if self.is_zero() {
            return Some(roots);
        }
        let p = self.strip_zero_roots();
        if p.coeffs.len() != self.coeffs.len() {
            roots.push(BigRational::zero());
        }
        let c0 = p.coeffs.first()?.abs().to_u64()?;
        let cn = p.coeffs.last()?.abs().to_u64()?;
        const LIMIT: u64 = 1 << 40;
        if c0 > LIMIT || cn > LIMIT {
            return None;
        }
        for num in divisors(c0) {
            for den in divisors(cn) {
                if num.gcd(&den) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let q = BigRational::new(BigInt::from(num) * sign, BigInt::from(den));
                    if p.eval(&q).is_zero() && !roots.contains(&q) {
                        roots.push(q);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn derivative(p: &RatPoly) -> RatPoly {
    let mut d: RatPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut d);
    d
}

fn remainder(num: &RatPoly, den: &RatPoly) -> RatPoly {
    let mut r = num.clone();
    trim(&mut r);
    let dn = den.len() - 1;
    let lead = den[dn].clone();
    while r.len() > dn && !r.is_empty() {
        let shift = r.len() - 1 - dn;
        let factor = r[r.len() - 1].clone() / &lead;
        for (i, c) in den.iter().enumerate() {
            r[i + shift] -= &factor * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn sturm_sequence(p: RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.clone(), derivative(&p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = remainder(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn eval_rat(p: &RatPoly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_variations(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for p in seq {
        let v = eval_rat(p, x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(prev) = last {
            if prev != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sturm_counts_golden_roots() {
        // x^2 + x - 1: roots (-1 ± sqrt 5)/2
        let p = IntPoly::from_i64(&[-1, 1, 1]);
        assert_eq!(p.count_roots(&q(0, 1), &q(1, 1)), 1);
        assert_eq!(p.count_roots(&q(-2, 1), &q(1, 1)), 2);
        assert_eq!(p.count_roots(&q(1, 1), &q(5, 1)), 0);
    }

    #[test]
    fn sturm_handles_repeated_roots() {
        // x^2 (x - 3)
        let p = IntPoly::from_i64(&[0, 0, -3, 1]);
        assert_eq!(p.count_roots(&q(-1, 1), &q(4, 1)), 2);
    }

    #[test]
    fn rational_roots_found() {
        let p = IntPoly::from_i64(&[-1, 2]);
        assert_eq!(p.rational_roots().unwrap(), vec![q(1, 2)]);
        let golden = IntPoly::from_i64(&[-1, 1, 1]);
        assert!(golden.rational_roots().unwrap().is_empty());
    }

    #[test]
    fn reciprocal_and_units() {
        let p = IntPoly::from_i64(&[-1, -1, 1]); // x^2 - x - 1
        assert_eq!(p.reciprocal(), IntPoly::from_i64(&[1, -1, -1]));
        assert!(p.is_unit_polynomial());
        assert!(!IntPoly::from_i64(&[-1, 2]).is_unit_polynomial());
    }
}
