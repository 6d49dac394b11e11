//! Multiplicative exponent lattices.
//!
//! Positive values are written as exponent vectors over generators: rational
//! primes plus at most one "opaque" base (an algebraic number). Values share a
//! common base `λ` with `v_i = λ^{p_i}` exactly when their exponent vectors are
//! positive integer multiples of one primitive vector.
//!
//! Generators must be multiplicatively independent for this to be sound.
//! Primes are; a single opaque base on its own is; an opaque base together
//! with primes is only when it is an algebraic unit (no power of a unit in
//! (0,1) is rational). Anything else is reported as not exactly decidable.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{contfrac, primes, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Generator {
    Prime(u64),
    Opaque(usize),
}

type ExponentVector = BTreeMap<Generator, i64>;

#[derive(Default)]
struct Registry {
    opaque: Vec<Scalar>,
}

impl Registry {
    fn opaque_index(&mut self, s: &Scalar) -> usize {
        match self.opaque.iter().position(|o| o == s) {
            Some(i) => i,
            None => {
                self.opaque.push(s.clone());
                self.opaque.len() - 1
            }
        }
    }

    /// `None` when the scalar contains a float.
    fn decompose(&mut self, s: &Scalar) -> Result<Option<ExponentVector>> {
        Ok(match s {
            Scalar::Rational(q) => {
                if !q.is_positive() {
                    return Err(Error::Domain(format!("{q} is not positive")));
                }
                let mut v = ExponentVector::new();
                for (p, e) in primes::factorize(&to_biguint(q.numer()))? {
                    *v.entry(Generator::Prime(p)).or_default() += i64::from(e);
                }
                for (p, e) in primes::factorize(&to_biguint(q.denom()))? {
                    *v.entry(Generator::Prime(p)).or_default() -= i64::from(e);
                }
                v.retain(|_, e| *e != 0);
                Some(v)
            }
            Scalar::Algebraic(_) => {
                let mut v = ExponentVector::new();
                v.insert(Generator::Opaque(self.opaque_index(s)), 1);
                Some(v)
            }
            Scalar::Float(_) => None,
            Scalar::Power { base, exp } => self.decompose(base)?.map(|v| {
                v.into_iter()
                    .map(|(g, e)| (g, e * i64::from(*exp)))
                    .collect()
            }),
            Scalar::Product(fs) => {
                let mut acc = ExponentVector::new();
                for f in fs {
                    match self.decompose(f)? {
                        Some(v) => {
                            for (g, e) in v {
                                *acc.entry(g).or_default() += e;
                            }
                        }
                        None => return Ok(None),
                    }
                }
                acc.retain(|_, e| *e != 0);
                Some(acc)
            }
        })
    }

    fn independent(&self, vectors: &[ExponentVector]) -> bool {
        let mut has_prime = false;
        let mut opaque = Vec::new();
        for v in vectors {
            for g in v.keys() {
                match g {
                    Generator::Prime(_) => has_prime = true,
                    Generator::Opaque(i) => {
                        if !opaque.contains(i) {
                            opaque.push(*i);
                        }
                    }
                }
            }
        }
        match opaque.as_slice() {
            [] => true,
            [i] => {
                !has_prime
                    || matches!(&self.opaque[*i], Scalar::Algebraic(a) if a.is_unit())
            }
            _ => false,
        }
    }

    fn scalar_of(&self, v: &ExponentVector) -> Result<Scalar> {
        let mut rational = BigRational::one();
        let mut factors = Vec::new();
        for (g, &e) in v {
            match g {
                Generator::Prime(p) => {
                    let pe = num_traits::pow(BigRational::from_integer(BigInt::from(*p)), e.unsigned_abs() as usize);
                    if e > 0 {
                        rational *= pe;
                    } else {
                        rational /= pe;
                    }
                }
                Generator::Opaque(i) => {
                    let base = &self.opaque[*i];
                    let base = if e > 0 {
                        base.clone()
                    } else {
                        match base {
                            Scalar::Algebraic(a) => Scalar::Algebraic(a.reciprocal()?),
                            other => {
                                return Err(Error::InvalidScalar(format!(
                                    "cannot invert opaque base {other}"
                                )))
                            }
                        }
                    };
                    factors.push(Scalar::power(base, e.unsigned_abs() as u32));
                }
            }
        }
        factors.push(Scalar::Rational(rational));
        Ok(Scalar::product(factors))
    }
}

fn to_biguint(n: &BigInt) -> BigUint {
    n.abs().to_biguint().expect("absolute value is non-negative")
}

/// `v_i = base^{exponents_i}` with `0 < base < 1` and `gcd(exponents) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseDecomposition {
    pub base: Scalar,
    pub exponents: Vec<u64>,
}

/// Outcome of an exact common-base search.
#[derive(Clone, Debug, PartialEq)]
pub enum CommonBase {
    Found(BaseDecomposition),
    /// The values are exactly known not to be powers of one base.
    NoneExists,
    /// Floats or dependent generators: exact arithmetic cannot decide.
    Undecidable,
}

fn check_unit_interval(values: &[Scalar]) -> Result<()> {
    for v in values {
        if !v.in_open_unit_interval() {
            return Err(Error::Domain(v.render()));
        }
    }
    Ok(())
}

/// If every vector is an integer multiple of one primitive vector `w`,
/// returns `w` oriented so the multiples are positive, and the multiples.
fn primitive_direction(vectors: &[ExponentVector]) -> Option<(ExponentVector, Vec<i64>)> {
    let first = vectors.first()?;
    let content = first.values().fold(0i64, |g, &e| g.gcd(&e));
    if content == 0 {
        return None;
    }
    let mut w: ExponentVector = first.iter().map(|(&g, &e)| (g, e / content)).collect();
    let mut multiples = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != w.len() || v.keys().any(|g| !w.contains_key(g)) {
            return None;
        }
        let (g0, &w0) = w.iter().next()?;
        let e0 = v[g0];
        if e0 % w0 != 0 {
            return None;
        }
        let t = e0 / w0;
        if w.iter().any(|(g, &we)| v[g] != t * we) {
            return None;
        }
        multiples.push(t);
    }
    if multiples[0] < 0 {
        w.values_mut().for_each(|e| *e = -*e);
        multiples.iter_mut().for_each(|t| *t = -*t);
    }
    if multiples.iter().any(|&t| t <= 0) {
        return None;
    }
    Some((w, multiples))
}

/// Exact common base of values in (0,1) built from rationals, algebraic
/// numbers, and their powers/products.
pub fn common_base(values: &[Scalar]) -> Result<CommonBase> {
    check_unit_interval(values)?;
    let mut reg = Registry::default();
    let mut vectors = Vec::with_capacity(values.len());
    for v in values {
        match reg.decompose(v)? {
            Some(vec) => vectors.push(vec),
            None => return Ok(CommonBase::Undecidable),
        }
    }
    if !reg.independent(&vectors) {
        return Ok(CommonBase::Undecidable);
    }
    Ok(match primitive_direction(&vectors) {
        None => CommonBase::NoneExists,
        Some((w, multiples)) => {
            let g = multiples.iter().fold(0i64, |g, &t| g.gcd(&t));
            let base_vec: ExponentVector = w.into_iter().map(|(k, e)| (k, e * g)).collect();
            CommonBase::Found(BaseDecomposition {
                base: reg.scalar_of(&base_vec)?,
                exponents: multiples.iter().map(|&t| (t / g) as u64).collect(),
            })
        }
    })
}

/// Common base of rationals in (0,1) by prime-exponent vectors.
pub fn common_base_rationals(values: &[BigRational]) -> Result<Option<BaseDecomposition>> {
    let scalars: Vec<Scalar> = values.iter().cloned().map(Scalar::Rational).collect();
    match common_base(&scalars)? {
        CommonBase::Found(d) => Ok(Some(d)),
        CommonBase::NoneExists => Ok(None),
        CommonBase::Undecidable => unreachable!("rationals are always decidable"),
    }
}

/// Verdict on whether `log x / log y` is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogRatio {
    Rational(BigInt, BigInt),
    Irrational,
    Undecided,
}

/// Largest convergent denominator the float route trusts for a tolerance:
/// a generic real has convergents with error ≈ 1/q², so matches with
/// `q² · tol > 10⁻²` carry no evidence of rationality.
pub fn plausible_denominator(denominator_bound: u64, tolerance: f64) -> u64 {
    let q = (0.1 / tolerance.sqrt()).floor();
    if q.is_finite() && q >= 1.0 {
        denominator_bound.min(q as u64)
    } else {
        denominator_bound
    }
}

/// Decides rationality of `log x / log y`: exactly for rational (and other
/// exactly decomposable) inputs; heuristically by continued fractions
/// otherwise, never claiming irrationality from floats.
pub fn log_ratio_rational(
    x: &Scalar,
    y: &Scalar,
    denominator_bound: u64,
    tolerance: f64,
) -> Result<LogRatio> {
    check_unit_interval(&[x.clone(), y.clone()])?;
    let mut reg = Registry::default();
    if let (Some(vx), Some(vy)) = (reg.decompose(x)?, reg.decompose(y)?) {
        let pair = [vx, vy];
        if reg.independent(&pair) {
            return Ok(match primitive_direction(&pair) {
                Some((_, t)) => {
                    let (p, q) = (BigInt::from(t[0]), BigInt::from(t[1]));
                    let g = p.gcd(&q);
                    LogRatio::Rational(p / &g, q / g)
                }
                None => LogRatio::Irrational,
            });
        }
    }
    let ratio = x.approx().ln() / y.approx().ln();
    let bound = plausible_denominator(denominator_bound, tolerance);
    Ok(match contfrac::first_close_convergent(ratio, bound, tolerance) {
        Some((p, q)) => LogRatio::Rational(BigInt::from(p), BigInt::from(q)),
        None => LogRatio::Undecided,
    })
}

/// Heuristic common base of floats in (0,1): exponents from continued
/// fractions of `log v_i / log v_0`.
pub fn float_common_base(
    values: &[f64],
    denominator_bound: u64,
    tolerance: f64,
) -> Option<(f64, Vec<u64>)> {
    let logs: Vec<f64> = values.iter().map(|v| -v.ln()).collect();
    if logs.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return None;
    }
    let bound = plausible_denominator(denominator_bound, tolerance);
    let mut fracs = Vec::with_capacity(logs.len());
    for l in &logs {
        let (p, q) = contfrac::first_close_convergent(l / logs[0], bound, tolerance)?;
        if p <= 0 {
            return None;
        }
        fracs.push((p, q));
    }
    let lcm = fracs.iter().fold(1i128, |acc, &(_, q)| acc.lcm(&q));
    let ints: Vec<i128> = fracs.iter().map(|&(p, q)| p * (lcm / q)).collect();
    let g = ints.iter().fold(0i128, |acc, &n| acc.gcd(&n));
    let exps: Vec<u64> = ints.iter().map(|&n| (n / g) as u64).collect();
    let r = logs[0] * g as f64 / lcm as f64;
    Some(((-r).exp(), exps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, IntPoly};

    fn golden() -> Scalar {
        Scalar::algebraic(IntPoly::from_i64(&[-1, 1, 1]), rat(0, 1), rat(1, 1)).unwrap()
    }

    #[test]
    fn rationals_with_common_base() {
        let d = common_base_rationals(&[rat(1, 2), rat(1, 2)]).unwrap().unwrap();
        assert_eq!(d.base, Scalar::rational(1, 2));
        assert_eq!(d.exponents, vec![1, 1]);
        let d = common_base_rationals(&[rat(1, 4), rat(1, 2)]).unwrap().unwrap();
        assert_eq!(d.base, Scalar::rational(1, 2));
        assert_eq!(d.exponents, vec![2, 1]);
        let d = common_base_rationals(&[rat(4, 9), rat(8, 27)]).unwrap().unwrap();
        assert_eq!(d.base, Scalar::rational(2, 3));
        assert_eq!(d.exponents, vec![2, 3]);
    }

    #[test]
    fn rationals_without_common_base() {
        assert_eq!(common_base_rationals(&[rat(1, 3), rat(2, 3)]).unwrap(), None);
        assert_eq!(common_base_rationals(&[rat(1, 6), rat(1, 3)]).unwrap(), None);
    }

    #[test]
    fn boundary_values_are_domain_errors() {
        assert!(common_base_rationals(&[rat(1, 1), rat(1, 2)]).is_err());
        assert!(common_base_rationals(&[rat(0, 1)]).is_err());
    }

    #[test]
    fn log_ratio_exact_cases() {
        let r = log_ratio_rational(&Scalar::rational(1, 4), &Scalar::rational(1, 2), 1_000_000, 1e-9);
        assert_eq!(r.unwrap(), LogRatio::Rational(2.into(), 1.into()));
        let r = log_ratio_rational(&Scalar::rational(1, 6), &Scalar::rational(1, 3), 1_000_000, 1e-9);
        assert_eq!(r.unwrap(), LogRatio::Irrational);
    }

    #[test]
    fn log_ratio_float_case() {
        let r = log_ratio_rational(&Scalar::Float(0.25), &Scalar::Float(0.5), 1_000_000, 1e-9);
        assert_eq!(r.unwrap(), LogRatio::Rational(2.into(), 1.into()));
        let r = log_ratio_rational(&Scalar::Float(1.0 / 6.0), &Scalar::Float(1.0 / 3.0), 1_000_000, 1e-9);
        assert_eq!(r.unwrap(), LogRatio::Undecided);
    }

    #[test]
    fn golden_power_form_and_mixed_products() {
        let g = golden();
        let d = match common_base(&[g.clone(), Scalar::power(g.clone(), 2)]).unwrap() {
            CommonBase::Found(d) => d,
            other => panic!("{other:?}"),
        };
        assert_eq!(d.base, g);
        assert_eq!(d.exponents, vec![1, 2]);
        // (1/2)·g and (1/2)·g² are not powers of one base; g is a unit
        let half = Scalar::rational(1, 2);
        let v = [half.mul(&g), half.mul(&Scalar::power(g.clone(), 2))];
        assert_eq!(common_base(&v).unwrap(), CommonBase::NoneExists);
        // (1/4)·g² and (1/2)·g are powers of (1/2)·g
        let v = [
            Scalar::rational(1, 4).mul(&Scalar::power(g.clone(), 2)),
            half.mul(&g),
        ];
        match common_base(&v).unwrap() {
            CommonBase::Found(d) => {
                assert_eq!(d.exponents, vec![2, 1]);
                assert!((d.base.approx() - 0.309_016_994_374_947_4).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_unit_algebraic_with_primes_is_undecidable() {
        // root of 2x^2 - 1 = 1/sqrt 2: its square is rational
        let s = Scalar::algebraic(IntPoly::from_i64(&[-1, 0, 2]), rat(0, 1), rat(1, 1)).unwrap();
        assert_eq!(
            common_base(&[s, Scalar::rational(1, 2)]).unwrap(),
            CommonBase::Undecidable
        );
    }

    #[test]
    fn float_base_recovery() {
        let x: f64 = 0.7;
        let (b, e) = float_common_base(&[x.powi(3), x.powi(2), x.powi(6)], 1_000_000, 1e-9).unwrap();
        assert_eq!(e, vec![3, 2, 6]);
        assert!((b - 0.7).abs() < 1e-12);
    }
}
