//! The states `ρ_a(s_J s_K*) = δ_JK a_{j1} ⋯ a_{j(m-1)} x_{jm}` attached to a
//! point `a ∈ Λ(A)` with Perron vector `x` of `âA`, the gauge action and
//! a pointwise check of the KMS condition.

use std::fmt;
use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::ckwords::{monomial_product, nonzero_monomials, Monomial, NormalForm};
use crate::par::{map_reduce, Execution};
use crate::error::{Error, Result};
use crate::matrix01::ZeroOneMatrix;
use crate::perron::{
    exact_perron_vector, pf_data, Certificate, FrequencyVector, NonnegMatrix, ParamVector,
    DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE,
};
use crate::scalars::{Interval, Scalar};

/// A value known exactly or through an enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum Enclosed {
    Exact(BigRational),
    Interval(Interval),
}

impl Enclosed {
    pub fn zero() -> Enclosed {
        Enclosed::Exact(BigRational::zero())
    }

    pub fn one() -> Enclosed {
        Enclosed::Exact(BigRational::one())
    }

    pub fn interval(&self) -> Interval {
        match self {
            Enclosed::Exact(q) => Interval::from_rational(q),
            Enclosed::Interval(i) => *i,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Enclosed::Exact(q) => Some(q),
            Enclosed::Interval(_) => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Enclosed::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Enclosed::Interval(i) => i.mid(),
        }
    }

    pub fn width(&self) -> f64 {
        match self {
            Enclosed::Exact(_) => 0.0,
            Enclosed::Interval(i) => i.width(),
        }
    }

    /// Upper bound on `|self - other|`.
    pub fn distance(&self, other: &Enclosed) -> f64 {
        match (self, other) {
            (Enclosed::Exact(p), Enclosed::Exact(q)) => (p - q).abs().to_f64().unwrap_or(f64::INFINITY),
            _ => (self.interval() - other.interval()).mag(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Enclosed {
        match self {
            Enclosed::Exact(q) => Enclosed::Exact(q * c),
            Enclosed::Interval(i) => Enclosed::Interval(*i * Interval::from_rational(c)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Enclosed::Exact(q) => json!({
                "exact": Scalar::Rational(q.clone()).to_json(),
                "value": q.to_f64(),
                "width": 0.0,
            }),
            Enclosed::Interval(i) => json!({
                "interval": [i.lo(), i.hi()],
                "value": i.mid(),
                "width": i.width(),
            }),
        }
    }
}

impl Add for Enclosed {
    type Output = Enclosed;
    fn add(self, rhs: Enclosed) -> Enclosed {
        match (self, rhs) {
            (Enclosed::Exact(p), Enclosed::Exact(q)) => Enclosed::Exact(p + q),
            (l, r) => Enclosed::Interval(l.interval() + r.interval()),
        }
    }
}

impl Mul for Enclosed {
    type Output = Enclosed;
    fn mul(self, rhs: Enclosed) -> Enclosed {
        match (self, rhs) {
            (Enclosed::Exact(p), Enclosed::Exact(q)) => Enclosed::Exact(p * q),
            (Enclosed::Exact(p), _) | (_, Enclosed::Exact(p)) if p.is_zero() => Enclosed::zero(),
            (l, r) => Enclosed::Interval(l.interval() * r.interval()),
        }
    }
}

impl fmt::Display for Enclosed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Enclosed::Exact(q) => write!(f, "{q}"),
            Enclosed::Interval(i) => write!(f, "{i}"),
        }
    }
}

/// `a ∈ Λ(A)` together with the normalized Perron vector `x` of `âA`.
#[derive(Clone, Debug)]
pub struct StateSpec {
    matrix: ZeroOneMatrix,
    a: Vec<Interval>,
    x: Vec<Interval>,
    a_exact: Option<Vec<BigRational>>,
    x_exact: Option<Vec<BigRational>>,
    eigenvalue: Interval,
}

impl StateSpec {
    pub fn new(param: &ParamVector, precision: f64) -> Result<StateSpec> {
        let slack = match param.certificate() {
            Certificate::Verified { tolerance } => *tolerance,
            _ => DEFAULT_TOLERANCE,
        };
        StateSpec::from_enclosures(
            param.matrix().clone(),
            param.enclosures().to_vec(),
            param.rational_entries(),
            slack,
            precision,
        )
    }

    /// Builds the state from enclosures of `a`, computing `x` afresh.
    /// Fails unless `PFE(âA)` is within `slack` of 1.
    pub fn from_enclosures(
        matrix: ZeroOneMatrix,
        a: Vec<Interval>,
        a_exact: Option<Vec<BigRational>>,
        slack: f64,
        precision: f64,
    ) -> Result<StateSpec> {
        let x_exact = a_exact.as_ref().and_then(|q| exact_perron_vector(&matrix, q));
        let pf = pf_data(&NonnegMatrix::scaled_rows(&matrix, &a)?, precision, DEFAULT_MAX_ITERATIONS)?;
        if !pf.eigenvalue.widen(slack).contains(1.0) {
            return Err(Error::Precondition(format!(
                "PFE(âA) = {} is not 1; the vector is not in Λ(A)",
                pf.eigenvalue
            )));
        }
        let x = match &x_exact {
            Some(q) => q.iter().map(Interval::from_rational).collect(),
            None => pf.eigenvector,
        };
        Ok(StateSpec {
            matrix,
            a,
            x,
            a_exact,
            x_exact,
            eigenvalue: pf.eigenvalue,
        })
    }

    pub fn matrix(&self) -> &ZeroOneMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn a(&self) -> &[Interval] {
        &self.a
    }

    pub fn x(&self) -> &[Interval] {
        &self.x
    }

    pub fn a_exact(&self) -> Option<&[BigRational]> {
        self.a_exact.as_deref()
    }

    pub fn x_exact(&self) -> Option<&[BigRational]> {
        self.x_exact.as_deref()
    }

    pub fn eigenvalue(&self) -> Interval {
        self.eigenvalue
    }

    /// `ρ_a(s_J s_K*)` on index slices, assumed in range.
    pub fn eval_slices(&self, j: &[usize], k: &[usize]) -> Enclosed {
        if j != k {
            return Enclosed::zero();
        }
        let Some((&last, init)) = j.split_last() else {
            return Enclosed::one();
        };
        if let (Some(a), Some(x)) = (&self.a_exact, &self.x_exact) {
            let mut v = x[last - 1].clone();
            for &i in init {
                v *= &a[i - 1];
            }
            return Enclosed::Exact(v);
        }
        Enclosed::Interval(self.eval_interval(j, k))
    }

    /// Interval-only evaluation without allocation.
    pub fn eval_interval(&self, j: &[usize], k: &[usize]) -> Interval {
        if j != k {
            return Interval::point(0.0);
        }
        match j.split_last() {
            None => Interval::point(1.0),
            Some((&last, init)) => init.iter().fold(self.x[last - 1], |acc, &i| acc * self.a[i - 1]),
        }
    }

    pub fn eval_monomial(&self, m: &Monomial) -> Enclosed {
        self.eval_slices(&m.j, &m.k)
    }
}

fn check_dims(spec: &StateSpec, m: &Monomial) -> Result<()> {
    let n = spec.dim();
    match m.j.iter().chain(&m.k).find(|&&i| i == 0 || i > n) {
        Some(&i) => Err(Error::IndexOutOfRange { index: i, n }),
        None => Ok(()),
    }
}

/// Linear extension of `ρ_a` to a normal form.
pub fn eval_state(spec: &StateSpec, x: &NormalForm) -> Result<Enclosed> {
    let mut total = Enclosed::zero();
    for (m, c) in x.terms() {
        check_dims(spec, m)?;
        total = total + spec.eval_monomial(m).scale(c);
    }
    Ok(total)
}

/// `ρ^(n)(s_J s_K*) = δ_JK n^{-|J|}` on `O_n`.
pub fn quasi_free_eval(n: usize, j: &[usize], k: &[usize]) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::InvalidMatrix(format!("dimension {n} < 2")));
    }
    if let Some(&i) = j.iter().chain(k).find(|&&i| i == 0 || i > n) {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if j != k {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(1.into(), num_bigint::BigInt::from(n).pow(j.len() as u32)))
}

/// The factor `e^{-β(ω(J) - ω(K))}` by which `α_{iβ}` multiplies `s_J s_K*`.
pub fn gauge_factor(omega: &FrequencyVector, beta: Interval, m: &Monomial) -> Result<Enclosed> {
    let n = omega.len();
    if let Some(&i) = m.j.iter().chain(&m.k).find(|&&i| i == 0 || i > n) {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if let Some(w) = omega.exact() {
        let sum = |idx: &[usize]| idx.iter().fold(BigRational::zero(), |acc, &i| acc + &w[i - 1]);
        let diff = sum(&m.j) - sum(&m.k);
        if diff.is_zero() {
            return Ok(Enclosed::one());
        }
        return Ok(Enclosed::Interval((-(beta * Interval::from_rational(&diff))).exp()));
    }
    let diff = omega.weight(&m.j) - omega.weight(&m.k);
    Ok(Enclosed::Interval((-(beta * diff)).exp()))
}

/// Both sides of `ρ(x α_{iβ}(y)) = ρ(y x)` and their distance.
#[derive(Clone, Debug)]
pub struct KmsReport {
    pub lhs: Enclosed,
    pub rhs: Enclosed,
    pub residual: f64,
    pub pass: bool,
}

/// Checks that `a_i = e^{-βω_i}` within `tolerance`.
pub fn check_gauge_compatible(spec: &StateSpec, omega: &FrequencyVector, beta: Interval, tolerance: f64) -> Result<()> {
    if omega.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: omega.len(),
        });
    }
    for (i, (&a, &w)) in spec.a().iter().zip(omega.entries()).enumerate() {
        let expected = (-(beta * w)).exp();
        if !expected.widen(tolerance).intersects(&a) {
            return Err(Error::Precondition(format!(
                "a_{} = {a} differs from e^(-βω_{}) = {expected}",
                i + 1,
                i + 1
            )));
        }
    }
    Ok(())
}

pub fn kms_check(
    spec: &StateSpec,
    omega: &FrequencyVector,
    beta: Interval,
    x: &Monomial,
    y: &Monomial,
    tolerance: f64,
) -> Result<KmsReport> {
    check_gauge_compatible(spec, omega, beta, tolerance)?;
    kms_check_unchecked(spec, omega, beta, x, y, tolerance)
}

/// `kms_check` without the compatibility test, for sweeps that did it once.
pub fn kms_check_unchecked(
    spec: &StateSpec,
    omega: &FrequencyVector,
    beta: Interval,
    x: &Monomial,
    y: &Monomial,
    tolerance: f64,
) -> Result<KmsReport> {
    check_dims(spec, x)?;
    check_dims(spec, y)?;
    let a = spec.matrix();
    let rho = |p: &Monomial, q: &Monomial| {
        monomial_product(a, p, q)
            .iter()
            .fold(Enclosed::zero(), |acc, m| acc + spec.eval_monomial(m))
    };
    let lhs = gauge_factor(omega, beta, y)? * rho(x, y);
    let rhs = rho(y, x);
    let residual = lhs.distance(&rhs);
    Ok(KmsReport {
        pass: residual <= tolerance,
        lhs,
        rhs,
        residual,
    })
}

/// Outcome of `kms_sweep`.
#[derive(Clone, Debug)]
pub struct KmsSweepReport {
    pub checked: usize,
    pub max_residual: f64,
    pub worst: Option<(Monomial, Monomial)>,
    pub pass: bool,
}

/// `kms_check` on every pair of nonzero monomials with word lengths at most
/// `max_len`.
pub fn kms_sweep(
    spec: &StateSpec,
    omega: &FrequencyVector,
    beta: Interval,
    max_len: usize,
    tolerance: f64,
    exec: Execution,
) -> Result<KmsSweepReport> {
    check_gauge_compatible(spec, omega, beta, tolerance)?;
    let monomials = nonzero_monomials(spec.matrix(), max_len);
    type Acc = Result<(usize, f64, Option<(Monomial, Monomial)>)>;
    let merged: Acc = map_reduce(
        exec,
        &monomials,
        || Ok((0, 0.0, None)),
        |x| -> Acc {
            let mut acc = (0usize, 0.0f64, None);
            for y in &monomials {
                let r = kms_check_unchecked(spec, omega, beta, x, y, tolerance)?;
                acc.0 += 1;
                if r.residual > acc.1 || acc.2.is_none() {
                    acc.1 = acc.1.max(r.residual);
                    acc.2 = Some((x.clone(), y.clone()));
                }
            }
            Ok(acc)
        },
        |a, b| {
            let (a, b) = (a?, b?);
            let (hi, lo) = if b.1 > a.1 { (b, a) } else { (a, b) };
            Ok((hi.0 + lo.0, hi.1, hi.2))
        },
    );
    let (checked, max_residual, worst) = merged?;
    Ok(KmsSweepReport {
        checked,
        max_residual,
        worst,
        pass: max_residual <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ckwords::{normalize, parse_word};
    use crate::perron::{canonical_point, in_lambda, solve_beta, Membership};
    use crate::scalars::rat;

    const PHI: f64 = 1.618_033_988_749_895;

    fn golden() -> ZeroOneMatrix {
        ZeroOneMatrix::new(&[vec![1, 1], vec![1, 0]]).unwrap()
    }

    fn accepted(a: &ZeroOneMatrix, v: &[Scalar]) -> ParamVector {
        match in_lambda(a, v, 1e-9).unwrap() {
            Membership::Accepted(p) => p,
            Membership::Rejected { pfe } => panic!("rejected, PFE {pfe}"),
        }
    }

    #[test]
    fn half_half_state() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        let p = accepted(&f2, &[Scalar::rational(1, 2), Scalar::rational(1, 2)]);
        let spec = StateSpec::new(&p, 1e-12).unwrap();
        let v = eval_state(&spec, &normalize(&f2, &parse_word("s1 s1*").unwrap()).unwrap()).unwrap();
        assert_eq!(v, Enclosed::Exact(rat(1, 2)));
        let off = eval_state(&spec, &NormalForm::monomial(Monomial::new(vec![1], vec![2]))).unwrap();
        assert_eq!(off, Enclosed::zero());
        assert_eq!(eval_state(&spec, &NormalForm::unit()).unwrap(), Enclosed::one());
    }

    #[test]
    fn golden_canonical_state() {
        let g = golden();
        let spec = StateSpec::new(&canonical_point(&g, 1e-12).unwrap(), 1e-13).unwrap();
        let m = Monomial::new(vec![1, 2], vec![1, 2]);
        let v = spec.eval_monomial(&m).interval();
        assert!((v.mid() - PHI.powi(-3)).abs() < 1e-12, "{v}");
        assert!(v.width() < 1e-10);
    }

    #[test]
    fn quasi_free_values() {
        assert_eq!(quasi_free_eval(2, &[1, 2], &[1, 2]).unwrap(), rat(1, 4));
        assert_eq!(quasi_free_eval(3, &[1], &[2]).unwrap(), rat(0, 1));
        assert_eq!(quasi_free_eval(2, &[], &[]).unwrap(), rat(1, 1));
        assert!(quasi_free_eval(2, &[3], &[3]).is_err());
    }

    #[test]
    fn gauge_factors() {
        let w11 = FrequencyVector::from_rationals(&[rat(1, 1), rat(1, 1)]).unwrap();
        let ln2 = Interval::point(2.0).ln();
        assert_eq!(gauge_factor(&w11, ln2, &Monomial::new(vec![1], vec![1])).unwrap(), Enclosed::one());
        let g = gauge_factor(&w11, ln2, &Monomial::new(vec![1], vec![])).unwrap().interval();
        assert!(g.contains(0.5));
        let w12 = FrequencyVector::from_rationals(&[rat(1, 1), rat(2, 1)]).unwrap();
        let g = gauge_factor(&w12, Interval::point(PHI).ln(), &Monomial::new(vec![2], vec![])).unwrap();
        assert!((g.approx() - PHI.powi(-2)).abs() < 1e-14);
    }

    #[test]
    fn kms_examples() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        let w = FrequencyVector::from_rationals(&[rat(1, 1), rat(1, 1)]).unwrap();
        let sol = solve_beta(&f2, &w, 1e-13).unwrap();
        let spec = StateSpec::new(&sol.param, 1e-13).unwrap();
        let x = Monomial::new(vec![1], vec![]);
        let y = Monomial::new(vec![], vec![1]);
        let r = kms_check(&spec, &w, sol.beta, &x, &y, 1e-9).unwrap();
        // ρ(s1 · 2 s1*) = 2 · 1/2 and ρ(s1* s1) = ρ(1) = 1
        assert!(r.pass, "{r:?}");
        assert!((r.lhs.approx() - 1.0).abs() < 1e-10 && (r.rhs.approx() - 1.0).abs() < 1e-10);

        let g = golden();
        let w = FrequencyVector::from_rationals(&[rat(1, 1), rat(2, 1)]).unwrap();
        let sol = solve_beta(&g, &w, 1e-13).unwrap();
        let spec = StateSpec::new(&sol.param, 1e-13).unwrap();
        let r = kms_check(&spec, &w, sol.beta, &x, &y, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        let unit = Monomial::unit();
        let r = kms_check(&spec, &w, sol.beta, &unit, &Monomial::new(vec![1, 2], vec![1, 2]), 1e-9).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn kms_rejects_incompatible_spec() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        let p = accepted(&f2, &[Scalar::rational(1, 3), Scalar::rational(2, 3)]);
        let spec = StateSpec::new(&p, 1e-12).unwrap();
        let w = FrequencyVector::from_rationals(&[rat(1, 1), rat(1, 1)]).unwrap();
        let r = kms_check(&spec, &w, Interval::point(2.0).ln(), &Monomial::unit(), &Monomial::unit(), 1e-9);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn full_matrix_reduces_to_product_of_a() {
        let f3 = ZeroOneMatrix::full(3).unwrap();
        let a = [Scalar::rational(1, 6), Scalar::rational(1, 3), Scalar::rational(1, 2)];
        let spec = StateSpec::new(&accepted(&f3, &a), 1e-12).unwrap();
        let v = spec.eval_slices(&[3, 1, 2], &[3, 1, 2]);
        assert_eq!(v, Enclosed::Exact(rat(1, 2) * rat(1, 6) * rat(1, 3)));
    }
}
