//! The label `λ(a) ∈ (0,1]`: the common base of `a` when
//! `a = (λ^{p_1}, …, λ^{p_n})` with coprime exponents, and 1 otherwise.
//! Tensor and tensor-power laws for it, the two-parameter product rule, and
//! a family of rational vectors with label 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix01::ZeroOneMatrix;
use crate::perron::{solve_beta, FrequencyVector};
use crate::scalars::lattice::{float_common_base, CommonBase};
use crate::scalars::{common_base, log_ratio_rational, BaseDecomposition, Interval, LogRatio, Scalar};
use crate::tensorops::kronecker_vector;

pub const DEFAULT_DENOMINATOR_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Heuristic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Heuristic => "heuristic",
        }
    }
}

/// Settings for the floating-point route.
#[derive(Clone, Copy, Debug)]
pub struct HeuristicConfig {
    pub denominator_bound: u64,
    pub tolerance: f64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            denominator_bound: DEFAULT_DENOMINATOR_BOUND,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeLabel {
    pub lambda: Scalar,
    pub mode: Mode,
    /// Present iff `lambda < 1`.
    pub decomposition: Option<BaseDecomposition>,
    pub warnings: Vec<String>,
}

impl TypeLabel {
    fn one(mode: Mode) -> TypeLabel {
        TypeLabel {
            lambda: Scalar::one(),
            mode,
            decomposition: None,
            warnings: vec![],
        }
    }

    pub fn is_one(&self) -> bool {
        self.decomposition.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda.render(),
            "lambda_value": self.lambda.approx(),
            "lambda_scalar": self.lambda.to_json(),
            "decomposition": self.decomposition.as_ref().map(|d| json!({
                "base": d.base.to_json(),
                "exponents": d.exponents,
            })),
        })
    }
}

fn dedup(values: &[Scalar]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    for v in values {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

/// `λ(a)`. Exact for rationals and for products of powers of rationals and
/// a single algebraic base; floats go through continued fractions.
pub fn detect_lambda(a: &[Scalar], cfg: &HeuristicConfig) -> Result<TypeLabel> {
    if a.is_empty() {
        return Err(Error::Precondition("empty vector".into()));
    }
    // λ depends only on the set of values
    let values = dedup(a);
    if let Some(bad) = values.iter().find(|v| !v.in_open_unit_interval()) {
        return Err(Error::Domain(format!("{} is not in (0,1)", bad.render())));
    }
    let mut warnings = Vec::new();
    if values.iter().all(Scalar::is_exact) {
        match common_base(&values)? {
            CommonBase::Found(d) => {
                return Ok(TypeLabel {
                    lambda: d.base.clone(),
                    mode: Mode::Exact,
                    decomposition: Some(expand_exponents(a, &values, d)),
                    warnings,
                })
            }
            CommonBase::NoneExists => return Ok(TypeLabel::one(Mode::Exact)),
            CommonBase::Undecidable => {
                warnings.push("exact arithmetic cannot separate these bases; used floating point".into())
            }
        }
    }
    let floats: Vec<f64> = a.iter().map(Scalar::approx).collect();
    let mut label = match float_common_base(&floats, cfg.denominator_bound, cfg.tolerance) {
        Some((base, exponents)) => TypeLabel {
            lambda: Scalar::float(base)?,
            mode: Mode::Heuristic,
            decomposition: Some(BaseDecomposition {
                base: Scalar::float(base)?,
                exponents,
            }),
            warnings: vec![],
        },
        None => TypeLabel::one(Mode::Heuristic),
    };
    label.warnings = warnings;
    Ok(label)
}

/// Maps exponents found for the distinct values back onto the full vector.
fn expand_exponents(a: &[Scalar], distinct: &[Scalar], d: BaseDecomposition) -> BaseDecomposition {
    let exponents = a
        .iter()
        .map(|v| d.exponents[distinct.iter().position(|k| k == v).expect("value was deduplicated")])
        .collect();
    BaseDecomposition { base: d.base, exponents }
}

/// `λ(a⊠b)`.
pub fn tensor_type(a: &[Scalar], b: &[Scalar], cfg: &HeuristicConfig) -> Result<TypeLabel> {
    let mut label = detect_lambda(&kronecker_vector(a, b), cfg)?;
    if label.mode == Mode::Heuristic && a.iter().chain(b).all(Scalar::is_exact) {
        label
            .warnings
            .push("inputs are exact but could not be combined exactly".into());
    }
    Ok(label)
}

/// `a^{⊠k}`, refusing results longer than `dimension_cap`.
pub fn kronecker_power(a: &[Scalar], k: u32, dimension_cap: usize) -> Result<Vec<Scalar>> {
    if k == 0 {
        return Err(Error::Precondition("power must be positive".into()));
    }
    let size = (a.len() as u128).checked_pow(k).unwrap_or(u128::MAX);
    if size > dimension_cap as u128 {
        return Err(Error::DimensionOverflow {
            requested: size.min(usize::MAX as u128) as usize,
            cap: dimension_cap,
        });
    }
    let mut out = a.to_vec();
    for _ in 1..k {
        out = kronecker_vector(&out, a);
    }
    Ok(out)
}

/// `λ(a^{⊠k})` computed on the full Kronecker power.
pub fn power_type_direct(a: &[Scalar], k: u32, dimension_cap: usize, cfg: &HeuristicConfig) -> Result<TypeLabel> {
    detect_lambda(&kronecker_power(a, k, dimension_cap)?, cfg)
}

/// Exponent `r` with `λ((x^p, x^q)^{⊠k}) = x^r`: `r = gcd(|p - q|, k)`,
/// where `gcd(k, 0) = k`.
pub fn power_type_ck2(p: u64, q: u64, k: u64) -> Result<u64> {
    if p == 0 || q == 0 || k == 0 {
        return Err(Error::Precondition("p, q and k must be positive".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Precondition(format!("gcd({p}, {q}) ≠ 1")));
    }
    Ok(p.abs_diff(q).gcd(&k))
}

/// `r` with `label = x^r`, when the label is exactly a power of `x`.
pub fn exponent_over(label: &TypeLabel, x: &Scalar, cfg: &HeuristicConfig) -> Result<Option<u64>> {
    if label.is_one() {
        return Ok(None);
    }
    Ok(match log_ratio_rational(&label.lambda, x, cfg.denominator_bound, cfg.tolerance)? {
        LogRatio::Rational(p, q) if q.is_one() && p.is_positive() => p.try_into().ok(),
        _ => None,
    })
}

fn is_exactly_one(s: &Scalar) -> bool {
    s.as_rational().is_some_and(|q| q.is_one()) || matches!(s, Scalar::Float(f) if *f == 1.0)
}

/// The label of a tensor product of two factors with labels `λ` and `μ`:
/// `τ` when `(λ, μ) = (τ^p, τ^q)` with coprime `p, q` and both in (0,1),
/// otherwise 1.
pub fn afd_tensor_rule(lambda: &Scalar, mu: &Scalar, cfg: &HeuristicConfig) -> Result<TypeLabel> {
    for v in [lambda, mu] {
        if !(v.in_open_unit_interval() || is_exactly_one(v)) {
            return Err(Error::Domain(format!("{} is not in (0,1]", v.render())));
        }
    }
    if is_exactly_one(lambda) || is_exactly_one(mu) {
        let exact = lambda.is_exact() && mu.is_exact();
        return Ok(TypeLabel::one(if exact { Mode::Exact } else { Mode::Heuristic }));
    }
    detect_lambda(&[lambda.clone(), mu.clone()], cfg)
}

/// Rational vectors summing to 1 whose label is 1: for even `n`, `n-1`
/// entries `1/(n+1)` then `2/(n+1)`; for odd `n`, `n-2` entries `1/(n+2)`
/// then two entries `2/(n+2)`.
pub fn iii1_family(n: usize) -> Result<Vec<BigRational>> {
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n} < 2")));
    }
    let q = |num: usize, den: usize| BigRational::new(BigInt::from(num), BigInt::from(den));
    Ok(if n.is_multiple_of(2) {
        let mut v = vec![q(1, n + 1); n - 1];
        v.push(q(2, n + 1));
        v
    } else {
        let mut v = vec![q(1, n + 2); n - 2];
        v.extend([q(2, n + 2), q(2, n + 2)]);
        v
    })
}

/// For rational `ω`, the subgroup generated by `β ω_1, …, β ω_n` is `rℤ`
/// with `r = β · gcd(ω)`, so the label should be `e^{-r}`.
#[derive(Clone, Debug)]
pub struct ModulusCrossCheck {
    pub beta: Interval,
    pub modulus: Interval,
    pub lambda_from_modulus: Interval,
    pub label: TypeLabel,
    pub residual: f64,
    pub agree: bool,
}

/// `gcd` of positive rationals: `gcd(numerators) / lcm(denominators)` after
/// reduction.
pub fn rational_gcd(values: &[BigRational]) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    BigRational::new(num, den)
}

pub fn oka_cross_check(
    a: &ZeroOneMatrix,
    omega: &[BigRational],
    precision: f64,
    cfg: &HeuristicConfig,
) -> Result<ModulusCrossCheck> {
    let freq = FrequencyVector::from_rationals(omega)?;
    let sol = solve_beta(a, &freq, precision)?;
    let g = Interval::from_rational(&rational_gcd(omega));
    let modulus = sol.beta * g;
    let lambda_from_modulus = (-modulus).exp();
    let label = detect_lambda(sol.param.entries(), cfg)?;
    let residual = (label.lambda.enclose(1e-15) - lambda_from_modulus).mag();
    Ok(ModulusCrossCheck {
        beta: sol.beta,
        modulus,
        lambda_from_modulus,
        agree: !label.is_one() && residual <= cfg.tolerance,
        label,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perron::solve_power_equation;
    use crate::scalars::{rat, IntPoly};

    fn cfg() -> HeuristicConfig {
        HeuristicConfig::default()
    }

    fn rs(v: &[(i64, i64)]) -> Vec<Scalar> {
        v.iter().map(|&(p, q)| Scalar::rational(p, q)).collect()
    }

    fn golden() -> Scalar {
        Scalar::algebraic(IntPoly::from_i64(&[-1, 1, 1]), rat(0, 1), rat(1, 1)).unwrap()
    }

    #[test]
    fn rational_labels() {
        let l = detect_lambda(&rs(&[(1, 2), (1, 2)]), &cfg()).unwrap();
        assert_eq!(l.lambda, Scalar::rational(1, 2));
        assert_eq!(l.mode, Mode::Exact);
        assert_eq!(l.decomposition.unwrap().exponents, vec![1, 1]);
        let l = detect_lambda(&rs(&[(1, 3), (2, 3)]), &cfg()).unwrap();
        assert!(l.is_one() && l.mode == Mode::Exact);
        let l = detect_lambda(&rs(&[(1, 4), (1, 8)]), &cfg()).unwrap();
        assert_eq!(l.lambda, Scalar::rational(1, 2));
        assert_eq!(l.decomposition.unwrap().exponents, vec![2, 3]);
        assert!(matches!(detect_lambda(&rs(&[(1, 2), (3, 2)]), &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn golden_power_form() {
        let c = golden();
        let a = vec![c.clone(), Scalar::power(c.clone(), 2)];
        let l = detect_lambda(&a, &cfg()).unwrap();
        assert_eq!(l.mode, Mode::Exact);
        assert_eq!(l.lambda, c);
        assert!((l.lambda.approx() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn float_labels() {
        let x: f64 = 0.3;
        let l = detect_lambda(&[Scalar::float(x * x).unwrap(), Scalar::float(x.powi(3)).unwrap()], &cfg()).unwrap();
        assert_eq!(l.mode, Mode::Heuristic);
        assert!((l.lambda.approx() - x).abs() < 1e-12);
        let l = detect_lambda(&[Scalar::float(0.5).unwrap(), Scalar::float(1.0 / 3.0).unwrap()], &cfg()).unwrap();
        assert!(l.is_one());
    }

    #[test]
    fn tensor_labels() {
        let l = tensor_type(&rs(&[(1, 3), (2, 3)]), &rs(&[(1, 2), (1, 2)]), &cfg()).unwrap();
        assert!(l.is_one() && l.mode == Mode::Exact);
        let c = golden();
        let cv = vec![c.clone(), Scalar::power(c, 2)];
        let l = tensor_type(&rs(&[(1, 2), (1, 2)]), &cv, &cfg()).unwrap();
        assert!(l.is_one() && l.mode == Mode::Exact, "{l:?}");
        let l = tensor_type(&rs(&[(1, 2), (1, 2)]), &rs(&[(1, 3), (1, 3), (1, 3)]), &cfg()).unwrap();
        assert_eq!(l.lambda, Scalar::rational(1, 6));
    }

    #[test]
    fn power_labels() {
        let l = power_type_direct(&rs(&[(1, 2), (1, 2)]), 3, 4096, &cfg()).unwrap();
        assert_eq!(l.lambda, Scalar::rational(1, 8));
        let l = power_type_direct(&rs(&[(1, 3), (2, 3)]), 2, 4096, &cfg()).unwrap();
        assert!(l.is_one());
        let x = golden();
        let a = vec![Scalar::power(x.clone(), 2), x.clone()];
        let l = power_type_direct(&a, 5, 4096, &cfg()).unwrap();
        assert_eq!(l.lambda, x);
        assert!(matches!(
            power_type_direct(&a, 13, 4096, &cfg()),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn power_formula() {
        assert_eq!(power_type_ck2(1, 2, 7).unwrap(), 1);
        assert_eq!(power_type_ck2(1, 3, 4).unwrap(), 2);
        assert_eq!(power_type_ck2(5, 11, 6).unwrap(), 6);
        assert_eq!(power_type_ck2(1, 1, 5).unwrap(), 5);
        assert!(power_type_ck2(2, 4, 1).is_err());
    }

    #[test]
    fn formula_matches_direct_for_quintic_pair() {
        let x = solve_power_equation(&[5, 11], 1e-15).unwrap();
        let a = vec![Scalar::power(x.clone(), 5), Scalar::power(x.clone(), 11)];
        for k in 1..=6 {
            let l = power_type_direct(&a, k, 4096, &cfg()).unwrap();
            let r = exponent_over(&l, &x, &cfg()).unwrap();
            assert_eq!(r, Some(power_type_ck2(5, 11, u64::from(k)).unwrap()), "k = {k}");
        }
    }

    #[test]
    fn two_parameter_rule() {
        let l = afd_tensor_rule(&Scalar::rational(1, 4), &Scalar::rational(1, 8), &cfg()).unwrap();
        assert_eq!(l.lambda, Scalar::rational(1, 2));
        assert!(afd_tensor_rule(&Scalar::rational(1, 2), &Scalar::rational(1, 3), &cfg()).unwrap().is_one());
        assert!(afd_tensor_rule(&Scalar::rational(1, 2), &Scalar::one(), &cfg()).unwrap().is_one());
        let tau = rat(4, 9);
        let l = afd_tensor_rule(
            &Scalar::from_ratio(&tau * &tau),
            &Scalar::from_ratio(&tau * &tau * &tau),
            &cfg(),
        )
        .unwrap();
        assert_eq!(l.lambda, Scalar::from_ratio(tau));
    }

    #[test]
    fn family_vectors() {
        assert_eq!(iii1_family(2).unwrap(), vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(iii1_family(3).unwrap(), vec![rat(1, 5), rat(2, 5), rat(2, 5)]);
        assert_eq!(iii1_family(4).unwrap(), vec![rat(1, 5), rat(1, 5), rat(1, 5), rat(2, 5)]);
        for n in 2..=8 {
            let v = iii1_family(n).unwrap();
            assert_eq!(v.len(), n);
            assert_eq!(v.iter().sum::<BigRational>(), BigRational::one());
        }
        assert!(iii1_family(1).is_err());
    }

    #[test]
    fn modulus_matches_label() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        let c = oka_cross_check(&f2, &[rat(1, 1), rat(2, 1)], 1e-13, &cfg()).unwrap();
        assert!(c.agree, "{c:?}");
        assert!((c.lambda_from_modulus.mid() - 2.0 / (1.0 + 5f64.sqrt())).abs() < 1e-11);
        let c = oka_cross_check(&f2, &[rat(2, 3), rat(4, 5)], 1e-13, &cfg()).unwrap();
        assert!(c.agree, "{c:?}");
        assert_eq!(rational_gcd(&[rat(2, 3), rat(4, 5)]), rat(2, 15));
    }
}
