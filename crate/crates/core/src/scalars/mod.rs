//! The exact number tower used for parameters, eigenvalues and type labels.
//!
//! A [`Scalar`] is an exact rational, a real algebraic number, a float, or a
//! symbolic power/product of those. Exact values are kept exact under the
//! multiplications the Kronecker product needs; everything else goes through
//! [`Interval`] enclosures.

mod algebraic;
pub mod contfrac;
mod interval;
pub mod lattice;
mod poly;
pub mod primes;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

pub use algebraic::Algebraic;
pub use interval::{rational_hi, rational_lo, Interval};
pub use lattice::{
    common_base, common_base_rationals, log_ratio_rational, BaseDecomposition, LogRatio,
};
pub use poly::IntPoly;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Algebraic(Algebraic),
    Float(f64),
    /// `base^exp` with `exp >= 2` and a base that is neither rational nor a
    /// power itself.
    Power { base: Box<Scalar>, exp: u32 },
    /// Product of at least two factors: at most one rational, the rest
    /// pairwise distinct algebraic bases or their powers.
    Product(Vec<Scalar>),
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(rat(num, den))
    }

    pub fn from_ratio(q: BigRational) -> Scalar {
        Scalar::Rational(q)
    }

    pub fn one() -> Scalar {
        Scalar::Rational(BigRational::one())
    }

    pub fn float(value: f64) -> Result<Scalar> {
        if value.is_finite() {
            Ok(Scalar::Float(value))
        } else {
            Err(Error::InvalidScalar(format!("non-finite float {value}")))
        }
    }

    /// Builds an algebraic scalar, collapsing to a rational when the isolated
    /// root is rational.
    pub fn algebraic(poly: IntPoly, lo: BigRational, hi: BigRational) -> Result<Scalar> {
        let a = Algebraic::new(poly, lo, hi)?;
        Ok(match a.as_rational() {
            Some(q) => Scalar::Rational(q),
            None => Scalar::Algebraic(a),
        })
    }

    /// `base^exp`, canonicalized.
    pub fn power(base: Scalar, exp: u32) -> Scalar {
        match (base, exp) {
            (_, 0) => Scalar::one(),
            (b, 1) => b,
            (Scalar::Rational(q), e) => Scalar::Rational(num_traits::pow(q, e as usize)),
            (Scalar::Float(f), e) => Scalar::Float(f.powi(e as i32)),
            (Scalar::Power { base, exp }, e) => Scalar::Power { base, exp: exp * e },
            (Scalar::Product(fs), e) => {
                Scalar::product(fs.into_iter().map(|f| Scalar::power(f, e)).collect())
            }
            (b @ Scalar::Algebraic(_), e) => Scalar::Power {
                base: Box::new(b),
                exp: e,
            },
        }
    }

    /// Canonical product of factors. Floats absorb everything into a float.
    pub fn product(factors: Vec<Scalar>) -> Scalar {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                Scalar::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.iter().any(|f| matches!(f, Scalar::Float(_))) {
            return Scalar::Float(flat.iter().map(Scalar::approx).product());
        }
        let mut rational = BigRational::one();
        let mut powers: Vec<(Scalar, u32)> = Vec::new();
        for f in flat {
            let (base, e) = match f {
                Scalar::Rational(q) => {
                    rational *= q;
                    continue;
                }
                Scalar::Power { base, exp } => (*base, exp),
                other => (other, 1),
            };
            match powers.iter_mut().find(|(b, _)| *b == base) {
                Some(slot) => slot.1 += e,
                None => powers.push((base, e)),
            }
        }
        let mut out: Vec<Scalar> = Vec::new();
        if !rational.is_one() || powers.is_empty() {
            out.push(Scalar::Rational(rational));
        }
        out.extend(powers.into_iter().map(|(b, e)| Scalar::power(b, e)));
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Scalar::Product(out)
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar::product(vec![self.clone(), other.clone()])
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// No float anywhere in the expression.
    pub fn is_exact(&self) -> bool {
        match self {
            Scalar::Rational(_) | Scalar::Algebraic(_) => true,
            Scalar::Float(_) => false,
            Scalar::Power { base, .. } => base.is_exact(),
            Scalar::Product(fs) => fs.iter().all(Scalar::is_exact),
        }
    }

    /// An enclosing interval of width at most roughly `precision` (limited
    /// below by f64 resolution).
    pub fn enclose(&self, precision: f64) -> Interval {
        match self {
            Scalar::Rational(q) => Interval::from_rational(q),
            Scalar::Float(f) => Interval::point(*f),
            Scalar::Algebraic(a) => {
                let p = BigRational::from_float(precision.max(1e-300)).unwrap_or_else(|| rat(1, 1 << 50));
                let r = a.refined(&p);
                let (lo, hi) = r.interval();
                Interval::from_rational_bounds(lo, hi)
            }
            Scalar::Power { base, exp } => {
                let b = base.enclose(precision / (4.0 * f64::from(*exp)));
                b.powi(*exp)
            }
            Scalar::Product(fs) => {
                let k = fs.len() as f64;
                fs.iter()
                    .map(|f| f.enclose(precision / (4.0 * k)))
                    .fold(Interval::point(1.0), |acc, i| acc * i)
            }
        }
    }

    /// Rational enclosure of width at most `precision`: degenerate for
    /// rationals, bisection for algebraic numbers.
    pub fn refine(&self, precision: &BigRational) -> Result<(BigRational, BigRational)> {
        if !precision.is_positive() {
            return Err(Error::Precondition("precision must be positive".into()));
        }
        match self {
            Scalar::Rational(q) => Ok((q.clone(), q.clone())),
            Scalar::Algebraic(a) => {
                let r = a.refined(precision);
                let (lo, hi) = r.interval();
                Ok((lo.clone(), hi.clone()))
            }
            Scalar::Float(f) => {
                let q = BigRational::from_float(*f)
                    .ok_or_else(|| Error::InvalidScalar("non-finite float".into()))?;
                Ok((q.clone(), q))
            }
            other => {
                let p = precision.to_f64().unwrap_or(1e-12).max(1e-300);
                let i = other.enclose(p);
                Ok((rational_lo(&i), rational_hi(&i)))
            }
        }
    }

    /// Midpoint approximation.
    pub fn approx(&self) -> f64 {
        match self {
            Scalar::Float(f) => *f,
            other => other.enclose(1e-17).mid(),
        }
    }

    /// True iff the value lies strictly between 0 and 1.
    pub fn in_open_unit_interval(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_positive() && q < &BigRational::one(),
            Scalar::Float(f) => *f > 0.0 && *f < 1.0,
            Scalar::Algebraic(a) => a.is_in_open_unit_interval(),
            // products of values in (0,1) stay in (0,1)
            Scalar::Power { base, .. } if base.in_open_unit_interval() => true,
            Scalar::Product(fs) if fs.iter().all(Scalar::in_open_unit_interval) => true,
            other => {
                let i = other.enclose(1e-15);
                i.lo() > 0.0 && i.hi() < 1.0
            }
        }
    }

    /// Plain-text rendering: `1/2`, `root of ...`, `(…)^k`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Rational(q) => json!({
                "type": "rational",
                "num": int_json(q.numer()),
                "den": int_json(q.denom()),
            }),
            Scalar::Algebraic(a) => {
                let (lo, hi) = a.interval();
                json!({
                    "type": "algebraic",
                    "poly": a.poly().coeffs().iter().map(int_json).collect::<Vec<_>>(),
                    "interval": [lo.to_string(), hi.to_string()],
                })
            }
            Scalar::Float(f) => json!({"type": "float", "value": f}),
            Scalar::Power { base, exp } => json!({
                "type": "power",
                "base": base.to_json(),
                "exp": exp,
            }),
            Scalar::Product(fs) => json!({
                "type": "product",
                "factors": fs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Scalar> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse(format!("scalar must be an object, got {v}")))?;
        let kind = obj
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("scalar is missing \"type\"".into()))?;
        let field = |name: &str| {
            obj.get(name)
                .ok_or_else(|| Error::Parse(format!("{kind} scalar is missing \"{name}\"")))
        };
        match kind {
            "rational" => {
                let num = parse_int(field("num")?)?;
                let den = parse_int(field("den")?)?;
                if den.is_zero() {
                    return Err(Error::InvalidScalar("zero denominator".into()));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            "algebraic" => {
                let poly = field("poly")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("\"poly\" must be an array".into()))?
                    .iter()
                    .map(parse_int)
                    .collect::<Result<Vec<_>>>()?;
                let iv = field("interval")?
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Parse("\"interval\" must be a pair".into()))?;
                let lo = parse_rational_value(&iv[0])?;
                let hi = parse_rational_value(&iv[1])?;
                Scalar::algebraic(IntPoly::new(poly), lo, hi)
            }
            "float" => {
                let f = field("value")?
                    .as_f64()
                    .ok_or_else(|| Error::Parse("\"value\" must be a number".into()))?;
                Scalar::float(f)
            }
            "power" => {
                let base = Scalar::from_json(field("base")?)?;
                let exp = field("exp")?
                    .as_u64()
                    .filter(|&e| e >= 1 && e <= u64::from(u32::MAX))
                    .ok_or_else(|| Error::Parse("\"exp\" must be a positive integer".into()))?;
                Ok(Scalar::power(base, exp as u32))
            }
            "product" => {
                let fs = field("factors")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("\"factors\" must be an array".into()))?
                    .iter()
                    .map(Scalar::from_json)
                    .collect::<Result<Vec<_>>>()?;
                Ok(Scalar::product(fs))
            }
            other => Err(Error::Parse(format!("unknown scalar type \"{other}\""))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Algebraic(a) => write!(f, "{a}"),
            Scalar::Float(x) => write!(f, "{x:.15e}"),
            Scalar::Power { base, exp } => write!(f, "({base})^{exp}"),
            Scalar::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|s| format!("({s})")).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("expected an integer, got {n}"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("expected an integer, got \"{s}\""))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

fn parse_rational_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(BigInt::from(i))),
            None => parse_rational(&n.to_string()),
        },
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

/// Parses `p`, `p/q` or a finite decimal `d.ddd` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse \"{s}\" as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}
