//! Perron–Frobenius data of nonnegative irreducible matrices, membership in
//! `Λ(A) = {a ∈ (0,1)^n : PFE(diag(a)·A) = 1}`, the canonical point
//! `e(A) = (1/c_A, …, 1/c_A)` and the inverse-temperature solver.
//!
//! Eigenvalues are enclosed by Collatz–Wielandt bounds evaluated in interval
//! arithmetic: for any positive `x`, `min_i (Mx)_i/x_i ≤ PFE(M) ≤ max_i (Mx)_i/x_i`.
//! The iterate `x` comes from power iteration on `sI + M` with `s` the largest
//! row sum; it has the same Perron vector and is primitive even when `M` is periodic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix01::ZeroOneMatrix;
use crate::scalars::{rational_hi, rational_lo, Interval, IntPoly, Scalar};

pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_PRECISION: f64 = 1e-12;

/// Entrywise nonnegative square matrix of interval entries.
#[derive(Clone, Debug)]
pub struct NonnegMatrix {
    n: usize,
    entries: Vec<Interval>,
}

impl NonnegMatrix {
    pub fn new(n: usize, entries: Vec<Interval>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if let Some(e) = entries.iter().find(|e| e.lo() < 0.0) {
            return Err(Error::Precondition(format!("negative entry {e}")));
        }
        Ok(NonnegMatrix { n, entries })
    }

    pub fn from_zero_one(a: &ZeroOneMatrix) -> Self {
        let n = a.dim();
        let entries = (0..n * n)
            .map(|k| Interval::point(if a.get(k / n, k % n) { 1.0 } else { 0.0 }))
            .collect();
        NonnegMatrix { n, entries }
    }

    /// `diag(a) · A`.
    pub fn scaled_rows(a: &ZeroOneMatrix, scale: &[Interval]) -> Result<Self> {
        let n = a.dim();
        if scale.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: scale.len(),
            });
        }
        let entries = (0..n * n)
            .map(|k| {
                if a.get(k / n, k % n) {
                    scale[k / n]
                } else {
                    Interval::point(0.0)
                }
            })
            .collect();
        NonnegMatrix::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.entries[i * self.n + j]
    }

    pub fn kronecker(&self, other: &NonnegMatrix) -> NonnegMatrix {
        let (n, m) = (self.n, other.n);
        let nm = n * m;
        let mut entries = vec![Interval::point(0.0); nm * nm];
        for i in 0..n {
            for ip in 0..n {
                let a = self.get(i, ip);
                for j in 0..m {
                    for jp in 0..m {
                        entries[(m * i + j) * nm + (m * ip + jp)] = a * other.get(j, jp);
                    }
                }
            }
        }
        NonnegMatrix { n: nm, entries }
    }

    fn support_irreducible(&self) -> bool {
        let rows: Vec<Vec<u8>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| u8::from(self.get(i, j).hi() > 0.0)).collect())
            .collect();
        ZeroOneMatrix::new(&rows).is_ok_and(|m| m.is_irreducible())
    }
}

/// Perron–Frobenius eigenvalue enclosure and normalized eigenvector.
#[derive(Clone, Debug)]
pub struct PfData {
    pub eigenvalue: Interval,
    /// Entries sum to 1; radii are estimated from the eigenvalue bracket.
    pub eigenvector: Vec<Interval>,
    pub iterations: usize,
}

impl PfData {
    pub fn eigenvector_mid(&self) -> Vec<f64> {
        self.eigenvector.iter().map(Interval::mid).collect()
    }
}

fn collatz_wielandt(m: &NonnegMatrix, x: &[f64]) -> Interval {
    let n = m.n;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut acc = Interval::point(0.0);
        for (j, &xj) in x.iter().enumerate() {
            acc = acc + m.get(i, j) * Interval::point(xj);
        }
        let ratio = acc / Interval::point(x[i]);
        lo = lo.min(ratio.lo());
        hi = hi.max(ratio.hi());
    }
    Interval::new(lo.max(0.0), hi)
}

/// Power iteration with Collatz–Wielandt enclosures. Stops when the bracket
/// is at most `precision` wide, or when it has stopped shrinking (the input
/// entries' own widths then bound what is attainable).
pub fn pf_data(m: &NonnegMatrix, precision: f64, max_iterations: usize) -> Result<PfData> {
    if !m.support_irreducible() {
        return Err(Error::Precondition("matrix is not irreducible".into()));
    }
    let n = m.n;
    let mid: Vec<f64> = m.entries.iter().map(Interval::mid).collect();
    // iterate on shift·I + M; a shift on the scale of M keeps the spectral
    // gap of the shifted matrix from collapsing when M is tiny
    let shift = mid
        .chunks(n)
        .map(|row| row.iter().sum::<f64>())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    for it in 1..=max_iterations {
        for i in 0..n {
            let row = &mid[i * n..(i + 1) * n];
            y[i] = shift * x[i] + row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        }
        let s: f64 = y.iter().sum();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / s;
        }
        if x.iter().any(|&v| v <= 0.0) {
            continue;
        }
        if it > 8 && it % 4 != 0 {
            continue;
        }
        let bracket = collatz_wielandt(m, &x);
        let width = bracket.width();
        let done = width <= precision;
        if width < best * 0.999 {
            best = width;
            stalled = 0;
        } else {
            stalled += 1;
        }
        if done || stalled >= 64 {
            let rel = width / bracket.lo().max(f64::MIN_POSITIVE);
            let eigenvector = x
                .iter()
                .map(|&v| Interval::point(v).widen(v * rel * n as f64 + v * 4.0 * f64::EPSILON))
                .collect();
            return Ok(PfData {
                eigenvalue: bracket,
                eigenvector,
                iterations: it,
            });
        }
    }
    Err(Error::Numerical(format!(
        "power iteration did not converge within {max_iterations} iterations"
    )))
}

/// Exact Perron vector of `diag(a)·A` with eigenvalue exactly 1, normalized
/// to sum 1, when it exists: solves the singular system over ℚ and checks
/// positivity. A positive eigenvector of an irreducible nonnegative matrix
/// belongs to its Perron eigenvalue, so success certifies `PFE = 1` exactly.
pub fn exact_perron_vector(a_mat: &ZeroOneMatrix, a: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a_mat.dim();
    if a.len() != n {
        return None;
    }
    // rows 0..n-1 of (diag(a)A - I) plus the normalization row
    let mut sys: Vec<Vec<BigRational>> = (0..n - 1)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|j| {
                    let e = if a_mat.get(i, j) { a[i].clone() } else { BigRational::zero() };
                    if i == j {
                        e - BigRational::one()
                    } else {
                        e
                    }
                })
                .collect();
            row.push(BigRational::zero());
            row
        })
        .collect();
    let mut norm = vec![BigRational::one(); n + 1];
    norm[n] = BigRational::one();
    sys.push(norm);
    // Gauss–Jordan
    for col in 0..n {
        let pivot = (col..n).find(|&r| !sys[r][col].is_zero())?;
        sys.swap(col, pivot);
        let p = sys[col][col].clone();
        for v in sys[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !sys[r][col].is_zero() {
                let f = sys[r][col].clone();
                for c in col..=n {
                    let t = &f * &sys[col][c];
                    sys[r][c] -= t;
                }
            }
        }
    }
    let x: Vec<BigRational> = sys.iter().map(|row| row[n].clone()).collect();
    if x.iter().any(|v| !v.is_positive()) {
        return None;
    }
    // the dropped last equation must hold too
    let last = n - 1;
    let lhs: BigRational = (0..n)
        .filter(|&j| a_mat.get(last, j))
        .map(|j| &a[last] * &x[j])
        .sum();
    (lhs == x[last]).then_some(x)
}

/// Characteristic polynomial `det(tI - A)` by Faddeev–LeVerrier, constant
/// term first.
pub fn characteristic_polynomial(a: &ZeroOneMatrix) -> IntPoly {
    let n = a.dim();
    let am: Vec<Vec<BigInt>> = a
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    if !am[i][l].is_zero() {
                        s += &mk[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        mk = next;
        // c_{n-k} = -tr(A·M_k)/k
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                if !am[i][l].is_zero() {
                    tr += &mk[l][i];
                }
            }
        }
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = -q;
    }
    IntPoly::new(coeffs)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Built by `canonical_point` or `solve_beta`.
    ExactByConstruction,
    /// Rational entries with an exact positive eigenvector for eigenvalue 1.
    ExactRational,
    /// Eigenvalue enclosure meets `[1 - tolerance, 1 + tolerance]`.
    Verified { tolerance: f64 },
}

/// A point of `Λ(A)`.
#[derive(Clone, Debug)]
pub struct ParamVector {
    matrix: ZeroOneMatrix,
    entries: Vec<Scalar>,
    enclosures: Vec<Interval>,
    certificate: Certificate,
}

impl ParamVector {
    pub fn matrix(&self) -> &ZeroOneMatrix {
        &self.matrix
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn enclosures(&self) -> &[Interval] {
        &self.enclosures
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn rational_entries(&self) -> Option<Vec<BigRational>> {
        self.entries.iter().map(|s| s.as_rational().cloned()).collect()
    }
}

/// Gauge frequencies `ω`, entrywise positive.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyVector {
    entries: Vec<Interval>,
    exact: Option<Vec<BigRational>>,
}

impl FrequencyVector {
    pub fn from_rationals(values: &[BigRational]) -> Result<Self> {
        if values.iter().any(|v| !v.is_positive()) {
            return Err(Error::Precondition("frequencies must be positive".into()));
        }
        Ok(FrequencyVector {
            entries: values.iter().map(Interval::from_rational).collect(),
            exact: Some(values.to_vec()),
        })
    }

    pub fn from_scalars(values: &[Scalar]) -> Result<Self> {
        if let Some(qs) = values.iter().map(|s| s.as_rational().cloned()).collect::<Option<Vec<_>>>() {
            return FrequencyVector::from_rationals(&qs);
        }
        FrequencyVector::from_intervals(values.iter().map(|s| s.enclose(1e-15)).collect())
    }

    pub fn from_intervals(entries: Vec<Interval>) -> Result<Self> {
        if entries.iter().any(|e| !e.is_positive()) {
            return Err(Error::Precondition("frequencies must be positive".into()));
        }
        Ok(FrequencyVector { entries, exact: None })
    }

    pub fn entries(&self) -> &[Interval] {
        &self.entries
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, gamma: &BigRational) -> Result<Self> {
        match &self.exact {
            Some(qs) => FrequencyVector::from_rationals(&qs.iter().map(|q| q * gamma).collect::<Vec<_>>()),
            None => {
                let g = Interval::from_rational(gamma);
                FrequencyVector::from_intervals(self.entries.iter().map(|&e| e * g).collect())
            }
        }
    }

    /// `ω(J) = Σ_t ω_{j_t}` for a 1-based index sequence.
    pub fn weight(&self, word: &[usize]) -> Interval {
        word.iter()
            .fold(Interval::point(0.0), |acc, &j| acc + self.entries[j - 1])
    }
}

/// Outcome of a `Λ(A)` membership test.
#[derive(Clone, Debug)]
pub enum Membership {
    Accepted(ParamVector),
    Rejected { pfe: Interval },
}

fn require_class(a: &ZeroOneMatrix) -> Result<()> {
    if a.in_class_cdm() {
        Ok(())
    } else {
        Err(Error::Precondition(
            "matrix must be nondegenerate, irreducible and not a permutation".into(),
        ))
    }
}

/// PFE(diag(a)·A) enclosure.
pub fn pfe_scaled(a: &ZeroOneMatrix, scale: &[Interval], precision: f64) -> Result<Interval> {
    let m = NonnegMatrix::scaled_rows(a, scale)?;
    Ok(pf_data(&m, precision, DEFAULT_MAX_ITERATIONS)?.eigenvalue)
}

/// Accepts `a` iff the enclosure of `PFE(diag(a)·A)` (computed to
/// `tolerance/4`) meets `[1 - tolerance, 1 + tolerance]`.
pub fn in_lambda(a_mat: &ZeroOneMatrix, a: &[Scalar], tolerance: f64) -> Result<Membership> {
    require_class(a_mat)?;
    if a.len() != a_mat.dim() {
        return Err(Error::DimensionMismatch {
            expected: a_mat.dim(),
            got: a.len(),
        });
    }
    if let Some(bad) = a.iter().find(|s| !s.in_open_unit_interval()) {
        return Err(Error::Domain(bad.render()));
    }
    let enclosures: Vec<Interval> = a.iter().map(|s| s.enclose(tolerance / 16.0)).collect();
    let pfe = pfe_scaled(a_mat, &enclosures, tolerance / 4.0)?;
    let window = Interval::new(1.0 - tolerance, 1.0 + tolerance);
    if !pfe.intersects(&window) {
        return Ok(Membership::Rejected { pfe });
    }
    let exact = a
        .iter()
        .map(|s| s.as_rational().cloned())
        .collect::<Option<Vec<_>>>()
        .and_then(|qs| exact_perron_vector(a_mat, &qs));
    let certificate = match exact {
        Some(_) => Certificate::ExactRational,
        None => Certificate::Verified { tolerance },
    };
    Ok(Membership::Accepted(ParamVector {
        matrix: a_mat.clone(),
        entries: a.to_vec(),
        enclosures,
        certificate,
    }))
}

/// `c_A = PFE(A)` as an exact scalar (rational or algebraic root of the
/// characteristic polynomial).
pub fn perron_root(a: &ZeroOneMatrix, precision: f64) -> Result<Scalar> {
    let poly = characteristic_polynomial(a);
    let mut prec = precision.min(1e-6);
    for _ in 0..8 {
        let enc = pf_data(&NonnegMatrix::from_zero_one(a), prec, DEFAULT_MAX_ITERATIONS)?.eigenvalue;
        // widen by a few ulps so float endpoints bracket the root strictly
        let enc = enc.widen(4.0 * f64::EPSILON * enc.hi());
        if let Ok(s) = Scalar::algebraic(poly.clone(), rational_lo(&enc), rational_hi(&enc)) {
            return Ok(s);
        }
        prec /= 1e3;
    }
    Err(Error::Numerical("could not isolate the Perron root".into()))
}

/// `e(A) = (1/c_A, …, 1/c_A)`.
pub fn canonical_point(a: &ZeroOneMatrix, precision: f64) -> Result<ParamVector> {
    require_class(a)?;
    let c = perron_root(a, precision)?;
    let inv = match c {
        Scalar::Rational(q) => Scalar::Rational(q.recip()),
        Scalar::Algebraic(alg) => {
            let r = alg.reciprocal()?;
            Scalar::algebraic(r.poly().clone(), r.interval().0.clone(), r.interval().1.clone())?
        }
        other => return Err(Error::Numerical(format!("unexpected Perron root {other}"))),
    };
    let enc = inv.enclose(precision);
    Ok(ParamVector {
        matrix: a.clone(),
        entries: vec![inv; a.dim()],
        enclosures: vec![enc; a.dim()],
        certificate: Certificate::ExactByConstruction,
    })
}

/// Result of the inverse-temperature solve.
#[derive(Clone, Debug)]
pub struct BetaSolution {
    pub beta: Interval,
    pub param: ParamVector,
}

fn gauge_scale(omega: &FrequencyVector, beta: Interval) -> Vec<Interval> {
    omega.entries().iter().map(|&w| (-(beta * w)).exp()).collect()
}

/// The unique `β > 0` with `PFE(diag(e^{-βω_i})·A) = 1`, by doubling and
/// bisection on the strictly decreasing map `β ↦ PFE`.
pub fn solve_beta(a: &ZeroOneMatrix, omega: &FrequencyVector, precision: f64) -> Result<BetaSolution> {
    require_class(a)?;
    if omega.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: omega.len(),
        });
    }
    let inner = (precision * 1e-2).max(1e-15);
    // -1: PFE above 1 (β too small), +1: below 1, 0: undecided
    let side = |beta: f64| -> Result<i8> {
        let pfe = pfe_scaled(a, &gauge_scale(omega, Interval::point(beta)), inner)?;
        Ok(if pfe.lo() > 1.0 {
            -1
        } else if pfe.hi() < 1.0 {
            1
        } else {
            0
        })
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut doublings = 0;
    loop {
        match side(hi)? {
            1 => break,
            0 => {
                lo = hi;
                break;
            }
            _ => {
                lo = hi;
                hi *= 2.0;
                doublings += 1;
                if doublings > 64 {
                    return Err(Error::Numerical("no bracket for the inverse temperature".into()));
                }
            }
        }
    }
    while hi - lo > precision {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match side(mid)? {
            -1 => lo = mid,
            1 => hi = mid,
            _ => {
                // shrink each end towards the undecided point separately
                let (mut l, mut h) = (lo, mid);
                while h - l > precision * 0.25 && 0.5 * (l + h) > l && 0.5 * (l + h) < h {
                    let m = 0.5 * (l + h);
                    if side(m)? == -1 { l = m } else { h = m }
                }
                lo = l;
                let (mut l, mut h) = (mid, hi);
                while h - l > precision * 0.25 && 0.5 * (l + h) > l && 0.5 * (l + h) < h {
                    let m = 0.5 * (l + h);
                    if side(m)? == 1 { h = m } else { l = m }
                }
                hi = h;
                break;
            }
        }
    }
    let beta = Interval::new(lo, hi);
    let enclosures = gauge_scale(omega, beta);
    let entries = enclosures
        .iter()
        .map(|e| Scalar::float(e.mid()))
        .collect::<Result<Vec<_>>>()?;
    Ok(BetaSolution {
        beta,
        param: ParamVector {
            matrix: a.clone(),
            entries,
            enclosures,
            certificate: Certificate::ExactByConstruction,
        },
    })
}

/// The unique `x ∈ (0,1)` with `Σ_i x^{p_i} = 1`, refined to `precision`.
pub fn solve_power_equation(exponents: &[u32], precision: f64) -> Result<Scalar> {
    if exponents.len() < 2 {
        return Err(Error::Precondition(
            "need at least two exponents; a single one gives the boundary root x = 1".into(),
        ));
    }
    if exponents.contains(&0) {
        return Err(Error::Precondition("exponents must be positive".into()));
    }
    let poly = IntPoly::power_sum_minus_one(exponents);
    let s = Scalar::algebraic(poly, BigRational::zero(), BigRational::one())?;
    Ok(match s {
        Scalar::Algebraic(a) => {
            let p = BigRational::from_float(precision).unwrap_or_else(|| BigRational::new(1.into(), (1u64 << 40).into()));
            Scalar::Algebraic(a.refined(&p))
        }
        other => other,
    })
}

/// Width of an exact rational enclosure, for reporting.
pub fn rational_width(lo: &BigRational, hi: &BigRational) -> f64 {
    (hi - lo).abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn golden_matrix() -> ZeroOneMatrix {
        ZeroOneMatrix::new(&[vec![1, 1], vec![1, 0]]).unwrap()
    }

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn pf_of_full_matrices() {
        for n in 2..6 {
            let f = ZeroOneMatrix::full(n).unwrap();
            let pf = pf_data(&NonnegMatrix::from_zero_one(&f), 1e-12, DEFAULT_MAX_ITERATIONS).unwrap();
            assert!(pf.eigenvalue.contains(n as f64));
            assert!(pf.eigenvalue.width() <= 1e-12);
            for x in &pf.eigenvector {
                assert!((x.mid() - 1.0 / n as f64).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pf_of_golden_matrix() {
        let pf = pf_data(&NonnegMatrix::from_zero_one(&golden_matrix()), 1e-12, DEFAULT_MAX_ITERATIONS).unwrap();
        assert!(pf.eigenvalue.contains(PHI) || (pf.eigenvalue.mid() - PHI).abs() < 1e-12);
        assert!(pf.eigenvalue.width() <= 1e-12);
        let x = pf.eigenvector_mid();
        assert!((x[0] / x[1] - PHI).abs() < 1e-11);
        assert!((x[0] + x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pf_of_stochastic_like_matrix() {
        let third = Interval::from_rational(&rat(1, 3));
        let two_thirds = Interval::from_rational(&rat(2, 3));
        let m = NonnegMatrix::new(2, vec![third, third, two_thirds, two_thirds]).unwrap();
        let pf = pf_data(&m, 1e-12, DEFAULT_MAX_ITERATIONS).unwrap();
        assert!(pf.eigenvalue.contains(1.0));
        let x = pf.eigenvector_mid();
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-12 && (x[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pf_handles_periodic_matrices() {
        // bipartite, period 2
        let a = ZeroOneMatrix::new(&[vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]).unwrap();
        let pf = pf_data(&NonnegMatrix::from_zero_one(&a), 1e-12, DEFAULT_MAX_ITERATIONS).unwrap();
        assert!((pf.eigenvalue.mid() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pf_rejects_reducible() {
        let a = ZeroOneMatrix::new(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(matches!(
            pf_data(&NonnegMatrix::from_zero_one(&a), 1e-12, 100),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        let half = Scalar::rational(1, 2);
        match in_lambda(&f2, &[half.clone(), half.clone()], 1e-9).unwrap() {
            Membership::Accepted(p) => assert_eq!(p.certificate(), &Certificate::ExactRational),
            other => panic!("{other:?}"),
        }
        match in_lambda(&f2, &[half, Scalar::rational(1, 3)], 1e-9).unwrap() {
            Membership::Rejected { pfe } => assert!(pfe.contains(5.0 / 6.0)),
            other => panic!("{other:?}"),
        }
        let inv_phi = canonical_point(&golden_matrix(), 1e-12).unwrap();
        assert!(matches!(
            in_lambda(&golden_matrix(), inv_phi.entries(), 1e-9).unwrap(),
            Membership::Accepted(_)
        ));
    }

    #[test]
    fn membership_domain_errors() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        assert!(matches!(
            in_lambda(&f2, &[Scalar::rational(1, 1), Scalar::rational(0, 1)], 1e-9),
            Err(Error::Domain(_))
        ));
        let perm = ZeroOneMatrix::new(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(
            in_lambda(&perm, &[Scalar::rational(1, 2), Scalar::rational(1, 2)], 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn canonical_points() {
        let e2 = canonical_point(&ZeroOneMatrix::full(2).unwrap(), 1e-12).unwrap();
        assert_eq!(e2.entries(), &[Scalar::rational(1, 2), Scalar::rational(1, 2)]);
        let e6 = canonical_point(&ZeroOneMatrix::full(6).unwrap(), 1e-12).unwrap();
        assert!(e6.entries().iter().all(|s| *s == Scalar::rational(1, 6)));
        let eg = canonical_point(&golden_matrix(), 1e-12).unwrap();
        assert!(matches!(eg.entries()[0], Scalar::Algebraic(_)));
        assert!((eg.entries()[0].approx() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(characteristic_polynomial(&golden_matrix()), IntPoly::from_i64(&[-1, -1, 1]));
        assert_eq!(
            characteristic_polynomial(&ZeroOneMatrix::full(3).unwrap()),
            IntPoly::from_i64(&[0, 0, -3, 1])
        );
    }

    #[test]
    fn beta_examples() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        let s = solve_beta(&f2, &FrequencyVector::from_rationals(&[rat(1, 1), rat(1, 1)]).unwrap(), 1e-12).unwrap();
        assert!((s.beta.mid() - 2f64.ln()).abs() < 1e-12);
        assert!(s.beta.width() <= 1e-12);
        assert!(s.param.enclosures().iter().all(|e| (e.mid() - 0.5).abs() < 1e-12));

        let s = solve_beta(&f2, &FrequencyVector::from_rationals(&[rat(1, 1), rat(2, 1)]).unwrap(), 1e-12).unwrap();
        assert!((s.beta.mid() - PHI.ln()).abs() < 1e-12);
        assert!((s.param.enclosures()[0].mid() - 1.0 / PHI).abs() < 1e-12);
        assert!((s.param.enclosures()[1].mid() - 1.0 / (PHI * PHI)).abs() < 1e-12);

        for n in 2..6 {
            let fnm = ZeroOneMatrix::full(n).unwrap();
            let s = solve_beta(&fnm, &FrequencyVector::from_rationals(&vec![rat(1, 1); n]).unwrap(), 1e-12).unwrap();
            assert!((s.beta.mid() - (n as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_perron_vectors() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        let x = exact_perron_vector(&f2, &[rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(x, vec![rat(1, 3), rat(2, 3)]);
        assert!(exact_perron_vector(&f2, &[rat(1, 3), rat(1, 3)]).is_none());
        // PFE(diag(1/2,1/2)·golden) = φ/2 < 1
        let g = golden_matrix();
        assert!(exact_perron_vector(&g, &[rat(1, 2), rat(1, 2)]).is_none());
    }

    #[test]
    fn power_equation_roots() {
        assert_eq!(solve_power_equation(&[1, 1], 1e-12).unwrap(), Scalar::rational(1, 2));
        let g = solve_power_equation(&[1, 2], 1e-12).unwrap();
        assert!((g.approx() - 0.618_034).abs() < 1e-6);
        let r = solve_power_equation(&[5, 11], 1e-12).unwrap();
        assert!((r.approx() - 0.912_769_467).abs() < 1e-8, "{}", r.approx());
        assert!(solve_power_equation(&[3], 1e-12).is_err());
    }
}
