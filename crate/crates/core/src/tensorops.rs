//! Kronecker products of vectors, the index-level embedding
//! `s_{m(i-1)+j} ↦ s_i ⊗ s_j` of `O_{A⊠B}` into `O_A ⊗ O_B`, and the
//! resulting tensor product of states.

use num_rational::BigRational;
use serde::Serialize;

use crate::ckwords::{admissible_unchecked, admissible_words, Monomial, NormalForm};
use crate::error::{Error, Result};
use crate::matrix01::ZeroOneMatrix;
use crate::par::{map_reduce, Execution};
use crate::perron::FrequencyVector;
use crate::scalars::{Interval, Scalar};
use crate::states::{Enclosed, StateSpec};

/// Longest word the verification sweeps accept.
pub const MAX_WORD_LEN: usize = 8;
/// Default bound on the number of monomial pairs in one sweep.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Composite index `u = m(i-1) + j` for `i ∈ 1..=n`, `j ∈ 1..=m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexSplit {
    pub n: usize,
    pub m: usize,
}

impl IndexSplit {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidMatrix("factor dimensions must be positive".into()));
        }
        Ok(IndexSplit { n, m })
    }

    pub fn size(&self) -> usize {
        self.n * self.m
    }

    pub fn split(&self, u: usize) -> Result<(usize, usize)> {
        if u == 0 || u > self.size() {
            return Err(Error::IndexOutOfRange { index: u, n: self.size() });
        }
        Ok(((u - 1) / self.m + 1, (u - 1) % self.m + 1))
    }

    pub fn join(&self, i: usize, j: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        if j == 0 || j > self.m {
            return Err(Error::IndexOutOfRange { index: j, n: self.m });
        }
        Ok(self.m * (i - 1) + j)
    }

    #[inline]
    fn split_unchecked(&self, u: usize) -> (usize, usize) {
        ((u - 1) / self.m + 1, (u - 1) % self.m + 1)
    }
}

/// `(v⊠w)_{m(i-1)+j} = v_i w_j`.
pub fn kronecker_vector(v: &[Scalar], w: &[Scalar]) -> Vec<Scalar> {
    v.iter().flat_map(|a| w.iter().map(move |b| a.mul(b))).collect()
}

pub fn kronecker_rationals(v: &[BigRational], w: &[BigRational]) -> Vec<BigRational> {
    v.iter().flat_map(|a| w.iter().map(move |b| a * b)).collect()
}

pub fn kronecker_intervals(v: &[Interval], w: &[Interval]) -> Vec<Interval> {
    v.iter().flat_map(|&a| w.iter().map(move |&b| a * b)).collect()
}

fn split_word(split: &IndexSplit, word: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut left = Vec::with_capacity(word.len());
    let mut right = Vec::with_capacity(word.len());
    for &u in word {
        let (i, j) = split.split(u)?;
        left.push(i);
        right.push(j);
    }
    Ok((left, right))
}

/// `φ(s_J s_K*) = s_{J1} s_{K1}* ⊗ s_{J2} s_{K2}*`.
pub fn embed_monomial(split: &IndexSplit, m: &Monomial) -> Result<(Monomial, Monomial)> {
    let (j1, j2) = split_word(split, &m.j)?;
    let (k1, k2) = split_word(split, &m.k)?;
    Ok((Monomial::new(j1, k1), Monomial::new(j2, k2)))
}

fn split_of(a: &StateSpec, b: &StateSpec) -> IndexSplit {
    IndexSplit { n: a.dim(), m: b.dim() }
}

/// `(ρ_a ⊗_φ ρ_b)(s_J s_K*) = ρ_a(m1) ρ_b(m2)`.
pub fn tensor_state_eval(spec_a: &StateSpec, spec_b: &StateSpec, m: &Monomial) -> Result<Enclosed> {
    let (m1, m2) = embed_monomial(&split_of(spec_a, spec_b), m)?;
    Ok(spec_a.eval_monomial(&m1) * spec_b.eval_monomial(&m2))
}

pub fn tensor_state_eval_nf(spec_a: &StateSpec, spec_b: &StateSpec, x: &NormalForm) -> Result<Enclosed> {
    let mut total = Enclosed::zero();
    for (m, c) in x.terms() {
        total = total + tensor_state_eval(spec_a, spec_b, m)?.scale(c);
    }
    Ok(total)
}

/// The state `ρ_{a⊠b}` over `A⊠B`, with its Perron vector computed
/// directly on `(a⊠b)^ (A⊠B)` rather than taken as `x⊠y`.
pub fn product_spec(
    spec_a: &StateSpec,
    spec_b: &StateSpec,
    dimension_cap: usize,
    slack: f64,
    precision: f64,
) -> Result<StateSpec> {
    let matrix = spec_a.matrix().kronecker(spec_b.matrix(), dimension_cap)?;
    let a = kronecker_intervals(spec_a.a(), spec_b.a());
    let exact = match (spec_a.a_exact(), spec_b.a_exact()) {
        (Some(p), Some(q)) => Some(kronecker_rationals(p, q)),
        _ => None,
    };
    StateSpec::from_enclosures(matrix, a, exact, slack, precision)
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorIdentityReport {
    pub max_residual: f64,
    pub checked: usize,
    pub pass: bool,
    /// `(J, K)` attaining the maximal residual.
    pub worst: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug)]
struct Partial {
    residual: f64,
    checked: usize,
    worst: Option<(Vec<usize>, Vec<usize>)>,
}

fn merge(a: Partial, b: Partial) -> Partial {
    // ties keep the earlier word so both execution modes agree
    let (hi, lo) = if b.residual > a.residual { (b, a) } else { (a, b) };
    Partial {
        residual: hi.residual,
        checked: hi.checked + lo.checked,
        worst: hi.worst,
    }
}

/// Compares `ρ_a ⊗_φ ρ_b` with `ρ_{a⊠b}` on every pair of admissible words
/// `J, K` over `A⊠B` with `|J| = |K| ≤ max_len`.
pub fn verify_tensor_identity(
    spec_a: &StateSpec,
    spec_b: &StateSpec,
    max_len: usize,
    tolerance: f64,
    enumeration_cap: usize,
    exec: Execution,
) -> Result<TensorIdentityReport> {
    if max_len > MAX_WORD_LEN {
        return Err(Error::Precondition(format!("max word length {max_len} exceeds {MAX_WORD_LEN}")));
    }
    let prod = product_spec(spec_a, spec_b, crate::matrix01::DEFAULT_DIMENSION_CAP, tolerance, 1e-14)?;
    let split = split_of(spec_a, spec_b);
    let words = admissible_words(prod.matrix(), max_len);
    let count: usize = words.iter().map(|w| w.len() * w.len()).sum();
    if count > enumeration_cap {
        return Err(Error::EnumerationOverflow { count, cap: enumeration_cap });
    }
    let outer: Vec<(usize, usize)> = words
        .iter()
        .enumerate()
        .flat_map(|(len, ws)| (0..ws.len()).map(move |i| (len, i)))
        .collect();
    let result = map_reduce(
        exec,
        &outer,
        || Partial { residual: 0.0, checked: 0, worst: None },
        |&(len, idx)| {
            let j = &words[len][idx];
            let mut j1 = [0usize; MAX_WORD_LEN];
            let mut j2 = [0usize; MAX_WORD_LEN];
            for (t, &u) in j.iter().enumerate() {
                (j1[t], j2[t]) = split.split_unchecked(u);
            }
            let mut k1 = [0usize; MAX_WORD_LEN];
            let mut k2 = [0usize; MAX_WORD_LEN];
            let mut best = Partial { residual: 0.0, checked: 0, worst: None };
            for k in &words[len] {
                for (t, &u) in k.iter().enumerate() {
                    (k1[t], k2[t]) = split.split_unchecked(u);
                }
                let lhs = spec_a.eval_interval(&j1[..len], &k1[..len])
                    * spec_b.eval_interval(&j2[..len], &k2[..len]);
                let rhs = prod.eval_interval(j, k);
                let r = (lhs - rhs).mag();
                best.checked += 1;
                if r > best.residual || best.worst.is_none() {
                    best.residual = best.residual.max(r);
                    best.worst = Some((j.clone(), k.clone()));
                }
            }
            best
        },
        merge,
    );
    Ok(TensorIdentityReport {
        max_residual: result.residual,
        checked: result.checked,
        pass: result.residual <= tolerance,
        worst: result.worst,
    })
}

/// `Ω_{m(i-1)+j} = β1 ω1_i + β2 ω2_j`, the frequencies of `α^(1) ⊗_φ α^(2)`
/// at inverse temperature 1.
pub fn combined_frequencies(
    split: &IndexSplit,
    omega1: &FrequencyVector,
    beta1: Interval,
    omega2: &FrequencyVector,
    beta2: Interval,
) -> Result<FrequencyVector> {
    if omega1.len() != split.n || omega2.len() != split.m {
        return Err(Error::DimensionMismatch {
            expected: split.size(),
            got: omega1.len() * omega2.len(),
        });
    }
    if !beta1.is_positive() || !beta2.is_positive() {
        return Err(Error::Precondition("inverse temperatures must be positive".into()));
    }
    let mut out = Vec::with_capacity(split.size());
    for &w1 in omega1.entries() {
        for &w2 in omega2.entries() {
            out.push(beta1 * w1 + beta2 * w2);
        }
    }
    FrequencyVector::from_intervals(out)
}

/// Checks `(φ_{A,B} ⊗ id) ∘ φ_{A⊠B,C} = (id ⊗ φ_{B,C}) ∘ φ_{A,B⊠C}` on every
/// generator of the triple product.
pub fn check_coassociativity(n_a: usize, n_b: usize, n_c: usize) -> Result<bool> {
    if n_a < 2 || n_b < 2 || n_c < 2 {
        return Err(Error::Precondition("all three dimensions must be at least 2".into()));
    }
    let ab_c = IndexSplit::new(n_a * n_b, n_c)?;
    let a_b = IndexSplit::new(n_a, n_b)?;
    let a_bc = IndexSplit::new(n_a, n_b * n_c)?;
    let b_c = IndexSplit::new(n_b, n_c)?;
    for u in 1..=n_a * n_b * n_c {
        let (ab, k) = ab_c.split(u)?;
        let (i, j) = a_b.split(ab)?;
        let (i2, bc) = a_bc.split(u)?;
        let (j2, k2) = b_c.split(bc)?;
        if (i, j, k) != (i2, j2, k2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m` admissible over `A⊠B` iff both images are admissible.
pub fn embedding_preserves_admissibility(
    a: &ZeroOneMatrix,
    b: &ZeroOneMatrix,
    ab: &ZeroOneMatrix,
    word: &[usize],
) -> Result<bool> {
    let split = IndexSplit::new(a.dim(), b.dim())?;
    let (w1, w2) = split_word(&split, word)?;
    let direct = admissible_unchecked(ab, word);
    let via = admissible_unchecked(a, &w1) && admissible_unchecked(b, &w2);
    Ok(direct == via)
}
