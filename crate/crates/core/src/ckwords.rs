//! Words in the Cuntz–Krieger generators and their reduction to the
//! monomial basis `s_J s_K*`.
//!
//! The only rewrite rule is `s_i* s_j → δ_ij Σ_k A_ik s_k s_k*`. Each
//! application lowers the measure "unstarred letters to the right of each
//! starred letter, summed" by exactly one, so reduction terminates, and the
//! rule has no critical pairs with itself, so any strategy gives the same
//! result.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix01::ZeroOneMatrix;
use crate::scalars::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// 1-based generator number.
    pub index: usize,
    pub starred: bool,
}

impl Letter {
    pub fn s(index: usize) -> Letter {
        Letter { index, starred: false }
    }

    pub fn s_star(index: usize) -> Letter {
        Letter { index, starred: true }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}{}", self.index, if self.starred { "*" } else { "" })
    }
}

/// Parses `s1 s2* s1`. The empty string is the unit.
pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
    text.split_whitespace()
        .map(|tok| {
            let (body, starred) = match tok.strip_suffix('*') {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let digits = body
                .strip_prefix('s')
                .ok_or_else(|| Error::Parse(format!("bad letter `{tok}`")))?;
            let index: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad letter `{tok}`")))?;
            if index == 0 {
                return Err(Error::Parse(format!("generator indices start at 1: `{tok}`")));
            }
            Ok(Letter { index, starred })
        })
        .collect()
}

pub fn render_word(word: &[Letter]) -> String {
    word.iter().map(Letter::to_string).collect::<Vec<_>>().join(" ")
}

fn check_indices(a: &ZeroOneMatrix, indices: impl IntoIterator<Item = usize>) -> Result<()> {
    let n = a.dim();
    for i in indices {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
    }
    Ok(())
}

/// `A[j_t, j_{t+1}] = 1` for every consecutive pair.
pub fn is_admissible(a: &ZeroOneMatrix, word: &[usize]) -> Result<bool> {
    check_indices(a, word.iter().copied())?;
    Ok(admissible_unchecked(a, word))
}

pub(crate) fn admissible_unchecked(a: &ZeroOneMatrix, word: &[usize]) -> bool {
    word.windows(2).all(|w| a.at(w[0], w[1]))
}

/// `s_J s_K*`; both empty is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub j: Vec<usize>,
    pub k: Vec<usize>,
}

impl Monomial {
    pub fn new(j: Vec<usize>, k: Vec<usize>) -> Monomial {
        Monomial { j, k }
    }

    pub fn unit() -> Monomial {
        Monomial { j: vec![], k: vec![] }
    }

    pub fn is_unit(&self) -> bool {
        self.j.is_empty() && self.k.is_empty()
    }

    pub fn adjoint(&self) -> Monomial {
        Monomial { j: self.k.clone(), k: self.j.clone() }
    }

    /// `s_{j1} … s_{jm} s_{kl}* … s_{k1}*`.
    pub fn letters(&self) -> Vec<Letter> {
        self.j
            .iter()
            .map(|&i| Letter::s(i))
            .chain(self.k.iter().rev().map(|&i| Letter::s_star(i)))
            .collect()
    }

    /// Nonzero in `O_A`: both index words admissible, and when both are
    /// nonempty the rows of their last letters share a column.
    pub fn is_nonzero(&self, a: &ZeroOneMatrix) -> bool {
        if !admissible_unchecked(a, &self.j) || !admissible_unchecked(a, &self.k) {
            return false;
        }
        match (self.j.last(), self.k.last()) {
            (Some(&p), Some(&q)) => rows_overlap(a, p, q),
            _ => true,
        }
    }

    fn min_len(&self) -> usize {
        self.j.len().min(self.k.len())
    }
}

fn rows_overlap(a: &ZeroOneMatrix, p: usize, q: usize) -> bool {
    a.row(p - 1).iter().zip(a.row(q - 1)).any(|(x, y)| *x && *y)
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            write!(f, "1")
        } else {
            write!(f, "{}", render_word(&self.letters()))
        }
    }
}

/// All admissible words of each length `0..=max_len`, grouped by length.
pub fn admissible_words(a: &ZeroOneMatrix, max_len: usize) -> Vec<Vec<Vec<usize>>> {
    let n = a.dim();
    let mut by_len: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
    for len in 1..=max_len {
        let prev = &by_len[len - 1];
        let mut next = Vec::new();
        for w in prev {
            for u in 1..=n {
                if w.last().is_none_or(|&p| a.at(p, u)) {
                    let mut x = w.clone();
                    x.push(u);
                    next.push(x);
                }
            }
        }
        by_len.push(next);
    }
    by_len
}

/// Every nonzero `s_J s_K*` with `|J|, |K| ≤ max_len`.
pub fn nonzero_monomials(a: &ZeroOneMatrix, max_len: usize) -> Vec<Monomial> {
    let words = admissible_words(a, max_len).concat();
    let mut out = Vec::new();
    for j in &words {
        for k in &words {
            let m = Monomial::new(j.clone(), k.clone());
            if m.is_nonzero(a) {
                out.push(m);
            }
        }
    }
    out
}

/// Finite linear combination of nonzero monomials with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalForm {
    terms: BTreeMap<Monomial, BigRational>,
}

impl NormalForm {
    pub fn zero() -> NormalForm {
        NormalForm::default()
    }

    pub fn unit() -> NormalForm {
        NormalForm::monomial(Monomial::unit())
    }

    pub fn monomial(m: Monomial) -> NormalForm {
        let mut nf = NormalForm::zero();
        nf.add_term(m, BigRational::one());
        nf
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> NormalForm {
        let mut out = NormalForm::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn adjoint(&self) -> NormalForm {
        NormalForm {
            terms: self.terms.iter().map(|(m, c)| (m.adjoint(), c.clone())).collect(),
        }
    }

    /// Equality as elements of `O_A`. Distinct normal forms can be equal
    /// (for instance `s_1 s_1* + s_2 s_2*` and the unit over `F_2`), so both
    /// sides are first refined to a common length where the monomials are
    /// linearly independent.
    pub fn equivalent(&self, other: &NormalForm, a: &ZeroOneMatrix) -> bool {
        let depth = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .map(Monomial::min_len)
            .max()
            .unwrap_or(0)
            + 1;
        self.refined(a, depth) == other.refined(a, depth)
    }

    /// Rewrites every monomial through `s_J s_K* = Σ_l s_{Jl} s_{Kl}*`
    /// (sum over letters `l` allowed after both words) until
    /// `min(|J|,|K|) = depth`.
    pub fn refined(&self, a: &ZeroOneMatrix, depth: usize) -> NormalForm {
        let n = a.dim();
        let mut out = NormalForm::zero();
        let mut stack: Vec<(Monomial, BigRational)> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = stack.pop() {
            if m.min_len() >= depth {
                if m.is_nonzero(a) {
                    out.add_term(m, c);
                }
                continue;
            }
            for l in 1..=n {
                let ok_j = m.j.last().is_none_or(|&p| a.at(p, l));
                let ok_k = m.k.last().is_none_or(|&q| a.at(q, l));
                if ok_j && ok_k {
                    let mut j = m.j.clone();
                    j.push(l);
                    let mut k = m.k.clone();
                    k.push(l);
                    stack.push((Monomial { j, k }, c.clone()));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({"J": m.j, "K": m.k, "coeff": Scalar::Rational(c.clone()).to_json()}))
                .collect(),
        )
    }

    pub fn from_json(v: &Value, a: &ZeroOneMatrix) -> Result<NormalForm> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Parse("normal form must be a JSON array".into()))?;
        let mut nf = NormalForm::zero();
        for item in items {
            let idx = |key: &str| -> Result<Vec<usize>> {
                item.get(key)
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse(format!("term is missing `{key}`")))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|u| u as usize)
                            .ok_or_else(|| Error::Parse(format!("bad index {x}")))
                    })
                    .collect()
            };
            let m = Monomial::new(idx("J")?, idx("K")?);
            check_indices(a, m.j.iter().chain(&m.k).copied())?;
            let coeff = match item.get("coeff") {
                None => BigRational::one(),
                Some(c) => Scalar::from_json(c)?
                    .as_rational()
                    .cloned()
                    .ok_or_else(|| Error::InvalidScalar("coefficients must be rational".into()))?,
            };
            if m.is_nonzero(a) {
                nf.add_term(m, coeff);
            }
        }
        Ok(nf)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if c.is_one() { m.to_string() } else { format!("{c}·{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Which redex to contract first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// One rewrite: the measure of the word before, and of each word produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub before: usize,
    pub after: Vec<usize>,
}

/// Sum over starred letters of the number of unstarred letters to their right.
pub fn termination_measure(word: &[Letter]) -> usize {
    let mut unstarred_right = 0;
    let mut total = 0;
    for l in word.iter().rev() {
        if l.starred {
            total += unstarred_right;
        } else {
            unstarred_right += 1;
        }
    }
    total
}

/// A product of letters that is zero for an admissibility reason alone:
/// `s_a s_b` with `A_ab = 0`, or `s_a* s_b*` with `A_ba = 0`.
fn has_zero_pair(a: &ZeroOneMatrix, word: &[Letter]) -> bool {
    word.windows(2).any(|w| match (w[0].starred, w[1].starred) {
        (false, false) => !a.at(w[0].index, w[1].index),
        (true, true) => !a.at(w[1].index, w[0].index),
        _ => false,
    })
}

fn find_redex(word: &[Letter], strategy: Strategy) -> Option<usize> {
    let is_redex = |p: usize| word[p].starred && !word[p + 1].starred;
    let n = word.len().saturating_sub(1);
    match strategy {
        Strategy::Leftmost => (0..n).find(|&p| is_redex(p)),
        Strategy::Rightmost => (0..n).rev().find(|&p| is_redex(p)),
    }
}

pub fn normalize(a: &ZeroOneMatrix, word: &[Letter]) -> Result<NormalForm> {
    normalize_with(a, word, Strategy::Leftmost, None)
}

pub fn normalize_with(
    a: &ZeroOneMatrix,
    word: &[Letter],
    strategy: Strategy,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> Result<NormalForm> {
    check_indices(a, word.iter().map(|l| l.index))?;
    let mut out = NormalForm::zero();
    let mut work: Vec<Vec<Letter>> = vec![word.to_vec()];
    while let Some(w) = work.pop() {
        if has_zero_pair(a, &w) {
            continue;
        }
        let Some(p) = find_redex(&w, strategy) else {
            let split = w.iter().position(|l| l.starred).unwrap_or(w.len());
            let m = Monomial {
                j: w[..split].iter().map(|l| l.index).collect(),
                k: w[split..].iter().rev().map(|l| l.index).collect(),
            };
            if m.is_nonzero(a) {
                out.add_term(m, BigRational::one());
            }
            continue;
        };
        let (i, j) = (w[p].index, w[p + 1].index);
        let mut produced = Vec::new();
        if i == j {
            for k in 1..=a.dim() {
                if a.at(i, k) {
                    let mut next = Vec::with_capacity(w.len());
                    next.extend_from_slice(&w[..p]);
                    next.push(Letter::s(k));
                    next.push(Letter::s_star(k));
                    next.extend_from_slice(&w[p + 2..]);
                    produced.push(next);
                }
            }
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceStep {
                before: termination_measure(&w),
                after: produced.iter().map(|x| termination_measure(x)).collect(),
            });
        }
        work.extend(produced);
    }
    Ok(out)
}

pub fn normalize_monomial(a: &ZeroOneMatrix, m: &Monomial) -> Result<NormalForm> {
    normalize(a, &m.letters())
}

/// Bilinear product of normal forms.
pub fn multiply(a: &ZeroOneMatrix, x: &NormalForm, y: &NormalForm) -> Result<NormalForm> {
    let mut out = NormalForm::zero();
    for (mx, cx) in &x.terms {
        for (my, cy) in &y.terms {
            let mut word = mx.letters();
            word.extend(my.letters());
            let c = cx * cy;
            for (m, v) in normalize(a, &word)?.terms {
                out.add_term(m, v * &c);
            }
        }
    }
    Ok(out)
}

/// `(s_J s_K*)(s_L s_M*)` as a sum of monomials with unit coefficients,
/// contracting `s_K* s_L` along their common prefix. Indices are assumed
/// in range.
pub fn monomial_product(a: &ZeroOneMatrix, x: &Monomial, y: &Monomial) -> Vec<Monomial> {
    let (k, l) = (&x.k, &y.j);
    let c = k.len().min(l.len());
    if k[..c] != l[..c] {
        return Vec::new();
    }
    let joins = |w: &[usize], i: usize| w.last().is_none_or(|&t| a.at(t, i));
    let mut out = Vec::new();
    if k.len() < l.len() {
        let rest = &l[c..];
        if joins(&x.j, rest[0]) {
            out.push(Monomial::new([&x.j[..], rest].concat(), y.k.clone()));
        }
    } else if k.len() > l.len() {
        let rest = &k[c..];
        if joins(&y.k, rest[0]) {
            out.push(Monomial::new(x.j.clone(), [&y.k[..], rest].concat()));
        }
    } else if let Some(&last) = k.last() {
        for i in 1..=a.dim() {
            if a.at(last, i) && joins(&x.j, i) && joins(&y.k, i) {
                out.push(Monomial::new([&x.j[..], &[i]].concat(), [&y.k[..], &[i]].concat()));
            }
        }
    } else {
        out.push(Monomial::new(x.j.clone(), y.k.clone()));
    }
    out.retain(|m| m.is_nonzero(a));
    out
}
