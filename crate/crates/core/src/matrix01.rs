//! Square 0-1 matrices, the class tests used throughout, and the Kronecker
//! product `(A⊠B)[m(i-1)+j, m(i'-1)+j'] = A[i,i'] · B[j,j']`.

use std::collections::VecDeque;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION_CAP: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZeroOneMatrix {
    n: usize,
    entries: Vec<bool>,
}

impl ZeroOneMatrix {
    pub fn new(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidMatrix(format!("dimension {n} < 2")));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has length {}, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for &e in row {
                match e {
                    0 => entries.push(false),
                    1 => entries.push(true),
                    other => {
                        return Err(Error::InvalidMatrix(format!("entry {other} is not 0 or 1")))
                    }
                }
            }
        }
        Ok(ZeroOneMatrix { n, entries })
    }

    /// `F_n`, the all-ones matrix.
    pub fn full(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMatrix(format!("dimension {n} < 2")));
        }
        Ok(ZeroOneMatrix {
            n,
            entries: vec![true; n * n],
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.n + j]
    }

    /// Entry at 1-based `(i, j)`, as used by generator indices.
    pub fn at(&self, i: usize, j: usize) -> bool {
        self.get(i - 1, j - 1)
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&b| u8::from(b)).collect())
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        let rows_ok = (0..self.n).all(|i| self.row(i).iter().any(|&b| b));
        let cols_ok = (0..self.n).all(|j| (0..self.n).any(|i| self.get(i, j)));
        rows_ok && cols_ok
    }

    /// Strong connectivity of the adjacency digraph (forward and backward
    /// reachability from vertex 0).
    pub fn is_irreducible(&self) -> bool {
        self.reaches_all(false) && self.reaches_all(true)
    }

    fn reaches_all(&self, reversed: bool) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for v in 0..self.n {
                let edge = if reversed { self.get(v, u) } else { self.get(u, v) };
                if edge && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_permutation(&self) -> bool {
        (0..self.n).all(|i| self.row(i).iter().filter(|&&b| b).count() == 1)
            && (0..self.n).all(|j| (0..self.n).filter(|&i| self.get(i, j)).count() == 1)
    }

    /// Nondegenerate, irreducible and not a permutation matrix.
    pub fn in_class_cdm(&self) -> bool {
        self.is_nondegenerate() && self.is_irreducible() && !self.is_permutation()
    }

    pub fn kronecker(&self, other: &ZeroOneMatrix, dimension_cap: usize) -> Result<Self> {
        let (n, m) = (self.n, other.n);
        let nm = n
            .checked_mul(m)
            .filter(|&d| d <= dimension_cap)
            .ok_or(Error::DimensionOverflow {
                requested: n.saturating_mul(m),
                cap: dimension_cap,
            })?;
        let mut entries = vec![false; nm * nm];
        for i in 0..n {
            for ip in 0..n {
                if !self.get(i, ip) {
                    continue;
                }
                for j in 0..m {
                    for jp in 0..m {
                        entries[(m * i + j) * nm + (m * ip + jp)] = other.get(j, jp);
                    }
                }
            }
        }
        Ok(ZeroOneMatrix { n: nm, entries })
    }

    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "rows": self.rows()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matrix needs a \"rows\" array".into()))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(|e| {
                        e.as_u64()
                            .filter(|&x| x <= 1)
                            .map(|x| x as u8)
                            .ok_or_else(|| Error::InvalidMatrix(format!("entry {e} is not 0 or 1")))
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = ZeroOneMatrix::new(&rows)?;
        if let Some(n) = v.get("n").and_then(Value::as_u64) {
            if n as usize != m.n {
                return Err(Error::DimensionMismatch {
                    expected: n as usize,
                    got: m.n,
                });
            }
        }
        Ok(m)
    }

    /// `F3`-style shorthand or a JSON object.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('F').or_else(|| t.strip_prefix('f')) {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad matrix shorthand \"{t}\"")))?;
            return ZeroOneMatrix::full(n);
        }
        let v: Value =
            serde_json::from_str(t).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        if v.is_array() {
            return ZeroOneMatrix::from_json(&json!({ "rows": v }));
        }
        ZeroOneMatrix::from_json(&v)
    }
}

impl fmt::Debug for ZeroOneMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZeroOneMatrix{:?}", self.rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> ZeroOneMatrix {
        ZeroOneMatrix::new(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn nondegeneracy() {
        assert!(ZeroOneMatrix::full(2).unwrap().is_nondegenerate());
        assert!(!m(&[&[1, 0], &[0, 0]]).is_nondegenerate());
        assert!(m(&[&[1, 1], &[1, 0]]).is_nondegenerate());
    }

    #[test]
    fn irreducibility() {
        assert!(m(&[&[1, 1], &[1, 0]]).is_irreducible());
        assert!(!m(&[&[1, 0], &[0, 1]]).is_irreducible());
        assert!(ZeroOneMatrix::full(3).unwrap().is_irreducible());
        assert!(!m(&[&[1, 1], &[0, 1]]).is_irreducible());
    }

    #[test]
    fn class_membership() {
        assert!(!m(&[&[0, 1], &[1, 0]]).in_class_cdm());
        assert!(m(&[&[1, 1], &[1, 0]]).in_class_cdm());
        assert!(!m(&[&[1, 1], &[0, 0]]).in_class_cdm());
    }

    #[test]
    fn kronecker_examples() {
        let f2 = ZeroOneMatrix::full(2).unwrap();
        assert_eq!(f2.kronecker(&f2, 4096).unwrap(), ZeroOneMatrix::full(4).unwrap());
        let g = m(&[&[1, 1], &[1, 0]]);
        let gg = g.kronecker(&g, 4096).unwrap();
        assert_eq!(
            gg.rows(),
            vec![vec![1, 1, 1, 1], vec![1, 0, 1, 0], vec![1, 1, 0, 0], vec![1, 0, 0, 0]]
        );
        let p = m(&[&[0, 1], &[1, 0]]);
        let gp = g.kronecker(&p, 4096).unwrap();
        assert_eq!(gp.dim(), 4);
        assert!(gp.at(1, 2) && !gp.at(1, 1));
    }

    #[test]
    fn kronecker_respects_cap() {
        let f3 = ZeroOneMatrix::full(3).unwrap();
        assert_eq!(
            f3.kronecker(&f3, 8),
            Err(Error::DimensionOverflow { requested: 9, cap: 8 })
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ZeroOneMatrix::new(&[vec![1]]).is_err());
        assert!(ZeroOneMatrix::new(&[vec![1, 2], vec![0, 1]]).is_err());
        assert!(ZeroOneMatrix::new(&[vec![1, 1], vec![0]]).is_err());
    }

    #[test]
    fn parses_shorthand_and_json() {
        assert_eq!(ZeroOneMatrix::parse("F3").unwrap(), ZeroOneMatrix::full(3).unwrap());
        let g = ZeroOneMatrix::parse(r#"{"n": 2, "rows": [[1,1],[1,0]]}"#).unwrap();
        assert_eq!(g, m(&[&[1, 1], &[1, 0]]));
        assert_eq!(ZeroOneMatrix::parse("[[1,1],[1,0]]").unwrap(), g);
        assert!(ZeroOneMatrix::parse(r#"{"n": 3, "rows": [[1,1],[1,0]]}"#).is_err());
    }
}
