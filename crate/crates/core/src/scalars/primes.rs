//! Trial-division factorization over an append-only, memoized prime table.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest trial divisor; integers whose unfactored part exceeds its square
/// are rejected rather than guessed prime.
const MAX_TRIAL_DIVISOR: u64 = 10_000_000;

fn table() -> &'static RwLock<Vec<u64>> {
    static PRIMES: OnceLock<RwLock<Vec<u64>>> = OnceLock::new();
    PRIMES.get_or_init(|| RwLock::new(vec![2, 3, 5, 7, 11, 13]))
}

/// All primes up to at least `limit`.
fn primes_up_to(limit: u64) -> Vec<u64> {
    {
        let t = table().read().expect("prime table poisoned");
        if t.last().copied().unwrap_or(0) >= limit {
            return t.iter().copied().take_while(|&p| p <= limit).collect();
        }
    }
    let mut t = table().write().expect("prime table poisoned");
    let mut candidate = t.last().copied().unwrap_or(1) + 2;
    while t.last().copied().unwrap_or(0) < limit {
        let is_prime = t
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| candidate % p != 0);
        if is_prime {
            t.push(candidate);
        }
        candidate += 2;
    }
    t.iter().copied().take_while(|&p| p <= limit).collect()
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(n: &BigUint) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut bound = 64u64;
    let mut start = 0usize;
    loop {
        let primes = primes_up_to(bound);
        for &p in &primes[start..] {
            if rest.is_one() {
                return Ok(out);
            }
            let bp = BigUint::from(p);
            if &bp * &bp > rest {
                out.push((rest.to_u64().ok_or_else(too_large)?, 1));
                out.sort_unstable();
                merge(&mut out);
                return Ok(out);
            }
            let mut e = 0u32;
            loop {
                let (q, r) = rest.div_rem(&bp);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        }
        if rest.is_one() {
            return Ok(out);
        }
        start = primes.len();
        if bound >= MAX_TRIAL_DIVISOR {
            return Err(too_large());
        }
        bound = (bound * 8).min(MAX_TRIAL_DIVISOR);
    }
}

fn merge(v: &mut Vec<(u64, u32)>) {
    v.dedup_by(|b, a| {
        if a.0 == b.0 {
            a.1 += b.1;
            true
        } else {
            false
        }
    });
}

fn too_large() -> Error {
    Error::InvalidScalar("integer too large for trial-division factorization".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_integers() {
        assert_eq!(factorize(&BigUint::from(360u32)).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(&BigUint::from(1u32)).unwrap(), vec![]);
        assert_eq!(factorize(&BigUint::from(97u32)).unwrap(), vec![(97, 1)]);
        assert_eq!(
            factorize(&BigUint::from(1_000_003u64 * 1_000_033u64)).unwrap(),
            vec![(1_000_003, 1), (1_000_033, 1)]
        );
    }
}
