//! Continued-fraction convergents of floating-point values.

/// Convergents `p/q` of `x` with `q <= max_den`, in order of increasing `q`.
pub fn convergents(x: f64, max_den: u64) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut p_prev, mut p) = (1i128, x.floor() as i128);
    let (mut q_prev, mut q) = (0i128, 1i128);
    out.push((p, q));
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-300 {
            break;
        }
        let inv = 1.0 / frac;
        if !inv.is_finite() || inv > 1e18 {
            break;
        }
        let a = inv.floor();
        frac = inv - a;
        let a = a as i128;
        let (pn, qn) = (a * p + p_prev, a * q + q_prev);
        if qn > i128::from(max_den) {
            break;
        }
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
        out.push((p, q));
    }
    out
}

/// The first convergent (smallest denominator) within `tol` of `x`.
pub fn first_close_convergent(x: f64, max_den: u64, tol: f64) -> Option<(i128, i128)> {
    convergents(x, max_den)
        .into_iter()
        .find(|&(p, q)| (x - p as f64 / q as f64).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergents_of_golden_ratio_are_fibonacci() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let c = convergents(phi, 100);
        let qs: Vec<i128> = c.iter().map(|&(_, q)| q).collect();
        assert_eq!(qs, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
    }

    #[test]
    fn integer_value_has_single_convergent() {
        assert_eq!(first_close_convergent(2.0, 1_000_000, 1e-9), Some((2, 1)));
    }

    #[test]
    fn rational_value_recovered() {
        assert_eq!(first_close_convergent(33.0 / 35.0, 1_000_000, 1e-12), Some((33, 35)));
    }
}
