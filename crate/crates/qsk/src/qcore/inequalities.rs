//! Sharp elementary bounds on ratios of real q-shifted factorials. All
//! three take real parameters with 0 < q < 1; the stated windows
//! (u in (0, 5], v in [0, 5]) are the ones the bounds are proved on.

use crate::error::{Error, Result};

/// Both sides of one bound instance; the direction is documented on the
/// producing function.
#[derive(Debug, Clone, Copy)]
pub struct Bound {
    pub lhs: f64,
    pub rhs: f64,
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::DomainViolation(format!("need 0 < q < 1, got {q}")));
    }
    Ok(())
}

fn qpoch(a: f64, q: f64, n: u32) -> f64 {
    let mut p = 1.0;
    let mut aq = a;
    for _ in 0..n {
        p *= 1.0 - aq;
        aq *= q;
    }
    p
}

fn qnum(z: f64, q: f64) -> f64 {
    (1.0 - q.powf(z)) / (1.0 - q)
}

fn qfact(n: u32, q: f64) -> f64 {
    (1..=n).map(|k| qnum(k as f64, q)).product()
}

/// (q^u; q)_j / (1-q)^j >= [u]_q [j-1]_q! for u in (0, 5], j >= 1.
pub fn factorial_lower_bound(u: f64, j: u32, q: f64) -> Result<Bound> {
    check_q(q)?;
    if !(u > 0.0 && u <= 5.0) || j < 1 {
        return Err(Error::DomainViolation(format!(
            "factorial_lower_bound needs u in (0, 5] and j >= 1, got u = {u}, j = {j}"
        )));
    }
    Ok(Bound {
        lhs: qpoch(q.powf(u), q, j) / (1.0 - q).powi(j as i32),
        rhs: qnum(u, q) * qfact(j - 1, q),
    })
}

/// (q^u; q)_n / (q; q)_n <= [1+n]_q^u for u in (0, 5].
pub fn ratio_upper_bound(u: f64, n: u32, q: f64) -> Result<Bound> {
    check_q(q)?;
    if !(u > 0.0 && u <= 5.0) {
        return Err(Error::DomainViolation(format!(
            "ratio_upper_bound needs u in (0, 5], got {u}"
        )));
    }
    Ok(Bound {
        lhs: qpoch(q.powf(u), q, n) / qpoch(q, q, n),
        rhs: qnum(1.0 + n as f64, q).powf(u),
    })
}

/// (q^{v+k}; q)_n / (q^{u+k}; q)_n <= [n+1]_q^{v+1} / [u]_q.
///
/// Holds for 0 < u <= v <= 5, n >= 1, k >= 0. It does NOT hold in general
/// for v < u (e.g. u = 5, v = 0, k = 3, n = 1, q = 0.3) or for n = 0 with
/// u > 1, where the left side is an empty product; the function still
/// computes both sides there so the failure region stays observable.
pub fn shifted_ratio_upper_bound(v: f64, u: f64, k: u32, n: u32, q: f64) -> Result<Bound> {
    check_q(q)?;
    if !(u > 0.0 && u <= 5.0 && (0.0..=5.0).contains(&v)) {
        return Err(Error::DomainViolation(format!(
            "shifted_ratio_upper_bound needs u in (0, 5], v in [0, 5], got u = {u}, v = {v}"
        )));
    }
    let kf = k as f64;
    Ok(Bound {
        lhs: qpoch(q.powf(v + kf), q, n) / qpoch(q.powf(u + kf), q, n),
        rhs: qnum(n as f64 + 1.0, q).powf(v + 1.0) / qnum(u, q),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_holds() {
        for &q in &[0.3, 0.7, 0.95] {
            for iu in 1..=5 {
                let u = iu as f64;
                for j in 1..=6u32 {
                    let b = factorial_lower_bound(u, j, q).unwrap();
                    assert!(b.lhs >= b.rhs, "u={u} j={j} q={q}: {} < {}", b.lhs, b.rhs);
                }
                for n in 0..=6u32 {
                    let b = ratio_upper_bound(u, n, q).unwrap();
                    assert!(b.lhs <= b.rhs, "u={u} n={n} q={q}");
                }
                // shifted ratio: provable regime is u <= v, n >= 1
                for v in [u, u + 0.5, 5.0] {
                    if v > 5.0 {
                        continue;
                    }
                    for k in 0..=3u32 {
                        for n in 1..=6u32 {
                            let b = shifted_ratio_upper_bound(v, u, k, n, q).unwrap();
                            assert!(b.lhs <= b.rhs, "u={u} v={v} k={k} n={n} q={q}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shifted_ratio_known_failure_outside_regime() {
        // The v < u branch genuinely fails; pin one counterexample so the
        // regime restriction above stays justified.
        let b = shifted_ratio_upper_bound(0.0, 5.0, 3, 1, 0.3).unwrap();
        assert!(b.lhs > b.rhs);
    }

    #[test]
    fn domains_enforced() {
        assert!(factorial_lower_bound(0.0, 2, 0.5).is_err());
        assert!(factorial_lower_bound(5.5, 2, 0.5).is_err());
        assert!(factorial_lower_bound(1.0, 0, 0.5).is_err());
        assert!(ratio_upper_bound(1.0, 2, 1.0).is_err());
        assert!(shifted_ratio_upper_bound(-0.1, 1.0, 0, 2, 0.5).is_err());
    }
}
