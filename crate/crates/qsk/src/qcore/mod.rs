//! q-shifted factorials, q-gamma, and the classical Pochhammer symbol.
//!
//! Everything downstream (series, polynomial families, expansion
//! coefficients) reduces to the primitives here. Infinite products carry
//! their own truncation metadata so callers can propagate convergence
//! information instead of guessing.

pub mod gamma;
pub mod inequalities;

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Series base. Invariant: 0 < |q| < 1, enforced at construction so the
/// evaluators never have to re-check it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBase {
    q: C64,
}

impl QBase {
    pub fn new(q: C64) -> Result<Self> {
        let m = q.norm();
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::DomainViolation(format!(
                "base must satisfy 0 < |q| < 1, got q = {q}"
            )));
        }
        Ok(QBase { q })
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(cr(q))
    }

    #[inline]
    pub fn value(self) -> C64 {
        self.q
    }

    #[inline]
    pub fn modulus(self) -> f64 {
        self.q.norm()
    }

    pub fn is_real(self) -> bool {
        self.q.im == 0.0
    }

    /// Principal branch q^e.
    pub fn pow(self, e: C64) -> C64 {
        self.q.powc(e)
    }

    pub fn powi(self, e: i32) -> C64 {
        self.q.powi(e)
    }
}

/// Truncation controls shared by every series and product evaluator.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    /// Stop a sum once |term| <= term_eps * |partial sum| twice in a row.
    pub term_eps: f64,
    /// Treat magnitudes below this as an exact zero when dividing.
    pub abs_floor: f64,
    /// Hard cap on summed terms; exceeding it clears `converged`.
    pub max_terms: usize,
    /// Stop an infinite product once the omitted factors differ from 1 by
    /// less than this.
    pub product_eps: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            term_eps: 1e-16,
            abs_floor: 1e-300,
            max_terms: 100_000,
            product_eps: 1e-18,
        }
    }
}

/// Value of a truncated series or product together with how it was reached.
/// `tail_bound` is an estimate of the absolute size of what was dropped;
/// it is finite whenever `converged` is true.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: C64,
    pub terms_used: usize,
    pub converged: bool,
    pub tail_bound: f64,
}

impl EvalResult {
    pub fn exact(value: C64) -> Self {
        EvalResult {
            value,
            terms_used: 0,
            converged: true,
            tail_bound: 0.0,
        }
    }
}

/// Neumaier-compensated complex accumulator. Series with heavy cancellation
/// (terms orders of magnitude above the sum) lose the low bits of every add
/// under naive accumulation; carrying the rounding error of each add keeps
/// the sum accurate to the terms' own precision.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: C64) {
        let t = self.sum + term;
        self.comp.re += if self.sum.re.abs() >= term.re.abs() {
            (self.sum.re - t.re) + term.re
        } else {
            (term.re - t.re) + self.sum.re
        };
        self.comp.im += if self.sum.im.abs() >= term.im.abs() {
            (self.sum.im - t.im) + term.im
        } else {
            (term.im - t.im) + self.sum.im
        };
        self.sum = t;
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

/// Does z sit (to tolerance) on a nonnegative integer?
pub fn as_nonneg_int(z: C64) -> Option<u32> {
    let r = z.re.round();
    if z.im.abs() < 1e-11 && (z.re - r).abs() < 1e-11 && r >= 0.0 && r < 4.0e9 {
        Some(r as u32)
    } else {
        None
    }
}

/// Does z sit (to tolerance) on a nonpositive integer?
pub fn as_nonpos_int(z: C64) -> Option<u32> {
    let r = z.re.round();
    if z.im.abs() < 1e-11 && (z.re - r).abs() < 1e-11 && r <= 0.0 && r > -4.0e9 {
        Some((-r) as u32)
    } else {
        None
    }
}

/// (a; q)_n = prod_{k<n} (1 - a q^k). Empty product is 1.
pub fn qpoch_finite(a: C64, q: QBase, n: u32) -> C64 {
    let mut p = cr(1.0);
    let mut aq = a;
    for _ in 0..n {
        p *= cr(1.0) - aq;
        aq *= q.value();
    }
    p
}

/// prod_i (a_i; q)_n, the usual multi-parameter shorthand.
pub fn qpoch_finite_many(a: &[C64], q: QBase, n: u32) -> C64 {
    a.iter().map(|&ai| qpoch_finite(ai, q, n)).product()
}

/// (a; q)_inf, truncated once the omitted factors are within product_eps
/// of 1. An exact zero factor short-circuits to an exact zero result.
pub fn qpoch_infinite(a: C64, q: QBase, pol: &TruncationPolicy) -> EvalResult {
    let qm = q.modulus();
    let mut p = cr(1.0);
    let mut aq = a;
    let mut k = 0usize;
    while k < pol.max_terms {
        let f = cr(1.0) - aq;
        if f.norm() == 0.0 {
            return EvalResult {
                value: cr(0.0),
                terms_used: k + 1,
                converged: true,
                tail_bound: 0.0,
            };
        }
        p *= f;
        aq *= q.value();
        k += 1;
        if aq.norm() < pol.product_eps {
            // |log of the remaining product| <= r / ((1-|q|)(1-r))
            let r = aq.norm();
            let l = r / ((1.0 - qm) * (1.0 - r));
            return EvalResult {
                value: p,
                terms_used: k,
                converged: true,
                tail_bound: p.norm() * l.exp_m1(),
            };
        }
    }
    EvalResult {
        value: p,
        terms_used: k,
        converged: false,
        tail_bound: f64::INFINITY,
    }
}

pub fn qpoch_infinite_many(a: &[C64], q: QBase, pol: &TruncationPolicy) -> EvalResult {
    let mut value = cr(1.0);
    let mut terms = 0usize;
    let mut converged = true;
    let mut rel_tail = 0.0f64;
    for &ai in a {
        let r = qpoch_infinite(ai, q, pol);
        terms += r.terms_used;
        converged &= r.converged;
        if r.value.norm() > 0.0 {
            rel_tail += r.tail_bound / r.value.norm();
        }
        value *= r.value;
    }
    EvalResult {
        value,
        terms_used: terms,
        converged,
        tail_bound: value.norm() * rel_tail,
    }
}

/// (a; q)_beta = (a; q)_inf / (a q^beta; q)_inf. For beta a nonnegative
/// integer the finite product is used verbatim, which keeps terminating
/// cases exact. The reciprocal convention for Re beta < 0 is automatic in
/// the infinite-product ratio.
pub fn qpoch_general(a: C64, q: QBase, beta: C64, pol: &TruncationPolicy) -> Result<EvalResult> {
    if let Some(m) = as_nonneg_int(beta) {
        return Ok(EvalResult::exact(qpoch_finite(a, q, m)));
    }
    // paired factors (1 - a q^k)/(1 - a q^{beta+k}): near q = 1 the two
    // infinite products underflow separately while their ratio stays
    // moderate
    let qm = q.modulus();
    let mut aq = a;
    let mut bq = a * q.pow(beta);
    let mut p = cr(1.0);
    let mut k = 0usize;
    while k < pol.max_terms {
        let den = cr(1.0) - bq;
        // a q^{beta+k} = 1 is a genuine pole of the ratio; the same 1e-11
        // width used for integer detection absorbs the powc roundoff in
        // q^beta
        if den.norm() < 1e-11 {
            return Err(Error::DivisionByVanishingProduct(format!(
                "(a q^beta; q)_inf vanishes for a = {a}, beta = {beta}"
            )));
        }
        let num = cr(1.0) - aq;
        if num.norm() == 0.0 {
            return Ok(EvalResult {
                value: cr(0.0),
                terms_used: k + 1,
                converged: true,
                tail_bound: 0.0,
            });
        }
        p *= num / den;
        aq *= q.value();
        bq *= q.value();
        k += 1;
        let r = aq.norm().max(bq.norm());
        if r < pol.product_eps {
            let l = 2.0 * r / ((1.0 - qm) * (1.0 - r));
            return Ok(EvalResult {
                value: p,
                terms_used: k,
                converged: true,
                tail_bound: p.norm() * l.exp_m1(),
            });
        }
    }
    Ok(EvalResult {
        value: p,
        terms_used: k,
        converged: false,
        tail_bound: f64::INFINITY,
    })
}

/// q-number [z]_q = (1 - q^z) / (1 - q).
pub fn qnumber(z: C64, q: QBase) -> C64 {
    (cr(1.0) - q.pow(z)) / (cr(1.0) - q.value())
}

/// [n]_q! = (q; q)_n / (1 - q)^n.
pub fn qfactorial(n: u32, q: QBase) -> C64 {
    qpoch_finite(q.value(), q, n) / (cr(1.0) - q.value()).powi(n as i32)
}

/// Gaussian binomial (q; q)_n / ((q; q)_k (q; q)_{n-k}).
pub fn qbinomial(n: u32, k: u32, q: QBase) -> C64 {
    assert!(k <= n, "qbinomial needs k <= n");
    qpoch_finite(q.value(), q, n)
        / (qpoch_finite(q.value(), q, k) * qpoch_finite(q.value(), q, n - k))
}

/// Gamma_q(x) = (1-q)^{1-x} (q; q)_inf / (q^x; q)_inf, evaluated as the
/// paired ratio (q; q)_{x-1} so it survives q close to 1.
pub fn qgamma(x: C64, q: QBase, pol: &TruncationPolicy) -> Result<EvalResult> {
    let ratio = qpoch_general(q.value(), q, x - cr(1.0), pol).map_err(|_| {
        Error::PoleError(format!("Gamma_q pole at x = {x}"))
    })?;
    let pref = (cr(1.0) - q.value()).powc(cr(1.0) - x);
    Ok(EvalResult {
        value: pref * ratio.value,
        terms_used: ratio.terms_used,
        converged: ratio.converged,
        tail_bound: pref.norm() * ratio.tail_bound,
    })
}

/// Rising factorial (alpha)_n over the integers.
pub fn pochhammer_finite(alpha: C64, n: u32) -> C64 {
    let mut p = cr(1.0);
    for j in 0..n {
        p *= alpha + cr(j as f64);
    }
    p
}

/// (alpha)_beta = Gamma(alpha + beta) / Gamma(alpha), with the integer-beta
/// product taken exactly and Re beta < 0 routed through the reciprocal
/// convention (alpha)_beta = 1 / (alpha + beta)_{-beta}.
pub fn pochhammer_general(alpha: C64, beta: C64) -> Result<C64> {
    if let Some(m) = as_nonneg_int(beta) {
        return Ok(pochhammer_finite(alpha, m));
    }
    if beta.re < 0.0 {
        let recip = pochhammer_general(alpha + beta, -beta)?;
        if recip.norm() == 0.0 {
            return Err(Error::PoleError(format!(
                "(alpha)_beta pole: alpha = {alpha}, beta = {beta}"
            )));
        }
        return Ok(cr(1.0) / recip);
    }
    if as_nonpos_int(alpha).is_some() {
        // Gamma(alpha) is infinite; the ratio vanishes unless the numerator
        // blows up too, which needs alpha + beta on a nonpositive integer.
        if as_nonpos_int(alpha + beta).is_some() {
            return Err(Error::ParameterDomain(format!(
                "(alpha)_beta indeterminate: alpha = {alpha}, beta = {beta}"
            )));
        }
        return Ok(cr(0.0));
    }
    if as_nonpos_int(alpha + beta).is_some() {
        return Err(Error::PoleError(format!(
            "(alpha)_beta pole: alpha = {alpha}, beta = {beta}"
        )));
    }
    if alpha.norm() < 50.0 && (alpha + beta).norm() < 50.0 {
        return Ok(gamma::gamma(alpha + beta)? / gamma::gamma(alpha)?);
    }
    Ok((gamma::lngamma(alpha + beta)? - gamma::lngamma(alpha)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn qbase_rejects_bad_modulus() {
        assert!(QBase::real(0.0).is_err());
        assert!(QBase::real(1.0).is_err());
        assert!(QBase::real(-1.2).is_err());
        assert!(QBase::new(c64(0.6, 0.9)).is_err());
        assert!(QBase::real(0.5).is_ok());
    }

    #[test]
    fn qpoch_empty_product_is_one() {
        let q = QBase::real(0.5).unwrap();
        assert_eq!(qpoch_finite(cr(0.3), q, 0), cr(1.0));
    }

    #[test]
    fn qpoch_infinite_matches_frozen_euler_values() {
        // (1/2; 1/2)_inf and (3/10; 3/10)_inf to 30 digits.
        let pol = pol();
        let q = QBase::real(0.5).unwrap();
        let v = qpoch_infinite(cr(0.5), q, &pol);
        assert!(v.converged);
        assert!((v.value.re - 0.288788095086602421278899721929).abs() < 1e-15);
        let q3 = QBase::real(0.3).unwrap();
        let v3 = qpoch_infinite(cr(0.3), q3, &pol);
        assert!((v3.value.re - 0.612648154213256524117652074619).abs() < 1e-15);
    }

    #[test]
    fn qpoch_infinite_tail_bound_is_honest() {
        let q = QBase::real(0.8).unwrap();
        let tight = pol();
        let loose = TruncationPolicy {
            product_eps: 1e-6,
            ..pol()
        };
        let a = c64(0.7, 0.2);
        let vt = qpoch_infinite(a, q, &tight);
        let vl = qpoch_infinite(a, q, &loose);
        assert!((vl.value - vt.value).norm() <= vl.tail_bound * 1.01 + 1e-18);
    }

    #[test]
    fn qpoch_general_integer_beta_is_exact() {
        let q = QBase::real(0.7).unwrap();
        let a = c64(0.4, 0.1);
        let g = qpoch_general(a, q, cr(3.0), &pol()).unwrap();
        assert_eq!(g.value, qpoch_finite(a, q, 3));
        assert_eq!(g.tail_bound, 0.0);
    }

    #[test]
    fn qpoch_general_negative_beta_reciprocal() {
        // (a; q)_beta (a q^beta; q)_{-beta} = 1
        let q = QBase::real(0.6).unwrap();
        let a = cr(0.35);
        let beta = cr(-1.7);
        let lhs = qpoch_general(a, q, beta, &pol()).unwrap().value;
        let rhs = qpoch_general(a * q.pow(beta), q, -beta, &pol()).unwrap().value;
        assert!((lhs * rhs - cr(1.0)).norm() < 1e-13);
    }

    #[test]
    fn qnumber_and_factorial_basics() {
        let q = QBase::real(0.9).unwrap();
        assert!((qnumber(cr(2.0), q) - cr(1.9)).norm() < 1e-15);
        // [3]_q! = (1)(1+q)(1+q+q^2)
        let expect = 1.0 * 1.9 * (1.0 + 0.9 + 0.81);
        assert!((qfactorial(3, q) - cr(expect)).norm() < 1e-14);
    }

    #[test]
    fn qbinomial_symmetry() {
        let q = QBase::real(0.45).unwrap();
        for n in 0..=8u32 {
            for k in 0..=n {
                let d = qbinomial(n, k, q) - qbinomial(n, n - k, q);
                assert!(d.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn qgamma_recovers_qnumber() {
        // Gamma_q(3) = [2]_q
        let q = QBase::real(0.9).unwrap();
        let g = qgamma(cr(3.0), q, &pol()).unwrap();
        assert!((g.value - cr(1.9)).norm() < 1e-12);
    }

    #[test]
    fn qgamma_functional_equation() {
        // Gamma_q(x+1) = [x]_q Gamma_q(x)
        let q = QBase::real(0.75).unwrap();
        for &x in &[0.3, 1.4, 2.6] {
            let x = cr(x);
            let lhs = qgamma(x + cr(1.0), q, &pol()).unwrap().value;
            let rhs = qnumber(x, q) * qgamma(x, q, &pol()).unwrap().value;
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        }
    }

    #[test]
    fn qgamma_pole_detected() {
        let q = QBase::real(0.5).unwrap();
        assert!(matches!(
            qgamma(cr(0.0), q, &pol()),
            Err(Error::PoleError(_))
        ));
        assert!(matches!(
            qgamma(cr(-2.0), q, &pol()),
            Err(Error::PoleError(_))
        ));
    }

    #[test]
    fn pochhammer_integer_cases() {
        assert_eq!(pochhammer_finite(cr(-2.0), 3), cr(0.0));
        assert_eq!(pochhammer_finite(cr(2.5), 0), cr(1.0));
        let v = pochhammer_general(cr(-2.0), cr(3.0)).unwrap();
        assert_eq!(v, cr(0.0));
    }

    #[test]
    fn pochhammer_gamma_ratio_consistency() {
        // (alpha)_{m} from the product equals the gamma-ratio route taken
        // with beta nudged off the integer grid.
        let alpha = c64(1.3, 0.4);
        let exact = pochhammer_finite(alpha, 4);
        let near = pochhammer_general(alpha, cr(4.0 + 1e-9)).unwrap();
        assert!((exact - near).norm() < 1e-7 * exact.norm());
    }

    #[test]
    fn pochhammer_negative_beta_identity() {
        // (alpha)_beta (alpha + beta)_{-beta} = 1
        let alpha = cr(2.2);
        let beta = cr(-1.9);
        let a = pochhammer_general(alpha, beta).unwrap();
        let b = pochhammer_general(alpha + beta, -beta).unwrap();
        assert!((a * b - cr(1.0)).norm() < 1e-13);
    }

    #[test]
    fn pochhammer_poles_and_zeros() {
        // alpha on a nonpositive integer with fractional beta: ratio is 0.
        let v = pochhammer_general(cr(-3.0), cr(0.5)).unwrap();
        assert_eq!(v, cr(0.0));
        // alpha + beta on a nonpositive integer: pole.
        assert!(pochhammer_general(cr(1.5), cr(-2.5)).is_err());
    }
}
