//! Generic basic hypergeometric series r_phi_s and classical p_F_q, plus
//! the very-well-poised builders the expansion coefficients need.
//!
//! Termination and denominator poles are detected analytically before any
//! term is summed: a parameter a equals q^{-m} only if m sits within
//! rounding distance of -ln(a)/ln(q), so the scan is O(parameters), not
//! O(terms). A tolerance of 1e-11 decides "is a power of q^{-1}"; inputs
//! closer than that to a pole are rejected rather than summed through.

use crate::error::{Error, Result};
use crate::qcore::{cr, C64, CompensatedSum, EvalResult, QBase, TruncationPolicy};

const POLE_TOL: f64 = 1e-11;

/// Smallest m >= 0 with a q^m within POLE_TOL of 1, if any.
fn q_power_index(a: C64, q: C64) -> Option<u32> {
    if a.norm() == 0.0 {
        return None;
    }
    let est = -(a.ln() / q.ln()).re;
    for dm in [-1.0, 0.0, 1.0] {
        let m = est.round() + dm;
        if (0.0..4.0e9).contains(&m) {
            let mi = m as u32;
            if (a * q.powu(mi) - cr(1.0)).norm() < POLE_TOL {
                return Some(mi);
            }
        }
    }
    None
}

/// Smallest m >= 0 with a + m within POLE_TOL of 0, if any.
fn neg_int_index(a: C64) -> Option<u32> {
    let m = -a.re.round();
    if a.im.abs() < POLE_TOL && (0.0..4.0e9).contains(&m) && (a.re + m).abs() < POLE_TOL {
        Some(m as u32)
    } else {
        None
    }
}

/// A basic hypergeometric series r_phi_s(num; den; q, z).
#[derive(Debug, Clone)]
pub struct PhiSpec {
    pub num: Vec<C64>,
    pub den: Vec<C64>,
    pub q: QBase,
    pub z: C64,
}

impl PhiSpec {
    pub fn new(num: Vec<C64>, den: Vec<C64>, q: QBase, z: C64) -> Self {
        PhiSpec { num, den, q, z }
    }
}

/// Sum r_phi_s with the ((-1)^k q^C(k,2))^{1+s-r} convention. Terminating
/// series are summed exactly through their last nonzero term; otherwise
/// convergence demands 1+s-r > 0, or 1+s-r = 0 with |z| < 1.
pub fn phi(spec: &PhiSpec, pol: &TruncationPolicy) -> Result<EvalResult> {
    let q = spec.q.value();
    let e = 1 + spec.den.len() as i32 - spec.num.len() as i32;

    let t_idx = spec
        .num
        .iter()
        .filter_map(|&a| q_power_index(a, q))
        .min();
    let p_idx = spec
        .den
        .iter()
        .filter_map(|&b| q_power_index(b, q))
        .min();
    if let Some(p) = p_idx {
        // (b; q)_k vanishes from k = p+1 on; harmless only if the numerator
        // has already terminated by then.
        if t_idx.map_or(true, |m| p < m) {
            return Err(Error::DenominatorPole(format!(
                "denominator parameter is q^-{p} while the series terminates at {t_idx:?}"
            )));
        }
    }
    if t_idx.is_none() {
        if e < 0 {
            return Err(Error::NonConvergent(
                "r > s+1 series diverges unless terminating".into(),
            ));
        }
        if e == 0 && spec.z.norm() >= 1.0 {
            return Err(Error::NonConvergent(format!(
                "r = s+1 series needs |z| < 1, got |z| = {}",
                spec.z.norm()
            )));
        }
    }

    let mut sum = CompensatedSum::new();
    let mut term = cr(1.0);
    let mut qk = cr(1.0);
    let mut small = 0u32;
    let mut last_ratio = 0.0f64;
    let limit = t_idx.map_or(pol.max_terms, |m| m as usize + 1);
    for k in 0..limit.max(1) {
        sum.add(term);
        if t_idx.is_none() {
            let t = term.norm();
            if t <= pol.term_eps * sum.value().norm() || t < pol.abs_floor {
                small += 1;
                if small >= 2 && k >= 1 {
                    let tail = if last_ratio < 0.99 {
                        t * last_ratio / (1.0 - last_ratio)
                    } else {
                        t * (k as f64)
                    };
                    return Ok(EvalResult {
                        value: sum.value(),
                        terms_used: k + 1,
                        converged: true,
                        tail_bound: tail,
                    });
                }
            } else {
                small = 0;
            }
        }
        // ratio term_{k+1} / term_k
        let mut ratio = spec.z;
        for &a in &spec.num {
            ratio *= cr(1.0) - a * qk;
        }
        for &b in &spec.den {
            let f = cr(1.0) - b * qk;
            if f.norm() < POLE_TOL {
                return Err(Error::DenominatorPole(format!(
                    "denominator factor vanishes at term {k}"
                )));
            }
            ratio /= f;
        }
        ratio /= cr(1.0) - q * qk;
        if e != 0 {
            ratio *= (-qk).powi(e);
        }
        let prev = term.norm();
        term *= ratio;
        if prev > 0.0 {
            last_ratio = term.norm() / prev;
        }
        qk *= q;
    }
    if t_idx.is_some() {
        return Ok(EvalResult {
            value: sum.value(),
            terms_used: limit,
            converged: true,
            tail_bound: 0.0,
        });
    }
    Err(Error::NonConvergent(format!(
        "phi did not meet term_eps within {} terms",
        pol.max_terms
    )))
}

/// A classical hypergeometric series p_F_q(num; den; z).
#[derive(Debug, Clone)]
pub struct HypSpec {
    pub num: Vec<C64>,
    pub den: Vec<C64>,
    pub z: C64,
}

impl HypSpec {
    pub fn new(num: Vec<C64>, den: Vec<C64>, z: C64) -> Self {
        HypSpec { num, den, z }
    }

    fn parametric_excess(&self) -> C64 {
        self.den.iter().sum::<C64>() - self.num.iter().sum::<C64>()
    }
}

/// Sum p_F_q. Non-terminating series need p <= q, or p = q+1 with |z| < 1,
/// or p = q+1 at z = 1 with positive parametric excess (the 7F6 and 2F1
/// cases used downstream); z = 1 convergence is polynomial-rate, so the
/// tail estimate switches to the integral-comparison form there.
pub fn hyp(spec: &HypSpec, pol: &TruncationPolicy) -> Result<EvalResult> {
    let t_idx = spec.num.iter().filter_map(|&a| neg_int_index(a)).min();
    let p_idx = spec.den.iter().filter_map(|&b| neg_int_index(b)).min();
    if let Some(p) = p_idx {
        if t_idx.map_or(true, |m| p < m) {
            return Err(Error::DenominatorPole(format!(
                "denominator parameter is -{p} while the series terminates at {t_idx:?}"
            )));
        }
    }
    let excess = spec.parametric_excess().re;
    let at_one = (spec.z - cr(1.0)).norm() < 1e-14;
    if t_idx.is_none() {
        let p = spec.num.len() as i32;
        let qn = spec.den.len() as i32;
        if p > qn + 1 {
            return Err(Error::NonConvergent(
                "p > q+1 series diverges unless terminating".into(),
            ));
        }
        if p == qn + 1 {
            if at_one {
                if excess <= 0.0 {
                    return Err(Error::NonConvergent(format!(
                        "z = 1 needs positive parametric excess, got {excess}"
                    )));
                }
            } else if spec.z.norm() >= 1.0 {
                return Err(Error::NonConvergent(format!(
                    "p = q+1 series needs |z| < 1, got |z| = {}",
                    spec.z.norm()
                )));
            }
        }
    }

    let mut sum = CompensatedSum::new();
    let mut term = cr(1.0);
    let mut small = 0u32;
    let mut last_ratio = 0.0f64;
    let limit = t_idx.map_or(pol.max_terms, |m| m as usize + 1);
    for k in 0..limit.max(1) {
        sum.add(term);
        if t_idx.is_none() {
            let t = term.norm();
            if t <= pol.term_eps * sum.value().norm() || t < pol.abs_floor {
                small += 1;
                if small >= 2 && k >= 1 {
                    let tail = if at_one {
                        t * (k as f64) / excess.max(0.25)
                    } else if last_ratio < 0.99 {
                        t * last_ratio / (1.0 - last_ratio)
                    } else {
                        t * (k as f64)
                    };
                    return Ok(EvalResult {
                        value: sum.value(),
                        terms_used: k + 1,
                        converged: true,
                        tail_bound: tail,
                    });
                }
            } else {
                small = 0;
            }
        }
        let kf = cr(k as f64);
        let mut ratio = spec.z / (kf + cr(1.0));
        for &a in &spec.num {
            ratio *= a + kf;
        }
        for &b in &spec.den {
            let f = b + kf;
            if f.norm() < POLE_TOL {
                return Err(Error::DenominatorPole(format!(
                    "denominator factor vanishes at term {k}"
                )));
            }
            ratio /= f;
        }
        let prev = term.norm();
        term *= ratio;
        if prev > 0.0 {
            last_ratio = term.norm() / prev;
        }
    }
    if t_idx.is_some() {
        return Ok(EvalResult {
            value: sum.value(),
            terms_used: limit,
            converged: true,
            tail_bound: 0.0,
        });
    }
    Err(Error::NonConvergent(format!(
        "hyp did not meet term_eps within {} terms",
        pol.max_terms
    )))
}

/// Bailey's very-well-poised 7F6,
/// W(a; b, c, d, e, f) = 7F6(a, a/2+1, b, c, d, e, f;
///                           a/2, 1+a-b, 1+a-c, 1+a-d, 1+a-e, 1+a-f; 1).
pub fn vwp_w(a: C64, b: C64, c: C64, d: C64, e: C64, f: C64, pol: &TruncationPolicy) -> Result<EvalResult> {
    let one = cr(1.0);
    let spec = HypSpec::new(
        vec![a, a / cr(2.0) + one, b, c, d, e, f],
        vec![
            a / cr(2.0),
            one + a - b,
            one + a - c,
            one + a - d,
            one + a - e,
            one + a - f,
        ],
        one,
    );
    hyp(&spec, pol)
}

/// The very-well-poised 8phi7 as a generic phi spec:
/// 8W7(a; b,c,d,e,f; q, z) with numerator (a, q sqrt a, -q sqrt a, b..f)
/// and denominator (sqrt a, -sqrt a, qa/b, ..., qa/f). Principal square
/// root; the +/- pair makes the value branch-independent.
pub fn vwp_phi_spec(a: C64, b: [C64; 5], q: QBase, z: C64) -> PhiSpec {
    let ra = a.sqrt();
    let qa = q.value() * a;
    PhiSpec::new(
        vec![a, q.value() * ra, -(q.value() * ra), b[0], b[1], b[2], b[3], b[4]],
        vec![ra, -ra, qa / b[0], qa / b[1], qa / b[2], qa / b[3], qa / b[4]],
        q,
        z,
    )
}

/// Square-root-free evaluation of the same 8W7: the +/- sqrt parameter
/// pairs collapse into the factor (1 - a q^{2k}) / (1 - a). Agreement with
/// phi(vwp_phi_spec(..)) doubles as the branch test for the principal-root
/// convention.
pub fn vwp_phi(a: C64, b: [C64; 5], q: QBase, z: C64, pol: &TruncationPolicy) -> Result<EvalResult> {
    let qv = q.value();
    if t_or_pole(a, b, q).is_some() {
        return Err(Error::DenominatorPole(
            "vwp_phi pole in qa/b parameters".into(),
        ));
    }
    if z.norm() >= 1.0 {
        return Err(Error::NonConvergent(format!(
            "8W7 needs |z| < 1, got {}",
            z.norm()
        )));
    }
    let mut sum = C64::new(0.0, 0.0);
    // running product part of the term, excluding the (1 - a q^2k) bracket
    let mut prod = cr(1.0);
    let mut qk = cr(1.0);
    let mut q2k = cr(1.0);
    let mut small = 0u32;
    let mut last = 0.0f64;
    for k in 0..pol.max_terms {
        let term = prod * (cr(1.0) - a * q2k) / (cr(1.0) - a);
        sum += term;
        let t = term.norm();
        if t <= pol.term_eps * sum.norm() || t < pol.abs_floor {
            small += 1;
            if small >= 2 && k >= 1 {
                let tail = if last < 0.99 {
                    t * last / (1.0 - last)
                } else {
                    t * k as f64
                };
                return Ok(EvalResult {
                    value: sum,
                    terms_used: k + 1,
                    converged: true,
                    tail_bound: tail,
                });
            }
        } else {
            small = 0;
        }
        let mut ratio = z * (cr(1.0) - a * qk) / (cr(1.0) - qv * qk);
        for &bi in &b {
            ratio *= (cr(1.0) - bi * qk) / (cr(1.0) - (qv * a / bi) * qk);
        }
        let prev = (prod * (cr(1.0) - a * q2k)).norm();
        prod *= ratio;
        qk *= qv;
        q2k *= qv * qv;
        if prev > 0.0 {
            last = (prod * (cr(1.0) - a * q2k)).norm() / prev;
        }
    }
    Err(Error::NonConvergent(
        "vwp_phi did not converge within max_terms".into(),
    ))
}

fn t_or_pole(a: C64, b: [C64; 5], q: QBase) -> Option<u32> {
    b.iter()
        .filter_map(|&bi| q_power_index(q.value() * a / bi, q.value()))
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c64, qpoch_finite, qpoch_infinite};

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn q_binomial_theorem_spot() {
        // 1phi0(a; -; q, z) = (az; q)_inf / (z; q)_inf
        let q = QBase::real(0.4).unwrap();
        let a = c64(0.35, 0.2);
        let z = c64(-0.5, 0.3);
        let s = phi(&PhiSpec::new(vec![a], vec![], q, z), &pol()).unwrap();
        let num = qpoch_infinite(a * z, q, &pol()).value;
        let den = qpoch_infinite(z, q, &pol()).value;
        assert!((s.value - num / den).norm() < 1e-13 * (num / den).norm());
    }

    #[test]
    fn q_gauss_sum() {
        // 2phi1(a, b; c; q, c/(ab)) = (c/a, c/b; q)_inf / (c, c/(ab); q)_inf
        let q = QBase::real(0.55).unwrap();
        let (a, b, c) = (cr(0.7), cr(0.9), cr(0.2));
        let z = c / (a * b);
        assert!(z.norm() < 1.0);
        let s = phi(&PhiSpec::new(vec![a, b], vec![c], q, z), &pol()).unwrap();
        let want = qpoch_infinite(c / a, q, &pol()).value * qpoch_infinite(c / b, q, &pol()).value
            / (qpoch_infinite(c, q, &pol()).value * qpoch_infinite(z, q, &pol()).value);
        assert!((s.value - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn terminating_phi_is_exact_polynomial() {
        let q = QBase::real(0.3).unwrap();
        let qv = q.value();
        let b = cr(0.6);
        let c = cr(0.8);
        let z = c64(0.4, 0.1);
        let a = qv.powi(-3);
        let s = phi(&PhiSpec::new(vec![a, b], vec![c], q, z), &pol()).unwrap();
        assert_eq!(s.terms_used, 4);
        assert_eq!(s.tail_bound, 0.0);
        let mut want = C64::new(0.0, 0.0);
        for k in 0..=3u32 {
            want += qpoch_finite(a, q, k) * qpoch_finite(b, q, k) * z.powu(k)
                / (qpoch_finite(qv, q, k) * qpoch_finite(c, q, k));
        }
        assert!((s.value - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn denominator_pole_rejected() {
        let q = QBase::real(0.5).unwrap();
        let bad = PhiSpec::new(
            vec![cr(0.3), cr(0.4)],
            vec![q.value().powi(-2)],
            q,
            cr(0.2),
        );
        assert!(matches!(phi(&bad, &pol()), Err(Error::DenominatorPole(_))));
        // pole beyond the termination index is harmless
        let ok = PhiSpec::new(
            vec![q.value().powi(-2), cr(0.4)],
            vec![q.value().powi(-5)],
            q,
            cr(0.2),
        );
        assert!(phi(&ok, &pol()).is_ok());
    }

    #[test]
    fn divergent_phi_rejected() {
        let q = QBase::real(0.5).unwrap();
        let s = PhiSpec::new(vec![cr(0.3), cr(0.4)], vec![cr(0.6)], q, cr(1.1));
        assert!(matches!(phi(&s, &pol()), Err(Error::NonConvergent(_))));
    }

    #[test]
    fn gauss_2f1_at_one() {
        // 2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))
        // excess c-a-b = 3.3: polynomial-rate tail, representative of the
        // very-well-poised 7F6 uses downstream
        use crate::qcore::gamma::gamma;
        let (a, b, c) = (cr(0.3), cr(0.5), cr(4.1));
        let s = hyp(&HypSpec::new(vec![a, b], vec![c], cr(1.0)), &pol()).unwrap();
        let want = gamma(c).unwrap() * gamma(c - a - b).unwrap()
            / (gamma(c - a).unwrap() * gamma(c - b).unwrap());
        assert!((s.value - want).norm() < 1e-10 * want.norm());
        assert!(s.tail_bound < 1e-9);
    }

    #[test]
    fn binomial_1f0() {
        let a = c64(0.7, -0.3);
        let z = c64(0.2, 0.4);
        let s = hyp(&HypSpec::new(vec![a], vec![], z), &pol()).unwrap();
        let want = (cr(1.0) - z).powc(-a);
        assert!((s.value - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn hyp_domain_errors() {
        assert!(matches!(
            hyp(&HypSpec::new(vec![cr(0.5), cr(0.5)], vec![cr(-2.0)], cr(0.3)), &pol()),
            Err(Error::DenominatorPole(_))
        ));
        // z = 1 with nonpositive excess
        assert!(matches!(
            hyp(&HypSpec::new(vec![cr(1.0), cr(1.5)], vec![cr(2.0)], cr(1.0)), &pol()),
            Err(Error::NonConvergent(_))
        ));
        // terminating numerator shields the z = 1 check
        assert!(hyp(&HypSpec::new(vec![cr(-3.0), cr(1.5)], vec![cr(2.0)], cr(1.0)), &pol()).is_ok());
    }

    #[test]
    fn dougall_very_well_poised_sum() {
        // terminating 2-balanced W(a; b,c,d,e,-n) has Dougall's closed form
        use crate::qcore::pochhammer_finite as pf;
        let a = cr(1.1);
        let (b, c, d) = (cr(0.3), cr(0.4), cr(0.5));
        let n = 4u32;
        let f = cr(-(n as f64));
        let e = cr(1.0) + a * cr(2.0) - b - c - d - f;
        let w = vwp_w(a, b, c, d, e, f, &pol()).unwrap();
        let one = cr(1.0);
        let want = pf(one + a, n) * pf(one + a - b - c, n) * pf(one + a - b - d, n)
            * pf(one + a - c - d, n)
            / (pf(one + a - b, n)
                * pf(one + a - c, n)
                * pf(one + a - d, n)
                * pf(one + a - b - c - d, n));
        assert!((w.value - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn vwp_sqrt_and_sqrt_free_paths_agree() {
        let q = QBase::real(0.45).unwrap();
        let a = cr(0.2);
        let b = [cr(0.3), cr(0.5), cr(-0.4), cr(0.25), cr(0.15)];
        let z = cr(0.6);
        let via_phi = phi(&vwp_phi_spec(a, b, q, z), &pol()).unwrap();
        let direct = vwp_phi(a, b, q, z, &pol()).unwrap();
        assert!((via_phi.value - direct.value).norm() < 1e-12 * direct.value.norm());
    }
}
