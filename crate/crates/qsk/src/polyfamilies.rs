//! The polynomial families and second-kind functions used by the
//! generating-function identities, each with two independent evaluation
//! paths: the hypergeometric definition and the standard three-term
//! recurrence. The two paths are mutual oracles; nothing downstream is
//! allowed to care which one produced a number.
//!
//! Definition-path values for real arguments and parameters are computed
//! in exact arithmetic (see `exact`) because the terminating balanced
//! sums cancel catastrophically in f64. Complex inputs take a literal
//! f64 summation instead, which is fine at the small degrees complex
//! arguments occur at. Above `EXACT_DEGREE_CAP` the definition path
//! delegates to the recurrence; the two-path contract is only claimed
//! for n <= 30.

use crate::error::{Error, Result};
use crate::exact;
use crate::hyperseries::{hyp, HypSpec};
use crate::qcore::gamma::gamma;
use crate::qcore::{cr, C64, QBase, TruncationPolicy};

const EXACT_DEGREE_CAP_Q: u32 = 40;
const EXACT_DEGREE_CAP_CLASSICAL: u32 = 128;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    AskeyWilson,
    CqJacobi,
    CqUltraspherical,
    CqHermite,
    CqLegendre,
    Wilson,
    Jacobi,
    Gegenbauer,
    ChebyshevT,
    Legendre,
    Laguerre,
}

impl Family {
    pub fn arity(self) -> usize {
        match self {
            Family::AskeyWilson | Family::Wilson => 4,
            Family::CqJacobi | Family::Jacobi => 2,
            Family::CqUltraspherical | Family::Gegenbauer | Family::Laguerre => 1,
            Family::CqHermite | Family::CqLegendre | Family::ChebyshevT | Family::Legendre => 0,
        }
    }

    pub fn is_q_family(self) -> bool {
        matches!(
            self,
            Family::AskeyWilson
                | Family::CqJacobi
                | Family::CqUltraspherical
                | Family::CqHermite
                | Family::CqLegendre
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::AskeyWilson => "askey_wilson",
            Family::CqJacobi => "cq_jacobi",
            Family::CqUltraspherical => "cq_ultraspherical",
            Family::CqHermite => "cq_hermite",
            Family::CqLegendre => "cq_legendre",
            Family::Wilson => "wilson",
            Family::Jacobi => "jacobi",
            Family::Gegenbauer => "gegenbauer",
            Family::ChebyshevT => "chebyshev_t",
            Family::Legendre => "legendre",
            Family::Laguerre => "laguerre",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        [
            Family::AskeyWilson,
            Family::CqJacobi,
            Family::CqUltraspherical,
            Family::CqHermite,
            Family::CqLegendre,
            Family::Wilson,
            Family::Jacobi,
            Family::Gegenbauer,
            Family::ChebyshevT,
            Family::Legendre,
            Family::Laguerre,
        ]
        .into_iter()
        .find(|f| f.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct PolySpec {
    pub family: Family,
    pub params: Vec<C64>,
    pub q: Option<QBase>,
}

impl PolySpec {
    pub fn new(family: Family, params: Vec<C64>, q: Option<QBase>) -> Result<Self> {
        if params.len() != family.arity() {
            return Err(Error::ParameterDomain(format!(
                "{} takes {} parameters, got {}",
                family.name(),
                family.arity(),
                params.len()
            )));
        }
        if family.is_q_family() != q.is_some() {
            return Err(Error::ParameterDomain(format!(
                "q must be present iff the family is a q-family ({})",
                family.name()
            )));
        }
        Ok(PolySpec { family, params, q })
    }

    pub fn askey_wilson(a: [f64; 4], q: f64) -> Result<Self> {
        Self::new(
            Family::AskeyWilson,
            a.iter().map(|&v| cr(v)).collect(),
            Some(QBase::real(q)?),
        )
    }

    pub fn cq_jacobi(alpha: f64, gamma: f64, q: f64) -> Result<Self> {
        Self::new(
            Family::CqJacobi,
            vec![cr(alpha), cr(gamma)],
            Some(QBase::real(q)?),
        )
    }

    pub fn cq_ultraspherical(beta: f64, q: f64) -> Result<Self> {
        Self::new(
            Family::CqUltraspherical,
            vec![cr(beta)],
            Some(QBase::real(q)?),
        )
    }

    pub fn cq_hermite(q: f64) -> Result<Self> {
        Self::new(Family::CqHermite, vec![], Some(QBase::real(q)?))
    }

    pub fn cq_legendre(q: f64) -> Result<Self> {
        Self::new(Family::CqLegendre, vec![], Some(QBase::real(q)?))
    }

    pub fn wilson(a: [f64; 4]) -> Result<Self> {
        Self::new(Family::Wilson, a.iter().map(|&v| cr(v)).collect(), None)
    }

    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Jacobi, vec![cr(alpha), cr(beta)], None)
    }

    pub fn gegenbauer(mu: f64) -> Result<Self> {
        Self::new(Family::Gegenbauer, vec![cr(mu)], None)
    }

    pub fn chebyshev_t() -> Result<Self> {
        Self::new(Family::ChebyshevT, vec![], None)
    }

    pub fn legendre() -> Result<Self> {
        Self::new(Family::Legendre, vec![], None)
    }

    pub fn laguerre(alpha: f64) -> Result<Self> {
        Self::new(Family::Laguerre, vec![cr(alpha)], None)
    }

    fn qv(&self) -> f64 {
        self.q.map(|q| q.value().re).unwrap_or(f64::NAN)
    }

    /// Parameters as reals when every one of them is exactly real.
    fn real_params(&self) -> Option<Vec<f64>> {
        if self.params.iter().all(|p| p.im == 0.0) {
            Some(self.params.iter().map(|p| p.re).collect())
        } else {
            None
        }
    }
}

/// Rejects parameter sets that put a zero into a term denominator of the
/// terminating basic hypergeometric sum.
fn check_q_denominators(bases: &[f64], q: f64, n: u32) -> Result<()> {
    for &b in bases {
        let mut bq = b;
        for _ in 0..n {
            if (1.0 - bq).abs() < 1e-13 {
                return Err(Error::ParameterDomain(format!(
                    "denominator q-shifted factorial vanishes (base {b})"
                )));
            }
            bq *= q;
        }
    }
    Ok(())
}

/// Definition-path evaluation.
pub fn poly_eval(spec: &PolySpec, n: u32, x: C64) -> Result<C64> {
    let cap = if spec.family.is_q_family() {
        EXACT_DEGREE_CAP_Q
    } else {
        EXACT_DEGREE_CAP_CLASSICAL
    };
    if n > cap {
        // accuracy contract for the definition path stops at n <= 30;
        // past the cap the recurrence is the only sane evaluator
        return poly_eval_recurrence(spec, n, x);
    }
    if let Some(p) = spec.real_params() {
        if x.im == 0.0 {
            return poly_eval_exact(spec, n, x.re, &p);
        }
        if let Some(v) = poly_eval_exact_cx(spec, n, x, &p)? {
            return Ok(v);
        }
    }
    poly_eval_literal(spec, n, x)
}

/// Exact summation at a complex argument. Real parameters keep every term
/// denominator real, so these families sum over Gaussian rationals; the
/// rest (cosine sums with rational coefficients, or the literal-f64
/// continuous q-Jacobi) return None and fall through.
fn poly_eval_exact_cx(spec: &PolySpec, n: u32, x: C64, p: &[f64]) -> Result<Option<C64>> {
    let q = spec.qv();
    let v = match spec.family {
        Family::AskeyWilson => {
            let a = [p[0], p[1], p[2], p[3]];
            if a[0] == 0.0 && n > 0 {
                return Err(Error::ParameterDomain("a1 = 0 in Askey-Wilson".into()));
            }
            check_q_denominators(&[a[0] * a[1], a[0] * a[2], a[0] * a[3]], q, n.saturating_sub(1))?;
            exact::askey_wilson_cx(n, x, a, q)
        }
        Family::Wilson => exact::wilson_cx(n, x * x, [p[0], p[1], p[2], p[3]]),
        Family::Jacobi => exact::jacobi_cx(n, x, p[0], p[1]),
        Family::Gegenbauer => exact::gegenbauer_cx(n, x, p[0]),
        Family::Legendre => exact::jacobi_cx(n, x, 0.0, 0.0),
        Family::Laguerre => exact::laguerre_cx(n, x, p[0]),
        _ => return Ok(None),
    };
    Ok(Some(v))
}

fn poly_eval_exact(spec: &PolySpec, n: u32, x: f64, p: &[f64]) -> Result<C64> {
    let q = spec.qv();
    let v = match spec.family {
        Family::AskeyWilson => {
            let a = [p[0], p[1], p[2], p[3]];
            if a[0] == 0.0 && n > 0 {
                return Err(Error::ParameterDomain("a1 = 0 in Askey-Wilson".into()));
            }
            check_q_denominators(&[a[0] * a[1], a[0] * a[2], a[0] * a[3]], q, n.saturating_sub(1))?;
            exact::askey_wilson(n, x, a, q)
        }
        Family::CqJacobi => {
            let (al, ga) = (p[0], p[1]);
            if al <= 0.0 || ga < 0.0 {
                return Err(Error::ParameterDomain(
                    "continuous q-Jacobi needs alpha > 0, gamma >= 0".into(),
                ));
            }
            check_q_denominators(
                &[q.sqrt() * al, -(al * ga).sqrt(), -(q * al * ga).sqrt()],
                q,
                n.saturating_sub(1),
            )?;
            exact::cq_jacobi(n, x, al, ga, q)
        }
        Family::CqUltraspherical => exact::cq_ultra(n, x, p[0], q),
        Family::CqHermite => exact::cq_hermite(n, x, q),
        Family::CqLegendre => exact::cq_legendre(n, x, q),
        Family::Wilson => exact::wilson(n, x * x, [p[0], p[1], p[2], p[3]]),
        Family::Jacobi => exact::jacobi(n, x, p[0], p[1]),
        Family::Gegenbauer => exact::gegenbauer(n, x, p[0]),
        Family::ChebyshevT => {
            return Ok(cr(chebyshev_t_real(n, x)));
        }
        Family::Legendre => exact::legendre(n, x),
        Family::Laguerre => exact::laguerre(n, x, p[0]),
    };
    Ok(cr(v))
}

fn chebyshev_t_real(n: u32, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        (n as f64 * x.acos()).cos()
    } else {
        let s = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        s * (n as f64 * x.abs().acosh()).cosh()
    }
}

/// f64 summation of the definitions, for complex arguments or parameters.
fn poly_eval_literal(spec: &PolySpec, n: u32, x: C64) -> Result<C64> {
    let q = spec.qv();
    match spec.family {
        Family::AskeyWilson => {
            let a = [spec.params[0], spec.params[1], spec.params[2], spec.params[3]];
            aw_literal(n, x, a, q)
        }
        Family::CqJacobi => {
            let (al, ga) = (spec.params[0], spec.params[1]);
            let a = [al.sqrt(), -ga.sqrt(), -(ga * q).sqrt(), (al * q).sqrt()];
            let p = aw_literal(n, x, a, q)?;
            // alpha^{n/2} / (q, -sqrt(alpha gamma), -sqrt(q alpha gamma); q)_n
            let mut conv = cr(1.0);
            let sag = (al * ga).sqrt();
            let mut qk = 1.0;
            for _ in 0..n {
                conv *= al.sqrt() / ((1.0 - q * qk) * (cr(1.0) + sag * qk) * (cr(1.0) + sag * q.sqrt() * qk));
                qk *= q;
            }
            Ok(conv * p)
        }
        Family::CqUltraspherical => Ok(symmetric_cosine_sum(n, x, spec.params[0], q)),
        Family::CqHermite => {
            // qbinom coefficients = beta -> 0 of the ultraspherical sum, times (q;q)_n
            let h = symmetric_cosine_sum(n, x, cr(0.0), q);
            let mut qq = cr(1.0);
            let mut qk = q;
            for _ in 0..n {
                qq *= 1.0 - qk;
                qk *= q;
            }
            Ok(h * qq)
        }
        Family::CqLegendre => {
            Ok(symmetric_cosine_sum(n, x, cr(q.sqrt()), q) * q.powf(n as f64 / 4.0))
        }
        Family::Wilson => wilson_eval(
            n,
            x * x,
            [spec.params[0], spec.params[1], spec.params[2], spec.params[3]],
        ),
        Family::Jacobi => jacobi_literal(n, x, spec.params[0], spec.params[1]),
        Family::Gegenbauer => {
            let mu = spec.params[0];
            let lam = mu - 0.5;
            let mut ratio = cr(1.0);
            for j in 0..n {
                ratio *= (2.0 * mu + j as f64) / (mu + 0.5 + j as f64);
            }
            Ok(ratio * jacobi_literal(n, x, lam, lam)?)
        }
        Family::ChebyshevT => Ok(chebyshev_t_complex(n, x)),
        Family::Legendre => jacobi_literal(n, x, cr(0.0), cr(0.0)),
        Family::Laguerre => {
            let al = spec.params[0];
            let mut sum = cr(0.0);
            let mut term = cr(1.0);
            for k in 0..=n {
                sum += term;
                if k == n {
                    break;
                }
                let kf = k as f64;
                term *= (kf - n as f64) * x / ((al + (1.0 + kf)) * (1.0 + kf));
            }
            let mut pref = cr(1.0);
            for j in 0..n {
                pref *= (al + (1.0 + j as f64)) / (1.0 + j as f64);
            }
            Ok(pref * sum)
        }
    }
}

fn aw_literal(n: u32, x: C64, a: [C64; 4], q: f64) -> Result<C64> {
    if a[0].norm() == 0.0 && n > 0 {
        return Err(Error::ParameterDomain("a1 = 0 in Askey-Wilson".into()));
    }
    let a12 = a[0] * a[1];
    let a13 = a[0] * a[2];
    let a14 = a[0] * a[3];
    let abcd = a12 * a[2] * a[3];
    let qn_inv = q.powi(-(n as i32));
    let abcd_qn1 = abcd * q.powi(n as i32 - 1);
    let mut sum = cr(0.0);
    let mut term = cr(1.0);
    let mut qk = 1.0;
    for k in 0..=n {
        sum += term;
        if k == n {
            break;
        }
        let num = (cr(1.0) - qn_inv * qk)
            * (cr(1.0) - abcd_qn1 * qk)
            * (cr(1.0) - 2.0 * a[0] * x * qk + a[0] * a[0] * qk * qk)
            * q;
        let den = (1.0 - q * qk) * (cr(1.0) - a12 * qk) * (cr(1.0) - a13 * qk) * (cr(1.0) - a14 * qk);
        if den.norm() < 1e-13 {
            return Err(Error::ParameterDomain(
                "denominator q-shifted factorial vanishes".into(),
            ));
        }
        term *= num / den;
        qk *= q;
    }
    let mut pref = cr(1.0);
    let mut qj = 1.0;
    for _ in 0..n {
        pref *= (cr(1.0) - a12 * qj) * (cr(1.0) - a13 * qj) * (cr(1.0) - a14 * qj);
        qj *= q;
    }
    Ok(pref * sum / a[0].powu(n))
}

/// sum_k (b;q)_k (b;q)_{n-k} / ((q;q)_k (q;q)_{n-k}) T_{|n-2k|}(x), the
/// finite cosine form shared by the ultraspherical-type families.
fn symmetric_cosine_sum(n: u32, x: C64, b: C64, q: f64) -> C64 {
    let nn = n as usize;
    let mut bp = vec![cr(1.0)];
    let mut qp = vec![1.0f64];
    let (mut bq, mut qq) = (b, q);
    for _ in 0..nn {
        bp.push(*bp.last().unwrap() * (cr(1.0) - bq));
        qp.push(qp.last().unwrap() * (1.0 - qq));
        bq *= q;
        qq *= q;
    }
    let t = chebyshev_t_table(n, x);
    (0..=nn)
        .map(|k| {
            let m = (n as i64 - 2 * k as i64).unsigned_abs() as usize;
            bp[k] * bp[nn - k] / (qp[k] * qp[nn - k]) * t[m]
        })
        .sum()
}

fn chebyshev_t_table(m: u32, x: C64) -> Vec<C64> {
    let mut t = vec![cr(1.0)];
    if m >= 1 {
        t.push(x);
    }
    for k in 2..=m as usize {
        let v = 2.0 * x * t[k - 1] - t[k - 2];
        t.push(v);
    }
    t
}

fn chebyshev_t_complex(n: u32, x: C64) -> C64 {
    *chebyshev_t_table(n, x).last().unwrap()
}

fn jacobi_literal(n: u32, x: C64, alpha: C64, beta: C64) -> Result<C64> {
    let h = (cr(1.0) - x) / 2.0;
    let mut sum = cr(0.0);
    let mut term = cr(1.0);
    for k in 0..=n {
        sum += term;
        if k == n {
            break;
        }
        let kf = k as f64;
        let den = (alpha + (1.0 + kf)) * (1.0 + kf);
        if den.norm() < 1e-13 {
            return Err(Error::ParameterDomain("alpha at a negative integer".into()));
        }
        term *= (kf - n as f64) * (alpha + beta + (n as f64 + 1.0 + kf)) * h / den;
    }
    let mut pref = cr(1.0);
    for j in 0..n {
        pref *= (alpha + (1.0 + j as f64)) / (1.0 + j as f64);
    }
    Ok(pref * sum)
}

/// Recurrence-path evaluation: the value at a single degree.
pub fn poly_eval_recurrence(spec: &PolySpec, n: u32, x: C64) -> Result<C64> {
    Ok(*poly_sweep(spec, n, x)?.last().unwrap())
}

/// All degrees 0..=nmax in one recurrence pass; this is what expansion
/// verification sums against.
pub fn poly_sweep(spec: &PolySpec, nmax: u32, x: C64) -> Result<Vec<C64>> {
    let q = spec.qv();
    let nn = nmax as usize;
    let mut out = Vec::with_capacity(nn + 1);
    match spec.family {
        Family::AskeyWilson => {
            let a = [spec.params[0], spec.params[1], spec.params[2], spec.params[3]];
            aw_sweep_scaled(nmax, x, a, q, &mut out, |_| cr(1.0))?;
        }
        Family::CqJacobi => {
            let (al, ga) = (spec.params[0], spec.params[1]);
            let a = [al.sqrt(), -ga.sqrt(), -(ga * q).sqrt(), (al * q).sqrt()];
            // conversion alpha^{n/2} / (q, -sqrt(al ga), -sqrt(q al ga); q)_n,
            // applied incrementally on top of the plain Askey-Wilson sweep
            let sag = (al * ga).sqrt();
            let sa = al.sqrt();
            let sqag = sag * q.sqrt();
            let mut conv = vec![cr(1.0); nn + 1];
            let mut qk = 1.0;
            for m in 1..=nn {
                conv[m] = conv[m - 1] * sa
                    / ((1.0 - q * qk) * (cr(1.0) + sag * qk) * (cr(1.0) + sqag * qk));
                qk *= q;
            }
            aw_sweep_scaled(nmax, x, a, q, &mut out, |m| conv[m])?;
        }
        Family::CqUltraspherical => {
            cq_ultra_sweep(nmax, x, spec.params[0], q, &mut out);
        }
        Family::CqHermite => {
            // H_{n+1} = 2x H_n - (1 - q^n) H_{n-1}
            let mut prev = cr(0.0);
            let mut cur = cr(1.0);
            let mut qk = 1.0;
            for _ in 0..=nn {
                out.push(cur);
                let next = 2.0 * x * cur - (1.0 - qk) * prev;
                prev = cur;
                cur = next;
                qk *= q;
            }
        }
        Family::CqLegendre => {
            cq_ultra_sweep(nmax, x, cr(q.sqrt()), q, &mut out);
            for (m, v) in out.iter_mut().enumerate() {
                *v *= q.powf(m as f64 / 4.0);
            }
        }
        Family::Wilson => {
            let a = [spec.params[0], spec.params[1], spec.params[2], spec.params[3]];
            wilson_sweep(nmax, x * x, a, &mut out)?;
        }
        Family::Jacobi => {
            jacobi_sweep(nmax, x, spec.params[0], spec.params[1], &mut out);
        }
        Family::Gegenbauer => {
            let mu = spec.params[0];
            let mut prev = cr(0.0);
            let mut cur = cr(1.0);
            for m in 0..=nn {
                out.push(cur);
                let mf = m as f64;
                let next = (2.0 * (mf + mu) * x * cur - (mf - 1.0 + 2.0 * mu) * prev) / (mf + 1.0);
                prev = cur;
                cur = next;
            }
        }
        Family::ChebyshevT => {
            out = chebyshev_t_table(nmax, x);
        }
        Family::Legendre => {
            let mut prev = cr(0.0);
            let mut cur = cr(1.0);
            for m in 0..=nn {
                out.push(cur);
                let mf = m as f64;
                let next = ((2.0 * mf + 1.0) * x * cur - mf * prev) / (mf + 1.0);
                prev = cur;
                cur = next;
            }
        }
        Family::Laguerre => {
            let al = spec.params[0];
            let mut prev = cr(0.0);
            let mut cur = cr(1.0);
            for m in 0..=nn {
                out.push(cur);
                let mf = m as f64;
                let next = ((al + (2.0 * mf + 1.0) - x) * cur - (al + mf) * prev) / (mf + 1.0);
                prev = cur;
                cur = next;
            }
        }
    }
    Ok(out)
}

/// Askey-Wilson sweep through the normalized recurrence
/// 2x pt_n = A_n pt_{n+1} + [a1 + 1/a1 - (A_n + C_n)] pt_n + C_n pt_{n-1},
/// un-normalized on the fly by (a1 a2, a1 a3, a1 a4; q)_n / a1^n and an
/// extra per-degree factor `extra` for the continuous q-Jacobi wrapper.
fn aw_sweep_scaled(
    nmax: u32,
    x: C64,
    a: [C64; 4],
    q: f64,
    out: &mut Vec<C64>,
    extra: impl Fn(usize) -> C64,
) -> Result<C64> {
    let a1 = a[0];
    if a1.norm() == 0.0 {
        return Err(Error::ParameterDomain("a1 = 0 in Askey-Wilson".into()));
    }
    let abcd = a[0] * a[1] * a[2] * a[3];
    let pair = |i: usize, j: usize| a[i] * a[j];
    let mut pt_prev = cr(0.0);
    let mut pt = cr(1.0);
    let mut norm = cr(1.0); // (a1 a2, a1 a3, a1 a4; q)_n / a1^n
    let mut qn = 1.0;
    for m in 0..=nmax as usize {
        out.push(pt * norm * extra(m));
        let mf = m as f64;
        let q2n = qn * qn;
        let an_den = a1 * (cr(1.0) - abcd * q2n / q) * (cr(1.0) - abcd * q2n);
        if an_den.norm() < 1e-280 {
            return Err(Error::ParameterDomain("degenerate abcd q powers".into()));
        }
        let an = (cr(1.0) - pair(0, 1) * qn)
            * (cr(1.0) - pair(0, 2) * qn)
            * (cr(1.0) - pair(0, 3) * qn)
            * (cr(1.0) - abcd * qn / q)
            / an_den;
        let cn = a1
            * (1.0 - qn)
            * (cr(1.0) - pair(1, 2) * qn / q)
            * (cr(1.0) - pair(1, 3) * qn / q)
            * (cr(1.0) - pair(2, 3) * qn / q)
            / ((cr(1.0) - abcd * q2n / (q * q)) * (cr(1.0) - abcd * q2n / q));
        let _ = mf;
        let next = ((2.0 * x - a1 - 1.0 / a1 + an + cn) * pt - cn * pt_prev) / an;
        pt_prev = pt;
        pt = next;
        norm *= (cr(1.0) - pair(0, 1) * qn) * (cr(1.0) - pair(0, 2) * qn)
            * (cr(1.0) - pair(0, 3) * qn)
            / a1;
        qn *= q;
    }
    Ok(cr(1.0))
}

fn cq_ultra_sweep(nmax: u32, x: C64, b: C64, q: f64, out: &mut Vec<C64>) {
    // 2x (1 - b q^n) C_n = (1 - q^{n+1}) C_{n+1} + (1 - b^2 q^{n-1}) C_{n-1}
    let mut prev = cr(0.0);
    let mut cur = cr(1.0);
    let mut qn = 1.0;
    for _ in 0..=nmax as usize {
        out.push(cur);
        let next =
            (2.0 * x * (cr(1.0) - b * qn) * cur - (cr(1.0) - b * b * qn / q) * prev) / (1.0 - q * qn);
        prev = cur;
        cur = next;
        qn *= q;
    }
}

fn jacobi_sweep(nmax: u32, x: C64, alpha: C64, beta: C64, out: &mut Vec<C64>) {
    let mut prev = cr(0.0);
    let mut cur = cr(1.0);
    for m in 0..=nmax as usize {
        out.push(cur);
        if m == 0 {
            prev = cur;
            cur = alpha + 1.0 + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
            continue;
        }
        let mf = m as f64;
        let s = alpha + beta + 2.0 * mf;
        let an = 2.0 * (mf + 1.0) * (alpha + beta + (mf + 1.0)) * s;
        let bn = (s + 1.0) * (alpha * alpha - beta * beta);
        let cn = s * (s + 1.0) * (s + 2.0);
        let dn = 2.0 * (alpha + mf) * (beta + mf) * (s + 2.0);
        let next = ((bn + cn * x) * cur - dn * prev) / an;
        prev = cur;
        cur = next;
    }
}

fn wilson_sweep(nmax: u32, y: C64, a: [C64; 4], out: &mut Vec<C64>) -> Result<()> {
    // normalized Wt_n = W_n / ((a+b)_n (a+c)_n (a+d)_n):
    // -(a1^2 + y) Wt_n = A_n Wt_{n+1} - (A_n + C_n) Wt_n + C_n Wt_{n-1}
    let s: C64 = a.iter().sum();
    let mut prev = cr(0.0);
    let mut cur = cr(1.0);
    let mut norm = cr(1.0);
    for m in 0..=nmax as usize {
        out.push(cur * norm);
        let mf = m as f64;
        let an_den = (s + (2.0 * mf - 1.0)) * (s + 2.0 * mf);
        if an_den.norm() < 1e-13 {
            return Err(Error::DenominatorPole("Wilson recurrence degenerate".into()));
        }
        let an = (s + (mf - 1.0)) * (a[0] + a[1] + mf) * (a[0] + a[2] + mf) * (a[0] + a[3] + mf)
            / an_den;
        let cn = mf
            * (a[1] + a[2] + (mf - 1.0))
            * (a[1] + a[3] + (mf - 1.0))
            * (a[2] + a[3] + (mf - 1.0))
            / ((s + (2.0 * mf - 2.0)) * (s + (2.0 * mf - 1.0)));
        let next = ((an + cn - (a[0] * a[0] + y)) * cur - cn * prev) / an;
        prev = cur;
        cur = next;
        norm *= (a[0] + a[1] + mf) * (a[0] + a[2] + mf) * (a[0] + a[3] + mf);
    }
    Ok(())
}

/// Wilson polynomial in its argument x2 = x^2, complex-capable.
pub fn wilson_eval(n: u32, x2: C64, a: [C64; 4]) -> Result<C64> {
    if a.iter().all(|ai| ai.im == 0.0) && x2.im == 0.0 && n <= EXACT_DEGREE_CAP_CLASSICAL {
        return Ok(cr(exact::wilson(n, x2.re, [a[0].re, a[1].re, a[2].re, a[3].re])));
    }
    let s: C64 = a.iter().sum();
    let mut sum = cr(0.0);
    let mut term = cr(1.0);
    for k in 0..=n {
        sum += term;
        if k == n {
            break;
        }
        let kf = k as f64;
        let a1k = a[0] + kf;
        let den = (a[0] + a[1] + kf) * (a[0] + a[2] + kf) * (a[0] + a[3] + kf) * (kf + 1.0);
        if den.norm() < 1e-13 {
            return Err(Error::DenominatorPole(
                "Wilson 4F3 denominator parameter at a nonpositive integer".into(),
            ));
        }
        term *= (kf - n as f64) * (s + (n as f64 - 1.0 + kf)) * (a1k * a1k + x2) / den;
    }
    let mut pref = cr(1.0);
    for j in 0..n {
        let jf = j as f64;
        pref *= (a[0] + a[1] + jf) * (a[0] + a[2] + jf) * (a[0] + a[3] + jf);
    }
    Ok(pref * sum)
}

/// Legendre function of the second kind on |z| > 1, principal branches,
/// through the 1/z^2 Gauss series. Carries the e^{i pi mu} factor of the
/// convention used by the power-expansion identities, so the value is
/// genuinely complex for non-integer mu.
pub fn legendre_q2(nu: C64, mu: C64, z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re <= 1.0 {
        return Err(Error::BranchDomain(
            "Legendre Q is cut along (-inf, 1]".into(),
        ));
    }
    if z.norm() <= 1.0 {
        return Err(Error::BranchDomain("Legendre Q series needs |z| > 1".into()));
    }
    let g_num = gamma(nu + mu + 1.0)?;
    let g_den = gamma(nu + 1.5)?;
    let phase = (crate::qcore::I * std::f64::consts::PI * mu).exp();
    let pref = std::f64::consts::PI.sqrt() * phase * g_num
        * (z * z - 1.0).powc(mu / 2.0)
        / (cr(2.0).powc(nu + 1.0) * g_den * z.powc(nu + mu + 1.0));
    let spec = HypSpec::new(
        vec![(nu + mu + 1.0) / 2.0, (nu + mu + 2.0) / 2.0],
        vec![nu + 1.5],
        1.0 / (z * z),
    );
    let f = hyp(&spec, &TruncationPolicy::default())?;
    Ok(pref * f.value)
}

/// Jacobi function of the first kind through its Gauss series at (1-z)/2.
pub fn jacobi_fn_first(gam: C64, alpha: C64, beta: C64, z: C64) -> Result<C64> {
    let pref = gamma(alpha + gam + 1.0)? / (gamma(alpha + 1.0)? * gamma(gam + 1.0)?);
    let spec = HypSpec::new(
        vec![-gam, alpha + beta + gam + 1.0],
        vec![alpha + 1.0],
        (cr(1.0) - z) / 2.0,
    );
    let f = hyp(&spec, &TruncationPolicy::default())?;
    Ok(pref * f.value)
}

/// Jacobi function of the second kind, assembled from the first-kind
/// function and the singular Gauss block; integer alpha sits on the
/// csc(pi alpha) pole of this representation and is not supported.
pub fn jacobi_fn_second(gam: C64, alpha: C64, beta: C64, z: C64) -> Result<C64> {
    if alpha.im == 0.0 && (alpha.re - alpha.re.round()).abs() < 1e-9 {
        return Err(Error::IntegerAlphaUnsupported(format!(
            "alpha = {} is an integer",
            alpha.re
        )));
    }
    let p = jacobi_fn_first(gam, alpha, beta, z)?;
    let csc = 1.0 / (std::f64::consts::PI * alpha).sin();
    let g = gamma(alpha)? * gamma(beta + gam + 1.0)? / gamma(alpha + beta + gam + 1.0)?;
    let spec = HypSpec::new(
        vec![gam + 1.0, -alpha - beta - gam],
        vec![cr(1.0) - alpha],
        (cr(1.0) - z) / 2.0,
    );
    let f = hyp(&spec, &TruncationPolicy::default())?;
    let sing = cr(2.0).powc(alpha + beta - 1.0) * g * f.value
        / ((z - 1.0).powc(alpha) * (z + 1.0).powc(beta));
    Ok(-std::f64::consts::FRAC_PI_2 * csc * p + sing)
}
