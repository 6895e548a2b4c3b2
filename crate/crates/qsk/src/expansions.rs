//! Closed-form expansion coefficients for the generalized generating
//! functions, addressed by identity id.
//!
//! Every identity handled here has the shape LHS(x) = sum_n coeff_n p_n(x)
//! for one target polynomial family. `coefficient` returns coeff_n with
//! every prefactor, t^n power, and Neumann factor folded in, so a caller
//! can sum coeff_n * poly_eval against `lhs_eval` with no per-identity
//! special cases.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hyperseries::{hyp, phi, vwp_phi, vwp_phi_spec, HypSpec, PhiSpec};
use crate::polyfamilies::{jacobi_fn_second, legendre_q2, Family, PolySpec};
use crate::qcore::gamma::{gamma as gamma_fn, lngamma as lngamma_fn};
use crate::qcore::{
    as_nonpos_int, cr, pochhammer_finite, qpoch_finite, qpoch_finite_many,
    qpoch_infinite_many, C64, EvalResult, QBase, TruncationPolicy, I,
};

/// One id per displayed expansion; the id knows its parameter names and the
/// polynomial family its right-hand side runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[allow(non_camel_case_types)]
pub enum IdentityId {
    AW_ROGERS,
    CQJACOBI_ROGERS,
    ROGERS_GAMMA,
    CQHERMITE,
    CHEBYSHEV_Q,
    CQLEGENDRE,
    WILSON_LIMIT,
    GEGEN_GF_GENERAL,
    JACOBI_POW,
    GEGEN_POW,
    CHEBY_POW,
    LEGENDRE_POW,
    HEINE,
    HEINE_SQRT,
    JACOBI_1MX,
    GEGEN_1MX,
    CHEBY_1MX,
    LAGUERRE_1MX,
    ROGERS_GF,
    GEGEN_GF,
    CQHERMITE_GF,
}

pub const ALL_IDENTITIES: [IdentityId; 21] = [
    IdentityId::AW_ROGERS,
    IdentityId::CQJACOBI_ROGERS,
    IdentityId::ROGERS_GAMMA,
    IdentityId::CQHERMITE,
    IdentityId::CHEBYSHEV_Q,
    IdentityId::CQLEGENDRE,
    IdentityId::WILSON_LIMIT,
    IdentityId::GEGEN_GF_GENERAL,
    IdentityId::JACOBI_POW,
    IdentityId::GEGEN_POW,
    IdentityId::CHEBY_POW,
    IdentityId::LEGENDRE_POW,
    IdentityId::HEINE,
    IdentityId::HEINE_SQRT,
    IdentityId::JACOBI_1MX,
    IdentityId::GEGEN_1MX,
    IdentityId::CHEBY_1MX,
    IdentityId::LAGUERRE_1MX,
    IdentityId::ROGERS_GF,
    IdentityId::GEGEN_GF,
    IdentityId::CQHERMITE_GF,
];

impl IdentityId {
    pub fn name(self) -> &'static str {
        use IdentityId::*;
        match self {
            AW_ROGERS => "aw_rogers",
            CQJACOBI_ROGERS => "cqjacobi_rogers",
            ROGERS_GAMMA => "rogers_gamma",
            CQHERMITE => "cqhermite",
            CHEBYSHEV_Q => "chebyshev_q",
            CQLEGENDRE => "cqlegendre",
            WILSON_LIMIT => "wilson_limit",
            GEGEN_GF_GENERAL => "gegen_gf_general",
            JACOBI_POW => "jacobi_pow",
            GEGEN_POW => "gegen_pow",
            CHEBY_POW => "cheby_pow",
            LEGENDRE_POW => "legendre_pow",
            HEINE => "heine",
            HEINE_SQRT => "heine_sqrt",
            JACOBI_1MX => "jacobi_1mx",
            GEGEN_1MX => "gegen_1mx",
            CHEBY_1MX => "cheby_1mx",
            LAGUERRE_1MX => "laguerre_1mx",
            ROGERS_GF => "rogers_gf",
            GEGEN_GF => "gegen_gf",
            CQHERMITE_GF => "cqhermite_gf",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        ALL_IDENTITIES.iter().copied().find(|id| id.name() == s)
    }

    /// Whether the identity is a q-identity (its coefficients and LHS need
    /// a base).
    pub fn requires_q(self) -> bool {
        use IdentityId::*;
        matches!(
            self,
            AW_ROGERS
                | CQJACOBI_ROGERS
                | ROGERS_GAMMA
                | CQHERMITE
                | CHEBYSHEV_Q
                | CQLEGENDRE
                | ROGERS_GF
                | CQHERMITE_GF
        )
    }

    pub fn param_names(self) -> &'static [&'static str] {
        use IdentityId::*;
        match self {
            AW_ROGERS => &["t", "beta", "a1", "a2", "a3", "a4"],
            CQJACOBI_ROGERS => &["t", "beta", "alpha", "gamma"],
            ROGERS_GAMMA => &["t", "beta", "gamma"],
            CQHERMITE | CHEBYSHEV_Q | CQLEGENDRE | ROGERS_GF => &["t", "beta"],
            WILSON_LIMIT => &["u", "t", "a1", "a2", "a3", "a4"],
            GEGEN_GF_GENERAL => &["t", "beta", "alpha", "gamma"],
            JACOBI_POW => &["nu", "alpha", "beta", "z"],
            GEGEN_POW => &["nu", "mu", "z"],
            CHEBY_POW | LEGENDRE_POW => &["nu", "z"],
            HEINE | HEINE_SQRT => &["z"],
            JACOBI_1MX => &["nu", "alpha", "beta"],
            GEGEN_1MX => &["nu", "mu"],
            CHEBY_1MX => &["nu"],
            LAGUERRE_1MX => &["nu", "alpha"],
            GEGEN_GF => &["t", "mu"],
            CQHERMITE_GF => &["t"],
        }
    }

    pub fn target_family(self) -> Family {
        use IdentityId::*;
        match self {
            AW_ROGERS => Family::AskeyWilson,
            CQJACOBI_ROGERS => Family::CqJacobi,
            ROGERS_GAMMA | ROGERS_GF => Family::CqUltraspherical,
            CQHERMITE | CQHERMITE_GF => Family::CqHermite,
            CHEBYSHEV_Q | CHEBY_POW | HEINE_SQRT | CHEBY_1MX => Family::ChebyshevT,
            CQLEGENDRE => Family::CqLegendre,
            WILSON_LIMIT => Family::Wilson,
            GEGEN_GF_GENERAL | JACOBI_POW | JACOBI_1MX => Family::Jacobi,
            GEGEN_POW | GEGEN_1MX | GEGEN_GF => Family::Gegenbauer,
            LEGENDRE_POW | HEINE => Family::Legendre,
            LAGUERRE_1MX => Family::Laguerre,
        }
    }

    /// The PolySpec the right-hand side of the identity runs over,
    /// extracted from the identity's own parameter map.
    pub fn target_spec(
        self,
        params: &BTreeMap<String, C64>,
        q: Option<QBase>,
    ) -> Result<PolySpec> {
        use IdentityId::*;
        let fam = self.target_family();
        let fam_params = match self {
            AW_ROGERS | WILSON_LIMIT => vec![
                get(params, "a1")?,
                get(params, "a2")?,
                get(params, "a3")?,
                get(params, "a4")?,
            ],
            CQJACOBI_ROGERS | GEGEN_GF_GENERAL => {
                vec![get(params, "alpha")?, get(params, "gamma")?]
            }
            ROGERS_GAMMA => vec![get(params, "gamma")?],
            ROGERS_GF => vec![get(params, "beta")?],
            GEGEN_POW | GEGEN_1MX | GEGEN_GF => vec![get(params, "mu")?],
            JACOBI_POW | JACOBI_1MX => vec![get(params, "alpha")?, get(params, "beta")?],
            LAGUERRE_1MX => vec![get(params, "alpha")?],
            _ => vec![],
        };
        PolySpec::new(fam, fam_params, if fam.is_q_family() { q } else { None })
    }
}

fn get(params: &BTreeMap<String, C64>, name: &str) -> Result<C64> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| Error::DomainViolation(format!("missing parameter `{name}`")))
}

/// Build a parameter map from name/value pairs.
pub fn param_map(pairs: &[(&str, C64)]) -> BTreeMap<String, C64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Debug, Clone)]
pub struct CoeffRequest {
    pub id: IdentityId,
    pub n: u32,
    pub params: BTreeMap<String, C64>,
    pub q: Option<QBase>,
    pub pol: TruncationPolicy,
}

impl CoeffRequest {
    pub fn new(
        id: IdentityId,
        n: u32,
        params: BTreeMap<String, C64>,
        q: Option<QBase>,
    ) -> Result<Self> {
        for name in id.param_names() {
            if !params.contains_key(*name) {
                return Err(Error::DomainViolation(format!(
                    "{} requires parameter `{name}`",
                    id.name()
                )));
            }
        }
        if id.requires_q() != q.is_some() {
            return Err(Error::DomainViolation(format!(
                "{} {} a base q",
                id.name(),
                if id.requires_q() { "requires" } else { "does not take" }
            )));
        }
        if id.param_names().contains(&"t") && id != IdentityId::WILSON_LIMIT {
            let t = params["t"];
            if t.norm() >= 1.0 {
                return Err(Error::DomainViolation(format!(
                    "{} requires |t| < 1, got {}",
                    id.name(),
                    t.norm()
                )));
            }
        }
        Ok(CoeffRequest {
            id,
            n,
            params,
            q,
            pol: TruncationPolicy::default(),
        })
    }

    pub fn at_degree(&self, n: u32) -> CoeffRequest {
        let mut r = self.clone();
        r.n = n;
        r
    }

    fn p(&self, name: &str) -> Result<C64> {
        get(&self.params, name)
    }

    fn qbase(&self) -> QBase {
        self.q.expect("validated at construction")
    }
}

fn combine(value: C64, parts: &[&EvalResult]) -> EvalResult {
    EvalResult {
        value,
        terms_used: parts.iter().map(|p| p.terms_used).sum(),
        converged: parts.iter().all(|p| p.converged),
        tail_bound: parts.iter().map(|p| p.tail_bound).sum(),
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn neumann(n: u32) -> f64 {
    if n == 0 { 1.0 } else { 2.0 }
}

/// Which evaluation route the embedded very-well-poised 8phi7 takes: the
/// generic phi form carries the plus/minus square-root parameters with
/// principal roots; the square-root-free route pairs them away first. The
/// two must agree, which the tests assert.
#[derive(Clone, Copy, PartialEq)]
enum WPath {
    Generic,
    #[cfg_attr(not(test), allow(dead_code))]
    SqrtFree,
}

fn w87(a: C64, b: [C64; 5], q: QBase, z: C64, pol: &TruncationPolicy, path: WPath) -> Result<EvalResult> {
    match path {
        WPath::Generic => phi(&vwp_phi_spec(a, b, q, z), pol),
        WPath::SqrtFree => vwp_phi(a, b, q, z, pol),
    }
}

/// The scalar multiplying the n-th target polynomial in the identity.
pub fn coefficient(req: &CoeffRequest) -> Result<EvalResult> {
    coefficient_path(req, WPath::Generic)
}

fn coefficient_path(req: &CoeffRequest, path: WPath) -> Result<EvalResult> {
    use IdentityId::*;
    match req.id {
        AW_ROGERS => coeff_aw_rogers(req, path),
        CQJACOBI_ROGERS => coeff_cqjacobi_rogers(req, path),
        ROGERS_GAMMA => coeff_rogers_gamma(req),
        CQHERMITE => coeff_cqhermite(req),
        CHEBYSHEV_Q => coeff_chebyshev_q(req),
        CQLEGENDRE => coeff_cqlegendre(req),
        WILSON_LIMIT => coeff_wilson_limit(req),
        GEGEN_GF_GENERAL => coeff_gegen_gf_general(req),
        JACOBI_POW => coeff_jacobi_pow(req),
        GEGEN_POW => coeff_gegen_pow(req),
        CHEBY_POW => coeff_cheby_pow(req),
        LEGENDRE_POW => coeff_legendre_pow(req),
        HEINE => {
            let z = classical_z(req.p("z")?)?;
            let qn = legendre_q2(cr(req.n as f64), cr(0.0), z)?;
            Ok(EvalResult::exact(cr(2.0 * req.n as f64 + 1.0) * qn))
        }
        HEINE_SQRT => {
            let z = classical_z(req.p("z")?)?;
            let qn = legendre_q2(cr(req.n as f64 - 0.5), cr(0.0), z)?;
            Ok(EvalResult::exact(
                cr(2f64.sqrt() / PI * neumann(req.n)) * qn,
            ))
        }
        JACOBI_1MX => coeff_jacobi_1mx(req),
        GEGEN_1MX => coeff_gegen_1mx(req),
        CHEBY_1MX => coeff_cheby_1mx(req),
        LAGUERRE_1MX => coeff_laguerre_1mx(req),
        ROGERS_GF | GEGEN_GF => Ok(EvalResult::exact(req.p("t")?.powu(req.n))),
        CQHERMITE_GF => {
            let q = req.qbase();
            let t = req.p("t")?;
            Ok(EvalResult::exact(
                t.powu(req.n) / qpoch_finite(q.value(), q, req.n),
            ))
        }
    }
}

fn coeff_aw_rogers(req: &CoeffRequest, path: WPath) -> Result<EvalResult> {
    let q = req.qbase();
    let qv = q.value();
    let n = req.n;
    let (t, beta) = (req.p("t")?, req.p("beta")?);
    let a = [req.p("a1")?, req.p("a2")?, req.p("a3")?, req.p("a4")?];
    if a[3].norm() < req.pol.abs_floor {
        return Err(Error::DomainViolation("a4 = 0 in the Askey-Wilson expansion".into()));
    }
    let a123 = a[0] * a[1] * a[2];
    let qn = q.powi(n as i32);

    let num_fin = qpoch_finite(beta, q, n);
    let den_fin = qpoch_finite(qv, q, n) * qpoch_finite(q.powi(n as i32 - 1) * a123 * a[3], q, n);
    let num_inf = qpoch_infinite_many(
        &[
            qn * a[0] * beta * t,
            qn * a[1] * beta * t,
            qn * a[2] * beta * t,
            qn * a123 * t,
        ],
        q,
        &req.pol,
    );
    let den_inf = qpoch_infinite_many(
        &[a[0] * t, a[1] * t, a[2] * t, q.powi(2 * n as i32) * a123 * beta * t],
        q,
        &req.pol,
    );
    if den_fin.norm() < req.pol.abs_floor || den_inf.value.norm() < req.pol.abs_floor {
        return Err(Error::DenominatorPole(
            "vanishing denominator product in the Askey-Wilson coefficient".into(),
        ));
    }
    let big_a = q.powi(2 * n as i32 - 1) * a123 * beta * t;
    let b = [
        qn * a[0] * a[1],
        qn * a[0] * a[2],
        qn * a[1] * a[2],
        beta * t / a[3],
        qn * beta,
    ];
    let w = w87(big_a, b, q, a[3] * t, &req.pol, path)?;
    let value = t.powu(n) * num_fin / den_fin * num_inf.value / den_inf.value * w.value;
    Ok(combine(value, &[&num_inf, &den_inf, &w]))
}

fn coeff_cqjacobi_rogers(req: &CoeffRequest, path: WPath) -> Result<EvalResult> {
    let q = req.qbase();
    let n = req.n;
    let nf = n as f64;
    let (t, beta) = (req.p("t")?, req.p("beta")?);
    let (alpha, gamma) = (req.p("alpha")?, req.p("gamma")?);
    if alpha.norm() < req.pol.abs_floor {
        return Err(Error::DomainViolation("alpha = 0 in the q-Jacobi expansion".into()));
    }
    let sa = alpha.sqrt();
    let sg = gamma.sqrt();
    let sq = q.pow(cr(0.5));
    let qn = q.powi(n as i32);
    let qnh = q.pow(cr(nf + 0.5));

    let num_fin = qpoch_finite_many(&[beta, -(sa * sg), -(sq * sa * sg)], q, n);
    let den_fin = qpoch_finite(qn * alpha * gamma, q, n);
    let num_inf = qpoch_infinite_many(
        &[
            qn * sa * beta * t,
            -(qn * sg * beta * t),
            -(qnh * sg * beta * t),
            qnh * sa * gamma * t,
        ],
        q,
        &req.pol,
    );
    let den_inf = qpoch_infinite_many(
        &[
            sa * t,
            -(sg * t),
            -(sq * sg * t),
            q.pow(cr(2.0 * nf + 0.5)) * sa * gamma * beta * t,
        ],
        q,
        &req.pol,
    );
    if den_fin.norm() < req.pol.abs_floor || den_inf.value.norm() < req.pol.abs_floor {
        return Err(Error::DenominatorPole(
            "vanishing denominator product in the q-Jacobi coefficient".into(),
        ));
    }
    let big_a = q.pow(cr(2.0 * nf - 0.5)) * sa * gamma * beta * t;
    let b = [
        -(qn * sa * sg),
        -(qnh * sa * sg),
        qnh * gamma,
        beta * t / (sq * sa),
        qn * beta,
    ];
    let w = w87(big_a, b, q, sq * sa * t, &req.pol, path)?;
    let value = (t / sa).powu(n) * num_fin / den_fin * num_inf.value / den_inf.value * w.value;
    Ok(combine(value, &[&num_inf, &den_inf, &w]))
}

fn coeff_rogers_gamma(req: &CoeffRequest) -> Result<EvalResult> {
    let q = req.qbase();
    let qv = q.value();
    let n = req.n;
    let (t, beta, gamma) = (req.p("t")?, req.p("beta")?, req.p("gamma")?);
    if gamma.norm() < req.pol.abs_floor {
        return Err(Error::DomainViolation("gamma = 0 in the generalized Rogers coefficient".into()));
    }
    let den = qpoch_finite(gamma, q, n);
    if den.norm() < req.pol.abs_floor {
        return Err(Error::DenominatorPole("(gamma; q)_n = 0".into()));
    }
    let qn = q.powi(n as i32);
    let series = phi(
        &PhiSpec::new(
            vec![beta / gamma, beta * qn],
            vec![gamma * qv * qn],
            q,
            gamma * t * t,
        ),
        &req.pol,
    )?;
    let value = qpoch_finite(beta, q, n) / den * t.powu(n) * series.value;
    Ok(combine(value, &[&series]))
}

fn coeff_cqhermite(req: &CoeffRequest) -> Result<EvalResult> {
    let q = req.qbase();
    let qv = q.value();
    let n = req.n;
    let (t, beta) = (req.p("t")?, req.p("beta")?);
    let series = phi(
        &PhiSpec::new(vec![beta * q.powi(n as i32)], vec![cr(0.0)], q, beta * t * t),
        &req.pol,
    )?;
    let value = qpoch_finite(beta, q, n) / qpoch_finite(qv, q, n) * t.powu(n) * series.value;
    Ok(combine(value, &[&series]))
}

fn coeff_chebyshev_q(req: &CoeffRequest) -> Result<EvalResult> {
    let q = req.qbase();
    let qv = q.value();
    let n = req.n;
    let (t, beta) = (req.p("t")?, req.p("beta")?);
    let qn = q.powi(n as i32);
    let series = phi(
        &PhiSpec::new(vec![beta, beta * qn], vec![qv * qn], q, t * t),
        &req.pol,
    )?;
    let value =
        cr(neumann(n)) * qpoch_finite(beta, q, n) / qpoch_finite(qv, q, n) * t.powu(n) * series.value;
    Ok(combine(value, &[&series]))
}

fn coeff_cqlegendre(req: &CoeffRequest) -> Result<EvalResult> {
    let q = req.qbase();
    let n = req.n;
    let (t, beta) = (req.p("t")?, req.p("beta")?);
    let qh = q.pow(cr(0.5));
    let qn = q.powi(n as i32);
    let series = phi(
        &PhiSpec::new(
            vec![beta * q.pow(cr(-0.5)), beta * qn],
            vec![qn * q.pow(cr(1.5))],
            q,
            qh * t * t,
        ),
        &req.pol,
    )?;
    let value = qpoch_finite(beta, q, n) / qpoch_finite(qh, q, n)
        * (t * q.pow(cr(-0.25))).powu(n)
        * series.value;
    Ok(combine(value, &[&series]))
}

fn coeff_wilson_limit(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nf = n as f64;
    let (u, t) = (req.p("u")?, req.p("t")?);
    let a = [req.p("a1")?, req.p("a2")?, req.p("a3")?, req.p("a4")?];
    let umt = u - t;
    // (u - t)_n kills the coefficient outright in the terminating regime
    if let Some(m) = as_nonpos_int(umt) {
        if n > m {
            return Ok(EvalResult::exact(cr(0.0)));
        }
    }
    let a12 = a[0] + a[1];
    let a13 = a[0] + a[2];
    let a23 = a[1] + a[2];
    let a123 = a[0] + a[1] + a[2];
    let a1234 = a123 + a[3];

    let g = poch_gamma(a123, u)? * poch_gamma(a[0], t)? * poch_gamma(a[1], t)?
        * poch_gamma(a[2], t)?
        / (poch_gamma(a123, t)?
            * poch_gamma(a[0], u)?
            * poch_gamma(a[1], u)?
            * poch_gamma(a[2], u)?);
    let num = pochhammer_finite(umt, n)
        * pochhammer_finite(a1234 - cr(1.0), n)
        * pochhammer_finite(a123 + u, 2 * n);
    let den = cr(factorial(n))
        * pochhammer_finite(a[0] + u, n)
        * pochhammer_finite(a[1] + u, n)
        * pochhammer_finite(a[2] + u, n)
        * pochhammer_finite(a123 + t, n)
        * pochhammer_finite(a1234 - cr(1.0), 2 * n);
    if den.norm() < req.pol.abs_floor {
        return Err(Error::DenominatorPole(
            "vanishing Pochhammer in the Wilson-limit coefficient".into(),
        ));
    }
    let lam = cr(2.0 * nf - 1.0) + a123 + u;
    let series = hyp(
        &HypSpec::new(
            vec![
                lam,
                cr(1.0) + lam / cr(2.0),
                a12 + cr(nf),
                a13 + cr(nf),
                a23 + cr(nf),
                u - a[3],
                umt + cr(nf),
            ],
            vec![
                lam / cr(2.0),
                a[0] + u + cr(nf),
                a[1] + u + cr(nf),
                a[2] + u + cr(nf),
                a123 + t + cr(nf),
                a1234 + cr(2.0 * nf),
            ],
            cr(1.0),
        ),
        &req.pol,
    )?;
    Ok(combine(g * num / den * series.value, &[&series]))
}

/// (alpha)_beta = Gamma(alpha + beta) / Gamma(alpha) for general beta.
fn poch_gamma(alpha: C64, beta: C64) -> Result<C64> {
    crate::qcore::pochhammer_general(alpha, beta)
}

fn coeff_gegen_gf_general(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nf = n as f64;
    let (t, beta) = (req.p("t")?, req.p("beta")?);
    let (alpha, gamma) = (req.p("alpha")?, req.p("gamma")?);
    let apg = alpha + gamma;
    let one_pt = cr(1.0) + t;
    if one_pt.norm() < req.pol.abs_floor {
        return Err(Error::DomainViolation("t = -1 in the Gegenbauer-type expansion".into()));
    }
    let num = t.powu(n) * pochhammer_finite(beta, n) * pochhammer_finite(apg + cr(1.0), n);
    let den = pochhammer_finite((apg + cr(1.0)) / cr(2.0), n)
        * pochhammer_finite((apg + cr(2.0)) / cr(2.0), n)
        * one_pt.powc(cr(2.0) * (cr(nf) + beta));
    if den.norm() < req.pol.abs_floor {
        return Err(Error::DenominatorPole("vanishing Pochhammer in the expansion coefficient".into()));
    }
    let series = hyp(
        &HypSpec::new(
            vec![gamma + cr(nf + 1.0), beta + cr(nf)],
            vec![apg + cr(2.0 * nf + 2.0)],
            cr(4.0) * t / (one_pt * one_pt),
        ),
        &req.pol,
    )?;
    Ok(combine(num / den * series.value, &[&series]))
}

fn classical_z(z: C64) -> Result<C64> {
    if z.im != 0.0 || z.re <= 1.0 {
        return Err(Error::BranchDomain(format!(
            "z must be real and greater than 1, got {z}"
        )));
    }
    Ok(z)
}

fn coeff_jacobi_pow(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nf = n as f64;
    let nu = req.p("nu")?;
    let (alpha, beta) = (req.p("alpha")?, req.p("beta")?);
    let z = classical_z(req.p("z")?)?;
    let apb = alpha + beta;
    let pref = (z - cr(1.0)).powc(alpha + cr(1.0) - nu) * (z + cr(1.0)).powc(beta + cr(1.0) - nu)
        / cr(2.0).powc(apb + cr(1.0) - nu);
    let scal = (apb + cr(2.0 * nf + 1.0)) * gamma_fn(apb + cr(1.0 + nf))?
        * pochhammer_finite(nu, n)
        / (gamma_fn(alpha + cr(1.0 + nf))? * gamma_fn(beta + cr(1.0 + nf))?);
    let qjac = jacobi_fn_second(
        nu + cr(nf - 1.0),
        alpha + cr(1.0) - nu,
        beta + cr(1.0) - nu,
        z,
    )?;
    Ok(EvalResult::exact(pref * scal * qjac))
}

fn coeff_gegen_pow(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nf = n as f64;
    let nu = req.p("nu")?;
    let mu = req.p("mu")?;
    let z = classical_z(req.p("z")?)?;
    let phase = (I * PI * (mu - nu + cr(0.5))).exp();
    let pref = cr(2.0).powc(mu + cr(0.5)) * gamma_fn(mu)? * phase
        / (cr(PI.sqrt())
            * gamma_fn(nu)?
            * (z * z - cr(1.0)).powc((nu - mu) / cr(2.0) - cr(0.25)));
    let qleg = legendre_q2(cr(nf) + mu - cr(0.5), nu - mu - cr(0.5), z)?;
    Ok(EvalResult::exact(pref * (cr(nf) + mu) * qleg))
}

fn coeff_cheby_pow(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nu = req.p("nu")?;
    let z = classical_z(req.p("z")?)?;
    let phase = (I * PI * (cr(0.5) - nu)).exp();
    let pref = cr((2.0 / PI).sqrt()) * phase
        / (gamma_fn(nu)? * (z * z - cr(1.0)).powc(nu / cr(2.0) - cr(0.25)));
    let qleg = legendre_q2(cr(n as f64 - 0.5), nu - cr(0.5), z)?;
    Ok(EvalResult::exact(pref * cr(neumann(n)) * qleg))
}

fn coeff_legendre_pow(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nu = req.p("nu")?;
    let z = classical_z(req.p("z")?)?;
    let phase = (I * PI * (cr(1.0) - nu)).exp();
    let pref = phase * (z * z - cr(1.0)).powc((cr(1.0) - nu) / cr(2.0)) / gamma_fn(nu)?;
    let qleg = legendre_q2(cr(n as f64), nu - cr(1.0), z)?;
    Ok(EvalResult::exact(pref * cr(2.0 * n as f64 + 1.0) * qleg))
}

fn coeff_jacobi_1mx(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nf = n as f64;
    let nu = req.p("nu")?;
    let (alpha, beta) = (req.p("alpha")?, req.p("beta")?);
    if (alpha - nu + cr(1.0)).re <= 0.0 {
        return Err(Error::DomainViolation(
            "jacobi_1mx requires Re(alpha - nu + 1) > 0".into(),
        ));
    }
    let apb = alpha + beta;
    let value = gamma_fn(alpha - nu + cr(1.0))? / cr(2.0).powc(nu)
        * (apb + cr(2.0 * nf + 1.0))
        * gamma_fn(apb + cr(1.0 + nf))?
        * pochhammer_finite(nu, n)
        / (gamma_fn(alpha + cr(1.0 + nf))? * gamma_fn(apb + cr(2.0 + nf) - nu)?);
    Ok(EvalResult::exact(value))
}

fn coeff_gegen_1mx(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nu = req.p("nu")?;
    let mu = req.p("mu")?;
    if (mu - nu + cr(0.5)).re <= 0.0 {
        return Err(Error::DomainViolation(
            "gegen_1mx requires Re(mu - nu + 1/2) > 0".into(),
        ));
    }
    let pref = cr(2.0).powc(cr(2.0) * mu - nu) * gamma_fn(mu - nu + cr(0.5))? * gamma_fn(mu)?
        / (cr(PI.sqrt()) * gamma_fn(cr(2.0) * mu + cr(1.0) - nu)?);
    let den = pochhammer_finite(cr(2.0) * mu + cr(1.0) - nu, n);
    if den.norm() < req.pol.abs_floor {
        return Err(Error::DenominatorPole("(2 mu + 1 - nu)_n = 0".into()));
    }
    let value = pref * (mu + cr(n as f64)) * pochhammer_finite(nu, n) / den;
    Ok(EvalResult::exact(value))
}

fn coeff_cheby_1mx(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nu = req.p("nu")?;
    if (cr(0.5) - nu).re <= 0.0 {
        return Err(Error::DomainViolation(
            "cheby_1mx requires Re(1/2 - nu) > 0".into(),
        ));
    }
    let den = pochhammer_finite(cr(1.0) - nu, n);
    if den.norm() < req.pol.abs_floor {
        return Err(Error::DenominatorPole("(1 - nu)_n = 0".into()));
    }
    let value = gamma_fn(cr(0.5) - nu)? / (cr(PI.sqrt()) * cr(2.0).powc(nu) * gamma_fn(cr(1.0) - nu)?)
        * cr(neumann(n))
        * pochhammer_finite(nu, n)
        / den;
    Ok(EvalResult::exact(value))
}

fn coeff_laguerre_1mx(req: &CoeffRequest) -> Result<EvalResult> {
    let n = req.n;
    let nu = req.p("nu")?;
    let alpha = req.p("alpha")?;
    if (alpha + cr(1.0) - nu).re <= 0.0 {
        return Err(Error::DomainViolation(
            "laguerre_1mx requires Re(alpha + 1 - nu) > 0".into(),
        ));
    }
    let value = gamma_fn(alpha + cr(1.0) - nu)? * pochhammer_finite(nu, n)
        / gamma_fn(alpha + cr(1.0 + n as f64))?;
    Ok(EvalResult::exact(value))
}

/// Coefficient of C_{n-2k}(x; gamma | q) in C_n(x; beta | q).
pub fn connection_coeff(n: u32, k: u32, beta: C64, gamma: C64, q: QBase) -> Result<C64> {
    if k > n / 2 {
        return Err(Error::DomainViolation(format!(
            "connection index k = {k} exceeds floor(n/2) = {}",
            n / 2
        )));
    }
    let one_m_g = cr(1.0) - gamma;
    if one_m_g.norm() < 1e-13 {
        return Err(Error::DenominatorPole("gamma = 1 in the connection relation".into()));
    }
    if gamma.norm() < 1e-300 {
        return Err(Error::DenominatorPole(
            "gamma = 0 in the connection relation".into(),
        ));
    }
    let den = qpoch_finite(q.value(), q, k) * qpoch_finite(q.value() * gamma, q, n - k);
    if den.norm() < 1e-300 {
        return Err(Error::DenominatorPole("(q gamma; q)_{n-k} = 0".into()));
    }
    let num = (cr(1.0) - gamma * q.powi((n - 2 * k) as i32))
        * gamma.powu(k)
        * qpoch_finite(beta / gamma, q, k)
        * qpoch_finite(beta, q, n - k);
    Ok(num / (one_m_g * den))
}

/// The left-hand side of the identity at a point: the Rogers product for
/// the q-identities, a power-law kernel or gamma ratio for the classical
/// ones. `x_or_z` is the polynomial argument x everywhere.
pub fn lhs_eval(
    id: IdentityId,
    params: &BTreeMap<String, C64>,
    q: Option<QBase>,
    x_or_z: C64,
    pol: &TruncationPolicy,
) -> Result<EvalResult> {
    use IdentityId::*;
    match id {
        AW_ROGERS | CQJACOBI_ROGERS | ROGERS_GAMMA | CQHERMITE | CHEBYSHEV_Q | CQLEGENDRE
        | ROGERS_GF => {
            let qb = q.ok_or_else(|| Error::DomainViolation("q-identity needs a base".into()))?;
            rogers_product(get(params, "t")?, get(params, "beta")?, qb, x_or_z, pol)
        }
        CQHERMITE_GF => {
            let qb = q.ok_or_else(|| Error::DomainViolation("q-identity needs a base".into()))?;
            rogers_product(get(params, "t")?, cr(0.0), qb, x_or_z, pol)
        }
        GEGEN_GF => stieltjes_kernel(get(params, "t")?, get(params, "mu")?, x_or_z, pol),
        GEGEN_GF_GENERAL => stieltjes_kernel(get(params, "t")?, get(params, "beta")?, x_or_z, pol),
        WILSON_LIMIT => {
            let t = get(params, "t")?;
            let u = get(params, "u")?;
            let x = x_or_z;
            // log space: the four factors underflow separately far inside
            // the x range even though the ratio stays moderate
            let s = lngamma_fn(t + I * x)? + lngamma_fn(t - I * x)?
                - lngamma_fn(u + I * x)?
                - lngamma_fn(u - I * x)?;
            Ok(EvalResult::exact(s.exp()))
        }
        JACOBI_POW | GEGEN_POW | CHEBY_POW | LEGENDRE_POW | HEINE | HEINE_SQRT => {
            let z = classical_z(get(params, "z")?)?;
            let nu = match id {
                HEINE => cr(1.0),
                HEINE_SQRT => cr(0.5),
                _ => get(params, "nu")?,
            };
            let kern = z - x_or_z;
            if kern.im == 0.0 && kern.re <= 0.0 {
                return Err(Error::BranchDomain("z - x must avoid the branch cut".into()));
            }
            Ok(EvalResult::exact(kern.powc(-nu)))
        }
        JACOBI_1MX | GEGEN_1MX | CHEBY_1MX => {
            let nu = get(params, "nu")?;
            let kern = cr(1.0) - x_or_z;
            if kern.im == 0.0 && kern.re <= 0.0 {
                return Err(Error::BranchDomain("1 - x must be positive".into()));
            }
            Ok(EvalResult::exact(kern.powc(-nu)))
        }
        LAGUERRE_1MX => {
            let nu = get(params, "nu")?;
            if x_or_z.im == 0.0 && x_or_z.re <= 0.0 {
                return Err(Error::BranchDomain("x must be positive".into()));
            }
            Ok(EvalResult::exact(x_or_z.powc(-nu)))
        }
    }
}

/// (t beta e^{i theta}, t beta e^{-i theta}; q)_inf /
/// (t e^{i theta}, t e^{-i theta}; q)_inf at x = cos theta.
fn rogers_product(
    t: C64,
    beta: C64,
    q: QBase,
    x: C64,
    pol: &TruncationPolicy,
) -> Result<EvalResult> {
    if t.norm() >= 1.0 {
        return Err(Error::DomainViolation("Rogers product needs |t| < 1".into()));
    }
    if x.im != 0.0 || x.re.abs() > 1.0 {
        return Err(Error::BranchDomain(format!(
            "Rogers product argument must lie in [-1, 1], got {x}"
        )));
    }
    let eip = x + I * cr((1.0 - x.re * x.re).max(0.0).sqrt());
    let eim = eip.conj();
    let num = qpoch_infinite_many(&[t * beta * eip, t * beta * eim], q, pol);
    let den = qpoch_infinite_many(&[t * eip, t * eim], q, pol);
    if den.value.norm() < pol.abs_floor {
        return Err(Error::PoleError("vanishing denominator in the Rogers product".into()));
    }
    Ok(combine(num.value / den.value, &[&num, &den]))
}

fn stieltjes_kernel(t: C64, power: C64, x: C64, pol: &TruncationPolicy) -> Result<EvalResult> {
    let kern = cr(1.0) + t * t - cr(2.0) * t * x;
    if kern.norm() < pol.abs_floor {
        return Err(Error::PoleError("1 + t^2 - 2tx = 0".into()));
    }
    Ok(EvalResult::exact(kern.powc(-power)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfamilies::poly_eval;

    fn q(v: f64) -> QBase {
        QBase::real(v).unwrap()
    }

    fn req(id: IdentityId, n: u32, pairs: &[(&str, f64)], qv: Option<f64>) -> CoeffRequest {
        let params = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), cr(*v)))
            .collect();
        CoeffRequest::new(id, n, params, qv.map(q)).unwrap()
    }

    #[test]
    fn rogers_gamma_collapses_at_beta_equals_gamma() {
        // the 2phi1 degenerates to 1 because (1; q)_k = 0 for k >= 1
        for n in 0..=6 {
            let r = req(
                IdentityId::ROGERS_GAMMA,
                n,
                &[("t", 0.2), ("beta", 0.3), ("gamma", 0.3)],
                Some(0.5),
            );
            let c = coefficient(&r).unwrap();
            let tn = 0.2f64.powi(n as i32);
            assert!((c.value.re - tn).abs() < 1e-15 * tn.max(1e-30), "n={n}");
            assert!(c.value.im == 0.0);
        }
    }

    #[test]
    fn cqhermite_beta_zero_is_plain_generating_function() {
        for n in 0..=6 {
            let a = coefficient(&req(
                IdentityId::CQHERMITE,
                n,
                &[("t", 0.3), ("beta", 0.0)],
                Some(0.5),
            ))
            .unwrap();
            let b = coefficient(&req(IdentityId::CQHERMITE_GF, n, &[("t", 0.3)], Some(0.5)))
                .unwrap();
            assert!((a.value - b.value).norm() < 1e-15 * b.value.norm());
        }
    }

    #[test]
    fn sqrt_and_sqrt_free_w87_paths_agree() {
        for n in 0..=4 {
            let r = req(
                IdentityId::AW_ROGERS,
                n,
                &[
                    ("t", 0.2),
                    ("beta", 0.5),
                    ("a1", 0.1),
                    ("a2", 0.2),
                    ("a3", 0.3),
                    ("a4", 0.4),
                ],
                Some(0.5),
            );
            let a = coefficient_path(&r, WPath::Generic).unwrap();
            let b = coefficient_path(&r, WPath::SqrtFree).unwrap();
            assert!(
                (a.value - b.value).norm() <= 1e-12 * b.value.norm().max(1e-30),
                "AW n={n}: {} vs {}",
                a.value,
                b.value
            );
            let r = req(
                IdentityId::CQJACOBI_ROGERS,
                n,
                &[("t", 0.25), ("beta", 0.4), ("alpha", 0.2), ("gamma", 0.5)],
                Some(0.5),
            );
            let a = coefficient_path(&r, WPath::Generic).unwrap();
            let b = coefficient_path(&r, WPath::SqrtFree).unwrap();
            assert!(
                (a.value - b.value).norm() <= 1e-12 * b.value.norm().max(1e-30),
                "q-Jacobi n={n}"
            );
        }
    }

    #[test]
    fn wilson_limit_coefficients_terminate_exactly() {
        let pairs: &[(&str, f64)] = &[
            ("u", 1.2 - 2.0),
            ("t", 1.2),
            ("a1", 1.0),
            ("a2", 1.5),
            ("a3", 0.5),
            ("a4", 2.0),
        ];
        for n in 0..=6 {
            let c = coefficient(&req(IdentityId::WILSON_LIMIT, n, pairs, None)).unwrap();
            if n > 2 {
                assert_eq!(c.value, cr(0.0), "n={n} must vanish exactly");
            } else {
                assert!(c.value.norm() > 1e-12, "n={n} must not vanish");
            }
        }
    }

    #[test]
    fn wilson_limit_trivial_at_u_equals_t() {
        let pairs: &[(&str, f64)] = &[
            ("u", 1.2),
            ("t", 1.2),
            ("a1", 1.0),
            ("a2", 1.5),
            ("a3", 0.5),
            ("a4", 2.0),
        ];
        let c0 = coefficient(&req(IdentityId::WILSON_LIMIT, 0, pairs, None)).unwrap();
        assert!((c0.value - cr(1.0)).norm() < 1e-14);
        let params = param_map(&[
            ("u", cr(1.2)),
            ("t", cr(1.2)),
            ("a1", cr(1.0)),
            ("a2", cr(1.5)),
            ("a3", cr(0.5)),
            ("a4", cr(2.0)),
        ]);
        let lhs = lhs_eval(
            IdentityId::WILSON_LIMIT,
            &params,
            None,
            cr(0.7),
            &TruncationPolicy::default(),
        )
        .unwrap();
        assert!((lhs.value - cr(1.0)).norm() < 1e-14);
    }

    #[test]
    fn connection_coeff_is_identity_on_the_diagonal() {
        let qb = q(0.5);
        for n in 0..=8u32 {
            let c0 = connection_coeff(n, 0, cr(0.3), cr(0.3), qb).unwrap();
            assert!((c0 - cr(1.0)).norm() < 1e-14, "n={n}");
            for k in 1..=(n / 2) {
                let ck = connection_coeff(n, k, cr(0.3), cr(0.3), qb).unwrap();
                assert_eq!(ck, cr(0.0), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn connection_relation_holds_pointwise() {
        // n = 2, k = 1 sample pinned by evaluating both sides at two points
        let qb = q(0.5);
        let (beta, gamma) = (cr(0.3), cr(0.6));
        let sb = PolySpec::cq_ultraspherical(0.3, 0.5).unwrap();
        let sg = PolySpec::cq_ultraspherical(0.6, 0.5).unwrap();
        for &x in &[0.1f64, 0.7] {
            let lhs = poly_eval(&sb, 2, cr(x)).unwrap();
            let mut rhs = cr(0.0);
            for k in 0..=1u32 {
                let c = connection_coeff(2, k, beta, gamma, qb).unwrap();
                rhs += c * poly_eval(&sg, 2 - 2 * k, cr(x)).unwrap();
            }
            assert!((lhs - rhs).norm() < 1e-13 * lhs.norm().max(1.0), "x={x}");
        }
    }

    #[test]
    fn heine_coefficients_match_frozen_legendre_q() {
        // Q_0(2) = ln(3)/2, Q_1(2) = ln(3) - 1
        let c0 = coefficient(&req(IdentityId::HEINE, 0, &[("z", 2.0)], None)).unwrap();
        assert!((c0.value.re - 0.5 * 3f64.ln()).abs() < 1e-13);
        let c1 = coefficient(&req(IdentityId::HEINE, 1, &[("z", 2.0)], None)).unwrap();
        assert!((c1.value.re - 3.0 * (3f64.ln() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn pow_ids_specialize_to_heine_forms() {
        // (4:29) at nu = 1/2 is the reciprocal square-root identity, and
        // the Legendre power law at nu = 1 is Heine's formula
        for n in 0..=5 {
            let a = coefficient(&req(
                IdentityId::CHEBY_POW,
                n,
                &[("nu", 0.5), ("z", 1.8)],
                None,
            ))
            .unwrap();
            let b = coefficient(&req(IdentityId::HEINE_SQRT, n, &[("z", 1.8)], None)).unwrap();
            assert!(
                (a.value - b.value).norm() < 1e-12 * b.value.norm(),
                "cheby n={n}: {} vs {}",
                a.value,
                b.value
            );
            let a = coefficient(&req(
                IdentityId::LEGENDRE_POW,
                n,
                &[("nu", 1.0), ("z", 1.8)],
                None,
            ))
            .unwrap();
            let b = coefficient(&req(IdentityId::HEINE, n, &[("z", 1.8)], None)).unwrap();
            assert!(
                (a.value - b.value).norm() < 1e-12 * b.value.norm(),
                "legendre n={n}"
            );
        }
    }

    #[test]
    fn pow_coefficients_are_real_for_real_data() {
        for n in 0..=4 {
            let c = coefficient(&req(
                IdentityId::GEGEN_POW,
                n,
                &[("nu", 0.7), ("mu", 0.6), ("z", 2.0)],
                None,
            ))
            .unwrap();
            assert!(
                c.value.im.abs() < 1e-13 * c.value.re.abs(),
                "phases must cancel, got {}",
                c.value
            );
        }
    }

    #[test]
    fn jacobi_pow_at_nu_one_matches_hypergeometric_route() {
        // with nu = 1 and z = (t + 1/t)/2 the power law is 2t times the
        // Gegenbauer-type expansion at beta = 1, coefficient by coefficient
        let t = 0.3;
        let z = 0.5 * (t + 1.0 / t);
        for n in 0..=5 {
            let a = coefficient(&req(
                IdentityId::JACOBI_POW,
                n,
                &[("nu", 1.0), ("alpha", 0.3), ("beta", 0.5), ("z", z)],
                None,
            ))
            .unwrap();
            let b = coefficient(&req(
                IdentityId::GEGEN_GF_GENERAL,
                n,
                &[("t", t), ("beta", 1.0), ("alpha", 0.3), ("gamma", 0.5)],
                None,
            ))
            .unwrap();
            let want = cr(2.0 * t) * b.value;
            assert!(
                (a.value - want).norm() < 1e-9 * want.norm(),
                "n={n}: {} vs {}",
                a.value,
                want
            );
        }
    }

    #[test]
    fn szego_transform_relates_the_two_kernels() {
        let t = 0.3;
        let z = 0.5 * (t + 1.0 / t);
        let nu = 0.7;
        let x = 0.2;
        let jp = lhs_eval(
            IdentityId::JACOBI_POW,
            &param_map(&[("nu", cr(nu)), ("alpha", cr(0.3)), ("beta", cr(0.5)), ("z", cr(z))]),
            None,
            cr(x),
            &TruncationPolicy::default(),
        )
        .unwrap();
        let gg = lhs_eval(
            IdentityId::GEGEN_GF_GENERAL,
            &param_map(&[("t", cr(t)), ("beta", cr(nu)), ("alpha", cr(0.3)), ("gamma", cr(0.5))]),
            None,
            cr(x),
            &TruncationPolicy::default(),
        )
        .unwrap();
        // (z - x) = (1 + t^2 - 2tx) / (2t), so the kernels differ by (2t)^nu
        let want = jp.value * cr(2.0 * t).powc(cr(-nu));
        assert!((gg.value - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn lhs_trivial_cases() {
        let pol = TruncationPolicy::default();
        // beta = 1 makes the Rogers product collapse to 1
        let l = lhs_eval(
            IdentityId::ROGERS_GF,
            &param_map(&[("t", cr(0.4)), ("beta", cr(1.0))]),
            Some(q(0.5)),
            cr(0.3),
            &pol,
        )
        .unwrap();
        assert!((l.value - cr(1.0)).norm() < 1e-14);
        let l = lhs_eval(
            IdentityId::GEGEN_GF,
            &param_map(&[("t", cr(0.0)), ("mu", cr(0.7))]),
            None,
            cr(0.3),
            &pol,
        )
        .unwrap();
        assert_eq!(l.value, cr(1.0));
    }

    #[test]
    fn preconditions_are_enforced() {
        let r = req(
            IdentityId::JACOBI_1MX,
            2,
            &[("nu", 1.5), ("alpha", 0.3), ("beta", 0.4)],
            None,
        );
        assert!(matches!(coefficient(&r), Err(Error::DomainViolation(_))));
        let bad = CoeffRequest::new(
            IdentityId::ROGERS_GAMMA,
            1,
            param_map(&[("t", cr(1.2)), ("beta", cr(0.3)), ("gamma", cr(0.4))]),
            Some(q(0.5)),
        );
        assert!(bad.is_err());
        let missing = CoeffRequest::new(
            IdentityId::ROGERS_GAMMA,
            1,
            param_map(&[("t", cr(0.2))]),
            Some(q(0.5)),
        );
        assert!(missing.is_err());
    }

    #[test]
    fn rogers_gamma_near_gamma_zero_meets_hermite_scaling() {
        // gamma -> 0 confluence: the 2phi1 becomes the 1phi1 of the
        // Hermite-type coefficient, so coeff_RG -> coeff_H * (q; q)_n
        let qb = q(0.5);
        for n in 0..=5 {
            let rg = coefficient(&req(
                IdentityId::ROGERS_GAMMA,
                n,
                &[("t", 0.25), ("beta", 0.3), ("gamma", 1e-7)],
                Some(0.5),
            ))
            .unwrap();
            let h = coefficient(&req(
                IdentityId::CQHERMITE,
                n,
                &[("t", 0.25), ("beta", 0.3)],
                Some(0.5),
            ))
            .unwrap();
            let want = h.value * qpoch_finite(qb.value(), qb, n);
            assert!(
                (rg.value - want).norm() < 1e-5 * want.norm(),
                "n={n}: {} vs {}",
                rg.value,
                want
            );
        }
    }

    #[test]
    fn identity_ids_round_trip_and_know_their_targets() {
        for id in ALL_IDENTITIES {
            assert_eq!(IdentityId::parse(id.name()), Some(id));
        }
        assert_eq!(IdentityId::parse("nope"), None);
        let params = param_map(&[("t", cr(0.2)), ("beta", cr(0.3)), ("gamma", cr(0.4))]);
        let spec = IdentityId::ROGERS_GAMMA
            .target_spec(&params, Some(q(0.5)))
            .unwrap();
        assert_eq!(spec.family, Family::CqUltraspherical);
        assert_eq!(spec.params, vec![cr(0.4)]);
    }
}
