//! Grid-driven verification: each identity's closed-form left side is
//! compared against its truncated coefficient sum over parameter grids,
//! alongside the connection relation, the quadratic transformation, the
//! q -> 1 limit chains, and the classical Heine expansions.
//!
//! Every operation is deterministic: fixed evaluation order, no RNG, no
//! shared mutable state, so identical grids produce bit-identical reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansions::{
    coefficient, connection_coeff, lhs_eval, param_map, CoeffRequest, IdentityId,
};
use crate::hyperseries::{hyp, phi, vwp_phi_spec, HypSpec, PhiSpec};
use crate::polyfamilies::{poly_eval, poly_sweep, Family, PolySpec};
use crate::qcore::{
    cr, pochhammer_general, qpoch_finite, qpoch_general, qpoch_infinite_many, C64, EvalResult,
    QBase, TruncationPolicy,
};

/// Residual denominators never drop below this, so near-zeros of a left
/// side cannot manufacture infinite relative errors.
pub const RESIDUAL_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    /// Polynomial arguments (x in [-1,1] for the weight-interval ids).
    pub x_points: Vec<f64>,
    /// One map per parameter sample; q-identities carry a real "q" entry.
    pub param_samples: Vec<BTreeMap<String, C64>>,
    /// Partial-sum length.
    pub n_terms: u32,
    pub tol_rel: f64,
}

impl GridSpec {
    pub fn new(
        x_points: Vec<f64>,
        param_samples: Vec<BTreeMap<String, C64>>,
        n_terms: u32,
        tol_rel: f64,
    ) -> Result<GridSpec> {
        if x_points.is_empty() || param_samples.is_empty() {
            return Err(Error::DomainViolation("empty verification grid".into()));
        }
        if n_terms == 0 {
            return Err(Error::DomainViolation("N_terms must be at least 1".into()));
        }
        if !(tol_rel > 0.0) {
            return Err(Error::DomainViolation("tol_rel must be positive".into()));
        }
        Ok(GridSpec {
            x_points,
            param_samples,
            n_terms,
            tol_rel,
        })
    }

    pub fn with_n_terms(&self, n_terms: u32) -> GridSpec {
        let mut g = self.clone();
        g.n_terms = n_terms;
        g
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Identity name or check name.
    pub id: String,
    pub samples: u64,
    pub max_rel_residual: f64,
    pub worst_point: BTreeMap<String, C64>,
    pub n_terms_used: u32,
    pub converged_fraction: f64,
    pub pass: bool,
}

/// Running aggregation over grid samples; pass requires the residual bound
/// and full convergence.
pub(crate) struct Agg {
    samples: u64,
    converged: u64,
    max_rel: f64,
    worst: BTreeMap<String, C64>,
    n_terms: u32,
}

impl Agg {
    pub(crate) fn new(n_terms: u32) -> Agg {
        Agg {
            samples: 0,
            converged: 0,
            max_rel: 0.0,
            worst: BTreeMap::new(),
            n_terms,
        }
    }

    pub(crate) fn record(&mut self, rel: f64, converged: bool, point: &BTreeMap<String, C64>) {
        self.samples += 1;
        if converged {
            self.converged += 1;
        }
        if rel >= self.max_rel {
            self.max_rel = rel;
            self.worst = point.clone();
        }
    }

    pub(crate) fn finish(self, id: String, tol_rel: f64) -> VerificationReport {
        let converged_fraction = if self.samples == 0 {
            0.0
        } else {
            self.converged as f64 / self.samples as f64
        };
        VerificationReport {
            id,
            samples: self.samples,
            max_rel_residual: self.max_rel,
            worst_point: self.worst,
            n_terms_used: self.n_terms,
            converged_fraction,
            pass: self.max_rel <= tol_rel && converged_fraction == 1.0,
        }
    }
}

fn sample_q(id: IdentityId, sample: &BTreeMap<String, C64>) -> Result<Option<QBase>> {
    if !id.requires_q() {
        return Ok(None);
    }
    let qv = sample
        .get("q")
        .ok_or_else(|| Error::DomainViolation(format!("{} sample lacks `q`", id.name())))?;
    Ok(Some(QBase::new(*qv)?))
}

fn describe(sample: &BTreeMap<String, C64>) -> String {
    sample
        .iter()
        .map(|(k, v)| {
            if v.im == 0.0 {
                format!("{k}={}", v.re)
            } else {
                format!("{k}={v}")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn at_sample(e: Error, sample: &BTreeMap<String, C64>) -> Error {
    match e {
        Error::DomainViolation(msg) => {
            Error::DomainViolation(format!("{msg} [sample: {}]", describe(sample)))
        }
        other => other,
    }
}

/// Compare lhs_eval against the truncated coefficient sum over the grid.
pub fn verify_expansion(id: IdentityId, grid: &GridSpec) -> Result<VerificationReport> {
    let pol = TruncationPolicy::default();
    let mut agg = Agg::new(grid.n_terms);
    for sample in &grid.param_samples {
        let q = sample_q(id, sample)?;
        let req = CoeffRequest::new(id, 0, sample.clone(), q).map_err(|e| at_sample(e, sample))?;
        let mut coeffs = Vec::with_capacity(grid.n_terms as usize);
        let mut conv = true;
        for n in 0..grid.n_terms {
            let c = coefficient(&req.at_degree(n)).map_err(|e| at_sample(e, sample))?;
            conv &= c.converged;
            coeffs.push(c.value);
        }
        let spec = id.target_spec(sample, q).map_err(|e| at_sample(e, sample))?;
        for &x in &grid.x_points {
            let lhs = lhs_eval(id, sample, q, cr(x), &pol).map_err(|e| at_sample(e, sample))?;
            let polys = poly_sweep(&spec, grid.n_terms - 1, cr(x))?;
            let mut sum = cr(0.0);
            for (c, p) in coeffs.iter().zip(&polys) {
                sum += c * p;
            }
            let rel = (lhs.value - sum).norm() / lhs.value.norm().max(RESIDUAL_FLOOR);
            let mut point = sample.clone();
            point.insert("x".into(), cr(x));
            agg.record(rel, conv && lhs.converged, &point);
        }
    }
    Ok(agg.finish(id.name().into(), grid.tol_rel))
}

/// Max relative residual of the id over the grid at each truncation length,
/// for monotone-truncation checks.
pub fn residual_profile(id: IdentityId, grid: &GridSpec, lengths: &[u32]) -> Result<Vec<f64>> {
    lengths
        .iter()
        .map(|&n| Ok(verify_expansion(id, &grid.with_n_terms(n))?.max_rel_residual))
        .collect()
}

/// Pointwise check of the degree-lowering connection relation between
/// ultraspherical parameters beta and gamma.
pub fn verify_connection(
    n_max: u32,
    beta: C64,
    gamma: C64,
    q: QBase,
    x_points: &[f64],
) -> Result<VerificationReport> {
    const TOL: f64 = 1e-11;
    if n_max > 30 {
        return Err(Error::DomainViolation(
            "connection check supports n_max <= 30".into(),
        ));
    }
    if x_points.len() < n_max as usize + 1 {
        return Err(Error::DomainViolation(format!(
            "need at least {} distinct x points for degree {n_max}",
            n_max + 1
        )));
    }
    let sb = PolySpec::new(Family::CqUltraspherical, vec![beta], Some(q))?;
    let sg = PolySpec::new(Family::CqUltraspherical, vec![gamma], Some(q))?;
    let mut conn = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let row: Vec<C64> = (0..=n / 2)
            .map(|k| connection_coeff(n, k, beta, gamma, q))
            .collect::<Result<_>>()?;
        conn.push(row);
    }
    let mut agg = Agg::new(n_max);
    for &x in x_points {
        let pb = poly_sweep(&sb, n_max, cr(x))?;
        let pg = poly_sweep(&sg, n_max, cr(x))?;
        for n in 0..=n_max as usize {
            let mut rhs = cr(0.0);
            for (k, c) in conn[n].iter().enumerate() {
                rhs += c * pg[n - 2 * k];
            }
            let rel = (pb[n] - rhs).norm() / pb[n].norm().max(RESIDUAL_FLOOR);
            let point = param_map(&[
                ("beta", beta),
                ("gamma", gamma),
                ("q", q.value()),
                ("x", cr(x)),
                ("n", cr(n as f64)),
            ]);
            agg.record(rel, true, &point);
        }
    }
    Ok(agg.finish("connection".into(), TOL))
}

/// Both sides of the quadratic transformation, plus its t -> -t invariance.
pub fn verify_quadratic_transform(
    a: C64,
    b: C64,
    t: C64,
    q: QBase,
    pol: &TruncationPolicy,
) -> Result<VerificationReport> {
    const TOL: f64 = 1e-10;
    let qv = q.value();
    if (qv * t * t).norm() >= 1.0 || (qv * t).norm() >= 1.0 {
        return Err(Error::DomainViolation(
            "quadratic transform needs |qt^2| < 1 and |qt| < 1".into(),
        ));
    }
    let mut agg = Agg::new(0);
    let point = param_map(&[("a", a), ("b", b), ("t", t), ("q", qv)]);
    if a.norm() < pol.abs_floor {
        // 2phi1(0, b; 0; q, qt^2) is the q-binomial theorem
        let lhs = phi(
            &PhiSpec::new(vec![cr(0.0), b], vec![cr(0.0)], q, qv * t * t),
            pol,
        )?;
        let num = qpoch_infinite_many(&[b * qv * t * t], q, pol);
        let den = qpoch_infinite_many(&[qv * t * t], q, pol);
        let rhs = num.value / den.value;
        let rel = (lhs.value - rhs).norm() / lhs.value.norm().max(RESIDUAL_FLOOR);
        agg.record(rel, lhs.converged && num.converged && den.converged, &point);
        return Ok(agg.finish("quadratic_transform".into(), TOL));
    }
    if b.norm() < pol.abs_floor {
        return Err(Error::DomainViolation(
            "quadratic transform needs b != 0".into(),
        ));
    }
    let lhs = phi(
        &PhiSpec::new(vec![a, b], vec![qv * a / b], q, qv * t * t),
        pol,
    )?;
    let mut conv = lhs.converged;
    for &sign in &[1.0, -1.0] {
        let s = cr(sign) * t;
        let num = qpoch_infinite_many(&[qv * (a * s) * (a * s), qv * a * s / b, qv * s], q, pol);
        let den = qpoch_infinite_many(&[qv * a * a * s / b, qv * a * s, qv * s * s], q, pol);
        if den.value.norm() < pol.abs_floor {
            return Err(Error::DenominatorPole(
                "vanishing product in the quadratic-transform prefactor".into(),
            ));
        }
        let big_a = a * a * s / b;
        let half = qv.sqrt();
        // at s = 0 the b s denominator parameter degenerates to 0/0, but
        // the series argument is 0 too, so the sum is exactly 1
        let w = if s.norm() < pol.abs_floor {
            EvalResult::exact(cr(1.0))
        } else {
            phi(
                &vwp_phi_spec(
                    big_a,
                    [half * a / b, -(half * a / b), -(a / b), b * s, a],
                    q,
                    qv * s,
                ),
                pol,
            )?
        };
        let rhs = num.value / den.value * w.value;
        let rel = (lhs.value - rhs).norm() / lhs.value.norm().max(RESIDUAL_FLOOR);
        let mut pt = point.clone();
        pt.insert("t".into(), s);
        conv &= num.converged && den.converged && w.converged;
        agg.record(rel, conv, &pt);
    }
    Ok(agg.finish("quadratic_transform".into(), TOL))
}

/// The q -> 1 (or parameter -> 0) degeneration chains. Each chain pins a
/// classical target and demands monotone error decay along the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitChain {
    /// (q^alpha; q)_beta / (1-q)^beta -> (alpha)_beta.
    PochhammerRatio,
    /// Continuous q-Jacobi -> Jacobi under the exponent rescaling.
    QJacobiToJacobi,
    /// Continuous q-Legendre -> Legendre.
    QLegendreToLegendre,
    /// Rogers polynomials at beta = q^lambda -> Gegenbauer.
    UltraToGegenbauer,
    /// Hermite-type coefficients as beta -> 0; exact at beta = 0.
    HermiteBetaZero,
    /// Rescaled Rogers polynomials at beta = q^b -> Chebyshev as b -> 0.
    ChebyshevExponent,
    /// The quadratic transform's 2phi1 side -> its classical 2F1 target.
    QuadraticClassical,
}

pub const ALL_CHAINS: [LimitChain; 7] = [
    LimitChain::PochhammerRatio,
    LimitChain::QJacobiToJacobi,
    LimitChain::QLegendreToLegendre,
    LimitChain::UltraToGegenbauer,
    LimitChain::HermiteBetaZero,
    LimitChain::ChebyshevExponent,
    LimitChain::QuadraticClassical,
];

impl LimitChain {
    pub fn name(self) -> &'static str {
        match self {
            LimitChain::PochhammerRatio => "limit_pochhammer_ratio",
            LimitChain::QJacobiToJacobi => "limit_cqjacobi_to_jacobi",
            LimitChain::QLegendreToLegendre => "limit_cqlegendre_to_legendre",
            LimitChain::UltraToGegenbauer => "limit_ultra_to_gegenbauer",
            LimitChain::HermiteBetaZero => "limit_hermite_beta_zero",
            LimitChain::ChebyshevExponent => "limit_chebyshev_exponent",
            LimitChain::QuadraticClassical => "limit_quadratic_classical",
        }
    }

    pub fn parse(s: &str) -> Option<LimitChain> {
        ALL_CHAINS.iter().copied().find(|c| c.name() == s)
    }

    /// True when the chain approaches q = 1 from below; false for the
    /// beta -> 0 style chains whose sequence decreases to zero.
    pub fn ascends_to_one(self) -> bool {
        !matches!(
            self,
            LimitChain::HermiteBetaZero | LimitChain::ChebyshevExponent
        )
    }

    pub fn default_seq(self) -> Vec<f64> {
        if self.ascends_to_one() {
            vec![0.9, 0.99, 0.999]
        } else if self == LimitChain::HermiteBetaZero {
            vec![0.1, 0.01, 0.0]
        } else {
            vec![0.5, 0.1, 0.01]
        }
    }

    pub fn final_tol(self) -> f64 {
        match self {
            LimitChain::HermiteBetaZero => 0.0,
            LimitChain::ChebyshevExponent => 0.1,
            _ => 1e-3,
        }
    }

    /// Worst relative error against the classical target at one sequence
    /// value, over the chain's fixed degree/argument panel.
    fn error_at(self, v: f64, pol: &TruncationPolicy) -> Result<f64> {
        let rel = |got: C64, want: C64| (got - want).norm() / want.norm().max(RESIDUAL_FLOOR);
        match self {
            LimitChain::PochhammerRatio => {
                let q = QBase::real(v)?;
                let mut worst = 0.0f64;
                for &(alpha, beta) in &[(1.3, 0.7), (0.6, 1.1), (2.2, 0.4)] {
                    let got = qpoch_general(q.value().powf(alpha), q, cr(beta), pol)?;
                    let scaled = got.value / cr(1.0 - v).powc(cr(beta));
                    let want = pochhammer_general(cr(alpha), cr(beta))?;
                    worst = worst.max(rel(scaled, want));
                }
                Ok(worst)
            }
            LimitChain::QJacobiToJacobi => {
                let q = QBase::real(v)?;
                let (alpha, gamma) = (0.5, 0.5);
                let qs = PolySpec::new(
                    Family::CqJacobi,
                    vec![cr(v.powf(alpha + 0.5)), cr(v.powf(gamma + 0.5))],
                    Some(q),
                )?;
                let cs = PolySpec::jacobi(alpha, gamma)?;
                let mut worst = 0.0f64;
                for n in 0..=6 {
                    // the family convention carries a q^{n/4} factor relative
                    // to the classical normalization, as in the q-Legendre
                    // special case
                    let lag = v.powf(-f64::from(n) / 4.0);
                    for &x in &[0.2, -0.5] {
                        let got = poly_eval(&qs, n, cr(x))? * lag;
                        let want = poly_eval(&cs, n, cr(x))?;
                        worst = worst.max(rel(got, want));
                    }
                }
                Ok(worst)
            }
            LimitChain::QLegendreToLegendre => {
                let q = QBase::real(v)?;
                let qs = PolySpec::new(Family::CqLegendre, vec![], Some(q))?;
                let cs = PolySpec::legendre()?;
                let mut worst = 0.0f64;
                for n in 0..=6 {
                    for &x in &[0.3, -0.7] {
                        worst = worst.max(rel(poly_eval(&qs, n, cr(x))?, poly_eval(&cs, n, cr(x))?));
                    }
                }
                Ok(worst)
            }
            LimitChain::UltraToGegenbauer => {
                let q = QBase::real(v)?;
                let lambda = 0.7;
                let qs = PolySpec::new(
                    Family::CqUltraspherical,
                    vec![cr(v.powf(lambda))],
                    Some(q),
                )?;
                let cs = PolySpec::gegenbauer(lambda)?;
                let mut worst = 0.0f64;
                for n in 0..=6 {
                    for &x in &[0.3, -0.6] {
                        worst = worst.max(rel(poly_eval(&qs, n, cr(x))?, poly_eval(&cs, n, cr(x))?));
                    }
                }
                Ok(worst)
            }
            LimitChain::HermiteBetaZero => {
                let q = Some(QBase::real(0.5)?);
                let t = cr(0.25);
                let mut worst = 0.0f64;
                for n in 0..=6 {
                    let got = coefficient(&CoeffRequest::new(
                        IdentityId::CQHERMITE,
                        n,
                        param_map(&[("t", t), ("beta", cr(v))]),
                        q,
                    )?)?;
                    let want = coefficient(&CoeffRequest::new(
                        IdentityId::CQHERMITE_GF,
                        n,
                        param_map(&[("t", t)]),
                        q,
                    )?)?;
                    worst = worst.max(rel(got.value, want.value));
                }
                Ok(worst)
            }
            LimitChain::ChebyshevExponent => {
                let q = QBase::real(0.5)?;
                let qv = q.value();
                let beta = qv.powf(v);
                let qs = PolySpec::new(Family::CqUltraspherical, vec![beta], Some(q))?;
                let cs = PolySpec::chebyshev_t()?;
                let mut worst = 0.0f64;
                for n in 0..=6 {
                    for &x in &[0.3, -0.6] {
                        let scale = qpoch_finite(qv * beta, q, n) / qpoch_finite(beta, q, n);
                        let eps = if n == 0 { 1.0 } else { 2.0 };
                        let got = scale * poly_eval(&qs, n, cr(x))?;
                        let want = cr(eps) * poly_eval(&cs, n, cr(x))?;
                        worst = worst.max(rel(got, want));
                    }
                }
                Ok(worst)
            }
            LimitChain::QuadraticClassical => {
                let q = QBase::real(v)?;
                let qv = q.value();
                let (a, b, t) = (0.4, 0.25, 0.3);
                let got = phi(
                    &PhiSpec::new(
                        vec![qv.powf(a), qv.powf(b)],
                        vec![qv.powf(1.0 + a - b)],
                        q,
                        qv * t * t,
                    ),
                    pol,
                )?;
                let want = hyp(
                    &HypSpec::new(
                        vec![cr(a), cr(b)],
                        vec![cr(1.0 + a - b)],
                        cr(t * t),
                    ),
                    pol,
                )?;
                Ok(rel(got.value, want.value))
            }
        }
    }
}

/// Errors along the chain's sequence must decrease monotonically and end
/// below the chain tolerance.
pub fn verify_limit_chain(chain: LimitChain, seq: &[f64]) -> Result<VerificationReport> {
    if seq.len() < 2 {
        return Err(Error::DomainViolation(
            "limit chain needs at least two sequence values".into(),
        ));
    }
    if chain.ascends_to_one() {
        if !seq.windows(2).all(|w| w[0] < w[1]) || seq.iter().any(|&v| !(0.0 < v && v < 1.0)) {
            return Err(Error::DomainViolation(
                "chain sequence must increase strictly inside (0, 1)".into(),
            ));
        }
    } else if !seq.windows(2).all(|w| w[0] > w[1]) || seq.iter().any(|&v| v < 0.0) {
        return Err(Error::DomainViolation(
            "chain sequence must decrease strictly toward 0".into(),
        ));
    }
    let pol = TruncationPolicy::default();
    let errors: Vec<f64> = seq
        .iter()
        .map(|&v| chain.error_at(v, &pol))
        .collect::<Result<_>>()?;
    let decreasing = errors
        .windows(2)
        .all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0));
    let last = *errors.last().expect("nonempty");
    let mut agg = Agg::new(seq.len() as u32);
    for (&v, &e) in seq.iter().zip(&errors) {
        agg.record(e, true, &param_map(&[("seq", cr(v))]));
    }
    let mut report = agg.finish(chain.name().into(), f64::INFINITY);
    report.max_rel_residual = last;
    report.pass = decreasing && last <= chain.final_tol();
    Ok(report)
}

/// The two classical Heine expansions of 1/(z-x) and (z-x)^{-1/2} on a
/// symmetric x panel.
pub fn verify_heine_classical(z: f64, n_terms: u32) -> Result<VerificationReport> {
    if !(1.1..=3.0).contains(&z) {
        return Err(Error::DomainViolation(format!(
            "Heine check expects z in [1.1, 3], got {z}"
        )));
    }
    let xs: Vec<f64> = (-9..=9).map(|j| j as f64 / 10.0).collect();
    let sample = vec![param_map(&[("z", cr(z))])];
    let plain = verify_expansion(
        IdentityId::HEINE,
        &GridSpec::new(xs.clone(), sample.clone(), n_terms, 1e-10)?,
    )?;
    let sqrt = verify_expansion(
        IdentityId::HEINE_SQRT,
        &GridSpec::new(xs, sample, n_terms + n_terms / 2, 1e-8)?,
    )?;
    let (worse, better) = if plain.max_rel_residual / 1e-10 >= sqrt.max_rel_residual / 1e-8 {
        (&plain, &sqrt)
    } else {
        (&sqrt, &plain)
    };
    Ok(VerificationReport {
        id: "heine_classical".into(),
        samples: plain.samples + sqrt.samples,
        max_rel_residual: worse.max_rel_residual,
        worst_point: worse.worst_point.clone(),
        n_terms_used: n_terms,
        converged_fraction: (plain.converged_fraction + sqrt.converged_fraction) / 2.0,
        pass: plain.pass && sqrt.pass && better.pass,
    })
}

/// Numerical surrogate of the L2 interchange argument: partial sums of
/// d_k^2 s_k^2 must be bounded and Cauchy, with s_k^2 the ultraspherical
/// norm from the quadrature module.
pub fn verify_l2_interchange(
    t: C64,
    beta: C64,
    gamma: C64,
    q: QBase,
    n_max: u32,
) -> Result<VerificationReport> {
    const TOL: f64 = 1e-10;
    let spec = PolySpec::new(Family::CqUltraspherical, vec![gamma], Some(q))?;
    let req = CoeffRequest::new(
        IdentityId::ROGERS_GAMMA,
        0,
        param_map(&[("t", t), ("beta", beta), ("gamma", gamma), ("q", q.value())]),
        Some(q),
    )?;
    let mut partial = Vec::with_capacity(n_max as usize + 1);
    let mut running = 0.0f64;
    let mut conv = true;
    for k in 0..=n_max {
        let d = coefficient(&req.at_degree(k))?;
        conv &= d.converged;
        let s2 = crate::quadrature::norm_squared(&spec, k)?;
        running += d.value.norm_sqr() * s2;
        partial.push(running);
    }
    let total = *partial.last().expect("nonempty");
    let half = partial[n_max as usize / 2];
    let cauchy = (total - half).abs() / total.max(RESIDUAL_FLOOR);
    let bounded = total.is_finite();
    let mut agg = Agg::new(n_max);
    agg.record(
        cauchy,
        conv,
        &param_map(&[("t", t), ("beta", beta), ("gamma", gamma), ("q", q.value())]),
    );
    let mut report = agg.finish("l2_interchange".into(), TOL);
    report.pass &= bounded;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QBase {
        QBase::real(v).unwrap()
    }

    fn cos_grid() -> Vec<f64> {
        (1..=9)
            .map(|j| (std::f64::consts::PI * j as f64 / 10.0).cos())
            .collect()
    }

    #[test]
    fn rogers_gf_meets_its_partial_sum_bar() {
        let grid = GridSpec::new(
            vec![(0.7f64).cos()],
            vec![param_map(&[("t", cr(0.2)), ("beta", cr(0.3)), ("q", cr(0.5))])],
            60,
            1e-12,
        )
        .unwrap();
        let rep = verify_expansion(IdentityId::ROGERS_GF, &grid).unwrap();
        assert!(rep.pass, "residual {}", rep.max_rel_residual);
        assert_eq!(rep.samples, 1);
    }

    #[test]
    fn beta_equals_gamma_profile_matches_plain_rogers() {
        let xs = cos_grid();
        let mk = |id: IdentityId, params: &[(&str, C64)]| {
            verify_expansion(
                id,
                &GridSpec::new(xs.clone(), vec![param_map(params)], 60, 1e-12).unwrap(),
            )
            .unwrap()
        };
        let a = mk(
            IdentityId::ROGERS_GAMMA,
            &[
                ("t", cr(0.2)),
                ("beta", cr(0.3)),
                ("gamma", cr(0.3)),
                ("q", cr(0.5)),
            ],
        );
        let b = mk(
            IdentityId::ROGERS_GF,
            &[("t", cr(0.2)), ("beta", cr(0.3)), ("q", cr(0.5))],
        );
        assert!(a.pass && b.pass);
        assert!((a.max_rel_residual - b.max_rel_residual).abs() < 1e-13);
    }

    #[test]
    fn gegen_gf_residual_is_tiny() {
        let grid = GridSpec::new(
            vec![0.2],
            vec![param_map(&[("t", cr(0.3)), ("mu", cr(0.7))])],
            80,
            1e-12,
        )
        .unwrap();
        let rep = verify_expansion(IdentityId::GEGEN_GF, &grid).unwrap();
        assert!(rep.pass, "residual {}", rep.max_rel_residual);
    }

    #[test]
    fn connection_passes_the_stated_bar() {
        let xs: Vec<f64> = (0..11)
            .map(|j| (std::f64::consts::PI * (2 * j + 1) as f64 / 22.0).cos())
            .collect();
        let rep = verify_connection(6, cr(0.25), cr(0.55), q(0.5), &xs).unwrap();
        assert!(rep.pass, "residual {}", rep.max_rel_residual);
        let low = verify_connection(1, cr(0.25), cr(0.55), q(0.5), &xs[..2]).unwrap();
        assert!(low.pass);
    }

    #[test]
    fn connection_rejects_underdetermined_grids() {
        let err = verify_connection(6, cr(0.25), cr(0.55), q(0.5), &[0.1, 0.2]);
        assert!(matches!(err, Err(Error::DomainViolation(_))));
    }

    #[test]
    fn quadratic_transform_holds_and_flips_sign() {
        let pol = TruncationPolicy::default();
        let rep =
            verify_quadratic_transform(cr(0.3), cr(0.5), cr(0.25), q(0.5), &pol).unwrap();
        assert!(rep.pass, "residual {}", rep.max_rel_residual);
        assert_eq!(rep.samples, 2, "both t signs must be checked");
        let triv = verify_quadratic_transform(cr(0.0), cr(0.5), cr(0.25), q(0.5), &pol).unwrap();
        assert!(triv.pass);
        let zero_t =
            verify_quadratic_transform(cr(0.3), cr(0.5), cr(0.0), q(0.5), &pol).unwrap();
        assert!(zero_t.pass && zero_t.max_rel_residual < 1e-14);
    }

    #[test]
    fn limit_chains_decrease() {
        for chain in [
            LimitChain::PochhammerRatio,
            LimitChain::QJacobiToJacobi,
            LimitChain::QLegendreToLegendre,
            LimitChain::UltraToGegenbauer,
        ] {
            let rep = verify_limit_chain(chain, &chain.default_seq()).unwrap();
            assert!(
                rep.pass,
                "{} final error {}",
                chain.name(),
                rep.max_rel_residual
            );
        }
    }

    #[test]
    fn hermite_chain_is_exact_at_zero() {
        let rep =
            verify_limit_chain(LimitChain::HermiteBetaZero, &[0.1, 0.01, 0.0]).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.max_rel_residual, 0.0);
    }

    #[test]
    fn chain_sequences_are_validated() {
        assert!(verify_limit_chain(LimitChain::PochhammerRatio, &[0.99, 0.9]).is_err());
        assert!(verify_limit_chain(LimitChain::HermiteBetaZero, &[0.01, 0.1]).is_err());
        assert!(verify_limit_chain(LimitChain::PochhammerRatio, &[0.9]).is_err());
    }

    #[test]
    fn heine_classical_meets_spec_example() {
        let rep = verify_heine_classical(2.0, 40).unwrap();
        assert!(rep.pass, "residual {}", rep.max_rel_residual);
        assert!(verify_heine_classical(1.05, 40).is_err());
    }

    #[test]
    fn truncation_residuals_shrink() {
        let grid = GridSpec::new(
            cos_grid(),
            vec![param_map(&[
                ("t", cr(0.25)),
                ("beta", cr(0.3)),
                ("gamma", cr(0.6)),
                ("q", cr(0.5)),
            ])],
            20,
            1e-10,
        )
        .unwrap();
        let prof = residual_profile(IdentityId::ROGERS_GAMMA, &grid, &[20, 40, 80]).unwrap();
        assert!(prof[1] <= prof[0] && prof[2] <= prof[1], "{prof:?}");
    }

    #[test]
    fn reports_are_deterministic() {
        let grid = GridSpec::new(
            cos_grid(),
            vec![param_map(&[
                ("t", cr(0.25)),
                ("beta", cr(0.3)),
                ("gamma", cr(0.6)),
                ("q", cr(0.5)),
            ])],
            40,
            1e-10,
        )
        .unwrap();
        let a = verify_expansion(IdentityId::ROGERS_GAMMA, &grid).unwrap();
        let b = verify_expansion(IdentityId::ROGERS_GAMMA, &grid).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn domain_errors_carry_the_sample() {
        let grid = GridSpec::new(
            vec![0.1],
            vec![param_map(&[
                ("t", cr(1.5)),
                ("beta", cr(0.3)),
                ("gamma", cr(0.6)),
                ("q", cr(0.5)),
            ])],
            10,
            1e-10,
        )
        .unwrap();
        match verify_expansion(IdentityId::ROGERS_GAMMA, &grid) {
            Err(Error::DomainViolation(msg)) => assert!(msg.contains("t=1.5"), "{msg}"),
            other => panic!("expected a domain violation, got {other:?}"),
        }
    }
}
