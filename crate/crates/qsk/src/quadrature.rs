//! Quadrature against the orthogonality weights and the integral forms of
//! the expansions: spectrally accurate trapezoid rules in theta for the
//! cosine-interval q-weights, an exponentially truncated trapezoid for the
//! Wilson weight, and Golub-Welsch Gauss rules for the classical weights.
//! Singular kernel factors like (1-x)^{-nu} are folded into the Gauss
//! exponents rather than sampled.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansions::{coefficient, lhs_eval, CoeffRequest, IdentityId};
use crate::hyperseries::{hyp, phi, HypSpec, PhiSpec};
use crate::polyfamilies::{poly_sweep, Family, PolySpec};
use crate::qcore::gamma::{gamma, lngamma};
use crate::qcore::{
    c64, cr, pochhammer_finite, qpoch_finite, qpoch_finite_many, qpoch_infinite,
    qpoch_infinite_many, C64, QBase, TruncationPolicy,
};
use crate::verifier::{Agg, VerificationReport, RESIDUAL_FLOOR};

/// A polynomial family whose parameters sit inside the positive-weight
/// region, so the orthogonality measure below is a genuine weight.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    spec: PolySpec,
}

impl WeightSpec {
    pub fn new(spec: PolySpec) -> Result<WeightSpec> {
        if spec.params.iter().any(|p| p.im != 0.0) {
            return Err(Error::DomainViolation(
                "weight parameters must be real".into(),
            ));
        }
        if let Some(q) = spec.q {
            if !q.is_real() || q.value().re <= 0.0 {
                return Err(Error::DomainViolation(
                    "weights need a real base q in (0, 1)".into(),
                ));
            }
        }
        let p: Vec<f64> = spec.params.iter().map(|v| v.re).collect();
        match spec.family {
            Family::AskeyWilson => {
                if p.iter().any(|a| a.abs() >= 1.0) {
                    return Err(Error::DomainViolation(
                        "Askey-Wilson weight needs max |a_i| < 1".into(),
                    ));
                }
            }
            Family::CqJacobi => {
                if !(0.0 < p[0] && p[0] < 1.0 && 0.0 < p[1] && p[1] < 1.0) {
                    return Err(Error::DomainViolation(
                        "continuous q-Jacobi weight needs alpha, gamma in (0, 1)".into(),
                    ));
                }
            }
            Family::CqUltraspherical => {
                if p[0].abs() >= 1.0 {
                    return Err(Error::DomainViolation(
                        "ultraspherical weight needs |beta| < 1".into(),
                    ));
                }
            }
            Family::CqHermite | Family::CqLegendre | Family::ChebyshevT | Family::Legendre => {}
            Family::Wilson => {
                if p.iter().any(|a| *a <= 0.0) {
                    return Err(Error::DomainViolation(
                        "Wilson weight needs a_i > 0".into(),
                    ));
                }
            }
            Family::Jacobi => {
                if p[0] <= -1.0 || p[1] <= -1.0 {
                    return Err(Error::DomainViolation(
                        "Jacobi weight needs alpha, beta > -1".into(),
                    ));
                }
            }
            Family::Gegenbauer => {
                if p[0] <= -0.5 || p[0] == 0.0 {
                    return Err(Error::DomainViolation(
                        "Gegenbauer weight needs mu > -1/2 and mu != 0".into(),
                    ));
                }
            }
            Family::Laguerre => {
                if p[0] <= -1.0 {
                    return Err(Error::DomainViolation(
                        "Laguerre weight needs alpha > -1".into(),
                    ));
                }
            }
        }
        Ok(WeightSpec { spec })
    }

    pub fn spec(&self) -> &PolySpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    fn q(&self) -> QBase {
        self.spec.q.expect("validated q-family weight")
    }

    fn p(&self, i: usize) -> f64 {
        self.spec.params[i].re
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub nodes_used: u32,
    /// Node-doubling stability estimate, relative to the larger of the
    /// integral and the integrand's surviving mass.
    pub est_error: f64,
}

/// The weight density at x in the variable its rule integrates: theta-space
/// densities for the cosine families (x = cos theta), x-space densities for
/// the classical families, the x > 0 density for Wilson.
pub fn weight_eval(w: &WeightSpec, x: f64, pol: &TruncationPolicy) -> Result<f64> {
    let open_interval = |x: f64| -> Result<()> {
        if -1.0 < x && x < 1.0 {
            Ok(())
        } else {
            Err(Error::DomainViolation(format!(
                "weight argument must lie in (-1, 1), got {x}"
            )))
        }
    };
    match w.family() {
        Family::AskeyWilson => {
            open_interval(x)?;
            let bases: Vec<C64> = (0..4).map(|i| cr(w.p(i))).collect();
            cosine_ratio(x, w.q(), &bases, w.q(), pol)
        }
        Family::CqJacobi => {
            // denominator products run in base q^{1/2}
            let qh = QBase::real(w.q().value().re.sqrt())?;
            open_interval(x)?;
            let bases = vec![cr(w.p(0).sqrt()), cr(-w.p(1).sqrt())];
            cosine_ratio(x, w.q(), &bases, qh, pol)
        }
        Family::CqUltraspherical | Family::CqHermite | Family::CqLegendre => {
            open_interval(x)?;
            let beta = match w.family() {
                Family::CqUltraspherical => cr(w.p(0)),
                Family::CqHermite => cr(0.0),
                _ => cr(w.q().value().re.sqrt()),
            };
            let e2 = {
                let eip = c64(x, (1.0 - x * x).sqrt());
                eip * eip
            };
            let num = qpoch_infinite(e2, w.q(), pol);
            let den = qpoch_infinite(beta * e2, w.q(), pol);
            if !(num.converged && den.converged) {
                return Err(Error::NonConvergent("weight product".into()));
            }
            if den.value.norm() < pol.abs_floor {
                return Err(Error::DivisionByVanishingProduct(
                    "weight denominator product".into(),
                ));
            }
            Ok((num.value / den.value).norm_sqr())
        }
        Family::Wilson => {
            if x <= 0.0 {
                return Err(Error::DomainViolation(format!(
                    "Wilson weight needs x > 0, got {x}"
                )));
            }
            // log space: 1/|Gamma(2ix)|^2 alone grows like e^{2 pi x}
            let mut s = cr(0.0);
            for i in 0..4 {
                s += lngamma(c64(w.p(i), x))?;
            }
            s -= lngamma(c64(0.0, 2.0 * x))?;
            Ok((2.0 * s.re).exp())
        }
        Family::Jacobi => {
            open_interval(x)?;
            Ok((1.0 - x).powf(w.p(0)) * (1.0 + x).powf(w.p(1)))
        }
        Family::Gegenbauer => {
            open_interval(x)?;
            Ok((1.0 - x * x).powf(w.p(0) - 0.5))
        }
        Family::ChebyshevT => {
            open_interval(x)?;
            Ok(1.0 / (1.0 - x * x).sqrt())
        }
        Family::Legendre => {
            open_interval(x)?;
            Ok(1.0)
        }
        Family::Laguerre => {
            if x <= 0.0 {
                return Err(Error::DomainViolation(format!(
                    "Laguerre weight needs x > 0, got {x}"
                )));
            }
            Ok(x.powf(w.p(0)) * (-x).exp())
        }
    }
}

/// |(e^{2 i theta}; q)_inf|^2 / prod_i |(b_i e^{i theta}; qden)_inf|^2 at
/// x = cos theta.
fn cosine_ratio(x: f64, q: QBase, bases: &[C64], qden: QBase, pol: &TruncationPolicy) -> Result<f64> {
    let eip = c64(x, (1.0 - x * x).sqrt());
    let num = qpoch_infinite(eip * eip, q, pol);
    let terms: Vec<C64> = bases.iter().map(|&b| b * eip).collect();
    let den = qpoch_infinite_many(&terms, qden, pol);
    if !(num.converged && den.converged) {
        return Err(Error::NonConvergent("weight product".into()));
    }
    if den.value.norm() < pol.abs_floor {
        return Err(Error::DivisionByVanishingProduct(
            "weight denominator product".into(),
        ));
    }
    Ok((num.value / den.value).norm_sqr())
}

/// (integral, integral of |integrand|) at one node count.
type Quad = (f64, f64);

fn pairwise(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise(&v[..n / 2]) + pairwise(&v[n / 2..]),
    }
}

/// Equispaced trapezoid on (0, upper) for integrands vanishing at both
/// ends; spectral for the analytic densities integrated here.
fn trapezoid_open(g: &dyn Fn(f64) -> Result<f64>, upper: f64, n: u32) -> Result<Quad> {
    let h = upper / n as f64;
    let mut vals = Vec::with_capacity(n as usize - 1);
    for j in 1..n {
        vals.push(g(j as f64 * h)?);
    }
    let abs: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
    Ok((pairwise(&vals) * h, pairwise(&abs) * h))
}

const REL_STABLE: f64 = 1e-10;
// below this fraction of the integrand mass a value counts as numerically
// zero (off-diagonal orthogonality integrals live here)
const MASS_FLOOR: f64 = 1e-13;

fn double_until_stable(
    eval: &dyn Fn(u32) -> Result<Quad>,
    start: u32,
    max: u32,
) -> Result<(IntegralResult, f64)> {
    let mut n = start.max(8);
    let (mut prev, _) = eval(n)?;
    while n < max {
        n *= 2;
        let (next, mass) = eval(n)?;
        let diff = (next - prev).abs();
        // integrals that vanish by orthogonality wobble at roundoff level;
        // judge those against the integrand mass instead of the value
        if diff <= (REL_STABLE * next.abs()).max(MASS_FLOOR * mass) {
            let est = diff / next.abs().max(mass).max(f64::MIN_POSITIVE);
            return Ok((
                IntegralResult {
                    value: next,
                    nodes_used: n,
                    est_error: est,
                },
                mass,
            ));
        }
        prev = next;
    }
    Err(Error::NonConvergent(format!(
        "integral failed node-doubling stabilization by {n} nodes"
    )))
}

fn real_gamma(x: f64) -> Result<f64> {
    Ok(gamma(cr(x))?.re)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Nodes and weights from the symmetric tridiagonal form of the monic
/// three-term recurrence; weights are mu0 times squared first eigenvector
/// components.
fn golub_welsch(diag: Vec<f64>, off_sq: Vec<f64>, mu0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (k, d) in diag.iter().enumerate() {
        m[(k, k)] = *d;
    }
    for (k, b) in off_sq.iter().enumerate() {
        if !(*b > 0.0) {
            return Err(Error::DomainViolation(
                "recurrence off-diagonal must be positive".into(),
            ));
        }
        let s = b.sqrt();
        m[(k, k + 1)] = s;
        m[(k + 1, k)] = s;
    }
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    Ok(pairs.into_iter().unzip())
}

/// Gauss rule for (1-x)^alpha (1+x)^beta on (-1, 1), alpha, beta > -1.
pub fn gauss_jacobi(n: u32, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::DomainViolation("Gauss rule needs n >= 1".into()));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::DomainViolation(format!(
            "Gauss-Jacobi exponents must exceed -1, got ({alpha}, {beta})"
        )));
    }
    let s = alpha + beta;
    let nn = n as usize;
    let mut diag = Vec::with_capacity(nn);
    let mut off = Vec::with_capacity(nn.saturating_sub(1));
    diag.push((beta - alpha) / (s + 2.0));
    for k in 1..nn {
        let kf = k as f64;
        let d = 2.0 * kf + s;
        diag.push((beta * beta - alpha * alpha) / (d * (d + 2.0)));
        // k = 1 is written separately: the generic form is 0/0 at s = -1
        off.push(if k == 1 {
            4.0 * (alpha + 1.0) * (beta + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + s) / (d * d * (d + 1.0) * (d - 1.0))
        });
    }
    let mu0 = 2f64.powf(s + 1.0) * real_gamma(alpha + 1.0)? * real_gamma(beta + 1.0)?
        / real_gamma(s + 2.0)?;
    golub_welsch(diag, off, mu0)
}

/// Gauss rule for x^alpha e^{-x} on (0, inf), alpha > -1.
pub fn gauss_laguerre(n: u32, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::DomainViolation("Gauss rule needs n >= 1".into()));
    }
    if alpha <= -1.0 {
        return Err(Error::DomainViolation(format!(
            "Gauss-Laguerre exponent must exceed -1, got {alpha}"
        )));
    }
    let nn = n as usize;
    let diag: Vec<f64> = (0..nn).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..nn).map(|k| k as f64 * (k as f64 + alpha)).collect();
    golub_welsch(diag, off, real_gamma(alpha + 1.0)?)
}

fn gauss_quad(f: &dyn Fn(f64) -> Result<f64>, nodes: &[f64], weights: &[f64]) -> Result<Quad> {
    let mut vals = Vec::with_capacity(nodes.len());
    for (&x, &wt) in nodes.iter().zip(weights) {
        vals.push(wt * f(x)?);
    }
    let abs: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
    Ok((pairwise(&vals), pairwise(&abs)))
}

fn gauss_jacobi_weighted(
    f: &dyn Fn(f64) -> Result<f64>,
    alpha: f64,
    beta: f64,
    start: u32,
) -> Result<(IntegralResult, f64)> {
    double_until_stable(
        &|n| {
            let (x, wt) = gauss_jacobi(n, alpha, beta)?;
            gauss_quad(f, &x, &wt)
        },
        start.clamp(8, 256),
        1 << 9,
    )
}

fn gauss_laguerre_weighted(
    f: &dyn Fn(f64) -> Result<f64>,
    alpha: f64,
    start: u32,
) -> Result<(IntegralResult, f64)> {
    double_until_stable(
        &|n| {
            let (x, wt) = gauss_laguerre(n, alpha)?;
            gauss_quad(f, &x, &wt)
        },
        start.clamp(8, 256),
        1 << 9,
    )
}

/// Integrate f against (1-x)^alpha (1+x)^beta, exponents absorbed into the
/// rule so integrable endpoint singularities cost nothing.
pub fn integrate_gauss_jacobi(
    f: &dyn Fn(f64) -> Result<f64>,
    alpha: f64,
    beta: f64,
    nodes: u32,
) -> Result<IntegralResult> {
    Ok(gauss_jacobi_weighted(f, alpha, beta, nodes)?.0)
}

/// Integrate f against x^alpha e^{-x} on (0, inf).
pub fn integrate_gauss_laguerre(
    f: &dyn Fn(f64) -> Result<f64>,
    alpha: f64,
    nodes: u32,
) -> Result<IntegralResult> {
    Ok(gauss_laguerre_weighted(f, alpha, nodes)?.0)
}

fn wilson_cutoff(w: &WeightSpec, pol: &TruncationPolicy) -> Result<f64> {
    let mut x = 40.0;
    while x <= 400.0 {
        if weight_eval(w, x, pol)? < 1e-280 {
            return Ok(x);
        }
        x += 20.0;
    }
    Err(Error::NonConvergent(
        "Wilson weight did not decay below threshold by x = 400".into(),
    ))
}

fn default_nodes(family: Family) -> u32 {
    match family {
        Family::Wilson => 2048,
        f if f.is_q_family() => 256,
        _ => 32,
    }
}

fn integrate_weighted(
    f: &dyn Fn(f64) -> Result<f64>,
    w: &WeightSpec,
    nodes: u32,
) -> Result<(IntegralResult, f64)> {
    let pol = TruncationPolicy::default();
    match w.family() {
        Family::AskeyWilson
        | Family::CqJacobi
        | Family::CqUltraspherical
        | Family::CqHermite
        | Family::CqLegendre => {
            let g = |theta: f64| -> Result<f64> {
                let x = theta.cos();
                Ok(f(x)? * weight_eval(w, x, &pol)?)
            };
            double_until_stable(&|n| trapezoid_open(&g, PI, n), nodes.max(64), 1 << 15)
        }
        Family::Wilson => {
            let upper = wilson_cutoff(w, &pol)?;
            let g = |x: f64| -> Result<f64> { Ok(f(x)? * weight_eval(w, x, &pol)?) };
            double_until_stable(&|n| trapezoid_open(&g, upper, n), nodes.max(2048), 1 << 17)
        }
        Family::Jacobi | Family::Gegenbauer | Family::ChebyshevT | Family::Legendre => {
            let (alpha, beta) = match w.family() {
                Family::Jacobi => (w.p(0), w.p(1)),
                Family::Gegenbauer => (w.p(0) - 0.5, w.p(0) - 0.5),
                Family::ChebyshevT => (-0.5, -0.5),
                _ => (0.0, 0.0),
            };
            gauss_jacobi_weighted(f, alpha, beta, nodes)
        }
        Family::Laguerre => gauss_laguerre_weighted(f, w.p(0), nodes),
    }
}

/// Integrate f against the weight over its orthogonality domain. `nodes`
/// seeds the rule; the count then doubles until two consecutive levels
/// agree.
pub fn integrate_interval(
    f: &dyn Fn(f64) -> Result<f64>,
    w: &WeightSpec,
    nodes: u32,
) -> Result<IntegralResult> {
    Ok(integrate_weighted(f, w, nodes)?.0)
}

/// Closed-form diagonal of the orthogonality form: the integral of p_n^2
/// against the family weight over the domain integrate_interval uses.
pub fn norm_squared(spec: &PolySpec, n: u32) -> Result<f64> {
    let w = WeightSpec::new(spec.clone())?;
    norm_squared_checked(&w, n)
}

fn norm_squared_checked(w: &WeightSpec, n: u32) -> Result<f64> {
    let pol = TruncationPolicy::default();
    let ni = n as i32;
    match w.family() {
        Family::AskeyWilson => {
            let q = w.q();
            let a: Vec<C64> = (0..4).map(|i| cr(w.p(i))).collect();
            let abcd = a[0] * a[1] * a[2] * a[3];
            let qn = q.powi(ni);
            let head = qpoch_finite(abcd * q.powi(ni - 1), q, n);
            let num = qpoch_infinite(abcd * qn * qn, q, &pol);
            let mut den = qpoch_infinite(q.value() * qn, q, &pol);
            let mut d = den.value;
            let mut conv = num.converged && den.converged;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    den = qpoch_infinite(a[i] * a[j] * qn, q, &pol);
                    conv &= den.converged;
                    d *= den.value;
                }
            }
            if !conv {
                return Err(Error::NonConvergent("norm product".into()));
            }
            Ok(2.0 * PI * (head * num.value / d).re)
        }
        Family::CqJacobi => {
            let q = w.q();
            let qv = q.value().re;
            let (al, ga) = (w.p(0), w.p(1));
            let sq = qv.sqrt();
            let sag = (al * ga).sqrt();
            let num_f = qpoch_finite_many(&[cr(sq * al), cr(sq * ga), cr(-qv * sag)], q, n);
            let num_i = qpoch_infinite_many(&[cr(sq * sag), cr(qv * sag)], q, &pol);
            let den_f = qpoch_finite_many(&[cr(qv), cr(al * ga), cr(-sag)], q, n);
            let den_i = qpoch_infinite_many(
                &[cr(qv), cr(sq * al), cr(sq * ga), cr(-sag), cr(-sq * sag)],
                q,
                &pol,
            );
            if !(num_i.converged && den_i.converged) {
                return Err(Error::NonConvergent("norm product".into()));
            }
            let swing = (1.0 - al * ga) / (1.0 - qv.powi(2 * ni) * al * ga);
            let g = al.powi(ni) * swing * (num_f * num_i.value / (den_f * den_i.value)).re;
            Ok(2.0 * PI * g)
        }
        Family::CqUltraspherical => ultra_norm(w.p(0), w.q(), n, &pol),
        Family::CqHermite => {
            let q = w.q();
            let inf = qpoch_infinite(q.value(), q, &pol);
            if !inf.converged {
                return Err(Error::NonConvergent("norm product".into()));
            }
            Ok(2.0 * PI * qpoch_finite(q.value(), q, n).re / inf.value.re)
        }
        Family::CqLegendre => {
            let q = w.q();
            let qv = q.value().re;
            Ok(qv.powf(n as f64 / 2.0) * ultra_norm(qv.sqrt(), q, n, &pol)?)
        }
        Family::Wilson => {
            let a = [w.p(0), w.p(1), w.p(2), w.p(3)];
            let asum: f64 = a.iter().sum();
            let mut num = 2.0 * PI * factorial(n);
            for i in 0..4 {
                for j in (i + 1)..4 {
                    num *= real_gamma(a[i] + a[j] + n as f64)?;
                }
            }
            Ok(num / ((asum - 1.0 + 2.0 * n as f64) * real_gamma(asum - 1.0 + n as f64)?))
        }
        Family::Jacobi => {
            let (al, be) = (w.p(0), w.p(1));
            let s = al + be;
            Ok(2f64.powf(s + 1.0) / (2.0 * n as f64 + s + 1.0)
                * real_gamma(n as f64 + al + 1.0)?
                * real_gamma(n as f64 + be + 1.0)?
                / (real_gamma(n as f64 + s + 1.0)? * factorial(n)))
        }
        Family::Gegenbauer => {
            let mu = w.p(0);
            Ok(PI * 2f64.powf(1.0 - 2.0 * mu) * real_gamma(n as f64 + 2.0 * mu)?
                / (factorial(n) * (n as f64 + mu) * real_gamma(mu)?.powi(2)))
        }
        Family::ChebyshevT => Ok(if n == 0 { PI } else { PI / 2.0 }),
        Family::Legendre => Ok(2.0 / (2.0 * n as f64 + 1.0)),
        Family::Laguerre => Ok(real_gamma(n as f64 + w.p(0) + 1.0)? / factorial(n)),
    }
}

fn ultra_norm(beta: f64, q: QBase, n: u32, pol: &TruncationPolicy) -> Result<f64> {
    let qv = q.value().re;
    let num_i = qpoch_infinite_many(&[cr(beta), cr(qv * beta)], q, pol);
    let den_i = qpoch_infinite_many(&[cr(beta * beta), cr(qv)], q, pol);
    if !(num_i.converged && den_i.converged) {
        return Err(Error::NonConvergent("norm product".into()));
    }
    let num = (1.0 - beta) * qpoch_finite(cr(beta * beta), q, n).re * num_i.value.re;
    let den = (1.0 - beta * qv.powi(n as i32)) * qpoch_finite(cr(qv), q, n).re * den_i.value.re;
    Ok(2.0 * PI * num / den)
}

/// Quadrature of p_m p_n against the weight, judged against the closed-form
/// norms: off-diagonal entries must vanish relative to sqrt(h_m h_n), the
/// diagonal must match h_n.
pub fn verify_orthogonality(w: &WeightSpec, m: u32, n: u32) -> Result<VerificationReport> {
    const DIAG_TOL: f64 = 1e-8;
    const OFF_TOL: f64 = 1e-10;
    if m.max(n) > 12 {
        return Err(Error::DomainViolation(
            "orthogonality check supports degrees up to 12".into(),
        ));
    }
    let deg = m.max(n);
    let spec = w.spec().clone();
    let f = |x: f64| -> Result<f64> {
        let vals = poly_sweep(&spec, deg, cr(x))?;
        Ok((vals[m as usize] * vals[n as usize]).re)
    };
    let (integral, _) = integrate_weighted(&f, w, default_nodes(w.family()))?;
    let hm = norm_squared_checked(w, m)?;
    let hn = norm_squared_checked(w, n)?;
    let (rel, tol) = if m == n {
        ((integral.value - hn).abs() / hn.abs().max(RESIDUAL_FLOOR), DIAG_TOL)
    } else {
        (
            integral.value.abs() / (hm * hn).sqrt().max(RESIDUAL_FLOOR),
            OFF_TOL,
        )
    };
    let mut point = BTreeMap::new();
    for (i, pv) in w.spec().params.iter().enumerate() {
        point.insert(format!("p{i}"), *pv);
    }
    if let Some(q) = w.spec().q {
        point.insert("q".into(), q.value());
    }
    point.insert("m".into(), cr(m as f64));
    point.insert("n".into(), cr(n as f64));
    let mut agg = Agg::new(integral.nodes_used);
    agg.record(rel, true, &point);
    Ok(agg.finish(format!("orthogonality_{}", w.family().name()), tol))
}

/// The integral forms: projecting a generating function onto one polynomial
/// recovers its expansion coefficient times the norm, in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corollary {
    AwInt,
    WilsonInt,
    CqJacobiInt,
    CqUltraInt,
    GegenStieltjes,
    Jacobi1mxInt,
    Gegen1mxInt,
    Cheby1mxInt,
    Laguerre1mxInt,
}

pub const ALL_COROLLARIES: [Corollary; 9] = [
    Corollary::AwInt,
    Corollary::WilsonInt,
    Corollary::CqJacobiInt,
    Corollary::CqUltraInt,
    Corollary::GegenStieltjes,
    Corollary::Jacobi1mxInt,
    Corollary::Gegen1mxInt,
    Corollary::Cheby1mxInt,
    Corollary::Laguerre1mxInt,
];

impl Corollary {
    pub fn name(self) -> &'static str {
        match self {
            Corollary::AwInt => "aw_int",
            Corollary::WilsonInt => "wilson_int",
            Corollary::CqJacobiInt => "cqjacobi_int",
            Corollary::CqUltraInt => "cqultra_int",
            Corollary::GegenStieltjes => "gegen_stieltjes",
            Corollary::Jacobi1mxInt => "jacobi_1mx_int",
            Corollary::Gegen1mxInt => "gegen_1mx_int",
            Corollary::Cheby1mxInt => "cheby_1mx_int",
            Corollary::Laguerre1mxInt => "laguerre_1mx_int",
        }
    }

    pub fn parse(s: &str) -> Option<Corollary> {
        let canon = match s {
            "aw" => "aw_int",
            "wilson" => "wilson_int",
            "cqjacobi" => "cqjacobi_int",
            "cqultra" => "cqultra_int",
            "jacobi_1mx" => "jacobi_1mx_int",
            "gegen_1mx" => "gegen_1mx_int",
            "cheby_1mx" => "cheby_1mx_int",
            "laguerre_1mx" => "laguerre_1mx_int",
            other => other,
        };
        ALL_COROLLARIES.iter().copied().find(|c| c.name() == canon)
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Corollary::AwInt => &["t", "beta", "a1", "a2", "a3", "a4", "q"],
            Corollary::WilsonInt => &["u", "t", "a1", "a2", "a3", "a4"],
            Corollary::CqJacobiInt => &["t", "beta", "alpha", "gamma", "q"],
            Corollary::CqUltraInt => &["t", "beta", "gamma", "q"],
            Corollary::GegenStieltjes => &["t", "lambda", "mu"],
            Corollary::Jacobi1mxInt => &["nu", "alpha", "beta"],
            Corollary::Gegen1mxInt => &["nu", "mu"],
            Corollary::Cheby1mxInt => &["nu"],
            Corollary::Laguerre1mxInt => &["nu", "alpha"],
        }
    }
}

/// Compare the quadrature of a generating function against one polynomial
/// with the closed-form right side. Zero right sides (terminated
/// coefficients, nu = 0) are judged in absolute terms against the
/// integrand's mass.
pub fn verify_integral_corollary(
    cor: Corollary,
    params: &BTreeMap<String, C64>,
    n: u32,
) -> Result<VerificationReport> {
    const TOL: f64 = 1e-8;
    for name in cor.param_names() {
        if !params.contains_key(*name) {
            return Err(Error::DomainViolation(format!(
                "{} needs parameter `{name}`",
                cor.name()
            )));
        }
    }
    let real = |k: &str| -> Result<f64> {
        let v = params[k];
        if v.im != 0.0 {
            return Err(Error::DomainViolation(format!(
                "{} needs real `{k}`",
                cor.name()
            )));
        }
        Ok(v.re)
    };
    let pol = TruncationPolicy::default();
    let (integral, mass, rhs) = match cor {
        Corollary::AwInt => {
            let q = QBase::new(params["q"])?;
            let spec = PolySpec::new(
                Family::AskeyWilson,
                vec![params["a1"], params["a2"], params["a3"], params["a4"]],
                Some(q),
            )?;
            let w = WeightSpec::new(spec.clone())?;
            let c = coefficient(&CoeffRequest::new(
                IdentityId::AW_ROGERS,
                n,
                params.clone(),
                Some(q),
            )?)?;
            let rhs = norm_squared_checked(&w, n)? * c.value.re;
            let f = |x: f64| -> Result<f64> {
                let l = lhs_eval(IdentityId::AW_ROGERS, params, Some(q), cr(x), &pol)?;
                let p = poly_sweep(&spec, n, cr(x))?;
                Ok((l.value * p[n as usize]).re)
            };
            let (ir, mass) = integrate_weighted(&f, &w, default_nodes(Family::AskeyWilson))?;
            (ir, mass, rhs)
        }
        Corollary::WilsonInt => {
            let spec = PolySpec::new(
                Family::Wilson,
                vec![params["a1"], params["a2"], params["a3"], params["a4"]],
                None,
            )?;
            let w = WeightSpec::new(spec.clone())?;
            let c = coefficient(&CoeffRequest::new(
                IdentityId::WILSON_LIMIT,
                n,
                params.clone(),
                None,
            )?)?;
            let rhs = norm_squared_checked(&w, n)? * c.value.re;
            let f = |x: f64| -> Result<f64> {
                let l = lhs_eval(IdentityId::WILSON_LIMIT, params, None, cr(x), &pol)?;
                let p = poly_sweep(&spec, n, cr(x))?;
                Ok((l.value * p[n as usize]).re)
            };
            let (ir, mass) = integrate_weighted(&f, &w, default_nodes(Family::Wilson))?;
            (ir, mass, rhs)
        }
        Corollary::CqJacobiInt => {
            let q = QBase::new(params["q"])?;
            let spec = PolySpec::new(
                Family::CqJacobi,
                vec![params["alpha"], params["gamma"]],
                Some(q),
            )?;
            let w = WeightSpec::new(spec.clone())?;
            let c = coefficient(&CoeffRequest::new(
                IdentityId::CQJACOBI_ROGERS,
                n,
                params.clone(),
                Some(q),
            )?)?;
            let rhs = norm_squared_checked(&w, n)? * c.value.re;
            let f = |x: f64| -> Result<f64> {
                let l = lhs_eval(IdentityId::CQJACOBI_ROGERS, params, Some(q), cr(x), &pol)?;
                let p = poly_sweep(&spec, n, cr(x))?;
                Ok((l.value * p[n as usize]).re)
            };
            let (ir, mass) = integrate_weighted(&f, &w, default_nodes(Family::CqJacobi))?;
            (ir, mass, rhs)
        }
        Corollary::CqUltraInt => {
            let q = QBase::new(params["q"])?;
            let qv = q.value();
            let (t, b, g) = (params["t"], params["beta"], params["gamma"]);
            if g.norm() < pol.abs_floor {
                return Err(Error::DomainViolation(
                    "cqultra_int needs gamma != 0".into(),
                ));
            }
            let spec = PolySpec::new(Family::CqUltraspherical, vec![g], Some(q))?;
            let w = WeightSpec::new(spec.clone())?;
            let num_i = qpoch_infinite_many(&[g, g * qv], q, &pol);
            let den_i = qpoch_infinite_many(&[g * g, qv], q, &pol);
            let head = qpoch_finite(b, q, n) * qpoch_finite(g * g, q, n)
                / (qpoch_finite(qv, q, n) * qpoch_finite(qv * g, q, n));
            let ph = phi(
                &PhiSpec::new(
                    vec![b / g, b * q.powi(n as i32)],
                    vec![g * q.powi(n as i32 + 1)],
                    q,
                    g * t * t,
                ),
                &pol,
            )?;
            let rhs = (2.0 * PI * num_i.value / den_i.value * head * ph.value
                * t.powi(n as i32))
            .re;
            let f = |x: f64| -> Result<f64> {
                let l = lhs_eval(IdentityId::ROGERS_GAMMA, params, Some(q), cr(x), &pol)?;
                let p = poly_sweep(&spec, n, cr(x))?;
                Ok((l.value * p[n as usize]).re)
            };
            let (ir, mass) =
                integrate_weighted(&f, &w, default_nodes(Family::CqUltraspherical))?;
            (ir, mass, rhs)
        }
        Corollary::GegenStieltjes => {
            let (t, lam, mu) = (real("t")?, real("lambda")?, real("mu")?);
            if t.abs() >= 1.0 {
                return Err(Error::DomainViolation(
                    "gegen_stieltjes needs |t| < 1".into(),
                ));
            }
            let spec = PolySpec::gegenbauer(mu)?;
            let f = |x: f64| -> Result<f64> {
                let p = poly_sweep(&spec, n, cr(x))?;
                Ok((1.0 + t * t - 2.0 * t * x).powf(-lam) * p[n as usize].re)
            };
            let (ir, mass) = gauss_jacobi_weighted(&f, mu - 0.5, mu - 0.5, 32)?;
            let tail = hyp(
                &HypSpec::new(
                    vec![cr(lam - mu), cr(lam + n as f64)],
                    vec![cr(mu + n as f64 + 1.0)],
                    cr(t * t),
                ),
                &pol,
            )?;
            let rhs = PI.sqrt() * real_gamma(mu + 0.5)? / real_gamma(mu + 1.0)?
                * pochhammer_finite(cr(lam), n).re
                * pochhammer_finite(cr(2.0 * mu), n).re
                / (pochhammer_finite(cr(mu + 1.0), n).re * factorial(n))
                * t.powi(n as i32)
                * tail.value.re;
            (ir, mass, rhs)
        }
        Corollary::Jacobi1mxInt => {
            let (nu, al, be) = (real("nu")?, real("alpha")?, real("beta")?);
            if nu >= al + 1.0 {
                return Err(Error::DomainViolation(
                    "jacobi_1mx_int needs nu < alpha + 1".into(),
                ));
            }
            let spec = PolySpec::jacobi(al, be)?;
            let f = |x: f64| -> Result<f64> { Ok(poly_sweep(&spec, n, cr(x))?[n as usize].re) };
            let (ir, mass) = gauss_jacobi_weighted(&f, al - nu, be, 32)?;
            let rhs = 2f64.powf(al + be + 1.0 - nu) * real_gamma(al + 1.0 - nu)?
                * pochhammer_finite(cr(nu), n).re
                * real_gamma(be + 1.0 + n as f64)?
                / (factorial(n) * real_gamma(al + be + 2.0 - nu + n as f64)?);
            (ir, mass, rhs)
        }
        Corollary::Gegen1mxInt => {
            let (nu, mu) = (real("nu")?, real("mu")?);
            if nu >= mu + 0.5 {
                return Err(Error::DomainViolation(
                    "gegen_1mx_int needs nu < mu + 1/2".into(),
                ));
            }
            let spec = PolySpec::gegenbauer(mu)?;
            let f = |x: f64| -> Result<f64> { Ok(poly_sweep(&spec, n, cr(x))?[n as usize].re) };
            let (ir, mass) = gauss_jacobi_weighted(&f, mu - 0.5 - nu, mu - 0.5, 32)?;
            let rhs = 2f64.powf(1.0 - nu) * PI.sqrt() * real_gamma(mu + 0.5 - nu)?
                * pochhammer_finite(cr(nu), n).re
                * real_gamma(2.0 * mu + n as f64)?
                / (real_gamma(mu)? * factorial(n) * real_gamma(2.0 * mu + 1.0 - nu + n as f64)?);
            (ir, mass, rhs)
        }
        Corollary::Cheby1mxInt => {
            let nu = real("nu")?;
            if nu >= 0.5 {
                return Err(Error::DomainViolation(
                    "cheby_1mx_int needs nu < 1/2".into(),
                ));
            }
            let spec = PolySpec::chebyshev_t()?;
            let f = |x: f64| -> Result<f64> { Ok(poly_sweep(&spec, n, cr(x))?[n as usize].re) };
            let (ir, mass) = gauss_jacobi_weighted(&f, -0.5 - nu, -0.5, 32)?;
            let rhs = PI.sqrt() * real_gamma(0.5 - nu)? * pochhammer_finite(cr(nu), n).re
                / (2f64.powf(nu) * real_gamma(1.0 - nu + n as f64)?);
            (ir, mass, rhs)
        }
        Corollary::Laguerre1mxInt => {
            let (nu, al) = (real("nu")?, real("alpha")?);
            if nu >= al + 1.0 {
                return Err(Error::DomainViolation(
                    "laguerre_1mx_int needs nu < alpha + 1".into(),
                ));
            }
            let spec = PolySpec::laguerre(al)?;
            let f = |x: f64| -> Result<f64> { Ok(poly_sweep(&spec, n, cr(x))?[n as usize].re) };
            let (ir, mass) = gauss_laguerre_weighted(&f, al - nu, 32)?;
            let rhs = real_gamma(al + 1.0 - nu)? * pochhammer_finite(cr(nu), n).re / factorial(n);
            (ir, mass, rhs)
        }
    };
    let denom = if rhs.abs() > 1e-20 {
        rhs.abs()
    } else {
        mass.max(RESIDUAL_FLOOR)
    };
    let rel = (integral.value - rhs).abs() / denom;
    let mut point = params.clone();
    point.insert("n".into(), cr(n as f64));
    let mut agg = Agg::new(integral.nodes_used);
    agg.record(rel, true, &point);
    Ok(agg.finish(cor.name().into(), TOL))
}
