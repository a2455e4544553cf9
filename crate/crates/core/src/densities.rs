//! Norm-dependent density families P(Tr H^2), their normalization,
//! moments, the angular-integral constant and the Fourier transform.
//!
//! Every family is written as P(u) = a0 * shape(u) with the normalization
//! a0 fixed by the zeroth moment
//!   M_nu = (pi/2)^{mu/2} 2^{N/2} / Gamma(mu/2)
//!          * Int_0^inf u^{nu + mu/2 - 1} P(u) du,   M_0 = 1,
//! never set by the user. The fixed-trace family is a point mass and
//! refuses pointwise evaluation; transforms, moments and sampling handle
//! it in closed form.

use crate::error::{Error, Result};
use crate::matrix::{mu, Beta};
use crate::quad::{self, QuadratureSpec};
use crate::specfun::{self, ln_gamma};
use num_complex::Complex64;
use serde::Serialize;

/// Monotone (PCHIP) cubic interpolant over a nonnegative grid density,
/// zero outside the grid range.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    u: Vec<f64>,
    vals: Vec<f64>,
    slopes: Vec<f64>,
}

impl GridDensity {
    pub fn new(u: Vec<f64>, vals: Vec<f64>) -> Result<Self> {
        if u.len() != vals.len() || u.len() < 2 {
            return Err(Error::InvalidInput(
                "grid density needs matching u/value lists with at least two points".into(),
            ));
        }
        if u.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("grid abscissae must be strictly increasing".into()));
        }
        if u[0] < 0.0 {
            return Err(Error::InvalidInput("grid abscissae must be nonnegative".into()));
        }
        if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput("grid values must be finite and nonnegative".into()));
        }
        let slopes = pchip_slopes(&u, &vals);
        Ok(Self { u, vals, slopes })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.u.len();
        if x < self.u[0] || x > self.u[n - 1] {
            return 0.0;
        }
        let i = match self.u.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.u[i + 1] - self.u[i];
        let t = (x - self.u[i]) / h;
        let (y0, y1) = (self.vals[i], self.vals[i + 1]);
        let (d0, d1) = (self.slopes[i], self.slopes[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        (h00 * y0 + h01 * y1 + h * (h10 * d0 + h11 * d1)).max(0.0)
    }

    pub fn u_min(&self) -> f64 {
        self.u[0]
    }

    pub fn u_max(&self) -> f64 {
        *self.u.last().unwrap()
    }

    /// Fraction of the (mu-weighted) mass carried by the last tenth of the
    /// grid range: a crude tail diagnostic, since everything beyond the
    /// grid is truncated to zero.
    pub fn tail_mass_fraction(&self, p: f64) -> Result<f64> {
        let spec = QuadratureSpec::with_tols(1e-12, 1e-8);
        let cut = self.u_max() - 0.1 * (self.u_max() - self.u_min());
        let f = |u: f64| self.eval(u) * u.powf(p - 1.0);
        let total = quad::integrate_finite(&f, self.u_min(), self.u_max(), &spec)?;
        let tail = quad::integrate_finite(&f, cut, self.u_max(), &spec)?;
        if total.value <= 0.0 {
            return Err(Error::NonNormalizable("grid density has zero mass".into()));
        }
        Ok(tail.value / total.value)
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n];
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = pchip_end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = pchip_end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn pchip_end(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// The norm-dependent density families.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityFamily {
    /// P(u) = a0 exp(-beta u / 4 v^2); the Gaussian ensemble baseline.
    Gaussian { v: f64 },
    /// P(u) = a0 Theta(a1 - u); hard cutoff on the squared norm.
    BoundTrace { a1: f64 },
    /// P(u) = a0 delta(a1 - u); the squared norm is pinned to a1.
    FixedTrace { a1: f64 },
    /// P(u) = a0 u^m exp(-a1 u).
    GaussMonomial { a1: f64, m: u32 },
    /// P(u) = a0 exp(-a1 u - a2 u^2).
    GaussQuartic { a1: f64, a2: f64 },
    /// P(u) = a0 (1 + kappa u / Lambda)^{1/(1-q)} with
    /// Lambda = 1/(q-1) - mu/2 > 0.
    NonExtensive { q: f64, kappa: f64 },
    /// User-supplied tabulated density with zero extension.
    Grid(GridDensity),
}

impl DensityFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DensityFamily::Gaussian { .. } => "gaussian",
            DensityFamily::BoundTrace { .. } => "bound-trace",
            DensityFamily::FixedTrace { .. } => "fixed-trace",
            DensityFamily::GaussMonomial { .. } => "gauss-monomial",
            DensityFamily::GaussQuartic { .. } => "gauss-quartic",
            DensityFamily::NonExtensive { .. } => "non-extensive",
            DensityFamily::Grid(_) => "grid",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DensityFamily::Gaussian { v } => format!("gaussian(v={v})"),
            DensityFamily::BoundTrace { a1 } => format!("bound-trace(a1={a1})"),
            DensityFamily::FixedTrace { a1 } => format!("fixed-trace(a1={a1})"),
            DensityFamily::GaussMonomial { a1, m } => format!("gauss-monomial(a1={a1}, m={m})"),
            DensityFamily::GaussQuartic { a1, a2 } => format!("gauss-quartic(a1={a1}, a2={a2})"),
            DensityFamily::NonExtensive { q, kappa } => {
                format!("non-extensive(q={q}, kappa={kappa})")
            }
            DensityFamily::Grid(g) => format!("grid({} points)", g.u.len()),
        }
    }

    pub fn is_point_mass(&self) -> bool {
        matches!(self, DensityFamily::FixedTrace { .. })
    }

    /// Exponent Lambda = 1/(q-1) - mu/2 of the non-extensive family.
    pub fn lambda(&self, beta: Beta, n: usize) -> Option<f64> {
        match self {
            DensityFamily::NonExtensive { q, .. } => Some(1.0 / (q - 1.0) - 0.5 * mu(beta, n)),
            _ => None,
        }
    }

    /// Validate shape parameters against the symmetry class and dimension.
    pub fn validate(&self, beta: Beta, n: usize) -> Result<()> {
        let positive = |x: f64, name: &str| -> Result<()> {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive and finite, got {x}")))
            }
        };
        match self {
            DensityFamily::Gaussian { v } => positive(*v, "v"),
            DensityFamily::BoundTrace { a1 } | DensityFamily::FixedTrace { a1 } => {
                positive(*a1, "a1")
            }
            DensityFamily::GaussMonomial { a1, .. } => positive(*a1, "a1"),
            DensityFamily::GaussQuartic { a1, a2 } => {
                positive(*a1, "a1")?;
                positive(*a2, "a2")
            }
            DensityFamily::NonExtensive { q, kappa } => {
                positive(*kappa, "kappa")?;
                let m = mu(beta, n);
                let q_max = 1.0 + 2.0 / m;
                if !(*q > 1.0 && *q < q_max) {
                    return Err(Error::NonNormalizable(format!(
                        "non-extensive family needs 1 < q < 1 + 2/mu = {q_max} (mu = {m}), got q = {q}"
                    )));
                }
                Ok(())
            }
            DensityFamily::Grid(_) => Ok(()),
        }
    }

    /// Unnormalized shape(u) (P = a0 * shape). Point masses are refused.
    pub fn shape(&self, beta: Beta, n: usize, u: f64) -> Result<f64> {
        if u < 0.0 {
            return Ok(0.0);
        }
        match self {
            DensityFamily::Gaussian { v } => Ok((-beta.value() * u / (4.0 * v * v)).exp()),
            DensityFamily::BoundTrace { a1 } => Ok(if u <= *a1 { 1.0 } else { 0.0 }),
            DensityFamily::FixedTrace { .. } => Err(Error::PointMass),
            DensityFamily::GaussMonomial { a1, m } => {
                Ok(u.powi(*m as i32) * (-a1 * u).exp())
            }
            DensityFamily::GaussQuartic { a1, a2 } => Ok((-a1 * u - a2 * u * u).exp()),
            DensityFamily::NonExtensive { q, kappa } => {
                let lam = self.lambda(beta, n).unwrap();
                let base = 1.0 + kappa * u / lam;
                Ok(base.powf(1.0 / (1.0 - q)))
            }
            DensityFamily::Grid(g) => Ok(g.eval(u)),
        }
    }

    /// Upper endpoint of the u-support when it is bounded.
    pub fn support_upper(&self) -> Option<f64> {
        match self {
            DensityFamily::BoundTrace { a1 } | DensityFamily::FixedTrace { a1 } => Some(*a1),
            DensityFamily::Grid(g) => Some(g.u_max()),
            _ => None,
        }
    }

    /// Typical magnitude of u where the radial mass sits; used to steer
    /// quadrature splits and sampling grids.
    pub fn u_scale(&self, beta: Beta, n: usize) -> f64 {
        let m = mu(beta, n);
        match self {
            DensityFamily::Gaussian { v } => 2.0 * m * v * v / beta.value(),
            DensityFamily::BoundTrace { a1 } | DensityFamily::FixedTrace { a1 } => *a1,
            DensityFamily::GaussMonomial { a1, m: mm } => (*mm as f64 + 0.5 * m) / a1,
            DensityFamily::GaussQuartic { a1, a2 } => {
                let c = 0.5 * m - 1.0;
                if c > 0.0 {
                    (-a1 + (a1 * a1 + 8.0 * a2 * c).sqrt()) / (4.0 * a2)
                } else {
                    (1.0 / (a1 + a2.sqrt())).min(1.0 / a1)
                }
                .max(1e-6)
            }
            DensityFamily::NonExtensive { q, kappa } => {
                let lam = 1.0 / (q - 1.0) - 0.5 * m;
                (lam / kappa) * 0.5 * m / (lam - 1.0).max(0.5)
            }
            DensityFamily::Grid(g) => {
                let (mut best_u, mut best_v) = (0.5 * (g.u_min() + g.u_max()), 0.0);
                for (u, v) in g.u.iter().zip(g.vals.iter()) {
                    if *v > best_v {
                        best_v = *v;
                        best_u = *u;
                    }
                }
                best_u.max(1e-6 * g.u_max().max(1.0))
            }
        }
    }
}

/// How a moment value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    AnalyticQuadrature,
    MonteCarlo,
}

/// A single moment M_nu with its evaluation method and error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentReport {
    pub nu: u32,
    pub value: f64,
    pub method: MomentMethod,
    pub err_est: f64,
}

fn ln_moment_prefactor(beta: Beta, n: usize) -> f64 {
    let m = mu(beta, n);
    0.5 * m * (std::f64::consts::FRAC_PI_2).ln() + 0.5 * (n as f64) * 2.0_f64.ln()
        - ln_gamma(0.5 * m).unwrap()
}

/// Normalization constant a0 such that M_0 = 1.
pub fn normalize(family: &DensityFamily, beta: Beta, n: usize) -> Result<f64> {
    family.validate(beta, n)?;
    let m = mu(beta, n);
    let half_mu = 0.5 * m;
    let ln_pref = ln_moment_prefactor(beta, n);
    match family {
        DensityFamily::Gaussian { v } => {
            let b = beta.value() / (4.0 * v * v);
            // Int u^{mu/2-1} e^{-b u} = Gamma(mu/2) b^{-mu/2}
            Ok((-ln_pref - ln_gamma(half_mu)? + half_mu * b.ln()).exp())
        }
        DensityFamily::BoundTrace { a1 } => {
            Ok((-ln_pref - half_mu * a1.ln() + half_mu.ln()).exp())
        }
        DensityFamily::FixedTrace { a1 } => Ok((-ln_pref - (half_mu - 1.0) * a1.ln()).exp()),
        DensityFamily::GaussMonomial { a1, m: mm } => {
            let ln_i = ln_gamma(*mm as f64 + half_mu)? - (*mm as f64 + half_mu) * a1.ln();
            Ok((-ln_pref - ln_i).exp())
        }
        DensityFamily::NonExtensive { q, kappa } => {
            let lam = family.lambda(beta, n).unwrap();
            // Int = (Lam/kappa)^{mu/2} Gamma(mu/2) Gamma(Lam) / Gamma(1/(q-1))
            let ln_i = half_mu * (lam / kappa).ln() + ln_gamma(half_mu)? + ln_gamma(lam)?
                - ln_gamma(1.0 / (q - 1.0))?;
            Ok((-ln_pref - ln_i).exp())
        }
        DensityFamily::GaussQuartic { a1, a2 } => {
            // Int_0^inf u^{mu/2-1} e^{-a1 u - a2 u^2} du
            //   = (2 a2)^{-mu/4} Gamma(mu/2) e^{a1^2/(8 a2)} D_{-mu/2}(a1/sqrt(2 a2))
            let z = a1 / (2.0 * a2).sqrt();
            let d = specfun::parabolic_cylinder_d(-half_mu, z)?;
            let ln_i = -0.25 * m * (2.0 * a2).ln() + ln_gamma(half_mu)?
                + a1 * a1 / (8.0 * a2)
                + d.ln();
            Ok((-ln_pref - ln_i).exp())
        }
        DensityFamily::Grid(g) => {
            let spec = QuadratureSpec::with_tols(1e-14, 1e-11);
            let f = |u: f64| g.eval(u);
            let q = quad::integrate_power_weight(
                &f,
                half_mu,
                Some(g.u_max()),
                family.u_scale(beta, n),
                &spec,
            )?;
            if !(q.value > 0.0) {
                return Err(Error::NonNormalizable("grid density has zero mass".into()));
            }
            Ok((-ln_pref - q.value.ln()).exp())
        }
    }
}

/// A density family bound to (beta, N) with its normalization precomputed.
#[derive(Debug, Clone)]
pub struct NormalizedDensity {
    pub family: DensityFamily,
    pub beta: Beta,
    pub n: usize,
    pub mu: f64,
    pub a0: f64,
}

impl NormalizedDensity {
    pub fn new(family: DensityFamily, beta: Beta, n: usize) -> Result<Self> {
        let a0 = normalize(&family, beta, n)?;
        Ok(Self {
            mu: mu(beta, n),
            family,
            beta,
            n,
            a0,
        })
    }

    /// P(u) = a0 * shape(u); errors for the fixed-trace point mass.
    pub fn eval(&self, u: f64) -> Result<f64> {
        Ok(self.a0 * self.family.shape(self.beta, self.n, u)?)
    }
}

/// Pointwise value of the normalized density P(u).
pub fn eval_p(family: &DensityFamily, beta: Beta, n: usize, u: f64) -> Result<f64> {
    let a0 = normalize(family, beta, n)?;
    Ok(a0 * family.shape(beta, n, u)?)
}

/// Moment M_nu of Tr H^2. Analytic-quadrature path; the fixed-trace family
/// is exact.
pub fn moment(family: &DensityFamily, beta: Beta, n: usize, nu: u32) -> Result<MomentReport> {
    family.validate(beta, n)?;
    if let DensityFamily::FixedTrace { a1 } = family {
        return Ok(MomentReport {
            nu,
            value: a1.powi(nu as i32),
            method: MomentMethod::AnalyticQuadrature,
            err_est: 0.0,
        });
    }
    if let DensityFamily::NonExtensive { .. } = family {
        let lam = family.lambda(beta, n).unwrap();
        if lam <= nu as f64 {
            return Err(Error::MomentDoesNotExist(format!(
                "non-extensive moment nu = {nu} requires Lambda > nu, got Lambda = {lam}"
            )));
        }
    }
    let m = mu(beta, n);
    let a0 = normalize(family, beta, n)?;
    let pref = ln_moment_prefactor(beta, n).exp() * a0;
    let spec = QuadratureSpec::with_tols(1e-14, 1e-11);
    let f = |u: f64| family.shape(beta, n, u).unwrap_or(0.0);
    let q = quad::integrate_power_weight(
        &f,
        nu as f64 + 0.5 * m,
        family.support_upper(),
        family.u_scale(beta, n).max(1.0) * (1.0 + nu as f64),
        &spec,
    )?;
    Ok(MomentReport {
        nu,
        value: pref * q.value,
        method: MomentMethod::AnalyticQuadrature,
        err_est: pref * q.err_est,
    })
}

/// Closed form of the angular integral of |Delta_N(e)|^beta over the unit
/// sphere:
/// pi^{N/2} Prod_n Gamma(1 + n beta/2)
///   / (2^{beta N(N-1)/4 - 1} Gamma^N(1 + beta/2) Gamma(mu/2)).
pub fn angular_integral_constant(beta: Beta, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let b = beta.value();
    let nf = n as f64;
    let mut ln_num = 0.5 * nf * std::f64::consts::PI.ln();
    for k in 1..=n {
        ln_num += ln_gamma(1.0 + k as f64 * b / 2.0)?;
    }
    let ln_den = (b * nf * (nf - 1.0) / 4.0 - 1.0) * 2.0_f64.ln()
        + nf * ln_gamma(1.0 + b / 2.0)?
        + ln_gamma(0.5 * mu(beta, n))?;
    Ok((ln_num - ln_den).exp())
}

/// Fourier transform p(y) = (1/sqrt(2 pi)) Int_0^inf P(u) e^{i y u} du.
pub fn fourier_transform_p(
    family: &DensityFamily,
    beta: Beta,
    n: usize,
    y: f64,
) -> Result<Complex64> {
    family.validate(beta, n)?;
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    if let DensityFamily::FixedTrace { a1 } = family {
        let a0 = normalize(family, beta, n)?;
        return Ok(Complex64::from_polar(a0 * norm, y * a1));
    }
    let a0 = normalize(family, beta, n)?;
    let spec = QuadratureSpec::with_tols(1e-13, 1e-10);
    let scale = family.u_scale(beta, n);
    let upper = family.support_upper();
    let re_f = |u: f64| family.shape(beta, n, u).unwrap_or(0.0) * (y * u).cos();
    let im_f = |u: f64| family.shape(beta, n, u).unwrap_or(0.0) * (y * u).sin();
    let (re, im) = match upper {
        Some(b) => {
            let re = quad::integrate_finite(&re_f, 0.0, b, &spec)?;
            let im = quad::integrate_finite(&im_f, 0.0, b, &spec)?;
            (re, im)
        }
        None => {
            let re = quad::integrate_semi_infinite_split(&re_f, 0.0, scale, &spec)?;
            let im = quad::integrate_semi_infinite_split(&im_f, 0.0, scale, &spec)?;
            (re, im)
        }
    };
    Ok(Complex64::new(a0 * norm * re.value, a0 * norm * im.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BETAS: [Beta; 3] = [Beta::One, Beta::Two, Beta::Four];

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let denom = expected.abs().max(1e-300);
        assert!(
            ((actual - expected) / denom).abs() < tol,
            "actual {actual:e}, expected {expected:e}"
        );
    }

    /// Quadrature route for a0, independent of the closed forms.
    fn a0_by_quadrature(family: &DensityFamily, beta: Beta, n: usize) -> f64 {
        let m = mu(beta, n);
        let spec = QuadratureSpec::with_tols(1e-14, 1e-12);
        let f = |u: f64| family.shape(beta, n, u).unwrap();
        let q = quad::integrate_power_weight(
            &f,
            0.5 * m,
            family.support_upper(),
            family.u_scale(beta, n),
            &spec,
        )
        .unwrap();
        (-ln_moment_prefactor(beta, n) - q.value.ln()).exp()
    }

    #[test]
    fn gaussian_a0_matches_closed_form() {
        for beta in BETAS {
            for n in [1usize, 2, 3, 4] {
                let v = 0.9;
                let family = DensityFamily::Gaussian { v };
                let m = mu(beta, n);
                let want = (-(n as f64) / 2.0 * 2.0_f64.ln()
                    + 0.5 * m * (beta.value() / (2.0 * std::f64::consts::PI * v * v)).ln())
                .exp();
                assert_rel(normalize(&family, beta, n).unwrap(), want, 1e-9);
            }
        }
    }

    #[test]
    fn normalizations_match_quadrature() {
        let families = [
            DensityFamily::Gaussian { v: 1.2 },
            DensityFamily::BoundTrace { a1: 2.0 },
            DensityFamily::GaussMonomial { a1: 1.5, m: 2 },
            DensityFamily::GaussQuartic { a1: 1.0, a2: 0.5 },
            DensityFamily::NonExtensive { q: 1.08, kappa: 1.0 },
        ];
        for family in families {
            // beta=2, N=2 keeps q=1.08 valid (q_max = 1.5)
            let (beta, n) = (Beta::Two, 2);
            let a = normalize(&family, beta, n).unwrap();
            let b = a0_by_quadrature(&family, beta, n);
            assert_rel(a, b, 1e-8);
        }
    }

    #[test]
    fn bound_trace_example_mu4() {
        // mu = 4 (beta=2, N=2): Int_0^{a1} u du = a1^2/2 determines a0
        let a1 = 1.7;
        let family = DensityFamily::BoundTrace { a1 };
        let a0 = normalize(&family, Beta::Two, 2).unwrap();
        let pref = ln_moment_prefactor(Beta::Two, 2).exp();
        assert_rel(a0 * pref * a1 * a1 / 2.0, 1.0, 1e-12);
    }

    #[test]
    fn fixed_trace_example_mu4() {
        // a0 = Gamma(2) / ((pi/2)^2 * 2 * 1)
        let family = DensityFamily::FixedTrace { a1: 1.0 };
        let a0 = normalize(&family, Beta::Two, 2).unwrap();
        let want = 1.0 / ((std::f64::consts::FRAC_PI_2).powi(2) * 2.0);
        assert_rel(a0, want, 1e-12);
    }

    #[test]
    fn moment_zero_is_one_for_every_family() {
        let families = [
            DensityFamily::Gaussian { v: 0.8 },
            DensityFamily::BoundTrace { a1: 1.0 },
            DensityFamily::FixedTrace { a1: 1.0 },
            DensityFamily::GaussMonomial { a1: 2.0, m: 1 },
            DensityFamily::GaussQuartic { a1: 0.7, a2: 0.4 },
            DensityFamily::NonExtensive { q: 1.1, kappa: 0.9 },
        ];
        for family in families {
            for beta in BETAS {
                let n = 2;
                let m0 = moment(&family, beta, n, 0).unwrap();
                assert_rel(m0.value, 1.0, 1e-9);
            }
        }
    }

    #[test]
    fn gaussian_first_moment_closed_form() {
        for beta in BETAS {
            for n in [2usize, 3] {
                let v = 1.3;
                let family = DensityFamily::Gaussian { v };
                let m1 = moment(&family, beta, n, 1).unwrap();
                assert_rel(m1.value, 2.0 * mu(beta, n) * v * v / beta.value(), 1e-9);
            }
        }
    }

    #[test]
    fn bound_trace_first_moment_mu4() {
        let family = DensityFamily::BoundTrace { a1: 1.0 };
        let m1 = moment(&family, Beta::Two, 2, 1).unwrap();
        assert_rel(m1.value, 2.0 / 3.0, 1e-10);
    }

    #[test]
    fn fixed_trace_moments_exact() {
        let family = DensityFamily::FixedTrace { a1: 2.0 };
        for nu in 0..4 {
            let m = moment(&family, Beta::One, 3, nu).unwrap();
            assert_rel(m.value, 2.0f64.powi(nu as i32), 1e-15);
            assert_eq!(m.err_est, 0.0);
        }
    }

    #[test]
    fn gauss_monomial_moment_shift_identity() {
        // M_nu = Gamma(nu + m + mu/2) / (Gamma(m + mu/2) a1^nu)
        let (a1, mm) = (1.4, 3u32);
        let family = DensityFamily::GaussMonomial { a1, m: mm };
        let (beta, n) = (Beta::Two, 3);
        let half_mu = 0.5 * mu(beta, n);
        for nu in 1..=3u32 {
            let got = moment(&family, beta, n, nu).unwrap().value;
            let want = (ln_gamma(nu as f64 + mm as f64 + half_mu).unwrap()
                - ln_gamma(mm as f64 + half_mu).unwrap()
                - nu as f64 * a1.ln())
            .exp();
            assert_rel(got, want, 1e-9);
        }
    }

    #[test]
    fn non_extensive_moment_existence() {
        // mu = 4 at beta=2, N=2; Lambda = 1/(q-1) - 2
        let family = DensityFamily::NonExtensive { q: 1.25, kappa: 1.0 }; // Lambda = 2
        assert!(moment(&family, Beta::Two, 2, 1).is_ok());
        assert!(matches!(
            moment(&family, Beta::Two, 2, 2),
            Err(Error::MomentDoesNotExist(_))
        ));
    }

    #[test]
    fn non_extensive_q_range_enforced() {
        let family = DensityFamily::NonExtensive { q: 1.6, kappa: 1.0 };
        // q_max = 1.5 at mu = 4
        assert!(family.validate(Beta::Two, 2).is_err());
        let family = DensityFamily::NonExtensive { q: 0.9, kappa: 1.0 };
        assert!(family.validate(Beta::Two, 2).is_err());
    }

    #[test]
    fn eval_examples() {
        // outside the cutoff
        let bt = DensityFamily::BoundTrace { a1: 1.0 };
        assert_eq!(eval_p(&bt, Beta::Two, 2, 2.0).unwrap(), 0.0);
        // non-extensive at u=0 equals a0
        let ne = DensityFamily::NonExtensive { q: 1.2, kappa: 1.0 };
        let a0 = normalize(&ne, Beta::Two, 2).unwrap();
        assert_rel(eval_p(&ne, Beta::Two, 2, 0.0).unwrap(), a0, 1e-14);
        // monomial vanishes at the origin for m >= 1
        let gm = DensityFamily::GaussMonomial { a1: 1.0, m: 1 };
        assert_eq!(eval_p(&gm, Beta::Two, 2, 0.0).unwrap(), 0.0);
        // point mass refuses pointwise evaluation
        let ft = DensityFamily::FixedTrace { a1: 1.0 };
        assert!(matches!(eval_p(&ft, Beta::Two, 2, 1.0), Err(Error::PointMass)));
    }

    #[test]
    fn eval_nonnegative_on_grid() {
        let families = [
            DensityFamily::Gaussian { v: 1.0 },
            DensityFamily::BoundTrace { a1: 3.0 },
            DensityFamily::GaussMonomial { a1: 0.5, m: 4 },
            DensityFamily::GaussQuartic { a1: 0.2, a2: 1.0 },
            DensityFamily::NonExtensive { q: 1.05, kappa: 2.0 },
        ];
        for family in families {
            for k in 0..60 {
                let u = 0.25 * k as f64;
                assert!(eval_p(&family, Beta::One, 3, u).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn angular_constant_paper_value() {
        // (beta=2, N=2) -> 2 pi
        assert_rel(
            angular_integral_constant(Beta::Two, 2).unwrap(),
            2.0 * std::f64::consts::PI,
            1e-12,
        );
        // (beta=1, N=1) -> 2 (two unit vectors on the 0-sphere)
        assert_rel(angular_integral_constant(Beta::One, 1).unwrap(), 2.0, 1e-12);
    }

    #[test]
    fn fourier_transform_gaussian_closed_form() {
        // p(y) = a0 / sqrt(2 pi) / (b - i y), b = beta / 4 v^2
        let v = 1.1;
        let family = DensityFamily::Gaussian { v };
        let (beta, n) = (Beta::Two, 2);
        let a0 = normalize(&family, beta, n).unwrap();
        let b = beta.value() / (4.0 * v * v);
        for &y in &[0.0, 0.3, -0.9, 2.0] {
            let got = fourier_transform_p(&family, beta, n, y).unwrap();
            let want = Complex64::new(a0 / (2.0 * std::f64::consts::PI).sqrt(), 0.0)
                / Complex64::new(b, -y);
            assert!((got - want).norm() < 1e-9 * want.norm());
        }
    }

    #[test]
    fn fourier_transform_at_zero_is_density_integral() {
        let family = DensityFamily::GaussMonomial { a1: 1.0, m: 2 };
        let (beta, n) = (Beta::One, 2);
        let got = fourier_transform_p(&family, beta, n, 0.0).unwrap();
        // Int P = a0 * Gamma(3)/1 = 2 a0
        let a0 = normalize(&family, beta, n).unwrap();
        let want = 2.0 * a0 / (2.0 * std::f64::consts::PI).sqrt();
        assert_rel(got.re, want, 1e-9);
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn fourier_transform_bound_trace_antiderivative() {
        // a0 (e^{i y a1} - 1)/(i y sqrt(2 pi))
        let a1 = 1.3;
        let family = DensityFamily::BoundTrace { a1 };
        let (beta, n) = (Beta::Two, 2);
        let a0 = normalize(&family, beta, n).unwrap();
        let y = 0.8;
        let got = fourier_transform_p(&family, beta, n, y).unwrap();
        let want = Complex64::new(a0, 0.0) * (Complex64::new(0.0, y * a1).exp() - 1.0)
            / Complex64::new(0.0, y)
            / (2.0 * std::f64::consts::PI).sqrt();
        assert!((got - want).norm() < 1e-9 * want.norm());
    }

    #[test]
    fn grid_density_interpolation_and_tails() {
        let u: Vec<f64> = (0..40).map(|i| i as f64 * 0.25).collect();
        let vals: Vec<f64> = u.iter().map(|&x| (-x).exp()).collect();
        let g = GridDensity::new(u, vals).unwrap();
        let family = DensityFamily::Grid(g.clone());
        // interpolation stays close to the generating function
        for &x in &[0.1, 0.9, 3.33, 7.7] {
            assert!((g.eval(x) - (-x as f64).exp()).abs() < 1e-3);
        }
        // zero extension beyond the grid
        assert_eq!(g.eval(100.0), 0.0);
        // M_0 = 1 after normalization
        let m0 = moment(&family, Beta::Two, 2, 0).unwrap();
        assert_rel(m0.value, 1.0, 1e-8);
        // tail fraction of e^{-u} over [0, 9.75] weighted by u is small
        assert!(g.tail_mass_fraction(2.0).unwrap() < 1e-2);
    }
}
