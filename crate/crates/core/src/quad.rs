//! Adaptive quadrature and numerical differentiation.
//!
//! The adaptive rule is a 7-point Gauss / 15-point Kronrod pair with
//! bisection of the worst subinterval, the classic workhorse scheme.
//! Semi-infinite integrals are mapped to (0, 1) by u = a + s/(1-s).
//! Endpoint power singularities u^{p-1} are removed by the substitution
//! s = (u/c)^p.

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae on [0, 1] (positive half, last entry 0).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];

/// Kronrod weights matching XGK.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// 7-point Gauss weights (for XGK entries with odd index).
const WG: [f64; 4] = [
    0.129_484_966_168_869_93,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Quadrature rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Adaptive bisection driven by the Gauss-Kronrod error estimate.
    Adaptive,
    /// A fixed number of equal-width Gauss-Kronrod panels, no adaptivity.
    FixedPanels(usize),
}

/// Work and accuracy budget for one integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rule: QuadRule,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rule: QuadRule::Adaptive,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_evals: 200_000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Converged integral with its error estimate and evaluation count.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub err_est: f64,
    pub evals: usize,
}

/// One Gauss-Kronrod application on [a, b]: (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fvals = [0.0f64; 15];
    fvals[7] = fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fvals[i] = f1;
        fvals[14 - i] = f2;
        res_k += WGK[i] * (f1 + f2);
        res_abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            res_g += WG[i / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for i in 0..7 {
        res_asc += WGK[i] * ((fvals[i] - mean).abs() + (fvals[14 - i] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    // QUADPACK error rescaling
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * 1.0_f64.min((200.0 * err / res_asc).powf(1.5));
    }
    let tiny = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if res_abs > tiny {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Integrate f over the finite interval [a, b].
///
/// The integrand must be finite on the closed interval; endpoint power
/// singularities should go through [`integrate_power_weight`].
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if !(a <= b) {
        return Err(Error::Domain(format!(
            "integrate_finite: invalid interval [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            err_est: 0.0,
            evals: 0,
        });
    }
    match spec.rule {
        QuadRule::FixedPanels(n) => {
            let n = n.max(1);
            let mut value = 0.0;
            let mut err = 0.0;
            let h = (b - a) / n as f64;
            for i in 0..n {
                let (v, e) = gk15(f, a + i as f64 * h, a + (i + 1) as f64 * h);
                value += v;
                err += e;
            }
            Ok(Quadrature {
                value,
                err_est: err,
                evals: 15 * n,
            })
        }
        QuadRule::Adaptive => adaptive(f, &[a, b], spec),
    }
}

/// Adaptive integration over a union of contiguous segments given by the
/// sorted breakpoint list. Splitting at known kinks or support boundaries
/// keeps the subdivision cheap.
pub fn integrate_finite_split<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if breakpoints.len() < 2 {
        return Err(Error::Domain(
            "integrate_finite_split needs at least two breakpoints".into(),
        ));
    }
    adaptive(f, breakpoints, spec)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<Quadrature> {
    let mut segs: Vec<Segment> = Vec::with_capacity(64);
    let mut evals = 0usize;
    for w in breakpoints.windows(2) {
        if w[1] < w[0] {
            return Err(Error::Domain("breakpoints must be ascending".into()));
        }
        if w[1] == w[0] {
            continue;
        }
        let (v, e) = gk15(f, w[0], w[1]);
        evals += 15;
        segs.push(Segment {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
        });
    }
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        if err <= spec.target(total) {
            return Ok(Quadrature {
                value: total,
                err_est: err,
                evals,
            });
        }
        if evals + 30 > spec.max_evals {
            return Err(Error::NonConvergence {
                estimate: total,
                err_est: err,
                evals,
            });
        }
        // split the worst segment
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("non-empty segment list");
        let s = segs.swap_remove(idx);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // interval at floating-point resolution; accept its estimate
            segs.push(s);
            let total: f64 = segs.iter().map(|x| x.value).sum();
            let err: f64 = segs.iter().map(|x| x.err).sum();
            return Ok(Quadrature {
                value: total,
                err_est: err,
                evals,
            });
        }
        let (v1, e1) = gk15(f, s.a, mid);
        let (v2, e2) = gk15(f, mid, s.b);
        evals += 30;
        segs.push(Segment {
            a: s.a,
            b: mid,
            value: v1,
            err: e1,
        });
        segs.push(Segment {
            a: mid,
            b: s.b,
            value: v2,
            err: e2,
        });
    }
}

/// Integrate f over [a, infinity).
///
/// Uses the rational map u = a + s/(1-s). The integrand must decay fast
/// enough to be integrable; a geometric tail probe rejects clearly
/// non-decaying integrands up front.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    // tail probe: the quantity |f(u)| (1 + u - a) must eventually shrink
    let mut last = f64::INFINITY;
    let mut rising = 0usize;
    let mut significant = false;
    for k in 0..12 {
        let u = a + 4.0_f64.powi(k + 2);
        let m = f(u).abs() * (1.0 + u - a);
        if m > 1e-280 {
            significant = true;
            if m >= last {
                rising += 1;
            } else {
                rising = 0;
            }
        }
        last = m;
    }
    if significant && rising >= 6 {
        return Err(Error::Divergence(
            "tail estimate |f(u)|*(1+u-a) is not shrinking".into(),
        ));
    }
    let g = |s: f64| {
        let om = 1.0 - s;
        if om <= 0.0 {
            return 0.0;
        }
        let u = a + s / om;
        if !u.is_finite() {
            return 0.0;
        }
        let v = f(u) / (om * om);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    adaptive(&g, &[0.0, 0.5, 0.9, 0.99, 1.0], spec)
}

/// Integrate f over [a, infinity) with an explicit split at a + scale.
///
/// The head [a, a + scale] is integrated directly, which keeps the
/// rational tail map well conditioned when f carries structure on a known
/// length scale.
pub fn integrate_semi_infinite_split<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    let c = a + scale.max(1e-8);
    let head = integrate_finite(f, a, c, spec)?;
    let tail = integrate_semi_infinite(f, c, spec)?;
    Ok(Quadrature {
        value: head.value + tail.value,
        err_est: head.err_est + tail.err_est,
        evals: head.evals + tail.evals,
    })
}

/// Integral of f(u) * u^{p-1} over (0, upper) or (0, infinity).
///
/// `scale` is a typical u beyond which the integrand is tame; the power
/// substitution s = (u/c)^p on (0, c) removes the endpoint singularity for
/// any p > 0 and the remainder is integrated directly.
pub fn integrate_power_weight<F: Fn(f64) -> f64>(
    f: &F,
    p: f64,
    upper: Option<f64>,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!(
            "integrate_power_weight requires p > 0, got {p}"
        )));
    }
    let cap = 10f64.powf(250.0 / p);
    let mut c = scale.max(1e-8).min(cap);
    if let Some(u) = upper {
        if !(u >= 0.0) {
            return Err(Error::Domain("upper limit must be nonnegative".into()));
        }
        c = c.min(u);
    }
    // Int_0^c f(u) u^{p-1} du = (c^p / p) Int_0^1 f(c s^{1/p}) ds
    let inv_p = 1.0 / p;
    let head_f = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let u = c * s.powf(inv_p);
        f(u)
    };
    let head = integrate_finite(&head_f, 0.0, 1.0, spec)?;
    let factor = c.powf(p) / p;
    let mut value = head.value * factor;
    let mut err = head.err_est * factor;
    let mut evals = head.evals;

    let tail_f = |u: f64| f(u) * u.powf(p - 1.0);
    match upper {
        Some(u) if u > c => {
            let t = integrate_finite(&tail_f, c, u, spec)?;
            value += t.value;
            err += t.err_est;
            evals += t.evals;
        }
        Some(_) => {}
        None => {
            let t = integrate_semi_infinite(&tail_f, c, spec)?;
            value += t.value;
            err += t.err_est;
            evals += t.evals;
        }
    }
    Ok(Quadrature {
        value,
        err_est: err,
        evals,
    })
}

/// n-th derivative of f at x by central differences with Richardson
/// extrapolation. Supported for n <= 8.
///
/// `h0` is the initial step; a good choice is a few percent of the natural
/// length scale of f around x.
pub fn differentiate_n<F: Fn(f64) -> f64>(f: &F, x: f64, n: u32, h0: f64) -> Result<f64> {
    if n > 8 {
        return Err(Error::Unsupported(format!(
            "derivative order {n} exceeds the supported cap of 8"
        )));
    }
    if n == 0 {
        return Ok(f(x));
    }
    if !(h0 > 0.0) {
        return Err(Error::Domain("h0 must be positive".into()));
    }
    // central difference: D(h) = h^-n * sum_i (-1)^i C(n,i) f(x + (n/2 - i) h)
    let n_us = n as usize;
    let mut binom = vec![0.0f64; n_us + 1];
    binom[0] = 1.0;
    for i in 1..=n_us {
        binom[i] = binom[i - 1] * (n_us - i + 1) as f64 / i as f64;
    }
    let stencil = |h: f64| -> f64 {
        let mut acc = 0.0;
        for (i, &c) in binom.iter().enumerate() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let offset = (0.5 * n as f64 - i as f64) * h;
            acc += sign * c * f(x + offset);
        }
        acc / h.powi(n as i32)
    };

    const LEVELS: usize = 7;
    let mut table = [[0.0f64; LEVELS]; LEVELS];
    let mut best = f64::NAN;
    let mut best_err = f64::INFINITY;
    let mut h = h0;
    for k in 0..LEVELS {
        table[k][0] = stencil(h);
        let mut p4 = 1.0;
        for j in 1..=k {
            p4 *= 4.0;
            table[k][j] = (p4 * table[k][j - 1] - table[k - 1][j - 1]) / (p4 - 1.0);
        }
        if k > 0 {
            let change = (table[k][k] - table[k - 1][k - 1]).abs();
            if change <= best_err {
                best_err = change;
                best = table[k][k];
            } else if change > 4.0 * best_err && k >= 3 {
                // roundoff has taken over
                break;
            }
        } else {
            best = table[0][0];
        }
        h *= 0.5;
    }
    Ok(best)
}
