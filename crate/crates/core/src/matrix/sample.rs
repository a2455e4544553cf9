//! Sampling of Gaussian and norm-dependent random matrices.
//!
//! Norm-dependent draws factorize into a direction (a normalized Gaussian
//! matrix) and a radius drawn from the radial density u^{mu/2-1} P(u) of
//! the squared norm, via a tabulated inverse CDF on an adaptively refined
//! grid.

use super::{Beta, MatrixStorage, RandomMatrix, SymmetryClass};
use crate::densities::DensityFamily;
use crate::error::{Error, Result};
use crate::matrix::mu;
use crate::quad::{self, QuadratureSpec};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Draw from the Gaussian ensemble with density proportional to
/// exp(-(beta / 4 v^2) Tr H^2).
pub fn sample_gaussian<R: Rng + ?Sized>(
    class: SymmetryClass,
    n: usize,
    v: f64,
    rng: &mut R,
) -> RandomMatrix {
    assert!(v > 0.0, "variance parameter must be positive");
    let sd_diag = v * (2.0 / class.beta.value()).sqrt();
    let sd_off = v / class.beta.value().sqrt();
    match class.beta {
        Beta::One => {
            let mut a = vec![0.0f64; n * n];
            for i in 0..n {
                let z: f64 = rng.sample(StandardNormal);
                a[i * n + i] = sd_diag * z;
                for j in 0..i {
                    let z: f64 = rng.sample(StandardNormal);
                    let x = sd_off * z;
                    a[i * n + j] = x;
                    a[j * n + i] = x;
                }
            }
            RandomMatrix::new(class, n, MatrixStorage::RealSym(a))
        }
        Beta::Two => {
            let mut a = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                let z: f64 = rng.sample(StandardNormal);
                a[i * n + i] = Complex64::new(sd_diag * z, 0.0);
                for j in 0..i {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    let z = Complex64::new(sd_off * re, sd_off * im);
                    a[i * n + j] = z;
                    a[j * n + i] = z.conj();
                }
            }
            RandomMatrix::new(class, n, MatrixStorage::Hermitian(a))
        }
        Beta::Four => {
            // 2x2 quaternion blocks: q = q0 e0 + q1 e1 + q2 e2 + q3 e3 with
            // e0 = I, e1 = diag(i, -i), e2 = [[0,1],[-1,0]], e3 = [[0,i],[i,0]]
            let d = 2 * n;
            let mut a = vec![Complex64::new(0.0, 0.0); d * d];
            let put = |r: usize, c: usize, z: Complex64, a: &mut Vec<Complex64>| {
                a[r * d + c] = z;
            };
            for i in 0..n {
                let z: f64 = rng.sample(StandardNormal);
                let q0 = sd_diag * z;
                put(2 * i, 2 * i, Complex64::new(q0, 0.0), &mut a);
                put(2 * i + 1, 2 * i + 1, Complex64::new(q0, 0.0), &mut a);
                for j in 0..i {
                    let q: [f64; 4] = std::array::from_fn(|_| {
                        let z: f64 = rng.sample(StandardNormal);
                        sd_off * z
                    });
                    // block (i, j)
                    let b00 = Complex64::new(q[0], q[1]);
                    let b01 = Complex64::new(q[2], q[3]);
                    let b10 = Complex64::new(-q[2], q[3]);
                    let b11 = Complex64::new(q[0], -q[1]);
                    put(2 * i, 2 * j, b00, &mut a);
                    put(2 * i, 2 * j + 1, b01, &mut a);
                    put(2 * i + 1, 2 * j, b10, &mut a);
                    put(2 * i + 1, 2 * j + 1, b11, &mut a);
                    // block (j, i) is the conjugate transpose
                    put(2 * j, 2 * i, b00.conj(), &mut a);
                    put(2 * j, 2 * i + 1, b10.conj(), &mut a);
                    put(2 * j + 1, 2 * i, b01.conj(), &mut a);
                    put(2 * j + 1, 2 * i + 1, b11.conj(), &mut a);
                }
            }
            RandomMatrix::new(class, n, MatrixStorage::QuaternionSelfDual(a))
        }
    }
}

/// Radial law of the squared norm u = Tr H^2: either a point mass (fixed
/// trace) or a tabulated inverse CDF in the compactified coordinate
/// xi = u / (u + s).
#[derive(Debug, Clone)]
enum RadialLaw {
    Exact(f64),
    Table {
        s: f64,
        xi: Vec<f64>,
        cdf: Vec<f64>,
        dens: Vec<f64>,
    },
}

/// Reusable sampler for one (family, class, N) combination.
#[derive(Debug, Clone)]
pub struct NormDependentSampler {
    class: SymmetryClass,
    n: usize,
    law: RadialLaw,
}

const CDF_INTERP_TOL: f64 = 1e-8;
const TAIL_MASS: f64 = 1e-12;

impl NormDependentSampler {
    pub fn new(family: &DensityFamily, class: SymmetryClass, n: usize) -> Result<Self> {
        family.validate(class.beta, n)?;
        if let DensityFamily::FixedTrace { a1 } = family {
            return Ok(Self {
                class,
                n,
                law: RadialLaw::Exact(*a1),
            });
        }
        let m = mu(class.beta, n);
        let half_mu = 0.5 * m;
        let s = family.u_scale(class.beta, n).max(1e-12);
        let beta = class.beta;
        // unnormalized radial density of u, mapped to xi = u/(u+s)
        let dens_xi = move |family: &DensityFamily, xi: f64| -> f64 {
            if xi <= 0.0 || xi >= 1.0 {
                return 0.0;
            }
            let om = 1.0 - xi;
            let u = s * xi / om;
            let shape = family.shape(beta, n, u).unwrap_or(0.0);
            shape * u.powf(half_mu - 1.0) * s / (om * om)
        };

        // total mass, via the singularity-aware route in u
        let spec = QuadratureSpec::with_tols(1e-14, 1e-10);
        let shape_f = |u: f64| family.shape(beta, n, u).unwrap_or(0.0);
        let total = quad::integrate_power_weight(
            &shape_f,
            half_mu,
            family.support_upper(),
            s,
            &spec,
        )?
        .value;
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::NonNormalizable(format!(
                "radial density of {} has non-finite mass",
                family.describe()
            )));
        }

        // upper end of the xi grid
        let xi_hi = match family.support_upper() {
            Some(u_max) => u_max / (u_max + s),
            None => {
                let mut hi = 0.5;
                loop {
                    let u_lo = s * hi / (1.0 - hi);
                    let tail =
                        quad::integrate_power_weight(&shape_f, half_mu, None, s, &spec)?.value
                            - quad::integrate_power_weight(&shape_f, half_mu, Some(u_lo), s, &spec)?
                                .value;
                    if tail <= TAIL_MASS * total || 1.0 - hi < 1e-9 {
                        break hi;
                    }
                    hi = 0.5 * (1.0 + hi);
                }
            }
        };
        // head cell: small enough that its mass is negligible, so the
        // pure-power inversion inside it cannot disturb the CDF contract
        let mut xi_lo = xi_hi * 1e-4;
        loop {
            let u_head = s * xi_lo / (1.0 - xi_lo);
            let head = quad::integrate_power_weight(&shape_f, half_mu, Some(u_head), s, &spec)?
                .value;
            if head <= 1e-9 * total || xi_lo < 1e-14 {
                break;
            }
            xi_lo *= 0.1;
        }

        // adaptive node set between xi_lo and xi_hi
        let mut nodes: Vec<f64> = (0..=64)
            .map(|i| xi_lo + (xi_hi - xi_lo) * i as f64 / 64.0)
            .collect();
        let gk = QuadratureSpec::with_tols(1e-15, 1e-12);
        let mass = |a: f64, b: f64| -> Result<f64> {
            Ok(quad::integrate_finite(&|x| dens_xi(family, x), a, b, &gk)?.value)
        };
        let mut masses: Vec<f64> = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            masses.push(mass(w[0], w[1])?);
        }
        // refine cells until the Hermite interpolant reproduces the half-cell
        // mass within the CDF tolerance
        let mut pass = 0;
        loop {
            pass += 1;
            let mut new_nodes = vec![nodes[0]];
            let mut new_masses = Vec::new();
            let mut refined = false;
            for i in 0..masses.len() {
                let (a, b) = (nodes[i], nodes[i + 1]);
                let mid = 0.5 * (a + b);
                let m_left = mass(a, mid)?;
                let m_cell = masses[i];
                let h = b - a;
                let (d0, d1) = (dens_xi(family, a), dens_xi(family, b));
                // cubic Hermite CDF increment over the left half-cell
                let hermite_half = 0.5 * m_cell + h * (d0 - d1) / 8.0;
                let err = (hermite_half - m_left).abs();
                if err > CDF_INTERP_TOL * total && h > 1e-12 {
                    refined = true;
                    new_nodes.push(mid);
                    new_masses.push(m_left);
                    new_masses.push(m_cell - m_left);
                } else {
                    new_masses.push(m_cell);
                }
                new_nodes.push(b);
            }
            nodes = new_nodes;
            masses = new_masses;
            if !refined || pass >= 24 {
                break;
            }
        }

        let head_mass = {
            let u_head = s * nodes[0] / (1.0 - nodes[0]);
            quad::integrate_power_weight(&shape_f, half_mu, Some(u_head), s, &spec)?.value
        };
        let grand_total = head_mass + masses.iter().sum::<f64>();
        let mut cdf = Vec::with_capacity(nodes.len());
        let mut acc = head_mass / grand_total;
        cdf.push(acc);
        for m in &masses {
            acc += m / grand_total;
            cdf.push(acc);
        }
        if let Some(last) = cdf.last_mut() {
            *last = last.max(1.0 - TAIL_MASS);
        }
        let dens: Vec<f64> = nodes
            .iter()
            .map(|&x| dens_xi(family, x) / grand_total)
            .collect();
        Ok(Self {
            class,
            n,
            law: RadialLaw::Table {
                s,
                xi: nodes,
                cdf,
                dens,
            },
        })
    }

    /// Draw the squared norm u = Tr H^2.
    pub fn sample_trace_norm_sq<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.law {
            RadialLaw::Exact(a1) => *a1,
            RadialLaw::Table { s, xi, cdf, dens } => {
                let target: f64 = rng.random();
                if target <= cdf[0] {
                    // pure-power inversion inside the (negligible-mass) head
                    let half_mu = 0.5 * mu(self.class.beta, self.n);
                    let frac = (target / cdf[0]).clamp(0.0, 1.0);
                    let u_head = s * xi[0] / (1.0 - xi[0]);
                    return u_head * frac.powf(1.0 / half_mu.max(0.5));
                }
                let hi = cdf.partition_point(|c| *c < target).min(cdf.len() - 1);
                let lo = hi - 1;
                let (c0, c1) = (cdf[lo], cdf[hi]);
                let (x0, x1) = (xi[lo], xi[hi]);
                let h = x1 - x0;
                let (d0, d1) = (dens[lo], dens[hi]);
                // invert the monotone cubic Hermite CDF on the cell
                let cell = (c1 - c0).max(1e-300);
                let mut t = ((target - c0) / cell).clamp(0.0, 1.0);
                for _ in 0..40 {
                    let t2 = t * t;
                    let t3 = t2 * t;
                    let val = c0
                        + (c1 - c0) * (3.0 * t2 - 2.0 * t3)
                        + h * (d0 * (t - 2.0 * t2 + t3) + d1 * (t3 - t2));
                    let deriv = (c1 - c0) * (6.0 * t - 6.0 * t2)
                        + h * (d0 * (1.0 - 4.0 * t + 3.0 * t2) + d1 * (3.0 * t2 - 2.0 * t));
                    let res = val - target;
                    if res.abs() <= 1e-13 {
                        break;
                    }
                    if deriv > 0.0 {
                        let step = res / deriv;
                        t = (t - step).clamp(0.0, 1.0);
                    } else {
                        t = if res > 0.0 { 0.5 * t } else { 0.5 * (1.0 + t) };
                    }
                }
                let x = x0 + t * h;
                s * x / (1.0 - x)
            }
        }
    }

    /// Draw a full matrix: Gaussian direction scaled to the sampled norm.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RandomMatrix {
        let u = self.sample_trace_norm_sq(rng);
        let mut h = sample_gaussian(self.class, self.n, 1.0, rng);
        let g2 = h.trace_norm_sq();
        h.scale((u / g2).sqrt());
        h
    }
}

/// One-off draw from a norm-dependent family. Builds the radial table per
/// call; loops should construct a [`NormDependentSampler`] once instead.
pub fn sample_norm_dependent<R: Rng + ?Sized>(
    family: &DensityFamily,
    class: SymmetryClass,
    n: usize,
    rng: &mut R,
) -> Result<RandomMatrix> {
    Ok(NormDependentSampler::new(family, class, n)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::moment;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn gaussian_trace_norm_expectation() {
        // E[Tr H^2] = 2 mu v^2 / beta
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (beta, n, want) in [
            (Beta::Two, 1usize, 1.0),
            (Beta::Two, 2, 4.0),
            (Beta::One, 2, 6.0),
            (Beta::Four, 2, 3.0),
        ] {
            let class = SymmetryClass::new(beta);
            let xs: Vec<f64> = (0..20_000)
                .map(|_| sample_gaussian(class, n, 1.0, &mut rng).trace_norm_sq())
                .collect();
            let (mean, se) = mean_and_se(&xs);
            assert!(
                (mean - want).abs() < 4.0 * se,
                "beta {beta:?} n {n}: mean {mean}, want {want}, se {se}"
            );
        }
    }

    #[test]
    fn fixed_trace_norm_is_exact() {
        let family = DensityFamily::FixedTrace { a1: 1.0 };
        let class = SymmetryClass::new(Beta::Two);
        let sampler = NormDependentSampler::new(&family, class, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let h = sampler.sample(&mut rng);
            assert!((h.trace_norm_sq() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_trace_respects_cutoff_and_mean() {
        let a1 = 1.0;
        let family = DensityFamily::BoundTrace { a1 };
        let class = SymmetryClass::new(Beta::Two);
        let n = 2; // mu = 4
        let sampler = NormDependentSampler::new(&family, class, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let xs: Vec<f64> = (0..40_000)
            .map(|_| sampler.sample(&mut rng).trace_norm_sq())
            .collect();
        assert!(xs.iter().all(|&u| u <= a1 + 1e-12));
        let (mean, se) = mean_and_se(&xs);
        // M_1 = a1 * (mu/2) / (mu/2 + 1) = 2/3
        assert!((mean - 2.0 / 3.0).abs() < 4.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn bound_trace_matches_exact_inverse_cdf_oracle() {
        // the bound-trace radial CDF is (u/a1)^{mu/2}; u = a1 V^{2/mu} is an
        // exact sampler to compare against
        let a1 = 2.0;
        let family = DensityFamily::BoundTrace { a1 };
        let class = SymmetryClass::new(Beta::One);
        let n = 3; // mu = 6
        let sampler = NormDependentSampler::new(&family, class, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..30_000)
            .map(|_| sampler.sample_trace_norm_sq(&mut rng))
            .collect();
        let mut rng2 = ChaCha8Rng::seed_from_u64(4);
        let ys: Vec<f64> = (0..30_000)
            .map(|_| {
                let v: f64 = rng2.random();
                a1 * v.powf(2.0 / 6.0)
            })
            .collect();
        let (mx, sx) = mean_and_se(&xs);
        let (my, sy) = mean_and_se(&ys);
        let se = (sx * sx + sy * sy).sqrt();
        assert!((mx - my).abs() < 4.0 * se);
        let (mx2, sx2) = mean_and_se(&xs.iter().map(|x| x * x).collect::<Vec<_>>());
        let (my2, sy2) = mean_and_se(&ys.iter().map(|y| y * y).collect::<Vec<_>>());
        let se2 = (sx2 * sx2 + sy2 * sy2).sqrt();
        assert!((mx2 - my2).abs() < 4.0 * se2);
    }

    #[test]
    fn gaussian_family_matches_direct_sampler() {
        // two-sample comparison of first two moments of Tr H^2
        let v = 0.8;
        let family = DensityFamily::Gaussian { v };
        let class = SymmetryClass::new(Beta::Two);
        let n = 2;
        let sampler = NormDependentSampler::new(&family, class, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..30_000)
            .map(|_| sampler.sample(&mut rng).trace_norm_sq())
            .collect();
        let mut rng2 = ChaCha8Rng::seed_from_u64(6);
        let ys: Vec<f64> = (0..30_000)
            .map(|_| sample_gaussian(class, n, v, &mut rng2).trace_norm_sq())
            .collect();
        for pow in [1i32, 2] {
            let (mx, sx) = mean_and_se(&xs.iter().map(|x| x.powi(pow)).collect::<Vec<_>>());
            let (my, sy) = mean_and_se(&ys.iter().map(|y| y.powi(pow)).collect::<Vec<_>>());
            let se = (sx * sx + sy * sy).sqrt();
            assert!((mx - my).abs() < 4.0 * se, "pow {pow}: {mx} vs {my}");
        }
    }

    #[test]
    fn heavy_tail_family_first_moment() {
        // non-extensive with Lambda = 4 at mu = 4: M_1 exists
        let (beta, n) = (Beta::Two, 2);
        let q = 1.0 + 1.0 / 6.0; // 1/(q-1) = 6, Lambda = 4
        let family = DensityFamily::NonExtensive { q, kappa: 1.0 };
        let sampler = NormDependentSampler::new(&family, SymmetryClass::new(beta), n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..60_000)
            .map(|_| sampler.sample_trace_norm_sq(&mut rng))
            .collect();
        let (mean, se) = mean_and_se(&xs);
        let want = moment(&family, beta, n, 1).unwrap().value;
        assert!(
            (mean - want).abs() < 4.0 * se,
            "mean {mean}, want {want}, se {se}"
        );
    }

    #[test]
    fn symplectic_spectrum_is_kramers_degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = sample_gaussian(SymmetryClass::new(Beta::Four), 3, 1.0, &mut rng);
        let raw = h.eigenvalues_raw_symplectic().unwrap();
        assert_eq!(raw.len(), 6);
        let scale = raw.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        for k in 0..3 {
            assert!(
                (raw[2 * k] - raw[2 * k + 1]).abs() < 1e-9 * scale,
                "pair {k}: {} vs {}",
                raw[2 * k],
                raw[2 * k + 1]
            );
        }
        // Kramers merge gives 3 values; Tr H^2 equals the sum over distinct
        // slots of lambda^2
        let merged = h.eigenvalues().unwrap();
        let sum2: f64 = merged.iter().map(|l| l * l).sum();
        assert!((sum2 - h.trace_norm_sq()).abs() < 1e-9 * sum2.abs().max(1.0));
    }

    #[test]
    fn trace_norm_equals_spectral_sum_all_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for beta in [Beta::One, Beta::Two, Beta::Four] {
            let h = sample_gaussian(SymmetryClass::new(beta), 4, 1.3, &mut rng);
            let vals = h.eigenvalues().unwrap();
            let sum2: f64 = vals.iter().map(|l| l * l).sum();
            assert!(
                (sum2 - h.trace_norm_sq()).abs() < 1e-9 * sum2.max(1.0),
                "beta {beta:?}"
            );
        }
    }
}
