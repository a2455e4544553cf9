//! Dense symmetric/Hermitian eigenvalue solver.
//!
//! Real symmetric matrices go through Householder tridiagonalization
//! followed by the implicit-shift QL iteration (eigenvalues only).
//! Complex Hermitian matrices are embedded as real symmetric matrices of
//! twice the dimension, [[X, -Y], [Y, X]] for A = X + iY, whose spectrum
//! is the Hermitian spectrum doubled; the doubled copies are merged by
//! adjacent pairing after sorting. A cyclic Jacobi sweep serves as a
//! fallback and as an independent oracle in the tests.

use crate::error::{Error, Result};
use num_complex::Complex64;

const MAX_QL_ITERS: usize = 50;

fn pythag(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Householder reduction of a symmetric matrix (row-major, n x n) to
/// tridiagonal form. Returns (diagonal, subdiagonal); the subdiagonal is
/// stored in e[1..n]. The input buffer is destroyed.
fn householder_tridiag(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
/// `d` holds the diagonal, `e[1..]` the subdiagonal. Eigenvalues come back
/// in `d`, unsorted.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERS {
                return Err(Error::EigenNonConvergence(MAX_QL_ITERS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = pythag(g, 1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = d[i + 1];
                let _ = f;
            }
            if r == 0.0 && m > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Cyclic Jacobi eigenvalue iteration for small symmetric matrices.
/// Quadratically convergent and simple; used as fallback and test oracle.
pub fn jacobi_eigenvalues(a_in: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut a = a_in.to_vec();
    for sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off.sqrt() <= 1e-15 * frobenius(&a, n).max(f64::MIN_POSITIVE) {
            let mut vals: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            vals.sort_by(f64::total_cmp);
            return Ok(vals);
        }
        let _ = sweep;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + pythag(theta, 1.0))
                } else {
                    1.0 / (theta - pythag(theta, 1.0))
                };
                let c = 1.0 / pythag(t, 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::EigenNonConvergence(100))
}

fn frobenius(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[i * n + j] * a[i * n + j];
        }
    }
    s.sqrt()
}

/// Eigenvalues of a real symmetric matrix (row-major n x n), ascending.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    let mut work = a.to_vec();
    let (mut d, mut e) = householder_tridiag(&mut work, n);
    match ql_implicit(&mut d, &mut e) {
        Ok(()) => {
            d.sort_by(f64::total_cmp);
            Ok(d)
        }
        Err(_) if n <= 16 => jacobi_eigenvalues(a, n),
        Err(err) => Err(err),
    }
}

/// Eigenvalues of a complex Hermitian matrix (row-major n x n), ascending.
///
/// Embeds A = X + iY into the real symmetric [[X, -Y], [Y, X]] of
/// dimension 2n, whose spectrum is that of A with every eigenvalue
/// doubled, then merges adjacent pairs.
pub fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = 2 * n;
    let mut r = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            let x = a[i * n + j].re;
            let y = a[i * n + j].im;
            r[i * m + j] = x;
            r[(i + n) * m + (j + n)] = x;
            r[i * m + (j + n)] = -y;
            r[(i + n) * m + j] = y;
        }
    }
    let doubled = symmetric_eigenvalues(&r, m)?;
    // adjacent entries are the same eigenvalue up to rounding
    let mut vals = Vec::with_capacity(n);
    for k in 0..n {
        vals.push(0.5 * (doubled[2 * k] + doubled[2 * k + 1]));
    }
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_matrix_returns_sorted_diagonal() {
        let a = [3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
        let vals = symmetric_eigenvalues(&a, 3).unwrap();
        assert_eq!(vals, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let (a, b, c) = (1.3, -0.7, 0.4);
        let m = [a, b, b, c];
        let vals = symmetric_eigenvalues(&m, 2).unwrap();
        let disc = ((a - c) * 0.5).hypot(b);
        let lo = 0.5 * (a + c) - disc;
        let hi = 0.5 * (a + c) + disc;
        assert!((vals[0] - lo).abs() < 1e-14);
        assert!((vals[1] - hi).abs() < 1e-14);
    }

    #[test]
    fn trace_identities_random_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 6;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.random::<f64>() * 2.0 - 1.0;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let vals = symmetric_eigenvalues(&a, n).unwrap();
        let tr: f64 = (0..n).map(|i| a[i * n + i]).sum();
        let tr2: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[j * n + i])
            .sum();
        let s1: f64 = vals.iter().sum();
        let s2: f64 = vals.iter().map(|v| v * v).sum();
        assert!((s1 - tr).abs() < 1e-10 * tr.abs().max(1.0));
        assert!((s2 - tr2).abs() < 1e-10 * tr2.abs().max(1.0));
    }

    #[test]
    fn ql_matches_jacobi_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 5, 8, 12] {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let v: f64 = rng.random::<f64>() * 4.0 - 2.0;
                    a[i * n + j] = v;
                    a[j * n + i] = v;
                }
            }
            let ql = symmetric_eigenvalues(&a, n).unwrap();
            let jac = jacobi_eigenvalues(&a, n).unwrap();
            for (x, y) in ql.iter().zip(jac.iter()) {
                assert!((x - y).abs() < 1e-10 * x.abs().max(1.0), "n = {n}");
            }
        }
    }

    #[test]
    fn hermitian_trace_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 6;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = Complex64::new(rng.random::<f64>() * 2.0 - 1.0, 0.0);
            for j in 0..i {
                let z = Complex64::new(
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                );
                a[i * n + j] = z;
                a[j * n + i] = z.conj();
            }
        }
        let vals = hermitian_eigenvalues(&a, n).unwrap();
        let tr: f64 = (0..n).map(|i| a[i * n + i].re).sum();
        let tr2: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (a[i * n + j] * a[j * n + i]).re)
            .sum();
        let s1: f64 = vals.iter().sum();
        let s2: f64 = vals.iter().map(|v| v * v).sum();
        assert!((s1 - tr).abs() < 1e-10 * tr.abs().max(1.0));
        assert!((s2 - tr2).abs() < 1e-10 * tr2.abs().max(1.0));
    }

    #[test]
    fn hermitian_known_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let a = [
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(2.0, 0.0),
        ];
        let vals = hermitian_eigenvalues(&a, 2).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn residual_norm_via_characteristic_polynomial() {
        // eigenvalues of a 3x3 must zero the characteristic polynomial to
        // near machine precision relative to the matrix scale
        let a = [2.0, 1.0, 0.5, 1.0, -1.0, 0.3, 0.5, 0.3, 0.7];
        let n = 3;
        let vals = symmetric_eigenvalues(&a, n).unwrap();
        for &l in &vals {
            // det(A - l I) via cofactor expansion
            let m = |i: usize, j: usize| a[i * n + j] - if i == j { l } else { 0.0 };
            let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
            assert!(det.abs() < 1e-10, "lambda = {l}, char poly = {det:e}");
        }
    }
}
