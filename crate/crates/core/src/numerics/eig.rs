use alloc::vec;
use alloc::vec::Vec;

use super::matrix::Matrix;

/// Rejection reasons for the symmetric eigensolvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigError {
    NotSquare { rows: usize, cols: usize },
    NotSymmetric { row: usize, col: usize },
}

impl core::fmt::Display for EigError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EigError::NotSquare { rows, cols } => {
                write!(f, "matrix is not square ({rows}x{cols})")
            }
            EigError::NotSymmetric { row, col } => {
                write!(f, "matrix is not symmetric at ({row}, {col})")
            }
        }
    }
}

impl core::error::Error for EigError {}

/// Symmetry tolerance: entries must match their transpose within 1e-10
/// relative to the pair's magnitude.
const SYMMETRY_RTOL: f64 = 1e-10;

/// Convergence: off-diagonal Frobenius norm below 1e-12 · ‖A‖_F.
const JACOBI_RTOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

fn check_symmetric(a: &Matrix) -> Result<(), EigError> {
    if a.rows() != a.cols() {
        return Err(EigError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    for r in 0..a.rows() {
        for c in r + 1..a.cols() {
            let x = a.get(r, c);
            let y = a.get(c, r);
            let scale = 1.0f64.max(libm::fabs(x)).max(libm::fabs(y));
            if libm::fabs(x - y) > SYMMETRY_RTOL * scale {
                return Err(EigError::NotSymmetric { row: r, col: c });
            }
        }
    }
    Ok(())
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let mut s = 0.0;
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if r != c {
                let v = a.get(r, c);
                s += v * v;
            }
        }
    }
    libm::sqrt(s)
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matrix whose columns are
/// the matching orthonormal eigenvectors, so `A = V Λ Vᵀ`.
pub fn sym_eig(a: &Matrix) -> Result<(Vec<f64>, Matrix), EigError> {
    check_symmetric(a)?;
    let n = a.rows();
    // work on the exactly-symmetrized copy
    let mut w = Matrix::from_fn(n, n, |r, c| 0.5 * (a.get(r, c) + a.get(c, r)));
    let mut v = Matrix::identity(n);
    let norm = w.frobenius_norm();
    let tol = JACOBI_RTOL * norm;

    if n > 1 && norm > 0.0 {
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&w) <= tol {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = w.get(p, q);
                    if apq == 0.0 {
                        continue;
                    }
                    let app = w.get(p, p);
                    let aqq = w.get(q, q);
                    let theta = 0.5 * (aqq - app) / apq;
                    // tan of the rotation angle, smaller root
                    let t = if theta >= 0.0 {
                        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                    } else {
                        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                    };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    let tau = s / (1.0 + c);

                    w.set(p, p, app - t * apq);
                    w.set(q, q, aqq + t * apq);
                    w.set(p, q, 0.0);
                    w.set(q, p, 0.0);
                    for r in 0..n {
                        if r != p && r != q {
                            let arp = w.get(r, p);
                            let arq = w.get(r, q);
                            let nrp = arp - s * (arq + tau * arp);
                            let nrq = arq + s * (arp - tau * arq);
                            w.set(r, p, nrp);
                            w.set(p, r, nrp);
                            w.set(r, q, nrq);
                            w.set(q, r, nrq);
                        }
                    }
                    for r in 0..n {
                        let vrp = v.get(r, p);
                        let vrq = v.get(r, q);
                        v.set(r, p, vrp - s * (vrq + tau * vrp));
                        v.set(r, q, vrq + s * (vrp - tau * vrq));
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        w.get(j, j)
            .partial_cmp(&w.get(i, i))
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| w.get(i, i)).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok((eigenvalues, vectors))
}

/// Eigenvalues (descending) of a symmetric matrix, without eigenvectors.
///
/// Householder tridiagonalization followed by implicit-shift QL. Cost is one
/// O(n³) reduction rather than Jacobi's repeated sweeps, which is what makes
/// the d×d exact-Hessian and Gauss-Newton rank oracles affordable.
pub fn sym_eigenvalues(a: &Matrix) -> Vec<f64> {
    assert_eq!(a.rows(), a.cols(), "sym_eigenvalues: matrix must be square");
    let n = a.rows();
    if n == 0 {
        return Vec::new();
    }
    let mut w = Matrix::from_fn(n, n, |r, c| 0.5 * (a.get(r, c) + a.get(c, r)));
    let (mut d, mut e) = tridiagonalize(&mut w);
    ql_implicit(&mut d, &mut e);
    d.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    d
}

/// Householder reduction of a symmetric matrix to tridiagonal form
/// (diagonal `d`, subdiagonal `e`; `e[0]` is zero).
fn tridiagonalize(w: &mut Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = w.rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += libm::fabs(w.get(i, k));
            }
            if scale == 0.0 {
                e[i] = w.get(i, l);
            } else {
                for k in 0..=l {
                    let v = w.get(i, k) / scale;
                    w.set(i, k, v);
                    h += v * v;
                }
                let f = w.get(i, l);
                let g = if f >= 0.0 {
                    -libm::sqrt(h)
                } else {
                    libm::sqrt(h)
                };
                e[i] = scale * g;
                h -= f * g;
                w.set(i, l, f - g);
                let mut fsum = 0.0;
                for j in 0..=l {
                    let mut g2 = 0.0;
                    for k in 0..=j {
                        g2 += w.get(j, k) * w.get(i, k);
                    }
                    for k in j + 1..=l {
                        g2 += w.get(k, j) * w.get(i, k);
                    }
                    e[j] = g2 / h;
                    fsum += e[j] * w.get(i, j);
                }
                let hh = fsum / (h + h);
                for j in 0..=l {
                    let f2 = w.get(i, j);
                    let g2 = e[j] - hh * f2;
                    e[j] = g2;
                    for k in 0..=j {
                        let v = w.get(j, k) - (f2 * e[k] + g2 * w.get(i, k));
                        w.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = w.get(i, l);
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = w.get(i, i);
    }
    (d, e)
}

/// Implicit-shift QL iteration on a tridiagonal matrix; eigenvalues land in `d`.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n <= 1 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = libm::fabs(d[m]) + libm::fabs(d[m + 1]);
                if libm::fabs(e[m]) + dd == dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "ql_implicit: too many iterations");

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_eigenvalues() {
        let id = Matrix::identity(2);
        let (vals, _) = sym_eig(&id).unwrap();
        assert_eq!(vals, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_matrix_yields_axis_eigenvectors() {
        let a = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]);
        let (vals, vecs) = sym_eig(&a).unwrap();
        assert_eq!(vals, vec![3.0, 1.0]);
        assert!((libm::fabs(vecs.get(0, 0)) - 1.0).abs() < 1e-12);
        assert!(vecs.get(1, 0).abs() < 1e-12);
        assert!((libm::fabs(vecs.get(1, 1)) - 1.0).abs() < 1e-12);
        assert!(vecs.get(0, 1).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_square() {
        let a = Matrix::zeros(2, 3);
        assert_eq!(
            sym_eig(&a).unwrap_err(),
            EigError::NotSquare { rows: 2, cols: 3 }
        );
    }

    #[test]
    fn rejects_asymmetric() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.0]]);
        assert!(matches!(
            sym_eig(&a).unwrap_err(),
            EigError::NotSymmetric { .. }
        ));
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        use crate::numerics::RandomStream;
        let mut rng = RandomStream::new(11, 0);
        let b = Matrix::from_fn(5, 5, |_, _| rng.next_gaussian());
        let a = b.gram_nt();
        let (vals, _) = sym_eig(&a).unwrap();
        let trace: f64 = (0..5).map(|i| a.get(i, i)).sum();
        let sum: f64 = vals.iter().sum();
        assert!((sum - trace).abs() <= 1e-9 * trace.abs().max(1.0));
    }

    #[test]
    fn values_only_path_matches_jacobi() {
        use crate::numerics::RandomStream;
        let mut rng = RandomStream::new(7, 1);
        for n in [1usize, 2, 3, 8, 20] {
            let b = Matrix::from_fn(n, n, |_, _| rng.next_gaussian());
            let a = Matrix::from_fn(n, n, |r, c| 0.5 * (b.get(r, c) + b.get(c, r)));
            let (jvals, _) = sym_eig(&a).unwrap();
            let qvals = sym_eigenvalues(&a);
            let scale = jvals
                .iter()
                .map(|v| libm::fabs(*v))
                .fold(1.0f64, f64::max);
            for (x, y) in jvals.iter().zip(qvals.iter()) {
                assert!(
                    (x - y).abs() <= 1e-9 * scale,
                    "n={n}: jacobi {x} vs ql {y}"
                );
            }
        }
    }
}
