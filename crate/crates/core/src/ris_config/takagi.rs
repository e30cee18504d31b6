//! Takagi factorization `A = Q Sigma Q^T` of complex symmetric matrices and
//! the per-group scattering synthesis built on it.
//!
//! The factorization starts from an ordered SVD `A = U Sigma V^H` and
//! corrects the phases of `U` using `nu = diag(U^H conj(V))`, `Q = U
//! diag(exp(j arg(nu) / 2))`. That rule is only valid when the singular
//! values are distinct: inside a repeated singular value the SVD basis is
//! arbitrary and `U^H conj(V)` is a full symmetric unitary block rather than
//! a diagonal. Such blocks get a symmetric square root instead, which
//! reduces to the scalar rule for blocks of size one.

use alloc::format;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use nalgebra::{DMatrix, DVector};

use crate::{CMatrix, CVector, Error, Result, C64};

/// Relative gap below which neighboring singular values are one cluster.
const CLUSTER_TOL: f64 = 1e-9;
/// Relative size below which a cluster is treated as the null space.
const NULL_TOL: f64 = 1e-13;
/// Relative column coupling below which a Jacobi rotation is skipped.
const JACOBI_TOL: f64 = 1e-15;

/// `A = Q diag(sigma) Q^T` with `Q` unitary and `sigma` non-increasing.
#[derive(Debug, Clone)]
pub struct Takagi {
    pub q: CMatrix,
    pub sigma: DVector<f64>,
}

/// Takagi factorization of a complex symmetric matrix.
pub fn takagi(a: &CMatrix) -> Result<Takagi> {
    if !a.is_square() {
        return Err(Error::Contract(format!(
            "matrix is {}x{}, not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let norm = a.norm();
    let asym = (a - a.transpose()).norm();
    if asym > 1e-9 * norm {
        return Err(Error::Contract(format!(
            "matrix is not symmetric: ||A - A^T|| = {asym:e}, ||A|| = {norm:e}"
        )));
    }
    let n = a.nrows();
    if norm == 0.0 {
        return Ok(Takagi {
            q: CMatrix::identity(n, n),
            sigma: DVector::zeros(n),
        });
    }
    let (u, sigma, v) = svd(a);
    let smax = sigma[0];

    let mut q = u.clone();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && sigma[end - 1] - sigma[end] <= CLUSTER_TOL * smax {
            end += 1;
        }
        if sigma[start] > NULL_TOL * smax {
            let uk = u.columns(start, end - start);
            let vk = v.columns(start, end - start);
            let z = uk.adjoint() * vk.map(|x| x.conj());
            let s = symmetric_unitary_sqrt(&z);
            q.columns_mut(start, end - start).copy_from(&(uk * s));
        }
        start = end;
    }
    Ok(Takagi { q, sigma })
}

/// SVD `A = U diag(sigma) V^H` with `sigma` non-increasing, by one-sided
/// (Hestenes) Jacobi rotations. Columns of `U` for numerically zero singular
/// values are completed to an orthonormal basis.
///
/// nalgebra's complex SVD loses accuracy on rank-deficient input such as the
/// rank-two coupling matrices, which is exactly the case this module needs.
fn svd(a: &CMatrix) -> (CMatrix, DVector<f64>, CMatrix) {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n, n);
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g <= JACOBI_TOL * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 { 1.0 } else { -1.0 }
                    / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut w, &mut v] {
                    for r in 0..m.nrows() {
                        let x = m[(r, p)];
                        let y = m[(r, q)] * phase.conj();
                        m[(r, p)] = x * c - y * s;
                        m[(r, q)] = (x * s + y * c) * phase;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: alloc::vec::Vec<(f64, usize)> =
        (0..n).map(|k| (w.column(k).norm(), k)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let sigma = DVector::from_fn(n, |k, _| order[k].0);
    let smax = sigma[0];
    let mut u = CMatrix::zeros(a.nrows(), n);
    let mut vs = CMatrix::zeros(n, n);
    let mut rank = 0;
    for (k, &(s, j)) in order.iter().enumerate() {
        vs.set_column(k, &v.column(j));
        if s > NULL_TOL * smax {
            u.set_column(k, &(w.column(j) / C64::new(s, 0.0)));
            rank = k + 1;
        }
    }
    complete_orthonormal(&mut u, rank);
    (u, sigma, vs)
}

/// Fills columns `rank..` of `u` so that all columns are orthonormal,
/// greedily taking the unit vector with the largest residual.
fn complete_orthonormal(u: &mut CMatrix, rank: usize) {
    let n = u.nrows();
    for k in rank..u.ncols() {
        let mut best: Option<(f64, CVector)> = None;
        for i in 0..n {
            let mut x = CVector::zeros(n);
            x[i] = C64::new(1.0, 0.0);
            // two Gram-Schmidt passes
            for _ in 0..2 {
                for j in 0..k {
                    let c = u.column(j).dotc(&x);
                    x -= u.column(j) * c;
                }
            }
            let r = x.norm();
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, x));
            }
        }
        let (r, x) = best.expect("n > 0");
        u.set_column(k, &(x / C64::new(r, 0.0)));
    }
}

/// `S` unitary with `S S^T = Z` for a symmetric unitary `Z`.
///
/// Writing `Z = X + jY`, unitarity makes the real symmetric `X` and `Y`
/// commute, so one real orthogonal `W` diagonalizes both and `W^T Z W` is a
/// diagonal of unit-modulus entries `exp(j theta)`. Then
/// `S = W diag(exp(j theta / 2))`.
pub(crate) fn symmetric_unitary_sqrt(z: &CMatrix) -> CMatrix {
    let k = z.nrows();
    if k == 1 {
        return CMatrix::from_element(1, 1, C64::from_polar(1.0, 0.5 * z[(0, 0)].arg()));
    }
    let zs = (z + z.transpose()) * C64::new(0.5, 0.0);
    let x = zs.map(|c| c.re);
    let y = zs.map(|c| c.im);
    let mut best: Option<(f64, DMatrix<f64>)> = None;
    // irrational-ish mixing weights; one of them separates the joint spectrum
    for gamma in [
        0.618_033_988_749_895,
        1.324_717_957_244_746,
        -0.414_213_562_373_095,
        core::f64::consts::E,
    ] {
        let w = (&x + &y * gamma).symmetric_eigen().eigenvectors;
        let wc = w.map(|r| C64::new(r, 0.0));
        let d = wc.transpose() * &zs * &wc;
        let off = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| d[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if best.as_ref().is_none_or(|(o, _)| off < *o) {
            best = Some((off, w));
        }
        if off < 1e-12 {
            break;
        }
    }
    let w = best
        .expect("at least one candidate")
        .1
        .map(|r| C64::new(r, 0.0));
    let d = w.transpose() * &zs * &w;
    let half = CMatrix::from_diagonal(&CVector::from_fn(k, |i, _| {
        C64::from_polar(1.0, 0.5 * d[(i, i)].arg())
    }));
    w * half
}

/// `A = v u^H + (v u^H)^T` for unit `u`, `v`.
pub fn coupling_matrix(u: &CVector, v: &CVector) -> CMatrix {
    let outer = v * u.adjoint();
    &outer + outer.transpose()
}

/// Group scattering matrix `Q Q^T` from a dense Takagi factorization of the
/// coupling matrix. Cubic in the group size.
pub fn group_scattering_dense(u: &CVector, v: &CVector) -> Result<CMatrix> {
    let t = takagi(&coupling_matrix(u, v))?;
    Ok(&t.q * t.q.transpose())
}

/// Group scattering matrix from the rank-two structure of the coupling
/// matrix. Quadratic in the group size.
///
/// The coupling matrix lives on `span{v, conj(u)}`. With an orthonormal
/// basis `E` of that span, `A = E C E^T` for the symmetric `C = E^H A
/// conj(E)`, so its Takagi factor on the range is `E Q_c`. The null space is
/// completed by the trailing columns `N` of a product of two Householder
/// reflectors whose leading columns span `E`; choosing `V = conj(N)` on the
/// null space leaves those columns without phase correction, and
/// `N N^T = H H^T - H_r H_r^T` costs only rank-one updates.
pub fn group_scattering(u: &CVector, v: &CVector) -> Result<CMatrix> {
    Error::check_len(u.len(), v.len())?;
    let n = u.len();
    let e1 = v.clone();
    let uc = u.conjugate();
    let mut e2 = &uc - &e1 * e1.dotc(&uc);
    e2 -= &e1 * e1.dotc(&e2);
    let e2_norm = e2.norm();
    let rank = if e2_norm > 1e-13 && n > 1 { 2 } else { 1 };
    let basis = if rank == 2 {
        e2 /= C64::new(e2_norm, 0.0);
        CMatrix::from_columns(&[e1.clone(), e2.clone()])
    } else {
        CMatrix::from_columns(core::slice::from_ref(&e1))
    };

    // C = p q^H + (p q^H)^T with p = E^H v, q = E^T u
    let p = basis.adjoint() * v;
    let qv = basis.transpose() * u;
    let pq = &p * qv.adjoint();
    let c = &pq + pq.transpose();
    let t = takagi(&c)?;
    let qr = &basis * &t.q;
    let mut omega = &qr * qr.transpose();
    if rank == n {
        return Ok(omega);
    }

    let (w1, beta1) = householder(&e1, 0);
    let mut k = CMatrix::identity(n, n);
    let mut betas = [beta1, C64::new(1.0, 0.0)];
    if rank == 2 {
        let c2 = reflect(&w1, &e2);
        let (w2, beta2) = householder(&c2, 1);
        betas[1] = beta2;
        // K = H2 H2^T
        let w2c = w2.conjugate();
        let s = w2.dotc(&w2c);
        k -= &w2 * w2.adjoint() * C64::new(2.0, 0.0);
        k -= &w2c * w2.transpose() * C64::new(2.0, 0.0);
        k += &w2 * w2.transpose() * (s * 4.0);
    }
    // H1 K H1^T
    let left = &k - &w1 * (w1.adjoint() * &k) * C64::new(2.0, 0.0);
    let hht = &left - (&left * w1.conjugate()) * w1.transpose() * C64::new(2.0, 0.0);
    omega += hht;
    let cols = [&e1, &e2];
    for r in 0..rank {
        let col = cols[r];
        omega -= col * col.transpose() * betas[r].conj().powi(2);
    }
    Ok(omega)
}

/// Unit `w` (zero above `offset`) and unimodular `beta` such that
/// `(I - 2 w w^H) x = beta e_offset` for a unit `x` supported on
/// `offset..`.
fn householder(x: &CVector, offset: usize) -> (CVector, C64) {
    let x0 = x[offset];
    let beta = if x0.norm() > 0.0 {
        -x0 / x0.norm()
    } else {
        C64::new(-1.0, 0.0)
    };
    let mut w = x.clone();
    for i in 0..offset {
        w[i] = C64::new(0.0, 0.0);
    }
    w[offset] -= beta;
    let nw = w.norm();
    w /= C64::new(nw, 0.0);
    (w, beta)
}

fn reflect(w: &CVector, x: &CVector) -> CVector {
    x - w * (w.dotc(x) * 2.0)
}
