//! Cyclic Jacobi eigensolver for dense Hermitian matrices.

use nalgebra::DMatrix;

use crate::numeric::C64;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unit eigenvectors, column `j` for `values[j]`.
    pub vectors: DMatrix<C64>,
    pub sweeps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoConvergence {
    pub off: f64,
}

/// Diagonalize a Hermitian matrix. Only the Hermitian part of `a` is used.
/// Stops once the off-diagonal Frobenius norm is below `tol * ||A||_F`.
pub fn eigh(a: &DMatrix<C64>, tol: f64, max_sweeps: usize) -> Result<Eigen, NoConvergence> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut m = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let mut v = DMatrix::<C64>::identity(n, n);
    let scale = m.norm();
    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= tol * scale || n < 2 {
            break;
        }
        if sweeps == max_sweeps {
            return Err(NoConvergence { off });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors, sweeps })
}

fn off_norm(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

// Zero m[p,q] with Q = diag(1, e^{-i phi}) G, G a real plane rotation.
fn rotate(m: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize) {
    let b = m[(p, q)];
    let r = b.norm();
    if r == 0.0 {
        return;
    }
    let phase = b / r;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = phase.conj();
    let qpp = C64::new(c, 0.0);
    let qpq = C64::new(s, 0.0);
    let qqp = -e * s;
    let qqq = e * c;
    let n = m.nrows();
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * qpp + mq * qqp;
        m[(i, q)] = mp * qpq + mq * qqq;
    }
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = qpp.conj() * mp + qqp.conj() * mq;
        m[(q, j)] = qpq.conj() * mp + qqq.conj() * mq;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
    for i in 0..n {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * qpp + vq * qqp;
        v[(i, q)] = vp * qpq + vq * qqq;
    }
}
