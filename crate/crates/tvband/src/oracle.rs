//! Dense matrix model of the symmetric operator and its unitary extensions.
//!
//! Everything here is computed from the pair alone by linear algebra, with no
//! use of the characteristic function, so it serves as ground truth for the
//! spectral and kernel modules.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numeric::{C64, I};
use crate::pair::BandlimitPair;
use crate::solvers::jacobi;

/// Largest dimension handled by the dense solver.
pub const MAX_DIM: usize = 512;

/// `sigma_min(I - U)` below this marks the exceptional extension.
pub const EXCEPTIONAL_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_SWEEPS: usize = 60;

#[derive(Debug, Clone)]
pub struct MatrixModel {
    pub t0: Vec<f64>,
    /// Entries `sqrt(t'_n)/(t_n - i)`.
    pub phi_plus: DVector<C64>,
    /// Entries `sqrt(t'_n)/(t_n + i)`.
    pub phi_minus: DVector<C64>,
    /// `b(T0)` on `phi_plus`-perp, zero on `phi_plus`.
    pub v: DMatrix<C64>,
    first_label: i64,
}

impl MatrixModel {
    pub fn n(&self) -> usize {
        self.t0.len()
    }

    pub fn phi_norm_sqr(&self) -> f64 {
        self.phi_plus.norm_squared()
    }

    pub fn first_label(&self) -> i64 {
        self.first_label
    }

    /// `T0 + i` applied to `x`.
    pub fn shifted(&self, x: &DVector<C64>) -> DVector<C64> {
        DVector::from_fn(self.n(), |k, _| (self.t0[k] + I) * x[k])
    }
}

pub fn build_model(pair: &BandlimitPair) -> Result<MatrixModel> {
    pair.require_normalized()?;
    let n = pair.len();
    if n > MAX_DIM {
        return Err(Error::TooLarge { n, max: MAX_DIM });
    }
    let t0 = pair.nodes().to_vec();
    let w = pair.weights();
    let phi_plus = DVector::from_fn(n, |k, _| C64::from(w[k].sqrt()) / (t0[k] - I));
    let phi_minus = DVector::from_fn(n, |k, _| C64::from(w[k].sqrt()) / (t0[k] + I));
    let nn = phi_plus.norm_squared();
    let b = DMatrix::from_diagonal(&DVector::from_fn(n, |k, _| (t0[k] - I) / (t0[k] + I)));
    let proj = DMatrix::identity(n, n) - &phi_plus * phi_plus.adjoint() / C64::from(nn);
    let v = b * proj;
    Ok(MatrixModel { t0, phi_plus, phi_minus, v, first_label: pair.lo() })
}

/// `U(alpha) = V + alpha <., phi_+> phi_- / ||phi_+||^2`.
pub fn unitary_extension(model: &MatrixModel, alpha: C64) -> Result<DMatrix<C64>> {
    if !((alpha.norm() - 1.0).abs() < 1e-12) {
        return Err(Error::InvalidArgument(format!("|alpha| = {} is not 1", alpha.norm())));
    }
    let nn = model.phi_norm_sqr();
    Ok(&model.v + &model.phi_minus * model.phi_plus.adjoint() * (alpha / nn))
}

pub fn alpha_of(theta: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * theta)
}

#[derive(Debug, Clone)]
pub struct ExtensionSpectrum {
    pub theta: f64,
    /// Ascending finite eigenvalues.
    pub values: Vec<f64>,
    /// Unit eigenvectors as columns, matching `values`.
    pub vectors: DMatrix<C64>,
    /// Set when 1 is an eigenvalue of `U`; `values` then has `n - 1` entries.
    pub infinite: bool,
    /// Label of `values[0]`, consistent with the spectral module.
    pub first_label: i64,
}

impl ExtensionSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.vectors.column(k).into_owned()
    }
}

/// Eigenvalues of the self-adjoint extension with `alpha = e^{i 2 pi theta}`,
/// computed by Jacobi on `i(I + U)(I - U)^{-1}`.
pub fn extension_spectrum(model: &MatrixModel, theta: f64) -> Result<ExtensionSpectrum> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::InvalidArgument(format!("theta {theta} not in [0, 1)")));
    }
    let n = model.n();
    let u = unitary_extension(model, alpha_of(theta))?;
    let id = DMatrix::<C64>::identity(n, n);
    let svd = (&id - &u).svd(false, true);
    let (kmin, smin) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    let (basis, infinite) = if smin < EXCEPTIONAL_TOL {
        // complement of the fixed vector is invariant under U
        let vt = svd.v_t.expect("requested");
        let fixed: DVector<C64> = vt.row(kmin).adjoint();
        (complement_basis(&fixed), true)
    } else {
        (id.clone(), false)
    };
    let m = basis.ncols();
    let ur = basis.adjoint() * &u * &basis;
    let idr = DMatrix::<C64>::identity(m, m);
    let inv = (&idr - &ur)
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("I - U is singular".into()))?;
    let t = (&idr + &ur) * inv * I;
    let eig = jacobi::eigh(&t, JACOBI_TOL, JACOBI_SWEEPS)
        .map_err(|e| Error::Degenerate(format!("Jacobi stalled with off-diagonal norm {:e}", e.off)))?;
    let vectors = &basis * eig.vectors;
    let first_label = first_label(model, &eig.values, theta);
    Ok(ExtensionSpectrum { theta, values: eig.values, vectors, infinite, first_label })
}

// the nth eigenvalue sits in [t_n, t_{n+1}) for theta > 0; the leftmost one
// is below t_lo unless the point at infinity came from the left end
fn first_label(model: &MatrixModel, values: &[f64], theta: f64) -> i64 {
    match values.first() {
        Some(&v) if theta == 0.0 || v < model.t0[0] => model.first_label - i64::from(theta != 0.0),
        _ => model.first_label,
    }
}

fn complement_basis(v: &DVector<C64>) -> DMatrix<C64> {
    let n = v.len();
    let v = v.normalize();
    let p = DMatrix::<C64>::identity(n, n) - &v * v.adjoint();
    // orthonormal columns spanning ran(p)
    let svd = p.svd(true, false);
    let uu = svd.u.expect("requested");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    DMatrix::from_fn(n, n - 1, |r, c| uu[(r, idx[c])])
}

/// `t'_n(theta) = (1 + t_n^2) |<psi_n, phi_+>|^2 pi/||phi_+||^2`.
pub fn oracle_weights(model: &MatrixModel, spec: &ExtensionSpectrum) -> Vec<f64> {
    let scale = PI / model.phi_norm_sqr();
    (0..spec.len())
        .map(|k| {
            let c = spec.vector(k).dotc(&model.phi_plus);
            let t = spec.values[k];
            (1.0 + t * t) * c.norm_sqr() * scale
        })
        .collect()
}

/// `|<psi_n(theta), psi_m(beta)>|` for all pairs, rows indexing `a`.
pub fn overlap_moduli(a: &ExtensionSpectrum, b: &ExtensionSpectrum) -> DMatrix<f64> {
    let g = a.vectors.adjoint() * &b.vectors;
    g.map(|z| z.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{self, KernelContext};
    use crate::pair::random_pair;
    use crate::spectral::{exceptional_theta, full_sampling_sequence};
    use rand::SeedableRng;

    fn pair(seed: u64, n: usize) -> BandlimitPair {
        random_pair(&mut rand::rngs::StdRng::seed_from_u64(seed), n)
    }

    #[test]
    fn single_atom() {
        let p = crate::pair::normalize_pair(&BandlimitPair::new(0, vec![0.7], vec![1.0]).unwrap()).unwrap();
        let m = build_model(&p).unwrap();
        let w = p.weights()[0];
        assert!((m.phi_plus[0] - C64::from(w.sqrt()) / (0.7 - I)).norm() < 1e-15);
    }

    #[test]
    fn norms() {
        let m = build_model(&pair(1, 7)).unwrap();
        assert!((m.phi_plus.norm() - m.phi_minus.norm()).abs() < 1e-14);
        assert!((m.phi_norm_sqr() - PI).abs() < 1e-12);
    }

    #[test]
    fn budget() {
        let p = BandlimitPair::paley_wiener(PI, 300).unwrap();
        assert!(matches!(build_model(&p), Err(Error::TooLarge { n: 601, .. })));
    }

    #[test]
    fn domain_is_orthogonal_to_phi_plus() {
        // dom T = (T0 + i)^{-1} phi_+-perp: <phi_+, (T0 + i) psi> = 0
        let m = build_model(&pair(2, 5)).unwrap();
        let n = m.n();
        let perp = complement_basis(&m.phi_plus);
        for c in 0..n - 1 {
            let x = perp.column(c).into_owned();
            let psi = DVector::from_fn(n, |k, _| x[k] / (m.t0[k] + I));
            assert!(m.phi_plus.dotc(&m.shifted(&psi)).norm() < 1e-14);
        }
    }

    #[test]
    fn unitary_and_extends() {
        let m = build_model(&pair(3, 6)).unwrap();
        let a = C64::from_polar(1.0, PI / 3.0);
        let u = unitary_extension(&m, a).unwrap();
        let id = DMatrix::<C64>::identity(6, 6);
        let r = (u.adjoint() * &u - &id).camax();
        assert!(r < 1e-12, "{r}");
        let vv = m.v.adjoint() * &m.v;
        assert!((&u * vv - &m.v).camax() < 1e-12);
        assert!((&u * &m.phi_plus - &m.phi_minus * a).camax() < 1e-12);
        assert!(unitary_extension(&m, C64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn theta_zero_gives_nodes_and_weights() {
        let p = pair(4, 7);
        let m = build_model(&p).unwrap();
        let s = extension_spectrum(&m, 0.0).unwrap();
        assert!(!s.infinite);
        assert_eq!(s.first_label, p.lo());
        for (a, b) in s.values.iter().zip(p.nodes()) {
            assert!((a - b).abs() < 1e-10);
        }
        for (a, b) in oracle_weights(&m, &s).iter().zip(p.weights()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn exceptional_theta_detected() {
        let p = pair(5, 5);
        let m = build_model(&p).unwrap();
        let star = exceptional_theta(&p).unwrap();
        let s = extension_spectrum(&m, star).unwrap();
        assert!(s.infinite);
        assert_eq!(s.len(), 4);
        let ours = full_sampling_sequence(&p, star).unwrap();
        assert_eq!(ours.len(), 4);
        for (a, b) in s.values.iter().zip(ours.points()) {
            assert!((a - b).abs() < 1e-7, "{a} {b}");
        }
    }

    #[test]
    fn spectra_disjoint() {
        let m = build_model(&pair(6, 6)).unwrap();
        let a = extension_spectrum(&m, 0.2).unwrap();
        let b = extension_spectrum(&m, 0.21).unwrap();
        let gap = a.values.iter().flat_map(|x| b.values.iter().map(move |y| (x - y).abs())).fold(f64::INFINITY, f64::min);
        assert!(gap > 0.0);
    }

    #[test]
    fn finite_difference_weights() {
        let p = pair(7, 5);
        let m = build_model(&p).unwrap();
        let h = 1e-5;
        let theta = 0.3;
        let s = extension_spectrum(&m, theta).unwrap();
        let sp = extension_spectrum(&m, theta + h).unwrap();
        let sm = extension_spectrum(&m, theta - h).unwrap();
        for (k, w) in oracle_weights(&m, &s).iter().enumerate() {
            let fd = (sp.values[k] - sm.values[k]) / (2.0 * h);
            assert!((w - fd).abs() < 1e-5 * w.max(1.0), "{w} {fd}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::{prop_assert, prop_assume, proptest, ProptestConfig};

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn matches_spectral(seed in 0u64..10_000, n in 3usize..9) {
                let p = pair(seed, n);
                let m = build_model(&p).unwrap();
                let star = exceptional_theta(&p).unwrap();
                for theta in [0.0, 0.25, 0.5, 0.75] {
                    if (theta - star).abs() < 1e-6 { continue; }
                    let o = extension_spectrum(&m, theta).unwrap();
                    let s = full_sampling_sequence(&p, theta).unwrap();
                    prop_assert!(o.values.len() == s.len());
                    prop_assert!(o.first_label == s.first_label());
                    for (a, b) in o.values.iter().zip(s.points()) {
                        prop_assert!((a - b).abs() <= 1e-8 * b.abs().max(1.0), "{theta}: {a} {b}");
                    }
                    for (a, b) in oracle_weights(&m, &o).iter().zip(s.weights()) {
                        prop_assert!((a - b).abs() <= 1e-7 * b.max(1.0), "{a} {b}");
                    }
                    let sum: f64 = o.values.iter().zip(oracle_weights(&m, &o)).map(|(t, w)| w / (1.0 + t * t)).sum();
                    prop_assert!((sum - PI).abs() < 1e-10);
                }
            }

            #[test]
            fn eigenvalues_of_u_unimodular(seed in 0u64..10_000, n in 3usize..9, theta in 0.0f64..1.0) {
                let m = build_model(&pair(seed, n)).unwrap();
                let u = unitary_extension(&m, alpha_of(theta)).unwrap();
                let (_, tri) = u.schur().unpack();
                for z in tri.diagonal().iter() {
                    prop_assert!((z.norm() - 1.0).abs() < 1e-12);
                }
            }

            #[test]
            fn overlaps_match_kernel(seed in 0u64..10_000, n in 3usize..8) {
                let p = pair(seed, n);
                let star = exceptional_theta(&p).unwrap();
                let (theta, beta) = (0.1, 0.65);
                prop_assume!((theta - star).abs() > 1e-3 && (beta - star).abs() > 1e-3);
                let m = build_model(&p).unwrap();
                let a = extension_spectrum(&m, theta).unwrap();
                let b = extension_spectrum(&m, beta).unwrap();
                let g = overlap_moduli(&a, &b);
                let ctx = KernelContext::new(&p).unwrap();
                for (i, t) in a.values.iter().enumerate() {
                    for (j, s) in b.values.iter().enumerate() {
                        let k = kernel::kernel_eval(&ctx, *t, *s).abs();
                        prop_assert!((g[(i, j)] - k).abs() < 1e-8, "{} {}", g[(i, j)], k);
                    }
                }
            }
        }
    }
}
