//! Sampling lattices and the atomic sums evaluated over them.
//!
//! Every lattice `(t_n(theta), t'_n(theta))` is itself a bandlimit pair for the
//! shifted characteristic function `Theta * exp(-2 pi i theta)`, so all the
//! series machinery lives here and is shared by the node lattice and the
//! theta lattices. Sums are evaluated with the term of the nearest lattice
//! point pulled out and multiplied through by `t - t_k`, which keeps every
//! quantity finite on the lattice itself.

use std::f64::consts::PI;

use crate::error::{Error, Point, Result};
use crate::numeric::{parity_sign, ComplexSum, NeumaierSum, C64, I};

/// Borrowed view of a complete lattice.
#[derive(Debug, Clone, Copy)]
pub struct Lattice<'a> {
    theta: f64,
    first_label: i64,
    points: &'a [f64],
    weights: &'a [f64],
    c_re: f64,
    c_im: f64,
}

/// Sums at a real point with the nearest atom isolated.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Isolated {
    /// Index of the nearest lattice point.
    pub k: usize,
    /// `t - t_k`.
    pub delta: f64,
    /// `(g(t) - C) * delta`, where `g(t) = sum w_n/(t_n - t)`.
    pub x: C64,
    /// `w_k + delta^2 sum_{n != k} w_n/(t_n - t)^2`, i.e. `delta^2 sum w_n/(t_n - t)^2`.
    pub a: f64,
}

impl<'a> Lattice<'a> {
    pub(crate) fn new(
        theta: f64,
        first_label: i64,
        points: &'a [f64],
        weights: &'a [f64],
        c_re: f64,
        c_im: f64,
    ) -> Self {
        debug_assert_eq!(points.len(), weights.len());
        Lattice { theta, first_label, points, weights, c_re, c_im }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn points(&self) -> &'a [f64] {
        self.points
    }

    pub fn weights(&self) -> &'a [f64] {
        self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first_label(&self) -> i64 {
        self.first_label
    }

    pub fn label(&self, i: usize) -> i64 {
        self.first_label + i as i64
    }

    /// `C = sum w_n/(t_n - i)`.
    pub fn c(&self) -> C64 {
        C64::new(self.c_re, self.c_im)
    }

    /// `sum w_n/(1 + t_n^2)`; equals pi for normalized lattices.
    pub fn normalization_sum(&self) -> f64 {
        self.c_im
    }

    /// Index of the lattice point closest to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        let i = self.points.partition_point(|&p| p < t);
        if i == 0 {
            0
        } else if i == self.points.len() || t - self.points[i - 1] <= self.points[i] - t {
            i - 1
        } else {
            i
        }
    }

    /// Label of the last lattice point `<= t`; one below the first label when
    /// `t` is left of the lattice. This is `floor(tau(t) - theta)`.
    pub fn floor_label(&self, t: f64) -> i64 {
        self.first_label + self.points.partition_point(|&p| p <= t) as i64 - 1
    }

    pub(crate) fn isolate(&self, t: f64) -> Isolated {
        let k = self.nearest(t);
        let pk = self.points[k];
        let wk = self.weights[k];
        let delta = t - pk;
        let mut q = NeumaierSum::new();
        let mut g = ComplexSum::new();
        for (n, (&p, &w)) in self.points.iter().zip(self.weights).enumerate() {
            if n == k {
                continue;
            }
            let r = 1.0 / (p - t);
            q.add(w * r * r);
            g.add(w * r / C64::new(p, -1.0));
        }
        // (g - C) = sum w (t - i)/((t_n - t)(t_n - i)), grouped per term
        let rest = (C64::new(t, -1.0)) * g.value() - wk / C64::new(pk, -1.0);
        let x = -wk + delta * rest;
        let a = wk + delta * delta * q.value();
        Isolated { k, delta, x, a }
    }

    /// Relative phase `tau(t) - theta`: continuous, strictly increasing, equal
    /// to the label at each lattice point.
    pub fn phase(&self, t: f64) -> f64 {
        let iso = self.isolate(t);
        let lk = self.label(iso.k);
        if iso.delta == 0.0 {
            return lk as f64;
        }
        let (e, f) = (iso.x.re, -iso.x.im);
        let (phi, floor) = if iso.delta > 0.0 {
            (f.atan2(e), lk)
        } else {
            ((-f).atan2(-e), lk - 1)
        };
        floor as f64 + 1.0 - phi / PI
    }

    /// `tau'(t)`; at a lattice point this is `1/w_k`.
    pub fn phase_derivative(&self, t: f64) -> f64 {
        let iso = self.isolate(t);
        self.c_im / PI * iso.a / iso.x.norm_sqr()
    }

    /// `Theta(t) * exp(-2 pi i theta)` at real `t`.
    pub fn inner_real(&self, t: f64) -> C64 {
        let iso = self.isolate(t);
        if iso.delta == 0.0 {
            return C64::new(1.0, 0.0);
        }
        iso.x / iso.x.conj()
    }

    /// `Theta(z) * exp(-2 pi i theta)` in Livsic form with per-term grouping.
    pub fn inner(&self, z: C64) -> Result<C64> {
        if z.im == 0.0 {
            return Ok(self.inner_real(z.re));
        }
        let k = self.nearest(z.re);
        let pk = self.points[k];
        let wk = self.weights[k];
        let d = pk - z;
        let mut sa = ComplexSum::new();
        let mut sb = ComplexSum::new();
        for (n, (&p, &w)) in self.points.iter().zip(self.weights).enumerate() {
            if n == k {
                continue;
            }
            let r = w / (p - z);
            sa.add(r / C64::new(p, -1.0));
            sb.add(r / C64::new(p, 1.0));
        }
        let a = wk / C64::new(pk, -1.0) + d * sa.value();
        let b = wk / C64::new(pk, 1.0) + d * sb.value();
        let num = (z - I) * a;
        let den = (z + I) * b;
        if den.norm() < 1e-300 {
            return Err(Error::Pole { what: "characteristic function", at: point(z) });
        }
        Ok(num / den)
    }

    /// `g(z) - Re C`, grouped as `sum w (1 + t_n z)/((t_n - z)(1 + t_n^2))`.
    pub fn resolvent_centered(&self, z: C64) -> C64 {
        let mut s = ComplexSum::new();
        for (&p, &w) in self.points.iter().zip(self.weights) {
            s.add(w * (1.0 + p * z) / ((p - z) * (1.0 + p * p)));
        }
        s.value()
    }

    /// `H = (1 + Theta)/(1 - Theta)`, evaluated as `-i (g - Re C)/Im C`.
    pub fn herglotz(&self, z: C64) -> Result<C64> {
        if z.im == 0.0 {
            return Err(Error::Pole { what: "Herglotz function", at: point(z) });
        }
        Ok(-I * self.resolvent_centered(z) / self.c_im)
    }

    /// Model space kernel `(i/2 pi)(1 - Theta(z) conj Theta(w))/(z - conj w)`,
    /// rewritten as `(S/pi) Q(z, conj w)/((g(z) - conj C)(g(conj w) - C))`
    /// with `Q(z, v) = sum w_n/((t_n - z)(t_n - v))`.
    pub fn model_kernel(&self, z: C64, w: C64) -> C64 {
        let v = w.conj();
        let kz = self.nearest(z.re);
        let kv = self.nearest(v.re);
        let dz = self.points[kz] - z;
        let dv = self.points[kv] - v;
        let mut q = ComplexSum::new();
        let mut gz = ComplexSum::new();
        let mut gv = ComplexSum::new();
        for (n, (&p, &wn)) in self.points.iter().zip(self.weights).enumerate() {
            let rz = if n == kz { C64::new(1.0, 0.0) } else { dz / (p - z) };
            let rv = if n == kv { C64::new(1.0, 0.0) } else { dv / (p - v) };
            q.add(wn * rz * rv);
            gz.add(wn * rz);
            gv.add(wn * rv);
        }
        let c = self.c();
        let den = (gz.value() - c.conj() * dz) * (gv.value() - c * dv);
        self.c_im / PI * q.value() / den
    }

    /// `f(t)^2 = (sum w_n/(t - t_n)^2)^{-1}`; zero on the lattice.
    pub fn f_squared(&self, t: f64) -> f64 {
        let iso = self.isolate(t);
        iso.delta * iso.delta / iso.a
    }

    /// Unit vector `u(t)` with `K(t, s) = <u(t), u(s)>`.
    ///
    /// Component `n` is `(-1)^{floor(tau(t)-theta)} f(t) sqrt(w_n)/(t - t_n)`,
    /// written so that it stays finite as `t` approaches a lattice point.
    pub fn feature(&self, t: f64) -> Vec<f64> {
        let k = self.nearest(t);
        let delta = t - self.points[k];
        let mut out = Vec::with_capacity(self.points.len());
        let mut a = NeumaierSum::new();
        for (n, (&p, &w)) in self.points.iter().zip(self.weights).enumerate() {
            let an = if n == k { -1.0 } else { delta / (p - t) };
            a.add(w * an * an);
            out.push(w.sqrt() * an);
        }
        let scale = -parity_sign(self.label(k)) / a.value().sqrt();
        for x in &mut out {
            *x *= scale;
        }
        out
    }

    /// Multiplier `M(t) = 2 pi (1 - Theta(t))^{-1} (-1)^{floor tau(t)} f(t)`
    /// relative to this lattice; at a lattice point `i (-1)^n sqrt(w_n)`.
    pub fn multiplier(&self, t: f64) -> C64 {
        let iso = self.isolate(t);
        let sign = parity_sign(self.label(iso.k));
        -I * sign * iso.x.conj() / iso.a.sqrt() * (PI / self.c_im)
    }
}

fn point(z: C64) -> Point {
    Point { re: z.re, im: z.im }
}

/// A sampling lattice `t_n(theta)` with weights `t'_n(theta)`.
///
/// A set is complete when it holds every finite point of the lattice; window
/// restrictions and the exceptional parameter (one point at infinity) are
/// incomplete and cannot be used for series evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    theta: f64,
    first_label: i64,
    points: Vec<f64>,
    weights: Vec<f64>,
    c_re: f64,
    c_im: f64,
    complete: bool,
    point_at_infinity: bool,
}

impl SampleSet {
    pub(crate) fn new(
        theta: f64,
        first_label: i64,
        points: Vec<f64>,
        weights: Vec<f64>,
        complete: bool,
        point_at_infinity: bool,
    ) -> Self {
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        for (&t, &w) in points.iter().zip(&weights) {
            let d = 1.0 + t * t;
            re.add(w * t / d);
            im.add(w / d);
        }
        SampleSet {
            theta,
            first_label,
            points,
            weights,
            c_re: re.value(),
            c_im: im.value(),
            complete,
            point_at_infinity,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first_label(&self) -> i64 {
        self.first_label
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.points.len() as i64).map(move |i| self.first_label + i)
    }

    /// Point with label `n`.
    pub fn point(&self, n: i64) -> Option<f64> {
        let i = usize::try_from(n - self.first_label).ok()?;
        self.points.get(i).copied()
    }

    pub fn weight(&self, n: i64) -> Option<f64> {
        let i = usize::try_from(n - self.first_label).ok()?;
        self.weights.get(i).copied()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// True for the one parameter whose lattice loses a point to infinity.
    pub fn has_point_at_infinity(&self) -> bool {
        self.point_at_infinity
    }

    /// `sum t'_n(theta)/(1 + t_n(theta)^2)`.
    pub fn normalization_sum(&self) -> f64 {
        self.c_im
    }

    /// Series view; `None` unless the set is complete.
    pub fn lattice(&self) -> Option<Lattice<'_>> {
        self.complete.then(|| {
            Lattice::new(
                self.theta,
                self.first_label,
                &self.points,
                &self.weights,
                self.c_re,
                self.c_im,
            )
        })
    }

    pub(crate) fn require_lattice(&self) -> Result<Lattice<'_>> {
        self.lattice().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "sample set for theta = {} is not a complete lattice",
                self.theta
            ))
        })
    }

    /// Points inside `[lo, hi]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> SampleSet {
        let a = self.points.partition_point(|&p| p < lo);
        let b = self.points.partition_point(|&p| p <= hi).max(a);
        let complete = self.complete && a == 0 && b == self.points.len();
        SampleSet::new(
            self.theta,
            self.first_label + a as i64,
            self.points[a..b].to_vec(),
            self.weights[a..b].to_vec(),
            complete,
            self.point_at_infinity,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (Vec<f64>, Vec<f64>) {
        (vec![-1.5, -0.2, 0.7, 2.0], vec![1.0, 0.5, 2.0, 1.2])
    }

    fn sums(p: &[f64], w: &[f64]) -> (f64, f64) {
        let re = p.iter().zip(w).map(|(t, w)| w * t / (1.0 + t * t)).sum();
        let im = p.iter().zip(w).map(|(t, w)| w / (1.0 + t * t)).sum();
        (re, im)
    }

    #[test]
    fn nearest_and_floor() {
        let (p, w) = toy();
        let (re, im) = sums(&p, &w);
        let l = Lattice::new(0.0, 3, &p, &w, re, im);
        assert_eq!(l.nearest(-10.0), 0);
        assert_eq!(l.nearest(0.2), 1);
        assert_eq!(l.nearest(0.3), 2);
        assert_eq!(l.nearest(9.0), 3);
        assert_eq!(l.floor_label(-2.0), 2);
        assert_eq!(l.floor_label(-1.5), 3);
        assert_eq!(l.floor_label(2.5), 6);
    }

    #[test]
    fn isolated_sums_match_direct_sums() {
        let (p, w) = toy();
        let (re, im) = sums(&p, &w);
        let l = Lattice::new(0.0, 0, &p, &w, re, im);
        let c = C64::new(re, im);
        for &t in &[-3.0, -0.9, 0.31, 1.1, 5.0] {
            let iso = l.isolate(t);
            let g: C64 = p.iter().zip(&w).map(|(q, w)| C64::new(w / (q - t), 0.0)).sum();
            let q2: f64 = p.iter().zip(&w).map(|(q, w)| w / ((q - t) * (q - t))).sum();
            let x = (g - c) * iso.delta;
            assert!((x - iso.x).norm() < 1e-12 * x.norm());
            assert!((iso.a - q2 * iso.delta * iso.delta).abs() < 1e-12 * iso.a);
        }
    }

    #[test]
    fn phase_is_continuous_through_points() {
        let (p, w) = toy();
        let (re, im) = sums(&p, &w);
        let l = Lattice::new(0.0, -1, &p, &w, re, im);
        for (i, &q) in p.iter().enumerate() {
            let n = l.label(i) as f64;
            assert_eq!(l.phase(q), n);
            assert!((l.phase(q + 1e-9) - n).abs() < 1e-7);
            assert!((l.phase(q - 1e-9) - n).abs() < 1e-7);
        }
    }

    #[test]
    fn feature_vector_is_unit_and_continuous() {
        let (p, w) = toy();
        let (re, im) = sums(&p, &w);
        let l = Lattice::new(0.0, 0, &p, &w, re, im);
        for &t in &[-2.0, -0.2, 0.1, 0.7 + 1e-12, 3.0] {
            let u = l.feature(t);
            let n: f64 = u.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
        let a = l.feature(0.7 - 1e-10);
        let b = l.feature(0.7 + 1e-10);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn restrict_keeps_labels() {
        let (p, w) = toy();
        let s = SampleSet::new(0.25, 10, p, w, true, false);
        let r = s.restrict(-0.5, 1.0);
        assert_eq!(r.first_label(), 11);
        assert_eq!(r.points(), &[-0.2, 0.7]);
        assert!(!r.is_complete());
        assert!(r.lattice().is_none());
        assert!(s.restrict(-9.0, 9.0).is_complete());
    }
}
