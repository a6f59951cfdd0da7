//! Phase function, sampling lattices and the spectral function.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, SampleSet};
use crate::pair::BandlimitPair;
use crate::solvers::brent::{brent, BrentError};
use crate::solvers::rk45::{self, Rk45Error, Rk45Options};

/// `tau(t)` with `tau(t_n) = n`.
pub fn phase_tau(pair: &BandlimitPair, t: f64) -> Result<f64> {
    pair.require_normalized()?;
    Ok(pair.lattice().phase(t))
}

/// `tau'(t)`; `1/t'_n` at the nodes.
pub fn tau_prime(pair: &BandlimitPair, t: f64) -> Result<f64> {
    pair.require_normalized()?;
    Ok(pair.lattice().phase_derivative(t))
}

/// The parameter whose lattice has a point at infinity: `frac tau(+-inf)`.
pub fn exceptional_theta(pair: &BandlimitPair) -> Result<f64> {
    pair.require_normalized()?;
    let c = pair.lattice().c();
    Ok(1.0 - c.im.atan2(-c.re) / PI)
}

/// Parameters closer than this to the exceptional one are treated as equal.
pub const EXCEPTIONAL_TOL: f64 = 1e-14;

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("theta must lie in [0, 1), got {theta}")))
    }
}

fn root_error(e: BrentError) -> Error {
    Error::Root(format!("{e:?}"))
}

fn gap_root(lat: &Lattice<'_>, i: usize, theta: f64) -> Result<f64> {
    let (a, b) = (lat.points()[i], lat.points()[i + 1]);
    let target = lat.label(i) as f64 + theta;
    let xtol = 1e-15 * (1.0 + a.abs().max(b.abs()));
    brent(|t| lat.phase(t) - target, a, b, -theta, 1.0 - theta, xtol, 200).map_err(root_error)
}

// Root of tau = target beyond the outer node; `dir` is -1 (left) or +1 (right).
fn outer_root(lat: &Lattice<'_>, target: f64, dir: f64) -> Result<Option<f64>> {
    let n = lat.len();
    let edge = if dir < 0.0 { lat.points()[0] } else { lat.points()[n - 1] };
    let f = |t: f64| lat.phase(t) - target;
    let fe = f(edge);
    let mut step = 1.0 + edge.abs() + (lat.points()[n - 1] - lat.points()[0]);
    for _ in 0..200 {
        let far = edge + dir * step;
        let ff = f(far);
        if ff.signum() != fe.signum() {
            let (a, b, fa, fb) = if dir < 0.0 { (far, edge, ff, fe) } else { (edge, far, fe, ff) };
            let xtol = 1e-15 * (1.0 + a.abs().max(b.abs()));
            return brent(f, a, b, fa, fb, xtol, 300).map(Some).map_err(root_error);
        }
        step *= 2.0;
        if !step.is_finite() {
            break;
        }
    }
    Ok(None)
}

/// All solutions of `tau(t) = n + theta` inside `window`, with weights
/// `t'_n(theta) = 1/tau'(t_n(theta))`.
///
/// For a finite pair there is one root in every node gap and one more in
/// an outer interval, except at [`exceptional_theta`] where that point moves
/// to infinity; the returned set is then flagged.
pub fn sampling_sequence(pair: &BandlimitPair, theta: f64, window: (f64, f64)) -> Result<SampleSet> {
    pair.require_normalized()?;
    check_theta(theta)?;
    let (wlo, whi) = window;
    if wlo.is_nan() || whi.is_nan() || wlo > whi {
        return Err(Error::InvalidArgument(format!("empty window {window:?}")));
    }
    let lat = pair.lattice();
    let pts = lat.points();
    let n = pts.len();
    if theta == 0.0 {
        let full = SampleSet::new(0.0, pair.lo(), pts.to_vec(), lat.weights().to_vec(), true, false);
        return Ok(full.restrict(wlo, whi));
    }
    let star = exceptional_theta(pair)?;
    let mut exceptional = (theta - star).abs() <= EXCEPTIONAL_TOL;
    let left = !exceptional && theta > star;
    let right = !exceptional && theta < star;

    let i0 = pts.partition_point(|&p| p < wlo).saturating_sub(1);
    let i1 = pts.partition_point(|&p| p <= whi).min(n.saturating_sub(1));
    let gaps: Vec<f64> = (i0..i1.max(i0))
        .into_par_iter()
        .map(|i| gap_root(&lat, i, theta))
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(gaps.len() + 1);
    let mut first_label = pair.lo() + i0 as i64;
    let mut lost_outer = false;
    if left && wlo < pts[0] {
        match outer_root(&lat, pair.lo() as f64 - 1.0 + theta, -1.0)? {
            Some(t) => {
                points.push(t);
                first_label -= 1;
            }
            None => lost_outer = true,
        }
    }
    points.extend(gaps);
    if right && whi > pts[n - 1] {
        match outer_root(&lat, pair.hi() as f64 + theta, 1.0)? {
            Some(t) => points.push(t),
            None => lost_outer = true,
        }
    }
    if lost_outer {
        exceptional = true;
    }
    let covers_all = wlo < pts[0] && whi > pts[n - 1];
    let weights: Vec<f64> = points.par_iter().map(|&t| 1.0 / lat.phase_derivative(t)).collect();
    let set = SampleSet::new(theta, first_label, points, weights, covers_all && !exceptional, exceptional);
    Ok(set.restrict(wlo, whi))
}

/// The whole lattice for `theta`.
pub fn full_sampling_sequence(pair: &BandlimitPair, theta: f64) -> Result<SampleSet> {
    sampling_sequence(pair, theta, (f64::NEG_INFINITY, f64::INFINITY))
}

/// Settings for the spectral ODE.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Spacing of the output grid in `s`.
    pub grid_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-11, atol: 1e-13, grid_step: 1.0 / 16.0 }
    }
}

/// Tabulated spectral function `t(s)` on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable {
    pub a: f64,
    pub b: f64,
    pub s_grid: Vec<f64>,
    pub t_values: Vec<f64>,
    pub t_prime_values: Vec<f64>,
    /// `|t(m) - t_m|` at the end of every unit segment integrated.
    pub integer_residuals: Vec<(i64, f64)>,
}

impl SpectralTable {
    pub fn max_integer_residual(&self) -> f64 {
        self.integer_residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["s", "t", "t_prime"])?;
        for i in 0..self.s_grid.len() {
            w.write_record([
                crate::signal::fmt_f64(self.s_grid[i]),
                crate::signal::fmt_f64(self.t_values[i]),
                crate::signal::fmt_f64(self.t_prime_values[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::io::write_atomic(path, |f| self.write_csv(f))
    }
}

fn ode_error(e: Rk45Error) -> Error {
    match e {
        Rk45Error::StepCollapse { x, h } => Error::Stiffness { s: x, step: h },
        Rk45Error::TooManySteps { x } => Error::Stiffness { s: x, step: 0.0 },
        Rk45Error::NonFinite { x } => Error::Degenerate(format!("non-finite ODE state at s = {x}")),
    }
}

// Integrate t' = 1/tau'(t) from the node at integer m to each target in
// [m, m+1], which must be sorted. Returns t at the targets.
fn integrate_segment(lat: &Lattice<'_>, lo: i64, m: i64, targets: &[f64], opts: &OdeOptions) -> Result<Vec<f64>> {
    let t0 = lat.points()[(m - lo) as usize];
    let rk = Rk45Options { rtol: opts.rtol, atol: opts.atol, ..Rk45Options::default() };
    rk45::integrate(|_, t| 1.0 / lat.phase_derivative(t), m as f64, t0, targets, &rk).map_err(ode_error)
}

fn check_s_range(pair: &BandlimitPair, s0: f64, s1: f64) -> Result<()> {
    let (lo, hi) = (pair.lo() as f64, pair.hi() as f64);
    if !(s0 <= s1 && s0 >= lo && s1 <= hi) {
        return Err(Error::InvalidArgument(format!(
            "s range [{s0}, {s1}] must lie within [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Integrate the spectral ODE `t'(s) = 1/tau'(t(s))` over `s_range`,
/// restarting from `t(m) = t_m` at every integer `m`.
///
/// The range must lie in `[lo, hi]`: past the last node the solution runs to
/// infinity in finite `s`.
pub fn solve_spectral_ode(pair: &BandlimitPair, s_range: (f64, f64), opts: &OdeOptions) -> Result<SpectralTable> {
    pair.require_normalized()?;
    let (s0, s1) = s_range;
    check_s_range(pair, s0, s1)?;
    if !(opts.grid_step > 0.0 && opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::InvalidArgument("ODE tolerances and step must be positive".into()));
    }
    let lat = pair.lattice();
    let lo = pair.lo();
    let count = ((s1 - s0) / opts.grid_step + 1e-9).floor() as usize;
    let mut s_grid: Vec<f64> = (0..=count).map(|k| s0 + k as f64 * opts.grid_step).collect();
    if s_grid.last().is_some_and(|&s| s < s1) {
        s_grid.push(s1);
    }
    let m_first = s0.floor() as i64;
    let m_last = (s1.ceil() as i64 - 1).max(m_first);
    let mut t_values = Vec::with_capacity(s_grid.len());
    let mut residuals = Vec::new();
    let mut idx = 0;
    for m in m_first..=m_last {
        let start = idx;
        while idx < s_grid.len() && (s_grid[idx] < (m + 1) as f64 || m == m_last) {
            idx += 1;
        }
        let mut targets: Vec<f64> = s_grid[start..idx].to_vec();
        let end_needed = m < pair.hi();
        if end_needed {
            targets.push((m + 1) as f64);
        }
        let mut ts = integrate_segment(&lat, lo, m, &targets, opts)?;
        if end_needed {
            let t_end = ts.pop().unwrap();
            let node = lat.points()[(m + 1 - lo) as usize];
            residuals.push((m + 1, (t_end - node).abs()));
        }
        for (s, t) in s_grid[start..idx].iter().zip(ts) {
            // integer grid points take the node value itself
            if s.fract() == 0.0 {
                t_values.push(lat.points()[(*s as i64 - lo) as usize]);
            } else {
                t_values.push(t);
            }
        }
    }
    let t_prime_values = t_values.iter().map(|&t| 1.0 / lat.phase_derivative(t)).collect();
    Ok(SpectralTable {
        a: lo as f64,
        b: (pair.hi() + 1) as f64,
        s_grid,
        t_values,
        t_prime_values,
        integer_residuals: residuals,
    })
}

/// `t(s)` at a single point by the ODE from the integer below `s`.
pub fn spectral_function(pair: &BandlimitPair, s: f64, opts: &OdeOptions) -> Result<f64> {
    pair.require_normalized()?;
    check_s_range(pair, s, s)?;
    let m = s.floor() as i64;
    if s == m as f64 {
        return Ok(pair.node(m).expect("checked range"));
    }
    Ok(integrate_segment(&pair.lattice(), pair.lo(), m, &[s], opts)?[0])
}

/// Relative residual of `(1 + t^2) |sin(pi [s])/pi sum t'_n/((t_n - t)(t_n - i))|^2 = 1`
/// at `t = t(s)` from the ODE.
pub fn functional_equation_residual(pair: &BandlimitPair, s: f64, opts: &OdeOptions) -> Result<f64> {
    let frac = s - s.floor();
    if frac == 0.0 {
        return Err(Error::InvalidArgument(format!("s = {s} is an integer")));
    }
    let t = spectral_function(pair, s, opts)?;
    Ok(funeq_residual_at(pair, frac, t))
}

pub(crate) fn funeq_residual_at(pair: &BandlimitPair, frac: f64, t: f64) -> f64 {
    let mut g = crate::numeric::ComplexSum::new();
    for (&p, &w) in pair.nodes().iter().zip(pair.weights()) {
        g.add(w / ((p - t) * crate::numeric::C64::new(p, -1.0)));
    }
    let v = ((PI * frac).sin() / PI * g.value()).norm_sqr();
    let one = 1.0 + t * t;
    (one - 1.0 / v).abs() / one
}

/// `t'(n + theta) = pi^2/sin^2(pi (alpha - theta)) f_alpha(t_n(theta))^2`.
pub fn spectral_derivative_form2(alpha_set: &SampleSet, theta_set: &SampleSet, n: i64) -> Result<f64> {
    let lat = alpha_set.require_lattice()?;
    let d = alpha_set.theta() - theta_set.theta();
    let s = (PI * d).sin();
    if s == 0.0 {
        return Err(Error::InvalidArgument("alpha must differ from theta".into()));
    }
    let t = theta_set
        .point(n)
        .ok_or_else(|| Error::InvalidArgument(format!("no point with label {n}")))?;
    Ok(PI * PI / (s * s) * lat.f_squared(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfun;
    use crate::numeric::C64;
    use crate::pair::random_pair;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn pair(seed: u64, n: usize) -> BandlimitPair {
        random_pair(&mut rand::rngs::StdRng::seed_from_u64(seed), n)
    }

    #[test]
    fn tau_at_nodes() {
        let p = pair(11, 6);
        assert_eq!(phase_tau(&p, p.node(0).unwrap()).unwrap(), 0.0);
        for n in p.lo()..=p.hi() {
            assert_eq!(phase_tau(&p, p.node(n).unwrap()).unwrap(), n as f64);
            let d = tau_prime(&p, p.node(n).unwrap()).unwrap();
            assert!((d - 1.0 / p.weight(n).unwrap()).abs() < 1e-14 * d);
        }
    }

    #[test]
    fn tau_monotone_on_grid() {
        let p = pair(12, 7);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..1000 {
            let t = -12.0 + 24.0 * k as f64 / 999.0;
            let v = phase_tau(&p, t).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn tau_is_phase_of_theta() {
        let p = pair(13, 5);
        for t in [-7.0, -1.1, 0.2, 0.9, 3.3] {
            let e = C64::from_polar(1.0, 2.0 * PI * phase_tau(&p, t).unwrap());
            let th = charfun::theta_eval(&p, C64::new(t, 0.0)).unwrap();
            assert!((e - th).norm() < 1e-12);
        }
    }

    #[test]
    fn tau_prime_vs_finite_difference() {
        let p = pair(14, 6);
        let h = 1e-6;
        for t in [-3.0, -0.4, 0.77, 2.2] {
            let fd = (phase_tau(&p, t + h).unwrap() - phase_tau(&p, t - h).unwrap()) / (2.0 * h);
            let d = tau_prime(&p, t).unwrap();
            assert!((fd - d).abs() < 1e-6 * d.max(1.0));
        }
    }

    #[test]
    fn theta_zero_returns_nodes() {
        let p = pair(15, 6);
        let s = full_sampling_sequence(&p, 0.0).unwrap();
        assert_eq!(s.points(), p.nodes());
        assert_eq!(s.first_label(), p.lo());
        assert!(s.is_complete());
    }

    #[test]
    fn lattice_sizes_and_exceptional() {
        let p = pair(16, 5);
        let star = exceptional_theta(&p).unwrap();
        for theta in [0.1, 0.5, 0.9] {
            if (theta - star).abs() < 1e-3 {
                continue;
            }
            let s = full_sampling_sequence(&p, theta).unwrap();
            assert_eq!(s.len(), 5);
            assert!(s.is_complete());
            assert!((s.normalization_sum() - PI).abs() < 1e-10);
            let expect_first = if theta > star { p.lo() - 1 } else { p.lo() };
            assert_eq!(s.first_label(), expect_first);
        }
        let s = full_sampling_sequence(&p, star).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.has_point_at_infinity());
        assert!(!s.is_complete());
    }

    #[test]
    fn window_restriction() {
        let p = pair(17, 8);
        let full = full_sampling_sequence(&p, 0.4).unwrap();
        let (a, b) = (p.nodes()[2] - 0.01, p.nodes()[5] + 0.01);
        let part = sampling_sequence(&p, 0.4, (a, b)).unwrap();
        let expect: Vec<f64> = full.points().iter().copied().filter(|&t| t >= a && t <= b).collect();
        assert_eq!(part.points(), &expect[..]);
        assert!(!part.is_complete());
        let lab = part.first_label();
        assert_eq!(full.point(lab), part.point(lab));
        let empty = sampling_sequence(&p, 0.4, (100.0, 101.0)).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn paley_wiener_half_lattice() {
        // symmetric pairs have their exceptional parameter at 1/2
        let p = BandlimitPair::paley_wiener(PI, 20_000).unwrap();
        assert_eq!(exceptional_theta(&p).unwrap(), 0.5);
        let s = sampling_sequence(&p, 0.5, (-3.0, 3.0)).unwrap();
        assert_eq!(s.len(), 6);
        // offset grows like |t|/N for the truncated pair
        for (n, t) in s.labels().zip(s.points()) {
            assert!((t - (n as f64 + 0.5)).abs() < 1e-4, "{n}: {t}");
        }
    }

    #[test]
    fn ode_hits_nodes() {
        let p = pair(18, 6);
        let table = solve_spectral_ode(&p, (p.lo() as f64, p.hi() as f64), &OdeOptions::default()).unwrap();
        assert!(table.max_integer_residual() < 1e-8, "{:?}", table.integer_residuals);
        assert_eq!(table.integer_residuals.len(), 5);
        assert!(table.t_values.windows(2).all(|w| w[0] < w[1]));
        assert!(table.t_prime_values.iter().all(|&d| d > 0.0));
    }

    #[test]
    fn ode_matches_root_finding() {
        let p = pair(19, 6);
        let opts = OdeOptions::default();
        for theta in [0.25, 0.5, 0.75] {
            let s = full_sampling_sequence(&p, theta).unwrap();
            for (n, &t) in s.labels().zip(s.points()) {
                let sv = n as f64 + theta;
                if sv < p.lo() as f64 || sv > p.hi() as f64 {
                    continue;
                }
                let ode = spectral_function(&p, sv, &opts).unwrap();
                assert!((ode - t).abs() < 1e-6, "theta {theta}, n {n}: {ode} vs {t}");
            }
        }
    }

    #[test]
    fn ode_range_checked() {
        let p = pair(20, 4);
        assert!(solve_spectral_ode(&p, (p.lo() as f64 - 0.5, 0.0), &OdeOptions::default()).is_err());
        assert!(functional_equation_residual(&p, 0.0, &OdeOptions::default()).is_err());
    }

    #[test]
    fn funeq_residual_small() {
        let p = pair(21, 6);
        let r = functional_equation_residual(&p, p.lo() as f64 + 0.37, &OdeOptions::default()).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn form2_matches_weights() {
        let p = pair(22, 6);
        let a0 = full_sampling_sequence(&p, 0.0).unwrap();
        let a25 = full_sampling_sequence(&p, 0.25).unwrap();
        let th = full_sampling_sequence(&p, 0.6).unwrap();
        for n in th.labels() {
            let w = th.weight(n).unwrap();
            let f0 = spectral_derivative_form2(&a0, &th, n).unwrap();
            let f25 = spectral_derivative_form2(&a25, &th, n).unwrap();
            assert!((f0 - w).abs() < 1e-6 * w.max(1.0));
            assert!((f25 - w).abs() < 1e-6 * w.max(1.0));
        }
        assert!(spectral_derivative_form2(&th, &th, th.first_label()).is_err());
    }

    fn arb_pair() -> impl Strategy<Value = BandlimitPair> {
        (2usize..8, any::<u64>()).prop_map(|(n, s)| pair(s, n))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lattices_interlace(p in arb_pair(), theta in 0.01..0.99f64, beta in 0.01..0.99f64) {
            prop_assume!((theta - beta).abs() > 1e-6);
            let a = full_sampling_sequence(&p, theta).unwrap();
            let b = full_sampling_sequence(&p, beta).unwrap();
            let nodes = p.nodes();
            for w in nodes.windows(2) {
                let ia: Vec<f64> = a.points().iter().copied().filter(|&t| t > w[0] && t < w[1]).collect();
                let ib: Vec<f64> = b.points().iter().copied().filter(|&t| t > w[0] && t < w[1]).collect();
                prop_assert_eq!(ia.len(), 1);
                prop_assert_eq!(ib.len(), 1);
                prop_assert!((ia[0] < ib[0]) == (theta < beta));
            }
            prop_assert!(a.weights().iter().all(|&w| w > 0.0));
        }

        #[test]
        fn lattice_points_are_level_set(p in arb_pair(), theta in 0.01..0.99f64) {
            let s = full_sampling_sequence(&p, theta).unwrap();
            let e = C64::from_polar(1.0, 2.0 * PI * theta);
            for &t in s.points() {
                let v = charfun::theta_eval(&p, C64::new(t, 0.0)).unwrap();
                prop_assert!((v - e).norm() < 1e-8);
            }
        }

        #[test]
        fn tau_inverts_lattice(p in arb_pair(), theta in 0.0..0.999f64) {
            let s = full_sampling_sequence(&p, theta).unwrap();
            for (n, &t) in s.labels().zip(s.points()) {
                prop_assert!((phase_tau(&p, t).unwrap() - (n as f64 + theta)).abs() < 1e-8);
            }
        }

        #[test]
        fn union_of_lattices_fills_gaps(p in arb_pair(), k in 4usize..40) {
            // max distance between neighbours over a theta grid of spacing 1/k
            let mut all: Vec<f64> = p.nodes().to_vec();
            for j in 1..k {
                let s = full_sampling_sequence(&p, j as f64 / k as f64).unwrap();
                all.extend(s.points().iter().copied().filter(|&t| t >= p.nodes()[0] && t <= *p.nodes().last().unwrap()));
            }
            all.sort_by(f64::total_cmp);
            let max_gap = all.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            // t'(s) = 1/tau'(t) bounds the spacing of points 1/k apart in s
            let (a, b) = (p.nodes()[0], *p.nodes().last().unwrap());
            let min_dtau = (0..=2000)
                .map(|j| tau_prime(&p, a + (b - a) * j as f64 / 2000.0).unwrap())
                .fold(f64::INFINITY, f64::min);
            let bound = 1.1 / (k as f64 * min_dtau);
            prop_assert!(max_gap <= bound, "gap {} bound {}", max_gap, bound);
        }
    }
}
