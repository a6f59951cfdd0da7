//! Sampling, reconstruction and the time-varying low-pass filter.

use rayon::prelude::*;
use serde::Serialize;

use crate::charfun::{Bandlimit, Parametrization};
use crate::error::{Error, Result};
use crate::kernel::{self, KernelContext};
use crate::lattice::{Lattice, SampleSet};
use crate::numeric::parity_sign;
use crate::pair::BandlimitPair;
use crate::signal::{GridSignal, GridSpec};
use crate::solvers::quadrature::GaussLegendre;

/// A signal to be sampled or filtered.
#[derive(Clone, Copy)]
pub enum Signal<'a> {
    Grid(&'a GridSignal),
    /// Exact function values; `support: None` means the whole line.
    Function {
        f: &'a (dyn Fn(f64) -> f64 + Sync),
        support: Option<(f64, f64)>,
    },
}

impl Signal<'_> {
    fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Signal::Grid(g) => g.interpolate(t),
            Signal::Function { f, support } => Ok(match support {
                Some((a, b)) if t < *a || t > *b => 0.0,
                _ => f(t),
            }),
        }
    }
}

/// Values `f(t_n(theta))` in point order.
pub fn sample_signal(signal: Signal<'_>, samples: &SampleSet) -> Result<Vec<f64>> {
    if let Signal::Grid(g) = signal {
        let (a, b) = g.support();
        let bad: Vec<f64> = samples.points().iter().copied().filter(|&t| t < a || t > b).collect();
        if !bad.is_empty() {
            return Err(Error::OutOfWindow { window: (a, b), points: bad });
        }
    }
    samples.points().iter().map(|&t| signal.eval(t)).collect()
}

/// Which kernel the sampling series uses.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Space {
    /// `K^T`, the space carrying the sampling isometry with counting measure.
    #[default]
    Unscaled,
    /// `K^{(T;mu)}`, embedded isometrically in `L^2(R)`.
    Scaled(Parametrization),
}

/// `f(t) = sum_n f(t_n) K(t, t_n)/K(t_n, t_n)` on `grid`.
///
/// Exact for members of the space when `samples` is a complete lattice.
pub fn reconstruct(
    ctx: &KernelContext<'_>,
    samples: &SampleSet,
    values: &[f64],
    grid: &GridSpec,
    space: Space,
) -> Result<GridSignal> {
    if values.len() != samples.len() {
        return Err(Error::InvalidArgument(format!(
            "{} values for {} sample points",
            values.len(),
            samples.len()
        )));
    }
    let lat = ctx.lattice();
    let pair = ctx.pair();
    let coeffs: Vec<f64> = match space {
        Space::Unscaled => values.to_vec(),
        Space::Scaled(mu) => samples
            .points()
            .iter()
            .zip(values)
            .map(|(&t, v)| v / kernel::scale_density(pair, &mu, t).sqrt())
            .collect(),
    };
    let us: Vec<Vec<f64>> = samples.points().par_iter().map(|&t| lat.feature(t)).collect();
    let out: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|&t| {
            let u = lat.feature(t);
            let s = crate::numeric::sum(us.iter().zip(&coeffs).map(|(v, c)| c * kernel::dot(&u, v)));
            match space {
                Space::Unscaled => s,
                Space::Scaled(mu) => s * kernel::scale_density(pair, &mu, t).sqrt(),
            }
        })
        .collect();
    GridSignal::real(*grid, out)
}

#[derive(Debug, Clone, Copy)]
pub struct LowpassOptions {
    /// Relative change between successive refinements at which to stop.
    pub tol: f64,
    pub max_levels: usize,
}

impl Default for LowpassOptions {
    fn default() -> Self {
        LowpassOptions { tol: 1e-9, max_levels: 7 }
    }
}

/// Orthogonal projection onto `K(T; mu)` written in the lattice basis
/// `sum_m c_m K^mu(., p_m)/K^mu(p_m, p_m)`.
#[derive(Debug, Clone)]
pub struct Expansion<'a> {
    ctx: KernelContext<'a>,
    mu: Parametrization,
    /// `c_m = <K^mu(., p_m), f>`.
    coefficients: Vec<f64>,
    // c_m (-1)^{l_m}/sqrt((mu o tau)'(p_m)), so that
    // f(t) = sqrt((mu o tau)'(t)) sum_m scaled_m u(t)_m
    scaled: Vec<f64>,
    /// Largest relative change at the last refinement.
    pub achieved: f64,
    /// Refinement levels used.
    pub levels: usize,
    /// Envelope bound on the contribution of the signal beyond its support.
    pub tail_estimate: f64,
}

impl<'a> Expansion<'a> {
    fn new(ctx: KernelContext<'a>, mu: Parametrization, coefficients: Vec<f64>) -> Self {
        let pair = ctx.pair();
        let lat = ctx.lattice();
        let scaled = coefficients
            .iter()
            .enumerate()
            .map(|(m, c)| {
                let p = lat.points()[m];
                c * parity_sign(lat.label(m)) / kernel::scale_density(pair, &mu, p).sqrt()
            })
            .collect();
        Expansion { ctx, mu, coefficients, scaled, achieved: 0.0, levels: 0, tail_estimate: 0.0 }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// The sampling lattice of the basis.
    pub fn samples(&self) -> SampleSet {
        self.ctx.sample_set()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = self.ctx.feature(t);
        let s = kernel::dot(&u, &self.scaled);
        s * kernel::scale_density(self.ctx.pair(), &self.mu, t).sqrt()
    }

    pub fn eval_grid(&self, grid: &GridSpec) -> GridSignal {
        let v = grid.points().par_iter().map(|&t| self.eval(t)).collect();
        GridSignal::real(*grid, v).expect("lengths agree")
    }
}

/// Output of [`lowpass_project`].
#[derive(Debug, Clone)]
pub struct Projection<'a> {
    pub signal: GridSignal,
    pub expansion: Expansion<'a>,
}

/// Project a gridded signal (zero outside its grid) onto `K(T; mu)` and
/// return the result on the same grid.
pub fn lowpass_project<'a>(
    ctx: &KernelContext<'a>,
    theta: f64,
    f_raw: &GridSignal,
    mu: Parametrization,
    opts: &LowpassOptions,
) -> Result<Projection<'a>> {
    let expansion = project(ctx, theta, Signal::Grid(f_raw), mu, opts)?;
    let signal = expansion.eval_grid(&f_raw.grid()).with_window(f_raw.window());
    Ok(Projection { signal, expansion })
}

/// Project any signal, returning the expansion for evaluation anywhere.
pub fn project<'a>(
    ctx: &KernelContext<'a>,
    theta: f64,
    signal: Signal<'_>,
    mu: Parametrization,
    opts: &LowpassOptions,
) -> Result<Expansion<'a>> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let pair = ctx.pair();
    let basis = if ctx.alpha() == theta { ctx.clone() } else { KernelContext::with_alpha(pair, theta)? };
    let lat = basis.lattice();
    let panels = panels(&lat, signal)?;
    let gl32 = GaussLegendre::new(32);
    let gl8 = GaussLegendre::new(8);
    let integrand = |t: f64| -> Result<Vec<f64>> {
        let f = signal.eval(t)?;
        let mut u = lat.feature(t);
        let w = f * kernel::scale_density(pair, &mu, t).sqrt();
        let mut big = 0.0f64;
        for x in &mut u {
            *x *= w;
            big = big.max(x.abs());
        }
        // last slot: magnitude reference for the stopping test
        u.push(big);
        Ok(u)
    };
    let n = lat.len() + 1;
    let mut prev = integrate_panels(&panels, 0, &gl32, &gl8, &integrand, n)?;
    let mut level = 0;
    let mut change = f64::INFINITY;
    while level < opts.max_levels {
        level += 1;
        let next = integrate_panels(&panels, level, &gl32, &gl8, &integrand, n)?;
        let scale = next.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let diff = next[..n - 1].iter().zip(&prev).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        change = if scale > 0.0 { diff / scale } else { 0.0 };
        prev = next;
        if change < opts.tol {
            break;
        }
    }
    if !(change < opts.tol) {
        return Err(Error::Accuracy { achieved: change, requested: opts.tol });
    }
    // <K^mu(., p_m), f> = sqrt(rho(p_m)) (-1)^{l_m} int sqrt(rho) u_m f
    prev.pop();
    let coefficients = prev
        .iter()
        .enumerate()
        .map(|(m, v)| {
            let p = lat.points()[m];
            v * parity_sign(lat.label(m)) * kernel::scale_density(pair, &mu, p).sqrt()
        })
        .collect();
    let tail = tail_estimate(&lat, signal);
    let mut e = Expansion::new(basis, mu, coefficients);
    e.achieved = change;
    e.levels = level;
    e.tail_estimate = tail;
    Ok(e)
}

#[derive(Debug, Clone, Copy)]
enum Panel {
    /// Finite interval with the rule to use.
    Finite { a: f64, b: f64, fine: bool },
    /// `(-inf, edge]` or `[edge, inf)` mapped by `t = edge + dir L u/(1-u)`.
    Outer { edge: f64, dir: f64, len: f64 },
}

fn panels(lat: &Lattice<'_>, signal: Signal<'_>) -> Result<Vec<Panel>> {
    let pts = lat.points();
    let mut out = Vec::new();
    let push_between = |out: &mut Vec<Panel>, a: f64, b: f64, breaks: &[f64], fine: bool| {
        let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
        cuts.insert(0, a);
        cuts.push(b);
        for w in cuts.windows(2) {
            if w[1] > w[0] {
                out.push(Panel::Finite { a: w[0], b: w[1], fine });
            }
        }
    };
    match signal {
        Signal::Grid(g) => {
            let times = g.times();
            let mut cuts: Vec<f64> = times.clone();
            cuts.extend(pts.iter().copied());
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let (a, b) = g.support();
            push_between(&mut out, a, b, &cuts, false);
        }
        Signal::Function { support: Some((a, b)), .. } => {
            if !(b > a) {
                return Err(Error::InvalidArgument(format!("empty support [{a}, {b}]")));
            }
            push_between(&mut out, a, b, pts, true);
        }
        Signal::Function { support: None, .. } => {
            let (a, b) = (pts[0], pts[pts.len() - 1]);
            let len = 1.0 + (b - a) / pts.len() as f64;
            out.push(Panel::Outer { edge: a, dir: -1.0, len });
            push_between(&mut out, a, b, pts, true);
            out.push(Panel::Outer { edge: b, dir: 1.0, len });
        }
    }
    Ok(out)
}

fn integrate_panels<F>(
    panels: &[Panel],
    level: usize,
    gl32: &GaussLegendre,
    gl8: &GaussLegendre,
    integrand: &F,
    n: usize,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    let parts = 1usize << level;
    let partial: Vec<Vec<f64>> = panels
        .par_iter()
        .map(|panel| -> Result<Vec<f64>> {
            let mut acc = vec![0.0; n];
            let mut add = |t: f64, w: f64| -> Result<()> {
                let v = integrand(t)?;
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += w * x;
                }
                Ok(())
            };
            match *panel {
                Panel::Finite { a, b, fine } => {
                    let rule = if fine { gl32 } else { gl8 };
                    let h = (b - a) / parts as f64;
                    for j in 0..parts {
                        let lo = a + j as f64 * h;
                        let hi = if j + 1 == parts { b } else { lo + h };
                        for (t, w) in rule.mapped(lo, hi) {
                            add(t, w)?;
                        }
                    }
                }
                Panel::Outer { edge, dir, len } => {
                    // four equal panels in u on [0, 1)
                    let pieces = 4 * parts;
                    let h = 1.0 / pieces as f64;
                    for j in 0..pieces {
                        for (u, w) in gl32.mapped(j as f64 * h, (j + 1) as f64 * h) {
                            let t = edge + dir * len * u / (1.0 - u);
                            let jac = len / ((1.0 - u) * (1.0 - u));
                            add(t, w * jac)?;
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![crate::numeric::NeumaierSum::new(); n];
    for p in &partial {
        for (s, x) in total.iter_mut().zip(p) {
            s.add(*x);
        }
    }
    Ok(total.iter().map(|s| s.value()).collect())
}

// K(t, p)^2 <= w_p w_t/(pi (t - p))^2 away from p; integrating from the edge
// outward with the edge value held gives f^2 w^2/(pi^2 d). Distances are
// floored at the kernel half-width w/pi where the envelope stops applying.
fn tail_estimate(lat: &Lattice<'_>, signal: Signal<'_>) -> f64 {
    let (a, b, fa, fb) = match signal {
        Signal::Grid(g) => {
            let v = g.values();
            let (a, b) = g.support();
            (a, b, v[0], v[v.len() - 1])
        }
        Signal::Function { f, support: Some((a, b)) } => (a, b, f(a), f(b)),
        Signal::Function { support: None, .. } => return 0.0,
    };
    let mut worst = 0.0f64;
    for (&p, &w) in lat.points().iter().zip(lat.weights()) {
        let floor = w / std::f64::consts::PI;
        let da = (p - a).abs().max(floor);
        let db = (b - p).abs().max(floor);
        let e = (fa * fa / da + fb * fb / db) * floor * floor;
        worst = worst.max(e.sqrt());
    }
    worst
}

/// Time-varying sample count against a constant Nyquist rate at peak bandwidth.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct NyquistReport {
    pub window: (f64, f64),
    /// Nodes `t_n(0)` inside the window.
    pub tv_count: usize,
    /// `window length * max omega / pi`.
    pub nyquist_count: f64,
    pub ratio: f64,
    pub w_star: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_mean: f64,
}

pub fn nyquist_comparison(pair: &BandlimitPair, window: (f64, f64)) -> Result<NyquistReport> {
    let bl = Bandlimit::new(pair)?;
    let (a, b) = window;
    let tv_count = pair.nodes().iter().filter(|&&t| t >= a && t <= b).count();
    if !(b > a) {
        return Ok(NyquistReport {
            window,
            tv_count,
            nyquist_count: 0.0,
            ratio: 0.0,
            w_star: bl.w(),
            omega_min: 0.0,
            omega_max: 0.0,
            omega_mean: 0.0,
        });
    }
    let m = 2001;
    let ts: Vec<f64> = (0..m).map(|k| a + (b - a) * k as f64 / (m - 1) as f64).collect();
    let om: Vec<f64> = ts.par_iter().map(|&t| bl.omega(t)).collect::<Result<_>>()?;
    let omega_max = om.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let omega_min = om.iter().copied().fold(f64::INFINITY, f64::min);
    let omega_mean = crate::numeric::sum(om.iter().copied()) / m as f64;
    let nyquist_count = (b - a) * omega_max / std::f64::consts::PI;
    Ok(NyquistReport {
        window,
        tv_count,
        nyquist_count,
        ratio: tv_count as f64 / nyquist_count,
        w_star: bl.w(),
        omega_min,
        omega_max,
        omega_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::random_pair;
    use crate::spectral::{exceptional_theta, full_sampling_sequence};
    use rand::{Rng, SeedableRng};

    fn pair(seed: u64, n: usize) -> BandlimitPair {
        random_pair(&mut rand::rngs::StdRng::seed_from_u64(seed), n)
    }

    #[test]
    fn constant_signal_samples() {
        let p = pair(40, 5);
        let s = full_sampling_sequence(&p, 0.0).unwrap();
        let one = |_: f64| 1.0;
        let v = sample_signal(Signal::Function { f: &one, support: None }, &s).unwrap();
        assert!(v.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn kernel_samples_are_delta() {
        let p = pair(41, 6);
        let ctx = KernelContext::new(&p).unwrap();
        let s = full_sampling_sequence(&p, 0.0).unwrap();
        let t0 = p.node(0).unwrap();
        let f = |t: f64| kernel::kernel_eval(&ctx, t, t0);
        let v = sample_signal(Signal::Function { f: &f, support: None }, &s).unwrap();
        for (n, x) in s.labels().zip(v) {
            let e = if n == 0 { 1.0 } else { 0.0 };
            assert!((x - e).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_window_lists_points() {
        let p = pair(42, 4);
        let s = full_sampling_sequence(&p, 0.0).unwrap();
        let g = GridSignal::zeros(GridSpec::span(-0.5, 0.5, 11).unwrap());
        match sample_signal(Signal::Grid(&g), &s) {
            Err(Error::OutOfWindow { points, .. }) => assert!(!points.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_samples_reconstruct_zero() {
        let p = pair(43, 5);
        let ctx = KernelContext::new(&p).unwrap();
        let s = full_sampling_sequence(&p, 0.0).unwrap();
        let g = GridSpec::span(-3.0, 3.0, 21).unwrap();
        let out = reconstruct(&ctx, &s, &vec![0.0; s.len()], &g, Space::Unscaled).unwrap();
        assert!(out.values().iter().all(|&x| x == 0.0));
        assert!(reconstruct(&ctx, &s, &[1.0], &g, Space::Unscaled).is_err());
    }

    #[test]
    fn reconstruct_kernel_from_other_lattice() {
        let p = pair(44, 6);
        let star = exceptional_theta(&p).unwrap();
        let ctx = KernelContext::new(&p).unwrap();
        let (theta, beta) = if (star - 0.3).abs() > 0.05 && (star - 0.8).abs() > 0.05 { (0.3, 0.8) } else { (0.1, 0.6) };
        let b = full_sampling_sequence(&p, beta).unwrap();
        let x = b.points()[2];
        let f = |t: f64| kernel::kernel_eval(&ctx, t, x);
        let s = full_sampling_sequence(&p, theta).unwrap();
        let v = sample_signal(Signal::Function { f: &f, support: None }, &s).unwrap();
        let g = GridSpec::span(-6.0, 6.0, 97).unwrap();
        let out = reconstruct(&ctx, &s, &v, &g, Space::Unscaled).unwrap();
        for (t, y) in g.points().iter().zip(out.values()) {
            assert!((y - f(*t)).abs() < 1e-10);
        }
    }

    #[test]
    fn scaled_reconstruction() {
        let p = pair(45, 5);
        let ctx = KernelContext::new(&p).unwrap();
        let mu = Parametrization::Mobius(crate::charfun::MobiusParam::real(-0.4).unwrap());
        let anchors = [0.13, -1.7];
        let f = |t: f64| {
            kernel::scaled_kernel(&ctx, &mu, t, anchors[0]) - 0.5 * kernel::scaled_kernel(&ctx, &mu, t, anchors[1])
        };
        let s = full_sampling_sequence(&p, 0.0).unwrap();
        let v = sample_signal(Signal::Function { f: &f, support: None }, &s).unwrap();
        let g = GridSpec::span(-5.0, 5.0, 41).unwrap();
        let out = reconstruct(&ctx, &s, &v, &g, Space::Scaled(mu)).unwrap();
        for (t, y) in g.points().iter().zip(out.values()) {
            assert!((y - f(*t)).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_fixes_space_members() {
        let p = pair(46, 5);
        let ctx = KernelContext::new(&p).unwrap();
        let mu = Parametrization::Identity;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let xs: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let cs: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = |t: f64| -> f64 { xs.iter().zip(&cs).map(|(x, c)| c * kernel::scaled_kernel(&ctx, &mu, t, *x)).sum() };
        let e = project(&ctx, 0.0, Signal::Function { f: &f, support: None }, mu, &LowpassOptions::default()).unwrap();
        for t in [-4.0, -1.0, 0.0, 0.5, 2.0, 6.0] {
            assert!((e.eval(t) - f(t)).abs() < 1e-8, "{t}: {} vs {}", e.eval(t), f(t));
        }
    }

    #[test]
    fn projection_kills_complement() {
        let p = pair(47, 4);
        let ctx = KernelContext::new(&p).unwrap();
        let mu = Parametrization::Identity;
        let opts = LowpassOptions::default();
        let g = |t: f64| (-(t - 0.3) * (t - 0.3)).exp() * (3.0 * t).cos();
        let pg = project(&ctx, 0.0, Signal::Function { f: &g, support: None }, mu, &opts).unwrap();
        let h = |t: f64| g(t) - pg.eval(t);
        let ph = project(&ctx, 0.0, Signal::Function { f: &h, support: None }, mu, &opts).unwrap();
        assert!(ph.coefficients().iter().all(|c| c.abs() < 1e-8), "{:?}", ph.coefficients());
    }

    #[test]
    fn nyquist_for_paley_wiener() {
        let p = BandlimitPair::paley_wiener(std::f64::consts::PI, 20_000).unwrap();
        let r = nyquist_comparison(&p, (-5.5, 5.5)).unwrap();
        assert_eq!(r.tv_count, 11);
        assert!((r.ratio - 1.0).abs() < 1e-2, "{r:?}");
        let empty = nyquist_comparison(&p, (1.0, 1.0)).unwrap();
        assert_eq!(empty.nyquist_count, 0.0);
    }

    #[test]
    fn nyquist_cluster_ratio_below_one() {
        let mut nodes: Vec<f64> = (-10..=10).map(|k| k as f64).collect();
        nodes.extend([0.2, 0.4, 0.6, 0.8]);
        nodes.sort_by(f64::total_cmp);
        let n = nodes.len();
        let p = crate::pair::normalize_pair(&BandlimitPair::new(0, nodes, vec![1.0; n]).unwrap()).unwrap();
        let r = nyquist_comparison(&p, (-5.0, 5.0)).unwrap();
        assert!(r.ratio < 1.0, "{r:?}");
    }

    #[test]
    fn projection_samples_are_coefficients() {
        let p = pair(48, 5);
        let ctx = KernelContext::new(&p).unwrap();
        let f = |t: f64| 1.0 / (1.0 + t * t);
        let e = project(&ctx, 0.3, Signal::Function { f: &f, support: Some((-4.0, 4.0)) }, Parametrization::Identity, &LowpassOptions::default()).unwrap();
        let s = e.samples();
        for (m, &t) in s.points().iter().enumerate() {
            assert!((e.eval(t) - e.coefficients()[m]).abs() < 1e-12);
        }
        assert!(e.tail_estimate > 0.0);
    }

    #[test]
    fn grid_projection_idempotent() {
        let p = pair(49, 4);
        let ctx = KernelContext::new(&p).unwrap();
        let opts = LowpassOptions::default();
        let grid = GridSpec::span(-8.0, 8.0, 801).unwrap();
        let raw = GridSignal::from_fn(grid, |t| (-(t * t) / 4.0).exp() * (2.0 * t).sin());
        let once = lowpass_project(&ctx, 0.0, &raw, Parametrization::Identity, &opts).unwrap();
        let twice = lowpass_project(&ctx, 0.0, &once.signal, Parametrization::Identity, &opts).unwrap();
        let c1 = once.expansion.coefficients();
        let c2 = twice.expansion.coefficients();
        let scale = c1.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        // the grid cuts off the slowly decaying kernel tails
        let tail = twice.expansion.tail_estimate;
        for (a, b) in c1.iter().zip(c2) {
            assert!((a - b).abs() <= 1e-3 * scale + 2.0 * tail, "{a} {b} tail {tail}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::{prop_assert, prop_assume, proptest, ProptestConfig};

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn reconstruction_exact(seed in 0u64..10_000, n in 3usize..8, theta in 0.0f64..1.0) {
                let p = pair(seed, n);
                let star = exceptional_theta(&p).unwrap();
                prop_assume!((theta - star).abs() > 1e-3);
                let ctx = KernelContext::new(&p).unwrap();
                let mut rng = rand::rngs::StdRng::seed_from_u64(seed ^ 0x55);
                let xs: Vec<f64> = (0..3).map(|_| rng.gen_range(-4.0..4.0)).collect();
                let cs: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let f = |t: f64| -> f64 { xs.iter().zip(&cs).map(|(x, c)| c * kernel::kernel_eval(&ctx, t, *x)).sum() };
                let s = full_sampling_sequence(&p, theta).unwrap();
                let v = sample_signal(Signal::Function { f: &f, support: None }, &s).unwrap();
                let g = GridSpec::span(-6.0, 6.0, 25).unwrap();
                let out = reconstruct(&ctx, &s, &v, &g, Space::Unscaled).unwrap();
                for (t, y) in g.points().iter().zip(out.values()) {
                    prop_assert!((y - f(*t)).abs() < 1e-10);
                }
            }

            #[test]
            fn parseval(seed in 0u64..10_000, n in 3usize..8) {
                let p = pair(seed, n);
                let star = exceptional_theta(&p).unwrap();
                let ctx = KernelContext::new(&p).unwrap();
                let mut rng = rand::rngs::StdRng::seed_from_u64(seed ^ 0xAA);
                let xs: Vec<f64> = (0..4).map(|_| rng.gen_range(-4.0..4.0)).collect();
                let cs: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let mut norm2 = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        norm2 += cs[i] * cs[j] * kernel::kernel_eval(&ctx, xs[i], xs[j]);
                    }
                }
                let f = |t: f64| -> f64 { xs.iter().zip(&cs).map(|(x, c)| c * kernel::kernel_eval(&ctx, t, *x)).sum() };
                for theta in [0.0, 0.3, 0.7] {
                    if (theta - star).abs() < 1e-3 { continue; }
                    let s = full_sampling_sequence(&p, theta).unwrap();
                    let v = sample_signal(Signal::Function { f: &f, support: None }, &s).unwrap();
                    let sum: f64 = v.iter().map(|x| x * x).sum();
                    prop_assert!((sum - norm2).abs() < 1e-8 * norm2.max(1.0), "{sum} {norm2}");
                }
            }
        }
    }
}
