//! Reproducing kernel of the local bandlimit space.

use rayon::prelude::*;

use crate::charfun::Parametrization;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SampleSet};
use crate::pair::BandlimitPair;
use crate::spectral;

/// Pair plus the lattice `t_k(alpha)` used to expand the kernel.
///
/// Points close to the lattice need no special treatment: the nearest term
/// is isolated analytically, so any `alpha` works everywhere.
#[derive(Debug, Clone)]
pub struct KernelContext<'a> {
    pair: &'a BandlimitPair,
    alpha: f64,
    alpha_set: Option<SampleSet>,
}

impl<'a> KernelContext<'a> {
    /// Context on the node lattice, `alpha = 0`.
    pub fn new(pair: &'a BandlimitPair) -> Result<Self> {
        pair.require_normalized()?;
        Ok(KernelContext { pair, alpha: 0.0, alpha_set: None })
    }

    pub fn with_alpha(pair: &'a BandlimitPair, alpha: f64) -> Result<Self> {
        if alpha == 0.0 {
            return Self::new(pair);
        }
        let set = spectral::full_sampling_sequence(pair, alpha)?;
        Self::with_lattice(pair, set)
    }

    /// Use a precomputed lattice; it must be complete.
    pub fn with_lattice(pair: &'a BandlimitPair, set: SampleSet) -> Result<Self> {
        pair.require_normalized()?;
        if !set.is_complete() {
            return Err(Error::InvalidArgument(format!(
                "lattice for alpha = {} is incomplete (exceptional parameter?)",
                set.theta()
            )));
        }
        Ok(KernelContext { pair, alpha: set.theta(), alpha_set: Some(set) })
    }

    pub fn pair(&self) -> &'a BandlimitPair {
        self.pair
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lattice(&self) -> Lattice<'_> {
        match &self.alpha_set {
            Some(s) => s.lattice().expect("checked complete"),
            None => self.pair.lattice(),
        }
    }

    /// The expansion lattice as a sample set.
    pub fn sample_set(&self) -> SampleSet {
        match &self.alpha_set {
            Some(s) => s.clone(),
            None => spectral::full_sampling_sequence(self.pair, 0.0).expect("normalized"),
        }
    }

    /// Unit vector `u(t)` with `K(t, s) = <u(t), u(s)>`.
    pub fn feature(&self, t: f64) -> Vec<f64> {
        self.lattice().feature(t)
    }
}

/// `f_alpha(t) = (sum_k t'(k+alpha)/(t - t_k(alpha))^2)^{-1/2}`, zero on the lattice.
pub fn f_alpha(ctx: &KernelContext<'_>, t: f64) -> f64 {
    ctx.lattice().f_squared(t).sqrt()
}

/// `K^T(t, s)`.
pub fn kernel_eval(ctx: &KernelContext<'_>, t: f64, s: f64) -> f64 {
    let lat = ctx.lattice();
    dot(&lat.feature(t), &lat.feature(s))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    crate::numeric::sum(a.iter().zip(b).map(|(x, y)| x * y))
}

/// Kernel values on a grid, row-major with `ts.len()` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid {
    pub ts: Vec<f64>,
    pub ss: Vec<f64>,
    pub values: Vec<f64>,
}

impl KernelGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ss.len() + j]
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        use crate::signal::fmt_f64;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "s", "K"])?;
        for (i, &t) in self.ts.iter().enumerate() {
            for (j, &s) in self.ss.iter().enumerate() {
                w.write_record([fmt_f64(t), fmt_f64(s), fmt_f64(self.get(i, j))])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `K^T` on `ts x ss`; feature vectors are computed once per point.
pub fn kernel_grid(ctx: &KernelContext<'_>, ts: &[f64], ss: &[f64]) -> KernelGrid {
    let lat = ctx.lattice();
    let ut: Vec<Vec<f64>> = ts.par_iter().map(|&t| lat.feature(t)).collect();
    let us: Vec<Vec<f64>> = ss.par_iter().map(|&s| lat.feature(s)).collect();
    let values = ut
        .par_iter()
        .flat_map_iter(|a| us.iter().map(move |b| dot(a, b)))
        .collect();
    KernelGrid { ts: ts.to_vec(), ss: ss.to_vec(), values }
}

/// `(mu o tau)'(t) = mu'(tau(t)) tau'(t)`.
pub fn scale_density(pair: &BandlimitPair, mu: &Parametrization, t: f64) -> f64 {
    let lat = pair.lattice();
    let d = lat.phase_derivative(t);
    match mu {
        Parametrization::Identity => d,
        _ => mu.derivative(lat.phase(t)) * d,
    }
}

/// `K^{(T;mu)}(t, s) = sqrt((mu o tau)'(t)) K^T(t, s) sqrt((mu o tau)'(s))`.
pub fn scaled_kernel(ctx: &KernelContext<'_>, mu: &Parametrization, t: f64, s: f64) -> f64 {
    let rt = scale_density(ctx.pair, mu, t);
    let rs = scale_density(ctx.pair, mu, s);
    rt.sqrt() * kernel_eval(ctx, t, s) * rs.sqrt()
}

/// Paley-Wiener kernel `sin(A(t - s))/(A(t - s))`.
pub fn pw_kernel_oracle(a: f64, t: f64, s: f64) -> f64 {
    let x = a * (t - s);
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}
