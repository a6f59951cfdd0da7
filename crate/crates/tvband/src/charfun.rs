//! Characteristic function, Herglotz function, disk automorphisms, analytic
//! parametrizations, the model kernel, the multiplier and the time-varying
//! bandlimit.

use std::f64::consts::PI;

use crate::error::{Error, Point, Result};
use crate::lattice::SampleSet;
use crate::numeric::C64;
use crate::pair::BandlimitPair;
use crate::spectral;

/// `Theta(z)` for a normalized pair. Returns exactly 1 at the nodes.
pub fn theta_eval(pair: &BandlimitPair, z: C64) -> Result<C64> {
    pair.require_normalized()?;
    pair.lattice().inner(z)
}

/// `Theta(z)` rebuilt from the lattice `(t_n(theta), t'_n(theta))`.
pub fn theta_eval_theta_form(set: &SampleSet, z: C64) -> Result<C64> {
    let lat = set.require_lattice()?;
    let rot = C64::from_polar(1.0, 2.0 * PI * set.theta());
    Ok(rot * lat.inner(z)?)
}

/// `H(z) = (1 + Theta(z))/(1 - Theta(z))` off the real axis.
pub fn herglotz_eval(pair: &BandlimitPair, z: C64) -> Result<C64> {
    pair.require_normalized()?;
    pair.lattice().herglotz(z)
}

/// Disk automorphism parameter, `|w| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusParam {
    w: C64,
}

impl MobiusParam {
    pub fn new(w: C64) -> Result<Self> {
        if !(w.norm() < 1.0) {
            return Err(Error::InvalidArgument(format!("|w| must be < 1, got {w}")));
        }
        Ok(MobiusParam { w })
    }

    pub fn real(w: f64) -> Result<Self> {
        Self::new(C64::new(w, 0.0))
    }

    pub fn w(&self) -> C64 {
        self.w
    }

    pub fn neg(&self) -> Self {
        MobiusParam { w: -self.w }
    }
}

/// `F_w(z) = (z - w)/(1 - z conj(w))`.
pub fn mobius(w: MobiusParam, z: C64) -> Result<C64> {
    let den = 1.0 - z * w.w.conj();
    if den.norm() == 0.0 {
        return Err(Error::Pole { what: "disk automorphism", at: Point { re: z.re, im: z.im } });
    }
    Ok((z - w.w) / den)
}

/// Continuous branch of `arg F_w(exp(2 pi i t))/(2 pi)` with value in
/// `[0, 1)` at `t = 0`.
///
/// `F_w(e^{i phi}) = e^{i phi} z/conj(z)` with `z = 1 - w e^{-i phi}`, and
/// `Re z > 0`, so the principal argument of `z` is already continuous.
pub fn lambda_w(w: MobiusParam, t: f64) -> f64 {
    let z = 1.0 - w.w * C64::from_polar(1.0, -2.0 * PI * t);
    let shift = if (1.0 - w.w).arg() < 0.0 { 1.0 } else { 0.0 };
    t + z.arg() / PI + shift
}

/// `lambda_w'(t) = (1 - |w|^2)/|exp(2 pi i t) - w|^2`.
pub fn lambda_w_prime(w: MobiusParam, t: f64) -> f64 {
    (1.0 - w.w.norm_sqr()) / (C64::from_polar(1.0, 2.0 * PI * t) - w.w).norm_sqr()
}

/// `mu_w(t) = lambda_w(t) - lambda_w(0)`.
pub fn mu_w(w: MobiusParam, t: f64) -> f64 {
    lambda_w(w, t) - lambda_w(w, 0.0)
}

pub fn mu_w_prime(w: MobiusParam, t: f64) -> f64 {
    lambda_w_prime(w, t)
}

/// Smooth parametrization of `[0, 1]` used to rescale kernels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Parametrization {
    #[default]
    Identity,
    Mobius(MobiusParam),
}

impl Parametrization {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Parametrization::Identity => x,
            Parametrization::Mobius(w) => mu_w(*w, x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Parametrization::Identity => 1.0,
            Parametrization::Mobius(w) => mu_w_prime(*w, x),
        }
    }
}

/// Model space kernel `k(z, w)` on the closed upper half-plane. On the real
/// diagonal it equals `tau'(t)`.
pub fn model_kernel(pair: &BandlimitPair, z: C64, w: C64) -> Result<C64> {
    pair.require_normalized()?;
    if z.im < 0.0 || w.im < 0.0 {
        return Err(Error::InvalidArgument("model kernel needs Im z, Im w >= 0".into()));
    }
    Ok(pair.lattice().model_kernel(z, w))
}

/// Multiplier `M(t)` with `K^T(t, s) = M(t) k(t, s) conj(M(s))`.
pub fn multiplier_m(pair: &BandlimitPair, t: f64) -> Result<C64> {
    pair.require_normalized()?;
    Ok(pair.lattice().multiplier(t))
}

/// `f = g^{-1}` for `g(x) = x coth x` on `[1, inf)`.
pub fn inverse_x_coth_x(y: f64) -> f64 {
    if y <= 1.0 {
        return 0.0;
    }
    let g = |x: f64| -> (f64, f64) {
        if x < 1e-3 {
            let x2 = x * x;
            (1.0 + x2 / 3.0 - x2 * x2 / 45.0, 2.0 * x / 3.0 - 4.0 * x * x2 / 45.0)
        } else {
            let c = 1.0 / x.tanh();
            let s = x.sinh();
            (x * c, c - x / (s * s))
        }
    };
    let (mut lo, mut hi) = (0.0, y);
    // x coth x >= x, and ~ 1 + x^2/3 near zero
    let mut x = if y < 1.5 { (3.0 * (y - 1.0)).sqrt() } else { y };
    for _ in 0..200 {
        let (gx, dg) = g(x);
        let r = gx - y;
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = if dg > 0.0 { x - r / dg } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-13 * next.abs() || hi - lo <= 1e-13 * hi {
            return next;
        }
        x = next;
    }
    x
}

/// Canonical Frostman parameter `w = (x - f(x))/(x + f(x))`, `x = pi tau'(0)`.
pub fn compute_w_star(pair: &BandlimitPair) -> Result<f64> {
    let x = PI * spectral::tau_prime(pair, 0.0)?;
    if x < 1.0 - 1e-12 {
        return Err(Error::NotNormalized { sum: pair.admissibility_sum() });
    }
    if x <= 1.0 + 1e-9 {
        return Err(Error::Degenerate(format!(
            "pi tau'(0) = {x} is at the boundary; w would leave the unit disk"
        )));
    }
    let f = inverse_x_coth_x(x);
    Ok((x - f) / (x + f))
}

/// Time-varying bandlimit `omega(t) = pi (mu_{-w} o tau)'(t)`.
pub fn bandlimit_omega(pair: &BandlimitPair, t: f64) -> Result<f64> {
    Bandlimit::new(pair)?.omega(t)
}

/// [`bandlimit_omega`] with `w` computed once.
#[derive(Debug, Clone)]
pub struct Bandlimit<'a> {
    pair: &'a BandlimitPair,
    w: f64,
}

impl<'a> Bandlimit<'a> {
    pub fn new(pair: &'a BandlimitPair) -> Result<Self> {
        let w = compute_w_star(pair)?;
        Ok(Bandlimit { pair, w })
    }

    /// Pin `w` instead of computing the canonical value.
    pub fn with_w(pair: &'a BandlimitPair, w: f64) -> Result<Self> {
        pair.require_normalized()?;
        MobiusParam::real(w)?;
        Ok(Bandlimit { pair, w })
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// The parametrization `mu_{-w}` whose composition with `tau` has
    /// derivative `omega/pi`.
    pub fn parametrization(&self) -> Parametrization {
        Parametrization::Mobius(MobiusParam { w: C64::new(-self.w, 0.0) })
    }

    pub fn omega(&self, t: f64) -> Result<f64> {
        let lat = self.pair.lattice();
        let tau = lat.phase(t);
        let dtau = lat.phase_derivative(t);
        let w = self.w;
        Ok(PI * dtau * (1.0 - w * w) / (C64::from_polar(1.0, 2.0 * PI * tau) + w).norm_sqr())
    }
}
