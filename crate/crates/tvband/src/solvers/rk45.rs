//! Dormand-Prince 5(4) with step size control for scalar ODEs.

#[derive(Debug, Clone, Copy)]
pub struct Rk45Options {
    pub rtol: f64,
    pub atol: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for Rk45Options {
    fn default() -> Self {
        Rk45Options { rtol: 1e-9, atol: 1e-12, min_step: 1e-12, max_steps: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rk45Error {
    StepCollapse { x: f64, h: f64 },
    TooManySteps { x: f64 },
    NonFinite { x: f64 },
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate `y' = f(x, y)` from `(x0, y0)` and return `y` at each of
/// `targets`, which must be sorted in the direction of integration. Steps
/// are clipped so that every target is hit exactly.
pub fn integrate<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    x0: f64,
    y0: f64,
    targets: &[f64],
    opts: &Rk45Options,
) -> Result<Vec<f64>, Rk45Error> {
    let mut out = Vec::with_capacity(targets.len());
    let Some(&last) = targets.last() else {
        return Ok(out);
    };
    let dir = if last >= x0 { 1.0 } else { -1.0 };
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, y);
    let span = (last - x0).abs();
    let mut h = (0.01 * span).max(opts.min_step * 10.0).min(span.max(opts.min_step)) * dir;
    let mut steps = 0;
    for &target in targets {
        while (target - x) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Rk45Error::TooManySteps { x });
            }
            let remaining = target - x;
            let clipped = if (h * dir) >= remaining * dir { remaining } else { h };
            let hh = clipped;
            let k2 = f(x + C2 * hh, y + hh * A21 * k1);
            let k3 = f(x + C3 * hh, y + hh * (A31 * k1 + A32 * k2));
            let k4 = f(x + C4 * hh, y + hh * (A41 * k1 + A42 * k2 + A43 * k3));
            let k5 = f(x + C5 * hh, y + hh * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
            let k6 = f(x + hh, y + hh * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
            let y_new = y + hh * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
            let k7 = f(x + hh, y_new);
            let err = hh * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
            if !y_new.is_finite() || !err.is_finite() {
                h = 0.5 * hh;
                if h.abs() < opts.min_step {
                    return Err(Rk45Error::NonFinite { x });
                }
                continue;
            }
            let sc = opts.atol + opts.rtol * y.abs().max(y_new.abs());
            let ratio = (err / sc).abs();
            if ratio <= 1.0 {
                x = if hh == remaining { target } else { x + hh };
                y = y_new;
                k1 = k7;
                let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).min(5.0) };
                let proposal = hh * grow;
                // a step clipped to hit a target says nothing about the scale
                h = if hh == remaining && proposal.abs() < h.abs() { h } else { proposal };
            } else {
                h = hh * (0.9 * ratio.powf(-0.2)).max(0.2);
                if h.abs() < opts.min_step {
                    return Err(Rk45Error::StepCollapse { x, h: h.abs() });
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}
