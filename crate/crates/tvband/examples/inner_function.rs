//! The characteristic function Theta is inner: unimodular on the line,
//! zero at i, and equal to e^{i 2 pi theta} on the theta-lattice.
//!
//!     cargo run --example inner_function

use std::f64::consts::PI;

use rand::SeedableRng;
use tvband::charfun::{herglotz_eval, theta_eval};
use tvband::numeric::{C64, I};
use tvband::pair::random_pair;
use tvband::spectral::full_sampling_sequence;

pub fn run_example() -> tvband::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
    let pair = random_pair(&mut rng, 5);

    let dev = (0..400)
        .map(|k| -30.0 + 60.0 * k as f64 / 399.0)
        .map(|t| theta_eval(&pair, C64::from(t)).map(|v| (v.norm() - 1.0).abs()))
        .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))?;
    println!("max ||Theta(t)| - 1| on [-30, 30]: {dev:.2e}");
    println!("|Theta(i)| = {:.2e}", theta_eval(&pair, I)?.norm());

    let set = full_sampling_sequence(&pair, 0.3)?;
    let target = C64::from_polar(1.0, 2.0 * PI * 0.3);
    for t in set.points() {
        println!("  Theta({t:+.5}) - e^(0.6 pi i) = {:.1e}", (theta_eval(&pair, C64::from(*t))? - target).norm());
    }

    let h = herglotz_eval(&pair, C64::new(0.4, 0.2))?;
    println!("H(0.4 + 0.2i) = {:.6} {:+.6}i", h.re, h.im);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example()
}
