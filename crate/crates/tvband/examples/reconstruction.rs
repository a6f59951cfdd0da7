//! Sample a member of the space on one lattice and rebuild it exactly,
//! in both the unscaled and the mu-scaled space.
//!
//!     cargo run --example reconstruction

use rand::{Rng, SeedableRng};
use tvband::charfun::{MobiusParam, Parametrization};
use tvband::kernel::{kernel_eval, scaled_kernel, KernelContext};
use tvband::pair::random_pair;
use tvband::sampling::{reconstruct, sample_signal, Signal, Space};
use tvband::spectral::full_sampling_sequence;
use tvband::GridSpec;

/// Largest reconstruction error over both spaces and all lattices tried.
pub fn run_example() -> tvband::Result<f64> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let pair = random_pair(&mut rng, 7);
    let ctx = KernelContext::new(&pair)?;
    let anchors: Vec<(f64, f64)> = (0..4).map(|_| (rng.gen_range(-4.0..4.0), rng.gen_range(-1.0..1.0))).collect();
    let f = |t: f64| -> f64 { anchors.iter().map(|(x, c)| c * kernel_eval(&ctx, t, *x)).sum() };

    let mu = Parametrization::Mobius(MobiusParam::real(0.3)?);
    let g = |t: f64| -> f64 { anchors.iter().map(|(x, c)| c * scaled_kernel(&ctx, &mu, t, *x)).sum() };

    let grid = GridSpec::span(-8.0, 8.0, 161)?;
    let mut worst = 0.0f64;
    for theta in [0.1, 0.4, 0.9] {
        let set = full_sampling_sequence(&pair, theta)?;
        let fv = sample_signal(Signal::Function { f: &f, support: None }, &set)?;
        let gv = sample_signal(Signal::Function { f: &g, support: None }, &set)?;
        let fr = reconstruct(&ctx, &set, &fv, &grid, Space::Unscaled)?;
        let gr = reconstruct(&ctx, &set, &gv, &grid, Space::Scaled(mu))?;
        let mut ef = 0.0f64;
        let mut eg = 0.0f64;
        for (k, t) in grid.points().into_iter().enumerate() {
            ef = ef.max((fr.values()[k] - f(t)).abs());
            eg = eg.max((gr.values()[k] - g(t)).abs());
        }
        println!("theta {theta}: {} samples, error {ef:.2e} (unscaled), {eg:.2e} (scaled)", set.len());
        worst = worst.max(ef).max(eg);
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example().map(|_| ())
}
