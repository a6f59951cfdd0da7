//! Integrate the spectral function t(s) of a pair and compare it with the
//! root-found sampling points and the functional equation.
//!
//!     cargo run --example spectral_ode

use rand::SeedableRng;
use tvband::pair::random_pair;
use tvband::spectral::{full_sampling_sequence, functional_equation_residual, solve_spectral_ode, OdeOptions};

pub fn run_example() -> tvband::Result<f64> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let pair = random_pair(&mut rng, 7);
    let opts = OdeOptions::default();
    let span = (pair.lo() as f64, pair.hi() as f64);
    let table = solve_spectral_ode(&pair, span, &opts)?;
    println!("t(s) on [{}, {}], {} grid values", span.0, span.1, table.s_grid.len());
    println!("max residual at integers: {:.2e}", table.max_integer_residual());

    let mut worst = 0.0f64;
    for theta in [0.25, 0.5, 0.75] {
        let set = full_sampling_sequence(&pair, theta)?;
        for (n, t) in set.labels().zip(set.points()) {
            let s = n as f64 + theta;
            if s >= span.0 && s <= span.1 {
                let k = table.s_grid.iter().position(|&x| (x - s).abs() < 1e-12).expect("on grid");
                worst = worst.max((table.t_values[k] - t).abs());
            }
        }
    }
    println!("max |t(n + theta) - t_n(theta)|: {worst:.2e}");
    let r = functional_equation_residual(&pair, span.0 + 0.37, &opts)?;
    println!("functional equation residual at s = {}: {r:.2e}", span.0 + 0.37);
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example().map(|_| ())
}
