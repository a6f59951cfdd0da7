//! Self-adjoint extensions of the finite matrix model. Their spectra are the
//! sampling sequences and their eigenvectors give the weights t'_n(theta).
//!
//!     cargo run --example matrix_oracle

use rand::SeedableRng;
use tvband::oracle::{build_model, extension_spectrum, oracle_weights};
use tvband::pair::random_pair;
use tvband::spectral::full_sampling_sequence;

/// Largest disagreement in points and in weights.
pub fn run_example() -> tvband::Result<(f64, f64)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let pair = random_pair(&mut rng, 8);
    let model = build_model(&pair)?;
    println!("||phi_+||^2 = {:.15}", model.phi_norm_sqr());

    let (mut dp, mut dw) = (0.0f64, 0.0f64);
    for theta in [0.0, 0.2, 0.45, 0.7] {
        let spec = extension_spectrum(&model, theta)?;
        let set = full_sampling_sequence(&pair, theta)?;
        let w = oracle_weights(&model, &spec);
        for ((v, p), (a, b)) in spec.values.iter().zip(set.points()).zip(w.iter().zip(set.weights())) {
            dp = dp.max((v - p).abs());
            dw = dw.max((a - b).abs());
        }
        println!("theta {theta:<4}: eigenvalues {:?}", spec.values.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>());
    }
    println!("max |eigenvalue - t_n| = {dp:.2e}, max |weight - t'_n| = {dw:.2e}");
    Ok((dp, dw))
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example().map(|_| ())
}
