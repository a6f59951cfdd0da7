//! Sampling sequences t_n(theta) of a random pair, their interlacing, and
//! the one exceptional theta where a point escapes to infinity.
//!
//!     cargo run --example sampling_sequences

use rand::SeedableRng;
use tvband::pair::random_pair;
use tvband::spectral::{exceptional_theta, full_sampling_sequence, phase_tau};

pub fn run_example() -> tvband::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let pair = random_pair(&mut rng, 6);

    for theta in [0.0, 0.25, 0.5, 0.75] {
        let set = full_sampling_sequence(&pair, theta)?;
        print!("theta {theta:>4}:");
        for (n, t) in set.labels().zip(set.points()) {
            print!("  {n}:{t:+.4}");
        }
        println!();
        // every point lies on the level set tau = n + theta
        for (n, t) in set.labels().zip(set.points()) {
            let r = phase_tau(&pair, *t)? - (n as f64 + theta);
            assert!(r.abs() < 1e-9);
        }
    }

    let star = exceptional_theta(&pair)?;
    let set = full_sampling_sequence(&pair, star)?;
    println!(
        "exceptional theta {star:.6}: {} points, point at infinity: {}",
        set.len(),
        set.has_point_at_infinity()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example()
}
