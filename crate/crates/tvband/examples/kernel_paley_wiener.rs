//! The reproducing kernel of truncated Paley-Wiener pairs approaches
//! sin(A(t-s))/(A(t-s)) like 1/N.
//!
//!     cargo run --release --example kernel_paley_wiener

use std::f64::consts::PI;

use tvband::kernel::{kernel_grid, pw_kernel_oracle, KernelContext};
use tvband::BandlimitPair;

/// Max error on a grid over [-1, 1]^2 for each truncation.
pub fn run_example() -> tvband::Result<Vec<(usize, f64)>> {
    let a = PI;
    let pts: Vec<f64> = (0..11).map(|k| -1.0 + 0.2 * k as f64).collect();
    let mut rows = Vec::new();
    println!("{:>8}  {:>12}  {:>10}", "N", "max error", "N * error");
    for n in [100, 1000, 10_000] {
        let pair = BandlimitPair::paley_wiener(a, n)?;
        let ctx = KernelContext::new(&pair)?;
        let grid = kernel_grid(&ctx, &pts, &pts);
        let mut err = 0.0f64;
        for (i, &t) in pts.iter().enumerate() {
            for (j, &s) in pts.iter().enumerate() {
                err = err.max((grid.get(i, j) - pw_kernel_oracle(a, t, s)).abs());
            }
        }
        println!("{n:>8}  {err:>12.3e}  {:>10.4}", err * n as f64);
        rows.push((n, err));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example().map(|_| ())
}
