//! Local bandwidth omega(t) of a pair with a dense cluster of nodes, and a
//! comparison of sample counts against constant-rate Nyquist sampling.
//!
//!     cargo run --example bandlimit

use tvband::charfun::Bandlimit;
use tvband::pair::normalize_pair;
use tvband::sampling::{nyquist_comparison, NyquistReport};
use tvband::BandlimitPair;

pub fn run_example() -> tvband::Result<NyquistReport> {
    // unit spacing with four extra nodes packed into [2, 3]
    let mut nodes: Vec<f64> = (-12..=12).map(f64::from).collect();
    nodes.extend([2.2, 2.4, 2.6, 2.8]);
    nodes.sort_by(f64::total_cmp);
    let n = nodes.len();
    let weights = nodes
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(1.0))
        .collect();
    let pair = normalize_pair(&BandlimitPair::new(-12, nodes, weights)?)?;

    let bl = Bandlimit::new(&pair)?;
    println!("{n} nodes, w* = {:.3e}", bl.w());
    for t in [-4.0, -1.0, 0.0, 1.5, 2.5, 3.5, 5.0] {
        println!("  omega({t:+.1}) = {:.4}", bl.omega(t)?);
    }

    let report = nyquist_comparison(&pair, (-5.0, 5.0))?;
    println!(
        "window [-5, 5]: {} time-varying samples vs {:.1} at the peak rate (ratio {:.3})",
        report.tv_count, report.nyquist_count, report.ratio
    );
    Ok(report)
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example().map(|_| ())
}
