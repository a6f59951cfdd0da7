//! Build a pair from nodes and weights, validate it, and normalize it.
//!
//!     cargo run --example normalize_pair

use tvband::pair::{normalize_pair, validate_pair, BandlimitPair, IndexRange, PairFile};

pub fn run_example() -> tvband::Result<BandlimitPair> {
    let raw = PairFile {
        indices: IndexRange { lo: -2, hi: 2 },
        nodes: vec![-3.0, -1.2, 0.1, 0.9, 2.5],
        weights: vec![1.0, 0.7, 1.3, 0.9, 1.1],
        normalized: false,
        scale: None,
        admissibility_sum: None,
        truncation_of: None,
    };
    let report = validate_pair(&raw);
    println!("violations: {}", if report.is_empty() { "none".to_string() } else { report.to_string() });

    let pair = normalize_pair(&BandlimitPair::from_file(raw)?)?;
    println!("scale factor {:.6}, sum t'/(1+t^2) = {:.15}", pair.scale(), pair.admissibility_sum());

    let mut broken = pair.to_file();
    broken.nodes.swap(1, 2);
    println!("after swapping two nodes: {}", validate_pair(&broken));

    println!("{}", pair.to_json()?);
    Ok(pair)
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example().map(|_| ())
}
