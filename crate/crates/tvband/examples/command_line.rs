//! Drive the command-line front end in-process: normalize a pair, compute
//! sequences, and run the verification suite.
//!
//!     cargo run --example command_line

use tvband::cli::run;

pub fn run_example() -> tvband::Result<Vec<i32>> {
    let dir = std::env::temp_dir().join(format!("tvband-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let raw = dir.join("pair.json");
    std::fs::write(
        &raw,
        r#"{"indices":{"lo":0,"hi":4},"nodes":[-2.0,-0.5,0.3,1.1,3.0],"weights":[1,1,1,1,1],"normalized":false}"#,
    )?;
    let pair = dir.join("normalized.json");
    let path = |p: &std::path::Path| p.to_string_lossy().into_owned();

    let codes = vec![
        run(["tvband", "normalize", "--pair", &path(&raw), "--out", &path(&pair)]),
        run(["tvband", "sequences", "--pair", &path(&pair), "--theta", "0,0.5", "--out", &path(&dir.join("seq.csv"))]),
        run(["tvband", "verify", "--pair", &path(&pair), "--out", &path(&dir.join("verify.json"))]),
    ];
    println!("exit codes {codes:?}");
    println!("{}", std::fs::read_to_string(dir.join("seq.csv"))?);
    std::fs::remove_dir_all(&dir)?;
    Ok(codes)
}

#[allow(dead_code)]
fn main() -> tvband::Result<()> {
    run_example().map(|_| ())
}
