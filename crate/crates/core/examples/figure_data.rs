//! Writes the figure datasets and a Monte Carlo table through the same code
//! paths as the `wb` binary.
//!
//! cargo run --example figure_data -- [OUT_DIR]

use std::path::PathBuf;

use wigner_backflow::cli::{cmd_figures, cmd_montecarlo, RunConfig};

fn main() -> wigner_backflow::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("wb-figure-data"));
    let config = RunConfig::from_json(r#"{"eps0": -2, "xi0": 0, "eta0": 0.1, "delta": 2, "n": 200000}"#)?;
    print!("{}", cmd_figures(&config, &out)?.stdout);
    print!("{}", cmd_montecarlo(&config, &out)?.stdout);
    println!("written to {}", out.display());
    Ok(())
}
