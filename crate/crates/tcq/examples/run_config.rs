//! Driving the command-line front end from code, and reloading a run's
//! configuration from its JSON output.

use tcq::cli::{run, RunConfig};

fn main() -> tcq::Result<()> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(["tcq", "regime", "--n", "121", "--preset", "paper", "--format", "json"], &mut out, &mut err);
    let text = String::from_utf8_lossy(&out);
    println!("exit {code}\n{text}");
    let cfg = RunConfig::from_json(&text)?;
    println!("reloaded: {cfg:?}");
    assert_eq!(RunConfig::from_json(&cfg.to_json()?)?, cfg);
    Ok(())
}
