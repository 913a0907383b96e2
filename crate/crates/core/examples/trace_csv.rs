//! Writes a protocol trace as CSV and reads it back.

use spinpol::harness::{emit_trace_csv, parse_trace_csv};
use spinpol::{run_protocol, ModelParams, Strategy};

fn main() -> spinpol::Result<()> {
    let params = ModelParams::new(200, 0.1, 0.03, 0.01)?;
    let trace = run_protocol(&params, &Strategy::unequal(1), 8)?;

    let path = std::env::temp_dir().join(format!("spinpol-trace-{}.csv", std::process::id()));
    emit_trace_csv(&trace, &path, &[("note".into(), "example".into())])?;
    let text = std::fs::read_to_string(&path)?;
    print!("{text}");

    let parsed = parse_trace_csv(&text)?;
    assert_eq!(parsed.rounds.len(), trace.len());
    println!("read back {} rounds and {} metadata entries", parsed.rounds.len(), parsed.metadata.len());
    std::fs::remove_file(&path)?;
    Ok(())
}
