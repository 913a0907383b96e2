//! Regenerates the plot data of one figure into a directory.
//!
//! `cargo run --release --example figure_tables -- fig5 out/` writes
//! `out/fig5.csv`. Without arguments the reduction-factor figure is written
//! to the system temporary directory.

use std::path::PathBuf;

use spinpol::harness::{run_figure, FigureId, FigureOptions};

fn main() -> spinpol::Result<()> {
    let mut args = std::env::args().skip(1);
    let id: FigureId = args.next().as_deref().unwrap_or("fig2").parse()?;
    let dir = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("spinpol-figures"));
    let opts = FigureOptions::from_env()?;
    for table in run_figure(id, &opts)? {
        let path = table.write_to_dir(&dir)?;
        println!("{}: {} rows, {} columns -> {}", table.name, table.rows.len(), table.header.len(), path.display());
        for (k, v) in table.metadata.iter().take(6) {
            println!("    # {k}: {v}");
        }
    }
    Ok(())
}
