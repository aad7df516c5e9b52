//! Reproduces the four device tables for an x-up spin, exact and sampled.

use spinhvt::harness::{reproduce_table, Mode, TableConfig, TableId};

fn main() -> spinhvt::Result<()> {
    for mode in [Mode::Exact, Mode::MonteCarlo] {
        let cfg = TableConfig { n: 100_000, seed: 42, grid_size: 362, mode, workers: 0 };
        println!("== {mode} ==");
        for id in TableId::ALL {
            let t = reproduce_table(id, &cfg)?;
            println!("table {id} ({})", if t.pass { "matches" } else { "differs" });
            for ((s, q), p) in t.states.iter().zip(&t.q).zip(&t.p) {
                println!("  {s}  Q = {:<10} P = {p}", q.to_string());
            }
        }
    }
    Ok(())
}
