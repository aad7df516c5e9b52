//! Two detectors competing for one spin: the winner statistics follow J1.

use spinhvt::harness::bohm_statistics;
use spinhvt::models::BohmParams;

fn main() -> spinhvt::Result<()> {
    println!("  J1   winner-1 freq   +-95%    drift     mean steps");
    for j1 in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let r = bohm_statistics(j1, 20_000, 42, &BohmParams::default(), 0)?;
        println!("{j1:>5}  {:>12.4}  {:>8.4}  {:>8.1e}  {:>8.0}", r.frequency, r.half_width, r.max_drift, r.mean_steps);
    }
    let r = bohm_statistics(0.3, 1, 7, &BohmParams::default(), 1)?;
    println!("one trajectory (J1, J2), thinned:");
    for (a, b) in r.example.iter().step_by(r.example.len().div_ceil(10).max(1)) {
        println!("  {a:.6} {b:.6}");
    }
    Ok(())
}
