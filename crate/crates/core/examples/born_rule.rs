//! Model A against the Born rule on a handful of random devices.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinhvt::harness::{run, ExperimentSpec, Mode};
use spinhvt::models::{ModelKind, Preparation};
use spinhvt::qcore::Direction;

fn main() -> spinhvt::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("{:>36}  {:>8}  {:>8}  {:>8}", "device", "exact", "sampled", "+-95%");
    for i in 0..8 {
        let d = Direction::random(&mut rng);
        let spec = ExperimentSpec::new(ModelKind::Quantum, Preparation::Up(Direction::X), vec![d]).with_trials(100_000, i);
        let mc = run(&spec)?;
        let ex = run(&spec.clone().with_mode(Mode::Exact))?;
        println!(
            "{:>36}  {:>8.5}  {:>8.5}  {:>8.5}",
            d.to_string(),
            ex.p.value().unwrap(),
            mc.p.value().unwrap(),
            mc.p_half_width.value().unwrap()
        );
    }
    Ok(())
}
