//! z then x on an x-up spin under both post-measurement rules.

use spinhvt::harness::{run, ExperimentSpec, Mode};
use spinhvt::models::{ModelKind, Preparation, RepeatRule};
use spinhvt::qcore::Direction;

fn main() -> spinhvt::Result<()> {
    let kinds = [ModelKind::Quantum, ModelKind::Dice, ModelKind::Ehvt, ModelKind::Ihvt, ModelKind::Bell, ModelKind::Bohm];
    for rule in [RepeatRule::Strict, RepeatRule::Adapted] {
        println!("rule: {rule}");
        for kind in kinds {
            let spec = ExperimentSpec::new(kind, Preparation::Up(Direction::X), vec![Direction::Z, Direction::X])
                .with_rule(rule)
                .with_mode(Mode::Exact);
            let r = run(&spec)?;
            println!("  {kind}: second stage Q = {:<22} P = {}", r.q.to_string(), r.p);
        }
    }
    Ok(())
}
