//! Every model against the five quantum-state facts.

use spinhvt::harness::{qs_facts_check, Mode, QsFactsConfig};
use spinhvt::models::{ModelKind, RepeatRule};

fn main() -> spinhvt::Result<()> {
    let kinds = [
        ModelKind::Quantum,
        ModelKind::Dice,
        ModelKind::Ehvt,
        ModelKind::Ihvt,
        ModelKind::Bell,
        ModelKind::Bohm,
        ModelKind::NaiveZ,
    ];
    println!("model rule     QS-I  QS-II  QS-III  QS-IV  QS-V");
    for rule in [RepeatRule::Strict, RepeatRule::Adapted] {
        for kind in kinds {
            let cfg = QsFactsConfig { kind, rule, n: 20_000, seed: 42, mode: Mode::Exact, grid_size: 362, workers: 0 };
            let r = qs_facts_check(&cfg)?;
            let row: Vec<String> = r.facts.iter().map(|f| format!("{:<6}", f.verdict.to_string())).collect();
            println!("{:<5} {:<8} {}", kind.letter(), rule.to_string(), row.join(" "));
        }
    }
    Ok(())
}
