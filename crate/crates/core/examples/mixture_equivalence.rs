//! Three different ensembles, one density matrix: every reduction agrees.

use std::sync::Arc;

use spinhvt::models::{make_model, DirectionGrid, MixtureId, ModelKind, Preparation, RepeatRule};
use spinhvt::qcore::Direction;

fn main() -> spinhvt::Result<()> {
    let probe = Direction::normalized(0.0, 3f64.sqrt() / 2.0, -0.5)?;
    let grid = Arc::new(DirectionGrid::with_default_size(&[probe])?);
    for id in [MixtureId::I, MixtureId::II, MixtureId::III] {
        let prep = Preparation::Mixture(id);
        let rho = prep.density()?;
        println!("mixture {id}: {} components, rho = diag({}, {})", prep.components().len(), rho.entry(0, 0).re, rho.entry(1, 1).re);
    }
    let models: Vec<_> = [MixtureId::I, MixtureId::II, MixtureId::III]
        .into_iter()
        .map(|id| make_model(ModelKind::Ihvt, &Preparation::Mixture(id), Arc::clone(&grid), RepeatRule::Strict))
        .collect::<spinhvt::Result<_>>()?;
    let mut worst: f64 = 0.0;
    for r in grid.points() {
        let p: Vec<f64> = models.iter().map(|m| m.reading(r).map(|x| x.p_up.unwrap())).collect::<spinhvt::Result<_>>()?;
        worst = worst.max((p[0] - p[1]).abs()).max((p[0] - p[2]).abs());
    }
    println!("largest disagreement over {} directions: {worst:e}", grid.len());

    // after a strict z-down result the ensembles come apart
    for (id, m) in ["I", "II", "III"].iter().zip(&models) {
        let down = m.branches(&Direction::Z)?.into_iter().find(|b| b.outcome.value() == Some(-1)).unwrap();
        println!("mixture {id}: after z down, p(up along {probe}) = {:.4}", down.post.reading(&probe)?.p_up.unwrap());
    }
    Ok(())
}
