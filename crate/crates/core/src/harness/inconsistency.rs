//! Two readings of `p(x up)` for an `x`-up spin in the hidden-variable models.
//!
//! The projector reading applies `|up_x><up_x|` to the model's state as if it
//! were an operator on that state. The model reading runs the model's own
//! measurement rule. The two also disagree on what the post-measurement state
//! is: the projector read as a state pins one event (C) or one factor (D) and
//! says nothing about the rest, while the model's own post-state does.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::qsfacts::probe_directions;
use crate::models::{make_model, DirectionGrid, EhvtState, IhvtState, ModelKind, Preparation, RepeatRule};
use crate::qcore::{Direction, Outcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InconsistencyReport {
    pub kind: ModelKind,
    pub grid_size: usize,
    /// `tr(|up_x><up_x| rho)` and `tr(|down_x><down_x| rho)`.
    pub projector_up: f64,
    pub projector_down: f64,
    pub projector_label: String,
    /// The model's own `P(up | activated)` and activation probability.
    pub model_up: f64,
    pub model_activation: f64,
    pub model_label: String,
    /// `projector_up / model_up`.
    pub ratio: Option<f64>,
    /// Largest gap over the probe directions between the model's state and
    /// the projector read as a state.
    pub representation_distance: f64,
    pub representation_mismatch: bool,
}

pub fn inconsistency_report(kind: ModelKind, grid_size: usize) -> Result<InconsistencyReport> {
    let probes = probe_directions();
    let grid = Arc::new(DirectionGrid::new(grid_size, &probes)?);
    let x = Direction::X;
    let model = make_model(kind, &Preparation::Up(x), Arc::clone(&grid), RepeatRule::Adapted)?;
    let reading = model.reading(&x)?;
    let model_up = reading.p_up.unwrap_or(0.0);

    let (projector_up, projector_down, projector_label, model_label, distance) = match kind {
        ModelKind::Ehvt => {
            let field = EhvtState::field(&grid, &x.into());
            let ix = grid.require(&x)?;
            let up = field.weights[ix][0];
            let down = field.weights[ix][1];
            // the projector as a state: all mass on the event (x, up)
            let pinned = EhvtState::event(&grid, ix, Outcome::Up)?;
            let distance = probes
                .iter()
                .map(|r| {
                    let i = grid.require(r).expect("probe on grid");
                    (field.weights[i][0] - pinned.weights[i][0]).abs()
                })
                .fold(0.0, f64::max);
            (
                up,
                down,
                "weight of the event (x, up) in the exclusive-event state".to_string(),
                "conditional frequency of the device reading, given that it fired".to_string(),
                distance,
            )
        }
        ModelKind::Ihvt => {
            let state = IhvtState::pure(x);
            let (up, down) = state.reduced(&x);
            // the projector as a state: factor x pinned up, other factors unspecified
            let distance = probes
                .iter()
                .map(|r| {
                    let pinned = if r.same_as(&x) {
                        1.0
                    } else if r.same_as(&-x) {
                        0.0
                    } else {
                        0.5
                    };
                    (state.reduced(r).0 - pinned).abs()
                })
                .fold(0.0, f64::max);
            (
                up,
                down,
                "projector on the x factor of the product state".to_string(),
                "reduced state along x".to_string(),
                distance,
            )
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "inconsistency report needs model C or D, got {other}"
            )))
        }
    };
    Ok(InconsistencyReport {
        kind,
        grid_size: grid.len(),
        projector_up,
        projector_down,
        projector_label,
        model_up,
        model_activation: reading.activation,
        model_label,
        ratio: (model_up > 0.0).then(|| projector_up / model_up),
        representation_distance: distance,
        representation_mismatch: distance > 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exclusive_events() {
        let r = inconsistency_report(ModelKind::Ehvt, 362).unwrap();
        assert!((r.projector_up - 1.0 / 362.0).abs() < 1e-15);
        assert_eq!(r.projector_down, 0.0);
        assert!((r.model_up - 1.0).abs() < 1e-12);
        assert!((r.model_activation - 2.0 / 362.0).abs() < 1e-12);
        assert!(r.representation_mismatch);
    }

    #[test]
    fn independent_events() {
        let r = inconsistency_report(ModelKind::Ihvt, 362).unwrap();
        assert_eq!((r.projector_up, r.model_up, r.ratio), (1.0, 1.0, Some(1.0)));
        assert!(r.representation_mismatch);
        assert!(inconsistency_report(ModelKind::Quantum, 362).is_err());
    }
}
