//! Single- and two-spin linear algebra: directions, Pauli operators, density
//! matrices, the Born rule and projective collapse.

pub mod broadcast;
pub mod density;
pub mod direction;
pub mod measurement;

pub use broadcast::{broadcast_demo, Broadcast};
pub use density::{
    c, eigenbasis, kron, max_abs_diff, mixture, pauli_x, pauli_y, pauli_z, spin_operator, up_projector, CMatrix,
    DensityMatrix, C64, EXACT_TOL, PSD_TOL,
};
pub use direction::{BlochVector, Direction, SAME_DIRECTION_TOL, UNIT_TOL};
pub use measurement::{born, collapse, sample_born, Outcome};

/// `(theta, phi)` in radians to a unit vector.
pub fn direction_from_angles(theta: f64, phi: f64) -> Direction {
    Direction::from_angles(theta, phi)
}
