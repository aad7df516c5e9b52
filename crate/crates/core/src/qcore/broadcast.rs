//! Measurement as correlation with a meter, followed by a partial trace.
//!
//! The object's components `rho_{mu nu}` in a chosen basis are copied onto a
//! meter qubit, giving `sum rho_{mu nu} |mu, M(mu)><nu, M(nu)|`. For a state
//! diagonal in that basis both marginals reproduce the input (a classical
//! broadcast); otherwise the off-diagonal terms are lost from both marginals.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcore::density::{c, eigenbasis, CMatrix, DensityMatrix};
use crate::qcore::direction::Direction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Broadcast {
    pub joint: DensityMatrix,
    pub reduced_object: DensityMatrix,
    pub reduced_meter: DensityMatrix,
}

impl Broadcast {
    /// Largest entrywise deviation of either marginal from `rho`.
    pub fn copy_error(&self, rho: &DensityMatrix) -> f64 {
        self.reduced_object.max_abs_diff(rho).max(self.reduced_meter.max_abs_diff(rho))
    }
}

pub fn broadcast_demo(rho: &DensityMatrix, basis: &Direction) -> Result<Broadcast> {
    rho.require_dim(2)?;
    let u = eigenbasis(basis)?;
    // components of rho in the basis {|up_b>, |down_b>}
    let coeffs = u.adjoint() * rho.matrix() * &u;

    let ket = |mu: usize| -> CMatrix {
        let v = CMatrix::from_column_slice(2, 1, u.column(mu).as_slice());
        // |mu> (x) |M(mu)>, with the meter recording mu in the same basis
        v.kronecker(&v)
    };
    let kets = [ket(0), ket(1)];
    let mut joint = CMatrix::zeros(4, 4);
    for mu in 0..2 {
        for nu in 0..2 {
            joint += &kets[mu] * kets[nu].adjoint() * coeffs[(mu, nu)];
        }
    }
    joint = (&joint + joint.adjoint()) * c(0.5, 0.0);
    let joint = DensityMatrix::new(joint)?;
    Ok(Broadcast {
        reduced_object: joint.trace_out_second()?,
        reduced_meter: joint.trace_out_first()?,
        joint,
    })
}
