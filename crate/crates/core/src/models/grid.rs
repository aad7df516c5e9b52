//! Finite set of measurement directions standing in for the continuum of axes.
//!
//! The grid holds exactly `M` points, closed under antipodes, always containing
//! the six coordinate half-axes plus any registered device directions. The rest
//! are filled from a Fibonacci lattice on the upper hemisphere and mirrored.
//! Every point carries weight `1 / M`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::Direction;

pub const DEFAULT_GRID_SIZE: usize = 362;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionGrid {
    points: Vec<Direction>,
}

impl DirectionGrid {
    pub fn new(size: usize, devices: &[Direction]) -> Result<Self> {
        if !size.is_multiple_of(2) {
            return Err(Error::Grid(format!("grid size {size} must be even to hold antipodal pairs")));
        }
        let mut points: Vec<Direction> = Vec::with_capacity(size);
        let push_pair = |points: &mut Vec<Direction>, d: Direction| {
            if !points.iter().any(|p| p.same_as(&d) || p.same_as(&-d)) {
                points.push(d);
                points.push(-d);
            }
        };
        for d in [Direction::X, Direction::Y, Direction::Z] {
            push_pair(&mut points, d);
        }
        for d in devices {
            d.validate()?;
            push_pair(&mut points, *d);
        }
        if points.len() > size {
            return Err(Error::Grid(format!(
                "grid size {size} cannot hold the {} required directions",
                points.len()
            )));
        }

        let mut lattice = (size - points.len()) / 2;
        loop {
            let mut candidate = points.clone();
            for d in hemisphere_lattice(lattice) {
                if candidate.len() == size {
                    break;
                }
                push_pair(&mut candidate, d);
            }
            if candidate.len() == size {
                return Ok(DirectionGrid { points: candidate });
            }
            lattice += (size - candidate.len()) / 2;
        }
    }

    pub fn with_default_size(devices: &[Direction]) -> Result<Self> {
        Self::new(DEFAULT_GRID_SIZE, devices)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Direction] {
        &self.points
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.points.len() as f64
    }

    pub fn index_of(&self, d: &Direction) -> Option<usize> {
        self.points.iter().position(|p| p.same_as(d))
    }

    pub fn contains(&self, d: &Direction) -> bool {
        self.index_of(d).is_some()
    }

    /// Index of a registered direction, or a grid error.
    pub fn require(&self, d: &Direction) -> Result<usize> {
        self.index_of(d)
            .ok_or_else(|| Error::Grid(format!("direction {d} is not registered on the {}-point grid", self.len())))
    }
}

/// `n` well-spread directions with `z > 0`.
fn hemisphere_lattice(n: usize) -> impl Iterator<Item = Direction> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n).map(move |i| {
        let z = 1.0 - (i as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        Direction { x: r * phi.cos(), y: r * phi.sin(), z }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_exact_size_and_antipodes() {
        let g = DirectionGrid::with_default_size(&[]).unwrap();
        assert_eq!(g.len(), 362);
        for p in g.points() {
            assert!((p.norm_sq() - 1.0).abs() < 1e-12);
            assert!(g.contains(&-*p));
        }
        for axis in [Direction::X, Direction::Y, Direction::Z] {
            assert!(g.contains(&axis) && g.contains(&-axis));
        }
    }

    #[test]
    fn points_are_distinct() {
        let g = DirectionGrid::new(100, &[]).unwrap();
        for (i, a) in g.points().iter().enumerate() {
            for b in &g.points()[i + 1..] {
                assert!(!a.same_as(b));
            }
        }
    }

    #[test]
    fn devices_are_registered() {
        let dev = Direction::normalized(0.3, 0.4, -0.2).unwrap();
        let g = DirectionGrid::new(40, &[dev]).unwrap();
        assert_eq!(g.len(), 40);
        assert!(g.contains(&dev) && g.contains(&-dev));
        assert!(g.require(&Direction::normalized(0.31, 0.4, -0.2).unwrap()).is_err());
    }

    #[test]
    fn bad_sizes() {
        assert!(DirectionGrid::new(41, &[]).is_err());
        assert!(DirectionGrid::new(4, &[]).is_err());
        assert_eq!(DirectionGrid::new(6, &[]).unwrap().len(), 6);
    }
}
