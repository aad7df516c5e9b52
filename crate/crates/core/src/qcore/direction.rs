use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Neg;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|r|^2 - 1` for a direction to count as unit.
pub const UNIT_TOL: f64 = 1e-12;

/// Two directions are the same axis when `|d1 . d2 - 1| < SAME_DIRECTION_TOL`.
pub const SAME_DIRECTION_TOL: f64 = 1e-9;

/// A measurement axis on the Bloch sphere.
///
/// Fields are public so that values read from files or the command line can be
/// represented before validation; every operation that needs a unit vector
/// calls [`Direction::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Direction {
    pub const X: Direction = Direction { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Direction = Direction { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Direction = Direction { x: 0.0, y: 0.0, z: 1.0 };

    /// Checked constructor; fails unless `x^2 + y^2 + z^2 = 1` within 1e-12.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let d = Direction { x, y, z };
        d.validate()?;
        Ok(d)
    }

    /// Rescales an arbitrary nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidDirection { x, y, z, norm_sq: n * n });
        }
        Ok(Direction { x: x / n, y: y / n, z: z / n })
    }

    /// Spherical coordinates: `(sin t cos p, sin t sin p, cos t)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let theta = theta.rem_euclid(TAU);
        let phi = phi.rem_euclid(TAU);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Direction { x: st * cp, y: st * sp, z: ct }
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Self {
        Self::from_angles(theta_deg.to_radians(), phi_deg.to_radians())
    }

    /// Uniformly distributed on the sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        Direction { x: r * phi.cos(), y: r * phi.sin(), z }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn validate(&self) -> Result<()> {
        let norm_sq = self.norm_sq();
        if norm_sq.is_finite() && (norm_sq - 1.0).abs() <= UNIT_TOL {
            Ok(())
        } else {
            Err(Error::InvalidDirection { x: self.x, y: self.y, z: self.z, norm_sq })
        }
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Direction) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Same axis and same orientation, up to [`SAME_DIRECTION_TOL`].
    pub fn same_as(&self, other: &Direction) -> bool {
        (self.dot(other) - 1.0).abs() < SAME_DIRECTION_TOL
    }

    /// Polar angle in `[0, pi]`.
    pub fn theta(&self) -> f64 {
        self.z.clamp(-1.0, 1.0).acos()
    }

    /// Azimuth in `[0, 2 pi)`.
    pub fn phi(&self) -> f64 {
        if self.x == 0.0 && self.y == 0.0 {
            0.0
        } else {
            self.y.atan2(self.x).rem_euclid(TAU)
        }
    }

    /// Completes `self` to a right-handed orthonormal frame `(self, e2, e3)`.
    ///
    /// The helper axis is the coordinate axis cyclically after the dominant
    /// component, so `x -> (y, z)`, `y -> (z, x)` and `z -> (x, y)`.
    pub fn frame(&self) -> (Direction, Direction) {
        let c = self.components();
        let dominant = (0..3)
            .max_by(|&a, &b| c[a].abs().total_cmp(&c[b].abs()))
            .unwrap_or(2);
        let mut helper = [0.0; 3];
        helper[(dominant + 1) % 3] = 1.0;
        let h = Direction { x: helper[0], y: helper[1], z: helper[2] };
        let p = self.dot(&h);
        let e2 = Direction::normalized(h.x - p * self.x, h.y - p * self.y, h.z - p * self.z)
            .expect("helper axis is never parallel to the dominant component");
        let [x, y, z] = self.cross(&e2);
        (e2, Direction { x, y, z })
    }
}

impl Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        Direction { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(theta={:.4}deg, phi={:.4}deg)",
            self.theta() * 180.0 / PI,
            self.phi() * 180.0 / PI
        )
    }
}

/// A point of the closed Bloch ball; mixed single-spin states have `|b| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ZERO: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let b = BlochVector { x, y, z };
        if b.norm_sq().is_finite() && b.norm_sq() <= 1.0 + UNIT_TOL {
            Ok(b)
        } else {
            Err(Error::InvalidState(format!("Bloch vector ({x}, {y}, {z}) lies outside the unit ball")))
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn dot(&self, d: &Direction) -> f64 {
        self.x * d.x + self.y * d.y + self.z * d.z
    }

    pub fn scaled(&self, s: f64) -> BlochVector {
        BlochVector { x: s * self.x, y: s * self.y, z: s * self.z }
    }

    /// `P(up along r) = (1 + r . b) / 2`, clamped against rounding.
    pub fn up_probability(&self, r: &Direction) -> f64 {
        (0.5 * (1.0 + self.dot(r))).clamp(0.0, 1.0)
    }

    /// Convex combination of Bloch vectors.
    pub fn average<'a, I>(items: I) -> BlochVector
    where
        I: IntoIterator<Item = (f64, &'a BlochVector)>,
    {
        items.into_iter().fold(BlochVector::ZERO, |acc, (w, b)| BlochVector {
            x: acc.x + w * b.x,
            y: acc.y + w * b.y,
            z: acc.z + w * b.z,
        })
    }
}

impl From<Direction> for BlochVector {
    fn from(d: Direction) -> Self {
        BlochVector { x: d.x, y: d.y, z: d.z }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Direction, b: [f64; 3]) -> bool {
        (a.x - b[0]).abs() < 1e-12 && (a.y - b[1]).abs() < 1e-12 && (a.z - b[2]).abs() < 1e-12
    }

    #[test]
    fn angles_map_to_components() {
        assert!(close(&Direction::from_angles(0.0, 0.0), [0.0, 0.0, 1.0]));
        assert!(close(&Direction::from_angles(PI / 2.0, 0.0), [1.0, 0.0, 0.0]));
        let r1 = Direction::from_angles(2.0 * PI / 3.0, PI / 2.0);
        assert!(close(&r1, [0.0, 3f64.sqrt() / 2.0, -0.5]));
        // angles are taken mod 2 pi
        assert!(close(&Direction::from_angles(PI / 2.0 + TAU, -TAU), [1.0, 0.0, 0.0]));
    }

    #[test]
    fn non_unit_is_rejected() {
        assert!(matches!(Direction::new(1.0, 1.0, 0.0), Err(Error::InvalidDirection { .. })));
        assert!(Direction::new(0.6, 0.8, 0.0).is_ok());
        assert!(Direction::normalized(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn frame_is_orthonormal_and_cyclic_on_axes() {
        let (e2, e3) = Direction::X.frame();
        assert!(e2.same_as(&Direction::Y) && e3.same_as(&Direction::Z));
        let (e2, e3) = Direction::Z.frame();
        assert!(e2.same_as(&Direction::X) && e3.same_as(&Direction::Y));
        let d = Direction::normalized(0.3, -0.5, 0.8).unwrap();
        let (e2, e3) = d.frame();
        assert!(d.dot(&e2).abs() < 1e-12 && d.dot(&e3).abs() < 1e-12 && e2.dot(&e3).abs() < 1e-12);
        assert!((e3.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spherical_round_trip() {
        let d = Direction::from_angles(1.1, 4.0);
        let back = Direction::from_angles(d.theta(), d.phi());
        assert!(d.same_as(&back));
    }
}
