use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{mixture, up_projector, BlochVector, DensityMatrix, Direction};

/// The two indistinguishable single-spin preparations and their common
/// product-form representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixtureId {
    /// Up along `+z` with probability 1/4, down along `z` with probability 3/4.
    I,
    /// Up along `(0, -sqrt3/2, -1/2)` or `(0, sqrt3/2, -1/2)`, each with probability 1/2.
    II,
    /// A single factor with Bloch vector `(0, 0, -1/2)` on every axis.
    III,
}

impl FromStr for MixtureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(MixtureId::I),
            "II" | "2" => Ok(MixtureId::II),
            "III" | "3" => Ok(MixtureId::III),
            other => Err(Error::InvalidInput(format!("unknown mixture id {other:?}"))),
        }
    }
}

impl fmt::Display for MixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MixtureId::I => "I",
            MixtureId::II => "II",
            MixtureId::III => "III",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Preparation {
    /// Pure state: up along the given axis.
    Up(Direction),
    Mixture(MixtureId),
}

impl Default for Preparation {
    fn default() -> Self {
        Preparation::Up(Direction::X)
    }
}

fn tilted(sign: f64) -> Direction {
    Direction { x: 0.0, y: sign * 3f64.sqrt() / 2.0, z: -0.5 }
}

impl Preparation {
    pub fn validate(&self) -> Result<()> {
        match self {
            Preparation::Up(d) => d.validate(),
            Preparation::Mixture(_) => Ok(()),
        }
    }

    /// Weighted product-state factors, each given by its Bloch vector.
    pub fn components(&self) -> Vec<(f64, BlochVector)> {
        match self {
            Preparation::Up(d) => vec![(1.0, (*d).into())],
            Preparation::Mixture(MixtureId::I) => {
                vec![(0.25, Direction::Z.into()), (0.75, (-Direction::Z).into())]
            }
            Preparation::Mixture(MixtureId::II) => vec![(0.5, tilted(-1.0).into()), (0.5, tilted(1.0).into())],
            Preparation::Mixture(MixtureId::III) => vec![(1.0, BlochVector { x: 0.0, y: 0.0, z: -0.5 })],
        }
    }

    /// Decomposition into pure preparations; mixed factors are split spectrally.
    pub fn pure_ensemble(&self) -> Vec<(f64, Direction)> {
        let mut out = Vec::new();
        for (w, b) in self.components() {
            let n = b.norm_sq().sqrt();
            if (n - 1.0).abs() <= 1e-12 {
                out.push((w, Direction { x: b.x, y: b.y, z: b.z }));
            } else {
                let axis = if n > 0.0 {
                    Direction::normalized(b.x, b.y, b.z).expect("nonzero Bloch vector")
                } else {
                    Direction::Z
                };
                out.push((w * 0.5 * (1.0 + n), axis));
                out.push((w * 0.5 * (1.0 - n), -axis));
            }
        }
        out.retain(|(w, _)| *w > 0.0);
        out
    }

    pub fn bloch(&self) -> BlochVector {
        let comps = self.components();
        BlochVector::average(comps.iter().map(|(w, b)| (*w, b)))
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        let parts = self
            .pure_ensemble()
            .into_iter()
            .map(|(w, d)| Ok((w, up_projector(&d)?)))
            .collect::<Result<Vec<_>>>()?;
        mixture(&parts)
    }
}

impl fmt::Display for Preparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preparation::Up(d) => write!(f, "up{d}"),
            Preparation::Mixture(id) => write!(f, "mixture {id}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_three_mixtures_share_a_density_matrix() {
        let target = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        for id in [MixtureId::I, MixtureId::II, MixtureId::III] {
            let rho = Preparation::Mixture(id).density().unwrap();
            assert!(rho.max_abs_diff(&target) < 1e-12, "{id}");
        }
    }

    #[test]
    fn mixture_ii_directions_match_the_two_tilted_axes() {
        use std::f64::consts::PI;
        let r1 = Direction::from_angles(2.0 * PI / 3.0, PI / 2.0);
        let r2 = Direction::from_angles(2.0 * PI / 3.0, 3.0 * PI / 2.0);
        let ens = Preparation::Mixture(MixtureId::II).pure_ensemble();
        assert!(ens.iter().any(|(_, d)| d.same_as(&r1)));
        assert!(ens.iter().any(|(_, d)| d.same_as(&r2)));
    }

    #[test]
    fn spectral_split_of_iii() {
        let ens = Preparation::Mixture(MixtureId::III).pure_ensemble();
        assert_eq!(ens.len(), 2);
        assert!((ens[0].0 - 0.75).abs() < 1e-15 && ens[0].1.same_as(&-Direction::Z));
        assert!((ens[1].0 - 0.25).abs() < 1e-15 && ens[1].1.same_as(&Direction::Z));
    }
}
