//! Bell's single-variable model of a spin-1/2.
//!
//! A hidden `lambda`, uniform on `[-1/2, 1/2]`, fixes every outcome:
//! with `c = s (beta . a)` for anchor axis `a` and anchor sign `s`,
//!
//! ```text
//! c != 0:  sign(lambda + |c|/2) * sign(c)
//! c == 0:  sign(lambda) * sign(X')
//! ```
//!
//! where `X'` is the first nonzero of `beta . e2`, `beta . e3` in the frame
//! completing the anchor. For an `x` anchor the frame is `(y, z)`; for a `z`
//! anchor it is `(x, y)`. The mean outcome is exactly `c`, the Born value.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::RepeatRule;
use crate::qcore::{Direction, Outcome};

const ZERO_TOL: f64 = 1e-12;

fn sign(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellLambdaState {
    pub lambda: f64,
    pub anchor: Direction,
    pub anchor_sign: i8,
}

impl BellLambdaState {
    pub fn new(lambda: f64, anchor: Direction, anchor_sign: i8) -> Result<Self> {
        if !(-0.5..=0.5).contains(&lambda) {
            return Err(Error::InvalidInput(format!("lambda {lambda} outside [-1/2, 1/2]")));
        }
        anchor.validate()?;
        if anchor_sign != 1 && anchor_sign != -1 {
            return Err(Error::InvalidInput(format!("anchor sign {anchor_sign} must be +1 or -1")));
        }
        Ok(BellLambdaState { lambda, anchor, anchor_sign })
    }

    /// Draws `lambda` uniformly for a spin prepared up along `axis`.
    pub fn prepare<R: Rng + ?Sized>(axis: Direction, rng: &mut R) -> Self {
        BellLambdaState { lambda: draw_lambda(rng), anchor: axis, anchor_sign: 1 }
    }

    pub fn outcome(&self, beta: &Direction) -> i8 {
        bell_outcome(self.lambda, beta, &self.anchor, self.anchor_sign)
    }
}

pub fn draw_lambda<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(-0.5..=0.5)
}

/// Outcome `+1` / `-1` of measuring `sigma . beta` for a given `lambda`.
pub fn bell_outcome(lambda: f64, beta: &Direction, anchor: &Direction, anchor_sign: i8) -> i8 {
    let c = f64::from(anchor_sign) * beta.dot(anchor);
    if c.abs() > ZERO_TOL {
        sign(lambda + 0.5 * c.abs()) * sign(c)
    } else {
        sign(lambda) * tie_axis_sign(beta, anchor)
    }
}

fn tie_axis_sign(beta: &Direction, anchor: &Direction) -> i8 {
    let (e2, e3) = anchor.frame();
    let first = [beta.dot(&e2), beta.dot(&e3)].into_iter().find(|v| v.abs() > ZERO_TOL).unwrap_or(1.0);
    sign(first)
}

/// The set of `lambda` giving `+1`, as an interval `[lo, hi]`.
pub fn up_interval(beta: &Direction, anchor: &Direction, anchor_sign: i8) -> (f64, f64) {
    let c = f64::from(anchor_sign) * beta.dot(anchor);
    let (threshold, positive) = if c.abs() > ZERO_TOL {
        (-0.5 * c.abs(), c > 0.0)
    } else {
        (0.0, tie_axis_sign(beta, anchor) > 0)
    };
    if positive {
        (threshold, 0.5)
    } else {
        (-0.5, threshold)
    }
}

/// State after a recorded outcome.
///
/// Strict keeps `lambda` and the anchor. Adapted redraws `lambda` and
/// re-anchors on the measured axis with the recorded sign.
pub fn bell_post<R: Rng + ?Sized>(
    state: &BellLambdaState,
    device: &Direction,
    out: i8,
    rule: RepeatRule,
    rng: &mut R,
) -> Result<BellLambdaState> {
    if out != 1 && out != -1 {
        return Err(Error::InvalidInput(format!("outcome {out} must be +1 or -1")));
    }
    Ok(match rule {
        RepeatRule::Strict => *state,
        RepeatRule::Adapted => BellLambdaState { lambda: draw_lambda(rng), anchor: *device, anchor_sign: out },
    })
}

/// Uniform `lambda` on a sub-interval of `[-1/2, 1/2]`; the exact-mode
/// counterpart of [`BellLambdaState`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellEnsemble {
    pub lo: f64,
    pub hi: f64,
    pub anchor: Direction,
    pub anchor_sign: i8,
}

impl BellEnsemble {
    pub fn prepare(axis: Direction) -> Self {
        BellEnsemble { lo: -0.5, hi: 0.5, anchor: axis, anchor_sign: 1 }
    }

    /// `(probability, outcome, post-state)` for both outcomes with positive mass.
    pub fn branches(&self, device: &Direction, rule: RepeatRule) -> Vec<(f64, Outcome, BellEnsemble)> {
        let width = self.hi - self.lo;
        let (a, b) = up_interval(device, &self.anchor, self.anchor_sign);
        let up = (a.max(self.lo), b.min(self.hi));
        let up_len = (up.1 - up.0).max(0.0);
        // the complement of [a, b] inside [-1/2, 1/2] is a single interval
        let down = if a <= -0.5 { (b.max(self.lo), self.hi) } else { (self.lo, a.min(self.hi)) };
        let down_len = (down.1 - down.0).max(0.0);
        let mut out = Vec::with_capacity(2);
        for (len, range, outcome, s) in [(up_len, up, Outcome::Up, 1i8), (down_len, down, Outcome::Down, -1i8)] {
            if len <= 0.0 {
                continue;
            }
            let post = match rule {
                RepeatRule::Strict => BellEnsemble { lo: range.0, hi: range.1, ..*self },
                RepeatRule::Adapted => BellEnsemble { lo: -0.5, hi: 0.5, anchor: *device, anchor_sign: s },
            };
            out.push((len / width, outcome, post));
        }
        out
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BellLambdaState {
        let lambda = if self.hi > self.lo { rng.gen_range(self.lo..=self.hi) } else { self.lo };
        BellLambdaState { lambda, anchor: self.anchor, anchor_sign: self.anchor_sign }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lambda_grid(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| -0.5 + (i as f64 + 0.5) / n as f64)
    }

    /// Brute-force mean outcome over a fine lambda grid.
    fn mean_outcome(beta: &Direction, anchor: &Direction, s: i8) -> f64 {
        let n = 200_000;
        lambda_grid(n).map(|l| f64::from(bell_outcome(l, beta, anchor, s))).sum::<f64>() / n as f64
    }

    #[test]
    fn x_anchor_examples() {
        let x = Direction::X;
        assert!(lambda_grid(1000).all(|l| bell_outcome(l, &x, &x, 1) == 1));
        assert!(lambda_grid(1000).all(|l| bell_outcome(l, &-x, &x, 1) == -1));
        for l in lambda_grid(1000) {
            assert_eq!(bell_outcome(l, &Direction::Z, &x, 1), sign(l));
        }
        assert!(mean_outcome(&Direction::Z, &x, 1).abs() < 1e-9);
    }

    #[test]
    fn mean_outcome_is_the_born_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let beta = Direction::random(&mut rng);
            let anchor = Direction::random(&mut rng);
            for s in [1i8, -1] {
                let expected = f64::from(s) * beta.dot(&anchor);
                // grid resolution 1/200000 bounds the error
                assert!((mean_outcome(&beta, &anchor, s) - expected).abs() < 2e-5);
            }
        }
    }

    #[test]
    fn strict_keeps_lambda_after_z_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let st = BellLambdaState::prepare(Direction::X, &mut rng);
            let first = st.outcome(&Direction::Z);
            if first != 1 {
                continue;
            }
            let post = bell_post(&st, &Direction::Z, first, RepeatRule::Strict, &mut rng).unwrap();
            assert_eq!(post.outcome(&Direction::X), 1);
            assert_eq!(post.outcome(&Direction::Z), 1);
        }
    }

    #[test]
    fn adapted_re_anchors() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut ups = 0;
        let n = 20_000;
        for _ in 0..n {
            let st = BellLambdaState { lambda: 0.3, anchor: Direction::X, anchor_sign: 1 };
            let post = bell_post(&st, &Direction::Z, 1, RepeatRule::Adapted, &mut rng).unwrap();
            assert_eq!(post.outcome(&Direction::Z), 1);
            assert_eq!(post.anchor_sign, 1);
            if post.outcome(&Direction::X) == 1 {
                ups += 1;
            }
        }
        let f = f64::from(ups) / f64::from(n);
        assert!((f - 0.5).abs() < 4.0 * (0.25 / f64::from(n)).sqrt());
    }

    #[test]
    fn invalid_inputs() {
        assert!(BellLambdaState::new(0.7, Direction::X, 1).is_err());
        assert!(BellLambdaState::new(0.1, Direction::X, 0).is_err());
        let st = BellLambdaState::new(0.1, Direction::X, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(bell_post(&st, &Direction::Z, 0, RepeatRule::Strict, &mut rng).is_err());
    }

    #[test]
    fn ensemble_branches_match_intervals() {
        let e = BellEnsemble::prepare(Direction::X);
        let b = e.branches(&Direction::Z, RepeatRule::Strict);
        assert_eq!(b.len(), 2);
        assert!((b[0].0 - 0.5).abs() < 1e-15 && (b[1].0 - 0.5).abs() < 1e-15);
        // after z-up with lambda retained, x gives +1 surely
        let after = b[0].2.branches(&Direction::X, RepeatRule::Strict);
        assert_eq!(after.len(), 1);
        assert_eq!(after[0].1, Outcome::Up);
        let d = Direction::normalized(0.5, 0.2, -0.7).unwrap();
        let p_up: f64 = e.branches(&d, RepeatRule::Strict).iter().filter(|b| b.1 == Outcome::Up).map(|b| b.0).sum();
        assert!((p_up - 0.5 * (1.0 + d.x)).abs() < 1e-12);
    }
}
