//! Unit vectors and the regions they are sampled from.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::anglemap::AngleMap;
use crate::error::{Error, Result};

/// Axis inputs within this distance of unit norm are renormalized silently.
pub const AXIS_NORM_TOLERANCE: f64 = 1e-6;

/// A unit vector in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Validates and renormalizes `coords`. Inputs whose norm is off by more
    /// than [`AXIS_NORM_TOLERANCE`] are rejected.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("direction must have at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("direction has non-finite coordinates"));
        }
        let norm = norm(&coords);
        if (norm - 1.0).abs() > AXIS_NORM_TOLERANCE {
            return Err(Error::domain(format!(
                "direction norm {norm} is not within {AXIS_NORM_TOLERANCE} of 1"
            )));
        }
        Ok(Direction(coords.into_iter().map(|c| c / norm).collect()))
    }

    /// Normalizes any nonzero finite vector.
    pub fn normalize(coords: Vec<f64>) -> Result<Self> {
        let norm = norm(&coords);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Ok(Direction(coords.into_iter().map(|c| c / norm).collect()))
    }

    /// The `index`-th canonical basis vector of `R^n` (zero-based).
    pub fn canonical(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::domain(format!(
                "canonical index {index} out of range for dimension {n}"
            )));
        }
        let mut v = vec![0.0; n];
        v[index] = 1.0;
        Ok(Direction(v))
    }

    pub(crate) fn from_unit_unchecked(coords: Vec<f64>) -> Self {
        Direction(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    /// Planar angle to `axis`, computed from both the projection and the
    /// orthogonal residual so it stays accurate near 0 and pi.
    pub fn angle_to(&self, axis: &Direction) -> f64 {
        planar_angle(&self.0, &axis.0)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Angle between unit vectors `x` and `mu` via `atan2(|x - (x.mu) mu|, x.mu)`.
pub fn planar_angle(x: &[f64], mu: &[f64]) -> f64 {
    let c = dot(x, mu);
    let perp2: f64 = x
        .iter()
        .zip(mu)
        .map(|(xi, mi)| {
            let r = xi - c * mi;
            r * r
        })
        .sum();
    perp2.sqrt().atan2(c)
}

fn check_angle(name: &str, theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain(format!(
            "{name} must lie in [0, pi], got {theta}"
        )));
    }
    Ok(())
}

/// A spherical cap: all unit vectors within `theta0` of `axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    axis: Direction,
    theta0: f64,
}

impl ConeSpec {
    pub fn new(axis: Direction, theta0: f64) -> Result<Self> {
        if axis.dim() < 2 {
            return Err(Error::domain("cone axis needs at least two dimensions"));
        }
        check_angle("theta0", theta0)?;
        Ok(ConeSpec { axis, theta0 })
    }

    pub fn axis(&self) -> &Direction {
        &self.axis
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn dim(&self) -> usize {
        self.axis.dim()
    }
}

/// The band between two coaxial caps, `theta1 <= angle <= theta2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HollowConeSpec {
    axis: Direction,
    theta1: f64,
    theta2: f64,
}

impl HollowConeSpec {
    pub fn new(axis: Direction, theta1: f64, theta2: f64) -> Result<Self> {
        if axis.dim() < 2 {
            return Err(Error::domain("cone axis needs at least two dimensions"));
        }
        check_angle("theta1", theta1)?;
        check_angle("theta2", theta2)?;
        if theta1 > theta2 {
            return Err(Error::domain(format!(
                "hollow cone needs theta1 <= theta2, got {theta1} > {theta2}"
            )));
        }
        Ok(HollowConeSpec {
            axis,
            theta1,
            theta2,
        })
    }

    /// Band bounded by the caps covering solid angle fractions `omega1` and
    /// `omega2` of the sphere.
    pub fn from_fractions(axis: Direction, omega1: f64, omega2: f64) -> Result<Self> {
        if omega1 > omega2 {
            return Err(Error::domain(format!(
                "hollow cone needs omega1 <= omega2, got {omega1} > {omega2}"
            )));
        }
        let map = AngleMap::new(axis.dim())?;
        let theta1 = map.fraction_to_theta(omega1)?;
        let theta2 = map.fraction_to_theta(omega2)?;
        Self::new(axis, theta1, theta2.max(theta1))
    }

    pub fn axis(&self) -> &Direction {
        &self.axis
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn dim(&self) -> usize {
        self.axis.dim()
    }
}
