//! O(n) generators for uniform directions on spheres, spherical caps and
//! hollow cones.
//!
//! A cap sample is built around the last canonical axis `e_n` as
//! `sin(theta) * s + cos(theta) * e_n`, with `s` uniform on the sphere of the
//! first `n - 1` coordinates and `theta` drawn from the planar-angle law of
//! the cap, and then carried to the requested axis by the simple rotation in
//! the plane spanned by `e_n` and the axis.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::anglemap::AngleMap;
use crate::direction::{ConeSpec, Direction, HollowConeSpec};
use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// `Method::Auto` uses the inverse transform while `Theta(theta0)` is at
/// least this large.
pub const AUTO_INVERSE_MIN_FRACTION: f64 = 1e-280;

/// Upper bound on proposals in the one-dimensional rejection loop.
pub const REJECTION_MAX_PROPOSALS: u64 = 1_000_000_000;

/// How the planar angle of a cap sample is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Inverse,
    Rejection,
    #[default]
    Auto,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Inverse => "inverse",
            Method::Rejection => "rejection",
            Method::Auto => "auto",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inverse" => Ok(Method::Inverse),
            "rejection" => Ok(Method::Rejection),
            "auto" => Ok(Method::Auto),
            other => Err(Error::domain(format!("unknown method {other:?}"))),
        }
    }
}

/// Fills `out` with a uniform point on the unit sphere of `out.len()`
/// dimensions: independent standard normals scaled to unit length.
pub fn fill_sphere_point(out: &mut [f64], rng: &mut RandomStream) {
    loop {
        let mut sum = 0.0;
        for v in out.iter_mut() {
            let z = rng.normal();
            *v = z;
            sum += z * z;
        }
        if sum > 0.0 {
            let inv = 1.0 / sum.sqrt();
            out.iter_mut().for_each(|v| *v *= inv);
            return;
        }
    }
}

/// Uniform direction on the unit sphere in `R^n`. For `n = 1` this is `+1` or
/// `-1` with equal probability.
pub fn sphere_point(n: usize, rng: &mut RandomStream) -> Result<Direction> {
    if n < 1 {
        return Err(Error::domain("sphere_point requires n >= 1"));
    }
    let mut v = vec![0.0; n];
    fill_sphere_point(&mut v, rng);
    if n == 1 {
        v[0] = v[0].signum();
    }
    Ok(Direction::from_unit_unchecked(v))
}

#[derive(Debug, Clone, Copy)]
enum AngleDraw {
    Fixed(f64),
    Inverse { omega0: f64 },
    Rejection { peak: f64 },
}

/// Draws planar angles in `[0, theta0]` with density proportional to
/// `sin^(n-2)(theta)`, the angle law of a uniform point on the cap.
#[derive(Debug, Clone, Copy)]
pub struct PlanarAngleSampler {
    map: AngleMap,
    theta0: f64,
    draw: AngleDraw,
}

impl PlanarAngleSampler {
    pub fn new(theta0: f64, n: usize, method: Method) -> Result<Self> {
        let map = AngleMap::new(n)?;
        if !(0.0..=std::f64::consts::PI).contains(&theta0) {
            return Err(Error::domain(format!(
                "theta0 must lie in [0, pi], got {theta0}"
            )));
        }
        let draw = if theta0 == 0.0 {
            AngleDraw::Fixed(0.0)
        } else {
            match method {
                Method::Inverse => Self::inverse_draw(&map, theta0)?,
                Method::Rejection => Self::rejection_draw(n, theta0),
                Method::Auto => {
                    if map.ln_theta_to_fraction(theta0)? >= AUTO_INVERSE_MIN_FRACTION.ln() {
                        Self::inverse_draw(&map, theta0)?
                    } else {
                        Self::rejection_draw(n, theta0)
                    }
                }
            }
        };
        Ok(PlanarAngleSampler { map, theta0, draw })
    }

    fn inverse_draw(map: &AngleMap, theta0: f64) -> Result<AngleDraw> {
        let omega0 = map.theta_to_fraction(theta0)?;
        if omega0 < f64::MIN_POSITIVE {
            return Err(Error::Underflow(format!(
                "solid angle fraction of the cap (n={}, theta0={theta0}) underflows; \
                 use the rejection method",
                map.dimension()
            )));
        }
        Ok(AngleDraw::Inverse { omega0 })
    }

    fn rejection_draw(n: usize, theta0: f64) -> AngleDraw {
        AngleDraw::Rejection {
            peak: (n as f64 - 2.0) * theta0.min(FRAC_PI_2).sin().ln(),
        }
    }

    /// The method actually in use once `Auto` is resolved.
    pub fn resolved_method(&self) -> Method {
        match self.draw {
            AngleDraw::Inverse { .. } => Method::Inverse,
            AngleDraw::Rejection { .. } | AngleDraw::Fixed(_) => Method::Rejection,
        }
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn sample(&self, rng: &mut RandomStream) -> Result<f64> {
        self.sample_counted(rng).map(|(theta, _)| theta)
    }

    /// Also returns the number of proposals consumed (1 for the inverse
    /// transform).
    pub fn sample_counted(&self, rng: &mut RandomStream) -> Result<(f64, u64)> {
        match self.draw {
            AngleDraw::Fixed(theta) => Ok((theta, 1)),
            AngleDraw::Inverse { omega0 } => {
                let theta = self.map.fraction_to_theta(rng.uniform() * omega0)?;
                Ok((theta.min(self.theta0), 1))
            }
            AngleDraw::Rejection { peak } => self.reject(peak, rng),
        }
    }

    fn reject(&self, peak: f64, rng: &mut RandomStream) -> Result<(f64, u64)> {
        let exponent = self.map.dimension() as f64 - 2.0;
        for proposals in 1..=REJECTION_MAX_PROPOSALS {
            let u = rng.uniform();
            let theta = self.theta0 * rng.uniform();
            if exponent == 0.0 {
                return Ok((theta, proposals));
            }
            if peak + u.ln() < exponent * theta.sin().ln() {
                return Ok((theta, proposals));
            }
        }
        Err(Error::numeric(format!(
            "planar angle rejection exceeded {REJECTION_MAX_PROPOSALS} proposals"
        )))
    }
}

/// One planar angle by inverse transform sampling.
pub fn planar_angle_inverse(theta0: f64, n: usize, rng: &mut RandomStream) -> Result<f64> {
    PlanarAngleSampler::new(theta0, n, Method::Inverse)?.sample(rng)
}

/// One planar angle by log-domain one-dimensional rejection sampling.
pub fn planar_angle_rejection(theta0: f64, n: usize, rng: &mut RandomStream) -> Result<f64> {
    PlanarAngleSampler::new(theta0, n, Method::Rejection)?.sample(rng)
}

/// The simple rotation taking `e_n` to a unit axis `mu` within the plane
/// spanned by the two, applied in O(n).
#[derive(Debug, Clone)]
pub struct AxisRotation {
    kind: RotationKind,
}

#[derive(Debug, Clone)]
enum RotationKind {
    Identity,
    /// `mu = -e_n`: negate the last coordinate.
    Flip,
    /// `P = [e_n, u]`, `G = [[cos, -sin], [sin, cos]]`. `u` holds the first
    /// `n - 1` coordinates of the unit vector along `mu - mu_n e_n`.
    Simple {
        cos: f64,
        sin: f64,
        u: Vec<f64>,
    },
}

impl AxisRotation {
    pub fn new(mu: &Direction) -> Self {
        let m = mu.as_slice();
        let n = m.len();
        let cos = m[n - 1];
        let perp = &m[..n - 1];
        let scale = perp.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if scale == 0.0 {
            let kind = if cos > 0.0 {
                RotationKind::Identity
            } else {
                RotationKind::Flip
            };
            return AxisRotation { kind };
        }
        let sin = scale * perp.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt();
        let u = perp.iter().map(|v| v / sin).collect();
        AxisRotation {
            kind: RotationKind::Simple { cos, sin, u },
        }
    }

    /// Rotates `x` in place: `x + P (G - I) P^T x`.
    pub fn apply(&self, x: &mut [f64]) {
        let n = x.len();
        match &self.kind {
            RotationKind::Identity => {}
            RotationKind::Flip => x[n - 1] = -x[n - 1],
            RotationKind::Simple { cos, sin, u } => {
                let p1 = x[n - 1];
                let p2: f64 = u.iter().zip(&x[..n - 1]).map(|(a, b)| a * b).sum();
                let q1 = (cos - 1.0) * p1 - sin * p2;
                let q2 = sin * p1 + (cos - 1.0) * p2;
                x[n - 1] += q1;
                for (xi, ui) in x[..n - 1].iter_mut().zip(u) {
                    *xi += ui * q2;
                }
            }
        }
    }
}

/// Rotates `x` from around the last canonical axis to around `mu`.
pub fn rotate_from_nth_axis(x: &[f64], mu: &Direction) -> Result<Vec<f64>> {
    if x.len() != mu.dim() {
        return Err(Error::domain(format!(
            "vector has {} coordinates but axis has {}",
            x.len(),
            mu.dim()
        )));
    }
    let mut y = x.to_vec();
    AxisRotation::new(mu).apply(&mut y);
    Ok(y)
}

fn assemble(theta: f64, n: usize, rotation: &AxisRotation, rng: &mut RandomStream) -> Direction {
    let mut x = vec![0.0; n];
    fill_sphere_point(&mut x[..n - 1], rng);
    let (s, c) = theta.sin_cos();
    x[..n - 1].iter_mut().for_each(|v| *v *= s);
    x[n - 1] = c;
    rotation.apply(&mut x);
    Direction::from_unit_unchecked(x)
}

/// Uniform directions on a spherical cap.
#[derive(Debug, Clone)]
pub struct CapSampler {
    spec: ConeSpec,
    angle: PlanarAngleSampler,
    rotation: AxisRotation,
}

impl CapSampler {
    pub fn new(spec: ConeSpec, method: Method) -> Result<Self> {
        let angle = PlanarAngleSampler::new(spec.theta0(), spec.dim(), method)?;
        let rotation = AxisRotation::new(spec.axis());
        Ok(CapSampler {
            spec,
            angle,
            rotation,
        })
    }

    pub fn spec(&self) -> &ConeSpec {
        &self.spec
    }

    pub fn angle_sampler(&self) -> &PlanarAngleSampler {
        &self.angle
    }

    pub fn sample(&self, rng: &mut RandomStream) -> Result<Direction> {
        if self.spec.theta0() == 0.0 {
            return Ok(self.spec.axis().clone());
        }
        let theta = self.angle.sample(rng)?;
        Ok(assemble(theta, self.spec.dim(), &self.rotation, rng))
    }

    pub fn sample_many(&self, count: usize, rng: &mut RandomStream) -> Result<Vec<Direction>> {
        (0..count).map(|_| self.sample(rng)).collect()
    }
}

/// One uniform direction on the cap described by `spec`.
pub fn cap_point(spec: &ConeSpec, method: Method, rng: &mut RandomStream) -> Result<Direction> {
    CapSampler::new(spec.clone(), method)?.sample(rng)
}

#[derive(Debug, Clone, Copy)]
enum BandDraw {
    Fixed(f64),
    Inverse { omega1: f64, width: f64 },
}

/// Uniform directions on the band `theta1 <= angle <= theta2` about an axis.
#[derive(Debug, Clone)]
pub struct HollowConeSampler {
    spec: HollowConeSpec,
    map: AngleMap,
    draw: BandDraw,
    rotation: AxisRotation,
}

impl HollowConeSampler {
    pub fn new(spec: HollowConeSpec) -> Result<Self> {
        let map = AngleMap::new(spec.dim())?;
        let draw = if spec.theta1() == spec.theta2() {
            BandDraw::Fixed(spec.theta1())
        } else {
            let omega1 = map.theta_to_fraction(spec.theta1())?;
            let omega2 = map.theta_to_fraction(spec.theta2())?;
            let width = omega2 - omega1;
            if !(width >= f64::MIN_POSITIVE) {
                return Err(Error::Underflow(format!(
                    "solid angle fraction of the band (n={}, theta1={}, theta2={}) underflows",
                    spec.dim(),
                    spec.theta1(),
                    spec.theta2()
                )));
            }
            BandDraw::Inverse { omega1, width }
        };
        let rotation = AxisRotation::new(spec.axis());
        Ok(HollowConeSampler {
            spec,
            map,
            draw,
            rotation,
        })
    }

    pub fn spec(&self) -> &HollowConeSpec {
        &self.spec
    }

    pub fn sample_angle(&self, rng: &mut RandomStream) -> Result<f64> {
        match self.draw {
            BandDraw::Fixed(theta) => Ok(theta),
            BandDraw::Inverse { omega1, width } => {
                let omega = (rng.uniform() * width + omega1).min(1.0);
                let theta = self.map.fraction_to_theta(omega)?;
                Ok(theta.clamp(self.spec.theta1(), self.spec.theta2()))
            }
        }
    }

    pub fn sample(&self, rng: &mut RandomStream) -> Result<Direction> {
        let theta = self.sample_angle(rng)?;
        Ok(assemble(theta, self.spec.dim(), &self.rotation, rng))
    }

    pub fn sample_many(&self, count: usize, rng: &mut RandomStream) -> Result<Vec<Direction>> {
        (0..count).map(|_| self.sample(rng)).collect()
    }
}

/// One uniform direction on the band described by `spec`.
pub fn hollow_cone_point(spec: &HollowConeSpec, rng: &mut RandomStream) -> Result<Direction> {
    HollowConeSampler::new(spec.clone())?.sample(rng)
}
