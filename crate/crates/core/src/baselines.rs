//! Re-weighting baselines: directions drawn from a non-uniform law that is
//! easy to sample inside the cone, each carrying an importance weight
//! `1 / f(x)` so that the weighted ECDF targets the uniform cap law.
//!
//! Densities are only known up to a constant and are kept as logs. A batch
//! exponentiates `-ln f` relative to its maximum, so the weights are
//! unnormalized but finite; the weighted ECDF divides by their sum anyway.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::direction::{self, Direction};
use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::sampler::fill_sphere_point;

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Gauss–Legendre order for the radial integral.
pub const RADIAL_NODES: usize = 200;
/// Half-width of the radial window in units of the integrand's local scale.
pub const RADIAL_HALF_WIDTH: f64 = 12.0;

/// A direction and its unnormalized importance weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    pub direction: Direction,
    pub weight: f64,
}

/// A batch of weighted samples plus re-weighting diagnostics.
#[derive(Debug, Clone)]
pub struct WeightedBatch {
    pub samples: Vec<WeightedSample>,
    /// Smallest and largest `ln(1/f)` in the batch. A wide range means few
    /// samples carry almost all the weight.
    pub ln_weight_range: (f64, f64),
}

impl WeightedBatch {
    /// Builds the batch from `(direction, ln f)` pairs.
    pub fn from_ln_densities(items: Vec<(Direction, f64)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::domain("empty weighted batch"));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (_, ln_f) in &items {
            if !ln_f.is_finite() {
                return Err(Error::numeric(format!("non-finite log density {ln_f}")));
            }
            lo = lo.min(-ln_f);
            hi = hi.max(-ln_f);
        }
        let samples = items
            .into_iter()
            .map(|(direction, ln_f)| WeightedSample {
                direction,
                weight: (-ln_f - hi).exp(),
            })
            .collect();
        Ok(WeightedBatch {
            samples,
            ln_weight_range: (lo, hi),
        })
    }

    /// `(theta, weight)` pairs with theta the angle to `axis`.
    pub fn angles(&self, axis: &Direction) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .map(|s| (s.direction.angle_to(axis), s.weight))
            .collect()
    }

    /// Kish effective sample size `(sum w)^2 / sum w^2`.
    pub fn effective_sample_size(&self) -> f64 {
        let s: f64 = self.samples.iter().map(|s| s.weight).sum();
        let s2: f64 = self.samples.iter().map(|s| s.weight * s.weight).sum();
        s * s / s2
    }
}

/// Uniform point in the unit ball: a sphere point scaled by `U^(1/n)`.
fn fill_ball_point(out: &mut [f64], rng: &mut RandomStream) {
    fill_sphere_point(out, rng);
    let r = rng.uniform().powf(1.0 / out.len() as f64);
    out.iter_mut().for_each(|v| *v *= r);
}

/// A ball of radius `|mu| sin(theta0)` centred at `mu`; its normalized
/// points fill exactly the cone of half-angle `theta0` about `mu`.
#[derive(Debug, Clone)]
pub struct ShiftedSphereSpec {
    mu: Vec<f64>,
    mu_norm: f64,
    axis: Direction,
    theta0: f64,
    radius: f64,
}

impl ShiftedSphereSpec {
    pub fn new(mu: Vec<f64>, theta0: f64) -> Result<Self> {
        if mu.len() < 2 {
            return Err(Error::domain("shifted sphere needs n >= 2"));
        }
        let axis = Direction::normalize(mu.clone())?;
        if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
            return Err(Error::domain(format!(
                "shifted sphere needs 0 < theta0 < pi/2, got {theta0}"
            )));
        }
        let mu_norm = direction::norm(&mu);
        Ok(ShiftedSphereSpec {
            radius: mu_norm * theta0.sin(),
            mu,
            mu_norm,
            axis,
            theta0,
        })
    }

    pub fn axis(&self) -> &Direction {
        &self.axis
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// Roots `r1 >= r2` where the ray along `x_hat` crosses the ball's
    /// surface, and whether the discriminant had to be clamped to zero.
    pub fn ray_crossings(&self, x_hat: &[f64]) -> (f64, f64, bool) {
        let c = direction::dot(x_hat, &self.mu);
        let disc = c * c - self.mu_norm * self.mu_norm + self.radius * self.radius;
        let clamped = disc < 0.0;
        let root = disc.max(0.0).sqrt();
        (c + root, c - root, clamped)
    }

    /// `ln (r1^n - r2^n)`, the log density of the normalized direction up to
    /// an additive constant.
    pub fn ln_density(&self, x_hat: &[f64]) -> (f64, bool) {
        let (r1, r2, clamped) = self.ray_crossings(x_hat);
        let n = self.dim() as f64;
        let gap = -(n * (r2 / r1).ln()).exp_m1();
        (n * r1.ln() + gap.max(f64::MIN_POSITIVE).ln(), clamped)
    }
}

/// One shifted-sphere direction with its log density.
#[derive(Debug, Clone)]
pub struct ShiftedSphereDraw {
    pub direction: Direction,
    pub ln_density: f64,
    /// The discriminant of the ray/ball intersection came out negative
    /// (rounding at the cone boundary) and was clamped to zero.
    pub clamped: bool,
}

pub fn shifted_sphere_draw(spec: &ShiftedSphereSpec, rng: &mut RandomStream) -> ShiftedSphereDraw {
    let mut x = vec![0.0; spec.dim()];
    fill_ball_point(&mut x, rng);
    for (xi, mi) in x.iter_mut().zip(&spec.mu) {
        *xi = spec.radius * *xi + mi;
    }
    let direction = Direction::normalize(x).expect("ball excludes the origin");
    let (ln_density, clamped) = spec.ln_density(direction.as_slice());
    ShiftedSphereDraw {
        direction,
        ln_density,
        clamped,
    }
}

/// A batch of shifted-sphere samples with weights and the count of clamped
/// discriminants.
pub fn shifted_sphere_batch(
    spec: &ShiftedSphereSpec,
    count: usize,
    rng: &mut RandomStream,
) -> Result<(WeightedBatch, usize)> {
    let mut clamped = 0;
    let items = (0..count)
        .map(|_| {
            let d = shifted_sphere_draw(spec, rng);
            clamped += d.clamped as usize;
            (d.direction, d.ln_density)
        })
        .collect();
    Ok((WeightedBatch::from_ln_densities(items)?, clamped))
}

/// Isotropic normal `N(mu, sigma^2 I)` whose normalized draws are kept when
/// they fall inside the cap of half-angle `theta0` about `mu`.
#[derive(Debug, Clone)]
pub struct ShiftedNormalSpec {
    mu: Vec<f64>,
    mu_norm: f64,
    axis: Direction,
    sigma: f64,
    theta0: f64,
}

impl ShiftedNormalSpec {
    pub fn new(mu: Vec<f64>, sigma: f64, theta0: f64) -> Result<Self> {
        if mu.len() < 2 {
            return Err(Error::domain("shifted normal needs n >= 2"));
        }
        let axis = Direction::normalize(mu.clone())?;
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        if !(theta0 > 0.0 && theta0 < PI) {
            return Err(Error::domain(format!(
                "shifted normal needs 0 < theta0 < pi, got {theta0}"
            )));
        }
        let mu_norm = direction::norm(&mu);
        Ok(ShiftedNormalSpec {
            mu,
            mu_norm,
            axis,
            sigma,
            theta0,
        })
    }

    pub fn axis(&self) -> &Direction {
        &self.axis
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// Log density of the normalized direction `x_hat`:
    /// `ln phi(d / sigma) - n ln sigma - (n/2 - 1) ln 2pi + ln R(c)`, with
    /// `c = x_hat . mu`, `d^2 = |mu|^2 - c^2` and `R` the radial integral.
    pub fn ln_density(&self, x_hat: &[f64]) -> Result<f64> {
        let n = self.dim();
        let c = direction::dot(x_hat, &self.mu);
        let d2 = (self.mu_norm * self.mu_norm - c * c).max(0.0);
        let s2 = self.sigma * self.sigma;
        let ln_phi = -0.5 * d2 / s2 - 0.5 * LN_2PI;
        Ok(
            ln_phi - n as f64 * self.sigma.ln() - (n as f64 / 2.0 - 1.0) * LN_2PI
                + ln_radial_integral(n, self.sigma, c)?,
        )
    }
}

fn gauss_legendre_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(RADIAL_NODES))
}

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..m {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = m as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[m - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// `ln` of `int_0^inf r^(n-1) phi((r - c) / sigma) dr`.
///
/// The integrand is log-concave with mode `r*` solving
/// `(n-1)/r = (r - c)/sigma^2` and local scale
/// `w = sigma / sqrt(1 + (n-1) sigma^2 / r*^2)`. It is integrated by
/// Gauss–Legendre over `[max(0, r* - 12w), r* + 12w]` in the log domain.
pub fn ln_radial_integral(n: usize, sigma: f64, c: f64) -> Result<f64> {
    let k = n as f64 - 1.0;
    let s2 = sigma * sigma;
    let mode = 0.5 * (c + (c * c + 4.0 * k * s2).sqrt());
    let scale = sigma / (1.0 + k * s2 / (mode * mode)).sqrt();
    let lo = (mode - RADIAL_HALF_WIDTH * scale).max(0.0);
    let hi = mode + RADIAL_HALF_WIDTH * scale;
    let ln_integrand = |r: f64| k * r.ln() - 0.5 * (r - c).powi(2) / s2 - 0.5 * LN_2PI;

    let peak = ln_integrand(mode);
    let tail = ln_integrand(hi) - peak;
    if !(peak.is_finite() && tail < -40.0) {
        return Err(Error::numeric(format!(
            "radial integral window does not contain the integrand \
             (n={n}, sigma={sigma}, c={c}, mode={mode}, tail drop={tail})"
        )));
    }

    let (nodes, weights) = gauss_legendre_nodes();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let sum: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| {
            let v = ln_integrand(mid + half * x) - peak;
            w * v.exp()
        })
        .sum();
    let value = peak + (half * sum).ln();
    if !value.is_finite() {
        return Err(Error::numeric(format!(
            "radial integral is not finite (n={n}, sigma={sigma}, c={c})"
        )));
    }
    Ok(value)
}

/// One normal proposal: always a direction, accepted when inside the cap.
#[derive(Debug, Clone)]
pub struct NormalDraw {
    pub direction: Direction,
    pub accepted: bool,
    /// Log density, evaluated only for accepted draws.
    pub ln_density: Option<f64>,
}

pub fn shifted_normal_draw(spec: &ShiftedNormalSpec, rng: &mut RandomStream) -> Result<NormalDraw> {
    let direction = loop {
        let x: Vec<f64> = spec
            .mu
            .iter()
            .map(|m| m + spec.sigma * rng.normal())
            .collect();
        if let Ok(d) = Direction::normalize(x) {
            break d;
        }
    };
    let accepted = direction.angle_to(&spec.axis) <= spec.theta0;
    let ln_density = if accepted {
        Some(spec.ln_density(direction.as_slice())?)
    } else {
        None
    };
    Ok(NormalDraw {
        direction,
        accepted,
        ln_density,
    })
}

/// Accepted normal samples and how many proposals they cost.
#[derive(Debug, Clone)]
pub struct NormalBatch {
    pub batch: WeightedBatch,
    pub proposals: usize,
}

impl NormalBatch {
    pub fn acceptance_fraction(&self) -> f64 {
        self.batch.samples.len() as f64 / self.proposals as f64
    }
}

/// Draws until `accepted` samples land in the cap, or fails after
/// `max_proposals`.
pub fn shifted_normal_batch(
    spec: &ShiftedNormalSpec,
    accepted: usize,
    max_proposals: usize,
    rng: &mut RandomStream,
) -> Result<NormalBatch> {
    let mut items = Vec::with_capacity(accepted);
    let mut proposals = 0;
    while items.len() < accepted {
        if proposals >= max_proposals {
            return Err(Error::numeric(format!(
                "only {} of {accepted} normal samples accepted after {max_proposals} proposals",
                items.len()
            )));
        }
        proposals += 1;
        let d = shifted_normal_draw(spec, rng)?;
        if let Some(ln_f) = d.ln_density {
            items.push((d.direction, ln_f));
        }
    }
    Ok(NormalBatch {
        batch: WeightedBatch::from_ln_densities(items)?,
        proposals,
    })
}

/// Fraction of `proposals` normal draws that land in the cap. Skips the
/// density evaluation.
pub fn shifted_normal_acceptance(
    spec: &ShiftedNormalSpec,
    proposals: usize,
    rng: &mut RandomStream,
) -> f64 {
    let mut x = vec![0.0; spec.dim()];
    let cos0 = spec.theta0.cos();
    let mut hits = 0usize;
    for _ in 0..proposals {
        for (xi, m) in x.iter_mut().zip(&spec.mu) {
            *xi = m + spec.sigma * rng.normal();
        }
        let r = direction::norm(&x);
        if r > 0.0 && spec.axis.dot(&x) / r >= cos0 {
            hits += 1;
        }
    }
    hits as f64 / proposals as f64
}
