//! Exact planar-angle law of a cap, empirical CDFs and Kolmogorov–Smirnov
//! statistics used to validate the samplers.

use crate::anglemap::AngleMap;
use crate::error::{Error, Result};

/// Asymptotic Kolmogorov distribution quantile at the 1% level.
pub const KS_CRITICAL_1PCT: f64 = 1.628;

/// Law of the angle between a uniform cap sample and the cap axis.
///
/// CDF `Theta(theta) / Theta(theta0)`, density
/// `s_{n-1} / (s_n Theta(theta0)) * sin^(n-2)(theta)` on `[0, theta0]`.
#[derive(Debug, Clone, Copy)]
pub struct ThetaDistribution {
    map: AngleMap,
    theta0: f64,
    ln_omega0: f64,
}

impl ThetaDistribution {
    pub fn new(n: usize, theta0: f64) -> Result<Self> {
        let map = AngleMap::new(n)?;
        if !(theta0 > 0.0 && theta0 <= std::f64::consts::PI) {
            return Err(Error::domain(format!(
                "theta distribution needs 0 < theta0 <= pi, got {theta0}"
            )));
        }
        let ln_omega0 = map.ln_theta_to_fraction(theta0)?;
        Ok(ThetaDistribution {
            map,
            theta0,
            ln_omega0,
        })
    }

    pub fn dimension(&self) -> usize {
        self.map.dimension()
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn exact_cdf(&self, theta: f64) -> f64 {
        if !(theta > 0.0) {
            return 0.0;
        }
        if theta >= self.theta0 {
            return 1.0;
        }
        // theta is inside (0, theta0) so the map cannot fail
        let ln = self
            .map
            .ln_theta_to_fraction(theta)
            .expect("angle inside the cap");
        (ln - self.ln_omega0).exp().min(1.0)
    }

    pub fn exact_pdf(&self, theta: f64) -> f64 {
        if !(0.0..=self.theta0).contains(&theta) {
            return 0.0;
        }
        let power = self.map.dimension() as f64 - 2.0;
        let ln_sin = if power == 0.0 {
            0.0
        } else {
            power * theta.sin().ln()
        };
        (ln_sin - self.map.ln_beta() - self.ln_omega0).exp()
    }
}

/// `#{samples <= theta} / N`.
pub fn ecdf(samples: &[f64], theta: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("ecdf of an empty sample"));
    }
    let count = samples.iter().filter(|&&s| s <= theta).count();
    Ok(count as f64 / samples.len() as f64)
}

/// Weighted ECDF `sum w_i 1[theta_i <= theta] / sum w_i` over
/// `(theta_i, w_i)` pairs.
pub fn weighted_ecdf(samples: &[(f64, f64)], theta: f64) -> Result<f64> {
    let total: f64 = samples.iter().map(|s| s.1).sum();
    if !(total > 0.0) {
        return Err(Error::domain(
            "weighted ecdf needs at least one positive weight",
        ));
    }
    let below: f64 = samples.iter().filter(|s| s.0 <= theta).map(|s| s.1).sum();
    Ok(below / total)
}

/// Result of a one-sample Kolmogorov–Smirnov comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub sample_count: usize,
    pub statistic: f64,
    pub critical_value_1pct: f64,
}

impl KsReport {
    fn new(sample_count: usize, statistic: f64) -> Self {
        KsReport {
            sample_count,
            statistic,
            critical_value_1pct: KS_CRITICAL_1PCT / (sample_count as f64).sqrt(),
        }
    }

    /// True when the statistic is below the 1% critical value.
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_value_1pct
    }
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// `D_N = sup |F_N - F|` against any continuous CDF. Input need not be sorted.
pub fn ks_statistic_with<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsReport> {
    if samples.is_empty() {
        return Err(Error::domain("KS statistic of an empty sample"));
    }
    let s = sorted(samples);
    let n = s.len() as f64;
    let d = s.iter().enumerate().fold(0.0_f64, |acc, (i, &x)| {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    });
    Ok(KsReport::new(s.len(), d))
}

/// `D_N` of planar-angle samples against the exact cap law.
pub fn ks_statistic(samples: &[f64], exact: &ThetaDistribution) -> Result<KsReport> {
    ks_statistic_with(samples, |t| exact.exact_cdf(t))
}

/// `D_N` of the weighted ECDF of `(theta, weight)` pairs. The critical value
/// is the unweighted one for the same `N`.
pub fn weighted_ks_statistic_with<F: Fn(f64) -> f64>(
    samples: &[(f64, f64)],
    cdf: F,
) -> Result<KsReport> {
    let total: f64 = samples.iter().map(|s| s.1).sum();
    if !(total > 0.0) {
        return Err(Error::domain(
            "weighted KS needs at least one positive weight",
        ));
    }
    let mut s = samples.to_vec();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut before = 0.0;
    let mut d = 0.0_f64;
    let mut i = 0;
    while i < s.len() {
        // Ties jump together.
        let theta = s[i].0;
        let mut after = before;
        while i < s.len() && s[i].0 == theta {
            after += s[i].1 / total;
            i += 1;
        }
        let f = cdf(theta);
        d = d.max(after - f).max(f - before);
        before = after;
    }
    Ok(KsReport::new(s.len(), d))
}

pub fn weighted_ks_statistic(
    samples: &[(f64, f64)],
    exact: &ThetaDistribution,
) -> Result<KsReport> {
    weighted_ks_statistic_with(samples, |t| exact.exact_cdf(t))
}

/// Two-sample KS statistic and its asymptotic 1% critical value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSampleKs {
    pub statistic: f64,
    pub critical_value_1pct: f64,
}

impl TwoSampleKs {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_value_1pct
    }
}

pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<TwoSampleKs> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("two-sample KS needs two non-empty samples"));
    }
    let a = sorted(a);
    let b = sorted(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(TwoSampleKs {
        statistic: d,
        critical_value_1pct: KS_CRITICAL_1PCT * ((na + nb) / (na * nb)).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub width: f64,
    pub count: usize,
    /// `count / (N * width)`; bins sum to the in-range fraction.
    pub density: f64,
}

impl HistogramBin {
    pub fn center(&self) -> f64 {
        self.left + 0.5 * self.width
    }
}

/// Density-normalized histogram on `[lo, hi]` with `bins` equal bins. The
/// last bin is closed on the right.
pub fn histogram(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Vec<HistogramBin>> {
    if bins == 0 || !(lo < hi) {
        return Err(Error::domain(format!(
            "histogram needs bins >= 1 and lo < hi, got {bins} bins on [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &s in samples {
        if s < lo || s > hi || s.is_nan() {
            continue;
        }
        let k = (((s - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = samples.len().max(1) as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            left: lo + k as f64 * width,
            width,
            count,
            density: count as f64 / (total * width),
        })
        .collect())
}
