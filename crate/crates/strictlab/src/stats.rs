//! Small statistical helpers shared by the Monte Carlo verifiers: sample
//! moments, normal quantiles, mean confidence bands, and Wilson score
//! intervals for proportions.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Sample mean and standard deviation (ddof = 1).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
    (mean, var.sqrt())
}

/// Two-sided standard normal quantile for the given confidence level:
/// `Φ⁻¹(1 − (1 − confidence)/2)`.
pub fn z_quantile(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Validation(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    Ok(normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0))
}

/// A point estimate with a symmetric confidence band
/// `half_width = z · σ̂ / √n`.
#[derive(Clone, Copy, Debug)]
pub struct EstimateWithBand {
    pub estimate: f64,
    pub half_width: f64,
    pub sigma_hat: f64,
    pub n: usize,
    pub confidence: f64,
}

impl EstimateWithBand {
    pub fn contains(&self, value: f64) -> bool {
        (self.estimate - value).abs() <= self.half_width
    }

    pub fn lower(&self) -> f64 {
        self.estimate - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.estimate + self.half_width
    }
}

/// Confidence band for the mean of a sample. Needs at least two points for a
/// standard deviation.
pub fn mean_band(xs: &[f64], confidence: f64) -> Result<EstimateWithBand> {
    if xs.len() < 2 {
        return Err(Error::InsufficientSamples { needed: 2, have: xs.len() });
    }
    let (mean, sd) = mean_std(xs);
    let z = z_quantile(confidence)?;
    Ok(EstimateWithBand {
        estimate: mean,
        half_width: z * sd / (xs.len() as f64).sqrt(),
        sigma_hat: sd,
        n: xs.len(),
        confidence,
    })
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, n: usize, confidence: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InsufficientSamples { needed: 1, have: 0 });
    }
    if successes > n {
        return Err(Error::Validation(format!("{successes} successes out of {n} trials")));
    }
    let z = z_quantile(confidence)?;
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}
