use serde::{Deserialize, Serialize};

/// Normal quantile for two-sided 95% intervals.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A binomial proportion with its 95% Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// `sqrt(p (1 - p) / trials)` at the point estimate.
    pub std_error: f64,
}

impl Estimate {
    pub fn new(successes: u64, trials: u64) -> Self {
        let (lower, upper) = wilson_interval(successes, trials, Z95);
        let p = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        Estimate {
            successes,
            trials,
            estimate: p,
            lower,
            upper,
            std_error: if trials == 0 { 0.0 } else { (p * (1.0 - p) / trials as f64).sqrt() },
        }
    }

    /// `|estimate - target|` in units of the standard error at `target`.
    pub fn z_score(&self, target: f64) -> f64 {
        let se = (target * (1.0 - target) / self.trials as f64).sqrt();
        if se == 0.0 {
            if (self.estimate - target).abs() < f64::EPSILON {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.estimate - target).abs() / se
        }
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lower = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let upper = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lower, upper)
}
