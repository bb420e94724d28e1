//! Empirical CDFs and medians for the metric samples.

use crate::error::{Error, Result};

/// Empirical CDF as a sorted step function: probability at the `i`-th sorted
/// sample is `(i + 1) / n`.
pub fn empirical_cdf(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::DegenerateInput("empirical_cdf: no samples"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("empirical_cdf sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, x)| (x, (i as f64 + 1.0) / n))
        .collect())
}

/// Sample median with the midpoint convention for even counts.
pub fn median(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::DegenerateInput("median: no samples"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    })
}

pub fn mean(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    samples.iter().sum::<f64>() / samples.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_sample() {
        assert_eq!(empirical_cdf(&[5.0]).unwrap(), vec![(5.0, 1.0)]);
    }

    #[test]
    fn median_midpoint_convention() {
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 2.5);
        assert_eq!(median(&[3.0, 1.0, 2.0]).unwrap(), 2.0);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(empirical_cdf(&[]).is_err());
        assert!(median(&[]).is_err());
    }

    #[test]
    fn uniform_draws_stay_close_to_identity() {
        // Kolmogorov-Smirnov-style bound at n = 1e4.
        let mut rng = StdRng::seed_from_u64(2024);
        let samples: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        let cdf = empirical_cdf(&samples).unwrap();
        let max_dev = cdf
            .iter()
            .map(|&(x, p)| (p - x).abs())
            .fold(0.0, f64::max);
        assert!(max_dev <= 0.03, "KS deviation {max_dev}");
    }
}
