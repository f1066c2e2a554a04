use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Sample mean with a normal-approximation confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCi {
    pub mean: f64,
    pub half_width: f64,
    pub n: usize,
}

/// Two-sided normal quantile for `confidence` (0.95 → 1.959964).
pub fn normal_quantile(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + confidence / 2.0)
}

/// `mean ± z · s / √n` with the unbiased sample deviation; zero width for `n < 2`.
pub fn mean_ci(values: &[f64], confidence: f64) -> MeanCi {
    let n = values.len();
    if n == 0 {
        return MeanCi { mean: f64::NAN, half_width: f64::NAN, n };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return MeanCi { mean, half_width: 0.0, n };
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    MeanCi { mean, half_width: normal_quantile(confidence) * (var / n as f64).sqrt(), n }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        assert!((normal_quantile(0.95) - 1.959_963_985).abs() < 1e-8);
        assert!((normal_quantile(0.99) - 2.575_829_304).abs() < 1e-8);
    }

    #[test]
    fn intervals() {
        let c = mean_ci(&[1.0, 2.0, 3.0, 4.0], 0.95);
        assert_eq!(c.mean, 2.5);
        // s = sqrt(5/3), s/√4 = 0.645497
        assert!((c.half_width - 1.959_963_985 * 0.645_497_224).abs() < 1e-8);
        assert!(mean_ci(&[0.7; 10], 0.95).half_width < 1e-12);
        assert_eq!(mean_ci(&[0.3], 0.95), MeanCi { mean: 0.3, half_width: 0.0, n: 1 });
    }
}
