//! Binomial confidence intervals for failure-rate estimates.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("total count must be positive")]
    NoTrials,
    #[error("{n_fail} failures exceed {n_tot} trials")]
    TooManyFailures { n_fail: u64, n_tot: u64 },
    #[error("kappa must be finite and non-negative, got {0}")]
    BadKappa(f64),
}

/// Default critical value for a 95% interval.
pub const DEFAULT_KAPPA: f64 = 1.96;

/// Agresti–Coull point estimate and half-width:
/// `p = (n_f + κ²/2) / (n_t + κ²)` and `κ · sqrt(p(1 − p) / (n_t + κ²))`.
pub fn agresti_coull(n_fail: u64, n_tot: u64, kappa: f64) -> Result<(f64, f64), StatsError> {
    if n_tot == 0 {
        return Err(StatsError::NoTrials);
    }
    if n_fail > n_tot {
        return Err(StatsError::TooManyFailures { n_fail, n_tot });
    }
    if !kappa.is_finite() || kappa < 0.0 {
        return Err(StatsError::BadKappa(kappa));
    }
    let k2 = kappa * kappa;
    let denom = n_tot as f64 + k2;
    let p = (n_fail as f64 + k2 / 2.0) / denom;
    let half = kappa * (p * (1.0 - p) / denom).sqrt();
    Ok((p, half))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_kappa_is_sample_mean() {
        assert_eq!(agresti_coull(0, 100, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(agresti_coull(25, 100, 0.0).unwrap().0, 0.25);
    }

    #[test]
    fn zero_failures_at_default_kappa() {
        let (p, h) = agresti_coull(0, 100, DEFAULT_KAPPA).unwrap();
        // hand evaluation: 1.9208 / 103.8416 and 1.96 * sqrt(p (1 - p) / 103.8416)
        assert!((p - 0.018_497_4).abs() < 1e-6, "{p}");
        assert!((h - 0.025_917).abs() < 1e-5, "{h}");
        assert!((p - 0.018494).abs() < 1e-5 && (h - 0.02590).abs() < 1e-4);
    }

    #[test]
    fn all_failures_stay_below_one() {
        for n in [1, 10, 1000] {
            assert!(agresti_coull(n, n, DEFAULT_KAPPA).unwrap().0 < 1.0);
        }
    }

    #[test]
    fn domain_errors() {
        assert_eq!(agresti_coull(0, 0, 1.0), Err(StatsError::NoTrials));
        assert!(agresti_coull(3, 2, 1.0).is_err());
        assert!(agresti_coull(1, 2, -1.0).is_err());
        assert!(agresti_coull(1, 2, f64::NAN).is_err());
    }
}
