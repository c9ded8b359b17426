use serde::Serialize;

use crate::error::{Error, Result};

/// Fewest records [`estimate_expected_value`] accepts.
pub const MIN_ESTIMATE_RECORDS: usize = 30;

/// Sample mean with its standard error and a two-standard-error lower
/// bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub count: usize,
    pub mean: f64,
    pub stderr: f64,
    pub lower: f64,
}

pub fn estimate_expected_value(values: &[f64]) -> Result<Estimate> {
    if values.len() < MIN_ESTIMATE_RECORDS {
        return Err(Error::TooFewRecords {
            got: values.len(),
            need: MIN_ESTIMATE_RECORDS,
        });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let stderr = (var / n).sqrt();
    Ok(Estimate {
        count: values.len(),
        mean,
        stderr,
        lower: mean - 2.0 * stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values_have_zero_error() {
        let e = estimate_expected_value(&[2.5; 40]).unwrap();
        assert_eq!((e.mean, e.stderr, e.lower), (2.5, 0.0, 2.5));
    }

    #[test]
    fn matches_hand_computation() {
        // 0,1 alternating, 30 values: mean 0.5, sample variance 30*0.25/29
        let values: Vec<f64> = (0..30).map(|i| (i % 2) as f64).collect();
        let e = estimate_expected_value(&values).unwrap();
        let se = (7.5 / 29.0 / 30.0f64).sqrt();
        assert!((e.mean - 0.5).abs() < 1e-15);
        assert!((e.stderr - se).abs() < 1e-15);
        assert!((e.lower - (0.5 - 2.0 * se)).abs() < 1e-15);
    }

    #[test]
    fn too_few_records() {
        assert!(matches!(
            estimate_expected_value(&[1.0; 29]),
            Err(Error::TooFewRecords { got: 29, need: 30 })
        ));
    }
}
