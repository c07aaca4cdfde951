use crate::error::{CoreError, Result};

/// Quantile by linear interpolation between closest ranks (the "inclusive"
/// convention: position `q * (n - 1)`). `sorted` must be ascending.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Tukey fences `(Q1 - k*IQR, Q3 + k*IQR)`.
pub fn iqr_bounds(values: &[f64], k: f64) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q1 = quantile(&v, 0.25);
    let q3 = quantile(&v, 0.75);
    let iqr = q3 - q1;
    Ok((q1 - k * iqr, q3 + k * iqr))
}

pub fn is_outlier(value: f64, bounds: (f64, f64)) -> bool {
    value < bounds.0 || value > bounds.1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_population_has_no_outliers() {
        let b = iqr_bounds(&[5.0; 4], 1.5).unwrap();
        assert_eq!(b, (5.0, 5.0));
        assert!(!is_outlier(5.0, b));
    }

    #[test]
    fn one_to_ten() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        let mut s = v.clone();
        s.sort_by(f64::total_cmp);
        assert_eq!(quantile(&s, 0.25), 3.25);
        assert_eq!(quantile(&s, 0.75), 7.75);
        assert_eq!(iqr_bounds(&v, 1.5).unwrap().1, 14.5);
    }

    #[test]
    fn spike_is_flagged() {
        let b = iqr_bounds(&[0.0, 0.0, 0.0, 100.0], 1.5).unwrap();
        assert!(is_outlier(100.0, b));
        assert!(!is_outlier(0.0, b));
        assert!(iqr_bounds(&[], 1.5).is_err());
    }
}
