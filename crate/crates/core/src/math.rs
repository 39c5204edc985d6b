//! Stable log-domain reductions.

use std::f64::consts::LN_2;

/// `ln(sum(exp(x)))` with max-shift stabilization.
///
/// Returns `-inf` for an empty slice or when every value is `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = values.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `log2(sum(exp(x)))`.
pub fn log2_sum_exp(values: &[f64]) -> f64 {
    log_sum_exp(values) / LN_2
}

/// `log2(n)` computed the same way [`log2_sum_exp`] evaluates a sum of `n`
/// unit terms, so the two cancel exactly.
pub fn log2_count(n: usize) -> f64 {
    (n as f64).ln() / LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_in_safe_range() {
        let v = [-1.0, -2.0, 0.5, 3.0];
        let naive = v.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&v) - naive).abs() < 1e-14);
    }

    #[test]
    fn survives_large_magnitudes() {
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert!((log_sum_exp(&[-1e6, 0.0]) - 0.0).abs() < 1e-300);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
    }

    #[test]
    fn zeros_cancel_count_exactly() {
        for n in [1usize, 2, 4, 16, 256] {
            assert_eq!(log2_sum_exp(&vec![0.0; n]), log2_count(n));
        }
    }
}
