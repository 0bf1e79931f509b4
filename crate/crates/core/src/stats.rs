//! Small shared statistics helpers: means, sample deviations, quantiles.

/// Arithmetic mean; 0 for empty input.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n-1 denominator); 0 for fewer than two points.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Nearest-rank quantile on sorted data: the ceil(p*n)-th order statistic.
pub fn quantile_nearest_rank(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Linearly interpolated quantile on sorted data (numpy default convention).
pub fn quantile_linear(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = pos - lo as f64;
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Sorts a copy and returns it; NaNs are rejected by callers beforehand.
pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("NaN in statistics input"));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank_matches_definition() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_nearest_rank(&v, 0.25), 1.0);
        assert_eq!(quantile_nearest_rank(&v, 0.5), 2.0);
        assert_eq!(quantile_nearest_rank(&v, 0.75), 3.0);
        assert_eq!(quantile_nearest_rank(&v, 1.0), 4.0);
    }

    #[test]
    fn linear_interpolates_midpoints() {
        let v = [0.0, 1.0];
        assert_eq!(quantile_linear(&v, 0.5), 0.5);
        assert_eq!(quantile_linear(&v, 0.25), 0.25);
        assert_eq!(quantile_linear(&v, 0.75), 0.75);
    }

    #[test]
    fn sd_of_constant_is_zero() {
        assert_eq!(sample_sd(&[2.0, 2.0, 2.0]), 0.0);
    }
}
