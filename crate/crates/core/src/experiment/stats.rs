use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Median of the finite values, `None` when there are none. Infinite values
/// sort above every finite one and count toward the middle.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub fn fraction(hits: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of `observed` counts against `expected` counts.
/// Cells with zero expectation must be empty; a nonempty one gives `p = 0`.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> ChiSquare {
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut impossible = false;
    for (&o, &e) in observed.iter().zip(expected) {
        if e > 0.0 {
            statistic += (o as f64 - e).powi(2) / e;
            cells += 1;
        } else if o > 0 {
            impossible = true;
        }
    }
    let df = cells.saturating_sub(1);
    let p_value = if impossible {
        0.0
    } else if df == 0 {
        1.0
    } else {
        ChiSquared::new(df as f64).expect("df > 0").sf(statistic)
    };
    ChiSquare {
        statistic,
        df,
        p_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[1.0, f64::INFINITY, f64::INFINITY]), Some(f64::INFINITY));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn chi_square_reference_values() {
        // statistic 4 on one degree of freedom
        let c = chi_square(&[60, 40], &[50.0, 50.0]);
        assert!((c.statistic - 4.0).abs() < 1e-12);
        assert_eq!(c.df, 1);
        assert!((c.p_value - 0.0455).abs() < 1e-3);
        assert_eq!(chi_square(&[5, 1], &[6.0, 0.0]).p_value, 0.0);
        assert_eq!(chi_square(&[6], &[6.0]).p_value, 1.0);
    }
}
