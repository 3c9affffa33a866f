//! Rank correlation and paired significance.

use statrs::distribution::{ContinuousCDF, StudentsT};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("zero variance: correlation is undefined")]
    ZeroVariance,
    #[error("differences are constant and non-zero: t statistic is undefined")]
    DegenerateDifferences,
    #[error("non-finite observation")]
    NonFinite,
}

fn check(x: &[f64], y: &[f64]) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooShort(x.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    Ok(())
}

/// 1-based ranks; tied values share the mean of their positions.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairedTest {
    pub n: usize,
    pub mean_difference: f64,
    pub t: f64,
    /// Two-sided, from Student's t with `n - 1` degrees of freedom.
    pub p_value: f64,
    /// All differences were exactly zero; `t` is reported as 0 and `p` as 1.
    pub identical: bool,
}

/// Paired t-test on `a[i] - b[i]`.
pub fn paired_significance(a: &[f64], b: &[f64]) -> Result<PairedTest, StatsError> {
    check(a, b)?;
    let n = a.len();
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if diffs.iter().all(|&d| d == 0.0) {
        return Ok(PairedTest {
            n,
            mean_difference: 0.0,
            t: 0.0,
            p_value: 1.0,
            identical: true,
        });
    }
    let nf = n as f64;
    let mean = diffs.iter().sum::<f64>() / nf;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    // spread at rounding level around a non-zero mean counts as constant
    if var.sqrt() <= 1e-12 * mean.abs() {
        return Err(StatsError::DegenerateDifferences);
    }
    let t = mean / (var / nf).sqrt();
    let dist = StudentsT::new(0.0, 1.0, nf - 1.0).expect("n >= 2 gives positive dof");
    let p_value = (2.0 * dist.cdf(-t.abs())).min(1.0);
    Ok(PairedTest {
        n,
        mean_difference: mean,
        t,
        p_value,
        identical: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn monotone_sequences() {
        let x = [1.0, 2.5, 3.0, 10.0];
        assert_eq!(spearman(&x, &[2.0, 4.0, 8.0, 16.0]).unwrap(), 1.0);
        assert_eq!(spearman(&x, &[9.0, 3.0, 0.0, -5.0]).unwrap(), -1.0);
    }

    #[test]
    fn rank_formula_example() {
        assert_abs_diff_eq!(
            spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap(),
            0.8,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn errors() {
        assert_eq!(spearman(&[1.0], &[1.0]), Err(StatsError::TooShort(1)));
        assert_eq!(spearman(&[1.0, 2.0], &[1.0]), Err(StatsError::LengthMismatch(2, 1)));
        assert_eq!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(StatsError::ZeroVariance));
    }

    #[test]
    fn identical_sequences() {
        let a = [0.1, 0.5, 0.3];
        let test = paired_significance(&a, &a).unwrap();
        assert!(test.identical);
        assert_eq!(test.t, 0.0);
        assert_eq!(test.p_value, 1.0);
    }

    #[test]
    fn constant_shift_is_degenerate() {
        let a = [0.0, 1.0, 2.0, 3.0];
        let b: Vec<f64> = a.iter().map(|x| x + 0.5).collect();
        assert_eq!(paired_significance(&a, &b), Err(StatsError::DegenerateDifferences));
    }
}
