//! Corpus aggregation and significance machinery.
//!
//! Aggregates skip absent values rather than treating them as zero. The
//! two-sample test is Welch's (unequal variances) with Welch-Satterthwaite
//! degrees of freedom; effect sizes are pooled-SD Cohen's d. Two-sided
//! p-values come from the t-distribution via the regularized incomplete
//! beta function, `p = I_{df/(df+t^2)}(df/2, 1/2)`.

use statrs::function::beta::beta_reg;

use crate::error::InputError;

/// Mean, minimum, and maximum over the defined values of a metric column.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Aggregate {
    pub mean: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    /// Number of defined values.
    pub n: usize,
    /// Number of absent values, excluded from the statistics above.
    pub n_absent: usize,
}

/// Aggregate a column of optional values. Absent entries are counted but
/// never folded into the mean.
pub fn aggregate(values: &[Option<f64>]) -> Aggregate {
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    let n = defined.len();
    let n_absent = values.len() - n;
    if n == 0 {
        return Aggregate { mean: None, min: None, max: None, n, n_absent };
    }
    let mean = defined.iter().sum::<f64>() / n as f64;
    let min = defined.iter().copied().fold(f64::INFINITY, f64::min);
    let max = defined.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Aggregate { mean: Some(mean), min: Some(min), max: Some(max), n, n_absent }
}

/// Outcome of a significance test.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TestResult {
    /// Welch t statistic, or the correlation coefficient for Pearson tests.
    pub statistic: f64,
    pub p_value: f64,
    /// Cohen's d for mean comparisons; the coefficient itself for
    /// correlations, where r is the conventional effect size.
    pub effect_size: f64,
    pub significant_05: bool,
    pub significant_001: bool,
}

impl TestResult {
    fn from_parts(statistic: f64, p_value: f64, effect_size: f64) -> Self {
        TestResult {
            statistic,
            p_value,
            effect_size,
            significant_05: p_value < 0.05,
            significant_001: p_value < 0.001,
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance (n-1 denominator).
fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
fn t_two_sided_p(t: f64, df: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    // I_x(df/2, 1/2) with x = df/(df + t^2); exact 1 at t = 0.
    let x = df / (df + t * t);
    beta_reg(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}

/// Welch's unequal-variance two-sample t-test with Cohen's d attached.
///
/// Requires at least two observations with nonzero variance per sample.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TestResult, InputError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(InputError::new("welch_t_test requires at least 2 observations per sample"));
    }
    let (va, vb) = (sample_variance(a), sample_variance(b));
    if va <= 0.0 || vb <= 0.0 {
        return Err(InputError::new("welch_t_test requires nonzero variance in both samples"));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let sa = va / na;
    let sb = vb / nb;
    let t = (mean(a) - mean(b)) / (sa + sb).sqrt();
    let df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p = t_two_sided_p(t, df);
    let d = cohens_d(a, b)?;
    Ok(TestResult::from_parts(t, p, d))
}

/// Cohen's d with the pooled standard deviation convention
/// ((n-1)-weighted variances).
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64, InputError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(InputError::new("cohens_d requires at least 2 observations per sample"));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled = ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b))
        / (na + nb - 2.0);
    if pooled <= 0.0 {
        return Err(InputError::new("cohens_d is undefined for zero pooled variance"));
    }
    Ok((mean(a) - mean(b)) / pooled.sqrt())
}

/// Pearson correlation with a two-sided significance test via the
/// t-transform `r * sqrt((n-2)/(1-r^2))`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<TestResult, InputError> {
    if x.len() != y.len() {
        return Err(InputError::new("pearson requires samples of equal length"));
    }
    let n = x.len();
    if n < 3 {
        return Err(InputError::new("pearson requires at least 3 paired observations"));
    }
    let (mx, my) = (mean(x), mean(y));
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx <= 0.0 || vy <= 0.0 {
        return Err(InputError::new("pearson requires nonzero variance in both samples"));
    }
    // sqrt of the product keeps perfectly correlated inputs at exactly ±1.
    let r = (cov / (vx * vy).sqrt()).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    // For the t-transform, df/(df + t^2) simplifies to 1 - r^2.
    let p = beta_reg(df / 2.0, 0.5, (1.0 - r * r).clamp(0.0, 1.0)).clamp(0.0, 1.0);
    Ok(TestResult::from_parts(r, p, r))
}

/// Pearson over pairs where both values are defined; incomplete pairs are
/// excluded pairwise. Returns the test together with the number of pairs
/// kept and excluded. Fewer than 3 complete pairs is an error.
pub fn pearson_pairwise(
    pairs: impl IntoIterator<Item = (Option<f64>, Option<f64>)>,
) -> Result<(TestResult, usize, usize), InputError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = 0usize;
    for (a, b) in pairs {
        match (a, b) {
            (Some(a), Some(b)) => {
                xs.push(a);
                ys.push(b);
            }
            _ => excluded += 1,
        }
    }
    if xs.len() < 3 {
        return Err(InputError::new(format!(
            "pearson requires at least 3 complete pairs, found {}",
            xs.len()
        )));
    }
    let result = pearson(&xs, &ys)?;
    Ok((result, xs.len(), excluded))
}
