//! Sample statistics used by the Monte Carlo suites.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Two-sample Kolmogorov–Smirnov outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Domain("sample contains NaN".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `D = sup_x |F_a(x) - F_b(x)|` with the asymptotic Kolmogorov p-value
/// (Stephens' small-sample correction).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("two-sample test needs non-empty samples".into()));
    }
    let (x, y) = (sorted(a)?, sorted(b)?);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let en = (n * m / (n + m)).sqrt();
    let p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
    Ok(KsResult { statistic: d, p_value })
}

/// `Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} e^{-2k²λ²}`, clamped to `[0, 1]`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as i64 % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Bonferroni adjustment `min(1, m·p)` over `m` simultaneous tests.
pub fn bonferroni(p_values: &[f64]) -> Vec<f64> {
    let m = p_values.len() as f64;
    p_values.iter().map(|p| (p * m).min(1.0)).collect()
}

/// Sample quantile with linear interpolation between order statistics
/// (`h = (n-1)·prob`).
pub fn quantile(values: &[f64], prob: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain("quantile of an empty sample".into()));
    }
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::Domain(format!("probability {prob} outside [0, 1]")));
    }
    let v = sorted(values)?;
    Ok(quantile_sorted(&v, prob))
}

pub fn quantile_sorted(sorted: &[f64], prob: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(values: &[f64]) -> Result<f64> {
    quantile(values, 0.5)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance.
pub fn variance(values: &[f64]) -> f64 {
    let mu = mean(values);
    values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (values.len() as f64 - 1.0)
}

pub fn standard_error(values: &[f64]) -> f64 {
    (variance(values) / values.len() as f64).sqrt()
}

/// One point of an empirical survival function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalPoint {
    pub lambda: f64,
    pub probability: f64,
    /// Binomial standard error `√(p(1-p)/n)`.
    pub error: f64,
}

/// `P(X > λ)` on each threshold of `grid`.
pub fn survival(values: &[f64], grid: &[f64]) -> Result<Vec<SurvivalPoint>> {
    if values.is_empty() {
        return Err(Error::Domain("survival of an empty sample".into()));
    }
    let v = sorted(values)?;
    let n = v.len() as f64;
    Ok(grid
        .iter()
        .map(|&lambda| {
            let above = v.len() - v.partition_point(|x| *x <= lambda);
            let p = above as f64 / n;
            SurvivalPoint {
                lambda,
                probability: p,
                error: (p * (1.0 - p) / n).sqrt(),
            }
        })
        .collect())
}

/// Least-squares line `y ≈ intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Domain(format!(
            "linear fit needs two or more paired points, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("linear fit needs distinct abscissae".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - residual / syy };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        points: x.len(),
    })
}

/// Fit of `log y` against `log x`; the slope is the power-law exponent.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("log-log fit needs positive data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareResult {
    pub fn rejects(&self, level: f64) -> bool {
        self.p_value < level
    }
}

/// Upper-tail critical value of `χ²_dof` at `level`.
pub fn chi_square_critical(dof: usize, level: f64) -> Result<f64> {
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(dist.inverse_cdf(1.0 - level))
}

/// Homogeneity test between an unweighted sample and a weighted one on
/// `bins` equiprobable bins of the unweighted sample.
///
/// Bin proportions `p̂₁`, `p̂₂` are compared through
/// `Σ (p̂₁-p̂₂)² / (p̄/n₁ + v₂)` with `p̄` the pooled proportion and
/// `v₂ = Σ_{i∈bin} w_i² / (Σ w)²`, which reduces to the classical two-sample
/// Pearson statistic for equal weights. Referred to `χ²_{bins-1}`.
pub fn weighted_homogeneity_test(
    sample: &[f64],
    weighted: &[f64],
    weights: &[f64],
    bins: usize,
) -> Result<ChiSquareResult> {
    if weighted.len() != weights.len() {
        return Err(Error::Domain("weighted sample and weights differ in length".into()));
    }
    if bins < 2 || sample.len() < bins {
        return Err(Error::Domain(format!("cannot form {bins} bins from {} values", sample.len())));
    }
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::Domain("weights must be finite and nonnegative".into()));
    }
    let total_weight: f64 = weights.iter().sum();
    if !(total_weight > 0.0) {
        return Err(Error::Domain("weights sum to zero".into()));
    }
    let v = sorted(sample)?;
    let edges: Vec<f64> = (1..bins)
        .map(|k| quantile_sorted(&v, k as f64 / bins as f64))
        .collect();
    let bin_of = |x: f64| edges.partition_point(|e| *e < x);

    let mut counts = vec![0.0; bins];
    for &x in &v {
        counts[bin_of(x)] += 1.0;
    }
    let mut mass = vec![0.0; bins];
    let mut mass_sq = vec![0.0; bins];
    for (&x, &w) in weighted.iter().zip(weights) {
        let k = bin_of(x);
        mass[k] += w;
        mass_sq[k] += w * w;
    }
    let n1 = v.len() as f64;
    let w2 = total_weight * total_weight;
    let effective = w2 / weights.iter().map(|w| w * w).sum::<f64>();
    let mut statistic = 0.0;
    let mut dof = 0usize;
    for k in 0..bins {
        let p1 = counts[k] / n1;
        let p2 = mass[k] / total_weight;
        let pooled = (counts[k] + p2 * effective) / (n1 + effective);
        let var = pooled / n1 + mass_sq[k] / w2;
        if var > 0.0 {
            statistic += (p1 - p2).powi(2) / var;
            dof += 1;
        }
    }
    let dof = dof.saturating_sub(1).max(1);
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_identical_samples() {
        let a = [0.3, 1.0, -2.0, 4.0];
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn ks_disjoint_samples() {
        let a: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let b: Vec<f64> = (100..150).map(|i| i as f64).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(r.p_value < 1e-10);
    }

    #[test]
    fn kolmogorov_reference_values() {
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-5);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 1e-5);
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(quantile(&v, 0.0).unwrap(), 1.0);
        assert_eq!(quantile(&v, 1.0).unwrap(), 4.0);
        assert_eq!(median(&v).unwrap(), 2.5);
        assert!(quantile(&[], 0.5).is_err());
    }

    #[test]
    fn survival_is_step() {
        let s = survival(&[2.0; 10], &[1.0, 2.0, 3.0]).unwrap();
        let p: Vec<f64> = s.iter().map(|x| x.probability).collect();
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0];
        let y = [3.0, 5.0, 7.0];
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
        let g = log_log_fit(&[1.0, 2.0, 4.0], &[1.0, 4.0, 16.0]).unwrap();
        assert!((g.slope - 2.0).abs() < 1e-14);
    }

    #[test]
    fn chi_square_quantile() {
        assert!((chi_square_critical(1, 0.05).unwrap() - 3.841_458_820_694_124).abs() < 1e-9);
    }

    #[test]
    fn bonferroni_caps_at_one() {
        assert_eq!(bonferroni(&[0.001, 0.5]), vec![0.002, 1.0]);
    }
}
