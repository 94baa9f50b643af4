//! Welch's t-test and Cohen's d.
//!
//! p-values are evaluated in-repo through the regularized incomplete beta
//! function (Lentz continued fraction) rather than an external statistics
//! dependency; accuracy is checked against tabulated critical values.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatError {
    #[error("each sample needs at least two observations")]
    TooFewSamples,
    #[error("degenerate sample: zero pooled variance")]
    DegenerateSample,
}

/// Two-sample comparison report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatReport {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
    pub cohens_d: f64,
    /// Set when both samples had zero variance and the report was
    /// short-circuited (t = 0, p = 1 for equal means; p -> 0 otherwise).
    pub degenerate: bool,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

// Lanczos approximation, g = 7, n = 9.
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

// Continued fraction for the incomplete beta function (Lentz's method).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta I_x(a, b).
fn beta_inc(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Two-sided p-value for a t statistic with `df` degrees of freedom.
pub fn student_t_p_value(t: f64, df: f64) -> f64 {
    t_two_sided_p(t, df)
}

fn t_two_sided_p(t: f64, df: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    beta_inc(df / 2.0, 0.5, df / (df + t * t))
}

/// Welch's unequal-variance t-test, two-sided.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<StatReport, StatError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(StatError::TooFewSamples);
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (variance(a), variance(b));
    if va == 0.0 && vb == 0.0 {
        // Degenerate: no variance anywhere.
        return Ok(if ma == mb {
            StatReport {
                t_statistic: 0.0,
                degrees_of_freedom: na + nb - 2.0,
                p_value: 1.0,
                cohens_d: 0.0,
                degenerate: true,
            }
        } else {
            StatReport {
                t_statistic: if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY },
                degrees_of_freedom: na + nb - 2.0,
                p_value: 0.0,
                cohens_d: if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY },
                degenerate: true,
            }
        });
    }
    let sa = va / na;
    let sb = vb / nb;
    let t = (ma - mb) / (sa + sb).sqrt();
    // Welch-Satterthwaite degrees of freedom.
    let df = (sa + sb).powi(2) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p = t_two_sided_p(t, df);
    let d = cohens_d(a, b).unwrap_or(0.0);
    Ok(StatReport {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: p,
        cohens_d: d,
        degenerate: false,
    })
}

/// Cohen's d with the pooled standard deviation.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64, StatError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(StatError::TooFewSamples);
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled =
        (((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / (na + nb - 2.0)).sqrt();
    if pooled == 0.0 {
        return Err(StatError::DegenerateSample);
    }
    Ok((mean(a) - mean(b)) / pooled)
}

/// Magnitude band by nearest conventional anchor (0.2 small, 0.5 medium,
/// 0.8 large), so a d of 0.44 reads as a medium effect.
pub fn effect_size_band(d: f64) -> &'static str {
    let m = d.abs();
    if m < 0.2 {
        "negligible"
    } else if m < 0.35 {
        "small"
    } else if m < 0.65 {
        "medium"
    } else {
        "large"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: two-sided t p-value via Simpson quadrature of
    /// the t density, written against the formula rather than the
    /// incomplete-beta route above.
    fn p_by_quadrature(t: f64, df: f64) -> f64 {
        let norm = (ln_gamma((df + 1.0) / 2.0)
            - ln_gamma(df / 2.0)
            - 0.5 * (df * std::f64::consts::PI).ln())
        .exp();
        let pdf = |x: f64| norm * (1.0 + x * x / df).powf(-(df + 1.0) / 2.0);
        // Integrate the finite body [0, |t|]; the two-sided p is then
        // 1 - 2 * body, avoiding any tail truncation.
        let b = t.abs();
        let n = 400_000;
        let h = b / n as f64;
        let mut sum = pdf(0.0) + pdf(b);
        for i in 1..n {
            let x = i as f64 * h;
            sum += if i % 2 == 1 { 4.0 } else { 2.0 } * pdf(x);
        }
        let body = sum * h / 3.0;
        1.0 - 2.0 * body
    }

    #[test]
    fn identical_samples_give_t_zero_p_one() {
        let a = [0.3, 0.5, 0.7, 0.9];
        let report = welch_t_test(&a, &a).unwrap();
        assert_eq!(report.t_statistic, 0.0);
        assert!((report.p_value - 1.0).abs() < 1e-12);
        assert_eq!(report.cohens_d, 0.0);
    }

    #[test]
    fn separated_samples_are_significant() {
        let report = welch_t_test(&[0.0, 2.0], &[10.0, 12.0]).unwrap();
        assert!(report.t_statistic.abs() > 2.0);
        assert!(report.p_value < 0.05);
    }

    #[test]
    fn hand_computed_welch_fixture() {
        // a = [1,2,3,4], b = [2,3,4,5]: t = -1/sqrt(5/6), df = 6.
        let report = welch_t_test(&[1.0, 2.0, 3.0, 4.0], &[2.0, 3.0, 4.0, 5.0]).unwrap();
        let t_expected = -1.0 / (5.0f64 / 6.0).sqrt();
        assert!((report.t_statistic - t_expected).abs() < 1e-12);
        assert!((report.degrees_of_freedom - 6.0).abs() < 1e-12);
        let p_oracle = p_by_quadrature(t_expected, 6.0);
        assert!(
            (report.p_value - p_oracle).abs() < 1e-8,
            "{} vs {}",
            report.p_value,
            p_oracle
        );
    }

    #[test]
    fn tabulated_critical_value_df10() {
        // Two-sided p = 0.05 at t = 2.228 for 10 degrees of freedom.
        let p = t_two_sided_p(2.228, 10.0);
        assert!((p - 0.05).abs() < 1e-3, "{p}");
    }

    #[test]
    fn p_matches_quadrature_oracle_across_range() {
        for (t, df) in [(0.5, 3.0), (1.5, 8.0), (2.5, 20.0), (4.0, 2.0)] {
            let p = t_two_sided_p(t, df);
            let oracle = p_by_quadrature(t, df);
            assert!((p - oracle).abs() < 1e-8, "t={t} df={df}: {p} vs {oracle}");
        }
    }

    #[test]
    fn swap_flips_sign_and_keeps_p() {
        let a = [1.0, 2.0, 3.0, 4.5];
        let b = [2.0, 2.5, 4.0, 5.5];
        let fwd = welch_t_test(&a, &b).unwrap();
        let rev = welch_t_test(&b, &a).unwrap();
        assert!((fwd.t_statistic + rev.t_statistic).abs() < 1e-12);
        assert!((fwd.p_value - rev.p_value).abs() < 1e-12);
        assert!((fwd.cohens_d + rev.cohens_d).abs() < 1e-12);
    }

    #[test]
    fn cohens_d_hand_fixture() {
        // a = [0,2], b = [1,3]: pooled sd = sqrt(2), d = -1/sqrt(2).
        let d = cohens_d(&[0.0, 2.0], &[1.0, 3.0]).unwrap();
        assert!((d - (-1.0 / 2.0f64.sqrt())).abs() < 1e-9);
        assert!((d + 0.70710678).abs() < 1e-8);
    }

    #[test]
    fn degenerate_cases() {
        let report = welch_t_test(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert!(report.degenerate);
        assert_eq!(report.p_value, 1.0);
        let report = welch_t_test(&[1.0, 1.0], &[2.0, 2.0]).unwrap();
        assert!(report.degenerate);
        assert_eq!(report.p_value, 0.0);
        assert_eq!(
            cohens_d(&[1.0, 1.0], &[1.0, 1.0]).unwrap_err(),
            StatError::DegenerateSample
        );
    }

    #[test]
    fn effect_size_bands() {
        assert_eq!(effect_size_band(0.1), "negligible");
        assert_eq!(effect_size_band(0.25), "small");
        assert_eq!(effect_size_band(0.44), "medium");
        assert_eq!(effect_size_band(-0.44), "medium");
        assert_eq!(effect_size_band(0.9), "large");
    }
}
