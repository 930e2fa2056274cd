use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{psi, tau, ExponentVector};
use crate::error::{Error, Result};
use crate::model::ProbabilityVector;
use crate::numeric::{binomial_big, binomial_u64, factorial_f64, ln_binomial, rational_pow};

/// `E(f_d)` together with its sandwich `(1 − d²/n)·B ≤ E(f_d) ≤ B`,
/// where `B = n^{τ_d(α)} / (d+1)!`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FdExpectation {
    pub expectation: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `E(f_d) = C(n, d+1) · n^{τ_d(α) − (d+1)}`.
pub fn expected_fd(n: u64, d: usize, alpha: &ExponentVector) -> FdExpectation {
    let ln_n = (n as f64).ln();
    let t = tau(d, alpha);
    let expectation = (ln_binomial(n, d as u64 + 1) + (t - (d as f64 + 1.0)) * ln_n).exp();
    let upper = (t * ln_n).exp() / factorial_f64(d + 1);
    let lower = (1.0 - (d * d) as f64 / n as f64) * upper;
    FdExpectation {
        expectation,
        lower,
        upper,
    }
}

/// `E(f_d) = C(n, d+1) ∏_{i ≤ d} p_i^{C(d+1, i+1)}`, exactly.
pub fn expected_fd_exact(n: u64, d: usize, p: &ProbabilityVector) -> Result<BigRational> {
    check_d(d, p.r())?;
    let mut acc = BigRational::from_integer(BigInt::from(binomial_big(n, d as u64 + 1)));
    for i in 0..=d {
        acc *= rational_pow(p.p(i), binomial_u64(d as u64 + 1, i as u64 + 1).unwrap());
    }
    Ok(acc)
}

/// Exponent of `p_i` in `P(σ ∪ τ ⊂ Y)` for two `d`-simplices sharing `j` vertices.
fn pair_exponent(d: usize, j: usize, i: usize) -> u64 {
    let d1 = d as u64 + 1;
    2 * binomial_u64(d1, i as u64 + 1).unwrap() - binomial_u64(j as u64, i as u64 + 1).unwrap()
}

/// `E(f_d²) = Σ_j C(n, d+1) C(d+1, j) C(n−d−1, d+1−j) ∏_i p_i^{2C(d+1,i+1) − C(j,i+1)}`,
/// summed in log space.
pub fn second_moment_fd(n: u64, d: usize, alpha: &ExponentVector) -> f64 {
    let ln_n = (n as f64).ln();
    let d1 = d as u64 + 1;
    let terms: Vec<f64> = (0..=d1)
        .filter(|&j| n >= d1 && n - d1 >= d1 - j)
        .map(|j| {
            let ln_count = ln_binomial(n, d1) + ln_binomial(d1, j) + ln_binomial(n - d1, d1 - j);
            let ln_prob: f64 = (0..=d)
                .map(|i| -(pair_exponent(d, j as usize, i) as f64) * alpha.get(i as i64) * ln_n)
                .sum();
            ln_count + ln_prob
        })
        .collect();
    log_sum_exp(&terms).exp()
}

/// Exact `E(f_d²)` for rational `p`.
pub fn second_moment_fd_exact(n: u64, d: usize, p: &ProbabilityVector) -> Result<BigRational> {
    check_d(d, p.r())?;
    let d1 = d as u64 + 1;
    let mut total = BigRational::zero();
    if n < d1 {
        return Ok(total);
    }
    for j in 0..=d1 {
        if n - d1 < d1 - j {
            continue;
        }
        let count = binomial_big(n, d1) * binomial_big(d1, j) * binomial_big(n - d1, d1 - j);
        let mut term = BigRational::from_integer(BigInt::from(count));
        for i in 0..=d {
            term *= rational_pow(p.p(i), pair_exponent(d, j as usize, i));
        }
        total += term;
    }
    Ok(total)
}

/// `Var(f_d) / E(f_d)²`.
pub fn variance_ratio(n: u64, d: usize, alpha: &ExponentVector) -> f64 {
    let m1 = expected_fd(n, d, alpha).expectation;
    second_moment_fd(n, d, alpha) / (m1 * m1) - 1.0
}

/// The band `(1 ± t) · n^{τ_d(α)} / (d+1)!` for the observed `f_d`.
pub fn face_count_band(n: u64, d: usize, alpha: &ExponentVector, t: f64) -> (f64, f64) {
    let centre = ((n as f64).ln() * tau(d, alpha)).exp() / factorial_f64(d + 1);
    ((1.0 - t) * centre, (1.0 + t) * centre)
}

/// Asymptotic regime of `f_d` by the sign of `τ_d(α_*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum FaceRegime {
    /// `τ_d < 0`: `f_d = 0` a.a.s.
    Vanishing,
    /// `τ_d = 0`: `f_d < n^{slack_exponent}` for every `slack_exponent > 0`.
    Subpolynomial,
    /// `τ_d > 0`: concentration around `n^{τ_d}/(d+1)!` at rate `δ_d`.
    Concentrated { delta: f64 },
}

pub fn face_regime(d: usize, alpha: &ExponentVector, tolerance: f64) -> FaceRegime {
    let t = tau(d, alpha);
    if t.abs() <= tolerance {
        FaceRegime::Subpolynomial
    } else if t < 0.0 {
        FaceRegime::Vanishing
    } else {
        FaceRegime::Concentrated {
            delta: tau(0, alpha).min(t),
        }
    }
}

/// Degree scale of `d`-faces: `λ = n^{−ψ_{d+1}}`, `μ = n·λ`, `μ′ = (n−d−1)·λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeScale {
    pub lambda: f64,
    pub mu: f64,
    pub mu_prime: f64,
}

pub fn degree_scale(n: u64, d: usize, alpha: &ExponentVector) -> Result<DegreeScale> {
    if d + 1 > alpha.r() {
        return Err(Error::Precondition(format!(
            "degree scale of {d}-faces needs d + 1 <= r = {}",
            alpha.r()
        )));
    }
    let lambda = (-(n as f64).ln() * psi(d + 1, alpha)).exp();
    Ok(DegreeScale {
        lambda,
        mu: n as f64 * lambda,
        mu_prime: (n as f64 - d as f64 - 1.0) * lambda,
    })
}

fn check_d(d: usize, r: usize) -> Result<()> {
    if d > r {
        return Err(Error::InvalidParameter(format!("dimension {d} exceeds r = {r}")));
    }
    Ok(())
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_diff;

    fn a(v: &[f64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn expectation_examples() {
        let z = ExponentVector::zeros(2);
        assert!(rel_diff(expected_fd(7, 2, &z).expectation, 35.0) < 1e-12);
        let e = expected_fd(5, 1, &a(&[0.0, 1.0, 0.0]));
        assert!(rel_diff(e.expectation, 2.0) < 1e-12);
    }

    #[test]
    fn sandwich_holds() {
        let al = a(&[0.1, 0.3, 0.2]);
        for n in [50u64, 500, 5000] {
            for d in 0..=2 {
                let e = expected_fd(n, d, &al);
                assert!(e.lower <= e.expectation * (1.0 + 1e-12));
                assert!(e.expectation <= e.upper * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn deterministic_second_moment() {
        let z = ExponentVector::zeros(2);
        for d in 0..=2 {
            let c = binomial_u64(9, d as u64 + 1).unwrap() as f64;
            assert!(rel_diff(second_moment_fd(9, d, &z), c * c) < 1e-12);
        }
    }

    #[test]
    fn float_and_exact_moments_agree() {
        // α chosen so that p_i = n^{−α_i} are exact dyadic values at n = 4
        let al = a(&[0.5, 1.0, 0.0]);
        let p = ProbabilityVector::from_ratios(&[(1, 2), (1, 4), (1, 1)]).unwrap();
        for d in 0..=2 {
            let ex = crate::numeric::rational_to_f64(&expected_fd_exact(4, d, &p).unwrap());
            assert!(rel_diff(expected_fd(4, d, &al).expectation, ex) < 1e-12);
            let sx = crate::numeric::rational_to_f64(&second_moment_fd_exact(4, d, &p).unwrap());
            assert!(rel_diff(second_moment_fd(4, d, &al), sx) < 1e-12);
        }
    }

    #[test]
    fn variance_ratio_shrinks_with_n() {
        let al = a(&[0.1, 0.4, 0.2]);
        let ratios: Vec<f64> = [100u64, 1000, 10_000].iter().map(|&n| variance_ratio(n, 1, &al)).collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    }

    #[test]
    fn degree_scale_examples() {
        let z = ExponentVector::zeros(2);
        let s = degree_scale(30, 0, &z).unwrap();
        assert_eq!((s.lambda, s.mu, s.mu_prime), (1.0, 30.0, 29.0));
        let s = degree_scale(100, 0, &a(&[0.0, 0.5])).unwrap();
        assert!(rel_diff(s.mu, 10.0) < 1e-12);
        assert!(degree_scale(100, 1, &a(&[0.0, 0.5])).is_err());
    }

    #[test]
    fn regimes() {
        let al = a(&[0.5, 2.5]);
        assert_eq!(face_regime(1, &al, 1e-9), FaceRegime::Vanishing);
        assert!(matches!(face_regime(0, &al, 1e-9), FaceRegime::Concentrated { .. }));
        assert_eq!(face_regime(0, &a(&[1.0]), 1e-9), FaceRegime::Subpolynomial);
    }
}
