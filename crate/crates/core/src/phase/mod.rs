//! Closed-form phase functions of the exponent vector `α` and the
//! classification of `α` into critical-dimension domains `D_k`.
//!
//! With `p_i = n^{−α_i}`, the linear forms
//!
//! ```text
//! ψ_k(α) = Σ_i C(k, i) α_i
//! τ_k(α) = Σ_{i ≤ k} (1 − ψ_i(α))
//! φ_k(α) = Σ_i C(k, i) α_i / (i + 1)
//! ```
//!
//! govern the face numbers and Betti numbers of the random complex. The
//! hyperplanes `H_i = {ψ_i = 1}` separate the open domains
//! `D_k = {ψ_k < 1 < ψ_{k+1}}`, with `D_{−1} = {ψ_0 > 1}` and
//! `D_r = {ψ_r < 1}`.

mod moments;
mod slice;

pub use moments::{
    degree_scale, expected_fd, expected_fd_exact, face_count_band, face_regime, second_moment_fd,
    second_moment_fd_exact, variance_ratio, DegreeScale, FaceRegime, FdExpectation,
};
pub use slice::{phase_slice, slice_to_csv, SliceRow, SliceSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::binomial_f64;

/// Default half-width around each `H_i` reported as `OnBoundary`.
pub const DEFAULT_BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Exponents `α = (α_0, …, α_r)`, all finite and non-negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExponentVector(Vec<f64>);

impl ExponentVector {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParameter("exponent vector is empty".into()));
        }
        if let Some((i, a)) = alpha.iter().enumerate().find(|(_, a)| !a.is_finite() || **a < 0.0) {
            return Err(Error::InvalidParameter(format!("alpha_{i} = {a} must be finite and >= 0")));
        }
        Ok(ExponentVector(alpha))
    }

    pub fn zeros(r: usize) -> Self {
        ExponentVector(vec![0.0; r + 1])
    }

    pub fn r(&self) -> usize {
        self.0.len() - 1
    }

    /// `α_i`, with `α_i = 0` outside `0..=r`.
    pub fn get(&self, i: i64) -> f64 {
        if i < 0 {
            0.0
        } else {
            self.0.get(i as usize).copied().unwrap_or(0.0)
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `p_i = exp(−α_i ln n)` clamped to `[0, 1]`; all ones for `n ≤ 1`.
    pub fn probabilities(&self, n: u64) -> Vec<f64> {
        if n <= 1 {
            return vec![1.0; self.0.len()];
        }
        let ln_n = (n as f64).ln();
        self.0.iter().map(|a| (-a * ln_n).exp().clamp(0.0, 1.0)).collect()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }
}

impl TryFrom<Vec<f64>> for ExponentVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        ExponentVector::new(v)
    }
}

impl From<ExponentVector> for Vec<f64> {
    fn from(a: ExponentVector) -> Self {
        a.0
    }
}

/// `ψ_k(α) = Σ_{i=0}^{r} C(k, i) α_i` with `C(k, i) = 0` for `i > k`.
pub fn psi(k: usize, alpha: &ExponentVector) -> f64 {
    (0..=k.min(alpha.r()))
        .map(|i| binomial_f64(k, i) * alpha.get(i as i64))
        .sum()
}

/// `τ_k(α) = Σ_{i=0}^{k} [1 − ψ_i(α)]`.
pub fn tau(k: usize, alpha: &ExponentVector) -> f64 {
    (0..=k).map(|i| 1.0 - psi(i, alpha)).sum()
}

/// `φ_k(α) = Σ_i C(k, i) α_i / (i + 1)`.
pub fn phi(k: usize, alpha: &ExponentVector) -> f64 {
    (0..=k.min(alpha.r()))
        .map(|i| binomial_f64(k, i) * alpha.get(i as i64) / (i as f64 + 1.0))
        .sum()
}

/// `γ_j(k, α) = Σ_{i=j−1}^{k} C(k−j+1, i−j+1) α_i` with `α_{−1} = 0`.
pub fn gamma(j: usize, k: usize, alpha: &ExponentVector) -> Result<f64> {
    if j > k + 1 {
        return Err(Error::InvalidParameter(format!("gamma index j = {j} exceeds k + 1 = {}", k + 1)));
    }
    let top = (k + 1 - j) as i64;
    Ok((j as i64 - 1..=k as i64)
        .map(|i| crate::numeric::binomial_i64(top, i - j as i64 + 1) as f64 * alpha.get(i))
        .sum())
}

/// Location of `α` in the phase diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Domain {
    /// `α ∈ D_k`, `k ∈ {−1, …, r}`.
    Critical(i32),
    /// `|ψ_i(α) − 1| ≤ tolerance`.
    OnBoundary(usize),
}

impl Domain {
    pub fn critical_dimension(self) -> Option<i32> {
        match self {
            Domain::Critical(k) => Some(k),
            Domain::OnBoundary(_) => None,
        }
    }

    /// `"k"` for a domain, `"H<i>"` for a boundary point.
    pub fn label(self) -> String {
        match self {
            Domain::Critical(k) => k.to_string(),
            Domain::OnBoundary(i) => format!("H{i}"),
        }
    }
}

/// The domain containing `α`. Points within `tolerance` of some `H_i`
/// report the smallest such `i`.
pub fn classify(alpha: &ExponentVector, tolerance: f64) -> Domain {
    let psis: Vec<f64> = (0..=alpha.r()).map(|k| psi(k, alpha)).collect();
    if let Some(i) = psis.iter().position(|p| (p - 1.0).abs() <= tolerance) {
        return Domain::OnBoundary(i);
    }
    // ψ is non-decreasing in k, so the last index below 1 is the critical one
    match psis.iter().rposition(|&p| p < 1.0) {
        Some(k) => Domain::Critical(k as i32),
        None => Domain::Critical(-1),
    }
}

/// `e(α) = min_s |1 − ψ_s(α)|`.
pub fn e_margin(alpha: &ExponentVector) -> f64 {
    (0..=alpha.r())
        .map(|s| (1.0 - psi(s, alpha)).abs())
        .fold(f64::INFINITY, f64::min)
}

/// `δ_d(α) = min{τ_0(α), τ_d(α)}` when `τ_d(α) > 0`.
pub fn delta(d: usize, alpha: &ExponentVector) -> Option<f64> {
    let td = tau(d, alpha);
    (td > 0.0).then(|| tau(0, alpha).min(td))
}

/// The two halves of `D_2` separated by `α_0 + 3α_1 + 2α_2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum D2Subdomain {
    SimplyConnected,
    PerfectNontrivial,
    OnBoundary,
}

pub fn d2_subdomain(alpha: &ExponentVector, tolerance: f64) -> Result<D2Subdomain> {
    let domain = classify(alpha, tolerance);
    if domain != Domain::Critical(2) {
        return Err(Error::Domain(format!("alpha lies in {domain:?}, not D_2")));
    }
    let split = alpha.get(0) + 3.0 * alpha.get(1) + 2.0 * alpha.get(2);
    Ok(if (split - 1.0).abs() <= tolerance {
        D2Subdomain::OnBoundary
    } else if split < 1.0 {
        D2Subdomain::SimplyConnected
    } else {
        D2Subdomain::PerfectNontrivial
    })
}

/// Everything derivable from `α` alone.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseReport {
    pub r: usize,
    pub alpha: Vec<f64>,
    pub psi: Vec<f64>,
    pub tau: Vec<f64>,
    pub phi: Vec<f64>,
    pub domain: Domain,
    pub critical_dimension: Option<i32>,
    pub e_margin: f64,
    pub delta: Vec<Option<f64>>,
    pub d2_subdomain: Option<D2Subdomain>,
    pub tolerance: f64,
}

impl PhaseReport {
    pub fn new(alpha: &ExponentVector, tolerance: f64) -> Self {
        let r = alpha.r();
        let domain = classify(alpha, tolerance);
        PhaseReport {
            r,
            alpha: alpha.as_slice().to_vec(),
            psi: (0..=r).map(|k| psi(k, alpha)).collect(),
            tau: (0..=r).map(|k| tau(k, alpha)).collect(),
            phi: (0..=r).map(|k| phi(k, alpha)).collect(),
            domain,
            critical_dimension: domain.critical_dimension(),
            e_margin: e_margin(alpha),
            delta: (0..=r).map(|d| delta(d, alpha)).collect(),
            d2_subdomain: d2_subdomain(alpha, tolerance).ok(),
            tolerance,
        }
    }
}

/// `α` as a constant or as a table `n ↦ α(n)`; the last entry plays the
/// role of the limit `α_*` for classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSchedule {
    Constant(ExponentVector),
    Tabulated(Vec<(u64, ExponentVector)>),
}

impl AlphaSchedule {
    pub fn validate(&self) -> Result<()> {
        if let AlphaSchedule::Tabulated(rows) = self {
            if rows.is_empty() {
                return Err(Error::InvalidParameter("alpha schedule is empty".into()));
            }
            if rows.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::InvalidParameter("alpha schedule n values must increase".into()));
            }
            let r = rows[0].1.r();
            if rows.iter().any(|(_, a)| a.r() != r) {
                return Err(Error::InvalidParameter("alpha schedule rows differ in length".into()));
            }
        }
        Ok(())
    }

    /// `α(n)`: the last row with `n_i ≤ n`, or the first row below the table.
    pub fn at(&self, n: u64) -> &ExponentVector {
        match self {
            AlphaSchedule::Constant(a) => a,
            AlphaSchedule::Tabulated(rows) => {
                let idx = rows.partition_point(|(m, _)| *m <= n);
                &rows[idx.saturating_sub(1)].1
            }
        }
    }

    pub fn terminal(&self) -> &ExponentVector {
        match self {
            AlphaSchedule::Constant(a) => a,
            AlphaSchedule::Tabulated(rows) => &rows.last().expect("validated nonempty").1,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, AlphaSchedule::Constant(_))
    }

    pub fn r(&self) -> usize {
        self.terminal().r()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(v: &[f64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(2, &a(&[0.0, 0.0, 1.5])), 1.5);
        let z = ExponentVector::zeros(4);
        assert!((0..=4).all(|k| psi(k, &z) == 0.0));
        assert_eq!(psi(3, &a(&[0.1, 0.2, 0.3, 0.4])), 0.1 + 3.0 * 0.2 + 3.0 * 0.3 + 0.4);
    }

    #[test]
    fn tau_and_phi_examples() {
        let z = ExponentVector::zeros(3);
        assert!((0..=3).all(|k| tau(k, &z) == k as f64 + 1.0));
        assert_eq!(phi(2, &a(&[0.0, 0.0, 1.5])), 0.5);
        assert_eq!(phi(1, &z), 0.0);
        let neg = a(&[1.2, 0.3, 0.0]);
        assert!((0..=2).all(|k| tau(k, &neg) < 0.0));
    }

    #[test]
    fn gamma_specialisations() {
        let al = a(&[0.3, 0.7, 0.2, 0.9]);
        let k = 3;
        assert!((gamma(0, k, &al).unwrap() - (k as f64 + 1.0) * phi(k, &al)).abs() < 1e-12);
        assert!((gamma(1, k, &al).unwrap() - psi(k, &al)).abs() < 1e-12);
        assert!((gamma(k, k, &al).unwrap() - (al.get(2) + al.get(3))).abs() < 1e-12);
        assert_eq!(gamma(k + 1, k, &al).unwrap(), al.get(3));
        assert!(gamma(k + 2, k, &al).is_err());
        assert!((0..=3).all(|j| gamma(j, 2, &ExponentVector::zeros(2)).unwrap() == 0.0));
    }

    #[test]
    fn classify_examples() {
        let tol = DEFAULT_BOUNDARY_TOLERANCE;
        assert_eq!(classify(&a(&[0.0, 0.6, 0.0, 0.0]), tol), Domain::Critical(1));
        assert_eq!(classify(&a(&[1.5, 0.0, 0.0]), tol), Domain::Critical(-1));
        let lm = a(&[0.0, 0.0, 1.5, 0.0]);
        assert_eq!(classify(&lm, tol), Domain::Critical(1));
        assert_eq!(e_margin(&lm), 0.5);
        assert_eq!(classify(&ExponentVector::zeros(3), tol), Domain::Critical(3));
        assert_eq!(classify(&a(&[0.0, 1.0, 0.0]), tol), Domain::OnBoundary(1));
        assert_eq!(classify(&a(&[0.0, 0.5, 0.0]), tol), Domain::OnBoundary(2));
    }

    #[test]
    fn d2_subdomains() {
        let tol = DEFAULT_BOUNDARY_TOLERANCE;
        // ψ_2 = 0.4, ψ_3 = 1.2 + α_3
        let al = a(&[0.0, 0.0, 0.4, 0.1]);
        assert_eq!(classify(&al, tol), Domain::Critical(2));
        assert_eq!(d2_subdomain(&al, tol).unwrap(), D2Subdomain::SimplyConnected);
        // α_1 = α_2 = 0 reduces to comparisons of α_0
        assert!(d2_subdomain(&a(&[0.5, 0.0, 0.0, 0.0]), tol).is_err());
        // α_0 + 3α_1 + 2α_2 = 1 exactly
        assert_eq!(d2_subdomain(&a(&[0.0, 0.2, 0.2, 0.5]), tol).unwrap(), D2Subdomain::OnBoundary);
        let pn = a(&[0.0, 0.25, 0.3, 0.5]);
        assert_eq!(classify(&pn, tol), Domain::Critical(2));
        assert_eq!(d2_subdomain(&pn, tol).unwrap(), D2Subdomain::PerfectNontrivial);
        assert!(d2_subdomain(&a(&[0.0, 0.6, 0.0, 0.0]), tol).is_err());
    }

    #[test]
    fn report_fields() {
        let rep = PhaseReport::new(&a(&[0.0, 0.0, 1.5, 0.0]), DEFAULT_BOUNDARY_TOLERANCE);
        assert_eq!(rep.critical_dimension, Some(1));
        assert_eq!(rep.psi, vec![0.0, 0.0, 1.5, 4.5]);
        assert_eq!(rep.tau, vec![1.0, 2.0, 1.5, -2.0]);
        assert_eq!(rep.delta[1], Some(1.0));
        assert_eq!(rep.delta[3], None);
        assert!(rep.d2_subdomain.is_none());
    }

    #[test]
    fn schedule_lookup() {
        let s = AlphaSchedule::Tabulated(vec![(10, a(&[0.1, 0.2])), (100, a(&[0.3, 0.4]))]);
        s.validate().unwrap();
        assert_eq!(s.at(5).get(0), 0.1);
        assert_eq!(s.at(50).get(0), 0.1);
        assert_eq!(s.at(100).get(0), 0.3);
        assert_eq!(s.terminal().get(1), 0.4);
        let bad = AlphaSchedule::Tabulated(vec![(10, a(&[0.1])), (10, a(&[0.2]))]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn probabilities_from_exponents() {
        let p = a(&[0.0, 0.5, 1.0]).probabilities(100);
        assert_eq!(p[0], 1.0);
        assert!((p[1] - 0.1).abs() < 1e-15);
        assert!((p[2] - 0.01).abs() < 1e-16);
        assert!(ExponentVector::new(vec![-0.1]).is_err());
        assert!(ExponentVector::new(vec![f64::NAN]).is_err());
    }
}
