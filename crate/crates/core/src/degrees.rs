//! Degrees of faces: the number of `(d+1)`-faces containing a `d`-face.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ProbabilityVector, Simplex, SimplicialComplex};
use crate::numeric::{binomial_big, binomial_u64, ln_binomial, rational_pow};
use crate::phase::{classify, degree_scale, expected_fd, expected_fd_exact, ExponentVector};

const PARALLEL_FACES: usize = 1 << 13;

/// Number of cofacets of `σ` in `Y`.
pub fn degree(y: &SimplicialComplex, sigma: &Simplex) -> Result<u64> {
    if !y.contains(sigma) {
        return Err(Error::Domain(format!("{sigma:?} is not a face of the complex")));
    }
    let d = sigma.dim();
    if d >= y.r() {
        return Ok(0);
    }
    Ok(y
        .vertex_ids()
        .into_iter()
        .filter(|&w| !sigma.contains_vertex(w) && y.contains(&sigma.with_vertex(w)))
        .count() as u64)
}

/// Sparse `s ↦ f_{d,s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHistogram {
    pub d: usize,
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl DegreeHistogram {
    pub fn count(&self, s: u64) -> u64 {
        self.counts.get(&s).copied().unwrap_or(0)
    }
}

/// Degree of every `d`-face, in the lexicographic order of `Y.faces(d)`.
pub fn degrees(y: &SimplicialComplex, d: usize) -> Result<Vec<u64>> {
    if d >= y.r() {
        return Err(Error::InvalidParameter(format!(
            "degrees of {d}-faces need d < r = {}",
            y.r()
        )));
    }
    let cofaces = y.faces(d + 1);
    let tally = |acc: Vec<u64>, rho: &Simplex| -> Vec<u64> {
        let mut acc = acc;
        for (f, _) in rho.facets() {
            acc[y.index_of(&f).expect("down-closed")] += 1;
        }
        acc
    };
    let zero = || vec![0u64; y.num_faces(d)];
    if cofaces.len() >= PARALLEL_FACES {
        Ok(cofaces
            .par_iter()
            .fold(zero, tally)
            .reduce(zero, |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            }))
    } else {
        Ok(cofaces.iter().fold(zero(), tally))
    }
}

pub fn degree_histogram(y: &SimplicialComplex, d: usize) -> Result<DegreeHistogram> {
    let degs = degrees(y, d)?;
    let mut counts = BTreeMap::new();
    for s in &degs {
        *counts.entry(*s).or_insert(0) += 1;
    }
    Ok(DegreeHistogram {
        d,
        counts,
        total: degs.len() as u64,
    })
}

/// `Λ_{d,s}(α) = C(n−d−1, s) λ^s (1−λ)^{n−d−s−1}` with `λ = n^{−ψ_{d+1}(α)}`.
pub fn lambda_ds(n: u64, d: usize, s: u64, alpha: &ExponentVector) -> Result<f64> {
    let lambda = degree_scale(n, d, alpha)?.lambda;
    let m = n.saturating_sub(d as u64 + 1);
    if s > m {
        return Ok(0.0);
    }
    if lambda >= 1.0 {
        return Ok(if s == m { 1.0 } else { 0.0 });
    }
    if lambda <= 0.0 {
        return Ok(if s == 0 { 1.0 } else { 0.0 });
    }
    let ln = ln_binomial(m, s) + s as f64 * lambda.ln() + (m - s) as f64 * (-lambda).ln_1p();
    Ok(ln.exp())
}

/// `E(f_{d,s}) = Λ_{d,s}(α) · E(f_d)`.
pub fn expected_fds(n: u64, d: usize, s: u64, alpha: &ExponentVector) -> Result<f64> {
    Ok(lambda_ds(n, d, s, alpha)? * expected_fd(n, d, alpha).expectation)
}

/// Exact `E(f_{d,s})` for rational `p`, where a vertex `v` extends a given
/// `d`-face with probability `λ = ∏_{i ≤ d+1} p_i^{C(d+1, i)}`.
pub fn expected_fds_exact(n: u64, d: usize, s: u64, p: &ProbabilityVector) -> Result<BigRational> {
    if d + 1 > p.r() {
        return Err(Error::Precondition(format!("need d + 1 <= r = {}", p.r())));
    }
    let m = n.saturating_sub(d as u64 + 1);
    if s > m {
        return Ok(BigRational::zero());
    }
    let mut lambda = BigRational::one();
    for i in 0..=d + 1 {
        lambda *= rational_pow(p.p(i), binomial_u64(d as u64 + 1, i as u64).unwrap());
    }
    let weight = BigRational::from_integer(BigInt::from(binomial_big(m, s)))
        * rational_pow(&lambda, s)
        * rational_pow(&(BigRational::one() - &lambda), m - s);
    Ok(weight * expected_fd_exact(n, d, p)?)
}

/// Out-of-band count of `d`-face degrees relative to `μ = n^{1−ψ_{d+1}}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub d: usize,
    pub delta: f64,
    pub mu: f64,
    pub mu_prime: f64,
    pub faces: u64,
    pub out_of_band: u64,
    pub fraction_out_of_band: Option<f64>,
}

pub fn concentration_report(
    y: &SimplicialComplex,
    d: usize,
    delta: f64,
    alpha: &ExponentVector,
) -> Result<ConcentrationReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must lie in (0, 1)")));
    }
    let domain = classify(alpha, crate::phase::DEFAULT_BOUNDARY_TOLERANCE);
    match domain.critical_dimension() {
        Some(k) if (d as i32) < k => {}
        _ => {
            return Err(Error::Precondition(format!(
                "degree concentration needs d below the critical dimension; d = {d}, domain {}",
                domain.label()
            )))
        }
    }
    let scale = degree_scale(u64::from(y.n()), d, alpha)?;
    let degs = degrees(y, d)?;
    let out = degs
        .iter()
        .filter(|&&s| (s as f64 - scale.mu).abs() > delta * scale.mu)
        .count() as u64;
    Ok(ConcentrationReport {
        d,
        delta,
        mu: scale.mu,
        mu_prime: scale.mu_prime,
        faces: degs.len() as u64,
        out_of_band: out,
        fraction_out_of_band: (!degs.is_empty()).then(|| out as f64 / degs.len() as f64),
    })
}

/// `f_{d,0} / f_d`, or `None` when `f_d = 0`.
pub fn isolated_fraction(y: &SimplicialComplex, d: usize) -> Result<Option<f64>> {
    let h = degree_histogram(y, d)?;
    Ok((h.total > 0).then(|| h.count(0) as f64 / h.total as f64))
}

/// Whether `Y^{(k)}` is pure: `f_{d,0}(Y^{(k)}) = 0` for every `d < dim Y^{(k)}`.
pub fn purity_check(y: &SimplicialComplex, k: usize) -> bool {
    let sk = y.skeleton(k.min(y.r()));
    let Some(top) = sk.dim() else {
        return true;
    };
    (0..top).all(|d| degrees(&sk, d).expect("d < dim <= r").iter().all(|&s| s > 0))
}
