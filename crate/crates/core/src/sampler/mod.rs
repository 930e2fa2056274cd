//! Level-wise sampling of the lower multi-parameter model: every `i`-simplex
//! whose boundary is present is kept independently with probability `p_i`.

pub mod rng;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ProbabilityVector, Simplex, SimplicialComplex, Vertex};
use crate::phase::ExponentVector;
use rng::{simplex_draw, Threshold};

/// Candidate count above which a level's coin flips run on the thread pool.
const PARALLEL_CUTOFF: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameters {
    Probabilities(ProbabilityVector),
    Exponents(ExponentVector),
}

impl Parameters {
    pub fn r(&self) -> usize {
        match self {
            Parameters::Probabilities(p) => p.r(),
            Parameters::Exponents(a) => a.r(),
        }
    }

    /// Inclusion thresholds per dimension for an ambient simplex on `n` vertices.
    pub fn thresholds(&self, n: u32) -> Vec<Threshold> {
        match self {
            Parameters::Probabilities(p) => p.values().iter().map(Threshold::from_rational).collect(),
            Parameters::Exponents(a) => a
                .probabilities(u64::from(n))
                .into_iter()
                .map(Threshold::from_f64)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n: u32,
    pub r: usize,
    pub params: Parameters,
    pub seed: u64,
}

impl SampleSpec {
    pub fn with_probabilities(n: u32, p: ProbabilityVector, seed: u64) -> Self {
        SampleSpec {
            n,
            r: p.r(),
            params: Parameters::Probabilities(p),
            seed,
        }
    }

    pub fn with_exponents(n: u32, alpha: ExponentVector, seed: u64) -> Self {
        SampleSpec {
            n,
            r: alpha.r(),
            params: Parameters::Exponents(alpha),
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.params.r() != self.r {
            return Err(Error::InvalidParameter(format!(
                "parameter vector has length {} but r = {}",
                self.params.r() + 1,
                self.r
            )));
        }
        Ok(())
    }
}

/// Draws `Y ∈ Ω_n^r`. Output is a pure function of the spec.
pub fn sample(spec: &SampleSpec) -> Result<SimplicialComplex> {
    sample_skeleton(spec, spec.r)
}

/// Draws only `Y^{(k)}`, which depends on `p_0, …, p_k` alone. Returns the
/// same faces as the corresponding levels of [`sample`] with the same spec.
pub fn sample_skeleton(spec: &SampleSpec, k: usize) -> Result<SimplicialComplex> {
    spec.validate()?;
    let thresholds = spec.params.thresholds(spec.n);
    let mut y = SimplicialComplex::empty(spec.n, spec.r);
    for (i, &threshold) in thresholds.iter().enumerate().take(k.min(spec.r) + 1) {
        if matches!(threshold, Threshold::Never) {
            break;
        }
        let candidates = candidate_faces(&y, i);
        if candidates.is_empty() {
            break;
        }
        let keep = |s: &Simplex| threshold.accepts(simplex_draw(spec.seed, i, s.vertices()));
        let kept: Vec<Simplex> = if candidates.len() >= PARALLEL_CUTOFF {
            candidates.into_par_iter().filter(keep).collect()
        } else {
            candidates.into_iter().filter(keep).collect()
        };
        y.set_level_unchecked(i, kept);
    }
    Ok(y)
}

/// External `i`-faces of `Y`: simplices not in `Y` whose whole boundary is.
///
/// Faces of dimension `i − 1` are grouped by their first `i − 1` vertices.
/// Two faces in a group with last vertices `u < w` span the candidate
/// `prefix ∪ {u, w}`, whose other facets are then looked up. Every candidate
/// arises from exactly one group, so there are no duplicates. Output is in
/// lexicographic order.
pub fn candidate_faces(y: &SimplicialComplex, i: usize) -> Vec<Simplex> {
    if i > y.r() {
        return Vec::new();
    }
    if i == 0 {
        return (1..=y.n())
            .map(Simplex::vertex)
            .filter(|v| !y.contains(v))
            .collect();
    }
    let lower = y.faces(i - 1);
    let mut out = Vec::new();
    let mut buf: Vec<Vertex> = Vec::with_capacity(i + 1);
    let mut start = 0;
    while start < lower.len() {
        let prefix = &lower[start].vertices()[..i - 1];
        let mut end = start + 1;
        while end < lower.len() && &lower[end].vertices()[..i - 1] == prefix {
            end += 1;
        }
        let tails: Vec<Vertex> = lower[start..end].iter().map(|s| s.vertices()[i - 1]).collect();
        for (a, &u) in tails.iter().enumerate() {
            for &w in &tails[a + 1..] {
                buf.clear();
                buf.extend_from_slice(prefix);
                buf.push(u);
                buf.push(w);
                let sigma = Simplex::from_sorted_unchecked(&buf);
                // facets dropping u or w are the two group members
                let rest_present = (0..i - 1).all(|pos| {
                    let facet = sigma.without_position(pos).expect("i >= 1");
                    y.contains(&facet)
                });
                if rest_present && !y.contains(&sigma) {
                    out.push(sigma);
                }
            }
        }
        start = end;
    }
    out
}
