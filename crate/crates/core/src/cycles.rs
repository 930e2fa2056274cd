//! h-vectors, Dehn–Sommerville symmetry, strong connectivity, size bounds
//! for minimal cycles and spheres, and minimal-cycle extraction.

use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::degrees::purity_check;
use crate::error::{Error, Result};
use crate::homology::{
    boundary_matrix, certified_rank, reduce_columns, reduce_mod_p, BoundaryMatrix, SparseVec,
};
use crate::homology::rank::PRIMARY_PRIME;
use crate::model::{FVector, Simplex, SimplicialComplex, Vertex};
use crate::numeric::{binomial_i64, binomial_u64};
use crate::phase::{gamma, phi, psi, ExponentVector};

/// `h_0, …, h_{k+1}` of a `k`-dimensional complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HVector {
    pub k: usize,
    pub h: Vec<i64>,
}

fn f_signed(f: &FVector, j: i64) -> i64 {
    if j == -1 {
        1
    } else {
        f.get(j as usize) as i64
    }
}

/// `h_i = Σ_{j=0}^{i} (−1)^{i−j} C(k−j+1, k−i+1) f_{j−1}` with `f_{−1} = 1`.
pub fn h_from_f(f: &FVector, k: usize) -> HVector {
    let k_ = k as i64;
    let h = (0..=k_ + 1)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                    sign * binomial_i64(k_ - j + 1, k_ - i + 1) * f_signed(f, j - 1)
                })
                .sum()
        })
        .collect();
    HVector { k, h }
}

pub fn h_vector(s: &SimplicialComplex, k: usize) -> HVector {
    h_from_f(&s.f_vector(), k)
}

/// `f_{i−1} = Σ_{j=0}^{i} C(k−j+1, k−i+1) h_j`, returned as `f_0, …, f_k`.
/// Fails if some entry comes out negative.
pub fn f_from_h(h: &HVector) -> Result<FVector> {
    let k = h.k as i64;
    let f = (1..=k + 1)
        .map(|i| {
            let v: i64 = (0..=i)
                .map(|j| binomial_i64(k - j + 1, k - i + 1) * h.h.get(j as usize).copied().unwrap_or(0))
                .sum();
            u64::try_from(v).map_err(|_| Error::Domain(format!("h-vector gives f_{} = {v} < 0", i - 1)))
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(FVector(f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DehnSommervilleReport {
    pub h: HVector,
    pub pure: bool,
    pub symmetric: bool,
    pub nonnegative: bool,
}

impl DehnSommervilleReport {
    pub fn passes(&self) -> bool {
        self.pure && self.symmetric && self.nonnegative
    }
}

/// `h_i = h_{k+1−i}` for all `i`, plus `h_i ≥ 0`.
pub fn dehn_sommerville_check(s: &SimplicialComplex, k: usize) -> DehnSommervilleReport {
    let h = h_vector(s, k);
    let symmetric = (0..=k + 1).all(|i| h.h[i] == h.h[k + 1 - i]);
    let nonnegative = h.h.iter().all(|&x| x >= 0);
    DehnSommervilleReport {
        pure: is_pure_of_dim(s, k),
        h,
        symmetric,
        nonnegative,
    }
}

fn is_pure_of_dim(s: &SimplicialComplex, k: usize) -> bool {
    s.dim() == Some(k) && purity_check(s, k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongConnectivity {
    pub strongly_connected: bool,
    pub diagnostic: Option<String>,
}

/// Facets adjacent when they share a `(k−1)`-face; true iff that graph is connected.
pub fn is_strongly_connected(s: &SimplicialComplex, k: usize) -> StrongConnectivity {
    if !is_pure_of_dim(s, k) {
        return StrongConnectivity {
            strongly_connected: false,
            diagnostic: Some(format!("not a pure {k}-dimensional complex")),
        };
    }
    let facets = s.faces(k);
    let mut uf = UnionFind::<usize>::new(facets.len());
    let mut first: FxHashMap<Simplex, usize> = FxHashMap::default();
    for (i, f) in facets.iter().enumerate() {
        for (ridge, _) in f.facets() {
            match first.get(&ridge) {
                Some(&j) => {
                    uf.union(i, j);
                }
                None => {
                    first.insert(ridge, i);
                }
            }
        }
    }
    let root = uf.find(0);
    let ok = (0..facets.len()).all(|i| uf.find(i) == root);
    StrongConnectivity {
        strongly_connected: ok,
        diagnostic: (!ok).then(|| "facet graph is disconnected".to_string()),
    }
}

/// `C(k+1, i+1) + x·C(k, i)`.
pub fn strong_fi_lower_bound(k: usize, x: u64, i: usize) -> u64 {
    binomial_u64(k as u64 + 1, i as u64 + 1).unwrap_or(0) + x * binomial_u64(k as u64, i as u64).unwrap_or(0)
}

fn check_above_critical(k: usize, alpha: &ExponentVector) -> Result<(f64, f64)> {
    let (ps, ph) = (psi(k, alpha), phi(k, alpha));
    if k > alpha.r() || ps <= 1.0 || ph >= 1.0 {
        return Err(Error::Domain(format!(
            "k = {k} is not above the critical dimension or exceeds the dimension cap (psi_k = {ps}, phi_k = {ph})"
        )));
    }
    Ok((ps, ph))
}

/// `(k+1)[1 + (1 − φ_k)/(ψ_k − 1)]`; needs `ψ_k > 1` and `φ_k < 1`.
pub fn cycle_size_bound(k: usize, alpha: &ExponentVector) -> Result<f64> {
    let (ps, ph) = check_above_critical(k, alpha)?;
    Ok((k as f64 + 1.0) * (1.0 + (1.0 - ph) / (ps - 1.0)))
}

/// `(k+1)[1 + (1 − φ_k − α_k/(k+1))/(ψ_k − 1 + α_{k−1} + α_k)]` for `k ≥ 2`.
pub fn sphere_size_bound(k: usize, alpha: &ExponentVector) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain("sphere bound needs k >= 2".into()));
    }
    let (ps, ph) = check_above_critical(k, alpha)?;
    let ak = alpha.get(k as i64);
    let ak1 = alpha.get(k as i64 - 1);
    let k1 = k as f64 + 1.0;
    Ok(k1 * (1.0 + (1.0 - ph - ak / k1) / (ps - 1.0 + ak1 + ak)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingReport {
    /// `Σ_i α_i f_i(S)`.
    pub weighted_sum: f64,
    pub f0: u64,
    pub nonembeddable: bool,
    /// The h-form verdict, evaluated only on spheres of dimension at least 2.
    pub h_form: Option<bool>,
}

/// `Σ_{i ≤ k} α_i f_i(S) > f_0(S)`. On inputs of dimension `k ≥ 2` passing
/// the Dehn–Sommerville check the h-form is also evaluated and must agree with `f_0 > sphere bound`
/// and imply the f-form.
pub fn nonembeddable(s: &SimplicialComplex, alpha: &ExponentVector) -> Result<EmbeddingReport> {
    let k = s.dim().unwrap_or(0);
    if k > alpha.r() {
        return Err(Error::InvalidParameter(format!(
            "complex of dimension {k} exceeds the exponent vector's r = {}",
            alpha.r()
        )));
    }
    let f = s.f_vector();
    let weighted_sum: f64 = (0..=k).map(|i| alpha.get(i as i64) * f.get(i) as f64).sum();
    let f0 = f.get(0);
    let nonemb = weighted_sum > f0 as f64;
    let ds = dehn_sommerville_check(s, k);
    let mut h_form = None;
    if k >= 2 && ds.passes() {
        let h1 = ds.h.h[1] as f64;
        let g = |j| gamma(j, k, alpha);
        let verdict = g(0)? + g(k + 1)? + (g(1)? + g(k)?) * h1 > h1 + k as f64 + 1.0;
        if verdict && !nonemb && (weighted_sum - f0 as f64).abs() > 1e-9 {
            return Err(Error::InternalConsistency(
                "h-form holds but the f-form does not".into(),
            ));
        }
        let denom = psi(k, alpha) - 1.0 + alpha.get(k as i64 - 1) + alpha.get(k as i64);
        if denom > 0.0 {
            let k1 = k as f64 + 1.0;
            let bound = k1 * (1.0 + (1.0 - phi(k, alpha) - alpha.get(k as i64) / k1) / denom);
            let strict_margin = (f0 as f64 - bound).abs() > 1e-9;
            if strict_margin && verdict != (f0 as f64 > bound) {
                return Err(Error::InternalConsistency(format!(
                    "h-form {verdict} disagrees with f_0 = {f0} against the bound {bound}"
                )));
            }
        }
        h_form = Some(verdict);
    }
    Ok(EmbeddingReport {
        weighted_sum,
        f0,
        nonembeddable: nonemb,
        h_form,
    })
}

/// Support of a minimal `k`-cycle and the size of its down-closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleSupport {
    pub faces: Vec<Simplex>,
    pub vertex_count: usize,
}

/// Columns of `m` at `cols`, with rows renumbered to those actually used.
fn restrict(m: &BoundaryMatrix, cols: &[usize]) -> BoundaryMatrix {
    let used: BTreeSet<u32> = cols.iter().flat_map(|&c| m.columns[c].iter().map(|e| e.0)).collect();
    let pos: FxHashMap<u32, u32> = used.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
    BoundaryMatrix {
        dim: m.dim,
        rows: used.len(),
        columns: cols
            .iter()
            .map(|&c| m.columns[c].iter().map(|&(r, s)| (pos[&r], s)).collect())
            .collect(),
    }
}

fn nullity(m: &BoundaryMatrix, cols: &[usize]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let sub = restrict(m, cols);
    cols.len() - certified_rank(&sub, cols.len() as u64).rank
}

/// One support-minimal `k`-cycle per homology generator of `H_k(Y)`.
///
/// Generators are kernel vectors of `∂_k` independent of the image of
/// `∂_{k+1}`. Each support is shrunk by dropping faces while a nonzero
/// cycle survives on the rest; at the fixed point the support carries
/// exactly one cycle and no proper subset carries any. Duplicate supports
/// are merged.
pub fn minimal_cycle_support(y: &SimplicialComplex, k: usize) -> Result<Vec<CycleSupport>> {
    if k == 0 || k > y.r() {
        return Err(Error::InvalidParameter(format!("cycle dimension k = {k} must lie in 1..={}", y.r())));
    }
    if y.num_faces(k) == 0 {
        return Ok(Vec::new());
    }
    let p = PRIMARY_PRIME;
    let dk = boundary_matrix(y, k)?;
    let cycles = reduce_mod_p(&dk, p, true).kernel;
    let boundaries: Vec<SparseVec> = if k < y.r() && y.num_faces(k + 1) > 0 {
        boundary_matrix(y, k + 1)?
            .columns
            .iter()
            .map(|col| col.iter().map(|&(r, s)| (r, if s > 0 { 1 } else { p - 1 })).collect())
            .collect()
    } else {
        Vec::new()
    };
    let nb = boundaries.len();
    let red = reduce_columns(y.num_faces(k), boundaries.into_iter().chain(cycles.iter().cloned()), p, false);
    let generators: Vec<&SparseVec> = cycles
        .iter()
        .enumerate()
        .filter(|(i, _)| red.lows[nb + i].is_some())
        .map(|(_, z)| z)
        .collect();

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for z in generators {
        let mut support: Vec<usize> = z.iter().map(|e| e.0 as usize).collect();
        let mut idx = 0;
        while idx < support.len() {
            let mut trial = support.clone();
            trial.remove(idx);
            if nullity(&dk, &trial) > 0 {
                support = trial;
            } else {
                idx += 1;
            }
        }
        if nullity(&dk, &support) != 1 {
            return Err(Error::InternalConsistency(format!(
                "minimal support of size {} does not carry exactly one cycle",
                support.len()
            )));
        }
        if seen.insert(support.clone()) {
            let faces: Vec<Simplex> = support.iter().map(|&i| y.faces(k)[i].clone()).collect();
            let verts: BTreeSet<Vertex> = faces.iter().flat_map(|f| f.vertices().iter().copied()).collect();
            out.push(CycleSupport {
                vertex_count: verts.len(),
                faces,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereKind {
    SimplexBoundary,
    CrossPolytope,
}

/// Boundary of `Δ_{k+1}` or the `k`-dimensional cross-polytope.
pub fn sphere_generators(k: usize, kind: SphereKind) -> Result<SimplicialComplex> {
    if k == 0 {
        return Err(Error::InvalidParameter("sphere dimension must be at least 1".into()));
    }
    match kind {
        SphereKind::SimplexBoundary => {
            let n = k as u32 + 2;
            let facets = (1..=n).map(|skip| Simplex::new((1..=n).filter(|&v| v != skip)).expect("k >= 1"));
            SimplicialComplex::closure(n, k, facets)
        }
        SphereKind::CrossPolytope => {
            let n = 2 * k as u32 + 2;
            let facets = (0u32..1 << (k + 1)).map(|mask| {
                Simplex::new((0..=k as u32).map(|i| 2 * i + 1 + ((mask >> i) & 1))).expect("distinct vertices")
            });
            SimplicialComplex::closure(n, k, facets)
        }
    }
}
