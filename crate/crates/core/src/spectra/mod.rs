//! Links of simplices, normalized Laplacians of their 1-skeleta, and the
//! spectral-gap criteria of Garland type and of Żuk.

mod jacobi;

pub use jacobi::{symmetric_eigenvalues, JACOBI_TOLERANCE};

use num_rational::BigRational;
use num_traits::One;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::degrees::purity_check;
use crate::error::{Error, Result};
use crate::homology::betti;
use crate::model::{ProbabilityVector, Simplex, SimplicialComplex, Vertex};
use crate::numeric::{binomial_f64, binomial_u64, rational_pow};
use crate::phase::ExponentVector;

/// Eigenvalues at or below this count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-8;

/// `Lk_Y(σ)`: faces `τ` disjoint from `σ` with `σ ∪ τ ∈ Y`, on the original
/// vertex labels, with cap `r − dim σ − 1` (at least 0).
pub fn link(y: &SimplicialComplex, sigma: &Simplex) -> Result<SimplicialComplex> {
    if !y.contains(sigma) {
        return Err(Error::Domain(format!("{sigma:?} is not a face of the complex")));
    }
    let cap = y.r().saturating_sub(sigma.dim() + 1);
    let verts: Vec<Vertex> = link_vertices(y, sigma);
    let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); cap + 1];
    if sigma.dim() < y.r() {
        levels[0] = verts.iter().map(|&v| Simplex::vertex(v)).collect();
        for d in 1..=cap {
            let mut next = Vec::new();
            for tau in &levels[d - 1] {
                let start = verts.partition_point(|&v| v <= tau.max_vertex());
                for &w in &verts[start..] {
                    let ext = tau.with_vertex(w);
                    if y.contains(&sigma.union(&ext)) {
                        next.push(ext);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels[d] = next;
        }
    }
    Ok(SimplicialComplex::from_levels_unchecked(y.n(), cap, levels))
}

fn link_vertices(y: &SimplicialComplex, sigma: &Simplex) -> Vec<Vertex> {
    if sigma.dim() >= y.r() {
        return Vec::new();
    }
    y.vertex_ids()
        .into_iter()
        .filter(|&w| !sigma.contains_vertex(w) && y.contains(&sigma.with_vertex(w)))
        .collect()
}

/// `L_σ`, the 1-skeleton of the link: vertices `v` with `σ ∪ {v} ∈ Y` and
/// edges `{u, v}` with `σ ∪ {u, v} ∈ Y` (as index pairs into `vertices`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkGraph {
    pub sigma: Simplex,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

impl LinkGraph {
    pub fn of(y: &SimplicialComplex, sigma: &Simplex) -> Result<LinkGraph> {
        if !y.contains(sigma) {
            return Err(Error::Domain(format!("{sigma:?} is not a face of the complex")));
        }
        let vertices = link_vertices(y, sigma);
        let mut edges = Vec::new();
        if sigma.dim() + 1 < y.r() {
            for a in 0..vertices.len() {
                for b in a + 1..vertices.len() {
                    let ext = sigma.with_vertex(vertices[a]).with_vertex(vertices[b]);
                    if y.contains(&ext) {
                        edges.push((a, b));
                    }
                }
            }
        }
        Ok(LinkGraph {
            sigma: sigma.clone(),
            vertices,
            edges,
        })
    }

    /// Graph with vertices `0..m` and the given edges, for direct use.
    pub fn from_edges(m: usize, edges: Vec<(usize, usize)>) -> LinkGraph {
        LinkGraph {
            sigma: Simplex::vertex(1),
            vertices: (1..=m as Vertex).collect(),
            edges,
        }
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Component count over all vertices, isolated ones included.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut roots: Vec<usize> = (0..self.vertices.len()).map(|i| uf.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

/// `p′_i = ∏_{j=i}^{i+d+1} p_j^{C(d+1, j−i)}` for `i = 0..r−d−1`, with `p_j = 1` past `r`.
pub fn link_parameters(p: &ProbabilityVector, d: usize) -> Result<ProbabilityVector> {
    let r = p.r();
    if d + 1 > r {
        return Err(Error::Precondition(format!("link parameters need d + 1 <= r = {r}")));
    }
    let values = (0..r - d)
        .map(|i| {
            let mut acc = BigRational::one();
            for j in i..=(i + d + 1).min(r) {
                acc *= rational_pow(p.p(j), binomial_u64(d as u64 + 1, (j - i) as u64).unwrap());
            }
            acc
        })
        .collect();
    ProbabilityVector::new(values)
}

/// Exponent form of [`link_parameters`]: `α′_i = Σ_j C(d+1, j−i) α_j`, so `α′_0 = ψ_{d+1}(α)`.
pub fn link_exponents(alpha: &ExponentVector, d: usize) -> Result<ExponentVector> {
    let r = alpha.r();
    if d + 1 > r {
        return Err(Error::Precondition(format!("link parameters need d + 1 <= r = {r}")));
    }
    ExponentVector::new(
        (0..r - d)
            .map(|i| {
                (i..=i + d + 1)
                    .map(|j| binomial_f64(d + 1, j - i) * alpha.get(j as i64))
                    .sum()
            })
            .collect(),
    )
}

/// `I − D^{−1/2} A D^{−1/2}` restricted to non-isolated vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedLaplacian {
    /// Indices into the graph's vertex list, one per matrix row.
    pub support: Vec<usize>,
    pub isolated: Vec<usize>,
    pub matrix: Vec<Vec<f64>>,
}

pub fn normalized_laplacian(g: &LinkGraph) -> Result<NormalizedLaplacian> {
    if g.vertices.is_empty() {
        return Err(Error::Domain("normalized Laplacian of an empty graph".into()));
    }
    let deg = g.degrees();
    let support: Vec<usize> = (0..deg.len()).filter(|&i| deg[i] > 0).collect();
    let isolated: Vec<usize> = (0..deg.len()).filter(|&i| deg[i] == 0).collect();
    let mut pos = vec![usize::MAX; deg.len()];
    for (k, &i) in support.iter().enumerate() {
        pos[i] = k;
    }
    let m = support.len();
    let mut matrix = vec![vec![0.0; m]; m];
    for (k, row) in matrix.iter_mut().enumerate() {
        row[k] = 1.0;
    }
    for &(a, b) in &g.edges {
        let w = -1.0 / ((deg[a] * deg[b]) as f64).sqrt();
        matrix[pos[a]][pos[b]] = w;
        matrix[pos[b]][pos[a]] = w;
    }
    Ok(NormalizedLaplacian {
        support,
        isolated,
        matrix,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub connected: bool,
    /// Smallest eigenvalue above [`ZERO_THRESHOLD`]; `None` when there is none.
    pub kappa: Option<f64>,
    pub eigenvalues: Vec<f64>,
    pub zero_multiplicity: usize,
    pub isolated: usize,
    pub components: usize,
}

pub fn spectral_gap(g: &LinkGraph) -> Result<SpectralReport> {
    let lap = normalized_laplacian(g)?;
    let eigenvalues = symmetric_eigenvalues(lap.matrix, JACOBI_TOLERANCE);
    if let Some(bad) = eigenvalues.iter().find(|&&x| !(-1e-9..=2.0 + 1e-9).contains(&x)) {
        return Err(Error::InternalConsistency(format!(
            "normalized Laplacian eigenvalue {bad} outside [0, 2]"
        )));
    }
    let zero_multiplicity = eigenvalues.iter().filter(|&&x| x <= ZERO_THRESHOLD).count();
    let components = g.component_count();
    let isolated = lap.isolated.len();
    if zero_multiplicity + isolated != components {
        return Err(Error::InternalConsistency(format!(
            "{zero_multiplicity} zero eigenvalues and {isolated} isolated vertices but {components} components"
        )));
    }
    Ok(SpectralReport {
        connected: zero_multiplicity == 1 && isolated == 0,
        kappa: eigenvalues.iter().copied().find(|&x| x > ZERO_THRESHOLD),
        eigenvalues,
        zero_multiplicity,
        isolated,
        components,
    })
}

/// Spectral data of one simplex's link graph and its verdict against a threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkCheck {
    pub simplex: Simplex,
    pub link_vertices: usize,
    pub connected: bool,
    pub kappa: Option<f64>,
    pub pass: bool,
}

fn check_link(y: &SimplicialComplex, sigma: &Simplex, threshold: f64) -> Result<LinkCheck> {
    let g = LinkGraph::of(y, sigma)?;
    if g.vertices.is_empty() {
        return Ok(LinkCheck {
            simplex: sigma.clone(),
            link_vertices: 0,
            connected: false,
            kappa: None,
            pass: false,
        });
    }
    let rep = spectral_gap(&g)?;
    let pass = rep.connected && rep.kappa.is_some_and(|k| k > threshold);
    Ok(LinkCheck {
        simplex: sigma.clone(),
        link_vertices: g.vertices.len(),
        connected: rep.connected,
        kappa: rep.kappa,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GarlandReport {
    pub level: usize,
    /// `1 − 1/(ℓ+2)`.
    pub threshold: f64,
    pub pass: bool,
    pub simplices: Vec<LinkCheck>,
    /// `ℓ + 1` when the check passes: `H_{ℓ+1}(Y; Q) = 0` follows.
    pub implied_vanishing: Option<usize>,
}

/// Every `ℓ`-simplex must have a nonempty connected link graph with
/// `κ > 1 − 1/(ℓ+2)`. Requires `ℓ ≤ dim Y − 2`.
pub fn garland_check(y: &SimplicialComplex, level: usize) -> Result<GarlandReport> {
    match y.dim() {
        Some(d) if level + 2 <= d => {}
        other => {
            return Err(Error::Precondition(format!(
                "garland check at level {level} needs dim Y >= {}, got {other:?}",
                level + 2
            )))
        }
    }
    let threshold = 1.0 - 1.0 / (level as f64 + 2.0);
    let simplices = y
        .faces(level)
        .par_iter()
        .map(|s| check_link(y, s, threshold))
        .collect::<Result<Vec<_>>>()?;
    let pass = simplices.iter().all(|c| c.pass);
    Ok(GarlandReport {
        level,
        threshold,
        pass,
        simplices,
        implied_vanishing: pass.then_some(level + 1),
    })
}

/// Garland verdicts at levels `0..=k−2` set against the computed homology.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GarlandConsistency {
    pub k: usize,
    pub levels_passed: Vec<bool>,
    pub all_pass: bool,
    pub reduced_betti: Vec<u64>,
    /// Levels `ℓ` that pass while `b̃_{ℓ+1} ≠ 0`.
    pub counterexamples: Vec<usize>,
}

/// Runs [`garland_check`] for `ℓ = 0..=k−2` (with `k = dim Y`) and checks
/// each passing level against `b̃_{ℓ+1} = 0`.
pub fn garland_consistency(y: &SimplicialComplex) -> Result<GarlandConsistency> {
    let k = y.dim().unwrap_or(0);
    let b = betti(y)?;
    let mut levels_passed = Vec::new();
    let mut counterexamples = Vec::new();
    for level in 0..k.saturating_sub(1) {
        let rep = garland_check(y, level)?;
        if rep.pass && b.reduced(level + 1) != 0 {
            counterexamples.push(level);
        }
        levels_passed.push(rep.pass);
    }
    Ok(GarlandConsistency {
        k,
        all_pass: !levels_passed.is_empty() && levels_passed.iter().all(|&p| p),
        levels_passed,
        reduced_betti: b.reduced,
        counterexamples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZukReport {
    /// Sufficient condition only: `true` means the criterion is satisfied.
    pub satisfied: bool,
    pub vertices: Vec<LinkCheck>,
}

/// Every vertex link graph connected with `κ > 1/2`. Requires `Y` pure of dimension 2.
pub fn zuk_check(y: &SimplicialComplex) -> Result<ZukReport> {
    if y.dim() != Some(2) || !purity_check(y, 2) {
        return Err(Error::Precondition("Żuk check needs a pure 2-dimensional complex".into()));
    }
    let vertices = y
        .faces(0)
        .par_iter()
        .map(|s| check_link(y, s, 0.5))
        .collect::<Result<Vec<_>>>()?;
    Ok(ZukReport {
        satisfied: vertices.iter().all(|c| c.pass),
        vertices,
    })
}
