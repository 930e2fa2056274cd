//! Boundary matrices and rational Betti numbers.
//!
//! Ranks are computed over `Z/p` for `p = 2^31 − 1` and confirmed with a
//! second pseudorandom 31-bit prime. Disagreement escalates to a third prime
//! and to exact fraction-free elimination where the matrix is small enough.

mod matrix;
pub mod rank;

pub use matrix::{boundary_matrix, BoundaryMatrix};
pub use rank::{
    certified_rank, rank_exact, rank_mod_p, reduce_columns, reduce_mod_p, RankCertificate, Reduction, SparseVec,
};

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{FVector, SimplicialComplex, Vertex};

/// `b_0, …, b_r` with the reduced variant `b̃_0 = max(b_0 − 1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub betti: Vec<u64>,
    pub reduced: Vec<u64>,
}

impl BettiVector {
    fn from_betti(betti: Vec<u64>) -> Self {
        let mut reduced = betti.clone();
        if let Some(b0) = reduced.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        BettiVector { betti, reduced }
    }

    pub fn get(&self, j: usize) -> u64 {
        self.betti.get(j).copied().unwrap_or(0)
    }

    pub fn reduced(&self, j: usize) -> u64 {
        self.reduced.get(j).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(j, &b)| if j % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Both Morse inequalities per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorseReport {
    pub holds: bool,
    /// Dimensions where `f_j − f_{j+1} − f_{j−1} ≤ b_j ≤ f_j` fails.
    pub violations: Vec<usize>,
}

/// Everything computed for one complex.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub f_vector: FVector,
    pub betti: BettiVector,
    /// `rank ∂_j` for `j = 1..=r`.
    pub ranks: Vec<RankCertificate>,
    pub euler_characteristic: i64,
    pub morse: MorseReport,
    pub components: usize,
}

/// `b_j = f_j − rank ∂_j − rank ∂_{j+1}` over `Q`, with the Euler identity,
/// the Morse inequalities and the union-find `b_0` all verified.
pub fn betti(y: &SimplicialComplex) -> Result<BettiVector> {
    homology(y).map(|h| h.betti)
}

pub fn homology(y: &SimplicialComplex) -> Result<HomologyReport> {
    let f = y.f_vector();
    let top = y.dim().unwrap_or(0);
    let ranks: Vec<RankCertificate> = (1..=y.r())
        .into_par_iter()
        .map(|j| {
            if j > top {
                RankCertificate {
                    rank: 0,
                    modular: Vec::new(),
                    exact: None,
                    unresolved: false,
                }
            } else {
                let m = boundary_matrix(y, j).expect("1 <= j <= r");
                certified_rank(&m, j as u64)
            }
        })
        .collect();
    let rank = |j: usize| -> u64 {
        if j == 0 || j > y.r() {
            0
        } else {
            ranks[j - 1].rank as u64
        }
    };
    let mut b = Vec::with_capacity(y.r() + 1);
    for j in 0..=y.r() {
        let fj = f.get(j);
        let used = rank(j) + rank(j + 1);
        if used > fj {
            return Err(Error::InternalConsistency(format!(
                "rank ∂_{j} + rank ∂_{} = {used} exceeds f_{j} = {fj}",
                j + 1
            )));
        }
        b.push(fj - used);
    }
    let betti = BettiVector::from_betti(b);
    let chi = f.euler_characteristic();
    if chi != betti.euler_characteristic() {
        return Err(Error::InternalConsistency(format!(
            "Euler characteristic {chi} from faces but {} from Betti numbers",
            betti.euler_characteristic()
        )));
    }
    let morse = morse_check(&f, &betti);
    if !morse.holds {
        return Err(Error::InternalConsistency(format!(
            "Morse inequalities fail in dimensions {:?}",
            morse.violations
        )));
    }
    let components = connected_components(y).count;
    if components as u64 != betti.get(0) {
        return Err(Error::InternalConsistency(format!(
            "union-find finds {components} components but b_0 = {}",
            betti.get(0)
        )));
    }
    Ok(HomologyReport {
        f_vector: f,
        betti,
        ranks,
        euler_characteristic: chi,
        morse,
        components,
    })
}

/// `f_j − f_{j+1} − f_{j−1} ≤ b_j ≤ f_j` for `0 ≤ j ≤ r`, with `f_{−1} = 0`.
pub fn morse_check(f: &FVector, b: &BettiVector) -> MorseReport {
    let fi = |j: i64| -> i64 {
        if j < 0 {
            0
        } else {
            f.get(j as usize) as i64
        }
    };
    let violations: Vec<usize> = (0..f.len())
        .filter(|&j| {
            let j_ = j as i64;
            let bj = b.get(j) as i64;
            !(fi(j_) - fi(j_ + 1) - fi(j_ - 1) <= bj && bj <= fi(j_))
        })
        .collect();
    MorseReport {
        holds: violations.is_empty(),
        violations,
    }
}

/// Component count and a label per vertex (labels numbered by smallest vertex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Components {
    pub count: usize,
    pub labels: BTreeMap<Vertex, usize>,
}

/// Union-find over the edges; the empty complex has no components.
pub fn connected_components(y: &SimplicialComplex) -> Components {
    let verts = y.vertex_ids();
    let mut uf = UnionFind::<usize>::new(verts.len());
    for e in y.faces(1) {
        let a = verts.binary_search(&e.vertices()[0]).expect("edge vertex present");
        let b = verts.binary_search(&e.vertices()[1]).expect("edge vertex present");
        uf.union(a, b);
    }
    let mut root_label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        let next = root_label.len();
        let label = *root_label.entry(uf.find(i)).or_insert(next);
        labels.insert(v, label);
    }
    Components {
        count: root_label.len(),
        labels,
    }
}
