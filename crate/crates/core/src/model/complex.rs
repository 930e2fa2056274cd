use std::sync::OnceLock;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::simplex::{Simplex, Vertex};
use crate::error::{Error, Result};

/// Face counts `f_0, …, f_r` (`f_{-1} = 1` is implicit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    /// `f_i`, zero beyond the stored range.
    pub fn get(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `f_i` with `f_{-1} = 1`.
    pub fn get_signed(&self, i: i64) -> u64 {
        if i == -1 {
            1
        } else if i < -1 {
            0
        } else {
            self.get(i as usize)
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&f| f == 0)
    }

    /// Largest `i` with `f_i > 0`.
    pub fn dim(&self) -> Option<usize> {
        self.0.iter().rposition(|&f| f > 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }
}

/// Unchecked serialized form: `{n, r, faces}` with one array of vertex
/// arrays per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComplex {
    pub n: u32,
    pub r: usize,
    pub faces: Vec<Vec<Vec<Vertex>>>,
}

/// Outcome of [`is_valid_complex`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Checks that a raw face list describes a subcomplex of `Δ_n` with
/// dimension at most `r`: sorted ids in `1..=n`, faces filed under their
/// own dimension, and every boundary face present.
pub fn is_valid_complex(raw: &RawComplex) -> ValidityReport {
    let mut violations = Vec::new();
    if raw.faces.len() > raw.r + 1 {
        let extra = raw.faces[raw.r + 1..].iter().any(|level| !level.is_empty());
        if extra {
            violations.push(format!("faces above dimension cap r = {}", raw.r));
        }
    }
    let mut present: FxHashSet<Vec<Vertex>> = FxHashSet::default();
    for (d, level) in raw.faces.iter().enumerate() {
        for face in level {
            if face.len() != d + 1 {
                violations.push(format!("face {face:?} listed under dimension {d}"));
            }
            if face.windows(2).any(|w| w[0] >= w[1]) {
                violations.push(format!("face {face:?} is not strictly increasing"));
            }
            if let Some(&v) = face.iter().find(|&&v| v == 0 || v > raw.n) {
                violations.push(format!("face {face:?} has vertex {v} outside 1..={}", raw.n));
            }
            if !present.insert(face.clone()) {
                violations.push(format!("face {face:?} listed twice"));
            }
        }
    }
    for face in raw.faces.iter().flatten() {
        if face.len() < 2 {
            continue;
        }
        for i in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(i);
            if !present.contains(&sub) {
                violations.push(format!("face {face:?} is missing boundary face {sub:?}"));
            }
        }
    }
    ValidityReport {
        valid: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Debug, Default)]
struct Level {
    faces: Vec<Simplex>,
    index: OnceLock<FxHashMap<Simplex, usize>>,
}

impl Level {
    fn new(mut faces: Vec<Simplex>) -> Self {
        faces.sort_unstable();
        Level {
            faces,
            index: OnceLock::new(),
        }
    }

    fn index(&self) -> &FxHashMap<Simplex, usize> {
        self.index.get_or_init(|| {
            self.faces
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect()
        })
    }
}

/// A down-closed subcomplex `Y ⊂ Δ_n` with `dim Y ≤ r`.
///
/// Faces are stored per dimension in lexicographic order. Each level carries
/// a lazily built hash index from the vertex tuple to its position.
/// Immutable once constructed.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    n: u32,
    r: usize,
    levels: Vec<Level>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.r == other.r
            && self.levels.iter().map(|l| &l.faces).eq(other.levels.iter().map(|l| &l.faces))
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    pub fn empty(n: u32, r: usize) -> Self {
        SimplicialComplex {
            n,
            r,
            levels: (0..=r).map(|_| Level::default()).collect(),
        }
    }

    /// Builds from an explicit face set, which must already be down-closed.
    pub fn from_faces(n: u32, r: usize, faces: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut raw = RawComplex {
            n,
            r,
            faces: vec![Vec::new(); r + 1],
        };
        for f in faces {
            let d = f.dim();
            if d > r {
                return Err(Error::InvalidComplex {
                    violations: vec![format!("face {f:?} exceeds dimension cap r = {r}")],
                });
            }
            raw.faces[d].push(f.into());
        }
        Self::try_from(raw)
    }

    /// Down-closure of a set of generating simplices.
    pub fn closure(n: u32, r: usize, generators: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut all: FxHashSet<Simplex> = FxHashSet::default();
        for g in generators {
            if g.dim() > r {
                return Err(Error::InvalidComplex {
                    violations: vec![format!("generator {g:?} exceeds dimension cap r = {r}")],
                });
            }
            if g.max_vertex() > n {
                return Err(Error::InvalidComplex {
                    violations: vec![format!("generator {g:?} has a vertex above n = {n}")],
                });
            }
            if all.contains(&g) {
                continue;
            }
            all.extend(g.all_faces());
        }
        let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); r + 1];
        for s in all {
            levels[s.dim()].push(s);
        }
        Ok(Self::from_levels_unchecked(n, r, levels))
    }

    /// The full `r`-skeleton of `Δ_n`.
    pub fn full_skeleton(n: u32, r: usize) -> Self {
        let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); r + 1];
        for (d, level) in levels.iter_mut().enumerate() {
            let k = d + 1;
            if k > n as usize {
                break;
            }
            let mut combo: Vec<Vertex> = (1..=k as Vertex).collect();
            loop {
                level.push(Simplex::from_sorted_unchecked(&combo));
                // next k-combination of 1..=n in lexicographic order
                let mut i = k;
                while i > 0 && combo[i - 1] == n - (k - i) as Vertex {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                combo[i - 1] += 1;
                for j in i..k {
                    combo[j] = combo[j - 1] + 1;
                }
            }
        }
        Self::from_levels_unchecked(n, r, levels)
    }

    /// Caller guarantees down-closure, vertex range and per-level dimensions.
    pub(crate) fn from_levels_unchecked(n: u32, r: usize, mut levels: Vec<Vec<Simplex>>) -> Self {
        levels.resize(r + 1, Vec::new());
        SimplicialComplex {
            n,
            r,
            levels: levels.into_iter().map(Level::new).collect(),
        }
    }

    /// Replaces one level; caller guarantees down-closure.
    pub(crate) fn set_level_unchecked(&mut self, d: usize, faces: Vec<Simplex>) {
        self.levels[d] = Level::new(faces);
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Dimension of the complex; `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.faces.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.levels.first().is_none_or(|l| l.faces.is_empty())
    }

    /// Faces of dimension `d` in lexicographic order (empty beyond `r`).
    pub fn faces(&self, d: usize) -> &[Simplex] {
        self.levels.get(d).map_or(&[], |l| l.faces.as_slice())
    }

    pub fn num_faces(&self, d: usize) -> usize {
        self.faces(d).len()
    }

    pub fn vertex_ids(&self) -> Vec<Vertex> {
        self.faces(0).iter().map(|s| s.vertices()[0]).collect()
    }

    pub fn iter_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.levels.iter().flat_map(|l| l.faces.iter())
    }

    /// Position of `s` within its dimension level.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.levels.get(s.dim())?.index().get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.levels.iter().map(|l| l.faces.len() as u64).collect())
    }

    /// `Y^{(k)}`: all faces of dimension at most `k`. Keeps the cap `r`.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(d, l)| if d <= k { l.faces.clone() } else { Vec::new() })
            .collect();
        Self::from_levels_unchecked(self.n, self.r, levels)
    }

    /// Same faces with a different dimension cap; fails if faces exceed it.
    pub fn with_cap(&self, r: usize) -> Result<SimplicialComplex> {
        if self.dim().is_some_and(|d| d > r) {
            return Err(Error::InvalidParameter(format!(
                "complex of dimension {:?} does not fit under cap {r}",
                self.dim()
            )));
        }
        let levels = (0..=r).map(|d| self.faces(d).to_vec()).collect();
        Ok(Self::from_levels_unchecked(self.n, r, levels))
    }

    /// Removes a maximal face (one with no cofaces).
    pub fn remove_maximal_face(&self, s: &Simplex) -> Result<SimplicialComplex> {
        if !self.contains(s) {
            return Err(Error::NotAFace(s.vertices().to_vec()));
        }
        let d = s.dim();
        if self.faces(d + 1).iter().any(|c| s.is_face_of(c)) {
            return Err(Error::Precondition(format!("face {s:?} is not maximal")));
        }
        let mut levels: Vec<Vec<Simplex>> = self.levels.iter().map(|l| l.faces.clone()).collect();
        levels[d].retain(|f| f != s);
        Ok(Self::from_levels_unchecked(self.n, self.r, levels))
    }

    pub fn to_raw(&self) -> RawComplex {
        RawComplex {
            n: self.n,
            r: self.r,
            faces: self
                .levels
                .iter()
                .map(|l| l.faces.iter().map(|s| s.vertices().to_vec()).collect())
                .collect(),
        }
    }
}

impl TryFrom<RawComplex> for SimplicialComplex {
    type Error = Error;

    fn try_from(raw: RawComplex) -> Result<Self> {
        let report = is_valid_complex(&raw);
        if !report.valid {
            return Err(Error::InvalidComplex {
                violations: report.violations,
            });
        }
        let levels = raw
            .faces
            .into_iter()
            .take(raw.r + 1)
            .map(|level| {
                level
                    .into_iter()
                    .map(|v| Simplex::from_sorted_unchecked(&v))
                    .collect()
            })
            .collect();
        Ok(Self::from_levels_unchecked(raw.n, raw.r, levels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn full_skeleton_counts() {
        let y = SimplicialComplex::full_skeleton(5, 2);
        assert_eq!(y.f_vector().0, vec![5, 10, 10]);
        assert!(is_valid_complex(&y.to_raw()).valid);
        let tiny = SimplicialComplex::full_skeleton(2, 3);
        assert_eq!(tiny.f_vector().0, vec![2, 1, 0, 0]);
    }

    #[test]
    fn edge_without_endpoints_is_reported() {
        let raw = RawComplex {
            n: 3,
            r: 1,
            faces: vec![vec![vec![1]], vec![vec![1, 2]]],
        };
        let rep = is_valid_complex(&raw);
        assert!(!rep.valid);
        assert_eq!(rep.violations.len(), 1);
        assert!(rep.violations[0].contains("[2]"));
        assert!(SimplicialComplex::try_from(raw).is_err());
    }

    #[test]
    fn validity_edge_cases() {
        let empty = RawComplex { n: 4, r: 2, faces: vec![] };
        assert!(is_valid_complex(&empty).valid);
        let out_of_range = RawComplex {
            n: 2,
            r: 1,
            faces: vec![vec![vec![3]]],
        };
        assert!(!is_valid_complex(&out_of_range).valid);
        let too_high = RawComplex {
            n: 3,
            r: 0,
            faces: vec![vec![vec![1], vec![2]], vec![vec![1, 2]]],
        };
        assert!(!is_valid_complex(&too_high).valid);
        let unsorted = RawComplex {
            n: 3,
            r: 1,
            faces: vec![vec![vec![1], vec![2]], vec![vec![2, 1]]],
        };
        assert!(!is_valid_complex(&unsorted).valid);
    }

    #[test]
    fn closure_and_membership() {
        let y = SimplicialComplex::closure(4, 2, [s(&[1, 2, 3]), s(&[3, 4])]).unwrap();
        assert_eq!(y.f_vector().0, vec![4, 4, 1]);
        assert!(y.contains(&s(&[2, 3])));
        assert!(!y.contains(&s(&[2, 4])));
        assert_eq!(y.index_of(&s(&[1, 3])), Some(1));
        assert_eq!(y.dim(), Some(2));
        assert_eq!(y.skeleton(1).f_vector().0, vec![4, 4, 0]);
    }

    #[test]
    fn remove_maximal_face_only() {
        let y = SimplicialComplex::closure(3, 2, [s(&[1, 2, 3])]).unwrap();
        assert!(y.remove_maximal_face(&s(&[1, 2])).is_err());
        let z = y.remove_maximal_face(&s(&[1, 2, 3])).unwrap();
        assert_eq!(z.f_vector().0, vec![3, 3, 0]);
    }

    #[test]
    fn euler_characteristic_of_triangle_boundary() {
        let y = SimplicialComplex::closure(3, 2, [s(&[1, 2]), s(&[2, 3]), s(&[1, 3])]).unwrap();
        assert_eq!(y.f_vector().euler_characteristic(), 0);
    }
}
