use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Vertex id, 1-based as in `{1, …, n}`.
pub type Vertex = u32;

/// A simplex of `Δ_n`, stored as a strictly increasing vertex list.
///
/// The derived ordering is lexicographic on the vertex list, which is the
/// face order used throughout (boundary matrices, serialized output).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Simplex(SmallVec<[Vertex; 4]>);

impl Simplex {
    /// Builds a simplex from arbitrary-order vertex ids. Rejects empty input,
    /// id 0 and repeated ids.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: SmallVec<[Vertex; 4]> = vertices.into_iter().collect();
        v.sort_unstable();
        Self::from_sorted(v.into_vec())
    }

    /// Builds a simplex from a list that must already be strictly increasing.
    pub fn from_sorted(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex {
                vertices,
                reason: "empty vertex list".into(),
            });
        }
        if vertices[0] == 0 {
            return Err(Error::InvalidSimplex {
                vertices,
                reason: "vertex ids are 1-based".into(),
            });
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSimplex {
                vertices,
                reason: "vertices must be strictly increasing".into(),
            });
        }
        Ok(Simplex(SmallVec::from_vec(vertices)))
    }

    pub(crate) fn from_sorted_unchecked(vertices: &[Vertex]) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(SmallVec::from_slice(vertices))
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(smallvec::smallvec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_vertex(&self) -> Vertex {
        *self.0.last().expect("nonempty")
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// The face obtained by deleting the vertex at `position`; `None` for a vertex.
    pub fn without_position(&self, position: usize) -> Option<Simplex> {
        if self.0.len() <= 1 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(position);
        Some(Simplex(v))
    }

    /// Codimension-one faces with their boundary signs `(-1)^i`.
    pub fn facets(&self) -> impl Iterator<Item = (Simplex, i8)> + '_ {
        let len = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..len).map(move |i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            (self.without_position(i).expect("dim >= 1"), sign)
        })
    }

    /// Adds a vertex not already present.
    pub fn with_vertex(&self, v: Vertex) -> Simplex {
        let pos = self.0.binary_search(&v).expect_err("vertex already present");
        let mut out = self.0.clone();
        out.insert(pos, v);
        Simplex(out)
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: SmallVec<[Vertex; 4]> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        assert!(k < 32, "simplex too large for subset enumeration");
        (1u32..(1 << k))
            .map(|mask| {
                Simplex(
                    (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }
}

impl TryFrom<Vec<Vertex>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<Vertex>) -> Result<Self> {
        Simplex::from_sorted(v)
    }
}

impl From<Simplex> for Vec<Vertex> {
    fn from(s: Simplex) -> Self {
        s.0.into_vec()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}
