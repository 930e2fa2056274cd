use rustc_hash::FxHashSet;

use super::simplex::{Simplex, Vertex};
use super::SimplicialComplex;
use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_complexes`].
pub const MAX_ENUMERATION_N: usize = 6;

/// Every subcomplex of `Δ_n` with dimension at most `r`, each exactly once.
///
/// Complexes are produced level by level: a subset of the vertices, then a
/// subset of the edges whose endpoints were chosen, and so on. The per-level
/// subsets are bitmasks advanced like an odometer.
pub fn enumerate_complexes(n: usize, r: usize) -> Result<ComplexEnumerator> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::SizeGuard {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    Ok(ComplexEnumerator::new(n as u32, r))
}

struct LevelState {
    candidates: Vec<Simplex>,
    mask: u64,
}

pub struct ComplexEnumerator {
    n: u32,
    r: usize,
    top: usize,
    levels: Vec<LevelState>,
    done: bool,
}

impl ComplexEnumerator {
    fn new(n: u32, r: usize) -> Self {
        // no faces of dimension >= n exist in Δ_n
        let top = if n == 0 { 0 } else { r.min(n as usize - 1) };
        let mut e = ComplexEnumerator {
            n,
            r,
            top,
            levels: Vec::with_capacity(top + 1),
            done: false,
        };
        let vertices = (1..=n).map(Simplex::vertex).collect();
        e.levels.push(LevelState {
            candidates: vertices,
            mask: 0,
        });
        e.fill_from(1);
        e
    }

    fn chosen(&self, level: usize) -> impl Iterator<Item = &Simplex> {
        let st = &self.levels[level];
        st.candidates
            .iter()
            .enumerate()
            .filter(move |(i, _)| st.mask & (1 << i) != 0)
            .map(|(_, s)| s)
    }

    /// Rebuilds levels `from..=top` with empty selections.
    fn fill_from(&mut self, from: usize) {
        self.levels.truncate(from);
        for d in from..=self.top {
            let below: FxHashSet<Simplex> = self.chosen(d - 1).cloned().collect();
            let verts: Vec<Vertex> = self.chosen(0).map(|s| s.vertices()[0]).collect();
            let candidates = subsets_with_boundary(&verts, d + 1, &below);
            assert!(candidates.len() < 64, "candidate set exceeds mask width");
            self.levels.push(LevelState { candidates, mask: 0 });
        }
    }

    fn current(&self) -> SimplicialComplex {
        let levels = (0..self.levels.len())
            .map(|d| self.chosen(d).cloned().collect())
            .collect();
        SimplicialComplex::from_levels_unchecked(self.n, self.r, levels)
    }

    fn advance(&mut self) {
        for d in (0..self.levels.len()).rev() {
            let st = &mut self.levels[d];
            if st.mask + 1 < (1u64 << st.candidates.len()) {
                st.mask += 1;
                self.fill_from(d + 1);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for ComplexEnumerator {
    type Item = SimplicialComplex;

    fn next(&mut self) -> Option<SimplicialComplex> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// All `size`-subsets of `verts` whose codimension-one faces lie in `below`.
fn subsets_with_boundary(verts: &[Vertex], size: usize, below: &FxHashSet<Simplex>) -> Vec<Simplex> {
    let mut out = Vec::new();
    if verts.len() < size {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let cand: Vec<Vertex> = idx.iter().map(|&i| verts[i]).collect();
        let s = Simplex::from_sorted_unchecked(&cand);
        if s.facets().all(|(f, _)| below.contains(&f)) {
            out.push(s);
        }
        let mut i = size;
        while i > 0 && idx[i - 1] == verts.len() - (size - i) - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}
