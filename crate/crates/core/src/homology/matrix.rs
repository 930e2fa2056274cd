use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::SimplicialComplex;

/// Columns above which construction runs on the thread pool.
const PARALLEL_COLUMNS: usize = 4096;

/// Oriented boundary `∂_j : C_j → C_{j−1}` in sparse column form.
///
/// Rows index `(j−1)`-faces and columns index `j`-faces, both in the
/// lexicographic order of the complex. Each column lists `(row, sign)`
/// pairs with increasing row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub dim: usize,
    pub rows: usize,
    pub columns: Vec<Vec<(u32, i8)>>,
}

impl BoundaryMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Dense row-major copy with entries in `{−1, 0, 1}`.
    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols()]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, s) in col {
                m[r as usize][c] = i64::from(s);
            }
        }
        m
    }

    /// Sparse product `self · other` with integer entries.
    pub fn compose(&self, other: &BoundaryMatrix) -> Vec<Vec<(u32, i64)>> {
        other
            .columns
            .iter()
            .map(|col| {
                let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
                for &(mid, s) in col {
                    for &(r, t) in &self.columns[mid as usize] {
                        *acc.entry(r).or_default() += i64::from(s) * i64::from(t);
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect()
    }
}

/// `∂_j` for `1 ≤ j ≤ r`. Column of `[v_0, …, v_j]` carries `(−1)^i` at the
/// facet omitting `v_i`.
pub fn boundary_matrix(y: &SimplicialComplex, j: usize) -> Result<BoundaryMatrix> {
    if j == 0 || j > y.r() {
        return Err(Error::InvalidParameter(format!(
            "boundary index j = {j} must lie in 1..={}",
            y.r()
        )));
    }
    let build = |sigma: &crate::model::Simplex| -> Vec<(u32, i8)> {
        let mut col: Vec<(u32, i8)> = sigma
            .facets()
            .map(|(f, sign)| (y.index_of(&f).expect("complex is down-closed") as u32, sign))
            .collect();
        col.sort_unstable_by_key(|e| e.0);
        col
    };
    let faces = y.faces(j);
    let columns = if faces.len() >= PARALLEL_COLUMNS {
        faces.par_iter().map(build).collect()
    } else {
        faces.iter().map(build).collect()
    };
    Ok(BoundaryMatrix {
        dim: j,
        rows: y.num_faces(j - 1),
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Simplex;

    #[test]
    fn single_edge() {
        let y = SimplicialComplex::closure(2, 1, [Simplex::new([1, 2]).unwrap()]).unwrap();
        let m = boundary_matrix(&y, 1).unwrap();
        assert_eq!(m.rows, 2);
        assert_eq!(m.columns, vec![vec![(0, -1), (1, 1)]]);
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let y = SimplicialComplex::full_skeleton(6, 3);
        for j in 2..=3 {
            let a = boundary_matrix(&y, j - 1).unwrap();
            let b = boundary_matrix(&y, j).unwrap();
            assert!(a.compose(&b).iter().all(Vec::is_empty));
            assert!(b.columns.iter().all(|c| c.len() == j + 1));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let y = SimplicialComplex::full_skeleton(3, 1);
        assert!(boundary_matrix(&y, 0).is_err());
        assert!(boundary_matrix(&y, 2).is_err());
    }
}
