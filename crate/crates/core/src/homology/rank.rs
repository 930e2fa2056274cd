use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::matrix::BoundaryMatrix;
use crate::sampler::rng::mix64;

/// The fixed 31-bit prime `2^31 − 1`.
pub const PRIMARY_PRIME: u64 = 2_147_483_647;

/// Largest side on which the fraction-free exact path is attempted.
pub const EXACT_LIMIT: usize = 2000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A 31-bit prime other than [`PRIMARY_PRIME`], chosen pseudorandomly from `salt`.
pub fn verification_prime(salt: u64) -> u64 {
    let mut c = (mix64(salt) >> 33) | (1 << 30) | 1;
    while !is_prime(c) || c == PRIMARY_PRIME {
        c += 2;
        if c >= 1 << 31 {
            c = (1 << 30) | 1;
        }
    }
    c
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Sorted `(row, value)` pairs over `Z/p`.
pub type SparseVec = Vec<(u32, u64)>;

/// `x − f·y` over `Z/p` for sorted sparse vectors.
fn axpy(x: &[(u32, u64)], f: u64, y: &[(u32, u64)], p: u64) -> SparseVec {
    let neg = (p - f) % p;
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, neg * y[j].1 % p));
            j += 1;
        } else {
            let v = (x[i].1 + neg * y[j].1) % p;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Outcome of reducing a matrix over `Z/p` column by column, eliminating the
/// lowest nonzero entry against earlier pivots.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub prime: u64,
    pub rank: usize,
    /// Pivot row of each column, `None` where the column reduced to zero.
    pub lows: Vec<Option<u32>>,
    /// For each zero column, the column combination (mod `p`) that produced it.
    pub kernel: Vec<SparseVec>,
}

pub fn reduce_mod_p(m: &BoundaryMatrix, p: u64, track_kernel: bool) -> Reduction {
    let columns = m.columns.iter().map(|col| {
        col.iter()
            .map(|&(r, s)| (r, if s > 0 { 1 } else { p - 1 }))
            .collect()
    });
    reduce_columns(m.rows, columns, p, track_kernel)
}

/// Column reduction of arbitrary sparse columns (sorted by row, entries in `Z/p`).
pub fn reduce_columns(
    rows: usize,
    columns: impl IntoIterator<Item = SparseVec>,
    p: u64,
    track_kernel: bool,
) -> Reduction {
    let mut pivot_of_row: Vec<Option<u32>> = vec![None; rows];
    let mut store: Vec<SparseVec> = Vec::new();
    let mut store_ops: Vec<SparseVec> = Vec::new();
    let mut lows = Vec::new();
    let mut kernel = Vec::new();
    for (c, mut v) in columns.into_iter().enumerate() {
        let mut ops: SparseVec = if track_kernel { vec![(c as u32, 1)] } else { Vec::new() };
        loop {
            let Some(&(low, val)) = v.last() else {
                lows.push(None);
                if track_kernel {
                    kernel.push(ops);
                }
                break;
            };
            match pivot_of_row[low as usize] {
                Some(k) => {
                    v = axpy(&v, val, &store[k as usize], p);
                    if track_kernel {
                        ops = axpy(&ops, val, &store_ops[k as usize], p);
                    }
                }
                None => {
                    // normalise so the pivot entry is 1
                    let inv = inv_mod(val, p);
                    for e in v.iter_mut() {
                        e.1 = e.1 * inv % p;
                    }
                    if track_kernel {
                        for e in ops.iter_mut() {
                            e.1 = e.1 * inv % p;
                        }
                        store_ops.push(ops);
                    }
                    pivot_of_row[low as usize] = Some(store.len() as u32);
                    store.push(v);
                    lows.push(Some(low));
                    break;
                }
            }
        }
    }
    Reduction {
        prime: p,
        rank: store.len(),
        lows,
        kernel,
    }
}

pub fn rank_mod_p(m: &BoundaryMatrix, p: u64) -> usize {
    reduce_mod_p(m, p, false).rank
}

/// Rank over `Q` by fraction-free (Bareiss) elimination on a dense copy.
pub fn rank_exact(m: &BoundaryMatrix) -> usize {
    let dense = m.to_dense();
    let mut a: Vec<Vec<BigInt>> = dense
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    bareiss_rank(&mut a)
}

pub fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let pivot = a[rank][col].clone();
        for r in rank + 1..rows {
            let factor = a[r][col].clone();
            for c in col + 1..cols {
                let v = &pivot * &a[r][c] - &factor * &a[rank][c];
                debug_assert!((&v % &prev).is_zero());
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// How a rank over `Q` was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    /// `(prime, rank mod prime)` for every prime tried.
    pub modular: Vec<(u64, usize)>,
    pub exact: Option<usize>,
    /// True when the primes disagreed and no exact rank was available; the
    /// reported rank is then the largest modular rank, a lower bound on the rank over `Q`.
    pub unresolved: bool,
}

/// Rank over `Q` via two primes, escalating to a third prime and then
/// exact elimination when they disagree.
pub fn certified_rank(m: &BoundaryMatrix, salt: u64) -> RankCertificate {
    let salt = salt ^ ((m.rows as u64) << 32) ^ m.cols() as u64 ^ (m.nnz() as u64).rotate_left(17);
    let q1 = verification_prime(salt);
    let r0 = rank_mod_p(m, PRIMARY_PRIME);
    let r1 = rank_mod_p(m, q1);
    let mut modular = vec![(PRIMARY_PRIME, r0), (q1, r1)];
    if r0 == r1 {
        return RankCertificate {
            rank: r0,
            modular,
            exact: None,
            unresolved: false,
        };
    }
    let mut q2 = verification_prime(salt.wrapping_add(1));
    if q2 == q1 {
        q2 = verification_prime(salt.wrapping_add(2));
    }
    modular.push((q2, rank_mod_p(m, q2)));
    let best = modular.iter().map(|&(_, r)| r).max().unwrap_or(0);
    if m.rows.max(m.cols()) <= EXACT_LIMIT {
        let e = rank_exact(m);
        return RankCertificate {
            rank: e,
            modular,
            exact: Some(e),
            unresolved: false,
        };
    }
    RankCertificate {
        rank: best,
        modular,
        exact: None,
        unresolved: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::boundary_matrix;
    use crate::model::SimplicialComplex;

    #[test]
    fn primes() {
        assert!(is_prime(PRIMARY_PRIME));
        for salt in 0..50 {
            let q = verification_prime(salt);
            assert!(is_prime(q) && q < 1 << 31 && q > 1 << 30 && q != PRIMARY_PRIME);
        }
    }

    #[test]
    fn bareiss_small() {
        let mut a: Vec<Vec<BigInt>> = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(bareiss_rank(&mut a), 2);
    }

    #[test]
    fn ranks_on_simplex_skeleta() {
        // rank ∂_j on the full skeleton of Δ_n is C(n−1, j)
        let y = SimplicialComplex::full_skeleton(6, 3);
        for j in 1..=3 {
            let m = boundary_matrix(&y, j).unwrap();
            let expected = crate::numeric::binomial_u64(5, j as u64).unwrap() as usize;
            assert_eq!(rank_mod_p(&m, PRIMARY_PRIME), expected);
            assert_eq!(rank_exact(&m), expected);
            assert_eq!(certified_rank(&m, 0).rank, expected);
        }
    }

    #[test]
    fn modulus_two_loses_rank_on_projective_plane() {
        // six-vertex real projective plane: b_2 over Z/2 is 1, over Q is 0
        let tris = [
            [1, 2, 4], [1, 2, 6], [1, 3, 4], [1, 3, 5], [1, 5, 6],
            [2, 3, 5], [2, 3, 6], [2, 4, 5], [3, 4, 6], [4, 5, 6],
        ];
        let y = SimplicialComplex::closure(
            6,
            2,
            tris.iter().map(|t| crate::model::Simplex::new(t.iter().copied()).unwrap()),
        )
        .unwrap();
        let m = boundary_matrix(&y, 2).unwrap();
        assert_eq!(rank_mod_p(&m, 2), 9);
        assert_eq!(rank_mod_p(&m, PRIMARY_PRIME), 10);
        assert_eq!(rank_exact(&m), 10);
    }

    #[test]
    fn kernel_vectors_are_cycles() {
        let y = SimplicialComplex::full_skeleton(5, 2);
        let m = boundary_matrix(&y, 1).unwrap();
        let red = reduce_mod_p(&m, PRIMARY_PRIME, true);
        assert_eq!(red.kernel.len(), m.cols() - red.rank);
        for z in &red.kernel {
            let mut acc = vec![0u64; m.rows];
            for &(c, coef) in z {
                for &(r, s) in &m.columns[c as usize] {
                    let s = if s > 0 { 1 } else { PRIMARY_PRIME - 1 };
                    acc[r as usize] = (acc[r as usize] + coef * s) % PRIMARY_PRIME;
                }
            }
            assert!(acc.iter().all(|&x| x == 0));
        }
    }
}
