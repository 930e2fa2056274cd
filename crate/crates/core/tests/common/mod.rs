//! Brute-force references built without the library's enumerator or mass code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Face = Vec<u32>;

pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// All nonempty subsets of `1..=n` with at most `r + 1` elements.
pub fn ambient_faces(n: u32, r: usize) -> Vec<Face> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let f: Face = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        if f.len() <= r + 1 {
            out.push(f);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

fn facets(f: &Face) -> Vec<Face> {
    (0..f.len())
        .map(|skip| f.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect())
        .collect()
}

/// Every down-closed subfamily of the ambient faces with its exact mass
/// `∏_{σ ∈ Y} p_{dim σ} · ∏_{σ external} q_{dim σ}`.
pub fn brute_force_masses(n: u32, r: usize, p: &[BigRational]) -> Vec<(Vec<Face>, BigRational)> {
    let faces = ambient_faces(n, r);
    let m = faces.len();
    assert!(m <= 20, "too many faces for subset enumeration");
    let mut out = Vec::new();
    for mask in 0u64..(1 << m) {
        let chosen: Vec<&Face> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| &faces[i]).collect();
        let has = |f: &Face| f.is_empty() || chosen.contains(&f);
        if !chosen.iter().all(|f| f.len() == 1 || facets(f).iter().all(has)) {
            continue;
        }
        let mut mass = BigRational::one();
        for f in &faces {
            let d = f.len() - 1;
            if has(f) {
                mass *= &p[d];
            } else if f.len() == 1 || facets(f).iter().all(has) {
                mass *= BigRational::one() - &p[d];
            }
        }
        out.push((chosen.into_iter().cloned().collect(), mass));
    }
    out
}

pub fn count_dim(faces: &[Face], d: usize) -> u64 {
    faces.iter().filter(|f| f.len() == d + 1).count() as u64
}

/// Exact `E(f_d)` and `E(f_d²)` over the brute-force distribution.
pub fn brute_force_moments(n: u32, r: usize, p: &[BigRational], d: usize) -> (BigRational, BigRational) {
    let mut first = BigRational::zero();
    let mut second = BigRational::zero();
    for (faces, mass) in brute_force_masses(n, r, p) {
        let f = BigRational::from_integer(BigInt::from(count_dim(&faces, d)));
        first += &mass * &f;
        second += &mass * &f * &f;
    }
    (first, second)
}

/// A rational in `[0, 1]` with a small denominator, endpoints included.
pub fn random_probability(rng: &mut ChaCha8Rng) -> BigRational {
    let den: i64 = rng.random_range(1..=9);
    let num: i64 = rng.random_range(0..=den);
    ratio(num, den)
}

/// Rank over `Q` by plain Gaussian elimination on fractions.
pub fn rational_rank(dense: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = dense
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let factor = &a[i][c] / &a[rank][c];
                for j in c..cols {
                    let sub = &factor * &a[rank][j];
                    a[i][j] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `ψ_k = Σ_i C(k, i) α_i`, written out independently of the library.
pub fn psi_ref(k: usize, alpha: &[f64]) -> f64 {
    alpha.iter().enumerate().map(|(i, a)| binomial(k as u64, i as u64) * a).sum()
}

pub fn phi_ref(k: usize, alpha: &[f64]) -> f64 {
    alpha
        .iter()
        .enumerate()
        .map(|(i, a)| binomial(k as u64, i as u64) * a / (i as f64 + 1.0))
        .sum()
}
