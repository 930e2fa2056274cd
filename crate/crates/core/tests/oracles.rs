mod common;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use rsc_core::degrees::expected_fds_exact;
use rsc_core::model::{probability_mass, ProbabilityVector, Simplex, SimplicialComplex};
use rsc_core::phase::second_moment_fd_exact;
use rsc_core::spectra::{link, link_parameters, spectral_gap, LinkGraph};

fn complex(n: u32, r: usize, faces: &[Face]) -> SimplicialComplex {
    SimplicialComplex::from_faces(n, r, faces.iter().map(|f| Simplex::new(f.iter().copied()).unwrap())).unwrap()
}

#[test]
fn second_moment_matches_brute_force_at_n5() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3 {
        let p: Vec<BigRational> = (0..2).map(|_| random_probability(&mut rng)).collect();
        let pv = ProbabilityVector::new(p.clone()).unwrap();
        for d in 0..2 {
            let (_, second) = brute_force_moments(5, 1, &p, d);
            assert_eq!(second_moment_fd_exact(5, d, &pv).unwrap(), second, "d = {d}, p = {p:?}");
        }
    }
}

#[test]
fn degree_counts_match_brute_force() {
    let p = vec![ratio(2, 3), ratio(1, 2), ratio(1, 3)];
    let pv = ProbabilityVector::new(p.clone()).unwrap();
    let n = 4;
    for d in 0..2 {
        for s in 0..=(n - d as u64 - 1) {
            let mut oracle = BigRational::zero();
            for (faces, mass) in brute_force_masses(n as u32, 2, &p) {
                let count = faces
                    .iter()
                    .filter(|f| f.len() == d + 1)
                    .filter(|f| {
                        faces.iter().filter(|g| g.len() == d + 2 && f.iter().all(|v| g.contains(v))).count() as u64 == s
                    })
                    .count();
                oracle += mass * BigRational::from_integer(count.into());
            }
            assert_eq!(expected_fds_exact(n, d, s, &pv).unwrap(), oracle, "d = {d}, s = {s}");
        }
    }
}

/// The link of a fixed face, conditioned on the face being present, follows
/// the model on the remaining vertices with the link parameters.
#[test]
fn link_distribution_matches_link_parameters() {
    let p = vec![ratio(3, 4), ratio(2, 3), ratio(1, 2)];
    let pv = ProbabilityVector::new(p.clone()).unwrap();
    let (n, r) = (4u32, 2usize);
    for sigma in [vec![1u32], vec![1, 2]] {
        let d = sigma.len() - 1;
        let rest: Vec<u32> = (1..=n).filter(|v| !sigma.contains(v)).collect();
        let relabel = |v: u32| rest.iter().position(|&w| w == v).unwrap() as u32 + 1;
        let mut conditional: BTreeMap<Vec<Face>, BigRational> = BTreeMap::new();
        let mut total = BigRational::zero();
        for (faces, mass) in brute_force_masses(n, r, &p) {
            if !faces.contains(&sigma) {
                continue;
            }
            let y = complex(n, r, &faces);
            let lk = link(&y, &Simplex::new(sigma.iter().copied()).unwrap()).unwrap();
            let mut key: Vec<Face> = lk
                .iter_faces()
                .map(|f| f.vertices().iter().map(|&v| relabel(v)).collect())
                .collect();
            key.sort();
            *conditional.entry(key).or_insert_with(BigRational::zero) += &mass;
            total += mass;
        }
        let lp = link_parameters(&pv, d).unwrap();
        let m = rest.len() as u32;
        let cap = r - d - 1;
        for (faces, mass) in &conditional {
            let expected = probability_mass(&complex(m, cap, faces), &lp).unwrap();
            assert_eq!(mass / &total, expected, "sigma = {sigma:?}, link {faces:?}");
        }
    }
}

#[test]
fn normalized_laplacian_spectrum_matches_dense_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..30 {
        let m = rng.random_range(2..14);
        let edges: Vec<(usize, usize)> = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .filter(|_| rng.random_bool(0.4))
            .collect();
        let g = LinkGraph::from_edges(m, edges.clone());
        let mut deg = vec![0f64; m];
        for &(a, b) in &edges {
            deg[a] += 1.0;
            deg[b] += 1.0;
        }
        let keep: Vec<usize> = (0..m).filter(|&i| deg[i] > 0.0).collect();
        let Ok(rep) = spectral_gap(&g) else {
            panic!("spectral gap failed on {edges:?}");
        };
        let k = keep.len();
        if k == 0 {
            assert!(rep.eigenvalues.is_empty());
            continue;
        }
        let mut lap = DMatrix::<f64>::identity(k, k);
        for &(a, b) in &edges {
            let (i, j) = (keep.iter().position(|&x| x == a).unwrap(), keep.iter().position(|&x| x == b).unwrap());
            let w = -1.0 / (deg[a] * deg[b]).sqrt();
            lap[(i, j)] = w;
            lap[(j, i)] = w;
        }
        let mut reference: Vec<f64> = lap.symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        assert_eq!(rep.eigenvalues.len(), reference.len());
        for (a, b) in rep.eigenvalues.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-8, "{:?} vs {reference:?}", rep.eigenvalues);
        }
    }
}
