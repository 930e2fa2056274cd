//! Subcomplexes of `Δ_n` with a dimension cap, face and external-face
//! counts, and the exact probability mass of the lower multi-parameter model.

mod complex;
mod enumerate;
pub mod io;
mod probability;
mod simplex;

pub use complex::{is_valid_complex, FVector, RawComplex, SimplicialComplex, ValidityReport};
pub use enumerate::{enumerate_complexes, ComplexEnumerator, MAX_ENUMERATION_N};
pub use probability::{log_probability_mass, parse_rational, probability_mass, ProbabilityVector};
pub use simplex::{Simplex, Vertex};

use crate::numeric::binomial_u64;

/// Exact face counts per dimension.
pub fn f_vector(y: &SimplicialComplex) -> FVector {
    y.f_vector()
}

/// `e_i(Y)`: simplices of dimension `i ≤ r` not in `Y` whose boundary is in `Y`.
///
/// `e_0 = n − f_0` and `e_1 = C(f_0, 2) − f_1`. Higher levels extend each
/// `(i−1)`-face by a larger vertex and test the remaining facets by lookup.
pub fn external_faces(y: &SimplicialComplex) -> Vec<u64> {
    let r = y.r();
    let mut e = vec![0u64; r + 1];
    let f0 = y.num_faces(0) as u64;
    e[0] = u64::from(y.n()) - f0;
    if r >= 1 {
        e[1] = binomial_u64(f0, 2).expect("edge count fits u64") - y.num_faces(1) as u64;
    }
    let verts = y.vertex_ids();
    for (i, slot) in e.iter_mut().enumerate().skip(2) {
        let mut count = 0u64;
        for prefix in y.faces(i - 1) {
            let start = verts.partition_point(|&v| v <= prefix.max_vertex());
            for &w in &verts[start..] {
                let sigma = prefix.with_vertex(w);
                let boundary_present = sigma.facets().all(|(f, _)| y.contains(&f));
                if boundary_present && !y.contains(&sigma) {
                    count += 1;
                }
            }
        }
        *slot = count;
    }
    e
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn f_vector_examples() {
        assert_eq!(f_vector(&SimplicialComplex::empty(4, 2)).0, vec![0, 0, 0]);
        let tri = SimplicialComplex::closure(3, 2, [s(&[1, 2]), s(&[2, 3]), s(&[1, 3])]).unwrap();
        assert_eq!(f_vector(&tri).0, vec![3, 3, 0]);
        assert_eq!(f_vector(&SimplicialComplex::full_skeleton(5, 2)).0, vec![5, 10, 10]);
    }

    #[test]
    fn external_face_examples() {
        assert_eq!(external_faces(&SimplicialComplex::empty(4, 1)), vec![4, 0]);
        let two = SimplicialComplex::closure(2, 1, [s(&[1]), s(&[2])]).unwrap();
        assert_eq!(external_faces(&two), vec![0, 1]);
        let tri = SimplicialComplex::closure(3, 2, [s(&[1, 2]), s(&[2, 3]), s(&[1, 3])]).unwrap();
        assert_eq!(external_faces(&tri), vec![0, 0, 1]);
    }

    #[test]
    fn mass_examples() {
        let p = ProbabilityVector::from_ratios(&[(1, 3), (1, 5)]).unwrap();
        let two = SimplicialComplex::closure(2, 1, [s(&[1]), s(&[2])]).unwrap();
        let expected = p.p(0) * p.p(0) * p.q(1);
        assert_eq!(probability_mass(&two, &p).unwrap(), expected);

        let p0 = ProbabilityVector::from_ratios(&[(2, 7)]).unwrap();
        let empty = SimplicialComplex::empty(3, 0);
        let q = p0.q(0);
        assert_eq!(probability_mass(&empty, &p0).unwrap(), &q * &q * &q);
    }

    #[test]
    fn masses_sum_to_one_for_n3_r1() {
        let p = ProbabilityVector::uniform(1, half()).unwrap();
        let total: BigRational = enumerate_complexes(3, 1)
            .unwrap()
            .map(|y| probability_mass(&y, &p).unwrap())
            .sum();
        assert_eq!(total, BigRational::one());
    }

    #[test]
    fn zero_conventions() {
        let p = ProbabilityVector::from_ratios(&[(0, 1), (1, 1)]).unwrap();
        // empty complex: q_0^3 = 1
        assert_eq!(probability_mass(&SimplicialComplex::empty(3, 1), &p).unwrap(), BigRational::one());
        let v = SimplicialComplex::closure(3, 1, [s(&[1])]).unwrap();
        assert!(probability_mass(&v, &p).unwrap().is_zero());
        // q_1 = 0: two vertices with no edge has an external edge -> zero
        let p1 = ProbabilityVector::from_ratios(&[(1, 2), (1, 1)]).unwrap();
        let two = SimplicialComplex::closure(2, 1, [s(&[1]), s(&[2])]).unwrap();
        assert!(probability_mass(&two, &p1).unwrap().is_zero());
    }

    #[test]
    fn log_mass_matches_exact() {
        let p = ProbabilityVector::from_ratios(&[(2, 3), (1, 4), (3, 5)]).unwrap();
        let pf = p.to_f64();
        for y in enumerate_complexes(4, 2).unwrap().step_by(97) {
            let exact = crate::numeric::rational_to_f64(&probability_mass(&y, &p).unwrap());
            let logm = log_probability_mass(&y, &pf).unwrap();
            assert!((exact.ln() - logm).abs() < 1e-12, "{exact} vs {}", logm.exp());
        }
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let p = ProbabilityVector::from_ratios(&[(1, 2)]).unwrap();
        assert!(probability_mass(&SimplicialComplex::empty(3, 1), &p).is_err());
    }
}
