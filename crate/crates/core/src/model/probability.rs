use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{external_faces, SimplicialComplex};
use crate::error::{Error, Result};
use crate::numeric::{rational_pow, rational_to_f64};

/// Multi-parameter `p = (p_0, …, p_r)` with each `p_i ∈ [0, 1]`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityVector {
    p: Vec<BigRational>,
}

impl ProbabilityVector {
    pub fn new(p: Vec<BigRational>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParameter("probability vector is empty".into()));
        }
        for (i, pi) in p.iter().enumerate() {
            if pi < &BigRational::zero() || pi > &BigRational::one() {
                return Err(Error::InvalidParameter(format!("p_{i} = {pi} outside [0, 1]")));
            }
        }
        Ok(ProbabilityVector { p })
    }

    /// From `(numerator, denominator)` pairs.
    pub fn from_ratios(ratios: &[(i64, i64)]) -> Result<Self> {
        let mut p = Vec::with_capacity(ratios.len());
        for &(a, b) in ratios {
            if b == 0 {
                return Err(Error::InvalidParameter("zero denominator".into()));
            }
            p.push(BigRational::new(BigInt::from(a), BigInt::from(b)));
        }
        Self::new(p)
    }

    /// Exact binary expansion of each `f64`.
    pub fn from_f64s(values: &[f64]) -> Result<Self> {
        let p = values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                BigRational::from_float(v)
                    .ok_or_else(|| Error::InvalidParameter(format!("p_{i} = {v} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p)
    }

    /// The same value `x` for every dimension `0..=r`.
    pub fn uniform(r: usize, x: BigRational) -> Result<Self> {
        Self::new(vec![x; r + 1])
    }

    pub fn r(&self) -> usize {
        self.p.len() - 1
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn p(&self, i: usize) -> &BigRational {
        &self.p[i]
    }

    pub fn q(&self, i: usize) -> BigRational {
        BigRational::one() - &self.p[i]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.p
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.p.iter().map(rational_to_f64).collect()
    }

    /// Truncation to `(p_0, …, p_k)`.
    pub fn truncated(&self, k: usize) -> ProbabilityVector {
        ProbabilityVector {
            p: self.p[..=k.min(self.r())].to_vec(),
        }
    }
}

/// Parses `a/b`, an integer or a decimal such as `0.125`, exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("cannot read {t:?} as a rational number"));
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{}{}", if int.is_empty() { "0" } else { int }, frac);
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(num, den))
}

impl std::str::FromStr for ProbabilityVector {
    type Err = Error;

    /// Comma-separated entries, each accepted by [`parse_rational`].
    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?)
    }
}

impl<'de> Deserialize<'de> for ProbabilityVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Text(String),
            Number(f64),
        }
        let entries = Vec::<Entry>::deserialize(deserializer)?;
        let values = entries
            .into_iter()
            .map(|e| match e {
                Entry::Text(t) => parse_rational(&t),
                Entry::Number(x) => BigRational::from_float(x)
                    .ok_or_else(|| Error::InvalidParameter(format!("{x} is not finite"))),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        ProbabilityVector::new(values).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ProbabilityVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.p.iter().map(|x| x.to_string()).collect();
        strings.serialize(serializer)
    }
}

fn check_dims(y: &SimplicialComplex, p_len: usize) -> Result<()> {
    if p_len != y.r() + 1 {
        return Err(Error::InvalidParameter(format!(
            "probability vector has {} entries but r = {}",
            p_len,
            y.r()
        )));
    }
    Ok(())
}

/// Exact `∏ p_i^{f_i(Y)} · ∏ q_i^{e_i(Y)}` with `0^0 = 1` factor-wise.
pub fn probability_mass(y: &SimplicialComplex, p: &ProbabilityVector) -> Result<BigRational> {
    check_dims(y, p.len())?;
    let f = y.f_vector();
    let e = external_faces(y);
    let mut mass = BigRational::one();
    for i in 0..=y.r() {
        mass *= rational_pow(p.p(i), f.get(i));
        mass *= rational_pow(&p.q(i), e[i]);
        if mass.is_zero() {
            break;
        }
    }
    Ok(mass)
}

/// `ln P(Y)` in floating point; `-inf` when the mass is zero.
pub fn log_probability_mass(y: &SimplicialComplex, p: &[f64]) -> Result<f64> {
    check_dims(y, p.len())?;
    let f = y.f_vector();
    let e = external_faces(y);
    let mut acc = 0.0;
    for i in 0..=y.r() {
        acc += pow_log(p[i], f.get(i));
        acc += pow_log(1.0 - p[i], e[i]);
    }
    Ok(acc)
}

fn pow_log(base: f64, exp: u64) -> f64 {
    if exp == 0 {
        0.0
    } else if base <= 0.0 {
        f64::NEG_INFINITY
    } else {
        exp as f64 * base.ln()
    }
}
