use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{classify, d2_subdomain, D2Subdomain, Domain, ExponentVector};
use crate::error::{Error, Result};

/// A planar grid through exponent space: two free coordinates swept over
/// `[0, max]` in `steps` intervals, all other coordinates fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub r: usize,
    pub free: (usize, usize),
    #[serde(default)]
    pub fixed: Vec<(usize, f64)>,
    pub steps: usize,
    pub max: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceRow {
    pub alpha_i: f64,
    pub alpha_j: f64,
    pub domain: Domain,
    pub d2_subdomain: Option<D2Subdomain>,
}

pub fn phase_slice(spec: &SliceSpec) -> Result<Vec<SliceRow>> {
    let (i, j) = spec.free;
    if i == j || i > spec.r || j > spec.r {
        return Err(Error::InvalidParameter(format!(
            "free coordinates ({i}, {j}) must be distinct and <= r = {}",
            spec.r
        )));
    }
    if spec.steps == 0 || !(spec.max > 0.0) {
        return Err(Error::InvalidParameter("grid needs steps >= 1 and max > 0".into()));
    }
    let mut base = vec![0.0; spec.r + 1];
    for &(k, v) in &spec.fixed {
        if k > spec.r || k == i || k == j {
            return Err(Error::InvalidParameter(format!("cannot fix coordinate {k}")));
        }
        base[k] = v;
    }
    let mut rows = Vec::with_capacity((spec.steps + 1) * (spec.steps + 1));
    for a in 0..=spec.steps {
        for b in 0..=spec.steps {
            let x = spec.max * a as f64 / spec.steps as f64;
            let y = spec.max * b as f64 / spec.steps as f64;
            let mut v = base.clone();
            v[i] = x;
            v[j] = y;
            let alpha = ExponentVector::new(v)?;
            rows.push(SliceRow {
                alpha_i: x,
                alpha_j: y,
                domain: classify(&alpha, spec.tolerance),
                d2_subdomain: d2_subdomain(&alpha, spec.tolerance).ok(),
            });
        }
    }
    Ok(rows)
}

/// CSV with columns `alpha_<i>,alpha_<j>,domain`.
pub fn slice_to_csv(rows: &[SliceRow], free: (usize, usize)) -> String {
    let mut out = format!("alpha_{},alpha_{},domain\n", free.0, free.1);
    for row in rows {
        let _ = writeln!(out, "{},{},{}", row.alpha_i, row.alpha_j, row.domain.label());
    }
    out
}
