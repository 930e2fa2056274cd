use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use rustc_hash::FxHashMap;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, ExperimentKind, ModelParams, DEFAULT_DELTA};
use super::stats::{chi_square, fraction, mean, median};
use super::{run_trials, trials, Trial, TrialFailure};
use crate::cycles::{cycle_size_bound, minimal_cycle_support, sphere_size_bound};
use crate::degrees::{concentration_report, isolated_fraction, purity_check};
use crate::error::{Error, Result};
use crate::homology::{connected_components, homology};
use crate::model::{enumerate_complexes, probability_mass, ProbabilityVector, Simplex, SimplicialComplex};
use crate::numeric::{factorial_f64, rational_to_f64};
use crate::phase::{classify, expected_fd, face_count_band, face_regime, tau, AlphaSchedule, FaceRegime, SliceSpec};
use crate::sampler::{sample, sample_skeleton, SampleSpec};
use crate::spectra::garland_consistency;

const P_VALUE_FLOOR: f64 = 0.001;
const DEFAULT_T: f64 = 0.2;
const DOMINATION_FACTOR: f64 = 2.0;

pub(crate) struct KindOutput {
    pub csv: String,
    pub results: Value,
    pub pass: bool,
    pub failures: Vec<TrialFailure>,
}

pub(crate) fn dispatch(config: &ExperimentConfig, params: &ModelParams) -> Result<KindOutput> {
    let kind = config.experiment.kind;
    match (kind, params) {
        (ExperimentKind::MeasureOracle, ModelParams::Probabilities(p)) => measure_oracle(config, p),
        (ExperimentKind::PhaseDiagram, _) => phase_diagram(config),
        (_, ModelParams::Exponents(s)) => match kind {
            ExperimentKind::FaceNumbers => face_numbers(config, s),
            ExperimentKind::BettiDomination => betti_domination(config, s),
            ExperimentKind::Degrees => degrees(config, s),
            ExperimentKind::Garland => garland(config, s),
            ExperimentKind::Connectivity => connectivity(config, s),
            ExperimentKind::CycleHunt => cycle_hunt(config, s),
            ExperimentKind::MeasureOracle | ExperimentKind::PhaseDiagram => unreachable!(),
        },
        _ => Err(Error::Config(format!("{} got the wrong kind of model parameters", kind.name()))),
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: ToString>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn trial_cells(t: &Trial) -> Vec<String> {
    vec![t.n.to_string(), t.index.to_string(), t.seed.to_string()]
}

fn exponents_spec(s: &AlphaSchedule, t: &Trial) -> SampleSpec {
    SampleSpec::with_exponents(t.n, s.at(u64::from(t.n)).clone(), t.seed)
}

fn threshold(config: &ExperimentConfig, default: f64) -> f64 {
    config.experiment.threshold.unwrap_or(default)
}

fn face_key(y: &SimplicialComplex) -> Vec<Simplex> {
    y.iter_faces().cloned().collect()
}

fn describe(y: &SimplicialComplex) -> String {
    face_key(y)
        .iter()
        .map(|s| s.vertices().iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("|")
}

fn measure_oracle(config: &ExperimentConfig, p: &ProbabilityVector) -> Result<KindOutput> {
    let n = config.grid()[0];
    let complexes: Vec<SimplicialComplex> = enumerate_complexes(n as usize, config.model.r)?.collect();
    let masses = complexes
        .iter()
        .map(|y| probability_mass(y, p))
        .collect::<Result<Vec<BigRational>>>()?;
    let total: BigRational = masses.iter().sum();
    let exact_sum_is_one = total.is_one();
    let index: FxHashMap<Vec<Simplex>, usize> =
        complexes.iter().enumerate().map(|(i, y)| (face_key(y), i)).collect();
    let (ok, failures) = run_trials(&trials(config), |t| {
        let y = sample(&SampleSpec::with_probabilities(n, p.clone(), t.seed))?;
        index
            .get(&face_key(&y))
            .copied()
            .ok_or_else(|| Error::InternalConsistency("sampled complex missing from the enumeration".into()))
    });
    let mut observed = vec![0u64; complexes.len()];
    for (_, i) in &ok {
        observed[*i] += 1;
    }
    let draws = ok.len() as f64;
    let expected: Vec<f64> = masses.iter().map(|m| rational_to_f64(m) * draws).collect();
    let chi = chi_square(&observed, &expected);
    let mut table = Table::new(["complex", "mass", "expected", "observed"]);
    for (i, y) in complexes.iter().enumerate() {
        table.push(vec![
            describe(y),
            masses[i].to_string(),
            expected[i].to_string(),
            observed[i].to_string(),
        ]);
    }
    Ok(KindOutput {
        csv: table.to_csv()?,
        results: json!({
            "n": n,
            "complexes": complexes.len(),
            "exact_sum": total.to_string(),
            "exact_sum_is_one": exact_sum_is_one,
            "draws": ok.len(),
            "chi_square": chi,
            "p_value_floor": P_VALUE_FLOOR,
        }),
        pass: exact_sum_is_one && chi.p_value > P_VALUE_FLOOR,
        failures,
    })
}

#[derive(Serialize)]
struct FaceGroup {
    n: u32,
    trials: usize,
    successes: usize,
    fraction: f64,
    expected: f64,
    lower: f64,
    upper: f64,
}

fn face_numbers(config: &ExperimentConfig, s: &AlphaSchedule) -> Result<KindOutput> {
    let d = config.experiment.d.expect("validated");
    let t_band = config.experiment.t.unwrap_or(DEFAULT_T);
    let regime = face_regime(d, s.terminal(), config.tolerance());
    let (ok, failures) = run_trials(&trials(config), |t| {
        Ok(sample_skeleton(&exponents_spec(s, t), d)?.num_faces(d) as u64)
    });
    let band = |n: u32| face_count_band(u64::from(n), d, s.at(u64::from(n)), t_band);
    let success = |n: u32, f: u64| -> Option<bool> {
        match regime {
            FaceRegime::Vanishing => Some(f == 0),
            FaceRegime::Concentrated { .. } => {
                let (lo, hi) = band(n);
                Some(lo <= f as f64 && f as f64 <= hi)
            }
            FaceRegime::Subpolynomial => None,
        }
    };
    let mut table = Table::new(["n", "trial", "seed", "f_d", "lower", "upper", "success"]);
    for (t, f) in &ok {
        let (lo, hi) = band(t.n);
        let mut row = trial_cells(t);
        row.extend([f.to_string(), lo.to_string(), hi.to_string(), opt(success(t.n, *f))]);
        table.push(row);
    }
    let need = threshold(
        config,
        match regime {
            FaceRegime::Vanishing => 0.99,
            _ => 0.95,
        },
    );
    let groups: Vec<FaceGroup> = config
        .grid()
        .into_iter()
        .map(|n| {
            let fs: Vec<u64> = ok.iter().filter(|(t, _)| t.n == n).map(|(_, f)| *f).collect();
            let hits = fs.iter().filter(|&&f| success(n, f) == Some(true)).count();
            let (lower, upper) = band(n);
            FaceGroup {
                n,
                trials: fs.len(),
                successes: hits,
                fraction: fraction(hits, fs.len()),
                expected: expected_fd(u64::from(n), d, s.at(u64::from(n))).expectation,
                lower,
                upper,
            }
        })
        .collect();
    let pass = regime == FaceRegime::Subpolynomial || groups.iter().all(|g| g.fraction >= need);
    Ok(KindOutput {
        csv: table.to_csv()?,
        results: json!({ "d": d, "t": t_band, "regime": regime, "threshold": need, "groups": groups }),
        pass,
        failures,
    })
}

#[derive(Serialize)]
struct BettiGroup {
    n: u32,
    trials: usize,
    median_b_k: Option<f64>,
    prediction: f64,
    median_ratio_to_prediction: Option<f64>,
    within_factor: bool,
    median_max_ratio: Option<f64>,
}

fn betti_domination(config: &ExperimentConfig, s: &AlphaSchedule) -> Result<KindOutput> {
    let r = config.model.r;
    let k = match config.experiment.k {
        Some(k) => k,
        None => classify(s.terminal(), config.tolerance())
            .critical_dimension()
            .expect("validated") as usize,
    };
    let (ok, failures) = run_trials(&trials(config), |t| {
        let h = homology(&sample(&exponents_spec(s, t))?)?;
        Ok((h.f_vector.0, h.betti.betti))
    });
    let max_ratio = |b: &[u64]| -> f64 {
        let other = (0..=r).filter(|&j| j != k).map(|j| b[j]).max().unwrap_or(0) as f64;
        if b[k] == 0 {
            if other == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            other / b[k] as f64
        }
    };
    let mut header: Vec<String> = ["n", "trial", "seed"].iter().map(|s| s.to_string()).collect();
    header.extend((0..=r).map(|j| format!("f_{j}")));
    header.extend((0..=r).map(|j| format!("b_{j}")));
    header.push("max_ratio".into());
    let mut table = Table::new(header);
    for (t, (f, b)) in &ok {
        let mut row = trial_cells(t);
        row.extend(f.iter().map(u64::to_string));
        row.extend(b.iter().map(u64::to_string));
        row.push(max_ratio(b).to_string());
        table.push(row);
    }
    let groups: Vec<BettiGroup> = config
        .grid()
        .into_iter()
        .map(|n| {
            let rows: Vec<&Vec<u64>> = ok.iter().filter(|(t, _)| t.n == n).map(|(_, (_, b))| b).collect();
            let bk: Vec<f64> = rows.iter().map(|b| b[k] as f64).collect();
            let ratios: Vec<f64> = rows.iter().map(|b| max_ratio(b)).collect();
            let prediction = ((n as f64).ln() * tau(k, s.at(u64::from(n)))).exp() / factorial_f64(k + 1);
            let med = median(&bk);
            let rel = med.map(|m| m / prediction);
            BettiGroup {
                n,
                trials: rows.len(),
                median_b_k: med,
                prediction,
                median_ratio_to_prediction: rel,
                within_factor: rel.is_some_and(|x| (1.0 / DOMINATION_FACTOR..=DOMINATION_FACTOR).contains(&x)),
                median_max_ratio: median(&ratios),
            }
        })
        .collect();
    let decreasing = groups.windows(2).all(|w| match (w[0].median_max_ratio, w[1].median_max_ratio) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    });
    let pass = groups.iter().all(|g| g.within_factor) && decreasing;
    Ok(KindOutput {
        csv: table.to_csv()?,
        results: json!({ "k": k, "factor": DOMINATION_FACTOR, "ratio_decreasing": decreasing, "groups": groups }),
        pass,
        failures,
    })
}

#[derive(Serialize)]
struct DegreeGroup {
    n: u32,
    trials: usize,
    concentrated_fraction: Option<f64>,
    mean_isolated_fraction: Option<f64>,
    pure_fraction: Option<f64>,
}

struct DegreeRow {
    faces: Option<u64>,
    out_of_band: Option<u64>,
    isolated: Option<Option<f64>>,
    pure: Option<bool>,
}

fn degrees(config: &ExperimentConfig, s: &AlphaSchedule) -> Result<KindOutput> {
    let e = &config.experiment;
    let r = config.model.r;
    let delta = e.delta.unwrap_or(DEFAULT_DELTA);
    let k = e.k.or_else(|| {
        classify(s.terminal(), config.tolerance())
            .critical_dimension()
            .filter(|&c| c >= 0)
            .map(|c| c as usize)
    });
    let level = [e.d.map(|d| d + 1), e.d_high.map(|d| d + 1), k]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0)
        .min(r);
    let (ok, failures) = run_trials(&trials(config), |t| {
        let spec = exponents_spec(s, t);
        let y = sample_skeleton(&spec, level)?;
        let conc = e
            .d
            .map(|d| concentration_report(&y, d, delta, s.at(u64::from(t.n))))
            .transpose()?;
        Ok(DegreeRow {
            faces: conc.as_ref().map(|c| c.faces),
            out_of_band: conc.as_ref().map(|c| c.out_of_band),
            isolated: e.d_high.map(|d| isolated_fraction(&y, d)).transpose()?,
            pure: k.map(|k| purity_check(&y, k)),
        })
    });
    let mut table = Table::new(["n", "trial", "seed", "faces_d", "out_of_band", "isolated_fraction", "pure"]);
    for (t, row) in &ok {
        let mut cells = trial_cells(t);
        cells.extend([
            opt(row.faces),
            opt(row.out_of_band),
            opt(row.isolated.flatten()),
            opt(row.pure),
        ]);
        table.push(cells);
    }
    let groups: Vec<DegreeGroup> = config
        .grid()
        .into_iter()
        .map(|n| {
            let rows: Vec<&DegreeRow> = ok.iter().filter(|(t, _)| t.n == n).map(|(_, r)| r).collect();
            let m = rows.len();
            let iso: Vec<f64> = rows.iter().filter_map(|r| r.isolated.flatten()).collect();
            DegreeGroup {
                n,
                trials: m,
                concentrated_fraction: e
                    .d
                    .map(|_| fraction(rows.iter().filter(|r| r.out_of_band == Some(0)).count(), m)),
                mean_isolated_fraction: e.d_high.and_then(|_| mean(&iso)),
                pure_fraction: k.map(|_| fraction(rows.iter().filter(|r| r.pure == Some(true)).count(), m)),
            }
        })
        .collect();
    let need = threshold(config, 0.9);
    let last = groups.last().expect("nonempty grid");
    let concentration_ok = last.concentrated_fraction.is_none_or(|x| x >= need);
    let purity_ok = last.pure_fraction.is_none_or(|x| x >= need);
    let isolated_increasing = groups.windows(2).all(|w| {
        match (w[0].mean_isolated_fraction, w[1].mean_isolated_fraction) {
            (Some(a), Some(b)) => b > a,
            (None, None) => true,
            _ => false,
        }
    });
    let isolated_ok = e.d_high.is_none()
        || (last.mean_isolated_fraction.is_some_and(|x| x >= need) && isolated_increasing);
    Ok(KindOutput {
        csv: table.to_csv()?,
        results: json!({
            "d": e.d,
            "d_high": e.d_high,
            "k": k,
            "delta": delta,
            "threshold": need,
            "concentration_ok": concentration_ok,
            "isolated_ok": isolated_ok,
            "isolated_increasing": isolated_increasing,
            "purity_ok": purity_ok,
            "groups": groups,
        }),
        pass: concentration_ok && isolated_ok && purity_ok,
        failures,
    })
}

fn garland(config: &ExperimentConfig, s: &AlphaSchedule) -> Result<KindOutput> {
    let max_level = config.experiment.level;
    let (ok, failures) = run_trials(&trials(config), |t| garland_consistency(&sample(&exponents_spec(s, t))?));
    let mut table = Table::new([
        "n",
        "trial",
        "seed",
        "dim",
        "levels_passed",
        "reduced_betti",
        "counterexamples",
    ]);
    let mut counterexamples = 0usize;
    let mut passing_complexes = 0usize;
    let within = |l: usize| max_level.is_none_or(|m| l <= m);
    for (t, g) in &ok {
        let bad = g.counterexamples.iter().filter(|&&l| within(l)).count();
        counterexamples += bad;
        if g.levels_passed.iter().enumerate().any(|(l, &p)| p && within(l)) {
            passing_complexes += 1;
        }
        let mut row = trial_cells(t);
        row.extend([
            g.k.to_string(),
            g.levels_passed
                .iter()
                .map(|&p| u8::from(p).to_string())
                .collect::<Vec<_>>()
                .join(";"),
            g.reduced_betti.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
            bad.to_string(),
        ]);
        table.push(row);
    }
    Ok(KindOutput {
        csv: table.to_csv()?,
        results: json!({
            "level": max_level,
            "complexes": ok.len(),
            "complexes_with_passing_level": passing_complexes,
            "counterexamples": counterexamples,
        }),
        pass: counterexamples == 0,
        failures,
    })
}

#[derive(Serialize)]
struct RateGroup {
    n: u32,
    trials: usize,
    successes: usize,
    fraction: f64,
}

fn rate_groups(config: &ExperimentConfig, ok: &[(Trial, bool)]) -> Vec<RateGroup> {
    config
        .grid()
        .into_iter()
        .map(|n| {
            let m = ok.iter().filter(|(t, _)| t.n == n).count();
            let hits = ok.iter().filter(|(t, s)| t.n == n && *s).count();
            RateGroup {
                n,
                trials: m,
                successes: hits,
                fraction: fraction(hits, m),
            }
        })
        .collect()
}

fn connectivity(config: &ExperimentConfig, s: &AlphaSchedule) -> Result<KindOutput> {
    let r = config.model.r;
    let crit = classify(s.terminal(), config.tolerance())
        .critical_dimension()
        .expect("validated");
    let (ok, failures) = run_trials(&trials(config), |t| {
        let spec = exponents_spec(s, t);
        match crit {
            -1 => {
                let y = sample_skeleton(&spec, 0)?;
                Ok((y.f_vector(), None, None))
            }
            0 => {
                let y = sample_skeleton(&spec, r.min(2))?;
                let h = homology(&y)?;
                Ok((h.f_vector, Some(h.betti.get(0)), Some(h.betti.get(1))))
            }
            _ => {
                let y = sample_skeleton(&spec, 1)?;
                Ok((y.f_vector(), Some(connected_components(&y).count as u64), None))
            }
        }
    });
    let success = |f0: u64, b0: Option<u64>, b1: Option<u64>| match crit {
        -1 => f0 == 0,
        0 => b1 == Some(0) && b0.is_some_and(|b| b > 1),
        _ => b0 == Some(1),
    };
    let mut table = Table::new(["n", "trial", "seed", "f_0", "f_1", "b_0", "b_1", "success"]);
    let mut flags = Vec::with_capacity(ok.len());
    for (t, (f, b0, b1)) in &ok {
        let hit = success(f.get(0), *b0, *b1);
        let mut row = trial_cells(t);
        row.extend([
            f.get(0).to_string(),
            f.get(1).to_string(),
            opt(*b0),
            opt(*b1),
            hit.to_string(),
        ]);
        table.push(row);
        flags.push((*t, hit));
    }
    let need = threshold(config, if crit == -1 { 0.98 } else { 0.95 });
    let groups = rate_groups(config, &flags);
    let claim = match crit {
        -1 => "empty",
        0 => "forest with more than one component",
        _ => "connected",
    };
    Ok(KindOutput {
        csv: table.to_csv()?,
        results: json!({ "critical_dimension": crit, "claim": claim, "threshold": need, "groups": groups }),
        pass: groups.iter().all(|g| g.fraction >= need),
        failures,
    })
}

fn cycle_hunt(config: &ExperimentConfig, s: &AlphaSchedule) -> Result<KindOutput> {
    let r = config.model.r;
    let k = config.experiment.k.expect("validated");
    let alpha = s.terminal();
    let bound = cycle_size_bound(k, alpha)?;
    let sphere = if k >= 2 { sphere_size_bound(k, alpha).ok() } else { None };
    let (ok, failures) = run_trials(&trials(config), |t| {
        let y = sample_skeleton(&exponents_spec(s, t), (k + 1).min(r))?;
        minimal_cycle_support(&y, k)
    });
    let mut table = Table::new(["n", "trial", "seed", "cycles", "max_vertex_count", "violations"]);
    let mut total = 0usize;
    let mut violations = 0usize;
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for (t, supports) in &ok {
        let bad = supports.iter().filter(|c| c.vertex_count as f64 > bound).count();
        total += supports.len();
        violations += bad;
        for c in supports {
            *sizes.entry(c.vertex_count).or_insert(0) += 1;
        }
        let mut row = trial_cells(t);
        row.extend([
            supports.len().to_string(),
            opt(supports.iter().map(|c| c.vertex_count).max()),
            bad.to_string(),
        ]);
        table.push(row);
    }
    Ok(KindOutput {
        csv: table.to_csv()?,
        results: json!({
            "k": k,
            "cycle_bound": bound,
            "sphere_bound": sphere,
            "cycles": total,
            "vertex_count_histogram": sizes,
            "violations": violations,
        }),
        pass: violations == 0,
        failures,
    })
}

fn phase_diagram(config: &ExperimentConfig) -> Result<KindOutput> {
    let e = &config.experiment;
    let spec = SliceSpec {
        r: config.model.r,
        free: e.free.expect("validated"),
        fixed: e.fixed.clone(),
        steps: e.steps.expect("validated"),
        max: e.max.expect("validated"),
        tolerance: config.tolerance(),
    };
    let rows = crate::phase::phase_slice(&spec)?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for row in &rows {
        *counts.entry(row.domain.label()).or_insert(0) += 1;
    }
    Ok(KindOutput {
        csv: crate::phase::slice_to_csv(&rows, spec.free),
        results: json!({ "points": rows.len(), "domains": counts }),
        pass: true,
        failures: Vec::new(),
    })
}
