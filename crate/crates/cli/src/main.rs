//! `rsc`: sample, classify and analyse random simplicial complexes.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rsc_core::cycles::{cycle_size_bound, minimal_cycle_support, sphere_size_bound};
use rsc_core::degrees::{concentration_report, degree_histogram, expected_fds, expected_fds_exact, isolated_fraction};
use rsc_core::experiment::{self, ExperimentConfig};
use rsc_core::homology::homology;
use rsc_core::model::{io as cio, parse_rational, ProbabilityVector, SimplicialComplex};
use rsc_core::numeric::rational_to_f64;
use rsc_core::phase::{phase_slice, slice_to_csv, ExponentVector, PhaseReport, SliceSpec, DEFAULT_BOUNDARY_TOLERANCE};
use rsc_core::sampler::{sample, SampleSpec};
use rsc_core::spectra::garland_check;
use rsc_core::Error;

#[derive(Parser)]
#[command(name = "rsc", version, about = "Random simplicial complexes in the lower multi-parameter model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one complex and write it as JSON or text.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        /// Output file; `.txt` selects the text format. Defaults to JSON on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = ["json", "text"])]
        format: Option<String>,
    },
    /// Phase report of an exponent vector as JSON.
    Classify {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        alpha: Vec<f64>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BOUNDARY_TOLERANCE)]
        tolerance: f64,
    },
    /// Domain of every point on a planar grid through exponent space, as CSV.
    PhaseSlice {
        #[arg(long)]
        r: usize,
        /// The two free coordinates, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        free: Vec<usize>,
        /// Fixed coordinates as `i=value`, comma separated or repeated.
        #[arg(long, value_delimiter = ',')]
        fixed: Vec<String>,
        /// Intervals per axis.
        #[arg(long, default_value_t = 60)]
        grid: usize,
        #[arg(long, default_value_t = 3.0)]
        max: f64,
        #[arg(long, default_value_t = DEFAULT_BOUNDARY_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rational Betti numbers, f-vector and Morse check of a complex.
    Betti {
        /// Complex file (JSON or text); `-` reads stdin.
        input: PathBuf,
    },
    /// Degree histogram of d-faces as CSV, with a summary JSON.
    Degrees {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.3)]
        delta: f64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary destination; defaults to `<out>.summary.json`, or stderr.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Link spectral gaps of every `level`-simplex against the Garland threshold, as CSV.
    Spectra {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Supports of minimal k-cycles, with the size bounds when alpha is known.
    Cycles {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        k: usize,
    },
    /// Run a TOML-configured experiment and write its CSV and summary.
    Experiment {
        config: PathBuf,
        /// Overrides the seed in the config; `RSC_SEED` applies only when the config has none.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_delimiter = ',', conflicts_with = "p", allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    /// Exact probabilities such as `1/2,0.25`.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<String>>,
    #[arg(long, env = "RSC_SEED")]
    seed: Option<u64>,
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Complex file (JSON or text); `-` reads stdin. Without it a complex is sampled.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
}

enum Params {
    Alpha(ExponentVector),
    P(ProbabilityVector),
}

impl ModelArgs {
    fn params(&self) -> Result<Option<Params>, Error> {
        let params = match (&self.alpha, &self.p) {
            (Some(a), _) => Some(Params::Alpha(ExponentVector::new(a.clone())?)),
            (None, Some(p)) => Some(Params::P(ProbabilityVector::new(
                p.iter().map(|x| parse_rational(x)).collect::<Result<_, _>>()?,
            )?)),
            (None, None) => None,
        };
        let len = params.as_ref().map(|p| match p {
            Params::Alpha(a) => a.r(),
            Params::P(p) => p.r(),
        });
        if let (Some(r), Some(l)) = (self.r, len) {
            if r != l {
                return Err(Error::Config(format!("parameter vector has length {} but --r is {r}", l + 1)));
            }
        }
        Ok(params)
    }

    fn sample(&self) -> Result<SimplicialComplex, Error> {
        let n = self.n.ok_or_else(|| Error::Config("--n is required to sample".into()))?;
        let seed = self
            .seed
            .ok_or_else(|| Error::Config("no seed: pass --seed or set RSC_SEED".into()))?;
        let spec = match self.params()? {
            Some(Params::Alpha(a)) => SampleSpec::with_exponents(n, a, seed),
            Some(Params::P(p)) => SampleSpec::with_probabilities(n, p, seed),
            None => return Err(Error::Config("give --alpha or --p".into())),
        };
        sample(&spec)
    }
}

impl SourceArgs {
    fn complex(&self) -> Result<SimplicialComplex, Error> {
        match &self.input {
            Some(path) => read_complex(path),
            None => self.model.sample(),
        }
    }
}

fn read_complex(path: &Path) -> Result<SimplicialComplex, Error> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    cio::parse_any(&text)
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, content)?,
        None => io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Io(io::Error::other(e));
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

/// 0 success, 1 a verification or acceptance check failed, 2 bad input or config.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InternalConsistency(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Sample { model, out, format } => {
            let y = model.sample()?;
            let text_format = match format.as_deref() {
                Some(f) => f == "text",
                None => out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "txt")),
            };
            let body = if text_format {
                cio::to_text(&y)
            } else {
                cio::to_json(&y)? + "\n"
            };
            emit(out.as_deref(), &body)?;
        }
        Command::Classify { alpha, r, tolerance } => {
            let a = ExponentVector::new(alpha)?;
            if let Some(r) = r.filter(|&r| r != a.r()) {
                return Err(Error::Config(format!("alpha has length {} but --r is {r}", a.r() + 1)));
            }
            emit(None, &pretty(&PhaseReport::new(&a, tolerance))?)?;
        }
        Command::PhaseSlice {
            r,
            free,
            fixed,
            grid,
            max,
            tolerance,
            out,
        } => {
            let fixed = fixed
                .iter()
                .map(|kv| {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| Error::Config(format!("--fixed expects i=value, got {kv:?}")))?;
                    let k = k.trim().parse().map_err(|_| Error::Config(format!("bad index in {kv:?}")))?;
                    let v = v.trim().parse().map_err(|_| Error::Config(format!("bad value in {kv:?}")))?;
                    Ok((k, v))
                })
                .collect::<Result<Vec<(usize, f64)>, Error>>()?;
            if free.len() != 2 {
                return Err(Error::Config(format!("--free takes two indices, got {}", free.len())));
            }
            let spec = SliceSpec {
                r,
                free: (free[0], free[1]),
                fixed,
                steps: grid,
                max,
                tolerance,
            };
            let rows = phase_slice(&spec)?;
            emit(out.as_deref(), &slice_to_csv(&rows, spec.free))?;
        }
        Command::Betti { input } => {
            let h = homology(&read_complex(&input)?)?;
            let report = json!({
                "betti": h.betti.betti,
                "reduced_betti": h.betti.reduced,
                "f_vector": h.f_vector,
                "euler_characteristic": h.euler_characteristic,
                "morse": h.morse,
                "components": h.components,
            });
            emit(None, &pretty(&report)?)?;
        }
        Command::Degrees {
            source,
            d,
            delta,
            out,
            summary,
        } => degrees(&source, d, delta, out.as_deref(), summary.as_deref())?,
        Command::Spectra { input, level, out } => {
            let y = read_complex(&input)?;
            let rep = garland_check(&y, level)?;
            let rows = rep
                .simplices
                .iter()
                .map(|c| {
                    vec![
                        c.simplex.to_string(),
                        c.link_vertices.to_string(),
                        c.connected.to_string(),
                        c.kappa.map(|k| k.to_string()).unwrap_or_default(),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            emit(
                out.as_deref(),
                &csv_text(&["simplex", "link_vertices", "connected", "kappa", "pass"], rows)?,
            )?;
        }
        Command::Cycles { source, k } => {
            let y = source.complex()?;
            let supports = minimal_cycle_support(&y, k)?;
            let (cycle, sphere) = match source.model.params()? {
                Some(Params::Alpha(a)) => (cycle_size_bound(k, &a).ok(), sphere_size_bound(k, &a).ok()),
                _ => (None, None),
            };
            let report = json!({
                "k": k,
                "cycle_bound": cycle,
                "sphere_bound": sphere,
                "supports": supports,
            });
            emit(None, &pretty(&report)?)?;
        }
        Command::Experiment { config, seed, out_dir } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_toml(&text)?;
            if let Some(s) = seed {
                cfg.experiment.seed = Some(s);
            } else if cfg.experiment.seed.is_none() {
                if let Ok(v) = std::env::var("RSC_SEED") {
                    let s = v
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("RSC_SEED = {v:?} is not an unsigned integer")))?;
                    cfg.experiment.seed = Some(s);
                }
            }
            if let Some(dir) = out_dir {
                cfg.output.dir = dir;
            }
            let outcome = experiment::run(&cfg)?;
            let paths = experiment::write_outputs(&outcome)?;
            let s = &outcome.summary;
            println!(
                "{} {}: {} trial failures; wrote {} and {}",
                if s.pass { "PASS" } else { "FAIL" },
                s.kind.name(),
                s.failures.len(),
                paths.csv.display(),
                paths.summary.display()
            );
            return Ok(if s.pass { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn degrees(source: &SourceArgs, d: usize, delta: f64, out: Option<&Path>, summary: Option<&Path>) -> Result<(), Error> {
    let y = source.complex()?;
    let hist = degree_histogram(&y, d)?;
    let params = source.model.params()?;
    let n = u64::from(y.n());
    let max_s = n.saturating_sub(d as u64 + 1);
    let expected = |s: u64| -> Result<Option<f64>, Error> {
        Ok(match &params {
            Some(Params::Alpha(a)) => Some(expected_fds(n, d, s, a)?),
            Some(Params::P(p)) => Some(rational_to_f64(&expected_fds_exact(n, d, s, p)?)),
            None => None,
        })
    };
    let mut rows = Vec::new();
    for s in 0..=max_s {
        let count = hist.count(s);
        let e = expected(s)?;
        if count > 0 || e.is_some_and(|x| x >= 1e-9) {
            rows.push(vec![s.to_string(), count.to_string(), e.map(|x| x.to_string()).unwrap_or_default()]);
        }
    }
    emit(out, &csv_text(&["s", "count", "expected"], rows)?)?;
    let conc = match &params {
        Some(Params::Alpha(a)) => concentration_report(&y, d, delta, a).ok(),
        _ => None,
    };
    let report = json!({
        "d": d,
        "delta": delta,
        "faces": hist.total,
        "mu": conc.as_ref().map(|c| c.mu),
        "mu_prime": conc.as_ref().map(|c| c.mu_prime),
        "fraction_out_of_band": conc.as_ref().and_then(|c| c.fraction_out_of_band),
        "isolated_fraction": isolated_fraction(&y, d)?,
    });
    let body = pretty(&report)?;
    let target = summary
        .map(Path::to_path_buf)
        .or_else(|| out.map(|o| o.with_extension("summary.json")));
    match target {
        Some(p) => fs::write(p, body)?,
        None => io::stderr().write_all(body.as_bytes())?,
    }
    Ok(())
}
