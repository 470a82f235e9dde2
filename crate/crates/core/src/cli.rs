//! Command-line surface. Every subcommand returns a JSON value for stdout,
//! optionally writes data files, and leaves a `<output>.manifest.json`
//! sidecar next to each of them.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{overlay_window, simulate_heat_trace, tc_window, TavisCummingsConfig};
use crate::error::{Error, Result};
use crate::hamiltonian::{bell_perturbed, heisenberg, qubit, tfim, tfim_ground_energy, z_sum, PauliHamiltonian};
use crate::pauli::MAX_DENSE_QUBITS;
use crate::stab_energy::{stabilizer_gap, tfim_gap, GapReport};
use crate::thermo::{classify, family_sweep, family_thresholds, preset, stab_heat_window, stab_heat_window_band, CertificationReason, HeatVerdict, ThermalContext, PRESETS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERTIFIED: i32 = 10;
pub const EXIT_INPUT: i32 = 2;

pub const TFIM_SCHEMA: &str = "tfim-sweep/v1";
pub const FAMILY_SCHEMA: &str = "family-sweep/v1";
pub const TRACE_SCHEMA: &str = "heat-trace/v1";

#[derive(Debug, Parser)]
#[command(name = "magic-heat", version, about = "Energy and heat witnesses of nonstabilizerness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilizer gap E_STAB - E_gs of a Hamiltonian.
    Gap {
        #[command(flatten)]
        source: HamiltonianArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-site energies and gap of the periodic Ising chain over a field grid.
    SweepTfim {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        h_min: f64,
        #[arg(long, default_value_t = 2.0)]
        h_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilizer heat window at a fixed energy.
    HeatWindow {
        #[command(flatten)]
        source: HamiltonianArgs,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long = "E0", alias = "e0", allow_hyphen_values = true)]
        e0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verdict from a measured energy and heat with error bars.
    Detect {
        #[command(flatten)]
        source: HamiltonianArgs,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long = "E0", alias = "e0", allow_hyphen_values = true)]
        e0: f64,
        #[arg(long = "Q", alias = "q", allow_hyphen_values = true)]
        q: f64,
        #[arg(long = "dE", alias = "de", default_value_t = 0.0)]
        de: f64,
        #[arg(long = "dQ", alias = "dq", default_value_t = 0.0)]
        dq: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Heat sweep and thresholds for a preset state family.
    Family {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, default_value_t = 1e-6)]
        star_tol: f64,
        /// CSV path; thresholds go to the same stem with `.thresholds.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Heat trace of two qubits coupled to a cavity mode.
    TavisCummings {
        /// JSON config; missing fields take their defaults.
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exactly one Hamiltonian source. Builders take `key=value` pairs.
#[derive(Debug, Args, Clone, Default)]
pub struct HamiltonianArgs {
    #[arg(long, value_name = "FILE")]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long, num_args = 1.., value_name = "n=.. h=..")]
    pub tfim: Option<Vec<String>>,
    #[arg(long, num_args = 1.., value_name = "n=..")]
    pub heisenberg: Option<Vec<String>>,
    #[arg(long = "bell-perturbed", num_args = 1.., value_name = "eps=..")]
    pub bell_perturbed: Option<Vec<String>>,
    #[arg(long, num_args = 1.., value_name = "x=.. y=.. z=..")]
    pub qubit: Option<Vec<String>>,
    /// `sum_i Z_i` on this many qubits.
    #[arg(long)]
    pub n: Option<usize>,
}

/// Which Hamiltonian was asked for, kept so large Ising chains can use the
/// closed forms.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    File { path: String },
    Tfim { n: usize, h: f64 },
    Heisenberg { n: usize },
    BellPerturbed { eps: f64 },
    Qubit { x: f64, y: f64, z: f64 },
    ZSum { n: usize },
}

fn pairs(items: &[String]) -> Result<Vec<(String, String)>> {
    items
        .iter()
        .flat_map(|s| s.split([',', ' ']).filter(|t| !t.is_empty()))
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Config(format!("expected key=value, got {t:?}")))
        })
        .collect()
}

fn lookup<T: std::str::FromStr>(kv: &[(String, String)], key: &str, default: Option<T>) -> Result<T> {
    match kv.iter().find(|(k, _)| k == key) {
        Some((_, v)) => v.parse().map_err(|_| Error::Config(format!("bad value for {key}: {v:?}"))),
        None => default.ok_or_else(|| Error::Config(format!("missing {key}="))),
    }
}

fn check_keys(kv: &[(String, String)], allowed: &[&str]) -> Result<()> {
    match kv.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(Error::Config(format!("unknown key {k:?}, expected one of {allowed:?}"))),
        None => Ok(()),
    }
}

impl HamiltonianArgs {
    pub fn source(&self) -> Result<Source> {
        let given = [
            self.hamiltonian.is_some(),
            self.tfim.is_some(),
            self.heisenberg.is_some(),
            self.bell_perturbed.is_some(),
            self.qubit.is_some(),
            self.n.is_some(),
        ];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::Config("give exactly one of --hamiltonian, --tfim, --heisenberg, --bell-perturbed, --qubit, --n".into()));
        }
        if let Some(p) = &self.hamiltonian {
            return Ok(Source::File { path: p.display().to_string() });
        }
        if let Some(v) = &self.tfim {
            let kv = pairs(v)?;
            check_keys(&kv, &["n", "h"])?;
            return Ok(Source::Tfim { n: lookup(&kv, "n", None)?, h: lookup(&kv, "h", Some(1.0))? });
        }
        if let Some(v) = &self.heisenberg {
            let kv = pairs(v)?;
            check_keys(&kv, &["n"])?;
            return Ok(Source::Heisenberg { n: lookup(&kv, "n", None)? });
        }
        if let Some(v) = &self.bell_perturbed {
            let kv = pairs(v)?;
            check_keys(&kv, &["eps"])?;
            return Ok(Source::BellPerturbed { eps: lookup(&kv, "eps", None)? });
        }
        if let Some(v) = &self.qubit {
            let kv = pairs(v)?;
            check_keys(&kv, &["x", "y", "z"])?;
            return Ok(Source::Qubit { x: lookup(&kv, "x", Some(0.0))?, y: lookup(&kv, "y", Some(0.0))?, z: lookup(&kv, "z", Some(0.0))? });
        }
        Ok(Source::ZSum { n: self.n.expect("counted above") })
    }
}

impl Source {
    pub fn build(&self) -> Result<PauliHamiltonian> {
        match self {
            Source::File { path } => PauliHamiltonian::parse_json(&fs::read_to_string(path)?),
            Source::Tfim { n, h } => tfim(*n, *h),
            Source::Heisenberg { n } => heisenberg(*n),
            Source::BellPerturbed { eps } => bell_perturbed(*eps),
            Source::Qubit { x, y, z } => qubit([*x, *y, *z]),
            Source::ZSum { n } => z_sum(*n),
        }
    }

    fn input_paths(&self) -> Vec<String> {
        match self {
            Source::File { path } => vec![path.clone()],
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub parameters: Value,
    pub outputs: Vec<String>,
    pub version: String,
    pub wall_time_s: f64,
}

/// `results.csv` -> `results.csv.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// What a subcommand produced, before anything is written.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub subcommand: &'static str,
    pub inputs: Vec<String>,
    pub parameters: Value,
    pub result: Value,
    /// Extra files keyed by path, written verbatim.
    pub files: Vec<(PathBuf, String)>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapOutput {
    pub source: Source,
    pub report: GapReport,
    pub method: &'static str,
    pub zero: bool,
}

pub fn cmd_gap(source: &Source) -> Result<GapOutput> {
    let (report, method) = match *source {
        Source::Tfim { n, h } if n > MAX_DENSE_QUBITS => (tfim_gap(n, h), "closed-form"),
        _ => (stabilizer_gap(&source.build()?)?, "dense"),
    };
    Ok(GapOutput { source: source.clone(), zero: report.is_zero(), report, method })
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct TfimRow {
    pub h: f64,
    pub e_gs_per_site: f64,
    pub e_stab_per_site: f64,
    pub gap_per_site: f64,
    /// Dense ground energy per site for small chains, empty otherwise.
    pub e_gs_dense_per_site: Option<f64>,
}

pub fn cmd_sweep_tfim(n: usize, h_min: f64, h_max: f64, steps: usize) -> Result<Vec<TfimRow>> {
    if n < 2 || steps == 0 || h_min < 0.0 || h_max < h_min {
        return Err(Error::Config(format!("need n >= 2, steps >= 1 and 0 <= h_min <= h_max (n = {n}, steps = {steps})")));
    }
    let nf = n as f64;
    (0..steps)
        .map(|k| {
            let h = if steps == 1 { h_min } else { h_min + (h_max - h_min) * k as f64 / (steps - 1) as f64 };
            let g = tfim_gap(n, h);
            let dense = if n <= 10 { Some(tfim(n, h)?.ground_energy_dense()?.0 / nf) } else { None };
            Ok(TfimRow {
                h,
                e_gs_per_site: tfim_ground_energy(n, h) / nf,
                e_stab_per_site: g.e_stab / nf,
                gap_per_site: g.delta / nf,
                e_gs_dense_per_site: dense,
            })
        })
        .collect()
}

fn feasible(h: PauliHamiltonian, beta: f64, e0: f64) -> Result<ThermalContext> {
    let ctx = ThermalContext::new(h, beta)?;
    let tol = 1e-12 * (1.0 + e0.abs());
    if !e0.is_finite() || e0 < ctx.e_min() - tol || e0 > ctx.e_max() + tol {
        return Err(Error::InfeasibleEnergy(e0));
    }
    Ok(ctx)
}

pub fn cmd_heat_window(h: PauliHamiltonian, beta: f64, e0: f64) -> Result<(Value, i32)> {
    let ctx = feasible(h, beta, e0)?;
    match stab_heat_window(&ctx, e0) {
        Ok(w) => {
            let mut notes = Vec::new();
            if w.s_min == 0.0 {
                notes.push("S_min = 0: a pure stabilizer state has this energy, so the window is the widest possible".to_string());
            }
            if w.cooling_clamped || w.heating_clamped {
                notes.push("a branch reached its zero-temperature limit and was clamped".to_string());
            }
            Ok((json!({ "window": w, "notes": notes }), EXIT_OK))
        }
        Err(Error::EmptySlice(_)) => Ok((
            json!({
                "window": null,
                "verdict": HeatVerdict::Certified { reason: CertificationReason::EmptySlice },
                "notes": ["no stabilizer state has this energy; reaching it certifies nonstabilizerness"],
            }),
            EXIT_CERTIFIED,
        )),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectOutput {
    pub verdict: HeatVerdict,
    /// Window bounds, widened over `E0 +- dE` when an energy error is given.
    pub q_c_stab: Option<f64>,
    pub q_h_stab: Option<f64>,
    /// Distance from the error bar to the nearest window edge; negative when
    /// they overlap.
    pub margin: Option<f64>,
    pub note: String,
}

pub const BAND_POINTS: usize = 41;

pub fn cmd_detect(h: PauliHamiltonian, beta: f64, e0: f64, q: f64, de: f64, dq: f64) -> Result<DetectOutput> {
    if de < 0.0 || dq < 0.0 {
        return Err(Error::Config("error bars must be non-negative".into()));
    }
    let ctx = feasible(h, beta, e0)?;
    let (lo, hi) = match stab_heat_window_band(&ctx, e0, de, BAND_POINTS) {
        Ok(b) => b,
        Err(Error::EmptySlice(_)) => {
            return Ok(DetectOutput {
                verdict: HeatVerdict::Certified { reason: CertificationReason::EmptySlice },
                q_c_stab: None,
                q_h_stab: None,
                margin: None,
                note: "no stabilizer state is compatible with the measured energy".into(),
            })
        }
        Err(e) => return Err(e),
    };
    let mut window = stab_heat_window(&ctx, e0).or_else(|_| crate::thermo::heat_window_from(&ctx, e0, 0.0))?;
    window.q_c_stab = lo;
    window.q_h_stab = hi;
    let verdict = classify(&window, q, dq);
    let margin = (lo - (q + dq)).max((q - dq) - hi);
    let note = match verdict {
        HeatVerdict::Certified { .. } => "the heat error bar lies entirely outside the stabilizer window".to_string(),
        HeatVerdict::Inconclusive if q - dq >= lo && q + dq <= hi => "the measured heat lies inside the stabilizer window".to_string(),
        HeatVerdict::Inconclusive => format!("the error bar overlaps the window edge by {:.3e}", -margin),
    };
    Ok(DetectOutput { verdict, q_c_stab: Some(lo), q_h_stab: Some(hi), margin: Some(margin), note })
}

fn csv_text<T: Serialize>(schema: &str, manifest: &Path, rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))?;
    Ok(format!("# schema: {schema}\n# manifest: {}\n{body}", manifest.display()))
}

/// Reads rows written by [`csv_text`], skipping the header comments.
pub fn read_csv<T: serde::de::DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

fn stamp(mut v: Value, manifest: &Path) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("manifest".into(), Value::String(manifest.display().to_string()));
    }
    v
}

pub fn run_command(command: &Command) -> Result<Outcome> {
    let mut files = Vec::new();
    let outcome = |subcommand, inputs, parameters, result, files, exit_code| Outcome { subcommand, inputs, parameters, result, files, exit_code };
    match command {
        Command::Gap { source, out } => {
            let src = source.source()?;
            let g = cmd_gap(&src)?;
            let result = serde_json::to_value(&g)?;
            if let Some(p) = out {
                files.push((p.clone(), serde_json::to_string_pretty(&stamp(result.clone(), &manifest_path(p)))?));
            }
            Ok(outcome("gap", src.input_paths(), json!({ "source": src }), result, files, EXIT_OK))
        }
        Command::SweepTfim { n, h_min, h_max, steps, out } => {
            let rows = cmd_sweep_tfim(*n, *h_min, *h_max, *steps)?;
            if let Some(p) = out {
                files.push((p.clone(), csv_text(TFIM_SCHEMA, &manifest_path(p), &rows)?));
            }
            let peak = rows.iter().max_by(|a, b| a.gap_per_site.total_cmp(&b.gap_per_site)).expect("steps >= 1");
            let result = json!({ "rows": rows.len(), "max_gap_per_site": peak.gap_per_site, "argmax_h": peak.h });
            Ok(outcome("sweep-tfim", Vec::new(), json!({ "n": n, "h_min": h_min, "h_max": h_max, "steps": steps }), result, files, EXIT_OK))
        }
        Command::HeatWindow { source, beta, e0, out } => {
            let src = source.source()?;
            let (result, code) = cmd_heat_window(src.build()?, *beta, *e0)?;
            if let Some(p) = out {
                files.push((p.clone(), serde_json::to_string_pretty(&stamp(result.clone(), &manifest_path(p)))?));
            }
            Ok(outcome("heat-window", src.input_paths(), json!({ "source": src, "beta": beta, "e0": e0 }), result, files, code))
        }
        Command::Detect { source, beta, e0, q, de, dq, out } => {
            let src = source.source()?;
            let d = cmd_detect(src.build()?, *beta, *e0, *q, *de, *dq)?;
            let code = if d.verdict.is_certified() { EXIT_CERTIFIED } else { EXIT_OK };
            let result = serde_json::to_value(&d)?;
            if let Some(p) = out {
                files.push((p.clone(), serde_json::to_string_pretty(&stamp(result.clone(), &manifest_path(p)))?));
            }
            let params = json!({ "source": src, "beta": beta, "e0": e0, "q": q, "de": de, "dq": dq });
            Ok(outcome("detect", src.input_paths(), params, result, files, code))
        }
        Command::Family { preset: name, beta, steps, star_tol, out } => {
            let family = preset(name).ok_or_else(|| Error::Config(format!("unknown preset {name:?}, expected one of {PRESETS:?}")))?;
            if *steps == 0 {
                return Err(Error::Config("steps must be at least 1".into()));
            }
            let rows = family_sweep(&family, *beta, *steps)?;
            let thresholds = family_thresholds(&family, *beta, *star_tol)?;
            let result = json!({ "preset": name, "thresholds": thresholds });
            if let Some(p) = out {
                files.push((p.clone(), csv_text(FAMILY_SCHEMA, &manifest_path(p), &rows)?));
                let tp = p.with_extension("thresholds.json");
                files.push((tp.clone(), serde_json::to_string_pretty(&stamp(result.clone(), &manifest_path(&tp)))?));
            }
            Ok(outcome("family", Vec::new(), json!({ "preset": name, "beta": beta, "steps": steps, "star_tol": star_tol }), result, files, EXIT_OK))
        }
        Command::TavisCummings { config, out } => {
            let cfg: TavisCummingsConfig = match config {
                Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
                None => TavisCummingsConfig::default(),
            };
            let trace = simulate_heat_trace(&cfg)?;
            let window = tc_window(cfg.beta)?;
            let overlay = overlay_window(&trace, &window);
            if let Some(p) = out {
                #[derive(Serialize)]
                struct Row {
                    t: f64,
                    q: f64,
                    certified: bool,
                }
                let rows: Vec<Row> = trace.times.iter().zip(&trace.q).zip(&overlay.verdicts).map(|((&t, &q), v)| Row { t, q, certified: v.is_certified() }).collect();
                files.push((p.clone(), csv_text(TRACE_SCHEMA, &manifest_path(p), &rows)?));
            }
            let q_min = trace.q.iter().copied().fold(f64::INFINITY, f64::min);
            let result = json!({
                "window": window,
                "q_min": q_min,
                "certified": overlay.certified,
                "first_certified_time": overlay.first_certified_time,
                "truncation": trace.truncation,
                "cutoff_delta": trace.cutoff_delta,
            });
            let code = if overlay.certified { EXIT_CERTIFIED } else { EXIT_OK };
            let inputs = config.iter().map(|p| p.display().to_string()).collect();
            Ok(outcome("tavis-cummings", inputs, serde_json::to_value(&cfg)?, result, files, code))
        }
    }
}

/// Writes the data files and their manifests; returns the manifest paths.
pub fn write_outputs(outcome: &Outcome, wall_time_s: f64) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (path, text) in &outcome.files {
        fs::write(path, text)?;
        let manifest = RunManifest {
            subcommand: outcome.subcommand.to_string(),
            inputs: outcome.inputs.clone(),
            parameters: outcome.parameters.clone(),
            outputs: vec![path.display().to_string()],
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s,
        };
        let mp = manifest_path(path);
        fs::write(&mp, serde_json::to_string_pretty(&manifest)?)?;
        written.push(mp);
    }
    Ok(written)
}

/// Parses, runs and reports; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match run_command(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    if let Err(e) = write_outputs(&outcome, start.elapsed().as_secs_f64()) {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&outcome.result).expect("json value"));
    outcome.exit_code
}
