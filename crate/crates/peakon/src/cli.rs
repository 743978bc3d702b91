//! Batch command-line front end: spectrum and Weyl extraction, chart
//! construction, spectral evolution with reconstruction, direct simulation,
//! inverse reconstruction, and the verification suites.
//!
//! All commands validate inputs before computing and write artifacts
//! atomically (temp file plus rename), so failures leave no partial output.
//! A fixed seed makes every randomized suite byte-reproducible.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dynamics::{integrate_grid, Controls, Outcome};
use crate::error::{Error, Result};
use crate::herglotz::Herglotz;
use crate::inverse_spectral::{from_chart, reconstruct, WeylData, WeylFlavor};
use crate::scalar::Rat;
use crate::spectral_flow::{
    chart, chart_csv, evolve, ChartKind, HamiltonianSpec,
};
use crate::string::{
    from_peakons, mixed_spectrum, to_peakons, weyl_e0, weyl_omega0, DiscreteString,
    MixedBoundary, PeakonState,
};
use crate::verify::{self, SuiteConfig};

#[derive(Parser, Debug)]
#[command(
    name = "peakon",
    about = "Inverse-spectral toolkit for peakon systems on discrete strings",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues for a mixed boundary condition, plus both Weyl functions.
    Spectrum(SpectrumArgs),
    /// Weyl function of a configuration, optionally as plot-ready samples.
    Weyl(WeylArgs),
    /// Action-angle chart for one boundary family.
    Chart(ChartArgs),
    /// Linear evolution in spectral coordinates, reconstructed to peakons.
    Evolve(EvolveArgs),
    /// Direct adaptive integration of the peakon system.
    Simulate(SimulateArgs),
    /// String and peakon state from Weyl data.
    Reconstruct(ReconstructArgs),
    /// Randomized verification suites; exit 0 iff every check passes.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct IoArgs {
    /// Path to the input JSON (peakon state, string, or Weyl data).
    #[arg(long, conflicts_with = "inline")]
    pub input: Option<PathBuf>,
    /// Inline input JSON.
    #[arg(long)]
    pub inline: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Boundary pair "a,b" for `a phi + b psi = 0`.
    #[arg(long, default_value = "0,1")]
    pub boundary: String,
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Which Weyl function to emit.
    #[arg(long, value_enum, default_value = "omega0")]
    pub which: WhichWeyl,
    /// Emit (x, y) graph samples with pole-adjacent refinement instead of
    /// the pole/residue object.
    #[arg(long)]
    pub plot_data: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WhichWeyl {
    Omega0,
    E0,
}

#[derive(Args, Debug)]
pub struct ChartArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Chart family: level sets of Omega_0 (c) or of E_0 (f).
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Chart parameter (C or F).
    #[arg(long, allow_negative_numbers = true)]
    pub param: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    C,
    F,
}

impl From<KindArg> for ChartKind {
    fn from(k: KindArg) -> ChartKind {
        match k {
            KindArg::C => ChartKind::C,
            KindArg::F => ChartKind::F,
        }
    }
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, value_enum, default_value = "c")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub param: f64,
    /// Named flow: h1 (translation-type) or h2 (energy-type).
    #[arg(long, value_enum, default_value = "h2", conflicts_with = "coeffs")]
    pub hamiltonian: NamedFlow,
    /// Custom power-sum coefficients "m=c" comma-separated, e.g. "1=-1,3=0.5".
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Output times "t1,t2,...".
    #[arg(long, conflicts_with = "t_grid", allow_hyphen_values = true)]
    pub times: Option<String>,
    /// Output grid "start:stop:step".
    #[arg(long)]
    pub t_grid: Option<String>,
    /// Also integrate the system directly and emit a deviation column.
    #[arg(long)]
    pub with_ode: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NamedFlow {
    H1,
    H2,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, conflicts_with = "t_grid")]
    pub times: Option<String>,
    #[arg(long)]
    pub t_grid: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub collision_eps: f64,
    /// Full controls record as JSON
    /// `{"rtol": ..., "atol": ..., "max_step": ..., "collision_eps": ...}`;
    /// overrides the individual flags.
    #[arg(long)]
    pub controls: Option<String>,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Which normalization the input satisfies.
    #[arg(long, value_enum, default_value = "omega0")]
    pub flavor: WhichWeyl,
    /// Parse and reconstruct in exact rational arithmetic ("p/q" strings).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Seed for every randomized suite.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Scale factor applied to every tolerance (0 forces residual checks to fail).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Smaller suite sizes for a fast smoke run.
    #[arg(long)]
    pub quick: bool,
    /// Extra Weyl-data JSON whose identities are checked (corruption probe).
    #[arg(long)]
    pub weyl: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Runs a parsed invocation. Errors map to exit codes via [`Error::exit_code`].
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Weyl(a) => cmd_weyl(a),
        Command::Chart(a) => cmd_chart(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

// ---------------------------------------------------------------------------
// Input handling and atomic output
// ---------------------------------------------------------------------------

fn read_input(io: &IoArgs) -> Result<Value> {
    let text = match (&io.input, &io.inline) {
        (Some(path), None) => fs::read_to_string(path)?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => {
            return Err(Error::InvalidInput(
                "provide --input PATH or --inline JSON".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflict"),
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))
}

/// Accepts either a peakon state or a string object and returns both views.
fn load_configuration(v: &Value) -> Result<(Option<PeakonState>, DiscreteString<f64>)> {
    if v.get("q").is_some() || v.get("p").is_some() {
        let s = PeakonState::from_json(v)?;
        let d = from_peakons(&s)?;
        Ok((Some(s), d))
    } else if v.get("gaps").is_some() {
        Ok((None, DiscreteString::<f64>::from_json(v)?))
    } else {
        Err(Error::InvalidInput(
            "expected {\"q\": [...], \"p\": [...]} or {\"gaps\": [...], \"masses\": [...]}".into(),
        ))
    }
}

/// Writes through a temp file and renames, so no partial artifact survives a
/// failure; stdout when no path was given.
fn emit(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
        Some(p) => {
            let tmp = temp_sibling(p);
            {
                let mut f = fs::File::create(&tmp)?;
                f.write_all(content.as_bytes())?;
                f.sync_all()?;
            }
            fs::rename(&tmp, p)?;
            Ok(())
        }
    }
}

fn temp_sibling(p: &Path) -> PathBuf {
    let mut name = p.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    p.with_file_name(name)
}

fn parse_boundary(s: &str) -> Result<MixedBoundary> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "boundary must be \"a,b\", got {s:?}"
        )));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| Error::InvalidInput(format!("bad a: {e}")))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| Error::InvalidInput(format!("bad b: {e}")))?;
    MixedBoundary::new(a, b)
}

fn parse_times(times: &Option<String>, grid: &Option<String>) -> Result<Vec<f64>> {
    let out: Vec<f64> = if let Some(times) = times {
        times
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("bad time {t:?}: {e}")))
            })
            .collect::<Result<_>>()?
    } else if let Some(grid) = grid {
        let parts: Vec<&str> = grid.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "grid must be start:stop:step, got {grid:?}"
            )));
        }
        let start: f64 = parts[0].parse().map_err(|_| {
            Error::InvalidInput(format!("bad grid start {:?}", parts[0]))
        })?;
        let stop: f64 = parts[1].parse().map_err(|_| {
            Error::InvalidInput(format!("bad grid stop {:?}", parts[1]))
        })?;
        let step: f64 = parts[2].parse().map_err(|_| {
            Error::InvalidInput(format!("bad grid step {:?}", parts[2]))
        })?;
        if !(step > 0.0) || stop < start {
            return Err(Error::InvalidInput("need step > 0 and stop >= start".into()));
        }
        let n = ((stop - start) / step).round() as usize;
        (0..=n).map(|k| start + step * k as f64).collect()
    } else {
        return Err(Error::InvalidInput("provide --times or --t-grid".into()));
    };
    if out.is_empty() {
        return Err(Error::InvalidInput("empty time grid".into()));
    }
    for w in out.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidInput("times must be strictly increasing".into()));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_spectrum(a: SpectrumArgs) -> Result<()> {
    let v = read_input(&a.io)?;
    let (_, d) = load_configuration(&v)?;
    let bc = parse_boundary(&a.boundary)?;
    let lam = mixed_spectrum(&d, bc)?;
    let omega = weyl_omega0(&d)?;
    let e0 = weyl_e0(&d)?;
    let content = match a.io.format {
        Format::Csv => {
            let mut out = String::from("index,lambda\n");
            for (k, l) in lam.iter().enumerate() {
                out.push_str(&format!("{},{}\n", k + 1, l));
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "boundary": {"a": bc.a, "b": bc.b},
                "eigenvalues": lam,
                "omega0": omega.to_json()?,
                "e0": e0.to_json()?,
            });
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
    };
    emit(&a.io.output, &content)
}

fn cmd_weyl(a: WeylArgs) -> Result<()> {
    let v = read_input(&a.io)?;
    let (_, d) = load_configuration(&v)?;
    let f = match a.which {
        WhichWeyl::Omega0 => weyl_omega0(&d)?,
        WhichWeyl::E0 => weyl_e0(&d)?,
    };
    let content = if a.plot_data {
        plot_samples_csv(&f)?
    } else {
        match a.io.format {
            Format::Json => serde_json::to_string_pretty(&f.to_json()?).expect("serializable"),
            Format::Csv => {
                let sum = f.sum_form().ok_or_else(|| {
                    Error::Numerical("no pole/residue form available".into())
                })?;
                let mut out = String::from("k,pole,residue\n");
                for (k, (p, r)) in sum.poles.iter().zip(&sum.residues).enumerate() {
                    out.push_str(&format!("{},{},{}\n", k + 1, p, r));
                }
                out.push_str(&format!("alpha,{},\n", sum.alpha));
                out
            }
        }
    };
    emit(&a.io.output, &content)
}

/// Graph samples over a padded pole range, with geometrically refined
/// clusters on both sides of each pole.
fn plot_samples_csv(f: &Herglotz<f64>) -> Result<String> {
    let sum = f
        .sum_form()
        .ok_or_else(|| Error::Numerical("no pole/residue form available".into()))?;
    let (lo, _hi, span) = if sum.poles.is_empty() {
        (-2.0, 2.0, 4.0)
    } else {
        let lo = 0.0f64.min(sum.poles[0]) - 0.5;
        let hi = sum.poles[sum.poles.len() - 1] + 0.5;
        (lo, hi, hi - lo)
    };
    let mut xs: Vec<f64> = (0..=400).map(|k| lo + span * k as f64 / 400.0).collect();
    for &p in &sum.poles {
        for k in 2..=6 {
            let off = span * 10f64.powi(-k);
            xs.push(p - off);
            xs.push(p + off);
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut out = String::from("x,y\n");
    for &x in &xs {
        if let Ok(y) = f.eval(&x) {
            out.push_str(&format!("{x},{y}\n"));
        }
    }
    Ok(out)
}

fn cmd_chart(a: ChartArgs) -> Result<()> {
    let v = read_input(&a.io)?;
    let (_, d) = load_configuration(&v)?;
    let ch = chart(&d, a.kind.into(), a.param)?;
    let content = match a.io.format {
        Format::Csv => chart_csv(&ch),
        Format::Json => {
            let l0 = d.left_gap();
            let mut doc = ch.to_json();
            // Admissibility diagnostics: the hard bound used here plus the
            // level-construction range hint for the C family.
            doc["diagnostics"] = json!({
                "left_gap": l0,
                "c_admissible_below": l0,
                "c_range_hint": [-4.0 / (4.0 - l0), 4.0],
                "f_admissible_above": -1.0 / l0,
            });
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
    };
    emit(&a.io.output, &content)
}

fn hamiltonian_from_args(
    kind: ChartKind,
    param: f64,
    named: NamedFlow,
    coeffs: &Option<String>,
) -> Result<HamiltonianSpec> {
    if let Some(spec) = coeffs {
        let mut map = BTreeMap::new();
        for part in spec.split(',') {
            let (m, c) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("bad coefficient {part:?}")))?;
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|e| Error::InvalidInput(format!("bad power {m:?}: {e}")))?;
            let c: f64 = c
                .trim()
                .parse()
                .map_err(|e| Error::InvalidInput(format!("bad coefficient {c:?}: {e}")))?;
            map.insert(m, c);
        }
        if map.is_empty() {
            return Err(Error::InvalidInput("empty coefficient list".into()));
        }
        Ok(HamiltonianSpec::custom(kind, param, map))
    } else {
        Ok(match named {
            NamedFlow::H1 => HamiltonianSpec::h1(kind, param),
            NamedFlow::H2 => HamiltonianSpec::h2(kind, param),
        })
    }
}

fn cmd_evolve(a: EvolveArgs) -> Result<()> {
    let v = read_input(&a.io)?;
    let (state, d) = load_configuration(&v)?;
    let times = parse_times(&a.times, &a.t_grid)?;
    let kind: ChartKind = a.kind.into();
    let ch = chart(&d, kind, a.param)?;
    let hspec = hamiltonian_from_args(kind, a.param, a.hamiltonian, &a.coeffs)?;

    let mut rows: Vec<(f64, PeakonState)> = Vec::with_capacity(times.len());
    for &t in &times {
        let moved = evolve(&ch, &hspec, t)?;
        let dt = from_chart(&moved)?;
        rows.push((t, to_peakons(&dt, t)?));
    }

    let ode = if a.with_ode {
        let s0 = state.ok_or_else(|| {
            Error::InvalidInput("--with-ode needs a peakon-state input".into())
        })?;
        let traj = integrate_grid(&s0, &times, &Controls::default())?;
        if traj.samples.len() != times.len() + 1 {
            return Err(Error::Numerical(
                "direct integration halted before the end of the grid".into(),
            ));
        }
        Some(traj)
    } else {
        None
    };

    let n = rows.first().map_or(0, |(_, s)| s.len());
    let content = match a.io.format {
        Format::Csv => {
            let mut header = String::from("t");
            for k in 1..=n {
                header.push_str(&format!(",q{k}"));
            }
            for k in 1..=n {
                header.push_str(&format!(",p{k}"));
            }
            if ode.is_some() {
                header.push_str(",deviation");
            }
            header.push('\n');
            let mut out = header;
            for (idx, (t, s)) in rows.iter().enumerate() {
                out.push_str(&format!("{t}"));
                for q in s.positions() {
                    out.push_str(&format!(",{q}"));
                }
                for p in s.momenta() {
                    out.push_str(&format!(",{p}"));
                }
                if let Some(traj) = &ode {
                    let reference = &traj.samples[idx + 1];
                    let dev = s
                        .positions()
                        .iter()
                        .zip(reference.state.positions())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    out.push_str(&format!(",{dev}"));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "chart": {"kind": match kind { ChartKind::C => "c", ChartKind::F => "f" }, "parameter": a.param},
                "hamiltonian": hspec.to_json(),
                "trajectory": rows
                    .iter()
                    .map(|(t, s)| json!({"t": t, "q": s.positions(), "p": s.momenta()}))
                    .collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
    };
    emit(&a.io.output, &content)
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let v = read_input(&a.io)?;
    let s = PeakonState::from_json(&v)?;
    let times = parse_times(&a.times, &a.t_grid)?;
    let controls = match &a.controls {
        Some(json) => serde_json::from_str(json)
            .map_err(|e| Error::InvalidInput(format!("bad controls JSON: {e}")))?,
        None => Controls {
            rtol: a.rtol,
            atol: a.atol,
            collision_eps: a.collision_eps,
            ..Controls::default()
        },
    };
    let traj = integrate_grid(&s, &times, &controls)?;
    let n = s.len();
    let content = match a.io.format {
        Format::Csv => {
            let mut out = String::from("t");
            for k in 1..=n {
                out.push_str(&format!(",q{k}"));
            }
            for k in 1..=n {
                out.push_str(&format!(",p{k}"));
            }
            out.push_str(",H,P\n");
            for sm in &traj.samples {
                out.push_str(&format!("{}", sm.t));
                for q in sm.state.positions() {
                    out.push_str(&format!(",{q}"));
                }
                for p in sm.state.momenta() {
                    out.push_str(&format!(",{p}"));
                }
                out.push_str(&format!(",{},{}\n", sm.h, sm.p_total));
            }
            out
        }
        Format::Json => {
            let outcome = match traj.outcome {
                Outcome::Completed => json!({"kind": "completed"}),
                Outcome::Collision { time, estimate } => {
                    json!({"kind": "collision", "time": time, "estimate": estimate})
                }
            };
            let doc = json!({
                "outcome": outcome,
                "h_drift": traj.h_drift,
                "p_drift": traj.p_drift,
                "samples": traj
                    .samples
                    .iter()
                    .map(|sm| json!({"t": sm.t, "q": sm.state.positions(), "p": sm.state.momenta(), "H": sm.h, "P": sm.p_total}))
                    .collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
    };
    emit(&a.io.output, &content)
}

fn cmd_reconstruct(a: ReconstructArgs) -> Result<()> {
    let v = read_input(&a.io)?;
    let flavor = match a.flavor {
        WhichWeyl::Omega0 => WeylFlavor::Omega0,
        WhichWeyl::E0 => WeylFlavor::E0,
    };
    // Weyl data may arrive flat or wrapped as {"function": ..., "flavor": ...}.
    let (func_json, flavor) = match v.get("function") {
        Some(f) => {
            let fl = match v.get("flavor").and_then(Value::as_str) {
                Some("omega0") | Some("Omega0") => WeylFlavor::Omega0,
                Some("e0") | Some("E0") => WeylFlavor::E0,
                None => flavor,
                Some(other) => {
                    return Err(Error::InvalidInput(format!("bad flavor {other:?}")))
                }
            };
            (f.clone(), fl)
        }
        None => (v.clone(), flavor),
    };

    let doc = if a.exact {
        let f = Herglotz::<Rat>::from_json(&func_json)?;
        let w = WeylData::new(f, flavor)?;
        let d = reconstruct(&w)?;
        let peakons = to_peakons(&d.to_f64(), 0.0)?;
        json!({
            "string": d.to_json(),
            "peakons": serde_json::to_value(&peakons).expect("serializable"),
        })
    } else {
        let f = Herglotz::<f64>::from_json(&func_json)?;
        let w = WeylData::new(f, flavor)?;
        let d = reconstruct(&w)?;
        let peakons = to_peakons(&d, 0.0)?;
        json!({
            "string": d.to_json(),
            "peakons": serde_json::to_value(&peakons).expect("serializable"),
        })
    };
    emit(
        &a.io.output,
        &serde_json::to_string_pretty(&doc).expect("serializable"),
    )
}

fn cmd_verify(a: VerifyArgs) -> Result<()> {
    let mut cfg = SuiteConfig {
        seed: a.seed,
        ..SuiteConfig::default()
    };
    if a.quick {
        cfg.boole_count = 40;
        cfg.roundtrip_count = 20;
        cfg.trace_count = 15;
        cfg.dual_count = 5;
    }
    if let Some(t) = a.tol {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::InvalidInput(format!("bad tolerance scale {t}")));
        }
        cfg.tol_scale = t;
    }
    let mut report = verify::run_all(&cfg);
    if let Some(path) = &a.weyl {
        let text = fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))?;
        // Parsed leniently so corrupted data reaches the checks instead of
        // being rejected at the door.
        let f = Herglotz::<f64>::from_json_unvalidated(&v)?;
        report.extend(verify::check_weyl_input(&f, &cfg));
    }
    let content =
        serde_json::to_string_pretty(&report.to_json(cfg.seed)).expect("serializable");
    emit(&a.output, &content)?;
    if report.all_pass() {
        Ok(())
    } else {
        Err(Error::VerificationFailed(format!(
            "{} of {} checks failed",
            report.failures().len(),
            report.checks.len()
        )))
    }
}

/// Entry point used by the binary: runs and maps errors to exit codes with a
/// machine-readable record on stderr.
pub fn main_with_exit() -> ! {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => std::process::exit(0),
        Err(e) => {
            let doc = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            eprintln!("{}", serde_json::to_string(&doc).expect("serializable"));
            std::process::exit(e.exit_code());
        }
    }
}
