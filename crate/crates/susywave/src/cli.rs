//! Command-line layer: argument parsing, config-file merging, CSV and
//! JSON emission, and process exit codes.
//!
//! Exit codes: 0 on success (and when every verification check passes),
//! 1 when a computation or write fails (or a check fails), 2 when the
//! input itself is rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gup;
use crate::profiles::{
    ComplexField, Grid, PlaneWaveProfile, Profile, SinusoidalProfile, SusyParams,
};
use crate::scattering::detuning_sweep;
use crate::spectral::{annihilation_residual, intertwining_residual, StencilOrder};
use crate::susy::{
    build_partner_set, index_potential_consistency, partner_potentials, partner_sum_check,
    riccati_residual, PotentialSign, Superpotential,
};
use crate::symmetry::pt_check_analytic;

/// Wave toolkit command line.
#[derive(Parser, Debug)]
#[command(
    name = "susywave",
    version,
    about = "Partner-index wave toolkit: profiles, identity checks, grating scattering and minimal-length scales"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the modulated index and its partner as CSV
    Profile(ProfileArgs),
    /// Run the identity check suite and report pass/fail per check
    Verify(ProfileArgs),
    /// Emit per-level operator residual norms as CSV
    Spectrum(ProfileArgs),
    /// Emit reflection and transmission data for a finite grating as CSV
    Scatter(ScatterArgs),
    /// Emit preset profile and potential curves as CSV
    Figure(FigureArgs),
    /// Print minimal-length deformation scales for a given mass
    Gup(GupArgs),
}

/// Options shared by every profile-based command.
#[derive(Args, Debug, Default, Clone)]
struct CommonOpts {
    /// Index family: A (plane-wave modulation) or B (balanced grating)
    #[arg(long)]
    family: Option<String>,

    /// Background index of family A
    #[arg(long, allow_negative_numbers = true)]
    n0: Option<f64>,

    /// Modulation amplitude of family A
    #[arg(long, allow_negative_numbers = true)]
    v0: Option<f64>,

    /// Background index of family B
    #[arg(long, allow_negative_numbers = true)]
    eta0: Option<f64>,

    /// Cosine amplitude of family B
    #[arg(long, allow_negative_numbers = true)]
    eta1: Option<f64>,

    /// Sine amplitude of family B
    #[arg(long, allow_negative_numbers = true)]
    eta2: Option<f64>,

    /// Modulation frequency; defaults to the matched value for the family
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,

    /// Background wavenumber
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,

    /// Factorisation shift
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,

    /// Left edge of the sampling window (requires --grid-end)
    #[arg(long, allow_negative_numbers = true)]
    grid_start: Option<f64>,

    /// Right edge of the sampling window (requires --grid-start)
    #[arg(long, allow_negative_numbers = true)]
    grid_end: Option<f64>,

    /// Number of sampling nodes
    #[arg(long)]
    grid_count: Option<usize>,

    /// Grating length in modulation periods
    #[arg(long)]
    periods: Option<usize>,

    /// Integration steps per modulation period
    #[arg(long)]
    steps_per_period: Option<usize>,

    /// Output format: csv or json (data commands emit csv only)
    #[arg(long)]
    format: Option<String>,

    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Config file of `key = value` lines; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct ProfileArgs {
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug, Default)]
struct ScatterArgs {
    #[command(flatten)]
    common: CommonOpts,

    /// Sweep start wavenumber (requires --k-max and --k-count)
    #[arg(long, allow_negative_numbers = true)]
    k_min: Option<f64>,

    /// Sweep end wavenumber, inclusive
    #[arg(long, allow_negative_numbers = true)]
    k_max: Option<f64>,

    /// Number of sweep wavenumbers
    #[arg(long)]
    k_count: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct FigureArgs {
    #[command(flatten)]
    common: CommonOpts,

    /// Preset id: 1, 2 or 3
    #[arg(long)]
    figure: Option<u32>,

    /// Add the constant (beta*v0/2)^2 to the minus-side potential column
    /// (plane-wave family only)
    #[arg(long = "eq27-offset")]
    eq27_offset: bool,
}

#[derive(Args, Debug, Default)]
struct GupArgs {
    /// Particle preset: electron or planck
    #[arg(long)]
    particle: Option<String>,

    /// Rest mass in kilograms
    #[arg(long, allow_negative_numbers = true)]
    mass: Option<f64>,

    /// Output format: csv or json (default is plain text)
    #[arg(long)]
    format: Option<String>,

    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Config file of `key = value` lines; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Process entry point used by the thin binary.
pub fn run() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Profile(args) => cmd_profile(args.common),
        Command::Verify(args) => cmd_verify(args.common),
        Command::Spectrum(args) => cmd_spectrum(args.common),
        Command::Scatter(args) => cmd_scatter(args),
        Command::Figure(args) => cmd_figure(args),
        Command::Gup(args) => cmd_gup(args),
    }
}

// ---------------------------------------------------------------------------
// config files

const KNOWN_KEYS: &[&str] = &[
    "family",
    "n0",
    "v0",
    "eta0",
    "eta1",
    "eta2",
    "beta",
    "k",
    "lambda",
    "grid-start",
    "grid-end",
    "grid-count",
    "periods",
    "steps-per-period",
    "format",
    "out",
    "figure",
    "eq27-offset",
    "particle",
    "mass",
    "k-min",
    "k-max",
    "k-count",
];

/// Parsed `key = value` file. Keys use the flag spelling without the
/// leading dashes; `#` starts a comment line.
#[derive(Debug, Default)]
struct FileConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl FileConfig {
    fn string(&self, key: &str) -> Option<String> {
        self.entries.get(key).map(|(_, value)| value.clone())
    }

    fn parsed<T: FromStr>(&self, key: &str, kind: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, raw)) => raw.parse().map(Some).map_err(|_| Error::Config {
                line: *line,
                message: format!("cannot parse {key} value {raw:?} as {kind}"),
            }),
        }
    }
}

fn load_config(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path).map_err(|err| Error::Config {
        line: 0,
        message: format!("cannot read {}: {err}", path.display()),
    })?;
    let mut entries = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(Error::Config {
                line,
                message: format!("expected `key = value`, got {trimmed:?}"),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config {
                line,
                message: format!("unknown key {key:?}"),
            });
        }
        if entries.insert(key.clone(), (line, value)).is_some() {
            return Err(Error::Config {
                line,
                message: format!("duplicate key {key:?}"),
            });
        }
    }
    Ok(FileConfig { entries })
}

/// Removes `--config` from the options and loads it, or yields an empty
/// config so merging becomes unconditional.
fn take_config(opts: &mut CommonOpts) -> Result<FileConfig> {
    match opts.config.take() {
        Some(path) => load_config(&path),
        None => Ok(FileConfig::default()),
    }
}

fn merge_f64(slot: &mut Option<f64>, cfg: &FileConfig, key: &str) -> Result<()> {
    if slot.is_none() {
        *slot = cfg.parsed(key, "a number")?;
    }
    Ok(())
}

fn merge_usize(slot: &mut Option<usize>, cfg: &FileConfig, key: &str) -> Result<()> {
    if slot.is_none() {
        *slot = cfg.parsed(key, "a non-negative integer")?;
    }
    Ok(())
}

/// File values fill only the options the command line left unset.
fn merge_common(opts: &mut CommonOpts, cfg: &FileConfig) -> Result<()> {
    if opts.family.is_none() {
        opts.family = cfg.string("family");
    }
    merge_f64(&mut opts.n0, cfg, "n0")?;
    merge_f64(&mut opts.v0, cfg, "v0")?;
    merge_f64(&mut opts.eta0, cfg, "eta0")?;
    merge_f64(&mut opts.eta1, cfg, "eta1")?;
    merge_f64(&mut opts.eta2, cfg, "eta2")?;
    merge_f64(&mut opts.beta, cfg, "beta")?;
    merge_f64(&mut opts.k, cfg, "k")?;
    merge_f64(&mut opts.lambda, cfg, "lambda")?;
    merge_f64(&mut opts.grid_start, cfg, "grid-start")?;
    merge_f64(&mut opts.grid_end, cfg, "grid-end")?;
    merge_usize(&mut opts.grid_count, cfg, "grid-count")?;
    merge_usize(&mut opts.periods, cfg, "periods")?;
    merge_usize(&mut opts.steps_per_period, cfg, "steps-per-period")?;
    if opts.format.is_none() {
        opts.format = cfg.string("format");
    }
    if opts.out.is_none() {
        opts.out = cfg.string("out").map(PathBuf::from);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// option resolution

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    PlaneWave,
    Sinusoidal,
}

fn parse_family(raw: Option<&str>) -> Result<Family> {
    match raw {
        None => Ok(Family::PlaneWave),
        Some(s) => match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Family::PlaneWave),
            "b" => Ok(Family::Sinusoidal),
            _ => Err(Error::InvalidParameter {
                name: "family",
                message: format!("expected A or B, got {s:?}"),
            }),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Csv,
    Json,
    Text,
}

fn parse_format(raw: Option<&str>, default: OutputFormat) -> Result<OutputFormat> {
    match raw {
        None => Ok(default),
        Some(s) => match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidParameter {
                name: "format",
                message: format!("expected csv or json, got {s:?}"),
            }),
        },
    }
}

fn csv_only(format: OutputFormat) -> Result<()> {
    if format == OutputFormat::Csv {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "format",
            message: "this command emits csv only".into(),
        })
    }
}

/// Builds the profile from the resolved options. The modulation
/// frequency defaults to the value matched to `k` for the family.
fn resolve_profile(opts: &CommonOpts) -> Result<Profile> {
    let family = parse_family(opts.family.as_deref())?;
    let k = opts.k.unwrap_or(1.0);
    match family {
        Family::PlaneWave => {
            let beta = opts.beta.unwrap_or(2.0 * k);
            Ok(Profile::PlaneWave(PlaneWaveProfile::new(
                opts.n0.unwrap_or(1.0),
                opts.v0.unwrap_or(1.0),
                beta,
            )?))
        }
        Family::Sinusoidal => {
            let beta = opts.beta.unwrap_or(k);
            Ok(Profile::Sinusoidal(SinusoidalProfile::new(
                opts.eta0.unwrap_or(1.0),
                opts.eta1.unwrap_or(4.0),
                opts.eta2.unwrap_or(2.0),
                beta,
            )?))
        }
    }
}

struct Setup {
    profile: Profile,
    params: SusyParams,
    w: Superpotential,
}

/// Resolves profile plus wave parameters. The energy is always derived
/// from the family relation, so an explicitly mismatched `--beta` is
/// rejected by the superpotential construction.
fn resolve_setup(opts: &CommonOpts) -> Result<Setup> {
    let profile = resolve_profile(opts)?;
    let k = opts.k.unwrap_or(1.0);
    let lambda = opts.lambda.unwrap_or(0.0);
    let epsilon = match &profile {
        Profile::PlaneWave(_) => k * k + lambda,
        Profile::Sinusoidal(p) => {
            k * k * (1.0 + p.nu1() * p.nu1() - p.nu2() * p.nu2()) + lambda
        }
    };
    let params = SusyParams::new(k, epsilon, lambda)?;
    let w = profile.superpotential(&params)?;
    Ok(Setup { profile, params, w })
}

/// Two modulation periods centred on z = 0, with a node landing on
/// z = 0 exactly (sampling windows default to this).
fn default_window(profile: &Profile, count: usize) -> Result<Grid> {
    let h = 2.0 * profile.period() / count as f64;
    let half = (count / 2) as f64;
    let z_start = -half * h;
    Grid::new(z_start, z_start + (count - 1) as f64 * h, count)
}

fn resolve_grid(opts: &CommonOpts, profile: &Profile) -> Result<Grid> {
    let count = opts.grid_count.unwrap_or(1000);
    match (opts.grid_start, opts.grid_end) {
        (Some(start), Some(end)) => Grid::new(start, end, count),
        (None, None) => default_window(profile, count),
        _ => Err(Error::InvalidParameter {
            name: "grid-start/grid-end",
            message: "give both window edges or neither".into(),
        }),
    }
}

fn linspace(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidParameter {
            name: "k-count",
            message: "need at least one sweep point".into(),
        });
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (end - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

// ---------------------------------------------------------------------------
// emission

/// 17 significant digits: enough to reproduce any f64 exactly, and
/// locale independent.
fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

struct CsvBuilder {
    buf: String,
}

impl CsvBuilder {
    fn new(header: &str) -> Self {
        Self {
            buf: format!("{header}\n"),
        }
    }

    fn row(&mut self, values: &[f64]) {
        let mut first = true;
        for v in values {
            if !first {
                self.buf.push(',');
            }
            first = false;
            self.buf.push_str(&fmt_f(*v));
        }
        self.buf.push('\n');
    }

    fn finish(self) -> String {
        self.buf
    }
}

/// Writes through a sibling temp file and renames, so readers never see
/// a half-written file.
fn write_atomic(path: &Path, payload: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let attempt = (|| {
        fs::write(&tmp, payload)?;
        fs::rename(&tmp, path)
    })();
    attempt.map_err(|source| Error::UnwritablePath {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, payload: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, payload),
        None => {
            std::io::stdout().write_all(payload.as_bytes())?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// reports

/// One named check with its observed residual and threshold.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub status: String,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl CheckRow {
    fn new(name: &str, max_residual: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            status: if pass { "pass" } else { "fail" }.into(),
            max_residual,
            tolerance,
        }
    }
}

/// Machine-readable command report; the JSON output serialises this
/// struct directly, so its key set is stable.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<CheckRow>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|check| check.status == "pass")
    }

    fn render_text(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|check| check.name.len())
            .max()
            .unwrap_or(0)
            .max("check".len());
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:<6}  {:<13}  tolerance",
            "check", "status", "max_residual"
        );
        for check in &self.checks {
            let _ = writeln!(
                out,
                "{:<width$}  {:<6}  {:<13.3e}  {:.1e}",
                check.name, check.status, check.max_residual, check.tolerance
            );
        }
        for warning in &self.warnings {
            let _ = writeln!(out, "warning: {warning}");
        }
        let _ = writeln!(
            out,
            "overall: {}",
            if self.all_pass() { "pass" } else { "fail" }
        );
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::from("name,status,max_residual,tolerance\n");
        for check in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                check.name,
                check.status,
                fmt_f(check.max_residual),
                fmt_f(check.tolerance)
            );
        }
        out
    }

    fn render_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialises to json");
        text.push('\n');
        text
    }
}

fn parameter_map(setup: &Setup, grid: &Grid) -> BTreeMap<String, serde_json::Value> {
    let mut map = BTreeMap::new();
    match &setup.profile {
        Profile::PlaneWave(p) => {
            map.insert("family".into(), "A".into());
            map.insert("n0".into(), p.n0.into());
            map.insert("v0".into(), p.v0.into());
        }
        Profile::Sinusoidal(p) => {
            map.insert("family".into(), "B".into());
            map.insert("eta0".into(), p.eta0.into());
            map.insert("eta1".into(), p.eta1.into());
            map.insert("eta2".into(), p.eta2.into());
        }
    }
    map.insert("beta".into(), setup.profile.beta().into());
    map.insert("k".into(), setup.params.k.into());
    map.insert("lambda".into(), setup.params.lambda.into());
    map.insert("epsilon".into(), setup.params.epsilon.into());
    map.insert("grid_start".into(), grid.z_start().into());
    map.insert("grid_end".into(), grid.z_end().into());
    map.insert("grid_count".into(), (grid.count() as u64).into());
    map
}

/// Nominal convergence order of the default discretisation.
const NOMINAL_ORDER: f64 = 2.0;
const ORDER_WINDOW: f64 = 0.3;

/// When residuals bottom out at roundoff a slope fit is meaningless;
/// such a ladder passes outright.
const ORDER_FLOOR: f64 = 1e-12;

fn order_check(name: &str, estimated: f64, finest: f64) -> CheckRow {
    let deviation = if finest <= ORDER_FLOOR {
        0.0
    } else {
        (estimated - NOMINAL_ORDER).abs()
    };
    CheckRow::new(name, deviation, ORDER_WINDOW, deviation <= ORDER_WINDOW)
}

fn strong_modulation_warning(profile: &Profile) -> Option<String> {
    let max = profile.max_modulation();
    (max >= 1.0).then(|| {
        format!(
            "modulation amplitude {max:.3} is not small; the partner construction \
             stays exact but perturbative intuition does not apply"
        )
    })
}

/// Runs the full identity suite on one resolved setup.
fn build_verify_report(setup: &Setup, grid: &Grid) -> Result<Report> {
    let mut checks = Vec::new();

    let plus = riccati_residual(
        &setup.profile,
        &setup.w,
        &setup.params,
        PotentialSign::Plus,
        grid,
    );
    checks.push(CheckRow::new(
        "riccati_plus",
        plus.max_abs_residual,
        plus.tolerance,
        plus.pass,
    ));
    let minus = riccati_residual(
        &setup.profile,
        &setup.w,
        &setup.params,
        PotentialSign::Minus,
        grid,
    );
    checks.push(CheckRow::new(
        "riccati_minus",
        minus.max_abs_residual,
        minus.tolerance,
        minus.pass,
    ));

    let set = build_partner_set(&setup.profile, &setup.params, grid)?;
    let sum = partner_sum_check(&set);
    checks.push(CheckRow::new(
        "partner_sum",
        sum.max_abs_residual,
        sum.tolerance,
        sum.pass,
    ));

    let half_width = 5.0 * setup.profile.period();
    let profile = setup.profile;
    let pt_in = pt_check_analytic(|z| profile.index(z), half_width, 1001);
    checks.push(CheckRow::new(
        "pt_input",
        pt_in.max_violation,
        pt_in.tolerance,
        pt_in.is_pt_symmetric,
    ));
    let pt_out = pt_check_analytic(|z| profile.partner_index(z), half_width, 1001);
    checks.push(CheckRow::new(
        "pt_partner",
        pt_out.max_violation,
        pt_out.tolerance,
        pt_out.is_pt_symmetric,
    ));

    let consistency = index_potential_consistency(&setup.profile, &setup.w, &setup.params, grid);
    checks.push(CheckRow::new(
        "index_potential",
        consistency.max_abs_residual,
        consistency.tolerance,
        consistency.pass,
    ));

    let coarse = Grid::new(0.0, setup.profile.period(), 101)?;
    let levels = 4;
    let annihilation = annihilation_residual(&setup.w, &coarse, levels, StencilOrder::Second);
    checks.push(order_check(
        "annihilation_order",
        annihilation.estimated_order,
        annihilation.finest_residual(),
    ));

    let fine = coarse.refined(1 << (levels - 1));
    let (v_plus, v_minus) = partner_potentials(&setup.w, &setup.params, &fine);
    let psi = ComplexField::from_fn(fine, |z| {
        Complex64::new(z.sin(), 0.3 * (2.0 * z).cos())
    });
    let intertwining = intertwining_residual(
        &v_plus,
        &v_minus,
        &setup.w,
        &psi,
        StencilOrder::Second,
        levels,
    )?;
    checks.push(order_check(
        "intertwining_order",
        intertwining.estimated_order,
        intertwining.finest_residual(),
    ));

    let warnings = strong_modulation_warning(&setup.profile)
        .into_iter()
        .collect();

    Ok(Report {
        command: "verify".into(),
        parameters: parameter_map(setup, grid),
        checks,
        warnings,
    })
}

// ---------------------------------------------------------------------------
// commands

fn cmd_profile(mut opts: CommonOpts) -> Result<i32> {
    let cfg = take_config(&mut opts)?;
    merge_common(&mut opts, &cfg)?;
    csv_only(parse_format(opts.format.as_deref(), OutputFormat::Csv)?)?;
    let setup = resolve_setup(&opts)?;
    let grid = resolve_grid(&opts, &setup.profile)?;
    let n_plus = setup.profile.sample(&grid);
    let n_minus = setup.profile.sample_partner(&grid);
    let mut csv = CsvBuilder::new("z,re_n_plus,im_n_plus,re_n_minus,im_n_minus");
    for (i, z) in grid.nodes().enumerate() {
        let p = n_plus.value(i);
        let m = n_minus.value(i);
        csv.row(&[z, p.re, p.im, m.re, m.im]);
    }
    emit(opts.out.as_deref(), &csv.finish())?;
    Ok(0)
}

fn cmd_verify(mut opts: CommonOpts) -> Result<i32> {
    let cfg = take_config(&mut opts)?;
    merge_common(&mut opts, &cfg)?;
    let format = parse_format(opts.format.as_deref(), OutputFormat::Text)?;
    let setup = resolve_setup(&opts)?;
    let grid = resolve_grid(&opts, &setup.profile)?;
    let report = build_verify_report(&setup, &grid)?;
    let rendered = match format {
        OutputFormat::Text => report.render_text(),
        OutputFormat::Csv => report.render_csv(),
        OutputFormat::Json => report.render_json(),
    };
    emit(opts.out.as_deref(), &rendered)?;
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn cmd_spectrum(mut opts: CommonOpts) -> Result<i32> {
    let cfg = take_config(&mut opts)?;
    merge_common(&mut opts, &cfg)?;
    csv_only(parse_format(opts.format.as_deref(), OutputFormat::Csv)?)?;
    let setup = resolve_setup(&opts)?;
    let count = opts.grid_count.unwrap_or(101);
    let coarse = match (opts.grid_start, opts.grid_end) {
        (Some(start), Some(end)) => Grid::new(start, end, count)?,
        (None, None) => Grid::new(0.0, setup.profile.period(), count)?,
        _ => {
            return Err(Error::InvalidParameter {
                name: "grid-start/grid-end",
                message: "give both window edges or neither".into(),
            })
        }
    };
    let levels = 4;
    let annihilation = annihilation_residual(&setup.w, &coarse, levels, StencilOrder::Second);
    let fine = coarse.refined(1 << (levels - 1));
    let (v_plus, v_minus) = partner_potentials(&setup.w, &setup.params, &fine);
    let psi = ComplexField::from_fn(fine, |z| {
        Complex64::new(z.sin(), 0.3 * (2.0 * z).cos())
    });
    let intertwining = intertwining_residual(
        &v_plus,
        &v_minus,
        &setup.w,
        &psi,
        StencilOrder::Second,
        levels,
    )?;
    let mut csv = CsvBuilder::new("h,annihilation_residual,intertwining_residual");
    for level in 0..levels {
        csv.row(&[
            annihilation.spacings[level],
            annihilation.residual_norms[level],
            intertwining.residual_norms[level],
        ]);
    }
    eprintln!(
        "note: estimated orders: annihilation {:.2}, intertwining {:.2}",
        annihilation.estimated_order, intertwining.estimated_order
    );
    emit(opts.out.as_deref(), &csv.finish())?;
    Ok(0)
}

fn cmd_scatter(args: ScatterArgs) -> Result<i32> {
    let ScatterArgs {
        mut common,
        mut k_min,
        mut k_max,
        mut k_count,
    } = args;
    let cfg = take_config(&mut common)?;
    merge_common(&mut common, &cfg)?;
    if k_min.is_none() {
        k_min = cfg.parsed("k-min", "a number")?;
    }
    if k_max.is_none() {
        k_max = cfg.parsed("k-max", "a number")?;
    }
    if k_count.is_none() {
        k_count = cfg.parsed("k-count", "a non-negative integer")?;
    }
    csv_only(parse_format(common.format.as_deref(), OutputFormat::Csv)?)?;
    let profile = resolve_profile(&common)?;
    let periods = common.periods.unwrap_or(50);
    let steps_per_period = common.steps_per_period.unwrap_or(512);
    let wavenumbers = match (k_min, k_max, k_count) {
        (None, None, None) => vec![common.k.unwrap_or(1.0)],
        (Some(start), Some(end), Some(count)) => linspace(start, end, count)?,
        _ => {
            return Err(Error::InvalidParameter {
                name: "k-min/k-max/k-count",
                message: "give all three sweep bounds or none".into(),
            })
        }
    };
    if profile.max_modulation() > 0.01 {
        eprintln!(
            "note: modulation amplitude {:.3e} exceeds the weak-coupling regime \
             (|v| <= 0.01); one-way suppression ratios lose their perturbative meaning",
            profile.max_modulation()
        );
    }
    let results = detuning_sweep(&profile, &wavenumbers, periods, steps_per_period)?;
    let mut csv = CsvBuilder::new("k,R_left,R_right,T,re_t,im_t");
    for result in &results {
        csv.row(&[
            result.k,
            result.reflectance_left(),
            result.reflectance_right(),
            result.transmittance(),
            result.t.re,
            result.t.im,
        ]);
    }
    emit(common.out.as_deref(), &csv.finish())?;
    Ok(0)
}

/// Fills in the caption parameters of a preset, leaving explicit flags
/// untouched.
fn apply_figure_preset(common: &mut CommonOpts, id: u32) -> Result<()> {
    match id {
        1 => {
            common.family.get_or_insert_with(|| "a".into());
            common.v0.get_or_insert(10.0);
            common.beta.get_or_insert(2.0);
        }
        2 => {
            common.family.get_or_insert_with(|| "a".into());
            common.v0.get_or_insert(1.0);
            common.beta.get_or_insert(2.0);
        }
        3 => {
            common.family.get_or_insert_with(|| "b".into());
            common.eta1.get_or_insert(4.0);
            common.eta2.get_or_insert(2.0);
        }
        other => return Err(Error::UnknownFigure { id: other }),
    }
    Ok(())
}

/// Constant added to the minus-side potential column when the offset
/// flag is set; defined for the plane-wave family only.
fn v_minus_offset(profile: &Profile, enabled: bool) -> Result<f64> {
    if !enabled {
        return Ok(0.0);
    }
    match profile {
        Profile::PlaneWave(p) => Ok((p.beta * p.v0 / 2.0).powi(2)),
        Profile::Sinusoidal(_) => Err(Error::InvalidParameter {
            name: "eq27-offset",
            message: "the offset applies to the plane-wave family only".into(),
        }),
    }
}

fn cmd_figure(args: FigureArgs) -> Result<i32> {
    let FigureArgs {
        mut common,
        mut figure,
        mut eq27_offset,
    } = args;
    let cfg = take_config(&mut common)?;
    merge_common(&mut common, &cfg)?;
    if figure.is_none() {
        figure = cfg.parsed("figure", "an integer")?;
    }
    if !eq27_offset {
        eq27_offset = cfg.parsed("eq27-offset", "a boolean")?.unwrap_or(false);
    }
    let id = figure.ok_or(Error::InvalidParameter {
        name: "figure",
        message: "preset id required (1, 2 or 3)".into(),
    })?;
    apply_figure_preset(&mut common, id)?;
    csv_only(parse_format(common.format.as_deref(), OutputFormat::Csv)?)?;
    let setup = resolve_setup(&common)?;
    let offset = v_minus_offset(&setup.profile, eq27_offset)?;
    let grid = resolve_grid(&common, &setup.profile)?;
    let set = build_partner_set(&setup.profile, &setup.params, &grid)?;
    let with_sum = id == 1;
    let header = if with_sum {
        "z,re_n_plus,im_n_plus,re_n_minus,im_n_minus,\
         re_v_plus,im_v_plus,re_v_minus,im_v_minus,re_sum,im_sum"
    } else {
        "z,re_n_plus,im_n_plus,re_n_minus,im_n_minus,\
         re_v_plus,im_v_plus,re_v_minus,im_v_minus"
    };
    let mut csv = CsvBuilder::new(header);
    for (i, z) in grid.nodes().enumerate() {
        let np = set.n_plus.value(i);
        let nm = set.n_minus.value(i);
        let vp = set.v_plus.value(i);
        let vm = set.v_minus.value(i) + offset;
        let mut row = vec![z, np.re, np.im, nm.re, nm.im, vp.re, vp.im, vm.re, vm.im];
        if with_sum {
            let sum = np + nm;
            row.push(sum.re);
            row.push(sum.im);
        }
        csv.row(&row);
    }
    emit(common.out.as_deref(), &csv.finish())?;
    Ok(0)
}

fn cmd_gup(args: GupArgs) -> Result<i32> {
    let GupArgs {
        mut particle,
        mut mass,
        mut format,
        mut out,
        config,
    } = args;
    if let Some(path) = config {
        let cfg = load_config(&path)?;
        if particle.is_none() {
            particle = cfg.string("particle");
        }
        if mass.is_none() {
            mass = cfg.parsed("mass", "a number")?;
        }
        if format.is_none() {
            format = cfg.string("format");
        }
        if out.is_none() {
            out = cfg.string("out").map(PathBuf::from);
        }
    }
    let fmt = parse_format(format.as_deref(), OutputFormat::Text)?;
    let mass_kg = match (particle.as_deref(), mass) {
        (Some(name), None) => gup::particle_mass(name)?,
        (None, Some(value)) => value,
        (None, None) => {
            return Err(Error::InvalidParameter {
                name: "particle/mass",
                message: "give --particle NAME or --mass KG".into(),
            })
        }
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParameter {
                name: "particle/mass",
                message: "give only one of --particle and --mass".into(),
            })
        }
    };
    let estimate = gup::tau0_estimate(mass_kg, gup::constants::PLANCK_MASS)?;
    let rendered = match fmt {
        OutputFormat::Text => format!(
            "mass  = {} kg\ntau   = {} (kg m/s)^-2\ntau0  = {}\nfloor(log10 tau0) = {}\n",
            fmt_f(estimate.mass),
            fmt_f(estimate.tau),
            fmt_f(estimate.tau0),
            estimate.log10_floor()
        ),
        OutputFormat::Csv => format!(
            "tau,tau0,log10_floor\n{},{},{}\n",
            fmt_f(estimate.tau),
            fmt_f(estimate.tau0),
            estimate.log10_floor()
        ),
        OutputFormat::Json => {
            let mut parameters = BTreeMap::new();
            parameters.insert("mass".into(), estimate.mass.into());
            parameters.insert("planck_mass".into(), estimate.planck_mass.into());
            parameters.insert("tau".into(), estimate.tau.into());
            parameters.insert("tau0".into(), estimate.tau0.into());
            parameters.insert(
                "log10_floor".into(),
                i64::from(estimate.log10_floor()).into(),
            );
            Report {
                command: "gup".into(),
                parameters,
                checks: Vec::new(),
                warnings: Vec::new(),
            }
            .render_json()
        }
    };
    emit(out.as_deref(), &rendered)?;
    Ok(0)
}
