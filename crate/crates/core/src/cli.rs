//! Command-line front end. Every subcommand writes one artifact (CSV or JSON)
//! to `--out` or standard output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hilbert::FockCutoff;
use crate::jc::{coherent_coeffs, CoherentAmplitude, JcParams};
use crate::numerics::{default_plane_rule, format_real};
use crate::observables::{
    detect_revival, inversion_table, purity_asymptote, purity_paper_series, purity_phase_space_series,
    sample_times,
};
use crate::oracle::{crosscheck_campaign, CampaignConfig};
use crate::wigner::{wigner_grid, wigner_grid_fock, Axis, AxisName, GridFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hybrid-wigner", version, about = "Phase-space Jaynes-Cummings dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Excited and ground populations and the atomic inversion.
    Inversion(#[command(flatten)] SharedArgs),
    /// Sampled full or reduced Wigner function.
    Wigner(WignerArgs),
    /// Field purity from phase space, optionally beside the printed series.
    Purity(PurityArgs),
    /// First revival of the inversion envelope.
    Revival(#[command(flatten)] SharedArgs),
    /// Cross-check campaign against the matrix oracle.
    Validate(#[command(flatten)] SharedArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reduced {
    None,
    Field,
    Qubit,
}

#[derive(Debug, Clone, Args)]
struct SharedArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega: f64,
    #[arg(long = "Omega", default_value_t = 1.0, allow_negative_numbers = true)]
    big_omega: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    g: f64,
    #[arg(long = "alpha-re", visible_alias = "alpha", default_value_t = 1.0, allow_negative_numbers = true)]
    alpha_re: f64,
    #[arg(long = "alpha-im", default_value_t = 0.0, allow_negative_numbers = true)]
    alpha_im: f64,
    /// Start from `|e, r⟩` instead of a coherent field.
    #[arg(long, value_name = "r")]
    fock: Option<usize>,
    /// Fock cutoff N; defaults to ceil(|α|² + 8|α| + 12).
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long = "t-max", default_value_t = 30.0)]
    t_max: f64,
    #[arg(long, default_value_t = 600)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Debug, Clone, Args)]
struct WignerArgs {
    #[command(flatten)]
    shared: SharedArgs,
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    #[arg(long, value_enum, default_value_t = Reduced::None)]
    reduced: Reduced,
    /// `min:max:count` or a single fixed value.
    #[arg(long = "beta-re", default_value = "-4:4:64", allow_hyphen_values = true)]
    beta_re: String,
    #[arg(long = "beta-im", default_value = "-4:4:64", allow_hyphen_values = true)]
    beta_im: String,
    #[arg(long, default_value = "0:3.141592653589793:16")]
    theta: String,
    #[arg(long, default_value = "0:6.283185307179586:32")]
    phi: String,
}

#[derive(Debug, Clone, Args)]
struct PurityArgs {
    #[command(flatten)]
    shared: SharedArgs,
    /// Add the `xi_paper_series` column.
    #[arg(long = "paper-series")]
    paper_series: bool,
}

/// Validated inputs shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: JcParams,
    pub alpha: [f64; 2],
    pub fock: Option<usize>,
    pub cutoff: usize,
    pub cutoff_auto: bool,
    pub t_max: f64,
    pub steps: usize,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

/// An error tagged with the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = match &e {
            Error::NonResonant { .. } => format!("--omega/--Omega: {e}"),
            Error::CutoffTooSmall { .. } => format!("--cutoff: {e}"),
            Error::InvalidArgument { name, .. } => format!("--{}: {e}", flag_name(name)),
            _ => e.to_string(),
        };
        let code = match e {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Self { code, message }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

fn flag_name(name: &str) -> String {
    match name {
        "alpha" => "alpha-re/--alpha-im".into(),
        other => other.replace('_', "-"),
    }
}

impl RunConfig {
    fn from_args(a: &SharedArgs) -> std::result::Result<Self, CliError> {
        let params = JcParams::new(a.omega, a.big_omega, a.g)?;
        let alpha = CoherentAmplitude::new(Complex64::new(a.alpha_re, a.alpha_im))?;
        if !a.t_max.is_finite() || a.t_max <= 0.0 {
            return Err(CliError::usage(format!("--t-max: {} is not a positive finite number", a.t_max)));
        }
        if a.steps == 0 {
            return Err(CliError::usage("--steps: must be at least 1"));
        }
        let auto = match a.fock {
            Some(r) => FockCutoff::new(r + 1),
            None => alpha.auto_cutoff(),
        };
        let cutoff = a.cutoff.map_or(auto, FockCutoff::new);
        if let Some(r) = a.fock {
            if r + 1 > cutoff.n_max() {
                return Err(CliError::usage(format!("--cutoff: {} leaves no room above --fock {r}", cutoff.n_max())));
            }
        }
        Ok(Self {
            params,
            alpha: [a.alpha_re, a.alpha_im],
            fock: a.fock,
            cutoff: cutoff.n_max(),
            cutoff_auto: a.cutoff.is_none(),
            t_max: a.t_max,
            steps: a.steps,
            seed: a.seed,
            out: a.out.clone(),
            format: a.format,
        })
    }

    fn amplitude(&self) -> CoherentAmplitude {
        CoherentAmplitude::new(Complex64::new(self.alpha[0], self.alpha[1])).expect("validated")
    }

    fn fock_cutoff(&self) -> FockCutoff {
        FockCutoff::new(self.cutoff)
    }

    fn reject_fock(&self, what: &str) -> std::result::Result<(), CliError> {
        match self.fock {
            Some(_) => Err(CliError::usage(format!("--fock: not supported by `{what}`"))),
            None => Ok(()),
        }
    }

    fn metadata_footer(&self) -> String {
        let p = &self.params;
        let mut s = format!(
            "# omega={} Omega={} g={} alpha_re={} alpha_im={} cutoff={} cutoff_auto={} t_max={} steps={}",
            format_real(p.omega()),
            format_real(p.big_omega()),
            format_real(p.g()),
            format_real(self.alpha[0]),
            format_real(self.alpha[1]),
            self.cutoff,
            self.cutoff_auto,
            format_real(self.t_max),
            self.steps,
        );
        if let Some(r) = self.fock {
            s.push_str(&format!(" fock={r}"));
        }
        s.push('\n');
        s
    }
}

/// Photon-number weights of the initial field.
fn weights(config: &RunConfig) -> Result<Vec<f64>> {
    match config.fock {
        Some(r) => {
            let mut w = vec![0.0; r + 1];
            w[r] = 1.0;
            Ok(w)
        }
        None => Ok(coherent_coeffs(config.amplitude(), config.fock_cutoff())?
            .iter()
            .map(|c| c.norm_sqr())
            .collect()),
    }
}

fn write_artifact(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(body.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        }
    }
    Ok(())
}

fn csv_row(values: &[f64]) -> String {
    let mut row = values.iter().map(|v| format_real(*v)).collect::<Vec<_>>().join(",");
    row.push('\n');
    row
}

fn cmd_inversion(config: &RunConfig) -> Result<String> {
    config.params.require_resonant()?;
    let times = sample_times(config.t_max, config.steps)?;
    let table = inversion_table(&times, &weights(config)?, config.params.g());
    Ok(match config.format {
        Format::Csv => {
            let mut s = String::from("t,Pe,Pg,Z\n");
            for (t, [pe, pg, z]) in times.iter().zip(&table) {
                s.push_str(&csv_row(&[*t, *pe, *pg, *z]));
            }
            s.push_str(&config.metadata_footer());
            s
        }
        Format::Json => {
            let column = |k: usize| table.iter().map(|r| r[k]).collect::<Vec<_>>();
            let v = json!({
                "config": config,
                "t": times,
                "Pe": column(0),
                "Pg": column(1),
                "Z": column(2),
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
    })
}

fn parse_axis(name: AxisName, spec: &str) -> std::result::Result<Axis, CliError> {
    let flag = match name {
        AxisName::BetaRe => "--beta-re",
        AxisName::BetaIm => "--beta-im",
        AxisName::Theta => "--theta",
        AxisName::Phi => "--phi",
    };
    let bad = || CliError::usage(format!("{flag}: expected `min:max:count` or a number, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis::fixed(name, v.trim().parse().map_err(|_| bad())?)),
        [lo, hi, n] => Ok(Axis::range(
            name,
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn cmd_wigner(config: &RunConfig, args: &WignerArgs) -> std::result::Result<String, CliError> {
    let (function, axes) = match args.reduced {
        Reduced::None => (
            GridFunction::Full,
            vec![
                parse_axis(AxisName::BetaRe, &args.beta_re)?,
                parse_axis(AxisName::BetaIm, &args.beta_im)?,
                parse_axis(AxisName::Theta, &args.theta)?,
                parse_axis(AxisName::Phi, &args.phi)?,
            ],
        ),
        Reduced::Field => (
            GridFunction::ReducedField,
            vec![parse_axis(AxisName::BetaRe, &args.beta_re)?, parse_axis(AxisName::BetaIm, &args.beta_im)?],
        ),
        Reduced::Qubit => (
            GridFunction::ReducedQubit,
            vec![parse_axis(AxisName::Theta, &args.theta)?, parse_axis(AxisName::Phi, &args.phi)?],
        ),
    };
    if !args.t.is_finite() {
        return Err(CliError::usage("--t: must be finite"));
    }
    let cutoff = config.fock_cutoff();
    let grid = match config.fock {
        Some(r) => wigner_grid_fock(&axes, function, args.t, r, &config.params, cutoff)?,
        None => wigner_grid(&axes, function, args.t, config.amplitude(), &config.params, cutoff)?,
    };
    Ok(match config.format {
        Format::Csv => {
            let mut s = grid.to_csv();
            s.push_str(&format!("# function={} t={}\n", function_name(function), format_real(args.t)));
            s.push_str(&config.metadata_footer());
            s
        }
        Format::Json => grid.to_json()? + "\n",
    })
}

fn function_name(f: GridFunction) -> &'static str {
    match f {
        GridFunction::Full => "full",
        GridFunction::ReducedField => "reduced_field",
        GridFunction::ReducedQubit => "reduced_qubit",
    }
}

fn cmd_purity(config: &RunConfig, paper_series: bool) -> std::result::Result<String, CliError> {
    config.reject_fock("purity")?;
    let alpha = config.amplitude();
    let cutoff = config.fock_cutoff();
    let times = sample_times(config.t_max, config.steps)?;
    let rule = default_plane_rule(alpha.abs(), cutoff.n_max())?;
    let xi = purity_phase_space_series(&times, alpha, &config.params, cutoff, &rule)?;
    let series = if paper_series {
        Some(
            times
                .iter()
                .map(|&t| purity_paper_series(t, alpha, &config.params, cutoff))
                .collect::<Result<Vec<f64>>>()?,
        )
    } else {
        None
    };
    let asymptote = purity_asymptote(alpha);
    Ok(match config.format {
        Format::Csv => {
            let mut s = String::from(if paper_series { "t,xi_phase_space,xi_paper_series\n" } else { "t,xi_phase_space\n" });
            for (i, t) in times.iter().enumerate() {
                let mut row = vec![*t, xi[i]];
                if let Some(p) = &series {
                    row.push(p[i]);
                }
                s.push_str(&csv_row(&row));
            }
            s.push_str(&format!("# purity_asymptote={}\n", format_real(asymptote)));
            s.push_str(&config.metadata_footer());
            s
        }
        Format::Json => {
            let mut v = json!({
                "config": config,
                "t": times,
                "xi_phase_space": xi,
                "purity_asymptote": asymptote,
            });
            if let Some(p) = series {
                v["xi_paper_series"] = json!(p);
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
    })
}

fn cmd_revival(config: &RunConfig) -> std::result::Result<String, CliError> {
    config.reject_fock("revival")?;
    config.params.require_resonant()?;
    let alpha = config.amplitude();
    let times = sample_times(config.t_max, config.steps)?;
    let table = inversion_table(&times, &weights(config)?, config.params.g());
    let z: Vec<f64> = table.iter().map(|r| r[2]).collect();
    let rev = detect_revival(&times, &z, alpha, &config.params)?;
    if 1.3 * rev.predicted > config.t_max {
        return Err(CliError::usage(format!(
            "--t-max: {} does not cover the search window up to {}",
            config.t_max,
            1.3 * rev.predicted
        )));
    }
    Ok(match config.format {
        Format::Csv => {
            let mut s = String::from("predicted,peak_time,peak_value,relative_offset\n");
            s.push_str(&csv_row(&[rev.predicted, rev.peak_time, rev.peak_value, rev.relative_offset]));
            s.push_str(&config.metadata_footer());
            s
        }
        Format::Json => serde_json::to_string_pretty(&json!({ "config": config, "revival": rev }))? + "\n",
    })
}

fn cmd_validate(config: &RunConfig) -> std::result::Result<(String, bool), CliError> {
    let campaign = CampaignConfig {
        seed: config.seed,
        ..CampaignConfig::default()
    };
    let report = crosscheck_campaign(&campaign);
    for c in &report.checks {
        log::info!("{}", c.summary());
    }
    Ok((report.to_json()? + "\n", report.pass))
}

/// Parse arguments, run the subcommand and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn execute(command: &Command) -> std::result::Result<i32, CliError> {
    let shared = match command {
        Command::Inversion(a) | Command::Revival(a) | Command::Validate(a) => a,
        Command::Wigner(w) => &w.shared,
        Command::Purity(p) => &p.shared,
    };
    let config = RunConfig::from_args(shared)?;
    let (body, pass) = match command {
        Command::Inversion(_) => (cmd_inversion(&config)?, true),
        Command::Wigner(w) => (cmd_wigner(&config, w)?, true),
        Command::Purity(p) => (cmd_purity(&config, p.paper_series)?, true),
        Command::Revival(_) => (cmd_revival(&config)?, true),
        Command::Validate(_) => cmd_validate(&config)?,
    };
    write_artifact(config.out.as_deref(), &body)?;
    Ok(if pass { EXIT_OK } else { EXIT_VALIDATION })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("hybrid-wigner").chain(args.iter().copied())).unwrap();
        match cli.command {
            Command::Inversion(a) => RunConfig::from_args(&a).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn defaults_and_auto_cutoff() {
        let c = parse(&["inversion"]);
        assert_eq!(c.params, JcParams::unit());
        assert_eq!(c.alpha, [1.0, 0.0]);
        assert_eq!(c.cutoff, 21);
        assert!(c.cutoff_auto);
        let c = parse(&["inversion", "--alpha", "-2", "--cutoff", "40"]);
        assert_eq!(c.alpha, [-2.0, 0.0]);
        assert_eq!(c.cutoff, 40);
    }

    #[test]
    fn inversion_rows_and_first_row() {
        let c = parse(&["inversion", "--alpha", "1", "--g", "1", "--t-max", "30", "--steps", "600"]);
        let out = cmd_inversion(&c).unwrap();
        let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "t,Pe,Pg,Z");
        assert_eq!(rows.len() - 1, 601);
        let first: Vec<f64> = rows[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first[0], 0.0);
        assert!((first[1] - 1.0).abs() < 1e-15 && (first[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fock_inversion_is_single_mode_cosine() {
        let c = parse(&["inversion", "--alpha", "0", "--fock", "0", "--t-max", "10", "--steps", "100"]);
        let out = cmd_inversion(&c).unwrap();
        for line in out.lines().skip(1).filter(|l| !l.starts_with('#')) {
            let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!((v[3] - (2.0 * v[0]).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn axis_specs() {
        assert_eq!(parse_axis(AxisName::Theta, "0:1:3").unwrap(), Axis::range(AxisName::Theta, 0.0, 1.0, 3));
        assert_eq!(parse_axis(AxisName::Phi, "0.5").unwrap(), Axis::fixed(AxisName::Phi, 0.5));
        assert!(parse_axis(AxisName::Phi, "0:1").is_err());
        assert!(parse_axis(AxisName::Phi, "a:1:2").is_err());
    }

    #[test]
    fn non_resonant_names_the_flags() {
        let c = parse(&["inversion", "--Omega", "1.5"]);
        let e = CliError::from(cmd_inversion(&c).unwrap_err());
        assert_eq!(e.code, EXIT_USAGE);
        assert!(e.message.contains("--omega/--Omega"));
    }
}
