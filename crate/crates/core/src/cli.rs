//! Command-line front end. [`run`] is the whole program minus `process::exit`.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Complex;

use crate::channels::BathParams;
use crate::error::Error;
use crate::protocol::{
    fig2_recipe, fig3_recipe, fig4_recipe, linear_grid, run_point, sweep, Axis, Curve, PointRecord,
    ScenarioParams, SweepTable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PHYSICS: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const POINT_HEADER: &str = "r,theta,phi,t,gip,eof,logneg,nu_minus,physical,regularized";
pub const SWEEP_HEADER: &str = "axis,value,gip,eof,logneg,nu_minus,physical,regularized";

#[derive(Debug, Parser)]
#[command(
    name = "cvcorr",
    version,
    about = "Correlations of two-mode Gaussian probes in thermal channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one scenario and print a CSV record.
    Point(PointArgs),
    /// Sweep one parameter over a linear grid.
    Sweep(SweepArgs),
    /// Quantifiers versus beam-splitter angle (8 curves).
    Fig2(FigArgs),
    /// Quantifiers versus squeezing (4 curves).
    Fig3(FigArgs),
    /// Quantifiers versus interaction time (3 curves).
    Fig4(FigArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Input thermal occupations `nA,nB` (one value sets both).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub nbar_in: Vec<f64>,
    /// Bath occupation N, shared by both modes.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub bath_n: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub bath_m_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub bath_m_im: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Displacement `Q1,P1,Q2,P2`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Vec<f64>,
    /// Read `--theta` and `--phi` in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct OutputArgs {
    /// Significant digits after the decimal point, 6 to 17.
    #[arg(long, default_value_t = 12)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Theta,
    R,
    T,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Theta => Axis::Theta,
            AxisArg::R => Axis::R,
            AxisArg::T => Axis::T,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    #[arg(long, allow_negative_numbers = true)]
    pub min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub max: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub step: f64,
    /// CSV destination; standard output when absent.
    #[arg(long = "output")]
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// A failure with its exit code already decided.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("cannot write {}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_PHYSICS,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn finite(flag: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::usage(format!("--{flag} must be finite, got {v}")))
    }
}

impl ScenarioArgs {
    pub fn to_params(&self) -> Result<ScenarioParams, String> {
        self.build().map_err(|f| f.message)
    }

    fn build(&self) -> Result<ScenarioParams, Failure> {
        let angle = |v: f64| if self.degrees { v * PI / 180.0 } else { v };
        let r = finite("r", self.r)?;
        let theta = angle(finite("theta", self.theta)?);
        let phi = angle(finite("phi", self.phi)?);
        let t = finite("t", self.t)?;
        if t < 0.0 {
            return Err(Failure::usage(format!("--t must be non-negative, got {t}")));
        }
        let nbar_in = match self.nbar_in.as_slice() {
            [] => [0.0, 0.0],
            [n] => [*n, *n],
            [a, b] => [*a, *b],
            other => {
                return Err(Failure::usage(format!(
                    "--nbar-in takes one or two values, got {}",
                    other.len()
                )))
            }
        };
        if nbar_in.iter().any(|n| !(n.is_finite() && *n >= 0.0)) {
            return Err(Failure::usage(
                "--nbar-in values must be finite and non-negative",
            ));
        }
        let alpha = match self.alpha.as_slice() {
            [] => [0.0; 4],
            [a, b, c, d] => [*a, *b, *c, *d],
            other => {
                return Err(Failure::usage(format!(
                    "--alpha takes four values, got {}",
                    other.len()
                )))
            }
        };
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Failure::usage("--alpha values must be finite"));
        }
        let gamma = finite("gamma", self.gamma)?;
        if gamma <= 0.0 {
            return Err(Failure::usage(format!(
                "--gamma must be positive, got {gamma}"
            )));
        }
        let n = finite("bath-n", self.bath_n)?;
        if n < 0.0 {
            return Err(Failure::usage(format!(
                "--bath-n must be non-negative, got {n}"
            )));
        }
        let m = Complex::new(
            finite("bath-m-re", self.bath_m_re)?,
            finite("bath-m-im", self.bath_m_im)?,
        );
        Ok(ScenarioParams {
            r,
            theta,
            phi,
            nbar_in,
            alpha,
            bath: BathParams::new(gamma, vec![n, n], vec![m, m]),
            t,
        })
    }
}

impl OutputArgs {
    fn checked(self) -> Result<usize, Failure> {
        if (6..=17).contains(&self.precision) {
            Ok(self.precision)
        } else {
            Err(Failure::usage(format!(
                "--precision must lie in 6..=17, got {}",
                self.precision
            )))
        }
    }
}

fn sci(x: f64, precision: usize) -> String {
    format!("{x:.precision$e}")
}

fn quantifier_fields(rec: &PointRecord, precision: usize) -> String {
    let eof = rec
        .eof
        .map_or_else(|| "nan".to_string(), |v| sci(v, precision));
    format!(
        "{},{eof},{},{},{},{}",
        sci(rec.gip, precision),
        sci(rec.logneg, precision),
        sci(rec.nu_minus, precision),
        rec.physical,
        rec.regularized
    )
}

pub fn point_csv(rec: &PointRecord, precision: usize) -> String {
    let p = &rec.params;
    format!(
        "{POINT_HEADER}\n{},{},{},{},{}\n",
        sci(p.r, precision),
        sci(p.theta, precision),
        sci(p.phi, precision),
        sci(p.t, precision),
        quantifier_fields(rec, precision)
    )
}

pub fn sweep_csv(table: &SweepTable, precision: usize) -> String {
    let mut out = String::with_capacity(64 * (table.rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for (value, rec) in &table.rows {
        out.push_str(table.axis.name());
        out.push(',');
        out.push_str(&sci(*value, precision));
        out.push(',');
        out.push_str(&quantifier_fields(rec, precision));
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn cmd_point(args: &PointArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let precision = args.output.checked()?;
    let rec = run_point(&args.scenario.build()?)?;
    stdout
        .write_all(point_csv(&rec, precision).as_bytes())
        .map_err(|e| Failure::io(Path::new("<stdout>"), e))
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let precision = args.output.checked()?;
    let base = args.scenario.build()?;
    let (min, max, step) = (
        finite("min", args.min)?,
        finite("max", args.max)?,
        finite("step", args.step)?,
    );
    if step <= 0.0 {
        return Err(Failure::usage(format!(
            "--step must be positive, got {step}"
        )));
    }
    if min >= max {
        return Err(Failure::usage(format!(
            "--min ({min}) must be below --max ({max})"
        )));
    }
    let axis = Axis::from(args.axis);
    let (min, max, step) = match (axis, args.scenario.degrees) {
        (Axis::Theta, true) => (min * PI / 180.0, max * PI / 180.0, step * PI / 180.0),
        _ => (min, max, step),
    };
    let grid = linear_grid(min, max, step)?;
    let csv = sweep_csv(&sweep(&base, axis, &grid)?, precision);
    match &args.output_path {
        Some(path) => write_file(path, &csv),
        None => stdout
            .write_all(csv.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn cmd_fig(args: &FigArgs, curves: Vec<Curve>, stdout: &mut dyn Write) -> Result<(), Failure> {
    let precision = args.output.checked()?;
    fs::create_dir_all(&args.out_dir).map_err(|e| Failure::io(&args.out_dir, e))?;
    for curve in curves {
        let table = sweep(&curve.base, curve.axis, &curve.grid)?;
        let path = args.out_dir.join(format!("{}.csv", curve.name));
        write_file(&path, &sweep_csv(&table, precision))?;
        writeln!(stdout, "{}", path.display())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Point(a) => cmd_point(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Fig2(a) => cmd_fig(a, fig2_recipe(), stdout),
        Command::Fig3(a) => cmd_fig(a, fig3_recipe(), stdout),
        Command::Fig4(a) => cmd_fig(a, fig4_recipe(), stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("cvcorr").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn scientific_format() {
        assert_eq!(sci(0.5, 6), "5.000000e-1");
        assert_eq!(sci(0.0, 6), "0.000000e0");
    }

    #[test]
    fn degrees_flag() {
        let (code, out, _) = call(&["point", "--theta", "90", "--degrees", "--precision", "8"]);
        assert_eq!(code, 0);
        assert!(out
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .starts_with("1.57079633e0"));
    }

    #[test]
    fn precision_bounds() {
        let (code, _, err) = call(&["point", "--precision", "5"]);
        assert_eq!(code, 2);
        assert!(err.contains("--precision"));
    }

    #[test]
    fn wrong_alpha_arity() {
        let (code, _, err) = call(&["point", "--alpha", "1,2"]);
        assert_eq!(code, 2);
        assert!(err.contains("--alpha"));
    }

    #[test]
    fn nbar_in_single_value_sets_both() {
        let args = ScenarioArgs::try_parse_from_point(&["--nbar-in", "0.7"]);
        assert_eq!(args.to_params().unwrap().nbar_in, [0.7, 0.7]);
    }

    impl ScenarioArgs {
        fn try_parse_from_point(rest: &[&str]) -> ScenarioArgs {
            let cli = Cli::try_parse_from(["cvcorr", "point"].iter().chain(rest)).unwrap();
            match cli.command {
                Command::Point(p) => p.scenario,
                _ => unreachable!(),
            }
        }
    }
}
