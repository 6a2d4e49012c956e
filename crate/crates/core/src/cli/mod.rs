//! Command-line front end.
//!
//! Subcommands write plain `key = value` report lines to the supplied writer
//! and CSV data to files. [`run`] returns the process exit code:
//! 0 pass, 1 verification failure, 2 bad input, 3 I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::discrete::{
    in_param_set_s, iterate, verify_lasalle, verify_m_invariance, LaSalleFunction, DELTA_TOL,
    REGION_TOL,
};
use crate::flow::{integrate, verify_lyapunov, LyapunovFunction, DEFAULT_DT};
use crate::linear::{classify_fixed_point, ComplexPair};
use crate::model::{fixed_points, FixedPointLabel, Params, State};
use crate::ns::{
    detect_invariant_curve, ns_report, ns_setup, trace_invariant_curve, CurveSettings,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "phytozoo",
    version,
    about = "Phytoplankton-zooplankton model analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify every fixed point of the map.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Write a trajectory (ode) or orbit (map) as CSV.
    Simulate {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        /// Initial state as `x,y`.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        seed: State,
        /// Map iterations.
        #[arg(long)]
        steps: Option<usize>,
        /// ODE end time.
        #[arg(long, allow_negative_numbers = true)]
        t_end: Option<f64>,
        /// ODE step size.
        #[arg(long, default_value_t = DEFAULT_DT, allow_negative_numbers = true)]
        dt: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a Lyapunov, LaSalle or invariance check on a grid.
    Verify {
        #[arg(long, value_enum)]
        which: Check,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Neimark-Sacker analysis at gamma0 = 1 + r, with an optional curve run.
    Ns {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma_star: f64,
        #[arg(long, value_parser = parse_pair, default_value = "0.3,0.7", allow_hyphen_values = true)]
        seed: State,
        /// CSV for the sampled curve window (needs gamma-star > 0).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = CurveSettings::default().transient)]
        transient: usize,
        #[arg(long, default_value_t = CurveSettings::default().window)]
        window: usize,
    },
    /// Classify a grid of (r, gamma) values into CSV.
    Sweep {
        /// `lo:hi:n`.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        r: GridRange,
        /// `lo:hi:n`.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        gamma: GridRange,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Ode,
    Map,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Thm1,
    Thm2,
    Lasalle1,
    Lasalle2,
    Lemma2,
}

/// Evenly spaced values `lo, …, hi` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridRange {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let last = self.n - 1;
        (0..self.n)
            .map(|i| {
                if i == last {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

fn parse_pair(s: &str) -> std::result::Result<State, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x: f64 = a.trim().parse().map_err(|e| format!("bad x `{a}`: {e}"))?;
    let y: f64 = b.trim().parse().map_err(|e| format!("bad y `{b}`: {e}"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err("seed must be finite".into());
    }
    Ok(State::new(x, y))
}

fn parse_range(s: &str) -> std::result::Result<GridRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("expected `lo:hi:n`, got `{s}`"));
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lo `{lo}`: {e}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad hi `{hi}`: {e}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("bad n `{n}`: {e}"))?;
    if !(lo.is_finite() && hi.is_finite()) || n == 0 || hi < lo {
        return Err(format!("need finite lo <= hi and n >= 1, got `{s}`"));
    }
    Ok(GridRange { lo, hi, n })
}

#[derive(Debug)]
enum Failure {
    BadInput(String),
    Io(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::BadInput(e.to_string())
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

type CmdResult = std::result::Result<i32, Failure>;

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn pair(p: &ComplexPair) -> String {
    format!("{}, {}", complex(p.lambda1), complex(p.lambda2))
}

struct Report<'a> {
    out: &'a mut dyn Write,
}

impl Report<'_> {
    fn line(
        &mut self,
        key: &str,
        value: impl std::fmt::Display,
    ) -> std::result::Result<(), Failure> {
        writeln!(self.out, "{key} = {value}").map_err(|e| Failure::Io(format!("stdout: {e}")))
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing the report to `out`. Diagnostics go to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let mut report = Report { out };
    let result = match cli.command {
        Command::Classify { r, gamma } => cmd_classify(&mut report, r, gamma),
        Command::Simulate {
            model,
            r,
            gamma,
            seed,
            steps,
            t_end,
            dt,
            out,
        } => cmd_simulate(&mut report, model, r, gamma, seed, steps, t_end, dt, &out),
        Command::Verify {
            which,
            r,
            gamma,
            grid,
        } => cmd_verify(&mut report, which, r, gamma, grid),
        Command::Ns {
            r,
            gamma_star,
            seed,
            out,
            transient,
            window,
        } => {
            let settings = CurveSettings {
                transient,
                window,
                ..CurveSettings::default()
            };
            cmd_ns(&mut report, r, gamma_star, seed, out.as_deref(), &settings)
        }
        Command::Sweep { r, gamma, out } => cmd_sweep(&mut report, r, gamma, &out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::BadInput(msg)) => {
            eprintln!("error: {msg}");
            EXIT_BAD_INPUT
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_IO
        }
    }
}

fn cmd_classify(rep: &mut Report, r: f64, gamma: f64) -> CmdResult {
    let p = Params::new(r, gamma)?;
    rep.line("r", r)?;
    rep.line("gamma", gamma)?;
    for fp in fixed_points(&p) {
        let c = classify_fixed_point(&fp, &p)?;
        let l = fp.label;
        rep.line(
            &format!("{l}.state"),
            format!("{}, {}", fp.state.x, fp.state.y),
        )?;
        rep.line(&format!("{l}.eigenvalues"), pair(&c.evidence))?;
        rep.line(
            &format!("{l}.moduli"),
            format!("{}, {}", c.moduli.0, c.moduli.1),
        )?;
        rep.line(&format!("{l}.class"), c.kind)?;
    }
    if !p.has_positive_fixed_point() {
        rep.line("E2", "absent")?;
    }
    Ok(EXIT_PASS)
}

fn csv_writer(path: &Path) -> std::result::Result<csv::Writer<File>, Failure> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    rep: &mut Report,
    model: Model,
    r: f64,
    gamma: f64,
    seed: State,
    steps: Option<usize>,
    t_end: Option<f64>,
    dt: f64,
    out: &Path,
) -> CmdResult {
    let p = Params::new(r, gamma)?;
    let (rows, last, left): (Vec<[String; 3]>, State, bool) = match (model, steps, t_end) {
        (Model::Map, Some(n), None) => {
            if n == 0 {
                return Err(Failure::BadInput("--steps must be >= 1".into()));
            }
            let orbit = iterate(seed, &p, n);
            let rows = orbit
                .states
                .iter()
                .enumerate()
                .map(|(k, s)| [k.to_string(), num(s.x), num(s.y)])
                .collect();
            (rows, orbit.last(), orbit.first_escape.is_some())
        }
        (Model::Ode, None, Some(t)) => {
            let traj = integrate(seed, &p, t, dt)?;
            let rows = traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(t, s)| [num(*t), num(s.x), num(s.y)])
                .collect();
            (rows, traj.final_state(), traj.left_quadrant)
        }
        (Model::Map, _, _) => {
            return Err(Failure::BadInput("map needs --steps and no --t-end".into()))
        }
        (Model::Ode, _, _) => {
            return Err(Failure::BadInput("ode needs --t-end and no --steps".into()))
        }
    };

    let mut w = csv_writer(out)?;
    w.write_record(["step_or_t", "x", "y"])
        .map_err(|e| io_err(out, e))?;
    for row in &rows {
        w.write_record(row).map_err(|e| io_err(out, e))?;
    }
    w.flush().map_err(|e| io_err(out, e))?;

    rep.line("rows", rows.len())?;
    rep.line("final_x", num(last.x))?;
    rep.line("final_y", num(last.y))?;
    rep.line("left_quadrant", left)?;
    rep.line("out", out.display())?;
    Ok(EXIT_PASS)
}

fn verdict(rep: &mut Report, ok: bool) -> CmdResult {
    rep.line("result", if ok { "pass" } else { "fail" })?;
    Ok(if ok {
        EXIT_PASS
    } else {
        EXIT_VERIFICATION_FAILED
    })
}

fn cmd_verify(rep: &mut Report, which: Check, r: f64, gamma: f64, grid: usize) -> CmdResult {
    let p = Params::new(r, gamma)?;
    if grid < 2 {
        return Err(Failure::BadInput("--grid must be >= 2".into()));
    }
    let name = which.to_possible_value().expect("no skipped variants");
    rep.line("check", name.get_name())?;
    rep.line("r", r)?;
    rep.line("gamma", gamma)?;
    match which {
        Check::Thm1 | Check::Thm2 => {
            let f = if which == Check::Thm1 {
                LyapunovFunction::PreyOnly
            } else {
                LyapunovFunction::Coexistence
            };
            let res = verify_lyapunov(&p, f, grid)?;
            rep.line("grid_points", res.grid_points)?;
            rep.line("max_violation", num(res.max_violation))?;
            rep.line("monotone_fraction", res.monotone_fraction)?;
            rep.line("max_derivative_mismatch", num(res.max_derivative_mismatch))?;
            rep.line("radially_unbounded", res.radially_unbounded)?;
            verdict(rep, res.passed())
        }
        Check::Lasalle1 | Check::Lasalle2 | Check::Lemma2 => {
            let (res, tol) = match which {
                Check::Lasalle1 => (
                    verify_lasalle(&p, LaSalleFunction::Linear, grid)?,
                    DELTA_TOL,
                ),
                Check::Lasalle2 => (
                    verify_lasalle(&p, LaSalleFunction::PiecewiseLog, grid)?,
                    DELTA_TOL,
                ),
                _ => (verify_m_invariance(&p, grid)?, REGION_TOL),
            };
            rep.line("grid_points", res.points)?;
            rep.line("max_violation", num(res.max_violation))?;
            rep.line("passed_fraction", res.passed_fraction)?;
            verdict(rep, res.passed(tol))
        }
    }
}

fn cmd_ns(
    rep: &mut Report,
    r: f64,
    gamma_star: f64,
    seed: State,
    out: Option<&Path>,
    settings: &CurveSettings,
) -> CmdResult {
    if !(gamma_star.is_finite() && gamma_star >= 0.0) {
        return Err(Failure::BadInput(format!(
            "--gamma-star must be >= 0, got {gamma_star}"
        )));
    }
    let report = ns_report(r)?;
    let s = report.setup;
    rep.line("r", s.r)?;
    rep.line("gamma0", s.gamma0)?;
    rep.line("xhat", s.xhat)?;
    rep.line("yhat", s.yhat)?;
    rep.line("multipliers", pair(&report.multipliers))?;
    rep.line("modulus", report.modulus)?;
    rep.line("transversality", report.transversality.analytic)?;
    rep.line("transversality_fd", report.transversality.finite_difference)?;
    let nd = report.nondegenerate;
    rep.line(
        "nondegenerate",
        format!("{}, {}, {}, {}", nd[0], nd[1], nd[2], nd[3]),
    )?;
    let c = report.coeffs;
    for (key, v) in [
        ("Fxx", c.second.fxx),
        ("Fxy", c.second.fxy),
        ("Fyy", c.second.fyy),
        ("Gxx", c.second.gxx),
        ("Gxy", c.second.gxy),
        ("Gyy", c.second.gyy),
    ] {
        rep.line(key, v)?;
    }
    for (key, v) in [
        ("L20", c.l20),
        ("L11", c.l11),
        ("L02", c.l02),
        ("L21", c.l21),
    ] {
        rep.line(key, complex(v))?;
    }
    rep.line("L_pipeline", report.l_pipeline)?;
    rep.line("L_closed_form", report.l_closed_form)?;
    rep.line(
        "attracting_curve_predicted",
        report.predicts_attracting_curve(),
    )?;

    if gamma_star > 0.0 {
        let setup = ns_setup(r)?;
        let (stats, window) = if out.is_some() {
            trace_invariant_curve(&setup, gamma_star, seed, settings)?
        } else {
            (
                detect_invariant_curve(&setup, gamma_star, seed, settings)?,
                Vec::new(),
            )
        };
        rep.line("gamma_star", gamma_star)?;
        rep.line("curve.r_min", num(stats.r_min))?;
        rep.line("curve.r_max", num(stats.r_max))?;
        rep.line("curve.mean_radius", num(stats.mean_radius))?;
        rep.line("curve.angular_coverage", num(stats.angular_coverage))?;
        rep.line("curve.closed", stats.closed)?;
        if let Some(path) = out {
            let mut w = csv_writer(path)?;
            w.write_record(["step", "x", "y"])
                .map_err(|e| io_err(path, e))?;
            for (k, st) in window.iter().enumerate() {
                let step = settings.transient + k + 1;
                w.write_record([step.to_string(), num(st.x), num(st.y)])
                    .map_err(|e| io_err(path, e))?;
            }
            w.flush().map_err(|e| io_err(path, e))?;
            rep.line("out", path.display())?;
        }
    } else if out.is_some() {
        return Err(Failure::BadInput("--out needs --gamma-star > 0".into()));
    }
    Ok(EXIT_PASS)
}

fn class_of(p: &Params, label: FixedPointLabel) -> std::result::Result<String, Failure> {
    match fixed_points(p).into_iter().find(|fp| fp.label == label) {
        Some(fp) => Ok(classify_fixed_point(&fp, p)?.kind.to_string()),
        None => Ok(String::new()),
    }
}

fn cmd_sweep(rep: &mut Report, r: GridRange, gamma: GridRange, out: &Path) -> CmdResult {
    let rs = r.values();
    let gs = gamma.values();
    if rs[0] <= 0.0 || gs[0] <= 0.0 {
        return Err(Failure::BadInput("r and gamma ranges must be > 0".into()));
    }
    let cells: Vec<(f64, f64)> = rs
        .iter()
        .flat_map(|&r| gs.iter().map(move |&g| (r, g)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(r, g)| {
            let p = Params::new(r, g)?;
            Ok([
                num(r),
                num(g),
                class_of(&p, FixedPointLabel::E0)?,
                class_of(&p, FixedPointLabel::E1)?,
                class_of(&p, FixedPointLabel::E2)?,
                in_param_set_s(&p).inside.to_string(),
                num(g - (1.0 + r)),
            ])
        })
        .collect::<std::result::Result<Vec<_>, Failure>>()?;

    let mut w = csv_writer(out)?;
    w.write_record([
        "r",
        "gamma",
        "e0_class",
        "e1_class",
        "e2_class",
        "in_S",
        "ns_distance",
    ])
    .map_err(|e| io_err(out, e))?;
    for row in &rows {
        w.write_record(row).map_err(|e| io_err(out, e))?;
    }
    w.flush().map_err(|e| io_err(out, e))?;
    rep.line("rows", rows.len())?;
    rep.line("out", out.display())?;
    Ok(EXIT_PASS)
}
