//! Command-line front end for the XXZ-chain RG library: anisotropy sweeps,
//! coupling flows, derivative-minimum scaling fits, quantum-group entropy
//! sweeps, and oracle-verification suites, all emitted as deterministic CSV
//! (`# key=value` summary lines above the header, 17-significant-digit
//! floats for lossless round-trips).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};

use xxz_qrg::ed::{chain_measures_exact, ed_ground, verify_block_ground_state};
use xxz_qrg::flow::{rg_trajectory, CouplingState, HaltReason};
use xxz_qrg::hamiltonian::{
    block_ground_energy, build_block_hamiltonian, build_chain_hamiltonian,
    two_block_effective_hamiltonian, Boundary,
};
use xxz_qrg::measures::{
    concurrence_closed_form, entropy_of_density, entropy_site2, measure_value,
    reduced_block_density, renormalized_measures, wootters_concurrence, Measure,
};
use xxz_qrg::qg::{build_qg_block_hamiltonian, qg_entropy_at_step, qg_from_delta, qg_ground_energy};
use xxz_qrg::scaling::{
    derivative_chain, locate_minimum, powerlaw_fit, sample_derivative_curve, FitMode,
};
use xxz_qrg::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "xxz-qrg",
    version,
    about = "Renormalization-group entanglement analysis of the spin-1/2 XXZ chain",
    after_help = "Exit codes: 0 success, 1 usage error, 2 verification or fit failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement measures over a Δ grid for each RG step.
    ///
    /// Rows: delta,n,N_effective,concurrence,eof,entropy.
    Sweep(SweepArgs),
    /// Coupling flow (J, Δ) from a bare starting point.
    ///
    /// Rows: step,J,delta; a leading `# halt=` line records why it stopped.
    Flow(FlowArgs),
    /// Derivative minima per RG step and their power-law scaling fits.
    ///
    /// Rows: measure,n,N,delta_m,min_derivative; fit results appear as
    /// `# key=value` lines above the header. With --curves, emits the raw
    /// derivative curves (rows: measure,n,delta,derivative) instead.
    Scaling(ScalingArgs),
    /// Quantum-group entanglement entropy over a Δ grid per RG step.
    ///
    /// Rows: delta,n,E_q. For Δ ≤ 1 the rows are step-independent.
    Qg(QgArgs),
    /// Numeric oracle suites: block ED, Wootters equivalence, chain-rule
    /// derivatives, and the effective-Hamiltonian identity.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Smallest anisotropy Δ on the grid.
    #[arg(long, default_value_t = 0.0)]
    delta_min: f64,
    /// Largest anisotropy Δ on the grid.
    #[arg(long, default_value_t = 3.0)]
    delta_max: f64,
    /// Number of evenly spaced grid points (at least 2).
    #[arg(long, default_value_t = 301)]
    points: usize,
}

impl GridArgs {
    fn values(&self) -> Result<Vec<f64>, Failure> {
        if !self.delta_min.is_finite() || !self.delta_max.is_finite() || self.delta_min < 0.0 {
            return Err(Failure::Usage(anyhow!(
                "--delta-min/--delta-max must be finite and non-negative"
            )));
        }
        if self.delta_min >= self.delta_max {
            return Err(Failure::Usage(anyhow!(
                "--delta-min must be smaller than --delta-max"
            )));
        }
        if self.points < 2 {
            return Err(Failure::Usage(anyhow!("--points must be at least 2")));
        }
        let span = self.delta_max - self.delta_min;
        let last = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| self.delta_min + span * i as f64 / last)
            .collect())
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// RG steps to evaluate, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 4, 5, 6])]
    steps: Vec<usize>,
    /// Output file (defaults to standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FlowArgs {
    /// Bare anisotropy Δ₀ the flow starts from.
    #[arg(long)]
    delta0: f64,
    /// Bare coupling J₀ the flow starts from.
    #[arg(long, default_value_t = 1.0)]
    j0: f64,
    /// Maximum number of RG steps before halting.
    #[arg(long, default_value_t = 40)]
    steps: usize,
    /// Output file (defaults to standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    /// Measure whose derivative is analyzed.
    #[arg(long, value_enum, default_value_t = MeasureArg::All)]
    measure: MeasureArg,
    /// First RG step of the fit window.
    #[arg(long, default_value_t = 2)]
    fit_min_step: usize,
    /// Last RG step of the fit window.
    #[arg(long, default_value_t = 12)]
    fit_max_step: usize,
    /// First RG step admitted to the magnitude fit; the depth of the n < 4
    /// minima is still distorted by the bracket edge.
    #[arg(long, default_value_t = 4)]
    magnitude_min_step: usize,
    /// Emit raw derivative curves over the Δ grid instead of minima and fits.
    #[arg(long)]
    curves: bool,
    /// RG steps for --curves, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 4])]
    steps: Vec<usize>,
    #[command(flatten)]
    grid: GridArgs,
    /// Output file (defaults to standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QgArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// RG steps to evaluate, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 4, 5, 6])]
    steps: Vec<usize>,
    /// Output file (defaults to standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Override every suite's tolerance with one value.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Output file (defaults to standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum MeasureArg {
    Concurrence,
    Entropy,
    Eof,
    All,
}

impl MeasureArg {
    fn selected(self) -> Vec<Measure> {
        match self {
            MeasureArg::Concurrence => vec![Measure::Concurrence],
            MeasureArg::Entropy => vec![Measure::Entropy],
            MeasureArg::Eof => vec![Measure::Formation],
            MeasureArg::All => vec![
                Measure::Concurrence,
                Measure::Entropy,
                Measure::Formation,
            ],
        }
    }
}

/// Failure modes mapped to exit codes: usage errors exit 1, verification or
/// fit failures exit 2.
enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::TooFewFitPoints { .. }
            | CoreError::NonPositiveLogArgument(_)
            | CoreError::NoInteriorMinimum { .. }
            | CoreError::EigNotConverged { .. }
            | CoreError::UnexpectedDegeneracy { .. } => Failure::Check(e.into()),
            other => Failure::Usage(other.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (body, out) = match cli.command {
        Command::Sweep(args) => (cmd_sweep(&args)?, args.out),
        Command::Flow(args) => (cmd_flow(&args)?, args.out),
        Command::Scaling(args) => (cmd_scaling(&args)?, args.out),
        Command::Qg(args) => (cmd_qg(&args)?, args.out),
        Command::Verify(args) => {
            // Verification must still report its findings before failing.
            let (body, ok) = cmd_verify(&args);
            write_output(args.out.as_ref(), &body)?;
            return if ok {
                Ok(())
            } else {
                Err(Failure::Check(anyhow!("one or more suites failed")))
            };
        }
    };
    write_output(out.as_ref(), &body)
}

fn write_output(path: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body)
            .map_err(|e| Failure::Usage(anyhow!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .or_else(|e| {
                    // A closed pipe (e.g. piping into `head`) is not an error.
                    if e.kind() == io::ErrorKind::BrokenPipe {
                        Ok(())
                    } else {
                        Err(Failure::Usage(anyhow!("cannot write to stdout: {e}")))
                    }
                })
        }
    }
}

/// 17 significant digits: round-trips every f64 exactly.
fn csv(x: f64) -> String {
    format!("{x:.16e}")
}

fn require_steps(steps: &[usize]) -> Result<(), Failure> {
    if steps.is_empty() {
        return Err(Failure::Usage(anyhow!("--steps must name at least one step")));
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<String, Failure> {
    let deltas = args.grid.values()?;
    require_steps(&args.steps)?;
    let mut out = String::new();
    out.push_str("delta,n,N_effective,concurrence,eof,entropy\n");
    for &delta in &deltas {
        for &n in &args.steps {
            let r = renormalized_measures(delta, n)?;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                csv(delta),
                n,
                r.effective_sites,
                csv(r.concurrence),
                csv(r.formation),
                csv(r.entropy)
            );
        }
    }
    Ok(out)
}

fn cmd_flow(args: &FlowArgs) -> Result<String, Failure> {
    let c0 = CouplingState::new(args.j0, args.delta0)?;
    let trajectory = rg_trajectory(c0, args.steps);
    let halt = match trajectory.halt {
        HaltReason::MaxSteps => "max-steps",
        HaltReason::IsingFixedPoint => "ising-fixed-point",
        HaltReason::Converged => "converged",
    };
    let mut out = String::new();
    let _ = writeln!(out, "# halt={halt}");
    out.push_str("step,J,delta\n");
    for (k, state) in trajectory.steps.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", k, csv(state.j()), csv(state.delta()));
    }
    Ok(out)
}

fn cmd_qg(args: &QgArgs) -> Result<String, Failure> {
    let deltas = args.grid.values()?;
    require_steps(&args.steps)?;
    let mut out = String::new();
    out.push_str("delta,n,E_q\n");
    for &delta in &deltas {
        for &n in &args.steps {
            let e = qg_entropy_at_step(delta, n)?;
            let _ = writeln!(out, "{},{},{}", csv(delta), n, csv(e));
        }
    }
    Ok(out)
}

fn cmd_scaling(args: &ScalingArgs) -> Result<String, Failure> {
    let measures = args.measure.selected();
    if args.curves {
        return scaling_curves(args, &measures);
    }
    if args.fit_min_step > args.fit_max_step {
        return Err(Failure::Usage(anyhow!(
            "--fit-min-step must not exceed --fit-max-step"
        )));
    }
    let window: Vec<usize> = (args.fit_min_step..=args.fit_max_step).collect();
    if window.len() < 4 {
        return Err(Failure::Usage(anyhow!(
            "fit window holds {} steps; at least 4 are required",
            window.len()
        )));
    }

    let bracket = xxz_qrg::scaling::default_bracket::<f64>();
    let mut summary = String::new();
    let _ = writeln!(summary, "# nu_analytic={}", csv(xxz_qrg::flow::critical_nu()));
    let _ = writeln!(
        summary,
        "# one_over_nu={}",
        csv(xxz_qrg::flow::critical_nu_inverse())
    );
    let mut rows = String::new();
    rows.push_str("measure,n,N,delta_m,min_derivative\n");

    for &measure in &measures {
        let label = measure.label();
        let mut positions: Vec<(f64, f64)> = Vec::new();
        let mut magnitudes: Vec<(f64, f64)> = Vec::new();
        for &n in &window {
            // Some (measure, step) pairs have no interior minimum in the
            // bracket (too shallow or flowed past overflow); skip those.
            let (delta_m, value) = match locate_minimum(n, measure, bracket) {
                Ok(found) => found,
                Err(CoreError::NoInteriorMinimum { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            let size = xxz_qrg::flow::effective_sites(n);
            let _ = writeln!(
                rows,
                "{label},{n},{size},{},{}",
                csv(delta_m),
                csv(value)
            );
            positions.push((size as f64, delta_m));
            if n >= args.magnitude_min_step {
                magnitudes.push((size as f64, value));
            }
        }
        let position_fit = powerlaw_fit(&positions, FitMode::Position).map_err(|e| {
            Failure::Check(anyhow!("{label} position fit over {} minima: {e}", positions.len()))
        })?;
        let magnitude_fit = powerlaw_fit(&magnitudes, FitMode::Magnitude).map_err(|e| {
            Failure::Check(anyhow!("{label} magnitude fit over {} minima: {e}", magnitudes.len()))
        })?;
        let _ = writeln!(summary, "# {label}_theta_position={}", csv(position_fit.theta));
        let _ = writeln!(summary, "# {label}_theta_magnitude={}", csv(magnitude_fit.theta));
        let _ = writeln!(
            summary,
            "# {label}_r2={}",
            csv(position_fit.r_squared.min(magnitude_fit.r_squared))
        );
        let _ = writeln!(summary, "# {label}_position_points={}", position_fit.points);
        let _ = writeln!(summary, "# {label}_magnitude_points={}", magnitude_fit.points);
    }
    Ok(summary + &rows)
}

fn scaling_curves(args: &ScalingArgs, measures: &[Measure]) -> Result<String, Failure> {
    let deltas = args.grid.values()?;
    require_steps(&args.steps)?;
    let mut out = String::new();
    out.push_str("measure,n,delta,derivative\n");
    for &measure in measures {
        for &n in &args.steps {
            let curve = sample_derivative_curve(n, measure, &deltas)?;
            for &(delta, value) in curve.samples() {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    measure.label(),
                    n,
                    csv(delta),
                    csv(value)
                );
            }
        }
    }
    Ok(out)
}

struct Suite {
    name: &'static str,
    tolerance: f64,
    passed: usize,
    total: usize,
    worst: f64,
}

impl Suite {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Suite {
            name,
            tolerance,
            passed: 0,
            total: 0,
            worst: 0.0,
        }
    }

    fn check(&mut self, error: f64) {
        self.total += 1;
        if error.abs() <= self.tolerance {
            self.passed += 1;
        }
        if error.abs() > self.worst {
            self.worst = error.abs();
        }
    }

    /// Structural yes/no check, recorded as error 0 or 1.
    fn check_flag(&mut self, ok: bool) {
        self.check(if ok { 0.0 } else { 1.0 });
    }

    fn ok(&self) -> bool {
        self.passed == self.total
    }

    fn line(&self) -> String {
        format!(
            "{}: {} ({}/{} checks within {:e}; worst error {:.3e})",
            self.name,
            if self.ok() { "pass" } else { "FAIL" },
            self.passed,
            self.total,
            self.tolerance,
            self.worst
        )
    }
}

fn cmd_verify(args: &VerifyArgs) -> (String, bool) {
    let suites = [
        suite_ed_oracle(args.tolerance.unwrap_or(1e-10)),
        suite_wootters(args.tolerance.unwrap_or(1e-12)),
        suite_chain_rule(args.tolerance.unwrap_or(1e-5)),
        suite_effective_hamiltonian(args.tolerance.unwrap_or(1e-10)),
    ];
    let mut out = String::new();
    let mut all_ok = true;
    for suite in &suites {
        out.push_str(&suite.line());
        out.push('\n');
        all_ok &= suite.ok();
    }
    out.push_str(if all_ok {
        "all suites passed\n"
    } else {
        "verification FAILED\n"
    });
    (out, all_ok)
}

/// Block and short-chain ED against the closed-form energies and states.
fn suite_ed_oracle(tolerance: f64) -> Suite {
    let mut suite = Suite::new("ed-oracle invariants", tolerance);
    for k in 0..50 {
        let delta = 5.0 * k as f64 / 49.0;
        let c = CouplingState::new(1.0, delta).expect("grid is valid");
        let ed = ed_ground(&build_block_hamiltonian(c)).expect("block ED");
        suite.check(ed.energy() - block_ground_energy(c));
        suite.check(verify_block_ground_state(delta).expect("doublet overlap"));
    }
    for k in 0..20 {
        let delta = 1.0 + 4.0 * (k + 1) as f64 / 20.0;
        let qg = qg_from_delta(delta).expect("gapped coupling");
        let h = build_qg_block_hamiltonian(1.0, qg.q())
            .and_then(|h| h.as_real_matrix())
            .expect("real-region matrix");
        let ed = ed_ground(&h).expect("QG block ED");
        suite.check(ed.energy() - qg_ground_energy(1.0, delta));
        suite.check_flag(ed.degeneracy() == 2);
    }
    let two = CouplingState::new(1.0, 1.0).expect("valid");
    let h2 = build_chain_hamiltonian(2, two, Boundary::Open).expect("two sites");
    let ed2 = ed_ground(&h2).expect("two-site ED");
    suite.check(ed2.energy() + 0.75);
    suite.check_flag(ed2.degeneracy() == 1);
    let n6 = chain_measures_exact(6, 0.5, Boundary::Periodic, &[1]).expect("six-site ED");
    suite.check(n6.entropy - 1.0);
    suite
}

/// General Wootters concurrence and spectral entropy against closed forms.
fn suite_wootters(tolerance: f64) -> Suite {
    let mut suite = Suite::new("wootters vs closed form", tolerance);
    for k in 0..200 {
        let delta = 5.0 * k as f64 / 199.0;
        let rho13 = reduced_block_density(delta, &[1, 3]).expect("end-pair density");
        let c = wootters_concurrence(&rho13).expect("concurrence");
        suite.check(c - concurrence_closed_form(delta).expect("closed form"));
        let rho2 = reduced_block_density(delta, &[2]).expect("middle-site density");
        let e = entropy_of_density(&rho2).expect("entropy");
        suite.check(e - entropy_site2(delta).expect("closed form"));
    }
    suite
}

/// Analytic derivative chain against central finite differences (relative).
fn suite_chain_rule(tolerance: f64) -> Suite {
    let mut suite = Suite::new("chain rule vs finite difference", tolerance);
    let h = 1e-6;
    for n in 0..=6usize {
        for measure in Measure::ALL {
            let minimum = locate_minimum(n, measure, (1.0, 2.0)).ok().map(|(x, _)| x);
            for k in 0..=130 {
                let delta = 0.5 + k as f64 * 0.01;
                if let Some(m) = minimum {
                    if (delta - m).abs() < 1e-3 {
                        continue;
                    }
                }
                let analytic = derivative_chain(delta, n, measure).expect("derivative");
                let up = measure_value(measure, xxz_qrg::flow::flow_to_step(delta + h, n))
                    .expect("measure");
                let down = measure_value(measure, xxz_qrg::flow::flow_to_step(delta - h, n))
                    .expect("measure");
                let fd = (up - down) / (2.0 * h);
                suite.check((analytic - fd) / analytic);
            }
        }
    }
    suite
}

/// Projected two-block Hamiltonian against the renormalized two-site form.
fn suite_effective_hamiltonian(tolerance: f64) -> Suite {
    let mut suite = Suite::new("effective-hamiltonian equivalence", tolerance);
    for k in 0..20 {
        let delta = 3.0 * k as f64 / 19.0;
        let c = CouplingState::new(1.0, delta).expect("grid is valid");
        let projected = two_block_effective_hamiltonian(c).expect("projection");
        let mut expected =
            build_chain_hamiltonian(2, xxz_qrg::flow::rg_step(c), Boundary::Open)
                .expect("two-site form");
        let shift = 2.0 * block_ground_energy(c);
        for i in 0..4 {
            expected.add_at(i, i, shift);
        }
        suite.check(projected.max_abs_diff(&expected));
    }
    suite
}
