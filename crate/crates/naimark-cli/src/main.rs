//! Command-line front-end: dilation construction, compatibility checks,
//! joint-POVM synthesis, threshold scans and plot-data emission.
//!
//! Exit codes: 0 success/feasible, 1 infeasible or undecided, 2 parse
//! error, 3 validation error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use naimark::continuous::{
    self, improved_joint_gprime, phase_number_f, phase_number_joint, PHASE_NUMBER_EPS_MIN,
};
use naimark::effect::{pauli_compose, PauliVector};
use naimark::io::{DilationJson, EffectJson, GridJson, PovmJson};
use naimark::joint::{busch_equivalent_value, busch_joint, busch_necessary, busch_sum};
use naimark::solve::{feasibility_solve, SolveOptions, SolveOutcome};
use naimark::trinary::{
    build_trinary, build_trinary_joint, target_minus, trinary_threshold, TrinaryParams,
};
use naimark::{batch, DiscretePovm, Error, JointPovm, NaimarkDilation};

#[derive(Debug, Parser)]
#[command(
    name = "naimark",
    about = "Minimal Naimark dilations of qubit POVMs and joint-measurement synthesis",
    version
)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Config {
    /// Absolute tolerance for algebraic validation.
    #[arg(long, global = true, default_value_t = naimark::ALG_TOL)]
    tol: f64,
    /// Residual below which a feasibility solve is accepted.
    #[arg(long, global = true, default_value_t = naimark::DEFAULT_FEAS_TOL)]
    feas_tol: f64,
    /// Iteration cap of the feasibility solver.
    #[arg(long, global = true, default_value_t = naimark::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format of sweep data (report subcommands always emit JSON).
    #[arg(long, global = true, value_parser = ["json", "csv"], default_value = "csv")]
    format: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the minimal dilation of a POVM file and print its residual.
    Dilate {
        /// POVM JSON file: {"effects": [{"e0": …, "ex": …, "ey": …, "ez": …}, …]}.
        povm_file: PathBuf,
    },
    /// Evaluate both pair-criterion forms for two effects and, for
    /// compatible unbiased pairs, construct the joint POVM.
    Busch {
        /// First effect as comma-separated Pauli components e0,ex,ey,ez.
        #[arg(long, value_name = "E0,EX,EY,EZ")]
        e: String,
        /// Second effect in the same form.
        #[arg(long, value_name = "E0,EX,EY,EZ")]
        b: String,
    },
    /// Decide compatibility of two POVM files and synthesize a joint POVM.
    Joint {
        povm_e_file: PathBuf,
        povm_b_file: PathBuf,
    },
    /// The covariant three-outcome family: threshold, ansatz verdict and
    /// joint grid.
    Trinary {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        eta: f64,
    },
    /// Continuous single-photon families.
    #[command(subcommand)]
    Continuous(ContinuousCmd),
}

#[derive(Debug, Subcommand)]
enum ContinuousCmd {
    /// CSV sweep of the equal-noise compatibility predicates.
    Thresholds {
        #[arg(long, default_value_t = 0.0)]
        eps_start: f64,
        #[arg(long, default_value_t = 1.0)]
        eps_end: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// The modified triple joint measurement at a given noise level.
    Gprime {
        #[arg(long)]
        eps: f64,
        /// Free parameter; defaults to the midpoint of the admissible window.
        #[arg(long)]
        f: Option<f64>,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
    },
    /// The phase–number coupling budget curve (ε, f(ε)).
    PhaseCurve {
        #[arg(long, default_value_t = 0.01)]
        eps_start: f64,
        #[arg(long, default_value_t = 1.0)]
        eps_end: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

/// Exit discipline shared by all subcommands.
enum CmdError {
    Parse(String),
    Validation(String),
    Infeasible(String),
}

impl CmdError {
    fn code(&self) -> u8 {
        match self {
            CmdError::Parse(_) => 2,
            CmdError::Validation(_) => 3,
            CmdError::Infeasible(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Parse(m) | CmdError::Validation(m) | CmdError::Infeasible(m) => m,
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match &e {
            Error::Infeasible(_) => CmdError::Infeasible(e.to_string()),
            _ => CmdError::Validation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CmdError> {
    match &cli.command {
        Command::Dilate { povm_file } => cmd_dilate(&cli.config, povm_file),
        Command::Busch { e, b } => cmd_busch(&cli.config, e, b),
        Command::Joint {
            povm_e_file,
            povm_b_file,
        } => cmd_joint(&cli.config, povm_e_file, povm_b_file),
        Command::Trinary { lambda, eta } => cmd_trinary(&cli.config, *lambda, *eta),
        Command::Continuous(sub) => cmd_continuous(&cli.config, sub),
    }
}

fn read_povm(path: &PathBuf) -> Result<DiscretePovm, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Parse(format!("{}: {e}", path.display())))?;
    let parsed: PovmJson = serde_json::from_str(&text)
        .map_err(|e| CmdError::Parse(format!("{}: {e}", path.display())))?;
    Ok(parsed.to_povm())
}

fn parse_effect(arg: &str) -> Result<PauliVector, CmdError> {
    let parts: Vec<f64> = arg
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CmdError::Parse(format!("effect '{arg}': {e}")))?;
    if parts.len() != 4 {
        return Err(CmdError::Parse(format!(
            "effect '{arg}' needs four components e0,ex,ey,ez"
        )));
    }
    let v = PauliVector::new(parts[0], [parts[1], parts[2], parts[3]]);
    if !v.is_effect(1e-9) {
        return Err(CmdError::Validation(format!(
            "'{arg}' is not a valid effect"
        )));
    }
    Ok(v)
}

fn emit(config: &Config, text: &str) -> Result<(), CmdError> {
    match &config.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CmdError::Validation(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_dilate(config: &Config, povm_file: &PathBuf) -> Result<(), CmdError> {
    let povm = read_povm(povm_file)?;
    naimark::povm::validate_povm(&povm, config.tol.max(naimark::ALG_TOL), false)
        .map_err(|e| CmdError::Validation(e.to_string()))?;
    let dilation =
        NaimarkDilation::build(&povm).map_err(|e| CmdError::Validation(e.to_string()))?;
    let residual = dilation
        .verify(&povm)
        .map_err(|e| CmdError::Validation(e.to_string()))?;
    eprintln!(
        "dilation dimension {} residual {residual:e}",
        dilation.dim()
    );
    emit(config, &to_json(&DilationJson::from_dilation(&dilation)))
}

#[derive(Serialize)]
struct BuschReport {
    pair_sum: f64,
    pair_holds: bool,
    equivalent_value: f64,
    equivalent_holds: bool,
    verdict: String,
    note: Option<String>,
    joint: Option<GridJson>,
}

fn cmd_busch(config: &Config, e_arg: &str, b_arg: &str) -> Result<(), CmdError> {
    let e = parse_effect(e_arg)?;
    let b = parse_effect(b_arg)?;
    let sum = busch_sum(&e, &b);
    let necessary = busch_necessary(&e, &b);
    let equiv_value = busch_equivalent_value(&e, &b);
    let equivalent = equiv_value <= 1.0 + naimark::ALG_TOL;

    let unbiased = e.is_unbiased(1e-9) && b.is_unbiased(1e-9);
    let mut note = None;
    let mut joint = None;
    let verdict;
    if unbiased {
        if necessary {
            verdict = if (sum - 2.0).abs() <= 1e-9 {
                "compatible (boundary)".to_string()
            } else {
                "compatible".to_string()
            };
            let grid = busch_joint(&e, &b).map_err(CmdError::from)?;
            joint = Some(GridJson::from_joint(&grid).map_err(CmdError::from)?);
        } else {
            verdict = "incompatible".to_string();
        }
    } else if !necessary {
        verdict = "incompatible".to_string();
        note = Some("pair criterion is necessary for biased pairs too".to_string());
    } else {
        // Biased pair passing the criterion: decide numerically.
        let pe = DiscretePovm::binary(&pauli_compose(&e));
        let pb = DiscretePovm::binary(&pauli_compose(&b));
        let opts = SolveOptions {
            feas_tol: config.feas_tol,
            max_iters: config.max_iters,
        };
        match feasibility_solve(&pe, &pb, &opts).map_err(CmdError::from)? {
            SolveOutcome::Feasible(fam) => {
                verdict = "compatible (feasibility solve)".to_string();
                let d = NaimarkDilation::build(&pe).map_err(CmdError::from)?;
                let grid = naimark::joint::assemble_joint(&d, &fam).map_err(CmdError::from)?;
                joint = Some(GridJson::from_joint(&grid).map_err(CmdError::from)?);
            }
            SolveOutcome::Infeasible(cert) => {
                verdict = "incompatible".to_string();
                if equivalent {
                    note = Some(format!(
                        "the algebraic form holds but the pair is incompatible: {cert}"
                    ));
                } else {
                    note = Some(cert.to_string());
                }
            }
            SolveOutcome::Undecided { residual } => {
                verdict = format!("undecided (residual {residual:e})");
            }
        }
    }

    let incompatible = verdict.starts_with("incompatible") || verdict.starts_with("undecided");
    let report = BuschReport {
        pair_sum: sum,
        pair_holds: necessary,
        equivalent_value: equiv_value,
        equivalent_holds: equivalent,
        verdict: verdict.clone(),
        note,
        joint,
    };
    emit(config, &to_json(&report))?;
    if incompatible {
        Err(CmdError::Infeasible(verdict))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct JointReport {
    verdict: String,
    certificate: Option<String>,
    residual: Option<f64>,
    marginal_residual: Option<f64>,
    grid: Option<GridJson>,
}

fn cmd_joint(config: &Config, e_file: &PathBuf, b_file: &PathBuf) -> Result<(), CmdError> {
    let e = read_povm(e_file)?;
    let b = read_povm(b_file)?;
    let opts = SolveOptions {
        feas_tol: config.feas_tol,
        max_iters: config.max_iters,
    };
    let outcome = feasibility_solve(&e, &b, &opts).map_err(CmdError::from)?;
    let report = match outcome {
        SolveOutcome::Feasible(fam) => {
            let d = NaimarkDilation::build(&e).map_err(CmdError::from)?;
            let grid = naimark::joint::assemble_joint(&d, &fam).map_err(CmdError::from)?;
            let res = grid.marginal_residual(&e, &b);
            JointReport {
                verdict: "feasible".to_string(),
                certificate: None,
                residual: None,
                marginal_residual: Some(res),
                grid: Some(GridJson::from_joint(&grid).map_err(CmdError::from)?),
            }
        }
        SolveOutcome::Infeasible(cert) => JointReport {
            verdict: "infeasible".to_string(),
            certificate: Some(cert.to_string()),
            residual: None,
            marginal_residual: None,
            grid: None,
        },
        SolveOutcome::Undecided { residual } => JointReport {
            verdict: "undecided".to_string(),
            certificate: None,
            residual: Some(residual),
            marginal_residual: None,
            grid: None,
        },
    };
    let feasible = report.verdict == "feasible";
    let verdict = report.verdict.clone();
    emit(config, &to_json(&report))?;
    if feasible {
        Ok(())
    } else {
        Err(CmdError::Infeasible(verdict))
    }
}

#[derive(Serialize)]
struct TrinaryReport {
    lambda: f64,
    eta: f64,
    threshold: f64,
    ansatz_feasible: bool,
    d: Option<f64>,
    e: Option<f64>,
    note: Option<String>,
    grid: Option<GridJson>,
}

fn cmd_trinary(config: &Config, lambda: f64, eta: f64) -> Result<(), CmdError> {
    let params = TrinaryParams::new(lambda, eta).map_err(CmdError::from)?;
    let threshold = trinary_threshold(lambda);
    let solved = naimark::trinary::trinary_ansatz_solve(&params);
    let report = match solved {
        Some((d, e)) => {
            let grid = build_trinary_joint(&params).map_err(CmdError::from)?;
            let res = grid.marginal_residual(
                &build_trinary(lambda).map_err(CmdError::from)?,
                &target_minus(eta).map_err(CmdError::from)?,
            );
            eprintln!("marginal residual {res:e}");
            TrinaryReport {
                lambda,
                eta,
                threshold,
                ansatz_feasible: true,
                d: Some(d),
                e: Some(e),
                note: None,
                grid: Some(GridJson::from_joint(&grid).map_err(CmdError::from)?),
            }
        }
        None => TrinaryReport {
            lambda,
            eta,
            threshold,
            ansatz_feasible: false,
            d: None,
            e: None,
            note: Some(
                "the diagonal ansatz stops here; the full characterization of this \
                 family is known to reach about 0.866 at equal noise"
                    .to_string(),
            ),
            grid: None,
        },
    };
    let feasible = report.ansatz_feasible;
    emit(config, &to_json(&report))?;
    if feasible {
        Ok(())
    } else {
        Err(CmdError::Infeasible("ansatz infeasible".to_string()))
    }
}

fn float_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, CmdError> {
    if step <= 0.0 || end < start {
        return Err(CmdError::Validation(
            "need step > 0 and eps_end ≥ eps_start".to_string(),
        ));
    }
    let n = ((end - start) / step).round() as usize;
    Ok((0..=n)
        .map(|k| (start + k as f64 * step).min(end))
        .collect())
}

fn cmd_continuous(config: &Config, sub: &ContinuousCmd) -> Result<(), CmdError> {
    match sub {
        ContinuousCmd::Thresholds {
            eps_start,
            eps_end,
            step,
        } => {
            let grid = float_grid(*eps_start, *eps_end, *step)?;
            let rows = batch::threshold_scan(&grid);
            if config.format == "json" {
                #[derive(Serialize)]
                struct Row {
                    eps: f64,
                    triple: bool,
                    pair_qq: bool,
                    pair_nq: bool,
                }
                let rows: Vec<Row> = rows
                    .iter()
                    .map(|r| Row {
                        eps: r.eps,
                        triple: r.triple,
                        pair_qq: r.pair_qq,
                        pair_nq: r.pair_nq,
                    })
                    .collect();
                return emit(config, &to_json(&rows));
            }
            let mut out = String::from("eps,triple,pair_qq,pair_nq\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.eps, r.triple as u8, r.pair_qq as u8, r.pair_nq as u8
                );
            }
            emit(config, &out)
        }
        ContinuousCmd::Gprime { eps, f, theta } => {
            let window = continuous::feasible_f_interval(*eps).ok_or_else(|| {
                CmdError::Infeasible(format!(
                    "no admissible f at eps = {eps}; the window is empty below 4/7"
                ))
            })?;
            let f_val = f.unwrap_or((window.0 + window.1) / 2.0);
            let ovm = improved_joint_gprime(*eps, f_val, *theta).map_err(CmdError::from)?;
            let pos = ovm.positivity(1e-9).map_err(CmdError::from)?;
            let report = GprimeReport {
                eps: *eps,
                f: f_val,
                g: eps / 2.0 - 2.0 * f_val,
                h: 1.0 - eps - f_val,
                i: 3.0 * eps / 2.0 - 1.0 + 2.0 * f_val,
                window_lo: window.0,
                window_hi: window.1,
                positive: pos.is_positive,
                labels: gprime_labels(&ovm),
            };
            emit(config, &to_json(&report))
        }
        ContinuousCmd::PhaseCurve {
            eps_start,
            eps_end,
            step,
        } => {
            let mut grid = float_grid(*eps_start, *eps_end, *step)?;
            // Pin the boundary point so the f = 2 row is always present.
            if *eps_start <= PHASE_NUMBER_EPS_MIN && PHASE_NUMBER_EPS_MIN <= *eps_end {
                grid.push(PHASE_NUMBER_EPS_MIN);
                grid.sort_by(f64::total_cmp);
                grid.dedup();
            }
            let curve = continuous::phase_curve(&grid);
            if config.format == "json" {
                #[derive(Serialize)]
                struct Row {
                    eps: f64,
                    f_eps: f64,
                }
                let rows: Vec<Row> = curve
                    .iter()
                    .map(|&(eps, f_eps)| Row { eps, f_eps })
                    .collect();
                emit(config, &to_json(&rows))?;
            } else {
                let mut out = String::from("eps,f_eps\n");
                for (eps, f_eps) in curve {
                    let _ = writeln!(out, "{eps},{f_eps}");
                }
                emit(config, &out)?;
            }
            // The construction at the pinned boundary, as a sanity line.
            let c = Complex64::new(1.0, 0.0);
            if phase_number_joint(PHASE_NUMBER_EPS_MIN, c, c).is_ok() {
                eprintln!(
                    "eps_min = {PHASE_NUMBER_EPS_MIN} reaches f = {}",
                    phase_number_f(PHASE_NUMBER_EPS_MIN)
                );
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct GprimeReport {
    eps: f64,
    f: f64,
    g: f64,
    h: f64,
    i: f64,
    window_lo: f64,
    window_hi: f64,
    positive: bool,
    labels: Vec<GprimeLabel>,
}

#[derive(Serialize)]
struct GprimeLabel {
    /// Coefficients per entry in the monomial order 1, x, y, x², xy, y²,
    /// as [re, im] pairs; row-major entries.
    entries: Vec<Vec<[f64; 2]>>,
}

fn gprime_labels(ovm: &continuous::GaussianPolyOvm) -> Vec<GprimeLabel> {
    ovm.labels
        .iter()
        .map(|m| GprimeLabel {
            entries: (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| m[i][j].c.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        })
        .collect()
}

// Re-exported so integration tests can assert on the effect schema without
// duplicating the struct.
#[allow(dead_code)]
fn _schema_marker(_: EffectJson, _: JointPovm) {}
