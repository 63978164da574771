//! `gmarg`: compatibility checks, synthesis and decompositions over JSON files.
//!
//! Exit codes: 0 success, 1 incompatible or failed verification, 2 input
//! error, 3 numerical failure. Mode indices in output are 1-based.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gauss_marginals::{
    check_physical, dominates, random_state, solve_couplings, symplectic_spectrum, synthesize,
    verify, williamson, DominanceCertificate, Error, GeneratorKind, SpectralVector, StepParameter,
    SynthesisTrace, TwoModeStandardForm, VerifyReport, DEFAULT_TOL,
};
use serde::Serialize;

use io::{read_json, to_json, write_json, MatrixFile, VectorFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Incompatible(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Incompatible(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidArgument(_) | Error::InvalidCovariance(_) => CliError::Input(msg),
            Error::IncompatibleSpectra(_)
            | Error::InfeasibleRedistribution(_)
            | Error::UnphysicalGlobalSpectrum(_) => CliError::Incompatible(msg),
            Error::NotBalanced { .. }
            | Error::CorrelatedPair { .. }
            | Error::NumericalFailure(_)
            | Error::NonConvergence { .. } => CliError::Numerical(msg),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gmarg",
    version,
    about = "Local and global spectra of Gaussian states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether global parameters dominate local ones.
    Check {
        /// VectorFile with the symplectic eigenvalues.
        global: PathBuf,
        /// VectorFile with the local parameters.
        local: PathBuf,
    },
    /// Build a state with the given global and local parameters.
    Synthesize {
        global: PathBuf,
        local: PathBuf,
        /// Where to write the covariance and symplectic matrices.
        #[arg(long)]
        out: PathBuf,
        /// Optional step-by-step trace.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Global and local spectra of a covariance matrix with their certificate.
    Decompose { matrix: PathBuf },
    /// Williamson normal form of a covariance matrix.
    Williamson { matrix: PathBuf },
    /// Two-mode standard form with prescribed local and global parameters.
    Reconstruct2 {
        #[arg(long)]
        m1: f64,
        #[arg(long)]
        m2: f64,
        #[arg(long)]
        k1: f64,
        #[arg(long)]
        k2: f64,
    },
    /// A seeded random physical covariance matrix.
    Random {
        #[arg(long)]
        modes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        kappa_min: f64,
        #[arg(long, default_value_t = 3.0)]
        kappa_max: f64,
    },
}

#[derive(Serialize)]
struct CertificateOut {
    kappa_sorted: Vec<f64>,
    m_sorted: Vec<f64>,
    partial_sum_slacks: Vec<f64>,
    tail_slack: f64,
    compatible: bool,
    physical: bool,
}

impl CertificateOut {
    fn new(cert: DominanceCertificate, tol: f64) -> Self {
        let physical = cert.kappa_sorted.values()[0] >= 1.0 - tol;
        CertificateOut {
            kappa_sorted: cert.kappa_sorted.into_values(),
            m_sorted: cert.m_sorted.into_values(),
            partial_sum_slacks: cert.partial_sum_slacks,
            tail_slack: cert.tail_slack,
            compatible: cert.compatible,
            physical,
        }
    }

    fn ok(&self) -> bool {
        self.compatible && self.physical
    }
}

#[derive(Serialize)]
struct SynthesisFiles {
    covariance: MatrixFile,
    symplectic: MatrixFile,
}

#[derive(Serialize)]
struct StepOut {
    stage: u8,
    kind: GeneratorKind,
    pair: [usize; 2],
    param: StepParameter,
    epsilon: f64,
    diag_after: Vec<f64>,
    fallback: bool,
}

#[derive(Serialize)]
struct TraceOut {
    steps: Vec<StepOut>,
    stage_counts: [usize; 4],
    ell: usize,
    r: usize,
    delta_initial: f64,
}

impl From<&SynthesisTrace> for TraceOut {
    fn from(t: &SynthesisTrace) -> Self {
        TraceOut {
            steps: t
                .steps
                .iter()
                .map(|s| StepOut {
                    stage: s.stage,
                    kind: s.kind,
                    pair: [s.pair.0 + 1, s.pair.1 + 1],
                    param: s.parameter,
                    epsilon: s.epsilon,
                    diag_after: s.diag_after.clone(),
                    fallback: s.fallback,
                })
                .collect(),
            stage_counts: t.stage_counts,
            ell: t.ell,
            r: t.r,
            delta_initial: t.delta_initial,
        }
    }
}

#[derive(Serialize)]
struct SynthesisSummary {
    kappa: Vec<f64>,
    m: Vec<f64>,
    steps: usize,
    stage_counts: [usize; 4],
    verify: VerifyReport,
}

#[derive(Serialize)]
struct DecomposeOut {
    kappa: Vec<f64>,
    m: Vec<f64>,
    certificate: CertificateOut,
}

#[derive(Serialize)]
struct WilliamsonOut {
    kappa: Vec<f64>,
    symplectic: MatrixFile,
    residual: f64,
}

#[derive(Serialize)]
struct Reconstruct2Out {
    form: TwoModeStandardForm,
    covariance: MatrixFile,
}

fn read_vector(path: &Path) -> Result<SpectralVector, CliError> {
    read_json::<VectorFile>(path)?.spectral()
}

/// Runs one command; returns the text for standard output and the exit code.
fn run(cmd: Command) -> Result<(String, u8), CliError> {
    match cmd {
        Command::Check { global, local } => {
            let kappa = read_vector(&global)?;
            let m = read_vector(&local)?;
            let cert = CertificateOut::new(dominates(&kappa, &m)?, DEFAULT_TOL);
            let code = if cert.ok() { 0 } else { 1 };
            Ok((to_json(&cert), code))
        }
        Command::Synthesize {
            global,
            local,
            out,
            trace,
            tol,
        } => {
            let kappa = read_vector(&global)?;
            let m = read_vector(&local)?;
            let result = synthesize(&kappa, &m, tol)?;
            write_json(
                &out,
                &SynthesisFiles {
                    covariance: (&result.covariance).into(),
                    symplectic: (&result.symplectic).into(),
                },
            )?;
            if let Some(path) = trace {
                write_json(&path, &TraceOut::from(&result.trace))?;
            }
            let report = verify(&result.symplectic, &result.kappa, &result.m, 1e-8)?;
            let code = if report.passed { 0 } else { 1 };
            let summary = SynthesisSummary {
                kappa: result.kappa.values().to_vec(),
                m: result.m.values().to_vec(),
                steps: result.trace.steps.len(),
                stage_counts: result.trace.stage_counts,
                verify: report,
            };
            Ok((to_json(&summary), code))
        }
        Command::Decompose { matrix } => {
            let v = read_json::<MatrixFile>(&matrix)?.covariance()?;
            let kappa = symplectic_spectrum(&v)?;
            let m = SpectralVector::new(v.local_parameters())?.sorted();
            let certificate = CertificateOut::new(dominates(&kappa, &m)?, DEFAULT_TOL);
            let code = if certificate.compatible { 0 } else { 1 };
            let out = DecomposeOut {
                kappa: kappa.into_values(),
                m: m.into_values(),
                certificate,
            };
            Ok((to_json(&out), code))
        }
        Command::Williamson { matrix } => {
            let v = read_json::<MatrixFile>(&matrix)?.covariance()?;
            let w = williamson(&v)?;
            let out = WilliamsonOut {
                kappa: w.kappa.values().to_vec(),
                symplectic: (&w.symplectic).into(),
                residual: w.symplectic.residual(),
            };
            Ok((to_json(&out), 0))
        }
        Command::Reconstruct2 { m1, m2, k1, k2 } => {
            let (kx, kp) = solve_couplings(m1, m2, k1, k2)?;
            let form = TwoModeStandardForm { m1, m2, kx, kp };
            let out = Reconstruct2Out {
                covariance: (&form.to_covariance()).into(),
                form,
            };
            Ok((to_json(&out), 0))
        }
        Command::Random {
            modes,
            seed,
            kappa_min,
            kappa_max,
        } => {
            let st = random_state(modes, seed, (kappa_min, kappa_max))?;
            if !check_physical(&st.covariance, 1e-8) {
                return Err(CliError::Numerical(
                    "generated state failed the physicality check".into(),
                ));
            }
            Ok((to_json(&MatrixFile::from(&st.covariance)), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
