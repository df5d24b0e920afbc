//! Parameterised instance families and their JSON-lines sweeps.

use std::io::Write;

use permbound_core::bounds::exp_family;
use permbound_core::sample::random_dd;
use permbound_core::{Arithmetic, Matrix, Rational, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::CliError;
use crate::matrix_file::MatrixFile;
use crate::report::{build, build_report, Converted, Report, ReportOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyName {
    Exp,
    Allones,
    RandomDd,
}

/// `c` for the exponential family: a literal, or `sqrt` for `c = sqrt(n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpParam {
    Literal(Rational),
    SqrtN,
}

#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub n: usize,
    pub count: usize,
    pub c: Option<ExpParam>,
    pub eps: Option<Rational>,
    pub delta: Option<Rational>,
    pub seed: u64,
}

/// One generated instance: `n` advances by one per step for `exp` and
/// `allones`, while `random-dd` keeps `n` and advances the seed.
#[derive(Debug, Clone)]
struct Instance {
    id: String,
    n: usize,
    seed: u64,
}

impl FamilySpec {
    fn validate(&self) -> Result<(), CliError> {
        let range = |msg: String| Err(CliError::input("ParameterOutOfRange", msg));
        if self.n == 0 {
            return range("n must be at least 1".into());
        }
        if self.count == 0 {
            return range("count must be at least 1".into());
        }
        match self.name {
            FamilyName::Exp => match &self.c {
                None => range("family exp needs --c".into()),
                Some(ExpParam::Literal(c)) if !c.is_positive() => range(format!("c must be positive, got {c}")),
                _ => Ok(()),
            },
            FamilyName::Allones => Ok(()),
            FamilyName::RandomDd => {
                let eps = self.eps.as_ref().ok_or_else(|| CliError::input("ParameterOutOfRange", "family random-dd needs --eps"))?;
                let delta = self.delta.as_ref().ok_or_else(|| CliError::input("ParameterOutOfRange", "family random-dd needs --delta"))?;
                if !eps.is_positive() {
                    return range(format!("eps must be positive, got {eps}"));
                }
                if delta.is_negative() {
                    return range(format!("delta must be non-negative, got {delta}"));
                }
                Ok(())
            }
        }
    }

    fn instances(&self) -> Vec<Instance> {
        (0..self.count)
            .map(|k| {
                let (n, seed) = match self.name {
                    FamilyName::RandomDd => (self.n, self.seed + k as u64),
                    _ => (self.n + k, self.seed),
                };
                let id = match (self.name, &self.c) {
                    (FamilyName::Exp, Some(ExpParam::Literal(c))) => format!("exp-n{n}-c{c}"),
                    (FamilyName::Exp, _) => format!("exp-n{n}-csqrt"),
                    (FamilyName::Allones, _) => format!("allones-n{n}"),
                    (FamilyName::RandomDd, _) => format!("random-dd-n{n}-seed{seed}"),
                };
                Instance { id, n, seed }
            })
            .collect()
    }

    fn run(&self, inst: &Instance, opts: &ReportOptions) -> Result<Report, CliError> {
        match (self.name, &self.c) {
            (FamilyName::Exp, Some(ExpParam::SqrtN)) => {
                // c = sqrt(n) is irrational in general, so this runs in floats
                if opts.arithmetic == Some(Arithmetic::ExactRational) {
                    return Err(CliError::input(
                        "ParameterOutOfRange",
                        "c = sqrt(n) requires --arithmetic float",
                    ));
                }
                let c = (inst.n as f64).sqrt();
                let a = exp_family(inst.n, &c)?;
                let opts = ReportOptions {
                    arithmetic: Some(Arithmetic::Float64),
                    ..opts.clone()
                };
                build_float(&inst.id, a, &opts)
            }
            (FamilyName::Exp, Some(ExpParam::Literal(c))) => {
                let a = exp_family(inst.n, c)?;
                build_report(&inst.id, &MatrixFile::nonneg(a), opts)
            }
            (FamilyName::Allones, _) => {
                let a = Matrix::filled(inst.n, inst.n, Rational::from_i64(1));
                build_report(&inst.id, &MatrixFile::nonneg(a), opts)
            }
            (FamilyName::RandomDd, _) => {
                let eps = self.eps.clone().expect("validated");
                let delta = self.delta.clone().expect("validated");
                let mut rng = ChaCha8Rng::seed_from_u64(inst.seed);
                let a = random_dd(&mut rng, inst.n, &eps, &delta);
                let opts = ReportOptions {
                    eps: Some(opts.eps.clone().unwrap_or(eps)),
                    ..opts.clone()
                };
                build_report(&inst.id, &MatrixFile::nonneg(a), &opts)
            }
            (FamilyName::Exp, None) => unreachable!("validated"),
        }
    }
}

fn build_float(id: &str, a: Matrix<f64>, opts: &ReportOptions) -> Result<Report, CliError> {
    build(id, &Converted::Plain(a), opts)
}

/// Generates every instance and writes one report line each, in order.
/// Work is spread over `threads` workers a chunk at a time so lines stream.
pub fn run_family(
    spec: &FamilySpec,
    opts: &ReportOptions,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    spec.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::input("ThreadPool", e.to_string()))?;
    let instances = spec.instances();
    let chunk = pool.current_num_threads().max(1);
    for batch in instances.chunks(chunk) {
        let reports: Vec<Result<Report, CliError>> =
            pool.install(|| batch.par_iter().map(|inst| spec.run(inst, opts)).collect());
        for report in reports {
            let line = serde_json::to_string(&report?).expect("serializable");
            writeln!(out, "{line}")?;
        }
        out.flush()?;
    }
    Ok(())
}
