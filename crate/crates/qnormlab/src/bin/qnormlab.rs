//! Command-line front end: build certified bases, evaluate the norm family,
//! run the weaker-topology demonstration, and audit the axioms.
//!
//! Exit codes: 0 clean, 1 a mathematical check failed, 2 usage or data error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qnormlab::audit::{
    check_fseminorm_axioms, check_neighborhood_base, estimate_modulus_of_concavity, AuditReport,
    Neighborhood, NeighborhoodFamily,
};
use qnormlab::basis::{
    build_lsh_basis, verify_lsh_certificates, BasisParams, LshBasis, RadiusSequence,
};
use qnormlab::experiment::{run_main_theorem_demo, ExperimentConfig, VERDICT_EVIDENCE};
use qnormlab::holder::{reverse_holder_sides, HolderInstance};
use qnormlab::space::{
    lp_fnorm, lp_quasinorm, BoundedBall, LpSpaceModel, SparseVector, SubspaceChain,
};
use qnormlab::topology::{
    norm_e, np_norm_dp, np_norm_enumeration, p_bracket_norm, witness_sequence, ExponentFunction,
    NeighborhoodSpec,
};
use qnormlab::{tolerance, Error, Result};

#[derive(Parser)]
#[command(
    name = "qnormlab",
    version,
    about = "Certified bases and induced norms in p-normed sequence spaces"
)]
struct Cli {
    /// Seed for the sampled audits.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Comparison tolerance; the QNORMLAB_TOL environment variable wins.
    #[arg(long, global = true, default_value_t = tolerance::EPS_NUM)]
    tol: f64,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certified basis prefix over one ball and emit it as JSON.
    BuildBasis {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Scaling exponent a > 0; model default when omitted.
        #[arg(long)]
        a: Option<f64>,
        /// Dual scaling exponent b with -a < b < -p*a; model default when omitted.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        /// Safety factor >= 1 on the scaling lower bound.
        #[arg(long)]
        margin: Option<f64>,
        /// Base of the geometric decay budget r_k = base^(-k).
        #[arg(long, default_value_t = 4.0)]
        radius_base: f64,
        #[arg(long, default_value_t = 8)]
        length: usize,
    },
    /// Evaluate the F-norm, quasinorm, induced norm and p-bracket of a vector.
    Norms {
        /// Basis file; repeat to compare a family.
        #[arg(long, required = true, num_args = 1..)]
        basis: Vec<PathBuf>,
        /// Vector JSON file {"entries": [[index, value], ...]}.
        #[arg(long)]
        vector: PathBuf,
        /// Truncate the induced norm to its first N terms.
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Evaluate the (n, a)-norm of a vector by both routes and compare.
    NpNorm {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        n: u32,
        /// Constant exponent in (0,1) used at every position.
        #[arg(long, conflicts_with = "exponents")]
        exponent: Option<f64>,
        /// Explicit exponent list, comma separated, length n.
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<f64>>,
    },
    /// Build the ball family, scan the boundary witnesses, print the report.
    DemoWeakerTopology {
        /// Experiment config JSON; built-in defaults when omitted.
        #[arg(long, conflicts_with_all = ["basis", "specs"])]
        config: Option<PathBuf>,
        /// Scan an existing basis instead of building the family.
        #[arg(long, requires = "specs")]
        basis: Option<PathBuf>,
        /// Neighborhood spec list JSON, used with --basis.
        #[arg(long, requires = "basis")]
        specs: Option<PathBuf>,
        /// Witness scan length; config value when omitted.
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Check reverse Hoelder instances from a JSON list.
    HolderCheck {
        #[arg(long)]
        instances: PathBuf,
    },
    /// Audit the F-seminorm axioms, the concavity modulus, a dyadic ball
    /// base, and optionally the certificates of a basis file.
    Verify {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Basis JSON whose certificates should be re-verified.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

enum Outcome {
    Pass,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    let tol = tolerance::resolve(cli.tol);
    match cli.command {
        Command::BuildBasis {
            p,
            radius,
            a,
            b,
            margin,
            radius_base,
            length,
        } => {
            let model = LpSpaceModel::new(p)?;
            let ball = BoundedBall::new(radius)?;
            let mut params = BasisParams::defaults(&model);
            params.r = RadiusSequence::geometric(radius_base)?;
            if let Some(a) = a {
                params.a = a;
            }
            if let Some(b) = b {
                params.b = b;
            }
            if let Some(margin) = margin {
                params.margin = margin;
            }
            let basis = build_lsh_basis(
                &model,
                &ball,
                &SubspaceChain::Standard,
                &params,
                length,
                tol,
            )?;
            let audit = verify_lsh_certificates(&basis, tol);
            emit(&cli.out, &basis.to_json())?;
            if !audit.passed() {
                eprintln!(
                    "certificate verification failed: {:?}",
                    audit.failed_axioms()
                );
                return Ok(Outcome::CheckFailed);
            }
            Ok(Outcome::Pass)
        }

        Command::Norms {
            basis,
            vector,
            truncate,
        } => {
            let x: SparseVector = read_json(&vector)?;
            #[derive(Serialize)]
            struct Row {
                basis: String,
                p: f64,
                radius: f64,
                fnorm_p: f64,
                quasinorm_p: f64,
                norm_e: f64,
                p_bracket: f64,
            }
            let mut rows = Vec::new();
            for path in &basis {
                let b = LshBasis::from_json(&fs::read_to_string(path)?)?;
                rows.push(Row {
                    basis: path.display().to_string(),
                    p: b.model.p,
                    radius: b.ball.radius,
                    fnorm_p: lp_fnorm(&x, &b.model),
                    quasinorm_p: lp_quasinorm(&x, &b.model),
                    norm_e: norm_e(&b, &x, truncate, tol)?,
                    p_bracket: p_bracket_norm(&b, &x, tol)?,
                });
            }
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rows)?,
                Format::Csv => {
                    let mut s =
                        String::from("basis,p,radius,fnorm_p,quasinorm_p,norm_E,p_bracket\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            r.basis, r.p, r.radius, r.fnorm_p, r.quasinorm_p, r.norm_e, r.p_bracket
                        ));
                    }
                    s
                }
            };
            emit(&cli.out, &text)?;
            Ok(Outcome::Pass)
        }

        Command::NpNorm {
            basis,
            vector,
            n,
            exponent,
            exponents,
        } => {
            let b = LshBasis::from_json(&fs::read_to_string(&basis)?)?;
            let x: SparseVector = read_json(&vector)?;
            let exps = match (exponent, exponents) {
                (Some(v), None) => ExponentFunction::constant(v, n as usize)?,
                (None, Some(list)) => ExponentFunction::new(list)?,
                _ => {
                    return Err(Error::InvalidSpec(
                        "provide exactly one of --exponent or --exponents".into(),
                    ))
                }
            };
            let by_enum = np_norm_enumeration(&b, &x, n, &exps, tol)?;
            let by_dp = np_norm_dp(&b, &x, n, &exps, tol)?;
            let agree = by_enum == by_dp;
            #[derive(Serialize)]
            struct Doc<'a> {
                n: u32,
                exponents: &'a ExponentFunction,
                value: f64,
                dp_value: f64,
                routes_agree: bool,
            }
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&Doc {
                    n,
                    exponents: &exps,
                    value: by_enum,
                    dp_value: by_dp,
                    routes_agree: agree,
                })?,
                Format::Csv => {
                    format!("n,value,dp_value,routes_agree\n{n},{by_enum},{by_dp},{agree}\n")
                }
            };
            emit(&cli.out, &text)?;
            if !agree {
                eprintln!("supremum routes disagree: {by_enum} vs {by_dp}");
                return Ok(Outcome::CheckFailed);
            }
            Ok(Outcome::Pass)
        }

        Command::DemoWeakerTopology {
            config,
            basis,
            specs,
            kmax,
        } => {
            if let Some(basis_path) = basis {
                let b = LshBasis::from_json(&fs::read_to_string(&basis_path)?)?;
                let specs: Vec<NeighborhoodSpec> =
                    read_json(&specs.expect("clap enforces --specs with --basis"))?;
                let k_max = kmax.unwrap_or(b.len() as u32);
                let ball = b.ball;
                let report = witness_sequence(&b, &ball, &specs, k_max, tol)?;
                let text = match cli.format {
                    Format::Json => report.to_json(),
                    Format::Csv => report.to_csv(),
                };
                emit(&cli.out, &text)?;
                if report.specs.iter().all(|s| s.k0.is_some()) {
                    return Ok(Outcome::Pass);
                }
                eprintln!("some specs never stabilized to Yes");
                return Ok(Outcome::CheckFailed);
            }

            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_json(&fs::read_to_string(&path)?)?,
                None => ExperimentConfig::default_config(),
            };
            if let Some(k) = kmax {
                cfg.k_max = k;
            }
            let report = run_main_theorem_demo(&cfg, tol)?;
            if let Some(path) = &report.config.out_json {
                fs::write(path, report.to_json())?;
            }
            if let Some(path) = &report.config.out_csv {
                fs::write(path, report.to_csv())?;
            }
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit(&cli.out, &text)?;
            if report.verdict == VERDICT_EVIDENCE {
                Ok(Outcome::Pass)
            } else {
                eprintln!("verdict: {} (status: {})", report.verdict, report.status);
                Ok(Outcome::CheckFailed)
            }
        }

        Command::HolderCheck { instances } => {
            let list: Vec<HolderInstance> = read_json(&instances)?;
            if list.is_empty() {
                return Err(Error::InvalidInstance("instance list is empty".into()));
            }
            #[derive(Serialize)]
            struct Row {
                index: usize,
                lhs: f64,
                rhs: f64,
                passed: bool,
            }
            let rows: Vec<Row> = list
                .iter()
                .enumerate()
                .map(|(index, inst)| {
                    let (lhs, rhs) = reverse_holder_sides(inst);
                    Row {
                        index,
                        lhs,
                        rhs,
                        passed: tol.le(lhs, rhs),
                    }
                })
                .collect();
            let all_pass = rows.iter().all(|r| r.passed);
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rows)?,
                Format::Csv => {
                    let mut s = String::from("index,lhs,rhs,passed\n");
                    for r in &rows {
                        s.push_str(&format!("{},{},{},{}\n", r.index, r.lhs, r.rhs, r.passed));
                    }
                    s
                }
            };
            emit(&cli.out, &text)?;
            if all_pass {
                Ok(Outcome::Pass)
            } else {
                for r in rows.iter().filter(|r| !r.passed) {
                    eprintln!("instance {} violated: lhs={} rhs={}", r.index, r.lhs, r.rhs);
                }
                Ok(Outcome::CheckFailed)
            }
        }

        Command::Verify { p, basis, samples } => {
            let model = LpSpaceModel::new(p)?;
            let fseminorm = check_fseminorm_axioms(|x| lp_fnorm(x, &model), samples, cli.seed, tol);
            let estimate =
                estimate_modulus_of_concavity(|x| lp_quasinorm(x, &model), samples, cli.seed);
            let closed_form = model.modulus_of_concavity();
            let modulus_ok = estimate <= closed_form * (1.0 + tolerance::EPS_NUM);
            let members = (1..=20)
                .map(|nn| Neighborhood::ball(model, (-(nn as f64)).exp2()))
                .collect::<Result<Vec<_>>>()?;
            let base =
                check_neighborhood_base(&NeighborhoodFamily::new(members), samples, cli.seed, tol)?;
            let cert = match &basis {
                Some(path) => {
                    let b = LshBasis::from_json(&fs::read_to_string(path)?)?;
                    Some(verify_lsh_certificates(&b, tol))
                }
                None => None,
            };

            #[derive(Serialize)]
            struct Summary {
                p: f64,
                fseminorm: AuditReport,
                modulus: ModulusLine,
                neighborhood_base: AuditReport,
                #[serde(skip_serializing_if = "Option::is_none")]
                basis_certificates: Option<AuditReport>,
                passed: bool,
            }
            #[derive(Serialize)]
            struct ModulusLine {
                estimate: f64,
                closed_form: f64,
                passed: bool,
            }
            let passed = fseminorm.passed()
                && modulus_ok
                && base.passed()
                && cert.as_ref().is_none_or(|c| c.passed());
            let summary = Summary {
                p,
                fseminorm,
                modulus: ModulusLine {
                    estimate,
                    closed_form,
                    passed: modulus_ok,
                },
                neighborhood_base: base,
                basis_certificates: cert,
                passed,
            };

            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&summary)?,
                Format::Csv => {
                    let mut s = String::from("check,passed,detail\n");
                    for e in summary.fseminorm.entries() {
                        s.push_str(&format!("{},{},samples={}\n", e.axiom, e.passed, e.samples));
                    }
                    s.push_str(&format!(
                        "modulus-of-concavity,{},estimate={} closed_form={}\n",
                        summary.modulus.passed,
                        summary.modulus.estimate,
                        summary.modulus.closed_form
                    ));
                    for e in summary.neighborhood_base.entries() {
                        s.push_str(&format!("{},{},samples={}\n", e.axiom, e.passed, e.samples));
                    }
                    if let Some(cert) = &summary.basis_certificates {
                        for e in cert.entries() {
                            s.push_str(&format!(
                                "{},{},samples={}\n",
                                e.axiom, e.passed, e.samples
                            ));
                        }
                    }
                    s.push_str(&format!("overall,{},\n", summary.passed));
                    s
                }
            };
            emit(&cli.out, &text)?;
            if summary.passed {
                Ok(Outcome::Pass)
            } else {
                eprintln!("verification failed");
                Ok(Outcome::CheckFailed)
            }
        }
    }
}
