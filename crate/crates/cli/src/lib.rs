//! Command-line front end: parses arguments, runs one computation and emits a
//! JSON (or text) report.
//!
//! Exit codes: 0 pass, 1 failed check or refused computation, 2 usage or
//! input error.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use gelfand_core::analysis::{self, UscConfig};
use gelfand_core::io::{self as gio, Report, Status};
use gelfand_core::vvfa::{self, CertificateOutcome, FiniteSpace};
use gelfand_core::{gallery, gelfand, lipschitz, Algebra, CharacterSet, Error, Result, Tolerances};
use num_complex::Complex64;
use serde_json::{json, Value};

/// Environment variable that replaces the default of `--tol`.
pub const TOL_ENV: &str = "GELFAND_TOL";
const DEFAULT_TOL: f64 = 1e-9;
/// Shift applied to the first character by `--corrupt-characters`.
const CORRUPTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "gelfand",
    version,
    about = "Characters, spectra and vector-valued spectra of finite-dimensional commutative algebras"
)]
pub struct Cli {
    /// Residual tolerance for characters, lifts and membership tests
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Radius at which spectral points are identified
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub dedup: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, hide = true)]
    pub corrupt_characters: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Character space of an algebra
    Characters {
        #[arg(long)]
        algebra: String,
    },
    /// Spectrum of an element, by characters and by eigenvalues
    Spectrum {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        element: String,
    },
    /// Joint spectrum of a tuple of elements
    JointSpectrum {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        tuple: String,
    },
    /// Vector-valued spectrum of a function, optionally testing one lambda
    Vspec {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        function: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Algebra-valued spectrum of a function in C(X, A)
    Avspec {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        function: String,
    },
    /// Certificate that lambda lies outside the vector-valued spectrum
    Certify {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        function: String,
        #[arg(long)]
        lambda: String,
    },
    /// A-characters of C(X, A) for a point set of the given size
    Acharacters {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        space: usize,
    },
    /// Uniform norm, Lipschitz constant and Lipschitz norm
    Lip {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        function: String,
        #[arg(long)]
        metric: String,
    },
    /// Perturbation experiment for upper semicontinuity of the spectrum
    Usc {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        decay: f64,
        /// Restrict perturbations to pointwise combinations of these elements
        #[arg(long)]
        span: Option<String>,
    },
    /// List the built-in algebras, or print one
    Gallery { name: Option<String> },
    /// Axiom residuals and semisimplicity of an algebra
    Validate {
        #[arg(long)]
        algebra: String,
    },
}

/// Reads an argument that is either inline JSON, a `gallery:` id, or a path.
fn read_input(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with("gallery:") {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::InvalidArgument(format!("cannot read {arg}: {e}")))
}

struct Context {
    tol: Tolerances,
    seed: u64,
    corrupt: bool,
}

impl Context {
    fn algebra(&self, arg: &str) -> Result<Algebra> {
        gio::parse_algebra(&read_input(arg)?)
    }

    fn characters(&self, alg: &Algebra) -> Result<CharacterSet> {
        let chars = gelfand::characters(alg, &self.tol, self.seed)?;
        Ok(if self.corrupt { chars.corrupted(Complex64::new(CORRUPTION, 0.0)) } else { chars })
    }

    /// Characters for `alg`, each re-checked against the multiplicativity bound.
    fn checked_characters(&self, alg: &Algebra) -> Result<(CharacterSet, f64)> {
        let chars = self.characters(alg)?;
        let worst = chars.characters().iter().map(|c| c.residual(alg)).fold(0.0, f64::max);
        if !(worst <= self.tol.residual) {
            return Err(Error::OracleDisagreement(format!(
                "character residual {worst:e} exceeds {:e}",
                self.tol.residual
            )));
        }
        Ok((chars, worst))
    }

    fn report(&self, command: &str) -> Report {
        Report::new(command, self.seed)
            .with("tolerances", json!({"residual": self.tol.residual, "dedup": self.tol.dedup}))
    }
}

fn sorted_pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    let mut out = gio::pairs(zs);
    out.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    out
}

fn characters_json(chars: &CharacterSet) -> Vec<Vec<[f64; 2]>> {
    chars.characters().iter().map(|c| gio::pairs(c.values())).collect()
}

fn execute(cmd: &Command, ctx: &Context) -> Result<Report> {
    match cmd {
        Command::Characters { algebra } => {
            let alg = ctx.algebra(algebra)?;
            let (chars, worst) = ctx.checked_characters(&alg)?;
            let ss = alg.is_semisimple(ctx.tol.rank);
            Ok(ctx
                .report("characters")
                .with("set", characters_json(&chars))
                .with("count", chars.len())
                .with("semisimple", ss.semisimple)
                .with("radical_dim", chars.stats().radical_dim)
                .with("attempts", chars.stats().attempts)
                .with("trace_form_singular_values", &ss.singular_values)
                .residual("character", worst))
        }
        Command::Spectrum { algebra, element } => {
            let alg = ctx.algebra(algebra)?;
            let a = gio::parse_element(&alg, &read_input(element)?)?;
            let chars = ctx.characters(&alg)?;
            let sp = gelfand::spectrum(&alg, &a, &chars, &ctx.tol)?;
            Ok(ctx
                .report("spectrum")
                .with("set", sorted_pairs(sp.set.points()))
                .with("eigenvalues", sorted_pairs(&sp.eigenvalues))
                .with("semisimple", sp.semisimple)
                .residual("oracle_gap", sp.oracle_gap))
        }
        Command::JointSpectrum { algebra, tuple } => {
            let alg = ctx.algebra(algebra)?;
            let tuple = gio::parse_tuple(&alg, &read_input(tuple)?)?;
            let chars = ctx.characters(&alg)?;
            let r = gelfand::joint_spectrum(&alg, &tuple, &chars, &ctx.tol, ctx.seed)?;
            let set: Vec<Vec<[f64; 2]>> = r.set.points().iter().map(|p| gio::pairs(p)).collect();
            Ok(ctx
                .report("joint-spectrum")
                .with("set", set)
                .with("semisimple", chars.semisimple())
                .with("members_checked", r.members_checked)
                .with("probes_checked", r.probes_checked)
                .with("probes_in_spectrum", r.probes_in_spectrum)
                .residual("min_member", r.min_member_residual)
                .residual("max_nonmember", r.max_nonmember_residual))
        }
        Command::Vspec { algebra, function, lambda } => {
            let alg = ctx.algebra(algebra)?;
            let f = gio::parse_function(&alg, &read_input(function)?)?;
            let chars = ctx.characters(&alg)?;
            let sp = vvfa::vv_spectrum_chars(&f, &chars, ctx.tol.dedup);
            let mut min_member = f64::INFINITY;
            for l in sp.points() {
                let m = vvfa::vv_spectrum_membership(&alg, &f, l, &chars, &ctx.tol)?;
                if !m.member {
                    return Err(Error::OracleDisagreement("character image rejected by the ideal test".into()));
                }
                min_member = min_member.min(m.residual);
            }
            let compact = analysis::compactness_report(&alg, &f, &chars, &ctx.tol, ctx.seed)?;
            let set: Vec<Value> = sp.points().iter().map(gio::scalar_function_to_json).collect();
            let mut report = ctx
                .report("vspec")
                .with("set", set)
                .with("size", sp.len())
                .with("characters", chars.len())
                .with("semisimple", chars.semisimple())
                .with("uniform_norm", compact.bound)
                .with("largest_member_norm", compact.largest)
                .residual("min_member", min_member);
            if let Some(lambda) = lambda {
                let l = gio::parse_lambda(&read_input(lambda)?)?;
                let m = vvfa::vv_spectrum_membership(&alg, &f, &l, &chars, &ctx.tol)?;
                report = report
                    .with("lambda_member", m.member)
                    .with("lambda_character_distance", m.character_distance)
                    .residual("lambda_unit_distance", m.residual);
            }
            Ok(report)
        }
        Command::Avspec { algebra, function } => {
            let alg = ctx.algebra(algebra)?;
            let f = gio::parse_function(&alg, &read_input(function)?)?;
            let chars = ctx.characters(&alg)?;
            let frak = gelfand::characters(&vvfa::scalar_function_algebra(f.space()), &ctx.tol, ctx.seed)?;
            let sp = vvfa::a_valued_spectrum(&alg, &f, &chars, &frak, &ctx.tol)?;
            let dist = |a: &gelfand_core::Element, b: &gelfand_core::Element| alg.norm(&(a - b));
            let range_gap = gelfand_core::linalg::hausdorff(&sp.set, &sp.range, dist);
            let elements = |xs: &[gelfand_core::Element]| xs.iter().map(gio::element_to_json).collect::<Vec<_>>();
            Ok(ctx
                .report("avspec")
                .with("set", elements(&sp.set))
                .with("a_character_images", elements(&sp.a_character_images))
                .with("range", elements(&sp.range))
                .with("candidates", sp.candidates)
                .with("excluded", sp.excluded)
                .residual("range_excess", sp.range_excess)
                .residual("image_excess", sp.image_excess)
                .residual("image_hausdorff", sp.image_hausdorff)
                .residual("range_hausdorff", range_gap))
        }
        Command::Certify { algebra, function, lambda } => {
            let alg = ctx.algebra(algebra)?;
            let f = gio::parse_function(&alg, &read_input(function)?)?;
            let l = gio::parse_lambda(&read_input(lambda)?)?;
            let chars = ctx.characters(&alg)?;
            match vvfa::certificate(&alg, &f, &l, &chars, &ctx.tol)? {
                CertificateOutcome::Certificate(cert) => Ok(ctx
                    .report("certify")
                    .with("outcome", "certificate")
                    .with("points", &cert.points)
                    .with("coefficients", cert.coefficients.iter().map(gio::element_to_json).collect::<Vec<_>>())
                    .with("protected_radius", analysis::protected_radius(&alg, &cert))
                    .residual("certificate", cert.residual)),
                CertificateOutcome::InSpectrum { character } => {
                    let phi = &chars.characters()[character];
                    Ok(ctx
                        .report("certify")
                        .with("outcome", "in_spectrum")
                        .with("character", gio::pairs(phi.values()))
                        .residual(
                            "character_distance",
                            vvfa::vv_spectrum_membership(&alg, &f, &l, &chars, &ctx.tol)?.character_distance,
                        ))
                }
            }
        }
        Command::Acharacters { algebra, space } => {
            let alg = ctx.algebra(algebra)?;
            if *space == 0 {
                return Err(Error::InvalidArgument("--space must be at least 1".into()));
            }
            let space = FiniteSpace::indexed(*space);
            vvfa::make_cxa(&alg, &space, vvfa::DEFAULT_SIZE_CAP)?;
            let chars = ctx.characters(&alg)?;
            let frak = gelfand::characters(&vvfa::scalar_function_algebra(&space), &ctx.tol, ctx.seed)?;
            let lifted = vvfa::enumerate_a_characters(&alg, &space, &chars, &frak, &ctx.tol)?;
            let mut worst = [0.0f64; 4];
            let items: Vec<Value> = lifted
                .iter()
                .map(|psi| {
                    let r = psi.residuals();
                    for (w, v) in worst.iter_mut().zip([r.homomorphism, r.unit, r.compatibility, r.evaluation]) {
                        *w = w.max(v);
                    }
                    let kind = match psi.kind() {
                        vvfa::ACharacterKind::Evaluation(p) => json!({"evaluation": p}),
                        vvfa::ACharacterKind::General => json!("general"),
                    };
                    json!({"kind": kind, "residuals": r})
                })
                .collect();
            Ok(ctx
                .report("acharacters")
                .with("space", space.points())
                .with("a_characters", items)
                .with("count", lifted.len())
                .residual("homomorphism", worst[0])
                .residual("unit", worst[1])
                .residual("compatibility", worst[2])
                .residual("evaluation", worst[3]))
        }
        Command::Lip { algebra, function, metric } => {
            let alg = ctx.algebra(algebra)?;
            let f = gio::parse_function(&alg, &read_input(function)?)?;
            let m = gio::parse_metric(&read_input(metric)?)?;
            let uniform = vvfa::uniform_norm(&alg, &f);
            let l = lipschitz::lip_constant(&alg, &f, &m)?;
            Ok(ctx.report("lip").with("uniform", uniform).with("L", l).with("lip_norm", uniform + l))
        }
        Command::Usc { algebra, function, steps, decay, span } => {
            let alg = ctx.algebra(algebra)?;
            let f = gio::parse_function(&alg, &read_input(function)?)?;
            let mut config = UscConfig::new(*steps, *decay, ctx.seed);
            if let Some(span) = span {
                config = config.with_span(gio::parse_tuple(&alg, &read_input(span)?)?);
            }
            let r = analysis::usc_experiment(&alg, &f, &config, &ctx.tol)?;
            let status = if r.pass { Status::Pass } else { Status::Fail };
            Ok(ctx
                .report("usc")
                .with("delta", &r.delta)
                .with("dist", &r.dist)
                .with("fitted_C", r.fitted_c)
                .with("C_bound", r.c_bound)
                .with("chains", r.chains)
                .with("pass", r.pass)
                .with("failure", &r.failure)
                .residual("limit_gap", r.limit_gap)
                .status(status))
        }
        Command::Gallery { name } => match name {
            None => {
                let items: Vec<Value> = gallery::GALLERY_NAMES
                    .iter()
                    .map(|n| {
                        let a = gallery::gallery(n).expect("built-in");
                        json!({"name": n, "dim": a.dim(), "basis": a.basis_names(),
                               "semisimple": a.is_semisimple(ctx.tol.rank).semisimple})
                    })
                    .collect();
                Ok(ctx.report("gallery").with("algebras", items))
            }
            Some(n) => {
                let a = gallery::gallery(n)?;
                Ok(ctx.report("gallery").with("name", n).with("algebra", gio::algebra_to_json(&a)))
            }
        },
        Command::Validate { algebra } => {
            let alg = ctx.algebra(algebra)?;
            let d = alg.diagnostics();
            let ss = alg.is_semisimple(ctx.tol.rank);
            Ok(ctx
                .report("validate")
                .with("dim", alg.dim())
                .with("semisimple", ss.semisimple)
                .with("trace_form_singular_values", &ss.singular_values)
                .residual("commutativity", d.commutativity)
                .residual("associativity", d.associativity)
                .residual("unit", d.unit))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Characters { .. } => "characters",
        Command::Spectrum { .. } => "spectrum",
        Command::JointSpectrum { .. } => "joint-spectrum",
        Command::Vspec { .. } => "vspec",
        Command::Avspec { .. } => "avspec",
        Command::Certify { .. } => "certify",
        Command::Acharacters { .. } => "acharacters",
        Command::Lip { .. } => "lip",
        Command::Usc { .. } => "usc",
        Command::Gallery { .. } => "gallery",
        Command::Validate { .. } => "validate",
    }
}

fn error_report(command: &str, seed: u64, e: &Error) -> Report {
    let status = if e.is_failure() { Status::Fail } else { Status::Error };
    let mut report =
        Report::new(command, seed).status(status).with("error", json!({"kind": e.kind(), "message": e.to_string()}));
    match e {
        Error::NumericalFailure { residual } => report = report.residual("ambiguous", *residual),
        Error::CharacterSolveFailure { worst_residual, .. } => report = report.residual("character", *worst_residual),
        Error::AxiomViolation { max_residual, .. } => report = report.residual("axiom", *max_residual),
        Error::NotInvertible { smallest_singular_value } => {
            report = report.residual("smallest_singular_value", *smallest_singular_value)
        }
        _ => {}
    }
    report
}

fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        2
    } else {
        1
    }
}

/// The tolerance default: `GELFAND_TOL` when set and valid, else `1e-9`.
pub fn default_tol(env: Option<&str>) -> f64 {
    env.and_then(|v| v.trim().parse::<f64>().ok()).filter(|t| *t > 0.0).unwrap_or(DEFAULT_TOL)
}

/// Runs one command with an explicit tolerance default.
pub fn run_with_default<I, S>(args: I, tol_default: f64, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let tol = cli.tol.unwrap_or(tol_default);
    if !(tol > 0.0) || !(cli.dedup > 0.0) {
        let _ = writeln!(err, "error: --tol and --dedup must be positive");
        return 2;
    }
    let ctx = Context {
        tol: Tolerances::default().with_residual(tol).with_dedup(cli.dedup),
        seed: cli.seed,
        corrupt: cli.corrupt_characters,
    };
    let (report, code) = match execute(&cli.command, &ctx) {
        Ok(r) => {
            let code = if r.status == Status::Pass { 0 } else { 1 };
            (r, code)
        }
        Err(e) => (error_report(command_name(&cli.command), cli.seed, &e), exit_code(&e)),
    };
    let text = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    let _ = out.write_all(text.as_bytes());
    code
}

/// Runs one command, taking the tolerance default from the environment.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(TOL_ENV).ok();
    run_with_default(args, default_tol(env.as_deref()), out, err)
}
