//! Command-line driver for the exact foliation toolkit.
//!
//! Every subcommand takes one TOML jobfile and prints a report, as text or
//! as JSON (`--json`). Exit codes:
//!
//! ```text
//! 0  the computation ran and every decisive check holds
//! 1  the computation ran and a decisive check fails
//! 2  bad input: unreadable jobfile, parse error, missing parameter
//! 3  structurally unsupported input (e.g. parity obstructions)
//! ```
//!
//! `--verify-report FILE` re-checks a saved `--json` report against the
//! fresh run: a mismatch forces exit 1.

mod jobfile;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cuspfol::{
    assemble_generator, cuspidal_decompose, free_basis_check, find_quasihomogeneous_weights,
    gs_condition, is_logarithmic, logarithmic_quotient, loray_condition_2d, resolve,
    saito_decompose, weighted_valuation, ChartReport, CheckStatus, Coeff, CuspError,
    FreeBasisOutcome, Poly, QPoly, SaitoError, Step3Report,
};

use jobfile::{build_g, build_spec, need, surface_poly, Ctx, Jobfile};
use report::Report;

/// A failed run: the message goes to stderr, the code to the shell.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    pub fn unsupported(message: impl ToString) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cuspfoliate",
    version,
    about = "Exact logarithmic-form computations along cuspidal surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Frobenius test omega ^ d(omega) = 0 for a 1-form (params.form).
    CheckIntegrable(Job),
    /// Does the surface divide omega ^ d(surface)? Prints the quotient.
    CheckLogarithmic(Job),
    /// Split a logarithmic form as g*omega + h*df = f*alpha.
    SaitoDecompose(Job),
    /// Test n candidate 1-forms for freeness via the wedge criterion.
    SaitoBasis(Job),
    /// Split a form logarithmic along z^k + phi over the canonical pair.
    CuspDecompose(Job),
    /// Build the surface, generator, and singular locus of a [spec] family.
    Assemble(Job),
    /// Run the full resolution chain for a [spec] family and residual [g].
    Resolve(Job),
    /// Weighted-valuation test for the residual polynomial [g].
    GsCondition(Job),
    /// Weighted valuation of a bivariate polynomial (params.poly, p, q).
    Valuation(Job),
    /// Find quasi-homogeneous weights for params.poly.
    Weights(Job),
    /// Strict valuation bound for a plane-branch perturbation (params.delta).
    #[command(name = "loray-2d")]
    Loray2d(Job),
}

#[derive(Args)]
struct Job {
    /// TOML jobfile describing variables and inputs
    jobfile: PathBuf,
    /// print the report as JSON instead of text
    #[arg(long)]
    json: bool,
    /// compare this run against a saved `--json` report
    #[arg(long, value_name = "FILE")]
    verify_report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, job): (&str, &Job) = match &cli.command {
        Cmd::CheckIntegrable(j) => ("check-integrable", j),
        Cmd::CheckLogarithmic(j) => ("check-logarithmic", j),
        Cmd::SaitoDecompose(j) => ("saito-decompose", j),
        Cmd::SaitoBasis(j) => ("saito-basis", j),
        Cmd::CuspDecompose(j) => ("cusp-decompose", j),
        Cmd::Assemble(j) => ("assemble", j),
        Cmd::Resolve(j) => ("resolve", j),
        Cmd::GsCondition(j) => ("gs-condition", j),
        Cmd::Valuation(j) => ("valuation", j),
        Cmd::Weights(j) => ("weights", j),
        Cmd::Loray2d(j) => ("loray-2d", j),
    };
    match execute(name, job) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn execute(name: &str, job: &Job) -> Result<u8, Failure> {
    let text = fs::read_to_string(&job.jobfile)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", job.jobfile.display())))?;
    let parsed: Jobfile = toml::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", job.jobfile.display())))?;
    let ctx = Ctx::new(&parsed)?;

    let (report, code) = match name {
        "check-integrable" => cmd_check_integrable(&ctx, &parsed)?,
        "check-logarithmic" => cmd_check_logarithmic(&ctx, &parsed)?,
        "saito-decompose" => cmd_saito_decompose(&ctx, &parsed)?,
        "saito-basis" => cmd_saito_basis(&ctx, &parsed)?,
        "cusp-decompose" => cmd_cusp_decompose(&ctx, &parsed)?,
        "assemble" => cmd_assemble(&ctx, &parsed)?,
        "resolve" => cmd_resolve(&ctx, &parsed)?,
        "gs-condition" => cmd_gs_condition(&parsed)?,
        "valuation" => cmd_valuation(&ctx, &parsed)?,
        "weights" => cmd_weights(&ctx, &parsed)?,
        "loray-2d" => cmd_loray_2d(&ctx, &parsed)?,
        _ => unreachable!("dispatch covers every subcommand"),
    };

    if job.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }

    if let Some(path) = &job.verify_report {
        let saved = fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        let saved: Report = serde_json::from_str(&saved)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        if saved == report {
            eprintln!("verify-report: match");
        } else {
            eprintln!("verify-report: MISMATCH against {}", path.display());
            return Ok(1);
        }
    }
    Ok(code)
}

fn nonzero(f: QPoly, what: &str) -> Result<QPoly, Failure> {
    if f.is_zero() {
        Err(Failure::input(format!("{what} must not be zero")))
    } else {
        Ok(f)
    }
}

fn cmd_check_integrable(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    let omega = ctx.one_form("params.form", need(&job.params.form, "params.form")?)?;
    let mut report = Report::new("check-integrable");
    report.input("form", &omega);
    let ok = omega.is_integrable();
    report.verdict("integrable", ok);
    if !ok {
        report.object("obstruction omega ^ d(omega)", omega.wedge(&omega.d()));
    }
    Ok((report, u8::from(!ok)))
}

fn cmd_check_logarithmic(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    let omega = ctx.one_form("params.form", need(&job.params.form, "params.form")?)?;
    let f = nonzero(surface_poly(ctx, &job.params)?, "the surface polynomial")?;
    let mut report = Report::new("check-logarithmic");
    report.input("form", &omega);
    report.input("surface", &f);
    match logarithmic_quotient(&omega, &f) {
        Some(eta) => {
            report.verdict("logarithmic", true);
            report.object("eta = (omega ^ d(surface)) / surface", eta);
            Ok((report, 0))
        }
        None => {
            report.verdict("logarithmic", false);
            Ok((report, 1))
        }
    }
}

fn cmd_saito_decompose(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    let omega = ctx.one_form("params.form", need(&job.params.form, "params.form")?)?;
    let f = nonzero(surface_poly(ctx, &job.params)?, "the surface polynomial")?;
    let avoid: Vec<QPoly> = match &job.params.avoid {
        None => vec![f.clone()],
        Some(list) => {
            let mut out = Vec::with_capacity(list.len());
            for (i, src) in list.iter().enumerate() {
                out.push(ctx.poly(&format!("params.avoid[{i}]"), src)?);
            }
            out
        }
    };
    let mut report = Report::new("saito-decompose");
    report.input("form", &omega);
    report.input("surface", &f);
    match saito_decompose(&omega, &f, &avoid) {
        Ok(t) => {
            report.verdict("decomposition identity", t.verify(&omega, &f));
            report.object("g", &t.g);
            report.object("h", &t.h);
            report.object("alpha", &t.alpha);
            let dir: Vec<String> = t.direction.iter().map(i64::to_string).collect();
            report.object("direction", format!("({})", dir.join(", ")));
            let code = u8::from(!report.all_hold());
            Ok((report, code))
        }
        Err(SaitoError::NotLogarithmic) => {
            report.verdict("logarithmic", false);
            Ok((report, 1))
        }
        Err(e) => Err(Failure::input(e)),
    }
}

fn cmd_saito_basis(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    let f = nonzero(surface_poly(ctx, &job.params)?, "the surface polynomial")?;
    let sources = need(&job.params.forms, "params.forms")?;
    let n = ctx.vars.len();
    if sources.len() != n {
        return Err(Failure::input(format!(
            "params.forms needs exactly {n} candidate 1-forms (one per variable), got {}",
            sources.len()
        )));
    }
    let mut candidates = Vec::with_capacity(n);
    for (i, src) in sources.iter().enumerate() {
        candidates.push(ctx.one_form(&format!("params.forms[{i}]"), src)?);
    }
    let mut report = Report::new("saito-basis");
    report.input("surface", &f);
    for (i, c) in candidates.iter().enumerate() {
        report.input(&format!("form {}", i + 1), c);
    }
    let divisibility = format!("wedge divisible by surface^{}", n - 1);
    let code = match free_basis_check(&candidates, &f) {
        FreeBasisOutcome::Divides { cofactor, is_unit } => {
            report.verdict(&divisibility, true);
            report.verdict("cofactor is a unit", is_unit);
            report.object("cofactor", &cofactor);
            u8::from(!is_unit)
        }
        FreeBasisOutcome::NotDivisible { wedge_coefficient } => {
            report.verdict(&divisibility, false);
            report.object("wedge coefficient", &wedge_coefficient);
            1
        }
        FreeBasisOutcome::Dependent => {
            report.verdict_with(&divisibility, false, "the candidates wedge to zero");
            1
        }
    };
    Ok((report, code))
}

fn cmd_cusp_decompose(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    let omega = ctx.one_form("params.form", need(&job.params.form, "params.form")?)?;
    let phi = ctx.poly("params.phi", need(&job.params.phi, "params.phi")?)?;
    let k = job.params.k.unwrap_or(2);
    let mut report = Report::new("cusp-decompose");
    report.input("form", &omega);
    report.input("phi", &phi);
    report.input("k", k);
    match cuspidal_decompose(&omega, k, &phi) {
        Ok(d) => {
            let cleared = d.verify(&omega, k, &phi);
            report.verdict("cleared identity", cleared);
            report.object("omega multiplier", &d.omega_scale);
            report.object("df coefficient", &d.df_coeff);
            report.object("omega_2 coefficient", &d.omega2_coeff);
            report.object("cleared residual", &d.residual);
            match &d.normalized {
                Some(t) => {
                    report.verdict("unit normalization", t.verify(&omega, k, &phi));
                    report.object("unit", &t.unit);
                    report.object("h", &t.h);
                    report.object("residual", &t.residual);
                }
                None => {
                    report.verdict_with(
                        "unit normalization",
                        false,
                        "dividing by the df coefficient is not polynomial",
                    );
                }
            }
            Ok((report, u8::from(!cleared)))
        }
        Err(CuspError::NotLogarithmic) => {
            report.verdict("logarithmic", false);
            Ok((report, 1))
        }
        Err(CuspError::OrderViolation { detail }) => {
            report.verdict_with("unit order condition", false, detail);
            Ok((report, 1))
        }
        Err(e @ CuspError::InvalidInput(_)) => Err(Failure::input(e)),
    }
}

fn cmd_assemble(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    if ctx.vars.len() != 3 {
        return Err(Failure::input(
            "this command needs exactly three variables",
        ));
    }
    let spec = build_spec(&job.spec)?;
    let g = build_g(&job.g)?;
    let surface = spec.surface(&ctx.vars);
    let omega = assemble_generator(&spec, &g, &ctx.vars);
    let mut report = Report::new("assemble");
    report.input("family", &spec);
    report.input("G", &g);
    report.verdict("integrable", omega.is_integrable());
    report.verdict("logarithmic", is_logarithmic(&omega, &surface));
    report.object("Psi", spec.psi(&ctx.vars));
    report.object("surface", &surface);
    report.object("generator", &omega);
    report.object("singular locus", spec.singular_locus(&ctx.vars));
    let code = u8::from(!report.all_hold());
    Ok((report, code))
}

fn push_chart<C: Coeff>(report: &mut Report, chart: &ChartReport<C>) {
    let name = &chart.name;
    let map: Vec<String> = chart
        .map
        .iter()
        .map(|(v, im)| format!("{v} -> {im}"))
        .collect();
    report.object(&format!("{name}: map"), map.join(", "));
    report.object(
        &format!("{name}: surface exceptional"),
        &chart.surface_exceptional,
    );
    report.object(&format!("{name}: surface"), &chart.surface_reduced);
    report.object(&format!("{name}: form exceptional"), &chart.form_exceptional);
    report.object(&format!("{name}: form"), &chart.form_reduced);
}

fn cmd_resolve(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    if ctx.vars.len() != 3 {
        return Err(Failure::input(
            "this command needs exactly three variables",
        ));
    }
    let spec = build_spec(&job.spec)?;
    let g = build_g(&job.g)?;
    let res = resolve(&spec, &g, &ctx.vars).map_err(Failure::unsupported)?;
    let mut report = Report::new("resolve");
    report.input("family", &spec);
    report.input("G", &g);
    for check in res.checks() {
        match &check.status {
            CheckStatus::Skipped { reason } => {
                report.verdict_with(&check.name, true, format!("skipped: {reason}"));
            }
            _ => {
                report.verdict(&check.name, check.holds());
            }
        }
    }
    report.object("surface", &res.surface);
    report.object("generator", &res.generator);
    push_chart(&mut report, &res.step1);
    push_chart(&mut report, &res.step2);
    for s3 in &res.step3 {
        match s3 {
            Step3Report::Rational(c) => push_chart(&mut report, c),
            Step3Report::Extended(c) => push_chart(&mut report, c),
        }
    }
    report.object("final surfaces", res.final_surfaces().join("; "));
    Ok((report, u8::from(!res.all_identities_hold())))
}

fn cmd_gs_condition(job: &Jobfile) -> Result<(Report, u8), Failure> {
    let r = match (job.params.r, &job.spec) {
        (Some(r), _) => r,
        (None, Some(_)) => build_spec(&job.spec)?.r,
        (None, None) => {
            return Err(Failure::input(
                "params.r (or a [spec] table to derive it from) is required for this command",
            ));
        }
    };
    if r < 2 {
        return Err(Failure::input("params.r must be at least 2"));
    }
    let g = build_g(&job.g)?;
    let t = gs_condition(&g, r);
    let mut report = Report::new("gs-condition");
    report.input("G", &g);
    report.input("r", r);
    report.verdict_with("gs condition", t.satisfied, &t);
    Ok((report, u8::from(!t.satisfied)))
}

fn bivariate(ctx: &Ctx) -> Result<(), Failure> {
    if ctx.vars.len() == 2 {
        Ok(())
    } else {
        Err(Failure::input("this command needs exactly two variables"))
    }
}

fn positive_weight(opt: &Option<u32>, what: &str) -> Result<u32, Failure> {
    let w = *need(opt, what)?;
    if w == 0 {
        return Err(Failure::input(format!("{what} must be positive")));
    }
    Ok(w)
}

fn cmd_valuation(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    bivariate(ctx)?;
    let f = ctx.poly("params.poly", need(&job.params.poly, "params.poly")?)?;
    let p = positive_weight(&job.params.p, "params.p")?;
    let q = positive_weight(&job.params.q, "params.q")?;
    let mut report = Report::new("valuation");
    report.input("poly", &f);
    report.input("weights", format!("({p}, {q})"));
    let text = match weighted_valuation(&f, p, q) {
        Some(v) => v.to_string(),
        None => "+infinity".to_string(),
    };
    report.object("valuation", text);
    Ok((report, 0))
}

fn cmd_weights(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    let f = ctx.poly("params.poly", need(&job.params.poly, "params.poly")?)?;
    let mut report = Report::new("weights");
    report.input("poly", &f);
    match find_quasihomogeneous_weights(&f) {
        Some(w) => {
            report.verdict("quasihomogeneous", true);
            report.object("weights", &w);
            Ok((report, 0))
        }
        None => {
            report.verdict("quasihomogeneous", false);
            Ok((report, 1))
        }
    }
}

fn cmd_loray_2d(ctx: &Ctx, job: &Jobfile) -> Result<(Report, u8), Failure> {
    bivariate(ctx)?;
    let p = positive_weight(&job.params.p, "params.p")?;
    let q = positive_weight(&job.params.q, "params.q")?;
    let delta = match &job.params.delta {
        Some(src) => ctx.poly("params.delta", src)?,
        None => Poly::zero(&ctx.vars),
    };
    let t = loray_condition_2d(p, q, &delta);
    let mut report = Report::new("loray-2d");
    report.input("p", p);
    report.input("q", q);
    report.input("Delta", &delta);
    report.verdict_with("loray condition", t.satisfied, &t);
    Ok((report, u8::from(!t.satisfied)))
}
