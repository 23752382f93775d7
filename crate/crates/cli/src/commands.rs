use anyhow::Result;
use clap::{ArgGroup, Args};
use presnov_core::radial::CertificateConfig;
use presnov_core::vector::{norm, sub};
use presnov_core::{
    boundary_certificate, decompose_all, find_equilibrium, find_equilibrium_conservative, gradient_potential_integral,
    paired_probe, perturbed_existence, verify_decomposition, Error as CoreError, EquilibriumResult, FieldSpec,
    PerturbationConfig, ProbeConfig, QuadratureConfig, SolverConfig, VerdictKind, VerifyConfig,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::Report;
use crate::source::{parse_vector, FieldArgs, PointArgs};
use crate::{classify, GlobalArgs, EXIT_CERTIFICATE, EXIT_IDENTITY, EXIT_NUMERIC};

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Gauss–Legendre nodes per panel
    #[arg(long, default_value_t = 16)]
    pub quad_order: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 4096)]
    pub max_subdivisions: usize,
}

impl QuadArgs {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            order: self.quad_order,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// First probe radius
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
    /// Ratio between consecutive probe radii
    #[arg(long, default_value_t = 2.0)]
    pub factor: f64,
    /// Number of probe radii
    #[arg(long, default_value_t = 12)]
    pub count: usize,
    /// Directions per sphere (default 256 for n <= 3, else 1024)
    #[arg(long)]
    pub directions: Option<usize>,
    /// Required growth of the minimum profile over the schedule
    #[arg(long, default_value_t = 4.0)]
    pub growth_factor: f64,
    /// Relative profile change treated as noise
    #[arg(long, default_value_t = 1e-8)]
    pub significance: f64,
}

impl ProbeArgs {
    fn config(&self, seed: u64) -> ProbeConfig {
        ProbeConfig {
            r0: self.r0,
            factor: self.factor,
            count: self.count,
            directions: self.directions,
            seed,
            growth_factor: self.growth_factor,
            significance: self.significance,
        }
    }
}

fn record_error(report: &mut Report, err: &CoreError) {
    let code = classify(&anyhow::Error::new(err.clone()));
    let status = match code {
        EXIT_CERTIFICATE => "certificate-failure",
        EXIT_NUMERIC => "numeric-failure",
        _ => "invalid-input",
    };
    report.fail(code, status, Some(err.to_string()));
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub points: PointArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Pass threshold for the normalized identity residuals
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
    /// Skip the (costlier) idempotence and annihilation checks
    #[arg(long)]
    pub no_idempotence: bool,
    /// Also compute the gradient by differentiating under the integral
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Debug, Serialize)]
struct RouteComparison {
    /// `|grad_fd - grad_integral|` per point
    differences: Vec<f64>,
    /// Max of `difference / (1 + |grad_fd|)`
    max_scaled_difference: f64,
}

pub fn decompose(args: &DecomposeArgs, global: &GlobalArgs) -> Result<Report> {
    let (field, echo) = args.field.build()?;
    let (points, points_echo) = args.points.collect(field.dim(), global.seed)?;
    let qcfg = args.quad.config();
    let vcfg = VerifyConfig {
        threshold: args.threshold,
        idempotence: !args.no_idempotence,
    };
    qcfg.validate()?;
    let config = json!({
        "seed": global.seed,
        "points": points_echo,
        "quadrature": qcfg,
        "verify": vcfg,
        "cross_check": args.cross_check,
    });
    let mut report = Report::new("decompose", echo, config);

    let samples = match decompose_all(&field, &points, &qcfg) {
        Ok(s) => s,
        Err(e) => {
            record_error(&mut report, &e);
            return Ok(report);
        }
    };
    let verification = match verify_decomposition(&field, &points, &qcfg, &vcfg) {
        Ok(v) => v,
        Err(e) => {
            record_error(&mut report, &e);
            return Ok(report);
        }
    };
    let routes = if args.cross_check {
        let grads: Result<Vec<Vec<f64>>, CoreError> =
            points.par_iter().map(|p| gradient_potential_integral(&field, p, &qcfg)).collect();
        match grads {
            Ok(g) => {
                let differences: Vec<f64> =
                    samples.iter().zip(&g).map(|(s, g)| norm(&sub(&s.conservative, g))).collect();
                let max_scaled_difference = samples
                    .iter()
                    .zip(&differences)
                    .map(|(s, d)| d / (1.0 + norm(&s.conservative)))
                    .fold(0.0, f64::max);
                Some(RouteComparison {
                    differences,
                    max_scaled_difference,
                })
            }
            Err(e) => {
                record_error(&mut report, &e);
                None
            }
        }
    } else {
        None
    };

    if !global.quiet {
        eprintln!(
            "{:>4}  {:>10}  {:>14}  {:>12}  {:>12}  {:>10}",
            "#", "|x|", "H(x)", "|grad H|", "|u|", "<u,x>/s"
        );
        for (i, s) in samples.iter().enumerate() {
            eprintln!(
                "{:>4}  {:>10.4e}  {:>14.6e}  {:>12.4e}  {:>12.4e}  {:>10.2e}",
                i,
                norm(&s.x),
                s.potential,
                norm(&s.conservative),
                norm(&s.sphere_invariant),
                s.orthogonality_residual.abs() / s.residual_scale()
            );
        }
        eprintln!(
            "verification: {} (threshold {:e})",
            if verification.pass { "pass" } else { "FAIL" },
            verification.threshold
        );
    }
    if !verification.pass {
        report.fail(
            EXIT_IDENTITY,
            "identity-violation",
            Some(format!(
                "decomposition residuals exceed {:e} (worst point {:?})",
                verification.threshold, verification.worst_point
            )),
        );
    }
    report.payload = json!({
        "samples": samples,
        "verification": verification,
        "gradient_routes": routes,
    });
    Ok(report)
}

#[derive(Debug, Args)]
pub struct CoercivityArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub probe: ProbeArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

pub fn coercivity(args: &CoercivityArgs, global: &GlobalArgs) -> Result<Report> {
    let (field, echo) = args.field.build()?;
    let qcfg = args.quad.config();
    let pcfg = args.probe.config(global.seed);
    qcfg.validate()?;
    pcfg.validate()?;
    let truth = echo.coercivity;
    let config = json!({ "seed": global.seed, "probe": pcfg, "quadrature": qcfg });
    let mut report = Report::new("coercivity", echo, config);

    let paired = match paired_probe(&field, &pcfg, &qcfg) {
        Ok(p) => p,
        Err(e) => {
            record_error(&mut report, &e);
            return Ok(report);
        }
    };
    let (vx, vh) = (paired.field.verdict.kind(), paired.conservative.verdict.kind());
    if !global.quiet {
        eprintln!("{:>12}  {:>16}  {:>16}", "radius", "min phi_X", "min phi_gradH");
        for k in 0..paired.field.radii.len() {
            eprintln!(
                "{:>12.4e}  {:>16.8e}  {:>16.8e}",
                paired.field.radii[k], paired.field.min_per_radius[k], paired.conservative.min_per_radius[k]
            );
        }
        eprintln!("verdicts: field {vx:?}, conservative part {vh:?}");
        eprintln!("max profile discrepancy {:.3e}", paired.max_discrepancy);
    }
    report.warnings.push(paired.field.note.clone());
    if let Some(truth) = truth {
        let expected = match truth {
            presnov_core::Coercivity::Coercive => Some(VerdictKind::EmpiricallyCoercive),
            presnov_core::Coercivity::NotCoercive => Some(VerdictKind::NotCoerciveWitness),
            presnov_core::Coercivity::Unknown => None,
        };
        if let Some(expected) = expected.filter(|e| *e != vx) {
            report
                .warnings
                .push(format!("probe verdict {vx:?} differs from the catalog ground truth {expected:?}"));
        }
    }
    if !paired.verdicts_agree {
        report.fail(
            EXIT_IDENTITY,
            "identity-violation",
            Some(format!("verdicts disagree: field {vx:?}, conservative part {vh:?}")),
        );
    }
    report.payload = serde_json::to_value(&paired)?;
    Ok(report)
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).multiple(false)))]
pub struct EquilibriaArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Certify the sphere of this radius and solve inside the ball
    #[arg(long, group = "mode")]
    pub radius: Option<f64>,
    /// Constant perturbation b, comma-separated; searches a certified radius
    #[arg(long, allow_hyphen_values = true, group = "mode")]
    pub perturb: Option<String>,
    /// Residual tolerance on |F(x)|
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
    /// Seeded starts in addition to the origin
    #[arg(long, default_value_t = 32)]
    pub starts: usize,
    /// Solve even if the boundary certificate fails
    #[arg(long)]
    pub no_certificate: bool,
    /// Certificate sample count (default depends on the dimension)
    #[arg(long)]
    pub certificate_samples: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub certificate_threshold: f64,
    /// Largest exponent k tried for the radius 2^k
    #[arg(long, default_value_t = 40)]
    pub k_max: u32,
    /// Required certificate margin as a fraction of the radius
    #[arg(long, default_value_t = 0.1)]
    pub margin_fraction: f64,
    #[command(flatten)]
    pub probe: ProbeArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn result_warnings(report: &mut Report, r: &EquilibriumResult) {
    let name = serde_json::to_value(r.target).ok().and_then(|v| v.as_str().map(str::to_owned));
    let name = name.unwrap_or_default();
    if r.certificate_overridden {
        report.warnings.push(format!("{name}: certificate not enforced"));
    }
    if r.succeeded() && r.degenerate {
        report.warnings.push(format!(
            "{name}: degenerate equilibrium (condition estimate {:e}); it may belong to a continuum",
            r.condition_estimate
        ));
    }
    if let Some(m) = r.minimizer_check.as_ref().filter(|m| !m.passed) {
        report.warnings.push(format!(
            "{name}: not a local minimizer of the potential (excess {:e} at step {:e})",
            m.worst_excess, m.delta
        ));
    }
    if !r.succeeded() {
        report.fail(
            EXIT_NUMERIC,
            "numeric-failure",
            Some(format!(
                "{name}: no start reached tolerance {:e} (best residual {:e})",
                r.tolerance, r.residual
            )),
        );
    }
}

fn print_result(r: &EquilibriumResult) {
    eprintln!(
        "{:<24} {:<8} x* = {:?}  |F| = {:.3e}  starts {}  iterations {}",
        format!("{:?}", r.target),
        if r.succeeded() { "success" } else { "FAILURE" },
        r.point,
        r.residual,
        r.starts_attempted,
        r.iterations
    );
}

pub fn equilibria(args: &EquilibriaArgs, global: &GlobalArgs) -> Result<Report> {
    let (field, echo) = args.field.build()?;
    let qcfg = args.quad.config();
    let pcfg = args.probe.config(global.seed);
    let scfg = SolverConfig {
        tolerance: args.tolerance,
        max_iterations: args.max_iterations,
        starts: args.starts,
        seed: global.seed,
        enforce_certificate: !args.no_certificate,
        certificate_samples: args.certificate_samples,
        certificate_threshold: args.certificate_threshold,
        ..Default::default()
    };
    let perturbation = PerturbationConfig {
        k_max: args.k_max,
        margin_fraction: args.margin_fraction,
    };
    qcfg.validate()?;
    scfg.validate()?;
    let b = args.perturb.as_deref().map(parse_vector).transpose()?;

    match (args.radius, b) {
        (Some(r), _) => {
            let config = json!({ "seed": global.seed, "mode": "radius", "radius": r, "solver": scfg, "quadrature": qcfg });
            let mut report = Report::new("equilibria", echo, config);
            run_radius(&mut report, &field, r, &scfg, &qcfg, global.quiet);
            Ok(report)
        }
        (None, Some(b)) => {
            let config = json!({
                "seed": global.seed,
                "mode": "perturb",
                "b": b,
                "solver": scfg,
                "quadrature": qcfg,
                "probe": pcfg,
                "perturbation": perturbation,
            });
            let mut report = Report::new("equilibria", echo, config);
            if b.len() != field.dim() {
                record_error(
                    &mut report,
                    &CoreError::DimensionMismatch {
                        expected: field.dim(),
                        found: b.len(),
                    },
                );
                return Ok(report);
            }
            match perturbed_existence(&field, &b, &scfg, &qcfg, &pcfg, &perturbation) {
                Ok(p) => {
                    if !global.quiet {
                        eprintln!("certified radius rho = {} (margin {:.4e})", p.rho, p.certificate.margin);
                        print_result(&p.field);
                        print_result(&p.conservative);
                    }
                    report.warnings.extend(p.warnings.iter().cloned());
                    result_warnings(&mut report, &p.field);
                    result_warnings(&mut report, &p.conservative);
                    report.payload = serde_json::to_value(&p)?;
                }
                Err(e) => {
                    if let CoreError::NoCertifiedRadius { warnings, .. } = &e {
                        report.warnings.extend(warnings.iter().cloned());
                    }
                    record_error(&mut report, &e);
                }
            }
            Ok(report)
        }
        (None, None) => unreachable!("clap enforces a mode"),
    }
}

fn run_radius(
    report: &mut Report,
    field: &FieldSpec,
    r: f64,
    scfg: &SolverConfig,
    qcfg: &QuadratureConfig,
    quiet: bool,
) {
    let ccfg = CertificateConfig {
        samples: scfg.certificate_samples,
        seed: scfg.seed,
        threshold: scfg.certificate_threshold,
        conservative_check: Some(*qcfg),
    };
    let certificate = match boundary_certificate(field, r, &ccfg) {
        Ok(c) => c,
        Err(e) => {
            record_error(report, &e);
            return;
        }
    };
    if !quiet {
        eprintln!(
            "certificate at r = {r}: {} (min <X,x> = {:.6e} over {} samples)",
            if certificate.passed() { "pass" } else { "FAIL" },
            certificate.min_radial,
            certificate.samples
        );
    }
    report.warnings.push(certificate.note.clone());
    let mut payload = json!({ "certificate": certificate });
    if scfg.enforce_certificate && !certificate.passed() {
        report.payload = payload;
        record_error(
            report,
            &CoreError::CertificateFailed {
                radius: r,
                min_radial: certificate.min_radial,
            },
        );
        return;
    }
    let solves: [(&str, Result<EquilibriumResult, CoreError>); 2] = [
        ("field", find_equilibrium(field, r, scfg)),
        ("conservative", find_equilibrium_conservative(field, r, scfg, qcfg)),
    ];
    for (key, res) in solves {
        match res {
            Ok(res) => {
                if !quiet {
                    print_result(&res);
                }
                result_warnings(report, &res);
                payload[key] = serde_json::to_value(&res).unwrap_or(Value::Null);
            }
            Err(e) => record_error(report, &e),
        }
    }
    report.payload = payload;
}
