//! Equilibrium location inside certified balls.
//!
//! If `<X(x), x> > 0` on the sphere of radius `r`, `X` has a zero in the open
//! ball, and so does `grad H_X` because the two radial components agree.
//! This module delivers numerical witnesses for those zeros with a damped
//! Newton multistart, and searches a radius `rho(b)` at which the same
//! boundary condition holds for the perturbed fields `X + b` and
//! `grad H_X + b`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Domain, FieldSpec};
use crate::presnov::{compute_potential, conservative_field, fd_step};
use crate::quadrature::QuadratureConfig;
use crate::radial::{boundary_certificate, coercivity_probe, BoundaryCertificate, CertificateConfig, ProbeConfig, VerdictKind};
use crate::sampling::{rng, uniform_in_ball, Stream};
use crate::vector::{dot, norm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Success threshold on `|F(x)|`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Seeded starts in addition to the origin.
    pub starts: usize,
    pub armijo: f64,
    pub min_step: f64,
    /// Escaping iterates are pulled back to `projection * r`.
    pub projection: f64,
    pub seed: u64,
    /// Refuse to solve unless the boundary certificate passes.
    pub enforce_certificate: bool,
    /// Certificate sample count; `None` uses the dimension default.
    pub certificate_samples: Option<usize>,
    pub certificate_threshold: f64,
    /// Jacobian condition estimate above which a solution is flagged degenerate.
    pub degenerate_condition: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-10,
            max_iterations: 200,
            starts: 32,
            armijo: 1e-4,
            min_step: 2f64.powi(-30),
            projection: 0.999,
            seed: 0,
            enforce_certificate: true,
            certificate_samples: None,
            certificate_threshold: 0.0,
            degenerate_condition: 1e12,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.tolerance > 0.0) {
            return bad("solver tolerance must be positive");
        }
        if self.max_iterations == 0 {
            return bad("solver needs at least one iteration");
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return bad("Armijo constant must lie in (0, 1)");
        }
        if !(self.min_step > 0.0 && self.min_step < 1.0) {
            return bad("minimum step must lie in (0, 1)");
        }
        if !(self.projection > 0.0 && self.projection < 1.0) {
            return bad("projection factor must lie in (0, 1)");
        }
        Ok(())
    }

    fn certificate_config(&self, conservative_check: Option<QuadratureConfig>) -> CertificateConfig {
        CertificateConfig {
            samples: self.certificate_samples,
            seed: self.seed,
            threshold: self.certificate_threshold,
            conservative_check,
        }
    }
}

/// Which field an equilibrium was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Field,
    Conservative,
    PerturbedField,
    PerturbedConservative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Success,
    Failure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartOutcome {
    Converged,
    Stalled,
    MaxIterations,
    EvaluationFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub index: usize,
    pub start: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub gradient_steps: usize,
    pub outcome: StartOutcome,
}

/// `H(x*) <= H(x* + delta d) + tol` along `±e_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizerCheck {
    pub delta: f64,
    pub tolerance: f64,
    /// Max over probes of `H(x*) - H(x* + delta d)`.
    pub worst_excess: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub target: Target,
    pub status: SolveStatus,
    pub point: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub ball_radius: f64,
    pub inside_ball: bool,
    pub starts_attempted: usize,
    pub successful_start: Option<usize>,
    pub iterations: usize,
    /// `sigma_max / sigma_min` of the finite-difference Jacobian at the
    /// point; infinite when `sigma_min` is at the differencing noise level.
    pub condition_estimate: f64,
    pub degenerate: bool,
    pub certificate: Option<BoundaryCertificate>,
    pub certificate_overridden: bool,
    pub minimizer_check: Option<MinimizerCheck>,
    pub trace: Vec<StartSummary>,
}

impl EquilibriumResult {
    pub fn succeeded(&self) -> bool {
        self.status == SolveStatus::Success
    }
}

fn eval(target: &FieldSpec, x: &[f64]) -> Result<Vec<f64>> {
    target.evaluate(x)
}

fn jacobian(target: &FieldSpec, x: &[f64], step_scale: f64) -> Result<DMatrix<f64>> {
    let n = x.len();
    let mut j = DMatrix::zeros(n, n);
    let mut y = x.to_vec();
    for col in 0..n {
        let h = step_scale * fd_step(x[col]);
        let (plus, minus) = (x[col] + h, x[col] - h);
        y[col] = plus;
        let fp = eval(target, &y)?;
        y[col] = minus;
        let fm = eval(target, &y)?;
        y[col] = x[col];
        for row in 0..n {
            j[(row, col)] = (fp[row] - fm[row]) / (plus - minus);
        }
    }
    Ok(j)
}

/// Condition number with singular values at the differencing noise level
/// treated as zero. The noise level is estimated from the change between
/// Jacobians taken with steps `h` and `2h`.
fn condition_estimate(target: &FieldSpec, x: &[f64]) -> Result<f64> {
    let j1 = jacobian(target, x, 1.0)?;
    let j2 = jacobian(target, x, 2.0)?;
    let noise = (&j1 - &j2).norm();
    let sv = j1.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if !(smin > 10.0 * noise) || smin == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(smax / smin)
}

fn project(x: &mut [f64], radius: f64, factor: f64) {
    let r = norm(x);
    if r >= radius {
        let s = factor * radius / r;
        x.iter_mut().for_each(|c| *c *= s);
    }
}

struct StartRun {
    point: Vec<f64>,
    residual: f64,
    summary: StartSummary,
}

fn damped_newton(target: &FieldSpec, index: usize, start: Vec<f64>, radius: f64, cfg: &SolverConfig) -> StartRun {
    let mut summary = StartSummary {
        index,
        start: start.clone(),
        iterations: 0,
        residual: f64::INFINITY,
        gradient_steps: 0,
        outcome: StartOutcome::MaxIterations,
    };
    let mut x = start;
    let mut f = match eval(target, &x) {
        Ok(f) => f,
        Err(_) => {
            summary.outcome = StartOutcome::EvaluationFailed;
            return StartRun {
                point: x,
                residual: f64::INFINITY,
                summary,
            };
        }
    };
    let n = x.len();

    for iter in 0..=cfg.max_iterations {
        let residual = norm(&f);
        summary.iterations = iter;
        summary.residual = residual;
        if residual <= cfg.tolerance {
            summary.outcome = StartOutcome::Converged;
            break;
        }
        if iter == cfg.max_iterations {
            summary.outcome = StartOutcome::MaxIterations;
            break;
        }
        let Ok(j) = jacobian(target, &x, 1.0) else {
            summary.outcome = StartOutcome::EvaluationFailed;
            break;
        };
        let fv = DVector::from_column_slice(&f);
        let merit_grad = j.transpose() * &fv;
        let newton = j
            .clone()
            .lu()
            .solve(&(-&fv))
            .filter(|p| p.iter().all(|v| v.is_finite()));
        let gradient = -merit_grad.clone();

        let merit = 0.5 * residual * residual;
        let mut accepted = false;
        for (is_gradient, dir) in [(false, newton), (true, Some(gradient))] {
            let Some(dir) = dir else { continue };
            let slope = merit_grad.dot(&dir);
            if !(slope < 0.0) {
                continue;
            }
            let mut alpha = 1.0;
            while alpha >= cfg.min_step {
                let mut trial: Vec<f64> = (0..n).map(|k| x[k] + alpha * dir[k]).collect();
                project(&mut trial, radius, cfg.projection);
                if let Ok(ft) = eval(target, &trial) {
                    let r = norm(&ft);
                    if 0.5 * r * r <= merit + cfg.armijo * alpha * slope {
                        x = trial;
                        f = ft;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if accepted {
                if is_gradient {
                    summary.gradient_steps += 1;
                }
                break;
            }
        }
        if !accepted {
            summary.outcome = StartOutcome::Stalled;
            break;
        }
    }
    StartRun {
        residual: summary.residual,
        point: x,
        summary,
    }
}

fn start_points(dim: usize, radius: f64, cfg: &SolverConfig) -> Vec<Vec<f64>> {
    let mut rng = rng(cfg.seed, Stream::SolverStarts);
    let mut starts = vec![vec![0.0; dim]];
    starts.extend((0..cfg.starts).map(|_| uniform_in_ball(&mut rng, dim, cfg.projection * radius)));
    starts
}

type PotentialFn<'a> = &'a dyn Fn(&[f64]) -> Result<f64>;

fn minimizer_check(potential: PotentialFn<'_>, x: &[f64], radius: f64) -> Result<MinimizerCheck> {
    let delta = 1e-3 * radius;
    let h0 = potential(x)?;
    let tolerance = 1e-9 * (1.0 + h0.abs());
    let mut worst = f64::NEG_INFINITY;
    let mut y = x.to_vec();
    for i in 0..x.len() {
        for s in [delta, -delta] {
            y[i] = x[i] + s;
            worst = worst.max(h0 - potential(&y)?);
        }
        y[i] = x[i];
    }
    Ok(MinimizerCheck {
        delta,
        tolerance,
        worst_excess: worst,
        passed: worst <= tolerance,
    })
}

struct SolveRequest<'a> {
    target: &'a FieldSpec,
    kind: Target,
    radius: f64,
    certificate: Option<BoundaryCertificate>,
    overridden: bool,
    potential: Option<PotentialFn<'a>>,
}

fn solve(req: SolveRequest<'_>, cfg: &SolverConfig) -> Result<EquilibriumResult> {
    let dim = req.target.dim();
    let mut trace = Vec::new();
    let mut best: Option<StartRun> = None;
    let mut success = None;
    for (index, start) in start_points(dim, req.radius, cfg).into_iter().enumerate() {
        let run = damped_newton(req.target, index, start, req.radius, cfg);
        trace.push(run.summary.clone());
        let converged = run.summary.outcome == StartOutcome::Converged && norm(&run.point) < req.radius;
        if best.as_ref().map_or(true, |b| run.residual < b.residual) || converged {
            best = Some(run);
        }
        if converged {
            success = Some(index);
            break;
        }
    }
    let best = best.expect("at least the origin start runs");
    let status = if success.is_some() {
        SolveStatus::Success
    } else {
        SolveStatus::Failure
    };
    let condition = if best.residual.is_finite() {
        condition_estimate(req.target, &best.point).unwrap_or(f64::INFINITY)
    } else {
        f64::INFINITY
    };
    let minimizer = match (req.potential, status) {
        (Some(p), SolveStatus::Success) => Some(minimizer_check(p, &best.point, req.radius)?),
        _ => None,
    };
    Ok(EquilibriumResult {
        target: req.kind,
        status,
        inside_ball: norm(&best.point) < req.radius,
        residual: best.residual,
        tolerance: cfg.tolerance,
        ball_radius: req.radius,
        starts_attempted: trace.len(),
        successful_start: success,
        iterations: best.summary.iterations,
        degenerate: condition > cfg.degenerate_condition,
        condition_estimate: condition,
        certificate: req.certificate,
        certificate_overridden: req.overridden,
        minimizer_check: minimizer,
        point: best.point,
        trace,
    })
}

fn certify(field: &FieldSpec, radius: f64, cfg: &SolverConfig) -> Result<(Option<BoundaryCertificate>, bool)> {
    if let Domain::ClosedBall { radius: dr } = field.domain() {
        if radius > dr {
            return Err(Error::OutsideDomain {
                at: vec![radius],
                radius: dr,
            });
        }
    }
    let cert = boundary_certificate(field, radius, &cfg.certificate_config(None))?;
    if cfg.enforce_certificate && !cert.passed() {
        return Err(Error::CertificateFailed {
            radius,
            min_radial: cert.min_radial,
        });
    }
    Ok((Some(cert), !cfg.enforce_certificate))
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("ball radius must be positive, got {radius}")))
    }
}

/// Finds a zero of `field` in the open ball of `radius`.
pub fn find_equilibrium(field: &FieldSpec, radius: f64, cfg: &SolverConfig) -> Result<EquilibriumResult> {
    cfg.validate()?;
    check_radius(radius)?;
    let (certificate, overridden) = certify(field, radius, cfg)?;
    solve(
        SolveRequest {
            target: field,
            kind: Target::Field,
            radius,
            certificate,
            overridden,
            potential: None,
        },
        cfg,
    )
}

/// Finds a zero of `grad H_X` in the open ball of `radius`. The certificate
/// is taken on `X` itself.
pub fn find_equilibrium_conservative(
    field: &FieldSpec,
    radius: f64,
    cfg: &SolverConfig,
    qcfg: &QuadratureConfig,
) -> Result<EquilibriumResult> {
    cfg.validate()?;
    qcfg.validate()?;
    check_radius(radius)?;
    let (certificate, overridden) = certify(field, radius, cfg)?;
    let target = conservative_field(field, qcfg);
    let potential = |x: &[f64]| compute_potential(field, x, qcfg).map(|p| p.value);
    solve(
        SolveRequest {
            target: &target,
            kind: Target::Conservative,
            radius,
            certificate,
            overridden,
            potential: Some(&potential),
        },
        cfg,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    /// Radii `2^k` for `k = 0..=k_max` are tried.
    pub k_max: u32,
    /// Required certificate margin as a fraction of the radius.
    pub margin_fraction: f64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        PerturbationConfig {
            k_max: 40,
            margin_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedExistence {
    pub b: Vec<f64>,
    pub rho: f64,
    pub probe_verdict: VerdictKind,
    pub warnings: Vec<String>,
    pub certificate: BoundaryCertificate,
    pub field: EquilibriumResult,
    pub conservative: EquilibriumResult,
}

/// For a coercive field and constant `b`, finds a radius `rho` at which
/// `<X(x) + b, x> > 0` on the sphere, then solves `X + b = 0` and
/// `grad H_X + b = 0` inside that ball.
pub fn perturbed_existence(
    field: &FieldSpec,
    b: &[f64],
    cfg: &SolverConfig,
    qcfg: &QuadratureConfig,
    probe: &ProbeConfig,
    pcfg: &PerturbationConfig,
) -> Result<PerturbedExistence> {
    cfg.validate()?;
    qcfg.validate()?;
    if field.domain() != Domain::FullSpace {
        return Err(Error::FullSpaceRequired);
    }
    if !(pcfg.margin_fraction >= 0.0) {
        return Err(Error::InvalidConfig("margin fraction must be non-negative".into()));
    }
    let shifted = field.shift(b)?;

    let mut warnings = Vec::new();
    let probe_verdict = coercivity_probe(field, probe)?.verdict.kind();
    if probe_verdict != VerdictKind::EmpiricallyCoercive {
        warnings.push(format!(
            "coercivity probe verdict is {probe_verdict:?}, not empirically coercive; a certified radius may not exist"
        ));
    }

    let cert_cfg = cfg.certificate_config(None);
    let mut found = None;
    for k in 0..=pcfg.k_max {
        let r = 2f64.powi(k as i32);
        match boundary_certificate(&shifted, r, &cert_cfg) {
            Ok(c) if c.passed() && c.margin >= pcfg.margin_fraction * r => {
                found = Some((r, c));
                break;
            }
            Ok(_) => {}
            Err(e) => {
                warnings.push(format!("certificate search stopped at radius {r}: {e}"));
                break;
            }
        }
    }
    let Some((rho, certificate)) = found else {
        return Err(Error::NoCertifiedRadius {
            max_radius: 2f64.powi(pcfg.k_max as i32),
            warnings,
        });
    };

    let field_result = solve(
        SolveRequest {
            target: &shifted,
            kind: Target::PerturbedField,
            radius: rho,
            certificate: Some(certificate.clone()),
            overridden: false,
            potential: None,
        },
        cfg,
    )?;

    let conservative_target = conservative_field(field, qcfg).shift(b)?;
    let potential = |x: &[f64]| compute_potential(field, x, qcfg).map(|p| p.value + dot(b, x));
    let conservative_result = solve(
        SolveRequest {
            target: &conservative_target,
            kind: Target::PerturbedConservative,
            radius: rho,
            certificate: Some(certificate.clone()),
            overridden: false,
            potential: Some(&potential),
        },
        cfg,
    )?;

    Ok(PerturbedExistence {
        b: b.to_vec(),
        rho,
        probe_verdict,
        warnings,
        certificate,
        field: field_result,
        conservative: conservative_result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_lookup, CatalogParams};
    use crate::expr::parse_field;

    fn catalog(name: &str, dim: Option<usize>) -> FieldSpec {
        let p = CatalogParams {
            matrix: Some(vec![1.0, 2.0, 0.0, 1.0]),
            ..Default::default()
        };
        catalog_lookup(name, dim, &p).unwrap().0
    }

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn probe() -> ProbeConfig {
        ProbeConfig {
            directions: Some(64),
            ..Default::default()
        }
    }

    #[test]
    fn identity_equilibrium_at_origin() {
        for n in 1..=4 {
            let r = find_equilibrium(&catalog("identity", Some(n)), 1.0, &SolverConfig::default()).unwrap();
            assert!(r.succeeded());
            assert_eq!(r.successful_start, Some(0));
            assert!(r.residual <= 1e-10);
            assert!(norm(&r.point) <= 1e-10);
            assert!(!r.degenerate);
        }
    }

    #[test]
    fn spiral_linear_field() {
        let f = parse_field("x1 - x2; x1 + x2", 2).unwrap();
        let r = find_equilibrium(&f, 2.0, &SolverConfig::default()).unwrap();
        assert!(r.succeeded());
        assert!(norm(&r.point) <= 1e-10);
        assert!(r.certificate.as_ref().unwrap().passed());
    }

    #[test]
    fn shifted_identity() {
        let f = catalog("identity", Some(2)).shift(&[3.0, -4.0]).unwrap();
        let r = find_equilibrium(&f, 6.0, &SolverConfig::default()).unwrap();
        assert!(r.succeeded());
        assert!((r.point[0] + 3.0).abs() < 1e-10 && (r.point[1] - 4.0).abs() < 1e-10);
        assert!(r.inside_ball);
    }

    #[test]
    fn certificate_failure_is_a_precondition_error() {
        let lin = catalog("linear", Some(2));
        assert!(matches!(
            find_equilibrium_conservative(&lin, 1.0, &SolverConfig::default(), &q()),
            Err(Error::CertificateFailed { .. })
        ));
        let rot = catalog("rotation2d", None);
        assert!(matches!(
            find_equilibrium(&rot, 1.0, &SolverConfig::default()),
            Err(Error::CertificateFailed { .. })
        ));
    }

    #[test]
    fn rotation_conservative_part_is_a_degenerate_success() {
        let rot = catalog("rotation2d", None);
        let cfg = SolverConfig {
            enforce_certificate: false,
            ..Default::default()
        };
        let r = find_equilibrium_conservative(&rot, 1.0, &cfg, &q()).unwrap();
        assert!(r.succeeded());
        assert!(r.certificate_overridden);
        assert!(r.degenerate, "condition {}", r.condition_estimate);
        assert!(r.minimizer_check.unwrap().passed);
    }

    #[test]
    fn shifted_gradient_field_has_in_ball_equilibria() {
        let f = parse_field("x1^2; x2", 2).unwrap().shift(&[-0.25, -0.5]).unwrap();
        let cfg = SolverConfig {
            enforce_certificate: false,
            ..Default::default()
        };
        let r = find_equilibrium_conservative(&f, 2.0, &cfg, &q()).unwrap();
        assert!(r.succeeded(), "{:?}", r.trace);
        assert!((r.point[0].abs() - 0.5).abs() < 1e-8, "{:?}", r.point);
        assert!((r.point[1] - 0.5).abs() < 1e-8);
        let check = r.minimizer_check.unwrap();
        // (0.5, 0.5) is a minimum of the potential, (-0.5, 0.5) a saddle
        assert_eq!(check.passed, r.point[0] > 0.0);
    }

    #[test]
    fn perturbed_identity() {
        let id = catalog("identity", Some(2));
        let p = perturbed_existence(
            &id,
            &[3.0, -4.0],
            &SolverConfig::default(),
            &q(),
            &probe(),
            &PerturbationConfig::default(),
        )
        .unwrap();
        assert_eq!(p.rho, 8.0);
        assert!(p.warnings.is_empty());
        for r in [&p.field, &p.conservative] {
            assert!(r.succeeded(), "{:?}", r.trace);
            assert!((r.point[0] + 3.0).abs() < 1e-8 && (r.point[1] - 4.0).abs() < 1e-8, "{:?}", r.point);
        }
    }

    #[test]
    fn perturbed_cubic_radial() {
        let f = catalog("cubic-radial", Some(3));
        let p = perturbed_existence(
            &f,
            &[0.0, 0.0, -8.0],
            &SolverConfig::default(),
            &q(),
            &probe(),
            &PerturbationConfig::default(),
        )
        .unwrap();
        for r in [&p.field, &p.conservative] {
            assert!(r.succeeded(), "{:?}", r.trace);
            assert!(norm(&[r.point[0], r.point[1], r.point[2] - 2.0]) < 1e-8, "{:?}", r.point);
        }
    }

    #[test]
    fn perturbed_rotation_has_no_certified_radius() {
        let rot = catalog("rotation2d", None);
        let err = perturbed_existence(
            &rot,
            &[1.0, 0.0],
            &SolverConfig::default(),
            &q(),
            &probe(),
            &PerturbationConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::NoCertifiedRadius { warnings, .. } => {
                assert!(warnings.iter().any(|w| w.contains("not empirically coercive")))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn translated_invertible_linear_field() {
        // equilibrium of A x + b is -A^{-1} b
        let p = CatalogParams {
            matrix: Some(vec![2.0, 1.0, 0.0, -1.0, 3.0, 0.5, 0.0, -0.5, 1.5]),
            ..Default::default()
        };
        let (f, _) = catalog_lookup("linear", None, &p).unwrap();
        let b = [1.0, -2.0, 0.5];
        let a = DMatrix::from_row_slice(3, 3, p.matrix.as_ref().unwrap());
        let expected = -a.lu().solve(&DVector::from_column_slice(&b)).unwrap();
        let r = find_equilibrium(&f.shift(&b).unwrap(), 4.0, &SolverConfig::default()).unwrap();
        assert!(r.succeeded());
        for k in 0..3 {
            assert!((r.point[k] - expected[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn results_are_deterministic() {
        let f = parse_field("x1^3 + x2 - 0.3; x2^3 - x1 + 0.2", 2).unwrap();
        let a = find_equilibrium(&f, 2.0, &SolverConfig::default()).unwrap();
        let b = find_equilibrium(&f, 2.0, &SolverConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
