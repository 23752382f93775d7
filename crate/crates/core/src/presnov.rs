//! Presnov decomposition `X = grad H_X + u`, with
//!
//! ```text
//! H_X(x) = ∫_0^1 <X(t x), x> dt,   H_X(0) = 0,   <u(x), x> = 0.
//! ```
//!
//! The potential is computed by adaptive quadrature. Its gradient has two
//! independent routes: central differences of the potential (primary) and
//! differentiation under the integral sign,
//!
//! ```text
//! ∂_i H_X(x) = ∫_0^1 [ X_i(t x) + t ∂_i <X(·), x>(t x) ] dt,
//! ```
//!
//! with the inner derivative taken by central differences on the field.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Domain, FieldSpec, Point, VectorField};
use crate::quadrature::{integrate_unit, integrate_unit_vec, QuadratureConfig};
use crate::vector::{dot, norm, sub};

/// Below this norm the potential is taken to be exactly zero.
pub const ORIGIN_RADIUS: f64 = 1e-12;

/// Central-difference step for coordinate value `xi`.
#[inline]
pub fn fd_step(xi: f64) -> f64 {
    f64::EPSILON.cbrt() * xi.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

fn check_in_domain(field: &FieldSpec, x: &[f64]) -> Result<()> {
    field.check_point(x)?;
    if let Domain::ClosedBall { radius } = field.domain() {
        if norm(x) > radius {
            return Err(Error::OutsideDomain { at: x.to_vec(), radius });
        }
    }
    Ok(())
}

/// Every central-difference stencil point around `x` must stay in the ball.
fn check_clearance(field: &FieldSpec, x: &[f64]) -> Result<()> {
    check_in_domain(field, x)?;
    if let Domain::ClosedBall { radius } = field.domain() {
        let mut y = x.to_vec();
        for i in 0..x.len() {
            let h = fd_step(x[i]);
            for s in [h, -h] {
                y[i] = x[i] + s;
                if norm(&y) > radius {
                    return Err(Error::InsufficientClearance { at: x.to_vec(), radius });
                }
            }
            y[i] = x[i];
        }
    }
    Ok(())
}

fn potential_unchecked(field: &FieldSpec, x: &[f64], cfg: &QuadratureConfig) -> Result<PotentialEstimate> {
    if norm(x) < ORIGIN_RADIUS {
        return Ok(PotentialEstimate {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let mut y = vec![0.0; x.len()];
    let mut value = vec![0.0; x.len()];
    let est = integrate_unit(
        |t| {
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi = t * xi;
            }
            field.eval_into(&y, &mut value)?;
            Ok(dot(&value, x))
        },
        cfg,
    )?;
    Ok(PotentialEstimate {
        value: est.value,
        error_estimate: est.error,
    })
}

/// `H_X(x)` by adaptive quadrature along the segment from the origin.
pub fn compute_potential(field: &FieldSpec, x: &[f64], cfg: &QuadratureConfig) -> Result<PotentialEstimate> {
    check_in_domain(field, x)?;
    potential_unchecked(field, x, cfg)
}

fn fd_gradient(field: &FieldSpec, x: &[f64], cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    let mut y = x.to_vec();
    let mut grad = vec![0.0; x.len()];
    for i in 0..x.len() {
        let h = fd_step(x[i]);
        let (plus, minus) = (x[i] + h, x[i] - h);
        y[i] = plus;
        let hp = potential_unchecked(field, &y, cfg)?.value;
        y[i] = minus;
        let hm = potential_unchecked(field, &y, cfg)?.value;
        y[i] = x[i];
        grad[i] = (hp - hm) / (plus - minus);
    }
    Ok(grad)
}

/// `grad H_X(x)` by central differences of [`compute_potential`].
pub fn gradient_potential(field: &FieldSpec, x: &[f64], cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    check_clearance(field, x)?;
    fd_gradient(field, x, cfg)
}

/// `grad H_X(x)` by differentiating under the integral sign.
pub fn gradient_potential_integral(field: &FieldSpec, x: &[f64], cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    check_clearance(field, x)?;
    let n = x.len();
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut value = vec![0.0; n];
    let est = integrate_unit_vec(
        n,
        |t, out| {
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi = t * xi;
            }
            field.eval_into(&y, out)?;
            z.copy_from_slice(&y);
            for i in 0..n {
                let h = fd_step(y[i]);
                let (plus, minus) = (y[i] + h, y[i] - h);
                z[i] = plus;
                field.eval_into(&z, &mut value)?;
                let fp = dot(&value, x);
                z[i] = minus;
                field.eval_into(&z, &mut value)?;
                let fm = dot(&value, x);
                z[i] = y[i];
                out[i] += t * (fp - fm) / (plus - minus);
            }
            Ok(())
        },
        cfg,
    )?;
    Ok(est.value)
}

/// The decomposition of a field at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSample {
    pub x: Vec<f64>,
    pub field_value: Vec<f64>,
    pub potential: f64,
    pub conservative: Vec<f64>,
    pub sphere_invariant: Vec<f64>,
    /// `<u(x), x>`
    pub orthogonality_residual: f64,
    /// `<X(x), x> - <grad H_X(x), x>`
    pub radial_equality_residual: f64,
    /// Quadrature error estimate of the potential.
    pub estimated_error: f64,
}

impl DecompositionSample {
    /// `(1 + |x|)(1 + |X(x)|)`, the scale residuals are normalized by.
    pub fn residual_scale(&self) -> f64 {
        (1.0 + norm(&self.x)) * (1.0 + norm(&self.field_value))
    }
}

pub fn decompose(field: &FieldSpec, x: &[f64], cfg: &QuadratureConfig) -> Result<DecompositionSample> {
    check_clearance(field, x)?;
    let field_value = field.evaluate(x)?;
    let potential = potential_unchecked(field, x, cfg)?;
    let conservative = fd_gradient(field, x, cfg)?;
    let sphere_invariant = sub(&field_value, &conservative);
    Ok(DecompositionSample {
        x: x.to_vec(),
        orthogonality_residual: dot(&sphere_invariant, x),
        radial_equality_residual: dot(&field_value, x) - dot(&conservative, x),
        field_value,
        potential: potential.value,
        conservative,
        sphere_invariant,
        estimated_error: potential.error_estimate,
    })
}

/// Decomposes at every point, in parallel; output order matches input.
pub fn decompose_all(field: &FieldSpec, points: &[Point], cfg: &QuadratureConfig) -> Result<Vec<DecompositionSample>> {
    let results: Vec<Result<DecompositionSample>> = points.par_iter().map(|p| decompose(field, p, cfg)).collect();
    results.into_iter().collect()
}

/// `grad H_X` as a field in its own right.
#[derive(Debug)]
pub struct ConservativePart {
    field: FieldSpec,
    cfg: QuadratureConfig,
}

impl VectorField for ConservativePart {
    fn dim(&self) -> usize {
        self.field.dim()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        let g = fd_gradient(&self.field, x, &self.cfg)?;
        out.copy_from_slice(&g);
        Ok(())
    }

    fn describe(&self) -> String {
        format!("grad H[{}]", self.field)
    }
}

/// `u = X - grad H_X` as a field in its own right.
#[derive(Debug)]
pub struct SphereInvariantPart {
    field: FieldSpec,
    cfg: QuadratureConfig,
}

impl VectorField for SphereInvariantPart {
    fn dim(&self) -> usize {
        self.field.dim()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.field.eval_into(x, out)?;
        let g = fd_gradient(&self.field, x, &self.cfg)?;
        for (o, gi) in out.iter_mut().zip(&g) {
            *o -= gi;
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!("u[{}]", self.field)
    }
}

pub fn conservative_field(field: &FieldSpec, cfg: &QuadratureConfig) -> FieldSpec {
    let part = ConservativePart {
        field: field.clone(),
        cfg: *cfg,
    };
    FieldSpec::opaque(Arc::new(part)).with_domain(field.domain())
}

pub fn sphere_invariant_field(field: &FieldSpec, cfg: &QuadratureConfig) -> FieldSpec {
    let part = SphereInvariantPart {
        field: field.clone(),
        cfg: *cfg,
    };
    FieldSpec::opaque(Arc::new(part)).with_domain(field.domain())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Pass threshold for every normalized residual.
    pub threshold: f64,
    /// Also decompose `grad H_X` and `u` (roughly `2n` times more work).
    pub idempotence: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            threshold: 1e-6,
            idempotence: true,
        }
    }
}

/// Normalized residuals at one point, each divided by `(1+|x|)(1+|X(x)|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointResiduals {
    pub orthogonality: f64,
    pub radial_equality: f64,
    /// `|grad H_{grad H_X}(x) - grad H_X(x)|`
    pub idempotence: Option<f64>,
    /// `|H_u(x)|`
    pub annihilation: Option<f64>,
}

impl PointResiduals {
    fn worst(&self) -> f64 {
        [
            Some(self.orthogonality),
            Some(self.radial_equality),
            self.idempotence,
            self.annihilation,
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub points: usize,
    pub threshold: f64,
    pub max_orthogonality: f64,
    pub max_radial_equality: f64,
    pub max_idempotence: Option<f64>,
    pub max_annihilation: Option<f64>,
    /// Index of the point with the largest residual of any kind.
    pub worst_point: Option<usize>,
    pub pass: bool,
}

pub fn point_residuals(
    field: &FieldSpec,
    x: &[f64],
    cfg: &QuadratureConfig,
    idempotence: bool,
) -> Result<PointResiduals> {
    let s = decompose(field, x, cfg)?;
    let scale = s.residual_scale();
    let (idem, annih) = if idempotence {
        let again = gradient_potential(&conservative_field(field, cfg), x, cfg)?;
        let hu = compute_potential(&sphere_invariant_field(field, cfg), x, cfg)?.value;
        (
            Some(norm(&sub(&again, &s.conservative)) / scale),
            Some(hu.abs() / scale),
        )
    } else {
        (None, None)
    };
    Ok(PointResiduals {
        orthogonality: s.orthogonality_residual.abs() / scale,
        radial_equality: s.radial_equality_residual.abs() / scale,
        idempotence: idem,
        annihilation: annih,
    })
}

/// Checks the decomposition identities over a point set. Points are
/// processed in parallel; the reduction runs in input order.
pub fn verify_decomposition(
    field: &FieldSpec,
    points: &[Point],
    cfg: &QuadratureConfig,
    vcfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let per_point: Vec<Result<PointResiduals>> = points
        .par_iter()
        .map(|p| point_residuals(field, p, cfg, vcfg.idempotence))
        .collect();
    let per_point: Vec<PointResiduals> = per_point.into_iter().collect::<Result<_>>()?;

    let max_opt = |f: fn(&PointResiduals) -> Option<f64>| {
        per_point.iter().filter_map(f).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
    };
    let max_orthogonality = per_point.iter().map(|r| r.orthogonality).fold(0.0, f64::max);
    let max_radial_equality = per_point.iter().map(|r| r.radial_equality).fold(0.0, f64::max);
    let max_idempotence = max_opt(|r| r.idempotence);
    let max_annihilation = max_opt(|r| r.annihilation);
    let worst_point = per_point
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, r)| match best {
            Some((_, w)) if w >= r.worst() => best,
            _ => Some((i, r.worst())),
        })
        .map(|(i, _)| i);
    let worst = per_point.iter().map(PointResiduals::worst).fold(0.0, f64::max);
    Ok(VerificationReport {
        points: per_point.len(),
        threshold: vcfg.threshold,
        max_orthogonality,
        max_radial_equality,
        max_idempotence,
        max_annihilation,
        worst_point,
        // NaN residuals fail.
        pass: worst <= vcfg.threshold && per_point.iter().all(|r| r.worst().is_finite()),
    })
}
