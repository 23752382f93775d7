//! Adaptive composite Gauss–Legendre quadrature on `[0, 1]`.
//!
//! Each panel is integrated twice: once with the full rule and once as two
//! halves. The difference is the panel's error estimate and the halved value
//! is the one kept. The panel with the largest estimate is split until the
//! summed estimate meets `max(abs_tol, rel_tol * |I|)`.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{norm_inf, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Nodes per Gauss–Legendre panel.
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            order: 16,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 1 << 12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidConfig(format!(
                "quadrature order must be at least 2, got {}",
                self.order
            )));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig("quadrature tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Node/weight pairs mapped to `[0, 1]`.
type Rule = Arc<Vec<(f64, f64)>>;

fn rule(order: usize) -> Rule {
    static RULES: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = RULES.get_or_init(Default::default);
    let mut cache = cache.lock().unwrap_or_else(|p| p.into_inner());
    cache
        .entry(order)
        .or_insert_with(|| {
            let degree = NonZeroUsize::new(order).expect("order validated >= 2");
            let gl = GaussLegendre::new(degree);
            let mut pairs: Vec<(f64, f64)> = gl
                .as_node_weight_pairs()
                .iter()
                .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
                .collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            Arc::new(pairs)
        })
        .clone()
}

/// Vector-valued integral with its error estimate (max-abs norm).
#[derive(Debug, Clone, PartialEq)]
pub struct VecEstimate {
    pub value: Vec<f64>,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

struct Panel {
    a: f64,
    b: f64,
    left: Vec<f64>,
    right: Vec<f64>,
    error: f64,
}

struct Integrator<'r, F> {
    rule: &'r [(f64, f64)],
    dim: usize,
    f: F,
    buf: Vec<f64>,
}

impl<F> Integrator<'_, F>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    fn apply_rule(&mut self, a: f64, b: f64) -> Result<Vec<f64>> {
        let width = b - a;
        let mut acc = vec![CompensatedSum::default(); self.dim];
        for &(t, w) in self.rule {
            (self.f)(a + width * t, &mut self.buf)?;
            for (s, v) in acc.iter_mut().zip(&self.buf) {
                s.add(w * v);
            }
        }
        Ok(acc.iter().map(|s| s.value() * width).collect())
    }

    fn panel(&mut self, a: f64, b: f64, whole: Vec<f64>) -> Result<Panel> {
        let m = 0.5 * (a + b);
        let left = self.apply_rule(a, m)?;
        let right = self.apply_rule(m, b)?;
        let diff: Vec<f64> = (0..self.dim).map(|k| left[k] + right[k] - whole[k]).collect();
        Ok(Panel {
            a,
            b,
            left,
            right,
            error: norm_inf(&diff),
        })
    }
}

/// Integrates a vector-valued `f` over `[0, 1]`. `f(t, out)` writes the
/// integrand at `t` into `out` (length `dim`).
pub fn integrate_unit_vec<F>(dim: usize, f: F, cfg: &QuadratureConfig) -> Result<VecEstimate>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    cfg.validate()?;
    let rule = rule(cfg.order);
    let mut it = Integrator {
        rule: &rule,
        dim,
        f,
        buf: vec![0.0; dim],
    };

    let whole = it.apply_rule(0.0, 1.0)?;
    let mut panels = vec![it.panel(0.0, 1.0, whole)?];
    let mut subdivisions = 0;

    loop {
        let total = sum_panels(&mut panels, dim);
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * norm_inf(&total));
        if error <= target {
            return Ok(VecEstimate {
                value: total,
                error,
                subdivisions,
            });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                subdivisions,
                error_estimate: error,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .fold(0, |best, (i, p)| if p.error > panels[best].error { i } else { best });
        let Panel { a, b, left, right, .. } = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        if !(a < m && m < b) {
            return Err(Error::QuadratureNonConvergence {
                subdivisions,
                error_estimate: error,
            });
        }
        panels.push(it.panel(a, m, left)?);
        panels.push(it.panel(m, b, right)?);
        subdivisions += 1;
    }
}

/// Sums panel values in left-to-right order so the result does not depend
/// on the refinement history.
fn sum_panels(panels: &mut [Panel], dim: usize) -> Vec<f64> {
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut acc = vec![CompensatedSum::default(); dim];
    for p in panels.iter() {
        for ((s, l), r) in acc.iter_mut().zip(&p.left).zip(&p.right) {
            s.add(*l);
            s.add(*r);
        }
    }
    acc.iter().map(CompensatedSum::value).collect()
}

/// Scalar version of [`integrate_unit_vec`].
pub fn integrate_unit<F>(mut f: F, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let est = integrate_unit_vec(
        1,
        |t, out| {
            out[0] = f(t)?;
            Ok(())
        },
        cfg,
    )?;
    Ok(Estimate {
        value: est.value[0],
        error: est.error,
    })
}
