//! Vector-field abstraction: points, star-shaped domains and field combinators.
//!
//! A [`FieldSpec`] is an immutable, cheaply clonable description of a vector
//! field `X: R^n -> R^n`. Fields are assumed to be continuously
//! differentiable on their domain; that cannot be checked for user
//! expressions and is a documented precondition of every analysis built on
//! top of this module.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::CatalogField;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::vector::{all_finite, dot, norm};

/// A finite point of `R^n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("a point needs at least one coordinate".into()));
        }
        if !all_finite(&coords) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate in {coords:?}")));
        }
        Ok(Point(coords))
    }

    pub fn origin(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Region on which a field is analysed. Both kinds are star-shaped with
/// respect to the origin, which the potential integral requires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    FullSpace,
    ClosedBall { radius: f64 },
}

impl Domain {
    pub fn closed_ball(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "ball radius must be finite and positive, got {radius}"
            )));
        }
        Ok(Domain::ClosedBall { radius })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match *self {
            Domain::FullSpace => true,
            Domain::ClosedBall { radius } => norm(x) <= radius,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match *self {
            Domain::FullSpace => None,
            Domain::ClosedBall { radius } => Some(radius),
        }
    }

    /// Intersection of two origin-centred domains.
    pub fn intersect(self, other: Domain) -> Domain {
        match (self.radius(), other.radius()) {
            (None, None) => Domain::FullSpace,
            (Some(r), None) | (None, Some(r)) => Domain::ClosedBall { radius: r },
            (Some(a), Some(b)) => Domain::ClosedBall { radius: a.min(b) },
        }
    }
}

/// Anything that can be evaluated as a vector field.
///
/// Implementors may assume `x.len() == out.len() == self.dim()`; the checked
/// entry point is [`FieldSpec::evaluate`].
pub trait VectorField: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn eval_into(&self, x: &[f64], out: &mut [f64]) -> Result<()>;

    fn describe(&self) -> String;
}

#[derive(Debug)]
pub enum FieldBody {
    Catalog(CatalogField),
    Expressions(Vec<Expr>),
    Sum(FieldSpec, FieldSpec),
    Scale(f64, FieldSpec),
    Shift(FieldSpec, Vec<f64>),
    /// A field computed by other machinery, e.g. the conservative part of
    /// another field.
    Opaque(Arc<dyn VectorField>),
}

#[derive(Debug, Clone)]
pub struct FieldSpec {
    dim: usize,
    domain: Domain,
    body: Arc<FieldBody>,
}

impl FieldSpec {
    pub fn from_catalog(field: CatalogField) -> Self {
        FieldSpec {
            dim: field.dim(),
            domain: Domain::FullSpace,
            body: Arc::new(FieldBody::Catalog(field)),
        }
    }

    pub fn from_expressions(dim: usize, exprs: Vec<Expr>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        if exprs.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: exprs.len(),
            });
        }
        if let Some(max) = exprs.iter().filter_map(Expr::max_variable).max() {
            if max >= dim {
                return Err(Error::InvalidConfig(format!(
                    "expression references x{} but the field has dimension {dim}",
                    max + 1
                )));
            }
        }
        Ok(FieldSpec {
            dim,
            domain: Domain::FullSpace,
            body: Arc::new(FieldBody::Expressions(exprs)),
        })
    }

    pub fn opaque(field: Arc<dyn VectorField>) -> Self {
        FieldSpec {
            dim: field.dim(),
            domain: Domain::FullSpace,
            body: Arc::new(FieldBody::Opaque(field)),
        }
    }

    pub fn sum(&self, other: &FieldSpec) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(FieldSpec {
            dim: self.dim,
            domain: self.domain.intersect(other.domain),
            body: Arc::new(FieldBody::Sum(self.clone(), other.clone())),
        })
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() {
            return Err(Error::InvalidConfig(format!("non-finite scale factor {factor}")));
        }
        Ok(FieldSpec {
            dim: self.dim,
            domain: self.domain,
            body: Arc::new(FieldBody::Scale(factor, self.clone())),
        })
    }

    /// `x -> X(x) + b` for a constant vector `b`.
    pub fn shift(&self, b: &[f64]) -> Result<Self> {
        if b.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: b.len(),
            });
        }
        if !all_finite(b) {
            return Err(Error::InvalidConfig(format!("non-finite shift vector {b:?}")));
        }
        Ok(FieldSpec {
            dim: self.dim,
            domain: self.domain,
            body: Arc::new(FieldBody::Shift(self.clone(), b.to_vec())),
        })
    }

    /// Restricts the field to `domain` (intersected with its current one).
    pub fn with_domain(&self, domain: Domain) -> Self {
        FieldSpec {
            dim: self.dim,
            domain: self.domain.intersect(domain),
            body: Arc::clone(&self.body),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn body(&self) -> &FieldBody {
        &self.body
    }

    /// Checked evaluation of `X(x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let mut out = vec![0.0; self.dim];
        self.eval_into(x, &mut out)?;
        Ok(out)
    }

    /// `<X(x), x>`, the numerator of the coercivity quotient.
    pub fn radial_component(&self, x: &[f64]) -> Result<f64> {
        let value = self.evaluate(x)?;
        Ok(dot(&value, x))
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if !all_finite(x) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate in {x:?}")));
        }
        Ok(())
    }

    fn eval_body(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        match &*self.body {
            FieldBody::Catalog(field) => field.eval_into(x, out),
            FieldBody::Expressions(exprs) => {
                for (slot, expr) in out.iter_mut().zip(exprs) {
                    *slot = expr.eval_unchecked(x);
                }
            }
            FieldBody::Sum(a, b) => {
                a.eval_body(x, out)?;
                let mut tmp = vec![0.0; self.dim];
                b.eval_body(x, &mut tmp)?;
                for (o, t) in out.iter_mut().zip(&tmp) {
                    *o += t;
                }
            }
            FieldBody::Scale(c, inner) => {
                inner.eval_body(x, out)?;
                for o in out.iter_mut() {
                    *o *= c;
                }
            }
            FieldBody::Shift(inner, b) => {
                inner.eval_body(x, out)?;
                for (o, bi) in out.iter_mut().zip(b) {
                    *o += bi;
                }
            }
            FieldBody::Opaque(field) => field.eval_into(x, out)?,
        }
        Ok(())
    }
}

impl VectorField for FieldSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.eval_body(x, out)?;
        if all_finite(out) {
            Ok(())
        } else {
            Err(Error::NonFinite { at: x.to_vec() })
        }
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.body {
            FieldBody::Catalog(field) => write!(f, "{field}")?,
            FieldBody::Expressions(exprs) => {
                for (i, e) in exprs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{e}")?;
                }
            }
            FieldBody::Sum(a, b) => write!(f, "({a}) + ({b})")?,
            FieldBody::Scale(c, inner) => write!(f, "{c} * ({inner})")?,
            FieldBody::Shift(inner, b) => write!(f, "({inner}) + {b:?}")?,
            FieldBody::Opaque(field) => f.write_str(&field.describe())?,
        }
        if let Domain::ClosedBall { radius } = self.domain {
            write!(f, " on |x| <= {radius}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_lookup, CatalogParams, SquareMatrix};

    fn linear_a() -> FieldSpec {
        let a = SquareMatrix::from_row_major(2, vec![1.0, 2.0, 0.0, 1.0]).unwrap();
        FieldSpec::from_catalog(CatalogField::Linear { matrix: a })
    }

    #[test]
    fn point_rejects_empty_and_non_finite() {
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![1.0, f64::NAN]).is_err());
        assert!(Point::new(vec![1.0, f64::INFINITY]).is_err());
        assert_eq!(Point::new(vec![3.0, 4.0]).unwrap().norm(), 5.0);
    }

    #[test]
    fn evaluate_examples() {
        let (identity, _) = catalog_lookup("identity", Some(2), &CatalogParams::default()).unwrap();
        assert_eq!(identity.evaluate(&[3.0, -4.0]).unwrap(), vec![3.0, -4.0]);

        let (rotation, _) = catalog_lookup("rotation2d", None, &CatalogParams::default()).unwrap();
        assert_eq!(rotation.evaluate(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);

        assert_eq!(linear_a().evaluate(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn radial_component_examples() {
        let (identity, _) = catalog_lookup("identity", Some(2), &CatalogParams::default()).unwrap();
        assert_eq!(identity.radial_component(&[3.0, 4.0]).unwrap(), 25.0);

        let (rotation, _) = catalog_lookup("rotation2d", None, &CatalogParams::default()).unwrap();
        for x in [[1.0, 0.0], [0.3, -2.5], [-7.0, 11.0]] {
            assert_eq!(rotation.radial_component(&x).unwrap(), 0.0);
        }

        // A(1,1) = (3,1), <(3,1),(1,1)> = 4
        assert_eq!(linear_a().radial_component(&[1.0, 1.0]).unwrap(), 4.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let f = linear_a();
        assert_eq!(
            f.evaluate(&[1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
        assert!(f.radial_component(&[1.0]).is_err());
        assert!(f.shift(&[1.0]).is_err());
    }

    #[test]
    fn combinators_evaluate_structurally() {
        let f = linear_a();
        let g = f.sum(&f).unwrap().scale(0.5).unwrap().shift(&[1.0, -1.0]).unwrap();
        assert_eq!(g.evaluate(&[1.0, 1.0]).unwrap(), vec![4.0, 0.0]);
    }

    #[test]
    fn shift_adds_inner_product_to_radial_component() {
        let f = linear_a();
        let b = [0.7, -1.3];
        let g = f.shift(&b).unwrap();
        for x in [[1.0, 2.0], [-0.25, 3.5], [10.0, -10.0]] {
            let lhs = g.radial_component(&x).unwrap();
            let rhs = f.radial_component(&x).unwrap() + dot(&b, &x);
            assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn domain_intersection_takes_smaller_ball() {
        let ball = Domain::closed_ball(2.0).unwrap();
        assert_eq!(Domain::FullSpace.intersect(ball), ball);
        assert_eq!(
            ball.intersect(Domain::ClosedBall { radius: 1.0 }),
            Domain::ClosedBall { radius: 1.0 }
        );
        assert!(Domain::closed_ball(0.0).is_err());
        assert!(ball.contains(&[2.0, 0.0]));
        assert!(!ball.contains(&[2.0, 0.1]));
    }
}
