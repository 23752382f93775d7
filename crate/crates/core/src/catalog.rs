//! Catalog of vector fields whose Presnov decomposition is known in closed
//! form. These are the oracles the numerical routines are tested against.

use std::fmt;

use nalgebra::{Cholesky, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::vector::dot;

pub const CATALOG_NAMES: &[&str] = &[
    "identity",
    "constant",
    "linear",
    "rotation2d",
    "gradient-polynomial",
    "cubic-radial",
    "identity-plus-rotation2d",
];

/// Ground-truth coercivity of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coercivity {
    Coercive,
    NotCoercive,
    Unknown,
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::BadCatalogParameters {
                name: "linear".into(),
                reason: format!("expected {n}x{n} = {} entries, got {}", n * n, data.len()),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadCatalogParameters {
                name: "linear".into(),
                reason: "matrix entries must be finite".into(),
            });
        }
        Ok(SquareMatrix { n, data })
    }

    /// Infers `n` from a flat list of `n*n` entries.
    pub fn from_flat(data: Vec<f64>) -> Result<Self> {
        let n = (data.len() as f64).sqrt().round() as usize;
        Self::from_row_major(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        for (row, o) in self.data.chunks_exact(self.n).zip(out.iter_mut()) {
            *o = dot(row, x);
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.mul_vec_into(x, &mut out);
        out
    }

    fn map_pairs(&self, f: impl Fn(f64, f64) -> f64) -> SquareMatrix {
        let n = self.n;
        let data = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                f(self.get(i, j), self.get(j, i))
            })
            .collect();
        SquareMatrix { n, data }
    }

    /// `(A + A^T) / 2`
    pub fn symmetric_part(&self) -> SquareMatrix {
        self.map_pairs(|a, at| 0.5 * (a + at))
    }

    /// `(A - A^T) / 2`
    pub fn skew_part(&self) -> SquareMatrix {
        self.map_pairs(|a, at| 0.5 * (a - at))
    }

    /// Positive definiteness of the symmetric part, i.e. `<Ax, x> > 0` for
    /// all `x != 0`.
    pub fn has_positive_definite_symmetric_part(&self) -> bool {
        let sym = self.symmetric_part();
        let m = DMatrix::from_row_slice(self.n, self.n, &sym.data);
        Cholesky::new(m).is_some()
    }
}

/// One term `coefficient * prod_i x_i^exponents[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coefficient: f64,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(dim: usize, terms: Vec<Monomial>) -> Result<Self> {
        let bad = |reason: String| Error::BadCatalogParameters {
            name: "gradient-polynomial".into(),
            reason,
        };
        if dim == 0 {
            return Err(bad("dimension must be at least 1".into()));
        }
        for t in &terms {
            if t.exponents.len() != dim {
                return Err(bad(format!(
                    "monomial has {} exponents, expected {dim}",
                    t.exponents.len()
                )));
            }
            if !t.coefficient.is_finite() {
                return Err(bad("coefficients must be finite".into()));
            }
        }
        Ok(Polynomial { dim, terms })
    }

    /// Parses `"c:e1,...,en c:e1,...,en ..."`; terms are separated by
    /// whitespace or `;`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: String| Error::BadCatalogParameters {
            name: "gradient-polynomial".into(),
            reason,
        };
        let mut terms = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == ';').filter(|t| !t.is_empty()) {
            let (coef, exps) = token
                .split_once(':')
                .ok_or_else(|| bad(format!("term `{token}` is not of the form coef:e1,...,en")))?;
            let coefficient: f64 = coef
                .parse()
                .map_err(|_| bad(format!("bad coefficient `{coef}`")))?;
            let exponents = exps
                .split(',')
                .map(|e| e.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad(format!("bad exponents `{exps}`")))?;
            terms.push(Monomial {
                coefficient,
                exponents,
            });
        }
        let dim = terms
            .first()
            .map(|t| t.exponents.len())
            .ok_or_else(|| bad("polynomial has no terms".into()))?;
        Polynomial::new(dim, terms)
    }

    /// `1 + sum_i x_i^4 / 4 + sum_i x_i x_{i+1} / 2`, a coercive default. The
    /// constant term exercises the `H(0) = 0` normalization.
    pub fn default_for_dim(dim: usize) -> Self {
        let mut terms = vec![Monomial {
            coefficient: 1.0,
            exponents: vec![0; dim],
        }];
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 4;
            terms.push(Monomial {
                coefficient: 0.25,
                exponents: e,
            });
        }
        for i in 0..dim.saturating_sub(1) {
            let mut e = vec![0; dim];
            e[i] = 1;
            e[i + 1] = 1;
            terms.push(Monomial {
                coefficient: 0.5,
                exponents: e,
            });
        }
        Polynomial { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.exponents
                    .iter()
                    .zip(x)
                    .fold(t.coefficient, |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum()
    }

    pub fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for t in &self.terms {
            for (k, o) in out.iter_mut().enumerate() {
                let ek = t.exponents[k];
                if ek == 0 {
                    continue;
                }
                let mut v = t.coefficient * ek as f64;
                for (i, (&e, &xi)) in t.exponents.iter().zip(x).enumerate() {
                    let p = if i == k { e - 1 } else { e };
                    v *= xi.powi(p as i32);
                }
                *o += v;
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:", t.coefficient)?;
            for (j, e) in t.exponents.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

/// A catalog field together with its closed-form decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum CatalogField {
    Identity { dim: usize },
    Constant { value: Vec<f64> },
    Linear { matrix: SquareMatrix },
    Rotation2d,
    GradientPolynomial { potential: Polynomial },
    CubicRadial { dim: usize },
    IdentityPlusRotation2d,
}

impl CatalogField {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogField::Identity { .. } => "identity",
            CatalogField::Constant { .. } => "constant",
            CatalogField::Linear { .. } => "linear",
            CatalogField::Rotation2d => "rotation2d",
            CatalogField::GradientPolynomial { .. } => "gradient-polynomial",
            CatalogField::CubicRadial { .. } => "cubic-radial",
            CatalogField::IdentityPlusRotation2d => "identity-plus-rotation2d",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CatalogField::Identity { dim } | CatalogField::CubicRadial { dim } => *dim,
            CatalogField::Constant { value } => value.len(),
            CatalogField::Linear { matrix } => matrix.dim(),
            CatalogField::Rotation2d | CatalogField::IdentityPlusRotation2d => 2,
            CatalogField::GradientPolynomial { potential } => potential.dim(),
        }
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            CatalogField::Identity { .. } => out.copy_from_slice(x),
            CatalogField::Constant { value } => out.copy_from_slice(value),
            CatalogField::Linear { matrix } => matrix.mul_vec_into(x, out),
            CatalogField::Rotation2d => {
                out[0] = -x[1];
                out[1] = x[0];
            }
            CatalogField::GradientPolynomial { potential } => potential.gradient_into(x, out),
            CatalogField::CubicRadial { .. } => {
                let r2 = dot(x, x);
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = r2 * xi;
                }
            }
            CatalogField::IdentityPlusRotation2d => {
                out[0] = x[0] - x[1];
                out[1] = x[1] + x[0];
            }
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(x, &mut out);
        out
    }

    /// Closed-form potential `H_X` with `H_X(0) = 0`.
    pub fn potential(&self, x: &[f64]) -> f64 {
        match self {
            CatalogField::Identity { .. } | CatalogField::IdentityPlusRotation2d => 0.5 * dot(x, x),
            CatalogField::Constant { value } => dot(value, x),
            CatalogField::Linear { matrix } => 0.5 * dot(&matrix.symmetric_part().mul_vec(x), x),
            CatalogField::Rotation2d => 0.0,
            CatalogField::GradientPolynomial { potential } => {
                potential.eval(x) - potential.eval(&vec![0.0; x.len()])
            }
            CatalogField::CubicRadial { .. } => {
                let r2 = dot(x, x);
                0.25 * r2 * r2
            }
        }
    }

    /// Closed-form conservative part `grad H_X`.
    pub fn conservative(&self, x: &[f64]) -> Vec<f64> {
        match self {
            CatalogField::Identity { .. } | CatalogField::IdentityPlusRotation2d => x.to_vec(),
            CatalogField::Linear { matrix } => matrix.symmetric_part().mul_vec(x),
            CatalogField::Rotation2d => vec![0.0; 2],
            CatalogField::Constant { .. }
            | CatalogField::GradientPolynomial { .. }
            | CatalogField::CubicRadial { .. } => self.evaluate(x),
        }
    }

    /// Closed-form sphere-invariant part `u`, orthogonal to `x`.
    pub fn sphere_invariant(&self, x: &[f64]) -> Vec<f64> {
        match self {
            CatalogField::Linear { matrix } => matrix.skew_part().mul_vec(x),
            CatalogField::Rotation2d | CatalogField::IdentityPlusRotation2d => vec![-x[1], x[0]],
            _ => vec![0.0; self.dim()],
        }
    }
}

impl fmt::Display for CatalogField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogField::Identity { dim } | CatalogField::CubicRadial { dim } => {
                write!(f, "{}(n={dim})", self.name())
            }
            CatalogField::Constant { value } => write!(f, "constant{value:?}"),
            CatalogField::Linear { matrix } => write!(f, "linear{:?}", matrix.as_row_major()),
            CatalogField::GradientPolynomial { potential } => {
                write!(f, "gradient-polynomial({potential})")
            }
            CatalogField::Rotation2d | CatalogField::IdentityPlusRotation2d => f.write_str(self.name()),
        }
    }
}

/// Optional parameters for [`catalog_lookup`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CatalogParams {
    /// Row-major `n*n` entries for `linear`.
    pub matrix: Option<Vec<f64>>,
    /// The constant vector for `constant`.
    pub constant: Option<Vec<f64>>,
    /// The potential for `gradient-polynomial`; a coercive default is used
    /// when absent.
    pub polynomial: Option<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub field: CatalogField,
    pub coercivity: Coercivity,
}

impl CatalogEntry {
    pub fn name(&self) -> &'static str {
        self.field.name()
    }

    pub fn potential(&self, x: &[f64]) -> f64 {
        self.field.potential(x)
    }

    pub fn conservative(&self, x: &[f64]) -> Vec<f64> {
        self.field.conservative(x)
    }

    pub fn sphere_invariant(&self, x: &[f64]) -> Vec<f64> {
        self.field.sphere_invariant(x)
    }
}

/// Looks up a catalog field by name. `dim` is required for the
/// dimension-generic entries and, when given, must agree with the
/// parameters of the others.
pub fn catalog_lookup(
    name: &str,
    dim: Option<usize>,
    params: &CatalogParams,
) -> Result<(FieldSpec, CatalogEntry)> {
    let bad = |reason: String| Error::BadCatalogParameters {
        name: name.to_string(),
        reason,
    };
    let require_dim = || match dim {
        Some(0) => Err(bad("dimension must be at least 1".into())),
        Some(n) => Ok(n),
        None => Err(bad("a dimension is required".into())),
    };
    let check_dim = |actual: usize| match dim {
        Some(n) if n != actual => Err(bad(format!("dimension {n} does not match parameters ({actual})"))),
        _ => Ok(()),
    };

    let (field, coercivity) = match name {
        "identity" => (CatalogField::Identity { dim: require_dim()? }, Coercivity::Coercive),
        "cubic-radial" => (CatalogField::CubicRadial { dim: require_dim()? }, Coercivity::Coercive),
        "rotation2d" => {
            check_dim(2)?;
            (CatalogField::Rotation2d, Coercivity::NotCoercive)
        }
        "identity-plus-rotation2d" => {
            check_dim(2)?;
            (CatalogField::IdentityPlusRotation2d, Coercivity::Coercive)
        }
        "constant" => {
            let value = params
                .constant
                .clone()
                .ok_or_else(|| bad("missing constant vector".into()))?;
            if value.is_empty() || value.iter().any(|v| !v.is_finite()) {
                return Err(bad("constant vector must be non-empty and finite".into()));
            }
            check_dim(value.len())?;
            (CatalogField::Constant { value }, Coercivity::NotCoercive)
        }
        "linear" => {
            let data = params
                .matrix
                .clone()
                .ok_or_else(|| bad("missing matrix".into()))?;
            let matrix = match dim {
                Some(n) => SquareMatrix::from_row_major(n, data),
                None => SquareMatrix::from_flat(data),
            }
            .map_err(|e| bad(e.to_string()))?;
            let coercivity = if matrix.has_positive_definite_symmetric_part() {
                Coercivity::Coercive
            } else {
                Coercivity::NotCoercive
            };
            (CatalogField::Linear { matrix }, coercivity)
        }
        "gradient-polynomial" => match &params.polynomial {
            Some(p) => {
                check_dim(p.dim())?;
                (
                    CatalogField::GradientPolynomial { potential: p.clone() },
                    Coercivity::Unknown,
                )
            }
            None => (
                CatalogField::GradientPolynomial {
                    potential: Polynomial::default_for_dim(require_dim()?),
                },
                Coercivity::Coercive,
            ),
        },
        other => return Err(Error::UnknownCatalogEntry(other.to_string())),
    };

    let spec = match field {
        CatalogField::IdentityPlusRotation2d => FieldSpec::from_catalog(CatalogField::Identity { dim: 2 })
            .sum(&FieldSpec::from_catalog(CatalogField::Rotation2d))?,
        ref f => FieldSpec::from_catalog(f.clone()),
    };
    Ok((spec, CatalogEntry { field, coercivity }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn full_catalog() -> Vec<(FieldSpec, CatalogEntry)> {
        let p = CatalogParams {
            matrix: Some(vec![1.0, 2.0, -0.5, 0.0, 1.0, 3.0, 0.25, -1.0, 2.0]),
            constant: Some(vec![1.0, -2.0, 0.5]),
            polynomial: None,
        };
        vec![
            catalog_lookup("identity", Some(3), &p).unwrap(),
            catalog_lookup("constant", None, &p).unwrap(),
            catalog_lookup("linear", None, &p).unwrap(),
            catalog_lookup("rotation2d", None, &p).unwrap(),
            catalog_lookup("gradient-polynomial", Some(3), &p).unwrap(),
            catalog_lookup("cubic-radial", Some(4), &p).unwrap(),
            catalog_lookup("identity-plus-rotation2d", None, &p).unwrap(),
        ]
    }

    #[test]
    fn every_name_is_resolvable() {
        let names: Vec<_> = full_catalog().iter().map(|(_, e)| e.name()).collect();
        assert_eq!(names, CATALOG_NAMES);
    }

    #[test]
    fn closed_forms_sum_to_field_and_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (spec, entry) in full_catalog() {
            for _ in 0..200 {
                let x: Vec<f64> = (0..spec.dim()).map(|_| rng.gen_range(-10.0..10.0)).collect();
                let value = spec.evaluate(&x).unwrap();
                let c = entry.conservative(&x);
                let u = entry.sphere_invariant(&x);
                for i in 0..x.len() {
                    let sum = c[i] + u[i];
                    assert!(
                        (sum - value[i]).abs() <= 1e-12 * (1.0 + value[i].abs()),
                        "{}: {sum} vs {}",
                        entry.name(),
                        value[i]
                    );
                }
                let ortho = dot(&u, &x).abs();
                assert!(ortho <= 1e-12 * (1.0 + norm(&x) * norm(&u)), "{}: {ortho}", entry.name());
                assert_eq!(entry.potential(&vec![0.0; x.len()]), 0.0);
            }
        }
    }

    #[test]
    fn lookup_examples() {
        let p = CatalogParams {
            matrix: Some(vec![1.0, 2.0, 0.0, 1.0]),
            ..Default::default()
        };
        let (_, linear) = catalog_lookup("linear", Some(2), &p).unwrap();
        assert_eq!(linear.conservative(&[1.0, 0.0]), vec![1.0, 1.0]);
        assert_eq!(linear.conservative(&[0.0, 1.0]), vec![1.0, 1.0]);
        assert_eq!(linear.sphere_invariant(&[1.0, 0.0]), vec![0.0, -1.0]);
        assert_eq!(linear.potential(&[1.0, 0.0]), 0.5);
        assert_eq!(linear.coercivity, Coercivity::NotCoercive);

        let (_, identity) = catalog_lookup("identity", Some(3), &p).unwrap();
        assert_eq!(identity.potential(&[0.0, 2.0, 0.0]), 2.0);
        assert_eq!(identity.sphere_invariant(&[1.0, 2.0, 3.0]), vec![0.0; 3]);
        assert_eq!(identity.coercivity, Coercivity::Coercive);

        let (rot, rotation) = catalog_lookup("rotation2d", None, &p).unwrap();
        assert_eq!(rotation.potential(&[3.0, 1.0]), 0.0);
        assert_eq!(rotation.sphere_invariant(&[3.0, 1.0]), rot.evaluate(&[3.0, 1.0]).unwrap());
        assert_eq!(rotation.coercivity, Coercivity::NotCoercive);
    }

    #[test]
    fn lookup_errors() {
        let none = CatalogParams::default();
        assert!(matches!(
            catalog_lookup("spiral", Some(2), &none),
            Err(Error::UnknownCatalogEntry(_))
        ));
        assert!(catalog_lookup("identity", None, &none).is_err());
        assert!(catalog_lookup("rotation2d", Some(3), &none).is_err());
        assert!(catalog_lookup("linear", Some(2), &none).is_err());
        let bad_matrix = CatalogParams {
            matrix: Some(vec![1.0, 2.0, 3.0]),
            ..Default::default()
        };
        assert!(catalog_lookup("linear", None, &bad_matrix).is_err());
        assert!(catalog_lookup("constant", Some(2), &none).is_err());
    }

    #[test]
    fn positive_definite_detection() {
        let pd = SquareMatrix::from_flat(vec![1.0, -1.0, 1.0, 1.0]).unwrap();
        assert!(pd.has_positive_definite_symmetric_part());
        let singular = SquareMatrix::from_flat(vec![1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(!singular.has_positive_definite_symmetric_part());
    }

    #[test]
    fn polynomial_text_round_trips() {
        let p = Polynomial::default_for_dim(3);
        let q = Polynomial::parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
        assert!(Polynomial::parse("1.0:1,2 2.0:1").is_err());
        assert!(Polynomial::parse("").is_err());
    }

    #[test]
    fn polynomial_gradient_matches_hand_derivative() {
        // H = 2 x1^2 x2 + x2^3
        let p = Polynomial::parse("2:2,1 1:0,3").unwrap();
        let mut g = [0.0; 2];
        p.gradient_into(&[1.5, -2.0], &mut g);
        assert_eq!(g, [4.0 * 1.5 * -2.0, 2.0 * 1.5 * 1.5 + 3.0 * 4.0]);
    }
}
