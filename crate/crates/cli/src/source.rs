//! Field and point sources shared by all subcommands.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args};
use presnov_core::sampling::ball_points;
use presnov_core::{
    catalog_lookup, parse_field, parse_field_infer_dim, CatalogParams, Coercivity, Domain, FieldSpec, Point,
    Polynomial,
};
use serde::Serialize;

use crate::UsageError;

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("field_source").required(true).multiple(false)))]
pub struct FieldArgs {
    /// Catalog entry name (identity, constant, linear, rotation2d,
    /// gradient-polynomial, cubic-radial, identity-plus-rotation2d)
    #[arg(long, group = "field_source")]
    pub catalog: Option<String>,

    /// Field components in the expression language, separated by ';'
    #[arg(long, allow_hyphen_values = true, group = "field_source")]
    pub expr: Option<String>,

    /// File holding field components, one per line or ';'-separated
    #[arg(long, group = "field_source")]
    pub expr_file: Option<PathBuf>,

    /// Dimension (required by dimension-generic catalog entries)
    #[arg(long)]
    pub dim: Option<usize>,

    /// Row-major matrix entries for `linear`, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,

    /// Constant vector for `constant`, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    pub constant: Option<String>,

    /// Potential for `gradient-polynomial`, terms `c:e1,...,en` separated by ';'
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,

    /// Restrict the field to the closed ball of this radius
    #[arg(long)]
    pub domain_radius: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct FieldEcho {
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<CatalogParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coercivity: Option<Coercivity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub dim: usize,
    pub domain: Domain,
    pub display: String,
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            let v: f64 = s
                .parse()
                .map_err(|_| UsageError(format!("`{s}` is not a number (in `{text}`)")))?;
            if !v.is_finite() {
                bail!(UsageError(format!("non-finite value `{s}`")));
            }
            Ok(v)
        })
        .collect()
}

impl FieldArgs {
    pub fn build(&self) -> Result<(FieldSpec, FieldEcho)> {
        let (field, mut echo) = if let Some(name) = &self.catalog {
            let params = CatalogParams {
                matrix: self.matrix.as_deref().map(parse_vector).transpose()?,
                constant: self.constant.as_deref().map(parse_vector).transpose()?,
                polynomial: self.poly.as_deref().map(Polynomial::parse).transpose()?,
            };
            let (field, entry) = catalog_lookup(name, self.dim, &params)?;
            let echo = FieldEcho {
                source: "catalog",
                catalog: Some(name.clone()),
                params: Some(params),
                coercivity: Some(entry.coercivity),
                text: None,
                path: None,
                dim: 0,
                domain: Domain::FullSpace,
                display: String::new(),
            };
            (field, echo)
        } else {
            if self.matrix.is_some() || self.constant.is_some() || self.poly.is_some() {
                bail!(UsageError("--matrix, --constant and --poly apply to --catalog only".into()));
            }
            let (text, path, source) = match (&self.expr, &self.expr_file) {
                (Some(t), _) => (t.clone(), None, "expr"),
                (None, Some(p)) => {
                    let t = fs::read_to_string(p)
                        .with_context(|| format!("reading {}", p.display()))
                        .map_err(|e| UsageError(format!("{e:#}")))?;
                    (t, Some(p.clone()), "expr-file")
                }
                (None, None) => unreachable!("clap enforces a field source"),
            };
            let field = match self.dim {
                Some(n) => parse_field(&text, n)?,
                None => parse_field_infer_dim(&text)?,
            };
            let echo = FieldEcho {
                source,
                catalog: None,
                params: None,
                coercivity: None,
                text: Some(text),
                path,
                dim: 0,
                domain: Domain::FullSpace,
                display: String::new(),
            };
            (field, echo)
        };
        let field = match self.domain_radius {
            Some(r) => field.with_domain(Domain::closed_ball(r)?),
            None => field,
        };
        echo.dim = field.dim();
        echo.domain = field.domain();
        echo.display = field.to_string();
        Ok((field, echo))
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("point_source").required(true).multiple(true)))]
pub struct PointArgs {
    /// Evaluation point, comma-separated (repeatable)
    #[arg(long, allow_hyphen_values = true, group = "point_source")]
    pub at: Vec<String>,

    /// File with one comma-separated point per line
    #[arg(long, group = "point_source")]
    pub points: Option<PathBuf>,

    /// Number of seeded uniform points in a ball
    #[arg(long, group = "point_source")]
    pub sample: Option<usize>,

    /// Radius of the sampling ball
    #[arg(long, default_value_t = 1.0)]
    pub sample_radius: f64,
}

#[derive(Debug, Serialize)]
pub struct PointsEcho {
    pub explicit: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    pub sampled: usize,
    pub sample_radius: f64,
}

fn parse_points_file(text: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_vector(l).with_context(|| format!("points file line {}", i + 1)))
        .collect()
}

impl PointArgs {
    pub fn collect(&self, dim: usize, seed: u64) -> Result<(Vec<Point>, PointsEcho)> {
        let mut raw: Vec<Vec<f64>> = self.at.iter().map(|s| parse_vector(s)).collect::<Result<_>>()?;
        let explicit = raw.len();
        if let Some(p) = &self.points {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading {}", p.display()))
                .map_err(|e| UsageError(format!("{e:#}")))?;
            raw.extend(parse_points_file(&text).map_err(|e| UsageError(format!("{e:#}")))?);
        }
        let from_file = raw.len() - explicit;
        let mut points = Vec::with_capacity(raw.len());
        for v in raw {
            if v.len() != dim {
                bail!(UsageError(format!(
                    "point {v:?} has {} coordinates, the field has dimension {dim}",
                    v.len()
                )));
            }
            points.push(Point::new(v)?);
        }
        let sampled = self.sample.unwrap_or(0);
        if sampled > 0 {
            if !(self.sample_radius > 0.0 && self.sample_radius.is_finite()) {
                bail!(UsageError("--sample-radius must be positive".into()));
            }
            points.extend(ball_points(dim, sampled, self.sample_radius, seed));
        }
        if points.is_empty() {
            bail!(UsageError("no evaluation points given".into()));
        }
        Ok((
            points,
            PointsEcho {
                explicit: explicit + from_file,
                file: self.points.clone(),
                sampled,
                sample_radius: self.sample_radius,
            },
        ))
    }
}
