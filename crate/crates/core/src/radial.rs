//! Radial analysis: the profile `phi(x) = <X(x), x> / |x|`, empirical
//! coercivity probing, and sampled boundary certificates on spheres.
//!
//! Coercivity is a limit as `|x| -> inf` and no finite probe decides it.
//! Verdicts are evidence-graded and the growth rules below are heuristics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Domain, FieldSpec};
use crate::presnov::conservative_field;
use crate::quadrature::QuadratureConfig;
use crate::sampling::sphere_directions;
use crate::vector::dot;

/// Ratio below which shrinking increments count as a bounded profile.
const BOUNDED_DECAY_RATIO: f64 = 0.75;

pub const PROBE_NOTE: &str = "heuristic: coercivity is a limit; verdicts summarize finite probe evidence and are not proofs";

pub const CERTIFICATE_NOTE: &str = "sample-based: necessary but not sufficient evidence for strict positivity on the whole sphere; \
     since <grad H_X(x), x> = <X(x), x>, the same certificate applies to the conservative part";

/// Default number of directions per sphere.
pub fn default_direction_count(dim: usize) -> usize {
    if dim <= 3 {
        256
    } else {
        1024
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub r0: f64,
    pub factor: f64,
    pub count: usize,
    /// Directions per sphere; `None` picks [`default_direction_count`].
    pub directions: Option<usize>,
    pub seed: u64,
    /// Final minimum must exceed the first by this factor.
    pub growth_factor: f64,
    /// Relative size below which profile changes are treated as noise.
    pub significance: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            r0: 1.0,
            factor: 2.0,
            count: 12,
            directions: None,
            seed: 0,
            growth_factor: 4.0,
            significance: 1e-8,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.r0.is_finite() && self.r0 > 0.0) {
            return bad("probe r0 must be positive");
        }
        if !(self.factor.is_finite() && self.factor > 1.0) {
            return bad("probe factor must exceed 1");
        }
        if self.count < 3 {
            return bad("probe schedule needs at least 3 radii");
        }
        if self.directions == Some(0) {
            return bad("probe needs at least one direction");
        }
        if !(self.growth_factor >= 1.0) {
            return bad("growth factor must be at least 1");
        }
        if !(self.significance >= 0.0) {
            return bad("significance must be non-negative");
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.r0 * self.factor.powi(k as i32)).collect()
    }

    pub fn direction_count(&self, dim: usize) -> usize {
        self.directions.unwrap_or_else(|| default_direction_count(dim))
    }
}

/// `phi(r d) = <X(r d), r d> / r` for each unit direction `d`.
pub fn radial_profile(field: &FieldSpec, radius: f64, directions: &[Vec<f64>]) -> Result<Vec<f64>> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidConfig(format!("radius must be positive, got {radius}")));
    }
    let values: Vec<Result<f64>> = directions
        .par_iter()
        .map(|d| {
            let x: Vec<f64> = d.iter().map(|c| radius * c).collect();
            Ok(field.radial_component(&x)? / radius)
        })
        .collect();
    values.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// Profile did not increase (beyond noise) over `radii` consecutive radii
    /// starting at schedule index `from`.
    NonIncreasing { from: usize, radii: usize },
    /// Increments shrink geometrically; `bound` is the extrapolated supremum.
    BoundedAbove { bound: f64, decay_ratio: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub direction_index: usize,
    pub direction: Vec<f64>,
    /// Probe point on the last sphere along the witness direction.
    pub point: Vec<f64>,
    pub profile: Vec<f64>,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    EmpiricallyCoercive,
    NotCoerciveWitness,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    EmpiricallyCoercive,
    NotCoerciveWitness(Witness),
    Inconclusive,
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::EmpiricallyCoercive => VerdictKind::EmpiricallyCoercive,
            Verdict::NotCoerciveWitness(_) => VerdictKind::NotCoerciveWitness,
            Verdict::Inconclusive => VerdictKind::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProbeReport {
    pub radii: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    /// `profile[k][j]` is the profile at radius `k` along direction `j`.
    pub profile: Vec<Vec<f64>>,
    pub min_per_radius: Vec<f64>,
    pub argmin_per_radius: Vec<usize>,
    pub verdict: Verdict,
    pub growth_factor: f64,
    pub significance: f64,
    pub note: String,
}

fn noise_floor(row: &[f64], significance: f64) -> f64 {
    significance * (1.0 + row.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

fn argmin(row: &[f64]) -> (usize, f64) {
    row.iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) })
}

fn direction_evidence(series: &[f64], floors: &[f64]) -> Option<Evidence> {
    let k = series.len();
    let mut run_start = 0;
    for j in 1..k {
        if series[j] <= series[j - 1] + floors[j] {
            if j - run_start + 1 >= 3 {
                return Some(Evidence::NonIncreasing {
                    from: run_start,
                    radii: j - run_start + 1,
                });
            }
        } else {
            run_start = j;
        }
    }
    if k >= 4 {
        let incs: Vec<f64> = (k - 3..k).map(|j| series[j] - series[j - 1]).collect();
        let significant = incs.iter().zip(&floors[k - 3..]).all(|(d, f)| *d > *f);
        if significant {
            let ratio = (incs[1] / incs[0]).max(incs[2] / incs[1]);
            if ratio <= BOUNDED_DECAY_RATIO {
                return Some(Evidence::BoundedAbove {
                    bound: series[k - 1] + incs[2] * ratio / (1.0 - ratio),
                    decay_ratio: ratio,
                });
            }
        }
    }
    None
}

fn classify(
    radii: &[f64],
    directions: &[Vec<f64>],
    profile: &[Vec<f64>],
    mins: &[f64],
    cfg: &ProbeConfig,
) -> Verdict {
    let floors: Vec<f64> = profile.iter().map(|row| noise_floor(row, cfg.significance)).collect();

    let increasing = mins.windows(2).zip(&floors[1..]).all(|(w, f)| w[1] - w[0] > *f);
    let (first, last) = (mins[0], mins[mins.len() - 1]);
    let grows = last > 0.0 && last - first >= (cfg.growth_factor - 1.0) * first.abs();
    if increasing && grows {
        return Verdict::EmpiricallyCoercive;
    }

    let last_radius = radii[radii.len() - 1];
    let mut best: Option<(f64, Witness)> = None;
    for (j, d) in directions.iter().enumerate() {
        let series: Vec<f64> = profile.iter().map(|row| row[j]).collect();
        if let Some(evidence) = direction_evidence(&series, &floors) {
            let final_value = series[series.len() - 1];
            if best.as_ref().map_or(true, |(v, _)| final_value < *v) {
                best = Some((
                    final_value,
                    Witness {
                        direction_index: j,
                        direction: d.clone(),
                        point: d.iter().map(|c| c * last_radius).collect(),
                        profile: series,
                        evidence,
                    },
                ));
            }
        }
    }
    match best {
        Some((_, w)) => Verdict::NotCoerciveWitness(w),
        None => Verdict::Inconclusive,
    }
}

fn probe_directions(field: &FieldSpec, cfg: &ProbeConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    if field.domain() != Domain::FullSpace {
        return Err(Error::FullSpaceRequired);
    }
    Ok(sphere_directions(field.dim(), cfg.direction_count(field.dim()), cfg.seed))
}

fn probe_with(field: &FieldSpec, directions: Vec<Vec<f64>>, cfg: &ProbeConfig) -> Result<RadialProbeReport> {
    let radii = cfg.radii();
    let profile = radii
        .iter()
        .map(|&r| radial_profile(field, r, &directions))
        .collect::<Result<Vec<_>>>()?;
    let (argmins, mins): (Vec<usize>, Vec<f64>) = profile.iter().map(|row| argmin(row)).unzip();
    let verdict = classify(&radii, &directions, &profile, &mins, cfg);
    Ok(RadialProbeReport {
        radii,
        directions,
        profile,
        min_per_radius: mins,
        argmin_per_radius: argmins,
        verdict,
        growth_factor: cfg.growth_factor,
        significance: cfg.significance,
        note: PROBE_NOTE.to_string(),
    })
}

/// Samples the radial profile over the geometric radius schedule and grades
/// the evidence for coercivity.
pub fn coercivity_probe(field: &FieldSpec, cfg: &ProbeConfig) -> Result<RadialProbeReport> {
    let directions = probe_directions(field, cfg)?;
    probe_with(field, directions, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedProbeReport {
    pub field: RadialProbeReport,
    pub conservative: RadialProbeReport,
    /// Max over probe points of `|phi_X - phi_gradH|`.
    pub max_discrepancy: f64,
    /// Max over probe points of `|phi_X - phi_gradH| / (1 + |phi_X|)`.
    pub max_normalized_discrepancy: f64,
    pub verdicts_agree: bool,
}

/// Probes `X` and `grad H_X` at identical points. Their profiles coincide
/// pointwise, so coercivity of one is coercivity of the other.
pub fn paired_probe(field: &FieldSpec, cfg: &ProbeConfig, qcfg: &QuadratureConfig) -> Result<PairedProbeReport> {
    qcfg.validate()?;
    let directions = probe_directions(field, cfg)?;
    let x_report = probe_with(field, directions.clone(), cfg)?;
    let h_report = probe_with(&conservative_field(field, qcfg), directions, cfg)?;

    let mut max_discrepancy = 0.0f64;
    let mut max_normalized = 0.0f64;
    for (row_x, row_h) in x_report.profile.iter().zip(&h_report.profile) {
        for (px, ph) in row_x.iter().zip(row_h) {
            let d = (px - ph).abs();
            max_discrepancy = max_discrepancy.max(d);
            max_normalized = max_normalized.max(d / (1.0 + px.abs()));
        }
    }
    Ok(PairedProbeReport {
        verdicts_agree: x_report.verdict.kind() == h_report.verdict.kind(),
        field: x_report,
        conservative: h_report,
        max_discrepancy,
        max_normalized_discrepancy: max_normalized,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateConfig {
    /// Sphere samples; `None` picks [`default_direction_count`].
    pub samples: Option<usize>,
    pub seed: u64,
    /// Required lower bound; the condition is `<X(x), x> > threshold`.
    pub threshold: f64,
    /// When set, `<grad H_X(x), x>` is evaluated on the same samples.
    pub conservative_check: Option<QuadratureConfig>,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        CertificateConfig {
            samples: None,
            seed: 0,
            threshold: 0.0,
            conservative_check: Some(QuadratureConfig::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservativeCheck {
    pub min_radial: f64,
    pub status: CertificateStatus,
    /// Max over samples of `|<X,x> - <grad H_X,x>| / (1 + |<X,x>|)`.
    pub max_normalized_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCertificate {
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub threshold: f64,
    /// Min over samples of `<X(x), x>`.
    pub min_radial: f64,
    pub argmin: Vec<f64>,
    /// `min_radial - threshold`
    pub margin: f64,
    pub status: CertificateStatus,
    pub conservative: Option<ConservativeCheck>,
    pub note: String,
}

impl BoundaryCertificate {
    pub fn passed(&self) -> bool {
        self.status == CertificateStatus::Pass
    }
}

/// Samples `<X(x), x>` on the sphere of `radius` and certifies strict
/// positivity (above `threshold`) at every sample.
pub fn boundary_certificate(field: &FieldSpec, radius: f64, cfg: &CertificateConfig) -> Result<BoundaryCertificate> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidConfig(format!("certificate radius must be positive, got {radius}")));
    }
    if let Domain::ClosedBall { radius: dr } = field.domain() {
        if radius > dr {
            return Err(Error::OutsideDomain {
                at: vec![radius],
                radius: dr,
            });
        }
    }
    if cfg.samples == Some(0) {
        return Err(Error::InvalidConfig("certificate needs at least one sample".into()));
    }
    let m = cfg.samples.unwrap_or_else(|| default_direction_count(field.dim()));
    let points: Vec<Vec<f64>> = sphere_directions(field.dim(), m, cfg.seed)
        .into_iter()
        .map(|d| d.into_iter().map(|c| c * radius).collect())
        .collect();

    let radial: Vec<Result<f64>> = points.par_iter().map(|x| field.radial_component(x)).collect();
    let radial: Vec<f64> = radial.into_iter().collect::<Result<_>>()?;
    let (imin, min_radial) = argmin(&radial);
    let status = if min_radial > cfg.threshold {
        CertificateStatus::Pass
    } else {
        CertificateStatus::Fail
    };

    let conservative = match &cfg.conservative_check {
        None => None,
        Some(qcfg) => {
            let grad = conservative_field(field, qcfg);
            let values: Vec<Result<f64>> = points
                .par_iter()
                .map(|x| {
                    let mut g = vec![0.0; x.len()];
                    crate::field::VectorField::eval_into(&grad, x, &mut g)?;
                    Ok(dot(&g, x))
                })
                .collect();
            let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
            let (_, cmin) = argmin(&values);
            let disc = radial
                .iter()
                .zip(&values)
                .map(|(a, b)| (a - b).abs() / (1.0 + a.abs()))
                .fold(0.0, f64::max);
            Some(ConservativeCheck {
                min_radial: cmin,
                status: if cmin > cfg.threshold {
                    CertificateStatus::Pass
                } else {
                    CertificateStatus::Fail
                },
                max_normalized_discrepancy: disc,
            })
        }
    };

    Ok(BoundaryCertificate {
        radius,
        samples: points.len(),
        seed: cfg.seed,
        threshold: cfg.threshold,
        min_radial,
        argmin: points[imin].clone(),
        margin: min_radial - cfg.threshold,
        status,
        conservative,
        note: CERTIFICATE_NOTE.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_lookup, CatalogParams};
    use crate::expr::parse_field;

    fn catalog(name: &str, dim: Option<usize>, params: CatalogParams) -> FieldSpec {
        catalog_lookup(name, dim, &params).unwrap().0
    }

    fn identity(n: usize) -> FieldSpec {
        catalog("identity", Some(n), CatalogParams::default())
    }

    fn small_probe() -> ProbeConfig {
        ProbeConfig {
            directions: Some(64),
            ..Default::default()
        }
    }

    #[test]
    fn profile_examples() {
        let dirs = sphere_directions(3, 16, 1);
        for v in radial_profile(&identity(3), 7.0, &dirs).unwrap() {
            assert!((v - 7.0).abs() < 1e-13);
        }

        let c = catalog(
            "constant",
            None,
            CatalogParams {
                constant: Some(vec![1.0, 0.0]),
                ..Default::default()
            },
        );
        let dirs = sphere_directions(2, 16, 1);
        let a = radial_profile(&c, 1.0, &dirs).unwrap();
        let b = radial_profile(&c, 1000.0, &dirs).unwrap();
        for ((pa, pb), d) in a.iter().zip(&b).zip(&dirs) {
            assert!((pa - d[0]).abs() < 1e-15 && (pb - d[0]).abs() < 1e-12);
        }

        let cubic = catalog("cubic-radial", Some(3), CatalogParams::default());
        for v in radial_profile(&cubic, 3.0, &sphere_directions(3, 16, 2)).unwrap() {
            assert!((v - 27.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probe_verdicts() {
        let r = coercivity_probe(&identity(2), &small_probe()).unwrap();
        assert_eq!(r.verdict, Verdict::EmpiricallyCoercive);
        assert_eq!(r.min_per_radius.len(), 12);

        let rot = catalog("rotation2d", None, CatalogParams::default());
        let r = coercivity_probe(&rot, &small_probe()).unwrap();
        assert!(matches!(
            r.verdict,
            Verdict::NotCoerciveWitness(Witness {
                evidence: Evidence::NonIncreasing { from: 0, .. },
                ..
            })
        ));

        let c = catalog(
            "constant",
            None,
            CatalogParams {
                constant: Some(vec![1.0, -2.0, 0.5]),
                ..Default::default()
            },
        );
        let r = coercivity_probe(&c, &small_probe()).unwrap();
        assert_eq!(r.verdict.kind(), VerdictKind::NotCoerciveWitness);
    }

    #[test]
    fn bounded_profile_witness() {
        // phi = r / (1 + r): increasing, bounded by 1
        let f = parse_field("x1 / (1 + sqrt(norm2())); x2 / (1 + sqrt(norm2()))", 2).unwrap();
        let r = coercivity_probe(&f, &small_probe()).unwrap();
        match r.verdict {
            Verdict::NotCoerciveWitness(w) => match w.evidence {
                Evidence::BoundedAbove { bound, .. } => assert!((bound - 1.0).abs() < 1e-3, "{bound}"),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singular_symmetric_part_is_not_coercive() {
        let lin = catalog(
            "linear",
            None,
            CatalogParams {
                matrix: Some(vec![1.0, 2.0, 0.0, 1.0]),
                ..Default::default()
            },
        );
        let r = coercivity_probe(&lin, &ProbeConfig::default()).unwrap();
        assert_eq!(r.verdict.kind(), VerdictKind::NotCoerciveWitness, "{:?}", r.min_per_radius);
    }

    #[test]
    fn probe_rejects_ball_fields_and_bad_config() {
        let f = identity(2).with_domain(Domain::closed_ball(3.0).unwrap());
        assert_eq!(coercivity_probe(&f, &small_probe()), Err(Error::FullSpaceRequired));
        let bad = ProbeConfig {
            factor: 1.0,
            ..Default::default()
        };
        assert!(coercivity_probe(&identity(2), &bad).is_err());
    }

    #[test]
    fn paired_probe_examples() {
        let q = QuadratureConfig::default();
        let f = catalog("identity-plus-rotation2d", None, CatalogParams::default());
        let p = paired_probe(&f, &small_probe(), &q).unwrap();
        assert_eq!(p.field.verdict, Verdict::EmpiricallyCoercive);
        assert_eq!(p.conservative.verdict, Verdict::EmpiricallyCoercive);
        assert!(p.max_normalized_discrepancy <= 1e-6);

        let rot = catalog("rotation2d", None, CatalogParams::default());
        let p = paired_probe(&rot, &small_probe(), &q).unwrap();
        assert!(p.verdicts_agree);
        assert_eq!(p.field.verdict.kind(), VerdictKind::NotCoerciveWitness);
        assert!(p.conservative.profile.iter().flatten().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn probe_is_deterministic() {
        let f = parse_field("x1 + sin(x2); x2^3 - x1", 2).unwrap();
        let a = coercivity_probe(&f, &small_probe()).unwrap();
        let b = coercivity_probe(&f, &small_probe()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn certificate_examples() {
        let cfg = CertificateConfig::default();
        let c = boundary_certificate(&identity(2), 1.0, &cfg).unwrap();
        assert!(c.passed());
        assert!((c.min_radial - 1.0).abs() < 1e-14);
        let cons = c.conservative.unwrap();
        assert_eq!(cons.status, CertificateStatus::Pass);
        assert!(cons.max_normalized_discrepancy < 1e-8);

        let shifted = identity(2).shift(&[3.0, -4.0]).unwrap();
        let c = boundary_certificate(&shifted, 6.0, &cfg).unwrap();
        assert!(c.passed());
        // exact minimum r^2 - |b| r = 6, attained at -b/|b|
        assert!(c.min_radial >= 6.0 - 1e-12 && c.min_radial < 6.01, "{}", c.min_radial);

        let c = boundary_certificate(&shifted, 4.0, &cfg).unwrap();
        assert!(!c.passed());
        assert!(c.min_radial >= -4.0 - 1e-12 && c.min_radial < -3.99, "{}", c.min_radial);
        assert!(c.margin < 0.0);
    }

    #[test]
    fn certificate_shifts_by_radial_boost() {
        let f = parse_field("x2 - x1^3 + 0.5; sin(x1) * x2", 2).unwrap();
        let cfg = CertificateConfig {
            conservative_check: None,
            ..Default::default()
        };
        let lambda = 2.5;
        let r = 1.7;
        let boosted = f.sum(&identity(2).scale(lambda).unwrap()).unwrap();
        let a = boundary_certificate(&f, r, &cfg).unwrap();
        let b = boundary_certificate(&boosted, r, &cfg).unwrap();
        assert!((b.min_radial - (a.min_radial + lambda * r * r)).abs() < 1e-12);
    }
}
