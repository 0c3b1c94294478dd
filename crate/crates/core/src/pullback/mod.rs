//! Pullbacks of foliations along polynomial submersions, vertical
//! foliations, pushforward along coordinate projections and bisubmersions.
//!
//! `pi^-1 F` is generated by the vertical fields (the kernel of `dpi`) and
//! one lift `L_i` per generator `X_i` of `F`, where `J L_i = h^m (X_i o pi)`
//! is solved over the source ring localized at its avoid product `h`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::algebra::{AlgebraError, FreeModuleElement, Polynomial, Submodule, solve_linear_local};
use crate::foliation::{EqualityReport, FoliationError, SingularFoliation};
use crate::geometry::{GeometryError, PolyMap, SubmersionCertificate, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PullbackError {
    #[error("map {map} is not a submersion: {reason}")]
    NotSubmersion { map: String, reason: String },
    #[error("no polynomial lift of generator {generator} along {map}")]
    LiftUnavailable { map: String, generator: usize },
    #[error("map {map} is not a coordinate projection")]
    NotProjection { map: String },
    #[error("maps {first} and {second} do not share a source chart")]
    SourceMismatch { first: String, second: String },
    #[error(transparent)]
    Foliation(#[from] FoliationError),
}

impl From<GeometryError> for PullbackError {
    fn from(e: GeometryError) -> Self {
        PullbackError::Foliation(e.into())
    }
}

impl From<AlgebraError> for PullbackError {
    fn from(e: AlgebraError) -> Self {
        PullbackError::Foliation(e.into())
    }
}

impl PullbackError {
    pub fn is_cap(&self) -> bool {
        matches!(self, PullbackError::Foliation(e) if e.is_cap())
    }
}

/// A lift `L` with `J L = h^power (X o pi)`; unique up to vertical fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftResult {
    pub lift: VectorField,
    pub power: u32,
}

/// `pi^-1 F` together with the data it was built from.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub foliation: SingularFoliation,
    pub submersion: SubmersionCertificate,
    pub vertical: Vec<VectorField>,
    pub lifts: Vec<LiftResult>,
}

fn require_submersion(pi: &PolyMap) -> Result<SubmersionCertificate, PullbackError> {
    let cert = pi.submersion_certificate(&[])?;
    if let SubmersionCertificate::Failed { reason, .. } = &cert {
        return Err(PullbackError::NotSubmersion { map: pi.name().to_string(), reason: reason.clone() });
    }
    Ok(cert)
}

/// Kernel fields of `dpi`: syzygies of the Jacobian columns.
fn vertical_fields(pi: &PolyMap) -> Result<Vec<VectorField>, PullbackError> {
    let source = pi.source();
    let p = source.dim();
    let n = pi.target().dim();
    if n == 0 {
        return Ok((0..p).map(|i| VectorField::coordinate(source, i)).collect());
    }
    let jac = pi.jacobian();
    let cols: Vec<FreeModuleElement> =
        (0..p).map(|b| FreeModuleElement::with_ring(p, jac.iter().map(|row| row[b].clone()).collect())).collect();
    let syz = Submodule::new(p, n, cols)?.syzygies()?;
    Ok(syz
        .into_generators()
        .into_iter()
        .map(|s| VectorField::from_element(source, s))
        .collect::<Result<Vec<_>, _>>()?)
}

fn foliation_or_zero(chart: &alloc::sync::Arc<crate::geometry::Chart>, mut gens: Vec<VectorField>) -> Result<SingularFoliation, PullbackError> {
    gens.retain(|g| !g.is_zero());
    if gens.is_empty() {
        gens.push(VectorField::zero(chart));
    }
    Ok(SingularFoliation::new(chart, gens)?.checked()?)
}

/// The foliation by the fibers of `pi`, `Gamma(ker dpi)`.
pub fn vertical_foliation(pi: &PolyMap) -> Result<SingularFoliation, PullbackError> {
    require_submersion(pi)?;
    foliation_or_zero(pi.source(), vertical_fields(pi)?)
}

/// Lift of `x` (a field on the target) along `pi`.
pub fn lift(pi: &PolyMap, x: &VectorField) -> Result<Option<LiftResult>, PullbackError> {
    if x.chart() != pi.target() {
        return Err(GeometryError::ChartMismatch { expected: pi.target().name().to_string(), found: x.chart().name().to_string() }.into());
    }
    let rhs: Vec<Polynomial> = x.components().iter().map(|c| pi.pull_back(c)).collect();
    let h = pi.source().avoid_product();
    match solve_linear_local(&pi.jacobian(), &rhs, &h)? {
        Some(cert) => Ok(Some(LiftResult { lift: VectorField::new(pi.source(), cert.coefficients)?, power: cert.power })),
        None => Ok(None),
    }
}

/// `pi^-1 F`, with the vertical generators and the lifts that produced it.
pub fn pullback(pi: &PolyMap, f: &SingularFoliation) -> Result<Pullback, PullbackError> {
    if f.chart() != pi.target() {
        return Err(GeometryError::ChartMismatch { expected: pi.target().name().to_string(), found: f.chart().name().to_string() }.into());
    }
    let submersion = require_submersion(pi)?;
    let report = f.is_involutive()?;
    if let Some(fail) = report.failure {
        return Err(FoliationError::NotInvolutive { i: fail.i, j: fail.j }.into());
    }
    let vertical = vertical_fields(pi)?;
    let mut lifts = Vec::with_capacity(f.generators().len());
    for (i, x) in f.generators().iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let l = lift(pi, x)?.ok_or(PullbackError::LiftUnavailable { map: pi.name().to_string(), generator: i })?;
        lifts.push(l);
    }
    let mut gens = vertical.clone();
    gens.extend(lifts.iter().map(|l| l.lift.clone()));
    let foliation = foliation_or_zero(pi.source(), gens)?;
    Ok(Pullback { foliation, submersion, vertical, lifts })
}

/// `pi^-1 F` alone.
pub fn pullback_foliation(pi: &PolyMap, f: &SingularFoliation) -> Result<SingularFoliation, PullbackError> {
    Ok(pullback(pi, f)?.foliation)
}

/// Compares `(pi o rho)^-1 F` with `rho^-1 (pi^-1 F)`.
pub fn functoriality_check(pi: &PolyMap, rho: &PolyMap, f: &SingularFoliation) -> Result<EqualityReport, PullbackError> {
    let composite = PolyMap::compose(pi, rho)?;
    let direct = pullback_foliation(&composite, f)?;
    let stepwise = pullback_foliation(rho, &pullback_foliation(pi, f)?)?;
    Ok(direct.equals(&stepwise)?)
}

#[derive(Clone, Debug)]
pub enum Pushforward {
    /// `F_M` with the certified equality `pi^-1 F_M = F_P`.
    Pushed { foliation: SingularFoliation, round_trip: EqualityReport },
    /// Some fiber direction `d/dw` is missing from `F_P`; lists the source
    /// indices of those `w`.
    MissingVertical { missing: Vec<usize> },
    /// The candidate built from base-only fields does not pull back to `F_P`.
    NotAPullback { candidate: SingularFoliation, round_trip: EqualityReport },
}

/// The foliation `F_M` on the base of a coordinate projection with
/// `pi^-1 F_M = F_P`, when it exists.
pub fn pushforward_foliation(pi: &PolyMap, fp: &SingularFoliation) -> Result<Pushforward, PullbackError> {
    let kept = pi.as_projection().ok_or(PullbackError::NotProjection { map: pi.name().to_string() })?;
    let source = pi.source();
    if fp.chart() != source {
        return Err(GeometryError::ChartMismatch { expected: source.name().to_string(), found: fp.chart().name().to_string() }.into());
    }
    let p = source.dim();
    let fiber: Vec<usize> = (0..p).filter(|i| !kept.contains(i)).collect();
    let mut missing = Vec::new();
    for &w in &fiber {
        if fp.contains(&VectorField::coordinate(source, w))?.is_none() {
            missing.push(w);
        }
    }
    if !missing.is_empty() {
        return Ok(Pushforward::MissingVertical { missing });
    }
    // With every d/dw in F_P, the base components of F_P form a module that
    // is extended from the base ring; eliminating w recovers F_M.
    let base_parts: Vec<FreeModuleElement> = fp
        .saturated_basis()
        .generators()
        .iter()
        .map(|g| FreeModuleElement::with_ring(p, kept.iter().map(|&i| g.component(i).clone()).collect()))
        .filter(|e| !e.is_zero())
        .collect();
    let module = Submodule::new(p, kept.len(), base_parts)?.eliminate(&fiber)?;
    // `eliminate` numbers the remaining variables in source order; reorder
    // them to the target's coordinate order.
    let n = kept.len();
    let mut sorted = kept.clone();
    sorted.sort_unstable();
    let to_target: Vec<usize> = sorted.iter().map(|v| kept.iter().position(|k| k == v).expect("kept")).collect();
    let gens: Vec<VectorField> = module
        .into_generators()
        .into_iter()
        .map(|e| VectorField::from_element(pi.target(), e.embed(n, &to_target)))
        .collect::<Result<_, _>>()?;
    let candidate = foliation_or_zero(pi.target(), gens)?;
    let round_trip = pullback_foliation(pi, &candidate)?.equals(fp)?;
    if round_trip.equal {
        Ok(Pushforward::Pushed { foliation: candidate, round_trip })
    } else {
        Ok(Pushforward::NotAPullback { candidate, round_trip })
    }
}

#[derive(Clone, Debug)]
pub struct BisubmersionReport {
    pub s_pullback: SingularFoliation,
    pub t_pullback: SingularFoliation,
    pub vertical_sum: SingularFoliation,
    pub vertical_sum_involutive: bool,
    /// `s^-1 F_M = t^-1 F_N`.
    pub pullbacks_equal: EqualityReport,
    /// `s^-1 F_M = ker ds + ker dt`.
    pub s_matches_verticals: EqualityReport,
    /// `t^-1 F_N = ker ds + ker dt`.
    pub t_matches_verticals: EqualityReport,
}

impl BisubmersionReport {
    pub fn is_bisubmersion(&self) -> bool {
        self.pullbacks_equal.equal && self.s_matches_verticals.equal && self.t_matches_verticals.equal
    }
}

/// Checks `s^-1 F_M = t^-1 F_N = Gamma(ker ds) + Gamma(ker dt)`.
pub fn bisubmersion_check(
    s: &PolyMap,
    t: &PolyMap,
    fm: &SingularFoliation,
    fnn: &SingularFoliation,
) -> Result<BisubmersionReport, PullbackError> {
    if s.source() != t.source() {
        return Err(PullbackError::SourceMismatch { first: s.name().to_string(), second: t.name().to_string() });
    }
    let s_pullback = pullback_foliation(s, fm)?;
    let t_pullback = pullback_foliation(t, fnn)?;
    let mut sum = vertical_fields(s)?;
    sum.extend(vertical_fields(t)?);
    let vertical_sum = foliation_or_zero(s.source(), sum)?;
    let vertical_sum_involutive = vertical_sum.is_involutive()?.ok;
    let pullbacks_equal = s_pullback.equals(&t_pullback)?;
    let s_matches_verticals = s_pullback.equals(&vertical_sum)?;
    let t_matches_verticals = t_pullback.equals(&vertical_sum)?;
    Ok(BisubmersionReport {
        s_pullback,
        t_pullback,
        vertical_sum,
        vertical_sum_involutive,
        pullbacks_equal,
        s_matches_verticals,
        t_matches_verticals,
    })
}

#[cfg(test)]
mod tests;
