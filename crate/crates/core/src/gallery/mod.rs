//! Named example constructions with expected values.
//!
//! Each entry builds its charts, foliations, maps and witnesses from scratch
//! and carries a table of expectations. Every expectation names the
//! computation that reproduces it ([`Probe`]) and where the expected value
//! comes from ([`Provenance`]); [`GalleryEntry::verify`] recomputes them all.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Polynomial, Rational};
use crate::foliation::{
    gl_basis, lie_invariants, product_foliation, restrict_to_slice, sl2_basis, so_basis, transformation_foliation,
    FoliationError, SingularFoliation,
};
use crate::geometry::{Chart, FlagStatus, MapAssertions, PolyMap, RationalPoint, VectorField};
use crate::morita::{check_witness, compare_invariants, compose_witnesses, MoritaError, MoritaWitness};
use crate::pullback::{bisubmersion_check, functoriality_check, pullback_foliation, pushforward_foliation, Pushforward};

mod build;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GalleryError {
    #[error("no gallery entry named {0}")]
    UnknownEntry(String),
    #[error("entry {entry} has no object named {object}")]
    UnknownObject { entry: String, object: String },
    #[error("entry {entry}: {label} expected {expected}, computed {actual}")]
    Mismatch { entry: String, label: String, expected: String, actual: String },
    #[error(transparent)]
    Morita(#[from] MoritaError),
}

impl From<FoliationError> for GalleryError {
    fn from(e: FoliationError) -> Self {
        GalleryError::Morita(e.into())
    }
}

impl From<crate::pullback::PullbackError> for GalleryError {
    fn from(e: crate::pullback::PullbackError) -> Self {
        GalleryError::Morita(e.into())
    }
}

impl From<crate::geometry::GeometryError> for GalleryError {
    fn from(e: crate::geometry::GeometryError) -> Self {
        GalleryError::Morita(e.into())
    }
}

impl GalleryError {
    pub fn is_cap(&self) -> bool {
        matches!(self, GalleryError::Morita(e) if e.is_cap())
    }
}

/// Where an expected value comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Stated for this example in the literature.
    Literature,
    /// Immediate from the construction.
    Immediate,
    /// Obtained by an independent computation, named here.
    Computed { oracle: &'static str },
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Literature => "literature",
            Provenance::Immediate => "immediate",
            Provenance::Computed { .. } => "computed",
        }
    }
}

/// A computation over the named objects of an entry; evaluates to a short
/// string compared verbatim with the expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    Involutive { fol: String },
    TangentDim { fol: String, point: String },
    FiberDim { fol: String, point: String },
    IsotropyDim { fol: String, point: String },
    DerivedSeries { fol: String, point: String },
    VanishingOrder { fol: String, point: String },
    /// `equal` or `different`.
    Equal { a: String, b: String },
    Pullback { map: String, fol: String, expected: String },
    Product { a: String, b: String, expected: String },
    /// Tangent dimension of the slice foliation at its base point.
    SliceTangentDim { fol: String, slice: String, point: String },
    /// Verdict label of the witness check.
    Morita { witness: String, fm: String, fnn: String },
    /// Verdict label after composing with the identity witness of the
    /// second foliation's chart.
    ComposeWithIdentity { witness: String, fm: String, fnn: String },
    /// `ok`, or `fails:` followed by the failing equalities.
    Bisubmersion { s: String, t: String, fm: String, fnn: String },
    /// `distinguishes` or `consistent`.
    Compare { fm: String, x: String, fnn: String, y: String },
    Functoriality { pi: String, rho: String, fol: String },
    /// `pushed`, `missing-vertical` or `not-a-pullback`.
    Pushforward { map: String, fol: String, expected: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub label: String,
    pub probe: Probe,
    pub expected: String,
    pub provenance: Provenance,
}

/// An axis-aligned slice declared by an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceSpec {
    pub name: String,
    pub chart: String,
    pub fixed: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    pub description: &'static str,
    pub charts: Vec<Arc<Chart>>,
    pub foliations: Vec<(String, SingularFoliation)>,
    pub maps: Vec<PolyMap>,
    pub witnesses: Vec<MoritaWitness>,
    pub slices: Vec<SliceSpec>,
    pub points: Vec<(String, RationalPoint)>,
    pub expectations: Vec<Expectation>,
}

/// Outcome of one recomputed expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedExpectation {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub provenance: Provenance,
}

impl CheckedExpectation {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

impl GalleryEntry {
    fn missing(&self, object: &str) -> GalleryError {
        GalleryError::UnknownObject { entry: self.name.clone(), object: object.to_string() }
    }

    pub fn foliation(&self, name: &str) -> Result<&SingularFoliation, GalleryError> {
        self.foliations.iter().find(|(n, _)| n == name).map(|(_, f)| f).ok_or_else(|| self.missing(name))
    }

    pub fn map(&self, name: &str) -> Result<&PolyMap, GalleryError> {
        self.maps.iter().find(|m| m.name() == name).ok_or_else(|| self.missing(name))
    }

    pub fn witness(&self, name: &str) -> Result<&MoritaWitness, GalleryError> {
        self.witnesses.iter().find(|w| w.name == name).ok_or_else(|| self.missing(name))
    }

    pub fn point(&self, name: &str) -> Result<&RationalPoint, GalleryError> {
        self.points.iter().find(|(n, _)| n == name).map(|(_, p)| p).ok_or_else(|| self.missing(name))
    }

    pub fn slice(&self, name: &str) -> Result<&SliceSpec, GalleryError> {
        self.slices.iter().find(|s| s.name == name).ok_or_else(|| self.missing(name))
    }

    /// Evaluates a probe against this entry's objects.
    pub fn evaluate(&self, probe: &Probe) -> Result<String, GalleryError> {
        let yes_no = |b: bool, y: &str, n: &str| if b { y.to_string() } else { n.to_string() };
        Ok(match probe {
            Probe::Involutive { fol } => yes_no(self.foliation(fol)?.is_involutive()?.ok, "involutive", "not involutive"),
            Probe::TangentDim { fol, point } => self.foliation(fol)?.tangent_dim(self.point(point)?)?.to_string(),
            Probe::FiberDim { fol, point } => self.foliation(fol)?.fiber_dim(self.point(point)?)?.to_string(),
            Probe::IsotropyDim { fol, point } => self.foliation(fol)?.isotropy_algebra(self.point(point)?)?.dim.to_string(),
            Probe::DerivedSeries { fol, point } => {
                let inv = lie_invariants(&self.foliation(fol)?.isotropy_algebra(self.point(point)?)?);
                let parts: Vec<String> = inv.derived_series_dims.iter().map(ToString::to_string).collect();
                alloc::format!("[{}]", parts.join(","))
            }
            Probe::VanishingOrder { fol, point } => {
                let v = self.foliation(fol)?.vanishing_order(self.point(point)?)?;
                v.order.to_string()
            }
            Probe::Equal { a, b } => yes_no(self.foliation(a)?.equals(self.foliation(b)?)?.equal, "equal", "different"),
            Probe::Pullback { map, fol, expected } => {
                let pb = pullback_foliation(self.map(map)?, self.foliation(fol)?)?;
                yes_no(pb.equals(self.foliation(expected)?)?.equal, "equal", "different")
            }
            Probe::Product { a, b, expected } => {
                let p = product_foliation(self.foliation(a)?, self.foliation(b)?)?;
                yes_no(p.equals(self.foliation(expected)?)?.equal, "equal", "different")
            }
            Probe::SliceTangentDim { fol, slice, point } => {
                let s = self.slice(slice)?;
                let f = restrict_to_slice(self.foliation(fol)?, &s.fixed, self.point(point)?)?;
                let coords: Vec<Rational> = (0..self.point(point)?.coords().len())
                    .filter(|i| !s.fixed.iter().any(|(j, _)| j == i))
                    .map(|i| self.point(point).expect("checked").coords()[i].clone())
                    .collect();
                let base = RationalPoint::new(f.chart(), coords)?;
                f.tangent_dim(&base)?.to_string()
            }
            Probe::Morita { witness, fm, fnn } => {
                check_witness(self.witness(witness)?, self.foliation(fm)?, self.foliation(fnn)?)?.verdict.label().to_string()
            }
            Probe::ComposeWithIdentity { witness, fm, fnn } => {
                let w = self.witness(witness)?;
                let (f_m, f_n) = (self.foliation(fm)?, self.foliation(fnn)?);
                let id = MoritaWitness::identity(f_n.chart());
                let composed = compose_witnesses(w, &id, f_m, f_n, f_n)?;
                check_witness(&composed, f_m, f_n)?.verdict.label().to_string()
            }
            Probe::Bisubmersion { s, t, fm, fnn } => {
                let r = bisubmersion_check(self.map(s)?, self.map(t)?, self.foliation(fm)?, self.foliation(fnn)?)?;
                let mut failing = Vec::new();
                if !r.pullbacks_equal.equal {
                    failing.push("s^-1 F_M = t^-1 F_N");
                }
                if !r.s_matches_verticals.equal {
                    failing.push("s^-1 F_M = ker ds + ker dt");
                }
                if !r.t_matches_verticals.equal {
                    failing.push("t^-1 F_N = ker ds + ker dt");
                }
                if failing.is_empty() { "ok".to_string() } else { alloc::format!("fails: {}", failing.join("; ")) }
            }
            Probe::Compare { fm, x, fnn, y } => compare_invariants(self.foliation(fm)?, self.point(x)?, self.foliation(fnn)?, self.point(y)?)?
                .verdict
                .label()
                .to_string(),
            Probe::Functoriality { pi, rho, fol } => {
                yes_no(functoriality_check(self.map(pi)?, self.map(rho)?, self.foliation(fol)?)?.equal, "equal", "different")
            }
            Probe::Pushforward { map, fol, expected } => match pushforward_foliation(self.map(map)?, self.foliation(fol)?)? {
                Pushforward::Pushed { foliation, round_trip } => {
                    let matches = match expected {
                        Some(e) => foliation.equals(self.foliation(e)?)?.equal,
                        None => true,
                    };
                    yes_no(matches && round_trip.equal, "pushed", "pushed-unexpected")
                }
                Pushforward::MissingVertical { .. } => "missing-vertical".to_string(),
                Pushforward::NotAPullback { .. } => "not-a-pullback".to_string(),
            },
        })
    }

    /// Recomputes every expectation.
    pub fn verify(&self) -> Result<Vec<CheckedExpectation>, GalleryError> {
        self.expectations
            .iter()
            .map(|e| {
                Ok(CheckedExpectation {
                    label: e.label.clone(),
                    expected: e.expected.clone(),
                    actual: self.evaluate(&e.probe)?,
                    provenance: e.provenance.clone(),
                })
            })
            .collect()
    }
}

/// Names accepted by [`load`]; `xk(k)` accepts any `1 <= k <= 31`.
pub fn list() -> Vec<&'static str> {
    vec![
        "xk(2)",
        "xk(3)",
        "gl2",
        "sl2",
        "so3",
        "gl2-vs-sl2",
        "x2-vs-x3",
        "circles-ray-witness",
        "full-full-bisubmersion",
        "product-full-zero",
        "simple-foliation",
        "euler-vs-rotation",
        "functoriality",
        "pushforward",
    ]
}

/// Builds an entry, re-running involutivity checks; expectations are not
/// evaluated (see [`load_checked`]).
pub fn load(name: &str) -> Result<GalleryEntry, GalleryError> {
    if let Some(k) = name.strip_prefix("xk(").and_then(|r| r.strip_suffix(')')) {
        let k: u32 = k.parse().map_err(|_| GalleryError::UnknownEntry(name.to_string()))?;
        if !(1..=31).contains(&k) {
            return Err(GalleryError::UnknownEntry(name.to_string()));
        }
        return build::xk(k);
    }
    match name {
        "gl2" => build::linear("gl2", gl_basis(2), "4", "[4,3,3]"),
        "sl2" => build::linear("sl2", sl2_basis(), "3", "[3,3]"),
        "so3" => build::so3(),
        "gl2-vs-sl2" => build::gl2_vs_sl2(),
        "x2-vs-x3" => build::x2_vs_x3(),
        "circles-ray-witness" => build::circles_ray(),
        "full-full-bisubmersion" => build::full_full(),
        "product-full-zero" => build::product_full_zero(),
        "simple-foliation" => build::simple(),
        "euler-vs-rotation" => build::euler_rotation(),
        "functoriality" => build::functoriality(),
        "pushforward" => build::pushforward(),
        _ => Err(GalleryError::UnknownEntry(name.to_string())),
    }
}

/// [`load`] followed by [`GalleryEntry::verify`]; any mismatch is an error.
pub fn load_checked(name: &str) -> Result<(GalleryEntry, Vec<CheckedExpectation>), GalleryError> {
    let entry = load(name)?;
    let checked = entry.verify()?;
    if let Some(bad) = checked.iter().find(|c| !c.ok()) {
        return Err(GalleryError::Mismatch {
            entry: entry.name.clone(),
            label: bad.label.clone(),
            expected: bad.expected.clone(),
            actual: bad.actual.clone(),
        });
    }
    Ok((entry, checked))
}

pub(crate) fn field(chart: &Arc<Chart>, comps: Vec<Polynomial>) -> VectorField {
    VectorField::new(chart, comps).expect("gallery fields match their charts")
}

pub(crate) fn asserted_surjective() -> MapAssertions {
    MapAssertions { surjective: FlagStatus::Asserted, connected_fibers: FlagStatus::Unknown }
}
