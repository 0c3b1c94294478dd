use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::linalg::Matrix;
use crate::algebra::{solve_linear_local, FreeModuleElement, Polynomial, Rational, Submodule};

use super::{Chart, GeometryError, VectorField};

/// How much is known about a topological property of a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlagStatus {
    Unknown,
    /// Declared by the user and recorded, not checked.
    Asserted,
    /// Follows from a recognized map pattern.
    Structural,
}

impl FlagStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FlagStatus::Unknown => "unknown",
            FlagStatus::Asserted => "asserted",
            FlagStatus::Structural => "structural",
        }
    }
}

/// Map shapes whose surjectivity / fiber connectivity is known a priori.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapPattern {
    /// `(m, w) -> m`: each target coordinate is a distinct source coordinate
    /// (`kept[i]` is the source index of target coordinate `i`) and every
    /// avoided polynomial of the source is pulled back from the target, so
    /// the fibers are whole coordinate spaces.
    Projection { kept: Vec<usize> },
    /// `(x, y) -> x^2 + y^2` from the punctured plane onto a target chart
    /// declared positive; fibers are circles.
    SquaredRadius,
}

/// User declarations for the flags a pattern may not cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapAssertions {
    pub surjective: FlagStatus,
    pub connected_fibers: FlagStatus,
}

impl Default for MapAssertions {
    fn default() -> Self {
        MapAssertions { surjective: FlagStatus::Unknown, connected_fibers: FlagStatus::Unknown }
    }
}

impl MapAssertions {
    pub fn asserted() -> Self {
        MapAssertions { surjective: FlagStatus::Asserted, connected_fibers: FlagStatus::Asserted }
    }
}

/// A polynomial map between charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    name: String,
    source: Arc<Chart>,
    target: Arc<Chart>,
    comps: Vec<Polynomial>,
    surjective: FlagStatus,
    connected_fibers: FlagStatus,
    pattern: Option<MapPattern>,
}

/// Outcome of the submersion test for a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubmersionCertificate {
    /// `J * right_inverse = h^power * Id` with `h` the source's avoid product,
    /// so `df` is onto at every point of the domain.
    CertifiedEverywhere { power: u32, right_inverse: Vec<Vec<Polynomial>> },
    /// No polynomial right inverse was found; the Jacobian has full rank at
    /// every listed point.
    SampleVerified { points: Vec<Vec<Rational>> },
    Failed { point: Option<Vec<Rational>>, reason: String },
}

impl SubmersionCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, SubmersionCertificate::CertifiedEverywhere { .. })
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, SubmersionCertificate::Failed { .. })
    }
}

impl PolyMap {
    pub fn new(
        name: &str,
        source: &Arc<Chart>,
        target: &Arc<Chart>,
        comps: Vec<Polynomial>,
        declared: MapAssertions,
    ) -> Result<Self, GeometryError> {
        if comps.len() != target.dim() {
            return Err(GeometryError::DimensionMismatch { expected: target.dim(), found: comps.len() });
        }
        if let Some(c) = comps.iter().find(|c| c.nvars() != source.dim()) {
            return Err(GeometryError::DimensionMismatch { expected: source.dim(), found: c.nvars() });
        }
        let mut map = PolyMap {
            name: name.to_string(),
            source: source.clone(),
            target: target.clone(),
            comps,
            surjective: declared.surjective,
            connected_fibers: declared.connected_fibers,
            pattern: None,
        };
        map.check_avoid_preserved()?;
        map.pattern = map.recognize();
        match &map.pattern {
            Some(MapPattern::Projection { .. }) => {
                map.surjective = FlagStatus::Structural;
                map.connected_fibers = FlagStatus::Structural;
            }
            Some(MapPattern::SquaredRadius) => {
                map.connected_fibers = FlagStatus::Structural;
                if map.surjective == FlagStatus::Structural {
                    return Err(GeometryError::UnrecognizedPattern { map: map.name, flag: "surjective" });
                }
            }
            None => {
                if map.surjective == FlagStatus::Structural {
                    return Err(GeometryError::UnrecognizedPattern { map: map.name, flag: "surjective" });
                }
                if map.connected_fibers == FlagStatus::Structural {
                    return Err(GeometryError::UnrecognizedPattern { map: map.name, flag: "connected_fibers" });
                }
            }
        }
        Ok(map)
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        let comps = (0..chart.dim()).map(|i| chart.coordinate(i)).collect();
        PolyMap::new("id", chart, chart, comps, MapAssertions::default()).expect("identity map is valid")
    }

    /// The coordinate projection keeping source coordinates `kept`.
    pub fn projection(name: &str, source: &Arc<Chart>, target: &Arc<Chart>, kept: &[usize]) -> Result<Self, GeometryError> {
        let comps = kept.iter().map(|&i| source.coordinate(i)).collect();
        PolyMap::new(name, source, target, comps, MapAssertions::default())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn surjective(&self) -> FlagStatus {
        self.surjective
    }

    pub fn connected_fibers(&self) -> FlagStatus {
        self.connected_fibers
    }

    pub fn pattern(&self) -> Option<&MapPattern> {
        self.pattern.as_ref()
    }

    pub fn declared(&self) -> MapAssertions {
        MapAssertions { surjective: self.surjective, connected_fibers: self.connected_fibers }
    }

    /// Replaces the flags with ones derived from other maps (a composite whose
    /// factors are known to be surjective with connected fibers); bypasses
    /// the pattern check.
    pub(crate) fn with_derived_flags(mut self, flags: MapAssertions) -> Self {
        self.surjective = flags.surjective;
        self.connected_fibers = flags.connected_fibers;
        self
    }

    /// Index of the source coordinate for each target coordinate when the map
    /// is a coordinate projection (structural or not).
    pub fn as_projection(&self) -> Option<Vec<usize>> {
        let mut kept = Vec::with_capacity(self.comps.len());
        for c in &self.comps {
            let idx = (0..self.source.dim()).find(|&i| *c == self.source.coordinate(i))?;
            if kept.contains(&idx) {
                return None;
            }
            kept.push(idx);
        }
        Some(kept)
    }

    /// `q o f`.
    pub fn pull_back(&self, q: &Polynomial) -> Polynomial {
        if self.comps.is_empty() {
            return Polynomial::constant(self.source.dim(), q.constant_term());
        }
        q.compose(&self.comps)
    }

    pub fn apply(&self, coords: &[Rational]) -> Vec<Rational> {
        self.comps.iter().map(|c| c.evaluate(coords)).collect()
    }

    /// `n x p` matrix of partial derivatives `d f_a / d x_b`.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.comps.iter().map(|f| (0..self.source.dim()).map(|b| f.derivative(b)).collect()).collect()
    }

    /// `outer o inner`.
    pub fn compose(outer: &PolyMap, inner: &PolyMap) -> Result<PolyMap, GeometryError> {
        if inner.target != outer.source {
            return Err(GeometryError::ChartMismatch {
                expected: outer.source.name().to_string(),
                found: inner.target.name().to_string(),
            });
        }
        let comps = outer.comps.iter().map(|c| inner.pull_back(c)).collect();
        let weakest = |a: FlagStatus, b: FlagStatus| a.min(b).min(FlagStatus::Asserted);
        let declared = MapAssertions {
            surjective: weakest(outer.surjective, inner.surjective),
            connected_fibers: weakest(outer.connected_fibers, inner.connected_fibers),
        };
        let name = alloc::format!("{}.{}", outer.name, inner.name);
        PolyMap::new(&name, &inner.source, &outer.target, comps, declared)
    }

    /// Pushes a vector field forward pointwise: `J * X`, as components in
    /// source variables.
    pub fn differential(&self, x: &VectorField) -> Result<Vec<Polynomial>, GeometryError> {
        if x.chart() != &self.source {
            return Err(GeometryError::ChartMismatch {
                expected: self.source.name().to_string(),
                found: x.chart().name().to_string(),
            });
        }
        Ok(self.comps.iter().map(|f| x.apply(f)).collect())
    }

    /// Target avoided polynomials must pull back to functions without zeros on
    /// the source domain: each pullback divides a power of the source's avoid
    /// product.
    fn check_avoid_preserved(&self) -> Result<(), GeometryError> {
        let h = self.source.avoid_product();
        for q in self.target.avoid() {
            let pulled = self.pull_back(q);
            if pulled.is_zero() {
                return Err(GeometryError::AvoidNotPreserved { map: self.name.clone() });
            }
            if pulled.is_constant() || self.source.avoid().iter().any(|a| proportional(a, &pulled)) {
                continue;
            }
            let ideal = Submodule::new(self.source.dim(), 1, alloc::vec![FreeModuleElement::scalar(pulled)])?;
            let sat = ideal.saturate(&h)?;
            let one = FreeModuleElement::scalar(Polynomial::one(self.source.dim()));
            let gb = Submodule::new(self.source.dim(), 1, sat.module.into_generators())?.groebner()?;
            if !gb.contains(&one)? {
                return Err(GeometryError::AvoidNotPreserved { map: self.name.clone() });
            }
        }
        Ok(())
    }

    fn recognize(&self) -> Option<MapPattern> {
        if let Some(kept) = self.as_projection() {
            let pulled: Vec<Polynomial> = self.target.avoid().iter().map(|q| self.pull_back(q)).collect();
            if self.source.avoid().iter().all(|a| pulled.iter().any(|p| proportional(a, p))) {
                return Some(MapPattern::Projection { kept });
            }
        }
        if self.source.dim() == 2 && self.target.dim() == 1 {
            let x = self.source.coordinate(0);
            let y = self.source.coordinate(1);
            let r2 = &(&x * &x) + &(&y * &y);
            let t = self.target.coordinate(0);
            let source_ok = !self.source.avoid().is_empty() && self.source.avoid().iter().all(|a| proportional(a, &r2));
            let target_ok = self.target.avoid().len() == 1
                && proportional(&self.target.avoid()[0], &t)
                && self.target.meta_flag("positive");
            if self.comps[0] == r2 && source_ok && target_ok {
                return Some(MapPattern::SquaredRadius);
            }
        }
        None
    }

    /// Tries to certify that `df` is onto everywhere; otherwise checks the
    /// Jacobian rank at `samples` (plus the origin when it is in the domain).
    pub fn submersion_certificate(&self, samples: &[Vec<Rational>]) -> Result<SubmersionCertificate, GeometryError> {
        let n = self.target.dim();
        let p = self.source.dim();
        let jac = self.jacobian();
        let h = self.source.avoid_product();
        if n == 0 {
            return Ok(SubmersionCertificate::CertifiedEverywhere { power: 0, right_inverse: Vec::new() });
        }
        let mut columns = Vec::with_capacity(n);
        let mut solvable = true;
        for i in 0..n {
            let rhs: Vec<Polynomial> =
                (0..n).map(|a| if a == i { Polynomial::one(p) } else { Polynomial::zero(p) }).collect();
            match solve_linear_local(&jac, &rhs, &h)? {
                Some(cert) => columns.push(cert),
                None => {
                    solvable = false;
                    break;
                }
            }
        }
        if solvable {
            let power = columns.iter().map(|c| c.power).max().unwrap_or(0);
            // p x n matrix: column i is the solution for e_i, rescaled to h^power.
            let mut right_inverse = alloc::vec![alloc::vec![Polynomial::zero(p); n]; p];
            for (i, cert) in columns.iter().enumerate() {
                let scale = h.pow(power - cert.power);
                for (b, s) in cert.coefficients.iter().enumerate() {
                    right_inverse[b][i] = s * &scale;
                }
            }
            let cert = SubmersionCertificate::CertifiedEverywhere { power, right_inverse };
            if !self.verify_right_inverse(&cert) {
                return Err(GeometryError::Algebra(crate::algebra::AlgebraError::CertificateMismatch(
                    "submersion right inverse",
                )));
            }
            return Ok(cert);
        }

        let mut points: Vec<Vec<Rational>> = Vec::new();
        let origin = alloc::vec![Rational::zero(); p];
        for s in samples.iter().chain(core::iter::once(&origin)) {
            if s.len() == p && self.source.contains(s) && !points.contains(s) {
                points.push(s.clone());
            }
        }
        for pt in &points {
            let rows: Vec<Vec<Rational>> = jac.iter().map(|row| row.iter().map(|e| e.evaluate(pt)).collect()).collect();
            if Matrix::from_rows(rows).rank() < n {
                return Ok(SubmersionCertificate::Failed {
                    point: Some(pt.clone()),
                    reason: "Jacobian rank deficient".to_string(),
                });
            }
        }
        if points.is_empty() {
            return Ok(SubmersionCertificate::Failed {
                point: None,
                reason: "no polynomial right inverse and no sample points".to_string(),
            });
        }
        Ok(SubmersionCertificate::SampleVerified { points })
    }

    /// Re-expands `J * S` and compares with `h^power * Id`.
    pub fn verify_right_inverse(&self, cert: &SubmersionCertificate) -> bool {
        let SubmersionCertificate::CertifiedEverywhere { power, right_inverse } = cert else {
            return false;
        };
        let n = self.target.dim();
        let p = self.source.dim();
        if right_inverse.len() != p || right_inverse.iter().any(|r| r.len() != n) {
            return false;
        }
        let jac = self.jacobian();
        let hp = self.source.avoid_product().pow(*power);
        for a in 0..n {
            for i in 0..n {
                let mut acc = Polynomial::zero(p);
                for b in 0..p {
                    acc = &acc + &(&jac[a][b] * &right_inverse[b][i]);
                }
                let expected = if a == i { hp.clone() } else { Polynomial::zero(p) };
                if acc != expected {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `J * X = Y o f` componentwise.
    pub fn related(&self, x: &VectorField, y: &VectorField) -> Result<bool, GeometryError> {
        if y.chart() != &self.target {
            return Err(GeometryError::ChartMismatch {
                expected: self.target.name().to_string(),
                found: y.chart().name().to_string(),
            });
        }
        let pushed = self.differential(x)?;
        Ok(pushed.iter().zip(y.components()).all(|(a, b)| *a == self.pull_back(b)))
    }
}

/// `a = c * b` for a nonzero rational `c`.
pub(crate) fn proportional(a: &Polynomial, b: &Polynomial) -> bool {
    if a.len() != b.len() || a.is_zero() {
        return false;
    }
    let (ma, ca) = a.terms().next().expect("nonzero");
    let cb = b.coefficient(ma);
    if cb.is_zero() {
        return false;
    }
    let ratio = ca / &cb;
    *a == b.scale(&ratio)
}

/// `submersion_certificate` as a free function.
pub fn submersion_certificate(f: &PolyMap, samples: &[Vec<Rational>]) -> Result<SubmersionCertificate, GeometryError> {
    f.submersion_certificate(samples)
}

/// `related_check`: `X` on the source is `f`-related to `Y` on the target.
pub fn related_check(x: &VectorField, f: &PolyMap, y: &VectorField) -> Result<bool, GeometryError> {
    f.related(x, y)
}
