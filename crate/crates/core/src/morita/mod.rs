//! Hausdorff Morita equivalence witnesses: verification with an explicit
//! ledger of the topological hypotheses, composition through fibered
//! products, and comparison of invariants that every equivalence preserves.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::Polynomial;
use crate::foliation::{lie_invariants, EqualityReport, FoliationError, LieInvariants, SingularFoliation, VanishingOrder};
use crate::geometry::{Chart, FlagStatus, GeometryError, MapAssertions, PolyMap, RationalPoint, SubmersionCertificate};
use crate::pullback::{pullback_foliation, PullbackError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoritaError {
    #[error("maps of witness {witness} do not share a source chart")]
    SourceMismatch { witness: String },
    #[error("fibered product not realizable: {0}")]
    NotRealizable(&'static str),
    #[error("witness {witness} is not verified")]
    Unverified { witness: String },
    #[error(transparent)]
    Pullback(#[from] PullbackError),
}

impl From<FoliationError> for MoritaError {
    fn from(e: FoliationError) -> Self {
        MoritaError::Pullback(e.into())
    }
}

impl From<GeometryError> for MoritaError {
    fn from(e: GeometryError) -> Self {
        MoritaError::Pullback(e.into())
    }
}

impl MoritaError {
    pub fn is_cap(&self) -> bool {
        matches!(self, MoritaError::Pullback(e) if e.is_cap())
    }
}

/// Strength of the evidence for one hypothesis on one map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LedgerStatus {
    Failed,
    Unknown,
    Asserted,
    Structural,
    Certified,
}

impl LedgerStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LedgerStatus::Failed => "failed",
            LedgerStatus::Unknown => "unknown",
            LedgerStatus::Asserted => "asserted",
            LedgerStatus::Structural => "structural",
            LedgerStatus::Certified => "certified",
        }
    }

    fn from_flag(f: FlagStatus) -> Self {
        match f {
            FlagStatus::Unknown => LedgerStatus::Unknown,
            FlagStatus::Asserted => LedgerStatus::Asserted,
            FlagStatus::Structural => LedgerStatus::Structural,
        }
    }

    /// Sample checks are evidence, not proof; they count as assertions.
    fn from_submersion(c: &SubmersionCertificate) -> Self {
        match c {
            SubmersionCertificate::CertifiedEverywhere { .. } => LedgerStatus::Certified,
            SubmersionCertificate::SampleVerified { .. } => LedgerStatus::Asserted,
            SubmersionCertificate::Failed { .. } => LedgerStatus::Failed,
        }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self, LedgerStatus::Certified | LedgerStatus::Structural)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapLedger {
    pub map: String,
    pub submersion: LedgerStatus,
    pub surjective: LedgerStatus,
    pub connected_fibers: LedgerStatus,
}

impl MapLedger {
    pub fn entries(&self) -> [(&'static str, LedgerStatus); 3] {
        [("submersion", self.submersion), ("surjective", self.surjective), ("connected_fibers", self.connected_fibers)]
    }
}

/// A manifold `P` with maps to both foliated spaces.
#[derive(Clone, Debug)]
pub struct MoritaWitness {
    pub name: String,
    pub pi_m: PolyMap,
    pub pi_n: PolyMap,
}

impl MoritaWitness {
    pub fn new(name: &str, pi_m: PolyMap, pi_n: PolyMap) -> Result<Self, MoritaError> {
        if pi_m.source() != pi_n.source() {
            return Err(MoritaError::SourceMismatch { witness: name.to_string() });
        }
        Ok(MoritaWitness { name: name.to_string(), pi_m, pi_n })
    }

    /// `(M, id, id)`.
    pub fn identity(chart: &Arc<Chart>) -> Self {
        let id = PolyMap::identity(chart);
        MoritaWitness { name: alloc::format!("id_{}", chart.name()), pi_m: id.clone(), pi_n: id }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.pi_m.source()
    }

    pub fn swapped(&self) -> Self {
        MoritaWitness { name: alloc::format!("{}^op", self.name), pi_m: self.pi_n.clone(), pi_n: self.pi_m.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    WitnessVerified,
    WitnessVerifiedModuloAssertions,
    Refuted(String),
    Incomplete(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::WitnessVerified => "witness-verified",
            Verdict::WitnessVerifiedModuloAssertions => "witness-verified-modulo-assertions",
            Verdict::Refuted(_) => "refuted",
            Verdict::Incomplete(_) => "incomplete",
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::WitnessVerified | Verdict::WitnessVerifiedModuloAssertions)
    }
}

#[derive(Clone, Debug)]
pub struct MoritaReport {
    pub witness: String,
    pub ledger: [MapLedger; 2],
    pub submersions: [SubmersionCertificate; 2],
    /// `pi_M^-1 F_M` and `pi_N^-1 F_N`, when both pullbacks exist.
    pub pullbacks: Option<(SingularFoliation, SingularFoliation)>,
    pub module_equality: Option<EqualityReport>,
    pub verdict: Verdict,
}

fn map_ledger(f: &PolyMap, cert: &SubmersionCertificate) -> MapLedger {
    MapLedger {
        map: f.name().to_string(),
        submersion: LedgerStatus::from_submersion(cert),
        surjective: LedgerStatus::from_flag(f.surjective()),
        connected_fibers: LedgerStatus::from_flag(f.connected_fibers()),
    }
}

/// Verifies `pi_M^-1 F_M = pi_N^-1 F_N` and records how each of the six
/// hypotheses (submersion, surjective, connected fibers per map) is known.
pub fn check_witness(w: &MoritaWitness, fm: &SingularFoliation, fnn: &SingularFoliation) -> Result<MoritaReport, MoritaError> {
    let cm = w.pi_m.submersion_certificate(&[])?;
    let cn = w.pi_n.submersion_certificate(&[])?;
    let ledger = [map_ledger(&w.pi_m, &cm), map_ledger(&w.pi_n, &cn)];
    let mut report = MoritaReport {
        witness: w.name.clone(),
        ledger,
        submersions: [cm, cn],
        pullbacks: None,
        module_equality: None,
        verdict: Verdict::Incomplete(String::new()),
    };
    for (label, f) in [("F_M", fm), ("F_N", fnn)] {
        if !f.is_involutive()?.ok {
            report.verdict = Verdict::Incomplete(alloc::format!("{label} is not involutive"));
            return Ok(report);
        }
    }
    let pulled = |pi: &PolyMap, f: &SingularFoliation| -> Result<Result<SingularFoliation, String>, MoritaError> {
        match pullback_foliation(pi, f) {
            Ok(p) => Ok(Ok(p)),
            Err(e @ (PullbackError::LiftUnavailable { .. } | PullbackError::NotSubmersion { .. })) => Ok(Err(e.to_string())),
            Err(e) => Err(e.into()),
        }
    };
    let pm = match pulled(&w.pi_m, fm)? {
        Ok(p) => p,
        Err(reason) => {
            report.verdict = Verdict::Incomplete(reason);
            return Ok(report);
        }
    };
    let pn = match pulled(&w.pi_n, fnn)? {
        Ok(p) => p,
        Err(reason) => {
            report.verdict = Verdict::Incomplete(reason);
            return Ok(report);
        }
    };
    let eq = pm.equals(&pn)?;
    let equal = eq.equal;
    report.verdict = if !equal {
        let missing_m = eq.forward.iter().position(Option::is_none);
        let reason = match missing_m {
            Some(i) => alloc::format!("generator {i} of pi_N^-1 F_N is not in pi_M^-1 F_M"),
            None => {
                let i = eq.backward.iter().position(Option::is_none).unwrap_or(0);
                alloc::format!("generator {i} of pi_M^-1 F_M is not in pi_N^-1 F_N")
            }
        };
        Verdict::Refuted(reason)
    } else {
        let entries: Vec<(String, &'static str, LedgerStatus)> = report
            .ledger
            .iter()
            .flat_map(|l| l.entries().into_iter().map(move |(k, s)| (l.map.clone(), k, s)))
            .collect();
        if let Some((map, key, status)) = entries.iter().find(|(_, _, s)| matches!(s, LedgerStatus::Unknown | LedgerStatus::Failed)) {
            Verdict::Incomplete(alloc::format!("{key} of {map} is {}", status.as_str()))
        } else if entries.iter().all(|(_, _, s)| s.is_proven()) {
            Verdict::WitnessVerified
        } else {
            Verdict::WitnessVerifiedModuloAssertions
        }
    };
    report.pullbacks = Some((pm, pn));
    report.module_equality = Some(eq);
    Ok(report)
}

fn derived_flag(a: FlagStatus, b: FlagStatus) -> FlagStatus {
    if a == FlagStatus::Structural && b == FlagStatus::Structural {
        FlagStatus::Structural
    } else {
        a.min(b).min(FlagStatus::Asserted)
    }
}

fn derived_flags(a: &PolyMap, b: &PolyMap) -> MapAssertions {
    MapAssertions {
        surjective: derived_flag(a.surjective(), b.surjective()),
        connected_fibers: derived_flag(a.connected_fibers(), b.connected_fibers()),
    }
}

/// `X x_N Y` for `g: Y -> N` a coordinate projection keeping `kept`: the
/// chart `X x W` (W the dropped coordinates of `Y`) and the components of
/// the induced map to `Y`.
fn fibered_chart(f: &PolyMap, g: &PolyMap, kept: &[usize]) -> Result<(Arc<Chart>, Vec<Polynomial>), MoritaError> {
    let x = f.source();
    let y = g.source();
    let fiber: Vec<usize> = (0..y.dim()).filter(|i| !kept.contains(i)).collect();
    let w = Chart::new(alloc::format!("{}_fiber", y.name()), fiber.iter().map(|&i| y.vars()[i].clone()))?;
    let mut chart = x.product(&w);
    let n = chart.dim();
    let left: Vec<usize> = (0..x.dim()).collect();
    let to_y: Vec<Polynomial> = (0..y.dim())
        .map(|i| match kept.iter().position(|&k| k == i) {
            Some(a) => f.components()[a].embed(n, &left),
            None => Polynomial::var(n, x.dim() + fiber.iter().position(|&j| j == i).expect("fiber index")),
        })
        .collect();
    for a in y.avoid() {
        let pulled = if y.dim() == 0 { a.clone() } else { a.compose(&to_y) };
        if pulled.is_zero() {
            return Err(MoritaError::NotRealizable("the fibered product is empty"));
        }
        if !pulled.is_constant() {
            chart = chart.with_avoid(pulled)?;
        }
    }
    Ok((Arc::new(chart.renamed(&alloc::format!("{}x{}", x.name(), y.name()))), to_y))
}

/// Witness for `M ~ S` from witnesses `M ~ N` (over `P1`) and `N ~ S` (over
/// `P2`), over the fibered product `P1 x_N P2`. Realizable when one of the
/// two maps to `N` is a coordinate projection.
pub fn compose_witnesses(
    w1: &MoritaWitness,
    w2: &MoritaWitness,
    fm: &SingularFoliation,
    fnn: &SingularFoliation,
    fs: &SingularFoliation,
) -> Result<MoritaWitness, MoritaError> {
    if w1.pi_n.target() != w2.pi_m.target() {
        return Err(MoritaError::NotRealizable("the witnesses do not meet in a common chart"));
    }
    if w2.pi_m.as_projection().is_none() && w1.pi_n.as_projection().is_none() {
        return Err(MoritaError::NotRealizable("neither map to the middle chart is a coordinate projection"));
    }
    for (w, a, b) in [(w1, fm, fnn), (w2, fnn, fs)] {
        if !check_witness(w, a, b)?.verdict.is_verified() {
            return Err(MoritaError::Unverified { witness: w.name.clone() });
        }
    }
    let name = alloc::format!("{}.{}", w1.name, w2.name);
    let base = |f: &PolyMap, chart: &Arc<Chart>| -> Result<PolyMap, MoritaError> {
        let n = chart.dim();
        let left: Vec<usize> = (0..f.source().dim()).collect();
        let comps = f.components().iter().map(|c| c.embed(n, &left)).collect();
        Ok(PolyMap::new(f.name(), chart, f.target(), comps, MapAssertions::default())?)
    };
    let over = |f: &PolyMap, chart: &Arc<Chart>, to_y: &[Polynomial]| -> Result<PolyMap, MoritaError> {
        let comps = f.components().iter().map(|c| if to_y.is_empty() { c.clone() } else { c.compose(to_y) }).collect();
        Ok(PolyMap::new(f.name(), chart, f.target(), comps, MapAssertions::default())?)
    };
    if let Some(kept) = w2.pi_m.as_projection() {
        // P = P1 x W2; the map to P2 is (p1, w) -> (pi_N^1(p1), w).
        let (chart, to_p2) = fibered_chart(&w1.pi_n, &w2.pi_m, &kept)?;
        let pm = base(&w1.pi_m, &chart)?.with_derived_flags(derived_flags(&w1.pi_m, &w2.pi_m));
        let ps = over(&w2.pi_n, &chart, &to_p2)?.with_derived_flags(derived_flags(&w2.pi_n, &w1.pi_n));
        return MoritaWitness::new(&name, pm, ps);
    }
    let kept = w1.pi_n.as_projection().expect("realizability checked above");
    // P = P2 x W1; the map to P1 is (p2, w) -> (pi_N^2(p2), w).
    let (chart, to_p1) = fibered_chart(&w2.pi_m, &w1.pi_n, &kept)?;
    let pm = over(&w1.pi_m, &chart, &to_p1)?.with_derived_flags(derived_flags(&w1.pi_m, &w2.pi_m));
    let ps = base(&w2.pi_n, &chart)?.with_derived_flags(derived_flags(&w2.pi_n, &w1.pi_n));
    MoritaWitness::new(&name, pm, ps)
}

/// Invariants of a foliation at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointInvariants {
    pub dim: usize,
    pub tangent_dim: usize,
    pub codim: usize,
    pub fiber_dim: usize,
    pub isotropy: LieInvariants,
    pub vanishing_order: VanishingOrder,
}

pub fn point_invariants(f: &SingularFoliation, p: &RationalPoint) -> Result<PointInvariants, FoliationError> {
    let tangent_dim = f.tangent_dim(p)?;
    Ok(PointInvariants {
        dim: f.chart().dim(),
        tangent_dim,
        codim: f.chart().dim() - tangent_dim,
        fiber_dim: f.fiber_dim(p)?,
        isotropy: lie_invariants(&f.isotropy_algebra(p)?),
        vanishing_order: f.vanishing_order(p)?,
    })
}

/// One compared quantity. `necessary` marks invariants that any equivalence
/// relating the two points must preserve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub name: &'static str,
    pub left: String,
    pub right: String,
    pub necessary: bool,
    pub differs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComparisonVerdict {
    Distinguishes(Vec<String>),
    Consistent,
}

impl ComparisonVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ComparisonVerdict::Distinguishes(_) => "distinguishes",
            ComparisonVerdict::Consistent => "consistent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub left: PointInvariants,
    pub right: PointInvariants,
    pub rows: Vec<ComparisonRow>,
    pub verdict: ComparisonVerdict,
}

fn fmt_list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    alloc::format!("[{}]", parts.join(","))
}

/// Tabulates invariants at `x` and `y`. Leaf codimension and the isotropy
/// algebra are preserved by every equivalence; the vanishing order is
/// compared only when the tangent dimensions agree, where the transversal
/// germs must be isomorphic. Fiber and leaf dimensions are informational.
pub fn compare_invariants(
    fm: &SingularFoliation,
    x: &RationalPoint,
    fnn: &SingularFoliation,
    y: &RationalPoint,
) -> Result<ComparisonReport, FoliationError> {
    let a = point_invariants(fm, x)?;
    let b = point_invariants(fnn, y)?;
    let same_tangent = a.tangent_dim == b.tangent_dim;
    let mut rows = Vec::new();
    let mut push = |name: &'static str, l: String, r: String, necessary: bool| {
        let differs = l != r;
        rows.push(ComparisonRow { name, left: l, right: r, necessary, differs });
    };
    let ia = &a.isotropy;
    let ib = &b.isotropy;
    push("codim", a.codim.to_string(), b.codim.to_string(), true);
    push("isotropy dim", ia.dim.to_string(), ib.dim.to_string(), true);
    push("derived series", fmt_list(&ia.derived_series_dims), fmt_list(&ib.derived_series_dims), true);
    push("lower central series", fmt_list(&ia.lower_central_dims), fmt_list(&ib.lower_central_dims), true);
    push("center dim", ia.center_dim.to_string(), ib.center_dim.to_string(), true);
    push("abelianization dim", ia.abelianization_dim.to_string(), ib.abelianization_dim.to_string(), true);
    let order = |v: &VanishingOrder| if v.capped { alloc::format!(">={}", v.order) } else { v.order.to_string() };
    let orders_comparable = same_tangent && !(a.vanishing_order.capped && b.vanishing_order.capped);
    push("vanishing order", order(&a.vanishing_order), order(&b.vanishing_order), orders_comparable);
    push("tangent dim", a.tangent_dim.to_string(), b.tangent_dim.to_string(), false);
    push("fiber dim", a.fiber_dim.to_string(), b.fiber_dim.to_string(), false);
    let reasons: Vec<String> = rows
        .iter()
        .filter(|r| r.necessary && r.differs)
        .map(|r| alloc::format!("{} {} != {}", r.name, r.left, r.right))
        .collect();
    let verdict = if reasons.is_empty() { ComparisonVerdict::Consistent } else { ComparisonVerdict::Distinguishes(reasons) };
    Ok(ComparisonReport { left: a, right: b, rows, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafSample {
    pub point: Vec<crate::algebra::Rational>,
    pub codim_m: usize,
    pub codim_n: usize,
    pub codim_p: usize,
}

impl LeafSample {
    pub fn agrees(&self) -> bool {
        self.codim_m == self.codim_n && self.codim_n == self.codim_p
    }
}

/// Leaf codimensions at `pi_M(p)`, `pi_N(p)` and `p` (for `pi_M^-1 F_M`).
pub fn leaf_correspondence_sample(
    w: &MoritaWitness,
    fm: &SingularFoliation,
    fnn: &SingularFoliation,
    points: &[RationalPoint],
) -> Result<Vec<LeafSample>, MoritaError> {
    let common = pullback_foliation(&w.pi_m, fm)?;
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let pm = RationalPoint::new(w.pi_m.target(), w.pi_m.apply(p.coords()))?;
        let pn = RationalPoint::new(w.pi_n.target(), w.pi_n.apply(p.coords()))?;
        out.push(LeafSample {
            point: p.coords().to_vec(),
            codim_m: fm.chart().dim() - fm.tangent_dim(&pm)?,
            codim_n: fnn.chart().dim() - fnn.tangent_dim(&pn)?,
            codim_p: common.chart().dim() - common.tangent_dim(p)?,
        });
    }
    Ok(out)
}
