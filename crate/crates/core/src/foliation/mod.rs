//! Singular foliations as saturated modules of polynomial vector fields, and
//! their pointwise invariants.
//!
//! At a point `p` of the domain the fiber of the module is
//! `Q^k / ev_p(Syz)`, where `Syz` is the syzygy module of the `k`
//! generators. The isotropy algebra is the kernel of the evaluation map
//! `Q^k -> T_p` taken modulo `ev_p(Syz)`. Its bracket is computed on
//! constant-coefficient lifts: the involutivity certificates express every
//! `[X_i, X_j]` as `h^-m sum_l f_l X_l`, and evaluating the `f_l / h^m` at
//! `p` gives the class of the bracket in the fiber.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::linalg::{span_basis, span_rank, Matrix};
use crate::algebra::{
    AlgebraError, FreeModuleElement, GroebnerBasis, MembershipCertificate, Polynomial, Presentation, Rational,
    Submodule,
};
use crate::geometry::{Chart, GeometryError, RationalPoint, VectorField};

mod construct;
mod lie;

pub use construct::{apply_diffeo, product_foliation, restrict_to_slice, transformation_foliation};
pub use lie::{gl_basis, lie_invariants, sl2_basis, so_basis, LieAlgebraPresentation, LieInvariants};

/// Vanishing orders are searched up to this bound.
pub const VANISHING_ORDER_CAP: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FoliationError {
    #[error("a foliation needs at least one generator")]
    EmptyGenerators,
    #[error("generators {i} and {j} have a bracket outside the module")]
    NotInvolutive { i: usize, j: usize },
    #[error("the slice is not transversal to the foliation at the base point")]
    NotTransversal,
    #[error("invalid slice: {0}")]
    InvalidSlice(&'static str),
    #[error("invalid Lie algebra: {0}")]
    InvalidLieAlgebra(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl FoliationError {
    pub fn is_cap(&self) -> bool {
        match self {
            FoliationError::Geometry(e) => e.is_cap(),
            FoliationError::Algebra(e) => e.is_cap(),
            _ => false,
        }
    }
}

/// Certificate that `[X_i, X_j]` lies in the saturated module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCertificate {
    pub i: usize,
    pub j: usize,
    pub certificate: MembershipCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketFailure {
    pub i: usize,
    pub j: usize,
    /// Normal form of `[X_i, X_j]` modulo the saturated basis.
    pub normal_form: FreeModuleElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutivityReport {
    pub ok: bool,
    pub certificates: Vec<PairCertificate>,
    pub failure: Option<BracketFailure>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutivityState {
    Unchecked,
    Certified,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityReport {
    pub equal: bool,
    /// Certificates for the generators of the second foliation in the first.
    pub forward: Vec<Option<MembershipCertificate>>,
    /// Certificates for the generators of the first foliation in the second.
    pub backward: Vec<Option<MembershipCertificate>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VanishingOrder {
    pub order: u32,
    pub capped: bool,
}

/// A finitely generated module of vector fields on a chart, considered up to
/// saturation by the chart's avoided polynomials.
#[derive(Clone, Debug)]
pub struct SingularFoliation {
    chart: Arc<Chart>,
    gens: Vec<VectorField>,
    avoid: Polynomial,
    saturated: GroebnerBasis,
    presentation: Presentation,
    syz: Vec<FreeModuleElement>,
    involutivity: Option<InvolutivityReport>,
}

impl SingularFoliation {
    pub fn new(chart: &Arc<Chart>, gens: Vec<VectorField>) -> Result<Self, FoliationError> {
        if gens.is_empty() {
            return Err(FoliationError::EmptyGenerators);
        }
        if let Some(g) = gens.iter().find(|g| g.chart() != chart) {
            return Err(GeometryError::ChartMismatch { expected: chart.name().to_string(), found: g.chart().name().to_string() }.into());
        }
        let n = chart.dim();
        let elems: Vec<FreeModuleElement> = gens.iter().map(|g| g.as_element().clone()).collect();
        let module = Submodule::new(n, n, elems)?;
        let presentation = module.presentation()?;
        let avoid = chart.avoid_product();
        let sat = module.saturate(&avoid)?;
        let saturated = GroebnerBasis::from_reduced(n, n, crate::algebra::ModuleOrder::grevlex(), sat.module.into_generators());
        let syz = presentation.syzygies();
        Ok(SingularFoliation { chart: chart.clone(), gens, avoid, saturated, presentation, syz, involutivity: None })
    }

    /// Runs the involutivity check and stores its outcome.
    pub fn checked(mut self) -> Result<Self, FoliationError> {
        let report = self.compute_involutivity()?;
        self.involutivity = Some(report);
        Ok(self)
    }

    /// The foliation generated by all coordinate fields.
    pub fn full(chart: &Arc<Chart>) -> Result<Self, FoliationError> {
        let gens = (0..chart.dim()).map(|i| VectorField::coordinate(chart, i)).collect::<Vec<_>>();
        let gens = if gens.is_empty() { alloc::vec![VectorField::zero(chart)] } else { gens };
        SingularFoliation::new(chart, gens)?.checked()
    }

    pub fn zero(chart: &Arc<Chart>) -> Result<Self, FoliationError> {
        SingularFoliation::new(chart, alloc::vec![VectorField::zero(chart)])?.checked()
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.gens
    }

    pub fn generator_elements(&self) -> Vec<FreeModuleElement> {
        self.gens.iter().map(|g| g.as_element().clone()).collect()
    }

    pub fn avoid_product(&self) -> &Polynomial {
        &self.avoid
    }

    /// Reduced Groebner basis of the saturated module.
    pub fn saturated_basis(&self) -> &GroebnerBasis {
        &self.saturated
    }

    pub fn saturated_generators(&self) -> Vec<VectorField> {
        self.saturated
            .generators()
            .into_iter()
            .map(|e| VectorField::from_element(&self.chart, e).expect("basis lives on the chart"))
            .collect()
    }

    pub fn syzygies(&self) -> &[FreeModuleElement] {
        &self.syz
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn is_zero(&self) -> bool {
        self.saturated.is_empty()
    }

    pub fn involutivity_state(&self) -> InvolutivityState {
        match &self.involutivity {
            None => InvolutivityState::Unchecked,
            Some(r) if r.ok => InvolutivityState::Certified,
            Some(_) => InvolutivityState::Failed,
        }
    }

    fn same_chart(&self, chart: &Arc<Chart>) -> Result<(), FoliationError> {
        if chart != &self.chart {
            return Err(GeometryError::ChartMismatch { expected: self.chart.name().to_string(), found: chart.name().to_string() }.into());
        }
        Ok(())
    }

    /// Membership in the saturated module, certified by `h^m X = sum_i c_i X_i`
    /// over the given generators, `h` the avoid product.
    pub fn contains(&self, x: &VectorField) -> Result<Option<MembershipCertificate>, FoliationError> {
        self.same_chart(x.chart())?;
        self.contains_element(x.as_element())
    }

    pub(crate) fn contains_element(&self, e: &FreeModuleElement) -> Result<Option<MembershipCertificate>, FoliationError> {
        if !self.saturated.contains(e)? {
            return Ok(None);
        }
        let cert = self
            .presentation
            .local_certificate(e, &self.avoid)?
            .ok_or(AlgebraError::PowerCapExceeded { cap: crate::algebra::SATURATION_POWER_CAP })?;
        Ok(Some(cert))
    }

    fn compute_involutivity(&self) -> Result<InvolutivityReport, FoliationError> {
        let mut certificates = Vec::new();
        for i in 0..self.gens.len() {
            for j in (i + 1)..self.gens.len() {
                let b = self.gens[i].lie_bracket(&self.gens[j])?;
                match self.contains(&b)? {
                    Some(certificate) => certificates.push(PairCertificate { i, j, certificate }),
                    None => {
                        let normal_form = self.saturated.normal_form(b.as_element())?;
                        let failure = Some(BracketFailure { i, j, normal_form });
                        return Ok(InvolutivityReport { ok: false, certificates, failure });
                    }
                }
            }
        }
        Ok(InvolutivityReport { ok: true, certificates, failure: None })
    }

    /// Certificates that every bracket of generators stays in the module.
    pub fn is_involutive(&self) -> Result<InvolutivityReport, FoliationError> {
        match &self.involutivity {
            Some(r) => Ok(r.clone()),
            None => self.compute_involutivity(),
        }
    }

    /// Equality of saturated modules, certified in both directions.
    pub fn equals(&self, other: &SingularFoliation) -> Result<EqualityReport, FoliationError> {
        self.same_chart(&other.chart)?;
        let forward = other.gens.iter().map(|g| self.contains(g)).collect::<Result<Vec<_>, _>>()?;
        let backward = self.gens.iter().map(|g| other.contains(g)).collect::<Result<Vec<_>, _>>()?;
        let equal = forward.iter().chain(&backward).all(Option::is_some);
        Ok(EqualityReport { equal, forward, backward })
    }

    fn check_point(&self, p: &RationalPoint) -> Result<(), FoliationError> {
        self.same_chart(p.chart())
    }

    fn generator_values(&self, p: &RationalPoint) -> Vec<Vec<Rational>> {
        self.gens.iter().map(|g| g.as_element().evaluate(p.coords())).collect()
    }

    /// Dimension of `{X(p) : X in F}`, the leaf dimension at `p`.
    pub fn tangent_dim(&self, p: &RationalPoint) -> Result<usize, FoliationError> {
        self.check_point(p)?;
        Ok(span_rank(self.chart.dim(), &self.generator_values(p)))
    }

    fn syzygy_values(&self, p: &RationalPoint) -> Vec<Vec<Rational>> {
        self.syz.iter().map(|s| s.evaluate(p.coords())).collect()
    }

    /// `k - rank ev_p(Syz)`.
    pub fn fiber_dim(&self, p: &RationalPoint) -> Result<usize, FoliationError> {
        self.check_point(p)?;
        Ok(self.gens.len() - span_rank(self.gens.len(), &self.syzygy_values(p)))
    }

    /// Largest `m <= VANISHING_ORDER_CAP` with every generator component in
    /// the `m`-th power of the maximal ideal at `p`.
    pub fn vanishing_order(&self, p: &RationalPoint) -> Result<VanishingOrder, FoliationError> {
        self.check_point(p)?;
        let order = self
            .gens
            .iter()
            .flat_map(|g| g.components().iter())
            .filter_map(|c| c.order_at(p.coords()))
            .min();
        Ok(match order {
            Some(m) if m < VANISHING_ORDER_CAP => VanishingOrder { order: m, capped: false },
            _ => VanishingOrder { order: VANISHING_ORDER_CAP, capped: true },
        })
    }

    /// Basis of the isotropy algebra as coefficient vectors over the
    /// generators: a complement of `ev_p(Syz)` inside the kernel of evaluation.
    pub fn isotropy_basis(&self, p: &RationalPoint) -> Result<Vec<Vec<Rational>>, FoliationError> {
        self.check_point(p)?;
        let k = self.gens.len();
        let values = self.generator_values(p);
        let eval = Matrix::from_columns(self.chart.dim(), &values);
        let kernel = eval.nullspace();
        let mut chosen = span_basis(&self.syzygy_values(p));
        let base = chosen.len();
        for v in kernel {
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if span_rank(k, &trial) == trial.len() {
                chosen = trial;
            }
        }
        Ok(chosen.split_off(base))
    }

    /// The isotropy Lie algebra at `p`, with structure constants computed
    /// from the given basis lifts (each in the evaluation kernel).
    pub fn isotropy_algebra_with_basis(
        &self,
        p: &RationalPoint,
        basis: Vec<Vec<Rational>>,
    ) -> Result<LieAlgebraPresentation, FoliationError> {
        self.check_point(p)?;
        let report = self.is_involutive()?;
        if let Some(f) = &report.failure {
            return Err(FoliationError::NotInvolutive { i: f.i, j: f.j });
        }
        let k = self.gens.len();
        let hp = self.avoid.evaluate(p.coords());
        // bracket[i][j] = class of [X_i, X_j] in Q^k.
        let mut bracket = alloc::vec![alloc::vec![alloc::vec![Rational::zero(); k]; k]; k];
        for pc in &report.certificates {
            let scale = hp.pow(pc.certificate.power).recip().expect("avoid product is nonzero on the domain");
            for (l, f) in pc.certificate.coefficients.iter().enumerate() {
                let v = &f.evaluate(p.coords()) * &scale;
                bracket[pc.j][pc.i][l] = -&v;
                bracket[pc.i][pc.j][l] = v;
            }
        }
        let d = basis.len();
        let mut columns = basis.clone();
        columns.extend(span_basis(&self.syzygy_values(p)));
        let solver = Matrix::from_columns(k, &columns);
        let mut constants = alloc::vec![alloc::vec![Vec::new(); d]; d];
        for a in 0..d {
            for b in 0..d {
                let mut w = alloc::vec![Rational::zero(); k];
                for (i, ci) in basis[a].iter().enumerate() {
                    if ci.is_zero() {
                        continue;
                    }
                    for (j, cj) in basis[b].iter().enumerate() {
                        if cj.is_zero() || i == j {
                            continue;
                        }
                        let f = ci * cj;
                        for (l, wl) in w.iter_mut().enumerate() {
                            *wl += &(&f * &bracket[i][j][l]);
                        }
                    }
                }
                let coords = solver
                    .solve(&w)
                    .ok_or(FoliationError::InvalidLieAlgebra("bracket leaves the isotropy kernel"))?;
                constants[a][b] = coords[..d].to_vec();
            }
        }
        LieAlgebraPresentation::new(constants, basis)
    }

    pub fn isotropy_algebra(&self, p: &RationalPoint) -> Result<LieAlgebraPresentation, FoliationError> {
        let basis = self.isotropy_basis(p)?;
        self.isotropy_algebra_with_basis(p, basis)
    }

    /// The same generators viewed on a renamed copy of the chart.
    pub fn rename_chart(&self, name: &str) -> Result<SingularFoliation, FoliationError> {
        let chart = Arc::new(self.chart.renamed(name));
        let gens = self.gens.iter().map(|g| g.rechart(&chart)).collect::<Result<Vec<_>, _>>()?;
        let f = SingularFoliation::new(&chart, gens)?;
        Ok(if self.involutivity.is_some() { f.checked()? } else { f })
    }

    /// Generators rendered with the chart's variable names.
    pub fn generator_strings(&self) -> Vec<String> {
        self.gens.iter().map(ToString::to_string).collect()
    }
}

/// `new_foliation`: builds the foliation with involutivity left unchecked.
pub fn new_foliation(chart: &Arc<Chart>, gens: Vec<VectorField>) -> Result<SingularFoliation, FoliationError> {
    SingularFoliation::new(chart, gens)
}

#[cfg(test)]
mod tests;
