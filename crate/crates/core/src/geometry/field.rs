use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::display::field_to_string;
use crate::algebra::{FreeModuleElement, Polynomial, Rational};

use super::{Chart, GeometryError, RationalPoint};

/// A polynomial vector field `sum_i X^i d/dx_i` on a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    chart: Arc<Chart>,
    comps: FreeModuleElement,
}

impl VectorField {
    pub fn new(chart: &Arc<Chart>, comps: Vec<Polynomial>) -> Result<Self, GeometryError> {
        let n = chart.dim();
        if comps.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: comps.len() });
        }
        if let Some(c) = comps.iter().find(|c| c.nvars() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: c.nvars() });
        }
        Ok(VectorField { chart: chart.clone(), comps: FreeModuleElement::with_ring(n, comps) })
    }

    pub fn from_element(chart: &Arc<Chart>, e: FreeModuleElement) -> Result<Self, GeometryError> {
        Self::new(chart, e.into_components())
    }

    pub fn zero(chart: &Arc<Chart>) -> Self {
        VectorField { chart: chart.clone(), comps: FreeModuleElement::zero(chart.dim(), chart.dim()) }
    }

    /// The coordinate field `d/dx_i`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        VectorField { chart: chart.clone(), comps: FreeModuleElement::unit(chart.dim(), chart.dim(), i) }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> &[Polynomial] {
        self.comps.components()
    }

    pub fn as_element(&self) -> &FreeModuleElement {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_zero()
    }

    fn same_chart(&self, other: &VectorField) -> Result<(), GeometryError> {
        if self.chart != other.chart {
            return Err(GeometryError::ChartMismatch {
                expected: self.chart.name().to_string(),
                found: other.chart.name().to_string(),
            });
        }
        Ok(())
    }

    /// The derivation `f -> sum_j X^j df/dx_j`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(self.chart.dim());
        for (j, xj) in self.components().iter().enumerate() {
            if !xj.is_zero() {
                acc = &acc + &(xj * &f.derivative(j));
            }
        }
        acc
    }

    /// `[X, Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i)`.
    pub fn lie_bracket(&self, other: &VectorField) -> Result<VectorField, GeometryError> {
        self.same_chart(other)?;
        let comps = self
            .components()
            .iter()
            .zip(other.components())
            .map(|(xi, yi)| &self.apply(yi) - &other.apply(xi))
            .collect();
        Ok(VectorField { chart: self.chart.clone(), comps: FreeModuleElement::with_ring(self.chart.dim(), comps) })
    }

    pub fn evaluate(&self, p: &RationalPoint) -> Result<Vec<Rational>, GeometryError> {
        if p.chart() != &self.chart {
            return Err(GeometryError::ChartMismatch {
                expected: self.chart.name().to_string(),
                found: p.chart().name().to_string(),
            });
        }
        Ok(self.comps.evaluate(p.coords()))
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField, GeometryError> {
        self.same_chart(other)?;
        Ok(VectorField { chart: self.chart.clone(), comps: &self.comps + &other.comps })
    }

    pub fn mul_poly(&self, f: &Polynomial) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.comps.mul_poly(f) }
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.comps.scale(c) }
    }

    /// The same components viewed on another chart with the same variables.
    pub fn rechart(&self, chart: &Arc<Chart>) -> Result<VectorField, GeometryError> {
        Self::new(chart, self.components().to_vec())
    }
}

impl core::fmt::Display for VectorField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s: String = field_to_string(self.components(), self.chart.vars());
        f.write_str(&s)
    }
}

/// `[X, Y]` for fields on a common chart.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, GeometryError> {
    x.lie_bracket(y)
}
