use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{Polynomial, Rational};

use super::GeometryError;

/// A coordinate domain: `R^n` minus the union of the zero sets of the
/// `avoid` polynomials. Points are sampled with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    name: String,
    vars: Vec<String>,
    avoid: Vec<Polynomial>,
    metadata: BTreeMap<String, String>,
}

impl Chart {
    pub fn new<S: Into<String>>(name: impl Into<String>, vars: impl IntoIterator<Item = S>) -> Result<Self, GeometryError> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(GeometryError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Chart { name: name.into(), vars, avoid: Vec::new(), metadata: BTreeMap::new() })
    }

    /// Euclidean space with variables `vars` and nothing removed.
    pub fn affine<S: Into<String>>(name: &str, vars: impl IntoIterator<Item = S>) -> Arc<Chart> {
        Arc::new(Chart::new(name, vars).expect("distinct variable names"))
    }

    pub fn with_avoid(mut self, p: Polynomial) -> Result<Self, GeometryError> {
        if p.is_zero() {
            return Err(GeometryError::ZeroAvoid);
        }
        if p.nvars() != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), found: p.nvars() });
        }
        if !self.avoid.contains(&p) {
            self.avoid.push(p);
        }
        Ok(self)
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn renamed(&self, name: &str) -> Chart {
        let mut c = self.clone();
        c.name = name.to_string();
        c
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn avoid(&self) -> &[Polynomial] {
        &self.avoid
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn meta_flag(&self, key: &str) -> bool {
        self.metadata.get(key).is_some_and(|v| v == "true")
    }

    /// Product of the avoided polynomials (`1` if none); the module of a
    /// foliation on this chart is saturated by it.
    pub fn avoid_product(&self) -> Polynomial {
        self.avoid.iter().fold(Polynomial::one(self.dim()), |acc, p| &acc * p)
    }

    pub fn contains(&self, coords: &[Rational]) -> bool {
        coords.len() == self.dim() && self.avoid.iter().all(|p| !p.evaluate(coords).is_zero())
    }

    pub fn coordinate(&self, i: usize) -> Polynomial {
        Polynomial::var(self.dim(), i)
    }

    /// `self x other`, with `other`'s variables renamed by suffixing when
    /// they clash. Avoided polynomials of both factors are kept.
    pub fn product(&self, other: &Chart) -> Chart {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            let mut name = v.clone();
            let mut k = 2;
            while vars.contains(&name) {
                name = alloc::format!("{v}_{k}");
                k += 1;
            }
            vars.push(name);
        }
        let n = vars.len();
        let left: Vec<usize> = (0..self.dim()).collect();
        let right: Vec<usize> = (self.dim()..n).collect();
        let mut avoid: Vec<Polynomial> = self.avoid.iter().map(|p| p.embed(n, &left)).collect();
        avoid.extend(other.avoid.iter().map(|p| p.embed(n, &right)));
        Chart { name: alloc::format!("{}*{}", self.name, other.name), vars, avoid, metadata: BTreeMap::new() }
    }

    /// The affine slice `{x_j = c_j}` with the remaining variables as
    /// coordinates. Avoided polynomials are restricted; those that become
    /// nonzero constants are dropped.
    pub fn slice(&self, fixed: &[(usize, Rational)]) -> Result<(Chart, Vec<Polynomial>), GeometryError> {
        let free: Vec<usize> = (0..self.dim()).filter(|i| !fixed.iter().any(|(j, _)| j == i)).collect();
        let m = free.len();
        let mut subs = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            match fixed.iter().find(|(j, _)| *j == i) {
                Some((_, c)) => subs.push(Polynomial::constant(m, c.clone())),
                None => subs.push(Polynomial::var(m, free.iter().position(|&f| f == i).expect("free index"))),
            }
        }
        let fixed_desc: Vec<String> = fixed.iter().map(|(j, c)| alloc::format!("{}={}", self.vars[*j], c)).collect();
        let name = alloc::format!("{}|{}", self.name, fixed_desc.join(","));
        let mut chart = Chart::new(name, free.iter().map(|&i| self.vars[i].clone()))?;
        for a in &self.avoid {
            let r = if self.dim() == 0 { a.clone() } else { a.compose(&subs) };
            if r.is_zero() {
                return Err(GeometryError::OutsideDomain { chart: chart.name });
            }
            if !r.is_constant() {
                chart = chart.with_avoid(r)?;
            }
        }
        Ok((chart, subs))
    }
}

/// A point of a chart's domain with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    chart: Arc<Chart>,
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(chart: &Arc<Chart>, coords: Vec<Rational>) -> Result<Self, GeometryError> {
        if coords.len() != chart.dim() {
            return Err(GeometryError::DimensionMismatch { expected: chart.dim(), found: coords.len() });
        }
        if !chart.contains(&coords) {
            return Err(GeometryError::OutsideDomain { chart: chart.name().to_string() });
        }
        Ok(RationalPoint { chart: chart.clone(), coords })
    }

    pub fn origin(chart: &Arc<Chart>) -> Result<Self, GeometryError> {
        Self::new(chart, alloc::vec![Rational::zero(); chart.dim()])
    }

    pub fn from_integers(chart: &Arc<Chart>, coords: &[i64]) -> Result<Self, GeometryError> {
        Self::new(chart, coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}
