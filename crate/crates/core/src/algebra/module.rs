//! Elements of free modules `R^rank` over a polynomial ring.

use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use super::poly::Polynomial;
use super::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FreeModuleElement {
    nvars: usize,
    comps: Vec<Polynomial>,
}

impl FreeModuleElement {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        FreeModuleElement { nvars, comps: (0..rank).map(|_| Polynomial::zero(nvars)).collect() }
    }

    /// The standard basis vector `e_i`.
    pub fn unit(nvars: usize, rank: usize, i: usize) -> Self {
        let mut e = Self::zero(nvars, rank);
        e.comps[i] = Polynomial::one(nvars);
        e
    }

    /// Panics if the components live in different rings or the list is empty.
    pub fn new(comps: Vec<Polynomial>) -> Self {
        assert!(!comps.is_empty(), "a free module element needs at least one component");
        let nvars = comps[0].nvars();
        assert!(comps.iter().all(|c| c.nvars() == nvars), "components in different rings");
        FreeModuleElement { nvars, comps }
    }

    pub fn with_ring(nvars: usize, comps: Vec<Polynomial>) -> Self {
        assert!(comps.iter().all(|c| c.nvars() == nvars), "components in different rings");
        FreeModuleElement { nvars, comps }
    }

    pub fn scalar(p: Polynomial) -> Self {
        Self::new(alloc::vec![p])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.comps
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.comps.iter().filter_map(Polynomial::total_degree).max()
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Self {
        FreeModuleElement { nvars: self.nvars, comps: self.comps.iter().map(|c| c * f).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FreeModuleElement { nvars: self.nvars, comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Vec<Rational> {
        self.comps.iter().map(|c| c.evaluate(point)).collect()
    }

    pub fn map_components(&self, nvars: usize, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        FreeModuleElement::with_ring(nvars, self.comps.iter().map(f).collect())
    }

    pub fn embed(&self, nvars: usize, mapping: &[usize]) -> Self {
        self.map_components(nvars, |c| c.embed(nvars, mapping))
    }

    /// Concatenates the components of `self` and `other`.
    pub fn concat(&self, other: &FreeModuleElement) -> Self {
        assert_eq!(self.nvars, other.nvars, "ring mismatch");
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        FreeModuleElement { nvars: self.nvars, comps }
    }

    /// Components `range` as a new element.
    pub fn slice(&self, range: core::ops::Range<usize>) -> Self {
        FreeModuleElement { nvars: self.nvars, comps: self.comps[range].to_vec() }
    }

    /// `sum_i coeffs[i] * gens[i]`.
    pub fn combination(coeffs: &[Polynomial], gens: &[FreeModuleElement], nvars: usize, rank: usize) -> Self {
        assert_eq!(coeffs.len(), gens.len(), "coefficient count mismatch");
        let mut acc = FreeModuleElement::zero(nvars, rank);
        for (c, g) in coeffs.iter().zip(gens) {
            if !c.is_zero() {
                acc = &acc + &g.mul_poly(c);
            }
        }
        acc
    }
}

impl Add for &FreeModuleElement {
    type Output = FreeModuleElement;
    fn add(self, rhs: &FreeModuleElement) -> FreeModuleElement {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        FreeModuleElement { nvars: self.nvars, comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &FreeModuleElement {
    type Output = FreeModuleElement;
    fn sub(self, rhs: &FreeModuleElement) -> FreeModuleElement {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        FreeModuleElement { nvars: self.nvars, comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &FreeModuleElement {
    type Output = FreeModuleElement;
    fn neg(self) -> FreeModuleElement {
        FreeModuleElement { nvars: self.nvars, comps: self.comps.iter().map(|a| -a).collect() }
    }
}
