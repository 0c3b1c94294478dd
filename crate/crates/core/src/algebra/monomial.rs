//! Exponent vectors and monomial / module term orders.

use alloc::vec::Vec;
use core::cmp::Ordering;

/// A monomial `x_0^{e_0} ... x_{n-1}^{e_{n-1}}` stored as its exponent vector.
///
/// The derived `Ord` is plain lexicographic comparison of exponent vectors; it
/// is used only for canonical storage, never as a Groebner order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(alloc::vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = alloc::vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self | other`.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Total orders on monomials used for Groebner computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic, `x_0 > x_1 > ...`.
    Grevlex,
    Lex,
    /// The first `elim` variables form a grevlex block that dominates a
    /// grevlex block on the remaining variables.
    Block { elim: usize },
}

impl MonomialOrder {
    /// Appends a key whose lexicographic order (larger = bigger monomial)
    /// realises this monomial order.
    pub(crate) fn extend_key(&self, m: &[u32], key: &mut Vec<i64>) {
        match *self {
            MonomialOrder::Grevlex => grevlex_key(m, key),
            MonomialOrder::Lex => key.extend(m.iter().map(|&e| e as i64)),
            MonomialOrder::Block { elim } => {
                let elim = elim.min(m.len());
                grevlex_key(&m[..elim], key);
                grevlex_key(&m[elim..], key);
            }
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let mut ka = Vec::new();
        let mut kb = Vec::new();
        self.extend_key(a.exponents(), &mut ka);
        self.extend_key(b.exponents(), &mut kb);
        ka.cmp(&kb)
    }
}

fn grevlex_key(m: &[u32], key: &mut Vec<i64>) {
    key.push(m.iter().map(|&e| e as i64).sum());
    key.extend(m.iter().rev().map(|&e| -(e as i64)));
}

/// A term order on the free module `R^rank`.
///
/// Terms `m e_i` are compared term-over-position with `e_0 > e_1 > ...`.
/// When `split` is set, every position below `split` dominates every position
/// at or above it, which turns the order into an elimination order for the
/// trailing positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub monomial: MonomialOrder,
    pub split: Option<usize>,
}

impl ModuleOrder {
    pub const fn top(monomial: MonomialOrder) -> Self {
        ModuleOrder { monomial, split: None }
    }

    pub const fn grevlex() -> Self {
        ModuleOrder::top(MonomialOrder::Grevlex)
    }

    pub const fn with_split(self, split: usize) -> Self {
        ModuleOrder { monomial: self.monomial, split: Some(split) }
    }

    pub(crate) fn key(&self, m: &Monomial, pos: usize) -> Vec<i64> {
        let mut key = Vec::with_capacity(2 * m.nvars() + 4);
        if let Some(s) = self.split {
            key.push(if pos < s { 1 } else { 0 });
        }
        self.monomial.extend_key(m.exponents(), &mut key);
        key.push(-(pos as i64));
        key
    }
}

impl Default for ModuleOrder {
    fn default() -> Self {
        ModuleOrder::grevlex()
    }
}
