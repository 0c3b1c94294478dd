//! Buchberger's algorithm for submodules of free modules `R^rank`.
//!
//! Pair selection follows the normal strategy (smallest lcm first, ties by
//! index). Pairs are discarded with Buchberger's chain criterion and, for
//! ideals only, the coprime-leading-monomial criterion. The result is always
//! the reduced basis, sorted by ascending leading term.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::sync::atomic::{AtomicU32, AtomicUsize, Ordering as AtomicOrdering};

use super::module::FreeModuleElement;
use super::monomial::{Monomial, ModuleOrder};
use super::poly::Polynomial;
use super::rational::Rational;
use super::AlgebraError;

static DEGREE_CAP: AtomicU32 = AtomicU32::new(GbLimits::DEFAULT_DEGREE);
static BASIS_CAP: AtomicUsize = AtomicUsize::new(GbLimits::DEFAULT_BASIS);

/// Bounds after which a Groebner computation aborts with a diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbLimits {
    pub max_degree: u32,
    pub max_basis: usize,
}

impl GbLimits {
    pub const DEFAULT_DEGREE: u32 = 40;
    pub const DEFAULT_BASIS: usize = 5000;

    /// The process-wide limits (defaults unless [`GbLimits::install`] ran).
    pub fn current() -> Self {
        GbLimits {
            max_degree: DEGREE_CAP.load(AtomicOrdering::Relaxed),
            max_basis: BASIS_CAP.load(AtomicOrdering::Relaxed),
        }
    }

    /// Sets the process-wide limits. Intended to be called once at startup.
    pub fn install(self) {
        DEGREE_CAP.store(self.max_degree, AtomicOrdering::Relaxed);
        BASIS_CAP.store(self.max_basis, AtomicOrdering::Relaxed);
    }
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits { max_degree: Self::DEFAULT_DEGREE, max_basis: Self::DEFAULT_BASIS }
    }
}

/// A module term `mono * e_pos` with its precomputed order key.
#[derive(Clone, Debug)]
pub(crate) struct Term {
    key: Vec<i64>,
    pub(crate) mono: Monomial,
    pub(crate) pos: usize,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for Term {}
impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl Term {
    fn new(order: &ModuleOrder, mono: Monomial, pos: usize) -> Self {
        Term { key: order.key(&mono, pos), mono, pos }
    }

    fn shifted(&self, shift: &Monomial, delta: &[i64]) -> Term {
        Term {
            key: self.key.iter().zip(delta).map(|(a, b)| a + b).collect(),
            mono: self.mono.mul(shift),
            pos: self.pos,
        }
    }
}

/// Key increment produced by multiplying a term by `m`: the monomial part of
/// every key is linear in the exponents, the position entries are unchanged.
fn key_delta(order: &ModuleOrder, m: &Monomial) -> Vec<i64> {
    let mut d = order.key(m, 0);
    if order.split.is_some() {
        d[0] = 0;
    }
    let last = d.len() - 1;
    d[last] = 0;
    d
}

/// Sparse module element with terms sorted in descending order.
#[derive(Clone, Debug)]
pub(crate) struct SVec {
    pub(crate) terms: Vec<(Term, Rational)>,
}

impl SVec {
    fn from_element(order: &ModuleOrder, e: &FreeModuleElement) -> SVec {
        let mut terms: Vec<(Term, Rational)> = e
            .components()
            .iter()
            .enumerate()
            .flat_map(|(pos, p)| p.terms().map(move |(m, c)| (pos, m.clone(), c.clone())))
            .map(|(pos, m, c)| (Term::new(order, m, pos), c))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        SVec { terms }
    }

    fn to_element(&self, nvars: usize, rank: usize) -> FreeModuleElement {
        let mut comps: Vec<Polynomial> = (0..rank).map(|_| Polynomial::zero(nvars)).collect();
        for (t, c) in &self.terms {
            comps[t.pos].add_term(t.mono.clone(), c);
        }
        FreeModuleElement::with_ring(nvars, comps)
    }

    pub(crate) fn lead(&self) -> Option<&Term> {
        self.terms.first().map(|(t, _)| t)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        if let Some((_, lc)) = self.terms.first() {
            if !lc.is_one() {
                let inv = lc.recip().expect("nonzero leading coefficient");
                for (_, c) in &mut self.terms {
                    *c *= &inv;
                }
            }
        }
    }

    fn max_degree(&self) -> u32 {
        self.terms.iter().map(|(t, _)| t.mono.degree()).max().unwrap_or(0)
    }

    /// `coef * m * self`, terms kept in descending order.
    fn scaled(&self, order: &ModuleOrder, m: &Monomial, coef: &Rational) -> Vec<(Term, Rational)> {
        let delta = key_delta(order, m);
        self.terms.iter().map(|(t, c)| (t.shifted(m, &delta), c * coef)).collect()
    }
}

fn accumulate(acc: &mut BTreeMap<Term, Rational>, terms: Vec<(Term, Rational)>) {
    for (t, c) in terms {
        match acc.entry(t) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// Full reduction of `v` modulo monic `basis` elements.
fn reduce(order: &ModuleOrder, basis: &[SVec], skip: Option<usize>, v: &SVec) -> SVec {
    let mut acc: BTreeMap<Term, Rational> = v.terms.iter().cloned().collect();
    let mut rem = Vec::new();
    while let Some((t, c)) = acc.pop_last() {
        let divisor = basis.iter().enumerate().find(|(i, g)| {
            Some(*i) != skip && g.lead().is_some_and(|l| l.pos == t.pos && l.mono.divides(&t.mono))
        });
        match divisor {
            Some((_, g)) => {
                let lead = g.lead().expect("nonzero basis element");
                let q = lead.mono.quotient(&t.mono);
                let tail = SVec { terms: g.terms[1..].to_vec() };
                accumulate(&mut acc, tail.scaled(order, &q, &-&c));
            }
            None => rem.push((t, c)),
        }
    }
    SVec { terms: rem }
}

fn s_vector(order: &ModuleOrder, f: &SVec, g: &SVec) -> SVec {
    let lf = f.lead().expect("nonzero");
    let lg = g.lead().expect("nonzero");
    let lcm = lf.mono.lcm(&lg.mono);
    let mf = lf.mono.quotient(&lcm);
    let mg = lg.mono.quotient(&lcm);
    let mut acc: BTreeMap<Term, Rational> = BTreeMap::new();
    accumulate(&mut acc, f.scaled(order, &mf, &Rational::one()));
    accumulate(&mut acc, g.scaled(order, &mg, &-Rational::one()));
    SVec { terms: acc.into_iter().rev().collect() }
}

/// A reduced Groebner basis of a submodule of `R^rank`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    rank: usize,
    order: ModuleOrder,
    elems: Vec<SVec>,
}

impl GroebnerBasis {
    /// Runs Buchberger's algorithm on `gens`, all of which must have rank
    /// `rank` over a ring with `nvars` variables.
    pub fn compute(
        gens: &[FreeModuleElement],
        nvars: usize,
        rank: usize,
        order: ModuleOrder,
    ) -> Result<Self, AlgebraError> {
        Self::compute_with_limits(gens, nvars, rank, order, GbLimits::current())
    }

    pub fn compute_with_limits(
        gens: &[FreeModuleElement],
        nvars: usize,
        rank: usize,
        order: ModuleOrder,
        limits: GbLimits,
    ) -> Result<Self, AlgebraError> {
        for g in gens {
            super::check_shape(g, nvars, rank)?;
        }
        let mut basis: Vec<SVec> = Vec::new();
        let mut pairs: BTreeSet<(Term, usize, usize)> = BTreeSet::new();
        let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

        let push = |basis: &mut Vec<SVec>,
                        pairs: &mut BTreeSet<(Term, usize, usize)>,
                        pending: &mut BTreeSet<(usize, usize)>,
                        mut v: SVec|
         -> Result<(), AlgebraError> {
            v.make_monic();
            let deg = v.max_degree();
            if deg > limits.max_degree {
                return Err(AlgebraError::DegreeCapExceeded { degree: deg, cap: limits.max_degree });
            }
            if basis.len() + 1 > limits.max_basis {
                return Err(AlgebraError::BasisCapExceeded { size: basis.len() + 1, cap: limits.max_basis });
            }
            let new = basis.len();
            let lead = v.lead().expect("nonzero").clone();
            for (i, g) in basis.iter().enumerate() {
                let l = g.lead().expect("nonzero");
                if l.pos != lead.pos {
                    continue;
                }
                if rank == 1 && l.mono.coprime(&lead.mono) {
                    continue;
                }
                let lcm = Term::new(&order, l.mono.lcm(&lead.mono), lead.pos);
                pairs.insert((lcm, i, new));
                pending.insert((i, new));
            }
            basis.push(v);
            Ok(())
        };

        for g in gens {
            let v = SVec::from_element(&order, g);
            if !v.is_zero() {
                push(&mut basis, &mut pairs, &mut pending, v)?;
            }
        }

        while let Some((lcm, i, j)) = pairs.pop_first() {
            pending.remove(&(i, j));
            let chain = (0..basis.len()).any(|k| {
                if k == i || k == j {
                    return false;
                }
                let l = basis[k].lead().expect("nonzero");
                l.pos == lcm.pos
                    && l.mono.divides(&lcm.mono)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let s = s_vector(&order, &basis[i], &basis[j]);
            let h = reduce(&order, &basis, None, &s);
            if !h.is_zero() {
                push(&mut basis, &mut pairs, &mut pending, h)?;
            }
        }

        Ok(GroebnerBasis { nvars, rank, order, elems: interreduce(&order, basis) })
    }

    /// Wraps elements already known to form a reduced basis.
    pub(crate) fn from_reduced(nvars: usize, rank: usize, order: ModuleOrder, elems: Vec<FreeModuleElement>) -> Self {
        let mut elems: Vec<SVec> = elems.iter().map(|e| SVec::from_element(&order, e)).collect();
        elems.retain(|e| !e.is_zero());
        for e in &mut elems {
            e.make_monic();
        }
        elems.sort_by(|a, b| a.lead().cmp(&b.lead()));
        GroebnerBasis { nvars, rank, order, elems }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> ModuleOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Always true: only reduced bases are ever constructed.
    pub fn is_reduced(&self) -> bool {
        true
    }

    pub fn generators(&self) -> Vec<FreeModuleElement> {
        self.elems.iter().map(|e| e.to_element(self.nvars, self.rank)).collect()
    }

    /// Leading monomial and position of every basis element.
    pub fn leading_terms(&self) -> Vec<(Monomial, usize)> {
        self.elems
            .iter()
            .map(|e| {
                let t = e.lead().expect("nonzero");
                (t.mono.clone(), t.pos)
            })
            .collect()
    }

    pub(crate) fn lead_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.elems.iter().map(|e| e.lead().expect("nonzero").pos)
    }

    /// Unique remainder of multivariate division by this basis.
    pub fn normal_form(&self, e: &FreeModuleElement) -> Result<FreeModuleElement, AlgebraError> {
        super::check_shape(e, self.nvars, self.rank)?;
        let v = SVec::from_element(&self.order, e);
        Ok(reduce(&self.order, &self.elems, None, &v).to_element(self.nvars, self.rank))
    }

    pub fn contains(&self, e: &FreeModuleElement) -> Result<bool, AlgebraError> {
        Ok(self.normal_form(e)?.is_zero())
    }

    /// Every S-vector of every same-position pair reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                if self.elems[i].lead().map(|t| t.pos) != self.elems[j].lead().map(|t| t.pos) {
                    continue;
                }
                let s = s_vector(&self.order, &self.elems[i], &self.elems[j]);
                if !reduce(&self.order, &self.elems, None, &s).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Drops elements with a divisible leading term, reduces tails, sorts.
fn interreduce(order: &ModuleOrder, basis: Vec<SVec>) -> Vec<SVec> {
    let n = basis.len();
    let mut keep = alloc::vec![true; n];
    for i in 0..n {
        let li = basis[i].lead().expect("nonzero");
        for j in 0..n {
            if i == j || !keep[j] {
                continue;
            }
            let lj = basis[j].lead().expect("nonzero");
            if lj.pos == li.pos && lj.mono.divides(&li.mono) && (lj.mono != li.mono || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut min: Vec<SVec> = basis.into_iter().zip(keep).filter_map(|(b, k)| k.then_some(b)).collect();
    for i in 0..min.len() {
        let head = min[i].terms[0].clone();
        let tail = SVec { terms: min[i].terms[1..].to_vec() };
        let red = reduce(order, &min, Some(i), &tail);
        let mut terms = Vec::with_capacity(red.terms.len() + 1);
        terms.push(head);
        terms.extend(red.terms);
        min[i] = SVec { terms };
    }
    min.sort_by(|a, b| a.lead().cmp(&b.lead()));
    min
}
