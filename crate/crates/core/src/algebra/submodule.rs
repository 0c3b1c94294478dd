//! Finitely generated submodules of `R^rank` and the operations built on
//! Groebner bases: certified membership, syzygies, saturation, intersection
//! and linear solving.
//!
//! Membership certificates and syzygies both come from one computation: a
//! Groebner basis of the graph module generated by `(g_i, e_i)` in
//! `R^rank + R^k`, under an order in which the first `rank` positions
//! dominate. Every element `(h, a)` of that module satisfies
//! `h = sum_i a_i g_i`; the elements with `h = 0` are exactly the syzygies.

use alloc::vec::Vec;

use super::groebner::GroebnerBasis;
use super::module::FreeModuleElement;
use super::monomial::{ModuleOrder, Monomial, MonomialOrder};
use super::poly::Polynomial;
use super::{check_shape, AlgebraError, SATURATION_POWER_CAP};

/// Coefficients `c_i` with `h^power * target = sum_i c_i g_i`, where `h` is
/// the multiplier fixed by context (the product of a chart's avoided
/// polynomials, or `1` when `power == 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub power: u32,
    pub coefficients: Vec<Polynomial>,
}

impl MembershipCertificate {
    pub fn plain(coefficients: Vec<Polynomial>) -> Self {
        MembershipCertificate { power: 0, coefficients }
    }

    /// Re-expands the combination and compares it with `h^power * target`.
    pub fn verify(&self, target: &FreeModuleElement, gens: &[FreeModuleElement], h: &Polynomial) -> bool {
        if self.coefficients.len() != gens.len() {
            return false;
        }
        if gens.iter().any(|g| g.rank() != target.rank() || g.nvars() != target.nvars()) {
            return false;
        }
        let lhs = FreeModuleElement::combination(&self.coefficients, gens, target.nvars(), target.rank());
        let rhs = if self.power == 0 { target.clone() } else { target.mul_poly(&h.pow(self.power)) };
        lhs == rhs
    }
}

/// A submodule of `R^rank` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    nvars: usize,
    rank: usize,
    gens: Vec<FreeModuleElement>,
}

impl Submodule {
    pub fn new(nvars: usize, rank: usize, gens: Vec<FreeModuleElement>) -> Result<Self, AlgebraError> {
        for g in &gens {
            check_shape(g, nvars, rank)?;
        }
        Ok(Submodule { nvars, rank, gens })
    }

    pub fn zero(nvars: usize, rank: usize) -> Self {
        Submodule { nvars, rank, gens: Vec::new() }
    }

    pub fn free(nvars: usize, rank: usize) -> Self {
        Submodule { nvars, rank, gens: (0..rank).map(|i| FreeModuleElement::unit(nvars, rank, i)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[FreeModuleElement] {
        &self.gens
    }

    pub fn into_generators(self) -> Vec<FreeModuleElement> {
        self.gens
    }

    pub fn groebner(&self) -> Result<GroebnerBasis, AlgebraError> {
        GroebnerBasis::compute(&self.gens, self.nvars, self.rank, ModuleOrder::grevlex())
    }

    pub fn presentation(&self) -> Result<Presentation, AlgebraError> {
        Presentation::new(self)
    }

    /// A certificate iff `e` lies in the module.
    pub fn member(&self, e: &FreeModuleElement) -> Result<Option<MembershipCertificate>, AlgebraError> {
        self.presentation()?.certificate(e)
    }

    /// Generators of the syzygy module, a submodule of `R^k` for `k` generators.
    pub fn syzygies(&self) -> Result<Submodule, AlgebraError> {
        let p = self.presentation()?;
        Ok(Submodule { nvars: self.nvars, rank: self.gens.len(), gens: p.syzygies() })
    }

    /// `(M : h^inf)` by elimination of `u` from `M R[u] + (u h - 1) R[u]^rank`.
    pub fn saturate(&self, h: &Polynomial) -> Result<Saturation, AlgebraError> {
        if h.is_zero() {
            return Err(AlgebraError::ZeroSaturator);
        }
        if h.nvars() != self.nvars {
            return Err(AlgebraError::RingMismatch { expected: self.nvars, found: h.nvars() });
        }
        let presentation = self.presentation()?;
        if h.is_constant() {
            let gens = presentation.module_basis().generators();
            let powers = alloc::vec![0; gens.len()];
            return Ok(Saturation { module: Submodule { nvars: self.nvars, rank: self.rank, gens }, powers });
        }
        let n1 = self.nvars + 1;
        let shift: Vec<usize> = (1..n1).collect();
        let u = Polynomial::var(n1, 0);
        let uh1 = &(&u * &h.embed(n1, &shift)) - &Polynomial::one(n1);
        let mut ext: Vec<FreeModuleElement> = self.gens.iter().map(|g| g.embed(n1, &shift)).collect();
        ext.extend((0..self.rank).map(|i| FreeModuleElement::unit(n1, self.rank, i).mul_poly(&uh1)));
        let gens = eliminate_leading_vars(&ext, n1, 1, self.rank)?;

        let mut powers = Vec::with_capacity(gens.len());
        for g in &gens {
            let cert = presentation.local_certificate(g, h)?.ok_or(AlgebraError::PowerCapExceeded {
                cap: SATURATION_POWER_CAP,
            })?;
            powers.push(cert.power);
        }
        Ok(Saturation { module: Submodule { nvars: self.nvars, rank: self.rank, gens }, powers })
    }

    /// `M ∩ N` by elimination of `t` from `t M + (1 - t) N` over `R[t]`.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule, AlgebraError> {
        if other.rank != self.rank {
            return Err(AlgebraError::RankMismatch { expected: self.rank, found: other.rank });
        }
        if other.nvars != self.nvars {
            return Err(AlgebraError::RingMismatch { expected: self.nvars, found: other.nvars });
        }
        let n1 = self.nvars + 1;
        let shift: Vec<usize> = (1..n1).collect();
        let t = Polynomial::var(n1, 0);
        let one_minus_t = &Polynomial::one(n1) - &t;
        let mut ext: Vec<FreeModuleElement> = self.gens.iter().map(|g| g.embed(n1, &shift).mul_poly(&t)).collect();
        ext.extend(other.gens.iter().map(|g| g.embed(n1, &shift).mul_poly(&one_minus_t)));
        let gens = eliminate_leading_vars(&ext, n1, 1, self.rank)?;

        let pa = self.presentation()?;
        let pb = other.presentation()?;
        for g in &gens {
            if pa.certificate(g)?.is_none() || pb.certificate(g)?.is_none() {
                return Err(AlgebraError::CertificateMismatch("intersection generator outside an operand"));
            }
        }
        Ok(Submodule { nvars: self.nvars, rank: self.rank, gens })
    }

    /// Generators of `M ∩ R'^rank`, where `R'` is the ring of the variables
    /// not listed in `vars`, re-indexed into `R'` in their original order.
    pub fn eliminate(&self, vars: &[usize]) -> Result<Submodule, AlgebraError> {
        if let Some(&v) = vars.iter().find(|&&v| v >= self.nvars) {
            return Err(AlgebraError::RingMismatch { expected: self.nvars, found: v + 1 });
        }
        let kept: Vec<usize> = (0..self.nvars).filter(|v| !vars.contains(v)).collect();
        let elim = self.nvars - kept.len();
        // mapping[old] = new position, eliminated variables first
        let mut mapping = alloc::vec![0; self.nvars];
        for (new, old) in (0..self.nvars).filter(|v| vars.contains(v)).chain(kept.iter().copied()).enumerate() {
            mapping[old] = new;
        }
        let gens: Vec<FreeModuleElement> = self.gens.iter().map(|g| g.embed(self.nvars, &mapping)).collect();
        let gens = eliminate_leading_vars(&gens, self.nvars, elim, self.rank)?;
        Ok(Submodule { nvars: kept.len(), rank: self.rank, gens })
    }

    /// Submodule generated by the union of both generator lists.
    pub fn sum(&self, other: &Submodule) -> Result<Submodule, AlgebraError> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::new(self.nvars, self.rank, gens)
    }
}

/// Result of [`Submodule::saturate`]: generators `e'_j` of `(M : h^inf)` and
/// for each a verified exponent `m_j` with `h^{m_j} e'_j ∈ M`.
#[derive(Clone, Debug)]
pub struct Saturation {
    pub module: Submodule,
    pub powers: Vec<u32>,
}

/// Groebner data of the graph module `<(g_i, e_i)>`; answers membership with
/// certificates and yields the syzygies of the generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    nvars: usize,
    rank: usize,
    gens: Vec<FreeModuleElement>,
    graph: GroebnerBasis,
}

impl Presentation {
    pub fn new(sub: &Submodule) -> Result<Self, AlgebraError> {
        let k = sub.gens.len();
        let graph_gens: Vec<FreeModuleElement> = sub
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| g.concat(&FreeModuleElement::unit(sub.nvars, k, i)))
            .collect();
        let order = ModuleOrder::grevlex().with_split(sub.rank);
        let graph = GroebnerBasis::compute(&graph_gens, sub.nvars, sub.rank + k, order)?;
        Ok(Presentation { nvars: sub.nvars, rank: sub.rank, gens: sub.gens.clone(), graph })
    }

    pub fn generators(&self) -> &[FreeModuleElement] {
        &self.gens
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduced grevlex basis of the module itself.
    pub fn module_basis(&self) -> GroebnerBasis {
        let elems: Vec<FreeModuleElement> = self
            .graph
            .generators()
            .into_iter()
            .zip(self.graph.lead_positions())
            .filter(|(_, pos)| *pos < self.rank)
            .map(|(e, _)| e.slice(0..self.rank))
            .collect();
        GroebnerBasis::from_reduced(self.nvars, self.rank, ModuleOrder::grevlex(), elems)
    }

    pub fn syzygies(&self) -> Vec<FreeModuleElement> {
        let k = self.gens.len();
        self.graph
            .generators()
            .into_iter()
            .zip(self.graph.lead_positions())
            .filter(|(_, pos)| *pos >= self.rank)
            .map(|(e, _)| e.slice(self.rank..self.rank + k))
            .collect()
    }

    /// Certificate with `power = 0`, re-verified by expansion.
    pub fn certificate(&self, e: &FreeModuleElement) -> Result<Option<MembershipCertificate>, AlgebraError> {
        check_shape(e, self.nvars, self.rank)?;
        let k = self.gens.len();
        let lifted = e.concat(&FreeModuleElement::zero(self.nvars, k));
        let rem = self.graph.normal_form(&lifted)?;
        if !rem.slice(0..self.rank).is_zero() {
            return Ok(None);
        }
        let coefficients: Vec<Polynomial> = rem.components()[self.rank..].iter().map(|c| -c).collect();
        let cert = MembershipCertificate::plain(coefficients);
        if !cert.verify(e, &self.gens, &Polynomial::one(self.nvars)) {
            return Err(AlgebraError::CertificateMismatch("membership"));
        }
        Ok(Some(cert))
    }

    /// Smallest `m <= SATURATION_POWER_CAP` with `h^m e` in the module, with
    /// its certificate. Callers should first establish membership in the
    /// saturation; otherwise this walks the whole exponent range.
    pub fn local_certificate(
        &self,
        e: &FreeModuleElement,
        h: &Polynomial,
    ) -> Result<Option<MembershipCertificate>, AlgebraError> {
        let mut scaled = e.clone();
        for m in 0..=SATURATION_POWER_CAP {
            if let Some(mut cert) = self.certificate(&scaled)? {
                cert.power = m;
                return Ok(Some(cert));
            }
            if h.is_constant() {
                return Ok(None);
            }
            scaled = scaled.mul_poly(h);
        }
        Ok(None)
    }
}

/// Elements free of the first `elim` variables in the block-order basis,
/// re-indexed into the ring of the remaining variables.
fn eliminate_leading_vars(
    gens: &[FreeModuleElement],
    nvars: usize,
    elim: usize,
    rank: usize,
) -> Result<Vec<FreeModuleElement>, AlgebraError> {
    let order = ModuleOrder::top(MonomialOrder::Block { elim });
    let gb = GroebnerBasis::compute(gens, nvars, rank, order)?;
    let rest = nvars - elim;
    let kept: Vec<FreeModuleElement> = gb
        .generators()
        .into_iter()
        .filter(|g| g.components().iter().all(|c| (0..elim).all(|v| !c.depends_on(v))))
        .map(|g| g.map_components(rest, |c| drop_leading_vars(c, elim)))
        .collect();
    // Restricted to the remaining variables the block order is grevlex, so the
    // kept elements already form a reduced basis; re-sorting fixes the order.
    Ok(GroebnerBasis::from_reduced(rest, rank, ModuleOrder::grevlex(), kept).generators())
}

fn drop_leading_vars(p: &Polynomial, elim: usize) -> Polynomial {
    Polynomial::from_terms(
        p.nvars() - elim,
        p.terms().map(|(m, c)| (Monomial::from_exponents(m.exponents()[elim..].to_vec()), c.clone())),
    )
}

/// Solves `A s = b` over the polynomial ring; `a` is row-major `m x k`.
pub fn solve_linear(a: &[Vec<Polynomial>], b: &[Polynomial]) -> Result<Option<Vec<Polynomial>>, AlgebraError> {
    let (sub, target) = column_module(a, b)?;
    Ok(sub.member(&target)?.map(|c| c.coefficients))
}

/// Solves `A s = h^m b` for the smallest `m`, i.e. `A s' = b` over the ring
/// localized at `h` with `s' = s / h^m`.
pub fn solve_linear_local(
    a: &[Vec<Polynomial>],
    b: &[Polynomial],
    h: &Polynomial,
) -> Result<Option<MembershipCertificate>, AlgebraError> {
    let (sub, target) = column_module(a, b)?;
    let sat = sub.saturate(h)?;
    let sat_gb = GroebnerBasis::from_reduced(sub.nvars, sub.rank, ModuleOrder::grevlex(), sat.module.gens);
    if !sat_gb.contains(&target)? {
        return Ok(None);
    }
    sub.presentation()?.local_certificate(&target, h)
}

fn column_module(a: &[Vec<Polynomial>], b: &[Polynomial]) -> Result<(Submodule, FreeModuleElement), AlgebraError> {
    let m = b.len();
    if a.len() != m {
        return Err(AlgebraError::RankMismatch { expected: m, found: a.len() });
    }
    let nvars = b.first().map(Polynomial::nvars).unwrap_or(0);
    let k = a.first().map_or(0, Vec::len);
    for row in a {
        if row.len() != k {
            return Err(AlgebraError::RankMismatch { expected: k, found: row.len() });
        }
    }
    let cols: Vec<FreeModuleElement> =
        (0..k).map(|j| FreeModuleElement::with_ring(nvars, a.iter().map(|row| row[j].clone()).collect())).collect();
    let sub = Submodule::new(nvars, m, cols)?;
    Ok((sub, FreeModuleElement::with_ring(nvars, b.to_vec())))
}
