//! Exact polynomial arithmetic, Groebner bases of submodules, syzygies,
//! saturation, intersection and certified linear solving.

pub mod display;
mod groebner;
pub mod linalg;
mod module;
mod monomial;
mod poly;
mod rational;
mod submodule;

pub use groebner::{GbLimits, GroebnerBasis};
pub use module::FreeModuleElement;
pub use monomial::{ModuleOrder, Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use rational::{ParseRationalError, Rational};
pub use submodule::{solve_linear, solve_linear_local, MembershipCertificate, Presentation, Saturation, Submodule};

/// Cap on the exponent `m` searched when extracting `h^m`-witnesses.
pub const SATURATION_POWER_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("expected a ring with {expected} variables, found {found}")]
    RingMismatch { expected: usize, found: usize },
    #[error("Groebner basis element of degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("Groebner basis size {size} exceeds the cap {cap}")]
    BasisCapExceeded { size: usize, cap: usize },
    #[error("cannot saturate by the zero polynomial")]
    ZeroSaturator,
    #[error("no power h^m with m <= {cap} brings the element into the module")]
    PowerCapExceeded { cap: u32 },
    #[error("certificate re-expansion failed: {0}")]
    CertificateMismatch(&'static str),
}

impl AlgebraError {
    /// True for the resource caps (degree, basis size, saturation power).
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            AlgebraError::DegreeCapExceeded { .. }
                | AlgebraError::BasisCapExceeded { .. }
                | AlgebraError::PowerCapExceeded { .. }
        )
    }
}

pub(crate) fn check_shape(e: &FreeModuleElement, nvars: usize, rank: usize) -> Result<(), AlgebraError> {
    if e.rank() != rank {
        return Err(AlgebraError::RankMismatch { expected: rank, found: e.rank() });
    }
    if e.nvars() != nvars {
        return Err(AlgebraError::RingMismatch { expected: nvars, found: e.nvars() });
    }
    Ok(())
}

/// Reduced Groebner basis of the submodule generated by `gens`.
pub fn buchberger(
    gens: &[FreeModuleElement],
    nvars: usize,
    rank: usize,
    order: ModuleOrder,
) -> Result<GroebnerBasis, AlgebraError> {
    GroebnerBasis::compute(gens, nvars, rank, order)
}

/// Remainder of `e` on division by `gb`; zero iff `e` lies in the module.
pub fn normal_form(e: &FreeModuleElement, gb: &GroebnerBasis) -> Result<FreeModuleElement, AlgebraError> {
    gb.normal_form(e)
}
