use alloc::vec::Vec;

use crate::algebra::linalg::{span_basis, Matrix};
use crate::algebra::Rational;

use super::FoliationError;

/// A finite-dimensional Lie algebra given by structure constants
/// `[b_i, b_j] = sum_k c[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraPresentation {
    pub dim: usize,
    pub structure_constants: Vec<Vec<Vec<Rational>>>,
    /// For isotropy algebras: coefficients over the foliation's generators of
    /// a constant-coefficient field representing each basis element. Empty
    /// for algebras given abstractly.
    pub basis_witness: Vec<Vec<Rational>>,
}

/// Isomorphism invariants computed from structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieInvariants {
    pub dim: usize,
    pub derived_series_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub center_dim: usize,
    pub abelianization_dim: usize,
}

impl LieAlgebraPresentation {
    /// Checks shape, antisymmetry and the Jacobi identity.
    pub fn new(structure_constants: Vec<Vec<Vec<Rational>>>, basis_witness: Vec<Vec<Rational>>) -> Result<Self, FoliationError> {
        let dim = structure_constants.len();
        let shaped = structure_constants.iter().all(|row| row.len() == dim && row.iter().all(|v| v.len() == dim));
        if !shaped {
            return Err(FoliationError::InvalidLieAlgebra("structure constants are not d x d x d"));
        }
        let l = LieAlgebraPresentation { dim, structure_constants, basis_witness };
        if !l.is_antisymmetric() {
            return Err(FoliationError::InvalidLieAlgebra("bracket is not antisymmetric"));
        }
        if !l.satisfies_jacobi() {
            return Err(FoliationError::InvalidLieAlgebra("Jacobi identity fails"));
        }
        Ok(l)
    }

    pub fn abelian(dim: usize) -> Self {
        let zero = alloc::vec![alloc::vec![alloc::vec![Rational::zero(); dim]; dim]; dim];
        LieAlgebraPresentation { dim, structure_constants: zero, basis_witness: Vec::new() }
    }

    /// Structure constants of the span of `matrices` under the commutator,
    /// provided the span is closed; the matrices must be linearly independent.
    pub fn from_matrices(matrices: &[Vec<Vec<Rational>>]) -> Result<Self, FoliationError> {
        let flat: Vec<Vec<Rational>> = matrices.iter().map(|m| m.iter().flatten().cloned().collect()).collect();
        let len = flat.first().map_or(0, Vec::len);
        if crate::algebra::linalg::span_rank(len, &flat) != flat.len() {
            return Err(FoliationError::InvalidLieAlgebra("matrices are linearly dependent"));
        }
        let basis = Matrix::from_columns(len, &flat);
        let d = matrices.len();
        let mut c = alloc::vec![alloc::vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let comm: Vec<Rational> = commutator(&matrices[i], &matrices[j]).into_iter().flatten().collect();
                c[i][j] = basis
                    .solve(&comm)
                    .ok_or(FoliationError::InvalidLieAlgebra("matrix span is not closed under commutators"))?;
            }
        }
        LieAlgebraPresentation::new(c, Vec::new())
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = alloc::vec![Rational::zero(); self.dim];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let f = ui * vj;
                for (k, c) in self.structure_constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&f * c);
                    }
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        let c = &self.structure_constants;
        (0..self.dim).all(|i| (0..self.dim).all(|j| (0..self.dim).all(|k| c[i][j][k] == -&c[j][i][k])))
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let e = |i: usize| {
            let mut v = alloc::vec![Rational::zero(); self.dim];
            v[i] = Rational::one();
            v
        };
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let (a, b, c) = (e(i), e(j), e(k));
                    let t1 = self.bracket(&a, &self.bracket(&b, &c));
                    let t2 = self.bracket(&b, &self.bracket(&c, &a));
                    let t3 = self.bracket(&c, &self.bracket(&a, &b));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(&(x + y) + z).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Basis of `[U, V]` for subspaces given by spanning vectors.
    fn bracket_span(&self, u: &[Vec<Rational>], v: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for a in u {
            for b in v {
                let w = self.bracket(a, b);
                if w.iter().any(|x| !x.is_zero()) {
                    out.push(w);
                }
            }
        }
        span_basis(&out)
    }

    fn full_basis(&self) -> Vec<Vec<Rational>> {
        (0..self.dim)
            .map(|i| {
                let mut v = alloc::vec![Rational::zero(); self.dim];
                v[i] = Rational::one();
                v
            })
            .collect()
    }

    pub fn center_dim(&self) -> usize {
        // x is central iff sum_i x_i c[i][j][k] = 0 for all j, k.
        let rows: Vec<Vec<Rational>> = (0..self.dim)
            .flat_map(|j| (0..self.dim).map(move |k| (j, k)))
            .map(|(j, k)| (0..self.dim).map(|i| self.structure_constants[i][j][k].clone()).collect())
            .collect();
        if rows.is_empty() {
            return self.dim;
        }
        Matrix::from_rows(rows).nullspace().len()
    }
}

/// Dimensions of a descending chain of subspaces, stopped once it stabilizes
/// or reaches zero.
fn series(l: &LieAlgebraPresentation, derived: bool) -> Vec<usize> {
    let full = l.full_basis();
    let mut current = full.clone();
    let mut dims = alloc::vec![l.dim];
    while let Some(&last) = dims.last() {
        if last == 0 {
            break;
        }
        let next = if derived { l.bracket_span(&current, &current) } else { l.bracket_span(&full, &current) };
        dims.push(next.len());
        if next.len() == last {
            break;
        }
        current = next;
    }
    dims
}

/// Derived series, lower central series, center and abelianization.
pub fn lie_invariants(l: &LieAlgebraPresentation) -> LieInvariants {
    let derived = series(l, true);
    let lower = series(l, false);
    let commutator_dim = derived.get(1).copied().unwrap_or(0);
    LieInvariants {
        dim: l.dim,
        abelianization_dim: l.dim - commutator_dim,
        center_dim: l.center_dim(),
        derived_series_dims: derived,
        lower_central_dims: lower,
    }
}

pub(crate) fn commutator(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mul = |x: &[Vec<Rational>], y: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Rational::zero(), |acc, k| &acc + &(&x[i][k] * &y[k][j])))
                    .collect()
            })
            .collect()
    };
    let ab = mul(a, b);
    let ba = mul(b, a);
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// Elementary matrices `E_ij` of size `n`, row-major order.
pub fn gl_basis(n: usize) -> Vec<Vec<Vec<Rational>>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut m = alloc::vec![alloc::vec![Rational::zero(); n]; n];
            m[i][j] = Rational::one();
            out.push(m);
        }
    }
    out
}

/// `{E_01, E_10, E_00 - E_11}`.
pub fn sl2_basis() -> Vec<Vec<Vec<Rational>>> {
    let z = Rational::zero;
    let o = Rational::one;
    alloc::vec![
        alloc::vec![alloc::vec![z(), o()], alloc::vec![z(), z()]],
        alloc::vec![alloc::vec![z(), z()], alloc::vec![o(), z()]],
        alloc::vec![alloc::vec![o(), z()], alloc::vec![z(), -o()]],
    ]
}

/// Infinitesimal rotations `E_ij - E_ji` for `i < j`.
pub fn so_basis(n: usize) -> Vec<Vec<Vec<Rational>>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut m = alloc::vec![alloc::vec![Rational::zero(); n]; n];
            m[i][j] = Rational::one();
            m[j][i] = -Rational::one();
            out.push(m);
        }
    }
    out
}
