use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::linalg::span_rank;
use crate::algebra::{FreeModuleElement, Polynomial, Rational, Submodule};
use crate::geometry::{Chart, GeometryError, MapAssertions, PolyMap, RationalPoint, VectorField};

use super::{FoliationError, SingularFoliation};

/// Restriction of `f` to the axis-aligned slice `{x_j = c_j}` through
/// `basepoint`: the fields of `f` tangent to the slice, restricted to it.
///
/// Tangent fields are the combinations `sum_i a_i G_i` of the saturated basis
/// whose fixed components lie in the slice ideal, found as syzygies of the
/// fixed components together with `(x_j - c_j) e_l`.
pub fn restrict_to_slice(
    f: &SingularFoliation,
    fixed: &[(usize, Rational)],
    basepoint: &RationalPoint,
) -> Result<SingularFoliation, FoliationError> {
    let chart = f.chart();
    if basepoint.chart() != chart {
        return Err(GeometryError::ChartMismatch { expected: chart.name().to_string(), found: basepoint.chart().name().to_string() }.into());
    }
    let n = chart.dim();
    for (a, (j, c)) in fixed.iter().enumerate() {
        if *j >= n {
            return Err(FoliationError::InvalidSlice("fixed variable out of range"));
        }
        if fixed[..a].iter().any(|(i, _)| i == j) {
            return Err(FoliationError::InvalidSlice("variable fixed twice"));
        }
        if basepoint.coords()[*j] != *c {
            return Err(FoliationError::InvalidSlice("slice does not pass through the base point"));
        }
    }
    let report = f.is_involutive()?;
    if let Some(fail) = report.failure {
        return Err(FoliationError::NotInvolutive { i: fail.i, j: fail.j });
    }
    let r = fixed.len();
    let transverse: Vec<Vec<Rational>> = f
        .generators()
        .iter()
        .map(|g| {
            let v = g.as_element().evaluate(basepoint.coords());
            fixed.iter().map(|(j, _)| v[*j].clone()).collect()
        })
        .collect();
    if span_rank(r, &transverse) != r {
        return Err(FoliationError::NotTransversal);
    }

    let (slice_chart, subs) = chart.slice(fixed)?;
    let slice_chart = Arc::new(slice_chart);
    let free: Vec<usize> = (0..n).filter(|i| !fixed.iter().any(|(j, _)| j == i)).collect();
    let restrict = |e: &FreeModuleElement| -> Vec<Polynomial> {
        free.iter()
            .map(|&i| if n == 0 { e.component(i).clone() } else { e.component(i).compose(&subs) })
            .collect()
    };

    let basis = f.saturated_basis().generators();
    let tangent: Vec<FreeModuleElement> = if r == 0 {
        basis
    } else {
        let mut cols: Vec<FreeModuleElement> = basis
            .iter()
            .map(|g| FreeModuleElement::with_ring(n, fixed.iter().map(|(j, _)| g.component(*j).clone()).collect()))
            .collect();
        for (j, c) in fixed {
            let lin = &Polynomial::var(n, *j) - &Polynomial::constant(n, c.clone());
            for l in 0..r {
                cols.push(FreeModuleElement::unit(n, r, l).mul_poly(&lin));
            }
        }
        let syz = Submodule::new(n, r, cols)?.syzygies()?;
        syz.generators()
            .iter()
            .map(|s| FreeModuleElement::combination(&s.components()[..basis.len()], &basis, n, n))
            .collect()
    };

    let mut gens: Vec<VectorField> = Vec::new();
    for t in &tangent {
        let v = VectorField::new(&slice_chart, restrict(t))?;
        if !v.is_zero() && !gens.contains(&v) {
            gens.push(v);
        }
    }
    if gens.is_empty() {
        gens.push(VectorField::zero(&slice_chart));
    }
    SingularFoliation::new(&slice_chart, gens)?.checked()
}

/// Transport of `f` along the polynomial diffeomorphism `phi`, whose inverse
/// has components `inverse`. Both compositions are checked to be the identity.
pub fn apply_diffeo(f: &SingularFoliation, phi: &PolyMap, inverse: &[Polynomial]) -> Result<SingularFoliation, FoliationError> {
    if phi.source() != f.chart() {
        return Err(GeometryError::ChartMismatch { expected: f.chart().name().to_string(), found: phi.source().name().to_string() }.into());
    }
    let psi = PolyMap::new("inverse", phi.target(), phi.source(), inverse.to_vec(), MapAssertions::default())?;
    let inverse_ok = |outer: &PolyMap, inner: &PolyMap| -> bool {
        let chart = inner.source();
        outer.components().iter().enumerate().all(|(i, c)| inner.pull_back(c) == chart.coordinate(i))
    };
    if !inverse_ok(phi, &psi) || !inverse_ok(&psi, phi) {
        return Err(GeometryError::InverseCheckFailed { map: phi.name().to_string() }.into());
    }
    let mut gens = Vec::with_capacity(f.generators().len());
    for x in f.generators() {
        let pushed: Vec<Polynomial> = phi.differential(x)?.iter().map(|c| psi.pull_back(c)).collect();
        gens.push(VectorField::new(phi.target(), pushed)?);
    }
    let g = SingularFoliation::new(phi.target(), gens)?;
    Ok(if f.involutivity_state() == super::InvolutivityState::Unchecked { g } else { g.checked()? })
}

/// The fields `X_A = sum_ij A_ij x_j d/dx_i`, one per matrix.
pub fn transformation_foliation(chart: &Arc<Chart>, matrices: &[Vec<Vec<Rational>>]) -> Result<SingularFoliation, FoliationError> {
    if matrices.is_empty() {
        return Err(FoliationError::EmptyGenerators);
    }
    let n = chart.dim();
    let mut gens = Vec::with_capacity(matrices.len());
    for a in matrices {
        if a.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: a.len() }.into());
        }
        if let Some(row) = a.iter().find(|row| row.len() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: row.len() }.into());
        }
        let comps = a
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(Polynomial::zero(n), |acc, (j, c)| &acc + &Polynomial::var(n, j).scale(c))
            })
            .collect();
        gens.push(VectorField::new(chart, comps)?);
    }
    SingularFoliation::new(chart, gens)?.checked()
}

/// `Pr_M^-1 F_M ∩ Pr_N^-1 F_N` on the product chart.
pub fn product_foliation(fm: &SingularFoliation, fnn: &SingularFoliation) -> Result<SingularFoliation, FoliationError> {
    let chart = Arc::new(fm.chart().product(fnn.chart()));
    let p = fm.chart().dim();
    let n = chart.dim();
    let left: Vec<usize> = (0..p).collect();
    let right: Vec<usize> = (p..n).collect();
    let lift = |f: &SingularFoliation, offset: usize, mapping: &[usize]| -> Vec<FreeModuleElement> {
        f.generators()
            .iter()
            .map(|g| {
                let mut comps = alloc::vec![Polynomial::zero(n); n];
                for (i, c) in g.components().iter().enumerate() {
                    comps[offset + i] = c.embed(n, mapping);
                }
                FreeModuleElement::with_ring(n, comps)
            })
            .collect()
    };
    let mut a = lift(fm, 0, &left);
    a.extend(right.iter().map(|&i| FreeModuleElement::unit(n, n, i)));
    let mut b = lift(fnn, p, &right);
    b.extend(left.iter().map(|&i| FreeModuleElement::unit(n, n, i)));
    let meet = Submodule::new(n, n, a)?.intersect(&Submodule::new(n, n, b)?)?;
    let mut gens: Vec<VectorField> = meet
        .into_generators()
        .into_iter()
        .map(|e| VectorField::from_element(&chart, e))
        .collect::<Result<_, _>>()?;
    if gens.is_empty() {
        gens.push(VectorField::zero(&chart));
    }
    SingularFoliation::new(&chart, gens)?.checked()
}
