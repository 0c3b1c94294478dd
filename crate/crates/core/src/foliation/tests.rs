use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::geometry::{MapAssertions, PolyMap};

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn line() -> Arc<Chart> {
    Chart::affine("R", ["x"])
}

fn plane() -> Arc<Chart> {
    Chart::affine("R2", ["x", "y"])
}

fn punctured() -> Arc<Chart> {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    Arc::new(Chart::new("P", ["x", "y"]).unwrap().with_avoid(&(&x * &x) + &(&y * &y)).unwrap())
}

fn xk(k: u32) -> SingularFoliation {
    let c = line();
    SingularFoliation::new(&c, vec![VectorField::new(&c, vec![Polynomial::var(1, 0).pow(k)]).unwrap()]).unwrap()
}

fn circles() -> SingularFoliation {
    let c = punctured();
    let x = c.coordinate(0);
    let y = c.coordinate(1);
    SingularFoliation::new(&c, vec![VectorField::new(&c, vec![-&y, x]).unwrap()]).unwrap()
}

fn gl2() -> SingularFoliation {
    transformation_foliation(&plane(), &gl_basis(2)).unwrap()
}

fn pt(c: &Arc<Chart>, coords: &[i64]) -> RationalPoint {
    RationalPoint::from_integers(c, coords).unwrap()
}

#[test]
fn construction_examples() {
    let f = xk(2);
    assert_eq!(f.saturated_basis().generators(), vec![FreeModuleElement::scalar(Polynomial::var(1, 0).pow(2))]);
    assert_eq!(f.involutivity_state(), InvolutivityState::Unchecked);
    let full = SingularFoliation::full(&plane()).unwrap();
    assert_eq!(full.saturated_basis().len(), 2);
    assert_eq!(full.involutivity_state(), InvolutivityState::Certified);
    assert!(circles().syzygies().is_empty());
    assert_eq!(SingularFoliation::new(&plane(), Vec::new()).unwrap_err(), FoliationError::EmptyGenerators);
    let other = VectorField::coordinate(&line(), 0);
    assert!(matches!(SingularFoliation::new(&plane(), vec![other]), Err(FoliationError::Geometry(_))));
}

#[test]
fn involutivity_examples() {
    let x = Polynomial::var(1, 0);
    let c = line();
    let f = SingularFoliation::new(&c, vec![VectorField::new(&c, vec![x.clone()]).unwrap()]).unwrap();
    assert!(f.is_involutive().unwrap().ok);
    assert!(xk(2).is_involutive().unwrap().ok);

    let g = gl2();
    let report = g.is_involutive().unwrap();
    assert!(report.ok);
    assert_eq!(report.certificates.len(), 6);
    for pc in &report.certificates {
        assert_eq!(pc.certificate.power, 0);
        assert!(pc.certificate.coefficients.iter().all(Polynomial::is_constant));
    }

    // d/dx and x d/dy: the bracket d/dy is not in the module
    let p = plane();
    let bad = SingularFoliation::new(
        &p,
        vec![VectorField::coordinate(&p, 0), VectorField::coordinate(&p, 1).mul_poly(&p.coordinate(0))],
    )
    .unwrap();
    let report = bad.is_involutive().unwrap();
    assert!(!report.ok);
    let failure = report.failure.unwrap();
    assert_eq!((failure.i, failure.j), (0, 1));
    assert!(!failure.normal_form.is_zero());
    assert_eq!(bad.checked().unwrap().involutivity_state(), InvolutivityState::Failed);
}

#[test]
fn membership_examples() {
    let c = line();
    let x = Polynomial::var(1, 0);
    let f = xk(2);
    let x3 = VectorField::new(&c, vec![x.pow(3)]).unwrap();
    let cert = f.contains(&x3).unwrap().unwrap();
    assert_eq!(cert.coefficients, vec![x.clone()]);
    assert_eq!(f.contains(&VectorField::coordinate(&c, 0)).unwrap(), None);

    let p = punctured();
    let h = p.avoid_product();
    let g = SingularFoliation::new(&p, vec![VectorField::coordinate(&p, 0).mul_poly(&h)]).unwrap();
    let cert = g.contains(&VectorField::coordinate(&p, 0)).unwrap().unwrap();
    assert_eq!(cert.power, 1);
    assert!(cert.verify(&FreeModuleElement::unit(2, 2, 0), &g.generator_elements(), &h));
}

#[test]
fn equality_examples() {
    let c = line();
    let x = Polynomial::var(1, 0);
    let a = SingularFoliation::new(&c, vec![VectorField::new(&c, vec![x.clone()]).unwrap()]).unwrap();
    let b = SingularFoliation::new(&c, vec![VectorField::new(&c, vec![x.scale(&q(2))]).unwrap()]).unwrap();
    assert!(a.equals(&b).unwrap().equal);
    let r = xk(2).equals(&xk(3)).unwrap();
    assert!(!r.equal);
    assert!(r.forward[0].is_some() && r.backward[0].is_none());

    let circ = circles();
    let p = circ.chart().clone();
    let scaled = circ.generators()[0].mul_poly(&p.avoid_product());
    let g = SingularFoliation::new(&p, vec![scaled]).unwrap();
    assert!(circ.equals(&g).unwrap().equal);
}

#[test]
fn pointwise_dimensions() {
    let f = xk(2);
    let c = f.chart().clone();
    assert_eq!(f.tangent_dim(&pt(&c, &[0])).unwrap(), 0);
    assert_eq!(f.tangent_dim(&pt(&c, &[1])).unwrap(), 1);
    assert_eq!(f.fiber_dim(&pt(&c, &[0])).unwrap(), 1);

    let g = gl2();
    let p = g.chart().clone();
    assert_eq!(g.tangent_dim(&pt(&p, &[0, 0])).unwrap(), 0);
    assert_eq!(g.tangent_dim(&pt(&p, &[1, 0])).unwrap(), 2);
    assert_eq!(g.fiber_dim(&pt(&p, &[0, 0])).unwrap(), 4);

    let full = SingularFoliation::full(&p).unwrap();
    assert_eq!(full.tangent_dim(&pt(&p, &[3, -1])).unwrap(), 2);

    let x = Polynomial::var(1, 0);
    let two = SingularFoliation::new(&c, vec![VectorField::coordinate(&c, 0), VectorField::new(&c, vec![x]).unwrap()]).unwrap();
    assert_eq!(two.fiber_dim(&pt(&c, &[0])).unwrap(), 1);
}

#[test]
fn isotropy_examples() {
    let g = gl2();
    let p = g.chart().clone();
    let iso = g.isotropy_algebra(&pt(&p, &[0, 0])).unwrap();
    assert_eq!(iso.dim, 4);
    let inv = lie_invariants(&iso);
    assert_eq!(inv.derived_series_dims, vec![4, 3, 3]);
    assert_eq!(inv.center_dim, 1);

    let s = transformation_foliation(&p, &sl2_basis()).unwrap();
    let inv = lie_invariants(&s.isotropy_algebra(&pt(&p, &[0, 0])).unwrap());
    assert_eq!(inv.dim, 3);
    assert_eq!(inv.derived_series_dims, vec![3, 3]);

    let f = xk(2);
    let iso = f.isotropy_algebra(&pt(f.chart(), &[0])).unwrap();
    assert_eq!(lie_invariants(&iso).derived_series_dims, vec![1, 0]);

    // off the origin the syzygies cut the fiber down before the kernel is taken
    let at = pt(&p, &[1, 0]);
    let iso = g.isotropy_algebra(&at).unwrap();
    assert_eq!(iso.dim, g.fiber_dim(&at).unwrap() - g.tangent_dim(&at).unwrap());
}

#[test]
fn isotropy_independent_of_lift() {
    // gl2 at (1,0): shifting the basis lifts by syzygy values changes nothing.
    let g = gl2();
    let p = g.chart().clone();
    let at = pt(&p, &[1, 0]);
    let basis = g.isotropy_basis(&at).unwrap();
    let a = g.isotropy_algebra_with_basis(&at, basis.clone()).unwrap();
    let shift: Vec<Rational> = g.syzygies()[0].evaluate(at.coords());
    let moved: Vec<Vec<Rational>> =
        basis.iter().map(|b| b.iter().zip(&shift).map(|(u, v)| u + &v.scale_int(3)).collect()).collect();
    let b = g.isotropy_algebra_with_basis(&at, moved).unwrap();
    assert_eq!(a.structure_constants, b.structure_constants);
}

trait ScaleInt {
    fn scale_int(&self, k: i64) -> Rational;
}

impl ScaleInt for Rational {
    fn scale_int(&self, k: i64) -> Rational {
        self * &Rational::from_integer(k)
    }
}

#[test]
fn vanishing_order_examples() {
    let c = line();
    assert_eq!(xk(2).vanishing_order(&pt(&c, &[0])).unwrap(), VanishingOrder { order: 2, capped: false });
    assert_eq!(xk(3).vanishing_order(&pt(&c, &[0])).unwrap().order, 3);
    assert_eq!(xk(3).vanishing_order(&pt(&c, &[1])).unwrap().order, 0);
    let p = plane();
    assert_eq!(SingularFoliation::full(&p).unwrap().vanishing_order(&pt(&p, &[2, 5])).unwrap().order, 0);
    assert!(SingularFoliation::zero(&p).unwrap().vanishing_order(&pt(&p, &[0, 0])).unwrap().capped);
}

#[test]
fn slice_examples() {
    let p = plane();
    let full = SingularFoliation::full(&p).unwrap();
    let s = restrict_to_slice(&full, &[(1, q(0))], &pt(&p, &[0, 0])).unwrap();
    assert_eq!(s.chart().vars(), ["x"]);
    assert!(s.equals(&SingularFoliation::full(s.chart()).unwrap()).unwrap().equal);

    let circ = circles().checked().unwrap();
    let c = circ.chart().clone();
    let s = restrict_to_slice(&circ, &[(1, q(0))], &pt(&c, &[1, 0])).unwrap();
    assert!(s.is_zero());
    assert_eq!(s.chart().avoid().len(), 1);

    // not transversal: the slice x = 0 at the origin of the gl2 foliation
    let g = gl2();
    assert_eq!(restrict_to_slice(&g, &[(0, q(0))], &pt(&p, &[0, 0])).unwrap_err(), FoliationError::NotTransversal);
    // a slice must pass through the base point
    assert!(matches!(restrict_to_slice(&full, &[(1, q(1))], &pt(&p, &[0, 0])), Err(FoliationError::InvalidSlice(_))));
}

#[test]
fn slice_of_open_leaf_is_a_point() {
    let p = plane();
    let full = SingularFoliation::full(&p).unwrap();
    let s = restrict_to_slice(&full, &[(0, q(1)), (1, q(2))], &pt(&p, &[1, 2])).unwrap();
    assert_eq!(s.chart().dim(), 0);
    assert!(s.is_zero());
    let o = RationalPoint::origin(s.chart()).unwrap();
    assert_eq!(s.tangent_dim(&o).unwrap(), 0);
    assert_eq!(s.isotropy_algebra(&o).unwrap().dim, 0);
}

#[test]
fn slice_preserves_transverse_isotropy() {
    // d/dx plus gl2 acting on (y, z); the slice x = 0 is transversal at 0
    let c = Chart::affine("R3", ["x", "y", "z"]);
    let (y, z) = (c.coordinate(1), c.coordinate(2));
    let zero = Polynomial::zero(3);
    let mut gens = vec![VectorField::coordinate(&c, 0)];
    for (a, b) in [(y.clone(), zero.clone()), (z.clone(), zero.clone()), (zero.clone(), y.clone()), (zero.clone(), z.clone())] {
        gens.push(VectorField::new(&c, vec![zero.clone(), a, b]).unwrap());
    }
    let f = SingularFoliation::new(&c, gens).unwrap().checked().unwrap();
    let base = pt(&c, &[0, 0, 0]);
    let s = restrict_to_slice(&f, &[(0, q(0))], &base).unwrap();
    let sb = RationalPoint::origin(s.chart()).unwrap();
    assert_eq!(s.tangent_dim(&sb).unwrap(), 0);
    let a = lie_invariants(&f.isotropy_algebra(&base).unwrap());
    let b = lie_invariants(&s.isotropy_algebra(&sb).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.dim, 4);
}

#[test]
fn diffeo_examples() {
    let g = gl2();
    let p = g.chart().clone();
    let id = PolyMap::identity(&p);
    let same = apply_diffeo(&g, &id, id.components()).unwrap();
    assert!(same.equals(&g).unwrap().equal);

    // (x, y) -> (x + 2y, y), inverse (x - 2y, y)
    let (x, y) = (p.coordinate(0), p.coordinate(1));
    let phi = PolyMap::new("shear", &p, &p, vec![&x + &y.scale(&q(2)), y.clone()], MapAssertions::default()).unwrap();
    let moved = apply_diffeo(&g, &phi, &[&x - &y.scale(&q(2)), y.clone()]).unwrap();
    assert!(moved.equals(&g).unwrap().equal);

    let c = line();
    let t = c.coordinate(0);
    let cubic = PolyMap::new("cubic", &c, &c, vec![&t + &t.pow(3)], MapAssertions::default()).unwrap();
    let err = apply_diffeo(&xk(2), &cubic, &[&t - &t.pow(3)]).unwrap_err();
    assert!(matches!(err, FoliationError::Geometry(GeometryError::InverseCheckFailed { .. })));
}

#[test]
fn vanishing_order_survives_translation() {
    // x -> x + 1 moves the zero of x^3 d/dx to 1 with the same order
    let c = line();
    let t = c.coordinate(0);
    let one = Polynomial::one(1);
    let phi = PolyMap::new("shift", &c, &c, vec![&t + &one], MapAssertions::default()).unwrap();
    let moved = apply_diffeo(&xk(3), &phi, &[&t - &one]).unwrap();
    assert_eq!(moved.vanishing_order(&pt(&c, &[1])).unwrap().order, 3);
}

#[test]
fn transformation_examples() {
    let g = gl2();
    let p = g.chart().clone();
    let (x, y) = (p.coordinate(0), p.coordinate(1));
    let z = Polynomial::zero(2);
    let expected = vec![vec![x.clone(), z.clone()], vec![y.clone(), z.clone()], vec![z.clone(), x], vec![z, y]];
    let got: Vec<Vec<Polynomial>> = g.generators().iter().map(|v| v.components().to_vec()).collect();
    assert_eq!(got, expected);

    let r3 = Chart::affine("R3", ["x", "y", "z"]);
    let so3 = transformation_foliation(&r3, &so_basis(3)).unwrap();
    assert_eq!(so3.generators().len(), 3);
    assert_eq!(so3.involutivity_state(), InvolutivityState::Certified);
    assert_eq!(transformation_foliation(&p, &[]).unwrap_err(), FoliationError::EmptyGenerators);
}

#[test]
fn product_examples() {
    let a = line();
    let b = Chart::affine("S", ["y"]);
    let full = SingularFoliation::full(&a).unwrap();
    let zero = SingularFoliation::zero(&b).unwrap();
    let prod = product_foliation(&full, &zero).unwrap();
    let pc = prod.chart().clone();
    let expected = SingularFoliation::new(&pc, vec![VectorField::coordinate(&pc, 0)]).unwrap();
    assert!(prod.equals(&expected).unwrap().equal);

    assert!(product_foliation(&SingularFoliation::zero(&a).unwrap(), &zero).unwrap().is_zero());

    let xdx = SingularFoliation::new(&a, vec![VectorField::new(&a, vec![a.coordinate(0)]).unwrap()]).unwrap();
    let ydy = SingularFoliation::new(&b, vec![VectorField::new(&b, vec![b.coordinate(0)]).unwrap()]).unwrap();
    let prod = product_foliation(&xdx, &ydy).unwrap();
    let pc = prod.chart().clone();
    let z = Polynomial::zero(2);
    let expected = SingularFoliation::new(
        &pc,
        vec![
            VectorField::new(&pc, vec![pc.coordinate(0), z.clone()]).unwrap(),
            VectorField::new(&pc, vec![z, pc.coordinate(1)]).unwrap(),
        ],
    )
    .unwrap();
    assert!(prod.equals(&expected).unwrap().equal);
    // tangent dims add up
    let at = pt(&pc, &[1, 0]);
    assert_eq!(prod.tangent_dim(&at).unwrap(), xdx.tangent_dim(&pt(&a, &[1])).unwrap() + ydy.tangent_dim(&pt(&b, &[0])).unwrap());
}
