use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::geometry::{Chart, FlagStatus, MapAssertions, RationalPoint};

fn plane() -> Arc<Chart> {
    Chart::affine("R2", ["x", "y"])
}

fn line() -> Arc<Chart> {
    Chart::affine("R", ["x"])
}

fn pr1() -> PolyMap {
    PolyMap::projection("pr1", &plane(), &line(), &[0]).unwrap()
}

fn punctured() -> Arc<Chart> {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    Arc::new(Chart::new("P", ["x", "y"]).unwrap().with_avoid(&(&x * &x) + &(&y * &y)).unwrap())
}

fn r2() -> PolyMap {
    let p = punctured();
    let ray = Arc::new(Chart::new("ray", ["t"]).unwrap().with_avoid(Polynomial::var(1, 0)).unwrap().with_meta("positive", "true"));
    let (x, y) = (p.coordinate(0), p.coordinate(1));
    let declared = MapAssertions { surjective: FlagStatus::Asserted, connected_fibers: FlagStatus::Unknown };
    PolyMap::new("r2", &p, &ray, vec![&(&x * &x) + &(&y * &y)], declared).unwrap()
}

fn circles(p: &Arc<Chart>) -> SingularFoliation {
    let (x, y) = (p.coordinate(0), p.coordinate(1));
    SingularFoliation::new(p, vec![VectorField::new(p, vec![-&y, x]).unwrap()]).unwrap()
}

fn field(c: &Arc<Chart>, comps: Vec<Polynomial>) -> VectorField {
    VectorField::new(c, comps).unwrap()
}

fn xdx(c: &Arc<Chart>) -> SingularFoliation {
    let mut comps = vec![Polynomial::zero(c.dim()); c.dim()];
    comps[0] = c.coordinate(0);
    SingularFoliation::new(c, vec![field(c, comps)]).unwrap()
}

#[test]
fn vertical_examples() {
    let v = vertical_foliation(&pr1()).unwrap();
    let p = plane();
    let dy = SingularFoliation::new(&p, vec![VectorField::coordinate(&p, 1)]).unwrap();
    assert!(v.equals(&dy).unwrap().equal);

    let v = vertical_foliation(&r2()).unwrap();
    assert!(v.equals(&circles(&punctured())).unwrap().equal);

    assert!(vertical_foliation(&PolyMap::identity(&p)).unwrap().is_zero());

    let l = line();
    let sq = PolyMap::new("sq", &l, &Chart::affine("S", ["s"]), vec![l.coordinate(0).pow(2)], MapAssertions::default()).unwrap();
    assert!(matches!(vertical_foliation(&sq), Err(PullbackError::NotSubmersion { .. })));
}

#[test]
fn pullback_examples() {
    let p = plane();
    let l = line();
    let pb = pullback(&pr1(), &xdx(&l)).unwrap();
    assert_eq!(pb.lifts[0].lift, field(&p, vec![p.coordinate(0), Polynomial::zero(2)]));
    let expected = SingularFoliation::new(&p, vec![field(&p, vec![p.coordinate(0), Polynomial::zero(2)]), VectorField::coordinate(&p, 1)]).unwrap();
    assert!(pb.foliation.equals(&expected).unwrap().equal);

    let full = pullback_foliation(&pr1(), &SingularFoliation::full(&l).unwrap()).unwrap();
    assert!(full.equals(&SingularFoliation::full(&p).unwrap()).unwrap().equal);

    let f = r2();
    let zero = SingularFoliation::zero(f.target()).unwrap();
    let pb = pullback_foliation(&f, &zero).unwrap();
    assert!(pb.equals(&circles(&punctured())).unwrap().equal);
}

#[test]
fn lift_satisfies_jacobian_equation() {
    let f = r2();
    let t = f.target().clone();
    let tdt = field(&t, vec![t.coordinate(0)]);
    let l = lift(&f, &tdt).unwrap().unwrap();
    // J L = h^m (t o pi): here L is the Euler field over 2
    let pushed = f.differential(&l.lift).unwrap();
    let h = f.source().avoid_product();
    assert_eq!(pushed[0], &h.pow(l.power) * &f.pull_back(&t.coordinate(0)));
}

#[test]
fn pullback_independent_of_generator_order() {
    let p = plane();
    let gl2 = crate::foliation::transformation_foliation(&p, &crate::foliation::gl_basis(2)).unwrap();
    let r3 = Chart::affine("R3", ["x", "y", "z"]);
    let pi = PolyMap::projection("pr12", &r3, &p, &[0, 1]).unwrap();
    let a = pullback_foliation(&pi, &gl2).unwrap();
    let mut gens = gl2.generators().to_vec();
    gens.reverse();
    let reversed = SingularFoliation::new(&p, gens).unwrap().checked().unwrap();
    let b = pullback_foliation(&pi, &reversed).unwrap();
    assert!(a.equals(&b).unwrap().equal);
    let v = vertical_foliation(&pi).unwrap();
    for g in v.generators() {
        assert!(a.contains(g).unwrap().is_some());
    }
}

#[test]
fn functoriality_examples() {
    let r3 = Chart::affine("R3", ["x", "y", "z"]);
    let p = plane();
    let l = line();
    let rho = PolyMap::projection("pr12", &r3, &p, &[0, 1]).unwrap();
    let report = functoriality_check(&pr1(), &rho, &xdx(&l)).unwrap();
    assert!(report.equal);
    let report = functoriality_check(&pr1(), &PolyMap::identity(&p), &xdx(&l)).unwrap();
    assert!(report.equal);
}

#[test]
fn pushforward_examples() {
    let p = plane();
    let l = line();
    let fp = SingularFoliation::new(&p, vec![field(&p, vec![p.coordinate(0), Polynomial::zero(2)]), VectorField::coordinate(&p, 1)])
        .unwrap()
        .checked()
        .unwrap();
    match pushforward_foliation(&pr1(), &fp).unwrap() {
        Pushforward::Pushed { foliation, round_trip } => {
            assert!(round_trip.equal);
            assert!(foliation.equals(&xdx(&l)).unwrap().equal);
        }
        other => panic!("unexpected {other:?}"),
    }
    match pushforward_foliation(&pr1(), &SingularFoliation::full(&p).unwrap()).unwrap() {
        Pushforward::Pushed { foliation, .. } => assert!(foliation.equals(&SingularFoliation::full(&l).unwrap()).unwrap().equal),
        other => panic!("unexpected {other:?}"),
    }
    let dx = SingularFoliation::new(&p, vec![VectorField::coordinate(&p, 0)]).unwrap().checked().unwrap();
    match pushforward_foliation(&pr1(), &dx).unwrap() {
        Pushforward::MissingVertical { missing } => assert_eq!(missing, vec![1]),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(pushforward_foliation(&r2(), &circles(&punctured())), Err(PullbackError::NotProjection { .. })));
}

#[test]
fn pushforward_reorders_base_variables() {
    // (x, y, z) -> (z, x) with F_M = <u d/du> on the first target coordinate
    let r3 = Chart::affine("R3", ["x", "y", "z"]);
    let m = Chart::affine("M", ["u", "v"]);
    let pi = PolyMap::projection("swap", &r3, &m, &[2, 0]).unwrap();
    let fm = xdx(&m).checked().unwrap();
    let fp = pullback_foliation(&pi, &fm).unwrap();
    match pushforward_foliation(&pi, &fp).unwrap() {
        Pushforward::Pushed { foliation, .. } => assert!(foliation.equals(&fm).unwrap().equal),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn bisubmersion_examples() {
    let p = plane();
    let l = line();
    let l2 = Chart::affine("R'", ["y"]);
    let s = pr1();
    let t = PolyMap::projection("pr2", &p, &l2, &[1]).unwrap();
    let r = bisubmersion_check(&s, &t, &SingularFoliation::full(&l).unwrap(), &SingularFoliation::full(&l2).unwrap()).unwrap();
    assert!(r.is_bisubmersion());
    assert!(r.vertical_sum.equals(&SingularFoliation::full(&p).unwrap()).unwrap().equal);

    let f = r2();
    let id = PolyMap::identity(f.source());
    let circ = circles(f.source()).checked().unwrap();
    let zero = SingularFoliation::zero(f.target()).unwrap();
    let r = bisubmersion_check(&id, &f, &circ, &zero).unwrap();
    assert!(r.is_bisubmersion());

    // negative control: t = pr1 as well, so the verticals only give <d/dy>
    let r = bisubmersion_check(&s, &s, &SingularFoliation::full(&l).unwrap(), &SingularFoliation::full(&l).unwrap()).unwrap();
    assert!(r.pullbacks_equal.equal);
    assert!(!r.s_matches_verticals.equal);
    assert!(!r.t_matches_verticals.equal);
}

#[test]
fn leaf_dimension_adds_fiber_dimension() {
    let r3 = Chart::affine("R3", ["x", "y", "z"]);
    let p = plane();
    let gl2 = crate::foliation::transformation_foliation(&p, &crate::foliation::gl_basis(2)).unwrap();
    let pi = PolyMap::projection("pr12", &r3, &p, &[0, 1]).unwrap();
    let pb = pullback_foliation(&pi, &gl2).unwrap();
    for coords in [[0, 0, 5], [1, 0, 0], [2, -3, 1]] {
        let at = RationalPoint::from_integers(&r3, &coords).unwrap();
        let below = RationalPoint::new(&p, pi.apply(at.coords())).unwrap();
        assert_eq!(pb.tangent_dim(&at).unwrap(), gl2.tangent_dim(&below).unwrap() + 1);
    }
}
