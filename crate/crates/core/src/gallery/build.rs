use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::geometry::MapAssertions;
use crate::pullback::pullback_foliation;

/// Accumulates the objects of one entry.
struct Entry {
    inner: GalleryEntry,
}

fn s(v: &str) -> String {
    v.to_string()
}

impl Entry {
    fn new(name: &str, description: &'static str) -> Self {
        Entry {
            inner: GalleryEntry {
                name: name.to_string(),
                description,
                charts: Vec::new(),
                foliations: Vec::new(),
                maps: Vec::new(),
                witnesses: Vec::new(),
                slices: Vec::new(),
                points: Vec::new(),
                expectations: Vec::new(),
            },
        }
    }

    fn chart(&mut self, c: Arc<Chart>) -> Arc<Chart> {
        if !self.inner.charts.iter().any(|k| k.name() == c.name()) {
            self.inner.charts.push(c.clone());
        }
        c
    }

    fn foliation(&mut self, name: &str, f: SingularFoliation) -> Result<(), GalleryError> {
        self.chart(f.chart().clone());
        self.inner.foliations.push((name.to_string(), f.checked()?));
        Ok(())
    }

    fn generated(&mut self, name: &str, chart: &Arc<Chart>, fields: Vec<Vec<Polynomial>>) -> Result<(), GalleryError> {
        let gens = fields.into_iter().map(|c| field(chart, c)).collect();
        self.foliation(name, SingularFoliation::new(chart, gens)?)
    }

    fn map(&mut self, m: PolyMap) {
        self.chart(m.source().clone());
        self.chart(m.target().clone());
        self.inner.maps.push(m);
    }

    fn point(&mut self, name: &str, chart: &Arc<Chart>, coords: &[i64]) -> Result<(), GalleryError> {
        self.inner.points.push((name.to_string(), RationalPoint::from_integers(chart, coords)?));
        Ok(())
    }

    fn expect(&mut self, label: &str, probe: Probe, expected: &str, provenance: Provenance) {
        self.inner.expectations.push(Expectation { label: label.to_string(), probe, expected: expected.to_string(), provenance });
    }

    fn done(self) -> Result<GalleryEntry, GalleryError> {
        Ok(self.inner)
    }
}

/// `comps[i] = Σ_j rows[i][j] x_j`.
fn linear_map(name: &str, source: &Arc<Chart>, target: &Arc<Chart>, rows: &[&[i64]]) -> Result<PolyMap, GalleryError> {
    let n = source.dim();
    let comps = rows
        .iter()
        .map(|row| {
            row.iter().enumerate().fold(Polynomial::zero(n), |acc, (j, &a)| {
                &acc + &source.coordinate(j).scale(&Rational::from_integer(a))
            })
        })
        .collect();
    Ok(PolyMap::new(name, source, target, comps, MapAssertions::default())?)
}

fn tangent(fol: &str, point: &str) -> Probe {
    Probe::TangentDim { fol: s(fol), point: s(point) }
}

fn isotropy(fol: &str, point: &str) -> Probe {
    Probe::IsotropyDim { fol: s(fol), point: s(point) }
}

pub(super) fn xk(k: u32) -> Result<GalleryEntry, GalleryError> {
    let name = alloc::format!("xk({k})");
    let mut e = Entry::new(&name, "x^k d/dx on the line: a single singular point whose germ is detected by k");
    let c = e.chart(Chart::affine("R", ["x"]));
    e.generated("F", &c, vec![vec![c.coordinate(0).pow(k)]])?;
    e.point("o", &c, &[0])?;
    e.point("p", &c, &[1])?;
    e.expect("vanishing order at 0", Probe::VanishingOrder { fol: s("F"), point: s("o") }, &k.to_string(), Provenance::Literature);
    e.expect("leaf dim at 0", tangent("F", "o"), "0", Provenance::Immediate);
    e.expect("leaf dim at 1", tangent("F", "p"), "1", Provenance::Immediate);
    e.expect(
        "isotropy dim at 0",
        isotropy("F", "o"),
        "1",
        Provenance::Computed { oracle: "F/I_0 F is spanned by the class of the single generator" },
    );
    e.done()
}

pub(super) fn linear(name: &str, basis: Vec<Vec<Vec<Rational>>>, iso: &str, derived: &str) -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new(name, "linear vector fields of a matrix Lie algebra acting on the plane");
    let c = e.chart(Chart::affine("R2", ["x", "y"]));
    e.foliation("F", transformation_foliation(&c, &basis)?)?;
    e.point("o", &c, &[0, 0])?;
    e.point("p", &c, &[1, 0])?;
    e.expect("involutive", Probe::Involutive { fol: s("F") }, "involutive", Provenance::Immediate);
    e.expect("isotropy dim at origin", isotropy("F", "o"), iso, Provenance::Literature);
    e.expect(
        "derived series at origin",
        Probe::DerivedSeries { fol: s("F"), point: s("o") },
        derived,
        Provenance::Computed { oracle: "spans of matrix commutators of the defining basis" },
    );
    e.expect("leaf dim at origin", tangent("F", "o"), "0", Provenance::Immediate);
    e.expect("leaf dim at (1,0)", tangent("F", "p"), "2", Provenance::Immediate);
    e.done()
}

pub(super) fn so3() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("so3", "infinitesimal rotations of 3-space: leaves are spheres and the origin");
    let c = e.chart(Chart::affine("R3", ["x", "y", "z"]));
    e.foliation("F", transformation_foliation(&c, &so_basis(3))?)?;
    e.point("o", &c, &[0, 0, 0])?;
    e.point("p", &c, &[1, 0, 0])?;
    e.point("q", &c, &[1, 2, 2])?;
    e.inner.slices.push(SliceSpec { name: s("axis"), chart: s("R3"), fixed: vec![(1, Rational::zero()), (2, Rational::zero())] });
    e.expect("isotropy dim at origin", isotropy("F", "o"), "3", Provenance::Literature);
    e.expect(
        "derived series at origin",
        Probe::DerivedSeries { fol: s("F"), point: s("o") },
        "[3,3]",
        Provenance::Computed { oracle: "spans of matrix commutators of the defining basis" },
    );
    e.expect("leaf dim at origin", tangent("F", "o"), "0", Provenance::Immediate);
    e.expect("leaf dim at (1,0,0)", tangent("F", "p"), "2", Provenance::Immediate);
    e.expect("leaf dim at (1,2,2)", tangent("F", "q"), "2", Provenance::Immediate);
    e.expect(
        "fiber dim at (1,0,0)",
        Probe::FiberDim { fol: s("F"), point: s("p") },
        "2",
        Provenance::Computed { oracle: "x X_1 + y X_2 + z X_3 = 0 is the only relation" },
    );
    e.expect(
        "transversal along the x axis",
        Probe::SliceTangentDim { fol: s("F"), slice: s("axis"), point: s("p") },
        "0",
        Provenance::Immediate,
    );
    e.done()
}

pub(super) fn gl2_vs_sl2() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("gl2-vs-sl2", "the gl2 and sl2 actions on the plane share leaves but differ at the origin");
    let c = e.chart(Chart::affine("R2", ["x", "y"]));
    e.foliation("Fgl", transformation_foliation(&c, &gl_basis(2))?)?;
    e.foliation("Fsl", transformation_foliation(&c, &sl2_basis())?)?;
    e.inner.witnesses.push(MoritaWitness::identity(&c));
    e.point("o", &c, &[0, 0])?;
    e.point("p", &c, &[1, 0])?;
    let compare = |x: &str| Probe::Compare { fm: s("Fgl"), x: s(x), fnn: s("Fsl"), y: s(x) };
    e.expect("compare at origin", compare("o"), "distinguishes", Provenance::Literature);
    e.expect("compare at (1,0)", compare("p"), "consistent", Provenance::Immediate);
    e.expect(
        "identity witness",
        Probe::Morita { witness: s("id_R2"), fm: s("Fgl"), fnn: s("Fsl") },
        "refuted",
        Provenance::Computed { oracle: "x d/dx + y d/dy has a nonzero trace at the origin" },
    );
    e.expect("same modules", Probe::Equal { a: s("Fgl"), b: s("Fsl") }, "different", Provenance::Immediate);
    e.done()
}

pub(super) fn x2_vs_x3() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("x2-vs-x3", "x^2 d/dx and x^3 d/dx have the same leaves but are not equivalent at 0");
    let c = e.chart(Chart::affine("R", ["x"]));
    e.generated("F2", &c, vec![vec![c.coordinate(0).pow(2)]])?;
    e.generated("F3", &c, vec![vec![c.coordinate(0).pow(3)]])?;
    e.point("o", &c, &[0])?;
    e.point("p", &c, &[2])?;
    e.expect("compare at 0", Probe::Compare { fm: s("F2"), x: s("o"), fnn: s("F3"), y: s("o") }, "distinguishes", Provenance::Literature);
    e.expect("compare at 2", Probe::Compare { fm: s("F2"), x: s("p"), fnn: s("F3"), y: s("p") }, "consistent", Provenance::Immediate);
    e.expect("vanishing order of F2", Probe::VanishingOrder { fol: s("F2"), point: s("o") }, "2", Provenance::Immediate);
    e.expect("vanishing order of F3", Probe::VanishingOrder { fol: s("F3"), point: s("o") }, "3", Provenance::Immediate);
    e.done()
}

fn punctured_plane() -> Result<Arc<Chart>, GalleryError> {
    let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    Ok(Arc::new(Chart::new("P", ["x", "y"])?.with_avoid(&(&x * &x) + &(&y * &y))?))
}

pub(super) fn circles_ray() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("circles-ray-witness", "concentric circles on the punctured plane against the zero foliation of a ray");
    let p = e.chart(punctured_plane()?);
    let ray = e.chart(Arc::new(Chart::new("ray", ["t"])?.with_avoid(Polynomial::var(1, 0))?.with_meta("positive", "true")));
    let (x, y) = (p.coordinate(0), p.coordinate(1));
    e.generated("circles", &p, vec![vec![-&y, x.clone()]])?;
    e.foliation("zero", SingularFoliation::zero(&ray)?)?;
    let pi_m = PolyMap::identity(&p).with_name("pi_M");
    let pi_n = PolyMap::new("pi_N", &p, &ray, vec![&(&x * &x) + &(&y * &y)], asserted_surjective())?;
    e.map(pi_m.clone());
    e.map(pi_n.clone());
    e.inner.witnesses.push(MoritaWitness::new("W", pi_m, pi_n)?);
    e.point("p", &p, &[1, 0])?;
    e.point("q", &p, &[3, -4])?;
    e.point("r", &ray, &[1])?;
    let w = || Probe::Morita { witness: s("W"), fm: s("circles"), fnn: s("zero") };
    e.expect("witness", w(), "witness-verified-modulo-assertions", Provenance::Literature);
    e.expect(
        "pullback of the zero foliation",
        Probe::Pullback { map: s("pi_N"), fol: s("zero"), expected: s("circles") },
        "equal",
        Provenance::Immediate,
    );
    e.expect(
        "bisubmersion",
        Probe::Bisubmersion { s: s("pi_M"), t: s("pi_N"), fm: s("circles"), fnn: s("zero") },
        "ok",
        Provenance::Immediate,
    );
    e.expect(
        "composed with the identity of the ray",
        Probe::ComposeWithIdentity { witness: s("W"), fm: s("circles"), fnn: s("zero") },
        "witness-verified-modulo-assertions",
        Provenance::Immediate,
    );
    e.expect("compare at (1,0) and 1", Probe::Compare { fm: s("circles"), x: s("p"), fnn: s("zero"), y: s("r") }, "consistent", Provenance::Immediate);
    e.done()
}

pub(super) fn full_full() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("full-full-bisubmersion", "both projections of the plane form a bisubmersion between full foliations of two lines");
    let v = e.chart(Chart::affine("V", ["x", "y"]));
    let m = e.chart(Chart::affine("M", ["x"]));
    let n = e.chart(Chart::affine("N", ["y"]));
    e.foliation("FM", SingularFoliation::full(&m)?)?;
    e.foliation("FN", SingularFoliation::full(&n)?)?;
    e.map(PolyMap::projection("s", &v, &m, &[0])?);
    e.map(PolyMap::projection("t", &v, &n, &[1])?);
    e.map(PolyMap::projection("t_bad", &v, &n, &[0])?);
    e.point("o", &v, &[0, 0])?;
    let b = |t: &str| Probe::Bisubmersion { s: s("s"), t: s(t), fm: s("FM"), fnn: s("FN") };
    e.expect("(pr1, pr2)", b("t"), "ok", Provenance::Literature);
    e.expect(
        "(pr1, pr1) control",
        b("t_bad"),
        "fails: s^-1 F_M = ker ds + ker dt; t^-1 F_N = ker ds + ker dt",
        Provenance::Computed { oracle: "ker ds = ker dt = <d/dy> while both pullbacks are full" },
    );
    e.done()
}

pub(super) fn product_full_zero() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("product-full-zero", "product of the full foliation of a line with the zero foliation of another");
    let a = e.chart(Chart::affine("A", ["x"]));
    let b = e.chart(Chart::affine("B", ["y"]));
    let ab = e.chart(Arc::new(a.product(&b)));
    e.foliation("full", SingularFoliation::full(&a)?)?;
    e.foliation("zero", SingularFoliation::zero(&b)?)?;
    e.foliation("expected", SingularFoliation::new(&ab, vec![VectorField::coordinate(&ab, 0)])?)?;
    e.point("o", &ab, &[0, 0])?;
    e.expect(
        "product",
        Probe::Product { a: s("full"), b: s("zero"), expected: s("expected") },
        "equal",
        Provenance::Literature,
    );
    e.expect("leaf dim at origin", tangent("expected", "o"), "1", Provenance::Immediate);
    e.done()
}

pub(super) fn simple() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("simple-foliation", "fibers of pr1 on the plane are equivalent to the zero foliation of the line");
    let m = e.chart(Chart::affine("M", ["x", "y"]));
    let n = e.chart(Chart::affine("N", ["x"]));
    e.foliation("vertical", SingularFoliation::new(&m, vec![VectorField::coordinate(&m, 1)])?)?;
    e.foliation("zero", SingularFoliation::zero(&n)?)?;
    let pi_m = PolyMap::identity(&m).with_name("pi_M");
    let pi_n = PolyMap::projection("pi_N", &m, &n, &[0])?;
    e.map(pi_m.clone());
    e.map(pi_n.clone());
    e.inner.witnesses.push(MoritaWitness::new("W", pi_m, pi_n)?);
    e.point("o", &m, &[0, 0])?;
    e.expect("witness", Probe::Morita { witness: s("W"), fm: s("vertical"), fnn: s("zero") }, "witness-verified", Provenance::Literature);
    e.expect(
        "pullback of the zero foliation",
        Probe::Pullback { map: s("pi_N"), fol: s("zero"), expected: s("vertical") },
        "equal",
        Provenance::Immediate,
    );
    e.done()
}

pub(super) fn euler_rotation() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new(
        "euler-vs-rotation",
        "Euler field against rotations of the plane: different modules whose pointwise invariants all agree",
    );
    let c = e.chart(Chart::affine("R2", ["x", "y"]));
    let (x, y) = (c.coordinate(0), c.coordinate(1));
    e.generated("euler", &c, vec![vec![x.clone(), y.clone()]])?;
    e.generated("rotation", &c, vec![vec![-&y, x]])?;
    e.point("o", &c, &[0, 0])?;
    e.point("p", &c, &[1, 0])?;
    let compare = |x: &str| Probe::Compare { fm: s("euler"), x: s(x), fnn: s("rotation"), y: s(x) };
    e.expect(
        "compare at origin",
        compare("o"),
        "consistent",
        Provenance::Computed { oracle: "both isotropy algebras are one-dimensional and both generators vanish to order 1" },
    );
    e.expect("compare at (1,0)", compare("p"), "consistent", Provenance::Immediate);
    e.expect("same modules", Probe::Equal { a: s("euler"), b: s("rotation") }, "different", Provenance::Immediate);
    e.done()
}

pub(super) fn functoriality() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("functoriality", "pullback along composites of linear submersions");
    let m = e.chart(Chart::affine("M", ["x", "y"]));
    let p = e.chart(Chart::affine("P", ["x", "y", "z"]));
    let q = e.chart(Chart::affine("Q", ["x", "y", "z", "w"]));
    let (x, y) = (m.coordinate(0), m.coordinate(1));
    let z = Polynomial::zero(2);
    e.generated("xdx", &m, vec![vec![x.clone(), z.clone()]])?;
    e.foliation("gl2", transformation_foliation(&m, &gl_basis(2))?)?;
    e.foliation("sl2", transformation_foliation(&m, &sl2_basis())?)?;
    e.generated("rotation", &m, vec![vec![-&y, x.clone()]])?;
    e.generated("y2dx", &m, vec![vec![y.pow(2), z.clone()]])?;
    e.generated("mixed", &m, vec![vec![Polynomial::one(2), z.clone()], vec![z.clone(), y.pow(2)]])?;
    e.map(linear_map("pi_a", &p, &m, &[&[1, 0, 1], &[0, 1, 0]])?);
    e.map(linear_map("pi_b", &p, &m, &[&[1, -2, 1], &[0, 1, 3]])?);
    e.map(linear_map("pi_c", &p, &m, &[&[1, 2, 0], &[-1, 0, 1]])?);
    e.map(linear_map("rho_a", &q, &p, &[&[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0]])?);
    e.map(linear_map("rho_b", &q, &p, &[&[1, 1, 0, 0], &[0, 1, -1, 0], &[0, 0, 1, 1]])?);
    e.map(linear_map("rho_c", &q, &p, &[&[0, 0, 0, 1], &[1, 0, 2, 0], &[0, 1, 0, -1]])?);
    for (pi, rho, fol) in [
        ("pi_a", "rho_a", "xdx"),
        ("pi_b", "rho_b", "gl2"),
        ("pi_c", "rho_c", "sl2"),
        ("pi_a", "rho_c", "rotation"),
        ("pi_b", "rho_a", "y2dx"),
        ("pi_c", "rho_b", "mixed"),
    ] {
        e.expect(
            &alloc::format!("{fol} along {pi} o {rho}"),
            Probe::Functoriality { pi: s(pi), rho: s(rho), fol: s(fol) },
            "equal",
            Provenance::Literature,
        );
    }
    e.done()
}

pub(super) fn pushforward() -> Result<GalleryEntry, GalleryError> {
    let mut e = Entry::new("pushforward", "descending foliations along coordinate projections, with a control lacking verticals");
    let p = e.chart(Chart::affine("P", ["x", "y"]));
    let m = e.chart(Chart::affine("M", ["x"]));
    let q = e.chart(Chart::affine("Q", ["x", "y", "z"]));
    let b = e.chart(Chart::affine("B", ["u", "v"]));
    let zp = Polynomial::zero(2);
    e.generated("xdx_dy", &p, vec![vec![p.coordinate(0), zp.clone()], vec![zp.clone(), Polynomial::one(2)]])?;
    e.generated("dx", &p, vec![vec![Polynomial::one(2), zp]])?;
    e.foliation("fullP", SingularFoliation::full(&p)?)?;
    e.foliation("fullM", SingularFoliation::full(&m)?)?;
    e.generated("xdx", &m, vec![vec![m.coordinate(0)]])?;
    let gl2 = transformation_foliation(&b, &gl_basis(2))?;
    let pr = PolyMap::projection("pr_zu", &q, &b, &[2, 0])?;
    e.foliation("pulled_gl2", pullback_foliation(&pr, &gl2)?)?;
    e.foliation("gl2", gl2)?;
    e.map(PolyMap::projection("pr1", &p, &m, &[0])?);
    e.map(pr);
    let push = |map: &str, fol: &str, expected: Option<&str>| Probe::Pushforward { map: s(map), fol: s(fol), expected: expected.map(s) };
    e.expect("<x d/dx, d/dy> along pr1", push("pr1", "xdx_dy", Some("xdx")), "pushed", Provenance::Immediate);
    e.expect("full along pr1", push("pr1", "fullP", Some("fullM")), "pushed", Provenance::Immediate);
    e.expect("pulled back gl2 along (x,y,z) -> (z,x)", push("pr_zu", "pulled_gl2", Some("gl2")), "pushed", Provenance::Literature);
    e.expect("<d/dx> along pr1", push("pr1", "dx", None), "missing-vertical", Provenance::Immediate);
    e.done()
}
