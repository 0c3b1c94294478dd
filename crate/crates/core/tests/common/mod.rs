//! Independent oracles shared by the integration tests: dense rational
//! elimination, a degree-bounded linear-algebra model of membership and
//! syzygies, the matrix commutator, and seeded generator rewritings.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use folmod_core::algebra::{FreeModuleElement, Monomial, Polynomial, Rational, Submodule};
use folmod_core::foliation::{lie_invariants, SingularFoliation};
use folmod_core::geometry::{RationalPoint, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

// ---- dense elimination over Q, written independently of the kernel ----

/// Row-reduces in place; returns pivot columns.
fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip().unwrap();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(vectors: &[Vec<Rational>]) -> usize {
    let mut rows = vectors.to_vec();
    rref(&mut rows).len()
}

/// Some `c` with `sum_j c_j cols[j] = b`.
pub fn solve(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let k = cols.len();
    let mut rows: Vec<Vec<Rational>> =
        (0..n).map(|i| cols.iter().map(|c| c[i].clone()).chain([b[i].clone()]).collect()).collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][k].clone();
    }
    Some(x)
}

/// Basis of `{c : sum_j c_j cols[j] = 0}`.
pub fn nullspace(cols: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let k = cols.len();
    let mut rows: Vec<Vec<Rational>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let pivots = rref(&mut rows);
    (0..k)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); k];
            v[free] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -&rows[r][free];
            }
            v
        })
        .collect()
}

// ---- degree-bounded model of submodules of R^rank ----

pub fn monomials(nvars: usize, max_deg: u32) -> Vec<Monomial> {
    fn go(prefix: Vec<u32>, left: usize, budget: u32, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_exponents(prefix));
            return;
        }
        for e in 0..=budget {
            let mut p = prefix.clone();
            p.push(e);
            go(p, left - 1, budget - e, out);
        }
    }
    let mut out = Vec::new();
    go(Vec::new(), nvars, max_deg, &mut out);
    out
}

/// Coordinates of module elements over the basis `(position, monomial)`.
struct Coords {
    index: BTreeMap<(usize, Vec<u32>), usize>,
}

impl Coords {
    fn new(nvars: usize, rank: usize, max_deg: u32) -> Self {
        let mut index = BTreeMap::new();
        for pos in 0..rank {
            for m in monomials(nvars, max_deg) {
                let n = index.len();
                index.insert((pos, m.exponents().to_vec()), n);
            }
        }
        Coords { index }
    }

    fn vector(&self, e: &FreeModuleElement) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.index.len()];
        for (pos, p) in e.components().iter().enumerate() {
            for (m, c) in p.terms() {
                let i = *self.index.get(&(pos, m.exponents().to_vec()))?;
                v[i] = c.clone();
            }
        }
        Some(v)
    }
}

fn degree(e: &FreeModuleElement) -> u32 {
    e.total_degree().unwrap_or(0)
}

/// All `m * g` with `deg m <= bound`, over a coordinate space large enough
/// to hold them and `extra`.
fn shifted(gens: &[FreeModuleElement], nvars: usize, rank: usize, bound: u32, extra: u32) -> (Coords, Vec<Vec<Rational>>) {
    let top = gens.iter().map(degree).max().unwrap_or(0) + bound;
    let coords = Coords::new(nvars, rank, top.max(extra));
    let mut cols = Vec::new();
    for g in gens {
        for m in monomials(nvars, bound) {
            let t = Polynomial::term(m, Rational::one());
            cols.push(coords.vector(&g.mul_poly(&t)).unwrap());
        }
    }
    (coords, cols)
}

/// Whether `target = sum_i c_i g_i` with every `deg c_i <= bound`.
pub fn member_within(gens: &[FreeModuleElement], target: &FreeModuleElement, bound: u32) -> bool {
    let (nvars, rank) = (target.nvars(), target.rank());
    let (coords, cols) = shifted(gens, nvars, rank, bound, degree(target));
    let b = coords.vector(target).unwrap();
    solve(&cols, &b).is_some()
}

/// Basis of the syzygies `(a_1..a_k)` with every `deg a_i <= bound`.
pub fn syzygies_within(gens: &[FreeModuleElement], nvars: usize, rank: usize, bound: u32) -> Vec<FreeModuleElement> {
    let (coords, cols) = shifted(gens, nvars, rank, bound, 0);
    let mons = monomials(nvars, bound);
    let per = mons.len();
    nullspace(&cols, coords.index.len())
        .into_iter()
        .map(|v| {
            let comps = (0..gens.len())
                .map(|i| {
                    Polynomial::from_terms(nvars, mons.iter().cloned().zip(v[i * per..(i + 1) * per].iter().cloned()))
                })
                .collect();
            FreeModuleElement::with_ring(nvars, comps)
        })
        .collect()
}

// ---- the kernel corpus ----

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub nvars: usize,
    pub rank: usize,
    pub gens: Vec<FreeModuleElement>,
}

fn mono(e: &[u32], c: i64) -> Polynomial {
    Polynomial::term(Monomial::from_exponents(e.to_vec()), q(c))
}

fn poly(nvars: usize, terms: &[(&[u32], i64)]) -> Polynomial {
    terms.iter().fold(Polynomial::zero(nvars), |acc, (e, c)| &acc + &mono(e, *c))
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32, terms: usize) -> Polynomial {
    let mons = monomials(nvars, max_deg);
    (0..terms).fold(Polynomial::zero(nvars), |acc, _| {
        let m = mons[rng.gen_range(0..mons.len())].clone();
        &acc + &Polynomial::term(m, q(rng.gen_range(-3..=3)))
    })
}

/// Hand-picked ideals and modules followed by seeded random ones; every
/// instance has at most two variables and generators of degree at most two.
pub fn kernel_corpus() -> Vec<Instance> {
    let ideal = |name: &str, gens: Vec<Polynomial>| Instance {
        name: name.to_string(),
        nvars: gens[0].nvars(),
        rank: 1,
        gens: gens.into_iter().map(FreeModuleElement::scalar).collect(),
    };
    let module = |name: &str, gens: Vec<Vec<Polynomial>>| Instance {
        name: name.to_string(),
        nvars: gens[0][0].nvars(),
        rank: gens[0].len(),
        gens: gens.into_iter().map(FreeModuleElement::new).collect(),
    };
    let z = || Polynomial::zero(2);
    let mut out = vec![
        ideal("(x^2)", vec![poly(1, &[(&[2], 1)])]),
        ideal("(x^2, x)", vec![poly(1, &[(&[2], 1)]), poly(1, &[(&[1], 1)])]),
        ideal("(x^2 - 1, x^2 + x)", vec![poly(1, &[(&[2], 1), (&[0], -1)]), poly(1, &[(&[2], 1), (&[1], 1)])]),
        ideal("(x, y)", vec![poly(2, &[(&[1, 0], 1)]), poly(2, &[(&[0, 1], 1)])]),
        ideal("(x^2, xy, y^2)", vec![poly(2, &[(&[2, 0], 1)]), poly(2, &[(&[1, 1], 1)]), poly(2, &[(&[0, 2], 1)])]),
        ideal("(xy, x + y)", vec![poly(2, &[(&[1, 1], 1)]), poly(2, &[(&[1, 0], 1), (&[0, 1], 1)])]),
        ideal("(x^2 + y^2 - 1, x - y)", vec![poly(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]), poly(2, &[(&[1, 0], 1), (&[0, 1], -1)])]),
        ideal("(x^2 - y, xy - 1)", vec![poly(2, &[(&[2, 0], 1), (&[0, 1], -1)]), poly(2, &[(&[1, 1], 1), (&[0, 0], -1)])]),
        module("rotation", vec![vec![poly(2, &[(&[0, 1], -1)]), poly(2, &[(&[1, 0], 1)])]]),
        module(
            "gl2",
            vec![
                vec![poly(2, &[(&[1, 0], 1)]), z()],
                vec![poly(2, &[(&[0, 1], 1)]), z()],
                vec![z(), poly(2, &[(&[1, 0], 1)])],
                vec![z(), poly(2, &[(&[0, 1], 1)])],
            ],
        ),
        module(
            "euler and rotation",
            vec![
                vec![poly(2, &[(&[1, 0], 1)]), poly(2, &[(&[0, 1], 1)])],
                vec![poly(2, &[(&[0, 1], -1)]), poly(2, &[(&[1, 0], 1)])],
            ],
        ),
        module(
            "x d/dx, y^2 d/dy, xy d/dx",
            vec![
                vec![poly(2, &[(&[1, 0], 1)]), z()],
                vec![z(), poly(2, &[(&[0, 2], 1)])],
                vec![poly(2, &[(&[1, 1], 1)]), z()],
            ],
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7_0011);
    let mut n = 0;
    while out.len() < 36 {
        let nvars = rng.gen_range(1..=2);
        let rank = rng.gen_range(1..=2);
        let k = rng.gen_range(1..=3);
        let gens: Vec<FreeModuleElement> = (0..k)
            .map(|_| {
                let comps = (0..rank).map(|_| { let t = rng.gen_range(1..=3); random_poly(&mut rng, nvars, 2, t) }).collect();
                FreeModuleElement::with_ring(nvars, comps)
            })
            .filter(|g| !g.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        n += 1;
        out.push(Instance { name: format!("random {n}"), nvars, rank, gens });
    }
    out
}

/// Degree bound used when the oracle is asked to refute membership.
pub const REFUTE_BOUND: u32 = 4;
/// Degree bound on the syzygies enumerated by the oracle.
pub const SYZYGY_BOUND: u32 = 3;

fn combination(coeffs: &[Polynomial], gens: &[FreeModuleElement], nvars: usize, rank: usize) -> FreeModuleElement {
    coeffs.iter().zip(gens).fold(FreeModuleElement::zero(nvars, rank), |acc, (c, g)| &acc + &g.mul_poly(c))
}

/// Compares the kernel with the oracle on one instance; returns the number
/// of membership queries made.
pub fn check_instance(inst: &Instance, seed: u64) -> Result<usize, String> {
    let (nvars, rank) = (inst.nvars, inst.rank);
    let sub = Submodule::new(nvars, rank, inst.gens.clone()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut targets = Vec::new();
    for _ in 0..3 {
        let coeffs: Vec<Polynomial> = inst.gens.iter().map(|_| random_poly(&mut rng, nvars, 1, 2)).collect();
        targets.push(combination(&coeffs, &inst.gens, nvars, rank));
    }
    for _ in 0..4 {
        let comps = (0..rank).map(|_| { let t = rng.gen_range(1..=3); random_poly(&mut rng, nvars, 2, t) }).collect();
        targets.push(FreeModuleElement::with_ring(nvars, comps));
    }
    targets.push(FreeModuleElement::unit(nvars, rank, 0));

    for t in &targets {
        let kernel = sub.member(t).map_err(|e| e.to_string())?;
        match kernel {
            Some(cert) => {
                if cert.power != 0 {
                    return Err(format!("{}: plain membership returned a power {}", inst.name, cert.power));
                }
                let back = combination(&cert.coefficients, &inst.gens, nvars, rank);
                if &back != t {
                    return Err(format!("{}: certificate does not expand to {t:?}", inst.name));
                }
                let bound = cert.coefficients.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0);
                if !member_within(&inst.gens, t, bound) {
                    return Err(format!("{}: oracle finds no representation of degree {bound}", inst.name));
                }
            }
            None => {
                if member_within(&inst.gens, t, REFUTE_BOUND) {
                    return Err(format!("{}: kernel refuses {t:?} but the oracle represents it", inst.name));
                }
            }
        }
    }

    let syz = sub.syzygies().map_err(|e| e.to_string())?;
    let k = inst.gens.len();
    for s in syz.generators() {
        if !combination(s.components(), &inst.gens, nvars, rank).is_zero() {
            return Err(format!("{}: kernel syzygy {s:?} is not a relation", inst.name));
        }
    }
    let syz_gens: Vec<FreeModuleElement> = syz.generators().to_vec();
    for v in syzygies_within(&inst.gens, nvars, rank, SYZYGY_BOUND) {
        let generated = !syz_gens.is_empty() && member_within(&syz_gens, &v, SYZYGY_BOUND);
        if !generated {
            return Err(format!("{}: oracle syzygy {v:?} of the {k} generators is not generated by the kernel's", inst.name));
        }
    }
    Ok(targets.len())
}

// ---- Lie algebra oracles ----

pub type Mat = Vec<Vec<Rational>>;

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn flatten(m: &Mat) -> Vec<Rational> {
    m.iter().flatten().cloned().collect()
}

pub fn combine(coeffs: &[Rational], mats: &[Mat]) -> Mat {
    let n = mats[0].len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for (c, m) in coeffs.iter().zip(mats) {
        for i in 0..n {
            for j in 0..n {
                out[i][j] += &(c * &m[i][j]);
            }
        }
    }
    out
}

/// Dimensions of the derived series of the span of `mats`, down to the
/// first repeated dimension.
pub fn derived_dims(mats: &[Mat]) -> Vec<usize> {
    let mut current: Vec<Vec<Rational>> = mats.iter().map(flatten).collect();
    let n = mats[0].len();
    let unflatten = |v: &Vec<Rational>| -> Mat { v.chunks(n).map(<[Rational]>::to_vec).collect() };
    let mut dims = vec![rank(&current)];
    loop {
        let ms: Vec<Mat> = current.iter().map(unflatten).collect();
        let mut next = Vec::new();
        for a in &ms {
            for b in &ms {
                next.push(flatten(&commutator(a, b)));
            }
        }
        let d = rank(&next);
        let last = *dims.last().unwrap();
        dims.push(d);
        if d == last || d == 0 {
            return dims;
        }
        current = next;
    }
}

// ---- generator rewritings ----

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-4..=4);
    }
    Rational::new(c, rng.gen_range(1..=3))
}

/// A random generating set of the same module: permutation, nonzero
/// rescaling, elementary operations with polynomial multipliers and one
/// redundant combination.
pub fn rewrite(f: &SingularFoliation, rng: &mut ChaCha8Rng) -> SingularFoliation {
    let chart = f.chart().clone();
    let n = chart.dim();
    let mut gens: Vec<VectorField> = f.generators().to_vec();
    for i in (1..gens.len()).rev() {
        gens.swap(i, rng.gen_range(0..=i));
    }
    for g in gens.iter_mut() {
        *g = g.scale(&small_rational(rng));
    }
    if gens.len() > 1 {
        for _ in 0..2 {
            let i = rng.gen_range(0..gens.len());
            let j = (i + rng.gen_range(1..gens.len())) % gens.len();
            let m = random_poly(rng, n, 1, 2);
            gens[i] = gens[i].add(&gens[j].mul_poly(&m)).unwrap();
        }
    }
    let extra = gens
        .iter()
        .fold(VectorField::zero(&chart), |acc, g| acc.add(&g.mul_poly(&random_poly(rng, n, 1, 1))).unwrap());
    gens.push(extra);
    SingularFoliation::new(&chart, gens).unwrap().checked().unwrap()
}

/// The pointwise invariants compared across rewritings.
pub fn pointwise(f: &SingularFoliation, p: &RationalPoint) -> String {
    let iso = f.isotropy_algebra(p).unwrap();
    let inv = lie_invariants(&iso);
    format!(
        "tangent {} fiber {} isotropy {} derived {:?} lower {:?} center {} order {}",
        f.tangent_dim(p).unwrap(),
        f.fiber_dim(p).unwrap(),
        iso.dim,
        inv.derived_series_dims,
        inv.lower_central_dims,
        inv.center_dim,
        f.vanishing_order(p).unwrap().order,
    )
}

/// Every foliation of every gallery entry, tagged `entry/name`.
pub fn gallery_foliations() -> Vec<(String, SingularFoliation)> {
    let mut out = Vec::new();
    for name in folmod_core::gallery::list() {
        let e = folmod_core::gallery::load(name).unwrap();
        for (fname, f) in e.foliations {
            out.push((format!("{name}/{fname}"), f));
        }
    }
    out
}

/// Rank of the values of the generators at `p`, computed here.
pub fn tangent_oracle(f: &SingularFoliation, p: &RationalPoint) -> usize {
    let values: Vec<Vec<Rational>> =
        f.generators().iter().map(|g| g.components().iter().map(|c| c.evaluate(p.coords())).collect()).collect();
    rank(&values)
}

/// Seeded points of the chart's domain: the origin when allowed, then
/// coordinates `a/b` with `|a| <= 9`, `1 <= b <= 7`.
pub fn sample(chart: &Arc<folmod_core::geometry::Chart>, count: usize, seed: u64) -> Vec<RationalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<RationalPoint> = RationalPoint::origin(chart).into_iter().collect();
    while out.len() < count {
        let coords = (0..chart.dim()).map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect();
        if let Ok(p) = RationalPoint::new(chart, coords) {
            out.push(p);
        }
    }
    out
}
