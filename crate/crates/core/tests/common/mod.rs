//! Independent oracles shared by the integration tests. Nothing here calls
//! the library routine it is used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qism_core::dense::ExactMatrix;
use qism_core::models::{classify_vertex, weight_class, HArrow, VArrow, WeightClass};
use qism_core::poisson::{Atom, ElemBracketTable, Gen, GenPoly, PExpr, TableValue, ValueExpr};
use qism_core::scalar::{gq, gq_inv, GaussQ, Scalar};
use qism_core::vertex::{Lattice, LatticeConfig, VertexModel, WeightPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero Gaussian rational `p/q + i r/s` with small parts.
pub fn random_gauss(rng: &mut ChaCha8Rng) -> GaussQ {
    loop {
        let re = BigRational::new(rng.gen_range(-7i64..=7).into(), rng.gen_range(1i64..=4).into());
        let im = BigRational::new(rng.gen_range(-7i64..=7).into(), rng.gen_range(1i64..=4).into());
        let z = GaussQ::new(re, im);
        if !z.is_zero() {
            return z;
        }
    }
}

// ---------------------------------------------------------------------------
// dense block-product monodromy of the 4-vertex model

fn unit2(i: usize, j: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(2, 2);
    m.set(i, j, gq(1, 0));
    m
}

/// `op` on `site` of an `n`-site chain; site 0 is the leading tensor factor.
pub fn embed(op: &ExactMatrix, site: usize, n: usize) -> ExactMatrix {
    let mut acc = ExactMatrix::identity(1);
    for k in 0..n {
        acc = if k == site { acc.kron(op) } else { acc.kron(&ExactMatrix::identity(op.rows())) };
    }
    acc
}

/// `[[−u e, σ⁻], [σ⁺, u⁻¹ e]]` with `e = |⇑⟩⟨⇑|`, `|⇓⟩ = e₀`, `|⇑⟩ = e₁`.
pub fn l4v_blocks(u: &GaussQ, site: usize, n: usize) -> [[ExactMatrix; 2]; 2] {
    let e = unit2(1, 1);
    let sp = unit2(1, 0);
    let sm = unit2(0, 1);
    let u_inv = gq_inv(u).expect("u nonzero");
    [
        [embed(&e.scale(&-u.clone()), site, n), embed(&sm, site, n)],
        [embed(&sp, site, n), embed(&e.scale(&u_inv), site, n)],
    ]
}

fn block_mul(x: &[[ExactMatrix; 2]; 2], y: &[[ExactMatrix; 2]; 2]) -> [[ExactMatrix; 2]; 2] {
    let cell = |i: usize, j: usize| x[i][0].matmul(&y[0][j]).unwrap().add(&x[i][1].matmul(&y[1][j]).unwrap()).unwrap();
    [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]]
}

/// `L(0|u) L(1|u) ⋯ L(n−1|u)` as four dense blocks.
pub fn dense_monodromy_4v(u: &GaussQ, n: usize) -> [[ExactMatrix; 2]; 2] {
    let mut t = l4v_blocks(u, 0, n);
    for site in 1..n {
        t = block_mul(&t, &l4v_blocks(u, site, n));
    }
    t
}

pub fn dense_transfer_4v(u: &GaussQ, n: usize) -> ExactMatrix {
    let t = dense_monodromy_4v(u, n);
    t[0][0].add(&t[1][1]).unwrap()
}

// ---------------------------------------------------------------------------
// brute-force vertex configurations

/// Arrows pointing into the vertex, counted edge by edge.
fn inward(left: HArrow, right: HArrow, bottom: VArrow, top: VArrow) -> usize {
    (left == HArrow::East) as usize + (right == HArrow::West) as usize + (bottom == VArrow::North) as usize + (top == VArrow::South) as usize
}

/// Ice rule recount over every vertex of a configuration.
pub fn ice_ok(cfg: &LatticeConfig) -> bool {
    (0..cfg.rows()).all(|r| {
        (0..cfg.cols()).all(|c| inward(cfg.h(r, c), cfg.h(r, c + 1), cfg.v(r, c), cfg.v(r + 1, c)) == 2)
    })
}

/// All configurations compatible with the boundary, found by trying every
/// assignment of the internal edges.
pub fn brute_force_configs(lat: &Lattice, model: VertexModel) -> BTreeSet<LatticeConfig> {
    let (rows, cols) = (lat.rows(), lat.cols());
    let nh = rows * (cols - 1);
    let nv = (rows - 1) * cols;
    assert!(nh + nv <= 16, "brute force is for small lattices");
    let allowed = model.allowed();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << (nh + nv)) {
        let bit = |k: usize| mask >> k & 1 == 1;
        let mut h = Vec::with_capacity(rows * (cols + 1));
        let mut k = 0;
        for r in 0..rows {
            for j in 0..=cols {
                h.push(if j == 0 {
                    lat.left_arrow(r)
                } else if j == cols {
                    lat.right_arrow(r)
                } else {
                    k += 1;
                    if bit(k - 1) { HArrow::East } else { HArrow::West }
                });
            }
        }
        let mut v = Vec::with_capacity((rows + 1) * cols);
        for i in 0..=rows {
            for c in 0..cols {
                v.push(if i == 0 {
                    lat.bottom_arrow(c)
                } else if i == rows {
                    lat.top_arrow(c)
                } else {
                    k += 1;
                    if bit(k - 1) { VArrow::North } else { VArrow::South }
                });
            }
        }
        let ice = (0..rows).all(|r| {
            (0..cols).all(|c| inward(h[r * (cols + 1) + c], h[r * (cols + 1) + c + 1], v[r * cols + c], v[(r + 1) * cols + c]) == 2)
        });
        if !ice {
            continue;
        }
        let types_ok = (0..rows).all(|r| {
            (0..cols).all(|c| {
                classify_vertex(h[r * (cols + 1) + c], h[r * (cols + 1) + c + 1], v[r * cols + c], v[(r + 1) * cols + c])
                    .is_some_and(|t| allowed.contains(&t))
            })
        });
        if types_ok {
            out.insert(LatticeConfig::from_edges(rows, cols, h, v).expect("ice rule holds"));
        }
    }
    out
}

/// `Σ a^{n_a} b^{n_b} c^{n_c}` over the brute-force configurations.
pub fn brute_force_partition(lat: &Lattice, model: VertexModel) -> BTreeMap<[u32; 3], BigInt> {
    let mut z: BTreeMap<[u32; 3], BigInt> = BTreeMap::new();
    for cfg in brute_force_configs(lat, model) {
        let mut e = [0u32; 3];
        for &t in cfg.types() {
            match weight_class(t).unwrap() {
                WeightClass::A => e[0] += 1,
                WeightClass::B => e[1] += 1,
                WeightClass::C => e[2] += 1,
            }
        }
        *z.entry(e).or_default() += 1;
    }
    z
}

pub fn weight_poly_map(p: &WeightPoly) -> BTreeMap<[u32; 3], BigInt> {
    p.terms().map(|(e, c)| (*e, c.clone())).collect()
}

// ---------------------------------------------------------------------------
// commutative polynomial ring with a constant Poisson bivector

/// Polynomial in atoms `x0 … x{k−1}`, exponent vectors to coefficients.
pub type Poly = BTreeMap<Vec<u32>, BigRational>;

pub fn atom_name(i: usize) -> String {
    format!("x{i}")
}

fn poly_add_term(p: &mut Poly, e: Vec<u32>, c: BigRational) {
    let s = p.remove(&e).unwrap_or_else(BigRational::zero) + c;
    if !s.is_zero() {
        p.insert(e, s);
    }
}

pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        poly_add_term(&mut out, e.clone(), c.clone());
    }
    out
}

pub fn poly_scale(a: &Poly, s: &BigRational) -> Poly {
    let mut out = Poly::new();
    for (e, c) in a {
        poly_add_term(&mut out, e.clone(), c * s);
    }
    out
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            poly_add_term(&mut out, e, ca * cb);
        }
    }
    out
}

fn poly_diff(a: &Poly, var: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in a {
        if e[var] > 0 {
            let mut f = e.clone();
            f[var] -= 1;
            poly_add_term(&mut out, f, c * BigRational::from_integer(e[var].into()));
        }
    }
    out
}

/// Antisymmetric constant matrix `ω`.
#[derive(Clone, Debug)]
pub struct Bivector {
    pub k: usize,
    pub omega: Vec<Vec<BigRational>>,
}

impl Bivector {
    pub fn random(k: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut omega = vec![vec![BigRational::zero(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let w = BigRational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=4).into());
                omega[j][i] = -w.clone();
                omega[i][j] = w;
            }
        }
        Bivector { k, omega }
    }

    /// `{F, G} = Σ ω_ab ∂_a F ∂_b G`.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Poly {
        let mut out = Poly::new();
        for a in 0..self.k {
            let fa = poly_diff(f, a);
            if fa.is_empty() {
                continue;
            }
            for b in 0..self.k {
                if self.omega[a][b].is_zero() {
                    continue;
                }
                let gb = poly_diff(g, b);
                out = poly_add(&out, &poly_scale(&poly_mul(&fa, &gb), &self.omega[a][b]));
            }
        }
        out
    }

    /// The same values as a bracket table over atoms `x0 …`.
    pub fn table(&self) -> ElemBracketTable {
        let mut t = ElemBracketTable::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                let w = &self.omega[i][j];
                let s = Scalar::from(GaussQ::new(w.clone(), BigRational::zero()));
                t.insert(Atom::new(atom_name(i), ""), Atom::new(atom_name(j), ""), TableValue::Value(ValueExpr::Num(s)), false).unwrap();
            }
        }
        t
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut e = vec![0; self.k];
        e[i] = 1;
        Poly::from([(e, BigRational::one())])
    }

    pub fn constant(&self, c: BigRational) -> Poly {
        let mut p = Poly::new();
        poly_add_term(&mut p, vec![0; self.k], c);
        p
    }

    /// Evaluate an expression over atoms `x0 …`, brackets through `ω`.
    pub fn eval(&self, e: &PExpr) -> Poly {
        match e {
            PExpr::Atom(a) => self.var(a.name[1..].parse().expect("atom x<i>")),
            PExpr::Num(s) => self.constant(real(s)),
            PExpr::Sum(v) => v.iter().fold(Poly::new(), |acc, x| poly_add(&acc, &self.eval(x))),
            PExpr::Product(v) => v.iter().fold(self.constant(BigRational::one()), |acc, x| poly_mul(&acc, &self.eval(x))),
            PExpr::ScalarMul(c, x) => poly_scale(&self.eval(x), &real(c)),
            PExpr::Bracket(a, b) => self.bracket(&self.eval(a), &self.eval(b)),
        }
    }

    /// Convert a bracket-free library polynomial.
    pub fn from_genpoly(&self, p: &GenPoly) -> Poly {
        let mut out = Poly::new();
        for (m, c) in p.terms() {
            let mut e = vec![0; self.k];
            for g in m {
                match g {
                    Gen::Atom(a) => e[a.name[1..].parse::<usize>().unwrap()] += 1,
                    Gen::Bracket(..) => panic!("unresolved bracket {g}"),
                }
            }
            poly_add_term(&mut out, e, real(c));
        }
        out
    }
}

pub fn real(s: &Scalar) -> BigRational {
    let z = s.as_exact().expect("exact scalar");
    assert!(z.im.is_zero(), "real scalar expected");
    z.re.clone()
}

pub fn atom_expr(i: usize) -> PExpr {
    PExpr::Atom(Atom::new(atom_name(i), ""))
}

pub fn num_expr(n: i64) -> PExpr {
    PExpr::Num(Scalar::int(n))
}

/// Atoms used by the random expression generators.
pub const K: usize = 5;

/// Random polynomial expression in `x0 … x{K−1}` with brackets nested at
/// most `depth` deep.
pub fn random_expr(r: &mut ChaCha8Rng, depth: usize) -> PExpr {
    sized_expr(r, depth, 4)
}

fn sized_expr(r: &mut ChaCha8Rng, depth: usize, budget: usize) -> PExpr {
    let roll = if budget == 0 { r.gen_range(0..5) } else { r.gen_range(0..10) };
    match roll {
        0..=3 => atom_expr(r.gen_range(0..K)),
        4 => num_expr(r.gen_range(-3..=3)),
        5 | 6 => PExpr::Sum((0..r.gen_range(2..=3)).map(|_| sized_expr(r, depth, budget - 1)).collect()),
        7 => PExpr::Product((0..2).map(|_| sized_expr(r, depth / 2, budget - 1)).collect()),
        _ if depth > 0 => PExpr::bracket(sized_expr(r, depth - 1, budget - 1), sized_expr(r, depth - 1, budget - 1)),
        _ => atom_expr(r.gen_range(0..K)),
    }
}

/// Bracket-free random polynomial expression.
pub fn random_poly_expr(r: &mut ChaCha8Rng) -> PExpr {
    let terms = (0..r.gen_range(1..=3))
        .map(|_| {
            let mut f: Vec<PExpr> = (0..r.gen_range(1..=3)).map(|_| atom_expr(r.gen_range(0..K))).collect();
            f.push(num_expr(r.gen_range(-4..=4)));
            PExpr::Product(f)
        })
        .collect();
    PExpr::Sum(terms)
}
