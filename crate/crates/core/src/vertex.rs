//! Ice-rule configurations on small rectangular lattices, exact partition
//! polynomials, probabilities, and the row-transfer evaluation of `Z`.
//!
//! Geometry: rows are numbered bottom to top, columns left to right. Row `r`
//! has horizontal edges `h[r][0..=C]` (`h[r][0]` on the left boundary) and
//! column `c` has vertical edges `v[0..=R][c]` (`v[0][c]` on the bottom
//! boundary). Boundary tokens say whether the arrow points into the lattice.
//! The boundary ring lists the top side left to right, the right side top to
//! bottom, the bottom side right to left, then the left side bottom to top.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QismError, Result};
use crate::laurent::Laurent;
use crate::models::{self, classify_vertex, weight_class, Convention, HArrow, VArrow, WeightClass};
use crate::monodromy::{monodromy_symbolic, SiteOrder};
use crate::scalar::Scalar;

/// Largest number of vertices the enumerator accepts.
pub const MAX_VERTICES: usize = 16;
/// Largest number of columns for the row-transfer evaluation (`2^C` states).
pub const MAX_TRANSFER_COLS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Io {
    In,
    Out,
}

impl Io {
    fn flip(self) -> Io {
        match self {
            Io::In => Io::Out,
            Io::Out => Io::In,
        }
    }
}

impl fmt::Display for Io {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Io::In => "in",
            Io::Out => "out",
        })
    }
}

impl std::str::FromStr for Io {
    type Err = QismError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(Io::In),
            "out" => Ok(Io::Out),
            _ => Err(QismError::InvalidParameter(format!("boundary token must be in/out, got `{s}`"))),
        }
    }
}

/// Named boundary conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryPreset {
    /// Left and right in, top and bottom out.
    Dwbc,
    /// Top and bottom in, left and right out.
    DwbcDual,
    /// Every arrow points east or north.
    Ferro,
    /// Boundary of a seeded random ice configuration.
    Random(u64),
}

impl std::str::FromStr for BoundaryPreset {
    type Err = QismError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dwbc" => Ok(BoundaryPreset::Dwbc),
            "dwbc-dual" => Ok(BoundaryPreset::DwbcDual),
            "ferro" => Ok(BoundaryPreset::Ferro),
            _ => match s.strip_prefix("random:").or_else(|| s.strip_prefix("random-")) {
                Some(seed) => seed
                    .parse()
                    .map(BoundaryPreset::Random)
                    .map_err(|_| QismError::InvalidParameter(format!("bad random seed in `{s}`"))),
                None => Err(QismError::InvalidParameter(format!("unknown boundary preset `{s}`"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    rows: usize,
    cols: usize,
    /// Per row, bottom to top.
    left: Vec<Io>,
    right: Vec<Io>,
    /// Per column, left to right.
    bottom: Vec<Io>,
    top: Vec<Io>,
}

fn check_size(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(QismError::InvalidParameter("lattice needs at least one row and column".into()));
    }
    if rows * cols > MAX_VERTICES {
        return Err(QismError::LatticeTooLarge { rows, cols, cap: MAX_VERTICES });
    }
    Ok(())
}

impl Lattice {
    /// Lattice with boundary given as a ring of `2(R+C)` tokens.
    pub fn new(rows: usize, cols: usize, ring: &[Io]) -> Result<Self> {
        check_size(rows, cols)?;
        let expected = 2 * (rows + cols);
        if ring.len() != expected {
            return Err(QismError::BoundaryLength { expected, found: ring.len() });
        }
        let mut it = ring.iter().copied();
        let top: Vec<Io> = it.by_ref().take(cols).collect();
        let mut right: Vec<Io> = it.by_ref().take(rows).collect();
        right.reverse();
        let mut bottom: Vec<Io> = it.by_ref().take(cols).collect();
        bottom.reverse();
        let left: Vec<Io> = it.collect();
        Ok(Lattice { rows, cols, left, right, bottom, top })
    }

    pub fn preset(rows: usize, cols: usize, preset: BoundaryPreset) -> Result<Self> {
        check_size(rows, cols)?;
        let sides = |l: Io, r: Io, b: Io, t: Io| Lattice {
            rows,
            cols,
            left: vec![l; rows],
            right: vec![r; rows],
            bottom: vec![b; cols],
            top: vec![t; cols],
        };
        Ok(match preset {
            BoundaryPreset::Dwbc => sides(Io::In, Io::In, Io::Out, Io::Out),
            BoundaryPreset::DwbcDual => sides(Io::Out, Io::Out, Io::In, Io::In),
            BoundaryPreset::Ferro => sides(Io::In, Io::Out, Io::In, Io::Out),
            BoundaryPreset::Random(seed) => random_config(rows, cols, seed).boundary_lattice(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> Vec<Io> {
        let mut out = self.top.clone();
        out.extend(self.right.iter().rev());
        out.extend(self.bottom.iter().rev());
        out.extend(self.left.iter());
        out
    }

    pub fn left_arrow(&self, r: usize) -> HArrow {
        if self.left[r] == Io::In { HArrow::East } else { HArrow::West }
    }

    pub fn right_arrow(&self, r: usize) -> HArrow {
        if self.right[r] == Io::In { HArrow::West } else { HArrow::East }
    }

    pub fn bottom_arrow(&self, c: usize) -> VArrow {
        if self.bottom[c] == Io::In { VArrow::North } else { VArrow::South }
    }

    pub fn top_arrow(&self, c: usize) -> VArrow {
        if self.top[c] == Io::In { VArrow::South } else { VArrow::North }
    }

    /// Boundary arrows in equal numbers in and out; otherwise no
    /// configuration exists.
    pub fn flux_balanced(&self) -> bool {
        let ring = self.ring();
        let ins = ring.iter().filter(|&&t| t == Io::In).count();
        2 * ins == ring.len()
    }

    /// Internal edges: `R(C−1)` horizontal plus `(R−1)C` vertical.
    pub fn internal_edges(&self) -> usize {
        self.rows * (self.cols - 1) + (self.rows - 1) * self.cols
    }

    /// Same lattice with every boundary token flipped.
    pub fn reversed(&self) -> Lattice {
        let f = |v: &Vec<Io>| v.iter().map(|t| t.flip()).collect();
        Lattice { rows: self.rows, cols: self.cols, left: f(&self.left), right: f(&self.right), bottom: f(&self.bottom), top: f(&self.top) }
    }
}

/// Serialized lattice description.
#[derive(Clone, Debug, Deserialize)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    /// A preset name or an explicit ring of `in`/`out` tokens.
    pub boundary: BoundarySpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum BoundarySpec {
    Preset(String),
    Ring(Vec<Io>),
}

impl LatticeSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(1);
            QismError::parse(line, e.message().to_string())
        })
    }

    pub fn build(&self) -> Result<Lattice> {
        match &self.boundary {
            BoundarySpec::Preset(p) => {
                let words: Vec<&str> = p.split_whitespace().collect();
                if words.len() == 2 * (self.rows + self.cols) {
                    let ring = words.iter().map(|w| w.parse()).collect::<Result<Vec<Io>>>()?;
                    Lattice::new(self.rows, self.cols, &ring)
                } else {
                    Lattice::preset(self.rows, self.cols, p.parse()?)
                }
            }
            BoundarySpec::Ring(r) => Lattice::new(self.rows, self.cols, r),
        }
    }
}

/// Arrow assignment on all edges with the derived vertex types.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeConfig {
    rows: usize,
    cols: usize,
    h: Vec<HArrow>,
    v: Vec<VArrow>,
    types: Vec<u8>,
}

impl LatticeConfig {
    /// Build from edge arrows, checking the ice rule at every vertex.
    pub fn from_edges(rows: usize, cols: usize, h: Vec<HArrow>, v: Vec<VArrow>) -> Option<Self> {
        if h.len() != rows * (cols + 1) || v.len() != (rows + 1) * cols {
            return None;
        }
        let mut types = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let t = classify_vertex(h[r * (cols + 1) + c], h[r * (cols + 1) + c + 1], v[r * cols + c], v[(r + 1) * cols + c])?;
                types.push(t);
            }
        }
        Some(LatticeConfig { rows, cols, h, v, types })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn h(&self, r: usize, j: usize) -> HArrow {
        self.h[r * (self.cols + 1) + j]
    }

    pub fn v(&self, i: usize, c: usize) -> VArrow {
        self.v[i * self.cols + c]
    }

    pub fn vertex_type(&self, r: usize, c: usize) -> u8 {
        self.types[r * self.cols + c]
    }

    pub fn types(&self) -> &[u8] {
        &self.types
    }

    /// `n₁ … n₆`.
    pub fn counts(&self) -> [usize; 6] {
        let mut n = [0; 6];
        for &t in &self.types {
            n[t as usize - 1] += 1;
        }
        n
    }

    /// Lattice whose boundary matches this configuration.
    pub fn boundary_lattice(&self) -> Lattice {
        let io_h = |a: HArrow, inward: HArrow| if a == inward { Io::In } else { Io::Out };
        let io_v = |a: VArrow, inward: VArrow| if a == inward { Io::In } else { Io::Out };
        Lattice {
            rows: self.rows,
            cols: self.cols,
            left: (0..self.rows).map(|r| io_h(self.h(r, 0), HArrow::East)).collect(),
            right: (0..self.rows).map(|r| io_h(self.h(r, self.cols), HArrow::West)).collect(),
            bottom: (0..self.cols).map(|c| io_v(self.v(0, c), VArrow::North)).collect(),
            top: (0..self.cols).map(|c| io_v(self.v(self.rows, c), VArrow::South)).collect(),
        }
    }

    /// Render as text, top row first: `>`/`<` horizontal, `^`/`v` vertical.
    pub fn render(&self) -> String {
        let hv = |a: HArrow| if a == HArrow::East { '>' } else { '<' };
        let vv = |a: VArrow| if a == VArrow::North { '^' } else { 'v' };
        let mut s = String::new();
        for i in (0..=self.rows).rev() {
            s.push(' ');
            for c in 0..self.cols {
                s.push(vv(self.v(i, c)));
                s.push(' ');
            }
            s.push('\n');
            if i > 0 {
                let r = i - 1;
                for j in 0..=self.cols {
                    s.push(hv(self.h(r, j)));
                    if j < self.cols {
                        s.push(char::from(b'0' + self.vertex_type(r, j)));
                    }
                }
                s.push('\n');
            }
        }
        s
    }
}

/// Random ice configuration: boundary arrows on the left and bottom are drawn
/// at random, then each vertex, bottom to top and left to right, chooses its
/// outgoing pair uniformly among those that satisfy the ice rule.
fn random_config(rows: usize, cols: usize, seed: u64) -> LatticeConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = vec![HArrow::East; rows * (cols + 1)];
    let mut v = vec![VArrow::North; (rows + 1) * cols];
    for r in 0..rows {
        h[r * (cols + 1)] = if rng.gen_bool(0.5) { HArrow::East } else { HArrow::West };
    }
    for c in 0..cols {
        v[c] = if rng.gen_bool(0.5) { VArrow::North } else { VArrow::South };
    }
    for r in 0..rows {
        for c in 0..cols {
            let k = (h[r * (cols + 1) + c] == HArrow::East) as u8 + (v[r * cols + c] == VArrow::North) as u8;
            let (right, top) = match k {
                0 => (HArrow::West, VArrow::South),
                2 => (HArrow::East, VArrow::North),
                _ if rng.gen_bool(0.5) => (HArrow::East, VArrow::South),
                _ => (HArrow::West, VArrow::North),
            };
            h[r * (cols + 1) + c + 1] = right;
            v[(r + 1) * cols + c] = top;
        }
    }
    LatticeConfig::from_edges(rows, cols, h, v).expect("construction respects the ice rule")
}

/// Vertex model selecting the allowed types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexModel {
    /// b-type vertices forbidden.
    FourVertex,
    SixVertex,
}

impl VertexModel {
    pub fn allowed(self) -> BTreeSet<u8> {
        models::vertex_types()
            .iter()
            .filter(|t| self == VertexModel::SixVertex || t.class != WeightClass::B)
            .map(|t| t.id)
            .collect()
    }
}

impl std::str::FromStr for VertexModel {
    type Err = QismError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4v" => Ok(VertexModel::FourVertex),
            "6v" => Ok(VertexModel::SixVertex),
            _ => Err(QismError::InvalidParameter(format!("vertex model must be 4v or 6v, got `{s}`"))),
        }
    }
}

/// Depth-first stream of configurations, vertex by vertex in row-major
/// order from the bottom-left corner. The right and top edges of a vertex
/// are fixed by its type; types that contradict the boundary on the last
/// column or top row are pruned immediately.
pub struct ConfigIter {
    lattice: Lattice,
    allowed: [bool; 7],
    h: Vec<HArrow>,
    v: Vec<VArrow>,
    types: Vec<u8>,
    /// Next table index to try at each vertex.
    next: Vec<usize>,
    pos: usize,
    done: bool,
    consistent: bool,
}

impl ConfigIter {
    /// False when the boundary admits no configuration for flux reasons.
    pub fn boundary_consistent(&self) -> bool {
        self.consistent
    }

    fn try_advance(&mut self) -> bool {
        let (rows, cols) = (self.lattice.rows, self.lattice.cols);
        let k = self.pos;
        let (r, c) = (k / cols, k % cols);
        let left = self.h[r * (cols + 1) + c];
        let bottom = self.v[r * cols + c];
        let table = models::vertex_types();
        while self.next[k] < table.len() {
            let t = table[self.next[k]];
            self.next[k] += 1;
            if !self.allowed[t.id as usize] || t.left != left || t.bottom != bottom {
                continue;
            }
            if c + 1 == cols && t.right != self.lattice.right_arrow(r) {
                continue;
            }
            if r + 1 == rows && t.top != self.lattice.top_arrow(c) {
                continue;
            }
            self.h[r * (cols + 1) + c + 1] = t.right;
            self.v[(r + 1) * cols + c] = t.top;
            self.types[k] = t.id;
            return true;
        }
        false
    }
}

impl Iterator for ConfigIter {
    type Item = LatticeConfig;

    fn next(&mut self) -> Option<LatticeConfig> {
        let nv = self.lattice.rows * self.lattice.cols;
        while !self.done {
            if self.pos == nv {
                let out = LatticeConfig {
                    rows: self.lattice.rows,
                    cols: self.lattice.cols,
                    h: self.h.clone(),
                    v: self.v.clone(),
                    types: self.types.clone(),
                };
                self.pos -= 1;
                return Some(out);
            }
            if self.try_advance() {
                self.pos += 1;
                if self.pos < nv {
                    self.next[self.pos] = 0;
                }
            } else if self.pos == 0 {
                self.done = true;
            } else {
                self.pos -= 1;
            }
        }
        None
    }
}

/// Every ice-rule configuration consistent with the boundary whose vertex
/// types all lie in `allowed`.
pub fn enumerate(lattice: &Lattice, allowed: &BTreeSet<u8>) -> Result<ConfigIter> {
    check_size(lattice.rows, lattice.cols)?;
    let (rows, cols) = (lattice.rows, lattice.cols);
    let mut h = vec![HArrow::East; rows * (cols + 1)];
    let mut v = vec![VArrow::North; (rows + 1) * cols];
    for r in 0..rows {
        h[r * (cols + 1)] = lattice.left_arrow(r);
        h[r * (cols + 1) + cols] = lattice.right_arrow(r);
    }
    for c in 0..cols {
        v[c] = lattice.bottom_arrow(c);
        v[rows * cols + c] = lattice.top_arrow(c);
    }
    let mut mask = [false; 7];
    for &t in allowed {
        if (1..=6).contains(&t) {
            mask[t as usize] = true;
        }
    }
    let consistent = lattice.flux_balanced();
    Ok(ConfigIter {
        lattice: lattice.clone(),
        allowed: mask,
        h,
        v,
        types: vec![0; rows * cols],
        next: vec![0; rows * cols],
        pos: 0,
        done: !consistent,
        consistent,
    })
}

/// Commutative semiring used for weights.
pub trait Weight: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn w_add(&self, other: &Self) -> Self;
    fn w_mul(&self, other: &Self) -> Self;
}

impl Weight for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn w_add(&self, other: &Self) -> Self {
        self + other
    }
    fn w_mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Weight for Laurent {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn one() -> Self {
        Laurent::one()
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn w_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn w_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

/// Polynomial in `(a, b, c)` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeightPoly {
    terms: BTreeMap<[u32; 3], BigInt>,
}

impl WeightPoly {
    pub fn monomial(exps: [u32; 3]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigInt::one());
        WeightPoly { terms }
    }

    /// `a`, `b` or `c`.
    pub fn var(class: WeightClass) -> Self {
        Self::monomial(match class {
            WeightClass::A => [1, 0, 0],
            WeightClass::B => [0, 1, 0],
            WeightClass::C => [0, 0, 1],
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Sum of coefficients: the value at `a = b = c = 1`.
    pub fn total(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `(exp_a, exp_c, count)` triples; `None` if some term involves `b`.
    pub fn triples(&self) -> Option<Vec<(u32, u32, BigInt)>> {
        self.terms.iter().map(|(e, k)| (e[1] == 0).then(|| (e[0], e[2], k.clone()))).collect()
    }

    /// `(exp_a, exp_b, exp_c, count)` quadruples.
    pub fn quadruples(&self) -> Vec<(u32, u32, u32, BigInt)> {
        self.terms.iter().map(|(e, k)| (e[0], e[1], e[2], k.clone())).collect()
    }

    pub fn evaluate(&self, a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (e, k) in &self.terms {
            let k = k.to_i64().ok_or_else(|| QismError::InvalidParameter("coefficient too large".into()))?;
            let mut t = Scalar::int(k);
            for (x, p) in [(a, e[0]), (b, e[1]), (c, e[2])] {
                t = &t * &x.pow(p as i32)?;
            }
            total = &total + &t;
        }
        Ok(total)
    }

    fn add_term(&mut self, e: [u32; 3], k: BigInt) {
        let sum = self.terms.remove(&e).unwrap_or_default() + k;
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }
}

impl Weight for WeightPoly {
    fn zero() -> Self {
        WeightPoly::default()
    }
    fn one() -> Self {
        WeightPoly::monomial([0, 0, 0])
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn w_add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, k) in &other.terms {
            out.add_term(*e, k.clone());
        }
        out
    }
    fn w_mul(&self, other: &Self) -> Self {
        let mut out = WeightPoly::default();
        for (ea, ka) in &self.terms {
            for (eb, kb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ka * kb);
            }
        }
        out
    }
}

impl fmt::Display for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, k)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = ["a", "b", "c"]
                .iter()
                .zip(e)
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| if p == 1 { v.to_string() } else { format!("{v}^{p}") })
                .collect();
            let sign = if k.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if k.is_negative() {
                f.write_str("-")?;
            }
            let mag = k.abs();
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Per-site weights `(w_a, w_b, w_c)`, row-major from the bottom-left vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct InhomogeneousWeights {
    pub sites: Vec<[Scalar; 3]>,
}

impl InhomogeneousWeights {
    pub fn uniform(n: usize, w: [Scalar; 3]) -> Self {
        InhomogeneousWeights { sites: vec![w; n] }
    }
}

/// How vertex weights are assigned.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    /// `a^{n₁+n₂} b^{n₃+n₄} c^{n₅+n₆}` as a polynomial; `b`-types excluded in
    /// the 4-vertex model.
    Homogeneous(VertexModel),
    /// Numeric per-site weights; the 4-vertex model forces `w_b = 0`.
    Inhomogeneous(VertexModel, InhomogeneousWeights),
}

impl WeightSpec {
    pub fn model(&self) -> VertexModel {
        match self {
            WeightSpec::Homogeneous(m) | WeightSpec::Inhomogeneous(m, _) => *m,
        }
    }
}

fn class_index(class: WeightClass) -> usize {
    match class {
        WeightClass::A => 0,
        WeightClass::B => 1,
        WeightClass::C => 2,
    }
}

/// `a^{n₁+n₂} b^{n₃+n₄} c^{n₅+n₆}`, zero in the 4-vertex model if any b-type
/// vertex is present.
pub fn weight(config: &LatticeConfig, model: VertexModel) -> WeightPoly {
    let allowed = model.allowed();
    let mut e = [0u32; 3];
    for &t in &config.types {
        if !allowed.contains(&t) {
            return WeightPoly::zero();
        }
        e[class_index(weight_class(t).expect("type from table"))] += 1;
    }
    WeightPoly::monomial(e)
}

/// `∏_sites w_a^{l^a} w_b^{l^b} w_c^{l^c}` with per-site weights.
pub fn weight_inhomogeneous(config: &LatticeConfig, model: VertexModel, weights: &InhomogeneousWeights) -> Result<Scalar> {
    if weights.sites.len() != config.types.len() {
        return Err(QismError::ShapeMismatch(format!(
            "{} site weights for {} vertices",
            weights.sites.len(),
            config.types.len()
        )));
    }
    let allowed = model.allowed();
    let mut total = Scalar::one();
    for (t, w) in config.types.iter().zip(&weights.sites) {
        if !allowed.contains(t) {
            return Ok(Scalar::zero());
        }
        total = &total * &w[class_index(weight_class(*t).expect("type from table"))];
    }
    Ok(total)
}

/// Site weight for vertex type `t` at row-major index `k`.
type SiteWeightFn<'a, W> = &'a dyn Fn(usize, u8) -> W;

/// `Σ_configs ∏_sites w(site, type)` by enumeration.
pub fn partition_enum_with<W: Weight>(lattice: &Lattice, allowed: &BTreeSet<u8>, w: SiteWeightFn<W>) -> Result<W> {
    let mut z = W::zero();
    for cfg in enumerate(lattice, allowed)? {
        let term = cfg.types.iter().enumerate().fold(W::one(), |acc, (k, &t)| acc.w_mul(&w(k, t)));
        z = z.w_add(&term);
    }
    Ok(z)
}

fn homogeneous_weight(t: u8) -> WeightPoly {
    WeightPoly::var(weight_class(t).expect("type from table"))
}

/// Exact partition polynomial by enumeration.
pub fn partition_enum(lattice: &Lattice, model: VertexModel) -> Result<WeightPoly> {
    partition_enum_with(lattice, &model.allowed(), &|_, t| homogeneous_weight(t))
}

pub fn partition_enum_inhomogeneous(lattice: &Lattice, model: VertexModel, weights: &InhomogeneousWeights) -> Result<Scalar> {
    check_site_weights(lattice, weights)?;
    partition_enum_with(lattice, &model.allowed(), &|k, t| inhomogeneous_site(weights, k, t))
}

fn check_site_weights(lattice: &Lattice, weights: &InhomogeneousWeights) -> Result<()> {
    let n = lattice.rows * lattice.cols;
    if weights.sites.len() != n {
        return Err(QismError::ShapeMismatch(format!("{} site weights for {n} vertices", weights.sites.len())));
    }
    Ok(())
}

fn inhomogeneous_site(weights: &InhomogeneousWeights, k: usize, t: u8) -> Scalar {
    weights.sites[k][class_index(weight_class(t).expect("type from table"))].clone()
}

/// Correspondence between L-operator indices and arrows: auxiliary index 0
/// is the horizontal arrow `aux0`, quantum index 0 the vertical arrow `q0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationMap {
    pub aux0: HArrow,
    pub q0: VArrow,
}

/// Auxiliary `0 ↔ ←` and quantum `|⇓⟩ ↔ ↓`; selected by
/// [`derive_weight_dictionary`].
pub const ADOPTED_ORIENTATION: OrientationMap = OrientationMap { aux0: HArrow::West, q0: VArrow::South };

impl OrientationMap {
    pub fn all() -> [OrientationMap; 4] {
        [
            OrientationMap { aux0: HArrow::West, q0: VArrow::South },
            OrientationMap { aux0: HArrow::West, q0: VArrow::North },
            OrientationMap { aux0: HArrow::East, q0: VArrow::South },
            OrientationMap { aux0: HArrow::East, q0: VArrow::North },
        ]
    }

    pub fn h(self, i: usize) -> HArrow {
        match (i, self.aux0) {
            (0, a) => a,
            (_, HArrow::East) => HArrow::West,
            (_, HArrow::West) => HArrow::East,
        }
    }

    pub fn q(self, i: usize) -> VArrow {
        match (i, self.q0) {
            (0, a) => a,
            (_, VArrow::North) => VArrow::South,
            (_, VArrow::South) => VArrow::North,
        }
    }

    pub fn h_index(self, a: HArrow) -> usize {
        (a != self.aux0) as usize
    }

    pub fn q_index(self, a: VArrow) -> usize {
        (a != self.q0) as usize
    }

    /// Vertex type of the L entry `(i, j)` at matrix element `⟨q_out| · |q_in⟩`.
    pub fn vertex_of(self, i: usize, j: usize, q_out: usize, q_in: usize) -> Option<u8> {
        classify_vertex(self.h(i), self.h(j), self.q(q_in), self.q(q_out))
    }
}

/// `Z` as a product of row transfer operators. Each row applies
/// `⟨h_right| T_row |h_left⟩` to the vector of vertical-edge states, where
/// `T_row` is the product over columns of a weighted vertex operator whose
/// `(i, j)` auxiliary cell has `⟨q_out| L_ij |q_in⟩` equal to the weight of
/// the vertex with those arrows (zero for types outside `allowed`).
pub fn partition_transfer_with<W: Weight>(
    lattice: &Lattice,
    allowed: &BTreeSet<u8>,
    map: OrientationMap,
    w: SiteWeightFn<W>,
) -> Result<W> {
    let (rows, cols) = (lattice.rows, lattice.cols);
    check_size(rows, cols)?;
    if cols > MAX_TRANSFER_COLS {
        return Err(QismError::DenseCapExceeded { rows: 1 << cols, cap: 1 << MAX_TRANSFER_COLS });
    }
    let mut state: BTreeMap<u32, W> = BTreeMap::new();
    let bottom: u32 = (0..cols).map(|c| (map.q_index(lattice.bottom_arrow(c)) as u32) << c).sum();
    state.insert(bottom, W::one());
    for r in 0..rows {
        let a = map.h_index(lattice.left_arrow(r));
        let b = map.h_index(lattice.right_arrow(r));
        let mut sweep: BTreeMap<(u32, usize), W> = state.into_iter().map(|(s, x)| ((s, a), x)).collect();
        for c in 0..cols {
            let mut next: BTreeMap<(u32, usize), W> = BTreeMap::new();
            for ((bits, i), x) in sweep {
                let q_in = ((bits >> c) & 1) as usize;
                for j in 0..2 {
                    for q_out in 0..2 {
                        let Some(t) = map.vertex_of(i, j, q_out, q_in) else { continue };
                        if !allowed.contains(&t) {
                            continue;
                        }
                        let wt = w(r * cols + c, t);
                        if wt.is_zero() {
                            continue;
                        }
                        let nb = (bits & !(1 << c)) | ((q_out as u32) << c);
                        let val = x.w_mul(&wt);
                        let slot = next.entry((nb, j)).or_insert_with(W::zero);
                        *slot = slot.w_add(&val);
                    }
                }
            }
            sweep = next;
        }
        state = sweep.into_iter().filter(|((_, j), _)| *j == b).map(|((s, _), x)| (s, x)).collect();
    }
    let top: u32 = (0..cols).map(|c| (map.q_index(lattice.top_arrow(c)) as u32) << c).sum();
    Ok(state.remove(&top).unwrap_or_else(W::zero))
}

pub fn partition_transfer(lattice: &Lattice, model: VertexModel) -> Result<WeightPoly> {
    partition_transfer_with(lattice, &model.allowed(), ADOPTED_ORIENTATION, &|_, t| homogeneous_weight(t))
}

pub fn partition_transfer_inhomogeneous(lattice: &Lattice, model: VertexModel, weights: &InhomogeneousWeights) -> Result<Scalar> {
    check_site_weights(lattice, weights)?;
    partition_transfer_with(lattice, &model.allowed(), ADOPTED_ORIENTATION, &|k, t| inhomogeneous_site(weights, k, t))
}

/// Exact probability `w(ω)/Z` as a ratio of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Probability {
    pub num: WeightPoly,
    pub den: WeightPoly,
}

impl Probability {
    /// Value at numeric weights.
    pub fn evaluate(&self, a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Scalar> {
        self.num.evaluate(a, b, c)?.div(&self.den.evaluate(a, b, c)?)
    }
}

pub fn probability(config: &LatticeConfig, lattice: &Lattice, model: VertexModel) -> Result<Probability> {
    let z = partition_enum(lattice, model)?;
    if z.is_zero() {
        return Err(QismError::EmptyConfigurationSpace);
    }
    Ok(Probability { num: weight(config, model), den: z })
}

/// All configurations with their probabilities; the numerators sum to the
/// common denominator.
pub fn probability_table(lattice: &Lattice, model: VertexModel) -> Result<Vec<(LatticeConfig, Probability)>> {
    let configs: Vec<LatticeConfig> = enumerate(lattice, &model.allowed())?.collect();
    let z = configs.iter().fold(WeightPoly::zero(), |acc, c| acc.w_add(&weight(c, model)));
    if z.is_zero() {
        return Err(QismError::EmptyConfigurationSpace);
    }
    Ok(configs
        .into_iter()
        .map(|c| {
            let num = weight(&c, model);
            (c, Probability { num, den: z.clone() })
        })
        .collect())
}

/// Outcome of matching the 4-vertex L-operator against enumeration for one
/// orientation map.
#[derive(Clone, Debug, PartialEq)]
pub struct DictionaryCandidate {
    pub map: OrientationMap,
    /// Vertex type ↦ L-entry coefficient; `None` if some entry of the
    /// L-operator violates the ice rule under this map.
    pub dictionary: Option<BTreeMap<u8, Laurent>>,
    pub lattices_checked: usize,
    pub mismatches: usize,
}

impl DictionaryCandidate {
    pub fn passes(&self) -> bool {
        self.dictionary.is_some() && self.mismatches == 0
    }
}

fn all_rings(len: usize) -> impl Iterator<Item = Vec<Io>> {
    (0u32..1 << len).map(move |m| (0..len).map(|k| if m >> k & 1 == 1 { Io::In } else { Io::Out }).collect())
}

/// `Z` computed from the symbolic L-operator: per row, the matrix element of
/// the monodromy cell `(left, right)` between vertical states, chained over
/// rows.
pub fn partition_from_l_operator(lattice: &Lattice, convention: Convention, map: OrientationMap) -> Result<Laurent> {
    let (rows, cols) = (lattice.rows, lattice.cols);
    let t = monodromy_symbolic(convention, cols, SiteOrder::Ascending)?;
    let bits_to_state = |bits: u32| -> Vec<usize> { (0..cols).map(|c| ((bits >> c) & 1) as usize).collect() };
    let bottom: u32 = (0..cols).map(|c| (map.q_index(lattice.bottom_arrow(c)) as u32) << c).sum();
    let top: u32 = (0..cols).map(|c| (map.q_index(lattice.top_arrow(c)) as u32) << c).sum();
    let mut state: BTreeMap<u32, Laurent> = BTreeMap::from([(bottom, Laurent::one())]);
    for r in 0..rows {
        let cell = t.entry(map.h_index(lattice.left_arrow(r)), map.h_index(lattice.right_arrow(r)));
        let mut next: BTreeMap<u32, Laurent> = BTreeMap::new();
        for (bits, x) in &state {
            for out in 0u32..1 << cols {
                let m = cell.matrix_element(&bits_to_state(out), &bits_to_state(*bits));
                if m.is_zero() {
                    continue;
                }
                let slot = next.entry(out).or_insert_with(Laurent::zero);
                *slot = slot.add(&x.mul(&m));
            }
        }
        state = next;
    }
    Ok(state.remove(&top).unwrap_or_else(Laurent::zero))
}

/// For every orientation map, read off the vertex dictionary of the
/// 4-vertex L-operator and check `Z` from the L-operator against enumeration
/// with dictionary weights on all boundaries of the 1×1, 1×2 and 2×1 lattices.
pub fn derive_weight_dictionary(convention: Convention) -> Result<Vec<DictionaryCandidate>> {
    let l = models::l4v(0, convention, 1)?;
    let mut out = Vec::new();
    for map in OrientationMap::all() {
        let mut dict: Option<BTreeMap<u8, Laurent>> = Some(BTreeMap::new());
        for i in 0..2 {
            for j in 0..2 {
                for (word, coeff) in l.entry(i, j).terms() {
                    let unit = word.get(0).expect("single-site letter");
                    match (map.vertex_of(i, j, unit.row as usize, unit.col as usize), dict.as_mut()) {
                        (Some(t), Some(d)) => {
                            d.insert(t, coeff.clone());
                        }
                        _ => dict = None,
                    }
                }
            }
        }
        let (mut checked, mut mismatches) = (0, 0);
        if let Some(d) = &dict {
            let allowed: BTreeSet<u8> = d.keys().copied().collect();
            for (rows, cols) in [(1, 1), (1, 2), (2, 1)] {
                for ring in all_rings(2 * (rows + cols)) {
                    let lat = Lattice::new(rows, cols, &ring)?;
                    let z_enum = partition_enum_with(&lat, &allowed, &|_, t| d[&t].clone())?;
                    let z_l = partition_from_l_operator(&lat, convention, map)?;
                    checked += 1;
                    if z_enum != z_l {
                        mismatches += 1;
                    }
                }
            }
        }
        out.push(DictionaryCandidate { map, dictionary: dict, lattices_checked: checked, mismatches });
    }
    Ok(out)
}
