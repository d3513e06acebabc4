//! Model definitions: the 4-vertex, 6-vertex and higher-spin XXX L-operators,
//! the 6-vertex R-matrix, spin representations, vertex weights and the
//! generator map φ from 4-vertex to XXX generators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::dense::FloatMatrix;
use crate::error::{QismError, Result};
use crate::laurent::{Laurent, Spectral};
use crate::monodromy::AuxMonodromy;
use crate::operator::{ChainOperator, LocalOperator};
use crate::scalar::{gq, Scalar};
use crate::words::{Unit, WordSum};

/// Which projector `e` denotes in the 4-vertex L-operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Convention {
    /// `e = |⇑⟩⟨⇑| = E22 = σ⁺σ⁻`.
    C1,
    /// `e = |⇓⟩⟨⇓| = E11 = σ⁻σ⁺`.
    C2,
}

/// Convention used everywhere unless a caller asks for the other one.
/// [`crate::monodromy::select_convention`] reproduces the choice.
pub const ADOPTED_CONVENTION: Convention = Convention::C1;

impl Convention {
    pub fn projector(self) -> Unit {
        match self {
            Convention::C1 => Unit::PROJ_UP,
            Convention::C2 => Unit::PROJ_DOWN,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::C1 => "C1",
            Convention::C2 => "C2",
        }
    }

    pub fn all() -> [Convention; 2] {
        [Convention::C1, Convention::C2]
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = QismError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C1" => Ok(Convention::C1),
            "C2" => Ok(Convention::C2),
            _ => Err(QismError::InvalidParameter(format!("unknown convention `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourVertexParams {
    pub u: Scalar,
    pub a: Scalar,
    pub c: Scalar,
    pub convention: Convention,
}

impl FourVertexParams {
    pub fn new(u: Scalar) -> Self {
        FourVertexParams { u, a: Scalar::one(), c: Scalar::one(), convention: ADOPTED_CONVENTION }
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SixVertexParams {
    pub lambda: Complex64,
    /// Inhomogeneities, one per site.
    pub v: Vec<Complex64>,
    pub eta: Complex64,
    pub h: f64,
    pub v_field: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl SixVertexParams {
    /// Trigonometric point: `a = sin(λ+η)`, `b = sin λ`, `c = sin η`, no fields.
    pub fn trig(lambda: Complex64, eta: Complex64) -> Self {
        let (a, b, c) = trig_weights(lambda, eta);
        SixVertexParams { lambda, v: Vec::new(), eta, h: 0.0, v_field: 0.0, a, b, c }
    }

    pub fn inhomogeneity(&self, k: usize) -> Complex64 {
        self.v.get(k).copied().unwrap_or_default()
    }
}

pub fn trig_weights(lambda: Complex64, eta: Complex64) -> (Complex64, Complex64, Complex64) {
    ((lambda + eta).sin(), lambda.sin(), eta.sin())
}

#[derive(Clone, Debug, PartialEq)]
pub struct XXXParams {
    pub lambda: Scalar,
    /// Twice the spin.
    pub two_s: u32,
}

impl XXXParams {
    pub fn new(lambda: Scalar, two_s: u32) -> Self {
        XXXParams { lambda, two_s }
    }

    pub fn local_dim(&self) -> usize {
        self.two_s as usize + 1
    }
}

/// `(S³, S⁺, S⁻)` for one spin.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinMatrices {
    pub s3: LocalOperator,
    pub splus: LocalOperator,
    pub sminus: LocalOperator,
}

fn check_two_s(two_s: u32) -> Result<()> {
    if two_s == 0 {
        return Err(QismError::InvalidSpin(format!("{two_s}/2")));
    }
    Ok(())
}

/// Spin-`s` matrices with `2s = two_s`, in the integral basis
/// `S⁺|m⟩ = |m+1⟩`, `S⁻|m+1⟩ = (s−m)(s+m+1)|m⟩`. Index 0 is `m = −s`.
///
/// All entries are integers, so the su(2) relations hold exactly. The basis
/// differs from the unitary one by a diagonal rescaling; for `s = 1/2` the
/// two coincide and `S± = σ±`.
pub fn spin_matrices(two_s: u32) -> Result<SpinMatrices> {
    check_two_s(two_s)?;
    let d = two_s as usize + 1;
    let s3 = LocalOperator::diagonal((0..d).map(|k| Scalar::ratio(2 * k as i64 - two_s as i64, 2)).collect());
    let mut splus = vec![Scalar::zero(); d * d];
    let mut sminus = vec![Scalar::zero(); d * d];
    for k in 0..d - 1 {
        splus[(k + 1) * d + k] = Scalar::one();
        sminus[k * d + k + 1] = Scalar::int(((two_s as usize - k) * (k + 1)) as i64);
    }
    Ok(SpinMatrices { s3, splus: LocalOperator::new(d, splus)?, sminus: LocalOperator::new(d, sminus)? })
}

/// The unitary standard representation, `S±` Hermitian conjugates of each
/// other. Entries involve square roots, so the result is in float mode.
pub fn spin_matrices_unitary(two_s: u32) -> Result<SpinMatrices> {
    check_two_s(two_s)?;
    let d = two_s as usize + 1;
    let s3 = LocalOperator::diagonal((0..d).map(|k| Scalar::ratio(2 * k as i64 - two_s as i64, 2)).collect());
    let mut splus = vec![Scalar::zero(); d * d];
    let mut sminus = vec![Scalar::zero(); d * d];
    for k in 0..d - 1 {
        let w = (((two_s as usize - k) * (k + 1)) as f64).sqrt();
        splus[(k + 1) * d + k] = Scalar::float(w, 0.0);
        sminus[k * d + k + 1] = Scalar::float(w, 0.0);
    }
    Ok(SpinMatrices { s3, splus: LocalOperator::new(d, splus)?, sminus: LocalOperator::new(d, sminus)? })
}

fn check_site(site: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(QismError::InvalidChainLength);
    }
    if site >= n {
        return Err(QismError::SiteOutOfRange { site, chain_len: n });
    }
    Ok(())
}

/// Symbolic 4-vertex L-operator `[[−u e, σ⁻],[σ⁺, u⁻¹ e]]` at `site`.
pub fn l4v(site: usize, convention: Convention, n: usize) -> Result<AuxMonodromy<WordSum>> {
    check_site(site, n)?;
    let e = convention.projector();
    let u = Laurent::var(Spectral::U);
    let u_inv = Laurent::monomial(gq(1, 0), Spectral::U, -1);
    Ok(AuxMonodromy::new([
        [WordSum::letter(u.neg(), site, e, n)?, WordSum::letter(Laurent::one(), site, Unit::SIGMA_MINUS, n)?],
        [WordSum::letter(Laurent::one(), site, Unit::SIGMA_PLUS, n)?, WordSum::letter(u_inv, site, e, n)?],
    ]))
}

/// The same L-operator built directly from local matrices at a numeric `u`.
pub fn l4v_numeric(site: usize, params: &FourVertexParams, n: usize) -> Result<AuxMonodromy<ChainOperator>> {
    check_site(site, n)?;
    if params.u.is_zero() {
        return Err(QismError::InvalidParameter("u must be nonzero".into()));
    }
    let e = params.convention.projector().to_local(2);
    Ok(AuxMonodromy::new([
        [
            ChainOperator::embed_scaled(-params.u.clone(), &e, site, n)?,
            ChainOperator::embed(&LocalOperator::sigma_minus(), site, n)?,
        ],
        [
            ChainOperator::embed(&LocalOperator::sigma_plus(), site, n)?,
            ChainOperator::embed_scaled(params.u.inv()?, &e, site, n)?,
        ],
    ]))
}

fn c64(z: Complex64) -> Scalar {
    Scalar::Float(z)
}

/// 6-vertex L-operator at site `k`, with `sin(x ± ησᶻ)` evaluated on the
/// σᶻ eigenbasis: `σᶻ = diag(−1, 1)`.
pub fn l6v(k: usize, params: &SixVertexParams, n: usize) -> Result<AuxMonodromy<ChainOperator>> {
    check_site(k, n)?;
    let x = params.lambda - params.inhomogeneity(k);
    let eta = params.eta;
    let plus = LocalOperator::diagonal(vec![c64((x - eta).sin()), c64((x + eta).sin())]);
    let minus = LocalOperator::diagonal(vec![c64((x + eta).sin()), c64((x - eta).sin())]);
    let s2 = c64((eta * 2.0).sin());
    Ok(AuxMonodromy::new([
        [ChainOperator::embed(&plus, k, n)?, ChainOperator::embed_scaled(s2.clone(), &LocalOperator::sigma_minus(), k, n)?],
        [ChainOperator::embed_scaled(s2, &LocalOperator::sigma_plus(), k, n)?, ChainOperator::embed(&minus, k, n)?],
    ]))
}

/// The 6-vertex R-matrix on `C² ⊗ C²`, basis order `⇓⇓, ⇓⇑, ⇑⇓, ⇑⇑`.
pub fn r6v(params: &SixVertexParams) -> FloatMatrix {
    r6v_weights(params.a, params.b, params.c, params.h, params.v_field)
}

pub fn r6v_weights(a: Complex64, b: Complex64, c: Complex64, h: f64, v: f64) -> FloatMatrix {
    let e = |x: f64| Complex64::new(x.exp(), 0.0);
    let z = Complex64::new(0.0, 0.0);
    FloatMatrix::from_rows(vec![
        vec![a * e(h + v), z, z, z],
        vec![z, b * e(h - v), c, z],
        vec![z, c, b * e(-h + v), z],
        vec![z, z, z, a * e(-h - v)],
    ])
    .expect("4x4 rows")
}

/// Trigonometric R at spectral difference `x` and crossing parameter `eta`.
pub fn r6v_trig(x: Complex64, eta: Complex64) -> FloatMatrix {
    let (a, b, c) = trig_weights(x, eta);
    r6v_weights(a, b, c, 0.0, 0.0)
}

/// XXX L-operator `[[λ + iS³, iS⁻],[iS⁺, λ − iS³]]` at `site`.
pub fn lxxx(site: usize, params: &XXXParams, n: usize) -> Result<AuxMonodromy<ChainOperator>> {
    check_site(site, n)?;
    let gens = [XXXGenerator::A, XXXGenerator::B, XXXGenerator::C, XXXGenerator::D]
        .map(|g| phi_map_generator(g, params, site, n));
    let [a, b, c, d] = gens;
    Ok(AuxMonodromy::new([[a?, b?], [c?, d?]]))
}

/// 4-vertex generators, the domain of φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XXXGenerator {
    A,
    B,
    C,
    D,
}

impl FromStr for XXXGenerator {
    type Err = QismError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim_end_matches("4V").trim_end_matches("4v") {
            "A" => Ok(XXXGenerator::A),
            "B" => Ok(XXXGenerator::B),
            "C" => Ok(XXXGenerator::C),
            "D" => Ok(XXXGenerator::D),
            _ => Err(QismError::InvalidParameter(format!("unknown generator `{s}`"))),
        }
    }
}

fn phi_map_generator(g: XXXGenerator, params: &XXXParams, site: usize, n: usize) -> Result<ChainOperator> {
    check_site(site, n)?;
    let spin = spin_matrices(params.two_s)?;
    let d = params.local_dim();
    let i = Scalar::gauss(0, 1);
    let lam = ChainOperator::scalar(params.lambda.clone(), n, d);
    match g {
        XXXGenerator::A => lam.add(&ChainOperator::embed_scaled(i, &spin.s3, site, n)?),
        XXXGenerator::B => ChainOperator::embed_scaled(i, &spin.sminus, site, n),
        XXXGenerator::C => ChainOperator::embed_scaled(i, &spin.splus, site, n),
        XXXGenerator::D => lam.add(&ChainOperator::embed_scaled(-i, &spin.s3, site, n)?),
    }
}

/// Image of a 4-vertex generator under φ: `A ↦ λ + iS³`, `B ↦ iS⁻`,
/// `C ↦ iS⁺`, `D ↦ λ − iS³`.
pub fn phi_map(g: XXXGenerator, params: &XXXParams, site: usize, n: usize) -> Result<ChainOperator> {
    phi_map_generator(g, params, site, n)
}

/// Arrow on a horizontal edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HArrow {
    East,
    West,
}

/// Arrow on a vertical edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VArrow {
    North,
    South,
}

/// Weight class of a vertex type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeightClass {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexType {
    pub id: u8,
    pub left: HArrow,
    pub right: HArrow,
    pub bottom: VArrow,
    pub top: VArrow,
    pub class: WeightClass,
}

const VERTEX_TABLE_SRC: &str = include_str!("../data/vertex_types.txt");

fn parse_vertex_table(src: &str) -> Result<Vec<VertexType>> {
    let mut out = Vec::new();
    for (idx, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| QismError::parse(idx + 1, m.to_string());
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(err("expected 6 columns"));
        }
        let h = |s: &str| match s {
            ">" => Ok(HArrow::East),
            "<" => Ok(HArrow::West),
            _ => Err(err("horizontal arrow must be > or <")),
        };
        let v = |s: &str| match s {
            "^" => Ok(VArrow::North),
            "v" => Ok(VArrow::South),
            _ => Err(err("vertical arrow must be ^ or v")),
        };
        let class = match f[5] {
            "a" => WeightClass::A,
            "b" => WeightClass::B,
            "c" => WeightClass::C,
            _ => return Err(err("weight must be a, b or c")),
        };
        out.push(VertexType {
            id: f[0].parse().map_err(|_| err("bad type id"))?,
            left: h(f[1])?,
            right: h(f[2])?,
            bottom: v(f[3])?,
            top: v(f[4])?,
            class,
        });
    }
    Ok(out)
}

/// The six vertex types, read from the shipped arrow table.
pub fn vertex_types() -> &'static [VertexType] {
    static TABLE: OnceLock<Vec<VertexType>> = OnceLock::new();
    TABLE.get_or_init(|| parse_vertex_table(VERTEX_TABLE_SRC).expect("shipped vertex table parses"))
}

/// Type id for the given edge arrows, if it satisfies the ice rule.
pub fn classify_vertex(left: HArrow, right: HArrow, bottom: VArrow, top: VArrow) -> Option<u8> {
    vertex_types()
        .iter()
        .find(|t| t.left == left && t.right == right && t.bottom == bottom && t.top == top)
        .map(|t| t.id)
}

pub fn weight_class(id: u8) -> Option<WeightClass> {
    vertex_types().iter().find(|t| t.id == id).map(|t| t.class)
}

/// 4-vertex weights `{1:a, 2:a, 3:0, 4:0, 5:c, 6:c}`.
pub fn vertex_weight_table(params: &FourVertexParams) -> BTreeMap<u8, Scalar> {
    six_vertex_weight_table(&params.a, &Scalar::zero(), &params.c)
}

/// Homogeneous 6-vertex weights `{a, a, b, b, c, c}` keyed through the arrow table.
pub fn six_vertex_weight_table(a: &Scalar, b: &Scalar, c: &Scalar) -> BTreeMap<u8, Scalar> {
    vertex_types()
        .iter()
        .map(|t| {
            let w = match t.class {
                WeightClass::A => a.clone(),
                WeightClass::B => b.clone(),
                WeightClass::C => c.clone(),
            };
            (t.id, w)
        })
        .collect()
}
