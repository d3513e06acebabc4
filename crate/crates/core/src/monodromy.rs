//! Monodromy matrices as ordered products of single-site L-operators, their
//! transfer matrices, and the numeric residual checks built on them.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::dense::{FloatMatrix, DEFAULT_DENSE_CAP};
use crate::error::{QismError, Result};
use crate::fixtures::{self, Fixture};
use crate::models::{self, Convention, FourVertexParams, SixVertexParams, XXXParams};
use crate::operator::{ChainOperator, Densified};
use crate::scalar::Scalar;
use crate::words::WordSum;

/// Cell type of an auxiliary 2×2 matrix.
pub trait AuxEntry: Clone + PartialEq {
    fn aux_add(&self, other: &Self) -> Result<Self>;
    fn aux_mul(&self, other: &Self) -> Result<Self>;
}

impl AuxEntry for WordSum {
    fn aux_add(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }

    fn aux_mul(&self, other: &Self) -> Result<Self> {
        self.word_multiply(other)
    }
}

impl AuxEntry for ChainOperator {
    fn aux_add(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }

    fn aux_mul(&self, other: &Self) -> Result<Self> {
        self.multiply(other)
    }
}

/// Cell labels in row-major order.
pub const LABELS: [char; 4] = ['A', 'B', 'C', 'D'];

/// A 2×2 auxiliary matrix with operator cells `[[A, B], [C, D]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxMonodromy<T> {
    cells: [[T; 2]; 2],
}

impl<T: AuxEntry> AuxMonodromy<T> {
    pub fn new(cells: [[T; 2]; 2]) -> Self {
        AuxMonodromy { cells }
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.cells[i][j]
    }

    /// Cell by label `A`, `B`, `C` or `D`.
    pub fn label(&self, l: char) -> Option<&T> {
        let k = LABELS.iter().position(|&x| x == l.to_ascii_uppercase())?;
        Some(&self.cells[k / 2][k % 2])
    }

    pub fn a(&self) -> &T {
        &self.cells[0][0]
    }

    pub fn b(&self) -> &T {
        &self.cells[0][1]
    }

    pub fn c(&self) -> &T {
        &self.cells[1][0]
    }

    pub fn d(&self) -> &T {
        &self.cells[1][1]
    }

    /// Cells `A, B, C, D`.
    pub fn cells(&self) -> [&T; 4] {
        [self.a(), self.b(), self.c(), self.d()]
    }

    /// Auxiliary block product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let cell = |i: usize, j: usize| -> Result<T> {
            self.cells[i][0].aux_mul(&other.cells[0][j])?.aux_add(&self.cells[i][1].aux_mul(&other.cells[1][j])?)
        };
        Ok(AuxMonodromy::new([[cell(0, 0)?, cell(0, 1)?], [cell(1, 0)?, cell(1, 1)?]]))
    }

    /// `A + D`.
    pub fn transfer(&self) -> Result<T> {
        self.a().aux_add(self.d())
    }
}

impl AuxMonodromy<WordSum> {
    pub fn evaluate(&self, assignment: &crate::laurent::SpectralAssignment) -> Result<AuxMonodromy<ChainOperator>> {
        let e = |i: usize, j: usize| self.cells[i][j].evaluate(assignment);
        Ok(AuxMonodromy::new([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]]))
    }
}

/// Order in which site L-operators are multiplied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteOrder {
    /// `L(0) L(1) … L(N−1)`.
    #[default]
    Ascending,
    Descending,
}

impl std::str::FromStr for SiteOrder {
    type Err = QismError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascending" | "asc" => Ok(SiteOrder::Ascending),
            "descending" | "desc" => Ok(SiteOrder::Descending),
            _ => Err(QismError::InvalidParameter(format!("unknown site order `{s}`"))),
        }
    }
}

fn ordered_product<T: AuxEntry>(
    n: usize,
    order: SiteOrder,
    site_l: impl Fn(usize) -> Result<AuxMonodromy<T>>,
) -> Result<AuxMonodromy<T>> {
    if n == 0 {
        return Err(QismError::InvalidChainLength);
    }
    let sites: Vec<usize> = match order {
        SiteOrder::Ascending => (0..n).collect(),
        SiteOrder::Descending => (0..n).rev().collect(),
    };
    let mut acc = site_l(sites[0])?;
    for &s in &sites[1..] {
        acc = acc.mul(&site_l(s)?)?;
    }
    Ok(acc)
}

/// Parameters of one of the three supported models.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelParams {
    FourVertex(FourVertexParams),
    SixVertex(SixVertexParams),
    XXX(XXXParams),
}

impl ModelParams {
    pub fn name(&self) -> &'static str {
        match self {
            ModelParams::FourVertex(_) => "4v",
            ModelParams::SixVertex(_) => "6v",
            ModelParams::XXX(_) => "xxx",
        }
    }

    /// Same model with the spectral parameter (`u`, `λ_α` or `λ`) replaced.
    pub fn with_spectral(&self, x: &Scalar) -> ModelParams {
        match self {
            ModelParams::FourVertex(p) => ModelParams::FourVertex(FourVertexParams { u: x.clone(), ..p.clone() }),
            ModelParams::SixVertex(p) => ModelParams::SixVertex(SixVertexParams { lambda: x.to_c64(), ..p.clone() }),
            ModelParams::XXX(p) => ModelParams::XXX(XXXParams { lambda: x.clone(), ..p.clone() }),
        }
    }
}

/// Symbolic 4-vertex monodromy with Laurent coefficients in `u`.
pub fn monodromy_symbolic(convention: Convention, n: usize, order: SiteOrder) -> Result<AuxMonodromy<WordSum>> {
    ordered_product(n, order, |s| models::l4v(s, convention, n))
}

/// Symbolic monodromy for a model; only the 4-vertex model has one.
pub fn monodromy_symbolic_for(params: &ModelParams, n: usize, order: SiteOrder) -> Result<AuxMonodromy<WordSum>> {
    match params {
        ModelParams::FourVertex(p) => monodromy_symbolic(p.convention, n, order),
        ModelParams::SixVertex(_) => Err(QismError::SymbolicUnsupported("the 6-vertex model".into())),
        ModelParams::XXX(_) => Err(QismError::SymbolicUnsupported("the XXX chain".into())),
    }
}

/// Numeric monodromy over chain operators.
pub fn monodromy(params: &ModelParams, n: usize, order: SiteOrder) -> Result<AuxMonodromy<ChainOperator>> {
    match params {
        ModelParams::FourVertex(p) => ordered_product(n, order, |s| models::l4v_numeric(s, p, n)),
        ModelParams::SixVertex(p) => ordered_product(n, order, |s| models::l6v(s, p, n)),
        ModelParams::XXX(p) => ordered_product(n, order, |s| models::lxxx(s, p, n)),
    }
}

pub fn transfer(params: &ModelParams, n: usize, order: SiteOrder) -> Result<ChainOperator> {
    monodromy(params, n, order)?.transfer()
}

fn dense_product(x: &Densified, y: &Densified) -> Result<Densified> {
    Ok(match (x, y) {
        (Densified::Exact(a), Densified::Exact(b)) => Densified::Exact(a.matmul(b)?),
        _ => Densified::Float(x.to_float().matmul(&y.to_float())?),
    })
}

fn dense_diff_norm(x: &Densified, y: &Densified) -> Result<f64> {
    Ok(match (x, y) {
        (Densified::Exact(a), Densified::Exact(b)) => {
            let d = a.sub(b)?;
            if d.is_zero() { 0.0 } else { d.frobenius_norm() }
        }
        _ => x.to_float().sub(&y.to_float())?.frobenius_norm(),
    })
}

/// `‖xy − yx‖_F` on dense realizations; exactly 0 when exact inputs commute.
pub fn dense_commutator_norm(x: &ChainOperator, y: &ChainOperator, cap: usize) -> Result<f64> {
    let dx = x.densify_capped(cap)?;
    let dy = y.densify_capped(cap)?;
    dense_diff_norm(&dense_product(&dx, &dy)?, &dense_product(&dy, &dx)?)
}

/// `‖[t(u), t(u′)]‖_F` for the model at two spectral values.
pub fn commutation_residual(params: &ModelParams, u: &Scalar, u_prime: &Scalar, n: usize, order: SiteOrder, cap: usize) -> Result<f64> {
    let t1 = transfer(&params.with_spectral(u), n, order)?;
    let t2 = transfer(&params.with_spectral(u_prime), n, order)?;
    dense_commutator_norm(&t1, &t2, cap)
}

fn unit_matrix(dim: usize, i: usize, j: usize) -> FloatMatrix {
    let mut m = FloatMatrix::zeros(dim, dim);
    m.set(i, j, Complex64::new(1.0, 0.0));
    m
}

/// `Σ E_ij ⊗ I₂ ⊗ L_ij` (slot 1) or `Σ I₂ ⊗ E_ij ⊗ L_ij` (slot 2).
fn aux_embed(l: &AuxMonodromy<ChainOperator>, slot: usize) -> Result<FloatMatrix> {
    let q = l.a().dim();
    let mut out = FloatMatrix::zeros(4 * q, 4 * q);
    let id2 = FloatMatrix::identity(2);
    for i in 0..2 {
        for j in 0..2 {
            let cell = l.entry(i, j).densify_float()?;
            let aux = if slot == 1 { unit_matrix(2, i, j).kron(&id2) } else { id2.kron(&unit_matrix(2, i, j)) };
            out = out.add(&aux.kron(&cell))?;
        }
    }
    Ok(out)
}

/// `‖R (L(u) ⊗ L(u′)) − (L(u′) ⊗ L(u)) R‖_F`, where `⊗` is the tensor product
/// of auxiliary spaces with operator cells multiplied in order:
/// `(L(u) ⊗ L(u′))_{(ik),(jl)} = L_ij(u) L_kl(u′)`. In this form a standard
/// R-matrix enters as its check version `P·R` (see [`check_r`]).
pub fn rll_residual(r: &FloatMatrix, lu: &AuxMonodromy<ChainOperator>, lv: &AuxMonodromy<ChainOperator>) -> Result<f64> {
    if r.rows() != 4 || r.cols() != 4 {
        return Err(QismError::ShapeMismatch(format!("R must be 4x4, got {}x{}", r.rows(), r.cols())));
    }
    let q = lu.a().dim();
    if lv.a().dim() != q {
        return Err(QismError::DimensionMismatch { expected: q, found: lv.a().dim() });
    }
    let rq = r.kron(&FloatMatrix::identity(q));
    let lhs = rq.matmul(&aux_embed(lu, 1)?.matmul(&aux_embed(lv, 2)?)?)?;
    let rhs = aux_embed(lv, 1)?.matmul(&aux_embed(lu, 2)?)?.matmul(&rq)?;
    Ok(lhs.sub(&rhs)?.frobenius_norm())
}

/// Permutation of the two auxiliary factors.
pub fn aux_swap() -> FloatMatrix {
    let mut p = FloatMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            p.set(a * 2 + b, b * 2 + a, Complex64::new(1.0, 0.0));
        }
    }
    p
}

/// `P·R`.
pub fn check_r(r: &FloatMatrix) -> FloatMatrix {
    aux_swap().matmul(r).expect("4x4")
}

fn swap23() -> FloatMatrix {
    let mut p = FloatMatrix::zeros(8, 8);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                p.set(a * 4 + b * 2 + c, a * 4 + c * 2 + b, Complex64::new(1.0, 0.0));
            }
        }
    }
    p
}

/// `‖R₁₂(x−y) R₁₃(x) R₂₃(y) − R₂₃(y) R₁₃(x) R₁₂(x−y)‖_F` for the three given
/// 4×4 matrices `r_xy = R(x−y)`, `r_x = R(x)`, `r_y = R(y)`.
pub fn ybe_residual(r_xy: &FloatMatrix, r_x: &FloatMatrix, r_y: &FloatMatrix) -> Result<f64> {
    let id2 = FloatMatrix::identity(2);
    let r12 = r_xy.kron(&id2);
    let p = swap23();
    let r13 = p.matmul(&r_x.kron(&id2))?.matmul(&p)?;
    let r23 = id2.kron(r_y);
    let lhs = r12.matmul(&r13)?.matmul(&r23)?;
    let rhs = r23.matmul(&r13)?.matmul(&r12)?;
    Ok(lhs.sub(&rhs)?.frobenius_norm())
}

/// YBE residual of the trigonometric 6-vertex R at `H = V = 0`.
pub fn ybe_residual_trig(x: Complex64, y: Complex64, eta: Complex64) -> Result<f64> {
    ybe_residual(&models::r6v_trig(x - y, eta), &models::r6v_trig(x, eta), &models::r6v_trig(y, eta))
}

/// RLL residual for the 6-vertex L at spectral values `lambda`, `mu`, one
/// site with inhomogeneity `v`, against the (check) trigonometric R at `λ−μ`
/// with crossing parameter `crossing · η`.
pub fn rll_residual_6v(lambda: Complex64, mu: Complex64, eta: Complex64, v: Complex64, crossing: f64) -> Result<f64> {
    let base = SixVertexParams { v: vec![v], ..SixVertexParams::trig(lambda, eta) };
    let lu = models::l6v(0, &base, 1)?;
    let lv = models::l6v(0, &SixVertexParams { lambda: mu, ..base.clone() }, 1)?;
    rll_residual(&check_r(&models::r6v_trig(lambda - mu, eta * crossing)), &lu, &lv)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RCandidate {
    pub name: &'static str,
    /// Residual measured for `P·R` rather than `R`.
    pub check_form: bool,
    pub residual: f64,
}

/// Candidate R-matrices for the 4-vertex L at `(u, u′)`, with their RLL
/// residuals. Report only.
pub fn four_vertex_r_candidates(u: Complex64, u_prime: Complex64, convention: Convention) -> Result<Vec<RCandidate>> {
    let lu = models::l4v_numeric(0, &FourVertexParams::new(Scalar::Float(u)).with_convention(convention), 1)?;
    let lv = models::l4v_numeric(0, &FourVertexParams::new(Scalar::Float(u_prime)).with_convention(convention), 1)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let q = u_prime / u;
    let nullspace = FloatMatrix::from_rows(vec![
        vec![one, zero, zero, zero],
        vec![zero, zero, q, zero],
        vec![zero, q, one - q * q, zero],
        vec![zero, zero, zero, one],
    ])?;
    let candidates = [
        ("identity", FloatMatrix::identity(4)),
        ("permutation (b = 0)", models::r6v_weights(one, zero, one, 0.0, 0.0)),
        ("trigonometric at u - u', eta = pi/4", models::r6v_trig(u - u_prime, Complex64::new(std::f64::consts::FRAC_PI_4, 0.0))),
        ("asymmetric b = 0 degeneration", nullspace),
    ];
    let candidates = candidates.into_iter().flat_map(|(name, r)| {
        let checked = check_r(&r);
        [(name, false, r), (name, true, checked)]
    });
    candidates
        .into_iter()
        .map(|(name, checked, r)| Ok(RCandidate { name, check_form: checked, residual: rll_residual(&r, &lu, &lv)? }))
        .collect()
}

/// One row of the Yang-Baxter algebra battery.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductRow {
    /// `C1` … `C16`, row-major over `(X, Y) ∈ {A,B,C,D}²`.
    pub label: String,
    pub pair: String,
    /// `‖X(u)Y(u′)‖_F`.
    pub product_norm: f64,
    /// `‖X(u)Y(u′) − X(u′)Y(u)‖_F`: swapping the spectral parameters.
    pub commutator_norm: f64,
    /// `‖X(u)Y(u′) − Y(u′)X(u)‖_F`: swapping the operator order.
    pub exchange_norm: f64,
}

#[derive(Clone, Debug)]
pub struct ProductReport {
    pub chain_len: usize,
    pub rows: Vec<ProductRow>,
    /// Dense `X(u)Y(u′)` for each row.
    pub products: Vec<Densified>,
    /// `‖[A+D, A′+D′]‖_F`.
    pub transfer_commutator_norm: f64,
}

/// All sixteen products `X(u)Y(u′)` of monodromy cells with their norms.
pub fn yb_products(params: &FourVertexParams, u_prime: &Scalar, n: usize, order: SiteOrder) -> Result<ProductReport> {
    yb_products_capped(params, u_prime, n, order, DEFAULT_DENSE_CAP)
}

/// As [`yb_products`] with an explicit dense row cap.
pub fn yb_products_capped(params: &FourVertexParams, u_prime: &Scalar, n: usize, order: SiteOrder, cap: usize) -> Result<ProductReport> {
    let p = ModelParams::FourVertex(params.clone());
    let tu = monodromy(&p, n, order)?;
    let tv = monodromy(&p.with_spectral(u_prime), n, order)?;
    let du: Vec<Densified> = tu.cells().iter().map(|c| c.densify_capped(cap)).collect::<Result<_>>()?;
    let dv: Vec<Densified> = tv.cells().iter().map(|c| c.densify_capped(cap)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(16);
    let mut products = Vec::with_capacity(16);
    for x in 0..4 {
        for y in 0..4 {
            let xy = dense_product(&du[x], &dv[y])?;
            let swapped = dense_product(&dv[x], &du[y])?;
            let yx = dense_product(&dv[y], &du[x])?;
            rows.push(ProductRow {
                label: format!("C{}", 4 * x + y + 1),
                pair: format!("{}{}", LABELS[x], LABELS[y]),
                product_norm: xy.frobenius_norm(),
                commutator_norm: dense_diff_norm(&xy, &swapped)?,
                exchange_norm: dense_diff_norm(&xy, &yx)?,
            });
            products.push(xy);
        }
    }
    let transfer_commutator_norm = dense_commutator_norm(&tu.transfer()?, &tv.transfer()?, cap)?;
    Ok(ProductReport { chain_len: n, rows, products, transfer_commutator_norm })
}

/// Random nonzero Gaussian rational with small numerator and denominator.
pub fn random_exact(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let re = Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let im = Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let z = &re + &(&im * &Scalar::gauss(0, 1));
        if !z.is_zero() {
            return z;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionOutcome {
    pub convention: String,
    pub max_residual: f64,
    pub passes: bool,
    /// Entries of the two-site transcription whose word support equals the engine's.
    pub fixture_support_matches: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionSelection {
    pub outcomes: Vec<ConventionOutcome>,
    pub selected: String,
    pub tie_broken_by_fixture: bool,
}

/// Run the transfer-commutation check for both projector conventions; if
/// both pass, prefer the one whose two-site monodromy has the same word
/// supports as the built-in transcription (where `e` is written `σ⁺σ⁻`).
pub fn select_convention(max_n: usize, samples: usize, seed: u64, tol: f64) -> Result<ConventionSelection> {
    let mut outcomes = Vec::new();
    for conv in Convention::all() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_residual: f64 = 0.0;
        for n in 1..=max_n {
            for _ in 0..samples {
                let (u, v) = (random_exact(&mut rng), random_exact(&mut rng));
                let p = ModelParams::FourVertex(FourVertexParams::new(u.clone()).with_convention(conv));
                max_residual = max_residual.max(commutation_residual(&p, &u, &v, n, SiteOrder::Ascending, DEFAULT_DENSE_CAP)?);
            }
        }
        let report = fixtures::diff_builtin(Fixture::TwoSite, conv)?;
        outcomes.push(ConventionOutcome {
            convention: conv.name().into(),
            max_residual,
            passes: max_residual <= tol,
            fixture_support_matches: report.entries.iter().filter(|e| e.support_match).count(),
        });
    }
    let passing: Vec<&ConventionOutcome> = outcomes.iter().filter(|o| o.passes).collect();
    let (selected, tie) = match passing.len() {
        0 => return Err(QismError::InvalidParameter("no projector convention gives commuting transfer matrices".into())),
        1 => (passing[0].convention.clone(), false),
        _ => {
            let best = passing.iter().max_by_key(|o| o.fixture_support_matches).unwrap();
            (best.convention.clone(), true)
        }
    };
    Ok(ConventionSelection { outcomes, selected, tie_broken_by_fixture: tie })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::SpectralAssignment;

    #[test]
    fn two_site_entries() {
        let t = monodromy_symbolic(Convention::C1, 2, SiteOrder::Ascending).unwrap();
        let a = WordSum::parse("@chain_len 2\n(u^2) 0:e 1:e\n(1) 0:sm 1:sp\n").unwrap();
        let d = WordSum::parse("@chain_len 2\n(1) 0:sp 1:sm\n(u^-2) 0:e 1:e\n").unwrap();
        assert_eq!(t.a(), &a);
        assert_eq!(t.d(), &d);
    }

    #[test]
    fn three_site_a_entry() {
        let t = monodromy_symbolic(Convention::C1, 3, SiteOrder::Ascending).unwrap();
        let a = WordSum::parse(
            "@chain_len 3\n(-u^3) 0:e 1:e 2:e\n(-u) 0:sm 1:sp 2:e\n(-u) 0:e 1:sm 2:sp\n(u^-1) 0:sm 1:e 2:sp\n",
        )
        .unwrap();
        assert_eq!(t.a(), &a);
    }

    #[test]
    fn single_site_monodromy_is_l() {
        let t = monodromy_symbolic(Convention::C1, 1, SiteOrder::Ascending).unwrap();
        assert_eq!(t, models::l4v(0, Convention::C1, 1).unwrap());
        assert!(monodromy_symbolic(Convention::C1, 0, SiteOrder::Ascending).is_err());
    }

    #[test]
    fn symbolic_matches_numeric() {
        let u = Scalar::gauss(1, 1);
        for n in 1..=4 {
            let sym = monodromy_symbolic(Convention::C1, n, SiteOrder::Ascending).unwrap();
            let num = monodromy(&ModelParams::FourVertex(FourVertexParams::new(u.clone())), n, SiteOrder::Ascending).unwrap();
            let ev = sym.evaluate(&SpectralAssignment::u(u.clone())).unwrap();
            for (x, y) in ev.cells().iter().zip(num.cells()) {
                assert_eq!(x.densify_exact().unwrap(), y.densify_exact().unwrap());
            }
        }
    }

    #[test]
    fn commutation_trivial_cases() {
        let p = ModelParams::FourVertex(FourVertexParams::new(Scalar::int(2)));
        let u = Scalar::int(2);
        assert_eq!(commutation_residual(&p, &u, &u, 3, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap(), 0.0);
        assert_eq!(commutation_residual(&p, &u, &Scalar::int(5), 1, SiteOrder::Ascending, DEFAULT_DENSE_CAP).unwrap(), 0.0);
    }

    #[test]
    fn rll_identity_trivial() {
        let l = models::l4v_numeric(0, &FourVertexParams::new(Scalar::int(3)), 1).unwrap();
        assert_eq!(rll_residual(&FloatMatrix::identity(4), &l, &l).unwrap(), 0.0);
        assert!(rll_residual(&FloatMatrix::identity(3), &l, &l).is_err());
    }

    #[test]
    fn symbolic_unsupported_for_trig_models() {
        let p = ModelParams::XXX(XXXParams::new(Scalar::one(), 1));
        assert!(matches!(monodromy_symbolic_for(&p, 2, SiteOrder::Ascending), Err(QismError::SymbolicUnsupported(_))));
    }

    #[test]
    fn yb_single_site_aa() {
        let p = FourVertexParams::new(Scalar::int(2));
        let r = yb_products(&p, &Scalar::int(3), 1, SiteOrder::Ascending).unwrap();
        assert_eq!(r.rows.len(), 16);
        assert_eq!(r.rows[0].pair, "AA");
        // A(u)A(u') = u u' e
        let want = crate::operator::ChainOperator::embed_scaled(Scalar::int(6), &models::ADOPTED_CONVENTION.projector().to_local(2), 0, 1)
            .unwrap()
            .densify()
            .unwrap();
        assert_eq!(r.products[0], want);
    }
}
