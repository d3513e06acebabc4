//! Operators on the chain space `(C^d)^{⊗N}`.
//!
//! A [`ChainOperator`] is stored as a sum of site-factored terms: each term is a
//! coefficient times a map from site index to a local `d × d` operator, with
//! the identity implied at every site not in the map. Dense matrices are only
//! built on request, and only up to a row cap.
//!
//! Basis convention for `d = 2`: index 0 is `|⇓⟩ = [1, 0]ᵀ` and index 1 is
//! `|⇑⟩ = [0, 1]ᵀ`. Site 0 is the most significant tensor factor, so
//! `embed(x, 0, 2)` densifies to `x ⊗ I`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::dense::{DenseMatrix, ExactMatrix, FloatMatrix, DEFAULT_DENSE_CAP};
use crate::error::{QismError, Result};
use crate::scalar::{Field, GaussQ, Scalar};

/// A `d × d` matrix of scalars acting on one site.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalOperator {
    dim: usize,
    entries: Vec<Scalar>,
}

impl LocalOperator {
    pub fn new(dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(QismError::ShapeMismatch(format!(
                "local operator of dimension {dim} needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(LocalOperator { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        LocalOperator { dim, entries: vec![Scalar::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = Scalar::one();
        }
        op
    }

    /// Matrix unit `E_{ij}` (0-based): a single 1 at row `i`, column `j`.
    pub fn matrix_unit(dim: usize, i: usize, j: usize) -> Self {
        let mut op = Self::zero(dim);
        op.entries[i * dim + j] = Scalar::one();
        op
    }

    pub fn diagonal(values: Vec<Scalar>) -> Self {
        let dim = values.len();
        let mut op = Self::zero(dim);
        for (i, v) in values.into_iter().enumerate() {
            op.entries[i * dim + i] = v;
        }
        op
    }

    /// `σ⁺ = |⇑⟩⟨⇓|`.
    pub fn sigma_plus() -> Self {
        Self::matrix_unit(2, 1, 0)
    }

    /// `σ⁻ = |⇓⟩⟨⇑|`.
    pub fn sigma_minus() -> Self {
        Self::matrix_unit(2, 0, 1)
    }

    /// `σᶻ = [σ⁺, σ⁻]`, which is `diag(-1, 1)` in this basis.
    pub fn sigma_z() -> Self {
        Self::diagonal(vec![Scalar::int(-1), Scalar::int(1)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(Scalar::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let v = self.get(i, j);
                if i == j { v.is_one() } else { v.is_zero() }
            })
        })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(QismError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(LocalOperator { dim: self.dim, entries })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        LocalOperator { dim: self.dim, entries: self.entries.iter().map(|a| a * s).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut entries = vec![Scalar::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        entries[i * d + j] = &entries[i * d + j] + &(a * b);
                    }
                }
            }
        }
        Ok(LocalOperator { dim: d, entries })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.add(&other.matmul(self)?.scale(&Scalar::int(-1)))
    }

    pub fn to_dense<T: Field>(&self) -> Result<DenseMatrix<T>> {
        let mut m = DenseMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, T::from_scalar(self.get(i, j)).ok_or(QismError::NotExact)?);
            }
        }
        Ok(m)
    }

    /// Split into `(scale, op)` with the first nonzero entry of `op` equal to 1.
    fn split_scale(&self) -> Option<(Scalar, LocalOperator)> {
        let lead = self.entries.iter().find(|v| !v.is_zero())?;
        if lead.is_one() {
            return Some((Scalar::one(), self.clone()));
        }
        let inv = lead.inv().ok()?;
        let mut op = self.scale(&inv);
        let pos = self.entries.iter().position(|v| !v.is_zero())?;
        op.entries[pos] = Scalar::one();
        Some((lead.clone(), op))
    }

    fn nonzeros(&self) -> Vec<(usize, usize, &Scalar)> {
        let d = self.dim;
        (0..d * d)
            .filter(|&k| !self.entries[k].is_zero())
            .map(|k| (k / d, k % d, &self.entries[k]))
            .collect()
    }
}

pub type Factors = BTreeMap<usize, LocalOperator>;

/// Densified operator keeping the mode of its inputs.
#[derive(Clone, Debug, PartialEq)]
pub enum Densified {
    Exact(ExactMatrix),
    Float(FloatMatrix),
}

impl Densified {
    pub fn frobenius_norm(&self) -> f64 {
        match self {
            Densified::Exact(m) => m.frobenius_norm(),
            Densified::Float(m) => m.frobenius_norm(),
        }
    }

    pub fn to_float(&self) -> FloatMatrix {
        match self {
            Densified::Exact(m) => m.to_float(),
            Densified::Float(m) => m.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Densified::Exact(_))
    }
}

/// Linear operator on `N` sites of local dimension `d`, kept as a normalized
/// sum of site-factored terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainOperator {
    chain_len: usize,
    local_dim: usize,
    terms: BTreeMap<Factors, Scalar>,
}

impl ChainOperator {
    pub fn zero(chain_len: usize, local_dim: usize) -> Self {
        ChainOperator { chain_len, local_dim, terms: BTreeMap::new() }
    }

    pub fn identity(chain_len: usize, local_dim: usize) -> Self {
        Self::scalar(Scalar::one(), chain_len, local_dim)
    }

    pub fn scalar(s: Scalar, chain_len: usize, local_dim: usize) -> Self {
        let mut op = Self::zero(chain_len, local_dim);
        op.push_term(s, Factors::new());
        op
    }

    /// Identity-padded embedding of `op` at `site`.
    pub fn embed(op: &LocalOperator, site: usize, chain_len: usize) -> Result<Self> {
        Self::embed_scaled(Scalar::one(), op, site, chain_len)
    }

    pub fn embed_scaled(coeff: Scalar, op: &LocalOperator, site: usize, chain_len: usize) -> Result<Self> {
        if site >= chain_len {
            return Err(QismError::SiteOutOfRange { site, chain_len });
        }
        let mut out = Self::zero(chain_len, op.dim());
        let mut factors = Factors::new();
        factors.insert(site, op.clone());
        out.push_term(coeff, factors);
        Ok(out)
    }

    /// Build from raw `(coefficient, [(site, op)])` terms; the result is normalized.
    pub fn from_terms(
        chain_len: usize,
        local_dim: usize,
        terms: impl IntoIterator<Item = (Scalar, Vec<(usize, LocalOperator)>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(chain_len, local_dim);
        for (coeff, factors) in terms {
            let mut map = Factors::new();
            for (site, op) in factors {
                if site >= chain_len {
                    return Err(QismError::SiteOutOfRange { site, chain_len });
                }
                if op.dim() != local_dim {
                    return Err(QismError::DimensionMismatch { expected: local_dim, found: op.dim() });
                }
                let merged = match map.remove(&site) {
                    Some(prev) => prev.matmul(&op)?,
                    None => op,
                };
                map.insert(site, merged);
            }
            out.push_term(coeff, map);
        }
        Ok(out)
    }

    pub fn chain_len(&self) -> usize {
        self.chain_len
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Factors, &Scalar)> {
        self.terms.iter()
    }

    /// True when no term survives normalization. Cancellation between terms
    /// with different factorizations is only visible in the dense norm.
    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.iter().all(|(f, c)| c.is_exact() && f.values().all(LocalOperator::is_exact))
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.chain_len as u32)
    }

    /// Insert a term, normalizing its factors: identities are dropped, each
    /// factor's leading entry is pulled into the coefficient, zero terms vanish.
    fn push_term(&mut self, coeff: Scalar, factors: Factors) {
        if coeff.is_zero() {
            return;
        }
        let mut coeff = coeff;
        let mut clean = Factors::new();
        for (site, op) in factors {
            if op.is_identity() {
                continue;
            }
            match op.split_scale() {
                None => return,
                Some((s, unit)) => {
                    coeff = &coeff * &s;
                    if !unit.is_identity() {
                        clean.insert(site, unit);
                    }
                }
            }
        }
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&clean) {
            Some(prev) => {
                let sum = &prev + &coeff;
                if !sum.is_zero() {
                    self.terms.insert(clean, sum);
                }
            }
            None => {
                self.terms.insert(clean, coeff);
            }
        }
    }

    /// Rebuild the term map from scratch; idempotent.
    pub fn normalized(&self) -> Self {
        let mut out = Self::zero(self.chain_len, self.local_dim);
        for (f, c) in &self.terms {
            out.push_term(c.clone(), f.clone());
        }
        out
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.chain_len != other.chain_len || self.local_dim != other.local_dim {
            return Err(QismError::ShapeMismatch(format!(
                "chain ({}, d={}) vs ({}, d={})",
                self.chain_len, self.local_dim, other.chain_len, other.local_dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.push_term(c.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.chain_len, self.local_dim);
        for (f, c) in &self.terms {
            out.push_term(c * s, f.clone());
        }
        out
    }

    /// Term-wise product with per-site local multiplication.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.chain_len, self.local_dim);
        for (fa, ca) in &self.terms {
            'pair: for (fb, cb) in &other.terms {
                let mut prod = fa.clone();
                for (site, opb) in fb {
                    let merged = match prod.remove(site) {
                        Some(opa) => opa.matmul(opb)?,
                        None => opb.clone(),
                    };
                    if merged.is_zero() {
                        continue 'pair;
                    }
                    prod.insert(*site, merged);
                }
                out.push_term(ca * cb, prod);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    fn check_cap(&self, cap: usize) -> Result<usize> {
        let rows = (self.local_dim as u128).checked_pow(self.chain_len as u32).unwrap_or(u128::MAX);
        if rows > cap as u128 {
            return Err(QismError::DenseCapExceeded { rows: rows.min(usize::MAX as u128) as usize, cap });
        }
        Ok(rows as usize)
    }

    /// Dense realization in element type `T`; fails with [`QismError::NotExact`]
    /// when exact output is requested for float data.
    pub fn densify_as<T: Field>(&self, cap: usize) -> Result<DenseMatrix<T>> {
        let n = self.check_cap(cap)?;
        let d = self.local_dim;
        let mut out = DenseMatrix::<T>::zeros(n, n);
        let identity = LocalOperator::identity(d);
        for (factors, coeff) in &self.terms {
            let c = T::from_scalar(coeff).ok_or(QismError::NotExact)?;
            let mut acc: Vec<(usize, usize, T)> = vec![(0, 0, c)];
            for site in 0..self.chain_len {
                let op = factors.get(&site).unwrap_or(&identity);
                let nz: Vec<(usize, usize, T)> = op
                    .nonzeros()
                    .into_iter()
                    .map(|(i, j, v)| T::from_scalar(v).map(|t| (i, j, t)).ok_or(QismError::NotExact))
                    .collect::<Result<_>>()?;
                let mut next = Vec::with_capacity(acc.len() * nz.len());
                for (r, c, v) in &acc {
                    for (i, j, w) in &nz {
                        next.push((r * d + i, c * d + j, v.clone() * w.clone()));
                    }
                }
                acc = next;
            }
            for (r, c, v) in acc {
                out.add_at(r, c, v);
            }
        }
        Ok(out)
    }

    pub fn densify_exact(&self) -> Result<ExactMatrix> {
        self.densify_as::<GaussQ>(DEFAULT_DENSE_CAP)
    }

    pub fn densify_float(&self) -> Result<FloatMatrix> {
        self.densify_as::<Complex64>(DEFAULT_DENSE_CAP)
    }

    /// Dense realization under the default cap, exact whenever every input is exact.
    pub fn densify(&self) -> Result<Densified> {
        self.densify_capped(DEFAULT_DENSE_CAP)
    }

    pub fn densify_capped(&self, cap: usize) -> Result<Densified> {
        if self.is_exact() {
            self.densify_as::<GaussQ>(cap).map(Densified::Exact)
        } else {
            self.densify_as::<Complex64>(cap).map(Densified::Float)
        }
    }

    pub fn frobenius_norm(&self) -> Result<f64> {
        Ok(self.densify()?.frobenius_norm())
    }
}
