use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict, PyFloat, PyInt, PyList, PyString};

use qism_core::cli::parse_scalar;
use qism_core::dense::DEFAULT_DENSE_CAP;
use qism_core::fixtures::{self, Fixture};
use qism_core::laurent::SpectralAssignment;
use qism_core::models::{Convention, FourVertexParams, SixVertexParams, XXXParams, ADOPTED_CONVENTION};
use qism_core::monodromy::{self, ModelParams, SiteOrder};
use qism_core::operator;
use qism_core::poisson::{self, ElemBracketTable, PExpr, Strategy};
use qism_core::scalar::Scalar;
use qism_core::vertex::{self, BoundaryPreset, Io, VertexModel};
use qism_core::words;

create_exception!(qism, QismError, PyException);

fn err(e: qism_core::QismError) -> PyErr {
    QismError::new_err(e.to_string())
}

/// int, float, complex, or an exact literal such as `"3/2 - i"`.
fn scalar_arg(obj: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    if let Ok(i) = obj.cast::<PyInt>() {
        return Ok(Scalar::int(i.extract::<i64>()?));
    }
    if let Ok(f) = obj.cast::<PyFloat>() {
        return Ok(Scalar::float(f.value(), 0.0));
    }
    if let Ok(c) = obj.cast::<PyComplex>() {
        return Ok(Scalar::float(c.real(), c.imag()));
    }
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_scalar(s.to_str()?).map_err(err);
    }
    Err(QismError::new_err("expected int, float, complex or str"))
}

fn convention_arg(name: Option<&str>) -> PyResult<Convention> {
    name.map_or(Ok(ADOPTED_CONVENTION), |s| s.parse().map_err(err))
}

fn order_arg(name: &str) -> PyResult<SiteOrder> {
    match name {
        "ascending" => Ok(SiteOrder::Ascending),
        "descending" => Ok(SiteOrder::Descending),
        _ => Err(QismError::new_err(format!("unknown site order `{name}`"))),
    }
}

fn two_s_arg(spin: &str) -> PyResult<u32> {
    let s = parse_scalar(spin).map_err(err)?;
    let twice = (&s + &s).to_c64();
    if twice.im != 0.0 || twice.re < 1.0 || twice.re.fract() != 0.0 {
        return Err(QismError::new_err(format!("spin must be a positive half-integer, got {spin}")));
    }
    Ok(twice.re as u32)
}

/// Symbolic operator sum: Laurent coefficients times words of matrix units.
#[pyclass(name = "WordSum", module = "qism", frozen)]
struct PyWordSum(words::WordSum);

#[pymethods]
impl PyWordSum {
    /// Parse the line format `(coeff) site:Eij site:Eij`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        words::WordSum::parse(text).map(PyWordSum).map_err(err)
    }

    #[getter]
    fn chain_len(&self) -> usize {
        self.0.chain_len()
    }

    fn __len__(&self) -> usize {
        self.0.num_terms()
    }

    /// Words with nonzero coefficient, as text.
    fn support(&self) -> Vec<String> {
        self.0.body_text().lines().map(|l| l.split_once(") ").map_or("", |(_, w)| w).to_string()).collect()
    }

    fn terms(&self) -> Vec<(String, String)> {
        self.0
            .body_text()
            .lines()
            .filter_map(|l| l.strip_prefix('(')?.split_once(") ").map(|(c, w)| (c.to_string(), w.to_string())))
            .collect()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.add(&other.0).map(PyWordSum).map_err(err)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.sub(&other.0).map(PyWordSum).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.word_multiply(&other.0).map(PyWordSum).map_err(err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    /// Substitute spectral values and return the chain operator.
    #[pyo3(signature = (u, u_prime=None))]
    fn evaluate(&self, u: &Bound<'_, PyAny>, u_prime: Option<&Bound<'_, PyAny>>) -> PyResult<PyChainOperator> {
        let u = scalar_arg(u)?;
        let asg = match u_prime {
            Some(v) => SpectralAssignment::pair(u, scalar_arg(v)?),
            None => SpectralAssignment::u(u),
        };
        self.0.evaluate(&asg).map(PyChainOperator).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("<WordSum chain_len={} terms={}>", self.0.chain_len(), self.0.num_terms())
    }
}

/// Operator on a chain of local spaces, kept as a sum of site products.
#[pyclass(name = "ChainOperator", module = "qism", frozen)]
struct PyChainOperator(operator::ChainOperator);

#[pymethods]
impl PyChainOperator {
    #[getter]
    fn chain_len(&self) -> usize {
        self.0.chain_len()
    }

    #[getter]
    fn local_dim(&self) -> usize {
        self.0.local_dim()
    }

    /// Dense matrix as nested lists of complex numbers.
    fn dense(&self) -> PyResult<Vec<Vec<Complex64>>> {
        let m = self.0.densify_float().map_err(err)?;
        Ok((0..m.rows()).map(|i| (0..m.cols()).map(|j| *m.get(i, j)).collect()).collect())
    }

    fn frobenius_norm(&self) -> PyResult<f64> {
        Ok(self.0.densify_float().map_err(err)?.frobenius_norm())
    }

    fn commutator(&self, other: &Self) -> PyResult<Self> {
        self.0.commutator(&other.0).map(PyChainOperator).map_err(err)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.add(&other.0).map(PyChainOperator).map_err(err)
    }

    fn __matmul__(&self, other: &Self) -> PyResult<Self> {
        self.0.multiply(&other.0).map(PyChainOperator).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("<ChainOperator chain_len={} local_dim={}>", self.0.chain_len(), self.0.local_dim())
    }
}

fn model_params(model: &str, u: &Scalar, spin: &str, eta: f64) -> PyResult<ModelParams> {
    Ok(match model {
        "4v" => ModelParams::FourVertex(FourVertexParams::new(u.clone())),
        "6v" => ModelParams::SixVertex(SixVertexParams::trig(u.to_c64(), Complex64::new(eta, 0.0))),
        "xxx" => ModelParams::XXX(XXXParams::new(u.clone(), two_s_arg(spin)?)),
        _ => return Err(QismError::new_err(format!("model must be 4v, 6v or xxx, got `{model}`"))),
    })
}

fn with_convention(p: ModelParams, conv: Convention) -> ModelParams {
    match p {
        ModelParams::FourVertex(f) => ModelParams::FourVertex(f.with_convention(conv)),
        other => other,
    }
}

/// Symbolic 4-vertex monodromy entries `{"A": WordSum, ...}`.
#[pyfunction]
#[pyo3(signature = (n, convention=None, order="ascending"))]
fn monodromy_symbolic(py: Python<'_>, n: usize, convention: Option<&str>, order: &str) -> PyResult<Py<PyDict>> {
    let t = monodromy::monodromy_symbolic(convention_arg(convention)?, n, order_arg(order)?).map_err(err)?;
    let d = PyDict::new(py);
    for (label, cell) in monodromy::LABELS.iter().zip(t.cells()) {
        d.set_item(*label, PyWordSum(cell.clone()))?;
    }
    Ok(d.unbind())
}

/// Numeric monodromy entries at spectral value `u`.
#[pyfunction]
#[pyo3(signature = (n, u, model="4v", convention=None, order="ascending", spin="1/2", eta=0.4))]
fn monodromy_numeric(
    py: Python<'_>,
    n: usize,
    u: &Bound<'_, PyAny>,
    model: &str,
    convention: Option<&str>,
    order: &str,
    spin: &str,
    eta: f64,
) -> PyResult<Py<PyDict>> {
    let p = with_convention(model_params(model, &scalar_arg(u)?, spin, eta)?, convention_arg(convention)?);
    let t = monodromy::monodromy(&p, n, order_arg(order)?).map_err(err)?;
    let d = PyDict::new(py);
    for (label, cell) in monodromy::LABELS.iter().zip(t.cells()) {
        d.set_item(*label, PyChainOperator(cell.clone()))?;
    }
    Ok(d.unbind())
}

/// `‖[t(u), t(v)]‖_F`.
#[pyfunction]
#[pyo3(signature = (n, u, v, model="4v", convention=None, order="ascending", spin="1/2", eta=0.4))]
fn transfer_commutator(
    n: usize,
    u: &Bound<'_, PyAny>,
    v: &Bound<'_, PyAny>,
    model: &str,
    convention: Option<&str>,
    order: &str,
    spin: &str,
    eta: f64,
) -> PyResult<f64> {
    let (u, v) = (scalar_arg(u)?, scalar_arg(v)?);
    let p = with_convention(model_params(model, &u, spin, eta)?, convention_arg(convention)?);
    monodromy::commutation_residual(&p, &u, &v, n, order_arg(order)?, DEFAULT_DENSE_CAP).map_err(err)
}

/// Yang-Baxter residual of the trigonometric 6-vertex R.
#[pyfunction]
fn ybe_residual(lam: Complex64, mu: Complex64, eta: Complex64) -> PyResult<f64> {
    monodromy::ybe_residual_trig(lam, mu, eta).map_err(err)
}

/// RLL residual of the 6-vertex L against the check R with the given
/// crossing multiple of `eta`.
#[pyfunction]
#[pyo3(signature = (lam, mu, eta, v=Complex64::new(0.0, 0.0), crossing=2.0))]
fn rll_residual_6v(lam: Complex64, mu: Complex64, eta: Complex64, v: Complex64, crossing: f64) -> PyResult<f64> {
    monodromy::rll_residual_6v(lam, mu, eta, v, crossing).map_err(err)
}

/// The sixteen products `X(u) Y(u')` with their norms.
#[pyfunction]
#[pyo3(signature = (n, u, u_prime, convention=None, order="ascending"))]
fn yb_products(
    py: Python<'_>,
    n: usize,
    u: &Bound<'_, PyAny>,
    u_prime: &Bound<'_, PyAny>,
    convention: Option<&str>,
    order: &str,
) -> PyResult<Py<PyDict>> {
    let params = FourVertexParams::new(scalar_arg(u)?).with_convention(convention_arg(convention)?);
    let rep = monodromy::yb_products(&params, &scalar_arg(u_prime)?, n, order_arg(order)?).map_err(err)?;
    let rows = PyList::empty(py);
    for r in &rep.rows {
        let d = PyDict::new(py);
        d.set_item("label", &r.label)?;
        d.set_item("pair", &r.pair)?;
        d.set_item("product_norm", r.product_norm)?;
        d.set_item("commutator_norm", r.commutator_norm)?;
        d.set_item("exchange_norm", r.exchange_norm)?;
        rows.append(d)?;
    }
    let out = PyDict::new(py);
    out.set_item("rows", rows)?;
    out.set_item("transfer_commutator_norm", rep.transfer_commutator_norm)?;
    Ok(out.unbind())
}

/// Run the projector-convention selection.
#[pyfunction]
#[pyo3(signature = (max_n=6, samples=3, seed=7, tol=1e-10))]
fn select_convention(py: Python<'_>, max_n: usize, samples: usize, seed: u64, tol: f64) -> PyResult<Py<PyDict>> {
    let sel = monodromy::select_convention(max_n, samples, seed, tol).map_err(err)?;
    let outcomes = PyList::empty(py);
    for o in &sel.outcomes {
        let d = PyDict::new(py);
        d.set_item("convention", &o.convention)?;
        d.set_item("max_residual", o.max_residual)?;
        d.set_item("passes", o.passes)?;
        d.set_item("fixture_support_matches", o.fixture_support_matches)?;
        outcomes.append(d)?;
    }
    let out = PyDict::new(py);
    out.set_item("selected", &sel.selected)?;
    out.set_item("tie_broken_by_fixture", sel.tie_broken_by_fixture)?;
    out.set_item("outcomes", outcomes)?;
    Ok(out.unbind())
}

fn vertex_model(name: &str) -> PyResult<VertexModel> {
    name.parse().map_err(err)
}

/// Rectangular lattice with fixed boundary arrows.
#[pyclass(name = "Lattice", module = "qism", frozen)]
struct PyLattice(vertex::Lattice);

#[pymethods]
impl PyLattice {
    /// `boundary` is a preset name (`dwbc`, `dwbc-dual`, `ferro`,
    /// `random:<seed>`) or a list of `"in"`/`"out"` tokens.
    #[new]
    #[pyo3(signature = (rows, cols, boundary=None))]
    fn new(rows: usize, cols: usize, boundary: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let lat = match boundary {
            None => vertex::Lattice::preset(rows, cols, BoundaryPreset::Dwbc),
            Some(b) => match b.extract::<String>() {
                Ok(name) => vertex::Lattice::preset(rows, cols, name.parse().map_err(err)?),
                Err(_) => {
                    let tokens = b.extract::<Vec<String>>()?;
                    let ring = tokens.iter().map(|t| t.parse::<Io>()).collect::<Result<Vec<_>, _>>().map_err(err)?;
                    vertex::Lattice::new(rows, cols, &ring)
                }
            },
        };
        lat.map(PyLattice).map_err(err)
    }

    #[getter]
    fn rows(&self) -> usize {
        self.0.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.0.cols()
    }

    /// Boundary tokens clockwise from the top-left corner.
    fn boundary(&self) -> Vec<String> {
        self.0.ring().iter().map(Io::to_string).collect()
    }

    /// Vertex types of every configuration, row-major from the bottom left.
    #[pyo3(signature = (model="6v"))]
    fn configurations(&self, model: &str) -> PyResult<Vec<Vec<u8>>> {
        let it = vertex::enumerate(&self.0, &vertex_model(model)?.allowed()).map_err(err)?;
        Ok(it.map(|c| c.types().to_vec()).collect())
    }

    /// `Z` as `{(n_a, n_b, n_c): multiplicity}`; `method` is `enum` or `transfer`.
    #[pyo3(signature = (model="6v", method="enum"))]
    fn partition(&self, py: Python<'_>, model: &str, method: &str) -> PyResult<Py<PyDict>> {
        let m = vertex_model(model)?;
        let z = match method {
            "enum" => vertex::partition_enum(&self.0, m),
            "transfer" => vertex::partition_transfer(&self.0, m),
            _ => return Err(QismError::new_err(format!("method must be enum or transfer, got `{method}`"))),
        }
        .map_err(err)?;
        let d = PyDict::new(py);
        for (e, k) in z.terms() {
            d.set_item((e[0], e[1], e[2]), k)?;
        }
        Ok(d.unbind())
    }

    /// `Z` as text, e.g. `2*a^2*c^2 + ...`.
    #[pyo3(signature = (model="6v"))]
    fn partition_text(&self, model: &str) -> PyResult<String> {
        Ok(vertex::partition_enum(&self.0, vertex_model(model)?).map_err(err)?.to_string())
    }

    fn __repr__(&self) -> String {
        format!("<Lattice {}x{}>", self.0.rows(), self.0.cols())
    }
}

/// Expand a bracket expression; returns `(coefficient, left, right)` triples.
#[pyfunction]
#[pyo3(signature = (expr, strategy="left-first", depth_cap=poisson::DEFAULT_DEPTH_CAP))]
fn poisson_expand(expr: &str, strategy: &str, depth_cap: usize) -> PyResult<Vec<(String, String, String)>> {
    let strategy = match strategy {
        "left-first" => Strategy::LeftFirst,
        "right-first" => Strategy::RightFirst,
        _ => return Err(QismError::new_err(format!("unknown strategy `{strategy}`"))),
    };
    let e = PExpr::parse(expr).map_err(err)?;
    let nf = poisson::expand_with(&e, strategy, depth_cap).map_err(err)?;
    Ok(nf.terms().into_iter().map(|t| (t.coefficient.to_string(), t.left.to_string(), t.right.to_string())).collect())
}

#[pyfunction]
fn count_elementary(m: usize, n: usize) -> PyResult<usize> {
    poisson::count_elementary(m, n).map_err(err)
}

/// Jacobi cyclic sum for `f, g, h` under a bracket table given in the
/// table-file format; returns the residual as text (`"0"` when it holds).
#[pyfunction]
#[pyo3(signature = (f, g, h, table=""))]
fn jacobi_residual(f: &str, g: &str, h: &str, table: &str) -> PyResult<String> {
    let t = if table.trim().is_empty() { ElemBracketTable::zero() } else { ElemBracketTable::parse(table).map_err(err)? };
    let p = |s: &str| PExpr::parse(s).map_err(err);
    let rep = poisson::jacobi_residual(&p(f)?, &p(g)?, &p(h)?, &t, &Default::default()).map_err(err)?;
    Ok(rep.residual.to_string())
}

/// Per-entry diff of a built-in transcription against the engine.
#[pyfunction]
#[pyo3(signature = (fixture="two-site", convention=None))]
fn fixture_diff(py: Python<'_>, fixture: &str, convention: Option<&str>) -> PyResult<Py<PyList>> {
    let fx = Fixture::all()
        .into_iter()
        .find(|f| f.name() == fixture)
        .ok_or_else(|| QismError::new_err(format!("unknown fixture `{fixture}`")))?;
    let rep = fixtures::diff_builtin(fx, convention_arg(convention)?).map_err(err)?;
    let out = PyList::empty(py);
    for e in &rep.entries {
        let d = PyDict::new(py);
        d.set_item("entry", &e.entry)?;
        d.set_item("support_match", e.support_match)?;
        d.set_item("matched", e.matched)?;
        d.set_item("coefficient_mismatch", e.coefficient_mismatch)?;
        d.set_item("missing_in_fixture", e.missing_in_fixture)?;
        d.set_item("extra_in_fixture", e.extra_in_fixture)?;
        out.append(d)?;
    }
    Ok(out.unbind())
}

#[pymodule]
fn qism(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QismError", m.py().get_type::<QismError>())?;
    m.add_class::<PyWordSum>()?;
    m.add_class::<PyChainOperator>()?;
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(monodromy_symbolic, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_commutator, m)?)?;
    m.add_function(wrap_pyfunction!(ybe_residual, m)?)?;
    m.add_function(wrap_pyfunction!(rll_residual_6v, m)?)?;
    m.add_function(wrap_pyfunction!(yb_products, m)?)?;
    m.add_function(wrap_pyfunction!(select_convention, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_expand, m)?)?;
    m.add_function(wrap_pyfunction!(count_elementary, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_residual, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_diff, m)?)?;
    Ok(())
}
