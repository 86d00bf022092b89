//! Python bindings. Matrices cross the boundary as lists of rows; composite
//! results come back as plain dicts.

use isoconn_core::isoconn::{
    iso_connectivity_zone, l4_closed_form_spectrum, l4_validity,
    parametric_l4 as core_parametric_l4, ParametricL4, ZoneGrid,
};
use isoconn_core::isospectral::{
    permutation_family as core_permutation_family,
    similarity_transform as core_similarity_transform, FamilyMode,
};
use isoconn_core::matcore::{
    ones_axis_rotation as core_ones_axis_rotation, symmetric_eigendecomposition,
};
use isoconn_core::mobility::{
    connectivity_gradient, integrate_connectivity_change, mirror_moves as core_mirror_moves,
};
use isoconn_core::render::render_svg;
use isoconn_core::spectral::{
    algebraic_connectivity as core_algebraic_connectivity,
    fiedler_null_space_check as core_null_space, is_isospectral as core_is_isospectral,
    EIGENVALUE_TOLERANCE, RESIDUAL_TOLERANCE,
};
use isoconn_core::topology::{build_laplacian, is_connected, validate_laplacian as core_validate};
use isoconn_core::{Agent, AgentConfiguration, SquareMatrix};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(isoconn, IsoconnError, PyValueError);

fn err(e: isoconn_core::Error) -> PyErr {
    IsoconnError::new_err(format!("{}: {e}", e.code()))
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<SquareMatrix> {
    SquareMatrix::from_rows(&rows).map_err(err)
}

/// Serializes through JSON so nested results become dicts and lists.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Configuration", module = "isoconn", skip_from_py_object)]
#[derive(Clone)]
struct PyConfiguration {
    inner: AgentConfiguration,
}

impl PyConfiguration {
    fn agent(&self, key: &str) -> PyResult<usize> {
        self.inner.index_of(key).map_err(err)
    }
}

#[pymethods]
impl PyConfiguration {
    /// `agents` is a list of `(id, x, y)` tuples.
    #[new]
    fn new(sigma: f64, range: f64, agents: Vec<(String, f64, f64)>) -> PyResult<Self> {
        let agents = agents
            .into_iter()
            .map(|(id, x, y)| Agent::new(id, x, y))
            .collect();
        AgentConfiguration::new(sigma, range, agents)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(|inner| Self { inner })
            .map_err(|e| IsoconnError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("configuration is serializable")
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma
    }

    #[getter]
    fn range(&self) -> f64 {
        self.inner.range
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.agents.iter().map(|a| a.id.clone()).collect()
    }

    #[getter]
    fn positions(&self) -> Vec<(f64, f64)> {
        self.inner.agents.iter().map(|a| (a.x, a.y)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Configuration(sigma={}, range={}, agents={})",
            self.inner.sigma,
            self.inner.range,
            self.inner.len()
        )
    }

    fn with_position(&self, agent: &str, x: f64, y: f64) -> PyResult<Self> {
        let i = self.agent(agent)?;
        self.inner
            .with_position(i, [x, y])
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn laplacian(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(build_laplacian(&self.inner).map_err(err)?.rows())
    }

    fn is_connected(&self) -> bool {
        is_connected(&self.inner)
    }

    fn algebraic_connectivity(&self) -> PyResult<ConnectivityReport> {
        let l = build_laplacian(&self.inner).map_err(err)?;
        core_algebraic_connectivity(&l)
            .map(ConnectivityReport::from)
            .map_err(err)
    }

    fn connectivity_gradient(&self, mobile: &str) -> PyResult<(f64, f64)> {
        let [gx, gy] = connectivity_gradient(&self.inner, self.agent(mobile)?).map_err(err)?;
        Ok((gx, gy))
    }

    fn mirror_moves<'py>(&self, py: Python<'py>, mobile: &str) -> PyResult<Bound<'py, PyAny>> {
        let solution = core_mirror_moves(&self.inner, self.agent(mobile)?).map_err(err)?;
        to_py(py, &solution)
    }

    #[pyo3(signature = (mobile, waypoints, steps = 10_000))]
    fn integrate<'py>(
        &self,
        py: Python<'py>,
        mobile: &str,
        waypoints: Vec<(f64, f64)>,
        steps: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let waypoints: Vec<[f64; 2]> = waypoints.into_iter().map(|(x, y)| [x, y]).collect();
        let result =
            integrate_connectivity_change(&self.inner, self.agent(mobile)?, &waypoints, steps)
                .map_err(err)?;
        to_py(py, &result)
    }

    /// `grid` is `(x_min, x_max, y_min, y_max, nx, ny)`.
    #[pyo3(signature = (mobile, grid, target = None, tol = 1e-3))]
    fn zone<'py>(
        &self,
        py: Python<'py>,
        mobile: &str,
        grid: (f64, f64, f64, f64, usize, usize),
        target: Option<f64>,
        tol: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let (x_min, x_max, y_min, y_max, nx, ny) = grid;
        let grid = ZoneGrid {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        let sample = iso_connectivity_zone(&self.inner, self.agent(mobile)?, target, grid, tol)
            .map_err(err)?;
        to_py(py, &sample)
    }

    #[pyo3(signature = (ghosts = Vec::new()))]
    fn render_svg(&self, ghosts: Vec<(f64, f64)>) -> String {
        let ghosts: Vec<[f64; 2]> = ghosts.into_iter().map(|(x, y)| [x, y]).collect();
        render_svg(&self.inner, &ghosts)
    }
}

#[pyclass(module = "isoconn", get_all, skip_from_py_object)]
#[derive(Clone)]
struct ConnectivityReport {
    lambda2: f64,
    fiedler: Vec<f64>,
    degenerate: bool,
    spectrum: Vec<f64>,
    gap: f64,
}

impl From<isoconn_core::ConnectivityReport> for ConnectivityReport {
    fn from(r: isoconn_core::ConnectivityReport) -> Self {
        Self {
            gap: r.gap(),
            lambda2: r.lambda2,
            fiedler: r.fiedler,
            degenerate: r.degenerate,
            spectrum: r.spectrum,
        }
    }
}

#[pymethods]
impl ConnectivityReport {
    fn __repr__(&self) -> String {
        format!(
            "ConnectivityReport(lambda2={}, degenerate={})",
            self.lambda2, self.degenerate
        )
    }
}

/// Eigenvalues (ascending) and the matching unit eigenvectors.
#[pyfunction]
fn eigh(m: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let d = symmetric_eigendecomposition(&matrix(m)?).map_err(err)?;
    Ok((d.eigenvalues, d.eigenvectors))
}

#[pyfunction]
fn algebraic_connectivity(l: Vec<Vec<f64>>) -> PyResult<ConnectivityReport> {
    core_algebraic_connectivity(&matrix(l)?)
        .map(ConnectivityReport::from)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (l, tol = 1e-9))]
fn validate_laplacian<'py>(
    py: Python<'py>,
    l: Vec<Vec<f64>>,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core_validate(&matrix(l)?, tol))
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = EIGENVALUE_TOLERANCE))]
fn is_isospectral(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    core_is_isospectral(&matrix(a)?, &matrix(b)?, tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = RESIDUAL_TOLERANCE))]
fn fiedler_null_space_check<'py>(
    py: Python<'py>,
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &core_null_space(&matrix(a)?, &matrix(b)?, tol).map_err(err)?,
    )
}

/// `QᵀLQ` as a dict with the result and structure flags.
#[pyfunction]
fn similarity_transform<'py>(
    py: Python<'py>,
    l: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &core_similarity_transform(&matrix(l)?, &matrix(q)?).map_err(err)?,
    )
}

#[pyfunction]
fn ones_axis_rotation(n: usize, theta: f64) -> PyResult<Vec<Vec<f64>>> {
    Ok(core_ones_axis_rotation(n, theta).map_err(err)?.rows())
}

/// `(perm, conjugate)` pair.
type FamilyMember = (Vec<usize>, Vec<Vec<f64>>);

/// Permutation conjugates of `l`; sampled with `seed` above order 8.
#[pyfunction]
#[pyo3(signature = (l, limit = None, dedupe = true, seed = None))]
fn permutation_family(
    l: Vec<Vec<f64>>,
    limit: Option<usize>,
    dedupe: bool,
    seed: Option<u64>,
) -> PyResult<Vec<FamilyMember>> {
    let l = matrix(l)?;
    let mode = match (FamilyMode::auto(l.order()), seed) {
        (FamilyMode::Sample { .. }, Some(seed)) => FamilyMode::Sample { seed },
        (mode, _) => mode,
    };
    let limit = limit.unwrap_or(match mode {
        FamilyMode::Enumerate => usize::MAX,
        FamilyMode::Sample { .. } => 100,
    });
    let family = core_permutation_family(&l, limit, dedupe, mode).map_err(err)?;
    Ok(family
        .into_iter()
        .map(|e| (e.perm.unwrap_or_default(), e.result.rows()))
        .collect())
}

#[pyfunction]
fn parametric_l4(alpha: f64, beta: f64) -> PyResult<Vec<Vec<f64>>> {
    let p = ParametricL4::new(alpha, beta).map_err(err)?;
    Ok(core_parametric_l4(p).rows())
}

#[pyfunction]
fn parametric_spectrum(alpha: f64, beta: f64) -> PyResult<Vec<f64>> {
    let p = ParametricL4::new(alpha, beta).map_err(err)?;
    Ok(l4_closed_form_spectrum(p).map_err(err)?.to_vec())
}

#[pyfunction]
fn parametric_validity<'py>(py: Python<'py>, alpha: f64, beta: f64) -> PyResult<Bound<'py, PyAny>> {
    let p = ParametricL4::new(alpha, beta).map_err(err)?;
    to_py(py, &l4_validity(p))
}

#[pymodule]
fn isoconn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("IsoconnError", m.py().get_type::<IsoconnError>())?;
    m.add_class::<PyConfiguration>()?;
    m.add_class::<ConnectivityReport>()?;
    m.add_function(wrap_pyfunction!(eigh, m)?)?;
    m.add_function(wrap_pyfunction!(algebraic_connectivity, m)?)?;
    m.add_function(wrap_pyfunction!(validate_laplacian, m)?)?;
    m.add_function(wrap_pyfunction!(is_isospectral, m)?)?;
    m.add_function(wrap_pyfunction!(fiedler_null_space_check, m)?)?;
    m.add_function(wrap_pyfunction!(similarity_transform, m)?)?;
    m.add_function(wrap_pyfunction!(ones_axis_rotation, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_family, m)?)?;
    m.add_function(wrap_pyfunction!(parametric_l4, m)?)?;
    m.add_function(wrap_pyfunction!(parametric_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(parametric_validity, m)?)?;
    Ok(())
}
