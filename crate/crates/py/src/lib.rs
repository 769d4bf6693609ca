//! Python bindings: the graph families, the stepping runners, and the
//! critical-value analysis, for quick exploration and plotting.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use swcp_core::analysis::{self, ProcessKind};
use swcp_core::dynamics;
use swcp_core::rng::{domain_tag, TrialStream};
use swcp_core::topology::{self, BigWorld, BigWorldAddress};
use swcp_core::Error;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::ResourceGuard { .. } => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn parse_address(s: &str) -> PyResult<BigWorldAddress> {
    s.parse().map_err(to_py_err)
}

/// Infection parameters alpha, beta, gamma with radius m and dimension d.
#[pyclass(name = "ModelParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModelParams {
    inner: swcp_core::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (alpha, beta, m, d, gamma = 0.0, unconstrained = false))]
    fn new(
        alpha: f64,
        beta: f64,
        m: u32,
        d: u32,
        gamma: f64,
        unconstrained: bool,
    ) -> PyResult<Self> {
        let params = if unconstrained {
            swcp_core::ModelParams::unconstrained(alpha, beta, m, d)
        } else {
            swcp_core::ModelParams::new(alpha, beta, m, d)
        }
        .and_then(|p| p.with_gamma(gamma))
        .map_err(to_py_err)?;
        Ok(PyModelParams { inner: params })
    }

    #[staticmethod]
    #[pyo3(signature = (lambda_, r, m, d, gamma = 0.0))]
    fn from_lambda_r(lambda_: f64, r: f64, m: u32, d: u32, gamma: f64) -> PyResult<Self> {
        let params = swcp_core::ModelParams::from_lambda_r(lambda_, r, m, d)
            .and_then(|p| p.with_gamma(gamma))
            .map_err(to_py_err)?;
        Ok(PyModelParams { inner: params })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda()
    }

    #[getter]
    fn ratio(&self) -> f64 {
        self.inner.ratio()
    }

    #[getter]
    fn u(&self) -> f64 {
        self.inner.u()
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(alpha={}, beta={}, m={}, d={}, gamma={})",
            self.inner.alpha, self.inner.beta, self.inner.m, self.inner.d, self.inner.gamma
        )
    }
}

/// Torus plus uniform random perfect matching.
#[pyclass(name = "SmallWorldGraph", frozen)]
struct PySmallWorldGraph {
    inner: topology::SmallWorldGraph,
}

#[pymethods]
impl PySmallWorldGraph {
    #[new]
    fn new(side: u32, m: u32, d: u32, seed: u64) -> PyResult<Self> {
        Ok(PySmallWorldGraph {
            inner: topology::make_small_world(side, m, d, seed).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn vertex_count(&self) -> u64 {
        self.inner.vertex_count()
    }

    /// (short-range neighbors, matched long-range partner).
    fn neighbors(&self, v: u32) -> PyResult<(Vec<u32>, u32)> {
        topology::small_world_neighbors(&self.inner, v).map_err(to_py_err)
    }

    fn matched_partner(&self, v: u32) -> PyResult<u32> {
        if (v as u64) < self.inner.vertex_count() {
            Ok(self.inner.matched_partner(v))
        } else {
            Err(PyValueError::new_err(format!("vertex {v} out of range")))
        }
    }

    /// True iff the radius-k ball around v is identical to the big world.
    fn is_ball_treelike(&self, v: u32, k: u32) -> PyResult<bool> {
        if (v as u64) < self.inner.vertex_count() {
            Ok(self.inner.is_ball_treelike(v, k))
        } else {
            Err(PyValueError::new_err(format!("vertex {v} out of range")))
        }
    }

    fn parallel_edge_pairs(&self) -> u64 {
        self.inner.parallel_edge_pairs()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PySmallWorldGraph {
            inner: topology::SmallWorldGraph::from_text(text).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "SmallWorldGraph(side={}, m={}, d={}, seed={})",
            self.inner.side(),
            self.inner.m(),
            self.inner.d(),
            self.inner.seed()
        )
    }
}

/// Short-range neighbors of a big-world address like "+(2;0)".
#[pyfunction]
fn big_world_short_neighbors(address: &str, m: u32, d: u32) -> PyResult<Vec<String>> {
    let a = parse_address(address)?;
    if a.dim() != d {
        return Err(PyValueError::new_err(format!(
            "address dimension {} != d = {d}",
            a.dim()
        )));
    }
    Ok(topology::big_world_short_neighbors(&a, m, d)
        .iter()
        .map(|x| x.to_string())
        .collect())
}

/// Long-range partner under the append/drop/sign-flip rule.
#[pyfunction]
fn big_world_long_neighbor(address: &str) -> PyResult<String> {
    Ok(parse_address(address)?.long_neighbor().to_string())
}

/// Neighbors within the comb (spine keeps short edges, teeth do not).
#[pyfunction]
fn comb_neighbors(address: &str, m: u32, d: u32) -> PyResult<Vec<String>> {
    let a = parse_address(address)?;
    Ok(topology::comb_neighbors(&a, m, d)
        .map_err(to_py_err)?
        .iter()
        .map(|x| x.to_string())
        .collect())
}

/// Neighbors in K_M plus their birth-and-death chain states.
#[pyfunction]
fn km_neighbors(offsets: Vec<u32>, m_sites: u32) -> PyResult<Vec<(Vec<u32>, u64)>> {
    let a = topology::KmAddress::new(offsets).map_err(to_py_err)?;
    Ok(topology::km_neighbors(&a, m_sites)
        .map_err(to_py_err)?
        .into_iter()
        .map(|n| (n.offsets().to_vec(), n.phi()))
        .collect())
}

#[pyfunction]
fn big_world_ball_size(m: u32, d: u32, k: u32) -> PyResult<u64> {
    topology::big_world_ball_size(m, d, k).map_err(to_py_err)
}

#[pyfunction]
fn comb_brw_critical(r: f64) -> PyResult<f64> {
    analysis::comb_brw_critical(r).map_err(to_py_err)
}

#[pyfunction]
fn level_matrix_eigenvalue(alpha: f64, beta: f64) -> PyResult<f64> {
    analysis::level_matrix_eigenvalue(alpha, beta).map_err(to_py_err)
}

#[pyfunction]
fn limiting_quadratic_root(r: f64) -> PyResult<f64> {
    analysis::limiting_quadratic_root(r).map_err(to_py_err)
}

#[pyfunction]
fn strong_survival_boundary_lambda(r: f64) -> PyResult<f64> {
    analysis::strong_survival_boundary_lambda(r).map_err(to_py_err)
}

#[pyfunction]
fn lambda2_brw_lower_bound(r: f64, m_sites: u64) -> PyResult<f64> {
    analysis::lambda2_brw_lower_bound(r, m_sites).map_err(to_py_err)
}

/// All chain quantities at (lambda, r, M) as a dict.
#[pyfunction]
fn chain_analysis<'py>(
    py: Python<'py>,
    lambda_: f64,
    r: f64,
    m_sites: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let an = analysis::chain_analysis(lambda_, r, m_sites).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("lambda", an.lambda)?;
    d.set_item("r", an.r)?;
    d.set_item("m_sites", an.m_sites)?;
    d.set_item("u", an.u)?;
    d.set_item("a", an.a)?;
    d.set_item("b", an.b)?;
    d.set_item("c", an.c)?;
    d.set_item("theta1", an.theta1)?;
    d.set_item("theta2", an.theta2)?;
    d.set_item("h1", an.h1)?;
    d.set_item("f", an.f)?;
    d.set_item("green", an.green)?;
    Ok(d)
}

/// Transition row of the projected chain at state j.
#[pyfunction]
fn chain_kernel(j: u64, u: f64, m_sites: u64) -> PyResult<Vec<(u64, f64)>> {
    analysis::chain_kernel(j, u, m_sites).map_err(to_py_err)
}

fn outcome_tuple(out: dynamics::StopOutcome) -> (String, u64) {
    (out.kind.to_string(), out.time)
}

/// Extinction time of the contact process from a single origin seed.
/// `graph = None` runs on the big world.
#[pyfunction]
#[pyo3(signature = (params, horizon, seed, replicate = 0, graph = None, guard_cap = 10_000_000))]
fn run_tau(
    params: &PyModelParams,
    horizon: u64,
    seed: u64,
    replicate: u64,
    graph: Option<&PySmallWorldGraph>,
    guard_cap: u64,
) -> PyResult<(String, u64)> {
    let stream = TrialStream::replicate(seed, domain_tag("py_tau"), replicate);
    let out = match graph {
        Some(g) => {
            dynamics::run_tau_from_origin(&g.inner, &params.inner, horizon, &stream, guard_cap)
        }
        None => {
            let g = BigWorld::new(params.inner.m, params.inner.d);
            dynamics::run_tau_from_origin(&g, &params.inner, horizon, &stream, guard_cap)
        }
    }
    .map_err(to_py_err)?;
    Ok(outcome_tuple(out))
}

/// First extinction-or-return time from a single origin seed.
#[pyfunction]
#[pyo3(signature = (params, horizon, seed, replicate = 0, graph = None, guard_cap = 10_000_000))]
fn run_sigma(
    params: &PyModelParams,
    horizon: u64,
    seed: u64,
    replicate: u64,
    graph: Option<&PySmallWorldGraph>,
    guard_cap: u64,
) -> PyResult<(String, u64)> {
    let stream = TrialStream::replicate(seed, domain_tag("py_sigma"), replicate);
    let out = match graph {
        Some(g) => dynamics::run_sigma(&g.inner, &params.inner, horizon, &stream, guard_cap),
        None => {
            let g = BigWorld::new(params.inner.m, params.inner.d);
            dynamics::run_sigma(&g, &params.inner, horizon, &stream, guard_cap)
        }
    }
    .map_err(to_py_err)?;
    Ok(outcome_tuple(out))
}

fn estimate_dict<'py>(py: Python<'py>, est: analysis::Estimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", est.value)?;
    d.set_item("stderr", est.stderr)?;
    d.set_item("ci", (est.ci_low, est.ci_high))?;
    d.set_item("replicates", est.replicates)?;
    d.set_item("censored", est.censored)?;
    d.set_item("seed", est.seed)?;
    Ok(d)
}

/// Fraction of replicates alive at the horizon (weak-survival proxy).
#[pyfunction]
#[pyo3(signature = (params, horizon, replicates, seed, graph = None, guard_cap = 30_000))]
fn estimate_survival_probability<'py>(
    py: Python<'py>,
    params: &PyModelParams,
    horizon: u64,
    replicates: u64,
    seed: u64,
    graph: Option<&PySmallWorldGraph>,
    guard_cap: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let est = match graph {
        Some(g) => analysis::estimate_survival_probability(
            &g.inner,
            &params.inner,
            horizon,
            replicates,
            seed,
            guard_cap,
        ),
        None => {
            let g = BigWorld::new(params.inner.m, params.inner.d);
            analysis::estimate_survival_probability(
                &g,
                &params.inner,
                horizon,
                replicates,
                seed,
                guard_cap,
            )
        }
    }
    .map_err(to_py_err)?;
    estimate_dict(py, est)
}

/// Fraction of replicates with the origin reinfected in the trailing
/// window (strong-survival proxy).
#[pyfunction]
#[pyo3(signature = (params, horizon, window, replicates, seed, graph = None, guard_cap = 30_000))]
fn estimate_return_probability<'py>(
    py: Python<'py>,
    params: &PyModelParams,
    horizon: u64,
    window: u64,
    replicates: u64,
    seed: u64,
    graph: Option<&PySmallWorldGraph>,
    guard_cap: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let est = match graph {
        Some(g) => analysis::estimate_return_probability(
            &g.inner,
            &params.inner,
            horizon,
            window,
            replicates,
            seed,
            guard_cap,
        ),
        None => {
            let g = BigWorld::new(params.inner.m, params.inner.d);
            analysis::estimate_return_probability(
                &g,
                &params.inner,
                horizon,
                window,
                replicates,
                seed,
                guard_cap,
            )
        }
    }
    .map_err(to_py_err)?;
    estimate_dict(py, est)
}

/// Least-squares growth rate of log E|B_t| on the big world.
/// `process` is "contact" or "branching".
#[pyfunction]
#[pyo3(signature = (params, process, t_min, t_max, replicates, seed, batches = 20, guard_cap = 1_000_000))]
#[allow(clippy::too_many_arguments)]
fn estimate_growth_rate<'py>(
    py: Python<'py>,
    params: &PyModelParams,
    process: &str,
    t_min: u64,
    t_max: u64,
    replicates: u64,
    seed: u64,
    batches: u64,
    guard_cap: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = match process {
        "contact" => ProcessKind::Contact,
        "branching" => ProcessKind::Branching,
        other => return Err(PyValueError::new_err(format!("unknown process {other:?}"))),
    };
    let graph = BigWorld::new(params.inner.m, params.inner.d);
    let cfg = analysis::GrowthConfig {
        t_max,
        replicates,
        batches,
        guard_cap,
        seed,
    };
    let est = analysis::estimate_growth_rate(&graph, &params.inner, kind, t_min, &cfg)
        .map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("c2_hat", est.c2_hat)?;
    d.set_item("slope_stderr", est.slope_stderr)?;
    d.set_item("t_range", est.t_range)?;
    d.set_item("log_means", est.log_means)?;
    d.set_item("degenerate", est.degenerate)?;
    d.set_item("replicates", est.replicates)?;
    d.set_item("seed", est.seed)?;
    Ok(d)
}

#[pymodule]
fn swcp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PySmallWorldGraph>()?;
    m.add_function(wrap_pyfunction!(big_world_short_neighbors, m)?)?;
    m.add_function(wrap_pyfunction!(big_world_long_neighbor, m)?)?;
    m.add_function(wrap_pyfunction!(comb_neighbors, m)?)?;
    m.add_function(wrap_pyfunction!(km_neighbors, m)?)?;
    m.add_function(wrap_pyfunction!(big_world_ball_size, m)?)?;
    m.add_function(wrap_pyfunction!(comb_brw_critical, m)?)?;
    m.add_function(wrap_pyfunction!(level_matrix_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(limiting_quadratic_root, m)?)?;
    m.add_function(wrap_pyfunction!(strong_survival_boundary_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(lambda2_brw_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(chain_analysis, m)?)?;
    m.add_function(wrap_pyfunction!(chain_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(run_tau, m)?)?;
    m.add_function(wrap_pyfunction!(run_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_survival_probability, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_return_probability, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_growth_rate, m)?)?;
    Ok(())
}
