//! Python bindings for `sqgde-core`.

use std::fmt::Display;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sqgde_core::algos::{self, DEConfig, DifferencePair, SQGConfig, Strategy};
use sqgde_core::testfuncs::{self, BaseFunction, FunctionDescriptor};
use sqgde_core::{metrics, stats, TracePoint};

fn value_error(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A benchmark function. Calling it returns the noiseless value.
#[pyclass(name = "TestFunction", frozen, module = "sqgde")]
struct PyTestFunction {
    inner: testfuncs::TestFunction,
}

#[pymethods]
impl PyTestFunction {
    #[new]
    #[pyo3(signature = (kind, dim, *, shifted=false, rotated=false, noisy=false, seed=0, label=None))]
    fn new(
        kind: &str,
        dim: usize,
        shifted: bool,
        rotated: bool,
        noisy: bool,
        seed: u64,
        label: Option<String>,
    ) -> PyResult<Self> {
        let base: BaseFunction = kind.parse().map_err(value_error)?;
        let mut desc = FunctionDescriptor::single(label.unwrap_or_else(|| kind.to_string()), base)
            .with_dim(dim)
            .with_seed(seed);
        if shifted {
            desc = desc.shifted();
        }
        if rotated {
            desc = desc.rotated();
        }
        if noisy {
            desc = desc.noisy();
        }
        Self::build(&desc)
    }

    /// Builds from a JSON function descriptor.
    #[staticmethod]
    fn from_json(descriptor: &str) -> PyResult<Self> {
        let desc: FunctionDescriptor = serde_json::from_str(descriptor).map_err(value_error)?;
        Self::build(&desc)
    }

    /// A function from the built-in suite, by full label or short id (`"f09"`).
    #[staticmethod]
    fn suite(label: &str, dim: usize) -> PyResult<Self> {
        let desc = testfuncs::default_suite()
            .into_iter()
            .find(|d| d.label == label || d.label.split('_').next() == Some(label))
            .ok_or_else(|| value_error(format!("unknown suite function `{label}`")))?;
        Self::build(&desc.with_dim(dim))
    }

    /// Labels of the built-in suite.
    #[staticmethod]
    fn suite_labels() -> Vec<String> {
        testfuncs::default_suite()
            .into_iter()
            .map(|d| d.label)
            .collect()
    }

    fn __call__(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.space.check_len(&x).map_err(value_error)?;
        Ok(self.inner.value(&x))
    }

    #[getter]
    fn label(&self) -> &str {
        &self.inner.label
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn category(&self) -> u8 {
        self.inner.category
    }

    #[getter]
    fn optimum(&self) -> Vec<f64> {
        self.inner.optimum().to_vec()
    }

    #[getter]
    fn lower(&self) -> Vec<f64> {
        self.inner.space.lower().to_vec()
    }

    #[getter]
    fn upper(&self) -> Vec<f64> {
        self.inner.space.upper().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "TestFunction({:?}, dim={})",
            self.inner.label,
            self.inner.dim()
        )
    }
}

impl PyTestFunction {
    fn build(desc: &FunctionDescriptor) -> PyResult<Self> {
        Ok(Self {
            inner: desc.build().map_err(value_error)?,
        })
    }
}

/// Best-so-far history of one run.
#[pyclass(name = "RunTrace", frozen, from_py_object, module = "sqgde")]
#[derive(Clone)]
struct PyRunTrace {
    inner: sqgde_core::RunTrace,
}

#[pymethods]
impl PyRunTrace {
    #[new]
    fn new(points: Vec<(usize, f64)>, final_evals: usize) -> Self {
        Self {
            inner: sqgde_core::RunTrace {
                points: points
                    .into_iter()
                    .map(|(eval, best)| TracePoint { eval, best })
                    .collect(),
                final_evals,
            },
        }
    }

    #[getter]
    fn points(&self) -> Vec<(usize, f64)> {
        self.inner.points.iter().map(|p| (p.eval, p.best)).collect()
    }

    #[getter]
    fn final_evals(&self) -> usize {
        self.inner.final_evals
    }

    #[getter]
    fn final_best(&self) -> Option<f64> {
        self.inner.final_best()
    }

    fn best_at(&self, eval: usize) -> Option<f64> {
        self.inner.best_at(eval)
    }

    fn first_hit_below(&self, target: f64) -> Option<usize> {
        self.inner.first_hit_below(target)
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "RunTrace(points={}, final_evals={}, final_best={:?})",
            self.inner.points.len(),
            self.inner.final_evals,
            self.inner.final_best()
        )
    }
}

/// Differential evolution. `strategy` is `rand1_exp`, `best2_bin` or `sqg_best_w_bin`.
#[pyfunction]
#[pyo3(signature = (function, t_max=1000, seed=0, *, strategy="sqg_best_w_bin", f=0.8, cr=0.8, w=5, pop_size=100))]
#[allow(clippy::too_many_arguments)]
fn run_de(
    py: Python<'_>,
    function: PyRef<'_, PyTestFunction>,
    t_max: usize,
    seed: u64,
    strategy: &str,
    f: f64,
    cr: f64,
    w: usize,
    pop_size: usize,
) -> PyResult<PyRunTrace> {
    let strategy: Strategy =
        serde_json::from_value(serde_json::Value::String(strategy.into())).map_err(value_error)?;
    let config = DEConfig {
        strategy,
        f,
        cr,
        w,
        pop_size,
    };
    let objective = &function.inner;
    let trace = py
        .detach(|| algos::run_de(&config, objective, t_max, seed))
        .map_err(value_error)?;
    Ok(PyRunTrace { inner: trace })
}

/// Stochastic quasi-gradient descent from a random warm start. `delta` and
/// `step0` are fractions of the mean bound range.
#[pyfunction]
#[pyo3(signature = (function, t_max=1000, seed=0, *, r=5, delta=0.01, step0=0.1, decay=0.95, warm_start_samples=100))]
#[allow(clippy::too_many_arguments)]
fn run_sqg(
    py: Python<'_>,
    function: PyRef<'_, PyTestFunction>,
    t_max: usize,
    seed: u64,
    r: usize,
    delta: f64,
    step0: f64,
    decay: f64,
    warm_start_samples: usize,
) -> PyResult<PyRunTrace> {
    let config = SQGConfig {
        r,
        delta,
        step0,
        decay,
        warm_start_samples,
    };
    let objective = &function.inner;
    let trace = py
        .detach(|| algos::run_sqg(&config, objective, t_max, seed))
        .map_err(value_error)?;
    Ok(PyRunTrace { inner: trace })
}

/// SQG donor from `x_best` and `(x_b, y_b, x_c, y_c)` pairs.
#[pyfunction]
#[pyo3(signature = (x_best, pairs, f=0.8, min_weighted_norm=0.0))]
fn sqg_mutant<'py>(
    py: Python<'py>,
    x_best: Vec<f64>,
    pairs: Vec<(Vec<f64>, f64, Vec<f64>, f64)>,
    f: f64,
    min_weighted_norm: f64,
) -> PyResult<Bound<'py, PyDict>> {
    if pairs.is_empty() {
        return Err(value_error("at least one pair is required"));
    }
    let dim = x_best.len();
    if pairs
        .iter()
        .any(|(b, _, c, _)| b.len() != dim || c.len() != dim)
    {
        return Err(value_error("every pair vector must match x_best in length"));
    }
    let refs: Vec<DifferencePair<'_>> = pairs
        .iter()
        .map(|(x_b, y_b, x_c, y_c)| DifferencePair {
            x_b,
            y_b: *y_b,
            x_c,
            y_c: *y_c,
        })
        .collect();
    let d = algos::sqg_mutant(&x_best, &refs, f, min_weighted_norm);
    let out = PyDict::new(py);
    out.set_item("donor", d.donor)?;
    out.set_item("weighted_sum", d.weighted_sum)?;
    out.set_item("phi", d.phi)?;
    out.set_item("fallback", d.fallback)?;
    Ok(out)
}

#[pyfunction]
fn expected_running_time<'py>(
    py: Python<'py>,
    traces: Vec<PyRunTrace>,
    f_target: f64,
    t_max: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let traces: Vec<_> = traces.into_iter().map(|t| t.inner).collect();
    let r = metrics::expected_running_time(&traces, f_target, t_max);
    let out = PyDict::new(py);
    out.set_item("ert", r.value.value())?;
    out.set_item("lower_bound", r.value.is_lower_bound())?;
    out.set_item("success_rate", r.success_rate)?;
    out.set_item("n_success", r.n_success)?;
    out.set_item("n_total", r.n_total)?;
    Ok(out)
}

/// Mean best value of `reps` uniform random searches of `budget` samples.
#[pyfunction]
#[pyo3(signature = (function, budget=1000, reps=100, seed=0))]
fn estimate_rse_target(
    py: Python<'_>,
    function: PyRef<'_, PyTestFunction>,
    budget: usize,
    reps: usize,
    seed: u64,
) -> PyResult<f64> {
    let objective = &function.inner;
    let t = py
        .detach(|| metrics::estimate_rse_target(&objective.label, objective, budget, reps, seed))
        .map_err(value_error)?;
    Ok(t.value)
}

/// Two-sided paired Wilcoxon signed rank test of `a - b`.
#[pyfunction]
fn wilcoxon_signed_rank<'py>(
    py: Python<'py>,
    a: Vec<f64>,
    b: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = stats::wilcoxon_signed_rank(&a, &b).map_err(value_error)?;
    let method = match r.method {
        stats::PValueMethod::ExactEnumeration => "exact",
        stats::PValueMethod::NormalApproximation => "normal",
    };
    let out = PyDict::new(py);
    out.set_item("w_plus", r.w_plus)?;
    out.set_item("n_effective", r.n_effective)?;
    out.set_item("p_value", r.p_value)?;
    out.set_item("method", method)?;
    out.set_item("significant", r.significant)?;
    Ok(out)
}

#[pymodule]
fn sqgde(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTestFunction>()?;
    m.add_class::<PyRunTrace>()?;
    m.add_function(wrap_pyfunction!(run_de, m)?)?;
    m.add_function(wrap_pyfunction!(run_sqg, m)?)?;
    m.add_function(wrap_pyfunction!(sqg_mutant, m)?)?;
    m.add_function(wrap_pyfunction!(expected_running_time, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_rse_target, m)?)?;
    m.add_function(wrap_pyfunction!(wilcoxon_signed_rank, m)?)?;
    Ok(())
}
