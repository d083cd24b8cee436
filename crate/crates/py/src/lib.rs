//! Python bindings. Exact values cross the boundary as strings such as `"3/8"`.

use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;

use cubefill_core::analysis::{lemma21_crossover, lemma21_term};
use cubefill_core::whitney::{bump_g as bump, shrunken_side as side};
use cubefill_core::{Curve, CubeAddress, Error, Rational, WhitneyMap};

const DEFAULT_BUDGET: u128 = 1 << 22;

fn err(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } => PyMemoryError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse(v: &[String]) -> PyResult<Vec<Rational>> {
    v.iter().map(|s| s.parse::<Rational>().map_err(err)).collect()
}

fn show(v: &[Rational]) -> Vec<String> {
    v.iter().map(|r| r.to_string()).collect()
}

fn cube(dim: u32, digits: Vec<u32>) -> PyResult<CubeAddress> {
    CubeAddress::new(dim, digits).map_err(err)
}

/// The cube-preserving curve `[0,1] -> [0,1]^n`.
#[pyclass(name = "Curve", module = "cubefill", frozen)]
struct PyCurve {
    inner: Curve,
}

#[pymethods]
impl PyCurve {
    #[new]
    fn new(n: u32) -> PyResult<Self> {
        Ok(PyCurve { inner: Curve::new(n).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.dim()
    }

    /// Cubes of depth `s` in curve order, as lists of 1-based digits.
    #[pyo3(signature = (s, budget = DEFAULT_BUDGET))]
    fn order(&self, s: usize, budget: u128) -> PyResult<Vec<Vec<u32>>> {
        let order = self.inner.order(s, budget).map_err(err)?;
        Ok(order.into_iter().map(|o| o.addr.digits().to_vec()).collect())
    }

    /// Rank of the depth-`s` cube containing `point`.
    fn encode(&self, point: Vec<String>, s: usize) -> PyResult<u128> {
        self.inner.encode(&parse(&point)?, s).map_err(err)
    }

    /// Lower corner of the cube of rank `rank` at depth `s`.
    fn decode(&self, rank: u128, s: usize) -> PyResult<Vec<String>> {
        let addr = self.inner.decode(rank, s).map_err(err)?;
        Ok(addr.corner().iter().map(|d| d.to_rational().to_string()).collect())
    }

    /// Image of the parameter `t`, exact when the digits of `t` are eventually periodic.
    fn point(&self, t: &str) -> PyResult<Vec<String>> {
        let t: Rational = t.parse().map_err(err)?;
        Ok(show(&self.inner.point(&t).map_err(err)?))
    }

    /// Image cube of a binary parameter interval (digits 1 or 2, length a multiple of n).
    fn cube_of(&self, digits: Vec<u32>) -> PyResult<Vec<u32>> {
        let addr = cube(1, digits)?;
        Ok(self.inner.fn_cube(&addr).map_err(err)?.digits().to_vec())
    }
}

/// The smooth map `p: [0,1]^m -> [0,1]^n`.
#[pyclass(name = "WhitneyMap", module = "cubefill", frozen)]
struct PyWhitneyMap {
    inner: WhitneyMap,
}

#[pymethods]
impl PyWhitneyMap {
    #[new]
    #[pyo3(signature = (m, n, depth, precision = 128))]
    fn new(m: u32, n: u32, depth: usize, precision: usize) -> PyResult<Self> {
        Ok(PyWhitneyMap { inner: WhitneyMap::with_precision(m, n, depth, precision).map_err(err)? })
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    /// Returns `(exact, approx, error_bound)`; `exact` is `None` when only
    /// an approximation is available.
    fn eval_p(&self, x: Vec<String>) -> PyResult<(Option<Vec<String>>, Vec<f64>, f64)> {
        let v = self.inner.eval_p(&parse(&x)?).map_err(err)?;
        Ok((v.exact.as_deref().map(show), v.to_f64(), v.error_bound))
    }

    /// Image cube of a shrunken cube, both as digit lists.
    fn cube_image(&self, digits: Vec<u32>) -> PyResult<Vec<u32>> {
        let addr = cube(self.inner.m(), digits)?;
        Ok(self.inner.cube_image(&addr).map_err(err)?.digits().to_vec())
    }

    /// Counts of the joining-segment construction: `(segments, skeleton, passed)`.
    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn build_e(&self, budget: u128) -> PyResult<(usize, usize, bool)> {
        let arcs = self.inner.build_e(budget).map_err(err)?;
        Ok((arcs.segments.len(), arcs.skeleton.len(), arcs.passed()))
    }

    /// Whether every cube of depth `s` in the target is hit; returns the misses too.
    #[pyo3(signature = (s, budget = DEFAULT_BUDGET))]
    fn surjectivity_check(&self, s: usize, budget: u128) -> PyResult<(bool, Vec<Vec<u32>>)> {
        let (ok, missing) = self.inner.surjectivity_check(s, budget).map_err(err)?;
        Ok((ok, missing.into_iter().map(|c| c.digits().to_vec()).collect()))
    }
}

/// Side length of a shrunken cube at level `s`, as an exact string.
#[pyfunction]
fn shrunken_side(s: usize) -> PyResult<String> {
    Ok(side(s).map_err(err)?.to_string())
}

#[pyfunction]
fn bump_g(t: f64) -> f64 {
    bump(t)
}

#[pyfunction]
#[pyo3(signature = (m, n, k, j, precision = 128))]
fn series_term(m: u32, n: u32, k: f64, j: usize, precision: usize) -> PyResult<f64> {
    Ok(cubefill_core::real::to_f64(&lemma21_term(m, n, k, j, precision).map_err(err)?))
}

/// First index from which the majorant series decreases.
#[pyfunction]
#[pyo3(signature = (m, n, k, precision = 128))]
fn series_crossover(m: u32, n: u32, k: f64, precision: usize) -> PyResult<usize> {
    lemma21_crossover(m, n, k, precision).map_err(err)
}

#[pymodule]
fn cubefill(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_class::<PyWhitneyMap>()?;
    m.add_function(wrap_pyfunction!(shrunken_side, m)?)?;
    m.add_function(wrap_pyfunction!(bump_g, m)?)?;
    m.add_function(wrap_pyfunction!(series_term, m)?)?;
    m.add_function(wrap_pyfunction!(series_crossover, m)?)?;
    Ok(())
}
