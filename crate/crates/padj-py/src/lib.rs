//! Python bindings for the permutation-adjacency toolkit. Exposes the
//! permutation type, count tables, exact distance search and the
//! estimation model. Build as a cdylib; `python/smoke_test.py` shows the
//! intended usage.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use padj_core::blockmoves::{
    self, BlockMove, BlockMoveKind, DEFAULT_SEARCH_LIMIT, MAX_SOLVER_SIZE,
};
use padj_core::counting;
use padj_core::estimator;
use padj_core::permutation::{self, AdjacencyType, DEFAULT_ORACLE_LIMIT};
use padj_core::rational_to_f64;

fn to_py_err(e: padj_core::Error) -> PyErr {
    match e {
        padj_core::Error::Inconsistency(_) | padj_core::Error::Cache(_) | padj_core::Error::Io(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_type(t: &str) -> PyResult<AdjacencyType> {
    t.parse().map_err(to_py_err)
}

fn parse_kind(k: &str) -> PyResult<BlockMoveKind> {
    k.parse().map_err(to_py_err)
}

fn parse_move(n: usize, cuts: (usize, usize, usize)) -> PyResult<BlockMove> {
    let m = BlockMove::new(cuts.0, cuts.1, cuts.2).map_err(to_py_err)?;
    if cuts.2 > n + 1 {
        return Err(PyValueError::new_err(format!(
            "cut points {cuts:?} do not fit size {n}"
        )));
    }
    Ok(m)
}

/// A permutation of 0..n-1.
#[pyclass(name = "Permutation", frozen, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPermutation {
    inner: permutation::Permutation,
}

#[pymethods]
impl PyPermutation {
    /// Accepts a list of symbols or a comma-separated literal.
    #[new]
    fn new(arg: Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = if let Ok(text) = arg.extract::<String>() {
            permutation::Permutation::parse(&text).map_err(to_py_err)?
        } else {
            let symbols: Vec<u8> = arg.extract()?;
            permutation::Permutation::new(symbols).map_err(to_py_err)?
        };
        Ok(PyPermutation { inner })
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyPermutation {
            inner: permutation::Permutation::identity(n),
        }
    }

    #[staticmethod]
    fn reversed(n: usize) -> Self {
        PyPermutation {
            inner: permutation::Permutation::reversed(n),
        }
    }

    fn symbols(&self) -> Vec<u8> {
        self.inner.symbols().to_vec()
    }

    fn count_adjacencies(&self, adjacency_type: &str) -> PyResult<usize> {
        Ok(self.inner.count_adjacencies(parse_type(adjacency_type)?))
    }

    fn reduce(&self, adjacency_type: &str) -> PyResult<Self> {
        Ok(PyPermutation {
            inner: self.inner.reduce(parse_type(adjacency_type)?),
        })
    }

    fn rank(&self) -> u64 {
        self.inner.rank()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Permutation(\"{}\")", self.inner)
    }
}

#[pyfunction]
fn unrank(n: usize, r: u64) -> PyResult<PyPermutation> {
    Ok(PyPermutation {
        inner: permutation::Permutation::unrank(n, r).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn mirror_canonicalize(values: Vec<i64>) -> PyResult<PyPermutation> {
    Ok(PyPermutation {
        inner: permutation::mirror_canonicalize(&values).map_err(to_py_err)?,
    })
}

/// Every permutation of size n with exactly k adjacencies, lexicographic.
#[pyfunction]
#[pyo3(signature = (n, k, adjacency_type, limit = DEFAULT_ORACLE_LIMIT))]
fn enumerate_class(
    n: usize,
    k: usize,
    adjacency_type: &str,
    limit: usize,
) -> PyResult<Vec<PyPermutation>> {
    let t = parse_type(adjacency_type)?;
    Ok(
        permutation::enumerate_class_with_limit(n, k, t, limit)
            .map_err(to_py_err)?
            .into_iter()
            .map(|p| PyPermutation { inner: p })
            .collect(),
    )
}

/// Rows f(n, 0..=n+delta) for n = 1..=n_max, as exact integers.
#[pyfunction]
fn count_table(n_max: usize, adjacency_type: &str) -> PyResult<Vec<Vec<BigInt>>> {
    let table =
        counting::build_count_table(n_max, parse_type(adjacency_type)?).map_err(to_py_err)?;
    Ok((1..=n_max)
        .map(|n| table.row(n).expect("row in range").to_vec())
        .collect())
}

#[pyfunction]
fn derangements(n_max: usize) -> Vec<BigInt> {
    counting::derangements(n_max)
}

#[pyfunction]
fn tanny_count(n: usize, k: usize) -> PyResult<BigInt> {
    counting::tanny_count(n, k).map_err(to_py_err)
}

#[pyfunction]
fn whitworth_zero_count(n: usize) -> PyResult<BigInt> {
    counting::whitworth_zero_count(n).map_err(to_py_err)
}

#[pyfunction]
fn irreducible_fraction(n: usize, adjacency_type: &str) -> PyResult<f64> {
    let table = counting::build_count_table(n.max(2), parse_type(adjacency_type)?)
        .map_err(to_py_err)?;
    Ok(rational_to_f64(
        &table.irreducible_fraction(n).map_err(to_py_err)?,
    ))
}

#[pyfunction]
fn vector_alphabet_size(n: usize, adjacency_type: &str) -> PyResult<BigInt> {
    let table = counting::build_count_table(n.max(2), parse_type(adjacency_type)?)
        .map_err(to_py_err)?;
    table.vector_alphabet_size(n).map_err(to_py_err)
}

#[pyfunction]
fn generate_moves(n: usize, kind: &str) -> PyResult<Vec<(usize, usize, usize)>> {
    Ok(blockmoves::generate_moves(n, parse_kind(kind)?)
        .iter()
        .map(|m| m.cuts())
        .collect())
}

#[pyfunction]
fn apply_move(p: &PyPermutation, cuts: (usize, usize, usize)) -> PyResult<PyPermutation> {
    let m = parse_move(p.inner.len(), cuts)?;
    Ok(PyPermutation {
        inner: blockmoves::apply_move(&p.inner, &m).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn adjacency_delta(
    p: &PyPermutation,
    cuts: (usize, usize, usize),
    adjacency_type: &str,
) -> PyResult<i64> {
    let m = parse_move(p.inner.len(), cuts)?;
    blockmoves::adjacency_delta(&p.inner, &m, parse_type(adjacency_type)?).map_err(to_py_err)
}

#[pyfunction]
fn double_feasible_prefix(p: &PyPermutation) -> PyResult<bool> {
    blockmoves::double_feasible_prefix(&p.inner).map_err(to_py_err)
}

/// Exact distances from the identity for all of P_n.
#[pyclass(name = "DistanceTable", frozen)]
struct PyDistanceTable {
    inner: blockmoves::DistanceTable,
}

#[pymethods]
impl PyDistanceTable {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    #[getter]
    fn diameter(&self) -> u8 {
        self.inner.diameter()
    }

    fn distance(&self, p: &PyPermutation) -> PyResult<u8> {
        self.inner.distance(&p.inner).map_err(to_py_err)
    }

    /// (k, class size, average distance or None) per adjacency class.
    fn class_stats(&self) -> Vec<(usize, u64, Option<f64>)> {
        self.inner
            .class_stats()
            .iter()
            .map(|s| (s.k, s.count, s.average().map(|a| rational_to_f64(&a))))
            .collect()
    }

    fn average_moves_zero(&self) -> PyResult<f64> {
        Ok(rational_to_f64(
            &self.inner.average_moves_zero().map_err(to_py_err)?,
        ))
    }

    fn expected_moves_exact(&self) -> f64 {
        rational_to_f64(&self.inner.expected_moves_exact())
    }
}

#[pyfunction]
#[pyo3(signature = (n, kind, limit = DEFAULT_SEARCH_LIMIT, workers = 1))]
fn bfs_distances(n: usize, kind: &str, limit: usize, workers: usize) -> PyResult<PyDistanceTable> {
    Ok(PyDistanceTable {
        inner: blockmoves::bfs_distances_with(n, parse_kind(kind)?, limit, workers)
            .map_err(to_py_err)?,
    })
}

/// Optimal move sequence sorting p (full table for small sizes, iterative
/// deepening up to size 12).
#[pyfunction]
fn solve(p: &PyPermutation, kind: &str) -> PyResult<Vec<(usize, usize, usize)>> {
    let k = parse_kind(kind)?;
    let n = p.inner.len();
    let seq = if n <= DEFAULT_SEARCH_LIMIT {
        let table = blockmoves::bfs_distances(n, k).map_err(to_py_err)?;
        blockmoves::solve_via_table(&p.inner, &table).map_err(to_py_err)?
    } else if n <= MAX_SOLVER_SIZE {
        blockmoves::solve_iterative_deepening(&p.inner, k).map_err(to_py_err)?
    } else {
        return Err(PyValueError::new_err(format!(
            "solve accepts sizes up to {MAX_SOLVER_SIZE}, got {n}"
        )));
    };
    Ok(seq.iter().map(|m| m.cuts()).collect())
}

#[pyfunction]
fn sigma(n: usize) -> PyResult<f64> {
    Ok(rational_to_f64(&estimator::sigma(n).map_err(to_py_err)?))
}

#[pyfunction]
#[pyo3(signature = (n, mode = "limiting"))]
fn psi(n: usize, mode: &str) -> PyResult<f64> {
    let m: estimator::PsiMode = mode.parse().map_err(to_py_err)?;
    Ok(rational_to_f64(&estimator::psi(n, m).map_err(to_py_err)?))
}

#[pyfunction]
#[pyo3(signature = (n, limit = DEFAULT_ORACLE_LIMIT))]
fn empirical_double_probability(n: usize, limit: usize) -> PyResult<f64> {
    Ok(rational_to_f64(
        &estimator::empirical_double_probability(n, limit).map_err(to_py_err)?,
    ))
}

/// Base averages and expected values: exact to `limit`, model beyond.
#[pyclass(name = "EstimateModel", frozen)]
struct PyEstimateModel {
    inner: estimator::EstimateModel,
}

#[pymethods]
impl PyEstimateModel {
    #[getter]
    fn limit(&self) -> usize {
        self.inner.limit
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.inner.n_max
    }

    /// base[n] for n = 0..=n_max.
    fn base(&self) -> Vec<f64> {
        self.inner.base.iter().map(rational_to_f64).collect()
    }

    /// E(X_n) for n = 0..=n_max.
    fn expected(&self) -> Vec<f64> {
        self.inner.expected.iter().map(rational_to_f64).collect()
    }

    fn is_predicted(&self, n: usize) -> bool {
        self.inner.is_predicted(n)
    }
}

#[pyfunction]
#[pyo3(signature = (kind, limit, n_max, psi_mode = "limiting", workers = 1))]
fn estimate_model(
    kind: &str,
    limit: usize,
    n_max: usize,
    psi_mode: &str,
    workers: usize,
) -> PyResult<PyEstimateModel> {
    let mode: estimator::PsiMode = psi_mode.parse().map_err(to_py_err)?;
    Ok(PyEstimateModel {
        inner: estimator::build_model_uncached(parse_kind(kind)?, limit, n_max, mode, workers)
            .map_err(to_py_err)?,
    })
}

#[pymodule]
fn padj(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPermutation>()?;
    m.add_class::<PyDistanceTable>()?;
    m.add_class::<PyEstimateModel>()?;
    m.add_function(wrap_pyfunction!(unrank, m)?)?;
    m.add_function(wrap_pyfunction!(mirror_canonicalize, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_class, m)?)?;
    m.add_function(wrap_pyfunction!(count_table, m)?)?;
    m.add_function(wrap_pyfunction!(derangements, m)?)?;
    m.add_function(wrap_pyfunction!(tanny_count, m)?)?;
    m.add_function(wrap_pyfunction!(whitworth_zero_count, m)?)?;
    m.add_function(wrap_pyfunction!(irreducible_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(vector_alphabet_size, m)?)?;
    m.add_function(wrap_pyfunction!(generate_moves, m)?)?;
    m.add_function(wrap_pyfunction!(apply_move, m)?)?;
    m.add_function(wrap_pyfunction!(adjacency_delta, m)?)?;
    m.add_function(wrap_pyfunction!(double_feasible_prefix, m)?)?;
    m.add_function(wrap_pyfunction!(bfs_distances, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_double_probability, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_model, m)?)?;
    m.add("DEFAULT_ORACLE_LIMIT", DEFAULT_ORACLE_LIMIT)?;
    m.add("DEFAULT_SEARCH_LIMIT", DEFAULT_SEARCH_LIMIT)?;
    Ok(())
}
