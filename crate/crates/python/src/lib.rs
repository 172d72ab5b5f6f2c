//! Python bindings: algebra contexts, formal characters, graded modules and
//! the multiplicity computations.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use cartan_core::algebra::{check_generation, jacobi_check, semi_infinite_check, Algebra, AlgebraContext, Family};
use cartan_core::character::FormalCharacter;
use cartan_core::modules::{
    build_costandard, build_standard, composition_multiplicities, simple_character, verify_complex,
    verify_module_axiom, GradedModule,
};
use cartan_core::tilting;
use cartan_core::weights::{exceptional_weights, weyl_dim, Weight};

fn py_err(e: cartan_core::Error) -> PyErr {
    match e {
        cartan_core::Error::Inconsistent(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

#[pyclass(name = "Context", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PyContext {
    inner: AlgebraContext,
}

impl PyContext {
    fn weight(&self, coords: Vec<i64>) -> PyResult<Weight> {
        Weight::new(self.inner, coords).map_err(py_err)
    }
}

#[pymethods]
impl PyContext {
    /// `Context("W", 2)`; `n` is the number of variables (2r for H).
    #[new]
    fn new(family: &str, n: usize) -> PyResult<Self> {
        let family: Family = family.parse().map_err(py_err)?;
        Ok(PyContext {
            inner: AlgebraContext::new(family, n).map_err(py_err)?,
        })
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family().to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn weight_len(&self) -> usize {
        self.inner.weight_len()
    }

    fn dim(&self, degree: i32) -> usize {
        Algebra::shared(self.inner).dim(degree)
    }

    /// Basis of `𝔤_[degree]` in term grammar.
    fn basis(&self, degree: i32) -> Vec<String> {
        let slice = Algebra::shared(self.inner).slice(degree);
        slice.basis().iter().map(|v| v.to_string()).collect()
    }

    fn exceptional_weights(&self) -> Vec<Vec<i64>> {
        exceptional_weights(self.inner).iter().map(|w| w.coords().to_vec()).collect()
    }

    /// Canonical representative of a weight.
    fn canonical(&self, coords: Vec<i64>) -> PyResult<Vec<i64>> {
        Ok(self.weight(coords)?.coords().to_vec())
    }

    fn jacobi_check(&self, max_degree: i32) -> bool {
        jacobi_check(&Algebra::shared(self.inner), max_degree).all_pass
    }

    fn semi_infinite_check(&self) -> bool {
        semi_infinite_check(&Algebra::shared(self.inner)).all_pass
    }

    fn check_generation(&self, i: i32) -> bool {
        check_generation(&Algebra::shared(self.inner), i).all_pass
    }

    fn weyl_dim(&self, weight: Vec<i64>) -> PyResult<u64> {
        weyl_dim(&self.weight(weight)?).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Context('{}', {})", self.inner.family(), self.inner.n())
    }
}

/// Truncated formal character, degree ↦ weight ↦ multiplicity.
#[pyclass(name = "Character", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCharacter {
    inner: FormalCharacter,
}

#[pymethods]
impl PyCharacter {
    #[getter]
    fn truncation(&self) -> usize {
        self.inner.truncation()
    }

    fn get(&self, degree: usize, coords: Vec<i64>) -> PyResult<i64> {
        let w = Weight::new(self.inner.context(), coords).map_err(py_err)?;
        Ok(self.inner.get(degree, &w))
    }

    fn total_dim(&self, degree: usize) -> i64 {
        self.inner.total_dim(degree)
    }

    /// `{degree: {coords tuple: mult}}`.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        for d in 0..=self.inner.truncation() {
            let slice = PyDict::new(py);
            for (w, m) in self.inner.slice(d) {
                slice.set_item(PyTuple::new(py, w.coords())?, *m)?;
            }
            out.set_item(d, slice)?;
        }
        Ok(out)
    }

    fn to_json(&self, object: &str) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_document(object, None)).map_err(json_err)
    }

    fn __add__(&self, other: &PyCharacter) -> PyResult<PyCharacter> {
        Ok(PyCharacter {
            inner: self.inner.add(&other.inner).map_err(py_err)?,
        })
    }

    fn __sub__(&self, other: &PyCharacter) -> PyResult<PyCharacter> {
        Ok(PyCharacter {
            inner: self.inner.sub(&other.inner).map_err(py_err)?,
        })
    }

    fn __mul__(&self, other: &PyCharacter) -> PyResult<PyCharacter> {
        Ok(PyCharacter {
            inner: self.inner.mul(&other.inner).map_err(py_err)?,
        })
    }

    fn __eq__(&self, other: &PyCharacter) -> bool {
        self.inner == other.inner
    }
}

fn wrap(inner: FormalCharacter) -> PyCharacter {
    PyCharacter { inner }
}

/// A truncated standard or costandard module.
#[pyclass(name = "GradedModule", frozen)]
pub struct PyGradedModule {
    inner: GradedModule,
}

#[pymethods]
impl PyGradedModule {
    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    #[getter]
    fn weight(&self) -> Vec<i64> {
        self.inner.lambda().coords().to_vec()
    }

    #[getter]
    fn truncation(&self) -> usize {
        self.inner.truncation()
    }

    fn dim(&self, degree: usize) -> usize {
        self.inner.dim(degree)
    }

    fn character(&self) -> PyCharacter {
        wrap(self.inner.character())
    }

    fn verify_module_axiom(&self, bound: usize) -> PyResult<bool> {
        Ok(verify_module_axiom(&self.inner, bound).map_err(py_err)?.all_pass)
    }

    /// `[(coords, shift, mult)]` from the peel oracle.
    fn composition_multiplicities(&self) -> PyResult<Vec<(Vec<i64>, usize, u64)>> {
        let comp = composition_multiplicities(&self.inner, self.inner.truncation()).map_err(py_err)?;
        Ok(comp
            .factors
            .iter()
            .map(|((w, s), m)| (w.coords().to_vec(), *s, *m))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("GradedModule({}{}, N={})", self.inner.kind(), self.inner.lambda(), self.inner.truncation())
    }
}

#[pyfunction]
fn standard(ctx: &PyContext, weight: Vec<i64>, truncation: usize) -> PyResult<PyGradedModule> {
    Ok(PyGradedModule {
        inner: build_standard(&ctx.weight(weight)?, truncation).map_err(py_err)?,
    })
}

#[pyfunction]
fn costandard(ctx: &PyContext, weight: Vec<i64>, truncation: usize) -> PyResult<PyGradedModule> {
    Ok(PyGradedModule {
        inner: build_costandard(&ctx.weight(weight)?, truncation).map_err(py_err)?,
    })
}

#[pyfunction]
fn pi_product(ctx: &PyContext, truncation: usize) -> PyCharacter {
    wrap(tilting::pi_product(ctx.inner, truncation))
}

#[pyfunction]
fn char_standard(ctx: &PyContext, weight: Vec<i64>, truncation: usize) -> PyResult<PyCharacter> {
    Ok(wrap(tilting::char_standard(&ctx.weight(weight)?, truncation).map_err(py_err)?))
}

#[pyfunction]
fn char_tilting(ctx: &PyContext, weight: Vec<i64>, truncation: usize) -> PyResult<PyCharacter> {
    Ok(wrap(tilting::char_tilting(&ctx.weight(weight)?, truncation).map_err(py_err)?))
}

#[pyfunction(name = "simple_character")]
fn simple(ctx: &PyContext, weight: Vec<i64>, truncation: usize) -> PyResult<PyCharacter> {
    Ok(wrap(simple_character(&ctx.weight(weight)?, truncation).map_err(py_err)?))
}

#[pyfunction]
fn tilting_multiplicity(ctx: &PyContext, lam: Vec<i64>, mu: Vec<i64>) -> PyResult<u64> {
    tilting::tilting_multiplicity(&ctx.weight(lam)?, &ctx.weight(mu)?).map_err(py_err)
}

#[pyfunction]
fn char_tilting_consistency(ctx: &PyContext, weight: Vec<i64>, truncation: usize) -> PyResult<bool> {
    tilting::char_tilting_consistency(&ctx.weight(weight)?, truncation).map_err(py_err)
}

/// The cross-check report as a JSON string.
#[pyfunction]
fn soergel_crosscheck(ctx: &PyContext, lam: Vec<i64>, mu: Vec<i64>, truncation: usize) -> PyResult<String> {
    let rep = tilting::soergel_crosscheck(&ctx.weight(lam)?, &ctx.weight(mu)?, truncation).map_err(py_err)?;
    serde_json::to_string(&rep).map_err(json_err)
}

/// The complex report as a JSON string.
#[pyfunction(name = "verify_complex")]
fn complex(ctx: &PyContext, truncation: usize) -> PyResult<String> {
    let rep = verify_complex(ctx.inner, truncation).map_err(py_err)?;
    serde_json::to_string(&rep).map_err(json_err)
}

#[pymodule]
fn cartan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyContext>()?;
    m.add_class::<PyCharacter>()?;
    m.add_class::<PyGradedModule>()?;
    m.add_function(wrap_pyfunction!(standard, m)?)?;
    m.add_function(wrap_pyfunction!(costandard, m)?)?;
    m.add_function(wrap_pyfunction!(pi_product, m)?)?;
    m.add_function(wrap_pyfunction!(char_standard, m)?)?;
    m.add_function(wrap_pyfunction!(char_tilting, m)?)?;
    m.add_function(wrap_pyfunction!(simple, m)?)?;
    m.add_function(wrap_pyfunction!(tilting_multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(char_tilting_consistency, m)?)?;
    m.add_function(wrap_pyfunction!(soergel_crosscheck, m)?)?;
    m.add_function(wrap_pyfunction!(complex, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_validation() {
        let w2 = PyContext::new("W", 2).unwrap();
        assert_eq!((w2.family(), w2.n(), w2.weight_len()), ("W".to_string(), 2, 2));
        assert_eq!(w2.dim(0), 4);
        assert!(PyContext::new("H", 3).is_err());
        assert!(PyContext::new("K", 2).is_err());
    }

    #[test]
    fn sl_canonical_representative() {
        let s2 = PyContext::new("S", 2).unwrap();
        assert_eq!(s2.canonical(vec![1, 2]).unwrap(), vec![-1, 0]);
    }

    #[test]
    fn module_wrappers() {
        let w2 = PyContext::new("W", 2).unwrap();
        let v = costandard(&w2, vec![0, 0], 3).unwrap();
        assert_eq!(v.kind(), "costandard");
        assert_eq!(v.composition_multiplicities().unwrap(), vec![(vec![0, 0], 0, 1), (vec![0, 1], 1, 1)]);
        assert!(char_tilting_consistency(&w2, vec![-2, -1], 3).unwrap());
    }
}
