//! Python bindings. Rationals cross the boundary as `fractions.Fraction`.

use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use plusminus::bivariate::{biamice_check, bimu_oracle, bimu_value};
use plusminus::cyclotomic::signed_product;
use plusminus::digits::enumerate_r;
use plusminus::distribution::{amice_check, mu_oracle, mu_value, total_mass, verify_additivity};
use plusminus::series::{build_log_pm, verify_product_identity};
use plusminus::verify::{run_suite, Suite};
use plusminus::{BiResidue, BiSign, Error, Prime, SeriesPrecision, Sign};

fn to_py(e: Error) -> PyErr {
    if e.is_resource() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn prime(p: u64) -> PyResult<Prime> {
    Prime::new(p).map_err(to_py)
}

fn parse_sign(s: &str) -> PyResult<Sign> {
    s.parse().map_err(to_py)
}

fn parse_bisign(s: &str) -> PyResult<BiSign> {
    s.parse().map_err(to_py)
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

/// A class `a + p^n Z_p`.
#[pyclass(module = "plusminus", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Residue {
    inner: plusminus::Residue,
}

#[pymethods]
impl Residue {
    #[new]
    fn new(a: i128, p: u64, n: u32) -> PyResult<Self> {
        Ok(Residue { inner: plusminus::Residue::from_integer(a, prime(p)?, n).map_err(to_py)? })
    }

    #[getter]
    fn value(&self) -> u64 {
        self.inner.value()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.prime().get()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    /// Base-p digits, units digit first.
    #[getter]
    fn digits(&self) -> Vec<u64> {
        self.inner.digits().to_vec()
    }

    fn in_s_plus(&self) -> bool {
        self.inner.in_s_plus()
    }

    fn in_s_minus(&self) -> bool {
        self.inner.in_s_minus()
    }

    fn __repr__(&self) -> String {
        format!("Residue({}, p={}, n={})", self.inner.value(), self.p(), self.n())
    }
}

/// `0` or `p^-k`.
#[pyclass(module = "plusminus", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct DistValue {
    inner: plusminus::DistValue,
}

#[pymethods]
impl DistValue {
    #[getter]
    fn zero(&self) -> bool {
        self.inner.is_zero()
    }

    #[getter]
    fn p_val(&self) -> Option<i64> {
        self.inner.p_val()
    }

    fn fraction<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.to_rational())
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("DistValue({})", self.inner)
    }
}

impl From<plusminus::DistValue> for DistValue {
    fn from(inner: plusminus::DistValue) -> Self {
        DistValue { inner }
    }
}

#[pyfunction(name = "mu_value")]
fn py_mu_value(sign: &str, a: i128, p: u64, n: u32) -> PyResult<DistValue> {
    let r = plusminus::Residue::from_integer(a, prime(p)?, n).map_err(to_py)?;
    Ok(mu_value(parse_sign(sign)?, &r).into())
}

#[pyfunction(name = "mu_oracle")]
fn py_mu_oracle(sign: &str, a: i128, p: u64, n: u32) -> PyResult<DistValue> {
    let r = plusminus::Residue::from_integer(a, prime(p)?, n).map_err(to_py)?;
    Ok(mu_oracle(parse_sign(sign)?, &r).map_err(to_py)?.into())
}

fn bi_residue(a: i128, b: i128, p: u64, n: u32, m: u32) -> PyResult<BiResidue> {
    BiResidue::from_integers(a, b, prime(p)?, n, m).map_err(to_py)
}

#[pyfunction(name = "bimu_value")]
fn py_bimu_value(sign: &str, a: i128, b: i128, p: u64, n: u32, m: u32) -> PyResult<DistValue> {
    Ok(bimu_value(parse_bisign(sign)?, &bi_residue(a, b, p, n, m)?).into())
}

#[pyfunction(name = "bimu_oracle")]
fn py_bimu_oracle(sign: &str, a: i128, b: i128, p: u64, n: u32, m: u32) -> PyResult<DistValue> {
    Ok(bimu_oracle(parse_bisign(sign)?, &bi_residue(a, b, p, n, m)?).map_err(to_py)?.into())
}

#[pyfunction(name = "total_mass")]
fn py_total_mass<'py>(py: Python<'py>, sign: &str, p: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &total_mass(parse_sign(sign)?, prime(p)?))
}

#[pyfunction(name = "enumerate_r")]
fn py_enumerate_r(p: u64, count: u32, sign: &str) -> PyResult<Vec<u64>> {
    enumerate_r(prime(p)?, count, parse_sign(sign)?).map_err(to_py)
}

/// `prod Phi_{2j}` (sign "+") or `prod Phi_{2j-1}` (sign "-") as `{exponent: Fraction}`.
#[pyfunction(name = "cyclotomic_product")]
fn py_cyclotomic_product<'py>(
    py: Python<'py>,
    p: u64,
    count: u32,
    sign: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let poly = signed_product(prime(p)?, count, parse_sign(sign)?).map_err(to_py)?;
    let dict = PyDict::new(py);
    for (e, c) in poly.terms() {
        dict.set_item(e, fraction(py, c)?)?;
    }
    Ok(dict)
}

/// `log_p^±` as a list of `(Fraction, guarantee)` pairs; `guarantee` is
/// `None` for exact coefficients.
#[pyfunction(name = "log_series")]
#[pyo3(signature = (sign, p, t_prec = 8, p_prec = 6))]
fn py_log_series<'py>(
    py: Python<'py>,
    sign: &str,
    p: u64,
    t_prec: usize,
    p_prec: i64,
) -> PyResult<Vec<(Bound<'py, PyAny>, Option<i64>)>> {
    let prec = SeriesPrecision::new(t_prec, p_prec).map_err(to_py)?;
    let series = build_log_pm(prime(p)?, parse_sign(sign)?, prec).map_err(to_py)?;
    series.coeffs().iter().map(|c| Ok((fraction(py, &c.value)?, c.guarantee))).collect()
}

#[pyfunction(name = "check_product_identity")]
#[pyo3(signature = (p, t_prec = 8, p_prec = 6))]
fn py_check_product_identity(p: u64, t_prec: usize, p_prec: i64) -> PyResult<bool> {
    let prec = SeriesPrecision::new(t_prec, p_prec).map_err(to_py)?;
    Ok(verify_product_identity(prime(p)?, prec).map_err(to_py)?.pass)
}

#[pyfunction(name = "check_additivity")]
fn py_check_additivity(sign: &str, p: u64, n: u32) -> PyResult<bool> {
    Ok(verify_additivity(parse_sign(sign)?, prime(p)?, n).map_err(to_py)?.pass)
}

#[pyfunction(name = "check_amice")]
fn py_check_amice(sign: &str, k: u32, p: u64, n: u32) -> PyResult<bool> {
    Ok(amice_check(parse_sign(sign)?, k, prime(p)?, n).map_err(to_py)?.pass)
}

#[pyfunction(name = "check_biamice")]
fn py_check_biamice(sign: &str, p: u64, k1: u32, k2: u32, n: u32) -> PyResult<bool> {
    Ok(biamice_check(parse_bisign(sign)?, prime(p)?, k1, k2, n).map_err(to_py)?.pass)
}

/// Runs a verification suite and returns its JSON report.
#[pyfunction(name = "verify")]
#[pyo3(signature = (suite, p, max_n = 3, t_prec = 8, p_prec = 6))]
fn py_verify(suite: &str, p: u64, max_n: u32, t_prec: usize, p_prec: i64) -> PyResult<String> {
    let suite = match suite {
        "oracle" => Suite::Oracle,
        "additivity" => Suite::Additivity,
        "amice" => Suite::Amice,
        "biamice" => Suite::Biamice,
        "logproduct" => Suite::Logproduct,
        "all" => Suite::All,
        other => return Err(PyValueError::new_err(format!("unknown suite {other:?}"))),
    };
    let prec = SeriesPrecision::new(t_prec, p_prec).map_err(to_py)?;
    let report = run_suite(suite, prime(p)?, max_n, prec).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
#[pyo3(name = "plusminus")]
fn plusminus_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("FORMAT_VERSION", plusminus::FORMAT_VERSION)?;
    m.add_class::<Residue>()?;
    m.add_class::<DistValue>()?;
    m.add_function(wrap_pyfunction!(py_mu_value, m)?)?;
    m.add_function(wrap_pyfunction!(py_mu_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(py_bimu_value, m)?)?;
    m.add_function(wrap_pyfunction!(py_bimu_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(py_total_mass, m)?)?;
    m.add_function(wrap_pyfunction!(py_enumerate_r, m)?)?;
    m.add_function(wrap_pyfunction!(py_cyclotomic_product, m)?)?;
    m.add_function(wrap_pyfunction!(py_log_series, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_product_identity, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_additivity, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_amice, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_biamice, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify, m)?)?;
    Ok(())
}
