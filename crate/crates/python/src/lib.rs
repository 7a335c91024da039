//! Python bindings. The extension module is named `johnson_pst`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use johnson_pst::design::{design as core_design, hamiltonian_in_adjacency_basis, DesignInput, PstDesign};
use johnson_pst::document::DesignDocument;
use johnson_pst::evolution::{fidelity_sweep, AmplitudeEvaluator};
use johnson_pst::exact::ExactSpectrum;
use johnson_pst::graph::{JohnsonGraph, DEFAULT_DENSE_CAP};
use johnson_pst::spectral::Spectrum;
use johnson_pst::spin::{heisenberg_oracle, OracleCaps, DEFAULT_SPIN_CAP};
use johnson_pst::verify::{verify_design, Oracle, CERTIFY_TOL};
use johnson_pst::PstError;

create_exception!(johnson_pst, CapacityError, PyException);
create_exception!(johnson_pst, NumericalError, PyException);

fn to_py(e: PstError) -> PyErr {
    match e {
        PstError::Domain(_) | PstError::Document(_) => PyValueError::new_err(e.to_string()),
        PstError::Capacity { .. } => CapacityError::new_err(e.to_string()),
        _ => NumericalError::new_err(e.to_string()),
    }
}

fn caps(dense_cap: Option<u128>, spin_cap: Option<u128>) -> OracleCaps {
    OracleCaps {
        dense: dense_cap.unwrap_or(DEFAULT_DENSE_CAP),
        spin: spin_cap.unwrap_or(DEFAULT_SPIN_CAP),
    }
}

/// Coupling design on J(2m, m) for transfer at `t0` with phase `theta`.
#[pyclass(name = "Design", module = "johnson_pst", frozen)]
struct PyDesign {
    inner: PstDesign,
    spectrum: Spectrum,
}

impl PyDesign {
    fn wrap(inner: PstDesign) -> PyResult<Self> {
        let spectrum = Spectrum::johnson(inner.m()).map_err(to_py)?;
        Ok(Self { inner, spectrum })
    }
}

#[pymethods]
impl PyDesign {
    #[new]
    #[pyo3(signature = (m, t0 = 1.0, theta = 0.0, l_offsets = None))]
    fn new(m: u32, t0: f64, theta: f64, l_offsets: Option<Vec<i64>>) -> PyResult<Self> {
        let mut input = DesignInput::new(m).t0(t0).theta(theta);
        if let Some(l) = l_offsets {
            input = input.offsets(l);
        }
        let (inner, spectrum) = core_design(&input).map_err(to_py)?;
        Ok(Self { inner, spectrum })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::wrap(DesignDocument::from_json(text).map_err(to_py)?.design)
    }

    fn to_json(&self) -> PyResult<String> {
        DesignDocument::new(self.inner.clone()).to_json().map_err(to_py)
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn t0(&self) -> f64 {
        self.inner.input.t0
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.input.theta
    }

    #[getter]
    fn l_offsets(&self) -> Vec<i64> {
        self.inner.input.l_offsets.clone()
    }

    #[getter]
    fn f_bits(&self) -> Vec<u8> {
        self.inner.f_bits.clone()
    }

    #[getter]
    fn support(&self) -> Vec<f64> {
        self.inner.measure.points.clone()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.measure.weights.clone()
    }

    #[getter]
    fn couplings(&self) -> Vec<f64> {
        self.inner.couplings.clone()
    }

    #[getter]
    fn hamiltonian_eigenvalues(&self) -> Vec<f64> {
        self.inner.hamiltonian_eigenvalues.clone()
    }

    /// Copy of this design with replaced couplings; stored energies kept.
    fn with_couplings(&self, couplings: Vec<f64>) -> PyResult<Self> {
        if couplings.len() != self.inner.couplings.len() {
            return Err(PyValueError::new_err("wrong number of couplings"));
        }
        let mut inner = self.inner.clone();
        inner.couplings = couplings;
        Ok(Self {
            inner,
            spectrum: self.spectrum.clone(),
        })
    }

    /// `c_0..c_m` with `H = sum_j c_j A^j`.
    fn adjacency_coefficients(&self) -> Vec<f64> {
        hamiltonian_in_adjacency_basis(&self.inner, &self.spectrum.qd)
    }

    /// Stratum amplitudes `f_0(t)..f_m(t)`.
    fn amplitudes(&self, t: f64) -> PyResult<Vec<Complex64>> {
        Ok(AmplitudeEvaluator::new(&self.inner, &self.spectrum.eigen)
            .map_err(to_py)?
            .at(t))
    }

    /// `(times, amplitudes)` on a uniform grid.
    fn sweep(&self, t_min: f64, t_max: f64, steps: usize) -> PyResult<(Vec<f64>, Vec<Vec<Complex64>>)> {
        let s = fidelity_sweep(&self.inner, &self.spectrum.eigen, t_min, t_max, steps).map_err(to_py)?;
        Ok((s.times, s.amplitudes))
    }

    /// Certification report; `oracle` is one of spectral, dense, heisenberg, all.
    #[pyo3(signature = (oracle = "all", tol = CERTIFY_TOL, dense_cap = None, spin_cap = None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        oracle: &str,
        tol: f64,
        dense_cap: Option<u128>,
        spin_cap: Option<u128>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let oracles = match oracle {
            "spectral" => vec![Oracle::Spectral],
            "dense" => vec![Oracle::Dense],
            "heisenberg" => vec![Oracle::Heisenberg],
            "all" => Oracle::ALL.to_vec(),
            other => return Err(PyValueError::new_err(format!("unknown oracle {other:?}"))),
        };
        let r = verify_design(&self.inner, &oracles, caps(dense_cap, spin_cap), tol).map_err(to_py)?;
        let out = PyDict::new(py);
        out.set_item("passed", r.passed())?;
        out.set_item("leakage", r.leakage())?;
        out.set_item("coupling_residual", r.coupling_residual)?;
        out.set_item("phase_mismatch", r.phase_mismatch)?;
        if let Some(c) = r.spectral {
            out.set_item("spectral_amplitude", c.amplitude)?;
        }
        if let Some(c) = r.dense {
            out.set_item("dense_amplitude", c.amplitude)?;
        }
        if let Some(h) = r.heisenberg {
            out.set_item("ghz_fidelity", h.ghz_fidelity)?;
            out.set_item("relative_phase", h.relative_phase)?;
        }
        Ok(out)
    }

    /// GHZ transfer on `2m` spins at time `t` (default `t0`).
    #[pyo3(signature = (t = None, dense_cap = None, spin_cap = None))]
    fn heisenberg<'py>(
        &self,
        py: Python<'py>,
        t: Option<f64>,
        dense_cap: Option<u128>,
        spin_cap: Option<u128>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let t = t.unwrap_or(self.inner.input.t0);
        let r = heisenberg_oracle(self.inner.m(), &self.inner, t, caps(dense_cap, spin_cap))
            .map_err(to_py)?;
        let out = PyDict::new(py);
        out.set_item("t", r.t)?;
        out.set_item("dimension", r.dimension)?;
        out.set_item("amplitude_to_antipode", r.amplitude_to_antipode)?;
        out.set_item("vacuum_phase", r.vacuum_phase)?;
        out.set_item("ghz_fidelity", r.ghz_fidelity)?;
        out.set_item("global_phase", r.global_phase)?;
        out.set_item("relative_phase", r.relative_phase)?;
        out.set_item("ideal_distance", r.ideal_distance)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Design(m={}, t0={}, theta={}, couplings={:?})",
            self.inner.m(),
            self.inner.input.t0,
            self.inner.input.theta,
            self.inner.couplings
        )
    }
}

/// The Johnson graph J(n, m) on `m`-subsets of `{1..n}`.
#[pyclass(name = "JohnsonGraph", module = "johnson_pst", frozen)]
struct PyJohnsonGraph {
    inner: JohnsonGraph,
}

#[pymethods]
impl PyJohnsonGraph {
    #[new]
    fn new(n: u32, m: u32) -> PyResult<Self> {
        Ok(Self {
            inner: JohnsonGraph::new(n, m).map_err(to_py)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn diameter(&self) -> usize {
        self.inner.diameter()
    }

    fn subset(&self, v: usize) -> PyResult<Vec<usize>> {
        self.check(v)?;
        Ok(self.inner.subset(v))
    }

    fn index_of(&self, subset: Vec<usize>) -> Option<usize> {
        self.inner.index_of(&subset)
    }

    fn distance(&self, u: usize, v: usize) -> PyResult<usize> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.inner.distance(u, v))
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.check(v)?;
        Ok(self.inner.neighbors(v))
    }

    fn antipode(&self, v: usize) -> PyResult<usize> {
        self.check(v)?;
        self.inner.antipode(v).map_err(to_py)
    }

    /// `(b, c)` computed by enumeration.
    fn intersection_numbers(&self) -> PyResult<(Vec<u64>, Vec<u64>)> {
        let ia = self.inner.intersection_numbers().map_err(to_py)?;
        Ok((ia.b, ia.c))
    }
}

impl PyJohnsonGraph {
    fn check(&self, v: usize) -> PyResult<()> {
        if v < self.inner.len() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("vertex {v} out of range")))
        }
    }
}

/// Support, weights and Jacobi parameters of J(2m, m). With `exact=True`
/// values are strings of exact rationals.
#[pyfunction]
#[pyo3(signature = (m, exact = false))]
fn spectrum<'py>(py: Python<'py>, m: u32, exact: bool) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    if exact {
        let sp = ExactSpectrum::johnson(m).map_err(to_py)?;
        let s = |v: &[num_rational::BigRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        out.set_item("support", s(&sp.points))?;
        out.set_item("weights", s(&sp.weights))?;
        out.set_item("alpha", s(&sp.qd.alpha))?;
        out.set_item("omega", s(&sp.qd.omega))?;
    } else {
        let sp = Spectrum::johnson(m).map_err(to_py)?;
        out.set_item("support", sp.measure().points.clone())?;
        out.set_item("weights", sp.measure().weights.clone())?;
        out.set_item("alpha", sp.qd.alpha().to_vec())?;
        out.set_item("omega", sp.qd.omega().to_vec())?;
    }
    Ok(out)
}

#[pymodule]
#[pyo3(name = "johnson_pst")]
fn extension(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyDesign>()?;
    m.add_class::<PyJohnsonGraph>()?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    Ok(())
}
