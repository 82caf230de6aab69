//! Python bindings: domains, eigenpairs, nodal decompositions, constants and
//! experiment runs.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::nlab::experiment::{self, ExperimentConfig};
use ::nlab::nodal::{self, NodalDecomposition, Sign};
use ::nlab::rearrange::{self, SpectralConstants};
use ::nlab::{laplacian, oracle, BoundaryCondition, DomainSpec, GridDomain, SolverOptions, Spectrum};

fn err(e: ::nlab::Error) -> PyErr {
    match e {
        ::nlab::Error::NotConverged { .. } | ::nlab::Error::Factorization(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_bc(bc: &str) -> PyResult<BoundaryCondition> {
    match bc {
        "dirichlet" => Ok(BoundaryCondition::Dirichlet),
        "neumann" => Ok(BoundaryCondition::Neumann),
        _ => Err(PyValueError::new_err(format!("bc must be \"dirichlet\" or \"neumann\", got {bc:?}"))),
    }
}

/// A rasterized planar domain.
#[pyclass(name = "Domain", frozen)]
struct PyDomain {
    inner: GridDomain,
}

#[pymethods]
impl PyDomain {
    /// Build from a JSON spec such as `{"shape": "disk", "radius": 1, "resolution": 64}`.
    #[staticmethod]
    fn from_json(spec: &str) -> PyResult<Self> {
        let spec: DomainSpec = serde_json::from_str(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyDomain { inner: spec.build().map_err(err)? })
    }

    #[staticmethod]
    fn rectangle(width: f64, height: f64, resolution: f64) -> PyResult<Self> {
        Ok(PyDomain { inner: ::nlab::domains::rasterize_rectangle(width, height, resolution).map_err(err)? })
    }

    #[staticmethod]
    fn disk(radius: f64, resolution: f64) -> PyResult<Self> {
        Ok(PyDomain { inner: ::nlab::domains::rasterize_disk(radius, resolution).map_err(err)? })
    }

    #[staticmethod]
    fn lshape(arm: f64, thickness: f64, resolution: f64) -> PyResult<Self> {
        Ok(PyDomain { inner: ::nlab::domains::rasterize_lshape(arm, thickness, resolution).map_err(err)? })
    }

    #[staticmethod]
    fn koch(level: u32, resolution: f64) -> PyResult<Self> {
        Ok(PyDomain { inner: ::nlab::domains::rasterize_koch(level, resolution).map_err(err)? })
    }

    #[getter]
    fn cells(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h()
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.nx(), self.inner.ny())
    }

    /// Row-major interior mask of the bounding grid.
    fn mask(&self) -> Vec<bool> {
        self.inner.mask().to_vec()
    }

    /// Cell centers in the domain's own cell order.
    fn centers(&self) -> Vec<(f64, f64)> {
        (0..self.inner.len()).map(|c| self.inner.center(c)).collect()
    }

    /// Lowest `k` eigenpairs of the Dirichlet or Neumann Laplacian.
    #[pyo3(signature = (k, bc = "dirichlet", tol = 1e-8, seed = 0))]
    fn eigenpairs(&self, py: Python<'_>, k: usize, bc: &str, tol: f64, seed: u64) -> PyResult<PySpectrum> {
        let bc = parse_bc(bc)?;
        let d = self.inner.clone();
        let s = py
            .detach(move || {
                let op = laplacian::assemble(&d, bc)?;
                ::nlab::smallest_eigenpairs(&op, &SolverOptions::new(k).tol(tol).seed(seed))
            })
            .map_err(err)?;
        Ok(PySpectrum { inner: s })
    }

    /// Nodal domains of a grid function given in cell order.
    #[pyo3(signature = (u, tau = 0.0))]
    fn nodal_domains(&self, u: Vec<f64>, tau: f64) -> PyResult<PyNodal> {
        Ok(PyNodal { inner: nodal::nodal_decompose(&self.inner, &u, tau).map_err(err)? })
    }

    /// Pólya–Szegő energies `(E_orig, E_star, ratio)` of a grid function.
    fn polya_szego(&self, u: Vec<f64>) -> PyResult<(f64, f64, f64)> {
        let r = rearrange::polya_szego_check(&self.inner, &u, 2).map_err(err)?;
        Ok((r.e_orig, r.e_star, r.ratio))
    }

    fn __repr__(&self) -> String {
        format!("Domain({}, cells={}, h={})", self.inner.shape_tag(), self.inner.len(), self.inner.h())
    }
}

/// Eigenvalues and grid-normalized eigenvectors.
#[pyclass(name = "Spectrum", frozen)]
struct PySpectrum {
    inner: Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues.clone()
    }

    #[getter]
    fn residuals(&self) -> Vec<f64> {
        self.inner.residual_norms.clone()
    }

    fn eigenvector(&self, i: usize) -> PyResult<Vec<f64>> {
        self.inner
            .eigenvectors
            .get(i)
            .cloned()
            .ok_or_else(|| PyValueError::new_err(format!("index {i} out of range")))
    }

    fn __len__(&self) -> usize {
        self.inner.k()
    }

    /// Weyl analysis as `(limit_estimate, target, relative_deviation)`.
    fn weyl(&self, area: f64) -> PyResult<(f64, f64, f64)> {
        let w = rearrange::weyl_analysis(&self.inner, area, 2).map_err(err)?;
        Ok((w.limit_estimate, w.target, w.relative_deviation))
    }
}

/// Labels (0 = nodal set, 1.. = domains in first-touch order) and areas.
#[pyclass(name = "NodalDecomposition", frozen)]
struct PyNodal {
    inner: NodalDecomposition,
}

#[pymethods]
impl PyNodal {
    #[getter]
    fn count(&self) -> usize {
        self.inner.count
    }

    #[getter]
    fn labels(&self) -> Vec<u32> {
        self.inner.labels.clone()
    }

    #[getter]
    fn areas(&self) -> Vec<f64> {
        self.inner.domain_areas.clone()
    }

    #[getter]
    fn signs(&self) -> Vec<String> {
        self.inner
            .domain_signs
            .iter()
            .map(|s| match s {
                Sign::Positive => "+",
                Sign::Negative => "-",
            })
            .map(String::from)
            .collect()
    }
}

/// Spectral constants for dimension `dim` as a dict-ready JSON string.
#[pyfunction]
fn constants(dim: u32) -> PyResult<String> {
    let c = SpectralConstants::new(dim).map_err(err)?;
    serde_json::to_string(&c).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
fn bessel_first_zero(alpha: f64) -> PyResult<f64> {
    rearrange::bessel_first_zero(alpha).map_err(err)
}

#[pyfunction]
fn ball_dirichlet_eigenvalue(volume: f64, dim: u32) -> PyResult<f64> {
    rearrange::ball_dirichlet_eigenvalue(volume, dim).map_err(err)
}

/// Exact lattice counts for the square `[0, π]²` up to `lambda_max`.
#[pyfunction]
fn lattice_counts(lambda_max: f64) -> PyResult<String> {
    serde_json::to_string(&oracle::lattice_counts(lambda_max)).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Run an experiment from a preset name or a JSON config; returns the report
/// JSON. Files are written only when `out_dir` is given.
#[pyfunction]
#[pyo3(signature = (preset = None, config = None, out_dir = None))]
fn run(py: Python<'_>, preset: Option<&str>, config: Option<&str>, out_dir: Option<&str>) -> PyResult<String> {
    let cfg = match (preset, config) {
        (Some(name), None) => experiment::preset(name).map_err(err)?,
        (None, Some(text)) => ExperimentConfig::from_json(text).map_err(err)?,
        _ => return Err(PyValueError::new_err("give exactly one of preset= or config=")),
    };
    let out = out_dir.map(std::path::PathBuf::from);
    let report = py
        .detach(move || -> ::nlab::Result<_> {
            match out {
                Some(dir) => Ok(experiment::run(&cfg, Some(&dir))?.report),
                None => Ok(experiment::execute(&cfg)?.report),
            }
        })
        .map_err(err)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
#[pyo3(name = "nlab")]
fn nlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDomain>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyNodal>()?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_first_zero, m)?)?;
    m.add_function(wrap_pyfunction!(ball_dirichlet_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_counts, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
