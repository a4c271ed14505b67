//! Python module `equipoly_py`. Angles may be passed as floats or as strings
//! such as `"pi/3"`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use equipoly::commands;
use equipoly::geometry::{self, BondAngle, Vec3};
use equipoly::hexagon::{self, Sign, TorusPoint};
use equipoly::io::parse_theta;
use equipoly::{oracle, pi3, small_n, topology};

fn err(e: equipoly::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn angle(theta: &Bound<'_, PyAny>) -> PyResult<BondAngle> {
    let value = match theta.extract::<String>() {
        Ok(s) => parse_theta(&s).map_err(err)?,
        Err(_) => theta.extract::<f64>()?,
    };
    BondAngle::new(value).map_err(err)
}

fn sign(s: i32) -> PyResult<Sign> {
    Sign::from_value(s).map_err(err)
}

#[pyclass(name = "Polygon", frozen)]
struct PyPolygon {
    inner: geometry::Polygon,
}

#[pymethods]
impl PyPolygon {
    #[new]
    fn new(vertices: Vec<[f64; 3]>) -> PyResult<Self> {
        let inner =
            geometry::Polygon::new(vertices.into_iter().map(Vec3::from).collect()).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn vertices(&self) -> Vec<[f64; 3]> {
        self.inner.vertices().iter().map(|v| v.to_array()).collect()
    }

    fn bond_angles(&self) -> PyResult<Vec<f64>> {
        geometry::bond_angles(&self.inner).map_err(err)
    }

    /// Largest deviation from unit edges and bond angle `theta`.
    fn residual(&self, theta: &Bound<'_, PyAny>) -> PyResult<f64> {
        Ok(geometry::residual(&self.inner, angle(theta)?)
            .map_err(err)?
            .max_residual)
    }

    fn mirror(&self) -> Self {
        Self {
            inner: self.inner.mirror_z(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Polygon(n={})", self.inner.len())
    }
}

#[pyclass(name = "SolutionCloud", frozen)]
struct PyCloud {
    inner: oracle::SolutionCloud,
}

#[pymethods]
impl PyCloud {
    #[getter]
    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points.clone()
    }

    #[getter]
    fn grid_spacing(&self) -> f64 {
        self.inner.grid_spacing
    }

    #[getter]
    fn dedupe_radius(&self) -> f64 {
        self.inner.dedupe_radius
    }

    /// `(kind, size, diameter)` per component, in report order.
    #[pyo3(signature = (eps=None))]
    fn components(&self, eps: Option<f64>) -> Vec<(String, usize, f64)> {
        let eps = eps.unwrap_or(commands::EPS_FACTOR * self.inner.grid_spacing);
        topology::components(&self.inner, eps)
            .components
            .iter()
            .map(|c| (c.kind.to_string(), c.size, c.diameter))
            .collect()
    }

    #[pyo3(signature = (eps=None))]
    fn summary(&self, eps: Option<f64>) -> String {
        let eps = eps.unwrap_or(commands::EPS_FACTOR * self.inner.grid_spacing);
        topology::components(&self.inner, eps).summary()
    }

    #[pyo3(signature = (a, b, eps=None))]
    fn path_connected(&self, a: Vec<f64>, b: Vec<f64>, eps: Option<f64>) -> PyResult<bool> {
        let eps = eps.unwrap_or(commands::EPS_FACTOR * self.inner.grid_spacing);
        topology::path_connected(&self.inner, &a, &b, eps).map_err(err)
    }

    fn isolation_radius(&self, p: Vec<f64>) -> PyResult<f64> {
        topology::isolation_radius(&self.inner, &p).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Parses `pi/3`, `2*pi/3`, `0.5`, ...
#[pyfunction(name = "parse_theta")]
fn py_parse_theta(s: &str) -> PyResult<f64> {
    parse_theta(s).map_err(err)
}

/// `(tag, detail)` of the configuration space of equilateral `n`-gons.
#[pyfunction]
fn classify(n: usize, theta: &Bound<'_, PyAny>) -> PyResult<(String, String)> {
    let c = commands::classify_n(n, angle(theta)?).map_err(err)?;
    Ok((c.tag.to_string(), c.detail))
}

#[pyfunction]
fn named_configurations(theta: &Bound<'_, PyAny>) -> PyResult<Vec<(String, [f64; 3], PyPolygon)>> {
    Ok(hexagon::named_configurations(angle(theta)?)
        .into_iter()
        .map(|c| {
            (
                c.family.to_string(),
                c.torus.to_array(),
                PyPolygon { inner: c.polygon },
            )
        })
        .collect())
}

#[pyfunction]
fn build_hexagon(theta: &Bound<'_, PyAny>, phi1: f64, phi3: f64, phi5: f64) -> PyResult<PyPolygon> {
    Ok(PyPolygon {
        inner: hexagon::build_hexagon(angle(theta)?, TorusPoint::new(phi1, phi3, phi5)),
    })
}

/// `(phi1, phi3, phi5)` on branch `+1` or `-1`.
#[pyfunction]
fn solve_branch(theta: &Bound<'_, PyAny>, phi1: f64, branch: i32) -> PyResult<[f64; 3]> {
    Ok(hexagon::solve_branch(angle(theta)?, phi1, sign(branch)?)
        .map_err(err)?
        .to_array())
}

#[pyfunction]
fn admissible_arcs(theta: &Bound<'_, PyAny>) -> PyResult<Vec<(f64, f64)>> {
    Ok(hexagon::admissible_phi1(angle(theta)?)
        .arcs
        .iter()
        .map(|a| (a.lo, a.hi))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (theta, loop_id=0, steps=256))]
fn deformation_loop(
    theta: &Bound<'_, PyAny>,
    loop_id: usize,
    steps: usize,
) -> PyResult<Vec<[f64; 3]>> {
    Ok(hexagon::deformation_loop(angle(theta)?, loop_id, steps)
        .map_err(err)?
        .iter()
        .map(|t| t.to_array())
        .collect())
}

#[pyfunction]
fn f_map(phi: f64) -> f64 {
    pi3::f_map(phi)
}

#[pyfunction]
#[pyo3(signature = (n, theta, branch=1))]
fn construct_small(n: usize, theta: &Bound<'_, PyAny>, branch: i32) -> PyResult<PyPolygon> {
    Ok(PyPolygon {
        inner: small_n::construct_small(n, angle(theta)?, sign(branch)?).map_err(err)?,
    })
}

/// Brute-force solutions for `n` in 4, 5, 6 at `res` grid points per axis.
#[pyfunction]
#[pyo3(signature = (n, theta, res=48))]
fn solve(py: Python<'_>, n: usize, theta: &Bound<'_, PyAny>, res: usize) -> PyResult<PyCloud> {
    let theta = angle(theta)?;
    let inner = py
        .detach(|| commands::oracle_cloud(n, theta, res))
        .map_err(err)?;
    Ok(PyCloud { inner })
}

/// `(passed, report text)`.
#[pyfunction]
#[pyo3(signature = (n, theta, res=48))]
fn verify(
    py: Python<'_>,
    n: usize,
    theta: &Bound<'_, PyAny>,
    res: usize,
) -> PyResult<(bool, String)> {
    let theta = angle(theta)?;
    let report = py
        .detach(|| commands::cmd_verify(n, theta, res, None))
        .map_err(err)?;
    Ok((report.pass, report.to_text()))
}

#[pymodule]
fn equipoly_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolygon>()?;
    m.add_class::<PyCloud>()?;
    m.add_function(wrap_pyfunction!(py_parse_theta, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(named_configurations, m)?)?;
    m.add_function(wrap_pyfunction!(build_hexagon, m)?)?;
    m.add_function(wrap_pyfunction!(solve_branch, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_arcs, m)?)?;
    m.add_function(wrap_pyfunction!(deformation_loop, m)?)?;
    m.add_function(wrap_pyfunction!(f_map, m)?)?;
    m.add_function(wrap_pyfunction!(construct_small, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyDict;

    #[test]
    fn module_from_python() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "equipoly_py").unwrap();
            equipoly_py(&m).unwrap();
            let locals = PyDict::new(py);
            locals.set_item("ep", &m).unwrap();
            let code = c"
tag, _ = ep.classify(6, 'pi/3')
named = ep.named_configurations('pi/2')
ok = (tag == 'GraphXAndTwoPoints'
      and len(named) == 4
      and all(p.residual('pi/2') < 1e-12 for _, _, p in named)
      and ep.solve(6, 'pi/2', 24).summary() == '1 Loop + 2 IsolatedPoint')
";
            py.run(code, None, Some(&locals)).unwrap();
            let ok: bool = locals.get_item("ok").unwrap().unwrap().extract().unwrap();
            assert!(ok);
            let bad = py.run(c"ep.classify(6, 'pi/0')", None, Some(&locals));
            assert!(bad.unwrap_err().is_instance_of::<PyValueError>(py));
        });
    }
}
