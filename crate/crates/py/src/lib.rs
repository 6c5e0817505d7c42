//! Python bindings: curve models, point counts, L-polynomials, Jacobian
//! arithmetic and the sieve/heuristic reports, with reports delivered as
//! plain dicts.

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use dsieve_core::constant::{
    dm_affine_check, factor_split_report, threshold_scan, ConstantCurveSetup,
};
use dsieve_core::curvefile::{curve_spec_to_text, parse_curve_spec};
use dsieve_core::curves::{
    count_points_ext, good_reduction, lpolynomial, CurveModel,
};
use dsieve_core::error::Error as CoreError;
use dsieve_core::ff::FieldCtx;
use dsieve_core::group::{element_order, scalar_mul, Group};
use dsieve_core::heuristic::{
    emptying_probability, forced_torsion_contrast, smoothness_stats, torsion_density,
    HeuristicConfig,
};
use dsieve_core::jacobian::{JacobianGroup, MumfordDivisor};
use dsieve_core::localsol::{local_solubility as core_local, Place, ZeroDimScheme};
use dsieve_core::places::{coprime_chain, torsion_bound as core_torsion_bound, verify_chain};
use dsieve_core::poly::{parse_int_poly, FPoly, IntPoly};
use dsieve_core::sieve::{
    hasse_counterexample_certify, hypex_scan, ps_projected_demo, torsion_packet_certify,
    MordellWeilInput,
};

fn err(e: CoreError) -> PyErr {
    match &e {
        CoreError::InvariantViolation(_) | CoreError::Indeterminate(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.unbind().into()
            } else {
                n.as_f64().unwrap().into_pyobject(py)?.unbind().into()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.unbind().into()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.unbind().into()
        }
    })
}

fn to_py_report<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization: {e}")))?;
    json_to_py(py, &v)
}

fn parse_scheme(factors: &str) -> PyResult<ZeroDimScheme> {
    let polys: Vec<IntPoly> = factors
        .split(';')
        .map(|t| parse_int_poly(t.trim()))
        .collect::<dsieve_core::Result<_>>()
        .map_err(err)?;
    if polys.len() == 1 {
        ZeroDimScheme::from_poly(polys.into_iter().next().unwrap()).map_err(err)
    } else {
        ZeroDimScheme::with_factors(polys).map_err(err)
    }
}

/// A curve model over Q or a finite field, parsed from the curve-spec text
/// format.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Curve {
    model: CurveModel,
}

#[pymethods]
impl Curve {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Curve {
            model: parse_curve_spec(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Curve::new(&text)
    }

    #[getter]
    fn label(&self) -> Option<String> {
        self.model.label().map(str::to_string)
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.model.genus()
    }

    fn spec_text(&self) -> String {
        curve_spec_to_text(&self.model)
    }

    /// #C(F_{q^ext}); curves over Q reduce at `place` first.
    #[pyo3(signature = (place=None, ext=1, budget=dsieve_core::DEFAULT_BUDGET))]
    fn count(&self, place: Option<u64>, ext: usize, budget: u64) -> PyResult<u64> {
        let model = self.reduced(place)?;
        count_points_ext(&model, ext, budget).map_err(err)
    }

    /// L-polynomial coefficients a_0..a_{2g} as integers.
    #[pyo3(signature = (place=None, budget=dsieve_core::DEFAULT_BUDGET))]
    fn lpoly(&self, place: Option<u64>, budget: u64) -> PyResult<Vec<BigInt>> {
        let model = self.reduced(place)?;
        Ok(lpolynomial(&model, budget).map_err(err)?.coeffs)
    }

    /// #J(F_{q^n}) as an exact integer.
    #[pyo3(signature = (place=None, n=1, budget=dsieve_core::DEFAULT_BUDGET))]
    fn jacobian_order(&self, place: Option<u64>, n: usize, budget: u64) -> PyResult<BigUint> {
        let model = self.reduced(place)?;
        Ok(lpolynomial(&model, budget).map_err(err)?.jacobian_order(n))
    }

    /// Good-reduction information at a finite place.
    fn reduce(&self, py: Python<'_>, place: u64) -> PyResult<Py<PyAny>> {
        let (info, _) = good_reduction(&self.model, place).map_err(err)?;
        to_py_report(py, &info)
    }
}

impl Curve {
    fn reduced(&self, place: Option<u64>) -> PyResult<CurveModel> {
        match (self.model.base().is_rational(), place) {
            (true, Some(v)) => {
                let (info, reduced) = good_reduction(&self.model, v).map_err(err)?;
                reduced.ok_or_else(|| {
                    PyValueError::new_err(format!("bad reduction at {v}: {}", info.reason))
                })
            }
            (true, None) => Err(PyValueError::new_err(
                "curve is over Q; pass place=v to reduce first",
            )),
            (false, None) => Ok(self.model.clone()),
            (false, Some(_)) => Err(PyValueError::new_err(
                "curve already has a finite base; place does not apply",
            )),
        }
    }
}

/// Mumford arithmetic on the Jacobian of an odd-degree y^2 = f(x) over
/// F_{p^n}. Divisors are (u, v) pairs of ascending coefficient-index lists.
#[pyclass]
struct Jacobian {
    jac: JacobianGroup,
}

#[pymethods]
impl Jacobian {
    #[new]
    #[pyo3(signature = (f, p, n=1))]
    fn new(f: Vec<i64>, p: u64, n: usize) -> PyResult<Self> {
        let ctx = FieldCtx::extension(p, n).map_err(err)?;
        let fp = FPoly::from_ints(&ctx, &f);
        Ok(Jacobian {
            jac: JacobianGroup::new(ctx, fp).map_err(err)?,
        })
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.jac.genus
    }

    fn identity(&self) -> (Vec<u64>, Vec<u64>) {
        self.divisor_out(&self.jac.identity())
    }

    /// iota(P) = [P - infinity] for an affine point given by coordinate
    /// index (prime fields: the representative itself).
    fn embed(&self, x: u64, y: u64) -> PyResult<(Vec<u64>, Vec<u64>)> {
        let ctx = &self.jac.ctx;
        let d = self
            .jac
            .embed_point(&ctx.elem_from_index(x), &ctx.elem_from_index(y))
            .map_err(err)?;
        Ok(self.divisor_out(&d))
    }

    fn add(
        &self,
        a: (Vec<u64>, Vec<u64>),
        b: (Vec<u64>, Vec<u64>),
    ) -> PyResult<(Vec<u64>, Vec<u64>)> {
        let da = self.divisor_in(a)?;
        let db = self.divisor_in(b)?;
        Ok(self.divisor_out(&self.jac.add(&da, &db)))
    }

    fn neg(&self, a: (Vec<u64>, Vec<u64>)) -> PyResult<(Vec<u64>, Vec<u64>)> {
        let da = self.divisor_in(a)?;
        Ok(self.divisor_out(&self.jac.neg(&da)))
    }

    fn mul(&self, m: BigInt, a: (Vec<u64>, Vec<u64>)) -> PyResult<(Vec<u64>, Vec<u64>)> {
        let da = self.divisor_in(a)?;
        Ok(self.divisor_out(&scalar_mul(&self.jac, &m, &da)))
    }

    /// Exact order of a divisor class, given the ambient group order.
    fn order(&self, a: (Vec<u64>, Vec<u64>), ambient: BigUint) -> PyResult<BigUint> {
        let da = self.divisor_in(a)?;
        let fact = dsieve_core::factorint::factor(&ambient).map_err(err)?;
        element_order(&self.jac, &da, &fact).map_err(err)
    }
}

impl Jacobian {
    fn divisor_out(&self, d: &MumfordDivisor) -> (Vec<u64>, Vec<u64>) {
        (
            d.u.coeff_indices(&self.jac.ctx),
            d.v.coeff_indices(&self.jac.ctx),
        )
    }

    fn divisor_in(&self, (u, v): (Vec<u64>, Vec<u64>)) -> PyResult<MumfordDivisor> {
        let ctx = &self.jac.ctx;
        let to_poly = |c: Vec<u64>| {
            FPoly::from_coeffs(ctx, c.into_iter().map(|i| ctx.elem_from_index(i)).collect())
        };
        self.jac.divisor(to_poly(u), to_poly(v)).map_err(err)
    }
}

/// Rank-0 no-linear-factor scan over [lo, hi].
#[pyfunction]
#[pyo3(signature = (curve, lo, hi, provenance="declared input", assume_sha=true, budget=dsieve_core::DEFAULT_BUDGET))]
fn hypex(
    py: Python<'_>,
    curve: &Curve,
    lo: u64,
    hi: u64,
    provenance: &str,
    assume_sha: bool,
    budget: u64,
) -> PyResult<Py<PyAny>> {
    let model = match &curve.model {
        CurveModel::Hyperelliptic(h) => h.clone(),
        _ => return Err(PyValueError::new_err("hypex needs a hyperelliptic model")),
    };
    let mw = MordellWeilInput::trivial(provenance, assume_sha);
    let report = hypex_scan(&model, &mw, lo, hi, budget).map_err(err)?;
    to_py_report(py, &report)
}

/// Local solubility of a zero-dimensional scheme at one place ('real' or a
/// prime).
#[pyfunction]
fn local_solubility(factors: &str, place: &str) -> PyResult<bool> {
    let scheme = parse_scheme(factors)?;
    let p = if place == "real" {
        Place::Real
    } else {
        Place::Finite(
            place
                .parse()
                .map_err(|_| PyValueError::new_err("place must be a prime or 'real'"))?,
        )
    };
    core_local(&scheme, p).map_err(err)
}

/// Certificate that (x^2+3)(x^3-b) violates the Hasse principle.
#[pyfunction]
fn hasse_certify(py: Python<'_>, b: BigInt) -> PyResult<Py<PyAny>> {
    let cert = hasse_counterexample_certify(&b).map_err(err)?;
    to_py_report(py, &cert)
}

/// Torsion-packet certificate for y^2 = F G.
#[pyfunction]
#[pyo3(signature = (f_factors, g, scan_bound=100))]
fn packet_certify(
    py: Python<'_>,
    f_factors: &str,
    g: &str,
    scan_bound: u64,
) -> PyResult<Py<PyAny>> {
    let packet = parse_scheme(f_factors)?;
    let g_poly = parse_int_poly(g).map_err(err)?;
    let report = torsion_packet_certify(&packet, &g_poly, scan_bound).map_err(err)?;
    to_py_report(py, &report)
}

/// Per-place structural rows for the prime-to-2 projection.
#[pyfunction]
fn projected_demo(py: Python<'_>, f_factors: &str, g: &str, lo: u64, hi: u64) -> PyResult<Py<PyAny>> {
    let packet = parse_scheme(f_factors)?;
    let g_poly = parse_int_poly(g).map_err(err)?;
    let report = ps_projected_demo(&packet, &g_poly, lo, hi).map_err(err)?;
    to_py_report(py, &report)
}

/// Greedy pairwise-coprime chain of places, verified before returning.
#[pyfunction]
#[pyo3(signature = (curve, aux_prime, bound, target, budget=dsieve_core::DEFAULT_BUDGET))]
fn chain(
    py: Python<'_>,
    curve: &Curve,
    aux_prime: u64,
    bound: u64,
    target: usize,
    budget: u64,
) -> PyResult<Py<PyAny>> {
    let e = match &curve.model {
        CurveModel::Elliptic(e) => e.clone(),
        _ => return Err(PyValueError::new_err("chain needs an elliptic model")),
    };
    let state = coprime_chain(&e, aux_prime, bound, target, budget).map_err(err)?;
    verify_chain(&e, &state, budget).map_err(err)?;
    to_py_report(py, &state)
}

/// gcd of #E(F_v) over the listed places.
#[pyfunction]
#[pyo3(signature = (curve, places, budget=dsieve_core::DEFAULT_BUDGET))]
fn torsion_bound(curve: &Curve, places: Vec<u64>, budget: u64) -> PyResult<BigUint> {
    let e = match &curve.model {
        CurveModel::Elliptic(e) => e.clone(),
        _ => return Err(PyValueError::new_err("torsion_bound needs an elliptic model")),
    };
    core_torsion_bound(&e, &places, budget).map_err(err)
}

/// Emptying-probability rows for the random-subset model.
#[pyfunction]
#[pyo3(signature = (curve, d=1, bound=60, trials=1000, seed=0, budget=dsieve_core::DEFAULT_BUDGET))]
fn emptying(
    py: Python<'_>,
    curve: &Curve,
    d: u64,
    bound: u64,
    trials: u32,
    seed: u64,
    budget: u64,
) -> PyResult<Py<PyAny>> {
    let cfg = HeuristicConfig {
        d,
        bound,
        trials,
        seed,
        budget,
    };
    let report = emptying_probability(&curve.model, 1, &cfg).map_err(err)?;
    to_py_report(py, &report)
}

/// Fraction of good places with floor(bound^u)-smooth Jacobian order.
#[pyfunction]
#[pyo3(signature = (curve, bound, u, budget=dsieve_core::DEFAULT_BUDGET))]
fn smoothness(py: Python<'_>, curve: &Curve, bound: u64, u: f64, budget: u64) -> PyResult<Py<PyAny>> {
    let report = smoothness_stats(&curve.model, bound, u, budget).map_err(err)?;
    to_py_report(py, &report)
}

/// Density of places where E(F_v) has a point of order ell^n.
#[pyfunction]
#[pyo3(signature = (curve, ell, nmax, bound, budget=dsieve_core::DEFAULT_BUDGET))]
fn density(
    py: Python<'_>,
    curve: &Curve,
    ell: u64,
    nmax: u32,
    bound: u64,
    budget: u64,
) -> PyResult<Py<PyAny>> {
    let e = match &curve.model {
        CurveModel::Elliptic(e) => e.clone(),
        _ => return Err(PyValueError::new_err("density needs an elliptic model")),
    };
    let report = torsion_density(&e, ell, nmax, bound, budget).map_err(err)?;
    to_py_report(py, &report)
}

/// Random-model emptying vs the forced-2-torsion reality.
#[pyfunction]
#[pyo3(signature = (f_factors, g, bound=60, trials=1000, seed=0, budget=dsieve_core::DEFAULT_BUDGET))]
fn contrast(
    py: Python<'_>,
    f_factors: &str,
    g: &str,
    bound: u64,
    trials: u32,
    seed: u64,
    budget: u64,
) -> PyResult<Py<PyAny>> {
    let packet = parse_scheme(f_factors)?;
    let g_poly = parse_int_poly(g).map_err(err)?;
    let cfg = HeuristicConfig {
        d: 2,
        bound,
        trials,
        seed,
        budget,
    };
    let report = forced_torsion_contrast(&packet, &g_poly, &cfg).map_err(err)?;
    to_py_report(py, &report)
}

/// ell-valuation rows with the exact q^n > (2g ell^r)^2 flags.
#[pyfunction]
#[pyo3(signature = (curve, ell, nmax=20, budget=dsieve_core::DEFAULT_BUDGET))]
fn threshold(py: Python<'_>, curve: &Curve, ell: u64, nmax: usize, budget: u64) -> PyResult<Py<PyAny>> {
    let h = match &curve.model {
        CurveModel::Hyperelliptic(h) => h.clone(),
        _ => return Err(PyValueError::new_err("threshold needs a hyperelliptic model")),
    };
    let ctx = h.base.ctx().map_err(err)?;
    let f = h.f.reduce_mod(&ctx);
    let setup = ConstantCurveSetup::new(f, ctx, ell, budget).map_err(err)?;
    to_py_report(py, &threshold_scan(&setup, nmax))
}

/// Affine emptiness of (x^q - x + 1)(y^q - y - 1) = 1 over F_{3^m}.
#[pyfunction]
#[pyo3(signature = (m, brute=true))]
fn dm_check(py: Python<'_>, m: u32, brute: bool) -> PyResult<Py<PyAny>> {
    to_py_report(py, &dm_affine_check(m, brute).map_err(err)?)
}

/// Elliptic factor split of y^2 = -x^6 + x^2 - 1 over F_3.
#[pyfunction]
#[pyo3(signature = (budget=dsieve_core::DEFAULT_BUDGET))]
fn factor_split(py: Python<'_>, budget: u64) -> PyResult<Py<PyAny>> {
    to_py_report(py, &factor_split_report(budget).map_err(err)?)
}

#[pymodule]
fn dsieve(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Curve>()?;
    m.add_class::<Jacobian>()?;
    m.add_function(wrap_pyfunction!(hypex, m)?)?;
    m.add_function(wrap_pyfunction!(local_solubility, m)?)?;
    m.add_function(wrap_pyfunction!(hasse_certify, m)?)?;
    m.add_function(wrap_pyfunction!(packet_certify, m)?)?;
    m.add_function(wrap_pyfunction!(projected_demo, m)?)?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(torsion_bound, m)?)?;
    m.add_function(wrap_pyfunction!(emptying, m)?)?;
    m.add_function(wrap_pyfunction!(smoothness, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(contrast, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(dm_check, m)?)?;
    m.add_function(wrap_pyfunction!(factor_split, m)?)?;
    Ok(())
}
