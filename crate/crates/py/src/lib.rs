//! Python bindings for the starkindex engine: exact Smith forms, group
//! ring idempotents, the sextic ring machinery, Tate cohomology and the
//! record verifier, exposed as plain functions. Exact integers cross the
//! boundary as strings so nothing is silently truncated.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use starkindex::cohomology::{herbrand_quotient, tate_h0, tate_h1, CyclicAction};
use starkindex::gmodule::{ModulePresentation, RingTag};
use starkindex::groupring::{minus_idempotent as gr_minus_idempotent, GroupSpec};
use starkindex::hring::{find_generator as hr_find_generator, kappa as hr_kappa, HElem, HIdeal};
use starkindex::intmat::IntMat;
use starkindex::record::{run_verify, to_record_file, VerifyOptions};
use starkindex::synth::{rng_from_seed, synth_record};

fn to_py_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ring_tag(name: &str) -> PyResult<RingTag> {
    match name {
        "Z" => Ok(RingTag::Z),
        "Z[i]" => Ok(RingTag::Gaussian),
        "Z[omega]" => Ok(RingTag::Eisenstein),
        "Z[H]" => Ok(RingTag::HGroupRing),
        "O" => Ok(RingTag::MaximalO),
        other => Err(PyValueError::new_err(format!(
            "unknown ring {other:?}; expected Z, Z[i], Z[omega], Z[H] or O"
        ))),
    }
}

/// Smith normal form: the full diagonal of invariant factors (as decimal
/// strings), in divisibility order.
#[pyfunction]
fn snf(matrix: Vec<Vec<i64>>) -> PyResult<Vec<String>> {
    if matrix.is_empty() {
        return Ok(Vec::new());
    }
    let m = IntMat::from_rows(&matrix);
    Ok(m.snf().d.iter().map(|d| d.to_string()).collect())
}

/// Coefficients of e⁻ = ½(1 − γ^m) as (numerator, denominator) pairs.
#[pyfunction]
fn minus_idempotent(two_m: usize) -> PyResult<Vec<(i64, i64)>> {
    let g = GroupSpec::new(two_m, 2).map_err(to_py_err)?;
    Ok(gr_minus_idempotent(&g)
        .coeffs
        .iter()
        .map(|q| {
            (
                i64::try_from(q.numer()).unwrap(),
                i64::try_from(q.denom()).unwrap(),
            )
        })
        .collect())
}

/// The odd rational idempotents: list of (orbit exponents, coefficients).
#[pyfunction]
fn rational_idempotents(two_m: usize) -> PyResult<Vec<(Vec<usize>, Vec<(i64, i64)>)>> {
    let g = GroupSpec::new(two_m, 2).map_err(to_py_err)?;
    Ok(starkindex::groupring::rational_idempotents(&g)
        .into_iter()
        .map(|(xi, e)| {
            (
                xi.exponents,
                e.coeffs
                    .iter()
                    .map(|q| {
                        (
                            i64::try_from(q.numer()).unwrap(),
                            i64::try_from(q.denom()).unwrap(),
                        )
                    })
                    .collect(),
            )
        })
        .collect())
}

/// κ_{n,m} in the 1, σ, σ² coordinates of Z[H].
#[pyfunction]
fn kappa(n: u64, m: u64) -> PyResult<Vec<String>> {
    Ok(hr_kappa(n, m)
        .coeffs
        .iter()
        .map(|c| c.to_string())
        .collect())
}

/// Norm(x) for x ∈ Z[H] in the 1, σ, σ² coordinates.
#[pyfunction]
fn norm_form(coords: Vec<i64>) -> PyResult<String> {
    if coords.len() != 3 {
        return Err(PyValueError::new_err("expected 3 coordinates"));
    }
    Ok(HElem::new(coords[0], coords[1], coords[2])
        .norm()
        .to_string())
}

/// Distinguished generator of an ideal of Z[H]: returns (coords,
/// principal). If not principal, the element has relative index 3.
#[pyfunction]
fn find_generator(generators: Vec<Vec<i64>>) -> PyResult<(Vec<String>, bool)> {
    let gens: Vec<HElem> = generators
        .iter()
        .map(|c| {
            if c.len() != 3 {
                Err(PyValueError::new_err("each generator needs 3 coordinates"))
            } else {
                Ok(HElem::new(c[0], c[1], c[2]))
            }
        })
        .collect::<PyResult<_>>()?;
    let ideal = HIdeal::from_generators(&gens).map_err(to_py_err)?;
    let (g, principal) = hr_find_generator(&ideal).map_err(to_py_err)?;
    Ok((g.coeffs.iter().map(|c| c.to_string()).collect(), principal))
}

fn cyclic_action(
    n: u64,
    free_rank: usize,
    torsion: Vec<u64>,
    action: Vec<Vec<i64>>,
) -> PyResult<CyclicAction> {
    CyclicAction::new(
        n,
        free_rank,
        torsion.into_iter().map(BigInt::from).collect(),
        IntMat::from_rows(&action),
    )
    .map_err(to_py_err)
}

/// Ĥ⁰(A, M) as invariant factors (> 1).
#[pyfunction]
#[pyo3(name = "tate_h0")]
fn tate_h0_py(
    n: u64,
    free_rank: usize,
    torsion: Vec<u64>,
    action: Vec<Vec<i64>>,
) -> PyResult<Vec<String>> {
    let c = cyclic_action(n, free_rank, torsion, action)?;
    Ok(tate_h0(&c)
        .map_err(to_py_err)?
        .iter()
        .map(|d| d.to_string())
        .collect())
}

/// Ĥ¹(A, M) as invariant factors (> 1).
#[pyfunction]
#[pyo3(name = "tate_h1")]
fn tate_h1_py(
    n: u64,
    free_rank: usize,
    torsion: Vec<u64>,
    action: Vec<Vec<i64>>,
) -> PyResult<Vec<String>> {
    let c = cyclic_action(n, free_rank, torsion, action)?;
    Ok(tate_h1(&c)
        .map_err(to_py_err)?
        .iter()
        .map(|d| d.to_string())
        .collect())
}

/// Herbrand quotient as a (numerator, denominator) pair of strings.
#[pyfunction]
#[pyo3(name = "herbrand_quotient")]
fn herbrand_quotient_py(
    n: u64,
    free_rank: usize,
    torsion: Vec<u64>,
    action: Vec<Vec<i64>>,
) -> PyResult<(String, String)> {
    let c = cyclic_action(n, free_rank, torsion, action)?;
    let q = herbrand_quotient(&c).map_err(to_py_err)?;
    Ok((q.numer().to_string(), q.denom().to_string()))
}

/// |M| for a finite presentation (generators × relations over `ring`).
#[pyfunction]
fn module_order(ring: &str, generators: usize, relations: Vec<Vec<Vec<i64>>>) -> PyResult<String> {
    let pres = presentation(ring, generators, relations)?;
    Ok(pres.order().map_err(to_py_err)?.to_string())
}

/// |maximal order / Fitting ideal| of the presented module.
#[pyfunction]
fn fitting_order(ring: &str, generators: usize, relations: Vec<Vec<Vec<i64>>>) -> PyResult<String> {
    let pres = presentation(ring, generators, relations)?;
    Ok(pres.order_from_fitting().map_err(to_py_err)?.to_string())
}

fn presentation(
    ring: &str,
    generators: usize,
    relations: Vec<Vec<Vec<i64>>>,
) -> PyResult<ModulePresentation> {
    let tag = ring_tag(ring)?;
    let rels = relations
        .into_iter()
        .map(|rel| {
            rel.into_iter()
                .map(|coords| coords.into_iter().map(BigInt::from).collect())
                .collect()
        })
        .collect();
    ModulePresentation::new(tag, generators, rels).map_err(to_py_err)
}

/// Verify record files; returns (exit_code, [report JSON per record]).
#[pyfunction]
#[pyo3(signature = (paths, p_max = 50, tolerance = 1e-8, strict = false))]
fn verify_files(
    paths: Vec<String>,
    p_max: u64,
    tolerance: f64,
    strict: bool,
) -> PyResult<(i32, Vec<String>)> {
    let opts = VerifyOptions {
        p_max,
        tolerance,
        strict,
    };
    let paths: Vec<std::path::PathBuf> = paths.iter().map(std::path::PathBuf::from).collect();
    let (reports, code) = run_verify(&paths, &opts);
    let lines = reports
        .iter()
        .map(|r| serde_json::to_string(r).map_err(to_py_err))
        .collect::<PyResult<_>>()?;
    Ok((code, lines))
}

/// A synthetic record (JSON text) for the given degree pair and seed;
/// every check passes on it by construction.
#[pyfunction]
fn synthesize_record(m: usize, d: usize, seed: u64) -> PyResult<String> {
    if !(1..=3).contains(&m) {
        return Err(PyValueError::new_err("m must be 1, 2 or 3"));
    }
    let mut rng = rng_from_seed(seed);
    let record = synth_record(m, d, &mut rng);
    serde_json::to_string_pretty(&to_record_file(&record)).map_err(to_py_err)
}

#[pymodule]
fn starkindex_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(snf, m)?)?;
    m.add_function(wrap_pyfunction!(minus_idempotent, m)?)?;
    m.add_function(wrap_pyfunction!(rational_idempotents, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(norm_form, m)?)?;
    m.add_function(wrap_pyfunction!(find_generator, m)?)?;
    m.add_function(wrap_pyfunction!(tate_h0_py, m)?)?;
    m.add_function(wrap_pyfunction!(tate_h1_py, m)?)?;
    m.add_function(wrap_pyfunction!(herbrand_quotient_py, m)?)?;
    m.add_function(wrap_pyfunction!(module_order, m)?)?;
    m.add_function(wrap_pyfunction!(fitting_order, m)?)?;
    m.add_function(wrap_pyfunction!(verify_files, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_record, m)?)?;
    Ok(())
}
