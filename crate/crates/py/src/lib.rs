//! Python bindings: the main types and verification pipelines, with exact
//! rationals crossing the boundary as strings and structured reports as JSON.

#![allow(clippy::useless_conversion)] // `?` on PyErr inside #[pymethods]

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cartankit::flatmodel::{act, ModelPoint};
use cartankit::graded::{self, Cochain2, Cochain2Repr};
use cartankit::model::ModelTag;
use cartankit::nonhomog::{
    homogeneity_probe, line_point_symmetry_certificate, line_symmetry_detailed, off_line_symmetry,
    PuncturedModel,
};
use cartankit::ratlin::Rat;
use cartankit::sample;
use cartankit::symmetries::{
    check_loos_axioms, enumerate_origin_symmetries, tangent_doubling_check, SymmetrySystem,
    SystemDescriptor,
};
use cartankit::weyl::{invariant_gauge, Frame};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rats(values: &[String]) -> PyResult<Vec<Rat>> {
    values.iter().map(|s| s.parse::<Rat>().map_err(err)).collect()
}

fn rats_to_strings(values: &[Rat]) -> Vec<String> {
    values.iter().map(Rat::to_string).collect()
}

fn parse_model(json: &str) -> PyResult<ModelTag> {
    serde_json::from_str(json).map_err(err)
}

/// A graded matrix Lie algebra with exact structure data.
#[pyclass(name = "GradedAlgebra", frozen)]
struct PyGradedAlgebra {
    inner: Arc<graded::GradedAlgebra>,
}

#[pymethods]
impl PyGradedAlgebra {
    #[staticmethod]
    fn projective(m: usize) -> PyResult<Self> {
        Ok(PyGradedAlgebra { inner: graded::GradedAlgebra::projective(m).map_err(err)? })
    }

    #[staticmethod]
    fn conformal(p: usize, q: usize) -> PyResult<Self> {
        Ok(PyGradedAlgebra { inner: graded::GradedAlgebra::conformal(p, q).map_err(err)? })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn grade_dim(&self, grade: i32) -> usize {
        self.inner.grade_dim(grade as i8)
    }

    fn model_json(&self) -> String {
        serde_json::to_string(self.inner.model()).expect("serializable tag")
    }

    /// Bracket of two elements given by coordinate strings.
    fn bracket(&self, a: Vec<String>, b: Vec<String>) -> PyResult<Vec<String>> {
        let a = graded::AlgElement::from_coords(&self.inner, parse_rats(&a)?).map_err(err)?;
        let b = graded::AlgElement::from_coords(&self.inner, parse_rats(&b)?).map_err(err)?;
        Ok(rats_to_strings(a.bracket(&b).map_err(err)?.coords()))
    }

    /// Decide normality and torsion-freeness of a two-cochain given as the
    /// JSON `{"pairs": [{"i": .., "j": .., "value": [..]}]}`.
    fn normality(&self, cochain_json: &str) -> PyResult<(bool, bool)> {
        let repr: Cochain2Repr = serde_json::from_str(cochain_json).map_err(err)?;
        let kappa = Cochain2::from_repr(&self.inner, &repr).map_err(err)?;
        Ok((graded::is_normal(&kappa), graded::is_torsion_free(&kappa)))
    }

    fn __repr__(&self) -> String {
        format!("GradedAlgebra({}, dim={})", self.model_json(), self.inner.dim())
    }
}

/// A symmetry: group element plus declared center.
#[pyclass(name = "Symmetry", frozen)]
struct PySymmetry {
    inner: cartankit::symmetries::Symmetry,
}

#[pymethods]
impl PySymmetry {
    /// Homogeneous coordinates of the center.
    fn center(&self) -> Vec<String> {
        rats_to_strings(self.inner.center.coords())
    }

    /// Rows of the canonical matrix representative.
    fn element_rows(&self) -> Vec<Vec<String>> {
        let rep = self.inner.element.rep();
        (0..rep.rows()).map(|i| rats_to_strings(rep.row(i))).collect()
    }

    /// (fixes center, differential is minus identity, involutive)
    fn verify(&self) -> PyResult<(bool, bool, bool)> {
        let r = cartankit::symmetries::verify_symmetry(&self.inner).map_err(err)?;
        Ok((r.fixes_center, r.minus_identity_differential, r.involutive))
    }

    fn __repr__(&self) -> String {
        format!("Symmetry(center={:?})", self.center())
    }
}

/// A rule assigning one symmetry to each covered point.
#[pyclass(name = "SymmetrySystem", frozen)]
struct PySymmetrySystem {
    inner: SymmetrySystem,
}

#[pymethods]
impl PySymmetrySystem {
    /// Build from a descriptor JSON document (conjugation or table rule).
    #[staticmethod]
    fn from_json(descriptor: &str) -> PyResult<Self> {
        let d: SystemDescriptor = serde_json::from_str(descriptor).map_err(err)?;
        Ok(PySymmetrySystem { inner: SymmetrySystem::from_descriptor(&d).map_err(err)? })
    }

    /// Conjugation system on a model from the base exp parameter.
    #[staticmethod]
    fn conjugation(model_json: &str, base_z: Vec<String>) -> PyResult<Self> {
        let tag = parse_model(model_json)?;
        let algebra = graded::GradedAlgebra::from_model(&tag).map_err(err)?;
        let inner =
            SymmetrySystem::conjugation_from_z(&algebra, &parse_rats(&base_z)?).map_err(err)?;
        Ok(PySymmetrySystem { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.descriptor()).expect("serializable descriptor")
    }

    /// The symmetry at the chart point with the given affine coordinates.
    fn symmetry_at(&self, affine: Vec<String>) -> PyResult<PySymmetry> {
        let x = ModelPoint::from_affine(*self.inner.model(), &parse_rats(&affine)?)
            .map_err(err)?;
        Ok(PySymmetry { inner: self.inner.symmetry_at(&x).map_err(err)? })
    }

    /// Multiplication-law report over seeded random in-cell pairs
    /// (or the covered pairs of a table rule), as JSON.
    fn check_loos(&self, samples: usize, seed: u64) -> PyResult<String> {
        let pairs = match self.inner.table_points() {
            Some(_) => sample::table_system_pairs(&self.inner, samples).map_err(err)?,
            None => {
                let mut rng = sample::stream(seed, 1);
                sample::random_in_cell_pairs(&mut rng, *self.inner.model(), samples, 5)
            }
        };
        let report = check_loos_axioms(&self.inner, &pairs).map_err(err)?;
        serde_json::to_string(&report).map_err(err)
    }

    /// Exact Jacobian of `x -> s_x(x0)` at the chart point `x0`, as rows of
    /// rational strings.
    fn tangent_doubling(&self, x0_affine: Vec<String>) -> PyResult<Vec<Vec<String>>> {
        let x0 = ModelPoint::from_affine(*self.inner.model(), &parse_rats(&x0_affine)?)
            .map_err(err)?;
        let jac = tangent_doubling_check(&self.inner, &x0).map_err(err)?;
        Ok((0..jac.rows()).map(|i| rats_to_strings(jac.row(i))).collect())
    }

    /// Candidate invariant gauge and its verdict, as JSON
    /// `{"verdict": ..., "samples_checked": .., "violations": [..]}`.
    fn invariant_gauge(&self, frames: usize, samples: usize, seed: u64) -> PyResult<String> {
        let algebra = self.inner.algebra();
        let (frame_list, pair_samples) = match self.inner.table_points() {
            None => {
                let mut rng = sample::stream(seed, 2);
                let frame_list: Vec<Frame> = (0..frames.max(1))
                    .map(|_| sample::random_frame(&mut rng, algebra, 4))
                    .collect();
                let pairs = (0..samples)
                    .map(|i| {
                        let x =
                            sample::random_in_cell_point(&mut rng, *self.inner.model(), 4);
                        (x, frame_list[i % frame_list.len()].clone())
                    })
                    .collect::<Vec<_>>();
                (frame_list, pairs)
            }
            Some(points) => {
                let frame_list: Vec<Frame> = points
                    .iter()
                    .filter(|p| p.is_in_cell())
                    .take(frames.max(1))
                    .map(|p| Frame::canonical(algebra, &p.affine_coords().expect("in cell")))
                    .collect::<cartankit::Result<_>>()
                    .map_err(err)?;
                let mut pairs = Vec::new();
                for x in points.iter().filter(|p| p.is_in_cell()) {
                    for f in &frame_list {
                        if pairs.len() == samples {
                            break;
                        }
                        let s = match self.inner.symmetry_at(x) {
                            Ok(s) => s,
                            Err(_) => continue,
                        };
                        let covered = cartankit::weyl::displacement(&s.element, f)
                            .ok()
                            .map(|(_, image)| image.base_point())
                            .is_some_and(|p| self.inner.covers(&p));
                        if covered {
                            pairs.push((x.clone(), f.clone()));
                        }
                    }
                }
                (frame_list, pairs)
            }
        };
        let outcome =
            invariant_gauge(&self.inner, &frame_list, &pair_samples).map_err(err)?;
        let doc = serde_json::json!({
            "verdict": outcome.verdict,
            "samples_checked": outcome.report.samples_checked,
            "vacuous": outcome.report.vacuous,
            "violations": outcome.report.violations,
        });
        serde_json::to_string(&doc).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("SymmetrySystem({})", self.to_json())
    }
}

/// Origin-symmetry enumeration for a model, as JSON
/// `{"g0_class": rows | null, "z_dim": .., "nullspace_rank": ..}`.
#[pyfunction]
fn origin_symmetry_family(model_json: &str) -> PyResult<String> {
    let tag = parse_model(model_json)?;
    let algebra = graded::GradedAlgebra::from_model(&tag).map_err(err)?;
    let family = enumerate_origin_symmetries(&algebra);
    let rows = family.g0_class.as_ref().map(|g| {
        let rep = g.rep();
        (0..rep.rows()).map(|i| rats_to_strings(rep.row(i))).collect::<Vec<_>>()
    });
    let doc = serde_json::json!({
        "g0_class": rows,
        "z_dim": family.z_dim,
        "nullspace_rank": family.nullspace_rank,
    });
    serde_json::to_string(&doc).map_err(err)
}

/// Closed-form residual check for the swapping line symmetry of the
/// punctured model, as JSON.
#[pyfunction]
fn line_symmetry_report(m: usize, x_m: &str, x_m1: &str) -> PyResult<String> {
    let model = PuncturedModel::new(m).map_err(err)?;
    let x_m: Rat = x_m.parse().map_err(err)?;
    let x_m1: Rat = x_m1.parse().map_err(err)?;
    let data = line_symmetry_detailed(&model, &x_m, &x_m1).map_err(err)?;
    let cert = line_point_symmetry_certificate(&model, &x_m, &x_m1).map_err(err)?;
    let verify = cartankit::symmetries::verify_symmetry(&data.symmetry).map_err(err)?;
    let doc = serde_json::json!({
        "residual_col_m": rats_to_strings(&data.residual_col_m),
        "residual_col_m1": rats_to_strings(&data.residual_col_m1),
        "swaps_removed_points": data.swaps_removed_points,
        "is_symmetry": verify.all_hold(),
        "preserve_has_solution": cert.preserve_has_solution,
        "swap_solution_dim": cert.swap_solution_dim,
    });
    serde_json::to_string(&doc).map_err(err)
}

/// Randomized confinement probe of the punctured model, as JSON.
#[pyfunction]
fn nonhomog_probe(
    m: usize,
    seed: u64,
    automorphisms: usize,
    line_points: usize,
) -> PyResult<String> {
    let model = PuncturedModel::new(m).map_err(err)?;
    let mut rng = sample::stream(seed, 3);
    let report =
        homogeneity_probe(&model, &mut rng, automorphisms, line_points).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

/// The symmetry of the punctured model at an off-line chart point.
#[pyfunction]
fn punctured_off_line_symmetry(m: usize, affine: Vec<String>) -> PyResult<PySymmetry> {
    let model = PuncturedModel::new(m).map_err(err)?;
    let x = ModelPoint::from_affine(model.tag(), &parse_rats(&affine)?).map_err(err)?;
    Ok(PySymmetry { inner: off_line_symmetry(&x, &model).map_err(err)? })
}

/// The origin symmetry transported to the chart point with the given affine
/// coordinates.
#[pyfunction]
fn transported_origin_symmetry(model_json: &str, affine: Vec<String>) -> PyResult<PySymmetry> {
    let tag = parse_model(model_json)?;
    let algebra = graded::GradedAlgebra::from_model(&tag).map_err(err)?;
    let base = cartankit::symmetries::make_origin_symmetry(
        &algebra,
        &graded::AlgElement::zero(&algebra),
    )
    .map_err(err)?;
    let x = ModelPoint::from_affine(tag, &parse_rats(&affine)?).map_err(err)?;
    let h = cartankit::flatmodel::transporter_to(&x).map_err(err)?;
    let s = cartankit::symmetries::transport(&base, &h);
    debug_assert_eq!(act(&s.element, &x), x);
    Ok(PySymmetry { inner: s })
}

#[pymodule]
fn cartankit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGradedAlgebra>()?;
    m.add_class::<PySymmetry>()?;
    m.add_class::<PySymmetrySystem>()?;
    m.add_function(wrap_pyfunction!(origin_symmetry_family, m)?)?;
    m.add_function(wrap_pyfunction!(line_symmetry_report, m)?)?;
    m.add_function(wrap_pyfunction!(nonhomog_probe, m)?)?;
    m.add_function(wrap_pyfunction!(punctured_off_line_symmetry, m)?)?;
    m.add_function(wrap_pyfunction!(transported_origin_symmetry, m)?)?;
    Ok(())
}
