//! Symmetries of the flat models and systems of them.
//!
//! Origin symmetries are enumerated by solving the linear condition that a
//! grade-preserving element act as minus the identity on the base summand;
//! arbitrary symmetries arise by conjugation transport. Systems assign one
//! symmetry per point, either by conjugating a base symmetry with
//! translations or through a finite table, and the Loos multiplication laws
//! are checked as exact identities of canonical representatives.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dual::{dual_translation, Dual, DualMat};
use crate::error::{Error, Result};
use crate::flatmodel::{
    act, differential_at_origin, exp_nilpotent, origin, transporter_to, GroupElement, ModelPoint,
};
use crate::graded::{adjoint_action, AlgElement, GradedAlgebra};
use crate::model::{translation_matrix, ModelTag};
use crate::ratlin::{rat, solve, Mat, Rat};

/// The solution set of the origin-symmetry condition for a model: the unique
/// grade-preserving class acting as -id on the base (when it exists) and the
/// dimension of the exp-parameter family.
#[derive(Clone, Debug)]
pub struct OriginSymmetryFamily {
    pub g0_class: Option<GroupElement>,
    pub z_dim: usize,
    /// Null-space rank of the linear system on representatives; zero
    /// certifies uniqueness of the class.
    pub nullspace_rank: usize,
}

/// Solves `Ad(g0) = -id` on the base summand over grade-preserving
/// representatives, as an exact linear (projective) or structured
/// (conformal) problem. Absence of a solution is a valid answer.
pub fn enumerate_origin_symmetries(algebra: &Arc<GradedAlgebra>) -> OriginSymmetryFamily {
    let n = algebra.model().base_dim();
    let z_dim = algebra.grade_dim(1);
    // The action of a grade-preserving element on base coordinates is a
    // matrix B; the condition reads B e_a = -e_a for every basis vector.
    // Unknowns: the n^2 entries of B, row-major.
    let mut system = Mat::zeros(n * n, n * n);
    let mut rhs = Mat::zeros(n * n, 1);
    for a in 0..n {
        for r in 0..n {
            let eq = a * n + r;
            system[(eq, r * n + a)] = Rat::one();
            if r == a {
                rhs[(eq, 0)] = -Rat::one();
            }
        }
    }
    let sol = match solve(&system, &rhs).expect("shape is consistent") {
        Some(s) => s,
        None => return OriginSymmetryFamily { g0_class: None, z_dim, nullspace_rank: 0 },
    };
    let nullspace_rank = sol.nullspace.len();
    let b = Mat::from_fn(n, n, |i, j| sol.particular[(i * n + j, 0)].clone());
    let candidate = lift_base_action(algebra.model(), &b);
    let g0_class = candidate.filter(|g| {
        // verify through the adjoint action on every base basis vector
        algebra.grade_indices(-1).into_iter().all(|idx| {
            let x = AlgElement::basis(algebra, idx);
            adjoint_action(g, &x).map(|y| y == x.neg()).unwrap_or(false)
        }) && g.is_grade_preserving()
    });
    OriginSymmetryFamily { g0_class, z_dim, nullspace_rank }
}

/// Lifts a prescribed action `B` on base coordinates to a grade-preserving
/// group class, when the model admits one.
fn lift_base_action(model: &ModelTag, b: &Mat) -> Option<GroupElement> {
    if b.det().is_zero() {
        return None;
    }
    match model {
        ModelTag::Projective { m } => {
            let mut rep = Mat::identity(m + 1);
            rep.set_block(1, 1, b);
            GroupElement::new(rep, *model).ok()
        }
        ModelTag::Conformal { .. } => {
            // Need diag(l, C, 1/l) with C = l B preserving the signature form:
            // l^2 B^T S B = S forces l^2 to a fixed rational square.
            let n = model.base_dim();
            let sig = model.signature_entries()?;
            let s = Mat::from_fn(n, n, |i, j| {
                if i == j {
                    Rat::from_int(sig[i])
                } else {
                    Rat::zero()
                }
            });
            let t = &(&b.transpose() * &s) * b;
            if t[(0, 0)].is_zero() {
                return None;
            }
            let mu = &s[(0, 0)] / &t[(0, 0)];
            if t.scale(&mu) != s {
                return None;
            }
            let lambda = mu.sqrt_exact()?;
            let mut rep = Mat::zeros(n + 2, n + 2);
            rep[(0, 0)] = lambda.clone();
            rep.set_block(1, 1, &b.scale(&lambda));
            rep[(n + 1, n + 1)] = lambda.recip().ok()?;
            GroupElement::new(rep, *model).ok()
        }
    }
}

/// A group element together with its declared center point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub element: GroupElement,
    pub center: ModelPoint,
}

/// `g0 exp(Z)` for the model's unique `g0` class: a symmetry centered at the
/// origin, for any `Z` in the positive summand.
pub fn make_origin_symmetry(algebra: &Arc<GradedAlgebra>, z: &AlgElement) -> Result<Symmetry> {
    if z.algebra().model() != algebra.model() {
        return Err(Error::ModelMismatch);
    }
    if !z.is_pure_grade(1) {
        return Err(Error::InvalidInput("exp parameter must lie in g(+1)".into()));
    }
    let family = enumerate_origin_symmetries(algebra);
    let g0 = family.g0_class.ok_or(Error::NoOriginSymmetry)?;
    let element = g0.mul(&exp_nilpotent(z)?);
    Ok(Symmetry { element, center: origin(*algebra.model()) })
}

/// Conjugation transport: the symmetry `h s h^{-1}` centered at `h . center`.
pub fn transport(s: &Symmetry, h: &GroupElement) -> Symmetry {
    Symmetry { element: s.element.conjugate_by(h), center: act(h, &s.center) }
}

/// One boolean per defining condition of a symmetry.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerificationReport {
    pub fixes_center: bool,
    /// The differential in the translated chart at the center is exactly -id;
    /// this certifies the center as an isolated fixed point.
    pub minus_identity_differential: bool,
    pub involutive: bool,
}

impl VerificationReport {
    pub fn all_hold(&self) -> bool {
        self.fixes_center && self.minus_identity_differential && self.involutive
    }
}

/// Checks the defining conditions of a symmetry exactly.
pub fn verify_symmetry(s: &Symmetry) -> Result<VerificationReport> {
    let fixes_center = act(&s.element, &s.center) == s.center;
    let minus_identity_differential = if fixes_center {
        let h = transporter_to(&s.center)?;
        let m = h.inverse().mul(&s.element).mul(&h);
        let d = differential_at_origin(&m)?;
        d == -&Mat::identity(s.center.model().base_dim())
    } else {
        false
    };
    let involutive = s.element.mul(&s.element).is_identity();
    Ok(VerificationReport { fixes_center, minus_identity_differential, involutive })
}

/// A rule assigning one symmetry to each covered point.
#[derive(Clone, Debug)]
pub enum SymmetrySystem {
    /// Transport of a base symmetry at the origin by the rational translation
    /// family `x -> exp(X)`; covers the big cell.
    Conjugation(ConjugationSystem),
    /// A finite assignment point -> symmetry.
    Table(TableSystem),
}

#[derive(Clone, Debug)]
pub struct ConjugationSystem {
    algebra: Arc<GradedAlgebra>,
    base: Symmetry,
    base_z: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct TableSystem {
    algebra: Arc<GradedAlgebra>,
    entries: Vec<Symmetry>,
}

/// Wire form of a system, as consumed and emitted by the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum SystemDescriptor {
    Conjugation {
        model: ModelTag,
        #[serde(rename = "base_Z")]
        base_z: Vec<Rat>,
    },
    Table {
        model: ModelTag,
        entries: Vec<TableEntry>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub point: Vec<Rat>,
    pub element: Mat,
}

impl SymmetrySystem {
    /// Conjugation system from the g(+1) coordinates of the base exp-parameter.
    pub fn conjugation_from_z(algebra: &Arc<GradedAlgebra>, base_z: &[Rat]) -> Result<Self> {
        let z = AlgElement::from_grade_vector(algebra, 1, base_z)?;
        let base = make_origin_symmetry(algebra, &z)?;
        Ok(SymmetrySystem::Conjugation(ConjugationSystem {
            algebra: Arc::clone(algebra),
            base,
            base_z: base_z.to_vec(),
        }))
    }

    pub fn table(algebra: &Arc<GradedAlgebra>, entries: Vec<Symmetry>) -> Result<Self> {
        for s in &entries {
            if s.center.model() != algebra.model() {
                return Err(Error::ModelMismatch);
            }
        }
        Ok(SymmetrySystem::Table(TableSystem { algebra: Arc::clone(algebra), entries }))
    }

    pub fn from_descriptor(d: &SystemDescriptor) -> Result<Self> {
        match d {
            SystemDescriptor::Conjugation { model, base_z } => {
                let algebra = GradedAlgebra::from_model(model)?;
                SymmetrySystem::conjugation_from_z(&algebra, base_z)
            }
            SystemDescriptor::Table { model, entries } => {
                let algebra = GradedAlgebra::from_model(model)?;
                let entries = entries
                    .iter()
                    .map(|e| {
                        Ok(Symmetry {
                            element: GroupElement::new(e.element.clone(), *model)?,
                            center: ModelPoint::new(e.point.clone(), *model)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                SymmetrySystem::table(&algebra, entries)
            }
        }
    }

    pub fn descriptor(&self) -> SystemDescriptor {
        match self {
            SymmetrySystem::Conjugation(c) => SystemDescriptor::Conjugation {
                model: *c.algebra.model(),
                base_z: c.base_z.clone(),
            },
            SymmetrySystem::Table(t) => SystemDescriptor::Table {
                model: *t.algebra.model(),
                entries: t
                    .entries
                    .iter()
                    .map(|s| TableEntry {
                        point: s.center.coords().to_vec(),
                        element: s.element.rep().clone(),
                    })
                    .collect(),
            },
        }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        match self {
            SymmetrySystem::Conjugation(c) => &c.algebra,
            SymmetrySystem::Table(t) => &t.algebra,
        }
    }

    pub fn model(&self) -> &ModelTag {
        self.algebra().model()
    }

    /// The symmetry assigned to `x`; errors when `x` is not covered.
    pub fn symmetry_at(&self, x: &ModelPoint) -> Result<Symmetry> {
        match self {
            SymmetrySystem::Conjugation(c) => {
                let v = x.affine_coords().ok_or_else(|| {
                    Error::Uncovered(format!("{x:?} lies off the big cell"))
                })?;
                let h = GroupElement::new(
                    translation_matrix(x.model(), &v),
                    *x.model(),
                )?;
                Ok(transport(&c.base, &h))
            }
            SymmetrySystem::Table(t) => t
                .entries
                .iter()
                .find(|s| &s.center == x)
                .cloned()
                .ok_or_else(|| Error::Uncovered(format!("{x:?} is not a table point"))),
        }
    }

    pub fn covers(&self, x: &ModelPoint) -> bool {
        self.symmetry_at(x).is_ok()
    }

    /// The finite point list of a table rule.
    pub fn table_points(&self) -> Option<Vec<ModelPoint>> {
        match self {
            SymmetrySystem::Table(t) => {
                Some(t.entries.iter().map(|s| s.center.clone()).collect())
            }
            SymmetrySystem::Conjugation(_) => None,
        }
    }
}

/// Which of the three checked multiplication laws failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoosAxiom {
    CenterFixed,
    Involution,
    Composition,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomFailure {
    pub x: ModelPoint,
    pub y: ModelPoint,
    pub axiom: LoosAxiom,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(mut self, other: AxiomReport) -> AxiomReport {
        self.pairs_checked += other.pairs_checked;
        self.failures.extend(other.failures);
        self
    }
}

/// Verifies, for each sampled pair `(x, y)`:
/// `s_x(x) = x`, `s_x(s_x(y)) = y`, and the group-level composition law
/// `s_x s_y s_x = s at s_x(y)` as equality of canonical representatives.
pub fn check_loos_axioms(
    system: &SymmetrySystem,
    pairs: &[(ModelPoint, ModelPoint)],
) -> Result<AxiomReport> {
    let mut report = AxiomReport::default();
    for (x, y) in pairs {
        let sx = system.symmetry_at(x)?;
        let sy = system.symmetry_at(y)?;
        if act(&sx.element, x) != *x {
            report.failures.push(AxiomFailure {
                x: x.clone(),
                y: y.clone(),
                axiom: LoosAxiom::CenterFixed,
                lhs: format!("{:?}", act(&sx.element, x)),
                rhs: format!("{x:?}"),
            });
        }
        let yy = act(&sx.element, &act(&sx.element, y));
        if yy != *y {
            report.failures.push(AxiomFailure {
                x: x.clone(),
                y: y.clone(),
                axiom: LoosAxiom::Involution,
                lhs: format!("{yy:?}"),
                rhs: format!("{y:?}"),
            });
        }
        let z = act(&sx.element, y);
        let sz = system.symmetry_at(&z)?;
        let lhs = sx.element.mul(&sy.element).mul(&sx.element);
        if lhs != sz.element {
            report.failures.push(AxiomFailure {
                x: x.clone(),
                y: y.clone(),
                axiom: LoosAxiom::Composition,
                lhs: format!("{:?}", lhs.rep()),
                rhs: format!("{:?}", sz.element.rep()),
            });
        }
        report.pairs_checked += 1;
    }
    Ok(report)
}

/// Exact Jacobian at `x0` of `x -> s_x(x0)`, computed in the translated chart
/// at `x0` with dual-number arithmetic. For a genuine differentiable system
/// this equals twice the identity. Table rules carry no differentiable
/// structure and are rejected.
pub fn tangent_doubling_check(system: &SymmetrySystem, x0: &ModelPoint) -> Result<Mat> {
    let conj = match system {
        SymmetrySystem::Conjugation(c) => c,
        SymmetrySystem::Table(_) => {
            return Err(Error::InvalidInput(
                "table rules have no differentiable structure".into(),
            ))
        }
    };
    let model = *x0.model();
    if model != *conj.algebra.model() {
        return Err(Error::ModelMismatch);
    }
    let x0_aff = x0
        .affine_coords()
        .ok_or_else(|| Error::ChartViolation(format!("{x0:?} lies off the big cell")))?;
    let n = model.base_dim();
    let base_rep = DualMat::from_mat(conj.base.element.rep());
    let x0_coords: Vec<Dual> =
        x0.coords().iter().cloned().map(Dual::constant).collect();
    let mut jac = Mat::zeros(n, n);
    for j in 0..n {
        let v: Vec<Dual> = (0..n)
            .map(|i| {
                if i == j {
                    Dual::variable(x0_aff[i].clone())
                } else {
                    Dual::constant(x0_aff[i].clone())
                }
            })
            .collect();
        let vneg: Vec<Dual> = v.iter().map(Dual::neg).collect();
        let h = dual_translation(&model, &v);
        let hinv = dual_translation(&model, &vneg);
        let s = h.mul(&base_rep).mul(&hinv);
        let image = s.apply(&x0_coords);
        for i in 0..n {
            // affine coordinates of the image in the chart at x0
            let coord = image[i + 1].div(&image[0]);
            jac[(i, j)] = coord.der.clone();
        }
    }
    Ok(jac)
}

/// Doubled identity matrix, the expected tangent-doubling value.
pub fn doubled_identity(n: usize) -> Mat {
    Mat::identity(n).scale(&rat(2, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatmodel::act;
    use crate::ratlin::rat;
    use crate::sample;

    fn proj(m: usize) -> Arc<GradedAlgebra> {
        GradedAlgebra::projective(m).unwrap()
    }

    #[test]
    fn projective_enumeration_gives_minus_identity_block() {
        for m in 1..=4 {
            let alg = proj(m);
            let fam = enumerate_origin_symmetries(&alg);
            assert_eq!(fam.z_dim, m);
            assert_eq!(fam.nullspace_rank, 0, "uniqueness certificate");
            let g0 = fam.g0_class.expect("projective models are symmetric");
            let mut expected = Mat::identity(m + 1);
            for i in 1..=m {
                expected[(i, i)] = rat(-1, 1);
            }
            assert_eq!(g0.rep(), &expected);
        }
    }

    #[test]
    fn conformal_enumeration_verified_by_adjoint_action() {
        for (p, q) in [(3, 0), (2, 1)] {
            let alg = GradedAlgebra::conformal(p, q).unwrap();
            let fam = enumerate_origin_symmetries(&alg);
            assert_eq!(fam.z_dim, p + q);
            assert_eq!(fam.nullspace_rank, 0);
            let g0 = fam.g0_class.expect("conformal models are symmetric");
            for idx in alg.grade_indices(-1) {
                let x = AlgElement::basis(&alg, idx);
                assert_eq!(adjoint_action(&g0, &x).unwrap(), x.neg());
            }
        }
    }

    #[test]
    fn origin_symmetry_matches_block_form() {
        let alg = proj(2);
        let z = AlgElement::zero(&alg);
        let s = make_origin_symmetry(&alg, &z).unwrap();
        assert_eq!(
            s.element.rep(),
            &Mat::from_int_rows(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]])
        );
        assert!(verify_symmetry(&s).unwrap().all_hold());

        // nonzero Z produces the row-block form (1, W; 0, -E) with W = Z
        let z = AlgElement::from_grade_vector(&alg, 1, &[rat(3, 2), rat(-1, 5)]).unwrap();
        let s = make_origin_symmetry(&alg, &z).unwrap();
        let rep = s.element.rep();
        assert_eq!(rep[(0, 1)], rat(3, 2));
        assert_eq!(rep[(0, 2)], rat(-1, 5));
        assert_eq!(rep[(1, 1)], rat(-1, 1));
        assert_eq!(rep[(2, 2)], rat(-1, 1));
        assert!(verify_symmetry(&s).unwrap().all_hold());
    }

    #[test]
    fn origin_symmetries_are_involutive_for_random_z() {
        let alg = proj(3);
        let mut rng = sample::stream(23, 0);
        for _ in 0..20 {
            let z = sample::random_grade_vector(&mut rng, &alg, 1, 5);
            let s = make_origin_symmetry(&alg, &z).unwrap();
            assert!(s.element.mul(&s.element).is_identity());
            assert!(verify_symmetry(&s).unwrap().all_hold());
        }
    }

    #[test]
    fn identity_is_not_a_symmetry() {
        let alg = proj(2);
        let s = Symmetry {
            element: GroupElement::identity(*alg.model()),
            center: origin(*alg.model()),
        };
        let report = verify_symmetry(&s).unwrap();
        assert!(report.fixes_center);
        assert!(!report.minus_identity_differential);
        assert!(!report.all_hold());
    }

    #[test]
    fn transport_by_identity_and_equivariance() {
        let alg = proj(2);
        let z = AlgElement::from_grade_vector(&alg, 1, &[rat(1, 2), rat(0, 1)]).unwrap();
        let s = make_origin_symmetry(&alg, &z).unwrap();
        assert_eq!(transport(&s, &GroupElement::identity(*alg.model())), s);

        let mut rng = sample::stream(29, 0);
        for _ in 0..15 {
            let h = sample::random_projective_element(&mut rng, 2);
            let k = sample::random_projective_element(&mut rng, 2);
            let lhs = transport(&transport(&s, &h), &k);
            let rhs = transport(&s, &k.mul(&h));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn stabilizer_compatible_transport_fixes_the_symmetry() {
        // k s k^{-1} = s for k in the stabilizer commuting with the base:
        // block-diagonal (1, B) elements commute with (1, 0; 0, -E).
        let alg = proj(2);
        let s = make_origin_symmetry(&alg, &AlgElement::zero(&alg)).unwrap();
        let mut rng = sample::stream(31, 0);
        for _ in 0..10 {
            let b = sample::random_invertible(&mut rng, 2, 4);
            let mut rep = Mat::identity(3);
            rep.set_block(1, 1, &b);
            let k = GroupElement::new(rep, *alg.model()).unwrap();
            assert_eq!(transport(&s, &k), s);
        }
    }

    #[test]
    fn transported_symmetries_verify_exactly() {
        let alg = proj(2);
        let s = make_origin_symmetry(&alg, &AlgElement::zero(&alg)).unwrap();
        let mut rng = sample::stream(37, 0);
        for _ in 0..20 {
            let x = sample::random_in_cell_point(&mut rng, *alg.model(), 4);
            let v = x.affine_coords().unwrap();
            let h = GroupElement::new(translation_matrix(alg.model(), &v), *alg.model()).unwrap();
            let t = transport(&s, &h);
            assert_eq!(t.center, x);
            let report = verify_symmetry(&t).unwrap();
            assert!(report.all_hold());
        }
    }

    #[test]
    fn conjugation_system_satisfies_loos_axioms() {
        for m in [2usize, 3] {
            let alg = proj(m);
            let system =
                SymmetrySystem::conjugation_from_z(&alg, &vec![Rat::zero(); m]).unwrap();
            let mut rng = sample::stream(41, m as u64);
            let pairs: Vec<_> = (0..40)
                .map(|_| {
                    (
                        sample::random_in_cell_point(&mut rng, *alg.model(), 4),
                        sample::random_in_cell_point(&mut rng, *alg.model(), 4),
                    )
                })
                .collect();
            let report = check_loos_axioms(&system, &pairs).unwrap();
            assert!(report.passed(), "failures: {:?}", report.failures);
            assert_eq!(report.pairs_checked, 40);
        }
    }

    #[test]
    fn conformal_conjugation_system_satisfies_loos_axioms() {
        let alg = GradedAlgebra::conformal(2, 1).unwrap();
        let system = SymmetrySystem::conjugation_from_z(&alg, &vec![Rat::zero(); 3]).unwrap();
        let mut rng = sample::stream(43, 0);
        let pairs: Vec<_> = (0..15)
            .map(|_| {
                (
                    sample::random_in_cell_point(&mut rng, *alg.model(), 3),
                    sample::random_in_cell_point(&mut rng, *alg.model(), 3),
                )
            })
            .collect();
        let report = check_loos_axioms(&system, &pairs).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
    }

    #[test]
    fn equal_points_reduce_composition_to_involutivity() {
        let alg = proj(2);
        let system = SymmetrySystem::conjugation_from_z(&alg, &[Rat::zero(), Rat::zero()])
            .unwrap();
        let x = ModelPoint::from_affine(*alg.model(), &[rat(1, 3), rat(-2, 1)]).unwrap();
        let report = check_loos_axioms(&system, &[(x.clone(), x)]).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn violating_table_is_flagged_with_witness() {
        let alg = proj(2);
        let system = crate::fixtures::loos_violating_table(&alg).unwrap();
        let o = origin(*alg.model());
        let p = ModelPoint::from_affine(*alg.model(), &[rat(0, 1), rat(1, 1)]).unwrap();
        let report = check_loos_axioms(&system, &[(o.clone(), p.clone())]).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failures[0].axiom, LoosAxiom::Composition);
        assert_eq!(report.failures[0].x, o);
        assert_eq!(report.failures[0].y, p);
        // the first two axioms still hold for this fixture
        assert_eq!(report.failures.len(), 1);
    }

    #[test]
    fn tangent_doubling_on_projective_models() {
        for m in [2usize, 3] {
            let alg = proj(m);
            let system =
                SymmetrySystem::conjugation_from_z(&alg, &vec![Rat::zero(); m]).unwrap();
            let d = tangent_doubling_check(&system, &origin(*alg.model())).unwrap();
            assert_eq!(d, doubled_identity(m));
        }
    }

    #[test]
    fn tangent_doubling_at_transported_base_point() {
        let alg = proj(2);
        let system = SymmetrySystem::conjugation_from_z(&alg, &[Rat::zero(), Rat::zero()])
            .unwrap();
        let x0 = ModelPoint::from_affine(*alg.model(), &[rat(5, 3), rat(-7, 2)]).unwrap();
        assert_eq!(tangent_doubling_check(&system, &x0).unwrap(), doubled_identity(2));
        // a base with nonzero exp parameter still doubles
        let system = SymmetrySystem::conjugation_from_z(&alg, &[rat(1, 2), rat(1, 3)]).unwrap();
        assert_eq!(tangent_doubling_check(&system, &x0).unwrap(), doubled_identity(2));
    }

    #[test]
    fn tangent_doubling_rejects_tables() {
        let alg = proj(2);
        let system = crate::fixtures::loos_violating_table(&alg).unwrap();
        assert!(tangent_doubling_check(&system, &origin(*alg.model())).is_err());
    }

    #[test]
    fn conformal_tangent_doubling() {
        let alg = GradedAlgebra::conformal(3, 0).unwrap();
        let system = SymmetrySystem::conjugation_from_z(&alg, &vec![Rat::zero(); 3]).unwrap();
        let d = tangent_doubling_check(&system, &origin(*alg.model())).unwrap();
        assert_eq!(d, doubled_identity(3));
    }

    #[test]
    fn descriptor_round_trip() {
        let alg = proj(2);
        let system = SymmetrySystem::conjugation_from_z(&alg, &[rat(1, 2), rat(0, 1)]).unwrap();
        let d = system.descriptor();
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains("\"rule\":\"conjugation\""));
        assert!(json.contains("\"base_Z\""));
        let back = SymmetrySystem::from_descriptor(&serde_json::from_str(&json).unwrap()).unwrap();
        let x = ModelPoint::from_affine(*alg.model(), &[rat(1, 1), rat(2, 1)]).unwrap();
        assert_eq!(
            system.symmetry_at(&x).unwrap().element,
            back.symmetry_at(&x).unwrap().element
        );

        let table = crate::fixtures::loos_violating_table(&alg).unwrap();
        let json = serde_json::to_string(&table.descriptor()).unwrap();
        let back = SymmetrySystem::from_descriptor(&serde_json::from_str(&json).unwrap()).unwrap();
        let o = origin(*alg.model());
        assert_eq!(
            table.symmetry_at(&o).unwrap().element,
            back.symmetry_at(&o).unwrap().element
        );
    }

    #[test]
    fn uncovered_points_error() {
        let alg = proj(2);
        let system = SymmetrySystem::conjugation_from_z(&alg, &[Rat::zero(), Rat::zero()])
            .unwrap();
        let off = ModelPoint::new(vec![rat(0, 1), rat(1, 1), rat(0, 1)], *alg.model()).unwrap();
        assert!(matches!(system.symmetry_at(&off), Err(Error::Uncovered(_))));
    }

    #[test]
    fn transported_symmetry_centers_and_differentials() {
        // transport of the origin symmetry by exp(X0) is centered at the
        // affine point X0 and still has differential -id there
        let alg = proj(2);
        let s = make_origin_symmetry(&alg, &AlgElement::zero(&alg)).unwrap();
        let x0 = [rat(2, 1), rat(-1, 3)];
        let h = GroupElement::new(translation_matrix(alg.model(), &x0), *alg.model()).unwrap();
        let t = transport(&s, &h);
        assert_eq!(t.center.affine_coords().unwrap(), x0.to_vec());
        assert_eq!(act(&t.element, &t.center), t.center);
        let report = verify_symmetry(&t).unwrap();
        assert!(report.all_hold());
    }
}
