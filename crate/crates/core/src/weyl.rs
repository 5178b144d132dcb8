//! Invariant Weyl gauges on the flat models.
//!
//! A frame is a point of the underlying bundle over the big cell, written as
//! (base coordinates, grade-preserving part). Relative to the flat gauge
//! `sigma(X, g0) = exp(X) g0`, every symmetry produces a g(+1)-valued
//! displacement `F`; the candidate invariant gauge is `Upsilon = -F/2`
//! evaluated at each frame's own base point, and invariance is the exact
//! cocycle identity `F(x, u0) = Upsilon(image frame) - Upsilon(u0)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flatmodel::{act, big_cell_decompose, exp_nilpotent, GroupElement, ModelPoint};
use crate::graded::{adjoint_action, AlgElement, Cochain1, GradedAlgebra, RhoTensor};
use crate::ratlin::{rat, Mat, Rat};
use crate::symmetries::SymmetrySystem;

/// A point of the bundle over the big cell: base coordinates in g(-1) and a
/// grade-preserving group part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    base_x: AlgElement,
    g0: GroupElement,
}

impl Frame {
    pub fn new(base_x: AlgElement, g0: GroupElement) -> Result<Self> {
        if base_x.algebra().model() != g0.model() {
            return Err(Error::ModelMismatch);
        }
        if !base_x.is_pure_grade(-1) {
            return Err(Error::InvalidInput("frame base must lie in g(-1)".into()));
        }
        if !g0.is_grade_preserving() {
            return Err(Error::InvalidInput(
                "frame group part must preserve the grading".into(),
            ));
        }
        Ok(Frame { base_x, g0 })
    }

    /// The frame over the given affine base point with identity group part.
    pub fn canonical(algebra: &Arc<GradedAlgebra>, affine: &[Rat]) -> Result<Self> {
        let base_x = AlgElement::from_grade_vector(algebra, -1, affine)?;
        Ok(Frame { base_x, g0: GroupElement::identity(*algebra.model()) })
    }

    pub fn base_x(&self) -> &AlgElement {
        &self.base_x
    }

    pub fn g0_part(&self) -> &GroupElement {
        &self.g0
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        self.base_x.algebra()
    }

    pub fn base_affine(&self) -> Vec<Rat> {
        self.base_x.grade_vector(-1)
    }

    pub fn base_point(&self) -> ModelPoint {
        ModelPoint::from_affine(*self.algebra().model(), &self.base_affine())
            .expect("affine coordinates always give a chart point")
    }

    pub fn is_canonical(&self) -> bool {
        self.g0.is_identity()
    }

    /// Bundle representative `exp(X) g0` of the frame's class.
    pub fn representative(&self) -> GroupElement {
        exp_nilpotent(&self.base_x).expect("g(-1) is nilpotent").mul(&self.g0)
    }

    /// Serializable description used in reports.
    pub fn descriptor(&self) -> FrameDescriptor {
        FrameDescriptor { base: self.base_affine(), g0: self.g0.rep().clone() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameDescriptor {
    pub base: Vec<Rat>,
    pub g0: Mat,
}

/// Factors `S exp(X) g0` through the big cell as
/// `exp(X') g0' exp(F)`: returns the displacement `F` in g(+1) together with
/// the image frame `(X', g0')`, all relative to the flat gauge.
pub fn displacement(
    s_elem: &GroupElement,
    u0: &Frame,
) -> Result<(AlgElement, Frame)> {
    if s_elem.model() != u0.algebra().model() {
        return Err(Error::ModelMismatch);
    }
    let m = s_elem.mul(&u0.representative());
    let factors = big_cell_decompose(&m, u0.algebra())?;
    let image = Frame::new(factors.x, factors.g0)?;
    Ok((factors.z, image))
}

/// Displacement read in the gauge shifted by the constant `z0` (the flat
/// gauge times `exp` of the equivariant extension of `z0`), computed by
/// direct factorization rather than through the transformation law.
pub fn displacement_in_shifted_gauge(
    s_elem: &GroupElement,
    u0: &Frame,
    z0: &AlgElement,
) -> Result<(AlgElement, Frame)> {
    if !z0.is_pure_grade(1) {
        return Err(Error::InvalidInput("gauge shifts live in g(+1)".into()));
    }
    let algebra = u0.algebra();
    let shift = exp_nilpotent(z0)?;
    // sigma_hat(X, g0) = exp(X) exp(z0) g0
    let sigma_hat = |x: &AlgElement, g0: &GroupElement| -> Result<GroupElement> {
        Ok(exp_nilpotent(x)?.mul(&shift).mul(g0))
    };
    let m = s_elem.mul(&sigma_hat(&u0.base_x, &u0.g0)?);
    let factors = big_cell_decompose(&m, algebra)?;
    let image = Frame::new(factors.x.clone(), factors.g0.clone())?;
    let n = sigma_hat(&factors.x, &factors.g0)?.inverse().mul(&m);
    let unip = big_cell_decompose(&n, algebra)?;
    if !unip.x.is_zero() || !unip.g0.is_identity() {
        return Err(Error::NotInGroup(
            "shifted-gauge comparison is not a positive unipotent".into(),
        ));
    }
    Ok((unip.z, image))
}

/// The candidate invariant gauge: g(+1) values stored on canonical frames and
/// extended by equivariance under the grade-preserving action.
#[derive(Clone, Debug)]
pub struct UpsilonField {
    system: SymmetrySystem,
    values: BTreeMap<Vec<Rat>, AlgElement>,
}

impl UpsilonField {
    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        self.system.algebra()
    }

    /// Stored canonical-frame values, keyed by base affine coordinates.
    pub fn stored(&self) -> &BTreeMap<Vec<Rat>, AlgElement> {
        &self.values
    }

    /// Value at the canonical frame over the given base coordinates:
    /// stored when sampled, otherwise derived from the system.
    pub fn value_at_base(&self, base: &[Rat]) -> Result<AlgElement> {
        if let Some(v) = self.values.get(base) {
            return Ok(v.clone());
        }
        upsilon_at_canonical(&self.system, base)
    }

    /// Evaluation at an arbitrary frame by the equivariance law: the value at
    /// the frame's canonical representative transported by the inverse
    /// adjoint action of the group part.
    pub fn evaluate(&self, frame: &Frame) -> Result<AlgElement> {
        let canonical = self.value_at_base(&frame.base_affine())?;
        adjoint_action(&frame.g0_part().inverse(), &canonical)
    }
}

/// Minus one half of the displacement of the symmetry at the frame's own
/// base point.
fn upsilon_at_canonical(system: &SymmetrySystem, base: &[Rat]) -> Result<AlgElement> {
    let algebra = system.algebra();
    let x = ModelPoint::from_affine(*algebra.model(), base)?;
    let s = system.symmetry_at(&x)?;
    let u0 = Frame::canonical(algebra, base)?;
    let (f, _) = displacement(&s.element, &u0)?;
    Ok(f.scale(&rat(-1, 2)))
}

/// Builds the candidate gauge from the system, storing values on the
/// canonical frames over the sampled frames' base points.
pub fn upsilon_from_system(
    system: &SymmetrySystem,
    frames: &[Frame],
) -> Result<UpsilonField> {
    let mut values = BTreeMap::new();
    for frame in frames {
        let base = frame.base_affine();
        if values.contains_key(&base) {
            continue;
        }
        let v = upsilon_at_canonical(system, &base)?;
        values.insert(base, v);
    }
    Ok(UpsilonField { system: system.clone(), values })
}

/// A violated sample with its exact g(+1)-valued residual.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualWitness {
    pub x: ModelPoint,
    pub frame: FrameDescriptor,
    pub residual: Vec<Rat>,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct CheckReport {
    pub samples_checked: usize,
    pub vacuous: bool,
    pub violations: Vec<ResidualWitness>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(mut self, other: CheckReport) -> CheckReport {
        self.samples_checked += other.samples_checked;
        self.vacuous = self.vacuous && other.vacuous;
        self.violations.extend(other.violations);
        self
    }
}

/// Exact verification of the invariance identity
/// `F(x, u0) = Upsilon(image frame) - Upsilon(u0)` on each sample.
pub fn cocycle_check(
    system: &SymmetrySystem,
    upsilon: &UpsilonField,
    samples: &[(ModelPoint, Frame)],
) -> Result<CheckReport> {
    let mut report = CheckReport { vacuous: samples.is_empty(), ..Default::default() };
    for (x, u0) in samples {
        let s = system.symmetry_at(x)?;
        let (f, image) = displacement(&s.element, u0)?;
        let expected = upsilon.evaluate(&image)?.sub(&upsilon.evaluate(u0)?);
        let residual = f.sub(&expected);
        if !residual.is_zero() {
            report.violations.push(ResidualWitness {
                x: x.clone(),
                frame: u0.descriptor(),
                residual: residual.grade_vector(1),
            });
        }
        report.samples_checked += 1;
    }
    Ok(report)
}

/// Exact verification of the four-term displacement identity
/// `F(x, image_y(u0)) + F(y, u0) = F(s_x(y), image_x(u0)) + F(x, u0)`
/// with `y` the base point of `u0`.
pub fn distributivity_identity_check(
    system: &SymmetrySystem,
    samples: &[(ModelPoint, Frame)],
) -> Result<CheckReport> {
    let mut report = CheckReport { vacuous: samples.is_empty(), ..Default::default() };
    for (x, u0) in samples {
        let y = u0.base_point();
        let sx = system.symmetry_at(x)?;
        let sy = system.symmetry_at(&y)?;
        let sxy = system.symmetry_at(&act(&sx.element, &y))?;
        let (f_y_u0, image_y) = displacement(&sy.element, u0)?;
        let (f_x_imy, _) = displacement(&sx.element, &image_y)?;
        let (f_x_u0, image_x) = displacement(&sx.element, u0)?;
        let (f_sxy_imx, _) = displacement(&sxy.element, &image_x)?;
        let lhs = f_x_imy.add(&f_y_u0);
        let rhs = f_sxy_imx.add(&f_x_u0);
        let residual = lhs.sub(&rhs);
        if !residual.is_zero() {
            report.violations.push(ResidualWitness {
                x: x.clone(),
                frame: u0.descriptor(),
                residual: residual.grade_vector(1),
            });
        }
        report.samples_checked += 1;
    }
    Ok(report)
}

/// Pointwise transformation of a Rho tensor under a gauge change:
/// `P(xi) + nabla_xi Upsilon + [Upsilon, [Upsilon, xi]] / 2`.
/// The derivative term is caller-supplied data.
pub fn rho_transform(
    rho: &RhoTensor,
    nabla_upsilon: &Cochain1,
    upsilon: &AlgElement,
    xi: &AlgElement,
) -> Result<AlgElement> {
    if !upsilon.is_pure_grade(1) {
        return Err(Error::InvalidInput("the gauge change lives in g(+1)".into()));
    }
    if !xi.is_pure_grade(-1) {
        return Err(Error::InvalidInput("the argument lives in g(-1)".into()));
    }
    let linear = rho.evaluate(xi)?.add(&nabla_upsilon.evaluate(xi)?);
    let nested = upsilon.bracket(&upsilon.bracket(xi)?)?;
    Ok(linear.add(&nested.scale(&rat(1, 2))))
}

/// Verdict of the invariant-gauge construction.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeVerdict {
    Invariant,
    FiberwiseOnly { witness: ResidualWitness },
}

#[derive(Clone, Debug)]
pub struct InvariantGaugeOutcome {
    pub upsilon: UpsilonField,
    pub verdict: GaugeVerdict,
    pub report: CheckReport,
}

/// Builds the unique candidate gauge from the system and decides whether it
/// is invariant by running the cocycle check on the sampled pairs.
pub fn invariant_gauge(
    system: &SymmetrySystem,
    frames: &[Frame],
    pair_samples: &[(ModelPoint, Frame)],
) -> Result<InvariantGaugeOutcome> {
    let upsilon = upsilon_from_system(system, frames)?;
    let report = cocycle_check(system, &upsilon, pair_samples)?;
    let verdict = match report.violations.first() {
        None => GaugeVerdict::Invariant,
        Some(w) => GaugeVerdict::FiberwiseOnly { witness: w.clone() },
    };
    Ok(InvariantGaugeOutcome { upsilon, verdict, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::flatmodel::origin;
    use crate::graded::Cochain1;
    use crate::sample;
    use crate::symmetries::make_origin_symmetry;

    fn proj2() -> Arc<GradedAlgebra> {
        GradedAlgebra::projective(2).unwrap()
    }

    fn zero_system(alg: &Arc<GradedAlgebra>) -> SymmetrySystem {
        let n = alg.grade_dim(1);
        SymmetrySystem::conjugation_from_z(alg, &vec![Rat::zero(); n]).unwrap()
    }

    #[test]
    fn displacement_of_identity_is_zero() {
        let alg = proj2();
        let mut rng = sample::stream(47, 0);
        for _ in 0..10 {
            let u0 = sample::random_frame(&mut rng, &alg, 4);
            let (f, image) = displacement(&GroupElement::identity(*alg.model()), &u0).unwrap();
            assert!(f.is_zero());
            assert_eq!(image, u0);
        }
    }

    #[test]
    fn displacement_of_origin_symmetry_recovers_exp_parameter() {
        let alg = proj2();
        let z = AlgElement::from_grade_vector(&alg, 1, &[rat(2, 3), rat(-1, 2)]).unwrap();
        let s = make_origin_symmetry(&alg, &z).unwrap();
        let u0 = Frame::canonical(&alg, &[Rat::zero(), Rat::zero()]).unwrap();
        let (f, image) = displacement(&s.element, &u0).unwrap();
        assert_eq!(f, z);
        assert!(image.base_x().is_zero());
    }

    #[test]
    fn translations_preserve_the_flat_gauge() {
        let alg = proj2();
        let mut rng = sample::stream(53, 0);
        for _ in 0..10 {
            let v = sample::random_grade_vector(&mut rng, &alg, -1, 4);
            let t = exp_nilpotent(&v).unwrap();
            let u0 = sample::random_frame(&mut rng, &alg, 4);
            let (f, _) = displacement(&t, &u0).unwrap();
            assert!(f.is_zero());
        }
    }

    #[test]
    fn upsilon_vanishes_for_the_plain_conjugation_system() {
        let alg = proj2();
        let system = zero_system(&alg);
        let mut rng = sample::stream(59, 0);
        let frames: Vec<Frame> =
            (0..8).map(|_| sample::random_frame(&mut rng, &alg, 4)).collect();
        let u = upsilon_from_system(&system, &frames).unwrap();
        for frame in &frames {
            assert!(u.evaluate(frame).unwrap().is_zero());
        }
        // recomputation is idempotent
        let u2 = upsilon_from_system(&system, &frames).unwrap();
        assert_eq!(u.stored(), u2.stored());
    }

    #[test]
    fn upsilon_at_origin_is_minus_half_z() {
        let alg = proj2();
        let system = fixtures::loos_violating_table(&alg).unwrap();
        let u0 = Frame::canonical(&alg, &[Rat::zero(), Rat::zero()]).unwrap();
        let u = upsilon_from_system(&system, std::slice::from_ref(&u0)).unwrap();
        let v = u.evaluate(&u0).unwrap();
        // the fixture places exp parameter (1, 0) at the origin
        assert_eq!(v.grade_vector(1), vec![rat(-1, 2), Rat::zero()]);
    }

    #[test]
    fn fiberwise_identity_on_sampled_frames() {
        // at the frame's own base point the image value is minus the value
        let alg = proj2();
        for system in [zero_system(&alg), fixtures::loos_violating_table(&alg).unwrap()] {
            let frames: Vec<Frame> = match system.table_points() {
                Some(points) => points
                    .iter()
                    .map(|p| Frame::canonical(&alg, &p.affine_coords().unwrap()).unwrap())
                    .collect(),
                None => {
                    let mut rng = sample::stream(61, 1);
                    (0..8).map(|_| sample::random_frame(&mut rng, &alg, 4)).collect()
                }
            };
            let u = upsilon_from_system(&system, &frames).unwrap();
            for frame in &frames {
                let x = frame.base_point();
                let s = system.symmetry_at(&x).unwrap();
                let (_, image) = displacement(&s.element, frame).unwrap();
                assert_eq!(image.base_affine(), frame.base_affine());
                let lhs = u.evaluate(&image).unwrap();
                let rhs = u.evaluate(frame).unwrap().neg();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn equivariance_of_the_displacement_gauge() {
        // Upsilon computed directly on a non-canonical frame agrees with the
        // equivariant extension of the canonical value.
        let alg = proj2();
        let system = fixtures::loos_violating_table(&alg).unwrap();
        let mut rng = sample::stream(67, 0);
        for base in [[Rat::zero(), Rat::zero()], [Rat::zero(), rat(1, 1)]] {
            let x = ModelPoint::from_affine(*alg.model(), &base).unwrap();
            let s = system.symmetry_at(&x).unwrap();
            for _ in 0..6 {
                let g0 = sample::random_g0(&mut rng, &alg);
                let frame = Frame::new(
                    AlgElement::from_grade_vector(&alg, -1, &base).unwrap(),
                    g0.clone(),
                )
                .unwrap();
                let (f_direct, _) = displacement(&s.element, &frame).unwrap();
                let direct = f_direct.scale(&rat(-1, 2));
                let canonical = upsilon_at_canonical(&system, &base).unwrap();
                let extended = adjoint_action(&g0.inverse(), &canonical).unwrap();
                assert_eq!(direct, extended);
            }
        }
    }

    #[test]
    fn cocycle_holds_for_loos_system_and_fails_for_fixture() {
        let alg = proj2();
        let system = zero_system(&alg);
        let mut rng = sample::stream(71, 0);
        let frames: Vec<Frame> =
            (0..10).map(|_| sample::random_frame(&mut rng, &alg, 4)).collect();
        let samples: Vec<(ModelPoint, Frame)> = frames
            .iter()
            .map(|f| (sample::random_in_cell_point(&mut rng, *alg.model(), 4), f.clone()))
            .collect();
        let u = upsilon_from_system(&system, &frames).unwrap();
        let report = cocycle_check(&system, &u, &samples).unwrap();
        assert!(report.passed());
        assert_eq!(report.samples_checked, 10);
        assert!(!report.vacuous);

        // the violating fixture has a nonzero residual at a covered sample
        let table = fixtures::loos_violating_table(&alg).unwrap();
        let o = origin(*alg.model());
        let p_frame = Frame::canonical(&alg, &[Rat::zero(), rat(1, 1)]).unwrap();
        let tu = upsilon_from_system(&table, std::slice::from_ref(&p_frame)).unwrap();
        let report = cocycle_check(&table, &tu, &[(o, p_frame)]).unwrap();
        assert!(!report.passed());
        assert_eq!(report.violations[0].residual, vec![rat(1, 1), Rat::zero()]);
    }

    #[test]
    fn cocycle_reduces_to_fiberwise_identity_at_own_base() {
        let alg = proj2();
        let system = zero_system(&alg);
        let mut rng = sample::stream(73, 0);
        let frames: Vec<Frame> =
            (0..6).map(|_| sample::random_frame(&mut rng, &alg, 3)).collect();
        let samples: Vec<(ModelPoint, Frame)> =
            frames.iter().map(|f| (f.base_point(), f.clone())).collect();
        let u = upsilon_from_system(&system, &frames).unwrap();
        assert!(cocycle_check(&system, &u, &samples).unwrap().passed());
    }

    #[test]
    fn distributivity_identity() {
        let alg = proj2();
        let system = zero_system(&alg);
        let mut rng = sample::stream(79, 0);
        let samples: Vec<(ModelPoint, Frame)> = (0..10)
            .map(|_| {
                (
                    sample::random_in_cell_point(&mut rng, *alg.model(), 4),
                    sample::random_frame(&mut rng, &alg, 4),
                )
            })
            .collect();
        assert!(distributivity_identity_check(&system, &samples).unwrap().passed());

        // trivial substitution x = y = base point
        let f = sample::random_frame(&mut rng, &alg, 4);
        let trivial = vec![(f.base_point(), f)];
        assert!(distributivity_identity_check(&system, &trivial).unwrap().passed());

        // the violating fixture fails on a witness sample
        let table = fixtures::loos_violating_table(&alg).unwrap();
        let o = origin(*alg.model());
        let p_frame = Frame::canonical(&alg, &[Rat::zero(), rat(1, 1)]).unwrap();
        let report = distributivity_identity_check(&table, &[(o, p_frame)]).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn gauge_covariance_under_constant_shift() {
        // recomputing F in a shifted gauge changes it exactly by the
        // difference of the shift's equivariant values at the two frames
        let alg = proj2();
        let mut rng = sample::stream(83, 0);
        let system = zero_system(&alg);
        for _ in 0..10 {
            let z0 = sample::random_grade_vector(&mut rng, &alg, 1, 4);
            let u0 = sample::random_frame(&mut rng, &alg, 4);
            let x = sample::random_in_cell_point(&mut rng, *alg.model(), 4);
            let s = system.symmetry_at(&x).unwrap();
            let (f_flat, image) = displacement(&s.element, &u0).unwrap();
            let (f_shifted, image2) =
                displacement_in_shifted_gauge(&s.element, &u0, &z0).unwrap();
            assert_eq!(image, image2);
            let shift_at = |frame: &Frame| {
                adjoint_action(&frame.g0_part().inverse(), &z0).unwrap()
            };
            let expected = f_flat.sub(&shift_at(&image).sub(&shift_at(&u0)));
            assert_eq!(f_shifted, expected);
        }
    }

    #[test]
    fn rho_transform_cases() {
        let alg = proj2();
        let zero1 = Cochain1::zero(&alg, Some(1));
        let xi = AlgElement::from_grade_vector(&alg, -1, &[rat(1, 1), Rat::zero()]).unwrap();

        // identity on P when the gauge terms vanish
        let mut cols = vec![vec![Rat::zero(); alg.dim()]; 2];
        cols[0][alg.grade_range(1).start] = rat(5, 7);
        let rho = Cochain1::from_columns(&alg, cols, Some(1)).unwrap();
        let out =
            rho_transform(&rho, &zero1, &AlgElement::zero(&alg), &xi).unwrap();
        assert_eq!(out, rho.evaluate(&xi).unwrap());

        // pure nested-bracket term: P = 0, nabla = 0, Upsilon = Z_1, xi = X_1
        let z1 = AlgElement::basis(&alg, alg.grade_range(1).start);
        let out = rho_transform(&Cochain1::zero(&alg, Some(1)), &zero1, &z1, &xi).unwrap();
        let expected = z1
            .bracket(&z1.bracket(&xi).unwrap())
            .unwrap()
            .scale(&rat(1, 2));
        assert_eq!(out, expected);
        assert!(out.is_pure_grade(1));
        // cross-check through the structure constants
        let via_table = alg.bracket_coords(z1.coords(), &alg.bracket_coords(z1.coords(), xi.coords()));
        let half: Vec<Rat> = via_table.iter().map(|c| c * &rat(1, 2)).collect();
        assert_eq!(out.coords(), &half[..]);

        // additivity in the Rho slot: the Upsilon term enters once
        let mut cols2 = vec![vec![Rat::zero(); alg.dim()]; 2];
        cols2[0][alg.grade_range(1).start + 1] = rat(-2, 3);
        let rho2 = Cochain1::from_columns(&alg, cols2, Some(1)).unwrap();
        let sum = rho.add(&rho2);
        let lhs = rho_transform(&sum, &zero1, &z1, &xi).unwrap();
        let a = rho_transform(&rho, &zero1, &z1, &xi).unwrap();
        let b = rho_transform(&rho2, &zero1, &z1, &xi).unwrap();
        let upsilon_term = z1
            .bracket(&z1.bracket(&xi).unwrap())
            .unwrap()
            .scale(&rat(1, 2));
        assert_eq!(lhs, a.add(&b).sub(&upsilon_term));
    }

    #[test]
    fn nonzero_base_conjugation_fails_both_the_law_and_the_cocycle() {
        // a conjugation family with nonzero base exp parameter is a genuine
        // system of symmetries but violates the composition law; the gauge
        // verdict must agree with the multiplication-law verdict
        use crate::symmetries::{check_loos_axioms, LoosAxiom};
        let alg = proj2();
        let system =
            SymmetrySystem::conjugation_from_z(&alg, &[rat(1, 1), rat(-2, 1)]).unwrap();
        let mut rng = sample::stream(5, 1);
        let pairs = sample::random_in_cell_pairs(&mut rng, *alg.model(), 40, 5);
        let evaluable: Vec<_> = pairs
            .into_iter()
            .filter(|(x, y)| match system.symmetry_at(x) {
                Ok(s) => system.covers(&act(&s.element, y)),
                Err(_) => false,
            })
            .collect();
        assert!(evaluable.len() >= 10, "enough covered pairs");
        let report = check_loos_axioms(&system, &evaluable).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().all(|f| f.axiom == LoosAxiom::Composition));

        let mut rng = sample::stream(5, 2);
        let frames: Vec<Frame> =
            (0..10).map(|_| sample::random_frame(&mut rng, &alg, 4)).collect();
        let samples: Vec<(ModelPoint, Frame)> = (0..30)
            .map(|i| {
                (
                    sample::random_in_cell_point(&mut rng, *alg.model(), 4),
                    frames[i % 10].clone(),
                )
            })
            .collect();
        let u = upsilon_from_system(&system, &frames).unwrap();
        let mut checked = 0;
        let mut violations = 0;
        for one in &samples {
            if let Ok(r) = cocycle_check(&system, &u, std::slice::from_ref(one)) {
                checked += r.samples_checked;
                violations += r.violations.len();
            }
        }
        assert!(checked >= 10, "enough covered samples");
        assert!(violations > 0, "the cocycle must fail for this family");
    }

    #[test]
    fn invariant_gauge_verdicts() {
        let alg = proj2();
        let system = zero_system(&alg);
        let mut rng = sample::stream(89, 0);
        let frames: Vec<Frame> =
            (0..6).map(|_| sample::random_frame(&mut rng, &alg, 4)).collect();
        let samples: Vec<(ModelPoint, Frame)> = frames
            .iter()
            .map(|f| (sample::random_in_cell_point(&mut rng, *alg.model(), 4), f.clone()))
            .collect();
        let outcome = invariant_gauge(&system, &frames, &samples).unwrap();
        assert!(matches!(outcome.verdict, GaugeVerdict::Invariant));
        assert!(!outcome.report.vacuous);

        let table = fixtures::loos_violating_table(&alg).unwrap();
        let o = origin(*alg.model());
        let p_frame = Frame::canonical(&alg, &[Rat::zero(), rat(1, 1)]).unwrap();
        let outcome = invariant_gauge(
            &table,
            std::slice::from_ref(&p_frame),
            &[(o, p_frame.clone())],
        )
        .unwrap();
        assert!(matches!(outcome.verdict, GaugeVerdict::FiberwiseOnly { .. }));

        // empty sample set: invariant vacuously, flagged as such
        let outcome = invariant_gauge(&table, std::slice::from_ref(&p_frame), &[]).unwrap();
        assert!(matches!(outcome.verdict, GaugeVerdict::Invariant));
        assert!(outcome.report.vacuous);
    }
}
