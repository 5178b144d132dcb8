//! The punctured projective model: remove the two points spanned by the last
//! two basis vectors. The automorphisms that survive are exactly those whose
//! last two columns preserve or swap the removed points; the line through the
//! removed points is confined, which obstructs transitivity, yet every point
//! still carries a symmetry. At line points the symmetry is forced to swap
//! the punctures, with last two columns given by an explicit closed form.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flatmodel::{act, GroupElement, ModelPoint};
use crate::graded::{AlgElement, GradedAlgebra};
use crate::model::ModelTag;
use crate::ratlin::{rat, solve, Mat, Rat};
use crate::symmetries::{make_origin_symmetry, transport, Symmetry};

/// Real projective space of dimension `m` with the points `[e_m]` and
/// `[e_{m+1}]` (1-based) removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PuncturedModel {
    pub m: usize,
}

impl PuncturedModel {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput("puncturing needs m >= 2".into()));
        }
        Ok(PuncturedModel { m })
    }

    pub fn tag(&self) -> ModelTag {
        ModelTag::Projective { m: self.m }
    }

    pub fn algebra(&self) -> Result<Arc<GradedAlgebra>> {
        GradedAlgebra::projective(self.m)
    }

    /// The two removed points, as points of the unpunctured model.
    pub fn removed_points(&self) -> (ModelPoint, ModelPoint) {
        let amb = self.m + 1;
        let mut a = vec![Rat::zero(); amb];
        a[amb - 2] = Rat::one();
        let mut b = vec![Rat::zero(); amb];
        b[amb - 1] = Rat::one();
        (
            ModelPoint::new(a, self.tag()).expect("basis point"),
            ModelPoint::new(b, self.tag()).expect("basis point"),
        )
    }

    pub fn is_removed(&self, x: &ModelPoint) -> bool {
        let (a, b) = self.removed_points();
        *x == a || *x == b
    }

    /// Whether `x` lies on the projective line through the removed points.
    pub fn on_removed_line(&self, x: &ModelPoint) -> bool {
        x.coords()[..self.m - 1].iter().all(Rat::is_zero)
    }

    /// A line point that survives the puncture: both last coordinates nonzero.
    pub fn is_surviving_line_point(&self, x: &ModelPoint) -> bool {
        self.on_removed_line(x)
            && !x.coords()[self.m - 1].is_zero()
            && !x.coords()[self.m].is_zero()
    }
}

/// Whether an automorphism restricts to the punctured model, and how it acts
/// on the removed points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AllowedMode {
    Preserve,
    Swap,
}

impl AllowedMode {
    pub fn compose(self, other: AllowedMode) -> AllowedMode {
        if self == other {
            AllowedMode::Preserve
        } else {
            AllowedMode::Swap
        }
    }
}

/// Classifies an element by exact inspection of the last two columns of its
/// canonical representative: they must hit only the last two rows, either
/// diagonally (preserve) or antidiagonally (swap). `None` means the element
/// does not restrict to the punctured model.
pub fn is_allowed(g: &GroupElement, model: &PuncturedModel) -> Option<AllowedMode> {
    let rep = g.rep();
    let amb = model.m + 1;
    debug_assert_eq!(rep.rows(), amb);
    for col in [amb - 2, amb - 1] {
        for row in 0..amb - 2 {
            if !rep[(row, col)].is_zero() {
                return None;
            }
        }
    }
    let diag = !rep[(amb - 2, amb - 2)].is_zero()
        && !rep[(amb - 1, amb - 1)].is_zero()
        && rep[(amb - 1, amb - 2)].is_zero()
        && rep[(amb - 2, amb - 1)].is_zero();
    let anti = !rep[(amb - 1, amb - 2)].is_zero()
        && !rep[(amb - 2, amb - 1)].is_zero()
        && rep[(amb - 2, amb - 2)].is_zero()
        && rep[(amb - 1, amb - 1)].is_zero();
    match (diag, anti) {
        (true, false) => Some(AllowedMode::Preserve),
        (false, true) => Some(AllowedMode::Swap),
        _ => None,
    }
}

/// Checks that an allowed automorphism keeps a surviving line point on the
/// line. The contract is that this always holds.
pub fn line_confinement_check(g: &GroupElement, model: &PuncturedModel, w: &ModelPoint) -> Result<bool> {
    if !model.is_surviving_line_point(w) {
        return Err(Error::InvalidInput(
            "confinement is checked at surviving line points".into(),
        ));
    }
    if is_allowed(g, model).is_none() {
        return Err(Error::InvalidInput("element does not restrict to the punctured model".into()));
    }
    Ok(model.on_removed_line(&act(g, w)))
}

/// A symmetry at a point off the removed line (and not removed), built by
/// conjugating a base symmetry with a completion that preserves the
/// punctures. The result is an allowed automorphism in preserve mode.
pub fn off_line_symmetry(x: &ModelPoint, model: &PuncturedModel) -> Result<Symmetry> {
    if model.is_removed(x) {
        return Err(Error::InvalidInput("the point is removed from the model".into()));
    }
    if model.on_removed_line(x) {
        return Err(Error::InvalidInput(
            "points on the removed line need the swapping construction".into(),
        ));
    }
    let m = model.m;
    let amb = m + 1;
    let v = x.coords();
    let lead = (0..m - 1).position(|i| !v[i].is_zero()).ok_or_else(|| {
        Error::InvalidInput("one of the first m-1 coordinates must be nonzero".into())
    })?;
    // columns: v, the unused early basis vectors, then e_m and e_{m+1}
    let mut rep = Mat::zeros(amb, amb);
    for (r, c) in v.iter().enumerate() {
        rep[(r, 0)] = c.clone();
    }
    let mut col = 1;
    for j in 0..m - 1 {
        if j == lead {
            continue;
        }
        rep[(j, col)] = Rat::one();
        col += 1;
    }
    rep[(amb - 2, amb - 2)] = Rat::one();
    rep[(amb - 1, amb - 1)] = Rat::one();
    let g = GroupElement::new(rep, model.tag())?;
    debug_assert_eq!(is_allowed(&g, model), Some(AllowedMode::Preserve));
    let algebra = model.algebra()?;
    let base = make_origin_symmetry(&algebra, &AlgElement::zero(&algebra))?;
    Ok(transport(&base, &g))
}

/// The closed form of the last two columns of the swapping line symmetry,
/// in terms of the representative entries `x_m`, `x_{m+1}` and the exp
/// parameter `v_m`. Returns `(col_m, col_{m+1})` as length `m+1` vectors.
pub fn line_symmetry_expected_columns(
    m: usize,
    x_m: &Rat,
    x_m1: &Rat,
    v_m: &Rat,
) -> (Vec<Rat>, Vec<Rat>) {
    let amb = m + 1;
    let xv = x_m * v_m;
    let mut col_m = vec![Rat::zero(); amb];
    col_m[amb - 2] = &xv - &Rat::one();
    col_m[amb - 1] = x_m1 * v_m;
    let mut col_m1 = vec![Rat::zero(); amb];
    col_m1[amb - 2] = &(x_m / x_m1) * &(&rat(2, 1) - &xv);
    col_m1[amb - 1] = &Rat::one() - &xv;
    (col_m, col_m1)
}

/// Everything the line-symmetry construction produces: the symmetry itself,
/// the raw conjugation product before canonicalization, and the exact
/// residuals of its last two columns against the closed form.
#[derive(Clone, Debug)]
pub struct LineSymmetryData {
    pub symmetry: Symmetry,
    pub raw_product: Mat,
    pub residual_col_m: Vec<Rat>,
    pub residual_col_m1: Vec<Rat>,
    pub swaps_removed_points: bool,
}

/// Builds the swapping symmetry at a surviving line point from arbitrary
/// (not necessarily canonical) representative coordinates `x_m`, `x_{m+1}`:
/// conjugates the origin symmetry with exp parameter `v_m = 1/x_m` in the
/// second-to-last slot by the map `e_1 -> w, e_j -> e_j, e_{m+1} -> e_1`.
pub fn line_symmetry_detailed(
    model: &PuncturedModel,
    x_m: &Rat,
    x_m1: &Rat,
) -> Result<LineSymmetryData> {
    if x_m.is_zero() || x_m1.is_zero() {
        return Err(Error::InvalidInput(
            "line points have both distinguished coordinates nonzero".into(),
        ));
    }
    let m = model.m;
    let amb = m + 1;
    let tag = model.tag();
    // w = (0, ..., 0, x_m, x_{m+1})
    let mut w = vec![Rat::zero(); amb];
    w[amb - 2] = x_m.clone();
    w[amb - 1] = x_m1.clone();

    // g: e_1 -> w, e_2 -> e_2, ..., e_m -> e_m, e_{m+1} -> e_1
    let mut g = Mat::zeros(amb, amb);
    for (r, c) in w.iter().enumerate() {
        g[(r, 0)] = c.clone();
    }
    for j in 1..m {
        g[(j, j)] = Rat::one();
    }
    g[(0, amb - 1)] = Rat::one();

    // base symmetry (1, W; 0, -E) with W supported in the second-to-last slot
    let v_m = x_m.recip()?;
    let mut s0 = Mat::identity(amb);
    for i in 1..amb {
        s0[(i, i)] = -Rat::one();
    }
    s0[(0, amb - 2)] = v_m.clone();

    let raw = &(&g * &s0) * &g.inverse()?;
    let (exp_m, exp_m1) = line_symmetry_expected_columns(m, x_m, x_m1, &v_m);
    let residual_col_m: Vec<Rat> = (0..amb).map(|r| &raw[(r, amb - 2)] - &exp_m[r]).collect();
    let residual_col_m1: Vec<Rat> =
        (0..amb).map(|r| &raw[(r, amb - 1)] - &exp_m1[r]).collect();

    let element = GroupElement::new(raw.clone(), tag)?;
    let center = ModelPoint::new(w, tag)?;
    let (pa, pb) = model.removed_points();
    let swaps = act(&element, &pa) == pb && act(&element, &pb) == pa;
    Ok(LineSymmetryData {
        symmetry: Symmetry { element, center },
        raw_product: raw,
        residual_col_m,
        residual_col_m1,
        swaps_removed_points: swaps,
    })
}

/// The symmetry at a surviving line point; it swaps the removed points.
pub fn line_symmetry(w: &ModelPoint, model: &PuncturedModel) -> Result<Symmetry> {
    if !model.is_surviving_line_point(w) {
        return Err(Error::InvalidInput(
            "line symmetries exist at surviving line points only".into(),
        ));
    }
    let x_m = w.coords()[model.m - 1].clone();
    let x_m1 = w.coords()[model.m].clone();
    Ok(line_symmetry_detailed(model, &x_m, &x_m1)?.symmetry)
}

/// Exact elimination certificate at a line point: over the affine family of
/// candidate symmetries (conjugates of `(1, W; 0, -E)` by the fixed line
/// completion), the conditions "preserve both removed points" have no
/// solution in `W`, while the swap conditions cut out an affine subspace of
/// dimension `m - 1`.
#[derive(Clone, Debug, Serialize)]
pub struct LineCertificate {
    pub preserve_has_solution: bool,
    pub swap_solution_dim: Option<usize>,
}

pub fn line_point_symmetry_certificate(
    model: &PuncturedModel,
    x_m: &Rat,
    x_m1: &Rat,
) -> Result<LineCertificate> {
    if x_m.is_zero() || x_m1.is_zero() {
        return Err(Error::InvalidInput(
            "line points have both distinguished coordinates nonzero".into(),
        ));
    }
    let m = model.m;
    let amb = m + 1;
    // the conjugate is affine in W: s(W) = M0 + sum_k W_k M_k
    let mut g = Mat::zeros(amb, amb);
    g[(amb - 2, 0)] = x_m.clone();
    g[(amb - 1, 0)] = x_m1.clone();
    for j in 1..m {
        g[(j, j)] = Rat::one();
    }
    g[(0, amb - 1)] = Rat::one();
    let ginv = g.inverse()?;
    let mut s_base = Mat::identity(amb);
    for i in 1..amb {
        s_base[(i, i)] = -Rat::one();
    }
    let m0 = &(&g * &s_base) * &ginv;
    let mks: Vec<Mat> = (0..m)
        .map(|k| {
            let mut w_mat = Mat::zeros(amb, amb);
            w_mat[(0, k + 1)] = Rat::one();
            &(&g * &w_mat) * &ginv
        })
        .collect();

    // proportionality conditions are linear in W: for a target column c and
    // a target axis r0, every entry of s(W) e_c off the axis must vanish
    let build_system = |conditions: &[(usize, usize)]| {
        // rows: one equation per (column, row) pair off the axis
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for &(c, r0) in conditions {
            for r in 0..amb {
                if r == r0 {
                    continue;
                }
                let coeffs: Vec<Rat> = mks.iter().map(|mk| mk[(r, c)].clone()).collect();
                rows.push(coeffs);
                rhs.push(-&m0[(r, c)]);
            }
        }
        let a = Mat::from_fn(rows.len(), m, |i, j| rows[i][j].clone());
        let b = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i].clone());
        (a, b)
    };

    let (pa, pb) = build_system(&[(amb - 2, amb - 2), (amb - 1, amb - 1)]);
    let preserve = solve(&pa, &pb)?;
    let (sa, sb) = build_system(&[(amb - 2, amb - 1), (amb - 1, amb - 2)]);
    let swap = solve(&sa, &sb)?;
    Ok(LineCertificate {
        preserve_has_solution: preserve.is_some(),
        swap_solution_dim: swap.map(|s| s.nullspace.len()),
    })
}

/// Statistics of the randomized transitivity probe.
#[derive(Clone, Debug, Serialize, Default)]
pub struct ProbeReport {
    pub automorphisms_sampled: usize,
    pub line_points_sampled: usize,
    pub confinement_checks: usize,
    pub escapes: usize,
    pub off_line_orbit_points: usize,
    pub sampling_discards: usize,
    pub vacuous: bool,
}

/// Randomized certificate that sampled allowed automorphisms never connect
/// the two strata: line points stay on the line, and the orbit of an
/// off-line point under the samples is recorded.
pub fn homogeneity_probe(
    model: &PuncturedModel,
    rng: &mut rand_chacha::ChaCha8Rng,
    automorphism_samples: usize,
    line_point_samples: usize,
) -> Result<ProbeReport> {
    let mut report = ProbeReport {
        vacuous: automorphism_samples == 0 || line_point_samples == 0,
        ..Default::default()
    };
    let mut autos = Vec::with_capacity(automorphism_samples);
    for _ in 0..automorphism_samples {
        let (g, discards) = crate::sample::random_allowed_automorphism(rng, model, 4);
        report.sampling_discards += discards;
        autos.push(g);
    }
    report.automorphisms_sampled = autos.len();
    let line_points: Vec<ModelPoint> = (0..line_point_samples)
        .map(|_| crate::sample::random_surviving_line_point(rng, model, 6))
        .collect();
    report.line_points_sampled = line_points.len();
    for g in &autos {
        for w in &line_points {
            report.confinement_checks += 1;
            if !line_confinement_check(g, model, w)? {
                report.escapes += 1;
            }
        }
    }
    // orbit of one off-line point under the sampled automorphisms
    let mut base = vec![Rat::zero(); model.m + 1];
    base[0] = Rat::one();
    let x = ModelPoint::new(base, model.tag())?;
    let mut orbit: Vec<ModelPoint> = Vec::new();
    for g in &autos {
        let y = act(g, &x);
        debug_assert!(!model.on_removed_line(&y), "allowed orbits stay off the line");
        if !orbit.contains(&y) {
            orbit.push(y);
        }
    }
    report.off_line_orbit_points = orbit.len();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::symmetries::verify_symmetry;

    #[test]
    fn allowed_classification() {
        let model = PuncturedModel::new(3).unwrap();
        let tag = model.tag();
        assert_eq!(
            is_allowed(&GroupElement::identity(tag), &model),
            Some(AllowedMode::Preserve)
        );
        // swap of the last two coordinates
        let mut p = Mat::identity(4);
        p[(2, 2)] = Rat::zero();
        p[(3, 3)] = Rat::zero();
        p[(2, 3)] = Rat::one();
        p[(3, 2)] = Rat::one();
        let p = GroupElement::new(p, tag).unwrap();
        assert_eq!(is_allowed(&p, &model), Some(AllowedMode::Swap));
        // a generic entry in the last-two-column block above the axis
        let mut bad = Mat::identity(4);
        bad[(0, 2)] = rat(1, 1);
        let bad = GroupElement::new(bad, tag).unwrap();
        assert_eq!(is_allowed(&bad, &model), None);
    }

    #[test]
    fn composition_closure_with_mode_parity() {
        let model = PuncturedModel::new(3).unwrap();
        let mut rng = sample::stream(97, 0);
        for _ in 0..40 {
            let (g, _) = sample::random_allowed_automorphism(&mut rng, &model, 3);
            let (h, _) = sample::random_allowed_automorphism(&mut rng, &model, 3);
            let mg = is_allowed(&g, &model).unwrap();
            let mh = is_allowed(&h, &model).unwrap();
            let prod = g.mul(&h);
            assert_eq!(is_allowed(&prod, &model), Some(mg.compose(mh)));
        }
    }

    #[test]
    fn confinement_basics() {
        let model = PuncturedModel::new(3).unwrap();
        let tag = model.tag();
        let w = ModelPoint::new(
            vec![Rat::zero(), Rat::zero(), Rat::one(), Rat::one()],
            tag,
        )
        .unwrap();
        assert!(line_confinement_check(&GroupElement::identity(tag), &model, &w).unwrap());

        let w2 = ModelPoint::new(
            vec![Rat::zero(), Rat::zero(), Rat::one(), rat(2, 1)],
            tag,
        )
        .unwrap();
        let mut p = Mat::identity(4);
        p[(2, 2)] = Rat::zero();
        p[(3, 3)] = Rat::zero();
        p[(2, 3)] = rat(3, 1);
        p[(3, 2)] = rat(1, 2);
        let p = GroupElement::new(p, tag).unwrap();
        assert!(line_confinement_check(&p, &model, &w2).unwrap());

        // off-line points are rejected as inputs
        let off = ModelPoint::new(vec![Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()], tag)
            .unwrap();
        assert!(line_confinement_check(&p, &model, &off).is_err());
    }

    #[test]
    fn off_line_symmetry_at_origin_and_generic_point() {
        let model = PuncturedModel::new(3).unwrap();
        let tag = model.tag();
        let o = crate::flatmodel::origin(tag);
        let s = off_line_symmetry(&o, &model).unwrap();
        assert_eq!(s.center, o);
        assert!(verify_symmetry(&s).unwrap().all_hold());
        assert_eq!(is_allowed(&s.element, &model), Some(AllowedMode::Preserve));
        // W vanishes entirely for the base choice, in particular its last two slots
        assert!(s.element.rep()[(0, 2)].is_zero());
        assert!(s.element.rep()[(0, 3)].is_zero());

        let x = ModelPoint::new(vec![rat(1, 1), rat(1, 1), Rat::zero(), Rat::zero()], tag)
            .unwrap();
        let s = off_line_symmetry(&x, &model).unwrap();
        assert_eq!(s.center, x);
        assert!(verify_symmetry(&s).unwrap().all_hold());
        assert_eq!(is_allowed(&s.element, &model), Some(AllowedMode::Preserve));

        // removed and line points are rejected
        let (pa, _) = model.removed_points();
        assert!(off_line_symmetry(&pa, &model).is_err());
        let w = ModelPoint::new(vec![Rat::zero(), Rat::zero(), Rat::one(), Rat::one()], tag)
            .unwrap();
        assert!(off_line_symmetry(&w, &model).is_err());
    }

    #[test]
    fn line_symmetry_worked_example() {
        // m = 3, w = [0 : 0 : 1 : 2], exp parameter 1/x_3 = 1:
        // the closed-form entries are x_m v_m - 1 = 0, x_{m+1} v_m = 2,
        // (x_m / x_{m+1}) (2 - x_m v_m) = 1/2, 1 - x_m v_m = 0.
        let model = PuncturedModel::new(3).unwrap();
        let data = line_symmetry_detailed(&model, &rat(1, 1), &rat(2, 1)).unwrap();
        assert!(data.residual_col_m.iter().all(Rat::is_zero));
        assert!(data.residual_col_m1.iter().all(Rat::is_zero));
        let raw = &data.raw_product;
        assert_eq!(raw[(2, 2)], Rat::zero());
        assert_eq!(raw[(3, 2)], rat(2, 1));
        assert_eq!(raw[(2, 3)], rat(1, 2));
        assert_eq!(raw[(3, 3)], Rat::zero());
        assert!(data.swaps_removed_points);
        assert!(verify_symmetry(&data.symmetry).unwrap().all_hold());
        assert_eq!(is_allowed(&data.symmetry.element, &model), Some(AllowedMode::Swap));
    }

    #[test]
    fn line_symmetry_closed_form_over_random_points() {
        for m in [2usize, 3, 4] {
            let model = PuncturedModel::new(m).unwrap();
            let mut rng = sample::stream(101, m as u64);
            for _ in 0..25 {
                let x_m = sample::random_nonzero_rat(&mut rng, 6);
                let x_m1 = sample::random_nonzero_rat(&mut rng, 6);
                let data = line_symmetry_detailed(&model, &x_m, &x_m1).unwrap();
                assert!(data.residual_col_m.iter().all(Rat::is_zero));
                assert!(data.residual_col_m1.iter().all(Rat::is_zero));
                assert!(data.swaps_removed_points);
                assert!(verify_symmetry(&data.symmetry).unwrap().all_hold());
            }
        }
    }

    #[test]
    fn line_symmetry_from_point() {
        let model = PuncturedModel::new(2).unwrap();
        let w = ModelPoint::new(vec![Rat::zero(), rat(3, 1), rat(-5, 2)], model.tag()).unwrap();
        let s = line_symmetry(&w, &model).unwrap();
        assert_eq!(s.center, w);
        assert!(verify_symmetry(&s).unwrap().all_hold());
        assert_eq!(is_allowed(&s.element, &model), Some(AllowedMode::Swap));
        // removed points rejected
        let (pa, _) = model.removed_points();
        assert!(line_symmetry(&pa, &model).is_err());
    }

    #[test]
    fn elimination_certificate() {
        for m in [2usize, 3, 4] {
            let model = PuncturedModel::new(m).unwrap();
            let mut rng = sample::stream(103, m as u64);
            for _ in 0..10 {
                let x_m = sample::random_nonzero_rat(&mut rng, 5);
                let x_m1 = sample::random_nonzero_rat(&mut rng, 5);
                let cert =
                    line_point_symmetry_certificate(&model, &x_m, &x_m1).unwrap();
                assert!(!cert.preserve_has_solution, "no preserving symmetry at line points");
                assert_eq!(cert.swap_solution_dim, Some(m - 1));
            }
        }
    }

    #[test]
    fn probe_records_confinement() {
        let model = PuncturedModel::new(3).unwrap();
        let mut rng = sample::stream(107, 0);
        let report = homogeneity_probe(&model, &mut rng, 50, 10).unwrap();
        assert_eq!(report.escapes, 0);
        assert_eq!(report.confinement_checks, 500);
        assert!(!report.vacuous);
        assert!(report.off_line_orbit_points >= 1);

        let empty = homogeneity_probe(&model, &mut rng, 0, 0).unwrap();
        assert!(empty.vacuous);
    }
}
