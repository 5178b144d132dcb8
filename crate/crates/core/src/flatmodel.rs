//! The homogeneous models as concrete point sets with exact group actions.
//!
//! Group elements are projective classes of matrices with a canonical
//! representative (first nonzero entry in column-major order scaled to +1),
//! so equality of classes is structural equality of representatives.
//! The big-cell factorization `g = exp(X) g0 exp(Z)` is realized through the
//! exact block LDU of [`crate::ratlin`].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{AlgElement, GradedAlgebra};
use crate::model::{translation_matrix, ModelTag};
use crate::ratlin::{block_ldu, Mat, Rat};

/// An invertible matrix modulo scalar multiples, kept canonical.
/// Conformal representatives additionally satisfy the quadratic-form
/// relation exactly.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupElementRepr", into = "GroupElementRepr")]
pub struct GroupElement {
    rep: Mat,
    model: ModelTag,
}

#[derive(Serialize, Deserialize)]
struct GroupElementRepr {
    rep: Mat,
    model: ModelTag,
}

impl TryFrom<GroupElementRepr> for GroupElement {
    type Error = Error;
    fn try_from(r: GroupElementRepr) -> Result<GroupElement> {
        GroupElement::new(r.rep, r.model)
    }
}

impl From<GroupElement> for GroupElementRepr {
    fn from(g: GroupElement) -> GroupElementRepr {
        GroupElementRepr { rep: g.rep, model: g.model }
    }
}

impl std::fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupElement({:?}, {:?})", self.model, self.rep)
    }
}

/// Canonical representative of a projective class: the first nonzero entry
/// in column-major order is scaled to +1. For the conformal model only the
/// sign is free (the scale is pinned by the quadratic form), so the leading
/// entry is normalized to be positive instead.
fn canonical_scale(m: &Mat, model: &ModelTag) -> Result<Mat> {
    let lead = (0..m.cols())
        .flat_map(|j| (0..m.rows()).map(move |i| (i, j)))
        .find(|&(i, j)| !m[(i, j)].is_zero())
        .ok_or_else(|| Error::NotInGroup("zero matrix".into()))?;
    match model {
        ModelTag::Projective { .. } => {
            let s = m[lead].recip().expect("nonzero");
            Ok(m.scale(&s))
        }
        ModelTag::Conformal { .. } => {
            if m[lead] < Rat::zero() {
                Ok(-m)
            } else {
                Ok(m.clone())
            }
        }
    }
}

impl GroupElement {
    pub fn new(rep: Mat, model: ModelTag) -> Result<Self> {
        model.validate()?;
        let amb = model.ambient_dim();
        if rep.rows() != amb || rep.cols() != amb {
            return Err(Error::DimensionMismatch(format!(
                "model needs {amb}x{amb} representatives"
            )));
        }
        if rep.det().is_zero() {
            return Err(Error::NotInGroup("singular representative".into()));
        }
        if let Some(j) = model.quadratic_form() {
            if &(&rep.transpose() * &j) * &rep != j {
                return Err(Error::NotInGroup(
                    "representative does not preserve the quadratic form".into(),
                ));
            }
        }
        Ok(GroupElement { rep: canonical_scale(&rep, &model)?, model })
    }

    pub fn identity(model: ModelTag) -> Self {
        GroupElement { rep: Mat::identity(model.ambient_dim()), model }
    }

    pub fn rep(&self) -> &Mat {
        &self.rep
    }

    pub fn model(&self) -> &ModelTag {
        &self.model
    }

    pub fn is_identity(&self) -> bool {
        self.rep == Mat::identity(self.model.ambient_dim())
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.model, other.model, "model mismatch in group product");
        GroupElement {
            rep: canonical_scale(&(&self.rep * &other.rep), &self.model)
                .expect("product of invertibles"),
            model: self.model,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            rep: canonical_scale(
                &self.rep.inverse().expect("invertible representative"),
                &self.model,
            )
            .expect("nonzero"),
            model: self.model,
        }
    }

    /// `by * self * by^{-1}`.
    pub fn conjugate_by(&self, by: &GroupElement) -> GroupElement {
        by.mul(self).mul(&by.inverse())
    }

    /// Whether the adjoint action preserves the grading, i.e. the canonical
    /// representative is block diagonal for the model's block structure.
    pub fn is_grade_preserving(&self) -> bool {
        let bounds = self.model.block_boundaries();
        let amb = self.model.ambient_dim();
        let block_of = |i: usize| bounds.iter().filter(|&&b| b <= i).count();
        for r in 0..amb {
            for c in 0..amb {
                if block_of(r) != block_of(c) && !self.rep[(r, c)].is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// A point of the model: a nonzero coordinate vector modulo scale, with the
/// first nonzero coordinate normalized to 1. Conformal points satisfy the
/// null condition of the quadratic form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelPoint {
    coords: Vec<Rat>,
    model: ModelTag,
}

impl std::fmt::Debug for ModelPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c: Vec<String> = self.coords.iter().map(Rat::to_string).collect();
        write!(f, "[{}]", c.join(" : "))
    }
}

impl Serialize for ModelPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl ModelPoint {
    pub fn new(coords: Vec<Rat>, model: ModelTag) -> Result<Self> {
        model.validate()?;
        if coords.len() != model.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "points of this model have {} homogeneous coordinates",
                model.ambient_dim()
            )));
        }
        let lead = coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("zero vector is not a point".into()))?;
        let s = coords[lead].recip().expect("nonzero");
        let coords: Vec<Rat> = coords.iter().map(|c| c * &s).collect();
        if let Some(j) = model.quadratic_form() {
            let jv = j.apply(&coords)?;
            let q: Rat = coords.iter().zip(&jv).map(|(a, b)| a * b).sum();
            if !q.is_zero() {
                return Err(Error::InvalidInput(
                    "conformal points must satisfy the null condition".into(),
                ));
            }
        }
        Ok(ModelPoint { coords, model })
    }

    /// The point of the standard chart with the given affine coordinates.
    pub fn from_affine(model: ModelTag, v: &[Rat]) -> Result<Self> {
        if v.len() != model.base_dim() {
            return Err(Error::DimensionMismatch(format!(
                "affine coordinates have length {}",
                model.base_dim()
            )));
        }
        let e = translation_matrix(&model, v);
        let coords = e.col(0);
        ModelPoint::new(coords, model)
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn model(&self) -> &ModelTag {
        &self.model
    }

    pub fn is_in_cell(&self) -> bool {
        !self.coords[0].is_zero()
    }

    /// Affine coordinates in the standard chart, if the point lies in it.
    pub fn affine_coords(&self) -> Option<Vec<Rat>> {
        if !self.is_in_cell() {
            return None;
        }
        // canonical form has leading coordinate 1
        Some(self.coords[1..=self.model.base_dim()].to_vec())
    }
}

/// The distinguished point `[1 : 0 : ... : 0]` stabilized by the parabolic.
pub fn origin(model: ModelTag) -> ModelPoint {
    let mut coords = vec![Rat::zero(); model.ambient_dim()];
    coords[0] = Rat::one();
    ModelPoint { coords, model }
}

/// Left action of the model group on points.
pub fn act(g: &GroupElement, x: &ModelPoint) -> ModelPoint {
    assert_eq!(g.model(), x.model(), "model mismatch in action");
    let coords = g.rep().apply(x.coords()).expect("compatible dimensions");
    ModelPoint::new(coords, *x.model()).expect("image of a point is a point")
}

/// The factors of `g = exp(X) g0 exp(Z)` over the big cell.
#[derive(Clone, Debug)]
pub struct BigCellFactors {
    pub x: AlgElement,
    pub g0: GroupElement,
    pub z: AlgElement,
}

/// Factors a group element through the big cell, via block LDU with split 1
/// for the projective model and the nested `(1, n, 1)` splits for the
/// conformal model. Errors with [`Error::OffCell`] exactly when `g . origin`
/// leaves the affine chart.
pub fn big_cell_decompose(
    g: &GroupElement,
    algebra: &Arc<GradedAlgebra>,
) -> Result<BigCellFactors> {
    if g.model() != algebra.model() {
        return Err(Error::ModelMismatch);
    }
    let amb = algebra.ambient_dim();
    let n = algebra.model().base_dim();
    let (l, d, u) = match g.model() {
        ModelTag::Projective { .. } => block_ldu(g.rep(), 1)?,
        ModelTag::Conformal { .. } => {
            let (l1, d1, u1) = block_ldu(g.rep(), 1)?;
            let inner = d1.block(1, amb, 1, amb);
            let (l2, d2, u2) = block_ldu(&inner, n)?;
            let mut l = Mat::identity(amb);
            l.set_block(1, 1, &l2);
            let l = &l1 * &l;
            let mut u = Mat::identity(amb);
            u.set_block(1, 1, &u2);
            let u = &u * &u1;
            let mut d = Mat::zeros(amb, amb);
            d[(0, 0)] = d1[(0, 0)].clone();
            d.set_block(1, 1, &d2);
            (l, d, u)
        }
    };
    let x_vec: Vec<Rat> = (1..=n).map(|i| l[(i, 0)].clone()).collect();
    let z_vec: Vec<Rat> = (1..=n).map(|j| u[(0, j)].clone()).collect();
    let x = AlgElement::from_grade_vector(algebra, -1, &x_vec)?;
    let z = AlgElement::from_grade_vector(algebra, 1, &z_vec)?;
    let g0 = GroupElement::new(d, *g.model())?;
    debug_assert!(g0.is_grade_preserving());
    debug_assert_eq!(
        exp_nilpotent(&x)?.mul(&g0).mul(&exp_nilpotent(&z)?),
        *g,
        "big cell factors must reassemble"
    );
    Ok(BigCellFactors { x, g0, z })
}

/// Group exponential of a nilpotent algebra element (exact terminating series).
pub fn exp_nilpotent(a: &AlgElement) -> Result<GroupElement> {
    let amb = a.algebra().ambient_dim();
    let m = a.matrix();
    let mut sum = Mat::identity(amb);
    let mut power = Mat::identity(amb);
    let mut factorial = Rat::one();
    for k in 1..=amb {
        power = &power * &m;
        if power.is_zero() {
            break;
        }
        if k == amb {
            return Err(Error::InvalidInput("element is not nilpotent".into()));
        }
        factorial = factorial * Rat::from_int(k as i64);
        sum = &sum + &power.scale(&factorial.recip().expect("nonzero factorial"));
    }
    GroupElement::new(sum, *a.algebra().model())
}

/// A group translate taking the origin to `x`, used to induce the affine
/// chart at `x`. Over the big cell this is the translation `exp(X)`; off the
/// cell (projective only) a deterministic basis completion is used.
pub fn transporter_to(x: &ModelPoint) -> Result<GroupElement> {
    if let Some(v) = x.affine_coords() {
        let e = translation_matrix(x.model(), &v);
        return Ok(GroupElement { rep: e, model: *x.model() });
    }
    match x.model() {
        ModelTag::Projective { .. } => {
            let amb = x.model().ambient_dim();
            // greedy completion: first column x, then standard basis vectors
            let mut cols: Vec<Vec<Rat>> = vec![x.coords().to_vec()];
            for j in 0..amb {
                if cols.len() == amb {
                    break;
                }
                let mut e = vec![Rat::zero(); amb];
                e[j] = Rat::one();
                let mut candidate = cols.clone();
                candidate.push(e);
                let m = Mat::from_fn(amb, candidate.len(), |r, c| candidate[c][r].clone());
                // accept when the columns stay independent
                let mm = &m.transpose() * &m;
                if !mm.det().is_zero() {
                    cols = candidate;
                }
            }
            let rep = Mat::from_fn(amb, amb, |r, c| cols[c][r].clone());
            GroupElement::new(rep, *x.model())
        }
        ModelTag::Conformal { .. } => Err(Error::ChartViolation(
            "conformal charts are only available over the big cell".into(),
        )),
    }
}

/// Exact Jacobian at `x` of the map induced by `g` between the translated
/// affine charts at `x` and at `g . x`.
///
/// The chart at a point is the group translate of the standard chart at the
/// origin given by [`transporter_to`]; in these charts the Jacobian of the
/// induced rational map is the inner diagonal block of
/// `h_y^{-1} g h_x` divided by its leading entry.
pub fn chart_differential(g: &GroupElement, x: &ModelPoint) -> Result<Mat> {
    let y = act(g, x);
    let hx = transporter_to(x)?;
    let hy = transporter_to(&y)?;
    let m = hy.inverse().mul(g).mul(&hx);
    differential_at_origin(&m)
}

/// Jacobian at the origin of the chart map induced by an element fixing the
/// origin's line.
pub(crate) fn differential_at_origin(m: &GroupElement) -> Result<Mat> {
    let amb = m.model().ambient_dim();
    let n = m.model().base_dim();
    let rep = m.rep();
    for i in 1..amb {
        if !rep[(i, 0)].is_zero() {
            return Err(Error::ChartViolation(
                "element does not fix the chart center".into(),
            ));
        }
    }
    let a = rep[(0, 0)].clone();
    debug_assert!(!a.is_zero());
    let inv = a.recip().expect("invertible block");
    Ok(rep.block(1, n + 1, 1, n + 1).scale(&inv))
}
