//! Graded matrix Lie algebras and their cochain calculus.
//!
//! A [`GradedAlgebra`] is a concrete basis of a semisimple matrix Lie algebra
//! together with a three-part grading `g = g(-1) + g(0) + g(+1)`. The two
//! constructors build `sl(m+1)` with its projective block grading and
//! `so(p+1, q+1)` with the grading induced by an anti-diagonal quadratic
//! form. All structure data (bracket table, coordinate extraction, the trace
//! pairing identifying `g(+1)` with the dual of `g(-1)`) is exact.

mod cochain;

pub use cochain::{
    codifferential, decompose_curvature, differential, is_normal, is_torsion_free, Cochain1,
    Cochain2, Cochain2Entry, Cochain2Repr, CurvDecomp, RhoTensor,
};

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::flatmodel::GroupElement;
use crate::model::ModelTag;
use crate::ratlin::{Mat, Rat};

/// A graded semisimple matrix Lie algebra with exact structure data.
pub struct GradedAlgebra {
    model: ModelTag,
    basis: Vec<Mat>,
    grades: Vec<i8>,
    /// Ambient entry positions whose values determine the coordinates.
    pivot_positions: Vec<(usize, usize)>,
    /// Inverse of the basis restricted to the pivot positions.
    pivot_inverse: Mat,
    /// Structure constants, built on first use.
    bracket_table: OnceLock<Vec<Vec<Rat>>>,
    /// Row `a` holds the g(+1) coordinates of the element dual to the a-th
    /// basis vector of g(-1) under the trace pairing.
    dual_basis_coeffs: Mat,
}

impl fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedAlgebra({:?}, dim {})", self.model, self.dim())
    }
}

impl GradedAlgebra {
    /// `sl(m+1)` with the block grading of the projective model: grade -1 is
    /// the lower-left column block, grade 0 the block diagonal, grade +1 the
    /// upper-right row block.
    pub fn projective(m: usize) -> Result<Arc<Self>> {
        let model = ModelTag::Projective { m };
        model.validate()?;
        let amb = m + 1;
        let mut basis = Vec::new();
        let mut grades = Vec::new();
        for a in 1..=m {
            let mut x = Mat::zeros(amb, amb);
            x[(a, 0)] = Rat::one();
            basis.push(x);
            grades.push(-1);
        }
        for a in 1..=m {
            for b in 1..=m {
                let mut d = Mat::zeros(amb, amb);
                d[(a, b)] = Rat::one();
                if a == b {
                    d[(0, 0)] = -Rat::one();
                }
                basis.push(d);
                grades.push(0);
            }
        }
        for b in 1..=m {
            let mut z = Mat::zeros(amb, amb);
            z[(0, b)] = Rat::one();
            basis.push(z);
            grades.push(1);
        }
        Self::assemble(model, basis, grades)
    }

    /// `so(p+1, q+1)` with its |1|-grading, realized with respect to the
    /// anti-diagonal-block quadratic form so the grading is by block position.
    pub fn conformal(p: usize, q: usize) -> Result<Arc<Self>> {
        let model = ModelTag::Conformal { p, q };
        model.validate()?;
        let n = p + q;
        let amb = n + 2;
        let sig = model.signature_entries().expect("conformal");
        let srat: Vec<Rat> = sig.iter().map(|&s| Rat::from_int(s)).collect();
        let mut basis = Vec::new();
        let mut grades = Vec::new();
        for a in 1..=n {
            let mut x = Mat::zeros(amb, amb);
            x[(a, 0)] = Rat::one();
            x[(n + 1, a)] = -&srat[a - 1];
            basis.push(x);
            grades.push(-1);
        }
        // grading element of co(p, q)
        let mut h = Mat::zeros(amb, amb);
        h[(0, 0)] = Rat::one();
        h[(n + 1, n + 1)] = -Rat::one();
        basis.push(h);
        grades.push(0);
        // so(p, q) part: S-skew generators
        for a in 1..=n {
            for b in a + 1..=n {
                let mut k = Mat::zeros(amb, amb);
                k[(a, b)] = srat[a - 1].clone();
                k[(b, a)] = -&srat[b - 1];
                basis.push(k);
                grades.push(0);
            }
        }
        for b in 1..=n {
            let mut z = Mat::zeros(amb, amb);
            z[(0, b)] = Rat::one();
            z[(b, n + 1)] = -&srat[b - 1];
            basis.push(z);
            grades.push(1);
        }
        Self::assemble(model, basis, grades)
    }

    pub fn from_model(model: &ModelTag) -> Result<Arc<Self>> {
        match *model {
            ModelTag::Projective { m } => Self::projective(m),
            ModelTag::Conformal { p, q } => Self::conformal(p, q),
        }
    }

    fn assemble(model: ModelTag, basis: Vec<Mat>, grades: Vec<i8>) -> Result<Arc<Self>> {
        let (pivot_positions, pivot_inverse) = build_extraction(&basis)?;
        let mut algebra = GradedAlgebra {
            model,
            basis,
            grades,
            pivot_positions,
            pivot_inverse,
            bracket_table: OnceLock::new(),
            dual_basis_coeffs: Mat::zeros(0, 0),
        };
        algebra.dual_basis_coeffs = algebra.build_dual_pairing()?;
        algebra.check_grading()?;
        Ok(Arc::new(algebra))
    }

    /// Gram matrix of the trace pairing between g(+1) and g(-1), inverted so
    /// that row `a` of the result gives the g(+1) coordinates of the dual of
    /// the a-th basis vector of g(-1).
    fn build_dual_pairing(&self) -> Result<Mat> {
        let minus = self.grade_indices(-1);
        let plus = self.grade_indices(1);
        let k = minus.len();
        let gram = Mat::from_fn(k, k, |a, b| {
            (&self.basis[plus[a]] * &self.basis[minus[b]]).trace()
        });
        gram.inverse().map_err(|_| {
            Error::InvalidInput("degenerate trace pairing between g(+1) and g(-1)".into())
        })
    }

    /// Grade additivity and abelianity of the extreme summands, checked on
    /// every basis pair. Closure is implicit: expansion fails otherwise.
    fn check_grading(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                let comm = self.basis_commutator(i, j)?;
                let target = i32::from(self.grades[i]) + i32::from(self.grades[j]);
                for (k, c) in comm.iter().enumerate() {
                    if !c.is_zero() && i32::from(self.grades[k]) != target {
                        return Err(Error::NotInAlgebra(format!(
                            "bracket of basis {i},{j} leaves grade {target}"
                        )));
                    }
                }
                if target.abs() == 2 && comm.iter().any(|c| !c.is_zero()) {
                    return Err(Error::NotInAlgebra(format!(
                        "grade-{} component should vanish for basis pair {i},{j}",
                        target
                    )));
                }
            }
        }
        Ok(())
    }

    fn basis_commutator(&self, i: usize, j: usize) -> Result<Vec<Rat>> {
        let a = &self.basis[i];
        let b = &self.basis[j];
        self.expand(&(&(a * b) - &(b * a)))
    }

    pub fn model(&self) -> &ModelTag {
        &self.model
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.model.ambient_dim()
    }

    pub fn grade_of(&self, idx: usize) -> i8 {
        self.grades[idx]
    }

    pub fn grade_dim(&self, grade: i8) -> usize {
        self.grades.iter().filter(|&&g| g == grade).count()
    }

    /// Basis indices of a grade, in basis order. The basis is laid out with
    /// grades contiguous in the order (-1, 0, +1).
    pub fn grade_indices(&self, grade: i8) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.grades[i] == grade).collect()
    }

    pub fn grade_range(&self, grade: i8) -> std::ops::Range<usize> {
        let m = self.grade_dim(-1);
        let z = self.grade_dim(0);
        match grade {
            -1 => 0..m,
            0 => m..m + z,
            1 => m + z..self.dim(),
            _ => 0..0,
        }
    }

    pub fn basis_matrix(&self, idx: usize) -> &Mat {
        &self.basis[idx]
    }

    /// Exact coordinates of an ambient matrix in the algebra basis.
    /// Errors when the matrix does not lie in the algebra.
    pub fn expand(&self, m: &Mat) -> Result<Vec<Rat>> {
        let amb = self.ambient_dim();
        if m.rows() != amb || m.cols() != amb {
            return Err(Error::DimensionMismatch(format!(
                "expected {amb}x{amb} ambient matrix"
            )));
        }
        let picked: Vec<Rat> =
            self.pivot_positions.iter().map(|&(i, j)| m[(i, j)].clone()).collect();
        let coords = apply_sparse(&self.pivot_inverse, &picked);
        // Exact membership check: the coordinates must rebuild the input.
        let mut rebuilt = Mat::zeros(amb, amb);
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = self.basis[k].scale(c);
            rebuilt = &rebuilt + &scaled;
        }
        if &rebuilt != m {
            return Err(Error::NotInAlgebra(format!(
                "residual at {} entries",
                (0..amb * amb)
                    .filter(|&e| rebuilt.entries()[e] != m.entries()[e])
                    .count()
            )));
        }
        Ok(coords)
    }

    /// Structure constants: coordinates of `[basis_i, basis_j]`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[Rat] {
        let dim = self.dim();
        let table = self.bracket_table.get_or_init(|| {
            let mut t = Vec::with_capacity(dim * dim);
            for a in 0..dim {
                for b in 0..dim {
                    t.push(self.basis_commutator(a, b).expect("validated algebra"));
                }
            }
            t
        });
        &table[i * dim + j]
    }

    /// Bracket on raw coordinate vectors through the structure constants.
    pub fn bracket_coords(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let dim = self.dim();
        let mut out = vec![Rat::zero(); dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let scale = ai * bj;
                for (k, c) in self.structure_constants(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&scale * c);
                    }
                }
            }
        }
        out
    }

    /// g(+1) coordinates of the dual of the a-th g(-1) basis vector under the
    /// trace pairing.
    pub fn dual_of_base_covector(&self, a: usize) -> Vec<Rat> {
        self.dual_basis_coeffs.row(a).to_vec()
    }
}

fn apply_sparse(m: &Mat, v: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); m.rows()];
    for (j, vj) in v.iter().enumerate() {
        if vj.is_zero() {
            continue;
        }
        for i in 0..m.rows() {
            let c = &m[(i, j)];
            if !c.is_zero() {
                out[i] += &(c * vj);
            }
        }
    }
    out
}

/// Finds ambient entry positions that determine coordinates uniquely and the
/// inverse of the basis restricted to them.
fn build_extraction(basis: &[Mat]) -> Result<(Vec<(usize, usize)>, Mat)> {
    let dim = basis.len();
    if dim == 0 {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    let amb = basis[0].rows();
    // Row-reduce the dim x amb^2 matrix of vectorized basis elements,
    // recording one pivot entry position per basis direction.
    let mut work: Vec<Vec<Rat>> = basis.iter().map(Mat::vectorize).collect();
    let mut pivots: Vec<usize> = Vec::with_capacity(dim);
    for r in 0..dim {
        let col = (0..amb * amb)
            .find(|&c| !work[r][c].is_zero() && !pivots.contains(&c))
            .ok_or_else(|| Error::InvalidInput("basis is linearly dependent".into()))?;
        let inv = work[r][col].recip().expect("pivot nonzero");
        for c in 0..amb * amb {
            work[r][c] = &work[r][c] * &inv;
        }
        for r2 in 0..dim {
            if r2 == r || work[r2][col].is_zero() {
                continue;
            }
            let f = work[r2][col].clone();
            for c in 0..amb * amb {
                let s = &f * &work[r][c];
                work[r2][c] -= &s;
            }
        }
        pivots.push(col);
    }
    let sub = Mat::from_fn(dim, dim, |i, j| basis[j].entries()[pivots[i]].clone());
    let inv = sub
        .inverse()
        .map_err(|_| Error::InvalidInput("basis is linearly dependent".into()))?;
    let positions = pivots.iter().map(|&c| (c / amb, c % amb)).collect();
    Ok((positions, inv))
}

/// An element of a graded algebra, stored as exact coordinates over the basis.
#[derive(Clone)]
pub struct AlgElement {
    algebra: Arc<GradedAlgebra>,
    coords: Vec<Rat>,
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(Rat::to_string).collect();
        write!(f, "AlgElement[{}]", c.join(", "))
    }
}

impl PartialEq for AlgElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.model() == other.algebra.model() && self.coords == other.coords
    }
}

impl Eq for AlgElement {}

impl AlgElement {
    pub fn from_coords(algebra: &Arc<GradedAlgebra>, coords: Vec<Rat>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "element needs {} coordinates, got {}",
                algebra.dim(),
                coords.len()
            )));
        }
        Ok(AlgElement { algebra: Arc::clone(algebra), coords })
    }

    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        AlgElement { algebra: Arc::clone(algebra), coords: vec![Rat::zero(); algebra.dim()] }
    }

    pub fn basis(algebra: &Arc<GradedAlgebra>, idx: usize) -> Self {
        let mut coords = vec![Rat::zero(); algebra.dim()];
        coords[idx] = Rat::one();
        AlgElement { algebra: Arc::clone(algebra), coords }
    }

    /// Element with the given coordinates in one grade block, zero elsewhere.
    pub fn from_grade_vector(
        algebra: &Arc<GradedAlgebra>,
        grade: i8,
        v: &[Rat],
    ) -> Result<Self> {
        let range = algebra.grade_range(grade);
        if v.len() != range.len() {
            return Err(Error::DimensionMismatch(format!(
                "grade {grade} has dimension {}, got {} coordinates",
                range.len(),
                v.len()
            )));
        }
        let mut coords = vec![Rat::zero(); algebra.dim()];
        coords[range].clone_from_slice(v);
        Ok(AlgElement { algebra: Arc::clone(algebra), coords })
    }

    pub fn from_matrix(algebra: &Arc<GradedAlgebra>, m: &Mat) -> Result<Self> {
        let coords = algebra.expand(m)?;
        Ok(AlgElement { algebra: Arc::clone(algebra), coords })
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Coordinates within one grade block.
    pub fn grade_vector(&self, grade: i8) -> Vec<Rat> {
        self.coords[self.algebra.grade_range(grade)].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    /// True when all coordinates outside the given grade vanish.
    pub fn is_pure_grade(&self, grade: i8) -> bool {
        self.coords
            .iter()
            .enumerate()
            .all(|(k, c)| c.is_zero() || self.algebra.grade_of(k) == grade)
    }

    /// The ambient matrix representative.
    pub fn matrix(&self) -> Mat {
        let amb = self.algebra.ambient_dim();
        let mut out = Mat::zeros(amb, amb);
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = &out + &self.algebra.basis_matrix(k).scale(c);
        }
        out
    }

    /// Lie bracket: the matrix commutator, re-expanded in the basis.
    pub fn bracket(&self, other: &AlgElement) -> Result<AlgElement> {
        if self.algebra.model() != other.algebra.model() {
            return Err(Error::ModelMismatch);
        }
        let a = self.matrix();
        let b = other.matrix();
        let comm = &(&a * &b) - &(&b * &a);
        AlgElement::from_matrix(&self.algebra, &comm)
    }

    /// Component in the grade-`i` summand; the three projections sum to the element.
    pub fn grade_project(&self, grade: i8) -> AlgElement {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if self.algebra.grade_of(k) == grade {
                    c.clone()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        AlgElement { algebra: Arc::clone(&self.algebra), coords }
    }

    pub fn add(&self, other: &AlgElement) -> AlgElement {
        assert_eq!(self.algebra.model(), other.algebra.model(), "model mismatch");
        let coords =
            self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        AlgElement { algebra: Arc::clone(&self.algebra), coords }
    }

    pub fn sub(&self, other: &AlgElement) -> AlgElement {
        assert_eq!(self.algebra.model(), other.algebra.model(), "model mismatch");
        let coords =
            self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        AlgElement { algebra: Arc::clone(&self.algebra), coords }
    }

    pub fn neg(&self) -> AlgElement {
        AlgElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> AlgElement {
        AlgElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

/// Adjoint action of a model group element: conjugation of the matrix
/// representative, re-expanded in the basis. Independent of the scalar
/// representative of `g`.
pub fn adjoint_action(g: &GroupElement, a: &AlgElement) -> Result<AlgElement> {
    if g.model() != a.algebra().model() {
        return Err(Error::ModelMismatch);
    }
    let conj = &(g.rep() * &a.matrix()) * &g.rep().inverse()?;
    AlgElement::from_matrix(a.algebra(), &conj)
}
