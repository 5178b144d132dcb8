//! Cochain calculus on a graded algebra: the spaces housing Rho tensors and
//! curvature functions, the differential, the codifferential and the
//! decomposition of curvature values by grade.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{AlgElement, GradedAlgebra};
use crate::ratlin::Rat;

/// A linear map `g(-1) -> g`, stored column-wise over the g(-1) basis.
/// An optional target grade restricts the values to one summand.
#[derive(Clone)]
pub struct Cochain1 {
    algebra: Arc<GradedAlgebra>,
    columns: Vec<Vec<Rat>>,
    target_grade: Option<i8>,
}

impl std::fmt::Debug for Cochain1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cochain1({} columns)", self.columns.len())
    }
}

impl PartialEq for Cochain1 {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.model() == other.algebra.model() && self.columns == other.columns
    }
}

impl Eq for Cochain1 {}

/// Rho tensors are one-cochains with values in g(+1).
pub type RhoTensor = Cochain1;

impl Cochain1 {
    pub fn zero(algebra: &Arc<GradedAlgebra>, target_grade: Option<i8>) -> Self {
        let cols = algebra.grade_dim(-1);
        Cochain1 {
            algebra: Arc::clone(algebra),
            columns: vec![vec![Rat::zero(); algebra.dim()]; cols],
            target_grade,
        }
    }

    pub fn from_columns(
        algebra: &Arc<GradedAlgebra>,
        columns: Vec<Vec<Rat>>,
        target_grade: Option<i8>,
    ) -> Result<Self> {
        if columns.len() != algebra.grade_dim(-1) {
            return Err(Error::DimensionMismatch(format!(
                "one column per g(-1) basis vector: expected {}, got {}",
                algebra.grade_dim(-1),
                columns.len()
            )));
        }
        for col in &columns {
            if col.len() != algebra.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "cochain values need {} coordinates",
                    algebra.dim()
                )));
            }
        }
        let c = Cochain1 { algebra: Arc::clone(algebra), columns, target_grade };
        c.check_target()?;
        Ok(c)
    }

    fn check_target(&self) -> Result<()> {
        if let Some(grade) = self.target_grade {
            for (j, col) in self.columns.iter().enumerate() {
                for (k, v) in col.iter().enumerate() {
                    if !v.is_zero() && self.algebra.grade_of(k) != grade {
                        return Err(Error::InvalidInput(format!(
                            "column {j} has a component outside grade {grade}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn columns(&self) -> &[Vec<Rat>] {
        &self.columns
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(Rat::is_zero))
    }

    /// Value on an element of g(-1).
    pub fn evaluate(&self, x: &AlgElement) -> Result<AlgElement> {
        if x.algebra().model() != self.algebra.model() {
            return Err(Error::ModelMismatch);
        }
        if !x.is_pure_grade(-1) {
            return Err(Error::InvalidInput(
                "one-cochains are evaluated on g(-1) elements".into(),
            ));
        }
        let xv = x.grade_vector(-1);
        let mut coords = vec![Rat::zero(); self.algebra.dim()];
        for (j, xj) in xv.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, c) in self.columns[j].iter().enumerate() {
                if !c.is_zero() {
                    coords[k] += &(c * xj);
                }
            }
        }
        AlgElement::from_coords(&self.algebra, coords)
    }

    pub fn add(&self, other: &Cochain1) -> Cochain1 {
        assert_eq!(self.algebra.model(), other.algebra.model(), "model mismatch");
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Cochain1 { algebra: Arc::clone(&self.algebra), columns, target_grade: None }
    }
}

/// Index of the ordered pair `(i, j)`, `i < j`, in lexicographic order.
pub(crate) fn pair_index(dim_minus: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim_minus);
    i * (2 * dim_minus - i - 1) / 2 + (j - i - 1)
}

/// All ordered pairs `(i, j)` with `i < j`, in storage order.
pub(crate) fn pair_list(dim_minus: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(dim_minus * (dim_minus.saturating_sub(1)) / 2);
    for i in 0..dim_minus {
        for j in i + 1..dim_minus {
            out.push((i, j));
        }
    }
    out
}

/// An antisymmetric bilinear map `g(-1) x g(-1) -> g`, stored on basis pairs
/// `i < j`; the value on `(j, i)` is the negative by convention.
#[derive(Clone)]
pub struct Cochain2 {
    algebra: Arc<GradedAlgebra>,
    values: Vec<Vec<Rat>>,
    target_grade: Option<i8>,
}

/// Wire form for two-cochains: sparse basis-indexed value list.
#[derive(Serialize, Deserialize)]
pub struct Cochain2Repr {
    pub pairs: Vec<Cochain2Entry>,
}

#[derive(Serialize, Deserialize)]
pub struct Cochain2Entry {
    pub i: usize,
    pub j: usize,
    pub value: Vec<Rat>,
}

impl std::fmt::Debug for Cochain2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let nonzero = self.values.iter().filter(|v| v.iter().any(|x| !x.is_zero())).count();
        write!(f, "Cochain2({nonzero} nonzero pairs)")
    }
}

impl PartialEq for Cochain2 {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.model() == other.algebra.model() && self.values == other.values
    }
}

impl Eq for Cochain2 {}

impl Cochain2 {
    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        let pairs = pair_list(algebra.grade_dim(-1)).len();
        Cochain2 {
            algebra: Arc::clone(algebra),
            values: vec![vec![Rat::zero(); algebra.dim()]; pairs],
            target_grade: None,
        }
    }

    pub fn from_values(
        algebra: &Arc<GradedAlgebra>,
        values: Vec<Vec<Rat>>,
        target_grade: Option<i8>,
    ) -> Result<Self> {
        let pairs = pair_list(algebra.grade_dim(-1)).len();
        if values.len() != pairs {
            return Err(Error::DimensionMismatch(format!(
                "expected {} pair values, got {}",
                pairs,
                values.len()
            )));
        }
        for v in &values {
            if v.len() != algebra.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "cochain values need {} coordinates",
                    algebra.dim()
                )));
            }
        }
        let c = Cochain2 { algebra: Arc::clone(algebra), values, target_grade };
        if let Some(grade) = c.target_grade {
            for (p, v) in c.values.iter().enumerate() {
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() && c.algebra.grade_of(k) != grade {
                        return Err(Error::InvalidInput(format!(
                            "pair {p} has a component outside grade {grade}"
                        )));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn from_repr(algebra: &Arc<GradedAlgebra>, repr: &Cochain2Repr) -> Result<Self> {
        let mut c = Cochain2::zero(algebra);
        let dm = algebra.grade_dim(-1);
        for e in &repr.pairs {
            if e.i >= dm || e.j >= dm || e.i == e.j {
                return Err(Error::InvalidInput(format!(
                    "pair ({}, {}) out of range for base dimension {}",
                    e.i, e.j, dm
                )));
            }
            if e.value.len() != algebra.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "cochain values need {} coordinates",
                    algebra.dim()
                )));
            }
            let (i, j, sign) =
                if e.i < e.j { (e.i, e.j, 1i64) } else { (e.j, e.i, -1i64) };
            let idx = pair_index(dm, i, j);
            for (k, v) in e.value.iter().enumerate() {
                let signed = if sign > 0 { v.clone() } else { -v };
                c.values[idx][k] += &signed;
            }
        }
        Ok(c)
    }

    pub fn to_repr(&self) -> Cochain2Repr {
        let dm = self.algebra.grade_dim(-1);
        let pairs = pair_list(dm)
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
            .map(|((i, j), v)| Cochain2Entry { i, j, value: v.clone() })
            .collect();
        Cochain2Repr { pairs }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn values(&self) -> &[Vec<Rat>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(Rat::is_zero))
    }

    /// Value on the basis pair `(i, j)` with the antisymmetric extension.
    pub fn value_on_pair(&self, i: usize, j: usize) -> Vec<Rat> {
        let dm = self.algebra.grade_dim(-1);
        if i == j {
            return vec![Rat::zero(); self.algebra.dim()];
        }
        if i < j {
            self.values[pair_index(dm, i, j)].clone()
        } else {
            self.values[pair_index(dm, j, i)].iter().map(|v| -v).collect()
        }
    }

    pub fn set_pair(&mut self, i: usize, j: usize, value: Vec<Rat>) {
        let dm = self.algebra.grade_dim(-1);
        assert!(i < j && j < dm, "pairs are stored with i < j");
        assert_eq!(value.len(), self.algebra.dim());
        self.values[pair_index(dm, i, j)] = value;
    }

    pub fn add(&self, other: &Cochain2) -> Cochain2 {
        assert_eq!(self.algebra.model(), other.algebra.model(), "model mismatch");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Cochain2 { algebra: Arc::clone(&self.algebra), values, target_grade: None }
    }
}

/// The Lie algebra differential of a one-cochain:
/// `(d phi)(X, Y) = [X, phi(Y)] - [Y, phi(X)]` for `X, Y` in the abelian
/// summand g(-1).
pub fn differential(phi: &Cochain1) -> Cochain2 {
    let alg = phi.algebra();
    let dm = alg.grade_dim(-1);
    let minus = alg.grade_indices(-1);
    let mut out = Cochain2::zero(alg);
    let delta = |idx: usize| {
        let mut v = vec![Rat::zero(); alg.dim()];
        v[idx] = Rat::one();
        v
    };
    for (i, j) in pair_list(dm) {
        let xi = delta(minus[i]);
        let xj = delta(minus[j]);
        let t1 = alg.bracket_coords(&xi, &phi.columns()[j]);
        let t2 = alg.bracket_coords(&xj, &phi.columns()[i]);
        let value = t1.iter().zip(&t2).map(|(a, b)| a - b).collect();
        out.set_pair(i, j, value);
    }
    out
}

/// The codifferential, extended linearly from its action on decomposables:
/// `X ^ Y (x) Z` maps to `-Y (x) [X, Z] + X (x) [Y, Z]`, where the wedge
/// factors live in g(+1), identified with the dual of g(-1) through the
/// trace pairing.
pub fn codifferential(kappa: &Cochain2) -> Cochain1 {
    let alg = kappa.algebra();
    let dm = alg.grade_dim(-1);
    let plus_range = alg.grade_range(1);
    let mut columns = vec![vec![Rat::zero(); alg.dim()]; dm];
    let dual_element = |a: usize| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); alg.dim()];
        let coeffs = alg.dual_of_base_covector(a);
        v[plus_range.clone()].clone_from_slice(&coeffs);
        v
    };
    for ((a, b), value) in pair_list(dm).iter().zip(kappa.values()) {
        if value.iter().all(Rat::is_zero) {
            continue;
        }
        let zeta_a = dual_element(*a);
        let zeta_b = dual_element(*b);
        let w1 = alg.bracket_coords(&zeta_a, value);
        let w2 = alg.bracket_coords(&zeta_b, value);
        for k in 0..alg.dim() {
            columns[*b][k] -= &w1[k];
            columns[*a][k] += &w2[k];
        }
    }
    Cochain1 { algebra: Arc::clone(alg), columns, target_grade: None }
}

/// Normality: the codifferential of the curvature function vanishes.
pub fn is_normal(kappa: &Cochain2) -> bool {
    codifferential(kappa).is_zero()
}

/// Torsion-freeness: no curvature value has a g(-1) component.
pub fn is_torsion_free(kappa: &Cochain2) -> bool {
    let alg = kappa.algebra();
    let range = alg.grade_range(-1);
    kappa.values().iter().all(|v| v[range.clone()].iter().all(Rat::is_zero))
}

/// Curvature split by the grade of the values: torsion (grade -1), Weyl
/// curvature (grade 0) and the Cotton-York part (grade +1).
#[derive(Clone)]
pub struct CurvDecomp {
    pub torsion: Cochain2,
    pub weyl: Cochain2,
    pub cotton_york: Cochain2,
}

impl CurvDecomp {
    /// Exact reassembly of the original cochain.
    pub fn reassemble(&self) -> Cochain2 {
        self.torsion.add(&self.weyl).add(&self.cotton_york)
    }
}

/// Grade-projects every value of the cochain; the parts sum back exactly.
pub fn decompose_curvature(kappa: &Cochain2) -> CurvDecomp {
    let alg = kappa.algebra();
    let project = |grade: i8| {
        let values = kappa
            .values()
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .map(|(k, x)| {
                        if alg.grade_of(k) == grade {
                            x.clone()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Cochain2 { algebra: Arc::clone(alg), values, target_grade: Some(grade) }
    };
    CurvDecomp { torsion: project(-1), weyl: project(0), cotton_york: project(1) }
}
