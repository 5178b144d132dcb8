//! Model descriptors for the supported flat geometries.
//!
//! Both models are realized as block matrix algebras so that the grading is
//! read off block positions: `sl(m+1)` with blocks of sizes `(1, m)` for the
//! projective model, and `so(p+1, q+1)` with respect to an anti-diagonal
//! quadratic form, blocks `(1, p+q, 1)`, for the conformal model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratlin::{Mat, Rat};

/// Which homogeneous model a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelTag {
    Projective { m: usize },
    Conformal { p: usize, q: usize },
}

impl ModelTag {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelTag::Projective { m } if m >= 1 => Ok(()),
            ModelTag::Projective { m } => {
                Err(Error::InvalidInput(format!("projective model needs m >= 1, got {m}")))
            }
            ModelTag::Conformal { p, q } if p + q >= 3 => Ok(()),
            ModelTag::Conformal { p, q } => Err(Error::InvalidInput(format!(
                "conformal model needs p + q >= 3, got ({p},{q})"
            ))),
        }
    }

    /// Size of the ambient matrices.
    pub fn ambient_dim(&self) -> usize {
        match *self {
            ModelTag::Projective { m } => m + 1,
            ModelTag::Conformal { p, q } => p + q + 2,
        }
    }

    /// Dimension of the base, i.e. of the grade -1 summand.
    pub fn base_dim(&self) -> usize {
        match *self {
            ModelTag::Projective { m } => m,
            ModelTag::Conformal { p, q } => p + q,
        }
    }

    /// Diagonal signature entries of the middle block (conformal only).
    pub fn signature_entries(&self) -> Option<Vec<i64>> {
        match *self {
            ModelTag::Projective { .. } => None,
            ModelTag::Conformal { p, q } => {
                Some((0..p + q).map(|i| if i < p { 1 } else { -1 }).collect())
            }
        }
    }

    /// The anti-diagonal-block quadratic form preserved by the conformal model group.
    pub fn quadratic_form(&self) -> Option<Mat> {
        let sig = self.signature_entries()?;
        let n = sig.len();
        let mut j = Mat::zeros(n + 2, n + 2);
        j[(0, n + 1)] = Rat::one();
        j[(n + 1, 0)] = Rat::one();
        for (i, &s) in sig.iter().enumerate() {
            j[(i + 1, i + 1)] = Rat::from_int(s);
        }
        Some(j)
    }

    /// Row boundaries of the grading blocks: `(1, m)` or `(1, n, 1)`.
    pub fn block_boundaries(&self) -> Vec<usize> {
        match *self {
            ModelTag::Projective { m } => vec![0, 1, m + 1],
            ModelTag::Conformal { p, q } => vec![0, 1, p + q + 1, p + q + 2],
        }
    }
}

/// The matrix `exp(X)` of the grade -1 element with base coordinates `v`,
/// built directly from the block pattern (the series terminates).
pub fn translation_matrix(model: &ModelTag, v: &[Rat]) -> Mat {
    let n = model.base_dim();
    assert_eq!(v.len(), n, "translation coordinates must match the base dimension");
    match model {
        ModelTag::Projective { .. } => {
            let mut e = Mat::identity(n + 1);
            for (i, vi) in v.iter().enumerate() {
                e[(i + 1, 0)] = vi.clone();
            }
            e
        }
        ModelTag::Conformal { .. } => {
            let sig = model.signature_entries().expect("conformal");
            let mut e = Mat::identity(n + 2);
            let mut norm_half = Rat::zero();
            for (i, vi) in v.iter().enumerate() {
                e[(i + 1, 0)] = vi.clone();
                let svi = vi.scale_by_sign(sig[i]);
                e[(n + 1, i + 1)] = -svi.clone();
                norm_half += &(vi * &svi);
            }
            e[(n + 1, 0)] = -(norm_half * crate::ratlin::rat(1, 2));
            e
        }
    }
}

trait SignScale {
    fn scale_by_sign(&self, s: i64) -> Rat;
}

impl SignScale for Rat {
    fn scale_by_sign(&self, s: i64) -> Rat {
        if s >= 0 {
            self.clone()
        } else {
            -self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rat;

    #[test]
    fn tags_serialize_as_specified() {
        let p = ModelTag::Projective { m: 2 };
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"model":"projective","m":2}"#);
        let c: ModelTag = serde_json::from_str(r#"{"model":"conformal","p":3,"q":1}"#).unwrap();
        assert_eq!(c, ModelTag::Conformal { p: 3, q: 1 });
    }

    #[test]
    fn dimensions() {
        assert_eq!(ModelTag::Projective { m: 2 }.ambient_dim(), 3);
        assert_eq!(ModelTag::Conformal { p: 3, q: 0 }.ambient_dim(), 5);
        assert!(ModelTag::Conformal { p: 1, q: 1 }.validate().is_err());
        assert!(ModelTag::Projective { m: 0 }.validate().is_err());
    }

    #[test]
    fn conformal_translation_is_j_orthogonal() {
        let model = ModelTag::Conformal { p: 2, q: 1 };
        let j = model.quadratic_form().unwrap();
        let e = translation_matrix(&model, &[rat(1, 2), rat(-3, 1), rat(2, 5)]);
        assert_eq!(&(&e.transpose() * &j) * &e, j);
    }
}
