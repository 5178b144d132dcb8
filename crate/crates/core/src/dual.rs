//! Dual numbers over the rationals.
//!
//! Evaluating a rational map with entries `a + eps b` (eps^2 = 0) yields the
//! exact value and the exact directional derivative in one pass; this is how
//! the crate differentiates maps like `x -> s_x(x0)` symbolically.

use crate::model::ModelTag;
use crate::ratlin::{rat, Mat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Dual {
    pub val: Rat,
    pub der: Rat,
}

impl Dual {
    pub fn constant(v: Rat) -> Self {
        Dual { val: v, der: Rat::zero() }
    }

    pub fn variable(v: Rat) -> Self {
        Dual { val: v, der: Rat::one() }
    }

    pub fn zero() -> Self {
        Dual::constant(Rat::zero())
    }

    pub fn add(&self, o: &Dual) -> Dual {
        Dual { val: &self.val + &o.val, der: &self.der + &o.der }
    }

    #[cfg(test)]
    pub fn sub(&self, o: &Dual) -> Dual {
        Dual { val: &self.val - &o.val, der: &self.der - &o.der }
    }

    pub fn mul(&self, o: &Dual) -> Dual {
        Dual {
            val: &self.val * &o.val,
            der: &(&self.val * &o.der) + &(&self.der * &o.val),
        }
    }

    pub fn neg(&self) -> Dual {
        Dual { val: -&self.val, der: -&self.der }
    }

    /// Division; the real part of the divisor must be nonzero.
    pub fn div(&self, o: &Dual) -> Dual {
        let inv = o.val.recip().expect("division by a dual with zero real part");
        let val = &self.val * &inv;
        // (a/b)' = (a' b - a b') / b^2 = (a' - (a/b) b') / b
        let der = &(&self.der - &(&val * &o.der)) * &inv;
        Dual { val, der }
    }
}

/// A square matrix of dual numbers.
#[derive(Clone, Debug)]
pub(crate) struct DualMat {
    pub n: usize,
    pub entries: Vec<Dual>,
}

impl DualMat {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Dual::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Dual::constant(Rat::one());
        }
        DualMat { n, entries }
    }

    pub fn from_mat(m: &Mat) -> Self {
        assert!(m.is_square());
        DualMat {
            n: m.rows(),
            entries: m.entries().iter().cloned().map(Dual::constant).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Dual {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, d: Dual) {
        self.entries[i * self.n + j] = d;
    }

    pub fn mul(&self, o: &DualMat) -> DualMat {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = DualMat { n, entries: vec![Dual::zero(); n * n] };
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.val.is_zero() && a.der.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.val.is_zero() && b.der.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Dual]) -> Vec<Dual> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                let mut acc = Dual::zero();
                for j in 0..self.n {
                    acc = acc.add(&self.get(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }
}

/// `exp(X)` for the grade -1 element with dual base coordinates, mirroring
/// [`crate::model::translation_matrix`]. Negate the input for the inverse.
pub(crate) fn dual_translation(model: &ModelTag, v: &[Dual]) -> DualMat {
    let n = model.base_dim();
    assert_eq!(v.len(), n);
    let amb = model.ambient_dim();
    let mut e = DualMat::identity(amb);
    match model {
        ModelTag::Projective { .. } => {
            for (i, vi) in v.iter().enumerate() {
                e.set(i + 1, 0, vi.clone());
            }
        }
        ModelTag::Conformal { .. } => {
            let sig = model.signature_entries().expect("conformal");
            let mut norm_half = Dual::zero();
            for (i, vi) in v.iter().enumerate() {
                e.set(i + 1, 0, vi.clone());
                let svi = if sig[i] >= 0 { vi.clone() } else { vi.neg() };
                e.set(n + 1, i + 1, svi.neg());
                norm_half = norm_half.add(&vi.mul(&svi));
            }
            let half = Dual::constant(rat(1, 2));
            e.set(n + 1, 0, norm_half.mul(&half).neg());
        }
    }
    e
}
