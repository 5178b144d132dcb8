//! Constructed counterexamples used by tests and the CLI.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{AlgElement, GradedAlgebra};
use crate::model::{translation_matrix, ModelTag};
use crate::ratlin::Rat;
use crate::symmetries::{make_origin_symmetry, transport, SymmetrySystem};
use crate::flatmodel::GroupElement;

/// A finite table system on a projective model that violates the composition
/// law: the origin carries a symmetry with nonzero exp parameter while its
/// neighbors carry plain transported ones, so the group-level identity
/// `s_x s_y s_x = s at s_x(y)` fails at the pair (origin, P).
///
/// The table covers the origin and the points with affine coordinates
/// `+-e_last`; the exp parameter at the origin is `e_first`, chosen so the
/// origin symmetry still maps the covered points to covered points.
pub fn loos_violating_table(algebra: &Arc<GradedAlgebra>) -> Result<SymmetrySystem> {
    let model = *algebra.model();
    let m = match model {
        ModelTag::Projective { m } if m >= 2 => m,
        _ => {
            return Err(Error::InvalidInput(
                "the violating table fixture needs a projective model with m >= 2".into(),
            ))
        }
    };
    let mut z0 = vec![Rat::zero(); m];
    z0[0] = Rat::one();
    let z0 = AlgElement::from_grade_vector(algebra, 1, &z0)?;
    let origin_symmetry = make_origin_symmetry(algebra, &z0)?;

    let plain = make_origin_symmetry(algebra, &AlgElement::zero(algebra))?;
    let mut p = vec![Rat::zero(); m];
    p[m - 1] = Rat::one();
    let p_neg: Vec<Rat> = p.iter().map(|c| -c).collect();
    let h_p = GroupElement::new(translation_matrix(&model, &p), model)?;
    let h_pn = GroupElement::new(translation_matrix(&model, &p_neg), model)?;

    SymmetrySystem::table(
        algebra,
        vec![origin_symmetry, transport(&plain, &h_p), transport(&plain, &h_pn)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatmodel::{act, origin};
    use crate::symmetries::verify_symmetry;

    #[test]
    fn fixture_entries_are_genuine_symmetries() {
        let alg = GradedAlgebra::projective(2).unwrap();
        let system = loos_violating_table(&alg).unwrap();
        for point in system.table_points().unwrap() {
            let s = system.symmetry_at(&point).unwrap();
            assert_eq!(s.center, point);
            assert!(verify_symmetry(&s).unwrap().all_hold());
        }
    }

    #[test]
    fn fixture_is_closed_under_the_origin_symmetry() {
        let alg = GradedAlgebra::projective(2).unwrap();
        let system = loos_violating_table(&alg).unwrap();
        let o = origin(*alg.model());
        let s_o = system.symmetry_at(&o).unwrap();
        for point in system.table_points().unwrap() {
            assert!(system.covers(&act(&s_o.element, &point)));
        }
    }
}
