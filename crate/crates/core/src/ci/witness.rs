//! Left and right regular copies inside the inner holomorph.

use serde::{Deserialize, Serialize};

use super::conjugacy::are_conjugate_subgroups;
use crate::closures::{k_closure_with_budget, ClosureBudget};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::zoo::{inner_holomorph, regular_representation, GroupSpec, Side};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolomorphReport {
    pub spec: GroupSpec,
    pub holomorph_order: u128,
    pub closure_order: u128,
    pub is_3_closed: bool,
    pub left_right_conjugate: bool,
    pub conjugator: Option<Permutation>,
}

/// Builds `⟨G_L, G_R⟩`, computes its 3-closure and decides whether `G_L`
/// and `G_R` are conjugate inside it.
pub fn holomorph_witness(spec: &GroupSpec, budget: &ClosureBudget, cap: u128) -> Result<HolomorphReport> {
    let n = spec.order()?;
    if n > budget.max_degree_k3 {
        return Err(Error::BudgetExceeded {
            degree: n,
            arity: 3,
            budget: budget.max_degree_k3,
        });
    }
    let hol = inner_holomorph(spec)?;
    let closure = k_closure_with_budget(&hol, 3, budget)?;
    let left = regular_representation(spec, Side::Left)?.group;
    let right = regular_representation(spec, Side::Right)?.group;
    let conjugator = are_conjugate_subgroups(&hol, &left, &right, cap)?;
    Ok(HolomorphReport {
        spec: spec.clone(),
        holomorph_order: hol.order(),
        closure_order: closure.order(),
        is_3_closed: closure.order() == hol.order(),
        left_right_conjugate: conjugator.is_some(),
        conjugator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    #[test]
    fn abelian_is_trivially_conjugate() {
        let r = holomorph_witness(&GroupSpec::Cyclic { n: 5 }, &ClosureBudget::default(), DEFAULT_CAP).unwrap();
        assert_eq!(r.holomorph_order, 5);
        assert!(r.left_right_conjugate);
        assert!(r.conjugator.unwrap().is_identity());
    }

    #[test]
    fn frobenius_20() {
        let r = holomorph_witness(&GroupSpec::Frobenius { p: 5, n: 4 }, &ClosureBudget::default(), DEFAULT_CAP).unwrap();
        assert_eq!((r.holomorph_order, r.closure_order), (400, 400));
        assert!(r.is_3_closed && !r.left_right_conjugate);
    }

    #[test]
    fn over_budget() {
        let spec = GroupSpec::Cyclic { n: 70 };
        assert!(matches!(
            holomorph_witness(&spec, &ClosureBudget::default(), DEFAULT_CAP),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
