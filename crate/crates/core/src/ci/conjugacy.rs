//! Conjugacy of subgroups inside an ambient group.

use std::collections::HashSet;

use serde_json::json;

use super::transcript::Transcript;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Some `c ∈ A` with `Rᶜ = T`, or `None` after exhausting a right
/// transversal of `N_A(R)` in `A`.
pub fn are_conjugate_subgroups(a: &PermGroup, r: &PermGroup, t: &PermGroup, cap: u128) -> Result<Option<Permutation>> {
    are_conjugate_subgroups_logged(a, r, t, cap, &mut Transcript::new())
}

/// As [`are_conjugate_subgroups`]; when no conjugator exists every
/// transversal element tried is recorded.
pub fn are_conjugate_subgroups_logged(
    a: &PermGroup,
    r: &PermGroup,
    t: &PermGroup,
    cap: u128,
    log: &mut Transcript,
) -> Result<Option<Permutation>> {
    if !r.is_subgroup_of(a) || !t.is_subgroup_of(a) {
        return Err(Error::NotSubgroup);
    }
    if r.order() != t.order() {
        log.record("order_mismatch", json!({ "left": r.order() as u64, "right": t.order() as u64 }));
        return Ok(None);
    }
    let norm = a.normalizer(r, cap)?;
    let norm_elems = norm.enumerate_elements(cap)?;
    let mut covered: HashSet<Permutation> = HashSet::new();
    let mut tried = Vec::new();
    for x in a.enumerate_elements(cap)? {
        if covered.contains(&x) {
            continue;
        }
        // right coset N∘x: every element conjugates R the same way
        for nrm in &norm_elems {
            covered.insert(nrm.then_unchecked(&x));
        }
        if PermGroup::conjugates_onto(r, t, &x) {
            log.record("conjugator_found", json!({ "conjugator": x }));
            return Ok(Some(x));
        }
        tried.push(x);
    }
    log.record(
        "exhausted",
        json!({ "normalizer_order": norm.order() as u64, "transversal_size": tried.len() }),
    );
    for x in tried {
        log.record("tried", json!({ "conjugator": x }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_for_equal_groups() {
        let s4 = PermGroup::symmetric(4);
        let v = PermGroup::alternating(4);
        assert!(are_conjugate_subgroups(&s4, &v, &v, 1000).unwrap().unwrap().is_identity());
    }

    #[test]
    fn point_stabilizers_in_s4() {
        let s4 = PermGroup::symmetric(4);
        let r = s4.pointwise_stabilizer(&[0]);
        let t = s4.pointwise_stabilizer(&[3]);
        let c = are_conjugate_subgroups(&s4, &r, &t, 1000).unwrap().unwrap();
        assert_eq!(r.conjugate(&c).unwrap(), t);
    }

    #[test]
    fn nonconjugate_and_errors() {
        let s4 = PermGroup::symmetric(4);
        let z4 = PermGroup::cyclic(4);
        let v4 = PermGroup::new(
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            ],
        )
        .unwrap();
        let mut log = Transcript::new();
        assert_eq!(are_conjugate_subgroups_logged(&s4, &z4, &v4, 1000, &mut log).unwrap(), None);
        assert_eq!(log.events[0]["event"], "exhausted");
        assert_eq!(log.len(), 1 + 24 / 8);
        let s3 = PermGroup::symmetric(3);
        assert!(matches!(are_conjugate_subgroups(&s3, &s3, &z4, 1000), Err(Error::NotSubgroup)));
        assert!(matches!(are_conjugate_subgroups(&s4, &z4, &z4, 5), Err(Error::CapExceeded { .. })));
    }
}
