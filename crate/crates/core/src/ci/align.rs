//! Conjugating one regular group so that its Sylow `p`-orbits match another's.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::transcript::Transcript;
use crate::blocks::{all_block_systems, fix_blocks_by_kernel, BlockSystem};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::zoo::numtheory::is_prime;
use crate::zoo::CayleyTable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignResult {
    /// `δ` with `Orb(R_p) = Orb((T^δ)_p)`.
    pub delta: Option<Permutation>,
    /// The common orbit partition when `δ` exists.
    pub system: Option<BlockSystem>,
    /// Which path produced `δ`: `identity`, `sylow` or `exhaustive`.
    pub method: Option<String>,
    pub transcript: Transcript,
}

/// Does `g` map every cell of `from` onto a cell of `to`?
pub(crate) fn maps_partition(g: &Permutation, from: &BlockSystem, to: &BlockSystem) -> bool {
    let idx = to.cell_index();
    from.blocks().iter().all(|b| {
        let c = idx[g.apply(b[0])];
        b.iter().all(|&x| idx[g.apply(x)] == c)
    })
}

/// First `g ∈ G` in enumeration order with `g(from) = to`.
pub(crate) fn find_partition_conjugator(
    g: &PermGroup,
    from: &BlockSystem,
    to: &BlockSystem,
    cap: u128,
) -> Result<Option<Permutation>> {
    if from.block_size() != to.block_size() {
        return Ok(None);
    }
    g.find_element(cap, |x| maps_partition(x, from, to))
}

fn orbit_system(g: &PermGroup) -> Result<BlockSystem> {
    BlockSystem::new(g.orbits()).map_err(|_| Error::Precondition("orbits of unequal size".into()))
}

fn check_regular_pair(r: &PermGroup, t: &PermGroup, ambient: &PermGroup, cap: u128) -> Result<()> {
    if !r.transitivity_profile().regular || !t.transitivity_profile().regular {
        return Err(Error::Precondition("both groups must be regular".into()));
    }
    if !r.is_subgroup_of(ambient) || !t.is_subgroup_of(ambient) {
        return Err(Error::NotSubgroup);
    }
    if ambient.order() > cap {
        return Err(Error::CapExceeded {
            order: ambient.order(),
            cap,
        });
    }
    let (a, b) = (CayleyTable::from_perm_group(r, cap)?, CayleyTable::from_perm_group(t, cap)?);
    if !a.is_isomorphic(&b) {
        return Err(Error::Precondition("groups are not isomorphic".into()));
    }
    Ok(())
}

/// Finds `δ ∈ ambient` such that the Sylow `p`-subgroups of `R` and `T^δ`
/// have the same orbits.
///
/// Tries, for each block system `𝓑` of the ambient group (smallest blocks
/// first) whose kernel contains both Sylow subgroups, a Sylow subgroup `P`
/// of the kernel through `R_p` and an element of the kernel conjugating
/// `T_p` into `P`. Falls back to scanning the ambient group.
pub fn align_sylow_orbits(
    r: &PermGroup,
    t: &PermGroup,
    p: u64,
    ambient: &PermGroup,
    cap: u128,
) -> Result<AlignResult> {
    if p.is_multiple_of(2) || !is_prime(p) || !r.order().is_multiple_of(p as u128) {
        return Err(Error::Precondition(format!("{p} must be an odd prime dividing |R|")));
    }
    check_regular_pair(r, t, ambient, cap)?;
    let mut log = Transcript::new();
    let rp = r.sylow_subgroup(p, cap)?;
    let tp = t.sylow_subgroup(p, cap)?;
    let target = orbit_system(&rp)?;
    let source = orbit_system(&tp)?;
    let done = |delta: Permutation, method: &str, log: Transcript| AlignResult {
        delta: Some(delta),
        system: Some(target.clone()),
        method: Some(method.to_string()),
        transcript: log,
    };
    if target == source {
        log.record("aligned", json!({ "method": "identity" }));
        return Ok(done(ambient.identity(), "identity", log));
    }
    for sys in all_block_systems(ambient)?.into_iter().filter(|s| s.block_size() > 1) {
        let kernel = fix_blocks_by_kernel(ambient, &sys)?;
        if !rp.is_subgroup_of(&kernel) || !tp.is_subgroup_of(&kernel) {
            continue;
        }
        let sylow = kernel.sylow_containing(&rp, p, cap)?;
        let delta = kernel.find_element(cap, |g| {
            tp.generators().iter().all(|x| sylow.contains(&x.conjugate_by(g)))
        })?;
        let ok = delta.as_ref().is_some_and(|d| maps_partition(&d.inverse(), &source, &target));
        log.record(
            "sylow_attempt",
            json!({
                "block_size": sys.block_size(),
                "kernel_order": kernel.order() as u64,
                "sylow_order": sylow.order() as u64,
                "delta": delta,
                "orbits_match": ok,
            }),
        );
        if ok {
            return Ok(done(delta.expect("checked").clone(), "sylow", log));
        }
    }
    match find_partition_conjugator(ambient, &target, &source, cap)? {
        Some(d) => {
            log.record("aligned", json!({ "method": "exhaustive", "delta": d }));
            Ok(done(d, "exhaustive", log))
        }
        None => {
            log.record("none", json!({ "ambient_order": ambient.order() as u64 }));
            Ok(AlignResult {
                delta: None,
                system: None,
                method: None,
                transcript: log,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::classify_block_system;
    use crate::group::DEFAULT_CAP;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn identity_when_equal() {
        let r = PermGroup::cyclic(15);
        let res = align_sylow_orbits(&r, &r, 5, &r, DEFAULT_CAP).unwrap();
        assert!(res.delta.unwrap().is_identity());
    }

    #[test]
    fn two_cyclic_copies() {
        let r = PermGroup::cyclic(15);
        // relabel x ↦ 2x + 1 mod 15 composed with a swap of two points
        let c = perm(&(0..15).map(|x| (2 * x + 1) % 15).collect::<Vec<_>>())
            .compose(&Permutation::from_cycles(15, &[&[0, 1]]).unwrap())
            .unwrap();
        let t = r.conjugate(&c).unwrap();
        let ambient = r.join(&t).unwrap();
        if ambient.order() > DEFAULT_CAP {
            return;
        }
        let res = align_sylow_orbits(&r, &t, 5, &ambient, DEFAULT_CAP).unwrap();
        let d = res.delta.unwrap();
        let td = t.conjugate(&d).unwrap();
        let sys = res.system.unwrap();
        assert_eq!(sys.block_size(), 5);
        let h = r.join(&td).unwrap();
        let c = classify_block_system(&h, sys.blocks().to_vec()).unwrap();
        assert!(c.is_block_system && c.is_normal);
    }

    #[test]
    fn preconditions() {
        let r = PermGroup::cyclic(6);
        assert!(align_sylow_orbits(&r, &r, 2, &r, DEFAULT_CAP).is_err());
        assert!(align_sylow_orbits(&r, &r, 5, &r, DEFAULT_CAP).is_err());
        let s = PermGroup::symmetric(6);
        assert!(align_sylow_orbits(&s, &s, 3, &s, DEFAULT_CAP).is_err());
    }
}
