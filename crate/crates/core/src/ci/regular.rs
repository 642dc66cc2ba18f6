//! Regular subgroups of a permutation group and the conjugacy criterion
//! for Cayley objects.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::conjugacy::are_conjugate_subgroups_logged;
use super::transcript::Transcript;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::zoo::{CayleyTable, GroupSpec};

fn key_of(g: &PermGroup, cap: u128) -> Result<Vec<Permutation>> {
    let mut e = g.enumerate_elements(cap)?;
    e.sort();
    Ok(e)
}

struct Finder<'a> {
    degree: usize,
    n: usize,
    target_hist: BTreeMap<usize, usize>,
    target: CayleyTable,
    /// Fixed-point-free elements of admissible order, bucketed by image of 0.
    by_image: Vec<Vec<&'a Permutation>>,
    seen: HashSet<Vec<Permutation>>,
    found: Vec<PermGroup>,
    cap: u128,
}

impl Finder<'_> {
    fn admissible(&self, h: &PermGroup, elems: &[Permutation]) -> bool {
        if !(self.n as u128).is_multiple_of(h.order()) || !h.transitivity_profile().semiregular {
            return false;
        }
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for e in elems {
            *hist.entry(e.order() as usize).or_insert(0) += 1;
        }
        hist.iter()
            .all(|(o, c)| self.target_hist.get(o).is_some_and(|t| c <= t))
    }

    fn extend(&mut self, h: &PermGroup) -> Result<()> {
        if h.order() == self.n as u128 {
            let table = CayleyTable::from_perm_group(h, self.cap)?;
            if table.is_isomorphic(&self.target) {
                self.found.push(h.clone());
            }
            return Ok(());
        }
        let orbit = h.orbit(0);
        let y = (0..self.degree).find(|x| orbit.binary_search(x).is_err()).expect("not transitive yet");
        let candidates: Vec<Permutation> = self.by_image[y].iter().map(|&p| p.clone()).collect();
        for g in candidates {
            let mut gens = h.generators().to_vec();
            gens.push(g);
            let next = PermGroup::new(self.degree, gens)?;
            if next.order() > self.n as u128 {
                continue;
            }
            let key = key_of(&next, self.cap)?;
            if !self.seen.insert(key.clone()) {
                continue;
            }
            if self.admissible(&next, &key) {
                self.extend(&next)?;
            }
        }
        Ok(())
    }
}

/// Every regular subgroup of `a` isomorphic to `spec`, in discovery order.
pub fn all_regular_subgroups(a: &PermGroup, spec: &GroupSpec, cap: u128) -> Result<Vec<PermGroup>> {
    let target = spec.table()?;
    let n = target.order();
    if a.degree() != n {
        return Err(Error::Precondition(format!(
            "degree {} differs from |{spec}| = {n}",
            a.degree()
        )));
    }
    let elems = a.enumerate_elements(cap)?;
    let target_hist = target.order_histogram();
    let mut by_image: Vec<Vec<&Permutation>> = vec![Vec::new(); n];
    for e in &elems {
        if !e.is_identity() && e.fixed_points() == 0 && target_hist.contains_key(&(e.order() as usize)) {
            by_image[e.apply(0)].push(e);
        }
    }
    let mut finder = Finder {
        degree: n,
        n,
        target_hist,
        target,
        by_image,
        seen: HashSet::new(),
        found: Vec::new(),
        cap,
    };
    finder.extend(&PermGroup::trivial(n))?;
    Ok(finder.found)
}

/// Groups the subgroups into orbits under conjugation by `a`'s generators;
/// the set must be closed under that action.
fn conjugacy_orbits(a: &PermGroup, subgroups: &[PermGroup], cap: u128) -> Result<Vec<usize>> {
    let keys: Vec<Vec<Permutation>> = subgroups.iter().map(|h| key_of(h, cap)).collect::<Result<_>>()?;
    let index: HashMap<&Vec<Permutation>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut class = vec![usize::MAX; subgroups.len()];
    let mut reps = Vec::new();
    for start in 0..subgroups.len() {
        if class[start] != usize::MAX {
            continue;
        }
        class[start] = reps.len();
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for g in a.generators() {
                let conj = subgroups[i].conjugate(g)?;
                let j = *index
                    .get(&key_of(&conj, cap)?)
                    .ok_or_else(|| Error::Precondition("subgroup list not closed under conjugation".into()))?;
                if class[j] == usize::MAX {
                    class[j] = reps.len();
                    queue.push(j);
                }
            }
        }
        reps.push(start);
    }
    Ok(reps)
}

/// Representatives of the `a`-conjugacy classes of regular subgroups of `a`
/// isomorphic to `spec`.
pub fn regular_subgroups(a: &PermGroup, spec: &GroupSpec, cap: u128) -> Result<Vec<PermGroup>> {
    let all = all_regular_subgroups(a, spec, cap)?;
    let reps = conjugacy_orbits(a, &all, cap)?;
    Ok(reps.into_iter().map(|i| all[i].clone()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiStatus {
    CiForThisStructure,
    NotCiWitness,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiVerdict {
    pub status: CiStatus,
    pub witness: Option<(PermGroup, PermGroup)>,
    pub classes: usize,
    pub transcript: Transcript,
}

/// Counts classes of regular subgroups isomorphic to `spec`; with two or
/// more, the first two representatives are certified nonconjugate.
pub fn babai_check(a: &PermGroup, spec: &GroupSpec, cap: u128) -> Result<CiVerdict> {
    let mut log = Transcript::new();
    let all = all_regular_subgroups(a, spec, cap)?;
    let reps = conjugacy_orbits(a, &all, cap)?;
    log.record(
        "regular_subgroups",
        json!({ "spec": spec.to_string(), "found": all.len(), "classes": reps.len() }),
    );
    let classes = reps.len();
    if classes == 0 {
        return Ok(CiVerdict {
            status: CiStatus::Inconclusive,
            witness: None,
            classes,
            transcript: log,
        });
    }
    if classes == 1 {
        return Ok(CiVerdict {
            status: CiStatus::CiForThisStructure,
            witness: None,
            classes,
            transcript: log,
        });
    }
    let (r, t) = (all[reps[0]].clone(), all[reps[1]].clone());
    if are_conjugate_subgroups_logged(a, &r, &t, cap, &mut log)?.is_some() {
        return Err(Error::Precondition("class representatives turned out conjugate".into()));
    }
    Ok(CiVerdict {
        status: CiStatus::NotCiWitness,
        witness: Some((r, t)),
        classes,
        transcript: log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closures::k_closure;
    use crate::group::DEFAULT_CAP;

    #[test]
    fn cyclic_ambient() {
        let z6 = PermGroup::cyclic(6);
        let reps = regular_subgroups(&z6, &GroupSpec::Cyclic { n: 6 }, DEFAULT_CAP).unwrap();
        assert_eq!(reps, vec![z6]);
    }

    #[test]
    fn klein_in_s4() {
        let s4 = PermGroup::symmetric(4);
        let reps = regular_subgroups(&s4, &GroupSpec::ElementaryAbelian2 { e: 2 }, DEFAULT_CAP).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].order(), 4);
        assert_eq!(regular_subgroups(&s4, &GroupSpec::Z4, DEFAULT_CAP).unwrap().len(), 1);
    }

    #[test]
    fn verdicts() {
        let a = k_closure(&PermGroup::cyclic(5), 2).unwrap();
        let v = babai_check(&a, &GroupSpec::Cyclic { n: 5 }, DEFAULT_CAP).unwrap();
        assert_eq!((v.status, v.classes), (CiStatus::CiForThisStructure, 1));
        let v = babai_check(&PermGroup::cyclic(4), &GroupSpec::ElementaryAbelian2 { e: 2 }, DEFAULT_CAP).unwrap();
        assert_eq!((v.status, v.classes), (CiStatus::Inconclusive, 0));
        assert!(babai_check(&PermGroup::cyclic(4), &GroupSpec::Cyclic { n: 5 }, DEFAULT_CAP).is_err());
    }
}
