//! Searching for a conjugator that gives two regular groups a common tower
//! of normal block systems.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::align::find_partition_conjugator;
use super::transcript::Transcript;
use crate::blocks::{action_on_blocks, all_block_systems, is_normal_system, verify_tower, BlockSystem};
use crate::error::{Error, Result};
use crate::group::{CombinedAction, PermGroup};
use crate::perm::Permutation;
use crate::zoo::numtheory::{big_omega, factorize, is_prime};
use crate::zoo::{in_family_r_table, isomorphic_to_spec, CayleyTable, GroupSpec};

/// Ratio tails allowed to break the nonincreasing-primes rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalCase {
    /// `…, 2, 3, 2, 2` with `m = Ω`, quotient `ℤ₃ ⋊ ℤ₈` below the `2`.
    Z3Y8TwoThree,
    /// `…, 4, 3` with `m = Ω − 1`, dicyclic quotient below the `4`.
    DicyclicFourThree,
    /// `…, 2, 4, 3` with `m = Ω − 1`.
    Z3Y8TwoFourThree,
    /// `…, 4, 3, 2` with `m = Ω − 1`.
    Z3Y8FourThreeTwo,
}

impl ExceptionalCase {
    const ALL: [ExceptionalCase; 4] = [
        ExceptionalCase::Z3Y8TwoThree,
        ExceptionalCase::DicyclicFourThree,
        ExceptionalCase::Z3Y8TwoFourThree,
        ExceptionalCase::Z3Y8FourThreeTwo,
    ];

    pub fn tail(self) -> &'static [usize] {
        match self {
            ExceptionalCase::Z3Y8TwoThree => &[2, 3, 2, 2],
            ExceptionalCase::DicyclicFourThree => &[4, 3],
            ExceptionalCase::Z3Y8TwoFourThree => &[2, 4, 3],
            ExceptionalCase::Z3Y8FourThreeTwo => &[4, 3, 2],
        }
    }

    /// Exponent of 2 in the degree.
    pub fn two_exponent(self) -> u32 {
        match self {
            ExceptionalCase::DicyclicFourThree => 2,
            _ => 3,
        }
    }

    /// How far `m` falls short of `Ω(degree)`.
    pub fn deficit(self) -> u32 {
        match self {
            ExceptionalCase::Z3Y8TwoThree => 0,
            _ => 1,
        }
    }

    /// The group the quotient at the start of the tail must be.
    pub fn quotient(self) -> GroupSpec {
        match self {
            ExceptionalCase::DicyclicFourThree => GroupSpec::Dicyclic { m: 3 },
            _ => GroupSpec::ZnSemidirectY {
                n: 3,
                order_of_y: 8,
                action: -1,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioPattern {
    /// Every ratio prime, nonincreasing from the bottom.
    Main,
    Exceptional(ExceptionalCase),
}

fn nonincreasing_primes(r: &[usize]) -> bool {
    r.iter().all(|&x| is_prime(x as u64)) && r.windows(2).all(|w| w[0] >= w[1])
}

/// Matches a ratio sequence for a group of the given degree against the
/// allowed patterns, ignoring the quotient conditions.
pub fn match_ratio_pattern(degree: usize, ratios: &[usize]) -> Option<RatioPattern> {
    if ratios.iter().product::<usize>() != degree {
        return None;
    }
    let omega = big_omega(degree as u64);
    if nonincreasing_primes(ratios) {
        return Some(RatioPattern::Main);
    }
    let e = degree.trailing_zeros();
    ExceptionalCase::ALL
        .into_iter()
        .find(|case| {
            let tail = case.tail();
            ratios.len() >= tail.len()
                && ratios.len() as u32 + case.deficit() == omega
                && e == case.two_exponent()
                && ratios.ends_with(tail)
                && nonincreasing_primes(&ratios[..ratios.len() - tail.len()])
        })
        .map(RatioPattern::Exceptional)
}

/// Matches a concrete tower for `R`, including the quotient condition of
/// the exceptional cases.
pub fn classify_tower(r: &PermGroup, tower: &[BlockSystem], cap: u128) -> Result<Option<RatioPattern>> {
    let ratios: Vec<usize> = tower.windows(2).map(|w| w[1].block_size() / w[0].block_size()).collect();
    let pattern = match match_ratio_pattern(r.degree(), &ratios) {
        Some(p) => p,
        None => return Ok(None),
    };
    if let RatioPattern::Exceptional(case) = pattern {
        let below = tower.len() - 1 - case.tail().len();
        let quotient = action_on_blocks(r, &tower[below])?;
        if !isomorphic_to_spec(quotient.image(), &case.quotient(), cap)? {
            return Ok(None);
        }
    }
    Ok(Some(pattern))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerResult {
    /// `g ∈ ⟨R, T⟩`; the tower belongs to `⟨R, T^g⟩`.
    pub conjugator: Permutation,
    pub tower: Vec<BlockSystem>,
    pub ratios: Vec<usize>,
    pub exceptional_case: Option<ExceptionalCase>,
    pub m: usize,
    pub omega: u32,
    /// `prime_descent` or `chain_scan`.
    pub method: String,
    pub transcript: Transcript,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerFailure {
    pub reason: String,
    /// Ratios of the last complete tower found, if any.
    pub ratios: Option<Vec<usize>>,
    pub transcript: Transcript,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TowerOutcome {
    Found(TowerResult),
    NotFound(TowerFailure),
}

impl TowerOutcome {
    pub fn found(&self) -> Option<&TowerResult> {
        match self {
            TowerOutcome::Found(r) => Some(r),
            TowerOutcome::NotFound(_) => None,
        }
    }
}

fn sorted_elements(g: &PermGroup, cap: u128) -> Result<Vec<Permutation>> {
    let mut e = g.enumerate_elements(cap)?;
    e.sort();
    Ok(e)
}

/// Normal subgroups of order `q` of a small group, as orbit partitions.
fn normal_prime_orbits(r: &PermGroup, q: usize, cap: u128) -> Result<Vec<BlockSystem>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in r.enumerate_elements(cap)? {
        if x.order() != q as u64 {
            continue;
        }
        let c = PermGroup::new(r.degree(), vec![x])?;
        if !seen.insert(sorted_elements(&c, cap)?) || !c.is_normal_in(r)? {
            continue;
        }
        out.push(BlockSystem::new(c.orbits())?);
    }
    Ok(out)
}

fn largest_prime(n: usize) -> usize {
    factorize(n as u128).last().map_or(1, |&(p, _)| p as usize)
}

/// One level of the descent: align the orbits of normal order-`q`
/// subgroups for the largest prime `q`, pass to the block action and
/// recurse; the returned conjugator lies in `⟨R, T⟩`.
fn descend(
    r: &PermGroup,
    t: &PermGroup,
    cap: u128,
    log: &mut Transcript,
) -> Result<Option<(Permutation, Vec<BlockSystem>)>> {
    let d = r.degree();
    if d == 1 {
        return Ok(Some((Permutation::identity(1), vec![BlockSystem::singletons(1)])));
    }
    let q = largest_prime(d);
    let ambient = r.join(t)?;
    if ambient.order() > cap {
        return Err(Error::CapExceeded {
            order: ambient.order(),
            cap,
        });
    }
    let ours = normal_prime_orbits(r, q, cap)?;
    let theirs = normal_prime_orbits(t, q, cap)?;
    for pa in &ours {
        for pb in &theirs {
            let Some(delta) = find_partition_conjugator(&ambient, pa, pb, cap)? else {
                log.record("descent_unaligned", json!({ "degree": d, "prime": q }));
                continue;
            };
            let td = t.conjugate(&delta)?;
            let h = r.join(&td)?;
            let rq = action_on_blocks(r, pa)?.image().clone();
            let tq = action_on_blocks(&td, pa)?.image().clone();
            log.record(
                "descent_aligned",
                json!({ "degree": d, "prime": q, "delta": delta, "ambient_order": h.order() as u64 }),
            );
            let Some((gbar, upper)) = descend(&rq, &tq, cap, log)? else {
                continue;
            };
            let lift = CombinedAction::new(&h, pa.blocks())?
                .preimage(&gbar)
                .ok_or_else(|| Error::Precondition("block conjugator has no preimage".into()))?;
            let mut tower = vec![BlockSystem::singletons(d)];
            for s in &upper {
                tower.push(pa.expand(s)?);
            }
            return Ok(Some((delta.compose(&lift)?, tower)));
        }
    }
    Ok(None)
}

/// Every chain of normal block systems of `h` from singletons to one
/// block, finest steps first; stops at the first one `accept` takes.
fn scan_chains(
    h: &PermGroup,
    accept: &mut dyn FnMut(&[BlockSystem]) -> Result<bool>,
) -> Result<Option<Vec<BlockSystem>>> {
    let mut normal = Vec::new();
    for s in all_block_systems(h)? {
        if is_normal_system(h, &s)? {
            normal.push(s);
        }
    }
    fn walk(
        normal: &[BlockSystem],
        chain: &mut Vec<BlockSystem>,
        accept: &mut dyn FnMut(&[BlockSystem]) -> Result<bool>,
    ) -> Result<bool> {
        let top = chain.last().expect("nonempty");
        if top.num_blocks() == 1 {
            return accept(chain);
        }
        let next: Vec<BlockSystem> = normal.iter().filter(|s| top.strictly_refines(s)).cloned().collect();
        for s in next {
            chain.push(s);
            if walk(normal, chain, accept)? {
                return Ok(true);
            }
            chain.pop();
        }
        Ok(false)
    }
    let mut chain = vec![BlockSystem::singletons(h.degree())];
    Ok(if walk(&normal, &mut chain, accept)? {
        Some(chain)
    } else {
        None
    })
}

fn ratios_of(tower: &[BlockSystem]) -> Vec<usize> {
    tower.windows(2).map(|w| w[1].block_size() / w[0].block_size()).collect()
}

/// Finds `g ∈ ⟨R, T⟩` and a tower of normal block systems of `⟨R, T^g⟩`
/// whose ratios fit the allowed patterns.
///
/// First descends prime by prime from the largest; if that fails or its
/// ratios do not fit, scans every distinct conjugate `T^g` and every chain
/// of normal block systems of `⟨R, T^g⟩`.
pub fn block_tower_search(r: &PermGroup, t: &PermGroup, cap: u128) -> Result<TowerOutcome> {
    let d = r.degree();
    if t.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: t.degree(),
        });
    }
    if !r.transitivity_profile().regular || !t.transitivity_profile().regular {
        return Err(Error::Precondition("both groups must be regular".into()));
    }
    let table = CayleyTable::from_perm_group(r, cap)?;
    if !table.is_isomorphic(&CayleyTable::from_perm_group(t, cap)?) {
        return Err(Error::Precondition("groups are not isomorphic".into()));
    }
    let family = in_family_r_table(&table);
    if !family.member {
        return Err(Error::Precondition("group is not in the family R".into()));
    }
    let ambient = r.join(t)?;
    if ambient.order() > cap {
        return Err(Error::CapExceeded {
            order: ambient.order(),
            cap,
        });
    }
    let omega = big_omega(d as u64);
    let mut log = Transcript::new();
    log.record(
        "start",
        json!({ "degree": d, "ambient_order": ambient.order() as u64, "case": family.case }),
    );
    let finish = |g: Permutation, tower: Vec<BlockSystem>, pattern: RatioPattern, method: &str, log: Transcript| {
        let h = r.join(&t.conjugate(&g)?)?;
        let report = verify_tower(&h, &tower)?;
        if !(report.m_step && report.normal && report.full) {
            return Err(Error::Precondition(format!("tower failed verification: {:?}", report.broken_at)));
        }
        Ok(TowerOutcome::Found(TowerResult {
            conjugator: g,
            ratios: report.index_sequence,
            m: tower.len() - 1,
            tower,
            exceptional_case: match pattern {
                RatioPattern::Main => None,
                RatioPattern::Exceptional(c) => Some(c),
            },
            omega,
            method: method.to_string(),
            transcript: log,
        }))
    };

    let mut last_ratios = None;
    if let Some((g, tower)) = descend(r, t, cap, &mut log)? {
        let ratios = ratios_of(&tower);
        match classify_tower(r, &tower, cap)? {
            Some(p) => {
                log.record("descent_done", json!({ "ratios": ratios }));
                return finish(g, tower, p, "prime_descent", log);
            }
            None => {
                log.record("descent_mismatch", json!({ "ratios": ratios }));
                last_ratios = Some(ratios);
            }
        }
    }

    // main pattern over every conjugate first, exceptional tails second
    let elements = ambient.enumerate_elements(cap)?;
    let mut conjugates = 0usize;
    for allow_exceptional in [false, true] {
        let mut seen = HashSet::new();
        for g in &elements {
            let tg = t.conjugate(g)?;
            if !seen.insert(sorted_elements(&tg, cap)?) {
                continue;
            }
            conjugates += 1;
            let h = r.join(&tg)?;
            let mut pattern = None;
            let found = scan_chains(&h, &mut |chain| {
                last_ratios = Some(ratios_of(chain));
                pattern = classify_tower(r, chain, cap)?;
                Ok(matches!(pattern, Some(RatioPattern::Main)) || (allow_exceptional && pattern.is_some()))
            })?;
            if let (Some(tower), Some(p)) = (found, pattern) {
                log.record(
                    "chain_scan_done",
                    json!({ "conjugates_scanned": conjugates, "conjugator": g, "ratios": ratios_of(&tower) }),
                );
                return finish(g.clone(), tower, p, "chain_scan", log);
            }
        }
    }
    log.record("chain_scan_exhausted", json!({ "conjugates_scanned": conjugates }));
    Ok(TowerOutcome::NotFound(TowerFailure {
        reason: match &last_ratios {
            Some(_) => "no tower matches an allowed ratio pattern".into(),
            None => "no tower of normal block systems".into(),
        },
        ratios: last_ratios,
        transcript: log,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;
    use crate::zoo::{regular_representation, Side};

    #[test]
    fn patterns() {
        assert_eq!(match_ratio_pattern(12, &[3, 2, 2]), Some(RatioPattern::Main));
        assert_eq!(match_ratio_pattern(12, &[2, 3, 2]), None);
        assert_eq!(
            match_ratio_pattern(12, &[4, 3]),
            Some(RatioPattern::Exceptional(ExceptionalCase::DicyclicFourThree))
        );
        assert_eq!(match_ratio_pattern(12, &[3, 4]), None);
        assert_eq!(
            match_ratio_pattern(24, &[2, 3, 2, 2]),
            Some(RatioPattern::Exceptional(ExceptionalCase::Z3Y8TwoThree))
        );
        assert_eq!(
            match_ratio_pattern(120, &[5, 4, 3, 2]),
            Some(RatioPattern::Exceptional(ExceptionalCase::Z3Y8FourThreeTwo))
        );
        assert_eq!(
            match_ratio_pattern(24, &[2, 4, 3]),
            Some(RatioPattern::Exceptional(ExceptionalCase::Z3Y8TwoFourThree))
        );
        assert_eq!(match_ratio_pattern(48, &[4, 3, 2, 2]), None);
        assert_eq!(match_ratio_pattern(12, &[3, 2]), None);
        assert_eq!(match_ratio_pattern(1, &[]), Some(RatioPattern::Main));
    }

    #[test]
    fn cyclic_twelve() {
        let r = PermGroup::cyclic(12);
        let out = block_tower_search(&r, &r, DEFAULT_CAP).unwrap();
        let res = out.found().unwrap();
        assert_eq!(res.ratios, vec![3, 2, 2]);
        assert_eq!((res.m, res.omega), (3, 3));
        assert!(res.conjugator.is_identity());
        assert_eq!(res.exceptional_case, None);
    }

    #[test]
    fn conjugate_dicyclic_copies() {
        let r = regular_representation(&GroupSpec::Dicyclic { m: 3 }, Side::Left).unwrap().group;
        // c preserves the orbits of the normal subgroup of order 3
        let orbits = r.sylow_subgroup(3, DEFAULT_CAP).unwrap().orbits();
        let (b0, b1) = (&orbits[0], &orbits[1]);
        let c = Permutation::from_cycles(12, &[&[b0[0], b0[1]], &[b1[0], b1[2]]]).unwrap();
        let t = r.conjugate(&c).unwrap();
        let out = block_tower_search(&r, &t, DEFAULT_CAP).unwrap();
        let res = out.found().expect("tower");
        let h = r.join(&t.conjugate(&res.conjugator).unwrap()).unwrap();
        assert!(res.conjugator.is_identity() || r.join(&t).unwrap().contains(&res.conjugator));
        let rep = verify_tower(&h, &res.tower).unwrap();
        assert!(rep.normal && rep.full);
        assert!(match_ratio_pattern(12, &res.ratios).is_some());
    }

    #[test]
    fn rejects_non_members() {
        let r = PermGroup::cyclic(9);
        assert!(block_tower_search(&r, &r, DEFAULT_CAP).is_err());
        let s = PermGroup::symmetric(4);
        assert!(block_tower_search(&s, &s, DEFAULT_CAP).is_err());
    }
}
