//! Exhaustive reference computations for small inputs.
//!
//! Everything here is deliberately naive and shares no search code with
//! the rest of the crate; tests and the reproduction pipelines compare the
//! fast paths against these.

use std::collections::{HashMap, HashSet};

use crate::blocks::BlockSystem;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Largest degree for which the symmetric group is scanned.
pub const MAX_SCAN_DEGREE: usize = 8;

/// All `n!` permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n > MAX_SCAN_DEGREE {
        return Err(Error::Unsupported(format!("symmetric scan above degree {MAX_SCAN_DEGREE}")));
    }
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation::from_images(cur.clone())?];
    while let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation::from_images(cur.clone())?);
    }
    Ok(out)
}

/// Orbit id of every `k`-tuple under `G`, indexed by the base-`n` code of
/// the tuple (first coordinate most significant).
pub fn tuple_orbits(g: &PermGroup, k: usize) -> Vec<usize> {
    let n = g.degree();
    let total = n.pow(k as u32);
    let decode = |mut c: usize| {
        let mut t = vec![0; k];
        for i in (0..k).rev() {
            t[i] = c % n;
            c /= n;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * n + x);
    let mut orbit = vec![usize::MAX; total];
    let mut next = 0;
    for start in 0..total {
        if orbit[start] != usize::MAX {
            continue;
        }
        orbit[start] = next;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            let t = decode(c);
            for h in g.generators() {
                let img: Vec<usize> = t.iter().map(|&x| h.apply(x)).collect();
                let d = encode(&img);
                if orbit[d] == usize::MAX {
                    orbit[d] = next;
                    stack.push(d);
                }
            }
        }
        next += 1;
    }
    orbit
}

/// The `k`-closure by filtering the symmetric group: every `σ` fixing
/// each orbit of `G` on `k`-tuples.
pub fn k_closure_elements(g: &PermGroup, k: usize) -> Result<Vec<Permutation>> {
    let n = g.degree();
    let orbit = tuple_orbits(g, k);
    let image = |s: &Permutation, code: usize| {
        // digits are position-independent, so reading them low to high is fine
        let (mut rest, mut img, mut place) = (code, 0, 1);
        for _ in 0..k {
            img += s.apply(rest % n) * place;
            place *= n;
            rest /= n;
        }
        img
    };
    let mut out = Vec::new();
    for s in all_permutations(n)? {
        if (0..orbit.len()).all(|c| orbit[image(&s, c)] == orbit[c]) {
            out.push(s);
        }
    }
    Ok(out)
}

pub fn k_closure_order(g: &PermGroup, k: usize) -> Result<u128> {
    Ok(k_closure_elements(g, k)?.len() as u128)
}

fn combinations(m: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, r, &mut Vec::new(), &mut out);
    out
}

fn equal_partitions(n: usize, size: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(rest: &[usize], size: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        // the smallest remaining point plus size - 1 companions
        let others = &rest[1..];
        for pick in combinations(others.len(), size - 1) {
            let mut block = vec![rest[0]];
            block.extend(pick.iter().map(|&i| others[i]));
            let remaining: Vec<usize> = (0..others.len())
                .filter(|i| !pick.contains(i))
                .map(|i| others[i])
                .collect();
            cur.push(block);
            rec(&remaining, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let points: Vec<usize> = (0..n).collect();
    rec(&points, size, &mut Vec::new(), &mut out);
    out
}

/// Every `G`-invariant partition into equal blocks, trivial ones included,
/// sorted by block size and then blocks.
pub fn block_systems(g: &PermGroup) -> Result<Vec<BlockSystem>> {
    let n = g.degree();
    if n > MAX_SCAN_DEGREE + 2 {
        return Err(Error::Unsupported(format!("partition scan above degree {}", MAX_SCAN_DEGREE + 2)));
    }
    let mut out = Vec::new();
    for size in (1..=n).filter(|s| n.is_multiple_of(*s)) {
        for p in equal_partitions(n, size) {
            let sys = BlockSystem::new(p)?;
            if g.generators().iter().all(|h| sys.is_invariant_under(h)) {
                out.push(sys);
            }
        }
    }
    out.sort_by(|a, b| (a.block_size(), a.blocks()).cmp(&(b.block_size(), b.blocks())));
    Ok(out)
}

fn sorted_key(g: &PermGroup, cap: u128) -> Result<Vec<Permutation>> {
    let mut e = g.enumerate_elements(cap)?;
    e.sort();
    Ok(e)
}

/// Every regular subgroup of `a`, found by closing the subgroups generated
/// by at most two fixed-point-free elements under joins with single
/// elements, keeping only semiregular groups.
pub fn regular_subgroups(a: &PermGroup, cap: u128) -> Result<Vec<PermGroup>> {
    let n = a.degree();
    let fpf: Vec<Permutation> = a
        .enumerate_elements(cap)?
        .into_iter()
        .filter(|x| !x.is_identity() && x.fixed_points() == 0 && (n as u64).is_multiple_of(x.order()))
        .collect();
    let semiregular = |h: &PermGroup| -> Result<bool> {
        if !(n as u128).is_multiple_of(h.order()) {
            return Ok(false);
        }
        Ok(h.enumerate_elements(cap)?.iter().all(|x| x.is_identity() || x.fixed_points() == 0))
    };
    let mut seen: HashSet<Vec<Permutation>> = HashSet::new();
    let mut pool: Vec<PermGroup> = Vec::new();
    for i in 0..fpf.len() {
        for j in i..fpf.len() {
            let h = PermGroup::new(n, vec![fpf[i].clone(), fpf[j].clone()])?;
            if h.order() > n as u128 || !semiregular(&h)? {
                continue;
            }
            if seen.insert(sorted_key(&h, cap)?) {
                pool.push(h);
            }
        }
    }
    let mut frontier = pool.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for x in &fpf {
                if h.contains(x) {
                    continue;
                }
                let mut gens = h.generators().to_vec();
                gens.push(x.clone());
                let j = PermGroup::new(n, gens)?;
                if j.order() > n as u128 || !semiregular(&j)? {
                    continue;
                }
                if seen.insert(sorted_key(&j, cap)?) {
                    next.push(j.clone());
                    pool.push(j);
                }
            }
        }
        frontier = next;
    }
    Ok(pool.into_iter().filter(|h| h.order() == n as u128).collect())
}

/// Partitions `subgroups` into classes of `a`-conjugacy by testing every
/// element of `a` on every pair.
pub fn conjugacy_classes_of(a: &PermGroup, subgroups: &[PermGroup], cap: u128) -> Result<Vec<Vec<usize>>> {
    let elems = a.enumerate_elements(cap)?;
    let keys: Vec<Vec<Permutation>> = subgroups.iter().map(|h| sorted_key(h, cap)).collect::<Result<_>>()?;
    let index: HashMap<&Vec<Permutation>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut class = vec![usize::MAX; subgroups.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subgroups.len() {
        if class[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![i];
        class[i] = id;
        for c in &elems {
            let mut conj: Vec<Permutation> = keys[i].iter().map(|x| x.conjugate_by(c)).collect();
            conj.sort();
            if let Some(&j) = index.get(&conj) {
                if class[j] == usize::MAX {
                    class[j] = id;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(classes)
}

fn trial_factor(mut m: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Smallest prime dividing `aᵏ − 1` but no `aⁱ − 1` with `i < k`, by
/// factoring `aᵏ − 1` directly.
pub fn primitive_prime_divisor(a: u64, k: u32) -> Option<u128> {
    let a = a as u128;
    let big = a.pow(k) - 1;
    trial_factor(big)
        .into_iter()
        .find(|&p| (1..k).all(|i| (a.pow(i) - 1) % p != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(all_permutations(4).unwrap().len(), 24);
        assert_eq!(all_permutations(0).unwrap().len(), 1);
        assert!(all_permutations(9).is_err());
    }

    #[test]
    fn partition_counts() {
        // 6 points: pairs 15, triples 10
        assert_eq!(equal_partitions(6, 2).len(), 15);
        assert_eq!(equal_partitions(6, 3).len(), 10);
        assert_eq!(equal_partitions(8, 4).len(), 35);
        assert_eq!(equal_partitions(5, 1).len(), 1);
    }

    #[test]
    fn closure_of_cyclic() {
        assert_eq!(k_closure_order(&PermGroup::cyclic(5), 1).unwrap(), 120);
        assert_eq!(k_closure_order(&PermGroup::cyclic(5), 2).unwrap(), 5);
        assert_eq!(k_closure_order(&PermGroup::alternating(4), 2).unwrap(), 24);
    }

    #[test]
    fn ppd() {
        assert_eq!(primitive_prime_divisor(2, 6), None);
        assert_eq!(primitive_prime_divisor(2, 4), Some(5));
        assert_eq!(primitive_prime_divisor(3, 2), None);
    }

    #[test]
    fn regular_in_s4() {
        let s4 = PermGroup::symmetric(4);
        let regs = regular_subgroups(&s4, 100).unwrap();
        // three cyclic, one Klein
        assert_eq!(regs.len(), 4);
        let classes = conjugacy_classes_of(&s4, &regs, 100).unwrap();
        assert_eq!(classes.len(), 2);
    }
}
