//! Socle factors of a block kernel and semiregular subgroups of prime order.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::blocks::BlockSystem;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::zoo::numtheory::is_prime;

fn is_nonabelian_simple(g: &PermGroup, cap: u128) -> Result<bool> {
    if g.is_trivial() {
        return Ok(false);
    }
    let abelian = g
        .generators()
        .iter()
        .all(|a| g.generators().iter().all(|b| a.compose(b).ok() == b.compose(a).ok()));
    if abelian {
        return Ok(false);
    }
    let minimal = g.minimal_normal_subgroups(cap)?;
    Ok(minimal.len() == 1 && minimal[0].order() == g.order())
}

/// Supports of the simple direct factors of `soc(N)`, where `N` fixes
/// every block of `sys` and its socle acts on each block as a transitive
/// nonabelian simple group. The supports partition the points and are
/// unions of blocks.
pub fn support_decomposition(n: &PermGroup, sys: &BlockSystem, cap: u128) -> Result<Vec<Vec<usize>>> {
    if sys.degree() != n.degree() {
        return Err(Error::DegreeMismatch {
            expected: n.degree(),
            found: sys.degree(),
        });
    }
    let idx = sys.cell_index();
    if n.generators().iter().any(|g| (0..n.degree()).any(|x| idx[g.apply(x)] != idx[x])) {
        return Err(Error::Precondition("N does not fix every block".into()));
    }
    let soc = n.socle(cap)?;
    for b in sys.blocks() {
        let on_block = soc.restrict_to(b)?;
        if !on_block.is_transitive() {
            return Err(Error::Precondition("socle is intransitive on a block".into()));
        }
        if !is_nonabelian_simple(&on_block, cap)? {
            return Err(Error::Precondition("socle is not nonabelian simple on a block".into()));
        }
    }
    let mut cells: Vec<Vec<usize>> = soc
        .minimal_normal_subgroups(cap)?
        .iter()
        .map(|t| t.support())
        .collect();
    cells.sort();
    let mut covered = vec![false; n.degree()];
    for c in &cells {
        for &x in c {
            if covered[x] {
                return Err(Error::Precondition("factor supports overlap".into()));
            }
            covered[x] = true;
        }
        if c.iter().any(|&x| sys.blocks()[idx[x]].iter().any(|y| c.binary_search(y).is_err())) {
            return Err(Error::Precondition("a factor support splits a block".into()));
        }
    }
    if covered.iter().any(|&c| !c) {
        return Err(Error::Precondition("factor supports do not cover the points".into()));
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiregularClasses {
    pub p: u64,
    /// Fixed-point-free subgroups of order `p`.
    pub subgroups: usize,
    pub classes: usize,
    /// Class sizes in discovery order.
    pub class_sizes: Vec<usize>,
    /// Cycle type of a generator of each class.
    pub cycle_types: Vec<Vec<usize>>,
}

/// Counts `T`-conjugacy classes of semiregular subgroups of prime order
/// `p`, by enumerating them and taking orbits under conjugation by the
/// generators of `T`.
pub fn semiregular_classes(t: &PermGroup, p: u64, cap: u128) -> Result<SemiregularClasses> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let key = |x: &Permutation| -> Vec<Permutation> {
        let mut k: Vec<Permutation> = (1..p).map(|i| x.pow(i)).collect();
        k.sort();
        k
    };
    let mut subgroups: Vec<Permutation> = Vec::new();
    let mut index: HashMap<Vec<Permutation>, usize> = HashMap::new();
    for x in t.enumerate_elements(cap)? {
        if x.order() == p && x.fixed_points() == 0 {
            let k = key(&x);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(k) {
                e.insert(subgroups.len());
                subgroups.push(x);
            }
        }
    }
    let mut seen = HashSet::new();
    let mut class_sizes = Vec::new();
    let mut cycle_types = Vec::new();
    for start in 0..subgroups.len() {
        if !seen.insert(start) {
            continue;
        }
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(i) = stack.pop() {
            size += 1;
            for g in t.generators() {
                let j = index[&key(&subgroups[i].conjugate_by(g))];
                if seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        class_sizes.push(size);
        cycle_types.push(subgroups[start].cycle_type());
    }
    Ok(SemiregularClasses {
        p,
        subgroups: subgroups.len(),
        classes: class_sizes.len(),
        class_sizes,
        cycle_types,
    })
}
