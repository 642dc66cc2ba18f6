//! Abstract finite groups as multiplication tables, with an isomorphism test.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Largest order for which a full table is built.
pub const MAX_TABLE_ORDER: usize = 2048;

/// A group on labels `0..order` with `mul(a, b) = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
}

/// Cheap isomorphism invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: usize,
    pub order_histogram: BTreeMap<usize, usize>,
    pub center_size: usize,
    pub derived_size: usize,
}

impl CayleyTable {
    /// Tabulates `f`, which must be a group law on `0..order`.
    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> usize) -> Result<CayleyTable> {
        if order == 0 {
            return Err(Error::InvalidSpec("empty group".into()));
        }
        if order > MAX_TABLE_ORDER {
            return Err(Error::CapExceeded {
                order: order as u128,
                cap: MAX_TABLE_ORDER as u128,
            });
        }
        let mut mul = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mul.push(f(a, b) as u32);
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] as usize == x))
            .ok_or_else(|| Error::InvalidSpec("no identity".into()))?;
        let mut inv = vec![0u32; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] as usize == identity)
                .ok_or_else(|| Error::InvalidSpec("element without inverse".into()))?;
            inv[a] = b as u32;
        }
        Ok(CayleyTable {
            order,
            mul,
            inv,
            identity,
        })
    }

    /// The abstract group of a permutation group, labelled in enumeration order.
    pub fn from_perm_group(g: &PermGroup, cap: u128) -> Result<CayleyTable> {
        let elems = g.enumerate_elements(cap.min(MAX_TABLE_ORDER as u128))?;
        Self::from_elements(&elems)
    }

    pub(crate) fn from_elements(elems: &[Permutation]) -> Result<CayleyTable> {
        let index: HashMap<&Permutation, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        CayleyTable::from_fn(elems.len(), |a, b| index[&elems[a].then_unchecked(&elems[b])])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.order).map(|a| self.element_order(a)).collect()
    }

    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for o in self.element_orders() {
            *h.entry(o).or_insert(0) += 1;
        }
        h
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order).filter(|&a| self.is_central(a)).collect()
    }

    /// Sorted elements of `⟨gens⟩`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Is the set closed under multiplication (hence a subgroup)?
    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in set {
            member[x] = true;
        }
        !set.is_empty() && set.iter().all(|&a| set.iter().all(|&b| member[self.mul(a, b)]))
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.order];
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(self.mul(self.inverse(a), self.inverse(b)), self.mul(a, b));
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.subgroup_generated(&comms)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint {
            order: self.order,
            order_histogram: self.order_histogram(),
            center_size: self.center().len(),
            derived_size: self.derived_subgroup().len(),
        }
    }

    /// A small generating set: repeatedly adds the highest-order element
    /// outside the current subgroup.
    pub fn generators(&self) -> Vec<usize> {
        let orders = self.element_orders();
        let mut by_order: Vec<usize> = (0..self.order).collect();
        by_order.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));
        let mut gens = Vec::new();
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        for a in by_order {
            if !member[a] {
                gens.push(a);
                for x in self.subgroup_generated(&gens) {
                    member[x] = true;
                }
            }
        }
        gens
    }

    pub fn is_isomorphic(&self, other: &CayleyTable) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// An isomorphism `self → other` as a label map, found by backtracking
    /// over images of a generating set.
    pub fn find_isomorphism(&self, other: &CayleyTable) -> Option<Vec<usize>> {
        if self.fingerprint() != other.fingerprint() {
            return None;
        }
        let gens = self.generators();
        let other_orders = other.element_orders();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let o = self.element_order(g);
                (0..other.order).filter(|&h| other_orders[h] == o).collect()
            })
            .collect();
        let mut map: Vec<Option<usize>> = vec![None; self.order];
        let mut used = vec![false; other.order];
        map[self.identity] = Some(other.identity);
        used[other.identity] = true;
        let mut images = Vec::new();
        if self.extend_iso(other, &gens, &candidates, &mut images, &mut map, &mut used) {
            Some(map.into_iter().map(|x| x.expect("total map")).collect())
        } else {
            None
        }
    }

    fn extend_iso(
        &self,
        other: &CayleyTable,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let depth = images.len();
        if depth == gens.len() {
            return true;
        }
        for &h in &candidates[depth] {
            images.push(h);
            let mut added = Vec::new();
            if self.close_map(other, &gens[..=depth], images, map, used, &mut added)
                && self.extend_iso(other, gens, candidates, images, map, used)
            {
                return true;
            }
            for x in added {
                used[map[x].take().expect("assigned")] = false;
            }
            images.pop();
        }
        false
    }

    /// Extends `map` over `⟨gens⟩` by `φ(x·g) = φ(x)·φ(g)`; false on conflict.
    fn close_map(
        &self,
        other: &CayleyTable,
        gens: &[usize],
        images: &[usize],
        map: &mut [Option<usize>],
        used: &mut [bool],
        added: &mut Vec<usize>,
    ) -> bool {
        let mut queue: Vec<usize> = (0..self.order).filter(|&x| map[x].is_some()).collect();
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            let fx = map[x].expect("queued elements are mapped");
            for (&g, &fg) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = other.mul(fx, fg);
                match map[y] {
                    Some(v) if v != fy => return false,
                    Some(_) => {}
                    None => {
                        if used[fy] {
                            return false;
                        }
                        map[y] = Some(fy);
                        used[fy] = true;
                        added.push(y);
                        queue.push(y);
                    }
                }
            }
            i += 1;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> CayleyTable {
        CayleyTable::from_fn(n, |a, b| (a + b) % n).unwrap()
    }

    fn klein() -> CayleyTable {
        CayleyTable::from_fn(4, |a, b| a ^ b).unwrap()
    }

    #[test]
    fn basic_invariants() {
        let z6 = cyclic(6);
        assert_eq!(z6.identity(), 0);
        assert_eq!(z6.inverse(2), 4);
        assert_eq!(z6.element_order(2), 3);
        assert!(z6.is_abelian());
        assert_eq!(z6.derived_subgroup(), vec![0]);
        assert_eq!(z6.subgroup_generated(&[3]), vec![0, 3]);
        assert!(z6.is_subgroup(&[0, 2, 4]) && !z6.is_subgroup(&[0, 1]));
    }

    #[test]
    fn isomorphisms() {
        assert!(!cyclic(4).is_isomorphic(&klein()));
        // labels 1 and 2 swapped; σ is an involution
        let s = [0, 2, 1, 3];
        let relabelled = CayleyTable::from_fn(4, |a, b| s[(s[a] + s[b]) % 4]).unwrap();
        assert!(cyclic(4).is_isomorphic(&relabelled));
        let z6 = cyclic(6);
        let z2z3 = CayleyTable::from_fn(6, |a, b| ((a / 3 + b / 3) % 2) * 3 + (a % 3 + b % 3) % 3).unwrap();
        let iso = z6.find_isomorphism(&z2z3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(iso[z6.mul(a, b)], z2z3.mul(iso[a], iso[b]));
            }
        }
    }

    #[test]
    fn from_permutations() {
        let s3 = PermGroup::symmetric(3);
        let t = CayleyTable::from_perm_group(&s3, 100).unwrap();
        assert_eq!(t.order(), 6);
        assert!(!t.is_abelian());
        assert_eq!(t.center().len(), 1);
        assert_eq!(t.derived_subgroup().len(), 3);
        assert!(!t.is_isomorphic(&cyclic(6)));
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            CayleyTable::from_fn(MAX_TABLE_ORDER + 1, |a, _| a),
            Err(Error::CapExceeded { .. })
        ));
    }
}
