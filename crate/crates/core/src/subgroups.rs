//! Subgroup computations that filter an enumerated element list. All of them
//! fail with [`Error::CapExceeded`] above the given cap.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u128, p: u128) -> u128 {
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

impl PermGroup {
    pub fn centralizer(&self, h: &PermGroup, cap: u128) -> Result<PermGroup> {
        let elems = self.enumerate_elements(cap)?;
        let hs = h.generators();
        let keep: Vec<Permutation> = elems
            .into_iter()
            .filter(|g| hs.iter().all(|x| g.then_unchecked(x) == x.then_unchecked(g)))
            .collect();
        PermGroup::from_elements(self.degree(), &keep)
    }

    /// Does `g` normalize `h`?
    pub fn normalizes(h: &PermGroup, g: &Permutation) -> bool {
        h.generators().iter().all(|x| h.contains(&x.conjugate_by(g)))
    }

    pub fn normalizer(&self, h: &PermGroup, cap: u128) -> Result<PermGroup> {
        let elems = self.enumerate_elements(cap)?;
        let keep: Vec<Permutation> = elems
            .into_iter()
            .filter(|g| PermGroup::normalizes(h, g))
            .collect();
        PermGroup::from_elements(self.degree(), &keep)
    }

    /// Conjugacy class representatives (first element of each class in
    /// enumeration order) with class sizes.
    pub fn conjugacy_classes(&self, cap: u128) -> Result<Vec<(Permutation, usize)>> {
        let elems = self.enumerate_elements(cap)?;
        let index: HashMap<&Permutation, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut seen = vec![false; elems.len()];
        let mut out = Vec::new();
        for i in 0..elems.len() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            let mut queue = vec![i];
            let mut k = 0;
            while k < queue.len() {
                let e = &elems[queue[k]];
                for g in self.generators() {
                    let j = index[&e.conjugate_by(g)];
                    if !seen[j] {
                        seen[j] = true;
                        queue.push(j);
                    }
                }
                k += 1;
            }
            out.push((elems[i].clone(), queue.len()));
        }
        Ok(out)
    }

    /// Minimal normal subgroups, ordered by increasing order.
    ///
    /// Every minimal normal subgroup is the normal closure of any of its
    /// non-identity elements, so it suffices to scan closures of class
    /// representatives and keep the inclusion-minimal ones.
    pub fn minimal_normal_subgroups(&self, cap: u128) -> Result<Vec<PermGroup>> {
        let classes = self.conjugacy_classes(cap)?;
        let mut closures: Vec<PermGroup> = Vec::new();
        for (rep, _) in classes.into_iter().filter(|(r, _)| !r.is_identity()) {
            let n = self.normal_closure(std::slice::from_ref(&rep))?;
            if !closures.contains(&n) {
                closures.push(n);
            }
        }
        let mut minimal: Vec<PermGroup> = closures
            .iter()
            .filter(|n| {
                !closures
                    .iter()
                    .any(|m| m.order() < n.order() && m.is_subgroup_of(n))
            })
            .cloned()
            .collect();
        minimal.sort_by_key(|n| n.order());
        Ok(minimal)
    }

    /// Subgroup generated by all minimal normal subgroups.
    pub fn socle(&self, cap: u128) -> Result<PermGroup> {
        let mut gens = Vec::new();
        for m in self.minimal_normal_subgroups(cap)? {
            gens.extend(m.generators().iter().cloned());
        }
        PermGroup::new(self.degree(), gens)
    }

    pub fn sylow_subgroup(&self, p: u64, cap: u128) -> Result<PermGroup> {
        self.sylow_containing(&PermGroup::trivial(self.degree()), p, cap)
    }

    /// A Sylow `p`-subgroup containing the `p`-subgroup `q`.
    ///
    /// Grows `q` one factor of `p` at a time: while `P` is not Sylow, some
    /// `g ∈ N(P) \ P` has `gᵖ ∈ P`, and `⟨P, g⟩` has order `p·|P|`.
    pub fn sylow_containing(&self, q: &PermGroup, p: u64, cap: u128) -> Result<PermGroup> {
        let order = self.order();
        let p128 = p as u128;
        if p < 2 || !order.is_multiple_of(p128) {
            return Err(Error::Precondition(format!("{p} does not divide the group order {order}")));
        }
        if !q.is_subgroup_of(self) {
            return Err(Error::NotSubgroup);
        }
        if p_part(q.order(), p128) != q.order() {
            return Err(Error::Precondition("seed is not a p-group".into()));
        }
        let target = p_part(order, p128);
        let elems = self.enumerate_elements(cap)?;
        let mut current = q.clone();
        while current.order() < target {
            let g = elems
                .iter()
                .find(|g| {
                    !current.contains(g)
                        && current.contains(&g.pow(p))
                        && PermGroup::normalizes(&current, g)
                })
                .ok_or_else(|| Error::Precondition("no p-element extends the subgroup".into()))?
                .clone();
            let mut gens = current.generators().to_vec();
            gens.push(g);
            current = PermGroup::new(self.degree(), gens)?;
        }
        Ok(current)
    }

    /// Does `g` conjugate `a` onto `b` (`a^g = b`)?
    pub fn conjugates_onto(a: &PermGroup, b: &PermGroup, g: &Permutation) -> bool {
        a.order() == b.order() && a.generators().iter().all(|x| b.contains(&x.conjugate_by(g)))
    }
}
