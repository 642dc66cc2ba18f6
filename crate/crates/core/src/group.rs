//! Permutation groups given by generators, backed by a stabilizer chain.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default limit on the number of elements any enumerative routine may list.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// Transitivity data reported by [`PermGroup::transitivity_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityProfile {
    pub transitive: bool,
    pub semiregular: bool,
    pub regular: bool,
}

/// A permutation group on `0..degree`.
///
/// Generators are sorted lexicographically by image sequence and
/// deduplicated; the chain uses the smallest moved point first, so equal
/// generating sets give identical chains and element orders.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: Arc<StabChain>,
}

/// JSON form: `{ "degree": n, "generators": [[...], ...] }`.
#[derive(Serialize, Deserialize)]
struct PermGroupRepr {
    degree: usize,
    generators: Vec<Permutation>,
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermGroupRepr {
            degree: self.degree,
            generators: self.generators.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PermGroupRepr::deserialize(d)?;
        PermGroup::new(repr.degree, repr.generators).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, gens [", self.degree, self.order())?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

/// Equality as sets of permutations.
impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && other.generators.iter().all(|g| self.contains(g))
    }
}

impl Eq for PermGroup {}

fn canonical_generators(gens: Vec<Permutation>) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = gens.into_iter().filter(|g| !g.is_identity()).collect();
    gens.sort();
    gens.dedup();
    gens
}

impl PermGroup {
    /// The group generated by `gens` on `degree` points.
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<PermGroup> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let generators = canonical_generators(gens);
        let chain = StabChain::build(degree, &generators, &[]);
        Ok(PermGroup {
            degree,
            generators,
            chain: Arc::new(chain),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new()).expect("trivial group")
    }

    pub fn symmetric(degree: usize) -> PermGroup {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]]).unwrap());
            let cycle: Vec<usize> = (0..degree).collect();
            gens.push(Permutation::from_cycles(degree, &[&cycle]).unwrap());
        }
        PermGroup::new(degree, gens).unwrap()
    }

    pub fn alternating(degree: usize) -> PermGroup {
        let gens = (2..degree)
            .map(|k| Permutation::from_cycles(degree, &[&[0, 1, k]]).unwrap())
            .collect();
        PermGroup::new(degree, gens).unwrap()
    }

    /// Regular cyclic group generated by `x ↦ x + 1 mod n`.
    pub fn cyclic(n: usize) -> PermGroup {
        let images: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        PermGroup::new(n, vec![Permutation::from_images(images).unwrap()]).unwrap()
    }

    /// Builds from group elements, keeping only those needed to generate.
    pub fn from_elements(degree: usize, elements: &[Permutation]) -> Result<PermGroup> {
        let mut group = PermGroup::trivial(degree);
        for e in elements {
            if !group.contains(e) {
                let mut gens = group.generators.clone();
                gens.push(e.clone());
                group = PermGroup::new(degree, gens)?;
            }
        }
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain.contains(p)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Orbits sorted by minimal element, each orbit sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            let y = out[i];
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Semiregular iff every point stabilizer is trivial, i.e. the order
    /// equals every orbit length.
    pub fn transitivity_profile(&self) -> TransitivityProfile {
        let orbits = self.orbits();
        let transitive = orbits.len() <= 1;
        let order = self.order();
        let semiregular = orbits.iter().all(|o| o.len() as u128 == order);
        TransitivityProfile {
            transitive,
            semiregular,
            regular: transitive && semiregular,
        }
    }

    /// Points moved by some generator.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree)
            .filter(|&x| self.generators.iter().any(|g| g.apply(x) != x))
            .collect()
    }

    /// Every element exactly once, in chain-transversal order.
    pub fn enumerate_elements(&self, cap: u128) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > cap {
            return Err(Error::CapExceeded { order, cap });
        }
        Ok(self.chain.elements())
    }

    /// First element in enumeration order satisfying `pred`, without
    /// materializing the group.
    pub fn find_element(&self, cap: u128, mut pred: impl FnMut(&Permutation) -> bool) -> Result<Option<Permutation>> {
        let order = self.order();
        if order > cap {
            return Err(Error::CapExceeded { order, cap });
        }
        Ok(self.chain.find(&mut pred))
    }

    pub fn element_set(&self, cap: u128) -> Result<HashSet<Permutation>> {
        Ok(self.enumerate_elements(cap)?.into_iter().collect())
    }

    /// `Hᶜ = { c⁻¹ h c }`.
    pub fn conjugate(&self, c: &Permutation) -> Result<PermGroup> {
        if c.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: c.degree(),
            });
        }
        let gens = self.generators.iter().map(|g| g.conjugate_by(c)).collect();
        PermGroup::new(self.degree, gens)
    }

    /// The group generated by both generating sets.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        PermGroup::new(self.degree, gens)
    }

    /// Chain with a forced base prefix, for stabilizer extraction.
    pub(crate) fn chain_with_prefix(&self, prefix: &[usize]) -> StabChain {
        StabChain::build(self.degree, &self.generators, prefix)
    }

    /// Pointwise stabilizer of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let chain = self.chain_with_prefix(points);
        PermGroup::new(self.degree, chain.stabilizer_gens(points.len())).expect("same degree")
    }

    /// Restriction of a group to an invariant set, relabelled in increasing
    /// order of the original points.
    pub fn restrict_to(&self, set: &[usize]) -> Result<PermGroup> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let mut index = vec![usize::MAX; self.degree];
        for (i, &x) in sorted.iter().enumerate() {
            index[x] = i;
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            let mut images = Vec::with_capacity(sorted.len());
            for &x in &sorted {
                let y = index[g.apply(x)];
                if y == usize::MAX {
                    return Err(Error::Precondition("set is not invariant".into()));
                }
                images.push(y);
            }
            gens.push(Permutation::from_images(images)?);
        }
        PermGroup::new(sorted.len(), gens)
    }

    /// `N ⊴ G` test on generators; errors when `N ⊄ G`.
    pub fn is_normal_in(&self, g: &PermGroup) -> Result<bool> {
        if !self.is_subgroup_of(g) {
            return Err(Error::NotSubgroup);
        }
        Ok(g.generators
            .iter()
            .all(|x| self.generators.iter().all(|n| self.contains(&n.conjugate_by(x)))))
    }

    /// Smallest normal subgroup of `self` containing `s`.
    pub fn normal_closure(&self, s: &[Permutation]) -> Result<PermGroup> {
        for x in s {
            if !self.contains(x) {
                return Err(Error::NotSubgroup);
            }
        }
        let mut n = PermGroup::new(self.degree, s.to_vec())?;
        loop {
            let mut extra = Vec::new();
            for h in n.generators() {
                for g in &self.generators {
                    let c = h.conjugate_by(g);
                    if !n.contains(&c) && !extra.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return Ok(n);
            }
            let mut gens = n.generators.clone();
            gens.extend(extra);
            n = PermGroup::new(self.degree, gens)?;
        }
    }
}

pub(crate) fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for g in gens {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    orbit.push(z);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// A group acting on `0..n` together with its induced action on `m` cells,
/// realized as one group on `n + m` points (cell `j` is point `n + j`).
pub(crate) struct CombinedAction {
    pub n: usize,
    pub m: usize,
    pub group: PermGroup,
}

impl CombinedAction {
    pub fn new(g: &PermGroup, cells: &[Vec<usize>]) -> Result<CombinedAction> {
        let n = g.degree();
        let m = cells.len();
        let mut cell_of = vec![usize::MAX; n];
        for (j, c) in cells.iter().enumerate() {
            for &x in c {
                cell_of[x] = j;
            }
        }
        let mut gens = Vec::new();
        for h in g.generators() {
            gens.push(Self::lift_perm(h, cells, &cell_of)?);
        }
        Ok(CombinedAction {
            n,
            m,
            group: PermGroup::new(n + m, gens)?,
        })
    }

    fn lift_perm(h: &Permutation, cells: &[Vec<usize>], cell_of: &[usize]) -> Result<Permutation> {
        let n = h.degree();
        let mut images: Vec<usize> = (0..n).map(|x| h.apply(x)).collect();
        for c in cells {
            let target = cell_of[h.apply(c[0])];
            if c.iter().any(|&x| cell_of[h.apply(x)] != target) {
                return Err(Error::NotBlockSystem);
            }
            images.push(n + target);
        }
        Permutation::from_images(images)
    }

    pub fn restrict_points(&self, p: &Permutation) -> Permutation {
        Permutation::from_images((0..self.n).map(|x| p.apply(x)).collect()).expect("invariant")
    }

    pub fn restrict_cells(&self, p: &Permutation) -> Permutation {
        Permutation::from_images((0..self.m).map(|j| p.apply(self.n + j) - self.n).collect())
            .expect("invariant")
    }

    /// Kernel of the action on cells.
    pub fn kernel(&self) -> PermGroup {
        let prefix: Vec<usize> = (self.n..self.n + self.m).collect();
        let chain = self.group.chain_with_prefix(&prefix);
        let gens = chain
            .stabilizer_gens(self.m)
            .iter()
            .map(|p| self.restrict_points(p))
            .collect();
        PermGroup::new(self.n, gens).expect("kernel")
    }

    /// Setwise stabilizer of cell `j`.
    pub fn cell_stabilizer(&self, j: usize) -> PermGroup {
        let chain = self.group.chain_with_prefix(&[self.n + j]);
        let gens = chain
            .stabilizer_gens(1)
            .iter()
            .map(|p| self.restrict_points(p))
            .collect();
        PermGroup::new(self.n, gens).expect("stabilizer")
    }

    /// Some `g` in the group whose action on cells is `target`.
    pub fn preimage(&self, target: &Permutation) -> Option<Permutation> {
        let prefix: Vec<usize> = (self.n..self.n + self.m).collect();
        let chain = self.group.chain_with_prefix(&prefix);
        // residual acts on cells only
        let mut residual = target.clone();
        let mut word = Permutation::identity(self.n + self.m);
        for level in chain.levels.iter().take(self.m) {
            let j = level.base - self.n;
            let y = self.n + residual.apply(j);
            let u = level.rep(y)?;
            word = word.then_unchecked(u);
            let u_inv_cells = self.restrict_cells(&u.inverse());
            residual = u_inv_cells.then_unchecked(&residual);
        }
        if !residual.is_identity() {
            return None;
        }
        Some(self.restrict_points(&word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn s4() -> PermGroup {
        PermGroup::new(4, vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])]).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(s4().order(), 24);
        assert_eq!(PermGroup::cyclic(7).order(), 7);
        assert_eq!(PermGroup::symmetric(7).order(), 5040);
        assert_eq!(PermGroup::alternating(6).order(), 360);
        assert_eq!(PermGroup::symmetric(10).order(), 3_628_800);
        assert_eq!(PermGroup::trivial(5).order(), 1);
    }

    #[test]
    fn membership() {
        let c7 = PermGroup::cyclic(7);
        assert!(!c7.contains(&cyc(7, &[&[0, 1]])));
        for g in c7.generators() {
            assert!(c7.contains(g));
        }
        let g = s4();
        for x in g.generators() {
            assert!(g.contains(x));
        }
    }

    #[test]
    fn orbits_and_profiles() {
        let g = PermGroup::new(4, vec![cyc(4, &[&[0, 1], &[2, 3]])]).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2, 3]]);
        let p = g.transitivity_profile();
        assert!(p.semiregular && !p.transitive && !p.regular);
        let p = s4().transitivity_profile();
        assert!(p.transitive && !p.semiregular);
        assert!(PermGroup::cyclic(9).transitivity_profile().regular);
    }

    #[test]
    fn enumeration() {
        assert_eq!(PermGroup::trivial(3).enumerate_elements(10).unwrap(), vec![Permutation::identity(3)]);
        assert_eq!(PermGroup::cyclic(3).enumerate_elements(10).unwrap().len(), 3);
        let elems = s4().enumerate_elements(100).unwrap();
        let set: HashSet<_> = elems.iter().cloned().collect();
        assert_eq!(set.len(), 24);
        assert!(matches!(s4().enumerate_elements(10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn lazy_search() {
        let t = cyc(4, &[&[1, 3]]);
        assert_eq!(s4().find_element(100, |p| *p == t).unwrap(), Some(t));
        assert_eq!(PermGroup::cyclic(4).find_element(100, |p| p.apply(0) == 0 && !p.is_identity()).unwrap(), None);
        assert!(s4().find_element(10, |_| true).is_err());
    }

    #[test]
    fn support_cases() {
        let g = PermGroup::new(5, vec![cyc(5, &[&[0, 1]])]).unwrap();
        assert_eq!(g.support(), vec![0, 1]);
        assert!(PermGroup::trivial(5).support().is_empty());
        assert_eq!(s4().support(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn normality() {
        let v4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])]).unwrap();
        assert!(v4.is_normal_in(&s4()).unwrap());
        let s3 = PermGroup::symmetric(3);
        let t = PermGroup::new(3, vec![cyc(3, &[&[0, 1]])]).unwrap();
        assert!(!t.is_normal_in(&s3).unwrap());
        let c4 = PermGroup::cyclic(4);
        assert_eq!(t.is_normal_in(&PermGroup::cyclic(3)), Err(Error::NotSubgroup));
        assert!(PermGroup::trivial(4).is_normal_in(&c4).unwrap());
    }

    #[test]
    fn conjugate_by_identity() {
        let g = s4();
        let h = g.conjugate(&Permutation::identity(4)).unwrap();
        assert_eq!(h.generators(), g.generators());
    }

    #[test]
    fn normal_closure_of_transposition_is_s4() {
        let g = s4();
        let n = g.normal_closure(&[cyc(4, &[&[0, 1]])]).unwrap();
        assert_eq!(n.order(), 24);
        let n = g.normal_closure(&[cyc(4, &[&[0, 1], &[2, 3]])]).unwrap();
        assert_eq!(n.order(), 4);
    }

    #[test]
    fn combined_action_kernel_and_preimage() {
        // D8 on blocks {0,2},{1,3}
        let d8 = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 2]])]).unwrap();
        let cells = vec![vec![0, 2], vec![1, 3]];
        let act = CombinedAction::new(&d8, &cells).unwrap();
        assert_eq!(act.kernel().order(), 4);
        let swap = cyc(2, &[&[0, 1]]);
        let pre = act.preimage(&swap).unwrap();
        assert!(d8.contains(&pre));
        assert_eq!(pre.image_of_set(&[0, 2]), vec![1, 3]);
        assert_eq!(act.cell_stabilizer(0).order(), 4);
    }

    #[test]
    fn json_round_trip() {
        let g = s4();
        let s = serde_json::to_string(&g).unwrap();
        let h: PermGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
        assert!(serde_json::from_str::<PermGroup>(r#"{"degree":3,"generators":[[0,1]]}"#).is_err());
    }
}
