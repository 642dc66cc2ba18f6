//! Block systems, block actions and imprimitivity towers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CombinedAction, PermGroup};
use crate::perm::Permutation;

/// A partition of `0..degree` into equal-size cells, each cell sorted and
/// cells ordered by minimal element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BlockSystemRepr", into = "BlockSystemRepr")]
pub struct BlockSystem {
    degree: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct BlockSystemRepr {
    degree: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<BlockSystemRepr> for BlockSystem {
    type Error = Error;
    fn try_from(r: BlockSystemRepr) -> Result<Self> {
        let sys = BlockSystem::new(r.blocks)?;
        if sys.degree != r.degree {
            return Err(Error::MalformedPartition("degree does not match cells".into()));
        }
        Ok(sys)
    }
}

impl From<BlockSystem> for BlockSystemRepr {
    fn from(b: BlockSystem) -> Self {
        BlockSystemRepr {
            degree: b.degree,
            blocks: b.blocks,
        }
    }
}

impl BlockSystem {
    /// Canonicalizes and validates a partition of `0..n` into equal cells.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<BlockSystem> {
        let degree: usize = blocks.iter().map(Vec::len).sum();
        if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
            return Err(Error::MalformedPartition("empty cell".into()));
        }
        let size = blocks[0].len();
        if blocks.iter().any(|b| b.len() != size) {
            return Err(Error::MalformedPartition("cells have unequal sizes".into()));
        }
        let mut seen = vec![false; degree];
        for b in &mut blocks {
            b.sort_unstable();
            for &x in b.iter() {
                if x >= degree || seen[x] {
                    return Err(Error::MalformedPartition("cells do not partition the points".into()));
                }
                seen[x] = true;
            }
        }
        blocks.sort();
        Ok(BlockSystem { degree, blocks })
    }

    pub fn singletons(n: usize) -> BlockSystem {
        BlockSystem {
            degree: n,
            blocks: (0..n).map(|x| vec![x]).collect(),
        }
    }

    pub fn one_block(n: usize) -> BlockSystem {
        BlockSystem {
            degree: n,
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.block_size() == 1 || self.num_blocks() == 1
    }

    /// Index of the cell containing each point.
    pub fn cell_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.degree];
        for (j, b) in self.blocks.iter().enumerate() {
            for &x in b {
                idx[x] = j;
            }
        }
        idx
    }

    /// Does `g` permute the cells?
    pub fn is_invariant_under(&self, g: &Permutation) -> bool {
        let idx = self.cell_index();
        self.blocks.iter().all(|b| {
            let t = idx[g.apply(b[0])];
            b.iter().all(|&x| idx[g.apply(x)] == t)
        })
    }

    pub fn is_block_system_of(&self, g: &PermGroup) -> bool {
        self.degree == g.degree() && g.generators().iter().all(|h| self.is_invariant_under(h))
    }

    /// `self ⪯ other`: every cell of `self` lies inside a cell of `other`.
    pub fn refines(&self, other: &BlockSystem) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let idx = other.cell_index();
        self.blocks.iter().all(|b| b.iter().all(|&x| idx[x] == idx[b[0]]))
    }

    /// `self ≺ other`.
    pub fn strictly_refines(&self, other: &BlockSystem) -> bool {
        self.refines(other) && self.block_size() < other.block_size()
    }

    /// `other / self`: the partition of `self`'s block indices induced by the
    /// coarser system `other`.
    pub fn quotient_of(&self, coarser: &BlockSystem) -> Result<BlockSystem> {
        if !self.refines(coarser) {
            return Err(Error::NotRefining);
        }
        let coarse_idx = coarser.cell_index();
        let mut cells = vec![Vec::new(); coarser.num_blocks()];
        for (j, b) in self.blocks.iter().enumerate() {
            cells[coarse_idx[b[0]]].push(j);
        }
        BlockSystem::new(cells)
    }

    /// Inverse of [`BlockSystem::quotient_of`]: expands a partition of this
    /// system's block indices into a partition of points.
    pub fn expand(&self, on_blocks: &BlockSystem) -> Result<BlockSystem> {
        if on_blocks.degree() != self.num_blocks() {
            return Err(Error::DegreeMismatch {
                expected: self.num_blocks(),
                found: on_blocks.degree(),
            });
        }
        let cells = on_blocks
            .blocks()
            .iter()
            .map(|c| c.iter().flat_map(|&j| self.blocks[j].iter().copied()).collect())
            .collect();
        BlockSystem::new(cells)
    }
}

/// `𝒞 / ℬ` on `ℬ`-indices.
pub fn quotient_system(coarser: &BlockSystem, finer: &BlockSystem) -> Result<BlockSystem> {
    finer.quotient_of(coarser)
}

pub fn refines(finer: &BlockSystem, coarser: &BlockSystem) -> bool {
    finer.refines(coarser)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

fn require_transitive(g: &PermGroup) -> Result<()> {
    if g.is_transitive() {
        Ok(())
    } else {
        Err(Error::NotTransitive)
    }
}

/// Smallest block system with all of `seed` in one block (union–find
/// closure over generator images of merged pairs).
pub fn minimal_block_containing_set(g: &PermGroup, seed: &[usize]) -> Result<BlockSystem> {
    require_transitive(g)?;
    let n = g.degree();
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for w in seed.windows(2) {
        if uf.union(w[0], w[1]) {
            queue.push((w[0], w[1]));
        }
    }
    while let Some((x, y)) = queue.pop() {
        for h in g.generators() {
            let (u, v) = (h.apply(x), h.apply(y));
            let (ru, rv) = (uf.find(u), uf.find(v));
            if ru != rv {
                uf.union(ru, rv);
                queue.push((ru, rv));
            }
        }
    }
    BlockSystem::new(uf.classes())
}

pub fn minimal_block_containing(g: &PermGroup, a: usize, b: usize) -> Result<BlockSystem> {
    if a == b {
        return Err(Error::Precondition("points must differ".into()));
    }
    minimal_block_containing_set(g, &[a, b])
}

/// All ⪯-minimal nontrivial block systems, sorted. Empty for primitive groups.
pub fn all_minimal_block_systems(g: &PermGroup) -> Result<Vec<BlockSystem>> {
    require_transitive(g)?;
    let n = g.degree();
    let mut candidates: Vec<BlockSystem> = Vec::new();
    for x in 1..n {
        let sys = minimal_block_containing(g, 0, x)?;
        if sys.num_blocks() > 1 && !candidates.contains(&sys) {
            candidates.push(sys);
        }
    }
    let mut minimal: Vec<BlockSystem> = candidates
        .iter()
        .filter(|s| !candidates.iter().any(|t| t.strictly_refines(s)))
        .cloned()
        .collect();
    minimal.sort();
    Ok(minimal)
}

/// Every block system, trivial ones included, as the join-closure of the
/// minimal blocks through point 0.
pub fn all_block_systems(g: &PermGroup) -> Result<Vec<BlockSystem>> {
    require_transitive(g)?;
    let n = g.degree();
    let block_of_zero = |s: &BlockSystem| s.blocks()[0].clone();
    let mut systems = vec![BlockSystem::singletons(n)];
    for x in 1..n {
        let s = minimal_block_containing(g, 0, x)?;
        if !systems.contains(&s) {
            systems.push(s);
        }
    }
    let mut i = 0;
    while i < systems.len() {
        for j in 0..i {
            let mut seed = block_of_zero(&systems[i]);
            seed.extend(block_of_zero(&systems[j]));
            seed.sort_unstable();
            seed.dedup();
            let joined = minimal_block_containing_set(g, &seed)?;
            if !systems.contains(&joined) {
                systems.push(joined);
            }
        }
        i += 1;
    }
    if n > 0 && !systems.contains(&BlockSystem::one_block(n)) {
        systems.push(BlockSystem::one_block(n));
    }
    systems.sort_by(|a, b| a.block_size().cmp(&b.block_size()).then(a.cmp(b)));
    Ok(systems)
}

fn require_invariant(g: &PermGroup, sys: &BlockSystem) -> Result<()> {
    if sys.is_block_system_of(g) {
        Ok(())
    } else {
        Err(Error::NotBlockSystem)
    }
}

/// Orbits of a normal subgroup as a block system.
pub fn orbit_block_system(g: &PermGroup, n: &PermGroup) -> Result<BlockSystem> {
    if !n.is_normal_in(g)? {
        return Err(Error::NotNormal);
    }
    BlockSystem::new(n.orbits())
}

/// `fix_G(ℬ)`, the kernel of the action on blocks. Uses element filtering
/// when `|G| ≤ cap` and the kernel of the combined action otherwise.
pub fn fix_blocks(g: &PermGroup, sys: &BlockSystem, cap: u128) -> Result<PermGroup> {
    require_invariant(g, sys)?;
    if g.order() <= cap {
        fix_blocks_by_filter(g, sys, cap)
    } else {
        fix_blocks_by_kernel(g, sys)
    }
}

pub fn fix_blocks_by_kernel(g: &PermGroup, sys: &BlockSystem) -> Result<PermGroup> {
    require_invariant(g, sys)?;
    Ok(CombinedAction::new(g, sys.blocks())?.kernel())
}

pub fn fix_blocks_by_filter(g: &PermGroup, sys: &BlockSystem, cap: u128) -> Result<PermGroup> {
    require_invariant(g, sys)?;
    let idx = sys.cell_index();
    let keep: Vec<Permutation> = g
        .enumerate_elements(cap)?
        .into_iter()
        .filter(|h| (0..g.degree()).all(|x| idx[h.apply(x)] == idx[x]))
        .collect();
    PermGroup::from_elements(g.degree(), &keep)
}

/// The homomorphism `g ↦ g^ℬ` onto the action on block indices.
pub struct BlockAction {
    sys: BlockSystem,
    cell: Vec<usize>,
    image: PermGroup,
}

impl BlockAction {
    pub fn image(&self) -> &PermGroup {
        &self.image
    }

    pub fn system(&self) -> &BlockSystem {
        &self.sys
    }

    /// `g^ℬ` for any `g` preserving the system.
    pub fn apply(&self, g: &Permutation) -> Result<Permutation> {
        if !self.sys.is_invariant_under(g) {
            return Err(Error::NotBlockSystem);
        }
        let images = self
            .sys
            .blocks()
            .iter()
            .map(|b| self.cell[g.apply(b[0])])
            .collect();
        Permutation::from_images(images)
    }
}

pub fn action_on_blocks(g: &PermGroup, sys: &BlockSystem) -> Result<BlockAction> {
    require_invariant(g, sys)?;
    let cell = sys.cell_index();
    let mut action = BlockAction {
        sys: sys.clone(),
        cell,
        image: PermGroup::trivial(sys.num_blocks()),
    };
    let gens = g
        .generators()
        .iter()
        .map(|h| action.apply(h))
        .collect::<Result<Vec<_>>>()?;
    action.image = PermGroup::new(sys.num_blocks(), gens)?;
    Ok(action)
}

/// `G_{B}^B`: the setwise stabilizer of the block acting on it, relabelled
/// `0..|B|` in increasing order.
pub fn block_restriction(g: &PermGroup, block: &[usize]) -> Result<PermGroup> {
    let mut b = block.to_vec();
    b.sort_unstable();
    b.dedup();
    if b.is_empty() {
        return Err(Error::NotABlock);
    }
    let sys = if b.len() == 1 {
        BlockSystem::singletons(g.degree())
    } else {
        minimal_block_containing_set(g, &b)?
    };
    let j = sys.blocks().iter().position(|c| *c == b).ok_or(Error::NotABlock)?;
    let act = CombinedAction::new(g, sys.blocks())?;
    act.cell_stabilizer(j).restrict_to(&b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockClassification {
    pub is_block_system: bool,
    pub is_normal: bool,
}

/// A block system is normal iff `fix_G(ℬ)` is transitive on every block.
pub fn classify_block_system(g: &PermGroup, partition: Vec<Vec<usize>>) -> Result<BlockClassification> {
    let sys = BlockSystem::new(partition)?;
    if sys.degree() != g.degree() {
        return Err(Error::MalformedPartition("partition degree differs from group degree".into()));
    }
    if !sys.is_block_system_of(g) {
        return Ok(BlockClassification {
            is_block_system: false,
            is_normal: false,
        });
    }
    Ok(BlockClassification {
        is_block_system: true,
        is_normal: is_normal_system(g, &sys)?,
    })
}

pub(crate) fn is_normal_system(g: &PermGroup, sys: &BlockSystem) -> Result<bool> {
    let kernel = fix_blocks_by_kernel(g, sys)?;
    let orbits = kernel.orbits();
    Ok(orbits.len() == sys.num_blocks() && sys.blocks().iter().all(|b| orbits.contains(b)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    /// `ℬ₀ ≺ ℬ₁ ≺ … ≺ ℬₘ`, each a block system of the group.
    pub m_step: bool,
    /// Additionally every system is normal.
    pub normal: bool,
    /// Starts at singletons and ends with one block.
    pub full: bool,
    /// `m`, the number of strict steps.
    pub steps: usize,
    /// Consecutive block-size ratios `|B_{i+1}| / |B_i|`.
    pub index_sequence: Vec<usize>,
    /// First index where the chain fails, with the reason.
    pub broken_at: Option<(usize, String)>,
}

pub fn verify_tower(g: &PermGroup, tower: &[BlockSystem]) -> Result<TowerReport> {
    let mut report = TowerReport {
        m_step: true,
        normal: true,
        full: false,
        steps: tower.len().saturating_sub(1),
        index_sequence: Vec::new(),
        broken_at: None,
    };
    let fail = |report: &mut TowerReport, i: usize, why: &str| {
        report.m_step = false;
        report.normal = false;
        if report.broken_at.is_none() {
            report.broken_at = Some((i, why.to_string()));
        }
    };
    for (i, sys) in tower.iter().enumerate() {
        if sys.degree() != g.degree() {
            return Err(Error::DegreeMismatch {
                expected: g.degree(),
                found: sys.degree(),
            });
        }
        if !sys.is_block_system_of(g) {
            fail(&mut report, i, "not a block system");
            continue;
        }
        if report.normal && !is_normal_system(g, sys)? {
            report.normal = false;
        }
        if i > 0 {
            let prev = &tower[i - 1];
            if !prev.strictly_refines(sys) {
                fail(&mut report, i, "not strictly refined by the previous system");
                continue;
            }
            report.index_sequence.push(sys.block_size() / prev.block_size());
        }
    }
    if let (Some(first), Some(last)) = (tower.first(), tower.last()) {
        report.full = first.block_size() == 1 && last.num_blocks() == 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn sys(cells: &[&[usize]]) -> BlockSystem {
        BlockSystem::new(cells.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn d8() -> PermGroup {
        PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 2]])]).unwrap()
    }

    #[test]
    fn minimal_blocks_of_z6() {
        let z6 = PermGroup::cyclic(6);
        assert_eq!(minimal_block_containing(&z6, 0, 3).unwrap(), sys(&[&[0, 3], &[1, 4], &[2, 5]]));
        assert_eq!(minimal_block_containing(&z6, 0, 2).unwrap(), sys(&[&[0, 2, 4], &[1, 3, 5]]));
        let s4 = PermGroup::symmetric(4);
        assert_eq!(minimal_block_containing(&s4, 0, 1).unwrap(), BlockSystem::one_block(4));
    }

    #[test]
    fn intransitive_rejected() {
        let g = PermGroup::new(4, vec![cyc(4, &[&[0, 1]])]).unwrap();
        assert_eq!(minimal_block_containing(&g, 0, 1), Err(Error::NotTransitive));
        assert_eq!(all_minimal_block_systems(&g), Err(Error::NotTransitive));
    }

    #[test]
    fn minimal_systems() {
        assert_eq!(all_minimal_block_systems(&PermGroup::cyclic(6)).unwrap().len(), 2);
        assert_eq!(
            all_minimal_block_systems(&PermGroup::cyclic(4)).unwrap(),
            vec![sys(&[&[0, 2], &[1, 3]])]
        );
        assert!(all_minimal_block_systems(&PermGroup::symmetric(4)).unwrap().is_empty());
    }

    #[test]
    fn orbit_systems() {
        let s4 = PermGroup::symmetric(4);
        let v4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])]).unwrap();
        assert_eq!(orbit_block_system(&s4, &v4).unwrap(), BlockSystem::one_block(4));
        let n = PermGroup::new(4, vec![cyc(4, &[&[0, 2], &[1, 3]])]).unwrap();
        assert_eq!(orbit_block_system(&d8(), &n).unwrap(), sys(&[&[0, 2], &[1, 3]]));
        let z6 = PermGroup::cyclic(6);
        let c3 = PermGroup::new(6, vec![z6.generators()[0].pow(2)]).unwrap();
        assert_eq!(orbit_block_system(&z6, &c3).unwrap().block_size(), 3);
        let t = PermGroup::new(4, vec![cyc(4, &[&[0, 1]])]).unwrap();
        assert_eq!(orbit_block_system(&s4, &t), Err(Error::NotNormal));
    }

    #[test]
    fn fix_of_d8() {
        let b = sys(&[&[0, 2], &[1, 3]]);
        let expected = PermGroup::new(4, vec![cyc(4, &[&[0, 2]]), cyc(4, &[&[1, 3]])]).unwrap();
        assert_eq!(fix_blocks_by_filter(&d8(), &b, 100).unwrap(), expected);
        assert_eq!(fix_blocks_by_kernel(&d8(), &b).unwrap(), expected);
        assert_eq!(fix_blocks(&d8(), &BlockSystem::singletons(4), 100).unwrap(), PermGroup::trivial(4));
        assert_eq!(fix_blocks(&d8(), &BlockSystem::one_block(4), 100).unwrap(), d8());
        assert_eq!(fix_blocks(&d8(), &sys(&[&[0, 1], &[2, 3]]), 100), Err(Error::NotBlockSystem));
    }

    #[test]
    fn block_actions() {
        let b = sys(&[&[0, 2], &[1, 3]]);
        assert_eq!(action_on_blocks(&d8(), &b).unwrap().image().order(), 2);
        let z6 = PermGroup::cyclic(6);
        let pairs = sys(&[&[0, 3], &[1, 4], &[2, 5]]);
        let act = action_on_blocks(&z6, &pairs).unwrap();
        assert_eq!(act.image().order(), 3);
        assert!(act.image().transitivity_profile().regular);
    }

    #[test]
    fn restrictions() {
        let z6 = PermGroup::cyclic(6);
        let r = block_restriction(&z6, &[0, 3]).unwrap();
        assert_eq!(r.degree(), 2);
        assert!(r.transitivity_profile().regular);
        let s4 = PermGroup::symmetric(4);
        assert_eq!(block_restriction(&s4, &[0, 1, 2, 3]).unwrap().order(), 24);
        assert_eq!(block_restriction(&z6, &[0, 1]), Err(Error::NotABlock));
    }

    #[test]
    fn classification() {
        let bad = classify_block_system(&d8(), vec![vec![0, 1, 2], vec![3]]);
        assert!(matches!(bad, Err(Error::MalformedPartition(_))));
        let c = classify_block_system(&d8(), vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(c.is_block_system && c.is_normal);
        let c = classify_block_system(&d8(), vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!c.is_block_system);
    }

    #[test]
    fn refinement_and_quotients() {
        let z6_pairs = sys(&[&[0, 3], &[1, 4], &[2, 5]]);
        let z6_triples = sys(&[&[0, 2, 4], &[1, 3, 5]]);
        assert!(refines(&z6_pairs, &BlockSystem::one_block(6)));
        assert!(!refines(&z6_pairs, &z6_triples) && !refines(&z6_triples, &z6_pairs));
        assert_eq!(quotient_system(&z6_triples, &z6_pairs), Err(Error::NotRefining));

        let z12 = PermGroup::cyclic(12);
        let b2 = minimal_block_containing(&z12, 0, 6).unwrap();
        let b6 = minimal_block_containing(&z12, 0, 2).unwrap();
        assert_eq!((b2.block_size(), b6.block_size()), (2, 6));
        let q = quotient_system(&b6, &b2).unwrap();
        assert_eq!((q.degree(), q.num_blocks(), q.block_size()), (6, 2, 3));
        let act = action_on_blocks(&z12, &b2).unwrap();
        assert!(q.is_block_system_of(act.image()));
        assert_eq!(b2.expand(&q).unwrap(), b6);
    }

    #[test]
    fn towers() {
        let z12 = PermGroup::cyclic(12);
        let tower = vec![
            BlockSystem::singletons(12),
            minimal_block_containing(&z12, 0, 6).unwrap(),
            minimal_block_containing(&z12, 0, 3).unwrap(),
            BlockSystem::one_block(12),
        ];
        let r = verify_tower(&z12, &tower).unwrap();
        assert!(r.m_step && r.normal && r.full);
        assert_eq!(r.index_sequence, vec![2, 2, 3]);
        assert_eq!(r.steps, 3);

        let broken = vec![
            minimal_block_containing(&z12, 0, 6).unwrap(),
            minimal_block_containing(&z12, 0, 4).unwrap(),
        ];
        let r = verify_tower(&z12, &broken).unwrap();
        assert!(!r.m_step);
        assert_eq!(r.broken_at.unwrap().0, 1);
    }

    #[test]
    fn json_round_trip() {
        let b = sys(&[&[0, 3], &[1, 4], &[2, 5]]);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"degree":6,"blocks":[[0,3],[1,4],[2,5]]}"#);
        assert_eq!(serde_json::from_str::<BlockSystem>(&s).unwrap(), b);
        assert!(serde_json::from_str::<BlockSystem>(r#"{"degree":4,"blocks":[[0,1],[2]]}"#).is_err());
    }
}
