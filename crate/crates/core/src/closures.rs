//! Orbit colorings of k-tuples and automorphism groups of colored
//! structures, which together give k-closures.
//!
//! Tuples `(x₀, …, x_{k-1})` are encoded as `Σ xᵢ·n^{k-1-i}` (first
//! coordinate most significant).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Degree limits per arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureBudget {
    pub max_degree_k3: usize,
    pub max_degree_k2: usize,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget {
            max_degree_k3: 64,
            max_degree_k2: 256,
        }
    }
}

impl ClosureBudget {
    /// Same limit for every arity, from a `--budget`-style value.
    pub fn uniform(max_degree: usize) -> Self {
        ClosureBudget {
            max_degree_k3: max_degree,
            max_degree_k2: max_degree,
        }
    }

    fn check(&self, degree: usize, arity: usize) -> Result<()> {
        if !(1..=3).contains(&arity) {
            return Err(Error::Precondition(format!("arity {arity} not in 1..=3")));
        }
        let budget = if arity == 3 {
            self.max_degree_k3
        } else {
            self.max_degree_k2
        };
        if degree > budget {
            return Err(Error::BudgetExceeded { degree, arity, budget });
        }
        Ok(())
    }
}

/// A coloring of all k-tuples of `0..degree` with canonical color ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StructureRepr", into = "StructureRepr")]
pub struct ColoredStructure {
    degree: usize,
    arity: usize,
    colors: Vec<u32>,
    num_colors: usize,
}

#[derive(Serialize, Deserialize)]
struct StructureRepr {
    degree: usize,
    arity: usize,
    colors: Vec<u32>,
}

impl TryFrom<StructureRepr> for ColoredStructure {
    type Error = Error;
    fn try_from(r: StructureRepr) -> Result<Self> {
        ColoredStructure::new(r.degree, r.arity, r.colors)
    }
}

impl From<ColoredStructure> for StructureRepr {
    fn from(s: ColoredStructure) -> Self {
        StructureRepr {
            degree: s.degree,
            arity: s.arity,
            colors: s.colors,
        }
    }
}

fn canonicalize(colors: &mut [u32]) -> usize {
    let mut relabel: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    for c in colors.iter_mut() {
        let next = relabel.len() as u32;
        *c = *relabel.entry(*c).or_insert(next);
    }
    relabel.len()
}

impl ColoredStructure {
    /// Validates the length and relabels colors canonically.
    pub fn new(degree: usize, arity: usize, mut colors: Vec<u32>) -> Result<Self> {
        if !(1..=3).contains(&arity) {
            return Err(Error::Precondition(format!("arity {arity} not in 1..=3")));
        }
        let len = degree
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::Precondition("tuple count overflows".into()))?;
        if colors.len() != len {
            return Err(Error::Precondition(format!(
                "expected {len} colors for degree {degree} and arity {arity}, found {}",
                colors.len()
            )));
        }
        let num_colors = canonicalize(&mut colors);
        Ok(ColoredStructure {
            degree,
            arity,
            colors,
            num_colors,
        })
    }

    /// Every tuple has color 0.
    pub fn uniform(degree: usize, arity: usize) -> Result<Self> {
        Self::new(degree, arity, vec![0; degree.pow(arity as u32)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.degree + x)
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = code % self.degree;
            code /= self.degree;
        }
        t
    }

    pub fn color(&self, tuple: &[usize]) -> u32 {
        self.colors[self.encode(tuple)]
    }

    fn image_code(&self, p: &Permutation, code: usize) -> usize {
        let n = self.degree;
        let mut rest = code;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.arity {
            out += p.apply(rest % n) * scale;
            rest /= n;
            scale *= n;
        }
        out
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] as usize != x {
            let up = self.0[self.0[x] as usize];
            self.0[x] = up;
            x = up as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo as u32;
        }
    }
}

/// Orbits of `G` on k-tuples as a coloring.
pub fn orbit_coloring(g: &PermGroup, k: usize) -> Result<ColoredStructure> {
    orbit_coloring_with_budget(g, k, &ClosureBudget::default())
}

pub fn orbit_coloring_with_budget(g: &PermGroup, k: usize, budget: &ClosureBudget) -> Result<ColoredStructure> {
    let n = g.degree();
    budget.check(n, k)?;
    let len = n.pow(k as u32);
    let shape = ColoredStructure {
        degree: n,
        arity: k,
        colors: Vec::new(),
        num_colors: 0,
    };
    let mut uf = UnionFind((0..len as u32).collect());
    for h in g.generators() {
        for code in 0..len {
            uf.union(code, shape.image_code(h, code));
        }
    }
    let colors: Vec<u32> = (0..len).map(|c| uf.find(c) as u32).collect();
    ColoredStructure::new(n, k, colors)
}

/// Does `p` preserve the color of every tuple?
pub fn is_automorphism(s: &ColoredStructure, p: &Permutation) -> Result<bool> {
    if p.degree() != s.degree {
        return Err(Error::DegreeMismatch {
            expected: s.degree,
            found: p.degree(),
        });
    }
    Ok((0..s.colors.len()).all(|c| s.colors[s.image_code(p, c)] == s.colors[c]))
}

/// An ordered partition of the points: `cell[x]` is the index of `x`'s cell.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Partition {
    cell: Vec<u32>,
    count: usize,
}

/// Distinct `(old cell, signature)` pairs in sorted order, with
/// multiplicities; equal profiles on both sides of a search step are
/// necessary for an isomorphism between the two individualizations.
type Profile = Vec<(u32, Vec<u64>, usize)>;

impl Partition {
    fn unit(n: usize) -> Self {
        Partition {
            cell: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    fn is_discrete(&self) -> bool {
        self.count == self.cell.len()
    }

    fn members(&self, c: u32) -> Vec<usize> {
        (0..self.cell.len()).filter(|&x| self.cell[x] == c).collect()
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<u32> {
        let mut sizes = vec![0usize; self.count];
        for &c in &self.cell {
            sizes[c as usize] += 1;
        }
        (0..self.count)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .map(|c| c as u32)
    }

    /// Splits `x` off its cell, placed first.
    fn individualize(&self, x: usize) -> Partition {
        let keys: Vec<(u32, u8)> = (0..self.cell.len())
            .map(|y| (self.cell[y], u8::from(y != x)))
            .collect();
        let mut distinct = keys.clone();
        distinct.sort_unstable();
        distinct.dedup();
        Partition {
            cell: keys
                .iter()
                .map(|k| distinct.binary_search(k).expect("present") as u32)
                .collect(),
            count: distinct.len(),
        }
    }
}

struct Refiner<'a> {
    s: &'a ColoredStructure,
}

impl Refiner<'_> {
    /// Signature of every point: sorted keys `(position, color, cells of the
    /// other coordinates)` over all tuples through the point.
    fn signatures(&self, p: &Partition) -> Vec<Vec<u64>> {
        let s = self.s;
        let n = s.degree as u64;
        let nc = s.num_colors as u64;
        let mut sig: Vec<Vec<u64>> = vec![Vec::with_capacity(s.arity * s.colors.len() / s.degree.max(1)); s.degree];
        let mut tuple = vec![0usize; s.arity];
        for (code, &color) in s.colors.iter().enumerate() {
            let mut rest = code;
            for slot in tuple.iter_mut().rev() {
                *slot = rest % s.degree;
                rest /= s.degree;
            }
            for pos in 0..s.arity {
                let mut key = pos as u64 * nc + color as u64;
                for (q, &y) in tuple.iter().enumerate() {
                    if q != pos {
                        key = key * n + p.cell[y] as u64;
                    }
                }
                sig[tuple[pos]].push(key);
            }
        }
        for v in &mut sig {
            v.sort_unstable();
        }
        sig
    }

    fn step(&self, p: &Partition) -> (Partition, Profile) {
        let sig = self.signatures(p);
        let mut order: Vec<usize> = (0..p.cell.len()).collect();
        order.sort_by(|&a, &b| (p.cell[a], &sig[a]).cmp(&(p.cell[b], &sig[b])));
        let mut cell = vec![0u32; p.cell.len()];
        let mut profile: Profile = Vec::new();
        for &x in &order {
            match profile.last_mut() {
                Some((c, s, k)) if *c == p.cell[x] && *s == sig[x] => *k += 1,
                _ => profile.push((p.cell[x], sig[x].clone(), 1)),
            }
            cell[x] = (profile.len() - 1) as u32;
        }
        let count = profile.len();
        (Partition { cell, count }, profile)
    }

    fn refine(&self, p: &Partition) -> Partition {
        let mut cur = p.clone();
        loop {
            let (next, _) = self.step(&cur);
            if next.count == cur.count {
                return next;
            }
            cur = next;
        }
    }

    /// Refines both partitions in lockstep; `None` when they diverge.
    fn refine_pair(&self, l: &Partition, r: &Partition) -> Option<(Partition, Partition)> {
        let (mut l, mut r) = (l.clone(), r.clone());
        loop {
            let (l2, pl) = self.step(&l);
            let (r2, pr) = self.step(&r);
            if pl != pr {
                return None;
            }
            if l2.count == l.count {
                return Some((l2, r2));
            }
            l = l2;
            r = r2;
        }
    }

    /// Depth-first search for an automorphism mapping the left
    /// individualization onto the right one.
    fn search(&self, l: &Partition, r: &Partition) -> Option<Permutation> {
        if l.is_discrete() {
            let mut images = vec![0usize; l.cell.len()];
            let mut right_of = vec![0usize; r.cell.len()];
            for (y, &c) in r.cell.iter().enumerate() {
                right_of[c as usize] = y;
            }
            for (x, &c) in l.cell.iter().enumerate() {
                images[x] = right_of[c as usize];
            }
            let p = Permutation::from_images(images).ok()?;
            return is_automorphism(self.s, &p).ok()?.then_some(p);
        }
        let c = l.target_cell()?;
        let u = l.members(c)[0];
        let left = l.individualize(u);
        for v in r.members(c) {
            if let Some((l2, r2)) = self.refine_pair(&left, &r.individualize(v)) {
                if let Some(p) = self.search(&l2, &r2) {
                    return Some(p);
                }
            }
        }
        None
    }
}

/// `Aut(S)`.
pub fn automorphisms(s: &ColoredStructure) -> Result<PermGroup> {
    automorphisms_seeded(s, &PermGroup::trivial(s.degree), &ClosureBudget::default())
}

/// `Aut(S)` given a subgroup already known to preserve `S`.
///
/// Walks a base chosen by refinement; at each level every candidate image
/// of the base point outside the known stabilizer orbit is either realized
/// by a new automorphism or ruled out, together with its known orbit.
pub fn automorphisms_seeded(s: &ColoredStructure, seed: &PermGroup, budget: &ClosureBudget) -> Result<PermGroup> {
    let n = s.degree;
    budget.check(n, s.arity)?;
    if seed.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: seed.degree(),
        });
    }
    for g in seed.generators() {
        if !is_automorphism(s, g)? {
            return Err(Error::Precondition("seed does not preserve the structure".into()));
        }
    }
    let refiner = Refiner { s };
    let mut known = seed.clone();
    let mut prefix: Vec<usize> = Vec::new();
    let mut part = refiner.refine(&Partition::unit(n));
    while let Some(c) = part.target_cell() {
        let cell = part.members(c);
        let b = cell[0];
        let left = refiner.refine(&part.individualize(b));
        let mut ruled_out = vec![false; n];
        let mut stab = known.pointwise_stabilizer(&prefix);
        for &y in &cell[1..] {
            if ruled_out[y] || stab.orbit(b).contains(&y) {
                continue;
            }
            let found = refiner
                .refine_pair(&part.individualize(b), &part.individualize(y))
                .and_then(|(l, r)| refiner.search(&l, &r));
            match found {
                Some(g) => {
                    known = known.join(&PermGroup::new(n, vec![g])?)?;
                    stab = known.pointwise_stabilizer(&prefix);
                }
                None => {
                    for z in stab.orbit(y) {
                        ruled_out[z] = true;
                    }
                }
            }
        }
        prefix.push(b);
        part = left;
    }
    Ok(known)
}

pub fn k_closure(g: &PermGroup, k: usize) -> Result<PermGroup> {
    k_closure_with_budget(g, k, &ClosureBudget::default())
}

pub fn k_closure_with_budget(g: &PermGroup, k: usize, budget: &ClosureBudget) -> Result<PermGroup> {
    let s = orbit_coloring_with_budget(g, k, budget)?;
    automorphisms_seeded(&s, g, budget)
}

pub fn is_k_closed(g: &PermGroup, k: usize) -> Result<bool> {
    Ok(k_closure(g, k)?.order() == g.order())
}

pub fn is_k_closed_with_budget(g: &PermGroup, k: usize, budget: &ClosureBudget) -> Result<bool> {
    Ok(k_closure_with_budget(g, k, budget)?.order() == g.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn colorings() {
        let z4 = PermGroup::cyclic(4);
        assert_eq!(orbit_coloring(&z4, 2).unwrap().num_colors(), 4);
        assert_eq!(orbit_coloring(&z4, 3).unwrap().num_colors(), 16);
        assert_eq!(orbit_coloring(&PermGroup::symmetric(5), 2).unwrap().num_colors(), 2);
        assert_eq!(orbit_coloring(&PermGroup::symmetric(5), 3).unwrap().num_colors(), 5);
        let s = orbit_coloring(&z4, 2).unwrap();
        assert_eq!(s.colors()[..4], [0, 1, 2, 3]);
        assert_eq!(s.decode(s.encode(&[3, 1])), vec![3, 1]);
    }

    #[test]
    fn automorphism_checks() {
        let z5 = PermGroup::cyclic(5);
        let s = orbit_coloring(&z5, 2).unwrap();
        assert!(is_automorphism(&s, &z5.generators()[0]).unwrap());
        assert!(!is_automorphism(&s, &cyc(5, &[&[0, 1]])).unwrap());
        assert!(is_automorphism(&s, &Permutation::identity(5)).unwrap());
        assert!(is_automorphism(&s, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn automorphism_groups() {
        assert_eq!(automorphisms(&ColoredStructure::uniform(6, 3).unwrap()).unwrap().order(), 720);
        let s = orbit_coloring(&PermGroup::cyclic(5), 2).unwrap();
        assert_eq!(automorphisms(&s).unwrap().order(), 5);
        // the 2-closure of a regular cyclic group of order 4 contains only itself
        assert_eq!(k_closure(&PermGroup::cyclic(4), 2).unwrap().order(), 4);
        // the orbitals of D₈ on 4 points are those of the square
        let d8 = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 2]])]).unwrap();
        assert_eq!(k_closure(&d8, 2).unwrap().order(), 8);
        // A₄ has the same orbits on pairs as S₄
        assert_eq!(k_closure(&PermGroup::alternating(4), 2).unwrap().order(), 24);
        assert!(!is_k_closed(&PermGroup::alternating(4), 2).unwrap());
    }

    #[test]
    fn symmetric_groups_are_closed() {
        for n in 1..7 {
            for k in 1..=3 {
                assert!(is_k_closed(&PermGroup::symmetric(n), k).unwrap());
            }
        }
    }

    #[test]
    fn budgets() {
        let g = PermGroup::cyclic(70);
        assert!(matches!(orbit_coloring(&g, 3), Err(Error::BudgetExceeded { .. })));
        assert!(orbit_coloring(&g, 2).is_ok());
        assert!(matches!(
            k_closure_with_budget(&PermGroup::cyclic(9), 2, &ClosureBudget::uniform(8)),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(orbit_coloring(&g, 4).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = orbit_coloring(&PermGroup::cyclic(3), 2).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"degree":3,"arity":2,"colors":[0,1,2,2,0,1,1,2,0]}"#);
        assert_eq!(serde_json::from_str::<ColoredStructure>(&j).unwrap(), s);
        assert!(serde_json::from_str::<ColoredStructure>(r#"{"degree":3,"arity":2,"colors":[0]}"#).is_err());
    }
}
