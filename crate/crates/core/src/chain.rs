//! Deterministic Schreier–Sims stabilizer chains.

use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base: usize,
    /// Strong generators fixing every earlier base point.
    pub gens: Vec<Permutation>,
    /// Orbit of `base`, in discovery order.
    pub orbit: Vec<usize>,
    /// `transversal[x] = u` with `u(base) = x`.
    pub transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base: usize, gens: Vec<Permutation>) -> Self {
        let mut level = Level {
            base,
            gens,
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.base] = Some(Permutation::identity(degree));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            let ux = self.transversal[x].clone().expect("orbit point has transversal");
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y].is_none() {
                    self.transversal[y] = Some(s.then_unchecked(&ux));
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }

    pub fn rep(&self, x: usize) -> Option<&Permutation> {
        self.transversal[x].as_ref()
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    pub degree: usize,
    pub levels: Vec<Level>,
    strong: Vec<Permutation>,
}

fn fixes_all(p: &Permutation, points: &[usize]) -> bool {
    points.iter().all(|&b| p.apply(b) == b)
}

impl StabChain {
    /// Runs Schreier–Sims. The base starts with `prefix` (kept even where the
    /// orbit is trivial) and is extended by smallest moved points.
    pub fn build(degree: usize, gens: &[Permutation], prefix: &[usize]) -> StabChain {
        let strong: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &strong {
            if fixes_all(g, &base) {
                base.push(g.smallest_moved_point().expect("non-identity"));
            }
        }
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
            strong,
        };
        for i in 0..base.len() {
            let gens = chain.gens_fixing(&base[..i]);
            chain.levels.push(Level::new(degree, base[i], gens));
        }
        chain.complete();
        chain
    }

    fn base_points(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    fn gens_fixing(&self, points: &[usize]) -> Vec<Permutation> {
        self.strong
            .iter()
            .filter(|g| fixes_all(g, points))
            .cloned()
            .collect()
    }

    fn refresh_level(&mut self, i: usize) {
        let base = self.base_points();
        let gens = self.gens_fixing(&base[..i]);
        self.levels[i].gens = gens;
        self.levels[i].rebuild_orbit(self.degree);
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let lvl = i as usize;
            let orbit = self.levels[lvl].orbit.clone();
            let gens = self.levels[lvl].gens.clone();
            for &x in &orbit {
                let ux = self.levels[lvl].rep(x).cloned().expect("orbit rep");
                for s in &gens {
                    let sux = s.then_unchecked(&ux);
                    let y = s.apply(x);
                    let uy = self.levels[lvl].rep(y).expect("orbit closed");
                    if &sux == uy {
                        continue;
                    }
                    let schreier = uy.inverse().then_unchecked(&sux);
                    let (h, j) = self.strip_from(schreier, lvl + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        if j == self.levels.len() {
                            let b = h.smallest_moved_point().expect("non-identity residue");
                            self.strong.push(h);
                            let base = self.base_points();
                            let gens = self.gens_fixing(&base);
                            self.levels.push(Level::new(self.degree, b, gens));
                        } else {
                            self.strong.push(h);
                        }
                        for l in (lvl + 1)..=j.min(self.levels.len() - 1) {
                            self.refresh_level(l);
                        }
                        i = j.min(self.levels.len() - 1) as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }

    /// Sifts `g` starting at level `from`; returns the residue and the level
    /// where sifting stopped (`levels.len()` when it passed every level).
    pub fn strip_from(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (idx, level) in self.levels.iter().enumerate().skip(from) {
            let y = g.apply(level.base);
            match level.rep(y) {
                None => return (g, idx),
                Some(u) => g = u.inverse().then_unchecked(&g),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip_from(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().fold(1u128, |acc, l| {
            acc.checked_mul(l.orbit.len() as u128)
                .expect("group order exceeds u128")
        })
    }

    /// Strong generators of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_gens(&self, k: usize) -> Vec<Permutation> {
        let base = self.base_points();
        self.gens_fixing(&base[..k.min(base.len())])
    }

    /// All elements as products `u_0 ∘ u_1 ∘ … ∘ u_{k-1}`, orbit points
    /// taken in increasing order at every level.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        let sorted: Vec<Vec<usize>> = self
            .levels
            .iter()
            .map(|l| {
                let mut o = l.orbit.clone();
                o.sort_unstable();
                o
            })
            .collect();
        self.enumerate_rec(0, Permutation::identity(self.degree), &sorted, &mut out);
        out
    }

    /// First element, in [`StabChain::elements`] order, satisfying `pred`.
    pub fn find(&self, pred: &mut dyn FnMut(&Permutation) -> bool) -> Option<Permutation> {
        let sorted: Vec<Vec<usize>> = self
            .levels
            .iter()
            .map(|l| {
                let mut o = l.orbit.clone();
                o.sort_unstable();
                o
            })
            .collect();
        self.find_rec(0, Permutation::identity(self.degree), &sorted, pred)
    }

    fn find_rec(
        &self,
        lvl: usize,
        prefix: Permutation,
        sorted: &[Vec<usize>],
        pred: &mut dyn FnMut(&Permutation) -> bool,
    ) -> Option<Permutation> {
        if lvl == self.levels.len() {
            return pred(&prefix).then_some(prefix);
        }
        for &x in &sorted[lvl] {
            let u = self.levels[lvl].rep(x).expect("orbit rep");
            if let Some(p) = self.find_rec(lvl + 1, prefix.then_unchecked(u), sorted, pred) {
                return Some(p);
            }
        }
        None
    }

    fn enumerate_rec(
        &self,
        lvl: usize,
        prefix: Permutation,
        sorted: &[Vec<usize>],
        out: &mut Vec<Permutation>,
    ) {
        if lvl == self.levels.len() {
            out.push(prefix);
            return;
        }
        for &x in &sorted[lvl] {
            let u = self.levels[lvl].rep(x).expect("orbit rep");
            self.enumerate_rec(lvl + 1, prefix.then_unchecked(u), sorted, out);
        }
    }
}
