//! Deterministic Schreier–Sims stabilizer chains.
//!
//! Base points are chosen as the smallest point moved by the generator that
//! forces a new level, and Schreier generators are sifted in a fixed order,
//! so the chain (and every transversal) is a pure function of the input
//! generator list.

use std::collections::HashSet;

use rand::Rng;

use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    /// Indices into `StabChain::strong` of the generators fixing all earlier
    /// base points.
    gen_ids: Vec<usize>,
    /// `transversal[p]` maps the base point to `p`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<u32>,
    checked: HashSet<(u32, usize)>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(Permutation::identity(degree));
        Level {
            base,
            gen_ids: Vec::new(),
            transversal,
            orbit: vec![base],
            checked: HashSet::new(),
        }
    }

    /// Extends the orbit under the current generators; existing transversal
    /// entries are never replaced.
    fn update_orbit(&mut self, strong: &[Permutation]) {
        let mut idx = 0;
        while idx < self.orbit.len() {
            let p = self.orbit[idx];
            for &gid in &self.gen_ids {
                let g = &strong[gid];
                let q = g.apply(p);
                if self.transversal[q as usize].is_none() {
                    let u = self.transversal[p as usize].as_ref().unwrap().then(g);
                    self.transversal[q as usize] = Some(u);
                    self.orbit.push(q);
                }
            }
            idx += 1;
        }
    }
}

/// A base and strong generating set with fundamental-orbit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabChain {
            degree,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for g in generators {
            if g.is_identity() || chain.strong.contains(g) {
                continue;
            }
            let gid = chain.strong.len();
            chain.strong.push(g.clone());
            // Every strong generator must move some base point.
            let mut depth = 0;
            while depth < chain.levels.len() && g.apply(chain.levels[depth].base) == chain.levels[depth].base {
                depth += 1;
            }
            if depth == chain.levels.len() {
                let base = g.smallest_moved_point().unwrap();
                chain.levels.push(Level::new(base, degree));
            }
            for level in &mut chain.levels[..=depth] {
                level.gen_ids.push(gid);
            }
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            self.levels[li].update_orbit(&self.strong);
            let mut restart = None;
            let orbit = self.levels[li].orbit.clone();
            let gen_ids = self.levels[li].gen_ids.clone();
            'scan: for &p in &orbit {
                for &gid in &gen_ids {
                    if !self.levels[li].checked.insert((p, gid)) {
                        continue;
                    }
                    let level = &self.levels[li];
                    let g = &self.strong[gid];
                    let q = g.apply(p);
                    let up = level.transversal[p as usize].as_ref().unwrap();
                    let uq = level.transversal[q as usize].as_ref().unwrap();
                    let schreier = up.then(g).then(&uq.inverse());
                    let (residue, depth) = self.sift_from(schreier, li + 1);
                    if !residue.is_identity() {
                        let new_id = self.strong.len();
                        if depth == self.levels.len() {
                            let base = residue.smallest_moved_point().unwrap();
                            self.levels.push(Level::new(base, self.degree));
                        }
                        self.strong.push(residue);
                        for level in &mut self.levels[li + 1..=depth] {
                            level.gen_ids.push(new_id);
                        }
                        restart = Some(depth);
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(depth) => i = depth as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` starting at level `from`; returns the residue and the level
    /// at which sifting stopped (`levels.len()` if it passed every level).
    fn sift_from(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (depth, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.apply(level.base);
            match &level.transversal[beta as usize] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, depth),
            }
        }
        let depth = self.levels.len();
        (g, depth)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Product of the fundamental orbit lengths.
    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.orbit.len() as u128)
            .fold(1u128, |acc, x| acc.saturating_mul(x))
    }

    /// Every element, each exactly once, in no particular order.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        // g = h_deepest · ... · u_1 · u_0, with h built from the bottom up.
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for h in &out {
                for &p in &level.orbit {
                    next.push(h.then(level.transversal[p as usize].as_ref().unwrap()));
                }
            }
            out = next;
        }
        out
    }

    /// A uniformly distributed element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let p = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.then(level.transversal[p as usize].as_ref().unwrap());
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gens(n: usize, list: &[&str]) -> Vec<Permutation> {
        list.iter().map(|s| Permutation::parse_cycles(s, n).unwrap()).collect()
    }

    /// Closure by breadth-first multiplication; independent of the chain.
    fn closure(n: usize, gens: &[Permutation]) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let mut queue = vec![Permutation::identity(n)];
        seen.insert(Permutation::identity(n));
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen
    }

    #[test]
    fn orders_of_small_groups() {
        let cases: &[(usize, &[&str], u128)] = &[
            (5, &["(1,2,3,4,5)", "(1,2)"], 120),
            (4, &["(1,2,3)", "(2,3,4)"], 12),
            (4, &["(1,2)(3,4)", "(1,3)(2,4)"], 4),
            (7, &["(1,2,3,4,5,6,7)", "(1,2)"], 5040),
            (6, &["(1,2,3)", "(4,5,6)", "(1,4)(2,5)(3,6)"], 18),
            (3, &["()"], 1),
        ];
        for (n, list, order) in cases {
            let g = gens(*n, list);
            let chain = StabChain::new(*n, &g);
            assert_eq!(chain.order(), *order, "{list:?}");
            assert_eq!(closure(*n, &g).len() as u128, *order);
        }
    }

    #[test]
    fn membership_matches_closure() {
        let g = gens(5, &["(1,2,3)", "(3,4,5)"]);
        let chain = StabChain::new(5, &g);
        let all = closure(5, &gens(5, &["(1,2,3,4,5)", "(1,2)"]));
        let a5 = closure(5, &g);
        for p in &all {
            assert_eq!(chain.contains(p), a5.contains(p));
        }
    }

    #[test]
    fn elements_are_distinct_and_complete() {
        let g = gens(6, &["(1,2,3,4,5,6)", "(1,6)(2,5)(3,4)"]);
        let chain = StabChain::new(6, &g);
        let elems: HashSet<_> = chain.elements().into_iter().collect();
        assert_eq!(elems.len(), 12);
        assert_eq!(elems, closure(6, &g));
    }

    #[test]
    fn construction_is_deterministic() {
        let g = gens(8, &["(1,2,3,4,5,6,7,8)", "(1,3)(2,7)"]);
        let a = StabChain::new(8, &g);
        let b = StabChain::new(8, &g);
        assert_eq!(a.base(), b.base());
        assert_eq!(a.strong_generators(), b.strong_generators());
        assert_eq!(a.base()[0], 0);
    }
}
