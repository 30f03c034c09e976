//! Deterministic Schreier–Sims stabilizer chains.

use super::perm::{Permutation, Point};

#[derive(Clone, Debug)]
struct Level {
    base: Point,
    gens: Vec<Permutation>,
    orbit: Vec<Point>,
    /// `transversal[x]` maps `base` to `x`, for `x` in the orbit.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(base: Point, degree: usize) -> Self {
        Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
        }
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.transversal.iter_mut().for_each(|t| *t = None);
        self.orbit.clear();
        self.transversal[self.base as usize] = Some(Permutation::identity(degree));
        self.orbit.push(self.base);
        let mut i = 0;
        while i < self.orbit.len() {
            let y = self.orbit[i] as usize;
            for g in &self.gens {
                let z = g.image(y);
                if self.transversal[z].is_none() {
                    let u = g.compose(self.transversal[y].as_ref().unwrap());
                    self.transversal[z] = Some(u);
                    self.orbit.push(z as Point);
                }
            }
            i += 1;
        }
    }
}

/// Base and strong generating set for a permutation group.
///
/// The base starts with the requested prefix and is then extended with the
/// least moved point whenever a new level is needed, so identical inputs give
/// identical chains.
#[derive(Clone, Debug)]
pub struct Chain {
    degree: usize,
    levels: Vec<Level>,
}

impl Chain {
    pub fn new(degree: usize, gens: &[Permutation], base_prefix: &[usize]) -> Chain {
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = Chain {
            degree,
            levels: base_prefix
                .iter()
                .map(|&b| Level::new(b as Point, degree))
                .collect(),
        };
        for g in &gens {
            if chain
                .levels
                .iter()
                .all(|l| g.image(l.base as usize) == l.base as usize)
            {
                let b = first_moved(g).unwrap();
                chain.levels.push(Level::new(b as Point, degree));
            }
        }
        for g in &gens {
            chain.add_strong_generator(g.clone(), 0);
        }
        for lvl in chain.levels.iter_mut() {
            lvl.rebuild_orbit(degree);
        }
        chain.complete();
        chain
    }

    /// Adds `g` to every level whose base prefix it fixes, starting at `from`.
    fn add_strong_generator(&mut self, g: Permutation, from: usize) {
        for lvl in self.levels[from..].iter_mut() {
            lvl.gens.push(g.clone());
            if g.image(lvl.base as usize) != lvl.base as usize {
                break;
            }
        }
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            match self.find_failing_schreier_generator(lvl) {
                None => i -= 1,
                Some((residue, failed_at)) => {
                    if failed_at == self.levels.len() {
                        let b = first_moved(&residue).expect("non-identity residue");
                        self.levels.push(Level::new(b as Point, self.degree));
                    }
                    for l in lvl + 1..=failed_at {
                        self.levels[l].gens.push(residue.clone());
                    }
                    for l in lvl + 1..=failed_at {
                        let degree = self.degree;
                        self.levels[l].rebuild_orbit(degree);
                    }
                    i = failed_at as isize;
                }
            }
        }
    }

    fn find_failing_schreier_generator(&self, lvl: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[lvl];
        for &x in &level.orbit {
            let ux = level.transversal[x as usize].as_ref().unwrap();
            for s in &level.gens {
                let sx = s.image(x as usize);
                let usx = level.transversal[sx].as_ref().unwrap();
                // maps base -> base
                let h = usx.inverse().compose(&s.compose(ux));
                if h.is_identity() {
                    continue;
                }
                let (res, at) = self.sift_from(h, lvl + 1);
                if at < self.levels.len() || !res.is_identity() {
                    return Some((res, at));
                }
            }
        }
        None
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// at which sifting stopped (`levels.len()` if it passed them all).
    fn sift_from(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, lvl) in self.levels.iter().enumerate().skip(from) {
            let x = g.image(lvl.base as usize);
            match &lvl.transversal[x] {
                None => return (g, l),
                Some(u) => g = u.inverse().compose(&g),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (res, at) = self.sift_from(g.clone(), 0);
        at == self.levels.len() && res.is_identity()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base as usize).collect()
    }

    pub fn base_len(&self) -> usize {
        self.levels.len()
    }

    /// Strong generators of the pointwise stabilizer of the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Permutation> {
        if depth < self.levels.len() {
            self.levels[depth].gens.clone()
        } else {
            Vec::new()
        }
    }

    pub fn basic_orbit(&self, level: usize) -> &[Point] {
        &self.levels[level].orbit
    }

    /// Transversal element mapping the `level`-th base point to `x`, if `x` is in that orbit.
    pub fn transversal(&self, level: usize, x: usize) -> Option<&Permutation> {
        self.levels[level].transversal[x].as_ref()
    }
}

fn first_moved(g: &Permutation) -> Option<usize> {
    (0..g.degree()).find(|&i| g.image(i) != i)
}
