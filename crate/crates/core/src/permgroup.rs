//! Permutation groups: orbits and stabilizer chains (Schreier–Sims).

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A permutation of `0..n`, acting on the right: `(a * b)(x) = b(a(x))`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation((0..n).collect())
    }

    /// `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|&(i, &x)| i != x).map(|(i, _)| i)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.0)
    }
}

/// Orbit of `start` under the group generated by `gens`, in BFS order.
pub fn orbit(gens: &[Permutation], start: usize) -> Vec<usize> {
    let n = gens.first().map_or(start + 1, Permutation::degree);
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut out = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// Generators of the pointwise stabilizer of the earlier base points.
    gens: Vec<Permutation>,
    /// `transversal[x]` maps the base point to `x`, for `x` in the basic orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Level {
        let mut level = Level {
            base_point,
            gens: Vec::new(),
            transversal: vec![None; degree],
            orbit: Vec::new(),
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let n = self.transversal.len();
        self.transversal = vec![None; n];
        self.transversal[self.base_point] = Some(Permutation::identity(n));
        self.orbit = vec![self.base_point];
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            let ux = self.transversal[x].clone().expect("orbit point has a transversal");
            for g in &self.gens {
                let y = g.apply(x);
                if self.transversal[y].is_none() {
                    self.transversal[y] = Some(ux.then(g));
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set, built by deterministic Schreier–Sims.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> StabilizerChain {
        StabilizerChain::with_base_prefix(degree, gens, &[])
    }

    /// Builds a chain whose base starts with `prefix`.
    pub fn with_base_prefix(degree: usize, gens: &[Permutation], prefix: &[usize]) -> StabilizerChain {
        let mut chain = StabilizerChain {
            degree,
            levels: prefix.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        let nontrivial: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if nontrivial.is_empty() {
            return chain;
        }
        if chain.levels.is_empty() {
            let b = nontrivial[0].first_moved().expect("nontrivial");
            chain.levels.push(Level::new(b, degree));
        }
        for g in &nontrivial {
            chain.levels[0].gens.push(g.clone());
        }
        // every generator must move some base point
        for g in &nontrivial {
            if chain.levels.iter().all(|l| g.apply(l.base_point) == l.base_point) {
                let b = g.first_moved().expect("nontrivial");
                chain.levels.push(Level::new(b, degree));
            }
        }
        // distribute generators to the levels whose earlier base points they fix
        for i in 1..chain.levels.len() {
            let fixing: Vec<Permutation> = chain.levels[i - 1]
                .gens
                .iter()
                .filter(|g| g.apply(chain.levels[i - 1].base_point) == chain.levels[i - 1].base_point)
                .cloned()
                .collect();
            chain.levels[i].gens = fixing;
        }
        for l in chain.levels.iter_mut() {
            l.rebuild_orbit();
        }
        chain.complete();
        chain
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level where it stopped.
    fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = h.apply(level.base_point);
            match &level.transversal[x] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let level_idx = i - 1;
            match self.find_schreier_residue(level_idx) {
                None => i -= 1,
                Some((residue, drop)) => {
                    if drop == self.levels.len() {
                        let b = residue.first_moved().expect("nonidentity residue");
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for l in level_idx + 1..=drop {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].rebuild_orbit();
                    }
                    i = drop + 1;
                }
            }
        }
    }

    /// A Schreier generator of level `i` that does not sift through the deeper levels.
    fn find_schreier_residue(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        for &x in &level.orbit {
            let ux = level.transversal[x].as_ref().expect("orbit point");
            for s in &level.gens {
                let y = s.apply(x);
                let uy = level.transversal[y].as_ref().expect("orbit is closed");
                let schreier = ux.then(s).then(&uy.inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (residue, drop) = self.sift(&schreier, i + 1);
                if drop < self.levels.len() || !residue.is_identity() {
                    return Some((residue, drop));
                }
            }
        }
        None
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Basic orbit lengths; their product is the group order.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Order of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_order(&self, k: usize) -> u128 {
        self.levels.iter().skip(k).map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (residue, drop) = self.sift(g, 0);
        drop == self.levels.len() && residue.is_identity()
    }
}

pub fn group_order(degree: usize, gens: &[Permutation]) -> u128 {
    StabilizerChain::new(degree, gens).order()
}

/// Order of the stabilizer of `point`.
pub fn point_stabilizer_order(degree: usize, gens: &[Permutation], point: usize) -> u128 {
    StabilizerChain::with_base_prefix(degree, gens, &[point]).stabilizer_order(1)
}
