use num_bigint::BigUint;
use num_traits::One;

/// `perm[x]` is the image of `x`.
pub type Permutation = Vec<usize>;

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

/// Apply `a`, then `b`.
fn compose(a: &[usize], b: &[usize]) -> Permutation {
    a.iter().map(|&x| b[x]).collect()
}

fn inverse(a: &[usize]) -> Permutation {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// `transversal[x]` maps `base` to `x`.
    transversal: Vec<Option<Permutation>>,
}

struct Chain {
    degree: usize,
    levels: Vec<Level>,
}

impl Chain {
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for j in from..self.levels.len() {
            let level = &self.levels[j];
            match &level.transversal[g[level.base]] {
                Some(u) => g = compose(&g, &inverse(u)),
                None => return (g, j),
            }
        }
        (g, self.levels.len())
    }

    fn add_strong(&mut self, g: Permutation, j: usize) {
        if j == self.levels.len() {
            let base = g.iter().enumerate().find(|(i, &x)| *i != x).map(|(i, _)| i).expect("non-identity");
            self.levels.push(Level { base, gens: Vec::new(), transversal: Vec::new() });
        }
        self.levels[j].gens.push(g);
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let gens: Vec<Permutation> = self.levels[i..].iter().flat_map(|l| l.gens.iter().cloned()).collect();
        let base = self.levels[i].base;
        let mut transversal = vec![None; self.degree];
        transversal[base] = Some((0..self.degree).collect::<Permutation>());
        let mut queue = vec![base];
        while let Some(x) = queue.pop() {
            let ux = transversal[x].clone().expect("orbit point");
            for s in &gens {
                let y = s[x];
                if transversal[y].is_none() {
                    transversal[y] = Some(compose(&ux, s));
                    queue.push(y);
                }
            }
        }
        self.levels[i].transversal = transversal;
    }

    /// First Schreier generator at level `i` that does not sift through the deeper levels.
    fn failing_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        let gens: Vec<&Permutation> = self.levels[i..].iter().flat_map(|l| l.gens.iter()).collect();
        for ux in level.transversal.iter().flatten() {
            let x = ux[level.base];
            for s in &gens {
                let uy = level.transversal[s[x]].as_ref().expect("orbit closed");
                let schreier = compose(&compose(ux, s), &inverse(uy));
                let (h, j) = self.sift(schreier, i + 1);
                if !is_identity(&h) {
                    return Some((h, j));
                }
            }
        }
        None
    }
}

/// Order of the permutation group on `0..degree` generated by `gens`,
/// via a Schreier–Sims base and strong generating set.
pub fn group_order(degree: usize, gens: &[Permutation]) -> BigUint {
    let mut chain = Chain { degree, levels: Vec::new() };
    for g in gens {
        assert_eq!(g.len(), degree, "generator degree mismatch");
        let (h, j) = chain.sift(g.clone(), 0);
        if !is_identity(&h) {
            chain.add_strong(h, j);
            for i in (0..=j).rev() {
                chain.rebuild_orbit(i);
            }
        }
    }
    let mut i = chain.levels.len() as isize - 1;
    while i >= 0 {
        let iu = i as usize;
        chain.rebuild_orbit(iu);
        if let Some((h, j)) = chain.failing_schreier_generator(iu) {
            chain.add_strong(h, j);
            i = j as isize;
        } else {
            i -= 1;
        }
    }
    chain
        .levels
        .iter()
        .map(|l| BigUint::from(l.transversal.iter().flatten().count()))
        .fold(BigUint::one(), |acc, x| acc * x)
}
