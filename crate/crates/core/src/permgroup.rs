//! Deterministic Schreier–Sims.
//!
//! Base points are the smallest point moved by the element that forced a new
//! level. Schreier generators are sifted before insertion; nothing is
//! randomized, so equal generator lists give equal chains.

use dashu_int::UBig;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    // transversal[b] maps `point` to b; inverse stored alongside for sifting
    transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut level = Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: Vec::new(),
        };
        level.rebuild(degree);
        level
    }

    fn rebuild(&mut self, degree: usize) {
        let id = Permutation::identity(degree);
        self.transversal = vec![None; degree];
        self.transversal[self.point] = Some((id.clone(), id));
        self.orbit = vec![self.point];
        let mut head = 0;
        while head < self.orbit.len() {
            let b = self.orbit[head];
            head += 1;
            for s in &self.gens {
                let c = s.image0(b);
                if self.transversal[c].is_none() {
                    let u = self.transversal[b].as_ref().unwrap().0.then(s);
                    let u_inv = u.inverse();
                    self.transversal[c] = Some((u, u_inv));
                    self.orbit.push(c);
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
    order: UBig,
}

impl StabilizerChain {
    /// Chain for `<gens>` acting on `degree` points.
    pub fn new(degree: usize, gens: &[Permutation]) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: bad.degree(),
            });
        }
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
            order: UBig::ONE,
        };
        if gens.is_empty() {
            return Ok(chain);
        }
        for g in &gens {
            if chain.levels.iter().all(|l| g.image0(l.point) == l.point) {
                let point = g.first_moved0().unwrap();
                chain.levels.push(Level::new(point, degree));
            }
        }
        for i in 0..chain.levels.len() {
            let fixed: Vec<usize> = chain.levels[..i].iter().map(|l| l.point).collect();
            chain.levels[i].gens = gens
                .iter()
                .filter(|g| fixed.iter().all(|&p| g.image0(p) == p))
                .cloned()
                .collect();
            chain.levels[i].rebuild(degree);
        }
        chain.complete();
        chain.order = chain
            .levels
            .iter()
            .map(|l| UBig::from(l.orbit.len()))
            .product();
        Ok(chain)
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            match self.first_failing_schreier_generator(level) {
                Some((residue, depth)) => {
                    if depth == self.levels.len() {
                        let point = residue.first_moved0().unwrap();
                        self.levels.push(Level::new(point, self.degree));
                    }
                    for l in level + 1..=depth {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].rebuild(self.degree);
                    }
                    i = depth as isize;
                }
                None => i -= 1,
            }
        }
    }

    fn first_failing_schreier_generator(&self, level: usize) -> Option<(Permutation, usize)> {
        let lv = &self.levels[level];
        for &b in &lv.orbit {
            let (u_b, _) = lv.transversal[b].as_ref().unwrap();
            for s in &lv.gens {
                let us = u_b.then(s);
                let c = s.image0(b);
                let (u_c, u_c_inv) = lv.transversal[c].as_ref().unwrap();
                if us == *u_c {
                    continue;
                }
                let h = us.then(u_c_inv);
                let (residue, depth) = self.sift_from(h, level + 1);
                if depth < self.levels.len() || !residue.is_identity() {
                    return Some((residue, depth));
                }
            }
        }
        None
    }

    /// Strips `g` through the levels from `start`; returns the residue and the
    /// level where stripping stopped (`levels.len()` if it went all the way).
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, lv) in self.levels.iter().enumerate().skip(start) {
            let b = g.image0(lv.point);
            match &lv.transversal[b] {
                Some((_, u_inv)) => g = g.then(u_inv),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Exact group order, the product of the basic orbit lengths.
    pub fn order(&self) -> &UBig {
        &self.order
    }

    /// 1-based base points.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point + 1).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// 1-based orbit of the first base point.
    pub fn first_orbit(&self) -> Vec<usize> {
        self.levels
            .first()
            .map(|l| l.orbit.iter().map(|&p| p + 1).collect())
            .unwrap_or_default()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            if self.levels.is_empty() {
                return Ok(p.is_identity());
            }
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        let (residue, depth) = self.sift_from(p.clone(), 0);
        Ok(depth == self.levels.len() && residue.is_identity())
    }

    /// Checks the structural invariants: strong generators fix earlier base
    /// points, sift to the identity, and the order is the orbit-length product.
    pub fn is_consistent(&self) -> bool {
        let fixes_prefix = self.levels.iter().enumerate().all(|(i, l)| {
            l.gens.iter().all(|g| {
                self.levels[..i]
                    .iter()
                    .all(|e| g.image0(e.point) == e.point)
            })
        });
        let sifts = self
            .strong_generators()
            .iter()
            .all(|g| self.contains(g).unwrap_or(false));
        let product: UBig = self.orbit_lengths().into_iter().map(UBig::from).product();
        fixes_prefix && sifts && product == self.order
    }
}

/// Chain for `<gens>`; the degree is taken from the first generator (an empty
/// list gives the trivial group).
pub fn build_chain(gens: &[Permutation]) -> Result<StabilizerChain> {
    let degree = gens.first().map(Permutation::degree).unwrap_or(0);
    StabilizerChain::new(degree, gens)
}

/// Order of `<subgens>`, after checking every element lies in the parent group.
pub fn subgroup_order(parent: &StabilizerChain, subgens: &[Permutation]) -> Result<UBig> {
    for g in subgens {
        if !parent.contains(g)? {
            return Err(Error::NotInGroup);
        }
    }
    Ok(StabilizerChain::new(parent.degree(), subgens)?
        .order()
        .clone())
}

/// Normal closure of `<subgens>` under conjugation by `group_gens`.
pub fn normal_closure(
    degree: usize,
    group_gens: &[Permutation],
    subgens: &[Permutation],
) -> Result<StabilizerChain> {
    let mut gens: Vec<Permutation> = subgens.to_vec();
    let mut chain = StabilizerChain::new(degree, &gens)?;
    loop {
        let mut added = false;
        let current = chain.strong_generators();
        for s in &current {
            for g in group_gens {
                let c = s.conjugate_by(g);
                if !chain.contains(&c)? {
                    gens.push(c);
                    chain = StabilizerChain::new(degree, &gens)?;
                    added = true;
                }
            }
        }
        if !added {
            return Ok(chain);
        }
    }
}

/// Derived subgroup of `<gens>`.
pub fn derived_subgroup(degree: usize, gens: &[Permutation]) -> Result<StabilizerChain> {
    let mut commutators = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        for h in &gens[i + 1..] {
            let c = g.inverse().then(&h.inverse()).then(g).then(h);
            if !c.is_identity() {
                commutators.push(c);
            }
        }
    }
    normal_closure(degree, gens, &commutators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{closure_order_bfs, sigma, ClosureOrder};
    use crate::treeword::LevelAction;

    fn cyc(text: &str, degree: usize) -> Permutation {
        Permutation::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn root_groups() {
        let gens: Vec<_> = (1..=4).map(|i| sigma(4, i).unwrap()).collect();
        let chain = build_chain(&gens).unwrap();
        assert_eq!(*chain.order(), UBig::from(12u32));
        assert!(!chain.contains(&cyc("(1 2)", 4)).unwrap());
        for g in &gens {
            assert!(chain.contains(g).unwrap());
        }
        assert!(chain.is_consistent());
    }

    #[test]
    fn level_two_quotient_of_g4() {
        let level = LevelAction::new(4, 2);
        let chain = build_chain(&level.generators()).unwrap();
        assert_eq!(*chain.order(), UBig::from(82944u32));
        assert_eq!(chain.first_orbit().len(), 16);
        assert!(chain.is_consistent());
    }

    #[test]
    fn trivial_chains() {
        let chain = build_chain(&[Permutation::identity(5)]).unwrap();
        assert_eq!(*chain.order(), UBig::ONE);
        let empty = build_chain(&[]).unwrap();
        assert_eq!(*empty.order(), UBig::ONE);
        assert!(empty.contains(&Permutation::identity(3)).unwrap());
        assert!(!empty.contains(&cyc("(1 2)", 3)).unwrap());
        assert!(build_chain(&[Permutation::identity(3), Permutation::identity(4)]).is_err());
    }

    #[test]
    fn symmetric_groups() {
        let s8 = [cyc("(1 2)", 8), cyc("(1 2 3 4 5 6 7 8)", 8)];
        let chain = build_chain(&s8).unwrap();
        assert_eq!(*chain.order(), UBig::from(40320u32));
        let derived = derived_subgroup(8, &s8).unwrap();
        assert_eq!(*derived.order(), UBig::from(20160u32));
    }

    #[test]
    fn agrees_with_enumeration() {
        let groups: Vec<Vec<Permutation>> = vec![
            vec![cyc("(1 2 3)(4 5)", 6), cyc("(2 6)", 6)],
            vec![cyc("(1 2)(3 4)", 4), cyc("(1 3)(2 4)", 4)],
            vec![cyc("(1 2 3 4 5 6 7)", 7), cyc("(2 3 5)(4 7 6)", 7)],
        ];
        for gens in groups {
            let chain = build_chain(&gens).unwrap();
            let ClosureOrder::Exact(bfs) = closure_order_bfs(&gens, 1_000_000).unwrap() else {
                panic!("overflow");
            };
            assert_eq!(*chain.order(), UBig::from(bfs));
        }
    }

    #[test]
    fn subgroup_orders() {
        let level = LevelAction::new(4, 1);
        let gens = level.generators();
        let chain = build_chain(&gens).unwrap();
        assert_eq!(subgroup_order(&chain, &[]).unwrap(), UBig::ONE);
        assert_eq!(subgroup_order(&chain, &gens).unwrap(), UBig::from(12u32));
        let v4 = [cyc("(1 2)(3 4)", 4), cyc("(1 3)(2 4)", 4)];
        assert_eq!(subgroup_order(&chain, &v4).unwrap(), UBig::from(4u32));
        assert_eq!(
            subgroup_order(&chain, &[cyc("(1 2)", 4)]).unwrap_err(),
            Error::NotInGroup
        );
    }

    #[test]
    fn deterministic() {
        let level = LevelAction::new(3, 3);
        let a = build_chain(&level.generators()).unwrap();
        let b = build_chain(&level.generators()).unwrap();
        assert_eq!(a.base(), b.base());
        assert_eq!(a.orbit_lengths(), b.orbit_lengths());
        assert_eq!(a.order(), b.order());
    }
}
