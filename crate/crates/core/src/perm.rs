//! Permutations of `{1, ..., degree}`.
//!
//! Points are 1-based at the public surface. Composition follows the right
//! action used throughout the crate: `p.then(q)` applies `p` first, so
//! `p.then(q).apply(x) == q.apply(p.apply(x))`. This matches `u^{gh} = (u^g)^h`
//! for tree automorphisms.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use dashu_int::UBig;
use serde::{Serialize, Serializer};

use crate::error::{check_alphabet, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // 0-based images
    images: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_even(self) -> bool {
        self == Parity::Even
    }

    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 1-based images: `images[k - 1]` is the image of `k`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        let mut out = Vec::with_capacity(degree);
        for &img in images {
            if img == 0 || img > degree || seen[img - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 1..={degree}"
                )));
            }
            seen[img - 1] = true;
            out.push((img - 1) as u32);
        }
        Ok(Permutation { images: out })
    }

    /// Unchecked constructor over 0-based images.
    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!(is_bijection(&images));
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    #[inline]
    pub(crate) fn image0(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `self` first, then `other`. Panics on a degree mismatch; see [`compose`].
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.degree(),
            other.degree(),
            "degree mismatch in composition"
        );
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// `h^{-1} self h`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        h.inverse().then(self).then(h)
    }

    /// Nontrivial cycles as 1-based point lists, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> UBig {
        self.cycles().iter().fold(UBig::ONE, |acc, c| {
            let len = UBig::from(c.len());
            let g = dashu_int::ops::Gcd::gcd(&acc, &len);
            acc * (len / g)
        })
    }

    /// Smallest 0-based point moved by the permutation.
    pub(crate) fn first_moved0(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i != x as usize)
            .map(|(i, _)| i)
    }

    /// Parses cycle notation such as `(2 3)(4 5)` or `(1,3,4)`; `()`, `1` and `id`
    /// denote the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" || trimmed == "id" || trimmed == "()" {
            return Ok(Permutation::identity(degree));
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        let mut rest = trimmed;
        let err = |message: String| Error::InvalidPermutation(message);
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| err(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| err(format!("unclosed cycle in {text:?}")))?;
            let points = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| err(format!("bad point {s:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            for &p in &points {
                if p == 0 || p > degree || seen[p - 1] {
                    return Err(err(format!(
                        "point {p} repeated or out of range 1..={degree} in {text:?}"
                    )));
                }
                seen[p - 1] = true;
            }
            for (k, &p) in points.iter().enumerate() {
                let next = points[(k + 1) % points.len()];
                images[p - 1] = (next - 1) as u32;
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }
}

/// `p` first, then `q`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(p.then(q))
}

fn is_bijection(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    images.iter().all(|&x| {
        let x = x as usize;
        x < seen.len() && !std::mem::replace(&mut seen[x], true)
    })
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The root label of `a_i`: the `(n-1)`-cycle `(1, 2, ..., i-1, i+1, ..., n)` fixing `i`.
pub fn sigma(n: usize, i: usize) -> Result<Permutation> {
    check_alphabet(n)?;
    if i == 0 || i > n {
        return Err(Error::GeneratorOutOfRange { n, index: i });
    }
    Ok(sigma_pow(n, i, 1))
}

/// `sigma(n, i)^exp`, computed directly from the cycle.
pub(crate) fn sigma_pow(n: usize, i: usize, exp: i64) -> Permutation {
    let cycle: Vec<u32> = (0..n as u32).filter(|&x| x as usize != i - 1).collect();
    let len = cycle.len() as i64;
    let shift = exp.rem_euclid(len) as usize;
    let mut images: Vec<u32> = (0..n as u32).collect();
    for (k, &x) in cycle.iter().enumerate() {
        images[x as usize] = cycle[(k + shift) % cycle.len()];
    }
    Permutation { images }
}

/// The full cycle `(1, 2, ..., n)`.
pub fn omega(n: usize) -> Permutation {
    Permutation {
        images: (0..n as u32).map(|x| (x + 1) % n as u32).collect(),
    }
}

/// Outcome of [`closure_order_bfs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureOrder {
    Exact(u64),
    /// The group has more than `cap` elements.
    Overflow {
        cap: u64,
    },
}

pub const DEFAULT_CLOSURE_CAP: u64 = 10_000_000;

/// Order of `<gens>` by breadth-first enumeration of all elements, up to `cap` elements.
pub fn closure_order_bfs(gens: &[Permutation], cap: u64) -> Result<ClosureOrder> {
    let Some(first) = gens.first() else {
        return Ok(ClosureOrder::Exact(1));
    };
    let degree = first.degree();
    if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: bad.degree(),
        });
    }
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.images.clone());
    queue.push_back(id);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then(g);
            if !seen.contains(&q.images) {
                if seen.len() as u64 >= cap {
                    return Ok(ClosureOrder::Overflow { cap });
                }
                seen.insert(q.images.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(ClosureOrder::Exact(seen.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn compose_applies_left_operand_first() {
        let s1 = sigma(3, 1).unwrap();
        let s2 = sigma(3, 2).unwrap();
        assert_eq!(s1, p("(2 3)", 3));
        assert_eq!(s2, p("(1 3)", 3));
        let c = compose(&s1, &s2).unwrap();
        // 1 -> 3, 3 -> 2, 2 -> 1, checked against an exhaustive table
        let table: Vec<usize> = (1..=3).map(|x| s2.apply(s1.apply(x))).collect();
        assert_eq!(c.images(), table);
        assert_eq!(c.images(), vec![3, 1, 2]);
    }

    #[test]
    fn orders() {
        assert_eq!(p("(1 4 2)(3 5)", 5).order(), UBig::from(6u32));
        assert_eq!(Permutation::identity(3).order(), UBig::ONE);
        for n in 3..=8 {
            assert_eq!(sigma(n, 2).unwrap().order(), UBig::from(n - 1));
        }
    }

    #[test]
    fn compose_identity_and_inverse() {
        let q = p("(1 4 2)(3 5)", 5);
        let id = Permutation::identity(5);
        assert_eq!(compose(&id, &q).unwrap(), q);
        assert!(compose(&q, &q.inverse()).unwrap().is_identity());
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = compose(&Permutation::identity(3), &Permutation::identity(4)).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { left: 3, right: 4 });
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(4, 2).unwrap(), p("(1 3 4)", 4));
        assert_eq!(sigma(4, 2).unwrap().apply(2), 2);
        for n in 3..=8 {
            for i in 1..=n {
                let s = sigma(n, i).unwrap();
                assert!(s.pow(n as i64 - 1).is_identity());
                for k in 1..(n as i64 - 1) {
                    assert!(!s.pow(k).is_identity());
                }
                assert_eq!(sigma_pow(n, i, -1), s.inverse());
            }
        }
        assert!(sigma(4, 0).is_err());
        assert!(sigma(4, 5).is_err());
        assert!(sigma(2, 1).is_err());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Permutation::identity(5).parity(), Parity::Even);
        assert_eq!(sigma(3, 1).unwrap().parity(), Parity::Odd);
        assert_eq!(sigma(4, 1).unwrap().parity(), Parity::Even);
    }

    #[test]
    fn consecutive_sigmas_give_three_cycles() {
        for n in 3..=8 {
            for i in 1..=n - 2 {
                let lhs = sigma(n, i + 1)
                    .unwrap()
                    .inverse()
                    .then(&sigma(n, i).unwrap());
                let expected = p(&format!("({} {} {})", i, i + 1, i + 2), n);
                assert_eq!(lhs, expected, "n = {n}, i = {i}");
            }
        }
    }

    #[test]
    fn closure_orders() {
        let gens = |n: usize| (1..=n).map(|i| sigma(n, i).unwrap()).collect::<Vec<_>>();
        assert_eq!(
            closure_order_bfs(&gens(3), DEFAULT_CLOSURE_CAP).unwrap(),
            ClosureOrder::Exact(6)
        );
        assert_eq!(
            closure_order_bfs(&gens(4), DEFAULT_CLOSURE_CAP).unwrap(),
            ClosureOrder::Exact(12)
        );
        assert_eq!(
            closure_order_bfs(&[Permutation::identity(4)], 10).unwrap(),
            ClosureOrder::Exact(1)
        );
        assert_eq!(closure_order_bfs(&[], 10).unwrap(), ClosureOrder::Exact(1));
        assert_eq!(
            closure_order_bfs(&gens(5), 100).unwrap(),
            ClosureOrder::Overflow { cap: 100 }
        );
    }

    #[test]
    fn cycle_notation_round_trip() {
        let q = p("(1,3,4)(2 5)", 6);
        assert_eq!(q.to_string(), "(1 3 4)(2 5)");
        assert_eq!(p(&q.to_string(), 6), q);
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::parse_cycles("(1 1)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2", 3).is_err());
    }

    #[test]
    fn from_images_validates() {
        assert!(Permutation::from_images(&[2, 1, 3]).is_ok());
        assert!(Permutation::from_images(&[2, 2, 3]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
    }
}
