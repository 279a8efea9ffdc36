//! Elements of `G_n` as automorphisms of the `n`-ary rooted tree.
//!
//! `a_i = (1, ..., 1, a_i, 1, ..., 1) sigma_i` with `a_i` in coordinate `i`.
//! A decomposition `(g_1, ..., g_n) theta` acts by `(x w)^g = x^theta w^{g_x}`,
//! so products follow `(u v)_k = u_k v_{k^{theta_u}}`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{check_alphabet, Error, Result};
use crate::perm::{omega, sigma_pow, Permutation};
use crate::word::{GeneratorWord, Syllable};

/// A vertex of the tree: a word over `{1, ..., n}`; the empty word is the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    letters: Vec<u16>,
}

impl Vertex {
    pub fn root() -> Self {
        Vertex {
            letters: Vec::new(),
        }
    }

    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&x| x == 0 || x > n) {
            return Err(Error::LetterOutOfRange { n, letter: bad });
        }
        Ok(Vertex {
            letters: letters.into_iter().map(|x| x as u16).collect(),
        })
    }

    pub fn letters(&self) -> Vec<usize> {
        self.letters.iter().map(|&x| x as usize).collect()
    }

    #[allow(clippy::len_without_is_empty)] // the empty vertex is `is_root`
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_root(&self) -> bool {
        self.letters.is_empty()
    }

    /// Position within its level in lexicographic order (letters `1 < 2 < ... < n`).
    pub fn level_index(&self, n: usize) -> usize {
        self.letters
            .iter()
            .fold(0, |acc, &x| acc * n + (x as usize - 1))
    }

    pub fn from_level_index(n: usize, level: usize, mut index: usize) -> Vertex {
        let mut letters = vec![0u16; level];
        for slot in letters.iter_mut().rev() {
            *slot = (index % n) as u16 + 1;
            index /= n;
        }
        Vertex { letters }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("∅");
        }
        let dotted = self.letters.iter().any(|&x| x > 9);
        for (k, x) in self.letters.iter().enumerate() {
            if dotted && k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// `(states[0], ..., states[n-1]) root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WreathDecomposition {
    pub states: Vec<GeneratorWord>,
    pub root: Permutation,
}

impl WreathDecomposition {
    pub fn identity(n: usize) -> Self {
        WreathDecomposition {
            states: vec![GeneratorWord::identity(n); n],
            root: Permutation::identity(n),
        }
    }

    /// A first-level stabilizer element `(states)_1`.
    pub fn stabilizing(states: Vec<GeneratorWord>) -> Self {
        let n = states.len();
        WreathDecomposition {
            states,
            root: Permutation::identity(n),
        }
    }

    /// `(1, ..., g, ..., 1)_1` with `g` at the 1-based coordinate `at`.
    pub fn at_coordinate(g: &GeneratorWord, at: usize) -> Self {
        let mut d = WreathDecomposition::identity(g.n());
        d.states[at - 1] = g.clone();
        d
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn mul(&self, other: &WreathDecomposition) -> WreathDecomposition {
        let states = (0..self.n())
            .map(|k| self.states[k].mul(&other.states[self.root.image0(k)]))
            .collect();
        WreathDecomposition {
            states,
            root: self.root.then(&other.root),
        }
    }

    pub fn inverse(&self) -> WreathDecomposition {
        let inv_root = self.root.inverse();
        let states = (0..self.n())
            .map(|j| self.states[inv_root.image0(j)].inverse())
            .collect();
        WreathDecomposition {
            states,
            root: inv_root,
        }
    }

    /// `by^{-1} self by`.
    pub fn conjugate(&self, by: &WreathDecomposition) -> WreathDecomposition {
        by.inverse().mul(self).mul(by)
    }

    pub fn is_stabilizing(&self) -> bool {
        self.root.is_identity()
    }

    pub fn canonical(&self) -> WreathDecomposition {
        WreathDecomposition {
            states: self.states.iter().map(GeneratorWord::canonical).collect(),
            root: self.root.clone(),
        }
    }

    /// Action on level `m`: `(x w) -> x^root w^{states[x]}` over lexicographically ordered vertices.
    pub fn leaf_action(&self, m: usize) -> Permutation {
        assert!(m >= 1, "leaf actions start at level 1");
        let n = self.n();
        let block = n.pow(m as u32 - 1);
        let mut images = vec![0u32; block * n];
        let level = LevelAction::new(n, m - 1);
        for x in 0..n {
            let inner = level.word(&self.states[x]);
            let target = self.root.image0(x) * block;
            for r in 0..block {
                images[x * block + r] = (target + inner.image0(r)) as u32;
            }
        }
        Permutation::from_raw(images)
    }
}

impl fmt::Display for WreathDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, s) in self.states.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        if self.root.is_identity() {
            f.write_str(")_1")
        } else {
            write!(f, "){}", self.root)
        }
    }
}

/// The wreath recursion applied to a word: root permutation and the `n` states.
pub fn decompose(w: &GeneratorWord) -> WreathDecomposition {
    let n = w.n();
    let mut states = vec![GeneratorWord::identity(n); n];
    let mut theta: Vec<u32> = (0..n as u32).collect();
    for &Syllable { gen, exp } in w.syllables() {
        // the syllable's only nontrivial state sits at coordinate gen; it lands in
        // the state k with k^theta = gen
        let g = gen as usize - 1;
        let k = theta.iter().position(|&x| x as usize == g).unwrap();
        states[k].push(gen, exp);
        let step = sigma_pow(n, gen as usize, exp);
        for t in theta.iter_mut() {
            *t = step.image0(*t as usize) as u32;
        }
    }
    WreathDecomposition {
        states,
        root: Permutation::from_raw(theta),
    }
}

/// State of `w` at the vertex `v`, in canonical form.
pub fn state_at(w: &GeneratorWord, v: &Vertex) -> Result<GeneratorWord> {
    let n = w.n();
    let mut cur = w.canonical();
    for &x in &v.letters {
        if x == 0 || x as usize > n {
            return Err(Error::LetterOutOfRange {
                n,
                letter: x as usize,
            });
        }
        if cur.is_empty() {
            break;
        }
        cur = decompose(&cur).states[x as usize - 1].canonical();
    }
    Ok(cur)
}

/// Image of the vertex `v` under `w`: `x_1^{g(∅)} x_2^{g(x_1)} ...`.
pub fn act(w: &GeneratorWord, v: &Vertex) -> Result<Vertex> {
    let n = w.n();
    let mut cur = w.canonical();
    let mut out = Vec::with_capacity(v.len());
    for (pos, &x) in v.letters.iter().enumerate() {
        if x == 0 || x as usize > n {
            return Err(Error::LetterOutOfRange {
                n,
                letter: x as usize,
            });
        }
        if cur.is_empty() {
            out.extend_from_slice(&v.letters[pos..]);
            break;
        }
        let d = decompose(&cur);
        out.push(d.root.apply(x as usize) as u16);
        cur = d.states[x as usize - 1].canonical();
    }
    Ok(Vertex { letters: out })
}

/// Labels `g(u)` for all vertices `u` with `|u| < depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    n: usize,
    depth: usize,
    // levels[l][index] = label of the vertex of length l at lexicographic `index`
    levels: Vec<Vec<Permutation>>,
}

impl Portrait {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn label(&self, v: &Vertex) -> Option<&Permutation> {
        self.levels.get(v.len())?.get(v.level_index(self.n))
    }

    /// `(vertex, label)` pairs in level order.
    pub fn labels(&self) -> impl Iterator<Item = (Vertex, &Permutation)> + '_ {
        self.levels.iter().enumerate().flat_map(move |(l, row)| {
            row.iter()
                .enumerate()
                .map(move |(i, p)| (Vertex::from_level_index(self.n, l, i), p))
        })
    }

    /// Action on vertices of length `depth` computed from the labels alone.
    pub fn leaf_action(&self) -> Permutation {
        let n = self.n;
        let count = n.pow(self.depth as u32);
        let mut images = Vec::with_capacity(count);
        let mut digits = vec![0usize; self.depth];
        for idx in 0..count {
            let mut rem = idx;
            for slot in digits.iter_mut().rev() {
                *slot = rem % n;
                rem /= n;
            }
            let mut prefix = 0usize;
            let mut image = 0usize;
            for (l, &x) in digits.iter().enumerate() {
                let label = &self.levels[l][prefix];
                image = image * n + label.image0(x);
                prefix = prefix * n + x;
            }
            images.push(image as u32);
        }
        Permutation::from_raw(images)
    }
}

/// Depth-`m` portrait of `w`. States are memoized per canonical word.
pub fn portrait(w: &GeneratorWord, m: usize) -> Result<Portrait> {
    if m == 0 {
        return Err(Error::Precondition(
            "portrait depth must be at least 1".into(),
        ));
    }
    let n = w.n();
    let mut memo: HashMap<GeneratorWord, WreathDecomposition> = HashMap::new();
    let mut decomp = |word: &GeneratorWord| -> WreathDecomposition {
        memo.entry(word.clone())
            .or_insert_with(|| decompose(word).canonical())
            .clone()
    };
    let mut levels = Vec::with_capacity(m);
    let mut frontier = vec![w.canonical()];
    for l in 0..m {
        let mut labels = Vec::with_capacity(frontier.len());
        let mut next = Vec::with_capacity(if l + 1 < m { frontier.len() * n } else { 0 });
        for word in &frontier {
            let d = decomp(word);
            labels.push(d.root);
            if l + 1 < m {
                next.extend(d.states);
            }
        }
        levels.push(labels);
        frontier = next;
    }
    Ok(Portrait {
        n,
        depth: m,
        levels,
    })
}

/// Portrait with every label equal to `p`; for `p = omega` this is the shift automorphism.
pub fn constant_portrait(p: &Permutation, m: usize) -> Result<Portrait> {
    let n = p.degree();
    check_alphabet(n)?;
    if m == 0 {
        return Err(Error::Precondition(
            "portrait depth must be at least 1".into(),
        ));
    }
    let levels = (0..m).map(|l| vec![p.clone(); n.pow(l as u32)]).collect();
    Ok(Portrait {
        n,
        depth: m,
        levels,
    })
}

/// Level-`m` action of the shift automorphism: every letter moved by `omega`.
pub fn shift_leaf_action(n: usize, m: usize) -> Result<Permutation> {
    Ok(constant_portrait(&omega(n), m)?.leaf_action())
}

/// Generator actions on one level, reused across words.
#[derive(Debug, Clone)]
pub struct LevelAction {
    n: usize,
    level: usize,
    // powers[i][e] = a_{i+1}^e on the level, e in 0..n-1
    powers: Vec<Vec<Permutation>>,
}

impl LevelAction {
    pub fn new(n: usize, level: usize) -> Self {
        let powers = (1..=n)
            .map(|i| {
                let g = generator_leaf_action(n, i, level);
                let mut acc = Permutation::identity(g.degree());
                let mut out = Vec::with_capacity(n - 1);
                for _ in 0..n - 1 {
                    out.push(acc.clone());
                    acc = acc.then(&g);
                }
                out
            })
            .collect();
        LevelAction { n, level, powers }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.n.pow(self.level as u32)
    }

    pub fn generator(&self, i: usize) -> &Permutation {
        &self.powers[i - 1][1]
    }

    pub fn generators(&self) -> Vec<Permutation> {
        (1..=self.n).map(|i| self.generator(i).clone()).collect()
    }

    pub fn word(&self, w: &GeneratorWord) -> Permutation {
        let order = self.n as i64 - 1;
        let mut acc = Permutation::identity(self.degree());
        for s in w.syllables() {
            let e = s.exp.rem_euclid(order) as usize;
            if e != 0 {
                acc = acc.then(&self.powers[s.gen as usize - 1][e]);
            }
        }
        acc
    }
}

/// Level-`m` action of `a_i`: skip the leading run of `i`s and apply `sigma_i`
/// to the first other letter.
pub fn generator_leaf_action(n: usize, i: usize, m: usize) -> Permutation {
    let count = n.pow(m as u32);
    let s = sigma_pow(n, i, 1);
    let target = i - 1;
    let mut images = Vec::with_capacity(count);
    let mut digits = vec![0usize; m];
    for idx in 0..count {
        let mut rem = idx;
        for slot in digits.iter_mut().rev() {
            *slot = rem % n;
            rem /= n;
        }
        if let Some(pos) = digits.iter().position(|&x| x != target) {
            digits[pos] = s.image0(digits[pos]);
        }
        images.push(digits.iter().fold(0usize, |acc, &x| acc * n + x) as u32);
    }
    Permutation::from_raw(images)
}

/// Permutation of the `n^m` level-`m` vertices induced by `w`.
pub fn leaf_action(w: &GeneratorWord, m: usize) -> Result<Permutation> {
    if m == 0 {
        return Err(Error::Precondition("leaf actions start at level 1".into()));
    }
    Ok(LevelAction::new(w.n(), m).word(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_vertex, parse_word};
    use crate::perm::sigma;

    fn w(n: usize, s: &str) -> GeneratorWord {
        parse_word(n, s).unwrap()
    }

    fn v(n: usize, s: &str) -> Vertex {
        parse_vertex(n, s).unwrap()
    }

    #[test]
    fn decompose_generator() {
        let d = decompose(&w(4, "a1"));
        assert_eq!(d.root, sigma(4, 1).unwrap());
        assert_eq!(d.states[0], w(4, "a1"));
        assert!(d.states[1..].iter().all(GeneratorWord::is_empty));
    }

    #[test]
    fn decompose_empty() {
        assert_eq!(
            decompose(&GeneratorWord::identity(5)),
            WreathDecomposition::identity(5)
        );
    }

    #[test]
    fn decompose_product() {
        let d = decompose(&w(4, "a1*a2"));
        assert_eq!(d.states, vec![w(4, "a1"), w(4, "1"), w(4, "1"), w(4, "a2")]);
        assert_eq!(d.root, sigma(4, 1).unwrap().then(&sigma(4, 2).unwrap()));
    }

    #[test]
    fn decompose_is_a_homomorphism() {
        let u = w(5, "a1*a3^2*a4^-1*a2");
        let v = w(5, "a5*a1^3*a2*a3");
        let lhs = decompose(&u.mul(&v)).canonical();
        let rhs = decompose(&u).mul(&decompose(&v)).canonical();
        assert_eq!(lhs, rhs);
        let inv = decompose(&u).inverse().canonical();
        assert_eq!(inv, decompose(&u.inverse()).canonical());
    }

    #[test]
    fn states_at_vertices() {
        assert_eq!(state_at(&w(4, "a1"), &v(4, "1")).unwrap(), w(4, "a1"));
        assert!(state_at(&w(4, "a1"), &v(4, "2")).unwrap().is_empty());
        assert_eq!(state_at(&w(4, "a1*a2"), &v(4, "4")).unwrap(), w(4, "a2"));
        assert_eq!(
            state_at(&w(4, "a1*a2"), &Vertex::root()).unwrap(),
            w(4, "a1*a2")
        );
        let bad = Vertex { letters: vec![7] };
        assert!(state_at(&w(4, "a1"), &bad).is_err());
    }

    #[test]
    fn act_examples() {
        assert_eq!(act(&w(3, "a1"), &v(3, "11")).unwrap(), v(3, "11"));
        assert_eq!(act(&w(3, "a1"), &v(3, "12")).unwrap(), v(3, "13"));
        assert_eq!(
            act(&GeneratorWord::identity(3), &v(3, "231")).unwrap(),
            v(3, "231")
        );
    }

    #[test]
    fn portrait_examples() {
        let p = portrait(&w(3, "a2"), 2).unwrap();
        let s2 = sigma(3, 2).unwrap();
        let id = Permutation::identity(3);
        assert_eq!(p.label(&Vertex::root()), Some(&s2));
        assert_eq!(p.label(&v(3, "2")), Some(&s2));
        assert_eq!(p.label(&v(3, "1")), Some(&id));
        assert_eq!(p.label(&v(3, "3")), Some(&id));
        let e = portrait(&GeneratorWord::identity(4), 3).unwrap();
        assert!(e.labels().all(|(_, l)| l.is_identity()));
        let sq = portrait(&w(3, "a1*a1"), 1).unwrap();
        assert!(sq.label(&Vertex::root()).unwrap().is_identity());
        assert!(portrait(&w(3, "a1"), 0).is_err());
    }

    #[test]
    fn leaf_action_examples() {
        assert_eq!(leaf_action(&w(4, "a1"), 1).unwrap(), sigma(4, 1).unwrap());
        let x = w(5, "a1*a3^2*a4");
        assert!(leaf_action(&x.mul(&x.inverse()), 3).unwrap().is_identity());
        // a_1 on level 2 of the ternary tree, vertex by vertex through act()
        let p = leaf_action(&w(3, "a1"), 2).unwrap();
        let expected = [
            ("11", "11"),
            ("12", "13"),
            ("13", "12"),
            ("21", "31"),
            ("22", "32"),
            ("23", "33"),
            ("31", "21"),
            ("32", "22"),
            ("33", "23"),
        ];
        for (from, to) in expected {
            let i = v(3, from).level_index(3);
            assert_eq!(Vertex::from_level_index(3, 2, p.image0(i)), v(3, to));
            assert_eq!(act(&w(3, "a1"), &v(3, from)).unwrap(), v(3, to));
        }
    }

    #[test]
    fn leaf_action_routes_agree() {
        let words = ["a1*a2^-1*a3", "[a1,a2]", "a4^2*a1*a3*a2^-1*a4", "(a1*a2)^5"];
        for text in words {
            let x = w(4, text);
            for m in 1..=3 {
                let hom = leaf_action(&x, m).unwrap();
                let from_portrait = portrait(&x, m).unwrap().leaf_action();
                let from_decomp = decompose(&x).leaf_action(m);
                assert_eq!(hom, from_portrait, "{text} level {m}");
                assert_eq!(hom, from_decomp, "{text} level {m}");
                for idx in 0..hom.degree() {
                    let vert = Vertex::from_level_index(4, m, idx);
                    let image = act(&x, &vert).unwrap();
                    assert_eq!(image.level_index(4), hom.image0(idx));
                }
            }
        }
    }

    #[test]
    fn constant_portraits_and_shift() {
        let lam = constant_portrait(&omega(3), 2).unwrap();
        assert!(lam.labels().all(|(_, l)| *l == omega(3)));
        assert_eq!(lam.labels().count(), 4);
        let triv = constant_portrait(&Permutation::identity(4), 3).unwrap();
        assert!(triv.leaf_action().is_identity());
        for n in 3..=6 {
            let lam = shift_leaf_action(n, 2).unwrap();
            for i in 1..=n {
                let a = GeneratorWord::generator(n, i).unwrap();
                let conj = leaf_action(&a, 2).unwrap().conjugate_by(&lam);
                assert_eq!(
                    conj,
                    leaf_action(&a.shift(), 2).unwrap(),
                    "n = {n}, i = {i}"
                );
            }
        }
    }

    #[test]
    fn vertex_display_and_index() {
        assert_eq!(v(4, "132").to_string(), "132");
        assert_eq!(parse_vertex(12, "1.10.3").unwrap().to_string(), "1.10.3");
        assert_eq!(Vertex::root().to_string(), "∅");
        let x = v(4, "321");
        assert_eq!(Vertex::from_level_index(4, 3, x.level_index(4)), x);
    }
}
