//! Exponent-sum invariants.
//!
//! The abelianization of `G_n` is `(Z/(n-1))^n`, read off from per-generator
//! exponent sums. `epsilon` is the total exponent sum mod `n - 1`; the finite
//! index subgroups `G_n'`, `K_n` (odd `n`), `K_4` and `H_{n,d}` are all kernels
//! of characters built from these sums.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::treeword::{decompose, WreathDecomposition};
use crate::word::GeneratorWord;

/// Image in `(Z/(n-1))^n`, entries in `0..=n-2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianVector {
    #[serde(skip)]
    n: usize,
    entries: Vec<u64>,
}

impl AbelianVector {
    pub fn zero(n: usize) -> Self {
        AbelianVector {
            n,
            entries: vec![0; n],
        }
    }

    pub fn from_sums(n: usize, sums: &[i64]) -> Self {
        let modulus = n as i64 - 1;
        AbelianVector {
            n,
            entries: sums.iter().map(|&s| s.rem_euclid(modulus) as u64).collect(),
        }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &AbelianVector) -> AbelianVector {
        let modulus = self.n as u64 - 1;
        AbelianVector {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + b) % modulus)
                .collect(),
        }
    }

    /// Sum of the entries mod `n - 1`.
    pub fn total(&self) -> u64 {
        self.entries.iter().sum::<u64>() % (self.n as u64 - 1)
    }
}

pub fn abelianize(w: &GeneratorWord) -> AbelianVector {
    AbelianVector::from_sums(w.n(), &w.exponent_sums())
}

/// Sum of the abelianizations of the states; equals the abelianization of the
/// element when the decomposition comes from an element of `G_n`.
pub fn abelianize_states(d: &WreathDecomposition) -> AbelianVector {
    d.states
        .iter()
        .map(abelianize)
        .fold(AbelianVector::zero(d.n()), |acc, v| acc.add(&v))
}

pub fn epsilon(w: &GeneratorWord) -> u64 {
    w.exponent_total().rem_euclid(w.n() as i64 - 1) as u64
}

/// Sum of `epsilon` over the first-level states.
pub fn epsilon1(w: &GeneratorWord) -> u64 {
    let modulus = w.n() as u64 - 1;
    decompose(w).states.iter().map(epsilon).sum::<u64>() % modulus
}

pub fn in_commutator(w: &GeneratorWord) -> bool {
    abelianize(w).is_zero()
}

/// Membership in `K_n = {epsilon even}` for odd `n >= 5`.
pub fn in_kn_odd(w: &GeneratorWord) -> Result<bool> {
    let n = w.n();
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "K_n needs odd n >= 5, got {n}"
        )));
    }
    Ok(epsilon(w).is_multiple_of(2))
}

/// The character `e_1 - e_2 + e_3 - e_4 mod 3` on `G_4`, whose kernel is `K_4`.
pub fn chi4(w: &GeneratorWord) -> Result<u64> {
    if w.n() != 4 {
        return Err(Error::Precondition(format!(
            "chi_4 is defined on G_4, got n = {}",
            w.n()
        )));
    }
    let e = w.exponent_sums();
    Ok((e[0] - e[1] + e[2] - e[3]).rem_euclid(3) as u64)
}

pub fn in_k4(w: &GeneratorWord) -> Result<bool> {
    Ok(chi4(w)? == 0)
}

fn check_hnd(n: usize, d: u64) -> Result<()> {
    if d <= 2 || !(n as u64 - 1).is_multiple_of(d) {
        return Err(Error::Precondition(format!(
            "H_(n,d) needs d > 2 dividing n - 1, got n = {n}, d = {d}"
        )));
    }
    Ok(())
}

/// Membership in `H_{n,d} = {epsilon = 0 mod d}` for `d > 2`, `d | n - 1`.
pub fn in_hnd(w: &GeneratorWord, d: u64) -> Result<bool> {
    check_hnd(w.n(), d)?;
    Ok(epsilon(w).is_multiple_of(d))
}

/// `epsilon` of a decomposition through the states, reduced mod `d`.
pub fn epsilon_of_states_mod(d_elem: &WreathDecomposition, d: u64) -> Result<u64> {
    check_hnd(d_elem.n(), d)?;
    Ok(abelianize_states(d_elem).total() % d)
}

/// The two predicates compared for odd `n >= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityProbe {
    pub epsilon_even: bool,
    pub root_trivial: bool,
    pub root_even: bool,
}

impl ParityProbe {
    /// A trivial root forces an even exponent sum, and the root's sign is `(-1)^epsilon`.
    pub fn consistent(&self) -> bool {
        (!self.root_trivial || self.epsilon_even) && self.root_even == self.epsilon_even
    }
}

/// Predicts first-level stabilizer membership from the parity of `epsilon`.
pub fn stab1_parity_test(w: &GeneratorWord) -> Result<bool> {
    let n = w.n();
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "parity test needs odd n >= 5, got {n}"
        )));
    }
    Ok(epsilon(w).is_multiple_of(2))
}

pub fn parity_probe(w: &GeneratorWord) -> Result<ParityProbe> {
    let epsilon_even = stab1_parity_test(w)?;
    let root = decompose(w).root;
    Ok(ParityProbe {
        epsilon_even,
        root_trivial: root.is_identity(),
        root_even: root.parity().is_even(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;

    fn w(n: usize, s: &str) -> GeneratorWord {
        parse_word(n, s).unwrap()
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(abelianize(&w(4, "a1*a2")).entries(), &[1, 1, 0, 0]);
        assert!(abelianize(&w(4, "a1^3")).is_zero());
        assert!(in_commutator(&w(6, "[a1*a3^2, a2*a5^-1*a1]")));
    }

    #[test]
    fn epsilon_examples() {
        for n in 3..=8 {
            for i in 1..=n {
                assert_eq!(epsilon(&GeneratorWord::generator(n, i).unwrap()), 1);
                assert_eq!(epsilon1(&GeneratorWord::generator(n, i).unwrap()), 1);
            }
            let gens: Vec<usize> = (1..=n).collect();
            let beta = GeneratorWord::product_of(n, &gens).unwrap();
            assert_eq!(epsilon(&beta), 1);
            if n % 2 == 1 {
                assert_eq!(epsilon(&beta.pow(2)), 2 % (n as u64 - 1));
            }
            assert_eq!(epsilon1(&GeneratorWord::identity(n)), 0);
        }
    }

    #[test]
    fn k4_characters() {
        assert!(in_k4(&w(4, "a1*a2")).unwrap());
        assert!(!in_k4(&w(4, "a1")).unwrap());
        for normal_gen in ["a1*a2", "a2*a3", "a3*a4", "a4*a1"] {
            assert!(in_k4(&w(4, normal_gen)).unwrap());
        }
        let image: std::collections::BTreeSet<u64> = (1..=4)
            .map(|i| chi4(&GeneratorWord::generator(4, i).unwrap()).unwrap())
            .chain([0])
            .collect();
        assert_eq!(image.len(), 3);
        assert!(chi4(&w(5, "a1")).is_err());
    }

    #[test]
    fn hnd_membership() {
        let beta2 = GeneratorWord::product_of(5, &[1, 2, 3, 4, 5])
            .unwrap()
            .pow(2);
        assert!(!in_hnd(&beta2, 4).unwrap());
        assert!(in_hnd(&w(5, "a1^4"), 4).unwrap());
        assert!(in_hnd(&w(5, "a1"), 2).is_err());
        assert!(in_hnd(&w(5, "a1"), 3).is_err());
    }

    #[test]
    fn kn_preconditions() {
        assert!(in_kn_odd(&w(5, "a1*a2")).unwrap());
        assert!(!in_kn_odd(&w(5, "a1")).unwrap());
        assert!(in_kn_odd(&w(4, "a1")).is_err());
        assert!(in_kn_odd(&w(3, "a1")).is_err());
    }

    #[test]
    fn parity_probe_examples() {
        let p = parity_probe(&w(5, "a1*a2")).unwrap();
        assert!(p.epsilon_even && p.root_even && !p.root_trivial);
        assert!(p.consistent());
        let q = parity_probe(&w(5, "a1")).unwrap();
        assert!(!q.epsilon_even && !q.root_trivial && !q.root_even);
        assert!(q.consistent());
    }
}
