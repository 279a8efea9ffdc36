//! Deciding triviality in `G_n` by contraction.
//!
//! A canonical word of syllable length at least 2 decomposes into states of
//! length at most `(|w| + 1) / 2`, so recursing on the states terminates. A
//! nontrivial root permutation anywhere answers "not the identity"; a
//! canonical word of length 1 is a nontrivial generator power.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::treeword::{decompose, leaf_action};
use crate::word::GeneratorWord;

pub fn is_identity(w: &GeneratorWord) -> bool {
    let mut memo = HashMap::new();
    resolve(&w.canonical(), &mut memo)
}

fn resolve(w: &GeneratorWord, memo: &mut HashMap<GeneratorWord, bool>) -> bool {
    match w.len() {
        0 => return true,
        // canonical exponents are never multiples of n - 1
        1 => return false,
        _ => {}
    }
    if let Some(&known) = memo.get(w) {
        return known;
    }
    let d = decompose(w);
    let answer = d.root.is_identity() && d.states.iter().all(|s| resolve(&s.canonical(), memo));
    memo.insert(w.clone(), answer);
    answer
}

pub fn are_equal(u: &GeneratorWord, v: &GeneratorWord) -> Result<bool> {
    Ok(is_identity(&u.try_mul(&v.inverse())?))
}

/// Default search bound for [`element_order`]: `4 (n - 1)^2`.
pub fn default_order_bound(n: usize) -> u64 {
    4 * (n as u64 - 1).pow(2)
}

/// Least `k <= bound` with `w^k = 1`, or `None`.
pub fn element_order(w: &GeneratorWord, bound: u64) -> Result<Option<u64>> {
    if bound == 0 {
        return Err(Error::Precondition("order bound must be positive".into()));
    }
    let base = w.canonical();
    let mut power = base.clone();
    for k in 1..=bound {
        if is_identity(&power) {
            return Ok(Some(k));
        }
        power = power.mul(&base).canonical();
    }
    Ok(None)
}

/// Depth after which every state of `w` lies in the nucleus, plus one level of
/// margin: `ceil(log2 |w|) + 2`.
pub fn oracle_depth(w: &GeneratorWord) -> usize {
    let len = w.canonical().len().max(1);
    (usize::BITS - (len - 1).leading_zeros()) as usize + 2
}

/// Triviality decided by the leaf actions on levels `1..=oracle_depth(w)`.
pub fn is_identity_by_leaf_actions(w: &GeneratorWord) -> bool {
    let depth = oracle_depth(w);
    // the level-m action determines every coarser level
    leaf_action(w, depth)
        .map(|p| p.is_identity())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;

    fn w(n: usize, s: &str) -> GeneratorWord {
        parse_word(n, s).unwrap()
    }

    #[test]
    fn generator_powers() {
        for n in 3..=8 {
            let a = GeneratorWord::power(n, 1, n as i64 - 1).unwrap();
            assert!(is_identity(&a), "n = {n}");
            assert!(!is_identity(&GeneratorWord::generator(n, 1).unwrap()));
        }
    }

    #[test]
    fn commutator_is_nontrivial() {
        let c = w(4, "[a1,a2]");
        assert!(!is_identity(&c));
        assert!(!leaf_action(&c, 2).unwrap().is_identity());
    }

    #[test]
    fn branching_identity_holds_in_g5() {
        let lhs = w(5, "[(a1*a4^-1)^2,(a2*a4^-1)^2]");
        let d = decompose(&lhs);
        assert!(d.root.is_identity());
        assert!(are_equal(&d.states[0], &w(5, "[a1,a2]")).unwrap());
        assert!(d.states[1..].iter().all(is_identity));
    }

    #[test]
    fn equality() {
        let x = w(5, "a1*a3^-2*a2");
        assert!(are_equal(&x, &x).unwrap());
        assert!(!are_equal(&w(4, "a1"), &w(4, "a2")).unwrap());
        for n in 3..=8 {
            let a = GeneratorWord::generator(n, 1).unwrap();
            assert!(are_equal(&a.pow(n as i64), &a).unwrap());
        }
        assert!(are_equal(&w(4, "a1"), &w(5, "a1")).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(element_order(&w(5, "a1"), 100).unwrap(), Some(4));
        assert_eq!(element_order(&w(4, "a1*a2"), 100).unwrap(), Some(6));
        assert_eq!(
            element_order(&GeneratorWord::identity(4), 1).unwrap(),
            Some(1)
        );
        assert_eq!(element_order(&w(4, "a1*a2"), 5).unwrap(), None);
        assert!(element_order(&w(4, "a1"), 0).is_err());
        assert_eq!(default_order_bound(4), 36);
    }

    #[test]
    fn oracle_depth_values() {
        assert_eq!(oracle_depth(&w(4, "a1")), 2);
        assert_eq!(oracle_depth(&w(4, "a1*a2")), 3);
        assert_eq!(oracle_depth(&w(4, "a1*a2*a3")), 4);
        assert_eq!(oracle_depth(&w(4, "a1*a2*a3*a4")), 4);
        assert_eq!(oracle_depth(&w(4, "a1*a2*a3*a4*a1")), 5);
    }
}
