//! Property sweeps over random and exhaustive word samples.
//!
//! Every sweep evaluates an independent predicate per sample, so the work is
//! spread with [`Exec`]; outcomes are identical in both modes.

use rand::Rng;
use serde::Serialize;

use crate::abelian::{abelianize, abelianize_states, epsilon, epsilon1};
use crate::error::{check_alphabet, Error, Result};
use crate::par::Exec;
use crate::permgroup::StabilizerChain;
use crate::random::{all_words, random_canonical_word, rng};
use crate::treeword::{decompose, LevelAction, WreathDecomposition};
use crate::word::GeneratorWord;
use crate::wordproblem::{is_identity, is_identity_by_leaf_actions};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepOutcome {
    pub property: &'static str,
    pub n: usize,
    pub samples: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn tally<F>(
    property: &'static str,
    n: usize,
    samples: &[GeneratorWord],
    exec: Exec,
    ok: F,
) -> SweepOutcome
where
    F: Fn(&GeneratorWord) -> bool + Sync + Send,
{
    let flags = exec.map(samples, ok);
    let violations = flags.iter().filter(|&&f| !f).count();
    SweepOutcome {
        property,
        n,
        samples: samples.len(),
        violations,
        first_violation: flags
            .iter()
            .position(|&f| !f)
            .map(|i| samples[i].to_string()),
    }
}

fn seeded_words(
    seed: u64,
    n: usize,
    count: usize,
    min_len: usize,
    max_len: usize,
) -> Vec<GeneratorWord> {
    let mut r = rng(seed ^ ((n as u64) << 32));
    (0..count)
        .map(|_| {
            let len = r.gen_range(min_len..=max_len);
            random_canonical_word(&mut r, n, len)
        })
        .collect()
}

/// Every state of a canonical word of length `L >= 2` has canonical length at most `(L + 1) / 2`.
pub fn contraction(n: usize, count: usize, seed: u64, exec: Exec) -> Result<SweepOutcome> {
    check_alphabet(n)?;
    let words = seeded_words(seed, n, count, 2, 40);
    Ok(tally("contraction", n, &words, exec, |w| {
        let bound = w.len().div_ceil(2);
        decompose(w)
            .states
            .iter()
            .all(|s| s.canonical().len() <= bound)
    }))
}

/// `epsilon = epsilon1` on random words.
pub fn epsilon_equiv(n: usize, count: usize, seed: u64, exec: Exec) -> Result<SweepOutcome> {
    check_alphabet(n)?;
    let words = seeded_words(seed.wrapping_add(1), n, count, 0, 30);
    Ok(tally("epsilon_equiv", n, &words, exec, |w| {
        epsilon(w) == epsilon1(w)
    }))
}

/// Per-generator exponent sums are conserved by the decomposition.
pub fn conservation(n: usize, count: usize, seed: u64, exec: Exec) -> Result<SweepOutcome> {
    check_alphabet(n)?;
    let words = seeded_words(seed.wrapping_add(2), n, count, 0, 30);
    Ok(tally("exponent_conservation", n, &words, exec, |w| {
        abelianize_states(&decompose(w)) == abelianize(w)
    }))
}

fn oracle_agrees(w: &GeneratorWord) -> bool {
    is_identity(w) == is_identity_by_leaf_actions(w)
}

/// The contraction algorithm against depth-bounded leaf-action triviality on every
/// reduced word of at most `max_len` syllables with exponents from `exps`.
pub fn oracle_exhaustive(
    n: usize,
    max_len: usize,
    exps: &[i64],
    exec: Exec,
) -> Result<SweepOutcome> {
    check_alphabet(n)?;
    let words = all_words(n, max_len, exps);
    Ok(tally(
        "wordproblem_oracle_exhaustive",
        n,
        &words,
        exec,
        oracle_agrees,
    ))
}

/// Same comparison on random words with exponents `±1`. Every other sample is a
/// conjugated relator `w u a_i^{n-1} u^-1 w^-1`, so both answers get exercised.
pub fn oracle_random(
    n: usize,
    count: usize,
    max_len: usize,
    seed: u64,
    exec: Exec,
) -> Result<SweepOutcome> {
    check_alphabet(n)?;
    let mut r = rng(seed.wrapping_add(3) ^ ((n as u64) << 32));
    let unit_word = |r: &mut rand_chacha::ChaCha8Rng, len: usize| {
        let pairs: Vec<(usize, i64)> = (0..len)
            .map(|_| (r.gen_range(1..=n), if r.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        GeneratorWord::from_syllables(n, pairs).expect("in range")
    };
    let mut words = Vec::with_capacity(count);
    for k in 0..count {
        let len = r.gen_range(1..=max_len);
        let w = unit_word(&mut r, len);
        if k % 2 == 0 {
            words.push(w);
        } else {
            let u = unit_word(&mut r, len.min(2));
            let g = GeneratorWord::power(n, r.gen_range(1..=n), n as i64 - 1).expect("in range");
            words.push(w.mul(&u).mul(&g).mul(&u.inverse()).mul(&w.inverse()));
        }
    }
    Ok(tally(
        "wordproblem_oracle_random",
        n,
        &words,
        exec,
        oracle_agrees,
    ))
}

/// First-level stabilizer versus exponent-sum parity for odd `n >= 5`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParitySweep {
    pub n: usize,
    pub words: usize,
    /// Words with trivial root but odd `epsilon`.
    pub necessity_violations: usize,
    /// Words whose root sign differs from `(-1)^epsilon`.
    pub sign_violations: usize,
    /// Words where "root trivial" and "`epsilon` even" disagree.
    pub biconditional_disagreements: usize,
    pub first_disagreement: Option<String>,
    /// Tuples `(g_1, ..., g_n)_1` compared at level 2.
    pub tuples: usize,
    /// Tuples where "sum of `epsilon(g_i)` even" differs from membership of the level-2 image.
    pub tuple_violations: usize,
}

impl ParitySweep {
    /// Both directions in the form they hold: stabilizer elements have even
    /// `epsilon`, and even-sum tuples are stabilizer elements.
    pub fn stabilizer_characterized(&self) -> bool {
        self.necessity_violations == 0 && self.sign_violations == 0 && self.tuple_violations == 0
    }
}

pub fn parity(
    n: usize,
    max_len: usize,
    random_count: usize,
    tuple_count: usize,
    seed: u64,
    exec: Exec,
) -> Result<ParitySweep> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "parity sweep needs odd n >= 5, got {n}"
        )));
    }
    let exps: Vec<i64> = (1..=n as i64 - 2).collect();
    let mut words = all_words(n, max_len, &exps);
    words.extend(seeded_words(seed.wrapping_add(4), n, random_count, 0, 24));
    // (epsilon even, root trivial, root even)
    let probes = exec.map(&words, |w| {
        let root = decompose(w).root;
        (
            epsilon(w).is_multiple_of(2),
            root.is_identity(),
            root.parity().is_even(),
        )
    });
    let necessity_violations = probes.iter().filter(|p| p.1 && !p.0).count();
    let sign_violations = probes.iter().filter(|p| p.2 != p.0).count();
    let disagree: Vec<usize> = (0..probes.len())
        .filter(|&i| probes[i].0 != probes[i].1)
        .collect();

    let level = LevelAction::new(n, 2);
    let chain = StabilizerChain::new(level.degree(), &level.generators())?;
    let mut r = rng(seed.wrapping_add(5) ^ ((n as u64) << 32));
    let tuples: Vec<Vec<GeneratorWord>> = (0..tuple_count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let len = r.gen_range(0..=3);
                    random_canonical_word(&mut r, n, len)
                })
                .collect()
        })
        .collect();
    let tuple_ok = exec.map(&tuples, |states| {
        let even = states.iter().map(epsilon).sum::<u64>() % 2 == 0;
        let image = WreathDecomposition::stabilizing(states.clone()).leaf_action(2);
        chain
            .contains(&image)
            .map(|inside| inside == even)
            .unwrap_or(false)
    });

    Ok(ParitySweep {
        n,
        words: words.len(),
        necessity_violations,
        sign_violations,
        biconditional_disagreements: disagree.len(),
        first_disagreement: disagree.first().map(|&i| words[i].to_string()),
        tuples: tuples.len(),
        tuple_violations: tuple_ok.iter().filter(|&&ok| !ok).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass_in_both_modes() {
        for exec in [Exec::Parallel, Exec::Sequential] {
            assert!(contraction(5, 300, 1, exec).unwrap().passed());
            assert!(epsilon_equiv(4, 200, 1, exec).unwrap().passed());
            assert!(conservation(6, 200, 1, exec).unwrap().passed());
            assert!(oracle_exhaustive(4, 2, &[1, -1], exec).unwrap().passed());
        }
        assert_eq!(
            contraction(3, 100, 9, Exec::Parallel).unwrap(),
            contraction(3, 100, 9, Exec::Sequential).unwrap()
        );
    }

    #[test]
    fn random_oracle_sees_trivial_words() {
        let out = oracle_random(5, 200, 4, 2, Exec::Parallel).unwrap();
        assert!(out.passed());
    }

    #[test]
    fn parity_directions() {
        let p = parity(5, 2, 300, 50, 3, Exec::Parallel).unwrap();
        assert!(p.stabilizer_characterized());
        // a1*a2 has even epsilon and a nontrivial (even) root
        assert!(p.biconditional_disagreements > 0);
        assert!(parity(6, 1, 1, 1, 0, Exec::Sequential).is_err());
    }
}
