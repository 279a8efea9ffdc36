//! Seeded word generators and exhaustive enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::GeneratorWord;

pub const DEFAULT_SEED: u64 = 0x6e5f_6861_6e6f_6921;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Canonical word with exactly `len` syllables.
pub fn random_canonical_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> GeneratorWord {
    let mut pairs = Vec::with_capacity(len);
    let mut prev = 0usize;
    for _ in 0..len {
        let g = if prev == 0 {
            rng.gen_range(1..=n)
        } else {
            // uniform over the n - 1 generators other than the previous one
            let g = rng.gen_range(1..n);
            if g >= prev {
                g + 1
            } else {
                g
            }
        };
        let e = rng.gen_range(1..=n as i64 - 2);
        pairs.push((g, e));
        prev = g;
    }
    GeneratorWord::from_syllables(n, pairs).expect("generated in range")
}

/// `count` canonical words with lengths drawn from `min_len..=max_len`.
pub fn random_canonical_words(
    seed: u64,
    n: usize,
    count: usize,
    min_len: usize,
    max_len: usize,
) -> Vec<GeneratorWord> {
    let mut r = rng(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..count)
        .map(|_| {
            let len = r.gen_range(min_len..=max_len);
            random_canonical_word(&mut r, n, len)
        })
        .collect()
}

/// All freely reduced words with at most `max_len` syllables whose exponents are drawn from `exps`.
pub fn all_words(n: usize, max_len: usize, exps: &[i64]) -> Vec<GeneratorWord> {
    let mut out = vec![GeneratorWord::identity(n)];
    let mut frontier: Vec<Vec<(usize, i64)>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            let last = prefix.last().map(|&(g, _)| g);
            for g in (1..=n).filter(|&g| Some(g) != last) {
                for &e in exps {
                    let mut w = prefix.clone();
                    w.push((g, e));
                    next.push(w);
                }
            }
        }
        out.extend(
            next.iter()
                .map(|p| GeneratorWord::from_syllables(n, p.iter().copied()).expect("in range")),
        );
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_words_are_canonical_with_requested_length() {
        for n in 3..=8 {
            for w in random_canonical_words(7, n, 200, 1, 12) {
                assert!(w.is_canonical());
                assert!((1..=12).contains(&w.len()));
            }
        }
    }

    #[test]
    fn seeds_reproduce() {
        assert_eq!(
            random_canonical_words(11, 5, 50, 2, 9),
            random_canonical_words(11, 5, 50, 2, 9)
        );
    }

    #[test]
    fn exhaustive_counts() {
        // 1 + 8 + 8*6 + 8*36 + 8*216
        assert_eq!(all_words(4, 4, &[1, -1]).len(), 1 + 8 + 48 + 288 + 1728);
        assert_eq!(all_words(5, 2, &[1]).len(), 1 + 5 + 20);
    }
}
