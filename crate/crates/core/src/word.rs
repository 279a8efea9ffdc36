//! Freely reduced words in the generators `a_1, ..., a_n`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{check_alphabet, Error, Result};

/// One syllable `a_gen^exp`, `gen` 1-based, `exp != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: u16,
    pub exp: i64,
}

/// A freely reduced word over `a_1, ..., a_n`: adjacent syllables use distinct
/// generators and no exponent is zero. `len()` counts syllables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorWord {
    n: usize,
    syllables: Vec<Syllable>,
}

impl GeneratorWord {
    pub fn identity(n: usize) -> Self {
        GeneratorWord {
            n,
            syllables: Vec::new(),
        }
    }

    pub fn generator(n: usize, i: usize) -> Result<Self> {
        Self::power(n, i, 1)
    }

    pub fn power(n: usize, i: usize, exp: i64) -> Result<Self> {
        Self::from_syllables(n, [(i, exp)])
    }

    /// Builds a word from `(generator, exponent)` pairs, freely reducing as it goes.
    pub fn from_syllables<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        check_alphabet(n)?;
        let mut w = GeneratorWord::identity(n);
        for (gen, exp) in pairs {
            if gen == 0 || gen > n {
                return Err(Error::GeneratorOutOfRange { n, index: gen });
            }
            w.push(gen as u16, exp);
        }
        Ok(w)
    }

    /// Product `a_1 a_2 ... a_n`-style words from a list of generator indices.
    pub fn product_of(n: usize, gens: &[usize]) -> Result<Self> {
        Self::from_syllables(n, gens.iter().map(|&g| (g, 1)))
    }

    /// Appends `a_gen^exp`, merging with (and possibly cancelling) the last syllable.
    pub(crate) fn push(&mut self, gen: u16, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.gen == gen => {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(Syllable { gen, exp }),
        }
    }

    /// Like [`push`](Self::push) but keeps exponents reduced into `1..=n-2`.
    pub(crate) fn push_canonical(&mut self, gen: u16, exp: i64) {
        let order = self.n as i64 - 1;
        let mut e = exp.rem_euclid(order);
        if e == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.gen == gen {
                e = (last.exp + e).rem_euclid(order);
                if e == 0 {
                    self.syllables.pop();
                } else {
                    last.exp = e;
                }
                return;
            }
        }
        self.syllables.push(Syllable { gen, exp: e });
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Syllable count `|w|`.
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Exponents reduced mod `n - 1` into `1..=n-2`; the same element of `G_n`
    /// since every generator has order `n - 1`.
    pub fn canonical(&self) -> GeneratorWord {
        let mut out = GeneratorWord::identity(self.n);
        for s in &self.syllables {
            out.push_canonical(s.gen, s.exp);
        }
        out
    }

    pub fn is_canonical(&self) -> bool {
        let order = self.n as i64 - 1;
        self.syllables.iter().all(|s| s.exp > 0 && s.exp < order)
    }

    fn check_same_alphabet(&self, other: &GeneratorWord) -> Result<()> {
        if self.n != other.n {
            Err(Error::AlphabetMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    /// Concatenation `self * other`; panics if the alphabets differ (see [`try_mul`](Self::try_mul)).
    pub fn mul(&self, other: &GeneratorWord) -> GeneratorWord {
        self.try_mul(other).expect("alphabet mismatch")
    }

    pub fn try_mul(&self, other: &GeneratorWord) -> Result<GeneratorWord> {
        self.check_same_alphabet(other)?;
        let mut out = self.clone();
        for s in &other.syllables {
            out.push(s.gen, s.exp);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> GeneratorWord {
        GeneratorWord {
            n: self.n,
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    gen: s.gen,
                    exp: -s.exp,
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: i64) -> GeneratorWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = GeneratorWord::identity(self.n);
        for _ in 0..k.unsigned_abs() {
            for s in &base.syllables {
                out.push(s.gen, s.exp);
            }
        }
        out
    }

    /// `by^{-1} self by`.
    pub fn conjugate(&self, by: &GeneratorWord) -> GeneratorWord {
        by.inverse().mul(self).mul(by)
    }

    /// `[u, v] = u^{-1} v^{-1} u v`.
    pub fn commutator(u: &GeneratorWord, v: &GeneratorWord) -> GeneratorWord {
        u.inverse().mul(&v.inverse()).mul(u).mul(v)
    }

    /// Per-generator exponent sums (index `i - 1` for `a_i`), not reduced.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.n];
        for s in &self.syllables {
            sums[s.gen as usize - 1] += s.exp;
        }
        sums
    }

    pub fn exponent_total(&self) -> i64 {
        self.syllables.iter().map(|s| s.exp).sum()
    }

    /// Image under conjugation by the shift automorphism: `a_i -> a_{i+1}`, `a_n -> a_1`.
    pub fn shift(&self) -> GeneratorWord {
        let n = self.n as u16;
        GeneratorWord {
            n: self.n,
            syllables: self
                .syllables
                .iter()
                .map(|s| Syllable {
                    gen: s.gen % n + 1,
                    exp: s.exp,
                })
                .collect(),
        }
    }

    pub fn shift_by(&self, times: usize) -> GeneratorWord {
        (0..times % self.n).fold(self.clone(), |w, _| w.shift())
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (k, s) in self.syllables.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if s.exp == 1 {
                write!(f, "a{}", s.gen)?;
            } else {
                write!(f, "a{}^{}", s.gen, s.exp)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratorWord[n={}]({})", self.n, self)
    }
}

impl Serialize for GeneratorWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, pairs: &[(usize, i64)]) -> GeneratorWord {
        GeneratorWord::from_syllables(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn free_reduction_cascades() {
        let x = w(4, &[(1, 2), (2, 1), (2, -1), (1, -2), (3, 1)]);
        assert_eq!(x.syllables(), &[Syllable { gen: 3, exp: 1 }]);
        let y = w(4, &[(1, 1), (1, 1)]);
        assert_eq!(y.len(), 1);
        assert_eq!(y.syllables()[0].exp, 2);
    }

    #[test]
    fn canonical_reduces_exponents() {
        let x = w(4, &[(1, 3), (2, -1), (1, 4)]);
        let c = x.canonical();
        assert_eq!(c.to_string(), "a2^2*a1");
        assert!(c.is_canonical());
        // a1^3 vanishes, then a1 * a1^2 = a1^3 vanishes too
        let y = w(4, &[(1, 1), (2, 3), (1, 2)]).canonical();
        assert!(y.is_empty());
    }

    #[test]
    fn inverse_and_mul() {
        let x = w(5, &[(1, 1), (3, -2), (5, 1)]);
        assert!(x.mul(&x.inverse()).is_empty());
        assert_eq!(x.pow(0), GeneratorWord::identity(5));
        assert_eq!(x.pow(-1), x.inverse());
        assert!(x.try_mul(&GeneratorWord::identity(4)).is_err());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(w(4, &[(1, 1)]).shift(), w(4, &[(2, 1)]));
        let x = w(5, &[(5, 1), (1, 2)]);
        assert_eq!(x.shift(), w(5, &[(1, 1), (2, 2)]));
        assert_eq!(x.shift_by(5), x);
    }

    #[test]
    fn rejects_out_of_range_generators() {
        assert!(GeneratorWord::from_syllables(4, [(5, 1)]).is_err());
        assert!(GeneratorWord::from_syllables(4, [(0, 1)]).is_err());
        assert!(GeneratorWord::generator(2, 1).is_err());
    }

    #[test]
    fn display_format() {
        assert_eq!(
            w(4, &[(1, 1), (2, -1), (3, 2)]).to_string(),
            "a1*a2^-1*a3^2"
        );
        assert_eq!(GeneratorWord::identity(4).to_string(), "1");
    }
}
