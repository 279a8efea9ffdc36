//! Text syntax for words and vertices.
//!
//! Words: `a1*a2^-1*a3^2`, with `*` optional between factors. `[u,v]` is the
//! commutator `u^-1 v^-1 u v`, `u^v` is the conjugate `v^-1 u v` and `u^-v`
//! conjugates `u^-1`. Parentheses group, braces may wrap an exponent
//! (`a3^{-a1}`), and `1` or `e` is the identity.
//!
//! Vertices: digit strings (`132`) when `n <= 9`, dot-separated letters
//! (`1.10.3`) otherwise; the empty string, `e` and `∅` denote the root.

use crate::error::{check_alphabet, Error, Result};
use crate::treeword::Vertex;
use crate::word::GeneratorWord;

pub fn parse_word(n: usize, text: &str) -> Result<GeneratorWord> {
    check_alphabet(n)?;
    let mut p = Parser {
        n,
        src: text.as_bytes(),
        pos: 0,
    };
    let w = p.product()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(w)
}

struct Parser<'a> {
    n: usize,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "number too large".into(),
            })
    }

    fn product(&mut self) -> Result<GeneratorWord> {
        let mut w = GeneratorWord::identity(self.n);
        let mut first = true;
        loop {
            match self.peek() {
                None | Some(b')') | Some(b']') | Some(b',') | Some(b'}') => {
                    if first {
                        return Err(self.error("expected a word"));
                    }
                    return Ok(w);
                }
                Some(b'*') if !first => {
                    self.pos += 1;
                }
                _ => {}
            }
            let f = self.factor()?;
            w = w.mul(&f);
            first = false;
        }
    }

    fn factor(&mut self) -> Result<GeneratorWord> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            base = self.power(base)?;
        }
        Ok(base)
    }

    fn power(&mut self, base: GeneratorWord) -> Result<GeneratorWord> {
        let braced = self.peek() == Some(b'{');
        if braced {
            self.pos += 1;
        }
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let base = if negative { base.inverse() } else { base };
        let out = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let k = self.integer()?;
                base.pow(k)
            }
            Some(_) => {
                let by = if braced {
                    self.product()?
                } else {
                    self.atom()?
                };
                base.conjugate(&by)
            }
            None => return Err(self.error("expected an exponent")),
        };
        if braced {
            self.expect(b'}')?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<GeneratorWord> {
        match self.peek() {
            Some(b'a') => {
                self.pos += 1;
                let start = self.pos;
                let i = self.integer()? as usize;
                if i == 0 || i > self.n {
                    return Err(Error::Parse {
                        offset: start,
                        message: format!("generator a{i} out of range for n = {}", self.n),
                    });
                }
                GeneratorWord::generator(self.n, i)
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.product()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.product()?;
                self.expect(b',')?;
                let v = self.product()?;
                self.expect(b']')?;
                Ok(GeneratorWord::commutator(&u, &v))
            }
            Some(b'1') | Some(b'e') => {
                self.pos += 1;
                Ok(GeneratorWord::identity(self.n))
            }
            Some(_) => Err(self.error("expected a generator, '(', '[' or '1'")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

pub fn parse_vertex(n: usize, text: &str) -> Result<Vertex> {
    check_alphabet(n)?;
    let t = text.trim();
    if t.is_empty() || t == "e" || t == "∅" {
        return Ok(Vertex::root());
    }
    let letters: Vec<usize> = if t.contains('.') || n > 9 {
        t.split('.')
            .map(|s| {
                s.trim().parse::<usize>().map_err(|_| Error::Parse {
                    offset: 0,
                    message: format!("bad vertex letter {s:?}"),
                })
            })
            .collect::<Result<_>>()?
    } else {
        t.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Parse {
                        offset: 0,
                        message: format!("bad vertex letter {c:?}"),
                    })
            })
            .collect::<Result<_>>()?
    };
    Vertex::new(n, letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, pairs: &[(usize, i64)]) -> GeneratorWord {
        GeneratorWord::from_syllables(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn plain_words() {
        assert_eq!(
            parse_word(4, "a1*a2^-1*a3^2").unwrap(),
            w(4, &[(1, 1), (2, -1), (3, 2)])
        );
        assert_eq!(parse_word(4, "a1 a2").unwrap(), w(4, &[(1, 1), (2, 1)]));
        assert_eq!(parse_word(4, "1").unwrap(), GeneratorWord::identity(4));
        assert_eq!(
            parse_word(4, "(a1*a2)^2").unwrap(),
            w(4, &[(1, 1), (2, 1), (1, 1), (2, 1)])
        );
    }

    #[test]
    fn commutators_and_conjugates() {
        let a1 = w(5, &[(1, 1)]);
        let a2 = w(5, &[(2, 1)]);
        assert_eq!(
            parse_word(5, "[a1,a2]").unwrap(),
            GeneratorWord::commutator(&a1, &a2)
        );
        assert_eq!(parse_word(5, "a1^a2").unwrap(), a1.conjugate(&a2));
        assert_eq!(
            parse_word(5, "a1^-a2").unwrap(),
            a1.inverse().conjugate(&a2)
        );
        assert_eq!(
            parse_word(5, "a3^{-a1}").unwrap(),
            parse_word(5, "a3^-a1").unwrap()
        );
        assert_eq!(
            parse_word(5, "a1^{a2^-1}").unwrap(),
            a1.conjugate(&a2.inverse())
        );
        assert_eq!(parse_word(5, "a2^{-1}").unwrap(), a2.inverse());
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(parse_word(4, "a5"), Err(Error::Parse { .. })));
        assert!(matches!(parse_word(4, "a1*"), Err(Error::Parse { .. })));
        assert!(matches!(parse_word(4, "[a1 a2]"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_word(4, "b1"),
            Err(Error::Parse { offset: 0, .. })
        ));
        assert!(matches!(parse_word(4, ""), Err(Error::Parse { .. })));
    }

    #[test]
    fn vertices() {
        assert_eq!(parse_vertex(4, "132").unwrap().letters(), &[1, 3, 2]);
        assert_eq!(parse_vertex(12, "1.10.3").unwrap().letters(), &[1, 10, 3]);
        assert!(parse_vertex(4, "").unwrap().is_root());
        assert!(parse_vertex(4, "15").is_err());
    }
}
