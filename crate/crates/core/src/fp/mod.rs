//! Finitely presented groups: presentations, coset enumeration and
//! low-index subgroup search.
//!
//! Words are sequences of letters; generator `g` is letter `2g` and its
//! inverse is letter `2g + 1`, so `l ^ 1` inverts a letter.

mod enumerate;
mod low_index;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::dense_smith;

pub use enumerate::{todd_coxeter, CosetTable};
pub use low_index::{
    complement_exists, count_maximal_by_index, count_simple_quotients, low_index_subgroups,
    low_index_subgroups_capped, quotient_group, LowIndexResult, LowIndexSubgroup,
};

pub type Letter = usize;
pub type Word = Vec<Letter>;

pub fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|&l| inverse_letter(l)).collect()
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&inverse_letter(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Relators are freely reduced; empty relators are dropped.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if !is_identifier(g) {
                return Err(Error::Invalid(format!("bad generator name `{g}`")));
            }
            if generators[..i].contains(g) {
                return Err(Error::Invalid(format!("duplicate generator `{g}`")));
            }
        }
        let limit = 2 * generators.len();
        let mut rels = Vec::new();
        for r in relators {
            if r.iter().any(|&l| l >= limit) {
                return Err(Error::Invalid("relator uses an unknown letter".into()));
            }
            let r = free_reduce(&r);
            if !r.is_empty() {
                rels.push(r);
            }
        }
        Ok(Presentation {
            generators,
            relators: rels,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).presentation()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_letters(&self) -> usize {
        2 * self.generators.len()
    }

    /// Adds relators, giving a presentation of a quotient.
    pub fn with_relators(&self, extra: &[Word]) -> Result<Self> {
        let mut rels = self.relators.clone();
        rels.extend(extra.iter().cloned());
        Presentation::new(self.generators.clone(), rels)
    }

    /// Parses a comma separated list of words over this presentation's
    /// generators. The empty string is the empty list.
    pub fn parse_words(&self, text: &str) -> Result<Vec<Word>> {
        let mut p = Parser::new(text);
        p.names = self.generators.clone();
        let words = p.word_list()?;
        p.expect_end()?;
        Ok(words)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut words = self.parse_words(text)?;
        match words.len() {
            0 => Ok(Vec::new()),
            1 => Ok(words.pop().unwrap()),
            _ => Err(Error::parse(0, "expected a single word")),
        }
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = &self.generators[w[i] / 2];
            let exp = (j - i) as i64 * if w[i].is_multiple_of(2) { 1 } else { -1 };
            parts.push(if exp == 1 {
                name.clone()
            } else {
                format!("{name}^{exp}")
            });
            i = j;
        }
        parts.join("*")
    }

    /// Abelian invariants of the abelianization; `0` stands for a free
    /// cyclic factor. Trivial factors are omitted.
    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        let n = self.num_generators();
        let matrix: Vec<Vec<BigInt>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); n];
                for &l in r {
                    row[l / 2] += if l % 2 == 0 { 1 } else { -1 };
                }
                row
            })
            .collect();
        let factors = dense_smith(matrix)?;
        let mut out: Vec<u64> = factors
            .iter()
            .filter(|d| d.abs() != BigInt::from(1))
            .map(|d| d.to_u64().ok_or(Error::ArithmeticOverflow))
            .collect::<Result<_>>()?;
        out.extend(std::iter::repeat_n(0, n - factors.len()));
        Ok(out)
    }

    /// Whether the abelianization is infinite.
    pub fn is_indicable(&self) -> Result<bool> {
        Ok(self.abelian_invariants()?.contains(&0))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(
            f,
            "gens: {} ; rels: {}",
            self.generators.join(", "),
            rels.join(", ")
        )
    }
}

impl std::str::FromStr for Presentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Presentation::parse(s)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

const MAX_WORD_LEN: usize = 1 << 20;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            names: Vec::new(),
        }
    }

    // newlines are significant as section separators
    fn skip_blanks(&mut self) {
        while self.pos < self.src.len() && matches!(self.src[self.pos], b' ' | b'\t' | b'\r') {
            self.pos += 1;
        }
    }

    fn skip_all_space(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_blanks();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_all_space();
        if self.pos < self.src.len() {
            return Err(Error::parse(self.pos, "unexpected trailing input"));
        }
        Ok(())
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_blanks();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        if !is_identifier(s) {
            self.pos = start;
            return Err(Error::parse(start, "expected an identifier"));
        }
        Ok(s.to_string())
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        self.skip_all_space();
        let start = self.pos;
        let name = self
            .ident()
            .map_err(|_| Error::parse(start, format!("expected `{kw}:`")))?;
        if name != kw {
            return Err(Error::parse(start, format!("expected `{kw}:`")));
        }
        self.expect(b':')
    }

    fn presentation(&mut self) -> Result<Presentation> {
        self.keyword("gens")?;
        let mut gens = Vec::new();
        if !matches!(self.peek(), Some(b';' | b'\n') | None) {
            loop {
                self.skip_blanks();
                let at = self.pos;
                let g = self.ident()?;
                if gens.contains(&g) {
                    return Err(Error::parse(at, format!("duplicate generator `{g}`")));
                }
                gens.push(g);
                if !self.eat(b',') {
                    break;
                }
            }
        }
        match self.peek() {
            Some(b';' | b'\n') => self.pos += 1,
            _ => {
                return Err(Error::parse(
                    self.pos,
                    "expected `;` or newline before `rels:`",
                ))
            }
        }
        self.names = gens.clone();
        self.keyword("rels")?;
        let rels = self.word_list()?;
        self.expect_end()?;
        Presentation::new(gens, rels)
    }

    fn word_list(&mut self) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        self.skip_all_space();
        if self.pos >= self.src.len() {
            return Ok(out);
        }
        loop {
            self.skip_all_space();
            out.push(free_reduce(&self.word()?));
            self.skip_all_space();
            if self.pos < self.src.len() && self.src[self.pos] == b',' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = self.factor()?;
        while self.eat(b'*') {
            w.extend(self.factor()?);
            if w.len() > MAX_WORD_LEN {
                return Err(Error::parse(self.pos, "word too long"));
            }
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let exp = self.integer()?;
        let unit = if exp < 0 { inverse_word(&base) } else { base };
        let n = exp.unsigned_abs() as usize;
        if unit.len().saturating_mul(n) > MAX_WORD_LEN {
            return Err(Error::parse(self.pos, "word too long"));
        }
        Ok(unit.repeat(n))
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Vec::new())
            }
            _ => {
                let at = self.pos;
                let name = self.ident()?;
                let g = self
                    .names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| Error::parse(at, format!("unknown generator `{name}`")))?;
                Ok(vec![2 * g])
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_blanks();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, "expected an integer exponent"))
    }
}

/// Named presentations used in examples and tests.
pub fn catalogue() -> &'static [(&'static str, &'static str)] {
    &[
        ("integers", "gens: a ; rels:"),
        ("free2", "gens: a, b ; rels:"),
        ("infinite-dihedral", "gens: s, t ; rels: s^2, t^2"),
        ("bs12", "gens: a, b ; rels: b*a*b^-1*a^-2"),
        ("modular", "gens: s, t ; rels: s^2, t^3"),
        ("triangle237", "gens: x, y ; rels: x^2, y^3, (x*y)^7"),
        ("s3", "gens: a, b ; rels: a^2, b^2, (a*b)^3"),
        ("q8", "gens: a, b ; rels: a^4, a^2*b^-2, b*a*b^-1*a"),
        ("z6", "gens: a ; rels: a^6"),
        ("klein", "gens: a, b ; rels: a^2, b^2, (a*b)^2"),
        ("a4", "gens: a, b ; rels: a^2, b^3, (a*b)^3"),
        ("wallpaper-p1", "gens: a, b ; rels: a*b*a^-1*b^-1"),
        (
            "wallpaper-p2",
            "gens: a, b, c ; rels: a*b*a^-1*b^-1, c^2, c*a*c^-1*a, c*b*c^-1*b",
        ),
        ("wallpaper-pg", "gens: a, b ; rels: a*b*a^-1*b"),
    ]
}

pub fn catalogue_presentation(name: &str) -> Option<Presentation> {
    catalogue()
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| Presentation::parse(text).expect("catalogue entries parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let z = Presentation::parse("gens: a ; rels:").unwrap();
        assert_eq!(z.num_generators(), 1);
        assert!(z.relators().is_empty());

        let d = Presentation::parse("gens: s, t ; rels: s^2, t^2").unwrap();
        assert_eq!(d.relators(), &[vec![0, 0], vec![2, 2]]);

        let bs = Presentation::parse("gens: a, b ; rels: b*a*b^-1*a^-2").unwrap();
        assert_eq!(bs.relators(), &[vec![2, 0, 3, 1, 1]]);
        assert_eq!(bs.to_string(), "gens: a, b ; rels: b*a*b^-1*a^-2");

        let multi = Presentation::parse("gens: a, b\nrels: (a*b)^3,\n  a^-2").unwrap();
        assert_eq!(multi.relators()[0], vec![0, 2, 0, 2, 0, 2]);
        assert_eq!(multi.relators()[1], vec![1, 1]);
    }

    #[test]
    fn relators_are_reduced() {
        let p = Presentation::parse("gens: a, b ; rels: a*a^-1, a*b*b^-1*a").unwrap();
        assert_eq!(p.relators(), &[vec![0, 0]]);
        assert_eq!(free_reduce(&[0, 2, 3, 1, 0]), vec![0]);
    }

    #[test]
    fn parse_errors_have_positions() {
        let err = Presentation::parse("gens: a ; rels: b").unwrap_err();
        assert_eq!(err, Error::parse(16, "unknown generator `b`"));
        assert!(matches!(
            Presentation::parse("gens: a, a ; rels:"),
            Err(Error::Parse { pos: 9, .. })
        ));
        assert!(matches!(
            Presentation::parse("rels: a"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            Presentation::parse("gens: a ; rels: a^"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Presentation::parse("gens: a ; rels: (a"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn words() {
        let p = Presentation::parse("gens: a, b ; rels:").unwrap();
        assert_eq!(p.parse_words("").unwrap(), Vec::<Word>::new());
        assert_eq!(p.parse_words("a^5, b").unwrap(), vec![vec![0; 5], vec![2]]);
        assert_eq!(p.parse_word("(a*b)^-1").unwrap(), vec![3, 1]);
        assert_eq!(p.format_word(&[0, 0, 3]), "a^2*b^-1");
        assert_eq!(p.format_word(&[]), "1");
        assert_eq!(inverse_word(&[0, 3]), vec![2, 1]);
    }

    #[test]
    fn abelianization() {
        let inv = |name: &str| {
            catalogue_presentation(name)
                .unwrap()
                .abelian_invariants()
                .unwrap()
        };
        assert_eq!(inv("integers"), vec![0]);
        assert_eq!(inv("free2"), vec![0, 0]);
        assert_eq!(inv("infinite-dihedral"), vec![2, 2]);
        assert_eq!(inv("bs12"), vec![0]);
        assert_eq!(inv("s3"), vec![2]);
        assert_eq!(inv("q8"), vec![2, 2]);
        assert_eq!(inv("z6"), vec![6]);
        assert_eq!(inv("wallpaper-pg"), vec![2, 0]);
    }

    #[test]
    fn catalogue_parses() {
        for (name, text) in catalogue() {
            let p = Presentation::parse(text).unwrap();
            assert_eq!(Presentation::parse(&p.to_string()).unwrap(), p, "{name}");
        }
    }
}
