//! Words: twist words naming monodromies, and group words over the fiber
//! generators `a1..a4` plus the stable letter `t`.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// A generator symbol. `a1..a4` are the fiber generators, `t` the stable
/// letter of the mapping-torus presentation. Auxiliary symbols (`x1`, `x2`,
/// ...) may be introduced internally during presentation rewriting; they never
/// appear in bundle presentations themselves.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(pub u8);

impl Serialize for Sym {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Sym {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Sym::from_name(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown generator `{s}`")))
    }
}

pub const A1: Sym = Sym(0);
pub const A2: Sym = Sym(1);
pub const A3: Sym = Sym(2);
pub const A4: Sym = Sym(3);
pub const T: Sym = Sym(4);

impl Sym {
    /// First auxiliary symbol; `aux(0) == x1`.
    pub fn aux(k: u8) -> Sym {
        Sym(5 + k)
    }

    pub fn is_fiber(self) -> bool {
        self.0 < 4
    }

    pub fn is_aux(self) -> bool {
        self.0 >= 5
    }

    pub fn name(self) -> String {
        match self.0 {
            0..=3 => format!("a{}", self.0 + 1),
            4 => "t".to_string(),
            k => format!("x{}", k - 4),
        }
    }

    pub fn from_name(s: &str) -> Option<Sym> {
        match s {
            "a1" => Some(A1),
            "a2" => Some(A2),
            "a3" => Some(A3),
            "a4" => Some(A4),
            "t" => Some(T),
            _ => {
                let k: u8 = s.strip_prefix('x')?.parse().ok()?;
                (k >= 1).then(|| Sym(4 + k))
            }
        }
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// One letter of a group word: a generator symbol with exponent +1 or -1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub sym: Sym,
    pub exp: i8,
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Letter::from_token(&s).ok_or_else(|| serde::de::Error::custom(format!("bad letter token `{s}`")))
    }
}

impl Letter {
    pub fn new(sym: Sym, exp: i8) -> Letter {
        debug_assert!(exp == 1 || exp == -1);
        Letter { sym, exp }
    }

    pub fn inverse(self) -> Letter {
        Letter { sym: self.sym, exp: -self.exp }
    }

    /// Token form used by the JSON presentation format: `a1` or `a1^-1`.
    pub fn token(self) -> String {
        if self.exp == 1 {
            self.sym.name()
        } else {
            format!("{}^-1", self.sym.name())
        }
    }

    pub fn from_token(s: &str) -> Option<Letter> {
        if let Some(base) = s.strip_suffix("^-1") {
            Some(Letter::new(Sym::from_name(base)?, -1))
        } else {
            Some(Letter::new(Sym::from_name(s)?, 1))
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

/// A word in the group generators, stored letter by letter with exponents
/// ±1. The representation is not forced to be freely reduced; callers that
/// need the reduced form use [`GroupWord::free_reduce`]. Serializes as an
/// array of letter tokens, e.g. `["t^-1", "a1", "t"]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(GroupWord { letters: Vec::<Letter>::deserialize(d)? })
    }
}

impl GroupWord {
    pub fn empty() -> GroupWord {
        GroupWord { letters: Vec::new() }
    }

    pub fn single(sym: Sym, exp: i8) -> GroupWord {
        GroupWord { letters: vec![Letter::new(sym, exp)] }
    }

    /// Builds a word from `(symbol, exponent)` pairs, expanding exponents
    /// into ±1 letters. No reduction is performed.
    pub fn from_pairs(pairs: &[(Sym, i32)]) -> GroupWord {
        let mut letters = Vec::new();
        for &(sym, e) in pairs {
            let sign = if e >= 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                letters.push(Letter::new(sym, sign));
            }
        }
        GroupWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The unique freely reduced representative: a single stack pass cancels
    /// every adjacent `x x^-1` pair, including pairs exposed by earlier
    /// cancellations.
    pub fn free_reduce(&self) -> GroupWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&top) if top.sym == l.sym && top.exp == -l.exp => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        GroupWord { letters: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| !(w[0].sym == w[1].sym && w[0].exp == -w[1].exp))
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Concatenation followed by free reduction.
    pub fn concat_reduced(&self, other: &GroupWord) -> GroupWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        GroupWord { letters }.free_reduce()
    }

    /// Freely reduces, then strips matching conjugating letters from the two
    /// ends (`u v u^-1` becomes the cyclic reduction of `v`).
    pub fn cyclic_reduce(&self) -> GroupWord {
        let mut w = self.free_reduce().letters;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == w[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        w.truncate(hi);
        w.drain(..lo);
        GroupWord { letters: w }
    }

    /// All rotations of the letter sequence (the word itself first).
    pub fn rotations(&self) -> impl Iterator<Item = GroupWord> + '_ {
        let n = self.letters.len().max(1);
        (0..n).map(move |k| {
            let mut letters = Vec::with_capacity(self.letters.len());
            letters.extend_from_slice(&self.letters[k..]);
            letters.extend_from_slice(&self.letters[..k]);
            GroupWord { letters }
        })
    }

    /// Exponent sum of `sym` over the word.
    pub fn exponent_sum(&self, sym: Sym) -> i64 {
        self.letters.iter().filter(|l| l.sym == sym).map(|l| l.exp as i64).sum()
    }

    /// Number of letters naming `sym`, ignoring exponent signs.
    pub fn occurrences(&self, sym: Sym) -> usize {
        self.letters.iter().filter(|l| l.sym == sym).count()
    }

    pub fn tokens(&self) -> Vec<String> {
        self.letters.iter().map(|l| l.token()).collect()
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.tokens().join(" "))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// One letter of a twist word: a generator index `1..=5` with a sign.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TwistLetter {
    pub index: u8,
    pub sign: i8,
}

impl TwistLetter {
    pub fn new(index: u8, sign: i8) -> TwistLetter {
        debug_assert!((1..=5).contains(&index) && (sign == 1 || sign == -1));
        TwistLetter { index, sign }
    }

    pub fn inverse(self) -> TwistLetter {
        TwistLetter { index: self.index, sign: -self.sign }
    }

    /// Rank in the fixed letter order `D1 < D1^-1 < D2 < ... < D5^-1`, the
    /// order underlying the shortlex comparison of twist words.
    pub fn rank(self) -> u8 {
        (self.index - 1) * 2 + u8::from(self.sign < 0)
    }
}

/// A word in the five twist generators, stored in run-length syllable form:
/// adjacent syllables have distinct indices and every exponent is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistWord {
    syllables: Vec<(u8, i64)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("malformed twist syllable `{0}`")]
    Malformed(String),
    #[error("twist index out of range in `{0}` (expected D1..D5)")]
    IndexRange(String),
    #[error("zero exponent in `{0}`")]
    ZeroExponent(String),
}

impl TwistWord {
    pub fn empty() -> TwistWord {
        TwistWord::default()
    }

    /// Normalizes any syllable list: merges adjacent syllables with equal
    /// index, drops zero exponents (cancellations may cascade).
    pub fn from_syllables(syllables: &[(u8, i64)]) -> TwistWord {
        let mut out: Vec<(u8, i64)> = Vec::with_capacity(syllables.len());
        for &(i, e) in syllables {
            assert!((1..=5).contains(&i), "twist index {i} out of range");
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.0 == i => {
                    top.1 += e;
                    if top.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((i, e)),
            }
        }
        TwistWord { syllables: out }
    }

    pub fn from_letters(letters: &[TwistLetter]) -> TwistWord {
        let syl: Vec<(u8, i64)> = letters.iter().map(|l| (l.index, l.sign as i64)).collect();
        TwistWord::from_syllables(&syl)
    }

    pub fn syllables(&self) -> &[(u8, i64)] {
        &self.syllables
    }

    /// Word length: the total number of twist letters, `sum |exponent|`.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn letters(&self) -> Vec<TwistLetter> {
        let mut out = Vec::with_capacity(self.len());
        for &(i, e) in &self.syllables {
            let sign = if e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                out.push(TwistLetter::new(i, sign));
            }
        }
        out
    }

    /// The inverse monodromy word: reversed letters with negated signs.
    pub fn inverse(&self) -> TwistWord {
        let syl: Vec<(u8, i64)> =
            self.syllables.iter().rev().map(|&(i, e)| (i, -e)).collect();
        TwistWord::from_syllables(&syl)
    }

    /// Parses the whitespace-separated grammar `D<i>` / `D<i>^<k>` with
    /// `i` in `1..=5` and `k` a nonzero integer. The empty string is the
    /// empty word.
    pub fn parse(input: &str) -> Result<TwistWord, WordParseError> {
        let mut syl = Vec::new();
        for tok in input.split_whitespace() {
            let body = tok
                .strip_prefix('D')
                .ok_or_else(|| WordParseError::Malformed(tok.to_string()))?;
            let (idx_str, exp) = match body.split_once('^') {
                Some((i, k)) => {
                    let e: i64 =
                        k.parse().map_err(|_| WordParseError::Malformed(tok.to_string()))?;
                    (i, e)
                }
                None => (body, 1),
            };
            let idx: u8 =
                idx_str.parse().map_err(|_| WordParseError::Malformed(tok.to_string()))?;
            if !(1..=5).contains(&idx) {
                return Err(WordParseError::IndexRange(tok.to_string()));
            }
            if exp == 0 {
                return Err(WordParseError::ZeroExponent(tok.to_string()));
            }
            syl.push((idx, exp));
        }
        Ok(TwistWord::from_syllables(&syl))
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(i, e) in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "D{i}")?;
            } else {
                write!(f, "D{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Shortlex over the flattened letters: first by total letter count, then by
/// the fixed letter order `D1 < D1^-1 < D2 < ... < D5^-1`.
impl Ord for TwistWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let a = self.letters();
            let b = other.letters();
            a.iter().map(|l| l.rank()).cmp(b.iter().map(|l| l.rank()))
        })
    }
}

impl PartialOrd for TwistWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for TwistWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TwistWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TwistWord::parse(&s).map_err(serde::de::Error::custom)
    }
}
