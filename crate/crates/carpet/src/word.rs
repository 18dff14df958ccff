//! Infinite index words and their symmetries.
//!
//! A carpet graph is indexed by an infinite word: a root letter from
//! `{a,b,c,d}` followed by an infinite stream of digits over `{0..7}`.
//! Only eventually periodic words are representable, which keeps letter
//! statistics, cofinality and the unrooted-isomorphism relation decidable.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// A digit of the position alphabet `{0,..,7}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(u8);

impl Letter {
    pub fn new(value: u8) -> Result<Self, ParseError> {
        if value <= 7 {
            Ok(Letter(value))
        } else {
            Err(ParseError::LetterRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Letter> {
        (0..8).map(Letter)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The root alphabet: the four corners of the base square, counterclockwise
/// from bottom-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RootLetter {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
}

impl RootLetter {
    pub fn parse(c: char) -> Result<Self, ParseError> {
        match c {
            'a' => Ok(RootLetter::A),
            'b' => Ok(RootLetter::B),
            'c' => Ok(RootLetter::C),
            'd' => Ok(RootLetter::D),
            other => Err(ParseError::RootLetter(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            RootLetter::A => 'a',
            RootLetter::B => 'b',
            RootLetter::C => 'c',
            RootLetter::D => 'd',
        }
    }

    pub fn all() -> [RootLetter; 4] {
        [RootLetter::A, RootLetter::B, RootLetter::C, RootLetter::D]
    }
}

impl fmt::Display for RootLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty word")]
    Empty,
    #[error("invalid root letter {0:?}, expected one of a,b,c,d")]
    RootLetter(char),
    #[error("letter {0} outside 0..=7")]
    LetterRange(u8),
    #[error("invalid digit {0:?}, expected 0..=7")]
    Digit(char),
    #[error("empty cycle")]
    EmptyCycle,
    #[error("missing cycle: word must end with \"(digits)*\"")]
    MissingCycle,
    #[error("malformed word syntax near {0:?}")]
    Syntax(String),
}

/// An eventually periodic infinite word `root · prefix · cycle^∞`.
///
/// Canonical text form is `<root><prefix digits>(<cycle digits>)*`,
/// e.g. `b(7)*` or `a24(0)*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordSpec {
    root: RootLetter,
    prefix: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl WordSpec {
    pub fn new(
        root: RootLetter,
        prefix: Vec<Letter>,
        cycle: Vec<Letter>,
    ) -> Result<Self, ParseError> {
        if cycle.is_empty() {
            return Err(ParseError::EmptyCycle);
        }
        Ok(WordSpec {
            root,
            prefix,
            cycle,
        })
    }

    /// Parses the canonical grammar. The cycle part is mandatory; see
    /// [`WordSpec::parse_with_terminal`] for completing a bare finite word.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Self::parse_inner(text, None)
    }

    /// Like [`WordSpec::parse`], but a bare finite word such as `a24` is
    /// completed with `terminal` repeated forever.
    pub fn parse_with_terminal(text: &str, terminal: Letter) -> Result<Self, ParseError> {
        Self::parse_inner(text, Some(terminal))
    }

    fn parse_inner(text: &str, terminal: Option<Letter>) -> Result<Self, ParseError> {
        let text = text.trim();
        let mut chars = text.chars();
        let root = RootLetter::parse(chars.next().ok_or(ParseError::Empty)?)?;
        let rest: String = chars.collect();

        let digits = |s: &str| -> Result<Vec<Letter>, ParseError> {
            s.chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if d <= 7 => Ok(Letter(d as u8)),
                    _ => Err(ParseError::Digit(c)),
                })
                .collect()
        };

        match rest.find('(') {
            Some(open) => {
                let prefix = digits(&rest[..open])?;
                let tail = &rest[open + 1..];
                let close = tail
                    .find(')')
                    .ok_or_else(|| ParseError::Syntax(rest.clone()))?;
                if &tail[close + 1..] != "*" {
                    return Err(ParseError::Syntax(rest.clone()));
                }
                let cycle = digits(&tail[..close])?;
                if cycle.is_empty() {
                    return Err(ParseError::EmptyCycle);
                }
                WordSpec::new(root, prefix, cycle)
            }
            None => match terminal {
                Some(t) => WordSpec::new(root, digits(&rest)?, vec![t]),
                None => Err(ParseError::MissingCycle),
            },
        }
    }

    pub fn root(&self) -> RootLetter {
        self.root
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    /// The digit `x_i` of the infinite word, 1-indexed.
    pub fn letter_at(&self, i: usize) -> Letter {
        assert!(i >= 1, "letters are 1-indexed");
        let i = i - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Occurrence counts `N_i` for each digit: infinite exactly when the
    /// digit appears in the cycle.
    pub fn letter_profile(&self) -> LetterProfile {
        let mut counts = [Count::Finite(0); 8];
        for l in &self.prefix {
            if let Count::Finite(n) = counts[l.value() as usize] {
                counts[l.value() as usize] = Count::Finite(n + 1);
            }
        }
        for l in &self.cycle {
            counts[l.value() as usize] = Count::Infinite;
        }
        LetterProfile { counts }
    }

    /// An equivalent representation with `k` cycle letters rotated into
    /// the prefix; denotes the same infinite word.
    pub fn rotate_cycle(&self, k: usize) -> WordSpec {
        let mut prefix = self.prefix.clone();
        let mut cycle = self.cycle.clone();
        for _ in 0..k {
            let first = cycle.remove(0);
            prefix.push(first);
            cycle.push(first);
        }
        WordSpec {
            root: self.root,
            prefix,
            cycle,
        }
    }

    /// Uniformly random spec with bounded prefix and cycle lengths.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, max_prefix: usize, max_cycle: usize) -> WordSpec {
        let root = RootLetter::all()[rng.gen_range(0..4)];
        let prefix_len = rng.gen_range(0..=max_prefix);
        let cycle_len = rng.gen_range(1..=max_cycle.max(1));
        let prefix = (0..prefix_len)
            .map(|_| Letter(rng.gen_range(0..8)))
            .collect();
        let cycle = (0..cycle_len)
            .map(|_| Letter(rng.gen_range(0..8)))
            .collect();
        WordSpec {
            root,
            prefix,
            cycle,
        }
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        for l in &self.prefix {
            write!(f, "{l}")?;
        }
        write!(f, "(")?;
        for l in &self.cycle {
            write!(f, "{l}")?;
        }
        write!(f, ")*")
    }
}

impl FromStr for WordSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WordSpec::parse(s)
    }
}

impl Serialize for WordSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WordSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        WordSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Finite-or-infinite occurrence count of one digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Count {
    Finite(u32),
    Infinite,
}

impl Count {
    pub fn is_infinite(self) -> bool {
        matches!(self, Count::Infinite)
    }
}

/// The eight counts `N_0 .. N_7`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LetterProfile {
    counts: [Count; 8],
}

impl LetterProfile {
    pub fn count(&self, letter: Letter) -> Count {
        self.counts[letter.value() as usize]
    }

    pub fn is_infinite(&self, letter: Letter) -> bool {
        self.counts[letter.value() as usize].is_infinite()
    }

    pub fn infinite_letters(&self) -> Vec<Letter> {
        Letter::all().filter(|l| self.is_infinite(*l)).collect()
    }

    /// Rename counts through a digit permutation.
    pub fn relabel(&self, sigma: &Symmetry) -> LetterProfile {
        let mut counts = [Count::Finite(0); 8];
        for i in 0..8u8 {
            counts[sigma.apply_value(i) as usize] = self.counts[i as usize];
        }
        LetterProfile { counts }
    }
}

/// A permutation of the digits `{0..7}` drawn from the symmetry group of the
/// gluing pattern (order 8, generated by [`Symmetry::ROTATION`] and
/// [`Symmetry::REFLECTION`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symmetry {
    // images[i] = sigma(i)
    images: [u8; 8],
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        images: [0, 1, 2, 3, 4, 5, 6, 7],
    };
    /// The 4-cycle (1357) on the odd digits.
    pub const ROTATION: Symmetry = Symmetry {
        images: [0, 3, 2, 5, 4, 7, 6, 1],
    };
    /// The involution (04)(13)(57).
    pub const REFLECTION: Symmetry = Symmetry {
        images: [4, 3, 2, 1, 0, 7, 6, 5],
    };

    pub fn apply_value(&self, v: u8) -> u8 {
        self.images[v as usize]
    }

    pub fn apply_letter(&self, l: Letter) -> Letter {
        Letter(self.images[l.value() as usize])
    }

    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        // (self ∘ other)(x) = self(other(x))
        let mut images = [0u8; 8];
        for (i, img) in images.iter_mut().enumerate() {
            *img = self.images[other.images[i] as usize];
        }
        Symmetry { images }
    }

    pub fn inverse(&self) -> Symmetry {
        let mut images = [0u8; 8];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u8;
        }
        Symmetry { images }
    }

    /// Applies the permutation to every digit of the word; the root letter is
    /// untouched.
    pub fn apply_word(&self, w: &WordSpec) -> WordSpec {
        WordSpec {
            root: w.root,
            prefix: w.prefix.iter().map(|&l| self.apply_letter(l)).collect(),
            cycle: w.cycle.iter().map(|&l| self.apply_letter(l)).collect(),
        }
    }

    /// Cycle notation, e.g. `(04)(13)(57)`; the identity prints as `id`.
    pub fn cycle_notation(&self) -> String {
        let mut seen = [false; 8];
        let mut out = String::new();
        for start in 0..8u8 {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize] = true;
            let mut cur = self.images[start as usize];
            while cur != start {
                seen[cur as usize] = true;
                cycle.push(cur);
                cur = self.images[cur as usize];
            }
            if cycle.len() > 1 {
                out.push('(');
                for v in cycle {
                    out.push(char::from(b'0' + v));
                }
                out.push(')');
            }
        }
        if out.is_empty() {
            out.push_str("id");
        }
        out
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_notation())
    }
}

impl Serialize for Symmetry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.cycle_notation())
    }
}

/// All elements of the symmetry group, generated by closure and sorted
/// for determinism. The group has exactly 8 elements.
pub fn group_elements() -> Vec<Symmetry> {
    let mut elements = vec![Symmetry::IDENTITY, Symmetry::ROTATION, Symmetry::REFLECTION];
    loop {
        let mut grew = false;
        let snapshot = elements.clone();
        for a in &snapshot {
            for b in &snapshot {
                let c = a.compose(b);
                if !elements.contains(&c) {
                    elements.push(c);
                    grew = true;
                }
            }
            let inv = a.inverse();
            if !elements.contains(&inv) {
                elements.push(inv);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    elements.sort();
    elements
}

/// Whether the digit streams of `u` and `v` agree from some position on.
///
/// Both streams are periodic with period `lcm(|cycle_u|,|cycle_v|)` beyond the
/// longer prefix, so checking one full common period there is exhaustive.
pub fn cofinal(u: &WordSpec, v: &WordSpec) -> bool {
    let start = u.prefix.len().max(v.prefix.len()) + 1;
    let period = lcm(u.cycle.len(), v.cycle.len());
    (start..start + period).all(|i| u.letter_at(i) == v.letter_at(i))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Outcome of the unrooted-isomorphism decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoResult {
    pub isomorphic: bool,
    pub witness: Option<Symmetry>,
}

/// Unrooted graphs are isomorphic exactly when some group element maps one
/// digit stream onto a word cofinal with the other. Root letters are ignored.
pub fn are_isomorphic(u: &WordSpec, v: &WordSpec) -> IsoResult {
    for sigma in group_elements() {
        if cofinal(&sigma.apply_word(u), v) {
            return IsoResult {
                isomorphic: true,
                witness: Some(sigma),
            };
        }
    }
    IsoResult {
        isomorphic: false,
        witness: None,
    }
}
