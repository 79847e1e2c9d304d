//! Exact word engine for the free group of rank two on `x1`, `x2`.
//!
//! Words are always stored freely reduced. Conjugacy classes are keyed by the
//! lexicographically least rotation of the cyclic reduction, with letters
//! ordered `x1 < X1 < x2 < X2` (capitals are inverses).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::LatticeVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FGroupError {
    #[error("root index must be at least 1")]
    ZeroRootIndex,
    #[error("the identity has no maximal root")]
    EmptyWord,
    #[error("cannot parse word token `{0}`")]
    BadToken(String),
    #[error("exponent out of range in token `{0}`")]
    ExponentRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    X1,
    X2,
}

impl Generator {
    pub fn other(self) -> Generator {
        match self {
            Generator::X1 => Generator::X2,
            Generator::X2 => Generator::X1,
        }
    }
}

/// A generator or its inverse. The derived order is `x1 < X1 < x2 < X2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub const X1: Letter = Letter { generator: Generator::X1, inverse: false };
    pub const X1_INV: Letter = Letter { generator: Generator::X1, inverse: true };
    pub const X2: Letter = Letter { generator: Generator::X2, inverse: false };
    pub const X2_INV: Letter = Letter { generator: Generator::X2, inverse: true };

    pub const ALL: [Letter; 4] = [Letter::X1, Letter::X1_INV, Letter::X2, Letter::X2_INV];

    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// Freely reduced element of F(x1, x2). The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

/// Free reduction of an arbitrary letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn x1() -> Word {
        Word::letter(Letter::X1)
    }

    pub fn x2() -> Word {
        Word::letter(Letter::X2)
    }

    /// `x1^a x2^b`, the two-syllable shape used throughout the families.
    pub fn x1a_x2b(a: i64, b: i64) -> Word {
        Word::x1().pow(a).mul(&Word::x2().pow(b))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `c w c^-1`.
    pub fn conjugated_by(&self, c: &Word) -> Word {
        free_reduce(
            c.0.iter()
                .chain(self.0.iter())
                .copied()
                .chain(c.inverse().0),
        )
    }

    /// Commutator `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        free_reduce(
            u.0.iter()
                .chain(v.0.iter())
                .copied()
                .chain(u.inverse().0)
                .chain(v.inverse().0),
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => self.0.len() == 1 || *a != b.inv(),
            _ => true,
        }
    }

    /// Image under the endomorphism sending `x1 -> img1`, `x2 -> img2`.
    pub fn substitute(&self, img1: &Word, img2: &Word) -> Word {
        let inv1 = img1.inverse();
        let inv2 = img2.inverse();
        free_reduce(self.0.iter().flat_map(|l| {
            let img = match (l.generator, l.inverse) {
                (Generator::X1, false) => img1,
                (Generator::X1, true) => &inv1,
                (Generator::X2, false) => img2,
                (Generator::X2, true) => &inv2,
            };
            img.0.clone()
        }))
    }

    /// Maximal runs as `(generator, signed exponent)`, read linearly.
    pub fn syllables(&self) -> Vec<(Generator, i64)> {
        let mut out: Vec<(Generator, i64)> = Vec::new();
        for l in &self.0 {
            match out.last_mut() {
                Some((g, e)) if *g == l.generator => *e += l.sign(),
                _ => out.push((l.generator, l.sign())),
            }
        }
        out
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        free_reduce(iter)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, e) in self.syllables() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let name = match g {
                Generator::X1 => "x1",
                Generator::X2 => "x2",
            };
            match e {
                1 => f.write_str(name)?,
                -1 => f.write_str(&name.to_uppercase())?,
                _ => write!(f, "{name}^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = FGroupError;

    /// Tokens `x1 x2 X1 X2`, each optionally followed by `^k` with `k` a signed
    /// integer, separated by whitespace. The empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => {
                    let k: i64 = e
                        .parse()
                        .map_err(|_| FGroupError::BadToken(token.to_string()))?;
                    if k.unsigned_abs() > 1 << 20 {
                        return Err(FGroupError::ExponentRange(token.to_string()));
                    }
                    (b, k)
                }
                None => (token, 1),
            };
            let letter = match base {
                "x1" => Letter::X1,
                "X1" => Letter::X1_INV,
                "x2" => Letter::X2,
                "X2" => Letter::X2_INV,
                _ => return Err(FGroupError::BadToken(token.to_string())),
            };
            let l = if exp < 0 { letter.inv() } else { letter };
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(free_reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Conjugacy class of a word, keyed by its least cyclic rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicWord {
    rep: Word,
}

impl CyclicWord {
    pub fn rep(&self) -> &Word {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// Splits `w` as `conjugator * core * conjugator^-1` with `core` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let letters = w.letters();
    let mut i = 0;
    let mut j = letters.len();
    while j > i + 1 && letters[i] == letters[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    (Word(letters[i..j].to_vec()), Word(letters[..i].to_vec()))
}

fn least_rotation(core: &[Letter]) -> Vec<Letter> {
    let n = core.len();
    let mut best: Option<Vec<Letter>> = None;
    for s in 0..n.max(1) {
        let rot: Vec<Letter> = core[s..].iter().chain(core[..s].iter()).copied().collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap_or_default()
}

pub fn canonical_class(w: &Word) -> CyclicWord {
    let (core, _) = cyclic_reduce(w);
    CyclicWord { rep: Word(least_rotation(core.letters())) }
}

pub fn are_conjugate(u: &Word, v: &Word) -> bool {
    canonical_class(u) == canonical_class(v)
}

/// Cyclic length: length of the cyclic reduction.
pub fn cyclic_length(w: &Word) -> usize {
    cyclic_reduce(w).0.len()
}

/// Root of index `n` of the conjugacy class of `w`, taken as the period prefix
/// of the canonical representative.
pub fn nth_root(w: &Word, n: usize) -> Result<Option<Word>, FGroupError> {
    if n == 0 {
        return Err(FGroupError::ZeroRootIndex);
    }
    let rep = canonical_class(w).rep;
    let len = rep.len();
    if !len.is_multiple_of(n) {
        return Ok(None);
    }
    let period = len / n;
    let letters = rep.letters();
    let periodic = (period..len).all(|i| letters[i] == letters[i - period]);
    Ok(periodic.then(|| Word(letters[..period].to_vec())))
}

/// Largest `k` with `w` conjugate to `root^k`.
pub fn max_root(w: &Word) -> Result<(Word, usize), FGroupError> {
    let len = cyclic_length(w);
    if len == 0 {
        return Err(FGroupError::EmptyWord);
    }
    for k in (1..=len).rev() {
        if len.is_multiple_of(k) {
            if let Some(root) = nth_root(w, k)? {
                return Ok((root, k));
            }
        }
    }
    unreachable!("every nonempty class is its own first root")
}

/// The twelve non-permutation Whitehead automorphisms of F2. For a multiplier
/// letter `a` the other generator `y` goes to `y a`, `a^-1 y` or `a^-1 y a`;
/// `a` itself is fixed.
pub fn whitehead_automorphisms() -> Vec<(Word, Word)> {
    let mut out = Vec::with_capacity(12);
    for a in Letter::ALL {
        let aw = Word::letter(a);
        let ai = Word::letter(a.inv());
        let y = match a.generator.other() {
            Generator::X1 => Word::x1(),
            Generator::X2 => Word::x2(),
        };
        let images = [y.mul(&aw), ai.mul(&y), ai.mul(&y).mul(&aw)];
        for img in images {
            let pair = match a.generator {
                Generator::X1 => (Word::x1(), img),
                Generator::X2 => (img, Word::x2()),
            };
            out.push(pair);
        }
    }
    out
}

/// Whitehead's algorithm in rank two: descend in cyclic length while some
/// Whitehead automorphism shortens the class; primitive iff the descent
/// reaches length one. Permutations and inversions of generators preserve
/// length and are not needed for the descent.
pub fn is_primitive(w: &Word) -> bool {
    let autos = whitehead_automorphisms();
    let mut current = cyclic_reduce(w).0;
    loop {
        match current.len() {
            0 => return false,
            1 => return true,
            _ => {}
        }
        let len = current.len();
        let shorter = autos
            .iter()
            .map(|(i1, i2)| cyclic_reduce(&current.substitute(i1, i2)).0)
            .find(|img| img.len() < len);
        match shorter {
            Some(img) => current = img,
            None => return false,
        }
    }
}

pub fn is_power_of_primitive(w: &Word, n: usize) -> Result<bool, FGroupError> {
    Ok(nth_root(w, n)?.is_some_and(|root| is_primitive(&root)))
}

/// `{u, v}` is a free basis iff `[u, v]` is conjugate to `[x1, x2]^{±1}`.
pub fn is_basis_pair(u: &Word, v: &Word) -> bool {
    let c = canonical_class(&Word::commutator(u, v));
    let std = Word::commutator(&Word::x1(), &Word::x2());
    c == canonical_class(&std) || c == canonical_class(&std.inverse())
}

/// Outcome of asking whether two conjugacy classes contain a free basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisSearch {
    /// A representative pair passing [`is_basis_pair`] was found.
    Found { u: Word, v: Word },
    /// Both cores are `x1^a x2^b` with every exponent nonzero, the `x1`
    /// exponents not both ±1 and the `x2` exponents not both ±1.
    ExponentCriterion { first: (i64, i64), second: (i64, i64) },
    /// Neither the exponent criterion nor the bounded search settled it.
    Undecided { conjugators_tried: usize },
}

/// Default conjugator length budget for [`classes_contain_basis`].
pub const DEFAULT_BASIS_BUDGET: usize = 6;

pub fn classes_contain_basis(u: &Word, v: &Word, budget: usize) -> BasisSearch {
    if let (Some(first), Some(second)) = (two_syllable_exponents(u), two_syllable_exponents(v)) {
        let (a, b) = first;
        let (c, d) = second;
        let nonzero = a != 0 && b != 0 && c != 0 && d != 0;
        let x1_units = a.abs() == 1 && c.abs() == 1;
        let x2_units = b.abs() == 1 && d.abs() == 1;
        if nonzero && !x1_units && !x2_units {
            return BasisSearch::ExponentCriterion { first, second };
        }
    }
    // Simultaneous conjugation preserves bases, so only v's conjugator varies.
    let u0 = cyclic_reduce(u).0;
    let v0 = cyclic_reduce(v).0;
    let mut tried = 0;
    for c in reduced_words_up_to(budget) {
        tried += 1;
        let v1 = v0.conjugated_by(&c);
        if is_basis_pair(&u0, &v1) {
            return BasisSearch::Found { u: u0, v: v1 };
        }
    }
    BasisSearch::Undecided { conjugators_tried: tried }
}

/// All freely reduced words of length at most `max_len`, shortest first.
pub fn reduced_words_up_to(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for w in &frontier {
            for l in Letter::ALL {
                if w.0.last() == Some(&l.inv()) {
                    continue;
                }
                let mut letters = w.0.clone();
                letters.push(l);
                next.push(Word(letters));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Exponents `(a, b)` when the cyclic core is conjugate to `x1^a x2^b`. A
/// single-syllable core gives a zero exponent on the missing generator; the
/// identity gives `None`.
pub fn two_syllable_exponents(w: &Word) -> Option<(i64, i64)> {
    let (core, _) = cyclic_reduce(w);
    let mut syl = core.syllables();
    if syl.len() > 1 && syl[0].0 == syl[syl.len() - 1].0 {
        let (_, last) = syl.pop().unwrap();
        syl[0].1 += last;
    }
    match syl.as_slice() {
        [(Generator::X1, a)] => Some((*a, 0)),
        [(Generator::X2, b)] => Some((0, *b)),
        [(Generator::X1, a), (Generator::X2, b)] | [(Generator::X2, b), (Generator::X1, a)] => {
            Some((*a, *b))
        }
        _ => None,
    }
}

/// Isomorphism type of the one-relator group `<x1, x2 | w>` for `w` of
/// shape `x1^a x2^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QuotientClass {
    /// `|a| = 1` or `|b| = 1`.
    InfiniteCyclic,
    /// Both `|a|, |b| >= 2`; the pair is stored sorted, larger first.
    TorusGroup { larger: u64, smaller: u64 },
    /// Single syllable `x_i^k` with `|k| >= 2`: `Z/k * Z`.
    CyclicFreeProduct { order: u64 },
}

impl fmt::Display for QuotientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientClass::InfiniteCyclic => f.write_str("INFINITE_CYCLIC"),
            QuotientClass::TorusGroup { larger, smaller } => {
                write!(f, "TORUS_GROUP{{{larger},{smaller}}}")
            }
            QuotientClass::CyclicFreeProduct { order } => write!(f, "CYCLIC_FREE_PRODUCT{{{order}}}"),
        }
    }
}

pub fn xayb_quotient_class(w: &Word) -> Option<QuotientClass> {
    let (a, b) = two_syllable_exponents(w)?;
    let (a, b) = (a.unsigned_abs(), b.unsigned_abs());
    Some(match (a, b) {
        (1, _) | (_, 1) => QuotientClass::InfiniteCyclic,
        (0, k) | (k, 0) => QuotientClass::CyclicFreeProduct { order: k },
        _ => QuotientClass::TorusGroup { larger: a.max(b), smaller: a.min(b) },
    })
}

/// Exponent sums on `x1` and `x2`.
pub fn abelianize(w: &Word) -> LatticeVector {
    let (mut c1, mut c2) = (0, 0);
    for l in w.letters() {
        match l.generator {
            Generator::X1 => c1 += l.sign(),
            Generator::X2 => c2 += l.sign(),
        }
    }
    LatticeVector::new(c1, c2)
}
