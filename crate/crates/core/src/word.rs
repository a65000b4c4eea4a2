//! Alphabets, words and rotations.
//!
//! Letters are stored as indices into their [`Alphabet`], so comparing two
//! letter slices byte-wise is the same as comparing them in alphabet order.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
pub type Letter = u8;

/// An ordered set of single-character ASCII symbols.
///
/// Declaration order is the letter order used by every lexicographic
/// comparison in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    symbols: Arc<[u8]>,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let mut seen = Vec::with_capacity(symbols.len());
        for c in symbols.chars() {
            if !c.is_ascii_graphic() || c == '#' {
                return Err(Error::InvalidSymbol(c));
            }
            if seen.contains(&(c as u8)) {
                return Err(Error::DuplicateSymbol(c));
            }
            seen.push(c as u8);
        }
        if seen.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Alphabet { symbols: seen.into() })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// The index of symbol `c`.
    pub fn letter(&self, c: char) -> Result<Letter> {
        self.symbols.iter().position(|&s| s as char == c).map(|i| i as Letter).ok_or(Error::UnknownLetter(c))
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize] as char
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        let letters = text.chars().map(|c| self.letter(c)).collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet: self.clone(), letters })
    }

    /// Wraps raw letter indices, checking that each one is in range.
    pub fn word(&self, letters: Vec<Letter>) -> Result<Word> {
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= self.len()) {
            return Err(Error::LetterOutOfRange(bad));
        }
        Ok(Word { alphabet: self.clone(), letters })
    }

    pub fn empty_word(&self) -> Word {
        Word { alphabet: self.clone(), letters: Vec::new() }
    }

    pub fn render(&self, letters: &[Letter]) -> String {
        letters.iter().map(|&l| self.symbol(l)).collect()
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch { expected: self.to_string_lossy(), found: other.to_string_lossy() })
        }
    }

    fn to_string_lossy(&self) -> String {
        self.symbols.iter().map(|&b| b as char).collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({})", self.to_string_lossy())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_lossy())
    }
}

/// A finite word over a declared alphabet. The empty word is allowed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl Word {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same alphabet, new letters. Callers guarantee the indices are valid.
    pub(crate) fn with_letters(&self, letters: Vec<Letter>) -> Word {
        Word { alphabet: self.alphabet.clone(), letters }
    }

    pub(crate) fn from_parts(alphabet: &Alphabet, letters: Vec<Letter>) -> Word {
        Word { alphabet: alphabet.clone(), letters }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(self.with_letters(letters))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.alphabet == other.alphabet && other.letters.starts_with(&self.letters)
    }

    /// `w[k..] ++ w[..k]`; `k == |w|` is accepted and yields `w`.
    pub fn rotate(&self, k: usize) -> Result<Word> {
        if k > self.len() {
            return Err(Error::OffsetOutOfRange { offset: k, len: self.len() });
        }
        Ok(self.with_letters(rotated(&self.letters, k)))
    }

    pub fn distinct_rotations(&self) -> Result<BTreeSet<Word>> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let period = primitive_root_len(&self.letters);
        Ok((0..period).map(|k| self.with_letters(rotated(&self.letters, k))).collect())
    }

    /// Least rotation in alphabet order.
    pub fn canonical_rotation(&self) -> Result<Word> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let k = least_rotation(&self.letters);
        Ok(self.with_letters(rotated(&self.letters, k)))
    }

    pub fn count_letter(&self, symbol: char) -> Result<usize> {
        let x = self.alphabet.letter(symbol)?;
        Ok(self.letters.iter().filter(|&&l| l == x).count())
    }

    pub fn find_occurrences(&self, needle: &Word) -> Result<Vec<usize>> {
        self.alphabet.ensure_same(&needle.alphabet)?;
        if needle.is_empty() {
            return Err(Error::EmptyNeedle);
        }
        Ok(find_occurrences(&self.letters, &needle.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", self.alphabet.symbol(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", alloc::format!("{self}"))
    }
}

pub fn rotated(s: &[Letter], k: usize) -> Vec<Letter> {
    let mut out = Vec::with_capacity(s.len());
    out.extend_from_slice(&s[k..]);
    out.extend_from_slice(&s[..k]);
    out
}

/// Offset of the lexicographically least rotation (the smallest such offset
/// when the word is periodic). Linear time, two-candidate scan.
pub fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n < 2 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// KMP failure table: `fail[i]` is the length of the longest proper border of `p[..i]`.
fn failure(p: &[Letter]) -> Vec<usize> {
    let mut fail = alloc::vec![0usize; p.len() + 1];
    let mut k = 0;
    for i in 1..p.len() {
        while k > 0 && p[i] != p[k] {
            k = fail[k];
        }
        if p[i] == p[k] {
            k += 1;
        }
        fail[i + 1] = k;
    }
    fail
}

/// Length of the primitive root of `s`, i.e. the number of distinct rotations.
pub fn primitive_root_len(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let p = n - failure(s)[n];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

/// All (possibly overlapping) start positions of `needle` in `haystack`.
pub fn find_occurrences(haystack: &[Letter], needle: &[Letter]) -> Vec<usize> {
    let mut hits = Vec::new();
    if needle.is_empty() || needle.len() > haystack.len() {
        return hits;
    }
    let fail = failure(needle);
    let mut k = 0;
    for (i, &c) in haystack.iter().enumerate() {
        while k > 0 && c != needle[k] {
            k = fail[k];
        }
        if c == needle[k] {
            k += 1;
        }
        if k == needle.len() {
            hits.push(i + 1 - k);
            k = fail[k];
        }
    }
    hits
}

/// Offset `k` with `rotate(w, k) == t`, if `t` is a rotation of `w`.
pub fn rotation_offset(w: &[Letter], t: &[Letter]) -> Option<usize> {
    if w.len() != t.len() {
        return None;
    }
    if w.is_empty() {
        return Some(0);
    }
    let mut doubled = Vec::with_capacity(2 * w.len());
    doubled.extend_from_slice(w);
    doubled.extend_from_slice(w);
    find_occurrences(&doubled[..2 * w.len() - 1], t).first().copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn digits() -> Alphabet {
        Alphabet::new("01234").unwrap()
    }

    fn brute_min_rotation(s: &[Letter]) -> Vec<Letter> {
        (0..s.len()).map(|k| rotated(s, k)).min().unwrap()
    }

    #[test]
    fn alphabet_rejects_duplicates_and_blanks() {
        assert_eq!(Alphabet::new("0120"), Err(Error::DuplicateSymbol('0')));
        assert_eq!(Alphabet::new("a b"), Err(Error::InvalidSymbol(' ')));
        assert_eq!(Alphabet::new(""), Err(Error::EmptyAlphabet));
        assert!(digits().parse("015").is_err());
    }

    #[test]
    fn rotate_examples() {
        let a = digits();
        let w = a.parse("0120301240324").unwrap();
        assert_eq!(w.rotate(12).unwrap().to_string(), "4012030124032");
        assert_eq!(w.rotate(0).unwrap(), w);
        assert_eq!(w.rotate(13).unwrap(), w);
        assert_eq!(a.parse("03").unwrap().rotate(1).unwrap().to_string(), "30");
        assert_eq!(w.rotate(14), Err(Error::OffsetOutOfRange { offset: 14, len: 13 }));
    }

    #[test]
    fn distinct_rotation_examples() {
        let a = digits();
        let r: Vec<_> = a.parse("03").unwrap().distinct_rotations().unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(r, ["03", "30"]);
        let ab = Alphabet::new("ab").unwrap();
        assert_eq!(ab.parse("aa").unwrap().distinct_rotations().unwrap().len(), 1);
        let w = a.parse("0124").unwrap();
        let brute: BTreeSet<Word> = (0..4).map(|k| w.rotate(k).unwrap()).collect();
        assert_eq!(w.distinct_rotations().unwrap(), brute);
        assert_eq!(brute.len(), 4);
        assert_eq!(a.empty_word().distinct_rotations(), Err(Error::EmptyWord));
    }

    #[test]
    fn canonical_examples() {
        let ab = Alphabet::new("ab").unwrap();
        assert_eq!(ab.parse("ba").unwrap().canonical_rotation().unwrap().to_string(), "ab");
        let a = digits();
        assert_eq!(a.parse("30").unwrap().canonical_rotation().unwrap().to_string(), "03");
        let w = a.parse("4012030124032").unwrap();
        let brute = (0..w.len()).map(|k| w.rotate(k).unwrap()).min().unwrap();
        assert_eq!(w.canonical_rotation().unwrap(), brute);
        // declaration order, not ASCII order
        let rev = Alphabet::new("ba").unwrap();
        assert_eq!(rev.parse("ab").unwrap().canonical_rotation().unwrap().to_string(), "ba");
        assert_eq!(a.empty_word().canonical_rotation(), Err(Error::EmptyWord));
    }

    #[test]
    fn count_letter_examples() {
        let a = digits();
        assert_eq!(a.parse("0120301240324").unwrap().count_letter('1').unwrap(), 2);
        assert_eq!(a.empty_word().count_letter('1').unwrap(), 0);
        assert_eq!(a.parse("012030124012032301240323").unwrap().count_letter('1').unwrap(), 4);
        assert_eq!(a.empty_word().count_letter('x'), Err(Error::UnknownLetter('x')));
    }

    #[test]
    fn find_occurrences_examples() {
        let c = Alphabet::new("abcde").unwrap();
        let g0 = c.parse("abcdeacd").unwrap();
        assert_eq!(g0.find_occurrences(&c.parse("cd").unwrap()).unwrap(), [2, 6]);
        let a = digits();
        assert!(a.parse("01").unwrap().find_occurrences(&a.parse("2").unwrap()).unwrap().is_empty());
        assert_eq!(c.parse("aaa").unwrap().find_occurrences(&c.parse("aa").unwrap()).unwrap(), [0, 1]);
        assert_eq!(g0.find_occurrences(&c.empty_word()), Err(Error::EmptyNeedle));
        assert!(g0.find_occurrences(&a.parse("0").unwrap()).is_err());
    }

    #[test]
    fn least_rotation_exhaustive_binary() {
        for n in 1..=10usize {
            for bits in 0u32..(1 << n) {
                let s: Vec<Letter> = (0..n).map(|i| ((bits >> i) & 1) as Letter).collect();
                assert_eq!(rotated(&s, least_rotation(&s)), brute_min_rotation(&s), "{s:?}");
            }
        }
    }

    #[test]
    fn rotation_offset_finds_offset() {
        let s = [0, 1, 2, 0, 3];
        for k in 0..5 {
            assert_eq!(rotation_offset(&s, &rotated(&s, k)), Some(k));
        }
        assert_eq!(rotation_offset(&s, &[0, 1, 2, 3, 0]), None);
    }

    proptest! {
        #[test]
        fn canonical_is_rotation_invariant(s in proptest::collection::vec(0u8..5, 1..40), k in 0usize..40) {
            let k = k % s.len();
            let r = rotated(&s, k);
            prop_assert_eq!(rotated(&r, least_rotation(&r)), rotated(&s, least_rotation(&s)));
            prop_assert_eq!(rotated(&s, least_rotation(&s)), brute_min_rotation(&s));
        }

        #[test]
        fn rotation_count_divides_length(s in proptest::collection::vec(0u8..2, 1..30)) {
            let a = Alphabet::new("ab").unwrap();
            let w = a.word(s).unwrap();
            let n = w.distinct_rotations().unwrap().len();
            prop_assert_eq!(w.len() % n, 0);
        }

        #[test]
        fn count_letter_rotation_invariant(s in proptest::collection::vec(0u8..5, 1..30), k in 0usize..30) {
            let w = digits().word(s).unwrap();
            let r = w.rotate(k % w.len()).unwrap();
            prop_assert_eq!(w.count_letter('1').unwrap(), r.count_letter('1').unwrap());
        }

        #[test]
        fn occurrences_match_naive(h in proptest::collection::vec(0u8..2, 0..40), n in proptest::collection::vec(0u8..2, 1..4)) {
            let naive: Vec<usize> = (0..h.len().saturating_sub(n.len() - 1))
                .filter(|&i| h[i..].starts_with(&n))
                .collect();
            prop_assert_eq!(find_occurrences(&h, &n), naive);
        }
    }
}
