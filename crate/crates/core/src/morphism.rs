//! Letter-to-word morphisms and fixed points of prolongable endomorphisms.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// A morphism given by its table of letter images.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    name: String,
    source: Alphabet,
    target: Alphabet,
    images: Vec<Vec<Letter>>,
    min_image_len: usize,
    max_image_len: usize,
}

impl Morphism {
    /// Builds a morphism from one image per source letter, in alphabet order.
    pub fn new(source: &Alphabet, target: &Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::ImageCount { expected: source.len(), found: images.len() });
        }
        let mut table = Vec::with_capacity(images.len());
        for w in images {
            target.ensure_same(w.alphabet())?;
            table.push(w.into_letters());
        }
        Ok(Self::from_table(source, target, table))
    }

    /// Images written as strings, one per source letter in order.
    pub fn from_strs(source: &Alphabet, target: &Alphabet, images: &[&str]) -> Result<Self> {
        let words = images.iter().map(|s| target.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(source, target, words)
    }

    fn from_table(source: &Alphabet, target: &Alphabet, images: Vec<Vec<Letter>>) -> Self {
        let min_image_len = images.iter().map(Vec::len).min().unwrap_or(0);
        let max_image_len = images.iter().map(Vec::len).max().unwrap_or(0);
        Morphism {
            name: String::new(),
            source: source.clone(),
            target: target.clone(),
            images,
            min_image_len,
            max_image_len,
        }
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        let images = alphabet.letters().map(|x| alloc::vec![x]).collect();
        Self::from_table(alphabet, alphabet, images).named("id")
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn image(&self, x: Letter) -> &[Letter] {
        &self.images[x as usize]
    }

    pub fn image_word(&self, x: Letter) -> Word {
        Word::from_parts(&self.target, self.images[x as usize].clone())
    }

    pub fn images(&self) -> impl Iterator<Item = (Letter, &[Letter])> {
        self.images.iter().enumerate().map(|(i, img)| (i as Letter, img.as_slice()))
    }

    pub fn min_image_len(&self) -> usize {
        self.min_image_len
    }

    pub fn max_image_len(&self) -> usize {
        self.max_image_len
    }

    pub fn is_erasing(&self) -> bool {
        self.min_image_len == 0
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn is_prolongable(&self, x: Letter) -> bool {
        let img = &self.images[x as usize];
        self.is_endomorphism() && img.len() >= 2 && img[0] == x
    }

    pub fn prolongable_letters(&self) -> Vec<Letter> {
        self.source.letters().filter(|&x| self.is_prolongable(x)).collect()
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.source.ensure_same(w.alphabet())?;
        Ok(Word::from_parts(&self.target, self.apply_letters(w.letters())))
    }

    /// `apply` on raw letters already known to be over the source alphabet.
    pub fn apply_letters(&self, w: &[Letter]) -> Vec<Letter> {
        let len = w.iter().map(|&x| self.images[x as usize].len()).sum();
        let mut out = Vec::with_capacity(len);
        for &x in w {
            out.extend_from_slice(&self.images[x as usize]);
        }
        out
    }

    /// `outer ∘ inner`: first `inner`, then `outer`.
    pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
        outer.source.ensure_same(&inner.target)?;
        let images = inner.images.iter().map(|img| outer.apply_letters(img)).collect();
        Ok(Self::from_table(&inner.source, &outer.target, images))
    }

    /// `n`-fold composition; `power(0)` is the identity.
    pub fn power(&self, n: u32) -> Result<Morphism> {
        if !self.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        let mut acc = Morphism::identity(&self.source);
        for _ in 0..n {
            acc = Morphism::compose(self, &acc)?;
        }
        Ok(acc)
    }

    /// The first `len` letters of the fixed point starting with `seed`.
    pub fn fixed_point_prefix(&self, seed: Letter, len: usize) -> Result<Word> {
        let mut stream = FixedPointStream::new(self, seed)?;
        stream.extend_to(len)?;
        Ok(Word::from_parts(&self.source, stream.prefix()[..len].to_vec()))
    }

    /// Same table, letter for letter.
    pub fn same_images(&self, other: &Morphism) -> bool {
        self.source == other.source && self.target == other.target && self.images == other.images
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, img) in self.images() {
            m.entry(&self.source.symbol(x), &self.target.render(img));
        }
        m.finish()
    }
}

/// Incrementally generated prefix of `m^ω(seed)`.
///
/// The buffer always equals `m(buffer[..expanded])`, so extending never
/// rewrites letters already emitted.
#[derive(Clone, Debug)]
pub struct FixedPointStream<'a> {
    morphism: &'a Morphism,
    seed: Letter,
    buffer: Vec<Letter>,
    expanded: usize,
}

impl<'a> FixedPointStream<'a> {
    pub fn new(morphism: &'a Morphism, seed: Letter) -> Result<Self> {
        if !morphism.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        if seed as usize >= morphism.source.len() {
            return Err(Error::LetterOutOfRange(seed));
        }
        if !morphism.is_prolongable(seed) {
            return Err(Error::NotProlongable(morphism.source.symbol(seed)));
        }
        Ok(FixedPointStream { morphism, seed, buffer: morphism.image(seed).to_vec(), expanded: 1 })
    }

    pub fn extend_to(&mut self, len: usize) -> Result<()> {
        while self.buffer.len() < len {
            if self.expanded >= self.buffer.len() {
                return Err(Error::FiniteFixedPoint(self.morphism.source.symbol(self.seed)));
            }
            let x = self.buffer[self.expanded];
            self.buffer.extend_from_slice(self.morphism.image(x));
            self.expanded += 1;
        }
        Ok(())
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.buffer
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }
}

/// The first `len` letters of `outer(inner^ω(seed))`. `outer` may be erasing,
/// as long as the image keeps growing.
pub fn coded_prefix(inner: &Morphism, seed: Letter, outer: &Morphism, len: usize) -> Result<Word> {
    inner.target.ensure_same(&outer.source)?;
    let mut stream = FixedPointStream::new(inner, seed)?;
    let mut out = Vec::with_capacity(len);
    let mut used = 0;
    let stall_limit = 64 * len + 1024;
    while out.len() < len {
        if used >= stall_limit {
            return Err(Error::FiniteFixedPoint(inner.source.symbol(seed)));
        }
        stream.extend_to(used + 1)?;
        out.extend_from_slice(outer.image(stream.prefix()[used]));
        used += 1;
    }
    out.truncate(len);
    Ok(Word::from_parts(&outer.target, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn big_f() -> Morphism {
        let u = Alphabet::new("01234").unwrap();
        Morphism::from_strs(&u, &u, &["01", "2", "03", "24", "23"]).unwrap()
    }

    fn big_g() -> Morphism {
        let u = Alphabet::new("01234").unwrap();
        let c = Alphabet::new("abcde").unwrap();
        Morphism::from_strs(&u, &c, &["abcd", "", "eacd", "becd", "be"]).unwrap()
    }

    fn word(m: &Morphism, s: &str) -> Word {
        m.source().parse(s).unwrap()
    }

    #[test]
    fn metadata() {
        let f = big_f();
        assert!(!f.is_erasing());
        assert_eq!((f.min_image_len(), f.max_image_len()), (1, 2));
        assert_eq!(f.prolongable_letters(), [0]);
        let g = big_g();
        assert!(g.is_erasing());
        assert!(g.prolongable_letters().is_empty());
    }

    #[test]
    fn apply_examples() {
        let f = big_f();
        let g = big_g();
        assert_eq!(f.apply(&word(&f, "0")).unwrap().to_string(), "01");
        assert!(g.apply(&word(&g, "1")).unwrap().is_empty());
        assert_eq!(f.apply(&word(&f, "01203")).unwrap().to_string(), "012030124");
        assert_eq!(g.apply(&word(&g, "012")).unwrap().to_string(), "abcdeacd");
        assert!(g.apply(&g.source().empty_word()).unwrap().is_empty());
        let wrong = g.target().parse("ab").unwrap();
        assert!(matches!(f.apply(&wrong), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn compose_and_power() {
        let f = big_f();
        let g = big_g();
        let f2 = f.power(2).unwrap();
        assert_eq!(f2.image_word(2).to_string(), "0124");
        let small_g = Morphism::compose(&g, &f2).unwrap();
        assert_eq!(small_g.image_word(0).to_string(), "abcdeacd");
        assert_eq!(f.power(3).unwrap().image_word(4).to_string(), "01240323");
        assert_eq!(f.power(4).unwrap().image_word(2).to_string(), "0120301240324");
        assert!(f.power(0).unwrap().same_images(&Morphism::identity(f.source())));
        let id = Morphism::identity(f.source());
        assert!(Morphism::compose(&id, &f).unwrap().same_images(&f));
        assert_eq!(g.power(2).unwrap_err(), Error::NotEndomorphism);
        assert!(matches!(Morphism::compose(&f, &g), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn fixed_point_examples() {
        let f = big_f();
        assert!(f.fixed_point_prefix(0, 5).unwrap().to_string().starts_with("01203"));
        assert_eq!(f.fixed_point_prefix(0, 1).unwrap().to_string(), "0");
        let small_f = f.power(3).unwrap();
        assert_eq!(small_f.fixed_point_prefix(0, 9).unwrap().to_string(), "012030124");
        assert_eq!(f.fixed_point_prefix(2, 3), Err(Error::NotProlongable('2')));
        assert_eq!(f.fixed_point_prefix(0, 0).unwrap().len(), 0);
    }

    #[test]
    fn fixed_point_prefix_is_stable() {
        let f = big_f();
        let long = f.fixed_point_prefix(0, 5000).unwrap();
        for n in [1, 7, 100, 999, 4999] {
            assert!(f.fixed_point_prefix(0, n).unwrap().is_prefix_of(&long));
        }
        // the prefix is fixed by F
        let img = f.apply(&long).unwrap();
        assert!(long.is_prefix_of(&img));
    }

    #[test]
    fn coded_prefix_is_stable() {
        let f = big_f();
        let g = big_g();
        let long = coded_prefix(&f, 0, &g, 20_000).unwrap();
        for n in [16, 300, 12_345] {
            let short = coded_prefix(&f, 0, &g, n).unwrap();
            assert!(short.is_prefix_of(&long));
        }
        assert_eq!(coded_prefix(&f, 0, &g, 16).unwrap().to_string(), "abcdeacdabcdbecd");
        let direct = g.apply(&f.fixed_point_prefix(0, 3000).unwrap()).unwrap();
        let n = direct.len().min(long.len());
        assert_eq!(direct.letters()[..n], long.letters()[..n]);
    }

    #[test]
    fn finite_fixed_point_is_reported() {
        let a = Alphabet::new("01").unwrap();
        let m = Morphism::from_strs(&a, &a, &["01", ""]).unwrap();
        assert_eq!(m.fixed_point_prefix(0, 5), Err(Error::FiniteFixedPoint('0')));
    }
}
