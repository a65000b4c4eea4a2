//! Exact bounded factor sets of pure morphic words and of their images.
//!
//! Both constructions rely on non-erasure: if every image has length at
//! least `m`, a factor of length `k` of `h(w)` lies inside `h(u)` for some
//! factor `u` of `w` with `|u| <= (k - 2) / m + 2`. Nothing here reads a
//! finite prefix and hopes it is long enough.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::word::{Alphabet, Letter, Word};

/// Largest underlying bound built unless a caller raises it.
pub const DEFAULT_UNDERLYING_LIMIT: usize = 4096;
/// Largest coded bound built unless a caller raises it.
pub const DEFAULT_CODED_LIMIT: usize = 1024;

/// All factors of length at most `bound` of one infinite word.
#[derive(Clone, Debug)]
pub struct FactorSet {
    subject: String,
    alphabet: Alphabet,
    bound: usize,
    by_len: Vec<BTreeSet<Vec<Letter>>>,
}

impl FactorSet {
    /// Rebuilds every shorter length from the longest one. Factors of an
    /// infinite word are right-extendable, so prefixes are enough.
    fn from_longest(subject: String, alphabet: &Alphabet, longest: BTreeSet<Vec<Letter>>, bound: usize) -> Self {
        let mut by_len = alloc::vec![BTreeSet::new(); bound + 1];
        by_len[bound] = longest;
        for len in (0..bound).rev() {
            let shorter = by_len[len + 1].iter().map(|u: &Vec<Letter>| u[..len].to_vec()).collect();
            by_len[len] = shorter;
        }
        FactorSet { subject, alphabet: alphabet.clone(), bound, by_len }
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Membership for raw letters. Words longer than the bound are reported
    /// absent; callers that need a real answer check the bound first.
    pub fn contains_letters(&self, u: &[Letter]) -> bool {
        u.len() <= self.bound && self.by_len[u.len()].contains(u)
    }

    pub fn contains(&self, u: &Word) -> Result<bool> {
        self.alphabet.ensure_same(u.alphabet())?;
        if u.len() > self.bound {
            return Err(Error::BoundTooSmall { needed: u.len(), have: self.bound });
        }
        Ok(self.contains_letters(u.letters()))
    }

    pub fn of_length(&self, len: usize) -> impl Iterator<Item = &[Letter]> + '_ {
        self.by_len.get(len).into_iter().flatten().map(Vec::as_slice)
    }

    pub fn words_of_length(&self, len: usize) -> impl Iterator<Item = Word> + '_ {
        self.of_length(len).map(|u| Word::from_parts(&self.alphabet, u.to_vec()))
    }

    /// Factor complexity at `len`.
    pub fn count(&self, len: usize) -> usize {
        self.by_len.get(len).map_or(0, BTreeSet::len)
    }

    pub fn total(&self) -> usize {
        self.by_len.iter().map(BTreeSet::len).sum()
    }

    /// The same word's factor set at a smaller bound.
    pub fn restrict(&self, bound: usize) -> Result<FactorSet> {
        if bound > self.bound {
            return Err(Error::BoundTooSmall { needed: bound, have: self.bound });
        }
        Ok(FactorSet {
            subject: self.subject.clone(),
            alphabet: self.alphabet.clone(),
            bound,
            by_len: self.by_len[..=bound].to_vec(),
        })
    }
}

/// Shortest preimage span that covers every length-`k` factor of an image
/// under a morphism with minimal image length `min`.
fn cover_span(k: usize, min: usize) -> usize {
    if k <= 1 {
        k
    } else {
        (k - 2) / min + 2
    }
}

fn windows_into(out: &mut BTreeSet<Vec<Letter>>, w: &[Letter], k: usize) -> Vec<Vec<Letter>> {
    let mut fresh = Vec::new();
    if w.len() < k {
        return fresh;
    }
    for win in w.windows(k) {
        if !out.contains(win) {
            out.insert(win.to_vec());
            fresh.push(win.to_vec());
        }
    }
    fresh
}

/// Exact length-`k` factors of `m^ω(seed)`.
fn exact_layer(m: &Morphism, seed: Letter, k: usize) -> Result<BTreeSet<Vec<Letter>>> {
    let mut layer = BTreeSet::new();
    if k == 0 {
        layer.insert(Vec::new());
        return Ok(layer);
    }
    let span = cover_span(k, m.min_image_len());
    if span < k {
        // every length-k factor sits inside the image of a length-span factor
        for u in exact_layer(m, seed, span)? {
            windows_into(&mut layer, &m.apply_letters(&u), k);
        }
        return Ok(layer);
    }
    // worklist closure: images of members, cut back to length k, until nothing new
    let start = m.fixed_point_prefix(seed, k)?;
    let mut queue = windows_into(&mut layer, start.letters(), k);
    while let Some(u) = queue.pop() {
        let fresh = windows_into(&mut layer, &m.apply_letters(&u), k);
        queue.extend(fresh);
    }
    Ok(layer)
}

/// The exact set of factors of length `<= k` of `m^ω(seed)`.
pub fn closure_factor_set(m: &Morphism, seed: Letter, k: usize) -> Result<FactorSet> {
    closure_factor_set_within(m, seed, k, DEFAULT_UNDERLYING_LIMIT)
}

pub fn closure_factor_set_within(m: &Morphism, seed: Letter, k: usize, limit: usize) -> Result<FactorSet> {
    if !m.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    if m.is_erasing() {
        return Err(Error::ErasingMorphism);
    }
    if k == 0 {
        return Err(Error::Config("factor bound must be at least 1".into()));
    }
    if k > limit {
        return Err(Error::BudgetExceeded { requested: k, limit });
    }
    if !m.is_prolongable(seed) {
        return Err(Error::NotProlongable(m.source().symbol(seed)));
    }
    let layer = exact_layer(m, seed, k)?;
    Ok(FactorSet::from_longest(fixed_point_name(m, seed), m.source(), layer, k))
}

fn fixed_point_name(m: &Morphism, seed: Letter) -> String {
    let name = if m.name().is_empty() { "m" } else { m.name() };
    format!("{name}^ω({})", m.source().symbol(seed))
}

/// Underlying span the coded construction needs for coded bound `k`.
pub fn required_underlying_bound(k: usize, coder: &Morphism) -> usize {
    k.div_ceil(coder.min_image_len().max(1)) + 1
}

/// The exact set of factors of length `<= k` of `coder(x)`, where
/// `underlying` is the factor set of `x`.
pub fn coded_factor_set(underlying: &FactorSet, coder: &Morphism, k: usize) -> Result<FactorSet> {
    coded_factor_set_within(underlying, coder, k, DEFAULT_CODED_LIMIT)
}

pub fn coded_factor_set_within(underlying: &FactorSet, coder: &Morphism, k: usize, limit: usize) -> Result<FactorSet> {
    coder.source().ensure_same(underlying.alphabet())?;
    if coder.is_erasing() {
        return Err(Error::ErasingMorphism);
    }
    if k == 0 {
        return Err(Error::Config("factor bound must be at least 1".into()));
    }
    if k > limit {
        return Err(Error::BudgetExceeded { requested: k, limit });
    }
    let needed = required_underlying_bound(k, coder);
    if underlying.bound() < needed {
        return Err(Error::BoundTooSmall { needed, have: underlying.bound() });
    }
    let mut layer = BTreeSet::new();
    for u in underlying.of_length(needed) {
        windows_into(&mut layer, &coder.apply_letters(u), k);
    }
    let name = if coder.name().is_empty() { "h" } else { coder.name() };
    let subject = format!("{name}({})", underlying.subject());
    Ok(FactorSet::from_longest(subject, coder.target(), layer, k))
}

/// Every factor of length `<= k` of a finite word, as a set per length.
/// Used as the brute-force side of oracle checks.
pub fn factors_of_finite(w: &[Letter], k: usize) -> Vec<BTreeSet<Vec<Letter>>> {
    (0..=k)
        .map(
            |len| {
                if len > w.len() {
                    BTreeSet::new()
                } else {
                    w.windows(len.max(1)).map(|x| x[..len].to_vec()).collect()
                }
            },
        )
        .collect()
}
