//! Synchronising markers: a factor that occurs in `h(x)` exactly at the
//! start of each letter image.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::factors::FactorSet;
use crate::morphism::Morphism;
use crate::word::{find_occurrences, Letter, Word};

/// Which of the two words a marker segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    /// The pure morphic word over the source alphabet.
    Underlying,
    /// Its image under the coding morphism.
    Coded,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Underlying => "underlying",
            Level::Coded => "coded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkerSpec {
    pub marker: Word,
    pub level: Level,
}

impl MarkerSpec {
    pub fn new(marker: Word, level: Level) -> Self {
        MarkerSpec { marker, level }
    }
}

/// Why a marker claim fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarkerWitness {
    /// The image of `letter` does not start with the marker.
    NotImagePrefix { letter: Letter },
    /// The marker occurs inside the image of `letter`.
    InteriorOccurrence { letter: Letter, offset: usize },
    /// The marker straddles the junction of the images of the factor `letters`.
    Junction { letters: Vec<Letter>, offset: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarkerCheck {
    Verified,
    Refuted(Vec<MarkerWitness>),
}

impl MarkerCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, MarkerCheck::Verified)
    }
}

/// Number of consecutive preimage letters an occurrence of a marker of
/// length `len` can touch.
pub fn junction_span(marker_len: usize, min_image_len: usize) -> usize {
    if marker_len <= 1 {
        1
    } else {
        2 + (marker_len - 2).div_ceil(min_image_len.max(1))
    }
}

/// Checks that `spec.marker` occurs in `m(x)` only at image starts, for the
/// infinite word `x` whose factors are `factors`.
pub fn verify_marker(spec: &MarkerSpec, m: &Morphism, factors: &FactorSet) -> Result<MarkerCheck> {
    m.target().ensure_same(spec.marker.alphabet())?;
    m.source().ensure_same(factors.alphabet())?;
    let mu = spec.marker.letters();
    if mu.is_empty() {
        return Err(Error::EmptyNeedle);
    }
    if m.is_erasing() {
        return Err(Error::ErasingMorphism);
    }
    let span = junction_span(mu.len(), m.min_image_len());
    if factors.bound() < span {
        return Err(Error::BoundTooSmall { needed: span, have: factors.bound() });
    }

    let mut witnesses = Vec::new();
    for (x, img) in m.images() {
        if !img.starts_with(mu) {
            witnesses.push(MarkerWitness::NotImagePrefix { letter: x });
        }
        for offset in find_occurrences(img, mu) {
            if offset != 0 {
                witnesses.push(MarkerWitness::InteriorOccurrence { letter: x, offset });
            }
        }
    }
    if span >= 2 {
        for u in factors.of_length(span) {
            let image = m.apply_letters(u);
            let mut starts = Vec::with_capacity(u.len());
            let mut at = 0;
            for &x in u {
                starts.push(at);
                at += m.image(x).len();
            }
            let first_len = m.image(u[0]).len();
            for offset in find_occurrences(&image, mu) {
                // interior hits of one image were reported above
                let inside_one =
                    starts.iter().zip(u).any(|(&s, &x)| offset >= s && offset + mu.len() <= s + m.image(x).len());
                if !inside_one && !starts.contains(&offset) && offset < first_len {
                    witnesses.push(MarkerWitness::Junction { letters: u.to_vec(), offset });
                }
            }
        }
    }
    witnesses.dedup();
    Ok(if witnesses.is_empty() { MarkerCheck::Verified } else { MarkerCheck::Refuted(witnesses) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::closure_factor_set;
    use crate::word::Alphabet;

    fn setup() -> (Morphism, Morphism, FactorSet) {
        let u = Alphabet::new("01234").unwrap();
        let c = Alphabet::new("abcde").unwrap();
        let big_f = Morphism::from_strs(&u, &u, &["01", "2", "03", "24", "23"]).unwrap();
        let big_g = Morphism::from_strs(&u, &c, &["abcd", "", "eacd", "becd", "be"]).unwrap();
        let f = big_f.power(3).unwrap();
        let g = Morphism::compose(&big_g, &big_f.power(2).unwrap()).unwrap();
        let set = closure_factor_set(&f, 0, 4).unwrap();
        (f, g, set)
    }

    #[test]
    fn markers_01_and_ab_verify() {
        let (f, g, set) = setup();
        let m01 = MarkerSpec::new(f.target().parse("01").unwrap(), Level::Underlying);
        assert_eq!(verify_marker(&m01, &f, &set).unwrap(), MarkerCheck::Verified);
        let mab = MarkerSpec::new(g.target().parse("ab").unwrap(), Level::Coded);
        assert_eq!(verify_marker(&mab, &g, &set).unwrap(), MarkerCheck::Verified);
    }

    #[test]
    fn cd_is_refuted_with_interior_offset() {
        let (_, g, set) = setup();
        let cd = MarkerSpec::new(g.target().parse("cd").unwrap(), Level::Coded);
        let MarkerCheck::Refuted(w) = verify_marker(&cd, &g, &set).unwrap() else {
            panic!("cd must be refuted");
        };
        assert!(w.contains(&MarkerWitness::InteriorOccurrence { letter: 0, offset: 2 }));
        assert!(w.contains(&MarkerWitness::NotImagePrefix { letter: 0 }));
    }

    #[test]
    fn straddling_marker_is_caught() {
        // the image of 2 ends in 'a', so "aa" appears across its junction
        let (_, g, set) = setup();
        let u = Alphabet::new("01234").unwrap();
        let c = g.target().clone();
        let fake = Morphism::from_strs(&u, &c, &["aab", "aac", "aaba", "aad", "aae"]).unwrap();
        let da = MarkerSpec::new(c.parse("aa").unwrap(), Level::Coded);
        let MarkerCheck::Refuted(w) = verify_marker(&da, &fake, &set).unwrap() else {
            panic!("straddle must be refuted");
        };
        assert!(!w.is_empty());
        assert!(w.iter().all(|x| matches!(x, MarkerWitness::Junction { letters, offset: 3 } if letters[0] == 2)));
    }

    #[test]
    fn span_must_fit_in_factor_set() {
        let (f, _, set) = setup();
        let long = MarkerSpec::new(f.target().parse("0120301").unwrap(), Level::Underlying);
        let r = verify_marker(&long, &f, &set.restrict(1).unwrap());
        assert!(matches!(r, Err(Error::BoundTooSmall { .. })));
    }
}
