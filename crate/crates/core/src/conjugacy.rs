//! Conjugacy classes, completeness against a factor universe, and
//! avoidance certificates.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::factors::FactorSet;
use crate::marker::Level;
use crate::oracle::{MembershipVerdict, MorphicOracle};
use crate::word::{least_rotation, primitive_root_len, rotated, rotation_offset, Alphabet, Letter, Word};

/// Symbol whose occurrences give the index of an underlying class.
pub const INDEX_SYMBOL: char = '1';

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    canonical: Word,
    elements: Vec<Word>,
    index: Option<usize>,
}

impl ConjugacyClass {
    /// The least rotation.
    pub fn canonical(&self) -> &Word {
        &self.canonical
    }

    /// Distinct rotations, sorted.
    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    /// Number of `1`s in any element, when the alphabet has that letter.
    pub fn index(&self) -> Option<usize> {
        self.index
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.elements.binary_search(w).is_ok()
    }
}

pub fn class_of(w: &Word) -> Result<ConjugacyClass> {
    let canonical = w.canonical_rotation()?;
    let elements: Vec<Word> = w.distinct_rotations()?.into_iter().collect();
    let index = canonical.count_letter(INDEX_SYMBOL).ok();
    debug_assert!(elements.iter().all(|e| e.count_letter(INDEX_SYMBOL).ok() == index));
    Ok(ConjugacyClass { canonical, elements, index })
}

/// Where a membership answer came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Exact factor set of the given bound.
    Lookup { bound: usize },
    /// De-substitution derivation.
    Derivation(Box<MembershipVerdict>),
}

/// A rotation of the class that is not a factor, with its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidanceCertificate {
    pub class: ConjugacyClass,
    /// The word whose rotations were scanned.
    pub base: Word,
    /// `missing_rotation` is `base` rotated right by `shift` letters.
    pub shift: usize,
    pub missing_rotation: Word,
    pub evidence: Evidence,
}

impl AvoidanceCertificate {
    /// Re-checks that the missing word is a rotation of the class and that
    /// the evidence still proves it absent.
    pub fn replay(&self, universe: &Universe<'_>) -> Result<()> {
        let n = self.base.len();
        let expect = rotated(self.base.letters(), (n - self.shift % n) % n);
        let in_class = rotation_offset(self.class.canonical.letters(), self.missing_rotation.letters()).is_some();
        if expect != self.missing_rotation.letters() || !in_class {
            return Err(Error::Config("certificate rotation does not match its class".into()));
        }
        let absent = match (&self.evidence, universe) {
            (Evidence::Lookup { bound }, Universe::Set(set)) => {
                *bound == set.bound() && !set.contains(&self.missing_rotation)?
            }
            (Evidence::Lookup { bound }, Universe::Oracle(o, level)) => {
                let set = o.factor_set(*level);
                *bound == set.bound() && !set.contains(&self.missing_rotation)?
            }
            (Evidence::Derivation(v), Universe::Oracle(o, level)) => {
                v.level == *level && v.word == self.missing_rotation && !v.replay(o)?
            }
            (Evidence::Derivation(_), Universe::Set(_)) => false,
        };
        if absent {
            Ok(())
        } else {
            Err(Error::Config("certificate evidence does not replay".into()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    Avoided(Box<AvoidanceCertificate>),
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        matches!(self, Completeness::Complete)
    }

    pub fn certificate(&self) -> Option<&AvoidanceCertificate> {
        match self {
            Completeness::Complete => None,
            Completeness::Avoided(c) => Some(c),
        }
    }
}

/// What membership questions are answered against.
#[derive(Clone, Copy, Debug)]
pub enum Universe<'a> {
    Set(&'a FactorSet),
    Oracle(&'a MorphicOracle, Level),
}

impl Universe<'_> {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Universe::Set(s) => s.alphabet(),
            Universe::Oracle(o, level) => o.alphabet(*level),
        }
    }

    fn membership(&self, w: &Word) -> Result<(bool, Evidence)> {
        match self {
            Universe::Set(set) => {
                if w.len() > set.bound() {
                    return Err(Error::ClassTooLong { len: w.len(), bound: set.bound() });
                }
                Ok((set.contains(w)?, Evidence::Lookup { bound: set.bound() }))
            }
            Universe::Oracle(o, level) => {
                let set = o.factor_set(*level);
                if w.len() <= set.bound() {
                    Ok((set.contains(w)?, Evidence::Lookup { bound: set.bound() }))
                } else {
                    let v = o.decide(w, *level)?;
                    Ok((v.is_factor, Evidence::Derivation(Box::new(v))))
                }
            }
        }
    }
}

/// Scans the rotations of `base` by increasing right shift and stops at the
/// first one that is not a factor.
fn scan(class: ConjugacyClass, base: &Word, universe: &Universe<'_>) -> Result<Completeness> {
    let n = base.len();
    let period = primitive_root_len(base.letters());
    for shift in 0..period {
        let r = base.rotate((n - shift) % n)?;
        let (present, evidence) = universe.membership(&r)?;
        if !present {
            return Ok(Completeness::Avoided(Box::new(AvoidanceCertificate {
                class,
                base: base.clone(),
                shift,
                missing_rotation: r,
                evidence,
            })));
        }
    }
    Ok(Completeness::Complete)
}

/// Whether every rotation of the class is a factor of the universe word.
pub fn is_complete(class: &ConjugacyClass, universe: &FactorSet) -> Result<Completeness> {
    universe.alphabet().ensure_same(class.canonical.alphabet())?;
    if class.len() > universe.bound() {
        return Err(Error::ClassTooLong { len: class.len(), bound: universe.bound() });
    }
    scan(class.clone(), &class.canonical, &Universe::Set(universe))
}

/// Like [`is_complete`] for the class of `w`, scanning rotations of `w`
/// itself, with de-substitution for words beyond the factor-set bound.
pub fn class_avoided_in_word(w: &Word, universe: &Universe<'_>) -> Result<Completeness> {
    universe.alphabet().ensure_same(w.alphabet())?;
    if w.len() < 2 {
        return Err(Error::Config("conjugacy classes start at length 2".into()));
    }
    scan(class_of(w)?, w, universe)
}

fn is_canonical(u: &[Letter]) -> bool {
    least_rotation(u) == 0
}

/// All complete classes with `2 <= length <= max_len`, optionally only those
/// with index at most `max_index`, sorted by length then canonical form.
pub fn complete_classes_up_to(
    universe: &FactorSet,
    max_len: usize,
    max_index: Option<usize>,
) -> Result<Vec<ConjugacyClass>> {
    if max_len > universe.bound() {
        return Err(Error::BoundTooSmall { needed: max_len, have: universe.bound() });
    }
    let index_letter = universe.alphabet().letter(INDEX_SYMBOL).ok();
    let mut out = Vec::new();
    for len in 2..=max_len {
        for u in universe.of_length(len) {
            if !is_canonical(u) {
                continue;
            }
            if let (Some(limit), Some(x)) = (max_index, index_letter) {
                if u.iter().filter(|&&l| l == x).count() > limit {
                    continue;
                }
            }
            let period = primitive_root_len(u);
            if (1..period).all(|k| universe.contains_letters(&rotated(u, k))) {
                let w = universe.alphabet().word(u.to_vec())?;
                out.push(class_of(&w)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::{closure_factor_set, coded_factor_set};
    use crate::morphism::Morphism;
    use crate::oracle::OracleConfig;
    use alloc::string::{String, ToString};
    use std::sync::OnceLock;

    struct Fixture {
        under: FactorSet,
        coded: FactorSet,
        oracle: MorphicOracle,
        g: Morphism,
    }

    fn fx() -> &'static Fixture {
        static F: OnceLock<Fixture> = OnceLock::new();
        F.get_or_init(|| {
            let u = Alphabet::new("01234").unwrap();
            let c = Alphabet::new("abcde").unwrap();
            let big_f = Morphism::from_strs(&u, &u, &["01", "2", "03", "24", "23"]).unwrap();
            let big_g = Morphism::from_strs(&u, &c, &["abcd", "", "eacd", "becd", "be"]).unwrap();
            let f = big_f.power(3).unwrap().named("f");
            let g = Morphism::compose(&big_g, &big_f.power(2).unwrap()).unwrap().named("g");
            let under = closure_factor_set(&f, 0, 40).unwrap();
            let coded = coded_factor_set(&under, &g, 40).unwrap();
            let oracle = MorphicOracle::new(
                &f,
                0,
                &g,
                &u.parse("01").unwrap(),
                &c.parse("ab").unwrap(),
                OracleConfig::default(),
            )
            .unwrap();
            Fixture { under, coded, oracle, g }
        })
    }

    fn u(s: &str) -> Word {
        fx().under.alphabet().parse(s).unwrap()
    }

    fn c(s: &str) -> Word {
        fx().coded.alphabet().parse(s).unwrap()
    }

    #[test]
    fn class_of_examples() {
        let k = class_of(&u("03")).unwrap();
        assert_eq!(k.canonical().to_string(), "03");
        let elems: Vec<String> = k.elements().iter().map(|w| w.to_string()).collect();
        assert_eq!(elems, ["03", "30"]);
        assert_eq!(k.index(), Some(0));
        assert_eq!(class_of(&u("0124")).unwrap().index(), Some(1));
        assert_eq!(class_of(&u("0120301240324")).unwrap().index(), Some(2));
        assert_eq!(class_of(&c("abcd")).unwrap().index(), None);
        assert_eq!(class_of(&fx().under.alphabet().empty_word()), Err(Error::EmptyWord));
    }

    #[test]
    fn is_complete_examples() {
        let k = class_of(&u("0120301240324")).unwrap();
        let cert = is_complete(&k, &fx().under).unwrap();
        let cert = cert.certificate().expect("F^4(2) is avoided");
        assert_eq!(cert.missing_rotation.to_string(), "4012030124032");
        assert_eq!(cert.shift, 1);
        cert.replay(&Universe::Set(&fx().under)).unwrap();
        assert!(is_complete(&class_of(&u("03")).unwrap(), &fx().under).unwrap().is_complete());
        let aa = is_complete(&class_of(&c("aa")).unwrap(), &fx().coded).unwrap();
        assert_eq!(aa.certificate().unwrap().missing_rotation.to_string(), "aa");
        let long = class_of(&u(&"0".repeat(41))).unwrap();
        assert_eq!(is_complete(&long, &fx().under), Err(Error::ClassTooLong { len: 41, bound: 40 }));
    }

    #[test]
    fn index_one_classes() {
        let got: Vec<String> = complete_classes_up_to(&fx().under, 8, Some(1))
            .unwrap()
            .iter()
            .map(|k| k.canonical().to_string())
            .collect();
        assert_eq!(got, ["03", "23", "0124", "0324", "01203", "01240323"]);
        assert!(complete_classes_up_to(&fx().under, 1, None).unwrap().is_empty());
        assert!(complete_classes_up_to(&fx().coded, 40, None).unwrap().is_empty());
    }

    #[test]
    fn avoided_in_word_examples() {
        let o = &fx().oracle;
        let coded = Universe::Oracle(o, Level::Coded);
        let g23 = fx().g.apply(&u("23")).unwrap();
        let r = class_avoided_in_word(&g23, &coded).unwrap();
        let cert = r.certificate().unwrap();
        let t23 = "e".to_string() + &fx().g.image_word(3).to_string() + "abcdeacdb";
        assert_eq!(cert.missing_rotation.to_string(), t23);
        cert.replay(&coded).unwrap();

        let r = class_avoided_in_word(&c("abcd"), &Universe::Set(&fx().coded)).unwrap();
        assert_eq!(r.certificate().unwrap().missing_rotation.to_string(), "bcda");
        let r = class_avoided_in_word(&u("03"), &Universe::Oracle(o, Level::Underlying)).unwrap();
        assert!(r.is_complete());
        assert!(class_avoided_in_word(&u("0"), &Universe::Set(&fx().under)).is_err());
    }

    #[test]
    fn long_class_uses_the_decider() {
        // F^4(2) iterated under f is far longer than the lookup bound
        let o = &fx().oracle;
        let f = o.inner();
        let mut w = u("0120301240324");
        for _ in 0..3 {
            w = f.apply(&w).unwrap();
        }
        assert!(w.len() > 200);
        let universe = Universe::Oracle(o, Level::Underlying);
        let r = class_avoided_in_word(&w, &universe).unwrap();
        let cert = r.certificate().expect("class must be avoided");
        assert!(matches!(cert.evidence, Evidence::Derivation(_)));
        cert.replay(&universe).unwrap();
    }

    #[test]
    fn completeness_is_rotation_invariant() {
        for len in 2..=12 {
            for w in fx().under.words_of_length(len) {
                let base = is_complete(&class_of(&w).unwrap(), &fx().under).unwrap().is_complete();
                for k in 1..len {
                    let r = w.rotate(k).unwrap();
                    let other = is_complete(&class_of(&r).unwrap(), &fx().under).unwrap().is_complete();
                    assert_eq!(base, other);
                }
            }
        }
    }

    #[test]
    fn index_is_stable_across_elements() {
        for w in fx().under.words_of_length(20) {
            let k = class_of(&w).unwrap();
            for e in k.elements() {
                assert_eq!(e.count_letter('1').ok(), k.index());
            }
        }
    }
}
