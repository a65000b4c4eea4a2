//! The five-letter construction: morphism tables, the conjugates that
//! witness avoidance for each infinite family, and the neighbour and
//! image facts their inductive arguments rest on.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::factors::FactorSet;
use crate::morphism::Morphism;
use crate::oracle::{MorphicOracle, OracleConfig};
use crate::word::{Alphabet, Letter, Word};

pub const UNDERLYING_SYMBOLS: &str = "01234";
pub const CODED_SYMBOLS: &str = "abcde";

pub const TABLE_BIG_F: [&str; 5] = ["01", "2", "03", "24", "23"];
pub const TABLE_BIG_G: [&str; 5] = ["abcd", "", "eacd", "becd", "be"];
pub const TABLE_F: [&str; 5] = ["01203", "0124", "0120323", "01240324", "01240323"];
pub const TABLE_G: [&str; 5] = ["abcdeacd", "abcdbecd", "abcdeacdbe", "abcdbecdeacdbecd", "abcdbecdeacdbe"];

pub const F4_OF_2: &str = "0120301240324";
pub const F5_OF_2: &str = "012030124012032301240323";
pub const F4_CONJUGATE: &str = "4012030124032";
pub const F5_CONJUGATE: &str = "301203012401203230124032";

pub const UNDERLYING_MARKER: &str = "01";
pub const CODED_MARKER: &str = "ab";

/// `F`, `G` and the derived `f = F^3`, `g = G ∘ F^2`.
#[derive(Clone, Debug)]
pub struct Construction {
    pub big_f: Morphism,
    pub big_g: Morphism,
    pub f: Morphism,
    pub g: Morphism,
}

impl Construction {
    pub fn preset() -> Self {
        let u = Alphabet::new(UNDERLYING_SYMBOLS).expect("static alphabet");
        let c = Alphabet::new(CODED_SYMBOLS).expect("static alphabet");
        let big_f = Morphism::from_strs(&u, &u, &TABLE_BIG_F).expect("static table");
        let big_g = Morphism::from_strs(&u, &c, &TABLE_BIG_G).expect("static table");
        Self::from_base(big_f, big_g).expect("preset tables compose")
    }

    pub fn from_base(big_f: Morphism, big_g: Morphism) -> Result<Self> {
        let big_f = big_f.named("F");
        let big_g = big_g.named("G");
        let f = big_f.power(3)?.named("f");
        let g = Morphism::compose(&big_g, &big_f.power(2)?)?.named("g");
        Ok(Construction { big_f, big_g, f, g })
    }

    pub fn underlying(&self) -> &Alphabet {
        self.big_f.source()
    }

    pub fn coded(&self) -> &Alphabet {
        self.big_g.target()
    }

    /// The seed of the fixed point, `0`.
    pub fn seed(&self) -> Result<Letter> {
        self.underlying().letter('0')
    }

    pub fn oracle(&self, config: OracleConfig) -> Result<MorphicOracle> {
        let m01 = self.underlying().parse(UNDERLYING_MARKER)?;
        let mab = self.coded().parse(CODED_MARKER)?;
        MorphicOracle::new(&self.f, self.seed()?, &self.g, &m01, &mab, config)
    }

    /// `f^i(w)` for `i = 0..=d`.
    pub fn f_iterates(&self, w: &str, d: u32) -> Result<Vec<Vec<Letter>>> {
        let mut out = Vec::with_capacity(d as usize + 1);
        out.push(self.underlying().parse(w)?.into_letters());
        for i in 0..d as usize {
            let next = self.f.apply_letters(&out[i]);
            out.push(next);
        }
        Ok(out)
    }

    pub fn apply_f_power(&self, w: &str, d: u32) -> Result<Vec<Letter>> {
        Ok(self.f_iterates(w, d)?.pop().unwrap_or_default())
    }
}

/// The four infinite families handled by explicit conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `g(f^d(23))`
    T23,
    /// `g(f^d(0324))`
    T0324,
    /// `g(f^d(01240323)) = g(f^{d+1}(4))`
    T01240323,
    /// `g(f^d(01203)) = g(f^{d+1}(0))`
    T01203,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::T23, Family::T0324, Family::T01240323, Family::T01203];

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.t_name() == name)
    }

    fn shape(self) -> &'static Shape {
        match self {
            Family::T23 => &SHAPE_23,
            Family::T0324 => &SHAPE_0324,
            Family::T01240323 => &SHAPE_01240323,
            Family::T01203 => &SHAPE_01203,
        }
    }

    /// Name of the conjugate, e.g. `T23`.
    pub fn t_name(self) -> &'static str {
        self.shape().name
    }

    /// The underlying word whose `g(f^d(.))` image is attacked.
    pub fn target_word(self) -> &'static str {
        self.shape().target
    }

    /// The underlying non-factor the contradiction lands on.
    pub fn forbidden_word(self) -> &'static str {
        self.shape().forbidden
    }

    pub fn facts(self) -> &'static [Fact] {
        match self {
            Family::T23 => &FACTS_23,
            Family::T0324 => &FACTS_0324,
            Family::T01240323 => &FACTS_01240323,
            Family::T01203 => &FACTS_01203,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.t_name())
    }
}

/// `T = prefix_letters · g(∏_{i=0..=d} f^i(prefix_word)) ·
///      g(lead · ∏_{i=top..=0} f^i(suffix_word)) · suffix_letters`
/// where `lead` is `f^d(suffix_lead)` when present and `top` is `d - 1` or `d`.
struct Shape {
    name: &'static str,
    target: &'static str,
    forbidden: &'static str,
    prefix_letters: &'static str,
    prefix_word: &'static str,
    suffix_lead: Option<&'static str>,
    suffix_word: &'static str,
    suffix_from_d: bool,
    suffix_letters: &'static str,
}

static SHAPE_23: Shape = Shape {
    name: "T23",
    target: "23",
    forbidden: "232",
    prefix_letters: "e",
    prefix_word: "3",
    suffix_lead: None,
    suffix_word: "01203",
    suffix_from_d: false,
    suffix_letters: "abcdeacdb",
};

static SHAPE_0324: Shape = Shape {
    name: "T0324",
    target: "0324",
    forbidden: "32403",
    prefix_letters: "acdbecd",
    prefix_word: "24",
    suffix_lead: Some("0"),
    suffix_word: "01240",
    suffix_from_d: false,
    suffix_letters: "abcdbecde",
};

static SHAPE_01240323: Shape = Shape {
    name: "T01240323",
    target: "01240323",
    forbidden: "403230124",
    prefix_letters: "ecdeacdbe",
    prefix_word: "0323",
    suffix_lead: None,
    suffix_word: "012",
    suffix_from_d: true,
    suffix_letters: "abcdb",
};

static SHAPE_01203: Shape = Shape {
    name: "T01203",
    target: "01203",
    forbidden: "030120",
    prefix_letters: "d",
    prefix_word: "3",
    suffix_lead: None,
    suffix_word: "012",
    suffix_from_d: true,
    suffix_letters: "abcdeac",
};

/// A conjugate together with the word it should be a rotation of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TWord {
    pub t: Word,
    pub target: Word,
}

pub fn build_t(pm: &Construction, family: Family, d: u32) -> Result<TWord> {
    let s = family.shape();
    let coded = pm.coded();

    let mut under = Vec::new();
    for it in pm.f_iterates(s.prefix_word, d)? {
        under.extend(it);
    }
    let mut t = coded.parse(s.prefix_letters)?.into_letters();
    t.extend(pm.g.apply_letters(&under));

    let mut under = Vec::new();
    if let Some(lead) = s.suffix_lead {
        under.extend(pm.apply_f_power(lead, d)?);
    }
    let top = if s.suffix_from_d { Some(d) } else { d.checked_sub(1) };
    if let Some(top) = top {
        let its = pm.f_iterates(s.suffix_word, top)?;
        for it in its.into_iter().rev() {
            under.extend(it);
        }
    }
    t.extend(pm.g.apply_letters(&under));
    t.extend(coded.parse(s.suffix_letters)?.into_letters());

    let target = pm.g.apply_letters(&pm.apply_f_power(s.target, d)?);
    Ok(TWord { t: coded.word(t)?, target: coded.word(target)? })
}

pub fn build_t23(pm: &Construction, d: u32) -> Result<TWord> {
    build_t(pm, Family::T23, d)
}

pub fn build_t0324(pm: &Construction, d: u32) -> Result<TWord> {
    build_t(pm, Family::T0324, d)
}

pub fn build_t01240323(pm: &Construction, d: u32) -> Result<TWord> {
    build_t(pm, Family::T01240323, d)
}

pub fn build_t01203(pm: &Construction, d: u32) -> Result<TWord> {
    build_t(pm, Family::T01203, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    /// `f`
    Inner,
    /// `g`
    Outer,
}

/// One finite fact used by an induction step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fact {
    /// The letters that can precede (`Left`) or follow (`Right`) `word`
    /// in the underlying word are exactly `letters`.
    Neighbours { word: &'static str, side: Side, letters: &'static str },
    /// `fragment` is a suffix of the image of `of` and not of `not_of`.
    Suffix { table: Table, fragment: &'static str, of: char, not_of: char },
    /// `fragment` is a prefix of the image of `of` and not of `not_of`.
    Prefix { table: Table, fragment: &'static str, of: char, not_of: char },
}

use Fact::{Neighbours, Prefix, Suffix};
use Side::{Left, Right};
use Table::{Inner, Outer};

static FACTS_23: [Fact; 6] = [
    Neighbours { word: "3", side: Left, letters: "02" },
    Suffix { table: Outer, fragment: "e", of: '2', not_of: '0' },
    Suffix { table: Inner, fragment: "23", of: '2', not_of: '0' },
    Neighbours { word: "3", side: Right, letters: "02" },
    Prefix { table: Outer, fragment: "abcdeacdb", of: '2', not_of: '0' },
    Prefix { table: Inner, fragment: "012032", of: '2', not_of: '0' },
];

static FACTS_0324: [Fact; 6] = [
    Neighbours { word: "2", side: Left, letters: "13" },
    Suffix { table: Outer, fragment: "acdbecd", of: '3', not_of: '1' },
    Suffix { table: Inner, fragment: "324", of: '3', not_of: '1' },
    Neighbours { word: "0", side: Right, letters: "13" },
    Prefix { table: Outer, fragment: "abcdbecde", of: '3', not_of: '1' },
    Prefix { table: Inner, fragment: "012403", of: '3', not_of: '1' },
];

static FACTS_01240323: [Fact; 6] = [
    Neighbours { word: "03", side: Left, letters: "24" },
    Suffix { table: Outer, fragment: "ecdeacdbe", of: '4', not_of: '2' },
    Suffix { table: Inner, fragment: "40323", of: '4', not_of: '2' },
    Neighbours { word: "12", side: Right, letters: "04" },
    Prefix { table: Outer, fragment: "abcdb", of: '4', not_of: '0' },
    Prefix { table: Inner, fragment: "0124", of: '4', not_of: '0' },
];

static FACTS_01203: [Fact; 6] = [
    Neighbours { word: "3", side: Left, letters: "02" },
    Suffix { table: Outer, fragment: "d", of: '0', not_of: '2' },
    Suffix { table: Inner, fragment: "03", of: '0', not_of: '2' },
    Neighbours { word: "012", side: Right, letters: "04" },
    Prefix { table: Outer, fragment: "abcdeac", of: '0', not_of: '4' },
    Prefix { table: Inner, fragment: "0120", of: '0', not_of: '4' },
];

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let table = |t: &Table| match t {
            Inner => "f",
            Outer => "g",
        };
        match self {
            Neighbours { word, side: Left, letters } => write!(f, "{word} is preceded only by {{{letters}}}"),
            Neighbours { word, side: Right, letters } => write!(f, "{word} is followed only by {{{letters}}}"),
            Suffix { table: t, fragment, of, not_of } => {
                write!(f, "{fragment} is a suffix of {0}({of}) and not of {0}({not_of})", table(t))
            }
            Prefix { table: t, fragment, of, not_of } => {
                write!(f, "{fragment} is a prefix of {0}({of}) and not of {0}({not_of})", table(t))
            }
        }
    }
}

impl Fact {
    /// Evaluates the fact against the tables and the underlying factor set
    /// (bound at least `|word| + 1` for neighbour facts).
    pub fn holds(&self, pm: &Construction, underlying: &FactorSet) -> Result<bool> {
        match *self {
            Neighbours { word, side, letters } => {
                let w = pm.underlying().parse(word)?;
                let mut found = String::new();
                for x in pm.underlying().letters() {
                    let mut ext = Vec::with_capacity(w.len() + 1);
                    if side == Left {
                        ext.push(x);
                    }
                    ext.extend_from_slice(w.letters());
                    if side == Right {
                        ext.push(x);
                    }
                    if underlying.contains(&pm.underlying().word(ext)?)? {
                        found.push(pm.underlying().symbol(x));
                    }
                }
                Ok(found == letters)
            }
            Suffix { table, fragment, of, not_of } | Prefix { table, fragment, of, not_of } => {
                let m = match table {
                    Inner => &pm.f,
                    Outer => &pm.g,
                };
                let frag = m.target().parse(fragment)?;
                let yes = m.image(m.source().letter(of)?);
                let no = m.image(m.source().letter(not_of)?);
                let is_suffix = matches!(self, Suffix { .. });
                let test = |img: &[Letter]| {
                    if is_suffix {
                        img.ends_with(frag.letters())
                    } else {
                        img.starts_with(frag.letters())
                    }
                };
                Ok(test(yes) && !test(no))
            }
        }
    }
}
