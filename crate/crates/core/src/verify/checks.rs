use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::conjugacy::{class_avoided_in_word, complete_classes_up_to, Completeness, Universe, INDEX_SYMBOL};
use crate::error::{Error, Result};
use crate::factors::FactorSet;
use crate::marker::{verify_marker, Level, MarkerCheck, MarkerSpec};
use crate::morphism::Morphism;
use crate::oracle::{forbidden_factor_check, ForbiddenVerdict, MembershipVerdict, MorphicOracle, OracleConfig};
use crate::word::{rotation_offset, Word};

use super::construction::*;
use super::report::{CheckRecord, Clock, Status, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Family conjugates are checked for `d = 0..=max_d`.
    pub max_d: u32,
    /// Longest class length searched in the coded word.
    pub coded_len: usize,
    /// Longest class length in the full enumeration of underlying classes.
    pub enumeration_len: usize,
    /// Added to the index bound when reproducing the index-one classes.
    pub margin: usize,
    pub oracle: OracleConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_d: 5, coded_len: 100, enumeration_len: 40, margin: 2, oracle: OracleConfig::default() }
    }
}

/// Everything established about one `(family, d)` instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyWitness {
    pub family: Family,
    pub d: u32,
    pub t: Word,
    pub target: Word,
    /// `t` is `target` rotated left by this many letters.
    pub rotation_offset: Option<usize>,
    pub non_factor: MembershipVerdict,
    pub forbidden: ForbiddenVerdict,
}

impl FamilyWitness {
    pub fn holds(&self) -> bool {
        self.rotation_offset.is_some() && !self.non_factor.is_factor && !self.forbidden.is_factor
    }
}

pub fn verify_family(oracle: &MorphicOracle, pm: &Construction, family: Family, d: u32) -> Result<FamilyWitness> {
    let TWord { t, target } = build_t(pm, family, d)?;
    let rotation_offset = rotation_offset(target.letters(), t.letters());
    let non_factor = oracle.decide(&t, Level::Coded)?;
    let forbidden = forbidden_lookup(oracle, pm, family.forbidden_word())?;
    Ok(FamilyWitness { family, d, t, target, rotation_offset, non_factor, forbidden })
}

fn forbidden_lookup(oracle: &MorphicOracle, pm: &Construction, word: &str) -> Result<ForbiddenVerdict> {
    let w = pm.underlying().parse(word)?;
    let set = oracle.factor_set(Level::Underlying);
    Ok(ForbiddenVerdict { is_factor: set.contains(&w)?, word: w, bound: set.bound() })
}

fn letter_word(m: &Morphism, symbol: char) -> Result<Word> {
    m.source().parse(&symbol.to_string())
}

fn power_of(m: &Morphism, n: u32, symbol: char) -> Result<Word> {
    m.power(n)?.apply(&letter_word(m, symbol)?)
}

fn canonicals(words: impl IntoIterator<Item = Word>) -> Result<BTreeSet<Word>> {
    words.into_iter().map(|w| w.canonical_rotation()).collect()
}

fn render_set(set: &BTreeSet<Word>) -> String {
    let mut by_len: Vec<&Word> = set.iter().collect();
    by_len.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let parts: Vec<String> = by_len.iter().map(|w| w.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// The members `F(2)`, `F^2(2)`, `F^d(4)`, `f^d(0)` (`d >= 1`) of length
/// at most `max_len`, as canonical rotations.
pub fn c_members_up_to(pm: &Construction, max_len: usize) -> Result<BTreeSet<Word>> {
    let mut out = Vec::new();
    for n in 1..=2 {
        out.push(power_of(&pm.big_f, n, '2')?);
    }
    for (m, seed) in [(&pm.big_f, '4'), (&pm.f, '0')] {
        let mut w = m.apply(&letter_word(m, seed)?)?;
        while w.len() <= max_len {
            let next = m.apply(&w)?;
            out.push(w);
            w = next;
        }
    }
    out.retain(|w| w.len() >= 2 && w.len() <= max_len);
    canonicals(out)
}

/// `F(2), F^2(2), F(4), F^2(4), f(4), f(0)` as canonical rotations.
pub fn c1_classes(pm: &Construction) -> Result<BTreeSet<Word>> {
    canonicals([
        power_of(&pm.big_f, 1, '2')?,
        power_of(&pm.big_f, 2, '2')?,
        power_of(&pm.big_f, 1, '4')?,
        power_of(&pm.big_f, 2, '4')?,
        power_of(&pm.f, 1, '4')?,
        power_of(&pm.f, 1, '0')?,
    ])
}

/// Smallest `k` such that every factor of length `k` contains `letter`,
/// searched up to the bound of the set.
pub fn letter_gap_bound(set: &FactorSet, symbol: char) -> Result<usize> {
    let x = set.alphabet().letter(symbol)?;
    (1..=set.bound())
        .find(|&k| set.of_length(k).all(|u| u.contains(&x)))
        .ok_or(Error::BoundTooSmall { needed: set.bound() + 1, have: set.bound() })
}

fn run(clock: &dyn Clock, mut rec: CheckRecord, body: impl FnOnce(&mut CheckRecord) -> Result<()>) -> CheckRecord {
    let start = clock.now_ms();
    if let Err(e) = body(&mut rec) {
        rec.resource = e.is_resource();
        rec.fail(e.to_string());
    }
    rec.elapsed_ms = clock.now_ms() - start;
    rec
}

fn skipped(name: impl Into<String>, reason: &str) -> CheckRecord {
    let mut rec = CheckRecord::new(name);
    rec.skip(reason);
    rec
}

fn check_table(rec: &mut CheckRecord, derived: &Morphism, printed: &[&str; 5]) -> Result<()> {
    let mut bad = Vec::new();
    if derived.source().len() != printed.len() {
        rec.fail(format!("{} letters, expected {}", derived.source().len(), printed.len()));
        return Ok(());
    }
    for (x, img) in derived.images() {
        let got = derived.target().render(img);
        let want = printed[x as usize];
        rec.note(&format!("{}({})", derived.name(), derived.source().symbol(x)), &got);
        if got != want {
            bad.push(format!("{}({}) = {got}, expected {want}", derived.name(), derived.source().symbol(x)));
        }
    }
    if !bad.is_empty() {
        rec.fail(bad.join("; "));
    }
    Ok(())
}

pub fn table_records(pm: &Construction, clock: &dyn Clock) -> [CheckRecord; 2] {
    [
        run(clock, CheckRecord::new("tables.f").param("definition", "F^3"), |r| check_table(r, &pm.f, &TABLE_F)),
        run(clock, CheckRecord::new("tables.g").param("definition", "G∘F^2"), |r| check_table(r, &pm.g, &TABLE_G)),
    ]
}

pub fn marker_record(oracle: &MorphicOracle, level: Level, clock: &dyn Clock) -> CheckRecord {
    let marker = oracle.marker(level);
    let m = match level {
        Level::Underlying => oracle.inner(),
        Level::Coded => oracle.outer(),
    };
    let rec =
        CheckRecord::new(format!("marker.{}", level.as_str())).param("marker", &marker).param("morphism", m.name());
    run(clock, rec, |r| {
        let spec = MarkerSpec::new(marker, level);
        match verify_marker(&spec, m, oracle.factor_set(Level::Underlying))? {
            MarkerCheck::Verified => r.note("occurrences", "image starts only"),
            MarkerCheck::Refuted(w) => r.fail(format!("{w:?}")),
        }
        Ok(())
    })
}

fn literals(pm: &Construction, rec: &mut CheckRecord) -> Result<()> {
    for (n, printed) in [(4, F4_OF_2), (5, F5_OF_2)] {
        let got = power_of(&pm.big_f, n, '2')?.to_string();
        rec.note(&format!("F^{n}(2)"), &got);
        if got != printed {
            rec.fail(format!("F^{n}(2) = {got}, expected {printed}"));
        }
    }
    Ok(())
}

fn index_one_classes(pm: &Construction, set: &FactorSet, margin: usize, rec: &mut CheckRecord) -> Result<()> {
    // a class of index <= 1 has a rotation 1u with u free of 1
    let gap = letter_gap_bound(set, INDEX_SYMBOL)?;
    let bound = gap + margin;
    rec.note("length_bound", bound);
    rec.note("one_free_max", gap - 1);
    let found = canonicals(complete_classes_up_to(set, bound, Some(1))?.into_iter().map(|c| c.canonical().clone()))?;
    let want = c1_classes(pm)?;
    rec.note("classes", render_set(&found));
    if found != want {
        rec.fail(format!("found {}, expected {}", render_set(&found), render_set(&want)));
    }
    Ok(())
}

fn explicit_conjugates(pm: &Construction, oracle: &MorphicOracle, rec: &mut CheckRecord) -> Result<()> {
    let universe = Universe::Oracle(oracle, Level::Underlying);
    for (n, printed) in [(4, F4_CONJUGATE), (5, F5_CONJUGATE)] {
        let base = power_of(&pm.big_f, n, '2')?;
        match class_avoided_in_word(&base, &universe)? {
            Completeness::Complete => rec.fail(format!("F^{n}(2) is complete")),
            Completeness::Avoided(cert) => {
                cert.replay(&universe)?;
                let missing = cert.missing_rotation.to_string();
                rec.note(&format!("F^{n}(2).missing"), &missing);
                rec.note(&format!("F^{n}(2).shift"), cert.shift);
                if missing != printed {
                    rec.fail(format!("first missing conjugate of F^{n}(2) is {missing}, expected {printed}"));
                }
            }
        }
        let printed_word = pm.underlying().parse(printed)?;
        let verdict = oracle.decide(&printed_word, Level::Underlying)?;
        if verdict.is_factor || verdict.replay(oracle)? {
            rec.fail(format!("{printed} is a factor"));
        }
        if rotation_offset(base.letters(), printed_word.letters()).is_none() {
            rec.fail(format!("{printed} is not a conjugate of F^{n}(2)"));
        }
        rec.certificates.push(verdict);
    }
    Ok(())
}

fn enumeration(pm: &Construction, set: &FactorSet, max_len: usize, rec: &mut CheckRecord) -> Result<()> {
    let found = canonicals(complete_classes_up_to(set, max_len, None)?.into_iter().map(|c| c.canonical().clone()))?;
    let want = c_members_up_to(pm, max_len)?;
    rec.note("classes", render_set(&found));
    rec.note("count", found.len());
    if found != want {
        let extra: BTreeSet<Word> = found.difference(&want).cloned().collect();
        let missing: BTreeSet<Word> = want.difference(&found).cloned().collect();
        rec.fail(format!("unexpected {}, missing {}", render_set(&extra), render_set(&missing)));
    }
    Ok(())
}

pub fn literal_record(pm: &Construction, clock: &dyn Clock) -> CheckRecord {
    run(clock, CheckRecord::new("underlying.literals"), |r| literals(pm, r))
}

pub fn underlying_class_records(
    pm: &Construction,
    oracle: &MorphicOracle,
    cfg: &VerifyConfig,
    clock: &dyn Clock,
) -> [CheckRecord; 4] {
    let set = oracle.factor_set(Level::Underlying);
    [
        literal_record(pm, clock),
        run(clock, CheckRecord::new("underlying.index_one").param("margin", cfg.margin), |r| {
            index_one_classes(pm, set, cfg.margin, r)
        }),
        run(clock, CheckRecord::new("underlying.conjugates"), |r| explicit_conjugates(pm, oracle, r)),
        run(clock, CheckRecord::new("underlying.enumeration").param("max_len", cfg.enumeration_len), |r| {
            enumeration(pm, set, cfg.enumeration_len, r)
        }),
    ]
}

pub fn coded_class_records(
    pm: &Construction,
    oracle: &MorphicOracle,
    cfg: &VerifyConfig,
    clock: &dyn Clock,
) -> [CheckRecord; 2] {
    let classes = run(clock, CheckRecord::new("coded.classes").param("max_len", cfg.coded_len), |r| {
        let coded = oracle.factor_set(Level::Coded);
        let found = complete_classes_up_to(coded, cfg.coded_len, None)?;
        let counts: Vec<String> = (1..=cfg.coded_len).map(|k| coded.count(k).to_string()).collect();
        r.note("factor_counts", counts.join(","));
        r.note("complete_classes", found.len());
        if let Some(c) = found.first() {
            r.fail(format!("{} complete classes, first {}", found.len(), c.canonical()));
        }
        Ok(())
    });
    [classes, threshold_record(pm, cfg, clock)]
}

pub fn threshold_record(pm: &Construction, cfg: &VerifyConfig, clock: &dyn Clock) -> CheckRecord {
    run(clock, CheckRecord::new("coded.threshold"), |r| {
        let one = pm.g.apply(&power_of(&pm.big_f, 1, '2')?)?.len();
        let two = pm.g.apply(&power_of(&pm.big_f, 2, '2')?)?.len();
        r.note("|g(F(2))|", one);
        r.note("|g(F^2(2))|", two);
        if !(one < two && two == 40 && two <= cfg.coded_len) {
            r.fail(format!("|g(F(2))| = {one}, |g(F^2(2))| = {two}, search bound {}", cfg.coded_len));
        }
        Ok(())
    })
}

pub fn forbidden_records(pm: &Construction, clock: &dyn Clock) -> Vec<CheckRecord> {
    Family::ALL
        .into_iter()
        .map(|family| {
            let word = family.forbidden_word();
            run(clock, CheckRecord::new(format!("forbidden.{word}")).param("family", family), |r| {
                let w = pm.underlying().parse(word)?;
                let v = forbidden_factor_check(&pm.f, pm.seed()?, core::slice::from_ref(&w))?.remove(0);
                r.note("bound", v.bound);
                r.note("factor", v.is_factor);
                if v.is_factor {
                    r.fail(format!("{word} is a factor"));
                }
                Ok(())
            })
        })
        .collect()
}

pub fn fact_record(pm: &Construction, oracle: &MorphicOracle, family: Family, clock: &dyn Clock) -> CheckRecord {
    run(clock, CheckRecord::new(format!("facts.{family}")), |r| {
        let set = oracle.factor_set(Level::Underlying);
        for (i, fact) in family.facts().iter().enumerate() {
            let ok = fact.holds(pm, set)?;
            r.note(&format!("fact{}", i + 1), format!("{fact}: {}", if ok { "holds" } else { "false" }));
            if !ok {
                r.fail(format!("{fact} does not hold"));
            }
        }
        Ok(())
    })
}

pub fn family_record(
    pm: &Construction,
    oracle: &MorphicOracle,
    family: Family,
    d: u32,
    clock: &dyn Clock,
) -> CheckRecord {
    let rec = CheckRecord::new(format!("conjugate.{family}"))
        .param("d", d)
        .param("target", format!("g(f^{d}({}))", family.target_word()));
    run(clock, rec, |r| {
        let w = verify_family(oracle, pm, family, d)?;
        r.note("length", w.t.len());
        match w.rotation_offset {
            Some(k) => r.note("rotation_offset", k),
            None => r.note("rotation_offset", "none"),
        }
        r.note("factor", w.non_factor.is_factor);
        r.note("derivation_nodes", w.non_factor.derivation.node_count());
        r.note("derivation_depth", w.non_factor.derivation.depth());
        r.note("forbidden", format!("{} factor={}", w.forbidden.word, w.forbidden.is_factor));
        if d == 0 {
            r.note("note", "products with exponent range down from d-1 are empty at d = 0");
        }
        let replayed = w.non_factor.replay(oracle)?;
        if w.rotation_offset.is_none() {
            r.fail(format!("T = {} is not a rotation of {}", w.t, w.target));
        }
        if w.non_factor.is_factor || replayed {
            r.fail(format!("T = {} is a factor", w.t));
        }
        if w.forbidden.is_factor {
            r.fail(format!("{} is a factor", w.forbidden.word));
        }
        r.certificates.push(w.non_factor);
        Ok(())
    })
}

/// Runs every check in a fixed order.
pub fn full_report(pm: &Construction, cfg: &VerifyConfig, clock: &dyn Clock) -> VerificationReport {
    let mut records: Vec<CheckRecord> = Vec::new();
    records.extend(table_records(pm, clock));

    let mut oracle = None;
    let build = run(clock, CheckRecord::new("oracle.build").param("base_bound", cfg.oracle.base_bound), |r| {
        let o = pm.oracle(cfg.oracle)?;
        r.note("underlying_bound", o.factor_set(Level::Underlying).bound());
        r.note("coded_bound", o.factor_set(Level::Coded).bound());
        oracle = Some(o);
        Ok(())
    });
    let reason = build.status.reason().map(|s| format!("oracle unavailable: {s}"));
    records.push(build);

    match (&oracle, reason) {
        (Some(o), _) => {
            records.push(marker_record(o, Level::Underlying, clock));
            records.push(marker_record(o, Level::Coded, clock));
            records.extend(underlying_class_records(pm, o, cfg, clock));
            records.extend(coded_class_records(pm, o, cfg, clock));
        }
        (None, reason) => {
            let reason = reason.unwrap_or_else(|| "oracle unavailable".to_owned());
            records.push(skipped("marker.underlying", &reason));
            records.push(skipped("marker.coded", &reason));
            records.push(literal_record(pm, clock));
            for name in ["underlying.index_one", "underlying.conjugates", "underlying.enumeration", "coded.classes"] {
                records.push(skipped(name, &reason));
            }
            records.push(threshold_record(pm, cfg, clock));
        }
    }
    records.extend(forbidden_records(pm, clock));
    for family in Family::ALL {
        match &oracle {
            Some(o) => records.push(fact_record(pm, o, family, clock)),
            None => records.push(skipped(format!("facts.{family}"), "oracle unavailable")),
        }
    }
    for family in Family::ALL {
        for d in 0..=cfg.max_d {
            match &oracle {
                Some(o) => records.push(family_record(pm, o, family, d, clock)),
                None => {
                    let mut r = CheckRecord::new(format!("conjugate.{family}")).param("d", d);
                    r.status = Status::Skipped("oracle unavailable".into());
                    records.push(r);
                }
            }
        }
    }
    VerificationReport { records }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::report::NoClock;
    use std::sync::OnceLock;

    fn fx() -> &'static (Construction, MorphicOracle) {
        static F: OnceLock<(Construction, MorphicOracle)> = OnceLock::new();
        F.get_or_init(|| {
            let pm = Construction::preset();
            let o = pm.oracle(OracleConfig::default()).unwrap();
            (pm, o)
        })
    }

    #[test]
    fn family_witnesses_hold_for_small_depths() {
        let (pm, o) = fx();
        for family in Family::ALL {
            for d in 0..=2 {
                let w = verify_family(o, pm, family, d).unwrap();
                assert!(w.holds(), "{family} d={d}");
                assert!(!w.non_factor.replay(o).unwrap());
            }
        }
        let w = verify_family(o, pm, Family::T23, 0).unwrap();
        assert_eq!(w.rotation_offset, Some(9));
        assert_eq!(verify_family(o, pm, Family::T01203, 0).unwrap().forbidden.word.to_string(), "030120");
    }

    #[test]
    fn c_sets() {
        let (pm, o) = fx();
        let c1: Vec<String> = c1_classes(pm).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(c1, ["01203", "0124", "01240323", "03", "0324", "23"]);
        assert_eq!(c_members_up_to(pm, 40).unwrap().len(), 9);
        assert_eq!(letter_gap_bound(o.factor_set(Level::Underlying), '1').unwrap(), 8);
    }

    #[test]
    fn report_at_depth_zero_passes() {
        let (pm, _) = fx();
        let cfg = VerifyConfig { max_d: 0, ..VerifyConfig::default() };
        let report = full_report(pm, &cfg, &NoClock);
        for r in &report.records {
            assert!(r.status.is_pass(), "{}: {}", r.name, r.status);
        }
        assert_eq!(report.records.len(), 2 + 1 + 2 + 4 + 2 + 4 + 4 + 4);
        assert_eq!(report.get("underlying.conjugates").unwrap().certificates.len(), 2);
        assert_eq!(report, full_report(pm, &cfg, &NoClock));
    }

    #[test]
    fn perturbed_table_fails() {
        let pm = Construction::preset();
        let u = pm.underlying().clone();
        let big_f = Morphism::from_strs(&u, &u, &["01", "2", "03", "24", "21"]).unwrap();
        let tampered = Construction::from_base(big_f, pm.big_g.clone()).unwrap();
        let cfg = VerifyConfig { max_d: 0, ..VerifyConfig::default() };
        let report = full_report(&tampered, &cfg, &NoClock);
        assert!(!report.passed());
        assert!(report.get("tables.f").unwrap().status.is_fail());
    }
}
