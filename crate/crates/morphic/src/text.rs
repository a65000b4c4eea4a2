//! Plain-text rendering. Timings are left out so that equal runs print
//! equal text.

use std::fmt::Write;

use morphic_core::oracle::{Completion, Derivation, Step};
use morphic_core::verify::VerificationReport;
use morphic_core::MembershipVerdict;

const WORD_PREVIEW: usize = 60;
const REASON_PREVIEW: usize = 240;

fn cut(s: &str, max: usize) -> String {
    let n = s.chars().count();
    if n <= max {
        s.to_string()
    } else {
        format!("{}... ({n} characters)", s.chars().take(max).collect::<String>())
    }
}

fn preview(w: &str) -> String {
    cut(w, WORD_PREVIEW)
}

pub fn report_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    for r in &report.records {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let tag = r.status.as_str().to_uppercase();
        if params.is_empty() {
            let _ = writeln!(out, "{tag:<8}{}", r.name);
        } else {
            let _ = writeln!(out, "{tag:<8}{} [{}]", r.name, params.join(", "));
        }
        if let Some(reason) = r.status.reason() {
            let _ = writeln!(out, "        reason: {}", cut(reason, REASON_PREVIEW));
        }
        for (k, v) in &r.witness {
            let _ = writeln!(out, "        {k}: {}", preview(v));
        }
    }
    let _ = writeln!(
        out,
        "{} checks: {} passed, {} failed, {} skipped",
        report.records.len(),
        report.count("pass"),
        report.count("fail"),
        report.count("skipped")
    );
    out
}

fn completion(c: &Completion, d: &Derivation) -> String {
    match c {
        Completion::Boundary => "|".into(),
        Completion::AnyLetter => "*".into(),
        Completion::Letter(x) => d.word.alphabet().symbol(*x).to_string(),
    }
}

fn derivation(d: &Derivation, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let verdict = if d.verdict() { "factor" } else { "non-factor" };
    match &d.step {
        Step::Lookup { bound, found } => {
            let how = if *found { "found" } else { "absent" };
            let _ = writeln!(
                out,
                "{pad}{} {}: {how} in factors up to length {bound}",
                d.level.as_str(),
                preview(&d.word.to_string())
            );
        }
        Step::WindowMissing { offset, len } => {
            let window = d.word.alphabet().render(&d.word.letters()[*offset..offset + len]);
            let _ = writeln!(
                out,
                "{pad}{} word of length {}: window {window} at {offset} is absent",
                d.level.as_str(),
                d.word.len()
            );
        }
        Step::Desubstitution { morphism, branches } => {
            let _ = writeln!(
                out,
                "{pad}{} word of length {}: {} parse(s) under {morphism}, {verdict}",
                d.level.as_str(),
                d.word.len(),
                branches.len()
            );
            for b in branches {
                let _ = writeln!(
                    out,
                    "{pad}  completion left {} right {}:",
                    completion(&b.left, &b.outcome),
                    completion(&b.right, &b.outcome)
                );
                derivation(&b.outcome, indent + 4, out);
            }
        }
    }
}

pub fn verdict_text(v: &MembershipVerdict) -> String {
    let mut out = String::new();
    let verdict = if v.is_factor { "factor" } else { "non-factor" };
    let _ = writeln!(out, "{}: {verdict} ({})", preview(&v.word.to_string()), v.level.as_str());
    derivation(&v.derivation, 2, &mut out);
    out
}
