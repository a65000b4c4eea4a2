//! JSON form of verification reports and membership certificates.

use morphic_core::oracle::{Completion, Derivation, Step};
use morphic_core::verify::{CheckRecord, VerificationReport};
use morphic_core::{Alphabet, MembershipVerdict};
use serde_json::{json, Map, Value};

fn pairs(items: &[(String, String)]) -> Value {
    let mut map = Map::new();
    for (k, v) in items {
        map.insert(k.clone(), Value::String(v.clone()));
    }
    Value::Object(map)
}

fn completion(c: &Completion, preimage: &Alphabet) -> Value {
    match c {
        Completion::Boundary => json!("boundary"),
        Completion::AnyLetter => json!("any"),
        Completion::Letter(x) => json!(preimage.symbol(*x).to_string()),
    }
}

fn push_steps(d: &Derivation, depth: usize, out: &mut Vec<Value>) {
    let mut step = json!({
        "depth": depth,
        "level": d.level.as_str(),
        "length": d.word.len(),
        "verdict": d.verdict(),
    });
    let obj = step.as_object_mut().expect("object literal");
    match &d.step {
        Step::Lookup { bound, found } => {
            obj.insert("kind".into(), json!("lookup"));
            obj.insert("bound".into(), json!(bound));
            obj.insert("found".into(), json!(found));
            obj.insert("word".into(), json!(d.word.to_string()));
        }
        Step::WindowMissing { offset, len } => {
            obj.insert("kind".into(), json!("window_missing"));
            obj.insert("offset".into(), json!(offset));
            obj.insert("window".into(), json!(d.word.alphabet().render(&d.word.letters()[*offset..offset + len])));
        }
        Step::Desubstitution { morphism, branches } => {
            obj.insert("kind".into(), json!("desubstitution"));
            obj.insert("morphism".into(), json!(morphism));
            let parses: Vec<Value> = branches
                .iter()
                .map(|b| {
                    let alphabet = b.outcome.word.alphabet();
                    json!({
                        "left": completion(&b.left, alphabet),
                        "right": completion(&b.right, alphabet),
                        "preimage_length": b.outcome.word.len(),
                    })
                })
                .collect();
            obj.insert("branches".into(), Value::Array(parses));
        }
    }
    out.push(step);
    if let Step::Desubstitution { branches, .. } = &d.step {
        for b in branches {
            push_steps(&b.outcome, depth + 1, out);
        }
    }
}

pub fn certificate_json(v: &MembershipVerdict) -> Value {
    let mut steps = Vec::new();
    push_steps(&v.derivation, 0, &mut steps);
    json!({
        "word": v.word.to_string(),
        "level": v.level.as_str(),
        "verdict": if v.is_factor { "factor" } else { "non-factor" },
        "steps": steps,
    })
}

pub fn record_json(r: &CheckRecord, certificates: bool) -> Value {
    let mut v = json!({
        "check": r.name,
        "params": pairs(&r.params),
        "status": r.status.as_str(),
        "witness": pairs(&r.witness),
        "elapsed_ms": r.elapsed_ms,
    });
    let obj = v.as_object_mut().expect("object literal");
    if let Some(reason) = r.status.reason() {
        obj.insert("reason".into(), json!(reason));
    }
    if r.resource {
        obj.insert("resource".into(), json!(true));
    }
    if certificates && !r.certificates.is_empty() {
        obj.insert("certificates".into(), Value::Array(r.certificates.iter().map(certificate_json).collect()));
    }
    v
}

pub fn report_json(report: &VerificationReport, certificates: bool) -> Value {
    json!({
        "passed": report.passed(),
        "summary": {
            "pass": report.count("pass"),
            "fail": report.count("fail"),
            "skipped": report.count("skipped"),
        },
        "checks": report.records.iter().map(|r| record_json(r, certificates)).collect::<Vec<_>>(),
    })
}

/// Blanks every `elapsed_ms`, for comparing runs.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            if map.contains_key("elapsed_ms") {
                map.insert("elapsed_ms".into(), json!(0.0));
            }
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
