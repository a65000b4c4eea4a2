//! Text format for morphisms.
//!
//! ```text
//! # F
//! 0 -> 01
//! 1 -> 2
//! ```
//!
//! One rule `<letter> -> <image>` per line, an empty image is the empty word
//! and `#` starts a comment. The optional headers `alphabet: <symbols>` and
//! `target: <symbols>` fix the letter order. Without them the source
//! alphabet is the rule letters in order; the target is the source when
//! every image letter belongs to it, else the image letters in order of
//! first appearance.

use std::fs;
use std::path::Path;

use morphic_core::{Alphabet, Morphism};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: morphic_core::Error },
    #[error("no rule for letter '{0}'")]
    MissingRule(char),
    #[error("no rules")]
    Empty,
    #[error(transparent)]
    Core(#[from] morphic_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

struct Header {
    symbols: String,
    line: usize,
}

pub fn parse_morphism(text: &str) -> Result<Morphism, FormatError> {
    let mut source_header: Option<Header> = None;
    let mut target_header: Option<Header> = None;
    let mut rules: Vec<(char, String, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = content.split_once("->") {
            let lhs = lhs.trim();
            let mut chars = lhs.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(syntax(line, format!("expected a single letter before '->', found '{lhs}'"))),
            };
            let image = rhs.trim();
            if image.contains(char::is_whitespace) {
                return Err(syntax(line, format!("image '{image}' contains whitespace")));
            }
            if rules.iter().any(|(c, _, _)| *c == letter) {
                return Err(syntax(line, format!("second rule for letter '{letter}'")));
            }
            rules.push((letter, image.to_string(), line));
        } else if let Some((key, value)) = content.split_once(':') {
            let slot = match key.trim() {
                "alphabet" => &mut source_header,
                "target" => &mut target_header,
                other => return Err(syntax(line, format!("unknown header '{other}'"))),
            };
            if slot.is_some() {
                return Err(syntax(line, format!("repeated header '{}'", key.trim())));
            }
            let symbols: String = value.chars().filter(|c| !c.is_whitespace()).collect();
            Alphabet::new(&symbols).map_err(|source| FormatError::Invalid { line, source })?;
            *slot = Some(Header { symbols, line });
        } else {
            return Err(syntax(line, format!("expected '<letter> -> <image>', found '{content}'")));
        }
    }
    if rules.is_empty() {
        return Err(FormatError::Empty);
    }

    let source = match &source_header {
        Some(h) => Alphabet::new(&h.symbols).map_err(|source| FormatError::Invalid { line: h.line, source })?,
        None => {
            let symbols: String = rules.iter().map(|(c, _, _)| *c).collect();
            let line = rules.iter().map(|r| r.2).max().unwrap_or(1);
            Alphabet::new(&symbols).map_err(|source| FormatError::Invalid { line, source })?
        }
    };
    let target = match &target_header {
        Some(h) => Alphabet::new(&h.symbols).map_err(|source| FormatError::Invalid { line: h.line, source })?,
        None => infer_target(&source, &rules)?,
    };

    let mut images = Vec::with_capacity(source.len());
    for x in source.letters() {
        let symbol = source.symbol(x);
        let Some((_, image, line)) = rules.iter().find(|(c, _, _)| *c == symbol) else {
            return Err(FormatError::MissingRule(symbol));
        };
        images.push(target.parse(image).map_err(|source| FormatError::Invalid { line: *line, source })?);
    }
    for (c, _, line) in &rules {
        if source.letter(*c).is_err() {
            return Err(syntax(*line, format!("letter '{c}' is not in the alphabet")));
        }
    }
    Ok(Morphism::new(&source, &target, images)?)
}

fn infer_target(source: &Alphabet, rules: &[(char, String, usize)]) -> Result<Alphabet, FormatError> {
    let mut symbols = String::new();
    for (_, image, _) in rules {
        for c in image.chars() {
            if !symbols.contains(c) {
                symbols.push(c);
            }
        }
    }
    if symbols.chars().all(|c| source.letter(c).is_ok()) {
        return Ok(source.clone());
    }
    let line = rules.iter().map(|r| r.2).max().unwrap_or(1);
    Alphabet::new(&symbols).map_err(|source| FormatError::Invalid { line, source })
}

pub fn read_morphism(path: &Path) -> Result<Morphism, FormatError> {
    let text =
        fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("h");
    Ok(parse_morphism(&text)?.named(name))
}

/// Writes `m` with both headers, so the result parses back to the same
/// alphabets and images.
pub fn write_morphism(m: &Morphism) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {}\n", m.name()));
    out.push_str(&format!("alphabet: {}\n", m.source().render(&m.source().letters().collect::<Vec<_>>())));
    out.push_str(&format!("target: {}\n", m.target().render(&m.target().letters().collect::<Vec<_>>())));
    for (x, img) in m.images() {
        let image = m.target().render(img);
        if image.is_empty() {
            out.push_str(&format!("{} ->\n", m.source().symbol(x)));
        } else {
            out.push_str(&format!("{} -> {image}\n", m.source().symbol(x)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use morphic_core::verify::Construction;

    const G_TEXT: &str = "\
# G
0 -> abcd
1 ->          # erased
2 -> eacd
3 -> becd
4 -> be
";

    #[test]
    fn reads_erasing_rule_and_infers_target() {
        let g = parse_morphism(G_TEXT).unwrap();
        assert_eq!(g.source().symbols(), b"01234");
        assert_eq!(g.target().symbols(), b"abcde");
        assert!(g.is_erasing());
        assert!(g.image(1).is_empty());
    }

    #[test]
    fn endomorphism_reuses_source() {
        let f = parse_morphism("0 -> 01\n1 -> 2\n2 -> 03\n3 -> 24\n4 -> 23\n").unwrap();
        assert!(f.is_endomorphism());
        assert_eq!(f.target().symbols(), b"01234");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_morphism("0 -> 01\n\n1 => 2\n").unwrap_err().to_string();
        assert!(err.starts_with("line 3:"), "{err}");
        let err = parse_morphism("0 -> 01\n0 -> 2\n").unwrap_err().to_string();
        assert!(err.starts_with("line 2:"), "{err}");
        let err = parse_morphism("alphabet: 01\n0 -> 01\n").unwrap_err();
        assert!(matches!(err, FormatError::MissingRule('1')));
        let err = parse_morphism("alphabet: 01\ntarget: ab\n0 -> ab\n1 -> ax\n").unwrap_err().to_string();
        assert!(err.starts_with("line 4:"), "{err}");
        assert!(matches!(parse_morphism("# nothing\n"), Err(FormatError::Empty)));
    }

    #[test]
    fn preset_round_trips() {
        let pm = Construction::preset();
        for m in [&pm.big_f, &pm.big_g, &pm.f, &pm.g] {
            let back = parse_morphism(&write_morphism(m)).unwrap();
            assert!(back.same_images(m));
            assert_eq!(back.source(), m.source());
            assert_eq!(back.target(), m.target());
        }
    }
}
