//! Soundex and NYSIIS phonetic encoders plus the numeric embedding of
//! soundex codes that the clustering and distance modules consume.

use std::fmt;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::metrics::euclidean;
use crate::num::{real, Real};

/// A 4-character American Soundex code: one letter followed by three
/// digits in 0..=6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SoundexCode([u8; 4]);

impl SoundexCode {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).unwrap()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        let ok = b.len() == 4
            && b[0].is_ascii_uppercase()
            && b[1..].iter().all(|d| (b'0'..=b'6').contains(d));
        if !ok {
            return Err(Error::Validation(format!("not a soundex code: {s:?}")));
        }
        Ok(SoundexCode([b[0], b[1], b[2], b[3]]))
    }
}

impl fmt::Display for SoundexCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Soundex code embedded into the unit 4-cube: letter index scaled by
/// 1/25, each digit scaled by 1/6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoundexVector<F = f64>(pub [F; 4]);

/// Strip diacritics and non-Latin characters, keeping only uppercased
/// A-Z. Encoding-only: stored surfaces keep their diacritics.
fn fold_letters(surface: &str) -> Vec<u8> {
    surface
        .nfd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(|c| c.to_uppercase())
        .filter(|c| c.is_ascii_alphabetic())
        .map(|c| c as u8)
        .collect()
}

fn soundex_digit(c: u8) -> Option<u8> {
    match c {
        b'B' | b'F' | b'P' | b'V' => Some(1),
        b'C' | b'G' | b'J' | b'K' | b'Q' | b'S' | b'X' | b'Z' => Some(2),
        b'D' | b'T' => Some(3),
        b'L' => Some(4),
        b'M' | b'N' => Some(5),
        b'R' => Some(6),
        _ => None,
    }
}

/// American Soundex with the archival h/w rule: h and w are transparent
/// (they do not break code adjacency), vowels and y reset it.
pub fn soundex_encode(surface: &str) -> Result<SoundexCode> {
    let letters = fold_letters(surface);
    let Some((&first, rest)) = letters.split_first() else {
        return Err(Error::Encoding(surface.to_string()));
    };
    let mut digits = [b'0'; 3];
    let mut filled = 0;
    let mut last = soundex_digit(first);
    for &c in rest {
        if filled == 3 {
            break;
        }
        match c {
            b'H' | b'W' => {}
            b'A' | b'E' | b'I' | b'O' | b'U' | b'Y' => last = None,
            _ => {
                let d = soundex_digit(c).expect("consonant has a code");
                if last != Some(d) {
                    digits[filled] = b'0' + d;
                    filled += 1;
                }
                last = Some(d);
            }
        }
    }
    Ok(SoundexCode([first, digits[0], digits[1], digits[2]]))
}

/// Embed a code into the unit 4-cube.
pub fn soundex_vector<F: Real>(code: SoundexCode) -> SoundexVector<F> {
    let [letter, d1, d2, d3] = code.0;
    let scale = |num: u8, den: f64| real::<F>(f64::from(num) / den);
    SoundexVector([
        scale(letter - b'A', 25.0),
        scale(d1 - b'0', 6.0),
        scale(d2 - b'0', 6.0),
        scale(d3 - b'0', 6.0),
    ])
}

/// Similarity in [0, 1]: 1 minus the embedded Euclidean distance scaled
/// by the diameter of the unit 4-cube (2). Equals 1 iff the codes match.
pub fn soundex_similarity<F: Real>(a: SoundexCode, b: SoundexCode) -> F {
    let d = euclidean(&soundex_vector::<F>(a), &soundex_vector::<F>(b));
    F::one() - d / real::<F>(2.0)
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'A' | b'E' | b'I' | b'O' | b'U')
}

/// NYSIIS encoder, provided for side-by-side comparison reports only.
pub fn nysiis_encode(surface: &str) -> Result<String> {
    let mut s = fold_letters(surface);
    if s.is_empty() {
        return Err(Error::Encoding(surface.to_string()));
    }
    // prefix rules
    if s.starts_with(b"MAC") {
        s[1] = b'C';
    } else if s.starts_with(b"KN") {
        s[0] = b'N';
    } else if s[0] == b'K' {
        s[0] = b'C';
    } else if s.starts_with(b"PH") || s.starts_with(b"PF") {
        s[0] = b'F';
        s[1] = b'F';
    } else if s.starts_with(b"SCH") {
        s[1] = b'S';
        s[2] = b'S';
    }
    // suffix rules
    let n = s.len();
    if n >= 2 {
        match &s[n - 2..] {
            b"EE" | b"IE" => {
                s.truncate(n - 2);
                s.push(b'Y');
            }
            b"DT" | b"RT" | b"RD" | b"NT" | b"ND" => {
                s.truncate(n - 2);
                s.push(b'D');
            }
            _ => {}
        }
    }
    let mut key = vec![s[0]];
    let mut i = 1;
    while i < s.len() {
        let next = s.get(i + 1).copied();
        let out = match s[i] {
            b'E' if next == Some(b'V') => {
                s[i + 1] = b'F';
                b'A'
            }
            c if is_vowel(c) => b'A',
            b'Q' => b'G',
            b'Z' => b'S',
            b'M' => b'N',
            b'K' if next == Some(b'N') => b'N',
            b'K' => b'C',
            b'S' if s[i..].starts_with(b"SCH") => {
                s[i + 1] = b'S';
                s[i + 2] = b'S';
                b'S'
            }
            b'P' if next == Some(b'H') => {
                s[i + 1] = b'F';
                b'F'
            }
            b'H' if !is_vowel(s[i - 1]) || !next.is_some_and(is_vowel) => s[i - 1],
            b'W' if is_vowel(s[i - 1]) => b'A',
            c => c,
        };
        s[i] = out;
        if key.last() != Some(&out) {
            key.push(out);
        }
        i += 1;
    }
    if key.len() > 1 && key.last() == Some(&b'S') {
        key.pop();
    }
    if key.len() > 2 && key.ends_with(b"AY") {
        key.truncate(key.len() - 2);
        key.push(b'Y');
    }
    if key.len() > 1 && key.last() == Some(&b'A') {
        key.pop();
    }
    Ok(String::from_utf8(key).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> String {
        soundex_encode(s).unwrap().to_string()
    }

    #[test]
    fn classic_pairs() {
        assert_eq!(code("robert"), "R163");
        assert_eq!(code("rupert"), "R163");
    }

    #[test]
    fn hw_transparent() {
        assert_eq!(code("ashcraft"), "A261");
        assert_eq!(code("ashcroft"), "A261");
        assert_eq!(code("tymczak"), "T522");
        assert_eq!(code("pfister"), "P236");
    }

    #[test]
    fn padding() {
        assert_eq!(code("a"), "A000");
        assert_eq!(code("rupertx"), "R163");
    }

    #[test]
    fn case_insensitive() {
        assert_eq!(code("Robert"), code("ROBERT"));
    }

    #[test]
    fn diacritics_fold_for_encoding() {
        assert_eq!(code("mēle"), code("mele"));
        assert_eq!(code("kriyāšila"), code("kriyasila"));
    }

    #[test]
    fn unencodable_surface() {
        assert!(matches!(soundex_encode("123"), Err(Error::Encoding(_))));
        assert!(matches!(soundex_encode(""), Err(Error::Encoding(_))));
    }

    #[test]
    fn vector_embedding() {
        let v: SoundexVector = soundex_vector(SoundexCode::parse("A000").unwrap());
        assert_eq!(v.0, [0.0, 0.0, 0.0, 0.0]);
        let v: SoundexVector = soundex_vector(SoundexCode::parse("Z666").unwrap());
        assert_eq!(v.0, [1.0, 1.0, 1.0, 1.0]);
        let v: SoundexVector = soundex_vector(SoundexCode::parse("R163").unwrap());
        assert_eq!(v.0, [17.0 / 25.0, 1.0 / 6.0, 1.0, 3.0 / 6.0]);
    }

    #[test]
    fn similarity_range_and_identity() {
        let r163 = SoundexCode::parse("R163").unwrap();
        let r164 = SoundexCode::parse("R164").unwrap();
        let a000 = SoundexCode::parse("A000").unwrap();
        let z666 = SoundexCode::parse("Z666").unwrap();
        assert_eq!(soundex_similarity::<f64>(r163, r163), 1.0);
        assert_eq!(soundex_similarity::<f64>(a000, z666), 0.0);
        let s = soundex_similarity::<f64>(r163, r164);
        assert!((s - (1.0 - (1.0 / 6.0) / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn nysiis_known_values() {
        assert_eq!(nysiis_encode("knight").unwrap(), "NAGT");
        assert_eq!(nysiis_encode("mitchell").unwrap(), "MATCAL");
        assert!(nysiis_encode("").is_err());
        assert_eq!(
            nysiis_encode("bradford").unwrap(),
            nysiis_encode("bradford").unwrap()
        );
    }
}
