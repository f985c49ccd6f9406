//! Capitalization pattern detection and transfer.
//!
//! All swap operations preserve the surface casing of the token they
//! replace: `him -> her`, `Him -> Her`, `HIM -> HER`. Mixed casings are
//! classified by their first alphabetic character.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CapsPattern {
    Lower,
    Title,
    Upper,
}

pub(crate) fn detect(word: &str) -> CapsPattern {
    let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase()) {
        CapsPattern::Upper
    } else if letters.first().is_some_and(|c| c.is_uppercase()) {
        CapsPattern::Title
    } else {
        CapsPattern::Lower
    }
}

fn title_case(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first
            .to_uppercase()
            .chain(chars.flat_map(char::to_lowercase))
            .collect(),
        None => String::new(),
    }
}

/// Rewrite `word` (expected lowercase) in the casing pattern of `like`.
pub(crate) fn transfer(like: &str, word: &str) -> String {
    match detect(like) {
        CapsPattern::Lower => word.to_lowercase(),
        CapsPattern::Title => title_case(word),
        CapsPattern::Upper => word.to_uppercase(),
    }
}
