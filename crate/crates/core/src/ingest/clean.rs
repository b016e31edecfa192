use std::sync::OnceLock;

use regex::Regex;

fn joined_sentences() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(\p{Ll})\.(\p{Lu})").unwrap())
}

fn blank_runs() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[ \t]+").unwrap())
}

/// Normalizes raw text before annotation.
///
/// Typographic quotes become ASCII quotes, dash variants become `-`, a space
/// is inserted where a sentence was glued to the next one (`them.The`), and
/// runs of spaces or tabs collapse to one space. Newlines are kept.
pub fn clean_text(raw: &str) -> String {
    let mapped: String = raw
        .chars()
        .map(|c| match c {
            '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{201F}' | '\u{2033}' => '"',
            '\u{2018}' | '\u{2019}' | '\u{201A}' | '\u{201B}' | '\u{2032}' => '\'',
            '\u{2010}' | '\u{2011}' | '\u{2012}' | '\u{2013}' | '\u{2014}' => '-',
            other => other,
        })
        .collect();
    let split = joined_sentences().replace_all(&mapped, "$1. $2");
    blank_runs().replace_all(&split, " ").into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn splits_glued_sentences() {
        assert_eq!(clean_text("them.The company"), "them. The company");
    }

    #[test]
    fn replaces_quotes_and_dashes() {
        assert_eq!(clean_text("\u{201C}quote\u{201D} \u{2014} dash"), "\"quote\" - dash");
        assert_eq!(clean_text("Ford\u{2019}s re\u{2011}tuned"), "Ford's re-tuned");
    }

    #[test]
    fn keeps_abbreviations() {
        assert_eq!(clean_text("U.S.A. formed"), "U.S.A. formed");
        assert_eq!(clean_text("3.5 litres"), "3.5 litres");
    }

    #[test]
    fn collapses_blanks_but_keeps_newlines() {
        assert_eq!(clean_text("a  \t b\n\nc   d"), "a b\n\nc d");
    }

    #[test]
    fn empty_input() {
        assert_eq!(clean_text(""), "");
    }

    proptest! {
        #[test]
        fn idempotent(s in "[a-zA-Z .\t\n\u{201C}\u{201D}\u{2018}\u{2019}\u{2013}\u{2014}\u{2011}éÉ]{0,40}") {
            let once = clean_text(&s);
            prop_assert_eq!(clean_text(&once), once);
        }

        #[test]
        fn idempotent_on_arbitrary_strings(s in any::<String>()) {
            let once = clean_text(&s);
            prop_assert_eq!(clean_text(&once), once);
        }
    }
}
