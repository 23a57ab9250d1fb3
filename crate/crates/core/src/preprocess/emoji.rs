//! Emoji segmentation.
//!
//! An emoji unit is a pictographic base plus any skin-tone modifiers,
//! keycap marks and ZWJ-joined continuations that follow it; a pair of
//! regional indicators forms one flag. Variation selectors are consumed
//! but dropped from the unit so that `❤` and `❤️` compare equal.

const ZWJ: char = '\u{200D}';
const KEYCAP: char = '\u{20E3}';

fn is_variation_selector(c: char) -> bool {
    matches!(c, '\u{FE0E}' | '\u{FE0F}')
}

fn is_skin_tone(c: char) -> bool {
    ('\u{1F3FB}'..='\u{1F3FF}').contains(&c)
}

fn is_regional_indicator(c: char) -> bool {
    ('\u{1F1E6}'..='\u{1F1FF}').contains(&c)
}

/// Pictographic code points treated as emoji bases.
pub fn is_pictographic(c: char) -> bool {
    matches!(c,
        '\u{1F000}'..='\u{1FAFF}'
        | '\u{2600}'..='\u{27BF}'
        | '\u{2300}'..='\u{23FF}'
        | '\u{2B00}'..='\u{2BFF}'
        | '\u{3030}' | '\u{303D}' | '\u{3297}' | '\u{3299}')
        && !is_skin_tone(c)
}

/// Characters that only make sense attached to a preceding emoji.
fn is_emoji_modifier(c: char) -> bool {
    is_variation_selector(c) || is_skin_tone(c) || c == KEYCAP || c == ZWJ
}

/// Canonical key for an emoji string: variation selectors removed.
pub fn canonical_emoji(s: &str) -> String {
    s.chars().filter(|c| !is_variation_selector(*c)).collect()
}

/// A piece of text split around emoji units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece<'a> {
    Text(&'a str),
    /// Canonical unit plus the number of characters it spanned in the source.
    Emoji(String, usize),
}

/// Splits `text` into alternating text and emoji pieces. Stray modifiers
/// without a base are reported as one-character emoji pieces so they can
/// be dropped and accounted for.
pub fn segment(text: &str) -> Vec<Piece<'_>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut text_start = 0;
    while let Some((i, c)) = chars.next() {
        let starts_unit = is_pictographic(c) || is_regional_indicator(c) || is_emoji_modifier(c);
        if !starts_unit {
            continue;
        }
        if text_start < i {
            out.push(Piece::Text(&text[text_start..i]));
        }
        let mut unit = String::new();
        let mut span = 1;
        unit.push(c);
        if is_regional_indicator(c) {
            if let Some(&(_, n)) = chars.peek() {
                if is_regional_indicator(n) {
                    unit.push(n);
                    span += 1;
                    chars.next();
                }
            }
        } else if is_pictographic(c) {
            while let Some(&(_, n)) = chars.peek() {
                if is_emoji_modifier(n) && n != ZWJ {
                    unit.push(n);
                    span += 1;
                    chars.next();
                } else if n == ZWJ {
                    // only join when a base follows
                    let mut look = chars.clone();
                    look.next();
                    match look.peek() {
                        Some(&(_, m)) if is_pictographic(m) => {
                            unit.push(n);
                            unit.push(m);
                            span += 2;
                            chars.next();
                            chars.next();
                        }
                        _ => break,
                    }
                } else {
                    break;
                }
            }
        }
        out.push(Piece::Emoji(canonical_emoji(&unit), span));
        text_start = chars.peek().map_or(text.len(), |&(j, _)| j);
    }
    if text_start < text.len() {
        out.push(Piece::Text(&text[text_start..]));
    }
    out
}

/// All emoji units in `text`, in order.
pub fn emojis(text: &str) -> Vec<String> {
    segment(text)
        .into_iter()
        .filter_map(|p| match p {
            Piece::Emoji(e, _) => Some(e),
            Piece::Text(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_text_untouched() {
        assert_eq!(segment("ala ma kota"), vec![Piece::Text("ala ma kota")]);
        assert!(emojis("zażółć gęślą jaźń").is_empty());
    }

    #[test]
    fn units() {
        assert_eq!(emojis("a😂b❤️c"), vec!["😂", "❤"]);
        // thumbs up with skin tone is one unit
        assert_eq!(emojis("👍🏽"), vec!["👍🏽"]);
        // family ZWJ sequence
        assert_eq!(
            emojis("👨\u{200D}👩\u{200D}👧"),
            vec!["👨\u{200D}👩\u{200D}👧"]
        );
        // flag
        assert_eq!(emojis("🇵🇱🇵🇱"), vec!["🇵🇱", "🇵🇱"]);
    }

    #[test]
    fn spans_count_source_chars() {
        let segs = segment("x❤️y");
        assert_eq!(
            segs,
            vec![
                Piece::Text("x"),
                Piece::Emoji("❤".into(), 2),
                Piece::Text("y")
            ]
        );
    }
}
