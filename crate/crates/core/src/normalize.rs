use crate::ingest::decode_text;

/// Matching key for titles.
///
/// Decodes escapes, case-folds, drops one trailing dot, removes every
/// character that is neither alphanumeric nor whitespace, and collapses
/// whitespace runs to single spaces. Idempotent.
pub fn normalize_title(title: &str) -> String {
    let decoded = decode_text(title);
    let lowered = decoded.to_lowercase();
    let trimmed = lowered.trim_end();
    let trimmed = trimmed.strip_suffix('.').unwrap_or(trimmed);
    let mut out = String::with_capacity(trimmed.len());
    for word in trimmed
        .split(char::is_whitespace)
        .map(|w| w.chars().filter(|c| c.is_alphanumeric()).collect::<String>())
        .filter(|w| !w.is_empty())
    {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&word);
    }
    out
}

/// Display form of a title: decoded, whitespace-collapsed, with one trailing
/// dot removed (source A terminates every title with one).
pub fn display_title(title: &str) -> String {
    let decoded = decode_text(title);
    let collapsed = decoded.split_whitespace().collect::<Vec<_>>().join(" ");
    match collapsed.strip_suffix('.') {
        Some(s) if !s.trim().is_empty() => s.trim_end().to_string(),
        _ => collapsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trailing_dot_variants_agree() {
        assert_eq!(normalize_title("A Study of X."), "a study of x");
        assert_eq!(normalize_title("A Study of X"), "a study of x");
    }

    #[test]
    fn whitespace_collapse() {
        assert_eq!(normalize_title("  Weird   Spacing "), "weird spacing");
    }

    #[test]
    fn punctuation_and_encoding() {
        assert_eq!(normalize_title("Schl&ouml;sser: A (Cloud-Based) Approach?"), "schlösser a cloudbased approach");
        assert_eq!(normalize_title("Schlösser: a cloud-based approach"), "schlösser a cloudbased approach");
        assert_eq!(normalize_title("Word - word"), "word word");
    }

    #[test]
    fn display_title_strips_one_dot() {
        assert_eq!(display_title("A Study."), "A Study");
        assert_eq!(display_title("Etc..."), "Etc..");
        assert_eq!(display_title("."), ".");
        assert_eq!(display_title("J&ouml;rg's  Study"), "Jörg's Study");
    }

    const CORPUS: &[&str] = &[
        "A Study of X.",
        "  Weird   Spacing ",
        "Deadline-Constrained Workflow Scheduling in IaaS Clouds.",
        "Schl&#246;sser &amp; Co.",
        "İstanbul ΣΊΣΥΦΟΣ ß.",
        "...",
        "snake_case Title",
    ];

    #[test]
    fn idempotent_on_fixture_corpus() {
        for t in CORPUS {
            let once = normalize_title(t);
            assert_eq!(normalize_title(&once), once, "{t:?}");
        }
    }

    proptest! {
        #[test]
        fn idempotent(t in "\\PC{0,40}") {
            let once = normalize_title(&t);
            prop_assert_eq!(normalize_title(&once), once);
        }

        #[test]
        fn display_title_matches_key(t in "[A-Za-z .,:-]{1,30}") {
            prop_assert_eq!(normalize_title(&display_title(&t)), normalize_title(&t));
        }
    }
}
