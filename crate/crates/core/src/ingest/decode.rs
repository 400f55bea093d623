use regex::Regex;
use std::borrow::Cow;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;

static WARNED: AtomicBool = AtomicBool::new(false);

/// Decode HTML entities and `\uXXXX` escapes until the text stops changing.
///
/// Every successful decode step strictly shortens the text (in chars), so the
/// loop terminates and the result is a fixed point: `decode_text` is
/// idempotent. Escapes that cannot be decoded are left verbatim.
pub fn decode_text(text: &str) -> String {
    if !text.contains(['&', '\\']) {
        return text.to_string();
    }
    let mut current = text.to_string();
    loop {
        let next = decode_once(&current);
        if next == current {
            break;
        }
        current = next.into_owned();
    }
    if undecodable().is_match(&current) {
        if WARNED.swap(true, Ordering::Relaxed) {
            log::debug!("undecodable escape left verbatim in {current:?}");
        } else {
            log::warn!("undecodable escape left verbatim in {current:?} (further occurrences logged at debug level)");
        }
    }
    current
}

fn decode_once(text: &str) -> Cow<'_, str> {
    let entities = html_escape::decode_html_entities(text);
    match unescape_unicode(&entities) {
        Some(s) => Cow::Owned(s),
        None => entities,
    }
}

/// Replace `\uXXXX` sequences (with surrogate pairs). Returns `None` if nothing changed.
fn unescape_unicode(text: &str) -> Option<String> {
    if !text.contains("\\u") {
        return None;
    }
    let mut out = String::with_capacity(text.len());
    let mut changed = false;
    let mut rest = text;
    while let Some(pos) = rest.find("\\u") {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        match decode_escape_at(tail) {
            Some((ch, consumed)) => {
                out.push(ch);
                rest = &tail[consumed..];
                changed = true;
            }
            None => {
                out.push_str("\\u");
                rest = &tail[2..];
            }
        }
    }
    out.push_str(rest);
    changed.then_some(out)
}

fn hex4(s: &str) -> Option<u32> {
    let digits = s.get(..4)?;
    if !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    u32::from_str_radix(digits, 16).ok()
}

/// `tail` starts with `\u`. Returns the decoded char and bytes consumed.
fn decode_escape_at(tail: &str) -> Option<(char, usize)> {
    let unit = hex4(&tail[2..])?;
    if (0xD800..0xDC00).contains(&unit) {
        let low_part = tail.get(6..)?;
        let low = low_part.strip_prefix("\\u").and_then(hex4)?;
        if !(0xDC00..0xE000).contains(&low) {
            return None;
        }
        let cp = 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00);
        return char::from_u32(cp).map(|c| (c, 12));
    }
    let ch = char::from_u32(unit)?;
    if ch.is_control() && !matches!(ch, '\t' | '\n' | '\r') {
        return None;
    }
    Some((ch, 6))
}

fn undecodable() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"&#[xX]?[0-9A-Fa-f]+;|\\u[0-9A-Fa-f]{4}").unwrap())
}
