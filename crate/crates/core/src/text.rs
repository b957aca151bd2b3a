//! Text canonicalization shared by the graph store, the ingest pipeline and
//! query analysis. Two distinct forms exist on purpose:
//!
//! * [`normalize_text`] is the storage/index form: Unicode NFC, lowercased,
//!   trimmed, internal whitespace collapsed. Punctuation survives. Node
//!   fields like `title_normalized` and `text_normalized` use this.
//! * [`normalize_title_for_match`] is the looser form used by title matching:
//!   everything that is not a letter is dropped, so `"Attention Is All You
//!   Need!"` and `"attention is all you need"` compare equal.

use unicode_normalization::UnicodeNormalization;

/// Canonical index form: NFC, lowercase, trimmed, whitespace collapsed.
pub fn normalize_text(s: &str) -> String {
    let composed: String = s.nfc().collect();
    let lowered = composed.to_lowercase();
    let mut out = String::with_capacity(lowered.len());
    for part in lowered.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(part);
    }
    out
}

/// Title-matching form: keep letters and word boundaries, drop everything
/// else, lowercase. Digits and punctuation vanish without leaving a space,
/// so `"GPT4"` becomes `"gpt"` and `"graph-based"` becomes `"graphbased"`.
pub fn normalize_title_for_match(s: &str) -> String {
    let mut kept = String::with_capacity(s.len());
    for ch in s.nfc() {
        if ch.is_alphabetic() {
            kept.extend(ch.to_lowercase());
        } else if ch.is_whitespace() {
            kept.push(' ');
        }
    }
    let mut out = String::with_capacity(kept.len());
    for part in kept.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(part);
    }
    out
}

/// Whitespace tokens of an already-normalized string.
pub fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split_whitespace()
}
