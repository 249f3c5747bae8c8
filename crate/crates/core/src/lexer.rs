//! Email lexing: header stripping, separator removal and word splitting.

use crate::corpus::RawEmail;

/// Characters that split words in addition to whitespace.
pub const DELIMITERS: [char; 11] = [',', ':', '!', '=', ';', '\'', '>', '[', ']', '(', ')'];

const HEADER_TERMINATOR: &str = "x-filename:";
const SUBJECT_PREFIX: &str = "subject:";
const SEPARATOR_PREFIX: &str = "---";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub email_id: usize,
    pub tokens: Vec<String>,
}

fn starts_with_lower(line: &str, prefix: &str) -> bool {
    // Prefixes are ASCII, so comparing the first bytes is enough.
    line.len() >= prefix.len()
        && line.as_bytes()[..prefix.len()].eq_ignore_ascii_case(prefix.as_bytes())
}

/// Result of [`strip_header`]: the surviving trimmed lines, and whether a
/// header terminator was found at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrippedLines {
    pub lines: Vec<String>,
    pub has_terminator: bool,
}

/// Drops the email header (everything up to and including the first
/// `x-filename:` line) except `subject:` lines, and drops `---` separator
/// lines everywhere. Without a terminator every line is kept.
pub fn strip_header<S: AsRef<str>>(lines: &[S]) -> StrippedLines {
    let trimmed: Vec<&str> = lines.iter().map(|l| l.as_ref().trim()).collect();
    let terminator = trimmed
        .iter()
        .position(|l| starts_with_lower(l, HEADER_TERMINATOR));

    let kept = trimmed.iter().enumerate().filter(|&(i, line)| {
        if starts_with_lower(line, SEPARATOR_PREFIX) {
            return false;
        }
        match terminator {
            Some(t) if i <= t => starts_with_lower(line, SUBJECT_PREFIX),
            _ => true,
        }
    });
    StrippedLines {
        lines: kept.map(|(_, l)| l.to_string()).collect(),
        has_terminator: terminator.is_some(),
    }
}

fn is_word_delimiter(c: char) -> bool {
    c.is_whitespace() || DELIMITERS.contains(&c)
}

/// Splits one trimmed line into lowercase words. Fragments holding `@` are
/// dropped before dots become delimiters, so addresses vanish whole.
pub fn tokenize_line(line: &str) -> Vec<String> {
    let lower = line.to_lowercase();
    lower
        .split(is_word_delimiter)
        .filter(|frag| !frag.is_empty() && !frag.contains('@'))
        .flat_map(|frag| frag.split('.'))
        .filter(|word| !word.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn lex_lines<S: AsRef<str>>(email_id: usize, lines: &[S]) -> (TokenStream, bool) {
    let stripped = strip_header(lines);
    let tokens = stripped.lines.iter().flat_map(|l| tokenize_line(l)).collect();
    (TokenStream { email_id, tokens }, stripped.has_terminator)
}

pub fn lex_email(raw: &RawEmail) -> TokenStream {
    lex_lines(raw.email_id, &raw.lines).0
}
