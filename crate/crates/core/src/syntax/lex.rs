use std::fmt;

use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Colon,
    Arrow,
    DArrow,
    Backslash,
    Dot,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Colon => f.write_str(":"),
            Tok::Arrow => f.write_str("->"),
            Tok::DArrow => f.write_str("=>"),
            Tok::Backslash => f.write_str("\\"),
            Tok::Dot => f.write_str("."),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
        }
    }
}

pub(super) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokens of one line with their 1-based columns.
pub(super) fn lex_line(line: usize, text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let two = chars.get(i + 1).copied();
        let tok = match (c, two) {
            ('-', Some('>')) => Tok::Arrow,
            ('=', Some('>')) => Tok::DArrow,
            (':', _) => Tok::Colon,
            ('\\', _) => Tok::Backslash,
            ('.', _) => Tok::Dot,
            ('(', _) => Tok::LParen,
            (')', _) => Tok::RParen,
            _ => return Err(SyntaxError::new(line, col, format!("unexpected character `{c}`"))),
        };
        i += if matches!(tok, Tok::Arrow | Tok::DArrow) { 2 } else { 1 };
        out.push((tok, col));
    }
    Ok(out)
}
