//! Tokenizer for the surface language.
//!
//! Identifiers start with a letter; keywords are reserved lowercase
//! words. `!` starts a comment running to the end of the line (so the
//! not-equal operator is the Fortran-style `/=`).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    KwParam,
    KwArray,
    KwScalar,
    KwAssume,
    KwInteger,
    KwReal,
    KwBoolean,
    KwIn,
    KwOut,
    KwDo,
    KwEnddo,
    KwIf,
    KwThen,
    KwElse,
    KwEndif,
    KwWhile,
    KwAnd,
    KwOr,
    KwNot,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    /// `=` (assignment; equality is `==`)
    Assign,
    EqEq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl Tok {
    /// How the token reads in an error message.
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(k) => format!("`{k}`"),
            Tok::Eof => "end of input".into(),
            Tok::KwParam => "`param`".into(),
            Tok::KwArray => "`array`".into(),
            Tok::KwScalar => "`scalar`".into(),
            Tok::KwAssume => "`assume`".into(),
            Tok::KwInteger => "`integer`".into(),
            Tok::KwReal => "`real`".into(),
            Tok::KwBoolean => "`boolean`".into(),
            Tok::KwIn => "`in`".into(),
            Tok::KwOut => "`out`".into(),
            Tok::KwDo => "`do`".into(),
            Tok::KwEnddo => "`enddo`".into(),
            Tok::KwIf => "`if`".into(),
            Tok::KwThen => "`then`".into(),
            Tok::KwElse => "`else`".into(),
            Tok::KwEndif => "`endif`".into(),
            Tok::KwWhile => "`while`".into(),
            Tok::KwAnd => "`and`".into(),
            Tok::KwOr => "`or`".into(),
            Tok::KwNot => "`not`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Assign => "`=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Ne => "`/=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpannedTok {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "param" => Tok::KwParam,
        "array" => Tok::KwArray,
        "scalar" => Tok::KwScalar,
        "assume" => Tok::KwAssume,
        "integer" => Tok::KwInteger,
        "real" => Tok::KwReal,
        "boolean" => Tok::KwBoolean,
        "in" => Tok::KwIn,
        "out" => Tok::KwOut,
        "do" => Tok::KwDo,
        "enddo" => Tok::KwEnddo,
        "if" => Tok::KwIf,
        "then" => Tok::KwThen,
        "else" => Tok::KwElse,
        "endif" => Tok::KwEndif,
        "while" => Tok::KwWhile,
        "and" => Tok::KwAnd,
        "or" => Tok::KwOr,
        "not" => Tok::KwNot,
        _ => return None,
    })
}

pub fn lex(src: &str) -> Result<Vec<SpannedTok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line: usize, col: usize, msg: String| Error::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '!' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                    col += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = keyword(&word).unwrap_or(Tok::Ident(word));
                out.push(SpannedTok { tok, line: tline, col: tcol });
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                    col += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let value: i64 = digits.parse().map_err(|_| {
                    err(tline, tcol, format!("integer literal `{digits}` out of range"))
                })?;
                out.push(SpannedTok { tok: Tok::Int(value), line: tline, col: tcol });
            }
            _ => {
                let two = |want: char| i + 1 < chars.len() && chars[i + 1] == want;
                let (tok, width) = match c {
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    ',' => (Tok::Comma, 1),
                    ';' => (Tok::Semi, 1),
                    ':' => (Tok::Colon, 1),
                    '+' => (Tok::Plus, 1),
                    '-' => (Tok::Minus, 1),
                    '*' => (Tok::Star, 1),
                    '/' if two('=') => (Tok::Ne, 2),
                    '/' => (Tok::Slash, 1),
                    '=' if two('=') => (Tok::EqEq, 2),
                    '=' => (Tok::Assign, 1),
                    '<' if two('=') => (Tok::Le, 2),
                    '<' => (Tok::Lt, 1),
                    '>' if two('=') => (Tok::Ge, 2),
                    '>' => (Tok::Gt, 1),
                    _ => {
                        return Err(err(tline, tcol, format!("unexpected character `{c}`")))
                    }
                };
                out.push(SpannedTok { tok, line: tline, col: tcol });
                i += width;
                col += width;
            }
        }
    }
    out.push(SpannedTok { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn loop_header_tokenizes() {
        assert_eq!(
            toks("do i = 1, n"),
            vec![
                Tok::KwDo,
                Tok::Ident("i".into()),
                Tok::Assign,
                Tok::Int(1),
                Tok::Comma,
                Tok::Ident("n".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn not_equal_is_distinct_from_division() {
        assert_eq!(
            toks("a /= b / 2"),
            vec![
                Tok::Ident("a".into()),
                Tok::Ne,
                Tok::Ident("b".into()),
                Tok::Slash,
                Tok::Int(2),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_run_to_end_of_line() {
        assert_eq!(
            toks("x ! the rest is ignored == /=\ny"),
            vec![Tok::Ident("x".into()), Tok::Ident("y".into()), Tok::Eof]
        );
    }

    #[test]
    fn positions_point_at_offending_input() {
        let e = lex("a = ?").unwrap_err();
        assert_eq!(e.to_string(), "syntax error at 1:5: unexpected character `?`");
        let e = lex("x\n  99999999999999999999").unwrap_err();
        assert!(e.to_string().starts_with("syntax error at 2:3"));
    }

    #[test]
    fn keywords_are_reserved_and_case_sensitive() {
        assert_eq!(toks("enddo")[0], Tok::KwEnddo);
        // Uppercase spellings are plain identifiers.
        assert_eq!(toks("ENDDO")[0], Tok::Ident("ENDDO".into()));
    }
}
