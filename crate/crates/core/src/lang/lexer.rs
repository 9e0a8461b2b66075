//! Tokenizer shared by the term, program, and expression grammars.

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    /// Identifier starting with a lowercase letter.
    Ident(String),
    /// Identifier starting with an uppercase letter or `_` (a variable in
    /// term positions).
    UIdent(String),
    /// Non-negative integer literal.
    Int(String),
    /// A bare `_`: an anonymous variable.
    Underscore,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Semicolon,
    Bar,
    Minus,
    Slash,
    Colon,
    ColonDash,
    /// `/\`
    Wedge,
    /// `\/`
    Vee,
    /// `>=`
    Supseteq,
    /// `?-`
    QueryDash,
    Hash,
    // reserved words
    Where,
    Top,
    Bot,
    Mu,
    Nu,
    Lam,
}

impl Token {
    pub fn describe(&self) -> String {
        match self {
            Token::Ident(s) | Token::UIdent(s) | Token::Int(s) => format!("'{s}'"),
            Token::Underscore => "'_'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::LBrace => "'{'".into(),
            Token::RBrace => "'}'".into(),
            Token::LBracket => "'['".into(),
            Token::RBracket => "']'".into(),
            Token::Comma => "','".into(),
            Token::Dot => "'.'".into(),
            Token::Semicolon => "';'".into(),
            Token::Bar => "'|'".into(),
            Token::Minus => "'-'".into(),
            Token::Slash => "'/'".into(),
            Token::Colon => "':'".into(),
            Token::ColonDash => "':-'".into(),
            Token::Wedge => "'/\\'".into(),
            Token::Vee => "'\\/'".into(),
            Token::Supseteq => "'>='".into(),
            Token::QueryDash => "'?-'".into(),
            Token::Hash => "'#'".into(),
            Token::Where => "'where'".into(),
            Token::Top => "'top'".into(),
            Token::Bot => "'bot'".into(),
            Token::Mu => "'mu'".into(),
            Token::Nu => "'nu'".into(),
            Token::Lam => "'lam'".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub token: Token,
    pub line: usize,
    pub column: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut column = 1;

    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Spanned {
                token: $tok,
                line,
                column,
            });
            i += $len;
            column += $len;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                column += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push!(Token::LParen, 1),
            ')' => push!(Token::RParen, 1),
            '{' => push!(Token::LBrace, 1),
            '}' => push!(Token::RBrace, 1),
            '[' => push!(Token::LBracket, 1),
            ']' => push!(Token::RBracket, 1),
            ',' => push!(Token::Comma, 1),
            '.' => push!(Token::Dot, 1),
            ';' => push!(Token::Semicolon, 1),
            '|' => push!(Token::Bar, 1),
            '-' => push!(Token::Minus, 1),
            '#' => push!(Token::Hash, 1),
            ':' if next == Some('-') => push!(Token::ColonDash, 2),
            ':' => push!(Token::Colon, 1),
            '/' if next == Some('\\') => push!(Token::Wedge, 2),
            '/' => push!(Token::Slash, 1),
            '\\' if next == Some('/') => push!(Token::Vee, 2),
            '>' if next == Some('=') => push!(Token::Supseteq, 2),
            '?' if next == Some('-') => push!(Token::QueryDash, 2),
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    token: Token::Int(text),
                    line,
                    column,
                });
                column += i - start;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let len = i - start;
                let token = match text.as_str() {
                    "where" => Token::Where,
                    "top" => Token::Top,
                    "bot" => Token::Bot,
                    "mu" => Token::Mu,
                    "nu" => Token::Nu,
                    "lam" => Token::Lam,
                    "_" => Token::Underscore,
                    _ if text.starts_with(|ch: char| ch.is_ascii_uppercase() || ch == '_') => {
                        Token::UIdent(text)
                    }
                    _ => Token::Ident(text),
                };
                out.push(Spanned {
                    token,
                    line,
                    column,
                });
                column += len;
            }
            other => {
                return Err(ParseError {
                    line,
                    column,
                    expected: vec!["a token".into()],
                    found: format!("'{other}'"),
                })
            }
        }
    }
    Ok(out)
}
