//! Tokenizers for program lines, formula text and computon literals.
//!
//! The Unicode connectives `∧ ∨ ¬ ∉` are accepted as aliases of `& | ! !in`.

use super::ast::Span;
use super::{Diagnostic, DiagnosticCode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    Int(u32),
    Str(String),
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    Amp,
    Bar,
    Bang,
    NotIn,
}

impl Token {
    pub fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Int(n) => format!("integer `{n}`"),
            Token::Str(_) => "string literal".to_string(),
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
            Token::LAngle => "`<`".to_string(),
            Token::RAngle => "`>`".to_string(),
            Token::LBrace => "`{`".to_string(),
            Token::RBrace => "`}`".to_string(),
            Token::Comma => "`,`".to_string(),
            Token::Colon => "`:`".to_string(),
            Token::Equals => "`=`".to_string(),
            Token::Amp => "`&`".to_string(),
            Token::Bar => "`|`".to_string(),
            Token::Bang => "`!`".to_string(),
            Token::NotIn => "`!in`".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub token: Token,
    pub span: Span,
}

/// Tokenize one line. `#` starts a comment unless inside a string literal.
/// Columns are 1-based character offsets; `line` is carried into spans.
pub fn lex_line(text: &str, line: usize) -> Result<Vec<Spanned>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        let span = Span::new(line, col);
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
            }
            '(' => {
                out.push(Spanned { token: Token::LParen, span });
                i += 1;
            }
            ')' => {
                out.push(Spanned { token: Token::RParen, span });
                i += 1;
            }
            '<' => {
                out.push(Spanned { token: Token::LAngle, span });
                i += 1;
            }
            '>' => {
                out.push(Spanned { token: Token::RAngle, span });
                i += 1;
            }
            '{' => {
                out.push(Spanned { token: Token::LBrace, span });
                i += 1;
            }
            '}' => {
                out.push(Spanned { token: Token::RBrace, span });
                i += 1;
            }
            ',' => {
                out.push(Spanned { token: Token::Comma, span });
                i += 1;
            }
            ':' => {
                out.push(Spanned { token: Token::Colon, span });
                i += 1;
            }
            '=' => {
                out.push(Spanned { token: Token::Equals, span });
                i += 1;
            }
            '&' | '∧' => {
                out.push(Spanned { token: Token::Amp, span });
                i += 1;
            }
            // The or-connective; `|p|` is disambiguated by the parser, which
            // only sees a bar in operand position for the length term.
            '|' | '∨' => {
                out.push(Spanned { token: Token::Bar, span });
                i += 1;
            }
            '!' | '¬' => {
                out.push(Spanned { token: Token::Bang, span });
                i += 1;
            }
            '∉' => {
                out.push(Spanned { token: Token::NotIn, span });
                i += 1;
            }
            '"' => {
                let mut value = String::new();
                i += 1;
                loop {
                    if i >= chars.len() {
                        return Err(Diagnostic {
                            line,
                            col,
                            code: DiagnosticCode::Syntax,
                            message: "unterminated string literal".to_string(),
                        });
                    }
                    match chars[i] {
                        '"' => {
                            i += 1;
                            break;
                        }
                        '\\' => {
                            i += 1;
                            match chars.get(i) {
                                Some('"') => value.push('"'),
                                Some('\\') => value.push('\\'),
                                _ => {
                                    return Err(Diagnostic {
                                        line,
                                        col: i + 1,
                                        code: DiagnosticCode::Syntax,
                                        message: "unknown escape in string literal".to_string(),
                                    })
                                }
                            }
                            i += 1;
                        }
                        other => {
                            value.push(other);
                            i += 1;
                        }
                    }
                }
                out.push(Spanned { token: Token::Str(value), span });
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let value: u32 = digits.parse().map_err(|_| Diagnostic {
                    line,
                    col,
                    code: DiagnosticCode::Syntax,
                    message: format!("integer `{digits}` is out of range"),
                })?;
                out.push(Spanned { token: Token::Int(value), span });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect();
                out.push(Spanned { token: Token::Ident(ident), span });
            }
            other => {
                return Err(Diagnostic {
                    line,
                    col,
                    code: DiagnosticCode::Syntax,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}
