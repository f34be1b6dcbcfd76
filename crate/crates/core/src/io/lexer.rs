use std::sync::Arc;

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

const SYMBOLS: [&str; 21] = [
    "->", "<=", ">=", "==", "!=", "&&", "||", "{", "}", "(", ")", ",", ";", ":", "=", "*", "<", ">", "!",
    "[", "]",
];

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

pub fn tokenize(text: &str, file: &Arc<str>) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let rest = |cur: &Cursor| cur.chars.clone().take(2).collect::<String>();
    let mut out = Vec::new();
    loop {
        while cur.peek().is_some_and(char::is_whitespace) {
            cur.bump();
        }
        let (line, col) = (cur.line, cur.col);
        let span_to = |cur: &Cursor| SourceSpan {
            file: file.clone(),
            line,
            col,
            end_line: cur.line,
            end_col: cur.col,
        };
        let Some(c) = cur.peek() else {
            out.push(Token {
                tok: Tok::Eof,
                span: SourceSpan::point(file.clone(), line, col),
            });
            return Ok(out);
        };
        let tok = if c == '/' {
            cur.bump();
            if cur.peek() != Some('/') {
                return Err(ParseError::new("unexpected character `/`", span_to(&cur)));
            }
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(c) = cur.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
                s.push(c);
                cur.bump();
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
                s.push(c);
                cur.bump();
            }
            let n = s
                .parse()
                .map_err(|_| ParseError::new("integer literal too large", span_to(&cur)))?;
            Tok::Int(n)
        } else if c == '"' {
            cur.bump();
            Tok::Str(string_body(&mut cur, file, line, col)?)
        } else {
            let r = rest(&cur);
            let Some(sym) = SYMBOLS.iter().find(|s| r.starts_with(**s)) else {
                cur.bump();
                return Err(ParseError::new(format!("unexpected character `{c}`"), span_to(&cur)));
            };
            for _ in 0..sym.len() {
                cur.bump();
            }
            Tok::Sym(sym)
        };
        out.push(Token {
            tok,
            span: span_to(&cur),
        });
    }
}

fn string_body(cur: &mut Cursor, file: &Arc<str>, line: usize, col: usize) -> Result<String, ParseError> {
    let err = |cur: &Cursor, msg: &str| {
        Err(ParseError::new(
            msg,
            SourceSpan {
                file: file.clone(),
                line,
                col,
                end_line: cur.line,
                end_col: cur.col,
            },
        ))
    };
    let mut s = String::new();
    loop {
        match cur.bump() {
            None => return err(cur, "unterminated string"),
            Some('"') => return Ok(s),
            Some('\\') => match cur.bump() {
                Some('n') => s.push('\n'),
                Some('t') => s.push('\t'),
                Some('r') => s.push('\r'),
                Some('0') => s.push('\0'),
                Some(c @ ('\\' | '"' | '\'')) => s.push(c),
                Some('u') => {
                    if cur.bump() != Some('{') {
                        return err(cur, "malformed unicode escape");
                    }
                    let mut hex = String::new();
                    while let Some(c) = cur.bump() {
                        if c == '}' {
                            break;
                        }
                        hex.push(c);
                    }
                    match u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                        Some(c) => s.push(c),
                        None => return err(cur, "malformed unicode escape"),
                    }
                }
                _ => return err(cur, "unknown escape sequence"),
            },
            Some(c) => s.push(c),
        }
    }
}
