//! Tokens of the scenario language.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    /// `# anchor: text` on its own line.
    Anchor(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Assign,
    EqEq,
    Tilde,
    Arrow,
    Star,
    Caret,
    Minus,
    Plus,
    Slash,
    Percent,
    DotDot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::Str(s) => return write!(f, "string {s:?}"),
            Tok::Anchor(_) => "anchor comment",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Semi => "`;`",
            Tok::Comma => "`,`",
            Tok::Assign => "`=`",
            Tok::EqEq => "`==`",
            Tok::Tilde => "`~`",
            Tok::Arrow => "`->`",
            Tok::Star => "`*`",
            Tok::Caret => "`^`",
            Tok::Minus => "`-`",
            Tok::Plus => "`+`",
            Tok::Slash => "`/`",
            Tok::Percent => "`%`",
            Tok::DotDot => "`..`",
            Tok::Eof => "end of input",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits `src` into tokens. Errors carry the offending position.
pub fn lex(src: &str) -> Result<Vec<Token>, (Pos, String)> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut line_start_only_ws = true;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            line_start_only_ws = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            let start = i;
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            let text: String = chars[start + 1..i].iter().collect();
            col += i - start;
            let t = text.trim_start();
            if line_start_only_ws {
                if let Some(rest) = t.strip_prefix("anchor:") {
                    out.push(Token {
                        tok: Tok::Anchor(rest.trim().to_string()),
                        pos,
                    });
                }
            }
            continue;
        }
        line_start_only_ws = false;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse()
                .map_err(|_| (pos, format!("integer literal {text} too large")))?;
            out.push(Token { tok: Tok::Int(n), pos });
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err((pos, "unterminated string".into())),
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some('\\') if matches!(chars.get(i + 1), Some('"') | Some('\\')) => {
                        s.push(chars[i + 1]);
                        i += 2;
                        col += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), pos });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match two.as_str() {
            "==" => (Tok::EqEq, 2),
            "->" => (Tok::Arrow, 2),
            ".." => (Tok::DotDot, 2),
            _ => match c {
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '[' => (Tok::LBracket, 1),
                ']' => (Tok::RBracket, 1),
                ';' => (Tok::Semi, 1),
                ',' => (Tok::Comma, 1),
                '=' => (Tok::Assign, 1),
                '~' => (Tok::Tilde, 1),
                '*' => (Tok::Star, 1),
                '^' => (Tok::Caret, 1),
                '-' => (Tok::Minus, 1),
                '+' => (Tok::Plus, 1),
                '/' => (Tok::Slash, 1),
                '%' => (Tok::Percent, 1),
                _ => return Err((pos, format!("unexpected character {c:?}"))),
            },
        };
        out.push(Token { tok, pos });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_anchors() {
        let toks = lex("# anchor: a b\nrank 2  # trailing\n  x1^-1").unwrap();
        assert_eq!(toks[0].tok, Tok::Anchor("a b".into()));
        assert_eq!(toks[1].tok, Tok::Ident("rank".into()));
        assert_eq!(toks[1].pos, Pos { line: 2, col: 1 });
        assert_eq!(toks[3].pos, Pos { line: 3, col: 3 });
        assert_eq!(toks[4].tok, Tok::Caret);
        assert_eq!(toks[5].tok, Tok::Minus);
    }

    #[test]
    fn range_is_not_a_float() {
        let toks = lex("1..k-1").unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|t| t.tok).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Int(1),
                Tok::DotDot,
                Tok::Ident("k".into()),
                Tok::Minus,
                Tok::Int(1),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn bad_character() {
        let err = lex("rank 2\n  $").unwrap_err();
        assert_eq!(err.0, Pos { line: 2, col: 3 });
    }
}
