use super::error::DslError;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Int(u64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Num(x) => format!("number {x}"),
        Tok::Int(n) => format!("integer {n}"),
        Tok::Str(s) => format!("string \"{s}\""),
        Tok::Eof => "end of input".into(),
        other => {
            let s = match other {
                Tok::LBrace => "{",
                Tok::RBrace => "}",
                Tok::LBracket => "[",
                Tok::RBracket => "]",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::Colon => ":",
                Tok::Semi => ";",
                Tok::Comma => ",",
                Tok::Eq => "=",
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::Star => "*",
                Tok::Slash => "/",
                Tok::Caret => "^",
                _ => unreachable!(),
            };
            format!("'{s}'")
        }
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ':' => Some(Tok::Colon),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: tl, col: tc });
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '"' {
            let mut j = i + 1;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if j >= chars.len() || chars[j] != '"' {
                return Err(DslError::Lexical {
                    line: tl,
                    col: tc,
                    msg: "unterminated string literal".into(),
                });
            }
            let s: String = chars[i + 1..j].iter().collect();
            let n = j + 1 - i;
            out.push(Token { tok: Tok::Str(s), line: tl, col: tc });
            advance(n, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let n = j - i;
            out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
            advance(n, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let mut integral = true;
            if j < chars.len() && chars[j] == '.' {
                integral = false;
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    integral = false;
                    j = k;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                } else {
                    return Err(DslError::Lexical {
                        line: tl,
                        col: tc + (k - i),
                        msg: "malformed exponent in number".into(),
                    });
                }
            }
            let text: String = chars[i..j].iter().collect();
            let tok = match (integral, text.parse::<u64>()) {
                (true, Ok(n)) => Tok::Int(n),
                _ => Tok::Num(text.parse::<f64>().map_err(|_| DslError::Lexical {
                    line: tl,
                    col: tc,
                    msg: format!("invalid number '{text}'"),
                })?),
            };
            let n = j - i;
            out.push(Token { tok, line: tl, col: tc });
            advance(n, &mut i, &mut col);
            continue;
        }
        return Err(DslError::Lexical {
            line: tl,
            col: tc,
            msg: format!("unexpected character '{c}'"),
        });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
