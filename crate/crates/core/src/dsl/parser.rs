use std::collections::HashSet;

use super::ast::{BinOp, Expr, Func, MetricSpec};
use super::error::DslError;
use super::lexer::{describe, tokenize, Tok, Token};

pub fn parse_metric(text: &str) -> Result<MetricSpec, DslError> {
    let tokens = tokenize(text)?;
    Parser {
        tokens,
        pos: 0,
        scope: HashSet::new(),
    }
    .spec()
}

/// Parses a closed numeric expression such as `pi/3` or `2*sqrt(2)`.
pub fn parse_constant(text: &str) -> Result<f64, DslError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        scope: HashSet::from(["pi".to_string()]),
    };
    let e = p.expr()?;
    p.expect(Tok::Eof, "end of expression")?;
    let at = p.peek().clone();
    match e.evaluate_closed() {
        Some(v) if v.is_finite() => Ok(v),
        _ => p.syntax(&at, "expression does not evaluate to a finite number"),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    scope: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, at: &Token, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax {
            line: at.line,
            col: at.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, DslError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            self.syntax(&t, format!("expected {what}, found {}", describe(&t.tok)))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), DslError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.syntax(&t, format!("expected {what}, found {}", describe(other))),
        }
    }

    fn declare(&mut self, name: &str, at: &Token) -> Result<(), DslError> {
        if Func::from_name(name).is_some() || !self.scope.insert(name.to_string()) {
            return Err(DslError::DuplicateName {
                line: at.line,
                col: at.col,
                name: name.to_string(),
            });
        }
        Ok(())
    }

    fn spec(mut self) -> Result<MetricSpec, DslError> {
        let head = self.next();
        if head.tok != Tok::Ident("metric".into()) {
            return self.syntax(&head, format!("expected 'metric', found {}", describe(&head.tok)));
        }
        let t = self.next();
        let name = match t.tok.clone() {
            Tok::Str(s) => s,
            other => return self.syntax(&t, format!("expected metric name string, found {}", describe(&other))),
        };
        self.expect(Tok::LBrace, "'{'")?;
        let mut coords: Option<[String; 4]> = None;
        let mut params = Vec::new();
        let mut lets = Vec::new();
        let mut components: Vec<((usize, usize), Expr)> = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::RBrace => {
                    self.next();
                    break;
                }
                Tok::Ident(kw) if kw == "coords" && *self.peek_at(1) == Tok::Colon && components.is_empty() => {
                    self.next();
                    self.next();
                    if coords.is_some() {
                        return self.syntax(&t, "coords declared twice");
                    }
                    let mut names: Vec<String> = Vec::new();
                    loop {
                        let (n, at) = self.ident("coordinate name")?;
                        self.declare(&n, &at)?;
                        names.push(n);
                        let sep = self.next();
                        match sep.tok.clone() {
                            Tok::Comma => continue,
                            Tok::Semi => break,
                            other => return self.syntax(&sep, format!("expected ',' or ';', found {}", describe(&other))),
                        }
                    }
                    if names.len() != 4 {
                        return self.syntax(&t, format!("expected exactly 4 coordinates, found {}", names.len()));
                    }
                    coords = Some(std::array::from_fn(|i| names[i].clone()));
                }
                Tok::Ident(kw) if kw == "params" && *self.peek_at(1) == Tok::Colon && components.is_empty() => {
                    self.next();
                    self.next();
                    loop {
                        let (n, at) = self.ident("parameter name")?;
                        self.declare(&n, &at)?;
                        self.expect(Tok::Eq, "'='")?;
                        let neg = if self.peek().tok == Tok::Minus {
                            self.next();
                            true
                        } else {
                            false
                        };
                        let vt = self.next();
                        let v = match vt.tok.clone() {
                            Tok::Num(x) => x,
                            Tok::Int(k) => k as f64,
                            other => return self.syntax(&vt, format!("expected number, found {}", describe(&other))),
                        };
                        params.push((n, if neg { -v } else { v }));
                        let sep = self.next();
                        match sep.tok.clone() {
                            Tok::Comma => continue,
                            Tok::Semi => break,
                            other => return self.syntax(&sep, format!("expected ',' or ';', found {}", describe(&other))),
                        }
                    }
                }
                Tok::Ident(kw) if kw == "let" && components.is_empty() => {
                    self.next();
                    let (n, at) = self.ident("name after 'let'")?;
                    self.expect(Tok::Eq, "'='")?;
                    let e = self.expr()?;
                    self.expect(Tok::Semi, "';'")?;
                    self.declare(&n, &at)?;
                    lets.push((n, e));
                }
                Tok::Ident(kw) if kw == "g" && *self.peek_at(1) == Tok::LBracket => {
                    self.next();
                    self.next();
                    let a = self.index()?;
                    self.expect(Tok::Comma, "','")?;
                    let b = self.index()?;
                    self.expect(Tok::RBracket, "']'")?;
                    self.expect(Tok::Eq, "'='")?;
                    let e = self.expr()?;
                    self.expect(Tok::Semi, "';'")?;
                    let key = (a.min(b), a.max(b));
                    if components.iter().any(|(k, _)| *k == key) {
                        return Err(DslError::DuplicateComponent {
                            line: t.line,
                            col: t.col,
                            mu: key.0,
                            nu: key.1,
                        });
                    }
                    components.push((key, e));
                }
                Tok::Eof => return self.syntax(&t, "unexpected end of input, missing '}'"),
                other => {
                    let msg = if components.is_empty() {
                        format!("expected 'coords:', 'params:', 'let' or 'g[', found {}", describe(other))
                    } else {
                        format!("expected 'g[' or '}}', found {}", describe(other))
                    };
                    return self.syntax(&t, msg);
                }
            }
        }
        let close = self.tokens[self.pos.saturating_sub(1)].clone();
        let trailing = self.peek().clone();
        if trailing.tok != Tok::Eof {
            return self.syntax(&trailing, format!("unexpected {} after metric block", describe(&trailing.tok)));
        }
        let Some(coords) = coords else {
            return self.syntax(&close, "missing 'coords:' declaration");
        };
        if components.is_empty() {
            return self.syntax(&close, "metric has no g[i,j] components");
        }
        Ok(MetricSpec {
            name,
            coords,
            params,
            lets,
            components,
        })
    }

    fn index(&mut self) -> Result<usize, DslError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Int(k) if k <= 3 => Ok(k as usize),
            Tok::Int(k) => Err(DslError::IndexOutOfRange {
                line: t.line,
                col: t.col,
                index: k,
            }),
            other => self.syntax(&t, format!("expected index 0..3, found {}", describe(&other))),
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.primary()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let at = self.peek().clone();
        let exponent = match at.tok {
            Tok::Minus => {
                self.next();
                Expr::Neg(Box::new(self.literal()?))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                e
            }
            _ => self.literal()?,
        };
        if exponent.constant_value().is_none() {
            return self.syntax(&at, "exponent must be a constant built from numeric literals");
        }
        if self.peek().tok == Tok::Caret {
            let t = self.peek().clone();
            return self.syntax(&t, "chained '^' needs parentheses");
        }
        Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
    }

    fn literal(&mut self) -> Result<Expr, DslError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Num(x) => Ok(Expr::Num(x)),
            Tok::Int(k) => Ok(Expr::Num(k as f64)),
            other => self.syntax(&t, format!("expected numeric exponent, found {}", describe(&other))),
        }
    }

    fn primary(&mut self) -> Result<Expr, DslError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Num(x) => Ok(Expr::Num(x)),
            Tok::Int(k) => Ok(Expr::Num(k as f64)),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return self.syntax(
                        &close,
                        format!("expected ')' to close '(' opened at line {}, found {}", t.line, describe(&close.tok)),
                    );
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.peek().tok == Tok::LParen {
                    let Some(f) = Func::from_name(&name) else {
                        return Err(DslError::UnknownIdentifier {
                            line: t.line,
                            col: t.col,
                            name,
                        });
                    };
                    self.next();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                if !self.scope.contains(&name) {
                    return Err(DslError::UnknownIdentifier {
                        line: t.line,
                        col: t.col,
                        name,
                    });
                }
                Ok(Expr::Ident(name))
            }
            other => self.syntax(&t, format!("expected expression, found {}", describe(&other))),
        }
    }
}
