use super::expr::{BinOp, Expr, UnaryOp};
use super::lexer::{tokenize, Token, TokenKind};
use super::{validate_spec, SpecError, SupportFunction, SurfaceSpec};

/// Parses and validates a spec file.
pub fn parse_spec(text: &str) -> Result<SurfaceSpec, SpecError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens: &tokens, pos: 0, end: end_location(text) };

    let mut n: Option<usize> = None;
    let mut domain: Option<Vec<(f64, f64)>> = None;
    let mut immersion: Option<Vec<Expr>> = None;
    let mut supports: Vec<SupportFunction> = Vec::new();
    let mut name: Option<String> = None;
    let mut description: Option<String> = None;

    loop {
        p.skip_newlines();
        let Some(tok) = p.peek() else { break };
        let key = match &tok.kind {
            TokenKind::Ident(s) => s.clone(),
            _ => return Err(p.error_here("statement key")),
        };
        p.advance();
        match key.as_str() {
            "n" => {
                p.expect_equals()?;
                let tok = p.next_or_eof("integer dimension")?;
                let value = match tok.kind {
                    TokenKind::Number(v) if v.fract() == 0.0 && v >= 0.0 => v as usize,
                    _ => return Err(syntax_at(&tok, "integer dimension")),
                };
                set_once(&mut n, value, "n")?;
            }
            "domain" => {
                p.expect_equals()?;
                let d = p.domain()?;
                set_once(&mut domain, d, "domain")?;
            }
            "x" => {
                p.expect_equals()?;
                let v = p.vector()?;
                set_once(&mut immersion, v, "x")?;
            }
            "q" | "alpha" => {
                let label = p.label()?;
                p.expect_equals()?;
                let expr = if key == "q" {
                    p.expr()?
                } else {
                    let at = p.peek().cloned();
                    let e = p.expr()?;
                    let alpha = e.const_value().ok_or_else(|| match &at {
                        Some(t) => syntax_at(t, "constant exponent"),
                        None => p.error_here("constant exponent"),
                    })?;
                    Expr::abs_curvature_pow(alpha)
                };
                if supports.iter().any(|s| s.label == label) {
                    return Err(SpecError::DuplicateKey(format!("q {label}")));
                }
                supports.push(SupportFunction { label, expr });
            }
            "name" | "description" => {
                p.expect_equals()?;
                let tok = p.next_or_eof("text")?;
                let TokenKind::Text(text) = tok.kind else {
                    return Err(syntax_at(&tok, "text"));
                };
                let slot = if key == "name" { &mut name } else { &mut description };
                set_once(slot, text, &key)?;
            }
            _ => return Err(syntax_at(tok, "one of n, domain, x, q, alpha, name, description")),
        }
        p.expect_statement_end()?;
    }

    let spec = SurfaceSpec {
        n: n.ok_or_else(|| SpecError::MissingKey("n".into()))?,
        domain: domain.ok_or_else(|| SpecError::MissingKey("domain".into()))?,
        immersion: immersion.ok_or_else(|| SpecError::MissingKey("x".into()))?,
        support_functions: supports,
        name: name.unwrap_or_default(),
        description: description.unwrap_or_default(),
    };
    validate_spec(spec)
}

/// Parses a single expression (no statement syntax).
pub fn parse_expr(text: &str) -> Result<Expr, SpecError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens: &tokens, pos: 0, end: end_location(text) };
    p.skip_newlines();
    let e = p.expr()?;
    p.skip_newlines();
    if let Some(tok) = p.peek() {
        return Err(syntax_at(tok, "end of expression"));
    }
    Ok(e)
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str) -> Result<(), SpecError> {
    if slot.is_some() {
        return Err(SpecError::DuplicateKey(key.to_string()));
    }
    *slot = Some(value);
    Ok(())
}

fn syntax_at(tok: &Token, expected: &str) -> SpecError {
    SpecError::Syntax { line: tok.line, col: tok.col, expected: expected.to_string() }
}

fn end_location(text: &str) -> (usize, usize) {
    let line = text.split('\n').count();
    let col = text.split('\n').next_back().map(|l| l.chars().count()).unwrap_or(0) + 1;
    (line, col)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn advance(&mut self) {
        self.pos += 1;
    }

    fn next_or_eof(&mut self, expected: &str) -> Result<Token, SpecError> {
        let tok = self.peek().cloned().ok_or_else(|| self.error_here(expected))?;
        self.advance();
        Ok(tok)
    }

    fn error_here(&self, expected: &str) -> SpecError {
        match self.peek() {
            Some(tok) => syntax_at(tok, expected),
            None => SpecError::Syntax { line: self.end.0, col: self.end.1, expected: expected.to_string() },
        }
    }

    fn skip_newlines(&mut self) {
        while self.peek_kind() == Some(&TokenKind::Newline) {
            self.advance();
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<(), SpecError> {
        if self.peek_kind() == Some(&kind) {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn expect_equals(&mut self) -> Result<(), SpecError> {
        self.expect(TokenKind::Equals, "'='")
    }

    fn expect_statement_end(&mut self) -> Result<(), SpecError> {
        match self.peek_kind() {
            None | Some(TokenKind::Newline) => Ok(()),
            _ => Err(self.error_here("end of line")),
        }
    }

    fn label(&mut self) -> Result<String, SpecError> {
        match self.peek_kind() {
            Some(TokenKind::Ident(s)) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.error_here("label")),
        }
    }

    fn vector(&mut self) -> Result<Vec<Expr>, SpecError> {
        self.expect(TokenKind::LBracket, "'['")?;
        let mut items = vec![self.expr()?];
        while self.peek_kind() == Some(&TokenKind::Comma) {
            self.advance();
            items.push(self.expr()?);
        }
        self.expect(TokenKind::RBracket, "',' or ']'")?;
        Ok(items)
    }

    fn domain(&mut self) -> Result<Vec<(f64, f64)>, SpecError> {
        let mut axes = vec![self.interval()?];
        while matches!(self.peek_kind(), Some(TokenKind::Ident(s)) if s == "x") {
            self.advance();
            axes.push(self.interval()?);
        }
        Ok(axes)
    }

    fn interval(&mut self) -> Result<(f64, f64), SpecError> {
        self.expect(TokenKind::LBracket, "'['")?;
        let lo = self.constant("constant lower bound")?;
        self.expect(TokenKind::Comma, "','")?;
        let hi = self.constant("constant upper bound")?;
        self.expect(TokenKind::RBracket, "']'")?;
        Ok((lo, hi))
    }

    fn constant(&mut self, expected: &str) -> Result<f64, SpecError> {
        let start = self.peek().cloned();
        let e = self.expr()?;
        e.const_value().ok_or_else(|| match &start {
            Some(t) => syntax_at(t, expected),
            None => self.error_here(expected),
        })
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, SpecError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Op('+')) => BinOp::Add,
                Some(TokenKind::Op('-')) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr, SpecError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Op('*')) => BinOp::Mul,
                Some(TokenKind::Op('/')) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    // unary := ('-' | '+') unary | power
    fn unary(&mut self) -> Result<Expr, SpecError> {
        match self.peek_kind() {
            Some(TokenKind::Op('-')) => {
                self.advance();
                Ok(Expr::unary(UnaryOp::Neg, self.unary()?))
            }
            Some(TokenKind::Op('+')) => {
                self.advance();
                self.unary()
            }
            _ => self.power(),
        }
    }

    // power := atom ('^' unary)?   (right-associative through unary -> power)
    fn power(&mut self) -> Result<Expr, SpecError> {
        let base = self.atom()?;
        if self.peek_kind() == Some(&TokenKind::Op('^')) {
            self.advance();
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SpecError> {
        let Some(tok) = self.peek() else {
            return Err(self.error_here("expression"));
        };
        match &tok.kind {
            TokenKind::Number(v) => {
                self.advance();
                Ok(Expr::Const(*v))
            }
            TokenKind::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(e)
            }
            TokenKind::Ident(name) => {
                self.advance();
                if let Some(op) = UnaryOp::from_name(name) {
                    self.expect(TokenKind::LParen, "'(' after function name")?;
                    let arg = self.expr()?;
                    self.expect(TokenKind::RParen, "')'")?;
                    return Ok(Expr::unary(op, arg));
                }
                match name.as_str() {
                    "K" => Ok(Expr::Curvature),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    _ => match variable_index(name) {
                        Some(i) => Ok(Expr::Var(i - 1)),
                        None => Err(syntax_at(tok, "variable u<i>, K, number, or function")),
                    },
                }
            }
            _ => Err(syntax_at(tok, "expression")),
        }
    }
}

/// `u3` -> Some(3); `u0` and anything else -> None.
fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('u')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&i| i >= 1)
}
