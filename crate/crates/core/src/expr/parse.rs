//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' ['-'] integer | '^' '(' ['-'] integer ')')?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown function `{name}` at line {line}, column {col}")]
    UnknownFunction { name: String, line: usize, col: usize },
    #[error("undeclared variable `{name}` at line {line}, column {col}")]
    UndeclaredVariable { name: String, line: usize, col: usize },
    #[error("division by zero at line {line}, column {col}")]
    DivisionByZero { line: usize, col: usize },
}

impl ParseError {
    /// Shifts the reported position by a line offset (for embedded snippets).
    pub fn with_line_offset(self, offset: usize) -> ParseError {
        match self {
            ParseError::Syntax { line, col, message } => ParseError::Syntax {
                line: line + offset,
                col,
                message,
            },
            ParseError::UnknownFunction { name, line, col } => ParseError::UnknownFunction {
                name,
                line: line + offset,
                col,
            },
            ParseError::UndeclaredVariable { name, line, col } => {
                ParseError::UndeclaredVariable {
                    name,
                    line: line + offset,
                    col,
                }
            }
            ParseError::DivisionByZero { line, col } => ParseError::DivisionByZero {
                line: line + offset,
                col,
            },
        }
    }
}

/// Parses `src`, accepting any identifier as a variable.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parse_with(src, &|_| true)
}

/// Parses `src`; identifiers rejected by `declared` are errors.
pub fn parse_with(src: &str, declared: &dyn Fn(&str) -> bool) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src,
        bytes: src.as_bytes(),
        pos: 0,
        declared,
    };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(p.syntax("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        let c = p.src[p.pos..].chars().next().unwrap_or(' ');
        return Err(p.syntax(&format!("unexpected `{c}`")));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    declared: &'a dyn Fn(&str) -> bool,
}

impl Parser<'_> {
    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        (line, col)
    }

    fn syntax(&self, message: &str) -> ParseError {
        self.syntax_at(self.pos, message)
    }

    fn syntax_at(&self, pos: usize, message: &str) -> ParseError {
        let (line, col) = self.line_col(pos);
        ParseError::Syntax {
            line,
            col,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                None => Err(self.syntax(&format!("expected `{}`, found end of input", c as char))),
                Some(_) => {
                    let found = self.src[self.pos..].chars().next().unwrap_or(' ');
                    Err(self.syntax(&format!("expected `{}`, found `{found}`", c as char)))
                }
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).ok_or_else(|| {
                    let (line, col) = self.line_col(at);
                    ParseError::DivisionByZero { line, col }
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("exponent must be an integer literal"));
        }
        let n: i64 = self.src[start..self.pos]
            .parse()
            .map_err(|_| self.syntax_at(start, "exponent too large"))?;
        if paren {
            self.expect(b')')?;
        }
        let n = if neg { -n } else { n };
        base.pow(n).ok_or_else(|| {
            let (line, col) = self.line_col(at);
            ParseError::DivisionByZero { line, col }
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => {
                let found = self.src[self.pos..].chars().next().unwrap_or(' ');
                Err(self.syntax(&format!("unexpected `{found}`")))
            }
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let mut int_part = String::new();
        let mut frac_part = String::new();
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            int_part.push(self.bytes[self.pos] as char);
            self.pos += 1;
        }
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                frac_part.push(self.bytes[self.pos] as char);
                self.pos += 1;
            }
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(self.syntax_at(start, "malformed number"));
        }
        let digits = format!("{int_part}{frac_part}");
        let n: BigInt = digits.parse().map_err(|_| self.syntax_at(start, "malformed number"))?;
        let d = num_traits::pow(BigInt::from(10), frac_part.len());
        Ok(Expr::rational(BigRational::new(n, d)))
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let arg = self.expr()?;
            self.expect(b')')?;
            return match name {
                "sin" => Ok(Expr::sin(&arg)),
                "cos" => Ok(Expr::cos(&arg)),
                _ => {
                    let (line, col) = self.line_col(start);
                    Err(ParseError::UnknownFunction {
                        name: name.to_string(),
                        line,
                        col,
                    })
                }
            };
        }
        if !(self.declared)(name) {
            let (line, col) = self.line_col(start);
            return Err(ParseError::UndeclaredVariable {
                name: name.to_string(),
                line,
                col,
            });
        }
        Ok(Expr::var(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("1 - 2 - 3").unwrap(), Expr::int(-4));
        assert_eq!(parse("2*3^2").unwrap(), Expr::int(18));
        assert_eq!(parse("-2^2").unwrap(), Expr::int(-4));
        assert_eq!(parse("12/4/3").unwrap(), Expr::int(1));
        assert_eq!(parse("x^-1*x").unwrap(), Expr::one());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse("3/4").unwrap(), Expr::frac(3, 4));
        assert_eq!(parse("0.25").unwrap(), Expr::frac(1, 4));
    }

    #[test]
    fn trig_functions() {
        let t = Expr::var("t");
        assert_eq!(parse("sin(t)^2 + cos(t)^2").unwrap(), Expr::one());
        assert_eq!(parse("cos(0)").unwrap(), Expr::one());
        assert_eq!(parse("sin(t)").unwrap(), Expr::sin(&t));
    }

    #[test]
    fn reports_positions() {
        let err = parse("x +\n  * y").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                col: 3,
                message: "unexpected `*`".into()
            }
        );
        assert!(matches!(
            parse("tan(x)").unwrap_err(),
            ParseError::UnknownFunction { ref name, line: 1, col: 1 } if name == "tan"
        ));
        assert!(matches!(
            parse("x/(y - y)").unwrap_err(),
            ParseError::DivisionByZero { line: 1, col: 2 }
        ));
        assert!(matches!(parse("(x").unwrap_err(), ParseError::Syntax { .. }));
        assert!(matches!(parse("").unwrap_err(), ParseError::Syntax { .. }));
    }

    #[test]
    fn undeclared_variable() {
        let err = parse_with("a + b", &|n| n == "a").unwrap_err();
        assert!(matches!(
            err,
            ParseError::UndeclaredVariable { ref name, line: 1, col: 5 } if name == "b"
        ));
    }
}
