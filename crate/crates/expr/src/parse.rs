//! Recursive-descent parser for rational expressions.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := ("+" | "-") unary | power
//! power   := atom ("^" exponent)?
//! exponent:= ("+" | "-")? integer | "(" ("+" | "-")? integer ")"
//! atom    := number | identifier | "(" expr ")"
//! number  := digit+ ("." digit+)?
//! ident   := (letter | "_") (letter | digit | "_")*
//! ```
//!
//! Whitespace is insignificant. Implicit multiplication (`4y`) is rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

use crate::error::ExprError;
use crate::rational::RationalExpr;

/// Parses `text`, accepting only identifiers listed in `variables`.
pub fn parse_expr<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<RationalExpr, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        variables,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a, S> {
    src: &'a [u8],
    pos: usize,
    variables: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn syntax(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalExpr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).map_err(|_| ExprError::ZeroDenominator {
                    position: Some(at),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalExpr, ExprError> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RationalExpr, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        self.pos += 1;
        let exp = self.exponent()?;
        base.pow(exp)
            .map_err(|_| ExprError::ZeroDenominator { position: Some(at) })
    }

    fn exponent(&mut self) -> Result<i32, ExprError> {
        let paren = self.eat(b'(');
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let mag: i32 = digits.parse().map_err(|_| ExprError::Syntax {
            position: start,
            message: "exponent out of range".into(),
        })?;
        if paren && !self.eat(b')') {
            return Err(self.syntax("expected `)` after exponent"));
        }
        Ok(if neg { -mag } else { mag })
    }

    fn atom(&mut self) -> Result<RationalExpr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.syntax(format!("unexpected `{}`", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<RationalExpr, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let mut value = BigRational::from_integer(
            BigInt::from_str_radix(int_part, 10).expect("digits parse"),
        );
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let fstart = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if fstart == self.pos {
                return Err(self.syntax("expected digits after `.`"));
            }
            let frac = std::str::from_utf8(&self.src[fstart..self.pos]).expect("ascii");
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let f = BigInt::from_str_radix(frac, 10).expect("digits parse");
            value += BigRational::new(f, scale);
        }
        self.reject_implicit_product()?;
        Ok(RationalExpr::from_rational(value))
    }

    fn identifier(&mut self) -> Result<RationalExpr, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if !self.variables.iter().any(|v| v.as_ref() == name) {
            return Err(ExprError::UnknownVariable {
                name: name.to_string(),
                position: start,
            });
        }
        self.reject_implicit_product()?;
        Ok(RationalExpr::var(name))
    }

    fn reject_implicit_product(&mut self) -> Result<(), ExprError> {
        let save = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'(' => {
                Err(self.syntax("implicit multiplication is not allowed; use `*`"))
            }
            _ => {
                self.pos = save;
                Ok(())
            }
        }
    }
}

/// True when `name` is a valid identifier in the expression grammar.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
