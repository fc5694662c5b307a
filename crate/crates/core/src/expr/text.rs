//! Text form of expressions.
//!
//! ```text
//! sum    := ['-'] term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' INT | '^(' RATIONAL ')')?
//! atom   := '[' SCALAR ']' | RATIONAL | 'i' | 'eps' | NAME ['@' INT]
//!         | 'exp(' sum ')' | 'log1p(' sum ')' | '(' sum ')'
//! NAME   := LETTER (LETTER | DIGIT)* ['_{' ... '}' | '_' DIGIT+]
//! ```
//!
//! Leg tags `@k` are 1-based; an untagged generator lives on leg 1.
//! `x^n` for an integer `n` is an ordered product, `x^(q)` a rational power.

use std::fmt;
use std::str::FromStr;

use super::node::{Expr, Node};
use crate::exact::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseExprError {
    pub pos: usize,
    pub msg: String,
}

impl FromStr for Expr {
    type Err = ParseExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseExprError {
        ParseExprError { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseExprError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", b as char)))
        }
    }

    fn starts_with(&mut self, kw: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(kw.as_bytes())
    }

    fn sum(&mut self) -> Result<Expr, ParseExprError> {
        let mut terms = Vec::new();
        let mut negate = self.eat(b'-');
        loop {
            let t = self.term()?;
            terms.push(if negate { t.neg() } else { t });
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                break;
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseExprError> {
        let mut factors = vec![self.factor()?];
        loop {
            self.eat(b'*');
            match self.peek() {
                None | Some(b'+') | Some(b'-') | Some(b')') => break,
                _ => factors.push(self.factor()?),
            }
        }
        Ok(Expr::prod(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        if self.eat(b'(') {
            let q = self.rational_until(b')')?;
            self.expect(b')')?;
            return Ok(Expr::pow(base, q));
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let n: usize = std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.error("expected exponent"))?;
        Ok(Expr::prod(std::iter::repeat_n(base, n)))
    }

    fn rational_until(&mut self, stop: u8) -> Result<Rational, ParseExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos] != stop {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.error("utf8"))?;
        text.parse().map_err(|_| ParseExprError { pos: start, msg: format!("bad rational `{text}`") })
    }

    fn atom(&mut self) -> Result<Expr, ParseExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'[') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos] != b']' {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.error("utf8"))?;
                let c: Scalar = text
                    .parse()
                    .map_err(|_| ParseExprError { pos: start, msg: format!("bad scalar `{text}`") })?;
                self.expect(b']')?;
                Ok(Expr::constant(c))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos < self.src.len() && self.src[self.pos] == b'/' {
                    self.pos += 1;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let q: Rational = text
                    .parse()
                    .map_err(|_| ParseExprError { pos: start, msg: format!("bad number `{text}`") })?;
                Ok(Expr::constant(Scalar::from_rational(q)))
            }
            Some(b) if b.is_ascii_alphabetic() => {
                if self.starts_with("exp(") {
                    self.pos += 4;
                    let e = self.sum()?;
                    self.expect(b')')?;
                    return Ok(Expr::exp(e));
                }
                if self.starts_with("log1p(") {
                    self.pos += 6;
                    let e = self.sum()?;
                    self.expect(b')')?;
                    return Ok(Expr::log1p(e));
                }
                self.name()
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn name(&mut self) -> Result<Expr, ParseExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'_') {
            self.pos += 1;
            if self.src.get(self.pos) == Some(&b'{') {
                let mut depth = 0usize;
                loop {
                    match self.src.get(self.pos) {
                        None => return Err(self.error("unclosed `{`")),
                        Some(b'{') => depth += 1,
                        Some(b'}') => {
                            depth -= 1;
                            if depth == 0 {
                                self.pos += 1;
                                break;
                            }
                        }
                        _ => {}
                    }
                    self.pos += 1;
                }
            } else {
                let digits = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                if self.pos == digits {
                    return Err(self.error("empty subscript"));
                }
            }
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "i" => return Ok(Expr::constant(Scalar::I)),
            "eps" => return Ok(Expr::constant("eps".parse().expect("eps literal"))),
            _ => {}
        }
        let mut leg = 0u8;
        if self.src.get(self.pos) == Some(&b'@') {
            self.pos += 1;
            let d = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u8 = std::str::from_utf8(&self.src[d..self.pos])
                .expect("ascii")
                .parse()
                .map_err(|_| self.error("bad leg tag"))?;
            if k == 0 {
                return Err(self.error("leg tags are 1-based"));
            }
            leg = k - 1;
        }
        Ok(Expr::gen_on(leg, name))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, true)
    }
}

/// `top` suppresses the parentheses around a sum.
fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, top: bool) -> fmt::Result {
    match e.node() {
        Node::One => f.write_str("1"),
        Node::Gen { leg, name } => {
            if *leg == 0 {
                f.write_str(name)
            } else {
                write!(f, "{name}@{}", leg + 1)
            }
        }
        Node::Scale(c, x) => {
            write!(f, "[{c}]")?;
            if !x.is_one() {
                f.write_str(" ")?;
                write_expr(f, x, false)?;
            }
            Ok(())
        }
        Node::Sum(v) if v.is_empty() => f.write_str("0"),
        Node::Sum(v) => {
            if !top {
                f.write_str("(")?;
            }
            for (k, x) in v.iter().enumerate() {
                if k > 0 {
                    f.write_str(" + ")?;
                }
                write_expr(f, x, false)?;
            }
            if !top {
                f.write_str(")")?;
            }
            Ok(())
        }
        Node::Prod(v) => {
            for (k, x) in v.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write_expr(f, x, false)?;
            }
            Ok(())
        }
        Node::Exp(x) => {
            f.write_str("exp(")?;
            write_expr(f, x, true)?;
            f.write_str(")")
        }
        Node::Log1p(x) => {
            f.write_str("log1p(")?;
            write_expr(f, x, true)?;
            f.write_str(")")
        }
        Node::Pow(x, q) => {
            f.write_str("(")?;
            write_expr(f, x, true)?;
            write!(f, ")^({q})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn parses_generators_and_legs() {
        assert_eq!(p("E_{1+2}"), Expr::gen("E_{1+2}"));
        assert_eq!(p("E_{1-3}@2"), Expr::gen_on(1, "E_{1-3}"));
        assert_eq!(p("H_3"), Expr::gen("H_3"));
        assert_eq!(p("E_{2*1}"), Expr::gen("E_{2*1}"));
    }

    #[test]
    fn parses_scalars_and_products() {
        let e = p("[1/2-1/4i] A B");
        let (c, x) = e.split_scale();
        assert_eq!(c, "1/2-1/4i".parse().unwrap());
        assert_eq!(x, Expr::gen("A").mul(&Expr::gen("B")));
        assert_eq!(p("2*A"), p("[2] A"));
        assert_eq!(p("A - B"), Expr::gen("A").add(&Expr::gen("B").neg()));
        assert_eq!(p("-A"), Expr::gen("A").neg());
        assert_eq!(p("i A"), Expr::scale(Scalar::I, Expr::gen("A")));
        assert_eq!(p("A^2"), Expr::gen("A").mul(&Expr::gen("A")));
        assert!(p("0").is_zero());
        assert!(p("1").is_one());
    }

    #[test]
    fn round_trips_through_display() {
        for s in [
            "H_{1+2}@1 log1p(E_{1+2}@2)",
            "exp([1/2] E_{1-3}@1 E_{2+3}@2 (1 + E_{1+2}@2)^(-1/2))",
            "A B - B A",
            "[-2] E_1@1 E_4@2 (1 + E_{3+4}@2)^(-1) (1 + E_{1+2}@2)^(-1/2)",
            "[3eps] H",
            "[i] X + 1",
            "0",
        ] {
            let e = p(s);
            let shown = e.to_string();
            assert_eq!(p(&shown), e, "{s} -> {shown}");
        }
    }

    #[test]
    fn errors_carry_position() {
        let err = "A + (B".parse::<Expr>().unwrap_err();
        assert_eq!(err.pos, 6);
        assert!("A@0".parse::<Expr>().is_err());
        assert!("A $".parse::<Expr>().is_err());
    }
}
