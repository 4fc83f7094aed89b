//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('-')? atom ('^' '-'? int)?
//! atom   := int ('/' int)? | var | '(' expr ')'
//! var    := ('w' | 'u' | 'a' | 'b') '[' int ',' int ']'
//! ```
//! Negative exponents are accepted on variables only.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{MPoly, PolyError, Var, VarKind};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

/// Parses polynomial text; error columns are 1-based.
pub fn parse_poly(text: &str) -> Result<MPoly, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            column: self.pos + 1,
            message: msg.to_string(),
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

    fn expect(&mut self, c: u8) -> Result<(), PolyError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        let start = self.pos;
        let (base, var) = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.int()?;
        let e: i32 = e
            .try_into()
            .map_err(|_| self.error("exponent out of range"))?;
        if !neg {
            return Ok(base.pow(e as u32));
        }
        match var {
            Some(v) => Ok(MPoly::term(BigRational::from_integer(1.into()), vec![(v, -e)])),
            None => Err(PolyError::Parse {
                column: start + 1,
                message: "negative exponent on a non-variable".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<(MPoly, Option<Var>), PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok((e, None))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = BigInt::from(self.int()?);
                let d = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.int()?;
                    if d == 0 {
                        return Err(self.error("division by zero"));
                    }
                    BigInt::from(d)
                } else {
                    BigInt::from(1)
                };
                Ok((MPoly::constant(BigRational::new(n, d)), None))
            }
            Some(c @ (b'w' | b'u' | b'a' | b'b')) => {
                self.pos += 1;
                let kind = match c {
                    b'w' => VarKind::W,
                    b'u' => VarKind::U,
                    b'a' => VarKind::A,
                    _ => VarKind::B,
                };
                self.expect(b'[')?;
                let i = self.index()?;
                self.expect(b',')?;
                let j = self.index()?;
                self.expect(b']')?;
                let v = Var::new(kind, i, j);
                Ok((MPoly::var(v), Some(v)))
            }
            Some(_) => Err(self.error("expected a number, variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn index(&mut self) -> Result<u32, PolyError> {
        let v = self.int()?;
        match u32::try_from(v) {
            Ok(x) if x >= 1 => Ok(x),
            _ => Err(self.error("indices must be at least 1")),
        }
    }

    fn int(&mut self) -> Result<u64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| PolyError::Parse {
                column: start + 1,
                message: "integer too large".into(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        let p = parse_poly("w[1,1] - w[2,1]").unwrap();
        assert_eq!(p, &MPoly::var(Var::w(1, 1)) - &MPoly::var(Var::w(2, 1)));
        let q = parse_poly("(w[1,1]+u[2,1])^2 - 2*w[1,1]*u[2,1]").unwrap();
        assert_eq!(q.to_string(), "w[1,1]^2 + u[2,1]^2");
        assert_eq!(parse_poly("-3/2").unwrap().to_string(), "-3/2");
        assert_eq!(parse_poly("a[2,1]^-1*b[1,1]").unwrap().to_string(), "a[2,1]^-1*b[1,1]");
    }

    #[test]
    fn reports_columns() {
        match parse_poly("w[1,1] + * 2") {
            Err(PolyError::Parse { column, .. }) => assert_eq!(column, 10),
            other => panic!("{other:?}"),
        }
        match parse_poly("w[0,1]") {
            Err(PolyError::Parse { column, .. }) => assert_eq!(column, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("(w[1,1]").is_err());
        assert!(parse_poly("2^-1").is_err());
        assert!(parse_poly("").is_err());
    }
}
