//! Text grammar for polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' natural]
//! atom   := natural ['/' natural] | 'x' index | 't' index | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::One;

use super::{ProductPoly, SparsePoly, Var, Q};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Ast {
    Num(Q),
    Var(Var),
    Sum(Vec<(bool, Ast)>),
    Product(Vec<Ast>),
    Pow(Box<Ast>, u32),
}

impl Ast {
    fn expand(&self) -> SparsePoly {
        match self {
            Ast::Num(c) => SparsePoly::constant(c.clone()),
            Ast::Var(v) => SparsePoly::var(*v),
            Ast::Sum(terms) => terms.iter().fold(SparsePoly::zero(), |acc, (neg, t)| {
                let e = t.expand();
                if *neg {
                    &acc - &e
                } else {
                    &acc + &e
                }
            }),
            Ast::Product(fs) => fs
                .iter()
                .fold(SparsePoly::one(), |acc, f| &acc * &f.expand()),
            Ast::Pow(b, e) => b.expand().pow(*e),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{msg} at offset {} in polynomial `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        )))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut terms = Vec::new();
        let mut neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            terms.push((neg, self.term()?));
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                break;
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(Ast::Sum(terms))
    }

    fn term(&mut self) -> Result<Ast> {
        let mut fs = vec![self.factor()?];
        while self.eat(b'*') {
            fs.push(self.factor()?);
        }
        if fs.len() == 1 {
            return Ok(fs.pop().expect("one factor"));
        }
        Ok(Ast::Product(fs))
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e: u32 = self
                .digits()?
                .parse()
                .map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(c @ (b'x' | b't')) => {
                self.pos += 1;
                let idx: u32 = self
                    .digits()?
                    .parse()
                    .map_err(|_| Error::Parse("variable index too large".into()))?;
                if idx == 0 {
                    return self.err("variable indices start at 1");
                }
                Ok(Ast::Var(if c == b'x' { Var::Xi(idx) } else { Var::T(idx) }))
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits()?.parse().expect("digits parse");
                let mut d = BigInt::one();
                let save = self.pos;
                if self.eat(b'/') {
                    if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        d = self.digits()?.parse().expect("digits parse");
                        if d == BigInt::from(0) {
                            return self.err("zero denominator");
                        }
                    } else {
                        self.pos = save;
                        return self.err("expected denominator");
                    }
                }
                Ok(Ast::Num(Q::new(n, d)))
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }

    fn finish(&mut self, ast: Ast) -> Result<Ast> {
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(ast)
    }
}

fn parse_ast(s: &str) -> Result<Ast> {
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
    };
    let ast = p.expr()?;
    p.finish(ast)
}

/// Parses and expands a polynomial.
pub fn parse_poly(s: &str) -> Result<SparsePoly> {
    Ok(parse_ast(s)?.expand())
}

/// Parses a polynomial, keeping its top-level product structure as factors.
pub(super) fn parse_product(s: &str) -> Result<ProductPoly> {
    let ast = parse_ast(s)?;
    let (neg, ast) = match ast {
        Ast::Sum(mut terms) if terms.len() == 1 && terms[0].0 => (true, terms.remove(0).1),
        other => (false, other),
    };
    let factors = match ast {
        Ast::Product(fs) => fs,
        other => vec![other],
    };
    let mut out = ProductPoly::constant(if neg { -Q::one() } else { Q::one() });
    for f in factors {
        match f {
            Ast::Pow(b, e) => {
                let b = b.expand();
                for _ in 0..e {
                    out.push(b.clone());
                }
            }
            other => out.push(other.expand()),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qf};

    #[test]
    fn parses_and_prints_canonically() {
        let p = parse_poly("x1^2*x2 - x2 + 3/2").unwrap();
        assert_eq!(p.to_string(), "x1^2*x2 - x2 + 3/2");
        let p = parse_poly("3/2 - x2 + x2*x1^2").unwrap();
        assert_eq!(p.to_string(), "x1^2*x2 - x2 + 3/2");
    }

    #[test]
    fn parentheses_and_powers() {
        let p = parse_poly("(x1 - x2)^2").unwrap();
        assert_eq!(p.to_string(), "x1^2 - 2*x1*x2 + x2^2");
        let p = parse_poly("-(t1 - 1)*t1").unwrap();
        assert_eq!(p.to_string(), "-t1^2 + t1");
    }

    #[test]
    fn constants() {
        assert_eq!(parse_poly("0").unwrap(), SparsePoly::zero());
        assert_eq!(parse_poly("-7/3").unwrap(), SparsePoly::constant(qf(-7, 3)));
        assert_eq!(parse_poly("2*3").unwrap(), SparsePoly::constant(q(6)));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x", "x0", "1/0", "x1 +", "(x1", "x1 y2", "2/"] {
            assert!(parse_poly(s).is_err(), "{s}");
        }
    }

    #[test]
    fn product_structure() {
        let p = parse_product("-(x1 - x2)*(x2 - x3)^2").unwrap();
        assert_eq!(p.factors().len(), 3);
        assert_eq!(p.scalar(), &-Q::one());
    }
}
