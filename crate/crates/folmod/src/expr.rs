//! Polynomial and vector-field expressions over a chart's variables.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)?
//! atom    := INT | IDENT | 'd/d' IDENT | '(' expr ')'
//! ```
//!
//! `/` divides by a nonzero constant only, so `-2/5` is a rational literal.
//! `d/dx` is the coordinate field of `x`; products of polynomials with basis
//! symbols and sums of those are vector fields. The identifier `d` followed
//! by `/d` always starts a basis symbol.

use folmod_core::algebra::{Polynomial, Rational};
use folmod_core::geometry::Chart;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {kind}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("unknown basis symbol d/d{0}")]
    UnknownBasis(String),
    #[error("{0}")]
    Type(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Basis(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().enumerate().collect(), pos: 0, src }
    }

    fn peek_char(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).map(|&(_, c)| c)
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek_char(0).filter(|&c| is_ident(c)) {
            s.push(c);
            self.pos += 1;
        }
        s
    }

    /// Next token and its 1-based column.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        while self.peek_char(0).is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        let col = self.pos + 1;
        let Some(c) = self.peek_char(0) else {
            return Ok((Tok::End, col));
        };
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(d) = self.peek_char(0).filter(char::is_ascii_digit) {
                s.push(d);
                self.pos += 1;
            }
            return Ok((Tok::Num(s), col));
        }
        if is_ident_start(c) {
            if c == 'd' && self.peek_char(1) == Some('/') && self.peek_char(2) == Some('d') && self.peek_char(3).is_some_and(is_ident_start) {
                self.pos += 3;
                return Ok((Tok::Basis(self.ident()), col));
            }
            return Ok((Tok::Ident(self.ident()), col));
        }
        if "+-*/^()".contains(c) {
            self.pos += 1;
            return Ok((Tok::Op(c), col));
        }
        Err(ParseError { column: col, kind: ParseErrorKind::Syntax(format!("unexpected character {c:?} in {:?}", self.src)) })
    }
}

/// A parsed value: a polynomial or a vector field given by components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Poly(Polynomial),
    Field(Vec<Polynomial>),
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    col: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: &'a [String]) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (tok, col) = lexer.next()?;
        Ok(Parser { lexer, tok, col, vars })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, col) = self.lexer.next()?;
        self.tok = tok;
        self.col = col;
        Ok(())
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { column: self.col, kind }
    }

    fn syntax(&self, msg: &str) -> ParseError {
        self.err(ParseErrorKind::Syntax(msg.to_string()))
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        while let Tok::Op(op @ ('+' | '-')) = self.tok {
            let col = self.col;
            self.bump()?;
            let rhs = self.term()?;
            acc = add(acc, if op == '-' { neg(rhs) } else { rhs }).map_err(|kind| ParseError { column: col, kind })?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        while let Tok::Op(op @ ('*' | '/')) = self.tok {
            let col = self.col;
            self.bump()?;
            let rhs = self.unary()?;
            let at = |kind| ParseError { column: col, kind };
            acc = if op == '*' {
                mul(acc, rhs).map_err(at)?
            } else {
                let c = match &rhs {
                    Value::Poly(p) if p.is_constant() && !p.is_zero() => p.constant_term(),
                    _ => return Err(at(ParseErrorKind::Type("division by a nonzero constant only"))),
                };
                let inv = Polynomial::constant(self.n(), c.recip().expect("nonzero"));
                mul(acc, Value::Poly(inv)).map_err(at)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let base = self.atom()?;
        if self.tok != Tok::Op('^') {
            return Ok(base);
        }
        self.bump()?;
        let Tok::Num(e) = &self.tok else {
            return Err(self.syntax("exponent must be a nonnegative integer"));
        };
        let e: u32 = e.parse().map_err(|_| self.syntax("exponent too large"))?;
        let col = self.col;
        self.bump()?;
        match base {
            Value::Poly(p) => Ok(Value::Poly(p.pow(e))),
            Value::Field(_) => Err(ParseError { column: col, kind: ParseErrorKind::Type("cannot raise a vector field to a power") }),
        }
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let n = self.n();
        let v = match &self.tok {
            Tok::Num(k) => Value::Poly(Polynomial::constant(n, k.parse::<Rational>().expect("digits parse"))),
            Tok::Ident(name) => match self.vars.iter().position(|v| v == name) {
                Some(i) => Value::Poly(Polynomial::var(n, i)),
                None => return Err(self.err(ParseErrorKind::UnknownVariable(name.clone()))),
            },
            Tok::Basis(name) => match self.vars.iter().position(|v| v == name) {
                Some(i) => {
                    let mut comps = vec![Polynomial::zero(n); n];
                    comps[i] = Polynomial::one(n);
                    Value::Field(comps)
                }
                None => return Err(self.err(ParseErrorKind::UnknownBasis(name.clone()))),
            },
            Tok::Op('(') => {
                self.bump()?;
                let inner = self.expr()?;
                if self.tok != Tok::Op(')') {
                    return Err(self.syntax("expected )"));
                }
                inner
            }
            Tok::End => return Err(self.syntax("unexpected end of expression")),
            Tok::Op(c) => return Err(self.syntax(&format!("unexpected {c}"))),
        };
        self.bump()?;
        Ok(v)
    }
}

fn neg(v: Value) -> Value {
    match v {
        Value::Poly(p) => Value::Poly(-p),
        Value::Field(c) => Value::Field(c.into_iter().map(|p| -p).collect()),
    }
}

fn add(a: Value, b: Value) -> Result<Value, ParseErrorKind> {
    match (a, b) {
        (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p + &q)),
        (Value::Field(x), Value::Field(y)) => Ok(Value::Field(x.iter().zip(&y).map(|(p, q)| p + q).collect())),
        // a literal zero is both
        (Value::Poly(p), f @ Value::Field(_)) | (f @ Value::Field(_), Value::Poly(p)) if p.is_zero() => Ok(f),
        _ => Err(ParseErrorKind::Type("cannot add a polynomial to a vector field")),
    }
}

fn mul(a: Value, b: Value) -> Result<Value, ParseErrorKind> {
    match (a, b) {
        (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p * &q)),
        (Value::Poly(p), Value::Field(x)) | (Value::Field(x), Value::Poly(p)) => Ok(Value::Field(x.iter().map(|c| &p * c).collect())),
        _ => Err(ParseErrorKind::Type("cannot multiply two vector fields")),
    }
}

pub fn parse_value(text: &str, vars: &[String]) -> Result<Value, ParseError> {
    let mut p = Parser::new(text, vars)?;
    let v = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.syntax("trailing input"));
    }
    Ok(v)
}

pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    match parse_value(text, vars)? {
        Value::Poly(p) => Ok(p),
        Value::Field(_) => Err(ParseError { column: 1, kind: ParseErrorKind::Type("expected a polynomial, found a vector field") }),
    }
}

/// Components of a vector field; a polynomial `0` is the zero field.
pub fn parse_field(text: &str, vars: &[String]) -> Result<Vec<Polynomial>, ParseError> {
    match parse_value(text, vars)? {
        Value::Field(c) => Ok(c),
        Value::Poly(p) if p.is_zero() => Ok(vec![Polynomial::zero(vars.len()); vars.len()]),
        Value::Poly(_) => Err(ParseError { column: 1, kind: ParseErrorKind::Type("expected a vector field, found a polynomial") }),
    }
}

/// Convenience for a declared chart.
pub fn parse_expression(text: &str, chart: &Chart) -> Result<Value, ParseError> {
    parse_value(text, chart.vars())
}

#[cfg(test)]
mod tests {
    use super::*;
    use folmod_core::algebra::display::{field_to_string, poly_to_string};
    use proptest::prelude::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn rotation_field() {
        let v = parse_field("-y*d/dx + x*d/dy", &xy()).unwrap();
        assert_eq!(v, vec![-Polynomial::var(2, 1), Polynomial::var(2, 0)]);
    }

    #[test]
    fn precedence_and_literals() {
        let vars = xy();
        let p = parse_polynomial("1 + 2*x^2 - -2/5*y", &vars).unwrap();
        assert_eq!(poly_to_string(&p, &vars), "2*x^2 + 2/5*y + 1");
        let q = parse_polynomial("(x + y)^2", &vars).unwrap();
        assert_eq!(poly_to_string(&q, &vars), "x^2 + 2*x*y + y^2");
        assert_eq!(parse_polynomial("-x^2", &vars).unwrap(), -Polynomial::var(2, 0).pow(2));
        assert_eq!(parse_polynomial("2^3", &vars).unwrap(), Polynomial::constant(2, Rational::from_integer(8)));
    }

    #[test]
    fn xk_generator() {
        let vars = vec!["x".to_string()];
        assert_eq!(parse_field("x^2*d/dx", &vars).unwrap(), vec![Polynomial::var(1, 0).pow(2)]);
        assert_eq!(parse_field("d/dx*x^2", &vars).unwrap(), vec![Polynomial::var(1, 0).pow(2)]);
    }

    #[test]
    fn errors() {
        let vars = xy();
        let e = parse_field("d/dz", &vars).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownBasis("z".into()));
        assert_eq!(e.column, 1);
        let e = parse_polynomial("x + q", &vars).unwrap_err();
        assert_eq!((e.column, e.kind), (5, ParseErrorKind::UnknownVariable("q".into())));
        assert!(matches!(parse_polynomial("x +", &vars).unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(parse_polynomial("x / y", &vars).unwrap_err().kind, ParseErrorKind::Type(_)));
        assert!(matches!(parse_field("d/dx * d/dy", &vars).unwrap_err().kind, ParseErrorKind::Type(_)));
        assert!(matches!(parse_field("x + d/dx", &vars).unwrap_err().kind, ParseErrorKind::Type(_)));
        assert!(matches!(parse_polynomial("x)", &vars).unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(parse_polynomial("x # y", &vars).unwrap_err().kind, ParseErrorKind::Syntax(_)));
    }

    fn poly_strategy() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-5i64..=5, 1i64..=4, 0u32..3, 0u32..3), 0..5).prop_map(|terms| {
            terms.into_iter().fold(Polynomial::zero(2), |acc, (n, d, a, b)| {
                let t = &Polynomial::var(2, 0).pow(a) * &Polynomial::var(2, 1).pow(b);
                &acc + &t.scale(&Rational::new(n, d))
            })
        })
    }

    proptest! {
        #[test]
        fn polynomial_round_trip(p in poly_strategy()) {
            let vars = xy();
            let text = poly_to_string(&p, &vars);
            prop_assert_eq!(parse_polynomial(&text, &vars).unwrap(), p);
        }

        #[test]
        fn field_round_trip(a in poly_strategy(), b in poly_strategy()) {
            let vars = xy();
            let comps = vec![a, b];
            let text = field_to_string(&comps, &vars);
            prop_assert_eq!(parse_field(&text, &vars).unwrap(), comps);
        }
    }
}
