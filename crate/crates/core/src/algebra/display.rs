//! Text rendering of polynomials and module elements with named variables.
//!
//! The output is accepted back by the expression parser of the command-line
//! crate: terms appear in descending grevlex order, exponents as `x^k`,
//! coefficients as reduced rationals.

use alloc::string::String;
use core::fmt::{self, Write};

use super::monomial::{Monomial, MonomialOrder};
use super::poly::Polynomial;
use super::rational::Rational;

pub struct PolyDisplay<'a, S: AsRef<str>> {
    poly: &'a Polynomial,
    vars: &'a [S],
}

impl<'a, S: AsRef<str>> PolyDisplay<'a, S> {
    pub fn new(poly: &'a Polynomial, vars: &'a [S]) -> Self {
        assert_eq!(poly.nvars(), vars.len(), "variable name count mismatch");
        PolyDisplay { poly, vars }
    }
}

fn write_monomial<S: AsRef<str>>(out: &mut String, m: &Monomial, vars: &[S]) {
    let mut first = true;
    for (v, &e) in vars.iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(v.as_ref());
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

fn write_term<S: AsRef<str>>(out: &mut String, m: &Monomial, c: &Rational, vars: &[S]) {
    if m.is_one() {
        let _ = write!(out, "{}", c.abs());
        return;
    }
    let a = c.abs();
    if !a.is_one() {
        let _ = write!(out, "{a}*");
    }
    write_monomial(out, m, vars);
}

/// Sorted terms, highest first.
fn sorted_terms(p: &Polynomial) -> alloc::vec::Vec<(&Monomial, &Rational)> {
    let mut terms: alloc::vec::Vec<_> = p.terms().collect();
    terms.sort_by(|a, b| MonomialOrder::Grevlex.compare(b.0, a.0));
    terms
}

impl<S: AsRef<str>> fmt::Display for PolyDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in sorted_terms(self.poly).into_iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            write_term(&mut out, m, c, self.vars);
        }
        f.write_str(&out)
    }
}

/// Renders `p` with the given variable names.
pub fn poly_to_string<S: AsRef<str>>(p: &Polynomial, vars: &[S]) -> String {
    alloc::format!("{}", PolyDisplay::new(p, vars))
}

/// Renders a vector field given by its components as `f*d/dx + ...`.
pub fn field_to_string<S: AsRef<str>>(comps: &[Polynomial], vars: &[S]) -> String {
    let mut out = String::new();
    for (c, v) in comps.iter().zip(vars) {
        if c.is_zero() {
            continue;
        }
        let basis = alloc::format!("d/d{}", v.as_ref());
        let piece = if c.len() == 1 {
            let (m, k) = c.terms().next().expect("one term");
            let mut s = String::new();
            if k.is_negative() {
                s.push('-');
            }
            if m.is_one() {
                if !k.abs().is_one() {
                    let _ = write!(s, "{}*", k.abs());
                }
            } else {
                write_term(&mut s, m, k, vars);
                s.push('*');
            }
            s.push_str(&basis);
            s
        } else {
            alloc::format!("({})*{}", PolyDisplay::new(c, vars), basis)
        };
        if out.is_empty() {
            out = piece;
        } else if let Some(rest) = piece.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&piece);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
