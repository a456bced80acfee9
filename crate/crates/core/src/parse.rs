//! Recursive-descent parser for the polynomial expression grammar.
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := base ("^" uint)?
//! base   := var | "i" | number | "(" expr ")"
//!         | "Re(" expr ")" | "Im(" expr ")" | "abs2(" expr ")" | "conj(" expr ")"
//! var    := "z" uint | "zb" uint
//! number := digits ["." digits] [("e"|"E") ["+"|"-"] digits] | digits "/" digits
//! ```
//!
//! Whitespace is insignificant. Numbers are read exactly into rationals
//! (decimal and e-notation forms included), so parsing never rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, RealPoly};
use crate::scalar::ComplexScalar;

/// Largest accepted `^` exponent; guards against accidental blowup.
const MAX_EXPONENT: u32 = 4096;

pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(poly)
}

/// Parses and checks Hermitian symmetry (real-valuedness).
pub fn parse_real_poly(text: &str, nvars: usize) -> Result<RealPoly> {
    let poly = parse_poly(text, nvars)?;
    RealPoly::new(poly)
}

/// Parses one exact rational from a constant expression ("3/4", "-0.25", "1e-3").
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let p = parse_poly(text, 1)?;
    if p.total_degree().unwrap_or(0) > 0 {
        return Err(Error::parse(0, "expected a number, found variables"));
    }
    let c = p.coeff(&crate::poly::Multidegree::zero(1));
    if !c.im.is_zero() {
        return Err(Error::parse(0, "expected a real number"));
    }
    Ok(c.re)
}

/// Parses a point "re,im;re,im;..." with exact rational components.
pub fn parse_point(text: &str, n: usize) -> Result<Vec<ComplexScalar>> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != n {
        return Err(Error::parse(
            0,
            format!("point has {} components, expected {n}", parts.len()),
        ));
    }
    let mut out = Vec::with_capacity(n);
    for part in parts {
        let mut halves = part.split(',');
        let re = halves.next().unwrap_or("");
        let im = halves.next().unwrap_or("0");
        if halves.next().is_some() {
            return Err(Error::parse(0, "component must be \"re,im\""));
        }
        out.push(ComplexScalar::new(parse_rational(re)?, parse_rational(im)?));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
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

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", b as char)))
        }
    }

    fn starts_with(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(s.as_bytes())
    }

    fn expr(&mut self) -> Result<Poly> {
        let negated = self.eat(b'-');
        let mut acc = self.term()?;
        if negated {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        if self.peek() == Some(b'-') {
            return Err(Error::parse(self.pos, "negative exponent not allowed"));
        }
        let e = self.uint()?;
        if e > MAX_EXPONENT {
            return Err(Error::parse(
                self.pos,
                format!("exponent {e} exceeds limit {MAX_EXPONENT}"),
            ));
        }
        base.pow(e)
    }

    fn base(&mut self) -> Result<Poly> {
        let Some(c) = self.peek() else {
            return Err(Error::parse(self.pos, "unexpected end of input"));
        };
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')')?;
            return Ok(inner);
        }
        for (name, kind) in [
            ("Re(", Func::Re),
            ("Im(", Func::Im),
            ("abs2(", Func::Abs2),
            ("conj(", Func::Conj),
        ] {
            if self.starts_with(name) {
                self.pos += name.len();
                let inner = self.expr()?;
                self.expect(b')')?;
                return Ok(apply_func(kind, &inner));
            }
        }
        if c == b'z' {
            return self.variable();
        }
        if c == b'i' {
            self.pos += 1;
            return Ok(Poly::constant(self.nvars, ComplexScalar::i()));
        }
        if c.is_ascii_digit() {
            let r = self.number()?;
            return Ok(Poly::constant(self.nvars, ComplexScalar::from_rational(r)));
        }
        Err(Error::parse(
            self.pos,
            format!("unexpected character '{}'", c as char),
        ))
    }

    fn variable(&mut self) -> Result<Poly> {
        let start = self.pos;
        self.pos += 1; // consume 'z'
        let barred = self.src.get(self.pos) == Some(&b'b');
        if barred {
            self.pos += 1;
        }
        if !self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            return Err(Error::parse(start, "variable needs an index, e.g. z1 or zb2"));
        }
        let index = self.uint()? as usize;
        if index == 0 || index > self.nvars {
            return Err(Error::VariableRange {
                index,
                n: self.nvars,
            });
        }
        Poly::var_pow(self.nvars, index, 1, barred)
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse::<u32>()
            .map_err(|_| Error::parse(start, "integer too large"))
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        Ok(BigInt::parse_bytes(&self.src[start..self.pos], 10).expect("ascii digits"))
    }

    /// Exact rational from `p/q`, decimal, or e-notation forms.
    fn number(&mut self) -> Result<BigRational> {
        let int_part = self.digits()?;
        // rational p/q
        if self.src.get(self.pos) == Some(&b'/') {
            let slash = self.pos;
            self.pos += 1;
            let denom = self.digits()?;
            if denom.is_zero() {
                return Err(Error::parse(slash, "zero denominator"));
            }
            return Ok(BigRational::new(int_part, denom));
        }
        let mut numer = int_part;
        let mut denom = BigInt::one();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let start = self.pos;
            let frac = self.digits()?;
            let places = self.pos - start;
            let scale = BigInt::from(10u32).pow(places as u32);
            numer = numer * &scale + frac;
            denom = scale;
        }
        if matches!(self.src.get(self.pos), Some(&b'e') | Some(&b'E')) {
            self.pos += 1;
            let neg = match self.src.get(self.pos) {
                Some(&b'-') => {
                    self.pos += 1;
                    true
                }
                Some(&b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let e = self.uint()?;
            let scale = BigInt::from(10u32).pow(e);
            if neg {
                denom *= scale;
            } else {
                numer *= scale;
            }
        }
        Ok(BigRational::new(numer, denom))
    }
}

#[derive(Clone, Copy)]
enum Func {
    Re,
    Im,
    Abs2,
    Conj,
}

fn apply_func(kind: Func, e: &Poly) -> Poly {
    match kind {
        Func::Conj => e.conjugate(),
        Func::Abs2 => e.mul(&e.conjugate()).expect("same nvars"),
        Func::Re => e.real_projection(),
        Func::Im => {
            // Im e = (e - conj e) · (-i/2)
            let diff = e.sub(&e.conjugate()).expect("same nvars");
            let half_neg_i = ComplexScalar::new(
                BigRational::zero(),
                -BigRational::new(BigInt::one(), BigInt::from(2)),
            );
            diff.scale(&half_neg_i)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Multidegree;
    use num_complex::Complex64;

    fn coeff(p: &Poly, holo: &[u32], anti: &[u32]) -> ComplexScalar {
        p.coeff(&Multidegree {
            holo: holo.to_vec(),
            anti: anti.to_vec(),
        })
    }

    #[test]
    fn spec_expansion_example() {
        let p = parse_poly("Re(z3) + abs2(z1)^2 + abs2(z2)", 3).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(coeff(&p, &[0, 0, 1], &[0, 0, 0]), ComplexScalar::from_ratio(1, 2));
        assert_eq!(coeff(&p, &[0, 0, 0], &[0, 0, 1]), ComplexScalar::from_ratio(1, 2));
        assert_eq!(coeff(&p, &[2, 0, 0], &[2, 0, 0]), ComplexScalar::one());
        assert_eq!(coeff(&p, &[0, 1, 0], &[0, 1, 0]), ComplexScalar::one());
    }

    #[test]
    fn imaginary_combination_is_hermitian() {
        let p = parse_poly("i*z1 - i*zb1", 1).unwrap();
        assert_eq!(coeff(&p, &[1], &[0]), ComplexScalar::i());
        assert_eq!(coeff(&p, &[0], &[1]), -&ComplexScalar::i());
        assert!(p.is_hermitian());
        // equals −2·Im(z1)
        let im = parse_poly("Im(z1)", 1).unwrap();
        assert_eq!(p, im.scale(&ComplexScalar::from_int(-2)));
    }

    #[test]
    fn abs2_times_re() {
        let p = parse_poly("abs2(z1)*Re(z1)", 1).unwrap();
        assert_eq!(coeff(&p, &[2], &[1]), ComplexScalar::from_ratio(1, 2));
        assert_eq!(coeff(&p, &[1], &[2]), ComplexScalar::from_ratio(1, 2));
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn numbers_exact() {
        let p = parse_poly("0.5*z1 + 3/4*zb1 + 2.5e2 + 1e-3*z1^2", 1).unwrap();
        assert_eq!(coeff(&p, &[1], &[0]), ComplexScalar::from_ratio(1, 2));
        assert_eq!(coeff(&p, &[0], &[1]), ComplexScalar::from_ratio(3, 4));
        assert_eq!(coeff(&p, &[0], &[0]), ComplexScalar::from_int(250));
        assert_eq!(coeff(&p, &[2], &[0]), ComplexScalar::from_ratio(1, 1000));
    }

    #[test]
    fn unary_minus_and_parens() {
        let p = parse_poly("-z1 + (-1/2 + 3/4*i)*zb1", 1).unwrap();
        assert_eq!(coeff(&p, &[1], &[0]), ComplexScalar::from_int(-1));
        assert_eq!(
            coeff(&p, &[0], &[1]),
            ComplexScalar::new(
                BigRational::new(BigInt::from(-1), BigInt::from(2)),
                BigRational::new(BigInt::from(3), BigInt::from(4))
            )
        );
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_poly("z1 + ", 1).unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 5, .. }), "{e}");
        let e = parse_poly("z1^-2", 1).unwrap_err();
        assert!(e.to_string().contains("negative exponent"), "{e}");
        let e = parse_poly("z4", 3).unwrap_err();
        assert!(matches!(e, Error::VariableRange { index: 4, n: 3 }), "{e}");
        let e = parse_poly("z0", 3).unwrap_err();
        assert!(matches!(e, Error::VariableRange { index: 0, .. }), "{e}");
        let e = parse_poly("z1 @ z2", 2).unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 3, .. }), "{e}");
        let e = parse_poly("2*@", 1).unwrap_err();
        assert!(e.to_string().contains("'@'"), "{e}");
        let e = parse_poly("1/0", 1).unwrap_err();
        assert!(e.to_string().contains("zero denominator"), "{e}");
    }

    #[test]
    fn real_poly_gate() {
        assert!(parse_real_poly("abs2(z1) + Re(z1^3)", 1).is_ok());
        assert!(parse_real_poly("z1", 1).is_err());
    }

    #[test]
    fn display_round_trips() {
        let sources = [
            ("abs2(z1)^2 + abs2(z2) + Re(z3)", 3),
            ("i*z1 - i*zb1", 1),
            ("-z1 + (-1/2 + 3/4*i)*zb1 + 7/8", 1),
            ("abs2(z1)*Re(z1) + Im(z1^2)*3/4", 1),
        ];
        for (src, n) in sources {
            let p = parse_poly(src, n).unwrap();
            let rendered = p.to_string();
            let q = parse_poly(&rendered, n)
                .unwrap_or_else(|e| panic!("re-parse of {rendered:?} failed: {e}"));
            assert_eq!(p, q, "round trip through {rendered:?}");
        }
    }

    #[test]
    fn evaluation_matches_semantics() {
        let p = parse_poly("abs2(z1) + Im(z2)", 2).unwrap();
        let v = p.evaluate(&[Complex64::new(3.0, 4.0), Complex64::new(0.0, -2.0)]);
        assert!((v.re - 23.0).abs() < 1e-12 && v.im.abs() < 1e-12, "{v}");
    }
}
