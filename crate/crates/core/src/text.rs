//! Reading fields and polynomials from text.
//!
//! Fields: `GF(p)`, `GF(p^k)` or `GF(n)`, each optionally followed by explicit
//! extensions `[g]/(g^2 + g + 1)`, and optionally by `(t)` for the rational
//! function field over the result. This is the same form the field
//! descriptions print in.
//!
//! Polynomials: sums of products of integers, named constants of the field
//! and the variable, with `^`, parentheses, `*`, division by field constants
//! and implicit multiplication (`2x`, `t x`).

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::FiniteField;
use crate::field::Field;
use crate::linpoly::LinPoly;
use crate::ratfun::RationalFunctionField;
use crate::upoly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub enum AnyField {
    Finite(FiniteField),
    Rational(RationalFunctionField),
}

impl fmt::Display for AnyField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyField::Finite(k) => write!(f, "{k}"),
            AnyField::Rational(k) => write!(f, "{k}"),
        }
    }
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(s.len(), |x| x.0);
            let v = s[pos..end].parse::<u64>().map_err(|_| err(pos, "integer too large"))?;
            out.push((pos, Tok::Num(v)));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(s.len(), |x| x.0);
            out.push((pos, Tok::Name(s[pos..end].to_string())));
            i = j;
        } else if "+-*/^()[]".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(err(pos, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
    field: &'a F,
    var: &'a str,
}

const MAX_DEGREE: u64 = 1 << 24;

impl<'a, F: Field> Parser<'a, F> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<F>> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::Sym('(')))
    }

    fn term(&mut self) -> Result<Poly<F>> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.power()?;
                if d.degree() != Some(0) {
                    return Err(err(pos, "division is only by nonzero constants"));
                }
                let inv = self.field.inv(&d.coeffs()[0]).map_err(|_| err(pos, "division by zero"))?;
                acc = acc.scale(&inv);
            } else if self.starts_atom() {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly<F>> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let e = match self.peek() {
            Some(Tok::Num(e)) => *e,
            _ => return Err(err(pos, "expected an integer exponent")),
        };
        self.at += 1;
        let deg = base.degree().unwrap_or(0) as u64;
        if deg.saturating_mul(e) > MAX_DEGREE {
            return Err(err(pos, format!("degree exceeds {MAX_DEGREE}")));
        }
        // Single terms c*x^k are raised directly.
        if base.support().count() == 1 {
            let k = base.degree().unwrap();
            let c = self.field.pow(base.leading().unwrap(), e);
            return Ok(Poly::monomial(self.field.clone(), c, k * e as usize));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Poly<F>> {
        let pos = self.pos();
        let f = self.field;
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                let v = i64::try_from(v).map_err(|_| err(pos, "integer too large"))?;
                Ok(Poly::constant(f.clone(), f.from_int(v)))
            }
            Some(Tok::Name(name)) => {
                self.at += 1;
                if name == self.var {
                    return Ok(Poly::x(f.clone()));
                }
                f.generator(&name)
                    .map(|c| Poly::constant(f.clone(), c))
                    .ok_or_else(|| err(pos, format!("unknown name '{name}'")))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.pos(), "expected ')'"));
                }
                Ok(inner)
            }
            Some(t) => Err(err(pos, format!("unexpected {}", describe(&t)))),
            None => Err(err(pos, "unexpected end of input")),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Name(n) => format!("name '{n}'"),
        Tok::Sym(c) => format!("'{c}'"),
    }
}

/// Parse a polynomial in `var` over `field`.
pub fn parse_poly<F: Field>(field: &F, text: &str, var: &str) -> Result<Poly<F>> {
    let toks = lex(text)?;
    parse_poly_tokens(field, &toks, text.len(), var)
}

fn parse_poly_tokens<F: Field>(field: &F, toks: &[(usize, Tok)], end: usize, var: &str) -> Result<Poly<F>> {
    if toks.is_empty() {
        return Err(err(end, "empty polynomial"));
    }
    let mut p = Parser { toks, at: 0, end, field, var };
    let out = p.expr()?;
    if p.at != toks.len() {
        return Err(err(p.pos(), format!("unexpected {}", describe(&toks[p.at].1))));
    }
    Ok(out)
}

/// Parse a q-polynomial: an ordinary polynomial whose exponents are powers of `q`.
pub fn parse_lin<F: Field>(field: &F, text: &str, q: u64) -> Result<LinPoly<F>> {
    let f = parse_poly(field, text, "x")?;
    LinPoly::from_poly(&f, q)
}

/// Parse a field description.
pub fn parse_field(text: &str) -> Result<AnyField> {
    let toks = lex(text)?;
    let end = text.len();
    let mut at = 0;
    let expect = |at: &mut usize, t: Tok| -> Result<()> {
        match toks.get(*at) {
            Some((_, x)) if *x == t => {
                *at += 1;
                Ok(())
            }
            Some((pos, x)) => Err(err(*pos, format!("expected {}, found {}", describe(&t), describe(x)))),
            None => Err(err(end, format!("expected {}", describe(&t)))),
        }
    };
    match toks.first() {
        Some((_, Tok::Name(n))) if n == "GF" || n == "F" => at += 1,
        Some((pos, _)) => return Err(err(*pos, "a field starts with GF(")),
        None => return Err(err(0, "empty field description")),
    }
    expect(&mut at, Tok::Sym('('))?;
    let pos = toks.get(at).map_or(end, |t| t.0);
    let Some((_, Tok::Num(base))) = toks.get(at) else {
        return Err(err(pos, "expected the field order"));
    };
    at += 1;
    let mut order = *base;
    if toks.get(at).map(|t| &t.1) == Some(&Tok::Sym('^')) {
        at += 1;
        let Some((_, Tok::Num(k))) = toks.get(at) else {
            return Err(err(toks.get(at).map_or(end, |t| t.0), "expected an exponent"));
        };
        at += 1;
        order = base
            .checked_pow(u32::try_from(*k).map_err(|_| err(pos, "exponent too large"))?)
            .ok_or_else(|| err(pos, "field order too large"))?;
    }
    let mut field = FiniteField::gf(order).map_err(|e| err(pos, e.to_string()))?;
    expect(&mut at, Tok::Sym(')'))?;
    loop {
        match toks.get(at) {
            None => return Ok(AnyField::Finite(field)),
            Some((_, Tok::Sym('['))) => {
                at += 1;
                let gpos = toks.get(at).map_or(end, |t| t.0);
                let Some((_, Tok::Name(gen))) = toks.get(at) else {
                    return Err(err(gpos, "expected a generator name"));
                };
                let gen = gen.clone();
                at += 1;
                expect(&mut at, Tok::Sym(']'))?;
                expect(&mut at, Tok::Sym('/'))?;
                let open = toks.get(at).map_or(end, |t| t.0);
                expect(&mut at, Tok::Sym('('))?;
                let close = matching(&toks, at - 1).ok_or_else(|| err(open, "unbalanced '('"))?;
                let inner = &toks[at..close];
                let stop = toks[close].0;
                let modulus = parse_poly_tokens(&field, inner, stop, &gen)?;
                field = field.extension(&modulus, &gen).map_err(|e| err(open, e.to_string()))?;
                at = close + 1;
            }
            Some((_, Tok::Sym('('))) => {
                at += 1;
                let vpos = toks.get(at).map_or(end, |t| t.0);
                let Some((_, Tok::Name(var))) = toks.get(at) else {
                    return Err(err(vpos, "expected a variable name"));
                };
                if field.generator(var).is_some() {
                    return Err(err(vpos, format!("'{var}' already names a field generator")));
                }
                let var = var.clone();
                at += 1;
                expect(&mut at, Tok::Sym(')'))?;
                if let Some((pos, t)) = toks.get(at) {
                    return Err(err(*pos, format!("unexpected {} after the function field", describe(t))));
                }
                return Ok(AnyField::Rational(RationalFunctionField::with_var(field, &var)));
            }
            Some((pos, t)) => return Err(err(*pos, format!("unexpected {}", describe(t)))),
        }
    }
}

fn matching(toks: &[(usize, Tok)], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, (_, t)) in toks.iter().enumerate().skip(open) {
        match t {
            Tok::Sym('(') => depth += 1,
            Tok::Sym(')') => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn finite(text: &str) -> FiniteField {
        match parse_field(text).unwrap() {
            AnyField::Finite(f) => f,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fields() {
        assert_eq!(finite("GF(7)"), FiniteField::prime(7).unwrap());
        assert_eq!(finite("GF(9)"), FiniteField::gf(9).unwrap());
        assert_eq!(finite("GF(3^2)"), FiniteField::gf(9).unwrap());
        let tower = finite("GF(2)[g]/(g^2 + g + 1)[h]/(h^2 + h + g)");
        assert_eq!(tower.description(), "GF(2)[g]/(g^2 + g + 1)[h]/(h^2 + h + g)");
        assert_eq!(finite(tower.description()), tower);
        let f16 = FiniteField::gf(4).unwrap().extend_by_degree(2).unwrap();
        assert_eq!(finite(f16.description()), f16);
        match parse_field("GF(2)(t)").unwrap() {
            AnyField::Rational(k) => assert_eq!(k.to_string(), "GF(2)(t)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_errors() {
        for (text, pos) in [
            ("GF(6)", 3),
            ("GF(2)[g]/(g^2 + 1)", 9),
            ("GF(2", 4),
            ("Q", 0),
            ("GF(4)(g)", 6),
            ("GF(2) x", 6),
            ("GF(2)[g]/(g^2 + g + 1", 9),
        ] {
            match parse_field(text) {
                Err(Error::Parse { pos: p, .. }) => assert_eq!(p, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn polynomials() {
        let AnyField::Rational(k) = parse_field("GF(2)(t)").unwrap() else { unreachable!() };
        let f = parse_poly(&k, "x^24 + x + t", "x").unwrap();
        assert_eq!(f.to_string(), "x^24 + x + t");
        let g = parse_poly(&k, "x^4 + (t^2+1)*x^2 + t*x", "x").unwrap();
        assert_eq!(g.to_string(), "x^4 + (t^2 + 1)*x^2 + t*x");
        let h = parse_poly(&k, "(t^88 + t^65)*x^512 + t^9 x^16 + 1/t", "x").unwrap();
        assert_eq!(h.to_string(), "(t^88 + t^65)*x^512 + t^9*x^16 + 1/t");
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(parse_poly(&f5, "2x^2 - 3x + 7", "x").unwrap().to_string(), "2*x^2 + 2*x + 2");
        assert_eq!(parse_poly(&f5, "-(x+1)^2", "x").unwrap().to_string(), "4*x^2 + 3*x + 4");
        assert_eq!(parse_poly(&f5, "x/2", "x").unwrap().to_string(), "3*x");
        let f4 = FiniteField::gf(4).unwrap();
        assert_eq!(parse_poly(&f4, "g x^2 + (g+1)", "x").unwrap().to_string(), "g*x^2 + g + 1");
    }

    #[test]
    fn polynomial_errors() {
        let f5 = FiniteField::prime(5).unwrap();
        for (text, pos) in [("x^", 2), ("x + ", 4), ("x + y", 4), ("(x + 1", 6), ("x / x", 2), ("x $ 1", 2), ("x^2)", 3), ("1/0", 1)] {
            match parse_poly(&f5, text, "x") {
                Err(Error::Parse { pos: p, .. }) => assert_eq!(p, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse_lin(&f5, "x^6 + x", 5), Err(Error::NonQPowerExponent { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn printed_polynomials_parse_back(seed in any::<u64>(), deg in 0usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = FiniteField::gf(4).unwrap().extend_by_degree(2).unwrap();
            let f = Poly::new(k.clone(), (0..=deg).map(|_| k.random_elem(&mut rng)).collect());
            prop_assert_eq!(parse_poly(&k, &f.to_string(), "x").unwrap(), f.clone());
            let r = RationalFunctionField::new(FiniteField::prime(3).unwrap());
            let base = r.base().clone();
            let num = Poly::new(base.clone(), (0..3).map(|_| base.random_elem(&mut rng)).collect());
            let mut dc: Vec<_> = (0..2).map(|_| base.random_elem(&mut rng)).collect();
            dc.push(base.one());
            let c = r.fraction(num, Poly::new(base.clone(), dc)).unwrap();
            let g = Poly::new(r.clone(), vec![c.clone(), r.one(), c]);
            prop_assert_eq!(parse_poly(&r, &g.to_string(), "x").unwrap(), g);
        }
    }
}
