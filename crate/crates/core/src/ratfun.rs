//! The rational function field `F(t)` over a finite field `F`, with fractions
//! kept in lowest terms and a monic denominator after every operation.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::ffield::FiniteField;
use crate::field::Field;
use crate::upoly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunctionField {
    base: FiniteField,
    var: String,
}

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly<FiniteField>,
    den: Poly<FiniteField>,
}

impl RatFun {
    pub fn num(&self) -> &Poly<FiniteField> {
        &self.num
    }

    pub fn den(&self) -> &Poly<FiniteField> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }
}

impl Hash for RatFun {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.coeffs().hash(state);
        self.den.coeffs().hash(state);
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num.to_string_in("t"), self.den.to_string_in("t"))
    }
}

impl RationalFunctionField {
    pub fn new(base: FiniteField) -> Self {
        Self::with_var(base, "t")
    }

    pub fn with_var(base: FiniteField, var: &str) -> Self {
        RationalFunctionField { base, var: var.to_string() }
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn t(&self) -> RatFun {
        self.from_poly(Poly::x(self.base.clone()))
    }

    pub fn from_poly(&self, num: Poly<FiniteField>) -> RatFun {
        RatFun { num, den: Poly::one(self.base.clone()) }
    }

    /// Reduce `num / den` to lowest terms with a monic denominator.
    pub fn fraction(&self, num: Poly<FiniteField>, den: Poly<FiniteField>) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(self.zero());
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let li = self.base.inv(den.leading().expect("nonzero"))?;
        Ok(RatFun { num: num.scale(&li), den: den.scale(&li) })
    }
}

impl fmt::Debug for RationalFunctionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalFunctionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.base, self.var)
    }
}

fn wrap(s: String) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

impl Field for RationalFunctionField {
    type Elem = RatFun;

    fn characteristic(&self) -> u32 {
        self.base.characteristic()
    }

    fn zero(&self) -> RatFun {
        self.from_poly(Poly::zero(self.base.clone()))
    }

    fn one(&self) -> RatFun {
        self.from_poly(Poly::one(self.base.clone()))
    }

    fn is_zero(&self, a: &RatFun) -> bool {
        a.num.is_zero()
    }

    fn is_one(&self, a: &RatFun) -> bool {
        a.num == a.den
    }

    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        if a.is_polynomial() && b.is_polynomial() {
            return self.from_poly(&a.num + &b.num);
        }
        let g = a.den.gcd(&b.den).expect("nonzero denominators");
        let bd = b.den.div_exact(&g).expect("gcd divides");
        let ad = a.den.div_exact(&g).expect("gcd divides");
        let num = &(&a.num * &bd) + &(&b.num * &ad);
        let den = &a.den * &bd;
        self.fraction(num, den).expect("nonzero denominator")
    }

    fn sub(&self, a: &RatFun, b: &RatFun) -> RatFun {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &RatFun) -> RatFun {
        RatFun { num: -&a.num, den: a.den.clone() }
    }

    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero();
        }
        if a.is_polynomial() && b.is_polynomial() {
            return self.from_poly(&a.num * &b.num);
        }
        // Cancel cross factors before multiplying so nothing grows needlessly.
        let g1 = a.num.gcd(&b.den).expect("nonzero");
        let g2 = b.num.gcd(&a.den).expect("nonzero");
        let an = a.num.div_exact(&g1).expect("gcd divides");
        let bd = b.den.div_exact(&g1).expect("gcd divides");
        let bn = b.num.div_exact(&g2).expect("gcd divides");
        let ad = a.den.div_exact(&g2).expect("gcd divides");
        RatFun { num: &an * &bn, den: &ad * &bd }
    }

    fn inv(&self, a: &RatFun) -> Result<RatFun> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        self.fraction(a.den.clone(), a.num.clone())
    }

    fn from_int(&self, k: i64) -> RatFun {
        self.from_poly(Poly::constant(self.base.clone(), self.base.from_int(k)))
    }

    fn contains_fq(&self, q: u64) -> bool {
        self.base.contains_fq(q)
    }

    fn cardinality(&self) -> Option<u128> {
        None
    }

    fn fraction_free(&self) -> bool {
        true
    }

    fn generator(&self, name: &str) -> Option<RatFun> {
        if name == self.var {
            return Some(self.t());
        }
        let c = self.base.generator(name)?;
        Some(self.from_poly(Poly::constant(self.base.clone(), c)))
    }

    fn format_elem(&self, a: &RatFun) -> String {
        let num = a.num.to_string_in(&self.var);
        if a.is_polynomial() {
            return num;
        }
        format!("{}/{}", wrap(num), wrap(a.den.to_string_in(&self.var)))
    }
}
