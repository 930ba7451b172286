//! Dense univariate polynomials over any [`Field`], plus irreducibility,
//! distinct-degree factorization and root finding over finite fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffield::{embed, factor, FfElem, FiniteField};
use crate::field::Field;

/// Coefficients constant term first, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: F) -> Self {
        let c = field.one();
        Poly { field, coeffs: vec![c] }
    }

    pub fn x(field: F) -> Self {
        Self::monomial(field.clone(), field.one(), 1)
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(field: F, c: F::Elem, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Indices of nonzero coefficients in increasing order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, _)| i)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.field.is_one(c))
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "{:?} vs {:?}",
                self.field, other.field
            )))
        }
    }

    fn assert_same(&self, other: &Self) {
        if let Err(e) = self.same_field(other) {
            panic!("{e}");
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Result<Self> {
        match self.leading() {
            None => Ok(self.clone()),
            Some(lc) => Ok(self.scale(&self.field.inv(lc)?)),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        self.same_field(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = self.field.poly_divrem(&self.coeffs, &b.coeffs)?;
        Ok((Self::new(self.field.clone(), q), Self::new(self.field.clone(), r)))
    }

    pub fn rem(&self, b: &Self) -> Result<Self> {
        self.same_field(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() < b.coeffs.len() {
            return Ok(self.clone());
        }
        let r = self.field.poly_rem(&self.coeffs, &b.coeffs)?;
        Ok(Self::new(self.field.clone(), r))
    }

    /// Exact quotient; errors when `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Result<Self> {
        let (q, r) = self.divrem(b)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument(format!("{b} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, b: &Self) -> Result<Self> {
        self.same_field(b)?;
        if self.is_zero() && b.is_zero() {
            return Err(Error::InvalidArgument("gcd(0, 0) is undefined".into()));
        }
        let mut x = self.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y)?;
            x = y;
            y = r;
        }
        x.monic()
    }

    /// `(g, s, t)` with `g = s*self + t*b` monic.
    pub fn xgcd(&self, b: &Self) -> Result<(Self, Self, Self)> {
        self.same_field(b)?;
        if self.is_zero() && b.is_zero() {
            return Err(Error::InvalidArgument("gcd(0, 0) is undefined".into()));
        }
        let f = self.field.clone();
        let (mut r0, mut r1) = (self.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(f.clone()), Self::zero(f.clone()));
        let (mut t0, mut t1) = (Self::zero(f.clone()), Self::one(f.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        let li = f.inv(r0.leading().expect("nonzero"))?;
        Ok((r0.scale(&li), s0.scale(&li), t0.scale(&li)))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
            .collect();
        Self::new(f.clone(), coeffs)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.assert_same(g);
        let mut acc = Self::zero(self.field.clone());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(self.field.clone(), c.clone());
        }
        acc
    }

    pub fn mul_mod(&self, b: &Self, m: &Self) -> Result<Self> {
        (self * b).rem(m)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_mod(&self, e: u64, m: &Self) -> Result<Self> {
        self.pow_mod_big(&BigUint::from(e), m)
    }

    /// `self^e mod m` by square-and-multiply, reducing after every step.
    pub fn pow_mod_big(&self, e: &BigUint, m: &Self) -> Result<Self> {
        let base = self.rem(m)?;
        let mut acc = Self::one(self.field.clone()).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m)?;
            if e.bit(i) {
                acc = acc.mul_mod(&base, m)?;
            }
        }
        Ok(acc)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.gcd(&self.derivative())?.degree() == Some(0))
    }

    /// Render with the given variable name, highest degree first.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{i}"),
                };
                format_term(&self.field, c, &mono)
            })
            .collect();
        terms.join(" + ")
    }
}

/// `c*mono` with the coefficient 1 omitted and compound coefficients
/// parenthesized; an empty `mono` gives the bare constant.
pub(crate) fn format_term<F: Field>(field: &F, c: &F::Elem, mono: &str) -> String {
    let coeff = field.format_elem(c);
    if mono.is_empty() {
        coeff
    } else if field.is_one(c) {
        mono.to_string()
    } else if field.is_compound(c) {
        format!("({coeff})*{mono}")
    } else {
        format!("{coeff}*{mono}")
    }
}

impl<F: Field + Eq> Eq for Poly<F> {}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field_name(), self)
    }
}

impl<F: Field> Poly<F> {
    fn field_name(&self) -> String {
        format!("{:?}", self.field)
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, b: &Poly<F>) -> Poly<F> {
        self.assert_same(b);
        let f = &self.field;
        let n = self.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), b.coeffs.get(i)) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(f.clone(), coeffs)
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, b: &Poly<F>) -> Poly<F> {
        self.assert_same(b);
        let f = &self.field;
        let n = self.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), b.coeffs.get(i)) {
                (Some(x), Some(y)) => f.sub(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => f.neg(y),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(f.clone(), coeffs)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|c| f.neg(c)).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, b: &Poly<F>) -> Poly<F> {
        self.assert_same(b);
        Poly::new(self.field.clone(), self.field.poly_mul(&self.coeffs, &b.coeffs))
    }
}

impl Poly<FiniteField> {
    /// Coefficients mapped into `dst` (tower inclusion or fixed embedding).
    pub fn embed_into(&self, dst: &FiniteField) -> Result<Poly<FiniteField>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| embed(c, &self.field, dst))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(dst.clone(), coeffs))
    }

    /// `self^(|F|^k) mod m` via repeated `|F|`-powering.
    fn frobenius_power_mod(&self, k: usize, m: &Self) -> Result<Self> {
        let order = self.field.order().clone();
        let mut h = self.rem(m)?;
        for _ in 0..k {
            h = h.pow_mod_big(&order, m)?;
        }
        Ok(h)
    }

    /// Rabin's test: `x^(Q^n) ≡ x (mod f)` and `gcd(x^(Q^(n/r)) - x, f) = 1`
    /// for every prime `r | n`, where `Q = |F|`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => {
                return Err(Error::InvalidArgument(
                    "irreducibility needs degree at least 1".into(),
                ))
            }
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic()?;
        let x = Poly::x(self.field.clone());
        let primes: Vec<usize> = factor(n as u128).into_iter().map(|(r, _)| r as usize).collect();
        for r in primes {
            let h = x.frobenius_power_mod(n / r, &f)?;
            if (&h - &x).gcd(&f)?.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(x.frobenius_power_mod(n, &f)? == x.rem(&f)?)
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, as
    /// `(degree, number of factors of that degree)`.
    pub fn ddf_degrees(&self) -> Result<Vec<(usize, usize)>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        }
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let g = self.gcd(&self.derivative())?;
        if g.degree() != Some(0) {
            return Err(Error::NotSquarefree { gcd: g.to_string() });
        }
        let order = self.field.order().clone();
        let x = Poly::x(self.field.clone());
        let mut rest = self.monic()?;
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut i = 0;
        while rest.degree().unwrap_or(0) >= 2 * (i + 1) {
            i += 1;
            h = h.pow_mod_big(&order, &rest)?;
            let g = (&h - &x).gcd(&rest)?;
            let dg = g.degree().unwrap_or(0);
            if dg > 0 {
                out.push((i, dg / i));
                rest = rest.div_exact(&g)?;
                h = h.rem(&rest)?;
            }
        }
        if let Some(d) = rest.degree().filter(|&d| d > 0) {
            out.push((d, 1));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Distinct roots lying in `e`, sorted in canonical element order.
    ///
    /// The coefficients are moved into `e` by [`embed`]. Roots are the
    /// linear factors of `gcd(f, x^|E| - x)`, split by seeded equal-degree
    /// factorization.
    pub fn roots_in(&self, e: &FiniteField, seed: u64) -> Result<Vec<FfElem>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("the zero polynomial has every element as a root".into()));
        }
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let f = self.monic()?;
        // x^|E| mod f has coefficients in the field of f, so it is computed
        // there and moved into E afterwards.
        let x = Poly::x(self.field.clone());
        let xe = x.pow_mod_big(e.order(), &f)?;
        let f_e = f.embed_into(e)?;
        let xe_e = xe.embed_into(e)?;
        let g = (&xe_e - &Poly::x(e.clone())).gcd(&f_e)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut linear = Vec::new();
        split_linear(&g, &mut rng, &mut linear)?;
        let mut roots: Vec<FfElem> = linear
            .iter()
            .map(|l| e.neg(&l.coeffs[0]))
            .collect();
        e.sort_canonical(&mut roots);
        Ok(roots)
    }
}

/// Equal-degree splitting of a monic product of distinct linear factors.
fn split_linear(
    g: &Poly<FiniteField>,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly<FiniteField>>,
) -> Result<()> {
    let e = g.field().clone();
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(g.monic()?);
            return Ok(());
        }
        _ => {}
    }
    loop {
        let delta = e.random_elem(rng);
        let w = splitting_candidate(g, &delta)?;
        let h = w.gcd(g).unwrap_or_else(|_| Poly::one(e.clone()));
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < g.degree().unwrap() {
            let rest = g.div_exact(&h)?;
            split_linear(&h, rng, out)?;
            split_linear(&rest, rng, out)?;
            return Ok(());
        }
    }
}

/// In odd characteristic `(x + δ)^((|E|-1)/2) - 1`; in characteristic 2 the
/// absolute trace `Σ (δx)^(2^i)`, both reduced modulo `g`.
fn splitting_candidate(g: &Poly<FiniteField>, delta: &FfElem) -> Result<Poly<FiniteField>> {
    let e = g.field().clone();
    let x = Poly::x(e.clone());
    if e.p() == 2 {
        let mut term = x.scale(delta).rem(g)?;
        let mut acc = term.clone();
        for _ in 1..e.degree() {
            term = term.mul_mod(&term, g)?;
            acc = &acc + &term;
        }
        Ok(acc)
    } else {
        let base = &x + &Poly::constant(e.clone(), delta.clone());
        let exp = (e.order() - 1u32) / 2u32;
        let w = base.pow_mod_big(&exp, g)?;
        Ok(&w - &Poly::one(e))
    }
}
