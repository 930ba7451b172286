//! q-polynomials `L = a_0 x + a_1 x^q + … + a_n x^(q^n)` stored by their
//! q-power coefficient vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{log_p, FfElem, FiniteField};
use crate::field::Field;
use crate::upoly::{format_term, Poly};

#[derive(Clone, PartialEq)]
pub struct LinPoly<F: Field> {
    field: F,
    q: u64,
    coeffs: Vec<F::Elem>,
}

/// `q^i` as a usize, or an error if it does not fit.
pub(crate) fn q_pow(q: u64, i: usize) -> Result<usize> {
    u32::try_from(i)
        .ok()
        .and_then(|i| q.checked_pow(i))
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| Error::CapExceeded {
            what: "q^n".into(),
            value: format!("{q}^{i}"),
            cap: usize::MAX as u64,
        })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl<F: Field> LinPoly<F> {
    /// `Σ coeffs[i] x^(q^i)`; trailing zero coefficients are dropped.
    pub fn new(field: F, q: u64, mut coeffs: Vec<F::Elem>) -> Result<Self> {
        if log_p(q, field.characteristic()).is_none() {
            return Err(Error::NotPowerOfCharacteristic { q, p: field.characteristic() });
        }
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("the zero q-polynomial has no q-degree".into()));
        }
        Ok(LinPoly { field, q, coeffs })
    }

    /// Read an ordinary polynomial whose exponents are all powers of `q`.
    pub fn from_poly(f: &Poly<F>, q: u64) -> Result<Self> {
        let field = f.field().clone();
        if log_p(q, field.characteristic()).is_none() {
            return Err(Error::NotPowerOfCharacteristic { q, p: field.characteristic() });
        }
        let mut coeffs: Vec<F::Elem> = Vec::new();
        for e in f.support() {
            let i = power_index(e as u64, q).ok_or(Error::NonQPowerExponent { exponent: e, q })?;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, field.zero());
            }
            coeffs[i] = f.coeffs()[e].clone();
        }
        Self::new(field, q, coeffs)
    }

    /// The ordinary polynomial `Σ a_i x^(q^i)`.
    pub fn to_poly(&self) -> Result<Poly<F>> {
        let deg = q_pow(self.q, self.q_degree())?;
        let mut dense = vec![self.field.zero(); deg + 1];
        let mut e = 1usize;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                e *= self.q as usize;
            }
            dense[e] = a.clone();
        }
        Ok(Poly::new(self.field.clone(), dense))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn q_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &F::Elem {
        self.coeffs.last().expect("nonzero")
    }

    pub fn is_monic(&self) -> bool {
        self.field.is_one(self.leading())
    }

    pub fn monic(&self) -> Result<Self> {
        let li = self.field.inv(self.leading())?;
        let f = &self.field;
        Self::new(f.clone(), self.q, self.coeffs.iter().map(|a| f.mul(a, &li)).collect())
    }

    /// `L(x)`, with the powers `x^(q^i)` obtained by repeated `q`-powering.
    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        let mut xi = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xi = f.pow(&xi, self.q);
            }
            if !f.is_zero(a) {
                acc = f.add(&acc, &f.mul(a, &xi));
            }
        }
        acc
    }

    /// The composition `self(other(x))`: `c_k = Σ_{i+j=k} a_i b_j^(q^i)`.
    pub fn skew_compose(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::InvalidArgument(format!(
                "composing a {}-polynomial with a {}-polynomial",
                self.q, other.q
            )));
        }
        if self.field != other.field {
            return Err(Error::ContextMismatch(format!("{:?} vs {:?}", self.field, other.field)));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        let mut twisted: Vec<F::Elem> = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|b| f.pow(b, self.q)).collect();
            }
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f.clone(), self.q, out)
    }

    /// The conventional q-associate `a_n x^n + … + a_1 x + a_0`.
    pub fn q_associate(&self) -> Poly<F> {
        Poly::new(self.field.clone(), self.coeffs.clone())
    }

    pub fn from_q_associate(l: &Poly<F>, q: u64) -> Result<Self> {
        Self::new(l.field().clone(), q, l.coeffs().to_vec())
    }

    /// Largest `s` such that only indices divisible by `s` carry nonzero
    /// coefficients (index 0 excluded), i.e. `L` is a `q^s`-polynomial.
    pub fn detect_qs(&self) -> Result<usize> {
        if self.q_degree() == 0 {
            return Err(Error::InvalidArgument("q-degree 0".into()));
        }
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, a)| !self.field.is_zero(a))
            .fold(0, |g, (i, _)| gcd(g, i)))
    }

    /// For `L` with top term `x^(q^n)`, the distance `k` from `n` down to the
    /// next nonzero coefficient; `None` when `L` is a single term.
    pub fn gap_index(&self) -> Option<usize> {
        let n = self.q_degree();
        (0..n)
            .rev()
            .find(|&i| !self.field.is_zero(&self.coeffs[i]))
            .map(|i| n - i)
    }

    /// `P` with `P(x^r) = L(x)/x`, for `r | q - 1`.
    pub fn projective_extract(&self, r: u64) -> Result<Poly<F>> {
        if r == 0 || !(self.q - 1).is_multiple_of(r) {
            return Err(Error::InvalidArgument(format!("r = {r} does not divide q - 1 = {}", self.q - 1)));
        }
        let top = (q_pow(self.q, self.q_degree())? - 1) / r as usize;
        let mut dense = vec![self.field.zero(); top + 1];
        let mut qi = 1usize;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                qi *= self.q as usize;
            }
            let e = qi - 1;
            if !e.is_multiple_of(r as usize) {
                return Err(Error::InvalidArgument(format!("exponent {e} is not a multiple of {r}")));
            }
            dense[e / r as usize] = a.clone();
        }
        Ok(Poly::new(self.field.clone(), dense))
    }

    pub fn to_string_in(&self, var: &str) -> String {
        let mut terms = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let a = &self.coeffs[i];
            if self.field.is_zero(a) {
                continue;
            }
            let mono = match q_pow(self.q, i) {
                Ok(1) => var.to_string(),
                Ok(e) => format!("{var}^{e}"),
                Err(_) => format!("{var}^({}^{i})", self.q),
            };
            terms.push(format_term(&self.field, a, &mono));
        }
        terms.join(" + ")
    }
}

/// `Some(i)` when `e = q^i`.
fn power_index(e: u64, q: u64) -> Option<usize> {
    let mut v = 1u64;
    let mut i = 0;
    while v < e {
        v = v.checked_mul(q)?;
        i += 1;
    }
    (v == e).then_some(i)
}

impl<F: Field> fmt::Display for LinPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl<F: Field> fmt::Debug for LinPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinPoly[q={}, {:?}]({})", self.q, self.field, self)
    }
}

/// Monic q-polynomial vanishing exactly on the `F_q`-span of `basis`.
///
/// Computed as the bordered Moore determinant, expanded along the row
/// `(x, x^q, …, x^(q^n))`, then made monic. The leading coefficient is the
/// Moore determinant of the basis itself, which vanishes exactly when the
/// basis is `F_q`-dependent.
pub fn moore_vanishing(field: &FiniteField, basis: &[FfElem], q: u64) -> Result<LinPoly<FiniteField>> {
    if log_p(q, field.p()).is_none() {
        return Err(Error::NotPowerOfCharacteristic { q, p: field.p() });
    }
    if !field.contains_fq(q) {
        return Err(Error::MissingSubfield { q });
    }
    let n = basis.len();
    // rows[i][j] = basis[i]^(q^j), j = 0..=n
    let rows: Vec<Vec<FfElem>> = basis
        .iter()
        .map(|a| {
            let mut row = Vec::with_capacity(n + 1);
            let mut x = a.clone();
            for j in 0..=n {
                if j > 0 {
                    x = field.pow(&x, q);
                }
                row.push(x.clone());
            }
            row
        })
        .collect();
    let mut coeffs = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let minor: Vec<Vec<FfElem>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let det = crate::linalg::Matrix::from_rows(field.clone(), minor)
            .and_then(|m| if n == 0 { Ok(field.one()) } else { m.det() })?;
        coeffs.push(if (n + j).is_multiple_of(2) { det } else { field.neg(&det) });
    }
    if field.is_zero(&coeffs[n]) {
        return Err(Error::Dependent);
    }
    LinPoly::new(field.clone(), q, coeffs)?.monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> FiniteField {
        FiniteField::prime(p).unwrap()
    }

    fn lin(f: &FiniteField, q: u64, c: &[i64]) -> LinPoly<FiniteField> {
        LinPoly::new(f.clone(), q, c.iter().map(|&k| f.from_int(k)).collect()).unwrap()
    }

    fn poly(f: &FiniteField, terms: &[(usize, i64)]) -> Poly<FiniteField> {
        let deg = terms.iter().map(|t| t.0).max().unwrap();
        let mut c = vec![f.zero(); deg + 1];
        for &(e, k) in terms {
            c[e] = f.from_int(k);
        }
        Poly::new(f.clone(), c)
    }

    #[test]
    fn encode_examples() {
        let f2 = fp(2);
        let l = LinPoly::from_poly(&poly(&f2, &[(4, 1), (2, 1), (1, 1)]), 2).unwrap();
        assert_eq!(l, lin(&f2, 2, &[1, 1, 1]));
        let l4 = LinPoly::from_poly(&poly(&f2, &[(4, 1), (1, 1)]), 4).unwrap();
        assert_eq!(l4, lin(&f2, 4, &[1, 1]));
        assert_eq!(
            LinPoly::from_poly(&poly(&f2, &[(3, 1), (1, 1)]), 2),
            Err(Error::NonQPowerExponent { exponent: 3, q: 2 })
        );
        assert_eq!(
            LinPoly::from_poly(&poly(&f2, &[(2, 1), (0, 1)]), 2),
            Err(Error::NonQPowerExponent { exponent: 0, q: 2 })
        );
        let f = poly(&f2, &[(8, 1), (2, 1)]);
        assert_eq!(LinPoly::from_poly(&f, 2).unwrap().to_poly().unwrap(), f);
        assert_eq!(lin(&f2, 2, &[1, 1, 1]).to_string(), "x^4 + x^2 + x");
        assert!(matches!(LinPoly::new(f2, 3, vec![]), Err(Error::NotPowerOfCharacteristic { .. })));
    }

    #[test]
    fn compose_examples() {
        let f4 = FiniteField::gf(4).unwrap();
        let g = f4.generator("g").unwrap();
        let xq = LinPoly::new(f4.clone(), 2, vec![f4.zero(), f4.one()]).unwrap();
        let xq2 = LinPoly::new(f4.clone(), 2, vec![f4.zero(), f4.zero(), f4.one()]).unwrap();
        assert_eq!(xq.skew_compose(&xq).unwrap(), xq2);
        let ax = LinPoly::new(f4.clone(), 2, vec![g.clone()]).unwrap();
        let l2 = LinPoly::new(f4.clone(), 2, vec![f4.one(), g.clone(), f4.one()]).unwrap();
        let expect = LinPoly::new(f4.clone(), 2, l2.coeffs().iter().map(|c| f4.mul(&g, c)).collect()).unwrap();
        assert_eq!(ax.skew_compose(&l2).unwrap(), expect);
        let gq = LinPoly::new(f4.clone(), 2, vec![f4.zero(), f4.mul(&g, &g)]).unwrap();
        assert_eq!(xq.skew_compose(&ax).unwrap(), gq);
        let other_q = LinPoly::new(f4.clone(), 4, vec![f4.one()]).unwrap();
        assert!(xq.skew_compose(&other_q).is_err());
    }

    #[test]
    fn associate_examples() {
        let f2 = fp(2);
        assert_eq!(lin(&f2, 2, &[1, 1, 1]).q_associate().to_string(), "x^2 + x + 1");
        assert_eq!(lin(&f2, 2, &[0, 0, 0, 1]).q_associate().to_string(), "x^3");
        assert_eq!(lin(&f2, 2, &[1, 0, 1]).q_associate().to_string(), "x^2 + 1");
        let l = lin(&f2, 2, &[1, 0, 1, 1]);
        assert_eq!(LinPoly::from_q_associate(&l.q_associate(), 2).unwrap(), l);
    }

    #[test]
    fn detect_qs_examples() {
        let f3 = fp(3);
        assert_eq!(lin(&f3, 3, &[1, 0, 1]).detect_qs().unwrap(), 2);
        assert_eq!(lin(&f3, 3, &[1, 1, 1]).detect_qs().unwrap(), 1);
        assert_eq!(lin(&f3, 3, &[1, 0, 1, 0, 1]).detect_qs().unwrap(), 2);
        assert_eq!(lin(&f3, 3, &[1, 0, 0, 0, 0, 0, 1]).detect_qs().unwrap(), 6);
        assert!(lin(&f3, 3, &[1]).detect_qs().is_err());
    }

    #[test]
    fn gap_index_examples() {
        let f2 = fp(2);
        assert_eq!(lin(&f2, 2, &[1, 1, 1]).gap_index(), Some(1));
        assert_eq!(lin(&f2, 2, &[1, 0, 0, 1]).gap_index(), Some(3));
        assert_eq!(lin(&f2, 2, &[0, 0, 1]).gap_index(), None);
    }

    #[test]
    fn projective_examples() {
        let f9 = FiniteField::gf(9).unwrap();
        let a = f9.generator("g").unwrap();
        let b = f9.from_int(2);
        let l = LinPoly::new(f9.clone(), 3, vec![b.clone(), a.clone(), f9.one()]).unwrap();
        let p = l.projective_extract(2).unwrap();
        // y^4 + a y + b for q = 3
        assert_eq!(p, Poly::new(f9.clone(), vec![b, a, f9.zero(), f9.zero(), f9.one()]));
        let m = l.projective_extract(1).unwrap();
        assert_eq!(m.shift(1), l.to_poly().unwrap());
        assert!(l.projective_extract(4).is_err());

        let f2 = fp(2);
        let p = lin(&f2, 2, &[1, 1, 1]).projective_extract(1).unwrap();
        assert_eq!(p.to_string(), "x^3 + x + 1");
    }

    #[test]
    fn projective_round_trip_for_every_divisor() {
        let f = FiniteField::gf(49).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let coeffs: Vec<FfElem> = (0..3).map(|_| f.random_elem(&mut rng)).chain([f.one()]).collect();
            let l = LinPoly::new(f.clone(), 7, coeffs).unwrap();
            for r in [1u64, 2, 3, 6] {
                let p = l.projective_extract(r).unwrap();
                let xr = Poly::monomial(f.clone(), f.one(), r as usize);
                assert_eq!(p.compose(&xr).shift(1), l.to_poly().unwrap());
            }
        }
    }

    #[test]
    fn moore_examples() {
        let f4 = FiniteField::gf(4).unwrap();
        let f2 = fp(2);
        assert_eq!(moore_vanishing(&f2, &[f2.one()], 2).unwrap(), lin(&f2, 2, &[-1, 1]));
        let g = f4.generator("g").unwrap();
        let l = moore_vanishing(&f4, std::slice::from_ref(&g), 2).unwrap();
        let expect = LinPoly::new(f4.clone(), 2, vec![f4.neg(&f4.pow(&g, 1)), f4.one()]).unwrap();
        assert_eq!(l, expect);
        let full = moore_vanishing(&f4, &[f4.one(), g.clone()], 2).unwrap();
        assert_eq!(full.to_string(), "x^4 + x");
        assert_eq!(moore_vanishing(&f4, &[g.clone(), g.clone()], 2), Err(Error::Dependent));
        assert_eq!(moore_vanishing(&FiniteField::gf(8).unwrap(), &[], 4), Err(Error::MissingSubfield { q: 4 }));

        let f9 = FiniteField::gf(9).unwrap();
        let c = f9.generator("g").unwrap();
        let l = moore_vanishing(&f9, std::slice::from_ref(&c), 3).unwrap();
        assert_eq!(l.coeff(0), f9.neg(&f9.pow(&c, 2)));
    }

    /// `Π_{v ∈ span} (x - v)` by enumerating the span.
    fn span_product(f: &FiniteField, basis: &[FfElem], q: u64) -> Poly<FiniteField> {
        let fq: Vec<FfElem> = f.elements().unwrap().into_iter().filter(|a| f.in_subfield(a, q)).collect();
        let mut span = vec![f.zero()];
        for b in basis {
            span = span
                .iter()
                .flat_map(|v| fq.iter().map(move |l| (v.clone(), l.clone())))
                .map(|(v, l)| f.add(&v, &f.mul(&l, b)))
                .collect();
        }
        span.iter().fold(Poly::one(f.clone()), |acc, v| {
            &acc * &Poly::new(f.clone(), vec![f.neg(v), f.one()])
        })
    }

    #[test]
    fn moore_matches_span_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (order, q) in [(8u64, 2u64), (16, 2), (27, 3), (81, 3), (16, 4)] {
            let f = FiniteField::gf(order).unwrap();
            for dim in 1..=3usize {
                for _ in 0..6 {
                    let basis: Vec<FfElem> = (0..dim).map(|_| f.random_elem(&mut rng)).collect();
                    match moore_vanishing(&f, &basis, q) {
                        Ok(l) => assert_eq!(l.to_poly().unwrap(), span_product(&f, &basis, q)),
                        Err(Error::Dependent) => {
                            let p = span_product(&f, &basis, q);
                            assert!(p.degree().unwrap() < q_pow(q, dim).unwrap() || has_repeat(&f, &p));
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    fn has_repeat(f: &FiniteField, p: &Poly<FiniteField>) -> bool {
        let _ = f;
        p.gcd(&p.derivative()).unwrap().degree() != Some(0)
    }

    fn arb_fq_lin(q: u64) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(0..q as i64, 1..5)
    }

    proptest! {
        #[test]
        fn q_polynomials_are_additive(seed in any::<u64>(), which in 0usize..3) {
            let (order, q) = [(16u64, 2u64), (81, 3), (64, 4)][which];
            let f = FiniteField::gf(order).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs: Vec<FfElem> = (0..4).map(|_| f.random_elem(&mut rng)).chain([f.one()]).collect();
            let l = LinPoly::new(f.clone(), q, coeffs).unwrap();
            let a = f.random_elem(&mut rng);
            let b = f.random_elem(&mut rng);
            prop_assert_eq!(l.eval(&f.add(&a, &b)), f.add(&l.eval(&a), &l.eval(&b)));
            let dense = l.to_poly().unwrap();
            prop_assert_eq!(dense.eval(&a), l.eval(&a));
        }

        #[test]
        fn skew_compose_is_composition(seed in any::<u64>()) {
            let f = FiniteField::gf(27).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mk = |rng: &mut ChaCha8Rng, n: usize| {
                let c: Vec<FfElem> = (0..n).map(|_| f.random_elem(rng)).chain([f.one()]).collect();
                LinPoly::new(f.clone(), 3, c).unwrap()
            };
            let l1 = mk(&mut rng, 2);
            let l2 = mk(&mut rng, 1);
            let c = l1.skew_compose(&l2).unwrap();
            for _ in 0..5 {
                let x = f.random_elem(&mut rng);
                prop_assert_eq!(c.eval(&x), l1.eval(&l2.eval(&x)));
            }
            prop_assert_eq!(c.to_poly().unwrap(), l1.to_poly().unwrap().compose(&l2.to_poly().unwrap()));
        }

        #[test]
        fn associate_is_multiplicative(a in arb_fq_lin(2), b in arb_fq_lin(2), c in arb_fq_lin(3), d in arb_fq_lin(3)) {
            for (q, x, y) in [(2u64, &a, &b), (3, &c, &d)] {
                let f = fp(q);
                let (Ok(l1), Ok(l2)) = (
                    LinPoly::new(f.clone(), q, x.iter().map(|&k| f.from_int(k)).collect()),
                    LinPoly::new(f.clone(), q, y.iter().map(|&k| f.from_int(k)).collect()),
                ) else { continue };
                let comp = l1.skew_compose(&l2).unwrap();
                prop_assert_eq!(comp.q_associate(), &l1.q_associate() * &l2.q_associate());
            }
        }
    }
}
