//! Spaces of homogeneous forms `H_{n,r}` as modules for matrix groups.
//!
//! A form is a coefficient vector indexed by a [`MonomialBasis`]. Matrices act
//! by substitution, `P^g(x) = P(gx)` with `(gx)_i = Σ_j g_ij x_j`. This is a
//! right action: `(P^g)^h = P^(gh)`.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::ffield::FiniteField;
use crate::field::Field;
use crate::linalg::{gauss_jordan, Matrix};
use crate::linearize::min_linearized_multiple;
use crate::linpoly::LinPoly;
use crate::rootspace::{eval_in, eval_map_kernel, Coefficients, RootSpace};
use crate::upoly::{format_term, Poly};

/// Exponent vectors of total degree `r` in `n` variables, graded-lex
/// descending: `x1^r` first, `xn^r` last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    r: usize,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("forms need at least one variable".into()));
        }
        let mut exps = Vec::new();
        let mut cur = vec![0u32; n];
        fill(&mut exps, &mut cur, 0, r as u32);
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(MonomialBasis { n, r, exps, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[Vec<u32>] {
        &self.exps
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// `x1^2*x2`; the empty monomial prints as `1`.
    pub fn monomial_text(e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format_form<F: Field>(&self, field: &F, coeffs: &[F::Elem]) -> String {
        let terms: Vec<String> = self
            .exps
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(e, c)| {
                let mono = Self::monomial_text(e);
                if self.r == 0 {
                    field.format_elem(c)
                } else {
                    format_term(field, c, &mono)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Values of every basis monomial at `point`.
    pub fn evaluate_all<F: Field>(&self, field: &F, point: &[F::Elem]) -> Vec<F::Elem> {
        let mut powers: Vec<Vec<F::Elem>> = point
            .iter()
            .map(|v| {
                let mut p = vec![field.one()];
                for _ in 0..self.r {
                    let next = field.mul(p.last().unwrap(), v);
                    p.push(next);
                }
                p
            })
            .collect();
        powers.truncate(self.n);
        self.exps
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .fold(field.one(), |acc, (i, &k)| field.mul(&acc, &powers[i][k as usize]))
            })
            .collect()
    }
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, i: usize, left: u32) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        fill(out, cur, i + 1, left - k);
    }
}

/// `dim H_{n,r} = C(n+r-1, r)`.
pub fn hom_dim(n: usize, r: usize) -> u128 {
    assert!(n >= 1, "hom_dim needs n >= 1");
    let (top, k) = ((n + r - 1) as u128, r.min(n - 1) as u128);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (top - i) / (i + 1);
    }
    acc
}

type Sparse<E> = BTreeMap<Vec<u32>, E>;

fn sparse_mul<F: Field>(field: &F, a: &Sparse<F::Elem>, b: &Sparse<F::Elem>) -> Sparse<F::Elem> {
    let mut out: Sparse<F::Elem> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let t = field.mul(ca, cb);
            let slot = out.entry(e).or_insert_with(|| field.zero());
            *slot = field.add(slot, &t);
        }
    }
    out.retain(|_, c| !field.is_zero(c));
    out
}

/// Coefficients of `P^g` where `P` has coefficient vector `coeffs`.
pub fn gl_act<F: Field>(g: &Matrix<F>, coeffs: &[F::Elem], basis: &MonomialBasis) -> Result<Vec<F::Elem>> {
    let field = g.field();
    let n = basis.n();
    if g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix acting on forms in {n} variables",
            g.rows(),
            g.cols()
        )));
    }
    if coeffs.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} monomials",
            coeffs.len(),
            basis.len()
        )));
    }
    if field.is_zero(&g.det()?) {
        return Err(Error::Singular);
    }
    // powers[i][k] = (Σ_j g_ij x_j)^k
    let linear: Vec<Sparse<F::Elem>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| !field.is_zero(g.get(i, j)))
                .map(|j| {
                    let mut e = vec![0u32; n];
                    e[j] = 1;
                    (e, g.get(i, j).clone())
                })
                .collect()
        })
        .collect();
    let unit: Sparse<F::Elem> = [(vec![0u32; n], field.one())].into_iter().collect();
    let powers: Vec<Vec<Sparse<F::Elem>>> = linear
        .iter()
        .map(|l| {
            let mut p = vec![unit.clone()];
            for _ in 0..basis.r() {
                let next = sparse_mul(field, p.last().unwrap(), l);
                p.push(next);
            }
            p
        })
        .collect();
    let mut out = vec![field.zero(); basis.len()];
    for (e, c) in basis.exps().iter().zip(coeffs) {
        if field.is_zero(c) {
            continue;
        }
        let mut term: Sparse<F::Elem> = [(vec![0u32; n], c.clone())].into_iter().collect();
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                term = sparse_mul(field, &term, &powers[i][k as usize]);
            }
        }
        for (m, v) in term {
            let idx = basis.index_of(&m).expect("degree is preserved");
            out[idx] = field.add(&out[idx], &v);
        }
    }
    Ok(out)
}

/// The matrix `A_g` with `A_g c` the coefficients of `P^g`; column `j` is the
/// image of the `j`-th basis monomial.
pub fn action_matrix<F: Field>(g: &Matrix<F>, basis: &MonomialBasis) -> Result<Matrix<F>> {
    let field = g.field().clone();
    let d = basis.len();
    let mut m = Matrix::zeros(field.clone(), d, d);
    for j in 0..d {
        let mut e = vec![field.zero(); d];
        e[j] = field.one();
        for (i, v) in gl_act(g, &e, basis)?.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<E> {
    Irreducible,
    /// Basis of a proper nonzero invariant subspace.
    Reducible(Vec<Vec<E>>),
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct SpinReport<E> {
    /// Dimension of the submodule generated by all seeds together.
    pub span_dim: usize,
    pub verdict: Verdict<E>,
}

/// Echelon basis of the smallest subspace containing `seeds` and closed under
/// `v ↦ G v` for every generator.
pub fn spin<F: Field>(field: &F, seeds: &[Vec<F::Elem>], generators: &[Matrix<F>]) -> Result<Vec<Vec<F::Elem>>> {
    let dim = seeds.first().map_or(0, Vec::len);
    for g in generators {
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} generator on dimension {dim}",
                g.rows(),
                g.cols()
            )));
        }
    }
    let mut basis: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    let mut queue: Vec<Vec<F::Elem>> = seeds.to_vec();
    while let Some(mut v) = queue.pop() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch(format!("seed of length {} in dimension {dim}", v.len())));
        }
        for (piv, b) in &basis {
            if field.is_zero(&v[*piv]) {
                continue;
            }
            let c = v[*piv].clone();
            for (x, y) in v.iter_mut().zip(b) {
                *x = field.sub(x, &field.mul(&c, y));
            }
        }
        let Some(piv) = v.iter().position(|x| !field.is_zero(x)) else {
            continue;
        };
        let inv = field.inv(&v[piv])?;
        let v: Vec<F::Elem> = v.iter().map(|x| field.mul(x, &inv)).collect();
        for g in generators {
            queue.push(g.mul_vec(&v)?);
        }
        basis.push((piv, v));
    }
    let mut rows: Vec<Vec<F::Elem>> = basis.into_iter().map(|(_, v)| v).collect();
    let rank = gauss_jordan(field, &mut rows, dim).len();
    rows.truncate(rank);
    Ok(rows)
}

/// Spin every seed separately. A proper nonzero spin proves reducibility;
/// irreducibility is only claimed when the seeds include every nonzero vector
/// up to scalars.
pub fn spin_submodule<F: Field>(
    field: &F,
    seeds: &[Vec<F::Elem>],
    generators: &[Matrix<F>],
    dim: usize,
) -> Result<SpinReport<F::Elem>> {
    let mut verdict = None;
    let mut points = HashSet::new();
    for s in seeds {
        let sub = spin(field, std::slice::from_ref(s), generators)?;
        if !sub.is_empty() && sub.len() < dim && verdict.is_none() {
            verdict = Some(Verdict::Reducible(sub));
        }
        if let Some(piv) = s.iter().position(|x| !field.is_zero(x)) {
            let inv = field.inv(&s[piv])?;
            points.insert(s.iter().map(|x| field.mul(x, &inv)).collect::<Vec<_>>());
        }
    }
    let span_dim = spin(field, seeds, generators)?.len();
    let verdict = verdict.unwrap_or_else(|| {
        let exhaustive = field
            .cardinality()
            .and_then(|q| q.checked_pow(dim as u32))
            .is_some_and(|total| dim > 0 && points.len() as u128 == (total - 1) / (field.cardinality().unwrap() - 1));
        if exhaustive {
            Verdict::Irreducible
        } else {
            Verdict::Inconclusive
        }
    });
    Ok(SpinReport { span_dim, verdict })
}

/// Every nonzero vector of `K^dim` whose first nonzero entry is 1.
pub fn projective_points(field: &FiniteField, dim: usize) -> Result<Vec<Vec<crate::ffield::FfElem>>> {
    let q = field.cardinality().unwrap_or(u128::MAX);
    let total = q.checked_pow(dim as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| Error::CapExceeded {
        what: "vectors to seed".into(),
        value: format!("{q}^{dim}"),
        cap: 1 << 20,
    })?;
    let elems = field.elements()?;
    let mut out = Vec::new();
    for k in 1..total {
        let mut v = Vec::with_capacity(dim);
        let mut t = k;
        for _ in 0..dim {
            v.push(elems[(t % q) as usize].clone());
            t /= q;
        }
        v.reverse();
        if v.iter().find(|x| !field.is_zero(x)).is_some_and(|x| field.is_one(x)) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Spin from every projective point.
pub fn spin_exhaustive(
    field: &FiniteField,
    generators: &[Matrix<FiniteField>],
    dim: usize,
) -> Result<SpinReport<crate::ffield::FfElem>> {
    spin_submodule(field, &projective_points(field, dim)?, generators, dim)
}

/// Generators of `GL(2,p)`: the two elementary transvections and
/// `diag(ω, 1)` for a primitive `ω`.
pub fn gl2_generators(fp: &FiniteField) -> Result<Vec<Matrix<FiniteField>>> {
    let p = fp.p() as i64;
    let mut gens = vec![
        Matrix::from_ints(fp.clone(), &[&[1, 1], &[0, 1]])?,
        Matrix::from_ints(fp.clone(), &[&[1, 0], &[1, 1]])?,
    ];
    if p > 2 {
        let omega = (2..p)
            .find(|&w| fp.mult_order(&fp.from_int(w)).ok() == Some((p - 1) as u128))
            .expect("F_p^* is cyclic");
        gens.push(Matrix::from_ints(fp.clone(), &[&[omega, 0], &[0, 1]])?);
    }
    Ok(gens)
}

#[derive(Clone, Debug)]
pub struct MultinomialReport {
    pub n: usize,
    pub p: u64,
    pub r: usize,
    /// Rows indexed by `(i_1, …, i_n) ∈ F_p^n` in lex order with `i_1` most
    /// significant; columns by the graded-lex exponent vectors.
    pub matrix: Matrix<FiniteField>,
    pub rank: usize,
    pub full_column_rank: bool,
    /// Rank of the square block formed by the first `C(n+r-1, r)` rows.
    pub top_square_rank: usize,
    pub top_square_singular: bool,
}

/// The multinomial-weighted monomial value matrix over `F_p`.
pub fn multinomial_rank(n: usize, p: u64, r: usize) -> Result<MultinomialReport> {
    let fp = FiniteField::prime(p)?;
    if r == 0 || !(p - 1).is_multiple_of(r as u64) {
        return Err(Error::InvalidArgument(format!("r = {r} does not divide p - 1 = {}", p - 1)));
    }
    let basis = MonomialBasis::new(n, r)?;
    let total = (p as u128).checked_pow(n as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| Error::CapExceeded {
        what: "p^n rows".into(),
        value: format!("{p}^{n}"),
        cap: 1 << 20,
    })? as u64;
    let weights: Vec<_> = basis
        .exps()
        .iter()
        .map(|e| {
            let w = multinomial_mod(r as u64, e, p);
            assert!(w != 0, "multinomial coefficient vanishes mod p for r < p");
            fp.from_int(w as i64)
        })
        .collect();
    let mut rows = Vec::with_capacity(total as usize);
    for k in 0..total {
        let mut point = Vec::with_capacity(n);
        let mut t = k;
        for _ in 0..n {
            point.push(fp.from_int((t % p) as i64));
            t /= p;
        }
        point.reverse();
        let vals = basis.evaluate_all(&fp, &point);
        rows.push(vals.iter().zip(&weights).map(|(v, w)| fp.mul(v, w)).collect());
    }
    let matrix = Matrix::from_rows(fp.clone(), rows)?;
    let rank = matrix.rank();
    let d = basis.len();
    let top = Matrix::from_rows(fp, matrix.to_rows().into_iter().take(d).collect())?;
    let top_square_rank = if d <= matrix.rows() { top.rank() } else { 0 };
    Ok(MultinomialReport {
        n,
        p,
        r,
        rank,
        full_column_rank: rank == d,
        top_square_rank,
        top_square_singular: top_square_rank < d,
        matrix,
    })
}

/// `r! / (k_1! ⋯ k_n!) mod p` for `r < p`.
fn multinomial_mod(r: u64, ks: &[u32], p: u64) -> u64 {
    let mut acc = 1u64;
    let mut left = r;
    for &k in ks {
        acc = acc * binom_mod(left, k as u64, p) % p;
        left -= k as u64;
    }
    acc
}

fn binom_mod(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num = num * ((n - i) % p) as u128 % p as u128;
        den = den * ((i + 1) % p) as u128 % p as u128;
    }
    if den == 0 {
        return 0;
    }
    let inv = mod_pow(den as u64, p - 2, p);
    (num as u64) * inv % p
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct SymWitnessReport {
    pub l: LinPoly<FiniteField>,
    pub r: usize,
    /// `P` with `P(x^r) = L(x)/x`.
    pub projective: Poly<FiniteField>,
    /// The minimal p-polynomial multiple of `P`.
    pub l_p: LinPoly<FiniteField>,
    /// `dim roots(L_P)`, the p-degree of `L_P`.
    pub lp_dim: usize,
    /// `dim_{F_p} ε_r(V)`.
    pub image_rank: usize,
    pub hom_dim: u128,
    pub injective: bool,
    /// Each degree-`r` monomial in the basis and whether its value is a root of `L_P`.
    pub monomial_checks: Vec<(String, bool)>,
    /// Whether every monomial value lies in the `F_p`-span of the powers
    /// `(i_1 v_1 + … + i_n v_n)^r`.
    pub in_power_span: bool,
}

impl SymWitnessReport {
    pub fn consistent(&self) -> bool {
        self.monomial_checks.iter().all(|(_, ok)| *ok)
            && self.in_power_span
            && self.lp_dim as u128 <= self.hom_dim
            && self.lp_dim == self.image_rank
            && (self.lp_dim as u128 == self.hom_dim) == self.injective
    }
}

/// Compare the root space of `L_P` with the `r`-th symmetric power of the
/// root space of `L`, for a p-polynomial `L` and `r | p - 1`.
pub fn symmetric_power_witness(l: &LinPoly<FiniteField>, r: usize, cap_roots: u64) -> Result<SymWitnessReport> {
    let f = l.field();
    let p = f.p() as u64;
    if l.q() != p {
        return Err(Error::Unsupported("q ≠ p".into()));
    }
    if r == 0 || !(p - 1).is_multiple_of(r as u64) {
        return Err(Error::InvalidArgument(format!("r = {r} does not divide p - 1 = {}", p - 1)));
    }
    let projective = l.projective_extract(r as u64)?;
    let l_p = min_linearized_multiple(&projective, p)?.l;
    let rs = RootSpace::new(l, cap_roots)?;
    let e = rs.e();
    let monomials = MonomialBasis::new(rs.n(), r)?;
    let values = monomials.evaluate_all(e, rs.basis());
    let monomial_checks = monomials
        .exps()
        .iter()
        .zip(&values)
        .map(|(k, v)| Ok((MonomialBasis::monomial_text(k), e.is_zero(&eval_in(&l_p, e, v)?))))
        .collect::<Result<Vec<_>>>()?;
    let mut powers = Vec::new();
    for k in 0..(p as u128).pow(rs.n() as u32) {
        let mut t = k;
        let mut w = e.zero();
        for b in rs.basis() {
            w = e.add(&w, &e.mul(&e.from_int((t % p as u128) as i64), b));
            t /= p as u128;
        }
        powers.push(e.pow(&w, r as u64));
    }
    let base = e.subfield_rank(&powers, p)?;
    powers.extend(values.iter().cloned());
    let in_power_span = e.subfield_rank(&powers, p)? == base;
    let image_rank = e.subfield_rank(&values, p)?;
    let injective = eval_map_kernel(&rs, r, Coefficients::Fq, u64::MAX)?.injective;
    Ok(SymWitnessReport {
        l: l.clone(),
        r,
        projective,
        lp_dim: l_p.q_degree(),
        l_p,
        image_rank,
        hom_dim: hom_dim(rs.n(), r),
        injective,
        monomial_checks,
        in_power_span,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FfElem;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> FiniteField {
        FiniteField::prime(p).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let b = MonomialBasis::new(2, 3).unwrap();
        assert_eq!(b.exps(), &[vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        let b = MonomialBasis::new(3, 2).unwrap();
        assert_eq!(
            b.exps(),
            &[vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]
        );
        for w in b.exps().windows(2) {
            assert!(w[0] > w[1]);
        }
        assert_eq!(MonomialBasis::new(4, 0).unwrap().len(), 1);
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(hom_dim(5, 0), 1);
        assert_eq!(hom_dim(2, 3), 4);
        assert_eq!(hom_dim(3, 2), 6);
        assert_eq!(hom_dim(1, 9), 1);
        for n in 1..5 {
            for r in 0..7 {
                assert_eq!(hom_dim(n, r), MonomialBasis::new(n, r).unwrap().len() as u128);
            }
        }
    }

    #[test]
    fn form_text() {
        let f2 = fp(2);
        let b = MonomialBasis::new(2, 3).unwrap();
        let c = [0, 1, 0, 1].map(|k| f2.from_int(k));
        assert_eq!(b.format_form(&f2, &c), "x1^2*x2 + x2^3");
        let f3 = fp(3);
        let c = [2, 0, 1, 0].map(|k| f3.from_int(k));
        assert_eq!(b.format_form(&f3, &c), "2*x1^3 + x1*x2^2");
    }

    #[test]
    fn action_examples() {
        let f2 = fp(2);
        let b1 = MonomialBasis::new(2, 1).unwrap();
        let b2 = MonomialBasis::new(2, 2).unwrap();
        let id = Matrix::identity(f2.clone(), 2);
        let c = [1, 1, 0].map(|k| f2.from_int(k)).to_vec();
        assert_eq!(gl_act(&id, &c, &b2).unwrap(), c);

        let swap = Matrix::from_ints(f2.clone(), &[&[0, 1], &[1, 0]]).unwrap();
        let x1sq = [1, 0, 0].map(|k| f2.from_int(k)).to_vec();
        assert_eq!(b2.format_form(&f2, &gl_act(&swap, &x1sq, &b2).unwrap()), "x2^2");

        let g = Matrix::from_ints(f2.clone(), &[&[1, 1], &[0, 1]]).unwrap();
        let x1 = [1, 0].map(|k| f2.from_int(k)).to_vec();
        assert_eq!(b1.format_form(&f2, &gl_act(&g, &x1, &b1).unwrap()), "x1 + x2");
        assert_eq!(b2.format_form(&f2, &gl_act(&g, &x1sq, &b2).unwrap()), "x1^2 + x2^2");

        let sing = Matrix::from_ints(f2.clone(), &[&[1, 1], &[1, 1]]).unwrap();
        assert!(matches!(gl_act(&sing, &x1, &b1), Err(Error::Singular)));
    }

    fn random_invertible(f: &FiniteField, n: usize, rng: &mut ChaCha8Rng) -> Matrix<FiniteField> {
        loop {
            let rows = (0..n).map(|_| (0..n).map(|_| f.random_elem(rng)).collect()).collect();
            let m = Matrix::from_rows(f.clone(), rows).unwrap();
            if !f.is_zero(&m.det().unwrap()) {
                return m;
            }
        }
    }

    fn eval_form(f: &FiniteField, b: &MonomialBasis, c: &[FfElem], pt: &[FfElem]) -> FfElem {
        b.evaluate_all(f, pt).iter().zip(c).fold(f.zero(), |acc, (v, k)| f.add(&acc, &f.mul(v, k)))
    }

    #[test]
    fn action_agrees_with_substitution_at_points() {
        // Oracle: evaluate P(gx) and P^g(x) at random points of a large
        // extension, where a nonzero form of degree r rarely vanishes.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2u64, 3, 5] {
            let k = fp(p);
            let big = k.extend_by_degree(13).unwrap();
            for n in 1..=3 {
                for r in 0..=4 {
                    let b = MonomialBasis::new(n, r).unwrap();
                    let g = random_invertible(&k, n, &mut rng);
                    let c: Vec<FfElem> = (0..b.len()).map(|_| k.random_elem(&mut rng)).collect();
                    let img = gl_act(&g, &c, &b).unwrap();
                    for _ in 0..4 {
                        let x: Vec<FfElem> = (0..n).map(|_| big.random_elem(&mut rng)).collect();
                        let gx: Vec<FfElem> = (0..n)
                            .map(|i| {
                                (0..n).fold(big.zero(), |acc, j| {
                                    let gij = big.lift_from(g.get(i, j), &k).unwrap();
                                    big.add(&acc, &big.mul(&gij, &x[j]))
                                })
                            })
                            .collect();
                        let lift = |v: &[FfElem]| -> Vec<FfElem> { v.iter().map(|a| big.lift_from(a, &k).unwrap()).collect() };
                        assert_eq!(eval_form(&big, &b, &lift(&c), &gx), eval_form(&big, &b, &lift(&img), &x));
                    }
                }
            }
        }
    }

    #[test]
    fn right_action_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = fp(3);
        for n in 1..=3 {
            let b = MonomialBasis::new(n, 3).unwrap();
            for _ in 0..5 {
                let g = random_invertible(&k, n, &mut rng);
                let h = random_invertible(&k, n, &mut rng);
                let c: Vec<FfElem> = (0..b.len()).map(|_| k.random_elem(&mut rng)).collect();
                let twice = gl_act(&h, &gl_act(&g, &c, &b).unwrap(), &b).unwrap();
                assert_eq!(twice, gl_act(&g.mul(&h).unwrap(), &c, &b).unwrap());
                let ag = action_matrix(&g, &b).unwrap();
                assert_eq!(ag.mul_vec(&c).unwrap(), gl_act(&g, &c, &b).unwrap());
            }
        }
    }

    #[test]
    fn spin_examples() {
        let f2 = fp(2);
        let e1 = vec![f2.one(), f2.zero()];
        let rep = spin_submodule(&f2, std::slice::from_ref(&e1), &[Matrix::identity(f2.clone(), 2)], 2).unwrap();
        assert_eq!(rep.span_dim, 1);
        assert_eq!(rep.verdict, Verdict::Reducible(vec![e1]));

        let b = MonomialBasis::new(2, 1).unwrap();
        let gens: Vec<_> = gl2_generators(&f2).unwrap().iter().map(|g| action_matrix(g, &b).unwrap()).collect();
        let rep = spin_exhaustive(&f2, &gens, 2).unwrap();
        assert_eq!(rep.span_dim, 2);
        assert_eq!(rep.verdict, Verdict::Irreducible);

        // A full spin from one seed proves nothing on its own.
        let rep = spin_submodule(&f2, &[vec![f2.one(), f2.zero()]], &gens, 2).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn symmetric_square_in_char_two_is_reducible() {
        // In characteristic 2 the squares x1^2, x2^2 span a stable plane.
        let f2 = fp(2);
        let b = MonomialBasis::new(2, 2).unwrap();
        let gens: Vec<_> = gl2_generators(&f2).unwrap().iter().map(|g| action_matrix(g, &b).unwrap()).collect();
        let rep = spin_exhaustive(&f2, &gens, 3).unwrap();
        assert!(matches!(rep.verdict, Verdict::Reducible(_)));
    }

    #[test]
    fn doty_probe_small() {
        for p in [2u64, 3] {
            let k = fp(p);
            for r in 1..p as usize {
                let b = MonomialBasis::new(2, r).unwrap();
                let gens: Vec<_> = gl2_generators(&k).unwrap().iter().map(|g| action_matrix(g, &b).unwrap()).collect();
                assert_eq!(spin_exhaustive(&k, &gens, b.len()).unwrap().verdict, Verdict::Irreducible, "p={p} r={r}");
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        let rep = multinomial_rank(2, 3, 2).unwrap();
        assert_eq!((rep.matrix.rows(), rep.matrix.cols()), (9, 3));
        assert_eq!(rep.rank, 3);
        // The first rows have i_1 = 0, so they never see x1.
        assert!(rep.top_square_singular);
        for n in 1..=4 {
            assert_eq!(multinomial_rank(n, 2, 1).unwrap().rank, n);
        }
        assert_eq!(multinomial_rank(2, 5, 4).unwrap().rank, 5);
        assert_eq!(multinomial_rank(2, 5, 2).unwrap().rank, 3);
        assert!(multinomial_rank(2, 5, 3).is_err());
    }

    #[test]
    fn multinomial_entries_by_hand() {
        // p = 3, r = 2: columns x1^2, x1 x2, x2^2 weighted 1, 2, 1.
        let rep = multinomial_rank(2, 3, 2).unwrap();
        let k = fp(3);
        let want: Vec<Vec<FfElem>> = (0..9)
            .map(|t| {
                let (i, j) = ((t / 3) as i64, (t % 3) as i64);
                vec![k.from_int(i * i), k.from_int(2 * i * j), k.from_int(j * j)]
            })
            .collect();
        assert_eq!(rep.matrix.to_rows(), want);
    }

    #[test]
    fn witness_degree_one_is_the_root_space() {
        let k = fp(5);
        let l = LinPoly::new(k.clone(), 5, [2, 1, 1].map(|c| k.from_int(c)).to_vec()).unwrap();
        let rep = symmetric_power_witness(&l, 1, 4096).unwrap();
        assert_eq!(rep.l_p, l.monic().unwrap());
        assert_eq!((rep.lp_dim, rep.hom_dim), (2, 2));
        assert!(rep.consistent());
    }

    #[test]
    fn witness_examples() {
        let k3 = fp(3);
        // L/x = x^8 + x^2 + 2 is irreducible over F_3.
        let l = LinPoly::new(k3.clone(), 3, [2, 1, 1].map(|c| k3.from_int(c)).to_vec()).unwrap();
        let rep = symmetric_power_witness(&l, 2, 4096).unwrap();
        assert_eq!(rep.monomial_checks.len(), 3);
        assert!(rep.monomial_checks.iter().all(|(_, ok)| *ok));
        assert!(rep.injective);
        assert_eq!(rep.lp_dim, 3);
        assert!(rep.consistent());

        let k5 = fp(5);
        let l = LinPoly::new(k5.clone(), 5, [2, 1, 1].map(|c| k5.from_int(c)).to_vec()).unwrap();
        let rep = symmetric_power_witness(&l, 4, 4096).unwrap();
        assert_eq!(rep.hom_dim, 5);
        assert!(rep.consistent());

        let k4 = FiniteField::gf(4).unwrap();
        let l = LinPoly::new(k4.clone(), 4, vec![k4.one(), k4.one(), k4.one()]).unwrap();
        assert!(matches!(symmetric_power_witness(&l, 1, 4096), Err(Error::Unsupported(_))));
        assert!(matches!(
            symmetric_power_witness(&LinPoly::new(k5.clone(), 5, vec![k5.one(), k5.one()]).unwrap(), 3, 4096),
            Err(Error::InvalidArgument(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn action_preserves_spin_dimension(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = fp(3);
            let b = MonomialBasis::new(2, 2).unwrap();
            let g = random_invertible(&k, 2, &mut rng);
            let a = action_matrix(&g, &b).unwrap();
            let v: Vec<FfElem> = (0..b.len()).map(|_| k.random_elem(&mut rng)).collect();
            let gens = gl2_generators(&k).unwrap().iter().map(|g| action_matrix(g, &b).unwrap()).collect::<Vec<_>>();
            let d1 = spin(&k, std::slice::from_ref(&v), &gens).unwrap().len();
            let d2 = spin(&k, &[a.mul_vec(&v).unwrap()], &gens).unwrap().len();
            prop_assert_eq!(d1, d2);
        }
    }
}
