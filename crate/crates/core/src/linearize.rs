//! Minimal q-linearized and affine multiples of an arbitrary polynomial.
//!
//! The residues `x^(q^i) mod f` are produced one at a time by square-and-reduce
//! and fed into an echelon basis that remembers how each row was combined.
//! The first residue that reduces to zero gives the dependency, and hence the
//! minimal monic multiple, directly.

use crate::error::{Error, Result};
use crate::ffield::{log_p, FiniteField};
use crate::field::Field;
use crate::linpoly::LinPoly;
use crate::upoly::Poly;

#[derive(Clone, Debug)]
pub struct LinearizationReport<F: Field> {
    pub f: Poly<F>,
    pub q: u64,
    /// Minimal q-degree.
    pub d: usize,
    pub l: LinPoly<F>,
    /// Coefficients `λ_0, …, λ_d` of the dependency `Σ λ_i x^(q^i) ≡ 0 mod f`.
    pub kernel_vector: Vec<F::Elem>,
    /// Number of residues computed, `d + 1`.
    pub residues: usize,
    /// Rank of the first `d` residues; equals `d` when minimality holds.
    pub certificate_rank: usize,
}

#[derive(Clone, Debug)]
pub struct AffineReport<F: Field> {
    pub f: Poly<F>,
    pub q: u64,
    pub d: usize,
    pub l: LinPoly<F>,
    /// `f` divides `L(x) + c`.
    pub c: F::Elem,
    pub kernel_vector: Vec<F::Elem>,
    pub residues: usize,
}

struct Echelon<F: Field> {
    field: F,
    /// (pivot column, row with pivot entry 1, combination of inputs)
    rows: Vec<(usize, Vec<F::Elem>, Vec<F::Elem>)>,
    inputs: usize,
}

impl<F: Field> Echelon<F> {
    fn new(field: F) -> Self {
        Echelon { field, rows: Vec::new(), inputs: 0 }
    }

    /// Add the next input vector. Returns the dependency (coefficients on
    /// all inputs so far, the newest one equal to 1) if it reduces to zero.
    fn push(&mut self, mut v: Vec<F::Elem>) -> Option<Vec<F::Elem>> {
        let f = self.field.clone();
        let k = self.inputs;
        self.inputs += 1;
        for row in &mut self.rows {
            row.2.push(f.zero());
        }
        let mut combo = vec![f.zero(); k + 1];
        combo[k] = f.one();
        for (piv, row, rc) in &self.rows {
            if f.is_zero(&v[*piv]) {
                continue;
            }
            let c = v[*piv].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        match v.iter().position(|x| !f.is_zero(x)) {
            None => Some(combo),
            Some(piv) => {
                let inv = f.inv(&v[piv]).expect("nonzero pivot");
                let v = v.iter().map(|x| f.mul(x, &inv)).collect();
                let combo = combo.iter().map(|x| f.mul(x, &inv)).collect();
                self.rows.push((piv, v, combo));
                None
            }
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn check_input<F: Field>(f: &Poly<F>, q: u64) -> Result<usize> {
    let field = f.field();
    if log_p(q, field.characteristic()).is_none() {
        return Err(Error::NotPowerOfCharacteristic { q, p: field.characteristic() });
    }
    if !field.contains_fq(q) {
        return Err(Error::MissingSubfield { q });
    }
    match f.degree() {
        None | Some(0) => Err(Error::InvalidArgument("f must have degree at least 1".into())),
        Some(m) => Ok(m),
    }
}

fn residue_vector<F: Field>(r: &Poly<F>, m: usize) -> Vec<F::Elem> {
    (0..m).map(|i| r.coeff(i)).collect()
}

/// The monic q-polynomial of least q-degree divisible by `f`.
pub fn min_linearized_multiple<F: Field>(f: &Poly<F>, q: u64) -> Result<LinearizationReport<F>> {
    let m = check_input(f, q)?;
    let field = f.field().clone();
    let mut ech = Echelon::new(field.clone());
    let mut r = Poly::x(field.clone()).rem(f)?;
    let mut i = 0;
    loop {
        if let Some(combo) = ech.push(residue_vector(&r, m)) {
            let certificate_rank = ech.rank();
            let l = LinPoly::new(field, q, combo.clone())?;
            return Ok(LinearizationReport {
                f: f.clone(),
                q,
                d: i,
                l,
                kernel_vector: combo,
                residues: i + 1,
                certificate_rank,
            });
        }
        r = r.pow_mod(q, f)?;
        i += 1;
    }
}

/// The monic affine polynomial `L(x) + c` of least q-degree divisible by `f`.
///
/// The constant residue 1 enters the echelon basis first, so a dependency
/// may use it; when `deg f = 1` the answer is `f` itself with `L = x`.
pub fn min_affine_multiple<F: Field>(f: &Poly<F>, q: u64) -> Result<AffineReport<F>> {
    let m = check_input(f, q)?;
    let field = f.field().clone();
    let mut ech = Echelon::new(field.clone());
    ech.push(residue_vector(&Poly::one(field.clone()), m));
    let mut r = Poly::x(field.clone()).rem(f)?;
    let mut i = 0;
    loop {
        if let Some(combo) = ech.push(residue_vector(&r, m)) {
            let c = combo[0].clone();
            let l = LinPoly::new(field, q, combo[1..].to_vec())?;
            return Ok(AffineReport {
                f: f.clone(),
                q,
                d: i,
                l,
                c,
                kernel_vector: combo,
                residues: i + 2,
            });
        }
        r = r.pow_mod(q, f)?;
        i += 1;
    }
}

/// Dimension of the `F_q`-span of the roots of a squarefree `f` in its
/// splitting field.
pub fn root_span_dim(f: &Poly<FiniteField>, q: u64) -> Result<usize> {
    check_input(f, q)?;
    let degrees = f.ddf_degrees()?;
    let d = degrees.iter().fold(1usize, |acc, &(k, _)| lcm(acc, k));
    let e = f.field().extend_by_degree(d)?;
    let roots = f.roots_in(&e, 0)?;
    e.subfield_rank(&roots, q)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
