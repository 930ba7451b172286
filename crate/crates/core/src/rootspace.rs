//! Root spaces of q-polynomials over finite fields and the evaluation maps
//! `ε_r` (forms over `F_q`) and `η_r` (forms over `F`) on a root basis.
//!
//! The Frobenius `σ: v ↦ v^|F|` preserves the set of linearized residues
//! `Σ c_i x^(q^i) mod L`, where it acts as an `n`-term semilinear recurrence.
//! Splitting degrees and irreducibility of `L(x)/x` are read off that
//! recurrence instead of from polynomials of degree `q^n`.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ffield::{factor, log_p, FfElem, FiniteField};
use crate::field::Field;
use crate::linalg::{in_span, Matrix};
use crate::linpoly::{q_pow, LinPoly};
use crate::symmod::{gl_act, MonomialBasis};

pub const DEFAULT_CAP_ROOTS: u64 = 4096;
pub const DEFAULT_CAP_DIM: u64 = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `α, α^q, …, α^(q^(n-1))` for the canonical-first nonzero root `α`.
    Special,
    Generic,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Special => "special",
            Provenance::Generic => "generic",
        }
    }
}

/// Which coefficients the homogeneous forms take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    /// `F_q`, giving `ε_r`.
    Fq,
    /// The coefficient field `F` of `L`, giving `η_r`.
    F,
}

impl Coefficients {
    pub fn as_str(self) -> &'static str {
        match self {
            Coefficients::Fq => "fq",
            Coefficients::F => "f",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootSpace {
    l: LinPoly<FiniteField>,
    fq: FiniteField,
    e: FiniteField,
    d: usize,
    roots: Vec<FfElem>,
    basis: Vec<FfElem>,
    provenance: Provenance,
    quotient_irreducible: bool,
    coords: HashMap<FfElem, Vec<FfElem>>,
}

/// One `q`-power step on a linearized residue mod a monic `L`:
/// `Σ c_i x^(q^i) ↦ Σ c_i^q x^(q^(i+1))`, then `x^(q^n)` is folded back.
fn q_step(field: &FiniteField, monic: &[FfElem], q: u64, c: &[FfElem]) -> Vec<FfElem> {
    let n = c.len();
    let top = field.pow(&c[n - 1], q);
    let mut out = Vec::with_capacity(n);
    out.push(field.zero());
    for ci in &c[..n - 1] {
        out.push(field.pow(ci, q));
    }
    if !field.is_zero(&top) {
        for (o, a) in out.iter_mut().zip(monic) {
            *o = field.sub(o, &field.mul(&top, a));
        }
    }
    out
}

/// The `|F|`-power map on linearized residues mod `L`.
struct Residues {
    field: FiniteField,
    monic: Vec<FfElem>,
    q: u64,
    steps: usize,
}

impl Residues {
    fn new(l: &LinPoly<FiniteField>) -> Result<Self> {
        let field = l.field().clone();
        let a = log_p(l.q(), field.p()).expect("LinPoly checks q") as usize;
        if !field.degree().is_multiple_of(a) {
            return Err(Error::MissingSubfield { q: l.q() });
        }
        let m = l.monic()?;
        Ok(Residues {
            monic: m.coeffs()[..m.q_degree()].to_vec(),
            q: l.q(),
            steps: field.degree() / a,
            field,
        })
    }

    fn x(&self) -> Vec<FfElem> {
        let mut c = vec![self.field.zero(); self.monic.len()];
        c[0] = self.field.one();
        c
    }

    fn sigma(&self, c: &[FfElem]) -> Vec<FfElem> {
        let mut c = c.to_vec();
        for _ in 0..self.steps {
            c = q_step(&self.field, &self.monic, self.q, &c);
        }
        c
    }
}

fn check_separable(l: &LinPoly<FiniteField>) -> Result<usize> {
    if l.field().is_zero(&l.coeff(0)) {
        return Err(Error::RepeatedRoots);
    }
    let n = l.q_degree();
    if n == 0 {
        return Err(Error::InvalidArgument("q-degree 0: the only root is 0".into()));
    }
    Ok(n)
}

/// `[E:F]` for the splitting field `E` of `L`: the least `k` with
/// `x^(|F|^k) ≡ x mod L`.
pub fn splitting_degree(l: &LinPoly<FiniteField>) -> Result<usize> {
    let n = check_separable(l)?;
    let res = Residues::new(l)?;
    let bound = q_pow(l.q(), n)?;
    let x = res.x();
    let mut c = res.sigma(&x);
    let mut k = 1;
    while c != x {
        if k >= bound {
            return Err(Error::InvalidArgument(format!("no splitting degree below {bound}; L is not separable")));
        }
        c = res.sigma(&c);
        k += 1;
    }
    Ok(k)
}

/// Whether `L(x)/x` is irreducible over the coefficient field of `L`.
///
/// Rabin's test for `M = L/x` of degree `m = q^n - 1`: `x^(|F|^m) ≡ x` and
/// `gcd(x^(|F|^(m/s)) - x, M) = 1` for each prime `s | m`. Both are checked
/// on `L = xM` with residues from the `|F|`-power recurrence.
pub fn quotient_is_irreducible(l: &LinPoly<FiniteField>) -> Result<bool> {
    let n = check_separable(l)?;
    let m = q_pow(l.q(), n)? - 1;
    if m == 1 {
        return Ok(true);
    }
    if splitting_degree(l)? != m {
        return Ok(false);
    }
    let res = Residues::new(l)?;
    let field = l.field().clone();
    let lp = l.to_poly()?;
    let mut wanted: Vec<usize> = factor(m as u128).into_iter().map(|(s, _)| m / s as usize).collect();
    wanted.sort_unstable();
    let mut c = res.x();
    let mut k = 0;
    for target in wanted {
        while k < target {
            c = res.sigma(&c);
            k += 1;
        }
        let mut diff = c.clone();
        diff[0] = field.sub(&diff[0], &field.one());
        let Ok(lin) = LinPoly::new(field.clone(), l.q(), diff) else {
            // x^(|F|^k) ≡ x: every root already lies in a proper subfield.
            return Ok(false);
        };
        if lin.to_poly()?.gcd(&lp)?.degree() != Some(1) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl RootSpace {
    /// Build the splitting field of `L` over its (finite) coefficient field,
    /// collect all `q^n` roots and choose a basis.
    pub fn new(l: &LinPoly<FiniteField>, cap_roots: u64) -> Result<Self> {
        let n = check_separable(l)?;
        let f = l.field().clone();
        let q = l.q();
        if !f.contains_fq(q) {
            return Err(Error::MissingSubfield { q });
        }
        let count = (q as u128).checked_pow(n as u32).filter(|&c| c <= cap_roots as u128);
        let Some(count) = count else {
            return Err(Error::CapExceeded {
                what: "number of roots q^n".into(),
                value: format!("{q}^{n}"),
                cap: cap_roots,
            });
        };
        let fq = f.level_with_order(q).ok_or_else(|| {
            Error::Unsupported(format!(
                "F_{q} is not a level of the tower {f}; give the field as an extension of GF({q})"
            ))
        })?;
        let d = splitting_degree(l)?;
        let e = f.extend_by_degree(d)?;
        let l_e = LinPoly::new(
            e.clone(),
            q,
            l.coeffs().iter().map(|c| e.lift_from(c, &f)).collect::<Result<_>>()?,
        )?;
        let kernel = e.fp_kernel(|v| l_e.eval(v));
        let a = log_p(q, f.p()).expect("checked") as usize;
        if kernel.len() != a * n {
            return Err(Error::InvalidArgument(format!(
                "root space has F_p-dimension {} instead of {}",
                kernel.len(),
                a * n
            )));
        }
        let mut roots = fp_span(&e, &kernel);
        e.sort_canonical(&mut roots);
        debug_assert_eq!(roots.len() as u128, count);

        let quotient_irreducible = quotient_is_irreducible(l)?;
        let over_fq = l.coeffs().iter().all(|c| f.in_subfield(c, q));
        let (basis, provenance) = if quotient_irreducible && over_fq {
            let alpha = roots.iter().find(|r| !e.is_zero(r)).expect("n >= 1").clone();
            let mut b = vec![alpha];
            for _ in 1..n {
                let next = e.pow(b.last().unwrap(), q);
                b.push(next);
            }
            (b, Provenance::Special)
        } else {
            (greedy_basis(&e, &roots, q, n)?, Provenance::Generic)
        };
        let mut rs = RootSpace {
            l: l.clone(),
            fq,
            e,
            d,
            roots,
            basis: Vec::new(),
            provenance,
            quotient_irreducible,
            coords: HashMap::new(),
        };
        rs.set_basis(basis)?;
        Ok(rs)
    }

    /// The same root space with another basis (provenance "generic").
    pub fn with_basis(&self, basis: Vec<FfElem>) -> Result<Self> {
        let mut rs = self.clone();
        rs.provenance = Provenance::Generic;
        rs.set_basis(basis)?;
        Ok(rs)
    }

    fn set_basis(&mut self, basis: Vec<FfElem>) -> Result<()> {
        let n = self.n();
        if basis.len() != n {
            return Err(Error::DimensionMismatch(format!("{} basis vectors for dimension {n}", basis.len())));
        }
        let e = &self.e;
        let scalars: Vec<FfElem> = self.fq.elements()?;
        let lifted: Vec<FfElem> = scalars.iter().map(|s| e.lift_from(s, &self.fq)).collect::<Result<_>>()?;
        let mut coords = HashMap::with_capacity(self.roots.len());
        let q = scalars.len();
        let total = self.roots.len();
        for k in 0..total {
            let mut t = k;
            let mut v = e.zero();
            let mut c = Vec::with_capacity(n);
            for b in &basis {
                let i = t % q;
                t /= q;
                v = e.add(&v, &e.mul(&lifted[i], b));
                c.push(scalars[i].clone());
            }
            coords.insert(v, c);
        }
        if coords.len() != total || self.roots.iter().any(|r| !coords.contains_key(r)) {
            return Err(Error::Dependent);
        }
        self.basis = basis;
        self.coords = coords;
        Ok(())
    }

    pub fn l(&self) -> &LinPoly<FiniteField> {
        &self.l
    }

    pub fn q(&self) -> u64 {
        self.l.q()
    }

    pub fn n(&self) -> usize {
        self.l.q_degree()
    }

    pub fn f(&self) -> &FiniteField {
        self.l.field()
    }

    pub fn fq(&self) -> &FiniteField {
        &self.fq
    }

    pub fn e(&self) -> &FiniteField {
        &self.e
    }

    /// `[E:F]`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn roots(&self) -> &[FfElem] {
        &self.roots
    }

    pub fn basis(&self) -> &[FfElem] {
        &self.basis
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn quotient_irreducible(&self) -> bool {
        self.quotient_irreducible
    }

    /// `F_q`-coordinates of a root in the chosen basis.
    pub fn coords_of(&self, root: &FfElem) -> Option<&[FfElem]> {
        self.coords.get(root).map(Vec::as_slice)
    }

    pub fn field_for(&self, k: Coefficients) -> &FiniteField {
        match k {
            Coefficients::Fq => &self.fq,
            Coefficients::F => self.l.field(),
        }
    }

    /// Matrix over `F_q` of `v ↦ v^|F|`; column `j` holds the coordinates of
    /// the image of `v_j`.
    pub fn frobenius_matrix(&self) -> Result<Matrix<FiniteField>> {
        let n = self.n();
        let mut m = Matrix::zeros(self.fq.clone(), n, n);
        for (j, v) in self.basis.iter().enumerate() {
            let img = self.e.pow_big(v, self.f().order());
            let c = self.coords_of(&img).ok_or_else(|| {
                Error::InvalidArgument("Frobenius image is not a root".into())
            })?;
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }
}

/// Every `F_p`-combination of `gens`.
fn fp_span(e: &FiniteField, gens: &[FfElem]) -> Vec<FfElem> {
    let mut out = vec![e.zero()];
    for g in gens {
        let mut next = Vec::with_capacity(out.len() * e.p() as usize);
        let mut mult = e.zero();
        for _ in 0..e.p() {
            next.extend(out.iter().map(|v| e.add(v, &mult)));
            mult = e.add(&mult, g);
        }
        out = next;
    }
    out
}

fn greedy_basis(e: &FiniteField, roots: &[FfElem], q: u64, n: usize) -> Result<Vec<FfElem>> {
    let mut chosen: Vec<FfElem> = Vec::with_capacity(n);
    for r in roots {
        if chosen.len() == n {
            break;
        }
        if e.is_zero(r) {
            continue;
        }
        chosen.push(r.clone());
        if e.subfield_rank(&chosen, q)? < chosen.len() {
            chosen.pop();
        }
    }
    Ok(chosen)
}

#[derive(Clone, Debug)]
pub struct EvalMapReport {
    pub n: usize,
    pub r: usize,
    pub k: Coefficients,
    pub field: FiniteField,
    pub monomials: MonomialBasis,
    /// Rows are monomials, columns the coordinates of their values over `K`.
    pub matrix: Matrix<FiniteField>,
    pub rank: usize,
    /// Forms vanishing on the basis, in reduced row echelon form.
    pub kernel: Vec<Vec<FfElem>>,
    pub injective: bool,
    pub provenance: Provenance,
}

impl EvalMapReport {
    pub fn kernel_forms(&self) -> Vec<String> {
        self.kernel.iter().map(|c| self.monomials.format_form(&self.field, c)).collect()
    }

    pub fn kernel_contains(&self, form: &[FfElem]) -> bool {
        in_span(&self.field, &self.kernel, form)
    }
}

/// Evaluate every degree-`r` monomial on the basis and compute the kernel of
/// the resulting map from forms over `K` into `E`.
pub fn eval_map_kernel(rs: &RootSpace, r: usize, k: Coefficients, cap_dim: u64) -> Result<EvalMapReport> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let n = rs.n();
    let dim = crate::symmod::hom_dim(n, r);
    if dim > cap_dim as u128 {
        return Err(Error::CapExceeded {
            what: format!("dim H_({n},{r})"),
            value: dim.to_string(),
            cap: cap_dim,
        });
    }
    let monomials = MonomialBasis::new(n, r)?;
    let field = rs.field_for(k).clone();
    let e = rs.e();
    let values = monomials.evaluate_all(e, rs.basis());
    let rows = values.iter().map(|v| e.coords_over(v, &field)).collect::<Result<Vec<_>>>()?;
    let matrix = Matrix::from_rows(field.clone(), rows)?;
    let rk = matrix.transpose().rref_kernel();
    Ok(EvalMapReport {
        n,
        r,
        k,
        field,
        monomials,
        matrix,
        rank: rk.rank,
        injective: rk.kernel.is_empty(),
        kernel: rk.kernel,
        provenance: rs.provenance(),
    })
}

/// Whether the span of an `ε_r` kernel is carried into itself by the
/// substitution action of `g = A^T`, `A` the Frobenius matrix.
///
/// With `σ(v_j) = Σ_i A_ij v_i`, applying `σ` to `P(v) = 0` gives
/// `P(Σ_i A_i1 v_i, …) = 0`, which is `P^g(v) = 0` for `g = A^T`.
pub fn kernel_is_frobenius_stable(rs: &RootSpace, rep: &EvalMapReport) -> Result<bool> {
    if rep.k != Coefficients::Fq {
        return Err(Error::InvalidArgument("Frobenius stability is checked for forms over F_q".into()));
    }
    let g = rs.frobenius_matrix()?.transpose();
    for v in &rep.kernel {
        let w = gl_act(&g, v, &rep.monomials)?;
        if !in_span(&rep.field, &rep.kernel, &w) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The explicit degree-`q+1` form that vanishes on a special basis:
/// `x2^(q+1) - x1^q x3` for `n ≥ 3`, and
/// `x2^(q+1) + a x1^q x2 + b x1^(q+1)` for monic `L = x^(q^2) + a x^q + b x`.
pub fn q_plus_one_witness(rs: &RootSpace) -> Result<(MonomialBasis, Vec<FfElem>)> {
    if rs.provenance() != Provenance::Special {
        return Err(Error::Hypothesis("the witness form needs the special basis".into()));
    }
    let n = rs.n();
    let q = rs.q() as u32;
    let basis = MonomialBasis::new(n, q as usize + 1)?;
    let fq = rs.fq();
    let mut c = vec![fq.zero(); basis.len()];
    let mut set = |e: Vec<u32>, v: FfElem| {
        let i = basis.index_of(&e).expect("degree q+1");
        c[i] = v;
    };
    let mut top = vec![0u32; n];
    match n {
        0 | 1 => return Err(Error::Hypothesis("the witness form needs n >= 2".into())),
        2 => {
            let l = rs.l().monic()?;
            let f = rs.f();
            let a = fq_element(f, fq, &l.coeff(1))?;
            let b = fq_element(f, fq, &l.coeff(0))?;
            top[1] = q + 1;
            set(top, fq.one());
            set(vec![q, 1], a);
            set(vec![q + 1, 0], b);
        }
        _ => {
            top[1] = q + 1;
            set(top, fq.one());
            let mut mixed = vec![0u32; n];
            mixed[0] = q;
            mixed[2] = 1;
            set(mixed, fq.neg(&fq.one()));
        }
    }
    Ok((basis, c))
}

/// An element of `F` known to lie in `F_q`, expressed in the `F_q` level.
fn fq_element(f: &FiniteField, fq: &FiniteField, a: &FfElem) -> Result<FfElem> {
    let c = f.coords_over(a, fq)?;
    if c[1..].iter().any(|x| !fq.is_zero(x)) {
        return Err(Error::Hypothesis("coefficient outside F_q".into()));
    }
    Ok(c[0].clone())
}

#[derive(Clone, Debug)]
pub struct PairDependenceReport {
    pub alpha: FfElem,
    pub beta: FfElem,
    pub k: Coefficients,
    pub field: FiniteField,
    /// Least `m` with `α^m, α^(m-1)β, …, β^m` dependent over `K`.
    pub m: Option<usize>,
    pub cap: usize,
    pub gamma: FfElem,
    /// Degree of the minimal polynomial of `γ = α/β` over `K`.
    pub gamma_degree: usize,
    pub gap_index: Option<usize>,
    /// `q^k + 1`.
    pub bound: Option<u128>,
    /// `L/x` irreducible over `F` and `L` not a `q^s`-polynomial for `s > 1`.
    pub hypotheses_met: bool,
}

impl PairDependenceReport {
    pub fn bound_holds(&self) -> Option<bool> {
        if !self.hypotheses_met {
            return None;
        }
        Some(match (self.m, self.bound) {
            (Some(m), Some(b)) => m as u128 >= b,
            _ => true,
        })
    }
}

/// Search `m = 1, 2, …, cap` for a `K`-dependence among the degree-`m`
/// monomials in `α, β`.
pub fn min_pair_dependence(
    rs: &RootSpace,
    alpha: &FfElem,
    beta: &FfElem,
    k: Coefficients,
    cap: usize,
) -> Result<PairDependenceReport> {
    let e = rs.e();
    if rs.coords_of(alpha).is_none() || rs.coords_of(beta).is_none() {
        return Err(Error::InvalidArgument("α and β must be roots of L".into()));
    }
    if e.subfield_rank(&[alpha.clone(), beta.clone()], rs.q())? < 2 {
        return Err(Error::Dependent);
    }
    let field = rs.field_for(k).clone();
    let gamma = e.div(alpha, beta)?;
    let gamma_degree = degree_over(e, &gamma, &field);
    let mut m_found = None;
    for m in 1..=cap {
        let rows = (0..=m)
            .map(|i| {
                let v = e.mul(&e.pow(alpha, (m - i) as u64), &e.pow(beta, i as u64));
                e.coords_over(&v, &field)
            })
            .collect::<Result<Vec<_>>>()?;
        if Matrix::from_rows(field.clone(), rows)?.rank() < m + 1 {
            m_found = Some(m);
            break;
        }
    }
    let l = rs.l();
    let hypotheses_met = rs.quotient_irreducible() && l.detect_qs()? == 1;
    let gap_index = l.gap_index();
    let bound = gap_index.and_then(|g| (rs.q() as u128).checked_pow(g as u32)).map(|b| b + 1);
    Ok(PairDependenceReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        k,
        field,
        m: m_found,
        cap,
        gamma,
        gamma_degree,
        gap_index,
        bound,
        hypotheses_met,
    })
}

/// Least `t ≥ 1` with `a^(|K|^t) = a`, i.e. `[K(a):K]`.
fn degree_over(e: &FiniteField, a: &FfElem, k: &FiniteField) -> usize {
    let mut x = e.pow_big(a, k.order());
    let mut t = 1;
    while x != *a {
        x = e.pow_big(&x, k.order());
        t += 1;
    }
    t
}

#[derive(Clone, Debug)]
pub struct DirectSumReport {
    /// `dim_{F_q} ε_r(V)` for `r = 0, …, q-1`.
    pub dims: Vec<usize>,
    /// Dimension of the span of all of them together.
    pub total: usize,
    /// `q(q+1)⋯(q+n-1)/n!`.
    pub expected: u128,
    pub is_direct: bool,
}

/// Dimensions of `ε_0(V), …, ε_(q-1)(V)` inside `E` and of their sum.
pub fn direct_sum_check(rs: &RootSpace) -> Result<DirectSumReport> {
    let q = rs.q();
    if *rs.f().order() != BigUint::from(q) {
        return Err(Error::Hypothesis("the coefficient field must be F_q".into()));
    }
    if !rs.quotient_irreducible() || rs.provenance() != Provenance::Special {
        return Err(Error::Hypothesis("L(x)/x must be irreducible, with the special basis".into()));
    }
    let e = rs.e();
    let n = rs.n();
    let mut dims = Vec::with_capacity(q as usize);
    let mut all = Vec::new();
    for r in 0..q as usize {
        let vals = MonomialBasis::new(n, r)?.evaluate_all(e, rs.basis());
        dims.push(e.subfield_rank(&vals, q)?);
        all.extend(vals);
    }
    let total = e.subfield_rank(&all, q)?;
    Ok(DirectSumReport {
        is_direct: total == dims.iter().sum::<usize>(),
        expected: crate::symmod::hom_dim(n + 1, q as usize - 1),
        dims,
        total,
    })
}

/// `L(x)` for `x` in an extension of the coefficient field of `L`.
pub fn eval_in(l: &LinPoly<FiniteField>, e: &FiniteField, x: &FfElem) -> Result<FfElem> {
    let f = l.field();
    let mut acc = e.zero();
    let mut xi = x.clone();
    for (i, a) in l.coeffs().iter().enumerate() {
        if i > 0 {
            xi = e.pow(&xi, l.q());
        }
        if !f.is_zero(a) {
            acc = e.add(&acc, &e.mul(&e.lift_from(a, f)?, &xi));
        }
    }
    Ok(acc)
}

/// Multiplicative orders of the roots of the conventional q-associate `ℓ`
/// lying in the degree-`n` extension of `F`, in canonical root order.
pub fn associate_root_orders(l: &LinPoly<FiniteField>) -> Result<Vec<u128>> {
    let ell = l.q_associate();
    let n = l.q_degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let e = l.field().extend_by_degree(n)?;
    ell.roots_in(&e, 0)?
        .iter()
        .filter(|r| !e.is_zero(r))
        .map(|r| e.mult_order(r))
        .collect()
}
