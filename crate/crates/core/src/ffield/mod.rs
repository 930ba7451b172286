//! Finite fields as explicit towers `F_p ⊂ F_p[g]/(m_1) ⊂ …[h]/(m_2) ⊂ …`.
//!
//! Every field also carries a flat model `F_p[z]/(μ(z))` of its absolute
//! degree: elements are stored as their flat coordinate vector, so
//! multiplication is a single polynomial product and reduction regardless of
//! tower depth. For a field directly above the prime field the flat model is
//! the tower itself. Deeper fields keep a change-of-basis matrix between the
//! flat coordinates and the tower coordinates (products of generator powers),
//! which are what printing, canonical ordering and coordinates over a subfield
//! use.

pub(crate) mod modp;
mod embed;
mod irreducible;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::upoly::Poly;

pub use embed::embed;
pub use irreducible::find_irreducible;

/// Generator names by tower depth; `x` and `t` are reserved for the
/// polynomial and function-field variables.
const GENERATOR_NAMES: [&str; 8] = ["g", "h", "u", "w", "v", "s", "y", "z"];

pub(crate) fn default_generator_name(depth: usize) -> String {
    GENERATOR_NAMES
        .get(depth.wrapping_sub(1))
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("g{depth}"))
}

/// An element of a finite field: its flat coordinates over `F_p`, always
/// fully reduced, so equality is bitwise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FfElem(SmallVec<[u32; 4]>);

impl FfElem {
    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    fn from_slice(d: &[u32]) -> Self {
        FfElem(SmallVec::from_slice(d))
    }
}

impl fmt::Debug for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FfElem{:?}", self.0.as_slice())
    }
}

#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

struct Inner {
    p: u32,
    degree: usize,
    depth: usize,
    kind: Kind,
    flat_modulus: Vec<u32>,
    /// `z^N = Σ c_k z^k` for the nonzero `c_k`.
    reduction: Vec<(usize, u32)>,
    change: Option<BasisChange>,
    cardinality: BigUint,
    description: String,
}

enum Kind {
    Prime,
    Extension {
        base: FiniteField,
        modulus: Vec<FfElem>,
        generator: String,
    },
}

struct BasisChange {
    to_tower: Vec<Vec<u32>>,
    from_tower: Vec<Vec<u32>>,
}

static PRIME_CACHE: LazyLock<Mutex<HashMap<u32, FiniteField>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static EXTENSION_CACHE: LazyLock<Mutex<HashMap<(String, usize), FiniteField>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some(k)` when `q = p^k` with `k ≥ 1`.
pub fn log_p(q: u64, p: u32) -> Option<u32> {
    if q < p as u64 {
        return None;
    }
    let mut k = 0;
    let mut v = q;
    while v > 1 {
        if !v.is_multiple_of(p as u64) {
            return None;
        }
        v /= p as u64;
        k += 1;
    }
    Some(k)
}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 16 {
            return Err(Error::Unsupported(format!(
                "characteristic {p} (primes below 65536 only)"
            )));
        }
        let p = p as u32;
        let mut cache = PRIME_CACHE.lock().unwrap();
        Ok(cache
            .entry(p)
            .or_insert_with(|| {
                FiniteField(Arc::new(Inner {
                    p,
                    degree: 1,
                    depth: 0,
                    kind: Kind::Prime,
                    flat_modulus: vec![0, 1],
                    reduction: Vec::new(),
                    change: None,
                    cardinality: BigUint::from(p),
                    description: format!("GF({p})"),
                }))
            })
            .clone())
    }

    /// `GF(p^k)` built directly over the prime field with the
    /// deterministic-first irreducible modulus.
    pub fn gf(order: u64) -> Result<Self> {
        let p = (2..=order)
            .find(|d| order.is_multiple_of(*d))
            .ok_or(Error::InvalidArgument(format!("GF({order})")))?;
        let k = log_p(order, p as u32).ok_or(Error::InvalidArgument(format!(
            "{order} is not a prime power"
        )))?;
        FiniteField::prime(p)?.extend_by_degree(k as usize)
    }

    /// Extension by an explicit monic irreducible modulus over `self`.
    pub fn extension(&self, modulus: &Poly<FiniteField>, generator: &str) -> Result<Self> {
        if modulus.field() != self {
            return Err(Error::ContextMismatch(format!(
                "modulus over {} used to extend {}",
                modulus.field(),
                self
            )));
        }
        let d = modulus.degree().unwrap_or(0);
        if d < 2 || !modulus.leading().is_some_and(|c| self.is_one(c)) {
            return Err(Error::BadModulus(modulus.to_string_in(generator)));
        }
        if !modulus.is_irreducible()? {
            return Err(Error::BadModulus(modulus.to_string_in(generator)));
        }
        if self.tower_generator_names().iter().any(|n| n == generator) {
            return Err(Error::InvalidArgument(format!(
                "generator name {generator} already used in the tower"
            )));
        }
        Ok(Self::extension_unchecked(self, modulus.coeffs().to_vec(), generator))
    }

    /// Degree-`d` extension with the deterministic-first irreducible modulus;
    /// cached so repeated requests return the same context.
    pub fn extend_by_degree(&self, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("extension degree 0".into()));
        }
        if d == 1 {
            return Ok(self.clone());
        }
        let key = (self.0.description.clone(), d);
        if let Some(f) = EXTENSION_CACHE.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let modulus = find_irreducible(self, d)?;
        let used = self.tower_generator_names();
        let name = (self.0.depth + 1..)
            .map(default_generator_name)
            .find(|n| !used.contains(n))
            .expect("unbounded name supply");
        let field = Self::extension_unchecked(self, modulus.coeffs().to_vec(), &name);
        Ok(EXTENSION_CACHE
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(field)
            .clone())
    }

    fn extension_unchecked(base: &FiniteField, modulus: Vec<FfElem>, generator: &str) -> Self {
        let p = base.0.p;
        let d = modulus.len() - 1;
        let degree = base.0.degree * d;
        let mod_text = Poly::new(base.clone(), modulus.clone()).to_string_in(generator);
        let description = format!("{}[{generator}]/({mod_text})", base.0.description);
        let (flat_modulus, change) = if base.is_prime() {
            (modulus.iter().map(|c| c.0[0]).collect::<Vec<u32>>(), None)
        } else {
            let (mu, to_tower, from_tower) = flat_model(base, &modulus);
            (mu, Some(BasisChange { to_tower, from_tower }))
        };
        let reduction = flat_modulus[..degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k, modm_neg(c, p)))
            .collect();
        FiniteField(Arc::new(Inner {
            p,
            degree,
            depth: base.0.depth + 1,
            kind: Kind::Extension {
                base: base.clone(),
                modulus,
                generator: generator.to_string(),
            },
            flat_modulus,
            reduction,
            change,
            cardinality: BigUint::from(p).pow(degree as u32),
            description,
        }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Absolute degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.0.kind, Kind::Prime)
    }

    pub fn order(&self) -> &BigUint {
        &self.0.cardinality
    }

    pub fn base(&self) -> Option<&FiniteField> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { base, .. } => Some(base),
        }
    }

    /// Defining modulus over the immediate base, constant term first.
    pub fn modulus(&self) -> Option<Poly<FiniteField>> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { base, modulus, .. } => Some(Poly::new(base.clone(), modulus.clone())),
        }
    }

    pub fn generator_name(&self) -> Option<&str> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { generator, .. } => Some(generator),
        }
    }

    fn tower_generator_names(&self) -> Vec<String> {
        self.levels()
            .iter()
            .filter_map(|l| l.generator_name().map(str::to_string))
            .collect()
    }

    /// Degree over the immediate base.
    pub fn relative_degree(&self) -> usize {
        match self.base() {
            None => 1,
            Some(b) => self.0.degree / b.0.degree,
        }
    }

    /// `self` followed by its ancestors down to the prime field.
    pub fn levels(&self) -> Vec<FiniteField> {
        let mut out = vec![self.clone()];
        let mut cur = self.clone();
        while let Some(b) = cur.base().cloned() {
            out.push(b.clone());
            cur = b;
        }
        out
    }

    /// The tower level (self or an ancestor) with exactly `q` elements.
    pub fn level_with_order(&self, q: u64) -> Option<FiniteField> {
        let q = BigUint::from(q);
        self.levels().into_iter().find(|l| *l.order() == q)
    }

    /// Whether `self` is `other` or one of its tower ancestors.
    pub fn is_level_of(&self, other: &FiniteField) -> bool {
        other.levels().iter().any(|l| l == self)
    }

    pub fn description(&self) -> &str {
        &self.0.description
    }

    /// The generator of this level as an element of this level.
    pub fn generator_elem(&self) -> Option<FfElem> {
        let base = self.base()?;
        let mut d = vec![0u32; self.0.degree];
        d[base.0.degree] = 1;
        Some(self.from_tower_digits(&d))
    }

    pub fn elem_from_digits(&self, flat: &[u32]) -> Result<FfElem> {
        if flat.len() != self.0.degree || flat.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidArgument(format!(
                "{:?} is not a reduced element of {}",
                flat, self
            )));
        }
        Ok(FfElem::from_slice(flat))
    }

    /// Coordinates in the tower basis (products of generator powers), least
    /// significant level first.
    pub fn tower_digits(&self, a: &FfElem) -> Vec<u32> {
        match &self.0.change {
            None => a.0.to_vec(),
            Some(c) => modp::mat_vec(&c.to_tower, &a.0, self.0.p),
        }
    }

    pub fn from_tower_digits(&self, d: &[u32]) -> FfElem {
        debug_assert_eq!(d.len(), self.0.degree);
        match &self.0.change {
            None => FfElem::from_slice(d),
            Some(c) => FfElem::from_slice(&modp::mat_vec(&c.from_tower, d, self.0.p)),
        }
    }

    /// Coordinates over the immediate base.
    pub fn tower_coeffs(&self, a: &FfElem) -> Vec<FfElem> {
        match self.base() {
            None => vec![a.clone()],
            Some(b) => self.coords_over(a, b).expect("base is a level"),
        }
    }

    /// Coordinates of `a` over a tower level `sub`, in the tower basis.
    pub fn coords_over(&self, a: &FfElem, sub: &FiniteField) -> Result<Vec<FfElem>> {
        if !sub.is_level_of(self) {
            return Err(Error::ContextMismatch(format!(
                "{sub} is not a tower level of {self}"
            )));
        }
        if sub == self {
            return Ok(vec![a.clone()]);
        }
        let digits = self.tower_digits(a);
        Ok(digits
            .chunks(sub.0.degree)
            .map(|c| sub.from_tower_digits(c))
            .collect())
    }

    /// Image of `a ∈ sub` under the tower inclusion `sub ⊆ self`.
    pub fn lift_from(&self, a: &FfElem, sub: &FiniteField) -> Result<FfElem> {
        if sub == self {
            return Ok(a.clone());
        }
        if !sub.is_level_of(self) {
            return Err(Error::ContextMismatch(format!(
                "{sub} is not a tower level of {self}"
            )));
        }
        let mut d = sub.tower_digits(a);
        d.resize(self.0.degree, 0);
        Ok(self.from_tower_digits(&d))
    }

    /// Element number `k` in the canonical order (base-`p` digits of `k` are
    /// the tower digits, least significant first).
    pub fn element_from_index(&self, mut k: u128) -> FfElem {
        let mut d = vec![0u32; self.0.degree];
        for slot in d.iter_mut() {
            *slot = (k % self.0.p as u128) as u32;
            k /= self.0.p as u128;
        }
        self.from_tower_digits(&d)
    }

    /// All elements in canonical order; only for fields of modest size.
    pub fn elements(&self) -> Result<Vec<FfElem>> {
        let n = self
            .cardinality()
            .filter(|&n| n <= 1 << 20)
            .ok_or_else(|| Error::CapExceeded {
                what: format!("|{}|", self),
                value: self.0.cardinality.to_string(),
                cap: 1 << 20,
            })?;
        Ok((0..n).map(|k| self.element_from_index(k)).collect())
    }

    /// Canonical element order: tower digits compared from the most
    /// significant (top generator power) down.
    pub fn canonical_cmp(&self, a: &FfElem, b: &FfElem) -> Ordering {
        self.canonical_key(a).cmp(&self.canonical_key(b))
    }

    pub fn canonical_key(&self, a: &FfElem) -> Vec<u32> {
        let mut d = self.tower_digits(a);
        d.reverse();
        d
    }

    pub fn sort_canonical(&self, v: &mut [FfElem]) {
        v.sort_by_cached_key(|a| self.canonical_key(a));
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> FfElem {
        let d: SmallVec<[u32; 4]> = (0..self.0.degree).map(|_| rng.gen_range(0..self.0.p)).collect();
        FfElem(d)
    }

    /// Whether `a` lies in the subfield with `q` elements, i.e. `a^q = a`.
    pub fn in_subfield(&self, a: &FfElem, q: u64) -> bool {
        self.pow(a, q) == *a
    }

    /// The `q`-power map.
    pub fn frobenius_q(&self, a: &FfElem, q: u64) -> Result<FfElem> {
        if log_p(q, self.0.p).is_none() {
            return Err(Error::NotPowerOfCharacteristic { q, p: self.0.p });
        }
        Ok(self.pow(a, q))
    }

    /// `a^(|F|^k)` by repeated `p`-powering, usable for any field size.
    pub fn frobenius_iter(&self, a: &FfElem, q: u64, times: usize) -> FfElem {
        let mut x = a.clone();
        for _ in 0..times {
            x = self.pow(&x, q);
        }
        x
    }

    /// Smallest `k ≥ 1` with `a^k = 1`.
    pub fn mult_order(&self, a: &FfElem) -> Result<u128> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        let n = self
            .cardinality()
            .filter(|&n| n <= u64::MAX as u128)
            .ok_or_else(|| Error::Unsupported(format!("multiplicative order in {}", self)))?;
        let group = n - 1;
        let mut order = group;
        for (prime, _) in factor(group) {
            while order % prime == 0 && self.is_one(&self.pow_u128(a, order / prime)) {
                order /= prime;
            }
        }
        Ok(order)
    }

    pub fn pow_u128(&self, a: &FfElem, mut k: u128) -> FfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &FfElem, e: &BigUint) -> FfElem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Basis over `F_p` of the kernel of an `F_p`-linear map `self → self`.
    pub fn fp_kernel<M: Fn(&FfElem) -> FfElem>(&self, map: M) -> Vec<FfElem> {
        let n = self.0.degree;
        let images: Vec<FfElem> = (0..n)
            .map(|k| {
                let mut d = vec![0u32; n];
                d[k] = 1;
                map(&FfElem::from_slice(&d))
            })
            .collect();
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|i| images.iter().map(|img| img.0[i]).collect())
            .collect();
        modp::kernel(&rows, n, self.0.p)
            .into_iter()
            .map(|v| FfElem::from_slice(&v))
            .collect()
    }

    /// An element generating the subfield `F_q` over `F_p`.
    pub fn subfield_generator(&self, q: u64) -> Result<FfElem> {
        let a = log_p(q, self.0.p).ok_or(Error::NotPowerOfCharacteristic { q, p: self.0.p })?;
        if !self.contains_fq(q) {
            return Err(Error::MissingSubfield { q });
        }
        if a == 1 {
            return Ok(self.one());
        }
        if let Some(level) = self.level_with_order(q) {
            let mut z = vec![0u32; a as usize];
            z[1] = 1;
            return self.lift_from(&FfElem::from_slice(&z), &level);
        }
        let fp = FiniteField::prime(self.0.p as u64)?;
        let m = find_irreducible(&fp, a as usize)?;
        m.roots_in(self, 0)?
            .into_iter()
            .next()
            .ok_or(Error::MissingSubfield { q })
    }

    /// Dimension of the `F_q`-span of `elems`, computed as the `F_p`-rank of
    /// `{ω^j e}` divided by `[F_q : F_p]` for a generator `ω` of `F_q`.
    pub fn subfield_rank(&self, elems: &[FfElem], q: u64) -> Result<usize> {
        let omega = self.subfield_generator(q)?;
        let a = log_p(q, self.0.p).expect("checked") as usize;
        let mut rows = Vec::with_capacity(elems.len() * a);
        for e in elems {
            let mut v = e.clone();
            for j in 0..a {
                if j > 0 {
                    v = self.mul(&v, &omega);
                }
                rows.push(v.0.to_vec());
            }
        }
        Ok(modp::rref(&mut rows, self.0.degree, self.0.p).len() / a)
    }

    fn mul_flat(&self, a: &[u32], b: &[u32]) -> FfElem {
        let n = self.0.degree;
        let p = self.0.p;
        let mut acc = vec![0u64; 2 * n - 1];
        modp::mul_acc(&mut acc, a, b, p);
        self.reduce_acc(&mut acc)
    }

    /// Reduce an unreduced product (length ≤ 2N-1) modulo the flat modulus.
    fn reduce_acc(&self, acc: &mut [u64]) -> FfElem {
        let n = self.0.degree;
        let p = self.0.p as u64;
        for i in (n..acc.len()).rev() {
            let c = acc[i] % p;
            if c == 0 {
                continue;
            }
            for &(k, ck) in &self.0.reduction {
                let slot = &mut acc[i - n + k];
                *slot += c * ck as u64;
                if *slot > u64::MAX / 2 {
                    *slot %= p;
                }
            }
        }
        FfElem(acc[..n].iter().map(|&c| (c % p) as u32).collect())
    }
}

fn modm_neg(c: u32, p: u32) -> u32 {
    if c == 0 {
        0
    } else {
        p - c
    }
}

/// Prime factorization by trial division.
pub(crate) fn factor(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Build the flat model of `base[y]/(modulus(y))` when `base` is itself an
/// extension: find θ generating the whole field over `F_p`, record its
/// minimal polynomial and the change of basis between powers of θ and the
/// tower basis.
fn flat_model(base: &FiniteField, modulus: &[FfElem]) -> (Vec<u32>, Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let p = base.0.p;
    let d = modulus.len() - 1;
    let n = base.0.degree * d;
    let digits_of = |v: &[FfElem]| -> Vec<u32> {
        v.iter().flat_map(|c| base.tower_digits(c)).collect()
    };
    let mul_theta = |v: &[FfElem], c: &FfElem| -> Vec<FfElem> {
        // (y + c) * v with y^d = -Σ m_i y^i
        let top = v[d - 1].clone();
        let mut out = vec![base.zero(); d];
        for i in (1..d).rev() {
            out[i] = v[i - 1].clone();
        }
        for i in 0..d {
            let t = base.mul(&top, &modulus[i]);
            out[i] = base.sub(&out[i], &t);
            let s = base.mul(c, &v[i]);
            out[i] = base.add(&out[i], &s);
        }
        out
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_ab1e);
    let base_card = base.cardinality().unwrap_or(u128::MAX);
    for attempt in 0u128.. {
        let c = if attempt < base_card.min(64) {
            base.element_from_index(attempt)
        } else {
            base.random_elem(&mut rng)
        };
        let mut power = vec![base.zero(); d];
        power[0] = base.one();
        let mut cols = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            cols.push(digits_of(&power));
            power = mul_theta(&power, &c);
        }
        let t: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|k| cols[k][i]).collect()).collect();
        let Some(t_inv) = modp::invert(&t, p) else {
            continue;
        };
        let v = modp::mat_vec(&t_inv, &cols[n], p);
        let mut mu: Vec<u32> = v.iter().map(|&c| modm_neg(c, p)).collect();
        mu.push(1);
        return (mu, t, t_inv);
    }
    unreachable!("a primitive element always exists")
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.description == other.0.description
    }
}

impl Eq for FiniteField {}

impl Hash for FiniteField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.description.hash(state);
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.description)
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.description)
    }
}

impl Field for FiniteField {
    type Elem = FfElem;

    fn characteristic(&self) -> u32 {
        self.0.p
    }

    fn zero(&self) -> FfElem {
        FfElem(SmallVec::from_elem(0, self.0.degree))
    }

    fn one(&self) -> FfElem {
        let mut z = self.zero();
        z.0[0] = 1;
        z
    }

    fn is_zero(&self, a: &FfElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn is_one(&self, a: &FfElem) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let p = self.0.p;
        FfElem(a.0.iter().zip(&b.0).map(|(&x, &y)| modp::addm(x, y, p)).collect())
    }

    fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let p = self.0.p;
        FfElem(a.0.iter().zip(&b.0).map(|(&x, &y)| modp::subm(x, y, p)).collect())
    }

    fn neg(&self, a: &FfElem) -> FfElem {
        let p = self.0.p;
        FfElem(a.0.iter().map(|&x| modm_neg(x, p)).collect())
    }

    fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        if self.0.degree == 1 {
            return FfElem(smallvec::smallvec![modp::mulm(a.0[0], b.0[0], self.0.p)]);
        }
        self.mul_flat(&a.0, &b.0)
    }

    fn inv(&self, a: &FfElem) -> Result<FfElem> {
        let p = self.0.p;
        if self.0.degree == 1 {
            return modp::inv(a.0[0], p)
                .map(|v| FfElem(smallvec::smallvec![v]))
                .ok_or(Error::DivisionByZero);
        }
        let mut d = a.0.to_vec();
        modp::trim(&mut d);
        let mut r = modp::poly_inv_mod(&d, &self.0.flat_modulus, p).ok_or(Error::DivisionByZero)?;
        r.resize(self.0.degree, 0);
        Ok(FfElem::from_slice(&r))
    }

    fn from_int(&self, k: i64) -> FfElem {
        let mut z = self.zero();
        z.0[0] = k.rem_euclid(self.0.p as i64) as u32;
        z
    }

    fn contains_fq(&self, q: u64) -> bool {
        match log_p(q, self.0.p) {
            Some(k) => self.0.degree.is_multiple_of(k as usize),
            None => false,
        }
    }

    fn cardinality(&self) -> Option<u128> {
        u128::try_from(&self.0.cardinality).ok()
    }

    fn generator(&self, name: &str) -> Option<FfElem> {
        self.levels()
            .iter()
            .find(|l| l.generator_name() == Some(name))
            .and_then(|l| self.lift_from(&l.generator_elem()?, l).ok())
    }

    fn format_elem(&self, a: &FfElem) -> String {
        match &self.0.kind {
            Kind::Prime => a.0[0].to_string(),
            Kind::Extension { base, generator, .. } => {
                let coeffs = self.tower_coeffs(a);
                let mut terms = Vec::new();
                for (i, c) in coeffs.iter().enumerate().rev() {
                    if base.is_zero(c) {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => generator.clone(),
                        _ => format!("{generator}^{i}"),
                    };
                    let coeff = base.format_elem(c);
                    terms.push(if i == 0 {
                        coeff
                    } else if base.is_one(c) {
                        mono
                    } else if base.is_compound(c) {
                        format!("({coeff})*{mono}")
                    } else {
                        format!("{coeff}*{mono}")
                    });
                }
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            }
        }
    }

    fn is_compound(&self, a: &FfElem) -> bool {
        match &self.0.kind {
            Kind::Prime => false,
            Kind::Extension { base, .. } => {
                let coeffs = self.tower_coeffs(a);
                let nonzero: Vec<(usize, &FfElem)> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !base.is_zero(c))
                    .collect();
                match nonzero.as_slice() {
                    [] => false,
                    [(0, c)] => base.is_compound(c),
                    [(_, _)] => false,
                    _ => true,
                }
            }
        }
    }

    fn poly_mul(&self, a: &[FfElem], b: &[FfElem]) -> Vec<FfElem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = self.0.p;
        if self.0.degree == 1 {
            let x: Vec<u32> = a.iter().map(|c| c.0[0]).collect();
            let y: Vec<u32> = b.iter().map(|c| c.0[0]).collect();
            let mut out: Vec<FfElem> = modp::poly_mul(&x, &y, p)
                .into_iter()
                .map(|c| FfElem(smallvec::smallvec![c]))
                .collect();
            out.resize(a.len() + b.len() - 1, self.zero());
            return out;
        }
        // Accumulate unreduced element products per output slot and reduce once.
        let n = self.0.degree;
        let mut out = Vec::with_capacity(a.len() + b.len() - 1);
        let mut acc = vec![0u64; 2 * n - 1];
        for k in 0..a.len() + b.len() - 1 {
            acc.iter_mut().for_each(|s| *s = 0);
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            for i in lo..=hi {
                modp::mul_acc(&mut acc, &a[i].0, &b[k - i].0, p);
            }
            out.push(self.reduce_acc(&mut acc));
        }
        out
    }

    fn poly_divrem(&self, a: &[FfElem], b: &[FfElem]) -> Result<(Vec<FfElem>, Vec<FfElem>)> {
        let p = self.0.p;
        if self.0.degree != 1 {
            return generic_divrem(self, a, b);
        }
        let x: Vec<u32> = a.iter().map(|c| c.0[0]).collect();
        let mut y: Vec<u32> = b.iter().map(|c| c.0[0]).collect();
        modp::trim(&mut y);
        if y.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = modp::poly_divrem(&x, &y, p);
        let wrap = |v: Vec<u32>| v.into_iter().map(|c| FfElem(smallvec::smallvec![c])).collect();
        Ok((wrap(q), wrap(r)))
    }
}

fn generic_divrem(
    f: &FiniteField,
    a: &[FfElem],
    b: &[FfElem],
) -> Result<(Vec<FfElem>, Vec<FfElem>)> {
    let db = b.len() - 1;
    let lead_inv = f.inv(&b[db])?;
    let mut r = a.to_vec();
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut quot = vec![f.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if f.is_zero(&r[i]) {
            continue;
        }
        let c = f.mul(&r[i], &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            if f.is_zero(bj) {
                continue;
            }
            let t = f.mul(&c, bj);
            r[i - db + j] = f.sub(&r[i - db + j], &t);
        }
        quot[i - db] = c;
    }
    r.truncate(db);
    Ok((quot, r))
}

#[cfg(test)]
mod tests;
