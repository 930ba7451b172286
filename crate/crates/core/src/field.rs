//! The coefficient-field abstraction shared by polynomials, matrices and
//! q-polynomials.
//!
//! Fields here are runtime objects (a prime, a tower of extensions, a field of
//! rational functions), so elements cannot carry their own arithmetic the way
//! `f64` does. Instead every operation goes through the field handle, in the
//! style of a ring store: `field.mul(&a, &b)`.

use std::fmt;
use std::hash::Hash;

use crate::error::Result;

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn characteristic(&self) -> u32;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn from_int(&self, k: i64) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
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

    /// Whether `F_q` is a subfield.
    fn contains_fq(&self, q: u64) -> bool;

    /// Number of elements, when finite and representable.
    fn cardinality(&self) -> Option<u128>;

    /// Whether elimination should use fraction-free (Bareiss) updates.
    fn fraction_free(&self) -> bool {
        false
    }

    /// Resolve a named constant such as a tower generator `g` or the
    /// function-field variable `t`.
    fn generator(&self, name: &str) -> Option<Self::Elem>;

    fn format_elem(&self, a: &Self::Elem) -> String;

    /// True when the printed element needs parentheses as a coefficient.
    fn is_compound(&self, a: &Self::Elem) -> bool {
        let s = self.format_elem(a);
        s.contains(' ') || s.contains('/')
    }

    /// Product of two dense coefficient slices (constant term first).
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &t);
            }
        }
        out
    }

    /// Remainder of `a` modulo the nonzero slice `b` (no trailing zeros in `b`).
    fn poly_rem(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Result<Vec<Self::Elem>> {
        Ok(self.poly_divrem(a, b)?.1)
    }

    /// Quotient and remainder of `a` by the nonzero slice `b`.
    fn poly_divrem(
        &self,
        a: &[Self::Elem],
        b: &[Self::Elem],
    ) -> Result<(Vec<Self::Elem>, Vec<Self::Elem>)> {
        let db = b.len() - 1;
        let lead_inv = self.inv(&b[db])?;
        let mut r = a.to_vec();
        if r.len() <= db {
            return Ok((Vec::new(), r));
        }
        let mut quot = vec![self.zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            if self.is_zero(&r[i]) {
                continue;
            }
            let c = self.mul(&r[i], &lead_inv);
            for (j, bj) in b.iter().enumerate() {
                let t = self.mul(&c, bj);
                r[i - db + j] = self.sub(&r[i - db + j], &t);
            }
            quot[i - db] = c;
        }
        r.truncate(db);
        Ok((quot, r))
    }
}
