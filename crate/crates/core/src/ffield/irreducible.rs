use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigUint;

use super::{FfElem, FiniteField};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::upoly::Poly;

static IRREDUCIBLE_CACHE: LazyLock<Mutex<HashMap<(String, usize), Vec<FfElem>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// The first monic irreducible polynomial of degree `d` over `field`.
///
/// Candidates are ordered by their coefficient vectors read from `x^(d-1)`
/// down to the constant term, each coefficient in canonical element order,
/// so the constant term varies fastest. Candidates with zero constant term
/// are skipped for `d > 1`.
pub fn find_irreducible(field: &FiniteField, d: usize) -> Result<Poly<FiniteField>> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree 0 has no irreducible polynomial".into()));
    }
    if d == 1 {
        return Ok(Poly::x(field.clone()));
    }
    let key = (field.description().to_string(), d);
    if let Some(c) = IRREDUCIBLE_CACHE.lock().unwrap().get(&key) {
        return Ok(Poly::new(field.clone(), c.clone()));
    }
    let size = field.cardinality().unwrap_or(u128::MAX);
    // Per-coefficient element indices, constant term first.
    let mut idx = vec![0u128; d];
    idx[0] = 1;
    loop {
        let mut coeffs: Vec<FfElem> = idx.iter().map(|&k| field.element_from_index(k)).collect();
        coeffs.push(field.one());
        let f = Poly::new(field.clone(), coeffs);
        if has_no_small_factor(&f)? {
            IRREDUCIBLE_CACHE
                .lock()
                .unwrap()
                .insert(key, f.coeffs().to_vec());
            return Ok(f);
        }
        // Increment, constant term fastest, skipping zero constants.
        let mut i = 0;
        loop {
            idx[i] += 1;
            if idx[i] < size {
                break;
            }
            idx[i] = 0;
            i += 1;
            if i == d {
                unreachable!("irreducible polynomials of every degree exist");
            }
        }
        if idx[0] == 0 {
            idx[0] = 1;
        }
    }
}

/// Distinct-degree test that stops at the first factor found.
fn has_no_small_factor(f: &Poly<FiniteField>) -> Result<bool> {
    let field = f.field();
    let d = f.degree().unwrap_or(0);
    let order: BigUint = field.order().clone();
    let x = Poly::x(field.clone());
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = h.pow_mod_big(&order, f)?;
        let g = (&h - &x).gcd(f)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}
