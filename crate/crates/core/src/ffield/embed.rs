use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use super::{FfElem, FiniteField};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::upoly::Poly;

/// Image of the flat generator of `src` inside `dst`, keyed by descriptions.
static EMBED_CACHE: LazyLock<Mutex<HashMap<(String, String), FfElem>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Image of `a ∈ src` under a fixed embedding `src → dst`.
///
/// When `src` is a level of the tower of `dst` this is the tower inclusion.
/// Otherwise the flat generator of `src` is sent to the canonical-first root
/// of its minimal polynomial in `dst`; that choice is computed once per pair.
pub fn embed(a: &FfElem, src: &FiniteField, dst: &FiniteField) -> Result<FfElem> {
    if src == dst {
        return Ok(a.clone());
    }
    if src.p() != dst.p() {
        return Err(Error::ContextMismatch(format!(
            "{src} and {dst} have different characteristic"
        )));
    }
    if !dst.degree().is_multiple_of(src.degree()) {
        return Err(Error::InvalidArgument(format!(
            "no embedding of {src} into {dst}: degree {} does not divide {}",
            src.degree(),
            dst.degree()
        )));
    }
    if src.is_level_of(dst) {
        return dst.lift_from(a, src);
    }
    let rho = generator_image(src, dst)?;
    let mut acc = dst.zero();
    for &c in a.digits().iter().rev() {
        acc = dst.mul(&acc, &rho);
        acc = dst.add(&acc, &dst.from_int(c as i64));
    }
    Ok(acc)
}

fn generator_image(src: &FiniteField, dst: &FiniteField) -> Result<FfElem> {
    let key = (src.description().to_string(), dst.description().to_string());
    if let Some(r) = EMBED_CACHE.lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let fp = FiniteField::prime(src.p() as u64)?;
    let mu = Poly::new(
        fp.clone(),
        src.0.flat_modulus.iter().map(|&c| fp.from_int(c as i64)).collect(),
    );
    let roots = mu.roots_in(dst, 0)?;
    let rho = roots
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidArgument(format!("{src} does not embed in {dst}")))?;
    Ok(EMBED_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(rho)
        .clone())
}
