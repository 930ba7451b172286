//! The built-in verification suite behind `verify-suite`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ffield::{FfElem, FiniteField};
use crate::field::Field;
use crate::linearize::{min_affine_multiple, min_linearized_multiple, root_span_dim};
use crate::ratfun::RationalFunctionField;
use crate::rootspace::{
    direct_sum_check, eval_map_kernel, q_plus_one_witness, Coefficients, Provenance, RootSpace, DEFAULT_CAP_DIM,
    DEFAULT_CAP_ROOTS,
};
use crate::symmod::{gl2_generators, spin_exhaustive, Verdict};
use crate::text::{parse_lin, parse_poly};
use crate::upoly::Poly;

use super::scan::{enumerate_instances, scan_conjecture, ScanConfig, Source};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((passed, detail)) => Check { name: name.into(), passed, detail },
        Err(e) => Check { name: name.into(), passed: false, detail: format!("error: {e}") },
    }
}

fn small_linearization() -> Result<(bool, String)> {
    let f2 = FiniteField::prime(2)?;
    let rep = min_linearized_multiple(&parse_poly(&f2, "x^2 + x + 1", "x")?, 2)?;
    Ok((rep.d == 2 && rep.l.to_string() == "x^4 + x", format!("L = {}", rep.l)))
}

fn degree_twelve_example() -> Result<(bool, String)> {
    let k = RationalFunctionField::new(FiniteField::prime(2)?);
    let f = parse_poly(&k, "x^24 + x + t", "x")?;
    let lin = min_linearized_multiple(&f, 2)?;
    let aff = min_affine_multiple(&f, 2)?;
    Ok((lin.d == 12 && aff.d == 11, format!("d = {}, affine d = {}", lin.d, aff.d)))
}

fn four_polynomial_kernel() -> Result<(bool, String)> {
    let f2 = FiniteField::prime(2)?;
    let rs = RootSpace::new(&parse_lin(&f2, "x^4 + x", 2)?, DEFAULT_CAP_ROOTS)?;
    let rep = eval_map_kernel(&rs, 2, Coefficients::Fq, DEFAULT_CAP_DIM)?;
    let one = rep.field.one();
    let ok = !rep.injective && rep.kernel_contains(&[one.clone(), one.clone(), one]);
    Ok((ok, format!("kernel = {:?}", rep.kernel_forms())))
}

/// `ε_r` injective for `r < q`, `ε_(q+1)` not, the explicit witness in its
/// kernel, and the images for `r < q` forming a direct sum.
fn injectivity_over_fq(q: u64, n: usize) -> Result<(bool, String)> {
    let f = FiniteField::gf(q)?;
    let instances = enumerate_instances(&f, q, n)?;
    let mut bad = Vec::new();
    for l in &instances {
        let rs = RootSpace::new(l, DEFAULT_CAP_ROOTS)?;
        let mut ok = rs.provenance() == Provenance::Special;
        for r in 1..q as usize {
            ok &= eval_map_kernel(&rs, r, Coefficients::Fq, DEFAULT_CAP_DIM)?.injective;
        }
        let top = eval_map_kernel(&rs, q as usize + 1, Coefficients::Fq, DEFAULT_CAP_DIM)?;
        let (_, w) = q_plus_one_witness(&rs)?;
        ok &= !top.injective && top.kernel_contains(&w);
        ok &= direct_sum_check(&rs)?.is_direct;
        if !ok {
            bad.push(l.to_string());
        }
    }
    Ok((bad.is_empty(), format!("{} instances, failures: {bad:?}", instances.len())))
}

fn kernel_method_matches_root_span(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let f = FiniteField::prime(p)?;
        let mut done = 0;
        while done < 20 {
            let deg = rng.gen_range(1..=8);
            let mut c: Vec<FfElem> = (0..deg).map(|_| f.random_elem(&mut rng)).collect();
            c.push(f.one());
            let g = Poly::new(f.clone(), c);
            if !g.is_squarefree()? {
                continue;
            }
            done += 1;
            if min_linearized_multiple(&g, p)?.d != root_span_dim(&g, p)? {
                bad.push(g.to_string());
            }
        }
    }
    Ok((bad.is_empty(), format!("40 polynomials, mismatches: {bad:?}")))
}

fn doty_probe() -> Result<(bool, String)> {
    let mut detail = Vec::new();
    let mut ok = true;
    for p in [2u64, 3] {
        let fp = FiniteField::prime(p)?;
        let gens = gl2_generators(&fp)?;
        for r in 1..p as usize {
            let basis = crate::symmod::MonomialBasis::new(2, r)?;
            let acts = gens
                .iter()
                .map(|g| crate::symmod::action_matrix(g, &basis))
                .collect::<Result<Vec<_>>>()?;
            let rep = spin_exhaustive(&fp, &acts, basis.len())?;
            let irreducible = rep.verdict == Verdict::Irreducible;
            ok &= irreducible;
            detail.push(format!("p={p} r={r}: {}", if irreducible { "irreducible" } else { "not certified" }));
        }
    }
    Ok((ok, detail.join("; ")))
}

fn small_scan(seed: u64, jobs: usize) -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for (q, n, ext) in [(2u64, 2usize, 1usize), (3, 2, 1), (2, 2, 2)] {
        let s = scan_conjecture(&ScanConfig {
            q,
            n,
            ext,
            instances: 50,
            seed,
            source: Source::Auto,
            cap_roots: DEFAULT_CAP_ROOTS,
            cap_dim: DEFAULT_CAP_DIM,
            jobs,
        })?;
        ok &= !s.has_counterexample() && s.errors.is_empty() && s.unstable_kernels == 0;
        detail.push(format!("q={q} n={n} F={}: {} instances, {} certificates", s.field, s.instances_tested, s.certificates.len()));
    }
    Ok((ok, detail.join("; ")))
}

pub fn run_suite(full: bool, seed: u64, jobs: usize) -> Vec<Check> {
    let mut out = vec![
        check("minimal linearized multiple of x^2 + x + 1", small_linearization()),
        check("x^4 + x: degree-2 kernel", four_polynomial_kernel()),
    ];
    for (q, n) in [(2, 2), (2, 3), (3, 2)] {
        out.push(check(&format!("injectivity and direct sum, q={q} n={n}"), injectivity_over_fq(q, n)));
    }
    out.push(check("kernel method against root span", kernel_method_matches_root_span(seed)));
    out.push(check("GL(2,p) spin probe", doty_probe()));
    out.push(check("conjecture scan, small cases", small_scan(seed, jobs)));
    if full {
        out.push(check("x^24 + x + t over F_2(t)", degree_twelve_example()));
    }
    out
}
