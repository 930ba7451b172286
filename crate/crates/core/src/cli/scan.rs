//! Scanning random or exhaustive families of q-polynomials for non-injective
//! evaluation maps `ε_r` with `1 ≤ r ≤ q-1`.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FfElem, FiniteField};
use crate::field::Field;
use crate::linpoly::LinPoly;
use crate::rootspace::{eval_map_kernel, kernel_is_frobenius_stable, quotient_is_irreducible, Coefficients, RootSpace};

/// Candidate spaces up to this size are enumerated in full.
const EXHAUSTIVE_LIMIT: u128 = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Auto,
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanConfig {
    pub q: u64,
    pub n: usize,
    /// The coefficient field is `F_(q^ext)`.
    pub ext: usize,
    /// Number of hypothesis-satisfying instances to test.
    pub instances: usize,
    pub seed: u64,
    pub source: Source,
    pub cap_roots: u64,
    pub cap_dim: u64,
    pub jobs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RowCount {
    pub r: usize,
    pub tested: usize,
    pub injective: usize,
    pub non_injective: usize,
}

/// Everything needed to re-check a non-injective `ε_r` by hand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub field: String,
    pub q: u64,
    pub l: String,
    pub r: usize,
    pub splitting_field: String,
    pub basis: Vec<String>,
    pub provenance: String,
    pub kernel_forms: Vec<String>,
    pub kernel_vectors: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub q: u64,
    pub n: usize,
    pub field: String,
    /// "exhaustive", "sampled" (a seeded subset of an enumerated space) or "random".
    pub source: String,
    pub candidate_space: String,
    pub candidates_examined: u64,
    pub skipped_reducible: u64,
    pub skipped_qs: u64,
    pub instances_tested: usize,
    /// `r = 1, …, q+1`; the last two rows are the controls `r = q` and `r = q+1`.
    pub rows: Vec<RowCount>,
    pub certificates: Vec<Certificate>,
    /// Non-injective `ε_q`, reported rather than treated as a failure.
    pub r_equals_q_non_injective: Vec<Certificate>,
    /// Instances over `F = F_q` with `n ≥ 2` where `ε_(q+1)` came out injective.
    pub control_unexpected: usize,
    pub unstable_kernels: usize,
    pub errors: Vec<String>,
}

impl ScanSummary {
    pub fn has_counterexample(&self) -> bool {
        !self.certificates.is_empty()
    }
}

pub fn coefficient_field(q: u64, ext: usize) -> Result<FiniteField> {
    if ext == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    FiniteField::gf(q)?.extend_by_degree(ext)
}

/// The monic q-polynomial with `a_0 = index mod (|F|-1) + 1`, and the higher
/// coefficients read off the remaining base-`|F|` digits.
fn candidate(f: &FiniteField, q: u64, n: usize, index: u128) -> Result<LinPoly<FiniteField>> {
    let size = f.cardinality().expect("small field");
    let mut t = index;
    let mut c: Vec<FfElem> = Vec::with_capacity(n + 1);
    c.push(f.element_from_index(t % (size - 1) + 1));
    t /= size - 1;
    for _ in 1..n {
        c.push(f.element_from_index(t % size));
        t /= size;
    }
    c.push(f.one());
    LinPoly::new(f.clone(), q, c)
}

enum Check {
    Valid,
    Reducible,
    QsPolynomial,
}

fn check(l: &LinPoly<FiniteField>) -> Result<Check> {
    if !quotient_is_irreducible(l)? {
        return Ok(Check::Reducible);
    }
    if l.detect_qs()? != 1 {
        return Ok(Check::QsPolynomial);
    }
    Ok(Check::Valid)
}

/// Every monic q-polynomial of q-degree `n` over `f` with `L(x)/x`
/// irreducible and no `q^s`-structure for `s > 1`, in enumeration order.
pub fn enumerate_instances(f: &FiniteField, q: u64, n: usize) -> Result<Vec<LinPoly<FiniteField>>> {
    let size = f.cardinality().ok_or_else(|| Error::Unsupported("coefficient field too large".into()))?;
    let total = (size - 1)
        .checked_mul(size.checked_pow(n as u32 - 1).unwrap_or(u128::MAX))
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::CapExceeded { what: "candidate space".into(), value: format!("{size}^{n}"), cap: 1 << 24 })?;
    let mut out = Vec::new();
    for k in 0..total {
        let l = candidate(f, q, n, k)?;
        if matches!(check(&l)?, Check::Valid) {
            out.push(l);
        }
    }
    Ok(out)
}

struct InstanceResult {
    injective: Vec<bool>,
    certificates: Vec<Certificate>,
    stable: bool,
}

fn certificate(rs: &RootSpace, rep: &crate::rootspace::EvalMapReport) -> Certificate {
    let e = rs.e();
    Certificate {
        field: rs.f().to_string(),
        q: rs.q(),
        l: rs.l().to_string(),
        r: rep.r,
        splitting_field: e.to_string(),
        basis: rs.basis().iter().map(|b| e.format_elem(b)).collect(),
        provenance: rs.provenance().as_str().into(),
        kernel_forms: rep.kernel_forms(),
        kernel_vectors: rep
            .kernel
            .iter()
            .map(|v| v.iter().map(|c| rep.field.format_elem(c)).collect())
            .collect(),
    }
}

fn run_instance(l: &LinPoly<FiniteField>, cfg: &ScanConfig) -> Result<InstanceResult> {
    let rs = RootSpace::new(l, cfg.cap_roots)?;
    let q = cfg.q as usize;
    let mut injective = Vec::with_capacity(q + 1);
    let mut certificates = Vec::new();
    let mut stable = true;
    for r in 1..=q + 1 {
        let rep = eval_map_kernel(&rs, r, Coefficients::Fq, cfg.cap_dim)?;
        if !rep.injective {
            certificates.push(certificate(&rs, &rep));
            stable &= kernel_is_frobenius_stable(&rs, &rep)?;
        }
        injective.push(rep.injective);
    }
    certificates.retain(|c| c.r <= q);
    Ok(InstanceResult { injective, certificates, stable })
}

/// Pick the instances to test: every valid candidate when the space is small
/// enough to enumerate (a seeded subset if there are more than requested),
/// otherwise seeded random candidates until enough are valid.
fn choose_instances(cfg: &ScanConfig, f: &FiniteField, summary: &mut ScanSummary) -> Result<Vec<LinPoly<FiniteField>>> {
    let size = f.cardinality().ok_or_else(|| Error::Unsupported("coefficient field too large".into()))?;
    let space = (size as f64 - 1.0) * (size as f64).powi(cfg.n as i32 - 1);
    let space_exact = (size - 1).checked_mul(size.checked_pow(cfg.n as u32 - 1).unwrap_or(u128::MAX));
    summary.candidate_space = match space_exact {
        Some(s) => s.to_string(),
        None => format!("{space:e}"),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let tally = |l: &LinPoly<FiniteField>, summary: &mut ScanSummary| -> Result<bool> {
        summary.candidates_examined += 1;
        Ok(match check(l)? {
            Check::Valid => true,
            Check::Reducible => {
                summary.skipped_reducible += 1;
                false
            }
            Check::QsPolynomial => {
                summary.skipped_qs += 1;
                false
            }
        })
    };
    let enumerate = match cfg.source {
        Source::Exhaustive => true,
        Source::Random => false,
        Source::Auto => space_exact.is_some_and(|s| s <= EXHAUSTIVE_LIMIT),
    };
    if enumerate {
        let total = space_exact.filter(|&s| s <= 1 << 24).ok_or_else(|| Error::CapExceeded {
            what: "candidate space".into(),
            value: summary.candidate_space.clone(),
            cap: 1 << 24,
        })?;
        let mut valid = Vec::new();
        for k in 0..total {
            let l = candidate(f, cfg.q, cfg.n, k)?;
            if tally(&l, summary)? {
                valid.push(l);
            }
        }
        if valid.len() <= cfg.instances {
            summary.source = "exhaustive".into();
            return Ok(valid);
        }
        summary.source = "sampled".into();
        let mut pick = sample(&mut rng, valid.len(), cfg.instances).into_vec();
        pick.sort_unstable();
        return Ok(pick.into_iter().map(|i| valid[i].clone()).collect());
    }
    summary.source = "random".into();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let max_attempts = 1000 * cfg.instances as u64 + 1000;
    let mut attempts = 0u64;
    while out.len() < cfg.instances && attempts < max_attempts {
        attempts += 1;
        let mut c: Vec<FfElem> = (0..cfg.n).map(|_| f.random_elem(&mut rng)).collect();
        if f.is_zero(&c[0]) {
            continue;
        }
        c.push(f.one());
        let l = LinPoly::new(f.clone(), cfg.q, c)?;
        if !seen.insert(l.coeffs().to_vec()) {
            continue;
        }
        if tally(&l, summary)? {
            out.push(l);
        }
    }
    Ok(out)
}

/// Scan the conjecture that `ε_r` is injective for `1 ≤ r ≤ q-1` whenever
/// `L(x)/x` is irreducible over `F` and `L` is not a `q^s`-polynomial.
pub fn scan_conjecture(cfg: &ScanConfig) -> Result<ScanSummary> {
    if cfg.n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let f = coefficient_field(cfg.q, cfg.ext)?;
    let q = cfg.q as usize;
    let mut summary = ScanSummary {
        q: cfg.q,
        n: cfg.n,
        field: f.to_string(),
        source: String::new(),
        candidate_space: String::new(),
        candidates_examined: 0,
        skipped_reducible: 0,
        skipped_qs: 0,
        instances_tested: 0,
        rows: (1..=q + 1).map(|r| RowCount { r, ..Default::default() }).collect(),
        certificates: Vec::new(),
        r_equals_q_non_injective: Vec::new(),
        control_unexpected: 0,
        unstable_kernels: 0,
        errors: Vec::new(),
    };
    if cfg.instances == 0 {
        summary.source = "empty".into();
        return Ok(summary);
    }
    let instances = choose_instances(cfg, &f, &mut summary)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let results: Vec<Result<InstanceResult>> =
        pool.install(|| instances.par_iter().map(|l| run_instance(l, cfg)).collect());
    let over_fq = *f.order() == BigUint::from(cfg.q);
    for (l, res) in instances.iter().zip(results) {
        let res = match res {
            Ok(r) => r,
            Err(e @ Error::CapExceeded { .. }) => return Err(e),
            Err(e) => {
                summary.errors.push(format!("{l}: {e}"));
                continue;
            }
        };
        summary.instances_tested += 1;
        for (row, &inj) in summary.rows.iter_mut().zip(&res.injective) {
            row.tested += 1;
            if inj {
                row.injective += 1;
            } else {
                row.non_injective += 1;
            }
        }
        if over_fq && cfg.n >= 2 && res.injective[q] {
            summary.control_unexpected += 1;
        }
        summary.unstable_kernels += usize::from(!res.stable);
        for c in res.certificates {
            if c.r == q {
                summary.r_equals_q_non_injective.push(c);
            } else {
                summary.certificates.push(c);
            }
        }
    }
    Ok(summary)
}
