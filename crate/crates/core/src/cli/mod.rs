//! Command-line front end. Every subcommand emits one or more [`Report`]s,
//! as JSON lines or, with `--pretty`, as indented text.

mod report;
pub mod scan;
pub mod suite;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ffield::{FfElem, FiniteField};
use crate::field::Field;
use crate::linearize::{min_affine_multiple, min_linearized_multiple};
use crate::linpoly::{moore_vanishing, LinPoly};
use crate::rootspace::{
    associate_root_orders, direct_sum_check, eval_map_kernel, min_pair_dependence, quotient_is_irreducible,
    splitting_degree, Coefficients, RootSpace,
};
use crate::symmod::symmetric_power_witness;
use crate::text::{parse_field, parse_lin, parse_poly, AnyField};

pub use report::{Report, Timing, VERSION};
pub use scan::{scan_conjecture, ScanConfig, ScanSummary, Source};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FOUND: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "linpoly", version, about = "Linearized polynomials, root spaces and symmetric-power evaluation maps")]
pub struct Cli {
    /// Coefficient field, e.g. "GF(2)", "GF(3^2)", "GF(2)(t)".
    #[arg(long, global = true)]
    field: Option<String>,
    /// An ordinary polynomial in x.
    #[arg(long, global = true)]
    poly: Option<String>,
    /// A q-polynomial in x.
    #[arg(long, global = true)]
    lin: Option<String>,
    /// Defaults to the characteristic.
    #[arg(long, global = true)]
    q: Option<u64>,
    #[arg(long, global = true)]
    r: Option<usize>,
    #[arg(long, global = true, env = "LINPOLY_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = crate::rootspace::DEFAULT_CAP_ROOTS)]
    cap_roots: u64,
    #[arg(long, global = true, default_value_t = crate::rootspace::DEFAULT_CAP_DIM)]
    cap_dim: u64,
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for scans; defaults to the number of CPUs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CoeffArg {
    Fq,
    F,
}

impl From<CoeffArg> for Coefficients {
    fn from(k: CoeffArg) -> Self {
        match k {
            CoeffArg::Fq => Coefficients::Fq,
            CoeffArg::F => Coefficients::F,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Conjecture {
    C1,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal q-linearized multiple of --poly.
    Linearize,
    /// Minimal affine q-polynomial multiple of --poly.
    Affine,
    /// The polynomial P with P(x^r) = L(x)/x.
    Projective,
    /// The conventional q-associate of --lin and the orders of its roots.
    Associate,
    /// The q-polynomial vanishing on the F_q-span of --basis.
    Moore {
        /// Comma-separated elements of the field.
        #[arg(long)]
        basis: String,
    },
    /// Kernel of the evaluation map on degree-r forms at a root-space basis.
    Evalmap {
        #[arg(long, value_enum, default_value = "fq")]
        k: CoeffArg,
    },
    /// Least m with a K-dependence among α^i β^(m-i).
    Pairdep {
        #[arg(long, value_enum, default_value = "fq")]
        k: CoeffArg,
        #[arg(long, default_value_t = 64)]
        cap: usize,
        /// A root of L: "v<i>" for the i-th basis vector, or an element of the splitting field.
        #[arg(long, default_value = "v1")]
        alpha: String,
        #[arg(long, default_value = "v2")]
        beta: String,
    },
    /// Dimensions of the images of ε_1, …, ε_(q-1) and of their sum.
    Directsum,
    /// Monomial values at the basis against the roots of the linearized multiple of P.
    Symwitness,
    /// Scan random or exhaustive instances for counterexamples.
    Scan {
        #[arg(long, value_enum, default_value = "c1")]
        conjecture: Conjecture,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Coefficients come from F_(q^ext).
        #[arg(long, default_value_t = 1)]
        ext: usize,
        #[arg(long, value_enum, default_value = "auto")]
        source: SourceArg,
    },
    /// Run the built-in verification checks.
    VerifySuite {
        /// Include the slow checks.
        #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
        full: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Auto,
    Exhaustive,
    Random,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Auto => Source::Auto,
            SourceArg::Exhaustive => Source::Exhaustive,
            SourceArg::Random => Source::Random,
        }
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = if code == EXIT_OK { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    let pretty = cli.pretty;
    let mut emit = |r: &Report| {
        let _ = if pretty {
            write!(out, "{}", r.to_pretty())
        } else {
            writeln!(out, "{}", r.to_json_line())
        };
    };
    match dispatch(&cli, &mut emit) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::CapExceeded { .. } => EXIT_CAP,
                _ => EXIT_INPUT,
            }
        }
    }
}

/// Attach the offending text and a caret to parse errors.
fn annotate(text: &str, e: Error) -> Error {
    match e {
        Error::Parse { pos, msg } => {
            let col = text[..pos.min(text.len())].chars().count();
            Error::Parse { pos, msg: format!("{msg}\n  {text}\n  {}^", " ".repeat(col)) }
        }
        e => e,
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    inputs: BTreeMap<String, String>,
}

impl<'a> Ctx<'a> {
    fn required(&mut self, name: &str, v: &'a Option<String>) -> Result<&'a str> {
        let s = v.as_deref().ok_or_else(|| Error::InvalidArgument(format!("--{name} is required")))?;
        self.inputs.insert(name.into(), s.into());
        Ok(s)
    }

    fn field(&mut self) -> Result<AnyField> {
        let text = self.required("field", &self.cli.field)?;
        parse_field(text).map_err(|e| annotate(text, e))
    }

    fn finite_field(&mut self) -> Result<FiniteField> {
        match self.field()? {
            AnyField::Finite(f) => Ok(f),
            AnyField::Rational(k) => {
                Err(Error::Unsupported(format!("unsupported field {k}: this command needs a finite field")))
            }
        }
    }

    fn q(&mut self, p: u32) -> u64 {
        let q = self.cli.q.unwrap_or(p as u64);
        self.inputs.insert("q".into(), q.to_string());
        q
    }

    fn r(&mut self) -> Result<usize> {
        let r = self.cli.r.ok_or_else(|| Error::InvalidArgument("--r is required".into()))?;
        self.inputs.insert("r".into(), r.to_string());
        Ok(r)
    }

    fn poly<F: Field>(&mut self, k: &F) -> Result<crate::upoly::Poly<F>> {
        let text = self.required("poly", &self.cli.poly)?;
        parse_poly(k, text, "x").map_err(|e| annotate(text, e))
    }

    fn lin<F: Field>(&mut self, k: &F, q: u64) -> Result<LinPoly<F>> {
        let text = self.required("lin", &self.cli.lin)?;
        parse_lin(k, text, q).map_err(|e| annotate(text, e))
    }

    fn caps(&mut self) {
        self.inputs.insert("cap-roots".into(), self.cli.cap_roots.to_string());
        self.inputs.insert("cap-dim".into(), self.cli.cap_dim.to_string());
    }

    fn set(&mut self, k: &str, v: impl ToString) {
        self.inputs.insert(k.into(), v.to_string());
    }
}

fn characteristic(f: &AnyField) -> u32 {
    match f {
        AnyField::Finite(k) => k.characteristic(),
        AnyField::Rational(k) => k.characteristic(),
    }
}

fn elems<F: Field>(k: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|a| k.format_elem(a)).collect()
}

fn parse_elem(k: &FiniteField, text: &str) -> Result<FfElem> {
    let p = parse_poly(k, text, "x").map_err(|e| annotate(text, e))?;
    match p.degree() {
        None | Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(Error::InvalidArgument(format!("'{text}' is not a field element"))),
    }
}

fn linearize_out<F: Field>(ctx: &mut Ctx, k: &F, q: u64) -> Result<Value> {
    let f = ctx.poly(k)?;
    let rep = min_linearized_multiple(&f, q)?;
    Ok(json!({
        "d": rep.d,
        "l": rep.l.to_string(),
        "nonzero_terms": rep.l.coeffs().iter().filter(|a| !k.is_zero(a)).count(),
        "kernel_vector": elems(k, &rep.kernel_vector),
        "residues": rep.residues,
        "certificate_rank": rep.certificate_rank,
    }))
}

fn affine_out<F: Field>(ctx: &mut Ctx, k: &F, q: u64) -> Result<Value> {
    let f = ctx.poly(k)?;
    let rep = min_affine_multiple(&f, q)?;
    Ok(json!({
        "d": rep.d,
        "l": rep.l.to_string(),
        "c": k.format_elem(&rep.c),
        "kernel_vector": elems(k, &rep.kernel_vector),
        "residues": rep.residues,
    }))
}

fn projective_out<F: Field>(ctx: &mut Ctx, k: &F, q: u64) -> Result<Value> {
    let l = ctx.lin(k, q)?;
    let r = ctx.r()?;
    let p = l.projective_extract(r as u64)?;
    Ok(json!({ "p": p.to_string(), "degree": p.degree() }))
}

fn associate_out<F: Field>(ctx: &mut Ctx, k: &F, q: u64) -> Result<(LinPoly<F>, Value)> {
    let l = ctx.lin(k, q)?;
    let ell = l.q_associate();
    let v = json!({
        "associate": ell.to_string(),
        "q_degree": l.q_degree(),
        "qs": if l.q_degree() == 0 { Value::Null } else { json!(l.detect_qs()?) },
        "gap_index": l.gap_index(),
    });
    Ok((l, v))
}

fn dispatch(cli: &Cli, emit: &mut dyn FnMut(&Report)) -> Result<i32> {
    let start = Instant::now();
    let mut ctx = Ctx { cli, inputs: BTreeMap::new() };
    let (name, outputs) = match &cli.command {
        Command::Linearize | Command::Affine | Command::Projective => {
            let field = ctx.field()?;
            let q = ctx.q(characteristic(&field));
            let out = match (&cli.command, &field) {
                (Command::Linearize, AnyField::Finite(k)) => linearize_out(&mut ctx, k, q)?,
                (Command::Linearize, AnyField::Rational(k)) => linearize_out(&mut ctx, k, q)?,
                (Command::Affine, AnyField::Finite(k)) => affine_out(&mut ctx, k, q)?,
                (Command::Affine, AnyField::Rational(k)) => affine_out(&mut ctx, k, q)?,
                (_, AnyField::Finite(k)) => projective_out(&mut ctx, k, q)?,
                (_, AnyField::Rational(k)) => projective_out(&mut ctx, k, q)?,
            };
            let name = match cli.command {
                Command::Linearize => "linearize",
                Command::Affine => "affine",
                _ => "projective",
            };
            (name, out)
        }
        Command::Associate => {
            let field = ctx.field()?;
            let q = ctx.q(characteristic(&field));
            let out = match &field {
                AnyField::Rational(k) => associate_out(&mut ctx, k, q)?.1,
                AnyField::Finite(k) => {
                    let (l, mut v) = associate_out(&mut ctx, k, q)?;
                    let ell = l.q_associate();
                    let m = v.as_object_mut().expect("object");
                    m.insert("associate_irreducible".into(), json!(ell.degree().is_some_and(|d| d > 0) && ell.is_irreducible()?));
                    if l.q_degree() > 0 && !k.is_zero(&l.coeff(0)) {
                        m.insert("quotient_irreducible".into(), json!(quotient_is_irreducible(&l)?));
                        m.insert("splitting_degree".into(), json!(splitting_degree(&l)?));
                        let orders = associate_root_orders(&l)?;
                        m.insert("root_orders".into(), json!(orders.iter().map(|o| o.to_string()).collect::<Vec<_>>()));
                    }
                    v
                }
            };
            ("associate", out)
        }
        Command::Moore { basis } => {
            let f = ctx.finite_field()?;
            let q = ctx.q(f.characteristic());
            ctx.set("basis", basis);
            let b = basis
                .split(',')
                .map(|t| parse_elem(&f, t.trim()))
                .collect::<Result<Vec<_>>>()?;
            let l = moore_vanishing(&f, &b, q)?;
            ("moore", json!({ "l": l.to_string(), "q_degree": l.q_degree() }))
        }
        Command::Evalmap { k } => {
            let f = ctx.finite_field()?;
            let q = ctx.q(f.characteristic());
            let l = ctx.lin(&f, q)?;
            let r = ctx.r()?;
            ctx.set("k", if *k == CoeffArg::Fq { "fq" } else { "f" });
            ctx.caps();
            let rs = RootSpace::new(&l, cli.cap_roots)?;
            let rep = eval_map_kernel(&rs, r, (*k).into(), cli.cap_dim)?;
            let e = rs.e();
            (
                "evalmap",
                json!({
                    "n": rep.n,
                    "r": rep.r,
                    "k": rep.k.as_str(),
                    "coefficient_field": rep.field.to_string(),
                    "splitting_field": e.to_string(),
                    "splitting_degree": rs.d(),
                    "basis": elems(e, rs.basis()),
                    "provenance": rep.provenance.as_str(),
                    "forms": rep.monomials.len(),
                    "rank": rep.rank,
                    "injective": rep.injective,
                    "kernel": rep.kernel_forms(),
                }),
            )
        }
        Command::Pairdep { k, cap, alpha, beta } => {
            let f = ctx.finite_field()?;
            let q = ctx.q(f.characteristic());
            let l = ctx.lin(&f, q)?;
            ctx.set("k", if *k == CoeffArg::Fq { "fq" } else { "f" });
            ctx.set("cap", cap);
            ctx.set("alpha", alpha);
            ctx.set("beta", beta);
            ctx.caps();
            let rs = RootSpace::new(&l, cli.cap_roots)?;
            let pick = |t: &str| -> Result<FfElem> {
                if let Some(i) = t.strip_prefix('v').and_then(|s| s.parse::<usize>().ok()) {
                    return rs
                        .basis()
                        .get(i.wrapping_sub(1))
                        .cloned()
                        .ok_or_else(|| Error::InvalidArgument(format!("basis has no vector {t}")));
                }
                parse_elem(rs.e(), t)
            };
            let (a, b) = (pick(alpha)?, pick(beta)?);
            let rep = min_pair_dependence(&rs, &a, &b, (*k).into(), *cap)?;
            let e = rs.e();
            (
                "pairdep",
                json!({
                    "alpha": e.format_elem(&rep.alpha),
                    "beta": e.format_elem(&rep.beta),
                    "k": rep.k.as_str(),
                    "m": rep.m,
                    "gamma": e.format_elem(&rep.gamma),
                    "gamma_degree": rep.gamma_degree,
                    "gap_index": rep.gap_index,
                    "bound": rep.bound.map(|b| b.to_string()),
                    "hypotheses_met": rep.hypotheses_met,
                    "bound_holds": rep.bound_holds(),
                }),
            )
        }
        Command::Directsum => {
            let f = ctx.finite_field()?;
            let q = ctx.q(f.characteristic());
            let l = ctx.lin(&f, q)?;
            ctx.caps();
            let rs = RootSpace::new(&l, cli.cap_roots)?;
            let rep = direct_sum_check(&rs)?;
            (
                "directsum",
                json!({
                    "dims": rep.dims,
                    "total": rep.total,
                    "expected": rep.expected.to_string(),
                    "is_direct": rep.is_direct,
                }),
            )
        }
        Command::Symwitness => {
            let f = ctx.finite_field()?;
            let q = ctx.q(f.characteristic());
            let l = ctx.lin(&f, q)?;
            let r = ctx.r()?;
            ctx.caps();
            let rep = symmetric_power_witness(&l, r, cli.cap_roots)?;
            (
                "symwitness",
                json!({
                    "projective": rep.projective.to_string(),
                    "l_p": rep.l_p.to_string(),
                    "lp_dim": rep.lp_dim,
                    "image_rank": rep.image_rank,
                    "hom_dim": rep.hom_dim.to_string(),
                    "injective": rep.injective,
                    "monomial_checks": rep.monomial_checks.iter().map(|(m, ok)| json!([m, ok])).collect::<Vec<_>>(),
                    "in_power_span": rep.in_power_span,
                    "consistent": rep.consistent(),
                }),
            )
        }
        Command::Scan { conjecture: _, n, instances, ext, source } => {
            let q = cli.q.ok_or_else(|| Error::InvalidArgument("--q is required".into()))?;
            ctx.set("conjecture", "c1");
            ctx.set("q", q);
            ctx.set("n", n);
            ctx.set("instances", instances);
            ctx.set("ext", ext);
            ctx.set("source", format!("{source:?}").to_lowercase());
            ctx.caps();
            let cfg = ScanConfig {
                q,
                n: *n,
                ext: *ext,
                instances: *instances,
                seed: cli.seed,
                source: (*source).into(),
                cap_roots: cli.cap_roots,
                cap_dim: cli.cap_dim,
                jobs: jobs(cli.jobs),
            };
            let summary = scan_conjecture(&cfg)?;
            let ms = start.elapsed().as_millis() as u64;
            emit(&Report::new("scan", ctx.inputs.clone(), serde_json::to_value(&summary).expect("serializes"), cli.seed, ms));
            for c in &summary.certificates {
                let v = serde_json::to_value(c).expect("serializes");
                emit(&Report::new("scan-counterexample", ctx.inputs.clone(), v, cli.seed, ms));
            }
            return Ok(if summary.has_counterexample() { EXIT_FOUND } else { EXIT_OK });
        }
        Command::VerifySuite { full } => {
            ctx.set("full", full);
            let mut failed = 0;
            let mut total = 0;
            for check in suite::run_suite(*full, cli.seed, jobs(cli.jobs)) {
                total += 1;
                failed += usize::from(!check.passed);
                let ms = start.elapsed().as_millis() as u64;
                emit(&Report::new("verify-suite", ctx.inputs.clone(), serde_json::to_value(&check).expect("serializes"), cli.seed, ms));
            }
            let ms = start.elapsed().as_millis() as u64;
            let v = json!({ "checks": total, "failed": failed, "passed": failed == 0 });
            emit(&Report::new("verify-suite-summary", ctx.inputs.clone(), v, cli.seed, ms));
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_FOUND });
        }
    };
    let ms = start.elapsed().as_millis() as u64;
    emit(&Report::new(name, ctx.inputs, outputs, cli.seed, ms));
    Ok(EXIT_OK)
}

fn jobs(j: Option<usize>) -> usize {
    j.filter(|&j| j > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
