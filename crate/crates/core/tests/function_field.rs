use linpoly::linearize::{min_affine_multiple, min_linearized_multiple};
use linpoly::{Field, FiniteField, Poly, RationalFunctionField};

/// x^24 + x + t over F_2(t).
fn trinomial() -> (RationalFunctionField, Poly<RationalFunctionField>) {
    let k = RationalFunctionField::new(FiniteField::prime(2).unwrap());
    let mut c = vec![k.zero(); 25];
    c[0] = k.t();
    c[1] = k.one();
    c[24] = k.one();
    (k.clone(), Poly::new(k, c))
}

#[test]
fn trinomial_linearizes_at_twelve() {
    let (_, f) = trinomial();
    let rep = min_linearized_multiple(&f, 2).unwrap();
    assert_eq!(rep.d, 12);
    assert_eq!(
        rep.l.to_string(),
        "x^4096 + (t^24 + t)*x^2048 + t^128*x^1024 + (t^88 + t^65)*x^512 + t^16*x^32 \
         + t^9*x^16 + (t^40 + t^17)*x^8 + x^2 + (t^24 + t)*x"
    );
    assert_eq!(rep.certificate_rank, 12);
    assert!(rep.l.to_poly().unwrap().rem(&f).unwrap().is_zero());
}

#[test]
fn trinomial_affine_degree_is_eleven() {
    let (k, f) = trinomial();
    let rep = min_affine_multiple(&f, 2).unwrap();
    assert_eq!(rep.d, 11);
    let mut lc = rep.l.to_poly().unwrap();
    lc = &lc + &Poly::constant(k, rep.c.clone());
    assert!(lc.rem(&f).unwrap().is_zero());
}
