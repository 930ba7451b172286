use proptest::prelude::*;
use rand::SeedableRng;

use super::*;

fn f4_tower() -> FiniteField {
    let f2 = FiniteField::prime(2).unwrap();
    let m = Poly::new(f2.clone(), vec![f2.one(), f2.one(), f2.one()]);
    f2.extension(&m, "g").unwrap()
}

/// `F_16` as `F_4[h]/(h^2 + h + g)`.
fn f16_tower() -> FiniteField {
    let f4 = f4_tower();
    let g = f4.generator("g").unwrap();
    let m = Poly::new(f4.clone(), vec![g, f4.one(), f4.one()]);
    f4.extension(&m, "h").unwrap()
}

#[test]
fn arithmetic_examples() {
    let f4 = f4_tower();
    let g = f4.generator("g").unwrap();
    let g1 = f4.add(&g, &f4.one());
    assert!(f4.is_one(&f4.mul(&g, &g1)));
    assert_eq!(f4.mul(&g, &f4.one()), g);
    let f3 = FiniteField::prime(3).unwrap();
    assert_eq!(f3.add(&f3.from_int(2), &f3.from_int(2)), f3.one());
    assert_eq!(f4.inv(&f4.zero()), Err(Error::DivisionByZero));
    assert_eq!(f4.div(&g, &f4.zero()), Err(Error::DivisionByZero));
}

#[test]
fn identities_have_canonical_encodings() {
    let f = f16_tower();
    assert!(f.zero().digits().iter().all(|&c| c == 0));
    assert_eq!(f.one().digits()[0], 1);
    assert_eq!(f.tower_digits(&f.one()), vec![1, 0, 0, 0]);
    assert_eq!(f.zero().digits().len(), 4);
}

#[test]
fn frobenius_examples() {
    let f4 = f4_tower();
    let g = f4.generator("g").unwrap();
    assert_eq!(f4.frobenius_q(&g, 2).unwrap(), f4.add(&g, &f4.one()));
    assert_eq!(f4.frobenius_q(&f4.one(), 2).unwrap(), f4.one());
    assert_eq!(f4.frobenius_q(&g, 4).unwrap(), g);
    assert_eq!(
        f4.frobenius_q(&g, 3),
        Err(Error::NotPowerOfCharacteristic { q: 3, p: 2 })
    );
}

#[test]
fn find_irreducible_examples() {
    let f2 = FiniteField::prime(2).unwrap();
    let f3 = FiniteField::prime(3).unwrap();
    assert_eq!(find_irreducible(&f2, 1).unwrap().to_string(), "x");
    assert_eq!(find_irreducible(&f2, 2).unwrap().to_string(), "x^2 + x + 1");
    assert_eq!(find_irreducible(&f3, 2).unwrap().to_string(), "x^2 + 1");
    assert_eq!(find_irreducible(&f2, 3).unwrap().to_string(), "x^3 + x + 1");
}

/// The deterministic choice is the first candidate accepted by an
/// exhaustive rootless-and-Rabin scan.
#[test]
fn find_irreducible_is_first_in_order() {
    for (p, d) in [(2u64, 4usize), (3, 3), (5, 2), (2, 6)] {
        let fp = FiniteField::prime(p).unwrap();
        let found = find_irreducible(&fp, d).unwrap();
        assert!(found.is_irreducible().unwrap());
        let mut first = None;
        for k in 0..(p as u128).pow(d as u32) {
            let mut c: Vec<FfElem> = (0..d)
                .map(|i| fp.from_int(((k / (p as u128).pow(i as u32)) % p as u128) as i64))
                .collect();
            c.push(fp.one());
            let cand = Poly::new(fp.clone(), c);
            if cand.is_irreducible().unwrap() {
                first = Some(cand);
                break;
            }
        }
        assert_eq!(found, first.unwrap());
    }
    let f4 = f4_tower();
    let m = find_irreducible(&f4, 2).unwrap();
    assert!(m.is_irreducible().unwrap());
    assert_eq!(m.to_string_in("y"), "y^2 + y + g");
}

#[test]
fn canonical_order_of_f4() {
    let f4 = f4_tower();
    let names: Vec<String> = f4.elements().unwrap().iter().map(|a| f4.format_elem(a)).collect();
    assert_eq!(names, ["0", "1", "g", "g + 1"]);
}

#[test]
fn printing_of_tower_elements() {
    let f16 = f16_tower();
    let g = f16.generator("g").unwrap();
    let h = f16.generator("h").unwrap();
    let a = f16.add(&f16.mul(&g, &h), &f16.one());
    assert_eq!(f16.format_elem(&a), "g*h + 1");
    let b = f16.add(&f16.mul(&f16.add(&g, &f16.one()), &h), &g);
    assert_eq!(f16.format_elem(&b), "(g + 1)*h + g");
    assert_eq!(f16.description(), "GF(2)[g]/(g^2 + g + 1)[h]/(h^2 + h + g)");
}

/// Multiply in the tower representation directly: polynomials over the
/// base reduced by the defining modulus.
fn tower_mul(f: &FiniteField, a: &FfElem, b: &FfElem) -> FfElem {
    let base = f.base().unwrap();
    let m = f.modulus().unwrap();
    let pa = Poly::new(base.clone(), f.tower_coeffs(a));
    let pb = Poly::new(base.clone(), f.tower_coeffs(b));
    let r = pa.mul_mod(&pb, &m).unwrap();
    let mut digits = Vec::new();
    for i in 0..f.relative_degree() {
        digits.extend(base.tower_digits(&r.coeff(i)));
    }
    f.from_tower_digits(&digits)
}

#[test]
fn flat_model_agrees_with_tower_arithmetic() {
    let f16 = f16_tower();
    let elems = f16.elements().unwrap();
    for a in &elems {
        for b in &elems {
            assert_eq!(f16.mul(a, b), tower_mul(&f16, a, b));
        }
    }
    let f9 = FiniteField::gf(9).unwrap();
    let f81 = f9.extend_by_degree(2).unwrap();
    let f729 = f81.extend_by_degree(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let a = f729.random_elem(&mut rng);
        let b = f729.random_elem(&mut rng);
        assert_eq!(f729.mul(&a, &b), tower_mul(&f729, &a, &b));
        if !f729.is_zero(&a) {
            assert!(f729.is_one(&f729.mul(&a, &f729.inv(&a).unwrap())));
        }
    }
}

#[test]
fn coordinates_over_levels_round_trip() {
    let f16 = f16_tower();
    let f4 = f16.base().unwrap().clone();
    for a in f16.elements().unwrap() {
        let c = f16.coords_over(&a, &f4).unwrap();
        assert_eq!(c.len(), 2);
        let h = f16.generator("h").unwrap();
        let back = f16.add(
            &f16.lift_from(&c[0], &f4).unwrap(),
            &f16.mul(&f16.lift_from(&c[1], &f4).unwrap(), &h),
        );
        assert_eq!(back, a);
    }
}

#[test]
fn bad_moduli_are_rejected() {
    let f2 = FiniteField::prime(2).unwrap();
    let reducible = Poly::new(f2.clone(), vec![f2.one(), f2.zero(), f2.one()]);
    assert!(matches!(f2.extension(&reducible, "g"), Err(Error::BadModulus(_))));
    assert!(matches!(FiniteField::prime(6), Err(Error::NotPrime(6))));
}

#[test]
fn structural_equality() {
    assert_eq!(f4_tower(), f4_tower());
    assert_eq!(f16_tower(), f16_tower());
    assert_ne!(f4_tower(), FiniteField::prime(2).unwrap());
    assert_eq!(FiniteField::gf(4).unwrap(), f4_tower());
}

#[test]
fn embed_examples() {
    let f2 = FiniteField::prime(2).unwrap();
    let f8 = FiniteField::gf(8).unwrap();
    assert_eq!(embed(&f2.one(), &f2, &f8).unwrap(), f8.one());
    assert_eq!(embed(&f2.zero(), &f2, &f8).unwrap(), f8.zero());

    let f4 = FiniteField::gf(4).unwrap();
    let f16 = FiniteField::gf(16).unwrap();
    let g = f4.generator("g").unwrap();
    let img = embed(&g, &f4, &f16).unwrap();
    let val = f16.add(&f16.add(&f16.mul(&img, &img), &img), &f16.one());
    assert!(f16.is_zero(&val));
    assert!(matches!(embed(&g, &f4, &f8), Err(Error::InvalidArgument(_))));
}

#[test]
fn embedding_is_a_ring_homomorphism() {
    let f4 = FiniteField::gf(4).unwrap();
    let f64_ = FiniteField::gf(64).unwrap();
    let els = f4.elements().unwrap();
    for a in &els {
        for b in &els {
            let ea = embed(a, &f4, &f64_).unwrap();
            let eb = embed(b, &f4, &f64_).unwrap();
            assert_eq!(embed(&f4.mul(a, b), &f4, &f64_).unwrap(), f64_.mul(&ea, &eb));
            assert_eq!(embed(&f4.add(a, b), &f4, &f64_).unwrap(), f64_.add(&ea, &eb));
        }
    }
}

#[test]
fn embeddings_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    // F_2 -> F_4 -> F_16 against F_2 -> F_16, flat fields.
    let f2 = FiniteField::prime(2).unwrap();
    let f4 = FiniteField::gf(4).unwrap();
    let f16 = FiniteField::gf(16).unwrap();
    for _ in 0..1000 {
        let a = f2.random_elem(&mut rng);
        let two_step = embed(&embed(&a, &f2, &f4).unwrap(), &f4, &f16).unwrap();
        assert_eq!(two_step, embed(&a, &f2, &f16).unwrap());
    }
    // F_4 -> F_16 -> F_256 along a tower.
    let t4 = f4_tower();
    let t16 = f16_tower();
    let t256 = t16.extend_by_degree(2).unwrap();
    for _ in 0..1000 {
        let a = t4.random_elem(&mut rng);
        let two_step = embed(&embed(&a, &t4, &t16).unwrap(), &t16, &t256).unwrap();
        assert_eq!(two_step, embed(&a, &t4, &t256).unwrap());
    }
}

#[test]
fn mult_order_examples() {
    let f4 = f4_tower();
    assert_eq!(f4.mult_order(&f4.one()).unwrap(), 1);
    assert_eq!(f4.mult_order(&f4.generator("g").unwrap()).unwrap(), 3);
    let f5 = FiniteField::prime(5).unwrap();
    assert_eq!(f5.mult_order(&f5.from_int(-1)).unwrap(), 2);
    assert_eq!(f5.mult_order(&f5.zero()), Err(Error::DivisionByZero));
}

#[test]
fn mult_order_matches_direct_powering() {
    let f = FiniteField::gf(27).unwrap();
    for a in f.elements().unwrap().into_iter().skip(1) {
        let mut k = 1;
        let mut x = a.clone();
        while !f.is_one(&x) {
            x = f.mul(&x, &a);
            k += 1;
        }
        assert_eq!(f.mult_order(&a).unwrap(), k);
        assert_eq!(26 % k, 0);
    }
}

#[test]
fn additive_kernel_finds_subfield() {
    // Kernel of a -> a^4 - a on F_16 is F_4.
    let f16 = FiniteField::gf(16).unwrap();
    let ker = f16.fp_kernel(|a| f16.sub(&f16.pow(a, 4), a));
    assert_eq!(ker.len(), 2);
    for v in ker {
        assert!(f16.in_subfield(&v, 4));
    }
}

fn fields() -> Vec<FiniteField> {
    vec![
        FiniteField::gf(8).unwrap(),
        FiniteField::gf(25).unwrap(),
        f16_tower(),
        FiniteField::gf(9).unwrap().extend_by_degree(2).unwrap(),
    ]
}

proptest! {
    #[test]
    fn frobenius_is_a_field_automorphism(seed in any::<u64>(), which in 0usize..4) {
        let f = &fields()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = f.random_elem(&mut rng);
        let b = f.random_elem(&mut rng);
        let q = f.p() as u64;
        let fr = |x: &FfElem| f.frobenius_q(x, q).unwrap();
        prop_assert_eq!(fr(&f.add(&a, &b)), f.add(&fr(&a), &fr(&b)));
        prop_assert_eq!(fr(&f.mul(&a, &b)), f.mul(&fr(&a), &fr(&b)));
        let prime_elem = f.from_int(seed as i64 % 7);
        prop_assert_eq!(fr(&prime_elem), prime_elem);
    }

    #[test]
    fn mult_order_divides_group_order(seed in any::<u64>(), which in 0usize..4) {
        let f = &fields()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = f.random_elem(&mut rng);
        prop_assume!(!f.is_zero(&a));
        let n = f.cardinality().unwrap();
        let k = f.mult_order(&a).unwrap();
        prop_assert_eq!((n - 1) % k, 0);
        prop_assert!(f.is_one(&f.pow_u128(&a, k)));
    }
}
