use quadsplit::abelian::{is_p_suitable, prime_to_part};
use quadsplit::arith::is_prime;
use quadsplit::batch::batch_class_numbers;
use quadsplit::cyclotomic::Cyclotomic;
use quadsplit::eigenform::{
    coeff_in_prime_field, eigen_coeff, euler_coefficient, find_witness, make_character,
    representations, theta_coeff_oracle, CoefficientReducer, EigenCoefficient, Witness,
};
use quadsplit::forms::{class_group, compose, prime_form, reduce, Discriminant, PrimeForm, QuadForm};
use quadsplit::Error;

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

/// Lattice points with `a x^2 + b x y + c y^2 = n`, by scanning a box.
fn lattice_count(f: &QuadForm, n: i64) -> i64 {
    let (a, b, c) = (f.a, f.b, f.c);
    let mut count = 0;
    // 4a Q = (2ax + by)^2 + |D| y^2 bounds |y| and then |x|
    let abs = b * b - 4 * a * c;
    let y_max = ((4 * a * n) as f64 / -abs as f64).sqrt() as i64 + 1;
    let x_max = ((4 * c * n) as f64 / -abs as f64).sqrt() as i64 + 1;
    for y in -y_max..=y_max {
        for x in -x_max..=x_max {
            if a * x * x + b * x * y + c * y * y == n {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn characters_are_homomorphisms() {
    for d in [-23, -47, -71, -84, -231, -4027, -3299, -20003] {
        let Ok(dd) = Discriminant::new(d) else { continue };
        let cg = class_group(dd).unwrap();
        let exp = cg.structure().exponent();
        for h in (1..=exp).filter(|h| exp % h == 0) {
            let chi = make_character(&cg, h).unwrap();
            assert_eq!(chi.log(&cg.principal()), Some(0));
            for f in cg.forms() {
                let inv = reduce(f.opposite()).unwrap();
                assert_eq!((chi.log(f).unwrap() + chi.log(&inv).unwrap()) % h, 0);
                for g in cg.forms() {
                    let fg = compose(*f, *g).unwrap();
                    assert_eq!(chi.log(&fg).unwrap(), (chi.log(f).unwrap() + chi.log(g).unwrap()) % h);
                }
            }
            // exact order h
            assert!(cg.forms().iter().any(|f| quadsplit::arith::gcd(chi.log(f).unwrap(), h) == 1));
        }
        assert!(matches!(make_character(&cg, exp + 1), Err(Error::NotDivisor { .. })));
    }
}

#[test]
fn character_examples() {
    let cg = class_group(disc(-23)).unwrap();
    let chi = make_character(&cg, 3).unwrap();
    assert_eq!(chi.log(&QuadForm::new(1, 1, 6)), Some(0));
    let a = chi.log(&QuadForm::new(2, 1, 3)).unwrap();
    let b = chi.log(&QuadForm::new(2, -1, 3)).unwrap();
    assert_eq!((a + b) % 3, 0);
    assert_ne!(a, 0);
    let chi47 = make_character(&class_group(disc(-47)).unwrap(), 5).unwrap();
    assert!((1..5).contains(&chi47.log(&QuadForm::new(2, 1, 6)).unwrap()));
    let trivial = make_character(&class_group(disc(-3)).unwrap(), 1).unwrap();
    assert_eq!(trivial.log_table().len(), 1);
}

#[test]
fn coefficient_examples() {
    let chi = make_character(&class_group(disc(-23)).unwrap(), 3).unwrap();
    assert_eq!(eigen_coeff(&chi, 5).unwrap(), EigenCoefficient::Inert);
    let a2 = eigen_coeff(&chi, 2).unwrap();
    assert!(matches!(a2, EigenCoefficient::Split { e: 1, h: 3 }));
    assert_eq!(a2.value(3).as_integer(), Some(-1));
    assert_eq!(a2.value(3), theta_coeff_oracle(&chi, 2).unwrap());
    assert_eq!(theta_coeff_oracle(&chi, 1).unwrap(), Cyclotomic::one(3));
    let trivial = make_character(&class_group(disc(-23)).unwrap(), 1).unwrap();
    assert_eq!(eigen_coeff(&trivial, 2).unwrap().value(1).as_integer(), Some(2));
    let chi47 = make_character(&class_group(disc(-47)).unwrap(), 5).unwrap();
    let a2 = theta_coeff_oracle(&chi47, 2).unwrap();
    let e = chi47.log(&QuadForm::new(2, 1, 6)).unwrap() as i64;
    assert_eq!(a2, Cyclotomic::trace_of_root(5, e));
    let chi4 = make_character(&class_group(disc(-4)).unwrap(), 1).unwrap();
    assert!(matches!(theta_coeff_oracle(&chi4, 5), Err(Error::ExtraUnits(-4))));
}

#[test]
fn theta_series_matches_euler_product() {
    for d in [-23i64, -31, -47, -71, -84, -87, -231, -356, -4027] {
        let cg = class_group(disc(d)).unwrap();
        let exp = cg.structure().exponent();
        for h in (1..=exp).filter(|h| exp % h == 0) {
            let chi = make_character(&cg, h).unwrap();
            for n in 1..=200u64 {
                let mut direct = Cyclotomic::zero(h);
                for (f, &e) in chi.log_table() {
                    let r = lattice_count(f, n as i64);
                    assert_eq!(r as u64, representations(f, n));
                    direct.add_root(e as i64, r);
                }
                let direct = direct.div_exact(2).unwrap();
                assert_eq!(direct, theta_coeff_oracle(&chi, n).unwrap(), "D = {d}, n = {n}");
                assert_eq!(direct, euler_coefficient(&chi, n).unwrap(), "D = {d}, h = {h}, n = {n}");
            }
        }
    }
}

#[test]
fn conjugate_prime_forms_give_the_same_coefficient() {
    for d in [-47i64, -71, -199, -4027, -3299] {
        let cg = class_group(disc(d)).unwrap();
        let chi = make_character(&cg, cg.structure().exponent()).unwrap();
        let h = chi.order();
        for l in (2..500).filter(|&l| is_prime(l)) {
            if let PrimeForm::Split(f) = prime_form(disc(d), l).unwrap() {
                let e1 = chi.log(&f).unwrap() as i64;
                let e2 = chi.log(&reduce(f.opposite()).unwrap()).unwrap() as i64;
                let c = eigen_coeff(&chi, l).unwrap().value(h);
                assert_eq!(c, Cyclotomic::trace_of_root(h, e1));
                assert_eq!(c, Cyclotomic::trace_of_root(h, e2));
            }
        }
    }
}

#[test]
fn reduction_examples() {
    let chi23 = make_character(&class_group(disc(-23)).unwrap(), 3).unwrap();
    assert!(coeff_in_prime_field(&eigen_coeff(&chi23, 2).unwrap(), 2).unwrap());
    let chi47 = make_character(&class_group(disc(-47)).unwrap(), 5).unwrap();
    let a2 = eigen_coeff(&chi47, 2).unwrap();
    assert!(!coeff_in_prime_field(&a2, 2).unwrap());
    let t = CoefficientReducer::new(5, 2).unwrap().reduce_coeff(&a2);
    assert_eq!(&t * &t, &t + &quadsplit::gf::FieldElement::one(t.context()));
    assert!(coeff_in_prime_field(&EigenCoefficient::Inert, 7).unwrap());
    assert!(coeff_in_prime_field(&EigenCoefficient::Split { e: 1, h: 5 }, 5).is_err());
}

#[test]
fn witness_examples() {
    match find_witness(disc(-47), 2, 100).unwrap() {
        Witness::Found { h, ell, field_degree, .. } => {
            assert_eq!((h, ell, field_degree), (5, 2, 2));
        }
        w => panic!("{w:?}"),
    }
    assert_eq!(find_witness(disc(-23), 2, 1000).unwrap(), Witness::NotFoundUpToBound);
    assert_eq!(find_witness(disc(-3), 7, 1000).unwrap(), Witness::NotFoundUpToBound);
}

/// When the class group is not p-suitable, the prime-to-p exponent `e`
/// divides `p^2 - 1`: every reduced coefficient lies in `F_{p^2}`, and in
/// `F_p` exactly when `e` divides `p - 1` or `p + 1`.
#[test]
fn unsuitable_coefficients_stay_in_small_fields() {
    let table = batch_class_numbers(3000).unwrap();
    for p in [2u64, 3, 5] {
        for (d, _) in table.fundamental_entries() {
            let cg = class_group(disc(d)).unwrap();
            if is_p_suitable(cg.structure(), p).suitable {
                continue;
            }
            let e = prime_to_part(cg.structure().exponent(), p);
            assert_eq!((p * p - 1) % e, 0);
            let chi = make_character(&cg, e).unwrap();
            let reducer = CoefficientReducer::cached(e, p).unwrap();
            let in_fp = (p - 1) % e == 0 || (p + 1) % e == 0;
            let mut all_in_fp = true;
            for l in (2..1000).filter(|&l| is_prime(l)) {
                let t = reducer.reduce_coeff(&eigen_coeff(&chi, l).unwrap());
                assert!(t.in_subfield(2), "D = {d}, p = {p}, l = {l}");
                all_in_fp &= t.in_subfield(1);
            }
            if in_fp {
                assert!(all_in_fp, "D = {d}, p = {p}");
            }
            assert_eq!(find_witness(disc(d), p, 1000).unwrap(), Witness::NotFoundUpToBound);
        }
    }
}
