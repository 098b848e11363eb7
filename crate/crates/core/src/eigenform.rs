//! Weight-one dihedral eigenforms attached to class-group characters.
//!
//! A character `χ` of exact order `h` on `CL(D)` gives the theta series
//! `Σ_A χ(A) θ_A / 2`, a Hecke eigenform of level `|D|` and nebentypus
//! `(D|·)`. Its prime coefficients are `χ(P) + χ(P)^-1` at split `l`,
//! `0` at inert `l` and `χ(P)` at ramified `l`, with `P` the class of a
//! prime above `l`. Reducing `ζ_h` to an element of order `h` in
//! `F_{p^m}` gives the coefficients mod `p`; a split coefficient outside
//! `F_p` certifies a Hecke polynomial that does not split mod `p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::abelian::is_p_suitable;
use crate::arith::{factorize, gcd, isqrt, kronecker, multiplicative_order, primes_up_to};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::forms::{class_group, prime_form, ClassGroup, Discriminant, PrimeForm, QuadForm};
use crate::gf::{element_of_order, field, FieldElement};

/// A character of exact order `h`, stored as discrete logs in `Z/h`.
#[derive(Debug, Clone)]
pub struct ClassCharacter {
    disc: Discriminant,
    h: u64,
    log: HashMap<QuadForm, u64>,
}

impl ClassCharacter {
    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    pub fn order(&self) -> u64 {
        self.h
    }

    /// `e` with `χ(f) = ζ_h^e`, for a reduced form `f` of the discriminant.
    pub fn log(&self, f: &QuadForm) -> Option<u64> {
        self.log.get(f).copied()
    }

    pub fn log_table(&self) -> &HashMap<QuadForm, u64> {
        &self.log
    }
}

/// Projects onto the last invariant factor `d_k` and scales by `d_k / h`,
/// i.e. `log(f)` is the last coordinate of `f` reduced mod `h`.
pub fn make_character(cg: &ClassGroup, h: u64) -> Result<ClassCharacter> {
    let exponent = cg.structure().exponent();
    if h == 0 || exponent % h != 0 {
        return Err(Error::NotDivisor { h, n: exponent });
    }
    let mut log = HashMap::with_capacity(cg.forms().len());
    for f in cg.forms() {
        let coords = cg
            .coordinates(f)
            .ok_or_else(|| Error::Internal(format!("form {f} has no coordinates")))?;
        let e = coords.last().map_or(0, |&c| c % h);
        log.insert(*f, e);
    }
    Ok(ClassCharacter {
        disc: cg.disc(),
        h,
        log,
    })
}

/// The `l`-th coefficient of the eigenform, `l` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenCoefficient {
    /// `a_l = ζ_h^e + ζ_h^-e`.
    Split { e: u64, h: u64 },
    /// `a_l = 0`.
    Inert,
    /// `a_l = sign`, the character value on the ramified prime class.
    Ramified { sign: i8 },
}

impl EigenCoefficient {
    pub fn value(&self, h: u64) -> Cyclotomic {
        match *self {
            EigenCoefficient::Split { e, .. } => Cyclotomic::trace_of_root(h, e as i64),
            EigenCoefficient::Inert => Cyclotomic::zero(h),
            EigenCoefficient::Ramified { sign } => Cyclotomic::integer(h, sign as i64),
        }
    }
}

pub fn eigen_coeff(chi: &ClassCharacter, l: u64) -> Result<EigenCoefficient> {
    let lookup = |f: &QuadForm| {
        chi.log(f)
            .ok_or_else(|| Error::Internal(format!("form {f} missing from the character table")))
    };
    Ok(match prime_form(chi.disc, l)? {
        PrimeForm::Inert => EigenCoefficient::Inert,
        PrimeForm::Split(f) => {
            let e = lookup(&f)?;
            // e and -e give the same coefficient; keep the smaller
            let e = e.min((chi.h - e) % chi.h);
            EigenCoefficient::Split { e, h: chi.h }
        }
        PrimeForm::Ramified(f) => {
            let e = lookup(&f)?;
            let sign = if e == 0 {
                1
            } else if 2 * e == chi.h {
                -1
            } else {
                return Err(Error::Internal(format!(
                    "ramified class {f} has character value of order > 2"
                )));
            };
            EigenCoefficient::Ramified { sign }
        }
    })
}

/// `a_n = ½ Σ_A χ(A) r_A(n)`, with `r_A(n)` the number of `(x, y)` with
/// `A(x, y) = n`, summed over the reduced forms `A`.
pub fn theta_coeff_oracle(chi: &ClassCharacter, n: u64) -> Result<Cyclotomic> {
    let d = chi.disc.value();
    if d == -3 || d == -4 {
        return Err(Error::ExtraUnits(d));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("theta coefficients are indexed from 1".into()));
    }
    let mut total = Cyclotomic::zero(chi.h);
    for (form, &e) in chi.log.iter() {
        let r = representations(form, n);
        if r > 0 {
            total.add_root(e as i64, r as i64);
        }
    }
    total
        .div_exact(2)
        .ok_or_else(|| Error::Internal("odd representation count".into()))
}

/// Number of integer pairs with `f(x, y) = n`.
pub fn representations(f: &QuadForm, n: u64) -> u64 {
    let (a, b, c) = (f.a as i128, f.b as i128, f.c as i128);
    let n = n as i128;
    let abs_d = 4 * a * c - b * b;
    let mut count = 0;
    // 4a·n = (2ax + by)^2 + |D| y^2
    let y_max = isqrt(((4 * a * n) / abs_d) as u64) as i128;
    for y in -y_max..=y_max {
        let disc = 4 * a * n - abs_d * y * y;
        if disc < 0 {
            continue;
        }
        let s = isqrt(disc as u64) as i128;
        if s * s != disc {
            continue;
        }
        let roots: &[i128] = if s == 0 { &[0] } else { &[s, -s] };
        for &r in roots {
            if (r - b * y) % (2 * a) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// `a_n` from the prime coefficients by multiplicativity and
/// `a_{l^{k+1}} = a_l a_{l^k} - (D|l) a_{l^{k-1}}`.
pub fn euler_coefficient(chi: &ClassCharacter, n: u64) -> Result<Cyclotomic> {
    let h = chi.h;
    let mut out = Cyclotomic::one(h);
    for (l, k) in factorize(n) {
        let al = eigen_coeff(chi, l)?.value(h);
        let chi0 = kronecker(chi.disc.value(), l) as i64;
        let mut prev = Cyclotomic::one(h);
        let mut cur = al.clone();
        for _ in 1..k {
            let next = &(&al * &cur) - &(&Cyclotomic::integer(h, chi0) * &prev);
            prev = cur;
            cur = next;
        }
        out = &out * &cur;
    }
    Ok(out)
}

/// Reduction `Z[ζ_h] → F_{p^m}` sending `ζ_h` to a fixed element of order `h`.
#[derive(Debug, Clone)]
pub struct CoefficientReducer {
    p: u64,
    h: u64,
    powers: Vec<FieldElement>,
}

impl CoefficientReducer {
    pub fn new(h: u64, p: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidArgument("character order must be positive".into()));
        }
        if gcd(h, p) != 1 {
            return Err(Error::CharacteristicDividesOrder { p, h });
        }
        let m = if h == 1 {
            1
        } else {
            multiplicative_order(p % h, h).unwrap_or(1) as usize
        };
        let ctx = field(p, m)?;
        let x = element_of_order(&ctx, h)?;
        let mut powers = Vec::with_capacity(h as usize);
        powers.push(FieldElement::one(&ctx));
        for i in 1..h as usize {
            let next = &powers[i - 1] * &x;
            powers.push(next);
        }
        Ok(CoefficientReducer { p, h, powers })
    }

    /// Shared reducers keyed by `(h, p)`.
    pub fn cached(h: u64, p: u64) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<CoefficientReducer>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = cache.lock().expect("reducer cache poisoned").get(&(h, p)) {
            return Ok(r.clone());
        }
        let r = Arc::new(Self::new(h, p)?);
        cache
            .lock()
            .expect("reducer cache poisoned")
            .insert((h, p), r.clone());
        Ok(r)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.h
    }

    pub fn reduce(&self, value: &Cyclotomic) -> FieldElement {
        assert_eq!(value.order(), self.h, "value lives in a different cyclotomic ring");
        let ctx = self.powers[0].context();
        let mut acc = FieldElement::zero(ctx);
        for (i, &c) in value.exponent_coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let k = FieldElement::from_int(ctx, c);
            acc = &acc + &(&k * &self.powers[i]);
        }
        acc
    }

    pub fn reduce_coeff(&self, c: &EigenCoefficient) -> FieldElement {
        self.reduce(&c.value(self.h))
    }
}

/// Whether the coefficient reduced mod `p` lies in `F_p`.
pub fn coeff_in_prime_field(c: &EigenCoefficient, p: u64) -> Result<bool> {
    match *c {
        EigenCoefficient::Split { h, .. } => {
            let reducer = CoefficientReducer::cached(h, p)?;
            Ok(reducer.reduce_coeff(c).in_subfield(1))
        }
        EigenCoefficient::Inert | EigenCoefficient::Ramified { .. } => {
            if !crate::arith::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            Ok(true)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Found {
        /// Order of the character used.
        h: u64,
        ell: u64,
        coefficient: EigenCoefficient,
        /// Degree over `F_p` of the field generated by the reduced coefficient.
        field_degree: usize,
    },
    NotFoundUpToBound,
}

/// Smallest prime `l <= bound` whose coefficient, for a character of order
/// the suitability witness `h`, leaves `F_p` after reduction.
pub fn find_witness(d: Discriminant, p: u64, bound: u64) -> Result<Witness> {
    let cg = class_group(d)?;
    find_witness_in(&cg, p, bound)
}

pub fn find_witness_in(cg: &ClassGroup, p: u64, bound: u64) -> Result<Witness> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let Some(h) = is_p_suitable(cg.structure(), p).witness_h else {
        return Ok(Witness::NotFoundUpToBound);
    };
    let chi = make_character(cg, h)?;
    let reducer = CoefficientReducer::cached(h, p)?;
    for ell in primes_up_to(bound) {
        let c = eigen_coeff(&chi, ell)?;
        if let EigenCoefficient::Split { .. } = c {
            let t = reducer.reduce_coeff(&c);
            if !t.in_subfield(1) {
                return Ok(Witness::Found {
                    h,
                    ell,
                    coefficient: c,
                    field_degree: t.degree(),
                });
            }
        }
    }
    Ok(Witness::NotFoundUpToBound)
}
