//! Positive definite binary quadratic forms and the form class group.
//!
//! A form `(a, b, c)` stands for `a x^2 + b xy + c y^2` with discriminant
//! `D = b^2 - 4ac < 0`. Reduced forms (`|b| <= a <= c`, `b >= 0` when
//! `|b| = a` or `a = c`) are unique representatives of their classes, and
//! Gauss composition turns the set of primitive reduced forms into the
//! class group of the order of discriminant `D`.
//!
//! Discriminants are always the signed value `D < 0`. A positive squarefree
//! `d` naming the field `Q(sqrt(-d))` converts through
//! [`Discriminant::of_field`].

use std::collections::HashMap;
use std::fmt;

use crate::abelian::{decompose, AbelianGroup, Decomposition, GroupLaw};
use crate::arith::{divisors_from_factors, ext_gcd, gcd, isqrt, kronecker, primes_up_to, sqrt_mod_prime};
use crate::error::{Error, Result};

/// Whether `d` is a negative fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let abs = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => crate::arith::is_squarefree(abs),
        0 => {
            let m = abs / 4;
            // D/4 = -m must be 2 or 3 mod 4
            matches!(m % 4, 1 | 2) && crate::arith::is_squarefree(m)
        }
        _ => false,
    }
}

/// A negative discriminant `D ≡ 0, 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    value: i64,
    fundamental: bool,
}

impl Discriminant {
    pub fn new(value: i64) -> Result<Self> {
        if value >= 0 || !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(value));
        }
        Ok(Discriminant {
            value,
            fundamental: is_fundamental(value),
        })
    }

    /// Discriminant of the imaginary quadratic field `Q(sqrt(-d))` for a
    /// positive squarefree `d`: `-d` when `d ≡ 3 (mod 4)`, else `-4d`.
    pub fn of_field(d: u64) -> Result<Self> {
        if d == 0 || !crate::arith::is_squarefree(d) {
            return Err(Error::InvalidArgument(format!("{d} is not a positive squarefree integer")));
        }
        let d = d as i64;
        if d % 4 == 3 {
            Discriminant::new(-d)
        } else {
            Discriminant::new(-4 * d)
        }
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// The identity class: `(1, 0, -D/4)` or `(1, 1, (1-D)/4)`.
    pub fn principal(d: Discriminant) -> Self {
        let abs = d.abs() as i64;
        if d.value() % 2 == 0 {
            QuadForm::new(1, 0, abs / 4)
        } else {
            QuadForm::new(1, 1, (abs + 1) / 4)
        }
    }

    pub fn discriminant(&self) -> i64 {
        let d = self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128;
        d as i64
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && (self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128) < 0
    }

    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        self.is_positive_definite()
            && abs_b <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (abs_b != self.a && self.a != self.c))
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a.unsigned_abs(), self.b.unsigned_abs()), self.c.unsigned_abs()) == 1
    }

    /// `(a, -b, c)`: the inverse class before reduction.
    pub fn opposite(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c)
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }
}

/// The unique reduced form properly equivalent to `f`.
pub fn reduce(f: QuadForm) -> Result<QuadForm> {
    if !f.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(f.a, f.b, f.c));
    }
    Ok(reduce_wide(f.a as i128, f.b as i128, f.discriminant() as i128))
}

fn reduce_wide(mut a: i128, mut b: i128, d: i128) -> QuadForm {
    let mut c = (b * b - d) / (4 * a);
    loop {
        if !(-a < b && b <= a) {
            // b <- b mod 2a into (-a, a]
            let two_a = 2 * a;
            let mut r = b.rem_euclid(two_a);
            if r > a {
                r -= two_a;
            }
            b = r;
            c = (b * b - d) / (4 * a);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    QuadForm::new(a as i64, b as i64, c as i64)
}

/// Gauss composition of two forms of the same discriminant, reduced.
pub fn compose(f: QuadForm, g: QuadForm) -> Result<QuadForm> {
    let (df, dg) = (f.discriminant(), g.discriminant());
    if df != dg {
        return Err(Error::DiscriminantMismatch(df, dg));
    }
    if !f.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(f.a, f.b, f.c));
    }
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(g.a, g.b, g.c));
    }
    Ok(compose_unchecked(f, g, df as i128))
}

// Composition of positive definite forms of discriminant `d` with all
// intermediates in 128-bit arithmetic.
fn compose_unchecked(f1: QuadForm, f2: QuadForm, d: i128) -> QuadForm {
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;

    let (y1, dd) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let (g, u, _) = ext_gcd(a2, a1);
        (u, g)
    };
    let (x2, y2, d1) = if s % dd == 0 {
        (0, -1, dd)
    } else {
        let (g, u, v) = ext_gcd(s, dd);
        (u, -v, g)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    debug_assert_eq!((b3 * b3 - d) % (4 * a3), 0);
    reduce_wide(a3, b3, d)
}

/// `f^n` in the class group, reduced.
pub fn power(f: QuadForm, n: u64) -> Result<QuadForm> {
    let d = Discriminant::new(f.discriminant())?;
    let law = FormLaw::new(d.value());
    Ok(law.pow(&reduce(f)?, n))
}

/// Composition as a [`GroupLaw`] on the reduced forms of one discriminant.
#[derive(Debug, Clone, Copy)]
pub struct FormLaw {
    disc: i64,
}

impl FormLaw {
    pub fn new(disc: i64) -> Self {
        FormLaw { disc }
    }
}

impl GroupLaw for FormLaw {
    type Elem = QuadForm;

    fn identity(&self) -> QuadForm {
        let abs = self.disc.unsigned_abs() as i64;
        if self.disc % 2 == 0 {
            QuadForm::new(1, 0, abs / 4)
        } else {
            QuadForm::new(1, 1, (abs + 1) / 4)
        }
    }

    fn op(&self, a: &QuadForm, b: &QuadForm) -> QuadForm {
        compose_unchecked(*a, *b, self.disc as i128)
    }
}

/// Canonical ordering of reduced forms: by `a`, then `|b|`, positive `b` first.
fn canonical_key(f: &QuadForm) -> (i64, i64, bool) {
    (f.a, f.b.abs(), f.b < 0)
}

/// All primitive reduced forms of discriminant `d`, in canonical order
/// (ascending `a`, then `|b|`, with `b > 0` before `-b`).
///
/// Rather than testing every `(a, b)` pair, this walks the admissible
/// middle coefficients `0 <= b <= sqrt(|D|/3)` and splits
/// `(b^2 - D)/4 = a c` over its divisors. The values `(b^2 - D)/4` are
/// factored together by sieving each prime `q` along the residue classes
/// of the square roots of `D` mod `q`.
pub fn enumerate_reduced(d: Discriminant) -> Vec<QuadForm> {
    let abs = d.abs();
    let parity = abs % 2;
    let b_max = isqrt(abs / 3);
    let bs: Vec<u64> = (parity..=b_max).step_by(2).collect();
    let mut rest: Vec<u64> = bs.iter().map(|&b| (b * b + abs) / 4).collect();
    let mut factors: Vec<Vec<(u64, u32)>> = vec![Vec::new(); bs.len()];
    let n_max = rest.iter().copied().max().unwrap_or(1);

    let strip = |i: usize, q: u64, rest: &mut [u64], factors: &mut [Vec<(u64, u32)>]| {
        let mut e = 0;
        while rest[i] % q == 0 {
            rest[i] /= q;
            e += 1;
        }
        if e > 0 {
            factors[i].push((q, e));
        }
    };

    for q in primes_up_to(isqrt(n_max)) {
        if q == 2 {
            for i in 0..bs.len() {
                strip(i, 2, &mut rest, &mut factors);
            }
            continue;
        }
        // q | (b^2 - D)/4  <=>  b ≡ ±r (mod q)
        let Some(r) = sqrt_mod_prime(d.value().rem_euclid(q as i64) as u64, q) else {
            continue;
        };
        let roots = if r == 0 { vec![0] } else { vec![r, q - r] };
        for r in roots {
            // b = parity + 2i ≡ r (mod q)  =>  i ≡ (r - parity) / 2 (mod q)
            let inv2 = q.div_ceil(2);
            let start = ((r + q - parity % q) % q) * inv2 % q;
            let mut i = start as usize;
            while i < bs.len() {
                strip(i, q, &mut rest, &mut factors);
                i += q as usize;
            }
        }
    }

    let mut forms = Vec::new();
    for (idx, &b) in bs.iter().enumerate() {
        let n = (b * b + abs) / 4;
        let mut fs = factors[idx].clone();
        if rest[idx] > 1 {
            fs.push((rest[idx], 1));
        }
        for a in divisors_from_factors(&fs) {
            if a < b.max(1) {
                continue;
            }
            if a as u128 * a as u128 > n as u128 {
                break;
            }
            let c = n / a;
            if gcd(gcd(a, b), c) != 1 {
                continue;
            }
            let (a, bi, c) = (a as i64, b as i64, c as i64);
            forms.push(QuadForm::new(a, bi, c));
            if bi != 0 && bi != a && a != c {
                forms.push(QuadForm::new(a, -bi, c));
            }
        }
    }
    forms.sort_by_key(canonical_key);
    forms
}

/// How a prime `l` behaves in the order of discriminant `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeForm {
    /// `(D|l) = 1`: the reduced form of a prime ideal above `l`.
    Split(QuadForm),
    /// `(D|l) = -1`.
    Inert,
    /// `l | D`: the reduced form of the ramified prime, of order at most 2.
    Ramified(QuadForm),
}

/// Classifies `l` by the Kronecker symbol `(D|l)` and, when it is not
/// inert, returns the reduced form of the prime above it.
///
/// The form is `(l, b, (b^2 - D)/4l)` with `b ≡ D (mod 2)`, `b^2 ≡ D (mod 4l)`
/// and `b` the smallest such value in `(0, 2l]`.
pub fn prime_form(d: Discriminant, l: u64) -> Result<PrimeForm> {
    if !crate::arith::is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    let dv = d.value();
    let chi = kronecker(dv, l);
    if chi == -1 {
        return Ok(PrimeForm::Inert);
    }
    let b = if l == 2 {
        (1..=4i64)
            .find(|&b| (b - dv).rem_euclid(2) == 0 && (b * b - dv).rem_euclid(8) == 0)
            .ok_or_else(|| Error::Internal(format!("no square root of {dv} mod 8")))?
    } else {
        let r = sqrt_mod_prime(dv.rem_euclid(l as i64) as u64, l)
            .ok_or_else(|| Error::Internal(format!("{dv} has no square root mod {l}")))?;
        let l_i = l as i64;
        let r = r as i64;
        [r, l_i - r, l_i + r, 2 * l_i - r]
            .into_iter()
            .filter(|&b| b > 0 && b <= 2 * l_i && (b - dv).rem_euclid(2) == 0)
            .min()
            .ok_or_else(|| Error::Internal(format!("no admissible b for {dv} at {l}")))?
    };
    let four_l = 4 * l as i128;
    let num = b as i128 * b as i128 - dv as i128;
    if num % four_l != 0 {
        return Err(Error::Internal(format!("b = {b} is not a root of {dv} mod 4*{l}")));
    }
    let form = reduce(QuadForm::new(l as i64, b, (num / four_l) as i64))?;
    Ok(if chi == 1 {
        PrimeForm::Split(form)
    } else {
        PrimeForm::Ramified(form)
    })
}

/// Summary of a class group: what the cache stores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupRecord {
    pub disc: Discriminant,
    pub class_number: u64,
    pub structure: AbelianGroup,
    /// Generators aligned with the invariant factors, with their orders.
    pub generators: Vec<(QuadForm, u64)>,
}

/// The class group of a discriminant with every reduced form and a
/// discrete-log table.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    disc: Discriminant,
    law: FormLaw,
    forms: Vec<QuadForm>,
    decomposition: Decomposition<QuadForm>,
}

impl ClassGroup {
    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    pub fn class_number(&self) -> u64 {
        self.forms.len() as u64
    }

    pub fn structure(&self) -> &AbelianGroup {
        self.decomposition.group()
    }

    /// Reduced forms in canonical order.
    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn law(&self) -> &FormLaw {
        &self.law
    }

    pub fn principal(&self) -> QuadForm {
        self.law.identity()
    }

    pub fn compose(&self, f: &QuadForm, g: &QuadForm) -> QuadForm {
        self.law.op(f, g)
    }

    /// Exponent vector of a reduced form with respect to the generators.
    pub fn coordinates(&self, f: &QuadForm) -> Option<Vec<u64>> {
        self.decomposition.coordinates(&self.law, f)
    }

    pub fn element_order(&self, f: &QuadForm) -> Option<u64> {
        self.decomposition.element_order(&self.law, f)
    }

    pub fn record(&self) -> ClassGroupRecord {
        let generators = self
            .decomposition
            .generators()
            .iter()
            .zip(self.structure().invariant_factors())
            .map(|(g, &d)| (*g, d))
            .collect();
        ClassGroupRecord {
            disc: self.disc,
            class_number: self.class_number(),
            structure: self.structure().clone(),
            generators,
        }
    }
}

/// Class group of the order of discriminant `d`. Non-fundamental
/// discriminants are accepted; check [`Discriminant::is_fundamental`].
pub fn class_group(d: Discriminant) -> Result<ClassGroup> {
    let forms = enumerate_reduced(d);
    let law = FormLaw::new(d.value());
    let decomposition = decompose(&law, &forms)?;
    Ok(ClassGroup {
        disc: d,
        law,
        forms,
        decomposition,
    })
}

/// Class group of `Q(sqrt(-d))` for a positive squarefree `d`.
pub fn field_class_group(d: u64) -> Result<ClassGroup> {
    class_group(Discriminant::of_field(d)?)
}

/// Index from a reduced form to its position in the canonical list.
pub fn form_index(forms: &[QuadForm]) -> HashMap<QuadForm, usize> {
    forms.iter().enumerate().map(|(i, f)| (*f, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn fundamental_discriminants() {
        assert!(is_fundamental(-3));
        assert!(is_fundamental(-4));
        assert!(is_fundamental(-8));
        assert!(is_fundamental(-4027));
        assert!(!is_fundamental(-12));
        assert!(!is_fundamental(-16));
        assert!(!is_fundamental(-27));
        assert!(!is_fundamental(5));
        assert!(!is_fundamental(-5));
        assert!(!is_fundamental(-2));
        assert!(Discriminant::new(-5).is_err());
        assert!(Discriminant::new(0).is_err());
        assert!(!disc(-12).is_fundamental());
    }

    #[test]
    fn field_discriminant_conversion() {
        assert_eq!(Discriminant::of_field(23).unwrap().value(), -23);
        assert_eq!(Discriminant::of_field(5).unwrap().value(), -20);
        assert_eq!(Discriminant::of_field(2).unwrap().value(), -8);
        assert_eq!(Discriminant::of_field(1).unwrap().value(), -4);
        assert!(Discriminant::of_field(12).is_err());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce(QuadForm::new(1, 1, 1)).unwrap(), QuadForm::new(1, 1, 1));
        assert_eq!(reduce(QuadForm::new(2, 1, 6)).unwrap(), QuadForm::new(2, 1, 6));
        // (6,1,2) ~ (2,-1,6) by the swap (x,y) -> (-y,x)
        let r = reduce(QuadForm::new(6, 1, 2)).unwrap();
        assert_eq!(r, QuadForm::new(2, -1, 6));
        assert!(r.is_reduced());
        assert_eq!(r.discriminant(), -47);
        assert!(matches!(
            reduce(QuadForm::new(1, 3, 1)),
            Err(Error::NotPositiveDefinite(..))
        ));
        assert!(reduce(QuadForm::new(-1, 0, -1)).is_err());
    }

    #[test]
    fn boundary_sign_normalisation() {
        assert_eq!(reduce(QuadForm::new(2, -2, 3)).unwrap(), QuadForm::new(2, 2, 3));
        assert_eq!(reduce(QuadForm::new(3, -1, 3)).unwrap(), QuadForm::new(3, 1, 3));
    }

    #[test]
    fn composition_examples() {
        let g = QuadForm::new(2, 1, 3);
        assert_eq!(compose(g, g).unwrap(), QuadForm::new(2, -1, 3));
        let e = QuadForm::principal(disc(-23));
        assert_eq!(compose(e, g).unwrap(), g);
        assert_eq!(power(g, 3).unwrap(), e);
        let f = QuadForm::new(2, 1, 6);
        assert_eq!(power(f, 5).unwrap(), QuadForm::new(1, 1, 12));
        assert!(matches!(
            compose(QuadForm::new(1, 1, 1), QuadForm::new(1, 0, 1)),
            Err(Error::DiscriminantMismatch(-3, -4))
        ));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_reduced(disc(-3)), vec![QuadForm::new(1, 1, 1)]);
        assert_eq!(enumerate_reduced(disc(-4)), vec![QuadForm::new(1, 0, 1)]);
        assert_eq!(
            enumerate_reduced(disc(-23)),
            vec![QuadForm::new(1, 1, 6), QuadForm::new(2, 1, 3), QuadForm::new(2, -1, 3)]
        );
        assert_eq!(enumerate_reduced(disc(-47)).len(), 5);
        assert_eq!(enumerate_reduced(disc(-4027)).len(), 9);
        // non-fundamental: only primitive forms; (2,0,2) is excluded
        assert_eq!(enumerate_reduced(disc(-16)), vec![QuadForm::new(1, 0, 4)]);
        assert_eq!(enumerate_reduced(disc(-12)), vec![QuadForm::new(1, 0, 3)]);
    }

    #[test]
    fn class_group_examples() {
        let cg = class_group(disc(-4027)).unwrap();
        assert_eq!(cg.class_number(), 9);
        assert_eq!(cg.structure().invariant_factors(), &[3, 3]);
        assert!(class_group(disc(-3)).unwrap().structure().is_trivial());
        assert_eq!(class_group(disc(-47)).unwrap().structure().invariant_factors(), &[5]);
        let rec = cg.record();
        assert_eq!(rec.generators.len(), 2);
        for (g, ord) in rec.generators {
            assert_eq!(cg.element_order(&g), Some(ord));
        }
    }

    #[test]
    fn prime_form_examples() {
        assert_eq!(prime_form(disc(-23), 2).unwrap(), PrimeForm::Split(QuadForm::new(2, 1, 3)));
        assert_eq!(prime_form(disc(-23), 5).unwrap(), PrimeForm::Inert);
        assert_eq!(prime_form(disc(-47), 2).unwrap(), PrimeForm::Split(QuadForm::new(2, 1, 6)));
        assert_eq!(
            prime_form(disc(-23), 23).unwrap(),
            PrimeForm::Ramified(QuadForm::new(1, 1, 6))
        );
        assert!(matches!(prime_form(disc(-20), 2).unwrap(), PrimeForm::Ramified(_)));
        assert!(matches!(prime_form(disc(-23), 4), Err(Error::NotPrime(4))));
    }
}
