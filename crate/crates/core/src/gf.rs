//! Finite fields `F_{p^m}` as `F_p[x]/(f)` and the trace sets of dihedral
//! subgroups of `GL_2`.
//!
//! The dihedral group of order `2h` generated by the swap matrix
//! `[[0,1],[1,0]]` and `diag(x, x^-1)` with `x` of order `h` has traces
//! `x^i + x^-i` on its diagonal coset and `0` on the antidiagonal coset.
//! Whether all of them lie in a subfield is decided with the Frobenius
//! fixed-point test `t^(p^s) = t`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;

use crate::arith::{factorize, gcd, multiplicative_order, pow_mod};
use crate::error::{Error, Result};

/// Polynomial helpers over `F_p`, coefficients low degree first.
mod poly {
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = crate::arith::inv_mod(m[dm], p).expect("nonzero leading coefficient");
        if p < 1 << 20 && r.len() < 1 << 20 {
            // lazy reduction: only the leading entry must be exact when read
            while r.len() > dm {
                let k = r.len() - 1 - dm;
                let top = r[r.len() - 1] % p;
                if top != 0 {
                    let nq = p - top * lead_inv % p;
                    for (i, &mi) in m[..dm].iter().enumerate() {
                        r[k + i] += nq * mi;
                    }
                }
                r.pop();
                while r.last().is_some_and(|&c| c % p == 0) {
                    r.pop();
                }
            }
            for c in r.iter_mut() {
                *c %= p;
            }
            return r;
        }
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let q = r[r.len() - 1] * lead_inv % p;
            if q != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    r[k + i] = (r[k + i] + (p - q) * mi) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// `a * b mod m` for `m` monic of degree `n >= 1`, inputs of length `n`.
    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let n = m.len() - 1;
        let mut prod = vec![0u64; 2 * n.max(1)];
        // accumulate without reduction while it cannot overflow
        let safe = p.checked_mul(p).is_some_and(|pp| pp <= u64::MAX / (2 * n as u64 + 2));
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &mut prod[i..i + b.len()];
            if safe {
                for (r, &bj) in row.iter_mut().zip(b) {
                    *r += ai * bj;
                }
            } else {
                for (r, &bj) in row.iter_mut().zip(b) {
                    *r = (*r + ai * bj % p) % p;
                }
            }
        }
        for v in prod.iter_mut() {
            *v %= p;
        }
        // x^n = -(m_0 + ... + m_{n-1} x^{n-1}), over the nonzero terms only;
        // each entry absorbs at most n terms below p^2 before it is read
        let terms: Vec<(usize, u64)> = m[..n]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        for k in (n..prod.len()).rev() {
            let q = prod[k] % p;
            if q == 0 {
                continue;
            }
            prod[k] = 0;
            let nq = p - q;
            for &(i, mi) in &terms {
                if safe {
                    prod[k - n + i] += nq * mi;
                } else {
                    prod[k - n + i] = (prod[k - n + i] + nq * mi % p) % p;
                }
            }
        }
        prod.truncate(n);
        for v in prod.iter_mut() {
            *v %= p;
        }
        prod
    }

    pub fn powmod(base: &[u64], exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let n = m.len() - 1;
        let mut acc = vec![0u64; n];
        acc[0] = 1 % p;
        let mut b = base.to_vec();
        b.resize(n, 0);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            e >>= 1;
            if e > 0 {
                b = mulmod(&b, &b, m, p);
            }
        }
        acc
    }
}

/// `F_{p^m} = F_p[x]/(modulus)` with a monic irreducible modulus of degree `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    p: u64,
    m: usize,
    /// Coefficients of the monic modulus, constant term first, length `m + 1`.
    modulus: Vec<u64>,
}

impl FieldContext {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `p^m` as an arbitrary-precision integer.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.p).pow(self.m as u32)
    }
}

/// Ben-Or test: a monic `f` of degree `m` is irreducible over `F_p` iff
/// `gcd(f, x^(p^k) - x) = 1` for every `k <= m/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let mut x = vec![0u64; m];
    x[1] = 1;
    let mut h = x.clone();
    for _ in 1..=m / 2 {
        h = poly::powmod(&h, p, f, p);
        let g = poly::gcd(f, &poly::sub(&h, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Constructs `F_{p^m}`, taking as modulus the first irreducible monic
/// polynomial when the lower coefficients `(c_0, ..., c_{m-1})` are read as
/// a base-`p` counter with `c_0` least significant.
pub fn make_field(p: u64, m: usize) -> Result<FieldContext> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("field degree must be at least 1".into()));
    }
    let mut lower = vec![0u64; m];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(FieldContext { p, m, modulus: f });
        }
        // increment the counter
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            if i == m {
                return Err(Error::Internal(format!("no irreducible polynomial of degree {m} mod {p}")));
            }
        }
    }
}

/// Shared, lazily built field contexts keyed by `(p, m)`.
pub fn field(p: u64, m: usize) -> Result<Arc<FieldContext>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FieldContext>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = cache.lock().expect("field cache poisoned").get(&(p, m)) {
        return Ok(ctx.clone());
    }
    let ctx = Arc::new(make_field(p, m)?);
    cache
        .lock()
        .expect("field cache poisoned")
        .entry((p, m))
        .or_insert(ctx.clone());
    Ok(ctx)
}

/// An element of a [`FieldContext`], stored as a residue polynomial of
/// length `m`.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldContext>,
    coeffs: Vec<u64>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ctx.modulus == other.ctx.modulus
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 if c == 1 => "x".to_string(),
                1 => format!("{c}x"),
                _ if c == 1 => format!("x^{i}"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FieldElement {
    pub fn from_coeffs(ctx: &Arc<FieldContext>, coeffs: &[u64]) -> Self {
        let mut reduced = poly::rem(coeffs, &ctx.modulus, ctx.p);
        reduced.resize(ctx.m, 0);
        FieldElement {
            ctx: ctx.clone(),
            coeffs: reduced,
        }
    }

    pub fn from_int(ctx: &Arc<FieldContext>, n: i64) -> Self {
        Self::from_coeffs(ctx, &[n.rem_euclid(ctx.p as i64) as u64])
    }

    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        FieldElement {
            ctx: ctx.clone(),
            coeffs: vec![0; ctx.m],
        }
    }

    pub fn one(ctx: &Arc<FieldContext>) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 % self.ctx.p && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn pow(&self, exp: u64) -> Self {
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: poly::powmod(&self.coeffs, exp, &self.ctx.modulus, self.ctx.p),
        }
    }

    pub fn pow_big(&self, exp: &BigUint) -> Self {
        let mut acc = Self::one(&self.ctx);
        for i in (0..exp.bits()).rev() {
            acc = &acc * &acc;
            if exp.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    /// `self^(p^s)`.
    pub fn frobenius(&self, s: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..s {
            out = out.pow(self.ctx.p);
        }
        out
    }

    /// Whether the element lies in the subfield `F_{p^s}`.
    pub fn in_subfield(&self, s: usize) -> bool {
        self.frobenius(s) == *self
    }

    /// Degree over `F_p` of the field the element generates.
    pub fn degree(&self) -> usize {
        // length of the Frobenius orbit
        let mut y = self.frobenius(1);
        let mut s = 1;
        while y != *self {
            y = y.frobenius(1);
            s += 1;
        }
        s
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x^(p^m - 2)
        let e = self.ctx.size() - BigUint::from(2u32);
        Some(self.pow_big(&e))
    }

    /// Multiplicative order of a nonzero element, given a multiple of it.
    pub fn order_dividing(&self, multiple: u64) -> u64 {
        let mut ord = multiple;
        for (q, _) in factorize(multiple) {
            while ord % q == 0 && self.pow(ord / q).is_one() {
                ord /= q;
            }
        }
        ord
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        let p = self.ctx.p;
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        let p = self.ctx.p;
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a + p - b) % p)
                .collect(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        &FieldElement::zero(&self.ctx) - self
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: poly::mulmod(&self.coeffs, &rhs.coeffs, &self.ctx.modulus, self.ctx.p),
        }
    }
}

/// An element of exact multiplicative order `h`, computed as
/// `g^((p^m - 1)/h)` for the first candidate `g` (nonzero residues in
/// base-`p` counter order) for which that power has order exactly `h`.
pub fn element_of_order(ctx: &Arc<FieldContext>, h: u64) -> Result<FieldElement> {
    if h == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    if h == 1 {
        return Ok(FieldElement::one(ctx));
    }
    if gcd(h, ctx.p) != 1 || pow_mod(ctx.p, ctx.m as u64, h) != 1 {
        return Err(Error::InvalidArgument(format!(
            "{h} does not divide {}^{} - 1",
            ctx.p, ctx.m
        )));
    }
    let cofactor = (ctx.size() - 1u32) / BigUint::from(h);
    let primes: Vec<u64> = factorize(h).into_iter().map(|(q, _)| q).collect();
    let mut digits = vec![0u64; ctx.m];
    loop {
        // next nonzero candidate
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < ctx.p {
                break;
            }
            digits[i] = 0;
            i += 1;
            if i == ctx.m {
                return Err(Error::Internal(format!("no element of order {h} found")));
            }
        }
        // a constant has order dividing p - 1, and so does its power
        if digits[1..].iter().all(|&c| c == 0) && (ctx.p - 1) % h != 0 {
            continue;
        }
        let g = FieldElement::from_coeffs(ctx, &digits);
        let x = g.pow_big(&cofactor);
        if primes.iter().all(|&q| !x.pow(h / q).is_one()) {
            return Ok(x);
        }
    }
}

/// Traces of the dihedral group `<[[0,1],[1,0]], diag(x, x^-1)>` for `x`
/// of order `h`, computed in `F_{p^m}` with `m` the order of `p` mod `h`.
#[derive(Debug, Clone)]
pub struct TraceSet {
    pub h: u64,
    pub p: u64,
    generator: FieldElement,
    /// `x^i + x^-i` for `i = 0..=h/2`; distinct values.
    rotation_traces: Vec<FieldElement>,
}

impl TraceSet {
    pub fn context(&self) -> &Arc<FieldContext> {
        self.generator.context()
    }

    /// The order-`h` element `x` defining the rotations.
    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    pub fn rotation_traces(&self) -> &[FieldElement] {
        &self.rotation_traces
    }

    /// Every trace, the reflection trace `0` included, without repeats.
    pub fn all_traces(&self) -> Vec<FieldElement> {
        let mut out = self.rotation_traces.clone();
        let zero = FieldElement::zero(self.context());
        if !out.contains(&zero) {
            out.push(zero);
        }
        out
    }

    /// Degree over `F_p` of the field generated by all traces.
    pub fn trace_field_degree(&self) -> usize {
        // x^i + x^-i is a polynomial in x + x^-1, which therefore generates the rest
        self.rotation_traces
            .get(1)
            .unwrap_or(&self.rotation_traces[0])
            .degree()
    }
}

pub fn dihedral_trace_set(h: u64, p: u64) -> Result<TraceSet> {
    if h == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    if gcd(h, p) != 1 {
        return Err(Error::CharacteristicDividesOrder { p, h });
    }
    let m = multiplicative_order(p % h.max(1), h).unwrap_or(1).max(1) as usize;
    let ctx = field(p, m)?;
    let x = element_of_order(&ctx, h)?;
    let mut powers = Vec::with_capacity(h as usize + 1);
    powers.push(FieldElement::one(&ctx));
    for i in 1..=h as usize {
        let next = &powers[i - 1] * &x;
        powers.push(next);
    }
    let rotation_traces = (0..=(h / 2) as usize)
        .map(|i| &powers[i] + &powers[h as usize - i])
        .collect();
    Ok(TraceSet {
        h,
        p,
        generator: x,
        rotation_traces,
    })
}

/// Whether every trace of the set satisfies `t^(p^s) = t`.
pub fn traces_all_in_subfield(ts: &TraceSet, s: usize) -> bool {
    ts.rotation_traces.iter().all(|t| t.in_subfield(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        let f16 = make_field(2, 4).unwrap();
        assert_eq!(f16.degree(), 4);
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert!(make_field(4, 2).is_err());
    }

    #[test]
    fn irreducibility_by_root_count() {
        // degree 2 and 3 polynomials are irreducible iff they have no root
        for p in [2u64, 3, 5, 7] {
            for m in [2usize, 3] {
                let total = p.pow(m as u32);
                for k in 0..total {
                    let mut f: Vec<u64> = (0..m).map(|i| k / p.pow(i as u32) % p).collect();
                    f.push(1);
                    let has_root = (0..p).any(|r| {
                        f.iter().rev().fold(0u64, |acc, &c| (acc * r + c) % p) == 0
                    });
                    assert_eq!(is_irreducible(&f, p), !has_root, "f={f:?} p={p}");
                }
            }
        }
    }

    #[test]
    fn orders_of_constructed_elements() {
        let ctx = field(2, 4).unwrap();
        let x = element_of_order(&ctx, 5).unwrap();
        assert_eq!(x.order_dividing(15), 5);
        // x^4 + x^3 + x^2 + x + 1 = 0
        let mut s = FieldElement::zero(&ctx);
        for i in 0..5 {
            s = &s + &x.pow(i);
        }
        assert!(s.is_zero());
        let ctx4 = field(2, 2).unwrap();
        assert_eq!(element_of_order(&ctx4, 3).unwrap().order_dividing(3), 3);
        assert!(element_of_order(&ctx, 1).unwrap().is_one());
        assert!(element_of_order(&ctx, 7).is_err());
    }

    #[test]
    fn inverse_and_frobenius() {
        let ctx = field(3, 3).unwrap();
        let x = FieldElement::from_coeffs(&ctx, &[1, 2, 1]);
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert!(x.frobenius(3) == x);
        assert!(FieldElement::from_int(&ctx, 2).in_subfield(1));
    }

    #[test]
    fn trace_set_examples() {
        let ts = dihedral_trace_set(3, 2).unwrap();
        assert!(traces_all_in_subfield(&ts, 1));
        let vals: Vec<u64> = ts.all_traces().iter().map(|t| t.coeffs()[0]).collect();
        let mut sorted = vals.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1]);

        let ts = dihedral_trace_set(5, 2).unwrap();
        assert!(!traces_all_in_subfield(&ts, 1));
        assert!(traces_all_in_subfield(&ts, 2));
        assert_eq!(ts.trace_field_degree(), 2);
        let t = &ts.rotation_traces()[1];
        assert_eq!(t * t, t + &FieldElement::one(ts.context()));

        let ts = dihedral_trace_set(1, 5).unwrap();
        let all = ts.all_traces();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&FieldElement::from_int(ts.context(), 2)));
        assert_eq!(dihedral_trace_set(1, 2).unwrap().all_traces().len(), 1);
        assert!(matches!(
            dihedral_trace_set(6, 3),
            Err(Error::CharacteristicDividesOrder { .. })
        ));
    }

    #[test]
    fn rotation_trace_count() {
        for (h, p) in [(7u64, 2u64), (12, 5), (9, 7), (10, 3)] {
            let ts = dihedral_trace_set(h, p).unwrap();
            let set: std::collections::HashSet<_> = ts.rotation_traces().iter().cloned().collect();
            assert_eq!(set.len() as u64, h / 2 + 1);
        }
    }
}
