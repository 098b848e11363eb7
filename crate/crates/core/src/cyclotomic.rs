//! Exact elements of `Z[ζ_h]`, stored as integer combinations of the powers
//! `ζ^0, ..., ζ^(h-1)` (an exponent multiset over `Z/h`). Two values are
//! compared after reduction modulo the cyclotomic polynomial `Φ_h`, the only
//! place where the relations between roots of unity are used.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::divisors;

#[derive(Debug, Clone)]
pub struct Cyclotomic {
    h: u64,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(h: u64) -> Self {
        assert!(h >= 1, "root-of-unity order must be positive");
        Cyclotomic {
            h,
            coeffs: vec![0; h as usize],
        }
    }

    pub fn integer(h: u64, n: i64) -> Self {
        let mut z = Self::zero(h);
        z.coeffs[0] = n;
        z
    }

    pub fn one(h: u64) -> Self {
        Self::integer(h, 1)
    }

    /// `ζ^e`.
    pub fn root(h: u64, e: i64) -> Self {
        let mut z = Self::zero(h);
        z.coeffs[e.rem_euclid(h as i64) as usize] = 1;
        z
    }

    /// `ζ^e + ζ^-e`.
    pub fn trace_of_root(h: u64, e: i64) -> Self {
        &Self::root(h, e) + &Self::root(h, -e)
    }

    pub fn order(&self) -> u64 {
        self.h
    }

    /// Multiplicities of each power of `ζ` in this representation.
    pub fn exponent_coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add_root(&mut self, e: i64, times: i64) {
        self.coeffs[e.rem_euclid(self.h as i64) as usize] += times;
    }

    /// Divides every coefficient by `k`, or `None` if some is not divisible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        if self.coeffs.iter().any(|c| c % k != 0) {
            return None;
        }
        Some(Cyclotomic {
            h: self.h,
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        })
    }

    /// Canonical representative: the remainder modulo `Φ_h`, of length `φ(h)`.
    pub fn normal_form(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.h);
        let n = phi.len() - 1;
        let mut r = self.coeffs.clone();
        // Φ_h is monic, so integer long division is exact
        for k in (n..r.len()).rev() {
            let q = r[k];
            if q == 0 {
                continue;
            }
            for (i, &c) in phi.iter().enumerate() {
                r[k - n + i] -= q * c;
            }
        }
        r.truncate(n);
        r
    }

    /// The rational integer this value equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<i64> {
        let nf = self.normal_form();
        if nf[1..].iter().all(|&c| c == 0) {
            Some(nf[0])
        } else {
            None
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.normal_form() == other.normal_form()
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, _) => format!("{c}"),
                (_, 1) => format!("z^{i}"),
                (_, -1) => format!("-z^{i}"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.h, rhs.h);
        Cyclotomic {
            h: self.h,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.h, rhs.h);
        Cyclotomic {
            h: self.h,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            h: self.h,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    /// Cyclic convolution: `ζ^h = 1`.
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.h, rhs.h);
        let h = self.h as usize;
        let mut out = vec![0i64; h];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[(i + j) % h] += a * b;
            }
        }
        Cyclotomic { h: self.h, coeffs: out }
    }
}

/// Coefficients of `Φ_n`, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        num = divide_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn divide_monic(a: &[i64], m: &[i64]) -> Vec<i64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - dm];
    for k in (0..q.len()).rev() {
        let c = r[k + dm];
        q[k] = c;
        for (i, &mi) in m.iter().enumerate() {
            r[k + i] -= c * mi;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0), "inexact cyclotomic division");
    q
}
