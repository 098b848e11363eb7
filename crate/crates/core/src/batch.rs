//! Amortised class-number tabulation for every discriminant up to a bound.
//!
//! One sweep over all reduced triples `(a, b, c)` with `|b| <= a <= c` and
//! `4ac - b^2 <= X` counts the reduced forms of every discriminant at once,
//! `O(X^{3/2})` work in total. For a fundamental discriminant every form is
//! primitive, so the count is the class number.
//!
//! The `|D|` range is cut into cache-sized segments swept independently
//! (in parallel when a rayon pool has more than one thread); segments own
//! disjoint slices of the counter array, so the result does not depend on
//! the worker count.

use rayon::prelude::*;

use crate::arith::squarefree_table;
use crate::error::{Error, Result};

/// Largest `X` tabulated unless the caller raises the budget.
pub const DEFAULT_BATCH_BUDGET: u64 = 4_000_000;

const SEGMENT: usize = 1 << 17;

/// Counts of reduced forms (primitive or not) for every `3 <= |D| <= X`,
/// with fundamental flags.
#[derive(Debug, Clone)]
pub struct ClassNumberTable {
    limit: u64,
    counts: Vec<u32>,
    fundamental: Vec<bool>,
}

impl ClassNumberTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `h(D)` for a fundamental `D` with `|D| <= limit`.
    pub fn class_number(&self, d: i64) -> Option<u64> {
        let abs = d.unsigned_abs();
        if d >= 0 || abs > self.limit || !self.fundamental[abs as usize] {
            return None;
        }
        Some(self.counts[abs as usize] as u64)
    }

    /// Number of reduced forms of discriminant `D`, primitive or not.
    pub fn reduced_form_count(&self, d: i64) -> Option<u64> {
        let abs = d.unsigned_abs();
        if d >= 0 || abs > self.limit {
            return None;
        }
        Some(self.counts[abs as usize] as u64)
    }

    pub fn is_fundamental(&self, d: i64) -> bool {
        let abs = d.unsigned_abs();
        d < 0 && abs <= self.limit && self.fundamental[abs as usize]
    }

    /// `(D, h(D))` for every fundamental `D`, ascending `|D|`.
    pub fn fundamental_entries(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        (3..=self.limit as usize)
            .filter(|&n| self.fundamental[n])
            .map(|n| (-(n as i64), self.counts[n] as u64))
    }
}

/// Tabulates `h(D)` for all fundamental `D` with `|D| <= max_abs`.
pub fn batch_class_numbers(max_abs: u64) -> Result<ClassNumberTable> {
    batch_class_numbers_with_budget(max_abs, DEFAULT_BATCH_BUDGET)
}

pub fn batch_class_numbers_with_budget(max_abs: u64, budget: u64) -> Result<ClassNumberTable> {
    if max_abs < 3 {
        return Err(Error::InvalidArgument(format!(
            "batch bound must be at least 3, got {max_abs}"
        )));
    }
    if max_abs > budget {
        return Err(Error::BudgetExceeded {
            requested: max_abs,
            budget,
        });
    }
    let len = max_abs as usize + 1;
    let mut counts = vec![0u32; len];
    counts
        .par_chunks_mut(SEGMENT)
        .enumerate()
        .for_each(|(i, seg)| {
            let lo = (i * SEGMENT) as u64;
            sweep_segment(lo, seg);
        });
    Ok(ClassNumberTable {
        limit: max_abs,
        counts,
        fundamental: fundamental_flags(max_abs),
    })
}

/// Adds the reduced forms with `lo <= 4ac - b^2 < lo + seg.len()` into `seg`.
fn sweep_segment(lo: u64, seg: &mut [u32]) {
    let hi = lo + seg.len() as u64; // exclusive
    let mut a = 1u64;
    // reduced forms satisfy |D| >= 3a^2
    while 3 * a * a < hi {
        let four_a = 4 * a;
        for b in 0..=a {
            let b2 = b * b;
            // c >= a; values with |D| < lo are skipped
            let c_lo = a.max((lo + b2).div_ceil(four_a));
            let c_hi = (hi - 1 + b2) / four_a;
            if c_lo > c_hi {
                continue;
            }
            let mut idx = (four_a * c_lo - b2 - lo) as usize;
            let step = four_a as usize;
            let mut c = c_lo;
            // (a, b, c) and (a, -b, c) are distinct reduced forms unless
            // b = 0, b = a or a = c.
            if c == a {
                seg[idx] += 1;
                idx += step;
                c += 1;
            }
            let w = if b == 0 || b == a { 1 } else { 2 };
            while c <= c_hi {
                seg[idx] += w;
                idx += step;
                c += 1;
            }
        }
        a += 1;
    }
}

/// `flags[n]` is true iff `-n` is a fundamental discriminant.
pub fn fundamental_flags(max_abs: u64) -> Vec<bool> {
    let sf = squarefree_table(max_abs);
    let mut flags = vec![false; max_abs as usize + 1];
    for n in 3..=max_abs as usize {
        flags[n] = match n % 4 {
            // D ≡ 1 (mod 4)
            3 => sf[n],
            // D = 4m with m ≡ 2, 3 (mod 4), i.e. |m| ≡ 2, 1 (mod 4)
            0 => matches!((n / 4) % 4, 1 | 2) && sf[n / 4],
            _ => false,
        };
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{enumerate_reduced, is_fundamental, Discriminant};

    #[test]
    fn small_table() {
        let t = batch_class_numbers(50).unwrap();
        let expected = [
            (-3, 1),
            (-4, 1),
            (-7, 1),
            (-8, 1),
            (-11, 1),
            (-15, 2),
            (-19, 1),
            (-20, 2),
            (-23, 3),
            (-24, 2),
            (-31, 3),
            (-35, 2),
            (-39, 4),
            (-40, 2),
            (-43, 1),
            (-47, 5),
        ];
        let got: Vec<(i64, u64)> = t.fundamental_entries().collect();
        assert_eq!(got, expected.to_vec());
        let t4 = batch_class_numbers(4).unwrap();
        assert_eq!(t4.fundamental_entries().collect::<Vec<_>>(), vec![(-3, 1), (-4, 1)]);
    }

    #[test]
    fn budget_and_bounds() {
        assert!(matches!(
            batch_class_numbers_with_budget(1000, 999),
            Err(Error::BudgetExceeded { requested: 1000, budget: 999 })
        ));
        assert!(batch_class_numbers(2).is_err());
    }

    #[test]
    fn flags_match_definition() {
        let flags = fundamental_flags(3000);
        for n in 1..=3000u64 {
            assert_eq!(flags[n as usize], is_fundamental(-(n as i64)), "n={n}");
        }
    }

    #[test]
    fn segment_boundaries_do_not_matter() {
        // a table large enough to span several segments
        let t = batch_class_numbers(300_000).unwrap();
        for abs in [131_071u64, 131_072, 131_075, 262_143, 262_144, 262_147, 299_999] {
            let d = -(abs as i64);
            if let Ok(disc) = Discriminant::new(d) {
                if disc.is_fundamental() {
                    assert_eq!(t.class_number(d), Some(enumerate_reduced(disc).len() as u64));
                }
            }
        }
    }
}
