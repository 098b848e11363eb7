//! Natural densities measured at finite bounds.
//!
//! A density claim becomes a pair of exact counts `#{n <= X : n ∈ M ∩ N}` and
//! `#{n <= X : n ∈ N}`; limits are checked as trends across bounds.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::abelian::{is_p_suitable, prime_to_part, suitability_from_order, AbelianGroup};
use crate::arith::{divisors, is_squarefree, squarefree_table, SpfSieve};
use crate::batch::{batch_class_numbers_with_budget, ClassNumberTable, DEFAULT_BATCH_BUDGET};
use crate::error::{Error, Result};
use crate::forms::{class_group, enumerate_reduced, power, Discriminant, QuadForm};

/// Largest bound enumerated for predicates that need no class-group data.
pub const DEFAULT_DENSITY_BUDGET: u64 = 100_000_000;

type Predicate = Arc<dyn Fn(u64) -> bool + Send + Sync>;
type Enumerator = Arc<dyn Fn(u64) -> Vec<u64> + Send + Sync>;

/// A set of positive integers given by a membership predicate, optionally
/// with a faster enumerator of its members up to a bound.
#[derive(Clone)]
pub struct IntegerSet {
    name: String,
    predicate: Predicate,
    enumerator: Option<Enumerator>,
}

impl fmt::Debug for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerSet").field("name", &self.name).finish()
    }
}

impl IntegerSet {
    pub fn new(name: impl Into<String>, pred: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        IntegerSet {
            name: name.into(),
            predicate: Arc::new(pred),
            enumerator: None,
        }
    }

    pub fn with_enumerator(
        mut self,
        enumerate: impl Fn(u64) -> Vec<u64> + Send + Sync + 'static,
    ) -> Self {
        self.enumerator = Some(Arc::new(enumerate));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && (self.predicate)(n)
    }

    /// Members `<= x`, ascending.
    pub fn members_up_to(&self, x: u64) -> Vec<u64> {
        match &self.enumerator {
            Some(e) => e(x),
            None => (1..=x).filter(|&n| (self.predicate)(n)).collect(),
        }
    }

    /// `#{n <= x : n ∈ self}`.
    pub fn count_up_to(&self, x: u64) -> u64 {
        match &self.enumerator {
            Some(e) => e(x).len() as u64,
            None => (1..=x).filter(|&n| (self.predicate)(n)).count() as u64,
        }
    }

    pub fn all() -> Self {
        IntegerSet::new("N", |_| true).with_enumerator(|x| (1..=x).collect())
    }

    /// `{n : n ≡ r (mod m)}`.
    pub fn residue_class(r: u64, m: u64) -> Self {
        let r = r % m;
        let start = if r == 0 { m } else { r };
        IntegerSet::new(format!("{r} mod {m}"), move |n| n % m == r)
            .with_enumerator(move |x| (start..=x).step_by(m as usize).collect())
    }

    pub fn multiples_of(k: u64) -> Self {
        Self::residue_class(0, k).renamed(format!("{k}N"))
    }

    /// Squarefree integers; a table covers `n <= limit`, trial division beyond.
    pub fn squarefree(limit: u64) -> Self {
        let table = Arc::new(squarefree_table(limit));
        IntegerSet::new("squarefree", move |n| match table.get(n as usize) {
            Some(&b) => b,
            None => is_squarefree(n),
        })
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn intersection(&self, other: &IntegerSet) -> IntegerSet {
        let (a, b) = (self.predicate.clone(), other.predicate.clone());
        let out = IntegerSet::new(format!("({}) ∩ ({})", self.name, other.name), move |n| {
            a(n) && b(n)
        });
        match &self.enumerator {
            Some(e) => {
                let (e, b) = (e.clone(), other.predicate.clone());
                out.with_enumerator(move |x| e(x).into_iter().filter(|&n| b(n)).collect())
            }
            None => out,
        }
    }

    pub fn union(&self, other: &IntegerSet) -> IntegerSet {
        let (a, b) = (self.predicate.clone(), other.predicate.clone());
        IntegerSet::new(format!("({}) ∪ ({})", self.name, other.name), move |n| a(n) || b(n))
    }

    pub fn difference(&self, other: &IntegerSet) -> IntegerSet {
        let (a, b) = (self.predicate.clone(), other.predicate.clone());
        IntegerSet::new(format!("({}) \\ ({})", self.name, other.name), move |n| a(n) && !b(n))
    }

    /// Union of a family of sets.
    pub fn union_all(name: impl Into<String>, sets: Vec<IntegerSet>) -> IntegerSet {
        let preds: Vec<Predicate> = sets.into_iter().map(|s| s.predicate).collect();
        IntegerSet::new(name, move |n| preds.iter().any(|p| p(n)))
    }
}

/// `nA = {na : a ∈ A}`.
pub fn dilate(a: &IntegerSet, n: u64) -> IntegerSet {
    assert!(n >= 1, "dilation factor must be positive");
    if n == 1 {
        return a.clone();
    }
    let pred = a.predicate.clone();
    let out = IntegerSet::new(format!("{n}({})", a.name), move |m| m % n == 0 && pred(m / n));
    match &a.enumerator {
        Some(e) => {
            let e = e.clone();
            out.with_enumerator(move |x| e(x / n).into_iter().map(|m| m * n).collect())
        }
        None => out,
    }
}

/// Exact counts of `M ∩ N` and `N` up to a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityEstimate {
    pub bound: u64,
    pub count_member: u64,
    pub count_ambient: u64,
}

impl DensityEstimate {
    pub fn new(bound: u64, count_member: u64, count_ambient: u64) -> Self {
        debug_assert!(count_member <= count_ambient);
        DensityEstimate {
            bound,
            count_member,
            count_ambient,
        }
    }

    /// Exact ratio; `0` for an empty ambient set.
    pub fn ratio(&self) -> Ratio<u64> {
        if self.count_ambient == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(self.count_member, self.count_ambient)
        }
    }

    pub fn decimal(&self) -> f64 {
        if self.count_ambient == 0 {
            0.0
        } else {
            self.count_member as f64 / self.count_ambient as f64
        }
    }
}

pub fn estimate(m: &IntegerSet, n: &IntegerSet, x: u64) -> Result<DensityEstimate> {
    estimate_with_budget(m, n, x, DEFAULT_DENSITY_BUDGET)
}

pub fn estimate_with_budget(
    m: &IntegerSet,
    n: &IntegerSet,
    x: u64,
    budget: u64,
) -> Result<DensityEstimate> {
    if x > budget {
        return Err(Error::BudgetExceeded { requested: x, budget });
    }
    let ambient = n.members_up_to(x);
    let member = ambient.iter().filter(|&&k| m.contains(k)).count() as u64;
    Ok(DensityEstimate::new(x, member, ambient.len() as u64))
}

/// `1, 2, 5, 10, 20, 50, ...` from `start` up to `x`, with `x` appended.
pub fn geometric_grid(start: u64, x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for k in [1u64, 2, 5] {
            let v = k * decade;
            if v > x {
                break 'outer;
            }
            if v >= start {
                out.push(v);
            }
        }
        decade *= 10;
    }
    if out.last() != Some(&x) {
        out.push(x);
    }
    out
}

/// `M(x)`, the number of `n <= x` all of whose prime factors are congruent
/// to one of `residues` modulo `modulus`, at each point of `samples`.
pub fn landau_count(samples: &[u64], modulus: u64, residues: &[u64]) -> Result<Vec<(u64, u64)>> {
    let x = samples.iter().copied().max().unwrap_or(0);
    if x > DEFAULT_DENSITY_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: x,
            budget: DEFAULT_DENSITY_BUDGET,
        });
    }
    if modulus == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let allowed: Vec<bool> = {
        let mut a = vec![false; modulus as usize];
        for &r in residues {
            if crate::arith::gcd(r % modulus, modulus) != 1 {
                return Err(Error::InvalidArgument(format!(
                    "residue {r} is not a unit mod {modulus}"
                )));
            }
            a[(r % modulus) as usize] = true;
        }
        a
    };
    let sieve = SpfSieve::new(x.max(2));
    let mut good = vec![false; x as usize + 1];
    let mut sorted: Vec<u64> = samples.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::with_capacity(samples.len());
    let mut count = 0u64;
    let mut next = 0;
    for n in 1..=x as usize {
        let ok = if n == 1 {
            true
        } else {
            let q = sieve.spf(n as u64);
            allowed[(q % modulus) as usize] && good[n / q as usize]
        };
        good[n] = ok;
        count += ok as u64;
        while next < sorted.len() && sorted[next] == n as u64 {
            out.push((n as u64, count));
            next += 1;
        }
    }
    while next < sorted.len() {
        // samples below 1
        out.insert(0, (sorted[next], 0));
        next += 1;
    }
    Ok(out)
}

/// One sample of the normalised Landau ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauSample {
    pub x: u64,
    pub count: u64,
    pub ratio: f64,
}

/// `r(x) = M(x) (log x)^(1 - r/φ(A)) / x` on the grid from `10^3` to `x`.
pub fn landau_ratio_check(x: u64, modulus: u64, residues: &[u64]) -> Result<Vec<LandauSample>> {
    if x < 1000 {
        return Err(Error::InvalidArgument("the Landau check needs X >= 1000".into()));
    }
    let grid = geometric_grid(1000, x);
    let counts = landau_count(&grid, modulus, residues)?;
    let exponent = 1.0 - residues.len() as f64 / crate::arith::euler_phi(modulus) as f64;
    Ok(counts
        .into_iter()
        .map(|(x, count)| LandauSample {
            x,
            count,
            ratio: count as f64 * (x as f64).ln().powf(exponent) / x as f64,
        })
        .collect())
}

/// A fundamental discriminant with its class group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupRow {
    pub disc: i64,
    pub h: u64,
    pub structure: AbelianGroup,
}

fn batch_for(x: u64, budget: u64) -> Result<ClassNumberTable> {
    batch_class_numbers_with_budget(x.max(3), budget)
}

/// Fundamental `D` with `|D| <= x` whose class group has exponent 3.
pub fn exponent3_scan(x: u64) -> Result<Vec<ClassGroupRow>> {
    exponent3_scan_from(&batch_for(x, DEFAULT_BATCH_BUDGET)?, x)
}

pub fn exponent3_scan_from(table: &ClassNumberTable, x: u64) -> Result<Vec<ClassGroupRow>> {
    check_table(table, x)?;
    // exponent 3 forces h to be a power of 3 greater than 1
    let candidates: Vec<(i64, u64)> = table
        .fundamental_entries()
        .take_while(|&(d, _)| d.unsigned_abs() <= x)
        .filter(|&(_, h)| h > 1 && is_power_of(h, 3))
        .collect();
    let rows: Result<Vec<Option<ClassGroupRow>>> = candidates
        .par_iter()
        .map(|&(d, h)| {
            let cg = class_group(Discriminant::new(d)?)?;
            Ok((cg.structure().exponent() == 3).then(|| ClassGroupRow {
                disc: d,
                h,
                structure: cg.structure().clone(),
            }))
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

fn check_table(table: &ClassNumberTable, x: u64) -> Result<()> {
    if x > table.limit() {
        return Err(Error::InvalidArgument(format!(
            "class-number table covers |D| <= {}, asked for {x}",
            table.limit()
        )));
    }
    Ok(())
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// For each target order, the number of fundamental `D` with `|D| < x` and
/// `h(D)` equal to it.
pub fn class_order_census(x: u64, orders: &[u64]) -> Result<Vec<(u64, u64)>> {
    let table = batch_for(x.saturating_sub(1), DEFAULT_BATCH_BUDGET)?;
    class_order_census_from(&table, x, orders)
}

pub fn class_order_census_from(
    table: &ClassNumberTable,
    x: u64,
    orders: &[u64],
) -> Result<Vec<(u64, u64)>> {
    check_table(table, x.saturating_sub(1))?;
    let mut counts: HashMap<u64, u64> = orders.iter().map(|&h| (h, 0)).collect();
    for (d, h) in table.fundamental_entries() {
        if d.unsigned_abs() >= x {
            break;
        }
        if let Some(c) = counts.get_mut(&h) {
            *c += 1;
        }
    }
    Ok(orders.iter().map(|h| (*h, counts[h])).collect())
}

/// Squarefree `d ≡ 3 (mod 4)` up to a bound whose field `Q(sqrt(-d))` has a
/// p-suitable class group, indexed by `d`.
#[derive(Debug, Clone)]
pub struct SuitableDivisors {
    p: u64,
    flags: Vec<bool>,
}

impl SuitableDivisors {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn limit(&self) -> u64 {
        self.flags.len() as u64 - 1
    }

    pub fn is_suitable(&self, d: u64) -> bool {
        self.flags.get(d as usize).copied().unwrap_or(false)
    }

    pub fn suitable_ds(&self) -> impl Iterator<Item = u64> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(d, _)| d as u64)
    }

    /// Marks every multiple of a suitable `d`: `qualifying[n]` for `n <= limit`.
    pub fn sieve(&self) -> Vec<bool> {
        let limit = self.limit() as usize;
        let mut marks = vec![false; limit + 1];
        for d in self.suitable_ds() {
            for m in (d as usize..=limit).step_by(d as usize) {
                marks[m] = true;
            }
        }
        marks
    }

    /// Divisor-by-divisor membership of `n` (`n <= limit`).
    pub fn qualifies_by_divisors(&self, n: u64) -> bool {
        divisors(n).into_iter().any(|d| self.is_suitable(d))
    }
}

/// p-suitability of `CL(Q(sqrt(-d)))` for every squarefree `d ≡ 3 (mod 4)`,
/// `d <= x`. The class number decides most cases; the rest fall back to the
/// full class group.
pub fn suitable_divisors(p: u64, x: u64) -> Result<SuitableDivisors> {
    let table = batch_for(x, DEFAULT_BATCH_BUDGET)?;
    suitable_divisors_from(&table, p, x)
}

pub fn suitable_divisors_from(table: &ClassNumberTable, p: u64, x: u64) -> Result<SuitableDivisors> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    check_table(table, x)?;
    let flags: Result<Vec<bool>> = (0..=x)
        .into_par_iter()
        .map(|d| {
            if d % 4 != 3 {
                return Ok(false);
            }
            let Some(h) = table.class_number(-(d as i64)) else {
                return Ok(false); // not squarefree
            };
            match suitability_from_order(h, p) {
                Some(s) => Ok(s),
                None => suitable_by_powering(Discriminant::new(-(d as i64))?, h, p),
            }
        })
        .collect();
    Ok(SuitableDivisors { p, flags: flags? })
}

/// With `h = p^v h'`, the prime-to-p part of the exponent divides `p^2 - 1`
/// iff every class is killed by `p^v gcd(h', p^2 - 1)`.
fn suitable_by_powering(d: Discriminant, h: u64, p: u64) -> Result<bool> {
    let h_prime = prime_to_part(h, p);
    let killer = (h / h_prime) * crate::arith::gcd(h_prime, p * p - 1);
    let principal = QuadForm::principal(d);
    for f in enumerate_reduced(d) {
        if power(f, killer)? != principal {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Density among all `n <= x` of those with a suitable divisor.
pub fn suitable_divisor_density(p: u64, x: u64) -> Result<DensityEstimate> {
    let sd = suitable_divisors(p, x)?;
    Ok(suitable_divisor_density_from(&sd))
}

pub fn suitable_divisor_density_from(sd: &SuitableDivisors) -> DensityEstimate {
    let marks = sd.sieve();
    let member = marks[1..].iter().filter(|&&b| b).count() as u64;
    DensityEstimate::new(sd.limit(), member, sd.limit())
}

/// Direct evaluation of the suitable-divisor predicate: every divisor is
/// checked with its own class group. Memoised per divisor.
#[derive(Debug, Clone)]
pub struct DirectSuitability {
    p: u64,
    memo: HashMap<u64, bool>,
}

impl DirectSuitability {
    pub fn new(p: u64) -> Self {
        DirectSuitability {
            p,
            memo: HashMap::new(),
        }
    }

    /// Whether `d` is squarefree, `≡ 3 (mod 4)` and p-suitable.
    pub fn divisor_is_suitable(&mut self, d: u64) -> Result<bool> {
        if d % 4 != 3 || !is_squarefree(d) {
            return Ok(false);
        }
        if let Some(&s) = self.memo.get(&d) {
            return Ok(s);
        }
        let cg = class_group(Discriminant::new(-(d as i64))?)?;
        let s = is_p_suitable(cg.structure(), self.p).suitable;
        self.memo.insert(d, s);
        Ok(s)
    }

    pub fn qualifies(&mut self, n: u64) -> Result<bool> {
        for d in divisors(n) {
            if self.divisor_is_suitable(d)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Density, among fundamental `D` with `|D| <= x`, of those whose class
/// number is a power of `p` (`h = 1` included).
pub fn pgroup_density(p: u64, x: u64) -> Result<DensityEstimate> {
    let table = batch_for(x, DEFAULT_BATCH_BUDGET)?;
    pgroup_density_from(&table, p, x)
}

pub fn pgroup_density_from(table: &ClassNumberTable, p: u64, x: u64) -> Result<DensityEstimate> {
    check_table(table, x)?;
    let (mut member, mut ambient) = (0, 0);
    for (d, h) in table.fundamental_entries() {
        if d.unsigned_abs() > x {
            break;
        }
        ambient += 1;
        member += is_power_of(h, p) as u64;
    }
    Ok(DensityEstimate::new(x, member, ambient))
}

/// Fraction of fundamental `D` with `|D| <= x` and `p | h(D)`.
pub fn divisibility_fraction(table: &ClassNumberTable, p: u64, x: u64) -> Result<DensityEstimate> {
    check_table(table, x)?;
    let (mut member, mut ambient) = (0, 0);
    for (d, h) in table.fundamental_entries() {
        if d.unsigned_abs() > x {
            break;
        }
        ambient += 1;
        member += (h % p == 0) as u64;
    }
    Ok(DensityEstimate::new(x, member, ambient))
}

/// Finite-bound checks of the set-algebra lemmas on natural density.
pub mod lemmas {
    use super::*;

    /// For `A ⊆ B ⊆ C`: the three ratios at `x` and whether
    /// `Δ(A,C) >= 1 - 2ε` with `ε = max(1 - Δ(A,B), 1 - Δ(B,C))`.
    pub fn transitivity(a: &IntegerSet, b: &IntegerSet, c: &IntegerSet, x: u64) -> Result<(Ratio<u64>, Ratio<u64>, Ratio<u64>, bool)> {
        let ab = estimate(a, b, x)?.ratio();
        let bc = estimate(b, c, x)?.ratio();
        let ac = estimate(a, c, x)?.ratio();
        let one = Ratio::from_integer(1u64);
        let eps = std::cmp::max(one - ab, one - bc);
        let holds = eps * 2u64 >= one || ac >= one - eps * 2u64;
        Ok((ab, bc, ac, holds))
    }

    /// `((nA)(nx), A(x))`: the dilated count and the original count.
    pub fn dilation_counts(a: &IntegerSet, n: u64, x: u64) -> (u64, u64) {
        (dilate(a, n).count_up_to(n * x), a.count_up_to(x))
    }

    /// `(B(x) - A(x), (B1(x) - A1(x)) + (B2(x) - A2(x)))` for
    /// `A = A1 ∪ A2`, `B = B1 ∪ B2`; the first never exceeds the second.
    pub fn union_deficits(
        a1: &IntegerSet,
        b1: &IntegerSet,
        a2: &IntegerSet,
        b2: &IntegerSet,
        x: u64,
    ) -> (u64, u64) {
        let a = a1.union(a2);
        let b = b1.union(b2);
        let lhs = b.count_up_to(x) - a.intersection(&b).count_up_to(x);
        let rhs = (b1.count_up_to(x) - a1.intersection(b1).count_up_to(x))
            + (b2.count_up_to(x) - a2.intersection(b2).count_up_to(x));
        (lhs, rhs)
    }

    /// Squarefree integers `≡ 3 (mod 4)`.
    pub fn squarefree_3mod4(limit: u64) -> IntegerSet {
        IntegerSet::squarefree(limit)
            .intersection(&IntegerSet::residue_class(3, 4))
            .renamed("squarefree ∩ 3 mod 4")
    }

    /// `⋃_{n <= big_n} (2n-1)^2 A` for `A` the squarefree integers `≡ 3 (mod 4)`.
    pub fn odd_square_union(big_n: u64, limit: u64) -> IntegerSet {
        let a = squarefree_3mod4(limit);
        let parts = (1..=big_n).map(|n| dilate(&a, (2 * n - 1) * (2 * n - 1))).collect();
        IntegerSet::union_all(format!("odd-square union, N = {big_n}"), parts)
    }

    /// `Σ_{n <= N} 1/(2n-1)^2`.
    pub fn odd_square_weight(big_n: u64) -> f64 {
        (1..=big_n).map(|n| 1.0 / ((2 * n - 1) as f64).powi(2)).sum()
    }

    /// The first `n` primes `≡ 3 (mod 4)`.
    pub fn primes_3mod4(n: usize) -> Vec<u64> {
        (3u64..)
            .step_by(4)
            .filter(|&q| crate::arith::is_prime(q))
            .take(n)
            .collect()
    }

    /// `C_N = B \ ⋃_{i <= N} p_i A` with `A`, `B` the classes `3`, `1 mod 4`.
    pub fn unit_class_complement(big_n: usize) -> IntegerSet {
        let a = IntegerSet::residue_class(3, 4);
        let b = IntegerSet::residue_class(1, 4);
        let parts = primes_3mod4(big_n).into_iter().map(|q| dilate(&a, q)).collect();
        let union = IntegerSet::union_all("dilations", parts);
        b.difference(&union).renamed(format!("C_{big_n}"))
    }

    /// `∏_{i <= N} (p_i - 1)/p_i` over the first `N` primes `≡ 3 (mod 4)`.
    pub fn unit_class_product(big_n: usize) -> f64 {
        primes_3mod4(big_n)
            .into_iter()
            .map(|q| (q - 1) as f64 / q as f64)
            .product()
    }

    /// `N \ ⋃_{n <= big_n} 4^n A` with `A` the integers not divisible by 4.
    pub fn power_of_four_complement(big_n: u32) -> IntegerSet {
        let a = IntegerSet::new("not divisible by 4", |n| n % 4 != 0);
        let parts = (0..=big_n).map(|n| dilate(&a, 4u64.pow(n))).collect();
        let union = IntegerSet::union_all("dilations", parts);
        IntegerSet::all().difference(&union).renamed(format!("C_{big_n}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_estimates() {
        let all = IntegerSet::all();
        assert_eq!(estimate(&all, &all, 100).unwrap().ratio(), Ratio::from_integer(1));
        let e = estimate(&IntegerSet::multiples_of(4), &all, 100_000).unwrap();
        assert_eq!(e.count_member, 25_000);
        let odd = IntegerSet::residue_class(1, 2);
        let d = dilate(&odd, 2);
        assert_eq!(d.members_up_to(12), vec![2, 6, 10]);
        assert!(d.contains(14) && !d.contains(4));
        assert!(matches!(
            estimate_with_budget(&all, &all, 11, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn grid() {
        assert_eq!(geometric_grid(1000, 20_000), vec![1000, 2000, 5000, 10_000, 20_000]);
        assert_eq!(geometric_grid(1000, 3000), vec![1000, 2000, 3000]);
    }

    #[test]
    fn landau_small_cases() {
        let m = landau_count(&[100], 4, &[1]).unwrap();
        let brute = (1..=100u64)
            .filter(|&n| crate::arith::factorize(n).iter().all(|(q, _)| q % 4 == 1))
            .count() as u64;
        assert_eq!(m, vec![(100, brute)]);
        assert_eq!(brute, 15);
        let m = landau_count(&[99, 1000], 4, &[1, 3]).unwrap();
        assert_eq!(m, vec![(99, 50), (1000, 500)]);
        assert_eq!(landau_count(&[1, 50], 3, &[]).unwrap(), vec![(1, 1), (50, 1)]);
        assert!(landau_count(&[10], 4, &[2]).is_err());
    }

    #[test]
    fn census_and_scans_small() {
        let t = crate::batch::batch_class_numbers(1000).unwrap();
        assert_eq!(class_order_census_from(&t, 50, &[1]).unwrap(), vec![(1, 7)]);
        let rows = exponent3_scan_from(&t, 1000).unwrap();
        let ds: Vec<i64> = rows.iter().map(|r| r.disc).collect();
        assert!(ds.contains(&-23) && ds.contains(&-31));
        assert!(exponent3_scan_from(&t, 20).unwrap().is_empty());
        let e = pgroup_density_from(&t, 2, 50).unwrap();
        assert_eq!((e.count_member, e.count_ambient), (13, 16));
        assert_eq!(suitable_divisor_density(2, 10).unwrap().count_member, 0);
    }
}
