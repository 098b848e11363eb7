//! Cohen-Lenstra weights `w(G) = 1/#Aut(G)` and their partial averages.
//!
//! Sums of weights are exact: the automorphism counts of all groups in a
//! sum are brought to one common denominator, added as integers and
//! reduced once at the end.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abelian::{aut_order, AbelianGroup};
use crate::arith::{factorize, primes_up_to};
use crate::batch::ClassNumberTable;
use crate::density::divisibility_fraction;
use crate::error::{Error, Result};

/// Orders beyond this are not enumerated unless the caller raises it.
pub const DEFAULT_GROUP_BUDGET: u64 = 100_000;

/// Partitions of `v` as non-increasing parts.
pub fn partitions(v: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(v, v, &mut Vec::new(), &mut out);
    out
}

/// One group per isomorphism class of order `n`: a partition of the
/// valuation at each prime.
pub fn enumerate_groups(n: u64) -> Vec<AbelianGroup> {
    assert!(n >= 1, "group order must be positive");
    let mut groups = vec![HashMap::<u64, Vec<u32>>::new()];
    for (p, v) in factorize(n) {
        let parts = partitions(v);
        groups = groups
            .into_iter()
            .flat_map(|g| {
                parts.iter().map(move |lam| {
                    let mut g = g.clone();
                    g.insert(p, lam.clone());
                    g
                })
            })
            .collect();
    }
    groups.into_iter().map(AbelianGroup::from_primary_parts).collect()
}

pub fn weight(g: &AbelianGroup) -> BigRational {
    BigRational::new(BigUint::one().into(), aut_order(g).into())
}

/// `Σ 1/d` over the given positive denominators.
pub fn sum_of_inverses<'a>(denominators: impl IntoIterator<Item = &'a BigUint> + Clone) -> BigRational {
    let common = denominators
        .clone()
        .into_iter()
        .fold(BigUint::one(), |acc, d| acc.lcm(d));
    let numerator: BigUint = denominators.into_iter().map(|d| &common / d).sum();
    BigRational::new(numerator.into(), common.into())
}

fn coprime_to(n: u64, s: &[u64]) -> bool {
    s.iter().all(|&q| n % q != 0)
}

/// Every group of order `<= x` coprime to the primes in `s`, with its
/// order and weight.
#[derive(Debug, Clone)]
pub struct WeightedGroupTable {
    pub bound: u64,
    pub entries: Vec<(AbelianGroup, u64, BigUint)>,
}

impl WeightedGroupTable {
    pub fn new(s: &[u64], x: u64) -> Result<Self> {
        check_budget(x)?;
        let mut entries = Vec::new();
        for n in (1..=x).filter(|&n| coprime_to(n, s)) {
            for g in enumerate_groups(n) {
                let aut = aut_order(&g);
                entries.push((g, n, aut));
            }
        }
        Ok(WeightedGroupTable { bound: x, entries })
    }

    pub fn total_weight(&self) -> BigRational {
        sum_of_inverses(self.entries.iter().map(|(_, _, a)| a))
    }

    /// `Σ f(G) w(G) / Σ w(G)`.
    pub fn average(&self, f: impl Fn(&AbelianGroup) -> bool) -> BigRational {
        let total = self.total_weight();
        let hit = sum_of_inverses(self.entries.iter().filter(|(g, _, _)| f(g)).map(|(_, _, a)| a));
        hit / total
    }
}

fn check_budget(x: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    if x > DEFAULT_GROUP_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: x,
            budget: DEFAULT_GROUP_BUDGET,
        });
    }
    Ok(())
}

/// `Σ w(G)` over groups of order `<= x` coprime to `s`.
///
/// Automorphism groups split over primes, so the weight sum at order `n`
/// is the product over `p^v || n` of the sums over partitions of `v`.
pub fn weighted_sum_coprime(s: &[u64], x: u64) -> Result<BigRational> {
    check_budget(x)?;
    let mut local: HashMap<(u64, u32), BigRational> = HashMap::new();
    let mut total = BigRational::zero();
    let mut terms: Vec<BigRational> = Vec::new();
    for n in (1..=x).filter(|&n| coprime_to(n, s)) {
        let mut term = BigRational::one();
        for (p, v) in factorize(n) {
            let w = local.entry((p, v)).or_insert_with(|| {
                let auts: Vec<BigUint> = partitions(v)
                    .into_iter()
                    .map(|lam| {
                        let mut parts = HashMap::new();
                        parts.insert(p, lam);
                        aut_order(&AbelianGroup::from_primary_parts(parts))
                    })
                    .collect();
                sum_of_inverses(auts.iter())
            });
            term *= &*w;
        }
        terms.push(term);
    }
    // common denominator, as for plain inverse sums
    let common = terms
        .iter()
        .fold(BigUint::one(), |acc, t| acc.lcm(t.denom().magnitude()));
    let common_i: num_bigint::BigInt = common.clone().into();
    for t in &terms {
        total += BigRational::from_integer(t.numer() * (&common_i / t.denom()));
    }
    Ok(total / BigRational::from_integer(common_i))
}

/// `Σ 1/(p - 1)` over primes `p <= x` outside `s`: the weights of the cyclic
/// groups of prime order.
pub fn prime_lower_bound(s: &[u64], x: u64) -> BigRational {
    let dens: Vec<BigUint> = primes_up_to(x)
        .into_iter()
        .filter(|p| !s.contains(p))
        .map(|p| BigUint::from(p - 1))
        .collect();
    if dens.is_empty() {
        return BigRational::zero();
    }
    sum_of_inverses(dens.iter())
}

/// Weighted average of an indicator over groups of order `<= x` coprime to `s`.
pub fn partial_average(f: impl Fn(&AbelianGroup) -> bool, s: &[u64], x: u64) -> Result<BigRational> {
    Ok(WeightedGroupTable::new(s, x)?.average(f))
}

/// `1 - ∏_{k >= 1} (1 - p^-k)`: the heuristic probability that `p | h`.
pub fn predicted_divisibility(p: u64) -> f64 {
    let mut prod = 1.0;
    let mut term = 1.0 / p as f64;
    while term > 1e-18 {
        prod *= 1.0 - term;
        term /= p as f64;
    }
    1.0 - prod
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClComparison {
    pub p: u64,
    pub bound: u64,
    pub empirical: f64,
    pub predicted: f64,
}

impl ClComparison {
    pub fn abs_diff(&self) -> f64 {
        (self.empirical - self.predicted).abs()
    }
}

/// Empirical fraction of fundamental `|D| <= x` with `p | h(D)` against the
/// heuristic prediction; `p` must be odd.
pub fn empirical_cl_comparison(p: u64, x: u64) -> Result<ClComparison> {
    let table = crate::batch::batch_class_numbers(x)?;
    empirical_cl_comparison_from(&table, p, x)
}

pub fn empirical_cl_comparison_from(table: &ClassNumberTable, p: u64, x: u64) -> Result<ClComparison> {
    if p == 2 {
        return Err(Error::InvalidArgument(
            "the comparison covers odd primes only".into(),
        ));
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let e = divisibility_fraction(table, p, x)?;
    Ok(ClComparison {
        p,
        bound: x,
        empirical: e.decimal(),
        predicted: predicted_divisibility(p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn groups_by_order() {
        assert_eq!(enumerate_groups(1), vec![AbelianGroup::trivial()]);
        let g4: Vec<String> = enumerate_groups(4).iter().map(|g| g.chain_string()).collect();
        assert_eq!(g4, vec!["4", "2;2"]);
        assert_eq!(enumerate_groups(36).len(), 4);
        assert_eq!(partitions(5).len(), 7);
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&AbelianGroup::trivial()), q(1, 1));
        assert_eq!(weight(&AbelianGroup::cyclic(7)), q(1, 6));
        assert_eq!(weight(&AbelianGroup::from_invariant_factors(vec![3, 3]).unwrap()), q(1, 48));
    }

    #[test]
    fn small_weighted_sums() {
        assert_eq!(weighted_sum_coprime(&[2], 3).unwrap(), q(3, 2));
        assert_eq!(weighted_sum_coprime(&[2, 3, 5, 7], 10).unwrap(), q(1, 1));
        // orders 1, 5, 7, 11, 13, 17, 19, 23, 25 with S = {2, 3}
        let direct = WeightedGroupTable::new(&[2, 3], 25).unwrap().total_weight();
        assert_eq!(weighted_sum_coprime(&[2, 3], 25).unwrap(), direct);
        assert!(weighted_sum_coprime(&[2, 3], 100).unwrap() > prime_lower_bound(&[2, 3], 100));
    }

    #[test]
    fn averages() {
        assert_eq!(partial_average(|_| true, &[2], 50).unwrap(), q(1, 1));
        assert!((predicted_divisibility(3) - 0.43987).abs() < 1e-4);
        assert!((predicted_divisibility(5) - 0.23967).abs() < 1e-4);
        assert!(empirical_cl_comparison(2, 100).is_err());
        let c = empirical_cl_comparison(3, 100).unwrap();
        assert!(c.empirical >= 0.0 && c.empirical <= 1.0);
    }
}
