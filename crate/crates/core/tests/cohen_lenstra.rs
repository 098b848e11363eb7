use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use quadsplit::abelian::AbelianGroup;
use quadsplit::arith::{factorize, primes_up_to};
use quadsplit::cohen_lenstra::{
    empirical_cl_comparison, enumerate_groups, partial_average, predicted_divisibility,
    prime_lower_bound, weight, weighted_sum_coprime, WeightedGroupTable,
};

/// Partition numbers by the recurrence on the largest part.
fn partition_numbers(n: usize) -> Vec<u64> {
    // table[k][m]: partitions of m into parts <= k
    let mut table = vec![vec![0u64; n + 1]; n + 1];
    for row in table.iter_mut() {
        row[0] = 1;
    }
    for k in 1..=n {
        for m in 1..=n {
            table[k][m] = table[k - 1][m] + if m >= k { table[k][m - k] } else { 0 };
        }
    }
    (0..=n).map(|m| table[n][m]).collect()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn group_counts_are_partition_products() {
    let parts = partition_numbers(20);
    for n in 1..=10_000u64 {
        let expected: u64 = factorize(n).iter().map(|&(_, v)| parts[v as usize]).product();
        let groups = enumerate_groups(n);
        assert_eq!(groups.len() as u64, expected, "n = {n}");
        assert!(groups.iter().all(|g| g.order() == n));
    }
}

#[test]
fn weight_examples() {
    assert_eq!(weight(&AbelianGroup::trivial()), q(1, 1));
    for p in [2u64, 3, 5, 101] {
        assert_eq!(weight(&AbelianGroup::cyclic(p)), q(1, p as i64 - 1));
    }
    assert_eq!(weight(&AbelianGroup::from_invariant_factors(vec![3, 3]).unwrap()), q(1, 48));
}

#[test]
fn weighted_sums() {
    for x in [1u64, 10, 100] {
        assert_eq!(weighted_sum_coprime(&primes_up_to(x), x).unwrap(), BigRational::one());
    }
    assert_eq!(weighted_sum_coprime(&[2], 3).unwrap(), q(3, 2));
    let mut previous = BigRational::zero();
    for x in [1u64, 10, 50, 100, 500, 1000, 5000, 10_000] {
        let s = weighted_sum_coprime(&[2, 3], x).unwrap();
        assert!(s >= previous, "x = {x}");
        assert!(s > prime_lower_bound(&[2, 3], x), "x = {x}");
        if x <= 500 {
            assert_eq!(s, WeightedGroupTable::new(&[2, 3], x).unwrap().total_weight());
        }
        previous = s;
    }
    // the lower bound itself, summed term by term
    let mut direct = BigRational::zero();
    for p in primes_up_to(1000).into_iter().filter(|p| *p > 3) {
        direct += BigRational::new(BigInt::one(), BigInt::from(p - 1));
    }
    assert_eq!(prime_lower_bound(&[2, 3], 1000), direct);
}

#[test]
fn averages() {
    let s: Vec<u64> = primes_up_to(100);
    let mut previous = BigRational::one();
    for x in [1u64, 200, 1000, 5000, 20_000] {
        let a = partial_average(|g| g.is_trivial(), &s, x).unwrap();
        assert!(a >= BigRational::zero() && a <= BigRational::one());
        assert!(a <= previous, "x = {x}");
        previous = a;
    }
    assert_eq!(partial_average(|_| true, &[2], 1000).unwrap(), BigRational::one());
}

/// The weighted share of groups with `3 | #G` tends to `1 - ∏(1 - 3^-k)`,
/// but only like `1/log x`: it is about 0.398 at `x = 10^4`.
#[test]
fn three_divisibility_average_approaches_product_from_below() {
    let limit = 1.0 - product(3);
    let mut previous = 0.0;
    for x in [100u64, 1000, 10_000] {
        let avg = partial_average(|g| g.order() % 3 == 0, &[2], x).unwrap();
        // the same share from the coprime sums: 1 - W({2,3}) / W({2})
        let via_sums = BigRational::one()
            - weighted_sum_coprime(&[2, 3], x).unwrap() / weighted_sum_coprime(&[2], x).unwrap();
        assert_eq!(avg, via_sums, "x = {x}");
        let avg = avg.to_f64().unwrap();
        assert!(avg > previous && avg < limit, "x = {x}: {avg}");
        previous = avg;
    }
    assert!((previous - 0.39812).abs() < 1e-5);
}

/// `∏_{k=1}^{200} (1 - p^-k)`, term by term.
fn product(p: u64) -> f64 {
    (1..=200).map(|k| 1.0 - (p as f64).powi(-k)).product()
}

#[test]
fn predictions() {
    for p in [2u64, 3, 5, 7, 11] {
        assert!((predicted_divisibility(p) - (1.0 - product(p))).abs() < 1e-12);
    }
    let c = empirical_cl_comparison(3, 100).unwrap();
    assert_eq!(c.bound, 100);
    assert!((0.0..=1.0).contains(&c.empirical));
    assert!(empirical_cl_comparison(2, 100).is_err());
    assert!(empirical_cl_comparison(9, 100).is_err());
}
