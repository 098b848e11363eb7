//! Brute-force models of finite abelian groups, shared by the oracle tests
//! and the acceptance suite.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

/// Every invariant-factor chain `d_1 | d_2 | ... | d_k` (all `d_i > 1`)
/// with product `n`.
pub fn chains_of_order(n: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, last: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for d in (2..=rest).filter(|d| rest % d == 0 && d % last == 0) {
            cur.push(d);
            go(rest / d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

/// `Z/d_1 x ... x Z/d_k` with elements numbered in mixed radix; small
/// enough (order <= 64) that a subgroup is a `u64` bitmask.
pub struct ExplicitGroup {
    pub moduli: Vec<u64>,
    pub order: usize,
    add: Vec<Vec<u8>>,
}

impl ExplicitGroup {
    pub fn new(moduli: &[u64]) -> Self {
        let order: u64 = moduli.iter().product();
        assert!(order <= 64);
        let order = order as usize;
        let mut g = ExplicitGroup {
            moduli: moduli.to_vec(),
            order,
            add: Vec::new(),
        };
        g.add = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| {
                        let (x, y) = (g.digits(a), g.digits(b));
                        let sum: Vec<u64> = x
                            .iter()
                            .zip(&y)
                            .zip(&g.moduli)
                            .map(|((u, v), m)| (u + v) % m)
                            .collect();
                        g.index(&sum) as u8
                    })
                    .collect()
            })
            .collect();
        g
    }

    pub fn digits(&self, mut i: usize) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let d = i as u64 % m;
                i /= m as usize;
                d
            })
            .collect()
    }

    pub fn index(&self, digits: &[u64]) -> usize {
        let mut i = 0usize;
        for (d, m) in digits.iter().zip(&self.moduli).rev() {
            i = i * *m as usize + *d as usize;
        }
        i
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b] as usize
    }

    pub fn multiple(&self, a: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.add(acc, a))
    }

    /// Smallest subgroup containing `mask` and `g`.
    pub fn join(&self, mask: u64, g: usize) -> u64 {
        let mut mask = mask | 1;
        let mut frontier = vec![g];
        while let Some(x) = frontier.pop() {
            if mask >> x & 1 == 1 && x != 0 {
                continue;
            }
            mask |= 1 << x;
            for y in 0..self.order {
                if mask >> y & 1 == 1 {
                    let s = self.add(x, y);
                    if mask >> s & 1 == 0 {
                        frontier.push(s);
                    }
                }
            }
        }
        mask
    }

    pub fn subgroups(&self) -> Vec<u64> {
        let mut seen: HashSet<u64> = HashSet::from([1]);
        let mut stack = vec![1u64];
        while let Some(s) = stack.pop() {
            for g in 0..self.order {
                if s >> g & 1 == 0 {
                    let t = self.join(s, g);
                    if seen.insert(t) {
                        stack.push(t);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Orders of the cyclic quotients `G/H`, over all subgroups `H`.
    pub fn cyclic_quotient_orders(&self) -> HashSet<u64> {
        let mut out = HashSet::new();
        for h in self.subgroups() {
            let index = (self.order / h.count_ones() as usize) as u64;
            // G/H is cyclic iff some coset has order equal to the index
            let cyclic = (0..self.order).any(|g| {
                let mut x = g;
                let mut k = 1u64;
                while h >> x & 1 == 0 {
                    x = self.add(x, g);
                    k += 1;
                }
                k == index
            });
            if cyclic {
                out.insert(index);
            }
        }
        out
    }

    /// Number of bijective endomorphisms. An endomorphism is a choice of
    /// images `x_i` of the standard generators with `d_i x_i = 0`; it is
    /// bijective iff the images generate the group. Choices are counted
    /// grouped by the subgroup they generate so far.
    pub fn automorphism_count(&self) -> u128 {
        let mut counts: HashMap<u64, u128> = HashMap::from([(1u64, 1u128)]);
        for &d in &self.moduli {
            let images: Vec<usize> = (0..self.order).filter(|&x| self.multiple(x, d) == 0).collect();
            let mut next: HashMap<u64, u128> = HashMap::new();
            for (&s, &c) in &counts {
                for &x in &images {
                    *next.entry(self.join(s, x)).or_default() += c;
                }
            }
            counts = next;
        }
        let full = if self.order == 64 { u64::MAX } else { (1u64 << self.order) - 1 };
        counts.get(&full).copied().unwrap_or(0)
    }
}
