//! Finite abelian groups described by invariant factors.
//!
//! Besides the invariant-factor arithmetic (order, exponent, automorphism
//! counts, cyclic quotients, p-suitability) this module can decompose any
//! explicitly enumerated finite abelian group into a basis of cyclic
//! factors, which is how form class groups get their structure.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::arith::{factorize, inv_mod};
use crate::error::{Error, Result};
use crate::forms::{FormLaw, QuadForm};

/// A finite abelian group `Z/d1 x Z/d2 x ... x Z/dk` with `d1 | d2 | ... | dk`
/// and every `di >= 2`. The empty chain is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders([n])
    }

    /// Builds a group from an ascending divisor chain, rejecting anything
    /// that is not one.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self> {
        let ok = factors.iter().all(|&d| d >= 2)
            && factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !ok {
            return Err(Error::InvalidChain(factors));
        }
        Ok(AbelianGroup { factors })
    }

    /// The group `Z/n1 x Z/n2 x ...` for arbitrary cyclic orders, normalised to
    /// invariant factors. Orders equal to 1 are ignored.
    pub fn from_cyclic_orders(orders: impl IntoIterator<Item = u64>) -> Self {
        let mut parts: HashMap<u64, Vec<u32>> = HashMap::new();
        for n in orders {
            assert!(n >= 1, "cyclic order must be positive");
            for (p, e) in factorize(n) {
                parts.entry(p).or_default().push(e);
            }
        }
        Self::from_primary_parts(parts)
    }

    /// Builds a group from its primary decomposition: for each prime, the
    /// exponents of the cyclic `p`-power factors in any order.
    pub fn from_primary_parts(parts: HashMap<u64, Vec<u32>>) -> Self {
        let rank = parts.values().map(Vec::len).max().unwrap_or(0);
        // descending[i] is the i-th largest invariant factor.
        let mut descending = vec![1u64; rank];
        for (p, mut exps) in parts {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                descending[i] *= p.pow(e);
            }
        }
        descending.retain(|&d| d > 1);
        descending.reverse();
        AbelianGroup { factors: descending }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// Exponents of the cyclic `p`-power factors, largest first.
    pub fn p_partition(&self, p: u64) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .factors
            .iter()
            .map(|&d| {
                let mut d = d;
                let mut e = 0;
                while d % p == 0 {
                    d /= p;
                    e += 1;
                }
                e
            })
            .filter(|&e| e > 0)
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Primes dividing the order, ascending.
    pub fn primes(&self) -> Vec<u64> {
        factorize(self.order()).into_iter().map(|(p, _)| p).collect()
    }

    /// Whether `self` is a quotient of `g`, i.e. `g` surjects onto `self`.
    /// For finite abelian groups this holds iff the invariant factors,
    /// aligned from the largest, divide those of `g`.
    pub fn is_quotient_of(&self, g: &AbelianGroup) -> bool {
        if self.rank() > g.rank() {
            return false;
        }
        self.factors
            .iter()
            .rev()
            .zip(g.factors.iter().rev())
            .all(|(&mine, &theirs)| theirs % mine == 0)
    }

    /// Semicolon-joined ascending chain, e.g. `3;3`; empty for the trivial group.
    pub fn chain_string(&self) -> String {
        self.factors
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "C1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(AbelianGroup::trivial());
        }
        let factors = s
            .split(';')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad invariant factor {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        AbelianGroup::from_invariant_factors(factors)
    }
}

/// A cyclic quotient of order `h` exists iff `h` divides the exponent.
pub fn has_cyclic_quotient(g: &AbelianGroup, h: u64) -> bool {
    h >= 1 && g.exponent() % h == 0
}

/// Outcome of the p-suitability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuitabilityReport {
    pub p: u64,
    pub suitable: bool,
    /// Smallest order `h` of a cyclic quotient with `p ∤ h` and `h ∤ p²-1`.
    pub witness_h: Option<u64>,
}

/// `G` is p-suitable when it has a cyclic quotient of order `h` with
/// `p ∤ h` and `h ∤ p² - 1`. Equivalently, the prime-to-p part of the
/// exponent does not divide `p² - 1`.
pub fn is_p_suitable(g: &AbelianGroup, p: u64) -> SuitabilityReport {
    let p2m1 = p * p - 1;
    let witness_h = crate::arith::divisors(g.exponent())
        .into_iter()
        .find(|&h| h % p != 0 && p2m1 % h != 0);
    SuitabilityReport {
        p,
        suitable: witness_h.is_some(),
        witness_h,
    }
}

/// Prime-to-`p` part of `n`.
pub fn prime_to_part(mut n: u64, p: u64) -> u64 {
    while n % p == 0 {
        n /= p;
    }
    n
}

/// Decides p-suitability from the class number alone when possible.
///
/// Returns `Some(true)` if some prime `q ≠ p` divides `h` but not `p² - 1`,
/// `Some(false)` if every prime-to-p prime power of `h` already divides
/// `p² - 1`, and `None` when the exponent is needed.
pub fn suitability_from_order(h: u64, p: u64) -> Option<bool> {
    let p2m1 = p * p - 1;
    let mut undecided = false;
    for (q, e) in factorize(prime_to_part(h, p)) {
        if p2m1 % q != 0 {
            return Some(true);
        }
        if p2m1 % q.pow(e) != 0 {
            undecided = true;
        }
    }
    if undecided {
        None
    } else {
        Some(false)
    }
}

/// Number of automorphisms of `G`.
///
/// Computed prime by prime: for an abelian `p`-group with cyclic factor
/// exponents `e1 <= ... <= en`, with `d_k = max{l : e_l = e_k}` and
/// `c_k = min{l : e_l = e_k}`,
/// `#Aut = prod_k (p^{d_k} - p^{k-1}) * prod_j p^{e_j (n - d_j)} * prod_i p^{(e_i - 1)(n - c_i + 1)}`.
pub fn aut_order(g: &AbelianGroup) -> BigUint {
    let mut total = BigUint::one();
    for p in g.primes() {
        let mut e = g.p_partition(p);
        e.reverse();
        total *= p_group_aut_order(p, &e);
    }
    total
}

fn p_group_aut_order(p: u64, ascending: &[u32]) -> BigUint {
    let n = ascending.len();
    let pb = BigUint::from(p);
    let mut d = vec![0usize; n];
    let mut c = vec![0usize; n];
    for k in 0..n {
        // 1-based positions
        d[k] = (0..n).rev().find(|&l| ascending[l] == ascending[k]).unwrap() + 1;
        c[k] = (0..n).find(|&l| ascending[l] == ascending[k]).unwrap() + 1;
    }
    let mut acc = BigUint::one();
    for k in 0..n {
        acc *= Pow::pow(&pb, d[k] as u32) - Pow::pow(&pb, k as u32);
    }
    let mut exp: u64 = 0;
    for j in 0..n {
        exp += ascending[j] as u64 * (n - d[j]) as u64;
        exp += (ascending[j] as u64 - 1) * (n - c[j] + 1) as u64;
    }
    acc * Pow::pow(&pb, exp as u32)
}

/// Group law of an explicitly represented finite abelian group.
pub trait GroupLaw {
    type Elem: Clone + Eq + Hash + fmt::Debug;

    fn identity(&self) -> Self::Elem;

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.op(&base, &base);
            }
        }
        acc
    }
}

#[derive(Debug, Clone)]
struct SylowBasis<E> {
    p: u64,
    /// `g^projector` is the `p`-component of `g`.
    projector: u64,
    /// Basis elements with exponents, largest order first.
    basis: Vec<(E, u32)>,
    /// Discrete-log table of the whole Sylow subgroup.
    coords: HashMap<E, Vec<u64>>,
}

/// A basis of a finite abelian group adapted to its invariant factors,
/// with a discrete-log table for every element.
#[derive(Debug, Clone)]
pub struct Decomposition<E> {
    group: AbelianGroup,
    /// Generators aligned with `group.invariant_factors()`.
    generators: Vec<E>,
    sylows: Vec<SylowBasis<E>>,
}

impl<E: Clone + Eq + Hash + fmt::Debug> Decomposition<E> {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Generators `g_i` of order `d_i`, aligned with the invariant factors.
    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    /// Coordinates `(x_1, ..., x_k)` with `g = prod g_i^{x_i}` and
    /// `0 <= x_i < d_i`, or `None` if `g` is not in the group.
    pub fn coordinates<L: GroupLaw<Elem = E>>(&self, law: &L, g: &E) -> Option<Vec<u64>> {
        let factors = self.group.invariant_factors();
        let k = factors.len();
        // descending order while combining
        let mut residues: Vec<(u128, u128)> = vec![(0, 1); k];
        for sylow in &self.sylows {
            let gp = law.pow(g, sylow.projector);
            let cs = sylow.coords.get(&gp)?;
            for (i, ((_, e), &x)) in sylow.basis.iter().zip(cs).enumerate() {
                let modulus = (sylow.p as u128).pow(*e);
                residues[i] = crt_pair(residues[i], (x as u128, modulus));
            }
        }
        let mut out: Vec<u64> = residues.into_iter().map(|(r, _)| r as u64).collect();
        out.reverse();
        Some(out)
    }

    /// Multiplicative order of `g`, from its coordinates.
    pub fn element_order<L: GroupLaw<Elem = E>>(&self, law: &L, g: &E) -> Option<u64> {
        let coords = self.coordinates(law, g)?;
        Some(
            coords
                .iter()
                .zip(self.group.invariant_factors())
                .map(|(&x, &d)| d / crate::arith::gcd(x, d))
                .fold(1, crate::arith::lcm),
        )
    }
}

fn crt_pair((r1, m1): (u128, u128), (r2, m2): (u128, u128)) -> (u128, u128) {
    // moduli are coprime prime powers
    if m1 == 1 {
        return (r2 % m2, m2);
    }
    let inv = inv_mod((m1 % m2) as u64, m2 as u64).expect("coprime moduli") as u128;
    let t = ((r2 + m2 - r1 % m2) % m2) * inv % m2;
    (r1 + m1 * t, m1 * m2)
}

/// Decomposes the finite abelian group whose elements are exactly
/// `elements` under `law`.
///
/// Each Sylow subgroup is split greedily: pick an element of maximal order
/// in the quotient by the span of the basis so far, then correct it by the
/// basis so that its order equals its order in the quotient. The span is
/// kept as an explicit discrete-log table, which doubles as the lookup
/// used for coordinates later. Fails with [`Error::NotClosed`] when a
/// product leaves the supplied set.
pub fn decompose<L: GroupLaw>(law: &L, elements: &[L::Elem]) -> Result<Decomposition<L::Elem>> {
    let n = elements.len() as u64;
    let members: HashSet<&L::Elem> = elements.iter().collect();
    if members.len() as u64 != n || !members.contains(&law.identity()) {
        return Err(Error::NotClosed);
    }
    let mut sylows = Vec::new();
    for (p, v) in factorize(n) {
        let pv = p.pow(v);
        let m = n / pv;
        let projector = if m == 1 {
            1
        } else {
            // u ≡ 1 (mod p^v), u ≡ 0 (mod m)
            m * inv_mod(m % pv, pv).expect("coprime cofactor")
        };
        let mut seen = HashSet::new();
        let mut sylow_elems = Vec::new();
        for g in elements {
            let gp = law.pow(g, projector);
            if !members.contains(&gp) {
                return Err(Error::NotClosed);
            }
            if seen.insert(gp.clone()) {
                sylow_elems.push(gp);
            }
        }
        if sylow_elems.len() as u64 != pv {
            return Err(Error::NotClosed);
        }
        sylows.push(split_p_group(law, &members, p, v, projector, &sylow_elems)?);
    }

    let rank = sylows.iter().map(|s| s.basis.len()).max().unwrap_or(0);
    let mut factors_desc = Vec::with_capacity(rank);
    let mut gens_desc = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut d = 1u64;
        let mut g = law.identity();
        for s in &sylows {
            if let Some((b, e)) = s.basis.get(i) {
                d *= s.p.pow(*e);
                g = law.op(&g, b);
            }
        }
        factors_desc.push(d);
        gens_desc.push(g);
    }
    factors_desc.reverse();
    gens_desc.reverse();
    let group = AbelianGroup::from_invariant_factors(factors_desc)
        .map_err(|e| Error::Internal(format!("decomposition produced {e}")))?;
    Ok(Decomposition {
        group,
        generators: gens_desc,
        sylows,
    })
}

fn split_p_group<L: GroupLaw>(
    law: &L,
    members: &HashSet<&L::Elem>,
    p: u64,
    v: u32,
    projector: u64,
    elems: &[L::Elem],
) -> Result<SylowBasis<L::Elem>> {
    let pv = p.pow(v) as usize;
    let mut coords: HashMap<L::Elem, Vec<u64>> = HashMap::with_capacity(pv);
    coords.insert(law.identity(), Vec::new());
    let mut basis: Vec<(L::Elem, u32)> = Vec::new();

    while coords.len() < pv {
        // element of maximal order modulo the current span
        let mut best: Option<(u32, &L::Elem)> = None;
        for x in elems {
            let mut y = x.clone();
            let mut j = 0u32;
            while !coords.contains_key(&y) {
                y = law.pow(&y, p);
                j += 1;
                if j > v {
                    return Err(Error::NotClosed);
                }
            }
            if best.is_none_or(|(bj, _)| j > bj) {
                best = Some((j, x));
            }
        }
        let (j, x) = best.expect("nonempty sylow subgroup");
        let pj = p.pow(j);
        let y = law.pow(x, pj);
        let cy = coords[&y].clone();
        let mut x_adj = x.clone();
        for ((g, e), &c) in basis.iter().zip(&cy) {
            if c % pj != 0 {
                return Err(Error::Internal(format!(
                    "greedy basis step: coordinate {c} not divisible by {pj}"
                )));
            }
            let ord = p.pow(*e);
            let k = (c / pj) % ord;
            x_adj = law.op(&x_adj, &law.pow(g, (ord - k) % ord));
        }
        if law.pow(&x_adj, pj) != law.identity() {
            return Err(Error::Internal("adjusted basis element has wrong order".into()));
        }

        let old: Vec<(L::Elem, Vec<u64>)> = coords.drain().collect();
        let mut power = law.identity();
        for k in 0..pj {
            for (s, cs) in &old {
                let e = law.op(s, &power);
                if !members.contains(&e) {
                    return Err(Error::NotClosed);
                }
                let mut c = cs.clone();
                c.push(k);
                coords.insert(e, c);
            }
            power = law.op(&power, &x_adj);
        }
        basis.push((x_adj, j));
    }
    Ok(SylowBasis {
        p,
        projector,
        basis,
        coords,
    })
}

/// Invariant factors of the class group formed by `forms` under composition.
///
/// `forms` must be exactly the reduced forms of one discriminant.
pub fn structure_from_forms(forms: &[QuadForm]) -> Result<AbelianGroup> {
    let first = forms
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty form list".into()))?;
    let disc = first.discriminant();
    if let Some(bad) = forms.iter().find(|f| f.discriminant() != disc) {
        return Err(Error::DiscriminantMismatch(disc, bad.discriminant()));
    }
    let law = FormLaw::new(disc);
    Ok(decompose(&law, forms)?.group)
}
