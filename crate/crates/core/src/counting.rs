//! Aperiodic configuration counts `ac(G;A)`: four closed forms, a direct
//! stabiliser scan, the bounds around them, and the residual profile of the
//! block sizes `|B_[H]|` as `q` grows.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::configs::{mobius_sum, q_pow, ConfigSpace};
use crate::exec::{fold_range, Execution};
use crate::groups::{enumerate_subgroups, FiniteGroup, SubgroupLattice};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApMethod {
    General,
    Cyclic,
    PGroup,
    ElemAbelian,
    Enumeration,
}

impl ApMethod {
    pub fn name(self) -> &'static str {
        match self {
            ApMethod::General => "general",
            ApMethod::Cyclic => "cyclic",
            ApMethod::PGroup => "pgroup",
            ApMethod::ElemAbelian => "elem_abelian",
            ApMethod::Enumeration => "enumeration",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApCount {
    pub value: BigUint,
    pub method: ApMethod,
}

fn count(value: BigInt, method: ApMethod) -> Result<ApCount> {
    let value = value
        .to_biguint()
        .ok_or_else(|| Error::Internal(format!("{} count is negative", method.name())))?;
    Ok(ApCount { value, method })
}

/// `Σ_K μ({e}, K) q^{n/|K|}` over the whole subgroup lattice.
pub fn ac_general(lat: &SubgroupLattice, q: usize) -> ApCount {
    count(mobius_sum(lat, lat.bottom(), q), ApMethod::General)
        .expect("Möbius inversion yields a count")
}

/// Classical Möbius function on the positive integers.
pub fn number_mobius(mut d: usize) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if d > 1 {
        sign = -sign;
    }
    sign
}

/// `ac(Z_n) = Σ_{d | n} μ(d) q^{n/d}`.
pub fn ac_cyclic(n: usize, q: usize) -> Result<ApCount> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic order must be positive".into()));
    }
    let sum = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(number_mobius(d)) * BigInt::from(q_pow(q, n / d)))
        .sum();
    count(sum, ApMethod::Cyclic)
}

/// `(p, k)` with `n = p^k`, for `n >= 2`.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn smallest_prime_factor(n: usize) -> usize {
    assert!(n >= 2);
    (2..).find(|p| n.is_multiple_of(*p) || p * p > n).map(|p| if n.is_multiple_of(p) { p } else { n }).unwrap()
}

fn is_prime(p: usize) -> bool {
    p >= 2 && smallest_prime_factor(p) == p
}

/// Abelian, and every non-identity element has order `p`.
pub fn is_elementary_abelian(group: &FiniteGroup, mask: u64, p: usize) -> bool {
    let elems: Vec<usize> = crate::groups::Subgroup::from_mask(mask).elements().collect();
    elems.iter().all(|&g| g == 0 || group.elt_order(g) == p)
        && elems
            .iter()
            .all(|&a| elems.iter().all(|&b| group.mul(a, b) == group.mul(b, a)))
}

/// For a `p`-group: `Σ_{H elementary abelian} (-1)^k p^{k(k-1)/2} q^{n/|H|}`
/// where `|H| = p^k`.
pub fn ac_pgroup(lat: &SubgroupLattice, q: usize) -> Result<ApCount> {
    let group = lat.group();
    let n = group.order();
    let (p, _) = prime_power(n).ok_or(Error::NotAPGroup(n))?;
    let mut sum = BigInt::zero();
    for h in lat.subgroups() {
        if !is_elementary_abelian(group, h.mask, p) {
            continue;
        }
        let k = h.order.trailing_zeros_base(p);
        let term = BigInt::from(BigUint::from(p).pow(k * k.saturating_sub(1) / 2))
            * BigInt::from(q_pow(q, n / h.order));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    count(sum, ApMethod::PGroup)
}

trait BaseLog {
    fn trailing_zeros_base(self, p: usize) -> u32;
}

impl BaseLog for usize {
    fn trailing_zeros_base(mut self, p: usize) -> u32 {
        let mut k = 0;
        while self > 1 && self.is_multiple_of(p) {
            self /= p;
            k += 1;
        }
        k
    }
}

/// Gaussian binomial `[m choose r]_p`.
pub fn gaussian_binomial(m: u32, r: u32, p: usize) -> BigUint {
    if r > m {
        return BigUint::zero();
    }
    let p = BigUint::from(p);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        num *= p.pow(m - i) - &one;
        den *= p.pow(i + 1) - &one;
    }
    num / den
}

/// `ac(Z_p^m) = q^{p^m} + Σ_{r=1}^m (-1)^r q^{p^{m-r}} p^{r(r-1)/2} [m choose r]_p`.
pub fn ac_elem_abelian(p: usize, m: u32, q: usize) -> Result<ApCount> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let mut sum = BigInt::from(q_pow(q, p.pow(m)));
    for r in 1..=m {
        let term = BigInt::from(
            q_pow(q, p.pow(m - r))
                * BigUint::from(p).pow(r * (r - 1) / 2)
                * gaussian_binomial(m, r, p),
        );
        if r % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    count(sum, ApMethod::ElemAbelian)
}

/// Counts configurations with trivial stabiliser by scanning `A^G`.
pub fn ac_enumeration(group: &FiniteGroup, q: usize, limits: &Limits, exec: Execution) -> Result<ApCount> {
    let space = ConfigSpace::new(group, q, limits)?;
    let n = space.n();
    const CHUNK: u64 = 1 << 12;
    let chunks = space.size().div_ceil(CHUNK);
    let total = fold_range(
        exec,
        0..chunks,
        0u64,
        |acc, c| {
            let mut digits = vec![0usize; n];
            for x in c * CHUNK..((c + 1) * CHUNK).min(space.size()) {
                space.decode(x, &mut digits);
                if (1..n).all(|g| space.act_digits(&digits, g) != x) {
                    *acc += 1;
                }
            }
        },
        |a, b| a + b,
    );
    Ok(ApCount {
        value: BigUint::from(total),
        method: ApMethod::Enumeration,
    })
}

/// Every closed formula that applies to `G`: the general one always, the
/// cyclic one for cyclic groups, and the prime-power ones when `n = p^k`.
pub fn applicable_formulas(lat: &SubgroupLattice, q: usize) -> Result<Vec<ApCount>> {
    let group = lat.group();
    let n = group.order();
    let mut out = vec![ac_general(lat, q)];
    if group.elt_orders().contains(&n) {
        out.push(ac_cyclic(n, q)?);
    }
    if let Some((p, k)) = prime_power(n) {
        out.push(ac_pgroup(lat, q)?);
        if is_elementary_abelian(group, group.full_mask(), p) {
            out.push(ac_elem_abelian(p, k, q)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub ac: ApCount,
    /// `q^n - q`.
    pub upper: BigInt,
    /// `q^n - (n-1) q^{n/p}`.
    pub lower_subgroup: BigInt,
    /// `q^n - q^{n-1}`.
    pub lower_gjs: BigInt,
    /// Smallest prime dividing `n`.
    pub p: usize,
    /// `|G^(p)| / (p-1)`: the number of subgroups of order `p`.
    pub coefficient: u64,
}

impl BoundsReport {
    pub fn holds(&self) -> bool {
        let ac = BigInt::from(self.ac.value.clone());
        self.lower_gjs <= ac && self.lower_subgroup <= ac && ac <= self.upper
    }

    pub fn upper_tight(&self) -> bool {
        BigInt::from(self.ac.value.clone()) == self.upper
    }

    pub fn gjs_tight(&self) -> bool {
        BigInt::from(self.ac.value.clone()) == self.lower_gjs
    }
}

pub fn ac_bounds(lat: &SubgroupLattice, q: usize) -> Result<BoundsReport> {
    let group = lat.group();
    let n = group.order();
    if n < 2 {
        return Err(Error::InvalidArgument("bounds need a group of order at least 2".into()));
    }
    let p = smallest_prime_factor(n);
    let of_order_p = group.elt_orders().iter().filter(|&&o| o == p).count() as u64;
    let qn = BigInt::from(q_pow(q, n));
    Ok(BoundsReport {
        ac: ac_general(lat, q),
        upper: &qn - BigInt::from(q),
        lower_subgroup: &qn - BigInt::from(n - 1) * BigInt::from(q_pow(q, n / p)),
        lower_gjs: &qn - BigInt::from(q_pow(q, n - 1)),
        p,
        coefficient: of_order_p / (p as u64 - 1),
    })
}

/// For each `q`, the exact residual
/// `(q^{n/m} - |B_[H]|/|[H]|) / q^{n/p_H}` for subgroup `H = H_h` of order `m`.
/// Defined as 0 when `H = G`.
pub fn asymptotic_residual(lat: &SubgroupLattice, h: usize, qs: &[usize]) -> Vec<BigRational> {
    let n = lat.group().order();
    let m = lat.subgroup(h).order;
    if m == n {
        return qs.iter().map(|_| BigRational::zero()).collect();
    }
    let (p_h, _) = lat.min_cover(h);
    qs.iter()
        .map(|&q| {
            let gap = BigInt::from(q_pow(q, n / m)) - mobius_sum(lat, h, q);
            BigRational::new(gap, BigInt::from(q_pow(q, n / p_h)))
        })
        .collect()
}

/// Engineering tolerance `C/q` with `C = 2 · (number of subgroups)` for
/// `|residual - |S_H||`.
pub fn residual_tolerance(lat: &SubgroupLattice, q: usize) -> BigRational {
    BigRational::new(BigInt::from(2 * lat.len()), BigInt::from(q))
}

/// `|B_[H]|` computed as `ac(G/H; A)` for normal `H`.
pub fn b_size_quotient(lat: &SubgroupLattice, h: usize, q: usize) -> Result<BigUint> {
    let quotient = lat.quotient(h)?;
    let qlat = enumerate_subgroups(&quotient)?;
    Ok(ac_general(&qlat, q).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    fn lat(spec: &str) -> SubgroupLattice {
        enumerate_subgroups(&build_group(spec).unwrap()).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn general_examples() {
        assert_eq!(ac_general(&lat("Z2"), 2).value, big(2));
        assert_eq!(ac_general(&lat("Z2xZ2"), 2).value, big(8));
        // stabiliser scan of 2^6 configurations of S3
        let s3 = lat("S3");
        let scan = ac_enumeration(s3.group(), 2, &Limits::default(), Execution::Sequential).unwrap();
        assert_eq!(scan.value, big(42));
        assert_eq!(ac_general(&s3, 2).value, scan.value);
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(ac_cyclic(2, 2).unwrap().value, big(2));
        assert_eq!(ac_cyclic(4, 2).unwrap().value, big(12));
        assert_eq!(ac_cyclic(6, 2).unwrap().value, big(54));
    }

    #[test]
    fn number_theoretic_mobius() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        let got: Vec<i64> = (1..=12).map(number_mobius).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn pgroup_examples() {
        assert_eq!(ac_pgroup(&lat("Z4"), 2).unwrap().value, big(12));
        assert_eq!(ac_pgroup(&lat("Z2xZ2"), 2).unwrap().value, big(8));
        let q8 = lat("Q8");
        assert_eq!(ac_pgroup(&q8, 2).unwrap().value, ac_general(&q8, 2).value);
        // only {e} and the centre contribute: 2^8 - 2^4
        assert_eq!(ac_general(&q8, 2).value, big(240));
        assert!(matches!(ac_pgroup(&lat("S3"), 2), Err(Error::NotAPGroup(6))));
    }

    #[test]
    fn elem_abelian_examples() {
        assert_eq!(ac_elem_abelian(2, 1, 2).unwrap().value, big(2));
        assert_eq!(ac_elem_abelian(2, 2, 2).unwrap().value, big(8));
        assert_eq!(gaussian_binomial(2, 1, 2), big(3));
        assert_eq!(gaussian_binomial(2, 2, 2), big(1));
        assert_eq!(gaussian_binomial(4, 2, 2), big(35));
        assert_eq!(gaussian_binomial(3, 1, 3), big(13));
        assert!(ac_elem_abelian(4, 2, 2).is_err());
    }

    #[test]
    fn gaussian_binomial_counts_subgroups() {
        let l = lat("Z2xZ2xZ2xZ2");
        for r in 0..=4u32 {
            let of_order = l.subgroups().iter().filter(|s| s.order == 1 << r).count();
            assert_eq!(gaussian_binomial(4, r, 2), big(of_order as u64));
        }
    }

    #[test]
    fn bounds_examples() {
        let b = ac_bounds(&lat("Z6"), 2).unwrap();
        assert_eq!(b.lower_subgroup, BigInt::from(24));
        assert_eq!(b.ac.value, big(54));
        assert_eq!(b.upper, BigInt::from(62));
        assert!(b.holds());

        let b = ac_bounds(&lat("Z2"), 2).unwrap();
        assert!(b.upper_tight());
        let b = ac_bounds(&lat("Z2xZ2"), 2).unwrap();
        assert!(b.gjs_tight());
        assert_eq!((b.p, b.coefficient), (2, 3));
    }

    #[test]
    fn residual_examples() {
        let qs: Vec<usize> = (2..=64).collect();
        let z4 = lat("Z4");
        assert!(asymptotic_residual(&z4, z4.bottom(), &qs)
            .iter()
            .all(|r| *r == BigRational::one()));
        let klein = lat("Z2xZ2");
        let res = asymptotic_residual(&klein, klein.bottom(), &qs);
        for (r, &q) in res.iter().zip(&qs) {
            // 3 - 2/q
            let expected = BigRational::from_integer(3.into())
                - BigRational::new(2.into(), BigInt::from(q));
            assert_eq!(*r, expected);
        }
        assert!(asymptotic_residual(&klein, 0, &qs).iter().all(|r| r.is_zero()));
    }

    #[test]
    fn quotient_block_sizes() {
        let z4 = lat("Z4");
        assert_eq!(b_size_quotient(&z4, 1, 2).unwrap(), big(2));
        assert_eq!(b_size_quotient(&z4, 0, 5).unwrap(), big(5));
        let klein = lat("Z2xZ2");
        assert_eq!(b_size_quotient(&klein, 1, 2).unwrap(), big(2));
        let s3 = lat("S3");
        let non_normal = s3.classes().iter().find(|c| c.members.len() > 1).unwrap().rep;
        assert!(matches!(b_size_quotient(&s3, non_normal, 2), Err(Error::NotNormal)));
    }

    #[test]
    fn primes() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(smallest_prime_factor(15), 3);
        assert_eq!(smallest_prime_factor(49), 7);
        assert_eq!(smallest_prime_factor(13), 13);
    }
}
