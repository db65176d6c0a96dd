//! Configurations `x: G -> A`, the right action `(h)(x·g) = (h g^-1)x`,
//! orbits, stabilisers, and the per-class orbit counts `alpha_[H]`.
//!
//! A configuration is encoded as `Σ_g x[g]·q^g`, so element indices are digit
//! positions and encodings index flat tables directly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::exec::{map_range, map_slice, Execution};
use crate::groups::{FiniteGroup, Subgroup, SubgroupLattice};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    q: usize,
    symbols: Vec<usize>,
}

impl Configuration {
    pub fn new(q: usize, symbols: Vec<usize>) -> Result<Self> {
        if q == 0 || symbols.iter().any(|&s| s >= q) {
            return Err(Error::InvalidArgument(format!(
                "symbols must lie in 0..{q}"
            )));
        }
        Ok(Configuration { q, symbols })
    }

    pub fn constant(n: usize, q: usize, k: usize) -> Self {
        assert!(k < q);
        Configuration {
            q,
            symbols: vec![k; n],
        }
    }

    /// Indicator of a subset of `G` (symbol 1 on the subset, 0 elsewhere).
    pub fn indicator(n: usize, q: usize, mask: u64) -> Self {
        Configuration {
            q,
            symbols: (0..n).map(|g| usize::from(mask & (1 << g) != 0)).collect(),
        }
    }

    pub fn from_encoding(mut code: u64, n: usize, q: usize) -> Self {
        let symbols = (0..n)
            .map(|_| {
                let d = (code % q as u64) as usize;
                code /= q as u64;
                d
            })
            .collect();
        Configuration { q, symbols }
    }

    pub fn encoding(&self) -> u64 {
        self.symbols
            .iter()
            .rev()
            .fold(0u64, |acc, &s| acc * self.q as u64 + s as u64)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_constant(&self) -> bool {
        self.symbols.windows(2).all(|w| w[0] == w[1])
    }
}

/// `x·g`, i.e. `result[h] = x[h g^-1]`.
pub fn act(x: &Configuration, g: usize, group: &FiniteGroup) -> Configuration {
    let gi = group.inv(g);
    Configuration {
        q: x.q,
        symbols: (0..group.order())
            .map(|h| x.symbols[group.mul(h, gi)])
            .collect(),
    }
}

/// `G_x = {g : x·g = x}`.
pub fn stabilizer(x: &Configuration, group: &FiniteGroup) -> Subgroup {
    let mask = (0..group.order())
        .filter(|&g| {
            let gi = group.inv(g);
            (0..group.order()).all(|h| x.symbols[group.mul(h, gi)] == x.symbols[h])
        })
        .fold(0u64, |m, g| m | (1 << g));
    Subgroup::from_mask(mask)
}

/// The configuration space `A^G` with the shift action precomputed on
/// encodings.
#[derive(Debug, Clone)]
pub struct ConfigSpace {
    group: FiniteGroup,
    q: usize,
    size: u64,
    pow: Vec<u64>,
    /// `source[g][h] = h g^-1`, so `(x·g)[h] = x[source[g][h]]`.
    source: Vec<Vec<usize>>,
}

impl ConfigSpace {
    pub fn new(group: &FiniteGroup, q: usize, limits: &Limits) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidArgument("alphabet size must be positive".into()));
        }
        let n = group.order();
        let size = (q as u64)
            .checked_pow(n as u32)
            .filter(|&s| s <= limits.max_configs)
            .ok_or_else(|| {
                Error::limit(
                    "configuration count",
                    BigUint::from(q).pow(n as u32),
                    limits.max_configs,
                )
            })?;
        if n > 64 {
            return Err(Error::limit("group order for configurations", n, 64));
        }
        let pow = (0..n).map(|g| (q as u64).pow(g as u32)).collect();
        let source = (0..n)
            .map(|g| {
                let gi = group.inv(g);
                (0..n).map(|h| group.mul(h, gi)).collect()
            })
            .collect();
        Ok(ConfigSpace {
            group: group.clone(),
            q,
            size,
            pow,
            source,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.group.order()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `q^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn decode(&self, mut code: u64, digits: &mut [usize]) {
        let q = self.q as u64;
        for d in digits.iter_mut() {
            *d = (code % q) as usize;
            code /= q;
        }
    }

    pub fn digits(&self, code: u64) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        self.decode(code, &mut d);
        d
    }

    pub fn encode(&self, digits: &[usize]) -> u64 {
        digits
            .iter()
            .zip(&self.pow)
            .map(|(&d, &p)| d as u64 * p)
            .sum()
    }

    /// Encoding of `x·g` given the digits of `x`.
    #[inline]
    pub fn act_digits(&self, digits: &[usize], g: usize) -> u64 {
        self.source[g]
            .iter()
            .zip(&self.pow)
            .map(|(&src, &p)| digits[src] as u64 * p)
            .sum()
    }

    pub fn act(&self, code: u64, g: usize) -> u64 {
        self.act_digits(&self.digits(code), g)
    }

    /// Encoding of the constant configuration `k`.
    pub fn constant(&self, k: usize) -> u64 {
        self.pow.iter().map(|&p| k as u64 * p).sum()
    }

    pub fn is_constant(&self, code: u64) -> bool {
        (0..self.q).any(|k| self.constant(k) == code)
    }

    /// Orbit `xG`, sorted.
    pub fn orbit(&self, code: u64) -> Vec<u64> {
        let d = self.digits(code);
        let mut o: Vec<u64> = (0..self.n()).map(|g| self.act_digits(&d, g)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Pairs `(x·g, g)` for each `g`, in element order.
    pub fn orbit_map(&self, code: u64) -> Vec<u64> {
        let d = self.digits(code);
        (0..self.n()).map(|g| self.act_digits(&d, g)).collect()
    }

    pub fn stabilizer_mask(&self, code: u64) -> u64 {
        let d = self.digits(code);
        (0..self.n())
            .filter(|&g| self.act_digits(&d, g) == code)
            .fold(0, |m, g| m | (1 << g))
    }

    pub fn configuration(&self, code: u64) -> Configuration {
        Configuration {
            q: self.q,
            symbols: self.digits(code),
        }
    }
}

/// Orbit decomposition of `A^G`.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    pub q: usize,
    /// Orbit index of every encoding.
    pub orbit_id: Vec<u32>,
    /// Smallest encoding of each orbit; orbits are numbered by increasing rep.
    pub reps: Vec<u64>,
    /// Stabiliser of each representative.
    pub stab: Vec<Subgroup>,
    /// Lattice index of each representative's stabiliser.
    pub stab_index: Vec<usize>,
    /// Conjugacy class (of subgroups) of each orbit's stabilisers.
    pub class_of: Vec<usize>,
    pub orbit_size: Vec<usize>,
}

impl OrbitTable {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn orbit_of(&self, code: u64) -> usize {
        self.orbit_id[code as usize] as usize
    }

    /// Sorted encodings of orbit `o`.
    pub fn members(&self, o: usize) -> Vec<u64> {
        (self.reps[o]..self.orbit_id.len() as u64)
            .filter(|&c| self.orbit_id[c as usize] as usize == o)
            .take(self.orbit_size[o])
            .collect()
    }
}

pub fn enumerate_orbits(lat: &SubgroupLattice, q: usize) -> Result<OrbitTable> {
    enumerate_orbits_with(lat, q, &Limits::default(), Execution::default())
}

const CHUNK: u64 = 1 << 12;

pub fn enumerate_orbits_with(
    lat: &SubgroupLattice,
    q: usize,
    limits: &Limits,
    exec: Execution,
) -> Result<OrbitTable> {
    let space = ConfigSpace::new(lat.group(), q, limits)?;
    let n = space.n();
    let size = space.size();

    // smallest encoding in each configuration's orbit
    let chunks = size.div_ceil(CHUNK);
    let mut orbit_id: Vec<u32> = map_range(exec, 0..chunks, |c| {
        let mut digits = vec![0usize; n];
        (c * CHUNK..((c + 1) * CHUNK).min(size))
            .map(|x| {
                space.decode(x, &mut digits);
                (0..n).map(|g| space.act_digits(&digits, g)).min().unwrap() as u32
            })
            .collect::<Vec<u32>>()
    })
    .concat();

    // the minimum of an orbit precedes its members, so ids resolve in one pass
    let mut reps = Vec::new();
    for x in 0..size as usize {
        let m = orbit_id[x] as usize;
        orbit_id[x] = if m == x {
            reps.push(x as u64);
            (reps.len() - 1) as u32
        } else {
            orbit_id[m]
        };
    }

    let stab_masks = map_slice(exec, &reps, |&r| space.stabilizer_mask(r));
    let mut stab = Vec::with_capacity(reps.len());
    let mut stab_index = Vec::with_capacity(reps.len());
    let mut class_of = Vec::with_capacity(reps.len());
    let mut orbit_size = Vec::with_capacity(reps.len());
    for mask in stab_masks {
        let s = Subgroup::from_mask(mask);
        let idx = lat
            .index_of(mask)
            .ok_or_else(|| Error::Internal(format!("stabiliser {mask:#x} missing from lattice")))?;
        stab_index.push(idx);
        class_of.push(lat.class_of(idx));
        orbit_size.push(n / s.order);
        stab.push(s);
    }
    Ok(OrbitTable {
        q,
        orbit_id,
        reps,
        stab,
        stab_index,
        class_of,
        orbit_size,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaEntry {
    /// Conjugacy class index in the lattice.
    pub class: usize,
    /// Number of orbits inside `B_[H]`.
    pub alpha: BigUint,
    /// `|B_[H]|`.
    pub b_size: BigUint,
    /// `n / |H|`.
    pub orbit_size: usize,
}

/// One entry per conjugacy class of subgroups, in lattice class order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaVector {
    pub entries: Vec<AlphaEntry>,
}

impl AlphaVector {
    pub fn alphas(&self) -> Vec<BigUint> {
        self.entries.iter().map(|e| e.alpha.clone()).collect()
    }

    /// The alphas as machine integers, when they fit.
    pub fn alphas_u64(&self) -> Option<Vec<u64>> {
        self.entries.iter().map(|e| e.alpha.to_u64()).collect()
    }

    pub fn total_orbits(&self) -> BigUint {
        self.entries.iter().map(|e| &e.alpha).sum()
    }

    pub fn total_configs(&self) -> BigUint {
        self.entries.iter().map(|e| &e.b_size).sum()
    }
}

pub(crate) fn q_pow(q: usize, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// `Σ_K μ(H_i, K) q^{n/|K|}`, i.e. `|B_[H_i]| / |[H_i]|`.
pub(crate) fn mobius_sum(lat: &SubgroupLattice, i: usize, q: usize) -> BigInt {
    let n = lat.group().order();
    lat.mobius_row(i)
        .iter()
        .zip(lat.subgroups())
        .filter(|(&mu, _)| mu != 0)
        .map(|(&mu, k)| BigInt::from(mu) * BigInt::from(q_pow(q, n / k.order)))
        .sum()
}

/// `alpha_[H]` and `|B_[H]|` for every class, from the lattice Möbius
/// function alone.
pub fn alpha_mobius(lat: &SubgroupLattice, q: usize) -> Result<AlphaVector> {
    let n = lat.group().order();
    let entries = lat
        .classes()
        .iter()
        .enumerate()
        .map(|(c, class)| {
            let h = lat.subgroup(class.rep);
            let b = BigInt::from(class.members.len()) * mobius_sum(lat, class.rep, q);
            let b = b
                .to_biguint()
                .ok_or_else(|| Error::Internal(format!("negative |B| for class {c}")))?;
            let (alpha, rem) = (&b * h.order).div_rem(&BigUint::from(n));
            if !rem.is_zero() {
                return Err(Error::Internal(format!(
                    "|B| * |H| not divisible by n for class {c}"
                )));
            }
            Ok(AlphaEntry {
                class: c,
                alpha,
                b_size: b,
                orbit_size: n / h.order,
            })
        })
        .collect::<Result<_>>()?;
    Ok(AlphaVector { entries })
}

/// `alpha_[H]` and `|B_[H]|` counted off an orbit table.
pub fn alpha_direct(lat: &SubgroupLattice, table: &OrbitTable) -> AlphaVector {
    let n = lat.group().order();
    let mut entries: Vec<AlphaEntry> = lat
        .classes()
        .iter()
        .enumerate()
        .map(|(c, class)| AlphaEntry {
            class: c,
            alpha: BigUint::zero(),
            b_size: BigUint::zero(),
            orbit_size: n / lat.subgroup(class.rep).order,
        })
        .collect();
    for (o, &c) in table.class_of.iter().enumerate() {
        entries[c].alpha += 1u32;
        entries[c].b_size += table.orbit_size[o];
    }
    AlphaVector { entries }
}

/// `|Fix(H)| = q^{[G:H]}`.
pub fn fix_count(group: &FiniteGroup, h: &Subgroup, q: usize) -> BigUint {
    q_pow(q, group.order() / h.order)
}

/// Number of orbits on `A^G` by Cauchy-Frobenius: `(1/n) Σ_g q^{n/|g|}`.
pub fn total_orbits_cf(group: &FiniteGroup, q: usize) -> Result<BigUint> {
    let n = group.order();
    let sum: BigUint = group
        .elt_orders()
        .iter()
        .map(|&o| q_pow(q, n / o))
        .sum();
    let (quot, rem) = sum.div_rem(&BigUint::from(n));
    if !rem.is_zero() {
        return Err(Error::Internal(
            "Cauchy-Frobenius sum not divisible by the group order".into(),
        ));
    }
    Ok(quot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, enumerate_subgroups};

    fn setup(spec: &str) -> SubgroupLattice {
        enumerate_subgroups(&build_group(spec).unwrap()).unwrap()
    }

    fn small(v: &AlphaVector) -> Vec<u64> {
        v.alphas_u64().unwrap()
    }

    #[test]
    fn constants_fixed_and_identity() {
        let g = build_group("S3").unwrap();
        let k = Configuration::constant(6, 3, 2);
        for e in 0..6 {
            assert_eq!(act(&k, e, &g), k);
        }
        let x = Configuration::new(3, vec![0, 1, 2, 0, 1, 1]).unwrap();
        assert_eq!(act(&x, 0, &g), x);
    }

    #[test]
    fn cyclic_shift() {
        let g = build_group("Z4").unwrap();
        let x = Configuration::new(2, vec![1, 0, 0, 0]).unwrap();
        assert_eq!(act(&x, 1, &g).symbols(), &[0, 1, 0, 0]);
    }

    #[test]
    fn right_action_law() {
        let g = build_group("S3").unwrap();
        let space = ConfigSpace::new(&g, 2, &Limits::default()).unwrap();
        for code in 0..space.size() {
            let x = space.configuration(code);
            for a in 0..6 {
                for b in 0..6 {
                    assert_eq!(act(&act(&x, a, &g), b, &g), act(&x, g.mul(a, b), &g));
                }
            }
            assert_eq!(space.act(code, 4), act(&x, 4, &g).encoding());
        }
    }

    #[test]
    fn stabilizers() {
        let g = build_group("Z4").unwrap();
        let x = Configuration::new(2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(stabilizer(&x, &g).mask, 0b0101);
        assert_eq!(stabilizer(&Configuration::constant(4, 2, 1), &g).mask, 0b1111);

        let lat = setup("S3");
        for s in lat.subgroups() {
            let x = Configuration::indicator(6, 2, s.mask);
            assert_eq!(stabilizer(&x, lat.group()), *s);
        }
    }

    #[test]
    fn encoding_roundtrip() {
        let x = Configuration::new(3, vec![2, 0, 1, 1]).unwrap();
        assert_eq!(x.encoding(), 2 + 9 + 27);
        assert_eq!(Configuration::from_encoding(x.encoding(), 4, 3), x);
    }

    #[test]
    fn orbits_of_z2() {
        let lat = setup("Z2");
        let t = enumerate_orbits(&lat, 2).unwrap();
        assert_eq!(t.reps, vec![0, 1, 3]);
        assert_eq!(t.orbit_size, vec![1, 2, 1]);
        assert_eq!(t.members(1), vec![1, 2]);
    }

    #[test]
    fn orbits_of_klein() {
        let lat = setup("Z2xZ2");
        let t = enumerate_orbits(&lat, 2).unwrap();
        let mut sizes = t.orbit_size.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2, 4, 4]);
    }

    #[test]
    fn orbits_of_z6() {
        let lat = setup("Z6");
        assert_eq!(enumerate_orbits(&lat, 2).unwrap().len(), 14);
        assert_eq!(total_orbits_cf(lat.group(), 2).unwrap(), BigUint::from(14u32));
    }

    #[test]
    fn alpha_examples() {
        let klein = setup("Z2xZ2");
        assert_eq!(small(&alpha_mobius(&klein, 2).unwrap()), vec![2, 1, 1, 1, 2]);
        let z4 = setup("Z4");
        assert_eq!(small(&alpha_mobius(&z4, 2).unwrap()), vec![2, 1, 3]);
        for lat in [&klein, &z4] {
            let t = enumerate_orbits(lat, 2).unwrap();
            assert_eq!(alpha_direct(lat, &t), alpha_mobius(lat, 2).unwrap());
        }
        let direct = alpha_direct(&klein, &enumerate_orbits(&klein, 2).unwrap());
        assert_eq!(direct.entries[4].b_size, BigUint::from(8u32));
    }

    #[test]
    fn alpha_of_whole_group_is_q() {
        for spec in ["Z5", "S3", "Q8", "Z2xZ4"] {
            let lat = setup(spec);
            for q in 2..5 {
                assert_eq!(alpha_mobius(&lat, q).unwrap().entries[0].alpha, BigUint::from(q));
            }
        }
    }

    #[test]
    fn fix_counts() {
        let lat = setup("Z4");
        let g = lat.group();
        assert_eq!(fix_count(g, lat.subgroup(0), 3), BigUint::from(3u32));
        assert_eq!(fix_count(g, lat.subgroup(2), 3), BigUint::from(81u32));
        let z2 = lat.subgroup(1);
        assert_eq!(fix_count(g, z2, 2), BigUint::from(4u32));
        let space = ConfigSpace::new(g, 2, &Limits::default()).unwrap();
        let scanned = (0..space.size())
            .filter(|&c| space.stabilizer_mask(c) & z2.mask == z2.mask)
            .count();
        assert_eq!(scanned, 4);
    }

    #[test]
    fn cauchy_frobenius() {
        assert_eq!(total_orbits_cf(&build_group("Z2").unwrap(), 2).unwrap(), BigUint::from(3u32));
        assert_eq!(total_orbits_cf(&build_group("Z2xZ2").unwrap(), 2).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn space_limit() {
        let g = build_group("Z25").unwrap();
        assert!(matches!(
            ConfigSpace::new(&g, 2, &Limits::default()),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
