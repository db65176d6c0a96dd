//! The group `ICA(G;A)` of invertible cellular automata as a product of
//! wreath products `(N_G(H)/H) ≀ Sym_α`, one per conjugacy class of
//! subgroups.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::configs::{alpha_mobius, ConfigSpace};
use crate::groups::SubgroupLattice;
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcaFactor {
    pub class: usize,
    /// `|N_G(H)/H|`.
    pub quotient_order: usize,
    pub alpha: BigUint,
}

impl IcaFactor {
    /// `|C ≀ Sym_α| = |C|^α · α!`.
    pub fn order(&self, limits: &Limits) -> Result<BigUint> {
        let alpha = self
            .alpha
            .to_u64()
            .filter(|&a| a <= limits.max_alpha)
            .ok_or_else(|| Error::limit("alpha for wreath-product order", &self.alpha, limits.max_alpha))?;
        let factorial: BigUint = (1..=alpha).map(BigUint::from).product();
        let power = BigUint::from(self.quotient_order).pow(alpha as u32);
        Ok(power * factorial)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcaStructure {
    pub factors: Vec<IcaFactor>,
    pub total_order: BigUint,
}

pub fn ica_structure(lat: &SubgroupLattice, q: usize, limits: &Limits) -> Result<IcaStructure> {
    let alphas = alpha_mobius(lat, q)?;
    let factors: Vec<IcaFactor> = alphas
        .entries
        .into_iter()
        .map(|e| {
            let rep = lat.classes()[e.class].rep;
            IcaFactor {
                class: e.class,
                quotient_order: lat.subgroup(lat.normalizer(rep)).order / lat.subgroup(rep).order,
                alpha: e.alpha,
            }
        })
        .collect();
    let total_order = factors
        .iter()
        .map(|f| f.order(limits))
        .product::<Result<BigUint>>()?;
    Ok(IcaStructure {
        factors,
        total_order,
    })
}

const MAX_CA_EXPONENT: u64 = 1 << 26;

/// `|CA(G;A)| = q^(q^n)`.
pub fn ca_order(n: usize, q: usize) -> Result<BigUint> {
    let exponent = (q as u64)
        .checked_pow(n as u32)
        .filter(|&e| e <= MAX_CA_EXPONENT)
        .ok_or_else(|| Error::limit("exponent q^n of |CA|", format!("{q}^{n}"), MAX_CA_EXPONENT))?;
    Ok(BigUint::from(q).pow(exponent as u32))
}

/// An equivariant map is free to send each orbit representative `x` to any
/// `y` with `G_x ≤ G_y`; checks that the product of those choice counts is
/// `q^(q^n)`.
pub fn product_identity_check(lat: &SubgroupLattice, q: usize, limits: &Limits) -> Result<bool> {
    let space = ConfigSpace::new(lat.group(), q, limits)?;
    let mut by_stab: HashMap<u64, u64> = HashMap::new();
    let mut reps = Vec::new();
    for x in 0..space.size() {
        *by_stab.entry(space.stabilizer_mask(x)).or_default() += 1;
        if space.orbit_map(x).into_iter().all(|y| y >= x) {
            reps.push(x);
        }
    }
    let mut choices: BTreeMap<u64, u32> = BTreeMap::new();
    for x in reps {
        let h = space.stabilizer_mask(x);
        let c = by_stab
            .iter()
            .filter(|(&m, _)| m & h == h)
            .map(|(_, &k)| k)
            .sum::<u64>();
        *choices.entry(c).or_default() += 1;
    }
    let product: BigUint = choices
        .into_iter()
        .map(|(c, mult)| BigUint::from(c).pow(mult))
        .product();
    Ok(product == ca_order(space.n(), q)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentralizerReport {
    pub orbit_size: usize,
    /// Number of permutations of the orbit commuting with every `g`.
    pub size: u64,
    pub transitive: bool,
}

/// Centralizer of the action of `G` on the orbit of `x`, by exhaustive
/// search over permutations of the orbit.
pub fn centralizer_on_orbit(space: &ConfigSpace, x: u64, limits: &Limits) -> Result<CentralizerReport> {
    let orbit = space.orbit(x);
    let m = orbit.len();
    if m > limits.centralizer_orbit {
        return Err(Error::limit("orbit size for centralizer scan", m, limits.centralizer_orbit));
    }
    let n = space.n();
    let pos: HashMap<u64, usize> = orbit.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    // act[i][g] = index of orbit[i]·g
    let act: Vec<Vec<usize>> = orbit
        .iter()
        .map(|&y| (0..n).map(|g| pos[&space.act(y, g)]).collect())
        .collect();

    struct Scan<'a> {
        act: &'a [Vec<usize>],
        image: Vec<Option<usize>>,
        taken: Vec<bool>,
        size: u64,
        reach: Vec<bool>,
    }

    impl Scan<'_> {
        fn consistent(&self, i: usize) -> bool {
            let pi = self.image[i].unwrap();
            self.act[i].iter().enumerate().all(|(g, &j)| match self.image[j] {
                Some(pj) => pj == self.act[pi][g],
                None => true,
            })
        }

        fn run(&mut self, i: usize) {
            if i == self.image.len() {
                self.size += 1;
                self.reach[self.image[0].unwrap()] = true;
                return;
            }
            for v in 0..self.image.len() {
                if self.taken[v] {
                    continue;
                }
                self.image[i] = Some(v);
                self.taken[v] = true;
                if self.consistent(i) {
                    self.run(i + 1);
                }
                self.taken[v] = false;
                self.image[i] = None;
            }
        }
    }

    let mut scan = Scan {
        act: &act,
        image: vec![None; m],
        taken: vec![false; m],
        size: 0,
        reach: vec![false; m],
    };
    scan.run(0);
    Ok(CentralizerReport {
        orbit_size: m,
        size: scan.size,
        transitive: scan.reach.iter().all(|&r| r),
    })
}

/// Whether the centralizer is transitive on every orbit of `A^G`, checked
/// one orbit representative per stabilizer class.
pub fn transitive_on_all_orbits(lat: &SubgroupLattice, q: usize, limits: &Limits) -> Result<bool> {
    let space = ConfigSpace::new(lat.group(), q, limits)?;
    let mut seen = vec![false; lat.len()];
    for x in 0..space.size() {
        let Some(i) = lat.index_of(space.stabilizer_mask(x)) else {
            return Err(Error::Internal("stabilizer missing from lattice".into()));
        };
        let class = lat.class_of(i);
        if std::mem::replace(&mut seen[class], true) {
            continue;
        }
        if !centralizer_on_orbit(&space, x, limits)?.transitive {
            return Ok(false);
        }
    }
    Ok(true)
}

impl IcaStructure {
    pub fn alpha_one_factors(&self) -> usize {
        self.factors.iter().filter(|f| f.alpha.is_one()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::Configuration;
    use crate::groups::{build_group, enumerate_subgroups};

    fn lat(spec: &str) -> SubgroupLattice {
        enumerate_subgroups(&build_group(spec).unwrap()).unwrap()
    }

    fn shape(s: &IcaStructure) -> Vec<(usize, u64)> {
        s.factors
            .iter()
            .map(|f| (f.quotient_order, f.alpha.to_u64().unwrap()))
            .collect()
    }

    #[test]
    fn klein_structure() {
        let s = ica_structure(&lat("Z2xZ2"), 2, &Limits::default()).unwrap();
        assert_eq!(shape(&s), vec![(1, 2), (2, 1), (2, 1), (2, 1), (4, 2)]);
        assert_eq!(s.total_order, BigUint::from(512u32));
        assert_eq!(s.alpha_one_factors(), 3);
    }

    #[test]
    fn cyclic_structures() {
        let limits = Limits::default();
        let s = ica_structure(&lat("Z3"), 2, &limits).unwrap();
        assert_eq!(shape(&s), vec![(1, 2), (3, 2)]);
        assert_eq!(s.total_order, BigUint::from(36u32));
        let s = ica_structure(&lat("Z2"), 2, &limits).unwrap();
        assert_eq!(s.total_order, BigUint::from(4u32));
    }

    #[test]
    fn alpha_cap() {
        let limits = Limits {
            max_alpha: 3,
            ..Limits::default()
        };
        assert!(matches!(
            ica_structure(&lat("Z5"), 2, &limits),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn ca_orders() {
        assert_eq!(ca_order(2, 2).unwrap(), BigUint::from(16u32));
        assert_eq!(ca_order(3, 2).unwrap(), BigUint::from(256u32));
        assert_eq!(ca_order(4, 2).unwrap(), BigUint::from(65536u32));
        assert!(ca_order(64, 3).is_err());
    }

    #[test]
    fn product_identity() {
        let limits = Limits::default();
        for spec in ["Z2", "Z5", "S3", "Z2xZ2", "Q8"] {
            assert!(product_identity_check(&lat(spec), 2, &limits).unwrap(), "{spec}");
        }
        assert!(product_identity_check(&lat("S3"), 3, &limits).unwrap());
    }

    #[test]
    fn centralizers() {
        let limits = Limits::default();
        let g = build_group("S3").unwrap();
        let space = ConfigSpace::new(&g, 2, &limits).unwrap();
        // indicator of {e, (12)}; (12) is element 1 in the lex listing
        let x = Configuration::indicator(6, 2, 0b11).encoding();
        assert_eq!(space.stabilizer_mask(x), 0b11);
        let r = centralizer_on_orbit(&space, x, &limits).unwrap();
        assert_eq!((r.orbit_size, r.size, r.transitive), (3, 1, false));

        let g = build_group("Z5").unwrap();
        let space = ConfigSpace::new(&g, 2, &limits).unwrap();
        let r = centralizer_on_orbit(&space, 1, &limits).unwrap();
        assert_eq!((r.orbit_size, r.size, r.transitive), (5, 5, true));
        let r = centralizer_on_orbit(&space, 0, &limits).unwrap();
        assert_eq!((r.orbit_size, r.size, r.transitive), (1, 1, true));
    }

    #[test]
    fn centralizer_orbit_cap() {
        let g = build_group("Z12").unwrap();
        let limits = Limits::default();
        let space = ConfigSpace::new(&g, 2, &limits).unwrap();
        assert!(matches!(
            centralizer_on_orbit(&space, 1, &limits),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn transitivity_tracks_dedekind() {
        let limits = Limits::default();
        for spec in ["Z4", "Z2xZ2", "Q8", "S3", "D4"] {
            let l = lat(spec);
            assert_eq!(transitive_on_all_orbits(&l, 2, &limits).unwrap(), l.is_dedekind(), "{spec}");
        }
    }
}
