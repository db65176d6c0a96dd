//! Finite groups as validated Cayley tables.
//!
//! Element `0` is the identity in every constructor and every file. Products
//! are read `table[g][h] = g*h`.

mod cayley;
mod lattice;

pub use cayley::{parse_cayley, read_cayley_file, validate_cayley};
pub use lattice::{
    enumerate_subgroups, enumerate_subgroups_with, group_rank, ConjugacyClass, Subgroup,
    SubgroupLattice,
};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    elt_order: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a table already known to be valid.
    fn from_trusted(n: usize, table: Vec<usize>) -> Self {
        let inv = (0..n)
            .map(|g| (0..n).find(|&h| table[g * n + h] == 0).expect("group has inverses"))
            .collect();
        let elt_order = (0..n)
            .map(|g| {
                let mut k = 1;
                let mut acc = g;
                while acc != 0 {
                    acc = table[acc * n + g];
                    k += 1;
                }
                k
            })
            .collect();
        FiniteGroup {
            n,
            table,
            inv,
            elt_order,
        }
    }

    fn from_mul(n: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                table.push(mul(g, h));
            }
        }
        FiniteGroup::from_trusted(n, table)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.n + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    #[inline]
    pub fn elt_order(&self, g: usize) -> usize {
        self.elt_order[g]
    }

    pub fn elt_orders(&self) -> &[usize] {
        &self.elt_order
    }

    /// Row `g` of the table, i.e. right multiplication by `h` is `row(g)[h]`.
    pub fn row(&self, g: usize) -> &[usize] {
        &self.table[g * self.n..(g + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|g| self.row(g).to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// `g^-1 h g`.
    #[inline]
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    /// Cyclic group `Z_n` with `a*b = a+b mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Descriptor("Z0".into()));
        }
        Ok(FiniteGroup::from_mul(n, |a, b| (a + b) % n))
    }

    /// Dihedral group of order `2n`; element `i + n*j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Descriptor("D0".into()));
        }
        Ok(FiniteGroup::from_mul(2 * n, |a, b| {
            let (i, j) = (a % n, a / n);
            let (k, l) = (b % n, b / n);
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            rot + n * ((j + l) % 2)
        }))
    }

    /// Quaternion group; elements `1, -1, i, -i, j, -j, k, -k` in that order.
    pub fn quaternion() -> Self {
        // unit * unit -> (sign, unit) for units 1, i, j, k
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        FiniteGroup::from_mul(8, |a, b| {
            let (ua, sa) = (a / 2, a % 2 == 1);
            let (ub, sb) = (b / 2, b % 2 == 1);
            let (s, u) = UNIT[ua][ub];
            2 * u + usize::from(s ^ sa ^ sb)
        })
    }

    /// Symmetric group on `degree` points, permutations in lexicographic order.
    ///
    /// Composition applies the left factor first: `(g*h)(i) = h(g(i))`.
    pub fn symmetric(degree: usize) -> Result<Self> {
        if degree == 0 || degree > 5 {
            return Err(Error::Descriptor(format!("S{degree}")));
        }
        Ok(FiniteGroup::from_permutations(all_permutations(degree)))
    }

    /// Alternating group on `degree` points (even permutations of `symmetric`).
    pub fn alternating(degree: usize) -> Result<Self> {
        if degree == 0 || degree > 5 {
            return Err(Error::Descriptor(format!("A{degree}")));
        }
        let even = all_permutations(degree)
            .into_iter()
            .filter(|p| is_even(p))
            .collect();
        Ok(FiniteGroup::from_permutations(even))
    }

    fn from_permutations(perms: Vec<Vec<usize>>) -> Self {
        let index: std::collections::HashMap<&[usize], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        FiniteGroup::from_mul(perms.len(), |a, b| {
            let composed: Vec<usize> = perms[a].iter().map(|&i| perms[b][i]).collect();
            index[composed.as_slice()]
        })
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let m = other.n;
        FiniteGroup::from_mul(self.n * m, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
    }

    /// Bitmask of the subgroup generated by the elements in `gens`.
    pub fn generate(&self, gens: u64) -> u64 {
        debug_assert!(self.n <= 64);
        let gen_list: Vec<usize> = bits(gens).collect();
        let mut mask = 1u64;
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in &gen_list {
                let y = self.mul(x, g);
                if mask & (1 << y) == 0 {
                    mask |= 1 << y;
                    elems.push(y);
                }
            }
            i += 1;
        }
        mask
    }

    /// Bitmask of `g^-1 H g`.
    pub fn conjugate_mask(&self, mask: u64, g: usize) -> u64 {
        bits(mask).fold(0, |acc, h| acc | (1 << self.conjugate(h, g)))
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

/// Iterates the set bits of a mask in increasing order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

fn all_permutations(degree: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; degree], &mut out);
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

/// Builds a group from a descriptor such as `Z4`, `Z2xZ2`, `D4`, `Q8`, `S3`,
/// `A4`, or `file:<path>`.
pub fn build_group(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix("file:") {
        return read_cayley_file(std::path::Path::new(path));
    }
    let mut factors = spec.split('x').map(build_factor);
    let first = factors
        .next()
        .ok_or_else(|| Error::Descriptor(spec.into()))??;
    factors.try_fold(first, |acc, f| Ok(acc.direct_product(&f?)))
        .map_err(|e| match e {
            Error::Descriptor(_) => Error::Descriptor(spec.into()),
            other => other,
        })
}

fn build_factor(factor: &str) -> Result<FiniteGroup> {
    let bad = || Error::Descriptor(factor.into());
    if factor == "Q8" {
        return Ok(FiniteGroup::quaternion());
    }
    let mut chars = factor.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let k: usize = digits.parse().map_err(|_| bad())?;
    match kind {
        'Z' => FiniteGroup::cyclic(k),
        'D' => FiniteGroup::dihedral(k),
        'S' => FiniteGroup::symmetric(k),
        'A' => FiniteGroup::alternating(k),
        _ => Err(bad()),
    }
}
