//! Subgroup lattice, conjugacy classes of subgroups and the lattice Möbius
//! function.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use super::{bits, FiniteGroup};
use crate::exec::{map_slice, Execution};
use crate::{Error, Limits, Result};

/// A subgroup stored as a membership bitmask over element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subgroup {
    pub mask: u64,
    pub order: usize,
}

impl Subgroup {
    pub fn from_mask(mask: u64) -> Self {
        Subgroup {
            mask,
            order: mask.count_ones() as usize,
        }
    }

    pub fn trivial() -> Self {
        Subgroup::from_mask(1)
    }

    pub fn contains(&self, g: usize) -> bool {
        g < 64 && self.mask & (1 << g) != 0
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        bits(self.mask)
    }
}

/// Orders two equal-size masks by their sorted element lists.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let lowest_diff = (a ^ b).trailing_zeros();
    if a & (1 << lowest_diff) != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Canonical order: decreasing order, then lexicographic element list.
fn canonical_cmp(a: &Subgroup, b: &Subgroup) -> Ordering {
    b.order.cmp(&a.order).then_with(|| lex_cmp(a.mask, b.mask))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Subgroup indices, ascending (so in canonical order).
    pub members: Vec<usize>,
    /// The member with the lexicographically smallest mask.
    pub rep: usize,
    /// Index of `N_G(rep)` in the lattice.
    pub normalizer: usize,
}

#[derive(Debug)]
pub struct SubgroupLattice {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    index: HashMap<u64, usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    normalizers: Vec<usize>,
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
}

pub fn enumerate_subgroups(group: &FiniteGroup) -> Result<SubgroupLattice> {
    enumerate_subgroups_with(group, &Limits::default(), Execution::default())
}

/// Enumerates every subgroup by closing the cyclic subgroups under joins.
pub fn enumerate_subgroups_with(
    group: &FiniteGroup,
    limits: &Limits,
    exec: Execution,
) -> Result<SubgroupLattice> {
    let n = group.order();
    let cap = limits.subgroup_order.min(64);
    if n > cap {
        return Err(Error::limit("subgroup enumeration group order", n, cap));
    }

    let cyclic: Vec<u64> = (0..n)
        .map(|g| group.generate(1 << g))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut found: BTreeSet<u64> = cyclic.iter().copied().collect();
    let mut frontier: Vec<u64> = cyclic.clone();
    while !frontier.is_empty() {
        let joins = map_slice(exec, &frontier, |&s| {
            cyclic
                .iter()
                .filter(|&&c| c & !s != 0)
                .map(|&c| group.generate(s | c))
                .collect::<Vec<_>>()
        });
        let fresh: BTreeSet<u64> = joins
            .into_iter()
            .flatten()
            .filter(|m| !found.contains(m))
            .collect();
        found.extend(fresh.iter().copied());
        frontier = fresh.into_iter().collect();
    }

    let mut subgroups: Vec<Subgroup> = found.into_iter().map(Subgroup::from_mask).collect();
    subgroups.sort_by(canonical_cmp);
    let index: HashMap<u64, usize> = subgroups
        .iter()
        .enumerate()
        .map(|(i, s)| (s.mask, i))
        .collect();

    let per_subgroup = map_slice(exec, &subgroups, |s| {
        let mut conjugates = Vec::new();
        let mut normalizer = 0u64;
        for g in 0..n {
            let c = group.conjugate_mask(s.mask, g);
            if c == s.mask {
                normalizer |= 1 << g;
            }
            conjugates.push(c);
        }
        (conjugates, normalizer)
    });

    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes = Vec::new();
    let mut normalizers = Vec::with_capacity(subgroups.len());
    for (i, (conjugates, normalizer)) in per_subgroup.iter().enumerate() {
        normalizers.push(index[normalizer]);
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: BTreeSet<usize> = conjugates.iter().map(|m| index[m]).collect();
        let members: Vec<usize> = members.into_iter().collect();
        // ascending indices within one order are ascending lexicographic masks
        let rep = members[0];
        for &m in &members {
            class_of[m] = classes.len();
        }
        classes.push(ConjugacyClass {
            members,
            rep,
            normalizer: index[&per_subgroup[rep].1],
        });
    }

    let mobius_rows = (0..subgroups.len()).map(|_| OnceLock::new()).collect();
    Ok(SubgroupLattice {
        group: group.clone(),
        subgroups,
        index,
        classes,
        class_of,
        normalizers,
        mobius_rows,
    })
}

impl SubgroupLattice {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Index of the whole group (always 0).
    pub fn top(&self) -> usize {
        0
    }

    /// Index of the trivial subgroup (always last).
    pub fn bottom(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// Containment: subgroup `i` is contained in subgroup `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.subgroups[i].is_subset_of(&self.subgroups[j])
    }

    /// All containment pairs `(i, j)` with `i ⊆ j`.
    pub fn leq_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.len();
        (0..r).flat_map(move |i| (0..r).filter(move |&j| self.leq(i, j)).map(move |j| (i, j)))
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Index of `N_G(H_i)`.
    pub fn normalizer(&self, i: usize) -> usize {
        self.normalizers[i]
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.classes[self.class_of[i]].members.len() == 1
    }

    pub fn is_dedekind(&self) -> bool {
        self.classes.iter().all(|c| c.members.len() == 1)
    }

    /// `μ(H_i, H_j)`.
    pub fn mobius(&self, i: usize, j: usize) -> i64 {
        self.mobius_row(i)[j]
    }

    /// The row `j ↦ μ(H_i, H_j)`, computed on first use.
    pub fn mobius_row(&self, i: usize) -> &[i64] {
        self.mobius_rows[i].get_or_init(|| {
            let mut row = vec![0i64; self.len()];
            // supergroups of H_i, smallest first (canonical order is by decreasing size)
            let above: Vec<usize> = (0..self.len()).rev().filter(|&j| self.leq(i, j)).collect();
            for (pos, &k) in above.iter().enumerate() {
                row[k] = if k == i {
                    1
                } else {
                    -above[..pos]
                        .iter()
                        .filter(|&&l| self.leq(l, k))
                        .map(|&l| row[l])
                        .sum::<i64>()
                };
            }
            row
        })
    }

    /// Smallest order of a subgroup strictly above `H_i`, and every subgroup
    /// attaining it. For the whole group this is `(n, [])`.
    pub fn min_cover(&self, i: usize) -> (usize, Vec<usize>) {
        let above: Vec<usize> = (0..self.len())
            .filter(|&j| j != i && self.leq(i, j))
            .collect();
        match above.iter().map(|&j| self.subgroups[j].order).min() {
            None => (self.group.order(), Vec::new()),
            Some(p) => (
                p,
                above
                    .into_iter()
                    .filter(|&j| self.subgroups[j].order == p)
                    .collect(),
            ),
        }
    }

    /// Number of subgroups of index 2.
    pub fn index2_count(&self) -> usize {
        let n = self.group.order();
        self.subgroups.iter().filter(|s| 2 * s.order == n).count()
    }

    /// Quotient `G / H_i` on coset representatives (smallest element of each
    /// coset), cosets ordered by representative.
    pub fn quotient(&self, i: usize) -> Result<FiniteGroup> {
        if !self.is_normal(i) {
            return Err(Error::NotNormal);
        }
        Ok(quotient_by_mask(&self.group, self.subgroups[i].mask))
    }
}

pub(crate) fn quotient_by_mask(group: &FiniteGroup, mask: u64) -> FiniteGroup {
    let n = group.order();
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for g in 0..n {
        if coset[g] != usize::MAX {
            continue;
        }
        for h in bits(mask) {
            coset[group.mul(h, g)] = reps.len();
        }
        reps.push(g);
    }
    let m = reps.len();
    let mut table = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            table.push(coset[group.mul(a, b)]);
        }
    }
    FiniteGroup::from_trusted(m, table)
}

/// Smallest number of elements generating `group`, by breadth-first search
/// over subset sizes.
pub fn group_rank(group: &FiniteGroup, limits: &Limits) -> Result<usize> {
    let n = group.order();
    if n > limits.rank_order.min(64) {
        return Err(Error::limit("group rank order", n, limits.rank_order.min(64)));
    }
    let full = group.full_mask();
    if n == 1 {
        return Ok(0);
    }
    for size in 1..n {
        if subsets_generate(group, size, full) {
            return Ok(size);
        }
    }
    Ok(n - 1)
}

fn subsets_generate(group: &FiniteGroup, size: usize, full: u64) -> bool {
    fn rec(group: &FiniteGroup, start: usize, left: usize, acc: u64, full: u64) -> bool {
        if left == 0 {
            return group.generate(acc) == full;
        }
        (start..group.order()).any(|g| rec(group, g + 1, left - 1, acc | (1 << g), full))
    }
    rec(group, 1, size, 0, full)
}
