//! Brute-force engine for `CA(G;A)` at desk scale.
//!
//! A cellular automaton is materialised as a [`TransformationTable`]: the
//! image of every configuration encoding. Composition reads left to right,
//! `(x)(τσ) = ((x)τ)σ`, matching the right action on configurations.

use std::collections::HashMap;

use crate::configs::ConfigSpace;
use crate::exec::{fold_range, map_slice, Execution};
use crate::groups::FiniteGroup;
use crate::{Error, Limits, Result};

/// A local rule `μ: A^G -> A` indexed by configuration encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRule {
    pub q: usize,
    pub values: Vec<u32>,
}

impl LocalRule {
    pub fn new(q: usize, values: Vec<u32>) -> Result<Self> {
        if values.iter().any(|&v| v as usize >= q) {
            return Err(Error::InvalidArgument(format!("rule values must lie in 0..{q}")));
        }
        Ok(LocalRule { q, values })
    }

    /// Rule number `index` in base-`q` counter order (digit `c` is `μ(c)`).
    pub fn from_index(q: usize, len: usize, mut index: u64) -> Self {
        let values = (0..len)
            .map(|_| {
                let d = (index % q as u64) as u32;
                index /= q as u64;
                d
            })
            .collect();
        LocalRule { q, values }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransformationTable {
    pub image: Vec<u32>,
}

impl TransformationTable {
    pub fn identity(size: usize) -> Self {
        TransformationTable {
            image: (0..size as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        self.image[x as usize] as u64
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TransformationTable) -> TransformationTable {
        TransformationTable {
            image: self.image.iter().map(|&y| next.image[y as usize]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        self.image.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        for &y in &self.image {
            seen[y as usize] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_idempotent(&self) -> bool {
        self.then(self) == *self
    }
}

/// Configuration space plus the lookup tables the brute-force routines use.
#[derive(Debug, Clone)]
pub struct CaSpace {
    space: ConfigSpace,
    /// `windows[x*n + g]` encodes `h ↦ x[h g]`, the view of `x` from cell `g`.
    windows: Vec<u32>,
    /// `shift[x*n + g]` encodes `x·g`.
    shift: Vec<u32>,
    stab: Vec<u64>,
    orbit_min: Vec<u32>,
}

const MAX_TABLE_ENTRIES: u64 = 1 << 26;

impl CaSpace {
    pub fn new(group: &FiniteGroup, q: usize, limits: &Limits) -> Result<Self> {
        let space = ConfigSpace::new(group, q, limits)?;
        let n = space.n();
        let size = space.size();
        if size * n as u64 > MAX_TABLE_ENTRIES {
            return Err(Error::limit("materialised action table", size * n as u64, MAX_TABLE_ENTRIES));
        }
        let mut windows = Vec::with_capacity((size as usize) * n);
        let mut shift = Vec::with_capacity((size as usize) * n);
        let mut stab = Vec::with_capacity(size as usize);
        let mut orbit_min = Vec::with_capacity(size as usize);
        let mut digits = vec![0usize; n];
        for x in 0..size {
            space.decode(x, &mut digits);
            let mut mask = 0u64;
            let mut min = x;
            for g in 0..n {
                let xg = space.act_digits(&digits, g);
                shift.push(xg as u32);
                windows.push(space.act_digits(&digits, group.inv(g)) as u32);
                if xg == x {
                    mask |= 1 << g;
                }
                min = min.min(xg);
            }
            stab.push(mask);
            orbit_min.push(min as u32);
        }
        Ok(CaSpace {
            space,
            windows,
            shift,
            stab,
            orbit_min,
        })
    }

    pub fn config_space(&self) -> &ConfigSpace {
        &self.space
    }

    pub fn group(&self) -> &FiniteGroup {
        self.space.group()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn q(&self) -> usize {
        self.space.q()
    }

    /// `q^n`.
    pub fn size(&self) -> usize {
        self.space.size() as usize
    }

    #[inline]
    pub fn act(&self, x: u64, g: usize) -> u64 {
        self.shift[x as usize * self.n() + g] as u64
    }

    #[inline]
    pub fn stabilizer(&self, x: u64) -> u64 {
        self.stab[x as usize]
    }

    /// Smallest encoding in the orbit of `x`.
    #[inline]
    pub fn orbit_rep(&self, x: u64) -> u64 {
        self.orbit_min[x as usize] as u64
    }

    pub fn orbit(&self, x: u64) -> Vec<u64> {
        self.space.orbit(x)
    }

    pub fn constant(&self, k: usize) -> u64 {
        self.space.constant(k)
    }

    /// `q^(q^n)` when it fits in a `u64`.
    pub fn ca_count(&self) -> Option<u64> {
        (self.q() as u64).checked_pow(u32::try_from(self.size()).ok()?)
    }

    fn check_enumerable(&self, limits: &Limits) -> Result<u64> {
        self.ca_count()
            .filter(|&c| c <= limits.max_ca)
            .ok_or_else(|| {
                Error::limit(
                    "cellular automaton count",
                    format!("{}^{}", self.q(), self.size()),
                    limits.max_ca,
                )
            })
    }
}

/// The cellular automaton with memory set `G` and local rule `rule`:
/// `(x)τ[g] = μ(h ↦ x[h g])`.
pub fn ca_from_rule(space: &CaSpace, rule: &LocalRule) -> Result<TransformationTable> {
    if rule.values.len() != space.size() || rule.q != space.q() {
        return Err(Error::InvalidArgument(format!(
            "rule must have {} values over {} symbols",
            space.size(),
            space.q()
        )));
    }
    Ok(table_from_values(space, &rule.values))
}

fn table_from_values(space: &CaSpace, values: &[u32]) -> TransformationTable {
    let n = space.n();
    let q = space.q() as u32;
    let image = space
        .windows
        .chunks_exact(n)
        .map(|w| w.iter().rev().fold(0u32, |acc, &c| acc * q + values[c as usize]))
        .collect();
    TransformationTable { image }
}

/// Every cellular automaton, one per local rule, in rule-counter order.
pub struct CaIter<'a> {
    space: &'a CaSpace,
    values: Vec<u32>,
    remaining: u64,
}

impl Iterator for CaIter<'_> {
    type Item = TransformationTable;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let table = table_from_values(self.space, &self.values);
        let q = self.space.q() as u32;
        for v in self.values.iter_mut() {
            *v += 1;
            if *v < q {
                break;
            }
            *v = 0;
        }
        Some(table)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

pub fn enumerate_ca<'a>(space: &'a CaSpace, limits: &Limits) -> Result<CaIter<'a>> {
    let total = space.check_enumerable(limits)?;
    Ok(CaIter {
        space,
        values: vec![0; space.size()],
        remaining: total,
    })
}

/// Runs `f` on every cellular automaton (by rule index) and merges the
/// per-worker accumulators.
pub fn fold_all_ca<A, F, M>(
    space: &CaSpace,
    limits: &Limits,
    exec: Execution,
    init: A,
    f: F,
    merge: M,
) -> Result<A>
where
    A: Send + Clone + Sync,
    F: Fn(&mut A, u64, &TransformationTable) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let total = space.check_enumerable(limits)?;
    Ok(fold_range(
        exec,
        0..total,
        init,
        |acc, index| {
            let rule = LocalRule::from_index(space.q(), space.size(), index);
            let table = table_from_values(space, &rule.values);
            f(acc, index, &table)
        },
        merge,
    ))
}

/// Number of invertible cellular automata, by scanning every local rule.
pub fn count_invertible(space: &CaSpace, limits: &Limits, exec: Execution) -> Result<u64> {
    fold_all_ca(
        space,
        limits,
        exec,
        0u64,
        |acc, _, t| {
            if t.is_bijective() {
                *acc += 1
            }
        },
        |a, b| a + b,
    )
}

/// The invertible cellular automata, in rule order.
pub fn invertible_elements(space: &CaSpace, limits: &Limits) -> Result<Vec<TransformationTable>> {
    Ok(enumerate_ca(space, limits)?.filter(|t| t.is_bijective()).collect())
}

/// Number of invertible cellular automata by exhaustive search over local
/// rules, abandoning a partial rule as soon as two configurations whose
/// images are already determined collide. Needs no cap on `q^(q^n)`.
pub fn count_invertible_search(space: &CaSpace) -> u64 {
    let n = space.n();
    let size = space.size();
    // configurations whose whole window is assigned once position c is
    let mut ready: Vec<Vec<u32>> = vec![Vec::new(); size];
    for (x, w) in space.windows.chunks_exact(n).enumerate() {
        let last = *w.iter().max().unwrap() as usize;
        ready[last].push(x as u32);
    }

    struct Search<'a> {
        space: &'a CaSpace,
        ready: Vec<Vec<u32>>,
        values: Vec<u32>,
        used: Vec<bool>,
        found: u64,
    }

    impl Search<'_> {
        fn image(&self, x: u32) -> u32 {
            let n = self.space.n();
            let q = self.space.q() as u32;
            self.space.windows[x as usize * n..(x as usize + 1) * n]
                .iter()
                .rev()
                .fold(0, |acc, &c| acc * q + self.values[c as usize])
        }

        fn descend(&mut self, pos: usize) {
            if pos == self.values.len() {
                self.found += 1;
                return;
            }
            for v in 0..self.space.q() as u32 {
                self.values[pos] = v;
                let mut placed = Vec::new();
                let mut ok = true;
                for i in 0..self.ready[pos].len() {
                    let y = self.image(self.ready[pos][i]) as usize;
                    if self.used[y] {
                        ok = false;
                        break;
                    }
                    self.used[y] = true;
                    placed.push(y);
                }
                if ok {
                    self.descend(pos + 1);
                }
                for y in placed {
                    self.used[y] = false;
                }
            }
        }
    }

    let mut search = Search {
        space,
        ready,
        values: vec![0; size],
        used: vec![false; size],
        found: 0,
    };
    search.descend(0);
    search.found
}

/// `τ(x·g) = τ(x)·g` for every `x` and `g`.
pub fn is_equivariant(tau: &TransformationTable, space: &CaSpace) -> bool {
    tau.len() == space.size()
        && (0..space.size() as u64).all(|x| {
            (0..space.n()).all(|g| tau.apply(space.act(x, g)) == space.act(tau.apply(x), g))
        })
}

/// Coordinates the full-memory local rule of `τ` actually depends on, as a
/// bitmask over elements of `G`.
pub fn minimal_memory_set(tau: &TransformationTable, space: &CaSpace) -> Result<u64> {
    if !is_equivariant(tau, space) {
        return Err(Error::NotEquivariant);
    }
    let q = space.q() as u64;
    let rule = |x: u64| tau.apply(x) % q;
    let cs = space.config_space();
    let mut mask = 0u64;
    let mut digits = vec![0usize; space.n()];
    for g in 0..space.n() {
        let step = q.pow(g as u32);
        let depends = (0..space.size() as u64).any(|x| {
            cs.decode(x, &mut digits);
            digits[g] == 0 && (1..q).any(|a| rule(x + a * step) != rule(x))
        });
        if depends {
            mask |= 1 << g;
        }
    }
    Ok(mask)
}

/// A finite submonoid of `Tran(A^G)` held as an explicit element set.
#[derive(Debug, Clone)]
pub struct TransformationMonoid {
    elements: Vec<TransformationTable>,
    index: HashMap<TransformationTable, usize>,
}

impl TransformationMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, t: &TransformationTable) -> bool {
        self.index.contains_key(t)
    }

    pub fn elements(&self) -> &[TransformationTable] {
        &self.elements
    }

    fn insert(&mut self, t: TransformationTable) -> bool {
        if self.index.contains_key(&t) {
            return false;
        }
        self.index.insert(t.clone(), self.elements.len());
        self.elements.push(t);
        true
    }
}

/// Submonoid of `Tran` on `size` points generated by `seed`.
pub fn closure(size: usize, seed: &[TransformationTable], cap: usize) -> Result<TransformationMonoid> {
    closure_with(size, seed, cap, Execution::Sequential)
}

/// Breadth-first closure; the parallel strategy expands each frontier
/// concurrently and inserts the products in frontier order, so the result
/// (and even its element order) does not depend on the schedule.
pub fn closure_with(
    size: usize,
    seed: &[TransformationTable],
    cap: usize,
    exec: Execution,
) -> Result<TransformationMonoid> {
    if seed.iter().any(|s| s.len() != size) {
        return Err(Error::InvalidArgument(format!(
            "every generator must act on {size} points"
        )));
    }
    let mut monoid = TransformationMonoid {
        elements: Vec::new(),
        index: HashMap::new(),
    };
    monoid.insert(TransformationTable::identity(size));
    for s in seed {
        monoid.insert(s.clone());
    }
    let mut frontier: Vec<TransformationTable> = monoid.elements.clone();
    while !frontier.is_empty() {
        let products = map_slice(exec, &frontier, |e| {
            seed.iter().map(|s| e.then(s)).collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for p in products.into_iter().flatten() {
            if !monoid.contains(&p) {
                if monoid.len() >= cap {
                    return Err(Error::CapExceeded {
                        cap,
                        partial: monoid.len(),
                    });
                }
                monoid.insert(p.clone());
                next.push(p);
            }
        }
        frontier = next;
    }
    if monoid.len() > cap {
        return Err(Error::CapExceeded {
            cap,
            partial: monoid.len(),
        });
    }
    Ok(monoid)
}

fn same_orbit(space: &CaSpace, x: u64, y: u64) -> bool {
    space.orbit_rep(x) == space.orbit_rep(y)
}

fn check_config(space: &CaSpace, x: u64) -> Result<()> {
    if x as usize >= space.size() {
        return Err(Error::InvalidArgument(format!("configuration {x} out of range")));
    }
    Ok(())
}

/// The idempotent sending `x·g ↦ y·g` and fixing everything outside `xG`.
pub fn idempotent_map(space: &CaSpace, x: u64, y: u64) -> Result<TransformationTable> {
    check_config(space, x)?;
    check_config(space, y)?;
    if same_orbit(space, x, y) {
        return Err(Error::SameOrbit);
    }
    if space.stabilizer(x) & !space.stabilizer(y) != 0 {
        return Err(Error::StabilizerNotContained);
    }
    let mut t = TransformationTable::identity(space.size());
    for g in 0..space.n() {
        t.image[space.act(x, g) as usize] = space.act(y, g) as u32;
    }
    Ok(t)
}

/// The involution exchanging `x·g` and `y·g` for every `g`.
pub fn swap_map(space: &CaSpace, x: u64, y: u64) -> Result<TransformationTable> {
    check_config(space, x)?;
    check_config(space, y)?;
    if space.stabilizer(x) != space.stabilizer(y) {
        return Err(Error::StabilizerMismatch);
    }
    if same_orbit(space, x, y) {
        return Err(Error::SameOrbit);
    }
    let mut t = TransformationTable::identity(space.size());
    for g in 0..space.n() {
        let (xg, yg) = (space.act(x, g), space.act(y, g));
        t.image[xg as usize] = yg as u32;
        t.image[yg as usize] = xg as u32;
    }
    Ok(t)
}

/// The map `(0 -> 1)` between the two smallest constant configurations.
pub fn zero_to_one(space: &CaSpace) -> TransformationTable {
    let mut t = TransformationTable::identity(space.size());
    t.image[space.constant(0) as usize] = space.constant(1) as u32;
    t
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryReport {
    /// Automata whose minimal memory set is a proper subset of `G`.
    pub small_memory: usize,
    pub closure_size: usize,
    pub ca_count: u64,
    pub contains_zero_to_one: bool,
}

impl MemoryReport {
    pub fn confirmed(&self) -> bool {
        !self.contains_zero_to_one && (self.closure_size as u64) < self.ca_count
    }
}

/// Closes the set of automata with minimal memory set `≠ G` and checks that
/// it misses `(0 -> 1)` and is a proper submonoid.
pub fn verify_memory_theorem(space: &CaSpace, limits: &Limits) -> Result<MemoryReport> {
    let full = space.group().full_mask();
    let small: Vec<TransformationTable> = enumerate_ca(space, limits)?
        .filter(|t| minimal_memory_set(t, space).map(|m| m != full).unwrap_or(false))
        .collect();
    let monoid = closure(space.size(), &small, limits.closure_cap)?;
    Ok(MemoryReport {
        small_memory: small.len(),
        closure_size: monoid.len(),
        ca_count: space.ca_count().expect("enumerable"),
        contains_zero_to_one: monoid.contains(&zero_to_one(space)),
    })
}

/// Structural audit of every cellular automaton.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaAudit {
    pub total: u64,
    pub invertible: u64,
    pub not_equivariant: u64,
    pub orbit_not_preserved: u64,
    pub constant_not_constant: u64,
    pub stabilizer_shrinks: u64,
    pub orbit_not_bijective: u64,
    /// Automata where "injective" and "no Garden of Eden" disagree.
    pub goe_mismatch: u64,
}

impl CaAudit {
    pub fn clean(&self) -> bool {
        self.not_equivariant == 0
            && self.orbit_not_preserved == 0
            && self.constant_not_constant == 0
            && self.stabilizer_shrinks == 0
            && self.orbit_not_bijective == 0
            && self.goe_mismatch == 0
    }

    fn merge(mut self, o: CaAudit) -> CaAudit {
        self.total += o.total;
        self.invertible += o.invertible;
        self.not_equivariant += o.not_equivariant;
        self.orbit_not_preserved += o.orbit_not_preserved;
        self.constant_not_constant += o.constant_not_constant;
        self.stabilizer_shrinks += o.stabilizer_shrinks;
        self.orbit_not_bijective += o.orbit_not_bijective;
        self.goe_mismatch += o.goe_mismatch;
        self
    }
}

pub fn audit_all_ca(space: &CaSpace, limits: &Limits, exec: Execution) -> Result<CaAudit> {
    let size = space.size() as u64;
    let reps: Vec<u64> = (0..size).filter(|&x| space.orbit_rep(x) == x).collect();
    let orbits: Vec<Vec<u64>> = reps.iter().map(|&r| space.orbit(r)).collect();
    let constants: Vec<u64> = (0..space.q()).map(|k| space.constant(k)).collect();
    let full = space.group().full_mask();

    fold_all_ca(
        space,
        limits,
        exec,
        CaAudit::default(),
        |acc, _, t| {
            acc.total += 1;
            let bijective = t.is_bijective();
            if bijective {
                acc.invertible += 1;
            }
            if bijective != t.is_surjective() {
                acc.goe_mismatch += 1;
            }
            if !is_equivariant(t, space) {
                acc.not_equivariant += 1;
            }
            if constants.iter().any(|&k| space.stabilizer(t.apply(k)) != full) {
                acc.constant_not_constant += 1;
            }
            if (0..size).any(|x| space.stabilizer(x) & !space.stabilizer(t.apply(x)) != 0) {
                acc.stabilizer_shrinks += 1;
            }
            let mut preserved = true;
            let mut bijective_on_orbit = true;
            for orbit in &orbits {
                let mut img: Vec<u64> = orbit.iter().map(|&x| t.apply(x)).collect();
                img.sort_unstable();
                img.dedup();
                if img != space.orbit(t.apply(orbit[0])) {
                    preserved = false;
                }
                if space.orbit_rep(t.apply(orbit[0])) == orbit[0] && img.len() != orbit.len() {
                    bijective_on_orbit = false;
                }
            }
            if !preserved {
                acc.orbit_not_preserved += 1;
            }
            if !bijective_on_orbit {
                acc.orbit_not_bijective += 1;
            }
        },
        CaAudit::merge,
    )
}
