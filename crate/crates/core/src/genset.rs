//! Class graph of subgroup classes and generator sets for `CA(G;A)` relative
//! to its group of units.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::camonoid::{
    closure, enumerate_ca, fold_all_ca, idempotent_map, invertible_elements, CaSpace,
    TransformationTable,
};
use crate::configs::alpha_mobius;
use crate::exec::Execution;
use crate::groups::{group_rank, SubgroupLattice};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGraph {
    pub vertices: usize,
    /// Pairs `(i, j)` with `[H_i] ≤ [H_j]`, loops included, sorted.
    pub edges: Vec<(usize, usize)>,
    pub index2_count: usize,
}

impl ClassGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// `[H_i] ≤ [H_j]` when the representative of class `i` lies in some member
/// of class `j`.
pub fn class_leq(lat: &SubgroupLattice, i: usize, j: usize) -> bool {
    let rep = lat.subgroup(lat.classes()[i].rep);
    lat.classes()[j]
        .members
        .iter()
        .any(|&k| rep.is_subset_of(lat.subgroup(k)))
}

pub fn class_graph(lat: &SubgroupLattice) -> ClassGraph {
    let r = lat.classes().len();
    let edges = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .filter(|&(i, j)| class_leq(lat, i, j))
        .collect();
    ClassGraph {
        vertices: r,
        edges,
        index2_count: lat.index2_count(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    CrossClass,
    WithinClass,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::CrossClass => "cross-class",
            GeneratorKind::WithinClass => "within-class",
        }
    }
}

/// An idempotent `x·g ↦ y·g` named by its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorDescriptor {
    pub source: u64,
    pub target: u64,
    pub source_class: usize,
    pub target_class: usize,
    pub kind: GeneratorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelRankReport {
    pub graph: ClassGraph,
    pub lower_bound: usize,
    pub is_exact: bool,
    pub generators: Vec<GeneratorDescriptor>,
}

/// Relative rank of the units in `CA(G;A)` together with an explicit set of
/// idempotents realising it.
pub fn relrank(lat: &SubgroupLattice, q: usize, limits: &Limits) -> Result<RelRankReport> {
    let graph = class_graph(lat);
    let lower_bound = if q == 2 {
        graph.edge_count() - graph.index2_count
    } else {
        graph.edge_count()
    };
    let space = CaSpace::new(lat.group(), q, limits)?;
    let alphas = alpha_mobius(lat, q)?;
    let r = graph.vertices;
    let reps: Vec<u64> = lat.classes().iter().map(|c| lat.subgroup(c.rep).mask).collect();
    let wants_second: Vec<bool> = alphas.entries.iter().map(|e| !e.alpha.is_one()).collect();

    let mut first: Vec<Option<u64>> = vec![None; r];
    let mut second: Vec<Option<u64>> = vec![None; r];
    let done = |first: &[Option<u64>], second: &[Option<u64>]| {
        (0..r).all(|i| first[i].is_some() && (!wants_second[i] || second[i].is_some()))
    };
    for x in 0..space.size() as u64 {
        if done(&first, &second) {
            break;
        }
        let stab = space.stabilizer(x);
        let Some(i) = reps.iter().position(|&m| m == stab) else {
            continue;
        };
        match first[i] {
            None => first[i] = Some(x),
            Some(x0) if second[i].is_none() && space.orbit_rep(x0) != space.orbit_rep(x) => {
                second[i] = Some(x)
            }
            _ => {}
        }
    }
    let first: Vec<u64> = first
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Internal("class without a configuration".into()))?;

    let mut generators = Vec::new();
    for &(i, j) in &graph.edges {
        if i == j {
            continue;
        }
        let target = space
            .orbit(first[j])
            .into_iter()
            .find(|&y| reps[i] & !space.stabilizer(y) == 0)
            .ok_or_else(|| Error::Internal("no comparable target in orbit".into()))?;
        generators.push(GeneratorDescriptor {
            source: first[i],
            target,
            source_class: i,
            target_class: j,
            kind: GeneratorKind::CrossClass,
        });
    }
    for i in 0..r {
        if let Some(y) = second[i] {
            generators.push(GeneratorDescriptor {
                source: first[i],
                target: y,
                source_class: i,
                target_class: i,
                kind: GeneratorKind::WithinClass,
            });
        }
    }
    Ok(RelRankReport {
        graph,
        lower_bound,
        is_exact: lat.is_dedekind(),
        generators,
    })
}

/// Materialises the idempotents named by `report`.
pub fn generator_tables(space: &CaSpace, report: &RelRankReport) -> Result<Vec<TransformationTable>> {
    report
        .generators
        .iter()
        .map(|d| idempotent_map(space, d.source, d.target))
        .collect()
}

/// Greedily drops elements of `elements` that are not needed to generate
/// the same submonoid.
pub fn reduce_generators(
    size: usize,
    elements: &[TransformationTable],
    cap: usize,
) -> Result<Vec<TransformationTable>> {
    let target = closure(size, elements, cap)?.len();
    let mut kept: Vec<TransformationTable> = Vec::new();
    for e in elements {
        let current = closure(size, &kept, cap)?;
        if current.len() == target {
            break;
        }
        if !current.contains(e) {
            kept.push(e.clone());
        }
    }
    Ok(kept)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReport {
    pub units: usize,
    pub unit_generators: usize,
    pub v_size: usize,
    pub closure_size: usize,
    pub ca_count: u64,
    /// For each `v ∈ V`, whether dropping it leaves a proper submonoid.
    pub irredundant: Vec<bool>,
}

impl GenerationReport {
    pub fn generates(&self) -> bool {
        self.closure_size as u64 == self.ca_count
    }

    pub fn confirmed(&self) -> bool {
        self.generates() && self.irredundant.iter().all(|&b| b)
    }
}

/// Checks by closure that the units together with the idempotents of
/// [`relrank`] generate `CA(G;A)`, and that no single idempotent is spare.
pub fn verify_generation(lat: &SubgroupLattice, q: usize, limits: &Limits) -> Result<GenerationReport> {
    if !lat.is_dedekind() {
        return Err(Error::NotDedekind);
    }
    let space = CaSpace::new(lat.group(), q, limits)?;
    let units = invertible_elements(&space, limits)?;
    let cap = limits.closure_cap;
    let size = space.size();
    let unit_gens = reduce_generators(size, &units, cap)?;
    let report = relrank(lat, q, limits)?;
    let v = generator_tables(&space, &report)?;

    let mut seed = unit_gens.clone();
    seed.extend(v.iter().cloned());
    let full = closure(size, &seed, cap)?;
    let ca_count = space.ca_count().expect("enumerable");
    let irredundant = (0..v.len())
        .map(|skip| {
            let mut seed = unit_gens.clone();
            seed.extend(v.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, t)| t.clone()));
            closure(size, &seed, cap).map(|m| (m.len() as u64) < ca_count)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GenerationReport {
        units: units.len(),
        unit_generators: unit_gens.len(),
        v_size: v.len(),
        closure_size: full.len(),
        ca_count,
        irredundant,
    })
}

/// `m(r - 1) + r(r + 5)/2` with `m` the rank of `G` and `r` its number of
/// subgroups.
pub fn rank_upper_bound(lat: &SubgroupLattice, limits: &Limits) -> Result<BigUint> {
    if !lat.is_dedekind() {
        return Err(Error::NotDedekind);
    }
    let m = group_rank(lat.group(), limits)?;
    let r = lat.len();
    Ok(BigUint::from(m * (r - 1) + r * (r + 5) / 2))
}

/// Scans every non-invertible automaton and checks that `x` can be sent to a
/// configuration `y` outside its orbit exactly when `G_x ≤ G_y`. Returns the
/// number of pairs where the two sides disagree.
pub fn reachability_mismatches(space: &CaSpace, limits: &Limits, exec: Execution) -> Result<usize> {
    let size = space.size();
    let reached = fold_all_ca(
        space,
        limits,
        exec,
        vec![false; size * size],
        |acc, _, t| {
            if t.is_bijective() {
                return;
            }
            for x in 0..size {
                acc[x * size + t.image[x] as usize] = true;
            }
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(p, q)| *p |= q);
            a
        },
    )?;
    let mut mismatches = 0;
    for x in 0..size as u64 {
        for y in 0..size as u64 {
            if space.orbit_rep(x) == space.orbit_rep(y) {
                continue;
            }
            let contained = space.stabilizer(x) & !space.stabilizer(y) == 0;
            if reached[x as usize * size + y as usize] != contained {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches)
}

/// Smallest generating set of the whole monoid found by a greedy pass over
/// all automata, largest closure gain first.
pub fn greedy_generating_set(space: &CaSpace, limits: &Limits) -> Result<Vec<TransformationTable>> {
    let all: Vec<TransformationTable> = enumerate_ca(space, limits)?.collect();
    let total = all.len();
    let size = space.size();
    let mut chosen: Vec<TransformationTable> = Vec::new();
    loop {
        let current = closure(size, &chosen, limits.closure_cap)?;
        if current.len() == total {
            return Ok(chosen);
        }
        let mut best: Option<(usize, &TransformationTable)> = None;
        for t in all.iter().filter(|t| !current.contains(t)) {
            let mut seed = chosen.clone();
            seed.push(t.clone());
            let gain = closure(size, &seed, limits.closure_cap)?.len();
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, t));
            }
        }
        let (_, t) = best.ok_or_else(|| Error::Internal("closure stalled".into()))?;
        chosen.push(t.clone());
    }
}

/// `|V|` predicted from the class graph and the `α` values.
pub fn predicted_v_size(lat: &SubgroupLattice, q: usize) -> Result<usize> {
    let graph = class_graph(lat);
    let alphas = alpha_mobius(lat, q)?;
    let ones = alphas
        .entries
        .iter()
        .filter(|e| e.alpha.to_u64() == Some(1))
        .count();
    Ok(graph.edge_count() - ones)
}
