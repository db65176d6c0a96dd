//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::time::{Duration, Instant};

use ca_algebra::camonoid::{
    audit_all_ca, count_invertible, count_invertible_search, verify_memory_theorem, CaSpace,
};
use ca_algebra::configs::{alpha_direct, alpha_mobius, enumerate_orbits};
use ca_algebra::counting::{
    ac_bounds, ac_enumeration, applicable_formulas, asymptotic_residual, residual_tolerance,
};
use ca_algebra::genset::{reachability_mismatches, relrank, verify_generation};
use ca_algebra::groups::{build_group, enumerate_subgroups, SubgroupLattice};
use ca_algebra::ica::{ica_structure, product_identity_check, transitive_on_all_orbits};
use ca_algebra::{Execution, Limits};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn lat(spec: &str) -> SubgroupLattice {
    enumerate_subgroups(&build_group(spec).expect("descriptor")).expect("lattice")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Check {
    let t = start.elapsed();
    ensure(t < budget, || format!("took {t:?}, budget {budget:?}"))
}

const SMALL: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "Z2xZ2", "Z2xZ4",
    "Z2xZ2xZ2", "S3", "D4", "Q8", "Z3xZ3", "D6", "A4", "Z2xZ6",
];

const ORDER_16: &[&str] = &[
    "Z16", "Z2xZ8", "Z4xZ4", "Z2xZ2xZ4", "Z2xZ2xZ2xZ2", "D8", "Z2xD4", "Z2xQ8",
];

/// Every `(group, q)` pair in the test matrix.
fn matrix() -> Vec<(&'static str, usize)> {
    let mut m: Vec<_> = SMALL.iter().flat_map(|&g| [(g, 2), (g, 3)]).collect();
    m.extend(ORDER_16.iter().map(|&g| (g, 2)));
    m
}

fn klein_golden() -> Check {
    let start = Instant::now();
    let l = lat("Z2xZ2");
    let table = enumerate_orbits(&l, 2).map_err(|e| e.to_string())?;
    let mut sizes = table.orbit_size.clone();
    sizes.sort_unstable();
    ensure(sizes == [1, 1, 2, 2, 2, 4, 4], || format!("orbit sizes {sizes:?}"))?;
    let av = alpha_mobius(&l, 2).map_err(|e| e.to_string())?;
    ensure(av.alphas_u64() == Some(vec![2, 1, 1, 1, 2]), || format!("alpha {:?}", av.alphas()))?;
    let b_e = &av.entries.last().unwrap().b_size;
    ensure(*b_e == BigUint::from(8u32), || format!("|B_e| = {b_e}"))?;
    let ica = ica_structure(&l, 2, &Limits::default()).map_err(|e| e.to_string())?;
    let space = CaSpace::new(l.group(), 2, &Limits::default()).map_err(|e| e.to_string())?;
    let brute = count_invertible(&space, &Limits::default(), Execution::default()).map_err(|e| e.to_string())?;
    ensure(ica.total_order == BigUint::from(512u32) && brute == 512, || {
        format!("ICA order {} vs brute force {brute}", ica.total_order)
    })?;
    within(start, Duration::from_secs(10))
}

fn formula_vs_enumeration() -> Check {
    let start = Instant::now();
    let limits = Limits::default();
    for (spec, q) in matrix() {
        let l = lat(spec);
        let table = enumerate_orbits(&l, q).map_err(|e| e.to_string())?;
        let direct = alpha_direct(&l, &table).alphas();
        let formula = alpha_mobius(&l, q).map_err(|e| e.to_string())?.alphas();
        ensure(direct == formula, || format!("{spec} q={q}: alpha {formula:?} vs scan {direct:?}"))?;
        let scan = ac_enumeration(l.group(), q, &limits, Execution::default()).map_err(|e| e.to_string())?;
        for c in applicable_formulas(&l, q).map_err(|e| e.to_string())? {
            ensure(c.value == scan.value, || {
                format!("{spec} q={q}: {} gives {} but scan gives {}", c.method.name(), c.value, scan.value)
            })?;
        }
    }
    within(start, Duration::from_secs(120))
}

fn ica_oracle() -> Check {
    let limits = Limits::default();
    for (spec, q) in [("Z2", 2), ("Z2", 3), ("Z2", 4), ("Z3", 2), ("Z4", 2), ("Z2xZ2", 2)] {
        let l = lat(spec);
        let ica = ica_structure(&l, q, &limits).map_err(|e| e.to_string())?;
        let space = CaSpace::new(l.group(), q, &limits).map_err(|e| e.to_string())?;
        // 4^16 rules exceed the enumeration cap; the pruned search is exact
        let brute = match count_invertible(&space, &limits, Execution::default()) {
            Ok(c) => c,
            Err(_) => count_invertible_search(&space),
        };
        ensure(ica.total_order == BigUint::from(brute), || {
            format!("{spec} q={q}: structure {} vs brute force {brute}", ica.total_order)
        })?;
    }
    Ok(())
}

fn bounds() -> Check {
    for (spec, q) in matrix() {
        let l = lat(spec);
        let n = l.group().order();
        let b = ac_bounds(&l, q).map_err(|e| e.to_string())?;
        let ac = BigInt::from(b.ac.value.clone());
        ensure(b.lower_gjs <= ac && ac <= b.upper, || format!("{spec} q={q}: outer bounds fail"))?;
        if n >= 3 {
            ensure(b.lower_subgroup <= ac, || format!("{spec} q={q}: {} > {ac}", b.lower_subgroup))?;
        }
        let prime = (2..n).all(|d| !n.is_multiple_of(d));
        ensure(b.upper_tight() == prime, || format!("{spec} q={q}: upper tightness {}", b.upper_tight()))?;
    }
    for spec in ["Z2", "Z2xZ2"] {
        let b = ac_bounds(&lat(spec), 2).map_err(|e| e.to_string())?;
        ensure(b.gjs_tight(), || format!("{spec}: lower bound {} not attained by {}", b.lower_gjs, b.ac.value))?;
    }
    Ok(())
}

fn memory_theorem() -> Check {
    let start = Instant::now();
    let limits = Limits::default();
    for (spec, q) in [("Z2", 2), ("Z3", 2), ("Z2", 3)] {
        let space = CaSpace::new(&build_group(spec).unwrap(), q, &limits).map_err(|e| e.to_string())?;
        let r = verify_memory_theorem(&space, &limits).map_err(|e| e.to_string())?;
        ensure(r.confirmed(), || format!("{spec} q={q}: {r:?}"))?;
    }
    within(start, Duration::from_secs(60))
}

fn relative_rank() -> Check {
    let start = Instant::now();
    let limits = Limits::default();
    for (spec, v) in [("Z2", 2), ("Z3", 3), ("Z4", 5), ("Z2xZ2", 9)] {
        let l = lat(spec);
        let rr = relrank(&l, 2, &limits).map_err(|e| e.to_string())?;
        ensure(rr.lower_bound == v && rr.is_exact, || format!("{spec}: bound {}", rr.lower_bound))?;
        let g = verify_generation(&l, 2, &limits).map_err(|e| e.to_string())?;
        ensure(g.v_size == v && g.confirmed(), || format!("{spec}: {g:?}"))?;
    }
    within(start, Duration::from_secs(300))
}

fn property_suites() -> Check {
    let limits = Limits::default();
    for (spec, q) in matrix() {
        let l = lat(spec);
        for i in 0..l.len() {
            let sum: i64 = (0..l.len()).filter(|&j| l.leq(i, j)).map(|j| l.mobius(i, j)).sum();
            ensure(sum == i64::from(i == l.top()), || format!("{spec}: Möbius row {i} sums to {sum}"))?;
        }
        ensure(product_identity_check(&l, q, &limits).map_err(|e| e.to_string())?, || {
            format!("{spec} q={q}: product identity fails")
        })?;
    }
    for (spec, q) in [("Z2", 2), ("Z2", 3), ("Z3", 2), ("Z4", 2), ("Z2xZ2", 2)] {
        let space = CaSpace::new(&build_group(spec).unwrap(), q, &limits).map_err(|e| e.to_string())?;
        let audit = audit_all_ca(&space, &limits, Execution::default()).map_err(|e| e.to_string())?;
        ensure(audit.clean(), || format!("{spec} q={q}: {audit:?}"))?;
        let bad = reachability_mismatches(&space, &limits, Execution::default()).map_err(|e| e.to_string())?;
        ensure(bad == 0, || format!("{spec} q={q}: {bad} reachability mismatches"))?;
    }
    for spec in [
        "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Q8", "S3",
        "D4",
    ] {
        let l = lat(spec);
        let t = transitive_on_all_orbits(&l, 2, &limits).map_err(|e| e.to_string())?;
        ensure(t == l.is_dedekind(), || format!("{spec}: transitive {t}, Dedekind {}", l.is_dedekind()))?;
    }
    ensure(!lat("S3").is_dedekind() && !lat("D4").is_dedekind() && lat("Q8").is_dedekind(), || {
        "Dedekind classification".into()
    })
}

fn residual() -> Check {
    let start = Instant::now();
    let qs: Vec<usize> = (2..=64).collect();
    for spec in ["Z4", "Z2xZ2"] {
        let l = lat(spec);
        let h = l.bottom();
        let s_h = BigRational::from_integer(BigInt::from(l.min_cover(h).1.len()));
        for (q, r) in qs.iter().zip(asymptotic_residual(&l, h, &qs)) {
            if *q >= 8 {
                let gap = (r.clone() - &s_h).abs();
                ensure(gap <= residual_tolerance(&l, *q), || format!("{spec} q={q}: residual {r}"))?;
            }
        }
    }
    within(start, Duration::from_secs(5))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 Klein-four golden case", klein_golden),
        ("2 formulas agree with enumeration", formula_vs_enumeration),
        ("3 ICA order equals invertible count", ica_oracle),
        ("4 aperiodic bounds", bounds),
        ("5 minimal memory closure is proper", memory_theorem),
        ("6 relative-rank generation", relative_rank),
        ("7 property suites", property_suites),
        ("8 asymptotic residual", residual),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("PASS  {name} ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
