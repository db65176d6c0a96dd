use ca_algebra::camonoid::{audit_all_ca, count_invertible, CaSpace};
use ca_algebra::configs::enumerate_orbits_with;
use ca_algebra::counting::ac_enumeration;
use ca_algebra::groups::{build_group, enumerate_subgroups_with};
use ca_algebra::{Execution, Limits};

const BOTH: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

#[test]
fn lattices_agree() {
    let g = build_group("Z2xD4").unwrap();
    let [a, b] = BOTH.map(|e| enumerate_subgroups_with(&g, &Limits::default(), e).unwrap());
    assert_eq!(a.subgroups(), b.subgroups());
    assert_eq!(a.classes(), b.classes());
}

#[test]
fn orbit_tables_agree() {
    let g = build_group("A4").unwrap();
    let limits = Limits::default();
    let lat = enumerate_subgroups_with(&g, &limits, Execution::Sequential).unwrap();
    let [a, b] = BOTH.map(|e| enumerate_orbits_with(&lat, 3, &limits, e).unwrap());
    assert_eq!(a.orbit_id, b.orbit_id);
    assert_eq!(a.reps, b.reps);
}

#[test]
fn brute_force_counts_agree() {
    let limits = Limits::default();
    let g = build_group("D6").unwrap();
    let [a, b] = BOTH.map(|e| ac_enumeration(&g, 2, &limits, e).unwrap().value);
    assert_eq!(a, b);

    let space = CaSpace::new(&build_group("Z4").unwrap(), 2, &limits).unwrap();
    let [a, b] = BOTH.map(|e| count_invertible(&space, &limits, e).unwrap());
    assert_eq!((a, b), (1536, 1536));
    let [a, b] = BOTH.map(|e| audit_all_ca(&space, &limits, e).unwrap());
    assert_eq!(a, b);
}
