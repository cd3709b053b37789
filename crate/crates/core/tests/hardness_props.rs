//! Exhaustive property checks for the hardness gadgets: the chain gadget has
//! minimum violation count one, attained exactly at the cut positions, and
//! the weighted chain has minimum (violations, weight) = (2, target), again
//! attained exactly at the cut positions.

use minsat_core::formula::{Assignment, Formula};
use minsat_core::hardness::{
    gadget_negpath, gadget_weighted_path, gen_paired_cut, implement_rstar_arrow,
    implement_rstar_gaifman, ChainGadget, KPartiteGraph,
};
use minsat_core::relation::known::{eq2, r4, rcmc_directed};

fn optimal_restrictions(g: &ChainGadget) -> (u64, u64, Vec<Vec<(usize, bool)>>) {
    let f = &g.formula;
    assert!(f.num_vars <= 20, "gadget too large for exhaustive check");
    let mut best = (u64::MAX, u64::MAX);
    for idx in 0..(1usize << f.num_vars) {
        let a = Assignment::from_index(f.num_vars, idx);
        let rep = f.assignment_cost(&a);
        if rep.crisp_ok {
            best = best.min((rep.violations, rep.weight));
        }
    }
    let named: Vec<usize> = [g.s, g.t]
        .into_iter()
        .chain(g.xs.iter().copied())
        .chain(g.xps.iter().copied())
        .collect();
    let mut restrictions: Vec<Vec<(usize, bool)>> = Vec::new();
    for idx in 0..(1usize << f.num_vars) {
        let a = Assignment::from_index(f.num_vars, idx);
        let rep = f.assignment_cost(&a);
        if rep.crisp_ok && (rep.violations, rep.weight) == best {
            let r: Vec<(usize, bool)> = named.iter().map(|&v| (v, a.values[v])).collect();
            if !restrictions.contains(&r) {
                restrictions.push(r);
            }
        }
    }
    (best.0, best.1, restrictions)
}

fn normalize(mut v: Vec<(usize, bool)>) -> Vec<(usize, bool)> {
    v.sort_unstable();
    v
}

fn check_negpath(rel: &minsat_core::relation::BooleanRelation, n: usize) {
    let g = gadget_negpath(rel, n).unwrap();
    let (viol, _, restrictions) = optimal_restrictions(&g);
    assert_eq!(viol, 1, "minimum violations of the chain gadget");
    let expected: Vec<Vec<(usize, bool)>> =
        (0..=n).map(|i| normalize(g.alpha(i))).collect();
    let got: Vec<Vec<(usize, bool)>> = restrictions.into_iter().map(normalize).collect();
    assert_eq!(got.len(), expected.len(), "exactly the cut positions (n={n})");
    for e in &expected {
        assert!(got.contains(e), "missing cut position");
    }
}

fn check_wtpath(n: usize, w: u64, use_impl: bool) {
    let g = gadget_weighted_path(n, w, use_impl).unwrap();
    let (viol, weight, restrictions) = optimal_restrictions(&g);
    assert_eq!((viol, weight), (2, w), "minimum cost of the weighted chain");
    let expected: Vec<Vec<(usize, bool)>> =
        (0..=n).map(|i| normalize(g.alpha(i))).collect();
    let got: Vec<Vec<(usize, bool)>> = restrictions.into_iter().map(normalize).collect();
    assert_eq!(got.len(), expected.len(), "exactly the cut positions (n={n}, w={w})");
    for e in &expected {
        assert!(got.contains(e), "missing cut position");
    }
}

#[test]
fn negpath_properties() {
    for n in 0..=4 {
        check_negpath(&r4(), n);
        check_negpath(&rcmc_directed(), n);
    }
}

#[test]
fn negpath_is_unsatisfiable() {
    for n in [0, 2] {
        let g = gadget_negpath(&r4(), n).unwrap();
        let f: &Formula = &g.formula;
        for idx in 0..(1usize << f.num_vars) {
            let a = Assignment::from_index(f.num_vars, idx);
            let rep = f.assignment_cost(&a);
            assert!(!(rep.crisp_ok && rep.violations == 0));
        }
    }
}

#[test]
fn weighted_path_properties() {
    for n in 0..=4u64 {
        for w in [n + 1, n + 3] {
            check_wtpath(n as usize, w, false);
        }
    }
    // implication variant: same minima, the equalities just split in two
    check_wtpath(2, 5, true);
    check_wtpath(3, 4, true);
}

#[test]
fn rstar_templates() {
    // R4's Gaifman 2K2 needs no negations: the template is R4 itself
    let t = implement_rstar_gaifman(&r4()).unwrap();
    assert_eq!(t.negate, [false; 4]);
    assert_eq!(t.effective, r4());
    // a relation with excluded pairs (1,1) and (0,1) wraps per coordinate
    let rel = minsat_core::relation::BooleanRelation::from_fn(4, |t| {
        !(t[0] && t[1]) && !(!t[2] && t[3])
    })
    .unwrap();
    let t2 = implement_rstar_gaifman(&rel).unwrap();
    assert!(t2.negate.iter().any(|&b| b));
    // sandwich respected by construction (verified internally); spot check
    assert!(t2.effective.contains(&[true, true, true, true]));
    assert!(!t2.effective.contains(&[true, false, false, false]));
    // no Gaifman 2K2: precondition error
    assert!(implement_rstar_gaifman(&eq2()).is_err());
    assert!(implement_rstar_arrow(&eq2()).is_err());
    // arrow template for the directed coupled relation
    let ta = implement_rstar_arrow(&rcmc_directed()).unwrap();
    assert!(ta.effective.contains(&[true, true, false, false]));
    assert!(ta.effective.contains(&[false, false, true, true]));
}

#[test]
fn paired_cut_examples() {
    // triangle on three singleton parts: clique exists, one pair cuts S-T? no
    let g = KPartiteGraph {
        sizes: vec![1, 1, 1],
        edges: vec![((0, 0), (1, 0)), ((1, 0), (2, 0)), ((0, 0), (2, 0))],
    };
    assert!(g.has_multicolored_clique());
    let inst = gen_paired_cut(&g).unwrap();
    assert_eq!(inst.ell, 3);
    let sol = minsat_core::hardness::solve_paired_cut_oracle(&inst)
        .unwrap()
        .expect("triangle graph is a yes-instance");
    assert!(minsat_core::hardness::cuts_each_path_once(&inst, &sol));

    // drop one edge: no clique, and the paired cut disappears
    let g2 = KPartiteGraph {
        sizes: vec![1, 1, 1],
        edges: vec![((0, 0), (1, 0)), ((1, 0), (2, 0))],
    };
    assert!(!g2.has_multicolored_clique());
    let inst2 = gen_paired_cut(&g2).unwrap();
    assert!(minsat_core::hardness::solve_paired_cut_oracle(&inst2)
        .unwrap()
        .is_none());
}
