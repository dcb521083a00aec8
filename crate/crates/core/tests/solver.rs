use bipolar_svc::constructors::oca::oca;
use bipolar_svc::constructors::OcaOptions;
use bipolar_svc::solver::{
    find_feasible_column, solve, FeasibilityProblem, Outcome, SearchOptions,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// First feasible candidate in `+1 < -1` lexicographic order with `c[0] = +1`, by enumeration.
fn brute_force(p: &FeasibilityProblem) -> Option<Vec<i8>> {
    let dim = p.dim();
    let free = dim - 1;
    (0u64..1 << free)
        .map(|x| {
            let mut c = vec![1i8; dim];
            for (l, chip) in c.iter_mut().enumerate().skip(1) {
                if x >> (free - l) & 1 == 1 {
                    *chip = -1;
                }
            }
            c
        })
        .find(|c| p.is_satisfied_by(c))
}

fn random_problem(rng: &mut ChaCha8Rng) -> FeasibilityProblem {
    let dim = rng.random_range(1..=16usize);
    let ncols = rng.random_range(1..=12usize);
    let columns = (0..ncols)
        .map(|_| {
            (0..dim)
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect()
        })
        .collect();
    let bound = rng.random_range(0..dim as u64);
    FeasibilityProblem::new(dim, columns, bound).unwrap()
}

fn all_option_sets() -> Vec<SearchOptions> {
    let mut v = Vec::new();
    for prune in [false, true] {
        for memoize in [false, true] {
            for pair_bounds in [false, true] {
                v.push(SearchOptions {
                    prune,
                    memoize,
                    pair_bounds,
                });
            }
        }
    }
    v
}

#[test]
fn matches_enumeration_on_random_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut feasible = 0;
    for _ in 0..200 {
        let p = random_problem(&mut rng);
        let expected = brute_force(&p);
        let got = find_feasible_column(&p);
        if let Some(c) = &got {
            assert!(p.is_satisfied_by(c));
            feasible += 1;
        }
        assert_eq!(got, expected, "{p:?}");
    }
    // the generator should exercise both outcomes
    assert!(feasible > 20 && feasible < 180, "{feasible} feasible");
}

#[test]
fn search_options_never_change_the_answer() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..60 {
        let p = random_problem(&mut rng);
        let reference = solve(
            &p,
            SearchOptions {
                prune: false,
                memoize: false,
                pair_bounds: false,
            },
        );
        for opts in all_option_sets() {
            let r = solve(&p, opts);
            assert_eq!(r.outcome, reference.outcome, "{opts:?}");
            assert!(r.nodes <= reference.nodes);
        }
    }
}

#[test]
fn oca_columns_match_under_every_search_option() {
    let (reference, _) = oca(9, 16, OcaOptions::default()).unwrap();
    for opts in all_option_sets().into_iter().filter(|o| o.prune) {
        let mut columns = vec![vec![1i8; 9]];
        let mut m = 0;
        while columns.len() < 16 {
            let p = FeasibilityProblem::new(9, columns.clone(), m).unwrap();
            match solve(&p, opts).outcome {
                Outcome::Feasible { column, .. } => columns.push(column),
                Outcome::Infeasible => m += 1,
            }
        }
        assert_eq!(columns, reference.columns(), "{opts:?}");
    }
}

#[test]
fn fifteen_by_twenty_four_stays_within_node_budget() {
    // measured at 2634 nodes (1035 with the parity skip); pinned with 2x headroom
    let (_, trace) = oca(15, 24, OcaOptions::default()).unwrap();
    assert!(trace.nodes <= 5_268, "{} nodes", trace.nodes);
    assert_eq!(trace.final_bound(), 5);
    let (_, trace) = oca(15, 24, OcaOptions { parity_skip: true }).unwrap();
    assert!(trace.nodes <= 2_070, "{} nodes", trace.nodes);
}

proptest! {
    #[test]
    fn negating_a_column_keeps_feasibility(seed in any::<u64>(), which in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng);
        let mut columns = p.columns().to_vec();
        let j = which % columns.len();
        columns[j].iter_mut().for_each(|s| *s = -*s);
        let q = FeasibilityProblem::new(p.dim(), columns, p.bound()).unwrap();
        let (a, b) = (find_feasible_column(&p), find_feasible_column(&q));
        prop_assert_eq!(a.is_some(), b.is_some());
        if let Some(c) = b {
            prop_assert!(q.is_satisfied_by(&c));
        }
    }

    #[test]
    fn returned_columns_satisfy_every_constraint(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng);
        if let Some(c) = find_feasible_column(&p) {
            prop_assert_eq!(c[0], 1);
            prop_assert!(p.is_satisfied_by(&c));
        }
    }
}
