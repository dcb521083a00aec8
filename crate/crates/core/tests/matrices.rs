use bipolar_svc::constructors::ophm::{initial_block, ophm};
use bipolar_svc::constructors::{construct_phm, hadamard};
use bipolar_svc::rng::construction_rng;
use bipolar_svc::{
    construct, inner_product, welch_bound, BipolarMatrix, ConstructionSpec, GramProfile, Method,
};
use proptest::prelude::*;

fn sign_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i8>>> {
    prop::collection::vec(
        prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1i8 } else { -1 }), rows),
        cols,
    )
}

fn shaped() -> impl Strategy<Value = (usize, Vec<Vec<i8>>)> {
    (1usize..140, 2usize..9).prop_flat_map(|(r, c)| (Just(r), sign_matrix(r, c)))
}

fn naive_ip(a: &[i8], b: &[i8]) -> i64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| i64::from(x) * i64::from(y))
        .sum()
}

proptest! {
    #[test]
    fn packed_inner_products_match_naive((rows, cols) in shaped()) {
        let c = BipolarMatrix::from_columns(rows, &cols).unwrap();
        prop_assert_eq!(c.columns(), cols.clone());
        for i in 0..cols.len() {
            for j in 0..cols.len() {
                let ip = c.column_inner_product(i, j);
                prop_assert_eq!(ip, naive_ip(&cols[i], &cols[j]));
                prop_assert_eq!(ip, inner_product(&cols[i], &cols[j]).unwrap());
                // every inner product has the parity of the length
                prop_assert_eq!(ip.rem_euclid(2), rows as i64 % 2);
            }
        }
    }

    #[test]
    fn profile_matches_naive_counts((rows, cols) in shaped()) {
        let c = BipolarMatrix::from_columns(rows, &cols).unwrap();
        let p = c.coherence().unwrap();
        let mut counts = vec![0u64; rows + 1];
        let mut max = 0;
        for i in 0..cols.len() {
            for j in i + 1..cols.len() {
                let v = naive_ip(&cols[i], &cols[j]).unsigned_abs();
                counts[v as usize] += 1;
                max = max.max(v);
            }
        }
        prop_assert_eq!(&p.abs_ip_counts, &counts);
        prop_assert_eq!(p.max_abs_ip, max);
        prop_assert_eq!(p.histogram.iter().map(|b| b.count).sum::<u64>(), p.pairs());
        prop_assert!((p.mu() - max as f64 / rows as f64).abs() < 1e-15);
        prop_assert!(p.mean_abs_coherence() <= p.mu() + 1e-15);
    }

    #[test]
    fn negating_columns_keeps_the_profile((rows, cols) in shaped(), flip in any::<u64>()) {
        let c = BipolarMatrix::from_columns(rows, &cols).unwrap();
        let flipped: Vec<Vec<i8>> = cols
            .iter()
            .enumerate()
            .map(|(j, col)| if flip >> j & 1 == 1 { col.iter().map(|s| -s).collect() } else { col.clone() })
            .collect();
        let d = BipolarMatrix::from_columns(rows, &flipped).unwrap();
        prop_assert_eq!(c.coherence().unwrap(), d.coherence().unwrap());
    }

    #[test]
    fn deleting_a_row_moves_each_entry_by_one((rows, cols) in shaped(), k in any::<usize>()) {
        prop_assume!(rows >= 2);
        let c = BipolarMatrix::from_columns(rows, &cols).unwrap();
        let k = k % rows;
        let d = c.delete_row(k).unwrap();
        for i in 0..cols.len() {
            for j in i + 1..cols.len() {
                let delta = c.column_inner_product(i, j) - d.column_inner_product(i, j);
                prop_assert_eq!(delta, i64::from(cols[i][k] * cols[j][k]));
            }
        }
    }
}

const SIZES: [(usize, usize); 6] = [(3, 4), (5, 9), (7, 16), (15, 24), (20, 24), (12, 40)];

#[test]
fn every_method_respects_welch_and_parity() {
    for method in Method::ALL {
        for (rows, cols) in SIZES {
            for seed in 0..3 {
                let c = construct(&ConstructionSpec::new(method, rows, cols, seed)).unwrap();
                let p = c.coherence().unwrap();
                assert!(
                    p.mu() + 1e-12 >= welch_bound(rows, cols),
                    "{method} {rows}x{cols}"
                );
                assert_eq!(p.max_abs_ip % 2, rows as u64 % 2, "{method} {rows}x{cols}");
            }
        }
    }
}

#[test]
fn constructions_are_pure_functions_of_the_spec() {
    for method in Method::ALL {
        let spec = ConstructionSpec::new(method, 15, 24, 11);
        assert_eq!(
            construct(&spec).unwrap(),
            construct(&spec).unwrap(),
            "{method}"
        );
    }
    let a = construct(&ConstructionSpec::new(Method::Bernoulli, 15, 24, 1)).unwrap();
    let b = construct(&ConstructionSpec::new(Method::Bernoulli, 15, 24, 2)).unwrap();
    assert_ne!(a, b);
}

/// Re-evaluates every candidate deletion from scratch and checks the greedy choice.
fn check_greedy_steps(rows: usize, cols: usize, seed: u64) {
    let mut rng = construction_rng(seed);
    let (result, trace) = ophm(rows, cols, &mut rng).unwrap();
    let mut current = trace.initial.clone();
    assert_eq!(trace.steps.len(), cols - rows);
    for step in &trace.steps {
        let scores: Vec<u64> = (0..current.rows())
            .map(|k| current.delete_row(k).unwrap().max_abs_inner_product())
            .collect();
        let best = *scores.iter().min().unwrap();
        assert_eq!(
            scores[step.position], best,
            "seed {seed}: step {step:?} is not minimal"
        );
        assert_eq!(step.max_abs_ip, best);
        assert_eq!(step.ties, scores.iter().filter(|&&s| s == best).count());
        current = current.delete_row(step.position).unwrap();
    }
    assert_eq!(current, result);
}

#[test]
fn ophm_steps_are_greedy_optimal() {
    for seed in 0..5 {
        check_greedy_steps(8, 16, seed);
        check_greedy_steps(15, 24, seed);
    }
    check_greedy_steps(11, 13, 0);
}

#[test]
fn ophm_starts_from_the_hadamard_block() {
    let h = hadamard(32).unwrap();
    let block = initial_block(24).unwrap();
    let idx: Vec<usize> = (0..24).collect();
    assert_eq!(
        block,
        h.select_rows(&idx).unwrap().select_cols(&idx).unwrap()
    );
    // orthogonal columns before any deletion
    assert_eq!(initial_block(16).unwrap().max_abs_inner_product(), 0);
}

#[test]
fn ophm_beats_the_median_random_partial_hadamard() {
    let mut phm: Vec<f64> = (0..25)
        .map(|s| construct_phm(15, 24, s).unwrap().coherence().unwrap().mu())
        .collect();
    phm.sort_by(f64::total_cmp);
    let median = phm[phm.len() / 2];
    for seed in 0..5 {
        let c = construct(&ConstructionSpec::new(Method::Ophm, 15, 24, seed)).unwrap();
        assert!(c.coherence().unwrap().mu() <= median);
    }
}

#[test]
fn oca_first_column_is_all_ones_and_columns_are_distinct() {
    let c = construct(&ConstructionSpec::new(Method::Oca, 20, 24, 0)).unwrap();
    assert_eq!(c.column(0), vec![1; 20]);
    let cols = c.columns();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            assert_ne!(cols[i], cols[j]);
        }
    }
    assert_eq!(c.max_abs_inner_product(), 4);
}

#[test]
fn histogram_bins_cover_unit_interval() {
    let c = construct(&ConstructionSpec::new(Method::Bernoulli, 15, 24, 3)).unwrap();
    let p = GramProfile::compute(&c, 10).unwrap();
    assert_eq!(p.histogram.len(), 10);
    assert_eq!(p.histogram[0].lo, 0.0);
    assert_eq!(p.histogram[9].hi, 1.0);
    let total: u64 = (0..10)
        .map(|b| p.count_in(b as f64 / 10.0, (b + 1) as f64 / 10.0))
        .sum();
    // the closed top edge (|G| = 1) is the only value count_in's half-open ranges miss
    assert_eq!(total + p.abs_ip_counts[15], p.pairs());
}
