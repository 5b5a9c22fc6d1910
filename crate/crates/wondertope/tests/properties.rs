//! The seed-0, 500-case runs belong to the acceptance target; these cover other seeds.

mod common;

const CASES: u32 = 100;

#[test]
fn normalize_is_idempotent_and_value_preserving() {
    for seed in 1..4 {
        assert_eq!(common::normalize_idempotence(CASES, seed), Ok(CASES), "seed {seed}");
    }
}

#[test]
fn pullback_is_functorial() {
    for seed in 1..4 {
        assert_eq!(common::pullback_functoriality(CASES, seed), Ok(CASES), "seed {seed}");
    }
}

#[test]
fn residue_is_linear() {
    for seed in 1..4 {
        assert_eq!(common::residue_linearity(CASES, seed), Ok(CASES), "seed {seed}");
    }
}

#[test]
fn pullback_matches_pointwise_evaluation() {
    for seed in 1..4 {
        assert_eq!(common::pullback_evaluation_oracle(CASES, seed), Ok(CASES), "seed {seed}");
    }
}
