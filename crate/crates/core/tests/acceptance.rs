//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one pass/fail line.

use metriclab::harness::verify::{
    criterion_1_cg_nonconsistency, criterion_2_two_valued_lower_bound,
    criterion_3_stone_consistency, criterion_4_hedgehog_consistency,
    criterion_5_tie_break_contract, criterion_6_nagata_oracle_equivalence,
    criterion_7_nagata_named_values, criterion_8_restriction_equivalence,
    criterion_9_reproducibility, CriterionResult, DEFAULT_SEED,
};

fn check(result: metriclab::Result<CriterionResult>) {
    let result = result.expect("criterion must run to completion");
    println!(
        "criterion {} ({}): {} — {}",
        result.id,
        result.name,
        if result.pass { "PASS" } else { "FAIL" },
        result.detail
    );
    assert!(result.pass, "criterion {} failed: {}", result.id, result.detail);
}

#[test]
fn criterion_1_cerou_guyader_nonconsistency() {
    check(criterion_1_cg_nonconsistency(DEFAULT_SEED));
}

#[test]
fn criterion_2_two_valued_lower_bound_holds() {
    check(criterion_2_two_valued_lower_bound(DEFAULT_SEED));
}

#[test]
fn criterion_3_stone_consistency_desk_scale() {
    check(criterion_3_stone_consistency(DEFAULT_SEED));
}

#[test]
fn criterion_4_hedgehog_consistency_desk_scale() {
    check(criterion_4_hedgehog_consistency(DEFAULT_SEED));
}

#[test]
fn criterion_5_tie_break_contract_zero_failures() {
    check(criterion_5_tie_break_contract(DEFAULT_SEED));
}

#[test]
fn criterion_6_nagata_search_matches_oracle() {
    check(criterion_6_nagata_oracle_equivalence(DEFAULT_SEED));
}

#[test]
fn criterion_7_nagata_named_values_hold() {
    check(criterion_7_nagata_named_values(DEFAULT_SEED));
}

#[test]
fn criterion_8_restriction_equivalence_exact() {
    check(criterion_8_restriction_equivalence(DEFAULT_SEED));
}

#[test]
fn criterion_9_csv_reproducibility_across_parallelism() {
    check(criterion_9_reproducibility(DEFAULT_SEED));
}
