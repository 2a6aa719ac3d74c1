//! Acceptance suite: every release criterion as one test, each printing a
//! pass/fail line (visible with `--nocapture`). All checks are exact; there
//! are no tolerances anywhere.

use monotri::verify::{run_suite, PropertyResult, Suite, VerifyConfig};

fn config() -> VerifyConfig {
    VerifyConfig {
        max_rows: 6,
        max_x: 6,
        seed: 0,
        instances: 120,
    }
}

fn run_named(suite: Suite, names: &[&str]) -> Vec<PropertyResult> {
    let results = run_suite(suite, &config());
    let picked: Vec<PropertyResult> = results
        .into_iter()
        .filter(|r| names.contains(&r.name))
        .collect();
    assert_eq!(
        picked.len(),
        names.len(),
        "missing properties: wanted {names:?}"
    );
    picked
}

fn assert_all_passed(criterion: &str, results: &[PropertyResult]) {
    let failed: Vec<&PropertyResult> = results.iter().filter(|r| !r.passed).collect();
    if failed.is_empty() {
        let total: u64 = results.iter().map(|r| r.instances).sum();
        println!("PASS {criterion} ({total} exact checks)");
    } else {
        for f in &failed {
            println!(
                "FAIL {criterion} [{}]: {}",
                f.name,
                f.counterexample.as_deref().unwrap_or("no detail")
            );
        }
        panic!("{criterion} failed");
    }
}

#[test]
fn criterion_1_reference_polynomials() {
    let results = run_named(
        Suite::Recursion,
        &[
            "recursion/reference-polynomials-gamma",
            "recursion/reference-polynomials-gamma-star",
        ],
    );
    assert_all_passed(
        "criterion 1: gamma and gamma* for n = 1..5 equal the published polynomials exactly",
        &results,
    );
}

#[test]
fn criterion_2_cross_method_equality() {
    let results = run_named(Suite::Recursion, &["recursion/cross-method-counts"]);
    // Every strict bottom row for n <= 6, x <= 6, four independent methods
    // against brute force each time.
    assert!(results[0].instances >= 4 * 182);
    assert_all_passed(
        "criterion 2: brute = recursion = operator = beta = gamma-bar for n <= 6, x <= 6",
        &results,
    );
}

#[test]
fn criterion_3_inverse_operator_form() {
    let results = run_named(Suite::Operators, &["operators/inverse-route-matches-direct"]);
    assert_all_passed(
        "criterion 3: truncated-inverse operator route reproduces gamma for n <= 5",
        &results,
    );
}

#[test]
fn criterion_4_asm_chain() {
    let results = run_named(Suite::Asm, &["asm/chain", "asm/triangle-bijection"]);
    assert_all_passed(
        "criterion 4: enumeration = alpha = constant term = product formula (429, 7436 at n = 5, 6)",
        &results,
    );
}

#[test]
fn criterion_5_vsasm_chain() {
    let results = run_named(
        Suite::Asm,
        &["asm/vsasm-chain", "asm/vsasm-triangle-correspondence"],
    );
    assert_all_passed(
        "criterion 5: symmetric-matrix filter = product formula = halved-triangle count (1, 3, 26)",
        &results,
    );
}

#[test]
fn criterion_6_generating_function_fixtures() {
    let results = run_named(Suite::Genfun, &["genfun/mt-coefficient-fixtures"]);
    assert_all_passed(
        "criterion 6: coefficient (3,2,1) = -1, coefficient (-1,2,3) = 7 while alpha = 23",
        &results,
    );
}

#[test]
fn criterion_7_property_suites() {
    let randomized_operators = [
        "operators/inversion-round-trip",
        "operators/merge-rule",
        "operators/t-identity-four-bracket",
        "operators/t-identity-three-bracket",
        "operators/degree-preservation",
        "operators/apply-homomorphism",
        "operators/quadruple-product-fixes-base",
    ];
    let symmetry = [
        "symmetry/gamma-degree-bound",
        "symmetry/v-antisymmetry",
        "symmetry/gamma-star-antisymmetry",
        "symmetry/gamma-reflection",
        "symmetry/recursion-reflection",
        "symmetry/reflection-summation-part1",
        "symmetry/reflection-summation-part2",
        "symmetry/symmetric-operator-antisymmetry",
        "symmetry/reflection-respecting-operators",
        "symmetry/characterization-constant",
        "symmetry/leading-coefficient",
    ];
    let genfun = [
        "genfun/binomial-determinant-symbolic",
        "genfun/binomial-determinant-numeric",
        "genfun/series-identities",
        "genfun/vandermonde-monic",
    ];
    let mut results = run_named(Suite::Operators, &randomized_operators);
    results.extend(run_named(Suite::Symmetry, &symmetry));
    results.extend(run_named(Suite::Genfun, &genfun));
    // The randomized families must each run at least 100 instances.
    for name in [
        "operators/inversion-round-trip",
        "operators/merge-rule",
        "operators/t-identity-four-bracket",
        "operators/t-identity-three-bracket",
        "symmetry/reflection-summation-part1",
        "symmetry/reflection-summation-part2",
        "symmetry/symmetric-operator-antisymmetry",
        "symmetry/reflection-respecting-operators",
        "genfun/binomial-determinant-numeric",
        "genfun/series-identities",
    ] {
        let r = results.iter().find(|r| r.name == name).expect("present");
        assert!(
            r.instances >= 100,
            "{name} ran only {} instances",
            r.instances
        );
    }
    assert_all_passed(
        "criterion 7: randomized identity suites (seeded, >= 100 instances each)",
        &results,
    );
}

#[test]
fn criterion_8_full_reproduction() {
    let results = run_suite(Suite::All, &config());
    let failed: Vec<&PropertyResult> = results.iter().filter(|r| !r.passed).collect();
    for f in &failed {
        println!(
            "FAIL criterion 8 [{}]: {}",
            f.name,
            f.counterexample.as_deref().unwrap_or("no detail")
        );
    }
    assert!(failed.is_empty(), "criterion 8 failed");
    let total: u64 = results.iter().map(|r| r.instances).sum();
    println!(
        "PASS criterion 8: every published value and identity reproduced at full scale \
         ({} properties, {total} exact checks, no scaled-down substitutions)",
        results.len()
    );
}
