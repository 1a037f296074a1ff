//! The power criterion on all 2 x 2 matrices of class representatives of A5.

use invgen::catalog::parse_descriptor;
use invgen::invgen::Budgets;
use invgen::power::{direct_power_cross_check, lemma42_check, GenMatrix, PowerContext};

fn a5() -> PowerContext {
    let g = parse_descriptor("A5").unwrap().resolve().unwrap();
    PowerContext::new(&g, &Budgets::default()).unwrap()
}

fn all_matrices(ctx: &PowerContext) -> Vec<GenMatrix> {
    let reps: Vec<usize> = ctx
        .analysis()
        .classes()
        .classes()
        .iter()
        .map(|c| c.representative)
        .collect();
    let k = reps.len();
    let mut out = Vec::new();
    for code in 0..k.pow(4) {
        let digit = |i: u32| reps[code / k.pow(i) % k];
        let entries = vec![vec![digit(0), digit(1)], vec![digit(2), digit(3)]];
        out.push(GenMatrix::new(ctx, 2, entries).unwrap());
    }
    out
}

#[test]
fn verdict_invariant_under_rows_columns_and_automorphisms() {
    let ctx = a5();
    let mut yes = 0;
    for a in all_matrices(&ctx) {
        let verdict = lemma42_check(&ctx, &a).unwrap().is_yes();
        yes += verdict as usize;
        assert_eq!(lemma42_check(&ctx, &a.permute_rows(&[1, 0])).unwrap().is_yes(), verdict);
        assert_eq!(
            lemma42_check(&ctx, &a.permute_columns(&[1, 0])).unwrap().is_yes(),
            verdict
        );
        for aut in 0..ctx.aut().order() {
            for j in 0..2 {
                let b = a.apply_automorphism(&ctx, j, aut);
                assert_eq!(lemma42_check(&ctx, &b).unwrap().is_yes(), verdict);
            }
        }
    }
    // Ordered pairs of distinct-orbit invariably generating class vectors.
    assert_eq!(yes, 8);
}

#[test]
fn every_certificate_verifies_and_every_witness_absorbs() {
    let ctx = a5();
    for a in all_matrices(&ctx) {
        let cert = lemma42_check(&ctx, &a).unwrap();
        cert.verify(ctx.group(), &a.permutations(&ctx)).unwrap();
        if !cert.is_yes() {
            let report = direct_power_cross_check(&ctx, &a, 0, 0).unwrap();
            assert!(report.passed(), "{:?}", a.to_cycle_rows(&ctx));
        }
    }
}
