//! Certificates and d_I against definitions checked by brute force.

use invgen::catalog::parse_descriptor;
use invgen::invgen::{compute_di, invariably_generates, Budgets, CertificateDocument, GroupAnalysis};
use invgen::{PermGroup, Permutation};

fn analysis(desc: &str) -> GroupAnalysis {
    let g = parse_descriptor(desc).unwrap().resolve().unwrap();
    GroupAnalysis::new(&g, &Budgets::default()).unwrap()
}

/// Every choice of conjugates, enumerated over the whole group.
fn invariably_generates_by_definition(g: &PermGroup, elements: &[Permutation]) -> bool {
    let table = g.enumerate_elements(1000).unwrap();
    let all = table.elements();
    let mut choice = vec![0usize; elements.len()];
    loop {
        let conjugates: Vec<Permutation> = elements
            .iter()
            .zip(&choice)
            .map(|(s, &c)| s.conjugate_by(&all[c]))
            .collect();
        let generated = if conjugates.is_empty() {
            g.is_trivial()
        } else {
            g.generated_by(&conjugates)
        };
        if !generated {
            return false;
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return true;
            }
            choice[i] += 1;
            if choice[i] < all.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn verdicts_match_the_definition_on_small_groups() {
    for desc in ["S3", "D8", "Q8", "A4", "C2^2", "D10", "C6", "S4"] {
        let a = analysis(desc);
        let k = a.classes().len();
        let rep = |c: usize| a.table().element(a.classes().class(c).representative).clone();
        for x in 0..k {
            for y in x..k {
                let elements = vec![rep(x), rep(y)];
                let cert = invariably_generates(&a, &elements).unwrap();
                assert_eq!(
                    cert.is_yes(),
                    invariably_generates_by_definition(a.group(), &elements),
                    "{desc} classes {x} {y}"
                );
                cert.verify(a.group(), &elements).unwrap();
            }
        }
    }
}

#[test]
fn d_i_values() {
    let expected = [
        ("C1", 0),
        ("C6", 1),
        ("C2^2", 2),
        ("C2^3", 3),
        ("C2^4", 4),
        ("Q8", 2),
        ("S3", 2),
        ("S4", 2),
        ("A4", 2),
        ("D8", 2),
        ("A5", 2),
        ("PSL(2,7)", 2),
        ("C6^2", 2),
    ];
    for (desc, value) in expected {
        assert_eq!(compute_di(&analysis(desc)).value, value, "{desc}");
    }
}

#[test]
fn di_witness_is_minimal_and_certified() {
    for desc in ["S4", "D12", "A5", "C3^2"] {
        let a = analysis(desc);
        let di = compute_di(&a);
        assert!(a.classes_invariably_generate(&di.witness));
        let k = a.classes().len();
        if di.value > 0 {
            // No smaller class set works.
            let smaller = di.value - 1;
            let mut subset: Vec<usize> = (0..smaller).collect();
            loop {
                assert!(!a.classes_invariably_generate(&subset), "{desc}: {subset:?}");
                let mut i = smaller;
                while i > 0 && subset[i - 1] == k - smaller + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                subset[i - 1] += 1;
                for j in i..smaller {
                    subset[j] = subset[j - 1] + 1;
                }
            }
        }
        let reps: Vec<Permutation> = di
            .witness
            .iter()
            .map(|&c| a.table().element(a.classes().class(c).representative).clone())
            .collect();
        let doc = CertificateDocument::new(Some(desc.into()), &a, &reps, a.certify_classes(&di.witness).unwrap());
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: CertificateDocument = serde_json::from_str(&text).unwrap();
        back.verify().unwrap();
    }
}
