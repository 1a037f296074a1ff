//! The acceptance suite: numbered checks over the standard catalog, with a
//! deterministic, timing-free JSON summary.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog::{parse_descriptor, standard_catalog, GroupDescriptor};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::invgen::{
    check_frattini_invariance, check_subadditivity, compute_di, invariably_generates, sample_refute, Budgets,
    CertificateDocument, GroupAnalysis,
};
use crate::perm::Permutation;
use crate::power::{direct_power_cross_check, lemma42_check, m_exact, three_row_matrix, GenMatrix, PowerContext};

pub const SUITE_SCHEMA: &str = "invgen.suite/1";

pub const DEFAULT_SEED: u64 = 20240601;

/// Regression values of `m(A5, r)` for `r = 1, 2, 3`.
pub const M_A5: [usize; 3] = [0, 2, 21];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Fewer random trials; everything else as in `Full`.
    Quick,
    Full,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(Error::Unsupported(format!("unknown profile {other:?}"))),
        }
    }
}

impl Profile {
    fn refute_trials(self) -> usize {
        match self {
            Profile::Quick => 100,
            Profile::Full => 500,
        }
    }

    fn cross_check_trials(self) -> usize {
        match self {
            Profile::Quick => 200,
            Profile::Full => 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub violations: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub profile: Profile,
    pub seed: u64,
    pub criteria: Vec<CriterionOutcome>,
    pub passed: bool,
}

struct Tally {
    checked: u64,
    violations: u64,
    detail: String,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            violations: 0,
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.violations <= 5 {
                if !self.detail.is_empty() {
                    self.detail.push_str("; ");
                }
                self.detail.push_str(&what());
            }
        }
    }

    fn outcome(self, id: u32, name: &str, summary: String) -> CriterionOutcome {
        let detail = if self.violations == 0 {
            summary
        } else {
            format!("{summary}; violations: {}", self.detail)
        };
        CriterionOutcome {
            id,
            name: name.into(),
            passed: self.violations == 0 && self.checked > 0,
            checked: self.checked,
            violations: self.violations,
            detail,
        }
    }
}

/// Catalog groups resolved and analysed once.
struct Catalog {
    entries: Vec<(GroupDescriptor, PermGroup, GroupAnalysis)>,
}

impl Catalog {
    fn load(max_order: u128, budgets: &Budgets) -> Result<Self> {
        let mut entries = Vec::new();
        for desc in standard_catalog() {
            let group = desc.resolve()?;
            if group.order() <= max_order {
                let analysis = GroupAnalysis::new(&group, budgets)?;
                entries.push((desc, group, analysis));
            }
        }
        Ok(Catalog { entries })
    }

    fn up_to(&self, order: u128) -> impl Iterator<Item = &(GroupDescriptor, PermGroup, GroupAnalysis)> {
        self.entries.iter().filter(move |(_, g, _)| g.order() <= order)
    }
}

/// Runs criteria 1–9. Criterion 10 (byte-identical reruns) is a property of
/// the serialized output and is checked by the callers.
pub fn run_suite(profile: Profile, seed: u64, budgets: &Budgets) -> Result<SuiteReport> {
    let catalog = Catalog::load(500, budgets)?;
    let a5 = PowerContext::new(&parse_descriptor("A5")?.resolve()?, budgets)?.with_label("A5");
    let criteria = vec![
        simple_groups(budgets)?,
        verdicts_against_sampling(&catalog, profile, seed)?,
        class_covering_subgroups(&catalog),
        frattini_invariance(&catalog, budgets)?,
        log2_bound(&catalog),
        subadditivity(&catalog, budgets)?,
        m_sandwich(&a5, budgets)?,
        three_rows(&a5, profile, seed)?,
        failure_witnesses(&a5, seed)?,
    ];
    let passed = criteria.iter().all(|c| c.passed);
    Ok(SuiteReport {
        schema: SUITE_SCHEMA.into(),
        profile,
        seed,
        criteria,
        passed,
    })
}

fn simple_groups(budgets: &Budgets) -> Result<CriterionOutcome> {
    let mut tally = Tally::new();
    let mut summary = String::from("d_I:");
    for name in ["A5", "A6", "PSL(2,7)"] {
        let group = parse_descriptor(name)?.resolve()?;
        let analysis = GroupAnalysis::new(&group, budgets)?;
        let di = compute_di(&analysis);
        let elements: Vec<Permutation> = di
            .witness
            .iter()
            .map(|&c| {
                analysis
                    .table()
                    .element(analysis.classes().class(c).representative)
                    .clone()
            })
            .collect();
        let cert = invariably_generates(&analysis, &elements)?;
        let doc = CertificateDocument::new(Some(name.into()), &analysis, &elements, cert);
        let replayed: CertificateDocument = serde_json::from_str(&serde_json::to_string(&doc)?)?;
        let replay_ok = doc.certificate.is_yes() && replayed.verify().is_ok();
        tally.check(di.value == 2, || format!("d_I({name}) = {}", di.value));
        tally.check(replay_ok, || format!("certificate for {name} does not replay"));
        let _ = write!(summary, " {name}={}", di.value);
    }
    Ok(tally.outcome(1, "d_I of simple groups", summary))
}

fn verdicts_against_sampling(catalog: &Catalog, profile: Profile, seed: u64) -> Result<CriterionOutcome> {
    let mut tally = Tally::new();
    let trials = profile.refute_trials();
    let mut case: u64 = 0;
    let mut yes = 0;
    for (desc, group, analysis) in catalog.up_to(200) {
        let k = analysis.classes().len();
        let reps: Vec<Permutation> = analysis
            .classes()
            .classes()
            .iter()
            .map(|c| analysis.table().element(c.representative).clone())
            .collect();
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        subsets.extend((0..k).map(|a| vec![a]));
        subsets.extend((0..k).flat_map(|a| (a + 1..k).map(move |b| vec![a, b])));
        for subset in subsets {
            let elements: Vec<Permutation> = subset.iter().map(|&c| reps[c].clone()).collect();
            let cert = invariably_generates(analysis, &elements)?;
            let ok = if cert.is_yes() {
                yes += 1;
                sample_refute(group, &elements, trials, seed.wrapping_add(case)).is_none()
                    && cert.verify(group, &elements).is_ok()
            } else {
                cert.verify(group, &elements).is_ok()
            };
            tally.check(ok, || format!("{desc} classes {subset:?}"));
            case += 1;
        }
    }
    let summary = format!("{case} class subsets, {yes} positive, {trials} trials each");
    Ok(tally.outcome(2, "maximal-subgroup verdict vs sampling", summary))
}

fn class_covering_subgroups(catalog: &Catalog) -> CriterionOutcome {
    let mut tally = Tally::new();
    let mut groups = 0;
    for (desc, _, analysis) in catalog.up_to(200) {
        groups += 1;
        let classes = analysis.classes();
        for record in analysis.lattice().records() {
            let covers = classes.classes().iter().all(|c| !c.mask.is_disjoint(&record.mask));
            tally.check(!covers || record.order == analysis.table().len(), || {
                format!("{desc}: subgroup of order {} meets every class", record.order)
            });
        }
    }
    let summary = format!("{} subgroups of {groups} groups", tally.checked);
    tally.outcome(3, "class-covering subgroups are the whole group", summary)
}

fn frattini_invariance(catalog: &Catalog, budgets: &Budgets) -> Result<CriterionOutcome> {
    let mut tally = Tally::new();
    let mut nontrivial = 0;
    for (desc, group, _) in catalog.up_to(500) {
        let report = check_frattini_invariance(group, budgets)?;
        if report.frattini_order > 1 {
            nontrivial += 1;
        }
        tally.check(report.holds, || {
            format!("{desc}: {} vs {}", report.di_group.value, report.di_quotient.value)
        });
    }
    let summary = format!(
        "{} groups, {nontrivial} with nontrivial Frattini subgroup",
        tally.checked
    );
    Ok(tally.outcome(4, "Frattini invariance", summary))
}

fn log2_bound(catalog: &Catalog) -> CriterionOutcome {
    let mut tally = Tally::new();
    for (desc, group, analysis) in catalog.up_to(500) {
        let di = compute_di(analysis).value;
        let bound = 127 - group.order().leading_zeros() as usize;
        tally.check(di <= bound, || format!("{desc}: d_I = {di} > {bound}"));
    }
    let summary = format!("{} groups", tally.checked);
    tally.outcome(5, "d_I at most log2 of the order", summary)
}

fn subadditivity(catalog: &Catalog, budgets: &Budgets) -> Result<CriterionOutcome> {
    let mut tally = Tally::new();
    for (desc, group, analysis) in catalog.up_to(200) {
        for record in analysis.lattice().normal_subgroups() {
            let report = check_subadditivity(group, &record.mask, budgets)?;
            tally.check(report.holds, || {
                format!(
                    "{desc}, N of order {}: {} > {} + {}",
                    report.normal_order, report.di_group, report.di_normal, report.di_quotient
                )
            });
        }
    }
    let summary = format!("{} normal subgroups", tally.checked);
    Ok(tally.outcome(6, "subadditivity over normal subgroups", summary))
}

fn m_sandwich(a5: &PowerContext, budgets: &Budgets) -> Result<CriterionOutcome> {
    let mut tally = Tally::new();
    let mut values = Vec::new();
    for r in 1..=3 {
        let report = m_exact(a5, r, budgets)?;
        if r >= 2 {
            tally.check(report.sandwich_holds, || {
                format!(
                    "r = {r}: {} not in ({}, {}]",
                    report.m_exact, report.lower, report.upper
                )
            });
        }
        tally.check(report.witness_verified, || format!("r = {r}: witness matrix rejected"));
        tally.check(report.m_exact == M_A5[r - 1], || {
            format!("r = {r}: m = {}, regression value {}", report.m_exact, M_A5[r - 1])
        });
        values.push(report.m_exact);
    }
    tally.check(values.windows(2).all(|w| w[0] <= w[1]), || {
        format!("not monotone: {values:?}")
    });
    let summary = format!("m(A5, 1..3) = {values:?}");
    Ok(tally.outcome(7, "m(A5, r) sandwich", summary))
}

fn three_rows(a5: &PowerContext, profile: Profile, seed: u64) -> Result<CriterionOutcome> {
    let mut tally = Tally::new();
    let matrix = three_row_matrix(a5, 2)?;
    let cert = lemma42_check(a5, &matrix)?;
    tally.check(cert.is_yes(), || "3-row matrix rejected".into());
    tally.check(cert.verify(a5.group(), &matrix.permutations(a5)).is_ok(), || {
        "certificate does not verify".into()
    });
    let trials = profile.cross_check_trials();
    let report = direct_power_cross_check(a5, &matrix, trials, seed)?;
    tally.check(report.passed(), || "sampled conjugates failed to generate A5^2".into());
    let summary = format!("3 x 2 matrix over A5, {trials} trials in A5^2");
    Ok(tally.outcome(8, "three rows invariably generate A5^2", summary))
}

fn failure_witnesses(a5: &PowerContext, seed: u64) -> Result<CriterionOutcome> {
    let mut tally = Tally::new();
    let cases = [
        ("twisted_diagonal", "(1,2,3,4,5); (1,2,3,4,5)\n(1,2,3); (1,2,3)\n"),
        ("lifted_maximal", "(1,2,3,4,5); (1,2,3,4,5)\n(1,3,5,2,4); (1,2,3)\n"),
    ];
    let mut orders = Vec::new();
    for (kind, text) in cases {
        let matrix = GenMatrix::parse(a5, text)?;
        let cert = lemma42_check(a5, &matrix)?;
        tally.check(cert.verify(a5.group(), &matrix.permutations(a5)).is_ok(), || {
            format!("{kind}: certificate does not verify")
        });
        let report = direct_power_cross_check(a5, &matrix, 0, seed)?;
        let witness = report.witness.as_ref();
        tally.check(
            !report.verdict_yes && witness.is_some_and(|w| w.kind == kind && w.passed()),
            || format!("{kind}: witness subgroup does not absorb every row"),
        );
        orders.push(format!("{kind} of order {}", witness.map_or(0, |w| w.order)));
    }
    let summary = orders.join(", ");
    Ok(tally.outcome(9, "failure witnesses absorb every row", summary))
}
