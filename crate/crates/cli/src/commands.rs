//! Command implementations. Each returns a serializable result and whether
//! the verdict was positive; rendering and exit codes live in `main`.

use std::fmt::Write as _;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use invgen::catalog::{parse_descriptor, GroupDescriptor};
use invgen::invgen::{
    compute_di, invariably_generates, Budgets, CertificateDocument, GroupAnalysis, InvGenCertificate,
    CERTIFICATE_SCHEMA,
};
use invgen::power::{
    bounds_report, direct_power_cross_check, lemma42_check, m_exact, BoundsReport, CrossCheckReport, GenMatrix,
    MTRReport, PowerCertificate, PowerContext, PowerDocument, POWER_CERTIFICATE_SCHEMA,
};
use invgen::structure::automorphism_group;
use invgen::suite::{run_suite, Profile, SuiteReport};
use invgen::Permutation;

/// A command result that knows its verdict and how to print itself.
pub trait Outcome: Serialize {
    fn positive(&self) -> bool {
        true
    }

    fn text(&self) -> String;
}

fn resolve(descriptor: &str) -> anyhow::Result<(GroupDescriptor, invgen::PermGroup)> {
    let desc = parse_descriptor(descriptor).with_context(|| format!("invalid group descriptor {descriptor:?}"))?;
    let group = desc.resolve()?;
    Ok((desc, group))
}

fn power_context(descriptor: &str, budgets: &Budgets) -> anyhow::Result<(GroupDescriptor, PowerContext)> {
    let (desc, group) = resolve(descriptor)?;
    let ctx = PowerContext::new(&group, budgets)?.with_label(desc.to_string());
    Ok((desc, ctx))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupInfo {
    pub schema: String,
    pub descriptor: String,
    pub degree: usize,
    pub order: u64,
    pub k: usize,
    pub class_sizes: Vec<usize>,
    pub subgroups: usize,
    pub subgroup_classes: usize,
    /// Orders of the representatives of the classes of maximal subgroups.
    pub maximal_orders: Vec<usize>,
    pub frattini_order: usize,
    /// Absent when the group exceeds the automorphism budget.
    pub aut_order: Option<usize>,
    pub out_order: Option<usize>,
}

pub fn group_info(descriptor: &str, budgets: &Budgets) -> anyhow::Result<GroupInfo> {
    let (desc, group) = resolve(descriptor)?;
    let analysis = GroupAnalysis::new(&group, budgets)?;
    let aut = if group.order() <= budgets.aut as u128 {
        Some(automorphism_group(&group, analysis.classes(), budgets.aut)?)
    } else {
        None
    };
    Ok(GroupInfo {
        schema: "invgen.group-info/1".into(),
        descriptor: desc.to_string(),
        degree: group.degree(),
        order: group.order() as u64,
        k: analysis.classes().len(),
        class_sizes: analysis.classes().sizes(),
        subgroups: analysis.lattice().len(),
        subgroup_classes: analysis.lattice().subgroup_classes().len(),
        maximal_orders: analysis
            .maximal_representatives()
            .iter()
            .map(|&m| analysis.lattice().record(m).order)
            .collect(),
        frattini_order: analysis.frattini().count(),
        aut_order: aut.as_ref().map(|a| a.order()),
        out_order: aut.as_ref().map(|a| a.out_order()),
    })
}

fn optional(v: Option<usize>) -> String {
    v.map_or_else(|| "not computed (over automorphism budget)".into(), |x| x.to_string())
}

impl Outcome for GroupInfo {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "group {} (degree {})", self.descriptor, self.degree);
        let _ = writeln!(s, "order: {}", self.order);
        let _ = writeln!(s, "conjugacy classes: {} with sizes {:?}", self.k, self.class_sizes);
        let _ = writeln!(
            s,
            "subgroups: {} in {} conjugacy classes",
            self.subgroups, self.subgroup_classes
        );
        let _ = writeln!(s, "maximal subgroup classes: orders {:?}", self.maximal_orders);
        let _ = writeln!(s, "Frattini subgroup order: {}", self.frattini_order);
        let _ = writeln!(s, "|Aut|: {}", optional(self.aut_order));
        let _ = writeln!(s, "|Out|: {}", optional(self.out_order));
        s
    }
}

pub fn invgen_command(descriptor: &str, elements: &[String], budgets: &Budgets) -> anyhow::Result<CertificateDocument> {
    let (desc, group) = resolve(descriptor)?;
    let elements = elements
        .iter()
        .map(|e| Permutation::parse_cycles(e, group.degree()).with_context(|| format!("invalid element {e:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    for e in &elements {
        if !group.contains(e)? {
            bail!("{e} is not an element of {desc}");
        }
    }
    let analysis = GroupAnalysis::new(&group, budgets)?;
    let cert = invariably_generates(&analysis, &elements)?;
    Ok(CertificateDocument::new(
        Some(desc.to_string()),
        &analysis,
        &elements,
        cert,
    ))
}

impl Outcome for CertificateDocument {
    fn positive(&self) -> bool {
        self.certificate.is_yes()
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let name = self.descriptor.as_deref().unwrap_or("group");
        let _ = writeln!(s, "elements: {}", self.elements.join(" "));
        match &self.certificate {
            InvGenCertificate::Yes { witnesses } => {
                let _ = writeln!(s, "verdict: invariably generates {name}");
                for w in witnesses {
                    let _ = writeln!(
                        s,
                        "  maximal class {} (order {}, generated by {}): avoided by {}",
                        w.maximal_class,
                        w.maximal_order,
                        w.maximal_generators.join(" "),
                        self.elements[w.witness]
                    );
                }
            }
            InvGenCertificate::No {
                maximal_class,
                maximal_order,
                maximal_generators,
                conjugators,
            } => {
                let _ = writeln!(s, "verdict: does not invariably generate {name}");
                let _ = writeln!(
                    s,
                    "  maximal class {maximal_class} (order {maximal_order}, generated by {}) contains",
                    maximal_generators.join(" ")
                );
                for (e, g) in self.elements.iter().zip(conjugators) {
                    let _ = writeln!(s, "  {e} conjugated by {g}");
                }
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiReport {
    pub schema: String,
    pub descriptor: String,
    pub order: u64,
    pub value: usize,
    pub witness_classes: Vec<usize>,
    pub certificate: CertificateDocument,
}

pub fn di_command(descriptor: &str, budgets: &Budgets) -> anyhow::Result<DiReport> {
    let (desc, group) = resolve(descriptor)?;
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
    Ok(DiReport {
        schema: "invgen.di/1".into(),
        descriptor: desc.to_string(),
        order: group.order() as u64,
        value: di.value,
        witness_classes: di.witness,
        certificate: CertificateDocument::new(Some(desc.to_string()), &analysis, &elements, cert),
    })
}

impl Outcome for DiReport {
    fn text(&self) -> String {
        format!(
            "d_I({}) = {}\nwitness classes {:?}, representatives {}\n",
            self.descriptor,
            self.value,
            self.witness_classes,
            self.certificate.elements.join(" ")
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma42Report {
    #[serde(flatten)]
    pub document: PowerDocument,
    pub cross_check: Option<CrossCheckReport>,
}

pub fn lemma42_command(
    descriptor: &str,
    matrix_text: &str,
    cross_check: Option<usize>,
    seed: u64,
    budgets: &Budgets,
) -> anyhow::Result<Lemma42Report> {
    let (_, ctx) = power_context(descriptor, budgets)?;
    let matrix = GenMatrix::parse(&ctx, matrix_text).context("invalid matrix")?;
    let cert = lemma42_check(&ctx, &matrix)?;
    let cross_check = match cross_check {
        Some(trials) if matrix.cols() > 0 => Some(direct_power_cross_check(&ctx, &matrix, trials, seed)?),
        _ => None,
    };
    Ok(Lemma42Report {
        document: PowerDocument::new(&ctx, &matrix, cert),
        cross_check,
    })
}

impl Outcome for Lemma42Report {
    fn positive(&self) -> bool {
        self.document.certificate.is_yes() && self.cross_check.as_ref().is_none_or(|c| c.passed())
    }

    fn text(&self) -> String {
        let doc = &self.document;
        let name = doc.descriptor.as_deref().unwrap_or("T");
        let rows = doc.matrix.len();
        let cols = doc.matrix.first().map_or(0, |r| r.len());
        let mut s = String::new();
        match &doc.certificate {
            PowerCertificate::Yes { .. } => {
                let _ = writeln!(s, "verdict: the {rows} rows invariably generate {name}^{cols}");
            }
            PowerCertificate::ColumnFails { column, .. } => {
                let _ = writeln!(s, "verdict: no; column {column} does not invariably generate {name}");
            }
            PowerCertificate::ColumnsCollide {
                column,
                other,
                automorphism,
                ..
            } => {
                let _ = writeln!(
                    s,
                    "verdict: no; columns {column} and {other} have class vectors related by the automorphism with generator images {}",
                    automorphism.join(" ")
                );
            }
        }
        if let Some(c) = &self.cross_check {
            match &c.witness {
                None => {
                    let _ = writeln!(
                        s,
                        "cross-check: {} trials, {}",
                        c.trials,
                        if c.refutation.is_none() {
                            "no refutation"
                        } else {
                            "REFUTED"
                        }
                    );
                }
                Some(w) => {
                    let _ = writeln!(
                        s,
                        "cross-check: {} subgroup of order {} absorbs {}/{} rows",
                        w.kind, w.order, w.rows_absorbed, w.rows
                    );
                }
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MexactReport {
    pub schema: String,
    #[serde(flatten)]
    pub report: MTRReport,
}

pub fn mexact_command(descriptor: &str, r: usize, budgets: &Budgets) -> anyhow::Result<MexactReport> {
    let (_, ctx) = power_context(descriptor, budgets)?;
    Ok(MexactReport {
        schema: "invgen.mtr/1".into(),
        report: m_exact(&ctx, r, budgets)?,
    })
}

fn mtr_text(s: &mut String, m: &MTRReport) {
    let name = m.descriptor.as_deref().unwrap_or("T");
    let _ = writeln!(s, "m({name}, {}) = {}", m.r, m.m_exact);
    let _ = writeln!(s, "k = {}, |Out| = {}, |Aut| = {}", m.k, m.out, m.aut_order);
    let _ = writeln!(
        s,
        "bounds: {} < m <= {} ({})",
        m.lower,
        m.upper,
        if m.sandwich_holds { "hold" } else { "VIOLATED" }
    );
    let _ = writeln!(
        s,
        "class tuples: {} orbits of {} invariably generating vectors; element tuples: {} orbits of {}",
        m.class_tuple_count, m.surviving_class_vectors, m.element_orbit_count, m.surviving_tuples
    );
    let _ = writeln!(s, "orbits from the fixed-pair family: {}", m.proof_family_orbits);
    let _ = writeln!(
        s,
        "witness matrix ({} x {}): {}",
        m.r,
        m.m_exact,
        if m.witness_verified { "verified" } else { "REJECTED" }
    );
}

impl Outcome for MexactReport {
    fn positive(&self) -> bool {
        self.report.witness_verified
    }

    fn text(&self) -> String {
        let mut s = String::new();
        mtr_text(&mut s, &self.report);
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundsDocument {
    pub schema: String,
    pub holds: bool,
    #[serde(flatten)]
    pub report: BoundsReport,
}

pub fn bounds_command(descriptor: &str, r: usize, budgets: &Budgets) -> anyhow::Result<BoundsDocument> {
    let (desc, ctx) = power_context(descriptor, budgets)?;
    let q = match desc {
        GroupDescriptor::Psl2(q) => Some(q),
        _ => None,
    };
    let report = bounds_report(&ctx, r, budgets, q)?;
    Ok(BoundsDocument {
        schema: "invgen.bounds/1".into(),
        holds: report.holds(),
        report,
    })
}

impl Outcome for BoundsDocument {
    fn positive(&self) -> bool {
        self.holds
    }

    fn text(&self) -> String {
        let b = &self.report;
        let mut s = String::new();
        mtr_text(&mut s, &b.mtr);
        let _ = writeln!(s, "k/|Out| = {}", b.k_over_out);
        for t in &b.three_row {
            let _ = writeln!(
                s,
                "three rows for m = {}: {}",
                t.m,
                if t.verdict_yes {
                    "invariably generate"
                } else {
                    "REJECTED"
                }
            );
        }
        let _ = writeln!(s, "|Out| <= log2 |T|: {}", b.out_at_most_log2_order);
        if let Some(p) = &b.psl {
            let _ = writeln!(s, "k^2 / (|Out| q) = {} for q = {}", p.c, p.q);
        }
        let _ = writeln!(s, "overall: {}", if self.holds { "hold" } else { "FAILED" });
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verification {
    pub schema: String,
    pub document_schema: Option<String>,
    pub accepted: bool,
    pub reason: Option<String>,
}

/// Accepts a certificate document, a `di` or `lemma42` report, or any of
/// these wrapped in the CLI's JSON envelope.
pub fn verify_certificate(text: &str) -> anyhow::Result<Verification> {
    let mut value: Value = serde_json::from_str(text).context("certificate file is not JSON")?;
    if value.get("schema").and_then(Value::as_str) == Some(crate::ENVELOPE_SCHEMA) {
        value = value.get("result").cloned().unwrap_or(Value::Null);
    }
    let schema = value.get("schema").and_then(Value::as_str).map(str::to_owned);
    let outcome: Result<(), String> = match schema.as_deref() {
        Some(CERTIFICATE_SCHEMA) => check::<CertificateDocument>(value, |d| d.verify()),
        Some(POWER_CERTIFICATE_SCHEMA) => check::<PowerDocument>(value, |d| d.verify()),
        Some("invgen.di/1") => check::<DiReport>(value, |d| {
            if d.certificate.elements.len() != d.value {
                return Err(invgen::Error::CertificateRejected(
                    "witness size differs from d_I".into(),
                ));
            }
            d.certificate.verify()
        }),
        other => Err(format!("unrecognised document schema {other:?}")),
    };
    Ok(Verification {
        schema: "invgen.verification/1".into(),
        document_schema: schema,
        accepted: outcome.is_ok(),
        reason: outcome.err(),
    })
}

fn check<T: serde::de::DeserializeOwned>(
    value: Value,
    verify: impl FnOnce(&T) -> invgen::Result<()>,
) -> Result<(), String> {
    let doc: T = serde_json::from_value(value).map_err(|e| format!("malformed document: {e}"))?;
    verify(&doc).map_err(|e| e.to_string())
}

impl Outcome for Verification {
    fn positive(&self) -> bool {
        self.accepted
    }

    fn text(&self) -> String {
        match &self.reason {
            None => "certificate accepted\n".into(),
            Some(r) => format!("certificate rejected: {r}\n"),
        }
    }
}

pub fn suite_command(profile: Profile, seed: u64, budgets: &Budgets) -> anyhow::Result<SuiteReport> {
    Ok(run_suite(profile, seed, budgets)?)
}

impl Outcome for SuiteReport {
    fn positive(&self) -> bool {
        self.passed
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            let _ = writeln!(
                s,
                "criterion {:>2}: {} {} ({} checks, {} violations; {})",
                c.id,
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.checked,
                c.violations,
                c.detail
            );
        }
        let _ = writeln!(s, "suite: {}", if self.passed { "PASS" } else { "FAIL" });
        s
    }
}
