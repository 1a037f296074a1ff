//! Deciding invariable generation with certificates, and the invariable
//! generation number `d_I(G)`.
//!
//! For a finite group, `S` invariably generates `G` exactly when for every
//! maximal subgroup `M` some `s ∈ S` has no conjugate in `M`. Whether a class
//! meets `M` only depends on the conjugacy class of `M`, so one
//! representative per class of maximal subgroups suffices, and the verdict
//! only depends on the set of conjugacy classes met by `S`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::GroupJson;
use crate::error::{Error, Result};
use crate::group::{quotient, ElementTable, GroupHom, PermGroup};
use crate::mask::ElementMask;
use crate::perm::Permutation;
use crate::structure::{
    all_subgroups, conjugacy_classes, frattini, ConjClassTable, SubgroupLattice, DEFAULT_AUT_BUDGET,
    DEFAULT_LATTICE_BUDGET,
};

/// Size limits for the exhaustive computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub elements: u64,
    pub lattice: u64,
    pub aut: u64,
    pub tuples: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            elements: crate::group::DEFAULT_ELEMENT_CAP,
            lattice: DEFAULT_LATTICE_BUDGET,
            aut: DEFAULT_AUT_BUDGET,
            tuples: 10_000_000,
        }
    }
}

/// A group together with its class table, subgroup lattice, and the
/// incidence between conjugacy classes and classes of maximal subgroups.
#[derive(Clone, Debug)]
pub struct GroupAnalysis {
    group: PermGroup,
    table: Arc<ElementTable>,
    classes: ConjClassTable,
    lattice: SubgroupLattice,
    maximal: Vec<usize>,
    /// `meets[c][m]`: class `c` meets the `m`-th maximal representative.
    meets: Vec<Vec<bool>>,
}

impl GroupAnalysis {
    pub fn new(group: &PermGroup, budgets: &Budgets) -> Result<Self> {
        let table = group.table_arc(budgets.elements)?;
        let lattice = all_subgroups(group, budgets.lattice)?;
        let classes = conjugacy_classes(group, budgets.elements)?;
        let maximal: Vec<usize> = lattice.maximal_subgroups().iter().map(|r| r.id).collect();
        let meets = (0..classes.len())
            .map(|c| {
                maximal
                    .iter()
                    .map(|&m| class_meets_subgroup(&classes, c, &lattice.record(m).mask))
                    .collect()
            })
            .collect();
        Ok(GroupAnalysis {
            group: group.clone(),
            table,
            classes,
            lattice,
            maximal,
            meets,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn classes(&self) -> &ConjClassTable {
        &self.classes
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    /// Record ids of the maximal-class representatives, in the lattice's
    /// deterministic order.
    pub fn maximal_representatives(&self) -> &[usize] {
        &self.maximal
    }

    /// Rows are conjugacy classes, columns maximal-subgroup classes.
    pub fn incidence(&self) -> &[Vec<bool>] {
        &self.meets
    }

    pub fn frattini(&self) -> ElementMask {
        frattini(&self.lattice)
    }

    /// Whether a set of conjugacy classes invariably generates.
    pub fn classes_invariably_generate(&self, class_ids: &[usize]) -> bool {
        (0..self.maximal.len()).all(|m| class_ids.iter().any(|&c| !self.meets[c][m]))
    }

    /// Certificate for the given representatives of a set of classes.
    pub fn certify_classes(&self, class_ids: &[usize]) -> Result<InvGenCertificate> {
        let reps: Vec<Permutation> = class_ids
            .iter()
            .map(|&c| self.table.element(self.classes.class(c).representative).clone())
            .collect();
        invariably_generates(self, &reps)
    }

    fn maximal_generators(&self, m: usize) -> Vec<String> {
        let record = self.lattice.record(self.maximal[m]);
        let gens: Vec<String> = record
            .generators
            .iter()
            .map(|&g| self.table.element(g).to_string())
            .collect();
        if gens.is_empty() {
            vec!["()".into()]
        } else {
            gens
        }
    }
}

/// Whether class `class_id` meets `⋃_g H^g`, i.e. whether `H` contains an
/// element of the class.
pub fn class_meets_subgroup(classes: &ConjClassTable, class_id: usize, subgroup: &ElementMask) -> bool {
    !classes.class(class_id).mask.is_disjoint(subgroup)
}

/// One entry of a positive certificate: the element of `S` at `witness`
/// has no conjugate in the cited maximal subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceWitness {
    pub maximal_class: usize,
    pub maximal_order: usize,
    pub maximal_generators: Vec<String>,
    pub witness: usize,
    pub witness_class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum InvGenCertificate {
    Yes {
        witnesses: Vec<AvoidanceWitness>,
    },
    /// Every element of `S` has a conjugate in one maximal subgroup:
    /// `s_i^{conjugators[i]} ∈ M`.
    No {
        maximal_class: usize,
        maximal_order: usize,
        maximal_generators: Vec<String>,
        conjugators: Vec<String>,
    },
}

impl InvGenCertificate {
    pub fn is_yes(&self) -> bool {
        matches!(self, InvGenCertificate::Yes { .. })
    }

    /// Re-checks the certificate from scratch against `G` and `S`, without
    /// any lattice.
    ///
    /// A positive certificate is checked entry by entry: each cited subgroup
    /// is a proper subgroup and the whole class of the cited element avoids
    /// it. That the cited subgroups represent every class of maximal
    /// subgroups is taken from the certificate.
    pub fn verify(&self, group: &PermGroup, elements: &[Permutation]) -> Result<()> {
        let reject = |msg: String| Err(Error::CertificateRejected(msg));
        for s in elements {
            if !group.contains(s)? {
                return reject(format!("{s} is not in the group"));
            }
        }
        let subgroup = |gens: &[String]| -> Result<PermGroup> {
            let gens = gens
                .iter()
                .map(|g| Permutation::parse_cycles(g, group.degree()))
                .collect::<Result<Vec<_>>>()?;
            for g in &gens {
                if !group.contains(g)? {
                    return Err(Error::CertificateRejected(format!("generator {g} is not in the group")));
                }
            }
            let sub = PermGroup::new(group.degree(), gens)?;
            if sub.order() >= group.order() {
                return Err(Error::CertificateRejected("cited subgroup is not proper".into()));
            }
            Ok(sub)
        };
        match self {
            InvGenCertificate::Yes { witnesses } => {
                let mut seen = std::collections::HashSet::new();
                for w in witnesses {
                    if !seen.insert(w.maximal_class) {
                        return reject(format!("maximal class {} cited twice", w.maximal_class));
                    }
                    let m = subgroup(&w.maximal_generators)?;
                    if m.order() != w.maximal_order as u128 {
                        return reject(format!("maximal class {} has the wrong order", w.maximal_class));
                    }
                    let Some(s) = elements.get(w.witness) else {
                        return reject(format!("witness position {} out of range", w.witness));
                    };
                    if let Some(c) = conjugacy_class_of(group, s).into_iter().find(|c| m.chain().contains(c)) {
                        return reject(format!(
                            "conjugate {c} of witness {s} lies in maximal class {}",
                            w.maximal_class
                        ));
                    }
                }
                Ok(())
            }
            InvGenCertificate::No {
                maximal_generators,
                conjugators,
                ..
            } => {
                let m = subgroup(maximal_generators)?;
                if conjugators.len() != elements.len() {
                    return reject("one conjugator per element is required".into());
                }
                for (s, g) in elements.iter().zip(conjugators) {
                    let g = Permutation::parse_cycles(g, group.degree())?;
                    if !group.contains(&g)? {
                        return reject(format!("conjugator {g} is not in the group"));
                    }
                    let c = s.conjugate_by(&g);
                    if !m.chain().contains(&c) {
                        return reject(format!("{s}^{g} = {c} is not in the cited subgroup"));
                    }
                }
                Ok(())
            }
        }
    }
}

/// The conjugacy class of `s` by conjugating with the group's generators.
fn conjugacy_class_of(group: &PermGroup, s: &Permutation) -> Vec<Permutation> {
    let mut seen = std::collections::HashSet::new();
    seen.insert(s.clone());
    let mut out = vec![s.clone()];
    let mut idx = 0;
    while idx < out.len() {
        let x = out[idx].clone();
        for g in group.generators() {
            let y = x.conjugate_by(g);
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
        idx += 1;
    }
    out
}

/// Decides whether `elements` invariably generates the analysed group.
///
/// For each maximal class (in order) the first element of `S` whose class
/// avoids it is cited. On failure the first maximal class met by every class
/// of `S` is cited, with a conjugator for each element found by
/// breadth-first search over conjugation by the generators.
pub fn invariably_generates(analysis: &GroupAnalysis, elements: &[Permutation]) -> Result<InvGenCertificate> {
    let table = analysis.table();
    let class_ids = elements
        .iter()
        .map(|s| Ok(analysis.classes.class_of(table.try_index_of(s)?)))
        .collect::<Result<Vec<usize>>>()?;
    let mut witnesses = Vec::with_capacity(analysis.maximal.len());
    for m in 0..analysis.maximal.len() {
        let found = class_ids.iter().position(|&c| !analysis.meets[c][m]);
        match found {
            Some(pos) => witnesses.push(AvoidanceWitness {
                maximal_class: m,
                maximal_order: analysis.lattice.record(analysis.maximal[m]).order,
                maximal_generators: analysis.maximal_generators(m),
                witness: pos,
                witness_class: class_ids[pos],
            }),
            None => {
                let record = analysis.lattice.record(analysis.maximal[m]);
                let conjugators = elements
                    .iter()
                    .map(|s| {
                        let x = table.try_index_of(s)?;
                        let g = conjugator_into(analysis, x, &record.mask);
                        Ok(g.to_string())
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(InvGenCertificate::No {
                    maximal_class: m,
                    maximal_order: record.order,
                    maximal_generators: analysis.maximal_generators(m),
                    conjugators,
                });
            }
        }
    }
    Ok(InvGenCertificate::Yes { witnesses })
}

/// A `g` with `x^g` in `target`, by breadth-first search over conjugation
/// by the group's generators; the identity when `x` is already inside.
pub(crate) fn conjugator_into(analysis: &GroupAnalysis, x: usize, target: &ElementMask) -> Permutation {
    let table = analysis.table();
    let gens = analysis.group.generator_element_indices_with(table);
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([x]);
    parent.insert(x, (x, usize::MAX));
    while let Some(y) = queue.pop_front() {
        if target.contains(y) {
            let mut path = Vec::new();
            let mut cur = y;
            while cur != x {
                let (prev, g) = parent[&cur];
                path.push(g);
                cur = prev;
            }
            let mut conj = Permutation::identity(analysis.group.degree());
            for &g in path.iter().rev() {
                conj = conj.then(table.element(g));
            }
            return conj;
        }
        for &g in &gens {
            let z = table.conj(y, g);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(z) {
                e.insert((y, g));
                queue.push_back(z);
            }
        }
    }
    unreachable!("class was recorded as meeting the subgroup")
}

/// Whether some element of `S` acts without fixed points in the given
/// transitive action.
pub fn fixed_point_free_exists(action: &GroupHom, elements: &[Permutation]) -> Result<bool> {
    if !action.is_transitive() {
        return Err(Error::NotTransitive);
    }
    for s in elements {
        if action.image(s)?.is_fixed_point_free() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Tries random conjugates: for each trial draws `g(s)` uniformly for every
/// `s` and tests whether the `s^{g(s)}` generate `G`. Returns the conjugators
/// of the first failing trial.
pub fn sample_refute(
    group: &PermGroup,
    elements: &[Permutation],
    trials: usize,
    seed: u64,
) -> Option<Vec<Permutation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let conjugators: Vec<Permutation> = elements.iter().map(|_| group.random_element(&mut rng)).collect();
        let conjugates: Vec<Permutation> = elements
            .iter()
            .zip(&conjugators)
            .map(|(s, g)| s.conjugate_by(g))
            .collect();
        let generated = if conjugates.is_empty() {
            group.is_trivial()
        } else {
            group.generated_by(&conjugates)
        };
        if !generated {
            return Some(conjugators);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DIResult {
    pub value: usize,
    /// Conjugacy class ids whose representatives invariably generate.
    pub witness: Vec<usize>,
    /// `incidence[c][m]`: class `c` meets maximal class `m`.
    pub incidence: Vec<Vec<bool>>,
}

/// Exact `d_I(G)`: the fewest conjugacy classes such that every maximal
/// class is avoided by one of them.
///
/// Subsets are tried in increasing size and, within a size, in
/// lexicographic order of class ids, so the witness is the lexicographically
/// least minimum set.
pub fn compute_di(analysis: &GroupAnalysis) -> DIResult {
    let t = analysis.maximal.len();
    let words = t.div_ceil(64).max(1);
    let cover: Vec<Vec<u64>> = analysis
        .meets
        .iter()
        .map(|row| {
            let mut bits = vec![0u64; words];
            for (m, &meets) in row.iter().enumerate() {
                if !meets {
                    bits[m / 64] |= 1 << (m % 64);
                }
            }
            bits
        })
        .collect();
    let mut full = vec![0u64; words];
    for m in 0..t {
        full[m / 64] |= 1 << (m % 64);
    }
    // Classes with the same avoidance set are interchangeable; keep the
    // lowest id of each.
    let mut useful: Vec<usize> = Vec::new();
    for c in 0..cover.len() {
        if cover[c].iter().all(|&w| w == 0) {
            continue;
        }
        if useful.iter().any(|&u| cover[u] == cover[c]) {
            continue;
        }
        useful.push(c);
    }
    let mut chosen = Vec::new();
    let mut k = 0;
    loop {
        let start = vec![0u64; words];
        if search_cover(&cover, &useful, &full, k, 0, &start, &mut chosen) {
            break;
        }
        k += 1;
        assert!(
            k <= useful.len(),
            "the classes of all elements always invariably generate"
        );
    }
    DIResult {
        value: k,
        witness: chosen,
        incidence: analysis.meets.clone(),
    }
}

fn search_cover(
    cover: &[Vec<u64>],
    useful: &[usize],
    full: &[u64],
    need: usize,
    from: usize,
    acc: &[u64],
    chosen: &mut Vec<usize>,
) -> bool {
    if need == 0 {
        return acc == full;
    }
    for i in from..useful.len() {
        if useful.len() - i < need {
            break;
        }
        let c = useful[i];
        let next: Vec<u64> = acc.iter().zip(&cover[c]).map(|(a, b)| a | b).collect();
        chosen.push(c);
        if search_cover(cover, useful, full, need - 1, i + 1, &next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// `d_I` of a group, analysing it first.
pub fn di_of(group: &PermGroup, budgets: &Budgets) -> Result<DIResult> {
    Ok(compute_di(&GroupAnalysis::new(group, budgets)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrattiniReport {
    pub group_order: u64,
    pub frattini_order: usize,
    pub quotient_order: u64,
    pub di_group: DIResult,
    pub di_quotient: DIResult,
    pub holds: bool,
}

/// Computes `d_I(G)` and `d_I(G/Φ(G))` independently.
pub fn check_frattini_invariance(group: &PermGroup, budgets: &Budgets) -> Result<FrattiniReport> {
    let analysis = GroupAnalysis::new(group, budgets)?;
    let phi = analysis.frattini();
    let q = quotient(group, &phi, budgets.elements)?;
    let di_group = compute_di(&analysis);
    let di_quotient = di_of(&q, budgets)?;
    Ok(FrattiniReport {
        group_order: group.order() as u64,
        frattini_order: phi.count(),
        quotient_order: q.order() as u64,
        holds: di_group.value == di_quotient.value,
        di_group,
        di_quotient,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub group_order: u64,
    pub normal_order: usize,
    pub di_group: usize,
    pub di_normal: usize,
    pub di_quotient: usize,
    pub holds: bool,
}

/// Checks `d_I(G) <= d_I(N) + d_I(G/N)`.
pub fn check_subadditivity(group: &PermGroup, normal: &ElementMask, budgets: &Budgets) -> Result<SubadditivityReport> {
    let table = group.enumerate_elements(budgets.elements)?;
    if !table.is_subgroup(normal) {
        return Err(Error::NotSubgroup("normal operand".into()));
    }
    if !group.is_normal_mask(normal)? {
        return Err(Error::NotNormal);
    }
    let di_group = di_of(group, budgets)?.value;
    let n_group = group.subgroup_from_mask(normal)?;
    let di_normal = di_of(&n_group, budgets)?.value;
    let di_quotient = di_of(&quotient(group, normal, budgets.elements)?, budgets)?.value;
    Ok(SubadditivityReport {
        group_order: group.order() as u64,
        normal_order: normal.count(),
        di_group,
        di_normal,
        di_quotient,
        holds: di_group <= di_normal + di_quotient,
    })
}

/// A certificate bundled with everything needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema: String,
    pub descriptor: Option<String>,
    pub group: GroupJson,
    pub elements: Vec<String>,
    /// Number of classes of maximal subgroups the certificate must cover.
    pub maximal_classes: usize,
    pub certificate: InvGenCertificate,
}

pub const CERTIFICATE_SCHEMA: &str = "invgen.certificate/1";

impl CertificateDocument {
    pub fn new(
        descriptor: Option<String>,
        analysis: &GroupAnalysis,
        elements: &[Permutation],
        certificate: InvGenCertificate,
    ) -> Self {
        CertificateDocument {
            schema: CERTIFICATE_SCHEMA.into(),
            descriptor,
            group: GroupJson::from_group(analysis.group()),
            elements: elements.iter().map(|e| e.to_string()).collect(),
            maximal_classes: analysis.maximal_representatives().len(),
            certificate,
        }
    }

    /// Standalone verification from the document alone.
    pub fn verify(&self) -> Result<()> {
        if self.schema != CERTIFICATE_SCHEMA {
            return Err(Error::CertificateRejected(format!("unknown schema {}", self.schema)));
        }
        let group = self.group.to_group()?;
        let elements = self
            .elements
            .iter()
            .map(|e| Permutation::parse_cycles(e, group.degree()))
            .collect::<Result<Vec<_>>>()?;
        if let InvGenCertificate::Yes { witnesses } = &self.certificate {
            if witnesses.len() != self.maximal_classes {
                return Err(Error::CertificateRejected(format!(
                    "{} witnesses for {} maximal classes",
                    witnesses.len(),
                    self.maximal_classes
                )));
            }
        }
        self.certificate.verify(&group, &elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_descriptor;
    use crate::group::coset_action;

    fn analysis(desc: &str) -> GroupAnalysis {
        let g = parse_descriptor(desc).unwrap().resolve().unwrap();
        GroupAnalysis::new(&g, &Budgets::default()).unwrap()
    }

    fn perm(a: &GroupAnalysis, s: &str) -> Permutation {
        Permutation::parse_cycles(s, a.group().degree()).unwrap()
    }

    fn class_of(a: &GroupAnalysis, s: &str) -> usize {
        a.classes().class_of(a.table().index_of(&perm(a, s)).unwrap())
    }

    fn maximal_of_order(a: &GroupAnalysis, order: usize) -> ElementMask {
        let id = *a
            .maximal_representatives()
            .iter()
            .find(|&&m| a.lattice().record(m).order == order)
            .unwrap();
        a.lattice().record(id).mask.clone()
    }

    #[test]
    fn a5_class_incidence() {
        let a = analysis("A5");
        let a4 = maximal_of_order(&a, 12);
        let d10 = maximal_of_order(&a, 10);
        assert!(!class_meets_subgroup(a.classes(), class_of(&a, "(1,2,3,4,5)"), &a4));
        assert!(class_meets_subgroup(a.classes(), class_of(&a, "(1,2,3)"), &a4));
        assert!(class_meets_subgroup(a.classes(), class_of(&a, "(1,2)(3,4)"), &d10));
        // the incidence matrix by direct element scan
        for (c, row) in a.incidence().iter().enumerate() {
            for (m, &meets) in row.iter().enumerate() {
                let mask = &a.lattice().record(a.maximal_representatives()[m]).mask;
                let direct = mask.iter().any(|x| a.classes().class_of(x) == c);
                assert_eq!(meets, direct);
            }
        }
    }

    #[test]
    fn a5_pairs_and_singletons() {
        let a = analysis("A5");
        let s = [perm(&a, "(1,2,3,4,5)"), perm(&a, "(1,2,3)")];
        let cert = invariably_generates(&a, &s).unwrap();
        assert!(cert.is_yes());
        cert.verify(a.group(), &s).unwrap();

        let single = [perm(&a, "(1,2,3,4,5)")];
        let cert = invariably_generates(&a, &single).unwrap();
        match &cert {
            InvGenCertificate::No { maximal_order, .. } => assert_eq!(*maximal_order, 10),
            _ => panic!("a single element never invariably generates A5"),
        }
        cert.verify(a.group(), &single).unwrap();
    }

    #[test]
    fn cyclic_generator() {
        let a = analysis("C6");
        let s = [perm(&a, "(1,2,3,4,5,6)")];
        assert!(invariably_generates(&a, &s).unwrap().is_yes());
        let s = [perm(&a, "(1,3,5)(2,4,6)")];
        assert!(!invariably_generates(&a, &s).unwrap().is_yes());
    }

    #[test]
    fn identity_never_witnesses() {
        let a = analysis("S4");
        let s = [perm(&a, "()"), perm(&a, "(1,2,3,4)"), perm(&a, "(1,2,3)")];
        match invariably_generates(&a, &s).unwrap() {
            InvGenCertificate::Yes { witnesses } => assert!(witnesses.iter().all(|w| w.witness != 0)),
            _ => panic!(),
        }
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let a = analysis("A5");
        let s = [perm(&a, "(1,2,3,4,5)")];
        let cert = invariably_generates(&a, &s).unwrap();
        let InvGenCertificate::No {
            maximal_class,
            maximal_order,
            maximal_generators,
            conjugators,
        } = cert
        else {
            panic!()
        };
        let bad = InvGenCertificate::No {
            maximal_class,
            maximal_order,
            maximal_generators: maximal_generators.clone(),
            conjugators: vec!["(1,2,3)".into()],
        };
        assert!(bad.verify(a.group(), &s).is_err());
        let whole = InvGenCertificate::No {
            maximal_class,
            maximal_order,
            maximal_generators: vec!["(1,2,3)".into(), "(3,4,5)".into()],
            conjugators,
        };
        assert!(whole.verify(a.group(), &s).is_err());

        // a positive claim for a single 5-cycle cannot be backed
        let lie = InvGenCertificate::Yes {
            witnesses: vec![AvoidanceWitness {
                maximal_class: 1,
                maximal_order,
                maximal_generators,
                witness: 0,
                witness_class: 0,
            }],
        };
        assert!(lie.verify(a.group(), &s).is_err());
    }

    #[test]
    fn fixed_point_free_elements() {
        let s3 = parse_descriptor("S3").unwrap().resolve().unwrap();
        let t = s3.enumerate_elements(100).unwrap();
        let c2 = t.closure(&[t.index_of(&Permutation::parse_cycles("(1,2)", 3).unwrap()).unwrap()]);
        let action = coset_action(&s3, &c2, 100).unwrap();
        assert!(fixed_point_free_exists(&action, &[Permutation::parse_cycles("(1,2,3)", 3).unwrap()]).unwrap());
        assert!(!fixed_point_free_exists(&action, &[Permutation::identity(3)]).unwrap());

        let a = analysis("A5");
        let a4 = maximal_of_order(&a, 12);
        let action = coset_action(a.group(), &a4, 100).unwrap();
        assert_eq!(action.target().degree(), 5);
        let five_cycles: Vec<Permutation> = a
            .table()
            .elements()
            .iter()
            .filter(|p| p.order() == 5)
            .cloned()
            .collect();
        assert_eq!(five_cycles.len(), 24);
        assert!(fixed_point_free_exists(&action, &five_cycles).unwrap());
    }

    #[test]
    fn maximal_and_coset_formulations_agree() {
        for desc in ["A5", "S4", "D10", "Q8", "A4"] {
            let a = analysis(desc);
            for (m, &rid) in a.maximal_representatives().iter().enumerate() {
                let action = coset_action(a.group(), &a.lattice().record(rid).mask, 1000).unwrap();
                for (c, class) in a.classes().classes().iter().enumerate() {
                    let fpf = action.image_of_index(class.representative).is_fixed_point_free();
                    assert_eq!(!a.incidence()[c][m], fpf, "{desc} class {c} maximal {m}");
                }
            }
        }
    }

    #[test]
    fn di_values() {
        let a5 = analysis("A5");
        let r = compute_di(&a5);
        assert_eq!(r.value, 2);
        assert!(a5.certify_classes(&r.witness).unwrap().is_yes());
        assert_eq!(compute_di(&analysis("C2^2")).value, 2);
        assert_eq!(compute_di(&analysis("C2^3")).value, 3);
        assert_eq!(compute_di(&analysis("C12")).value, 1);
        assert_eq!(compute_di(&analysis("C1")).value, 0);

        let s4 = analysis("S4");
        let r = compute_di(&s4);
        assert_eq!(r.value, 2);
        assert_eq!(r.incidence.len(), 5);
        assert_eq!(r.incidence[0].len(), 3);
        let mut orders: Vec<u64> = r
            .witness
            .iter()
            .map(|&c| s4.table().element(s4.classes().class(c).representative).order())
            .collect();
        orders.sort();
        assert_eq!(orders, vec![3, 4]);
    }

    #[test]
    fn di_minimality_by_independent_scan() {
        for desc in ["S4", "D8", "Q8", "A4", "C2^3", "S3^2", "D12"] {
            let a = analysis(desc);
            let r = compute_di(&a);
            let k = a.classes().len();
            // all subsets of size value-1
            if r.value > 0 {
                for bits in 0u32..(1 << k) {
                    if bits.count_ones() as usize == r.value - 1 {
                        let set: Vec<usize> = (0..k).filter(|i| bits >> i & 1 == 1).collect();
                        assert!(!a.classes_invariably_generate(&set), "{desc}");
                    }
                }
            }
            assert!(a.classes_invariably_generate(&r.witness));
        }
    }

    #[test]
    fn frattini_invariance_examples() {
        let b = Budgets::default();
        let c4 = parse_descriptor("C4").unwrap().resolve().unwrap();
        let r = check_frattini_invariance(&c4, &b).unwrap();
        assert_eq!((r.di_group.value, r.di_quotient.value, r.frattini_order), (1, 1, 2));
        let q8 = parse_descriptor("Q8").unwrap().resolve().unwrap();
        let r = check_frattini_invariance(&q8, &b).unwrap();
        assert_eq!((r.di_group.value, r.di_quotient.value, r.quotient_order), (2, 2, 4));
        let s4 = parse_descriptor("S4").unwrap().resolve().unwrap();
        let r = check_frattini_invariance(&s4, &b).unwrap();
        assert_eq!(r.frattini_order, 1);
        assert!(r.holds);
    }

    #[test]
    fn subadditivity_examples() {
        let b = Budgets::default();
        let s4 = parse_descriptor("S4").unwrap().resolve().unwrap();
        let t = s4.enumerate_elements(100).unwrap();
        let a4 = ElementMask::from_indices(24, (0..24).filter(|&i| t.element(i).is_even()));
        let r = check_subadditivity(&s4, &a4, &b).unwrap();
        assert_eq!((r.di_group, r.di_normal, r.di_quotient), (2, 2, 1));
        let r = check_subadditivity(&s4, &ElementMask::full(24), &b).unwrap();
        assert_eq!((r.di_group, r.di_normal, r.di_quotient), (2, 2, 0));

        let c6 = parse_descriptor("C6").unwrap().resolve().unwrap();
        let t = c6.enumerate_elements(100).unwrap();
        let c3 = t.closure(&[t
            .index_of(&Permutation::parse_cycles("(1,3,5)(2,4,6)", 6).unwrap())
            .unwrap()]);
        let r = check_subadditivity(&c6, &c3, &b).unwrap();
        assert_eq!((r.di_group, r.di_normal, r.di_quotient), (1, 1, 1));
        let trivial = t.closure(&[]);
        assert!(check_subadditivity(&c6, &trivial, &b).unwrap().holds);
    }

    #[test]
    fn sampling_soundness_and_determinism() {
        let a = analysis("A5");
        let s = [perm(&a, "(1,2,3,4,5)"), perm(&a, "(1,2,3)")];
        assert!(sample_refute(a.group(), &s, 200, 7).is_none());
        let single = [perm(&a, "(1,2,3,4,5)")];
        let c1 = sample_refute(a.group(), &single, 100, 7).expect("one element never generates A5");
        let c2 = sample_refute(a.group(), &single, 100, 7).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn verdict_is_conjugation_invariant() {
        for desc in ["S4", "A5", "D10"] {
            let a = analysis(desc);
            let t = a.table();
            let n = t.len();
            for x in 0..n {
                for y in (x..n).step_by(3) {
                    let base = invariably_generates(&a, &[t.element(x).clone(), t.element(y).clone()])
                        .unwrap()
                        .is_yes();
                    for g in (0..n).step_by(5) {
                        let conj = t.element(t.conj(y, g)).clone();
                        let v = invariably_generates(&a, &[t.element(x).clone(), conj])
                            .unwrap()
                            .is_yes();
                        assert_eq!(base, v);
                    }
                }
            }
        }
    }

    #[test]
    fn document_round_trip_and_verify() {
        let a = analysis("A5");
        let s = [perm(&a, "(1,2,3,4,5)"), perm(&a, "(1,2,3)")];
        let doc = CertificateDocument::new(Some("A5".into()), &a, &s, invariably_generates(&a, &s).unwrap());
        let text = serde_json::to_string(&doc).unwrap();
        let back: CertificateDocument = serde_json::from_str(&text).unwrap();
        back.verify().unwrap();
        let mut truncated = back.clone();
        if let InvGenCertificate::Yes { witnesses } = &mut truncated.certificate {
            witnesses.pop();
        }
        assert!(truncated.verify().is_err());
    }
}
