//! Invariable generation of direct powers `T^m` of a nonabelian simple
//! group `T`.
//!
//! A sequence of `r` elements of `T^m` is written as an `r × m` matrix whose
//! row `i` is the `i`-th element and whose column `j` lists the `j`-th
//! coordinates. The rows invariably generate `T^m` exactly when
//!
//! * (a) every column invariably generates `T`, and
//! * (b) no automorphism of `T` maps the class vector of one column onto the
//!   class vector of another, i.e. the columns' class vectors lie in distinct
//!   orbits of `Out(T)` acting on classes.
//!
//! Condition (b) is about classes rather than elements because each row may
//! be conjugated independently in every coordinate: two columns with class
//! vectors related by `φ` can always be conjugated into the twisted diagonal
//! `{x_{j'} = φ(x_j)}`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::catalog::GroupJson;
use crate::error::{Error, Result};
use crate::group::{direct_power, PermGroup};
use crate::invgen::{conjugator_into, invariably_generates, sample_refute, Budgets, GroupAnalysis, InvGenCertificate};
use crate::mask::ElementMask;
use crate::perm::Permutation;
use crate::structure::{automorphism_group, tuple_orbit_canonical, AutGroup};

/// A nonabelian simple group with everything the power criteria need.
#[derive(Clone, Debug)]
pub struct PowerContext {
    analysis: GroupAnalysis,
    aut: AutGroup,
    /// `aut_class_perms[a][c]`: class of the image of class `c` under the
    /// `a`-th automorphism.
    aut_class_perms: Vec<Vec<usize>>,
    /// Distinct class permutations, i.e. the action of `Out(T)` on classes.
    out_action: Vec<Vec<usize>>,
    generator_indices: Vec<usize>,
    label: Option<String>,
}

impl PowerContext {
    pub fn new(group: &PermGroup, budgets: &Budgets) -> Result<Self> {
        if !crate::catalog::is_simple(group)? {
            return Err(Error::NotSimple(format!(
                "group of order {} is not nonabelian simple",
                group.order()
            )));
        }
        let analysis = GroupAnalysis::new(group, budgets)?;
        let aut = automorphism_group(group, analysis.classes(), budgets.aut)?;
        let aut_class_perms = (0..aut.order())
            .map(|a| aut.class_permutation(a, analysis.classes()))
            .collect();
        let out_action = aut.class_action(analysis.classes());
        let generator_indices = group.generator_element_indices_with(analysis.table());
        Ok(PowerContext {
            analysis,
            aut,
            aut_class_perms,
            out_action,
            generator_indices,
            label: None,
        })
    }

    /// Attaches a name (usually the group descriptor) used in reports.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn group(&self) -> &PermGroup {
        self.analysis.group()
    }

    pub fn analysis(&self) -> &GroupAnalysis {
        &self.analysis
    }

    pub fn aut(&self) -> &AutGroup {
        &self.aut
    }

    /// Number of conjugacy classes `k(T)`.
    pub fn k(&self) -> usize {
        self.analysis.classes().len()
    }

    pub fn out_order(&self) -> usize {
        self.aut.out_order()
    }

    pub fn out_action(&self) -> &[Vec<usize>] {
        &self.out_action
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.analysis.classes().class_of(element)
    }

    /// Least image of a class vector under `Out(T)`.
    pub fn canonical_class_vector(&self, classes: &[usize]) -> Vec<usize> {
        self.out_action
            .iter()
            .map(|perm| classes.iter().map(|&c| perm[c]).collect::<Vec<_>>())
            .min()
            .unwrap_or_else(|| classes.to_vec())
    }

    /// Orbits of `Out(T)` on classes, each sorted, ordered by least member.
    pub fn class_orbits(&self) -> Vec<Vec<usize>> {
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut seen = vec![false; self.k()];
        for c in 0..self.k() {
            if seen[c] {
                continue;
            }
            let mut orbit: Vec<usize> = self.out_action.iter().map(|p| p[c]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &d in &orbit {
                seen[d] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    fn element(&self, index: usize) -> &Permutation {
        self.analysis.table().element(index)
    }

    fn representative(&self, class_id: usize) -> usize {
        self.analysis.classes().class(class_id).representative
    }
}

/// `r × m` matrix of element indices of `T`; row `i` is an element of `T^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMatrix {
    cols: usize,
    entries: Vec<Vec<usize>>,
}

impl GenMatrix {
    pub fn new(ctx: &PowerContext, cols: usize, entries: Vec<Vec<usize>>) -> Result<Self> {
        let n = ctx.analysis.table().len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Consistency(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAnElement(format!("element index {bad}")));
            }
        }
        Ok(GenMatrix { cols, entries })
    }

    pub fn from_permutations(ctx: &PowerContext, rows: &[Vec<Permutation>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|p| ctx.analysis.table().try_index_of(p)).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?;
        GenMatrix::new(ctx, cols, entries)
    }

    /// One row per non-empty line, entries in cycle notation separated by
    /// `;`. Lines starting with `#` are ignored.
    pub fn parse(ctx: &PowerContext, text: &str) -> Result<Self> {
        let degree = ctx.group().degree();
        let mut rows: Vec<Vec<Permutation>> = Vec::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let content = line.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let row = content
                .split(';')
                .map(|entry| {
                    Permutation::parse_cycles(entry.trim(), degree).map_err(|e| match e {
                        Error::Parse { position, message } => Error::Parse {
                            position: start + position,
                            message,
                        },
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::Parse {
                        position: start,
                        message: format!("row has {} entries, expected {}", row.len(), first.len()),
                    });
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                position: 0,
                message: "matrix has no rows".into(),
            });
        }
        GenMatrix::from_permutations(ctx, &rows)
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> usize {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        self.entries.iter().map(|row| row[j]).collect()
    }

    pub fn class_vector(&self, ctx: &PowerContext, j: usize) -> Vec<usize> {
        self.entries.iter().map(|row| ctx.class_of(row[j])).collect()
    }

    pub fn permutations(&self, ctx: &PowerContext) -> Vec<Vec<Permutation>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|&x| ctx.element(x).clone()).collect())
            .collect()
    }

    /// Entries in cycle notation, row by row.
    pub fn to_cycle_rows(&self, ctx: &PowerContext) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|&x| ctx.element(x).to_string()).collect())
            .collect()
    }

    /// The text format accepted by [`parse`](Self::parse).
    pub fn to_text(&self, ctx: &PowerContext) -> String {
        self.to_cycle_rows(ctx)
            .iter()
            .map(|row| row.join("; ") + "\n")
            .collect()
    }

    pub fn permute_rows(&self, order: &[usize]) -> GenMatrix {
        GenMatrix {
            cols: self.cols,
            entries: order.iter().map(|&i| self.entries[i].clone()).collect(),
        }
    }

    pub fn permute_columns(&self, order: &[usize]) -> GenMatrix {
        GenMatrix {
            cols: order.len(),
            entries: self
                .entries
                .iter()
                .map(|row| order.iter().map(|&j| row[j]).collect())
                .collect(),
        }
    }

    /// Applies the `a`-th automorphism to every entry of column `j`.
    pub fn apply_automorphism(&self, ctx: &PowerContext, j: usize, a: usize) -> GenMatrix {
        let map = &ctx.aut.automorphisms()[a];
        let mut out = self.clone();
        for row in &mut out.entries {
            row[j] = map[row[j]] as usize;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PowerCertificate {
    /// Every column invariably generates `T` and the columns' canonical
    /// class vectors are pairwise distinct.
    Yes {
        columns: Vec<InvGenCertificate>,
        canonical_class_vectors: Vec<Vec<usize>>,
    },
    /// Condition (a) fails: the entries of `column` do not invariably
    /// generate `T`.
    ColumnFails {
        column: usize,
        certificate: InvGenCertificate,
    },
    /// Condition (b) fails: `automorphism` (images of the generators of `T`)
    /// maps row `i` of `column` to a conjugate of row `i` of `other`:
    /// `φ(a_{i,column}) = a_{i,other}^{conjugators[i]}`.
    ColumnsCollide {
        column: usize,
        other: usize,
        automorphism: Vec<String>,
        conjugators: Vec<String>,
    },
}

impl PowerCertificate {
    pub fn is_yes(&self) -> bool {
        matches!(self, PowerCertificate::Yes { .. })
    }

    /// Re-checks the certificate against `T` and the matrix given as
    /// permutations, without automorphism or lattice data.
    pub fn verify(&self, t: &PermGroup, matrix: &[Vec<Permutation>]) -> Result<()> {
        let reject = |msg: String| Err(Error::CertificateRejected(msg));
        let cols = matrix.first().map_or(0, |r| r.len());
        if matrix.iter().any(|r| r.len() != cols) {
            return reject("ragged matrix".into());
        }
        let column = |j: usize| -> Vec<Permutation> { matrix.iter().map(|r| r[j].clone()).collect() };
        match self {
            PowerCertificate::Yes {
                columns,
                canonical_class_vectors,
            } => {
                if columns.len() != cols || canonical_class_vectors.len() != cols {
                    return reject("one column certificate per column expected".into());
                }
                for (j, cert) in columns.iter().enumerate() {
                    if !cert.is_yes() {
                        return reject(format!("column {j} certificate is negative"));
                    }
                    cert.verify(t, &column(j))?;
                }
                let distinct: BTreeSet<&Vec<usize>> = canonical_class_vectors.iter().collect();
                if distinct.len() != cols {
                    return reject("canonical class vectors are not pairwise distinct".into());
                }
                Ok(())
            }
            PowerCertificate::ColumnFails { column: j, certificate } => {
                if *j >= cols {
                    return reject(format!("column {j} out of range"));
                }
                if certificate.is_yes() {
                    return reject("column certificate is positive".into());
                }
                certificate.verify(t, &column(*j))
            }
            PowerCertificate::ColumnsCollide {
                column: j,
                other: j2,
                automorphism,
                conjugators,
            } => {
                if *j >= cols || *j2 >= cols || j == j2 {
                    return reject("invalid column pair".into());
                }
                if conjugators.len() != matrix.len() {
                    return reject("one conjugator per row expected".into());
                }
                let n = t.degree();
                let images = automorphism
                    .iter()
                    .map(|g| Permutation::parse_cycles(g, n))
                    .collect::<Result<Vec<_>>>()?;
                if images.len() != t.generators().len() {
                    return reject("one image per generator expected".into());
                }
                for img in &images {
                    if !t.contains(img)? {
                        return reject(format!("image {img} is not in the group"));
                    }
                }
                // The graph {(x, φ(x))} is a subgroup of order |T| exactly
                // when the generator assignment extends to a homomorphism;
                // images generating T make it an automorphism.
                let graph_gens: Vec<Permutation> =
                    t.generators().iter().zip(&images).map(|(g, h)| pair(g, h)).collect();
                let graph = PermGroup::new(2 * n, graph_gens)?;
                if graph.order() != t.order() || PermGroup::new(n, images)?.order() != t.order() {
                    return reject("generator images do not define an automorphism".into());
                }
                for (i, row) in matrix.iter().enumerate() {
                    let y = Permutation::parse_cycles(&conjugators[i], n)?;
                    if !t.contains(&y)? {
                        return reject(format!("conjugator {y} is not in the group"));
                    }
                    if !graph.contains(&pair(&row[*j], &row[*j2].conjugate_by(&y)))? {
                        return reject(format!("row {i} is not mapped onto a conjugate"));
                    }
                }
                Ok(())
            }
        }
    }
}

pub const POWER_CERTIFICATE_SCHEMA: &str = "invgen.power-certificate/1";

/// A [`PowerCertificate`] bundled with `T` and the matrix it speaks about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDocument {
    pub schema: String,
    pub descriptor: Option<String>,
    pub group: GroupJson,
    pub matrix: Vec<Vec<String>>,
    pub certificate: PowerCertificate,
}

impl PowerDocument {
    pub fn new(ctx: &PowerContext, matrix: &GenMatrix, certificate: PowerCertificate) -> Self {
        PowerDocument {
            schema: POWER_CERTIFICATE_SCHEMA.into(),
            descriptor: ctx.label.clone(),
            group: GroupJson::from_group(ctx.group()),
            matrix: matrix.to_cycle_rows(ctx),
            certificate,
        }
    }

    pub fn verify(&self) -> Result<()> {
        if self.schema != POWER_CERTIFICATE_SCHEMA {
            return Err(Error::CertificateRejected(format!("unknown schema {}", self.schema)));
        }
        let group = self.group.to_group()?;
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| Permutation::parse_cycles(e, group.degree()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for row in &matrix {
            for e in row {
                if !group.contains(e)? {
                    return Err(Error::CertificateRejected(format!("{e} is not in the group")));
                }
            }
        }
        self.certificate.verify(&group, &matrix)
    }
}

/// `(a, b)` acting on two blocks of points.
fn pair(a: &Permutation, b: &Permutation) -> Permutation {
    let n = a.degree() as u32;
    let images = a
        .images()
        .iter()
        .copied()
        .chain(b.images().iter().map(|&x| x + n))
        .collect();
    Permutation::from_images(images).expect("disjoint blocks")
}

/// Decides whether the rows of `a` invariably generate `T^m`.
///
/// Columns are checked in order for (a); then column pairs `(j, j')` with
/// `j < j'` in lexicographic order for (b), citing the first automorphism
/// (in the sorted automorphism list, identity first) relating their class
/// vectors.
pub fn lemma42_check(ctx: &PowerContext, a: &GenMatrix) -> Result<PowerCertificate> {
    let mut columns = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let elements: Vec<Permutation> = a.column(j).iter().map(|&x| ctx.element(x).clone()).collect();
        let cert = invariably_generates(&ctx.analysis, &elements)?;
        if !cert.is_yes() {
            return Ok(PowerCertificate::ColumnFails {
                column: j,
                certificate: cert,
            });
        }
        columns.push(cert);
    }
    let vectors: Vec<Vec<usize>> = (0..a.cols()).map(|j| a.class_vector(ctx, j)).collect();
    let canonical: Vec<Vec<usize>> = vectors.iter().map(|v| ctx.canonical_class_vector(v)).collect();
    let mut first_seen: HashMap<&Vec<usize>, usize> = HashMap::new();
    for (j2, canon) in canonical.iter().enumerate() {
        if let Some(&j) = first_seen.get(canon) {
            return Ok(collision(ctx, a, j, j2, &vectors));
        }
        first_seen.insert(canon, j2);
    }
    Ok(PowerCertificate::Yes {
        columns,
        canonical_class_vectors: canonical,
    })
}

fn collision(ctx: &PowerContext, a: &GenMatrix, j: usize, j2: usize, vectors: &[Vec<usize>]) -> PowerCertificate {
    let phi = ctx
        .aut_class_perms
        .iter()
        .position(|perm| vectors[j].iter().zip(&vectors[j2]).all(|(&c, &d)| perm[c] == d))
        .expect("equal canonical forms are related by an automorphism");
    let map = &ctx.aut.automorphisms()[phi];
    let n = ctx.analysis.table().len();
    let conjugators = (0..a.rows())
        .map(|i| {
            let target = ElementMask::from_indices(n, [map[a.entry(i, j)] as usize]);
            conjugator_into(&ctx.analysis, a.entry(i, j2), &target).to_string()
        })
        .collect();
    let automorphism = ctx
        .generator_indices
        .iter()
        .map(|&g| ctx.element(map[g] as usize).to_string())
        .collect();
    PowerCertificate::ColumnsCollide {
        column: j,
        other: j2,
        automorphism,
        conjugators,
    }
}

/// Outcome of checking a verdict directly inside `T^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub verdict_yes: bool,
    pub trials: usize,
    pub seed: u64,
    /// For a positive verdict: conjugators (rows of `T^m` elements) of a
    /// sampled choice that failed to generate, if any was found.
    pub refutation: Option<Vec<String>>,
    pub witness: Option<WitnessCheck>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        if self.verdict_yes {
            self.refutation.is_none()
        } else {
            self.witness.as_ref().is_some_and(|w| w.passed())
        }
    }
}

/// A proper subgroup of `T^m` built from a negative certificate, and how
/// many rows have a conjugate inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    /// `lifted_maximal` or `twisted_diagonal`.
    pub kind: String,
    pub order: u64,
    pub power_order: u64,
    pub rows: usize,
    pub rows_absorbed: usize,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.order < self.power_order && self.rows_absorbed == self.rows
    }
}

/// Interprets the rows as elements of `T^m` and checks the verdict of
/// [`lemma42_check`] there: a positive verdict must survive `trials` random
/// conjugations; a negative one must come with a proper subgroup of `T^m`
/// containing a conjugate of every row.
pub fn direct_power_cross_check(
    ctx: &PowerContext,
    a: &GenMatrix,
    trials: usize,
    seed: u64,
) -> Result<CrossCheckReport> {
    if a.cols() == 0 {
        return Err(Error::Unsupported("matrix has no columns".into()));
    }
    let t = ctx.group();
    let power = direct_power(t, a.cols())?;
    let rows: Vec<Permutation> = a.permutations(ctx).iter().map(|coords| power.tuple(coords)).collect();
    let cert = lemma42_check(ctx, a)?;
    let power_order = u64::try_from(power.group().order()).unwrap_or(u64::MAX);
    let (refutation, witness) = match &cert {
        PowerCertificate::Yes { .. } => {
            let refuted = sample_refute(power.group(), &rows, trials, seed);
            (refuted.map(|c| c.iter().map(|g| g.to_string()).collect()), None)
        }
        PowerCertificate::ColumnFails { column, certificate } => {
            let InvGenCertificate::No {
                maximal_generators,
                conjugators,
                ..
            } = certificate
            else {
                unreachable!("failing column carries a negative certificate")
            };
            let n = t.degree();
            let mut gens = Vec::new();
            for g in maximal_generators {
                gens.push(power.embed(*column, &Permutation::parse_cycles(g, n)?));
            }
            for k in (0..a.cols()).filter(|k| k != column) {
                gens.extend(t.generators().iter().map(|g| power.embed(k, g)));
            }
            let conj = conjugators
                .iter()
                .map(|c| Ok(power.embed(*column, &Permutation::parse_cycles(c, n)?)))
                .collect::<Result<Vec<_>>>()?;
            (
                None,
                Some(absorb(
                    "lifted_maximal",
                    power.group().degree(),
                    gens,
                    &rows,
                    &conj,
                    power_order,
                )?),
            )
        }
        PowerCertificate::ColumnsCollide {
            column,
            other,
            automorphism,
            conjugators,
        } => {
            let n = t.degree();
            let mut gens = Vec::new();
            for (g, img) in t.generators().iter().zip(automorphism) {
                let img = Permutation::parse_cycles(img, n)?;
                gens.push(power.embed(*column, g).then(&power.embed(*other, &img)));
            }
            for k in (0..a.cols()).filter(|k| k != column && k != other) {
                gens.extend(t.generators().iter().map(|g| power.embed(k, g)));
            }
            let conj = conjugators
                .iter()
                .map(|c| Ok(power.embed(*other, &Permutation::parse_cycles(c, n)?)))
                .collect::<Result<Vec<_>>>()?;
            (
                None,
                Some(absorb(
                    "twisted_diagonal",
                    power.group().degree(),
                    gens,
                    &rows,
                    &conj,
                    power_order,
                )?),
            )
        }
    };
    Ok(CrossCheckReport {
        verdict_yes: cert.is_yes(),
        trials,
        seed,
        refutation,
        witness,
    })
}

fn absorb(
    kind: &str,
    degree: usize,
    gens: Vec<Permutation>,
    rows: &[Permutation],
    conjugators: &[Permutation],
    power_order: u64,
) -> Result<WitnessCheck> {
    let subgroup = if gens.is_empty() {
        PermGroup::trivial(degree)
    } else {
        PermGroup::new(degree, gens)?
    };
    let mut absorbed = 0;
    for (row, g) in rows.iter().zip(conjugators) {
        if subgroup.contains(&row.conjugate_by(g))? {
            absorbed += 1;
        }
    }
    Ok(WitnessCheck {
        kind: kind.into(),
        order: u64::try_from(subgroup.order()).unwrap_or(u64::MAX),
        power_order,
        rows: rows.len(),
        rows_absorbed: absorbed,
    })
}

/// Exact value of `m(T, r)`, the largest `m` with `d_I(T^m) ≤ r`, with the
/// surrounding counts and bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MTRReport {
    pub descriptor: Option<String>,
    pub r: usize,
    pub m_exact: usize,
    /// `Out(T)`-orbits of class `r`-tuples whose class set invariably
    /// generates `T`.
    pub class_tuple_count: usize,
    /// `Aut(T)`-orbits of element `r`-tuples whose entry set invariably
    /// generates `T`.
    pub element_orbit_count: u64,
    pub surviving_class_vectors: u64,
    pub surviving_tuples: u64,
    /// Distinct `Out(T)`-orbits among the class tuples `(A, B, C_3, …, C_r)`
    /// for the first invariably generating class pair `(A, B)`.
    pub proof_family_orbits: usize,
    pub k: usize,
    pub out: usize,
    pub aut_order: usize,
    pub lower: f64,
    pub upper: u64,
    pub sandwich_holds: bool,
    /// Witness for `d_I(T^{m_exact}) ≤ r`: one column per orbit.
    pub witness: Vec<Vec<String>>,
    pub witness_verified: bool,
}

/// Computes `m(T, r)`.
///
/// By the criterion above, `r` rows can carry at most one column per
/// `Out(T)`-orbit of invariably generating class `r`-tuples, and one
/// representative column per orbit works; fewer rows are padded by
/// repetition, so this is also the maximum over at most `r` rows.
///
/// The element-level orbit count is computed by counting fixed points of
/// each automorphism and, when the surviving tuples fit the tuple budget,
/// cross-checked by canonical forms.
pub fn m_exact(ctx: &PowerContext, r: usize, budgets: &Budgets) -> Result<MTRReport> {
    if r == 0 {
        return Err(Error::Unsupported("r must be at least 1".into()));
    }
    let k = ctx.k();
    let vector_count = (k as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if vector_count > budgets.tuples as u128 {
        return Err(Error::BudgetExceeded {
            what: "class tuples",
            size: u64::try_from(vector_count).unwrap_or(u64::MAX),
            budget: budgets.tuples,
        });
    }
    let classes = ctx.analysis.classes();
    let sizes = classes.sizes();

    let mut surviving: Vec<Vec<usize>> = Vec::new();
    let mut canonical: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut surviving_tuples: u64 = 0;
    for v in odometer(&vec![k; r]) {
        if ctx.analysis.classes_invariably_generate(&v) {
            surviving_tuples += v.iter().map(|&c| sizes[c] as u64).product::<u64>();
            canonical.insert(ctx.canonical_class_vector(&v));
            surviving.push(v);
        }
    }

    let element_orbit_count = burnside_count(ctx, &surviving);
    if surviving_tuples <= budgets.tuples {
        let (orbits, sizes_divide) = canonical_form_count(ctx, &surviving);
        if orbits != element_orbit_count || !sizes_divide {
            return Err(Error::Consistency(format!(
                "orbit counts disagree: {orbits} by canonical forms, {element_orbit_count} by fixed points"
            )));
        }
    }

    let proof_family_orbits = if r >= 2 {
        match surviving
            .iter()
            .find(|v| ctx.analysis.classes_invariably_generate(&v[..2]))
        {
            Some(first) => {
                let (a, b) = (first[0], first[1]);
                odometer(&vec![k; r - 2])
                    .map(|rest| {
                        let mut v = vec![a, b];
                        v.extend(rest);
                        ctx.canonical_class_vector(&v)
                    })
                    .collect::<BTreeSet<_>>()
                    .len()
            }
            None => 0,
        }
    } else {
        0
    };

    let m = canonical.len();
    let entries: Vec<Vec<usize>> = (0..r)
        .map(|i| canonical.iter().map(|v| ctx.representative(v[i])).collect())
        .collect();
    let witness = GenMatrix::new(ctx, m, entries)?;
    let witness_verified = lemma42_check(ctx, &witness)?.is_yes();

    let out = ctx.out_order();
    let lower = (k as f64).powi(r as i32 - 2) / out as f64 - 1.0;
    let upper = (k as u64).pow(r as u32);
    Ok(MTRReport {
        descriptor: ctx.label.clone(),
        r,
        m_exact: m,
        class_tuple_count: m,
        element_orbit_count,
        surviving_class_vectors: surviving.len() as u64,
        surviving_tuples,
        proof_family_orbits,
        k,
        out,
        aut_order: ctx.aut.order(),
        lower,
        upper,
        sandwich_holds: (m as f64) > lower && m as u64 <= upper,
        witness: witness.to_cycle_rows(ctx),
        witness_verified,
    })
}

/// All vectors `v` with `v[i] < bounds[i]`, in lexicographic order.
fn odometer(bounds: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut next = if bounds.contains(&0) {
        None
    } else {
        Some(vec![0; bounds.len()])
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut v = current.clone();
        for i in (0..v.len()).rev() {
            v[i] += 1;
            if v[i] < bounds[i] {
                next = Some(v);
                break;
            }
            v[i] = 0;
        }
        Some(current)
    })
}

/// Orbits of `Aut(T)` on element tuples with the given class vectors, as
/// the average number of fixed tuples.
fn burnside_count(ctx: &PowerContext, vectors: &[Vec<usize>]) -> u64 {
    let classes = ctx.analysis.classes();
    let mut total: u128 = 0;
    for map in ctx.aut.automorphisms() {
        let fixed: Vec<u128> = classes
            .classes()
            .iter()
            .map(|c| c.mask.iter().filter(|&x| map[x] as usize == x).count() as u128)
            .collect();
        total += vectors
            .iter()
            .map(|v| v.iter().map(|&c| fixed[c]).product::<u128>())
            .sum::<u128>();
    }
    (total / ctx.aut.order() as u128) as u64
}

/// Orbit count by canonical forms, and whether every orbit size divides
/// `|Aut(T)|`.
fn canonical_form_count(ctx: &PowerContext, vectors: &[Vec<usize>]) -> (u64, bool) {
    let classes = ctx.analysis.classes();
    let members: Vec<Vec<usize>> = classes.classes().iter().map(|c| c.mask.iter().collect()).collect();
    let mut orbit_sizes: HashMap<Vec<usize>, usize> = HashMap::new();
    for v in vectors {
        let bounds: Vec<usize> = v.iter().map(|&c| members[c].len()).collect();
        for choice in odometer(&bounds) {
            let tuple: Vec<usize> = v.iter().zip(&choice).map(|(&c, &i)| members[c][i]).collect();
            *orbit_sizes.entry(tuple_orbit_canonical(&ctx.aut, &tuple)).or_default() += 1;
        }
    }
    let order = ctx.aut.order();
    let divides = orbit_sizes.values().all(|&s| order.is_multiple_of(s));
    (orbit_sizes.len() as u64, divides)
}

/// A 3-row matrix certifying `d_I(T^m) ≤ 3` for small `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeRowInstance {
    pub m: usize,
    pub matrix: Vec<Vec<String>>,
    pub verdict_yes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PslAnnotation {
    pub q: u32,
    /// `k(T)² / (|Out(T)| q)`.
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub mtr: MTRReport,
    pub k_over_out: f64,
    /// For every `m ≤ k(T)/|Out(T)|`.
    pub three_row: Vec<ThreeRowInstance>,
    pub out_at_most_log2_order: bool,
    pub psl: Option<PslAnnotation>,
}

impl BoundsReport {
    pub fn holds(&self) -> bool {
        self.mtr.sandwich_holds && self.mtr.witness_verified && self.three_row.iter().all(|t| t.verdict_yes)
    }
}

/// The 3-row matrix with two constant rows from the first invariably
/// generating class pair and a third row running through representatives
/// of the first `m` orbits of `Out(T)` on classes.
pub fn three_row_matrix(ctx: &PowerContext, m: usize) -> Result<GenMatrix> {
    let k = ctx.k();
    let (a, b) = odometer(&[k, k])
        .map(|v| (v[0], v[1]))
        .find(|&(a, b)| ctx.analysis.classes_invariably_generate(&[a, b]))
        .ok_or_else(|| Error::Consistency("no invariably generating class pair".into()))?;
    let orbits = ctx.class_orbits();
    if m > orbits.len() {
        return Err(Error::Unsupported(format!(
            "only {} classes up to automorphisms, {m} columns requested",
            orbits.len()
        )));
    }
    let third: Vec<usize> = orbits[..m].iter().map(|o| ctx.representative(o[0])).collect();
    GenMatrix::new(
        ctx,
        m,
        vec![vec![ctx.representative(a); m], vec![ctx.representative(b); m], third],
    )
}

/// `m(T, r)` together with the checks of its bounds: the sandwich, the
/// 3-row constructions for every `m ≤ k(T)/|Out(T)|`, and annotations.
pub fn bounds_report(ctx: &PowerContext, r: usize, budgets: &Budgets, psl_q: Option<u32>) -> Result<BoundsReport> {
    let mtr = m_exact(ctx, r, budgets)?;
    let k_over_out = ctx.k() as f64 / ctx.out_order() as f64;
    let mut three_row = Vec::new();
    for m in 1..=(ctx.k() / ctx.out_order()) {
        let matrix = three_row_matrix(ctx, m)?;
        three_row.push(ThreeRowInstance {
            m,
            verdict_yes: lemma42_check(ctx, &matrix)?.is_yes(),
            matrix: matrix.to_cycle_rows(ctx),
        });
    }
    let order = ctx.group().order() as f64;
    Ok(BoundsReport {
        mtr,
        k_over_out,
        three_row,
        out_at_most_log2_order: (ctx.out_order() as f64) <= order.log2(),
        psl: psl_q.map(|q| PslAnnotation {
            q,
            c: (ctx.k() * ctx.k()) as f64 / (ctx.out_order() as f64 * q as f64),
        }),
    })
}
