use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{PermGroup, DEFAULT_ELEMENT_CAP};
use crate::mask::ElementMask;

/// Largest group order for which the full subgroup lattice is computed.
pub const DEFAULT_LATTICE_BUDGET: u64 = 2500;

#[derive(Clone, Debug)]
pub struct SubgroupRecord {
    pub id: usize,
    pub order: usize,
    pub mask: ElementMask,
    /// Element indices generating the subgroup.
    pub generators: Vec<usize>,
    /// Conjugacy class of subgroups this record belongs to.
    pub class_id: usize,
    pub maximal: bool,
}

/// Every subgroup of a group, once each.
///
/// Records are sorted by order and then by their sorted element indices, so
/// record 0 is the trivial subgroup and the last record is the whole group.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group_order: usize,
    records: Vec<SubgroupRecord>,
    classes: Vec<Vec<usize>>,
    maximal_ids: Vec<usize>,
}

impl SubgroupLattice {
    pub fn records(&self) -> &[SubgroupRecord] {
        &self.records
    }

    pub fn record(&self, id: usize) -> &SubgroupRecord {
        &self.records[id]
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// Record ids grouped by conjugacy, classes ordered by smallest member.
    pub fn subgroup_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Ids of every maximal subgroup (all conjugates).
    pub fn maximal_ids(&self) -> &[usize] {
        &self.maximal_ids
    }

    /// One representative per conjugacy class of maximal subgroups: the
    /// lowest-id member, ordered by descending subgroup order, then id.
    pub fn maximal_subgroups(&self) -> Vec<&SubgroupRecord> {
        let mut reps: Vec<&SubgroupRecord> = self
            .classes
            .iter()
            .map(|members| &self.records[members[0]])
            .filter(|r| r.maximal)
            .collect();
        reps.sort_by(|a, b| b.order.cmp(&a.order).then(a.id.cmp(&b.id)));
        reps
    }

    /// All members of a subgroup class.
    pub fn class_members(&self, class_id: usize) -> &[usize] {
        &self.classes[class_id]
    }

    pub fn normal_subgroups(&self) -> Vec<&SubgroupRecord> {
        self.classes
            .iter()
            .filter(|members| members.len() == 1)
            .map(|members| &self.records[members[0]])
            .collect()
    }

    pub fn find(&self, mask: &ElementMask) -> Option<&SubgroupRecord> {
        self.records.iter().find(|r| &r.mask == mask)
    }
}

/// Enumerates every subgroup by repeated cyclic extension.
///
/// Starting from the trivial subgroup, each subgroup `H` is extended by one
/// element `x` of prime-power order from each right coset `Hx`; every
/// subgroup is reached because it is generated by its prime-power-order
/// elements. Results are deduplicated by mask.
pub fn all_subgroups(group: &PermGroup, budget: u64) -> Result<SubgroupLattice> {
    if group.order() > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "subgroup lattice",
            size: u64::try_from(group.order()).unwrap_or(u64::MAX),
            budget,
        });
    }
    let table = group.enumerate_elements(DEFAULT_ELEMENT_CAP.max(budget))?;
    let n = table.len();
    let prime_power: Vec<usize> = (1..n).filter(|&x| is_prime_power(table.element_order(x))).collect();

    let trivial = ElementMask::from_indices(n, [0]);
    let mut found: HashMap<ElementMask, usize> = HashMap::new();
    let mut list: Vec<(ElementMask, Vec<usize>)> = vec![(trivial.clone(), Vec::new())];
    found.insert(trivial, 0);
    let mut next = 0;
    while next < list.len() {
        let (sub, gens) = list[next].clone();
        next += 1;
        let members: Vec<usize> = sub.iter().collect();
        let mut covered = sub.clone();
        for &x in &prime_power {
            if covered.contains(x) {
                continue;
            }
            for &h in &members {
                covered.insert(table.mul(h, x));
            }
            let mut ext_gens = gens.clone();
            ext_gens.push(x);
            let ext = table.extend_closure(&sub, &ext_gens);
            if !found.contains_key(&ext) {
                found.insert(ext.clone(), list.len());
                list.push((ext, ext_gens));
            }
        }
    }

    let mut keyed: Vec<(usize, Vec<usize>, ElementMask, Vec<usize>)> = list
        .into_iter()
        .map(|(mask, gens)| (mask.count(), mask.iter().collect(), mask, gens))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut records: Vec<SubgroupRecord> = keyed
        .into_iter()
        .enumerate()
        .map(|(id, (order, _, mask, generators))| SubgroupRecord {
            id,
            order,
            mask,
            generators,
            class_id: usize::MAX,
            maximal: false,
        })
        .collect();
    let index: HashMap<ElementMask, usize> = records.iter().map(|r| (r.mask.clone(), r.id)).collect();

    let group_gens = group.generator_element_indices_with(table);
    let mut classes = Vec::new();
    for id in 0..records.len() {
        if records[id].class_id != usize::MAX {
            continue;
        }
        let class_id = classes.len();
        records[id].class_id = class_id;
        let mut members = vec![id];
        let mut idx = 0;
        while idx < members.len() {
            let mask = records[members[idx]].mask.clone();
            for &g in &group_gens {
                let conj = table.conjugate_mask(&mask, g);
                let cid = index[&conj];
                if records[cid].class_id == usize::MAX {
                    records[cid].class_id = class_id;
                    members.push(cid);
                }
            }
            idx += 1;
        }
        members.sort_unstable();
        classes.push(members);
    }

    let mut maximal_ids = Vec::new();
    for id in 0..records.len() {
        let r = &records[id];
        if r.order == n {
            continue;
        }
        let contained = records
            .iter()
            .any(|k| k.order > r.order && k.order < n && k.order % r.order == 0 && r.mask.is_subset(&k.mask));
        if !contained {
            maximal_ids.push(id);
        }
    }
    for &id in &maximal_ids {
        records[id].maximal = true;
    }

    Ok(SubgroupLattice {
        group_order: n,
        records,
        classes,
        maximal_ids,
    })
}

/// Intersection of every maximal subgroup; the whole group when there are
/// none (the trivial group).
pub fn frattini(lattice: &SubgroupLattice) -> ElementMask {
    let mut mask = ElementMask::full(lattice.group_order());
    for &id in lattice.maximal_ids() {
        mask.intersect_with(&lattice.record(id).mask);
    }
    mask
}

fn is_prime_power(mut k: usize) -> bool {
    if k < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            while k.is_multiple_of(p) {
                k /= p;
            }
            return k == 1;
        }
        p += 1;
    }
    true
}
