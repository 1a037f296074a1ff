use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{ElementTable, PermGroup, DEFAULT_ELEMENT_CAP};

use super::classes::ConjClassTable;

/// Largest group order for which automorphisms are enumerated.
pub const DEFAULT_AUT_BUDGET: u64 = 1000;

/// Every automorphism of a group, each stored as a permutation of element
/// indices (`map[x]` is the image of element `x`).
#[derive(Clone, Debug)]
pub struct AutGroup {
    generators: Vec<usize>,
    maps: Vec<Vec<u32>>,
    inner: Vec<usize>,
    out_order: usize,
}

impl AutGroup {
    /// Sorted lexicographically; the identity automorphism is first.
    pub fn automorphisms(&self) -> &[Vec<u32>] {
        &self.maps
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    /// Positions in [`automorphisms`](Self::automorphisms) of the inner ones.
    pub fn inner(&self) -> &[usize] {
        &self.inner
    }

    pub fn inner_order(&self) -> usize {
        self.inner.len()
    }

    pub fn out_order(&self) -> usize {
        self.out_order
    }

    /// The generating set whose images determined each automorphism.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// How an automorphism permutes conjugacy classes.
    pub fn class_permutation(&self, aut: usize, classes: &ConjClassTable) -> Vec<usize> {
        classes
            .classes()
            .iter()
            .map(|c| classes.class_of(self.maps[aut][c.representative] as usize))
            .collect()
    }

    /// Distinct class permutations induced by `Aut`, i.e. the action of
    /// `Out` on classes (with repetitions removed), sorted.
    pub fn class_action(&self, classes: &ConjClassTable) -> Vec<Vec<usize>> {
        let mut perms: Vec<Vec<usize>> = (0..self.order()).map(|a| self.class_permutation(a, classes)).collect();
        perms.sort();
        perms.dedup();
        perms
    }
}

/// Enumerates `Aut(T)` by backtracking over images of a small generating set.
///
/// Each generator may only map to elements of the same order and class size;
/// a partial assignment is kept only if it extends to an injective
/// homomorphism on the subgroup generated so far, which at full depth makes
/// it an automorphism of the whole group.
pub fn automorphism_group(group: &PermGroup, classes: &ConjClassTable, budget: u64) -> Result<AutGroup> {
    if group.order() > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "automorphism search",
            size: u64::try_from(group.order()).unwrap_or(u64::MAX),
            budget,
        });
    }
    let table = group.enumerate_elements(DEFAULT_ELEMENT_CAP.max(budget))?;
    let n = table.len();
    let signature: Vec<(usize, usize)> = (0..n)
        .map(|x| (table.element_order(x), classes.class(classes.class_of(x)).size))
        .collect();
    let mut signature_count: HashMap<(usize, usize), usize> = HashMap::new();
    for s in &signature {
        *signature_count.entry(*s).or_default() += 1;
    }
    let gens = small_generating_set(table, |x| signature_count[&signature[x]]);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| (0..n).filter(|&y| signature[y] == signature[g]).collect())
        .collect();

    let mut maps = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    search(table, &gens, &candidates, &mut images, &mut maps);
    maps.sort();

    let position: HashMap<&Vec<u32>, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut inner: Vec<usize> = (0..n)
        .map(|g| {
            let map: Vec<u32> = (0..n).map(|x| table.conj(x, g) as u32).collect();
            position[&map]
        })
        .collect();
    inner.sort_unstable();
    inner.dedup();
    let out_order = maps.len() / inner.len();
    Ok(AutGroup {
        generators: gens,
        maps,
        inner,
        out_order,
    })
}

fn search(
    table: &ElementTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    out: &mut Vec<Vec<u32>>,
) {
    let depth = images.len();
    if depth == gens.len() {
        let map = extend_hom(table, &gens[..depth], images).expect("checked at previous depth");
        debug_assert!(map.iter().all(|&x| x != u32::MAX));
        out.push(map);
        return;
    }
    for &c in &candidates[depth] {
        images.push(c);
        if extend_hom(table, &gens[..=depth], images).is_some() {
            search(table, gens, candidates, images, out);
        }
        images.pop();
    }
}

/// Extends `gens[i] ↦ images[i]` to `⟨gens⟩` along the Cayley graph,
/// returning `None` if the assignment is inconsistent or not injective.
fn extend_hom(table: &ElementTable, gens: &[usize], images: &[usize]) -> Option<Vec<u32>> {
    let n = table.len();
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut idx = 0;
    while idx < queue.len() {
        let x = queue[idx];
        idx += 1;
        for (&g, &img) in gens.iter().zip(images) {
            let y = table.mul(x, g);
            let fy = table.mul(map[x] as usize, img);
            if map[y] == u32::MAX {
                if used[fy] {
                    return None;
                }
                used[fy] = true;
                map[y] = fy as u32;
                queue.push(y);
            } else if map[y] as usize != fy {
                return None;
            }
        }
    }
    Some(map)
}

/// Greedy generating set: repeatedly add the element that generates the
/// largest subgroup together with those already chosen, preferring elements
/// with fewer candidate images, then lower index.
fn small_generating_set(table: &ElementTable, candidate_count: impl Fn(usize) -> usize) -> Vec<usize> {
    let n = table.len();
    let mut gens: Vec<usize> = Vec::new();
    let mut current = table.closure(&[]);
    while current.count() < n {
        let mut best: Option<(usize, usize, usize)> = None;
        for x in 0..n {
            if current.contains(x) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(x);
            let size = table.extend_closure(&current, &trial).count();
            let key = (size, candidate_count(x), x);
            let better = match best {
                None => true,
                Some((s, c, _)) => size > s || (size == s && key.1 < c),
            };
            if better {
                best = Some(key);
            }
        }
        let (_, _, x) = best.unwrap();
        gens.push(x);
        current = table.extend_closure(&current, &gens);
    }
    gens
}

/// Exhaustive check that an element-index map preserves the multiplication
/// table.
pub fn is_automorphism(table: &ElementTable, map: &[u32]) -> bool {
    let n = table.len();
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &m in map {
        if m as usize >= n || seen[m as usize] {
            return false;
        }
        seen[m as usize] = true;
    }
    (0..n).all(|x| (0..n).all(|y| map[table.mul(x, y)] as usize == table.mul(map[x] as usize, map[y] as usize)))
}

/// Lexicographically least image of the tuple under the diagonal action of
/// every automorphism.
pub fn tuple_orbit_canonical(aut: &AutGroup, tuple: &[usize]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for map in aut.automorphisms() {
        let image: Vec<usize> = tuple.iter().map(|&x| map[x] as usize).collect();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
    }
    best.unwrap_or_else(|| tuple.to_vec())
}
