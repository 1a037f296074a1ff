use crate::error::Result;
use crate::group::{ElementTable, PermGroup};
use crate::mask::ElementMask;

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub representative: usize,
    pub size: usize,
    pub mask: ElementMask,
}

/// Conjugacy classes ordered by representative, which is the smallest
/// element index in each class; the identity is alone in class 0.
#[derive(Clone, Debug)]
pub struct ConjClassTable {
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
}

impl ConjClassTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &ConjClass {
        &self.classes[id]
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element] as usize
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.size).collect()
    }
}

/// Orbits of the conjugation action, found by conjugating with the group's
/// generators.
pub fn conjugacy_classes(group: &PermGroup, cap: u64) -> Result<ConjClassTable> {
    let table = group.enumerate_elements(cap)?;
    let gens = group.generator_element_indices_with(table);
    Ok(classes_of_table(table, &gens))
}

pub(crate) fn classes_of_table(table: &ElementTable, gens: &[usize]) -> ConjClassTable {
    let n = table.len();
    let mut class_of = vec![u32::MAX; n];
    let mut classes = Vec::new();
    for rep in 0..n {
        if class_of[rep] != u32::MAX {
            continue;
        }
        let id = classes.len() as u32;
        class_of[rep] = id;
        let mut members = vec![rep];
        let mut idx = 0;
        while idx < members.len() {
            let x = members[idx];
            for &g in gens {
                let y = table.conj(x, g);
                if class_of[y] == u32::MAX {
                    class_of[y] = id;
                    members.push(y);
                }
            }
            idx += 1;
        }
        classes.push(ConjClass {
            representative: rep,
            size: members.len(),
            mask: ElementMask::from_indices(n, members),
        });
    }
    ConjClassTable { classes, class_of }
}

pub fn center(group: &PermGroup, cap: u64) -> Result<ElementMask> {
    let table = group.enumerate_elements(cap)?;
    let gens = group.generator_element_indices_with(table);
    Ok(ElementMask::from_indices(
        table.len(),
        (0..table.len()).filter(|&z| gens.iter().all(|&g| table.mul(z, g) == table.mul(g, z))),
    ))
}

/// Smallest normal subgroup containing the given elements.
pub fn normal_closure(group: &PermGroup, elements: &[usize], cap: u64) -> Result<ElementMask> {
    let table = group.enumerate_elements(cap)?;
    let gens = group.generator_element_indices_with(table);
    let mut sub_gens: Vec<usize> = elements.to_vec();
    let mut mask = table.closure(&sub_gens);
    loop {
        let missing = mask
            .iter()
            .flat_map(|h| gens.iter().map(move |&g| (h, g)))
            .map(|(h, g)| table.conj(h, g))
            .find(|&c| !mask.contains(c));
        match missing {
            Some(c) => {
                sub_gens.push(c);
                mask = table.extend_closure(&mask, &sub_gens);
            }
            None => return Ok(mask),
        }
    }
}

/// The commutator subgroup, as the normal closure of the commutators of
/// the generators.
pub fn derived_subgroup(group: &PermGroup, cap: u64) -> Result<ElementMask> {
    let table = group.enumerate_elements(cap)?;
    let gens = group.generator_element_indices_with(table);
    let mut commutators = Vec::new();
    for &a in &gens {
        for &b in &gens {
            let c = table.mul(table.mul(table.inv(a), table.inv(b)), table.mul(a, b));
            if c != 0 {
                commutators.push(c);
            }
        }
    }
    normal_closure(group, &commutators, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(
            n,
            gens.iter().map(|s| Permutation::parse_cycles(s, n).unwrap()).collect(),
        )
        .unwrap()
    }

    /// Classes by conjugating with every element, not just generators.
    fn brute_classes(g: &PermGroup) -> Vec<Vec<usize>> {
        let t = g.enumerate_elements(1000).unwrap();
        let mut seen = vec![false; t.len()];
        let mut out = Vec::new();
        for x in 0..t.len() {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..t.len()).map(|h| t.conj(x, h)).collect();
            class.sort();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class);
        }
        out
    }

    #[test]
    fn s3_classes() {
        let s3 = group(3, &["(1,2,3)", "(1,2)"]);
        let classes = conjugacy_classes(&s3, 100).unwrap();
        let mut sizes = classes.sizes();
        assert_eq!(sizes[0], 1);
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn abelian_classes_are_singletons() {
        let c4 = group(4, &["(1,2,3,4)"]);
        assert_eq!(conjugacy_classes(&c4, 100).unwrap().sizes(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn a5_classes_match_brute_force() {
        let a5 = group(5, &["(1,2,3)", "(3,4,5)"]);
        let classes = conjugacy_classes(&a5, 100).unwrap();
        let brute = brute_classes(&a5);
        assert_eq!(classes.len(), 5);
        assert_eq!(brute.len(), 5);
        for (c, b) in classes.classes().iter().zip(&brute) {
            assert_eq!(c.mask.iter().collect::<Vec<_>>(), *b);
        }
        let mut sizes = classes.sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
    }

    #[test]
    fn class_equation() {
        for g in [
            group(4, &["(1,2,3,4)", "(1,2)"]),
            group(6, &["(1,2,3,4,5,6)", "(1,6)(2,5)(3,4)"]),
            group(6, &["(1,2,3,4,5)", "(1,2)", "(1,6)"]),
        ] {
            let classes = conjugacy_classes(&g, 1000).unwrap();
            let n = g.order() as usize;
            assert_eq!(classes.sizes().iter().sum::<usize>(), n);
            assert!(classes.sizes().iter().all(|s| n.is_multiple_of(*s)));
            assert_eq!(classes.class(0).size, 1);
        }
    }

    #[test]
    fn center_and_derived() {
        let s4 = group(4, &["(1,2,3,4)", "(1,2)"]);
        assert_eq!(center(&s4, 100).unwrap().count(), 1);
        assert_eq!(derived_subgroup(&s4, 100).unwrap().count(), 12);
        let d8 = group(4, &["(1,2,3,4)", "(1,3)"]);
        assert_eq!(center(&d8, 100).unwrap().count(), 2);
        assert_eq!(derived_subgroup(&d8, 100).unwrap().count(), 2);
        let a5 = group(5, &["(1,2,3)", "(3,4,5)"]);
        assert_eq!(derived_subgroup(&a5, 100).unwrap().count(), 60);
    }
}
