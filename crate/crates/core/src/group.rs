//! Permutation groups, element tables, and the homomorphisms built from them
//! (coset actions, quotients, direct powers).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::mask::ElementMask;
use crate::perm::Permutation;

/// Default cap on the size of an enumerated element table.
pub const DEFAULT_ELEMENT_CAP: u64 = 100_000;

/// Groups up to this order get a full multiplication table.
const MUL_TABLE_LIMIT: usize = 4096;

/// Every element of a group, sorted by image array (identity first).
pub struct ElementTable {
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    inverse: Vec<u32>,
    mul: Option<Vec<u16>>,
}

impl ElementTable {
    fn new(mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let inverse = elements.iter().map(|p| index[&p.inverse()]).collect();
        let n = elements.len();
        let mul = (n <= MUL_TABLE_LIMIT).then(|| {
            let mut table = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    table.push(index[&a.then(b)] as u16);
                }
            }
            table
        });
        ElementTable {
            elements,
            index,
            inverse,
            mul,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn try_index_of(&self, p: &Permutation) -> Result<usize> {
        self.index_of(p).ok_or_else(|| Error::NotAnElement(p.to_string()))
    }

    /// Index of `a` followed by `b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mul {
            Some(table) => table[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Index of `g⁻¹ a g`.
    #[inline]
    pub fn conj(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The subgroup generated by the given element indices.
    pub fn closure(&self, gens: &[usize]) -> ElementMask {
        self.extend_closure(&ElementMask::from_indices(self.len(), [0]), gens)
    }

    /// Closure of `start ∪ gens`, where `start` is already a subgroup
    /// generated by elements that are all listed in `gens`.
    pub(crate) fn extend_closure(&self, start: &ElementMask, gens: &[usize]) -> ElementMask {
        let mut mask = start.clone();
        let mut queue: Vec<usize> = mask.iter().collect();
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask.contains(y) {
                    mask.insert(y);
                    queue.push(y);
                }
            }
        }
        mask
    }

    pub fn is_subgroup(&self, mask: &ElementMask) -> bool {
        if mask.universe() != self.len() || !mask.contains(0) {
            return false;
        }
        let members: Vec<usize> = mask.iter().collect();
        members
            .iter()
            .all(|&a| members.iter().all(|&b| mask.contains(self.mul(a, b))))
    }

    /// A deterministic generating set: scan the mask in index order and keep
    /// every element not yet generated.
    pub fn subgroup_generators(&self, mask: &ElementMask) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = ElementMask::from_indices(self.len(), [0]);
        for e in mask.iter() {
            if !current.contains(e) {
                gens.push(e);
                current = self.extend_closure(&current, &gens);
            }
        }
        gens
    }

    /// The image of `mask` under conjugation by `g`.
    pub fn conjugate_mask(&self, mask: &ElementMask, g: usize) -> ElementMask {
        ElementMask::from_indices(self.len(), mask.iter().map(|h| self.conj(h, g)))
    }
}

impl fmt::Debug for ElementTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ElementTable")
            .field("len", &self.elements.len())
            .finish()
    }
}

/// A permutation group given by generators, with its stabilizer chain and an
/// optional cached element table.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    table: OnceLock<Arc<ElementTable>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .field("order", &self.order())
            .finish()
    }
}

pub fn group_from_generators(degree: usize, gens: Vec<Permutation>) -> Result<PermGroup> {
    PermGroup::new(degree, gens)
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::InvalidPermutation(
                "a group needs at least one generator (use the identity for the trivial group)".into(),
            ));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let chain = StabChain::new(degree, &generators);
        Ok(PermGroup {
            degree,
            generators,
            chain,
            table: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, vec![Permutation::identity(degree)]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        Ok(self.chain.contains(p))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain.random_element(rng)
    }

    /// Populates (or returns the cached) element table.
    pub fn enumerate_elements(&self, cap: u64) -> Result<&ElementTable> {
        if let Some(table) = self.table.get() {
            return Ok(table);
        }
        if self.order() > cap as u128 {
            return Err(Error::CapExceeded {
                order: u64::try_from(self.order()).unwrap_or(u64::MAX),
                cap,
            });
        }
        Ok(self
            .table
            .get_or_init(|| Arc::new(ElementTable::new(self.chain.elements()))))
    }

    /// Shared handle to the element table, enumerating it if needed.
    pub fn table_arc(&self, cap: u64) -> Result<Arc<ElementTable>> {
        self.enumerate_elements(cap)?;
        Ok(self.table.get().unwrap().clone())
    }

    /// `⟨gens⟩` equals this group (the gens are assumed to be members).
    pub fn generated_by(&self, gens: &[Permutation]) -> bool {
        let sub = StabChain::new(self.degree, gens);
        sub.order() == self.order()
    }

    /// The subgroup of the given mask as a group in its own right, on the
    /// same points.
    pub fn subgroup_from_mask(&self, mask: &ElementMask) -> Result<PermGroup> {
        let table = self.enumerate_elements(DEFAULT_ELEMENT_CAP)?;
        let gens: Vec<Permutation> = table
            .subgroup_generators(mask)
            .into_iter()
            .map(|i| table.element(i).clone())
            .collect();
        let gens = if gens.is_empty() {
            vec![Permutation::identity(self.degree)]
        } else {
            gens
        };
        PermGroup::new(self.degree, gens)
    }

    pub fn is_normal_mask(&self, mask: &ElementMask) -> Result<bool> {
        let table = self.enumerate_elements(DEFAULT_ELEMENT_CAP)?;
        for g in &self.generators {
            let gi = table.try_index_of(g)?;
            if mask.iter().any(|h| !mask.contains(table.conj(h, gi))) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn generator_element_indices_with(&self, table: &ElementTable) -> Vec<usize> {
        self.generators
            .iter()
            .map(|g| table.index_of(g).expect("generator in its own group"))
            .collect()
    }

    /// Element indices of the group's generators.
    pub fn generator_element_indices(&self) -> Result<Vec<usize>> {
        let table = self.enumerate_elements(DEFAULT_ELEMENT_CAP)?;
        Ok(self.generator_element_indices_with(table))
    }
}

/// A homomorphism from a group with an element table into a permutation
/// group, stored by the image of every source element.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<ElementTable>,
    target: PermGroup,
    generator_images: Vec<Permutation>,
    element_images: Vec<Permutation>,
    kernel: ElementMask,
}

impl GroupHom {
    pub fn target(&self) -> &PermGroup {
        &self.target
    }

    pub fn generator_images(&self) -> &[Permutation] {
        &self.generator_images
    }

    pub fn kernel(&self) -> &ElementMask {
        &self.kernel
    }

    pub fn source_table(&self) -> &ElementTable {
        &self.source
    }

    pub fn image_of_index(&self, i: usize) -> &Permutation {
        &self.element_images[i]
    }

    pub fn image(&self, p: &Permutation) -> Result<&Permutation> {
        Ok(&self.element_images[self.source.try_index_of(p)?])
    }

    /// Whether the image group is transitive on its points.
    pub fn is_transitive(&self) -> bool {
        let n = self.target.degree();
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for g in &self.generator_images {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The action of `group` on the right cosets of the subgroup `subgroup`.
///
/// Cosets are numbered in order of their smallest element index, so the
/// coset of the subgroup itself is point 0.
pub fn coset_action(group: &PermGroup, subgroup: &ElementMask, cap: u64) -> Result<GroupHom> {
    let table = group.table_arc(cap)?;
    if !table.is_subgroup(subgroup) {
        return Err(Error::NotSubgroup(
            "mask is not closed under composition or lacks the identity".into(),
        ));
    }
    let n = table.len();
    let members: Vec<usize> = subgroup.iter().collect();
    let mut coset_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    for e in 0..n {
        if coset_of[e] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(e);
        for &h in &members {
            coset_of[table.mul(h, e)] = c;
        }
    }
    let index = reps.len();
    let act = |g: usize| -> Permutation {
        let images = reps.iter().map(|&r| coset_of[table.mul(r, g)]).collect();
        Permutation::from_images(images).expect("coset action is a permutation")
    };
    let element_images: Vec<Permutation> = (0..n).map(act).collect();
    let generator_images: Vec<Permutation> = group
        .generator_element_indices_with(&table)
        .into_iter()
        .map(|g| element_images[g].clone())
        .collect();
    let kernel = ElementMask::from_indices(n, (0..n).filter(|&g| element_images[g].is_identity()));
    let target = PermGroup::new(index, generator_images.clone())?;
    Ok(GroupHom {
        source: table,
        target,
        generator_images,
        element_images,
        kernel,
    })
}

/// `G/N` as the image of the action on cosets of `N`.
pub fn quotient(group: &PermGroup, normal: &ElementMask, cap: u64) -> Result<PermGroup> {
    let table = group.enumerate_elements(cap)?;
    if !table.is_subgroup(normal) {
        return Err(Error::NotSubgroup("quotient operand".into()));
    }
    if !group.is_normal_mask(normal)? {
        return Err(Error::NotNormal);
    }
    Ok(coset_action(group, normal, cap)?.target)
}

/// `G^m` acting on `m` disjoint blocks of `deg(G)` points each.
#[derive(Clone, Debug)]
pub struct DirectPower {
    factor: PermGroup,
    copies: usize,
    group: PermGroup,
}

pub fn direct_power(factor: &PermGroup, copies: usize) -> Result<DirectPower> {
    if copies == 0 {
        return Err(Error::Unsupported("direct power exponent must be at least 1".into()));
    }
    let group = if copies == 1 {
        factor.clone()
    } else {
        let n = factor.degree();
        let mut gens = Vec::new();
        for j in 0..copies {
            for g in factor.generators() {
                gens.push(embed(n, copies, j, g));
            }
        }
        PermGroup::new(n * copies, gens)?
    };
    Ok(DirectPower {
        factor: factor.clone(),
        copies,
        group,
    })
}

fn embed(n: usize, copies: usize, j: usize, p: &Permutation) -> Permutation {
    let mut images: Vec<u32> = (0..(n * copies) as u32).collect();
    let offset = (j * n) as u32;
    for x in 0..n {
        images[j * n + x] = offset + p.apply(x as u32);
    }
    Permutation::from_images(images).unwrap()
}

impl DirectPower {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn factor(&self) -> &PermGroup {
        &self.factor
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// `p` placed in coordinate `j`, identity elsewhere.
    pub fn embed(&self, j: usize, p: &Permutation) -> Permutation {
        embed(self.factor.degree(), self.copies, j, p)
    }

    /// Coordinate `j` of an element of the power.
    pub fn project(&self, j: usize, p: &Permutation) -> Permutation {
        let n = self.factor.degree();
        let offset = (j * n) as u32;
        let images = (0..n).map(|x| p.apply(offset + x as u32) - offset).collect();
        Permutation::from_images(images).unwrap()
    }

    /// The element with the given coordinates.
    pub fn tuple(&self, coords: &[Permutation]) -> Permutation {
        assert_eq!(coords.len(), self.copies);
        let n = self.factor.degree();
        let mut images = Vec::with_capacity(n * self.copies);
        for (j, c) in coords.iter().enumerate() {
            images.extend(c.images().iter().map(|&x| x + (j * n) as u32));
        }
        Permutation::from_images(images).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(
            n,
            gens.iter().map(|s| Permutation::parse_cycles(s, n).unwrap()).collect(),
        )
        .unwrap()
    }

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn orders_from_generators() {
        assert_eq!(group(5, &["(1,2,3,4,5)", "(1,2)"]).order(), 120);
        assert_eq!(group(4, &["(1,2,3)", "(2,3,4)"]).order(), 12);
        assert_eq!(group(4, &["(1,2)(3,4)", "(1,3)(2,4)"]).order(), 4);
    }

    #[test]
    fn membership() {
        let a4 = group(4, &["(1,2,3)", "(2,3,4)"]);
        assert!(!a4.contains(&p("(1,2)", 4)).unwrap());
        assert!(a4.contains(&p("(1,2,3)", 4)).unwrap());
        assert!(a4.contains(&p("(1,2)", 3)).is_err());
        let s5 = group(5, &["(1,2,3,4,5)", "(1,2)"]);
        let s5_table = s5.enumerate_elements(1000).unwrap();
        assert!(s5_table.elements().iter().all(|g| s5.contains(g).unwrap()));
    }

    #[test]
    fn element_tables() {
        assert_eq!(
            group(3, &["(1,2,3)", "(1,2)"]).enumerate_elements(100).unwrap().len(),
            6
        );
        let a5 = group(5, &["(1,2,3)", "(3,4,5)", "(1,2)(4,5)"]);
        let table = a5.enumerate_elements(100).unwrap();
        assert_eq!(table.len(), 60);
        assert!(table.element(0).is_identity());
        assert!(table.elements().windows(2).all(|w| w[0] < w[1]));
        let s8 = group(8, &["(1,2,3,4,5,6,7,8)", "(1,2)"]);
        assert!(matches!(
            s8.enumerate_elements(10_000),
            Err(Error::CapExceeded {
                order: 40320,
                cap: 10_000
            })
        ));
    }

    #[test]
    fn coset_actions() {
        let s3 = group(3, &["(1,2,3)", "(1,2)"]);
        let t = s3.enumerate_elements(100).unwrap();
        let a3 = t.closure(&[t.index_of(&p("(1,2,3)", 3)).unwrap()]);
        let sign = coset_action(&s3, &a3, 100).unwrap();
        assert_eq!(sign.target().degree(), 2);
        assert_eq!(sign.target().order(), 2);
        assert_eq!(sign.kernel(), &a3);

        let a5 = group(5, &["(1,2,3)", "(3,4,5)"]);
        let t = a5.enumerate_elements(100).unwrap();
        let stab = ElementMask::from_indices(60, (0..60).filter(|&i| t.element(i).apply(4) == 4));
        let natural = coset_action(&a5, &stab, 100).unwrap();
        assert_eq!(natural.target().degree(), 5);
        assert_eq!(natural.target().order(), 60);
        assert!(natural.is_transitive());
        assert_eq!(natural.kernel().count(), 1);

        let whole = coset_action(&a5, &ElementMask::full(60), 100).unwrap();
        assert_eq!(whole.target().degree(), 1);
        assert!(whole.target().is_trivial());

        let bad = ElementMask::from_indices(60, [0, 1]);
        assert!(coset_action(&a5, &bad, 100).is_err());
    }

    #[test]
    fn quotients() {
        let s4 = group(4, &["(1,2,3,4)", "(1,2)"]);
        let t = s4.enumerate_elements(100).unwrap();
        let v4 = ElementMask::from_indices(
            24,
            ["()", "(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"]
                .iter()
                .map(|s| t.index_of(&p(s, 4)).unwrap()),
        );
        let q = quotient(&s4, &v4, 100).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(q.degree(), 6);

        let c6 = group(6, &["(1,2,3,4,5,6)"]);
        let t = c6.enumerate_elements(100).unwrap();
        let c2 = t.closure(&[t.index_of(&p("(1,4)(2,5)(3,6)", 6)).unwrap()]);
        assert_eq!(quotient(&c6, &c2, 100).unwrap().order(), 3);

        let not_normal = t.closure(&[]);
        assert!(quotient(&c6, &not_normal, 100).is_ok());
        let s3 = group(3, &["(1,2,3)", "(1,2)"]);
        let t = s3.enumerate_elements(100).unwrap();
        let c2 = t.closure(&[t.index_of(&p("(1,2)", 3)).unwrap()]);
        assert!(matches!(quotient(&s3, &c2, 100), Err(Error::NotNormal)));
    }

    #[test]
    fn direct_powers() {
        let a5 = group(5, &["(1,2,3)", "(3,4,5)"]);
        let sq = direct_power(&a5, 2).unwrap();
        assert_eq!(sq.group().degree(), 10);
        assert_eq!(sq.group().order(), 3600);
        assert_eq!(direct_power(&a5, 1).unwrap().group().order(), 60);
        let c2 = group(2, &["(1,2)"]);
        let cube = direct_power(&c2, 3).unwrap();
        assert_eq!(cube.group().order(), 8);
        let t = cube.group().enumerate_elements(100).unwrap();
        assert!((0..8).all(|i| t.mul(i, i) == 0));

        let x = p("(1,2,3)", 5);
        let y = p("(2,4,5)", 5);
        for j in 0..2 {
            assert_eq!(sq.project(j, &sq.embed(j, &x)), x);
            assert!(sq.project(1 - j, &sq.embed(j, &x)).is_identity());
        }
        let t = sq.tuple(&[x.clone(), y.clone()]);
        assert_eq!(sq.project(0, &t), x);
        assert_eq!(sq.project(1, &t), y);
        assert!(sq.group().contains(&t).unwrap());
    }
}
