//! Named groups and the descriptor grammar.
//!
//! ```text
//! S<n> | A<n> | C<n> | D<n> | Q8 | PSL(2,<q>) | <desc>^<m> | perm:<degree>:<gen>;<gen>;...
//! ```
//!
//! `D<n>` is the dihedral group of *order* `n` (so `D8` is the symmetry
//! group of a square). `PSL(2,q)` is taken for primes `q <= 31`, acting on
//! the `q+1` points of the projective line. Explicit generators are written
//! in one-based cycle notation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{direct_power, PermGroup, DEFAULT_ELEMENT_CAP};
use crate::perm::Permutation;
use crate::structure::{conjugacy_classes, normal_closure};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(usize),
    /// Parameter is the group order.
    Dihedral(usize),
    Quaternion8,
    Psl2(u32),
    Power(Box<GroupDescriptor>, usize),
    Explicit {
        degree: usize,
        generators: Vec<String>,
    },
}

pub fn parse_descriptor(text: &str) -> Result<GroupDescriptor> {
    text.parse()
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parser = Parser { text: &compact, pos: 0 };
        let desc = parser.descriptor()?;
        if parser.pos != compact.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(desc)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<usize> {
        let digits = self.rest().bytes().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        let value = self.rest()[..digits]
            .parse()
            .map_err(|_| self.error("number out of range"))?;
        self.pos += digits;
        Ok(value)
    }

    fn descriptor(&mut self) -> Result<GroupDescriptor> {
        if self.eat("perm:") {
            return self.explicit();
        }
        let start = self.pos;
        let mut desc = if self.eat("PSL(2,") {
            let q = self.number()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            if !is_prime(q) || q > 31 {
                return Err(Error::Unsupported(format!("PSL(2,{q}): q must be a prime at most 31")));
            }
            GroupDescriptor::Psl2(q as u32)
        } else if self.eat("Q8") {
            GroupDescriptor::Quaternion8
        } else {
            let kind = self.rest().chars().next();
            self.pos += kind.map_or(0, |c| c.len_utf8());
            let make: fn(usize) -> GroupDescriptor = match kind {
                Some('S') => GroupDescriptor::Symmetric,
                Some('A') => GroupDescriptor::Alternating,
                Some('C') => GroupDescriptor::Cyclic,
                Some('D') => GroupDescriptor::Dihedral,
                _ => {
                    self.pos = start;
                    return Err(self.error("expected S, A, C, D, Q8, PSL(2,q) or perm:"));
                }
            };
            let n = self.number()?;
            let desc = make(n);
            desc.check_parameters()?;
            desc
        };
        while self.eat("^") {
            let m = self.number()?;
            if m == 0 {
                return Err(Error::Unsupported("power exponent must be at least 1".into()));
            }
            desc = GroupDescriptor::Power(Box::new(desc), m);
        }
        Ok(desc)
    }

    fn explicit(&mut self) -> Result<GroupDescriptor> {
        let degree = self.number()?;
        if degree == 0 {
            return Err(Error::Unsupported("degree must be positive".into()));
        }
        if !self.eat(":") {
            return Err(self.error("expected ':' after the degree"));
        }
        let body = self.rest().to_string();
        let generators: Vec<String> = body
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| s.to_string())
            .collect();
        let mut offset = self.pos;
        for g in &generators {
            Permutation::parse_cycles(g, degree).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position: offset + position,
                    message,
                },
                other => other,
            })?;
            offset += g.len() + 1;
        }
        if generators.is_empty() {
            return Err(self.error("expected at least one generator"));
        }
        self.pos = self.text.len();
        Ok(GroupDescriptor::Explicit { degree, generators })
    }
}

impl GroupDescriptor {
    fn check_parameters(&self) -> Result<()> {
        match *self {
            GroupDescriptor::Symmetric(n) | GroupDescriptor::Alternating(n) if n == 0 || n > 30 => {
                Err(Error::Unsupported(format!("{self}: degree must be in 1..=30")))
            }
            GroupDescriptor::Cyclic(0) => Err(Error::Unsupported("C0".into())),
            GroupDescriptor::Dihedral(n) if n < 2 || n % 2 == 1 => Err(Error::Unsupported(format!(
                "{self}: dihedral order must be even and at least 2"
            ))),
            _ => Ok(()),
        }
    }

    /// Order predicted by the family formula, when there is one.
    pub fn expected_order(&self) -> Option<u128> {
        Some(match self {
            GroupDescriptor::Symmetric(n) => factorial(*n),
            GroupDescriptor::Alternating(n) => (factorial(*n) / 2).max(1),
            GroupDescriptor::Cyclic(n) | GroupDescriptor::Dihedral(n) => *n as u128,
            GroupDescriptor::Quaternion8 => 8,
            GroupDescriptor::Psl2(q) => {
                let q = *q as u128;
                q * (q * q - 1) / if q == 2 { 1 } else { 2 }
            }
            GroupDescriptor::Power(inner, m) => inner.expected_order()?.checked_pow(*m as u32)?,
            GroupDescriptor::Explicit { .. } => return None,
        })
    }

    /// Builds the group with the family's fixed generators and checks its
    /// order against the family formula.
    pub fn resolve(&self) -> Result<PermGroup> {
        let group = match self {
            GroupDescriptor::Power(inner, m) => direct_power(&inner.resolve()?, *m)?.group().clone(),
            GroupDescriptor::Explicit { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| Permutation::parse_cycles(g, *degree))
                    .collect::<Result<Vec<_>>>()?;
                PermGroup::new(*degree, gens)?
            }
            _ => {
                let (degree, cycles) = self.family_generators();
                let gens = cycles
                    .iter()
                    .map(|c| Permutation::parse_cycles(c, degree))
                    .collect::<Result<Vec<_>>>()?;
                PermGroup::new(degree, gens)?
            }
        };
        if let Some(expected) = self.expected_order() {
            if group.order() != expected {
                return Err(Error::Consistency(format!(
                    "{self} resolved to order {}, expected {expected}",
                    group.order()
                )));
            }
        }
        if let GroupDescriptor::Psl2(q) = self {
            if *q >= 5 && !is_simple(&group)? {
                return Err(Error::Consistency(format!("{self} is not simple")));
            }
        }
        Ok(group)
    }

    /// Degree and one-based cycle strings of the fixed generators of a named
    /// family.
    fn family_generators(&self) -> (usize, Vec<String>) {
        let cycle = |points: std::ops::RangeInclusive<usize>| -> String {
            let pts: Vec<String> = points.map(|p| p.to_string()).collect();
            format!("({})", pts.join(","))
        };
        match *self {
            GroupDescriptor::Symmetric(n) if n >= 2 => (n, vec![cycle(1..=n), "(1,2)".into()]),
            GroupDescriptor::Alternating(n) if n >= 4 => {
                let long = if n % 2 == 1 { cycle(1..=n) } else { cycle(2..=n) };
                (n, vec!["(1,2,3)".into(), long])
            }
            GroupDescriptor::Alternating(3) => (3, vec!["(1,2,3)".into()]),
            GroupDescriptor::Symmetric(n) | GroupDescriptor::Alternating(n) => (n, vec!["()".into()]),
            GroupDescriptor::Cyclic(1) => (1, vec!["()".into()]),
            GroupDescriptor::Cyclic(n) => (n, vec![cycle(1..=n)]),
            GroupDescriptor::Dihedral(2) => (2, vec!["(1,2)".into()]),
            GroupDescriptor::Dihedral(4) => (4, vec!["(1,2)(3,4)".into(), "(1,3)(2,4)".into()]),
            GroupDescriptor::Dihedral(n) => {
                let k = n / 2;
                let flips: String = (1..=k / 2).map(|i| format!("({},{})", i, k + 1 - i)).collect();
                (k, vec![cycle(1..=k), flips])
            }
            GroupDescriptor::Quaternion8 => (
                8,
                // right multiplication by i and j on 1,-1,i,-i,j,-j,k,-k
                vec!["(1,3,2,4)(5,8,6,7)".into(), "(1,5,2,6)(3,7,4,8)".into()],
            ),
            GroupDescriptor::Psl2(q) => {
                let q = q as u64;
                // points 1..=q are x = 0..q-1, point q+1 is infinity
                let translate = Permutation::from_images(
                    (0..=q)
                        .map(|x| if x == q { q as u32 } else { ((x + 1) % q) as u32 })
                        .collect(),
                )
                .unwrap();
                let invert = Permutation::from_images(
                    (0..=q)
                        .map(|x| match x {
                            0 => q as u32,
                            x if x == q => 0,
                            x => ((q - mod_inverse(x, q)) % q) as u32,
                        })
                        .collect(),
                )
                .unwrap();
                (q as usize + 1, vec![translate.to_string(), invert.to_string()])
            }
            GroupDescriptor::Power(..) | GroupDescriptor::Explicit { .. } => unreachable!(),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Symmetric(n) => write!(f, "S{n}"),
            GroupDescriptor::Alternating(n) => write!(f, "A{n}"),
            GroupDescriptor::Cyclic(n) => write!(f, "C{n}"),
            GroupDescriptor::Dihedral(n) => write!(f, "D{n}"),
            GroupDescriptor::Quaternion8 => write!(f, "Q8"),
            GroupDescriptor::Psl2(q) => write!(f, "PSL(2,{q})"),
            GroupDescriptor::Power(inner, m) => write!(f, "{inner}^{m}"),
            GroupDescriptor::Explicit { degree, generators } => {
                write!(f, "perm:{degree}:{}", generators.join(";"))
            }
        }
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A permutation group as `{degree, generators}` with cycle-notation
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<String>,
}

impl GroupJson {
    pub fn from_group(group: &PermGroup) -> Self {
        GroupJson {
            degree: group.degree(),
            generators: group.generators().iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn to_group(&self) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| Permutation::parse_cycles(g, self.degree))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.degree, gens)
    }
}

/// Nonabelian and no proper nontrivial normal subgroup: the normal closure
/// of every nontrivial class representative is the whole group.
pub fn is_simple(group: &PermGroup) -> Result<bool> {
    if group.order() == 1 {
        return Ok(false);
    }
    let classes = conjugacy_classes(group, DEFAULT_ELEMENT_CAP)?;
    let n = group.order() as usize;
    for class in classes.classes().iter().skip(1) {
        if normal_closure(group, &[class.representative], DEFAULT_ELEMENT_CAP)?.count() != n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The named groups used by the test suites, in increasing order.
pub fn standard_catalog() -> Vec<GroupDescriptor> {
    [
        "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C12", "C2^2", "C2^3", "C3^2", "C2^4", "C4^2",
        "D6", "D8", "D10", "D12", "D14", "D16", "D18", "D20", "Q8", "S3", "S4", "S5", "A4", "A5", "A6", "PSL(2,7)",
        "PSL(2,5)", "S3^2", "D8^2", "Q8^2", "A4^2", "C6^2",
    ]
    .iter()
    .map(|s| s.parse().expect("catalog entry parses"))
    .collect()
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn mod_inverse(x: u64, q: u64) -> u64 {
    (1..q).find(|y| x * y % q == 1).expect("q is prime")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::quotient;
    use crate::structure::{all_subgroups, center};

    #[test]
    fn parse_and_resolve() {
        let a5 = parse_descriptor("A5").unwrap();
        assert_eq!(a5, GroupDescriptor::Alternating(5));
        assert_eq!(a5.resolve().unwrap().order(), 60);

        let psl = parse_descriptor("PSL(2,7)").unwrap().resolve().unwrap();
        assert_eq!(psl.order(), 168);
        assert_eq!(psl.degree(), 8);

        let sq = parse_descriptor("A5^2").unwrap().resolve().unwrap();
        assert_eq!(sq.order(), 3600);
        assert_eq!(sq.degree(), 10);
    }

    #[test]
    fn family_shapes() {
        let d8 = parse_descriptor("D8").unwrap().resolve().unwrap();
        assert_eq!((d8.order(), d8.degree()), (8, 4));
        let q8 = parse_descriptor("Q8").unwrap().resolve().unwrap();
        assert_eq!((q8.order(), q8.degree()), (8, 8));
        let c12 = parse_descriptor("C12").unwrap().resolve().unwrap();
        assert_eq!((c12.order(), c12.degree()), (12, 12));
    }

    #[test]
    fn quaternion_quotient_by_center() {
        // Oracle: the multiplication table of the regular representation.
        let q8 = GroupDescriptor::Quaternion8.resolve().unwrap();
        let t = q8.enumerate_elements(100).unwrap();
        let squares: std::collections::HashSet<usize> = (0..8).map(|x| t.mul(x, x)).collect();
        assert_eq!(squares.len(), 2, "Q8 has a unique involution");
        assert_eq!(lattice_count(&q8), 6);
        let z = center(&q8, 100).unwrap();
        assert_eq!(z.count(), 2);
        let q = quotient(&q8, &z, 100).unwrap();
        assert_eq!(q.order(), 4);
        let qt = q.enumerate_elements(100).unwrap();
        assert!((0..4).all(|x| qt.mul(x, x) == 0));
    }

    fn lattice_count(g: &PermGroup) -> usize {
        all_subgroups(g, 100).unwrap().len()
    }

    #[test]
    fn psl2_family() {
        for q in [2u32, 3, 5, 7, 11, 13] {
            let d = GroupDescriptor::Psl2(q);
            let g = d.resolve().unwrap();
            assert_eq!(Some(g.order()), d.expected_order());
            if q >= 5 {
                assert!(is_simple(&g).unwrap());
            }
        }
        assert!(!is_simple(&parse_descriptor("A4").unwrap().resolve().unwrap()).unwrap());
        assert!(is_simple(&parse_descriptor("A6").unwrap().resolve().unwrap()).unwrap());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "S4",
            "A5^2",
            "PSL(2,11)",
            "Q8",
            "D12",
            "C6^2^2",
            "perm:4:(1,2,3,4);(1,3)",
        ] {
            let d = parse_descriptor(text).unwrap();
            assert_eq!(d.to_string(), text);
            assert_eq!(parse_descriptor(&d.to_string()).unwrap(), d);
        }
        assert_eq!(parse_descriptor(" PSL( 2 , 7 ) ").unwrap().to_string(), "PSL(2,7)");
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "",
            "X5",
            "A",
            "D7",
            "PSL(2,8)",
            "PSL(2,37)",
            "A5^0",
            "A5x",
            "perm:3:(1,4)",
            "perm:3:",
        ] {
            assert!(parse_descriptor(bad).is_err(), "{bad}");
        }
        match parse_descriptor("A5x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn catalog_orders_match_formulas() {
        for d in standard_catalog() {
            let g = d.resolve().unwrap();
            assert_eq!(Some(g.order()), d.expected_order(), "{d}");
        }
    }

    #[test]
    fn explicit_generators() {
        let d = parse_descriptor("perm:4:(1,2,3);(2,3,4)").unwrap();
        let g = d.resolve().unwrap();
        assert_eq!(g.order(), 12);
        let json = GroupJson::from_group(&g);
        assert_eq!(json.to_group().unwrap().order(), 12);
    }
}
