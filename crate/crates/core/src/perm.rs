//! Permutations of `{0, .., n-1}` stored as image arrays.
//!
//! Products are read left to right: `p.then(&q)` first applies `p`, then `q`,
//! so `x ↦ q(p(x))`. Conjugation follows the same convention,
//! `s^g = g⁻¹ s g`, i.e. `x ↦ g(s(g⁻¹(x)))`.
//!
//! Points are zero-based in memory. The cycle notation accepted and produced
//! here is one-based, e.g. `"(1,2,3)(4,5)"`, with `"()"` for the identity.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "image array {images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from zero-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} exceeds degree {degree}",
                        a.max(b) + 1
                    )));
                }
                if touched[a as usize] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} appears twice in cycle notation",
                        a + 1
                    )));
                }
                touched[a as usize] = true;
                images[a as usize] = b;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[g.images[x] as usize] = g.images[y as usize];
        }
        Permutation { images }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Nontrivial cycles, each starting at its smallest point, in order of
    /// that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.fixed_points() == 0
    }

    pub fn smallest_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Parses one-based cycle notation such as `"(1,2,3)(4,5)"`.
    ///
    /// Whitespace is ignored anywhere; points may also be separated by
    /// spaces alone (`"(1 2 3)"`). The identity is `"()"`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycle_list(text)?;
        let zero_based: Vec<Vec<u32>> = cycles
            .into_iter()
            .map(|c| c.into_iter().map(|p| p - 1).collect())
            .collect();
        Permutation::from_cycles(degree, &zero_based)
    }

    /// One-based cycle notation; `"()"` for the identity.
    pub fn to_cycle_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Free-function form of [`Permutation::then`] that checks degrees.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            expected: p.degree(),
            found: q.degree(),
        });
    }
    Ok(p.then(q))
}

/// Parses a list of one-based cycles, returning them as written.
fn parse_cycle_list(text: &str) -> Result<Vec<Vec<u32>>> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut cycles = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(Error::Parse {
            position: pos,
            message: "empty permutation; write \"()\" for the identity".into(),
        });
    }
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(Error::Parse {
                position: pos,
                message: format!("expected '(' but found {:?}", bytes[pos] as char),
            });
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err(Error::Parse {
                    position: pos,
                    message: "unterminated cycle".into(),
                });
            }
            match bytes[pos] {
                b')' => {
                    pos += 1;
                    break;
                }
                b',' if !cycle.is_empty() => pos += 1,
                b'0'..=b'9' => {
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let value: u32 = text[start..pos].parse().map_err(|_| Error::Parse {
                        position: start,
                        message: "point out of range".into(),
                    })?;
                    if value == 0 {
                        return Err(Error::Parse {
                            position: start,
                            message: "points are one-based; 0 is not a point".into(),
                        });
                    }
                    cycle.push(value);
                }
                c => {
                    return Err(Error::Parse {
                        position: pos,
                        message: format!("unexpected character {:?}", c as char),
                    })
                }
            }
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
        skip_ws(&mut pos);
    }
    Ok(cycles)
}

/// Largest point mentioned in a cycle string (one-based); 0 for `"()"`.
pub fn max_point(text: &str) -> Result<u32> {
    Ok(parse_cycle_list(text)?.iter().flatten().copied().max().unwrap_or(0))
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
