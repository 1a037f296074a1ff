//! Membership bitmaps over an element table.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementMask(FixedBitSet);

impl ElementMask {
    pub fn empty(len: usize) -> Self {
        ElementMask(FixedBitSet::with_capacity(len))
    }

    pub fn full(len: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(len);
        bits.insert_range(..);
        ElementMask(bits)
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = Self::empty(len);
        for i in indices {
            mask.insert(i);
        }
        mask
    }

    /// Number of elements the mask ranges over (not the number set).
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn is_subset(&self, other: &ElementMask) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &ElementMask) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersect_with(&mut self, other: &ElementMask) {
        self.0.intersect_with(&other.0);
    }

    pub fn union_with(&mut self, other: &ElementMask) {
        self.0.union_with(&other.0);
    }

    /// Little-endian hex: bit `i` is bit `i % 8` of byte `i / 8`.
    pub fn to_hex(&self) -> String {
        let mut bytes = vec![0u8; self.universe().div_ceil(8)];
        for i in self.iter() {
            bytes[i / 8] |= 1 << (i % 8);
        }
        hex::encode(bytes)
    }

    pub fn from_hex(len: usize, text: &str) -> Result<Self> {
        let bytes = hex::decode(text).map_err(|e| Error::Parse {
            position: 0,
            message: format!("bad hex mask: {e}"),
        })?;
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Parse {
                position: 0,
                message: format!("hex mask has {} bytes, expected {}", bytes.len(), len.div_ceil(8)),
            });
        }
        let mut mask = Self::empty(len);
        for (b, byte) in bytes.iter().enumerate() {
            for bit in 0..8 {
                if byte >> bit & 1 == 1 {
                    let i = b * 8 + bit;
                    if i >= len {
                        return Err(Error::Parse {
                            position: 2 * b,
                            message: "hex mask sets bits past its length".into(),
                        });
                    }
                    mask.insert(i);
                }
            }
        }
        Ok(mask)
    }
}

impl fmt::Debug for ElementMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
