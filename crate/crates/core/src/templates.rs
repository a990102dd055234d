//! Finite template roots, the binary-expansion encoding of roots into
//! `[0, 1]`, dyadic interval sets and seeded random roots.
//!
//! Bit order: the first bit of a root is the first map applied and is also
//! the most significant bit of its index, so root `j` at depth `N` covers the
//! half-open interval `[j 2^-N, (j + 1) 2^-N)`.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest depth accepted wherever roots are enumerated or indexed.
pub const MAX_DEPTH: u32 = 30;

pub fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_DEPTH {
        Err(Error::DepthTooLarge(depth))
    } else {
        Ok(())
    }
}

/// A finite binary word `s_1 ... s_N`; bit `0` selects `f_{c0}`, bit `1`
/// selects `f_{c1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TemplateRoot {
    bits: Vec<bool>,
}

impl TemplateRoot {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        TemplateRoot { bits }
    }

    /// Big-endian `depth`-bit expansion of `index`.
    pub fn from_index(index: u64, depth: u32) -> Result<Self> {
        check_depth(depth)?;
        if index >= 1u64 << depth {
            return Err(Error::IndexOutOfRange { index, depth });
        }
        let bits = (0..depth).rev().map(|k| (index >> k) & 1 == 1).collect();
        Ok(TemplateRoot { bits })
    }

    /// A root of `len` copies of one bit.
    pub fn constant(bit: bool, len: usize) -> Self {
        TemplateRoot {
            bits: vec![bit; len],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Big-endian integer value of the bits, defined for roots of at most
    /// [`MAX_DEPTH`] bits.
    pub fn index(&self) -> Result<u64> {
        check_depth(self.bits.len() as u32)?;
        Ok(self
            .bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }

    /// `sum_n s_n 2^-n`. Exact for roots of up to 53 bits.
    pub fn psi_value(&self) -> f64 {
        // Horner from the last bit keeps every partial sum dyadic.
        self.bits
            .iter()
            .rev()
            .fold(0.0, |acc, &b| (acc + if b { 1.0 } else { 0.0 }) * 0.5)
    }

    /// The right `k`-shift `s_{k+1} ... s_N`.
    pub fn suffix(&self, k: usize) -> Result<Self> {
        if k > self.bits.len() {
            return Err(Error::ShiftOutOfRange {
                shift: k,
                len: self.bits.len(),
            });
        }
        Ok(TemplateRoot {
            bits: self.bits[k..].to_vec(),
        })
    }
}

impl fmt::Display for TemplateRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for TemplateRoot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TemplateRoot { bits })
    }
}

pub fn psi_value(root: &TemplateRoot) -> f64 {
    root.psi_value()
}

pub fn root_from_index(index: u64, depth: u32) -> Result<TemplateRoot> {
    TemplateRoot::from_index(index, depth)
}

pub fn suffix(root: &TemplateRoot, k: usize) -> Result<TemplateRoot> {
    root.suffix(k)
}

/// A union of half-open dyadic intervals `[j 2^-N, (j + 1) 2^-N)` in `[0, 1]`,
/// stored as the sorted indices `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicIntervalSet {
    depth: u32,
    members: Vec<u64>,
}

impl DyadicIntervalSet {
    /// Validates that `members` is strictly increasing and inside `[0, 2^depth)`.
    pub fn new(depth: u32, members: Vec<u64>) -> Result<Self> {
        check_depth(depth)?;
        let cells = 1u64 << depth;
        if let Some(&bad) = members.iter().find(|&&j| j >= cells) {
            return Err(Error::IndexOutOfRange { index: bad, depth });
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "interval indices must be strictly increasing".into(),
            ));
        }
        Ok(DyadicIntervalSet { depth, members })
    }

    pub(crate) fn from_sorted_unchecked(depth: u32, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        DyadicIntervalSet { depth, members }
    }

    pub fn empty(depth: u32) -> Result<Self> {
        Self::new(depth, Vec::new())
    }

    pub fn full(depth: u32) -> Result<Self> {
        check_depth(depth)?;
        Ok(DyadicIntervalSet {
            depth,
            members: (0..1u64 << depth).collect(),
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn cell_count(&self) -> u64 {
        1u64 << self.depth
    }

    pub fn contains(&self, index: u64) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    /// Lebesgue measure, `|members| 2^-N`. Exact.
    pub fn measure(&self) -> f64 {
        self.members.len() as f64 / self.cell_count() as f64
    }

    /// The same set at depth `N + 1`: every `j` becomes `{2j, 2j + 1}`.
    pub fn refine(&self) -> Result<Self> {
        check_depth(self.depth + 1)?;
        let members = self
            .members
            .iter()
            .flat_map(|&j| [2 * j, 2 * j + 1])
            .collect();
        Ok(DyadicIntervalSet {
            depth: self.depth + 1,
            members,
        })
    }

    /// Set inclusion; both sets must have the same depth.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.depth == other.depth && self.members.iter().all(|&j| other.contains(j))
    }

    pub fn roots(&self) -> impl Iterator<Item = TemplateRoot> + '_ {
        self.members
            .iter()
            .map(move |&j| TemplateRoot::from_index(j, self.depth).expect("validated member"))
    }
}

/// Parameters of an i.i.d. Bernoulli template root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomTemplateSpec {
    one_probability: f64,
    length: usize,
    seed: u64,
}

impl RandomTemplateSpec {
    pub fn new(one_probability: f64, length: usize, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&one_probability) {
            return Err(Error::InvalidArgument(format!(
                "probability {one_probability} outside [0, 1]"
            )));
        }
        Ok(RandomTemplateSpec {
            one_probability,
            length,
            seed,
        })
    }

    pub fn one_probability(&self) -> f64 {
        self.one_probability
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draws a root bit by bit from ChaCha8 (`rand_chacha` 0.3,
/// `seed_from_u64(seed)`). Each bit consumes one `next_u64`; its top 53 bits
/// form a uniform `u` in `[0, 1)` and the bit is `u < p`.
pub fn random_root(spec: &RandomTemplateSpec) -> TemplateRoot {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bits = (0..spec.length)
        .map(|_| ((rng.next_u64() >> 11) as f64 * SCALE) < spec.one_probability)
        .collect();
    TemplateRoot { bits }
}
