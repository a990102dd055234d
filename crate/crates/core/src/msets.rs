//! N-rooted fixed-map Mandelbrot sets, accumulation maps and plateau
//! statistics.
//!
//! Roots are enumerated depth first over the binary prefix tree. A node
//! whose orbit leaves the escape disc is never expanded: every extension of
//! an escaping prefix escapes too, so the whole subtree is skipped.
//!
//! The multicritical test asks every suffix `s_{k+1} ... s_N` of a root to
//! survive. A suffix of length `L` is a word of length `L`, i.e. a node of
//! the same prefix tree at level `L`, so one pruned traversal that records
//! the surviving nodes of every level answers all suffix queries by lookup.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbit::{exceeds, map_step, ComplexValue, ParamPair};
use crate::templates::{check_depth, DyadicIntervalSet, MAX_DEPTH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalMode {
    /// Only the orbit of the critical point injected at step 0.
    Regular,
    /// The critical point re-injected at every step: all suffix orbits.
    Multicritical,
}

impl std::str::FromStr for CriticalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regular" => Ok(CriticalMode::Regular),
            "multicritical" => Ok(CriticalMode::Multicritical),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for CriticalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CriticalMode::Regular => "regular",
            CriticalMode::Multicritical => "multicritical",
        })
    }
}

/// Work limits for enumeration-backed operations.
///
/// The step estimate is `cells * 2^N * N`, an upper bound on orbit steps
/// before pruning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_depth: u32,
    pub max_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 24,
            max_steps: 10_000_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_depth: MAX_DEPTH,
            max_steps: u64::MAX,
        }
    }

    pub fn estimate(cells: u64, depth: u32) -> u128 {
        u128::from(cells) * (1u128 << depth) * u128::from(depth.max(1))
    }

    /// Accepts `cells` enumerations at `depth`, or reports the estimate.
    pub fn check(&self, cells: u64, depth: u32) -> Result<()> {
        check_depth(depth)?;
        self.check_steps(Self::estimate(cells, depth), depth)
    }

    /// Accepts a precomputed step estimate.
    pub fn check_steps(&self, estimate: u128, depth: u32) -> Result<()> {
        if depth > self.max_depth || estimate > u128::from(self.max_steps) {
            return Err(Error::BudgetExceeded {
                estimate,
                depth,
                max_steps: self.max_steps,
                max_depth: self.max_depth,
            });
        }
        Ok(())
    }
}

/// Trees at least this deep are split into subtrees evaluated in parallel.
const PARALLEL_DEPTH: u32 = 16;
/// Level at which parallel traversals split the tree.
const SPLIT_LEVEL: u32 = 8;

#[derive(Clone, Copy)]
struct Tree {
    c: [ComplexValue; 2],
    radius_sq: f64,
    depth: u32,
}

impl Tree {
    fn new(pair: &ParamPair, depth: u32) -> Self {
        Tree {
            c: [pair.c0(), pair.c1()],
            radius_sq: pair.escape_radius_sq(),
            depth,
        }
    }

    fn split_level(&self) -> u32 {
        if self.depth >= PARALLEL_DEPTH {
            SPLIT_LEVEL
        } else {
            self.depth
        }
    }

    /// Surviving nodes at `level`, in index order, with their orbit values.
    fn frontier(&self, level: u32) -> Vec<(u64, ComplexValue)> {
        fn walk(t: &Tree, z: ComplexValue, lvl: u32, idx: u64, stop: u32, out: &mut Vec<(u64, ComplexValue)>) {
            if lvl == stop {
                out.push((idx, z));
                return;
            }
            for bit in 0..2u64 {
                let next = map_step(z, t.c[bit as usize]);
                if !exceeds(next, t.radius_sq) {
                    walk(t, next, lvl + 1, (idx << 1) | bit, stop, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, ComplexValue::new(0.0, 0.0), 0, 0, level, &mut out);
        out
    }

    fn count_below(&self, z: ComplexValue, remaining: u32) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        for c in self.c {
            let next = map_step(z, c);
            if !exceeds(next, self.radius_sq) {
                total += self.count_below(next, remaining - 1);
            }
        }
        total
    }

    fn leaves_below(&self, z: ComplexValue, remaining: u32, idx: u64, out: &mut Vec<u64>) {
        if remaining == 0 {
            out.push(idx);
            return;
        }
        for bit in 0..2u64 {
            let next = map_step(z, self.c[bit as usize]);
            if !exceeds(next, self.radius_sq) {
                self.leaves_below(next, remaining - 1, (idx << 1) | bit, out);
            }
        }
    }

    /// Marks surviving nodes of the subtree rooted at `z`; `levels[r]` holds
    /// relative level `r + 1`.
    fn mark_below(&self, z: ComplexValue, rel: u32, idx: u64, levels: &mut [BitSet]) {
        if rel as usize == levels.len() {
            return;
        }
        for bit in 0..2u64 {
            let next = map_step(z, self.c[bit as usize]);
            if !exceeds(next, self.radius_sq) {
                let child = (idx << 1) | bit;
                levels[rel as usize].set(child);
                self.mark_below(next, rel + 1, child, levels);
            }
        }
    }

    fn survivor_count(&self) -> u64 {
        let split = self.split_level();
        let rest = self.depth - split;
        self.frontier(split)
            .par_iter()
            .map(|&(_, z)| self.count_below(z, rest))
            .sum()
    }

    fn survivors(&self) -> Vec<u64> {
        let split = self.split_level();
        let rest = self.depth - split;
        self.frontier(split)
            .par_iter()
            .map(|&(idx, z)| {
                let mut out = Vec::new();
                self.leaves_below(z, rest, idx, &mut out);
                out
            })
            .collect::<Vec<_>>()
            .concat()
    }

    /// Surviving nodes at every level `0..=depth`.
    fn levels(&self) -> Vec<BitSet> {
        let split = self.split_level();
        let rest = self.depth - split;
        let mut levels: Vec<BitSet> = (0..=self.depth).map(|l| BitSet::new(1u64 << l)).collect();
        levels[0].set(0);
        {
            let (top, _) = levels.split_at_mut(split as usize + 1);
            self.mark_below(ComplexValue::new(0.0, 0.0), 0, 0, &mut top[1..]);
        }
        let frontier = self.frontier(split);
        let subtrees: Vec<(u64, Vec<BitSet>)> = frontier
            .par_iter()
            .map(|&(idx, z)| {
                let mut local: Vec<BitSet> = (1..=rest).map(|r| BitSet::new(1u64 << r)).collect();
                self.mark_below(z, 0, 0, &mut local);
                (idx, local)
            })
            .collect();
        for (idx, local) in subtrees {
            for (r, bits) in local.iter().enumerate() {
                let rel = r as u32 + 1;
                levels[(split + rel) as usize].or_at(bits, idx << rel);
            }
        }
        levels
    }

    fn multicritical_survivors(&self) -> Vec<u64> {
        let depth = self.depth;
        let levels = self.levels();
        let leaves = &levels[depth as usize];
        let passes = |j: u64| {
            (1..depth).all(|k| {
                let len = depth - k;
                levels[len as usize].get(j & ((1u64 << len) - 1))
            })
        };
        leaves
            .words
            .par_chunks(1024)
            .enumerate()
            .map(|(chunk, words)| {
                let base = (chunk * 1024 * 64) as u64;
                let mut out = Vec::new();
                for (w, &word) in words.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let j = base + (w as u64) * 64 + u64::from(bits.trailing_zeros());
                        if passes(j) {
                            out.push(j);
                        }
                        bits &= bits - 1;
                    }
                }
                out
            })
            .collect::<Vec<_>>()
            .concat()
    }
}

struct BitSet {
    len: u64,
    words: Vec<u64>,
}

impl BitSet {
    fn new(len: u64) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64) as usize],
        }
    }

    #[inline]
    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// ORs `other` into `self` starting at bit `offset`.
    fn or_at(&mut self, other: &BitSet, offset: u64) {
        if offset.is_multiple_of(64) && other.len.is_multiple_of(64) {
            let start = (offset / 64) as usize;
            for (dst, src) in self.words[start..].iter_mut().zip(&other.words) {
                *dst |= src;
            }
        } else {
            for i in 0..other.len {
                if other.get(i) {
                    self.set(offset + i);
                }
            }
        }
    }
}

/// Number of depth-`N` roots passing the mode's survival test. The caller is
/// responsible for the budget.
pub(crate) fn survivor_count(pair: &ParamPair, depth: u32, mode: CriticalMode) -> u64 {
    let tree = Tree::new(pair, depth);
    match mode {
        CriticalMode::Regular => tree.survivor_count(),
        CriticalMode::Multicritical => tree.multicritical_survivors().len() as u64,
    }
}

pub(crate) fn survivor_fraction(pair: &ParamPair, depth: u32, mode: CriticalMode) -> f64 {
    survivor_count(pair, depth, mode) as f64 / (1u64 << depth) as f64
}

/// The N-rooted fixed-map Mandelbrot set: indices of all depth-`N` roots
/// whose critical orbit (every suffix orbit, in multicritical mode) stays in
/// the escape disc.
pub fn fixed_map_set(
    pair: &ParamPair,
    depth: u32,
    mode: CriticalMode,
    budget: &Budget,
) -> Result<DyadicIntervalSet> {
    budget.check(1, depth)?;
    let tree = Tree::new(pair, depth);
    let members = match mode {
        CriticalMode::Regular => tree.survivors(),
        CriticalMode::Multicritical => tree.multicritical_survivors(),
    };
    Ok(DyadicIntervalSet::from_sorted_unchecked(depth, members))
}

/// `phi^N(1)`: the fraction of depth-`N` roots that survive.
pub fn full_root_value(pair: &ParamPair, depth: u32, mode: CriticalMode, budget: &Budget) -> Result<f64> {
    budget.check(1, depth)?;
    Ok(survivor_fraction(pair, depth, mode))
}

/// True iff every depth-`N` root survives.
pub fn is_well_behaved(pair: &ParamPair, depth: u32, mode: CriticalMode, budget: &Budget) -> Result<bool> {
    budget.check(1, depth)?;
    Ok(survivor_count(pair, depth, mode) == 1u64 << depth)
}

/// The accumulation map `phi^N` sampled at the breakpoints `j 2^-N`.
///
/// Values are stored as cumulative member counts, so every value is exactly
/// `count * 2^-N`. Between breakpoints the map is linear: slope 1 across a
/// member interval and flat across a non-member interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    depth: u32,
    cumulative: Vec<u32>,
}

impl StepFunction {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Number of breakpoints, `2^N + 1`.
    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn scale(&self) -> f64 {
        1.0 / (1u64 << self.depth) as f64
    }

    /// `phi^N(j 2^-N)`.
    pub fn value(&self, j: usize) -> f64 {
        f64::from(self.cumulative[j]) * self.scale()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let scale = self.scale();
        self.cumulative.iter().map(move |&n| f64::from(n) * scale)
    }

    /// Breakpoint abscissae `j 2^-N`, `j = 0..=2^N`.
    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        let scale = self.scale();
        (0..self.cumulative.len()).map(move |j| j as f64 * scale)
    }

    /// Whether the map rises across cell `j`.
    pub fn rises(&self, j: usize) -> bool {
        self.cumulative[j + 1] != self.cumulative[j]
    }

    /// Evaluates the piecewise-linear map at `t` in `[0, 1]`.
    pub fn eval(&self, t: f64) -> f64 {
        let cells = (1u64 << self.depth) as f64;
        let t = t.clamp(0.0, 1.0);
        let j = ((t * cells).floor() as usize).min(self.cumulative.len() - 2);
        let left = self.value(j);
        if self.rises(j) {
            left + (t - j as f64 / cells)
        } else {
            left
        }
    }
}

pub fn accumulation_map(set: &DyadicIntervalSet) -> StepFunction {
    let cells = set.cell_count() as usize;
    let mut cumulative = Vec::with_capacity(cells + 1);
    let mut members = set.members().iter().peekable();
    let mut count = 0u32;
    cumulative.push(0);
    for j in 0..cells as u64 {
        if members.next_if_eq(&&j).is_some() {
            count += 1;
        }
        cumulative.push(count);
    }
    StepFunction {
        depth: set.depth(),
        cumulative,
    }
}

/// Counts `s(l)` of maximal flat runs of length `l` (in cells of width
/// `2^-N`). Only the `2^N` cells of `[0, 1]` are considered.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlateauHistogram {
    pub depth: u32,
    pub counts: BTreeMap<u64, u64>,
}

impl PlateauHistogram {
    /// Total length of all plateaus, in cells.
    pub fn flat_cells(&self) -> u64 {
        self.counts.iter().map(|(l, s)| l * s).sum()
    }
}

pub fn plateau_histogram(f: &StepFunction) -> PlateauHistogram {
    let mut counts = BTreeMap::new();
    let mut run = 0u64;
    for j in 0..f.len() - 1 {
        if f.rises(j) {
            if run > 0 {
                *counts.entry(run).or_insert(0) += 1;
            }
            run = 0;
        } else {
            run += 1;
        }
    }
    if run > 0 {
        *counts.entry(run).or_insert(0) += 1;
    }
    PlateauHistogram {
        depth: f.depth(),
        counts,
    }
}

/// Points `(ln l, ln(s(l) + 1))`. With `include_unrepresented`, every length
/// `1..=2^N` is emitted and absent lengths land on `ln 1 = 0`.
pub fn loglog_points(h: &PlateauHistogram, include_unrepresented: bool) -> Vec<(f64, f64)> {
    let point = |l: u64, s: u64| ((l as f64).ln(), ((s + 1) as f64).ln());
    if include_unrepresented {
        (1..=1u64 << h.depth)
            .map(|l| point(l, h.counts.get(&l).copied().unwrap_or(0)))
            .collect()
    } else {
        h.counts.iter().map(|(&l, &s)| point(l, s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::survives;
    use crate::templates::TemplateRoot;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn pair(c0: (f64, f64), c1: (f64, f64)) -> ParamPair {
        ParamPair::new(c(c0.0, c0.1), c(c1.0, c1.1))
    }

    const MODES: [CriticalMode; 2] = [CriticalMode::Regular, CriticalMode::Multicritical];

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn origin_pair_keeps_everything() {
        let p = pair((0.0, 0.0), (0.0, 0.0));
        for mode in MODES {
            let set = fixed_map_set(&p, 3, mode, &budget()).unwrap();
            assert_eq!(set.members(), &[0, 1, 2, 3, 4, 5, 6, 7]);
            assert_eq!(set.measure(), 1.0);
            assert_eq!(full_root_value(&p, 9, mode, &budget()).unwrap(), 1.0);
        }
        assert!(is_well_behaved(&p, 20, CriticalMode::Regular, &budget()).unwrap());
    }

    #[test]
    fn large_parameters_lose_everything() {
        let p = pair((3.0, 0.0), (3.0, 0.0));
        for mode in MODES {
            assert!(fixed_map_set(&p, 2, mode, &budget()).unwrap().is_empty());
            for n in 2..8 {
                assert_eq!(full_root_value(&p, n, mode, &budget()).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn one_escaping_root_breaks_well_behavedness() {
        let p = pair((0.0, 0.0), (3.0, 0.0));
        assert!(!survives(&p, &"1000".parse::<TemplateRoot>().unwrap()));
        assert!(!is_well_behaved(&p, 4, CriticalMode::Regular, &budget()).unwrap());
    }

    #[test]
    fn depth_zero_is_the_whole_interval() {
        let p = pair((3.0, 0.0), (3.0, 0.0));
        for mode in MODES {
            let set = fixed_map_set(&p, 0, mode, &budget()).unwrap();
            assert_eq!(set.members(), &[0]);
        }
    }

    #[test]
    fn budget_limits() {
        let p = pair((0.0, 0.0), (0.0, 0.0));
        assert!(matches!(
            fixed_map_set(&p, 25, CriticalMode::Regular, &budget()),
            Err(Error::BudgetExceeded { depth: 25, .. })
        ));
        assert!(matches!(
            full_root_value(&p, 31, CriticalMode::Regular, &Budget::unlimited()),
            Err(Error::DepthTooLarge(31))
        ));
        let tight = Budget {
            max_depth: 24,
            max_steps: 1000,
        };
        // 2^7 * 7 = 896, 2^8 * 8 = 2048
        assert!(full_root_value(&p, 7, CriticalMode::Regular, &tight).is_ok());
        assert!(full_root_value(&p, 8, CriticalMode::Regular, &tight).is_err());
    }

    #[test]
    fn parallel_split_matches_sequential_walk() {
        // Depth 17 takes the split path; compare with the single-walk leaves.
        let p = pair((-0.12, 0.75), (-0.6, -0.6));
        let tree = Tree::new(&p, 17);
        let mut sequential = Vec::new();
        tree.leaves_below(c(0.0, 0.0), 17, 0, &mut sequential);
        assert_eq!(tree.survivors(), sequential);
        assert_eq!(tree.survivor_count(), sequential.len() as u64);
        let levels = tree.levels();
        for (l, bits) in levels.iter().enumerate() {
            let mut expect = Vec::new();
            tree.leaves_below(c(0.0, 0.0), l as u32, 0, &mut expect);
            let got: Vec<u64> = (0..1u64 << l).filter(|&i| bits.get(i)).collect();
            assert_eq!(got, expect, "level {l}");
        }
    }

    #[test]
    fn accumulation_examples() {
        let full = accumulation_map(&DyadicIntervalSet::full(3).unwrap());
        let expect: Vec<f64> = (0..=8).map(|j| j as f64 / 8.0).collect();
        assert_eq!(full.values().collect::<Vec<_>>(), expect);

        let empty = accumulation_map(&DyadicIntervalSet::empty(3).unwrap());
        assert!(empty.values().all(|v| v == 0.0));

        let comb = accumulation_map(&DyadicIntervalSet::new(2, vec![0, 2]).unwrap());
        assert_eq!(comb.values().collect::<Vec<_>>(), vec![0.0, 0.25, 0.25, 0.5, 0.5]);
        assert_eq!(comb.eval(0.125), 0.125);
        assert_eq!(comb.eval(0.375), 0.25);
        assert_eq!(comb.eval(1.0), 0.5);
    }

    #[test]
    fn plateau_examples() {
        let full = accumulation_map(&DyadicIntervalSet::full(4).unwrap());
        assert!(plateau_histogram(&full).counts.is_empty());

        let empty = accumulation_map(&DyadicIntervalSet::empty(4).unwrap());
        let h = plateau_histogram(&empty);
        assert_eq!(h.counts, BTreeMap::from([(16, 1)]));

        let comb = accumulation_map(&DyadicIntervalSet::new(2, vec![0, 2]).unwrap());
        let h = plateau_histogram(&comb);
        assert_eq!(h.counts, BTreeMap::from([(1, 2)]));
        assert_eq!(h.flat_cells(), 2);
    }

    #[test]
    fn loglog_examples() {
        let h = PlateauHistogram {
            depth: 2,
            counts: BTreeMap::from([(1, 2)]),
        };
        assert_eq!(loglog_points(&h, false), vec![(0.0, 3f64.ln())]);
        let all = loglog_points(&h, true);
        assert_eq!(all.len(), 4);
        assert_eq!(all[1], (2f64.ln(), 0.0));

        assert!(loglog_points(&PlateauHistogram::default(), false).is_empty());

        let h = PlateauHistogram {
            depth: 5,
            counts: BTreeMap::from([(32, 1)]),
        };
        let pts = loglog_points(&h, false);
        assert!((pts[0].0 - 5.0 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(pts[0].1, 2f64.ln());
    }

    #[test]
    fn plateau_lengths_account_for_flat_cells() {
        let p = pair((-0.117, -0.76), (-0.62, -0.62));
        let set = fixed_map_set(&p, 12, CriticalMode::Regular, &budget()).unwrap();
        let f = accumulation_map(&set);
        assert_eq!(f.value(f.len() - 1), set.measure());
        let h = plateau_histogram(&f);
        assert_eq!(h.flat_cells(), 4096 - set.len() as u64);
    }
}
