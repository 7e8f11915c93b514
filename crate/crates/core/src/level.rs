//! Stack levels of a run and the witnesses built on them.
//!
//! An `N`-level over a stack profile `s` is a triple `i < j < k` with
//! `s_i = s_k`, `s_j = s_i + N`, and `s_i ≤ s_m ≤ s_j` for every `m` in
//! `[i, k]`: the stack climbs `N` symbols and comes back down without leaving
//! that band. All indices are path positions.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::pda::{NormalizedPda, StateId, SymbolId};
use crate::runner::RunPath;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub n: usize,
}

impl LevelTriple {
    /// Checks every defining condition against `profile`.
    pub fn is_valid(&self, profile: &[usize]) -> bool {
        let &LevelTriple { i, j, k, n } = self;
        if !(i < j && j < k && k < profile.len()) || n == 0 {
            return false;
        }
        let (low, high) = (profile[i], profile[j]);
        profile[k] == low && high == low + n && profile[i..=k].iter().all(|&s| low <= s && s <= high)
    }
}

impl fmt::Display for LevelTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}) N={}", self.i, self.j, self.k, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("height {h} is outside [{low}, {high}]")]
    HeightOutOfRange { h: usize, low: usize, high: usize },
    #[error("height 0 has no top symbol")]
    NoTopSymbol,
    #[error("top symbol at first pop of height {h} differs from the one at its last push")]
    TopSymbolMismatch { h: usize },
    #[error("position {pos} is past the end of the run")]
    PositionOutOfRange { pos: usize },
    #[error("sublevel {target} requested from a level of {n}")]
    TargetTooLarge { target: usize, n: usize },
}

/// For each position, the lowest value reachable on its side before the
/// profile exceeds that position's value.
fn band_minima<I: Iterator<Item = usize>>(values: I) -> Vec<usize> {
    // (value, minimum over the segment this entry absorbed)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    values
        .map(|v| {
            let mut low = v;
            while let Some(&(top, seg_min)) = stack.last() {
                if top > v {
                    break;
                }
                low = low.min(seg_min);
                stack.pop();
            }
            stack.push((v, low));
            low
        })
        .collect()
}

/// Largest `N` admitting an `N`-level with `k ≤ window_end`, and the first
/// witness found (smallest peak `j`).
///
/// Linear time: for a peak `j` the best level is limited by how far the
/// profile descends on each side before rising above `s_j`.
pub fn max_level(profile: &[usize], window_end: usize) -> (usize, Option<LevelTriple>) {
    if profile.is_empty() {
        return (0, None);
    }
    let end = window_end.min(profile.len() - 1);
    let s = &profile[..=end];
    let left = band_minima(s.iter().copied());
    let mut right = band_minima(s.iter().rev().copied());
    right.reverse();

    let mut best: Option<(usize, usize)> = None;
    for j in 0..s.len() {
        let n = (s[j] - left[j]).min(s[j] - right[j]);
        if n > 0 && best.is_none_or(|(b, _)| n > b) {
            best = Some((n, j));
        }
    }
    let Some((n, j)) = best else { return (0, None) };
    let base = s[j] - n;
    let i = (0..j).rev().find(|&m| s[m] == base).expect("left band reaches base");
    let k = (j + 1..s.len()).find(|&m| s[m] == base).expect("right band reaches base");
    (n, Some(LevelTriple { i, j, k, n }))
}

/// Reference implementation of [`max_level`]: enumerates triples in
/// lexicographic order and tests the conditions directly, stopping each scan
/// as soon as a condition can no longer hold.
pub fn brute_force_max_level(profile: &[usize], window_end: usize) -> (usize, Option<LevelTriple>) {
    if profile.is_empty() {
        return (0, None);
    }
    let end = window_end.min(profile.len() - 1);
    let s = profile;
    let mut best: Option<LevelTriple> = None;
    for i in 0..=end {
        let mut rise_max = s[i];
        for j in i + 1..=end {
            if s[j] < s[i] {
                break;
            }
            rise_max = rise_max.max(s[j]);
            if s[j] != rise_max || s[j] == s[i] {
                continue;
            }
            let n = s[j] - s[i];
            for k in j + 1..=end {
                if s[k] < s[i] || s[k] > s[j] {
                    break;
                }
                if s[k] == s[i] {
                    if best.is_none_or(|b| n > b.n) {
                        best = Some(LevelTriple { i, j, k, n });
                    }
                    break;
                }
            }
        }
    }
    match best {
        Some(t) => (t.n, Some(t)),
        None => (0, None),
    }
}

/// A stack cell of a truncated configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Symbol(SymbolId),
    Blank,
}

/// A state plus the top `depth` stack cells, top-first, blank-padded below.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub top_stack: Vec<Slot>,
}

impl Configuration {
    /// `stack` is deepest-first.
    pub fn of(state: StateId, stack: &[SymbolId], depth: usize) -> Self {
        let mut top_stack: Vec<Slot> = stack.iter().rev().take(depth).map(|&s| Slot::Symbol(s)).collect();
        top_stack.resize(depth, Slot::Blank);
        Self { state, top_stack }
    }
}

/// The configuration of `path` at `pos`, truncated to `depth` cells.
/// A depth of 0 keeps only the state.
pub fn configuration_at(
    pda: &NormalizedPda,
    path: &RunPath,
    pos: usize,
    depth: usize,
) -> Result<Configuration, LevelError> {
    if pos > path.len() {
        return Err(LevelError::PositionOutOfRange { pos });
    }
    let stacks = path.stacks_upto(pda, pos);
    Ok(Configuration::of(path.states()[pos], &stacks[pos], depth))
}

/// Configurations at every position in `0..=last`, in one replay.
pub fn configurations_upto(pda: &NormalizedPda, path: &RunPath, last: usize, depth: usize) -> Vec<Configuration> {
    let last = last.min(path.len());
    path.stacks_upto(pda, last)
        .iter()
        .zip(path.states())
        .map(|(stack, &state)| Configuration::of(state, stack, depth))
        .collect()
}

fn check_height(profile: &[usize], triple: &LevelTriple, h: usize) -> Result<(), LevelError> {
    let (low, high) = (profile[triple.i], profile[triple.j]);
    if h < low || h > high {
        return Err(LevelError::HeightOutOfRange { h, low, high });
    }
    Ok(())
}

/// `lp(h)`: the last position `≤ j` at height `h`.
pub fn last_push(profile: &[usize], triple: &LevelTriple, h: usize) -> Result<usize, LevelError> {
    check_height(profile, triple, h)?;
    Ok((0..=triple.j).rev().find(|&y| profile[y] == h).expect("±1 profile passes every height"))
}

/// `fp(h)`: the first position `≥ j` at height `h`.
pub fn first_pop(profile: &[usize], triple: &LevelTriple, h: usize) -> Result<usize, LevelError> {
    check_height(profile, triple, h)?;
    Ok((triple.j..profile.len()).find(|&y| profile[y] == h).expect("±1 profile passes every height"))
}

/// State at `lp(h)`, top symbol there, state at `fp(h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullState {
    pub push_state: StateId,
    pub top_symbol: SymbolId,
    pub pop_state: StateId,
}

/// The full state of height `h`. Fails if the top symbols at `lp(h)` and
/// `fp(h)` differ, which would break the pumping construction.
pub fn full_state(path: &RunPath, triple: &LevelTriple, h: usize) -> Result<FullState, LevelError> {
    if h == 0 {
        return Err(LevelError::NoTopSymbol);
    }
    let profile = path.profile();
    let lp = last_push(profile, triple, h)?;
    let fp = first_pop(profile, triple, h)?;
    let top = path.tops()[lp].ok_or(LevelError::NoTopSymbol)?;
    if path.tops()[fp] != Some(top) {
        return Err(LevelError::TopSymbolMismatch { h });
    }
    Ok(FullState { push_state: path.states()[lp], top_symbol: top, pop_state: path.states()[fp] })
}

/// A `target`-level nested in `triple` sharing its peak `j`.
pub fn extract_sublevel(profile: &[usize], triple: &LevelTriple, target: usize) -> Result<LevelTriple, LevelError> {
    if target == 0 || target > triple.n {
        return Err(LevelError::TargetTooLarge { target, n: triple.n });
    }
    let base = profile[triple.j] - target;
    let i = (0..=triple.j).rev().find(|&m| profile[m] == base).expect("inside the level band");
    let k = (triple.j..profile.len()).find(|&m| profile[m] == base).expect("inside the level band");
    Ok(LevelTriple { i, j: triple.j, k, n: target })
}
