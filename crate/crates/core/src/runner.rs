//! Accepting-run search, an independent membership oracle, and path replay.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use hashbrown::{HashMap, HashSet};
use thiserror::Error;

use crate::pda::{NormalizedPda, StackEffect, StateId, SymbolId};

const STEP_CAP: usize = 1_000_000;

/// Bounds on the search. Both fields are at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchLimits {
    pub max_steps: usize,
    pub max_stack_height: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("search limits must be positive")]
pub struct InvalidLimits;

impl SearchLimits {
    pub fn new(max_steps: usize, max_stack_height: usize) -> Result<Self, InvalidLimits> {
        if max_steps == 0 || max_stack_height == 0 {
            return Err(InvalidLimits);
        }
        Ok(Self { max_steps, max_stack_height })
    }

    /// `max(10·(|w|+1), 4·p)` steps capped at 10⁶, and the same stack height.
    /// A minimal run of a ±1 machine never stacks higher than its length.
    pub fn for_word(word_len: usize, p: Option<u64>) -> Self {
        let by_word = word_len.saturating_add(1).saturating_mul(10);
        let by_p = p
            .and_then(|p| p.checked_mul(4))
            .and_then(|p| usize::try_from(p).ok())
            .unwrap_or(0);
        let steps = by_word.max(by_p).min(STEP_CAP);
        Self { max_steps: steps, max_stack_height: steps }
    }
}

/// Which limits truncated a search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LimitHit {
    pub steps: bool,
    pub stack_height: bool,
}

impl LimitHit {
    fn any(self) -> bool {
        self.steps || self.stack_height
    }
}

impl fmt::Display for LimitHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.steps, self.stack_height) {
            (true, true) => write!(f, "step and stack-height limits"),
            (true, false) => write!(f, "step limit"),
            (false, true) => write!(f, "stack-height limit"),
            (false, false) => write!(f, "no limit"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    /// The reachable space was exhausted without truncation.
    #[error("word is not accepted")]
    NotAccepted,
    #[error("search truncated by the {0} without finding an accepting run")]
    LimitExceeded(LimitHit),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accepted,
    NotAccepted,
    LimitExceeded(LimitHit),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => write!(f, "accepted"),
            Verdict::NotAccepted => write!(f, "not accepted"),
            Verdict::LimitExceeded(hit) => write!(f, "limit exceeded ({hit})"),
        }
    }
}

/// An accepting computation together with its derived per-position data.
///
/// Position `t` is the point after `t` steps, so every per-position vector
/// has `steps.len() + 1` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunPath {
    word: Vec<char>,
    steps: Vec<usize>,
    profile: Vec<usize>,
    letters_read: Vec<usize>,
    states: Vec<StateId>,
    tops: Vec<Option<SymbolId>>,
}

impl RunPath {
    pub fn word(&self) -> &[char] {
        &self.word
    }

    /// Transition indices into [`NormalizedPda::transitions`].
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// Stack size at each position.
    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    /// Letters consumed after each position.
    pub fn letters_read(&self) -> &[usize] {
        &self.letters_read
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    /// Top stack symbol at each position, `None` on an empty stack.
    pub fn tops(&self) -> &[Option<SymbolId>] {
        &self.tops
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Full stack (deepest-first) at every position in `0..=last`, computed
    /// by replaying the steps.
    pub fn stacks_upto(&self, pda: &NormalizedPda, last: usize) -> Vec<Vec<SymbolId>> {
        let mut stack = pda.initial_stack().to_vec();
        let mut out = Vec::with_capacity(last + 1);
        out.push(stack.clone());
        for &idx in self.steps.iter().take(last) {
            match pda.transitions()[idx].effect {
                StackEffect::PopOnly => {
                    stack.pop();
                }
                StackEffect::PushOne(extra) => stack.push(extra),
            }
            out.push(stack.clone());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReplayFailure {
    Inapplicable,
    InputMismatch,
    NotAccepting,
    InputRemaining,
}

impl fmt::Display for ReplayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReplayFailure::Inapplicable => "inapplicable",
            ReplayFailure::InputMismatch => "input-mismatch",
            ReplayFailure::NotAccepting => "not-accepting",
            ReplayFailure::InputRemaining => "input-remaining",
        })
    }
}

/// `index` is the failing step; end-of-run failures report `steps.len()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Error)]
#[error("replay failed at step {index}: {reason}")]
pub struct ReplayError {
    pub index: usize,
    pub reason: ReplayFailure,
}

/// Applies `steps` from the initial description and checks acceptance.
pub fn replay(pda: &NormalizedPda, steps: &[usize], word: &[char]) -> Result<RunPath, ReplayError> {
    let fail = |index, reason| ReplayError { index, reason };
    let mut stack = pda.initial_stack().to_vec();
    let mut state = pda.initial_state();
    let mut pos = 0;

    let mut path = RunPath {
        word: word.to_vec(),
        steps: steps.to_vec(),
        profile: Vec::with_capacity(steps.len() + 1),
        letters_read: Vec::with_capacity(steps.len() + 1),
        states: Vec::with_capacity(steps.len() + 1),
        tops: Vec::with_capacity(steps.len() + 1),
    };
    let record = |path: &mut RunPath, state, pos, stack: &Vec<SymbolId>| {
        path.profile.push(stack.len());
        path.letters_read.push(pos);
        path.states.push(state);
        path.tops.push(stack.last().copied());
    };
    record(&mut path, state, pos, &stack);

    for (index, &idx) in steps.iter().enumerate() {
        let t = pda.transitions().get(idx).ok_or(fail(index, ReplayFailure::Inapplicable))?;
        if t.from != state || stack.last() != Some(&t.pop) {
            return Err(fail(index, ReplayFailure::Inapplicable));
        }
        if let Some(c) = t.input {
            if word.get(pos) != Some(&c) {
                return Err(fail(index, ReplayFailure::InputMismatch));
            }
            pos += 1;
        }
        match t.effect {
            StackEffect::PopOnly => {
                stack.pop();
            }
            StackEffect::PushOne(extra) => stack.push(extra),
        }
        state = t.to;
        record(&mut path, state, pos, &stack);
    }

    if pos < word.len() {
        return Err(fail(steps.len(), ReplayFailure::InputRemaining));
    }
    if !pda.is_accepting(state) {
        return Err(fail(steps.len(), ReplayFailure::NotAccepting));
    }
    Ok(path)
}

/// Hash-consed stacks: equal stacks share one id, so descriptions compare in O(1).
struct StackArena {
    // (below, symbol, height); id 0 is the empty stack
    nodes: Vec<(u32, SymbolId, u32)>,
    intern: HashMap<(u32, SymbolId), u32>,
}

impl StackArena {
    const EMPTY: u32 = 0;

    fn new() -> Self {
        Self { nodes: alloc::vec![(0, SymbolId(usize::MAX), 0)], intern: HashMap::new() }
    }

    fn push(&mut self, below: u32, sym: SymbolId) -> u32 {
        let height = self.nodes[below as usize].2 + 1;
        let nodes = &mut self.nodes;
        *self.intern.entry((below, sym)).or_insert_with(|| {
            nodes.push((below, sym, height));
            (nodes.len() - 1) as u32
        })
    }

    fn pop(&self, id: u32) -> u32 {
        self.nodes[id as usize].0
    }

    fn top(&self, id: u32) -> Option<SymbolId> {
        (id != Self::EMPTY).then(|| self.nodes[id as usize].1)
    }

    fn height(&self, id: u32) -> usize {
        self.nodes[id as usize].2 as usize
    }
}

struct SearchNode {
    state: StateId,
    pos: usize,
    stack: u32,
    depth: usize,
    parent: usize,
    via: usize,
}

/// Breadth-first search for a shortest accepting run.
///
/// Transitions are explored in declared order and the first accepting
/// description reached wins, so the result is reproducible.
pub fn minimal_accepting_path(
    pda: &NormalizedPda,
    word: &[char],
    limits: SearchLimits,
) -> Result<RunPath, SearchError> {
    let mut arena = StackArena::new();
    let mut stack = StackArena::EMPTY;
    for &sym in pda.initial_stack() {
        stack = arena.push(stack, sym);
    }
    let root = SearchNode {
        state: pda.initial_state(),
        pos: 0,
        stack,
        depth: 0,
        parent: usize::MAX,
        via: usize::MAX,
    };
    let accepting = |state, pos| pda.is_accepting(state) && pos == word.len();
    if accepting(root.state, root.pos) {
        return Ok(replay(pda, &[], word).expect("empty run is accepting"));
    }

    let mut visited: HashSet<(StateId, usize, u32)> = HashSet::new();
    visited.insert((root.state, root.pos, root.stack));
    let mut nodes = alloc::vec![root];
    let mut truncated = LimitHit::default();
    let mut head = 0;

    while head < nodes.len() {
        let (state, pos, stack, depth) = {
            let n = &nodes[head];
            (n.state, n.pos, n.stack, n.depth)
        };
        let Some(top) = arena.top(stack) else {
            head += 1;
            continue;
        };
        for &idx in pda.outgoing(state, top) {
            let t = &pda.transitions()[idx];
            let next_pos = match t.input {
                None => pos,
                Some(c) if word.get(pos) == Some(&c) => pos + 1,
                Some(_) => continue,
            };
            if depth >= limits.max_steps {
                truncated.steps = true;
                continue;
            }
            let next_stack = match t.effect {
                StackEffect::PopOnly => arena.pop(stack),
                StackEffect::PushOne(extra) => {
                    if arena.height(stack) + 1 > limits.max_stack_height {
                        truncated.stack_height = true;
                        continue;
                    }
                    arena.push(stack, extra)
                }
            };
            if !visited.insert((t.to, next_pos, next_stack)) {
                continue;
            }
            nodes.push(SearchNode {
                state: t.to,
                pos: next_pos,
                stack: next_stack,
                depth: depth + 1,
                parent: head,
                via: idx,
            });
            if accepting(t.to, next_pos) {
                let mut steps = Vec::with_capacity(depth + 1);
                let mut at = nodes.len() - 1;
                while nodes[at].parent != usize::MAX {
                    steps.push(nodes[at].via);
                    at = nodes[at].parent;
                }
                steps.reverse();
                return Ok(replay(pda, &steps, word).expect("search produced a valid run"));
            }
        }
        head += 1;
    }

    if truncated.any() {
        Err(SearchError::LimitExceeded(truncated))
    } else {
        Err(SearchError::NotAccepted)
    }
}

type Key = (StateId, Vec<SymbolId>);
type Layer = BTreeMap<Key, usize>;

/// Membership verdict by a separate algorithm: the input is consumed
/// position by position, and within each position a unit-cost Dijkstra over
/// ε-moves tracks the fewest steps to every (state, stack). Shares nothing
/// with [`minimal_accepting_path`] beyond the automaton itself.
pub fn accepts(pda: &NormalizedPda, word: &[char], limits: SearchLimits) -> Verdict {
    let mut truncated = LimitHit::default();
    let mut layer: Layer = BTreeMap::new();
    layer.insert((pda.initial_state(), pda.initial_stack().to_vec()), 0);

    let apply = |stack: &Vec<SymbolId>, effect| {
        let mut next = stack.clone();
        match effect {
            StackEffect::PopOnly => {
                next.pop();
            }
            StackEffect::PushOne(extra) => next.push(extra),
        }
        next
    };

    for pos in 0..=word.len() {
        let mut settled: Layer = BTreeMap::new();
        let mut heap: BinaryHeap<Reverse<(usize, Key)>> =
            layer.into_iter().map(|(key, steps)| Reverse((steps, key))).collect();

        while let Some(Reverse((steps, key))) = heap.pop() {
            if settled.contains_key(&key) {
                continue;
            }
            if pos == word.len() && pda.is_accepting(key.0) {
                return Verdict::Accepted;
            }
            if let Some(&top) = key.1.last() {
                for &idx in pda.outgoing(key.0, top) {
                    let t = &pda.transitions()[idx];
                    if t.input.is_some() {
                        continue;
                    }
                    if steps + 1 > limits.max_steps {
                        truncated.steps = true;
                        continue;
                    }
                    let next = apply(&key.1, t.effect);
                    if next.len() > limits.max_stack_height {
                        truncated.stack_height = true;
                        continue;
                    }
                    let next_key = (t.to, next);
                    if !settled.contains_key(&next_key) {
                        heap.push(Reverse((steps + 1, next_key)));
                    }
                }
            }
            settled.insert(key, steps);
        }

        if pos == word.len() {
            break;
        }
        let letter = word[pos];
        let mut next_layer: Layer = BTreeMap::new();
        for ((state, stack), steps) in &settled {
            let Some(&top) = stack.last() else { continue };
            for &idx in pda.outgoing(*state, top) {
                let t = &pda.transitions()[idx];
                if t.input != Some(letter) {
                    continue;
                }
                if steps + 1 > limits.max_steps {
                    truncated.steps = true;
                    continue;
                }
                let next = apply(stack, t.effect);
                if next.len() > limits.max_stack_height {
                    truncated.stack_height = true;
                    continue;
                }
                let best = next_layer.entry((t.to, next)).or_insert(steps + 1);
                *best = (*best).min(steps + 1);
            }
        }
        if next_layer.is_empty() {
            break;
        }
        layer = next_layer;
    }

    if truncated.any() {
        Verdict::LimitExceeded(truncated)
    } else {
        Verdict::NotAccepted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::normalize::normalize;
    use alloc::vec;

    fn machine(name: &str) -> NormalizedPda {
        normalize(&corpus::builtin(name).unwrap().pda).unwrap()
    }

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn generous() -> SearchLimits {
        SearchLimits::new(500, 500).unwrap()
    }

    /// Every accepting run of at most `max_len` steps, by plain DFS on full
    /// descriptions.
    fn all_accepting_runs(pda: &NormalizedPda, word: &[char], max_len: usize) -> Vec<Vec<usize>> {
        fn go(
            pda: &NormalizedPda,
            word: &[char],
            id: crate::pda::InstantaneousDescription,
            prefix: &mut Vec<usize>,
            max_len: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            if pda.is_accepting(id.state) && id.pos == word.len() {
                out.push(prefix.clone());
            }
            if prefix.len() == max_len {
                return;
            }
            for (idx, t) in pda.transitions().iter().enumerate() {
                if let Ok(next) = crate::pda::step(&id, t, word) {
                    prefix.push(idx);
                    go(pda, word, next, prefix, max_len, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(pda, word, pda.initial_description(), &mut Vec::new(), max_len, &mut out);
        out
    }

    #[test]
    fn dyck_pair_has_three_step_path() {
        let pda = machine("DYCK1");
        let w = chars("()");
        let path = minimal_accepting_path(&pda, &w, generous()).unwrap();
        assert_eq!(path.steps(), &[0, 2, 3]);
        assert_eq!(path.profile(), &[1, 2, 1, 0]);
        assert_eq!(path.letters_read(), &[0, 1, 2, 2]);
        let oracle = all_accepting_runs(&pda, &w, 4);
        assert_eq!(oracle, vec![vec![0, 2, 3]]);
    }

    #[test]
    fn minimal_length_matches_enumeration() {
        for (name, words) in [
            ("DYCK1", &["", "()", "(())", "()()", "(()())"][..]),
            ("REG_AB", &["", "ab", "abab"][..]),
            ("GEN_PAL", &["", "aa", "abba"][..]),
            ("ANBN_GEN", &["ab"][..]),
        ] {
            let pda = machine(name);
            for w in words {
                let w = chars(w);
                let path = minimal_accepting_path(&pda, &w, generous()).unwrap();
                let runs = all_accepting_runs(&pda, &w, path.len());
                let shortest = runs.iter().map(Vec::len).min().unwrap();
                assert_eq!(shortest, path.len(), "{name} {w:?}");
            }
        }
    }

    #[test]
    fn rejects_and_limits() {
        let pda = machine("DYCK1");
        assert_eq!(minimal_accepting_path(&pda, &chars(")("), generous()).unwrap_err(), SearchError::NotAccepted);
        let tight = SearchLimits::new(3, 2).unwrap();
        assert!(matches!(
            minimal_accepting_path(&pda, &chars("(())"), tight),
            Err(SearchError::LimitExceeded(_))
        ));
        assert!(matches!(accepts(&pda, &chars("(())"), tight), Verdict::LimitExceeded(_)));
    }

    #[test]
    fn membership_oracle() {
        let dyck = machine("DYCK1");
        assert_eq!(accepts(&dyck, &chars("(()())"), generous()), Verdict::Accepted);
        assert_eq!(accepts(&dyck, &chars("(()"), generous()), Verdict::NotAccepted);
        let ab = machine("REG_AB");
        assert_eq!(accepts(&ab, &chars("abab"), generous()), Verdict::Accepted);
        assert_eq!(accepts(&ab, &chars("aba"), generous()), Verdict::NotAccepted);
    }

    #[test]
    fn replay_round_trip_and_errors() {
        let pda = machine("DYCK1");
        let path = replay(&pda, &[0, 2, 3], &chars("()")).unwrap();
        assert_eq!(path.profile(), &[1, 2, 1, 0]);
        assert_eq!(
            replay(&pda, &[0, 2, 3], &chars("((")).unwrap_err(),
            ReplayError { index: 1, reason: ReplayFailure::InputMismatch }
        );
        assert_eq!(
            replay(&pda, &[0, 2], &chars("()")).unwrap_err(),
            ReplayError { index: 2, reason: ReplayFailure::NotAccepting }
        );
        assert_eq!(
            replay(&pda, &[3], &chars("()")).unwrap_err(),
            ReplayError { index: 1, reason: ReplayFailure::InputRemaining }
        );
        assert_eq!(
            replay(&pda, &[2], &chars(")")).unwrap_err(),
            ReplayError { index: 0, reason: ReplayFailure::Inapplicable }
        );
        assert_eq!(
            replay(&pda, &[99], &chars("")).unwrap_err(),
            ReplayError { index: 0, reason: ReplayFailure::Inapplicable }
        );
    }

    #[test]
    fn empty_run_when_initial_state_accepts() {
        let pda = machine("REG_AB");
        let path = replay(&pda, &[], &[]).unwrap();
        assert_eq!(path.profile(), &[1]);
        assert_eq!(minimal_accepting_path(&pda, &[], generous()).unwrap(), path);
    }

    #[test]
    fn default_limits() {
        let l = SearchLimits::for_word(13202, Some(13122));
        assert_eq!((l.max_steps, l.max_stack_height), (132_030, 132_030));
        assert_eq!(SearchLimits::for_word(3, Some(32)).max_steps, 128);
        assert_eq!(SearchLimits::for_word(3, Some(u64::MAX)).max_steps, 40);
        assert_eq!(SearchLimits::for_word(10, Some(1 << 40)).max_steps, 1_000_000);
        assert!(SearchLimits::new(0, 1).is_err());
    }

    #[test]
    fn minimal_paths_never_repeat_descriptions() {
        let pda = machine("GEN_PAL");
        let w = chars("abbaabba");
        let path = minimal_accepting_path(&pda, &w, generous()).unwrap();
        let stacks = path.stacks_upto(&pda, path.len());
        let mut seen = Vec::new();
        for (t, stack) in stacks.iter().enumerate() {
            let id = (path.states()[t], path.letters_read()[t], stack.clone());
            assert!(!seen.contains(&id));
            seen.push(id);
        }
    }
}
