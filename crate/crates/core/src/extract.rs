//! Pumping decompositions from a minimal accepting run.
//!
//! The run's level `l` decides the construction. With a low level the
//! automaton behaves like a finite machine over truncated configurations, and
//! a repeated configuration gives `u·vⁿ·x` (Case 1). With a high level, two
//! stack heights inside one level share their full state, and the climbs and
//! descents between them give `u·vⁿ·x·yⁿ·z` (Case 2).
//!
//! Every candidate witness is checked by replaying the pumped run for
//! `n ∈ {0, 2}` before it is returned; failing candidates are recorded in
//! [`Diagnostics::attempts`] and the next one is tried.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::level::{
    configurations_upto, extract_sublevel, first_pop, full_state, last_push, max_level, FullState, LevelError,
    LevelTriple,
};
use crate::normalize::{pumping_params, ParamsError, PumpingParams};
use crate::pda::NormalizedPda;
use crate::runner::{minimal_accepting_path, ReplayError, RunPath, SearchError, SearchLimits};
use crate::verify::{pumped_steps, verify_by_replay};
use crate::runner::{replay, LimitHit};

/// Pumping counts every candidate must replay for before it is returned.
pub const CHECKED_COUNTS: [usize; 2] = [0, 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtractionMode {
    /// Requires `|w| > p` and follows the two cases exactly.
    Strict,
    /// Works on any accepted word; may fail with [`ExtractError::NoWitnessFound`].
    BestEffort,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Case1,
    Case2,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Case1 => "Case1",
            CaseTag::Case2 => "Case2",
        })
    }
}

/// Where Case 1 puts the part of the word after `v`.
///
/// `X` gives `x = rest, y = z = ε`. `Z` gives `x = y = ε, z = rest`, which
/// pumps the same words and keeps `|vxy| = |v|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Witness {
    /// Equal `depth`-configurations at path positions `i < j`.
    Case1 { i: usize, j: usize, depth: usize, tail: Tail },
    /// Heights `g < h` inside `triple` with equal full states, and their
    /// last-push / first-pop positions.
    Case2 { triple: LevelTriple, g: usize, h: usize, lp_g: usize, lp_h: usize, fp_h: usize, fp_g: usize },
}

impl Witness {
    pub fn case(&self) -> CaseTag {
        match self {
            Witness::Case1 { .. } => CaseTag::Case1,
            Witness::Case2 { .. } => CaseTag::Case2,
        }
    }

    /// Path positions bounding `v`, `x` and `y`.
    pub fn path_cuts(&self, path_len: usize) -> [usize; 4] {
        match *self {
            Witness::Case1 { i, j, tail: Tail::X, .. } => [i, j, path_len, path_len],
            Witness::Case1 { i, j, tail: Tail::Z, .. } => [i, j, j, j],
            Witness::Case2 { lp_g, lp_h, fp_h, fp_g, .. } => [lp_g, lp_h, fp_h, fp_g],
        }
    }
}

/// `w = u·v·x·y·z` together with the witness that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub u: Vec<char>,
    pub v: Vec<char>,
    pub x: Vec<char>,
    pub y: Vec<char>,
    pub z: Vec<char>,
    pub witness: Witness,
    /// `None` when the pumping length does not fit in 64 bits (best-effort only).
    pub params: Option<PumpingParams>,
    pub mode: ExtractionMode,
}

impl Decomposition {
    /// Splits `word` at the letter offsets `cuts` (non-decreasing, within the word).
    pub fn from_cuts(
        word: &[char],
        cuts: [usize; 4],
        witness: Witness,
        params: Option<PumpingParams>,
        mode: ExtractionMode,
    ) -> Self {
        let [a, b, c, d] = cuts;
        Self {
            u: word[..a].to_vec(),
            v: word[a..b].to_vec(),
            x: word[b..c].to_vec(),
            y: word[c..d].to_vec(),
            z: word[d..].to_vec(),
            witness,
            params,
            mode,
        }
    }

    fn from_witness(path: &RunPath, witness: Witness, params: Option<PumpingParams>, mode: ExtractionMode) -> Self {
        let read = path.letters_read();
        let cuts = witness.path_cuts(path.len()).map(|pos| read[pos]);
        Self::from_cuts(path.word(), cuts, witness, params, mode)
    }

    pub fn case(&self) -> CaseTag {
        self.witness.case()
    }

    pub fn parts(&self) -> [String; 5] {
        [&self.u, &self.v, &self.x, &self.y, &self.z].map(|p| p.iter().collect())
    }

    /// Letter offsets of the four inner boundaries.
    pub fn boundaries(&self) -> [usize; 4] {
        let a = self.u.len();
        let b = a + self.v.len();
        let c = b + self.x.len();
        [a, b, c, c + self.y.len()]
    }

    pub fn concatenation(&self) -> Vec<char> {
        [&self.u, &self.v, &self.x, &self.y, &self.z].into_iter().flatten().copied().collect()
    }

    /// `|v·x·y|`.
    pub fn span(&self) -> usize {
        self.v.len() + self.x.len() + self.y.len()
    }

    pub fn pumped_len(&self) -> usize {
        self.v.len() + self.y.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttemptOutcome {
    Verified,
    /// Replay of the pumped run failed for this `n`.
    ReplayFailed { n: usize, error: ReplayError },
    /// `|vy| = 0` and excising the loop does not give a valid shorter run.
    EmptyPump,
    /// `|vxy| > p` with `x` holding the rest of the word; retried later with [`Tail::Z`].
    Deferred,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub witness: Witness,
    pub outcome: AttemptOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub mode: ExtractionMode,
    pub path_length: usize,
    pub profile: Vec<usize>,
    /// Largest `k` considered for levels: `min(p, |π|)` in strict mode, `|π|` otherwise.
    pub window_end: usize,
    pub level: usize,
    pub level_witness: Option<LevelTriple>,
    /// Level over the whole run, reported when it differs from the windowed one.
    pub whole_path_level: usize,
    pub p_prime: u64,
    pub case: Option<CaseTag>,
    /// Level triple Case 2 scanned, if it was tried.
    pub scanned_triple: Option<LevelTriple>,
    pub attempts: Vec<Attempt>,
    /// Positions whose configuration already occurred earlier in the scanned window.
    pub repeated_configurations: usize,
    /// Heights whose full state already occurred at a lower height of the scanned triple.
    pub repeated_full_states: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("word is not accepted")]
    NotAccepted,
    #[error("search truncated by the {0}")]
    LimitExceeded(LimitHit),
    #[error("strict mode needs |w| > p, got |w| = {word_len}, p = {p}")]
    StrictPreconditionViolated { word_len: usize, p: u64 },
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error("no repeated configuration or full state yields a valid decomposition")]
    NoWitnessFound(Box<Diagnostics>),
    #[error("no repeated configuration or full state in the scanned range")]
    NoRepeatFound,
    #[error("witness pumps nothing yet splicing it out gives a shorter accepting run")]
    MinimalityViolation { witness: Witness },
}

impl From<SearchError> for ExtractError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::NotAccepted => ExtractError::NotAccepted,
            SearchError::LimitExceeded(hit) => ExtractError::LimitExceeded(hit),
        }
    }
}

/// The result of [`extract`]: the decomposition, how it was found, and the run it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub decomposition: Decomposition,
    pub diagnostics: Diagnostics,
    pub path: RunPath,
}

/// Pairs `(i, j)`, `i < j`, of equal keys in scan order: `j` ascending, then `i` ascending.
struct RepeatPairs {
    class: Vec<usize>,
    members: Vec<Vec<usize>>,
    j: usize,
    next: usize,
}

impl RepeatPairs {
    fn new<K: Ord>(keys: &[K]) -> Self {
        let mut ids: BTreeMap<&K, usize> = BTreeMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let class = keys
            .iter()
            .enumerate()
            .map(|(pos, key)| {
                let id = *ids.entry(key).or_insert_with(|| {
                    members.push(Vec::new());
                    members.len() - 1
                });
                members[id].push(pos);
                id
            })
            .collect();
        Self { class, members, j: 0, next: 0 }
    }

    /// Positions whose key occurred before.
    fn repeats(&self) -> usize {
        self.class.len() - self.members.len()
    }
}

impl Iterator for RepeatPairs {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<(usize, usize)> {
        while self.j < self.class.len() {
            let same = &self.members[self.class[self.j]];
            if let Some(&i) = same.get(self.next).filter(|&&i| i < self.j) {
                self.next += 1;
                return Some((i, self.j));
            }
            self.j += 1;
            self.next = 0;
        }
        None
    }
}

fn case1_pairs(pda: &NormalizedPda, path: &RunPath, depth: usize, window_end: usize) -> RepeatPairs {
    RepeatPairs::new(&configurations_upto(pda, path, window_end, depth))
}

/// Heights scanned for full states, and the pairs of equal ones as heights.
fn case2_pairs(path: &RunPath, triple: &LevelTriple) -> Result<(usize, RepeatPairs), LevelError> {
    let profile = path.profile();
    let low = profile[triple.i].max(1);
    let states: Vec<FullState> =
        (low..=profile[triple.j]).map(|h| full_state(path, triple, h)).collect::<Result<_, _>>()?;
    Ok((low, RepeatPairs::new(&states)))
}

fn case2_witness(profile: &[usize], triple: LevelTriple, g: usize, h: usize) -> Result<Witness, LevelError> {
    Ok(Witness::Case2 {
        triple,
        g,
        h,
        lp_g: last_push(profile, &triple, g)?,
        lp_h: last_push(profile, &triple, h)?,
        fp_h: first_pop(profile, &triple, h)?,
        fp_g: first_pop(profile, &triple, g)?,
    })
}

fn check_pumps(d: &Decomposition, witness: Witness) -> Result<(), ExtractError> {
    if d.pumped_len() == 0 {
        return Err(ExtractError::MinimalityViolation { witness });
    }
    Ok(())
}

/// The first repeated `depth`-configuration among positions `0..=window_end`,
/// with `x` holding the rest of the word and `y = z = ε`.
pub fn case1_decompose(
    pda: &NormalizedPda,
    path: &RunPath,
    params: Option<PumpingParams>,
    depth: usize,
    window_end: usize,
    mode: ExtractionMode,
) -> Result<Decomposition, ExtractError> {
    let (i, j) = case1_pairs(pda, path, depth, window_end).next().ok_or(ExtractError::NoRepeatFound)?;
    let witness = Witness::Case1 { i, j, depth, tail: Tail::X };
    let d = Decomposition::from_witness(path, witness, params, mode);
    check_pumps(&d, witness)?;
    Ok(d)
}

/// The lexicographically first pair of heights `g < h` of `triple` with equal full states.
pub fn case2_decompose(
    path: &RunPath,
    params: Option<PumpingParams>,
    triple: LevelTriple,
    mode: ExtractionMode,
) -> Result<Decomposition, ExtractError> {
    let (low, mut pairs) = case2_pairs(path, &triple)?;
    let (a, b) = pairs.next().ok_or(ExtractError::NoRepeatFound)?;
    let witness = case2_witness(path.profile(), triple, low + a, low + b)?;
    let d = Decomposition::from_witness(path, witness, params, mode);
    check_pumps(&d, witness)?;
    Ok(d)
}

struct Search<'a> {
    pda: &'a NormalizedPda,
    path: &'a RunPath,
    params: Option<PumpingParams>,
    mode: ExtractionMode,
    diagnostics: Diagnostics,
}

impl Search<'_> {
    fn record(&mut self, witness: Witness, outcome: AttemptOutcome) {
        self.diagnostics.attempts.push(Attempt { witness, outcome });
    }

    fn try_witness(&mut self, witness: Witness) -> Result<Option<Decomposition>, ExtractError> {
        let d = Decomposition::from_witness(self.path, witness, self.params, self.mode);
        if d.pumped_len() == 0 {
            // A genuine repeat with nothing read in between could be spliced out.
            let shorter = pumped_steps(self.path, &witness, 0);
            if replay(self.pda, &shorter, self.path.word()).is_ok() {
                return Err(ExtractError::MinimalityViolation { witness });
            }
            self.record(witness, AttemptOutcome::EmptyPump);
            return Ok(None);
        }
        for n in CHECKED_COUNTS {
            if let Err(error) = verify_by_replay(self.pda, self.path, &d, n) {
                self.record(witness, AttemptOutcome::ReplayFailed { n, error });
                return Ok(None);
            }
        }
        self.record(witness, AttemptOutcome::Verified);
        Ok(Some(d))
    }

    fn case1(&mut self, depth: usize, window_end: usize) -> Result<Option<Decomposition>, ExtractError> {
        let pairs = case1_pairs(self.pda, self.path, depth, window_end);
        self.diagnostics.repeated_configurations = pairs.repeats();
        let word_len = self.path.word().len() as u64;
        let read = self.path.letters_read();
        let mut deferred = Vec::new();
        for (i, j) in pairs {
            let witness = Witness::Case1 { i, j, depth, tail: Tail::X };
            let too_long = self.params.is_some_and(|p| word_len - read[i] as u64 > p.p);
            if too_long && read[i] != read[j] {
                self.record(witness, AttemptOutcome::Deferred);
                deferred.push(Witness::Case1 { i, j, depth, tail: Tail::Z });
                continue;
            }
            if let Some(d) = self.try_witness(witness)? {
                return Ok(Some(d));
            }
        }
        for witness in deferred {
            if let Some(d) = self.try_witness(witness)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    fn case2(&mut self, triple: LevelTriple) -> Result<Option<Decomposition>, ExtractError> {
        self.diagnostics.scanned_triple = Some(triple);
        let (low, pairs) = case2_pairs(self.path, &triple)?;
        self.diagnostics.repeated_full_states = pairs.repeats();
        for (a, b) in pairs {
            let witness = case2_witness(self.path.profile(), triple, low + a, low + b)?;
            if let Some(d) = self.try_witness(witness)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }
}

/// Finds a minimal accepting run for `word` and derives a verified decomposition from it.
///
/// Strict mode requires `|w| > p`, looks for levels with `k ≤ min(p, |π|)`,
/// and uses Case 1 exactly when that level is below `p'`, otherwise Case 2 on
/// a `p'`-sublevel. Best-effort mode tries Case 2 on the run's highest level
/// first, then Case 1 over the whole run.
pub fn extract(
    pda: &NormalizedPda,
    word: &[char],
    mode: ExtractionMode,
    limits: SearchLimits,
) -> Result<Extraction, ExtractError> {
    let params = match mode {
        ExtractionMode::Strict => Some(pumping_params(pda)?),
        ExtractionMode::BestEffort => pumping_params(pda).ok(),
    };
    if let (ExtractionMode::Strict, Some(params)) = (mode, params) {
        if word.len() as u64 <= params.p {
            return Err(ExtractError::StrictPreconditionViolated { word_len: word.len(), p: params.p });
        }
    }
    let path = minimal_accepting_path(pda, word, limits)?;

    let count = pda.state_count() as u64;
    let p_prime = count.saturating_mul(count).saturating_mul(pda.stack_alphabet_size() as u64);
    let window_end = match (mode, params) {
        (ExtractionMode::Strict, Some(p)) => path.len().min(usize::try_from(p.p).unwrap_or(usize::MAX)),
        _ => path.len(),
    };
    let (level, level_witness) = max_level(path.profile(), window_end);
    let whole_path_level = max_level(path.profile(), path.len()).0;

    let diagnostics = Diagnostics {
        mode,
        path_length: path.len(),
        profile: path.profile().to_vec(),
        window_end,
        level,
        level_witness,
        whole_path_level,
        p_prime,
        case: None,
        scanned_triple: None,
        attempts: Vec::new(),
        repeated_configurations: 0,
        repeated_full_states: 0,
    };
    let mut search = Search { pda, path: &path, params, mode, diagnostics };

    let found = match mode {
        ExtractionMode::Strict if (level as u64) < p_prime => search.case1(level, window_end)?,
        ExtractionMode::Strict => {
            let top = level_witness.expect("a positive level has a witness");
            let triple = extract_sublevel(path.profile(), &top, p_prime as usize)?;
            search.case2(triple)?
        }
        ExtractionMode::BestEffort => {
            let mut found = None;
            if let Some(triple) = level_witness {
                found = search.case2(triple)?;
            }
            if found.is_none() {
                found = search.case1(level, window_end)?;
            }
            found
        }
    };

    let mut diagnostics = search.diagnostics;
    match found {
        Some(decomposition) => {
            diagnostics.case = Some(decomposition.case());
            Ok(Extraction { decomposition, diagnostics, path })
        }
        None => Err(ExtractError::NoWitnessFound(Box::new(diagnostics))),
    }
}
