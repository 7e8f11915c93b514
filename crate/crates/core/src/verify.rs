//! Checks a decomposition two independent ways: by splicing the original run
//! and replaying it, and by a fresh membership search on each pumped word.

use alloc::vec::Vec;

use crate::extract::{Decomposition, ExtractionMode, Witness};
use crate::pda::NormalizedPda;
use crate::runner::{accepts, replay, ReplayError, RunPath, SearchLimits, Verdict};

pub const DEFAULT_COUNTS: [usize; 5] = [0, 1, 2, 3, 4];

/// `u·vⁿ·x·yⁿ·z`.
pub fn pumped_word(d: &Decomposition, n: usize) -> Vec<char> {
    let mut w = Vec::with_capacity(d.u.len() + d.x.len() + d.z.len() + n * d.pumped_len());
    w.extend_from_slice(&d.u);
    for _ in 0..n {
        w.extend_from_slice(&d.v);
    }
    w.extend_from_slice(&d.x);
    for _ in 0..n {
        w.extend_from_slice(&d.y);
    }
    w.extend_from_slice(&d.z);
    w
}

/// The run for the `n`-th pumped word, built from `path` by repeating the
/// segments between the witness positions.
pub fn pumped_steps(path: &RunPath, witness: &Witness, n: usize) -> Vec<usize> {
    let steps = path.steps();
    let mut out = Vec::new();
    match *witness {
        Witness::Case1 { i, j, .. } => {
            out.extend_from_slice(&steps[..i]);
            for _ in 0..n {
                out.extend_from_slice(&steps[i..j]);
            }
            out.extend_from_slice(&steps[j..]);
        }
        Witness::Case2 { lp_g, lp_h, fp_h, fp_g, .. } => {
            out.extend_from_slice(&steps[..lp_g]);
            for _ in 0..n {
                out.extend_from_slice(&steps[lp_g..lp_h]);
            }
            out.extend_from_slice(&steps[lp_h..fp_h]);
            for _ in 0..n {
                out.extend_from_slice(&steps[fp_h..fp_g]);
            }
            out.extend_from_slice(&steps[fp_g..]);
        }
    }
    out
}

/// Replays the spliced run against the `n`-th pumped word.
pub fn verify_by_replay(
    pda: &NormalizedPda,
    path: &RunPath,
    d: &Decomposition,
    n: usize,
) -> Result<RunPath, ReplayError> {
    replay(pda, &pumped_steps(path, &d.witness, n), &pumped_word(d, n))
}

/// Membership verdict for each pumped word. With `limits = None` each word
/// gets [`SearchLimits::for_word`].
pub fn verify_by_search(
    pda: &NormalizedPda,
    d: &Decomposition,
    counts: &[usize],
    limits: Option<SearchLimits>,
) -> Vec<(usize, Verdict)> {
    counts
        .iter()
        .map(|&n| {
            let w = pumped_word(d, n);
            let limits = limits.unwrap_or_else(|| SearchLimits::for_word(w.len(), d.params.map(|p| p.p)));
            (n, accepts(pda, &w, limits))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    /// `u·v·x·y·z = w`.
    pub concatenation_ok: bool,
    /// `|vxy| ≤ p`; vacuously true when `p` is unknown.
    pub length_bound_ok: bool,
    /// `|vy| ≥ 1`.
    pub non_trivial_ok: bool,
    /// The achieved `|vxy|`.
    pub span: usize,
    pub bound: Option<u64>,
    /// Whether the length bound counts towards [`ConstraintReport::ok`] (strict mode).
    pub bound_enforced: bool,
}

impl ConstraintReport {
    pub fn ok(&self) -> bool {
        self.concatenation_ok && self.non_trivial_ok && (self.length_bound_ok || !self.bound_enforced)
    }
}

pub fn check_constraints(d: &Decomposition, word: &[char]) -> ConstraintReport {
    let bound = d.params.map(|p| p.p);
    ConstraintReport {
        concatenation_ok: d.concatenation() == word,
        length_bound_ok: bound.is_none_or(|p| d.span() as u64 <= p),
        non_trivial_ok: d.pumped_len() >= 1,
        span: d.span(),
        bound,
        bound_enforced: d.mode == ExtractionMode::Strict,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountVerdict {
    pub n: usize,
    pub replay: Result<(), ReplayError>,
    pub search: Verdict,
}

impl CountVerdict {
    /// Replay and search agree, ignoring searches cut short by limits.
    pub fn agree(&self) -> bool {
        match self.search {
            Verdict::Accepted => self.replay.is_ok(),
            Verdict::NotAccepted => self.replay.is_err(),
            Verdict::LimitExceeded(_) => true,
        }
    }

    pub fn passed(&self) -> bool {
        self.replay.is_ok() && self.search == Verdict::Accepted
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub constraints: ConstraintReport,
    /// Sorted by `n`.
    pub per_n: Vec<CountVerdict>,
    pub overall: bool,
}

/// Constraint checks plus replay and search for every count in `counts`.
pub fn verify(
    pda: &NormalizedPda,
    path: &RunPath,
    d: &Decomposition,
    counts: &[usize],
    limits: Option<SearchLimits>,
) -> VerificationReport {
    let constraints = check_constraints(d, path.word());
    let mut counts = counts.to_vec();
    counts.sort_unstable();
    counts.dedup();
    let per_n: Vec<CountVerdict> = verify_by_search(pda, d, &counts, limits)
        .into_iter()
        .map(|(n, search)| CountVerdict { n, replay: verify_by_replay(pda, path, d, n).map(|_| ()), search })
        .collect();
    let overall = constraints.ok() && per_n.iter().all(|v| v.passed() && v.agree());
    VerificationReport { constraints, per_n, overall }
}
