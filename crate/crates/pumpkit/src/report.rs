//! Machine-readable pumping reports.

use std::fmt::Write as _;

use pumpkit_core::extract::{AttemptOutcome, Diagnostics, ExtractionMode, Extraction, Tail, Witness};
use pumpkit_core::level::LevelTriple;
use pumpkit_core::normalize::PumpingParams;
use pumpkit_core::runner::Verdict;
use pumpkit_core::verify::{pumped_word, VerificationReport};
use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: &str = "pumpkit-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub n: usize,
}

impl From<LevelTriple> for TripleReport {
    fn from(t: LevelTriple) -> Self {
        Self { i: t.i, j: t.j, k: t.k, n: t.n }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailReport {
    X,
    Z,
}

/// Path positions of the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum WitnessReport {
    Case1 {
        i: usize,
        j: usize,
        depth: usize,
        tail: TailReport,
    },
    Case2 {
        triple: TripleReport,
        g: usize,
        h: usize,
        lp_g: usize,
        lp_h: usize,
        fp_h: usize,
        fp_g: usize,
    },
}

impl From<Witness> for WitnessReport {
    fn from(w: Witness) -> Self {
        match w {
            Witness::Case1 { i, j, depth, tail } => WitnessReport::Case1 {
                i,
                j,
                depth,
                tail: match tail {
                    Tail::X => TailReport::X,
                    Tail::Z => TailReport::Z,
                },
            },
            Witness::Case2 { triple, g, h, lp_g, lp_h, fp_h, fp_g } => {
                WitnessReport::Case2 { triple: triple.into(), g, h, lp_g, lp_h, fp_h, fp_g }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsReport {
    pub p_prime: u64,
    pub p: u64,
    pub states: u64,
    pub stack_symbols: u64,
}

impl From<PumpingParams> for ParamsReport {
    fn from(p: PumpingParams) -> Self {
        Self { p_prime: p.p_prime, p: p.p, states: p.state_count, stack_symbols: p.stack_alphabet_size }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parts {
    pub u: String,
    pub v: String,
    pub x: String,
    pub y: String,
    pub z: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintsReport {
    pub concatenation: bool,
    pub length_bound: bool,
    pub length_bound_enforced: bool,
    pub non_trivial: bool,
    pub span: usize,
    pub bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_at: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchVerdict {
    Accepted,
    NotAccepted,
    LimitExceeded,
}

impl From<Verdict> for SearchVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Accepted => SearchVerdict::Accepted,
            Verdict::NotAccepted => SearchVerdict::NotAccepted,
            Verdict::LimitExceeded(_) => SearchVerdict::LimitExceeded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: usize,
    pub word_length: usize,
    pub replay: ReplayReport,
    pub search: SearchVerdict,
    pub agree: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptReport {
    pub witness: WitnessReport,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub path_length: usize,
    pub window_end: usize,
    pub level: usize,
    pub level_witness: Option<TripleReport>,
    pub whole_path_level: usize,
    pub p_prime: u64,
    pub scanned_triple: Option<TripleReport>,
    pub repeated_configurations: usize,
    pub repeated_full_states: usize,
    pub attempts: Vec<AttemptReport>,
}

impl From<&Diagnostics> for DiagnosticsReport {
    fn from(d: &Diagnostics) -> Self {
        Self {
            path_length: d.path_length,
            window_end: d.window_end,
            level: d.level,
            level_witness: d.level_witness.map(Into::into),
            whole_path_level: d.whole_path_level,
            p_prime: d.p_prime,
            scanned_triple: d.scanned_triple.map(Into::into),
            repeated_configurations: d.repeated_configurations,
            repeated_full_states: d.repeated_full_states,
            attempts: d
                .attempts
                .iter()
                .map(|a| AttemptReport {
                    witness: a.witness.into(),
                    outcome: match a.outcome {
                        AttemptOutcome::Verified => "verified".into(),
                        AttemptOutcome::ReplayFailed { n, error } => format!("replay failed for n={n}: {error}"),
                        AttemptOutcome::EmptyPump => "empty pump".into(),
                        AttemptOutcome::Deferred => "deferred: |vxy| > p".into(),
                    },
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumpReport {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automaton: Option<String>,
    pub word: String,
    pub mode: String,
    pub case: String,
    pub parts: Parts,
    /// Letter offsets of the four cuts.
    pub boundaries: [usize; 4],
    pub witness: WitnessReport,
    /// `None` when `p` does not fit in 64 bits.
    pub params: Option<ParamsReport>,
    pub constraints: ConstraintsReport,
    pub verification: Vec<CountReport>,
    pub overall: bool,
    pub diagnostics: DiagnosticsReport,
}

pub fn mode_name(mode: ExtractionMode) -> &'static str {
    match mode {
        ExtractionMode::Strict => "strict",
        ExtractionMode::BestEffort => "best-effort",
    }
}

fn text(chars: &[char]) -> String {
    chars.iter().collect()
}

impl PumpReport {
    pub fn new(automaton: Option<String>, found: &Extraction, verification: &VerificationReport) -> Self {
        let d = &found.decomposition;
        let c = verification.constraints;
        Self {
            version: REPORT_VERSION.into(),
            automaton,
            word: text(found.path.word()),
            mode: mode_name(d.mode).into(),
            case: d.case().to_string(),
            parts: Parts { u: text(&d.u), v: text(&d.v), x: text(&d.x), y: text(&d.y), z: text(&d.z) },
            boundaries: d.boundaries(),
            witness: d.witness.into(),
            params: d.params.map(Into::into),
            constraints: ConstraintsReport {
                concatenation: c.concatenation_ok,
                length_bound: c.length_bound_ok,
                length_bound_enforced: c.bound_enforced,
                non_trivial: c.non_trivial_ok,
                span: c.span,
                bound: c.bound,
            },
            verification: verification
                .per_n
                .iter()
                .map(|v| CountReport {
                    n: v.n,
                    word_length: pumped_word(d, v.n).len(),
                    replay: match v.replay {
                        Ok(()) => ReplayReport { ok: true, failed_at: None, reason: None },
                        Err(e) => ReplayReport { ok: false, failed_at: Some(e.index), reason: Some(e.reason.to_string()) },
                    },
                    search: v.search.into(),
                    agree: v.agree(),
                    passed: v.passed(),
                })
                .collect(),
            overall: verification.overall,
            diagnostics: (&found.diagnostics).into(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports always serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = &self.parts;
        let _ = writeln!(out, "word: {:?} ({} mode)", self.word, self.mode);
        let _ = writeln!(out, "case: {}", self.case);
        for (name, part) in [("u", &p.u), ("v", &p.v), ("x", &p.x), ("y", &p.y), ("z", &p.z)] {
            let _ = writeln!(out, "  {name} = {part:?}");
        }
        let _ = match self.witness {
            WitnessReport::Case1 { i, j, depth, tail } => writeln!(
                out,
                "witness: depth-{depth} configuration repeats at positions {i} and {j} (tail {tail:?})"
            ),
            WitnessReport::Case2 { triple: t, g, h, lp_g, lp_h, fp_h, fp_g } => writeln!(
                out,
                "witness: level (i={}, j={}, k={}, N={}), heights g={g} h={h}, lp(g)={lp_g} lp(h)={lp_h} fp(h)={fp_h} fp(g)={fp_g}",
                t.i, t.j, t.k, t.n
            ),
        };
        let _ = match self.params {
            Some(p) => writeln!(out, "params: p'={} p={} |A|={} |Γ|={}", p.p_prime, p.p, p.states, p.stack_symbols),
            None => writeln!(out, "params: p does not fit in 64 bits"),
        };
        let c = &self.constraints;
        let bound = c.bound.map_or_else(|| "?".to_string(), |b| b.to_string());
        let _ = writeln!(
            out,
            "constraints: concatenation {}, |vxy| = {} <= {bound} {}{}, |vy| >= 1 {}",
            verdict(c.concatenation),
            c.span,
            verdict(c.length_bound),
            if c.length_bound_enforced { "" } else { " (not enforced)" },
            verdict(c.non_trivial),
        );
        for v in &self.verification {
            let replay = if v.replay.ok {
                "ok".to_string()
            } else {
                format!("failed at step {}: {}", v.replay.failed_at.unwrap_or(0), v.replay.reason.as_deref().unwrap_or(""))
            };
            let _ = writeln!(out, "  n={} |w|={}: replay {replay}, search {:?}", v.n, v.word_length, v.search);
        }
        let d = &self.diagnostics;
        let _ = writeln!(
            out,
            "run: {} steps, level {} (whole run {}), {} attempt(s)",
            d.path_length,
            d.level,
            d.whole_path_level,
            d.attempts.len()
        );
        let _ = writeln!(out, "overall: {}", if self.overall { "PASS" } else { "FAIL" });
        out
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}
