//! Pushdown automata and the stack-level machinery behind the context-free
//! pumping lemma.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`pda`]: general and normalized automata, single steps, structural validation;
//! * [`normalize`]: rewriting into the ±1 normal form and computing pumping parameters;
//! * [`runner`]: minimal accepting runs, an independent membership search, path replay;
//! * [`level`]: stack levels, truncated configurations, last-push / first-pop and full states;
//! * [`extract`]: the two-case decomposition `w = u·v·x·y·z`;
//! * [`verify`]: constraint checks plus replay- and search-based verification of pumped words;
//! * [`corpus`]: the built-in example machines and word generators.
//!
//! ```
//! use pumpkit_core::{corpus, extract, normalize, runner};
//!
//! let entry = corpus::builtin("DYCK1").unwrap();
//! let pda = normalize::normalize(&entry.pda).unwrap();
//! let word: Vec<char> = "(((())))".chars().collect();
//! let limits = runner::SearchLimits::for_word(word.len(), None);
//! let found = extract::extract(&pda, &word, extract::ExtractionMode::BestEffort, limits).unwrap();
//! let d = &found.decomposition;
//! assert_eq!(d.parts(), ["(", "(", "(())", ")", ")"].map(String::from));
//! ```

#![no_std]

extern crate alloc;

pub mod corpus;
pub mod extract;
pub mod level;
pub mod normalize;
pub mod pda;
pub mod runner;
pub mod verify;

pub use extract::{Decomposition, ExtractError, ExtractionMode, Witness};
pub use level::{Configuration, FullState, LevelTriple};
pub use normalize::{normalize, pumping_params, PumpingParams};
pub use pda::{GeneralPda, GeneralTransition, NormalizedPda, NormalizedTransition, StackEffect};
pub use runner::{RunPath, SearchLimits, Verdict};
pub use verify::VerificationReport;
