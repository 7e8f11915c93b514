//! The JSON file format for automata.
//!
//! ```json
//! {
//!   "version": "pumpkit/1",
//!   "name": "DYCK1",
//!   "states": ["q0", "qf"],
//!   "input_alphabet": ["(", ")"],
//!   "stack_alphabet": ["⊥", "X"],
//!   "initial_state": "q0",
//!   "initial_stack": ["⊥"],
//!   "accept_states": ["qf"],
//!   "transitions": [
//!     { "from": "q0", "input": "(", "pop": "⊥", "push": ["⊥", "X"], "to": "q0" },
//!     { "from": "q0", "input": null, "pop": "⊥", "push": [], "to": "qf" }
//!   ]
//! }
//! ```
//!
//! Stacks and push sequences are listed deepest symbol first. Whether a
//! machine is in ±1 form is checked, not recorded.

use pumpkit_core::pda::{GeneralPda, GeneralTransition};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "pumpkit/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDocument {
    pub from: String,
    /// `None` for an ε-move.
    pub input: Option<String>,
    pub pop: String,
    pub push: Vec<String>,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdaDocument {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub stack_alphabet: Vec<String>,
    pub initial_state: String,
    pub initial_stack: Vec<String>,
    pub accept_states: Vec<String>,
    pub transitions: Vec<TransitionDocument>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version `{0}`, expected `{FORMAT_VERSION}`")]
    Version(String),
    #[error("{context}: `{symbol}` is not a single character")]
    Symbol { context: String, symbol: String },
}

fn single_char(symbol: &str, context: impl FnOnce() -> String) -> Result<char, DocumentError> {
    let mut chars = symbol.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(DocumentError::Symbol { context: context(), symbol: symbol.to_string() }),
    }
}

impl PdaDocument {
    pub fn from_general(pda: &GeneralPda, name: Option<String>, description: Option<String>) -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            name,
            description,
            states: pda.states.clone(),
            input_alphabet: pda.input_alphabet.iter().map(|c| c.to_string()).collect(),
            stack_alphabet: pda.stack_alphabet.clone(),
            initial_state: pda.initial_state.clone(),
            initial_stack: pda.initial_stack.clone(),
            accept_states: pda.accept_states.clone(),
            transitions: pda
                .transitions
                .iter()
                .map(|t| TransitionDocument {
                    from: t.from.clone(),
                    input: t.input.map(|c| c.to_string()),
                    pop: t.pop.clone(),
                    push: t.push.clone(),
                    to: t.to.clone(),
                })
                .collect(),
        }
    }

    /// Converts to the core representation. Structural checks are left to
    /// [`pumpkit_core::pda::validate`].
    pub fn to_general(&self) -> Result<GeneralPda, DocumentError> {
        let input_alphabet = self
            .input_alphabet
            .iter()
            .map(|s| single_char(s, || "input alphabet".into()))
            .collect::<Result<_, _>>()?;
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(idx, t)| {
                let input = t
                    .input
                    .as_deref()
                    .map(|s| single_char(s, || format!("transition {idx} input")))
                    .transpose()?;
                Ok(GeneralTransition {
                    from: t.from.clone(),
                    input,
                    pop: t.pop.clone(),
                    push: t.push.clone(),
                    to: t.to.clone(),
                })
            })
            .collect::<Result<_, DocumentError>>()?;
        Ok(GeneralPda {
            states: self.states.clone(),
            input_alphabet,
            stack_alphabet: self.stack_alphabet.clone(),
            initial_state: self.initial_state.clone(),
            initial_stack: self.initial_stack.clone(),
            accept_states: self.accept_states.clone(),
            transitions,
        })
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.version));
        }
        doc.to_general()?;
        Ok(doc)
    }

    /// Pretty-printed JSON with a trailing newline; fields always in the same order.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents always serialize");
        out.push('\n');
        out
    }
}
