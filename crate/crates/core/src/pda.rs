//! Automaton models, instantaneous descriptions and single-step semantics.
//!
//! Stacks are stored deepest-first: the top of the stack is the last element.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Reserved bottom marker. It must be the deepest symbol of the initial stack.
pub const BOTTOM: &str = "⊥";

/// Reserved padding symbol for truncated configurations. Never a member of Γ.
pub const BLANK: &str = "␣";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralTransition {
    pub from: String,
    /// `None` is an ε-transition.
    pub input: Option<char>,
    pub pop: String,
    /// Pushed symbols, deepest-first.
    pub push: Vec<String>,
    pub to: String,
}

impl GeneralTransition {
    pub fn new(from: &str, input: Option<char>, pop: &str, push: &[&str], to: &str) -> Self {
        Self {
            from: from.to_string(),
            input,
            pop: pop.to_string(),
            push: push.iter().map(|s| s.to_string()).collect(),
            to: to.to_string(),
        }
    }

    /// Whether this transition already has the ±1 shape: pop-only, or
    /// re-push the popped symbol plus one more.
    pub fn is_star_shaped(&self) -> bool {
        match self.push.as_slice() {
            [] => true,
            [keep, _] => *keep == self.pop,
            _ => false,
        }
    }
}

/// A pushdown automaton whose transitions may push arbitrary sequences.
///
/// Acceptance is by final state with all input consumed; the stack contents
/// at acceptance are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeneralPda {
    pub states: Vec<String>,
    pub input_alphabet: Vec<char>,
    pub stack_alphabet: Vec<String>,
    pub initial_state: String,
    /// Deepest-first; the first element must be [`BOTTOM`].
    pub initial_stack: Vec<String>,
    pub accept_states: Vec<String>,
    pub transitions: Vec<GeneralTransition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateState(String),
    DuplicateInputSymbol(char),
    DuplicateStackSymbol(String),
    MissingBottomMarker,
    BlankInStackAlphabet,
    EmptyInitialStack,
    InitialStackNotBottom(String),
    UndeclaredInitialState(String),
    UndeclaredAcceptState(String),
    /// `transition` is `None` for symbols of the initial stack.
    UndeclaredStackSymbol { transition: Option<usize>, symbol: String },
    UndeclaredState { transition: usize, state: String },
    UndeclaredInputSymbol { transition: usize, symbol: char },
    NotStarForm { transition: usize, push_len: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateState(s) => write!(f, "state `{s}` declared twice"),
            Violation::DuplicateInputSymbol(c) => write!(f, "input symbol `{c}` declared twice"),
            Violation::DuplicateStackSymbol(s) => write!(f, "stack symbol `{s}` declared twice"),
            Violation::MissingBottomMarker => {
                write!(f, "stack alphabet does not contain the bottom marker `{BOTTOM}`")
            }
            Violation::BlankInStackAlphabet => {
                write!(f, "stack alphabet contains the reserved blank `{BLANK}`")
            }
            Violation::EmptyInitialStack => write!(f, "initial stack is empty"),
            Violation::InitialStackNotBottom(s) => {
                write!(f, "deepest initial stack symbol is `{s}`, expected `{BOTTOM}`")
            }
            Violation::UndeclaredInitialState(s) => write!(f, "initial state `{s}` is not declared"),
            Violation::UndeclaredAcceptState(s) => write!(f, "accept state `{s}` is not declared"),
            Violation::UndeclaredStackSymbol { transition: None, symbol } => {
                write!(f, "initial stack uses undeclared symbol `{symbol}`")
            }
            Violation::UndeclaredStackSymbol { transition: Some(t), symbol } => {
                write!(f, "transition {t} uses undeclared stack symbol `{symbol}`")
            }
            Violation::UndeclaredState { transition, state } => {
                write!(f, "transition {transition} references undeclared state `{state}`")
            }
            Violation::UndeclaredInputSymbol { transition, symbol } => {
                write!(f, "transition {transition} reads undeclared input symbol `{symbol}`")
            }
            Violation::NotStarForm { transition, push_len } => write!(
                f,
                "transition {transition} pushes {push_len} symbol(s) and is not of the ±1 form"
            ),
        }
    }
}

/// Non-fatal findings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// Pops the bottom marker and pushes a sequence whose deepest symbol is
    /// not the bottom marker; after normalization the push chain may run on
    /// an empty stack.
    DropsBottomMarker { transition: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DropsBottomMarker { transition } => write!(
                f,
                "transition {transition} pops `{BOTTOM}` and pushes a sequence that does not start with it"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    /// True when no structural invariant is violated. Warnings do not count.
    pub fn is_well_formed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "error: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

fn duplicates<T: Ord + Clone>(items: &[T]) -> Vec<T> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    let mut out: Vec<T> = sorted.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0].clone()).collect();
    out.dedup();
    out
}

/// Lists every violated structural invariant of `pda`.
pub fn validate(pda: &GeneralPda) -> ValidationReport {
    let mut report = ValidationReport::default();
    let violations = &mut report.violations;

    violations.extend(duplicates(&pda.states).into_iter().map(Violation::DuplicateState));
    violations.extend(duplicates(&pda.input_alphabet).into_iter().map(Violation::DuplicateInputSymbol));
    violations.extend(duplicates(&pda.stack_alphabet).into_iter().map(Violation::DuplicateStackSymbol));

    let has_state = |s: &String| pda.states.contains(s);
    let has_symbol = |s: &String| pda.stack_alphabet.contains(s);

    if !pda.stack_alphabet.iter().any(|s| s == BOTTOM) {
        violations.push(Violation::MissingBottomMarker);
    }
    if pda.stack_alphabet.iter().any(|s| s == BLANK) {
        violations.push(Violation::BlankInStackAlphabet);
    }
    match pda.initial_stack.first() {
        None => violations.push(Violation::EmptyInitialStack),
        Some(s) if s != BOTTOM => violations.push(Violation::InitialStackNotBottom(s.clone())),
        Some(_) => {}
    }
    for s in pda.initial_stack.iter().filter(|s| !has_symbol(s)) {
        violations.push(Violation::UndeclaredStackSymbol { transition: None, symbol: s.clone() });
    }
    if !has_state(&pda.initial_state) {
        violations.push(Violation::UndeclaredInitialState(pda.initial_state.clone()));
    }
    for s in pda.accept_states.iter().filter(|s| !has_state(s)) {
        violations.push(Violation::UndeclaredAcceptState(s.clone()));
    }

    for (idx, t) in pda.transitions.iter().enumerate() {
        for state in [&t.from, &t.to] {
            if !has_state(state) {
                violations.push(Violation::UndeclaredState { transition: idx, state: state.clone() });
            }
        }
        if let Some(c) = t.input {
            if !pda.input_alphabet.contains(&c) {
                violations.push(Violation::UndeclaredInputSymbol { transition: idx, symbol: c });
            }
        }
        for sym in core::iter::once(&t.pop).chain(t.push.iter()) {
            if !has_symbol(sym) {
                violations.push(Violation::UndeclaredStackSymbol {
                    transition: Some(idx),
                    symbol: sym.clone(),
                });
            }
        }
        if t.pop == BOTTOM && t.push.first().is_some_and(|deepest| deepest != BOTTOM) {
            report.warnings.push(Warning::DropsBottomMarker { transition: idx });
        }
    }
    report
}

/// [`validate`] plus one [`Violation::NotStarForm`] per transition that is not ±1-shaped.
pub fn validate_star_form(pda: &GeneralPda) -> ValidationReport {
    let mut report = validate(pda);
    for (idx, t) in pda.transitions.iter().enumerate() {
        if !t.is_star_shaped() {
            report.violations.push(Violation::NotStarForm { transition: idx, push_len: t.push.len() });
        }
    }
    report
}

/// True iff every transition pushes nothing, or pushes the popped symbol and one more.
pub fn is_star_form(pda: &GeneralPda) -> bool {
    pda.transitions.iter().all(GeneralTransition::is_star_shaped)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StackEffect {
    /// Net effect −1.
    PopOnly,
    /// Re-push the popped symbol, then push `extra`. Net effect +1.
    PushOne(SymbolId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NormalizedTransition {
    pub from: StateId,
    pub input: Option<char>,
    pub pop: SymbolId,
    pub effect: StackEffect,
    pub to: StateId,
}

/// A validated automaton in ±1 form with interned states and symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPda {
    states: Vec<String>,
    input_alphabet: Vec<char>,
    stack_alphabet: Vec<String>,
    initial_state: StateId,
    initial_stack: Vec<SymbolId>,
    accepting: Vec<bool>,
    transitions: Vec<NormalizedTransition>,
    // state * |Γ| + top -> transition indices in declared order
    by_top: Vec<Vec<usize>>,
}

impl NormalizedPda {
    /// Compiles an automaton that is already in ±1 form.
    pub fn from_general(pda: &GeneralPda) -> Result<Self, ValidationReport> {
        let report = validate_star_form(pda);
        if !report.is_well_formed() {
            return Err(report);
        }
        let state = |s: &String| StateId(pda.states.iter().position(|x| x == s).unwrap());
        let symbol = |s: &String| SymbolId(pda.stack_alphabet.iter().position(|x| x == s).unwrap());
        let transitions = pda
            .transitions
            .iter()
            .map(|t| NormalizedTransition {
                from: state(&t.from),
                input: t.input,
                pop: symbol(&t.pop),
                effect: match t.push.as_slice() {
                    [] => StackEffect::PopOnly,
                    [_, extra] => StackEffect::PushOne(symbol(extra)),
                    _ => unreachable!("checked by validate_star_form"),
                },
                to: state(&t.to),
            })
            .collect();
        let mut accepting = alloc::vec![false; pda.states.len()];
        for s in &pda.accept_states {
            accepting[state(s).0] = true;
        }
        Ok(Self::assemble(
            pda.states.clone(),
            pda.input_alphabet.clone(),
            pda.stack_alphabet.clone(),
            state(&pda.initial_state),
            pda.initial_stack.iter().map(symbol).collect(),
            accepting,
            transitions,
        ))
    }

    pub(crate) fn assemble(
        states: Vec<String>,
        input_alphabet: Vec<char>,
        stack_alphabet: Vec<String>,
        initial_state: StateId,
        initial_stack: Vec<SymbolId>,
        accepting: Vec<bool>,
        transitions: Vec<NormalizedTransition>,
    ) -> Self {
        let gamma = stack_alphabet.len();
        let mut by_top = alloc::vec![Vec::new(); states.len() * gamma];
        for (idx, t) in transitions.iter().enumerate() {
            by_top[t.from.0 * gamma + t.pop.0].push(idx);
        }
        Self {
            states,
            input_alphabet,
            stack_alphabet,
            initial_state,
            initial_stack,
            accepting,
            transitions,
            by_top,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn stack_alphabet_size(&self) -> usize {
        self.stack_alphabet.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.stack_alphabet[s.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.stack_alphabet.iter().position(|s| s == name).map(SymbolId)
    }

    pub fn input_alphabet(&self) -> &[char] {
        &self.input_alphabet
    }

    pub fn initial_state(&self) -> StateId {
        self.initial_state
    }

    pub fn initial_stack(&self) -> &[SymbolId] {
        &self.initial_stack
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s.0]
    }

    pub fn transitions(&self) -> &[NormalizedTransition] {
        &self.transitions
    }

    /// Indices of transitions leaving `state` with `top` on the stack, in declared order.
    pub fn outgoing(&self, state: StateId, top: SymbolId) -> &[usize] {
        &self.by_top[state.0 * self.stack_alphabet.len() + top.0]
    }

    pub fn initial_description(&self) -> InstantaneousDescription {
        InstantaneousDescription { state: self.initial_state, pos: 0, stack: self.initial_stack.clone() }
    }

    /// The equivalent named automaton, e.g. for serialization.
    pub fn to_general(&self) -> GeneralPda {
        let sym = |s: SymbolId| self.stack_alphabet[s.0].clone();
        GeneralPda {
            states: self.states.clone(),
            input_alphabet: self.input_alphabet.clone(),
            stack_alphabet: self.stack_alphabet.clone(),
            initial_state: self.states[self.initial_state.0].clone(),
            initial_stack: self.initial_stack.iter().copied().map(sym).collect(),
            accept_states: self
                .states
                .iter()
                .zip(&self.accepting)
                .filter(|(_, &a)| a)
                .map(|(s, _)| s.clone())
                .collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| GeneralTransition {
                    from: self.states[t.from.0].clone(),
                    input: t.input,
                    pop: sym(t.pop),
                    push: match t.effect {
                        StackEffect::PopOnly => Vec::new(),
                        StackEffect::PushOne(extra) => alloc::vec![sym(t.pop), sym(extra)],
                    },
                    to: self.states[t.to.0].clone(),
                })
                .collect(),
        }
    }
}

/// A point in a computation: state, letters consumed, full stack (deepest-first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstantaneousDescription {
    pub state: StateId,
    pub pos: usize,
    pub stack: Vec<SymbolId>,
}

impl InstantaneousDescription {
    pub fn top(&self) -> Option<SymbolId> {
        self.stack.last().copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("transition leaves a different state")]
    WrongState,
    #[error("stack is empty")]
    EmptyStack,
    #[error("stack top does not match the popped symbol")]
    TopMismatch,
    #[error("input exhausted")]
    InputExhausted,
    #[error("next input letter does not match")]
    InputMismatch,
}

/// Applies `t` to `id` while reading `word`.
pub fn step(
    id: &InstantaneousDescription,
    t: &NormalizedTransition,
    word: &[char],
) -> Result<InstantaneousDescription, StepError> {
    if t.from != id.state {
        return Err(StepError::WrongState);
    }
    match id.top() {
        None => return Err(StepError::EmptyStack),
        Some(top) if top != t.pop => return Err(StepError::TopMismatch),
        Some(_) => {}
    }
    let mut pos = id.pos;
    if let Some(c) = t.input {
        match word.get(pos) {
            None => return Err(StepError::InputExhausted),
            Some(&w) if w != c => return Err(StepError::InputMismatch),
            Some(_) => pos += 1,
        }
    }
    let mut stack = id.stack.clone();
    match t.effect {
        StackEffect::PopOnly => {
            stack.pop();
        }
        StackEffect::PushOne(extra) => stack.push(extra),
    }
    Ok(InstantaneousDescription { state: t.to, pos, stack })
}
