//! Rewriting into ±1 form and the pumping parameters of the result.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::pda::{
    validate, GeneralPda, NormalizedPda, NormalizedTransition, StackEffect, StateId, SymbolId,
    ValidationReport,
};

/// Rewrites `pda` so that every transition moves the stack by exactly one symbol.
///
/// A transition popping `X` and pushing `Y₁…Y_k` (deepest-first) becomes:
///
/// * `k = 0`: one pop-only transition;
/// * `k = 2`, `Y₁ = X`: one push-one transition (already in shape);
/// * `Y₁ = X` otherwise: a push-one of `Y₂` consuming the input (or, for `k = 1`,
///   a push-one of `X` followed by an ε pop-only), then ε-pushes of `Y₃…Y_k`;
/// * `Y₁ ≠ X`: a pop-only consuming the input, then ε-pushes of `Y₁…Y_k`.
///
/// Every ε-push is emitted once per stack symbol `Z` as current top
/// (`pop Z, push [Z, Yᵢ]`). Intermediate states are named after the
/// originating transition index and their position in the chain.
pub fn normalize(pda: &GeneralPda) -> Result<NormalizedPda, ValidationReport> {
    let report = validate(pda);
    if !report.is_well_formed() {
        return Err(report);
    }

    let mut states = pda.states.clone();
    let gamma = pda.stack_alphabet.len();
    let state = |states: &[String], s: &String| StateId(states.iter().position(|x| x == s).unwrap());
    let symbol = |s: &String| SymbolId(pda.stack_alphabet.iter().position(|x| x == s).unwrap());

    let mut fresh = |states: &mut Vec<String>, transition: usize, link: usize| {
        let mut name = format!("⟨t{transition}.{link}⟩");
        while states.contains(&name) {
            name.push('\'');
        }
        states.push(name);
        StateId(states.len() - 1)
    };

    let mut out = Vec::new();
    for (idx, t) in pda.transitions.iter().enumerate() {
        let from = state(&states, &t.from);
        let to = state(&states, &t.to);
        let pop = symbol(&t.pop);
        let push: Vec<SymbolId> = t.push.iter().map(symbol).collect();
        let single = |effect| NormalizedTransition { from, input: t.input, pop, effect, to };

        match push.as_slice() {
            [] => out.push(single(StackEffect::PopOnly)),
            [keep, extra] if *keep == pop => out.push(single(StackEffect::PushOne(*extra))),
            [keep] if *keep == pop => {
                let mid = fresh(&mut states, idx, 1);
                out.push(NormalizedTransition {
                    from,
                    input: t.input,
                    pop,
                    effect: StackEffect::PushOne(pop),
                    to: mid,
                });
                out.push(NormalizedTransition {
                    from: mid,
                    input: None,
                    pop,
                    effect: StackEffect::PopOnly,
                    to,
                });
            }
            [keep, first, rest @ ..] if *keep == pop => {
                let mid = fresh(&mut states, idx, 1);
                out.push(NormalizedTransition {
                    from,
                    input: t.input,
                    pop,
                    effect: StackEffect::PushOne(*first),
                    to: mid,
                });
                push_chain(&mut out, &mut states, &mut fresh, idx, mid, rest, to, gamma);
            }
            _ => {
                let mid = fresh(&mut states, idx, 1);
                out.push(NormalizedTransition {
                    from,
                    input: t.input,
                    pop,
                    effect: StackEffect::PopOnly,
                    to: mid,
                });
                push_chain(&mut out, &mut states, &mut fresh, idx, mid, &push, to, gamma);
            }
        }
    }

    let mut accepting = alloc::vec![false; states.len()];
    for s in &pda.accept_states {
        accepting[state(&states, s).0] = true;
    }
    Ok(NormalizedPda::assemble(
        states.clone(),
        pda.input_alphabet.clone(),
        pda.stack_alphabet.clone(),
        state(&states, &pda.initial_state),
        pda.initial_stack.iter().map(symbol).collect(),
        accepting,
        out,
    ))
}

/// ε-pushes `symbols` in order starting from `start`, ending in `target`.
#[allow(clippy::too_many_arguments)]
fn push_chain(
    out: &mut Vec<NormalizedTransition>,
    states: &mut Vec<String>,
    fresh: &mut impl FnMut(&mut Vec<String>, usize, usize) -> StateId,
    transition: usize,
    start: StateId,
    symbols: &[SymbolId],
    target: StateId,
    gamma: usize,
) {
    let mut from = start;
    for (n, &sym) in symbols.iter().enumerate() {
        let to = if n + 1 == symbols.len() { target } else { fresh(states, transition, n + 2) };
        for z in 0..gamma {
            out.push(NormalizedTransition {
                from,
                input: None,
                pop: SymbolId(z),
                effect: StackEffect::PushOne(sym),
                to,
            });
        }
        from = to;
    }
}

/// `p' = |A|²·|Γ|` and `p = |A|·(|Γ|+1)^p'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PumpingParams {
    pub p_prime: u64,
    pub p: u64,
    pub state_count: u64,
    pub stack_alphabet_size: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("pumping length |A|·(|Γ|+1)^{exponent} does not fit in 64 bits (p' = {p_prime})")]
    Overflow { p_prime: u128, exponent: u128 },
    #[error("automaton has no states or no stack symbols")]
    Empty,
}

impl PumpingParams {
    pub fn from_counts(state_count: u64, stack_alphabet_size: u64) -> Result<Self, ParamsError> {
        if state_count == 0 || stack_alphabet_size == 0 {
            return Err(ParamsError::Empty);
        }
        let wide = u128::from(state_count) * u128::from(state_count) * u128::from(stack_alphabet_size);
        let overflow = ParamsError::Overflow { p_prime: wide, exponent: wide };
        let p_prime = u64::try_from(wide).map_err(|_| overflow)?;
        let exponent = u32::try_from(p_prime).map_err(|_| overflow)?;
        let p = (stack_alphabet_size + 1)
            .checked_pow(exponent)
            .and_then(|power| power.checked_mul(state_count))
            .ok_or(overflow)?;
        Ok(Self { p_prime, p, state_count, stack_alphabet_size })
    }
}

/// Pumping parameters of a normalized machine, with `|A|` and `|Γ|` taken from it.
pub fn pumping_params(pda: &NormalizedPda) -> Result<PumpingParams, ParamsError> {
    PumpingParams::from_counts(pda.state_count() as u64, pda.stack_alphabet_size() as u64)
}
