//! Normalized machines accept exactly what their general originals accept.

use std::collections::{HashSet, VecDeque};

use pumpkit_core::corpus::{self, NAMES};
use pumpkit_core::pda::{is_star_form, GeneralPda};
use pumpkit_core::runner::{accepts, SearchLimits, Verdict};
use pumpkit_core::normalize;

/// Bounded breadth-first membership directly on the general machine.
fn general_accepts(pda: &GeneralPda, word: &[char]) -> bool {
    // every corpus machine spends at most three steps and pushes at most
    // two symbols per letter
    let max_steps = 4 * word.len() + 8;
    let max_height = 3 * word.len() + 2;
    let start = (pda.initial_state.clone(), 0usize, pda.initial_stack.clone());
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    seen.insert(start);
    while let Some(((state, pos, stack), depth)) = queue.pop_front() {
        if pos == word.len() && pda.accept_states.contains(&state) {
            return true;
        }
        let Some(top) = stack.last() else { continue };
        for t in &pda.transitions {
            if t.from != state || &t.pop != top {
                continue;
            }
            let next_pos = match t.input {
                None => pos,
                Some(c) if word.get(pos) == Some(&c) => pos + 1,
                Some(_) => continue,
            };
            let mut next = stack.clone();
            next.pop();
            next.extend(t.push.iter().cloned());
            assert!(depth < max_steps && next.len() <= max_height, "oracle bound too small: {depth} {}", next.len());
            let id = (t.to.clone(), next_pos, next);
            if seen.insert(id.clone()) {
                queue.push_back((id, depth + 1));
            }
        }
    }
    false
}

fn all_words(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<char>| {
                alphabet.iter().map(move |&c| {
                    let mut next = w.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn exhaustive_equivalence_up_to_length_8() {
    for name in NAMES {
        let general = corpus::builtin(name).unwrap().pda;
        let normalized = normalize(&general).unwrap();
        let mut disagreements = Vec::new();
        for w in all_words(&general.input_alphabet, 8) {
            let expected = general_accepts(&general, &w);
            let got = accepts(&normalized, &w, SearchLimits::for_word(w.len(), None));
            assert_ne!(got, Verdict::LimitExceeded(Default::default()));
            if expected != (got == Verdict::Accepted) {
                disagreements.push(w.iter().collect::<String>());
            }
        }
        assert!(disagreements.is_empty(), "{name}: {disagreements:?}");
    }
}

#[test]
fn single_push_expansion_preserves_language() {
    // (q, a, pop X, push [Y], r) style transitions mixed with ordinary ones
    let mut general = corpus::builtin("DYCK1").unwrap().pda;
    general.stack_alphabet.push("Y".into());
    general.transitions[1].push = vec!["Y".into()];
    general.transitions[1].pop = "X".into();
    general.transitions.push(pumpkit_core::GeneralTransition::new("q0", Some(')'), "Y", &["X"], "q0"));
    assert!(!is_star_form(&general));
    let normalized = normalize(&general).unwrap();
    for w in all_words(&general.input_alphabet, 6) {
        let expected = general_accepts(&general, &w);
        let got = accepts(&normalized, &w, SearchLimits::for_word(w.len(), None)) == Verdict::Accepted;
        assert_eq!(expected, got, "{}", w.iter().collect::<String>());
    }
}

#[test]
fn generators_agree_with_both_machines() {
    for name in NAMES {
        let general = corpus::builtin(name).unwrap().pda;
        let normalized = normalize(&general).unwrap();
        for size in 0..=12 {
            if let Ok(w) = corpus::generate(name, size) {
                let w: Vec<char> = w.chars().collect();
                assert!(general_accepts(&general, &w), "{name} {size}");
                assert_eq!(accepts(&normalized, &w, SearchLimits::for_word(w.len(), None)), Verdict::Accepted);
            }
            let miss: Vec<char> = corpus::near_miss(name, size).unwrap().chars().collect();
            assert!(!general_accepts(&general, &miss), "{name} near miss {size}");
            assert_eq!(accepts(&normalized, &miss, SearchLimits::for_word(miss.len(), None)), Verdict::NotAccepted);
        }
    }
}
