//! Properties of searches and replays on the corpus machines.

use proptest::prelude::*;
use pumpkit_core::corpus::{self, NAMES};
use pumpkit_core::normalize;
use pumpkit_core::pda::{step, NormalizedPda};
use pumpkit_core::runner::{accepts, minimal_accepting_path, replay, SearchError, SearchLimits, Verdict};

fn machine(name: &str) -> NormalizedPda {
    normalize(&corpus::builtin(name).unwrap().pda).unwrap()
}

fn word_strategy() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..NAMES.len(), prop::collection::vec(0usize..2, 0..12))
}

proptest! {
    #[test]
    fn search_and_oracle_agree((entry, letters) in word_strategy()) {
        let pda = machine(NAMES[entry]);
        let alphabet = pda.input_alphabet().to_vec();
        let w: Vec<char> = letters.iter().map(|&i| alphabet[i % alphabet.len()]).collect();
        let limits = SearchLimits::for_word(w.len(), None);
        match minimal_accepting_path(&pda, &w, limits) {
            Ok(path) => {
                prop_assert_eq!(accepts(&pda, &w, limits), Verdict::Accepted);
                prop_assert!(path.len() >= w.len());
                let again = replay(&pda, path.steps(), &w).unwrap();
                prop_assert_eq!(again.profile(), path.profile());
                prop_assert_eq!(path.profile().len(), path.len() + 1);
                prop_assert!(path.profile().windows(2).all(|p| p[0].abs_diff(p[1]) == 1));
                prop_assert!(path.letters_read().windows(2).all(|p| p[0] <= p[1]));
                prop_assert_eq!(*path.letters_read().last().unwrap(), w.len());
                prop_assert_eq!(minimal_accepting_path(&pda, &w, limits).unwrap(), path);
            }
            Err(SearchError::NotAccepted) => {
                prop_assert_eq!(accepts(&pda, &w, limits), Verdict::NotAccepted);
            }
            Err(e) => prop_assert!(false, "unexpected {e:?}"),
        }
    }

    /// Random applicable steps change the stack by exactly one symbol and
    /// leave everything below the popped top untouched.
    #[test]
    fn steps_move_the_stack_by_one(entry in 0..NAMES.len(), choices in prop::collection::vec(any::<usize>(), 1..40)) {
        let pda = machine(NAMES[entry]);
        let alphabet = pda.input_alphabet().to_vec();
        let word: Vec<char> = (0..40).map(|i| alphabet[(i * 7 + entry) % alphabet.len()]).collect();
        let mut id = pda.initial_description();
        for choice in choices {
            let applicable: Vec<_> = pda
                .transitions()
                .iter()
                .filter_map(|t| step(&id, t, &word).ok())
                .collect();
            if applicable.is_empty() {
                break;
            }
            let next = applicable[choice % applicable.len()].clone();
            prop_assert_eq!(next.stack.len().abs_diff(id.stack.len()), 1);
            let kept = id.stack.len() - 1;
            prop_assert_eq!(&next.stack[..kept], &id.stack[..kept]);
            prop_assert!(next.pos >= id.pos);
            id = next;
        }
    }
}
