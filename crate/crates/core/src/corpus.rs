//! Built-in automata and deterministic word generators.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::pda::{GeneralPda, GeneralTransition, BOTTOM};

pub const NAMES: [&str; 5] = ["DYCK1", "REG_AB", "ANBN", "ANBN_GEN", "GEN_PAL"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub pda: GeneralPda,
    /// `(p', p)` after normalization, when `p` fits in 64 bits.
    pub expected_params: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown corpus entry `{0}`")]
    UnknownName(String),
    #[error("size {size} is not supported by the `{name}` generator")]
    UnsupportedSize { name: &'static str, size: usize },
}

fn machine(
    states: &[&str],
    input: &str,
    stack: &[&str],
    accept: &[&str],
    transitions: Vec<GeneralTransition>,
) -> GeneralPda {
    GeneralPda {
        states: states.iter().map(|s| s.to_string()).collect(),
        input_alphabet: input.chars().collect(),
        stack_alphabet: stack.iter().map(|s| s.to_string()).collect(),
        initial_state: states[0].to_string(),
        initial_stack: alloc::vec![BOTTOM.to_string()],
        accept_states: accept.iter().map(|s| s.to_string()).collect(),
        transitions,
    }
}

fn t(from: &str, input: Option<char>, pop: &str, push: &[&str], to: &str) -> GeneralTransition {
    GeneralTransition::new(from, input, pop, push, to)
}

pub fn builtin(name: &str) -> Result<CorpusEntry, CorpusError> {
    const B: &str = BOTTOM;
    let entry = match name {
        "DYCK1" => CorpusEntry {
            name: "DYCK1",
            description: "balanced parentheses over ( and )",
            pda: machine(
                &["q0", "qf"],
                "()",
                &[B, "X"],
                &["qf"],
                alloc::vec![
                    t("q0", Some('('), B, &[B, "X"], "q0"),
                    t("q0", Some('('), "X", &["X", "X"], "q0"),
                    t("q0", Some(')'), "X", &[], "q0"),
                    t("q0", None, B, &[], "qf"),
                ],
            ),
            expected_params: Some((8, 13122)),
        },
        "REG_AB" => CorpusEntry {
            name: "REG_AB",
            description: "(ab)*, counting with the bottom marker only",
            pda: machine(
                &["q0", "q1"],
                "ab",
                &[B],
                &["q0"],
                alloc::vec![
                    t("q0", Some('a'), B, &[B, B], "q1"),
                    t("q1", Some('b'), B, &[], "q0"),
                ],
            ),
            expected_params: Some((4, 32)),
        },
        "ANBN" => CorpusEntry {
            name: "ANBN",
            description: "a^n b^n for n >= 1",
            pda: machine(
                &["q0", "q1", "qf"],
                "ab",
                &[B, "A"],
                &["qf"],
                alloc::vec![
                    t("q0", Some('a'), B, &[B, "A"], "q0"),
                    t("q0", Some('a'), "A", &["A", "A"], "q0"),
                    t("q0", Some('b'), "A", &[], "q1"),
                    t("q1", Some('b'), "A", &[], "q1"),
                    t("q1", None, B, &[], "qf"),
                ],
            ),
            // |A| = 3, |Γ| = 2: p' = 18, p = 3·3^18
            expected_params: Some((18, 1_162_261_467)),
        },
        "ANBN_GEN" => CorpusEntry {
            name: "ANBN_GEN",
            description: "a^n b^n for n >= 1, two stack symbols per letter, general form",
            pda: machine(
                &["q0", "q1", "h", "qf"],
                "ab",
                &[B, "A"],
                &["qf"],
                alloc::vec![
                    t("q0", Some('a'), B, &[B, "A", "A"], "q0"),
                    t("q0", Some('a'), "A", &["A", "A", "A"], "q0"),
                    t("q0", Some('b'), "A", &[], "h"),
                    t("q1", Some('b'), "A", &[], "h"),
                    t("h", None, "A", &[], "q1"),
                    t("q1", None, B, &[B], "qf"),
                ],
            ),
            expected_params: None,
        },
        "GEN_PAL" => CorpusEntry {
            name: "GEN_PAL",
            description: "even-length palindromes over a and b, general form, guesses the middle",
            pda: machine(
                &["push", "pop", "pop_a", "pop_b", "done"],
                "ab",
                &[B, "A", "B"],
                &["done"],
                alloc::vec![
                    t("push", Some('a'), B, &[B, "A", "A"], "push"),
                    t("push", Some('a'), "A", &["A", "A", "A"], "push"),
                    t("push", Some('a'), "B", &["B", "A", "A"], "push"),
                    t("push", Some('b'), B, &[B, "B", "B"], "push"),
                    t("push", Some('b'), "A", &["A", "B", "B"], "push"),
                    t("push", Some('b'), "B", &["B", "B", "B"], "push"),
                    t("push", None, B, &[B], "pop"),
                    t("push", None, "A", &["A"], "pop"),
                    t("push", None, "B", &["B"], "pop"),
                    t("pop", Some('a'), "A", &[], "pop_a"),
                    t("pop_a", None, "A", &[], "pop"),
                    t("pop", Some('b'), "B", &[], "pop_b"),
                    t("pop_b", None, "B", &[], "pop"),
                    t("pop", None, B, &[], "done"),
                ],
            ),
            expected_params: None,
        },
        other => return Err(CorpusError::UnknownName(other.to_string())),
    };
    Ok(entry)
}

fn canonical(name: &str) -> Result<&'static str, CorpusError> {
    NAMES
        .iter()
        .copied()
        .find(|n| *n == name)
        .ok_or_else(|| CorpusError::UnknownName(name.to_string()))
}

fn repeat(s: &str, n: usize) -> String {
    s.repeat(n)
}

fn palindrome(half: &str) -> String {
    half.chars().chain(half.chars().rev()).collect()
}

fn cycled_half(size: usize) -> String {
    "ab".chars().cycle().take(size).collect()
}

/// The canonical in-language word of the given size.
///
/// DYCK1: `(`^m `)`^m; REG_AB: (ab)^m; ANBN, ANBN_GEN: a^m b^m (m ≥ 1);
/// GEN_PAL: s·reverse(s) where s is the length-m prefix of abab….
pub fn generate(name: &str, size: usize) -> Result<String, CorpusError> {
    let name = canonical(name)?;
    Ok(match name {
        "DYCK1" => repeat("(", size) + &repeat(")", size),
        "REG_AB" => repeat("ab", size),
        "ANBN" | "ANBN_GEN" if size == 0 => return Err(CorpusError::UnsupportedSize { name, size }),
        "ANBN" | "ANBN_GEN" => repeat("a", size) + &repeat("b", size),
        _ => palindrome(&cycled_half(size)),
    })
}

/// A word just outside the language, close to `generate(name, size)`.
pub fn near_miss(name: &str, size: usize) -> Result<String, CorpusError> {
    let name = canonical(name)?;
    Ok(match (name, size) {
        ("DYCK1", 0) => ")".into(),
        ("DYCK1", m) => repeat("(", m) + &repeat(")", m - 1),
        ("REG_AB", m) => repeat("ab", m) + "a",
        ("ANBN" | "ANBN_GEN", 0) => String::new(),
        ("ANBN" | "ANBN_GEN", m) => repeat("a", m) + &repeat("b", m - 1),
        (_, 0) => "a".into(),
        (_, m) => {
            let mut w: Vec<char> = palindrome(&cycled_half(m)).chars().collect();
            let last = w.len() - 1;
            w[last] = if w[last] == 'a' { 'b' } else { 'a' };
            w.into_iter().collect()
        }
    })
}

/// A pseudo-random in-language word of the given size. Languages with a
/// single word per size return [`generate`]'s word.
pub fn sample<R: Rng + ?Sized>(name: &str, size: usize, rng: &mut R) -> Result<String, CorpusError> {
    let name = canonical(name)?;
    match name {
        "DYCK1" => {
            let mut word = String::with_capacity(2 * size);
            let (mut opens_left, mut depth) = (size, 0usize);
            while opens_left > 0 || depth > 0 {
                if opens_left > 0 && (depth == 0 || rng.gen_bool(0.5)) {
                    word.push('(');
                    opens_left -= 1;
                    depth += 1;
                } else {
                    word.push(')');
                    depth -= 1;
                }
            }
            Ok(word)
        }
        "GEN_PAL" => {
            let half: String = (0..size).map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' }).collect();
            Ok(palindrome(&half))
        }
        _ => generate(name, size),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::{normalize, pumping_params};
    use crate::pda::is_star_form;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators() {
        assert_eq!(generate("DYCK1", 2).unwrap(), "(())");
        assert_eq!(near_miss("DYCK1", 2).unwrap(), "(()");
        assert_eq!(generate("ANBN", 3).unwrap(), "aaabbb");
        assert_eq!(generate("GEN_PAL", 3).unwrap(), "abaaba");
        assert_eq!(near_miss("GEN_PAL", 2).unwrap(), "abbb");
        assert!(matches!(generate("ANBN", 0), Err(CorpusError::UnsupportedSize { .. })));
        assert!(matches!(builtin("NOPE"), Err(CorpusError::UnknownName(_))));
    }

    #[test]
    fn expected_params_match() {
        for name in NAMES {
            let entry = builtin(name).unwrap();
            let params = pumping_params(&normalize(&entry.pda).unwrap()).ok();
            assert_eq!(params.map(|p| (p.p_prime, p.p)), entry.expected_params, "{name}");
        }
    }

    #[test]
    fn general_form_entries() {
        assert!(!is_star_form(&builtin("GEN_PAL").unwrap().pda));
        assert!(is_star_form(&normalize(&builtin("GEN_PAL").unwrap().pda).unwrap().to_general()));
        assert!(!is_star_form(&builtin("ANBN_GEN").unwrap().pda));
        assert!(is_star_form(&builtin("DYCK1").unwrap().pda));
    }

    #[test]
    fn samples_are_shaped_like_the_language() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for size in 0..20 {
            let w = sample("DYCK1", size, &mut rng).unwrap();
            assert_eq!(w.len(), 2 * size);
            let mut depth = 0i64;
            for c in w.chars() {
                depth += if c == '(' { 1 } else { -1 };
                assert!(depth >= 0);
            }
            assert_eq!(depth, 0);
            let p: Vec<char> = sample("GEN_PAL", size, &mut rng).unwrap().chars().collect();
            assert!(p.iter().eq(p.iter().rev()));
        }
    }
}
