//! Synthetic corpora.
//!
//! Deterministic generators for experiment inputs: Zipf-distributed token
//! sentences, random CNF clauses kept inside the structural caps, and a
//! five-class clause corpus whose classes share one symbol bag and differ
//! only in how the symbols are arranged, so bag-of-words similarity is
//! nearly blind to the class while structural similarity is not.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::rng;

/// `count` sentences of 1 to `max_tokens` tokens, drawn from a Zipf-like
/// distribution over `vocab` tokens named `t1 … t{vocab}`.
#[must_use]
pub fn zipf_sentences(seed: u64, count: usize, vocab: usize, max_tokens: usize) -> Vec<String> {
    let mut rng = rng::stream(seed, 0);
    let weights: Vec<f64> = (1..=vocab).map(|rank| 1.0 / (rank as f64).powf(1.1)).collect();
    let dist = WeightedIndex::new(&weights).expect("vocab is nonempty");
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_tokens);
            let words: Vec<String> =
                (0..len).map(|_| format!("t{}", dist.sample(&mut rng) + 1)).collect();
            words.join(" ")
        })
        .collect()
}

/// Shape of the random clause corpus. Name counts are per arity and bound
/// how many distinct labels the corpus can touch, so a clause signature
/// with at least these pool sizes can bind every generated clause.
#[derive(Clone, Copy, Debug)]
pub struct ClauseSynthConfig {
    pub constants: u32,
    pub unary: u32,
    pub binary: u32,
    pub ternary: u32,
    /// Distinct variables available to any one clause.
    pub variables: u32,
    pub max_literals: u32,
    pub max_parents: u32,
    /// Deepest function nesting below a literal.
    pub max_term_depth: u32,
}

impl Default for ClauseSynthConfig {
    fn default() -> Self {
        ClauseSynthConfig {
            constants: 6,
            unary: 5,
            binary: 4,
            ternary: 2,
            variables: 4,
            max_literals: 3,
            max_parents: 5,
            max_term_depth: 2,
        }
    }
}

struct ClauseSampler<'a> {
    config: &'a ClauseSynthConfig,
    rng: ChaCha8Rng,
    names: [Vec<String>; 4],
}

impl<'a> ClauseSampler<'a> {
    fn new(config: &'a ClauseSynthConfig, seed: u64) -> ClauseSampler<'a> {
        let pool = |prefix: &str, count: u32| -> Vec<String> {
            (1..=count).map(|i| format!("{prefix}{i}")).collect()
        };
        ClauseSampler {
            config,
            rng: rng::stream(seed, 0),
            names: [
                pool("a", config.constants),
                pool("f", config.unary),
                pool("g", config.binary),
                pool("h", config.ternary),
            ],
        }
    }

    fn name(&mut self, arity: usize) -> Option<String> {
        self.names[arity].choose(&mut self.rng).cloned()
    }

    fn pick_arity(&mut self, weights: [u32; 4]) -> Option<usize> {
        let usable: Vec<(usize, u32)> = (0..4)
            .zip(weights)
            .filter(|&(arity, weight)| weight > 0 && !self.names[arity].is_empty())
            .collect();
        if usable.is_empty() {
            return None;
        }
        let dist = WeightedIndex::new(usable.iter().map(|&(_, w)| w)).expect("nonzero weights");
        Some(usable[dist.sample(&mut self.rng)].0)
    }

    fn variable(&mut self, vars: &mut Vec<(String, u32)>) -> Option<String> {
        let mut open: Vec<usize> = (0..vars.len())
            .filter(|&i| vars[i].1 < self.config.max_parents)
            .collect();
        if (vars.len() as u32) < self.config.variables {
            open.push(vars.len());
        }
        let &slot = open.choose(&mut self.rng)?;
        if slot == vars.len() {
            vars.push((format!("X{}", slot + 1), 0));
        }
        vars[slot].1 += 1;
        Some(vars[slot].0.clone())
    }

    fn term(&mut self, depth: u32, vars: &mut Vec<(String, u32)>) -> String {
        let leafward = depth == 0 || self.rng.gen_bool(0.55);
        if leafward {
            if self.rng.gen_bool(0.45) {
                if let Some(var) = self.variable(vars) {
                    return var;
                }
            }
            return self.name(0).expect("constants pool is nonempty");
        }
        let arity = self.pick_arity([0, 4, 2, 1]).expect("a function pool is nonempty");
        let head = self.name(arity).expect("picked a nonempty pool");
        let args: Vec<String> = (0..arity).map(|_| self.term(depth - 1, vars)).collect();
        format!("{head}({})", args.join(", "))
    }

    fn literal(&mut self, vars: &mut Vec<(String, u32)>) -> String {
        if self.rng.gen_bool(0.15) {
            let lhs = self.term(1, vars);
            let rhs = self.term(1, vars);
            let op = if self.rng.gen_bool(0.5) { "=" } else { "!=" };
            return format!("{lhs} {op} {rhs}");
        }
        let arity = self
            .pick_arity([1, 3, 3, 1])
            .expect("a predicate pool is nonempty");
        let atom = if arity == 0 {
            self.name(0).expect("constants pool is nonempty")
        } else {
            let head = self.name(arity).expect("picked a nonempty pool");
            let args: Vec<String> = (0..arity)
                .map(|_| self.term(self.config.max_term_depth - 1, vars))
                .collect();
            format!("{head}({})", args.join(", "))
        };
        if self.rng.gen_bool(0.25) {
            format!("~{atom}")
        } else {
            atom
        }
    }

    fn clause(&mut self) -> String {
        let mut vars = Vec::new();
        let spread = self.config.max_literals.max(1);
        let weights: Vec<u32> = (1..=spread).map(|k| if k == 2 { 3 } else { 2 }).collect();
        let dist = WeightedIndex::new(&weights).expect("nonzero weights");
        let nlit = dist.sample(&mut self.rng) + 1;
        let literals: Vec<String> = (0..nlit).map(|_| self.literal(&mut vars)).collect();
        literals.join(" | ")
    }
}

/// `count` random clauses inside the configured caps. Clauses with the
/// same seed come out identical, and every clause parses under caps of
/// (ordered 3, unordered `max_literals.max(2)`, `max_parents`).
#[must_use]
pub fn random_clauses(seed: u64, count: usize, config: &ClauseSynthConfig) -> Vec<String> {
    assert!(config.constants > 0, "clause synthesis needs constants");
    assert!(config.max_term_depth >= 1, "terms need at least depth 1");
    let mut sampler = ClauseSampler::new(config, seed);
    (0..count).map(|_| sampler.clause()).collect()
}

const CLASS_CORES: [&str; 5] = [
    "p(f(a), g(b))",
    "p(g(a), f(b))",
    "p(f(b), g(a))",
    "p(g(b), f(a))",
    "p(a, g(f(b)))",
];

const CLASS_NOISE: [&str; 5] = ["q(X1)", "~q(X1)", "r(c, X1)", "r(X1, c)", "s0"];

/// A five-class clause corpus of `per_class` items each, labels 0 to 4.
/// Every class core uses the same symbol multiset `{p, f, g, a, b}`, so the
/// classes differ structurally but barely in bag-of-words terms; random
/// shared noise literals are appended to both.
#[must_use]
pub fn labeled_clause_classes(seed: u64, per_class: usize) -> (Vec<String>, Vec<usize>) {
    let mut rng = rng::stream(seed, 0);
    let mut corpus = Vec::with_capacity(5 * per_class);
    let mut labels = Vec::with_capacity(5 * per_class);
    for (class, core) in CLASS_CORES.iter().enumerate() {
        for _ in 0..per_class {
            let mut clause = (*core).to_string();
            for noise in CLASS_NOISE {
                if rng.gen_bool(0.3) {
                    clause.push_str(" | ");
                    clause.push_str(noise);
                }
            }
            corpus.push(clause);
            labels.push(class);
        }
    }
    (corpus, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binding::Binder;
    use crate::formats::clause::{
        bind_clause, clause_signature, normalize_variables, parse_clause, ClauseCaps,
        ClauseSignatureSpec, VariableMode,
    };

    #[test]
    fn sentences_stay_inside_their_vocabulary_and_length() {
        let corpus = zipf_sentences(3, 50, 40, 12);
        assert_eq!(corpus.len(), 50);
        for sentence in &corpus {
            let tokens: Vec<&str> = sentence.split_whitespace().collect();
            assert!((1..=12).contains(&tokens.len()));
            for token in tokens {
                let rank: usize = token.strip_prefix('t').unwrap().parse().unwrap();
                assert!((1..=40).contains(&rank));
            }
        }
        assert_eq!(corpus, zipf_sentences(3, 50, 40, 12));
        assert_ne!(corpus, zipf_sentences(4, 50, 40, 12));
    }

    #[test]
    fn random_clauses_parse_within_their_declared_caps() {
        let config = ClauseSynthConfig::default();
        let caps = ClauseCaps {
            ordered_arity: 3,
            unordered_arity: config.max_literals.max(2),
            max_parents: config.max_parents,
        };
        let corpus = random_clauses(11, 60, &config);
        assert_eq!(corpus, random_clauses(11, 60, &config));
        for text in &corpus {
            parse_clause(text, &caps)
                .unwrap_or_else(|e| panic!("generated clause {text:?} failed: {e}"));
        }
    }

    #[test]
    fn random_clauses_bind_into_a_matching_signature() {
        let config = ClauseSynthConfig::default();
        let sig = clause_signature(&ClauseSignatureSpec {
            constants: config.constants,
            unary: config.unary,
            binary: config.binary,
            ternary: config.ternary,
            variables: config.variables,
            caps: ClauseCaps {
                ordered_arity: 3,
                unordered_arity: config.max_literals.max(2),
                max_parents: config.max_parents,
            },
            masks: true,
        })
        .unwrap();
        let mut binder = Binder::for_signature(&sig).unwrap();
        let caps = ClauseCaps {
            ordered_arity: 3,
            unordered_arity: config.max_literals.max(2),
            max_parents: config.max_parents,
        };
        for text in random_clauses(7, 40, &config) {
            let parsed = parse_clause(&text, &caps).unwrap();
            let normalized =
                normalize_variables(&parsed, config.variables, VariableMode::Distinct).unwrap();
            let bound = bind_clause(&normalized, &mut binder).unwrap();
            bound.check(&sig).unwrap();
        }
    }

    #[test]
    fn labeled_classes_share_one_symbol_bag() {
        let (corpus, labels) = labeled_clause_classes(5, 8);
        assert_eq!(corpus.len(), 40);
        assert_eq!(labels.len(), 40);
        let caps = ClauseCaps::default();
        for text in &corpus {
            parse_clause(text, &caps).unwrap();
        }
        for class in 0..5 {
            assert_eq!(labels.iter().filter(|&&l| l == class).count(), 8);
        }
        let bare: Vec<&String> =
            corpus.iter().filter(|text| !text.contains('|')).collect();
        for text in bare {
            for sym in ["p", "f", "g", "a", "b"] {
                assert!(text.contains(sym), "{text} lost {sym}");
            }
        }
    }
}
