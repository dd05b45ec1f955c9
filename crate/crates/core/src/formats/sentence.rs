//! Token sequences as binary chains.
//!
//! A sentence `t1 t2 … tk` becomes the chain `pos_1(t1, pos_2(t2, …
//! pos_k(tk, eos)…))`: each position symbol carries its word(s) in the slot
//! arguments and the rest of the chain in the final link argument, and the
//! end marker closes the chain. The empty sentence is the bare end marker.
//! Word tokens are bound to the signature's word placeholders through a
//! [`Binder`], first come, first served.

use crate::binding::Binder;
use crate::error::Error;
use crate::Result;
use crate::graph::Graph;
use crate::signature::{SequenceDecl, Signature, SignatureOptions};

/// Declares a sequence signature for sentences of up to `max_tokens` words
/// over a vocabulary of `vocab` placeholders, the end marker included.
pub fn sentence_signature(max_tokens: u32, vocab: u32) -> Result<Signature> {
    Signature::declare(
        Vec::new(),
        Vec::new(),
        SignatureOptions {
            sequence: Some(SequenceDecl { length: max_tokens, slots: 1, vocab }),
            ..SignatureOptions::default()
        },
    )
}

fn sequence_decl(sig: &Signature) -> Result<&SequenceDecl> {
    sig.sequence
        .as_ref()
        .ok_or_else(|| Error::Unsupported("the signature declares no sequence".into()))
}

/// Converts a token list into its chain graph, binding unseen tokens to
/// fresh word placeholders.
pub fn sentence_to_tree(
    sig: &Signature,
    binder: &mut Binder,
    tokens: &[&str],
) -> Result<Graph> {
    let seq = sequence_decl(sig)?;
    let slots = seq.slots as usize;
    let max = seq.length as usize * slots;
    if tokens.len() > max {
        return Err(Error::SequenceTooLong { len: tokens.len(), max });
    }
    if tokens.len() % slots != 0 {
        return Err(Error::Unsupported(format!(
            "{} tokens do not fill whole blocks of {slots} slots",
            tokens.len()
        )));
    }
    let blocks = tokens.len() / slots;
    let mut bound = Vec::with_capacity(tokens.len());
    for token in tokens {
        bound.push(binder.bind(SequenceDecl::WORD_PREFIX, token, 0)?);
    }

    let mut g = Graph::new();
    let mut link = g.leaf(seq.eos_symbol());
    for block in (0..blocks).rev() {
        let mut args: Vec<usize> = bound[block * slots..(block + 1) * slots]
            .iter()
            .map(|sym| g.leaf(sym.clone()))
            .collect();
        args.push(link);
        link = g.add_node(seq.position_symbol(block as u32 + 1), args);
    }
    Ok(g)
}

/// Reads a chain graph back into its token list, translating word
/// placeholders through the binder.
pub fn tree_to_sentence(sig: &Signature, binder: &Binder, g: &Graph) -> Result<Vec<String>> {
    let seq = sequence_decl(sig)?;
    let slots = seq.slots as usize;
    let not_a_chain = |message: String| Error::Unsupported(format!("not a sentence chain: {message}"));
    if g.is_empty() {
        return Err(not_a_chain("the graph is empty".into()));
    }
    let roots = g.roots();
    let [root] = roots[..] else {
        return Err(not_a_chain(format!("{} roots instead of one", roots.len())));
    };

    let mut tokens = Vec::new();
    let mut visited = vec![false; g.node_count()];
    let mut cursor = root;
    let mut expected = 1u32;
    loop {
        visited[cursor] = true;
        let sym = g.symbol(cursor);
        if *sym == seq.eos_symbol() {
            break;
        }
        if sig.sequence_position_index(sym) != Some(expected) {
            return Err(not_a_chain(format!(
                "expected position {expected} or the end marker, found {sym}"
            )));
        }
        let args = g.args(cursor);
        if args.len() != slots + 1 {
            return Err(not_a_chain(format!("{sym} carries {} arguments", args.len())));
        }
        for &word in &args[..slots] {
            visited[word] = true;
            let wsym = g.symbol(word);
            if !g.args(word).is_empty() {
                return Err(not_a_chain(format!("slot holds the non-leaf {wsym}")));
            }
            match binder.unbind(wsym) {
                Some(token) => tokens.push(token.to_string()),
                None => return Err(not_a_chain(format!("{wsym} has no bound token"))),
            }
        }
        cursor = args[slots];
        expected += 1;
    }
    if let Some(stray) = visited.iter().position(|&v| !v) {
        return Err(not_a_chain(format!(
            "node {stray} ({}) sits outside the chain",
            g.symbol(stray)
        )));
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Symbol;

    fn fixture() -> (Signature, Binder) {
        let sig = sentence_signature(6, 10).unwrap();
        let binder = Binder::for_signature(&sig).unwrap();
        (sig, binder)
    }

    #[test]
    fn round_trips_token_lists() {
        let (sig, mut binder) = fixture();
        for sentence in [
            vec!["what", "states", "border", "texas"],
            vec!["what", "what", "what"],
            vec![],
        ] {
            let g = sentence_to_tree(&sig, &mut binder, &sentence).unwrap();
            g.check(&sig).unwrap();
            let back = tree_to_sentence(&sig, &binder, &g).unwrap();
            assert_eq!(back, sentence);
        }
    }

    #[test]
    fn the_empty_sentence_is_a_bare_end_marker() {
        let (sig, mut binder) = fixture();
        let g = sentence_to_tree(&sig, &mut binder, &[]).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.symbol(0), &Symbol::leaf("eos"));
    }

    #[test]
    fn repeated_tokens_get_their_own_leaf_nodes() {
        let (sig, mut binder) = fixture();
        let g = sentence_to_tree(&sig, &mut binder, &["a", "b", "a"]).unwrap();
        let word_nodes = (0..g.node_count())
            .filter(|&id| g.symbol(id).label.starts_with("w_"))
            .count();
        assert_eq!(word_nodes, 3);
        assert_eq!(binder.len(), 2);
    }

    #[test]
    fn length_and_vocabulary_limits_are_enforced() {
        let (sig, mut binder) = fixture();
        let too_long: Vec<&str> = vec!["x"; 7];
        assert!(matches!(
            sentence_to_tree(&sig, &mut binder, &too_long),
            Err(Error::SequenceTooLong { len: 7, max: 6 })
        ));
        let names: Vec<String> = (0..12).map(|i| format!("tok{i}")).collect();
        let wide: Vec<&str> = names.iter().map(String::as_str).take(6).collect();
        sentence_to_tree(&sig, &mut binder, &wide).unwrap();
        let overflow: Vec<&str> = names.iter().map(String::as_str).skip(6).collect();
        assert!(matches!(
            sentence_to_tree(&sig, &mut binder, &overflow),
            Err(Error::PoolExhausted { .. })
        ));
    }

    #[test]
    fn foreign_graphs_are_rejected_with_a_reason() {
        let (sig, mut binder) = fixture();
        let mut g = Graph::new();
        g.leaf(Symbol::leaf("w_1"));
        assert!(tree_to_sentence(&sig, &binder, &g).is_err());

        binder.bind(SequenceDecl::WORD_PREFIX, "a", 0).unwrap();
        binder.bind(SequenceDecl::WORD_PREFIX, "b", 0).unwrap();
        let stray = Graph::from_parts(
            vec![
                Symbol::leaf("eos"),
                Symbol::leaf("w_1"),
                Symbol::ordered("pos_1", 2),
                Symbol::leaf("w_2"),
                Symbol::ordered("pos_2", 2),
            ],
            vec![vec![], vec![], vec![1, 0], vec![], vec![3, 4]],
        );
        let err = tree_to_sentence(&sig, &binder, &stray).unwrap_err();
        assert!(err.to_string().contains("outside the chain"), "{err}");
    }
}
