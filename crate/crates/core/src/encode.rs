//! Graph decomposition and count-vector encoding.
//!
//! Encoding validates the graph, applies the system's mask configuration,
//! and then, for each parallel constraint set, matches every node against
//! its applicable families: one node constraint for each non-leaf node
//! (ordered, unordered, or sequence, by its symbol), and one parent
//! constraint for each node with parents when that family is enabled. The
//! split discipline makes each match unique, so the resulting counts are a
//! deterministic function of the graph.

use crate::constraints::{ConstraintSystem, Side, SymbolId};
use crate::error::Error;
use crate::graph::Graph;
use crate::signature::apply_masks;
use crate::symbol::ArgOrder;
use crate::vector::CountVector;
use crate::Result;

/// A graph's decomposition: its node symbols (after masking) and, per
/// parallel set, the matched constraint indices, one entry per match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub symbols: Vec<SymbolId>,
    pub constraints: Vec<Vec<usize>>,
}

impl Decomposition {
    /// Tallies the decomposition into a fixed-length count vector.
    #[must_use]
    pub fn to_vector(&self, system: &ConstraintSystem) -> CountVector {
        let mut v = CountVector::zeros(system.len());
        for id in &self.symbols {
            v.increment(id.0 as usize);
        }
        for per_set in &self.constraints {
            for &index in per_set {
                v.increment(index);
            }
        }
        v
    }
}

/// Matches every node of `graph` against every parallel set.
pub fn decompose(system: &ConstraintSystem, graph: &Graph) -> Result<Decomposition> {
    let sig = system.signature();
    graph.check(sig)?;
    let masked = apply_masks(sig, graph)?;
    debug_assert!(masked.validate(sig).is_empty(), "masking must preserve validity");
    decompose_masked(system, &masked)
}

/// Matching core over an already-masked graph. Matching is local to each
/// node and its edges, so this accepts graphs that fail whole-graph
/// validation, cyclic ones included.
pub(crate) fn decompose_masked(
    system: &ConstraintSystem,
    masked: &Graph,
) -> Result<Decomposition> {
    let sig = system.signature();
    let ids: Vec<SymbolId> = (0..masked.node_count())
        .map(|n| system.symbol_id(masked.symbol(n)).expect("validated symbols are interned"))
        .collect();
    let degrees = masked.in_degrees();
    let parent_edges = masked.parent_edges();
    let eos_id = sig
        .sequence
        .as_ref()
        .map(|seq| system.symbol_id(&seq.eos_symbol()).expect("sequence end token is interned"));
    let slots_per_position = sig.sequence.as_ref().map_or(0, |seq| seq.slots as usize);
    let parent_family = sig.parent_constraints_enabled();

    let fail = |set: usize, node: usize| Error::MatchFailed {
        set,
        node: masked.symbol(node).to_string(),
    };

    let t = system.t() as usize;
    let mut constraints = vec![Vec::new(); t];
    for (set, matched) in constraints.iter_mut().enumerate() {
        for node in 0..masked.node_count() {
            let sym = masked.symbol(node);
            let is_root = degrees[node] == 0;
            if sig.is_sequence_position(sym) {
                let position = sig.sequence_position_index(sym).expect("checked position");
                let args = masked.args(node);
                let slots: Vec<SymbolId> =
                    args[..slots_per_position].iter().map(|&a| ids[a]).collect();
                let link = args[slots_per_position];
                let terminated = Some(ids[link]) == eos_id;
                if !terminated
                    && sig.sequence_position_index(masked.symbol(link)) != Some(position + 1)
                {
                    return Err(fail(set, node));
                }
                let index = system
                    .sequence_index(set, position, &slots, terminated)
                    .ok_or_else(|| fail(set, node))?;
                matched.push(index);
            } else if sym.arity >= 1 {
                let side = if is_root { Side::Root } else { Side::Internal };
                let children: Vec<SymbolId> =
                    masked.args(node).iter().map(|&a| ids[a]).collect();
                let index = match sym.arg_order {
                    ArgOrder::Ordered => system.ordered_index(set, side, ids[node], &children),
                    ArgOrder::Unordered => {
                        system.unordered_index(set, side, ids[node], &children)
                    }
                }
                .ok_or_else(|| fail(set, node))?;
                matched.push(index);
            }
            if !is_root && parent_family {
                let parents: Vec<SymbolId> =
                    parent_edges[node].iter().map(|&(p, _)| ids[p]).collect();
                let index = system
                    .parent_index(set, ids[node], &parents)
                    .ok_or_else(|| fail(set, node))?;
                matched.push(index);
            }
        }
    }
    Ok(Decomposition { symbols: ids, constraints })
}

/// Encodes a graph as its count vector over the system's frozen index map.
pub fn encode(system: &ConstraintSystem, graph: &Graph) -> Result<CountVector> {
    Ok(decompose(system, graph)?.to_vector(system))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{ConstraintRef, Widths};
    use crate::matching::has_perfect_matching;
    use crate::signature::{MaskConfig, SequenceDecl, Signature, SignatureOptions};
    use crate::symbol::Symbol;

    fn system_with(
        roots: Vec<Symbol>,
        internals: Vec<Symbol>,
        options: SignatureOptions,
        w: u32,
        t: u32,
        seed: u64,
    ) -> ConstraintSystem {
        let sig = Signature::declare(roots, internals, options).unwrap();
        ConstraintSystem::build(sig, Widths::uniform(w), t, seed).unwrap()
    }

    fn fig_symbols() -> (Vec<Symbol>, Vec<Symbol>) {
        (
            vec![Symbol::ordered("p", 1)],
            vec![
                Symbol::ordered("f", 2),
                Symbol::leaf("a"),
                Symbol::leaf("b"),
                Symbol::leaf("c"),
                Symbol::leaf("d"),
            ],
        )
    }

    /// All constraints of one set that a node semantically matches, decided
    /// by direct cell membership plus the bipartite correspondence oracle.
    fn brute_force_matches(
        system: &ConstraintSystem,
        set: usize,
        graph: &Graph,
        node: usize,
    ) -> Vec<usize> {
        let sig = system.signature();
        let masked = apply_masks(sig, graph).unwrap();
        let ids: Vec<SymbolId> = (0..masked.node_count())
            .map(|n| system.symbol_id(masked.symbol(n)).unwrap())
            .collect();
        let sym = masked.symbol(node);
        let is_root = masked.in_degrees()[node] == 0;
        let children: Vec<SymbolId> = masked.args(node).iter().map(|&a| ids[a]).collect();
        let mut found = Vec::new();
        for offset in 0..system.set_size() {
            let matches = match system.view(set, offset) {
                ConstraintRef::Ordered { group, lead_cell, arg_cells } => {
                    (group.side == Side::Root) == is_root
                        && group.arity as usize == children.len()
                        && sym.arg_order == ArgOrder::Ordered
                        && group.lead.cell_of(ids[node]) == Some(lead_cell)
                        && children.iter().enumerate().all(|(p, &child)| {
                            group.args[lead_cell as usize][p].cell_of(child)
                                == Some(arg_cells[p])
                        })
                }
                ConstraintRef::Unordered { group, lead_cell, arg_cells } => {
                    (group.side == Side::Root) == is_root
                        && group.arity as usize == children.len()
                        && sym.arg_order == ArgOrder::Unordered
                        && group.lead.cell_of(ids[node]) == Some(lead_cell)
                        && {
                            let split = &group.args[lead_cell as usize];
                            let adj: Vec<Vec<usize>> = children
                                .iter()
                                .map(|&child| {
                                    arg_cells
                                        .iter()
                                        .enumerate()
                                        .filter(|(_, &cell)| split.cell_of(child) == Some(cell))
                                        .map(|(slot, _)| slot)
                                        .collect()
                                })
                                .collect();
                            has_perfect_matching(arg_cells.len(), &adj)
                        }
                }
                ConstraintRef::Parent { block, child_cell, parent_cells } => {
                    let parents: Vec<SymbolId> = masked.parent_edges()[node]
                        .iter()
                        .map(|&(p, _)| ids[p])
                        .collect();
                    !is_root
                        && block.parents as usize == parents.len()
                        && block.child.cell_of(ids[node]) == Some(child_cell)
                        && {
                            let split = &block.parent_splits[child_cell as usize];
                            let adj: Vec<Vec<usize>> = parents
                                .iter()
                                .map(|&p| {
                                    parent_cells
                                        .iter()
                                        .enumerate()
                                        .filter(|(_, &cell)| split.cell_of(p) == Some(cell))
                                        .map(|(slot, _)| slot)
                                        .collect()
                                })
                                .collect();
                            has_perfect_matching(parent_cells.len(), &adj)
                        }
                }
                ConstraintRef::Sequence { .. } => false,
            };
            if matches {
                found.push(system.set_base(set) + offset);
            }
        }
        found
    }

    #[test]
    fn every_eligible_node_matches_exactly_one_constraint_per_family() {
        let (roots, internals) = fig_symbols();
        let system = system_with(
            roots,
            internals,
            SignatureOptions { max_parents: 2, ..SignatureOptions::default() },
            2,
            2,
            17,
        );
        // p(f(c, f(b, c))): c is shared by both f nodes.
        let mut g = Graph::new();
        let b = g.leaf(Symbol::leaf("b"));
        let c = g.leaf(Symbol::leaf("c"));
        let inner = g.add_node(Symbol::ordered("f", 2), vec![b, c]);
        let outer = g.add_node(Symbol::ordered("f", 2), vec![c, inner]);
        g.add_node(Symbol::ordered("p", 1), vec![outer]);

        let d = decompose(&system, &g).unwrap();
        for set in 0..2 {
            for node in 0..g.node_count() {
                let matches = brute_force_matches(&system, set, &g, node);
                let sym = g.symbol(node);
                let is_root = g.in_degrees()[node] == 0;
                let mut expected = 0;
                if sym.arity >= 1 {
                    expected += 1;
                }
                if !is_root {
                    expected += 1;
                }
                assert_eq!(
                    matches.len(),
                    expected,
                    "node {node} ({sym}) in set {set} matched {matches:?}"
                );
                for m in matches {
                    assert!(d.constraints[set].contains(&m));
                }
            }
            // Node constraints: p, f, f. Parent constraints: every non-root.
            assert_eq!(d.constraints[set].len(), 3 + 4);
        }
    }

    #[test]
    fn argument_swap_changes_the_matched_constraint() {
        // An ordered pattern matches f(a, c) and rejects f(c, a) whenever the
        // two symbols fall in different cells of either positional split.
        let (roots, internals) = fig_symbols();
        let mut witnessed = false;
        for seed in 0..32 {
            let system = system_with(
                roots.clone(),
                internals.clone(),
                SignatureOptions::default(),
                2,
                1,
                seed,
            );
            let mut g1 = Graph::new();
            let a = g1.leaf(Symbol::leaf("a"));
            let c = g1.leaf(Symbol::leaf("c"));
            let f = g1.add_node(Symbol::ordered("f", 2), vec![a, c]);
            g1.add_node(Symbol::ordered("p", 1), vec![f]);
            let mut g2 = Graph::new();
            let c = g2.leaf(Symbol::leaf("c"));
            let a = g2.leaf(Symbol::leaf("a"));
            let f = g2.add_node(Symbol::ordered("f", 2), vec![c, a]);
            g2.add_node(Symbol::ordered("p", 1), vec![f]);
            if encode(&system, &g1).unwrap() != encode(&system, &g2).unwrap() {
                witnessed = true;
                break;
            }
        }
        assert!(witnessed, "no seed separated f(a,c) from f(c,a)");
    }

    #[test]
    fn unordered_arguments_commute_and_multiplicity_matters() {
        let system = system_with(
            vec![Symbol::unordered("s", 3)],
            vec![
                Symbol::leaf("x"),
                Symbol::leaf("y"),
                Symbol::leaf("z"),
                Symbol::leaf("u"),
                Symbol::leaf("v"),
            ],
            SignatureOptions::default(),
            2,
            1,
            23,
        );
        let build = |labels: [&str; 3]| {
            let mut g = Graph::new();
            let kids: Vec<usize> =
                labels.iter().map(|l| g.leaf(Symbol::leaf(*l))).collect();
            g.add_node(Symbol::unordered("s", 3), kids);
            g
        };
        let xyz = encode(&system, &build(["x", "y", "z"])).unwrap();
        let zxy = encode(&system, &build(["z", "x", "y"])).unwrap();
        assert_eq!(xyz, zxy);

        let mut multiplicity_witnessed = false;
        for seed in 0..32 {
            let system = system_with(
                vec![Symbol::unordered("s", 3)],
                vec![
                    Symbol::leaf("x"),
                    Symbol::leaf("y"),
                    Symbol::leaf("z"),
                    Symbol::leaf("u"),
                    Symbol::leaf("v"),
                ],
                SignatureOptions::default(),
                2,
                1,
                seed,
            );
            let yyx = encode(&system, &build(["y", "y", "x"])).unwrap();
            let xyz = encode(&system, &build(["x", "y", "z"])).unwrap();
            if yyx != xyz {
                multiplicity_witnessed = true;
                break;
            }
        }
        assert!(multiplicity_witnessed, "no seed separated s(y,y,x) from s(x,y,z)");
    }

    #[test]
    fn single_tree_count_matches_hand_decomposition() {
        // f(a, b) as a root: 3 symbols, and per set one node constraint plus
        // two parent constraints.
        for t in [1u32, 3] {
            let system = system_with(
                vec![Symbol::ordered("f", 2)],
                vec![Symbol::leaf("a"), Symbol::leaf("b")],
                SignatureOptions { max_parents: 1, ..SignatureOptions::default() },
                2,
                t,
                5,
            );
            let mut g = Graph::new();
            let a = g.leaf(Symbol::leaf("a"));
            let b = g.leaf(Symbol::leaf("b"));
            g.add_node(Symbol::ordered("f", 2), vec![a, b]);
            let v = encode(&system, &g).unwrap();
            assert_eq!(v.total(), 3 + 3 * u64::from(t));
            assert_eq!(v.total_in(0..system.symbol_count()), 3);
        }
    }

    #[test]
    fn empty_graph_encodes_to_zero() {
        let (roots, internals) = fig_symbols();
        let system = system_with(roots, internals, SignatureOptions::default(), 2, 2, 1);
        let v = encode(&system, &Graph::new()).unwrap();
        assert!(v.is_zero());
        assert_eq!(v.len(), system.len());
    }

    #[test]
    fn sequences_match_per_position_with_termination() {
        let sig_opts = SignatureOptions {
            sequence: Some(SequenceDecl { length: 4, slots: 1, vocab: 7 }),
            ..SignatureOptions::default()
        };
        let system = system_with(vec![], vec![], sig_opts, 2, 2, 9);
        let seq = system.signature().sequence.clone().unwrap();
        // pos_1(w_2, pos_2(w_5, eos))
        let mut g = Graph::new();
        let eos = g.leaf(seq.eos_symbol());
        let w5 = g.leaf(Symbol::leaf("w_5"));
        let w2 = g.leaf(Symbol::leaf("w_2"));
        let p2 = g.add_node(seq.position_symbol(2), vec![w5, eos]);
        g.add_node(seq.position_symbol(1), vec![w2, p2]);
        let d = decompose(&system, &g).unwrap();
        // One sequence constraint per position node per set; no parents.
        assert_eq!(d.constraints[0].len(), 2);
        assert_eq!(d.constraints[1].len(), 2);
        let v = d.to_vector(&system);
        assert_eq!(v.total(), 5 + 2 * 2);
    }

    #[test]
    fn broken_chain_link_is_rejected() {
        let sig_opts = SignatureOptions {
            sequence: Some(SequenceDecl { length: 4, slots: 1, vocab: 7 }),
            ..SignatureOptions::default()
        };
        let system = system_with(vec![], vec![], sig_opts, 2, 1, 9);
        let seq = system.signature().sequence.clone().unwrap();
        // pos_1's link skips to pos_3.
        let mut g = Graph::new();
        let eos = g.leaf(seq.eos_symbol());
        let w1 = g.leaf(Symbol::leaf("w_1"));
        let w2 = g.leaf(Symbol::leaf("w_2"));
        let p3 = g.add_node(seq.position_symbol(3), vec![w1, eos]);
        g.add_node(seq.position_symbol(1), vec![w2, p3]);
        let err = decompose(&system, &g).unwrap_err();
        assert!(matches!(err, Error::MatchFailed { .. }));
    }

    #[test]
    fn masked_variants_receive_their_own_indices() {
        let system = system_with(
            vec![Symbol::ordered("p", 2)],
            vec![Symbol::ordered("g", 1), Symbol::leaf("a"), Symbol::leaf("b")],
            SignatureOptions {
                masks: MaskConfig {
                    depth: true,
                    arg_number: true,
                    max_depth: 4,
                    ..MaskConfig::default()
                },
                ..SignatureOptions::default()
            },
            2,
            1,
            31,
        );
        // p(g(g(a)), b): the two g nodes differ in depth, so their symbol
        // counts land on different masked variants.
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let b = g.leaf(Symbol::leaf("b"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        let g2 = g.add_node(Symbol::ordered("g", 1), vec![g1]);
        g.add_node(Symbol::ordered("p", 2), vec![g2, b]);
        let v = encode(&system, &g).unwrap();
        let base = system.symbol_id(&Symbol::ordered("g", 1)).unwrap();
        assert_eq!(v.get(base.0 as usize), 0);
        let d1 = system
            .symbol_id(&Symbol::ordered("g", 1).with_mask(crate::symbol::Mask {
                depth: Some(1),
                arg_position: Some(1),
            }))
            .unwrap();
        let d2 = system
            .symbol_id(&Symbol::ordered("g", 1).with_mask(crate::symbol::Mask {
                depth: Some(2),
                arg_position: Some(1),
            }))
            .unwrap();
        assert_eq!(v.get(d1.0 as usize), 1);
        assert_eq!(v.get(d2.0 as usize), 1);
    }

    #[test]
    fn encoding_is_deterministic() {
        let (roots, internals) = fig_symbols();
        let system = system_with(roots, internals, SignatureOptions::default(), 3, 2, 77);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let d = g.leaf(Symbol::leaf("d"));
        let f = g.add_node(Symbol::ordered("f", 2), vec![a, d]);
        g.add_node(Symbol::ordered("p", 1), vec![f]);
        assert_eq!(encode(&system, &g).unwrap(), encode(&system, &g).unwrap());
    }
}
