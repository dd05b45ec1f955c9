//! Depth and argument-number masking of graph nodes.
//!
//! Masking rewrites interior node symbols to variants tagged with structural
//! context, which restores positional information that counting otherwise
//! discards. Roots and leaves are never masked. A node's depth is its
//! distance from its root; its argument number is the position it occupies
//! under an ordered parent. Shared nodes whose parents disagree on either
//! value cannot be masked and are rejected.

use crate::error::Error;
use crate::graph::{Graph, Violation};
use crate::signature::Signature;
use crate::symbol::{ArgOrder, Mask};
use crate::Result;

/// Rewrites every maskable node to its masked variant under the signature's
/// mask configuration. Returns the graph unchanged when masks are off.
pub fn apply_masks(sig: &Signature, graph: &Graph) -> Result<Graph> {
    if !sig.masks.enabled() {
        return Ok(graph.clone());
    }
    let Some(order) = graph.topo_order() else {
        return Err(Error::InvalidGraph(vec![Violation::Cycle { node: 0 }]));
    };
    for id in 0..graph.node_count() {
        if graph.symbol(id).is_masked() {
            return Err(Error::Unsupported(format!(
                "node {id} ({}) already carries a mask",
                graph.symbol(id)
            )));
        }
    }

    let n = graph.node_count();
    let degrees = graph.in_degrees();
    let bypass = sig.masks.negation_bypass;

    // Depth of each node, parents first. Disagreement between parents only
    // matters where a mask would actually land.
    let mut depth = vec![None::<u32>; n];
    // Effective argument position: the index under an ordered parent, with
    // negation nodes passing their own position through to their argument.
    let mut position = vec![None::<Option<u32>>; n];

    for &id in &order {
        if degrees[id] == 0 {
            depth[id] = Some(0);
            position[id] = Some(None);
        }
        let here_depth = depth[id].expect("parents precede children in topo order");
        let here_position = position[id].expect("parents precede children in topo order");
        let forwards = bypass && sig.is_negation(graph.symbol(id));
        let ordered_parent = graph.symbol(id).arg_order == ArgOrder::Ordered;
        for (i, &child) in graph.args(id).iter().enumerate() {
            let proposed_depth = here_depth + 1;
            let proposed_position = if forwards {
                here_position
            } else if ordered_parent {
                Some(i as u32 + 1)
            } else {
                None
            };
            let maskable = !graph.args(child).is_empty();
            match depth[child] {
                None => depth[child] = Some(proposed_depth),
                Some(d) if d != proposed_depth && maskable && sig.masks.depth => {
                    return Err(Error::AmbiguousMask(format!(
                        "node {child} ({}) is at depths {d} and {proposed_depth}",
                        graph.symbol(child)
                    )));
                }
                Some(_) => {}
            }
            match position[child] {
                None => position[child] = Some(proposed_position),
                Some(p) if p != proposed_position && maskable && sig.masks.arg_number => {
                    return Err(Error::AmbiguousMask(format!(
                        "node {child} ({}) sits at argument positions {} and {}",
                        graph.symbol(child),
                        describe(p),
                        describe(proposed_position)
                    )));
                }
                Some(_) => {}
            }
        }
    }

    let mut masked = Vec::with_capacity(n);
    for id in 0..n {
        let sym = graph.symbol(id);
        if degrees[id] == 0 || graph.args(id).is_empty() {
            masked.push(sym.clone());
            continue;
        }
        let d = depth[id].expect("reachable in a rooted DAG");
        let mask = Mask {
            depth: if sig.masks.depth {
                if d > sig.masks.max_depth {
                    return Err(Error::MaskDepthExceeded { depth: d, max: sig.masks.max_depth });
                }
                Some(d)
            } else {
                None
            },
            arg_position: if sig.masks.arg_number && !(bypass && sig.is_negation(sym)) {
                position[id].expect("reachable in a rooted DAG")
            } else {
                None
            },
        };
        masked.push(sym.with_mask(mask));
    }
    Ok(Graph::from_parts(masked, (0..n).map(|id| graph.args(id).to_vec()).collect()))
}

/// Inverse of [`apply_masks`]: drops every mask, keeping structure.
#[must_use]
pub fn strip_masks(graph: &Graph) -> Graph {
    graph.map_symbols(|_, sym| sym.base())
}

fn describe(position: Option<u32>) -> String {
    match position {
        Some(p) => p.to_string(),
        None => "none".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{MaskConfig, SignatureOptions};
    use crate::symbol::Symbol;

    fn sig(masks: MaskConfig, negation: Option<&str>) -> Signature {
        let mut internals = vec![
            Symbol::ordered("f", 2),
            Symbol::ordered("g", 1),
            Symbol::unordered("u", 2),
            Symbol::leaf("a"),
            Symbol::leaf("b"),
        ];
        if negation.is_some() {
            internals.push(Symbol::ordered("~", 1));
        }
        Signature::declare(
            vec![Symbol::ordered("p", 2)],
            internals,
            SignatureOptions {
                masks,
                negation: negation.map(String::from),
                ..SignatureOptions::default()
            },
        )
        .unwrap()
    }

    fn both() -> MaskConfig {
        MaskConfig { depth: true, arg_number: true, max_depth: 12, negation_bypass: false }
    }

    #[test]
    fn roots_and_leaves_stay_bare() {
        let sig = sig(both(), None);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let b = g.leaf(Symbol::leaf("b"));
        let f = g.add_node(Symbol::ordered("f", 2), vec![a, b]);
        g.add_node(Symbol::ordered("p", 2), vec![f, a]);
        let m = apply_masks(&sig, &g).unwrap();
        assert_eq!(m.symbol(0), &Symbol::leaf("a"));
        assert_eq!(m.symbol(3), &Symbol::ordered("p", 2));
        assert_eq!(
            m.symbol(2),
            &Symbol::ordered("f", 2).with_mask(Mask { depth: Some(1), arg_position: Some(1) })
        );
    }

    #[test]
    fn depth_counts_from_root() {
        let sig = sig(
            MaskConfig { depth: true, ..MaskConfig::default() },
            None,
        );
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        let g2 = g.add_node(Symbol::ordered("g", 1), vec![g1]);
        g.add_node(Symbol::ordered("p", 2), vec![g2, a]);
        let m = apply_masks(&sig, &g).unwrap();
        assert_eq!(m.symbol(2).mask.depth, Some(1));
        assert_eq!(m.symbol(1).mask.depth, Some(2));
    }

    #[test]
    fn unordered_parent_gives_no_position() {
        let sig = sig(
            MaskConfig { arg_number: true, ..MaskConfig::default() },
            None,
        );
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        let g2 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        let u = g.add_node(Symbol::unordered("u", 2), vec![g1, g2]);
        g.add_node(Symbol::ordered("p", 2), vec![u, a]);
        let m = apply_masks(&sig, &g).unwrap();
        // u sits at position 1 under the ordered root; the g's under u get none.
        assert_eq!(m.symbol(3).mask.arg_position, Some(1));
        assert_eq!(m.symbol(1).mask, Mask::NONE);
        assert_eq!(m.symbol(2).mask, Mask::NONE);
    }

    #[test]
    fn negation_bypass_forwards_position() {
        let cfg = MaskConfig { arg_number: true, negation_bypass: true, ..MaskConfig::default() };
        let sig = sig(cfg, Some("~"));
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        let neg = g.add_node(Symbol::ordered("~", 1), vec![g1]);
        g.add_node(Symbol::ordered("p", 2), vec![a, neg]);
        let m = apply_masks(&sig, &g).unwrap();
        // The negation stays bare and its argument inherits position 2.
        assert_eq!(m.symbol(2).mask, Mask::NONE);
        assert_eq!(m.symbol(1).mask.arg_position, Some(2));
    }

    #[test]
    fn shared_node_with_conflicting_depths_is_rejected() {
        let sig = sig(MaskConfig { depth: true, ..MaskConfig::default() }, None);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        let g2 = g.add_node(Symbol::ordered("g", 1), vec![g1]);
        g.add_node(Symbol::ordered("p", 2), vec![g1, g2]);
        let err = apply_masks(&sig, &g).unwrap_err();
        assert!(matches!(err, Error::AmbiguousMask(_)));
    }

    #[test]
    fn shared_leaf_with_conflicting_depths_is_fine() {
        let sig = sig(both(), None);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        g.add_node(Symbol::ordered("p", 2), vec![g1, a]);
        let m = apply_masks(&sig, &g).unwrap();
        assert_eq!(m.symbol(0).mask, Mask::NONE);
    }

    #[test]
    fn depth_beyond_bound_is_rejected() {
        let cfg = MaskConfig { depth: true, max_depth: 1, ..MaskConfig::default() };
        let sig = sig(cfg, None);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        let g2 = g.add_node(Symbol::ordered("g", 1), vec![g1]);
        g.add_node(Symbol::ordered("p", 2), vec![g2, a]);
        let err = apply_masks(&sig, &g).unwrap_err();
        assert!(matches!(err, Error::MaskDepthExceeded { depth: 2, max: 1 }));
    }

    #[test]
    fn strip_masks_round_trips() {
        let sig = sig(both(), None);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let b = g.leaf(Symbol::leaf("b"));
        let f = g.add_node(Symbol::ordered("f", 2), vec![a, b]);
        let u = g.add_node(Symbol::unordered("u", 2), vec![f, b]);
        g.add_node(Symbol::ordered("p", 2), vec![u, a]);
        let m = apply_masks(&sig, &g).unwrap();
        assert_eq!(strip_masks(&m), g);
        assert!(m.validate(&sig).is_empty());
    }

    #[test]
    fn masks_off_is_identity() {
        let sig = sig(MaskConfig::default(), None);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        g.add_node(Symbol::ordered("g", 1), vec![a]);
        g.add_node(Symbol::ordered("p", 2), vec![1, 0]);
        assert_eq!(apply_masks(&sig, &g).unwrap(), g);
    }
}
