//! Extraction of symbol copies and constraint instances from a vector.
//!
//! A count of k at a symbol index yields k tagged node copies; a count of k
//! at a constraint index yields k distinguishable constraint instances. Each
//! instance is flattened into its constituent cell occurrences (lead,
//! argument, child, parent), which are what associations and tuples later
//! reference, so multiplicities stay distinct throughout.

use std::collections::HashMap;

use crate::constraints::{ConstraintRef, ConstraintSystem, Location, Side, SymbolId};
use crate::error::Error;
use crate::vector::CountVector;
use crate::Result;

pub(crate) type OccId = usize;
pub(crate) type InstId = usize;

/// One tagged copy of a symbol from the extracted multiset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CopyRef {
    pub symbol: SymbolId,
    pub tag: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    Lead,
    Arg,
    Child,
    Parent,
}

/// One constituent cell of one constraint instance.
#[derive(Clone, Debug)]
pub(crate) struct Occurrence {
    pub set: usize,
    pub instance: InstId,
    pub role: Role,
    /// Argument or parent slot, 1-based; 0 for leads and child cells.
    pub position: u32,
    /// Cell members, ascending.
    pub members: Vec<SymbolId>,
}

impl Occurrence {
    pub(crate) fn contains(&self, id: SymbolId) -> bool {
        self.members.binary_search(&id).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum InstanceKind {
    /// A node constraint: ordered, unordered, or sequence.
    Node { side: Side, positional: bool },
    Parent,
}

/// One extracted constraint instance, pointing at its occurrences.
#[derive(Clone, Debug)]
pub(crate) struct Instance {
    pub kind: InstanceKind,
    /// Lead occurrence for node constraints, child occurrence for parent
    /// constraints.
    pub anchor: OccId,
    /// Argument occurrences for node constraints (positions 1..=m, with a
    /// sequence's link as the last), parent-slot occurrences otherwise.
    pub slots: std::ops::Range<OccId>,
}

#[derive(Debug)]
pub(crate) struct Extraction {
    pub copies: Vec<CopyRef>,
    /// First copy index per symbol, for symbols with a nonzero count.
    pub copy_base: HashMap<SymbolId, usize>,
    /// Copy count per universe symbol.
    pub counts: Vec<u32>,
    pub occurrences: Vec<Occurrence>,
    pub instances: Vec<Instance>,
    /// (set, offset, ordinal) -> instance, for replaying a known graph.
    pub instance_at: HashMap<(usize, usize, u32), InstId>,
}

impl Extraction {
    pub(crate) fn copy_index(&self, symbol: SymbolId, tag: u32) -> Option<usize> {
        let base = *self.copy_base.get(&symbol)?;
        (tag < self.counts[symbol.0 as usize]).then(|| base + tag as usize)
    }
}

pub(crate) fn extract(
    system: &ConstraintSystem,
    vector: &CountVector,
    copy_cap: usize,
) -> Result<Extraction> {
    if vector.len() != system.len() {
        return Err(Error::VectorLength { expected: system.len(), got: vector.len() });
    }
    let seq = system.signature().sequence.as_ref();
    let position_id = |index: u32| -> SymbolId {
        let decl = seq.expect("sequence constraint outside a sequence signature");
        system
            .symbol_id(&decl.position_symbol(index))
            .expect("sequence positions are interned")
    };
    let eos_id = seq
        .map(|decl| system.symbol_id(&decl.eos_symbol()).expect("sequence end is interned"));

    let mut ex = Extraction {
        copies: Vec::new(),
        copy_base: HashMap::new(),
        counts: vec![0; system.symbol_count()],
        occurrences: Vec::new(),
        instances: Vec::new(),
        instance_at: HashMap::new(),
    };

    for (index, count) in vector.iter() {
        match system.locate(index) {
            Location::Symbol(id) => {
                ex.counts[id.0 as usize] = count;
                ex.copy_base.insert(id, ex.copies.len());
                for tag in 0..count {
                    ex.copies.push(CopyRef { symbol: id, tag });
                }
                if ex.copies.len() > copy_cap {
                    return Err(Error::FormulaTooLarge {
                        variables: ex.copies.len(),
                        max: copy_cap,
                    });
                }
            }
            Location::Constraint { set, offset } => {
                for ordinal in 0..count {
                    materialize(
                        &mut ex,
                        system,
                        set,
                        offset,
                        ordinal,
                        &position_id,
                        eos_id,
                    );
                }
            }
        }
    }
    Ok(ex)
}

fn materialize(
    ex: &mut Extraction,
    system: &ConstraintSystem,
    set: usize,
    offset: usize,
    ordinal: u32,
    position_id: &dyn Fn(u32) -> SymbolId,
    eos_id: Option<SymbolId>,
) {
    let instance = ex.instances.len();
    ex.instance_at.insert((set, offset, ordinal), instance);
    let first = ex.occurrences.len();
    let mut push = |role: Role, position: u32, members: Vec<SymbolId>| {
        ex.occurrences.push(Occurrence { set, instance, role, position, members });
    };
    let kind = match system.view(set, offset) {
        ConstraintRef::Ordered { group, lead_cell, arg_cells } => {
            push(Role::Lead, 0, group.lead.members(lead_cell));
            for (i, &cell) in arg_cells.iter().enumerate() {
                let split = &group.args[lead_cell as usize][i];
                push(Role::Arg, i as u32 + 1, split.members(cell));
            }
            InstanceKind::Node { side: group.side, positional: true }
        }
        ConstraintRef::Unordered { group, lead_cell, arg_cells } => {
            push(Role::Lead, 0, group.lead.members(lead_cell));
            let split = &group.args[lead_cell as usize];
            for (i, &cell) in arg_cells.iter().enumerate() {
                push(Role::Arg, i as u32 + 1, split.members(cell));
            }
            InstanceKind::Node { side: group.side, positional: false }
        }
        ConstraintRef::Parent { block, child_cell, parent_cells } => {
            push(Role::Child, 0, block.child.members(child_cell));
            let split = &block.parent_splits[child_cell as usize];
            for (i, &cell) in parent_cells.iter().enumerate() {
                push(Role::Parent, i as u32 + 1, split.members(cell));
            }
            InstanceKind::Parent
        }
        ConstraintRef::Sequence { block, slot_cells } => {
            push(Role::Lead, 0, vec![position_id(block.position)]);
            for (i, &cell) in slot_cells.iter().enumerate() {
                push(Role::Arg, i as u32 + 1, block.slots[i].members(cell));
            }
            let link = if block.terminated {
                eos_id.expect("sequence signatures declare an end symbol")
            } else {
                position_id(block.position + 1)
            };
            push(Role::Arg, slot_cells.len() as u32 + 1, vec![link]);
            let side = if block.position == 1 { Side::Root } else { Side::Internal };
            InstanceKind::Node { side, positional: true }
        }
    };
    let end = ex.occurrences.len();
    ex.instances.push(Instance { kind, anchor: first, slots: first + 1..end });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Widths;
    use crate::encode::encode;
    use crate::graph::Graph;
    use crate::signature::{Signature, SignatureOptions};
    use crate::symbol::Symbol;

    fn small_system(t: u32) -> ConstraintSystem {
        let sig = Signature::declare(
            vec![Symbol::ordered("f", 2)],
            vec![Symbol::leaf("a"), Symbol::leaf("b")],
            SignatureOptions { max_parents: 1, ..SignatureOptions::default() },
        )
        .unwrap();
        ConstraintSystem::build(sig, Widths::uniform(2), t, 11).unwrap()
    }

    #[test]
    fn zero_vector_extracts_nothing() {
        let system = small_system(2);
        let ex = extract(&system, &CountVector::zeros(system.len()), 1000).unwrap();
        assert!(ex.copies.is_empty());
        assert!(ex.instances.is_empty());
    }

    #[test]
    fn counts_become_copies_and_instances() {
        let system = small_system(2);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let b = g.leaf(Symbol::leaf("b"));
        g.add_node(Symbol::ordered("f", 2), vec![a, b]);
        let v = encode(&system, &g).unwrap();
        let ex = extract(&system, &v, 1000).unwrap();
        assert_eq!(ex.copies.len(), 3);
        // Per set: one node constraint and two parent constraints.
        assert_eq!(ex.instances.len(), 6);
        let nodes = ex
            .instances
            .iter()
            .filter(|i| matches!(i.kind, InstanceKind::Node { .. }))
            .count();
        assert_eq!(nodes, 2);
        for inst in &ex.instances {
            let anchor = &ex.occurrences[inst.anchor];
            assert_eq!(anchor.position, 0);
            for occ in inst.slots.clone() {
                assert!(ex.occurrences[occ].position >= 1);
                assert_eq!(ex.occurrences[occ].instance, ex.occurrences[inst.anchor].instance);
            }
        }
    }

    #[test]
    fn repeated_constraints_get_distinct_instances() {
        let system = small_system(1);
        // Two identical trees in one forest share every constraint index.
        let mut g = Graph::new();
        for _ in 0..2 {
            let a = g.leaf(Symbol::leaf("a"));
            let b = g.leaf(Symbol::leaf("b"));
            g.add_node(Symbol::ordered("f", 2), vec![a, b]);
        }
        let v = encode(&system, &g).unwrap();
        let ex = extract(&system, &v, 1000).unwrap();
        assert_eq!(ex.copies.len(), 6);
        assert_eq!(ex.copies.iter().filter(|c| c.tag == 1).count(), 3);
        assert_eq!(ex.instances.len(), 6);
        assert!(ex.instance_at.keys().any(|&(_, _, ordinal)| ordinal == 1));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let system = small_system(1);
        let err = extract(&system, &CountVector::zeros(3), 1000).unwrap_err();
        assert!(matches!(err, Error::VectorLength { .. }));
    }

    #[test]
    fn copy_cap_guards_huge_vectors() {
        let system = small_system(1);
        let mut v = CountVector::zeros(system.len());
        v.add(0, 50);
        let err = extract(&system, &v, 10).unwrap_err();
        assert!(matches!(err, Error::FormulaTooLarge { .. }));
    }
}
