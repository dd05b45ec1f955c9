//! Enumeration of the placement tuples underlying the SAT variables.
//!
//! A child tuple asserts one candidate edge: copy `s#tag` sits under parent
//! symbol `p`, with the parent's node constraint pinned by a lead
//! association, the argument cells pinned per set, and (when the parent
//! family is active) the child's parent constraint pinned likewise. A root
//! tuple asserts that a copy is a root, carrying only its own lead
//! association. Validity is enforced at construction: argument and lead
//! cells come from the same instances, ordered arguments occupy one
//! position across every set, self-referential placements are dropped, and
//! mask values must be consistent with the edge they describe.

use std::collections::{BTreeSet, HashMap};

use crate::constraints::{ConstraintSystem, Side, SymbolId};
use crate::error::Error;
use crate::Result;

use super::assoc::AssocTable;
use super::extract::{Extraction, Instance, InstanceKind, OccId};

/// One propositional variable of the reconstruction formula.
#[derive(Clone, Debug)]
pub struct Tuple {
    /// 1-based solver variable.
    pub var: usize,
    /// The copy this tuple places (the argument symbol).
    pub copy: usize,
    /// Parent symbol; None marks a root tuple.
    pub parent: Option<SymbolId>,
    /// The copy's own lead association; None for leaves.
    pub lead: Option<usize>,
    /// The parent's lead association; None for root tuples.
    pub parent_lead: Option<usize>,
    /// The copy's child association; None for root tuples and when the
    /// parent family is disabled.
    pub child_assoc: Option<usize>,
    /// Argument position under an ordered parent.
    pub position: Option<u32>,
    pub(crate) arg_occs: Vec<OccId>,
    pub(crate) parent_occs: Vec<OccId>,
}

impl Tuple {
    pub(crate) fn key(&self) -> TupleKey {
        TupleKey {
            copy: self.copy,
            lead: self.lead,
            parent_lead: self.parent_lead,
            child_assoc: self.child_assoc,
            arg_occs: self.arg_occs.clone(),
            parent_occs: self.parent_occs.clone(),
        }
    }
}

#[derive(Clone, Debug, Hash, PartialEq, Eq)]
pub(crate) struct TupleKey {
    pub copy: usize,
    pub lead: Option<usize>,
    pub parent_lead: Option<usize>,
    pub child_assoc: Option<usize>,
    pub arg_occs: Vec<OccId>,
    pub parent_occs: Vec<OccId>,
}

pub(crate) fn enumerate(
    system: &ConstraintSystem,
    ex: &Extraction,
    assocs: &AssocTable,
    max_vars: usize,
) -> Result<(Vec<Tuple>, HashMap<TupleKey, usize>)> {
    let sig = system.signature();
    let masks = &sig.masks;
    let parent_family = sig.parent_constraints_enabled();
    let bypass = masks.enabled() && masks.negation_bypass;
    let mut tuples: Vec<Tuple> = Vec::new();
    let mut lookup = HashMap::new();

    let push = |tuples: &mut Vec<Tuple>,
                lookup: &mut HashMap<TupleKey, usize>,
                t: Tuple|
     -> Result<()> {
        if t.var > max_vars {
            return Err(Error::FormulaTooLarge { variables: t.var, max: max_vars });
        }
        lookup.insert(t.key(), t.var - 1);
        tuples.push(t);
        Ok(())
    };

    for raw in 0..system.symbol_count() as u32 {
        let sym_id = SymbolId(raw);
        let copies = ex.counts[raw as usize];
        if copies == 0 {
            continue;
        }
        let sym = system.symbol(sym_id);

        if sig.is_root(sym) {
            let leads: Vec<Option<usize>> = if sym.arity == 0 {
                vec![None]
            } else {
                assocs
                    .leads_of
                    .get(&(sym_id, Side::Root))
                    .map(|ids| ids.iter().map(|&i| Some(i)).collect())
                    .unwrap_or_default()
            };
            for la in leads {
                for tag in 0..copies {
                    let copy = ex.copy_index(sym_id, tag).expect("copy exists");
                    let var = tuples.len() + 1;
                    push(
                        &mut tuples,
                        &mut lookup,
                        Tuple {
                            var,
                            copy,
                            parent: None,
                            lead: la,
                            parent_lead: None,
                            child_assoc: None,
                            position: None,
                            arg_occs: Vec::new(),
                            parent_occs: Vec::new(),
                        },
                    )?;
                }
            }
        }

        // As a child, a non-leaf copy needs an internal-side lead in every
        // set and, with the parent family on, a child association.
        let la_options: Vec<Option<usize>> = if sym.arity == 0 {
            vec![None]
        } else {
            match assocs.leads_of.get(&(sym_id, Side::Internal)) {
                Some(ids) => ids.iter().map(|&i| Some(i)).collect(),
                None => continue,
            }
        };
        let child_options: Vec<Option<usize>> = if parent_family {
            match assocs.children_of.get(&sym_id) {
                Some(ids) => ids.iter().map(|&i| Some(i)).collect(),
                None => continue,
            }
        } else {
            vec![None]
        };
        if bypass && sig.is_negation(sym) && sym.mask.arg_position.is_some() {
            continue;
        }

        for parent_raw in 0..system.symbol_count() as u32 {
            let p_id = SymbolId(parent_raw);
            if ex.counts[parent_raw as usize] == 0 {
                continue;
            }
            let p_sym = system.symbol(p_id);
            if p_sym.arity == 0 {
                continue;
            }
            for side in [Side::Root, Side::Internal] {
                let Some(lp_list) = assocs.leads_of.get(&(p_id, side)) else { continue };
                if masks.enabled() && masks.depth {
                    let parent_depth = match side {
                        Side::Root => Some(0),
                        Side::Internal => p_sym.mask.depth,
                    };
                    let Some(d) = parent_depth else { continue };
                    if sym.arity >= 1 && sym.mask.depth != Some(d + 1) {
                        continue;
                    }
                }
                let check_position = masks.enabled()
                    && masks.arg_number
                    && sym.arity >= 1
                    && !(bypass && sig.is_negation(sym))
                    && !(bypass && sig.is_negation(p_sym));

                for &lp in lp_list {
                    let insts: Vec<&Instance> = assocs.leads[lp]
                        .iter()
                        .map(|&o| &ex.instances[ex.occurrences[o].instance])
                        .collect();
                    let positional =
                        matches!(insts[0].kind, InstanceKind::Node { positional: true, .. });
                    let arg_combos = argument_combos(ex, &insts, sym_id, positional);
                    for (arg_occs, position) in arg_combos {
                        if check_position && sym.mask.arg_position != position {
                            continue;
                        }
                        for &ca in &child_options {
                            let parent_combos = match ca {
                                Some(ca) => slot_combos(ex, &assocs.children[ca], p_id),
                                None => vec![Vec::new()],
                            };
                            for parent_occs in parent_combos {
                                for &la in &la_options {
                                    if la == Some(lp) {
                                        continue;
                                    }
                                    for tag in 0..copies {
                                        let copy =
                                            ex.copy_index(sym_id, tag).expect("copy exists");
                                        let var = tuples.len() + 1;
                                        push(
                                            &mut tuples,
                                            &mut lookup,
                                            Tuple {
                                                var,
                                                copy,
                                                parent: Some(p_id),
                                                lead: la,
                                                parent_lead: Some(lp),
                                                child_assoc: ca,
                                                position,
                                                arg_occs: arg_occs.clone(),
                                                parent_occs: parent_occs.clone(),
                                            },
                                        )?;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((tuples, lookup))
}

/// Ways the symbol can fill the arguments of the instances behind one lead
/// association: one occurrence per set, at a shared position when the
/// constraints are ordered, any slot combination otherwise.
fn argument_combos(
    ex: &Extraction,
    insts: &[&Instance],
    sym: SymbolId,
    positional: bool,
) -> Vec<(Vec<OccId>, Option<u32>)> {
    if positional {
        let mut shared: Option<BTreeSet<u32>> = None;
        for inst in insts {
            let here: BTreeSet<u32> = inst
                .slots
                .clone()
                .filter(|&o| ex.occurrences[o].contains(sym))
                .map(|o| ex.occurrences[o].position)
                .collect();
            shared = Some(match shared {
                None => here,
                Some(prev) => prev.intersection(&here).copied().collect(),
            });
        }
        shared
            .unwrap_or_default()
            .into_iter()
            .map(|pos| {
                let occs = insts.iter().map(|i| i.slots.start + pos as usize - 1).collect();
                (occs, Some(pos))
            })
            .collect()
    } else {
        let per_set: Vec<Vec<OccId>> = insts
            .iter()
            .map(|i| i.slots.clone().filter(|&o| ex.occurrences[o].contains(sym)).collect())
            .collect();
        product(&per_set).into_iter().map(|occs| (occs, None)).collect()
    }
}

/// Ways the parent symbol can fill one parent slot of the instances behind a
/// child association.
fn slot_combos(ex: &Extraction, child_occs: &[OccId], parent: SymbolId) -> Vec<Vec<OccId>> {
    let per_set: Vec<Vec<OccId>> = child_occs
        .iter()
        .map(|&o| {
            let inst = &ex.instances[ex.occurrences[o].instance];
            inst.slots.clone().filter(|&s| ex.occurrences[s].contains(parent)).collect()
        })
        .collect();
    product(&per_set)
}

fn product(per_set: &[Vec<OccId>]) -> Vec<Vec<OccId>> {
    if per_set.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for list in per_set {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for &occ in list {
                let mut row = prefix.clone();
                row.push(occ);
                next.push(row);
            }
        }
        out = next;
    }
    out
}
