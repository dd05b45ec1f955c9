//! Reassembly of a graph from a satisfying assignment.
//!
//! Every copy must be placed by the tuples of exactly one group; lead
//! associations claimed by groups identify each child tuple's parent node.
//! Structural defects that a well-formed model cannot exhibit surface as
//! assembly errors; defects the formula itself does not rule out, cyclic
//! support being the canonical one when cycle nogoods are disabled, surface
//! as invalid-model violations from graph validation.

use std::collections::HashMap;

use crate::constraints::ConstraintSystem;
use crate::error::Error;
use crate::graph::Graph;
use crate::symbol::ArgOrder;
use crate::Result;

use super::extract::Extraction;
use super::formula::Formula;
use super::tuples::Tuple;

pub(crate) fn assemble(
    system: &ConstraintSystem,
    ex: &Extraction,
    tuples: &[Tuple],
    formula: &Formula,
    model: &[bool],
) -> Result<Graph> {
    let n = ex.copies.len();
    let mut true_of_copy: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, t) in tuples.iter().enumerate() {
        if model[i + 1] {
            true_of_copy[t.copy].push(i);
        }
    }

    let mut lead_claim: HashMap<usize, usize> = HashMap::new();
    for (copy, placed) in true_of_copy.iter().enumerate() {
        let Some(&first) = placed.first() else {
            return Err(Error::ModelAssembly(format!("copy {copy} is placed by no tuple")));
        };
        let gi = formula.group_of[first];
        if placed.iter().any(|&i| formula.group_of[i] != gi) {
            return Err(Error::ModelAssembly(format!(
                "copy {copy} is placed by tuples of different groups"
            )));
        }
        if let Some(la) = formula.groups[gi].lead {
            if let Some(prev) = lead_claim.insert(la, copy) {
                return Err(Error::ModelAssembly(format!(
                    "lead association {la} claimed by copies {prev} and {copy}"
                )));
            }
        }
    }

    let mut ordered_args: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    let mut unordered_args: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (copy, placed) in true_of_copy.iter().enumerate() {
        for &i in placed {
            let t = &tuples[i];
            let Some(lp) = t.parent_lead else { continue };
            let Some(&parent) = lead_claim.get(&lp) else {
                return Err(Error::ModelAssembly(format!(
                    "copy {copy} hangs off unclaimed lead association {lp}"
                )));
            };
            let parent_sym = system.symbol(ex.copies[parent].symbol);
            match (parent_sym.arg_order, t.position) {
                (ArgOrder::Ordered, Some(pos)) => ordered_args[parent].push((pos, copy)),
                (ArgOrder::Unordered, None) => unordered_args[parent].push(copy),
                _ => {
                    return Err(Error::ModelAssembly(format!(
                        "argument position of copy {copy} disagrees with parent {parent}"
                    )));
                }
            }
        }
    }

    let mut nodes = Vec::with_capacity(n);
    let mut args = Vec::with_capacity(n);
    for copy in 0..n {
        let sym = system.symbol(ex.copies[copy].symbol).clone();
        let m = sym.arity as usize;
        let list = match sym.arg_order {
            ArgOrder::Ordered => {
                let mut slots: Vec<Option<usize>> = vec![None; m];
                for &(pos, child) in &ordered_args[copy] {
                    let slot = slots.get_mut(pos as usize - 1).ok_or_else(|| {
                        Error::ModelAssembly(format!(
                            "argument position {pos} outside arity {m} of copy {copy}"
                        ))
                    })?;
                    if slot.replace(child).is_some() {
                        return Err(Error::ModelAssembly(format!(
                            "argument position {pos} of copy {copy} filled twice"
                        )));
                    }
                }
                slots.into_iter().flatten().collect()
            }
            ArgOrder::Unordered => {
                let mut list = unordered_args[copy].clone();
                list.sort_unstable();
                list
            }
        };
        nodes.push(sym);
        args.push(list);
    }

    let graph = Graph::from_parts(nodes, args);
    let violations = graph.validate(system.signature());
    if violations.is_empty() {
        Ok(graph)
    } else {
        Err(Error::InvalidModel(violations))
    }
}
