//! CNF assembly over placement tuples.
//!
//! Tuples sharing a copy, lead association, and attachment kind are fused
//! into a group variable; a copy with several parents has several true
//! tuples inside its one true group. The formula then states, as
//! exactly-one constraints: every copy is placed once (over its groups),
//! every node-constraint instance is claimed by one lead (over groups),
//! every parent-constraint instance is claimed by one child (over groups),
//! and every argument and parent slot is filled by one tuple. Parent
//! correctness is an implication from each child tuple to the tuples that
//! could realize its claimed parent; the implication edges are exported so
//! cyclic support can be banned separately.

use std::collections::HashMap;

use super::assoc::AssocTable;
use super::extract::{Extraction, Role};
use super::tuples::Tuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum GroupKind {
    Root,
    Child(Option<usize>),
}

#[derive(Clone, Debug)]
pub(crate) struct Group {
    pub copy: usize,
    pub lead: Option<usize>,
    pub kind: GroupKind,
    pub members: Vec<usize>,
    pub var: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Formula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    /// Parent-correctness implication edges between tuple indices.
    pub pc_edges: Vec<(usize, usize)>,
    pub groups: Vec<Group>,
    pub group_of: Vec<usize>,
}

pub(crate) fn build(ex: &Extraction, assocs: &AssocTable, tuples: &[Tuple]) -> Formula {
    let t_count = tuples.len();
    let mut groups: Vec<Group> = Vec::new();
    let mut group_ids: HashMap<(usize, Option<usize>, GroupKind), usize> = HashMap::new();
    let mut group_of = vec![0usize; t_count];
    for (i, t) in tuples.iter().enumerate() {
        let kind = match t.parent {
            None => GroupKind::Root,
            Some(_) => GroupKind::Child(t.child_assoc),
        };
        let gi = *group_ids.entry((t.copy, t.lead, kind)).or_insert_with(|| {
            groups.push(Group {
                copy: t.copy,
                lead: t.lead,
                kind,
                members: Vec::new(),
                var: 0,
            });
            groups.len() - 1
        });
        groups[gi].members.push(i);
        group_of[i] = gi;
    }
    for (gi, g) in groups.iter_mut().enumerate() {
        g.var = t_count + gi + 1;
    }

    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let exactly_one = |vars: Vec<usize>, clauses: &mut Vec<Vec<i32>>| {
        clauses.push(vars.iter().map(|&v| v as i32).collect());
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                clauses.push(vec![-(vars[i] as i32), -(vars[j] as i32)]);
            }
        }
    };

    for g in &groups {
        let gv = g.var as i32;
        let mut back = vec![-gv];
        for &m in &g.members {
            clauses.push(vec![-((m + 1) as i32), gv]);
            back.push((m + 1) as i32);
        }
        clauses.push(back);
    }

    let mut groups_of_copy: Vec<Vec<usize>> = vec![Vec::new(); ex.copies.len()];
    let mut groups_by_lead: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut groups_by_child: HashMap<usize, Vec<usize>> = HashMap::new();
    for (gi, g) in groups.iter().enumerate() {
        groups_of_copy[g.copy].push(gi);
        if let Some(la) = g.lead {
            groups_by_lead.entry(la).or_default().push(gi);
        }
        if let GroupKind::Child(Some(ca)) = g.kind {
            groups_by_child.entry(ca).or_default().push(gi);
        }
    }
    for list in &groups_of_copy {
        exactly_one(list.iter().map(|&gi| groups[gi].var).collect(), &mut clauses);
    }

    let mut leads_at_occ: Vec<Vec<usize>> = vec![Vec::new(); ex.occurrences.len()];
    for (la, a) in assocs.leads.iter().enumerate() {
        for &o in a {
            leads_at_occ[o].push(la);
        }
    }
    let mut children_at_occ: Vec<Vec<usize>> = vec![Vec::new(); ex.occurrences.len()];
    for (ca, a) in assocs.children.iter().enumerate() {
        for &o in a {
            children_at_occ[o].push(ca);
        }
    }
    let mut tuples_at_arg: Vec<Vec<usize>> = vec![Vec::new(); ex.occurrences.len()];
    let mut tuples_at_parent: Vec<Vec<usize>> = vec![Vec::new(); ex.occurrences.len()];
    for (i, t) in tuples.iter().enumerate() {
        for &o in &t.arg_occs {
            tuples_at_arg[o].push(i);
        }
        for &o in &t.parent_occs {
            tuples_at_parent[o].push(i);
        }
    }

    for (o, occ) in ex.occurrences.iter().enumerate() {
        match occ.role {
            Role::Lead => {
                let vars = leads_at_occ[o]
                    .iter()
                    .flat_map(|la| groups_by_lead.get(la).into_iter().flatten())
                    .map(|&gi| groups[gi].var)
                    .collect();
                exactly_one(vars, &mut clauses);
            }
            Role::Child => {
                let vars = children_at_occ[o]
                    .iter()
                    .flat_map(|ca| groups_by_child.get(ca).into_iter().flatten())
                    .map(|&gi| groups[gi].var)
                    .collect();
                exactly_one(vars, &mut clauses);
            }
            Role::Arg => {
                exactly_one(tuples_at_arg[o].iter().map(|&i| i + 1).collect(), &mut clauses);
            }
            Role::Parent => {
                exactly_one(tuples_at_parent[o].iter().map(|&i| i + 1).collect(), &mut clauses);
            }
        }
    }

    let mut tuples_by_lead: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, t) in tuples.iter().enumerate() {
        if let Some(la) = t.lead {
            tuples_by_lead.entry(la).or_default().push(i);
        }
    }
    let mut pc_edges = Vec::new();
    for (i, t) in tuples.iter().enumerate() {
        let Some(lp) = t.parent_lead else { continue };
        let mut clause = vec![-((i + 1) as i32)];
        if let Some(support) = tuples_by_lead.get(&lp) {
            for &q in support {
                clause.push((q + 1) as i32);
                pc_edges.push((i, q));
            }
        }
        clauses.push(clause);
    }

    Formula { num_vars: t_count + groups.len(), clauses, pc_edges, groups, group_of }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{ConstraintSystem, Widths};
    use crate::decode::assoc;
    use crate::decode::extract::extract;
    use crate::decode::tuples::enumerate;
    use crate::encode::encode;
    use crate::graph::Graph;
    use crate::signature::{Signature, SignatureOptions};
    use crate::symbol::Symbol;

    fn build_for(graph: &Graph, t: u32, seed: u64) -> (Vec<Tuple>, Formula) {
        let sig = Signature::declare(
            vec![Symbol::ordered("r", 1)],
            vec![Symbol::ordered("g", 1), Symbol::leaf("a")],
            SignatureOptions { max_parents: 2, ..SignatureOptions::default() },
        )
        .unwrap();
        let system = ConstraintSystem::build(sig, Widths::uniform(2), t, seed).unwrap();
        let v = encode(&system, graph).unwrap();
        let ex = extract(&system, &v, 100_000).unwrap();
        let table = assoc::build(&ex, t as usize, 100_000).unwrap();
        let (tuples, _) = enumerate(&system, &ex, &table, 1_000_000).unwrap();
        let formula = build(&ex, &table, &tuples);
        (tuples, formula)
    }

    fn chain() -> Graph {
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        g.add_node(Symbol::ordered("r", 1), vec![g1]);
        g
    }

    #[test]
    fn every_tuple_lands_in_exactly_one_group() {
        let (tuples, formula) = build_for(&chain(), 2, 11);
        let mut seen = vec![0u32; tuples.len()];
        for g in &formula.groups {
            for &m in &g.members {
                seen[m] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        for (i, t) in tuples.iter().enumerate() {
            let g = &formula.groups[formula.group_of[i]];
            assert_eq!(g.copy, t.copy);
            assert_eq!(g.lead, t.lead);
        }
    }

    #[test]
    fn every_variable_sits_under_an_exactly_one_or_a_group() {
        let (_, formula) = build_for(&chain(), 2, 11);
        let mut covered = vec![false; formula.num_vars + 1];
        // All-positive clauses are exactly the at-least-one halves of the
        // exactly-one constraints.
        for clause in &formula.clauses {
            if !clause.is_empty() && clause.iter().all(|&l| l > 0) {
                for &l in clause {
                    covered[l as usize] = true;
                }
            }
        }
        for g in &formula.groups {
            if covered[g.var] {
                for &m in &g.members {
                    covered[m + 1] = true;
                }
            }
        }
        assert!((1..=formula.num_vars).all(|v| covered[v]));
    }

    #[test]
    fn parent_correctness_edges_point_at_matching_leads() {
        let (tuples, formula) = build_for(&chain(), 1, 4);
        assert!(!formula.pc_edges.is_empty());
        for &(r, q) in &formula.pc_edges {
            assert_eq!(tuples[r].parent_lead, tuples[q].lead);
        }
    }

    #[test]
    fn root_tuples_have_no_outgoing_implications() {
        let (tuples, formula) = build_for(&chain(), 2, 8);
        for &(r, _) in &formula.pc_edges {
            assert!(tuples[r].parent.is_some());
        }
    }
}
