//! Count-vector decoding as satisfiability solving.
//!
//! A vector fixes how many copies of each symbol exist and which constraint
//! instances they must jointly claim. Compilation enumerates every way a
//! copy can sit in the claimed instances as placement tuples, fuses them
//! into a CNF formula, and bans cyclic parent support with one nogood per
//! simple implication cycle. Decoding solves the formula, reassembles the
//! model into a graph, and by default verifies the result by re-encoding
//! it; models whose vectors disagree are blocked and solving resumes. The
//! compilation is exposed on its own so assignments can be audited: a known
//! graph can be replayed into the assignment it induces, any assignment can
//! be evaluated against the clauses, and the formula can be written out in
//! DIMACS form with a variable map.

mod assoc;
mod cycles;
mod extract;
mod formula;
mod model;
mod solver;
mod tuples;

pub use extract::CopyRef;
pub use solver::{ExternalBackend, SatBackend, SplrBackend};
pub use tuples::Tuple;

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::constraints::{ConstraintSystem, SymbolId};
use crate::encode::{decompose_masked, encode};
use crate::error::Error;
use crate::graph::Graph;
use crate::matching::maximum_matching;
use crate::signature::{apply_masks, strip_masks};
use crate::vector::CountVector;
use crate::Result;

use extract::{Extraction, InstId, OccId};
use formula::{Formula, GroupKind};
use tuples::TupleKey;

#[derive(Clone, Debug)]
pub struct DecodeOptions {
    /// Wall-clock budget covering compilation and all solver calls.
    pub budget: Duration,
    /// Re-encode each model and demand the exact input vector back.
    pub verify: bool,
    /// Abort when the implication graph holds more simple cycles than this.
    pub cycle_cap: usize,
    /// Ban cyclic parent support up front. Without the nogoods a model may
    /// assemble into a cyclic graph, which is then rejected as invalid.
    pub cycle_nogoods: bool,
    /// Abort when the formula needs more variables than this.
    pub max_variables: usize,
    /// Directory receiving the DIMACS formula and its variable map.
    pub dump: Option<PathBuf>,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions {
            budget: Duration::from_secs(30),
            verify: true,
            cycle_cap: 100_000,
            cycle_nogoods: true,
            max_variables: 200_000,
            dump: None,
        }
    }
}

/// A count vector compiled to CNF, with the bookkeeping to interpret
/// assignments.
pub struct Compilation<'a> {
    system: &'a ConstraintSystem,
    vector: CountVector,
    ex: Extraction,
    assocs: assoc::AssocTable,
    tuples: Vec<Tuple>,
    lookup: HashMap<TupleKey, usize>,
    formula: Formula,
    nogoods: Vec<Vec<i32>>,
}

pub fn compile<'a>(
    system: &'a ConstraintSystem,
    vector: &CountVector,
    options: &DecodeOptions,
) -> Result<Compilation<'a>> {
    compile_inner(system, vector, options, Instant::now() + options.budget)
}

fn compile_inner<'a>(
    system: &'a ConstraintSystem,
    vector: &CountVector,
    options: &DecodeOptions,
    deadline: Instant,
) -> Result<Compilation<'a>> {
    let ex = extract::extract(system, vector, options.max_variables)?;
    let assocs = assoc::build(&ex, system.t() as usize, options.max_variables)?;
    let (tuples, lookup) = tuples::enumerate(system, &ex, &assocs, options.max_variables)?;
    let formula = formula::build(&ex, &assocs, &tuples);
    if formula.num_vars > options.max_variables {
        return Err(Error::FormulaTooLarge {
            variables: formula.num_vars,
            max: options.max_variables,
        });
    }
    let nogoods = if options.cycle_nogoods {
        cycles::simple_cycles(tuples.len(), &formula.pc_edges, options.cycle_cap, Some(deadline))?
            .into_iter()
            .map(|cycle| cycle.into_iter().map(|v| -((v + 1) as i32)).collect())
            .collect()
    } else {
        Vec::new()
    };
    Ok(Compilation {
        system,
        vector: vector.clone(),
        ex,
        assocs,
        tuples,
        lookup,
        formula,
        nogoods,
    })
}

impl Compilation<'_> {
    #[must_use]
    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    #[must_use]
    pub fn copies(&self) -> &[CopyRef] {
        &self.ex.copies
    }

    #[must_use]
    pub fn copy_symbol(&self, copy: usize) -> SymbolId {
        self.ex.copies[copy].symbol
    }

    #[must_use]
    pub fn num_variables(&self) -> usize {
        self.formula.num_vars
    }

    #[must_use]
    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.formula.clauses
    }

    #[must_use]
    pub fn nogoods(&self) -> &[Vec<i32>] {
        &self.nogoods
    }

    /// Whether the assignment satisfies the formula, optionally including
    /// the cycle nogoods.
    #[must_use]
    pub fn evaluate(&self, model: &[bool], with_nogoods: bool) -> bool {
        let sat = |clause: &Vec<i32>| {
            clause.iter().any(|&lit| {
                if lit > 0 {
                    model[lit as usize]
                } else {
                    !model[(-lit) as usize]
                }
            })
        };
        self.formula.clauses.iter().all(sat)
            && (!with_nogoods || self.nogoods.iter().all(sat))
    }

    /// Expands a set of true tuples into a full assignment, setting each
    /// group variable to the disjunction of its members.
    #[must_use]
    pub fn assignment_from_tuples(&self, true_tuples: &[usize]) -> Vec<bool> {
        let mut model = vec![false; self.formula.num_vars + 1];
        for &i in true_tuples {
            model[i + 1] = true;
        }
        for g in &self.formula.groups {
            if g.members.iter().any(|&m| model[m + 1]) {
                model[g.var] = true;
            }
        }
        model
    }

    /// Replays a known graph into the assignment it induces. The graph must
    /// reproduce this compilation's vector; beyond that only local shape is
    /// required, so cyclic graphs are accepted when masks are off.
    pub fn induced_assignment(&self, graph: &Graph) -> Result<Vec<bool>> {
        let sig = self.system.signature();
        let masked = apply_masks(sig, graph)?;
        let d = decompose_masked(self.system, &masked)?;
        if d.to_vector(self.system) != self.vector {
            return Err(Error::ModelAssembly(
                "graph does not reproduce the compiled count vector".into(),
            ));
        }
        let t = self.system.t() as usize;
        let n = masked.node_count();
        let ids = &d.symbols;
        let degrees = masked.in_degrees();
        let parent_edges = masked.parent_edges();
        let parent_family = sig.parent_constraints_enabled();

        let mut tag_counter: HashMap<SymbolId, u32> = HashMap::new();
        let copies: Vec<usize> = (0..n)
            .map(|node| {
                let c = tag_counter.entry(ids[node]).or_insert(0);
                let tag = *c;
                *c += 1;
                self.ex.copy_index(ids[node], tag).expect("vector equality covers the counts")
            })
            .collect();

        let mut node_inst: Vec<Vec<Option<InstId>>> = vec![vec![None; n]; t];
        let mut parent_inst: Vec<Vec<Option<InstId>>> = vec![vec![None; n]; t];
        for set in 0..t {
            let mut ordinals: HashMap<usize, u32> = HashMap::new();
            let mut stream = d.constraints[set].iter();
            let claim = |index: usize, ordinals: &mut HashMap<usize, u32>| {
                let offset = index - self.system.set_base(set);
                let ord = ordinals.entry(offset).or_insert(0);
                let inst = self.ex.instance_at[&(set, offset, *ord)];
                *ord += 1;
                inst
            };
            for node in 0..n {
                if masked.symbol(node).arity >= 1 {
                    let &index = stream.next().expect("decomposition aligns with nodes");
                    node_inst[set][node] = Some(claim(index, &mut ordinals));
                }
                if degrees[node] > 0 && parent_family {
                    let &index = stream.next().expect("decomposition aligns with nodes");
                    parent_inst[set][node] = Some(claim(index, &mut ordinals));
                }
            }
        }

        let assign_slots = |inst: InstId, members: &[SymbolId]| -> Vec<OccId> {
            let inst = &self.ex.instances[inst];
            let slots: Vec<OccId> = inst.slots.clone().collect();
            let positional = matches!(
                inst.kind,
                extract::InstanceKind::Node { positional: true, .. }
            );
            if positional {
                members.iter().enumerate().map(|(k, _)| slots[k]).collect()
            } else {
                let adj: Vec<Vec<usize>> = members
                    .iter()
                    .map(|&m| {
                        slots
                            .iter()
                            .enumerate()
                            .filter(|(_, &o)| self.ex.occurrences[o].contains(m))
                            .map(|(k, _)| k)
                            .collect()
                    })
                    .collect();
                maximum_matching(slots.len(), &adj)
                    .into_iter()
                    .map(|k| slots[k.expect("a matched constraint admits a slot assignment")])
                    .collect()
            }
        };

        let mut arg_slot: Vec<Vec<Vec<OccId>>> = vec![vec![Vec::new(); n]; t];
        let mut parent_slot: Vec<Vec<Vec<OccId>>> = vec![vec![Vec::new(); n]; t];
        for set in 0..t {
            for node in 0..n {
                if let Some(inst) = node_inst[set][node] {
                    let children: Vec<SymbolId> =
                        masked.args(node).iter().map(|&a| ids[a]).collect();
                    arg_slot[set][node] = assign_slots(inst, &children);
                }
                if let Some(inst) = parent_inst[set][node] {
                    let parents: Vec<SymbolId> =
                        parent_edges[node].iter().map(|&(p, _)| ids[p]).collect();
                    parent_slot[set][node] = assign_slots(inst, &parents);
                }
            }
        }

        let lead_assoc: Vec<Option<usize>> = (0..n)
            .map(|node| {
                node_inst[0][node].map(|_| {
                    let anchors: Vec<OccId> = (0..t)
                        .map(|s| self.ex.instances[node_inst[s][node].unwrap()].anchor)
                        .collect();
                    self.assocs
                        .lead_id(ids[node], &anchors)
                        .expect("replayed lead association exists")
                })
            })
            .collect();
        let child_assoc: Vec<Option<usize>> = (0..n)
            .map(|node| {
                parent_inst[0][node].map(|_| {
                    let anchors: Vec<OccId> = (0..t)
                        .map(|s| self.ex.instances[parent_inst[s][node].unwrap()].anchor)
                        .collect();
                    self.assocs
                        .child_id(ids[node], &anchors)
                        .expect("replayed child association exists")
                })
            })
            .collect();

        let mut true_tuples = Vec::new();
        for node in 0..n {
            if degrees[node] == 0 {
                let key = TupleKey {
                    copy: copies[node],
                    lead: lead_assoc[node],
                    parent_lead: None,
                    child_assoc: None,
                    arg_occs: Vec::new(),
                    parent_occs: Vec::new(),
                };
                true_tuples
                    .push(*self.lookup.get(&key).expect("every root placement is enumerated"));
            } else {
                for (e, &(p, pos)) in parent_edges[node].iter().enumerate() {
                    let key = TupleKey {
                        copy: copies[node],
                        lead: lead_assoc[node],
                        parent_lead: Some(
                            lead_assoc[p].expect("parents carry a node constraint"),
                        ),
                        child_assoc: child_assoc[node],
                        arg_occs: (0..t)
                            .map(|s| arg_slot[s][p][pos as usize - 1])
                            .collect(),
                        parent_occs: (0..t).map(|s| parent_slot[s][node][e]).collect(),
                    };
                    true_tuples.push(
                        *self.lookup.get(&key).expect("every edge placement is enumerated"),
                    );
                }
            }
        }
        Ok(self.assignment_from_tuples(&true_tuples))
    }

    /// Reassembles an assignment into a graph, masks stripped.
    pub fn model_graph(&self, model: &[bool]) -> Result<Graph> {
        let masked = model::assemble(self.system, &self.ex, &self.tuples, &self.formula, model)?;
        Ok(strip_masks(&masked))
    }

    pub fn write_dimacs(&self, w: &mut impl io::Write, with_nogoods: bool) -> io::Result<()> {
        let extra = if with_nogoods { self.nogoods.len() } else { 0 };
        writeln!(w, "p cnf {} {}", self.formula.num_vars, self.formula.clauses.len() + extra)?;
        let nogoods = with_nogoods.then_some(&self.nogoods).into_iter().flatten();
        for clause in self.formula.clauses.iter().chain(nogoods) {
            for lit in clause {
                write!(w, "{lit} ")?;
            }
            writeln!(w, "0")?;
        }
        Ok(())
    }

    /// One line per variable: what the solver is deciding when it sets it.
    pub fn write_variable_map(&self, w: &mut impl io::Write) -> io::Result<()> {
        let copy_name = |copy: usize| {
            let c = &self.ex.copies[copy];
            format!("{}#{}", self.system.symbol(c.symbol), c.tag)
        };
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        for t in &self.tuples {
            let parent = t
                .parent
                .map_or_else(|| "root".to_string(), |p| self.system.symbol(p).to_string());
            writeln!(
                w,
                "{} tuple {} parent={} lead={} parent-lead={} child-assoc={} position={}",
                t.var,
                copy_name(t.copy),
                parent,
                opt(t.lead),
                opt(t.parent_lead),
                opt(t.child_assoc),
                t.position.map_or_else(|| "-".to_string(), |p| p.to_string()),
            )?;
        }
        for g in &self.formula.groups {
            let kind = match g.kind {
                GroupKind::Root => "root".to_string(),
                GroupKind::Child(ca) => format!("child assoc={}", opt(ca)),
            };
            writeln!(w, "{} group {} lead={} {}", g.var, copy_name(g.copy), opt(g.lead), kind)?;
        }
        Ok(())
    }

    fn dump(&self, dir: &std::path::Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut cnf = fs::File::create(dir.join("formula.cnf"))?;
        self.write_dimacs(&mut cnf, true)?;
        let mut map = fs::File::create(dir.join("variables.txt"))?;
        self.write_variable_map(&mut map)?;
        Ok(())
    }
}

/// Decodes with the default options and the in-process solver.
pub fn decode(system: &ConstraintSystem, vector: &CountVector) -> Result<Graph> {
    decode_with(system, vector, &DecodeOptions::default(), &SplrBackend)
}

pub fn decode_with(
    system: &ConstraintSystem,
    vector: &CountVector,
    options: &DecodeOptions,
    backend: &dyn SatBackend,
) -> Result<Graph> {
    let deadline = Instant::now() + options.budget;
    if vector.len() != system.len() {
        return Err(Error::VectorLength { expected: system.len(), got: vector.len() });
    }
    if vector.is_zero() {
        return Ok(Graph::new());
    }
    let comp = compile_inner(system, vector, options, deadline)?;
    if let Some(dir) = &options.dump {
        comp.dump(dir)?;
    }
    let mut clauses = comp.formula.clauses.clone();
    clauses.extend(comp.nogoods.iter().cloned());
    loop {
        let remaining = remaining_budget(deadline)?;
        match backend.solve(comp.formula.num_vars, &clauses, remaining)? {
            None => return Err(Error::Unsat),
            Some(model) => {
                if !options.verify {
                    return comp.model_graph(&model);
                }
                match comp.model_graph(&model) {
                    Ok(graph) if encode(system, &graph)? == *vector => return Ok(graph),
                    Ok(_) | Err(Error::InvalidModel(_)) | Err(Error::ModelAssembly(_)) => {
                        clauses.push(blocking_clause(&comp.tuples, &model));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
}

/// Enumerates distinct decodings until the limit, unsatisfiability, or the
/// budget ends the search. The budget only errors when nothing was found.
pub fn decode_all(
    system: &ConstraintSystem,
    vector: &CountVector,
    options: &DecodeOptions,
    backend: &dyn SatBackend,
    limit: usize,
) -> Result<Vec<Graph>> {
    let deadline = Instant::now() + options.budget;
    if vector.len() != system.len() {
        return Err(Error::VectorLength { expected: system.len(), got: vector.len() });
    }
    if vector.is_zero() {
        return Ok(vec![Graph::new()]);
    }
    let comp = compile_inner(system, vector, options, deadline)?;
    let mut clauses = comp.formula.clauses.clone();
    clauses.extend(comp.nogoods.iter().cloned());
    let mut found: Vec<Graph> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    while found.len() < limit {
        let Ok(remaining) = remaining_budget(deadline) else {
            break;
        };
        let model = match backend.solve(comp.formula.num_vars, &clauses, remaining) {
            Ok(Some(model)) => model,
            Ok(None) => return Ok(found),
            Err(Error::Timeout) => break,
            Err(e) => return Err(e),
        };
        match comp.model_graph(&model) {
            Ok(graph) => {
                let verified = !options.verify || encode(system, &graph)? == *vector;
                if verified && seen.insert(graph.canonical_text()?) {
                    found.push(graph);
                }
            }
            Err(Error::InvalidModel(_) | Error::ModelAssembly(_)) if options.verify => {}
            Err(e) => return Err(e),
        }
        clauses.push(blocking_clause(&comp.tuples, &model));
    }
    if found.is_empty() {
        return Err(Error::Timeout);
    }
    Ok(found)
}

fn remaining_budget(deadline: Instant) -> Result<Duration> {
    match deadline.checked_duration_since(Instant::now()) {
        Some(d) if !d.is_zero() => Ok(d),
        _ => Err(Error::Timeout),
    }
}

fn blocking_clause(tuples: &[Tuple], model: &[bool]) -> Vec<i32> {
    tuples
        .iter()
        .filter(|t| model[t.var])
        .map(|t| -(t.var as i32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Widths;
    use crate::signature::{MaskConfig, Signature, SignatureOptions};
    use crate::symbol::Symbol;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn small_system(masks: bool, w: u32, t: u32, seed: u64) -> ConstraintSystem {
        let mask_config = if masks {
            MaskConfig { depth: true, arg_number: true, max_depth: 8, ..MaskConfig::default() }
        } else {
            MaskConfig::default()
        };
        let sig = Signature::declare(
            vec![Symbol::ordered("p", 1)],
            vec![
                Symbol::ordered("f", 2),
                Symbol::ordered("g", 1),
                Symbol::leaf("a"),
                Symbol::leaf("b"),
                Symbol::leaf("c"),
            ],
            SignatureOptions { max_parents: 2, masks: mask_config, ..SignatureOptions::default() },
        )
        .unwrap();
        ConstraintSystem::build(sig, Widths::uniform(w), t, seed).unwrap()
    }

    fn shared_leaf_graph() -> Graph {
        // p(f(c, f(b, c))) with one shared c.
        let mut g = Graph::new();
        let b = g.leaf(Symbol::leaf("b"));
        let c = g.leaf(Symbol::leaf("c"));
        let inner = g.add_node(Symbol::ordered("f", 2), vec![b, c]);
        let outer = g.add_node(Symbol::ordered("f", 2), vec![c, inner]);
        g.add_node(Symbol::ordered("p", 1), vec![outer]);
        g
    }

    fn random_tree(rng: &mut impl Rng, max_nodes: usize) -> Graph {
        let mut g = Graph::new();
        let mut budget = max_nodes - 1;
        let root_child = random_subtree(rng, &mut g, &mut budget);
        g.add_node(Symbol::ordered("p", 1), vec![root_child]);
        g
    }

    fn random_subtree(rng: &mut impl Rng, g: &mut Graph, budget: &mut usize) -> usize {
        *budget = budget.saturating_sub(1);
        let leaves = ["a", "b", "c"];
        if *budget == 0 || rng.gen_bool(0.4) {
            return g.leaf(Symbol::leaf(leaves[rng.gen_range(0..3)]));
        }
        if *budget >= 2 && rng.gen_bool(0.5) {
            let left = random_subtree(rng, g, budget);
            let right = random_subtree(rng, g, budget);
            g.add_node(Symbol::ordered("f", 2), vec![left, right])
        } else {
            let child = random_subtree(rng, g, budget);
            g.add_node(Symbol::ordered("g", 1), vec![child])
        }
    }

    #[test]
    fn round_trips_a_small_tree() {
        let system = small_system(false, 2, 2, 21);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let b = g.leaf(Symbol::leaf("b"));
        let f = g.add_node(Symbol::ordered("f", 2), vec![a, b]);
        g.add_node(Symbol::ordered("p", 1), vec![f]);
        let v = encode(&system, &g).unwrap();
        let decoded = decode(&system, &v).unwrap();
        assert!(decoded.validate(system.signature()).is_empty());
        assert_eq!(encode(&system, &decoded).unwrap(), v);
    }

    #[test]
    fn zero_vector_decodes_to_the_empty_graph() {
        let system = small_system(false, 2, 2, 3);
        let v = CountVector::zeros(system.len());
        assert!(decode(&system, &v).unwrap().is_empty());
    }

    #[test]
    fn wrong_length_vector_is_rejected() {
        let system = small_system(false, 2, 2, 3);
        let v = CountVector::zeros(system.len() + 1);
        match decode(&system, &v) {
            Err(Error::VectorLength { .. }) => {}
            other => panic!("expected length error, got {other:?}"),
        }
    }

    /// Compiles with nogoods when the implication graph is small enough,
    /// without them otherwise. A dense unmasked system can exceed any cycle
    /// cap on ordinary inputs, and these tests target the core clauses.
    fn compile_tolerant<'a>(
        system: &'a ConstraintSystem,
        v: &CountVector,
    ) -> Compilation<'a> {
        match compile(system, v, &DecodeOptions::default()) {
            Err(Error::CycleBudget { .. }) => {
                let options = DecodeOptions { cycle_nogoods: false, ..DecodeOptions::default() };
                compile(system, v, &options).unwrap()
            }
            other => other.unwrap(),
        }
    }

    #[test]
    fn induced_assignment_of_a_shared_leaf_graph_satisfies_the_formula() {
        let system = small_system(false, 2, 2, 29);
        let g = shared_leaf_graph();
        let v = encode(&system, &g).unwrap();
        let comp = compile_tolerant(&system, &v);
        let model = comp.induced_assignment(&g).unwrap();
        assert!(comp.evaluate(&model, true));
        let back = comp.model_graph(&model).unwrap();
        assert_eq!(encode(&system, &back).unwrap(), v);
    }

    #[test]
    fn induced_assignment_respects_masks() {
        let system = small_system(true, 2, 2, 41);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let g1 = g.add_node(Symbol::ordered("g", 1), vec![a]);
        let g2 = g.add_node(Symbol::ordered("g", 1), vec![g1]);
        g.add_node(Symbol::ordered("p", 1), vec![g2]);
        let v = encode(&system, &g).unwrap();
        let comp = compile(&system, &v, &DecodeOptions::default()).unwrap();
        let model = comp.induced_assignment(&g).unwrap();
        assert!(comp.evaluate(&model, true));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn induced_assignments_always_satisfy_the_formula(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let system = small_system(seed % 2 == 0, 2, 2, seed);
            let g = random_tree(&mut rng, 7);
            let v = encode(&system, &g).unwrap();
            let comp = compile_tolerant(&system, &v);
            let model = comp.induced_assignment(&g).unwrap();
            prop_assert!(comp.evaluate(&model, true));
        }
    }

    /// Decodes with the default options, falling back to nogood-free search
    /// when the implication graph is too dense to enumerate. The verify loop
    /// still rejects any spurious model the missing nogoods would have cut.
    fn decode_tolerant(system: &ConstraintSystem, v: &CountVector) -> Graph {
        match decode(system, v) {
            Err(Error::CycleBudget { .. }) => {
                let options = DecodeOptions { cycle_nogoods: false, ..DecodeOptions::default() };
                decode_with(system, v, &options, &SplrBackend).unwrap()
            }
            other => other.unwrap(),
        }
    }

    #[test]
    fn random_trees_decode_to_encoding_equal_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..15 {
            let system = small_system(case % 2 == 0, 3, 3, 100 + case);
            let g = random_tree(&mut rng, 6);
            let v = encode(&system, &g).unwrap();
            let decoded = decode_tolerant(&system, &v);
            assert_eq!(
                encode(&system, &decoded).unwrap(),
                v,
                "case {case} produced a non-verifying decode"
            );
        }
    }

    #[test]
    fn an_unplaceable_extra_copy_is_unsatisfiable() {
        let sig = Signature::declare(
            vec![Symbol::ordered("f", 2)],
            vec![Symbol::leaf("a"), Symbol::leaf("b")],
            SignatureOptions { max_parents: 1, ..SignatureOptions::default() },
        )
        .unwrap();
        let system = ConstraintSystem::build(sig, Widths::uniform(2), 2, 13).unwrap();
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let b = g.leaf(Symbol::leaf("b"));
        g.add_node(Symbol::ordered("f", 2), vec![a, b]);
        let mut v = encode(&system, &g).unwrap();
        let a_id = system.symbol_id(&Symbol::leaf("a")).unwrap();
        v.increment(a_id.0 as usize);
        match decode(&system, &v) {
            Err(Error::Unsat) => {}
            other => panic!("expected unsat, got {other:?}"),
        }
    }

    #[test]
    fn decode_all_dedups_and_verifies() {
        let system = small_system(false, 2, 2, 55);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        let gg = g.add_node(Symbol::ordered("g", 1), vec![a]);
        g.add_node(Symbol::ordered("p", 1), vec![gg]);
        let v = encode(&system, &g).unwrap();
        let graphs =
            decode_all(&system, &v, &DecodeOptions::default(), &SplrBackend, 4).unwrap();
        assert!(!graphs.is_empty());
        let mut texts: Vec<String> =
            graphs.iter().map(|d| d.canonical_text().unwrap()).collect();
        let before = texts.len();
        texts.sort();
        texts.dedup();
        assert_eq!(texts.len(), before);
        for d in &graphs {
            assert_eq!(encode(&system, d).unwrap(), v);
        }
    }

    #[test]
    fn dump_writes_formula_and_variable_map() {
        let system = small_system(false, 2, 1, 2);
        let mut g = Graph::new();
        let a = g.leaf(Symbol::leaf("a"));
        g.add_node(Symbol::ordered("p", 1), vec![a]);
        let v = encode(&system, &g).unwrap();
        let dir = std::env::temp_dir().join(format!("satvec-dump-{}", std::process::id()));
        let options = DecodeOptions { dump: Some(dir.clone()), ..DecodeOptions::default() };
        decode_with(&system, &v, &options, &SplrBackend).unwrap();
        let cnf = std::fs::read_to_string(dir.join("formula.cnf")).unwrap();
        assert!(cnf.starts_with("p cnf "));
        let map = std::fs::read_to_string(dir.join("variables.txt")).unwrap();
        assert!(map.lines().count() >= 2);
        let _ = std::fs::remove_dir_all(&dir);
    }
}
