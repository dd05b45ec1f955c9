//! Rooted directed acyclic graphs over signature symbols.
//!
//! Nodes are indexed densely; each node carries a symbol and an ordered
//! argument list (the order is ignored for unordered symbols). Trees,
//! forests, and shared-subterm DAGs are all just graphs here. Construction
//! is unchecked; [`Graph::validate`] reports every structural violation
//! against a signature.

use crate::error::Error;
use crate::signature::Signature;
use crate::symbol::{ArgOrder, Symbol};
use crate::Result;
use std::collections::HashMap;
use std::fmt;

/// One structural defect found by validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Cycle { node: usize },
    ArityMismatch { node: usize, symbol: String, expected: u32, got: usize },
    TooManyParents { node: usize, got: u32, max: u32 },
    NotRootCapable { node: usize, symbol: String },
    NotChildCapable { node: usize, symbol: String },
    UnknownSymbol { node: usize, symbol: String },
}

impl Violation {
    /// Renders a violation list for error messages.
    #[must_use]
    pub fn join(violations: &[Violation]) -> String {
        violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { node } => write!(f, "node {node} lies on a cycle"),
            Violation::ArityMismatch { node, symbol, expected, got } => {
                write!(f, "node {node} ({symbol}) expects {expected} arguments, has {got}")
            }
            Violation::TooManyParents { node, got, max } => {
                write!(f, "node {node} has {got} parents, limit {max}")
            }
            Violation::NotRootCapable { node, symbol } => {
                write!(f, "node {node} ({symbol}) has no parents but is not root-capable")
            }
            Violation::NotChildCapable { node, symbol } => {
                write!(f, "node {node} ({symbol}) has parents but is not an internal symbol")
            }
            Violation::UnknownSymbol { node, symbol } => {
                write!(f, "node {node}: symbol {symbol} is not in the signature")
            }
        }
    }
}

/// A rooted DAG. Structure is a plain adjacency list; multiple roots and
/// shared children are allowed, self-reference is caught by validation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    nodes: Vec<Symbol>,
    args: Vec<Vec<usize>>,
}

impl Graph {
    #[must_use]
    pub fn new() -> Graph {
        Graph::default()
    }

    /// Builds from parallel node and argument lists. Panics if the lists
    /// disagree in length or an argument index is out of range; cycles and
    /// other semantic defects are left for `validate`.
    #[must_use]
    pub fn from_parts(nodes: Vec<Symbol>, args: Vec<Vec<usize>>) -> Graph {
        assert_eq!(nodes.len(), args.len(), "node and argument lists must align");
        let n = nodes.len();
        for list in &args {
            for &a in list {
                assert!(a < n, "argument index {a} out of range for {n} nodes");
            }
        }
        Graph { nodes, args }
    }

    /// Appends a node whose arguments must already exist, which makes
    /// bottom-up construction cycle-free by shape. Returns the new node id.
    pub fn add_node(&mut self, symbol: Symbol, args: Vec<usize>) -> usize {
        let id = self.nodes.len();
        for &a in &args {
            assert!(a < id, "argument index {a} must refer to an existing node");
        }
        self.nodes.push(symbol);
        self.args.push(args);
        id
    }

    /// Appends a leaf node.
    pub fn leaf(&mut self, symbol: Symbol) -> usize {
        self.add_node(symbol, Vec::new())
    }

    #[must_use]
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[must_use]
    pub fn symbol(&self, id: usize) -> &Symbol {
        &self.nodes[id]
    }

    #[must_use]
    pub fn args(&self, id: usize) -> &[usize] {
        &self.args[id]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.nodes.iter()
    }

    #[must_use]
    pub fn in_degrees(&self) -> Vec<u32> {
        let mut degrees = vec![0u32; self.nodes.len()];
        for list in &self.args {
            for &a in list {
                degrees[a] += 1;
            }
        }
        degrees
    }

    /// Node ids with no parents, in index order.
    #[must_use]
    pub fn roots(&self) -> Vec<usize> {
        self.in_degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(id, _)| id)
            .collect()
    }

    /// Parent edges per node as (parent id, 1-based argument position).
    #[must_use]
    pub fn parent_edges(&self) -> Vec<Vec<(usize, u32)>> {
        let mut edges = vec![Vec::new(); self.nodes.len()];
        for (parent, list) in self.args.iter().enumerate() {
            for (i, &child) in list.iter().enumerate() {
                edges[child].push((parent, i as u32 + 1));
            }
        }
        edges
    }

    /// Parents-first order, or None when the graph has a cycle.
    #[must_use]
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let mut degrees = self.in_degrees();
        let mut queue: Vec<usize> =
            degrees.iter().enumerate().filter(|(_, &d)| d == 0).map(|(id, _)| id).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut head = 0;
        while head < queue.len() {
            let id = queue[head];
            head += 1;
            order.push(id);
            for &child in &self.args[id] {
                degrees[child] -= 1;
                if degrees[child] == 0 {
                    queue.push(child);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    /// Copies the graph with each symbol replaced; structure is untouched.
    #[must_use]
    pub fn map_symbols(&self, mut f: impl FnMut(usize, &Symbol) -> Symbol) -> Graph {
        let nodes = self.nodes.iter().enumerate().map(|(id, sym)| f(id, sym)).collect();
        Graph { nodes, args: self.args.clone() }
    }

    /// Checks structure against a signature and returns every violation.
    #[must_use]
    pub fn validate(&self, sig: &Signature) -> Vec<Violation> {
        let mut violations = Vec::new();
        let degrees = self.in_degrees();
        for (id, sym) in self.nodes.iter().enumerate() {
            if !sig.contains(sym) {
                violations.push(Violation::UnknownSymbol { node: id, symbol: sym.to_string() });
                continue;
            }
            if self.args[id].len() != sym.arity as usize {
                violations.push(Violation::ArityMismatch {
                    node: id,
                    symbol: sym.to_string(),
                    expected: sym.arity,
                    got: self.args[id].len(),
                });
            }
            if degrees[id] == 0 {
                if !sig.is_root(sym) {
                    violations
                        .push(Violation::NotRootCapable { node: id, symbol: sym.to_string() });
                }
            } else {
                if !sig.is_internal(sym) {
                    violations
                        .push(Violation::NotChildCapable { node: id, symbol: sym.to_string() });
                }
                if degrees[id] > sig.max_parents {
                    violations.push(Violation::TooManyParents {
                        node: id,
                        got: degrees[id],
                        max: sig.max_parents,
                    });
                }
            }
        }
        if let Some(id) = self.find_cycle_node() {
            violations.push(Violation::Cycle { node: id });
        }
        violations
    }

    /// `validate` as a Result.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        let violations = self.validate(sig);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(violations))
        }
    }

    fn find_cycle_node(&self) -> Option<usize> {
        match self.topo_order() {
            Some(_) => None,
            None => {
                let mut degrees = self.in_degrees();
                let mut queue: Vec<usize> = degrees
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d == 0)
                    .map(|(id, _)| id)
                    .collect();
                let mut head = 0;
                let mut removed = vec![false; self.nodes.len()];
                while head < queue.len() {
                    let id = queue[head];
                    head += 1;
                    removed[id] = true;
                    for &child in &self.args[id] {
                        degrees[child] -= 1;
                        if degrees[child] == 0 {
                            queue.push(child);
                        }
                    }
                }
                (0..self.nodes.len()).find(|&id| !removed[id])
            }
        }
    }

    /// Deterministic text form: each root subtree rendered functionally,
    /// unordered arguments sorted by their rendered text, root renderings
    /// sorted and joined with `"; "`. Shared nodes print once per occurrence,
    /// so two graphs are rendered equal exactly when their unfoldings agree.
    /// Errors on cyclic graphs.
    pub fn canonical_text(&self) -> Result<String> {
        if self.topo_order().is_none() {
            let node = self.find_cycle_node().unwrap_or(0);
            return Err(Error::InvalidGraph(vec![Violation::Cycle { node }]));
        }
        let mut memo: HashMap<usize, String> = HashMap::new();
        let mut rendered: Vec<String> =
            self.roots().into_iter().map(|r| self.render(r, &mut memo)).collect();
        rendered.sort();
        Ok(rendered.join("; "))
    }

    fn render(&self, id: usize, memo: &mut HashMap<usize, String>) -> String {
        if let Some(done) = memo.get(&id) {
            return done.clone();
        }
        let sym = &self.nodes[id];
        let text = if self.args[id].is_empty() {
            sym.to_string()
        } else {
            let mut parts: Vec<String> =
                self.args[id].iter().map(|&a| self.render(a, memo)).collect();
            if sym.arg_order == ArgOrder::Unordered {
                parts.sort();
            }
            format!("{sym}({})", parts.join(","))
        };
        memo.insert(id, text.clone());
        text
    }
}
