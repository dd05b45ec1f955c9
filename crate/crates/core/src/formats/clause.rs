//! First-order CNF clauses as graphs.
//!
//! The reader accepts one clause per call in a TPTP-flavored syntax:
//! literals joined by `|`, terms in prefix notation, uppercase identifiers
//! as variables, `~` for negation, infix `=` and `!=`, `%` comments, and an
//! optional `cnf(name, role, …).` wrapper. Quantifiers, quoted atoms, and
//! `$`-words are rejected. A clause becomes a graph with one node per
//! symbol occurrence, except that occurrences of the same variable share
//! one leaf node. Disjunction (`or`), equality (`eq`), and inequality
//! (`neq`) are unordered nodes; everything else is ordered. A negated
//! equality folds into `neq` at parse time.
//!
//! Clause graphs carry their source labels. Before encoding they are
//! normalized (variables renamed to the `V_i` placeholders) and bound (all
//! other labels assigned to `s_i` placeholders through a [`Binder`]).

use std::collections::HashMap;

use crate::binding::Binder;
use crate::error::Error;
use crate::Result;
use crate::graph::Graph;
use crate::signature::{MaskConfig, PoolDecl, PoolKind, Signature, SignatureOptions};
use crate::symbol::{ArgOrder, Symbol};

pub const OR: &str = "or";
pub const EQ: &str = "eq";
pub const NEQ: &str = "neq";
pub const NOT: &str = "not";

/// The placeholder pool for bound clause symbols.
pub const SYMBOL_POOL: &str = "s";
/// The placeholder pool for normalized variables.
pub const VARIABLE_POOL: &str = "V";

/// Structural limits a clause must respect to be representable.
#[derive(Clone, Copy, Debug)]
pub struct ClauseCaps {
    /// Largest arity of ordered nodes (predicates, functions).
    pub ordered_arity: u32,
    /// Largest arity of unordered nodes, which caps the literal count.
    pub unordered_arity: u32,
    /// Largest number of parents a shared node may have.
    pub max_parents: u32,
}

impl Default for ClauseCaps {
    fn default() -> Self {
        ClauseCaps { ordered_arity: 3, unordered_arity: 5, max_parents: 5 }
    }
}

/// Pool sizes and options for a clause constraint system's signature.
#[derive(Clone, Debug)]
pub struct ClauseSignatureSpec {
    /// Placeholders for arity-0 ordered symbols (constants, atoms).
    pub constants: u32,
    /// Placeholders for arity-1 ordered symbols.
    pub unary: u32,
    /// Placeholders for arity-2 ordered symbols.
    pub binary: u32,
    /// Placeholders for arity-3 ordered symbols.
    pub ternary: u32,
    /// Variable placeholders `V_1 … V_n`.
    pub variables: u32,
    pub caps: ClauseCaps,
    /// Apply argument number masks, bypassing negation nodes.
    pub masks: bool,
}

impl Default for ClauseSignatureSpec {
    fn default() -> Self {
        ClauseSignatureSpec {
            constants: 10,
            unary: 8,
            binary: 6,
            ternary: 4,
            variables: 6,
            caps: ClauseCaps::default(),
            masks: true,
        }
    }
}

/// Declares the placeholder signature for clause corpora: disjunctions of
/// 2 to `unordered_arity` literals as roots, equality, inequality, and an
/// isolated negation on both sides, plus symbol and variable pools.
pub fn clause_signature(spec: &ClauseSignatureSpec) -> Result<Signature> {
    let caps = &spec.caps;
    if caps.unordered_arity < 2 {
        return Err(Error::InvalidSignature("the literal cap must be at least 2".into()));
    }
    let mut roots: Vec<Symbol> =
        (2..=caps.unordered_arity).map(|k| Symbol::unordered(OR, k)).collect();
    let mut internals = Vec::new();
    for sym in [Symbol::unordered(EQ, 2), Symbol::unordered(NEQ, 2), Symbol::ordered(NOT, 1)] {
        roots.push(sym.clone());
        internals.push(sym);
    }
    let mut pools = Vec::new();
    for (arity, count) in
        [(0, spec.constants), (1, spec.unary), (2, spec.binary), (3, spec.ternary)]
    {
        if count == 0 {
            continue;
        }
        if arity > caps.ordered_arity {
            return Err(Error::InvalidSignature(format!(
                "arity-{arity} pool declared over the ordered cap {}",
                caps.ordered_arity
            )));
        }
        pools.push(PoolDecl {
            name: SYMBOL_POOL.into(),
            kind: PoolKind::Both,
            arity,
            arg_order: ArgOrder::Ordered,
            count,
        });
    }
    if spec.variables > 0 {
        pools.push(PoolDecl {
            name: VARIABLE_POOL.into(),
            kind: PoolKind::Internal,
            arity: 0,
            arg_order: ArgOrder::Ordered,
            count: spec.variables,
        });
    }
    let masks = if spec.masks {
        MaskConfig { arg_number: true, negation_bypass: true, ..MaskConfig::default() }
    } else {
        MaskConfig::default()
    };
    Signature::declare(
        roots,
        internals,
        SignatureOptions {
            max_parents: caps.max_parents,
            masks,
            negation: Some(NOT.into()),
            isolate_negation: true,
            pools,
            ..SignatureOptions::default()
        },
    )
}

fn is_variable_label(label: &str) -> bool {
    label.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

fn is_placeholder_variable(label: &str) -> bool {
    label
        .strip_prefix("V_")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Pipe,
    Tilde,
    Eq,
    Neq,
    Dot,
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<(Vec<Spanned>, (usize, usize))> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    let err = |line: usize, col: usize, message: String| Error::Parse { line, column: col, message };
    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        if c == '%' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                advance(&mut chars);
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut ident = String::new();
            while chars.peek().is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_') {
                ident.push(advance(&mut chars));
            }
            toks.push(Spanned { tok: Tok::Ident(ident), line: start_line, col: start_col });
            continue;
        }
        advance(&mut chars);
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '|' => Tok::Pipe,
            '~' => Tok::Tilde,
            '=' => Tok::Eq,
            '.' => Tok::Dot,
            '!' => {
                if chars.peek() == Some(&'=') {
                    advance(&mut chars);
                    Tok::Neq
                } else {
                    return Err(err(start_line, start_col, "expected = after !".into()));
                }
            }
            '$' | '\'' => {
                return Err(err(
                    start_line,
                    start_col,
                    "system tokens and quoted atoms are not supported".into(),
                ))
            }
            other => return Err(err(start_line, start_col, format!("unexpected character {other:?}"))),
        };
        toks.push(Spanned { tok, line: start_line, col: start_col });
    }
    Ok((toks, (line, col)))
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    caps: &'a ClauseCaps,
    g: Graph,
    vars: HashMap<String, (usize, usize, usize)>,
}

enum Atom {
    Term(usize),
    Eq(usize, usize),
    Neq(usize, usize),
}

impl<'a> Parser<'a> {
    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.col))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Parse { line, column, message: message.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        if let Some(Spanned { tok: Tok::Ident(name), .. }) = self.toks.get(self.pos) {
            let name = name.clone();
            self.pos += 1;
            return Ok(name);
        }
        self.fail(format!("expected {what}"))
    }

    fn input(&mut self) -> Result<usize> {
        let wrapped = matches!(self.peek(), Some(Tok::Ident(name)) if name == "cnf")
            && matches!(self.toks.get(self.pos + 1), Some(Spanned { tok: Tok::LParen, .. }));
        let root = if wrapped {
            self.pos += 1;
            self.expect(Tok::LParen, "( after cnf")?;
            self.ident("a clause name")?;
            self.expect(Tok::Comma, ", after the clause name")?;
            self.ident("a formula role")?;
            self.expect(Tok::Comma, ", after the formula role")?;
            let parenthesized = self.eat(&Tok::LParen);
            let root = self.disjunction()?;
            if parenthesized {
                self.expect(Tok::RParen, ") closing the clause")?;
            }
            self.expect(Tok::RParen, ") closing cnf(")?;
            self.expect(Tok::Dot, ". after cnf(…)")?;
            root
        } else {
            if matches!(self.peek(), Some(Tok::Ident(name)) if name == "fof" || name == "tff")
                && matches!(self.toks.get(self.pos + 1), Some(Spanned { tok: Tok::LParen, .. }))
            {
                return self.fail("only cnf clauses are supported");
            }
            self.disjunction()?
        };
        if self.pos != self.toks.len() {
            return self.fail("trailing input after the clause");
        }
        Ok(root)
    }

    fn disjunction(&mut self) -> Result<usize> {
        let mut literals = vec![self.literal()?];
        while self.eat(&Tok::Pipe) {
            if literals.len() == self.caps.unordered_arity as usize {
                return self.fail(format!(
                    "more than {} literals, over the unordered cap",
                    self.caps.unordered_arity
                ));
            }
            literals.push(self.literal()?);
        }
        Ok(match literals[..] {
            [single] => single,
            _ => {
                let or = Symbol::unordered(OR, literals.len() as u32);
                self.g.add_node(or, literals)
            }
        })
    }

    /// One literal. A negated equality `~ s = t` folds into `s != t`; a
    /// negated inequality has no clause form and is rejected.
    fn literal(&mut self) -> Result<usize> {
        if matches!(self.peek(), Some(Tok::Tilde)) {
            let (tilde_line, tilde_col) = self.here();
            self.pos += 1;
            let parenthesized = self.eat(&Tok::LParen);
            let atom = self.atom()?;
            if parenthesized {
                self.expect(Tok::RParen, ") closing the negated atom")?;
            }
            return match atom {
                Atom::Term(node) => {
                    self.check_literal_shape(node)?;
                    Ok(self.g.add_node(Symbol::ordered(NOT, 1), vec![node]))
                }
                Atom::Eq(lhs, rhs) => {
                    Ok(self.g.add_node(Symbol::unordered(NEQ, 2), vec![lhs, rhs]))
                }
                Atom::Neq(..) => Err(Error::Parse {
                    line: tilde_line,
                    column: tilde_col,
                    message: "a negated inequality is not a literal".into(),
                }),
            };
        }
        match self.atom()? {
            Atom::Term(node) => {
                self.check_literal_shape(node)?;
                Ok(node)
            }
            Atom::Eq(lhs, rhs) => Ok(self.g.add_node(Symbol::unordered(EQ, 2), vec![lhs, rhs])),
            Atom::Neq(lhs, rhs) => Ok(self.g.add_node(Symbol::unordered(NEQ, 2), vec![lhs, rhs])),
        }
    }

    fn check_literal_shape(&self, node: usize) -> Result<()> {
        let sym = self.g.symbol(node);
        if self.g.args(node).is_empty() && is_variable_label(&sym.label) {
            return self.fail("a variable cannot stand alone as a literal");
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<Atom> {
        let lhs = self.term()?;
        if self.eat(&Tok::Eq) {
            let rhs = self.term()?;
            return Ok(Atom::Eq(lhs, rhs));
        }
        if self.eat(&Tok::Neq) {
            let rhs = self.term()?;
            return Ok(Atom::Neq(lhs, rhs));
        }
        Ok(Atom::Term(lhs))
    }

    fn term(&mut self) -> Result<usize> {
        let (line, col) = self.here();
        let name = self.ident("a term")?;
        if self.eat(&Tok::LParen) {
            if is_variable_label(&name) {
                return self.fail(format!("variable {name} cannot take arguments"));
            }
            let mut args = vec![self.term()?];
            while self.eat(&Tok::Comma) {
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, ") closing the argument list")?;
            if args.len() > self.caps.ordered_arity as usize {
                return Err(Error::Parse {
                    line,
                    column: col,
                    message: format!(
                        "{name} takes {} arguments, over the ordered cap {}",
                        args.len(),
                        self.caps.ordered_arity
                    ),
                });
            }
            return Ok(self.g.add_node(Symbol::ordered(name, args.len() as u32), args));
        }
        if is_variable_label(&name) {
            if let Some(&(node, _, _)) = self.vars.get(&name) {
                return Ok(node);
            }
            let node = self.g.leaf(Symbol::leaf(name.clone()));
            self.vars.insert(name, (node, line, col));
            return Ok(node);
        }
        Ok(self.g.leaf(Symbol::leaf(name)))
    }
}

/// Parses one clause into its graph, sharing variable leaves and enforcing
/// the caps. Errors carry the offending line and column.
pub fn parse_clause(text: &str, caps: &ClauseCaps) -> Result<Graph> {
    let (toks, end) = lex(text)?;
    let mut parser =
        Parser { toks, pos: 0, end, caps, g: Graph::new(), vars: HashMap::new() };
    if parser.toks.is_empty() {
        return parser.fail("empty input");
    }
    parser.input()?;
    let degrees = parser.g.in_degrees();
    for (name, &(node, line, col)) in &parser.vars {
        if degrees[node] > caps.max_parents {
            return Err(Error::Parse {
                line,
                column: col,
                message: format!(
                    "variable {name} has {} parents, over the cap {}",
                    degrees[node], caps.max_parents
                ),
            });
        }
    }
    Ok(parser.g)
}

/// Mode for [`normalize_variables`]: distinct placeholders in occurrence
/// order, or one shared placeholder label for every variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariableMode {
    Distinct,
    Uniform,
}

fn occurrence_order(g: &Graph) -> Vec<usize> {
    let mut order = Vec::new();
    let mut seen = vec![false; g.node_count()];
    let mut stack: Vec<usize> = g.roots();
    stack.reverse();
    while let Some(node) = stack.pop() {
        if seen[node] {
            continue;
        }
        seen[node] = true;
        order.push(node);
        for &child in g.args(node).iter().rev() {
            stack.push(child);
        }
    }
    order
}

/// Renames every variable leaf to a `V_i` placeholder: `V_1, V_2, …` in
/// first-occurrence order when `mode` is `Distinct`, the single label `V_1`
/// when it is `Uniform`. Idempotent, and invariant under consistent
/// renaming of the input variables. At most `n` distinct variables fit.
pub fn normalize_variables(g: &Graph, n: u32, mode: VariableMode) -> Result<Graph> {
    let mut rename: HashMap<usize, Symbol> = HashMap::new();
    let mut next = 0u32;
    for node in occurrence_order(g) {
        let sym = g.symbol(node);
        if !g.args(node).is_empty() || !is_variable_label(&sym.label) {
            continue;
        }
        let ordinal = match mode {
            VariableMode::Uniform => 1,
            VariableMode::Distinct => {
                next += 1;
                next
            }
        };
        if ordinal > n {
            return Err(Error::TooManyVariables { found: ordinal as usize, max: n as usize });
        }
        rename.insert(node, Symbol::leaf(format!("{VARIABLE_POOL}_{ordinal}")));
    }
    Ok(g.map_symbols(|node, sym| rename.get(&node).cloned().unwrap_or_else(|| sym.clone())))
}

/// Rewrites a normalized clause graph onto the signature's placeholders:
/// connectives and `V_i` leaves pass through, every other label is bound in
/// the symbol pool.
pub fn bind_clause(g: &Graph, binder: &mut Binder) -> Result<Graph> {
    let mut mapped = Vec::with_capacity(g.node_count());
    for node in 0..g.node_count() {
        let sym = g.symbol(node);
        let fixed = matches!(sym.label.as_str(), OR | EQ | NEQ | NOT);
        if fixed || is_placeholder_variable(&sym.label) {
            mapped.push(sym.clone());
        } else if is_variable_label(&sym.label) {
            return Err(Error::Unsupported(format!(
                "variable {} is not normalized; normalize before binding",
                sym.label
            )));
        } else {
            mapped.push(binder.bind(SYMBOL_POOL, &sym.label, sym.arity)?);
        }
    }
    let args = (0..g.node_count()).map(|node| g.args(node).to_vec()).collect();
    Ok(Graph::from_parts(mapped, args))
}

fn render_term(g: &Graph, node: usize, out: &mut String) -> Result<()> {
    let sym = g.symbol(node);
    if matches!(sym.label.as_str(), OR | EQ | NEQ | NOT) {
        return Err(Error::Unsupported(format!("{sym} sits in term position")));
    }
    out.push_str(&sym.label);
    let args = g.args(node);
    if let Some((&first, rest)) = args.split_first() {
        out.push('(');
        render_term(g, first, out)?;
        for &arg in rest {
            out.push_str(", ");
            render_term(g, arg, out)?;
        }
        out.push(')');
    }
    Ok(())
}

fn render_atom(g: &Graph, node: usize, out: &mut String) -> Result<()> {
    let sym = g.symbol(node);
    match sym.label.as_str() {
        EQ | NEQ => {
            let [lhs, rhs] = g.args(node)[..] else {
                return Err(Error::Unsupported(format!("{sym} without two arguments")));
            };
            render_term(g, lhs, out)?;
            out.push_str(if sym.label == EQ { " = " } else { " != " });
            render_term(g, rhs, out)
        }
        _ => render_term(g, node, out),
    }
}

fn render_literal(g: &Graph, node: usize, out: &mut String) -> Result<()> {
    let sym = g.symbol(node);
    if sym.label == NOT {
        let [arg] = g.args(node)[..] else {
            return Err(Error::Unsupported("negation without a single argument".into()));
        };
        out.push('~');
        let wrap = matches!(g.symbol(arg).label.as_str(), EQ | NEQ);
        if wrap {
            out.push('(');
        }
        render_atom(g, arg, out)?;
        if wrap {
            out.push(')');
        }
        return Ok(());
    }
    render_atom(g, node, out)
}

/// Renders a clause graph back to clause syntax. Children of unordered
/// nodes print in stored order; use [`Graph::canonical_text`] to compare
/// clauses structurally.
pub fn render_clause(g: &Graph) -> Result<String> {
    let roots = g.roots();
    let [root] = roots[..] else {
        return Err(Error::Unsupported(format!(
            "a clause graph has one root, this graph has {}",
            roots.len()
        )));
    };
    let mut out = String::new();
    if g.symbol(root).label == OR {
        let mut first = true;
        for &literal in g.args(root) {
            if !first {
                out.push_str(" | ");
            }
            first = false;
            render_literal(g, literal, &mut out)?;
        }
    } else {
        render_literal(g, root, &mut out)?;
    }
    Ok(out)
}
