//! Signature declaration: the finite symbol universe constraints are built
//! over.
//!
//! A signature separates root-capable symbols (may begin a graph, never have
//! parents) from internal symbols (everything else). The two sets may
//! overlap. Placeholder pools and a sequence declaration materialize their
//! symbols eagerly at declaration time, so constraint generation never
//! depends on the corpus. When masks are enabled the effective universe also
//! contains every masked variant an input node could receive.

mod masks;
mod text;

pub use masks::{apply_masks, strip_masks};

use crate::error::Error;
use crate::symbol::{ArgOrder, Mask, Symbol, SymbolKind};
use crate::Result;
use std::collections::{HashMap, HashSet};

/// Which mask components are in force and their bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaskConfig {
    pub depth: bool,
    pub arg_number: bool,
    /// Largest depth a masked node may have. Inputs deeper than this are
    /// rejected, never truncated, because the symbol universe is fixed up
    /// front.
    pub max_depth: u32,
    /// Argument-number masks skip negation nodes and tag the negation's
    /// argument with the negation's own position instead.
    pub negation_bypass: bool,
}

impl Default for MaskConfig {
    fn default() -> Self {
        MaskConfig { depth: false, arg_number: false, max_depth: 12, negation_bypass: false }
    }
}

impl MaskConfig {
    #[must_use]
    pub fn enabled(&self) -> bool {
        self.depth || self.arg_number
    }
}

/// Whether pool placeholders are root-capable, internal, or both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoolKind {
    Root,
    Internal,
    Both,
}

/// A placeholder pool declaration: `count` symbols named `name_1 … name_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoolDecl {
    pub name: String,
    pub kind: PoolKind,
    pub arity: u32,
    pub arg_order: ArgOrder,
    pub count: u32,
}

/// Sequence support: `length` position symbols of arity `slots + 1`, a slot
/// vocabulary of `vocab` leaf placeholders (the end-of-sequence token counts
/// toward `vocab`), and the chain layout those positions impose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceDecl {
    pub length: u32,
    pub slots: u32,
    /// Slot vocabulary size, counting the end token.
    pub vocab: u32,
}

impl SequenceDecl {
    pub const POSITION_PREFIX: &'static str = "pos";
    pub const WORD_PREFIX: &'static str = "w";
    pub const EOS_LABEL: &'static str = "eos";

    #[must_use]
    pub fn position_symbol(&self, index: u32) -> Symbol {
        Symbol::ordered(format!("{}_{index}", Self::POSITION_PREFIX), self.slots + 1)
    }

    #[must_use]
    pub fn eos_symbol(&self) -> Symbol {
        Symbol::leaf(Self::EOS_LABEL)
    }

    /// The slot vocabulary placeholders, excluding the end token.
    #[must_use]
    pub fn word_symbols(&self) -> Vec<Symbol> {
        (1..self.vocab).map(|i| Symbol::leaf(format!("{}_{i}", Self::WORD_PREFIX))).collect()
    }
}

/// Declaration-time options.
#[derive(Clone, Debug)]
pub struct SignatureOptions {
    pub max_parents: u32,
    pub masks: MaskConfig,
    /// Label of the arity-1 negation symbol, if the domain has one.
    pub negation: Option<String>,
    /// Give the negation symbol its own cell in every partition.
    pub isolate_negation: bool,
    /// Generate parent constraints. Defaults to true; sequence signatures
    /// default to false (their chain layout carries the parent information).
    pub parent_constraints: Option<bool>,
    pub pools: Vec<PoolDecl>,
    pub sequence: Option<SequenceDecl>,
}

impl Default for SignatureOptions {
    fn default() -> Self {
        SignatureOptions {
            max_parents: 5,
            masks: MaskConfig::default(),
            negation: None,
            isolate_negation: false,
            parent_constraints: None,
            pools: Vec::new(),
            sequence: None,
        }
    }
}

/// The declared symbol universe plus everything derived from it.
#[derive(Clone, Debug)]
pub struct Signature {
    declared_roots: Vec<Symbol>,
    declared_internals: Vec<Symbol>,
    roots: Vec<Symbol>,
    internals: Vec<Symbol>,
    root_set: HashSet<Symbol>,
    internal_set: HashSet<Symbol>,
    universe: Vec<Symbol>,
    mask_variant_count: usize,
    pub max_parents: u32,
    pub masks: MaskConfig,
    pub negation: Option<String>,
    pub isolate_negation: bool,
    parent_constraints: bool,
    pools: Vec<PoolDecl>,
    pub sequence: Option<SequenceDecl>,
}

impl Signature {
    /// Validates and materializes a signature.
    ///
    /// Pool and sequence symbols are appended to the declared sets; mask
    /// variants extend the universe. Errors on duplicate declarations,
    /// conflicting argument order for one (label, arity), unordered arity-0
    /// symbols, and masked input symbols.
    pub fn declare(
        roots: Vec<Symbol>,
        internals: Vec<Symbol>,
        options: SignatureOptions,
    ) -> Result<Signature> {
        if options.max_parents == 0 {
            return Err(Error::InvalidSignature("max-parents must be at least 1".into()));
        }
        if options.sequence.is_some() && options.masks.enabled() {
            return Err(Error::Unsupported(
                "masks and sequence positions cannot be combined".into(),
            ));
        }

        let given_roots = roots.clone();
        let given_internals = internals.clone();
        let mut declared_roots = roots;
        let mut declared_internals = internals;

        for pool in &options.pools {
            if pool.arity == 0 && pool.arg_order == ArgOrder::Unordered {
                return Err(Error::InvalidSignature(format!(
                    "pool {}: arity-0 symbols cannot be unordered",
                    pool.name
                )));
            }
            for i in 1..=pool.count {
                let sym = Symbol {
                    label: format!("{}_{i}", pool.name),
                    arity: pool.arity,
                    arg_order: pool.arg_order,
                    mask: Mask::NONE,
                };
                match pool.kind {
                    PoolKind::Root => declared_roots.push(sym),
                    PoolKind::Internal => declared_internals.push(sym),
                    PoolKind::Both => {
                        declared_roots.push(sym.clone());
                        declared_internals.push(sym);
                    }
                }
            }
        }

        if let Some(seq) = &options.sequence {
            if seq.length == 0 || seq.slots == 0 || seq.vocab < 2 {
                return Err(Error::InvalidSignature(
                    "sequence needs length >= 1, slots >= 1, vocab >= 2".into(),
                ));
            }
            declared_roots.push(seq.position_symbol(1));
            for j in 2..=seq.length {
                declared_internals.push(seq.position_symbol(j));
            }
            declared_internals.extend(seq.word_symbols());
            // The end token both terminates chains and stands alone as the
            // empty sequence, so it must be root-capable.
            declared_roots.push(seq.eos_symbol());
            declared_internals.push(seq.eos_symbol());
        }

        let mut arg_orders: HashMap<(String, u32), ArgOrder> = HashMap::new();
        let mut check = |sym: &Symbol, kind: SymbolKind, seen: &mut HashSet<Symbol>| {
            if sym.label.is_empty() {
                return Err(Error::InvalidSignature("empty label".into()));
            }
            if sym.is_masked() {
                return Err(Error::InvalidSignature(format!(
                    "{sym}: masked symbols cannot be declared directly"
                )));
            }
            if sym.arity == 0 && sym.arg_order == ArgOrder::Unordered {
                return Err(Error::InvalidSignature(format!(
                    "{sym}: arity-0 symbols cannot be unordered"
                )));
            }
            if !seen.insert(sym.clone()) {
                return Err(Error::DuplicateSymbol {
                    kind,
                    label: sym.label.clone(),
                    arity: sym.arity,
                });
            }
            let key = (sym.label.clone(), sym.arity);
            if let Some(prev) = arg_orders.insert(key, sym.arg_order) {
                if prev != sym.arg_order {
                    return Err(Error::ConflictingArgOrder {
                        label: sym.label.clone(),
                        arity: sym.arity,
                    });
                }
            }
            Ok(())
        };

        let mut root_set = HashSet::new();
        for sym in &declared_roots {
            check(sym, SymbolKind::Root, &mut root_set)?;
        }
        let mut internal_set = HashSet::new();
        for sym in &declared_internals {
            check(sym, SymbolKind::Internal, &mut internal_set)?;
        }

        if let Some(neg) = &options.negation {
            let is_negation_shape =
                |s: &Symbol| s.label == *neg && s.arity == 1 && s.arg_order == ArgOrder::Ordered;
            if !declared_internals.iter().any(is_negation_shape)
                && !declared_roots.iter().any(is_negation_shape)
            {
                return Err(Error::InvalidSignature(format!(
                    "negation symbol {neg}/1 is not declared"
                )));
            }
        }

        let parent_constraints =
            options.parent_constraints.unwrap_or(options.sequence.is_none());

        let mut sig = Signature {
            declared_roots: given_roots,
            declared_internals: given_internals,
            roots: declared_roots,
            internals: declared_internals,
            root_set,
            internal_set,
            universe: Vec::new(),
            mask_variant_count: 0,
            max_parents: options.max_parents,
            masks: options.masks,
            negation: options.negation,
            isolate_negation: options.isolate_negation,
            parent_constraints,
            pools: options.pools,
            sequence: options.sequence,
        };
        sig.extend_with_mask_variants();
        sig.rebuild_universe();
        Ok(sig)
    }

    /// Appends every masked variant a non-leaf internal node could receive.
    ///
    /// Depth values run 1..=max_depth (internal nodes always sit below a
    /// root). Argument positions run over 1..=P where P is the largest arity
    /// of any ordered parent-capable symbol; position-free depth variants
    /// cover children of unordered parents.
    fn extend_with_mask_variants(&mut self) {
        if !self.masks.enabled() {
            return;
        }
        let max_pos = self
            .roots
            .iter()
            .chain(&self.internals)
            .filter(|s| s.arg_order == ArgOrder::Ordered && s.arity >= 1)
            .map(|s| s.arity)
            .max()
            .unwrap_or(0);
        let depths: Vec<Option<u32>> = if self.masks.depth {
            (1..=self.masks.max_depth).map(Some).collect()
        } else {
            vec![None]
        };
        let positions: Vec<Option<u32>> = if self.masks.arg_number {
            let mut p: Vec<Option<u32>> = (1..=max_pos).map(Some).collect();
            if self.masks.depth {
                // Children of unordered parents carry a depth but no position.
                p.insert(0, None);
            }
            p
        } else {
            vec![None]
        };

        let bases: Vec<Symbol> =
            self.internals.iter().filter(|s| s.arity >= 1).cloned().collect();
        let mut variants = Vec::new();
        for base in bases {
            for &depth in &depths {
                for &arg_position in &positions {
                    let mask = Mask { depth, arg_position };
                    if mask.is_none() {
                        continue;
                    }
                    variants.push(base.with_mask(mask));
                }
            }
        }
        self.mask_variant_count = variants.len();
        for v in variants {
            self.internal_set.insert(v.clone());
            self.internals.push(v);
        }
    }

    fn rebuild_universe(&mut self) {
        let mut seen = HashSet::new();
        let mut universe = Vec::new();
        for sym in self.roots.iter().chain(&self.internals) {
            if seen.insert(sym.clone()) {
                universe.push(sym.clone());
            }
        }
        self.universe = universe;
    }

    /// Every symbol, in canonical index order: roots first, then internals
    /// not already listed, then mask variants.
    #[must_use]
    pub fn universe(&self) -> &[Symbol] {
        &self.universe
    }

    /// Number of mask variants the universe gained beyond the base symbols.
    #[must_use]
    pub fn mask_variant_count(&self) -> usize {
        self.mask_variant_count
    }

    /// Root-capable symbols in declaration order (pool and sequence symbols
    /// included, mask variants never).
    #[must_use]
    pub fn roots(&self) -> &[Symbol] {
        &self.roots[..]
    }

    /// Internal symbols in declaration order, mask variants at the end.
    #[must_use]
    pub fn internals(&self) -> &[Symbol] {
        &self.internals[..]
    }

    #[must_use]
    pub fn is_root(&self, sym: &Symbol) -> bool {
        self.root_set.contains(sym)
    }

    #[must_use]
    pub fn is_internal(&self, sym: &Symbol) -> bool {
        self.internal_set.contains(sym)
    }

    #[must_use]
    pub fn contains(&self, sym: &Symbol) -> bool {
        self.is_root(sym) || self.is_internal(sym)
    }

    #[must_use]
    pub fn parent_constraints_enabled(&self) -> bool {
        self.parent_constraints
    }

    #[must_use]
    pub fn pools(&self) -> &[PoolDecl] {
        &self.pools
    }

    /// The symbol sets as given to `declare`, before pool, sequence, and
    /// mask expansion; the text serialization renders these.
    #[must_use]
    pub(crate) fn declared(&self) -> (&[Symbol], &[Symbol]) {
        (&self.declared_roots, &self.declared_internals)
    }

    #[must_use]
    pub fn is_negation(&self, sym: &Symbol) -> bool {
        match &self.negation {
            Some(neg) => sym.base().label == *neg && sym.arity == 1,
            None => false,
        }
    }

    /// True for the symbols a sequence declaration introduced for chain
    /// positions; they are matched by sequence constraints, not by the plain
    /// ordered family.
    #[must_use]
    pub fn is_sequence_position(&self, sym: &Symbol) -> bool {
        let Some(seq) = &self.sequence else { return false };
        sym.arity == seq.slots + 1
            && sym.mask.is_none()
            && sym
                .label
                .strip_prefix(SequenceDecl::POSITION_PREFIX)
                .and_then(|rest| rest.strip_prefix('_'))
                .is_some_and(|n| n.parse::<u32>().map_or(false, |i| i >= 1 && i <= seq.length))
    }

    /// Parses the position index out of a sequence position symbol.
    #[must_use]
    pub fn sequence_position_index(&self, sym: &Symbol) -> Option<u32> {
        if !self.is_sequence_position(sym) {
            return None;
        }
        sym.label.rsplit('_').next()?.parse().ok()
    }

    /// Serializes to the line-oriented text form. `parse_text` inverts this.
    #[must_use]
    pub fn to_text(&self) -> String {
        text::render(self)
    }

    /// Parses the text form produced by [`Signature::to_text`].
    pub fn parse_text(input: &str) -> Result<Signature> {
        text::parse(input)
    }
}
