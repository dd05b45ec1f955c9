//! Symbols: the atoms of signatures, graphs, and constraints.
//!
//! Two symbols with the same label but different arities are distinct. A
//! masked variant (same base, extra depth or argument-position tag) is a
//! distinct symbol for every downstream purpose, including vector indexing.

use std::fmt;

/// Whether a symbol's argument positions are significant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ArgOrder {
    Ordered,
    Unordered,
}

/// Which side of the signature a symbol is declared on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SymbolKind {
    /// May begin a graph; never has parents.
    Root,
    /// May appear below a root; never begins a graph.
    Internal,
}

/// Optional label extensions that disambiguate otherwise identical nodes.
///
/// `depth` is the node's distance from its root; `arg_position` is its
/// 1-based index in an ordered parent's argument list. Kept as a tuple, not
/// baked into the label, so stripping is lossless.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mask {
    pub depth: Option<u32>,
    pub arg_position: Option<u32>,
}

impl Mask {
    pub const NONE: Mask = Mask { depth: None, arg_position: None };

    #[must_use]
    pub fn is_none(&self) -> bool {
        self.depth.is_none() && self.arg_position.is_none()
    }
}

/// A node label with arity, argument-order semantics, and an optional mask.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol {
    pub label: String,
    pub arity: u32,
    pub arg_order: ArgOrder,
    pub mask: Mask,
}

impl Symbol {
    pub fn ordered(label: impl Into<String>, arity: u32) -> Symbol {
        Symbol { label: label.into(), arity, arg_order: ArgOrder::Ordered, mask: Mask::NONE }
    }

    pub fn unordered(label: impl Into<String>, arity: u32) -> Symbol {
        Symbol { label: label.into(), arity, arg_order: ArgOrder::Unordered, mask: Mask::NONE }
    }

    /// An arity-0 symbol. Leaves have no arguments, so argument order is
    /// immaterial; they are stored as ordered for a canonical form.
    pub fn leaf(label: impl Into<String>) -> Symbol {
        Symbol::ordered(label, 0)
    }

    #[must_use]
    pub fn with_mask(&self, mask: Mask) -> Symbol {
        Symbol { mask, ..self.clone() }
    }

    /// The same symbol with any mask removed.
    #[must_use]
    pub fn base(&self) -> Symbol {
        Symbol { mask: Mask::NONE, ..self.clone() }
    }

    #[must_use]
    pub fn is_leaf(&self) -> bool {
        self.arity == 0
    }

    #[must_use]
    pub fn is_masked(&self) -> bool {
        !self.mask.is_none()
    }
}

impl fmt::Display for Symbol {
    /// Renders `label`, `label@d2` (depth 2), `label@1` (argument position 1)
    /// or `label@d2@1` (both).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if let Some(d) = self.mask.depth {
            write!(f, "@d{d}")?;
        }
        if let Some(p) = self.mask.arg_position {
            write!(f, "@{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_label_different_arity_is_distinct() {
        assert_ne!(Symbol::ordered("f", 1), Symbol::ordered("f", 2));
    }

    #[test]
    fn mask_changes_identity_and_strips_losslessly() {
        let base = Symbol::ordered("g", 1);
        let masked = base.with_mask(Mask { depth: Some(2), arg_position: Some(1) });
        assert_ne!(base, masked);
        assert_eq!(masked.base(), base);
    }

    #[test]
    fn display_forms() {
        let g = Symbol::ordered("g", 1);
        assert_eq!(g.to_string(), "g");
        assert_eq!(g.with_mask(Mask { depth: Some(2), arg_position: None }).to_string(), "g@d2");
        assert_eq!(g.with_mask(Mask { depth: None, arg_position: Some(3) }).to_string(), "g@3");
        assert_eq!(
            g.with_mask(Mask { depth: Some(1), arg_position: Some(2) }).to_string(),
            "g@d1@2"
        );
    }
}
