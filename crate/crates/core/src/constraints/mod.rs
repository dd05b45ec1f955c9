//! A priori random constraint sets and their frozen vector index layout.
//!
//! A constraint system fixes, before any data is seen, a family of symbol
//! cell patterns: ordered and unordered node constraints, parent constraints,
//! and sequence constraints, replicated in `t` independently randomized
//! parallel sets. Every symbol and every constraint owns one vector index.
//! Constraints are never materialized: each family block stores its splits
//! and a base offset, matching computes indices arithmetically, and decoding
//! recovers a constraint's cells from its offset.
//!
//! The split discipline guarantees that a structurally valid node matches
//! exactly one constraint per applicable family per set: cell membership is
//! a function, lead groups partition symbols of one arity, and unordered
//! argument multisets collapse to a unique non-decreasing cell sequence.

pub mod comb;
mod split;

pub use split::Split;

use crate::error::Error;
use crate::rng;
use crate::signature::Signature;
use crate::symbol::{ArgOrder, Symbol};
use crate::Result;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::collections::HashSet;

/// Index of a symbol in the system's universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

/// Whether a constraint group describes root nodes or internal nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Root,
    Internal,
}

/// Per-family split widths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Widths {
    pub ordered: u32,
    pub unordered: u32,
    /// Width of the child cell split in parent constraints.
    pub child: u32,
    /// Width of the parent cell split in parent constraints.
    pub parent: u32,
    pub sequence: u32,
}

impl Widths {
    #[must_use]
    pub fn uniform(w: u32) -> Widths {
        Widths { ordered: w, unordered: w, child: w, parent: w, sequence: w }
    }

    fn validate(&self) -> Result<()> {
        for w in [self.ordered, self.unordered, self.child, self.parent, self.sequence] {
            if !(1..=254).contains(&w) {
                return Err(Error::Unsupported(format!("split width {w} outside 1..=254")));
            }
        }
        Ok(())
    }
}

/// Ordered node constraints for one (side, arity) symbol group: a lead split
/// of the group and, per lead cell and argument position, a fresh split of
/// the internal symbols. Constraints are lead cell x argument cell tuples in
/// odometer order, first position most significant.
#[derive(Clone, Debug)]
pub struct OrderedGroup {
    pub side: Side,
    pub arity: u32,
    pub lead: Split,
    pub args: Vec<Vec<Split>>,
    pub arg_width: u32,
    pub base: usize,
    pub size: usize,
}

/// Unordered node constraints for one (side, arity) group: a lead split and,
/// per lead cell, one split of the internal symbols whose non-decreasing
/// length-arity cell sequences form the constraints, ranked lexicographically.
#[derive(Clone, Debug)]
pub struct UnorderedGroup {
    pub side: Side,
    pub arity: u32,
    pub lead: Split,
    pub args: Vec<Split>,
    pub arg_width: u32,
    pub seqs: u64,
    pub base: usize,
    pub size: usize,
}

/// Parent constraints for one parent count: a child split of the internal
/// symbols and, per child cell, one split of the parent-capable symbols
/// whose non-decreasing cell sequences describe the parent multiset.
#[derive(Clone, Debug)]
pub struct ParentBlock {
    pub parents: u32,
    pub child: Split,
    pub parent_splits: Vec<Split>,
    pub parent_width: u32,
    pub seqs: u64,
    pub base: usize,
    pub size: usize,
}

/// Sequence constraints for one (position, termination) pair: fresh slot
/// splits over the slot vocabulary; the link is implied by the pair itself.
#[derive(Clone, Debug)]
pub struct SequenceBlock {
    pub position: u32,
    pub terminated: bool,
    pub slots: Vec<Split>,
    pub slot_width: u32,
    pub base: usize,
    pub size: usize,
}

/// One parallel constraint set.
#[derive(Clone, Debug, Default)]
pub struct FamilySet {
    pub ordered: Vec<OrderedGroup>,
    pub unordered: Vec<UnorderedGroup>,
    pub parent: Vec<ParentBlock>,
    pub sequence: Vec<SequenceBlock>,
}

/// A decoded view of one constraint, borrowed from its set.
#[derive(Debug)]
pub enum ConstraintRef<'a> {
    Ordered { group: &'a OrderedGroup, lead_cell: u8, arg_cells: Vec<u8> },
    Unordered { group: &'a UnorderedGroup, lead_cell: u8, arg_cells: Vec<u8> },
    Parent { block: &'a ParentBlock, child_cell: u8, parent_cells: Vec<u8> },
    Sequence { block: &'a SequenceBlock, slot_cells: Vec<u8> },
}

/// Where an absolute vector index points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Symbol(SymbolId),
    Constraint { set: usize, offset: usize },
}

/// Closed-form constraint counts per family for one parallel set, valid when
/// every split reaches its configured width and negation isolation is off.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FamilyCounts {
    pub ordered: u64,
    pub unordered: u64,
    pub parent: u64,
    pub sequence: u64,
}

impl FamilyCounts {
    #[must_use]
    pub fn total(&self) -> u64 {
        self.ordered + self.unordered + self.parent + self.sequence
    }
}

/// The closed-form per-set counts implied by a signature and widths.
#[must_use]
pub fn expected_counts(sig: &Signature, widths: &Widths) -> FamilyCounts {
    let mut counts = FamilyCounts::default();
    let group_arities = |side: Side, order: ArgOrder| -> Vec<u32> {
        let symbols = match side {
            Side::Root => sig.roots(),
            Side::Internal => sig.internals(),
        };
        let mut arities: Vec<u32> = symbols
            .iter()
            .filter(|s| s.arg_order == order && s.arity >= 1 && !sig.is_sequence_position(s))
            .map(|s| s.arity)
            .collect();
        arities.sort_unstable();
        arities.dedup();
        arities
    };
    for side in [Side::Root, Side::Internal] {
        let w = u64::from(widths.ordered);
        for k in group_arities(side, ArgOrder::Ordered) {
            counts.ordered += w * w.pow(k);
        }
        let w = u64::from(widths.unordered);
        for k in group_arities(side, ArgOrder::Unordered) {
            counts.unordered += w * comb::sequence_count(widths.unordered, k);
        }
    }
    if sig.parent_constraints_enabled() && !sig.internals().is_empty() {
        for i in 1..=sig.max_parents {
            counts.parent +=
                u64::from(widths.child) * comb::sequence_count(widths.parent, i);
        }
    }
    if let Some(seq) = &sig.sequence {
        let per_block = u64::from(widths.sequence).pow(seq.slots);
        counts.sequence = per_block * (2 * u64::from(seq.length) - 1);
    }
    counts
}

struct Pool {
    normal: Vec<SymbolId>,
    isolated: Vec<SymbolId>,
}

impl Pool {
    fn new(ids: Vec<SymbolId>, isolate: bool, negations: &HashSet<SymbolId>) -> Pool {
        if !isolate || negations.is_empty() {
            return Pool { normal: ids, isolated: Vec::new() };
        }
        let (isolated, normal) = ids.into_iter().partition(|id| negations.contains(id));
        Pool { normal, isolated }
    }

    fn is_empty(&self) -> bool {
        self.normal.is_empty() && self.isolated.is_empty()
    }
}

struct BuildCtx {
    universe_len: usize,
    ordered_groups: Vec<(Side, u32, Pool)>,
    unordered_groups: Vec<(Side, u32, Pool)>,
    omega: Pool,
    sigma_par: Pool,
    slot_pool: Pool,
    max_parents: u32,
    parent_enabled: bool,
    sequence: Option<(u32, u32)>,
}

/// A frozen constraint system: the symbol universe, `t` parallel constraint
/// sets, and the bijective index layout over symbols and constraints.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    signature: Signature,
    widths: Widths,
    t: u32,
    seed: u64,
    universe: Vec<Symbol>,
    index_of: HashMap<Symbol, SymbolId>,
    sets: Vec<FamilySet>,
    set_size: usize,
    ordered_lookup: HashMap<(Side, u32), usize>,
    unordered_lookup: HashMap<(Side, u32), usize>,
    sequence_lookup: HashMap<(u32, bool), usize>,
    formula_exact: bool,
    digest: [u8; 32],
}

impl ConstraintSystem {
    /// Generates the system deterministically from (signature, widths, t,
    /// seed). Each parallel set draws from its own random stream. Rebuilding
    /// with equal inputs yields a byte-identical system.
    pub fn build(signature: Signature, widths: Widths, t: u32, seed: u64) -> Result<Self> {
        widths.validate()?;
        if t == 0 {
            return Err(Error::Unsupported("a system needs at least one parallel set".into()));
        }
        let universe = signature.universe().to_vec();
        let index_of: HashMap<Symbol, SymbolId> = universe
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), SymbolId(i as u32)))
            .collect();
        let id_of = |sym: &Symbol| index_of[sym];

        let negations: HashSet<SymbolId> = universe
            .iter()
            .filter(|s| signature.is_negation(s))
            .map(|s| id_of(s))
            .collect();
        let isolate = signature.isolate_negation;

        let group_pools = |order: ArgOrder| -> Vec<(Side, u32, Pool)> {
            let mut groups = Vec::new();
            for (side, symbols) in
                [(Side::Root, signature.roots()), (Side::Internal, signature.internals())]
            {
                let mut by_arity: Vec<(u32, Vec<SymbolId>)> = Vec::new();
                for sym in symbols {
                    if sym.arg_order != order
                        || sym.arity == 0
                        || signature.is_sequence_position(sym)
                    {
                        continue;
                    }
                    match by_arity.binary_search_by_key(&sym.arity, |(a, _)| *a) {
                        Ok(i) => by_arity[i].1.push(id_of(sym)),
                        Err(i) => by_arity.insert(i, (sym.arity, vec![id_of(sym)])),
                    }
                }
                for (arity, ids) in by_arity {
                    groups.push((side, arity, Pool::new(ids, isolate, &negations)));
                }
            }
            groups
        };
        let ordered_groups = group_pools(ArgOrder::Ordered);
        let unordered_groups = group_pools(ArgOrder::Unordered);

        let omega_ids: Vec<SymbolId> = signature.internals().iter().map(id_of).collect();
        let sigma_par_ids: Vec<SymbolId> = universe
            .iter()
            .filter(|s| s.arity >= 1)
            .map(|s| id_of(s))
            .collect();
        let slot_ids: Vec<SymbolId> = match &signature.sequence {
            Some(seq) => seq.word_symbols().iter().map(|s| id_of(s)).collect(),
            None => Vec::new(),
        };

        let ctx = BuildCtx {
            universe_len: universe.len(),
            ordered_groups,
            unordered_groups,
            omega: Pool::new(omega_ids, isolate, &negations),
            sigma_par: Pool::new(sigma_par_ids, isolate, &negations),
            slot_pool: Pool::new(slot_ids, isolate, &negations),
            max_parents: signature.max_parents,
            parent_enabled: signature.parent_constraints_enabled()
                && !signature.internals().is_empty(),
            sequence: signature.sequence.as_ref().map(|s| (s.length, s.slots)),
        };

        let mut sets = Vec::with_capacity(t as usize);
        let mut set_size = None;
        for set_idx in 0..t as usize {
            let mut stream = rng::set_stream(seed, set_idx);
            let (set, size) = generate_set(&ctx, &widths, &mut stream)?;
            match set_size {
                None => set_size = Some(size),
                Some(prev) => assert_eq!(prev, size, "parallel sets must have equal layouts"),
            }
            sets.push(set);
        }
        let set_size = set_size.unwrap();

        let ordered_lookup = ctx
            .ordered_groups
            .iter()
            .enumerate()
            .map(|(i, (side, arity, _))| ((*side, *arity), i))
            .collect();
        let unordered_lookup = ctx
            .unordered_groups
            .iter()
            .enumerate()
            .map(|(i, (side, arity, _))| ((*side, *arity), i))
            .collect();
        let mut sequence_lookup = HashMap::new();
        if !sets.is_empty() {
            for (i, block) in sets[0].sequence.iter().enumerate() {
                sequence_lookup.insert((block.position, block.terminated), i);
            }
        }

        let formula_exact = !isolate && sets.iter().all(|set| set_widths_exact(set, &widths));
        let digest = digest_system(&signature, &widths, t, seed, &sets);

        Ok(ConstraintSystem {
            signature,
            widths,
            t,
            seed,
            universe,
            index_of,
            sets,
            set_size,
            ordered_lookup,
            unordered_lookup,
            sequence_lookup,
            formula_exact,
            digest,
        })
    }

    #[must_use]
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    #[must_use]
    pub fn widths(&self) -> &Widths {
        &self.widths
    }

    #[must_use]
    pub fn t(&self) -> u32 {
        self.t
    }

    #[must_use]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Total vector length: |S| + t * per-set constraint count.
    #[must_use]
    pub fn len(&self) -> usize {
        self.universe.len() + self.t as usize * self.set_size
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[must_use]
    pub fn symbol_count(&self) -> usize {
        self.universe.len()
    }

    /// Constraints per parallel set.
    #[must_use]
    pub fn set_size(&self) -> usize {
        self.set_size
    }

    #[must_use]
    pub fn universe(&self) -> &[Symbol] {
        &self.universe
    }

    #[must_use]
    pub fn symbol_id(&self, sym: &Symbol) -> Option<SymbolId> {
        self.index_of.get(sym).copied()
    }

    #[must_use]
    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.universe[id.0 as usize]
    }

    #[must_use]
    pub fn set(&self, index: usize) -> &FamilySet {
        &self.sets[index]
    }

    /// Absolute vector index of the first constraint of a set.
    #[must_use]
    pub fn set_base(&self, set: usize) -> usize {
        self.universe.len() + set * self.set_size
    }

    /// True when every split reached its configured width and no isolation
    /// cell was added, so [`expected_counts`] predicts sizes exactly.
    #[must_use]
    pub fn formula_exact(&self) -> bool {
        self.formula_exact
    }

    /// SHA-256 over the signature, parameters, and every cell assignment.
    #[must_use]
    pub fn digest(&self) -> [u8; 32] {
        self.digest
    }

    /// Per-set constraint counts actually generated.
    #[must_use]
    pub fn actual_counts(&self) -> FamilyCounts {
        let set = &self.sets[0];
        FamilyCounts {
            ordered: set.ordered.iter().map(|g| g.size as u64).sum(),
            unordered: set.unordered.iter().map(|g| g.size as u64).sum(),
            parent: set.parent.iter().map(|b| b.size as u64).sum(),
            sequence: set.sequence.iter().map(|b| b.size as u64).sum(),
        }
    }

    /// Maps an absolute vector index to a symbol or a per-set constraint.
    #[must_use]
    pub fn locate(&self, index: usize) -> Location {
        if index < self.universe.len() {
            return Location::Symbol(SymbolId(index as u32));
        }
        let rest = index - self.universe.len();
        Location::Constraint { set: rest / self.set_size, offset: rest % self.set_size }
    }

    /// Recovers the constraint at a per-set offset.
    #[must_use]
    pub fn view(&self, set: usize, offset: usize) -> ConstraintRef<'_> {
        let fam = &self.sets[set];
        for group in &fam.ordered {
            if offset < group.base || offset >= group.base + group.size {
                continue;
            }
            let mut rest = offset - group.base;
            let block = (group.arg_width as usize).pow(group.arity);
            let lead_cell = (rest / block) as u8;
            rest %= block;
            let mut arg_cells = vec![0u8; group.arity as usize];
            for p in (0..group.arity as usize).rev() {
                arg_cells[p] = (rest % group.arg_width as usize) as u8;
                rest /= group.arg_width as usize;
            }
            return ConstraintRef::Ordered { group, lead_cell, arg_cells };
        }
        for group in &fam.unordered {
            if offset < group.base || offset >= group.base + group.size {
                continue;
            }
            let rest = offset - group.base;
            let lead_cell = (rest as u64 / group.seqs) as u8;
            let rank = rest as u64 % group.seqs;
            let arg_cells = comb::unrank_nondecreasing(rank, group.arg_width, group.arity);
            return ConstraintRef::Unordered { group, lead_cell, arg_cells };
        }
        for block in &fam.parent {
            if offset < block.base || offset >= block.base + block.size {
                continue;
            }
            let rest = offset - block.base;
            let child_cell = (rest as u64 / block.seqs) as u8;
            let rank = rest as u64 % block.seqs;
            let parent_cells = comb::unrank_nondecreasing(rank, block.parent_width, block.parents);
            return ConstraintRef::Parent { block, child_cell, parent_cells };
        }
        for block in &fam.sequence {
            if offset < block.base || offset >= block.base + block.size {
                continue;
            }
            let mut rest = offset - block.base;
            let slots = block.slots.len();
            let mut slot_cells = vec![0u8; slots];
            for r in (0..slots).rev() {
                slot_cells[r] = (rest % block.slot_width as usize) as u8;
                rest /= block.slot_width as usize;
            }
            return ConstraintRef::Sequence { block, slot_cells };
        }
        panic!("constraint offset {offset} out of range for set {set}");
    }

    /// Index (absolute) of the ordered constraint matching a node with this
    /// lead symbol and these argument symbols, left to right.
    pub fn ordered_index(
        &self,
        set: usize,
        side: Side,
        lead: SymbolId,
        children: &[SymbolId],
    ) -> Option<usize> {
        let arity = children.len() as u32;
        let gi = *self.ordered_lookup.get(&(side, arity))?;
        let group = &self.sets[set].ordered[gi];
        let lead_cell = group.lead.cell_of(lead)?;
        let splits = &group.args[lead_cell as usize];
        let mut offset = 0usize;
        for (p, &child) in children.iter().enumerate() {
            let cell = splits[p].cell_of(child)?;
            offset = offset * group.arg_width as usize + cell as usize;
        }
        let block = (group.arg_width as usize).pow(arity);
        Some(self.set_base(set) + group.base + lead_cell as usize * block + offset)
    }

    /// Index of the unordered constraint matching a node: the lead cell plus
    /// the unique non-decreasing sequence of its children's cells.
    pub fn unordered_index(
        &self,
        set: usize,
        side: Side,
        lead: SymbolId,
        children: &[SymbolId],
    ) -> Option<usize> {
        let arity = children.len() as u32;
        let gi = *self.unordered_lookup.get(&(side, arity))?;
        let group = &self.sets[set].unordered[gi];
        let lead_cell = group.lead.cell_of(lead)?;
        let split = &group.args[lead_cell as usize];
        let mut cells = Vec::with_capacity(children.len());
        for &child in children {
            cells.push(split.cell_of(child)?);
        }
        cells.sort_unstable();
        let rank = comb::rank_nondecreasing(&cells, group.arg_width);
        Some(
            self.set_base(set)
                + group.base
                + (lead_cell as u64 * group.seqs + rank) as usize,
        )
    }

    /// Index of the parent constraint matching a node with these parents.
    pub fn parent_index(
        &self,
        set: usize,
        child: SymbolId,
        parents: &[SymbolId],
    ) -> Option<usize> {
        let i = parents.len() as u32;
        if i == 0 {
            return None;
        }
        let block = self.sets[set].parent.get(i as usize - 1)?;
        debug_assert_eq!(block.parents, i);
        let child_cell = block.child.cell_of(child)?;
        let split = &block.parent_splits[child_cell as usize];
        let mut cells = Vec::with_capacity(parents.len());
        for &p in parents {
            cells.push(split.cell_of(p)?);
        }
        cells.sort_unstable();
        let rank = comb::rank_nondecreasing(&cells, block.parent_width);
        Some(
            self.set_base(set)
                + block.base
                + (u64::from(child_cell) * block.seqs + rank) as usize,
        )
    }

    /// Index of the sequence constraint matching a position node: position,
    /// slot symbols in order, and whether the chain terminates here.
    pub fn sequence_index(
        &self,
        set: usize,
        position: u32,
        slots: &[SymbolId],
        terminated: bool,
    ) -> Option<usize> {
        let bi = *self.sequence_lookup.get(&(position, terminated))?;
        let block = &self.sets[set].sequence[bi];
        if slots.len() != block.slots.len() {
            return None;
        }
        let mut offset = 0usize;
        for (r, &slot) in slots.iter().enumerate() {
            let cell = block.slots[r].cell_of(slot)?;
            offset = offset * block.slot_width as usize + cell as usize;
        }
        Some(self.set_base(set) + block.base + offset)
    }
}

fn set_widths_exact(set: &FamilySet, widths: &Widths) -> bool {
    set.ordered.iter().all(|g| {
        g.lead.width() == widths.ordered
            && g.args.iter().flatten().all(|s| s.width() == widths.ordered)
    }) && set.unordered.iter().all(|g| {
        g.lead.width() == widths.unordered
            && g.args.iter().all(|s| s.width() == widths.unordered)
    }) && set.parent.iter().all(|b| {
        b.child.width() == widths.child
            && b.parent_splits.iter().all(|s| s.width() == widths.parent)
    }) && set
        .sequence
        .iter()
        .all(|b| b.slots.iter().all(|s| s.width() == widths.sequence))
}

fn generate_set(
    ctx: &BuildCtx,
    widths: &Widths,
    rng: &mut ChaCha8Rng,
) -> Result<(FamilySet, usize)> {
    let mut set = FamilySet::default();
    let mut base = 0usize;
    let fresh = |pool: &Pool, width: u32, rng: &mut ChaCha8Rng| {
        Split::generate(ctx.universe_len, &pool.normal, &pool.isolated, width, rng)
    };

    for (side, arity, pool) in &ctx.ordered_groups {
        let lead = fresh(pool, widths.ordered, rng);
        let mut args = Vec::with_capacity(lead.width() as usize);
        let mut arg_width = None;
        for _cell in 0..lead.width() {
            let mut per_position = Vec::with_capacity(*arity as usize);
            for _p in 0..*arity {
                let split = fresh(&ctx.omega, widths.ordered, rng);
                match arg_width {
                    None => arg_width = Some(split.width()),
                    Some(w) => assert_eq!(w, split.width(), "argument widths must be uniform"),
                }
                per_position.push(split);
            }
            args.push(per_position);
        }
        let arg_width = arg_width.unwrap_or(0);
        let size = lead.width() as u64 * checked_pow(arg_width, *arity)?;
        let group = OrderedGroup {
            side: *side,
            arity: *arity,
            lead,
            args,
            arg_width,
            base,
            size: size as usize,
        };
        base += group.size;
        set.ordered.push(group);
    }

    for (side, arity, pool) in &ctx.unordered_groups {
        let lead = fresh(pool, widths.unordered, rng);
        let mut args = Vec::with_capacity(lead.width() as usize);
        let mut arg_width = None;
        for _cell in 0..lead.width() {
            let split = fresh(&ctx.omega, widths.unordered, rng);
            match arg_width {
                None => arg_width = Some(split.width()),
                Some(w) => assert_eq!(w, split.width(), "argument widths must be uniform"),
            }
            args.push(split);
        }
        let arg_width = arg_width.unwrap_or(0);
        let seqs = comb::sequence_count(arg_width, *arity);
        let size = (lead.width() as u64 * seqs) as usize;
        let group = UnorderedGroup {
            side: *side,
            arity: *arity,
            lead,
            args,
            arg_width,
            seqs,
            base,
            size,
        };
        base += group.size;
        set.unordered.push(group);
    }

    if ctx.parent_enabled && !ctx.omega.is_empty() {
        for i in 1..=ctx.max_parents {
            let child = fresh(&ctx.omega, widths.child, rng);
            let mut parent_splits = Vec::with_capacity(child.width() as usize);
            let mut parent_width = None;
            for _cell in 0..child.width() {
                let split = fresh(&ctx.sigma_par, widths.parent, rng);
                match parent_width {
                    None => parent_width = Some(split.width()),
                    Some(w) => assert_eq!(w, split.width(), "parent widths must be uniform"),
                }
                parent_splits.push(split);
            }
            let parent_width = parent_width.unwrap_or(0);
            let seqs = comb::sequence_count(parent_width, i);
            let size = (child.width() as u64 * seqs) as usize;
            let block = ParentBlock {
                parents: i,
                child,
                parent_splits,
                parent_width,
                seqs,
                base,
                size,
            };
            base += block.size;
            set.parent.push(block);
        }
    }

    if let Some((length, slots)) = ctx.sequence {
        for position in 1..=length {
            for terminated in [true, false] {
                if !terminated && position == length {
                    continue;
                }
                let mut slot_splits = Vec::with_capacity(slots as usize);
                let mut slot_width = None;
                for _r in 0..slots {
                    let split = fresh(&ctx.slot_pool, widths.sequence, rng);
                    match slot_width {
                        None => slot_width = Some(split.width()),
                        Some(w) => assert_eq!(w, split.width(), "slot widths must be uniform"),
                    }
                    slot_splits.push(split);
                }
                let slot_width = slot_width.unwrap_or(0);
                let size = checked_pow(slot_width, slots)? as usize;
                let block = SequenceBlock {
                    position,
                    terminated,
                    slots: slot_splits,
                    slot_width,
                    base,
                    size,
                };
                base += block.size;
                set.sequence.push(block);
            }
        }
    }

    Ok((set, base))
}

fn checked_pow(base: u32, exp: u32) -> Result<u64> {
    u64::from(base)
        .checked_pow(exp)
        .ok_or_else(|| Error::Unsupported(format!("constraint block {base}^{exp} overflows")))
}

fn digest_system(
    signature: &Signature,
    widths: &Widths,
    t: u32,
    seed: u64,
    sets: &[FamilySet],
) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(b"count-vector-system-v1\n");
    hasher.update(signature.to_text().as_bytes());
    for w in [widths.ordered, widths.unordered, widths.child, widths.parent, widths.sequence] {
        hasher.update(w.to_le_bytes());
    }
    hasher.update(t.to_le_bytes());
    hasher.update(seed.to_le_bytes());
    for set in sets {
        for group in &set.ordered {
            hasher.update(group.lead.assign_bytes());
            for split in group.args.iter().flatten() {
                hasher.update(split.assign_bytes());
            }
        }
        for group in &set.unordered {
            hasher.update(group.lead.assign_bytes());
            for split in &group.args {
                hasher.update(split.assign_bytes());
            }
        }
        for block in &set.parent {
            hasher.update(block.child.assign_bytes());
            for split in &block.parent_splits {
                hasher.update(split.assign_bytes());
            }
        }
        for block in &set.sequence {
            for split in &block.slots {
                hasher.update(split.assign_bytes());
            }
        }
    }
    hasher.finalize().into()
}
