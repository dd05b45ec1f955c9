//! Associations: per-symbol combinations of constituent cells, one from each
//! parallel set.
//!
//! A lead association ties a symbol to one lead occurrence per set (all on
//! the same side, since a node is a root in every set or in none), and a
//! child association ties it to one parent-instance child occurrence per
//! set. Tuples are assembled from pairs of these later; argument and parent
//! cells are enumerated there, anchored to an association's instances.

use std::collections::HashMap;

use crate::constraints::{Side, SymbolId};
use crate::error::Error;
use crate::Result;

use super::extract::{Extraction, InstanceKind, OccId, Role};

/// One occurrence per parallel set, in set order.
pub(crate) type Assoc = Vec<OccId>;

#[derive(Debug, Default)]
pub(crate) struct AssocTable {
    pub leads: Vec<Assoc>,
    pub children: Vec<Assoc>,
    pub leads_of: HashMap<(SymbolId, Side), Vec<usize>>,
    pub children_of: HashMap<SymbolId, Vec<usize>>,
    lead_ids: HashMap<(SymbolId, Vec<OccId>), usize>,
    child_ids: HashMap<(SymbolId, Vec<OccId>), usize>,
}

impl AssocTable {
    pub(crate) fn lead_id(&self, symbol: SymbolId, occs: &[OccId]) -> Option<usize> {
        self.lead_ids.get(&(symbol, occs.to_vec())).copied()
    }

    pub(crate) fn child_id(&self, symbol: SymbolId, occs: &[OccId]) -> Option<usize> {
        self.child_ids.get(&(symbol, occs.to_vec())).copied()
    }
}

/// Enumerates every t-way association for symbols that actually have copies.
pub(crate) fn build(ex: &Extraction, t: usize, cap: usize) -> Result<AssocTable> {
    let mut lead_occs: HashMap<(SymbolId, Side), Vec<Vec<OccId>>> = HashMap::new();
    let mut child_occs: HashMap<SymbolId, Vec<Vec<OccId>>> = HashMap::new();
    for (id, occ) in ex.occurrences.iter().enumerate() {
        match occ.role {
            Role::Lead => {
                let InstanceKind::Node { side, .. } = ex.instances[occ.instance].kind else {
                    unreachable!("lead occurrences belong to node instances");
                };
                for &sym in &occ.members {
                    if ex.counts[sym.0 as usize] == 0 {
                        continue;
                    }
                    lead_occs
                        .entry((sym, side))
                        .or_insert_with(|| vec![Vec::new(); t])
                        [occ.set]
                        .push(id);
                }
            }
            Role::Child => {
                for &sym in &occ.members {
                    if ex.counts[sym.0 as usize] == 0 {
                        continue;
                    }
                    child_occs
                        .entry(sym)
                        .or_insert_with(|| vec![Vec::new(); t])
                        [occ.set]
                        .push(id);
                }
            }
            Role::Arg | Role::Parent => {}
        }
    }

    let mut table = AssocTable::default();
    let mut keys: Vec<&(SymbolId, Side)> = lead_occs.keys().collect();
    keys.sort();
    for key in keys {
        let per_set = &lead_occs[key];
        let (symbol, side) = *key;
        for combo in products(per_set, cap, table.leads.len())? {
            let id = table.leads.len();
            table.lead_ids.insert((symbol, combo.clone()), id);
            table.leads_of.entry((symbol, side)).or_default().push(id);
            table.leads.push(combo);
        }
    }
    let mut keys: Vec<&SymbolId> = child_occs.keys().collect();
    keys.sort();
    for &symbol in keys {
        let per_set = &child_occs[&symbol];
        for combo in products(per_set, cap, table.children.len())? {
            let id = table.children.len();
            table.child_ids.insert((symbol, combo.clone()), id);
            table.children_of.entry(symbol).or_default().push(id);
            table.children.push(combo);
        }
    }
    Ok(table)
}

/// Cartesian product across the per-set occurrence lists; empty if any set
/// has none (the symbol cannot hold that role in every set at once).
fn products(per_set: &[Vec<OccId>], cap: usize, used: usize) -> Result<Vec<Vec<OccId>>> {
    if per_set.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let total = per_set.iter().fold(1usize, |n, l| n.saturating_mul(l.len()));
    if used.saturating_add(total) > cap {
        return Err(Error::FormulaTooLarge { variables: used + total, max: cap });
    }
    let mut out = Vec::with_capacity(total);
    let mut odometer = vec![0usize; per_set.len()];
    loop {
        out.push(odometer.iter().zip(per_set).map(|(&i, l)| l[i]).collect());
        let mut k = per_set.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            odometer[k] += 1;
            if odometer[k] < per_set[k].len() {
                break;
            }
            odometer[k] = 0;
        }
    }
}
