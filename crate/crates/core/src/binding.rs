//! Binding of concrete labels to pool placeholders.
//!
//! Systems are built over placeholder symbols (`pred_1`, `func_3`, `w_42`)
//! so that one frozen constraint system can serve any corpus. A [`Binder`]
//! assigns concrete labels to placeholders first come, first served, and
//! remembers the assignment so that encoding and decoding agree across runs.

use std::collections::HashMap;

use crate::error::Error;
use crate::graph::Graph;
use crate::signature::{SequenceDecl, Signature};
use crate::symbol::{ArgOrder, Symbol};
use crate::Result;

fn placeholder_symbol(label: String, arity: u32, arg_order: ArgOrder) -> Symbol {
    match arg_order {
        ArgOrder::Ordered => Symbol::ordered(label, arity),
        ArgOrder::Unordered => Symbol::unordered(label, arity),
    }
}

#[derive(Clone, Debug)]
struct Bucket {
    name: String,
    arg_order: ArgOrder,
    capacity: usize,
    used: usize,
}

/// Assigns concrete labels to the placeholder symbols of a signature's
/// pools. Assignments are stable for the binder's lifetime and can be
/// persisted as text lines alongside the system.
#[derive(Clone, Debug, Default)]
pub struct Binder {
    buckets: Vec<Bucket>,
    bucket_of: HashMap<(String, u32), usize>,
    forward: HashMap<(String, String, u32), Symbol>,
    reverse: HashMap<(String, u32), String>,
    order: Vec<(String, String, u32)>,
}

impl Binder {
    /// Creates a binder over the signature's declared pools plus, for
    /// sequence signatures, the word pool. The sequence end marker is not
    /// bindable.
    pub fn for_signature(sig: &Signature) -> Result<Binder> {
        let mut binder = Binder::default();
        for pool in sig.pools() {
            binder.add_bucket(&pool.name, pool.arity, pool.arg_order, pool.count as usize)?;
        }
        if let Some(seq) = &sig.sequence {
            binder.add_bucket(
                SequenceDecl::WORD_PREFIX,
                0,
                ArgOrder::Ordered,
                seq.vocab as usize - 1,
            )?;
        }
        Ok(binder)
    }

    fn add_bucket(
        &mut self,
        name: &str,
        arity: u32,
        arg_order: ArgOrder,
        capacity: usize,
    ) -> Result<()> {
        let key = (name.to_string(), arity);
        if self.bucket_of.contains_key(&key) {
            return Err(Error::Unsupported(format!(
                "two pools share the name {name}/{arity}"
            )));
        }
        self.bucket_of.insert(key, self.buckets.len());
        self.buckets.push(Bucket { name: name.to_string(), arg_order, capacity, used: 0 });
        Ok(())
    }

    /// Returns the placeholder bound to `label` in `pool`, allocating the
    /// next free placeholder on first use.
    pub fn bind(&mut self, pool: &str, label: &str, arity: u32) -> Result<Symbol> {
        let key = (pool.to_string(), label.to_string(), arity);
        if let Some(sym) = self.forward.get(&key) {
            return Ok(sym.clone());
        }
        let bucket = self
            .bucket_of
            .get(&(pool.to_string(), arity))
            .map(|&b| &mut self.buckets[b])
            .ok_or_else(|| Error::NoPoolFor { label: label.to_string(), arity })?;
        if bucket.used >= bucket.capacity {
            return Err(Error::PoolExhausted {
                pool: format!("{pool}/{arity}"),
                size: bucket.capacity,
            });
        }
        bucket.used += 1;
        let placeholder = format!("{}_{}", bucket.name, bucket.used);
        let sym = placeholder_symbol(placeholder.clone(), arity, bucket.arg_order);
        self.forward.insert(key.clone(), sym.clone());
        self.reverse.insert((placeholder, arity), label.to_string());
        self.order.push(key);
        Ok(sym)
    }

    /// Returns the placeholder bound to `label`, if any, without allocating.
    #[must_use]
    pub fn lookup(&self, pool: &str, label: &str, arity: u32) -> Option<&Symbol> {
        self.forward.get(&(pool.to_string(), label.to_string(), arity))
    }

    /// Returns the concrete label behind a placeholder symbol, ignoring any
    /// mask on it.
    #[must_use]
    pub fn unbind(&self, symbol: &Symbol) -> Option<&str> {
        self.reverse
            .get(&(symbol.label.clone(), symbol.arity))
            .map(String::as_str)
    }

    /// Rewrites every bound placeholder in `graph` back to its concrete
    /// label. Unbound symbols pass through unchanged, so the result is for
    /// rendering only.
    #[must_use]
    pub fn resolve(&self, graph: &Graph) -> Graph {
        graph.map_symbols(|_, sym| match self.unbind(sym) {
            Some(label) => Symbol { label: label.to_string(), ..sym.clone() },
            None => sym.clone(),
        })
    }

    /// Number of labels bound so far.
    #[must_use]
    pub fn len(&self) -> usize {
        self.order.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Renders the bindings as persistence lines, one per bound label, in
    /// binding order.
    #[must_use]
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for (pool, label, arity) in &self.order {
            let sym = &self.forward[&(pool.clone(), label.clone(), *arity)];
            let ordinal = sym
                .label
                .rsplit('_')
                .next()
                .expect("placeholder labels end in an ordinal");
            out.push_str(&format!("bind {pool}/{arity} {ordinal} {label}\n"));
        }
        out
    }

    /// Restores one persistence line previously produced by
    /// [`Binder::to_lines`]. `line_no` is used for error reporting.
    pub fn load_line(&mut self, line_no: usize, line: &str) -> Result<()> {
        let parse_err = |message: &str| Error::Parse {
            line: line_no,
            column: 1,
            message: message.to_string(),
        };
        let mut fields = line.split_whitespace();
        if fields.next() != Some("bind") {
            return Err(parse_err("expected a bind line"));
        }
        let pool_field = fields.next().ok_or_else(|| parse_err("missing pool"))?;
        let (pool, arity) = pool_field
            .rsplit_once('/')
            .ok_or_else(|| parse_err("pool must be name/arity"))?;
        let arity: u32 = arity.parse().map_err(|_| parse_err("bad arity"))?;
        let ordinal: usize = fields
            .next()
            .ok_or_else(|| parse_err("missing ordinal"))?
            .parse()
            .map_err(|_| parse_err("bad ordinal"))?;
        let label = fields.next().ok_or_else(|| parse_err("missing label"))?;
        if fields.next().is_some() {
            return Err(parse_err("trailing fields"));
        }
        let bucket = self
            .bucket_of
            .get(&(pool.to_string(), arity))
            .map(|&b| &mut self.buckets[b])
            .ok_or_else(|| Error::NoPoolFor { label: label.to_string(), arity })?;
        if ordinal == 0 || ordinal > bucket.capacity {
            return Err(Error::PoolExhausted {
                pool: format!("{pool}/{arity}"),
                size: bucket.capacity,
            });
        }
        bucket.used = bucket.used.max(ordinal);
        let placeholder = format!("{}_{ordinal}", bucket.name);
        let sym = placeholder_symbol(placeholder.clone(), arity, bucket.arg_order);
        let key = (pool.to_string(), label.to_string(), arity);
        if self.forward.insert(key.clone(), sym).is_some() {
            return Err(parse_err("label bound twice"));
        }
        self.reverse.insert((placeholder, arity), label.to_string());
        self.order.push(key);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{PoolDecl, PoolKind, SignatureOptions};

    fn pooled_signature() -> Signature {
        Signature::declare(
            vec![],
            vec![],
            SignatureOptions {
                pools: vec![
                    PoolDecl {
                        name: "pred".into(),
                        kind: PoolKind::Both,
                        arity: 2,
                        arg_order: ArgOrder::Ordered,
                        count: 3,
                    },
                    PoolDecl {
                        name: "const".into(),
                        kind: PoolKind::Internal,
                        arity: 0,
                        arg_order: ArgOrder::Ordered,
                        count: 2,
                    },
                ],
                ..SignatureOptions::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn binds_first_come_first_served_and_is_idempotent() {
        let sig = pooled_signature();
        let mut binder = Binder::for_signature(&sig).unwrap();
        let likes = binder.bind("pred", "likes", 2).unwrap();
        let knows = binder.bind("pred", "knows", 2).unwrap();
        assert_eq!(likes.label, "pred_1");
        assert_eq!(knows.label, "pred_2");
        assert_eq!(binder.bind("pred", "likes", 2).unwrap(), likes);
        assert_eq!(binder.unbind(&likes), Some("likes"));
        assert!(sig.is_root(&likes) && sig.is_internal(&likes));
    }

    #[test]
    fn exhaustion_and_missing_pools_are_reported() {
        let sig = pooled_signature();
        let mut binder = Binder::for_signature(&sig).unwrap();
        binder.bind("const", "zero", 0).unwrap();
        binder.bind("const", "one", 0).unwrap();
        let err = binder.bind("const", "two", 0).unwrap_err();
        assert!(matches!(err, Error::PoolExhausted { size: 2, .. }));
        let err = binder.bind("pred", "plus", 3).unwrap_err();
        assert!(matches!(err, Error::NoPoolFor { arity: 3, .. }));
    }

    #[test]
    fn lines_round_trip() {
        let sig = pooled_signature();
        let mut binder = Binder::for_signature(&sig).unwrap();
        binder.bind("pred", "likes", 2).unwrap();
        binder.bind("const", "zero", 0).unwrap();
        binder.bind("pred", "knows", 2).unwrap();
        let lines = binder.to_lines();

        let mut restored = Binder::for_signature(&sig).unwrap();
        for (i, line) in lines.lines().enumerate() {
            restored.load_line(i + 1, line).unwrap();
        }
        assert_eq!(restored.to_lines(), lines);
        assert_eq!(restored.lookup("pred", "knows", 2).unwrap().label, "pred_2");
        let next = restored.bind("pred", "trusts", 2).unwrap();
        assert_eq!(next.label, "pred_3");
    }

    #[test]
    fn sequence_signatures_expose_the_word_pool() {
        let sig = Signature::declare(
            vec![],
            vec![],
            SignatureOptions {
                sequence: Some(SequenceDecl { length: 3, slots: 1, vocab: 4 }),
                ..SignatureOptions::default()
            },
        )
        .unwrap();
        let mut binder = Binder::for_signature(&sig).unwrap();
        assert_eq!(binder.bind("w", "cat", 0).unwrap().label, "w_1");
        assert_eq!(binder.bind("w", "dog", 0).unwrap().label, "w_2");
        assert_eq!(binder.bind("w", "eel", 0).unwrap().label, "w_3");
        assert!(binder.bind("w", "fox", 0).is_err());
    }

    #[test]
    fn resolve_rewrites_bound_labels() {
        let sig = pooled_signature();
        let mut binder = Binder::for_signature(&sig).unwrap();
        let pred = binder.bind("pred", "likes", 2).unwrap();
        let zero = binder.bind("const", "zero", 0).unwrap();
        let mut g = Graph::new();
        let z = g.leaf(zero);
        let z2 = g.leaf(Symbol::leaf("unpooled"));
        g.add_node(pred, vec![z, z2]);
        let resolved = binder.resolve(&g);
        assert_eq!(resolved.symbol(0).label, "zero");
        assert_eq!(resolved.symbol(1).label, "unpooled");
        assert_eq!(resolved.symbol(2).label, "likes");
    }
}
