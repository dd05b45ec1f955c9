//! Fixed-length count vectors, stored sparsely.
//!
//! A vector's length is fixed by its constraint system; almost all entries
//! are zero, so only nonzero counts are kept. The text form is one
//! `index:count` line per nonzero entry under a header that names the
//! originating system's digest, which lets loads reject vectors produced
//! under a different system.

use crate::error::Error;
use crate::Result;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Sparse non-negative count vector of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CountVector {
    len: usize,
    counts: BTreeMap<u32, u32>,
}

impl CountVector {
    #[must_use]
    pub fn zeros(len: usize) -> CountVector {
        CountVector { len, counts: BTreeMap::new() }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// True when every entry is zero.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn increment(&mut self, index: usize) {
        self.add(index, 1);
    }

    pub fn add(&mut self, index: usize, amount: u32) {
        assert!(index < self.len, "index {index} out of range for length {}", self.len);
        if amount > 0 {
            *self.counts.entry(index as u32).or_insert(0) += amount;
        }
    }

    #[must_use]
    pub fn get(&self, index: usize) -> u32 {
        assert!(index < self.len, "index {index} out of range for length {}", self.len);
        self.counts.get(&(index as u32)).copied().unwrap_or(0)
    }

    /// Nonzero entries in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts.iter().map(|(&i, &c)| (i as usize, c))
    }

    #[must_use]
    pub fn nonzero_len(&self) -> usize {
        self.counts.len()
    }

    /// Sum of all counts.
    #[must_use]
    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| u64::from(c)).sum()
    }

    /// Sum of counts over `range`.
    #[must_use]
    pub fn total_in(&self, range: std::ops::Range<usize>) -> u64 {
        let (start, end) = (range.start as u32, range.end as u32);
        self.counts.range(start..end).map(|(_, &c)| u64::from(c)).sum()
    }

    /// Serializes to the sparse text form, stamped with a system digest.
    #[must_use]
    pub fn to_text(&self, system_digest_hex: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "system {system_digest_hex}");
        let _ = writeln!(out, "length {}", self.len);
        for (i, c) in self.iter() {
            let _ = writeln!(out, "{i}:{c}");
        }
        out
    }

    /// Parses the text form, returning the stamped digest and the vector.
    pub fn parse_text(input: &str) -> Result<(String, CountVector)> {
        let mut digest = None;
        let mut vector: Option<CountVector> = None;
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if let Some(rest) = text.strip_prefix("system ") {
                digest = Some(rest.trim().to_string());
                continue;
            }
            if let Some(rest) = text.strip_prefix("length ") {
                let len = rest.trim().parse().map_err(|_| Error::Parse {
                    line,
                    column: 1,
                    message: format!("bad length `{rest}`"),
                })?;
                vector = Some(CountVector::zeros(len));
                continue;
            }
            let Some(vector) = vector.as_mut() else {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: "entry before length header".into(),
                });
            };
            let Some((i, c)) = text.split_once(':') else {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: format!("expected index:count, got `{text}`"),
                });
            };
            let index: usize = i.trim().parse().map_err(|_| Error::Parse {
                line,
                column: 1,
                message: format!("bad index `{i}`"),
            })?;
            let count: u32 = c.trim().parse().map_err(|_| Error::Parse {
                line,
                column: 1,
                message: format!("bad count `{c}`"),
            })?;
            if index >= vector.len() {
                return Err(Error::VectorLength { expected: vector.len(), got: index + 1 });
            }
            vector.add(index, count);
        }
        let digest = digest.ok_or_else(|| Error::Parse {
            line: 0,
            column: 1,
            message: "missing system header".into(),
        })?;
        let vector = vector.ok_or_else(|| Error::Parse {
            line: 0,
            column: 1,
            message: "missing length header".into(),
        })?;
        Ok((digest, vector))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accumulate() {
        let mut v = CountVector::zeros(10);
        v.increment(3);
        v.increment(3);
        v.increment(7);
        assert_eq!(v.get(3), 2);
        assert_eq!(v.get(7), 1);
        assert_eq!(v.get(0), 0);
        assert_eq!(v.total(), 3);
        assert_eq!(v.total_in(0..4), 2);
        assert_eq!(v.nonzero_len(), 2);
    }

    #[test]
    fn round_trips_through_text() {
        let mut v = CountVector::zeros(100);
        v.add(0, 5);
        v.add(42, 1);
        v.add(99, 3);
        let text = v.to_text("abc123");
        let (digest, parsed) = CountVector::parse_text(&text).unwrap();
        assert_eq!(digest, "abc123");
        assert_eq!(parsed, v);
    }

    #[test]
    fn zero_vector_round_trips() {
        let v = CountVector::zeros(5);
        let (_, parsed) = CountVector::parse_text(&v.to_text("d")).unwrap();
        assert_eq!(parsed, v);
        assert!(parsed.is_zero());
    }

    #[test]
    fn out_of_range_entry_rejected() {
        let err = CountVector::parse_text("system x\nlength 3\n5:1\n").unwrap_err();
        assert!(matches!(err, Error::VectorLength { expected: 3, .. }));
    }

    #[test]
    fn missing_headers_rejected() {
        assert!(CountVector::parse_text("length 3\n1:1\n").is_err());
        assert!(CountVector::parse_text("system x\n1:1\n").is_err());
    }
}
