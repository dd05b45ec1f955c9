//! Similarity measures over count vectors.
//!
//! A flat count vector splits into rows: the symbol tallies first, then one
//! row per parallel constraint set. Bag similarity is cosine over the symbol
//! row alone; structural similarity takes the cosine of every row and keeps
//! the minimum, so two vectors are only as close as their least similar row.
//! The blended measure interpolates between the two.

use crate::constraints::{ConstraintSystem, Location};
use crate::error::Error;
use crate::Result;
use crate::vector::CountVector;

/// A count vector regrouped by row: index 0 holds the symbol counts, index
/// `1 + i` the constraint counts of parallel set `i`. Rows are stored sparse
/// as ascending `(offset, count)` pairs; concatenating them in order restores
/// the flat vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMatrix {
    lens: Vec<usize>,
    rows: Vec<Vec<(u32, u32)>>,
}

impl RowMatrix {
    /// Regroups `vector` by row. The vector must have the system's length.
    pub fn from_vector(system: &ConstraintSystem, vector: &CountVector) -> Result<RowMatrix> {
        if vector.len() != system.len() {
            return Err(Error::VectorLength { expected: system.len(), got: vector.len() });
        }
        let t = system.t() as usize;
        let mut lens = vec![system.set_size(); 1 + t];
        lens[0] = system.symbol_count();
        let mut rows = vec![Vec::new(); 1 + t];
        for (index, count) in vector.iter() {
            let (row, offset) = match system.locate(index) {
                Location::Symbol(id) => (0, id.0 as usize),
                Location::Constraint { set, offset } => (1 + set, offset),
            };
            rows[row].push((offset as u32, count));
        }
        Ok(RowMatrix { lens, rows })
    }

    /// Number of rows, the symbol row included.
    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Declared length of row `row`, counting zero entries.
    #[must_use]
    pub fn row_len(&self, row: usize) -> usize {
        self.lens[row]
    }

    /// The nonzero entries of row `row`, ascending by offset.
    #[must_use]
    pub fn row(&self, row: usize) -> &[(u32, u32)] {
        &self.rows[row]
    }

    /// Concatenates the rows back into the flat vector.
    #[must_use]
    pub fn to_vector(&self) -> CountVector {
        let mut flat = CountVector::zeros(self.lens.iter().sum());
        let mut base = 0usize;
        for (row, len) in self.rows.iter().zip(&self.lens) {
            for &(offset, count) in row {
                flat.add(base + offset as usize, count);
            }
            base += len;
        }
        flat
    }

    fn same_shape(&self, other: &RowMatrix) -> Result<()> {
        if self.lens == other.lens {
            return Ok(());
        }
        let expected = self.lens.iter().sum();
        let got = other.lens.iter().sum();
        if expected != got {
            return Err(Error::VectorLength { expected, got });
        }
        Err(Error::Unsupported(format!(
            "row shapes differ: {:?} vs {:?}",
            self.lens, other.lens
        )))
    }
}

/// Cosine of two sparse rows. Two zero rows count as identical (1), a zero
/// row against a nonzero one as orthogonal (0).
fn cosine(a: &[(u32, u32)], b: &[(u32, u32)]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut dot = 0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot += f64::from(a[i].1) * f64::from(b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    let sumsq = |row: &[(u32, u32)]| {
        row.iter().map(|&(_, c)| f64::from(c) * f64::from(c)).sum::<f64>()
    };
    // A single square root keeps the cosine of a row with itself at exactly
    // 1.0, which the self-similarity guarantee depends on.
    dot / (sumsq(a) * sumsq(b)).sqrt()
}

/// Cosine over the symbol rows alone, ignoring all constraint counts.
pub fn bag_similarity(a: &RowMatrix, b: &RowMatrix) -> Result<f64> {
    a.same_shape(b)?;
    Ok(cosine(a.row(0), b.row(0)))
}

/// Minimum over all rows of the row-wise cosine.
pub fn structural_similarity(a: &RowMatrix, b: &RowMatrix) -> Result<f64> {
    a.same_shape(b)?;
    let sim = (0..a.rows())
        .map(|r| cosine(a.row(r), b.row(r)))
        .fold(f64::INFINITY, f64::min);
    Ok(sim)
}

/// Affine blend `lambda * structural + (1 - lambda) * bag`; `lambda` 0 is the
/// pure bag measure, 1 the pure structural one.
pub fn blended_similarity(a: &RowMatrix, b: &RowMatrix, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Unsupported(format!("blend weight {lambda} is outside [0, 1]")));
    }
    Ok(lambda * structural_similarity(a, b)? + (1.0 - lambda) * bag_similarity(a, b)?)
}

/// Index of the training row matrix most similar to `query` under the
/// blended measure. Ties keep the earliest index.
pub fn nearest(train: &[RowMatrix], query: &RowMatrix, lambda: f64) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::Unsupported("nearest neighbor needs a non-empty training set".into()));
    }
    let mut best = 0usize;
    let mut best_sim = f64::NEG_INFINITY;
    for (i, candidate) in train.iter().enumerate() {
        let sim = blended_similarity(candidate, query, lambda)?;
        if sim > best_sim {
            best = i;
            best_sim = sim;
        }
    }
    Ok(best)
}
