//! Random near-equal partitioning of symbol sets.
//!
//! A split deals a shuffled symbol set round-robin into exactly `w` cells,
//! so cell sizes differ by at most one and every domain symbol lands in
//! exactly one cell. Sets smaller than `w` leave the trailing cells empty;
//! constraints touching an empty cell simply never match. Keeping the cell
//! count fixed is what makes the closed-form family sizes hold for every
//! pool size. Cell membership is stored densely per universe index for O(1)
//! lookup during matching.

use super::SymbolId;
use rand::seq::SliceRandom;
use rand::Rng;

/// Marker for universe symbols outside this split's domain.
pub const ABSENT: u8 = 0xFF;

/// One random partitioning of a symbol set into cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    assign: Vec<u8>,
    counts: Vec<u32>,
}

impl Split {
    /// Deals `domain` into exactly `width` cells. Symbols in `isolated` are
    /// withheld from the deal and placed together in one extra trailing cell;
    /// pass an empty slice for a plain split.
    pub fn generate(
        universe_len: usize,
        domain: &[SymbolId],
        isolated: &[SymbolId],
        width: u32,
        rng: &mut impl Rng,
    ) -> Split {
        assert!(width >= 1 && width <= 254, "split width must lie in 1..=254");
        let mut assign = vec![ABSENT; universe_len];
        let mut dealt: Vec<SymbolId> = domain.to_vec();
        dealt.shuffle(rng);
        let cells = width as usize;
        let mut counts = vec![0u32; cells];
        for (j, id) in dealt.iter().enumerate() {
            let cell = j % cells;
            assign[id.0 as usize] = cell as u8;
            counts[cell] += 1;
        }
        if !isolated.is_empty() {
            let cell = counts.len();
            assert!(cell < 255, "isolation cell exceeds cell index range");
            counts.push(isolated.len() as u32);
            for id in isolated {
                debug_assert_eq!(assign[id.0 as usize], ABSENT, "isolated symbol dealt twice");
                assign[id.0 as usize] = cell as u8;
            }
        }
        Split { assign, counts }
    }

    /// Number of cells, isolation cell included.
    #[must_use]
    pub fn width(&self) -> u32 {
        self.counts.len() as u32
    }

    /// Cell holding `id`, or None when `id` is outside the domain.
    #[must_use]
    pub fn cell_of(&self, id: SymbolId) -> Option<u8> {
        match self.assign[id.0 as usize] {
            ABSENT => None,
            cell => Some(cell),
        }
    }

    #[must_use]
    pub fn cell_len(&self, cell: u8) -> u32 {
        self.counts[cell as usize]
    }

    #[must_use]
    pub fn domain_len(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Members of a cell in ascending universe order.
    #[must_use]
    pub fn members(&self, cell: u8) -> Vec<SymbolId> {
        self.assign
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == cell)
            .map(|(i, _)| SymbolId(i as u32))
            .collect()
    }

    /// Raw assignment bytes, used for digests and persistence checks.
    #[must_use]
    pub(crate) fn assign_bytes(&self) -> &[u8] {
        &self.assign
    }
}
