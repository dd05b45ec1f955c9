//! Counting and ranking of non-decreasing cell sequences.
//!
//! Unordered and parent constraints enumerate all length-k non-decreasing
//! sequences over a split's cells. Their vector indices come from the
//! lexicographic rank of the sequence; decoding inverts the rank. Cardinality
//! is the stars-and-bars count C(k + w - 1, k).

/// Binomial coefficient with u128 intermediates; panics on overflow, which
/// no supported configuration approaches.
#[must_use]
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Number of non-decreasing sequences of length `len` over `width` cells.
#[must_use]
pub fn sequence_count(width: u32, len: u32) -> u64 {
    if len == 0 {
        return 1;
    }
    if width == 0 {
        return 0;
    }
    binomial(u64::from(len) + u64::from(width) - 1, u64::from(len))
}

/// Non-decreasing sequences of length `len` over cells `floor..width`.
fn suffix_count(width: u32, len: u32, floor: u32) -> u64 {
    sequence_count(width - floor, len)
}

/// Lexicographic rank of a non-decreasing cell sequence among all such
/// sequences over `width` cells. Debug-asserts monotonicity.
#[must_use]
pub fn rank_nondecreasing(seq: &[u8], width: u32) -> u64 {
    let k = seq.len() as u32;
    let mut rank = 0u64;
    let mut floor = 0u32;
    for (p, &cell) in seq.iter().enumerate() {
        let cell = u32::from(cell);
        debug_assert!(cell >= floor && cell < width, "sequence not non-decreasing in range");
        let remaining = k - p as u32 - 1;
        for v in floor..cell {
            rank += suffix_count(width, remaining, v);
        }
        floor = cell;
    }
    rank
}

/// Inverse of [`rank_nondecreasing`]: the rank-th non-decreasing sequence of
/// length `len` over `width` cells, in lexicographic order.
#[must_use]
pub fn unrank_nondecreasing(mut rank: u64, width: u32, len: u32) -> Vec<u8> {
    debug_assert!(rank < sequence_count(width, len));
    let mut seq = Vec::with_capacity(len as usize);
    let mut floor = 0u32;
    for p in 0..len {
        let remaining = len - p - 1;
        let mut cell = floor;
        loop {
            let here = suffix_count(width, remaining, cell);
            if rank < here {
                break;
            }
            rank -= here;
            cell += 1;
        }
        seq.push(cell as u8);
        floor = cell;
    }
    seq
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(52, 5), 2_598_960);
    }

    #[test]
    fn sequence_count_matches_stars_and_bars() {
        assert_eq!(sequence_count(4, 3), 20);
        assert_eq!(sequence_count(2, 2), 3);
        assert_eq!(sequence_count(3, 0), 1);
        assert_eq!(sequence_count(1, 5), 1);
    }

    #[test]
    fn rank_and_unrank_agree_with_exhaustive_enumeration() {
        for width in 1..=5u32 {
            for len in 1..=5u32 {
                let all: Vec<Vec<u8>> = (0..width as u8)
                    .combinations_with_replacement(len as usize)
                    .collect();
                assert_eq!(all.len() as u64, sequence_count(width, len));
                for (expected_rank, seq) in all.iter().enumerate() {
                    assert_eq!(
                        rank_nondecreasing(seq, width),
                        expected_rank as u64,
                        "rank of {seq:?} over width {width}"
                    );
                    assert_eq!(
                        &unrank_nondecreasing(expected_rank as u64, width, len),
                        seq,
                        "unrank {expected_rank} over width {width} length {len}"
                    );
                }
            }
        }
    }
}
