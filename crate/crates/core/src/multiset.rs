//! Nondecreasing index sequences, i.e. multisets over `0..items`.

use alloc::vec;
use alloc::vec::Vec;

/// Number of multisets of the given size over `items` elements, saturating.
pub fn multiset_count(items: u64, size: u64) -> u128 {
    if size == 0 {
        return 1;
    }
    if items == 0 {
        return 0;
    }
    // C(items + size - 1, size)
    let top = items as u128 + size as u128 - 1;
    let r = size.min(items - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul(top - i) {
            Some(x) => x / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Lexicographic iterator over nondecreasing sequences of length `size` with
/// entries in `0..items`.
#[derive(Debug, Clone)]
pub struct Multisets {
    items: usize,
    current: Option<Vec<usize>>,
}

impl Multisets {
    pub fn new(items: usize, size: usize) -> Self {
        let current = if size > 0 && items == 0 {
            None
        } else {
            Some(vec![0; size])
        };
        Multisets { items, current }
    }

    /// Starts at `start`, which must itself be nondecreasing.
    pub fn starting_at(items: usize, start: Vec<usize>) -> Self {
        debug_assert!(start.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(start.iter().all(|&x| x < items));
        Multisets {
            items,
            current: Some(start),
        }
    }
}

/// Advances `seq` to the next nondecreasing sequence; false when exhausted.
pub fn advance(seq: &mut [usize], items: usize) -> bool {
    let mut i = seq.len();
    while i > 0 {
        i -= 1;
        if seq[i] + 1 < items {
            let v = seq[i] + 1;
            for x in &mut seq[i..] {
                *x = v;
            }
            return true;
        }
    }
    false
}

impl Iterator for Multisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let mut nxt = cur.clone();
        if advance(&mut nxt, self.items) {
            self.current = Some(nxt);
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_enumeration() {
        for items in 0..6usize {
            for size in 0..6usize {
                let n = Multisets::new(items, size).count() as u128;
                assert_eq!(n, multiset_count(items as u64, size as u64), "{items} {size}");
            }
        }
        assert_eq!(multiset_count(4, 9), 220);
        assert_eq!(multiset_count(3, 4), 15);
        assert_eq!(multiset_count(31, 7), 10_295_472);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<_> = Multisets::new(3, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]
        );
        let tail: Vec<_> = Multisets::starting_at(3, vec![1, 2]).collect();
        assert_eq!(tail, vec![vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn saturates() {
        assert_eq!(multiset_count(1 << 40, 40), u128::MAX);
    }
}
