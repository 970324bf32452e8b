use rayon::prelude::*;

use super::word::BitWord;
use super::LinearCode;

/// Streaming codeword iterator over a message-counter range, Gray-code order.
///
/// Step `i` yields the codeword of message `i ^ (i >> 1)`, so consecutive
/// words differ by a single generator row. Memory use is one word.
pub struct Codewords<'a> {
    code: &'a LinearCode,
    next: u64,
    end: u64,
    current: BitWord,
}

#[inline]
pub(crate) fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

impl<'a> Codewords<'a> {
    /// Codewords for counters in `start..end`. The caller guarantees the
    /// range lies within `0..2^dimension`.
    pub fn new(code: &'a LinearCode, start: u64, end: u64) -> Self {
        debug_assert!(code.dimension() < 64);
        debug_assert!(end <= 1u64 << code.dimension());
        Codewords {
            code,
            next: start,
            end,
            current: code.encode(gray(start)),
        }
    }
}

impl Iterator for Codewords<'_> {
    type Item = BitWord;

    fn next(&mut self) -> Option<BitWord> {
        if self.next >= self.end {
            return None;
        }
        let out = self.current.clone();
        self.next += 1;
        if self.next < self.end {
            let row = self.next.trailing_zeros() as usize;
            self.current.xor_assign(self.code.generator().row(row));
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Codewords<'_> {}

/// Shards below this many words are not split further.
const SHARD: u64 = 1 << 14;

/// Folds every codeword of messages `0..total` in parallel shards and merges
/// the shard accumulators with `merge`, which must be associative and
/// commutative so the result is independent of the split.
pub(crate) fn par_fold_ranges<A, I, F, M>(
    code: &LinearCode,
    total: u64,
    init: I,
    fold: F,
    merge: M,
) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &BitWord) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let shards = total.div_ceil(SHARD);
    (0..shards)
        .into_par_iter()
        .map(|s| {
            let start = s * SHARD;
            let end = (start + SHARD).min(total);
            let mut acc = init();
            let mut cur = code.encode(gray(start));
            fold(&mut acc, &cur);
            for i in start + 1..end {
                cur.xor_assign(code.generator().row(i.trailing_zeros() as usize));
                fold(&mut acc, &cur);
            }
            acc
        })
        .reduce(&init, &merge)
}
