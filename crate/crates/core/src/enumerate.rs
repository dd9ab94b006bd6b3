//! Deterministic enumeration of integer tuples.
//!
//! [`Spiral`] walks `Z^k` outward by max-norm shells. Each coordinate is
//! ranked `0, 1, -1, 2, -2, ...` and tuples inside one shell are listed in
//! lexicographic order of their rank vectors, first coordinate most
//! significant. [`BoxIter`] lists `[-N, N]^k` lexicographically.

use alloc::vec;
use alloc::vec::Vec;

/// Integer with the given position in `0, 1, -1, 2, -2, ...`.
pub fn from_rank(rank: u64) -> i64 {
    let m = rank.div_ceil(2) as i64;
    if rank % 2 == 1 {
        m
    } else {
        -m
    }
}

/// Position of `v` in `0, 1, -1, 2, -2, ...`.
pub fn rank_of(v: i64) -> u64 {
    match v {
        0 => 0,
        v if v > 0 => 2 * v as u64 - 1,
        v => 2 * v.unsigned_abs(),
    }
}

/// Resumable position of a [`Spiral`]: the next tuple to yield, as ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpiralCursor {
    pub shell: u64,
    pub ranks: Vec<u64>,
    pub done: bool,
}

#[derive(Clone, Debug)]
pub struct Spiral {
    k: usize,
    cursor: SpiralCursor,
}

impl Spiral {
    pub fn new(k: usize) -> Self {
        Spiral { k, cursor: SpiralCursor { shell: 0, ranks: vec![0; k], done: false } }
    }

    pub fn resume(cursor: SpiralCursor) -> Self {
        Spiral { k: cursor.ranks.len(), cursor }
    }

    pub fn cursor(&self) -> &SpiralCursor {
        &self.cursor
    }

    fn in_shell(ranks: &[u64], shell: u64) -> bool {
        shell == 0 || ranks.iter().any(|&r| r + 1 >= 2 * shell)
    }

    fn advance(&mut self) {
        let c = &mut self.cursor;
        if self.k == 0 {
            c.done = true;
            return;
        }
        loop {
            let top = 2 * c.shell;
            let mut i = self.k;
            loop {
                if i == 0 {
                    c.shell += 1;
                    c.ranks.iter_mut().for_each(|r| *r = 0);
                    break;
                }
                i -= 1;
                if c.ranks[i] < top {
                    c.ranks[i] += 1;
                    c.ranks[i + 1..].iter_mut().for_each(|r| *r = 0);
                    break;
                }
            }
            if Spiral::in_shell(&c.ranks, c.shell) {
                return;
            }
        }
    }
}

impl Iterator for Spiral {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.cursor.done {
            return None;
        }
        let out = self.cursor.ranks.iter().map(|&r| from_rank(r)).collect();
        self.advance();
        Some(out)
    }
}

/// Lexicographic enumeration of `[-n, n]^k`.
#[derive(Clone, Debug)]
pub struct BoxIter {
    n: i64,
    next: Option<Vec<i64>>,
}

impl BoxIter {
    pub fn new(k: usize, n: i64) -> Self {
        let next = (n >= 0).then(|| vec![-n; k]);
        BoxIter { n, next }
    }

    /// Number of points in the box.
    pub fn size(k: usize, n: i64) -> u128 {
        (2 * n as u128 + 1).pow(k as u32)
    }
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        while i > 0 {
            i -= 1;
            if succ[i] < self.n {
                succ[i] += 1;
                succ[i + 1..].iter_mut().for_each(|v| *v = -self.n);
                self.next = Some(succ);
                break;
            }
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_round_trip() {
        let seq: Vec<i64> = (0..7).map(from_rank).collect();
        assert_eq!(seq, vec![0, 1, -1, 2, -2, 3, -3]);
        for v in -20..=20 {
            assert_eq!(from_rank(rank_of(v)), v);
        }
    }

    #[test]
    fn spiral_one_dim() {
        let seq: Vec<i64> = Spiral::new(1).take(5).map(|t| t[0]).collect();
        assert_eq!(seq, vec![0, 1, -1, 2, -2]);
    }

    #[test]
    fn spiral_two_dim_shells() {
        let pts: Vec<Vec<i64>> = Spiral::new(2).take(9).collect();
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[1], vec![0, 1]);
        assert_eq!(pts[2], vec![0, -1]);
        assert_eq!(pts[3], vec![1, 0]);
        for p in &pts {
            assert!(p.iter().all(|v| v.abs() <= 1));
        }
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 9);
        let next: Vec<Vec<i64>> = Spiral::new(2).skip(9).take(16).collect();
        assert!(next.iter().all(|p| p.iter().map(|v| v.abs()).max() == Some(2)));
    }

    #[test]
    fn spiral_resumes() {
        let mut s = Spiral::new(3);
        for _ in 0..40 {
            s.next();
        }
        let resumed: Vec<_> = Spiral::resume(s.cursor().clone()).take(20).collect();
        let direct: Vec<_> = Spiral::new(3).skip(40).take(20).collect();
        assert_eq!(resumed, direct);
    }

    #[test]
    fn spiral_zero_dim() {
        assert_eq!(Spiral::new(0).count(), 1);
    }

    #[test]
    fn box_lex() {
        let pts: Vec<_> = BoxIter::new(2, 1).collect();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![-1, -1]);
        assert_eq!(pts[1], vec![-1, 0]);
        assert_eq!(pts[8], vec![1, 1]);
        assert_eq!(BoxIter::new(0, 3).count(), 1);
        assert_eq!(BoxIter::size(2, 3), 49);
    }
}
