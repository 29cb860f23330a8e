use std::cmp::Ordering;

use super::Corpus;
use crate::error::{Error, Result};

pub const DEFAULT_K: usize = 10;

/// Nearest-neighbour index over the corpus price deltas under `|a - b|`.
///
/// Neighbours are ranked by `(distance, row index)`, which is exactly the
/// order a stable linear scan produces.
#[derive(Debug, Clone)]
pub struct KnnIndex {
    /// `(dx, row)` sorted by value then row.
    sorted: Vec<(f64, usize)>,
}

impl KnnIndex {
    pub fn build(corpus: &Corpus) -> Self {
        let mut sorted: Vec<(f64, usize)> = corpus.rows.iter().enumerate().map(|(i, r)| (r.dx, i)).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        KnnIndex { sorted }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Row indices of the `k` nearest neighbours of `x`, closest first.
    pub fn query(&self, x: f64, k: usize) -> Result<Vec<usize>> {
        if k == 0 {
            return Err(Error::config("k", "must be at least 1"));
        }
        if k > self.sorted.len() {
            return Err(Error::CorpusTooSmall {
                needed: k,
                available: self.sorted.len(),
            });
        }
        if !x.is_finite() {
            return Err(Error::NonFinite("neighbour query"));
        }
        let split = self.sorted.partition_point(|&(v, _)| v < x);
        let mut left = Side::new(&self.sorted, split, x, false);
        let mut right = Side::new(&self.sorted, split, x, true);
        let mut out = Vec::with_capacity(k);
        let mut merged = Vec::new();
        while out.len() < k {
            let order = match (left.dist(), right.dist()) {
                (Some(l), Some(r)) => l.total_cmp(&r),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => break,
            };
            merged.clear();
            match order {
                Ordering::Less => left.take_group(&mut merged),
                Ordering::Greater => right.take_group(&mut merged),
                Ordering::Equal => {
                    left.take_group(&mut merged);
                    right.take_group(&mut merged);
                }
            }
            merged.sort_unstable();
            let room = k - out.len();
            out.extend(merged.iter().take(room));
        }
        Ok(out)
    }
}

/// One direction of the outward scan from the query point. Entries at equal
/// distance form a group and are released together.
struct Side<'a> {
    sorted: &'a [(f64, usize)],
    x: f64,
    upward: bool,
    /// Next position to visit: an index for the upward side, one past it for
    /// the downward side.
    pos: usize,
}

impl<'a> Side<'a> {
    fn new(sorted: &'a [(f64, usize)], split: usize, x: f64, upward: bool) -> Self {
        Side {
            sorted,
            x,
            upward,
            pos: split,
        }
    }

    fn peek(&self) -> Option<(f64, usize)> {
        if self.upward {
            self.sorted.get(self.pos).copied()
        } else if self.pos > 0 {
            Some(self.sorted[self.pos - 1])
        } else {
            None
        }
    }

    fn advance(&mut self) {
        if self.upward {
            self.pos += 1;
        } else {
            self.pos -= 1;
        }
    }

    fn dist(&self) -> Option<f64> {
        self.peek().map(|(v, _)| (v - self.x).abs())
    }

    fn take_group(&mut self, into: &mut Vec<usize>) {
        let Some(d) = self.dist() else { return };
        while self.dist() == Some(d) {
            let (_, row) = self.peek().expect("distance implies an entry");
            into.push(row);
            self.advance();
        }
    }
}

/// Means of the interest deltas over the `k` rows whose price delta is
/// closest to `dx`, summed in neighbour order.
pub fn conditional_expectation(index: &KnnIndex, corpus: &Corpus, dx: f64, k: usize) -> Result<(f64, f64)> {
    if index.len() != corpus.len() {
        return Err(Error::config("index", "was not built from this corpus"));
    }
    let rows = index.query(dx, k)?;
    let (sb, sa) = rows.iter().fold((0.0, 0.0), |(sb, sa), &i| {
        let r = &corpus.rows[i];
        (sb + r.dvb, sa + r.dva)
    });
    Ok((sb / k as f64, sa / k as f64))
}
