//! Rank of dense matrices over Z/2.

/// A dense Z/2 matrix stored as packed bit rows.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    /// Appends a row with ones at the given column positions. Repeated
    /// positions cancel.
    pub fn push_row<I: IntoIterator<Item = usize>>(&mut self, ones: I) {
        let mut row = vec![0u64; self.cols.div_ceil(64)];
        for c in ones {
            assert!(c < self.cols);
            row[c / 64] ^= 1 << (c % 64);
        }
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Gaussian elimination on a copy of the rows.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank];
            for row in tail.iter_mut() {
                if row[w] & b != 0 {
                    for (x, y) in row.iter_mut().zip(prow) {
                        *x ^= *y;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}
