use super::word::BitWord;
use crate::error::{invalid, Result};

/// A dense binary matrix stored as a list of row words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinMatrix {
    cols: usize,
    rows: Vec<BitWord>,
}

/// Reduced row-echelon form together with the pivot column of each row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<BitWord>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    /// Reduces `word` against the echelon basis; the result is zero iff
    /// `word` lies in the row space.
    pub fn reduce(&self, word: &BitWord) -> BitWord {
        let mut w = word.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w.get(p) {
                w.xor_assign(row);
            }
        }
        w
    }

    pub fn contains(&self, word: &BitWord) -> bool {
        self.reduce(word).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

impl BinMatrix {
    /// All rows must have length `cols`.
    pub fn new(cols: usize, rows: Vec<BitWord>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(invalid(format!(
                "row of length {} in matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(BinMatrix { cols, rows })
    }

    pub fn zero_rows(cols: usize) -> Self {
        BinMatrix { cols, rows: vec![] }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitWord] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitWord {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// Column `c` as a word of length `n_rows`.
    pub fn column(&self, c: usize) -> BitWord {
        let mut w = BitWord::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                w.set(r, true);
            }
        }
        w
    }

    /// Gauss-Jordan elimination over GF(2). Zero rows are dropped.
    pub fn echelon(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(found) = (next..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, in increasing
    /// order of the free column.
    pub fn null_space(&self) -> BinMatrix {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitWord::zeros(self.cols);
            v.set(free, true);
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        BinMatrix {
            cols: self.cols,
            rows: basis,
        }
    }

    /// `self · otherᵀ`, an `n_rows × other.n_rows` matrix.
    pub fn mul_transpose(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.cols {
            return Err(invalid("column count mismatch in product"));
        }
        let rows = self
            .rows
            .iter()
            .map(|a| {
                let mut w = BitWord::zeros(other.rows.len());
                for (j, b) in other.rows.iter().enumerate() {
                    if a.dot(b) {
                        w.set(j, true);
                    }
                }
                w
            })
            .collect();
        Ok(BinMatrix {
            cols: other.rows.len(),
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitWord::is_zero)
    }

    /// Linear combination of the rows selected by the set bits of `message`
    /// (bit `i` of `message` selects row `i`).
    pub fn combine(&self, message: u64) -> BitWord {
        let mut w = BitWord::zeros(self.cols);
        let mut m = message;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            w.xor_assign(&self.rows[i]);
            m &= m - 1;
        }
        w
    }
}
