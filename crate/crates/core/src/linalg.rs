//! Small dense square matrices over a [`CharPRing`].

use crate::ring::CharPRing;

#[derive(Debug, Clone)]
pub struct Matrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: CharPRing> Matrix<R> {
    pub fn zeros(like: &R, n: usize) -> Self {
        Matrix {
            n,
            data: vec![like.zero_like(); n * n],
        }
    }

    pub fn identity(like: &R, n: usize) -> Self {
        Self::scalar(&like.one_like(), n)
    }

    pub fn scalar(c: &R, n: usize) -> Self {
        let mut m = Self::zeros(c, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(cols: Vec<Vec<R>>) -> Self {
        let n = cols.len();
        assert!(cols.iter().all(|c| c.len() == n), "square matrix expected");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for col in &cols {
                data.push(col[i].clone());
            }
        }
        Matrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add_ref(b))
            .collect();
        Matrix { n: self.n, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.sub_ref(b))
            .collect();
        Matrix { n: self.n, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(&self.data[0], n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_exact_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add_ref(&a.mul_ref(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(&self.data[0], self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.approx_eq(b))
    }

    /// Determinant by expansion over column subsets: `n·2^n` products, no divisions,
    /// so precision propagates exactly through ring operations.
    pub fn det(&self) -> R {
        let n = self.n;
        assert!(n <= 20, "subset expansion is limited to n <= 20");
        let zero = self.data[0].zero_like();
        let mut table: Vec<Option<R>> = vec![None; 1 << n];
        table[0] = Some(self.data[0].one_like());
        for mask in 0..(1usize << n) {
            let Some(partial) = table[mask].take() else {
                continue;
            };
            let row = mask.count_ones() as usize;
            if row == n {
                return partial;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    continue;
                }
                let entry = self.get(row, col);
                if entry.is_exact_zero() {
                    continue;
                }
                // sign of inserting `col` after the columns already used that exceed it
                let above = (mask >> (col + 1)).count_ones();
                let mut term = partial.mul_ref(entry);
                if above % 2 == 1 {
                    term = term.neg_ref();
                }
                let next = mask | (1 << col);
                table[next] = Some(match table[next].take() {
                    Some(acc) => acc.add_ref(&term),
                    None => term,
                });
            }
        }
        zero
    }
}
