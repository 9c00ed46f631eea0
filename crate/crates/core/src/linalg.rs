//! Exact sparse Gaussian elimination: rank, kernel and image bases, linear
//! solving, and quotient-space (homology) bases with deterministic pivoting.
//!
//! Rows are sorted coordinate lists. Pivoting is lowest-column-first with
//! first-available-row, so every reported basis is reproducible across runs.

use crate::scalar::{FieldSpec, Scalar};

pub type SparseRow = Vec<(usize, Scalar)>;

/// A sparse matrix in row-major form.
#[derive(Debug, Clone)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    pub data: Vec<SparseRow>,
}

fn row_add_scaled(field: &FieldSpec, a: &SparseRow, b: &SparseRow, c: &Scalar) -> SparseRow {
    // a + c*b, merging sorted coordinate lists
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) => {
                if ca < cb {
                    out.push((*ca, va.clone()));
                    i += 1;
                } else if cb < ca {
                    let v = field.mul(c, vb);
                    if !v.is_zero() {
                        out.push((*cb, v));
                    }
                    j += 1;
                } else {
                    let v = field.add(va, &field.mul(c, vb));
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = field.mul(c, vb);
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Mat {
        Mat { rows, cols, field, data: vec![Vec::new(); rows] }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Mat {
        let mut m = Mat::zero(rows, cols, field);
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet out of range");
            m.data[r].push((c, v));
        }
        for row in &mut m.data {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: SparseRow = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = field.add(lv, &v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let field = self.field;
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: SparseRow = Vec::new();
            for (k, v) in row {
                acc = row_add_scaled(&field, &acc, &other.data[*k], v);
            }
            data.push(acc);
        }
        Mat { rows: self.rows, cols: other.cols, field, data }
    }

    pub fn transpose(&self) -> Mat {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        Mat { rows: self.cols, cols: self.rows, field: self.field, data }
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self).pivots.len()
    }

    /// A basis of the right kernel `{ v : M v = 0 }`, echelon-lifted with
    /// lowest-index-first free variables.
    pub fn kernel_basis(&self) -> Vec<SparseRow> {
        let ech = Echelon::new(self);
        let field = self.field;
        // fully reduce: clear every pivot column from the other pivot rows,
        // then normalize pivots to one
        let mut rref: Vec<SparseRow> = Vec::new();
        for &(c, r) in ech.pivots.iter().rev() {
            let mut row = ech.rows[r].clone();
            // eliminate later pivots already in rref (they come first there)
            for done in &rref {
                let pc = done[0].0;
                if let Ok(k) = row.binary_search_by_key(&pc, |(cc, _)| *cc) {
                    let coeff = field.neg(&row[k].1.clone());
                    row = row_add_scaled(&field, &row, done, &coeff);
                }
            }
            let pv = row
                .binary_search_by_key(&c, |(cc, _)| *cc)
                .map(|i| row[i].1.clone())
                .expect("pivot entry");
            let inv = field.inv(&pv).expect("pivot nonzero");
            for (_, v) in row.iter_mut() {
                *v = field.mul(v, &inv);
            }
            rref.push(row);
        }
        rref.reverse();
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(c, _)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.binary_search(&free).is_ok() {
                continue;
            }
            let mut v: SparseRow = Vec::new();
            for row in &rref {
                if let Ok(k) = row.binary_search_by_key(&free, |(cc, _)| *cc) {
                    let coeff = field.neg(&row[k].1);
                    if !coeff.is_zero() {
                        v.push((row[0].0, coeff));
                    }
                }
            }
            v.push((free, field.one()));
            v.sort_by_key(|(c, _)| *c);
            basis.push(v);
        }
        basis
    }
}

/// Row-echelon form of a matrix, reusable for rank, membership and solving.
pub struct Echelon {
    field: FieldSpec,
    /// rows in echelon order
    pub rows: Vec<SparseRow>,
    /// (pivot column, row index into `rows`), sorted by column
    pub pivots: Vec<(usize, usize)>,
}

impl Echelon {
    pub fn new(m: &Mat) -> Echelon {
        Echelon::from_rows(m.field, m.data.clone())
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<SparseRow>) -> Echelon {
        let mut ech = Echelon { field, rows: Vec::new(), pivots: Vec::new() };
        for row in rows {
            ech.insert_row(row);
        }
        ech
    }

    /// Reduce `row` against the current echelon rows; if a nonzero remainder
    /// survives it becomes a new pivot row. Returns true if the row was
    /// independent of the rows already present.
    pub fn insert_row(&mut self, row: SparseRow) -> bool {
        let rem = self.reduce(row);
        match rem.first() {
            None => false,
            Some((c, _)) => {
                let c = *c;
                let idx = self.rows.len();
                self.rows.push(rem);
                let at = self.pivots.partition_point(|&(pc, _)| pc < c);
                self.pivots.insert(at, (c, idx));
                true
            }
        }
    }

    /// Remainder of `row` after elimination by the stored pivot rows.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let lead = match row.first() {
                None => return row,
                Some((c, _)) => *c,
            };
            let hit = self
                .pivots
                .binary_search_by_key(&lead, |&(c, _)| c)
                .ok()
                .map(|i| self.pivots[i].1);
            match hit {
                None => return row,
                Some(r) => {
                    let prow = &self.rows[r];
                    let pv = &prow[0].1;
                    let c = self
                        .field
                        .neg(&self.field.div(&row[0].1, pv).expect("pivot nonzero"));
                    row = row_add_scaled(&self.field, &row, prow, &c);
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }
}

/// Solves `M x = b` for one right-hand side, returning any solution.
/// Treats columns of `M` as generators; returns coefficients.
pub fn solve(m: &Mat, b: &SparseRow) -> Option<SparseRow> {
    // Eliminate on the augmented transpose: rows are generators.
    let field = m.field;
    let cols_as_rows = m.transpose();
    let mut ech_rows: Vec<SparseRow> = Vec::new();
    // augmented row: generator row with tag column m.rows + i marking coefficient i
    for (i, row) in cols_as_rows.data.iter().enumerate() {
        let mut aug = row.clone();
        aug.push((m.rows + i, field.one()));
        ech_rows.push(aug);
    }
    let mut ech = Echelon { field, rows: Vec::new(), pivots: Vec::new() };
    for row in ech_rows {
        ech.insert_row(row);
    }
    // reduce b; if remainder supported entirely on tag columns, read coefficients
    let rem = ech.reduce(b.clone());
    if rem.iter().any(|(c, _)| *c < m.rows) {
        return None;
    }
    let coeffs: SparseRow = rem
        .into_iter()
        .map(|(c, v)| (c - m.rows, field.neg(&v)))
        .collect();
    Some(coeffs)
}

/// Dense inverse of a small matrix given row-major entries; `None` if singular.
pub fn invert_dense(field: &FieldSpec, n: usize, entries: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(entries.len(), n * n);
    let mut a: Vec<Scalar> = entries.to_vec();
    let mut inv: Vec<Scalar> = (0..n * n)
        .map(|i| if i / n == i % n { field.one() } else { field.zero() })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let pv = a[col * n + col].clone();
        let pv_inv = field.inv(&pv).ok()?;
        for j in 0..n {
            a[col * n + j] = field.mul(&a[col * n + j], &pv_inv);
            inv[col * n + j] = field.mul(&inv[col * n + j], &pv_inv);
        }
        for r in 0..n {
            if r == col || a[r * n + col].is_zero() {
                continue;
            }
            let f = a[r * n + col].clone();
            for j in 0..n {
                let t = field.mul(&f, &a[col * n + j]);
                a[r * n + j] = field.sub(&a[r * n + j], &t);
                let t = field.mul(&f, &inv[col * n + j]);
                inv[r * n + j] = field.sub(&inv[r * n + j], &t);
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f101() -> FieldSpec {
        FieldSpec::prime(101).unwrap()
    }

    fn mat(rows: usize, cols: usize, entries: &[i64]) -> Mat {
        let field = f101();
        Mat::from_triplets(
            rows,
            cols,
            field,
            entries.iter().enumerate().filter_map(|(i, &v)| {
                if v == 0 {
                    None
                } else {
                    Some((i / cols, i % cols, field.from_i64(v)))
                }
            }),
        )
    }

    #[test]
    fn rank_kernel_solve() {
        // rank-2 matrix with 1-dim kernel spanned by (1,1,-1)
        let m = mat(3, 3, &[1, 0, 1, 0, 1, 1, 1, 1, 2]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            // check M v = 0
            let field = m.field;
            for row in &m.data {
                let mut acc = field.zero();
                for (c, rv) in row {
                    if let Ok(i) = v.binary_search_by_key(c, |(cc, _)| *cc) {
                        acc = field.add(&acc, &field.mul(rv, &v[i].1));
                    }
                }
                assert!(acc.is_zero());
            }
        }
        let b = vec![(0, f101().from_i64(2)), (1, f101().from_i64(3)), (2, f101().from_i64(5))];
        let x = solve(&m, &b).expect("consistent");
        // verify M x = b
        let field = m.field;
        for (r, row) in m.data.iter().enumerate() {
            let mut acc = field.zero();
            for (c, rv) in row {
                if let Ok(i) = x.binary_search_by_key(c, |(cc, _)| *cc) {
                    acc = field.add(&acc, &field.mul(rv, &x[i].1));
                }
            }
            let want = b
                .binary_search_by_key(&r, |(rr, _)| *rr)
                .map(|i| b[i].1.clone())
                .unwrap_or_else(|_| field.zero());
            assert_eq!(acc, want);
        }
        // inconsistent rhs
        let bad = vec![(0, f101().one())];
        let m2 = mat(2, 1, &[0, 0]);
        assert!(solve(&m2, &bad).is_none());
    }

    #[test]
    fn dense_inverse() {
        let field = f101();
        let g = [field.from_i64(0), field.from_i64(1), field.from_i64(1), field.from_i64(0)];
        let inv = invert_dense(&field, 2, &g).unwrap();
        assert_eq!(inv[0], field.zero());
        assert_eq!(inv[1], field.one());
        let sing = [field.one(), field.zero(), field.zero(), field.zero()];
        assert!(invert_dense(&field, 2, &sing).is_none());
    }

    #[test]
    fn rank_over_q() {
        let field = FieldSpec::rational();
        let m = Mat::from_triplets(
            2,
            2,
            field,
            vec![
                (0, 0, field.parse_scalar("1/2").unwrap()),
                (0, 1, field.from_i64(1)),
                (1, 0, field.from_i64(1)),
                (1, 1, field.from_i64(2)),
            ],
        );
        assert_eq!(m.rank(), 1);
    }
}
