//! Dense oracle: an independent implementation of the same differentials,
//! used to freeze dimension tables before trusting the sparse path. Plain
//! dense matrices, its own word enumeration and its own elimination; shares
//! only the scalar arithmetic with the crate under test.

use sghh_core::algebra::AlgebraPresentation;
use sghh_core::scalar::{FieldSpec, Scalar};

pub struct DenseMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl DenseMat {
    pub fn zero(field: &FieldSpec, rows: usize, cols: usize) -> DenseMat {
        DenseMat { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn add_at(&mut self, field: &FieldSpec, r: usize, c: usize, v: &Scalar) {
        let e = &mut self.data[r * self.cols + c];
        *e = field.add(e, v);
    }

    pub fn rank(&self, field: &FieldSpec) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&r| !m[r * cols + col].is_zero());
            let Some(pivot) = pivot else { continue };
            for j in 0..cols {
                m.swap(rank * cols + j, pivot * cols + j);
            }
            let inv = field.inv(&m[rank * cols + col]).expect("pivot");
            for j in 0..cols {
                m[rank * cols + j] = field.mul(&m[rank * cols + j], &inv);
            }
            for r in 0..rows {
                if r != rank && !m[r * cols + col].is_zero() {
                    let f = m[r * cols + col].clone();
                    for j in 0..cols {
                        let t = field.mul(&f, &m[rank * cols + j]);
                        m[r * cols + j] = field.sub(&m[r * cols + j], &t);
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    pub fn mul(&self, field: &FieldSpec, other: &DenseMat) -> DenseMat {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMat::zero(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = field.mul(a, &other.data[k * other.cols + j]);
                    out.add_at(field, i, j, &t);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// dense right kernel, as column vectors
    pub fn kernel(&self, field: &FieldSpec) -> Vec<Vec<Scalar>> {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&r| !m[r * cols + col].is_zero());
            let Some(pivot) = pivot else { continue };
            for j in 0..cols {
                m.swap(rank * cols + j, pivot * cols + j);
            }
            let inv = field.inv(&m[rank * cols + col]).expect("pivot");
            for j in 0..cols {
                m[rank * cols + j] = field.mul(&m[rank * cols + j], &inv);
            }
            for r in 0..rows {
                if r != rank && !m[r * cols + col].is_zero() {
                    let f = m[r * cols + col].clone();
                    for j in 0..cols {
                        let t = field.mul(&f, &m[rank * cols + j]);
                        m[r * cols + j] = field.sub(&m[r * cols + j], &t);
                    }
                }
            }
            pivots.push((rank, col));
            rank += 1;
            if rank == rows {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for &(r, c) in &pivots {
                v[c] = field.neg(&m[r * cols + free]);
            }
            basis.push(v);
        }
        basis
    }
}

/// All words over letters `1..d` of the given length, lexicographic.
pub fn words(d: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for l in 1..d {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

fn mul_elem(alg: &AlgebraPresentation, i: u32, j: u32) -> Vec<Scalar> {
    let mut out = vec![alg.field.zero(); alg.dim as usize];
    for (k, c) in alg.basis_mul(i, j) {
        out[*k as usize] = alg.field.add(&out[*k as usize], c);
    }
    out
}

/// Index of a coefficient-and-word pair in the dense basis of
/// `A (x) (s Abar)^(x) p`.
fn form_index(d: u32, p: usize, coeff: usize, word: &[u32], word_list: &[Vec<u32>]) -> usize {
    let _ = (d, p);
    let wi = word_list.iter().position(|w| w == word).expect("word");
    coeff * word_list.len() + wi
}

/// Dense coordinates of `(e_c (x) word) <| e_a` in `A (x) Abar^(x) n`,
/// computed directly from the alternating-contraction formula.
fn oracle_right_action(
    alg: &AlgebraPresentation,
    coeff: u32,
    word: &[u32],
    a: u32,
    out_words: &[Vec<u32>],
) -> Vec<Scalar> {
    let field = alg.field;
    let d = alg.dim;
    let n = word.len();
    let dim = d as usize * out_words.len();
    let mut out = vec![field.zero(); dim];
    for i in 0..=n {
        let sign = if (n - i) % 2 == 0 { field.one() } else { field.neg(&field.one()) };
        if i == 0 {
            if n == 0 {
                let prod = mul_elem(alg, coeff, a);
                for (k, c) in prod.iter().enumerate() {
                    let idx = form_index(d, n, k, &[], out_words);
                    out[idx] = field.add(&out[idx], &field.mul(&sign, c));
                }
            } else {
                let prod = mul_elem(alg, coeff, word[0]);
                for (k, c) in prod.iter().enumerate() {
                    if c.is_zero() || a == 0 {
                        continue;
                    }
                    let mut w: Vec<u32> = word[1..].to_vec();
                    w.push(a);
                    let idx = form_index(d, n, k, &w, out_words);
                    out[idx] = field.add(&out[idx], &field.mul(&sign, c));
                }
            }
        } else if i < n {
            let prod = mul_elem(alg, word[i - 1], word[i]);
            for (k, c) in prod.iter().enumerate().skip(1) {
                if c.is_zero() || a == 0 {
                    continue;
                }
                let mut w: Vec<u32> = word[..i - 1].to_vec();
                w.push(k as u32);
                w.extend_from_slice(&word[i + 1..]);
                w.push(a);
                let idx = form_index(d, n, coeff as usize, &w, out_words);
                out[idx] = field.add(&out[idx], &field.mul(&sign, c));
            }
        } else {
            let prod = mul_elem(alg, word[n - 1], a);
            for (k, c) in prod.iter().enumerate().skip(1) {
                if c.is_zero() {
                    continue;
                }
                let mut w: Vec<u32> = word[..n - 1].to_vec();
                w.push(k as u32);
                let idx = form_index(d, n, coeff as usize, &w, out_words);
                out[idx] = field.add(&out[idx], &field.mul(&sign, c));
            }
        }
    }
    out
}

/// The dense cochain differential from arity `m` to `m + 1` at form degree
/// `p`, flat index = input-word * (coefficient * form-word).
pub fn oracle_delta(alg: &AlgebraPresentation, m: usize, p: usize) -> DenseMat {
    let field = alg.field;
    let d = alg.dim;
    let in_words = words(d, m);
    let out_in_words = words(d, m + 1);
    let form_words = words(d, p);
    let form_dim = d as usize * form_words.len();
    let dom = in_words.len() * form_dim;
    let cod = out_in_words.len() * form_dim;
    let mut mat = DenseMat::zero(&field, cod, dom);
    let deg = m as i64 - p as i64;
    let global = if (deg + 1).rem_euclid(2) == 0 { field.one() } else { field.neg(&field.one()) };
    for (ui, u) in out_in_words.iter().enumerate() {
        // leading left multiplication
        {
            let rest: Vec<u32> = u[1..].to_vec();
            let wi = in_words.iter().position(|w| *w == rest).unwrap();
            for coeff in 0..d as usize {
                for (fw_i, fw) in form_words.iter().enumerate() {
                    let col = wi * form_dim + coeff * form_words.len() + fw_i;
                    let prod = mul_elem(alg, u[0], coeff as u32);
                    for (k, c) in prod.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let row = ui * form_dim + form_index(d, p, k, fw, &form_words);
                        mat.add_at(&field, row, col, &field.mul(&global, c));
                    }
                }
            }
        }
        // inner contractions
        for j in 1..=m {
            let sgn = if j % 2 == 0 { field.one() } else { field.neg(&field.one()) };
            let sgn = field.mul(&global, &sgn);
            let prod = mul_elem(alg, u[j - 1], u[j]);
            for (k, c) in prod.iter().enumerate().skip(1) {
                if c.is_zero() {
                    continue;
                }
                let mut w: Vec<u32> = u[..j - 1].to_vec();
                w.push(k as u32);
                w.extend_from_slice(&u[j + 1..]);
                let wi = in_words.iter().position(|q| *q == w).unwrap();
                for flat in 0..form_dim {
                    let col = wi * form_dim + flat;
                    let row = ui * form_dim + flat;
                    mat.add_at(&field, row, col, &field.mul(&sgn, c));
                }
            }
        }
        // trailing right action
        {
            let sgn = if (m + 1) % 2 == 0 { field.one() } else { field.neg(&field.one()) };
            let sgn = field.mul(&global, &sgn);
            let front: Vec<u32> = u[..m].to_vec();
            let wi = in_words.iter().position(|w| *w == front).unwrap();
            for coeff in 0..d {
                for (fw_i, fw) in form_words.iter().enumerate() {
                    let col = wi * form_dim + coeff as usize * form_words.len() + fw_i;
                    let acted = oracle_right_action(alg, coeff, fw, u[m], &form_words);
                    for (flat, c) in acted.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let row = ui * form_dim + flat;
                        mat.add_at(&field, row, col, &field.mul(&sgn, c));
                    }
                }
            }
        }
    }
    mat
}

/// Cohomology dimensions of one cochain level over a degree range.
pub fn oracle_h_dims(alg: &AlgebraPresentation, p: usize, lo: i64, hi: i64) -> Vec<(i64, usize)> {
    let field = alg.field;
    let d = alg.dim;
    let form_dim = d as usize * words(d, p).len();
    let mut out = Vec::new();
    for deg in lo..=hi {
        let m = deg + p as i64;
        if m < 0 {
            out.push((deg, 0));
            continue;
        }
        let m = m as usize;
        let dim = words(d, m).len() * form_dim;
        let rk_out = oracle_delta(alg, m, p).rank(&field);
        let rk_in = if m == 0 { 0 } else { oracle_delta(alg, m - 1, p).rank(&field) };
        out.push((deg, dim - rk_out - rk_in));
    }
    out
}

/// Dense basis of the centralizer space inside `A (x) A`.
pub fn oracle_a_dual(alg: &AlgebraPresentation) -> Vec<Vec<Scalar>> {
    let field = alg.field;
    let d = alg.dim as usize;
    let mut mat = DenseMat::zero(&field, d * d * d, d * d);
    for a in 0..d as u32 {
        for u in 0..d as u32 {
            for v in 0..d as u32 {
                let col = u as usize * d + v as usize;
                for (k, c) in alg.basis_mul(a, u) {
                    mat.add_at(&field, a as usize * d * d + *k as usize * d + v as usize, col, c);
                }
                for (k, c) in alg.basis_mul(v, a) {
                    mat.add_at(
                        &field,
                        a as usize * d * d + u as usize * d + *k as usize,
                        col,
                        &field.neg(c),
                    );
                }
            }
        }
    }
    mat.kernel(&field)
}

/// Dense matrix of the chain differential for coefficients in the
/// centralizer space (columns indexed by coefficient-basis x word).
pub fn oracle_b_matrix(
    alg: &AlgebraPresentation,
    adual: &[Vec<Scalar>],
    n: usize,
) -> DenseMat {
    let field = alg.field;
    let d = alg.dim;
    let in_words = words(d, n);
    let out_words = words(d, n - 1);
    let t = adual.len();
    let mut mat = DenseMat::zero(&field, t * out_words.len(), t * in_words.len());
    // dense action solve: express a tensor (in the centralizer) in the basis
    let dd = d as usize;
    let gens = {
        let mut g = DenseMat::zero(&field, dd * dd, t);
        for (j, v) in adual.iter().enumerate() {
            for (i, c) in v.iter().enumerate() {
                g.add_at(&field, i, j, c);
            }
        }
        g
    };
    let solve = |rhs: &[Scalar]| -> Vec<Scalar> {
        // [gens | rhs] elimination
        let mut aug = DenseMat::zero(&field, dd * dd, t + 1);
        for r in 0..dd * dd {
            for c in 0..t {
                aug.data[r * (t + 1) + c] = gens.data[r * t + c].clone();
            }
            aug.data[r * (t + 1) + t] = rhs[r].clone();
        }
        let mut m = aug.data;
        let cols = t + 1;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..t {
            let pivot = (rank..dd * dd).find(|&r| !m[r * cols + col].is_zero());
            let Some(pivot) = pivot else { continue };
            for j in 0..cols {
                m.swap(rank * cols + j, pivot * cols + j);
            }
            let inv = field.inv(&m[rank * cols + col]).expect("pivot");
            for j in 0..cols {
                m[rank * cols + j] = field.mul(&m[rank * cols + j], &inv);
            }
            for r in 0..dd * dd {
                if r != rank && !m[r * cols + col].is_zero() {
                    let f = m[r * cols + col].clone();
                    for j in 0..cols {
                        let tt = field.mul(&f, &m[rank * cols + j]);
                        m[r * cols + j] = field.sub(&m[r * cols + j], &tt);
                    }
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        let mut out = vec![field.zero(); t];
        for &(r, c) in &pivots {
            out[c] = m[r * cols + t].clone();
        }
        out
    };
    let tensor_right = |ti: usize, a: u32| -> Vec<Scalar> {
        // (sum x (x) y) . e_a = sum (x e_a) (x) y
        let mut out = vec![field.zero(); dd * dd];
        for x in 0..dd {
            for y in 0..dd {
                let c = &adual[ti][x * dd + y];
                if c.is_zero() {
                    continue;
                }
                for (k, s) in alg.basis_mul(x as u32, a) {
                    out[*k as usize * dd + y] =
                        field.add(&out[*k as usize * dd + y], &field.mul(c, s));
                }
            }
        }
        out
    };
    let tensor_left = |ti: usize, a: u32| -> Vec<Scalar> {
        // e_a . (sum x (x) y) = sum x (x) (e_a y)
        let mut out = vec![field.zero(); dd * dd];
        for x in 0..dd {
            for y in 0..dd {
                let c = &adual[ti][x * dd + y];
                if c.is_zero() {
                    continue;
                }
                for (k, s) in alg.basis_mul(a, y as u32) {
                    out[x * dd + *k as usize] =
                        field.add(&out[x * dd + *k as usize], &field.mul(c, s));
                }
            }
        }
        out
    };
    for (wi, w) in in_words.iter().enumerate() {
        for ti in 0..t {
            let col = ti * in_words.len() + wi;
            // leading: m . a_1
            {
                let coords = solve(&tensor_right(ti, w[0]));
                let rest: Vec<u32> = w[1..].to_vec();
                let owi = out_words.iter().position(|q| *q == rest).unwrap();
                for (tk, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        mat.add_at(&field, tk * out_words.len() + owi, col, c);
                    }
                }
            }
            // inner contractions
            for j in 1..n {
                let sgn = if j % 2 == 0 { field.one() } else { field.neg(&field.one()) };
                let prod = mul_elem(alg, w[j - 1], w[j]);
                for (k, c) in prod.iter().enumerate().skip(1) {
                    if c.is_zero() {
                        continue;
                    }
                    let mut w2: Vec<u32> = w[..j - 1].to_vec();
                    w2.push(k as u32);
                    w2.extend_from_slice(&w[j + 1..]);
                    let owi = out_words.iter().position(|q| *q == w2).unwrap();
                    mat.add_at(
                        &field,
                        ti * out_words.len() + owi,
                        col,
                        &field.mul(&sgn, c),
                    );
                }
            }
            // trailing: (-1)^n a_n . m
            {
                let sgn = if n % 2 == 0 { field.one() } else { field.neg(&field.one()) };
                let coords = solve(&tensor_left(ti, w[n - 1]));
                let front: Vec<u32> = w[..n - 1].to_vec();
                let owi = out_words.iter().position(|q| *q == front).unwrap();
                for (tk, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        mat.add_at(
                            &field,
                            tk * out_words.len() + owi,
                            col,
                            &field.mul(&sgn, c),
                        );
                    }
                }
            }
        }
    }
    mat
}

/// Dense dimensions of the generalized Tate-Hochschild cohomology (raw
/// coefficients), junction included.
pub fn oracle_th_dims(alg: &AlgebraPresentation, lo: i64, hi: i64) -> Vec<(i64, usize)> {
    let field = alg.field;
    let d = alg.dim;
    let adual = oracle_a_dual(alg);
    let t = adual.len();
    let dd = d as usize;
    // mu: centralizer basis -> A
    let mu = {
        let mut m = DenseMat::zero(&field, dd, t);
        for (j, v) in adual.iter().enumerate() {
            for x in 0..dd {
                for y in 0..dd {
                    let c = &v[x * dd + y];
                    if c.is_zero() {
                        continue;
                    }
                    for (k, s) in alg.basis_mul(x as u32, y as u32) {
                        m.add_at(&field, *k as usize, j, &field.mul(c, s));
                    }
                }
            }
        }
        m
    };
    let diff = |i: i64| -> DenseMat {
        if i >= 0 {
            oracle_delta(alg, i as usize, 0)
        } else if i == -1 {
            DenseMat { rows: mu.rows, cols: mu.cols, data: mu.data.clone() }
        } else {
            oracle_b_matrix(alg, &adual, (-i - 1) as usize)
        }
    };
    let space_dim = |i: i64| -> usize {
        if i >= 0 {
            words(d, i as usize).len() * dd
        } else {
            t * words(d, (-i - 1) as usize).len()
        }
    };
    let mut out = Vec::new();
    for i in lo..=hi {
        let d_out = diff(i);
        let d_in = diff(i - 1);
        assert!(d_out.mul(&field, &d_in).is_zero(), "oracle differential square");
        out.push((i, space_dim(i) - d_out.rank(&field) - d_in.rank(&field)));
    }
    out
}
