//! Assembly of the complexes: the cochain differential with form
//! coefficients, the chain differential, the stabilization embedding theta,
//! level windows and the theta-ladder, and the generalized Tate-Hochschild
//! complex with its embedding into the ladder.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::algebra::{ADual, AlgebraPresentation, Elem, FrobeniusData};
use crate::linalg::Mat;
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::{koszul_tensor, SparseMap, SparseVec, Word, WordBasis};
use crate::{Error, KoszulConvention, Result};

/// Default cap on the dimension of any single tensor space.
pub const DEFAULT_DIM_CAP: u64 = 200_000;

/// A homogeneous cochain: a sparse linear map from an input power of the
/// unit quotient to the noncommutative `p`-forms. Its cohomological degree
/// is `arity - form`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    pub map: SparseMap,
}

impl Cochain {
    pub fn zero(alg: &AlgebraPresentation, arity: u32, form: u32) -> Cochain {
        Cochain {
            map: SparseMap::zero(alg.field, alg.inputs_basis(arity), alg.bar_basis(form)),
        }
    }

    pub fn from_map(map: SparseMap) -> Cochain {
        debug_assert!(matches!(map.domain.kind, crate::tensor::SpaceKind::Inputs { .. }));
        Cochain { map }
    }

    pub fn arity(&self) -> u32 {
        self.map.domain.letter_count()
    }

    pub fn form(&self) -> u32 {
        self.map.codomain.letter_count()
    }

    pub fn degree(&self) -> i64 {
        self.arity() as i64 - self.form() as i64
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    /// The unit of the cochain algebra: arity 0, form 0, value 1.
    pub fn unit(alg: &AlgebraPresentation) -> Cochain {
        Cochain::of_elem(alg, &alg.one_elem())
    }

    /// An algebra element as an arity-0 form-0 cochain.
    pub fn of_elem(alg: &AlgebraPresentation, a: &Elem) -> Cochain {
        let mut c = Cochain::zero(alg, 0, 0);
        for (k, s) in a.iter().enumerate() {
            if !s.is_zero() {
                c.map.add_entry(0, k as u64, s.clone());
            }
        }
        c
    }

    pub fn add_assign(&mut self, rhs: &Cochain) {
        // the zero cochain is shape-polymorphic: ill-formed insertions
        // contribute clamped-shape zero maps
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() && self.map.domain != rhs.map.domain {
            *self = rhs.clone();
            return;
        }
        self.map.add_assign(&rhs.map);
    }

    pub fn scaled(&self, c: &Scalar) -> Cochain {
        Cochain { map: self.map.scaled(c) }
    }
}

pub fn sign_scalar(field: &FieldSpec, exp: i64) -> Scalar {
    if exp.rem_euclid(2) == 0 {
        field.one()
    } else {
        field.neg(&field.one())
    }
}

/// Left multiplication by letter `l` on a form-basis word, accumulated.
fn left_mult_word(
    alg: &AlgebraPresentation,
    l: u32,
    w: &Word,
    out_basis: &WordBasis,
    acc: &mut SparseVec,
    scale: &Scalar,
) {
    let c = w.coeff.expect("form word");
    for (k, s) in alg.basis_mul(l, c) {
        let idx = out_basis.encode(&Word { coeff: Some(*k), letters: w.letters.clone() });
        acc.add_term(idx, alg.field.mul(scale, s));
    }
}

/// The cochain differential on `C^*(A, Omega^p)`, including the global
/// `(-1)^{deg+1}` normalization of the displayed formula: left
/// multiplication in front, single contractions inside, the right action at
/// the end.
pub fn cochain_delta(alg: &AlgebraPresentation, f: &Cochain) -> Cochain {
    let m = f.arity();
    let p = f.form();
    let field = alg.field;
    let mut out = Cochain::zero(alg, m + 1, p);
    let dom = alg.inputs_basis(m + 1);
    let inner = alg.inputs_basis(m);
    let out_basis = alg.bar_basis(p);
    let global = sign_scalar(&field, f.degree() + 1);
    for u_idx in 0..dom.dim() as u64 {
        let u = dom.decode(u_idx);
        let mut acc = SparseVec::zero(out_basis);
        // a_1 . f(rest)
        {
            let w = Word { coeff: None, letters: u.letters[1..].to_vec() };
            let col = f.map.column(inner.encode(&w));
            for (bi, s) in &col.entries {
                let bw = out_basis.decode(*bi);
                left_mult_word(alg, u.letters[0], &bw, &out_basis, &mut acc, s);
            }
        }
        // single contractions
        for j in 1..=m as usize {
            let sign = sign_scalar(&field, j as i64);
            let prod = alg.elem_mul(
                &alg.basis_elem(u.letters[j - 1]),
                &alg.basis_elem(u.letters[j]),
            );
            for (k, c) in alg.project_unit_quotient(&prod) {
                let mut letters = Vec::with_capacity(m as usize);
                letters.extend_from_slice(&u.letters[..j - 1]);
                letters.push(k);
                letters.extend_from_slice(&u.letters[j + 1..]);
                let col = f.map.column(inner.encode(&Word { coeff: None, letters }));
                for (bi, s) in &col.entries {
                    acc.add_term(*bi, field.mul(&sign, &field.mul(c, s)));
                }
            }
        }
        // f(front) <| a_{m+1}
        {
            let sign = sign_scalar(&field, m as i64 + 1);
            let w = Word { coeff: None, letters: u.letters[..m as usize].to_vec() };
            let col = f.map.column(inner.encode(&w));
            let last = alg.basis_elem(u.letters[m as usize]);
            for (bi, s) in &col.entries {
                let bw = out_basis.decode(*bi);
                let acted = alg.right_action(&bw, &last);
                acc.add_assign(&acted.scaled(&field, &field.mul(&sign, s)));
            }
        }
        for (bi, s) in acc.entries {
            out.map.add_entry(u_idx, bi, field.mul(&global, &s));
        }
    }
    out
}

/// The stabilization embedding `f -> f (x) id` on cochains.
pub fn theta(alg: &AlgebraPresentation, f: &Cochain, conv: KoszulConvention) -> Cochain {
    let id1 = SparseMap::identity(alg.field, alg.inputs_basis(1));
    Cochain::from_map(koszul_tensor(&f.map, &id1, conv).expect("theta tensor"))
}

pub fn theta_pow(
    alg: &AlgebraPresentation,
    f: &Cochain,
    k: u32,
    conv: KoszulConvention,
) -> Cochain {
    let mut out = f.clone();
    for _ in 0..k {
        out = theta(alg, &out, conv);
    }
    out
}

// --- flat Hom spaces ------------------------------------------------------

/// Flat dimension of the space of cochains of a given arity and form degree.
pub fn hom_dim(alg: &AlgebraPresentation, arity: u32, form: u32) -> usize {
    alg.inputs_basis(arity).dim() * alg.bar_basis(form).dim()
}

pub fn hom_dim_u128(alg: &AlgebraPresentation, arity: u32, form: u32) -> u128 {
    alg.inputs_basis(arity).dim_u128() * alg.bar_basis(form).dim_u128()
}

pub fn flatten_cochain(alg: &AlgebraPresentation, f: &Cochain) -> Vec<(usize, Scalar)> {
    let cod = alg.bar_basis(f.form()).dim() as u64;
    let mut out: Vec<(usize, Scalar)> = f
        .map
        .triplets()
        .map(|(row, col, s)| ((col * cod + row) as usize, s.clone()))
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out
}

pub fn unflatten_cochain(
    alg: &AlgebraPresentation,
    arity: u32,
    form: u32,
    coords: &[(usize, Scalar)],
) -> Cochain {
    let cod = alg.bar_basis(form).dim() as u64;
    let mut c = Cochain::zero(alg, arity, form);
    for (i, s) in coords {
        let col = *i as u64 / cod;
        let row = *i as u64 % cod;
        c.map.add_entry(col, row, s.clone());
    }
    c
}

/// The flat matrix of the cochain differential from arity `a` to `a + 1`
/// at form degree `p`.
pub fn delta_matrix(alg: &AlgebraPresentation, arity: u32, form: u32) -> Mat {
    let dom_flat = hom_dim(alg, arity, form);
    let cod_flat = hom_dim(alg, arity + 1, form);
    let field = alg.field;
    let bar = alg.bar_basis(form);
    let bar_dim = bar.dim() as u64;
    let inner = alg.inputs_basis(arity);
    let outer = alg.inputs_basis(arity + 1);
    let global = sign_scalar(&field, arity as i64 - form as i64 + 1);
    // letter actions on form words, tabulated once
    let d = alg.dim;
    let mut left: Vec<Vec<SparseVec>> = Vec::with_capacity(d as usize);
    let mut right: Vec<Vec<SparseVec>> = Vec::with_capacity(d as usize);
    for l in 0..d {
        let mut lcol = Vec::with_capacity(bar.dim());
        let mut rcol = Vec::with_capacity(bar.dim());
        for bi in 0..bar.dim() as u64 {
            let w = bar.decode(bi);
            let mut acc = SparseVec::zero(bar);
            if l >= 1 {
                left_mult_word(alg, l, &w, &bar, &mut acc, &field.one());
                rcol.push(alg.right_action(&w, &alg.basis_elem(l)));
            } else {
                rcol.push(SparseVec::zero(bar));
            }
            lcol.push(acc);
        }
        left.push(lcol);
        right.push(rcol);
    }
    let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
    for u_idx in 0..outer.dim() as u64 {
        let u = outer.decode(u_idx);
        let a = arity as usize;
        // leading term
        {
            let w_idx = inner.encode(&Word { coeff: None, letters: u.letters[1..].to_vec() });
            let l = u.letters[0] as usize;
            for bf in 0..bar_dim {
                for (bi, s) in &left[l][bf as usize].entries {
                    triplets.push((
                        (u_idx * bar_dim + bi) as usize,
                        (w_idx * bar_dim + bf) as usize,
                        field.mul(&global, s),
                    ));
                }
            }
        }
        // contractions
        for j in 1..=a {
            let sign = field.mul(&global, &sign_scalar(&field, j as i64));
            let prod = alg.elem_mul(
                &alg.basis_elem(u.letters[j - 1]),
                &alg.basis_elem(u.letters[j]),
            );
            for (k, c) in alg.project_unit_quotient(&prod) {
                let mut letters = Vec::with_capacity(a);
                letters.extend_from_slice(&u.letters[..j - 1]);
                letters.push(k);
                letters.extend_from_slice(&u.letters[j + 1..]);
                let w_idx = inner.encode(&Word { coeff: None, letters });
                let c = field.mul(&sign, c);
                for bf in 0..bar_dim {
                    triplets.push((
                        (u_idx * bar_dim + bf) as usize,
                        (w_idx * bar_dim + bf) as usize,
                        c.clone(),
                    ));
                }
            }
        }
        // trailing right action
        {
            let sign = field.mul(&global, &sign_scalar(&field, a as i64 + 1));
            let w_idx = inner.encode(&Word { coeff: None, letters: u.letters[..a].to_vec() });
            let l = u.letters[a] as usize;
            for bf in 0..bar_dim {
                for (bi, s) in &right[l][bf as usize].entries {
                    triplets.push((
                        (u_idx * bar_dim + bi) as usize,
                        (w_idx * bar_dim + bf) as usize,
                        field.mul(&sign, s),
                    ));
                }
            }
        }
    }
    Mat::from_triplets(cod_flat, dom_flat, field, triplets)
}

/// The flat matrix of theta from `(arity, form)` to `(arity + 1, form + 1)`.
pub fn theta_matrix(
    alg: &AlgebraPresentation,
    arity: u32,
    form: u32,
    conv: KoszulConvention,
) -> Mat {
    let field = alg.field;
    let dom_flat = hom_dim(alg, arity, form);
    let cod_flat = hom_dim(alg, arity + 1, form + 1);
    let bar_from = alg.bar_basis(form);
    let bar_to = alg.bar_basis(form + 1);
    let in_from = alg.inputs_basis(arity);
    let in_to = alg.inputs_basis(arity + 1);
    let deg = arity as i64 - form as i64;
    let sign = match conv {
        KoszulConvention::SecondPastFirst => field.one(),
        KoszulConvention::FirstPastSecond => sign_scalar(&field, deg),
    };
    let mut triplets = Vec::new();
    for w_idx in 0..in_from.dim() as u64 {
        let w = in_from.decode(w_idx);
        for bi in 0..bar_from.dim() as u64 {
            let b = bar_from.decode(bi);
            let col = (w_idx * bar_from.dim() as u64 + bi) as usize;
            for l in 1..alg.dim {
                let mut letters = w.letters.clone();
                letters.push(l);
                let w2 = in_to.encode(&Word { coeff: None, letters });
                let mut bletters = b.letters.clone();
                bletters.push(l);
                let b2 = bar_to.encode(&Word { coeff: b.coeff, letters: bletters });
                let row = (w2 * bar_to.dim() as u64 + b2) as usize;
                triplets.push((row, col, sign.clone()));
            }
        }
    }
    Mat::from_triplets(cod_flat, dom_flat, field, triplets)
}

// --- chain complexes ------------------------------------------------------

/// Coefficient bimodule of a chain complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainCoeff {
    /// the regular bimodule; also the transported coefficients in the
    /// symmetric picture
    RegularA,
    /// `A^v` with the twisted action `a.(x (x) y).b = xb (x) ay`
    ADualRaw,
}

/// Precomputed left/right actions of the algebra basis on the `A^v` basis.
#[derive(Debug, Clone)]
pub struct ADualActions {
    /// `left[a][t]` = coordinates of `e_a . t`
    pub left: Vec<Vec<Vec<(u32, Scalar)>>>,
    /// `right[a][t]` = coordinates of `t . e_a`
    pub right: Vec<Vec<Vec<(u32, Scalar)>>>,
}

pub fn adual_actions(alg: &AlgebraPresentation, adual: &ADual) -> ADualActions {
    let field = alg.field;
    let mut left = Vec::with_capacity(alg.dim as usize);
    let mut right = Vec::with_capacity(alg.dim as usize);
    for a in 0..alg.dim {
        let mut la = Vec::with_capacity(adual.dim as usize);
        let mut ra = Vec::with_capacity(adual.dim as usize);
        for t in 0..adual.dim {
            let tensor = adual.tensor(t);
            let mut lt: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
            let mut rt: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
            for (x, y, c) in tensor {
                // e_a . (x (x) y) = x (x) (e_a y)
                for (k, s) in alg.basis_mul(a, *y) {
                    let e = lt.entry((*x, *k)).or_insert_with(|| field.zero());
                    *e = field.add(e, &field.mul(c, s));
                }
                // (x (x) y) . e_a = (x e_a) (x) y
                for (k, s) in alg.basis_mul(*x, a) {
                    let e = rt.entry((*k, *y)).or_insert_with(|| field.zero());
                    *e = field.add(e, &field.mul(c, s));
                }
            }
            let pack = |m: BTreeMap<(u32, u32), Scalar>| -> Vec<(u32, u32, Scalar)> {
                m.into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|((i, j), c)| (i, j, c))
                    .collect()
            };
            let lc = adual
                .coordinates(alg, &pack(lt))
                .expect("A^v closed under the twisted action");
            let rc = adual
                .coordinates(alg, &pack(rt))
                .expect("A^v closed under the twisted action");
            let sparse = |v: Vec<Scalar>| -> Vec<(u32, Scalar)> {
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i as u32, c))
                    .collect()
            };
            la.push(sparse(lc));
            ra.push(sparse(rc));
        }
        left.push(la);
        right.push(ra);
    }
    ADualActions { left, right }
}

/// Word basis for `C_n(A, M)`.
pub fn chain_basis(
    alg: &AlgebraPresentation,
    coeff: ChainCoeff,
    adual_dim: u32,
    n: u32,
) -> WordBasis {
    match coeff {
        ChainCoeff::RegularA => alg.bar_basis(n),
        ChainCoeff::ADualRaw => WordBasis::word(alg.dim, adual_dim, n),
    }
}

/// The normalized chain differential `C_n(A, M) -> C_{n-1}(A, M)` as a
/// matrix: first-letter absorption, inner contractions, last-letter wrap.
pub fn chain_b_matrix(
    alg: &AlgebraPresentation,
    coeff: ChainCoeff,
    actions: Option<&ADualActions>,
    adual_dim: u32,
    n: u32,
) -> Mat {
    assert!(n >= 1);
    let field = alg.field;
    let from = chain_basis(alg, coeff, adual_dim, n);
    let to = chain_basis(alg, coeff, adual_dim, n - 1);
    let mut triplets = Vec::new();
    let right_act = |m: u32, l: u32| -> Vec<(u32, Scalar)> {
        match coeff {
            ChainCoeff::RegularA => alg.basis_mul(m, l).to_vec(),
            ChainCoeff::ADualRaw => actions.expect("actions").right[l as usize][m as usize].clone(),
        }
    };
    let left_act = |l: u32, m: u32| -> Vec<(u32, Scalar)> {
        match coeff {
            ChainCoeff::RegularA => alg.basis_mul(l, m).to_vec(),
            ChainCoeff::ADualRaw => actions.expect("actions").left[l as usize][m as usize].clone(),
        }
    };
    for idx in 0..from.dim() as u64 {
        let w = from.decode(idx);
        let m0 = w.coeff.expect("chain word");
        let nn = n as usize;
        // m . a_1 (x) rest
        for (k, c) in right_act(m0, w.letters[0]) {
            let out = to.encode(&Word { coeff: Some(k), letters: w.letters[1..].to_vec() });
            triplets.push((out as usize, idx as usize, c.clone()));
        }
        // inner contractions
        for j in 1..nn {
            let sign = sign_scalar(&field, j as i64);
            let prod = alg.elem_mul(
                &alg.basis_elem(w.letters[j - 1]),
                &alg.basis_elem(w.letters[j]),
            );
            for (k, c) in alg.project_unit_quotient(&prod) {
                let mut letters = Vec::with_capacity(nn - 1);
                letters.extend_from_slice(&w.letters[..j - 1]);
                letters.push(k);
                letters.extend_from_slice(&w.letters[j + 1..]);
                let out = to.encode(&Word { coeff: Some(m0), letters });
                triplets.push((out as usize, idx as usize, field.mul(&sign, c)));
            }
        }
        // (-1)^n a_n . m (x) front
        {
            let sign = sign_scalar(&field, n as i64);
            for (k, c) in left_act(w.letters[nn - 1], m0) {
                let out = to.encode(&Word { coeff: Some(k), letters: w.letters[..nn - 1].to_vec() });
                triplets.push((out as usize, idx as usize, field.mul(&sign, &c)));
            }
        }
    }
    Mat::from_triplets(to.dim(), from.dim(), field, triplets)
}

/// Applies the chain differential to a sparse chain vector.
pub fn chain_b_apply(
    alg: &AlgebraPresentation,
    coeff: ChainCoeff,
    actions: Option<&ADualActions>,
    adual_dim: u32,
    v: &SparseVec,
) -> SparseVec {
    let n = v.basis.letter_count();
    assert!(n >= 1);
    let field = alg.field;
    let from = v.basis;
    let to = chain_basis(alg, coeff, adual_dim, n - 1);
    let mut out = SparseVec::zero(to);
    let right_act = |m: u32, l: u32| -> Vec<(u32, Scalar)> {
        match coeff {
            ChainCoeff::RegularA => alg.basis_mul(m, l).to_vec(),
            ChainCoeff::ADualRaw => actions.expect("actions").right[l as usize][m as usize].clone(),
        }
    };
    let left_act = |l: u32, m: u32| -> Vec<(u32, Scalar)> {
        match coeff {
            ChainCoeff::RegularA => alg.basis_mul(l, m).to_vec(),
            ChainCoeff::ADualRaw => actions.expect("actions").left[l as usize][m as usize].clone(),
        }
    };
    for (idx, s) in &v.entries {
        let w = from.decode(*idx);
        let m0 = w.coeff.expect("chain word");
        let nn = n as usize;
        for (k, c) in right_act(m0, w.letters[0]) {
            let o = to.encode(&Word { coeff: Some(k), letters: w.letters[1..].to_vec() });
            out.add_term(o, field.mul(s, &c));
        }
        for j in 1..nn {
            let sign = sign_scalar(&field, j as i64);
            let prod = alg.elem_mul(
                &alg.basis_elem(w.letters[j - 1]),
                &alg.basis_elem(w.letters[j]),
            );
            for (k, c) in alg.project_unit_quotient(&prod) {
                let mut letters = Vec::with_capacity(nn - 1);
                letters.extend_from_slice(&w.letters[..j - 1]);
                letters.push(k);
                letters.extend_from_slice(&w.letters[j + 1..]);
                let o = to.encode(&Word { coeff: Some(m0), letters });
                out.add_term(o, field.mul(s, &field.mul(&sign, c)));
            }
        }
        {
            let sign = sign_scalar(&field, n as i64);
            for (k, c) in left_act(w.letters[nn - 1], m0) {
                let o = to.encode(&Word { coeff: Some(k), letters: w.letters[..nn - 1].to_vec() });
                out.add_term(o, field.mul(s, &field.mul(&sign, &c)));
            }
        }
    }
    out
}

// --- windows ---------------------------------------------------------------

/// Differentials of one cochain level over an arity window, flat form.
#[derive(Debug, Clone)]
pub struct ComplexWindow {
    pub form: u32,
    pub arity_lo: u32,
    pub arity_hi: u32,
    pub dims: BTreeMap<u32, usize>,
    /// `deltas[a]`: arity `a -> a + 1`, stored for `arity_lo <= a < arity_hi`
    pub deltas: BTreeMap<u32, Mat>,
}

impl ComplexWindow {
    /// Exact check that adjacent differentials compose to zero.
    pub fn check_square_zero(&self) -> bool {
        for a in self.arity_lo..self.arity_hi {
            if let (Some(d0), Some(d1)) = (self.deltas.get(&a), self.deltas.get(&(a + 1))) {
                if !d1.mul(d0).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the level-`p` cochain window with differentials strictly inside
/// the arity range.
pub fn build_cochain_window(
    alg: &AlgebraPresentation,
    form: u32,
    arity_lo: u32,
    arity_hi: u32,
    cap: u64,
) -> Result<ComplexWindow> {
    let mut dims = BTreeMap::new();
    for a in arity_lo..=arity_hi {
        let dim = hom_dim_u128(alg, a, form);
        if dim > cap as u128 {
            return Err(Error::ResourceLimit { dim, cap });
        }
        dims.insert(a, dim as usize);
    }
    let mut deltas = BTreeMap::new();
    for a in arity_lo..arity_hi {
        deltas.insert(a, delta_matrix(alg, a, form));
    }
    Ok(ComplexWindow { form, arity_lo, arity_hi, dims, deltas })
}

/// The theta-ladder: cochain windows for every form degree up to `p_max`
/// together with the stabilization maps between consecutive levels.
#[derive(Debug, Clone)]
pub struct SgLadder {
    pub p_max: u32,
    pub arity_lo: u32,
    pub arity_hi: u32,
    pub levels: Vec<ComplexWindow>,
    /// `thetas[p][a]`: level `p` arity `a` -> level `p+1` arity `a+1`,
    /// stored for `arity_lo <= a < arity_hi`
    pub thetas: Vec<BTreeMap<u32, Mat>>,
}

pub fn build_sg_ladder(
    alg: &AlgebraPresentation,
    arity_lo: u32,
    arity_hi: u32,
    p_max: u32,
    conv: KoszulConvention,
    cap: u64,
) -> Result<SgLadder> {
    use rayon::prelude::*;
    let levels: Vec<ComplexWindow> = (0..=p_max)
        .into_par_iter()
        .map(|p| build_cochain_window(alg, p, arity_lo, arity_hi, cap))
        .collect::<Result<_>>()?;
    let thetas: Vec<BTreeMap<u32, Mat>> = (0..p_max)
        .into_par_iter()
        .map(|p| {
            (arity_lo..arity_hi)
                .map(|a| (a, theta_matrix(alg, a, p, conv)))
                .collect()
        })
        .collect();
    Ok(SgLadder { p_max, arity_lo, arity_hi, levels, thetas })
}

fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
    for (r, row) in a.data.iter().enumerate() {
        for (c, v) in row {
            triplets.push((r, *c, v.clone()));
        }
    }
    for (r, row) in b.data.iter().enumerate() {
        for (c, v) in row {
            triplets.push((r, *c, a.field.neg(v)));
        }
    }
    Mat::from_triplets(a.rows, a.cols, a.field, triplets)
}

impl SgLadder {
    pub fn delta_count(&self) -> usize {
        self.levels.iter().map(|l| l.deltas.len()).sum()
    }

    /// Exact commutation of theta with the differential wherever both
    /// composites stay inside the window.
    pub fn check_theta_commutes(&self) -> bool {
        for p in 0..self.p_max as usize {
            for a in self.arity_lo..self.arity_hi.saturating_sub(1) {
                let th_next = &self.thetas[p][&(a + 1)];
                let th = &self.thetas[p][&a];
                let d_low = &self.levels[p].deltas[&a];
                let d_high = &self.levels[p + 1].deltas[&(a + 1)];
                if !mat_sub(&th_next.mul(d_low), &d_high.mul(th)).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

// --- the generalized Tate-Hochschild complex -------------------------------

/// Degree-indexed window of the generalized Tate-Hochschild complex: chains
/// in negative degrees, cochains in non-negative degrees, glued by the
/// multiplication map (raw form) or by `tau` (symmetric form).
#[derive(Debug, Clone)]
pub struct DStarWindow {
    pub lo: i64,
    pub hi: i64,
    pub sym: bool,
    pub adual_dim: u32,
    pub dims: BTreeMap<i64, usize>,
    /// `diffs[i]`: degree `i -> i + 1`, stored for `lo <= i < hi`
    pub diffs: BTreeMap<i64, Mat>,
}

pub fn build_dstar(
    alg: &AlgebraPresentation,
    adual: &ADual,
    fd: Option<&FrobeniusData>,
    lo: i64,
    hi: i64,
    cap: u64,
) -> Result<DStarWindow> {
    assert!(lo <= hi);
    let sym = match fd {
        Some(f) => {
            if !f.symmetric {
                return Err(Error::NotSymmetric);
            }
            true
        }
        None => false,
    };
    let field = alg.field;
    let coeff = if sym { ChainCoeff::RegularA } else { ChainCoeff::ADualRaw };
    let actions = if sym { None } else { Some(adual_actions(alg, adual)) };
    let mut dims = BTreeMap::new();
    for i in lo..=hi {
        let dim = if i >= 0 {
            hom_dim_u128(alg, i as u32, 0)
        } else {
            chain_basis(alg, coeff, adual.dim, (-i - 1) as u32).dim_u128()
        };
        if dim > cap as u128 {
            return Err(Error::ResourceLimit { dim, cap });
        }
        dims.insert(i, dim as usize);
    }
    let mut diffs = BTreeMap::new();
    for i in lo..hi {
        let mat = if i >= 0 {
            delta_matrix(alg, i as u32, 0)
        } else if i == -1 {
            // junction into C^0 = A
            let cod = hom_dim(alg, 0, 0);
            let mut triplets = Vec::new();
            match (sym, fd) {
                (true, Some(f)) => {
                    for c in 0..alg.dim {
                        let img = f.tau(alg, &alg.basis_elem(c));
                        for (k, v) in img.iter().enumerate() {
                            if !v.is_zero() {
                                triplets.push((k, c as usize, v.clone()));
                            }
                        }
                    }
                }
                _ => {
                    for t in 0..adual.dim {
                        let mut img = alg.zero_elem();
                        for (x, y, c) in adual.tensor(t) {
                            let prod = alg.elem_mul(&alg.basis_elem(*x), &alg.basis_elem(*y));
                            img = alg.elem_add(&img, &alg.elem_scale(c, &prod));
                        }
                        for (k, v) in img.iter().enumerate() {
                            if !v.is_zero() {
                                triplets.push((k, t as usize, v.clone()));
                            }
                        }
                    }
                }
            }
            Mat::from_triplets(cod, dims[&-1], field, triplets)
        } else {
            chain_b_matrix(alg, coeff, actions.as_ref(), adual.dim, (-i - 1) as u32)
        };
        diffs.insert(i, mat);
    }
    Ok(DStarWindow { lo, hi, sym, adual_dim: adual.dim, dims, diffs })
}

impl DStarWindow {
    pub fn check_square_zero(&self) -> bool {
        for i in self.lo..self.hi - 1 {
            if let (Some(d0), Some(d1)) = (self.diffs.get(&i), self.diffs.get(&(i + 1))) {
                if !d1.mul(d0).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

// --- elements of the generalized Tate-Hochschild complex -------------------

/// An element of one degree of the generalized Tate-Hochschild complex.
#[derive(Debug, Clone, PartialEq)]
pub enum DElem {
    /// degree `>= 0`: a classical cochain (form degree zero)
    Cochain(Cochain),
    /// degree `-n-1`: a chain over the `A^v` basis
    ChainRaw(SparseVec),
    /// degree `-n-1`: a chain with regular coefficients (symmetric picture)
    ChainSym(SparseVec),
}

impl DElem {
    pub fn degree(&self) -> i64 {
        match self {
            DElem::Cochain(c) => c.degree(),
            DElem::ChainRaw(v) | DElem::ChainSym(v) => -(v.basis.letter_count() as i64) - 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DElem::Cochain(c) => c.is_zero(),
            DElem::ChainRaw(v) | DElem::ChainSym(v) => v.is_zero(),
        }
    }
}

/// Converts a raw chain to the transported (regular-coefficient) picture.
pub fn chain_raw_to_sym(
    alg: &AlgebraPresentation,
    adual: &ADual,
    fd: &FrobeniusData,
    v: &SparseVec,
) -> SparseVec {
    let n = v.basis.letter_count();
    let out_basis = alg.bar_basis(n);
    let mut out = SparseVec::zero(out_basis);
    for (idx, s) in &v.entries {
        let w = v.basis.decode(*idx);
        let t = w.coeff.expect("chain word");
        let back = fd.symmetric_iso_inverse(alg, adual.tensor(t));
        for (k, c) in back.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let o = out_basis.encode(&Word { coeff: Some(k as u32), letters: w.letters.clone() });
            out.add_term(o, alg.field.mul(s, c));
        }
    }
    out
}

/// Converts a transported chain back to the raw `A^v` picture.
pub fn chain_sym_to_raw(
    alg: &AlgebraPresentation,
    adual: &ADual,
    fd: &FrobeniusData,
    v: &SparseVec,
) -> SparseVec {
    let n = v.basis.letter_count();
    let out_basis = WordBasis::word(alg.dim, adual.dim, n);
    let mut out = SparseVec::zero(out_basis);
    for (idx, s) in &v.entries {
        let w = v.basis.decode(*idx);
        let a = w.coeff.expect("chain word");
        let tensor = fd.symmetric_iso(alg, &alg.basis_elem(a)).expect("symmetric");
        let coords = adual
            .coordinates(alg, &tensor)
            .expect("image of the symmetric iso lies in A^v");
        for (t, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let o = out_basis.encode(&Word { coeff: Some(t as u32), letters: w.letters.clone() });
            out.add_term(o, alg.field.mul(s, c));
        }
    }
    out
}

/// The embedding of the generalized Tate-Hochschild complex into the
/// theta-ladder: inclusion in non-negative degrees; in degree `-n-1` a chain
/// `(sum_j x_j (x) y_j) (x) w` maps to the arity-zero form
/// `sum_j x_j (x) w (x) pi(y_j)`.
pub fn iota(alg: &AlgebraPresentation, adual: &ADual, x: &DElem) -> Cochain {
    match x {
        DElem::Cochain(c) => c.clone(),
        DElem::ChainSym(_) => panic!("iota takes raw chains; convert with chain_sym_to_raw first"),
        DElem::ChainRaw(v) => {
            let n = v.basis.letter_count();
            let out_basis = alg.bar_basis(n + 1);
            let mut c = Cochain::zero(alg, 0, n + 1);
            for (idx, s) in &v.entries {
                let w = v.basis.decode(*idx);
                let t = w.coeff.expect("chain word");
                for (x_i, y_i, coeff) in adual.tensor(t) {
                    if *y_i == 0 {
                        continue; // unit letter vanishes in the quotient
                    }
                    let mut letters = w.letters.clone();
                    letters.push(*y_i);
                    let row = out_basis.encode(&Word { coeff: Some(*x_i), letters });
                    c.map.add_entry(0, row, alg.field.mul(s, coeff));
                }
            }
            c
        }
    }
}

/// The flat matrix of iota in a fixed negative degree `i = -n-1`, from the
/// raw chain basis of `C_n(A, A^v)` to the flat arity-0 cochain space at
/// form degree `n + 1`.
pub fn iota_matrix(alg: &AlgebraPresentation, adual: &ADual, n: u32) -> Mat {
    let from = WordBasis::word(alg.dim, adual.dim, n);
    let bar = alg.bar_basis(n + 1);
    let mut triplets = Vec::new();
    for idx in 0..from.dim() as u64 {
        let w = from.decode(idx);
        let t = w.coeff.expect("chain word");
        for (x_i, y_i, coeff) in adual.tensor(t) {
            if *y_i == 0 {
                continue;
            }
            let mut letters = w.letters.clone();
            letters.push(*y_i);
            let row = bar.encode(&Word { coeff: Some(*x_i), letters });
            triplets.push((row as usize, idx as usize, coeff.clone()));
        }
    }
    Mat::from_triplets(hom_dim(alg, 0, n + 1), from.dim(), alg.field, triplets)
}

/// Applies the generalized Tate-Hochschild differential to an element
/// (symmetric picture when `fd` is given and the element is transported).
pub fn dstar_differential(
    alg: &AlgebraPresentation,
    adual: &ADual,
    fd: Option<&FrobeniusData>,
    actions: Option<&ADualActions>,
    x: &DElem,
) -> DElem {
    match x {
        DElem::Cochain(c) => DElem::Cochain(cochain_delta(alg, c)),
        DElem::ChainSym(v) => {
            let fd = fd.expect("symmetric chains need Frobenius data");
            let n = v.basis.letter_count();
            if n == 0 {
                let mut out = alg.zero_elem();
                for (idx, s) in &v.entries {
                    let w = v.basis.decode(*idx);
                    let img = fd.tau(alg, &alg.basis_elem(w.coeff.unwrap()));
                    out = alg.elem_add(&out, &alg.elem_scale(s, &img));
                }
                DElem::Cochain(Cochain::of_elem(alg, &out))
            } else {
                DElem::ChainSym(chain_b_apply(alg, ChainCoeff::RegularA, None, adual.dim, v))
            }
        }
        DElem::ChainRaw(v) => {
            let n = v.basis.letter_count();
            if n == 0 {
                let mut out = alg.zero_elem();
                for (idx, s) in &v.entries {
                    let w = v.basis.decode(*idx);
                    let t = w.coeff.unwrap();
                    for (x_i, y_i, c) in adual.tensor(t) {
                        let prod = alg.elem_mul(&alg.basis_elem(*x_i), &alg.basis_elem(*y_i));
                        out = alg.elem_add(&out, &alg.elem_scale(&alg.field.mul(s, c), &prod));
                    }
                }
                DElem::Cochain(Cochain::of_elem(alg, &out))
            } else {
                DElem::ChainRaw(chain_b_apply(alg, ChainCoeff::ADualRaw, actions, adual.dim, v))
            }
        }
    }
}

// --- window serialization (cache format) -----------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct MatDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

pub fn dump_mat(m: &Mat) -> MatDump {
    MatDump {
        rows: m.rows,
        cols: m.cols,
        entries: m
            .data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v.to_string())))
            .collect(),
    }
}

pub fn load_mat(field: FieldSpec, d: &MatDump) -> Result<Mat> {
    let mut triplets = Vec::with_capacity(d.entries.len());
    for (r, c, v) in &d.entries {
        triplets.push((*r, *c, field.parse_scalar(v)?));
    }
    Ok(Mat::from_triplets(d.rows, d.cols, field, triplets))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LadderDump {
    pub p_max: u32,
    pub arity_lo: u32,
    pub arity_hi: u32,
    pub level_dims: Vec<Vec<(u32, usize)>>,
    pub deltas: Vec<Vec<(u32, MatDump)>>,
    pub thetas: Vec<Vec<(u32, MatDump)>>,
}

impl SgLadder {
    pub fn dump(&self) -> LadderDump {
        LadderDump {
            p_max: self.p_max,
            arity_lo: self.arity_lo,
            arity_hi: self.arity_hi,
            level_dims: self
                .levels
                .iter()
                .map(|l| l.dims.iter().map(|(a, d)| (*a, *d)).collect())
                .collect(),
            deltas: self
                .levels
                .iter()
                .map(|l| l.deltas.iter().map(|(a, m)| (*a, dump_mat(m))).collect())
                .collect(),
            thetas: self
                .thetas
                .iter()
                .map(|t| t.iter().map(|(a, m)| (*a, dump_mat(m))).collect())
                .collect(),
        }
    }

    pub fn from_dump(field: FieldSpec, d: &LadderDump) -> Result<SgLadder> {
        let mut levels = Vec::new();
        for (p, (dims, deltas)) in d.level_dims.iter().zip(&d.deltas).enumerate() {
            levels.push(ComplexWindow {
                form: p as u32,
                arity_lo: d.arity_lo,
                arity_hi: d.arity_hi,
                dims: dims.iter().cloned().collect(),
                deltas: deltas
                    .iter()
                    .map(|(a, m)| Ok((*a, load_mat(field, m)?)))
                    .collect::<Result<_>>()?,
            });
        }
        let thetas = d
            .thetas
            .iter()
            .map(|t| {
                t.iter()
                    .map(|(a, m)| Ok((*a, load_mat(field, m)?)))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        Ok(SgLadder {
            p_max: d.p_max,
            arity_lo: d.arity_lo,
            arity_hi: d.arity_hi,
            levels,
            thetas,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DStarDump {
    pub lo: i64,
    pub hi: i64,
    pub sym: bool,
    pub adual_dim: u32,
    pub dims: Vec<(i64, usize)>,
    pub diffs: Vec<(i64, MatDump)>,
}

impl DStarWindow {
    pub fn dump(&self) -> DStarDump {
        DStarDump {
            lo: self.lo,
            hi: self.hi,
            sym: self.sym,
            adual_dim: self.adual_dim,
            dims: self.dims.iter().map(|(i, d)| (*i, *d)).collect(),
            diffs: self.diffs.iter().map(|(i, m)| (*i, dump_mat(m))).collect(),
        }
    }

    pub fn from_dump(field: FieldSpec, d: &DStarDump) -> Result<DStarWindow> {
        Ok(DStarWindow {
            lo: d.lo,
            hi: d.hi,
            sym: d.sym,
            adual_dim: d.adual_dim,
            dims: d.dims.iter().cloned().collect(),
            diffs: d
                .diffs
                .iter()
                .map(|(i, m)| Ok((*i, load_mat(field, m)?)))
                .collect::<Result<_>>()?,
        })
    }
}
