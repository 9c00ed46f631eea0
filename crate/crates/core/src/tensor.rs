//! Indexed word bases for the normalized tensor spaces, sparse vectors and
//! sparse linear maps between them, and Koszul-signed tensoring/composition
//! of graded maps.
//!
//! Two kinds of spaces occur. `Inputs(n)` is the tensor power of the unit
//! quotient, the input side of a cochain. `Word { coeff_dim, n }` is a
//! coefficient space tensored with such a power; with `coeff_dim = d` it is
//! the space of noncommutative `n`-forms of the algebra.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::scalar::{FieldSpec, Scalar};
use crate::{Error, KoszulConvention, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    /// `(s Abar)^(x) n`
    Inputs { n: u32 },
    /// `M (x) (s Abar)^(x) n` for a coefficient space of the given dimension
    Word { coeff_dim: u32, n: u32 },
}

/// A basis of one tensor space over a fixed algebra of dimension `d`.
/// Letters range over `1..d` (the unit-quotient basis), coefficients over
/// `0..coeff_dim`. The index codec is the mixed-radix bijection with the
/// coefficient most significant and the first letter next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordBasis {
    pub d: u32,
    pub kind: SpaceKind,
}

/// A decoded basis word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    /// `None` for pure input words
    pub coeff: Option<u32>,
    /// letters in `1..d`
    pub letters: Vec<u32>,
}

impl WordBasis {
    pub fn inputs(d: u32, n: u32) -> WordBasis {
        WordBasis { d, kind: SpaceKind::Inputs { n } }
    }

    /// The space of noncommutative `p`-forms `A (x) (s Abar)^(x) p`.
    pub fn bar(d: u32, p: u32) -> WordBasis {
        WordBasis { d, kind: SpaceKind::Word { coeff_dim: d, n: p } }
    }

    pub fn word(d: u32, coeff_dim: u32, n: u32) -> WordBasis {
        WordBasis { d, kind: SpaceKind::Word { coeff_dim, n } }
    }

    pub fn letter_count(&self) -> u32 {
        match self.kind {
            SpaceKind::Inputs { n } => n,
            SpaceKind::Word { n, .. } => n,
        }
    }

    pub fn coeff_dim(&self) -> Option<u32> {
        match self.kind {
            SpaceKind::Inputs { .. } => None,
            SpaceKind::Word { coeff_dim, .. } => Some(coeff_dim),
        }
    }

    /// Degree of the space, counting each letter as -1.
    pub fn degree(&self) -> i64 {
        -(self.letter_count() as i64)
    }

    pub fn dim_u128(&self) -> u128 {
        let letters = (self.d as u128 - 1).pow(self.letter_count());
        match self.kind {
            SpaceKind::Inputs { .. } => letters,
            SpaceKind::Word { coeff_dim, .. } => coeff_dim as u128 * letters,
        }
    }

    pub fn dim(&self) -> usize {
        let d = self.dim_u128();
        assert!(d <= usize::MAX as u128, "basis dimension overflow");
        d as usize
    }

    pub fn check_cap(&self, cap: u64) -> Result<()> {
        let dim = self.dim_u128();
        if dim > cap as u128 {
            return Err(Error::ResourceLimit { dim, cap });
        }
        Ok(())
    }

    pub fn encode(&self, w: &Word) -> u64 {
        let base = (self.d - 1) as u64;
        debug_assert_eq!(w.letters.len() as u32, self.letter_count());
        let mut idx: u64 = match (self.kind, w.coeff) {
            (SpaceKind::Inputs { .. }, None) => 0,
            (SpaceKind::Word { coeff_dim, .. }, Some(c)) => {
                debug_assert!(c < coeff_dim);
                c as u64
            }
            _ => panic!("word shape does not match basis kind"),
        };
        for &l in &w.letters {
            debug_assert!(l >= 1 && l < self.d);
            idx = idx * base + (l - 1) as u64;
        }
        idx
    }

    pub fn decode(&self, mut idx: u64) -> Word {
        let base = (self.d - 1) as u64;
        let n = self.letter_count() as usize;
        let mut letters = vec![0u32; n];
        for i in (0..n).rev() {
            letters[i] = (idx % base) as u32 + 1;
            idx /= base;
        }
        let coeff = match self.kind {
            SpaceKind::Inputs { .. } => {
                debug_assert_eq!(idx, 0);
                None
            }
            SpaceKind::Word { coeff_dim, .. } => {
                debug_assert!((idx as u32) < coeff_dim);
                Some(idx as u32)
            }
        };
        Word { coeff, letters }
    }

    /// The basis of the tensor product `self (x) rhs`, when it is again a
    /// word basis: the right factor must be an input power, or the left one
    /// an empty input power.
    pub fn tensor(&self, rhs: &WordBasis) -> Result<WordBasis> {
        if self.d != rhs.d {
            return Err(Error::BasisMismatch("different algebras".into()));
        }
        match (self.kind, rhs.kind) {
            (SpaceKind::Inputs { n: a }, SpaceKind::Inputs { n: b }) => {
                Ok(WordBasis::inputs(self.d, a + b))
            }
            (SpaceKind::Word { coeff_dim, n }, SpaceKind::Inputs { n: b }) => {
                Ok(WordBasis::word(self.d, coeff_dim, n + b))
            }
            (SpaceKind::Inputs { n: 0 }, SpaceKind::Word { coeff_dim, n }) => {
                Ok(WordBasis::word(self.d, coeff_dim, n))
            }
            _ => Err(Error::BasisMismatch(
                "coefficient space may only appear leftmost".into(),
            )),
        }
    }
}

/// A sparse vector with no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseVec {
    pub basis: WordBasis,
    pub entries: BTreeMap<u64, Scalar>,
}

impl SparseVec {
    pub fn zero(basis: WordBasis) -> SparseVec {
        SparseVec { basis, entries: BTreeMap::new() }
    }

    pub fn unit(basis: WordBasis, idx: u64, s: Scalar) -> SparseVec {
        let mut v = SparseVec::zero(basis);
        v.add_term(idx, s);
        v
    }

    pub fn add_term(&mut self, idx: u64, s: Scalar) {
        if s.is_zero() {
            return;
        }
        let field = s.field();
        match self.entries.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(s);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = field.add(e.get(), &s);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add_assign(&mut self, rhs: &SparseVec) {
        debug_assert_eq!(self.basis, rhs.basis);
        for (i, s) in &rhs.entries {
            self.add_term(*i, s.clone());
        }
    }

    pub fn scaled(&self, field: &FieldSpec, c: &Scalar) -> SparseVec {
        let mut out = SparseVec::zero(self.basis);
        if c.is_zero() {
            return out;
        }
        for (i, s) in &self.entries {
            out.entries.insert(*i, field.mul(s, c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A sparse linear map between word bases, stored column-wise: `cols[j]` is
/// the image of the `j`-th domain basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMap {
    pub domain: WordBasis,
    pub codomain: WordBasis,
    pub field: FieldSpec,
    pub cols: BTreeMap<u64, BTreeMap<u64, Scalar>>,
}

impl SparseMap {
    pub fn zero(field: FieldSpec, domain: WordBasis, codomain: WordBasis) -> SparseMap {
        SparseMap { domain, codomain, field, cols: BTreeMap::new() }
    }

    pub fn identity(field: FieldSpec, basis: WordBasis) -> SparseMap {
        let mut m = SparseMap::zero(field, basis, basis);
        for j in 0..basis.dim() as u64 {
            m.add_entry(j, j, field.one());
        }
        m
    }

    /// Map degree: codomain degree minus domain degree.
    pub fn degree(&self) -> i64 {
        self.codomain.degree() - self.domain.degree()
    }

    pub fn add_entry(&mut self, col: u64, row: u64, s: Scalar) {
        if s.is_zero() {
            return;
        }
        let field = self.field;
        let col_map = self.cols.entry(col).or_default();
        match col_map.entry(row) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(s);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = field.add(e.get(), &s);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
        if self.cols.get(&col).is_some_and(|c| c.is_empty()) {
            self.cols.remove(&col);
        }
    }

    pub fn add_column(&mut self, col: u64, v: &SparseVec) {
        debug_assert_eq!(v.basis, self.codomain);
        for (row, s) in &v.entries {
            self.add_entry(col, *row, s.clone());
        }
    }

    pub fn column(&self, col: u64) -> SparseVec {
        let mut v = SparseVec::zero(self.codomain);
        if let Some(c) = self.cols.get(&col) {
            v.entries = c.clone();
        }
        v
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        debug_assert_eq!(v.basis, self.domain);
        let mut out = SparseVec::zero(self.codomain);
        for (j, s) in &v.entries {
            if let Some(col) = self.cols.get(j) {
                for (i, t) in col {
                    out.add_term(*i, self.field.mul(s, t));
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, rhs: &SparseMap) {
        debug_assert_eq!(self.domain, rhs.domain);
        debug_assert_eq!(self.codomain, rhs.codomain);
        for (j, col) in &rhs.cols {
            for (i, s) in col {
                self.add_entry(*j, *i, s.clone());
            }
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseMap {
        let mut out = SparseMap::zero(self.field, self.domain, self.codomain);
        if c.is_zero() {
            return out;
        }
        for (j, col) in &self.cols {
            for (i, s) in col {
                out.add_entry(*j, *i, self.field.mul(s, c));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.cols.values().map(|c| c.len()).sum()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (u64, u64, &Scalar)> {
        self.cols
            .iter()
            .flat_map(|(j, col)| col.iter().map(move |(i, s)| (*i, *j, s)))
    }

    /// Rows-form matrix for elimination.
    pub fn to_mat(&self) -> crate::linalg::Mat {
        crate::linalg::Mat::from_triplets(
            self.codomain.dim(),
            self.domain.dim(),
            self.field,
            self.triplets().map(|(i, j, s)| (i as usize, j as usize, s.clone())),
        )
    }
}

/// Exact sparse composition `f . g`; degrees add.
pub fn compose(f: &SparseMap, g: &SparseMap) -> Result<SparseMap> {
    if g.codomain != f.domain {
        return Err(Error::BasisMismatch(format!(
            "compose: {:?} vs {:?}",
            g.codomain, f.domain
        )));
    }
    let mut out = SparseMap::zero(f.field, g.domain, f.codomain);
    for (j, gcol) in &g.cols {
        for (k, gs) in gcol {
            if let Some(fcol) = f.cols.get(k) {
                for (i, fs) in fcol {
                    out.add_entry(*j, *i, f.field.mul(gs, fs));
                }
            }
        }
    }
    Ok(out)
}

/// Koszul-signed tensor product of graded maps:
/// under `SecondPastFirst`, `(f (x) g)(x (x) y) = (-1)^{|g| deg(x)} f(x) (x) g(y)`
/// with `deg(x)` the (negative) word degree of `x`; under `FirstPastSecond`
/// the sign is `(-1)^{|f| deg(y)}` instead.
pub fn koszul_tensor(f: &SparseMap, g: &SparseMap, conv: KoszulConvention) -> Result<SparseMap> {
    let domain = f.domain.tensor(&g.domain)?;
    let codomain = f.codomain.tensor(&g.codomain)?;
    let field = f.field;
    if g.field != field {
        return Err(Error::FieldMismatch);
    }
    let mut out = SparseMap::zero(field, domain, codomain);
    let (fd, gd) = (f.degree(), g.degree());
    for (jf, fcol) in &f.cols {
        let fw = f.domain.decode(*jf);
        for (jg, gcol) in &g.cols {
            let gw = g.domain.decode(*jg);
            let sign_exp = match conv {
                KoszulConvention::SecondPastFirst => gd * f.domain.degree(),
                KoszulConvention::FirstPastSecond => fd * g.domain.degree(),
            };
            let sign = if sign_exp.rem_euclid(2) == 0 { 1 } else { -1 };
            let dom_idx = {
                let mut w = Word { coeff: fw.coeff, letters: fw.letters.clone() };
                debug_assert!(gw.coeff.is_none() || w.letters.is_empty() && w.coeff.is_none());
                if let Some(c) = gw.coeff {
                    w.coeff = Some(c);
                }
                w.letters.extend_from_slice(&gw.letters);
                domain.encode(&w)
            };
            for (rf, sf) in fcol {
                let fw_out = f.codomain.decode(*rf);
                for (rg, sg) in gcol {
                    let gw_out = g.codomain.decode(*rg);
                    let mut w = Word { coeff: fw_out.coeff, letters: fw_out.letters.clone() };
                    if let Some(c) = gw_out.coeff {
                        debug_assert!(w.coeff.is_none() && w.letters.is_empty());
                        w.coeff = Some(c);
                    }
                    w.letters.extend_from_slice(&gw_out.letters);
                    let row = codomain.encode(&w);
                    let mut v = field.mul(sf, sg);
                    if sign < 0 {
                        v = field.neg(&v);
                    }
                    out.add_entry(dom_idx, row, v);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f101() -> FieldSpec {
        FieldSpec::prime(101).unwrap()
    }

    #[test]
    fn codec_round_trips() {
        for d in 2..=4u32 {
            for n in 0..=4u32 {
                for basis in [WordBasis::inputs(d, n), WordBasis::bar(d, n), WordBasis::word(d, 5, n)] {
                    let dim = basis.dim();
                    assert!(dim <= 100_000);
                    for idx in 0..dim as u64 {
                        let w = basis.decode(idx);
                        assert_eq!(basis.encode(&w), idx);
                    }
                }
            }
        }
        // dimensions match the closed forms
        assert_eq!(WordBasis::bar(3, 4).dim(), 3 * 2usize.pow(4));
        assert_eq!(WordBasis::inputs(3, 5).dim(), 2usize.pow(5));
    }

    fn random_map(
        rng: &mut impl Rng,
        field: FieldSpec,
        domain: WordBasis,
        codomain: WordBasis,
    ) -> SparseMap {
        let mut m = SparseMap::zero(field, domain, codomain);
        for j in 0..domain.dim() as u64 {
            for i in 0..codomain.dim() as u64 {
                if rng.gen_bool(0.3) {
                    m.add_entry(j, i, field.from_i64(rng.gen_range(1..101)));
                }
            }
        }
        m
    }

    #[test]
    fn compose_identity_zero_assoc() {
        let field = f101();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = WordBasis::inputs(3, 1);
        let b = WordBasis::inputs(3, 2);
        let c = WordBasis::bar(3, 1);
        let f = random_map(&mut rng, field, b, c);
        let g = random_map(&mut rng, field, a, b);
        let id_b = SparseMap::identity(field, b);
        assert_eq!(compose(&id_b, &g).unwrap(), g);
        let z = SparseMap::zero(field, a, b);
        assert!(compose(&f, &z).unwrap().is_zero());
        let h = random_map(&mut rng, field, WordBasis::inputs(3, 0), a);
        let lhs = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let rhs = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.degree(), f.degree() + g.degree() + h.degree());
    }

    #[test]
    fn koszul_tensor_signs_and_assoc() {
        let field = f101();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        // f (x) id with |id| = 0 carries no sign under either convention
        let f = random_map(&mut rng, field, WordBasis::inputs(3, 2), WordBasis::bar(3, 1));
        let id1 = SparseMap::identity(field, WordBasis::inputs(3, 1));
        let t = koszul_tensor(&f, &id1, KoszulConvention::SecondPastFirst).unwrap();
        let t2 = koszul_tensor(&f, &id1, KoszulConvention::FirstPastSecond).unwrap();
        assert_eq!(t.degree(), f.degree());
        // under FirstPastSecond the sign (-1)^{|f| * (-1)} shows up
        let expected = if f.degree() % 2 == 0 { t.clone() } else { t.scaled(&field.neg(&field.one())) };
        assert_eq!(t2, expected);

        // id (x) f with odd |f| on a length-1 word picks up (-1)^{|f| * (-1)}
        let odd = random_map(&mut rng, field, WordBasis::inputs(3, 1), WordBasis::inputs(3, 2));
        assert_eq!(odd.degree(), -1);
        let it = koszul_tensor(&id1, &odd, KoszulConvention::SecondPastFirst).unwrap();
        let plain = {
            // manual plain tensor for comparison
            let mut m = SparseMap::zero(field, it.domain, it.codomain);
            for (j, col) in &odd.cols {
                let jw = odd.domain.decode(*j);
                for l in 1..3u32 {
                    let mut dw = vec![l];
                    dw.extend_from_slice(&jw.letters);
                    let dj = it.domain.encode(&Word { coeff: None, letters: dw });
                    for (i, s) in col {
                        let iw = odd.codomain.decode(*i);
                        let mut ow = vec![l];
                        ow.extend_from_slice(&iw.letters);
                        let oi = it.codomain.encode(&Word { coeff: None, letters: ow });
                        m.add_entry(dj, oi, s.clone());
                    }
                }
            }
            m
        };
        assert_eq!(it, plain.scaled(&field.neg(&field.one())));

        // associativity up to the canonical identification
        let g = random_map(&mut rng, field, WordBasis::inputs(3, 1), WordBasis::inputs(3, 1));
        let h = random_map(&mut rng, field, WordBasis::inputs(3, 1), WordBasis::inputs(3, 2));
        for conv in [KoszulConvention::SecondPastFirst, KoszulConvention::FirstPastSecond] {
            let lhs = koszul_tensor(&koszul_tensor(&f, &g, conv).unwrap(), &h, conv).unwrap();
            let rhs = koszul_tensor(&f, &koszul_tensor(&g, &h, conv).unwrap(), conv).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tensor_bilinearity() {
        let field = f101();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let dom = WordBasis::inputs(3, 1);
        let f1 = random_map(&mut rng, field, dom, WordBasis::bar(3, 0));
        let f2 = random_map(&mut rng, field, dom, WordBasis::bar(3, 0));
        let g = random_map(&mut rng, field, dom, WordBasis::inputs(3, 1));
        let conv = KoszulConvention::SecondPastFirst;
        let mut sum = f1.clone();
        sum.add_assign(&f2);
        let lhs = koszul_tensor(&sum, &g, conv).unwrap();
        let mut rhs = koszul_tensor(&f1, &g, conv).unwrap();
        rhs.add_assign(&koszul_tensor(&f2, &g, conv).unwrap());
        assert_eq!(lhs, rhs);
    }
}
