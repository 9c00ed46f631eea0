//! Exact field arithmetic over prime fields `F_p` and over `Q`.
//!
//! A [`Scalar`] is always in canonical form: a residue in `[0, p)` for the
//! prime kind, a reduced fraction for the rational kind. There is no
//! floating point anywhere in this crate.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::{Error, Result};

/// The ground field: a machine-word prime field or the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Prime { p: u64 },
    Rational,
}

/// An exact field element, canonical within its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Prime { p: u64, v: u64 },
    Rational(BigRational),
}

/// Operation selector for [`scalar_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |mut b: u64, mut e: u64| -> u64 {
        let mut acc: u128 = 1;
        let m = n as u128;
        let mut bb = b as u128 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * bb % m;
            }
            bb = bb * bb % m;
            e >>= 1;
        }
        b = acc as u64;
        b
    };
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl FieldSpec {
    /// Prime field constructor; rejects composite moduli.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn rational() -> FieldSpec {
        FieldSpec::Rational
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime { p } => Scalar::Prime { p: *p, v: 0 },
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime { p } => Scalar::Prime { p: *p, v: 1 % *p },
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime { p } => {
                let m = *p as i128;
                let r = ((n as i128 % m) + m) % m;
                Scalar::Prime { p: *p, v: r as u64 }
            }
            FieldSpec::Rational => Scalar::Rational(BigRational::from(BigInt::from(n))),
        }
    }

    /// Parses a decimal-string scalar; `a/b` is accepted for the rational
    /// kind and integers (optionally negative) for both kinds.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self {
            FieldSpec::Prime { .. } => {
                if s.contains('/') {
                    return Err(Error::Parse(format!(
                        "fraction `{s}` is not a prime-field scalar"
                    )));
                }
                let n: i128 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
                let p = match self {
                    FieldSpec::Prime { p } => *p as i128,
                    _ => unreachable!(),
                };
                let r = ((n % p) + p) % p;
                Ok(Scalar::Prime {
                    p: p as u64,
                    v: r as u64,
                })
            }
            FieldSpec::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let num: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
                let den: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
        }
    }

    fn check(&self, a: &Scalar) -> bool {
        matches!(
            (self, a),
            (FieldSpec::Prime { p }, Scalar::Prime { p: q, .. }) if p == q
        ) || matches!((self, a), (FieldSpec::Rational, Scalar::Rational(_)))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        debug_assert!(self.check(a) && self.check(b));
        match (a, b) {
            (Scalar::Prime { p, v }, Scalar::Prime { v: w, .. }) => Scalar::Prime {
                p: *p,
                v: ((*v as u128 + *w as u128) % *p as u128) as u64,
            },
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            _ => panic!("field mismatch in add"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        debug_assert!(self.check(a));
        match a {
            Scalar::Prime { p, v } => Scalar::Prime {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
            Scalar::Rational(x) => Scalar::Rational(-x),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        debug_assert!(self.check(a) && self.check(b));
        match (a, b) {
            (Scalar::Prime { p, v }, Scalar::Prime { v: w, .. }) => Scalar::Prime {
                p: *p,
                v: ((*v as u128 * *w as u128) % *p as u128) as u64,
            },
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            _ => panic!("field mismatch in mul"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        debug_assert!(self.check(a));
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match a {
            Scalar::Prime { p, v } => {
                // extended Euclid on (v, p)
                let (mut r0, mut r1) = (*v as i128, *p as i128);
                let (mut s0, mut s1) = (1i128, 0i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1);
                let m = *p as i128;
                let r = ((s0 % m) + m) % m;
                Ok(Scalar::Prime { p: *p, v: r as u64 })
            }
            Scalar::Rational(x) => Ok(Scalar::Rational(x.recip())),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `c` as an i64 multiple of one, for small literal signs.
    pub fn int(&self, n: i64) -> Scalar {
        self.from_i64(n)
    }
}

/// Single-entry-point arithmetic, surfacing the error contract
/// (`DivisionByZero`, `FieldMismatch`). `b` is ignored by `Neg` and `Inv`.
pub fn scalar_arith(a: &Scalar, b: Option<&Scalar>, op: ArithOp) -> Result<Scalar> {
    let field = a.field();
    let need_b = matches!(op, ArithOp::Add | ArithOp::Sub | ArithOp::Mul | ArithOp::Div);
    if need_b {
        let b = b.ok_or_else(|| Error::InvalidParameter("missing second operand".into()))?;
        if b.field() != field {
            return Err(Error::FieldMismatch);
        }
        return match op {
            ArithOp::Add => Ok(field.add(a, b)),
            ArithOp::Sub => Ok(field.sub(a, b)),
            ArithOp::Mul => Ok(field.mul(a, b)),
            ArithOp::Div => field.div(a, b),
            _ => unreachable!(),
        };
    }
    match op {
        ArithOp::Neg => Ok(field.neg(a)),
        ArithOp::Inv => field.inv(a),
        _ => unreachable!(),
    }
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Prime { p, .. } => FieldSpec::Prime { p: *p },
            Scalar::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Prime { v, .. } => *v == 0,
            Scalar::Rational(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Prime { v, .. } => *v == 1,
            Scalar::Rational(x) => x.is_one(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Prime { v, .. } => write!(f, "{v}"),
            Scalar::Rational(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else if x.denom().is_negative() {
                    write!(f, "{}/{}", -x.numer(), -x.denom())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn f7_examples() {
        let f = FieldSpec::prime(7).unwrap();
        let three = f.from_i64(3);
        let four = f.from_i64(4);
        assert_eq!(
            scalar_arith(&three, Some(&four), ArithOp::Mul).unwrap(),
            f.from_i64(5)
        );
        let q = FieldSpec::rational();
        assert_eq!(
            scalar_arith(&q.one(), Some(&q.one()), ArithOp::Sub).unwrap(),
            q.zero()
        );
        // brute-force inverse table of F_7: the unique b with 5*b = 1 is 3,
        // so 2/5 = 2*3 = 6
        let mut inv5 = None;
        for b in 1..7 {
            if (5 * b) % 7 == 1 {
                inv5 = Some(b);
            }
        }
        assert_eq!(inv5, Some(3));
        assert_eq!(
            scalar_arith(&f.from_i64(2), Some(&f.from_i64(5)), ArithOp::Div).unwrap(),
            f.from_i64(6)
        );
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let f = FieldSpec::prime(101).unwrap();
        assert_eq!(
            scalar_arith(&f.one(), Some(&f.zero()), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        assert_eq!(scalar_arith(&f.zero(), None, ArithOp::Inv), Err(Error::DivisionByZero));
        let q = FieldSpec::rational();
        assert_eq!(
            scalar_arith(&f.one(), Some(&q.one()), ArithOp::Add),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn field_axioms_randomized() {
        // associativity, distributivity, inverses on >= 10^4 random triples
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let fields = [FieldSpec::prime(101).unwrap(), FieldSpec::prime(3).unwrap()];
        for field in fields {
            for _ in 0..4000 {
                let a = field.from_i64(rng.gen_range(-500..500));
                let b = field.from_i64(rng.gen_range(-500..500));
                let c = field.from_i64(rng.gen_range(-500..500));
                assert_eq!(field.add(&field.add(&a, &b), &c), field.add(&a, &field.add(&b, &c)));
                assert_eq!(field.mul(&field.mul(&a, &b), &c), field.mul(&a, &field.mul(&b, &c)));
                assert_eq!(
                    field.mul(&a, &field.add(&b, &c)),
                    field.add(&field.mul(&a, &b), &field.mul(&a, &c))
                );
                assert_eq!(field.add(&a, &field.neg(&a)), field.zero());
                if !a.is_zero() {
                    assert_eq!(field.mul(&a, &field.inv(&a).unwrap()), field.one());
                }
            }
        }
        let q = FieldSpec::rational();
        for _ in 0..4000 {
            let a = q.from_i64(rng.gen_range(-50..50));
            let b = {
                let n = q.from_i64(rng.gen_range(-50..50));
                let d = q.from_i64(rng.gen_range(1..20));
                q.div(&n, &d).unwrap()
            };
            let c = q.from_i64(rng.gen_range(-50..50));
            assert_eq!(q.mul(&q.mul(&a, &b), &c), q.mul(&a, &q.mul(&b, &c)));
            assert_eq!(
                q.mul(&a, &q.add(&b, &c)),
                q.add(&q.mul(&a, &b), &q.mul(&a, &c))
            );
        }
    }

    #[test]
    fn exhaustive_inverses_small_primes() {
        for p in 2..=101u64 {
            if !is_prime_u64(p) {
                continue;
            }
            let f = FieldSpec::prime(p).unwrap();
            for a in 1..p {
                let s = Scalar::Prime { p, v: a };
                assert_eq!(f.mul(&s, &f.inv(&s).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let q = FieldSpec::rational();
        let s = q.parse_scalar("3/7").unwrap();
        assert_eq!(s.to_string(), "3/7");
        assert_eq!(q.parse_scalar("-6/-14").unwrap().to_string(), "3/7");
        let f = FieldSpec::prime(101).unwrap();
        assert_eq!(f.parse_scalar("-1").unwrap(), f.from_i64(100));
        assert!(f.parse_scalar("1/2").is_err());
        assert!(FieldSpec::prime(91).is_err()); // 7*13
    }
}
