//! Exact coefficient arithmetic: arbitrary-precision rationals and prime
//! fields `F_p` with `p < 2^31`.
//!
//! Floating point is never used anywhere in this crate; every identity the
//! library certifies is exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Tag identifying the coefficient field of a context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    /// The rational numbers.
    Rational,
    /// The prime field with `p` elements, `p < 2^31` and prime.
    Prime(u32),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "QQ"),
            FieldTag::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FieldTag {
    pub fn zero(&self) -> Scalar {
        match self {
            FieldTag::Rational => Scalar::Rat(BigRational::zero()),
            FieldTag::Prime(p) => Scalar::Mod { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldTag::Rational => Scalar::Rat(BigRational::one()),
            FieldTag::Prime(p) => Scalar::Mod { p: *p, v: 1 },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldTag::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldTag::Prime(p) => {
                let p64 = *p as i64;
                let mut r = n % p64;
                if r < 0 {
                    r += p64;
                }
                Scalar::Mod {
                    p: *p,
                    v: r as u32,
                }
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        match self {
            FieldTag::Rational => {
                Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
            FieldTag::Prime(_) => {
                let d = self.from_i64(den);
                self.from_i64(num).mul(&d.inv().expect("denominator is zero mod p"))
            }
        }
    }
}

/// An element of the active coefficient field.
///
/// `Mod` carries its modulus so values are self-describing; mixing moduli is
/// a programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { p: u32, v: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rat(_) => FieldTag::Rational,
            Scalar::Mod { p, .. } => FieldTag::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { p, v: a }, Scalar::Mod { p: q, v: b }) => {
                assert_eq!(p, q, "mixed moduli");
                let s = (*a as u64 + *b as u64) % (*p as u64);
                Scalar::Mod { p: *p, v: s as u32 }
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { p, v } => {
                let v = if *v == 0 { 0 } else { p - v };
                Scalar::Mod { p: *p, v }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { p, v: a }, Scalar::Mod { p: q, v: b }) => {
                assert_eq!(p, q, "mixed moduli");
                let m = (*a as u64 * *b as u64) % (*p as u64);
                Scalar::Mod { p: *p, v: m as u32 }
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Mod { p, v } => {
                if *v == 0 {
                    return None;
                }
                // extended Euclid on (v, p)
                let (mut r0, mut r1) = (*v as i64, *p as i64);
                let (mut s0, mut s1) = (1i64, 0i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1, "modulus not prime or value not a unit");
                let mut s = s0 % (*p as i64);
                if s < 0 {
                    s += *p as i64;
                }
                Some(Scalar::Mod {
                    p: *p,
                    v: s as u32,
                })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv().expect("division by zero"))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

/// True when the rational is negative (used for `a - b` pretty-printing).
pub fn scalar_is_negative(s: &Scalar) -> bool {
    match s {
        Scalar::Rat(r) => r.is_negative(),
        Scalar::Mod { .. } => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let f = FieldTag::Rational;
        let a = f.from_ratio(3, 2);
        let b = f.from_i64(-2);
        assert_eq!(a.mul(&b), f.from_i64(-3));
        assert_eq!(a.add(&b), f.from_ratio(-1, 2));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.inv().unwrap(), f.from_ratio(2, 3));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldTag::Prime(5);
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(a.mul(&b), f.from_i64(2));
        assert_eq!(a.add(&b), f.from_i64(2));
        assert_eq!(a.inv().unwrap(), f.from_i64(2)); // 3 * 2 = 6 = 1 mod 5
        assert_eq!(f.from_ratio(1, 3), f.from_i64(2));
    }

    #[test]
    fn display_reduced_fraction() {
        let f = FieldTag::Rational;
        assert_eq!(f.from_ratio(6, 4).to_string(), "3/2");
        assert_eq!(f.from_i64(7).to_string(), "7");
    }
}
