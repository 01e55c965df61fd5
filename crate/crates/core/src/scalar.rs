use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const DEFAULT_PRIME: u32 = 32003;

/// Coefficient field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Small(0, 1),
            Field::Prime(p) => Scalar::Mod(0, p),
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Small(v, 1),
            Field::Prime(p) => Scalar::Mod(v.rem_euclid(p as i64) as u32, p),
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::from_big(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod(r.to_u32().unwrap(), p)
            }
        }
    }

    /// Brings a scalar into this field. Rationals are reduced modulo p when the
    /// field is finite; panics if the denominator vanishes mod p.
    pub fn coerce(self, s: &Scalar) -> Scalar {
        match (self, s) {
            (Field::Rational, Scalar::Mod(..)) => panic!("cannot lift a residue to the rationals"),
            (Field::Rational, _) => s.clone(),
            (Field::Prime(p), Scalar::Mod(v, q)) => {
                assert_eq!(p, *q, "mixed prime fields");
                Scalar::Mod(*v, p)
            }
            (Field::Prime(p), _) => {
                let (n, d) = s.to_big_parts();
                let num = Field::Prime(p).from_bigint(&n);
                let den = Field::Prime(p).from_bigint(&d);
                num.div(&den)
            }
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn parse(text: &str) -> Option<Field> {
        let t = text.trim();
        if t == "Q" || t == "QQ" {
            return Some(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("ZZ/"))?;
        let p: u32 = inner.trim().parse().ok()?;
        if is_prime(p) {
            Some(Field::Prime(p))
        } else {
            None
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p as u64 {
        if p as u64 % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Exact field element. Rationals are kept in lowest terms with a positive
/// denominator; they live in machine words until they outgrow them.
#[derive(Clone, Debug)]
pub enum Scalar {
    Small(i64, i64),
    Big(Box<BigRational>),
    Mod(u32, u32),
}

fn reduce128(n: i128, d: i128) -> Scalar {
    debug_assert!(d != 0);
    let g = n.gcd(&d);
    let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) if a != i64::MIN => Scalar::Small(a, b),
        _ => Scalar::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
    }
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a != 0, "division by zero in GF({p})");
    let (mut t, mut nt) = (0i64, 1i64);
    let (mut r, mut nr) = (p as i64, a as i64);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(p as i64) as u32
}

impl Scalar {
    pub fn from_big(r: BigRational) -> Scalar {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Scalar::Small(n, d);
            }
        }
        Scalar::Big(Box::new(r))
    }

    pub fn rational(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        reduce128(num as i128, den as i128)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n == 0,
            Scalar::Big(r) => r.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Small(n, d) => *n == 1 && *d == 1,
            Scalar::Big(r) => r.is_one(),
            Scalar::Mod(v, _) => *v == 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n < 0,
            Scalar::Big(r) => r.is_negative(),
            Scalar::Mod(..) => false,
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Small(_, d) => *d == 1,
            Scalar::Big(r) => r.is_integer(),
            Scalar::Mod(..) => true,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod(_, p) => Field::Prime(*p),
            _ => Field::Rational,
        }
    }

    pub fn to_big_parts(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(r) => (r.numer().clone(), r.denom().clone()),
            Scalar::Mod(v, _) => (BigInt::from(*v), BigInt::one()),
        }
    }

    pub fn to_big_rational(&self) -> BigRational {
        let (n, d) = self.to_big_parts();
        BigRational::new_raw(n, d)
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(n, 1) => Some(*n),
            Scalar::Mod(v, _) => Some(*v as i64),
            _ => None,
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Small(n, d) => {
                assert!(*n != 0, "division by zero");
                reduce128(*d as i128, *n as i128)
            }
            Scalar::Big(r) => Scalar::from_big(r.recip()),
            Scalar::Mod(v, p) => Scalar::Mod(inv_mod(*v, *p), *p),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn big_op(&self, other: &Scalar, op: fn(BigRational, BigRational) -> BigRational) -> Scalar {
        Scalar::from_big(op(self.to_big_rational(), other.to_big_rational()))
    }

    /// Total order used for deterministic tie-breaking; numeric for rationals.
    pub fn cmp_canonical(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Mod(a, _), Scalar::Mod(b, _)) => a.cmp(b),
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big_rational().cmp(&other.to_big_rational()),
        }
    }
}

fn unify<'a>(a: &'a Scalar, b: &'a Scalar) -> Option<(Scalar, Scalar)> {
    match (a, b) {
        (Scalar::Mod(_, p), Scalar::Mod(..)) | (Scalar::Mod(_, p), _) | (_, Scalar::Mod(_, p)) => {
            let f = Field::Prime(*p);
            Some((f.coerce(a), f.coerce(b)))
        }
        _ => None,
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => a == c && b == d,
            (Scalar::Big(a), Scalar::Big(b)) => a == b,
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => a == b && p == q,
            (Scalar::Mod(..), _) | (_, Scalar::Mod(..)) => match unify(self, other) {
                Some((x, y)) => x == y,
                None => false,
            },
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Small(a, 1), Scalar::Small(c, 1)) => match a.checked_add(*c) {
                Some(s) if s != i64::MIN => Scalar::Small(s, 1),
                _ => reduce128(*a as i128 + *c as i128, 1),
            },
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                reduce128(a * d + c * b, b * d)
            }
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => {
                let s = *a as u64 + *b as u64;
                Scalar::Mod((s % *p as u64) as u32, *p)
            }
            (Scalar::Mod(..), _) | (_, Scalar::Mod(..)) => {
                let (x, y) = unify(self, rhs).unwrap();
                &x + &y
            }
            _ => self.big_op(rhs, |x, y| x + y),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Small(a, 1), Scalar::Small(c, 1)) => match a.checked_mul(*c) {
                Some(s) if s != i64::MIN => Scalar::Small(s, 1),
                _ => reduce128(*a as i128 * *c as i128, 1),
            },
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                // cross-cancel first to keep the products small
                let g1 = a.gcd(d).max(1);
                let g2 = c.gcd(b).max(1);
                let (a, d) = ((a / g1) as i128, (d / g1) as i128);
                let (c, b) = ((c / g2) as i128, (b / g2) as i128);
                reduce128(a * c, b * d)
            }
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => Scalar::Mod(mul_mod(*a, *b, *p), *p),
            (Scalar::Mod(..), _) | (_, Scalar::Mod(..)) => {
                let (x, y) = unify(self, rhs).unwrap();
                &x * &y
            }
            _ => self.big_op(rhs, |x, y| x * y),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Small(n, d) => Scalar::Small(-n, *d),
            Scalar::Big(r) => Scalar::from_big(-(**r).clone()),
            Scalar::Mod(v, p) => Scalar::Mod(if *v == 0 { 0 } else { p - v }, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(n, 1) => write!(f, "{n}"),
            Scalar::Small(n, d) => write!(f, "{n}/{d}"),
            Scalar::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_canonical() {
        let a = Scalar::rational(6, -4);
        assert_eq!(a, Scalar::Small(-3, 2));
        let b = &a + &Scalar::rational(3, 2);
        assert!(b.is_zero());
        assert_eq!(format!("{}", Scalar::rational(10, 5)), "2");
    }

    #[test]
    fn overflow_promotes_to_big_and_back() {
        let big = Scalar::Small(i64::MAX, 1);
        let sq = &big * &big;
        assert!(matches!(sq, Scalar::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::Prime(DEFAULT_PRIME);
        let x = f.from_i64(12345);
        assert!((&x * &x.inv()).is_one());
        assert_eq!(f.from_i64(-1), Scalar::Mod(32002, 32003));
        let half = f.coerce(&Scalar::rational(1, 2));
        assert!((&half * &f.from_i64(2)).is_one());
    }

    #[test]
    fn field_names() {
        assert_eq!(Field::parse("Q"), Some(Field::Rational));
        assert_eq!(Field::parse("GF(32003)"), Some(Field::Prime(32003)));
        assert_eq!(Field::parse("GF(32004)"), None);
        assert_eq!(Field::Prime(7).to_string(), "GF(7)");
    }
}
