use std::cmp::Ordering;

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 16;

/// Exponent vector with cached total degree. `comp` is the free-module
/// component index; ring monomials have `comp == 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
    comp: u32,
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { exps: [0; MAX_VARS], deg: 0, comp: 0 }
    }

    pub fn var(i: usize) -> Monomial {
        let mut m = Monomial::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Result<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(Error::Input(format!("at most {MAX_VARS} variables are supported")));
        }
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            if e > u16::MAX as u32 {
                return Err(Error::ExponentOverflow);
            }
            m.exps[i] = e as u16;
            m.deg += e;
        }
        Ok(m)
    }

    pub fn unit(comp: u32) -> Monomial {
        Monomial { comp, ..Monomial::one() }
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self, n: usize) -> Vec<u32> {
        self.exps[..n].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn deg(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn comp(&self) -> u32 {
        self.comp
    }

    pub fn with_comp(mut self, comp: u32) -> Monomial {
        self.comp = comp;
        self
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Degree restricted to the variables flagged in `mask`.
    pub fn masked_deg(&self, mask: u32) -> u32 {
        let mut s = 0;
        for i in 0..MAX_VARS {
            if mask >> i & 1 == 1 {
                s += self.exps[i] as u32;
            }
        }
        s
    }

    pub fn weighted_deg(&self, weights: &[u32]) -> u64 {
        weights.iter().enumerate().map(|(i, &w)| w as u64 * self.exps[i] as u64).sum()
    }

    /// Support bitmask, used to reject divisibility tests quickly.
    #[inline]
    pub fn sev(&self) -> u32 {
        let mut s = 0u32;
        for i in 0..MAX_VARS {
            if self.exps[i] != 0 {
                s |= 1 << i;
            }
        }
        s
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut m = *self;
        for i in 0..MAX_VARS {
            let e = self.exps[i] as u32 + other.exps[i] as u32;
            if e > u16::MAX as u32 {
                return Err(Error::ExponentOverflow);
            }
            m.exps[i] = e as u16;
        }
        m.deg = self.deg + other.deg;
        m.comp = self.comp + other.comp;
        Ok(m)
    }

    /// Product; component indices add, so at most one factor should carry one.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].checked_add(other.exps[i]).expect("exponent overflow");
        }
        m.deg = self.deg + other.deg;
        m.comp = self.comp + other.comp;
        m
    }

    /// `self | other` as ring monomials (components ignored).
    #[inline]
    pub fn divides_exps(&self, other: &Monomial) -> bool {
        if self.deg > other.deg {
            return false;
        }
        (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    /// Divisibility of module monomials: same component and exponent-wise.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.comp == other.comp && self.divides_exps(other)
    }

    /// `other / self` as a ring monomial; requires divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::one();
        for i in 0..MAX_VARS {
            m.exps[i] = other.exps[i] - self.exps[i];
        }
        m.deg = other.deg - self.deg;
        m
    }

    pub fn checked_div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides_exps(self) {
            return None;
        }
        let comp = if divisor.comp == self.comp {
            0
        } else if divisor.comp == 0 {
            self.comp
        } else {
            return None;
        };
        Some(divisor.quotient_of(self).with_comp(comp))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        let mut deg = 0;
        for i in 0..MAX_VARS {
            let e = self.exps[i].max(other.exps[i]);
            m.exps[i] = e;
            deg += e as u32;
        }
        m.deg = deg;
        m
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::one();
        for i in 0..MAX_VARS {
            let e = self.exps[i].min(other.exps[i]);
            m.exps[i] = e;
            m.deg += e as u32;
        }
        m
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// Drop the exponents of the masked variables.
    pub fn strip(&self, mask: u32) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            if mask >> i & 1 == 1 {
                m.deg -= m.exps[i] as u32;
                m.exps[i] = 0;
            }
        }
        m
    }

    /// Keep only the masked variables.
    pub fn keep(&self, mask: u32) -> Monomial {
        self.strip(!mask).with_comp(self.comp)
    }

    /// Rearrange exponents: slot `map[i]` of the result receives exponent `i`.
    /// Entries equal to `usize::MAX` are dropped (their exponents must be zero).
    pub fn remap(&self, map: &[usize]) -> Monomial {
        let mut m = Monomial::one();
        for (i, &j) in map.iter().enumerate() {
            if j != usize::MAX {
                m.exps[j] = self.exps[i];
            }
        }
        m.deg = self.deg;
        m.comp = self.comp;
        m
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        let old = self.exps[i] as u32;
        self.exps[i] = e as u16;
        self.deg = self.deg - old + e;
    }
}

/// Monomial orders. Modules use position-over-term with lower component
/// indices ranking higher.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Degree in the masked block first, then grevlex.
    Elimination { mask: u32 },
    /// Degree in the masked T-block first, then grevlex.
    Bigraded { t_mask: u32 },
}

#[inline]
fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.deg.cmp(&b.deg) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..MAX_VARS).rev() {
        if a.exps[i] != b.exps[i] {
            return b.exps[i].cmp(&a.exps[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    #[inline]
    pub fn cmp_exps(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => {
                for i in 0..MAX_VARS {
                    if a.exps[i] != b.exps[i] {
                        return a.exps[i].cmp(&b.exps[i]);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Elimination { mask } => {
                a.masked_deg(*mask).cmp(&b.masked_deg(*mask)).then_with(|| grevlex(a, b))
            }
            MonomialOrder::Bigraded { t_mask } => {
                a.masked_deg(*t_mask).cmp(&b.masked_deg(*t_mask)).then_with(|| grevlex(a, b))
            }
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if a.comp != b.comp {
            return b.comp.cmp(&a.comp);
        }
        self.cmp_exps(a, b)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Grevlex => "grevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::Elimination { .. } => "elimination",
            MonomialOrder::Bigraded { .. } => "bigraded",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exps(e).unwrap()
    }

    #[test]
    fn grevlex_tiebreak_on_last_variable() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_and_elimination() {
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 100])), Ordering::Greater);
        let elim = MonomialOrder::Elimination { mask: 0b10 };
        assert_eq!(elim.cmp(&m(&[1, 1]), &m(&[50, 0])), Ordering::Greater);
    }

    #[test]
    fn overflow_is_an_error() {
        assert!(Monomial::from_exps(&[70000]).is_err());
        let a = m(&[u16::MAX as u32]);
        assert!(a.try_mul(&m(&[1])).is_err());
    }

    #[test]
    fn position_over_term() {
        let o = MonomialOrder::Grevlex;
        let a = m(&[0, 0, 1]).with_comp(0);
        let b = m(&[5, 5, 5]).with_comp(1);
        assert_eq!(o.cmp(&a, &b), Ordering::Greater);
    }
}
