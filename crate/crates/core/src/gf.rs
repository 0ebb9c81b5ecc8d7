//! Arithmetic in GF(p^e) for small prime powers.
//!
//! Elements are integers in `[0, q)` holding the base-`p` digits of a
//! polynomial residue modulo a fixed irreducible polynomial (digit `i` is
//! the coefficient of `x^i`). Multiplication goes through log/antilog tables
//! built from a primitive element.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Addition is tabulated up to this order; above it digits are added one by one.
const ADD_TABLE_MAX: u32 = 1024;

/// A field element, encoded as the base-`p` digit string of its residue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite field GF(p^e).
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    /// Coefficients `c_0..c_{e-1}` of the monic modulus `x^e + c_{e-1} x^{e-1} + ... + c_0`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i` in `[0, 2(q-1))`, doubled to skip the reduction.
    exp: Vec<u16>,
    log: Vec<u32>,
    neg: Vec<u16>,
    add: Option<Vec<u16>>,
    /// `x -> x^t` when `e` is even.
    conj: Option<Vec<u16>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, e)` if it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first, no trailing zeros.

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|x| a * x % p == 1).expect("nonzero residue mod a prime")
}

/// Digits of `index` in base `p`, `len` of them.
fn digits(mut index: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = index % p;
        index /= p;
    }
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for tail in 0..p.pow(d as u32) {
            let mut divisor = digits(tail, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `e`, comparing `(c_0, c_1, ...)` lexicographically.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let total = p.pow(e as u32);
    for rank in 0..total {
        // rank enumerates (c_0, ..., c_{e-1}) with c_0 most significant
        let mut coeffs = digits(rank, p, e);
        coeffs.reverse();
        let mut poly = coeffs.clone();
        poly.push(1);
        if is_irreducible(&poly, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl Field {
    /// Builds GF(p^e) with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::OrderTooLarge { p, e })?;
        let modulus = smallest_irreducible(p, e);
        let eu = e as usize;

        // multiplication by x on digit vectors, used to build the power table
        let times_x = |v: &[u32]| -> Vec<u32> {
            let top = v[eu - 1];
            let mut out = vec![0; eu];
            for i in (1..eu).rev() {
                out[i] = v[i - 1];
            }
            for i in 0..eu {
                out[i] = (out[i] + p * p - top * modulus[i] % p) % p;
            }
            out
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let mul_slow = |a: u32, b: u32| -> u32 {
            // schoolbook product reduced by repeated multiplication by x
            let av = digits(a, p, eu);
            let bv = digits(b, p, eu);
            let mut acc = vec![0u32; eu];
            let mut shifted = av;
            for &bd in &bv {
                for i in 0..eu {
                    acc[i] = (acc[i] + bd * shifted[i]) % p;
                }
                shifted = if eu == 1 { shifted } else { times_x(&shifted) };
            }
            encode(&acc)
        };
        let mul_slow = |a: u32, b: u32| -> u32 {
            if eu == 1 {
                a * b % p
            } else {
                mul_slow(a, b)
            }
        };

        // smallest generator of the multiplicative group
        let order = q - 1;
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1u32;
                for k in 1..=order {
                    x = mul_slow(x, g);
                    if x == 1 {
                        return k == order;
                    }
                }
                false
            })
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x as u16;
            log[x as usize] = i;
            x = mul_slow(x, generator);
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }

        let add_digits = |a: u32, b: u32| -> u32 {
            let av = digits(a, p, eu);
            let bv = digits(b, p, eu);
            let s: Vec<u32> = av.iter().zip(&bv).map(|(x, y)| (x + y) % p).collect();
            encode(&s)
        };
        let neg: Vec<u16> = (0..q)
            .map(|a| {
                let s: Vec<u32> = digits(a, p, eu).iter().map(|&d| (p - d) % p).collect();
                encode(&s) as u16
            })
            .collect();
        let add = (p != 2 && q <= ADD_TABLE_MAX).then(|| {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b) as u16;
                }
            }
            t
        });

        let mut field = Field {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            neg,
            add,
            conj: None,
        };
        if e % 2 == 0 {
            let t = p.pow(e / 2);
            let conj = (0..q)
                .map(|a| field.pow(Elem(a as u16), t as u64).0)
                .collect();
            field.conj = Some(conj);
        }
        Ok(field)
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn with_order(q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Field::new(p, e)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Low-degree-first coefficients of the monic modulus, leading 1 omitted.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Square root of the order when `e` is even.
    pub fn sqrt_order(&self) -> Option<u32> {
        (self.e % 2 == 0).then(|| self.p.pow(self.e / 2))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(|a| Elem(a as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q).map(|a| Elem(a as u16))
    }

    /// The element `x^s`, for `s < e`. These form an additive basis over GF(p).
    pub fn additive_basis(&self, s: u32) -> Elem {
        Elem(self.p.pow(s) as u16)
    }

    /// Embeds an integer via its residue in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u16)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        match &self.add {
            Some(t) => Elem(t[a.index() * self.q as usize + b.index()]),
            None => self.add_digitwise(a, b),
        }
    }

    fn add_digitwise(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = (a.0 as u32, b.0 as u32);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Elem(out as u16)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        let order = self.q - 1;
        Some(Elem(self.exp[((order - self.log[a.index()]) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a.index()] as u64 * (k % order)) % order;
        Elem(self.exp[l as usize])
    }

    /// Power of the fixed primitive element.
    pub fn primitive_pow(&self, k: u32) -> Elem {
        Elem(self.exp[(k % (self.q - 1)) as usize])
    }

    /// `x -> x^t` where `q = t^2`.
    pub fn conjugate(&self, a: Elem) -> Result<Elem> {
        match &self.conj {
            Some(c) => Ok(Elem(c[a.index()])),
            None => Err(Error::NoConjugation { q: self.q }),
        }
    }

    /// Conjugation without the parity check; callers must hold an even-degree field.
    #[inline]
    pub(crate) fn conj(&self, a: Elem) -> Elem {
        Elem(self.conj.as_ref().expect("even-degree field")[a.index()])
    }

    pub fn has_conjugation(&self) -> bool {
        self.conj.is_some()
    }

    /// `x * conj(x) = x^(t+1)`, which lies in GF(t).
    pub fn norm(&self, a: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.conjugate(a)?))
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a.is_zero() || self.p == 2 || self.log[a.index()] % 2 == 0
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields_up_to_16() -> Vec<Field> {
        [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
            .into_iter()
            .map(|q| Field::with_order(q).unwrap())
            .collect()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(2, 0), Err(Error::ZeroDegree)));
        assert!(matches!(Field::new(2, 17), Err(Error::OrderTooLarge { .. })));
        assert!(matches!(Field::with_order(6), Err(Error::NotPrimePower(6))));
        assert!(Field::new(2, 16).is_ok());
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0]);
        assert_eq!(f.elements().count(), 2);
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.mul(Elem(3), Elem(4)), Elem(2));
        assert_eq!(f.add(Elem(3), Elem(4)), Elem(2));
    }

    #[test]
    fn smallest_moduli() {
        // x^2 + x + 1, x^2 + 1 over GF(3), x^3 + x^2 + 1, x^4 + x^3 + 1
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 0, 0, 1]);
    }

    #[test]
    fn axioms_exhaustive_small_fields() {
        for f in fields_up_to_16() {
            let els: Vec<Elem> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                    assert_eq!(f.pow(a, (f.order() - 1) as u64), Elem::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
            assert_eq!(f.inv(Elem::ZERO), None);
        }
    }

    #[test]
    fn digitwise_addition_matches_table() {
        // GF(3^7) is above the table threshold
        let big = Field::new(3, 7).unwrap();
        assert!(big.add.is_none());
        for a in (0..big.order()).step_by(97) {
            for b in (0..big.order()).step_by(89) {
                let (a, b) = (Elem(a as u16), Elem(b as u16));
                assert_eq!(big.sub(big.add(a, b), b), a);
            }
        }
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add_digitwise(a, b));
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for f in fields_up_to_16() {
            let g = f.primitive_pow(1);
            let mut seen = std::collections::HashSet::new();
            for k in 0..f.order() - 1 {
                seen.insert(f.pow(g, k as u64));
            }
            assert_eq!(seen.len() as u32, f.order() - 1);
        }
    }

    #[test]
    fn conjugation_gf4() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.sqrt_order(), Some(2));
        assert_eq!(f.conjugate(Elem(0)).unwrap(), Elem(0));
        assert_eq!(f.conjugate(Elem(1)).unwrap(), Elem(1));
        assert_eq!(f.conjugate(Elem(2)).unwrap(), Elem(3));
        assert_eq!(f.conjugate(Elem(3)).unwrap(), Elem(2));
    }

    #[test]
    fn conjugation_needs_even_degree() {
        let f = Field::new(2, 3).unwrap();
        assert!(matches!(f.conjugate(Elem(1)), Err(Error::NoConjugation { q: 8 })));
    }

    #[test]
    fn gf9_unit_norm_elements() {
        // exhaustive count of x^(t+1) = 1 in GF(9): t + 1 = 4
        let f = Field::new(3, 2).unwrap();
        let count = f.elements().filter(|&x| f.pow(x, 4) == Elem::ONE).count();
        assert_eq!(count, 4);
        for x in f.elements() {
            let n = f.norm(x).unwrap();
            assert_eq!(f.pow(n, 3), n);
        }
    }

    #[test]
    fn conjugation_is_involution_fixing_subfield() {
        for q in [4u32, 9, 16] {
            let f = Field::with_order(q).unwrap();
            let t = f.sqrt_order().unwrap() as usize;
            let mut fixed = 0;
            for x in f.elements() {
                let c = f.conjugate(x).unwrap();
                assert_eq!(f.conjugate(c).unwrap(), x);
                if c == x {
                    fixed += 1;
                }
            }
            assert_eq!(fixed, t);
        }
    }
}
