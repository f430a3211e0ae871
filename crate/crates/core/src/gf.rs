//! Arithmetic in GF(q) for prime powers q ≤ 32.
//!
//! An element is the integer `n = Σ aᵢ·pⁱ`, where `Σ aᵢ·xⁱ` is its
//! representative modulo the fixed polynomial listed in [`modulus_for`].
//! The extension fields use the Conway polynomials:
//!
//! | q  | modulus          |
//! |----|------------------|
//! | 4  | x²+x+1           |
//! | 8  | x³+x+1           |
//! | 9  | x²+2x+2          |
//! | 16 | x⁴+x+1           |
//! | 25 | x²+4x+2          |
//! | 27 | x³+2x+1          |
//! | 32 | x⁵+x²+1          |
//!
//! Prime fields use `x − g` with `g` the least primitive root; the modulus
//! does not affect their arithmetic.

use crate::error::{Error, Result};

/// A field element, encoded as described in the module docs.
pub type Elem = u8;

pub const MAX_ORDER: usize = 32;

/// Full operation tables for one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    q: usize,
    p: usize,
    e: u32,
    modulus: Vec<u8>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    sqrt_q: Option<usize>,
    conj: Vec<Elem>,
}

/// Splits `q` into `(p, e)` with `q = p^e`, if possible.
pub fn prime_power(q: usize) -> Option<(usize, u32)> {
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

fn least_primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| {
            let mut x = 1;
            for k in 1..p - 1 {
                x = x * g % p;
                if x == 1 && k < p - 1 {
                    return false;
                }
            }
            true
        })
        .expect("every prime has a primitive root")
}

/// The fixed modulus for GF(p^e), coefficients from the constant term up.
pub fn modulus_for(p: usize, e: u32) -> Vec<u8> {
    match (p, e) {
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (2, 4) => vec![1, 1, 0, 0, 1],
        (2, 5) => vec![1, 0, 1, 0, 0, 1],
        (3, 2) => vec![2, 2, 1],
        (3, 3) => vec![1, 2, 0, 1],
        (5, 2) => vec![2, 4, 1],
        (_, 1) => vec![((p - least_primitive_root(p)) % p) as u8, 1],
        _ => unreachable!("no modulus for {p}^{e}"),
    }
}

fn digits(mut n: usize, p: usize, e: u32) -> Vec<usize> {
    (0..e)
        .map(|_| {
            let d = n % p;
            n /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn poly_mul_mod(a: &[usize], b: &[usize], modulus: &[u8], p: usize) -> Vec<usize> {
    let e = modulus.len() - 1;
    let mut prod = vec![0usize; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (i, &mc) in modulus.iter().enumerate().take(e) {
            let idx = k - e + i;
            prod[idx] = (prod[idx] + (p - c) * mc as usize) % p;
        }
        prod[k] = 0;
    }
    prod.truncate(e);
    prod
}

impl FieldTable {
    /// Builds the tables for GF(q).
    pub fn new(q: usize) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::OrderTooLarge(q));
        }
        let modulus = modulus_for(p, e);
        let dig: Vec<Vec<usize>> = (0..q).map(|n| digits(n, p, e)).collect();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<usize> = dig[a].iter().zip(&dig[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as Elem;
                mul[a * q + b] = undigits(&poly_mul_mod(&dig[a], &dig[b], &modulus, p), p) as Elem;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem)
            .collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .expect("modulus must be irreducible") as Elem;
        }
        let sqrt_q = (e % 2 == 0).then(|| p.pow(e / 2));
        let mut field = FieldTable {
            q,
            p,
            e,
            modulus,
            add,
            mul,
            neg,
            inv,
            sqrt_q,
            conj: Vec::new(),
        };
        if let Some(r) = sqrt_q {
            field.conj = (0..q).map(|a| field.pow(a as Elem, r as u64)).collect();
        }
        Ok(field)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// `√q` when q is a square.
    pub fn sqrt_order(&self) -> Option<usize> {
        self.sqrt_q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    /// Inverse of an element the caller knows to be nonzero.
    #[inline]
    pub(crate) fn recip(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The involution `a ↦ a^√q`.
    pub fn conj(&self, a: Elem) -> Result<Elem> {
        if self.sqrt_q.is_none() {
            return Err(Error::NotASquareOrder(self.q));
        }
        Ok(self.conj[a as usize])
    }

    #[inline]
    pub(crate) fn conj_unchecked(&self, a: Elem) -> Elem {
        self.conj[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q as u16).map(|a| a as Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.q as u16).map(|a| a as Elem)
    }

    /// Whether `t² + t + a` has no root in the field.
    pub fn is_irreducible_artin(&self, a: Elem) -> bool {
        self.elements()
            .all(|t| self.add(self.add(self.mul(t, t), t), a) != 0)
    }
}
