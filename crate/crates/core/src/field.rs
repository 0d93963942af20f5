//! Prime-power fields `F_{p^e}` with integer-encoded elements.
//!
//! The residue `a_0 + a_1 x + ... + a_{e-1} x^{e-1}` modulo the field's monic
//! modulus is encoded as the integer `a_0 + a_1 p + ... + a_{e-1} p^{e-1}`.
//! This encoding is the only element representation that leaves the crate:
//! file formats, hashes and canonical orderings all use it.
//!
//! Fields of order at most `2^20` use log/antilog tables; larger fields fall
//! back to schoolbook polynomial arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer encoding of a field element.
pub type Elem = u32;

const TABLE_LIMIT: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// Parameters of `F_{p^e} = F_p[x] / (modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Coefficients of the monic modulus, constant term first (`e + 1` entries).
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates `p`, `e` and the modulus. When `modulus` is `None` the monic
    /// irreducible of degree `e` with the smallest integer encoding is used.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let order = (p as u64).checked_pow(e).filter(|&o| o <= u32::MAX as u64);
        if order.is_none() {
            return Err(Error::Field(format!("{p}^{e} does not fit in 32 bits")));
        }
        let modulus = match modulus {
            None => default_modulus(p, e),
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::Field(format!(
                        "modulus must be monic of degree {e}, got {m:?}"
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::Field("modulus coefficient out of range".into()));
                }
                if !is_irreducible(p, &m) {
                    return Err(Error::Field(format!("modulus {m:?} is reducible over F_{p}")));
                }
                m
            }
        };
        Ok(FieldSpec { p, e, modulus })
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
}

/// `(p, a)` with `q = p^a`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::Field(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q ≥ 2 has a divisor");
    let (mut r, mut a) = (q, 0);
    while r % p == 0 {
        r /= p;
        a += 1;
    }
    if r != 1 {
        return Err(Error::Field(format!("{q} is not a prime power")));
    }
    Ok((p, a))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Minimal-encoding monic irreducible polynomial of degree `e` over `F_p`.
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for low in 0..count {
        let mut coeffs = poly::from_int(low, p, e as usize);
        coeffs.push(1);
        if is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Rabin's test: monic `f` of degree `e` is irreducible iff
/// `x^(p^e) = x mod f` and `gcd(x^(p^(e/r)) - x, f) = 1` for each prime `r | e`.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let f = poly::trimmed(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let e = f.len() - 1;
    if e == 1 {
        return true;
    }
    let x = poly::rem(&[0, 1], &f, p);
    let mut frob = vec![x.clone()];
    let mut h = x.clone();
    for _ in 0..e {
        h = poly::powmod(&h, p as u64, &f, p);
        frob.push(h.clone());
    }
    if frob[e] != x {
        return false;
    }
    for r in prime_factors(e as u64) {
        let t = poly::sub(&frob[e / r as usize], &x, p);
        let g = poly::gcd(&t, &f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug)]
enum Arith {
    Tables { log: Vec<u32>, exp: Vec<u32> },
    Poly,
}

/// A finite field with precomputed arithmetic. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    order: u32,
    mod_bits: u64,
    arith: Arith,
    /// Addition table for small odd-characteristic extensions.
    add_table: Option<std::sync::Arc<Vec<Elem>>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let spec = FieldSpec::new(spec.p, spec.e, Some(spec.modulus))?;
        let order = spec.order() as u32;
        let mod_bits = if spec.p == 2 {
            spec.modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        let mut field = Field {
            spec,
            order,
            mod_bits,
            arith: Arith::Poly,
            add_table: None,
        };
        if (order as u64) <= TABLE_LIMIT {
            field.build_tables();
        }
        if field.spec.p != 2 && field.spec.e > 1 && order <= ADD_TABLE_LIMIT {
            let table = (0..order)
                .flat_map(|a| (0..order).map(move |b| (a, b)))
                .map(|(a, b)| field.add_slow(a, b))
                .collect();
            field.add_table = Some(std::sync::Arc::new(table));
        }
        Ok(field)
    }

    /// Convenience constructor; `modulus = None` selects the default modulus.
    pub fn make(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        Field::new(FieldSpec::new(p, e, modulus)?)
    }

    fn build_tables(&mut self) {
        let q1 = self.order as u64 - 1;
        let factors = prime_factors(q1);
        let prim = (1..self.order)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, q1 / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let n = q1 as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let mut acc = 1u32;
        for i in 0..n.max(1) {
            exp[i] = acc;
            log[acc as usize] = i as u32;
            acc = self.mul_slow(acc, prim);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        if n == 1 {
            exp[1] = 1;
        }
        self.arith = Arith::Tables { log, exp };
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn e(&self) -> u32 {
        self.spec.e
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// The residue class of `x`, which generates the field over `F_p`.
    pub fn generator(&self) -> Elem {
        if self.spec.e == 1 {
            // x is congruent to -modulus[0] in a prime field
            (self.spec.p - self.spec.modulus[0]) % self.spec.p
        } else {
            self.spec.p
        }
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// Image of the integer `k` in the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        k.rem_euclid(self.spec.p as i64) as Elem
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        poly::from_int(a as u64, self.spec.p, self.spec.e as usize)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        let p = self.spec.p as u64;
        digits.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return a ^ b;
        }
        if self.spec.e == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if let Some(t) = &self.add_table {
            return t[(a * self.order + b) as usize];
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.spec.e {
            let d = (a % p + b % p) % p;
            out += d as u64 * place;
            place *= p as u64;
            a /= p;
            b /= p;
        }
        out as Elem
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        if self.spec.e == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.spec.e {
            let d = (p - a % p) % p;
            out += d as u64 * place;
            place *= p as u64;
            a /= p;
        }
        out as Elem
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.arith {
            Arith::Tables { log, exp } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize]
                }
            }
            Arith::Poly => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        match &self.arith {
            Arith::Tables { log, exp } => {
                let n = self.order - 1;
                Ok(exp[((n - log[a as usize]) % n) as usize])
            }
            Arith::Poly => Ok(self.pow_slow(a, self.order as u64 - 2)),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.arith {
            Arith::Tables { log, exp } => {
                let n = self.order as u64 - 1;
                exp[((log[a as usize] as u64 * (k % n)) % n) as usize]
            }
            Arith::Poly => self.pow_slow(a, k),
        }
    }

    /// `a^(p^d)`, the `d`-fold Frobenius.
    pub fn frobenius(&self, a: Elem, d: u32) -> Elem {
        if a == 0 {
            return 0;
        }
        let n = self.order as u128 - 1;
        let mut k = 1u128;
        for _ in 0..d {
            k = (k * self.spec.p as u128) % n.max(1);
        }
        self.pow(a, k as u64)
    }

    /// Relative norm to the subfield `F_{p^d}` as the product of the
    /// `e/d` conjugates `a^((p^d)^i)`.
    pub fn norm(&self, a: Elem, d: u32) -> Result<Elem> {
        if d == 0 || self.spec.e % d != 0 {
            return Err(Error::Field(format!(
                "subfield degree {d} does not divide {}",
                self.spec.e
            )));
        }
        let mut acc = 1;
        let mut conj = a;
        for _ in 0..self.spec.e / d {
            acc = self.mul(acc, conj);
            conj = self.frobenius(conj, d);
        }
        Ok(acc)
    }

    /// Relative norm computed as the single power `a^((p^e - 1)/(p^d - 1))`.
    pub fn norm_by_exponent(&self, a: Elem, d: u32) -> Result<Elem> {
        if d == 0 || self.spec.e % d != 0 {
            return Err(Error::Field(format!(
                "subfield degree {d} does not divide {}",
                self.spec.e
            )));
        }
        let p = self.spec.p as u64;
        let k = (p.pow(self.spec.e) - 1) / (p.pow(d) - 1);
        Ok(self.pow(a, k))
    }

    /// Whether `a` lies in the subfield `F_{p^d}`.
    pub fn in_subfield(&self, a: Elem, d: u32) -> bool {
        self.frobenius(a, d) == a
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.spec.p == 2 {
            let e = self.spec.e;
            let (mut a, mut b) = (a as u64, b as u64);
            let mut r = 0u64;
            while b != 0 {
                if b & 1 == 1 {
                    r ^= a;
                }
                b >>= 1;
                a <<= 1;
                if (a >> e) & 1 == 1 {
                    a ^= self.mod_bits;
                }
            }
            return r as Elem;
        }
        if self.spec.e == 1 {
            return ((a as u64 * b as u64) % self.spec.p as u64) as Elem;
        }
        let prod = poly::mul(&self.digits(a), &self.digits(b), self.spec.p);
        let r = poly::rem(&prod, &self.spec.modulus, self.spec.p);
        self.from_digits(&r)
    }

    fn pow_slow(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }
}

/// Dense polynomials over `F_p`, constant term first.
pub(crate) mod poly {
    pub fn trimmed(mut v: Vec<u32>) -> Vec<u32> {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        if v.is_empty() {
            v.push(0);
        }
        v
    }

    pub fn from_int(mut k: u64, p: u32, len: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push((k % p as u64) as u32);
            k /= p as u64;
        }
        out
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut acc = 1u64;
        let mut base = a as u64 % p as u64;
        let mut k = p as u64 - 2;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            k >>= 1;
        }
        acc as u32
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = *a.get(i).unwrap_or(&0) as u64;
                let y = *b.get(i).unwrap_or(&0) as u64;
                ((x + p as u64 - y) % p as u64) as u32
            })
            .collect();
        trimmed(out)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trimmed(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder of `a` modulo `m` (`m` need not be monic, but must be nonzero).
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trimmed(m.to_vec());
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        let p64 = p as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] % p64 * lead_inv % p64;
            if c != 0 {
                for (j, &mj) in m.iter().enumerate() {
                    let idx = top - dm + j;
                    r[idx] = (r[idx] + p64 * p64 - c * mj as u64 % p64) % p64;
                }
            }
            r.pop();
        }
        trimmed(r.into_iter().map(|c| (c % p64) as u32).collect())
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trimmed(a.to_vec());
        let mut b = trimmed(b.to_vec());
        while !(b.len() == 1 && b[0] == 0) {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn powmod(base: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, m, p);
        while k > 0 {
            if k & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            k >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-division irreducibility, independent of Rabin's test.
    fn irreducible_by_trial_division(p: u32, f: &[u32]) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            for low in 0..(p as u64).pow(d as u32) {
                let mut g = poly::from_int(low, p, d);
                g.push(1);
                let r = poly::rem(f, &g, p);
                if r.len() == 1 && r[0] == 0 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn default_modulus_matches_trial_division_oracle() {
        // x^4 + x + 1 is the first degree-4 monic over F_2 surviving trial division
        let oracle = (0..16u64)
            .map(|low| {
                let mut g = poly::from_int(low, 2, 4);
                g.push(1);
                g
            })
            .find(|g| irreducible_by_trial_division(2, g))
            .unwrap();
        assert_eq!(oracle, vec![1, 1, 0, 0, 1]);
        assert_eq!(default_modulus(2, 4), oracle);
        for (p, e) in [(2, 1), (2, 6), (3, 3), (5, 2), (7, 3), (2, 10)] {
            let m = default_modulus(p, e);
            assert!(irreducible_by_trial_division(p, &m), "{p} {e}");
        }
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for (p, e) in [(2u32, 2usize), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)] {
            for low in 0..(p as u64).pow(e as u32) {
                let mut g = poly::from_int(low, p, e);
                g.push(1);
                assert_eq!(is_irreducible(p, &g), irreducible_by_trial_division(p, &g));
            }
        }
    }

    #[test]
    fn prime_field_f2() {
        let f = Field::make(2, 1, None).unwrap();
        assert_eq!(f.spec().modulus, vec![0, 1]);
        assert_eq!(f.order(), 2);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.inv(1).unwrap(), 1);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldSpec::new(4, 1, None), Err(Error::Field(_))));
        assert!(matches!(
            FieldSpec::new(2, 2, Some(vec![0, 1, 1])),
            Err(Error::Field(_))
        ));
        assert!(FieldSpec::new(2, 0, None).is_err());
        assert!(FieldSpec::new(2, 2, Some(vec![1, 1, 0])).is_err());
    }

    #[test]
    fn f4_examples() {
        let f = Field::make(2, 2, Some(vec![1, 1, 1])).unwrap();
        let alpha = 2;
        assert_eq!(f.mul(alpha, alpha), 3);
        assert_eq!(f.inv(alpha).unwrap(), 3);
        assert_eq!(f.mul(1, alpha), alpha);
        assert!(matches!(f.inv(0), Err(Error::ZeroInverse)));
        assert_eq!(f.norm(alpha, 1).unwrap(), 1);
        assert_eq!(f.norm(1, 1).unwrap(), 1);
        assert_eq!(f.frobenius(alpha, 1), 3);
        assert!(f.norm(alpha, 3).is_err());
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        // the same field, once with tables and once forced through the slow path
        for (p, e) in [(2, 8), (3, 4), (5, 3), (2, 1), (7, 1)] {
            let f = Field::make(p, e, None).unwrap();
            let slow = Field {
                arith: Arith::Poly,
                ..f.clone()
            };
            for a in f.elements().step_by(3) {
                for b in f.elements().step_by(5) {
                    assert_eq!(f.mul(a, b), slow.mul(a, b));
                }
                if a != 0 {
                    assert_eq!(f.inv(a).unwrap(), slow.inv(a).unwrap());
                }
            }
        }
    }

    #[test]
    fn large_field_uses_polynomial_arithmetic() {
        let f = Field::make(2, 21, None).unwrap();
        assert!(matches!(f.arith, Arith::Poly));
        let a = 0x1234a;
        let ai = f.inv(a).unwrap();
        assert_eq!(f.mul(a, ai), 1);
        assert_eq!(f.norm(a, 3).unwrap(), f.norm_by_exponent(a, 3).unwrap());
    }

    #[test]
    fn norm_lands_in_subfield_and_is_multiplicative() {
        let f = Field::make(2, 6, None).unwrap();
        for d in [1, 2, 3] {
            for x in f.elements() {
                let nx = f.norm(x, d).unwrap();
                assert!(f.in_subfield(nx, d));
                assert_eq!(nx, f.norm_by_exponent(x, d).unwrap());
                let y = (x * 7 + 3) % f.order();
                assert_eq!(
                    f.norm(f.mul(x, y), d).unwrap(),
                    f.mul(nx, f.norm(y, d).unwrap())
                );
            }
        }
    }

    #[test]
    fn frobenius_is_additive_exhaustively() {
        for (p, e) in [(2, 6), (3, 4), (5, 2), (2, 12)] {
            let f = Field::make(p, e, None).unwrap();
            let frob: Vec<Elem> = f.elements().map(|x| f.frobenius(x, 1)).collect();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(
                        frob[f.add(x, y) as usize],
                        f.add(frob[x as usize], frob[y as usize])
                    );
                }
            }
        }
    }

    #[test]
    fn odd_characteristic_extension_arithmetic() {
        let f = Field::make(3, 2, None).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            for b in f.elements() {
                assert_eq!(f.sub(f.add(a, b), b), a);
            }
        }
    }
}
