//! Arithmetic in the prime field F_p and binomial coefficients mod p.
//!
//! All representatives are canonical, i.e. in `[0, p)`, so equality of
//! elements is structural equality.

use crate::error::{Error, Result};

/// A prime field F_p, identified by its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical representative of an arbitrary signed integer.
    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            p: self.p,
        }
    }

    // Raw operations on canonical representatives. Callers guarantee the
    // inputs are already reduced.
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::ZeroInverse(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }
}

/// An element of a prime field, carrying its modulus for mismatch checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<PrimeField> {
        if self.p == other.p {
            Ok(self.field())
        } else {
            Err(Error::FieldMismatch(self.p, other.p))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.add(self.value, other.value) as i64))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.sub(self.value, other.value) as i64))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.mul(self.value, other.value) as i64))
    }

    pub fn inv(&self) -> Result<Self> {
        let f = self.field();
        Ok(f.elem(f.inv(self.value)? as i64))
    }

    pub fn pow(&self, exp: u64) -> Self {
        let f = self.field();
        f.elem(f.pow(self.value, exp) as i64)
    }
}

/// C(n, k) mod p for small arguments, both below p.
fn binomial_digit(field: PrimeField, n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    // C(n,k) = prod_{i=1..k} (n-k+i)/i, all factors below p so inverses exist.
    let mut acc = 1 % field.modulus();
    for i in 1..=k {
        acc = field.mul(acc, (n - k + i) % field.modulus());
        acc = field.mul(acc, field.inv(i).expect("1 <= i < p"));
    }
    acc
}

/// C(n, k) over the integers; callers stay well inside u64 range.
pub fn binomial_exact(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// C(n, k) mod p via the Lucas decomposition, stable for n far above p.
pub fn binomial_mod_p(n: u64, k: u64, field: PrimeField) -> FieldElement {
    if k > n {
        return field.elem(0);
    }
    let p = field.modulus();
    let (mut n, mut k) = (n, k);
    let mut acc = 1 % p;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        acc = field.mul(acc, binomial_digit(field, nd, kd));
        if acc == 0 {
            break;
        }
        n /= p;
        k /= p;
    }
    field.elem(acc as i64)
}
