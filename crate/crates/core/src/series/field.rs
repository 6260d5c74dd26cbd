//! The finite field 𝔽_d, d = p^k.
//!
//! Elements are `u32` whose base-p digits are the coefficients of a
//! polynomial in g reduced modulo a fixed irreducible of degree k.
//! For k = 1 arithmetic is plain mod-p.

use crate::error::{Error, Result};

const MAX_K: usize = 16;
/// Largest supported field size.
pub const MAX_D: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
    k: u32,
    d: u32,
    /// g^k = -Σ modulus[i] g^i
    modulus: [u32; MAX_K],
    generator: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// dense polynomials over F_p, low degree first
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = top * inv_lead % p;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

fn digits_of(mut v: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = vec![0; k];
    for slot in out.iter_mut() {
        *slot = v % p;
        v /= p;
    }
    out
}

fn irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for deg in 1..=n / 2 {
        let count = (p as u64).pow(deg as u32);
        for low in 0..count {
            let mut g = digits_of(low as u32, p, deg);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// The field with p^k elements.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 || k as usize > MAX_K {
            return Err(Error::InvalidField(format!("degree k = {k} out of range")));
        }
        let d = (p as u64).checked_pow(k).filter(|&d| d <= MAX_D as u64).ok_or_else(|| {
            Error::InvalidField(format!("{p}^{k} exceeds {MAX_D}"))
        })? as u32;
        let mut modulus = [0u32; MAX_K];
        if k > 1 {
            let mut found = false;
            for low in 0..d {
                let mut f = digits_of(low, p, k as usize);
                f.push(1);
                if f[0] != 0 && irreducible(&f, p) {
                    for i in 0..k as usize {
                        modulus[i] = f[i];
                    }
                    found = true;
                    break;
                }
            }
            debug_assert!(found);
        }
        let mut field = Field { p, k, d, modulus, generator: 1 };
        field.generator = field.find_generator();
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn generator(&self) -> u32 {
        self.generator
    }

    fn find_generator(&self) -> u32 {
        let order = self.d - 1;
        if order == 1 {
            return 1;
        }
        let factors = prime_factors(order);
        (2..self.d)
            .find(|&a| factors.iter().all(|&r| self.pow(a, (order / r) as u64) != 1))
            .expect("multiplicative group is cyclic")
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let k = self.k as usize;
        let p = self.p as u64;
        let da = digits_of(a, self.p, k);
        let db = digits_of(b, self.p, k);
        let mut prod = [0u64; 2 * MAX_K];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for j in (k..2 * k - 1).rev() {
            let c = prod[j];
            if c == 0 {
                continue;
            }
            prod[j] = 0;
            for i in 0..k {
                let m = self.modulus[i] as u64;
                prod[j - k + i] = (prod[j - k + i] + (p - c * m % p)) % p;
            }
        }
        let mut out = 0u32;
        for i in (0..k).rev() {
            out = out * self.p + prod[i] as u32;
        }
        out
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.d as u64 - 2))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Discrete logarithm to the generator base (brute force).
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut x = 1;
        for j in 0..self.d - 1 {
            if x == a {
                return Some(j);
            }
            x = self.mul(x, self.generator);
        }
        None
    }

    /// Render an element: integers for k = 1, `g^j` otherwise.
    pub fn fmt_elem(&self, a: u32) -> String {
        if self.k == 1 || a <= 1 {
            return a.to_string();
        }
        match self.log(a) {
            Some(1) => "g".into(),
            Some(j) => format!("g^{j}"),
            None => a.to_string(),
        }
    }

    /// All elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.d
    }
}
