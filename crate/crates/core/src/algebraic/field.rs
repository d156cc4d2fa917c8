//! Finite-field contexts for the randomized determinant machinery: prime
//! fields GF(q) and extensions GF(p^k) for representations over small
//! characteristics, where the base field has too few evaluation points.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::matroid::spec::{is_prime_u64, mul_mod, pow_mod};

/// Runtime-parameterized field. Elements are kept as digit vectors so one
/// engine serves both prime fields (one digit) and extensions.
pub trait FieldCtx {
    fn zero(&self) -> Vec<u64>;
    fn one(&self) -> Vec<u64>;
    fn is_zero(&self, a: &[u64]) -> bool;
    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64>;
    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64>;
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64>;
    fn inv(&self, a: &[u64]) -> Vec<u64>;
    /// Embedding of a signed integer.
    fn from_i64(&self, x: i64) -> Vec<u64>;
    /// The i-th field element under a fixed enumeration; distinct for
    /// distinct i below the field size.
    fn nth(&self, i: u64) -> Vec<u64>;
    /// Uniform nonzero element.
    fn random_nonzero(&self, rng: &mut ChaCha12Rng) -> Vec<u64>;
    /// Number of elements (saturating).
    fn size(&self) -> u64;
}

/// GF(q) for prime q.
pub struct PrimeCtx {
    pub q: u64,
}

impl PrimeCtx {
    pub fn new(q: u64) -> Result<PrimeCtx> {
        if !is_prime_u64(q) {
            return Err(Error::spec(format!("{q} is not prime")));
        }
        if q >= 1 << 62 {
            return Err(Error::spec("prime too large for 64-bit field arithmetic"));
        }
        Ok(PrimeCtx { q })
    }
}

impl FieldCtx for PrimeCtx {
    fn zero(&self) -> Vec<u64> {
        vec![0]
    }
    fn one(&self) -> Vec<u64> {
        vec![1 % self.q]
    }
    fn is_zero(&self, a: &[u64]) -> bool {
        a[0] == 0
    }
    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        vec![(a[0] + b[0]) % self.q]
    }
    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        vec![(a[0] + self.q - b[0]) % self.q]
    }
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        vec![mul_mod(a[0], b[0], self.q)]
    }
    fn inv(&self, a: &[u64]) -> Vec<u64> {
        debug_assert_ne!(a[0], 0);
        vec![pow_mod(a[0], self.q - 2, self.q)]
    }
    fn from_i64(&self, x: i64) -> Vec<u64> {
        vec![x.rem_euclid(self.q as i64) as u64]
    }
    fn nth(&self, i: u64) -> Vec<u64> {
        vec![i % self.q]
    }
    fn random_nonzero(&self, rng: &mut ChaCha12Rng) -> Vec<u64> {
        vec![rng.random_range(1..self.q)]
    }
    fn size(&self) -> u64 {
        self.q
    }
}

/// GF(p^k), elements as coefficient vectors of length k modulo a fixed
/// irreducible polynomial.
pub struct ExtCtx {
    pub p: u64,
    pub k: usize,
    /// coefficients of the monic irreducible modulus, low to high, length k
    /// (the x^k coefficient is implicit)
    modulus: Vec<u64>,
}

impl ExtCtx {
    /// Smallest extension with at least `min_size` elements.
    pub fn new(p: u64, min_size: u64) -> Result<ExtCtx> {
        if !is_prime_u64(p) {
            return Err(Error::spec(format!("{p} is not prime")));
        }
        let mut k = 1usize;
        let mut size: u64 = p;
        while size < min_size {
            size = size.saturating_mul(p);
            k += 1;
            if k > 64 {
                return Err(Error::capability("field extension degree too large"));
            }
        }
        let modulus = find_irreducible(p, k)?;
        Ok(ExtCtx { p, k, modulus })
    }

    fn reduce_in_place(&self, poly: &mut Vec<u64>) {
        // poly has degree up to 2k-2; fold down using x^k = -modulus
        let p = self.p;
        while poly.len() > self.k {
            let top = poly.pop().unwrap();
            if top != 0 {
                let deg = poly.len() - self.k;
                for (i, &mc) in self.modulus.iter().enumerate() {
                    if mc != 0 {
                        let sub = mul_mod(top, mc, p);
                        let idx = deg + i;
                        poly[idx] = (poly[idx] + p - sub) % p;
                    }
                }
            }
        }
        poly.resize(self.k, 0);
    }
}

impl FieldCtx for ExtCtx {
    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = 1 % self.p;
        v
    }
    fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&d| d == 0)
    }
    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect()
    }
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = (prod[i + j] + mul_mod(x, y, self.p)) % self.p;
                }
            }
        }
        self.reduce_in_place(&mut prod);
        prod
    }
    fn inv(&self, a: &[u64]) -> Vec<u64> {
        // extended Euclid in GF(p)[x] against the modulus
        let p = self.p;
        let mut f: Vec<u64> = {
            let mut m = self.modulus.clone();
            m.push(1);
            m
        };
        let mut g = a.to_vec();
        trim(&mut g);
        assert!(!g.is_empty(), "inverse of zero");
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        // invariant: s0 * a = f (mod modulus), s1 * a = g (mod modulus)
        while g.len() > 1 || (g.len() == 1 && g[0] != 0) {
            let (q, r) = poly_divmod(&f, &g, p);
            f = g;
            g = r;
            let qs1 = poly_mul(&q, &s1, p);
            let mut next = poly_sub(&s0, &qs1, p);
            trim(&mut next);
            s0 = s1;
            s1 = next;
            if g.is_empty() {
                break;
            }
        }
        // f is now the gcd (a nonzero constant, since the modulus is
        // irreducible); normalize s0 by its inverse
        trim(&mut f);
        let c = f[0];
        let cinv = pow_mod(c, p - 2, p);
        let mut out = vec![0u64; self.k];
        for (i, &v) in s0.iter().enumerate() {
            out[i] = mul_mod(v, cinv, p);
        }
        out
    }
    fn from_i64(&self, x: i64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = x.rem_euclid(self.p as i64) as u64;
        v
    }
    fn nth(&self, mut i: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        for d in v.iter_mut() {
            *d = i % self.p;
            i /= self.p;
        }
        v
    }
    fn random_nonzero(&self, rng: &mut ChaCha12Rng) -> Vec<u64> {
        loop {
            let v: Vec<u64> = (0..self.k).map(|_| rng.random_range(0..self.p)).collect();
            if !self.is_zero(&v) {
                return v;
            }
        }
    }
    fn size(&self) -> u64 {
        (0..self.k).fold(1u64, |acc, _| acc.saturating_mul(self.p))
    }
}

fn trim(poly: &mut Vec<u64>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
    }
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect()
}

/// Division with remainder in GF(p)[x]; divisor must be nonzero.
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let mut bb = b.to_vec();
    trim(&mut bb);
    let db = bb.len() - 1;
    if rem.len() < bb.len() {
        return (vec![], rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    let lead_inv = pow_mod(bb[db], p - 2, p);
    for i in (db..rem.len()).rev() {
        let c = mul_mod(rem[i], lead_inv, p);
        if c != 0 {
            quot[i - db] = c;
            for (j, &bv) in bb.iter().enumerate() {
                if bv != 0 {
                    let idx = i - db + j;
                    rem[idx] = (rem[idx] + p - mul_mod(c, bv, p)) % p;
                }
            }
        }
    }
    trim(&mut rem);
    (quot, rem)
}

/// x^e mod f over GF(p), with f monic of degree k given as k low
/// coefficients (x^k implicit).
fn x_pow_mod(mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len();
    let mulmod = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut prod = poly_mul(a, b, p);
        while prod.len() > k {
            let top = prod.pop().unwrap();
            if top != 0 {
                let deg = prod.len() - k;
                for (i, &mc) in modulus.iter().enumerate() {
                    if mc != 0 {
                        let sub = mul_mod(top, mc, p);
                        prod[deg + i] = (prod[deg + i] + p - sub) % p;
                    }
                }
            }
        }
        prod
    };
    let mut base = if k == 1 {
        // x = -modulus[0]
        vec![(p - modulus[0]) % p]
    } else {
        let mut v = vec![0u64; 2];
        v[1] = 1;
        v
    };
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base);
        }
        base = mulmod(&base, &base);
        e >>= 1;
    }
    acc.resize(k.max(1), 0);
    acc
}

/// Deterministic search for a monic irreducible polynomial of degree k over
/// GF(p), using Rabin's test.
fn find_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
    if k == 1 {
        return Ok(vec![0]); // x itself
    }
    let prime_divisors: Vec<u64> = {
        let mut ds = Vec::new();
        let mut kk = k as u64;
        let mut d = 2;
        while d * d <= kk {
            if kk % d == 0 {
                ds.push(d);
                while kk % d == 0 {
                    kk /= d;
                }
            }
            d += 1;
        }
        if kk > 1 {
            ds.push(kk);
        }
        ds
    };
    // enumerate candidate low-coefficient vectors in counting order
    let mut counter: u64 = 1;
    loop {
        let mut modulus = vec![0u64; k];
        let mut c = counter;
        for d in modulus.iter_mut() {
            *d = c % p;
            c /= p;
        }
        counter += 1;
        if c > 0 {
            return Err(Error::internal(format!(
                "no irreducible polynomial of degree {k} over GF({p}) found"
            )));
        }
        if is_irreducible(&modulus, p, k, &prime_divisors) {
            return Ok(modulus);
        }
    }
}

fn is_irreducible(modulus: &[u64], p: u64, k: usize, prime_divisors: &[u64]) -> bool {
    // constant coefficient zero means x divides f
    if modulus[0] == 0 {
        return false;
    }
    // x^(p^k) == x mod f
    let pk = (0..k).fold(1u64, |acc, _| acc.saturating_mul(p));
    let xp = x_pow_mod(pk, modulus, p);
    let mut x_itself = vec![0u64; k.max(2)];
    x_itself[1] = 1;
    x_itself.resize(k, 0);
    if xp != x_itself {
        return false;
    }
    // gcd(x^(p^(k/t)) - x, f) == 1 for every prime t | k
    for &t in prime_divisors {
        let e = (0..k as u64 / t).fold(1u64, |acc, _| acc.saturating_mul(p));
        let xe = x_pow_mod(e, modulus, p);
        let mut diff = poly_sub(&xe, &x_itself, p);
        trim(&mut diff);
        let mut f: Vec<u64> = modulus.to_vec();
        f.push(1);
        if poly_gcd_deg(&f, &diff, p) != 0 {
            return false;
        }
    }
    true
}

/// Degree of gcd(a, b) in GF(p)[x]; -is 0 for coprime (constants).
fn poly_gcd_deg(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    trim(&mut f);
    trim(&mut g);
    while !g.is_empty() {
        let (_, r) = poly_divmod(&f, &g, p);
        f = g;
        g = r;
    }
    f.len().saturating_sub(1)
}

/// Lagrange interpolation: given values of a degree < points.len()
/// polynomial at nth(0), nth(1), .., recover its coefficients.
pub fn interpolate<C: FieldCtx + ?Sized>(ctx: &C, values: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = values.len();
    let xs: Vec<Vec<u64>> = (0..n as u64).map(|i| ctx.nth(i)).collect();
    // Newton's divided differences
    let mut coef = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = ctx.sub(&coef[i], &coef[i - 1]);
            let den = ctx.sub(&xs[i], &xs[i - level]);
            coef[i] = ctx.mul(&num, &ctx.inv(&den));
        }
    }
    // expand Newton form to monomial coefficients
    let mut out = vec![ctx.zero(); n];
    let mut basis = vec![ctx.one()];
    out[0] = coef[0].clone();
    for i in 1..n {
        // basis *= (x - x_{i-1})
        let mut next = vec![ctx.zero(); basis.len() + 1];
        for (d, c) in basis.iter().enumerate() {
            next[d + 1] = ctx.add(&next[d + 1], c);
            let shifted = ctx.mul(c, &xs[i - 1]);
            next[d] = ctx.sub(&next[d], &shifted);
        }
        basis = next;
        for (d, c) in basis.iter().enumerate() {
            let term = ctx.mul(&coef[i], c);
            out[d] = ctx.add(&out[d], &term);
        }
    }
    out
}

/// Determinant over the field by Gaussian elimination; destroys `a`.
pub fn determinant<C: FieldCtx + ?Sized>(ctx: &C, a: &mut [Vec<Vec<u64>>]) -> Vec<u64> {
    let n = a.len();
    let mut det = ctx.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !ctx.is_zero(&a[r][col])) else {
            return ctx.zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = ctx.sub(&ctx.zero(), &det);
        }
        det = ctx.mul(&det, &a[col][col]);
        let inv = ctx.inv(&a[col][col]);
        for r in col + 1..n {
            if !ctx.is_zero(&a[r][col]) {
                let f = ctx.mul(&a[r][col], &inv);
                for c in col..n {
                    let sub = ctx.mul(&f, &a[col][c]);
                    a[r][c] = ctx.sub(&a[r][c], &sub);
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_ops() {
        let f = PrimeCtx::new(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(f.add(&a, &b), vec![1]);
        assert_eq!(f.mul(&a, &b), vec![1]);
        assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
        assert_eq!(f.from_i64(-1), vec![6]);
    }

    #[test]
    fn extension_field_ops() {
        let f = ExtCtx::new(2, 16).unwrap();
        assert_eq!(f.size(), 16);
        // every nonzero element has a working inverse
        for i in 1..16u64 {
            let a = f.nth(i);
            let ainv = f.inv(&a);
            assert_eq!(f.mul(&a, &ainv), f.one(), "element {i}");
        }
    }

    #[test]
    fn gf5_extension() {
        let f = ExtCtx::new(5, 100).unwrap();
        assert_eq!(f.k, 3);
        assert_eq!(f.size(), 125);
        for i in 1..125u64 {
            let a = f.nth(i);
            assert_eq!(f.mul(&a, &f.inv(&a)), f.one(), "element {i}");
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let ctx = PrimeCtx::new(101).unwrap();
        // p(x) = 3 + 2x + 7x^3
        let coeffs = [3i64, 2, 0, 7];
        let eval = |x: u64| {
            let mut acc = ctx.zero();
            let mut pw = ctx.one();
            for &c in &coeffs {
                let term = ctx.mul(&ctx.from_i64(c), &pw);
                acc = ctx.add(&acc, &term);
                pw = ctx.mul(&pw, &[x]);
            }
            acc
        };
        let values: Vec<Vec<u64>> = (0..6u64).map(|i| eval(ctx.nth(i)[0])).collect();
        let got = interpolate(&ctx, &values);
        assert_eq!(got[0], vec![3]);
        assert_eq!(got[1], vec![2]);
        assert_eq!(got[2], vec![0]);
        assert_eq!(got[3], vec![7]);
        assert_eq!(got[4], vec![0]);
        assert_eq!(got[5], vec![0]);
    }

    #[test]
    fn determinant_matches_hand_value() {
        let ctx = PrimeCtx::new(97).unwrap();
        // det [[2, 3], [1, 4]] = 5
        let mut m = vec![
            vec![ctx.from_i64(2), ctx.from_i64(3)],
            vec![ctx.from_i64(1), ctx.from_i64(4)],
        ];
        assert_eq!(determinant(&ctx, &mut m), vec![5]);
        // singular
        let mut s = vec![
            vec![ctx.from_i64(2), ctx.from_i64(4)],
            vec![ctx.from_i64(1), ctx.from_i64(2)],
        ];
        assert!(ctx.is_zero(&determinant(&ctx, &mut s)));
    }
}
