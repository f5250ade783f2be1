//! Dense polynomials over a prime field GF(p), coefficients low-degree-first.
//!
//! Only what the primitive-polynomial search needs: modular multiplication,
//! exponentiation, gcd, and the irreducibility / primitivity tests.

pub(crate) type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Remainder of `a` modulo `f`; `f` must be nonzero.
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let f = trim(f.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    let mut r = trim(a.to_vec());
    while r.len() > df {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        let shift = dr - df;
        for (i, &fc) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * fc % p) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, f, p)
}

pub(crate) fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Poly {
    let mut result = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or style test: `f` (monic, degree >= 1) is irreducible iff
/// gcd(x^{p^i} - x, f) = 1 for every i <= deg(f)/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let degree = f.len() - 1;
    let x: Poly = vec![0, 1];
    let mut power = x.clone();
    for _ in 0..degree / 2 {
        power = pow_mod(&power, p, f, p);
        let mut diff = power.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(f, &trim(diff), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// `f` irreducible and x has order exactly p^deg - 1 modulo `f`.
pub(crate) fn is_primitive(f: &[u64], p: u64) -> bool {
    if !is_irreducible(f, p) {
        return false;
    }
    let degree = f.len() as u32 - 1;
    let order = p.pow(degree) - 1;
    let x: Poly = vec![0, 1];
    prime_factors(order)
        .into_iter()
        .all(|r| pow_mod(&x, order / r, f, p) != vec![1])
}
