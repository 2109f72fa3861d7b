//! Arithmetic in GF(p^e) for prime-power orders.
//!
//! Elements are indices `0..q`. For `q = p^e` an index maps to a polynomial
//! over GF(p) via its base-`p` digits (least significant digit = constant
//! coefficient), and multiplication reduces modulo the lexicographically
//! first monic irreducible of degree `e`. Index 0 is the additive identity
//! and index 1 the multiplicative identity under this encoding.

/// Splits `q` into `(p, e)` with `p` prime and `q = p^e`, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut rest = q;
    let mut p = 0u64;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            p = d;
            while rest.is_multiple_of(d) {
                rest /= d;
            }
            break;
        }
        d += 1;
    }
    if p == 0 {
        // q itself is prime.
        return Some((q, 1));
    }
    if rest != 1 {
        // At least two distinct prime factors.
        return None;
    }
    let mut e = 0u32;
    let mut acc = 1u64;
    while acc < q {
        acc *= p;
        e += 1;
    }
    (acc == q).then_some((p, e))
}

/// The field GF(p^e).
#[derive(Debug, Clone)]
pub struct Gf {
    q: u64,
    p: u64,
    e: u32,
    /// Monic irreducible modulus of degree `e`, coefficients in ascending
    /// degree order; empty when `e == 1`.
    modulus: Vec<u64>,
}

impl Gf {
    /// Constructs the field of order `q`, or `None` if `q` is not a prime
    /// power.
    pub fn new(q: u64) -> Option<Gf> {
        let (p, e) = prime_power(q)?;
        let modulus = if e == 1 { Vec::new() } else { find_irreducible(p, e) };
        Some(Gf { q, p, e, modulus })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u64;
        let mut scale = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.e {
            out += (x % self.p + y % self.p) % self.p * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.e == 1 {
            return a * b % self.p;
        }
        let x = self.digits(a);
        let y = self.digits(b);
        let mut prod = vec![0u64; 2 * self.e as usize - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % self.p;
            }
        }
        // Reduce modulo the monic irreducible: X^e = -(lower coefficients).
        for i in (self.e as usize..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..self.e as usize {
                let sub = c * self.modulus[j] % self.p;
                prod[i - self.e as usize + j] = (prod[i - self.e as usize + j] + self.p - sub) % self.p;
            }
        }
        self.undigits(&prod[..self.e as usize])
    }

    fn digits(&self, mut v: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.e as usize];
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn undigits(&self, coeffs: &[u64]) -> u64 {
        let mut out = 0u64;
        for &c in coeffs.iter().rev() {
            out = out * self.p + c;
        }
        out
    }
}

/// Lexicographically first monic irreducible of degree `e` over GF(p),
/// returned as its `e` non-leading coefficients in ascending degree order.
fn find_irreducible(p: u64, e: u32) -> Vec<u64> {
    let count = p.pow(e);
    for idx in 0..count {
        let mut low = Vec::with_capacity(e as usize);
        let mut v = idx;
        for _ in 0..e {
            low.push(v % p);
            v /= p;
        }
        if is_irreducible(p, e, &low) {
            return low;
        }
    }
    unreachable!("an irreducible polynomial of degree {e} exists over GF({p})");
}

/// Tests whether the monic polynomial X^e + low(X) is irreducible over GF(p)
/// by trial division against every monic polynomial of degree 1..=e/2.
fn is_irreducible(p: u64, e: u32, low: &[u64]) -> bool {
    let mut f: Vec<u64> = low.to_vec();
    f.push(1);
    for d in 1..=e / 2 {
        let monic_count = p.pow(d);
        for idx in 0..monic_count {
            let mut g = Vec::with_capacity(d as usize + 1);
            let mut v = idx;
            for _ in 0..d {
                g.push(v % p);
                v /= p;
            }
            g.push(1);
            if poly_rem_is_zero(p, &f, &g) {
                return false;
            }
        }
    }
    true
}

/// Whether monic `g` divides `f`, both over GF(p) in ascending coefficient
/// order.
fn poly_rem_is_zero(p: u64, f: &[u64], g: &[u64]) -> bool {
    let mut rem: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dg;
        if lead != 0 {
            for (j, &gj) in g.iter().enumerate() {
                let idx = shift + j;
                rem[idx] = (rem[idx] + p - lead * gj % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_classification() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(3), Some((3, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(121), Some((11, 2)));
        for q in [0, 1, 6, 10, 12, 15, 100] {
            assert_eq!(prime_power(q), None, "q={q}");
        }
    }

    /// Exhaustive field-axiom check for small orders, including the
    /// non-prime powers of primes where reduction is exercised.
    #[test]
    fn field_axioms_small_orders() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = Gf::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.mul(a, 0), 0);
                // Additive inverse exists.
                assert!((0..q).any(|b| f.add(a, b) == 0));
                // Multiplicative inverse exists for a != 0.
                if a != 0 {
                    assert!((0..q).any(|b| f.mul(a, b) == 1), "no inverse for {a} in GF({q})");
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn gf4_has_no_zero_divisors() {
        let f = Gf::new(4).unwrap();
        for a in 1..4 {
            for b in 1..4 {
                assert_ne!(f.mul(a, b), 0);
            }
        }
        // Characteristic 2: every element is its own additive inverse.
        for a in 0..4 {
            assert_eq!(f.add(a, a), 0);
        }
    }
}
