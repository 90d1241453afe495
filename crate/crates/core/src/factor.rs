//! Irreducibility over the rationals by the Zassenhaus method: factor modulo a small prime
//! with Berlekamp's algorithm, Hensel-lift the factors, then search factor subsets for a
//! true integer divisor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use crate::rational::Rational;

/// True iff `p` admits no factorization into two non-constant rational polynomials.
pub fn is_irreducible(p: &RationalPoly) -> Result<bool> {
    if p.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if p.degree() == 1 {
        return Ok(true);
    }
    if !p.is_square_free() {
        return Ok(false);
    }
    let f = p.primitive_integer();
    if f[0].is_zero() {
        return Ok(false);
    }
    let lc = f.last().cloned().expect("non-constant");
    let prime = choose_prime(&f, &lc);
    let modular = berlekamp(&monic_mod_p(&f, prime), prime);
    if modular.len() == 1 {
        return Ok(true);
    }
    Ok(find_integer_factor(&f, &lc, prime, &modular).is_none())
}

const SMALL_PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
    103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

/// Smallest listed prime not dividing the leading coefficient that keeps `f` square-free.
fn choose_prime(f: &[BigInt], lc: &BigInt) -> u64 {
    for &p in &SMALL_PRIMES {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = monic_mod_p(f, p);
        let d = derivative_p(&fp, p);
        if !d.is_empty() && degree(&gcd_p(&fp, &d, p)) == 0 {
            return p;
        }
    }
    // a square-free integer polynomial has finitely many bad primes, all dividing its discriminant;
    // none of the polynomials this crate handles exhaust the table
    panic!("no suitable prime among the first {} odd primes", SMALL_PRIMES.len());
}

// ---------- dense polynomials over F_p, ascending coefficients, no trailing zeros ----------

type PolyP = Vec<u64>;

fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn degree(a: &PolyP) -> usize {
    a.len().saturating_sub(1)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn monic_mod_p(f: &[BigInt], p: u64) -> PolyP {
    let bp = BigInt::from(p);
    let reduced: PolyP = trim(f.iter().map(|c| c.mod_floor(&bp).to_u64().expect("reduced mod p")).collect());
    make_monic_p(&reduced, p)
}

fn make_monic_p(a: &PolyP, p: u64) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn sub_p(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn mul_p(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn divrem_p(a: &PolyP, b: &PolyP, p: u64) -> (PolyP, PolyP) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let db = degree(b);
    let mut rem = a.clone();
    let mut quot = vec![0u64; a.len() - db];
    for k in (0..quot.len()).rev() {
        let q = rem[k + db] * inv % p;
        quot[k] = q;
        if q != 0 {
            for (j, c) in b.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - q * c % p) % p;
            }
        }
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

fn gcd_p(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = divrem_p(&a, &b, p).1;
        a = b;
        b = r;
    }
    make_monic_p(&a, p)
}

/// `(g, s, t)` with `s a + t b = g`, `g` monic.
fn ext_gcd_p(a: &PolyP, b: &PolyP, p: u64) -> (PolyP, PolyP, PolyP) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem_p(&r0, &r1, p);
        let s2 = sub_p(&s0, &mul_p(&q, &s1, p), p);
        let t2 = sub_p(&t0, &mul_p(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().expect("nonzero gcd"), p);
    let scale = |v: &PolyP| trim(v.iter().map(|c| c * inv % p).collect());
    (scale(&r0), scale(&s0), scale(&t0))
}

fn derivative_p(a: &PolyP, p: u64) -> PolyP {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect())
}

fn powmod_p(base: &PolyP, mut e: u64, modulus: &PolyP, p: u64) -> PolyP {
    let mut acc = vec![1u64];
    let mut b = divrem_p(base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem_p(&mul_p(&acc, &b, p), modulus, p).1;
        }
        b = divrem_p(&mul_p(&b, &b, p), modulus, p).1;
        e >>= 1;
    }
    acc
}

/// Null space of an `n×n` matrix over F_p (row-major), as a list of basis vectors.
fn null_space_p(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(piv) = (row..n).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let inv = inv_mod(m[row][col], p);
        for c in 0..n {
            m[row][c] = m[row][c] * inv % p;
        }
        for r in 0..n {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..n {
                    m[r][c] = (m[r][c] + p - f * m[row][c] % p) % p;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - m[r][fc]) % p;
            }
            v
        })
        .collect()
}

/// Monic irreducible factors of a monic square-free polynomial over F_p.
fn berlekamp(f: &PolyP, p: u64) -> Vec<PolyP> {
    let n = degree(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    // row i holds x^(i p) mod f
    let xp = powmod_p(&vec![0, 1], p, f, p);
    let mut rows = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = divrem_p(&mul_p(&cur, &xp, p), f, p).1;
    }
    // v with v·(Q - I) = 0  <=>  (Q - I)ᵀ vᵀ = 0
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let q = rows[j][i];
            m[i][j] = if i == j { (q + p - 1) % p } else { q };
        }
    }
    let basis = null_space_p(m, p);
    let r = basis.len();
    let mut factors = vec![f.clone()];
    for v in basis.iter().map(|v| trim(v.clone())) {
        if factors.len() == r {
            break;
        }
        if degree(&v) == 0 {
            continue;
        }
        let mut next = Vec::new();
        for g in factors {
            let mut pending = vec![g];
            for s in 0..p {
                let shifted = sub_p(&v, &vec![s], p);
                let mut split = Vec::new();
                for h in pending {
                    if degree(&h) <= 1 {
                        split.push(h);
                        continue;
                    }
                    let d = gcd_p(&h, &shifted, p);
                    if degree(&d) > 0 && degree(&d) < degree(&h) {
                        let other = make_monic_p(&divrem_p(&h, &d, p).0, p);
                        split.push(d);
                        split.push(other);
                    } else {
                        split.push(h);
                    }
                }
                pending = split;
            }
            next.extend(pending);
        }
        factors = next;
    }
    factors.sort();
    factors
}

// ---------- Hensel lifting over Z / p^e ----------

type PolyZ = Vec<BigInt>;

fn trim_z(mut a: PolyZ) -> PolyZ {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn to_z(a: &PolyP) -> PolyZ {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn reduce_z(a: &PolyZ, m: &BigInt) -> PolyZ {
    trim_z(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn mul_z(a: &PolyZ, b: &PolyZ) -> PolyZ {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_z(out)
}

fn sub_z(a: &PolyZ, b: &PolyZ) -> PolyZ {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    trim_z((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

fn add_scaled_z(a: &PolyZ, b: &PolyZ, scale: &BigInt) -> PolyZ {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    trim_z((0..n).map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero) * scale).collect())
}

/// Lifts `target ≡ g h (mod p)` (all monic) to `target ≡ G H (mod p^e)`.
fn hensel_pair(target: &PolyZ, g: &PolyP, h: &PolyP, p: u64, e: u32) -> (PolyZ, PolyZ) {
    let (one, s, t) = ext_gcd_p(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let bp = BigInt::from(p);
    let (mut gz, mut hz) = (to_z(g), to_z(h));
    let mut pk = bp.clone();
    for _ in 1..e {
        let next = &pk * &bp;
        let err = reduce_z(&sub_z(target, &mul_z(&gz, &hz)), &next);
        let c: PolyP = trim(err.iter().map(|x| (x / &pk).mod_floor(&bp).to_u64().unwrap()).collect());
        if !c.is_empty() {
            let a = divrem_p(&mul_p(&t, &c, p), g, p).1;
            let b = divrem_p(&mul_p(&s, &c, p), h, p).1;
            gz = reduce_z(&add_scaled_z(&gz, &to_z(&a), &pk), &next);
            hz = reduce_z(&add_scaled_z(&hz, &to_z(&b), &pk), &next);
        }
        pk = next;
    }
    (gz, hz)
}

fn hensel_lift(f: &PolyZ, lc: &BigInt, factors: &[PolyP], p: u64, e: u32) -> Vec<PolyZ> {
    let modulus = BigInt::from(p).pow(e);
    let lc_inv = lc.modinv(&modulus).expect("p does not divide the leading coefficient");
    let mut target = reduce_z(&f.iter().map(|c| c * &lc_inv).collect(), &modulus);
    let mut lifted = Vec::with_capacity(factors.len());
    for (i, g) in factors.iter().enumerate().take(factors.len() - 1) {
        let rest = factors[i + 1..].iter().fold(vec![1u64], |acc, h| mul_p(&acc, h, p));
        let (gz, hz) = hensel_pair(&target, g, &rest, p, e);
        lifted.push(gz);
        target = hz;
    }
    lifted.push(target);
    lifted
}

fn symmetric(a: &PolyZ, m: &BigInt) -> PolyZ {
    let half: BigInt = m / 2;
    trim_z(a.iter().map(|c| if c > &half { c - m } else { c.clone() }).collect())
}

fn content(a: &PolyZ) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn to_rational(a: &PolyZ) -> RationalPoly {
    RationalPoly::new(a.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

/// Searches subsets of lifted modular factors (up to half of them) for a proper divisor of `f`.
fn find_integer_factor(f: &PolyZ, lc: &BigInt, p: u64, modular: &[PolyP]) -> Option<RationalPoly> {
    let deg = f.len() - 1;
    let norm = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b).sqrt() + BigInt::one();
    // every coefficient of lc·(any factor) is below 2^deg · ‖f‖₂ · |lc|
    let bound = (BigInt::one() << deg) * norm * lc.abs();
    let bp = BigInt::from(p);
    let mut e = 1u32;
    let mut modulus = bp.clone();
    while modulus <= &bound * 2 {
        modulus *= &bp;
        e += 1;
    }
    let lifted = hensel_lift(f, lc, modular, p, e);
    let whole = to_rational(f);
    let r = lifted.len();
    for size in 1..=r / 2 {
        for subset in Combinations::new(r, size) {
            let prod = subset.iter().fold(vec![lc.clone()], |acc, &i| reduce_z(&mul_z(&acc, &lifted[i]), &modulus));
            let cand = symmetric(&prod, &modulus);
            if cand.len() < 2 {
                continue;
            }
            let c = content(&cand);
            let prim: PolyZ = cand.iter().map(|x| x / &c).collect();
            let poly = to_rational(&prim);
            if poly.degree() < deg && poly.divides(&whole) {
                return Some(poly);
            }
        }
    }
    None
}

struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
