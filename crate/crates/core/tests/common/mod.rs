//! Independent reference implementations and random generators shared by the test targets.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use latent_core::network::{attach, Network};
use latent_core::photon::ComplexMatrix;
use latent_core::rational::{int, ratio, Rational};
use latent_core::{RationalPoly, VertexPair};

/// Fraction-free Bareiss elimination on an integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `det(xI − H)` by clearing denominators and running Bareiss.
pub fn char_poly_at(net: &Network, x: &Rational) -> Rational {
    let h = net.matrix();
    let n = h.len();
    let entries: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { x - &h[i][j] } else { -h[i][j].clone() }).collect())
        .collect();
    let d = entries.iter().flatten().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<Vec<BigInt>> = entries
        .iter()
        .map(|row| row.iter().map(|r| (r * Rational::from_integer(d.clone())).to_integer()).collect())
        .collect();
    Rational::new(bareiss_det(ints), d.pow(n as u32))
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

/// `(H^m)_{uu} = (H^m)_{vv}` for every `m ≤ 2n`.
pub fn closed_walk_cospectral(net: &Network, pair: VertexPair) -> bool {
    let h = net.matrix();
    let n = h.len();
    let (u, v) = (pair.u - 1, pair.v - 1);
    let mut p: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
    for _ in 0..=2 * n {
        if p[u][u] != p[v][v] {
            return false;
        }
        p = mat_mul(&p, &h);
    }
    true
}

/// Durand–Kerner roots of a polynomial with real coefficients (ascending).
fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lc = coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lc).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let prev = roots.clone();
        for i in 0..d {
            let denom: Complex64 = (0..d).filter(|&j| j != i).map(|j| roots[i] - roots[j]).product();
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
        }
        if roots.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15) {
            break;
        }
    }
    roots
}

/// Reducibility over the rationals for degree ≤ 4, by trying every monic candidate factor
/// built from one or two numerical roots and confirming by exact division.
pub fn brute_force_reducible(p: &RationalPoly) -> bool {
    let d = p.degree();
    assert!((1..=4).contains(&d));
    if d == 1 {
        return false;
    }
    let ints = p.primitive_integer();
    let lc = ints[d].clone();
    let lc_f = lc.to_string().parse::<f64>().unwrap();
    let roots = complex_roots(&ints.iter().map(|c| c.to_string().parse::<f64>().unwrap()).collect::<Vec<_>>());
    let to_rational = |x: f64| Rational::new(BigInt::from((x * lc_f).round() as i64), lc.clone());
    let mut candidates: Vec<RationalPoly> = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        if r.im.abs() < 1e-6 {
            candidates.push(RationalPoly::new(vec![to_rational(-r.re), int(1)]));
        }
        for s in &roots[i + 1..] {
            let sum = r + s;
            let prod = r * s;
            if sum.im.abs() < 1e-6 && prod.im.abs() < 1e-6 {
                candidates.push(RationalPoly::new(vec![to_rational(prod.re), to_rational(-sum.re), int(1)]));
            }
        }
    }
    candidates.iter().any(|g| g.degree() < d && g.divides(p))
}

/// Sum over all permutations.
pub fn naive_permanent(m: &ComplexMatrix) -> Complex64 {
    fn go(m: &ComplexMatrix, row: usize, used: &mut Vec<bool>) -> Complex64 {
        if row == m.rows() {
            return Complex64::one();
        }
        let mut total = Complex64::zero();
        for c in 0..m.cols() {
            if !used[c] {
                used[c] = true;
                total += m.get(row, c) * go(m, row + 1, used);
                used[c] = false;
            }
        }
        total
    }
    go(m, 0, &mut vec![false; m.cols()])
}

/// `exp(−iHτ)` by scaling and squaring a truncated Taylor series.
pub fn taylor_expm(h: &[f64], n: usize, tau: f64) -> Vec<Complex64> {
    let norm = h.iter().fold(0.0_f64, |m, x| m.max(x.abs())) * n as f64 * tau.abs();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = tau / 2f64.powi(squarings as i32);
    let a: Vec<Complex64> = h.iter().map(|&x| Complex64::new(0.0, -x * scale)).collect();
    let mul = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i * n + j] += x[i * n + k] * y[k * n + j];
                }
            }
        }
        out
    };
    let mut result = vec![Complex64::zero(); n * n];
    let mut term = vec![Complex64::zero(); n * n];
    for i in 0..n {
        result[i * n + i] = Complex64::one();
        term[i * n + i] = Complex64::one();
    }
    for k in 1..30 {
        term = mul(&term, &a).into_iter().map(|z| z / k as f64).collect();
        result.iter_mut().zip(&term).for_each(|(r, t)| *r += t);
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}

/// Small nonzero rational in `±[1/4, 2]`.
pub fn random_weight<R: Rng>(rng: &mut R) -> Rational {
    let w = ratio(rng.gen_range(1..=8), 4);
    if rng.gen_bool(0.5) {
        -w
    } else {
        w
    }
}

pub fn random_network<R: Rng>(rng: &mut R, n: usize, density: f64) -> Network {
    let onsite = (0..n).map(|_| if rng.gen_bool(0.3) { random_weight(rng) } else { int(0) }).collect();
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(density) {
                edges.push((i, j, random_weight(rng)));
            }
        }
    }
    Network::from_parts(onsite, edges).unwrap()
}

/// Random extension hung off a non-empty random subset of `sites`.
pub fn random_attachment<R: Rng>(rng: &mut R, base: &Network, sites: &[usize]) -> Network {
    let mut anchors: Vec<usize> = sites.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    if anchors.is_empty() {
        anchors.push(sites[rng.gen_range(0..sites.len())]);
    }
    let m = rng.gen_range(1..=4);
    let ext = random_network(rng, m, 0.5);
    let mut bridges = Vec::new();
    for &a in &anchors {
        for e in 1..=m {
            if rng.gen_bool(0.5) || e == 1 {
                bridges.push((a, e, random_weight(rng)));
            }
        }
    }
    attach(base, &anchors, Some(&ext), &bridges).unwrap()
}

/// Two copies of a random network joined at a designated vertex, giving a pair exchanged
/// by the mirror map.
pub fn mirrored<R: Rng>(rng: &mut R, m: usize) -> (Network, VertexPair) {
    let half = random_network(rng, m, 0.5);
    let hub_weight = random_weight(rng);
    let pair = attach(&half, &[], Some(&half), &[]).unwrap();
    let mut net = attach(&pair, &[], Some(&Network::new(1).unwrap()), &[]).unwrap();
    let hub = 2 * m + 1;
    net.set_coupling(1, hub, hub_weight.clone()).unwrap();
    net.set_coupling(m + 1, hub, hub_weight).unwrap();
    (net, VertexPair::new(1, m + 1).unwrap())
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::new(n, n, data).unwrap()
}

/// Random diagonal phases times `exp(−iHτ)` for a random real symmetric `H`; not symmetric.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-1.0..1.0);
            h[i * n + j] = x;
            h[j * n + i] = x;
        }
    }
    let sys = latent_core::walk::eigh_dense(n, h).unwrap();
    let mut u = sys.unitary(rng.gen_range(0.0..5.0));
    for i in 0..n {
        let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        u[i * n..(i + 1) * n].iter_mut().for_each(|z| *z *= phase);
    }
    ComplexMatrix::new(n, n, u).unwrap()
}
