//! Exact spectral analysis over the rationals: characteristic polynomials, cospectrality,
//! walk equivalence and the two-site isospectral reduction.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::automorphism::has_swap_automorphism;
use crate::error::{Error, Result};
use crate::network::{delete_vertex, Network, VertexPair};
use crate::poly::{RationalFunction, RationalPoly};
use crate::rational::Rational;

type Matrix = Vec<Vec<Rational>>;

/// `det(λI - H)`, monic of degree `n`, by Faddeev–LeVerrier in exact arithmetic.
pub fn char_poly(net: &Network) -> RationalPoly {
    char_poly_of(&net.matrix())
}

pub(crate) fn char_poly_of(a: &Matrix) -> RationalPoly {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m: Matrix = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let trace: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -trace / Rational::from_integer(k.into());
    }
    RationalPoly::new(coeffs)
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += aik * &b[k][j];
                }
            }
        }
    }
    out
}

/// Determinant by Gaussian elimination over the rationals.
pub(crate) fn det(mut a: Matrix) -> Rational {
    let n = a.len();
    let mut result = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            result = -result;
        }
        let p = a[col][col].clone();
        result *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    result
}

/// Polynomial through the given points (distinct abscissae), via Newton divided differences.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> RationalPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut poly = RationalPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        poly = &(&poly * &RationalPoly::linear_root(&xs[i])) + &RationalPoly::constant(dd[i].clone());
    }
    poly
}

pub fn is_cospectral(net: &Network, pair: VertexPair) -> Result<bool> {
    pair.check(net)?;
    let du = delete_vertex(net, pair.u)?;
    let dv = delete_vertex(net, pair.v)?;
    Ok(char_poly(&du.network) == char_poly(&dv.network))
}

/// Cospectral but not exchanged by any structure-preserving permutation.
pub fn is_latent_symmetric(net: &Network, pair: VertexPair) -> Result<bool> {
    Ok(is_cospectral(net, pair)? && !has_swap_automorphism(net, pair))
}

/// Vertices `w ∉ {u, v}` with `(H^m)_{u,w} = (H^m)_{v,w}` for all `m < n`.
pub fn singlet_sites(net: &Network, pair: VertexPair) -> Result<BTreeSet<usize>> {
    if !is_cospectral(net, pair)? {
        return Err(Error::NotCospectral(pair.u, pair.v));
    }
    Ok(walk_equivalent_sites(net, pair, net.n()))
}

/// Walk equivalence checked for powers `0..powers`.
pub fn walk_equivalent_sites(net: &Network, pair: VertexPair, powers: usize) -> BTreeSet<usize> {
    let n = net.n();
    let h = net.matrix();
    let unit = |i: usize| {
        let mut e = vec![Rational::zero(); n];
        e[i - 1] = Rational::one();
        e
    };
    let (mut x, mut y) = (unit(pair.u), unit(pair.v));
    let mut candidates: BTreeSet<usize> = (1..=n).filter(|&w| w != pair.u && w != pair.v).collect();
    for _ in 0..powers {
        candidates.retain(|&w| x[w - 1] == y[w - 1]);
        x = mat_vec(&h, &x);
        y = mat_vec(&h, &y);
    }
    candidates
}

fn mat_vec(a: &Matrix, x: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(r, v)| !r.is_zero() && !v.is_zero())
                .map(|(r, v)| r * v)
                .sum()
        })
        .collect()
}

/// The 2×2 isospectral reduction onto `{u, v}`, entries as reduced rational functions of λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMatrix {
    pub uu: RationalFunction,
    pub vv: RationalFunction,
    pub uv: RationalFunction,
}

impl ReductionMatrix {
    /// Diagonal entry (equal to `vv` for a cospectral pair).
    pub fn a(&self) -> &RationalFunction {
        &self.uu
    }

    /// Off-diagonal entry.
    pub fn b(&self) -> &RationalFunction {
        &self.uv
    }

    pub fn is_bisymmetric(&self) -> bool {
        self.uu == self.vv
    }
}

/// `R(λ) = H_SS - H_{S S̄} (H_{S̄ S̄} - λI)^{-1} H_{S̄ S}` with `S = {u, v}`.
///
/// Each entry is `det([[H_S̄S̄ - λI, h_j], [h_iᵀ, H_ij]]) / det(H_S̄S̄ - λI)`; the bordered
/// determinants are recovered exactly by evaluation at integer points and interpolation.
pub fn isospectral_reduction(net: &Network, pair: VertexPair) -> Result<ReductionMatrix> {
    pair.check(net)?;
    let h = net.matrix();
    let (u, v) = (pair.u - 1, pair.v - 1);
    let rest: Vec<usize> = (0..net.n()).filter(|&i| i != u && i != v).collect();
    if rest.is_empty() {
        let c = |i: usize, j: usize| RationalFunction::constant(h[i][j].clone());
        return Ok(ReductionMatrix { uu: c(u, u), vv: c(v, v), uv: c(u, v) });
    }
    let m = rest.len();
    let points: Vec<Rational> = (0..=m as i64).map(|k| Rational::from_integer(k.into())).collect();
    let shifted = |x: &Rational| -> Matrix {
        rest.iter()
            .enumerate()
            .map(|(a, &i)| {
                rest.iter()
                    .enumerate()
                    .map(|(b, &j)| if a == b { &h[i][j] - x } else { h[i][j].clone() })
                    .collect()
            })
            .collect()
    };
    let bordered = |x: &Rational, i: usize, j: usize| -> Rational {
        let mut mat = shifted(x);
        for (row, &r) in mat.iter_mut().zip(&rest) {
            row.push(h[r][j].clone());
        }
        let mut last: Vec<Rational> = rest.iter().map(|&c| h[i][c].clone()).collect();
        last.push(h[i][j].clone());
        mat.push(last);
        det(mat)
    };
    let denominator = interpolate(&points, &points.iter().map(|x| det(shifted(x))).collect::<Vec<_>>());
    let entry = |i: usize, j: usize| -> Result<RationalFunction> {
        let values: Vec<Rational> = points.iter().map(|x| bordered(x, i, j)).collect();
        RationalFunction::new(interpolate(&points, &values), denominator.clone())
    };
    Ok(ReductionMatrix { uu: entry(u, u)?, vv: entry(v, v)?, uv: entry(u, v)? })
}

/// Numerator of `det(R(λ) - λI)` after cancelling every common factor, made monic.
pub fn reduction_charpoly(red: &ReductionMatrix) -> RationalPoly {
    let lambda = RationalFunction::from_poly(RationalPoly::lambda());
    let du = &red.uu - &lambda;
    let dv = &red.vv - &lambda;
    let det = &(&du * &dv) - &(&red.uv * &red.uv);
    det.num().monic()
}

/// Cospectral and every non-linear eigenvalue of the reduction is simple.
pub fn is_strongly_cospectral(net: &Network, pair: VertexPair) -> Result<bool> {
    if !is_cospectral(net, pair)? {
        return Ok(false);
    }
    let red = isospectral_reduction(net, pair)?;
    Ok(reduction_charpoly(&red).is_square_free())
}
