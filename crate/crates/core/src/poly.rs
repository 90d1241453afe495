//! Dense univariate polynomials and reduced rational functions over the rationals.
//!
//! The indeterminate is written `λ` when printed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational};

/// Coefficients in ascending degree order with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate λ.
    pub fn lambda() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `λ - c`
    pub fn linear_root(c: &Rational) -> Self {
        Self::new(vec![-c.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        self.normalized().0
    }

    /// Monic form together with the sign of the original leading coefficient.
    pub fn normalized(&self) -> (Self, i8) {
        if self.is_zero() {
            return (Self::zero(), 1);
        }
        let lc = self.leading();
        let sign = if lc.is_negative() { -1 } else { 1 };
        (self.scale(&lc.recip()), sign)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let dlead = divisor.leading().recip();
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] * &dlead;
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * d;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::InexactDivision("division by the zero polynomial".into()));
        }
        let (q, r) = self.div_rem(divisor);
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("({self}) / ({divisor}) leaves remainder {r}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn is_square_free(&self) -> bool {
        self.is_constant() || self.gcd(&self.derivative()).is_constant()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Primitive integer polynomial with positive leading coefficient, same roots.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }

    /// Real roots in ascending order, assuming the polynomial has only simple real roots
    /// (roots of even multiplicity are reported once when the value at a critical point
    /// vanishes to working precision).
    pub fn real_roots(&self) -> Vec<f64> {
        let coeffs: Vec<f64> = self.monic().coeffs.iter().map(to_f64).collect();
        real_roots_f64(&coeffs)
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

fn eval_f64(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn magnitude_f64(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs())
}

fn real_roots_f64(coeffs: &[f64]) -> Vec<f64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let lead = coeffs[deg];
    // Cauchy bound
    let bound = 1.0 + coeffs[..deg].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let deriv: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let mut marks = vec![-bound];
    marks.extend(real_roots_f64(&deriv).into_iter().filter(|c| c.abs() < bound));
    marks.push(bound);

    let mut roots = Vec::new();
    for w in marks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval_f64(coeffs, a), eval_f64(coeffs, b));
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bisect(coeffs, a, b, fa));
        }
    }
    // a critical point at which the polynomial vanishes to working precision is a multiple root
    for &c in &marks[1..marks.len() - 1] {
        let tol = 1e-12 * magnitude_f64(coeffs, c);
        if eval_f64(coeffs, c).abs() <= tol && !roots.iter().any(|r| (r - c).abs() < 1e-9) {
            roots.push(c);
        }
    }
    if eval_f64(coeffs, bound) == 0.0 {
        roots.push(bound);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn bisect(coeffs: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = eval_f64(coeffs, m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add, RationalPoly);
forward_owned!(Sub, sub, RationalPoly);
forward_owned!(Mul, mul, RationalPoly);

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (d, unit) {
                (0, _) => write!(f, "{}", format_rational(&mag))?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", format_rational(&mag))?,
            }
            match d {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ^{d}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RationalPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(serializer)
    }
}

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: RationalPoly,
    den: RationalPoly,
}

impl RationalFunction {
    pub fn new(num: RationalPoly, den: RationalPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InexactDivision("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::from_poly(RationalPoly::zero()));
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let lc = den.leading().recip();
        Ok(Self { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn from_poly(p: RationalPoly) -> Self {
        Self { num: p, den: RationalPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(RationalPoly::constant(c))
    }

    pub fn num(&self) -> &RationalPoly {
        &self.num
    }

    pub fn den(&self) -> &RationalPoly {
        &self.den
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    fn combine(&self, rhs: &Self, op: impl Fn(&RationalPoly, &RationalPoly) -> RationalPoly) -> Self {
        let num = op(&(&self.num * &rhs.den), &(&rhs.num * &self.den));
        Self::new(num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    #[test]
    fn trims_and_reports_degree() {
        let q = p(&[1, 2, 0, 0]);
        assert_eq!(q.degree(), 1);
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // λ² - 1
        let b = p(&[1, 1]); // λ + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-2, 2])), p(&[-1, 1]));
        assert!(p(&[1, 0, 1]).exact_div(&b).is_err());
    }

    #[test]
    fn square_free() {
        assert!(p(&[-2, 0, 1]).is_square_free());
        assert!(!p(&[1, -2, 1]).is_square_free());
        assert!(p(&[5]).is_square_free());
    }

    #[test]
    fn display_uses_lambda() {
        let q = RationalPoly::new(vec![ratio(-729, 1250), int(0), int(1)]);
        assert_eq!(q.to_string(), "λ^2 - 729/1250");
        assert_eq!(p(&[0, -3, 2]).to_string(), "2*λ^2 - 3*λ");
        assert_eq!(p(&[0, -1]).to_string(), "-λ");
    }

    #[test]
    fn normalization_records_sign() {
        let (m, s) = p(&[2, 0, -1]).normalized();
        assert_eq!(m, p(&[-2, 0, 1]));
        assert_eq!(s, -1);
    }

    #[test]
    fn primitive_integer_form() {
        let q = RationalPoly::new(vec![ratio(-1, 4), int(0), ratio(-1, 2)]);
        let ints: Vec<i64> = q.primitive_integer().iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(ints, vec![1, 0, 2]);
    }

    #[test]
    fn real_roots_of_chebyshev_like() {
        let roots = p(&[0, -2, 0, 1]).real_roots(); // λ(λ² - 2)
        let want = [-(2f64.sqrt()), 0.0, 2f64.sqrt()];
        assert_eq!(roots.len(), 3);
        for (r, w) in roots.iter().zip(want) {
            assert!((r - w).abs() < 1e-12, "{roots:?}");
        }
        let double = p(&[1, -2, 1]).real_roots();
        assert_eq!(double.len(), 1);
        assert!((double[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rational_function_reduces() {
        let f = RationalFunction::new(p(&[-1, 0, 1]), p(&[2, 2])).unwrap();
        assert_eq!(f.num(), &RationalPoly::new(vec![ratio(-1, 2), ratio(1, 2)]));
        assert_eq!(f.den(), &RationalPoly::one());
        let g = RationalFunction::new(p(&[1]), p(&[0, 1])).unwrap(); // 1/λ
        let sum = &g + &g;
        assert_eq!(sum.eval(&int(2)), Some(int(1)));
        assert_eq!(sum.eval(&int(0)), None);
        let diff = &sum - &sum;
        assert!(diff.num().is_zero());
        assert!(RationalFunction::new(p(&[1]), RationalPoly::zero()).is_err());
    }
}
