//! Parity decomposition of the characteristic polynomial, the trace/degree condition and the
//! resulting transfer certificate, plus a parameter scan for the strong-cospectrality boundary.

use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::automorphism::has_swap_automorphism;
use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::network::{Network, VertexPair};
use crate::poly::{RationalFunction, RationalPoly};
use crate::rational::{format_rational, Rational};
use crate::spectral::{char_poly, is_cospectral, isospectral_reduction, reduction_charpoly, ReductionMatrix};

/// Uniform coupling `k` and the shared potential `E` of the potential-carrying sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterPoint {
    pub k: Rational,
    pub e: Rational,
}

impl ParameterPoint {
    pub fn new(k: Rational, e: Rational) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::InvalidArgument("coupling k must be nonzero".into()));
        }
        Ok(Self { k, e })
    }
}

/// `char_poly = p_plus · p_minus · p_zero`, with the signs stripped from the raw numerators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityPolys {
    pub plus: RationalPoly,
    pub minus: RationalPoly,
    pub zero: RationalPoly,
    pub plus_sign: i8,
    pub minus_sign: i8,
}

fn parity_numerator(f: &RationalFunction, label: &'static str) -> Result<(RationalPoly, i8)> {
    // the gcd is cancelled on construction; a shared root here means the arithmetic is broken
    if !f.num().gcd(f.den()).is_constant() {
        return Err(Error::SharedRoot(label));
    }
    if f.num().is_zero() {
        return Err(Error::InvalidArgument(format!("{label} vanishes identically")));
    }
    Ok(f.num().normalized())
}

/// Splits the characteristic polynomial by eigenvector parity on the pair.
///
/// `p_±` are the numerators of `a ± b − λ` from the isospectral reduction, made monic;
/// `p_zero` is what remains of the characteristic polynomial after exact division.
pub fn parity_decompose(net: &Network, pair: VertexPair) -> Result<ParityPolys> {
    if !is_cospectral(net, pair)? {
        return Err(Error::NotCospectral(pair.u, pair.v));
    }
    decompose_reduced(net, &isospectral_reduction(net, pair)?)
}

fn decompose_reduced(net: &Network, red: &ReductionMatrix) -> Result<ParityPolys> {
    let lambda = RationalFunction::from_poly(RationalPoly::lambda());
    let plus_fn = &(red.a() + red.b()) - &lambda;
    let minus_fn = &(red.a() - red.b()) - &lambda;
    let (plus, plus_sign) = parity_numerator(&plus_fn, "a + b - λ")?;
    let (minus, minus_sign) = parity_numerator(&minus_fn, "a - b - λ")?;
    let zero = char_poly(net).exact_div(&(&plus * &minus))?;
    Ok(ParityPolys { plus, minus, zero, plus_sign, minus_sign })
}

/// Root sum over degree for both polynomials, and whether the two ratios differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRatios {
    pub r_plus: Rational,
    pub r_minus: Rational,
    pub distinct: bool,
}

fn trace_ratio(p: &RationalPoly) -> Result<Rational> {
    if p.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let monic = p.monic();
    let d = monic.degree();
    Ok(-monic.coeff(d - 1) / Rational::from_integer(d.into()))
}

pub fn trace_ratios(p_plus: &RationalPoly, p_minus: &RationalPoly) -> Result<TraceRatios> {
    let r_plus = trace_ratio(p_plus)?;
    let r_minus = trace_ratio(p_minus)?;
    let distinct = r_plus != r_minus;
    Ok(TraceRatios { r_plus, r_minus, distinct })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Certified,
    LiteralConditionFailed,
    /// Strongly cospectral, but `p_plus` or `p_minus` factors over the rationals.
    Reducible,
    NotStronglyCospectral,
    NotCospectral,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "CERTIFIED",
            Verdict::LiteralConditionFailed => "LITERAL_CONDITION_FAILED",
            Verdict::Reducible => "REDUCIBLE",
            Verdict::NotStronglyCospectral => "NOT_STRONGLY_COSPECTRAL",
            Verdict::NotCospectral => "NOT_COSPECTRAL",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of every gate. Polynomial fields are absent when the pair is not cospectral;
/// trace ratios are absent when either parity polynomial is constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PGSTCertificate {
    pub pair: VertexPair,
    pub cospectral: bool,
    pub swap_automorphism: bool,
    pub strongly_cospectral: bool,
    pub parity: Option<ParityPolys>,
    pub plus_irreducible: bool,
    pub minus_irreducible: bool,
    pub ratios: Option<TraceRatios>,
    pub verdict: Verdict,
}

fn irreducible_or_false(p: &RationalPoly) -> Result<bool> {
    if p.is_constant() {
        return Ok(false);
    }
    is_irreducible(p)
}

pub fn pgst_certificate(net: &Network, pair: VertexPair) -> Result<PGSTCertificate> {
    pair.check(net)?;
    let cospectral = is_cospectral(net, pair)?;
    let swap_automorphism = has_swap_automorphism(net, pair);
    let mut cert = PGSTCertificate {
        pair,
        cospectral,
        swap_automorphism,
        strongly_cospectral: false,
        parity: None,
        plus_irreducible: false,
        minus_irreducible: false,
        ratios: None,
        verdict: Verdict::NotCospectral,
    };
    if !cospectral {
        return Ok(cert);
    }
    let red = isospectral_reduction(net, pair)?;
    cert.strongly_cospectral = reduction_charpoly(&red).is_square_free();
    let parity = decompose_reduced(net, &red)?;
    cert.plus_irreducible = irreducible_or_false(&parity.plus)?;
    cert.minus_irreducible = irreducible_or_false(&parity.minus)?;
    if !parity.plus.is_constant() && !parity.minus.is_constant() {
        cert.ratios = Some(trace_ratios(&parity.plus, &parity.minus)?);
    }
    cert.parity = Some(parity);
    let ratios_distinct = cert.ratios_distinct();
    cert.verdict = if !cert.strongly_cospectral {
        Verdict::NotStronglyCospectral
    } else if !(cert.plus_irreducible && cert.minus_irreducible) {
        Verdict::Reducible
    } else if !ratios_distinct {
        Verdict::LiteralConditionFailed
    } else {
        Verdict::Certified
    };
    Ok(cert)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn poly_strings(p: &RationalPoly) -> Vec<String> {
    p.coeff_strings()
}

#[derive(Serialize)]
struct CertificateDoc<'a> {
    u: usize,
    v: usize,
    cospectral: bool,
    swap_automorphism: bool,
    strongly_cospectral: bool,
    p_plus: Option<Vec<String>>,
    p_minus: Option<Vec<String>>,
    p_zero: Option<Vec<String>>,
    plus_sign: Option<i8>,
    minus_sign: Option<i8>,
    plus_irreducible: bool,
    minus_irreducible: bool,
    trace_ratio_plus: Option<String>,
    trace_ratio_minus: Option<String>,
    #[serde(rename = "eq4_holds")]
    ratios_distinct: bool,
    verdict: Verdict,
    note: Option<&'a str>,
}

const LITERAL_NOTE: &str = "both trace/degree ratios are equal, so the literal condition fails \
even though the pair is strongly cospectral and both parity polynomials are irreducible; \
see the fidelity envelope (`envelope`) for the numerical transfer evidence";

impl PGSTCertificate {
    pub fn ratios_distinct(&self) -> bool {
        self.ratios.as_ref().is_some_and(|e| e.distinct)
    }

    pub fn note(&self) -> Option<&'static str> {
        (self.verdict == Verdict::LiteralConditionFailed).then_some(LITERAL_NOTE)
    }

    /// One `field: value` line per field; coefficients in ascending degree order.
    pub fn report_text(&self) -> String {
        let mut lines = vec![
            format!("pair: {} {}", self.pair.u, self.pair.v),
            format!("cospectral: {}", yes_no(self.cospectral)),
            format!("swap_automorphism: {}", yes_no(self.swap_automorphism)),
            format!("strongly_cospectral: {}", yes_no(self.strongly_cospectral)),
        ];
        if let Some(p) = &self.parity {
            lines.push(format!("p_plus: {}", p.plus));
            lines.push(format!("p_plus_coefficients: {}", poly_strings(&p.plus).join(" ")));
            lines.push(format!("p_plus_sign: {:+}", p.plus_sign));
            lines.push(format!("p_minus: {}", p.minus));
            lines.push(format!("p_minus_coefficients: {}", poly_strings(&p.minus).join(" ")));
            lines.push(format!("p_minus_sign: {:+}", p.minus_sign));
            lines.push(format!("p_zero: {}", p.zero));
            lines.push(format!("p_zero_coefficients: {}", poly_strings(&p.zero).join(" ")));
        }
        lines.push(format!("plus_irreducible: {}", yes_no(self.plus_irreducible)));
        lines.push(format!("minus_irreducible: {}", yes_no(self.minus_irreducible)));
        if let Some(e) = &self.ratios {
            lines.push(format!("trace_ratio_plus: {}", format_rational(&e.r_plus)));
            lines.push(format!("trace_ratio_minus: {}", format_rational(&e.r_minus)));
        }
        lines.push(format!("eq4_holds: {}", yes_no(self.ratios_distinct())));
        lines.push(format!("verdict: {}", self.verdict));
        if let Some(note) = self.note() {
            lines.push(format!("note: {note}"));
        }
        lines.join("\n") + "\n"
    }

    pub fn to_json(&self) -> String {
        let doc = CertificateDoc {
            u: self.pair.u,
            v: self.pair.v,
            cospectral: self.cospectral,
            swap_automorphism: self.swap_automorphism,
            strongly_cospectral: self.strongly_cospectral,
            p_plus: self.parity.as_ref().map(|p| poly_strings(&p.plus)),
            p_minus: self.parity.as_ref().map(|p| poly_strings(&p.minus)),
            p_zero: self.parity.as_ref().map(|p| poly_strings(&p.zero)),
            plus_sign: self.parity.as_ref().map(|p| p.plus_sign),
            minus_sign: self.parity.as_ref().map(|p| p.minus_sign),
            plus_irreducible: self.plus_irreducible,
            minus_irreducible: self.minus_irreducible,
            trace_ratio_plus: self.ratios.as_ref().map(|e| format_rational(&e.r_plus)),
            trace_ratio_minus: self.ratios.as_ref().map(|e| format_rational(&e.r_minus)),
            ratios_distinct: self.ratios_distinct(),
            verdict: self.verdict,
            note: self.note(),
        };
        serde_json::to_string_pretty(&doc).expect("certificate serializes")
    }
}

/// One grid point of a boundary scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub e: Rational,
    pub cospectral: bool,
    pub strongly_cospectral: bool,
    /// `p_plus` and `p_minus` share a root (exact gcd).
    pub common_root: bool,
    pub plus_roots: Vec<f64>,
    pub minus_roots: Vec<f64>,
    /// Smallest `|r₊ − r₋|` over real roots; `None` when either side has none.
    pub min_root_distance: Option<f64>,
}

impl ScanRow {
    pub fn fails(&self) -> bool {
        !self.strongly_cospectral || self.common_root
    }
}

/// Adjacent grid values between which a `p_plus` root and a `p_minus` root swap order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryReport {
    pub k: Rational,
    pub rows: Vec<ScanRow>,
    /// Grid values where strong cospectrality fails exactly.
    pub failures: Vec<Rational>,
    pub brackets: Vec<Bracket>,
}

fn scan_point<F>(builder: &F, pair: VertexPair, point: &ParameterPoint) -> Result<ScanRow>
where
    F: Fn(&ParameterPoint) -> Network,
{
    let net = builder(point);
    let mut row = ScanRow {
        e: point.e.clone(),
        cospectral: false,
        strongly_cospectral: false,
        common_root: false,
        plus_roots: Vec::new(),
        minus_roots: Vec::new(),
        min_root_distance: None,
    };
    if !is_cospectral(&net, pair)? {
        return Ok(row);
    }
    row.cospectral = true;
    let red = isospectral_reduction(&net, pair)?;
    row.strongly_cospectral = reduction_charpoly(&red).is_square_free();
    let parity = decompose_reduced(&net, &red)?;
    row.common_root = !parity.plus.gcd(&parity.minus).is_constant();
    row.plus_roots = parity.plus.real_roots();
    row.minus_roots = parity.minus.real_roots();
    row.min_root_distance = row
        .plus_roots
        .iter()
        .flat_map(|p| row.minus_roots.iter().map(move |m| (p - m).abs()))
        .min_by(f64::total_cmp);
    Ok(row)
}

/// A `p_plus` root and a `p_minus` root change order between the two rows. Rows whose root
/// counts differ (a root passing through a pole, or into `p_zero`) are not compared.
fn crosses(a: &ScanRow, b: &ScanRow) -> bool {
    if a.plus_roots.len() != b.plus_roots.len() || a.minus_roots.len() != b.minus_roots.len() {
        return false;
    }
    for (pa, pb) in a.plus_roots.iter().zip(&b.plus_roots) {
        for (ma, mb) in a.minus_roots.iter().zip(&b.minus_roots) {
            if (pa - ma) * (pb - mb) < 0.0 {
                return true;
            }
        }
    }
    false
}

/// Evaluates every grid value (concurrently; rows come back in grid order), records the exact
/// failures and brackets the irrational crossings between grid points.
pub fn boundary_scan<F>(builder: F, pair: VertexPair, k: &Rational, grid: &[Rational]) -> Result<BoundaryReport>
where
    F: Fn(&ParameterPoint) -> Network + Sync,
{
    if grid.is_empty() {
        return Err(Error::InvalidArgument("potential grid is empty".into()));
    }
    let points = grid
        .iter()
        .map(|e| ParameterPoint::new(k.clone(), e.clone()))
        .collect::<Result<Vec<_>>>()?;
    let rows = points
        .par_iter()
        .map(|p| scan_point(&builder, pair, p))
        .collect::<Result<Vec<_>>>()?;
    let failures = rows.iter().filter(|r| r.fails()).map(|r| r.e.clone()).collect();
    let brackets = rows
        .windows(2)
        .filter(|w| crosses(&w[0], &w[1]))
        .map(|w| Bracket { lo: w[0].e.clone(), hi: w[1].e.clone() })
        .collect();
    Ok(BoundaryReport { k: k.clone(), rows, failures, brackets })
}

/// `start, start + step, …` up to and including `end`, exactly.
pub fn rational_grid(start: &Rational, end: &Rational, step: &Rational) -> Result<Vec<Rational>> {
    if !step.is_positive() {
        return Err(Error::InvalidArgument("grid step must be positive".into()));
    }
    if end < start {
        return Err(Error::InvalidArgument("grid end lies below its start".into()));
    }
    let mut grid = Vec::new();
    let mut x = start.clone();
    while &x <= end {
        grid.push(x.clone());
        x += step;
    }
    Ok(grid)
}
