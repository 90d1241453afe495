//! Few-photon scattering through a linear network: permanents, transition probabilities and
//! two-photon correlation matrices.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const MAX_PERMANENT: usize = 20;
const UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 0-based entry.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|z| *z = z.conj());
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, got: other.rows });
        }
        let mut data = vec![Complex64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self { rows: self.rows, cols: other.cols, data })
    }

    /// `max |(U†U − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.adjoint().mul(self).expect("adjoint product is square");
        let mut worst = 0.0_f64;
        for i in 0..self.cols {
            for j in 0..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod.get(i, j) - target).norm());
            }
        }
        worst
    }
}

/// Mode ids (1-based) repeated by occupation, ascending.
pub fn assignment_list(q: &[usize]) -> Vec<usize> {
    q.iter().enumerate().flat_map(|(j, &c)| std::iter::repeat(j + 1).take(c)).collect()
}

/// Ryser's formula with Gray-code column subsets, `O(2^n · n)`.
pub fn permanent(m: &ComplexMatrix) -> Result<Complex64> {
    if m.rows != m.cols {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n > MAX_PERMANENT {
        return Err(Error::InvalidArgument(format!("permanent limited to {MAX_PERMANENT}x{MAX_PERMANENT}")));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray = 0usize;
    for k in 1usize..1 << n {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let sign = if next & (1 << col) != 0 { 1.0 } else { -1.0 };
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += m.get(i, col) * sign;
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        // (-1)^{n - |S|}
        if (n - next.count_ones() as usize) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bosonic,
    Distinguishable,
}

impl Statistics {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Bosonic => "bosonic",
            Statistics::Distinguishable => "distinguishable",
        }
    }
}

fn factorial_product(q: &[usize]) -> f64 {
    // exact in u128 for every photon number a permanent can handle
    q.iter().map(|&c| (1..=c as u128).product::<u128>()).product::<u128>() as f64
}

/// `M_{j,k} = U_{d_j(r), d_k(s)}`.
fn scattering_matrix(r: &[usize], s: &[usize], u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = u.rows;
    if u.cols != n {
        return Err(Error::NotSquare { rows: u.rows, cols: u.cols });
    }
    for q in [r, s] {
        if q.len() != n {
            return Err(Error::Dimension { expected: n, got: q.len() });
        }
    }
    let (dr, ds) = (assignment_list(r), assignment_list(s));
    if dr.len() != ds.len() {
        return Err(Error::PhotonNumber { input: dr.len(), output: ds.len() });
    }
    if dr.is_empty() {
        return Err(Error::InvalidArgument("at least one photon is required".into()));
    }
    let data = dr.iter().flat_map(|&a| ds.iter().map(move |&b| u.get(a - 1, b - 1))).collect();
    ComplexMatrix::new(dr.len(), dr.len(), data)
}

/// Raw weights `|perm M|²` (bosonic) or `perm |M|²` (distinguishable), before factorials.
fn raw_weight(m: &ComplexMatrix, statistics: Statistics) -> Result<f64> {
    Ok(match statistics {
        Statistics::Bosonic => permanent(m)?.norm_sqr(),
        Statistics::Distinguishable => {
            let abs2 = ComplexMatrix {
                rows: m.rows,
                cols: m.cols,
                data: m.data.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect(),
            };
            permanent(&abs2)?.re
        }
    })
}

/// Probability of input occupation `r` scattering to output occupation `s`.
///
/// Bosonic: `|perm M|² / (∏ r_j! ∏ s_j!)`; distinguishable: `perm |M|² / ∏ s_j!`.
pub fn transition_probability(r: &[usize], s: &[usize], u: &ComplexMatrix, statistics: Statistics) -> Result<f64> {
    let m = scattering_matrix(r, s, u)?;
    let raw = raw_weight(&m, statistics)?;
    Ok(match statistics {
        Statistics::Bosonic => raw / (factorial_product(r) * factorial_product(s)),
        Statistics::Distinguishable => raw / factorial_product(s),
    })
}

/// All occupation lists of `total` photons over `modes` modes, lexicographically descending.
pub fn occupations(modes: usize, total: usize) -> Vec<Vec<usize>> {
    fn fill(prefix: &mut Vec<usize>, modes: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == modes {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in (0..=left).rev() {
            prefix.push(c);
            fill(prefix, modes, left - c, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if modes > 0 {
        fill(&mut Vec::with_capacity(modes), modes, total, &mut out);
    }
    out
}

/// `(1/√2)·[[1, i], [i, 1]]`.
pub fn beam_splitter_unitary() -> ComplexMatrix {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let b = Complex64::new(0.0, FRAC_1_SQRT_2);
    ComplexMatrix { rows: 2, cols: 2, data: vec![a, b, b, a] }
}

fn check_mode(id: usize, n: usize) -> Result<usize> {
    if id == 0 || id > n {
        return Err(Error::VertexOutOfRange { id, n });
    }
    Ok(id - 1)
}

/// `U_net · U_φ · U_BS`, the beam splitter acting on `bs_sites` and the phase `e^{iφ}` on
/// `phase_site`.
pub fn total_unitary(
    net_u: &ComplexMatrix,
    bs_sites: (usize, usize),
    phase_site: usize,
    phase: f64,
) -> Result<ComplexMatrix> {
    let n = net_u.rows;
    if net_u.cols != n {
        return Err(Error::NotSquare { rows: net_u.rows, cols: net_u.cols });
    }
    let (a, b) = (check_mode(bs_sites.0, n)?, check_mode(bs_sites.1, n)?);
    if a == b {
        return Err(Error::DegeneratePair(bs_sites.0));
    }
    let p = check_mode(phase_site, n)?;
    let defect = net_u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let bs = beam_splitter_unitary();
    let mut u_bs = ComplexMatrix::identity(n);
    for (i, x) in [a, b].into_iter().enumerate() {
        for (j, y) in [a, b].into_iter().enumerate() {
            u_bs.set(x, y, bs.get(i, j));
        }
    }
    let mut u_phi = ComplexMatrix::identity(n);
    u_phi.set(p, p, Complex64::from_polar(1.0, phase));
    net_u.mul(&u_phi)?.mul(&u_bs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    pub n: usize,
    /// Row-major, symmetric.
    pub values: Vec<f64>,
    pub statistics: Statistics,
    /// Off-diagonal entries divided by two.
    pub halved: bool,
    pub tau: Option<f64>,
    pub phase: f64,
}

#[derive(Serialize)]
struct CorrelationDoc<'a> {
    statistics: Statistics,
    tau: Option<f64>,
    phase: f64,
    comparison_mode: &'static str,
    n: usize,
    matrix: Vec<&'a [f64]>,
}

impl CorrelationMatrix {
    /// 1-based entry.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i - 1) * self.n + (j - 1)]
    }

    pub fn max_entry<F: Fn(usize, usize) -> bool>(&self, select: F) -> f64 {
        let mut worst = 0.0_f64;
        for i in 1..=self.n {
            for j in 1..=self.n {
                if select(i, j) {
                    worst = worst.max(self.get(i, j));
                }
            }
        }
        worst
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,value\n");
        for i in 1..=self.n {
            for j in 1..=self.n {
                writeln!(out, "{i},{j},{:.16e}", self.get(i, j)).unwrap();
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = CorrelationDoc {
            statistics: self.statistics,
            tau: self.tau,
            phase: self.phase,
            comparison_mode: if self.halved { "halved" } else { "raw" },
            n: self.n,
            matrix: self.values.chunks(self.n).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("correlation matrix serializes")
    }
}

/// Two-photon correlations for one photon in each of `bs_sites`, sent through the beam
/// splitter, the phase on the second site, then the network.
///
/// `Γ_B(i,j) = |perm M|²`, `Γ_D(i,j) = perm |M|²` with `M` built from the input pair and the
/// output pair `(i, j)`; no occupation factorials are applied.
pub fn correlation_matrix(
    net_u: &ComplexMatrix,
    bs_sites: (usize, usize),
    phase: f64,
    statistics: Statistics,
    halved: bool,
) -> Result<CorrelationMatrix> {
    let n = net_u.rows;
    let u_tot = total_unitary(net_u, bs_sites, bs_sites.1, phase)?;
    // rows of M must follow the input modes: U_tot maps input (column) to output (row)
    let scatter = u_tot.transpose();
    let mut r = vec![0; n];
    r[bs_sites.0 - 1] = 1;
    r[bs_sites.1 - 1] = 1;
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut s = vec![0; n];
            s[i] += 1;
            s[j] += 1;
            let mut w = raw_weight(&scattering_matrix(&r, &s, &scatter)?, statistics)?;
            if halved && i != j {
                w /= 2.0;
            }
            values[i * n + j] = w;
            values[j * n + i] = w;
        }
    }
    Ok(CorrelationMatrix { n, values, statistics, halved, tau: None, phase })
}
