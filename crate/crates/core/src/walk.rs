//! Continuous-time quantum walk in double precision: Jacobi diagonalisation, evolution,
//! transfer fidelity and long-horizon peak scans.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::Network;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_SWEEPS: usize = 100;
/// Eigenvalues closer than this (times the spectral radius, if above one) form one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
const SCAN_CHUNK: usize = 1 << 16;
const THINNING_PER_DECADE: f64 = 200.0;

/// `H = Q Λ Qᵀ` with eigenvalues ascending; `Q` stored row-major, column `j` ↔ `values[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    n: usize,
    values: Vec<f64>,
    vectors: Vec<f64>,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Component `i` (0-based site index) of eigenvector `j`.
    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.vectors[i * self.n + j]
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    fn check_site(&self, id: usize) -> Result<usize> {
        if id == 0 || id > self.n {
            return Err(Error::VertexOutOfRange { id, n: self.n });
        }
        Ok(id - 1)
    }

    /// `U(τ)_{a,b} = Σ_j Q_aj Q_bj e^{-iλ_j τ}` for 1-based sites.
    pub fn amplitude(&self, a: usize, b: usize, tau: f64) -> Result<Complex64> {
        let (a, b) = (self.check_site(a)?, self.check_site(b)?);
        Ok(self.amplitude0(a, b, tau))
    }

    fn amplitude0(&self, a: usize, b: usize, tau: f64) -> Complex64 {
        (0..self.n)
            .map(|j| Complex64::from_polar(self.q(a, j) * self.q(b, j), -self.values[j] * tau))
            .sum()
    }

    /// The full propagator `exp(-iHτ)`, row-major.
    pub fn unitary(&self, tau: f64) -> Vec<Complex64> {
        let phases: Vec<Complex64> = self.values.iter().map(|l| Complex64::from_polar(1.0, -l * tau)).collect();
        let mut u = vec![Complex64::new(0.0, 0.0); self.n * self.n];
        for a in 0..self.n {
            for b in 0..self.n {
                u[a * self.n + b] = (0..self.n).map(|j| phases[j] * (self.q(a, j) * self.q(b, j))).sum();
            }
        }
        u
    }
}

/// Cyclic Jacobi on the double-precision image of `H`.
pub fn eigh(net: &Network) -> Result<EigenSystem> {
    eigh_dense(net.n(), net.matrix_f64())
}

/// Cyclic Jacobi on a symmetric row-major `n×n` matrix.
pub fn eigh_dense(n: usize, mut a: Vec<f64>) -> Result<EigenSystem> {
    if a.len() != n * n {
        return Err(Error::Dimension { expected: n * n, got: a.len() });
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let tol = JACOBI_TOL * scale;
    let off = |a: &[f64]| {
        let mut m = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                m = m.max(a[p * n + q].abs());
            }
        }
        m
    };
    let mut sweeps = 0;
    loop {
        let residual = off(&a);
        if residual < tol {
            break;
        }
        if sweeps == JACOBI_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&j| a[j * n + j]).collect();
    let mut vectors = vec![0.0; n * n];
    for i in 0..n {
        for (col, &j) in order.iter().enumerate() {
            vectors[i * n + col] = v[i * n + j];
        }
    }
    Ok(EigenSystem { n, values, vectors })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeState {
    pub amplitudes: Vec<Complex64>,
}

impl AmplitudeState {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// Excitation localised on the 1-based `site`.
    pub fn site(n: usize, site: usize) -> Result<Self> {
        if site == 0 || site > n {
            return Err(Error::VertexOutOfRange { id: site, n });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        amplitudes[site - 1] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// `(e_u ± e_v)/√2`.
    pub fn pair(n: usize, u: usize, v: usize, antisymmetric: bool) -> Result<Self> {
        let mut state = Self::site(n, u)?;
        let other = Self::site(n, v)?;
        let sign = if antisymmetric { -1.0 } else { 1.0 };
        for (a, b) in state.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a = (*a + b * sign) * FRAC_1_SQRT_2;
        }
        Ok(state)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// `ψ(τ) = Q e^{-iΛτ} Qᵀ ψ(0)`.
pub fn evolve(sys: &EigenSystem, tau: f64, psi0: &AmplitudeState) -> Result<AmplitudeState> {
    let n = sys.n;
    if psi0.amplitudes.len() != n {
        return Err(Error::Dimension { expected: n, got: psi0.amplitudes.len() });
    }
    let coeffs: Vec<Complex64> = (0..n)
        .map(|j| {
            let c: Complex64 = (0..n).map(|i| psi0.amplitudes[i] * sys.q(i, j)).sum();
            c * Complex64::from_polar(1.0, -sys.values[j] * tau)
        })
        .collect();
    let amplitudes = (0..n).map(|i| (0..n).map(|j| coeffs[j] * sys.q(i, j)).sum()).collect();
    Ok(AmplitudeState { amplitudes })
}

/// `F_{u,v}(τ) = |U(τ)_{u,v}|²`.
pub fn fidelity(sys: &EigenSystem, u: usize, v: usize, tau: f64) -> Result<f64> {
    Ok(sys.amplitude(u, v, tau)?.norm_sqr())
}

/// Default coarse step: 0.02 divided by the spectral radius rounded to a whole number (≥ 1).
pub fn default_step(sys: &EigenSystem) -> f64 {
    0.02 / sys.spectral_radius().round().max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub tau: f64,
    pub f: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeRow {
    pub tau: f64,
    pub f: f64,
    pub running_max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeakReport {
    pub samples: usize,
    pub step: f64,
    /// Refined peaks, each higher than everything before it.
    pub peaks: Vec<Peak>,
    /// Running maximum on a logarithmically thinned grid, plus one row per peak.
    pub envelope: Vec<EnvelopeRow>,
    pub best: Peak,
}

impl PeakReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,F,running_max\n");
        for row in &self.envelope {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", row.tau, row.f, row.running_max).unwrap();
        }
        out
    }
}

/// Fidelity as a function of τ, with the weights `Q_uj Q_vj` precomputed.
struct Transfer<'a> {
    values: &'a [f64],
    weights: Vec<f64>,
}

impl Transfer<'_> {
    fn f(&self, tau: f64) -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (w, l) in self.weights.iter().zip(self.values) {
            let (s, c) = (l * tau).sin_cos();
            re += w * c;
            im -= w * s;
        }
        re * re + im * im
    }

    /// Maximum of `f` inside `[a, c]` given an interior `b` at least as high as both ends.
    /// Successive parabolic steps, with a bisection of the longer side whenever the
    /// parabola fails to land strictly inside.
    fn refine(&self, mut a: f64, mut b: f64, mut c: f64, tol: f64) -> Peak {
        let mut fb = self.f(b);
        let (mut fa, mut fc) = (self.f(a), self.f(c));
        let mut iterations = 0;
        while c - a > tol && iterations < 200 {
            iterations += 1;
            let num = (b - a).powi(2) * (fb - fc) - (b - c).powi(2) * (fb - fa);
            let den = (b - a) * (fb - fc) - (b - c) * (fb - fa);
            let mut x = if den != 0.0 { b - 0.5 * num / den } else { f64::NAN };
            let min_gap = 0.25 * tol;
            if !(x > a + min_gap && x < c - min_gap) || (x - b).abs() < min_gap || iterations % 3 == 0 {
                x = if b - a > c - b { 0.5 * (a + b) } else { 0.5 * (b + c) };
            }
            let fx = self.f(x);
            if fx >= fb {
                if x < b {
                    (c, fc) = (b, fb);
                } else {
                    (a, fa) = (b, fb);
                }
                (b, fb) = (x, fx);
            } else if x < b {
                (a, fa) = (x, fx);
            } else {
                (c, fc) = (x, fx);
            }
        }
        Peak { tau: b, f: fb }
    }
}

/// Coarse samples that beat every earlier sample of the same chunk.
fn chunk_records(t: &Transfer, start: usize, end: usize, step: f64) -> Vec<(usize, f64)> {
    let mut best = f64::NEG_INFINITY;
    let mut out = Vec::new();
    for i in start..end {
        let f = t.f(i as f64 * step);
        if f > best {
            best = f;
            out.push((i, f));
        }
    }
    out
}

pub fn envelope_scan(sys: &EigenSystem, u: usize, v: usize, tau_max: f64, step: f64) -> Result<PeakReport> {
    envelope_scan_chunked(sys, u, v, tau_max, step, SCAN_CHUNK, true)
}

/// As [`envelope_scan`], with explicit partitioning. The result does not depend on `chunk`
/// or `parallel`: chunk-local records are merged in time order before any refinement.
pub fn envelope_scan_chunked(
    sys: &EigenSystem,
    u: usize,
    v: usize,
    tau_max: f64,
    step: f64,
    chunk: usize,
    parallel: bool,
) -> Result<PeakReport> {
    if !(tau_max > 0.0 && tau_max.is_finite()) {
        return Err(Error::InvalidArgument("tau_max must be positive and finite".into()));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument("step must be positive and finite".into()));
    }
    let chunk = chunk.max(1);
    let (u0, v0) = (sys.check_site(u)?, sys.check_site(v)?);
    let t = Transfer { values: &sys.values, weights: (0..sys.n).map(|j| sys.q(u0, j) * sys.q(v0, j)).collect() };
    let last = (tau_max / step * (1.0 + 1e-12)).floor() as usize;
    let samples = last + 1;
    let bounds: Vec<(usize, usize)> =
        (0..samples).step_by(chunk).map(|s| (s, (s + chunk).min(samples))).collect();
    let local: Vec<Vec<(usize, f64)>> = if parallel {
        bounds.par_iter().map(|&(s, e)| chunk_records(&t, s, e, step)).collect()
    } else {
        bounds.iter().map(|&(s, e)| chunk_records(&t, s, e, step)).collect()
    };

    let tau_of = |i: usize| i as f64 * step;
    let tol = 1e-4 * step;
    let mut running = f64::NEG_INFINITY;
    let mut peaks: Vec<Peak> = Vec::new();
    // (τ, value) events that raise the envelope, in time order
    let mut events: Vec<(f64, f64)> = Vec::new();
    for (i, f) in local.into_iter().flatten() {
        if f <= running {
            continue;
        }
        events.push((tau_of(i), f));
        // climb to the coarse local maximum, then refine between its neighbours
        let (mut m, mut fm) = (i, f);
        while m < last {
            let next = t.f(tau_of(m + 1));
            if next <= fm {
                break;
            }
            m += 1;
            fm = next;
        }
        let peak = if m > 0 && m < last {
            let p = t.refine(tau_of(m - 1), tau_of(m), tau_of(m + 1), tol);
            if p.f >= fm { p } else { Peak { tau: tau_of(m), f: fm } }
        } else {
            Peak { tau: tau_of(m), f: fm }
        };
        running = peak.f;
        events.push((peak.tau, peak.f));
        peaks.push(peak);
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut grid: BTreeSet<usize> = BTreeSet::new();
    grid.insert(0);
    grid.insert(last);
    let mut k = 0.0;
    loop {
        let i = 10f64.powf(k / THINNING_PER_DECADE).round() as usize;
        if i > last {
            break;
        }
        grid.insert(i);
        k += 1.0;
    }
    let mut rows: Vec<(f64, f64)> = grid.into_iter().map(|i| (tau_of(i), t.f(tau_of(i)))).collect();
    rows.extend(peaks.iter().map(|p| (p.tau, p.f)));
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    rows.dedup_by(|a, b| a.0 == b.0);

    let mut envelope = Vec::with_capacity(rows.len());
    let mut level = f64::NEG_INFINITY;
    let mut next_event = 0;
    for (tau, f) in rows {
        while next_event < events.len() && events[next_event].0 <= tau {
            level = level.max(events[next_event].1);
            next_event += 1;
        }
        level = level.max(f);
        envelope.push(EnvelopeRow { tau, f, running_max: level });
    }
    let best = *peaks.last().expect("the first sample always raises the running maximum");
    Ok(PeakReport { samples, step, peaks, envelope, best })
}

/// Largest `|ψ_w(τ)|` over the singlet sites and the grid, starting from `(e_u − e_v)/√2`.
pub fn antisymmetric_confinement(
    sys: &EigenSystem,
    u: usize,
    v: usize,
    singlets: &BTreeSet<usize>,
    tau_grid: &[f64],
) -> Result<f64> {
    if tau_grid.is_empty() {
        return Err(Error::InvalidArgument("time grid is empty".into()));
    }
    let psi0 = AmplitudeState::pair(sys.n, u, v, true)?;
    for &w in singlets {
        sys.check_site(w)?;
    }
    let mut leak = 0.0_f64;
    for &tau in tau_grid {
        let psi = evolve(sys, tau, &psi0)?;
        for &w in singlets {
            leak = leak.max(psi.amplitudes[w - 1].norm());
        }
    }
    Ok(leak)
}

/// Every eigenspace projector maps `e_u` to `±` its image of `e_v`.
pub fn eigenprojector_parity(sys: &EigenSystem, u: usize, v: usize) -> Result<bool> {
    let (u0, v0) = (sys.check_site(u)?, sys.check_site(v)?);
    let gap = CLUSTER_TOL * sys.spectral_radius().max(1.0);
    let mut start = 0;
    while start < sys.n {
        let mut end = start + 1;
        while end < sys.n && sys.values[end] - sys.values[end - 1] < gap {
            end += 1;
        }
        // Π e_x = Σ_{j in cluster} Q_xj q_j
        let project = |x: usize| -> Vec<f64> {
            (0..sys.n).map(|i| (start..end).map(|j| sys.q(x, j) * sys.q(i, j)).sum()).collect()
        };
        let (pu, pv) = (project(u0), project(v0));
        let dist = |sign: f64| pu.iter().zip(&pv).map(|(a, b)| (a - sign * b).powi(2)).sum::<f64>().sqrt();
        if dist(1.0) >= CLUSTER_TOL && dist(-1.0) >= CLUSTER_TOL {
            return Ok(false);
        }
        start = end;
    }
    Ok(true)
}

/// Site probabilities at each τ, launched from `from`.
pub fn evolution_series(sys: &EigenSystem, from: usize, taus: &[f64]) -> Result<Vec<Vec<f64>>> {
    let psi0 = AmplitudeState::site(sys.n, from)?;
    taus.iter().map(|&tau| Ok(evolve(sys, tau, &psi0)?.probabilities())).collect()
}

/// `0, step, 2·step, …` up to `tau_max` inclusive (within rounding).
pub fn time_grid(tau_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(tau_max >= 0.0 && tau_max.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument("time grid needs tau_max ≥ 0 and step > 0".into()));
    }
    let last = (tau_max / step * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=last).map(|i| i as f64 * step).collect())
}

/// CSV with header `tau,site1,…,siten`.
pub fn evolution_csv(taus: &[f64], series: &[Vec<f64>]) -> String {
    let n = series.first().map_or(0, Vec::len);
    let mut out = String::from("tau");
    for i in 1..=n {
        write!(out, ",site{i}").unwrap();
    }
    out.push('\n');
    for (tau, probs) in taus.iter().zip(series) {
        write!(out, "{tau:.16e}").unwrap();
        for p in probs {
            write!(out, ",{p:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use std::f64::consts::PI;

    fn chain(n: usize) -> Network {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        Network::uniform(n, &edges, &int(1)).unwrap()
    }

    #[test]
    fn diagonal_network() {
        let mut net = Network::new(3).unwrap();
        net.set_onsite(1, int(2)).unwrap();
        net.set_onsite(3, int(-1)).unwrap();
        let sys = eigh(&net).unwrap();
        assert_eq!(sys.values(), &[-1.0, 0.0, 2.0]);
        assert_eq!(sys.q(2, 0).abs(), 1.0);
    }

    #[test]
    fn two_chain_rabi() {
        let sys = eigh(&chain(2)).unwrap();
        assert!((sys.values()[0] + 1.0).abs() < 1e-14 && (sys.values()[1] - 1.0).abs() < 1e-14);
        for tau in [0.0, 0.3, 1.7, 10.0] {
            let p = evolve(&sys, tau, &AmplitudeState::site(2, 1).unwrap()).unwrap().probabilities();
            assert!((p[1] - tau.sin().powi(2)).abs() < 1e-12);
        }
        assert!((fidelity(&sys, 1, 2, PI / 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_chain_envelope_peaks_at_half_pi() {
        let sys = eigh(&chain(2)).unwrap();
        let report = envelope_scan(&sys, 1, 2, 10.0, 0.01).unwrap();
        assert_eq!(report.peaks.len(), 1);
        assert!((report.best.tau - PI / 2.0).abs() < 1e-5);
        assert!((report.best.f - 1.0).abs() < 1e-12);
        assert!(report.envelope.windows(2).all(|w| w[0].running_max <= w[1].running_max));
    }

    #[test]
    fn three_chain_confinement() {
        let sys = eigh(&chain(3)).unwrap();
        let grid = time_grid(50.0, 0.1).unwrap();
        let leak = antisymmetric_confinement(&sys, 1, 3, &BTreeSet::from([2]), &grid).unwrap();
        assert!(leak < 1e-12);
    }

    #[test]
    fn projector_parity_on_chains() {
        assert!(eigenprojector_parity(&eigh(&chain(2)).unwrap(), 1, 2).unwrap());
        assert!(eigenprojector_parity(&eigh(&chain(3)).unwrap(), 1, 3).unwrap());
        assert!(!eigenprojector_parity(&eigh(&chain(3)).unwrap(), 1, 2).unwrap());
    }

    #[test]
    fn scan_rejects_bad_arguments() {
        let sys = eigh(&chain(2)).unwrap();
        assert!(envelope_scan(&sys, 1, 2, 0.0, 0.1).is_err());
        assert!(envelope_scan(&sys, 1, 2, 1.0, -0.1).is_err());
        assert!(envelope_scan(&sys, 1, 3, 1.0, 0.1).is_err());
    }

    #[test]
    fn csv_header() {
        let csv = evolution_csv(&[0.0], &[vec![1.0, 0.0]]);
        assert!(csv.starts_with("tau,site1,site2\n"));
    }
}
