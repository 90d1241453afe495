//! Transfer fidelities from background-subtracted output intensities.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct IntensityRecord {
    /// Site `i` (1-based) at index `i - 1`.
    pub intensities: Vec<f64>,
    pub background: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntensityFidelity {
    pub f_uv: f64,
    pub f_vu: f64,
    /// At least one value fell outside `[0, 1]` and was clamped.
    pub clamped: bool,
}

/// `F_{u,v} = (I_v − I_bg)/I_tot` and `F_{v,u} = (I_u − I_bg)/I_tot`, with
/// `I_tot = Σ_i (I_i − I_bg)`, clamped to `[0, 1]`.
pub fn analyze_intensities(rec: &IntensityRecord, u: usize, v: usize) -> Result<IntensityFidelity> {
    let n = rec.intensities.len();
    for id in [u, v] {
        if id == 0 || id > n {
            return Err(Error::VertexOutOfRange { id, n });
        }
    }
    if rec.intensities.iter().chain([&rec.background]).any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidArgument("intensities and background must be finite and non-negative".into()));
    }
    let total: f64 = rec.intensities.iter().map(|i| i - rec.background).sum();
    if total <= 0.0 {
        return Err(Error::NoSignal(total));
    }
    let raw_uv = (rec.intensities[v - 1] - rec.background) / total;
    let raw_vu = (rec.intensities[u - 1] - rec.background) / total;
    let (f_uv, f_vu) = (raw_uv.clamp(0.0, 1.0), raw_vu.clamp(0.0, 1.0));
    Ok(IntensityFidelity { f_uv, f_vu, clamped: f_uv != raw_uv || f_vu != raw_vu })
}

/// Parses `site,intensity` rows under a single header row. Sites must cover `1..=n`
/// exactly once, in any order.
pub fn parse_intensity_csv(text: &str, background: f64) -> Result<IntensityRecord> {
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::InvalidArgument(format!("intensity CSV line {}: `{line}`", lineno + 1));
        let (site, value) = line.split_once(',').ok_or_else(bad)?;
        let site: usize = site.trim().parse().map_err(|_| bad())?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        rows.push((site, value));
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidArgument("intensity CSV has no data rows".into()));
    }
    let mut intensities = vec![None; n];
    for (site, value) in rows {
        if site == 0 || site > n {
            return Err(Error::VertexOutOfRange { id: site, n });
        }
        if intensities[site - 1].replace(value).is_some() {
            return Err(Error::InvalidArgument(format!("site {site} listed twice")));
        }
    }
    Ok(IntensityRecord { intensities: intensities.into_iter().map(Option::unwrap).collect(), background })
}
