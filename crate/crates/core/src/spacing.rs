//! Window counting statistics of a Farey set: the distribution of the
//! number of points falling in a scaled window x + sA, for x either
//! sampled uniformly from a domain (ambient statistic) or ranging over
//! the Farey points themselves (pointwise statistic).
//!
//! The scale is s = (#F)^{-1/n}, which normalizes the expected window
//! count to vol(A)/m^n.

use crate::error::{Error, Result};
use crate::farey::FareySet;
use crate::geom::TestSet;
use crate::rng::{batched_counts, sample_in, RNG_ALGORITHM};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Which of the two spacing statistics a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatKind {
    /// Ambient: window centers sampled uniformly in a domain.
    #[serde(rename = "p")]
    P,
    /// Pointwise: window centers ranging over the Farey points in a
    /// domain; the count includes the center itself whenever 0 ∈ A.
    #[serde(rename = "p0")]
    P0,
}

/// Empirical pmf of window counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingReport {
    pub schema_version: u32,
    pub kind: StatKind,
    pub n: usize,
    pub modulus: u64,
    pub q: i64,
    /// Window scale (#F)^{-1/n}.
    pub scale: f64,
    pub kmax: u32,
    /// k -> frequency for k in 0..=kmax; mass beyond kmax sits in
    /// `overflow`. Frequencies sum to one with the overflow included.
    pub pmf: BTreeMap<u32, f64>,
    pub overflow: f64,
    /// Exact empirical mean of the unbinned counts.
    pub mean: f64,
    pub samples: u64,
    pub seed: Option<u64>,
    pub rng: Option<String>,
}

/// Point-location structure: Farey points bucketed into a uniform torus
/// grid, cells sized to the window so a query scans a handful of cells.
pub struct WindowCounter {
    n: usize,
    m: f64,
    scale: f64,
    window: TestSet,
    wlo: Vec<f64>,
    whi: Vec<f64>,
    cells_per_axis: Vec<usize>,
    cell: Vec<f64>,
    starts: Vec<u32>,
    order: Vec<u32>,
    coords: Vec<f64>,
}

impl WindowCounter {
    pub fn new(set: &FareySet, window: &TestSet, scale: f64) -> Result<Self> {
        let n = set.n();
        if window.dim() != n {
            return Err(Error::invalid(format!(
                "window dimension {} does not match set dimension {n}",
                window.dim()
            )));
        }
        let m = set.system().modulus() as f64;
        let extent_diag = scale * window.diameter();
        if !(extent_diag < m) {
            return Err(Error::WindowTooLarge {
                extent: extent_diag,
                modulus: m,
            });
        }
        let (blo, bhi) = window.bounding_box();
        let wlo: Vec<f64> = blo.iter().map(|v| v * scale).collect();
        let whi: Vec<f64> = bhi.iter().map(|v| v * scale).collect();

        let len = set.len();
        // cells at least as wide as the window where possible, capped so
        // the directory stays O(#points)
        let per_axis_cap = ((4 * len.max(1)) as f64).powf(1.0 / n as f64).ceil() as usize;
        let mut cells_per_axis = Vec::with_capacity(n);
        let mut cell = Vec::with_capacity(n);
        for ax in 0..n {
            let extent = (whi[ax] - wlo[ax]).max(1e-300);
            let ideal = (m / extent).floor() as usize;
            let cpa = ideal.clamp(1, per_axis_cap.max(1));
            cells_per_axis.push(cpa);
            cell.push(m / cpa as f64);
        }

        let ncells: usize = cells_per_axis.iter().product();
        let mut coords = Vec::with_capacity(len * n);
        let mut cell_of = Vec::with_capacity(len);
        for i in 0..len {
            let (p, q) = set.point(i);
            let mut idx = 0usize;
            for ax in 0..n {
                let r = p[ax] as f64 / q as f64;
                coords.push(r);
                let c = ((r / cell[ax]) as usize).min(cells_per_axis[ax] - 1);
                idx = idx * cells_per_axis[ax] + c;
            }
            cell_of.push(idx);
        }
        let mut starts = vec![0u32; ncells + 1];
        for &c in &cell_of {
            starts[c + 1] += 1;
        }
        for i in 0..ncells {
            starts[i + 1] += starts[i];
        }
        let mut cursor = starts.clone();
        let mut order = vec![0u32; len];
        for (i, &c) in cell_of.iter().enumerate() {
            order[cursor[c] as usize] = i as u32;
            cursor[c] += 1;
        }

        Ok(WindowCounter {
            n,
            m,
            scale,
            window: window.clone(),
            wlo,
            whi,
            cells_per_axis,
            cell,
            starts,
            order,
            coords,
        })
    }

    /// Exact number of points of the set inside x + sA on the torus.
    #[allow(clippy::needless_range_loop)] // several parallel arrays share the axis index
    pub fn count_at(&self, x: &[f64]) -> u32 {
        assert_eq!(x.len(), self.n, "query dimension mismatch");
        // cell ranges per axis covering the window's bounding box
        let mut ranges: Vec<Vec<usize>> = Vec::with_capacity(self.n);
        for ax in 0..self.n {
            let cpa = self.cells_per_axis[ax];
            let lo = (x[ax] + self.wlo[ax]) / self.cell[ax];
            let hi = (x[ax] + self.whi[ax]) / self.cell[ax];
            // one extra cell each side absorbs rounding of cell = m/cpa
            let (lo, hi) = (lo.floor() as i64 - 1, hi.floor() as i64 + 1);
            let span = hi - lo + 1;
            let cells: Vec<usize> = if span >= cpa as i64 {
                (0..cpa).collect()
            } else {
                (lo..=hi)
                    .map(|c| c.rem_euclid(cpa as i64) as usize)
                    .collect()
            };
            ranges.push(cells);
        }
        let mut count = 0u32;
        let mut pick = vec![0usize; self.n];
        loop {
            let mut idx = 0usize;
            for ax in 0..self.n {
                idx = idx * self.cells_per_axis[ax] + ranges[ax][pick[ax]];
            }
            for &pi in &self.order[self.starts[idx] as usize..self.starts[idx + 1] as usize] {
                if self.point_in_window(pi as usize, x) {
                    count += 1;
                }
            }
            // advance the multi-range odometer
            let mut ax = self.n;
            loop {
                if ax == 0 {
                    return count;
                }
                ax -= 1;
                pick[ax] += 1;
                if pick[ax] < ranges[ax].len() {
                    break;
                }
                pick[ax] = 0;
            }
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn point_in_window(&self, pi: usize, x: &[f64]) -> bool {
        // unique torus representative of r - x in [wlo, wlo + m) per axis
        let mut v = Vec::with_capacity(self.n);
        for ax in 0..self.n {
            let r = self.coords[pi * self.n + ax];
            let d = (r - x[ax] - self.wlo[ax]).rem_euclid(self.m) + self.wlo[ax];
            v.push(d / self.scale);
        }
        self.window.contains(&v)
    }
}

/// One-off exact window count at a single center.
pub fn count_in_window(set: &FareySet, x: &[f64], scale: f64, window: &TestSet) -> Result<u32> {
    Ok(WindowCounter::new(set, window, scale)?.count_at(x))
}

/// Ambient spacing statistic: Monte Carlo over centers x uniform in the
/// domain, deterministic for a given seed.
pub fn p_stat(
    set: &FareySet,
    domain: &TestSet,
    window: &TestSet,
    kmax: u32,
    samples: u64,
    seed: u64,
) -> Result<SpacingReport> {
    if samples < 1 {
        return Err(Error::invalid("samples must be >= 1"));
    }
    if domain.dim() != set.n() {
        return Err(Error::invalid("domain dimension must match set dimension"));
    }
    let counter = WindowCounter::new(set, window, set.scale())?;
    let (hist, total) = batched_counts(samples, seed, kmax, |rng| {
        let x = sample_in(domain, rng);
        counter.count_at(&x)
    });
    Ok(build_report(
        StatKind::P,
        set,
        kmax,
        &hist,
        total,
        samples,
        Some(seed),
    ))
}

/// Pointwise spacing statistic: exact pass over every Farey point of the
/// set inside the domain. The window count at a point includes the point
/// itself whenever the window contains the origin.
pub fn p0_stat(
    set: &FareySet,
    domain: &TestSet,
    window: &TestSet,
    kmax: u32,
) -> Result<SpacingReport> {
    if domain.dim() != set.n() {
        return Err(Error::invalid("domain dimension must match set dimension"));
    }
    let counter = WindowCounter::new(set, window, set.scale())?;
    let mut hist = vec![0u64; kmax as usize + 2];
    let mut total: u128 = 0;
    let mut samples: u64 = 0;
    for i in 0..set.len() {
        let r = set.coords(i);
        if !domain.contains(&r) {
            continue;
        }
        let k = counter.count_at(&r);
        samples += 1;
        total += k as u128;
        let slot = if k <= kmax {
            k as usize
        } else {
            kmax as usize + 1
        };
        hist[slot] += 1;
    }
    if samples == 0 {
        return Err(Error::EmptyIntersection);
    }
    Ok(build_report(
        StatKind::P0,
        set,
        kmax,
        &hist,
        total,
        samples,
        None,
    ))
}

fn build_report(
    kind: StatKind,
    set: &FareySet,
    kmax: u32,
    hist: &[u64],
    total: u128,
    samples: u64,
    seed: Option<u64>,
) -> SpacingReport {
    let mut pmf = BTreeMap::new();
    for k in 0..=kmax {
        pmf.insert(k, hist[k as usize] as f64 / samples as f64);
    }
    SpacingReport {
        schema_version: crate::report::SCHEMA_VERSION,
        kind,
        n: set.n(),
        modulus: set.system().modulus(),
        q: set.q_max(),
        scale: set.scale(),
        kmax,
        pmf,
        overflow: hist[kmax as usize + 1] as f64 / samples as f64,
        mean: total as f64 / samples as f64,
        samples,
        seed,
        rng: seed.map(|_| RNG_ALGORITHM.to_string()),
    }
}

impl SpacingReport {
    /// Total pmf mass including the overflow slot; one up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.pmf.values().sum::<f64>() + self.overflow
    }
}
